//! Convex bodies and the elementary functionals on them.

mod affine;
mod body;
pub mod hull;
pub mod lp;
mod polytope;
mod subspace;

pub use affine::AffineMap;
pub use body::{Ball, ConvexBody, Ellipsoid, Symmetrized};
pub use polytope::{Halfspace, Polytope};
pub use subspace::Subspace;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Dimensions supported by the exact (hull based) paths.
pub const MAX_DIM: usize = 6;

/// Numerical tolerances. Geometric predicates use `geometric`, comparisons of
/// computed functionals use `functional`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub geometric: f64,
    pub functional: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geometric: 1e-10,
            functional: 1e-8,
        }
    }
}

pub fn vector(coords: &[f64]) -> Vector {
    DVector::from_column_slice(coords)
}

pub(crate) fn check_finite(v: &Vector) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain("non-finite coordinate".into()))
    }
}

/// Gram–Schmidt with re-orthogonalization. Vectors whose residual falls below
/// `tol` (relative to their original norm) are dropped.
pub fn orthonormalize(vectors: &[Vector], tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&r);
                r.axpy(-c, q, 1.0);
            }
        }
        let n = r.norm();
        if n > tol * scale {
            out.push(r / n);
        }
    }
    out
}

/// Orthonormal basis of the orthogonal complement of the span of `basis` in ℝ^d.
/// Completion picks, at each step, the coordinate axis with the largest residual.
pub fn complement_basis(basis: &[Vector], d: usize) -> Vec<Vector> {
    let mut all = orthonormalize(basis, 1e-10);
    let k = all.len();
    while all.len() < d {
        let mut best: Option<Vector> = None;
        let mut best_norm = 0.0;
        for i in 0..d {
            let mut r = DVector::zeros(d);
            r[i] = 1.0;
            for _ in 0..2 {
                for b in &all {
                    let c = b.dot(&r);
                    r.axpy(-c, b, 1.0);
                }
            }
            let n = r.norm();
            if n > best_norm {
                best_norm = n;
                best = Some(r / n);
            }
        }
        match best {
            Some(v) if best_norm > 1e-8 => all.push(v),
            _ => break,
        }
    }
    all.split_off(k)
}

/// Normal of the hyperplane through `d` points of ℝ^d (unnormalized), via
/// cofactor expansion of the difference matrix. Returns the zero vector when the
/// points are affinely dependent.
pub fn hyperplane_normal(points: &[&Vector]) -> Vector {
    let d = points[0].len();
    debug_assert_eq!(points.len(), d);
    if d == 1 {
        return DVector::from_element(1, 1.0);
    }
    let rows = d - 1;
    let mut diff = DMatrix::zeros(rows, d);
    for i in 0..rows {
        for j in 0..d {
            diff[(i, j)] = points[i + 1][j] - points[0][j];
        }
    }
    let mut n = DVector::zeros(d);
    for j in 0..d {
        let minor = diff.clone().remove_column(j);
        let det = minor.determinant();
        n[j] = if j % 2 == 0 { det } else { -det };
    }
    n
}

/// Rank of a set of vectors by SVD with relative tolerance.
pub fn rank(vectors: &[Vector], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let d = vectors[0].len();
    let m = DMatrix::from_fn(vectors.len(), d, |i, j| vectors[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// Uniform direction on S^{d−1} by normalized Gaussians.
pub fn random_direction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vector {
    loop {
        let v = DVector::from_fn(d, |_, _| StandardNormal.sample(rng));
        let n: f64 = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Haar-random orthogonal matrix (QR of a Gaussian matrix with sign fix).
pub fn random_rotation<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let g: Matrix = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            for i in 0..d {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// A deterministic, roughly uniform set of `n` unit directions in ℝ^d.
/// In the plane the directions are equally spaced.
pub fn sphere_directions(d: usize, n: usize) -> Vec<Vector> {
    if d == 1 {
        return vec![vector(&[1.0]), vector(&[-1.0])];
    }
    if d == 2 {
        return (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                vector(&[t.cos(), t.sin()])
            })
            .collect();
    }
    let mut rng = crate::rng::rng(0x5eed_d1ec_u64 ^ d as u64);
    let mut dirs: Vec<Vector> = Vec::with_capacity(n + 2 * d);
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut e = DVector::zeros(d);
            e[i] = s;
            dirs.push(e);
        }
    }
    while dirs.len() < n.max(2 * d) {
        dirs.push(random_direction(d, &mut rng));
    }
    dirs
}

/// Binomial coefficient as a float (exact for the small arguments used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Symmetric positive-definite check via Cholesky, with symmetry tolerance.
pub(crate) fn check_spd(m: &Matrix, sym_tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Domain("shape matrix is not square".into()));
    }
    let scale = m.amax().max(1.0);
    for i in 0..m.nrows() {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > sym_tol * scale {
                return Err(Error::Domain("shape matrix is not symmetric".into()));
            }
        }
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("non-finite shape matrix".into()));
    }
    if m.clone().cholesky().is_none() {
        return Err(Error::Domain("shape matrix is not positive definite".into()));
    }
    Ok(())
}

pub(crate) fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_orthonormal() {
        let b = orthonormalize(&[vector(&[1.0, 1.0, 0.0])], 1e-12);
        let c = complement_basis(&b, 3);
        assert_eq!(c.len(), 2);
        for v in &c {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!(v.dot(&b[0]).abs() < 1e-12);
        }
        assert!(c[0].dot(&c[1]).abs() < 1e-12);
    }

    #[test]
    fn normal_of_plane() {
        let p = [vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0]), vector(&[0.0, 0.0, 1.0])];
        let n = hyperplane_normal(&[&p[0], &p[1], &p[2]]);
        let n = n.normalize();
        let expect = vector(&[1.0, 1.0, 1.0]).normalize();
        assert!((n.dot(&expect).abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(3, 0), 1.0);
    }
}
