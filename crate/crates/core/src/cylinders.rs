//! Cylinders `C = H + B`, their cross-sectional volume relative to a body,
//! cover falsification and the chord-density measure on the unit ball.

use nalgebra::SymmetricEigen;
use rand::RngExt;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{
    binomial, random_direction, sphere_directions, AffineMap, ConvexBody, Ellipsoid, Matrix,
    Polytope, Subspace, Vector,
};
use crate::rng::{self, MC_SHARDS};
use crate::volume::{unit_ball_volume, volume};

/// `C = H + B`: `direction` is the k-dimensional subspace H, `frame` an
/// orthonormal basis of E = H⊥ and `base` a body in the (d−k) coordinates of
/// that basis.
#[derive(Clone, Debug)]
pub struct Cylinder {
    direction: Subspace,
    frame: Subspace,
    base: ConvexBody,
}

impl Cylinder {
    pub fn new(direction: Subspace, frame: Subspace, base: ConvexBody) -> Result<Self> {
        let d = direction.ambient_dim();
        check_dim(d, frame.ambient_dim())?;
        if direction.dim() >= d {
            return Err(Error::Domain("cylinder direction must be a proper subspace".into()));
        }
        if direction.dim() + frame.dim() != d {
            return Err(Error::Domain("frame is not a complement of the direction".into()));
        }
        for h in direction.basis() {
            for e in frame.basis() {
                if h.dot(e).abs() > 1e-10 {
                    return Err(Error::Domain("frame is not orthogonal to the direction".into()));
                }
            }
        }
        check_dim(frame.dim(), base.dim())?;
        Ok(Cylinder {
            direction,
            frame,
            base,
        })
    }

    /// Cylinder with the canonical complement frame of `direction`.
    pub fn with_base(direction: Subspace, base: ConvexBody) -> Result<Self> {
        let frame = direction
            .complement()
            .ok_or_else(|| Error::Domain("cylinder direction must be a proper subspace".into()))?;
        Self::new(direction, frame, base)
    }

    /// `H + P_E K`, the smallest cylinder with direction H containing `body`.
    pub fn enclosing(body: &ConvexBody, direction: Subspace) -> Result<Self> {
        let frame = direction
            .complement()
            .ok_or_else(|| Error::Domain("cylinder direction must be a proper subspace".into()))?;
        let base = body.project(&frame)?;
        Self::new(direction, frame, base)
    }

    /// `p + H + λK`, the inflated flat used in critical-inflation arguments.
    pub fn around_flat(body: &ConvexBody, point: &Vector, direction: Subspace, lambda: f64) -> Result<Self> {
        let frame = direction
            .complement()
            .ok_or_else(|| Error::Domain("cylinder direction must be a proper subspace".into()))?;
        let base = body.project(&frame)?.scale(lambda)?.translate(&frame.coords(point))?;
        Self::new(direction, frame, base)
    }

    pub fn dim(&self) -> usize {
        self.direction.ambient_dim()
    }

    /// k = dim H.
    pub fn codim(&self) -> usize {
        self.direction.dim()
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn frame(&self) -> &Subspace {
        &self.frame
    }

    pub fn base(&self) -> &ConvexBody {
        &self.base
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.base.contains(&self.frame.coords(x), tol)
    }

    /// Lower bound on the distance from `x` to the cylinder; nonpositive inside.
    pub fn exclusion(&self, x: &Vector) -> f64 {
        outside_distance(&self.base, &self.frame.coords(x))
    }

    /// `T C`, re-expressed with H' = M H and the complement frame of H'. The
    /// base is the exact image P_{E'}(M E y + b) of the old base.
    pub fn affine_image(&self, t: &AffineMap) -> Result<Self> {
        check_dim(self.dim(), t.dim())?;
        let m = t.matrix();
        let direction = self.direction.image(m)?;
        let frame = direction
            .complement()
            .ok_or_else(|| Error::Internal("image direction is not proper".into()))?;
        let ef = frame.matrix().transpose();
        let l = &ef * m * self.frame.matrix();
        let shift = &ef * t.translation();
        let base = self.base.affine_image(&AffineMap::new(l, shift)?)?;
        Self::new(direction, frame, base)
    }
}

fn outside_distance(body: &ConvexBody, y: &Vector) -> f64 {
    match body {
        ConvexBody::VPolytope(p) => p
            .facets()
            .iter()
            .map(|h| -h.slack(y))
            .fold(f64::NEG_INFINITY, f64::max),
        ConvexBody::Ball(b) => (y - b.center()).norm() - b.radius(),
        ConvexBody::Ellipsoid(e) => {
            let z = y - e.center();
            let q = z.dot(&(e.shape() * &z)).sqrt();
            let lmax = SymmetricEigen::new(e.shape().clone())
                .eigenvalues
                .iter()
                .cloned()
                .fold(0.0, f64::max);
            (q - 1.0) / lmax.sqrt()
        }
    }
}

/// crv_K(C) = vol_{d−k}(B) / vol_{d−k}(P_E K).
pub fn crv(body: &ConvexBody, c: &Cylinder) -> Result<f64> {
    check_dim(body.dim(), c.dim())?;
    let b = volume(&c.base);
    if !(b > 0.0) {
        return Err(Error::Domain("cylinder base has no volume".into()));
    }
    Ok(b / volume(&body.project(&c.frame)?))
}

/// crv through the section by a complementary subspace `h` (dim h = d − k,
/// h ∩ H = 0): vol(C ∩ h) / vol(P K), where P projects onto h along H.
pub fn crv_via_section(body: &ConvexBody, c: &Cylinder, h: &Subspace) -> Result<f64> {
    let d = body.dim();
    check_dim(d, h.ambient_dim())?;
    if h.dim() != c.frame.dim() {
        return Err(Error::Domain("section subspace has the wrong dimension".into()));
    }
    let g = h.matrix();
    let u = c.direction.matrix();
    let n = h
        .complement()
        .ok_or_else(|| Error::Domain("section subspace must be proper".into()))?
        .matrix();
    let ntu = n.transpose() * &u;
    let ntu_inv = ntu
        .try_inverse()
        .ok_or_else(|| Error::Domain("section subspace contains a cylinder direction".into()))?;
    let oblique = Matrix::identity(d, d) - &u * ntu_inv * n.transpose();
    let pk = body.linear_image(&(g.transpose() * oblique))?;

    // C ∩ h in h-coordinates is {y : L y ∈ B} with L = Eᵀ G.
    let l = c.frame.matrix().transpose() * &g;
    let section = match &c.base {
        ConvexBody::VPolytope(p) => {
            let hs: Vec<(Vector, f64)> = p
                .facets()
                .iter()
                .map(|f| (l.transpose() * &f.normal, f.offset))
                .collect();
            let linv = l
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Domain("degenerate section".into()))?;
            let interior = &linv * p.interior_point();
            ConvexBody::VPolytope(Polytope::from_halfspaces(&hs, Some(&interior))?)
        }
        other => {
            let e = match other {
                ConvexBody::Ellipsoid(e) => e.clone(),
                ConvexBody::Ball(b) => b.to_ellipsoid(),
                ConvexBody::VPolytope(_) => unreachable!(),
            };
            let linv = l
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Domain("degenerate section".into()))?;
            let shape = l.transpose() * e.shape() * &l;
            ConvexBody::Ellipsoid(Ellipsoid::new(&linv * e.center(), (&shape + shape.transpose()) * 0.5)?)
        }
    };
    Ok(volume(&section) / volume(&pk))
}

/// Both sides of crv_K(C) = crv_{TK}(TC).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub before: f64,
    pub after: f64,
    pub pass: bool,
}

pub fn crv_invariance_check(body: &ConvexBody, c: &Cylinder, t: &AffineMap) -> Result<InvarianceReport> {
    let before = crv(body, c)?;
    let after = crv(&body.affine_image(t)?, &c.affine_image(t)?)?;
    Ok(InvarianceReport {
        before,
        after,
        pass: (before - after).abs() <= 1e-8 * before,
    })
}

/// Outcome of a falsification run. `covered` means no counterexample was
/// found among the tested points; it is not a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverCheckReport {
    pub covered: bool,
    pub witness: Option<Vec<f64>>,
    pub samples_tested: u64,
    pub margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverCheckOptions {
    pub grid_res: usize,
    pub n_random: usize,
    pub seed: u64,
}

impl CoverCheckOptions {
    /// Grid resolution chosen so that the grid has at most about 10⁴ points.
    pub fn for_dim(d: usize) -> Self {
        let grid_res = match d {
            1 => 1000,
            2 => 100,
            3 => 21,
            4 => 10,
            _ => 6,
        };
        CoverCheckOptions {
            grid_res,
            n_random: 2000,
            seed: 0,
        }
    }
}

/// Test points of a body: vertices (or boundary points in a fixed direction
/// set for curved bodies), the bounding-box grid filtered to K, then seeded
/// uniform samples of K.
pub fn test_points(body: &ConvexBody, grid_res: usize, n_random: usize, seed: u64) -> Vec<Vector> {
    let d = body.dim();
    let mut pts: Vec<Vector> = match body {
        ConvexBody::VPolytope(p) => p.vertices().to_vec(),
        _ => {
            let c = body.interior_point();
            sphere_directions(d, 20 * d)
                .into_iter()
                .filter_map(|u| body.line_range(&c, &u).map(|(_, hi)| &c + u * hi))
                .collect()
        }
    };
    let (lo, hi) = body.bounding_box();
    let total = grid_res.saturating_pow(d as u32);
    for idx in 0..total {
        let mut rem = idx;
        let x = Vector::from_fn(d, |i, _| {
            let j = rem % grid_res;
            rem /= grid_res;
            lo[i] + (hi[i] - lo[i]) * j as f64 / (grid_res - 1) as f64
        });
        if body.contains(&x, 0.0) {
            pts.push(x);
        }
    }
    let mut r = rng::rng(seed);
    let mut accepted = 0;
    let mut attempts = 0usize;
    while accepted < n_random && attempts < 1000 * n_random.max(1) {
        attempts += 1;
        let x = Vector::from_fn(d, |i, _| lo[i] + (hi[i] - lo[i]) * r.random::<f64>());
        if body.contains(&x, 0.0) {
            pts.push(x);
            accepted += 1;
        }
    }
    pts
}

/// Falsifies `K ⊆ ∪ C_i`: a test point is uncovered when it lies outside every
/// cylinder by more than the margin (1e-9 relative to the body's extent).
pub fn check_cover(
    body: &ConvexBody,
    cylinders: &[Cylinder],
    grid_res: usize,
    n_random: usize,
    seed: u64,
) -> Result<CoverCheckReport> {
    if grid_res < 2 {
        return Err(Error::Domain("grid resolution must be at least 2".into()));
    }
    for c in cylinders {
        check_dim(body.dim(), c.dim())?;
    }
    let (lo, hi) = body.bounding_box();
    let margin = 1e-9 * (&hi - &lo).amax().max(1.0);
    let pts = test_points(body, grid_res, n_random, seed);
    let witness = pts
        .par_iter()
        .find_first(|p| cylinders.iter().all(|c| c.exclusion(p) > margin))
        .map(|p| p.iter().cloned().collect());
    Ok(CoverCheckReport {
        covered: witness.is_none(),
        witness,
        samples_tested: pts.len() as u64,
        margin,
    })
}

pub fn check_cover_with(body: &ConvexBody, cylinders: &[Cylinder], opts: &CoverCheckOptions) -> Result<CoverCheckReport> {
    check_cover(body, cylinders, opts.grid_res, opts.n_random, opts.seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrvSumReport {
    pub sum_crv: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Lower bound for Σ crv over a cover: 1 for ellipsoids covered by cylinders
/// over lines, otherwise min over cylinders of 1/binom(d, k).
pub fn crv_sum_lower_bound(body: &ConvexBody, cylinders: &[Cylinder]) -> f64 {
    let d = body.dim();
    if body.is_ellipsoidal() && cylinders.iter().all(|c| c.codim() == 1) {
        return 1.0;
    }
    cylinders
        .iter()
        .map(|c| 1.0 / binomial(d, c.codim()))
        .fold(1.0, f64::min)
}

pub fn crv_sum(body: &ConvexBody, cylinders: &[Cylinder]) -> Result<f64> {
    cylinders.iter().map(|c| crv(body, c)).sum()
}

/// Σ crv against its lower bound; the cover is falsified first and an
/// uncovered instance is an error carrying the witness.
pub fn crv_sum_bound_check(body: &ConvexBody, cylinders: &[Cylinder], opts: &CoverCheckOptions) -> Result<CrvSumReport> {
    require_cover(body, cylinders, opts)?;
    let sum_crv = crv_sum(body, cylinders)?;
    let bound = crv_sum_lower_bound(body, cylinders);
    Ok(CrvSumReport {
        sum_crv,
        bound,
        pass: sum_crv >= bound - 1e-9,
    })
}

fn require_cover(body: &ConvexBody, cylinders: &[Cylinder], opts: &CoverCheckOptions) -> Result<()> {
    let report = check_cover_with(body, cylinders, opts)?;
    match report.witness {
        None => Ok(()),
        Some(w) => Err(Error::Uncovered(w)),
    }
}

/// Σ crv ≥ dK^{−(d−1)} with `dk_upper` an upper bound on the Banach–Mazur
/// distance to the ball (so the asserted bound is weaker than the true one).
pub fn distance_bound_check(
    body: &ConvexBody,
    cylinders: &[Cylinder],
    dk_upper: f64,
    opts: &CoverCheckOptions,
) -> Result<CrvSumReport> {
    if !(dk_upper >= 1.0) {
        return Err(Error::Domain("distance bound must be at least 1".into()));
    }
    require_cover(body, cylinders, opts)?;
    let sum_crv = crv_sum(body, cylinders)?;
    let bound = dk_upper.powi(-(body.dim() as i32 - 1));
    Ok(CrvSumReport {
        sum_crv,
        bound,
        pass: sum_crv >= bound - 1e-9,
    })
}

/// p(x) = 1/√(1 − |x|²) inside the unit ball, 0 outside.
pub fn bang_density(x: &Vector) -> f64 {
    let s = 1.0 - x.norm_squared();
    if s > 0.0 {
        1.0 / s.sqrt()
    } else {
        0.0
    }
}

/// Nodes and weights of n-point Gauss–Legendre quadrature on [−1, 1]
/// (Golub–Welsch).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jac = Matrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            let k = i.max(j) as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], 2.0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

const CHORD_NODES: usize = 64;

/// ∫ p along the line `z + ℝu` (u a unit vector, z ⊥ u). With s = a sin θ,
/// a = √(1 − |z|²), the endpoint singularity cancels against ds = a cos θ dθ.
pub fn bang_line_integral(z: &Vector, u: &Vector) -> Result<f64> {
    check_dim(z.len(), u.len())?;
    let a2 = 1.0 - z.norm_squared();
    if !(a2 > 0.0) {
        return Err(Error::Domain("line does not meet the open unit ball".into()));
    }
    let a = a2.sqrt();
    let (nodes, weights) = gauss_legendre(CHORD_NODES);
    let half = std::f64::consts::FRAC_PI_2;
    let mut acc = 0.0;
    for (t, w) in nodes.iter().zip(&weights) {
        let theta = half * t;
        let x = z + u * (a * theta.sin());
        acc += w * bang_density(&x) * a * theta.cos();
    }
    Ok(acc * half)
}

/// ∫ p over the chord {(z, s)} of the unit ball in ℝ^d, where `z` has d − 1
/// coordinates in E = e_d⊥ and the line is ℝ e_d.
pub fn bang_chord_integral(z: &Vector, d: usize) -> Result<f64> {
    if d < 2 || z.len() != d - 1 {
        return Err(Error::DimensionMismatch {
            expected: d.saturating_sub(1),
            got: z.len(),
        });
    }
    let mut zz = Vector::zeros(d);
    zz.rows_mut(0, d - 1).copy_from(z);
    let mut u = Vector::zeros(d);
    u[d - 1] = 1.0;
    bang_line_integral(&zz, &u)
}

/// Regions whose p-measure is estimated; both are intersected with the ball.
#[derive(Clone, Copy, Debug)]
pub enum BangRegion<'a> {
    UnitBall(usize),
    Body(&'a ConvexBody),
    Cylinder(&'a Cylinder),
}

impl BangRegion<'_> {
    fn dim(&self) -> usize {
        match self {
            BangRegion::UnitBall(d) => *d,
            BangRegion::Body(b) => b.dim(),
            BangRegion::Cylinder(c) => c.dim(),
        }
    }

    fn contains(&self, x: &Vector) -> bool {
        match self {
            BangRegion::UnitBall(_) => true,
            BangRegion::Body(b) => b.contains(x, 0.0),
            BangRegion::Cylinder(c) => c.contains(x, 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub ci_halfwidth: f64,
    pub samples: u64,
}

/// B(n, 1/2) through B(n + 1, 1/2) = B(n, 1/2) · n/(n + 1/2).
fn beta_half(n: usize) -> f64 {
    (1..n).fold(2.0, |b, k| b * k as f64 / (k as f64 + 0.5))
}

/// μ(region ∩ B₂^d) with dμ = p dx. Samples x = r θ with θ uniform on the
/// sphere and r ~ Beta(d, 1/2); the weight p/q = S_{d−1} B(d, 1/2)/√(1 + r)
/// is bounded, so the estimator has finite variance (uniform sampling of the
/// ball does not). The half-width is 3σ.
pub fn bang_measure_mc(region: BangRegion<'_>, n: usize, seed: u64) -> Result<McEstimate> {
    let d = region.dim();
    if d < 2 {
        return Err(Error::Domain("dimension must be at least 2".into()));
    }
    if n < 2 {
        return Err(Error::Domain("at least two samples required".into()));
    }
    let surface = d as f64 * unit_ball_volume(d);
    let scale = surface * beta_half(d);
    let radial = Beta::new(d as f64, 0.5).map_err(|e| Error::Internal(e.to_string()))?;
    let sizes = rng::shard_sizes(n, MC_SHARDS);
    let sums: Vec<(f64, f64)> = sizes
        .par_iter()
        .enumerate()
        .map(|(i, &m)| {
            let mut r = rng::rng(rng::split(seed, i as u64));
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..m {
                let rad: f64 = radial.sample(&mut r);
                let x = random_direction(d, &mut r) * rad;
                if region.contains(&x) {
                    let w = scale / (1.0 + rad).sqrt();
                    s1 += w;
                    s2 += w * w;
                }
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let nf = n as f64;
    let mean = s1 / nf;
    let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
    Ok(McEstimate {
        value: mean,
        ci_halfwidth: 3.0 * (var / nf).sqrt(),
        samples: n as u64,
    })
}

/// μ(B₂^d) = π v_{d−1}.
pub fn bang_ball_measure(d: usize) -> f64 {
    std::f64::consts::PI * unit_ball_volume(d - 1)
}

/// Random unit vectors as a k-dimensional direction subspace.
pub fn random_subspace<R: rand::Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Subspace {
    loop {
        let vs: Vec<Vector> = (0..k).map(|_| random_direction(d, rng)).collect();
        if let Ok(s) = Subspace::span(d, &vs) {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;
    use std::f64::consts::PI;

    fn z_axis() -> Subspace {
        Subspace::coordinate(3, &[2]).unwrap()
    }

    #[test]
    fn crv_of_disk_cylinder() {
        let k = ConvexBody::unit_ball(3);
        let c = Cylinder::with_base(z_axis(), ConvexBody::ball(Vector::zeros(2), 0.5).unwrap()).unwrap();
        assert!((crv(&k, &c).unwrap() - 0.25).abs() < 1e-12);
        let canon = Cylinder::enclosing(&k, z_axis()).unwrap();
        assert!((crv(&k, &canon).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crv_of_strip() {
        let sq = ConvexBody::cube(2, -1.0, 1.0).unwrap();
        let h = Subspace::coordinate(2, &[1]).unwrap();
        let w = 0.6;
        let base = ConvexBody::vpolytope(&[vector(&[0.0]), vector(&[w])]).unwrap();
        let c = Cylinder::with_base(h, base).unwrap();
        assert!((crv(&sq, &c).unwrap() - w / 2.0).abs() < 1e-12);
    }

    #[test]
    fn oblique_sections_agree() {
        let mut r = rng::rng(5);
        let pts: Vec<Vector> = (0..12).map(|_| random_direction(3, &mut r)).collect();
        let k = ConvexBody::vpolytope(&pts).unwrap();
        let h = random_subspace(3, 1, &mut r);
        let c = Cylinder::enclosing(&k, h.clone()).unwrap();
        let shrunk = Cylinder::with_base(h, c.base().scale(0.7).unwrap()).unwrap();
        for _ in 0..5 {
            let s = random_subspace(3, 2, &mut r);
            let a = crv(&k, &shrunk).unwrap();
            let b = crv_via_section(&k, &shrunk, &s).unwrap();
            assert!((a - b).abs() < 1e-8 * a, "{a} vs {b}");
        }
        let ball = ConvexBody::unit_ball(3);
        let c = Cylinder::with_base(z_axis(), ConvexBody::ball(vector(&[0.1, 0.0]), 0.5).unwrap()).unwrap();
        let s = Subspace::span(3, &[vector(&[1.0, 0.0, 0.5]), vector(&[0.0, 1.0, -0.3])]).unwrap();
        let b = crv_via_section(&ball, &c, &s).unwrap();
        assert!((b - 0.25).abs() < 1e-10);
    }

    #[test]
    fn invariance_under_maps() {
        let k = ConvexBody::unit_ball(3);
        let c = Cylinder::with_base(z_axis(), ConvexBody::ball(vector(&[0.2, 0.1]), 0.5).unwrap()).unwrap();
        let id = AffineMap::identity(3);
        let rep = crv_invariance_check(&k, &c, &id).unwrap();
        assert_eq!(rep.before, rep.after);
        let shear = AffineMap::new(
            Matrix::from_row_slice(3, 3, &[1.0, 0.7, 0.2, 0.0, 1.5, 0.0, 0.3, 0.0, 0.8]),
            vector(&[1.0, -2.0, 0.5]),
        )
        .unwrap();
        let rep = crv_invariance_check(&k, &c, &shear).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn cover_checks() {
        let k = ConvexBody::unit_ball(2);
        let h = Subspace::coordinate(2, &[1]).unwrap();
        let canon = Cylinder::enclosing(&k, h.clone()).unwrap();
        let rep = check_cover(&k, &[canon.clone()], 30, 500, 1).unwrap();
        assert!(rep.covered);
        let half = Cylinder::with_base(h, canon.base().scale(0.5).unwrap()).unwrap();
        let rep = check_cover(&k, &[half.clone()], 30, 500, 1).unwrap();
        assert!(!rep.covered);
        let w = Vector::from_vec(rep.witness.unwrap());
        assert!(k.contains(&w, 1e-12));
        assert!(!half.contains(&w, 1e-9));
        let sq = ConvexBody::cube(2, -1.0, 1.0).unwrap();
        let rep = check_cover(&sq, &[], 5, 0, 1).unwrap();
        assert!(!rep.covered);
        assert_eq!(rep.witness.unwrap(), sq.as_polytope().unwrap().vertices()[0].as_slice());
    }

    #[test]
    fn crv_sum_reports() {
        let opts = CoverCheckOptions::for_dim(2);
        let k = ConvexBody::unit_ball(2);
        let h = Subspace::coordinate(2, &[0]).unwrap();
        let canon = Cylinder::enclosing(&k, h).unwrap();
        let rep = crv_sum_bound_check(&k, &[canon.clone()], &opts).unwrap();
        assert!((rep.sum_crv - 1.0).abs() < 1e-12 && rep.bound == 1.0 && rep.pass);
        let rep = distance_bound_check(&k, &[canon.clone()], 1.0, &opts).unwrap();
        assert!(rep.pass && rep.bound == 1.0);
        let half = Cylinder::with_base(canon.direction().clone(), canon.base().scale(0.5).unwrap()).unwrap();
        assert!(matches!(
            crv_sum_bound_check(&k, &[half], &opts),
            Err(Error::Uncovered(_))
        ));
        let cube = ConvexBody::cube(3, -1.0, 1.0).unwrap();
        let c = Cylinder::enclosing(&cube, z_axis()).unwrap();
        let rep = distance_bound_check(&cube, &[c], 3f64.sqrt(), &CoverCheckOptions::for_dim(3)).unwrap();
        assert!((rep.bound - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(64);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((m - 2.0 / 11.0).abs() < 1e-13);
    }

    #[test]
    fn chord_integrals() {
        assert!((bang_chord_integral(&vector(&[0.0]), 2).unwrap() - PI).abs() < 1e-9);
        assert!((bang_chord_integral(&vector(&[0.9, 0.0]), 3).unwrap() - PI).abs() < 1e-9);
        assert!(bang_chord_integral(&vector(&[1.0, 0.0]), 3).is_err());
        // off-axis line in ℝ⁴
        let u = vector(&[0.5, 0.5, 0.5, 0.5]);
        let z = vector(&[0.3, -0.3, 0.2, -0.2]);
        assert!((bang_line_integral(&z, &u).unwrap() - PI).abs() < 1e-9);
    }

    #[test]
    fn bang_measures() {
        let est = bang_measure_mc(BangRegion::UnitBall(2), 200_000, 3).unwrap();
        assert!((est.value - 2.0 * PI).abs() <= est.ci_halfwidth, "{est:?}");
        let c = Cylinder::with_base(z_axis(), ConvexBody::ball(Vector::zeros(2), 0.5).unwrap()).unwrap();
        let est = bang_measure_mc(BangRegion::Cylinder(&c), 200_000, 4).unwrap();
        assert!((est.value - PI * PI / 4.0).abs() <= est.ci_halfwidth, "{est:?}");
        assert!((bang_ball_measure(3) - PI * PI).abs() < 1e-12);
    }
}
