//! Volumes, parallel sections and the section/projection inequalities.

use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::lp::chebyshev_center;
use crate::geometry::{binomial, sphere_directions, ConvexBody, Matrix, Polytope, Subspace, Vector};
use crate::rng::{self, MC_SHARDS};

/// Volume of the Euclidean unit ball in ℝ^n, v_n = π^{n/2}/Γ(n/2 + 1),
/// evaluated through v_n = 2π/n · v_{n−2}.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => std::f64::consts::TAU / n as f64 * unit_ball_volume(n - 2),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeMethod {
    Exact,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeResult {
    pub value: f64,
    pub method: VolumeMethod,
    pub ci_halfwidth: f64,
    pub samples: u64,
}

pub fn volume_exact(body: &ConvexBody) -> VolumeResult {
    VolumeResult {
        value: volume(body),
        method: VolumeMethod::Exact,
        ci_halfwidth: 0.0,
        samples: 0,
    }
}

/// Exact d-volume.
pub fn volume(body: &ConvexBody) -> f64 {
    match body {
        ConvexBody::VPolytope(p) => p.volume(),
        ConvexBody::Ellipsoid(e) => {
            unit_ball_volume(body.dim()) / e.shape().determinant().sqrt()
        }
        ConvexBody::Ball(b) => unit_ball_volume(body.dim()) * b.radius().powi(body.dim() as i32),
    }
}

/// Hit-or-miss estimate in the bounding box. The half-width is three binomial
/// standard deviations times the box volume. Shard `i` draws from
/// `split(seed, i)`, so the value depends only on `(seed, n_samples)`.
pub fn volume_mc(body: &ConvexBody, n_samples: usize, seed: u64) -> Result<VolumeResult> {
    if n_samples < 1000 {
        return Err(Error::Domain("at least 1000 samples required".into()));
    }
    let (lo, hi) = body.bounding_box();
    let box_vol: f64 = (&hi - &lo).iter().product();
    let sizes = rng::shard_sizes(n_samples, MC_SHARDS);
    let hits: u64 = sizes
        .par_iter()
        .enumerate()
        .map(|(i, &n)| {
            let mut r = rng::rng(rng::split(seed, i as u64));
            let mut x = Vector::zeros(lo.len());
            let mut count = 0u64;
            for _ in 0..n {
                for j in 0..x.len() {
                    x[j] = lo[j] + (hi[j] - lo[j]) * r.random::<f64>();
                }
                if body.contains(&x, 0.0) {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let p = hits as f64 / n_samples as f64;
    Ok(VolumeResult {
        value: p * box_vol,
        method: VolumeMethod::MonteCarlo,
        ci_halfwidth: 3.0 * (p * (1.0 - p) / n_samples as f64).sqrt() * box_vol,
        samples: n_samples as u64,
    })
}

/// Slicing of a body by the flats `E t + E⊥`, `t ∈ ℝ^k`.
pub struct Slicer<'a> {
    body: &'a ConvexBody,
    e: &'a Subspace,
    f: Subspace,
    // facet rows restricted to E⊥ coordinates: (Fᵀa, a, b)
    rows: Vec<(Vector, Vector, f64)>,
    radius: f64,
}

impl<'a> Slicer<'a> {
    pub fn new(body: &'a ConvexBody, e: &'a Subspace) -> Result<Self> {
        crate::error::check_dim(body.dim(), e.ambient_dim())?;
        let f = e
            .complement()
            .ok_or_else(|| Error::Domain("subspace must be proper".into()))?;
        let (rows, radius) = match body {
            ConvexBody::VPolytope(p) => {
                let rows = p
                    .facets()
                    .iter()
                    .map(|h| (f.coords(&h.normal), h.normal.clone(), h.offset))
                    .collect();
                let radius = p.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max);
                (rows, radius)
            }
            _ => (Vec::new(), 0.0),
        };
        Ok(Slicer {
            body,
            e,
            f,
            rows,
            radius,
        })
    }

    pub fn section_dim(&self) -> usize {
        self.f.dim()
    }

    /// vol_{d−k}(K ∩ (E t + E⊥)).
    pub fn volume(&self, t: &Vector) -> Result<f64> {
        crate::error::check_dim(self.e.dim(), t.len())?;
        let x0 = self.e.embed(t);
        let m = self.f.dim();
        if m == 1 {
            let u = &self.f.basis()[0];
            return Ok(self
                .body
                .line_range(&x0, u)
                .map(|(lo, hi)| (hi - lo).max(0.0))
                .unwrap_or(0.0));
        }
        match self.body {
            ConvexBody::VPolytope(_) => {
                let rows: Vec<(Vector, f64)> = self
                    .rows
                    .iter()
                    .map(|(fa, a, b)| (fa.clone(), b - a.dot(&x0)))
                    .collect();
                if m == 2 {
                    Ok(polygon_area(&clip_polygon(&rows, self.radius + 1.0)))
                } else {
                    section_polytope_volume(&rows)
                }
            }
            ConvexBody::Ellipsoid(el) => Ok(ellipsoid_section(el.shape(), el.center(), &self.f, &x0)),
            ConvexBody::Ball(b) => {
                let d = b.center().len();
                let shape = Matrix::identity(d, d) / (b.radius() * b.radius());
                Ok(ellipsoid_section(&shape, b.center(), &self.f, &x0))
            }
        }
    }

    fn root(&self, t: &Vector) -> f64 {
        let v = self.volume(t).unwrap_or(0.0);
        v.powf(1.0 / self.f.dim() as f64)
    }
}

/// vol_{d−k}(K ∩ (E t + E⊥)) for `t` in the coordinates of `E`.
pub fn section_volume(body: &ConvexBody, e: &Subspace, t: &Vector) -> Result<f64> {
    Slicer::new(body, e)?.volume(t)
}

fn ellipsoid_section(shape: &Matrix, center: &Vector, f: &Subspace, x0: &Vector) -> f64 {
    let m = f.dim();
    let fm = f.matrix();
    let s = fm.transpose() * shape * &fm;
    let y0 = x0 - center;
    let g = fm.transpose() * (shape * &y0);
    let Some(chol) = s.clone().cholesky() else {
        return 0.0;
    };
    let sg = chol.solve(&g);
    let rho = 1.0 - y0.dot(&(shape * &y0)) + g.dot(&sg);
    if rho <= 0.0 {
        return 0.0;
    }
    unit_ball_volume(m) * rho.powf(m as f64 / 2.0) / s.determinant().sqrt()
}

/// Clips the square `[−r, r]²` by the halfplanes `a·s <= b`.
fn clip_polygon(rows: &[(Vector, f64)], r: f64) -> Vec<[f64; 2]> {
    let mut poly = vec![[-r, -r], [r, -r], [r, r], [-r, r]];
    for (a, b) in rows {
        if poly.is_empty() {
            break;
        }
        let val = |p: &[f64; 2]| a[0] * p[0] + a[1] * p[1] - b;
        let mut out = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let p = poly[i];
            let q = poly[(i + 1) % poly.len()];
            let (vp, vq) = (val(&p), val(&q));
            if vp <= 0.0 {
                out.push(p);
            }
            if (vp < 0.0 && vq > 0.0) || (vp > 0.0 && vq < 0.0) {
                let s = vp / (vp - vq);
                out.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
            }
        }
        poly = out;
    }
    poly
}

fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        acc += p[0] * q[1] - p[1] * q[0];
    }
    0.5 * acc.abs()
}

fn section_polytope_volume(rows: &[(Vector, f64)]) -> Result<f64> {
    let mut kept = Vec::with_capacity(rows.len());
    for (a, b) in rows {
        if a.norm() < 1e-12 {
            if *b < 0.0 {
                return Ok(0.0);
            }
        } else {
            kept.push((a.clone(), *b));
        }
    }
    let (c, r) = match chebyshev_center(&kept) {
        Ok(v) => v,
        Err(_) => return Ok(0.0),
    };
    if r <= 1e-9 * c.amax().max(1.0) {
        return Ok(0.0);
    }
    match Polytope::from_halfspaces(&kept, Some(&c)) {
        Ok(p) => Ok(p.volume()),
        Err(Error::Degenerate(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Maximum over translates of the section volume, with a maximizer in the
/// coordinates of `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionMax {
    pub value: f64,
    pub at: Vector,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// max over x of vol_{d−k}(K ∩ (x + E⊥)), k = dim E.
///
/// t ↦ vol(section at t)^{1/(d−k)} is concave on P_E K (Brunn–Minkowski), so
/// golden-section search on lines is sound. For k = 1 a single search over the
/// projected interval suffices; for k ≥ 2 a grid start is refined by repeated
/// line searches along a fixed direction set plus the last net move.
pub fn max_parallel_section(body: &ConvexBody, e: &Subspace) -> Result<SectionMax> {
    let d = body.dim();
    let k = e.dim();
    if k == 0 || k >= d {
        return Err(Error::Domain("subspace must have dimension between 1 and d−1".into()));
    }
    let slicer = Slicer::new(body, e)?;
    if let Some(c) = body.center() {
        let at = e.coords(c);
        return Ok(SectionMax {
            value: slicer.volume(&at)?,
            at,
        });
    }
    let proj = body.project(e)?;
    let diam = {
        let (lo, hi) = proj.bounding_box();
        (&hi - &lo).norm()
    };
    let tol = 1e-10 * diam;

    let f = |t: &Vector| slicer.root(t);

    let mut best_t;
    let mut best;
    if k == 1 {
        let u = Vector::from_element(1, 1.0);
        let z = Vector::zeros(1);
        let (lo, hi) = proj.line_range(&z, &u).expect("projection contains its range");
        let (a, fa) = golden_max(|s| f(&Vector::from_element(1, s)), lo, hi, tol);
        best_t = Vector::from_element(1, a);
        best = fa;
        for s in [lo, hi] {
            let v = f(&Vector::from_element(1, s));
            if v > best {
                best = v;
                best_t = Vector::from_element(1, s);
            }
        }
    } else {
        let (lo, hi) = proj.bounding_box();
        let per_axis: usize = match k {
            2 => 17,
            3 => 9,
            _ => 5,
        };
        best_t = proj.interior_point();
        best = f(&best_t);
        let total = per_axis.pow(k as u32);
        for idx in 0..total {
            let mut rem = idx;
            let t = Vector::from_fn(k, |i, _| {
                let j = rem % per_axis;
                rem /= per_axis;
                lo[i] + (hi[i] - lo[i]) * (j as f64 + 0.5) / per_axis as f64
            });
            if !proj.contains(&t, 0.0) {
                continue;
            }
            let v = f(&t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        let dirs = sphere_directions(k, 8 * k)
            .into_iter()
            .filter(|u| u.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x > 0.0))
            .collect::<Vec<_>>();
        for _pass in 0..200 {
            let start = best_t.clone();
            let before = best;
            for u in &dirs {
                let (t, v) = line_max(&f, &proj, &best_t, u, tol);
                if v > best {
                    best = v;
                    best_t = t;
                }
            }
            let moved = &best_t - &start;
            if moved.norm() > tol {
                let u = moved.normalize();
                let (t, v) = line_max(&f, &proj, &best_t, &u, tol);
                if v > best {
                    best = v;
                    best_t = t;
                }
            }
            if best - before <= 1e-13 * best.max(1e-300) {
                break;
            }
        }
    }
    let value = slicer.volume(&best_t)?;
    Ok(SectionMax { value, at: best_t })
}

fn line_max<F: Fn(&Vector) -> f64>(
    f: &F,
    proj: &ConvexBody,
    t: &Vector,
    u: &Vector,
    tol: f64,
) -> (Vector, f64) {
    let Some((lo, hi)) = proj.line_range(t, u) else {
        return (t.clone(), f(t));
    };
    let (a, v) = golden_max(|s| f(&(t + u * s)), lo, hi, tol);
    (t + u * a, v)
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// vol_d(K) <= max-section · vol_k(P_E K) <= binom(d, k) · vol_d(K).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RogersShephardReport {
    pub lhs: f64,
    pub fubini_lower: f64,
    pub rs_upper: f64,
    pub pass: bool,
}

/// Relative slack used by [`check_rogers_shephard`].
pub const RS_REL_TOL: f64 = 1e-6;

pub fn check_rogers_shephard(body: &ConvexBody, e: &Subspace) -> Result<RogersShephardReport> {
    let d = body.dim();
    let k = e.dim();
    let section = max_parallel_section(body, e)?;
    let proj = volume(&body.project(e)?);
    let vol = volume(body);
    let lhs = section.value * proj;
    let rs_upper = binomial(d, k) * vol;
    let pass = vol <= lhs * (1.0 + RS_REL_TOL) && lhs <= rs_upper * (1.0 + RS_REL_TOL);
    Ok(RogersShephardReport {
        lhs,
        fubini_lower: vol,
        rs_upper,
        pass,
    })
}

/// Volume, centroid and covariance of the uniform distribution on the body.
#[derive(Clone, Debug)]
pub struct Moments {
    pub volume: f64,
    pub centroid: Vector,
    pub covariance: Matrix,
}

pub fn moments(body: &ConvexBody) -> Moments {
    let d = body.dim();
    match body {
        ConvexBody::VPolytope(p) => {
            let apex = p.interior_point();
            let mut vol = 0.0;
            let mut first = Vector::zeros(d);
            let mut second = Matrix::zeros(d, d);
            let fact: f64 = (1..=d).map(|i| i as f64).product();
            for simplex in p.boundary_simplices() {
                let mut verts: Vec<&Vector> = simplex;
                verts.push(apex);
                let base = verts[d];
                let m = Matrix::from_fn(d, d, |i, j| verts[j][i] - base[i]);
                let v = m.determinant().abs() / fact;
                let sum: Vector = verts.iter().fold(Vector::zeros(d), |acc, x| acc + *x);
                let mut outer = &sum * sum.transpose();
                for x in &verts {
                    outer += *x * x.transpose();
                }
                vol += v;
                first += &sum * (v / (d + 1) as f64);
                second += outer * (v / ((d + 1) * (d + 2)) as f64);
            }
            let centroid = first / vol;
            let covariance = second / vol - &centroid * centroid.transpose();
            Moments {
                volume: vol,
                centroid,
                covariance,
            }
        }
        ConvexBody::Ellipsoid(e) => Moments {
            volume: volume(body),
            centroid: e.center().clone(),
            covariance: e.inv_shape() / (d + 2) as f64,
        },
        ConvexBody::Ball(b) => Moments {
            volume: volume(body),
            centroid: b.center().clone(),
            covariance: Matrix::identity(d, d) * (b.radius() * b.radius() / (d + 2) as f64),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    fn triangle() -> ConvexBody {
        ConvexBody::vpolytope(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])]).unwrap()
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        // Γ route for a few more dimensions
        for n in 1..=8 {
            let h = n as f64 / 2.0;
            let gamma = if n % 2 == 0 {
                (1..=n / 2).map(|i| i as f64).product::<f64>()
            } else {
                let mut g = std::f64::consts::PI.sqrt();
                let mut x = 0.5;
                while x < h + 0.5 {
                    g *= x;
                    x += 1.0;
                }
                g
            };
            let expect = std::f64::consts::PI.powf(h) / gamma;
            assert!((unit_ball_volume(n) - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn exact_volumes() {
        let cube = ConvexBody::cube(3, 0.0, 1.0).unwrap();
        assert!((volume_exact(&cube).value - 1.0).abs() < 1e-12);
        let mut pts = Vec::new();
        for i in 0..3 {
            for s in [1.0, -1.0] {
                let mut v = Vector::zeros(3);
                v[i] = s;
                pts.push(v);
            }
        }
        let cross = ConvexBody::vpolytope(&pts).unwrap();
        assert!((volume(&cross) - 4.0 / 3.0).abs() < 1e-12);
        let disk = ConvexBody::unit_ball(2);
        assert!((volume(&disk) - std::f64::consts::PI).abs() < 1e-12);
        let el = ConvexBody::ellipsoid(vector(&[1.0, 1.0]), Matrix::from_diagonal(&vector(&[0.25, 1.0]))).unwrap();
        assert!((volume(&el) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_volumes() {
        let sq = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let r = volume_mc(&sq, 1_000_000, 1).unwrap();
        assert!((r.value - 1.0).abs() <= 0.01);
        let disk = ConvexBody::unit_ball(2);
        let r = volume_mc(&disk, 1_000_000, 2).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() <= r.ci_halfwidth);
        assert_eq!(r, volume_mc(&disk, 1_000_000, 2).unwrap());
        assert!(volume_mc(&disk, 999, 2).is_err());
    }

    #[test]
    fn sections() {
        let cube = ConvexBody::cube(3, 0.0, 1.0).unwrap();
        let e1 = Subspace::coordinate(3, &[0]).unwrap();
        let s = max_parallel_section(&cube, &e1).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
        let disk = ConvexBody::unit_ball(2);
        let e = Subspace::coordinate(2, &[0]).unwrap();
        let s = max_parallel_section(&disk, &e).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12);
        let s = max_parallel_section(&triangle(), &e).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
        assert!(s.at[0].abs() < 1e-6);
        // chord length of the triangle is 1 − x
        for x in [0.1, 0.5, 0.9] {
            let v = section_volume(&triangle(), &e, &vector(&[x])).unwrap();
            assert!((v - (1.0 - x)).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipsoid_section_matches_polygon_clip() {
        // 3-D ellipsoid sliced by planes vs. fine inscribed polytope
        let el = ConvexBody::ellipsoid(
            vector(&[0.2, -0.1, 0.3]),
            Matrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.3, 1.0, 0.2, 0.0, 0.2, 0.5]),
        )
        .unwrap();
        let e = Subspace::span(3, &[vector(&[1.0, 1.0, 0.0])]).unwrap();
        let t = vector(&[0.1]);
        let exact = section_volume(&el, &e, &t).unwrap();
        let approx = ConvexBody::VPolytope(el.circumscribed_polytope(4000).unwrap());
        let outer = section_volume(&approx, &e, &t).unwrap();
        assert!(outer >= exact);
        assert!((outer - exact) / exact < 0.02);
    }

    #[test]
    fn rogers_shephard_cases() {
        let e = Subspace::coordinate(2, &[0]).unwrap();
        let r = check_rogers_shephard(&triangle(), &e).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-9);
        assert!((r.rs_upper - 1.0).abs() < 1e-12);
        assert!((r.fubini_lower - 0.5).abs() < 1e-12);
        assert!(r.pass);
        let cube = ConvexBody::cube(3, -1.0, 1.0).unwrap();
        for axes in [&[0][..], &[1, 2][..]] {
            let e = Subspace::coordinate(3, axes).unwrap();
            let r = check_rogers_shephard(&cube, &e).unwrap();
            assert!((r.lhs - r.fubini_lower).abs() < 1e-9);
            assert!(r.pass);
        }
    }

    #[test]
    fn simplex_section_in_four_dims() {
        // standard simplex conv{0, e_i} in ℝ⁴, E = span{e1, e2}: the section at
        // (t1, t2) is a scaled 2-simplex of area (1 − t1 − t2)²/2, max 1/2
        let mut pts = vec![Vector::zeros(4)];
        for i in 0..4 {
            let mut v = Vector::zeros(4);
            v[i] = 1.0;
            pts.push(v);
        }
        let s = ConvexBody::vpolytope(&pts).unwrap();
        let e = Subspace::coordinate(4, &[0, 1]).unwrap();
        let v = section_volume(&s, &e, &vector(&[0.2, 0.3])).unwrap();
        assert!((v - 0.125).abs() < 1e-12);
        let m = max_parallel_section(&s, &e).unwrap();
        assert!((m.value - 0.5).abs() < 1e-7);
        let e1 = Subspace::coordinate(4, &[0]).unwrap();
        let v = section_volume(&s, &e1, &vector(&[0.5])).unwrap();
        assert!((v - 0.125 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn moments_of_square_and_triangle() {
        let sq = ConvexBody::cube(2, 0.0, 2.0).unwrap();
        let m = moments(&sq);
        assert!((m.volume - 4.0).abs() < 1e-12);
        assert!((&m.centroid - vector(&[1.0, 1.0])).norm() < 1e-12);
        // variance of U[0,2] is 1/3
        assert!((m.covariance[(0, 0)] - 1.0 / 3.0).abs() < 1e-12);
        assert!(m.covariance[(0, 1)].abs() < 1e-12);
        let m = moments(&triangle());
        assert!((&m.centroid - vector(&[1.0 / 3.0, 1.0 / 3.0])).norm() < 1e-12);
    }
}
