//! Asymmetry, a Banach–Mazur upper bound and mean-width functionals.

use nalgebra::SymmetricEigen;
use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::lp::{max_margin, MarginRow};
use crate::geometry::{random_direction, AffineMap, ConvexBody, Matrix, Vector};
use crate::rng::{self, MC_SHARDS};
use crate::volume::moments;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryResult {
    pub sd: f64,
    pub center: Vec<f64>,
    pub achieved_at_origin: bool,
}

/// λ(a) = smallest λ with −(K − a) ⊆ λ(K − a), for a ∈ int K.
///
/// Facet j of K is n_j·x ≤ b_j; the reflected vertices 2a − v satisfy the
/// scaled facet iff λ(b_j − n_j·a) ≥ h_K(−n_j) + n_j·a.
pub fn reflection_ratio(body: &ConvexBody, a: &Vector) -> Result<f64> {
    let p = body
        .as_polytope()
        .ok_or_else(|| Error::Domain("reflection ratio needs a polytope".into()))?;
    let mut lam: f64 = 0.0;
    for h in p.facets() {
        let slack = h.offset - h.normal.dot(a);
        if !(slack > 0.0) {
            return Err(Error::Precondition("center is not interior".into()));
        }
        let hm = p.support(&-&h.normal);
        lam = lam.max((hm + h.normal.dot(a)) / slack);
    }
    Ok(lam)
}

/// sd_K = inf over a of λ(a).
///
/// With μ = 1/λ and a' = (1 + μ)a the facet conditions
/// (1 + μ) n_j·a ≤ b_j − μ h_K(−n_j) become the linear constraints
/// n_j·a' + μ h_K(−n_j) ≤ b_j, so sd_K = 1/μ* for the LP maximizing μ. The
/// reported value is λ(a) evaluated exactly at the recovered center, which is
/// an upper bound equal to sd_K up to solver accuracy.
pub fn sd(body: &ConvexBody) -> Result<AsymmetryResult> {
    let d = body.dim();
    let p = match body {
        ConvexBody::VPolytope(p) => p,
        _ => {
            let c = body.center().expect("ellipsoidal body");
            return Ok(AsymmetryResult {
                sd: 1.0,
                center: c.iter().cloned().collect(),
                achieved_at_origin: c.norm() <= 1e-12,
            });
        }
    };
    // x = (a', μ); objective μ via the margin variable with unit weight on μ
    let rows: Vec<MarginRow> = p
        .facets()
        .iter()
        .map(|h| MarginRow {
            a: h.normal.clone(),
            weight: p.support(&-&h.normal),
            b: h.offset,
        })
        .collect();
    let (ap, mu) = max_margin(d, &rows, 1.0)?;
    if !(mu > 0.0) {
        return Err(Error::Internal("asymmetry program returned a nonpositive scale".into()));
    }
    let mut a = ap / (1.0 + mu);
    let mut lam = reflection_ratio(body, &a)?;
    // polish: λ(a) is quasi-convex, a short pattern search removes solver noise
    let mut step = 1e-6 * p.extent().max(1.0);
    let dirs = crate::geometry::sphere_directions(d, 4 * d);
    while step > 1e-13 * p.extent().max(1.0) {
        let mut improved = false;
        for u in &dirs {
            let b = &a + u * step;
            if let Ok(l) = reflection_ratio(body, &b) {
                if l < lam {
                    lam = l;
                    a = b;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let z = Vector::zeros(d);
    let at_origin = reflection_ratio(body, &z).map(|l| l <= lam + 1e-4).unwrap_or(false);
    Ok(AsymmetryResult {
        sd: lam,
        center: a.iter().cloned().collect(),
        achieved_at_origin: at_origin,
    })
}

/// Upper bound on the Banach–Mazur distance to the ball: 1 for ellipsoids,
/// R/r for polytopes with r the inradius at the Chebyshev center c and R the
/// largest vertex distance from c (B(c, r) ⊆ K ⊆ B(c, R)).
pub fn dk_upper(body: &ConvexBody) -> Result<f64> {
    match body {
        ConvexBody::VPolytope(p) => {
            let (c, r) = p.chebyshev_ball()?;
            let r = p
                .facets()
                .iter()
                .map(|h| h.slack(&c))
                .fold(f64::INFINITY, f64::min)
                .min(r);
            let big = p.vertices().iter().map(|v| (v - &c).norm()).fold(0.0, f64::max);
            Ok((big / r).max(1.0))
        }
        _ => Ok(1.0),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanWidthResult {
    pub m: f64,
    pub mstar: f64,
    pub product: f64,
    pub samples: u64,
    pub ci_m: f64,
    pub ci_mstar: f64,
    /// First-order 3σ half-width of the product.
    pub ci: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advisory: Option<String>,
}

/// Kurtosis above which the gauge sample is flagged as heavy tailed.
pub const KURTOSIS_ADVISORY: f64 = 50.0;

/// Directions for Monte Carlo sphere averages: shard i uses split(seed, i).
pub fn sphere_sample(d: usize, n: usize, seed: u64) -> Vec<Vector> {
    rng::shard_sizes(n, MC_SHARDS)
        .par_iter()
        .enumerate()
        .map(|(i, &m)| {
            let mut r = rng::rng(rng::split(seed, i as u64));
            (0..m).map(|_| random_direction(d, &mut r)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// M(K) = ∫ ‖x‖_K dσ and M*(K) = ∫ h_K dσ over the unit sphere. Centered
/// balls use the closed form (1/r, r); other bodies are sampled.
pub fn mean_widths(body: &ConvexBody, n: usize, seed: u64) -> Result<MeanWidthResult> {
    body.require_origin_interior()?;
    if let ConvexBody::Ball(b) = body {
        if b.center().norm() == 0.0 {
            let r = b.radius();
            return Ok(MeanWidthResult {
                m: 1.0 / r,
                mstar: r,
                product: 1.0,
                samples: 0,
                ci_m: 0.0,
                ci_mstar: 0.0,
                ci: 0.0,
                advisory: None,
            });
        }
    }
    if n < 10_000 {
        return Err(Error::Domain("at least 10000 samples required".into()));
    }
    let dirs = sphere_sample(body.dim(), n, seed);
    let d = body.dim();
    Ok(mean_widths_on(&Evaluator::new(body, &Matrix::identity(d, d), &Vector::zeros(d))?, &dirs))
}

/// Gauge and support of M(K − a) without rebuilding the body.
pub(crate) struct Evaluator<'a> {
    body: &'a ConvexBody,
    m: Matrix,
    minv: Matrix,
    a: Vector,
    // polytope facets shifted by a: (n_j, b_j − n_j·a)
    facets: Vec<(Vector, f64)>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(body: &'a ConvexBody, m: &Matrix, a: &Vector) -> Result<Self> {
        let minv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Domain("singular map".into()))?;
        let facets = match body {
            ConvexBody::VPolytope(p) => {
                let mut fs = Vec::with_capacity(p.facets().len());
                for h in p.facets() {
                    let s = h.offset - h.normal.dot(a);
                    if !(s > 0.0) {
                        return Err(Error::Precondition("center is not interior".into()));
                    }
                    fs.push((h.normal.clone(), s));
                }
                fs
            }
            _ => {
                if !body.contains_strict(a, 0.0) {
                    return Err(Error::Precondition("center is not interior".into()));
                }
                Vec::new()
            }
        };
        Ok(Evaluator {
            body,
            m: m.clone(),
            minv,
            a: a.clone(),
            facets,
        })
    }

    fn support(&self, u: &Vector) -> f64 {
        let v = self.m.transpose() * u;
        self.body.support_raw(&v) - self.a.dot(&v)
    }

    fn gauge(&self, x: &Vector) -> f64 {
        let y = &self.minv * x;
        match self.body {
            ConvexBody::VPolytope(_) => self
                .facets
                .iter()
                .map(|(n, s)| n.dot(&y) / s)
                .fold(0.0, f64::max),
            // gauge of K − a at y: 1/t for the largest t with a + t y ∈ K
            _ => match self.body.line_range(&self.a, &y) {
                Some((_, hi)) if hi > 0.0 => 1.0 / hi,
                _ => f64::INFINITY,
            },
        }
    }
}

fn mean_widths_on(ev: &Evaluator<'_>, dirs: &[Vector]) -> MeanWidthResult {
    let n = dirs.len() as f64;
    let (g1, g2, g4, s1, s2) = dirs
        .par_chunks(4096)
        .map(|chunk| {
            let mut acc = (0.0, 0.0, 0.0, 0.0, 0.0);
            for u in chunk {
                let g = ev.gauge(u);
                let h = ev.support(u);
                acc.0 += g;
                acc.1 += g * g;
                acc.2 += g * g * g * g;
                acc.3 += h;
                acc.4 += h * h;
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0, 0.0, 0.0, 0.0), |a, b| {
            (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3, a.4 + b.4)
        });
    let m = g1 / n;
    let ms = s1 / n;
    let var_g = (g2 / n - m * m).max(0.0);
    let var_h = (s2 / n - ms * ms).max(0.0);
    let ci_m = 3.0 * (var_g / n).sqrt();
    let ci_mstar = 3.0 * (var_h / n).sqrt();
    // crude kurtosis proxy from raw moments: E g⁴ / (E g²)²
    let kurt = if g2 > 0.0 { (g4 / n) / (g2 / n).powi(2) } else { 0.0 };
    MeanWidthResult {
        m,
        mstar: ms,
        product: m * ms,
        samples: dirs.len() as u64,
        ci_m,
        ci_mstar,
        ci: m * ci_mstar + ms * ci_m,
        advisory: (kurt > KURTOSIS_ADVISORY).then(|| {
            format!("gauge sample is heavy tailed (moment ratio {kurt:.1}); increase the sample size")
        }),
    }
}

/// M(T K)·M*(T K) for T x = M x + t, i.e. M(K − a) with a = −M⁻¹t.
pub fn mm_product(body: &ConvexBody, t: &AffineMap, n: usize, seed: u64) -> Result<f64> {
    let image = body.affine_image(t)?;
    Ok(mean_widths(&image, n, seed)?.product)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MmSearchResult {
    pub product: f64,
    pub history: Vec<f64>,
}

/// Heuristic minimum of M·M* over positions M(K − a); returns the best product.
pub fn mm_heuristic_min(body: &ConvexBody, restarts: usize, n: usize, seed: u64) -> Result<f64> {
    Ok(mm_heuristic_search(body, restarts, n, seed)?.product)
}

/// Starts from the isotropic position (centroid, inverse square root of the
/// covariance) and runs a derivative-free local search over diagonal
/// scalings in random orthonormal frames and small translations. All
/// evaluations share one direction sample so the objective is deterministic.
/// `history[r]` is the best value after restart r, hence non-increasing.
pub fn mm_heuristic_search(body: &ConvexBody, restarts: usize, n: usize, seed: u64) -> Result<MmSearchResult> {
    if n < 10_000 {
        return Err(Error::Domain("at least 10000 samples required".into()));
    }
    let d = body.dim();
    let dirs = sphere_sample(d, n, rng::split(seed, 0));
    let mom = moments(body);
    let eig = SymmetricEigen::new(mom.covariance.clone());
    let inv_sqrt = &eig.eigenvectors
        * Matrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.max(1e-300).sqrt()))
        * eig.eigenvectors.transpose();
    let eval = |m: &Matrix, a: &Vector| -> f64 {
        match Evaluator::new(body, m, a) {
            Ok(ev) => mean_widths_on(&ev, &dirs).product,
            Err(_) => f64::INFINITY,
        }
    };
    let extent = {
        let (lo, hi) = body.bounding_box();
        (&hi - &lo).amax()
    };
    let mut best_m = inv_sqrt;
    let mut best_a = mom.centroid.clone();
    let mut best = eval(&best_m, &best_a);
    let mut history = Vec::with_capacity(restarts);
    let mut r = rng::rng(rng::split(seed, 1));
    for restart in 0..restarts {
        let (mut m, mut a) = (best_m.clone(), best_a.clone());
        if restart > 0 {
            let q = crate::geometry::random_rotation(d, &mut r);
            let diag = Vector::from_fn(d, |_, _| (0.2 * (r.random::<f64>() - 0.5)).exp());
            m = &q * Matrix::from_diagonal(&diag) * q.transpose() * &m;
        }
        let mut f = eval(&m, &a);
        let mut step = 0.1;
        let mut stall = 0;
        while step > 1e-4 && stall < 400 {
            let q = crate::geometry::random_rotation(d, &mut r);
            let diag = Vector::from_fn(d, |_, _| (step * (2.0 * r.random::<f64>() - 1.0)).exp());
            let m2 = &q * Matrix::from_diagonal(&diag) * q.transpose() * &m;
            let shift = random_direction(d, &mut r) * (step * 0.1 * extent * r.random::<f64>());
            let a2 = &a + shift;
            let f2 = eval(&m2, &a2);
            if f2 < f {
                m = m2;
                a = a2;
                f = f2;
                stall = 0;
            } else {
                stall += 1;
                if stall % 40 == 0 {
                    step *= 0.5;
                }
            }
        }
        if f < best {
            best = f;
            best_m = m;
            best_a = a;
        }
        history.push(best);
    }
    Ok(MmSearchResult { product: best, history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;
    use std::f64::consts::PI;

    /// λ(a) by bisection on containment of the reflected vertices.
    fn ratio_oracle(body: &ConvexBody, a: &Vector) -> f64 {
        let p = body.as_polytope().unwrap();
        if !body.contains_strict(a, 1e-9) {
            return f64::INFINITY;
        }
        let fits = |lam: f64| {
            p.vertices()
                .iter()
                .all(|v| body.contains(&(a + (a - v) / lam), 1e-12))
        };
        let (mut l, mut h) = (0.5, 1e3);
        if !fits(h) {
            return f64::INFINITY;
        }
        for _ in 0..80 {
            let mid = 0.5 * (l + h);
            if fits(mid) {
                h = mid;
            } else {
                l = mid;
            }
        }
        h
    }

    /// min of λ over nested grids of centers, each zoomed around the best.
    fn sd_oracle(body: &ConvexBody, res: usize) -> f64 {
        let d = body.dim();
        let (mut lo, mut hi) = body.bounding_box();
        let mut best = (f64::INFINITY, Vector::zeros(d));
        for _ in 0..40 {
            for idx in 0..res.pow(d as u32) {
                let mut rem = idx;
                let a = Vector::from_fn(d, |i, _| {
                    let j = rem % res;
                    rem /= res;
                    lo[i] + (hi[i] - lo[i]) * j as f64 / (res - 1) as f64
                });
                let l = ratio_oracle(body, &a);
                if l < best.0 {
                    best = (l, a);
                }
            }
            let half = (&hi - &lo) * 0.25;
            lo = &best.1 - &half;
            hi = &best.1 + &half;
        }
        best.0
    }

    #[test]
    fn asymmetry_values() {
        let sq = ConvexBody::cube(2, 1.0, 3.0).unwrap();
        let r = sd(&sq).unwrap();
        assert!((r.sd - 1.0).abs() < 1e-9);
        assert!((vector(&r.center) - vector(&[2.0, 2.0])).norm() < 1e-6);
        assert!(!r.achieved_at_origin);
        let tri = ConvexBody::vpolytope(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])]).unwrap();
        let r = sd(&tri).unwrap();
        assert!((r.sd - 2.0).abs() < 1e-9);
        let o = sd_oracle(&tri, 21);
        assert!((r.sd - o).abs() < 1e-6, "{} {o}", r.sd);
        let mut pts = vec![Vector::zeros(3)];
        for i in 0..3 {
            let mut v = Vector::zeros(3);
            v[i] = 1.0;
            pts.push(v);
        }
        let tet = ConvexBody::vpolytope(&pts).unwrap();
        let r = sd(&tet).unwrap();
        assert!((r.sd - 3.0).abs() < 1e-9);
        let el = ConvexBody::ball(vector(&[0.1, 0.0]), 1.0).unwrap();
        assert_eq!(sd(&el).unwrap().sd, 1.0);
    }

    #[test]
    fn irregular_polygon_matches_oracle() {
        let p = ConvexBody::vpolytope(&[
            vector(&[0.0, 0.0]),
            vector(&[3.0, 0.2]),
            vector(&[2.5, 1.8]),
            vector(&[0.4, 2.2]),
            vector(&[-0.5, 1.0]),
        ])
        .unwrap();
        let r = sd(&p).unwrap();
        let o = sd_oracle(&p, 21);
        assert!(r.sd <= o + 1e-9, "{} {o}", r.sd);
        assert!(o - r.sd < 1e-6, "{} vs {o}", r.sd);
    }

    #[test]
    fn distance_bounds() {
        assert_eq!(dk_upper(&ConvexBody::unit_ball(3)).unwrap(), 1.0);
        let sq = ConvexBody::cube(2, -1.0, 1.0).unwrap();
        assert!((dk_upper(&sq).unwrap() - 2f64.sqrt()).abs() < 1e-9);
        let s3 = 3f64.sqrt();
        let tri = ConvexBody::vpolytope(&[vector(&[1.0, 0.0]), vector(&[-0.5, s3 / 2.0]), vector(&[-0.5, -s3 / 2.0])]).unwrap();
        assert!((dk_upper(&tri).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn mean_width_values() {
        let b = mean_widths(&ConvexBody::unit_ball(3), 0, 0).unwrap();
        assert_eq!((b.m, b.mstar, b.product), (1.0, 1.0, 1.0));
        let sq = ConvexBody::cube(2, -1.0, 1.0).unwrap();
        let r = mean_widths(&sq, 100_000, 3).unwrap();
        assert!((r.mstar - 4.0 / PI).abs() <= r.ci_mstar, "{r:?}");
        // M(square) = M*(cross-polytope) = average of max(|u1|, |u2|) = (4/π)·(√2/2)·... via duality
        let polar = sq.polar().unwrap();
        let q = mean_widths(&polar, 100_000, 3).unwrap();
        assert!((r.m - q.mstar).abs() <= r.ci_m + q.ci_mstar);
        assert!((r.mstar - q.m).abs() <= r.ci_mstar + q.ci_m);
        assert!(r.product >= 1.0 - 3.0 * r.ci);
    }

    #[test]
    fn mm_of_ellipsoids() {
        let el = ConvexBody::ellipsoid(Vector::zeros(2), Matrix::from_diagonal(&vector(&[0.01, 1.0]))).unwrap();
        let v = mm_heuristic_min(&el, 2, 20_000, 1).unwrap();
        assert!((v - 1.0).abs() < 1e-2, "{v}");
        let stretched = mm_product(
            &ConvexBody::unit_ball(2),
            &AffineMap::linear(Matrix::from_diagonal(&vector(&[2.0, 1.0]))).unwrap(),
            20_000,
            2,
        )
        .unwrap();
        assert!(stretched > 1.0);
        let s = mm_heuristic_search(&ConvexBody::cube(2, 0.0, 1.0).unwrap(), 3, 10_000, 4).unwrap();
        assert!(s.history.windows(2).all(|w| w[1] <= w[0]));
        assert!(s.product >= 1.0);
    }
}
