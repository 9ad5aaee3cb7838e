//! Integer points of bodies, lattice width and lattice-freeness.

use std::cmp::Ordering;

use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Ellipsoid, Matrix, Vector};
use crate::rng;

/// Largest integer bounding box that will be scanned.
pub const MAX_BOX_POINTS: f64 = 1e7;
/// Largest number of candidate directions for the width search.
pub const MAX_WIDTH_CANDIDATES: f64 = 1e6;

pub type LatticePoint = Vec<i64>;

pub fn to_vector(p: &[i64]) -> Vector {
    Vector::from_iterator(p.len(), p.iter().map(|&x| x as f64))
}

/// Whether boundary points count as belonging to the body.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Freeness {
    #[default]
    Closed,
    Open,
}

impl std::str::FromStr for Freeness {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Freeness::Closed),
            "open" => Ok(Freeness::Open),
            _ => Err(Error::Usage(format!("unknown freeness mode '{s}' (closed|open)"))),
        }
    }
}

const MEMBERSHIP_TOL: f64 = 1e-9;

/// Integer points of the body (boundary included, tolerance 1e-9), in
/// lexicographic order.
pub fn enumerate_lattice_points(body: &ConvexBody) -> Result<Vec<LatticePoint>> {
    enumerate_with_mode(body, Freeness::Closed)
}

/// Integer points of K (closed mode) or of its interior with margin 1e-9
/// (open mode).
pub fn enumerate_with_mode(body: &ConvexBody, mode: Freeness) -> Result<Vec<LatticePoint>> {
    let (lo, hi) = body.bounding_box();
    let d = body.dim();
    let lo: Vec<i64> = lo.iter().map(|x| (x - MEMBERSHIP_TOL).ceil() as i64).collect();
    let hi: Vec<i64> = hi.iter().map(|x| (x + MEMBERSHIP_TOL).floor() as i64).collect();
    let mut count = 1.0f64;
    for i in 0..d {
        if hi[i] < lo[i] {
            return Ok(Vec::new());
        }
        count *= (hi[i] - lo[i] + 1) as f64;
    }
    if count > MAX_BOX_POINTS {
        return Err(Error::Resource(format!(
            "integer bounding box has {count:.3e} points (limit {MAX_BOX_POINTS:.0e}); shrink or translate the body"
        )));
    }
    // Split on the first coordinate so the scan parallelizes; order is kept.
    let rows: Vec<Vec<LatticePoint>> = (lo[0]..=hi[0])
        .into_par_iter()
        .map(|x0| {
            let mut out = Vec::new();
            let mut p = lo.clone();
            p[0] = x0;
            loop {
                let v = to_vector(&p);
                let inside = match mode {
                    Freeness::Closed => body.contains(&v, MEMBERSHIP_TOL),
                    Freeness::Open => body.contains_strict(&v, MEMBERSHIP_TOL),
                };
                if inside {
                    out.push(p.clone());
                }
                // odometer over coordinates 1..d, last coordinate fastest
                let mut i = d;
                loop {
                    if i == 1 {
                        return out;
                    }
                    i -= 1;
                    if p[i] < hi[i] {
                        p[i] += 1;
                        break;
                    }
                    p[i] = lo[i];
                }
            }
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn is_lattice_free(body: &ConvexBody, mode: Freeness) -> Result<bool> {
    Ok(enumerate_with_mode(body, mode)?.is_empty())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeWidthResult {
    pub width: f64,
    pub direction: Vec<i64>,
    pub evaluations: u64,
}

/// Relative tolerance under which two directional widths count as equal.
pub const WIDTH_TIE_TOL: f64 = 1e-9;

/// Canonical order among directions of equal width: smaller ℓ₁ norm first,
/// then lexicographically larger (so e₁ precedes e₂). Directions are taken
/// with first nonzero coordinate positive.
pub fn tie_break(a: &[i64], b: &[i64]) -> Ordering {
    let l1 = |y: &[i64]| y.iter().map(|x| x.abs()).sum::<i64>();
    l1(a).cmp(&l1(b)).then_with(|| b.cmp(a))
}

/// Returns `y` or `−y`, whichever has first nonzero coordinate positive.
pub fn normalize_direction(y: &[i64]) -> Vec<i64> {
    match y.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => y.iter().map(|v| -v).collect(),
        _ => y.to_vec(),
    }
}

/// Whether `(w, y)` improves on `(best_w, best_y)` under the width order.
pub fn better_width(w: f64, y: &[i64], best_w: f64, best_y: &[i64]) -> bool {
    let tol = WIDTH_TIE_TOL * best_w.abs().max(1.0);
    if w < best_w - tol {
        true
    } else if w > best_w + tol {
        false
    } else {
        tie_break(y, best_y) == Ordering::Less
    }
}

/// w(K, ℤ^d) = min over nonzero integer y of h_K(y) + h_K(−y).
///
/// Pruning lemma: if B(c, r) ⊆ K then for every y,
/// h_K(y) + h_K(−y) ≥ h_B(y) + h_B(−y) = 2r|y|.
/// Hence a direction with |y| > W₀/(2r) has width > W₀ and cannot improve on
/// the best coordinate direction. Enumerating the integer ball of radius
/// W₀/(2r) is therefore exact.
pub fn lattice_width(body: &ConvexBody) -> Result<LatticeWidthResult> {
    let d = body.dim();
    let mut evaluations = 0u64;
    let mut best_y: Vec<i64> = Vec::new();
    let mut best_w = f64::INFINITY;
    for i in 0..d {
        let mut y = vec![0i64; d];
        y[i] = 1;
        let w = body.width(&to_vector(&y));
        evaluations += 1;
        if best_y.is_empty() || better_width(w, &y, best_w, &best_y) {
            best_w = w;
            best_y = y;
        }
    }
    let r = certified_inradius(body)?;
    // slack so that directions of width exactly W₀ are still enumerated
    let radius = best_w / (2.0 * r) * (1.0 + 1e-9) + 1e-12;
    let estimate = crate::volume::unit_ball_volume(d) * (radius + 0.5 * (d as f64).sqrt()).powi(d as i32);
    if estimate > MAX_WIDTH_CANDIDATES {
        return Err(Error::Resource(format!(
            "width search needs about {estimate:.3e} candidate directions (limit {MAX_WIDTH_CANDIDATES:.0e})"
        )));
    }
    let rmax = radius.floor() as i64;
    let mut y = vec![0i64; d];
    let mut stack_search = |y: &[i64]| {
        if y.iter().all(|&x| x == 0) || normalize_direction(y) != y {
            return;
        }
        let w = body.width(&to_vector(y));
        evaluations += 1;
        if better_width(w, y, best_w, &best_y) {
            best_w = w;
            best_y = y.to_vec();
        }
    };
    integer_ball(&mut y, 0, radius * radius, rmax, &mut stack_search);
    Ok(LatticeWidthResult {
        width: best_w,
        direction: best_y,
        evaluations,
    })
}

fn integer_ball<F: FnMut(&[i64])>(y: &mut Vec<i64>, i: usize, budget: f64, rmax: i64, f: &mut F) {
    if i == y.len() {
        f(y);
        return;
    }
    let lim = (budget.max(0.0).sqrt().floor() as i64).min(rmax);
    for v in -lim..=lim {
        let rest = budget - (v * v) as f64;
        if rest < 0.0 {
            continue;
        }
        y[i] = v;
        integer_ball(y, i + 1, rest, rmax, f);
    }
    y[i] = 0;
}

/// Radius of a ball verified to lie inside the body: the inscribed-ball
/// center is re-checked against the facets so solver error cannot inflate it.
fn certified_inradius(body: &ConvexBody) -> Result<f64> {
    let (c, r) = body.inscribed_ball()?;
    let r = match body {
        ConvexBody::VPolytope(p) => p
            .facets()
            .iter()
            .map(|h| h.slack(&c))
            .fold(f64::INFINITY, f64::min)
            .min(r),
        _ => r,
    };
    if !(r > 0.0) {
        return Err(Error::Degenerate("body has no interior".into()));
    }
    Ok(r * (1.0 - 1e-12))
}

/// Width by scanning every direction in the box |y_i| <= bound; used as an
/// oracle for [`lattice_width`].
pub fn lattice_width_brute_force(body: &ConvexBody, bound: i64) -> LatticeWidthResult {
    let d = body.dim();
    let mut best_y: Vec<i64> = Vec::new();
    let mut best_w = f64::INFINITY;
    let mut evaluations = 0;
    let side = (2 * bound + 1) as usize;
    let total = side.pow(d as u32);
    for idx in 0..total {
        let mut rem = idx;
        let y: Vec<i64> = (0..d)
            .map(|_| {
                let v = (rem % side) as i64 - bound;
                rem /= side;
                v
            })
            .collect();
        if y.iter().all(|&x| x == 0) || normalize_direction(&y) != y {
            continue;
        }
        let w = body.width(&to_vector(&y));
        evaluations += 1;
        if best_y.is_empty() || better_width(w, &y, best_w, &best_y) {
            best_w = w;
            best_y = y;
        }
    }
    LatticeWidthResult {
        width: best_w,
        direction: best_y,
        evaluations,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub d: usize,
    pub trials: usize,
    pub max_width: f64,
    /// Trial indices whose width exceeded d + 1e-6.
    pub violations: Vec<u64>,
    pub pass: bool,
}

/// One lattice-free ellipsoid and its lattice width.
#[derive(Clone, Debug)]
pub struct FlatnessSample {
    pub body: ConvexBody,
    pub width: LatticeWidthResult,
}

/// Random shape with eigenvalues e^u, u ∈ [−1.5, 1.5], and random
/// eigenvectors; center uniform in [0, 1)^d; then the largest closed
/// lattice-free dilate about the center, found by bisection on the scale.
pub fn lattice_free_ellipsoid(d: usize, seed: u64) -> Result<ConvexBody> {
    let mut r = rng::rng(seed);
    let q = crate::geometry::random_rotation(d, &mut r);
    let diag = Vector::from_fn(d, |_, _| (3.0 * r.random::<f64>() - 1.5).exp());
    let base = &q * Matrix::from_diagonal(&diag) * q.transpose();
    let base = (&base + base.transpose()) * 0.5;
    let center = Vector::from_fn(d, |_, _| r.random::<f64>());
    let at_scale = |s: f64| -> Result<ConvexBody> {
        Ok(ConvexBody::Ellipsoid(Ellipsoid::new(center.clone(), &base / (s * s))?))
    };
    let free = |s: f64| -> Result<bool> { is_lattice_free(&at_scale(s)?, Freeness::Closed) };
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut steps = 0;
    while free(hi)? {
        lo = hi;
        hi *= 2.0;
        steps += 1;
        if steps > 60 {
            return Err(Error::Resource("could not reach a non-free scale".into()));
        }
    }
    if lo == 0.0 {
        lo = hi;
        let mut tries = 0;
        while !free(lo)? {
            lo *= 0.5;
            tries += 1;
            if tries > 10_000 {
                return Err(Error::Resource("could not find a lattice-free scale".into()));
            }
        }
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if free(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at_scale(lo)
}

pub fn flatness_sample(d: usize, seed: u64) -> Result<FlatnessSample> {
    let body = lattice_free_ellipsoid(d, seed)?;
    let width = lattice_width(&body)?;
    Ok(FlatnessSample { body, width })
}

/// Lattice widths of random lattice-free ellipsoids against the bound d.
/// Trial `i` uses seed `split(seed, i)`.
pub fn ellipsoid_flatness_evidence(trials: usize, d: usize, seed: u64) -> Result<FlatnessReport> {
    if !(2..=4).contains(&d) {
        return Err(Error::Precondition(format!("dimension must be 2, 3 or 4 (got {d})")));
    }
    let widths: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| flatness_sample(d, rng::split(seed, i)).map(|s| s.width.width))
        .collect::<Result<_>>()?;
    let violations: Vec<u64> = widths
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > d as f64 + 1e-6)
        .map(|(i, _)| i as u64)
        .collect();
    Ok(FlatnessReport {
        d,
        trials,
        max_width: widths.iter().cloned().fold(0.0, f64::max),
        pass: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    #[test]
    fn enumerations() {
        let disk = ConvexBody::ball(Vector::zeros(2), 1.5).unwrap();
        assert_eq!(enumerate_lattice_points(&disk).unwrap().len(), 9);
        let sq = ConvexBody::cube(2, 0.0, 2.0).unwrap();
        assert_eq!(enumerate_lattice_points(&sq).unwrap().len(), 9);
        let small = ConvexBody::ball(vector(&[0.5, 0.5]), 0.5).unwrap();
        assert!(enumerate_lattice_points(&small).unwrap().is_empty());
        let big = ConvexBody::cube(2, 0.0, 1e4).unwrap();
        assert!(matches!(enumerate_lattice_points(&big), Err(Error::Resource(_))));
    }

    #[test]
    fn freeness_modes() {
        for d in 1..=4 {
            let b = ConvexBody::ball(Vector::from_element(d, 0.5), 0.4).unwrap();
            assert!(is_lattice_free(&b, Freeness::Closed).unwrap());
        }
        let sq = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        assert!(!is_lattice_free(&sq, Freeness::Closed).unwrap());
        assert!(is_lattice_free(&sq, Freeness::Open).unwrap());
    }

    #[test]
    fn widths() {
        let b = ConvexBody::ball(vector(&[0.3, 0.1, 0.0]), 1.7).unwrap();
        let w = lattice_width(&b).unwrap();
        assert!((w.width - 3.4).abs() < 1e-12);
        assert_eq!(w.direction, vec![1, 0, 0]);
        for d in 1..=4 {
            let c = ConvexBody::cube(d, 0.0, 1.0).unwrap();
            let w = lattice_width(&c).unwrap();
            assert!((w.width - 1.0).abs() < 1e-12);
            let mut e1 = vec![0; d];
            e1[0] = 1;
            assert_eq!(w.direction, e1);
        }
        let el = ConvexBody::ellipsoid(Vector::zeros(2), Matrix::from_diagonal(&vector(&[1.0 / 25.0, 1.0]))).unwrap();
        let w = lattice_width(&el).unwrap();
        assert!((w.width - 2.0).abs() < 1e-12);
        assert_eq!(w.direction, vec![0, 1]);
        let oracle = lattice_width_brute_force(&el, 10);
        assert_eq!(oracle.direction, w.direction);
    }

    #[test]
    fn skewed_triangle_width() {
        // thin triangle along (1,1): width in direction (1,−1) is small
        let t = ConvexBody::vpolytope(&[vector(&[0.0, 0.0]), vector(&[5.0, 5.2]), vector(&[5.3, 4.9])]).unwrap();
        let w = lattice_width(&t).unwrap();
        let o = lattice_width_brute_force(&t, 8);
        assert!((w.width - o.width).abs() < 1e-9);
        assert_eq!(w.direction, o.direction);
        assert_eq!(w.direction, vec![1, -1]);
    }

    #[test]
    fn flatness_small_run() {
        let rep = ellipsoid_flatness_evidence(20, 2, 7).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.max_width > 1.0);
        assert!(matches!(ellipsoid_flatness_evidence(1, 1, 0), Err(Error::Precondition(_))));
        let s = flatness_sample(3, 11).unwrap();
        assert!(is_lattice_free(&s.body, Freeness::Closed).unwrap());
    }
}
