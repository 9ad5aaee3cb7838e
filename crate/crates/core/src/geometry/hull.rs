//! Quickhull in ℝ^d for small d.
//!
//! The boundary is returned as a simplicial complex: every facet carries exactly
//! `d` vertex indices, an outward unit normal and an offset, so that the hull is
//! `{x : normal·x <= offset}` over all facets. Coplanar simplices are kept
//! separate; callers that need the H-representation merge them.
//!
//! A point is "outside" a facet when its signed distance exceeds
//! `eps = eps_rel * extent`, where `extent` is the largest coordinate range of
//! the input. Points within `eps` of the current hull are discarded.

use std::collections::HashMap;

use super::{hyperplane_normal, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct HullFacet {
    pub vertices: Vec<usize>,
    pub normal: Vector,
    pub offset: f64,
}

#[derive(Clone, Debug)]
pub struct Hull {
    pub dim: usize,
    pub facets: Vec<HullFacet>,
    /// A point strictly inside the hull (centroid of the initial simplex).
    pub interior: Vector,
    /// Distance tolerance actually used.
    pub eps: f64,
}

impl Hull {
    /// Indices of input points that appear in some facet.
    pub fn used_points(&self) -> Vec<usize> {
        let mut used: Vec<usize> = self.facets.iter().flat_map(|f| f.vertices.iter().copied()).collect();
        used.sort_unstable();
        used.dedup();
        used
    }

    /// Volume by coning every boundary simplex to the interior point.
    pub fn volume(&self, points: &[Vector]) -> f64 {
        let d = self.dim;
        if d == 1 {
            let xs: Vec<f64> = self.facets.iter().map(|f| points[f.vertices[0]][0]).collect();
            return (xs[0] - xs[1]).abs();
        }
        let mut fact = 1.0;
        for i in 2..=d {
            fact *= i as f64;
        }
        let mut total = 0.0;
        for f in &self.facets {
            let m = nalgebra::DMatrix::from_fn(d, d, |i, j| points[f.vertices[j]][i] - self.interior[i]);
            total += m.determinant().abs();
        }
        total / fact
    }
}

struct Work {
    verts: Vec<usize>,
    normal: Vector,
    offset: f64,
    neighbors: Vec<usize>,
    outside: Vec<usize>,
    alive: bool,
}

const UNSET: usize = usize::MAX;

fn plane(points: &[Vector], verts: &[usize], interior: &Vector) -> Option<(Vector, f64)> {
    let refs: Vec<&Vector> = verts.iter().map(|&i| &points[i]).collect();
    let n = hyperplane_normal(&refs);
    let len = n.norm();
    if !(len > 0.0) || !len.is_finite() {
        return None;
    }
    let mut n = n / len;
    let mut o = n.dot(&points[verts[0]]);
    if n.dot(interior) - o > 0.0 {
        n = -n;
        o = -o;
    }
    Some((n, o))
}

/// Convex hull of `points` (all of dimension d ≥ 1). Fails with
/// [`Error::Degenerate`] when the points do not affinely span ℝ^d.
pub fn convex_hull(points: &[Vector], eps_rel: f64) -> Result<Hull> {
    if points.is_empty() {
        return Err(Error::Degenerate("empty point set".into()));
    }
    let d = points[0].len();
    if d == 0 {
        return Err(Error::Degenerate("zero-dimensional points".into()));
    }
    for p in points {
        crate::error::check_dim(d, p.len())?;
        super::check_finite(p)?;
    }
    let mut extent: f64 = 0.0;
    for j in 0..d {
        let lo = points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max);
        extent = extent.max(hi - lo);
    }
    if extent <= 0.0 {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let eps = eps_rel * extent;

    if d == 1 {
        let (mut imin, mut imax) = (0, 0);
        for (i, p) in points.iter().enumerate() {
            if p[0] < points[imin][0] {
                imin = i;
            }
            if p[0] > points[imax][0] {
                imax = i;
            }
        }
        let lo = points[imin][0];
        let hi = points[imax][0];
        return Ok(Hull {
            dim: 1,
            facets: vec![
                HullFacet {
                    vertices: vec![imin],
                    normal: Vector::from_element(1, -1.0),
                    offset: -lo,
                },
                HullFacet {
                    vertices: vec![imax],
                    normal: Vector::from_element(1, 1.0),
                    offset: hi,
                },
            ],
            interior: Vector::from_element(1, 0.5 * (lo + hi)),
            eps,
        });
    }

    let simplex = initial_simplex(points, eps)?;
    let interior = simplex.iter().fold(Vector::zeros(d), |acc, &i| acc + &points[i]) / (d + 1) as f64;

    let mut facets: Vec<Work> = Vec::new();
    for skip in 0..=d {
        let verts: Vec<usize> = (0..=d).filter(|&i| i != skip).map(|i| simplex[i]).collect();
        let neighbors: Vec<usize> = (0..=d).filter(|&i| i != skip).collect();
        let (normal, offset) = plane(points, &verts, &interior)
            .ok_or_else(|| Error::Degenerate("flat initial simplex".into()))?;
        facets.push(Work {
            verts,
            normal,
            offset,
            neighbors,
            outside: Vec::new(),
            alive: true,
        });
    }

    let mut in_simplex = vec![false; points.len()];
    for &i in &simplex {
        in_simplex[i] = true;
    }
    for (i, p) in points.iter().enumerate() {
        if in_simplex[i] {
            continue;
        }
        for f in facets.iter_mut() {
            if f.normal.dot(p) - f.offset > eps {
                f.outside.push(i);
                break;
            }
        }
    }

    let mut pending: Vec<usize> = (0..facets.len()).rev().collect();
    let mut visited: Vec<usize> = Vec::new();
    let mut stamp = 0usize;

    while let Some(fi) = pending.pop() {
        if !facets[fi].alive || facets[fi].outside.is_empty() {
            continue;
        }
        let apex = {
            let f = &facets[fi];
            *f.outside
                .iter()
                .max_by(|&&a, &&b| {
                    let da = f.normal.dot(&points[a]);
                    let db = f.normal.dot(&points[b]);
                    da.partial_cmp(&db).unwrap().then(b.cmp(&a))
                })
                .unwrap()
        };
        let p = &points[apex];

        // visible region by flood fill
        stamp += 1;
        if visited.len() < facets.len() {
            visited.resize(facets.len(), 0);
        }
        let mut is_visible: HashMap<usize, bool> = HashMap::new();
        let mut visible = vec![fi];
        is_visible.insert(fi, true);
        visited[fi] = stamp;
        let mut stack = vec![fi];
        while let Some(f) = stack.pop() {
            for &nb in &facets[f].neighbors {
                if visited[nb] == stamp {
                    continue;
                }
                visited[nb] = stamp;
                let vis = facets[nb].normal.dot(p) - facets[nb].offset > eps;
                is_visible.insert(nb, vis);
                if vis {
                    visible.push(nb);
                    stack.push(nb);
                }
            }
        }

        let first_new = facets.len();
        let mut ridge_map: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for &f in &visible {
            for pos in 0..d {
                let nb = facets[f].neighbors[pos];
                if is_visible.get(&nb).copied().unwrap_or(false) {
                    continue;
                }
                let mut verts: Vec<usize> = facets[f]
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| q != pos)
                    .map(|(_, &v)| v)
                    .collect();
                verts.push(apex);
                let (normal, offset) = plane(points, &verts, &interior)
                    .ok_or_else(|| Error::Internal("degenerate facet in hull update".into()))?;
                let id = facets.len();
                let mut neighbors = vec![UNSET; d];
                neighbors[d - 1] = nb;
                if let Some(slot) = facets[nb].neighbors.iter().position(|&x| x == f) {
                    facets[nb].neighbors[slot] = id;
                } else {
                    return Err(Error::Internal("broken hull adjacency".into()));
                }
                for q in 0..d - 1 {
                    let mut key: Vec<usize> = verts
                        .iter()
                        .enumerate()
                        .filter(|&(r, _)| r != q)
                        .map(|(_, &v)| v)
                        .collect();
                    key.sort_unstable();
                    if let Some((other, oq)) = ridge_map.remove(&key) {
                        neighbors[q] = other;
                        facets[other].neighbors[oq] = id;
                    } else {
                        ridge_map.insert(key, (id, q));
                    }
                }
                facets.push(Work {
                    verts,
                    normal,
                    offset,
                    neighbors,
                    outside: Vec::new(),
                    alive: true,
                });
            }
        }
        if !ridge_map.is_empty() {
            return Err(Error::Internal("unmatched ridges in hull update".into()));
        }

        let mut orphans: Vec<usize> = Vec::new();
        for &f in &visible {
            facets[f].alive = false;
            orphans.append(&mut facets[f].outside);
        }
        for i in orphans {
            if i == apex {
                continue;
            }
            for nf in first_new..facets.len() {
                let f = &mut facets[nf];
                if f.normal.dot(&points[i]) - f.offset > eps {
                    f.outside.push(i);
                    break;
                }
            }
        }
        for nf in first_new..facets.len() {
            if !facets[nf].outside.is_empty() {
                pending.push(nf);
            }
        }
    }

    let facets = facets
        .into_iter()
        .filter(|f| f.alive)
        .map(|f| HullFacet {
            vertices: f.verts,
            normal: f.normal,
            offset: f.offset,
        })
        .collect();
    Ok(Hull {
        dim: d,
        facets,
        interior,
        eps,
    })
}

/// Greedy maximal-volume simplex: start from the lowest point in the first
/// coordinate, then repeatedly add the point farthest from the current affine hull.
fn initial_simplex(points: &[Vector], eps: f64) -> Result<Vec<usize>> {
    let d = points[0].len();
    let mut i0 = 0;
    for (i, p) in points.iter().enumerate() {
        if p[0] < points[i0][0] {
            i0 = i;
        }
    }
    let origin = &points[i0];
    let mut chosen = vec![i0];
    let mut basis: Vec<Vector> = Vec::new();
    for _ in 0..d {
        let mut best = None;
        let mut best_r = 0.0;
        for (i, p) in points.iter().enumerate() {
            let mut r = p - origin;
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&r);
                    r.axpy(-c, b, 1.0);
                }
            }
            let n = r.norm();
            if n > best_r {
                best_r = n;
                best = Some((i, r));
            }
        }
        match best {
            Some((i, r)) if best_r > 10.0 * eps => {
                chosen.push(i);
                basis.push(r / best_r);
            }
            _ => {
                return Err(Error::Degenerate(format!(
                    "points span only {} of {} dimensions",
                    basis.len(),
                    d
                )))
            }
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;
    use rand::RngExt;

    fn cube(d: usize) -> Vec<Vector> {
        (0..1usize << d)
            .map(|m| Vector::from_fn(d, |i, _| if m >> i & 1 == 1 { 1.0 } else { -1.0 }))
            .collect()
    }

    #[test]
    fn cube_volumes() {
        for d in 1..=5 {
            let pts = cube(d);
            let h = convex_hull(&pts, 1e-10).unwrap();
            let v = h.volume(&pts);
            assert!((v - 2f64.powi(d as i32)).abs() < 1e-9, "d={d} v={v}");
            assert_eq!(h.used_points().len(), 1 << d);
        }
    }

    #[test]
    fn interior_points_discarded() {
        let mut pts = cube(3);
        pts.push(vector(&[0.0, 0.0, 0.0]));
        pts.push(vector(&[0.5, -0.2, 0.1]));
        pts.push(vector(&[1.0, 0.0, 0.0])); // on a face
        let h = convex_hull(&pts, 1e-10).unwrap();
        assert!(h.used_points().iter().all(|&i| i < 8));
        assert!((h.volume(&pts) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn grid_points_with_many_coplanar() {
        let mut pts = Vec::new();
        for x in 0..4 {
            for y in 0..4 {
                for z in 0..3 {
                    pts.push(vector(&[x as f64, y as f64, z as f64]));
                }
            }
        }
        let h = convex_hull(&pts, 1e-10).unwrap();
        assert!((h.volume(&pts) - 18.0).abs() < 1e-9);
    }

    #[test]
    fn random_sphere_points_all_on_hull() {
        let mut rng = crate::rng::rng(3);
        for d in 2..=5 {
            let pts: Vec<Vector> = (0..40).map(|_| crate::geometry::random_direction(d, &mut rng)).collect();
            let h = convex_hull(&pts, 1e-10).unwrap();
            assert_eq!(h.used_points().len(), 40, "d={d}");
            for f in &h.facets {
                for p in &pts {
                    assert!(f.normal.dot(p) - f.offset <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn simplex_volume() {
        let mut rng = crate::rng::rng(11);
        for d in 2..=6 {
            let pts: Vec<Vector> = (0..=d)
                .map(|_| Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)))
                .collect();
            let m = nalgebra::DMatrix::from_fn(d, d, |i, j| pts[j + 1][i] - pts[0][i]);
            let mut fact = 1.0;
            for i in 2..=d {
                fact *= i as f64;
            }
            let expect = m.determinant().abs() / fact;
            let h = convex_hull(&pts, 1e-10).unwrap();
            assert!((h.volume(&pts) - expect).abs() < 1e-10 * expect.max(1.0));
        }
    }

    #[test]
    fn degenerate_rejected() {
        let pts = vec![vector(&[0.0, 0.0]), vector(&[1.0, 1.0]), vector(&[2.0, 2.0])];
        assert!(matches!(convex_hull(&pts, 1e-10), Err(Error::Degenerate(_))));
    }
}
