use super::hull::convex_hull;
use super::lp::chebyshev_center;
use super::{rank, Vector, MAX_DIM};
use crate::error::{Error, Result};

/// Closed halfspace `normal·x <= offset` with unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    pub fn slack(&self, x: &Vector) -> f64 {
        self.offset - self.normal.dot(x)
    }
}

/// Full-dimensional polytope. Vertices (extreme points, in input order) are the
/// canonical representation; the merged facet list and a boundary triangulation
/// are computed once at construction.
#[derive(Clone, Debug)]
pub struct Polytope {
    vertices: Vec<Vector>,
    facets: Vec<Halfspace>,
    hull_points: Vec<Vector>,
    simplices: Vec<Vec<usize>>,
    interior: Vector,
    volume: f64,
    extent: f64,
}

const HULL_EPS: f64 = 1e-10;

impl Polytope {
    /// Convex hull of `points`; rejects inputs without interior.
    pub fn from_points(points: &[Vector]) -> Result<Self> {
        let d = points.first().map(|p| p.len()).unwrap_or(0);
        if d == 0 {
            return Err(Error::Degenerate("empty vertex list".into()));
        }
        if d > MAX_DIM {
            return Err(Error::Domain(format!("dimension {d} exceeds {MAX_DIM}")));
        }
        let hull = convex_hull(points, HULL_EPS)?;
        let extent = hull.eps / HULL_EPS;
        let merge_tol = 1e-9;
        let mut facets: Vec<Halfspace> = Vec::new();
        for f in &hull.facets {
            let dup = facets.iter().any(|h| {
                (&h.normal - &f.normal).norm() <= merge_tol
                    && (h.offset - f.offset).abs() <= merge_tol * extent
            });
            if !dup {
                facets.push(Halfspace {
                    normal: f.normal.clone(),
                    offset: f.offset,
                });
            }
        }

        let used = hull.used_points();
        let active_tol = 1e-9 * extent.max(1.0);
        let mut vertices = Vec::new();
        for &i in &used {
            let p = &points[i];
            let active: Vec<Vector> = facets
                .iter()
                .filter(|h| h.slack(p).abs() <= active_tol)
                .map(|h| h.normal.clone())
                .collect();
            if rank(&active, 1e-7) == d {
                vertices.push(p.clone());
            }
        }

        let mut remap = vec![usize::MAX; points.len()];
        let mut hull_points = Vec::with_capacity(used.len());
        for (j, &i) in used.iter().enumerate() {
            remap[i] = j;
            hull_points.push(points[i].clone());
        }
        let simplices = hull
            .facets
            .iter()
            .map(|f| f.vertices.iter().map(|&i| remap[i]).collect())
            .collect();
        let volume = hull.volume(points);
        Ok(Polytope {
            vertices,
            facets,
            hull_points,
            simplices,
            interior: hull.interior,
            volume,
            extent,
        })
    }

    /// Bounded intersection of halfspaces `a·x <= b`. `interior` must be a
    /// strictly interior point when given; otherwise the Chebyshev center is used.
    pub fn from_halfspaces(halfspaces: &[(Vector, f64)], interior: Option<&Vector>) -> Result<Self> {
        let d = halfspaces
            .first()
            .map(|(a, _)| a.len())
            .ok_or_else(|| Error::Degenerate("no halfspaces".into()))?;
        let mut rows = Vec::with_capacity(halfspaces.len());
        for (a, b) in halfspaces {
            crate::error::check_dim(d, a.len())?;
            let n = a.norm();
            if n == 0.0 {
                if *b < 0.0 {
                    return Err(Error::Degenerate("empty intersection".into()));
                }
                continue;
            }
            rows.push((a / n, b / n));
        }
        let center = match interior {
            Some(c) => c.clone(),
            None => {
                let (c, r) = chebyshev_center(&rows)?;
                let scale = c.amax().max(1.0);
                if r <= 1e-10 * scale {
                    return Err(Error::Degenerate("intersection has empty interior".into()));
                }
                c
            }
        };
        let mut min_slack = f64::INFINITY;
        let dual: Vec<Vector> = rows
            .iter()
            .map(|(a, b)| {
                let s = b - a.dot(&center);
                min_slack = min_slack.min(s);
                a / s
            })
            .collect();
        if !(min_slack > 0.0) {
            return Err(Error::Precondition("reference point is not interior".into()));
        }
        let dual_hull = convex_hull(&dual, HULL_EPS)
            .map_err(|_| Error::Domain("halfspaces do not bound a region".into()))?;
        // Dual facets n·q <= o correspond to vertices center + n/o.
        let dual_extent = dual_hull.eps / HULL_EPS;
        let mut verts: Vec<Vector> = Vec::new();
        for f in &dual_hull.facets {
            if f.offset <= 1e-12 * dual_extent {
                return Err(Error::Domain("halfspaces do not bound a region".into()));
            }
            let v = &center + &f.normal / f.offset;
            if !verts.iter().any(|w| (w - &v).norm() <= 1e-12 * (1.0 + v.norm())) {
                verts.push(v);
            }
        }
        Polytope::from_points(&verts)
    }

    pub fn dim(&self) -> usize {
        self.interior.len()
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Largest coordinate range of the vertex set.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn interior_point(&self) -> &Vector {
        &self.interior
    }

    /// Boundary triangulation: each item lists the `d` vertices of one simplex;
    /// coning them to [`Self::interior_point`] triangulates the polytope.
    pub fn boundary_simplices(&self) -> impl Iterator<Item = Vec<&Vector>> + '_ {
        self.simplices
            .iter()
            .map(move |s| s.iter().map(|&i| &self.hull_points[i]).collect())
    }

    pub fn support(&self, u: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.facets.iter().all(|h| h.slack(x) >= -tol)
    }

    pub fn contains_strict(&self, x: &Vector, margin: f64) -> bool {
        self.facets.iter().all(|h| h.slack(x) > margin)
    }

    /// Parameter interval `{α : x + α u ∈ P}`.
    pub fn line_range(&self, x: &Vector, u: &Vector) -> Option<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for h in &self.facets {
            let nu = h.normal.dot(u);
            let s = h.slack(x);
            if nu.abs() < 1e-15 {
                if s < 0.0 {
                    return None;
                }
            } else if nu > 0.0 {
                hi = hi.min(s / nu);
            } else {
                lo = lo.max(s / nu);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    pub fn halfspace_pairs(&self) -> Vec<(Vector, f64)> {
        self.facets
            .iter()
            .map(|h| (h.normal.clone(), h.offset))
            .collect()
    }

    /// Center and radius of the largest inscribed ball.
    pub fn chebyshev_ball(&self) -> Result<(Vector, f64)> {
        chebyshev_center(&self.halfspace_pairs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    fn square() -> Polytope {
        Polytope::from_points(&[
            vector(&[-1.0, -1.0]),
            vector(&[1.0, -1.0]),
            vector(&[1.0, 1.0]),
            vector(&[-1.0, 1.0]),
            vector(&[0.0, 1.0]),
            vector(&[0.2, 0.3]),
        ])
        .unwrap()
    }

    #[test]
    fn square_has_four_facets_and_vertices() {
        let s = square();
        assert_eq!(s.vertices().len(), 4);
        assert_eq!(s.facets().len(), 4);
        assert!((s.volume() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn halfspace_roundtrip() {
        let s = square();
        let t = Polytope::from_halfspaces(&s.halfspace_pairs(), None).unwrap();
        assert_eq!(t.vertices().len(), 4);
        assert!((t.volume() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn unbounded_rejected() {
        let hs = vec![(vector(&[1.0, 0.0]), 1.0), (vector(&[0.0, 1.0]), 1.0)];
        assert!(Polytope::from_halfspaces(&hs, Some(&vector(&[0.0, 0.0]))).is_err());
    }

    #[test]
    fn line_range_square() {
        let s = square();
        let (lo, hi) = s.line_range(&vector(&[0.0, 0.5]), &vector(&[1.0, 0.0])).unwrap();
        assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }
}
