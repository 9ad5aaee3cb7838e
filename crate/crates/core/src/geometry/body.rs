use nalgebra::SymmetricEigen;

use super::{
    check_finite, check_spd, sphere_directions, symmetrize, AffineMap, Matrix, Polytope, Subspace,
    Vector,
};
use crate::error::{check_dim, Error, Result};

/// `{x : (x − c)ᵀ A (x − c) <= 1}` with `A` symmetric positive definite.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    center: Vector,
    shape: Matrix,
    inv_shape: Matrix,
}

impl Ellipsoid {
    pub fn new(center: Vector, shape: Matrix) -> Result<Self> {
        check_finite(&center)?;
        check_dim(center.len(), shape.nrows())?;
        check_spd(&shape, 1e-10)?;
        let shape = symmetrize(&shape);
        let inv_shape = symmetrize(
            &shape
                .clone()
                .cholesky()
                .expect("checked positive definite")
                .inverse(),
        );
        Ok(Ellipsoid {
            center,
            shape,
            inv_shape,
        })
    }

    /// Ellipsoid given by its inverse shape (the covariance-like form used by
    /// support functions and projections).
    pub fn from_inverse_shape(center: Vector, inv_shape: Matrix) -> Result<Self> {
        check_spd(&inv_shape, 1e-10)?;
        let shape = inv_shape
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Domain("inverse shape not positive definite".into()))?
            .inverse();
        Ellipsoid::new(center, symmetrize(&shape))
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn shape(&self) -> &Matrix {
        &self.shape
    }

    pub fn inv_shape(&self) -> &Matrix {
        &self.inv_shape
    }

    fn quad(&self, x: &Vector) -> f64 {
        let y = x - &self.center;
        y.dot(&(&self.shape * &y))
    }
}

#[derive(Clone, Debug)]
pub struct Ball {
    center: Vector,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        check_finite(&center)?;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain("ball radius must be positive".into()));
        }
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn to_ellipsoid(&self) -> Ellipsoid {
        let d = self.center.len();
        Ellipsoid::new(
            self.center.clone(),
            Matrix::identity(d, d) / (self.radius * self.radius),
        )
        .expect("ball shape is positive definite")
    }
}

/// A convex body: compact, convex, with nonempty interior.
#[derive(Clone, Debug)]
pub enum ConvexBody {
    VPolytope(Polytope),
    Ellipsoid(Ellipsoid),
    Ball(Ball),
}

/// Result of [`ConvexBody::intersect_with_reflection`]; `approximate` is set when
/// curved bodies were replaced by circumscribed polytopes.
#[derive(Clone, Debug)]
pub struct Symmetrized {
    pub body: ConvexBody,
    pub approximate: bool,
}

/// Support directions per dimension for polyhedral approximations.
pub const APPROX_DIRECTIONS_PER_DIM: usize = 200;

impl ConvexBody {
    pub fn vpolytope(vertices: &[Vector]) -> Result<Self> {
        Ok(ConvexBody::VPolytope(Polytope::from_points(vertices)?))
    }

    pub fn ellipsoid(center: Vector, shape: Matrix) -> Result<Self> {
        Ok(ConvexBody::Ellipsoid(Ellipsoid::new(center, shape)?))
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        Ok(ConvexBody::Ball(Ball::new(center, radius)?))
    }

    pub fn unit_ball(d: usize) -> Self {
        ConvexBody::Ball(Ball::new(Vector::zeros(d), 1.0).expect("unit ball"))
    }

    /// The cube `[lo, hi]^d`.
    pub fn cube(d: usize, lo: f64, hi: f64) -> Result<Self> {
        let pts: Vec<Vector> = (0..1usize << d)
            .map(|m| Vector::from_fn(d, |i, _| if m >> i & 1 == 1 { hi } else { lo }))
            .collect();
        Self::vpolytope(&pts)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::VPolytope(p) => p.dim(),
            ConvexBody::Ellipsoid(e) => e.center.len(),
            ConvexBody::Ball(b) => b.center.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConvexBody::VPolytope(_) => "vpolytope",
            ConvexBody::Ellipsoid(_) => "ellipsoid",
            ConvexBody::Ball(_) => "ball",
        }
    }

    pub fn is_ellipsoidal(&self) -> bool {
        !matches!(self, ConvexBody::VPolytope(_))
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            ConvexBody::VPolytope(p) => Some(p),
            _ => None,
        }
    }

    /// Center for ellipsoids and balls.
    pub fn center(&self) -> Option<&Vector> {
        match self {
            ConvexBody::VPolytope(_) => None,
            ConvexBody::Ellipsoid(e) => Some(&e.center),
            ConvexBody::Ball(b) => Some(&b.center),
        }
    }

    /// Some strictly interior point.
    pub fn interior_point(&self) -> Vector {
        match self {
            ConvexBody::VPolytope(p) => p.interior_point().clone(),
            ConvexBody::Ellipsoid(e) => e.center.clone(),
            ConvexBody::Ball(b) => b.center.clone(),
        }
    }

    /// h_K(u) = max over K of ⟨x, u⟩.
    pub fn support(&self, u: &Vector) -> Result<f64> {
        check_dim(self.dim(), u.len())?;
        if u.iter().all(|&x| x == 0.0) {
            return Err(Error::Domain("support direction must be nonzero".into()));
        }
        Ok(self.support_raw(u))
    }

    /// Support without argument checks; zero direction gives zero.
    pub(crate) fn support_raw(&self, u: &Vector) -> f64 {
        match self {
            ConvexBody::VPolytope(p) => p.support(u),
            ConvexBody::Ellipsoid(e) => {
                e.center.dot(u) + u.dot(&(&e.inv_shape * u)).max(0.0).sqrt()
            }
            ConvexBody::Ball(b) => b.center.dot(u) + b.radius * u.norm(),
        }
    }

    /// h_K(u) + h_K(−u).
    pub fn width(&self, u: &Vector) -> f64 {
        self.support_raw(u) + self.support_raw(&-u)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        match self {
            ConvexBody::VPolytope(p) => p.contains(x, tol),
            ConvexBody::Ellipsoid(e) => e.quad(x) <= 1.0 + tol,
            ConvexBody::Ball(b) => (x - &b.center).norm() <= b.radius + tol,
        }
    }

    /// Membership in the interior with a safety margin.
    pub fn contains_strict(&self, x: &Vector, margin: f64) -> bool {
        match self {
            ConvexBody::VPolytope(p) => p.contains_strict(x, margin),
            ConvexBody::Ellipsoid(e) => e.quad(x) < 1.0 - margin,
            ConvexBody::Ball(b) => (x - &b.center).norm() < b.radius - margin,
        }
    }

    /// Distance-like slack of the origin: positive iff 0 ∈ int K.
    fn origin_slack(&self) -> f64 {
        let d = self.dim();
        let z = Vector::zeros(d);
        match self {
            ConvexBody::VPolytope(p) => p
                .facets()
                .iter()
                .map(|h| h.offset / p.extent().max(1e-300))
                .fold(f64::INFINITY, f64::min),
            ConvexBody::Ellipsoid(e) => 1.0 - e.quad(&z),
            ConvexBody::Ball(b) => 1.0 - b.center.norm() / b.radius,
        }
    }

    pub fn origin_is_interior(&self) -> bool {
        self.origin_slack() > 1e-10
    }

    pub(crate) fn require_origin_interior(&self) -> Result<()> {
        if self.origin_is_interior() {
            Ok(())
        } else {
            Err(Error::Precondition("origin is not an interior point of the body".into()))
        }
    }

    /// Minkowski functional ‖x‖_K = inf{λ > 0 : x ∈ λK}; requires 0 ∈ int K.
    pub fn gauge(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        self.require_origin_interior()?;
        Ok(self.gauge_raw(x))
    }

    pub(crate) fn gauge_raw(&self, x: &Vector) -> f64 {
        if x.iter().all(|&c| c == 0.0) {
            return 0.0;
        }
        match self {
            ConvexBody::VPolytope(p) => p
                .facets()
                .iter()
                .map(|h| h.normal.dot(x) / h.offset)
                .fold(0.0, f64::max),
            ConvexBody::Ellipsoid(e) => ellipsoid_gauge(&e.shape, &e.center, x),
            ConvexBody::Ball(b) => {
                let d = b.center.len();
                ellipsoid_gauge(
                    &(Matrix::identity(d, d) / (b.radius * b.radius)),
                    &b.center,
                    x,
                )
            }
        }
    }

    /// Polar body K° = {y : ⟨x, y⟩ <= 1 for all x ∈ K}; requires 0 ∈ int K.
    pub fn polar(&self) -> Result<ConvexBody> {
        self.require_origin_interior()?;
        match self {
            ConvexBody::VPolytope(p) => {
                let pts: Vec<Vector> = p.facets().iter().map(|h| &h.normal / h.offset).collect();
                ConvexBody::vpolytope(&pts)
            }
            ConvexBody::Ball(b) if b.center.iter().all(|&c| c == 0.0) => {
                ConvexBody::ball(b.center.clone(), 1.0 / b.radius)
            }
            ConvexBody::Ball(b) => ConvexBody::Ellipsoid(b.to_ellipsoid()).polar(),
            ConvexBody::Ellipsoid(e) => {
                // K° = {y : yᵀ(A⁻¹ − ccᵀ)y + 2⟨c, y⟩ <= 1}, completed to a square.
                let c = &e.center;
                let q = symmetrize(&(&e.inv_shape - c * c.transpose()));
                let qinv = q
                    .clone()
                    .cholesky()
                    .ok_or_else(|| Error::Precondition("origin is not interior".into()))?
                    .inverse();
                let qc = &qinv * c;
                let rho = 1.0 + c.dot(&qc);
                ConvexBody::ellipsoid(-qc, symmetrize(&(q / rho)))
            }
        }
    }

    /// Orthogonal projection onto `e`, expressed in the coordinates of its basis.
    pub fn project(&self, e: &Subspace) -> Result<ConvexBody> {
        check_dim(self.dim(), e.ambient_dim())?;
        match self {
            ConvexBody::Ball(b) => ConvexBody::ball(e.coords(&b.center), b.radius),
            _ => self.linear_image(&e.matrix().transpose()),
        }
    }

    /// Image under a surjective linear map ℝ^d → ℝ^k given as a k×d matrix.
    pub fn linear_image(&self, l: &Matrix) -> Result<ConvexBody> {
        check_dim(self.dim(), l.ncols())?;
        match self {
            ConvexBody::VPolytope(p) => {
                let pts: Vec<Vector> = p.vertices().iter().map(|v| l * v).collect();
                ConvexBody::vpolytope(&pts)
            }
            ConvexBody::Ellipsoid(e) => {
                let inv = symmetrize(&(l * &e.inv_shape * l.transpose()));
                Ok(ConvexBody::Ellipsoid(Ellipsoid::from_inverse_shape(
                    l * &e.center,
                    inv,
                )?))
            }
            ConvexBody::Ball(b) => ConvexBody::Ellipsoid(b.to_ellipsoid()).linear_image(l),
        }
    }

    pub fn affine_image(&self, t: &AffineMap) -> Result<ConvexBody> {
        check_dim(self.dim(), t.dim())?;
        let m = t.matrix();
        match self {
            ConvexBody::VPolytope(p) => {
                let pts: Vec<Vector> = p.vertices().iter().map(|v| t.apply(v)).collect();
                ConvexBody::vpolytope(&pts)
            }
            ConvexBody::Ellipsoid(e) => {
                let minv = m.clone().try_inverse().ok_or_else(|| Error::Domain("singular map".into()))?;
                let shape = symmetrize(&(minv.transpose() * &e.shape * &minv));
                ConvexBody::ellipsoid(t.apply(&e.center), shape)
            }
            ConvexBody::Ball(b) => {
                let d = b.center.len();
                let mtm = m.transpose() * m;
                let s2 = mtm.trace() / d as f64;
                let conformal = (&mtm - Matrix::identity(d, d) * s2).amax() <= 1e-12 * s2.max(1.0);
                if conformal {
                    ConvexBody::ball(t.apply(&b.center), b.radius * s2.sqrt())
                } else {
                    ConvexBody::Ellipsoid(b.to_ellipsoid()).affine_image(t)
                }
            }
        }
    }

    pub fn translate(&self, v: &Vector) -> Result<ConvexBody> {
        self.affine_image(&AffineMap::translation_by(v.clone()))
    }

    /// Homothety about the origin.
    pub fn scale(&self, s: f64) -> Result<ConvexBody> {
        let d = self.dim();
        self.affine_image(&AffineMap::linear(Matrix::identity(d, d) * s)?)
    }

    /// K ∩ (−K); requires 0 ∈ int K.
    pub fn intersect_with_reflection(&self) -> Result<Symmetrized> {
        self.require_origin_interior()?;
        match self {
            ConvexBody::VPolytope(p) => {
                let mut hs = p.halfspace_pairs();
                let reflected: Vec<(Vector, f64)> =
                    hs.iter().map(|(a, b)| (-a, *b)).collect();
                hs.extend(reflected);
                let body = ConvexBody::VPolytope(Polytope::from_halfspaces(
                    &hs,
                    Some(&Vector::zeros(p.dim())),
                )?);
                Ok(Symmetrized {
                    body,
                    approximate: false,
                })
            }
            _ => {
                let c = self.center().expect("ellipsoidal body");
                if c.iter().all(|&x| x == 0.0) {
                    return Ok(Symmetrized {
                        body: self.clone(),
                        approximate: false,
                    });
                }
                let d = self.dim();
                let hs: Vec<(Vector, f64)> = sphere_directions(d, APPROX_DIRECTIONS_PER_DIM * d)
                    .into_iter()
                    .map(|u| {
                        let h = self.support_raw(&u).min(self.support_raw(&-&u));
                        (u, h)
                    })
                    .collect();
                let body = ConvexBody::VPolytope(Polytope::from_halfspaces(
                    &hs,
                    Some(&Vector::zeros(d)),
                )?);
                Ok(Symmetrized {
                    body,
                    approximate: true,
                })
            }
        }
    }

    /// Largest inscribed ball (exact for all three kinds).
    pub fn inscribed_ball(&self) -> Result<(Vector, f64)> {
        match self {
            ConvexBody::VPolytope(p) => p.chebyshev_ball(),
            ConvexBody::Ellipsoid(e) => {
                let eig = SymmetricEigen::new(e.shape.clone());
                let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
                Ok((e.center.clone(), 1.0 / lmax.sqrt()))
            }
            ConvexBody::Ball(b) => Ok((b.center.clone(), b.radius)),
        }
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vector, Vector) {
        let d = self.dim();
        let mut lo = Vector::zeros(d);
        let mut hi = Vector::zeros(d);
        for i in 0..d {
            let mut e = Vector::zeros(d);
            e[i] = 1.0;
            hi[i] = self.support_raw(&e);
            lo[i] = -self.support_raw(&-e);
        }
        (lo, hi)
    }

    /// Parameter interval `{α : x + α u ∈ K}`, or `None` if the line misses K.
    pub fn line_range(&self, x: &Vector, u: &Vector) -> Option<(f64, f64)> {
        match self {
            ConvexBody::VPolytope(p) => p.line_range(x, u),
            ConvexBody::Ellipsoid(e) => quadric_range(&e.shape, &e.center, x, u),
            ConvexBody::Ball(b) => {
                let d = b.center.len();
                quadric_range(
                    &(Matrix::identity(d, d) / (b.radius * b.radius)),
                    &b.center,
                    x,
                    u,
                )
            }
        }
    }

    /// Circumscribed polytope from supporting halfspaces in `n` directions.
    pub fn circumscribed_polytope(&self, n: usize) -> Result<Polytope> {
        let hs: Vec<(Vector, f64)> = sphere_directions(self.dim(), n)
            .into_iter()
            .map(|u| {
                let h = self.support_raw(&u);
                (u, h)
            })
            .collect();
        Polytope::from_halfspaces(&hs, Some(&self.interior_point()))
    }

    /// Inscribed polytope whose vertices are boundary points in `n` directions
    /// from the interior point.
    pub fn inscribed_polytope(&self, n: usize) -> Result<Polytope> {
        if let ConvexBody::VPolytope(p) = self {
            return Ok(p.clone());
        }
        let c = self.interior_point();
        let pts: Vec<Vector> = sphere_directions(self.dim(), n)
            .into_iter()
            .filter_map(|u| self.line_range(&c, &u).map(|(_, hi)| &c + u * hi))
            .collect();
        Polytope::from_points(&pts)
    }

    /// Symmetry about the origin: h(u) = h(−u), tested on vertices for polytopes
    /// and on the center for ellipsoids.
    pub fn is_origin_symmetric(&self, tol: f64) -> bool {
        match self {
            ConvexBody::VPolytope(p) => p.vertices().iter().all(|v| p.contains(&-v, tol)),
            _ => self.center().map(|c| c.norm() <= tol).unwrap_or(false),
        }
    }
}

fn ellipsoid_gauge(shape: &Matrix, center: &Vector, x: &Vector) -> f64 {
    // largest t with (t x − c)ᵀA(t x − c) = 1; gauge is 1/t
    let ax = shape * x;
    let a = x.dot(&ax);
    let b = center.dot(&ax);
    let cc = center.dot(&(shape * center)) - 1.0;
    let disc = (b * b - a * cc).max(0.0);
    let t = (b + disc.sqrt()) / a;
    1.0 / t
}

fn quadric_range(shape: &Matrix, center: &Vector, x: &Vector, u: &Vector) -> Option<(f64, f64)> {
    let y = x - center;
    let au = shape * u;
    let a = u.dot(&au);
    let b = y.dot(&au);
    let c = y.dot(&(shape * &y)) - 1.0;
    let disc = b * b - a * c;
    if disc < 0.0 || a <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some(((-b - s) / a, (-b + s) / a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;
    use rand::RngExt;

    fn square() -> ConvexBody {
        ConvexBody::cube(2, -1.0, 1.0).unwrap()
    }

    fn triangle() -> ConvexBody {
        ConvexBody::vpolytope(&[vector(&[-1.0, -1.0]), vector(&[2.0, -1.0]), vector(&[-1.0, 2.0])])
            .unwrap()
    }

    #[test]
    fn support_examples() {
        assert!((square().support(&vector(&[1.0, 1.0])).unwrap() - 2.0).abs() < 1e-15);
        let b = ConvexBody::unit_ball(3);
        let u = vector(&[0.6, 0.0, 0.8]);
        assert!((b.support(&u).unwrap() - 1.0).abs() < 1e-15);
        let t = ConvexBody::vpolytope(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])])
            .unwrap();
        assert_eq!(t.support(&vector(&[1.0, 0.0])).unwrap(), 1.0);
        assert!(matches!(b.support(&Vector::zeros(3)), Err(Error::Domain(_))));
    }

    #[test]
    fn gauge_examples() {
        let b = ConvexBody::unit_ball(2);
        assert!((b.gauge(&vector(&[0.3, 0.4])).unwrap() - 0.5).abs() < 1e-15);
        assert!((square().gauge(&vector(&[0.5, -1.0])).unwrap() - 1.0).abs() < 1e-15);
        let off = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        assert!(matches!(off.gauge(&vector(&[0.5, 0.5])), Err(Error::Precondition(_))));
    }

    #[test]
    fn gauge_matches_bisection_on_triangle() {
        let t = triangle();
        let x = vector(&[1.0, 0.0]);
        let g = t.gauge(&x).unwrap();
        // bisection oracle on containment of x / λ
        let (mut lo, mut hi) = (1e-6, 100.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if t.contains(&(&x / mid), 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((g - hi).abs() < 1e-9, "{g} vs {hi}");
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polar_of_square_is_cross_polytope() {
        let p = square().polar().unwrap();
        let poly = p.as_polytope().unwrap();
        assert_eq!(poly.vertices().len(), 4);
        for v in poly.vertices() {
            assert!((v.amax() - 1.0).abs() < 1e-12);
            assert!((v.iter().map(|x| x.abs()).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let b = ConvexBody::unit_ball(3).polar().unwrap();
        assert!(matches!(b, ConvexBody::Ball(ref x) if (x.radius() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn polar_of_ellipse_inverts_shape() {
        // x²/4 + y² <= 1 has shape diag(1/4, 1); its polar has shape diag(4, 1)
        let e = ConvexBody::ellipsoid(
            Vector::zeros(2),
            Matrix::from_diagonal(&vector(&[0.25, 1.0])),
        )
        .unwrap();
        let p = e.polar().unwrap();
        if let ConvexBody::Ellipsoid(ref q) = p {
            assert!((q.shape() - Matrix::from_diagonal(&vector(&[4.0, 1.0]))).amax() < 1e-12);
        } else {
            panic!("expected ellipsoid");
        }
        let mut rng = crate::rng::rng(5);
        for _ in 0..100 {
            let u = crate::geometry::random_direction(2, &mut rng) * rng.random_range(0.1..3.0);
            assert!((e.support(&u).unwrap() - p.gauge(&u).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn polar_of_offcenter_ellipsoid_dualizes_support() {
        let e = ConvexBody::ellipsoid(
            vector(&[0.3, -0.2, 0.1]),
            Matrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, 0.5, 0.1, 0.0, 0.1, 2.0]),
        )
        .unwrap();
        let p = e.polar().unwrap();
        let mut rng = crate::rng::rng(6);
        for _ in 0..100 {
            let u = crate::geometry::random_direction(3, &mut rng) * rng.random_range(0.1..3.0);
            assert!((e.support(&u).unwrap() - p.gauge(&u).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn projections() {
        let e = Subspace::coordinate(3, &[0, 1]).unwrap();
        let cube = ConvexBody::cube(3, -1.0, 1.0).unwrap();
        let sq = cube.project(&e).unwrap();
        assert_eq!(sq.as_polytope().unwrap().vertices().len(), 4);
        assert!((sq.as_polytope().unwrap().volume() - 4.0).abs() < 1e-12);
        let disk = ConvexBody::unit_ball(3).project(&e).unwrap();
        assert!(matches!(disk, ConvexBody::Ball(ref b) if b.radius() == 1.0));
    }

    #[test]
    fn ellipsoid_projection_support_agrees() {
        let e = ConvexBody::ellipsoid(
            vector(&[0.5, 0.0, -0.5]),
            Matrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.0, 0.0, 0.1, 0.0, 0.7]),
        )
        .unwrap();
        let s = Subspace::span(3, &[vector(&[1.0, 1.0, 0.0]), vector(&[0.0, 1.0, 1.0])]).unwrap();
        let p = e.project(&s).unwrap();
        let mut rng = crate::rng::rng(8);
        for _ in 0..50 {
            let y = crate::geometry::random_direction(2, &mut rng);
            let x = s.embed(&y);
            assert!((p.support(&y).unwrap() - e.support(&x).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn reflection_intersection_of_triangle_is_hexagon() {
        let s = triangle().intersect_with_reflection().unwrap();
        assert!(!s.approximate);
        let p = s.body.as_polytope().unwrap();
        assert_eq!(p.vertices().len(), 6);
        for v in p.vertices() {
            assert!(s.body.gauge(&-v).unwrap() <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn symmetric_body_is_fixed_by_reflection_intersection() {
        let s = square().intersect_with_reflection().unwrap();
        assert!((s.body.as_polytope().unwrap().volume() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn affine_images() {
        let b = ConvexBody::unit_ball(2).scale(2.0).unwrap();
        assert!(matches!(b, ConvexBody::Ball(ref x) if (x.radius() - 2.0).abs() < 1e-15));
        let shear = AffineMap::linear(Matrix::from_row_slice(2, 2, &[1.0, 0.7, 0.0, 1.0])).unwrap();
        let p = square().affine_image(&shear).unwrap();
        assert!((p.as_polytope().unwrap().volume() - 4.0).abs() < 1e-12);
        let sing = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(AffineMap::linear(sing).is_err());
    }

    #[test]
    fn degenerate_polytope_rejected() {
        let seg = ConvexBody::vpolytope(&[vector(&[0.0, 0.0]), vector(&[1.0, 1.0])]);
        assert!(matches!(seg, Err(Error::Degenerate(_))));
    }
}
