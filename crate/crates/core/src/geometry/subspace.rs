use nalgebra::DMatrix;

use super::{complement_basis, orthonormalize, Matrix, Vector};
use crate::error::{Error, Result};

/// A linear subspace of ℝ^d carried by an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// Accepts a basis that is already orthonormal within 1e-10.
    pub fn from_orthonormal(ambient: usize, basis: Vec<Vector>) -> Result<Self> {
        if basis.is_empty() || basis.len() > ambient {
            return Err(Error::Domain(format!(
                "subspace dimension {} outside 1..={}",
                basis.len(),
                ambient
            )));
        }
        for (i, u) in basis.iter().enumerate() {
            crate::error::check_dim(ambient, u.len())?;
            for (j, v) in basis.iter().enumerate().take(i + 1) {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (u.dot(v) - expect).abs() > 1e-10 {
                    return Err(Error::Domain("basis is not orthonormal".into()));
                }
            }
        }
        Ok(Subspace { ambient, basis })
    }

    /// Span of arbitrary vectors; fails if they are linearly dependent.
    pub fn span(ambient: usize, vectors: &[Vector]) -> Result<Self> {
        for v in vectors {
            crate::error::check_dim(ambient, v.len())?;
        }
        let basis = orthonormalize(vectors, 1e-10);
        if basis.len() != vectors.len() {
            return Err(Error::Degenerate("spanning vectors are linearly dependent".into()));
        }
        Self::from_orthonormal(ambient, basis)
    }

    /// Span of the given coordinate axes.
    pub fn coordinate(ambient: usize, axes: &[usize]) -> Result<Self> {
        let basis = axes
            .iter()
            .map(|&i| {
                if i >= ambient {
                    return Err(Error::Domain(format!("axis {i} out of range")));
                }
                let mut e = Vector::zeros(ambient);
                e[i] = 1.0;
                Ok(e)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::span(ambient, &basis)
    }

    pub fn whole(ambient: usize) -> Self {
        Self::coordinate(ambient, &(0..ambient).collect::<Vec<_>>()).expect("valid axes")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// d×k matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> Matrix {
        DMatrix::from_columns(&self.basis)
    }

    /// Orthogonal complement; `None` when the subspace is all of ℝ^d.
    pub fn complement(&self) -> Option<Subspace> {
        let c = complement_basis(&self.basis, self.ambient);
        if c.is_empty() {
            None
        } else {
            Some(Subspace {
                ambient: self.ambient,
                basis: c,
            })
        }
    }

    /// Coordinates of the orthogonal projection of `x` in this basis.
    pub fn coords(&self, x: &Vector) -> Vector {
        Vector::from_iterator(self.dim(), self.basis.iter().map(|b| b.dot(x)))
    }

    /// Point of ℝ^d with the given coordinates.
    pub fn embed(&self, y: &Vector) -> Vector {
        let mut x = Vector::zeros(self.ambient);
        for (b, c) in self.basis.iter().zip(y.iter()) {
            x.axpy(*c, b, 1.0);
        }
        x
    }

    pub fn project(&self, x: &Vector) -> Vector {
        self.embed(&self.coords(x))
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        (x - self.project(x)).norm() <= tol * x.norm().max(1.0)
    }

    /// Image under a linear map, orthonormalized.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        let imgs: Vec<Vector> = self.basis.iter().map(|b| m * b).collect();
        Subspace::span(self.ambient, &imgs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    #[test]
    fn coords_roundtrip() {
        let s = Subspace::span(3, &[vector(&[1.0, 2.0, 0.0]), vector(&[0.0, 1.0, 1.0])]).unwrap();
        let y = vector(&[0.3, -1.2]);
        let x = s.embed(&y);
        assert!((s.coords(&x) - y).norm() < 1e-12);
        assert!(s.contains(&x, 1e-12));
        let c = s.complement().unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.basis()[0].dot(&x).abs() < 1e-12);
    }

    #[test]
    fn rejects_dependent() {
        assert!(Subspace::span(2, &[vector(&[1.0, 0.0]), vector(&[2.0, 0.0])]).is_err());
        assert!(Subspace::from_orthonormal(2, vec![vector(&[1.0, 1.0])]).is_err());
    }
}
