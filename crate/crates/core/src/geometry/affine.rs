use super::{Matrix, Vector};
use crate::error::{check_dim, Error, Result};

/// Invertible affine map x ↦ Mx + t.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    matrix: Matrix,
    translation: Vector,
}

impl AffineMap {
    pub fn new(matrix: Matrix, translation: Vector) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Domain("affine map matrix is not square".into()));
        }
        check_dim(matrix.nrows(), translation.len())?;
        if matrix.iter().chain(translation.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite affine map".into()));
        }
        // row scaling before the determinant test
        let mut scaled = matrix.clone();
        for mut row in scaled.row_iter_mut() {
            let n = row.norm();
            if n == 0.0 {
                return Err(Error::Domain("singular affine map".into()));
            }
            row /= n;
        }
        if scaled.determinant().abs() <= 1e-12 {
            return Err(Error::Domain("singular affine map".into()));
        }
        Ok(AffineMap {
            matrix,
            translation,
        })
    }

    pub fn linear(matrix: Matrix) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(matrix, Vector::zeros(d))
    }

    pub fn identity(d: usize) -> Self {
        AffineMap {
            matrix: Matrix::identity(d, d),
            translation: Vector::zeros(d),
        }
    }

    pub fn translation_by(t: Vector) -> Self {
        let d = t.len();
        AffineMap {
            matrix: Matrix::identity(d, d),
            translation: t,
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn translation(&self) -> &Vector {
        &self.translation
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.matrix * x + &self.translation
    }

    pub fn det(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .expect("invertibility checked at construction");
        let t = -(&inv * &self.translation);
        AffineMap {
            matrix: inv,
            translation: t,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            matrix: &self.matrix * &other.matrix,
            translation: &self.matrix * &other.translation + &self.translation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    #[test]
    fn singular_rejected() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(AffineMap::linear(m).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 3.0]);
        let t = AffineMap::new(m, vector(&[1.0, -1.0])).unwrap();
        let x = vector(&[0.25, 4.0]);
        assert!((t.inverse().apply(&t.apply(&x)) - x).norm() < 1e-12);
    }
}
