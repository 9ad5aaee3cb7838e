//! Small linear programs: margin maximization and Chebyshev centers.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use super::Vector;
use crate::error::{Error, Result};

/// Constraint `a·x + weight·t <= b`.
#[derive(Clone, Debug)]
pub struct MarginRow {
    pub a: Vector,
    pub weight: f64,
    pub b: f64,
}

/// Maximizes the common slack `t` (capped at `t_cap`) over `x ∈ ℝ^dim`.
/// Rows with zero weight are hard constraints.
pub fn max_margin(dim: usize, rows: &[MarginRow], t_cap: f64) -> Result<(Vector, f64)> {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..dim)
        .map(|_| problem.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let t = problem.add_var(1.0, (f64::NEG_INFINITY, t_cap));
    for row in rows {
        crate::error::check_dim(dim, row.a.len())?;
        let mut expr: Vec<(microlp::Variable, f64)> = xs
            .iter()
            .zip(row.a.iter())
            .filter(|(_, &c)| c != 0.0)
            .map(|(&v, &c)| (v, c))
            .collect();
        if row.weight != 0.0 {
            expr.push((t, row.weight));
        }
        if expr.is_empty() {
            if row.b < 0.0 {
                return Err(Error::Lp("infeasible".into()));
            }
            continue;
        }
        problem.add_constraint(expr.as_slice(), ComparisonOp::Le, row.b);
    }
    let outcome = problem.solve().map_err(|e| Error::Lp(e.to_string()))?;
    let sol = outcome
        .into_solution()
        .map_err(|_| Error::Lp("solver interrupted".into()))?;
    let x = Vector::from_iterator(dim, xs.iter().map(|&v| sol.var_value(v)));
    Ok((x, sol.var_value(t)))
}

/// Largest ball inside `{x : a_i·x <= b_i}`; returns center and radius.
pub fn chebyshev_center(halfspaces: &[(Vector, f64)]) -> Result<(Vector, f64)> {
    let dim = halfspaces
        .first()
        .map(|(a, _)| a.len())
        .ok_or_else(|| Error::Lp("no constraints".into()))?;
    let rows: Vec<MarginRow> = halfspaces
        .iter()
        .map(|(a, b)| MarginRow {
            a: a.clone(),
            weight: a.norm(),
            b: *b,
        })
        .collect();
    let (x, r) = max_margin(dim, &rows, 1e6)?;
    if r >= 1e6 {
        return Err(Error::Lp("unbounded region".into()));
    }
    Ok((x, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    #[test]
    fn square_center() {
        let hs = vec![
            (vector(&[1.0, 0.0]), 3.0),
            (vector(&[-1.0, 0.0]), -1.0),
            (vector(&[0.0, 1.0]), 1.0),
            (vector(&[0.0, -1.0]), 1.0),
        ];
        let (c, r) = chebyshev_center(&hs).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        assert!((c - vector(&[2.0, 0.0])).norm() < 1e-9);
    }

    #[test]
    fn triangle_incircle() {
        // 3-4-5 right triangle has inradius 1
        let hs = vec![
            (vector(&[0.0, -1.0]), 0.0),
            (vector(&[-1.0, 0.0]), 0.0),
            (vector(&[3.0, 4.0]), 12.0),
        ];
        let (c, r) = chebyshev_center(&hs).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        assert!((c - vector(&[1.0, 1.0])).norm() < 1e-9);
    }
}
