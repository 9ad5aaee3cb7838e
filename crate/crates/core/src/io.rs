//! JSON forms of bodies, cylinders and reports.
//!
//! Floats are written with the shortest decimal that parses back to the same
//! value, so a read after a write reproduces the body bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cylinders::Cylinder;
use crate::error::{Error, Result};
use crate::flats::{CoverSolution, Flat, SolverStats};
use crate::geometry::{ConvexBody, Matrix, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodyJson {
    pub kind: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

fn rows(v: &[Vector]) -> Vec<Vec<f64>> {
    v.iter().map(|x| x.iter().cloned().collect()).collect()
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().cloned().collect()).collect()
}

impl From<&ConvexBody> for BodyJson {
    fn from(body: &ConvexBody) -> Self {
        let mut out = BodyJson {
            kind: body.kind().to_string(),
            dim: body.dim(),
            vertices: None,
            center: None,
            shape: None,
            radius: None,
        };
        match body {
            ConvexBody::VPolytope(p) => out.vertices = Some(rows(p.vertices())),
            ConvexBody::Ellipsoid(e) => {
                out.center = Some(e.center().iter().cloned().collect());
                out.shape = Some(matrix_rows(e.shape()));
            }
            ConvexBody::Ball(b) => {
                out.center = Some(b.center().iter().cloned().collect());
                out.radius = Some(b.radius());
            }
        }
        out
    }
}

fn missing(field: &str, kind: &str) -> Error {
    Error::Usage(format!("{kind} body needs a \"{field}\" field"))
}

fn checked_vector(v: &[f64], dim: usize) -> Result<Vector> {
    crate::error::check_dim(dim, v.len())?;
    Ok(Vector::from_column_slice(v))
}

impl BodyJson {
    pub fn to_body(&self) -> Result<ConvexBody> {
        match self.kind.as_str() {
            "vpolytope" => {
                let vs = self.vertices.as_ref().ok_or_else(|| missing("vertices", "vpolytope"))?;
                let pts = vs
                    .iter()
                    .map(|v| checked_vector(v, self.dim))
                    .collect::<Result<Vec<_>>>()?;
                ConvexBody::vpolytope(&pts)
            }
            "ellipsoid" => {
                let c = self.center.as_ref().ok_or_else(|| missing("center", "ellipsoid"))?;
                let s = self.shape.as_ref().ok_or_else(|| missing("shape", "ellipsoid"))?;
                crate::error::check_dim(self.dim, s.len())?;
                for r in s {
                    crate::error::check_dim(self.dim, r.len())?;
                }
                let m = Matrix::from_fn(self.dim, self.dim, |i, j| s[i][j]);
                ConvexBody::ellipsoid(checked_vector(c, self.dim)?, m)
            }
            "ball" => {
                let c = self.center.as_ref().ok_or_else(|| missing("center", "ball"))?;
                let r = self.radius.ok_or_else(|| missing("radius", "ball"))?;
                ConvexBody::ball(checked_vector(c, self.dim)?, r)
            }
            other => Err(Error::Usage(format!(
                "unknown body kind {other:?}; expected vpolytope, ellipsoid or ball"
            ))),
        }
    }
}

pub fn body_to_json(body: &ConvexBody) -> String {
    serde_json::to_string(&BodyJson::from(body)).expect("body serializes")
}

pub fn body_from_json(text: &str) -> Result<ConvexBody> {
    serde_json::from_str::<BodyJson>(text)
        .map_err(|e| Error::Usage(format!("invalid body JSON: {e}")))?
        .to_body()
}

pub fn read_body(path: &Path) -> Result<ConvexBody> {
    body_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_body(path: &Path, body: &ConvexBody) -> Result<()> {
    std::fs::write(path, body_to_json(body))?;
    Ok(())
}

/// `base_vertices` holds polytope bases; other bases go in `base`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderJson {
    pub direction_basis: Vec<Vec<f64>>,
    pub e_basis: Vec<Vec<f64>>,
    #[serde(default)]
    pub base_vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BodyJson>,
}

impl From<&Cylinder> for CylinderJson {
    fn from(c: &Cylinder) -> Self {
        let (base_vertices, base) = match c.base() {
            ConvexBody::VPolytope(p) => (rows(p.vertices()), None),
            other => (Vec::new(), Some(BodyJson::from(other))),
        };
        CylinderJson {
            direction_basis: rows(c.direction().basis()),
            e_basis: rows(c.frame().basis()),
            base_vertices,
            base,
        }
    }
}

impl CylinderJson {
    pub fn to_cylinder(&self) -> Result<Cylinder> {
        let d = self
            .e_basis
            .first()
            .or(self.direction_basis.first())
            .map(|v| v.len())
            .ok_or_else(|| Error::Usage("cylinder needs at least one basis vector".into()))?;
        let basis = |vs: &[Vec<f64>]| -> Result<Vec<Vector>> {
            vs.iter().map(|v| checked_vector(v, d)).collect()
        };
        let direction = Subspace::from_orthonormal(d, basis(&self.direction_basis)?)?;
        let frame = Subspace::from_orthonormal(d, basis(&self.e_basis)?)?;
        let base = match &self.base {
            Some(b) => b.to_body()?,
            None => {
                let pts = self
                    .base_vertices
                    .iter()
                    .map(|v| checked_vector(v, frame.dim()))
                    .collect::<Result<Vec<_>>>()?;
                ConvexBody::vpolytope(&pts)?
            }
        };
        Cylinder::new(direction, frame, base)
    }
}

pub fn cylinders_to_json(cyls: &[Cylinder]) -> String {
    serde_json::to_string(&cyls.iter().map(CylinderJson::from).collect::<Vec<_>>()).expect("cylinders serialize")
}

/// Accepts a single cylinder object or an array of them.
pub fn cylinders_from_json(text: &str) -> Result<Vec<Cylinder>> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("invalid cylinder JSON: {e}")))?;
    let items = match v {
        serde_json::Value::Array(items) => items,
        one => vec![one],
    };
    items
        .into_iter()
        .map(|item| {
            serde_json::from_value::<CylinderJson>(item)
                .map_err(|e| Error::Usage(format!("invalid cylinder JSON: {e}")))?
                .to_cylinder()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatJson {
    pub point: Vec<f64>,
    pub span: Vec<Vec<f64>>,
}

impl From<&Flat> for FlatJson {
    fn from(f: &Flat) -> Self {
        FlatJson {
            point: f.point().iter().cloned().collect(),
            span: rows(f.span().basis()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSolutionJson {
    pub flats: Vec<FlatJson>,
    pub cardinality: usize,
    pub optimal: bool,
    pub lower_bounds: std::collections::BTreeMap<String, f64>,
    pub points_covered: usize,
    pub stats: SolverStats,
}

impl From<&CoverSolution> for CoverSolutionJson {
    fn from(s: &CoverSolution) -> Self {
        CoverSolutionJson {
            flats: s.flats.iter().map(FlatJson::from).collect(),
            cardinality: s.cardinality,
            optimal: s.optimal,
            lower_bounds: s.lower_bounds.clone(),
            points_covered: s.points_covered,
            stats: s.stats.clone(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn report_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
