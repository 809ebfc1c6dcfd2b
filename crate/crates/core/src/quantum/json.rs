//! JSON file formats for states and measurements.
//!
//! ```text
//! density:     { "dim": d, "re": [[...]], "im": [[...]] }
//! measurement: { "dim": d, "kind": "pvm"|"povm", "elements": [ {"re": [[...]], "im": [[...]]} ] }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix};
use crate::quantum::{DensityMatrix, Measurement, MeasurementKind};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementJson {
    pub dim: usize,
    pub kind: MeasurementKind,
    pub elements: Vec<MatrixJson>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&num_complex::Complex64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self { re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    pub fn to_matrix(&self, dim: usize) -> Result<ComplexMatrix> {
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == dim && rows.iter().all(|r| r.len() == dim);
        if !shape_ok(&self.re) {
            return Err(Error::Parse(format!("\"re\" is not a {dim}x{dim} array")));
        }
        if !self.im.is_empty() && !shape_ok(&self.im) {
            return Err(Error::Parse(format!("\"im\" is not a {dim}x{dim} array")));
        }
        Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
            let im = if self.im.is_empty() { 0.0 } else { self.im[i][j] };
            c(self.re[i][j], im)
        }))
    }
}

impl DensityJson {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let m = MatrixJson::from_matrix(rho.matrix());
        Self { dim: rho.dim(), re: m.re, im: m.im }
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        let m = MatrixJson { re: self.re.clone(), im: self.im.clone() }.to_matrix(self.dim)?;
        DensityMatrix::new(m)
    }
}

impl MeasurementJson {
    pub fn from_measurement(meas: &Measurement) -> Self {
        Self {
            dim: meas.dim(),
            kind: meas.kind(),
            elements: meas.elements().iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    pub fn to_measurement(&self) -> Result<Measurement> {
        let elements = self
            .elements
            .iter()
            .map(|e| e.to_matrix(self.dim))
            .collect::<Result<Vec<_>>>()?;
        Measurement::new(elements, self.kind)
    }
}

pub fn parse_density(text: &str) -> Result<DensityMatrix> {
    let raw: DensityJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.to_state()
}

pub fn parse_measurement(text: &str) -> Result<Measurement> {
    let raw: MeasurementJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.to_measurement()
}
