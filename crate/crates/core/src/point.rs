//! Elements of a cone: dense vectors or dense symmetric matrices.
//!
//! Both kinds share one flat storage so that addition, scaling and the inner
//! product are the same code. For matrices the flat dot product is the trace
//! pairing `⟨A, B⟩ = trace(AB)` (valid because both operands are symmetric).

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry invariant of matrix points.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    Vector,
    Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    kind: PointKind,
    dim: usize,
    data: Vec<f64>,
}

impl Point {
    pub fn vector(data: Vec<f64>) -> Self {
        let dim = data.len();
        Point {
            kind: PointKind::Vector,
            dim,
            data,
        }
    }

    pub fn scalar(x: f64) -> Self {
        Point::vector(vec![x])
    }

    pub fn zeros(dim: usize) -> Self {
        Point::vector(vec![0.0; dim])
    }

    pub fn zero_matrix(n: usize) -> Self {
        Point {
            kind: PointKind::Matrix,
            dim: n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut p = Point::zero_matrix(n);
        for i in 0..n {
            p.data[i * n + i] = 1.0;
        }
        p
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut p = Point::zero_matrix(n);
        for (i, v) in values.iter().enumerate() {
            p.data[i * n + i] = *v;
        }
        p
    }

    /// Builds a matrix point from rows, rejecting non-square or asymmetric input.
    pub fn matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::shape(format!(
                    "matrix rows must have length {n}, found {}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Point::from_flat_matrix(n, data)
    }

    /// Builds a matrix point from row-major data.
    pub fn from_flat_matrix(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::shape(format!(
                "expected {} entries for a {n}x{n} matrix, found {}",
                n * n,
                data.len()
            )));
        }
        let p = Point {
            kind: PointKind::Matrix,
            dim: n,
            data,
        };
        let scale = p.max_abs().max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (p.get(i, j) - p.get(j, i)).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::shape(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(p)
    }

    /// Row-major matrix data that is symmetric by construction (for example
    /// `G·Gᵀ` computed entrywise in a fixed order).
    pub(crate) fn from_flat_matrix_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Point {
            kind: PointKind::Matrix,
            dim: n,
            data,
        }
    }

    pub fn kind(&self) -> PointKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_matrix(&self) -> bool {
        self.kind == PointKind::Matrix
    }

    /// Flat coordinates (row-major for matrices).
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(self.is_matrix());
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        match self.kind {
            PointKind::Vector => vec![self.data.clone()],
            PointKind::Matrix => self.data.chunks(self.dim).map(|r| r.to_vec()).collect(),
        }
    }

    /// The single coordinate of a one-dimensional vector.
    pub fn value(&self) -> f64 {
        debug_assert_eq!(self.data.len(), 1);
        self.data[0]
    }

    fn same_shape(&self, other: &Point) -> Result<()> {
        if self.kind != other.kind || self.dim != other.dim {
            return Err(Error::shape(format!(
                "{:?}({}) vs {:?}({})",
                self.kind, self.dim, other.kind, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Point) -> Result<Point> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Point { data, ..*self })
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Point { data, ..*self })
    }

    pub fn scale(&self, a: f64) -> Point {
        Point {
            data: self.data.iter().map(|v| a * v).collect(),
            ..*self
        }
    }

    /// Euclidean inner product for vectors, trace pairing for matrices.
    pub fn inner(&self, other: &Point) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm for matrices, Euclidean norm for vectors.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub(crate) fn with_data(&self, data: Vec<f64>) -> Point {
        debug_assert_eq!(data.len(), self.data.len());
        Point { data, ..*self }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.kind {
            PointKind::Vector => self.data.serialize(serializer),
            PointKind::Matrix => {
                let mut seq = serializer.serialize_seq(Some(self.dim))?;
                for row in self.data.chunks(self.dim.max(1)) {
                    seq.serialize_element(row)?;
                }
                seq.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Vector(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match PointRepr::deserialize(deserializer)? {
            PointRepr::Vector(v) => Ok(Point::vector(v)),
            PointRepr::Matrix(rows) => Point::matrix(rows).map_err(de::Error::custom),
        }
    }
}
