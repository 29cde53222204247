use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A point in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("a point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid(format!("non-finite coordinate in {coords:?}")));
        }
        Ok(Point(coords))
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![0.0; n])
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<&[f64]> for Point {
    fn from(c: &[f64]) -> Self {
        Point(c.to_vec())
    }
}

/// A unit vector in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Direction(Vec<f64>);

pub const UNIT_TOL: f64 = 1e-12;

impl Direction {
    /// Normalizes `v`; fails for the zero vector.
    pub fn normalize(v: Vec<f64>) -> Result<Self> {
        let len = norm(&v);
        if !(len.is_finite() && len > 0.0) {
            return Err(invalid(format!("cannot normalize {v:?}")));
        }
        Ok(Direction(v.into_iter().map(|c| c / len).collect()))
    }

    /// Accepts `v` only if it already has unit length.
    pub fn unit(v: Vec<f64>) -> Result<Self> {
        let len = norm(&v);
        if (len - 1.0).abs() > UNIT_TOL {
            return Err(invalid(format!("|{v:?}| = {len}, expected 1")));
        }
        Ok(Direction(v))
    }

    pub fn axis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Direction(v)
    }

    pub(crate) fn from_vec_unchecked(v: Vec<f64>) -> Self {
        Direction(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Self {
        Direction(self.0.iter().map(|c| -c).collect())
    }
}

impl Deref for Direction {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `x + s·e`
pub fn along(x: &[f64], s: f64, e: &[f64]) -> Vec<f64> {
    x.iter().zip(e).map(|(xi, ei)| xi + s * ei).collect()
}
