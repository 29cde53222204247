use super::{BoundaryHit, BoundaryNode, Direction, Point, ProjectionResult, RayExit, RayHit};
use crate::error::{invalid, Result};

/// The open interval `(0, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    b: f64,
}

impl Interval {
    pub fn new(b: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(invalid(format!("interval length {b} must be positive and finite")));
        }
        Ok(Interval { b })
    }

    pub fn length(&self) -> f64 {
        self.b
    }

    pub(super) fn contains(&self, t: f64) -> bool {
        t > 0.0 && t < self.b
    }

    pub(super) fn projection(&self, t: f64) -> ProjectionResult {
        let left = BoundaryHit {
            point: Point::from_vec_unchecked(vec![0.0]),
            facet: 0,
        };
        let right = BoundaryHit {
            point: Point::from_vec_unchecked(vec![self.b]),
            facet: 1,
        };
        let (dl, dr) = (t, self.b - t);
        let tol = super::PROJECTION_TIE_TOL * dl.max(dr).max(1.0);
        let hits = if (dl - dr).abs() <= tol {
            vec![left, right]
        } else if dl < dr {
            vec![left]
        } else {
            vec![right]
        };
        ProjectionResult::from_hits(&[t], hits, None)
    }

    pub(super) fn ray(&self, t: f64, e: f64) -> RayExit {
        // x + s e leaves at t + s e ∈ {0, b}
        let s_left = -t / e;
        let s_right = (self.b - t) / e;
        let (fwd, bwd) = if e > 0.0 {
            (RayHit { s: s_right, facet: 1 }, RayHit { s: s_left, facet: 0 })
        } else {
            (RayHit { s: s_left, facet: 0 }, RayHit { s: s_right, facet: 1 })
        };
        RayExit::from_candidates(&[fwd], &[bwd])
    }

    /// Counting measure on the two endpoints.
    pub(super) fn boundary_nodes(&self) -> Vec<BoundaryNode> {
        vec![
            BoundaryNode {
                position: Point::from_vec_unchecked(vec![0.0]),
                weight: 1.0,
                normal: Direction::from_vec_unchecked(vec![-1.0]),
                facet: 0,
            },
            BoundaryNode {
                position: Point::from_vec_unchecked(vec![self.b]),
                weight: 1.0,
                normal: Direction::from_vec_unchecked(vec![1.0]),
                facet: 1,
            },
        ]
    }
}
