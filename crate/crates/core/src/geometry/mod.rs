//! Domains and their distance geometry.
//!
//! Every domain answers the same questions: membership of the open set, the
//! distance to the boundary together with the nearest boundary point(s),
//! the inradius, the distance to the boundary along a line, and a quadrature
//! for the surface measure of the boundary. Boundary pieces carry an integer
//! `facet` tag so that piecewise boundary coefficients can be attached.
//!
//! Facet numbering:
//! - interval `(0, b)`: 0 is the endpoint `t = 0`, 1 is `t = b`;
//! - polytope: the index of the halfspace;
//! - ball and ball complement: 0;
//! - subgraph: 0 is the base `t = 0`, 1 is the graph of the profile.

mod ball;
mod interval;
mod point;
mod polytope;
mod subgraph;

pub use ball::{Ball, BallComplement};
pub use interval::Interval;
pub use point::{along, dist, dot, norm, Direction, Point, UNIT_TOL};
pub use polytope::{ConvexPolytope, Halfspace};
pub use subgraph::{Profile, Subgraph};

use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{check_dim, Error, Result};

/// Relative tolerance deciding whether two exit parameters along a ray coincide.
pub const RAY_TIE_TOL: f64 = 1e-12;
/// Relative tolerance deciding whether two boundary points are both nearest.
pub const PROJECTION_TIE_TOL: f64 = 1e-12;

/// A quadrature node for the surface measure of the boundary.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryNode {
    pub position: Point,
    pub weight: f64,
    pub normal: Direction,
    pub facet: usize,
}

/// A boundary point together with the facet it lies on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryHit {
    pub point: Point,
    pub facet: usize,
}

/// Distance to the boundary with its minimizer(s).
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionResult {
    pub nearest: Point,
    pub facet: usize,
    pub distance: f64,
    /// False when the point lies on the singular set (two or more nearest points).
    pub unique: bool,
    pub all_minimizers: Vec<BoundaryHit>,
}

impl ProjectionResult {
    fn from_hits(x: &[f64], mut hits: Vec<BoundaryHit>, unique_override: Option<bool>) -> Self {
        debug_assert!(!hits.is_empty());
        hits.sort_by_key(|h| h.facet);
        let nearest = hits[0].point.clone();
        let distance = dist(x, &nearest);
        let unique = unique_override.unwrap_or(hits.len() == 1);
        ProjectionResult {
            facet: hits[0].facet,
            nearest,
            distance,
            unique,
            all_minimizers: hits,
        }
    }
}

/// One exit of the line `x + s·e` through the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayHit {
    pub s: f64,
    pub facet: usize,
}

/// Result of a directional distance query.
///
/// `hits` holds every exit with `|s|` equal to the distance; the same `s`
/// may appear twice when the line leaves through a vertex shared by two
/// facets. An empty `hits` with infinite distance means the line never
/// leaves the domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayExit {
    pub distance: f64,
    pub hits: SmallVec<[RayHit; 2]>,
}

impl RayExit {
    pub fn unbounded() -> Self {
        RayExit {
            distance: f64::INFINITY,
            hits: SmallVec::new(),
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.hits.is_empty()
    }

    /// The distinct signed parameters achieving the minimum (one or two values).
    pub fn minimizers(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(2);
        for h in &self.hits {
            if !out.contains(&h.s) {
                out.push(h.s);
            }
        }
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }

    /// Combines forward (`s > 0`) and backward (`s < 0`) exit candidates.
    pub(crate) fn from_candidates(forward: &[RayHit], backward: &[RayHit]) -> Self {
        let fwd = forward.iter().map(|h| h.s).fold(f64::INFINITY, f64::min);
        let bwd = backward.iter().map(|h| -h.s).fold(f64::INFINITY, f64::min);
        let d = fwd.min(bwd);
        if !d.is_finite() {
            return RayExit::unbounded();
        }
        let tol = RAY_TIE_TOL * d.max(f64::MIN_POSITIVE);
        let mut hits = SmallVec::new();
        for h in forward.iter().chain(backward) {
            if (h.s.abs() - d).abs() <= tol {
                hits.push(*h);
            }
        }
        RayExit { distance: d, hits }
    }
}

/// Position of an axis-aligned box relative to the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxRelation {
    /// The closed box lies in the closure of the domain.
    Inside,
    /// The box does not meet the domain.
    Outside,
    /// Undecided; the box may meet the boundary.
    Straddle,
}

/// Result of a nearest-facet query on a polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FacetQuery {
    pub facet: usize,
    /// Set when several facets attain the distance (the point is singular).
    pub ambiguous: bool,
}

/// The domain variants supported by the library.
#[derive(Debug, Clone)]
pub enum Domain {
    Interval(Interval),
    Polytope(ConvexPolytope),
    Ball(Ball),
    BallComplement(BallComplement),
    Subgraph(Subgraph),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval(_) => 1,
            Domain::Polytope(p) => p.dim(),
            Domain::Ball(b) => b.dim(),
            Domain::BallComplement(b) => b.dim(),
            Domain::Subgraph(s) => s.dim(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Domain::BallComplement(_))
    }

    pub fn is_convex(&self) -> bool {
        matches!(self, Domain::Interval(_) | Domain::Polytope(_) | Domain::Ball(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Interval(_) => "interval",
            Domain::Polytope(_) => "polytope",
            Domain::Ball(_) => "ball",
            Domain::BallComplement(_) => "ball-complement",
            Domain::Subgraph(_) => "subgraph",
        }
    }

    /// True iff `x` lies in the open set.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &[f64]) -> bool {
        match self {
            Domain::Interval(i) => i.contains(x[0]),
            Domain::Polytope(p) => p.contains(x),
            Domain::Ball(b) => b.contains(x),
            Domain::BallComplement(b) => b.contains(x),
            Domain::Subgraph(s) => s.contains(x),
        }
    }

    fn require_inside(&self, x: &[f64]) -> Result<()> {
        if self.contains(x)? {
            Ok(())
        } else {
            Err(Error::OutsideDomain { point: x.to_vec() })
        }
    }

    /// Distance to the boundary and the nearest boundary point(s).
    pub fn distance_and_projection(&self, x: &[f64]) -> Result<ProjectionResult> {
        self.require_inside(x)?;
        Ok(match self {
            Domain::Interval(i) => i.projection(x[0]),
            Domain::Polytope(p) => p.projection(x),
            Domain::Ball(b) => b.projection(x),
            Domain::BallComplement(b) => b.projection(x),
            Domain::Subgraph(s) => s.projection(x),
        })
    }

    /// Distance to the boundary only; cheaper than a full projection for some variants.
    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        self.require_inside(x)?;
        Ok(match self {
            Domain::Interval(i) => x[0].min(i.length() - x[0]),
            Domain::Polytope(p) => p.distance(x),
            Domain::Ball(b) => b.radius() - dist(x, b.center()),
            Domain::BallComplement(b) => norm(x) - b.radius(),
            Domain::Subgraph(s) => s.projection(x).distance,
        })
    }

    /// `sup δ` over the domain.
    pub fn inradius(&self) -> Result<f64> {
        match self {
            Domain::Interval(i) => Ok(0.5 * i.length()),
            Domain::Polytope(p) => Ok(p.inradius()),
            Domain::Ball(b) => Ok(b.radius()),
            Domain::BallComplement(_) => Err(Error::Unsupported(
                "the complement of a ball has infinite inradius".into(),
            )),
            Domain::Subgraph(s) => Ok(s.inradius()),
        }
    }

    /// Distance to the boundary along the line through `x` with direction `e`.
    pub fn directional_distance(&self, x: &[f64], e: &Direction) -> Result<RayExit> {
        check_dim(self.dim(), e.dim())?;
        self.require_inside(x)?;
        Ok(self.directional_distance_unchecked(x, e))
    }

    pub(crate) fn directional_distance_unchecked(&self, x: &[f64], e: &[f64]) -> RayExit {
        match self {
            Domain::Interval(i) => i.ray(x[0], e[0]),
            Domain::Polytope(p) => p.ray(x, e),
            Domain::Ball(b) => b.ray(x, e),
            Domain::BallComplement(b) => b.ray(x, e),
            Domain::Subgraph(s) => s.ray(x, e),
        }
    }

    /// Quadrature nodes for the surface measure of the boundary.
    ///
    /// `resolution` is the number of pieces per facet (polytopes), arcs per
    /// circle, polar nodes per sphere, or base cells per axis (subgraph).
    pub fn boundary_quadrature(&self, resolution: usize) -> Result<Vec<BoundaryNode>> {
        if resolution == 0 {
            return Err(crate::error::invalid("resolution must be positive"));
        }
        match self {
            Domain::Interval(i) => Ok(i.boundary_nodes()),
            Domain::Polytope(p) => p.boundary_quadrature(resolution),
            Domain::Ball(b) => b.boundary_quadrature(resolution),
            Domain::BallComplement(b) => b.boundary_quadrature(resolution),
            Domain::Subgraph(s) => s.boundary_quadrature(resolution),
        }
    }

    /// The facet whose projection attains δ(x); polytopes only.
    pub fn nearest_facet(&self, x: &[f64]) -> Result<FacetQuery> {
        match self {
            Domain::Polytope(p) => {
                self.require_inside(x)?;
                Ok(p.nearest_facet(x))
            }
            _ => Err(Error::Unsupported(format!(
                "nearest_facet is defined for polytopes, not for a {}",
                self.name()
            ))),
        }
    }

    /// Axis-aligned bounding box `(lo, hi)` for bounded domains.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Domain::Interval(i) => Some((vec![0.0], vec![i.length()])),
            Domain::Polytope(p) => Some(p.bounding_box()),
            Domain::Ball(b) => Some(b.bounding_box()),
            Domain::BallComplement(_) => None,
            Domain::Subgraph(s) => Some(s.bounding_box()),
        }
    }

    /// Conservative classification of a closed box.
    pub fn classify_box(&self, lo: &[f64], hi: &[f64]) -> BoxRelation {
        match self {
            Domain::Interval(i) => {
                if lo[0] >= 0.0 && hi[0] <= i.length() {
                    BoxRelation::Inside
                } else if hi[0] <= 0.0 || lo[0] >= i.length() {
                    BoxRelation::Outside
                } else {
                    BoxRelation::Straddle
                }
            }
            Domain::Polytope(p) => p.classify_box(lo, hi),
            Domain::Ball(b) => b.classify_box(lo, hi),
            Domain::BallComplement(b) => b.classify_box(lo, hi),
            Domain::Subgraph(_) => BoxRelation::Straddle,
        }
    }

    /// The domain shifted by `v`.
    pub fn translated(&self, v: &[f64]) -> Result<Domain> {
        check_dim(self.dim(), v.len())?;
        match self {
            Domain::Polytope(p) => Ok(Domain::Polytope(p.translated(v))),
            Domain::Ball(b) => Ok(Domain::Ball(b.translated(v))),
            Domain::Subgraph(s) if v[v.len() - 1] == 0.0 => {
                Ok(Domain::Subgraph(s.translated(&v[..v.len() - 1])?))
            }
            _ => Err(Error::Unsupported(format!(
                "translation of a {} leaves its normal form",
                self.name()
            ))),
        }
    }

    /// The domain scaled by `lambda > 0` about the origin.
    pub fn dilated(&self, lambda: f64) -> Result<Domain> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(crate::error::invalid(format!("dilation factor {lambda} must be positive")));
        }
        Ok(match self {
            Domain::Interval(i) => Domain::Interval(Interval::new(i.length() * lambda)?),
            Domain::Polytope(p) => Domain::Polytope(p.dilated(lambda)),
            Domain::Ball(b) => Domain::Ball(b.dilated(lambda)),
            Domain::BallComplement(b) => Domain::BallComplement(b.dilated(lambda)),
            Domain::Subgraph(s) => Domain::Subgraph(s.dilated(lambda)?),
        })
    }
}

impl From<Interval> for Domain {
    fn from(v: Interval) -> Self {
        Domain::Interval(v)
    }
}
impl From<ConvexPolytope> for Domain {
    fn from(v: ConvexPolytope) -> Self {
        Domain::Polytope(v)
    }
}
impl From<Ball> for Domain {
    fn from(v: Ball) -> Self {
        Domain::Ball(v)
    }
}
impl From<BallComplement> for Domain {
    fn from(v: BallComplement) -> Self {
        Domain::BallComplement(v)
    }
}
impl From<Subgraph> for Domain {
    fn from(v: Subgraph) -> Self {
        Domain::Subgraph(v)
    }
}

/// Gauss nodes (three per piece) on a segment split into `pieces` parts.
pub(crate) fn segment_nodes(a: &[f64], b: &[f64], pieces: usize) -> Vec<(Vec<f64>, f64)> {
    let rule = crate::numerics::GaussLegendre::new(3);
    let len = dist(a, b);
    let mut out = Vec::with_capacity(3 * pieces);
    for k in 0..pieces {
        let t0 = k as f64 / pieces as f64;
        let t1 = (k + 1) as f64 / pieces as f64;
        for (t, w) in rule.mapped(t0, t1) {
            let p = a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect();
            out.push((p, w * len));
        }
    }
    out
}

/// Degree-2 rule on a triangle, the triangle split into `pieces²` congruent parts.
pub(crate) fn triangle_nodes(
    a: &[f64],
    b: &[f64],
    c: &[f64],
    pieces: usize,
) -> Vec<(Vec<f64>, f64)> {
    let ab: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let ac: Vec<f64> = c.iter().zip(a).map(|(x, y)| x - y).collect();
    let area = triangle_area(&ab, &ac);
    let m = pieces as f64;
    let sub_area = area / (m * m);
    let bary = [(1.0 / 6.0, 1.0 / 6.0), (2.0 / 3.0, 1.0 / 6.0), (1.0 / 6.0, 2.0 / 3.0)];
    let point = |u: f64, v: f64| -> Vec<f64> {
        a.iter()
            .zip(ab.iter().zip(&ac))
            .map(|(p, (x, y))| p + u * x + v * y)
            .collect()
    };
    let mut out = Vec::with_capacity(3 * pieces * pieces);
    for i in 0..pieces {
        for j in 0..(pieces - i) {
            // upright sub-triangle with corner (i, j)
            let (u0, v0) = (i as f64 / m, j as f64 / m);
            for (bu, bv) in bary {
                out.push((point(u0 + bu / m, v0 + bv / m), sub_area / 3.0));
            }
            if i + j + 1 < pieces {
                // inverted sub-triangle with corner (i+1, j+1)
                let (u1, v1) = ((i + 1) as f64 / m, (j + 1) as f64 / m);
                for (bu, bv) in bary {
                    out.push((point(u1 - bu / m, v1 - bv / m), sub_area / 3.0));
                }
            }
        }
    }
    out
}

fn triangle_area(ab: &[f64], ac: &[f64]) -> f64 {
    // |ab × ac| / 2 via the Gram determinant, valid in any ambient dimension.
    let aa = dot(ab, ab);
    let cc = dot(ac, ac);
    let ac_ = dot(ab, ac);
    0.5 * (aa * cc - ac_ * ac_).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_rule_tiles_area() {
        let nodes = triangle_nodes(&[0.0, 0.0], &[2.0, 0.0], &[0.0, 1.0], 5);
        let total: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-14);
        // degree-2 exactness: ∫ x² over the triangle = 2·1·4/12
        let q: f64 = nodes.iter().map(|(p, w)| w * p[0] * p[0]).sum();
        assert!((q - 2.0 / 3.0).abs() < 1e-13, "{q}");
    }

    #[test]
    fn ray_exit_tie_detection() {
        let f = [RayHit { s: 0.5, facet: 1 }];
        let b = [RayHit { s: -0.5, facet: 3 }];
        let r = RayExit::from_candidates(&f, &b);
        assert_eq!(r.minimizers(), vec![-0.5, 0.5]);
        let b = [RayHit { s: -0.5 - 1e-9, facet: 3 }];
        let r = RayExit::from_candidates(&f, &b);
        assert_eq!(r.minimizers(), vec![0.5]);
    }
}
