use std::f64::consts::PI;

use super::{
    dist, dot, norm, BoundaryHit, BoundaryNode, BoxRelation, Direction, Point, ProjectionResult,
    RayExit, RayHit,
};
use crate::error::{invalid, Error, Result};
use crate::numerics::GaussLegendre;

/// The open ball `{|x − center| < R}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

/// The exterior `{|x| > R}` of a ball centered at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct BallComplement {
    dim: usize,
    radius: f64,
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("radius {r} must be positive and finite")))
    }
}

/// Roots `s₋ ≤ s₊` of `|p + s e|² = R²` for unit `e`, if real.
fn sphere_crossings(p: &[f64], e: &[f64], r: f64) -> Option<(f64, f64)> {
    let b = dot(p, e);
    let c = dot(p, p) - r * r;
    let disc = b * b - c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // avoid cancellation in −b ± sq
    let q = -(b + b.signum() * sq);
    let (s1, s2) = if q == 0.0 { (0.0, 0.0) } else { (q, c / q) };
    Some((s1.min(s2), s1.max(s2)))
}

/// Quadrature on the sphere of radius `r` about `center`.
fn sphere_nodes(
    center: &[f64],
    r: f64,
    resolution: usize,
    outward: f64,
) -> Result<Vec<BoundaryNode>> {
    let n = center.len();
    let make = |u: Vec<f64>, w: f64| BoundaryNode {
        position: Point::from_vec_unchecked(center.iter().zip(&u).map(|(c, ui)| c + r * ui).collect()),
        weight: w,
        normal: Direction::from_vec_unchecked(u.iter().map(|ui| outward * ui).collect()),
        facet: 0,
    };
    match n {
        1 => Ok(vec![make(vec![-1.0], 1.0), make(vec![1.0], 1.0)]),
        2 => {
            let rule = GaussLegendre::new(3);
            let dtheta = 2.0 * PI / resolution as f64;
            let mut out = Vec::with_capacity(3 * resolution);
            for k in 0..resolution {
                let t0 = k as f64 * dtheta;
                for (t, w) in rule.mapped(t0, t0 + dtheta) {
                    out.push(make(vec![t.cos(), t.sin()], r * w));
                }
            }
            Ok(out)
        }
        3 => {
            let polar = GaussLegendre::new(resolution);
            let naz = 2 * resolution;
            let dphi = 2.0 * PI / naz as f64;
            let mut out = Vec::with_capacity(polar.len() * naz);
            for (z, wz) in polar.nodes.iter().zip(&polar.weights) {
                let rho = (1.0 - z * z).max(0.0).sqrt();
                for k in 0..naz {
                    let phi = (k as f64 + 0.5) * dphi;
                    out.push(make(vec![rho * phi.cos(), rho * phi.sin(), *z], r * r * wz * dphi));
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!("sphere quadrature in dimension {n}"))),
    }
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
            return Err(invalid(format!("invalid ball center {center:?}")));
        }
        Ok(Ball { center, radius })
    }

    pub fn centered(n: usize, radius: f64) -> Result<Self> {
        Self::new(vec![0.0; n], radius)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub(super) fn contains(&self, x: &[f64]) -> bool {
        dist(x, &self.center) < self.radius
    }

    pub(super) fn projection(&self, x: &[f64]) -> ProjectionResult {
        let rel: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let len = norm(&rel);
        let on = |u: &[f64]| BoundaryHit {
            point: Point::from_vec_unchecked(
                self.center.iter().zip(u).map(|(c, ui)| c + self.radius * ui).collect(),
            ),
            facet: 0,
        };
        if len <= super::PROJECTION_TIE_TOL * self.radius {
            // every boundary point is nearest; report the 2n axis points
            let n = self.dim();
            let hits = (0..2 * n)
                .map(|k| {
                    let mut u = vec![0.0; n];
                    u[k / 2] = if k % 2 == 0 { 1.0 } else { -1.0 };
                    on(&u)
                })
                .collect();
            let mut res = ProjectionResult::from_hits(x, hits, Some(false));
            res.distance = self.radius - len;
            return res;
        }
        let u: Vec<f64> = rel.iter().map(|a| a / len).collect();
        let mut res = ProjectionResult::from_hits(x, vec![on(&u)], None);
        res.distance = self.radius - len;
        res
    }

    pub(super) fn ray(&self, x: &[f64], e: &[f64]) -> RayExit {
        let rel: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        match sphere_crossings(&rel, e, self.radius) {
            Some((sm, sp)) => RayExit::from_candidates(
                &[RayHit { s: sp, facet: 0 }],
                &[RayHit { s: sm, facet: 0 }],
            ),
            None => RayExit::unbounded(),
        }
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.center.iter().map(|c| c - self.radius).collect(),
            self.center.iter().map(|c| c + self.radius).collect(),
        )
    }

    pub(super) fn classify_box(&self, lo: &[f64], hi: &[f64]) -> BoxRelation {
        let (near, far) = box_distances(&self.center, lo, hi);
        if far <= self.radius {
            BoxRelation::Inside
        } else if near >= self.radius {
            BoxRelation::Outside
        } else {
            BoxRelation::Straddle
        }
    }

    pub(super) fn boundary_quadrature(&self, resolution: usize) -> Result<Vec<BoundaryNode>> {
        sphere_nodes(&self.center, self.radius, resolution, 1.0)
    }

    pub fn translated(&self, v: &[f64]) -> Self {
        Ball {
            center: self.center.iter().zip(v).map(|(a, b)| a + b).collect(),
            radius: self.radius,
        }
    }

    pub fn dilated(&self, lambda: f64) -> Self {
        Ball {
            center: self.center.iter().map(|a| a * lambda).collect(),
            radius: self.radius * lambda,
        }
    }
}

/// Distances from `c` to the nearest and the farthest point of a box.
fn box_distances(c: &[f64], lo: &[f64], hi: &[f64]) -> (f64, f64) {
    let mut near = 0.0;
    let mut far = 0.0;
    for i in 0..c.len() {
        let dn = if c[i] < lo[i] {
            lo[i] - c[i]
        } else if c[i] > hi[i] {
            c[i] - hi[i]
        } else {
            0.0
        };
        let df = (c[i] - lo[i]).abs().max((hi[i] - c[i]).abs());
        near += dn * dn;
        far += df * df;
    }
    (near.sqrt(), far.sqrt())
}

impl BallComplement {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        Ok(BallComplement { dim, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub(super) fn contains(&self, x: &[f64]) -> bool {
        norm(x) > self.radius
    }

    pub(super) fn projection(&self, x: &[f64]) -> ProjectionResult {
        let len = norm(x);
        let p = x.iter().map(|a| self.radius * a / len).collect();
        let mut res = ProjectionResult::from_hits(
            x,
            vec![BoundaryHit {
                point: Point::from_vec_unchecked(p),
                facet: 0,
            }],
            None,
        );
        res.distance = len - self.radius;
        res
    }

    /// Lines missing the ball never leave the domain: unbounded exit.
    pub(super) fn ray(&self, x: &[f64], e: &[f64]) -> RayExit {
        match sphere_crossings(x, e, self.radius) {
            // both crossings lie on the same side of x
            Some((sm, _)) if sm > 0.0 => RayExit::from_candidates(&[RayHit { s: sm, facet: 0 }], &[]),
            Some((_, sp)) => RayExit::from_candidates(&[], &[RayHit { s: sp, facet: 0 }]),
            None => RayExit::unbounded(),
        }
    }

    pub(super) fn classify_box(&self, lo: &[f64], hi: &[f64]) -> BoxRelation {
        let origin = vec![0.0; self.dim];
        let (near, far) = box_distances(&origin, lo, hi);
        if near >= self.radius {
            BoxRelation::Inside
        } else if far <= self.radius {
            BoxRelation::Outside
        } else {
            BoxRelation::Straddle
        }
    }

    /// Quadrature on the sphere `|x| = R`, normals pointing into the ball.
    pub(super) fn boundary_quadrature(&self, resolution: usize) -> Result<Vec<BoundaryNode>> {
        sphere_nodes(&vec![0.0; self.dim], self.radius, resolution, -1.0)
    }

    pub fn dilated(&self, lambda: f64) -> Self {
        BallComplement {
            dim: self.dim,
            radius: self.radius * lambda,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossings_are_stable() {
        let (a, b) = sphere_crossings(&[0.0, 0.0], &[1.0, 0.0], 1.0).unwrap();
        assert_eq!((a, b), (-1.0, 1.0));
        let (a, b) = sphere_crossings(&[3.0, 0.0], &[1.0, 0.0], 1.0).unwrap();
        assert_eq!((a, b), (-4.0, -2.0));
        assert!(sphere_crossings(&[3.0, 2.0], &[1.0, 0.0], 1.0).is_none());
    }

    #[test]
    fn complement_ray_directions() {
        let bc = BallComplement::new(2, 1.0).unwrap();
        // heading toward the ball
        let r = bc.ray(&[3.0, 0.0], &[-1.0, 0.0]);
        assert!((r.distance - 2.0).abs() < 1e-15);
        assert_eq!(r.minimizers(), vec![2.0]);
        let r = bc.ray(&[3.0, 0.0], &[1.0, 0.0]);
        assert_eq!(r.minimizers(), vec![-2.0]);
        assert!(bc.ray(&[3.0, 0.0], &[0.0, 1.0]).is_unbounded());
    }

    #[test]
    fn sphere_area_3d() {
        let b = Ball::centered(3, 2.0).unwrap();
        let nodes = b.boundary_quadrature(6).unwrap();
        let area: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((area - 16.0 * PI).abs() < 1e-11);
    }
}
