use nalgebra::{DMatrix, DVector};
use smallvec::SmallVec;

use super::{
    dist, dot, segment_nodes, triangle_nodes, BoundaryHit, BoundaryNode, BoxRelation, Direction,
    FacetQuery, Point, ProjectionResult, RayExit, RayHit, PROJECTION_TIE_TOL,
};
use crate::error::{invalid, Error, Result};

/// Feasibility slack used when enumerating vertices and solving the inradius LP.
const LP_TOL: f64 = 1e-10;

/// `{x : normal·x ≤ offset}` with an outward unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Direction,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes `normal` and rescales `offset` accordingly.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let len = super::norm(&normal);
        if !offset.is_finite() {
            return Err(invalid(format!("halfspace offset {offset} is not finite")));
        }
        let normal = Direction::normalize(normal)?;
        Ok(Halfspace {
            normal,
            offset: offset / len,
        })
    }

    /// `offset − normal·x`: positive inside, equal to the distance to the hyperplane.
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

/// A bounded convex polytope given as an intersection of halfspaces.
#[derive(Debug, Clone)]
pub struct ConvexPolytope {
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Vec<f64>>,
    /// For each facet, its vertices (ordered around the facet in 3D).
    facet_vertices: Vec<Vec<usize>>,
    center: Vec<f64>,
    inradius: f64,
}

impl ConvexPolytope {
    pub fn from_halfspaces(halfspaces: Vec<Halfspace>) -> Result<Self> {
        let n = halfspaces
            .first()
            .map(|h| h.normal.dim())
            .ok_or_else(|| invalid("a polytope needs at least one halfspace"))?;
        if halfspaces.iter().any(|h| h.normal.dim() != n) {
            return Err(invalid("halfspace normals have mixed dimensions"));
        }
        if halfspaces.len() < n + 1 {
            return Err(Error::Degenerate(format!(
                "{} halfspaces cannot bound a region in dimension {n}",
                halfspaces.len()
            )));
        }
        check_bounded(&halfspaces, n)?;
        let vertices = enumerate_vertices(&halfspaces, n);
        if vertices.is_empty() || vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Degenerate("the halfspaces have no finite vertex".into()));
        }
        let (center, inradius) = chebyshev_center(&halfspaces, n)?;
        if !(inradius > LP_TOL) {
            return Err(Error::Degenerate(format!(
                "the polytope has empty interior (inradius {inradius:e})"
            )));
        }
        let facet_vertices = halfspaces
            .iter()
            .map(|h| {
                let mut ids: Vec<usize> = (0..vertices.len())
                    .filter(|&k| h.slack(&vertices[k]).abs() <= 1e-9 * (1.0 + h.offset.abs()))
                    .collect();
                if n == 3 {
                    order_around_facet(&mut ids, &vertices, &h.normal);
                }
                ids
            })
            .collect();
        Ok(ConvexPolytope {
            halfspaces,
            vertices,
            facet_vertices,
            center,
            inradius,
        })
    }

    /// A convex polygon from its vertices listed in either orientation.
    pub fn from_vertices_2d(vertices: &[[f64; 2]]) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::Degenerate("a polygon needs at least three vertices".into()));
        }
        let signed_area: f64 = (0..m)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % m]);
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
            * 0.5;
        if signed_area.abs() <= LP_TOL {
            return Err(Error::Degenerate("polygon has zero area".into()));
        }
        let orient = signed_area.signum();
        let mut hs = Vec::with_capacity(m);
        for i in 0..m {
            let (a, b) = (vertices[i], vertices[(i + 1) % m]);
            // outward normal of a counter-clockwise edge is (dy, -dx)
            let normal = vec![orient * (b[1] - a[1]), -orient * (b[0] - a[0])];
            let offset = normal[0] * a[0] + normal[1] * a[1];
            hs.push(Halfspace::new(normal, offset)?);
        }
        let poly = Self::from_halfspaces(hs)?;
        for v in vertices {
            if poly.halfspaces.iter().any(|h| h.slack(v) < -1e-9) {
                return Err(invalid("polygon vertices are not in convex position"));
            }
        }
        Ok(poly)
    }

    /// The box `∏ (lo_i, hi_i)`.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(invalid("box corners must have equal, positive dimension"));
        }
        let n = lo.len();
        let mut hs = Vec::with_capacity(2 * n);
        for i in 0..n {
            if !(hi[i] > lo[i]) {
                return Err(Error::Degenerate(format!("box side {i} is empty")));
            }
            let mut lower = vec![0.0; n];
            lower[i] = -1.0;
            hs.push(Halfspace::new(lower, -lo[i])?);
            let mut upper = vec![0.0; n];
            upper[i] = 1.0;
            hs.push(Halfspace::new(upper, hi[i])?);
        }
        Self::from_halfspaces(hs)
    }

    /// The unit cube `(0,1)ⁿ`.
    pub fn unit_cube(n: usize) -> Result<Self> {
        Self::axis_box(&vec![0.0; n], &vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Center of the largest inscribed ball.
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub(crate) fn contains(&self, x: &[f64]) -> bool {
        self.halfspaces.iter().all(|h| h.slack(x) > 0.0)
    }

    pub(crate) fn contains_closed(&self, x: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.slack(x) >= -tol)
    }

    pub(crate) fn distance(&self, x: &[f64]) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| h.slack(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Facets attaining the minimal slack, lowest index first.
    fn nearest_facets(&self, x: &[f64]) -> (f64, SmallVec<[usize; 4]>) {
        let d = self.distance(x);
        let tol = PROJECTION_TIE_TOL * d.max(1.0);
        let ids = self
            .halfspaces
            .iter()
            .enumerate()
            .filter(|(_, h)| h.slack(x) - d <= tol)
            .map(|(j, _)| j)
            .collect();
        (d, ids)
    }

    pub(super) fn projection(&self, x: &[f64]) -> ProjectionResult {
        let (_, ids) = self.nearest_facets(x);
        let hits = ids
            .iter()
            .map(|&j| {
                let h = &self.halfspaces[j];
                BoundaryHit {
                    point: Point::from_vec_unchecked(super::along(x, h.slack(x), &h.normal)),
                    facet: j,
                }
            })
            .collect();
        ProjectionResult::from_hits(x, hits, None)
    }

    pub(super) fn nearest_facet(&self, x: &[f64]) -> FacetQuery {
        let (_, ids) = self.nearest_facets(x);
        FacetQuery {
            facet: ids[0],
            ambiguous: ids.len() > 1,
        }
    }

    pub(super) fn ray(&self, x: &[f64], e: &[f64]) -> RayExit {
        let mut fwd: SmallVec<[RayHit; 4]> = SmallVec::new();
        let mut bwd: SmallVec<[RayHit; 4]> = SmallVec::new();
        for (j, h) in self.halfspaces.iter().enumerate() {
            let rate = dot(&h.normal, e);
            if rate == 0.0 {
                continue;
            }
            let s = h.slack(x) / rate;
            let hit = RayHit { s, facet: j };
            if rate > 0.0 {
                fwd.push(hit);
            } else {
                bwd.push(hit);
            }
        }
        // keep only the first exit on each side (plus ties)
        let first = |v: &SmallVec<[RayHit; 4]>| -> SmallVec<[RayHit; 4]> {
            let m = v.iter().map(|h| h.s.abs()).fold(f64::INFINITY, f64::min);
            let tol = super::RAY_TIE_TOL * m.max(f64::MIN_POSITIVE);
            v.iter().copied().filter(|h| h.s.abs() - m <= tol).collect()
        };
        RayExit::from_candidates(&first(&fwd), &first(&bwd))
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for v in &self.vertices {
            for i in 0..n {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    pub(super) fn classify_box(&self, lo: &[f64], hi: &[f64]) -> BoxRelation {
        let n = lo.len();
        let scale = dist(lo, hi);
        let tol = 1e-12 * scale.max(1.0);
        let corners = 1usize << n;
        let all_in = (0..corners).all(|mask| {
            let c: Vec<f64> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                .collect();
            self.contains_closed(&c, tol)
        });
        if all_in {
            return BoxRelation::Inside;
        }
        let mid: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
        // max_j (n_j·x − o_j) bounds the exterior distance from below
        let excess = self
            .halfspaces
            .iter()
            .map(|h| -h.slack(&mid))
            .fold(f64::NEG_INFINITY, f64::max);
        if excess >= 0.5 * scale {
            BoxRelation::Outside
        } else {
            BoxRelation::Straddle
        }
    }

    pub(super) fn boundary_quadrature(&self, resolution: usize) -> Result<Vec<BoundaryNode>> {
        let n = self.dim();
        let mut out = Vec::new();
        for (j, h) in self.halfspaces.iter().enumerate() {
            let ids = &self.facet_vertices[j];
            let pieces: Vec<(Vec<f64>, f64)> = match n {
                1 => ids.iter().map(|&k| (self.vertices[k].clone(), 1.0)).collect(),
                2 => {
                    if ids.len() < 2 {
                        continue;
                    }
                    let (a, b) = farthest_pair(ids, &self.vertices);
                    segment_nodes(a, b, resolution)
                }
                3 => {
                    if ids.len() < 3 {
                        continue;
                    }
                    let apex = &self.vertices[ids[0]];
                    let mut nodes = Vec::new();
                    for w in ids[1..].windows(2) {
                        nodes.extend(triangle_nodes(
                            apex,
                            &self.vertices[w[0]],
                            &self.vertices[w[1]],
                            resolution,
                        ));
                    }
                    nodes
                }
                _ => {
                    return Err(Error::Unsupported(format!(
                        "boundary quadrature for polytopes in dimension {n}"
                    )))
                }
            };
            out.extend(pieces.into_iter().map(|(p, w)| BoundaryNode {
                position: Point::from_vec_unchecked(p),
                weight: w,
                normal: h.normal.clone(),
                facet: j,
            }));
        }
        Ok(out)
    }

    pub fn translated(&self, v: &[f64]) -> Self {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace {
                normal: h.normal.clone(),
                offset: h.offset + dot(&h.normal, v),
            })
            .collect();
        let shift = |p: &Vec<f64>| p.iter().zip(v).map(|(a, b)| a + b).collect::<Vec<_>>();
        ConvexPolytope {
            halfspaces: hs,
            vertices: self.vertices.iter().map(shift).collect(),
            facet_vertices: self.facet_vertices.clone(),
            center: shift(&self.center),
            inradius: self.inradius,
        }
    }

    pub fn dilated(&self, lambda: f64) -> Self {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace {
                normal: h.normal.clone(),
                offset: h.offset * lambda,
            })
            .collect();
        let scale = |p: &Vec<f64>| p.iter().map(|a| a * lambda).collect::<Vec<_>>();
        ConvexPolytope {
            halfspaces: hs,
            vertices: self.vertices.iter().map(scale).collect(),
            facet_vertices: self.facet_vertices.clone(),
            center: scale(&self.center),
            inradius: self.inradius * lambda,
        }
    }
}

fn farthest_pair<'a>(ids: &[usize], vertices: &'a [Vec<f64>]) -> (&'a [f64], &'a [f64]) {
    let mut best = (ids[0], ids[1], -1.0);
    for (a, &i) in ids.iter().enumerate() {
        for &k in &ids[a + 1..] {
            let d = dist(&vertices[i], &vertices[k]);
            if d > best.2 {
                best = (i, k, d);
            }
        }
    }
    (&vertices[best.0], &vertices[best.1])
}

fn order_around_facet(ids: &mut [usize], vertices: &[Vec<f64>], normal: &[f64]) {
    if ids.len() < 3 {
        return;
    }
    let m = ids.len() as f64;
    let c: Vec<f64> = (0..3)
        .map(|i| ids.iter().map(|&k| vertices[k][i]).sum::<f64>() / m)
        .collect();
    // in-plane orthonormal frame (u, w)
    let r0: Vec<f64> = (0..3).map(|i| vertices[ids[0]][i] - c[i]).collect();
    let r0n = super::norm(&r0);
    let u: Vec<f64> = r0.iter().map(|a| a / r0n).collect();
    let w = [
        normal[1] * u[2] - normal[2] * u[1],
        normal[2] * u[0] - normal[0] * u[2],
        normal[0] * u[1] - normal[1] * u[0],
    ];
    let angle = |k: usize| {
        let r: Vec<f64> = (0..3).map(|i| vertices[k][i] - c[i]).collect();
        dot(&r, &w).atan2(dot(&r, &u))
    };
    ids.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
}

fn combinations(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, visit);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(k);
    rec(0, m, k, &mut cur, &mut visit);
}

fn check_bounded(hs: &[Halfspace], n: usize) -> Result<()> {
    let normals = DMatrix::from_fn(hs.len(), n, |i, j| hs[i].normal[j]);
    let svd = normals.clone().svd(false, false);
    let smin = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    let unbounded = || Error::Degenerate("the halfspaces do not bound a region".into());
    if smin <= 1e-12 {
        return Err(unbounded());
    }
    if n == 1 {
        let has_pos = hs.iter().any(|h| h.normal[0] > 0.0);
        let has_neg = hs.iter().any(|h| h.normal[0] < 0.0);
        return if has_pos && has_neg { Ok(()) } else { Err(unbounded()) };
    }
    // A nonzero recession direction d (all n_j·d ≤ 0) is an extreme ray of a
    // pointed cone, hence orthogonal to n−1 independent normals.
    let mut found = false;
    combinations(hs.len(), n - 1, |subset| {
        if found {
            return;
        }
        let sub = DMatrix::from_fn(n - 1, n, |i, j| hs[subset[i]].normal[j]);
        let Some(d) = null_vector(&sub) else { return };
        for sign in [1.0, -1.0] {
            let dd = &d * sign;
            if hs
                .iter()
                .all(|h| h.normal.iter().zip(dd.iter()).map(|(a, b)| a * b).sum::<f64>() <= 1e-12)
            {
                found = true;
            }
        }
    });
    if found {
        Err(unbounded())
    } else {
        Ok(())
    }
}

/// Unit null vector of a full-row-rank `(n−1)×n` matrix.
fn null_vector(a: &DMatrix<f64>) -> Option<DVector<f64>> {
    let n = a.ncols();
    let ata = a.transpose() * a;
    let eig = ata.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    // rank n−1 ⇔ exactly one (near-)zero eigenvalue
    if n >= 2 && eig.eigenvalues[order[1]] <= 1e-20 {
        return None;
    }
    Some(eig.eigenvectors.column(order[0]).into_owned())
}

fn enumerate_vertices(hs: &[Halfspace], n: usize) -> Vec<Vec<f64>> {
    let scale = 1.0 + hs.iter().map(|h| h.offset.abs()).fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    combinations(hs.len(), n, |subset| {
        let a = DMatrix::from_fn(n, n, |i, j| hs[subset[i]].normal[j]);
        let b = DVector::from_fn(n, |i, _| hs[subset[i]].offset);
        let Some(x) = a.lu().solve(&b) else { return };
        let x: Vec<f64> = x.iter().copied().collect();
        if x.iter().any(|c| !c.is_finite()) {
            return;
        }
        if hs.iter().all(|h| h.slack(&x) >= -1e-9 * scale)
            && !out.iter().any(|v| dist(v, &x) <= 1e-9 * scale)
        {
            out.push(x);
        }
    });
    out
}

/// Largest inscribed ball: maximize r subject to `n_j·c + r ≤ o_j`.
///
/// The optimum sits at a vertex of the feasible set in `(c, r)`, i.e. where
/// `n + 1` constraints are active, so small instances are solved by
/// enumerating those vertices.
fn chebyshev_center(hs: &[Halfspace], n: usize) -> Result<(Vec<f64>, f64)> {
    let mut best: Option<(Vec<f64>, f64)> = None;
    combinations(hs.len(), n + 1, |subset| {
        let a = DMatrix::from_fn(n + 1, n + 1, |i, j| {
            if j < n {
                hs[subset[i]].normal[j]
            } else {
                1.0
            }
        });
        let b = DVector::from_fn(n + 1, |i, _| hs[subset[i]].offset);
        let Some(sol) = a.lu().solve(&b) else { return };
        let r = sol[n];
        let c: Vec<f64> = sol.iter().take(n).copied().collect();
        if !r.is_finite() || c.iter().any(|v| !v.is_finite()) {
            return;
        }
        let feasible = hs.iter().all(|h| h.slack(&c) - r >= -LP_TOL);
        if feasible && best.as_ref().is_none_or(|(_, rb)| r > *rb) {
            best = Some((c, r));
        }
    });
    best.ok_or_else(|| Error::Degenerate("inscribed-ball LP is infeasible".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> ConvexPolytope {
        ConvexPolytope::from_vertices_2d(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn triangle_inradius_matches_incircle() {
        let t = triangle();
        assert!((t.inradius() - (2.0 - 2f64.sqrt()) / 2.0).abs() < 1e-12);
        let c = t.center();
        assert!((c[0] - c[1]).abs() < 1e-12);
    }

    #[test]
    fn rejects_unbounded_and_empty() {
        let strip = vec![
            Halfspace::new(vec![0.0, 1.0], 1.0).unwrap(),
            Halfspace::new(vec![0.0, -1.0], 0.0).unwrap(),
            Halfspace::new(vec![1.0, 0.0], 1.0).unwrap(),
        ];
        assert!(ConvexPolytope::from_halfspaces(strip).is_err());
        let wedge = vec![
            Halfspace::new(vec![1.0, 1.0], 0.0).unwrap(),
            Halfspace::new(vec![-1.0, 1.0], 0.0).unwrap(),
            Halfspace::new(vec![0.0, -1.0], 1.0).unwrap(),
        ];
        // bounded triangle below y = -|x| ... above y = -1
        assert!(ConvexPolytope::from_halfspaces(wedge).is_ok());
        let open_wedge = vec![
            Halfspace::new(vec![1.0, 1.0], 0.0).unwrap(),
            Halfspace::new(vec![-1.0, 1.0], 0.0).unwrap(),
            Halfspace::new(vec![0.0, 1.0], 1.0).unwrap(),
        ];
        assert!(ConvexPolytope::from_halfspaces(open_wedge).is_err());
        let empty = vec![
            Halfspace::new(vec![1.0, 0.0], 0.0).unwrap(),
            Halfspace::new(vec![-1.0, 0.0], -1.0).unwrap(),
            Halfspace::new(vec![0.0, 1.0], 1.0).unwrap(),
            Halfspace::new(vec![0.0, -1.0], 0.0).unwrap(),
        ];
        assert!(ConvexPolytope::from_halfspaces(empty).is_err());
    }

    #[test]
    fn cube_facets_tile_surface() {
        let c = ConvexPolytope::unit_cube(3).unwrap();
        assert_eq!(c.vertices().len(), 8);
        let nodes = c.boundary_quadrature(3).unwrap();
        let area: f64 = nodes.iter().map(|b| b.weight).sum();
        assert!((area - 6.0).abs() < 1e-12, "{area}");
        assert!((c.inradius() - 0.5).abs() < 1e-12);
    }
}
