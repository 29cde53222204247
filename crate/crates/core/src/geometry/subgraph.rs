use super::{
    along, dist, segment_nodes, triangle_nodes, BoundaryHit, BoundaryNode, ConvexPolytope,
    Direction, Point, ProjectionResult, RayExit, RayHit,
};
use crate::error::{invalid, Error, Result};

/// Profile `f` over the base region `A`; positive in `A`, zero on `∂A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `f(x′) = height · dist(x′, ∂A) / R_in(A)`.
    Tent { height: f64 },
    /// `f(x′) = height · ∏ⱼ sⱼ(x′) / ∏ⱼ sⱼ(c)` with facet slacks `sⱼ` and
    /// `c` the center of the largest ball inscribed in `A`.
    Bubble { height: f64 },
}

impl Profile {
    fn height(&self) -> f64 {
        match *self {
            Profile::Tent { height } | Profile::Bubble { height } => height,
        }
    }

    fn with_height(&self, height: f64) -> Profile {
        match self {
            Profile::Tent { .. } => Profile::Tent { height },
            Profile::Bubble { .. } => Profile::Bubble { height },
        }
    }
}

/// `{(x′, t) : x′ ∈ A, 0 < t < f(x′)}` over a convex base `A ⊂ ℝⁿ⁻¹`.
#[derive(Debug, Clone)]
pub struct Subgraph {
    base: ConvexPolytope,
    profile: Profile,
    bubble_norm: f64,
    /// Samples per base axis for the graph-distance search.
    samples: usize,
    f_max: f64,
}

const DEFAULT_SAMPLES: usize = 64;

impl Subgraph {
    pub fn new(base: ConvexPolytope, profile: Profile) -> Result<Self> {
        let h = profile.height();
        if !(h.is_finite() && h > 0.0) {
            return Err(invalid(format!("profile height {h} must be positive")));
        }
        if base.dim() > 2 {
            return Err(Error::Unsupported("subgraph bases of dimension above 2".into()));
        }
        let bubble_norm = base
            .halfspaces()
            .iter()
            .map(|hs| hs.slack(base.center()))
            .product::<f64>();
        let mut s = Subgraph {
            base,
            profile,
            bubble_norm,
            samples: DEFAULT_SAMPLES,
            f_max: 0.0,
        };
        s.f_max = s.validate_profile()?;
        Ok(s)
    }

    /// Changes the number of samples per base axis used by the distance search.
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples.max(4);
        self
    }

    pub fn dim(&self) -> usize {
        self.base.dim() + 1
    }

    pub fn base(&self) -> &ConvexPolytope {
        &self.base
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    /// Checks f > 0 in A and f = 0 on ∂A on a sample grid; returns max f.
    fn validate_profile(&self) -> Result<f64> {
        let mut f_max: f64 = 0.0;
        for y in self.base_grid(24) {
            let v = self.profile_value(&y);
            let inside = self.base.contains(&y);
            if inside && !(v > 0.0) {
                return Err(Error::Degenerate(format!("profile vanishes at interior base point {y:?}")));
            }
            f_max = f_max.max(v);
        }
        for b in self.base.boundary_quadrature(4)? {
            let v = self.profile_value(&b.position);
            if v.abs() > 1e-9 * self.profile.height() {
                return Err(Error::Degenerate(format!(
                    "profile is {v} at base boundary point {:?}",
                    b.position.coords()
                )));
            }
        }
        Ok(f_max.max(self.profile_value(self.base.center())))
    }

    /// The profile `f(x′)`; zero outside the base.
    pub fn profile_value(&self, y: &[f64]) -> f64 {
        let slacks = self.base.halfspaces().iter().map(|hs| hs.slack(y).max(0.0));
        match self.profile {
            Profile::Tent { height } => {
                height * slacks.fold(f64::INFINITY, f64::min) / self.base.inradius()
            }
            Profile::Bubble { height } => height * slacks.product::<f64>() / self.bubble_norm,
        }
    }

    /// ∇f at an interior base point (one-sided choice on ridges of the tent).
    pub fn profile_gradient(&self, y: &[f64]) -> Vec<f64> {
        let m = self.base.dim();
        let hs = self.base.halfspaces();
        match self.profile {
            Profile::Tent { height } => {
                let (j, _) = hs
                    .iter()
                    .enumerate()
                    .map(|(j, h)| (j, h.slack(y)))
                    .fold((0, f64::INFINITY), |acc, (j, s)| if s < acc.1 { (j, s) } else { acc });
                let k = height / self.base.inradius();
                (0..m).map(|i| -k * hs[j].normal[i]).collect()
            }
            Profile::Bubble { .. } => {
                let f = self.profile_value(y);
                let mut g = vec![0.0; m];
                for h in hs {
                    let s = h.slack(y);
                    if s > 0.0 {
                        for (gi, ni) in g.iter_mut().zip(h.normal.iter()) {
                            *gi -= f * ni / s;
                        }
                    }
                }
                g
            }
        }
    }

    pub fn max_height(&self) -> f64 {
        self.f_max
    }

    fn base_grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let (lo, hi) = self.base.bounding_box();
        let m = lo.len();
        let mut out = Vec::new();
        let step: Vec<f64> = (0..m).map(|i| (hi[i] - lo[i]) / per_axis as f64).collect();
        let total = (per_axis + 1).pow(m as u32);
        for k in 0..total {
            let mut idx = k;
            let mut y = Vec::with_capacity(m);
            for i in 0..m {
                y.push(lo[i] + (idx % (per_axis + 1)) as f64 * step[i]);
                idx /= per_axis + 1;
            }
            if self.base.contains_closed(&y, 1e-12) {
                out.push(y);
            }
        }
        out
    }

    pub(super) fn contains(&self, x: &[f64]) -> bool {
        let (y, t) = x.split_at(self.base.dim());
        let t = t[0];
        t > 0.0 && self.base.contains(y) && t < self.profile_value(y)
    }

    fn graph_point(&self, y: &[f64]) -> Vec<f64> {
        let mut p = y.to_vec();
        p.push(self.profile_value(y));
        p
    }

    /// Local minimization of |x − (y, f(y))| by compass search from `start`.
    fn refine_graph(&self, x: &[f64], start: Vec<f64>, step0: f64) -> (Vec<f64>, f64) {
        let m = self.base.dim();
        let mut y = start;
        let mut best = dist(x, &self.graph_point(&y));
        let mut step = step0;
        let floor = 1e-14 * (1.0 + self.f_max);
        while step > floor {
            let mut moved = false;
            for i in 0..m {
                for sign in [1.0, -1.0] {
                    let mut cand = y.clone();
                    cand[i] += sign * step;
                    if !self.base.contains_closed(&cand, 0.0) {
                        continue;
                    }
                    let d = dist(x, &self.graph_point(&cand));
                    if d < best {
                        best = d;
                        y = cand;
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        (y, best)
    }

    pub(super) fn projection(&self, x: &[f64]) -> ProjectionResult {
        let m = self.base.dim();
        let t = x[m];
        let mut candidates: Vec<(f64, BoundaryHit)> = Vec::new();
        let mut base_foot = x[..m].to_vec();
        base_foot.push(0.0);
        candidates.push((
            t,
            BoundaryHit {
                point: Point::from_vec_unchecked(base_foot),
                facet: 0,
            },
        ));

        // coarse scan of the graph, then refine the best few separated seeds
        let grid = self.base_grid(self.samples);
        let (lo, hi) = self.base.bounding_box();
        let spacing = (0..m)
            .map(|i| (hi[i] - lo[i]) / self.samples as f64)
            .fold(0.0, f64::max);
        let mut scored: Vec<(f64, Vec<f64>)> = grid
            .into_iter()
            .map(|y| (dist(x, &self.graph_point(&y)), y))
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut seeds: Vec<Vec<f64>> = Vec::new();
        for (_, y) in scored {
            if seeds.len() == 3 {
                break;
            }
            if seeds.iter().all(|s| dist(s, &y) > 2.0 * spacing) {
                seeds.push(y);
            }
        }
        let mut graph_hits: Vec<(f64, Vec<f64>)> = Vec::new();
        for seed in seeds {
            let (y, d) = self.refine_graph(x, seed, spacing);
            if graph_hits.iter().all(|(_, g)| dist(g, &y) > 1e-6 * (1.0 + spacing)) {
                graph_hits.push((d, y));
            }
        }
        for (d, y) in graph_hits {
            candidates.push((
                d,
                BoundaryHit {
                    point: Point::from_vec_unchecked(self.graph_point(&y)),
                    facet: 1,
                },
            ));
        }

        let best = candidates.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        // numerical refinement limits how sharply ties can be resolved
        let tol = 1e-9 * best.max(1e-300) + 1e-13;
        let hits: Vec<BoundaryHit> = candidates
            .into_iter()
            .filter(|(d, _)| *d - best <= tol)
            .map(|(_, h)| h)
            .collect();
        let mut res = ProjectionResult::from_hits(x, hits, None);
        res.distance = best;
        res
    }

    pub(super) fn inradius(&self) -> f64 {
        let m = self.base.dim();
        let per_axis = if m == 1 { 24 } else { 10 };
        let mut best = (0.0, Vec::new());
        for y in self.base_grid(per_axis) {
            let f = self.profile_value(&y);
            for k in 1..per_axis {
                let mut x = y.clone();
                x.push(f * k as f64 / per_axis as f64);
                if self.contains(&x) {
                    let d = self.projection(&x).distance;
                    if d > best.0 {
                        best = (d, x);
                    }
                }
            }
        }
        // compass ascent on δ from the best grid point
        let (mut delta, mut x) = best;
        let mut step = self.f_max / per_axis as f64;
        while step > 1e-10 * self.f_max {
            let mut moved = false;
            for i in 0..=m {
                for sign in [1.0, -1.0] {
                    let mut cand = x.clone();
                    cand[i] += sign * step;
                    if self.contains(&cand) {
                        let d = self.projection(&cand).distance;
                        if d > delta {
                            delta = d;
                            x = cand;
                            moved = true;
                        }
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        delta
    }

    /// Exit along the line by marching then bisecting on membership.
    pub(super) fn ray(&self, x: &[f64], e: &[f64]) -> RayExit {
        let m = self.base.dim();
        let (lo, hi) = self.base.bounding_box();
        let diam = dist(&lo, &hi).hypot(self.f_max);
        let step = diam / 512.0;
        let exit = |sign: f64| -> Option<RayHit> {
            let mut s_in = 0.0;
            let mut s = step;
            while s <= 2.0 * diam {
                if !self.contains(&along(x, sign * s, e)) {
                    let mut a = s_in;
                    let mut b = s;
                    for _ in 0..80 {
                        let mid = 0.5 * (a + b);
                        if self.contains(&along(x, sign * mid, e)) {
                            a = mid;
                        } else {
                            b = mid;
                        }
                        if b - a <= 1e-15 * b {
                            break;
                        }
                    }
                    let p = along(x, sign * b, e);
                    let t = p[m];
                    let f = self.profile_value(&p[..m]);
                    let facet = if t.abs() <= (t - f).abs() { 0 } else { 1 };
                    return Some(RayHit { s: sign * b, facet });
                }
                s_in = s;
                s += step;
            }
            None
        };
        let fwd: Vec<RayHit> = exit(1.0).into_iter().collect();
        let bwd: Vec<RayHit> = exit(-1.0).into_iter().collect();
        RayExit::from_candidates(&fwd, &bwd)
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let (mut lo, mut hi) = self.base.bounding_box();
        lo.push(0.0);
        hi.push(self.f_max);
        (lo, hi)
    }

    /// Base `A × {0}` (facet 0) and graph (facet 1). The lateral part over
    /// `∂A` has zero height because `f = 0` there.
    pub(super) fn boundary_quadrature(&self, resolution: usize) -> Result<Vec<BoundaryNode>> {
        let m = self.base.dim();
        let base_nodes: Vec<(Vec<f64>, f64)> = match m {
            1 => {
                let (lo, hi) = self.base.bounding_box();
                segment_nodes(&lo, &hi, resolution)
            }
            2 => {
                let v = self.base.vertices();
                let c = self.base.center();
                let mut ordered: Vec<&Vec<f64>> = v.iter().collect();
                ordered.sort_by(|a, b| {
                    (a[1] - c[1]).atan2(a[0] - c[0]).total_cmp(&(b[1] - c[1]).atan2(b[0] - c[0]))
                });
                let mut nodes = Vec::new();
                for k in 0..ordered.len() {
                    let (a, b) = (ordered[k], ordered[(k + 1) % ordered.len()]);
                    nodes.extend(triangle_nodes(c, a, b, resolution));
                }
                nodes
            }
            _ => unreachable!("base dimension checked at construction"),
        };
        let mut out = Vec::with_capacity(2 * base_nodes.len());
        let mut down = vec![0.0; m + 1];
        down[m] = -1.0;
        for (y, w) in &base_nodes {
            let mut p = y.clone();
            p.push(0.0);
            out.push(BoundaryNode {
                position: Point::from_vec_unchecked(p),
                weight: *w,
                normal: Direction::from_vec_unchecked(down.clone()),
                facet: 0,
            });
        }
        for (y, w) in base_nodes {
            let g = self.profile_gradient(&y);
            let stretch = (1.0 + g.iter().map(|a| a * a).sum::<f64>()).sqrt();
            let mut nrm: Vec<f64> = g.iter().map(|a| -a / stretch).collect();
            nrm.push(1.0 / stretch);
            out.push(BoundaryNode {
                position: Point::from_vec_unchecked(self.graph_point(&y)),
                weight: w * stretch,
                normal: Direction::from_vec_unchecked(nrm),
                facet: 1,
            });
        }
        Ok(out)
    }

    /// Shift of the base by `v ∈ ℝⁿ⁻¹`.
    pub fn translated(&self, v: &[f64]) -> Result<Self> {
        let mut s = self.clone();
        s.base = self.base.translated(v);
        Ok(s)
    }

    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        let base = self.base.dilated(lambda);
        let profile = self.profile.with_height(self.profile.height() * lambda);
        Ok(Subgraph::new(base, profile)?.with_samples(self.samples))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent() -> Subgraph {
        let base = ConvexPolytope::axis_box(&[0.0], &[2.0]).unwrap();
        Subgraph::new(base, Profile::Tent { height: 1.0 }).unwrap()
    }

    #[test]
    fn tent_profile_shape() {
        let s = tent();
        assert!((s.profile_value(&[1.0]) - 1.0).abs() < 1e-15);
        assert!((s.profile_value(&[0.5]) - 0.5).abs() < 1e-15);
        assert_eq!(s.profile_value(&[0.0]), 0.0);
    }

    #[test]
    fn tent_distance_to_roof() {
        // roof line t = x′ on the left half; distance from (0.5, 0.1) is (0.4)/√2
        let s = tent();
        let p = s.projection(&[0.5, 0.1]);
        assert!((p.distance - 0.1).abs() < 1e-12, "base is nearer: {}", p.distance);
        let p = s.projection(&[0.8, 0.7]);
        let expected = (0.8f64 - 0.7) / 2f64.sqrt();
        assert!((p.distance - expected).abs() < 1e-10, "{} vs {expected}", p.distance);
        assert_eq!(p.facet, 1);
    }

    #[test]
    fn tent_boundary_length() {
        let s = tent();
        let nodes = s.boundary_quadrature(8).unwrap();
        let total: f64 = nodes.iter().map(|b| b.weight).sum();
        assert!((total - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12, "{total}");
    }

    #[test]
    fn rejects_bad_height() {
        let base = ConvexPolytope::axis_box(&[0.0], &[1.0]).unwrap();
        assert!(Subgraph::new(base, Profile::Bubble { height: 0.0 }).is_err());
    }
}
