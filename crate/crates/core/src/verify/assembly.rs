use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mesh::{bilinear, GridMesh, LineMesh, RadialMesh, CUT_SUBDIVISION};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryNode, Direction, Point};
use crate::numerics::{GaussLegendre, SparseSymmetric, SymmetricPencil};
use crate::weights::{HardyWeight, RobinCoefficient};

/// Where interior weights are sampled inside each element.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightSampling {
    /// At every Gauss point of the element.
    #[default]
    Gauss,
    /// Once per element (or cut subcell), at its center.
    Centroid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssemblyOptions {
    pub sampling: WeightSampling,
    /// Gauss points per axis and element.
    pub gauss_points: usize,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions {
            sampling: WeightSampling::Gauss,
            gauss_points: 4,
        }
    }
}

/// Mesh variants understood by [`assemble`].
#[derive(Debug, Clone)]
pub enum Mesh {
    /// The interval `[a, b]`; facet 0 at `a`, facet 1 at `b`.
    Line(LineMesh),
    /// `[r₀, r₁]` with measure `r^{n−1}dr`, coefficient at `r₀`, and `u(r₁) = 0`.
    Radial(RadialMesh),
    Grid(GridMesh),
}

impl Mesh {
    pub fn size(&self) -> f64 {
        match self {
            Mesh::Line(m) => m.h(),
            Mesh::Radial(m) => m.line.h(),
            Mesh::Grid(g) => g.size(),
        }
    }
}

/// Matrices of the discretized forms on the retained degrees of freedom.
#[derive(Debug, Clone)]
pub struct DiscreteForm {
    /// `∫|∇u|²`
    pub stiffness: SparseSymmetric,
    /// `∫_{∂Ω} σ|u|²` over the finite part of `σ`
    pub robin: SparseSymmetric,
    /// `∫_{∂Ω} w_b|u|²`
    pub bonus: SparseSymmetric,
    /// `∫|u|²`
    pub mass: SparseSymmetric,
    /// `∫W|u|²`
    pub weighted_mass: SparseSymmetric,
    /// Coordinates of the retained nodes.
    pub coords: Vec<Vec<f64>>,
    /// Nodes removed because `σ = +∞` there (or the mesh imposes zero values).
    pub eliminated: usize,
    pub h: f64,
}

impl DiscreteForm {
    pub fn dofs(&self) -> usize {
        self.mass.dim()
    }

    /// `K + M_σ − M_{w_b} − M_W`
    pub fn operator(&self) -> SparseSymmetric {
        let form = self.stiffness.combine(1.0, &self.robin, 1.0);
        let rhs = self.weighted_mass.combine(1.0, &self.bonus, 1.0);
        form.combine(1.0, &rhs, -1.0)
    }

    /// The pencil `(K + M_σ − M_{w_b} − M_W, M)`.
    pub fn pencil(&self) -> Result<SymmetricPencil> {
        let a = self.operator();
        let sa = a.row_starts();
        let sm = self.mass.row_starts();
        let start: Vec<usize> = sa.iter().zip(&sm).map(|(x, y)| *x.min(y)).collect();
        SymmetricPencil::new(a.to_skyline_with(&start), self.mass.to_skyline_with(&start))
    }

    /// `Q_σ[u] = ∫|∇u|² + ∫σ|u|²` for nodal values `u`.
    pub fn form_value(&self, u: &[f64]) -> f64 {
        self.stiffness.quadratic(u) + self.robin.quadratic(u)
    }

    /// `∫W|u|² + ∫w_b|u|²`
    pub fn weight_value(&self, u: &[f64]) -> f64 {
        self.weighted_mass.quadratic(u) + self.bonus.quadratic(u)
    }

    pub fn rayleigh_quotient(&self, u: &[f64]) -> f64 {
        (self.form_value(u) - self.weight_value(u)) / self.mass.quadratic(u)
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        self.coords.iter().map(|x| f(x)).collect()
    }
}

type Triplets = Vec<(usize, usize, f64)>;

#[derive(Default)]
struct Parts {
    k: Triplets,
    m: Triplets,
    w: Triplets,
    robin: Triplets,
    bonus: Triplets,
}

impl Parts {
    fn extend(&mut self, other: Parts) {
        self.k.extend(other.k);
        self.m.extend(other.m);
        self.w.extend(other.w);
        self.robin.extend(other.robin);
        self.bonus.extend(other.bonus);
    }

    fn add_point(&mut self, nodes: &[usize], phi: &[f64], grad: &[&[f64]], w: f64, weight: f64) {
        for a in 0..nodes.len() {
            for b in 0..=a {
                let g: f64 = grad[a].iter().zip(grad[b]).map(|(x, y)| x * y).sum();
                let pp = phi[a] * phi[b];
                self.k.push((nodes[a], nodes[b], w * g));
                self.m.push((nodes[a], nodes[b], w * pp));
                if weight != 0.0 {
                    self.w.push((nodes[a], nodes[b], w * weight * pp));
                }
            }
        }
    }

    fn add_boundary(&mut self, nodes: &[usize], phi: &[f64], sigma_w: f64, bonus_w: f64) {
        for a in 0..nodes.len() {
            for b in 0..=a {
                let pp = phi[a] * phi[b];
                if sigma_w != 0.0 {
                    self.robin.push((nodes[a], nodes[b], sigma_w * pp));
                }
                if bonus_w != 0.0 {
                    self.bonus.push((nodes[a], nodes[b], bonus_w * pp));
                }
            }
        }
    }

    fn finish(self, coords: Vec<Vec<f64>>, mut drop: Vec<bool>, h: f64) -> DiscreteForm {
        let n = coords.len();
        let mass_full = SparseSymmetric::from_triplets(n, self.m);
        // nodes whose support misses the domain carry no mass
        let diag = mass_full.diagonal();
        let scale = diag.iter().cloned().fold(0.0, f64::max);
        for (i, d) in diag.iter().enumerate() {
            if *d <= 1e-14 * scale {
                drop[i] = true;
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| !drop[i]).collect();
        let restrict = |t: Triplets| SparseSymmetric::from_triplets(n, t).restrict(&keep);
        DiscreteForm {
            stiffness: restrict(self.k),
            robin: restrict(self.robin),
            bonus: restrict(self.bonus),
            mass: mass_full.restrict(&keep),
            weighted_mass: restrict(self.w),
            coords: keep.iter().map(|&i| coords[i].clone()).collect(),
            eliminated: n - keep.len(),
            h,
        }
    }
}

fn eval_weight(weight: Option<&dyn HardyWeight>, x: &[f64]) -> Result<f64> {
    let Some(w) = weight else {
        return Ok(0.0);
    };
    let v = w.interior(x)?;
    if !v.is_finite() {
        return Err(Error::NonFiniteWeight { point: x.to_vec(), value: v });
    }
    Ok(v)
}

fn endpoint(x: Vec<f64>, normal: f64, facet: usize) -> BoundaryNode {
    let n = x.len();
    let mut nv = vec![0.0; n];
    nv[0] = normal;
    BoundaryNode {
        position: Point::from_vec_unchecked(x),
        weight: 1.0,
        normal: Direction::from_vec_unchecked(nv),
        facet,
    }
}

/// Discretizes `Q_σ` and, if given, the weight forms on `mesh`.
///
/// `σ = +∞` removes the nodes whose basis functions do not vanish on that
/// part of the boundary. Weights are sampled strictly inside elements.
pub fn assemble(
    mesh: &Mesh,
    sigma: &RobinCoefficient,
    weight: Option<&dyn HardyWeight>,
    opts: &AssemblyOptions,
) -> Result<DiscreteForm> {
    match mesh {
        Mesh::Line(m) => assemble_line(m, None, sigma, weight, opts),
        Mesh::Radial(r) => assemble_line(&r.line, Some(r.dim), sigma, weight, opts),
        Mesh::Grid(g) => assemble_grid(g, sigma, weight, opts),
    }
}

fn assemble_line(
    mesh: &LineMesh,
    radial: Option<usize>,
    sigma: &RobinCoefficient,
    weight: Option<&dyn HardyWeight>,
    opts: &AssemblyOptions,
) -> Result<DiscreteForm> {
    let dim = radial.unwrap_or(1);
    let metric = |r: f64| if radial.is_some() { r.powi(dim as i32 - 1) } else { 1.0 };
    let point = |t: f64| {
        let mut x = vec![0.0; dim];
        x[0] = t;
        x
    };
    let h = mesh.h();
    let rule = GaussLegendre::new(opts.gauss_points.max(1));
    let parts: Result<Vec<Parts>> = (0..mesh.cells)
        .into_par_iter()
        .map(|e| {
            let (t0, t1) = (mesh.node(e), mesh.node(e + 1));
            let nodes = [e, e + 1];
            let grad0 = [-1.0 / h];
            let grad1 = [1.0 / h];
            let centroid = match opts.sampling {
                WeightSampling::Centroid => Some(eval_weight(weight, &point(0.5 * (t0 + t1)))?),
                WeightSampling::Gauss => None,
            };
            let mut p = Parts::default();
            for (t, w) in rule.mapped(t0, t1) {
                let xi = (t - t0) / h;
                let wv = match centroid {
                    Some(v) => v,
                    None => eval_weight(weight, &point(t))?,
                };
                p.add_point(&nodes, &[1.0 - xi, xi], &[&grad0, &grad1], w * metric(t), wv);
            }
            Ok(p)
        })
        .collect();
    let mut all = Parts::default();
    for p in parts? {
        all.extend(p);
    }

    let n = mesh.nodes();
    let mut drop = vec![false; n];
    let ends = [(0usize, mesh.a, -1.0), (n - 1, mesh.b, 1.0)];
    for (facet, &(node, t, normal)) in ends.iter().enumerate() {
        if radial.is_some() && facet == 1 {
            drop[node] = true;
            continue;
        }
        let bnode = endpoint(point(t), normal, facet);
        let s = sigma.at(facet, &bnode.position);
        if s == f64::INFINITY {
            drop[node] = true;
            continue;
        }
        let wb = weight.map_or(0.0, |w| w.boundary(&bnode));
        let g = metric(t);
        all.add_boundary(&[node], &[1.0], s * g, wb * g);
    }
    let coords = (0..n).map(|i| point(mesh.node(i))).collect();
    Ok(all.finish(coords, drop, h))
}

fn assemble_grid(
    mesh: &GridMesh,
    sigma: &RobinCoefficient,
    weight: Option<&dyn HardyWeight>,
    opts: &AssemblyOptions,
) -> Result<DiscreteForm> {
    sigma.validate(&mesh.domain)?;
    let domain = &mesh.domain;
    let h = mesh.h;
    let q = opts.gauss_points.max(1);
    let rule = GaussLegendre::new(q);
    let cut_rule = GaussLegendre::new(q.min(3));
    let parts: Result<Vec<Parts>> = mesh
        .cells
        .par_iter()
        .map(|c| {
            let nodes = mesh.cell_nodes(c.ix, c.iy).expect("corners of active cells are active");
            let o = mesh.cell_origin(c);
            let mut p = Parts::default();
            let (sub, r) = if c.inside { (1, &rule) } else { (CUT_SUBDIVISION, &cut_rule) };
            let sh = [h[0] / sub as f64, h[1] / sub as f64];
            for sy in 0..sub {
                for sx in 0..sub {
                    let s0 = [o[0] + sx as f64 * sh[0], o[1] + sy as f64 * sh[1]];
                    let center = [s0[0] + 0.5 * sh[0], s0[1] + 0.5 * sh[1]];
                    let centroid = match opts.sampling {
                        WeightSampling::Centroid if c.inside || domain.contains_unchecked(&center) => {
                            Some(eval_weight(weight, &center)?)
                        }
                        _ => None,
                    };
                    for (y, wy) in r.mapped(s0[1], s0[1] + sh[1]) {
                        for (x, wx) in r.mapped(s0[0], s0[0] + sh[0]) {
                            let pt = [x, y];
                            if !c.inside && !domain.contains_unchecked(&pt) {
                                continue;
                            }
                            let wv = match centroid {
                                Some(v) => v,
                                None => eval_weight(weight, &pt)?,
                            };
                            let (phi, grad) = bilinear((x - o[0]) / h[0], (y - o[1]) / h[1], h);
                            let g: [&[f64]; 4] = [&grad[0], &grad[1], &grad[2], &grad[3]];
                            p.add_point(&nodes, &phi, &g, wx * wy, wv);
                        }
                    }
                }
            }
            Ok(p)
        })
        .collect();
    let mut all = Parts::default();
    for p in parts? {
        all.extend(p);
    }

    let mut drop = vec![false; mesh.nodes.len()];
    for b in &mesh.boundary {
        let s = sigma.at(b.facet, &b.position);
        if s == f64::INFINITY {
            for k in mesh.nodes_supporting(&b.position) {
                drop[k] = true;
            }
            continue;
        }
        let (ix, iy) = mesh.locate(&b.position).ok_or_else(|| {
            Error::Degenerate(format!("boundary point {:?} is not covered by the grid", b.position.coords()))
        })?;
        let nodes = mesh.cell_nodes(ix, iy).expect("located cells are active");
        let o = [mesh.lo[0] + ix as f64 * h[0], mesh.lo[1] + iy as f64 * h[1]];
        let (phi, _) = bilinear((b.position[0] - o[0]) / h[0], (b.position[1] - o[1]) / h[1], h);
        let wb = weight.map_or(0.0, |w| w.boundary(b));
        all.add_boundary(&nodes, &phi, s * b.weight, wb * b.weight);
    }
    let coords = mesh.nodes.iter().map(|p| p.to_vec()).collect();
    Ok(all.finish(coords, drop, mesh.size()))
}
