use crate::error::{invalid, Error, Result};
use crate::geometry::{BoundaryNode, BoxRelation, Domain};

/// Uniform mesh of `[a, b]` with `cells` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineMesh {
    pub a: f64,
    pub b: f64,
    pub cells: usize,
}

impl LineMesh {
    pub fn new(a: f64, b: f64, cells: usize) -> Result<Self> {
        if !(a < b && a.is_finite() && b.is_finite()) || cells == 0 {
            return Err(invalid(format!("line mesh needs a < b and cells > 0, got [{a}, {b}], {cells}")));
        }
        Ok(LineMesh { a, b, cells })
    }

    /// Mesh of `[a, b]` whose spacing does not exceed `h`.
    pub fn with_spacing(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(invalid(format!("mesh size {h} must be positive")));
        }
        Self::new(a, b, ((b - a) / h - 1e-9).ceil().max(1.0) as usize)
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.cells as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.cells {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> usize {
        self.cells + 1
    }
}

/// Line mesh of `[r₀, r₁]` carrying the radial measure `r^{dim−1} dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMesh {
    pub line: LineMesh,
    pub dim: usize,
}

impl RadialMesh {
    /// `nodes` equally spaced nodes on `[r0, r1]`.
    pub fn new(r0: f64, r1: f64, nodes: usize, dim: usize) -> Result<Self> {
        if !(r0 >= 0.0) {
            return Err(invalid(format!("inner radius {r0} must be nonnegative")));
        }
        if nodes < 2 {
            return Err(invalid("a radial mesh needs at least two nodes"));
        }
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        Ok(RadialMesh {
            line: LineMesh::new(r0, r1, nodes - 1)?,
            dim,
        })
    }

    pub fn metric(&self, r: f64) -> f64 {
        r.powi(self.dim as i32 - 1)
    }
}

/// One cell of a [`GridMesh`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub ix: usize,
    pub iy: usize,
    /// Whether the closed cell lies in the closed domain.
    pub inside: bool,
}

/// Tensor grid over the bounding box of a planar domain. Cells meeting the
/// domain are kept; cut cells are integrated by subcell sampling and the
/// boundary by the domain's boundary quadrature.
#[derive(Debug, Clone)]
pub struct GridMesh {
    pub domain: Domain,
    pub lo: [f64; 2],
    pub h: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<GridCell>,
    /// Active node number of each lattice node, `None` for unused ones.
    pub node_index: Vec<Option<usize>>,
    pub nodes: Vec<[f64; 2]>,
    pub boundary: Vec<BoundaryNode>,
}

/// Subcells per axis used to integrate cut cells.
pub const CUT_SUBDIVISION: usize = 8;

impl GridMesh {
    pub fn new(domain: &Domain, h: f64) -> Result<Self> {
        if domain.dim() != 2 {
            return Err(Error::Unsupported(format!("grid meshes are planar, got dimension {}", domain.dim())));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(invalid(format!("mesh size {h} must be positive")));
        }
        let (blo, bhi) = domain
            .bounding_box()
            .ok_or_else(|| Error::Unsupported("grid meshes need a bounded domain".into()))?;
        let nx = ((bhi[0] - blo[0]) / h - 1e-9).ceil().max(1.0) as usize;
        let ny = ((bhi[1] - blo[1]) / h - 1e-9).ceil().max(1.0) as usize;
        let hx = [(bhi[0] - blo[0]) / nx as f64, (bhi[1] - blo[1]) / ny as f64];
        let lo = [blo[0], blo[1]];

        let mut cells = Vec::new();
        for iy in 0..ny {
            for ix in 0..nx {
                let c0 = [lo[0] + ix as f64 * hx[0], lo[1] + iy as f64 * hx[1]];
                let c1 = [c0[0] + hx[0], c0[1] + hx[1]];
                match domain.classify_box(&c0, &c1) {
                    BoxRelation::Inside => cells.push(GridCell { ix, iy, inside: true }),
                    BoxRelation::Outside => {}
                    BoxRelation::Straddle => {
                        if cut_has_points(domain, c0, hx) {
                            cells.push(GridCell { ix, iy, inside: false });
                        }
                    }
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::Degenerate("no grid cell meets the domain".into()));
        }
        // boundary pieces no longer than a quarter cell
        let span = (bhi[0] - blo[0]).max(bhi[1] - blo[1]);
        let resolution = match domain {
            Domain::Polytope(_) => 4 * nx.max(ny),
            _ => (4.0 * span / hx[0].min(hx[1])).ceil() as usize,
        };
        let boundary = domain.boundary_quadrature(resolution)?;
        // every boundary node needs a cell to carry its Robin term
        let mut seen: std::collections::HashSet<(usize, usize)> = cells.iter().map(|c| (c.ix, c.iy)).collect();
        for b in &boundary {
            let p = b.position.coords();
            let ix = (((p[0] - lo[0]) / hx[0]).floor().max(0.0) as usize).min(nx - 1);
            let iy = (((p[1] - lo[1]) / hx[1]).floor().max(0.0) as usize).min(ny - 1);
            if seen.insert((ix, iy)) {
                cells.push(GridCell { ix, iy, inside: false });
            }
        }
        let stride = nx + 1;
        let mut used = vec![false; stride * (ny + 1)];
        for c in &cells {
            for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                used[(c.iy + dy) * stride + c.ix + dx] = true;
            }
        }
        let mut node_index = vec![None; used.len()];
        let mut nodes = Vec::new();
        for (k, u) in used.iter().enumerate() {
            if *u {
                node_index[k] = Some(nodes.len());
                let (ix, iy) = (k % stride, k / stride);
                nodes.push([lo[0] + ix as f64 * hx[0], lo[1] + iy as f64 * hx[1]]);
            }
        }
        Ok(GridMesh {
            domain: domain.clone(),
            lo,
            h: hx,
            nx,
            ny,
            cells,
            node_index,
            nodes,
            boundary,
        })
    }

    /// Mesh size (largest cell side).
    pub fn size(&self) -> f64 {
        self.h[0].max(self.h[1])
    }

    pub fn cell_origin(&self, c: &GridCell) -> [f64; 2] {
        [self.lo[0] + c.ix as f64 * self.h[0], self.lo[1] + c.iy as f64 * self.h[1]]
    }

    /// Active node numbers of a cell's corners, ordered (0,0), (1,0), (0,1), (1,1).
    pub fn cell_nodes(&self, ix: usize, iy: usize) -> Option<[usize; 4]> {
        let stride = self.nx + 1;
        let mut out = [0; 4];
        for (k, (dx, dy)) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
            out[k] = self.node_index[(iy + dy) * stride + ix + dx]?;
        }
        Some(out)
    }

    /// Cell holding `p` whose corners are all active, preferring the cell
    /// found by flooring.
    pub fn locate(&self, p: &[f64]) -> Option<(usize, usize)> {
        let fx = (p[0] - self.lo[0]) / self.h[0];
        let fy = (p[1] - self.lo[1]) / self.h[1];
        let cx = (fx.floor() as isize).clamp(0, self.nx as isize - 1);
        let cy = (fy.floor() as isize).clamp(0, self.ny as isize - 1);
        let mut candidates = vec![(cx, cy)];
        for (dx, dy) in [(-1, 0), (0, -1), (-1, -1)] {
            candidates.push((cx + dx, cy + dy));
        }
        candidates.into_iter().find_map(|(ix, iy)| {
            if ix < 0 || iy < 0 {
                return None;
            }
            let (ix, iy) = (ix as usize, iy as usize);
            let x0 = self.lo[0] + ix as f64 * self.h[0];
            let y0 = self.lo[1] + iy as f64 * self.h[1];
            let tol = 1e-12 * self.size();
            let inside = p[0] >= x0 - tol
                && p[0] <= x0 + self.h[0] + tol
                && p[1] >= y0 - tol
                && p[1] <= y0 + self.h[1] + tol;
            (inside && self.cell_nodes(ix, iy).is_some()).then_some((ix, iy))
        })
    }

    /// Active nodes whose open support contains `p`.
    pub fn nodes_supporting(&self, p: &[f64]) -> Vec<usize> {
        let fx = (p[0] - self.lo[0]) / self.h[0];
        let fy = (p[1] - self.lo[1]) / self.h[1];
        let stride = self.nx + 1;
        let mut out = Vec::new();
        for ix in [fx.floor(), fx.ceil()] {
            for iy in [fy.floor(), fy.ceil()] {
                if ix < 0.0 || iy < 0.0 || ix > self.nx as f64 || iy > self.ny as f64 {
                    continue;
                }
                if (fx - ix).abs() >= 1.0 - 1e-9 || (fy - iy).abs() >= 1.0 - 1e-9 {
                    continue;
                }
                if let Some(k) = self.node_index[iy as usize * stride + ix as usize] {
                    if !out.contains(&k) {
                        out.push(k);
                    }
                }
            }
        }
        out
    }
}

fn cut_has_points(domain: &Domain, c0: [f64; 2], h: [f64; 2]) -> bool {
    let s = CUT_SUBDIVISION;
    (0..s * s).any(|k| {
        let x = [
            c0[0] + (k % s) as f64 * h[0] / s as f64 + 0.5 * h[0] / s as f64,
            c0[1] + (k / s) as f64 * h[1] / s as f64 + 0.5 * h[1] / s as f64,
        ];
        domain.contains_unchecked(&x)
    })
}

/// Bilinear shape functions on the reference square, corner order as in
/// [`GridMesh::cell_nodes`], with gradients scaled by the cell sides.
pub fn bilinear(xi: f64, eta: f64, h: [f64; 2]) -> ([f64; 4], [[f64; 2]; 4]) {
    let phi = [(1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), (1.0 - xi) * eta, xi * eta];
    let grad = [
        [-(1.0 - eta) / h[0], -(1.0 - xi) / h[1]],
        [(1.0 - eta) / h[0], -xi / h[1]],
        [-eta / h[0], (1.0 - xi) / h[1]],
        [eta / h[0], xi / h[1]],
    ];
    (phi, grad)
}
