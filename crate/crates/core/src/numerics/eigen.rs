use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// Iteration cap for the inverse iteration.
pub const MAX_ITERATIONS: usize = 10_000;

const MAX_FACTORIZATIONS: usize = 24;
const SYMMETRY_TOL: f64 = 1e-12;

/// Symmetric matrix in variable-band (skyline) storage.
///
/// Row `i` holds columns `start[i]..=i` contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct SkylineMatrix {
    start: Vec<usize>,
    ptr: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineMatrix {
    pub fn zeros(start: Vec<usize>) -> Self {
        let mut ptr = Vec::with_capacity(start.len() + 1);
        ptr.push(0);
        for (i, &s) in start.iter().enumerate() {
            assert!(s <= i, "row envelope must start at or before the diagonal");
            ptr.push(ptr[i] + (i - s + 1));
        }
        let data = vec![0.0; *ptr.last().expect("ptr is nonempty")];
        SkylineMatrix { start, ptr, data }
    }

    /// Full envelope of a dense symmetric matrix, trimmed to leading nonzeros.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: r.len() });
            }
            if let Some(v) = r.iter().find(|v| !v.is_finite()) {
                return Err(invalid(format!("non-finite entry {v} in row {i}")));
            }
        }
        for i in 0..n {
            for j in 0..i {
                let scale = rows[i][j].abs().max(rows[j][i].abs()).max(f64::MIN_POSITIVE);
                if (rows[i][j] - rows[j][i]).abs() > SYMMETRY_TOL * scale {
                    return Err(invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let start = (0..n)
            .map(|i| (0..i).find(|&j| rows[i][j] != 0.0).unwrap_or(i))
            .collect();
        let mut m = SkylineMatrix::zeros(start);
        for i in 0..n {
            for j in m.start[i]..=i {
                m.add(i, j, rows[i][j]);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.start.len()
    }

    pub fn starts(&self) -> &[usize] {
        &self.start
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[self.ptr[i]..self.ptr[i + 1]]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if j < self.start[i] {
            0.0
        } else {
            self.data[self.ptr[i] + j - self.start[i]]
        }
    }

    /// Adds `v` to entry `(i, j)`; panics outside the envelope.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(j >= self.start[i], "entry ({i}, {j}) outside the envelope");
        self.data[self.ptr[i] + j - self.start[i]] += v;
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data[self.ptr[i + 1] - 1]).collect()
    }

    /// Copy embedded in a wider envelope.
    pub fn widened(&self, start: &[usize]) -> Self {
        let mut out = SkylineMatrix::zeros(start.to_vec());
        for i in 0..self.dim() {
            for (k, &v) in self.row(i).iter().enumerate() {
                if v != 0.0 {
                    out.add(i, self.start[i] + k, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s = self.start[i];
            let row = self.row(i);
            let (off, diag) = row.split_at(row.len() - 1);
            let mut acc = diag[0] * x[i];
            for (k, &v) in off.iter().enumerate() {
                acc += v * x[s + k];
                y[s + k] += v * x[i];
            }
            y[i] += acc;
        }
        y
    }

    /// `α·self + β·other` on a shared envelope.
    fn combine(&self, alpha: f64, other: &SkylineMatrix, beta: f64) -> SkylineMatrix {
        debug_assert_eq!(self.start, other.start);
        SkylineMatrix {
            start: self.start.clone(),
            ptr: self.ptr.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| alpha * a + beta * b).collect(),
        }
    }

    /// Lower Cholesky factor `L` with `L Lᵀ = self`, same envelope.
    pub fn cholesky(&self) -> Result<CholeskyFactor> {
        let n = self.dim();
        let mut l = self.clone();
        for i in 0..n {
            let si = l.start[i];
            let pi = l.ptr[i];
            for j in si..i {
                let sj = l.start[j];
                let k0 = si.max(sj);
                let (head, tail) = l.data.split_at_mut(pi);
                let rj = &head[l.ptr[j]..l.ptr[j + 1]];
                let ri = &mut tail[..i - si + 1];
                let dot: f64 = ri[k0 - si..j - si]
                    .iter()
                    .zip(&rj[k0 - sj..j - sj])
                    .map(|(a, b)| a * b)
                    .sum();
                ri[j - si] = (ri[j - si] - dot) / rj[j - sj];
            }
            let ri = &mut l.data[pi..pi + (i - si + 1)];
            let (off, diag) = ri.split_at_mut(i - si);
            let pivot = diag[0] - off.iter().map(|v| v * v).sum::<f64>();
            if !(pivot > 0.0 && pivot.is_finite()) {
                return Err(Error::NotPositiveDefinite { row: i, pivot });
            }
            diag[0] = pivot.sqrt();
        }
        Ok(CholeskyFactor { l })
    }
}

/// Factor produced by [`SkylineMatrix::cholesky`].
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    l: SkylineMatrix,
}

impl CholeskyFactor {
    /// Solves `L Lᵀ x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.l;
        let n = l.dim();
        let mut y = b.to_vec();
        for i in 0..n {
            let s = l.start[i];
            let row = l.row(i);
            let dot: f64 = row[..i - s].iter().zip(&y[s..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - dot) / row[i - s];
        }
        for i in (0..n).rev() {
            let s = l.start[i];
            let row = l.row(i);
            y[i] /= row[i - s];
            let xi = y[i];
            for (k, &v) in row[..i - s].iter().enumerate() {
                y[s + k] -= v * xi;
            }
        }
        y
    }
}

/// Symmetric pencil `(A, B)` with `B` positive definite.
#[derive(Debug, Clone)]
pub struct SymmetricPencil {
    a: SkylineMatrix,
    b: SkylineMatrix,
}

impl SymmetricPencil {
    pub fn new(a: SkylineMatrix, b: SkylineMatrix) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
        }
        if a.dim() == 0 {
            return Err(invalid("empty pencil"));
        }
        if let Some((i, d)) = b.diagonal().into_iter().enumerate().find(|(_, d)| !(*d > 0.0)) {
            return Err(invalid(format!("mass matrix diagonal entry {d} at row {i} is not positive")));
        }
        if a.data.iter().chain(&b.data).any(|v| !v.is_finite()) {
            return Err(invalid("non-finite matrix entry"));
        }
        let (a, b) = if a.start == b.start {
            (a, b)
        } else {
            let start: Vec<usize> = a.start.iter().zip(&b.start).map(|(x, y)| *x.min(y)).collect();
            (a.widened(&start), b.widened(&start))
        };
        Ok(SymmetricPencil { a, b })
    }

    pub fn from_dense(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<Self> {
        Self::new(SkylineMatrix::from_dense(a)?, SkylineMatrix::from_dense(b)?)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &SkylineMatrix {
        &self.a
    }

    pub fn b(&self) -> &SkylineMatrix {
        &self.b
    }

    /// The pencil `(A + c B, B)`, whose eigenvalues are shifted by `c`.
    pub fn shifted(&self, c: f64) -> Self {
        SymmetricPencil {
            a: self.a.combine(1.0, &self.b, c),
            b: self.b.clone(),
        }
    }

    /// `xᵀAx / xᵀBx`
    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        let ax = self.a.mul_vec(x);
        let bx = self.b.mul_vec(x);
        dot(x, &ax) / dot(x, &bx)
    }
}

/// Smallest eigenpair of a pencil, with a certified lower bound.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    /// Normalized so that `xᵀBx = 1`.
    pub vector: Vec<f64>,
    /// `‖Ax − λBx‖ / max(‖Ax‖, |λ|‖Bx‖)`
    pub residual: f64,
    /// A shift `s` at which `A − sB` admitted a Cholesky factorization.
    pub lower_bound: f64,
    pub iterations: usize,
    pub factorizations: usize,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Shifted inverse iteration for the smallest eigenvalue of `Ax = λBx`.
///
/// Stops once the relative residual falls below `tol` or the extrapolated
/// eigenvalue error does.
pub fn smallest_eigenpair(pencil: &SymmetricPencil, tol: f64) -> Result<EigenPair> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance {tol} must be positive")));
    }
    let (a, b) = (&pencil.a, &pencil.b);
    let n = pencil.dim();
    b.cholesky().map_err(|e| match e {
        Error::NotPositiveDefinite { row, pivot } => {
            invalid(format!("mass matrix is not positive definite (row {row}, pivot {pivot})"))
        }
        other => other,
    })?;

    let mut factorizations = 0;
    let try_shift = |s: f64, count: &mut usize| {
        *count += 1;
        a.combine(1.0, b, -s).cholesky().ok()
    };

    // bracket from below: A − sB positive definite
    let mut shift = -1.0;
    let mut factor = loop {
        if let Some(f) = try_shift(shift, &mut factorizations) {
            break f;
        }
        shift *= 2.0;
        if !shift.is_finite() {
            return Err(Error::Degenerate("no shift makes the pencil positive definite".into()));
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| 0.5 + rng.random::<f64>()).collect();
    let bx = b.mul_vec(&x);
    let s = dot(&x, &bx).sqrt();
    x.iter_mut().for_each(|v| *v /= s);

    let mut rho_prev = f64::NAN;
    let mut delta_prev = f64::NAN;
    let mut since_shift = 0;
    let mut step = 0.5;
    let mut best = (f64::INFINITY, x.clone(), f64::INFINITY);

    for it in 1..=MAX_ITERATIONS {
        let mut y = factor.solve(&b.mul_vec(&x));
        let by = b.mul_vec(&y);
        let len = dot(&y, &by).sqrt();
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::Degenerate("inverse iteration produced a null vector".into()));
        }
        y.iter_mut().for_each(|v| *v /= len);
        x = y;
        let ax = a.mul_vec(&x);
        let bx = b.mul_vec(&x);
        let rho = dot(&x, &ax);
        let r: Vec<f64> = ax.iter().zip(&bx).map(|(p, q)| p - rho * q).collect();
        let scale = norm2(&ax).max(rho.abs() * norm2(&bx)).max(f64::MIN_POSITIVE);
        let residual = norm2(&r) / scale;
        if residual < best.2 {
            best = (rho, x.clone(), residual);
        }

        let delta = (rho - rho_prev).abs();
        let q = delta / delta_prev;
        let extrapolated = if q.is_finite() && q < 1.0 { delta * q / (1.0 - q) } else { f64::INFINITY };
        let mag = rho.abs().max(1.0);
        let done = residual <= tol
            || (since_shift >= 2 && extrapolated <= tol * mag)
            || (rho - shift).abs() <= tol * mag;
        if done {
            return Ok(EigenPair {
                value: rho,
                vector: x,
                residual,
                lower_bound: shift,
                iterations: it,
                factorizations,
            });
        }

        since_shift += 1;
        rho_prev = rho;
        delta_prev = delta;

        if since_shift >= 3 && q.is_finite() && q > 0.3 && factorizations < MAX_FACTORIZATIONS {
            let err = if extrapolated.is_finite() { extrapolated } else { rho - shift };
            let target = (rho - 2.0 * err).max(shift + step * (rho - shift));
            if target > shift && target < rho {
                if let Some(f) = try_shift(target, &mut factorizations) {
                    factor = f;
                    shift = target;
                    since_shift = 0;
                    rho_prev = f64::NAN;
                    delta_prev = f64::NAN;
                } else {
                    step *= 0.5;
                }
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        estimate: best.0,
        residual: best.2,
        vector: best.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> Vec<Vec<f64>> {
        (0..d.len())
            .map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0.0 }).collect())
            .collect()
    }

    #[test]
    fn diagonal_pencil() {
        let p = SymmetricPencil::from_dense(&diag(&[3.0, 5.0]), &diag(&[1.0, 1.0])).unwrap();
        let e = smallest_eigenpair(&p, 1e-12).unwrap();
        assert!((e.value - 3.0).abs() < 1e-10);
        assert!(e.lower_bound < 3.0);
    }

    #[test]
    fn identical_matrices_give_one() {
        let m = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let p = SymmetricPencil::from_dense(&m, &m).unwrap();
        let e = smallest_eigenpair(&p, 1e-12).unwrap();
        assert!((e.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_asymmetric_and_singular_mass() {
        let a = vec![vec![1.0, 2.0], vec![0.0, 1.0]];
        assert!(SymmetricPencil::from_dense(&a, &diag(&[1.0, 1.0])).is_err());
        assert!(SymmetricPencil::from_dense(&diag(&[1.0, 1.0]), &diag(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn negative_spectrum() {
        let p = SymmetricPencil::from_dense(&diag(&[-40.0, 7.0, 9.0]), &diag(&[2.0, 1.0, 1.0])).unwrap();
        let e = smallest_eigenpair(&p, 1e-12).unwrap();
        assert!((e.value + 20.0).abs() < 1e-9);
        assert!(e.lower_bound <= -20.0);
    }

    #[test]
    fn cholesky_solves() {
        let m = vec![vec![4.0, 2.0, 0.0], vec![2.0, 5.0, 1.0], vec![0.0, 1.0, 3.0]];
        let s = SkylineMatrix::from_dense(&m).unwrap();
        let f = s.cholesky().unwrap();
        let x = f.solve(&[1.0, 2.0, 3.0]);
        let back = s.mul_vec(&x);
        for (u, v) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn dirichlet_laplacian_on_zero_pi() {
        // P1 elements on (0, π) with zero end values; the first eigenvalue is 1
        let m: usize = 1000;
        let h = std::f64::consts::PI / m as f64;
        let n = m - 1;
        let start: Vec<usize> = (0..n).map(|i| i.saturating_sub(1)).collect();
        let mut a = SkylineMatrix::zeros(start.clone());
        let mut b = SkylineMatrix::zeros(start);
        for i in 0..n {
            a.add(i, i, 2.0 / h);
            b.add(i, i, 4.0 * h / 6.0);
            if i > 0 {
                a.add(i, i - 1, -1.0 / h);
                b.add(i, i - 1, h / 6.0);
            }
        }
        let p = SymmetricPencil::new(a, b).unwrap();
        let e = smallest_eigenpair(&p, 1e-10).unwrap();
        assert!((e.value - 1.0).abs() < 1e-4, "{}", e.value);
        assert!(e.value >= 1.0);
    }
}
