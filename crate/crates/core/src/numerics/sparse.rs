use std::io::Write;

use super::SkylineMatrix;

/// Symmetric sparse matrix storing the lower triangle in compressed rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSymmetric {
    /// Sums duplicate entries; `(i, j)` and `(j, i)` address the same entry.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut t: Vec<(usize, usize, f64)> = triplets
            .into_iter()
            .map(|(i, j, v)| if i >= j { (i, j, v) } else { (j, i, v) })
            .collect();
        t.sort_unstable_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in t {
            assert!(i < n, "row {i} out of range for dimension {n}");
            if last == Some((i, j)) {
                *vals.last_mut().expect("entry exists") += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseSymmetric { n, row_ptr, cols, vals }
    }

    pub fn zeros(n: usize) -> Self {
        SparseSymmetric {
            n,
            row_ptr: vec![0; n + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Lower-triangle entries `(i, j, v)` with `j ≤ i`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.cols[k], self.vals[k]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        match row.binary_search(&j) {
            Ok(k) => self.vals[self.row_ptr[i] + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (i, j, v) in self.entries() {
            y[i] += v * x[j];
            if i != j {
                y[j] += v * x[i];
            }
        }
        y
    }

    /// `xᵀ A x`
    pub fn quadratic(&self, x: &[f64]) -> f64 {
        self.entries()
            .map(|(i, j, v)| if i == j { v * x[i] * x[i] } else { 2.0 * v * x[i] * x[j] })
            .sum()
    }

    /// `α·self + β·other`
    pub fn combine(&self, alpha: f64, other: &SparseSymmetric, beta: f64) -> SparseSymmetric {
        assert_eq!(self.n, other.n, "dimension mismatch in combine");
        let a = self.entries().map(|(i, j, v)| (i, j, alpha * v));
        let b = other.entries().map(|(i, j, v)| (i, j, beta * v));
        SparseSymmetric::from_triplets(self.n, a.chain(b))
    }

    /// Principal submatrix on the sorted index set `keep`.
    pub fn restrict(&self, keep: &[usize]) -> SparseSymmetric {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let t = self.entries().filter_map(|(i, j, v)| {
            let (a, b) = (map[i], map[j]);
            (a != usize::MAX && b != usize::MAX).then_some((a, b, v))
        });
        SparseSymmetric::from_triplets(keep.len(), t)
    }

    /// Envelope of each row: the smallest column index holding an entry.
    pub fn row_starts(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| {
                if self.row_ptr[i] < self.row_ptr[i + 1] {
                    self.cols[self.row_ptr[i]].min(i)
                } else {
                    i
                }
            })
            .collect()
    }

    /// Skyline copy using the given row envelope (must cover this matrix's).
    pub fn to_skyline_with(&self, start: &[usize]) -> SkylineMatrix {
        let mut s = SkylineMatrix::zeros(start.to_vec());
        for (i, j, v) in self.entries() {
            s.add(i, j, v);
        }
        s
    }

    pub fn to_skyline(&self) -> SkylineMatrix {
        self.to_skyline_with(&self.row_starts())
    }

    /// Coordinate text: a header line `n n nnz` then `i j value` (1-based, lower triangle).
    pub fn write_coordinate(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.n, self.n, self.nnz())?;
        for (i, j, v) in self.entries() {
            writeln!(w, "{} {} {:.17e}", i + 1, j + 1, v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assembles_and_multiplies() {
        let a = SparseSymmetric::from_triplets(3, vec![(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 2.0), (2, 2, 1.0)]);
        assert_eq!(a.get(0, 1), -2.0);
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![0.0, 0.0, 1.0]);
        assert_eq!(a.quadratic(&[1.0, 2.0, 3.0]), 2.0 - 8.0 + 8.0 + 9.0);
        let r = a.restrict(&[1, 2]);
        assert_eq!(r.get(0, 0), 2.0);
        assert_eq!(r.get(1, 0), 0.0);
    }

    #[test]
    fn coordinate_export() {
        let a = SparseSymmetric::from_triplets(2, vec![(0, 0, 1.0), (1, 0, 0.5)]);
        let mut buf = Vec::new();
        a.write_coordinate(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("2 2 2\n1 1 "));
    }
}
