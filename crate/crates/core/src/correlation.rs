//! Dense symmetric correlation matrices.

use crate::error::{AlcError, Result};

const ENTRY_TOLERANCE: f64 = 1e-9;

/// Symmetric `n x n` correlation matrix with unit diagonal, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    /// Validates and normalizes a row-major buffer.
    ///
    /// Entries within `1e-9` of the admissible set are snapped onto it: the
    /// diagonal is set to exactly one, the matrix is symmetrized from its
    /// upper triangle and values are clipped to `[-1, 1]`. Anything further
    /// off is rejected.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(AlcError::InvalidInput("correlation matrix is empty".into()));
        }
        if entries.len() != n * n {
            return Err(AlcError::InvalidInput(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        let mut entries = entries;
        for i in 0..n {
            for j in 0..n {
                let v = entries[i * n + j];
                if !v.is_finite() {
                    return Err(AlcError::InvalidInput(format!(
                        "non-finite correlation at ({i}, {j})"
                    )));
                }
                if v.abs() > 1.0 + ENTRY_TOLERANCE {
                    return Err(AlcError::InvalidInput(format!(
                        "correlation {v} at ({i}, {j}) outside [-1, 1]"
                    )));
                }
            }
            if (entries[i * n + i] - 1.0).abs() > ENTRY_TOLERANCE {
                return Err(AlcError::InvalidInput(format!(
                    "diagonal entry ({i}, {i}) = {} is not 1",
                    entries[i * n + i]
                )));
            }
        }
        for i in 0..n {
            entries[i * n + i] = 1.0;
            for j in (i + 1)..n {
                let upper = entries[i * n + j];
                let lower = entries[j * n + i];
                if (upper - lower).abs() > ENTRY_TOLERANCE {
                    return Err(AlcError::InvalidInput(format!(
                        "matrix not symmetric at ({i}, {j}): {upper} vs {lower}"
                    )));
                }
                let v = upper.clamp(-1.0, 1.0);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(CorrelationMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(AlcError::InvalidInput(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        CorrelationMatrix { n, entries }
    }

    /// Caller guarantees the buffer already satisfies every invariant.
    pub(crate) fn from_trusted(n: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        CorrelationMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// Principal sub-matrix on `indices`, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> Self {
        let m = indices.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in indices {
            let row = self.row(i);
            entries.extend(indices.iter().map(|&j| row[j]));
        }
        CorrelationMatrix { n: m, entries }
    }

    /// Sum of all entries over `members x members`, diagonal included.
    pub fn block_sum(&self, members: &[usize]) -> f64 {
        members
            .iter()
            .map(|&i| {
                let row = self.row(i);
                members.iter().map(|&j| row[j]).sum::<f64>()
            })
            .sum()
    }

    /// Sum of `C_ij` over `i` in `a`, `j` in `b`.
    pub fn cross_sum(&self, a: &[usize], b: &[usize]) -> f64 {
        a.iter()
            .map(|&i| {
                let row = self.row(i);
                b.iter().map(|&j| row[j]).sum::<f64>()
            })
            .sum()
    }
}
