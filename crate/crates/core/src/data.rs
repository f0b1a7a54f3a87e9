//! Feature matrices and Pearson correlation estimation.

use ndarray::ArrayView2;

use crate::correlation::CorrelationMatrix;
use crate::error::{AlcError, Result};

/// `N x D` matrix of finite values, one object (time series) per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(AlcError::InvalidInput(format!(
                "data matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(AlcError::InvalidInput(format!(
                "expected {} values for {rows}x{cols}, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(AlcError::Parse {
                row: k / cols,
                column: k % cols,
                message: "non-finite value".into(),
            });
        }
        Ok(DataMatrix { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(AlcError::Parse {
                    row: i,
                    column: r.len().min(cols),
                    message: format!("row has {} columns, expected {cols}", r.len()),
                });
            }
            values.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, values)
    }

    pub(crate) fn from_trusted(rows: usize, cols: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), rows * cols);
        DataMatrix { rows, cols, values }
    }

    /// Number of objects.
    pub fn n(&self) -> usize {
        self.rows
    }

    /// Series length.
    pub fn d(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Natural-log differences along each row; the result is one column
    /// shorter. Prices must be strictly positive.
    pub fn log_returns(&self) -> Result<DataMatrix> {
        if self.cols < 2 {
            return Err(AlcError::InvalidInput(
                "log returns need at least two columns".into(),
            ));
        }
        let mut out = Vec::with_capacity(self.rows * (self.cols - 1));
        for i in 0..self.rows {
            let row = self.row(i);
            if let Some(j) = row.iter().position(|&p| p <= 0.0) {
                return Err(AlcError::Parse {
                    row: i,
                    column: j,
                    message: "log returns need strictly positive prices".into(),
                });
            }
            out.extend(row.windows(2).map(|w| (w[1] / w[0]).ln()));
        }
        Ok(DataMatrix::from_trusted(self.rows, self.cols - 1, out))
    }
}

/// Pearson correlation between rows.
pub fn estimate_correlation(data: &DataMatrix) -> Result<CorrelationMatrix> {
    let (n, d) = (data.n(), data.d());
    if d < 2 {
        return Err(AlcError::InvalidInput(format!(
            "need series of length at least 2, got {d}"
        )));
    }
    let mut z = Vec::with_capacity(n * d);
    for i in 0..n {
        let row = data.row(i);
        let mean = row.iter().sum::<f64>() / d as f64;
        let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let ss: f64 = row.iter().map(|v| (v - mean) * (v - mean)).sum();
        // Residual round-off of a constant row is a few ulps of its magnitude.
        let floor = 16.0 * d as f64 * (f64::EPSILON * scale).powi(2);
        if !(ss > floor) {
            return Err(AlcError::DegenerateSeries { row: i });
        }
        let inv = 1.0 / ss.sqrt();
        z.extend(row.iter().map(|v| (v - mean) * inv));
    }
    let zv = ArrayView2::from_shape((n, d), &z).expect("shape matches buffer");
    let prod = zv.dot(&zv.t());

    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let v = prod[[i, j]].clamp(-1.0, 1.0);
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    Ok(CorrelationMatrix::from_trusted(n, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn duplicate_and_negated_rows() {
        let d = DataMatrix::from_rows(&[
            vec![1.0, 2.0, 0.5, 3.0],
            vec![1.0, 2.0, 0.5, 3.0],
            vec![-1.0, -2.0, -0.5, -3.0],
        ])
        .unwrap();
        let c = estimate_correlation(&d).unwrap();
        assert_eq!(c.get(0, 1), 1.0);
        assert_eq!(c.get(0, 2), -1.0);
        assert_eq!(c.get(1, 1), 1.0);
    }

    #[test]
    fn hand_computed_table() {
        // x = (1,2,3,4), y = (2,1,4,3), z = (1,3,2,5).
        // Centered: x' = (-1.5,-.5,.5,1.5), y' = (-.5,-1.5,1.5,.5),
        // z' = (-1.75,.25,-.75,2.25); |x'|^2 = |y'|^2 = 5, |z'|^2 = 8.75.
        // x'.y' = 3, x'.z' = 5.5, y'.z' = 0.5.
        let d = DataMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0, 4.0],
            vec![2.0, 1.0, 4.0, 3.0],
            vec![1.0, 3.0, 2.0, 5.0],
        ])
        .unwrap();
        let c = estimate_correlation(&d).unwrap();
        assert_abs_diff_eq!(c.get(0, 1), 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(c.get(0, 2), 5.5 / (5.0f64 * 8.75).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(c.get(1, 2), 0.5 / (5.0f64 * 8.75).sqrt(), epsilon = 1e-14);
        assert_eq!(c.get(2, 1), c.get(1, 2));
    }

    #[test]
    fn zero_variance_row_is_named() {
        let d = DataMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![0.1, 0.1, 0.1]]).unwrap();
        assert_eq!(
            estimate_correlation(&d),
            Err(AlcError::DegenerateSeries { row: 1 })
        );
    }

    #[test]
    fn rejects_short_or_ragged_input() {
        let d = DataMatrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        assert!(estimate_correlation(&d).is_err());
        assert!(matches!(
            DataMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0]]),
            Err(AlcError::Parse { row: 1, .. })
        ));
        assert!(DataMatrix::new(1, 2, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn log_returns_shorten_rows() {
        let d = DataMatrix::from_rows(&[vec![1.0, std::f64::consts::E, 1.0]]).unwrap();
        let r = d.log_returns().unwrap();
        assert_eq!(r.d(), 2);
        assert_abs_diff_eq!(r.row(0)[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.row(0)[1], -1.0, epsilon = 1e-15);
        assert!(DataMatrix::from_rows(&[vec![1.0, 0.0]])
            .unwrap()
            .log_returns()
            .is_err());
    }
}
