//! Tridiagonal matrices and the Thomas algorithm.

use crate::error::{Error, Result};

/// Square tridiagonal matrix stored by diagonals.
///
/// Row `i` holds `lower[i]` at column `i-1`, `diag[i]` at `i` and `upper[i]`
/// at `i+1`; `lower[0]` and `upper[n-1]` are unused and kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if row == col {
            self.diag[row]
        } else if col + 1 == row {
            self.lower[row]
        } else if row + 1 == col {
            self.upper[row]
        } else {
            0.0
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// `y = A^T x`.
    pub fn transpose_matvec(&self, x: &[f64]) -> Vec<f64> {
        self.transpose().matvec(x)
    }

    pub fn transpose(&self) -> Self {
        let n = self.len();
        let mut t = Self::zeros(n);
        t.diag.copy_from_slice(&self.diag);
        for i in 1..n {
            t.lower[i] = self.upper[i - 1];
            t.upper[i - 1] = self.lower[i];
        }
        t
    }

    /// `I - dt * self`.
    pub fn shifted_identity(&self, dt: f64) -> Self {
        Self {
            lower: self.lower.iter().map(|v| -dt * v).collect(),
            diag: self.diag.iter().map(|v| 1.0 - dt * v).collect(),
            upper: self.upper.iter().map(|v| -dt * v).collect(),
        }
    }

    /// Nonzero entries as `(row, col, value)` triples in row-major order.
    pub fn triples(&self) -> Vec<(usize, usize, f64)> {
        let n = self.len();
        let mut out = Vec::with_capacity(3 * n);
        for i in 0..n {
            if i > 0 && self.lower[i] != 0.0 {
                out.push((i, i - 1, self.lower[i]));
            }
            if self.diag[i] != 0.0 {
                out.push((i, i, self.diag[i]));
            }
            if i + 1 < n && self.upper[i] != 0.0 {
                out.push((i, i + 1, self.upper[i]));
            }
        }
        out
    }

    pub fn factorize(&self) -> Result<TridiagonalLu> {
        TridiagonalLu::new(self)
    }
}

/// LU factors of a tridiagonal matrix without pivoting.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<f64>,
    // Multipliers of the forward sweep and the reduced pivots.
    mult: Vec<f64>,
    pivot: Vec<f64>,
    upper: Vec<f64>,
}

impl TridiagonalLu {
    fn new(a: &Tridiagonal) -> Result<Self> {
        let n = a.len();
        let mut pivot = vec![0.0; n];
        let mut mult = vec![0.0; n];
        for i in 0..n {
            // Rows of graded meshes differ in scale by many decades, so judge each pivot
            // against its own row.
            let mut scale = a.diag[i].abs();
            let mut d = a.diag[i];
            if i > 0 {
                mult[i] = a.lower[i] / pivot[i - 1];
                d -= mult[i] * a.upper[i - 1];
                scale = scale.max(a.lower[i].abs());
            }
            if i + 1 < n {
                scale = scale.max(a.upper[i].abs());
            }
            if !d.is_finite() || d.abs() <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::Numerical(format!(
                    "zero pivot {d:e} at row {i} of {n} (row scale {scale:e})"
                )));
            }
            pivot[i] = d;
        }
        Ok(Self {
            lower: a.lower.clone(),
            mult,
            pivot,
            upper: a.upper.clone(),
        })
    }

    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.pivot.len();
        assert_eq!(rhs.len(), n);
        debug_assert_eq!(self.lower.len(), n);
        for i in 1..n {
            rhs[i] -= self.mult[i] * rhs[i - 1];
        }
        for i in (0..n).rev() {
            let mut v = rhs[i];
            if i + 1 < n {
                v -= self.upper[i] * rhs[i + 1];
            }
            rhs[i] = v / self.pivot[i];
        }
    }
}
