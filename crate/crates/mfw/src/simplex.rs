//! Dense primal simplex for small linear programs of the form
//!
//! ```text
//!     maximize  c'x   subject to  Gx <= g,  x >= 0,   with g >= 0.
//! ```
//!
//! The nonnegative right-hand side makes the all-slack basis feasible, so no
//! phase-one is needed. Pivoting follows Bland's rule (smallest-index entering
//! column, smallest-index basic variable on ratio ties), which rules out
//! cycling and makes the returned vertex deterministic. Problem sizes in this
//! crate stay around a few hundred rows, so a dense tableau is the simplest
//! adequate representation.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Pivot tolerance: entries below this are treated as zero.
pub const PIVOT_TOL: f64 = 1e-9;

/// Solution of a small LP: the optimal vertex and its objective value.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub pivots: usize,
}

/// Maximizes `c'x` over `{x >= 0 : constraints * x <= rhs}`; `rhs >= 0`.
pub fn maximize(c: &[f64], constraints: &Matrix, rhs: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let m = constraints.rows();
    assert_eq!(constraints.cols(), n, "constraint matrix shape");
    assert_eq!(rhs.len(), m, "rhs length");
    debug_assert!(rhs.iter().all(|&v| v >= 0.0), "rhs must be nonnegative");

    let total = n + m; // structural + slack variables
    let width = total + 1; // + rhs column
    let mut tab = vec![0.0f64; m * width];
    for i in 0..m {
        let row = &mut tab[i * width..(i + 1) * width];
        row[..n].copy_from_slice(constraints.row(i));
        row[n + i] = 1.0;
        row[total] = rhs[i];
    }
    // Reduced-cost row; slack basis has zero objective coefficients.
    let mut reduced: Vec<f64> = c.to_vec();
    reduced.resize(total, 0.0);
    let mut obj_value = 0.0f64;
    let mut basis: Vec<usize> = (n..total).collect();

    let cap = 50 * (m + n).max(100);
    for pivots in 0..=cap {
        // Bland: smallest-index column with positive reduced cost.
        let entering = (0..total).find(|&j| reduced[j] > PIVOT_TOL);
        let Some(col) = entering else {
            return Ok(LpSolution { x: extract(&tab, &basis, n, width), value: obj_value, pivots });
        };
        if pivots == cap {
            return Err(Error::LpIterationCap {
                iterations: cap,
                best_value: obj_value,
                incumbent: extract(&tab, &basis, n, width),
            });
        }

        // Ratio test; ties broken by the smallest basic-variable index.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tab[i * width + col];
            if a > PIVOT_TOL {
                let ratio = tab[i * width + total] / a;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((best_i, best_r)) => {
                        if ratio < best_r - PIVOT_TOL
                            || (ratio < best_r + PIVOT_TOL && basis[i] < basis[best_i])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::LpUnbounded { column: col });
        };

        // Pivot on (row, col).
        let p = tab[row * width + col];
        for j in 0..width {
            tab[row * width + j] /= p;
        }
        for i in 0..m {
            if i != row {
                let f = tab[i * width + col];
                if f != 0.0 {
                    for j in 0..width {
                        tab[i * width + j] -= f * tab[row * width + j];
                    }
                }
            }
        }
        let f = reduced[col];
        for j in 0..total {
            reduced[j] -= f * tab[row * width + j];
        }
        obj_value += f * tab[row * width + total];
        basis[row] = col;
    }
    unreachable!("loop returns or errors at the cap");
}

fn extract(tab: &[f64], basis: &[usize], n: usize, width: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            // Clamp pivot dust; structural variables are nonnegative by model.
            x[var] = tab[i * width + width - 1].max(0.0);
        }
    }
    x
}
