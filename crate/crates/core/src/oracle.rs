//! Independent checks on computed densities and solutions.

use crate::error::{Error, Result};
use crate::fundamental::Discretization;
use crate::grid::{combine, Grid, GridFn};
use crate::special::mittag_leffler;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub sup_error: f64,
    pub node_errors: GridFn,
    pub method_a: String,
    pub method_b: String,
}

/// Nodewise `|a - b|` between two grid functions.
pub fn compare(a: &GridFn, method_a: &str, b: &GridFn, method_b: &str) -> Result<ComparisonReport> {
    let diff = combine(1.0, a, -1.0, b)?;
    let values = diff.values().iter().map(|v| v.abs()).collect();
    let node_errors = GridFn::new(*a.grid(), values)?;
    Ok(ComparisonReport {
        sup_error: node_errors.sup_norm(),
        node_errors,
        method_a: method_a.to_string(),
        method_b: method_b.to_string(),
    })
}

/// Nodewise `w + g_j + K w`; with an empty seed this is `w` itself.
pub fn fixed_point_defect(disc: &Discretization, j: usize, w: &GridFn) -> Result<GridFn> {
    let Some(g) = disc.seed(j)? else {
        if *w.grid() != *disc.grid() {
            return Err(Error::GridMismatch);
        }
        return Ok(w.clone());
    };
    let kw = disc.apply_k(w)?;
    combine(1.0, &combine(1.0, w, 1.0, &g)?, 1.0, &kw)
}

/// `sup |w + g_j + K w|`.
pub fn fixed_point_residual(disc: &Discretization, j: usize, w: &GridFn) -> Result<f64> {
    Ok(fixed_point_defect(disc, j, w)?.sup_norm())
}

/// Direct forward-stepping solve of `w + K w = -g_j` on the grid.
///
/// The product rule couples `w(t_n)` to node `n` only through the diagonal
/// weight, so each step is a scalar equation. An empty seed is solved as a
/// zero right-hand side, which returns `w ≡ 0`.
pub fn volterra_collocation_solve(disc: &Discretization, j: usize) -> Result<GridFn> {
    let grid = *disc.grid();
    let rhs: Vec<f64> = match disc.seed(j)? {
        Some(g) => g.values().iter().map(|v| -v).collect(),
        None => vec![0.0; grid.len()],
    };
    let coeffs = disc.coefficient_samples();
    let weights = disc.kernel_weights();
    let mut w = vec![0.0; grid.len()];
    // every I^β vanishes at t_0
    w[0] = rhs[0];
    for n in 1..grid.len() {
        let mut history = 0.0;
        let mut diag = 1.0;
        for (a, q) in coeffs.iter().zip(weights) {
            let an = a.values()[n];
            if an == 0.0 {
                continue;
            }
            history += an * q.history(&w, n);
            diag += an * q.diagonal();
        }
        if diag == 0.0 || !diag.is_finite() {
            return Err(Error::SingularStep { node: n });
        }
        w[n] = (rhs[n] - history) / diag;
    }
    GridFn::new(grid, w)
}

/// Closed-form solutions used as references.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceCase {
    /// `E_α(-λ t^α)`, the solution of `ᶜD^α y + λ y = 0`, `y(0) = 1`, `0 < α ≤ 1`.
    MittagLeffler { alpha: f64, lambda: f64 },
    /// `cos t`, for `y'' + y = 0`, `y(0) = 1`, `y'(0) = 0`.
    Cos,
    /// `sin t`, for `y'' + y = 0`, `y(0) = 0`, `y'(0) = 1`.
    Sin,
    /// `exp(-∫₀ᵗ a)` for polynomial `a` (low-to-high), the solution of `y' + a y = 0`.
    ExpIntegral { coeffs: Vec<f64> },
}

impl ReferenceCase {
    /// Builds a case from its id (`ML`, `COS`, `SIN`, `EXP_INT`) and numeric parameters.
    pub fn from_id(id: &str, params: &[f64]) -> Result<Self> {
        let want = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::LengthMismatch {
                    expected: n,
                    got: params.len(),
                })
            }
        };
        match id {
            "ML" => {
                want(2)?;
                Ok(ReferenceCase::MittagLeffler {
                    alpha: params[0],
                    lambda: params[1],
                })
            }
            "COS" => want(0).map(|_| ReferenceCase::Cos),
            "SIN" => want(0).map(|_| ReferenceCase::Sin),
            "EXP_INT" if !params.is_empty() => Ok(ReferenceCase::ExpIntegral {
                coeffs: params.to_vec(),
            }),
            "EXP_INT" => Err(Error::Validation(
                "EXP_INT needs polynomial coefficients".into(),
            )),
            other => Err(Error::UnknownCase(other.to_string())),
        }
    }
}

pub fn closed_form_reference(case: &ReferenceCase, grid: &Grid) -> Result<GridFn> {
    let values: Vec<f64> = match case {
        ReferenceCase::MittagLeffler { alpha, lambda } => {
            if !(*alpha > 0.0 && *alpha <= 1.0) {
                return Err(Error::Domain(format!(
                    "ML reference needs 0 < alpha <= 1, got {alpha}"
                )));
            }
            grid.nodes()
                .map(|t| mittag_leffler(*alpha, 1.0, -lambda * t.powf(*alpha)))
                .collect::<Result<_>>()?
        }
        ReferenceCase::Cos => grid.nodes().map(f64::cos).collect(),
        ReferenceCase::Sin => grid.nodes().map(f64::sin).collect(),
        ReferenceCase::ExpIntegral { coeffs } => grid
            .nodes()
            .map(|t| {
                // ∫₀ᵗ Σ c_k s^k ds = Σ c_k t^{k+1}/(k+1), by Horner in t
                let integral = coeffs
                    .iter()
                    .enumerate()
                    .rev()
                    .fold(0.0, |acc, (k, c)| acc * t + c / (k + 1) as f64)
                    * t;
                (-integral).exp()
            })
            .collect(),
    };
    GridFn::new(*grid, values)
}
