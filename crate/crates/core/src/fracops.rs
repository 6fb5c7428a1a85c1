//! Riemann-Liouville fractional integration on uniform grids, plus the exact
//! calculus of power kernels.
//!
//! The discrete operator is the product-trapezoidal rule: `f` is replaced by
//! its piecewise-linear interpolant and integrated exactly against the kernel
//! `(t_n - s)^{α-1} / Γ(α)`. On a uniform grid
//!
//! ```text
//! (I^α f)(t_n) ≈ h^α / Γ(α+2) · ( e_n f_0 + Σ_{j=1}^{n-1} b_{n-j} f_j + f_n )
//! ```
//!
//! with `b_k = (k+1)^{α+1} - 2k^{α+1} + (k-1)^{α+1}` and
//! `e_n = (n-1)^{α+1} - (n-1-α) n^α`. Both are evaluated through binomial
//! series once `k`, `n` are large enough for the direct differences to cancel.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFn};
use crate::order::ceil_order;
use crate::special::{gamma, PowerOrder};

/// Below this index the closed-form differences are used directly.
const SERIES_THRESHOLD: usize = 4;

/// Product-trapezoidal weights of `I^α` for one grid, in convolution form.
#[derive(Debug, Clone)]
pub struct QuadratureWeights {
    alpha: f64,
    grid: Grid,
    scale: f64,
    // boundary[n] = e_n for n >= 1; boundary[0] unused
    boundary: Vec<f64>,
    // interior[k] = b_k for k >= 1; interior[0] unused
    interior: Vec<f64>,
}

impl QuadratureWeights {
    pub fn new(alpha: f64, grid: &Grid) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "fractional integral order must be positive, got {alpha}"
            )));
        }
        let n = grid.n_intervals();
        let p = alpha + 1.0;
        let mut boundary = vec![0.0; n + 1];
        let mut interior = vec![0.0; n + 1];
        for k in 1..=n {
            boundary[k] = boundary_weight(alpha, k);
            interior[k] = second_difference(p, k);
        }
        let scale = grid.step().powf(alpha) / gamma(alpha + 2.0)?;
        Ok(QuadratureWeights {
            alpha,
            grid: *grid,
            scale,
            boundary,
            interior,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Weight `w[n][j]` multiplying `f(t_j)` in `(I^α f)(t_n)`.
    pub fn weight(&self, n: usize, j: usize) -> f64 {
        assert!(
            j <= n && n <= self.grid.n_intervals(),
            "weight index ({n}, {j}) out of range"
        );
        if n == 0 {
            0.0
        } else if j == n {
            self.scale
        } else if j == 0 {
            self.scale * self.boundary[n]
        } else {
            self.scale * self.interior[n - j]
        }
    }

    /// Diagonal weight `w[n][n]`, equal to `h^α/Γ(α+2)` for every `n ≥ 1`.
    pub fn diagonal(&self) -> f64 {
        self.scale
    }

    /// `(I^α f)(t_n)` without the `f(t_n)` contribution.
    pub fn history(&self, values: &[f64], n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let tail: f64 = values[1..n]
            .iter()
            .zip(self.interior[1..n].iter().rev())
            .map(|(f, b)| f * b)
            .sum();
        self.scale * (self.boundary[n] * values[0] + tail)
    }

    pub fn apply(&self, f: &GridFn) -> Result<GridFn> {
        if *f.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let v = f.values();
        let out = (0..v.len())
            .map(|n| {
                if n == 0 {
                    0.0
                } else {
                    self.history(v, n) + self.scale * v[n]
                }
            })
            .collect();
        Ok(GridFn::from_values_unchecked(self.grid, out))
    }
}

/// `(k+1)^p - 2k^p + (k-1)^p` for `k ≥ 1`.
fn second_difference(p: f64, k: usize) -> f64 {
    let kf = k as f64;
    if k < SERIES_THRESHOLD {
        return (kf + 1.0).powf(p) - 2.0 * kf.powf(p) + (kf - 1.0).powf(p);
    }
    // k^p · [(1+x)^p + (1-x)^p - 2] = 2 k^p Σ_{m≥1} C(p,2m) x^{2m}, x = 1/k
    let x2 = 1.0 / (kf * kf);
    let mut coeff = 1.0; // C(p, 0)
    let mut xpow = 1.0;
    let mut sum = 0.0;
    for m in 1..200 {
        let (a, b) = ((2 * m - 2) as f64, (2 * m - 1) as f64);
        coeff *= (p - a) * (p - b) / ((a + 1.0) * (b + 1.0));
        xpow *= x2;
        let term = coeff * xpow;
        sum += term;
        if term == 0.0 || term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    2.0 * kf.powf(p) * sum
}

/// `(n-1)^{α+1} - (n-1-α) n^α` for `n ≥ 1`.
fn boundary_weight(alpha: f64, n: usize) -> f64 {
    let p = alpha + 1.0;
    let nf = n as f64;
    if n < SERIES_THRESHOLD {
        return (nf - 1.0).powf(p) - (nf - 1.0 - alpha) * nf.powf(alpha);
    }
    // n^p · [(1-x)^p - 1 + p x] = n^p Σ_{m≥2} C(p,m) (-x)^m, x = 1/n
    let x = 1.0 / nf;
    let mut coeff = p; // C(p, 1)
    let mut xpow = -x;
    let mut sum = 0.0;
    for m in 2..400 {
        let mf = m as f64;
        coeff *= (p - mf + 1.0) / mf;
        xpow *= -x;
        let term = coeff * xpow;
        sum += term;
        if term == 0.0 || term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    nf.powf(p) * sum
}

/// Discrete `I^α f` on the grid of `f`.
///
/// Callers short-circuit `α = 0` (`I^0 f = f`); this operation rejects it.
pub fn riemann_liouville_integral(alpha: f64, f: &GridFn) -> Result<GridFn> {
    QuadratureWeights::new(alpha, f.grid())?.apply(f)
}

/// `I^α Φ_μ = Φ_{μ+α}`.
pub fn rl_integral_power(alpha: f64, mu: PowerOrder) -> Result<PowerOrder> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!(
            "integral order must be positive, got {alpha}"
        )));
    }
    PowerOrder::new(mu.value() + alpha)
}

/// Result of applying a Caputo derivative to `Φ_{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerDerivative {
    Zero,
    Power(PowerOrder),
}

/// `ᶜD^α Φ_{j+1}`: zero when `j < ⌈α⌉`, otherwise `Φ_{j+1-α}`; the identity for `α = 0`.
pub fn caputo_derivative_power(alpha: f64, j: usize) -> Result<PowerDerivative> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "derivative order must be nonnegative, got {alpha}"
        )));
    }
    let mu = (j + 1) as f64;
    if alpha == 0.0 {
        return Ok(PowerDerivative::Power(PowerOrder::new(mu)?));
    }
    if (j as u64) < ceil_order(alpha)? {
        Ok(PowerDerivative::Zero)
    } else {
        Ok(PowerDerivative::Power(PowerOrder::new(mu - alpha)?))
    }
}
