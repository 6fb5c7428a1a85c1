//! Canonical fundamental systems of multi-term linear homogeneous Caputo
//! fractional differential equations with variable coefficients,
//!
//! ```text
//! ᶜD^{α₀} y(t) = - Σ_{i=1}^m a_i(t) ᶜD^{α_i} y(t),   0 < t < T,
//! ```
//!
//! computed as truncated Neumann series of Riemann-Liouville integral
//! operators on a uniform grid.
//!
//! ```
//! use canonfs::{CoefficientSpec, Discretization, OrderSpec, Problem, TruncationPolicy};
//!
//! // y'' + y = 0 on [0, 1]
//! let orders = OrderSpec::new(vec![2.0, 0.0]).unwrap();
//! let problem = Problem::new(orders, vec![CoefficientSpec::Constant(1.0)], 1.0, None).unwrap();
//! let grid = canonfs::make_grid(1.0, 256).unwrap();
//! let system = Discretization::new(&problem, &grid)
//!     .unwrap()
//!     .build_system(&TruncationPolicy::default())
//!     .unwrap();
//! let cos1 = system[0].y.values()[256];
//! assert!((cos1 - 1f64.cos()).abs() < 1e-5);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep all published digits.
#![allow(clippy::excessive_precision)]

pub mod coeff;
pub mod error;
pub mod fracops;
pub mod fundamental;
pub mod grid;
pub mod oracle;
pub mod order;
pub mod special;

pub use coeff::CoefficientSpec;
pub use error::{Error, Result};
pub use fracops::{
    caputo_derivative_power, riemann_liouville_integral, rl_integral_power, PowerDerivative,
    QuadratureWeights,
};
pub use fundamental::{
    apply_k, assemble_ivp_solution, build_canonical_element, build_canonical_system, seed_function,
    CanonicalElement, Discretization, Problem, TruncationPolicy,
};
pub use grid::{combine, make_grid, pointwise_mul, sample, sup_norm, Grid, GridFn};
pub use oracle::{
    closed_form_reference, compare, fixed_point_defect, fixed_point_residual,
    volterra_collocation_solve, ComparisonReport, ReferenceCase,
};
pub use order::{ceil_order, classify, index_set_h, EqType, OrderPattern, OrderSpec};
pub use special::{gamma, ln_gamma, mittag_leffler, phi, PowerOrder};
