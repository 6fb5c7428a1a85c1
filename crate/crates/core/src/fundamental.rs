//! Canonical fundamental system `y_0, …, y_{n₀-1}` of
//!
//! ```text
//! ᶜD^{α₀} y = - Σ_{i=1}^m a_i(t) ᶜD^{α_i} y,   D^k y_j(0) = δ_{jk}
//! ```
//!
//! Each element is written `y_j = Φ_{j+1} + I^{α₀} w_j`, where the density
//! solves `w = -g_j - K w` with `K = Σ_i a_i I^{α₀-α_i}` and seed
//! `g_j = Σ_{i=h_j}^m a_i Φ_{j+1-α_i}`. The density is accumulated as the
//! Neumann series `Σ_k (-K)^k (-g_j)`, truncated by a [`TruncationPolicy`].
//! When `H_j` is empty the seed vanishes and `y_j = Φ_{j+1}` exactly.

use rayon::prelude::*;

use crate::coeff::CoefficientSpec;
use crate::error::{Error, Result};
use crate::fracops::QuadratureWeights;
use crate::grid::{sample, Grid, GridFn};
use crate::order::{classify, OrderPattern, OrderSpec};
use crate::special::{phi, PowerOrder};

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    orders: OrderSpec,
    coefficients: Vec<CoefficientSpec>,
    t_end: f64,
    initial_values: Option<Vec<f64>>,
}

impl Problem {
    pub fn new(
        orders: OrderSpec,
        coefficients: Vec<CoefficientSpec>,
        t_end: f64,
        initial_values: Option<Vec<f64>>,
    ) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::Validation(format!(
                "T must be positive, got {t_end}"
            )));
        }
        let m = orders.m();
        if coefficients.len() != m {
            return Err(Error::Validation(format!(
                "expected {m} coefficient{}, got {}",
                if m == 1 { "" } else { "s" },
                coefficients.len()
            )));
        }
        for (i, c) in coefficients.iter().enumerate() {
            c.validate()
                .map_err(|e| Error::Validation(format!("coefficient {}: {e}", i + 1)))?;
            c.check_coverage(t_end)
                .map_err(|e| Error::Validation(format!("coefficient {}: {e}", i + 1)))?;
        }
        if let Some(b) = &initial_values {
            let n0 = orders.n0();
            if b.len() != n0 {
                return Err(Error::Validation(format!(
                    "expected {n0} initial value{}, got {}",
                    if n0 == 1 { "" } else { "s" },
                    b.len()
                )));
            }
            if b.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation("initial values must be finite".into()));
            }
        }
        Ok(Problem {
            orders,
            coefficients,
            t_end,
            initial_values,
        })
    }

    pub fn orders(&self) -> &OrderSpec {
        &self.orders
    }

    pub fn coefficients(&self) -> &[CoefficientSpec] {
        &self.coefficients
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn initial_values(&self) -> Option<&[f64]> {
        self.initial_values.as_deref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tol_abs: 1e-12,
            tol_rel: 1e-12,
            max_terms: 200,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tol_abs: f64, tol_rel: f64, max_terms: usize) -> Result<Self> {
        if !(tol_abs > 0.0) || !(tol_rel >= 0.0) || max_terms == 0 {
            return Err(Error::Validation(format!(
                "invalid truncation policy (tol_abs {tol_abs}, tol_rel {tol_rel}, max_terms {max_terms})"
            )));
        }
        Ok(TruncationPolicy {
            tol_abs,
            tol_rel,
            max_terms,
        })
    }

    /// Stopping threshold for an increment, given the current density norm.
    pub fn threshold(&self, density_norm: f64) -> f64 {
        self.tol_abs + self.tol_rel * density_norm
    }
}

/// One element `y_j` of the canonical fundamental system.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalElement {
    pub j: usize,
    pub y: GridFn,
    /// Density with `y = Φ_{j+1} + I^{α₀} w`.
    pub w: GridFn,
    pub terms_used: usize,
    pub last_term_norm: f64,
    pub converged: bool,
    /// Sup norm of every accumulated series term, in order.
    pub increment_norms: Vec<f64>,
}

/// A problem bound to a grid: sampled coefficients and cached weights.
#[derive(Debug, Clone)]
pub struct Discretization {
    problem: Problem,
    pattern: OrderPattern,
    grid: Grid,
    coeffs: Vec<GridFn>,
    // I^{α₀-α_i}, i = 1..=m
    k_weights: Vec<QuadratureWeights>,
    // I^{α₀}
    lead_weights: QuadratureWeights,
}

impl Discretization {
    pub fn new(problem: &Problem, grid: &Grid) -> Result<Self> {
        if grid.t_end() != problem.t_end() {
            return Err(Error::Validation(format!(
                "grid ends at {} but the problem horizon is {}",
                grid.t_end(),
                problem.t_end()
            )));
        }
        let orders = problem.orders();
        let coeffs = problem
            .coefficients()
            .iter()
            .map(|c| sample(c, grid))
            .collect::<Result<Vec<_>>>()?;
        let k_weights = (1..=orders.m())
            .map(|i| QuadratureWeights::new(orders.leading() - orders.alpha(i), grid))
            .collect::<Result<Vec<_>>>()?;
        let lead_weights = QuadratureWeights::new(orders.leading(), grid)?;
        Ok(Discretization {
            problem: problem.clone(),
            pattern: classify(orders),
            grid: *grid,
            coeffs,
            k_weights,
            lead_weights,
        })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn pattern(&self) -> &OrderPattern {
        &self.pattern
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Sampled `a_i`, `i = 1..=m` (index 0 holds `a_1`).
    pub fn coefficient_samples(&self) -> &[GridFn] {
        &self.coeffs
    }

    /// Weights of `I^{α₀-α_i}`, `i = 1..=m` (index 0 holds `i = 1`).
    pub fn kernel_weights(&self) -> &[QuadratureWeights] {
        &self.k_weights
    }

    pub fn leading_weights(&self) -> &QuadratureWeights {
        &self.lead_weights
    }

    fn check_index(&self, j: usize) -> Result<()> {
        let n0 = self.pattern.n0();
        if j < n0 {
            Ok(())
        } else {
            Err(Error::Range {
                index: j,
                bound: n0,
            })
        }
    }

    fn power_sum(&self, j: usize, first: usize) -> Result<GridFn> {
        let orders = self.problem.orders();
        let mut g = GridFn::zeros(self.grid);
        for i in first..=orders.m() {
            let mu = PowerOrder::new((j + 1) as f64 - orders.alpha(i))?;
            let kernel = self.grid.map(|t| phi(mu, t).expect("mu >= 1 for i >= h_j"));
            let a = &self.coeffs[i - 1];
            let term: Vec<f64> = a
                .values()
                .iter()
                .zip(kernel.values())
                .map(|(x, y)| x * y)
                .collect();
            g.axpy_in_place(1.0, &GridFn::from_values_unchecked(self.grid, term));
        }
        Ok(g)
    }

    /// `g_j = Σ_{i=h_j}^m a_i Φ_{j+1-α_i}`, or `None` when `H_j` is empty.
    pub fn seed(&self, j: usize) -> Result<Option<GridFn>> {
        self.check_index(j)?;
        match self.pattern.h(j) {
            None => Ok(None),
            Some(h) => self.power_sum(j, h).map(Some),
        }
    }

    /// `Σ_{i=1}^m a_i Φ_{j+1-α_i}`, only meaningful for `j ≥ n₁`, where every
    /// `α_i ≤ j`. Coincides with [`seed`](Self::seed) there.
    pub fn seed_all_terms(&self, j: usize) -> Result<GridFn> {
        self.check_index(j)?;
        if j < self.pattern.n[1] {
            return Err(Error::Domain(format!(
                "full-sum seed needs j >= n1 = {}, got {j}",
                self.pattern.n[1]
            )));
        }
        self.power_sum(j, 1)
    }

    /// `K w = Σ_{i=1}^m a_i · I^{α₀-α_i} w`.
    pub fn apply_k(&self, w: &GridFn) -> Result<GridFn> {
        if *w.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = vec![0.0; self.grid.len()];
        for (a, weights) in self.coeffs.iter().zip(&self.k_weights) {
            if a.values().iter().all(|&x| x == 0.0) {
                continue;
            }
            let iw = weights.apply(w)?;
            for ((o, av), iv) in out.iter_mut().zip(a.values()).zip(iw.values()) {
                *o += av * iv;
            }
        }
        Ok(GridFn::from_values_unchecked(self.grid, out))
    }

    /// `I^{α₀} w`.
    pub fn lead_integral(&self, w: &GridFn) -> Result<GridFn> {
        self.lead_weights.apply(w)
    }

    pub fn build_element(&self, j: usize, policy: &TruncationPolicy) -> Result<CanonicalElement> {
        let mu = PowerOrder::new((j + 1) as f64)?;
        let base = self.grid.map(|t| phi(mu, t).expect("integer order >= 1"));
        let Some(g) = self.seed(j)? else {
            return Ok(CanonicalElement {
                j,
                y: base,
                w: GridFn::zeros(self.grid),
                terms_used: 0,
                last_term_norm: 0.0,
                converged: true,
                increment_norms: Vec::new(),
            });
        };

        let mut increment =
            GridFn::from_values_unchecked(self.grid, g.values().iter().map(|v| -v).collect());
        let mut w = increment.clone();
        let mut norms = vec![increment.sup_norm()];
        let mut converged = norms[0] <= policy.threshold(w.sup_norm());
        while !converged && norms.len() < policy.max_terms {
            let next = self.apply_k(&increment)?;
            increment = GridFn::from_values_unchecked(
                self.grid,
                next.into_values().into_iter().map(|v| -v).collect(),
            );
            w.axpy_in_place(1.0, &increment);
            let norm = increment.sup_norm();
            norms.push(norm);
            converged = norm <= policy.threshold(w.sup_norm());
        }

        let correction = self.lead_integral(&w)?;
        let mut y = base;
        y.axpy_in_place(1.0, &correction);
        Ok(CanonicalElement {
            j,
            y,
            w,
            terms_used: norms.len(),
            last_term_norm: *norms.last().expect("at least one term"),
            converged,
            increment_norms: norms,
        })
    }

    /// Elements `j = 0..n₀`, built in parallel.
    pub fn build_system(&self, policy: &TruncationPolicy) -> Result<Vec<CanonicalElement>> {
        (0..self.pattern.n0())
            .into_par_iter()
            .map(|j| self.build_element(j, policy))
            .collect()
    }
}

/// Seed of element `j`; see [`Discretization::seed`].
pub fn seed_function(
    problem: &Problem,
    pattern: &OrderPattern,
    j: usize,
    grid: &Grid,
) -> Result<Option<GridFn>> {
    let disc = Discretization::new(problem, grid)?;
    debug_assert_eq!(disc.pattern(), pattern);
    disc.seed(j)
}

/// `K w` on the grid of `w`.
pub fn apply_k(problem: &Problem, w: &GridFn) -> Result<GridFn> {
    Discretization::new(problem, w.grid())?.apply_k(w)
}

pub fn build_canonical_element(
    problem: &Problem,
    pattern: &OrderPattern,
    j: usize,
    grid: &Grid,
    policy: &TruncationPolicy,
) -> Result<CanonicalElement> {
    let disc = Discretization::new(problem, grid)?;
    debug_assert_eq!(disc.pattern(), pattern);
    disc.build_element(j, policy)
}

pub fn build_canonical_system(
    problem: &Problem,
    pattern: &OrderPattern,
    grid: &Grid,
    policy: &TruncationPolicy,
) -> Result<Vec<CanonicalElement>> {
    let disc = Discretization::new(problem, grid)?;
    debug_assert_eq!(disc.pattern(), pattern);
    disc.build_system(policy)
}

/// `y = Σ_j b_j y_j`.
pub fn assemble_ivp_solution(system: &[CanonicalElement], b: &[f64]) -> Result<GridFn> {
    if system.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: system.len(),
            got: b.len(),
        });
    }
    let Some(first) = system.first() else {
        return Err(Error::Validation("empty fundamental system".into()));
    };
    let grid = *first.y.grid();
    let mut y = GridFn::zeros(grid);
    for (e, &bj) in system.iter().zip(b) {
        if *e.y.grid() != grid {
            return Err(Error::GridMismatch);
        }
        y.axpy_in_place(bj, &e.y);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::order::EqType;

    fn problem(alphas: &[f64], coeffs: Vec<CoefficientSpec>, t_end: f64) -> Problem {
        Problem::new(
            OrderSpec::new(alphas.to_vec()).unwrap(),
            coeffs,
            t_end,
            None,
        )
        .unwrap()
    }

    #[test]
    fn problem_validation() {
        let orders = OrderSpec::new(vec![2.0, 0.0]).unwrap();
        let two = vec![
            CoefficientSpec::Constant(1.0),
            CoefficientSpec::Constant(1.0),
        ];
        let err = Problem::new(orders.clone(), two, 1.0, None).unwrap_err();
        assert_eq!(err.to_string(), "expected 1 coefficient, got 2");
        let one = vec![CoefficientSpec::Constant(1.0)];
        assert!(Problem::new(orders.clone(), one.clone(), 1.0, Some(vec![1.0])).is_err());
        assert!(Problem::new(orders.clone(), one.clone(), 0.0, None).is_err());
        let table = vec![CoefficientSpec::Table(vec![(0.0, 1.0), (0.5, 1.0)])];
        assert!(Problem::new(orders.clone(), table, 1.0, None).is_err());
        assert!(Problem::new(orders, one, 1.0, Some(vec![1.0, 0.0])).is_ok());
    }

    #[test]
    fn type_three_seed_is_empty() {
        let p = problem(
            &[1.7, 1.3],
            vec![CoefficientSpec::Poly(vec![1.0, 1.0])],
            1.0,
        );
        let g = make_grid(1.0, 8).unwrap();
        let disc = Discretization::new(&p, &g).unwrap();
        assert_eq!(disc.pattern().eq_type, EqType::TypeIII);
        assert!(disc.seed(0).unwrap().is_none());
        assert!(disc.seed(1).unwrap().is_none());
        assert!(disc.seed(2).is_err());
    }

    #[test]
    fn seeds_for_simple_problems() {
        let g = make_grid(1.0, 8).unwrap();
        let p = problem(&[2.0, 0.0], vec![CoefficientSpec::Constant(1.0)], 1.0);
        let disc = Discretization::new(&p, &g).unwrap();
        assert_eq!(disc.seed(0).unwrap().unwrap(), GridFn::constant(g, 1.0));

        let lambda = 0.37;
        let p = problem(&[0.5, 0.0], vec![CoefficientSpec::Constant(lambda)], 1.0);
        let disc = Discretization::new(&p, &g).unwrap();
        assert_eq!(disc.seed(0).unwrap().unwrap(), GridFn::constant(g, lambda));
    }

    #[test]
    fn apply_k_examples() {
        let g = make_grid(1.0, 16).unwrap();
        let p = problem(&[2.0, 0.0], vec![CoefficientSpec::Constant(1.0)], 1.0);
        let disc = Discretization::new(&p, &g).unwrap();
        assert_eq!(disc.apply_k(&GridFn::zeros(g)).unwrap(), GridFn::zeros(g));
        let out = disc.apply_k(&GridFn::constant(g, 1.0)).unwrap();
        for (k, t) in g.nodes().enumerate() {
            assert!((out.values()[k] - t * t / 2.0).abs() <= 1e-12 * (t * t / 2.0).max(1e-300));
        }
        let other = GridFn::zeros(make_grid(1.0, 4).unwrap());
        assert_eq!(disc.apply_k(&other), Err(Error::GridMismatch));
    }

    #[test]
    fn type_three_elements_are_monomials() {
        let p = problem(
            &[1.7, 1.3],
            vec![CoefficientSpec::Poly(vec![1.0, 1.0])],
            1.0,
        );
        let g = make_grid(1.0, 10).unwrap();
        let sys = Discretization::new(&p, &g)
            .unwrap()
            .build_system(&Default::default())
            .unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[0].y, GridFn::constant(g, 1.0));
        assert_eq!(sys[1].y, g.map(|t| t));
        for e in &sys {
            assert!(e.w.values().iter().all(|&v| v == 0.0));
            assert_eq!(e.terms_used, 0);
            assert!(e.converged);
        }
    }

    #[test]
    fn single_element_when_n0_is_one() {
        let p = problem(&[0.5, 0.0], vec![CoefficientSpec::Constant(1.0)], 1.0);
        let g = make_grid(1.0, 32).unwrap();
        let sys = Discretization::new(&p, &g)
            .unwrap()
            .build_system(&Default::default())
            .unwrap();
        assert_eq!(sys.len(), 1);
        assert_eq!(sys[0].y.values()[0], 1.0);
    }

    #[test]
    fn zero_coefficients_give_zero_density() {
        let p = problem(&[1.5, 0.0], vec![CoefficientSpec::Constant(0.0)], 1.0);
        let g = make_grid(1.0, 16).unwrap();
        let e = Discretization::new(&p, &g)
            .unwrap()
            .build_element(0, &Default::default())
            .unwrap();
        assert!(e.converged);
        assert_eq!(e.terms_used, 1);
        assert_eq!(e.w, GridFn::zeros(g));
        assert_eq!(e.y, GridFn::constant(g, 1.0));
    }

    #[test]
    fn max_terms_cap_reports_non_convergence() {
        let p = problem(&[2.0, 0.0], vec![CoefficientSpec::Constant(1.0)], 6.0);
        let g = make_grid(6.0, 64).unwrap();
        let policy = TruncationPolicy::new(1e-12, 0.0, 3).unwrap();
        let e = Discretization::new(&p, &g)
            .unwrap()
            .build_element(0, &policy)
            .unwrap();
        assert!(!e.converged);
        assert_eq!(e.terms_used, 3);
        assert_eq!(e.increment_norms.len(), 3);
    }

    #[test]
    fn assembly_checks_lengths() {
        let p = problem(&[2.0, 0.0], vec![CoefficientSpec::Constant(1.0)], 1.0);
        let g = make_grid(1.0, 16).unwrap();
        let sys = Discretization::new(&p, &g)
            .unwrap()
            .build_system(&Default::default())
            .unwrap();
        assert!(matches!(
            assemble_ivp_solution(&sys, &[1.0]),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 1
            })
        ));
        assert_eq!(assemble_ivp_solution(&sys, &[0.0, 1.0]).unwrap(), sys[1].y);
        assert_eq!(
            assemble_ivp_solution(&sys, &[0.0, 0.0]).unwrap(),
            GridFn::zeros(g)
        );
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(0.0, 1e-12, 10).is_err());
        assert!(TruncationPolicy::new(1e-12, -1.0, 10).is_err());
        assert!(TruncationPolicy::new(1e-12, 0.0, 0).is_err());
        assert_eq!(TruncationPolicy::default().max_terms, 200);
    }
}
