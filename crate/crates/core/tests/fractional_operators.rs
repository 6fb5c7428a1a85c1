use canonfs::{
    caputo_derivative_power, gamma, make_grid, phi, riemann_liouville_integral, rl_integral_power,
    GridFn, PowerDerivative, PowerOrder, QuadratureWeights,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn po(mu: f64) -> PowerOrder {
    PowerOrder::new(mu).unwrap()
}

/// Analytic `I^α (c0 + c1 t) = c0 Φ_{1+α} + c1 Φ_{2+α}` via the power-kernel calculus.
fn affine_reference(alpha: f64, c0: f64, c1: f64, t: f64) -> f64 {
    let mu0 = rl_integral_power(alpha, po(1.0)).unwrap();
    let mu1 = rl_integral_power(alpha, po(2.0)).unwrap();
    c0 * phi(mu0, t).unwrap() + c1 * phi(mu1, t).unwrap()
}

#[test]
fn exact_on_affine_samples() {
    for &alpha in &[0.3, 0.5, 1.0, 1.5, 2.0] {
        for &(c0, c1) in &[(1.0, 0.0), (0.0, 1.0), (2.5, -1.25), (-0.75, 3.0)] {
            let g = make_grid(1.7, 64).unwrap();
            let f = g.map(|t| c0 + c1 * t);
            let out = riemann_liouville_integral(alpha, &f).unwrap();
            assert_eq!(out.values()[0], 0.0);
            for (k, t) in g.nodes().enumerate().skip(1) {
                let exact = affine_reference(alpha, c0, c1, t);
                let err = (out.values()[k] - exact).abs();
                assert!(
                    err <= 1e-12 * exact.abs(),
                    "alpha {alpha} ({c0},{c1}) node {k}: err {err}"
                );
            }
        }
    }
}

#[test]
fn semigroup_convergence_order_at_final_node() {
    for &mu in &[1.5, 2.5, 3.0] {
        for &alpha in &[0.3, 0.5, 1.5] {
            let exact = phi(rl_integral_power(alpha, po(mu)).unwrap(), 1.0).unwrap();
            let errors: Vec<f64> = [128, 256, 512, 1024]
                .iter()
                .map(|&n| {
                    let g = make_grid(1.0, n).unwrap();
                    let f = g.map(|t| phi(po(mu), t).unwrap());
                    let out = riemann_liouville_integral(alpha, &f).unwrap();
                    (out.values()[n] - exact).abs()
                })
                .collect();
            for pair in errors.windows(2) {
                let order = (pair[0] / pair[1]).log2();
                assert!(order >= 1.0, "mu {mu} alpha {alpha}: errors {errors:?}");
            }
        }
    }
}

#[test]
fn caputo_of_power_matches_brute_force_definition() {
    // ᶜD^α Φ_{j+1} = I^{n-α} D^n Φ_{j+1}, with D^n Φ_{j+1} = Φ_{j+1-n} (or 0)
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n_grid = 2048;
    let g = make_grid(1.0, n_grid).unwrap();
    for _ in 0..40 {
        let alpha: f64 = rng.gen_range(0.05..4.0);
        let j: usize = rng.gen_range(0..6);
        let n = alpha.ceil() as usize;
        let derivative = if j >= n {
            g.map(|t| phi(po((j + 1 - n) as f64), t).unwrap())
        } else {
            GridFn::zeros(g)
        };
        let brute = if (n as f64 - alpha) > 0.0 {
            riemann_liouville_integral(n as f64 - alpha, &derivative).unwrap()
        } else {
            derivative
        };
        let analytic = match caputo_derivative_power(alpha, j).unwrap() {
            PowerDerivative::Zero => GridFn::zeros(g),
            PowerDerivative::Power(mu) => {
                assert!(mu.value() >= 1.0);
                g.map(|t| phi(mu, t).unwrap())
            }
        };
        for (a, b) in brute.values().iter().zip(analytic.values()) {
            assert!((a - b).abs() <= 1e-5, "alpha {alpha} j {j}: {a} vs {b}");
        }
    }
}

#[test]
fn caputo_one_point_two_of_half_t_squared() {
    let g = make_grid(1.0, 1024).unwrap();
    // D^2 (t^2/2) = 1, then I^{0.8}
    let brute = riemann_liouville_integral(0.8, &GridFn::constant(g, 1.0)).unwrap();
    match caputo_derivative_power(1.2, 2).unwrap() {
        PowerDerivative::Power(mu) => {
            for (k, t) in g.nodes().enumerate() {
                let exact = phi(mu, t).unwrap();
                assert!((brute.values()[k] - exact).abs() <= 1e-12);
                assert!((exact - t.powf(0.8) / gamma(1.8).unwrap()).abs() <= 1e-15);
            }
        }
        PowerDerivative::Zero => panic!("expected a power kernel"),
    }
}

fn values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, n)
}

proptest! {
    #[test]
    fn discrete_operator_is_linear(a in values(33), b in values(33), s in -3.0..3.0f64, alpha in 0.1..3.0f64) {
        let g = make_grid(2.0, 32).unwrap();
        let w = QuadratureWeights::new(alpha, &g).unwrap();
        let fa = GridFn::new(g, a).unwrap();
        let fb = GridFn::new(g, b).unwrap();
        let combined = canonfs::combine(s, &fa, 1.0, &fb).unwrap();
        let lhs = w.apply(&combined).unwrap();
        let rhs = canonfs::combine(s, &w.apply(&fa).unwrap(), 1.0, &w.apply(&fb).unwrap()).unwrap();
        let scale = w.apply(&GridFn::constant(g, 40.0)).unwrap().sup_norm().max(1.0);
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((x - y).abs() <= 1e-13 * scale);
        }
    }
}
