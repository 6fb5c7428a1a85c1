//! Order tuples `α₀ > α₁ > … > α_m ≥ 0` and their classification.
//!
//! Orders are compared exactly; an order that is meant to be an integer must
//! be written as one; nothing is snapped to the nearest integer.

use serde::Serialize;

use crate::error::{Error, Result};

/// The unique `n` with `n - 1 < α ≤ n` (so integers map to themselves and `0 ↦ 0`).
pub fn ceil_order(alpha: f64) -> Result<u64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "order must be finite and nonnegative, got {alpha}"
        )));
    }
    Ok(alpha.ceil() as u64)
}

/// Validated order tuple `(α₀, α₁, …, α_m)` with `m ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderSpec {
    alphas: Vec<f64>,
}

impl OrderSpec {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::InvalidOrders(format!(
                "need at least two orders (alpha_0 and one right-hand term), got {}",
                alphas.len()
            )));
        }
        if let Some(k) = alphas.iter().position(|a| !a.is_finite()) {
            return Err(Error::InvalidOrders(format!(
                "order at index {k} is not finite"
            )));
        }
        if let Some(k) = alphas.windows(2).position(|w| !(w[0] > w[1])) {
            return Err(Error::InvalidOrders(format!(
                "orders not strictly decreasing at index {}",
                k + 1
            )));
        }
        let last = alphas[alphas.len() - 1];
        if last < 0.0 {
            return Err(Error::InvalidOrders(format!(
                "lowest order must be >= 0, got {last}"
            )));
        }
        Ok(OrderSpec { alphas })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// `α₀`.
    pub fn leading(&self) -> f64 {
        self.alphas[0]
    }

    /// Number of right-hand terms `m`.
    pub fn m(&self) -> usize {
        self.alphas.len() - 1
    }

    /// `α_i`, `i = 0..=m`.
    pub fn alpha(&self, i: usize) -> f64 {
        self.alphas[i]
    }

    /// `n₀`, also the number of initial conditions.
    pub fn n0(&self) -> usize {
        self.alphas[0].ceil() as usize
    }
}

/// `H_j = { i ∈ 1..=m : α_i ≤ j }` for `0 ≤ j ≤ n₀ - 1`.
pub fn index_set_h(spec: &OrderSpec, j: usize) -> Result<Vec<usize>> {
    let n0 = spec.n0();
    if j >= n0 {
        return Err(Error::Range {
            index: j,
            bound: n0,
        });
    }
    Ok((1..=spec.m())
        .filter(|&i| spec.alpha(i) <= j as f64)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EqType {
    /// `α_m = 0`: every `H_j` is nonempty.
    TypeI,
    /// `0 < α_m ≤ n₀ - 1`: `H_j` empty exactly for `j ≤ j0`.
    TypeII { j0: usize },
    /// `α_m > n₀ - 1`: every `H_j` is empty.
    TypeIII,
}

impl EqType {
    pub fn label(&self) -> &'static str {
        match self {
            EqType::TypeI => "I",
            EqType::TypeII { .. } => "II",
            EqType::TypeIII => "III",
        }
    }

    pub fn j0(&self) -> Option<usize> {
        match self {
            EqType::TypeII { j0 } => Some(*j0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderPattern {
    /// `n_i = ⌈α_i⌉` for `i = 0..=m`.
    pub n: Vec<usize>,
    /// `h_j = min H_j` for `j = 0..n₀`, `None` where `H_j` is empty.
    pub h: Vec<Option<usize>>,
    pub eq_type: EqType,
    /// One of the five order patterns, `1..=5`.
    pub pattern_id: u8,
    /// `γ = n₀ - α₀ ∈ [0, 1)`.
    pub gamma: f64,
}

impl OrderPattern {
    pub fn n0(&self) -> usize {
        self.n[0]
    }

    pub fn h(&self, j: usize) -> Option<usize> {
        self.h.get(j).copied().flatten()
    }

    /// Smoothness assumptions on the coefficients that the series
    /// representation relies on for this pattern. None of them is checked.
    pub fn hypothesis_note(&self) -> String {
        let smooth = "coefficients assumed in C^1_gamma[0,T] with D^gamma a_i continuous";
        let cont = "coefficients assumed continuous on [0,T]";
        let base = match self.pattern_id {
            1 => format!("pattern 1 (alpha_m = 0, n0 = n1): {smooth}"),
            2 => format!("pattern 2 (alpha_m = 0, n0 > n1): {cont}"),
            3 => format!("pattern 3 (0 < alpha_m <= n0-1, n0 = n1): {smooth}, 0 < gamma < 1"),
            4 => format!("pattern 4 (0 < alpha_m <= n0-1, n0 > n1): {cont}"),
            _ => "pattern 5 (alpha_m > n0-1): y_j = t^j/j! independent of coefficients; \
                  coefficients assumed in C^1_gamma[0,T], 0 < gamma < 1"
                .to_string(),
        };
        let mut note = format!("{base}; not verified for sampled coefficients");
        if !self.within_stated_hypotheses() {
            note.push_str(
                "; outside stated hypotheses: gamma = 0 is not covered for this pattern, \
                 result computed without an existence guarantee",
            );
        }
        note
    }

    /// False for the `γ = 0` cases of patterns 3 and 5, which no existence
    /// statement covers.
    pub fn within_stated_hypotheses(&self) -> bool {
        !(self.gamma == 0.0 && matches!(self.pattern_id, 3 | 5))
    }
}

pub fn classify(spec: &OrderSpec) -> OrderPattern {
    let n: Vec<usize> = spec.alphas().iter().map(|a| a.ceil() as usize).collect();
    let n0 = n[0];
    let m = spec.m();
    // h_j = first i in 1..=m with α_i ≤ j; orders decrease so H_j = h_j..=m
    let h: Vec<Option<usize>> = (0..n0)
        .map(|j| (1..=m).find(|&i| spec.alpha(i) <= j as f64))
        .collect();

    let eq_type = if h[0].is_some() {
        EqType::TypeI
    } else if h[n0 - 1].is_none() {
        EqType::TypeIII
    } else {
        let j0 = h
            .iter()
            .rposition(Option::is_none)
            .expect("H_0 is empty here");
        debug_assert_eq!(j0 + 1, n[m], "j0 must equal n_m - 1");
        EqType::TypeII { j0 }
    };
    let pattern_id = match (eq_type, n0 == n[1]) {
        (EqType::TypeI, true) => 1,
        (EqType::TypeI, false) => 2,
        (EqType::TypeII { .. }, true) => 3,
        (EqType::TypeII { .. }, false) => 4,
        (EqType::TypeIII, _) => 5,
    };
    OrderPattern {
        n,
        h,
        eq_type,
        pattern_id,
        gamma: n0 as f64 - spec.leading(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(a: &[f64]) -> OrderSpec {
        OrderSpec::new(a.to_vec()).unwrap()
    }

    #[test]
    fn ceil_order_examples() {
        assert_eq!(ceil_order(0.0).unwrap(), 0);
        assert_eq!(ceil_order(1.5).unwrap(), 2);
        assert_eq!(ceil_order(2.0).unwrap(), 2);
        assert!(ceil_order(-0.1).is_err());
    }

    #[test]
    fn order_spec_validation() {
        assert!(matches!(
            OrderSpec::new(vec![1.0, 1.0]),
            Err(Error::InvalidOrders(_))
        ));
        assert!(matches!(
            OrderSpec::new(vec![1.0]),
            Err(Error::InvalidOrders(_))
        ));
        assert!(matches!(
            OrderSpec::new(vec![1.0, -0.5]),
            Err(Error::InvalidOrders(_))
        ));
        assert!(matches!(
            OrderSpec::new(vec![0.5, 1.0]),
            Err(Error::InvalidOrders(_))
        ));
        assert!(matches!(
            OrderSpec::new(vec![f64::NAN, 0.0]),
            Err(Error::InvalidOrders(_))
        ));
        let e = OrderSpec::new(vec![2.0, 1.0, 1.5]).unwrap_err();
        assert!(e.to_string().contains("orders not strictly decreasing"));
    }

    #[test]
    fn index_set_examples() {
        assert_eq!(index_set_h(&spec(&[1.5, 0.7, 0.0]), 0).unwrap(), vec![2]);
        assert!(index_set_h(&spec(&[1.7, 1.3]), 1).unwrap().is_empty());
        assert_eq!(index_set_h(&spec(&[2.5, 1.2]), 2).unwrap(), vec![1]);
        assert!(matches!(
            index_set_h(&spec(&[2.5, 1.2]), 3),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let p = classify(&spec(&[1.5, 0.7, 0.0]));
        assert_eq!(
            (p.eq_type, p.n.clone(), p.pattern_id),
            (EqType::TypeI, vec![2, 1, 0], 2)
        );

        let p = classify(&spec(&[2.5, 1.2]));
        assert_eq!(
            (p.eq_type, p.n.clone(), p.pattern_id),
            (EqType::TypeII { j0: 1 }, vec![3, 2], 4)
        );

        let p = classify(&spec(&[1.7, 1.3]));
        assert_eq!((p.eq_type, p.pattern_id), (EqType::TypeIII, 5));
        assert!((p.gamma - 0.3).abs() < 1e-15);
    }

    #[test]
    fn boundary_alpha_m_equal_n0_minus_one_is_type_two() {
        let p = classify(&spec(&[2.5, 2.0]));
        assert_eq!(p.eq_type, EqType::TypeII { j0: 1 });
        let p = classify(&spec(&[3.0, 2.5, 2.0]));
        assert_eq!(p.eq_type, EqType::TypeII { j0: 1 });
        assert_eq!(p.pattern_id, 3);
    }

    #[test]
    fn gamma_zero_flags_uncovered_patterns() {
        let p = classify(&spec(&[2.0, 1.5]));
        assert_eq!(p.pattern_id, 5);
        assert!(!p.within_stated_hypotheses());
        assert!(p.hypothesis_note().contains("outside stated hypotheses"));
        let p = classify(&spec(&[2.0, 0.0]));
        assert!(p.within_stated_hypotheses());
    }

    fn order_tuple() -> impl Strategy<Value = Vec<f64>> {
        // draw distinct values on a quarter grid, some integers included
        (prop::collection::btree_set(0u32..20, 2..6), any::<bool>())
            .prop_map(|(set, zero)| {
                let mut v: Vec<f64> = set.into_iter().rev().map(|k| k as f64 * 0.25).collect();
                if zero {
                    let last = v.len() - 1;
                    v[last] = 0.0;
                }
                v
            })
            .prop_filter("decreasing with positive leading order", |v| {
                v[0] > 0.0 && v.windows(2).all(|w| w[0] > w[1])
            })
    }

    proptest! {
        #[test]
        fn classification_invariants(a in order_tuple()) {
            let s = OrderSpec::new(a.clone()).unwrap();
            let p = classify(&s);
            let m = s.m();
            let n0 = p.n0();
            for (i, &ni) in p.n.iter().enumerate() {
                prop_assert!((ni as f64) - 1.0 < a[i] && a[i] <= ni as f64);
            }
            prop_assert!(p.n.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(p.gamma >= 0.0 && p.gamma < 1.0);
            for j in 0..n0 {
                let hs = index_set_h(&s, j).unwrap();
                prop_assert_eq!(p.h(j), hs.first().copied());
                if j + 1 < n0 {
                    let next = index_set_h(&s, j + 1).unwrap();
                    prop_assert!(hs.iter().all(|i| next.contains(i)));
                }
                if j >= p.n[1] {
                    prop_assert_eq!(hs, (1..=m).collect::<Vec<_>>());
                }
            }
            let type_one = a[m] == 0.0;
            prop_assert_eq!(matches!(p.eq_type, EqType::TypeI), type_one);
            prop_assert_eq!(type_one, p.h(0) == Some(m));
            if let EqType::TypeII { j0 } = p.eq_type {
                prop_assert_eq!(j0 + 1, p.n[m]);
                prop_assert!(a[m] > 0.0 && a[m] <= (n0 - 1) as f64);
            }
            if p.eq_type == EqType::TypeIII {
                prop_assert!(a[m] > (n0 - 1) as f64);
            }
            prop_assert!((1..=5).contains(&p.pattern_id));
        }
    }
}
