use canonfs::{CoefficientSpec, OrderSpec, Problem};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// On-disk layout of a problem file.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    #[serde(rename = "T")]
    t_end: f64,
    alphas: Vec<f64>,
    coefficients: Vec<CoefficientSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_values: Option<Vec<f64>>,
}

fn invalid(path: impl Into<String>, reason: impl ToString) -> CliError {
    CliError::Validation {
        path: path.into(),
        reason: reason.to_string(),
    }
}

/// Parses and validates a JSON problem file.
pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    let raw: ProblemFile = serde_json::from_str(text).map_err(|e| {
        let position = format!(" at line {} column {}", e.line(), e.column());
        let message = e.to_string();
        CliError::Syntax {
            line: e.line(),
            column: e.column(),
            reason: message
                .strip_suffix(&position)
                .unwrap_or(&message)
                .to_string(),
        }
    })?;

    if !(raw.t_end > 0.0 && raw.t_end.is_finite()) {
        return Err(invalid(
            "T",
            format!("must be positive and finite, got {}", raw.t_end),
        ));
    }
    if let Some(k) = raw.alphas.iter().position(|a| !a.is_finite()) {
        return Err(invalid(format!("alphas[{k}]"), "order is not finite"));
    }
    if let Some(k) = raw.alphas.windows(2).position(|w| w[1] >= w[0]) {
        return Err(invalid(
            format!("alphas[{}]", k + 1),
            "orders not strictly decreasing",
        ));
    }
    let orders = OrderSpec::new(raw.alphas).map_err(|e| invalid("alphas", e))?;

    let m = orders.m();
    if raw.coefficients.len() != m {
        let plural = if m == 1 { "" } else { "s" };
        return Err(invalid(
            "coefficients",
            format!(
                "expected {m} coefficient{plural}, got {}",
                raw.coefficients.len()
            ),
        ));
    }
    for (k, c) in raw.coefficients.iter().enumerate() {
        c.validate()
            .map_err(|e| invalid(format!("coefficients[{k}]"), e))?;
        c.check_coverage(raw.t_end)
            .map_err(|e| invalid(format!("coefficients[{k}]"), e))?;
    }

    if let Some(b) = &raw.initial_values {
        let n0 = orders.n0();
        if b.len() != n0 {
            let plural = if n0 == 1 { "" } else { "s" };
            return Err(invalid(
                "initial_values",
                format!("expected {n0} initial value{plural}, got {}", b.len()),
            ));
        }
        if let Some(k) = b.iter().position(|x| !x.is_finite()) {
            return Err(invalid(
                format!("initial_values[{k}]"),
                "value is not finite",
            ));
        }
    }

    Problem::new(orders, raw.coefficients, raw.t_end, raw.initial_values)
        .map_err(|e| invalid("problem", e))
}

/// Canonical JSON encoding; `parse_problem(&print_problem(p)) == p`.
pub fn print_problem(problem: &Problem) -> String {
    let file = ProblemFile {
        t_end: problem.t_end(),
        alphas: problem.orders().alphas().to_vec(),
        coefficients: problem.coefficients().to_vec(),
        initial_values: problem.initial_values().map(<[f64]>::to_vec),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("finite problem data serializes");
    text.push('\n');
    text
}
