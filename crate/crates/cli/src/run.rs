use std::path::{Path, PathBuf};

use canonfs::{
    assemble_ivp_solution, compare, fixed_point_defect, make_grid, volterra_collocation_solve,
    CanonicalElement, Discretization, EqType, Grid, GridFn, Problem, TruncationPolicy,
};
use serde::Serialize;

use crate::problem_file::parse_problem;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: PathBuf,
    pub n_intervals: usize,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub max_terms: usize,
    pub oracle: bool,
    /// Output prefix; defaults to the problem path without its extension.
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(problem: impl Into<PathBuf>) -> Self {
        RunConfig {
            problem: problem.into(),
            n_intervals: 1024,
            tol_abs: 1e-12,
            tol_rel: 1e-12,
            max_terms: 200,
            oracle: true,
            out: None,
        }
    }

    pub fn out_prefix(&self) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| self.problem.with_extension(""))
    }

    fn policy(&self) -> Result<TruncationPolicy, CliError> {
        if self.n_intervals == 0 {
            return Err(CliError::Config("--n must be positive".into()));
        }
        TruncationPolicy::new(self.tol_abs, self.tol_rel, self.max_terms)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementSummary {
    pub j: usize,
    pub converged: bool,
    pub terms_used: usize,
    pub last_term_norm: f64,
    pub fixed_point_residual: f64,
    pub oracle_sup_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub method_a: String,
    pub method_b: String,
    pub sup_error: Vec<f64>,
}

/// Contents of `<prefix>.report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub pattern_id: u8,
    #[serde(rename = "type")]
    pub eq_type: &'static str,
    pub j0: Option<usize>,
    pub n: Vec<usize>,
    pub h: Vec<Option<usize>>,
    pub gamma: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub n_intervals: usize,
    pub per_element: Vec<ElementSummary>,
    pub hypothesis_note: String,
    pub oracle: Option<OracleSummary>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub summary: Summary,
    pub grid: Grid,
    pub elements: Vec<CanonicalElement>,
    /// `Σ b_j y_j` when the problem carries initial values.
    pub solution: Option<GridFn>,
    /// Nodewise `|w + g_j + K w|` per element.
    pub residuals: Vec<GridFn>,
}

impl Report {
    pub fn all_converged(&self) -> bool {
        self.summary.per_element.iter().all(|e| e.converged)
    }
}

/// Reads the problem file named in `config` and solves it.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let policy = config.policy()?;
    let text = read_problem(&config.problem)?;
    let problem = parse_problem(&text)?;
    solve(&problem, config.n_intervals, &policy, config.oracle)
}

fn read_problem(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::NotFound(path.display().to_string()),
        _ => CliError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        },
    })
}

/// Classifies, builds the canonical system and runs the checks.
pub fn solve(
    problem: &Problem,
    n_intervals: usize,
    policy: &TruncationPolicy,
    oracle: bool,
) -> Result<Report, CliError> {
    let grid = make_grid(problem.t_end(), n_intervals)?;
    let disc = Discretization::new(problem, &grid)?;
    let elements = disc.build_system(policy)?;
    let solution = match problem.initial_values() {
        Some(b) => Some(assemble_ivp_solution(&elements, b)?),
        None => None,
    };

    let mut residuals = Vec::with_capacity(elements.len());
    let mut per_element = Vec::with_capacity(elements.len());
    let mut oracle_errors = Vec::new();
    for e in &elements {
        let defect = fixed_point_defect(&disc, e.j, &e.w)?;
        let abs = GridFn::new(grid, defect.values().iter().map(|v| v.abs()).collect())?;
        let oracle_sup_error = if oracle {
            let direct = volterra_collocation_solve(&disc, e.j)?;
            let rep = compare(&e.w, METHOD_A, &direct, METHOD_B)?;
            oracle_errors.push(rep.sup_error);
            Some(rep.sup_error)
        } else {
            None
        };
        per_element.push(ElementSummary {
            j: e.j,
            converged: e.converged,
            terms_used: e.terms_used,
            last_term_norm: e.last_term_norm,
            fixed_point_residual: abs.sup_norm(),
            oracle_sup_error,
        });
        residuals.push(abs);
    }

    let pattern = disc.pattern();
    let summary = Summary {
        pattern_id: pattern.pattern_id,
        eq_type: pattern.eq_type.label(),
        j0: match pattern.eq_type {
            EqType::TypeII { j0 } => Some(j0),
            _ => None,
        },
        n: pattern.n.clone(),
        h: pattern.h.clone(),
        gamma: pattern.gamma,
        t_end: problem.t_end(),
        n_intervals,
        per_element,
        hypothesis_note: pattern.hypothesis_note(),
        oracle: oracle.then(|| OracleSummary {
            method_a: METHOD_A.into(),
            method_b: METHOD_B.into(),
            sup_error: oracle_errors,
        }),
    };
    Ok(Report {
        summary,
        grid,
        elements,
        solution,
        residuals,
    })
}

const METHOD_A: &str = "neumann";
const METHOD_B: &str = "collocation";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path, e: impl ToString) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    }
}

/// Writes `<prefix>.solutions.csv` and `<prefix>.report.json`; returns both paths.
pub fn write_outputs(report: &Report, prefix: &Path) -> Result<(PathBuf, PathBuf), CliError> {
    let csv_path = with_suffix(prefix, ".solutions.csv");
    let json_path = with_suffix(prefix, ".report.json");

    let mut header = vec!["t".to_string()];
    header.extend(report.elements.iter().map(|e| format!("y{}", e.j)));
    if report.solution.is_some() {
        header.push("y".into());
    }
    header.extend(report.elements.iter().map(|e| format!("residual{}", e.j)));

    let mut writer = csv::Writer::from_path(&csv_path).map_err(|e| io_err(&csv_path, e))?;
    writer
        .write_record(&header)
        .map_err(|e| io_err(&csv_path, e))?;
    for (k, t) in report.grid.nodes().enumerate() {
        let mut row = vec![fmt(t)];
        row.extend(report.elements.iter().map(|e| fmt(e.y.values()[k])));
        if let Some(y) = &report.solution {
            row.push(fmt(y.values()[k]));
        }
        row.extend(report.residuals.iter().map(|r| fmt(r.values()[k])));
        writer
            .write_record(&row)
            .map_err(|e| io_err(&csv_path, e))?;
    }
    writer.flush().map_err(|e| io_err(&csv_path, e))?;

    let mut json =
        serde_json::to_string_pretty(&report.summary).map_err(|e| io_err(&json_path, e))?;
    json.push('\n');
    std::fs::write(&json_path, json).map_err(|e| io_err(&json_path, e))?;
    Ok((csv_path, json_path))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
