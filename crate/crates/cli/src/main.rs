use std::path::PathBuf;
use std::process::ExitCode;

use canonfs_cli::{run, write_outputs, RunConfig};
use clap::Parser;

/// Canonical fundamental systems of multi-term Caputo equations.
#[derive(Debug, Parser)]
#[command(name = "canonfs", version)]
struct Args {
    /// JSON problem file
    #[arg(long)]
    problem: PathBuf,
    /// Number of grid intervals
    #[arg(long = "n", default_value_t = 1024)]
    n_intervals: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol_abs: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol_rel: f64,
    #[arg(long, default_value_t = 200)]
    max_terms: usize,
    /// Skip the collocation comparison
    #[arg(long)]
    no_oracle: bool,
    /// Output prefix (default: problem path without extension)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let config = RunConfig {
        problem: args.problem,
        n_intervals: args.n_intervals,
        tol_abs: args.tol_abs,
        tol_rel: args.tol_rel,
        max_terms: args.max_terms,
        oracle: !args.no_oracle,
        out: args.out,
    };

    let result = run(&config).and_then(|report| {
        let paths = write_outputs(&report, &config.out_prefix())?;
        Ok((report, paths))
    });
    match result {
        Ok((report, (csv, json))) => {
            println!(
                "pattern {} type {} -> {} {}",
                report.summary.pattern_id,
                report.summary.eq_type,
                csv.display(),
                json.display()
            );
            if report.all_converged() {
                ExitCode::SUCCESS
            } else {
                let failed: Vec<String> = report
                    .summary
                    .per_element
                    .iter()
                    .filter(|e| !e.converged)
                    .map(|e| e.j.to_string())
                    .collect();
                eprintln!(
                    "error: series did not converge for element(s) {}",
                    failed.join(",")
                );
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
