use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use walklab_cli::{load_config, report, runner};
use walklab_core::harness::exceptional_density;
use walklab_core::{Error, GridAffineSpec, GroupSpace};

/// Numerical laboratory for random walks on explicit groups: convergence
/// parameters, twisted walks, and ratio-limit verification.
#[derive(Parser)]
#[command(name = "walklab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the group zoo
    Groups {
        #[command(subcommand)]
        what: GroupsCommand,
    },
    /// Estimate the convergence parameter R of a scenario's law
    EstimateR { config: String },
    /// Run a scenario and print its verdict without writing report files
    Verify { config: String },
    /// Run a scenario and write CSV series plus a JSON summary
    Run {
        config: String,
        /// Output directory (falls back to $WALKLAB_OUT, then ./walklab-out)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exceptional-set density profile of a ratio series stored as CSV
    Density {
        csv: PathBuf,
        /// Target limit L
        #[arg(long)]
        limit: f64,
        /// Threshold ε, relative to |L| unless --absolute is given
        #[arg(long)]
        eps: f64,
        /// Treat ε as an absolute threshold
        #[arg(long)]
        absolute: bool,
    },
}

#[derive(Subcommand)]
enum GroupsCommand {
    /// List the supported group families
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Groups {
            what: GroupsCommand::List,
        } => {
            list_groups();
            Ok(ExitCode::SUCCESS)
        }
        Command::EstimateR { config } => {
            let cfg = load_config(&config)?;
            let summaries = runner::estimate_r(&cfg)?;
            let json = serde_json::to_string_pretty(&summaries)
                .map_err(|e| Error::Config(e.to_string()))?;
            println!("{json}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config } => {
            let cfg = load_config(&config)?;
            let outcome = runner::run_scenario(&cfg)?;
            print_verdict(&outcome);
            Ok(exit_for(&outcome))
        }
        Command::Run { config, out } => {
            let cfg = load_config(&config)?;
            let outcome = runner::run_scenario(&cfg)?;
            let out_dir = out
                .or_else(|| std::env::var_os("WALKLAB_OUT").map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("walklab-out"));
            let summary = report::write_reports(&out_dir, &outcome)?;
            print_verdict(&outcome);
            println!("summary: {}", summary.display());
            Ok(exit_for(&outcome))
        }
        Command::Density {
            csv,
            limit,
            eps,
            absolute,
        } => {
            let (start_n, values) = read_series_csv(&csv)?;
            let eps_abs = if absolute {
                eps
            } else {
                walklab_core::harness::absolute_epsilon(eps, limit)
            };
            let (_, q, d) = exceptional_density(&values, start_n, limit, eps_abs);
            let n_final = start_n + values.len() - 1;
            println!(
                "{}",
                serde_json::json!({
                    "points": values.len(),
                    "final_n": n_final,
                    "epsilon_abs": eps_abs,
                    "exceptional_count": q.last().copied().unwrap_or(0),
                    "final_density": d.last().copied().unwrap_or(0.0),
                })
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_for(outcome: &runner::RunOutcome) -> ExitCode {
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_verdict(outcome: &runner::RunOutcome) {
    let report = &outcome.report;
    println!("scenario: {} [{}]", report.scenario, report.group);
    for s in &report.spectral {
        println!(
            "  {}: R = {:.9} (residual {:.3e})",
            s.method, s.r.value, s.residual.value
        );
    }
    for s in &report.series {
        println!(
            "  series {}: target {:.7} tail_ok={} density_ok={} (d_final {:.4})",
            s.name, s.target.value, s.tail_ok, s.density_ok, s.final_density
        );
    }
    for w in &report.witnesses {
        println!("  witness {}: {}", w.kind, w.note);
    }
    if let Some(m) = &report.modular {
        println!(
            "  modular: r = {:.6}, truncation {:.3e}, witness_below_one = {:?}",
            m.r_value.value, m.truncation_max, m.witness_below_one
        );
    }
    if let Some(t) = &report.translation {
        println!(
            "  translation covariance: max |diff| = {:.3e}",
            t.max_abs_diff.value
        );
    }
    if let Some(s) = &report.similarity_residual {
        println!("  similarity residual: {:.3e}", s.value);
    }
    println!("verdict: {}", report.verdict);
}

fn list_groups() {
    let samples: Vec<(GroupSpace, &str)> = vec![
        (
            GroupSpace::Lattice { dim: 1 },
            "integer lattice Z^d under addition (set \"dim\")",
        ),
        (
            GroupSpace::Free { rank: 2 },
            "free group F_k, elements as reduced words (set \"rank\")",
        ),
        (
            GroupSpace::Heisenberg,
            "discrete Heisenberg group H3(Z), coordinates (x, y, z)",
        ),
        (
            GroupSpace::Cyclic { modulus: 12 },
            "finite cyclic group Z/mZ (set \"modulus\")",
        ),
        (
            GroupSpace::GridAffine(GridAffineSpec {
                levels_per_side: 33,
                a_step: 1.0,
                b_step: 1.0,
                b_halfwidth_steps: 110000,
            }),
            "affine group a x + b on a (log2 a, b) grid window; the non-unimodular test bed",
        ),
    ];
    println!("group families (the JSON \"group\" object):");
    for (g, desc) in samples {
        let json = serde_json::to_string(&g).unwrap();
        println!("  {:<28} {desc}", g.describe());
        println!("      example: {json}");
    }
}

fn read_series_csv(path: &PathBuf) -> Result<(usize, Vec<f64>), Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(e.to_string()))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty CSV".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let (n_col, v_col) = if cols.first() == Some(&"n") && cols.len() >= 2 {
        (0usize, 1usize)
    } else {
        return Err(Error::Config(
            "expected a CSV header starting with n,<value>".into(),
        ));
    };
    let mut start_n = None;
    let mut values = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let n: usize = fields
            .get(n_col)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Config(format!("bad n field in line `{line}`")))?;
        let v: f64 = fields
            .get(v_col)
            .map(|s| s.parse().unwrap_or(f64::NAN))
            .ok_or_else(|| Error::Config(format!("bad value field in line `{line}`")))?;
        if start_n.is_none() {
            start_n = Some(n);
        }
        values.push(v);
    }
    Ok((start_n.unwrap_or(1), values))
}
