use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use homdip_cli::run::prepare;
use homdip_cli::scenario::{Body, FockSpec};
use homdip_cli::{load_scenario, run, run_fock, CliError, RunOptions, ScenarioError};

/// Hong-Ou-Mandel dip simulator.
#[derive(Parser)]
#[command(name = "homdip", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a scenario and write dip.csv, summary.json and dip.svg.
    Run {
        scenario: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the number of frequency nodes (per axis for joint spectra).
        #[arg(long)]
        n_points: Option<usize>,
        /// Override the number of delays in the sweep.
        #[arg(long)]
        n_tau: Option<usize>,
        /// Skip the SVG plot.
        #[arg(long)]
        no_plot: bool,
    },
    /// Two photons with polarization tags through a beam splitter.
    Fock {
        /// Reflectivity in [0, 1].
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
        /// Tags of the photons in ports a and b, comma separated.
        #[arg(long, default_value = "H,H")]
        tags: String,
    },
    /// Print the Schmidt coefficients and purity of a pulsed scenario.
    Schmidt { scenario: PathBuf },
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            scenario,
            out,
            n_points,
            n_tau,
            no_plot,
        } => {
            let parsed = load_scenario(&scenario)?;
            let options = RunOptions {
                base_dir: base_dir(&scenario),
                n_points,
                n_tau,
                plot: !no_plot,
            };
            let summary = run(&parsed, &out, &options)?;
            if let Some(p) = summary.p {
                println!("p = {p}");
            }
            if let (Some(lo), Some(hi), Some(v)) =
                (summary.p_min, summary.p_max, summary.visibility)
            {
                println!("p_min = {lo:.6}  p_max = {hi:.6}  visibility = {v:.6}");
            }
            if let Some(p) = summary.purity {
                println!("purity = {p:.6}");
            }
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!(
                "wrote {} in {:.2} s",
                out.display(),
                summary.wall_time.as_secs_f64()
            );
            Ok(())
        }
        Command::Fock { eta, tags } => {
            let (tag_a, tag_b) = tags
                .split_once(',')
                .filter(|(a, b)| !a.is_empty() && !b.is_empty() && !b.contains(','))
                .ok_or_else(|| ScenarioError {
                    line: None,
                    message: format!("--tags expects two comma-separated tags, got `{tags}`"),
                })?;
            let spec = FockSpec {
                eta,
                tag_a: tag_a.trim().to_string(),
                tag_b: tag_b.trim().to_string(),
            };
            let (state, p) = run_fock(&spec)?;
            println!("output: {state}");
            println!("p = {p}");
            Ok(())
        }
        Command::Schmidt { scenario } => {
            let parsed = load_scenario(&scenario)?;
            if !matches!(
                parsed.body,
                Body::EntangledPulsed(_) | Body::MixedIndependent { .. }
            ) {
                return Err(ScenarioError {
                    line: None,
                    message: format!(
                        "kind `{}` has no joint spectrum to decompose",
                        parsed.kind().as_str()
                    ),
                }
                .into());
            }
            let prepared = prepare(&parsed, &RunOptions::new(base_dir(&scenario)))?;
            let coefficients = prepared.schmidt_coefficients.unwrap_or_default();
            println!("rank = {}", coefficients.len());
            for (k, u) in coefficients.iter().enumerate() {
                println!("u_{k} = {u:.12}");
            }
            if let Some(p) = prepared.purity {
                println!("purity = {p:.12}");
                println!("schmidt_number = {:.12}", 1.0 / p);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
