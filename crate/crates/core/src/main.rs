use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use pbf_core::cli::{evaluate, parse_statline, run_batch, Report, Settings, Statline};
use pbf_core::domain::{ALPHA_MAX, ALPHA_MIN};
use pbf_core::sim::{run_grid, SimConfig};
use pbf_core::Probability;

/// Bayes factors from reported F and t statistics.
#[derive(Parser)]
#[command(name = "pbf", version)]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Print aligned text (the default).
    #[arg(long, global = true)]
    text: bool,

    /// Prior probability of the null model.
    #[arg(long, global = true, default_value_t = 0.5)]
    prior_h0: f64,

    /// Suppress warnings in text output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evidence for a one-factor ANOVA reported as F(df1, df2).
    Anova {
        #[arg(long, allow_negative_numbers = true)]
        f: String,
        #[arg(long)]
        df1: f64,
        #[arg(long)]
        df2: f64,
        /// Total sample size, enables the BIC approximation.
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        alphas: AlphaArgs,
    },
    /// Evidence for a two-sample t-test reported as t(df).
    Ttest {
        #[arg(long, allow_negative_numbers = true)]
        t: String,
        #[arg(long)]
        df: f64,
        #[arg(long, requires = "n2", conflicts_with = "n")]
        n1: Option<u64>,
        #[arg(long, requires = "n1", conflicts_with = "n")]
        n2: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        alphas: AlphaArgs,
    },
    /// Parse a statline and print its canonical form.
    Parse { statline: String },
    /// Evaluate every row of a CSV file.
    Batch { file: PathBuf },
    /// Monte Carlo model-choice accuracy over a grid.
    Sim {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [10, 30, 80])]
        r: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0])]
        tau: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [-0.5, 0.0])]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        reps: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the accuracy CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-replicate posterior probabilities here.
        #[arg(long)]
        posteriors: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AlphaArgs {
    /// Prior shape in [-0.5, 0]; repeat for several. Defaults to 0 and -0.5.
    #[arg(long = "alpha", allow_negative_numbers = true)]
    alpha: Vec<f64>,
}

enum Failure {
    Usage(String),
    Rows,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rows) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn settings(cli: &Cli, alphas: &[f64], n: Option<u64>) -> Result<Settings, Failure> {
    if let Some(a) = alphas.iter().find(|a| !(ALPHA_MIN..=ALPHA_MAX).contains(*a)) {
        return Err(Failure::Usage(format!("--alpha must lie in [-0.5, 0], got {a}")));
    }
    let mut s = Settings {
        prior_h0: Probability::new(cli.prior_h0).map_err(|e| Failure::Usage(e.to_string()))?,
        n,
        ..Settings::default()
    };
    if !alphas.is_empty() {
        s.alphas = alphas.to_vec();
    }
    Ok(s)
}

fn statline(text: &str) -> Result<Statline, Failure> {
    parse_statline(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn print_report(cli: &Cli, report: &Report) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    if cli.json {
        let text = serde_json::to_string_pretty(report).map_err(|e| Failure::Usage(e.to_string()))?;
        writeln!(out, "{text}")?;
    } else {
        write!(out, "{}", report.render_text(cli.quiet))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if !(cli.prior_h0 > 0.0 && cli.prior_h0 < 1.0) {
        return Err(Failure::Usage(format!(
            "--prior-h0 must lie strictly between 0 and 1, got {}",
            cli.prior_h0
        )));
    }
    match &cli.command {
        Command::Anova { f, df1, df2, n, alphas } => {
            let line = statline(&format!("F({df1},{df2})={}", f.trim()))?;
            let report = evaluate(&line, &settings(cli, &alphas.alpha, *n)?);
            print_report(cli, &report)
        }
        Command::Ttest {
            t,
            df,
            n1,
            n2,
            n,
            alphas,
        } => {
            let line = statline(&format!("t({df})={}", t.trim()))?;
            let total = match (n1, n2) {
                (Some(a), Some(b)) => Some(a + b),
                _ => *n,
            };
            let report = evaluate(&line, &settings(cli, &alphas.alpha, total)?);
            print_report(cli, &report)
        }
        Command::Parse { statline: text } => {
            let line = statline(text)?;
            if cli.json {
                println!("{}", json!({ "input": line.raw, "canonical": line.canonical(), "stat": line.stat }));
            } else {
                println!("{}", line.canonical());
            }
            Ok(())
        }
        Command::Batch { file } => {
            let input = File::open(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            let rows = run_batch(BufReader::new(input), &settings(cli, &[], None)?)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let any_error = rows.iter().any(Result::is_err);
            let mut out = io::stdout().lock();
            if cli.json {
                let items: Vec<_> = rows
                    .iter()
                    .map(|r| match r {
                        Ok(report) => serde_json::to_value(report).unwrap_or_default(),
                        Err(e) => json!({ "row": e.row, "error": e.message }),
                    })
                    .collect();
                let text = serde_json::to_string_pretty(&items).map_err(|e| Failure::Usage(e.to_string()))?;
                writeln!(out, "{text}")?;
            } else {
                for r in &rows {
                    match r {
                        Ok(report) => write!(out, "{}", report.render_text(cli.quiet))?,
                        Err(e) => writeln!(out, "error: {e}")?,
                    }
                }
            }
            if any_error {
                Err(Failure::Rows)
            } else {
                Ok(())
            }
        }
        Command::Sim {
            p,
            r,
            tau,
            alpha,
            reps,
            seed,
            out,
            posteriors,
        } => {
            let config = SimConfig {
                p: *p,
                r_values: r.clone(),
                tau_values: tau.clone(),
                alpha_values: alpha.clone(),
                reps: *reps,
                seed: *seed,
                ..SimConfig::standard_grid(*seed)
            };
            let grid = run_grid(&config).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(path) = out {
                std::fs::write(path, grid.to_csv())?;
            }
            if let Some(path) = posteriors {
                std::fs::write(path, grid.posteriors_csv())?;
            }
            if cli.json {
                let text = serde_json::to_string_pretty(&grid).map_err(|e| Failure::Usage(e.to_string()))?;
                println!("{text}");
            } else {
                print!("{}", grid.render_table());
            }
            Ok(())
        }
    }
}
