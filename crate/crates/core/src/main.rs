use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use zetaspec::operator_engine::GridSpec;
use zetaspec::report::{
    emit, run_suite, write_atomic, zero_table_csv, zero_table_json, Format, RunConfig,
};
use zetaspec::zero_finder::zero_table;

/// Verification harness for the difference-operator Hamiltonian whose
/// eigenvalues are the Riemann zeros.
#[derive(Parser, Debug)]
#[command(name = "zetaspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Flat key = value config file (default: $ZETASPEC_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Number of critical-line zeros to use.
    #[arg(long, global = true)]
    count: Option<usize>,
    /// Inner-product cutoff Λ.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Tolerance of the primary report of each selected check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Residual grid as lo:hi:n (logarithmic).
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Record wall-clock time per report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate critical-line zeros.
    Zeros,
    /// Run the named checks (all when none are given).
    Verify { checks: Vec<String> },
    /// Run the full suite.
    Report {
        #[arg(long)]
        all: bool,
    },
}

fn load_config(common: &Common, selection: &[String]) -> anyhow::Result<RunConfig> {
    let path = common
        .config
        .clone()
        .or_else(|| std::env::var_os("ZETASPEC_CONFIG").map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => RunConfig::from_file(&p).with_context(|| format!("loading {}", p.display()))?,
        None => RunConfig::default(),
    };
    if let Some(n) = common.count {
        cfg.zero_count = n;
    }
    if let Some(l) = common.lambda {
        cfg.inner_lambda = l;
    }
    if let Some(g) = &common.grid {
        cfg.grid = GridSpec::parse(g)?;
    }
    if let Some(o) = &common.out {
        cfg.out_dir = o.clone();
    }
    if let Some(f) = &common.format {
        cfg.format = f.parse()?;
    }
    if let Some(j) = common.jobs {
        cfg.jobs = Some(j);
    }
    cfg.timing |= common.timing;
    if let Some(t) = common.tol {
        let ids = zetaspec::report::parse_selection(selection)?;
        for id in ids {
            cfg.tolerances.insert(id.to_string(), t);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

enum Outcome {
    Pass,
    Fail,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    // A closed pipe (e.g. `| head`) should not abort the run, so stdout
    // write errors are ignored.
    let mut stdout = std::io::stdout().lock();
    let selection = match &cli.command {
        Command::Verify { checks } => checks.clone(),
        _ => Vec::new(),
    };
    let cfg = load_config(&cli.common, &selection)?;
    if let Some(j) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .context("configuring worker pool")?;
    }
    match cli.command {
        Command::Zeros => {
            let zeros = zero_table(cfg.zero_count)?;
            let text = match cfg.format {
                Format::Json => zero_table_json(&zeros)?,
                Format::Csv => zero_table_csv(&zeros)?,
            };
            if cli.common.out.is_some() {
                let name = match cfg.format {
                    Format::Json => "zeros.json",
                    Format::Csv => "zeros.csv",
                };
                let path = cfg.out_dir.join(name);
                write_atomic(&path, text.as_bytes())?;
                let _ = writeln!(stdout, "wrote {}", path.display());
            } else {
                let _ = write!(stdout, "{text}");
            }
            Ok(Outcome::Pass)
        }
        Command::Report { all: false } => bail!(UsageError("report needs --all".into())),
        Command::Verify { .. } | Command::Report { .. } => {
            let out = run_suite(&cfg, &selection)?;
            for r in &out.reports {
                let params: Vec<String> =
                    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let worst = r.metrics.values().copied().fold(0.0, f64::max);
                let _ = writeln!(
                    stdout,
                    "{} {} [{}] worst={worst:e} tol={:e}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.check_id,
                    params.join(" "),
                    r.tolerance
                );
            }
            for p in emit(&out.reports, &out.data, cfg.format, &cfg.out_dir)? {
                let _ = writeln!(stdout, "wrote {}", p.display());
            }
            Ok(if out.all_pass() {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.chain().any(|c| {
                c.is::<UsageError>()
                    || matches!(
                        c.downcast_ref::<zetaspec::Error>(),
                        Some(zetaspec::Error::Configuration(_))
                    )
            });
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
