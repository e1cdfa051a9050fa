use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gkernel::cuntz;
use gkernel::kernel::MinimalityOptions;
use gkernel::prover::{run_script, ProofScript};
use gkernel_cli::{explain, load, report, run_suite, threads_from_env, CliError, Overrides};

#[derive(Parser)]
#[command(name = "gkcheck", version, about = "Verification suite for finite G-kernel models")]
struct Cli {
    /// Overrides the configuration seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides every numeric tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a suite configuration and write a JSON report.
    Check {
        config: PathBuf,
        /// Report path; defaults to `<config stem>.report.json`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Replay a proof script.
    Prove {
        script: PathBuf,
        #[arg(long)]
        trace: bool,
    },
    /// Describe a check.
    Explain { name: String },
    /// Decide `<expr> == <expr>` in the Cuntz algebra O_n.
    Cuntz {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        expr: Vec<String>,
    },
    /// Minimality report for the model of a configuration.
    Minimality {
        config: PathBuf,
        /// Comma-separated weights, one per group element; uniform by default.
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<f64>>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ov = Overrides { seed: cli.seed, tolerance: cli.tolerance };
    match dispatch(cli.command, ov) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command, ov: Overrides) -> Result<u8, CliError> {
    match command {
        Command::Check { config, report } => check(&config, report, ov),
        Command::Prove { script, trace } => prove(&script, trace),
        Command::Explain { name } => match explain::explain(&name) {
            Some(text) => {
                print!("{text}");
                Ok(0)
            }
            None => Err(CliError::Usage(format!(
                "unknown check {name:?}; known: {}",
                explain::CHECK_NAMES.join(", ")
            ))),
        },
        Command::Cuntz { n, expr } => cuntz_equals(n, &expr.join(" ")),
        Command::Minimality { config, mu } => minimality(&config, mu, ov),
    }
}

fn check(config: &Path, report_path: Option<PathBuf>, ov: Overrides) -> Result<u8, CliError> {
    let run = run_suite(config, ov, threads_from_env()?)?;
    for r in &run.records {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        match r.params.get("objects") {
            Some(o) => println!("[{tag}] {} {o} {}", r.name, r.verdict),
            None => println!("[{tag}] {} {}", r.name, r.verdict),
        }
    }
    let path = report_path.unwrap_or_else(|| {
        let stem = config.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or("suite".into());
        PathBuf::from(format!("{stem}.report.json"))
    });
    report::write(&path, &run.report, &run.timing())?;
    let failed = run.records.iter().filter(|r| !r.passed).count();
    println!("{} checks, {failed} failed; report written to {}", run.records.len(), path.display());
    Ok(if run.passed() { 0 } else { 1 })
}

fn prove(path: &Path, trace: bool) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let script = ProofScript::parse(&text).map_err(|e| CliError::from(e).in_file(path))?;
    let run = run_script(&script);
    if trace {
        for (i, t) in run.trace.iter().enumerate() {
            match &t.step {
                None => println!("{i:>3}  start\n       {}", t.term),
                Some(s) => println!("{i:>3}  {s}\n       {}", t.term),
            }
        }
    }
    println!("{}", run.verdict);
    Ok(if run.verdict.is_proved() { 0 } else { 1 })
}

fn cuntz_equals(n: u32, text: &str) -> Result<u8, CliError> {
    let (l, r) = text
        .split_once("==")
        .ok_or_else(|| CliError::Usage("expected `<expr> == <expr>`".into()))?;
    let lhs = cuntz::parse(n, l.trim()).map_err(CliError::from)?;
    let rhs = cuntz::parse(n, r.trim()).map_err(CliError::from)?;
    match lhs.equals(&rhs) {
        Ok(true) => {
            println!("equal");
            Ok(0)
        }
        Ok(false) => {
            println!("not equal");
            Ok(1)
        }
        Err(e) => {
            println!("undecided: {e}");
            Ok(1)
        }
    }
}

fn minimality(config: &Path, mu: Option<Vec<f64>>, ov: Overrides) -> Result<u8, CliError> {
    let (_, ctx) = load(config, ov)?;
    let mu = mu.unwrap_or_else(|| vec![1.0; ctx.group.order()]);
    let opts = MinimalityOptions { seed: ctx.seed, ..MinimalityOptions::default() };
    let rep = ctx.model.minimality_report(&mu, &opts).map_err(CliError::from)?;
    println!("support: {:?} ({})", rep.support, if rep.exhaustive { "exhaustive" } else { "sampled" });
    for p in &rep.condition_i {
        println!("  E={:?} F={:?} intertwiners={} hom={}", p.e, p.f, p.intertwiner_dim, p.hom_dim);
    }
    println!("condition (i): {}", if rep.minimal_i { "holds" } else { "fails" });
    println!("condition (ii): {}", if rep.minimal_ii { "holds" } else { "fails" });
    println!("{}", if rep.minimal { "minimal" } else { "not minimal" });
    if rep.f_not_full() {
        println!("F is not full: {} pair(s) with more intertwiners than graded maps", rep.not_full_pairs);
    }
    Ok(if rep.conditions_agree { 0 } else { 1 })
}
