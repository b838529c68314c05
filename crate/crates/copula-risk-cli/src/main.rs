//! Command-line front end: preset experiments, reference-table reproduction,
//! parameter sweeps, Monte Carlo and closed-form verification, and the
//! evaluation-path benchmark.
//!
//! Exit codes: 0 on success, 2 for configuration and usage errors, 3 for
//! numeric failures (an evaluation that cannot reach its accuracy target).
//! `COPULA_RISK_THREADS` caps internal parallelism; output files are
//! byte-identical across runs for identical configuration and seed.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde::Serialize;

use copula_risk::curve::{curve_from_cdf, default_grid, ProbabilityCurve};
use copula_risk::dynamic::{sfdc, sfdc_curve, sfdf, sfdf_curve, DynamicCurve, DynamicParams};
use copula_risk::joint::JointScenario;
use copula_risk::presets::{preset, PRESET_NAMES};
use copula_risk::tables::{reproduce, reproduce_all, TableReport};
use copula_risk::verification::{
    closed_form_equivalence, mc_joint_cdf, run_benchmark, McConfig,
};
use copula_risk::Error;

use config::ExperimentConfig;

/// Deviation bound the closed-form check must meet on [0, 200].
const CLOSED_FORM_BOUND: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "copula-risk",
    version,
    about = "Joint safety and security failure probabilities for connected vehicles",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one marginal failure distribution over the time grid.
    Marginal {
        /// Which marginal to evaluate.
        #[arg(value_enum)]
        kind: MarginalKind,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Print the probability at this time instead of writing the curve.
        #[arg(long)]
        t: Option<f64>,
    },
    /// Evaluate the joint failure probability curve.
    Joint {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Print the probability at this time instead of writing the curve.
        #[arg(long)]
        t: Option<f64>,
    },
    /// Evaluate the coupled failure curves (distorted security and safety).
    Dynamic {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Print both probabilities at this time instead of writing curves.
        #[arg(long)]
        t: Option<f64>,
        /// Override the observation cut time of the coupled safety curve.
        #[arg(long = "t-cut")]
        t_cut: Option<f64>,
    },
    /// Sweep the dependence parameter or the patch time; one curve per value.
    Sweep {
        /// Field to sweep: the copula's dependence parameter name
        /// ("rho" or "theta") or "t_patch".
        #[arg(long)]
        field: String,
        /// Comma-separated values for the swept field; negative values are
        /// accepted (e.g. --values -0.39,0,0.39).
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        values: Vec<f64>,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recompute a reference table and report computed vs reference cells.
    Reproduce {
        /// Table identifier, or "all" for the whole registry.
        table_id: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check the analytic pipeline.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Time the closed-form cyber CDF against adaptive quadrature.
    Bench {
        #[command(flatten)]
        source: SourceArgs,
        /// Seed for the evaluation-point draw.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output file for the JSON report; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCheck {
    /// Monte Carlo estimate vs the analytic joint probability.
    Mc {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Number of samples.
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Closed-form cyber CDF vs adaptive quadrature on [0, 200].
    ClosedForm {
        #[command(flatten)]
        source: SourceArgs,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MarginalKind {
    Cyber,
    Safety,
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Named preset; see the registry in the long help.
    #[arg(long, conflicts_with = "config", long_help = preset_help())]
    preset: Option<String>,
    /// Path to a JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn preset_help() -> String {
    format!("Named preset, one of: {}", PRESET_NAMES.join(", "))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Comma-separated curve values (plain text for reports).
    Csv,
    /// Pretty-printed JSON.
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Failures mapped to process exit codes: configuration problems exit 2,
/// numeric problems exit 3.
enum Failure {
    Config(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidParameter(_) => Failure::Config(err.to_string()),
            _ => Failure::Numeric(err.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::init();
    configure_thread_cap();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn configure_thread_cap() {
    let Ok(raw) = std::env::var("COPULA_RISK_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n >= 1 => {
            match rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                Ok(()) => info!("parallelism capped at {n} threads"),
                Err(e) => warn!("thread cap not applied: {e}"),
            }
        }
        _ => warn!("ignoring COPULA_RISK_THREADS={raw:?}: expected a positive integer"),
    }
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Marginal {
            kind,
            source,
            output,
            t,
        } => cmd_marginal(kind, &source, &output, t),
        Command::Joint { source, output, t } => cmd_joint(&source, &output, t),
        Command::Dynamic {
            source,
            output,
            t,
            t_cut,
        } => cmd_dynamic(&source, &output, t, t_cut),
        Command::Sweep {
            field,
            values,
            source,
            output,
        } => cmd_sweep(&field, &values, &source, &output),
        Command::Reproduce { table_id, output } => cmd_reproduce(&table_id, &output),
        Command::Verify { check } => match check {
            VerifyCheck::Mc {
                source,
                output,
                n,
                seed,
            } => cmd_verify_mc(&source, &output, n, seed),
            VerifyCheck::ClosedForm { source } => cmd_verify_closed_form(&source),
        },
        Command::Bench { source, seed, out } => cmd_bench(&source, seed, out.as_deref()),
    }
}

impl SourceArgs {
    /// Load the scenario from --config, --preset, or the given default.
    fn resolve(&self, default_preset: &str) -> CliResult<(JointScenario, Option<DynamicParams>)> {
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            let cfg: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            if let Some(d) = &cfg.dynamic {
                d.validate()?;
            }
            let scenario = cfg.to_scenario()?;
            Ok((scenario, cfg.dynamic))
        } else {
            let name = self.preset.as_deref().unwrap_or(default_preset);
            let p = preset(name)?;
            info!("preset {}: {}", p.name, p.description);
            Ok((p.scenario, p.dynamic))
        }
    }
}

fn cmd_marginal(
    kind: MarginalKind,
    source: &SourceArgs,
    output: &OutputArgs,
    t: Option<f64>,
) -> CliResult<()> {
    let (scenario, _) = source.resolve("example1")?;
    if let Some(t) = t {
        let value = match kind {
            MarginalKind::Cyber => scenario.cyber.cdf(t)?,
            MarginalKind::Safety => scenario.safety.cdf(t)?,
        };
        println!("{}", format_probability(value));
        return Ok(());
    }
    let curve = match kind {
        MarginalKind::Cyber => {
            curve_from_cdf("cyber marginal", &scenario.grid, |t| scenario.cyber.cdf(t))?
        }
        MarginalKind::Safety => {
            curve_from_cdf("safety marginal", &scenario.grid, |t| scenario.safety.cdf(t))?
        }
    };
    write_or_print(&curve_text(&curve, output.format)?, output.out.as_deref())
}

fn cmd_joint(source: &SourceArgs, output: &OutputArgs, t: Option<f64>) -> CliResult<()> {
    let (scenario, _) = source.resolve("example1")?;
    if let Some(t) = t {
        println!("{}", format_probability(scenario.joint_failure_prob(t)?));
        return Ok(());
    }
    let curve = scenario.joint_curve()?;
    write_or_print(&curve_text(&curve, output.format)?, output.out.as_deref())
}

fn cmd_dynamic(
    source: &SourceArgs,
    output: &OutputArgs,
    t: Option<f64>,
    t_cut: Option<f64>,
) -> CliResult<()> {
    let (scenario, dynamic) = source.resolve("normal-dyn")?;
    let mut params = dynamic.ok_or_else(|| {
        Failure::Config(
            "the scenario carries no coupling parameters; pick a preset ending in \
             -dyn or add a \"dynamic\" block to the configuration"
                .to_string(),
        )
    })?;
    if let Some(cut) = t_cut {
        params.t_cut = cut;
        params.validate()?;
    }
    if let Some(t) = t {
        println!("sfdf {}", format_probability(sfdf(t, &scenario, &params)?));
        println!("sfdc {}", format_probability(sfdc(t, &scenario, &params)?));
        return Ok(());
    }
    let security = sfdf_curve(&scenario, &params)?;
    let safety = sfdc_curve(&scenario, &params)?;
    for dc in [&security, &safety] {
        if dc.clamp_events > 0 {
            warn!(
                "{}: {} evaluations clamped into [0, 1]",
                dc.curve.label, dc.clamp_events
            );
        }
    }
    match &output.out {
        Some(base) => {
            write_dynamic(&security, base, "sfdf", output.format)?;
            write_dynamic(&safety, base, "sfdc", output.format)
        }
        None => match output.format {
            Format::Json => write_or_print(&to_json(&[&security, &safety])?, None),
            Format::Csv => {
                print!("# {}\n{}", security.curve.label, security.curve.to_csv());
                print!("# {}\n{}", safety.curve.label, safety.curve.to_csv());
                Ok(())
            }
        },
    }
}

fn write_dynamic(
    dc: &DynamicCurve,
    base: &Path,
    suffix: &str,
    format: Format,
) -> CliResult<()> {
    let text = match format {
        Format::Csv => dc.curve.to_csv(),
        Format::Json => to_json(dc)?,
    };
    let path = suffixed_path(base, suffix);
    write_or_print(&text, Some(&path))
}

fn cmd_sweep(
    field: &str,
    values: &[f64],
    source: &SourceArgs,
    output: &OutputArgs,
) -> CliResult<()> {
    let (scenario, _) = source.resolve("results200")?;
    let curves = if field == "t_patch" {
        scenario.sweep_patch_time(values)?
    } else if field == scenario.copula.dependence_parameter_name() {
        scenario.sweep_dependence(values)?
    } else {
        return Err(Failure::Config(format!(
            "cannot sweep {field:?}: the {} copula's dependence parameter is {:?}, \
             and \"t_patch\" is always accepted",
            scenario.copula.family_name(),
            scenario.copula.dependence_parameter_name()
        )));
    };
    emit_curves(&curves, output)
}

fn cmd_reproduce(table_id: &str, output: &OutputArgs) -> CliResult<()> {
    let reports: Vec<TableReport> = if table_id == "all" {
        reproduce_all()?
    } else {
        vec![reproduce(table_id)?]
    };
    let text = match output.format {
        Format::Json if reports.len() == 1 => to_json(&reports[0])?,
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            let mut text = String::new();
            for r in &reports {
                text.push_str(&r.to_string());
                text.push('\n');
            }
            text
        }
    };
    write_or_print(&text, output.out.as_deref())
}

/// One comparison row of the Monte Carlo verification report.
#[derive(Serialize)]
struct McComparisonRow {
    t: f64,
    mc: f64,
    stderr: f64,
    analytic: f64,
    abs_diff: f64,
    z: f64,
}

#[derive(Serialize)]
struct McVerifyReport {
    label: String,
    n_samples: usize,
    seed: u64,
    censored_cyber: usize,
    rows: Vec<McComparisonRow>,
}

fn cmd_verify_mc(source: &SourceArgs, output: &OutputArgs, n: usize, seed: u64) -> CliResult<()> {
    let (scenario, _) = source.resolve("example1")?;
    let cfg = McConfig {
        n_samples: n,
        seed,
        times: vec![50.0, 100.0, 150.0, 200.0],
    };
    let report = mc_joint_cdf(&scenario, &cfg)?;
    let stderr = report.curve.stderr.as_ref().expect("mc curve carries stderr");
    let mut rows = Vec::with_capacity(cfg.times.len());
    for (i, &t) in report.curve.times.iter().enumerate() {
        let analytic = scenario.joint_failure_prob(t)?;
        let mc = report.curve.values[i];
        let abs_diff = (mc - analytic).abs();
        let z = if abs_diff == 0.0 {
            0.0
        } else {
            abs_diff / stderr[i].max(f64::MIN_POSITIVE)
        };
        rows.push(McComparisonRow {
            t,
            mc,
            stderr: stderr[i],
            analytic,
            abs_diff,
            z,
        });
    }
    let full = McVerifyReport {
        label: report.curve.label.clone(),
        n_samples: report.n_samples,
        seed: report.seed,
        censored_cyber: report.censored_cyber,
        rows,
    };
    let text = match output.format {
        Format::Json => to_json(&full)?,
        Format::Csv => {
            let mut text = format!(
                "{}: n={} seed={} censored={}\n",
                full.label, full.n_samples, full.seed, full.censored_cyber
            );
            for r in &full.rows {
                text.push_str(&format!(
                    "t={} mc={} stderr={:.3e} analytic={} |z|={:.2}\n",
                    r.t,
                    format_probability(r.mc),
                    r.stderr,
                    format_probability(r.analytic),
                    r.z
                ));
            }
            text
        }
    };
    write_or_print(&text, output.out.as_deref())
}

fn cmd_verify_closed_form(source: &SourceArgs) -> CliResult<()> {
    let (scenario, _) = source.resolve("example1")?;
    let grid = default_grid();
    let deviation = closed_form_equivalence(&scenario.cyber, &grid)?;
    println!(
        "max |closed form - quadrature| over [0, 200] ({} points): {deviation:.3e}",
        grid.len()
    );
    if deviation <= CLOSED_FORM_BOUND {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "deviation {deviation:.3e} exceeds the documented bound {CLOSED_FORM_BOUND:.0e}"
        )))
    }
}

fn cmd_bench(source: &SourceArgs, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let (scenario, _) = source.resolve("example1")?;
    let report = run_benchmark(&scenario.cyber, seed)?;
    info!(
        "closed form {:.3e} s/eval, quadrature {:.3e} s/eval, speed ratio {:.1}",
        report.mean_time_closed, report.mean_time_quadrature, report.speed_ratio
    );
    write_or_print(&to_json(&report)?, out)
}

fn curve_text(curve: &ProbabilityCurve, format: Format) -> CliResult<String> {
    match format {
        Format::Csv => Ok(curve.to_csv()),
        Format::Json => to_json(curve),
    }
}

fn emit_curves(curves: &[ProbabilityCurve], output: &OutputArgs) -> CliResult<()> {
    match &output.out {
        Some(base) => {
            for curve in curves {
                let path = suffixed_path(base, &label_slug(&curve.label));
                write_or_print(&curve_text(curve, output.format)?, Some(&path))?;
                info!("wrote {}", path.display());
            }
            Ok(())
        }
        None => match output.format {
            Format::Json => write_or_print(&to_json(&curves)?, None),
            Format::Csv => {
                for curve in curves {
                    print!("# {}\n{}", curve.label, curve.to_csv());
                }
                Ok(())
            }
        },
    }
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::Numeric(format!("serialization failed: {e}")))
}

fn write_or_print(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Insert a suffix before the extension: `out.csv` + `sfdf` -> `out-sfdf.csv`.
fn suffixed_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("out");
    let name = match path.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}-{suffix}.{ext}"),
        None => format!("{stem}-{suffix}"),
    };
    path.with_file_name(name)
}

/// Reduce a curve label to a filename-safe slug.
fn label_slug(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '-'
            }
        })
        .collect()
}

/// Fixed-point for readable magnitudes, scientific for tiny ones.
fn format_probability(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:.6e}")
    } else {
        format!("{v:.6}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_insertion_preserves_extension() {
        assert_eq!(
            suffixed_path(Path::new("runs/out.csv"), "sfdf"),
            PathBuf::from("runs/out-sfdf.csv")
        );
        assert_eq!(
            suffixed_path(Path::new("report"), "t_patch-24"),
            PathBuf::from("report-t_patch-24")
        );
    }

    #[test]
    fn slugs_are_filename_safe() {
        assert_eq!(label_slug("normal rho=0.65"), "normal-rho-0.65");
        assert_eq!(label_slug("t_patch=24"), "t_patch-24");
    }

    #[test]
    fn probability_formatting_switches_to_scientific() {
        assert_eq!(format_probability(0.093727), "0.093727");
        assert_eq!(format_probability(0.0), "0.000000");
        assert_eq!(format_probability(4.341e-9), "4.341000e-9");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
