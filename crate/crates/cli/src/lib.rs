//! Command implementations behind the `copula-forge` binary.

pub mod config;
pub mod error;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use copula_forge::invariants::{validate_spec, PropertyReport};
use copula_forge::madogram::{
    estimate_madogram, gen_missing_mask, monte_carlo_run, normality_diagnostics, pickands_from_madogram,
    true_madogram, MissingMask, MonteCarloConfig, MIN_DIAGNOSTIC_RECORDS,
};
use copula_forge::stats::moments;
use copula_forge::{apply_margins, sample_unimargin, CopulaSpec, Error, RngStream};

pub use config::RunConfig;
pub use error::CliError;
use output::{fmt_f64, histogram_svg, sample_csv, scatter_svg, table_csv, write_atomic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Sample,
    Madogram,
    Montecarlo,
    Validate,
}

/// Copula sampling and λ-madogram experiments driven by a JSON config.
#[derive(Debug, Parser)]
#[command(name = "copula-forge", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the output path in the config.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write an SVG plot next to the output.
    #[arg(long)]
    pub plot: bool,
}

/// Loads the config, applies command-line overrides and runs the command.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(o) = &cli.output {
        cfg.output = Some(o.clone());
    }
    cfg.plot |= cli.plot;
    match cli.command {
        Command::Sample => cmd_sample(&cfg, out),
        Command::Madogram => cmd_madogram(&cfg, out),
        Command::Montecarlo => cmd_montecarlo(&cfg, out),
        Command::Validate => cmd_validate(&cfg, out),
    }
}

fn output_path(cfg: &RunConfig, default: &str) -> PathBuf {
    cfg.output.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

pub fn cmd_sample(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = cfg.spec()?;
    let q = cfg.quantiles(spec.d())?;
    let u = sample_unimargin(&spec, cfg.n, &mut RngStream::new(cfg.seed))?;
    let x = apply_margins(&u, &q)?;
    let path = output_path(cfg, "sample.csv");
    write_atomic(&path, &sample_csv(&x)?)?;
    if cfg.plot && x.d() >= 2 {
        write_atomic(&sibling(&path, "svg"), scatter_svg(&x, spec.family().name()).as_bytes())?;
    }
    writeln!(out, "wrote {} rows x {} columns to {}", x.n(), x.d(), path.display())?;
    Ok(())
}

fn bivariate(spec: &CopulaSpec, field: &str) -> Result<(), CliError> {
    if spec.d() != 2 {
        return Err(CliError::Config(format!("{field}: madogram needs d = 2, got {}", spec.d())));
    }
    Ok(())
}

fn check_lambda(l: f64, field: &str) -> Result<f64, CliError> {
    if l > 0.0 && l < 1.0 {
        Ok(l)
    } else {
        Err(CliError::Config(format!("{field}: lambda = {l} is outside (0, 1)")))
    }
}

fn mask_for(cfg: &RunConfig, rng: &mut RngStream) -> Result<MissingMask, CliError> {
    match &cfg.missing {
        None => Ok(MissingMask::full(cfg.n)),
        Some(m) => {
            let miss = m.copula.build("missing.copula")?;
            gen_missing_mask(rng, &miss, m.p0, m.p1, cfg.n).map_err(|e| match e {
                Error::Domain(_) | Error::NotImplemented(_) | Error::DimensionUnsupported { .. } => {
                    CliError::invalid("missing", e)
                }
                e => CliError::Run(e),
            })
        }
    }
}

/// Value or `nan` when the closed form is unavailable.
fn optional(r: copula_forge::Result<f64>) -> Result<f64, CliError> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::NotImplemented(_)) => Ok(f64::NAN),
        Err(e) => Err(CliError::Run(e)),
    }
}

pub fn cmd_madogram(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = cfg.spec()?;
    bivariate(&spec, "copula")?;
    let lambdas = match (&cfg.lambdas, cfg.lambda) {
        (Some(ls), _) => ls.clone(),
        (None, Some(l)) => vec![l],
        (None, None) => (1..10).map(|k| k as f64 / 10.0).collect(),
    };
    for &l in &lambdas {
        check_lambda(l, "lambdas")?;
    }
    let mut rng = RngStream::new(cfg.seed);
    let s = sample_unimargin(&spec, cfg.n, &mut rng)?;
    let mask = mask_for(cfg, &mut rng)?;
    let mut rows = Vec::with_capacity(lambdas.len());
    writeln!(out, "lambda  FMado  A_hat  A_true")?;
    for &l in &lambdas {
        let nu = estimate_madogram(&s, &mask, l, cfg.corrected)?;
        let a_hat = pickands_from_madogram(nu, l)?;
        let nu_true = optional(true_madogram(&spec, l))?;
        let a_true = optional(copula_forge::extreme::pickands2(&spec, l))?;
        writeln!(out, "{l:.3}  {nu:.6}  {a_hat:.6}  {a_true:.6}")?;
        rows.push(vec![fmt_f64(l), fmt_f64(nu), fmt_f64(a_hat), fmt_f64(nu_true), fmt_f64(a_true)]);
    }
    let path = output_path(cfg, "madogram.csv");
    write_atomic(&path, &table_csv(&["lambda", "FMado", "A_hat", "nu_true", "A_true"], &rows)?)?;
    Ok(())
}

pub fn cmd_montecarlo(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let target = cfg.spec()?;
    bivariate(&target, "copula")?;
    let lambda = check_lambda(cfg.lambda.unwrap_or(0.5), "lambda")?;
    true_madogram(&target, lambda).map_err(|e| CliError::invalid("copula", e))?;
    let (miss, p0, p1) = match &cfg.missing {
        Some(m) => {
            let spec = m.copula.build("missing.copula")?;
            for (name, p) in [("missing.p0", m.p0), ("missing.p1", m.p1)] {
                if !(p > 0.0 && p <= 1.0) {
                    return Err(CliError::Config(format!("{name}: {p} is outside (0, 1]")));
                }
            }
            copula_forge::copula_cdf(&spec, &[m.p0, m.p1]).map_err(|e| CliError::invalid("missing.copula", e))?;
            (Some(spec), m.p0, m.p1)
        }
        None => (None, 1.0, 1.0),
    };
    let mc = MonteCarloConfig {
        n_iter: cfg.n_iter,
        n_sample: cfg.n,
        target,
        miss,
        p0,
        p1,
        lambda,
        corrected: cfg.corrected,
        seed: cfg.seed,
    };
    let records = monte_carlo_run(&mc)?;
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| vec![fmt_f64(r.fmado), r.n.to_string(), fmt_f64(r.scaled)])
        .collect();
    let path = output_path(cfg, "montecarlo.csv");
    write_atomic(&path, &table_csv(&["FMado", "n", "scaled"], &rows)?)?;

    let scaled: Vec<f64> = records.iter().map(|r| r.scaled).collect();
    let m = moments(&scaled);
    writeln!(out, "iterations: {}", records.len())?;
    writeln!(out, "mean(scaled): {:.6}", m.mean)?;
    writeln!(out, "var(scaled): {:.6}", m.variance)?;
    if scaled.len() >= MIN_DIAGNOSTIC_RECORDS {
        let d = normality_diagnostics(&scaled)?;
        writeln!(out, "skewness: {:.4}  excess kurtosis: {:.4}", d.skewness, d.excess_kurtosis)?;
        let json = serde_json::to_vec_pretty(&d).map_err(|e| CliError::Io(e.to_string()))?;
        let diag = cfg.diagnostics.clone().unwrap_or_else(|| sibling(&path, "json"));
        write_atomic(&diag, &json)?;
        if cfg.plot {
            write_atomic(&sibling(&path, "svg"), histogram_svg(&d.histogram.counts, "scaled").as_bytes())?;
        }
    } else {
        writeln!(out, "diagnostics skipped: fewer than {MIN_DIAGNOSTIC_RECORDS} iterations")?;
    }
    Ok(())
}

/// Prints one line per property; fails when any property fails.
pub fn report_properties(reports: &[PropertyReport], out: &mut dyn Write) -> Result<(), CliError> {
    for r in reports {
        writeln!(
            out,
            "{} {} {}: worst {:e} (tolerance {:e})",
            if r.passed { "PASS" } else { "FAIL" },
            r.subject,
            r.property,
            r.worst,
            r.tolerance
        )?;
    }
    match reports.iter().filter(|r| !r.passed).count() {
        0 => Ok(()),
        k => Err(CliError::PropertiesFailed(k)),
    }
}

pub fn cmd_validate(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = cfg.spec()?;
    let reports = validate_spec(&spec).map_err(|e| CliError::invalid("copula", e))?;
    if let Some(path) = &cfg.output {
        let json = serde_json::to_vec_pretty(&reports).map_err(|e| CliError::Io(e.to_string()))?;
        write_atomic(path, &json)?;
    }
    report_properties(&reports, out)
}
