//! `motfact`: factor motion polynomials and build linkages from the command
//! line. Reports go to stdout as JSON.
//!
//! Exit codes: 0 on success, 1 on a domain failure (a JSON diagnostic is
//! printed), 2 on usage or parse errors.

mod config;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use motion_factor::io;
use motion_factor::linkage::{
    export, rigidity_check, sample_configuration, spaced_samples, ExportFormat, ExportOptions, Linkage,
};
use motion_factor::poly::{max_real_factor, Param};
use motion_factor::synthesis::{bennett_flip, kempe_linkage_for_curve, synthesize_bennett};
use motion_factor::{
    all_factorizations, factor_bounded_with_multiplier, factor_with_backtracking, is_bounded,
    right_multiply_and_factor, Error, FactorOptions, FactorStatus, FactorizationReport, MotionPolynomial,
};

use config::{Config, CONFIG_ENV};

#[derive(Parser, Debug)]
#[command(
    name = "motfact",
    version,
    about = "Motion polynomial factorization and linkage synthesis"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Numerical tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Node budget of the backtracking search.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Number of sampled parameters for trajectories and exports.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Random members tried per solution family.
    #[arg(long, global = true)]
    family_samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for output files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Svg,
    Csv,
}

impl Format {
    fn export_format(self) -> ExportFormat {
        match self {
            Format::Json => ExportFormat::Json,
            Format::Svg => ExportFormat::Svg,
            Format::Csv => ExportFormat::Csv,
        }
    }

    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Svg => "svg",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a dual quaternion polynomial and report its norm and real factors.
    Validate { input: PathBuf },
    /// Factor a motion polynomial into linear factors.
    Factor {
        input: PathBuf,
        /// All factorizations of a generic motion.
        #[arg(long, conflicts_with_all = ["multiplier_deg", "right_h"])]
        all: bool,
        /// Search for a real multiplier of at most this degree.
        #[arg(long, conflicts_with = "right_h")]
        multiplier_deg: Option<usize>,
        /// Factor C*H for the monic quaternion polynomial H in this file.
        #[arg(long = "right-H")]
        right_h: Option<PathBuf>,
    },
    /// Bennett linkage through three poses.
    Synth3 { poses: PathBuf },
    /// Bennett flip of `{"m_prev": [8], "h": [8]}`.
    Flip { input: PathBuf },
    /// Revolute linkage drawing a bounded rational curve.
    Curve {
        input: PathBuf,
        /// First extra joint: an 8-tuple given inline or as a file.
        #[arg(long)]
        m0: Option<String>,
        /// Also write the linkage in this format.
        #[arg(long, value_enum)]
        export: Option<Format>,
    },
    /// Configurations of a linkage and a rigidity report.
    Sample {
        linkage: PathBuf,
        /// Parameter values (numbers or `inf`); defaults to the sample range.
        #[arg(long = "t", allow_hyphen_values = true, value_delimiter = ',')]
        t: Vec<String>,
    },
    /// Write a linkage as JSON, SVG or CSV.
    Export {
        linkage: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
    },
}

/// Failure of a command.
enum Failure {
    Usage(String),
    Domain(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(format!("parse error: {m}")),
            other => Failure::Domain(error_json(&other)),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("Error")
        .to_string()
}

fn error_json(e: &Error) -> Value {
    json!({"status": "error", "error": error_kind(e), "message": e.to_string()})
}

struct Ctx {
    config: Config,
    out: Option<PathBuf>,
}

impl Ctx {
    fn tol(&self) -> f64 {
        self.config.tolerance
    }

    fn factor_options(&self) -> FactorOptions {
        FactorOptions {
            tol: self.config.tolerance,
            budget: self.config.backtrack_budget,
            family_samples: self.config.family_samples,
            seed: self.config.seed,
            ..FactorOptions::default()
        }
    }

    fn samples(&self, l: &Linkage) -> Vec<f64> {
        let [lo, hi] = self.config.sample_range;
        spaced_samples(l, lo, hi, self.config.sample_count)
    }

    fn write(&self, name: &str, contents: &str) -> Result<Option<String>, Failure> {
        let Some(dir) = &self.out else {
            return Ok(None);
        };
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
        Ok(Some(path.display().to_string()))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn build_config(g: &Global) -> Result<Ctx, Failure> {
    let mut config = match std::env::var_os(CONFIG_ENV) {
        Some(p) if !p.is_empty() => Config::from_file(Path::new(&p)).map_err(Failure::Usage)?,
        _ => Config::default(),
    };
    if let Some(t) = g.tol {
        config.tolerance = t;
    }
    if let Some(b) = g.budget {
        config.backtrack_budget = b;
    }
    if let Some(s) = g.samples {
        config.sample_count = s;
    }
    if let Some(s) = g.family_samples {
        config.family_samples = s;
    }
    if let Some(s) = g.seed {
        config.seed = s;
    }
    config.validate().map_err(Failure::Usage)?;
    Ok(Ctx {
        config,
        out: g.out.clone(),
    })
}

fn cmd_validate(ctx: &Ctx, input: &Path) -> Outcome {
    let c = io::parse_dqpoly(&read(input)?)?;
    let m = match motion_factor::poly::validate_motion(&c, ctx.tol()) {
        Ok(m) => m,
        Err(e @ Error::Parse(_)) => return Err(e.into()),
        Err(e) => {
            let mut v = error_json(&e);
            v["valid"] = json!(false);
            return Err(Failure::Domain(v));
        }
    };
    let g = max_real_factor(&m.poly().primal());
    Ok(json!({
        "valid": true,
        "degree": m.degree(),
        "monic": m.is_monic(),
        "norm": m.norm(),
        "bounded": is_bounded(&m),
        "primal_real_factor": g,
        "primal_real_factor_text": g.pretty(),
        "generic": g.degree() == Some(0),
    }))
}

fn report_outcome(report: FactorizationReport) -> Outcome {
    let v = serde_json::to_value(&report).expect("report serializes");
    if report.status == FactorStatus::Success {
        Ok(v)
    } else {
        Err(Failure::Domain(v))
    }
}

fn monic(m: MotionPolynomial, notes: &mut Vec<String>) -> Result<MotionPolynomial, Failure> {
    if m.is_monic() {
        return Ok(m);
    }
    notes.push("input was made monic by left division by its leading coefficient".into());
    Ok(m.to_monic()?)
}

fn cmd_factor(ctx: &Ctx, input: &Path, all: bool, multiplier_deg: Option<usize>, right_h: Option<&Path>) -> Outcome {
    let m = io::parse_motion(&read(input)?, ctx.tol())?;
    let mut notes = Vec::new();
    let m = monic(m, &mut notes)?;
    let opts = ctx.factor_options();
    let mut report = if all {
        let fs = all_factorizations(&m, ctx.tol())?;
        FactorizationReport {
            status: if fs.is_empty() {
                FactorStatus::NoFactorization
            } else {
                FactorStatus::Success
            },
            multiplier: motion_factor::poly::RealPoly::one(),
            factorizations: fs,
            diagnostics: Vec::new(),
        }
    } else if let Some(d) = multiplier_deg {
        factor_bounded_with_multiplier(&m, Some(d), &opts)?
    } else if let Some(path) = right_h {
        let h = io::parse_quat_poly(&read(path)?)?;
        right_multiply_and_factor(&m, &h, &opts)?
    } else {
        factor_with_backtracking(&m, &opts)?
    };
    notes.append(&mut report.diagnostics);
    report.diagnostics = notes;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    ctx.write("report.json", &text)?;
    report_outcome(report)
}

fn cmd_synth3(ctx: &Ctx, poses: &Path) -> Outcome {
    let [p0, p1, p2] = io::parse_poses(&read(poses)?, ctx.tol())?;
    let b = synthesize_bennett(&p0, &p1, &p2, ctx.tol())?;
    let l = b.linkage(ctx.tol())?;
    let text = serde_json::to_string_pretty(&l).expect("linkage serializes");
    ctx.write("linkage.json", &text)?;
    ctx.write(
        "coupler.json",
        &serde_json::to_string_pretty(b.coupler_motion.poly()).expect("motion serializes"),
    )?;
    Ok(serde_json::to_value(&l).expect("linkage serializes"))
}

fn cmd_flip(ctx: &Ctx, input: &Path) -> Outcome {
    let (m_prev, h) = io::parse_flip(&read(input)?)?;
    let r = bennett_flip(&m_prev, &h, ctx.tol())?;
    Ok(serde_json::to_value(r).expect("flip serializes"))
}

fn parse_m0(arg: &str) -> Result<motion_factor::DualQuaternion, Failure> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        read(Path::new(arg))?
    };
    Ok(io::parse_dual_quaternion(&text)?)
}

fn cmd_curve(ctx: &Ctx, input: &Path, m0: Option<&str>, format: Option<Format>) -> Outcome {
    let (v, w) = io::parse_curve(&read(input)?)?;
    let m0 = m0.map(parse_m0).transpose()?;
    let k = kempe_linkage_for_curve(&v, &w, m0, &ctx.factor_options())?;
    let mut files = Vec::new();
    let linkage_text = serde_json::to_string_pretty(&k.linkage).expect("linkage serializes");
    files.extend(ctx.write("linkage.json", &linkage_text)?);
    if let Some(f) = format {
        let opts = ExportOptions {
            samples: ctx.samples(&k.linkage),
        };
        let body = export(&k.linkage, f.export_format(), &opts)?;
        if ctx.out.is_none() {
            return Err(Failure::Usage("--export needs --out DIR".into()));
        }
        files.extend(ctx.write(&format!("tracer.{}", f.ext()), &body)?);
    }
    Ok(json!({
        "multiplier": k.multiplier,
        "multiplier_text": k.multiplier.pretty(),
        "factorization": k.factorization,
        "cells": k.cells,
        "links": k.linkage.links.len(),
        "joints": k.linkage.joints.len(),
        "linkage": k.linkage,
        "diagnostics": k.diagnostics,
        "files": files,
    }))
}

fn parse_param(s: &str) -> Result<Param, Failure> {
    match s.trim() {
        "inf" | "infinity" => Ok(Param::Infinity),
        x => x
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite())
            .map(Param::Finite)
            .ok_or_else(|| Failure::Usage(format!("bad parameter value {x:?}"))),
    }
}

fn cmd_sample(ctx: &Ctx, path: &Path, ts: &[String]) -> Outcome {
    let l = io::parse_linkage(&read(path)?, ctx.tol())?;
    let params: Vec<Param> = if ts.is_empty() {
        ctx.samples(&l).into_iter().map(Param::Finite).collect()
    } else {
        ts.iter().map(|s| parse_param(s)).collect::<Result<_, _>>()?
    };
    let samples = params
        .iter()
        .map(|&t| sample_configuration(&l, t))
        .collect::<Result<Vec<_>, _>>()?;
    let finite: Vec<f64> = params
        .iter()
        .filter_map(|p| match p {
            Param::Finite(t) => Some(*t),
            Param::Infinity => None,
        })
        .collect();
    let rigidity = rigidity_check(&l, &finite)?;
    let v = json!({"samples": samples, "rigidity": rigidity});
    ctx.write(
        "samples.json",
        &serde_json::to_string_pretty(&v).expect("samples serialize"),
    )?;
    Ok(v)
}

fn cmd_export(ctx: &Ctx, path: &Path, format: Format) -> Result<String, Failure> {
    let l = io::parse_linkage(&read(path)?, ctx.tol())?;
    let opts = ExportOptions {
        samples: ctx.samples(&l),
    };
    let body = export(&l, format.export_format(), &opts)?;
    match ctx.write(&format!("linkage.{}", format.ext()), &body)? {
        Some(p) => Ok(serde_json::to_string_pretty(&json!({"files": [p]})).expect("json")),
        None => Ok(body),
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let ctx = build_config(&cli.global)?;
    let v = match &cli.command {
        Command::Validate { input } => cmd_validate(&ctx, input),
        Command::Factor {
            input,
            all,
            multiplier_deg,
            right_h,
        } => cmd_factor(&ctx, input, *all, *multiplier_deg, right_h.as_deref()),
        Command::Synth3 { poses } => cmd_synth3(&ctx, poses),
        Command::Flip { input } => cmd_flip(&ctx, input),
        Command::Curve { input, m0, export } => cmd_curve(&ctx, input, m0.as_deref(), *export),
        Command::Sample { linkage, t } => cmd_sample(&ctx, linkage, t),
        Command::Export { linkage, format } => return cmd_export(&ctx, linkage, *format),
    }?;
    Ok(serde_json::to_string_pretty(&v).expect("json"))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(s) => {
            emit(&s);
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(v)) => {
            emit(&serde_json::to_string_pretty(&v).expect("json"));
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("motfact: {m}");
            ExitCode::from(2)
        }
    }
}
