//! Command-line front end: runs one computation and writes a JSON or CSV
//! report to stdout; diagnostics go to stderr.
//!
//! Exit status: 0 on success, 1 on a numeric or consistency failure, 2 on a
//! usage error (unknown flag, out-of-range option).

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use p1torsion::acceptance::run_all;
use p1torsion::chowring::check_grr_cancellation;
use p1torsion::numerics::format_real;
use p1torsion::scurrent::{s_pairing_integral, s_pairing_series_symbolic, s_pairing_series_value, TestProfile};
use p1torsion::torsion::{
    check_bg_consistency, ray_singer_torsion, torsion_group, torsion_infinitesimal, torsion_two_param,
};
use p1torsion::torsionform::{height_p1z, torsion_form};
use p1torsion::{Error, Precision};
use rug::Float;
use serde_json::{json, Map, Value};

/// Version of the JSON layout written by every subcommand.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "p1torsion",
    version,
    about = "Equivariant analytic torsion and torsion forms on P^1-bundles"
)]
struct Cli {
    /// Working precision in decimal digits (at least 20).
    #[arg(long, global = true, env = "P1TORSION_PRECISION", default_value_t = 50)]
    digits: u32,

    /// Truncation order of power series in t (even).
    #[arg(long, global = true, default_value_t = 40)]
    order: i32,

    /// Absolute tolerance for quadrature and cross-checks.
    #[arg(long, global = true, default_value_t = 1e-20)]
    tolerance: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equivariant torsion of O(ell) on P^1, as a series or at one angle t.
    Torsion {
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        /// Rotation angle, 0 < t < 2*pi.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "series")]
        t: Option<String>,
        /// Emit the exact power series in t.
        #[arg(long)]
        series: bool,
    },
    /// The torsion form class in the cohomology of the base.
    TorsionForm {
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        /// Degree cap D of the base ring (even).
        #[arg(long, default_value_t = 12)]
        degree: u32,
    },
    /// Height of P^1 over Z with respect to O(1).
    Height,
    /// Exact cancellation of the R-genus term against the torsion form.
    GrrCheck {
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        /// Degree cap D of the base ring (even).
        #[arg(long, default_value_t = 12)]
        degree: u32,
    },
    /// The S-current paired with an even polynomial profile.
    Scurrent {
        /// Even polynomial in r, e.g. "r^2" or "3 - r^6/2".
        #[arg(long, allow_hyphen_values = true)]
        profile: String,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Emit the exact value in terms of log t and Gamma'(1).
        #[arg(long)]
        symbolic: bool,
    },
    /// The (e^{sX}, tX)-equivariant torsion through two independent paths.
    TwoParam {
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Runs the full acceptance suite.
    Selftest,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

/// Validated run configuration.
struct RunConfig {
    prec: Precision,
    order: i32,
    tolerance: f64,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        if cli.digits < 20 {
            return Err(Failure::Usage(format!(
                "--digits must be at least 20, got {}",
                cli.digits
            )));
        }
        let prec = Precision::new(cli.digits)?;
        if cli.order < 0 || cli.order % 2 != 0 {
            return Err(Failure::Usage(format!(
                "--order must be a non-negative even integer, got {}",
                cli.order
            )));
        }
        if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
            return Err(Failure::Usage(format!(
                "--tolerance must be positive, got {}",
                cli.tolerance
            )));
        }
        Ok(RunConfig {
            prec,
            order: cli.order,
            tolerance: cli.tolerance,
        })
    }

    fn real(&self, name: &str, text: &str) -> Result<Float, Failure> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| Failure::Usage(format!("--{name}: cannot parse {text:?} as a number: {e}")))?;
        let x = Float::with_val(self.prec.bits(), parsed);
        if !x.is_finite() {
            return Err(Failure::Usage(format!("--{name} must be finite")));
        }
        Ok(x)
    }

    fn fmt(&self, x: &Float) -> String {
        format_real(x, self.prec.digits())
    }
}

fn check_degree(degree: u32) -> Result<(), Failure> {
    if !degree.is_multiple_of(2) {
        return Err(Failure::Usage(format!("--degree must be even, got {degree}")));
    }
    Ok(())
}

/// Computes the report body of one command.
fn execute(cli: &Cli, cfg: &RunConfig) -> Result<(Map<String, Value>, bool), Failure> {
    let mut out = Map::new();
    let mut ok = true;
    match &cli.command {
        Command::Torsion { ell, t, series } => match (t, series) {
            (Some(t), false) => {
                let t = cfg.real("t", t)?;
                let group = torsion_group(*ell, &t, cfg.prec)?;
                let bg = check_bg_consistency(*ell, &t, cfg.order.max(4), cfg.tolerance, cfg.prec)?;
                out.insert("ell".into(), json!(ell));
                out.insert("t".into(), json!(cfg.fmt(&t)));
                out.insert("group_torsion".into(), json!(cfg.fmt(&group)));
                out.insert("value".into(), json!(cfg.fmt(&bg.lhs)));
                out.insert("series_value".into(), json!(cfg.fmt(&bg.series_value)));
                out.insert("series_residual".into(), json!(format!("{:e}", bg.residual.to_f64())));
            }
            (None, _) => {
                let order = cfg.order.max(4);
                let r = torsion_infinitesimal(*ell, order)?;
                let s = r.series().expect("series payload");
                out.insert("ell".into(), json!(ell));
                out.insert("constant_term".into(), json!(s.coeff(0)?.to_string()));
                out.insert("ray_singer".into(), json!(ray_singer_torsion(*ell)?.to_string()));
                out.insert("series".into(), s.to_json(Some(cfg.prec)));
            }
            (Some(_), true) => unreachable!("clap rejects --t together with --series"),
        },
        Command::TorsionForm { ell, degree } => {
            check_degree(*degree)?;
            let f = torsion_form(*ell, *degree)?;
            if let Value::Object(m) = f.to_json() {
                out.extend(m);
            }
        }
        Command::Height => {
            let h = height_p1z()?;
            if let Value::Object(m) = h.to_json() {
                out.extend(m);
            }
            out.insert("r_term".into(), json!(h.r_term.to_string()));
            out.insert("s_term".into(), json!(h.s_term.to_string()));
        }
        Command::GrrCheck { ell, degree } => {
            check_degree(*degree)?;
            let rep = check_grr_cancellation(*ell, *degree)?;
            ok = rep.passed();
            out.insert("residual".into(), json!(rep.residual.to_string()));
            out.insert("ell".into(), json!(ell));
            out.insert("degree".into(), json!(degree));
            out.insert("offending_degree".into(), json!(rep.offending_degree));
            out.insert("r_term".into(), rep.r_term.to_json());
            out.insert("torsion_part".into(), rep.torsion_part.to_json());
        }
        Command::Scurrent { profile, t, symbolic } => {
            let g = TestProfile::parse(profile)?;
            out.insert("profile".into(), json!(profile));
            if *symbolic {
                out.insert("symbolic".into(), json!(s_pairing_series_symbolic(&g)?.to_string()));
            }
            match t {
                Some(t) => {
                    let t = cfg.real("t", t)?;
                    let series = s_pairing_series_value(&g, &t, cfg.prec)?;
                    let quad = s_pairing_integral(&g, &t, cfg.tolerance, cfg.prec)?;
                    let diff = Float::with_val(cfg.prec.bits(), &series - &quad).abs();
                    out.insert("t".into(), json!(cfg.fmt(&t)));
                    out.insert("series_value".into(), json!(cfg.fmt(&series)));
                    out.insert("quadrature_value".into(), json!(cfg.fmt(&quad)));
                    out.insert("difference".into(), json!(format!("{:e}", diff.to_f64())));
                    ok = diff.to_f64() <= cfg.tolerance;
                }
                None if !*symbolic => return Err(Failure::Usage("scurrent needs --t or --symbolic".into())),
                None => {}
            }
        }
        Command::TwoParam { ell, s, t } => {
            let s = cfg.real("s", s)?;
            let t = cfg.real("t", t)?;
            let r = torsion_two_param(*ell, &s, &t, cfg.tolerance, cfg.prec)?;
            out.insert("ell".into(), json!(ell));
            out.insert("s".into(), json!(cfg.fmt(&s)));
            out.insert("t".into(), json!(cfg.fmt(&t)));
            out.insert("lerch".into(), json!(cfg.fmt(&r.lerch)));
            out.insert("bilateral".into(), json!(cfg.fmt(&r.bilateral)));
            out.insert("difference".into(), json!(format!("{:e}", r.difference.to_f64())));
        }
        Command::Selftest => {
            let outcomes = run_all(cfg.prec);
            for o in &outcomes {
                eprintln!("{}", o.line());
            }
            ok = outcomes.iter().all(|o| o.passed);
            // timings stay on stderr so stdout is deterministic
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({ "id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail }))
                .collect();
            out.insert("passed".into(), json!(ok));
            out.insert("criteria".into(), Value::Array(rows));
        }
    }
    Ok((out, ok))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Torsion { .. } => "torsion",
        Command::TorsionForm { .. } => "torsion-form",
        Command::Height => "height",
        Command::GrrCheck { .. } => "grr-check",
        Command::Scurrent { .. } => "scurrent",
        Command::TwoParam { .. } => "two-param",
        Command::Selftest => "selftest",
    }
}

/// Flattens a JSON value into (path, value) rows.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, rows);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable report"),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", report, &mut rows);
            let mut s = String::from("key,value");
            for (k, v) in rows {
                s.push('\n');
                s.push_str(&csv_field(&k));
                s.push(',');
                s.push_str(&csv_field(&v));
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| {
        let (body, ok) = execute(&cli, &cfg)?;
        let mut report = Map::new();
        report.insert("schema_version".into(), json!(SCHEMA_VERSION));
        report.insert("command".into(), json!(command_name(&cli.command)));
        report.insert("digits".into(), json!(cfg.prec.digits()));
        report.extend(body);
        Ok((Value::Object(report), ok))
    });
    match result {
        Ok((report, ok)) => {
            // a closed pipe downstream is not an error of the computation
            let _ = writeln!(std::io::stdout(), "{}", render(&report, cli.format));
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: the computation completed but its consistency check failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
