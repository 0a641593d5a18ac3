//! Command-line front end: closed-form evaluation, verification runs, and
//! Monte Carlo simulation, with reproducible structured output.
//!
//! Results go to stdout (or `--out`) as canonical JSON: object keys sorted,
//! floats printed with 17 significant digits, so identical invocations give
//! byte-identical bytes. A run manifest with timings goes to stderr, which
//! keeps the wall-clock noise out of the reproducible stream.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use msle_core::analysis::{decay_slope, expected_slope, DecayFamily, DecayMode};
use msle_core::combinatorics::{incidence_matrix, inverse_matrix};
use msle_core::loewner::{level_line_terminal, zalpha_driven_curve, McConfig};
use msle_core::partition::{
    gff_symmetric, ising_symmetric, lerw_symmetric, pure_partition_k4, pure_partition_n2,
};
use msle_core::probabilities::{connection_distribution, marginal_probability};
use msle_core::suite::{self, CheckResult};
use msle_core::{Configuration, Error, LinkPattern, SleParams};

#[derive(Parser)]
#[command(name = "msle", version, about = "Multiple-SLE partition functions, \
connection probabilities, and Monte Carlo validation")]
struct Cli {
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the link patterns on 2N points in canonical order.
    Patterns {
        /// Number of links N.
        #[arg(long)]
        n: usize,
    },
    /// The change-of-basis matrix M (or its inverse) in canonical order.
    Matrix {
        /// Number of links N.
        #[arg(long)]
        n: usize,
        /// Emit the inverse matrix instead of M.
        #[arg(long)]
        inverse: bool,
    },
    /// Evaluate a pure partition function Z_alpha.
    Zalpha {
        /// SLE parameter; any N for kappa = 4, N <= 2 otherwise.
        #[arg(long, default_value_t = 4.0)]
        kappa: f64,
        /// Link pattern, e.g. "1-4,2-3" or "(())".
        #[arg(long)]
        pattern: LinkPattern,
        /// Comma-separated marked points, strictly increasing.
        #[arg(long, value_parser = parse_points)]
        points: Points,
    },
    /// Evaluate the symmetric partition function at kappa = 2, 3, or 4.
    Symmetric {
        #[arg(long)]
        kappa: f64,
        #[arg(long, value_parser = parse_points)]
        points: Points,
    },
    /// Connection probabilities of all patterns at a configuration.
    Probs {
        #[arg(long, value_parser = parse_points)]
        points: Points,
        /// Emit CSV (pattern, probability) instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Probability that the level line from x_a terminates at x_b.
    Marginal {
        #[arg(long, value_parser = parse_points)]
        points: Points,
        /// Starting index a (odd).
        #[arg(long)]
        from: usize,
        /// Terminal index b (even).
        #[arg(long)]
        to: usize,
    },
    /// Run one family of verification checks; nonzero exit on violation.
    Verify {
        #[command(subcommand)]
        family: VerifyFamily,
    },
    /// Monte Carlo simulation of Loewner chains.
    Mc {
        #[command(subcommand)]
        kind: McCommand,
    },
    /// Run the verification suite; nonzero exit on any failure.
    Suite {
        #[command(subcommand)]
        level: SuiteLevel,
    },
}

#[derive(Subcommand)]
enum VerifyFamily {
    /// Finite-difference residuals of the PDE system.
    Pde,
    /// Covariance under random Mobius maps.
    Cov,
    /// Fused-pair limits against reduced patterns.
    Asy,
    /// Duality of the collapse functionals.
    Dual,
    /// Power-law decay exponents.
    Decay,
}

#[derive(Subcommand)]
enum McCommand {
    /// Level-line terminal histogram against the exact marginals.
    Marginal {
        #[arg(long, value_parser = parse_points)]
        points: Points,
        #[command(flatten)]
        mc: McArgs,
        /// Emit CSV (endpoint, count, frequency, exact) instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Chain driven by Z_alpha; tallies the terminal marked point.
    Drive {
        /// Link pattern supplying the drift.
        #[arg(long)]
        pattern: LinkPattern,
        /// Seed index a of the curve.
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, value_parser = parse_points)]
        points: Points,
        #[command(flatten)]
        mc: McArgs,
    },
}

#[derive(Args)]
struct McArgs {
    /// Number of independent samples.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// RNG seed; falls back to MSLE_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Base time step of the adaptive integrator.
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    /// Stopping threshold on the terminal detector.
    #[arg(long, default_value_t = 1e-3)]
    delta_stop: f64,
    /// Worker threads; 0 means all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl McArgs {
    fn config(&self) -> McConfig {
        McConfig {
            dt_base: self.dt,
            delta_stop: self.delta_stop,
            samples: self.samples,
            seed: self.seed.unwrap_or_else(seed_fallback),
            workers: self.workers,
            ..McConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum SuiteLevel {
    /// Exact and closed-form checks; finishes in well under a minute.
    Fast,
    /// Everything, including the Monte Carlo runs; takes minutes.
    Full,
}

fn seed_fallback() -> u64 {
    std::env::var("MSLE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(42)
}

#[derive(Clone)]
struct Points(Vec<f64>);

fn parse_points(s: &str) -> Result<Points, String> {
    let pts = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(Points(pts))
}

impl Points {
    fn configuration(&self) -> Result<Configuration, Failure> {
        Configuration::new(self.0.clone()).map_err(Failure::from)
    }
}

/// A failed run, classified by the exit code it maps to.
enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// A structural cap was exceeded: exit 3.
    Capacity(String),
    /// A numerical check or computation failed: exit 1.
    Tolerance(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapacityExceeded { .. } => Failure::Capacity(e.to_string()),
            Error::InvalidPattern(_)
            | Error::InvalidConfiguration(_)
            | Error::SizeMismatch { .. }
            | Error::ParityViolation { .. }
            | Error::KappaOutOfRange(_) => Failure::Usage(e.to_string()),
            _ => Failure::Tolerance(e.to_string()),
        }
    }
}

/// Serialize with sorted object keys and floats at 17 significant digits.
fn canonical_json(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| !n.is_i64() && !n.is_u64()) {
                let _ = write!(out, "{f:.16e}");
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => {
            let _ = write!(out, "{}", Value::String(s.clone()));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                canonical_json(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            // serde_json's default map is ordered by key, so iteration
            // order is already canonical.
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", Value::String(k.clone()));
                out.push(':');
                canonical_json(item, out);
            }
            out.push('}');
        }
    }
}

fn render(v: &Value) -> String {
    let mut s = String::new();
    canonical_json(v, &mut s);
    s.push('\n');
    s
}

fn check_json(r: &CheckResult) -> Value {
    // Timings stay out of this payload so identical runs stay
    // byte-identical; the stderr manifest carries them.
    json!({
        "id": r.id,
        "name": r.name,
        "tolerance": r.tolerance,
        "passed": r.passed,
        "detail": r.detail,
    })
}

fn checks_payload(results: &[CheckResult]) -> (String, bool) {
    let all_passed = results.iter().all(|r| r.passed);
    let payload = json!({
        "passed": all_passed,
        "checks": results.iter().map(check_json).collect::<Vec<_>>(),
    });
    (render(&payload), all_passed)
}

struct RunOutput {
    stdout: String,
    checks: Vec<CheckResult>,
}

fn run(command: &Command) -> Result<RunOutput, Failure> {
    let mut checks = Vec::new();
    let stdout = match command {
        Command::Patterns { n } => {
            let patterns = LinkPattern::enumerate(*n).map_err(Failure::from)?;
            let items: Vec<Value> = patterns
                .iter()
                .map(|p| {
                    json!({
                        "pattern": p.to_string(),
                        "dyck_heights": p.to_dyck().heights(),
                    })
                })
                .collect();
            render(&json!({ "n": n, "count": items.len(), "patterns": items }))
        }
        Command::Matrix { n, inverse } => {
            let m = if *inverse {
                inverse_matrix(*n)
            } else {
                incidence_matrix(*n)
            }
            .map_err(Failure::from)?;
            let order: Vec<String> = m.order.iter().map(|p| p.to_string()).collect();
            render(&json!({
                "n": n,
                "inverse": inverse,
                "order": order,
                "entries": m.entries,
            }))
        }
        Command::Zalpha {
            kappa,
            pattern,
            points,
        } => {
            let x = points.configuration()?;
            let params = SleParams::new(*kappa).map_err(Failure::from)?;
            let (value, log_value) = if (*kappa - 4.0).abs() < 1e-12 {
                let e = pure_partition_k4(pattern, &x).map_err(Failure::from)?;
                (e.value, e.log_value)
            } else {
                let v = pure_partition_n2(pattern, params, &x).map_err(Failure::from)?;
                (v, v.ln())
            };
            render(&json!({
                "kappa": kappa,
                "pattern": pattern.to_string(),
                "points": points.0,
                "value": value,
                "log_value": log_value,
            }))
        }
        Command::Symmetric { kappa, points } => {
            let x = points.configuration()?;
            let value = if (*kappa - 2.0).abs() < 1e-12 {
                lerw_symmetric(&x).map_err(Failure::from)?
            } else if (*kappa - 3.0).abs() < 1e-12 {
                ising_symmetric(&x).map_err(Failure::from)?
            } else if (*kappa - 4.0).abs() < 1e-12 {
                gff_symmetric(&x)
            } else {
                return Err(Failure::Usage(format!(
                    "no symmetric closed form at kappa = {kappa}; choose 2, 3, or 4"
                )));
            };
            render(&json!({
                "kappa": kappa,
                "points": points.0,
                "value": value,
                "log_value": value.ln(),
            }))
        }
        Command::Probs { points, csv } => {
            let x = points.configuration()?;
            let d = connection_distribution(&x).map_err(Failure::from)?;
            let mut ranked: Vec<(String, f64)> = d
                .patterns
                .iter()
                .map(|p| p.to_string())
                .zip(d.probs.iter().copied())
                .collect();
            ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            if *csv {
                let mut out = String::from("pattern,probability\n");
                for (p, q) in &ranked {
                    let _ = writeln!(out, "{p},{q:.16e}");
                }
                out
            } else {
                let mut probs = Map::new();
                for (p, q) in &ranked {
                    probs.insert(p.clone(), json!(q));
                }
                let order: Vec<&String> = ranked.iter().map(|(p, _)| p).collect();
                render(&json!({
                    "n": d.n,
                    "points": points.0,
                    "probabilities": probs,
                    "by_probability": order,
                }))
            }
        }
        Command::Marginal { points, from, to } => {
            let x = points.configuration()?;
            let p = marginal_probability(&x, *from, *to).map_err(Failure::from)?;
            render(&json!({
                "points": points.0,
                "from": from,
                "to": to,
                "probability": p,
            }))
        }
        Command::Verify { family } => {
            let result = match family {
                VerifyFamily::Pde => suite::check_pde_residuals(),
                VerifyFamily::Cov => suite::check_covariance(),
                VerifyFamily::Asy => suite::check_asymptotics(),
                VerifyFamily::Dual => suite::check_dual_basis(),
                VerifyFamily::Decay => decay_report(),
            };
            checks.push(result);
            checks_payload(&checks).0
        }
        Command::Mc { kind } => match kind {
            McCommand::Marginal { points, mc, csv } => {
                let x = points.configuration()?;
                let cfg = mc.config();
                let hist = level_line_terminal(&x, &cfg).map_err(Failure::from)?;
                let total = hist.total() as f64;
                let mut rows = Vec::new();
                for e in hist.endpoints() {
                    let exact = marginal_probability(&x, 1, e).map_err(Failure::from)?;
                    let sigma = (exact * (1.0 - exact) / total).sqrt();
                    rows.push((e, hist.count(e), hist.frequency(e), exact, sigma));
                }
                if *csv {
                    let mut out = String::from("endpoint,count,frequency,exact\n");
                    for (e, c, f, exact, _) in &rows {
                        let _ = writeln!(out, "{e},{c},{f:.16e},{exact:.16e}");
                    }
                    out
                } else {
                    let endpoints: Vec<Value> = rows
                        .iter()
                        .map(|(e, c, f, exact, sigma)| {
                            json!({
                                "endpoint": e,
                                "count": c,
                                "frequency": f,
                                "exact": exact,
                                "z_score": (f - exact) / sigma,
                            })
                        })
                        .collect();
                    render(&json!({
                        "points": points.0,
                        "samples": cfg.samples,
                        "seed": cfg.seed,
                        "endpoints": endpoints,
                        "discarded": hist.discarded(),
                        "discard_fraction": hist.discard_fraction(),
                    }))
                }
            }
            McCommand::Drive {
                pattern,
                from,
                points,
                mc,
            } => {
                let x = points.configuration()?;
                let cfg = mc.config();
                let report = zalpha_driven_curve(pattern, *from, &x, &cfg)
                    .map_err(Failure::from)?;
                render(&json!({
                    "pattern": pattern.to_string(),
                    "from": from,
                    "target": report.target,
                    "points": points.0,
                    "samples": cfg.samples,
                    "seed": cfg.seed,
                    "counts": report.counts,
                    "discarded": report.discarded,
                    "paired_fraction": report.paired_fraction(),
                }))
            }
        },
        Command::Suite { level } => {
            checks = match level {
                SuiteLevel::Fast => suite::fast_checks(),
                SuiteLevel::Full => suite::full_checks(),
            };
            checks_payload(&checks).0
        }
    };
    Ok(RunOutput { stdout, checks })
}

/// The decay check plus the fitted slopes themselves, for the report.
fn decay_report() -> CheckResult {
    let mut r = suite::check_decay_slopes();
    let mut table = String::new();
    for n in 1..=5 {
        for family in [DecayFamily::RainbowZ, DecayFamily::GffZ] {
            for mode in [DecayMode::OneEnd, DecayMode::BothEnds] {
                if let Ok(slope) = decay_slope(family, n, mode) {
                    let _ = write!(
                        table,
                        " {family:?}/{mode:?}/N={n}: {slope:.4} (expect {})",
                        expected_slope(family, n, mode)
                    );
                }
            }
        }
    }
    r.detail.push_str(&format!(";{table}"));
    r
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();

    let (code, checks) = match run(&cli.command) {
        Ok(output) => {
            let code = if output.checks.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &output.stdout)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{}", output.stdout);
                    Ok(())
                }
            };
            match written {
                Ok(()) => (code, output.checks),
                Err(msg) => {
                    eprintln!("error: {msg}");
                    (ExitCode::from(1), output.checks)
                }
            }
        }
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Usage(m) => (2, m),
                Failure::Capacity(m) => (3, m),
                Failure::Tolerance(m) => (1, m),
            };
            eprintln!("error: {msg}");
            (ExitCode::from(code), Vec::new())
        }
    };

    let manifest = json!({
        "command": argv.join(" "),
        "version": env!("CARGO_PKG_VERSION"),
        "seed_fallback": seed_fallback(),
        "wall_seconds": t0.elapsed().as_secs_f64(),
        "checks": checks
            .iter()
            .map(|r| {
                json!({
                    "id": r.id,
                    "name": r.name,
                    "tolerance": r.tolerance,
                    "passed": r.passed,
                    "seconds": r.seconds,
                })
            })
            .collect::<Vec<_>>(),
    });
    eprintln!("{manifest}");
    code
}
