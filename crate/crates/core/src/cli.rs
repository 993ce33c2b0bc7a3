//! Command-line front end. Every command writes a [`ReportDocument`] (with
//! `--json`) or a short text summary; `--out svg` commands write SVG.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical failure.

use std::io::Read;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::degeneration::{
    classify_region, linear_path, model_family, positivize, rank_check, sweep, trace_sigma,
};
use crate::error::{Error, Result};
use crate::io::document::{read_polynomial, Diagnostics, ErrorInfo, PolynomialDocument, ReportDocument};
use crate::io::svg::{link_svg, sigma_svg};
use crate::io::text::{parse_complex, parse_orbits, serialize_poly};
use crate::linking::{expected_linking, orbit_linking, project_link};
use crate::milnor::{
    chi_covering, chi_paper, measure_fiber_count, regular_base_point, sample_configuration,
};
use crate::mixed_poly::{verify_equivariance, MixedPolynomial, WeightSystem};
use crate::orbit::{defining_polynomial, validate_config, LinkConfiguration, MIN_SEPARATION};
use crate::planar::SolverOptions;
use crate::slice::{signed_count, solve_link};

/// Environment variable selecting the solver preset.
pub const PROFILE_ENV: &str = "MIXLINK_PROFILE";

#[derive(Parser, Debug)]
#[command(name = "mixlink", version, about = "Links of strongly polar weighted homogeneous mixed polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Weights `p,q`.
    #[arg(long, default_value = "2,3")]
    weights: String,
    /// Newton residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Seeding grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the JSON report instead of a summary.
    #[arg(long)]
    json: bool,
    /// Record the wall-clock runtime in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug, Clone)]
struct PolyInput {
    /// Polynomial file (JSON document or text); `-` reads stdin.
    #[arg(long, conflicts_with = "expr")]
    poly: Option<String>,
    /// Polynomial in text form.
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Svg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum EulerMode {
    Paper,
    Covering,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree report and equivariance residual.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Defining polynomial of an oriented orbit configuration.
    Construct {
        #[command(flatten)]
        common: Common,
        /// Orbits as `u:+,u:-` with complex literals `a+bi`.
        #[arg(long, allow_hyphen_values = true)]
        orbits: String,
        /// Radial budget; defaults to the number of negative orbits.
        #[arg(long)]
        s: Option<i64>,
    },
    /// Solves the link of a polynomial.
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: PolyInput,
    },
    /// Traces the degeneration locus.
    Sigma {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
        /// Parameters to classify against the curve.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        classify: Vec<String>,
    },
    /// Sweeps the model family along a straight parameter path.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Euler characteristic of the Milnor fiber.
    Euler {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        r: i64,
        #[arg(long, value_enum, default_value_t = EulerMode::Both)]
        mode: EulerMode,
    },
    /// Milnor fiber points on one orbit.
    FiberCount {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, allow_hyphen_values = true)]
        z1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z2: Option<String>,
    },
    /// Pairwise linking numbers of oriented orbits.
    Linking {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        orbits: String,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Rank of the smoothness matrix of the model family.
    RankCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, default_value = "-3")]
        t: String,
        #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
        radius: f64,
        #[arg(long, allow_hyphen_values = true)]
        z1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z2: Option<String>,
    },
    /// Eliminates oppositely oriented pairs until the link is positive.
    Eliminate {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        orbits: String,
    },
    /// Stereographic projection of a link.
    Project {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        orbits: Option<String>,
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Construct { .. } => "construct",
            Command::Solve { .. } => "solve",
            Command::Sigma { .. } => "sigma",
            Command::Sweep { .. } => "sweep",
            Command::Euler { .. } => "euler",
            Command::FiberCount { .. } => "fiber-count",
            Command::Linking { .. } => "linking",
            Command::RankCheck { .. } => "rank-check",
            Command::Eliminate { .. } => "eliminate",
            Command::Project { .. } => "project",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Analyze { common, .. }
            | Command::Construct { common, .. }
            | Command::Solve { common, .. }
            | Command::Sigma { common, .. }
            | Command::Sweep { common, .. }
            | Command::Euler { common, .. }
            | Command::FiberCount { common, .. }
            | Command::Linking { common, .. }
            | Command::RankCheck { common, .. }
            | Command::Eliminate { common, .. }
            | Command::Project { common, .. } => common,
        }
    }
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// What a command produced: a results object, or a raw SVG document.
enum Output {
    Results(Value, Value),
    Svg(String),
}

struct Context<'a> {
    opts: SolverOptions,
    stdin: &'a mut dyn Read,
}

fn parse_weights(text: &str) -> Result<WeightSystem> {
    let bad = || Error::InvalidConfiguration(format!("weights must be 'p,q', got '{text}'"));
    let (p, q) = text.split_once(',').ok_or_else(bad)?;
    let p: u32 = p.trim().parse().map_err(|_| bad())?;
    let q: u32 = q.trim().parse().map_err(|_| bad())?;
    WeightSystem::new(p, q).map_err(|e| Error::InvalidConfiguration(e.to_string()))
}

fn read_input(input: &PolyInput, stdin: &mut dyn Read) -> Result<MixedPolynomial> {
    match (&input.poly, &input.expr) {
        (_, Some(expr)) => read_polynomial(expr),
        (Some(path), None) if path == "-" => {
            let mut text = String::new();
            stdin.read_to_string(&mut text).map_err(|e| Error::Io(e.to_string()))?;
            read_polynomial(&text)
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            read_polynomial(&text)
        }
        (None, None) => Err(Error::InvalidConfiguration("one of --poly or --expr is required".into())),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn optional_point(z1: &Option<String>, z2: &Option<String>) -> Result<Option<[Complex64; 2]>> {
    match (z1, z2) {
        (Some(a), Some(b)) => Ok(Some([parse_complex(a)?, parse_complex(b)?])),
        (None, None) => Ok(None),
        _ => Err(Error::InvalidConfiguration("--z1 and --z2 must be given together".into())),
    }
}

fn execute(cmd: &Command, ctx: &mut Context<'_>) -> Result<Output> {
    let w = parse_weights(&cmd.common().weights)?;
    let opts = ctx.opts;
    let seed = cmd.common().seed;
    let weights = json!([w.p, w.q]);
    match cmd {
        Command::Analyze { input, samples, .. } => {
            let f = read_input(input, ctx.stdin)?;
            let rep = f.degree_report(w)?;
            let residual = if rep.is_strongly_polar { Some(verify_equivariance(&f, w, *samples, seed)?) } else { None };
            Ok(Output::Results(
                json!({ "weights": weights, "polynomial": serialize_poly(&f), "samples": samples }),
                json!({ "degree_report": to_value(&rep), "equivariance_residual": residual }),
            ))
        }
        Command::Construct { orbits, s, .. } => {
            let config = LinkConfiguration::new(w, parse_orbits(orbits)?);
            let s = s.unwrap_or(config.r());
            let validation = validate_config(&config, MIN_SEPARATION);
            let f = defining_polynomial(&config, s)?;
            Ok(Output::Results(
                json!({ "weights": weights, "orbits": to_value(&config.orbits), "s": s }),
                json!({
                    "polynomial": serialize_poly(&f),
                    "document": to_value(&PolynomialDocument::from(&f)),
                    "degree_report": to_value(&f.degree_report(w)?),
                    "validation": to_value(&validation),
                }),
            ))
        }
        Command::Solve { input, .. } => {
            let f = read_input(input, ctx.stdin)?;
            let report = solve_link(&f, w, &opts)?;
            let check = signed_count(&report, w, &f)?;
            Ok(Output::Results(
                json!({ "weights": weights, "polynomial": serialize_poly(&f) }),
                json!({
                    "components": report.components(),
                    "n_pos": report.n_pos,
                    "n_neg": report.n_neg,
                    "signed_count": to_value(&check),
                    "report": to_value(&report),
                }),
            ))
        }
        Command::Sigma { n, out, classify, .. } => {
            let curve = trace_sigma(*n)?;
            if *out == OutFormat::Svg {
                return Ok(Output::Svg(sigma_svg(&curve)?));
            }
            let ts: Vec<Complex64> = classify.iter().map(|t| parse_complex(t)).collect::<Result<_>>()?;
            let regions: Vec<Value> = ts
                .iter()
                .map(|&t| json!({ "t": complex_value(t), "region": to_value(&classify_region(t, &curve, 1e-2)) }))
                .collect();
            Ok(Output::Results(
                json!({ "n": n, "classify": ts.iter().map(|&t| complex_value(t)).collect::<Vec<_>>() }),
                json!({ "classifications": regions, "curve": to_value(&curve) }),
            ))
        }
        Command::Sweep { from, to, steps, .. } => {
            let (a, b) = (parse_complex(from)?, parse_complex(to)?);
            if *steps < 1 {
                return Err(Error::InvalidConfiguration("--steps must be positive".into()));
            }
            let res = sweep(w, &linear_path(a, b, *steps), &opts)?;
            Ok(Output::Results(
                json!({ "weights": weights, "from": complex_value(a), "to": complex_value(b), "steps": steps }),
                json!({
                    "counts": res.counts,
                    "signed_totals": res.signed_totals,
                    "events": to_value(&res.events),
                }),
            ))
        }
        Command::Euler { d, r, mode, .. } => {
            if *d < 1 || *r < 0 {
                return Err(Error::InvalidConfiguration("need d ≥ 1 and r ≥ 0".into()));
            }
            let (p, q) = (w.p as i64, w.q as i64);
            let mut results = serde_json::Map::new();
            results.insert("components".into(), json!(d + 2 * r));
            if *mode != EulerMode::Covering {
                results.insert("chi_paper".into(), json!(chi_paper(*d, *r, p, q)));
            }
            if *mode != EulerMode::Paper {
                let f = defining_polynomial(&sample_configuration(w, *d, *r), *r)?;
                let one = Complex64::new(1.0, 0.0);
                let zero = Complex64::new(0.0, 0.0);
                let c1 = measure_fiber_count(&f, w, [one, zero])? as i64;
                let c2 = measure_fiber_count(&f, w, [zero, one])? as i64;
                results.insert("axis1_fiber_count".into(), json!(c1));
                results.insert("axis2_fiber_count".into(), json!(c2));
                results.insert("chi_covering".into(), json!(chi_covering(*d, *r, p, q, c1, c2)));
            }
            if *mode == EulerMode::Both {
                let agree = results["chi_paper"] == results["chi_covering"];
                results.insert("agree".into(), json!(agree));
            }
            Ok(Output::Results(
                json!({ "weights": weights, "d": d, "r": r, "mode": to_value(mode) }),
                Value::Object(results),
            ))
        }
        Command::FiberCount { input, z1, z2, .. } => {
            let f = read_input(input, ctx.stdin)?;
            let z0 = match optional_point(z1, z2)? {
                Some(z) => z,
                None => regular_base_point(&f, seed)?,
            };
            let count = measure_fiber_count(&f, w, z0)?;
            let one = Complex64::new(1.0, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            let axis1 = measure_fiber_count(&f, w, [one, zero]).ok();
            let axis2 = measure_fiber_count(&f, w, [zero, one]).ok();
            let rep = f.degree_report(w)?;
            Ok(Output::Results(
                json!({ "weights": weights, "polynomial": serialize_poly(&f) }),
                json!({
                    "base_point": [complex_value(z0[0]), complex_value(z0[1])],
                    "count": count,
                    "polar_degree": rep.polar_degree,
                    "axis1_fiber_count": axis1,
                    "axis2_fiber_count": axis2,
                }),
            ))
        }
        Command::Linking { orbits, samples, .. } => {
            let orbits = parse_orbits(orbits)?;
            let mut pairs = Vec::new();
            for i in 0..orbits.len() {
                for j in i + 1..orbits.len() {
                    let lk = orbit_linking(w, &orbits[i], &orbits[j], *samples)?;
                    pairs.push(json!({
                        "i": i,
                        "j": j,
                        "numeric": lk.numeric,
                        "snapped": lk.snapped,
                        "expected": expected_linking(w, &orbits[i], &orbits[j]),
                        "samples": lk.samples,
                    }));
                }
            }
            Ok(Output::Results(
                json!({ "weights": weights, "orbits": to_value(&orbits), "samples": samples }),
                json!({ "pairs": pairs }),
            ))
        }
        Command::RankCheck { t, radius, z1, z2, .. } => {
            let t = parse_complex(t)?;
            let z = match optional_point(z1, z2)? {
                Some(z) => z,
                None => {
                    let k = radius / std::f64::consts::SQRT_2;
                    [Complex64::new(k, 0.0), Complex64::from_polar(k, std::f64::consts::PI / w.p as f64)]
                }
            };
            let rep = rank_check(&model_family(w), z, t, *radius)?;
            Ok(Output::Results(
                json!({
                    "weights": weights,
                    "t": complex_value(t),
                    "radius": radius,
                    "point": [complex_value(z[0]), complex_value(z[1])],
                }),
                to_value(&rep),
            ))
        }
        Command::Eliminate { orbits, .. } => {
            let config = LinkConfiguration::new(w, parse_orbits(orbits)?);
            let steps = positivize(&config, &opts)?;
            let summary: Vec<Value> = steps
                .iter()
                .map(|o| {
                    let ev = &o.sweep.events[0];
                    json!({
                        "triple": o.family.triple,
                        "targets": to_value(&o.family.targets),
                        "schedule": to_value(&o.family.schedule),
                        "t_star": complex_value(ev.t_star),
                        "collision_point": complex_value(ev.collision_point),
                        "merging_degrees": [ev.merging_roots[0].1, ev.merging_roots[1].1],
                        "certificate_rank": o.certificate.rank,
                        "singular_values": o.certificate.singular_values,
                        "rest_min_modulus": o.rest_min_modulus,
                        "components_after": o.final_report.components(),
                    })
                })
                .collect();
            let last = &steps.last().expect("at least one step").final_report;
            Ok(Output::Results(
                json!({ "weights": weights, "orbits": to_value(&config.orbits) }),
                json!({
                    "eliminations": summary,
                    "final": {
                        "components": last.components(),
                        "n_pos": last.n_pos,
                        "n_neg": last.n_neg,
                        "report": to_value(last),
                    },
                }),
            ))
        }
        Command::Project { orbits, input, samples, out, .. } => {
            let (orbits, source) = match orbits {
                Some(text) => (parse_orbits(text)?, json!(text)),
                None => {
                    let f = read_input(input, ctx.stdin)?;
                    let cfg = solve_link(&f, w, &opts)?.to_configuration()?;
                    (cfg.orbits, json!(serialize_poly(&f)))
                }
            };
            let (pole, comps) = project_link(w, &orbits, *samples)?;
            if *out == OutFormat::Svg {
                return Ok(Output::Svg(link_svg(&comps)?));
            }
            Ok(Output::Results(
                json!({ "weights": weights, "source": source, "samples": samples }),
                json!({
                    "pole": [complex_value(pole[0]), complex_value(pole[1])],
                    "orbits": to_value(&orbits),
                    "components": to_value(&comps),
                }),
            ))
        }
    }
}

fn summarize(command: &str, results: &Value) -> String {
    let mut out = format!("{command}: ok\n");
    if let Value::Object(map) = results {
        for (k, v) in map {
            summarize_value(k, v, 0, &mut out);
        }
    }
    out
}

fn summarize_value(key: &str, v: &Value, depth: usize, out: &mut String) {
    let scalar = |x: &Value| !x.is_object() && !x.is_array();
    match v {
        Value::Array(a) if a.len() <= 8 && a.iter().all(|x| scalar(x) || x.as_array().is_some_and(|y| y.iter().all(scalar))) => {
            out.push_str(&format!("  {key}: {v}\n"));
        }
        Value::Array(a) if depth < 2 && a.len() <= 6 => {
            for (i, x) in a.iter().enumerate() {
                summarize_value(&format!("{key}[{i}]"), x, depth + 1, out);
            }
        }
        Value::Array(a) => out.push_str(&format!("  {key}: [{} items]\n", a.len())),
        Value::Object(m) if depth < 2 => {
            for (k, x) in m {
                summarize_value(&format!("{key}.{k}"), x, depth + 1, out);
            }
        }
        Value::Object(_) => out.push_str(&format!("  {key}: {{…}}\n")),
        _ => out.push_str(&format!("  {key}: {v}\n")),
    }
}

/// Runs the CLI on `args` (including the program name), reading `--poly -`
/// from `stdin`.
pub fn run_with_stdin<I, T>(args: I, stdin: &mut dyn Read) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let cmd = &cli.command;
    let common = cmd.common();
    let profile_env = std::env::var(PROFILE_ENV).ok();
    let profile = match profile_env.as_deref() {
        Some(p @ ("fast" | "strict")) => p.to_string(),
        _ => "default".to_string(),
    };
    let mut opts = SolverOptions::from_profile(profile_env.as_deref());
    if let Some(tol) = common.tol {
        opts.newton_tol = tol;
    }
    if let Some(grid) = common.grid {
        opts.grid_resolution = grid;
    }
    let start = Instant::now();
    let outcome = opts.validate().and_then(|_| execute(cmd, &mut Context { opts, stdin }));
    let runtime_ms = common.timings.then(|| start.elapsed().as_millis() as u64);
    let mut diagnostics = Diagnostics { profile, options: opts, seed: common.seed, error: None, runtime_ms };
    match outcome {
        Ok(Output::Svg(svg)) => CliOutput { code: 0, stdout: svg, stderr: String::new() },
        Ok(Output::Results(inputs, results)) => {
            let stdout = if common.json {
                ReportDocument::new(cmd.name(), inputs, results, diagnostics).to_json() + "\n"
            } else {
                summarize(cmd.name(), &results)
            };
            CliOutput { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = if e.is_usage() { 2 } else { 3 };
            diagnostics.error = Some(ErrorInfo::from(&e));
            let stdout = if common.json {
                ReportDocument::new(cmd.name(), json!({}), Value::Null, diagnostics).to_json() + "\n"
            } else {
                String::new()
            };
            CliOutput { code, stdout, stderr: format!("error[{}]: {e}\n", e.code()) }
        }
    }
}

/// Runs the CLI with the process stdin.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_stdin(args, &mut std::io::stdin())
}
