//! Command-line front end. `run` parses arguments, executes one subcommand
//! and returns the process exit code: 0 when every assertion passed, 1 on a
//! violation, 2 on a usage or configuration error.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use serde::Serialize;

use hypiso::battery::{self, BatteryConfig, BatteryReport, SCHEMA_VERSION};
use hypiso::bounds::{cor1_audit, evaluate, BoundResult, Cor1Audit, TheoremId};
use hypiso::hmodel::{embed, measured_area, measured_perimeter};
use hypiso::optimize::{
    default_window, optimize_with_oracle, solve_equal_sum, verify_theorem, Interval, ObjectiveKind,
    ObjectiveSpec, OptimizationReport, VerificationReport, VerifyParams,
};
use hypiso::polygon::{Polygon, PolygonKind, PolygonRecord};
use hypiso::sampling::PolygonSampler;

use args::{BoundsArgs, Cli, Command, Format, OptimizeArgs, ReportArgs, SampleArgs, ThmSelector, VerifyArgs};
use output::{csv_string, emit, g17, json_string, opt_g17};

pub const BOUNDS_HEADER: [&str; 7] = ["theorem", "n", "k", "param", "value", "feasible", "guard_margin"];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
}

impl From<hypiso::Error> for CliError {
    fn from(e: hypiso::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Bounds(a) => cmd_bounds(&a, stdout),
        Command::Verify(a) => cmd_verify(&a, stdout),
        Command::Sample(a) => cmd_sample(&a, stdout),
        Command::Optimize(a) => cmd_optimize(&a, stdout),
        Command::Report(a) => cmd_report(&a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn bound_row(b: &BoundResult) -> Vec<String> {
    vec![
        b.theorem.to_string(),
        b.n.to_string(),
        b.k.to_string(),
        g17(b.param),
        g17(b.value),
        b.feasible.to_string(),
        opt_g17(b.guard_margin),
    ]
}

/// The printed relation's reference and difference as extra rows, since the
/// table header is fixed.
fn cor1_rows(a: &Cor1Audit) -> [Vec<String>; 2] {
    let row = |id: &str, v: f64| {
        vec![
            id.to_string(),
            a.n.to_string(),
            "1".into(),
            g17(a.circumradius),
            g17(v),
            a.feasible.to_string(),
            String::new(),
        ]
    };
    [row("cor1_ref", a.reference), row("cor1_diff", a.discrepancy)]
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    schema_version: u32,
    command: &'static str,
    rows: &'a [BoundResult],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    cor1_audit: &'a [Cor1Audit],
}

fn selected(thm: ThmSelector, with_cor1: bool) -> Vec<TheoremId> {
    match thm {
        ThmSelector::One(t) => vec![t],
        ThmSelector::All => {
            let mut v = TheoremId::THEOREMS.to_vec();
            if with_cor1 {
                v.push(TheoremId::Cor1);
            }
            v
        }
    }
}

/// Evaluate and render a bound sweep.
pub fn bounds_table(
    theorems: &[TheoremId],
    n: u32,
    k: u32,
    params: &[f64],
    format: Format,
) -> Result<String, hypiso::Error> {
    let mut results = Vec::new();
    let mut audits = Vec::new();
    let mut rows = Vec::new();
    for &t in theorems {
        let kk = if t.is_multi() { k } else { 1 };
        for &p in params {
            let b = evaluate(t, n, kk, p)?;
            rows.push(bound_row(&b));
            if t == TheoremId::Cor1 {
                let a = cor1_audit(n, p)?;
                rows.extend(cor1_rows(&a));
                audits.push(a);
            }
            results.push(b);
        }
    }
    Ok(match format {
        Format::Csv => csv_string(&BOUNDS_HEADER, &rows),
        Format::Json => json_string(&BoundsOutput {
            schema_version: SCHEMA_VERSION,
            command: "bounds",
            rows: &results,
            cor1_audit: &audits,
        }),
    })
}

fn cmd_bounds(a: &BoundsArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let params = match (a.param, a.range) {
        (Some(p), _) => vec![p],
        (None, Some(r)) => r.points(10),
        (None, None) => return usage("bounds needs --range lo:hi:steps or --param"),
    };
    if a.k < 1 {
        return usage("--k must be >= 1");
    }
    let text = bounds_table(&selected(a.thm, true), a.n, a.k, &params, a.format)?;
    emit(a.common.out.as_deref(), &text, stdout)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    passed: bool,
    reports: &'a [VerificationReport],
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    if a.thm == ThmSelector::One(TheoremId::Cor1) {
        return usage("cor1 is audited by `bounds --thm cor1`, not verified");
    }
    if !(a.tolerance >= 0.0) {
        return usage("--tolerance must be >= 0");
    }
    let params = VerifyParams {
        n: a.n,
        k: a.k,
        window: a.range.map(|r| (r.lo, r.hi)),
        tolerance: a.tolerance,
        ..Default::default()
    };
    let reports = selected(a.thm, false)
        .into_iter()
        .map(|t| verify_theorem(t, &params, a.trials, a.common.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed());
    let text = match a.format {
        Format::Json => json_string(&VerifyOutput {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            seed: a.common.seed,
            passed,
            reports: &reports,
        }),
        Format::Csv => {
            let header = [
                "theorem",
                "k",
                "trials",
                "checked",
                "skipped_by_guard",
                "violations",
                "worst_margin",
                "max_equality_gap",
                "equality_failures",
            ];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.theorem.to_string(),
                        if r.theorem.is_multi() { r.params.k } else { 1 }.to_string(),
                        r.trials.to_string(),
                        r.checked.to_string(),
                        r.skipped_by_guard.to_string(),
                        r.violations.to_string(),
                        opt_g17(r.worst_margin),
                        g17(r.max_equality_gap),
                        r.equality_failures.to_string(),
                    ]
                })
                .collect();
            csv_string(&header, &rows)
        }
    };
    emit(a.common.out.as_deref(), &text, stdout)?;
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct Metrics {
    perimeter: f64,
    area: f64,
    interior_angles: Vec<f64>,
}

#[derive(Serialize)]
struct SampleLine {
    schema_version: u32,
    index: u64,
    polygon: PolygonRecord,
    regular: bool,
    closed_form: Metrics,
    measured: Metrics,
    max_perimeter_error: f64,
    max_area_error: f64,
    max_angle_error: f64,
}

fn sample_line(index: u64, p: &Polygon) -> CliResult<SampleLine> {
    let e = embed(p)?;
    let closed = Metrics { perimeter: p.perimeter(), area: p.area(), interior_angles: p.interior_angles() };
    let measured = Metrics {
        perimeter: measured_perimeter(&e),
        area: measured_area(&e)?,
        interior_angles: e.measured_interior_angles()?,
    };
    let angle_err = closed
        .interior_angles
        .iter()
        .zip(&measured.interior_angles)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    Ok(SampleLine {
        schema_version: SCHEMA_VERSION,
        index,
        polygon: PolygonRecord::from(p),
        regular: p.is_regular(),
        max_perimeter_error: (closed.perimeter - measured.perimeter).abs(),
        max_area_error: (closed.area - measured.area).abs(),
        max_angle_error: angle_err,
        closed_form: closed,
        measured,
    })
}

fn cmd_sample(a: &SampleArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let kind: PolygonKind = a.kind.into();
    let polygons: Vec<Polygon> = if let Some(thetas) = &a.thetas {
        let radius = a.radius.expect("clap enforces --radius");
        let t: Vec<f64> = if a.common.degrees {
            thetas.iter().map(|d| d.to_radians()).collect()
        } else {
            thetas.clone()
        };
        vec![Polygon::new(kind, radius, &t)?]
    } else {
        let n_range = match a.n {
            Some(n) => (n as usize, n as usize),
            None => (3, 12),
        };
        let window = a.range.map_or((0.05, 3.0), |r| (r.lo, r.hi));
        let mut sampler = PolygonSampler::new(kind, n_range, window)?;
        sampler.regular = a.regular;
        (0..a.trials)
            .map(|i| {
                sampler.sample(a.common.seed, i).ok_or_else(|| {
                    CliError::Usage(format!(
                        "radius window {window:?} admits no valid {kind:?} polygon for sample {i}"
                    ))
                })
            })
            .collect::<CliResult<_>>()?
    };
    let lines = polygons
        .iter()
        .enumerate()
        .map(|(i, p)| sample_line(i as u64, p))
        .collect::<CliResult<Vec<_>>>()?;
    let text = match a.format {
        Format::Json => lines
            .iter()
            .map(|l| serde_json::to_string(l).expect("serializable") + "\n")
            .collect::<String>(),
        Format::Csv => {
            let header = [
                "index",
                "kind",
                "n",
                "radius",
                "thetas",
                "perimeter",
                "measured_perimeter",
                "area",
                "measured_area",
                "max_angle_error",
            ];
            let rows: Vec<Vec<String>> = lines
                .iter()
                .map(|l| {
                    vec![
                        l.index.to_string(),
                        format!("{:?}", l.polygon.kind).to_lowercase(),
                        l.polygon.n.to_string(),
                        g17(l.polygon.radius),
                        l.polygon.thetas.iter().map(|t| g17(*t)).collect::<Vec<_>>().join(";"),
                        g17(l.closed_form.perimeter),
                        g17(l.measured.perimeter),
                        g17(l.closed_form.area),
                        g17(l.measured.area),
                        g17(l.max_angle_error),
                    ]
                })
                .collect();
            csv_string(&header, &rows)
        }
    };
    emit(a.common.out.as_deref(), &text, stdout)?;
    Ok(0)
}

#[derive(Serialize)]
struct OptimizeOutput<'a> {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    spec: &'a ObjectiveSpec,
    report: &'a OptimizationReport,
}

fn angle_valued(kind: ObjectiveKind) -> bool {
    kind.needs_radius() || kind == ObjectiveKind::PerimeterFromAngle
}

fn cmd_optimize(a: &OptimizeArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let kind = match (a.objective, a.thm) {
        (Some(o), _) => o,
        (None, Some(ThmSelector::One(t))) => match ObjectiveKind::for_theorem(t) {
            Some(o) => o,
            None => return usage(format!("no objective is registered for {t}")),
        },
        _ => return usage("optimize needs --objective or a single --thm"),
    };
    let spec = ObjectiveSpec::new(kind, a.n, a.radius)?;
    let conv = |x: f64| if a.common.degrees && angle_valued(kind) { x.to_radians() } else { x };
    let window = match a.range {
        Some(r) => Some(Interval::new(conv(r.lo), conv(r.hi))?),
        None => None,
    };
    let problem = spec.problem(a.k, a.center.map(conv), window)?;
    let resolution = a.resolution.unwrap_or(if a.k == 2 { 200 } else { 60 });
    let report = if a.k <= 3 {
        optimize_with_oracle(&problem, a.common.seed, resolution)?
    } else {
        solve_equal_sum(&problem, a.common.seed)?
    };
    let text = match a.format {
        Format::Json => json_string(&OptimizeOutput {
            schema_version: SCHEMA_VERSION,
            command: "optimize",
            seed: a.common.seed,
            spec: &spec,
            report: &report,
        }),
        Format::Csv => {
            let header = [
                "objective",
                "n",
                "k",
                "sense",
                "certificate",
                "max_deviation_from_uniform",
                "objective_at_argmin",
                "uniform_point_objective",
                "oracle_agreement",
            ];
            let row = vec![
                kind.to_string(),
                a.n.to_string(),
                a.k.to_string(),
                format!("{:?}", report.sense).to_lowercase(),
                format!("{:?}", report.convexity_certificate.second_difference_sign),
                g17(report.max_deviation_from_uniform),
                g17(report.objective_at_argmin),
                g17(report.uniform_point_objective),
                report.oracle_agreement.map_or(String::new(), |b| b.to_string()),
            ];
            csv_string(&header, &[row])
        }
    };
    emit(a.common.out.as_deref(), &text, stdout)?;
    Ok(if report.certified && report.oracle_agreement == Some(false) { 1 } else { 0 })
}

/// Bound sweep bundled with the report: n = 4, k = 2 for the
/// multi-polygon bounds, ten points inside each default window.
pub fn report_bounds_csv() -> Result<String, hypiso::Error> {
    let n = 4;
    let mut out = String::new();
    let mut first = true;
    for t in TheoremId::THEOREMS.iter().copied().chain([TheoremId::Cor1]) {
        let (lo, hi) = default_window(t, n);
        let k = if t.is_multi() { 2 } else { 1 };
        let params: Vec<f64> = (0..10)
            .map(|i| k as f64 * (lo + (hi - lo) * (i as f64 + 0.5) / 10.0))
            .collect();
        let table = bounds_table(&[t], n, k, &params, Format::Csv)?;
        // Keep one header line.
        let body = if first { table.as_str() } else { table.split_once('\n').map_or("", |x| x.1) };
        out.push_str(body);
        first = false;
    }
    Ok(out)
}

pub fn report_cor1_csv(r: &BatteryReport) -> String {
    let rows: Vec<Vec<String>> = r
        .cor1_table
        .iter()
        .map(|a| {
            vec![
                a.n.to_string(),
                g17(a.circumradius),
                g17(a.printed),
                g17(a.reference),
                g17(a.discrepancy),
                a.feasible.to_string(),
            ]
        })
        .collect();
    csv_string(&["n", "circumradius", "printed", "reference", "discrepancy", "printed_real"], &rows)
}

fn write_bundle(dir: &Path, r: &BatteryReport) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.md"), battery::render_markdown(r))?;
    fs::write(dir.join("report.json"), json_string(r))?;
    fs::write(dir.join("cor1.csv"), report_cor1_csv(r))?;
    fs::write(dir.join("bounds.csv"), report_bounds_csv()?)?;
    Ok(())
}

fn cmd_report(a: &ReportArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let mut cfg = BatteryConfig::new(a.common.seed);
    if a.quick {
        cfg.measurement_samples = 1000;
        cfg.single_trials = 1000;
        cfg.multi_trials = 200;
    }
    let r = battery::run_battery(&cfg)?;
    match &a.common.out {
        Some(dir) => write_bundle(dir, &r)?,
        None => {
            let text = match a.format {
                Some(Format::Json) => json_string(&r),
                Some(Format::Csv) => report_cor1_csv(&r),
                None => battery::render_markdown(&r),
            };
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(if r.passed() { 0 } else { 1 })
}
