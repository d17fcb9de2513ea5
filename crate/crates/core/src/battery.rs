//! The acceptance battery: every check the verification report renders,
//! each producing a pass/fail outcome with its evidence.
//!
//! Output contains no timings or thread counts, so a fixed seed yields a
//! byte-identical report.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    cor1_audit, evaluate, thm10_cos_variant, thm10_total_area_upper, Cor1Audit, TheoremId,
};
use crate::hmodel::{embed, embed_cyclic, measured_area, measured_perimeter};
use crate::hypmath::{acosh, asinh, regular_convert, DefiningQuantity, RegularNGonSpec};
use crate::optimize::{
    certify_convexity, optimize_with_oracle, registered, verify_theorem, ObjectiveKind, ObjectiveSpec,
    SignVerdict, VerificationReport, VerifyParams, CERT_POINTS,
};
use crate::polygon::{CyclicPolygon, PolygonKind};
use crate::sampling::PolygonSampler;
use crate::tol::{self, rel_err};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub seed: u64,
    /// Random polygons per kind in the measurement check.
    pub measurement_samples: u64,
    /// Trials per single-polygon bound.
    pub single_trials: u64,
    /// Trials per multi-polygon bound and polygon count.
    pub multi_trials: u64,
}

impl BatteryConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, measurement_samples: 10_000, single_trials: 10_000, multi_trials: 1_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CriterionOutcome {
    fn new(id: u32, title: &str) -> Self {
        Self { id, title: title.into(), passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        let tag = if ok { "ok  " } else { "FAIL" };
        self.details.push(format!("{tag} {line}"));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("     {line}"));
    }

    pub fn status_line(&self) -> String {
        format!(
            "criterion {}: {} - {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title
        )
    }
}

/// Maximum closed-form vs measured discrepancies over a sample.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasurementStats {
    pub samples: u64,
    pub skipped: u64,
    pub perimeter_failures: u64,
    pub area_failures: u64,
    pub angle_failures: u64,
    pub max_perimeter_error: f64,
    pub max_area_error: f64,
    pub max_angle_error: f64,
}

impl MeasurementStats {
    fn merge(mut self, o: Self) -> Self {
        self.samples += o.samples;
        self.skipped += o.skipped;
        self.perimeter_failures += o.perimeter_failures;
        self.area_failures += o.area_failures;
        self.angle_failures += o.angle_failures;
        self.max_perimeter_error = self.max_perimeter_error.max(o.max_perimeter_error);
        self.max_area_error = self.max_area_error.max(o.max_area_error);
        self.max_angle_error = self.max_angle_error.max(o.max_angle_error);
        self
    }

    pub fn passed(&self) -> bool {
        self.samples > 0
            && self.perimeter_failures == 0
            && self.area_failures == 0
            && self.angle_failures == 0
            && self.skipped == 0
    }
}

/// Closed-form perimeter, area and interior angles against the embedding,
/// with errors scaled by `max(1, value)`.
pub fn measurement_check(kind: PolygonKind, samples: u64, seed: u64) -> Result<MeasurementStats> {
    let sampler = PolygonSampler::new(kind, (3, 12), (0.05, 3.0))?;
    let per: Vec<Result<MeasurementStats>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut s = MeasurementStats { samples: 1, ..Default::default() };
            let Some(p) = sampler.sample(seed, i) else {
                s.skipped = 1;
                return Ok(s);
            };
            let e = embed(&p)?;
            let pe = (p.perimeter() - measured_perimeter(&e)).abs() / p.perimeter().max(1.0);
            let ae = (p.area() - measured_area(&e)?).abs() / p.area().max(1.0);
            let ange = p
                .interior_angles()
                .iter()
                .zip(e.measured_interior_angles()?)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            s.max_perimeter_error = pe;
            s.max_area_error = ae;
            s.max_angle_error = ange;
            s.perimeter_failures = (pe > tol::MEASURED_PERIMETER) as u64;
            s.area_failures = (ae > tol::MEASURED_AREA) as u64;
            s.angle_failures = (ange > tol::MEASURED_AREA) as u64;
            Ok(s)
        })
        .collect();
    per.into_iter()
        .try_fold(MeasurementStats::default(), |acc, s| Ok(acc.merge(s?)))
}

fn criterion_measurement(cfg: &BatteryConfig) -> Result<CriterionOutcome> {
    let mut c = CriterionOutcome::new(1, "closed forms agree with hyperboloid measurement");
    for (kind, offset) in [(PolygonKind::Cyclic, 0u64), (PolygonKind::Tangential, 1)] {
        let s = measurement_check(kind, cfg.measurement_samples, cfg.seed.wrapping_add(offset))?;
        c.check(
            s.passed(),
            format!(
                "{kind:?}: {} polygons, max errors perimeter {:.2e}, area {:.2e}, angle {:.2e}, failures {}/{}/{}",
                s.samples,
                s.max_perimeter_error,
                s.max_area_error,
                s.max_angle_error,
                s.perimeter_failures,
                s.area_failures,
                s.angle_failures
            ),
        );
    }
    Ok(c)
}

fn verification_line(r: &VerificationReport) -> String {
    let k = if r.theorem.is_multi() { format!(" k={}", r.params.k) } else { String::new() };
    format!(
        "{}{k}: checked {}, skipped {}, violations {}, worst relative margin {}, equality gap {:.2e}",
        r.theorem,
        r.checked,
        r.skipped_by_guard,
        r.violations,
        r.worst_relative_margin.map_or("-".into(), |m| format!("{m:.3e}")),
        r.max_equality_gap
    )
}

fn counterexample_lines(c: &mut CriterionOutcome, r: &VerificationReport) {
    if let Some(x) = r.counterexamples.first() {
        let thetas: Vec<String> = x.polygons[0].thetas.iter().map(|t| format!("{t:.6}")).collect();
        c.note(format!(
            "first counterexample: n={} k={} param={:.6} observed {:.10} vs bound {:.10}; first polygon radius {:.6}, thetas [{}]",
            x.n,
            x.k,
            x.param,
            x.observed,
            x.bound,
            x.polygons[0].radius,
            thetas.join(", ")
        ));
    }
}

fn run_campaign(
    c: &mut CriterionOutcome,
    theorem: TheoremId,
    params: VerifyParams,
    trials: u64,
    seed: u64,
) -> Result<()> {
    let r = verify_theorem(theorem, &params, trials, seed)?;
    c.check(r.passed() && r.checked > 0, verification_line(&r));
    counterexample_lines(c, &r);
    Ok(())
}

fn criterion_single(cfg: &BatteryConfig) -> Result<CriterionOutcome> {
    let mut c = CriterionOutcome::new(2, "single-polygon bounds hold on random polygons");
    for t in [TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4] {
        run_campaign(&mut c, t, VerifyParams::default(), cfg.single_trials, cfg.seed)?;
    }
    Ok(c)
}

fn criterion_multi(cfg: &BatteryConfig) -> Result<CriterionOutcome> {
    let mut c = CriterionOutcome::new(3, "radius-total bounds hold on random splits");
    for t in [TheoremId::T5, TheoremId::T6, TheoremId::T7, TheoremId::T8] {
        for k in [2, 3, 5] {
            let params = VerifyParams { k, ..Default::default() };
            run_campaign(&mut c, t, params, cfg.multi_trials, cfg.seed)?;
        }
    }
    Ok(c)
}

fn criterion_guarded(cfg: &BatteryConfig) -> Result<CriterionOutcome> {
    let mut c = CriterionOutcome::new(4, "area/perimeter-total bounds hold inside their guards");
    for t in [TheoremId::T9, TheoremId::T10] {
        for k in [2, 3, 5] {
            let params = VerifyParams { k, ..Default::default() };
            run_campaign(&mut c, t, params, cfg.multi_trials, cfg.seed)?;
        }
    }
    for kind in [ObjectiveKind::PerimeterFromAngle, ObjectiveKind::AngleFromPerimeter] {
        for n in [3u32, 4, 5, 6, 8, 12] {
            let spec = ObjectiveSpec::new(kind, n, 1.0)?;
            let f = spec.scalar_fn();
            let inside = certify_convexity(&*f, spec.window(), CERT_POINTS)?;
            let straddle = spec.straddle_window().expect("guarded objective");
            let across = certify_convexity(&*f, straddle, CERT_POINTS)?;
            c.check(
                inside.second_difference_sign == SignVerdict::ConsistentPositive
                    && across.second_difference_sign == SignVerdict::Mixed,
                format!(
                    "{kind} n={n}: inside ({:.6}, {:.6}) {:?}; across ({:.6}, {:.6}) {:?}, first sign change near {:.6}",
                    inside.interval.lo,
                    inside.interval.hi,
                    inside.second_difference_sign,
                    straddle.lo,
                    straddle.hi,
                    across.second_difference_sign,
                    across.first_violation.unwrap_or(f64::NAN)
                ),
            );
        }
    }
    Ok(c)
}

pub const OPTIMIZER_SIDE_COUNTS: [u32; 3] = [3, 4, 6];

fn criterion_optimizer(cfg: &BatteryConfig) -> Result<CriterionOutcome> {
    let mut c = CriterionOutcome::new(5, "equal split is optimal for every registered objective");
    for n in OPTIMIZER_SIDE_COUNTS {
        for spec in registered(n) {
            for (k, res) in [(2usize, 200usize), (3, 60)] {
                let p = spec.problem(k, None, None)?;
                let r = optimize_with_oracle(&p, cfg.seed, res)?;
                let oracle = r.oracle.as_ref().expect("oracle attached");
                let cell = r.oracle_within_one_cell == Some(true);
                let dev = r.max_deviation_from_uniform <= tol::OPTIMIZER;
                c.check(
                    cell && dev,
                    format!(
                        "{} {:?} k={k} res={res}: certificate {:?}, oracle point within one cell {}, optimizer deviation {:.2e}, optimum {:.12} vs uniform {:.12}",
                        p.name,
                        p.sense,
                        r.convexity_certificate.second_difference_sign,
                        cell,
                        r.max_deviation_from_uniform,
                        r.objective_at_argmin,
                        r.uniform_point_objective
                    ),
                );
                if !cell {
                    let pts: Vec<String> = oracle.min_point.iter().map(|x| format!("{x:.6}")).collect();
                    c.note(format!("grid optimum at [{}], uniform coordinate {:.6}", pts.join(", "), p.c / k as f64));
                }
            }
        }
    }
    Ok(c)
}

struct Anchor {
    label: &'static str,
    got: f64,
    want: f64,
}

fn criterion_anchors() -> Result<CriterionOutcome> {
    let mut c = CriterionOutcome::new(6, "closed-form anchors");
    let anchors = [
        Anchor {
            label: "tangential perimeter bound, n=4, r=asinh(1/2) = 4 ln 3",
            got: evaluate(TheoremId::T1, 4, 1, asinh(0.5))?.value,
            want: 4.0 * 3f64.ln(),
        },
        Anchor {
            label: "cyclic perimeter bound, n=6, R=asinh 2 = 12 ln(1+sqrt 2)",
            got: evaluate(TheoremId::T2, 6, 1, asinh(2.0))?.value,
            want: 12.0 * (1.0 + 2f64.sqrt()).ln(),
        },
        Anchor {
            label: "tangential area bound, n=6, r=acosh 2 = 4 pi",
            got: evaluate(TheoremId::T3, 6, 1, acosh(2.0))?.value,
            want: 4.0 * PI,
        },
    ];
    for a in anchors {
        let e = rel_err(a.got, a.want);
        c.check(e <= tol::EPS_REL, format!("{}: {:.17e}, relative error {e:.2e}", a.label, a.got));
    }
    // Cyclic area bound near R = 0: value / R^2 tends to n sin(pi/n) cos(pi/n) = 2.
    for big_r in [1e-3, 1e-4, 1e-6] {
        let v = evaluate(TheoremId::T4, 4, 1, big_r)?.value;
        let slope = v / (big_r * big_r);
        let e = rel_err(slope, 2.0);
        c.check(e <= 1e-5, format!("cyclic area bound n=4 at R={big_r:.0e}: value {v:.6e}, value/R^2 {slope:.12}"));
    }
    Ok(c)
}

fn criterion_euclidean() -> Result<CriterionOutcome> {
    let mut c = CriterionOutcome::new(7, "Euclidean limits at radius 1e-4");
    let r = 1e-4;
    let mut worst = [0.0f64; 4];
    for n in 3..=12u32 {
        let a = PI / n as f64;
        let nf = n as f64;
        let want = [
            2.0 * nf * a.tan() * r,
            2.0 * nf * a.sin() * r,
            nf * a.tan() * r * r,
            nf * a.sin() * a.cos() * r * r,
        ];
        for (i, t) in [TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4].into_iter().enumerate() {
            worst[i] = worst[i].max(rel_err(evaluate(t, n, 1, r)?.value, want[i]));
        }
    }
    let labels = [
        "tangential perimeter vs 2n tan(pi/n) r",
        "cyclic perimeter vs 2n sin(pi/n) R",
        "tangential area vs n tan(pi/n) r^2",
        "cyclic area vs n sin(pi/n) cos(pi/n) R^2",
    ];
    for (l, w) in labels.iter().zip(worst) {
        c.check(w <= 1e-5, format!("{l}, n = 3..12: worst relative error {w:.2e}"));
    }
    Ok(c)
}

pub const COR1_SIDE_COUNTS: [u32; 5] = [3, 4, 6, 8, 12];
pub const COR1_RADII: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 3.0];

pub fn cor1_table() -> Result<Vec<Cor1Audit>> {
    let mut out = Vec::new();
    for n in COR1_SIDE_COUNTS {
        for big_r in COR1_RADII {
            out.push(cor1_audit(n, big_r)?);
        }
    }
    Ok(out)
}

/// One row of the cos/cosh comparison for the fixed-perimeter area bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosVariantRow {
    pub n: u32,
    pub k: u32,
    pub total: f64,
    pub implemented: f64,
    pub cos_variant: f64,
}

pub fn cos_variant_table() -> Result<Vec<CosVariantRow>> {
    let mut out = Vec::new();
    for n in [3u32, 4, 6] {
        for k in [1u32, 2] {
            for scale in [0.5, 1.5, 3.0] {
                let total = scale * k as f64 * crate::bounds::perimeter_admissibility_threshold(n);
                out.push(CosVariantRow {
                    n,
                    k,
                    total,
                    implemented: thm10_total_area_upper(n, k, total)?.value,
                    cos_variant: thm10_cos_variant(n, k, total),
                });
            }
        }
    }
    Ok(out)
}

pub const COR1_NOTE: &str = "cor1: the printed inradius relation r = asinh(tan(pi/n) / tan(2n asinh(sin(pi/n) sinh R))) \
applies tan to a length and does not match the right-triangle relation tanh r = cos(pi/n) tanh R for regular polygons. \
It is evaluated verbatim, reported next to the reference, and never asserted.";

pub const THM10_NOTE: &str = "1.10: the closed form as stated uses cos(T/2nk); its derivation substitutes \
theta_i = 2 asin(cos(pi/n) / cosh(x_i/2n)). cos of a length is not dimensionally coherent, so the implemented \
bound uses cosh: k(n-2)pi - 2nk asin(cos(pi/n) / cosh(T/2nk)).";

fn criterion_audit() -> Result<CriterionOutcome> {
    let mut c = CriterionOutcome::new(8, "inradius relation and cos/cosh audit");
    let table = cor1_table()?;
    let mut worst_closed = 0.0f64;
    let mut worst_measured = 0.0f64;
    for row in &table {
        let g = regular_convert(RegularNGonSpec::new(row.n, DefiningQuantity::Circumradius(row.circumradius)))?;
        worst_closed = worst_closed.max(rel_err(row.reference, g.inradius));
        let e = embed_cyclic(&CyclicPolygon::regular(row.n as usize, row.circumradius)?);
        for a in e.apothems() {
            worst_measured = worst_measured.max((a - row.reference).abs());
        }
    }
    c.check(
        worst_closed <= tol::EPS_REL,
        format!("reference atanh(cos(pi/n) tanh R) vs regular inradius: worst relative error {worst_closed:.2e}"),
    );
    c.check(
        worst_measured <= tol::EPS_GEOM,
        format!("reference vs measured apothem of the embedded regular polygon: worst error {worst_measured:.2e}"),
    );
    let diverging = table.iter().filter(|r| !(r.discrepancy.abs() <= tol::EPS_REL)).count();
    c.check(
        !table.is_empty(),
        format!("printed relation differs from the reference in {diverging} of {} table rows", table.len()),
    );
    let cos = cos_variant_table()?;
    let differing = cos
        .iter()
        .filter(|r| !(rel_err(r.cos_variant, r.implemented) <= tol::EPS_REL))
        .count();
    c.check(!cos.is_empty(), format!("cos reading differs from the implemented cosh reading in {differing} of {} rows", cos.len()));
    Ok(c)
}

fn criterion_determinism(cfg: &BatteryConfig) -> Result<CriterionOutcome> {
    let mut c = CriterionOutcome::new(9, "fixed seed gives identical results under any scheduling");
    let params = VerifyParams { k: 3, ..Default::default() };
    let run = || -> Result<String> {
        let v = verify_theorem(TheoremId::T9, &params, 200, cfg.seed)?;
        let p = registered(5)[1].problem(3, None, None)?;
        let o = optimize_with_oracle(&p, cfg.seed, 60)?;
        Ok(serde_json::to_string(&(v, o)).expect("serializable"))
    };
    let parallel = run()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("thread pool");
    let serial = pool.install(run)?;
    c.check(parallel == serial, "verification and optimization output identical across thread counts".into());
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub schema_version: u32,
    pub config: BatteryConfig,
    pub criteria: Vec<CriterionOutcome>,
    pub cor1_table: Vec<Cor1Audit>,
    pub cos_variant_table: Vec<CosVariantRow>,
    pub notes: Vec<String>,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

pub fn run_criterion(id: u32, cfg: &BatteryConfig) -> Result<CriterionOutcome> {
    match id {
        1 => criterion_measurement(cfg),
        2 => criterion_single(cfg),
        3 => criterion_multi(cfg),
        4 => criterion_guarded(cfg),
        5 => criterion_optimizer(cfg),
        6 => criterion_anchors(),
        7 => criterion_euclidean(),
        8 => criterion_audit(),
        9 => criterion_determinism(cfg),
        _ => Err(crate::Error::InvalidParameter(format!("no criterion {id}"))),
    }
}

pub fn run_battery(cfg: &BatteryConfig) -> Result<BatteryReport> {
    let criteria = (1..=9).map(|i| run_criterion(i, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(BatteryReport {
        schema_version: SCHEMA_VERSION,
        config: *cfg,
        criteria,
        cor1_table: cor1_table()?,
        cos_variant_table: cos_variant_table()?,
        notes: vec![COR1_NOTE.into(), THM10_NOTE.into()],
    })
}

fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12}")
    } else {
        format!("{x}")
    }
}

pub fn render_markdown(r: &BatteryReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Verification report\n");
    let _ = writeln!(
        s,
        "seed {:#x}; {} measured polygons per kind, {} trials per single-polygon bound, {} per multi-polygon bound and k\n",
        r.config.seed, r.config.measurement_samples, r.config.single_trials, r.config.multi_trials
    );
    let _ = writeln!(s, "## Summary\n");
    let _ = writeln!(s, "| criterion | result | check |\n|---|---|---|");
    for c in &r.criteria {
        let _ = writeln!(s, "| {} | {} | {} |", c.id, if c.passed { "PASS" } else { "FAIL" }, c.title);
    }
    for c in &r.criteria {
        let _ = writeln!(s, "\n## {}. {}\n\n```", c.id, c.title);
        for d in &c.details {
            let _ = writeln!(s, "{d}");
        }
        let _ = writeln!(s, "```");
    }
    let _ = writeln!(s, "\n## Inradius relation audit\n\n{}\n", r.notes[0]);
    let _ = writeln!(s, "| n | R | printed | reference | difference | printed real |\n|---|---|---|---|---|---|");
    for a in &r.cor1_table {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            a.n,
            a.circumradius,
            fmt_num(a.printed),
            fmt_num(a.reference),
            fmt_num(a.discrepancy),
            a.feasible
        );
    }
    let _ = writeln!(s, "\n## Fixed-perimeter area bound: cos vs cosh\n\n{}\n", r.notes[1]);
    let _ = writeln!(s, "| n | k | T | cosh (implemented) | cos reading |\n|---|---|---|---|---|");
    for row in &r.cos_variant_table {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            row.n,
            row.k,
            fmt_num(row.total),
            fmt_num(row.implemented),
            fmt_num(row.cos_variant)
        );
    }
    s
}
