//! Sum-constrained separable optimization.
//!
//! `F(x) = f(x_1) + ... + f(x_k)` subject to `sum x_i = c` with every `x_i`
//! in an open interval. For strictly convex `f` the minimum sits at the
//! uniform point `(c/k, ..., c/k)`. The module checks that claim three ways:
//! a finite-difference convexity certificate, projected gradient descent,
//! and an exhaustive grid scan. It also drives the randomized checks of the
//! polygon bounds (`verify_theorem`).

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    angle_convexity_threshold, area_admissibility_threshold, evaluate, perimeter_admissibility_threshold,
    BoundKind, TheoremId,
};
use crate::hypmath::{
    acosh, acot, asinh, atanh, euclidean_angle, max_inradius, regular_from_area,
    regular_from_perimeter,
};
use crate::polygon::{
    cyclic_half_angle, cyclic_half_side, tangential_interior_angle, tangential_tangent_length,
    CyclicPolygon, Polygon, PolygonRecord, TangentialPolygon,
};
use crate::sampling::{random_partition, random_split, random_tangential_in, rng_for};
use crate::tol;
use crate::{Error, Result};

/// Finite-difference step relative to the interval width.
const CERT_STEP: f64 = 1e-5;
/// Default number of certificate points.
pub const CERT_POINTS: usize = 64;
/// Gradient difference step.
const GRAD_STEP: f64 = 1e-6;
const MIN_STEP: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100_000;
const RANDOM_STARTS: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Open-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignVerdict {
    ConsistentPositive,
    ConsistentNegative,
    Mixed,
}

impl SignVerdict {
    /// The verdict under which the uniform point is the unique optimum.
    pub fn supports(self, sense: Sense) -> bool {
        matches!(
            (self, sense),
            (SignVerdict::ConsistentPositive, Sense::Minimize)
                | (SignVerdict::ConsistentNegative, Sense::Maximize)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCertificate {
    pub interval: Interval,
    pub grid: Vec<f64>,
    pub second_difference_sign: SignVerdict,
    /// First grid point whose sign differs from the first point's.
    pub first_violation: Option<f64>,
    pub max_abs_second_difference: f64,
}

/// Centered second differences `(f(x-h) - 2f(x) + f(x+h)) / h^2` with
/// `h = 1e-5 * width` at `grid_points` evenly spaced interior points.
pub fn certify_convexity(
    f: &dyn Fn(f64) -> f64,
    interval: Interval,
    grid_points: usize,
) -> Result<ConvexityCertificate> {
    if grid_points < 16 {
        return Err(Error::InvalidParameter(format!(
            "certificate needs at least 16 points, got {grid_points}"
        )));
    }
    let w = interval.width();
    let h = CERT_STEP * w;
    let grid: Vec<f64> = (1..=grid_points)
        .map(|j| interval.lo + w * j as f64 / (grid_points + 1) as f64)
        .collect();
    let mut diffs = Vec::with_capacity(grid_points);
    for &x in &grid {
        let (a, b, c) = (f(x - h), f(x), f(x + h));
        let d = (a - 2.0 * b + c) / (h * h);
        if !d.is_finite() {
            return Err(Error::EvaluationFailure {
                x,
                reason: format!("second difference is {d}"),
            });
        }
        diffs.push(d);
    }
    let first_positive = diffs[0] > 0.0;
    let first_violation = grid
        .iter()
        .zip(&diffs)
        .find(|(_, &d)| if first_positive { d <= 0.0 } else { d >= 0.0 })
        .map(|(&x, _)| x);
    let sign = match (first_violation, first_positive, diffs[0] == 0.0) {
        (None, true, _) => SignVerdict::ConsistentPositive,
        (None, false, false) => SignVerdict::ConsistentNegative,
        _ => SignVerdict::Mixed,
    };
    Ok(ConvexityCertificate {
        interval,
        grid,
        second_difference_sign: sign,
        first_violation: if sign == SignVerdict::Mixed {
            first_violation.or(Some(interval.lo + w / (grid_points + 1) as f64))
        } else {
            None
        },
        max_abs_second_difference: diffs.iter().fold(0.0, |m, d| m.max(d.abs())),
    })
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct SeparableProblem {
    pub name: String,
    f: ScalarFn,
    pub k: usize,
    pub c: f64,
    pub interval: Interval,
    pub sense: Sense,
}

impl fmt::Debug for SeparableProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeparableProblem")
            .field("name", &self.name)
            .field("k", &self.k)
            .field("c", &self.c)
            .field("interval", &self.interval)
            .field("sense", &self.sense)
            .finish()
    }
}

impl SeparableProblem {
    pub fn new(
        name: impl Into<String>,
        f: ScalarFn,
        k: usize,
        c: f64,
        interval: Interval,
        sense: Sense,
    ) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k must be >= 2, got {k}")));
        }
        if !interval.contains(c / k as f64) {
            return Err(Error::InvalidParameter(format!(
                "c/k = {} is outside ({}, {})",
                c / k as f64,
                interval.lo,
                interval.hi
            )));
        }
        Ok(Self { name: name.into(), f, k, c, interval, sense })
    }

    pub fn f(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        x.iter().map(|&v| self.f(v)).sum()
    }

    /// The quantity that is minimized.
    fn signed(&self, x: &[f64]) -> f64 {
        self.sense.sign() * self.objective(x)
    }

    pub fn uniform(&self) -> Vec<f64> {
        vec![self.c / self.k as f64; self.k]
    }

    pub fn certify(&self, grid_points: usize) -> Result<ConvexityCertificate> {
        certify_convexity(&*self.f, self.interval, grid_points)
    }

    fn feasible(&self, x: &[f64]) -> bool {
        x.iter().all(|&v| self.interval.contains(v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub resolution: usize,
    pub step: f64,
    pub evaluated: usize,
    pub min_point: Vec<f64>,
    pub min_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub objective: String,
    pub sense: Sense,
    pub k: usize,
    pub c: f64,
    pub interval: Interval,
    /// Best point found, in the problem's own sense (an argmax when maximizing).
    pub argmin: Vec<f64>,
    pub objective_at_argmin: f64,
    pub uniform_point_objective: f64,
    pub max_deviation_from_uniform: f64,
    pub convexity_certificate: ConvexityCertificate,
    /// The certificate sign matches the sense, so the uniform point is claimed optimal.
    pub certified: bool,
    pub starts: Vec<StartSummary>,
    pub oracle: Option<OracleResult>,
    pub oracle_within_one_cell: Option<bool>,
    pub oracle_agreement: Option<bool>,
}

fn project(x: &mut [f64], c: f64) {
    let shift = (c - x.iter().sum::<f64>()) / x.len() as f64;
    x.iter_mut().for_each(|v| *v += shift);
}

fn gradient(p: &SeparableProblem, x: &[f64]) -> Vec<f64> {
    let s = p.sense.sign();
    x.iter()
        .map(|&v| {
            let room = (v - p.interval.lo).min(p.interval.hi - v);
            let h = GRAD_STEP.min(0.5 * room);
            s * (p.f(v + h) - p.f(v - h)) / (2.0 * h)
        })
        .collect()
}

fn descend(p: &SeparableProblem, start: Vec<f64>) -> StartSummary {
    let mut x = start.clone();
    let mut fx = p.signed(&x);
    let mut step = 0.1 * p.interval.width();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && step >= MIN_STEP {
        iterations += 1;
        let g = gradient(p, &x);
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        let d: Vec<f64> = g.iter().map(|v| v - mean).collect();
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            break;
        }
        let mut y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a - step * b / norm).collect();
        project(&mut y, p.c);
        let fy = if p.feasible(&y) { p.signed(&y) } else { f64::INFINITY };
        if fy < fx {
            x = y;
            fx = fy;
            step *= 2.0;
        } else {
            step *= 0.5;
        }
    }
    StartSummary { start, objective: p.objective(&x), end: x, iterations }
}

/// Projected gradient descent from the uniform point and eight seeded random
/// interior starts; the best end point wins (earliest start on ties).
pub fn solve_equal_sum(problem: &SeparableProblem, seed: u64) -> Result<OptimizationReport> {
    let cert = problem.certify(CERT_POINTS)?;
    let mut starts = vec![problem.uniform()];
    for i in 0..RANDOM_STARTS {
        let mut rng = rng_for(seed, i);
        if let Some(x) = random_split(
            &mut rng,
            problem.k,
            problem.c,
            problem.interval.lo,
            problem.interval.hi,
        ) {
            starts.push(x);
        }
    }
    let runs: Vec<StartSummary> = starts.into_iter().map(|s| descend(problem, s)).collect();
    let sign = problem.sense.sign();
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| (sign * a.1.objective).total_cmp(&(sign * b.1.objective)).then(a.0.cmp(&b.0)))
        .map(|(_, r)| r.clone())
        .expect("uniform start always present");
    let u = problem.c / problem.k as f64;
    Ok(OptimizationReport {
        objective: problem.name.clone(),
        sense: problem.sense,
        k: problem.k,
        c: problem.c,
        interval: problem.interval,
        max_deviation_from_uniform: best.end.iter().fold(0.0, |m, v| m.max((v - u).abs())),
        objective_at_argmin: best.objective,
        argmin: best.end,
        uniform_point_objective: problem.objective(&problem.uniform()),
        certified: cert.second_difference_sign.supports(problem.sense),
        convexity_certificate: cert,
        starts: runs,
        oracle: None,
        oracle_within_one_cell: None,
        oracle_agreement: None,
    })
}

/// Exhaustive scan of the discretized constraint set. The first `k - 1`
/// coordinates run over `lo + j * width / resolution`, `j = 1 .. resolution - 1`;
/// the last is fixed by the sum and must land inside the interval.
pub fn grid_oracle(problem: &SeparableProblem, resolution: usize) -> Result<OracleResult> {
    if problem.k > 3 {
        return Err(Error::OracleTooLarge(problem.k));
    }
    if resolution < 2 {
        return Err(Error::InvalidParameter("resolution must be >= 2".into()));
    }
    let iv = problem.interval;
    let step = iv.width() / resolution as f64;
    let axis: Vec<f64> = (1..resolution).map(|j| iv.lo + j as f64 * step).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evaluated = 0;
    let mut visit = |x: Vec<f64>| {
        if !problem.feasible(&x) {
            return;
        }
        evaluated += 1;
        let v = problem.signed(&x);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, x));
        }
    };
    if problem.k == 2 {
        for &a in &axis {
            visit(vec![a, problem.c - a]);
        }
    } else {
        for &a in &axis {
            for &b in &axis {
                visit(vec![a, b, problem.c - a - b]);
            }
        }
    }
    let (v, x) = best.ok_or_else(|| Error::EvaluationFailure {
        x: problem.c,
        reason: "no grid point satisfies the constraint".into(),
    })?;
    Ok(OracleResult {
        resolution,
        step,
        evaluated,
        min_point: x,
        min_value: problem.sense.sign() * v,
    })
}

/// Grid point within one cell of `target` in the free coordinates.
pub fn within_one_cell(oracle: &OracleResult, target: &[f64]) -> bool {
    let n = oracle.min_point.len() - 1;
    oracle.min_point[..n]
        .iter()
        .zip(target)
        .all(|(a, b)| (a - b).abs() <= oracle.step * (1.0 + 1e-9))
}

/// Run the optimizer and the grid oracle, then judge their agreement.
///
/// The optimizer may beat the grid by at most rounding and the grid may
/// trail it by at most `M k (k - 1) step^2 / 2`, where `M` bounds `|f''|`.
pub fn optimize_with_oracle(
    problem: &SeparableProblem,
    seed: u64,
    resolution: usize,
) -> Result<OptimizationReport> {
    let mut report = solve_equal_sum(problem, seed)?;
    let oracle = grid_oracle(problem, resolution)?;
    let sign = problem.sense.sign();
    let k = problem.k as f64;
    let m = 1.5 * report.convexity_certificate.max_abs_second_difference;
    let slack = 1e-12 * report.objective_at_argmin.abs().max(1.0);
    let bound = 0.5 * m * k * (k - 1.0) * oracle.step * oracle.step + slack;
    let gap = sign * (oracle.min_value - report.objective_at_argmin);
    let cell = within_one_cell(&oracle, &problem.uniform());
    report.oracle_within_one_cell = Some(cell);
    report.oracle_agreement = Some(cell && gap >= -slack && gap <= bound);
    report.oracle = Some(oracle);
    Ok(report)
}

/// The scalar objectives behind the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// `asinh(sin(t/2) sinh R)` over central angles.
    CyclicHalfSide,
    /// `atanh(tan(t/2) sinh r)` over incenter angles.
    TangentialTangentLength,
    /// `acot(cosh R tan(t/2))` over central angles.
    CyclicHalfAngle,
    /// `2 acos(sin(t/2) cosh r)` over incenter angles.
    TangentialInteriorAngle,
    /// `acosh(cos(pi/n) / sin(t/2))` over interior angles of regular n-gons.
    PerimeterFromAngle,
    /// `asin(cos(pi/n) / cosh(x/2n))` over perimeters of regular n-gons.
    AngleFromPerimeter,
    /// `asinh(sin(pi/n) sinh R)` over circumradii.
    SideFromCircumradius,
    /// `atanh(tan(pi/n) sinh r)` over inradii.
    SideFromInradius,
    /// `acot(tan(pi/n) cosh R)` over circumradii.
    AngleFromCircumradius,
    /// `acos(sin(pi/n) cosh r)` over inradii.
    AngleFromInradius,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 10] = [
        ObjectiveKind::CyclicHalfSide,
        ObjectiveKind::TangentialTangentLength,
        ObjectiveKind::CyclicHalfAngle,
        ObjectiveKind::TangentialInteriorAngle,
        ObjectiveKind::PerimeterFromAngle,
        ObjectiveKind::AngleFromPerimeter,
        ObjectiveKind::SideFromCircumradius,
        ObjectiveKind::SideFromInradius,
        ObjectiveKind::AngleFromCircumradius,
        ObjectiveKind::AngleFromInradius,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::CyclicHalfSide => "cyclic_half_side",
            ObjectiveKind::TangentialTangentLength => "tangential_tangent_length",
            ObjectiveKind::CyclicHalfAngle => "cyclic_half_angle",
            ObjectiveKind::TangentialInteriorAngle => "tangential_interior_angle",
            ObjectiveKind::PerimeterFromAngle => "perimeter_from_angle",
            ObjectiveKind::AngleFromPerimeter => "angle_from_perimeter",
            ObjectiveKind::SideFromCircumradius => "side_from_circumradius",
            ObjectiveKind::SideFromInradius => "side_from_inradius",
            ObjectiveKind::AngleFromCircumradius => "angle_from_circumradius",
            ObjectiveKind::AngleFromInradius => "angle_from_inradius",
        }
    }

    /// The bound whose proof optimizes this objective.
    pub fn theorem(self) -> TheoremId {
        match self {
            ObjectiveKind::TangentialTangentLength => TheoremId::T1,
            ObjectiveKind::CyclicHalfSide => TheoremId::T2,
            ObjectiveKind::TangentialInteriorAngle => TheoremId::T3,
            ObjectiveKind::CyclicHalfAngle => TheoremId::T4,
            ObjectiveKind::SideFromCircumradius => TheoremId::T5,
            ObjectiveKind::SideFromInradius => TheoremId::T6,
            ObjectiveKind::AngleFromCircumradius => TheoremId::T7,
            ObjectiveKind::AngleFromInradius => TheoremId::T8,
            ObjectiveKind::PerimeterFromAngle => TheoremId::T9,
            ObjectiveKind::AngleFromPerimeter => TheoremId::T10,
        }
    }

    pub fn for_theorem(t: TheoremId) -> Option<Self> {
        Self::ALL.iter().copied().find(|o| o.theorem() == t)
    }

    /// Sense the bound needs: a perimeter upper bound maximizes half sides,
    /// an area lower bound maximizes the interior angles, and so on.
    pub fn sense(self) -> Sense {
        match self {
            ObjectiveKind::CyclicHalfSide
            | ObjectiveKind::CyclicHalfAngle
            | ObjectiveKind::TangentialInteriorAngle
            | ObjectiveKind::AngleFromCircumradius
            | ObjectiveKind::AngleFromInradius => Sense::Maximize,
            _ => Sense::Minimize,
        }
    }

    /// Sector objectives depend on a fixed polygon radius.
    pub fn needs_radius(self) -> bool {
        matches!(
            self,
            ObjectiveKind::CyclicHalfSide
                | ObjectiveKind::TangentialTangentLength
                | ObjectiveKind::CyclicHalfAngle
                | ObjectiveKind::TangentialInteriorAngle
        )
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown objective {s:?}")))
    }
}

/// A registered objective with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    pub n: u32,
    /// Polygon radius for the sector objectives; ignored otherwise.
    pub radius: f64,
}

/// Largest radius window used by the radius-allocation objectives.
const RADIUS_CAP: f64 = 3.0;

impl ObjectiveSpec {
    pub fn new(kind: ObjectiveKind, n: u32, radius: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("n must be >= 3, got {n}")));
        }
        if kind.needs_radius() && !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        if (kind == ObjectiveKind::TangentialTangentLength || kind == ObjectiveKind::TangentialInteriorAngle)
            && radius >= max_inradius(n) {
                return Err(Error::Infeasible(format!(
                    "no tangential {n}-gon has inradius {radius}"
                )));
            }
        Ok(Self { kind, n, radius })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let a = PI / self.n as f64;
        let nf = self.n as f64;
        let r = self.radius;
        match self.kind {
            ObjectiveKind::CyclicHalfSide => cyclic_half_side(x, r),
            ObjectiveKind::TangentialTangentLength => tangential_tangent_length(x, r).unwrap_or(f64::NAN),
            ObjectiveKind::CyclicHalfAngle => cyclic_half_angle(x, r),
            ObjectiveKind::TangentialInteriorAngle => tangential_interior_angle(x, r).unwrap_or(f64::NAN),
            ObjectiveKind::PerimeterFromAngle => acosh(a.cos() / (0.5 * x).sin()),
            ObjectiveKind::AngleFromPerimeter => (a.cos() / (x / (2.0 * nf)).cosh()).asin(),
            ObjectiveKind::SideFromCircumradius => asinh(a.sin() * x.sinh()),
            ObjectiveKind::SideFromInradius => atanh(a.tan() * x.sinh()),
            ObjectiveKind::AngleFromCircumradius => acot(a.tan() * x.cosh()),
            ObjectiveKind::AngleFromInradius => (a.sin() * x.cosh()).acos(),
        }
    }

    /// Open domain on which `f` is defined.
    pub fn domain(&self) -> Interval {
        let n = self.n;
        let (lo, hi) = match self.kind {
            ObjectiveKind::CyclicHalfSide | ObjectiveKind::CyclicHalfAngle => (0.0, PI),
            ObjectiveKind::TangentialTangentLength | ObjectiveKind::TangentialInteriorAngle => {
                (0.0, PI.min(2.0 * (1.0 / self.radius.sinh()).atan()))
            }
            ObjectiveKind::PerimeterFromAngle => (0.0, euclidean_angle(n)),
            ObjectiveKind::AngleFromPerimeter => (0.0, f64::MAX),
            ObjectiveKind::SideFromCircumradius | ObjectiveKind::AngleFromCircumradius => (0.0, f64::MAX),
            ObjectiveKind::SideFromInradius | ObjectiveKind::AngleFromInradius => (0.0, max_inradius(n)),
        };
        Interval { lo, hi }
    }

    /// Window on which the bound's argument claims convexity (or concavity).
    pub fn window(&self) -> Interval {
        let n = self.n;
        let d = self.domain();
        match self.kind {
            ObjectiveKind::PerimeterFromAngle => Interval { lo: 0.0, hi: angle_convexity_threshold(n) },
            ObjectiveKind::AngleFromPerimeter => {
                let t = perimeter_admissibility_threshold(n);
                Interval { lo: t, hi: 4.0 * t }
            }
            ObjectiveKind::SideFromCircumradius | ObjectiveKind::AngleFromCircumradius => {
                Interval { lo: 0.0, hi: RADIUS_CAP }
            }
            ObjectiveKind::SideFromInradius | ObjectiveKind::AngleFromInradius => {
                Interval { lo: 0.0, hi: d.hi.min(RADIUS_CAP) }
            }
            _ => d,
        }
    }

    /// Window reaching past the admissibility threshold, where the
    /// curvature changes sign. Only the guarded objectives have one.
    pub fn straddle_window(&self) -> Option<Interval> {
        let n = self.n;
        match self.kind {
            ObjectiveKind::PerimeterFromAngle => {
                let t = angle_convexity_threshold(n);
                Some(Interval { lo: 0.5 * t, hi: 0.5 * (t + euclidean_angle(n)) })
            }
            ObjectiveKind::AngleFromPerimeter => {
                let t = perimeter_admissibility_threshold(n);
                Some(Interval { lo: 0.5 * t, hi: 2.0 * t })
            }
            _ => None,
        }
    }

    /// Equal-split point used by default: the regular sector `2 pi / n` for
    /// sector objectives, the window midpoint otherwise.
    pub fn default_center(&self) -> f64 {
        if self.kind.needs_radius() {
            TAU / self.n as f64
        } else {
            self.window().midpoint()
        }
    }

    pub fn scalar_fn(&self) -> ScalarFn {
        let spec = *self;
        Arc::new(move |x| spec.eval(x))
    }

    /// `k` variables summing to `k * center` on `window`.
    pub fn problem(&self, k: usize, center: Option<f64>, window: Option<Interval>) -> Result<SeparableProblem> {
        let window = window.unwrap_or_else(|| self.window());
        let center = center.unwrap_or_else(|| self.default_center());
        SeparableProblem::new(
            format!("{}(n={})", self.kind, self.n),
            self.scalar_fn(),
            k,
            k as f64 * center,
            window,
            self.kind.sense(),
        )
    }
}

/// Default registry instance for each objective at side count `n`. Sector
/// objectives use radius 1, or 0.9 of the largest inradius when smaller.
pub fn registered(n: u32) -> Vec<ObjectiveSpec> {
    ObjectiveKind::ALL
        .iter()
        .map(|&kind| {
            let radius = match kind {
                ObjectiveKind::TangentialTangentLength | ObjectiveKind::TangentialInteriorAngle => {
                    (0.9 * max_inradius(n)).min(1.0)
                }
                _ => 1.0,
            };
            ObjectiveSpec::new(kind, n, radius).expect("registry parameters are valid")
        })
        .collect()
}

/// Randomized checks of a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyParams {
    /// Fixed side count; `None` draws `n` uniformly from 3..=12 per trial.
    pub n: Option<u32>,
    /// Polygon count for the multi-polygon bounds.
    pub k: u32,
    /// Window for the radius (single-polygon bounds) or for the per-polygon
    /// share `T/k` (multi-polygon bounds); `None` uses the default window.
    pub window: Option<(f64, f64)>,
    pub tolerance: f64,
    pub equality_tolerance: f64,
    pub max_counterexamples: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            n: None,
            k: 2,
            window: None,
            tolerance: tol::INEQUALITY,
            equality_tolerance: tol::EQUALITY,
            max_counterexamples: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: u64,
    pub n: u32,
    pub k: u32,
    pub param: f64,
    pub bound: f64,
    pub observed: f64,
    pub margin: f64,
    pub polygons: Vec<PolygonRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub kind: BoundKind,
    pub params: VerifyParams,
    pub seed: u64,
    pub trials: u64,
    pub checked: u64,
    pub skipped_by_guard: u64,
    pub violations: u64,
    /// Smallest `observed - bound` (lower bounds) or `bound - observed`
    /// (upper bounds) over checked trials.
    pub worst_margin: Option<f64>,
    pub worst_relative_margin: Option<f64>,
    /// Largest relative gap between the bound and the regular configuration.
    pub max_equality_gap: f64,
    pub equality_failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.equality_failures == 0
    }
}

enum Trial {
    Skipped,
    Checked {
        margin: f64,
        relative: f64,
        violation: bool,
        equality_gap: f64,
        counterexample: Option<Counterexample>,
    },
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Per-polygon window for `theorem` at side count `n`.
pub fn default_window(theorem: TheoremId, n: u32) -> (f64, f64) {
    let rmax = max_inradius(n);
    match theorem {
        TheoremId::T1 | TheoremId::T3 | TheoremId::T6 | TheoremId::T8 => (0.05, RADIUS_CAP.min(0.98 * rmax)),
        TheoremId::T9 => (area_admissibility_threshold(n), (n as f64 - 2.0) * PI),
        TheoremId::T10 => {
            let t = perimeter_admissibility_threshold(n);
            (t, 4.0 * t)
        }
        _ => (0.05, RADIUS_CAP),
    }
}

/// Piece window imposed by each polygon's own guard in the multi-polygon bounds.
fn piece_window(theorem: TheoremId, n: u32) -> (f64, f64) {
    match theorem {
        TheoremId::T6 | TheoremId::T8 => (0.0, max_inradius(n)),
        TheoremId::T9 => (area_admissibility_threshold(n), (n as f64 - 2.0) * PI),
        TheoremId::T10 => (perimeter_admissibility_threshold(n), f64::INFINITY),
        _ => (0.0, f64::INFINITY),
    }
}

/// A regular polygon and its bounded metric for one piece of a split.
fn regular_piece(theorem: TheoremId, n: u32, x: f64) -> Result<(Polygon, f64)> {
    let nu = n as usize;
    Ok(match theorem {
        TheoremId::T5 => {
            let p = CyclicPolygon::regular(nu, x)?;
            let v = p.perimeter();
            (Polygon::Cyclic(p), v)
        }
        TheoremId::T7 => {
            let p = CyclicPolygon::regular(nu, x)?;
            let v = p.area();
            (Polygon::Cyclic(p), v)
        }
        TheoremId::T6 => {
            let p = TangentialPolygon::regular(nu, x)?;
            let v = p.perimeter();
            (Polygon::Tangential(p), v)
        }
        TheoremId::T8 => {
            let p = TangentialPolygon::regular(nu, x)?;
            let v = p.area();
            (Polygon::Tangential(p), v)
        }
        TheoremId::T9 => {
            let p = CyclicPolygon::regular(nu, regular_from_area(n, x)?.circumradius)?;
            let v = p.perimeter();
            (Polygon::Cyclic(p), v)
        }
        TheoremId::T10 => {
            let p = CyclicPolygon::regular(nu, regular_from_perimeter(n, x)?.circumradius)?;
            let v = p.area();
            (Polygon::Cyclic(p), v)
        }
        _ => unreachable!("single-polygon bound"),
    })
}

fn single_metric(theorem: TheoremId, p: &Polygon) -> f64 {
    match theorem {
        TheoremId::T1 | TheoremId::T2 => p.perimeter(),
        _ => p.area(),
    }
}

fn run_trial(theorem: TheoremId, params: &VerifyParams, seed: u64, index: u64) -> Result<Trial> {
    let mut rng = rng_for(seed, index);
    let n = match params.n {
        Some(n) => n,
        None => rng.gen_range(3..=12u32),
    };
    let (lo, hi) = params.window.unwrap_or_else(|| default_window(theorem, n));
    let draw = if hi > lo { rng.gen_range(lo..hi) } else { lo };
    let k = if theorem.is_multi() { params.k.max(1) } else { 1 };

    let (param, observed, polygons, equality) = if theorem.is_multi() {
        let total = k as f64 * draw;
        let (plo, phi) = piece_window(theorem, n);
        let Some(split) = random_split(&mut rng, k as usize, total, plo, phi) else {
            return Ok(Trial::Skipped);
        };
        let mut observed = 0.0;
        let mut polys = Vec::with_capacity(k as usize);
        for &x in &split {
            let (p, v) = regular_piece(theorem, n, x)?;
            observed += v;
            polys.push(PolygonRecord::from(&p));
        }
        let equality = k as f64 * regular_piece(theorem, n, total / k as f64)?.1;
        (total, observed, polys, equality)
    } else {
        let nu = n as usize;
        let (poly, regular) = match theorem {
            TheoremId::T1 | TheoremId::T3 => {
                // The radius is redrawn below the partition's own cap so that
                // large radii do not starve the sample.
                let Some(p) = random_tangential_in(&mut rng, nu, lo, hi) else {
                    return Ok(Trial::Skipped);
                };
                let r = p.inradius();
                (Polygon::Tangential(p), Polygon::Tangential(TangentialPolygon::regular(nu, r)?))
            }
            _ => {
                let p = CyclicPolygon::new(draw, &random_partition(&mut rng, nu))?;
                (Polygon::Cyclic(p), Polygon::Cyclic(CyclicPolygon::regular(nu, draw)?))
            }
        };
        let observed = single_metric(theorem, &poly);
        let equality = single_metric(theorem, &regular);
        (poly.radius(), observed, vec![PolygonRecord::from(&poly)], equality)
    };

    let b = evaluate(theorem, n, k, param)?;
    if !b.feasible {
        return Ok(Trial::Skipped);
    }
    let margin = match b.kind {
        BoundKind::Lower => observed - b.value,
        BoundKind::Upper => b.value - observed,
    };
    let scale = 1f64.max(b.value.abs());
    let violation = margin < -params.tolerance * scale;
    let counterexample = violation.then_some(Counterexample {
        trial: index,
        n,
        k,
        param,
        bound: b.value,
        observed,
        margin,
        polygons,
    });
    Ok(Trial::Checked {
        margin,
        relative: margin / scale,
        violation,
        equality_gap: relative_gap(equality, b.value),
        counterexample,
    })
}

/// Sample `trials` instances of a bound and check it on each.
///
/// Single-polygon bounds draw a radius from the window and a random angle
/// partition; multi-polygon bounds draw the per-polygon share `T/k` from the
/// window and a random guard-respecting split of `T` into regular polygons.
/// Trial `i` uses stream `i` of `seed`, so the report does not depend on
/// scheduling.
pub fn verify_theorem(
    theorem: TheoremId,
    params: &VerifyParams,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport> {
    if theorem == TheoremId::Cor1 {
        return Err(Error::InvalidParameter(
            "the printed inradius relation is audited, not verified".into(),
        ));
    }
    if let Some(n) = params.n {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("n must be >= 3, got {n}")));
        }
    }
    if theorem.is_multi() && params.k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if let Some((lo, hi)) = params.window {
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad window ({lo}, {hi})")));
        }
    }
    let outcomes: Vec<Result<Trial>> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(theorem, params, seed, i))
        .collect();

    let mut report = VerificationReport {
        theorem,
        kind: theorem.bound_kind(),
        params: params.clone(),
        seed,
        trials,
        checked: 0,
        skipped_by_guard: 0,
        violations: 0,
        worst_margin: None,
        worst_relative_margin: None,
        max_equality_gap: 0.0,
        equality_failures: 0,
        counterexamples: Vec::new(),
    };
    for o in outcomes {
        match o? {
            Trial::Skipped => report.skipped_by_guard += 1,
            Trial::Checked { margin, relative, violation, equality_gap, counterexample } => {
                report.checked += 1;
                report.worst_margin = Some(report.worst_margin.map_or(margin, |m: f64| m.min(margin)));
                report.worst_relative_margin =
                    Some(report.worst_relative_margin.map_or(relative, |m: f64| m.min(relative)));
                report.max_equality_gap = report.max_equality_gap.max(equality_gap);
                if equality_gap > params.equality_tolerance {
                    report.equality_failures += 1;
                }
                if violation {
                    report.violations += 1;
                    if report.counterexamples.len() < params.max_counterexamples {
                        report.counterexamples.extend(counterexample);
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ScalarFn {
        Arc::new(|x: f64| x * x)
    }

    #[test]
    fn certificate_of_square_is_positive() {
        let c = certify_convexity(&|x: f64| x * x, Interval::new(-1.0, 1.0).unwrap(), 32).unwrap();
        assert_eq!(c.second_difference_sign, SignVerdict::ConsistentPositive);
        assert!(c.first_violation.is_none());
        assert!((c.max_abs_second_difference - 2.0).abs() < 1e-4);
        let c = certify_convexity(&|x: f64| x.sin(), Interval::new(-1.0, 1.0).unwrap(), 32).unwrap();
        assert_eq!(c.second_difference_sign, SignVerdict::Mixed);
        assert!(c.first_violation.unwrap() > 0.0);
        assert!(certify_convexity(&|x: f64| x, Interval::new(0.0, 1.0).unwrap(), 8).is_err());
        assert!(matches!(
            certify_convexity(&|x: f64| x.ln(), Interval::new(-1.0, 1.0).unwrap(), 16),
            Err(Error::EvaluationFailure { .. })
        ));
    }

    #[test]
    fn square_problem_solves_to_uniform() {
        let p = SeparableProblem::new("square", square(), 2, 2.0, Interval::new(-5.0, 5.0).unwrap(), Sense::Minimize)
            .unwrap();
        let r = solve_equal_sum(&p, 1).unwrap();
        assert!(r.certified);
        assert!(r.max_deviation_from_uniform < 1e-6);
        assert!((r.objective_at_argmin - 2.0).abs() < 1e-10);
        let o = grid_oracle(&p, 100).unwrap();
        assert_eq!(o.min_point, vec![1.0, 1.0]);
        assert_eq!(o.min_value, 2.0);
    }

    #[test]
    fn problem_validation() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        assert!(SeparableProblem::new("s", square(), 1, 0.5, iv, Sense::Minimize).is_err());
        assert!(SeparableProblem::new("s", square(), 2, 3.0, iv, Sense::Minimize).is_err());
        let p = SeparableProblem::new("s", square(), 4, 2.0, iv, Sense::Minimize).unwrap();
        assert!(matches!(grid_oracle(&p, 60), Err(Error::OracleTooLarge(4))));
        assert!(Interval::new(1.0, 1.0).is_err());
    }

    #[test]
    fn inradius_allocation_is_uniform() {
        let r0 = 0.4;
        let spec = ObjectiveSpec::new(ObjectiveKind::SideFromInradius, 4, 0.0).unwrap();
        let p = spec.problem(3, Some(r0), None).unwrap();
        let r = optimize_with_oracle(&p, 5, 60).unwrap();
        assert!(r.certified);
        assert!(r.argmin.iter().all(|x| (x - r0).abs() < 1e-6), "{:?}", r.argmin);
        assert_eq!(r.oracle_agreement, Some(true));
    }

    #[test]
    fn half_side_sector_problem_maximizes_at_regular() {
        let spec = ObjectiveSpec::new(ObjectiveKind::CyclicHalfSide, 6, 1.2).unwrap();
        let p = spec.problem(3, None, None).unwrap();
        let r = optimize_with_oracle(&p, 5, 60).unwrap();
        assert_eq!(r.sense, Sense::Maximize);
        assert!(r.certified);
        assert!(r.max_deviation_from_uniform < 1e-6);
        assert_eq!(r.oracle_agreement, Some(true));
    }

    #[test]
    fn half_angle_sector_objective_is_convex() {
        // Convex rather than concave: the maximum over the constraint set is
        // not the uniform split.
        let spec = ObjectiveSpec::new(ObjectiveKind::CyclicHalfAngle, 4, 1.0).unwrap();
        let c = spec.problem(2, None, None).unwrap().certify(CERT_POINTS).unwrap();
        assert_eq!(c.second_difference_sign, SignVerdict::ConsistentPositive);
        let r = optimize_with_oracle(&spec.problem(2, None, None).unwrap(), 1, 200).unwrap();
        assert!(!r.certified);
        assert!(r.objective_at_argmin > r.uniform_point_objective);
    }

    #[test]
    fn guarded_objectives_change_curvature_past_threshold() {
        for n in [3u32, 4, 6, 12] {
            for kind in [ObjectiveKind::PerimeterFromAngle, ObjectiveKind::AngleFromPerimeter] {
                let spec = ObjectiveSpec::new(kind, n, 1.0).unwrap();
                let f = spec.scalar_fn();
                let inside = certify_convexity(&*f, spec.window(), CERT_POINTS).unwrap();
                assert_eq!(inside.second_difference_sign, SignVerdict::ConsistentPositive, "{kind} n={n}");
                let across = certify_convexity(&*f, spec.straddle_window().unwrap(), CERT_POINTS).unwrap();
                assert_eq!(across.second_difference_sign, SignVerdict::Mixed, "{kind} n={n}");
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = ObjectiveSpec::new(ObjectiveKind::SideFromCircumradius, 5, 0.0).unwrap();
        let p = spec.problem(3, None, None).unwrap();
        let a = serde_json::to_string(&optimize_with_oracle(&p, 11, 60).unwrap()).unwrap();
        let b = serde_json::to_string(&optimize_with_oracle(&p, 11, 60).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn perimeter_upper_bound_has_no_violations() {
        let params = VerifyParams { n: Some(6), window: Some((0.1, 3.0)), ..Default::default() };
        let r = verify_theorem(TheoremId::T2, &params, 500, 3).unwrap();
        assert_eq!(r.checked, 500);
        assert!(r.passed(), "{r:?}");
        assert!(r.max_equality_gap < 1e-12);
    }

    #[test]
    fn below_threshold_is_skipped() {
        let t = area_admissibility_threshold(4);
        let params = VerifyParams { n: Some(4), k: 3, window: Some((0.2 * t, 0.9 * t)), ..Default::default() };
        let r = verify_theorem(TheoremId::T9, &params, 200, 1).unwrap();
        assert_eq!(r.skipped_by_guard, 200);
        assert_eq!(r.checked, 0);
    }

    #[test]
    fn zero_tolerance_counts_rounding_as_violation_only_at_equality() {
        let params = VerifyParams { n: Some(4), tolerance: 0.0, ..Default::default() };
        let r = verify_theorem(TheoremId::T1, &params, 200, 2).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn verification_is_scheduling_independent() {
        let params = VerifyParams::default();
        let a = verify_theorem(TheoremId::T8, &params, 300, 9).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| verify_theorem(TheoremId::T8, &params, 300, 9).unwrap());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn cyclic_area_counterexample_is_reported() {
        let params = VerifyParams { n: Some(4), window: Some((1.0, 1.0)), ..Default::default() };
        let r = verify_theorem(TheoremId::T4, &params, 200, 4).unwrap();
        assert!(r.violations > 0);
        let c = &r.counterexamples[0];
        let p = Polygon::try_from(c.polygons[0].clone()).unwrap();
        assert!((p.area() - c.observed).abs() < 1e-12);
        assert!(c.observed < c.bound);
    }
}
