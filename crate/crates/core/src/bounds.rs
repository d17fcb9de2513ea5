//! Evaluators for the perimeter and area bounds.
//!
//! Single-polygon bounds take a radius; the multi-polygon bounds take a
//! polygon count `k` and a total `T` (of circumradii, inradii, areas or
//! perimeters). Guards never raise: an inadmissible parameter yields a
//! result with `feasible = false` that callers must not assert against.
//!
//! Values are computed through the regular n-gon conversions in
//! [`crate::hypmath`], which are algebraically identical to the printed
//! closed forms but keep precision at small radii.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::hypmath::{
    asinh, atanh, euclidean_angle, max_inradius, regular_convert, regular_from_area,
    regular_from_perimeter, DefiningQuantity, RegularNGon, RegularNGonSpec,
};
use crate::tol::GUARD_SLACK;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "1.1")]
    T1,
    #[serde(rename = "1.2")]
    T2,
    #[serde(rename = "1.3")]
    T3,
    #[serde(rename = "1.4")]
    T4,
    #[serde(rename = "1.5")]
    T5,
    #[serde(rename = "1.6")]
    T6,
    #[serde(rename = "1.7")]
    T7,
    #[serde(rename = "1.8")]
    T8,
    #[serde(rename = "1.9")]
    T9,
    #[serde(rename = "1.10")]
    T10,
    #[serde(rename = "cor1")]
    Cor1,
}

impl TheoremId {
    pub const THEOREMS: [TheoremId; 10] = [
        TheoremId::T1,
        TheoremId::T2,
        TheoremId::T3,
        TheoremId::T4,
        TheoremId::T5,
        TheoremId::T6,
        TheoremId::T7,
        TheoremId::T8,
        TheoremId::T9,
        TheoremId::T10,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TheoremId::T1 => "1.1",
            TheoremId::T2 => "1.2",
            TheoremId::T3 => "1.3",
            TheoremId::T4 => "1.4",
            TheoremId::T5 => "1.5",
            TheoremId::T6 => "1.6",
            TheoremId::T7 => "1.7",
            TheoremId::T8 => "1.8",
            TheoremId::T9 => "1.9",
            TheoremId::T10 => "1.10",
            TheoremId::Cor1 => "cor1",
        }
    }

    /// Bounds over several polygons with a shared total.
    pub fn is_multi(self) -> bool {
        matches!(
            self,
            TheoremId::T5
                | TheoremId::T6
                | TheoremId::T7
                | TheoremId::T8
                | TheoremId::T9
                | TheoremId::T10
        )
    }

    pub fn bound_kind(self) -> BoundKind {
        match self {
            TheoremId::T2 | TheoremId::T10 => BoundKind::Upper,
            _ => BoundKind::Lower,
        }
    }

    /// What the scalar parameter of the evaluator means.
    pub fn parameter(self) -> &'static str {
        match self {
            TheoremId::T1 | TheoremId::T3 => "inradius",
            TheoremId::T2 | TheoremId::T4 | TheoremId::Cor1 => "circumradius",
            TheoremId::T5 | TheoremId::T7 => "total circumradius",
            TheoremId::T6 | TheoremId::T8 => "total inradius",
            TheoremId::T9 => "total area",
            TheoremId::T10 => "total perimeter",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("thm").unwrap_or(s);
        TheoremId::THEOREMS
            .iter()
            .copied()
            .chain([TheoremId::Cor1])
            .find(|t| t.label() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown theorem id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
}

/// The polygon quantity a bound constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Perimeter,
    Area,
    Inradius,
}

impl Metric {
    pub fn of(self, g: &RegularNGon) -> f64 {
        match self {
            Metric::Perimeter => g.perimeter,
            Metric::Area => g.area,
            Metric::Inradius => g.inradius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub theorem: TheoremId,
    pub n: u32,
    pub k: u32,
    pub param: f64,
    pub value: f64,
    pub kind: BoundKind,
    pub metric: Metric,
    pub feasible: bool,
    /// Signed distance to the admissibility threshold (positive inside).
    pub guard_margin: Option<f64>,
    /// Regular n-gon that attains the bound; `k` copies of it for multi-polygon bounds.
    pub equality_spec: Option<RegularNGonSpec>,
}

impl BoundResult {
    /// The bound recomputed from the extremal configuration.
    pub fn equality_value(&self) -> Option<f64> {
        let spec = self.equality_spec?;
        let g = regular_convert(spec).ok()?;
        Some(self.k as f64 * self.metric.of(&g))
    }
}

fn check_single(n: u32, radius: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n must be >= 3, got {n}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    Ok(())
}

fn check_multi(n: u32, k: u32, total: f64) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n must be >= 3, got {n}")));
    }
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::InvalidTotal(format!("total must be positive, got {total}")));
    }
    Ok(())
}

const BOUNDARY_SNAP: f64 = 4.0 * f64::EPSILON;

fn alpha(n: u32) -> f64 {
    PI / n as f64
}

/// `tan(pi/n) sinh r`; below 1 exactly when the regular n-gon of inradius `r`
/// has finite vertices.
fn inradius_guard(n: u32, r: f64) -> f64 {
    alpha(n).tan() * r.sinh()
}

/// Interior-angle threshold below which the perimeter-from-angle objective is
/// convex: `2 asin(sqrt(1 - sin(pi/n)))`.
pub fn angle_convexity_threshold(n: u32) -> f64 {
    2.0 * (1.0 - alpha(n).sin()).sqrt().asin()
}

/// Per-polygon area above which the fixed-total-area bound applies:
/// `(n - 2) pi - 2n asin(sqrt(1 - sin(pi/n)))`.
pub fn area_admissibility_threshold(n: u32) -> f64 {
    let nf = n as f64;
    (nf - 2.0) * PI - nf * angle_convexity_threshold(n)
}

/// Per-polygon perimeter above which the fixed-total-perimeter bound
/// applies: `2n acosh(sqrt(1 + sin(pi/n)))`.
pub fn perimeter_admissibility_threshold(n: u32) -> f64 {
    2.0 * n as f64 * crate::hypmath::acosh((1.0 + alpha(n).sin()).sqrt())
}

/// Inradius of the regular n-gon with circumradius `R`: `tanh r = cos(pi/n) tanh R`.
pub fn reference_r_from_big_r(n: u32, big_r: f64) -> f64 {
    atanh(alpha(n).cos() * big_r.tanh())
}

/// Perimeter lower bound for a tangential n-gon of inradius `r`:
/// `2n atanh(tan(pi/n) sinh r)`.
pub fn thm1_peri_lower(n: u32, r: f64) -> Result<BoundResult> {
    check_single(n, r)?;
    let x = inradius_guard(n, r);
    let feasible = x < 1.0 - GUARD_SLACK;
    Ok(BoundResult {
        theorem: TheoremId::T1,
        n,
        k: 1,
        param: r,
        value: 2.0 * n as f64 * atanh(x),
        kind: BoundKind::Lower,
        metric: Metric::Perimeter,
        feasible,
        guard_margin: Some(max_inradius(n) - r),
        equality_spec: feasible.then(|| RegularNGonSpec::new(n, DefiningQuantity::Inradius(r))),
    })
}

/// Perimeter upper bound for a cyclic n-gon of circumradius `R`:
/// `2n asinh(sin(pi/n) sinh R)`.
pub fn thm2_peri_upper(n: u32, big_r: f64) -> Result<BoundResult> {
    check_single(n, big_r)?;
    Ok(BoundResult {
        theorem: TheoremId::T2,
        n,
        k: 1,
        param: big_r,
        value: 2.0 * n as f64 * asinh(alpha(n).sin() * big_r.sinh()),
        kind: BoundKind::Upper,
        metric: Metric::Perimeter,
        feasible: true,
        guard_margin: None,
        equality_spec: Some(RegularNGonSpec::new(n, DefiningQuantity::Circumradius(big_r))),
    })
}

/// Area lower bound for a tangential n-gon of inradius `r`:
/// `(n - 2) pi - 2n acos(sin(pi/n) cosh r)`, admissible while the cosine
/// argument is at most one.
pub fn thm3_area_lower(n: u32, r: f64) -> Result<BoundResult> {
    check_single(n, r)?;
    let nf = n as f64;
    let x = alpha(n).sin() * r.cosh();
    let feasible = x <= 1.0 + GUARD_SLACK;
    let value = if feasible {
        // asin(x) - pi/n with the difference of squares taken by hand, so
        // neither small r nor x near one loses digits.
        let (s, c) = alpha(n).sin_cos();
        // Within a few ulps of one the input cannot be told apart from the
        // ideal boundary, where the value has a square-root singularity.
        let root = if 1.0 - x <= BOUNDARY_SNAP {
            0.0
        } else {
            ((1.0 - x) * (1.0 + x)).sqrt()
        };
        let sh = r.sinh();
        2.0 * nf * (s * sh * sh / (r.cosh() * c + root)).asin()
    } else {
        (nf - 2.0) * PI - 2.0 * nf * x.acos()
    };
    let spec = RegularNGonSpec::new(n, DefiningQuantity::Inradius(r));
    Ok(BoundResult {
        theorem: TheoremId::T3,
        n,
        k: 1,
        param: r,
        value,
        kind: BoundKind::Lower,
        metric: Metric::Area,
        feasible,
        guard_margin: Some(max_inradius(n) - r),
        equality_spec: regular_convert(spec).ok().map(|_| spec),
    })
}

/// Area bound for a cyclic n-gon of circumradius `R`:
/// `(n - 2) pi - 2n acot(tan(pi/n) cosh R)`, stated as a lower bound.
pub fn thm4_area_lower(n: u32, big_r: f64) -> Result<BoundResult> {
    check_single(n, big_r)?;
    let spec = RegularNGonSpec::new(n, DefiningQuantity::Circumradius(big_r));
    Ok(BoundResult {
        theorem: TheoremId::T4,
        n,
        k: 1,
        param: big_r,
        value: regular_convert(spec)?.area,
        kind: BoundKind::Lower,
        metric: Metric::Area,
        feasible: true,
        guard_margin: None,
        equality_spec: Some(spec),
    })
}

/// Inradius/circumradius relation evaluated exactly as printed,
/// `asinh(tan(pi/n) / tan(2n asinh(sin(pi/n) sinh R)))`, next to the
/// right-triangle reference `atanh(cos(pi/n) tanh R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cor1Audit {
    pub n: u32,
    pub circumradius: f64,
    pub printed: f64,
    pub reference: f64,
    pub discrepancy: f64,
    /// The inner tangent is positive, so the printed expression is a real
    /// positive number.
    pub feasible: bool,
}

pub fn cor1_audit(n: u32, big_r: f64) -> Result<Cor1Audit> {
    check_single(n, big_r)?;
    let inner = 2.0 * n as f64 * asinh(alpha(n).sin() * big_r.sinh());
    let t = inner.tan();
    let printed = asinh(alpha(n).tan() / t);
    let reference = reference_r_from_big_r(n, big_r);
    Ok(Cor1Audit {
        n,
        circumradius: big_r,
        printed,
        reference,
        discrepancy: printed - reference,
        feasible: t > 0.0,
    })
}

/// The printed inradius relation as a bound record. It carries no equality
/// configuration: its value does not match the regular polygon's inradius.
pub fn cor1_inradius_lower(n: u32, big_r: f64) -> Result<BoundResult> {
    let audit = cor1_audit(n, big_r)?;
    Ok(BoundResult {
        theorem: TheoremId::Cor1,
        n,
        k: 1,
        param: big_r,
        value: audit.printed,
        kind: BoundKind::Lower,
        metric: Metric::Inradius,
        feasible: audit.feasible,
        guard_margin: None,
        equality_spec: None,
    })
}

fn scale_to_total(mut single: BoundResult, theorem: TheoremId, k: u32, total: f64) -> BoundResult {
    single.theorem = theorem;
    single.k = k;
    single.param = total;
    single.value *= k as f64;
    single
}

/// Total perimeter lower bound for `k` regular cyclic n-gons with total circumradius `T`.
pub fn thm5_total_peri_lower(n: u32, k: u32, total: f64) -> Result<BoundResult> {
    check_multi(n, k, total)?;
    let mut b = scale_to_total(thm2_peri_upper(n, total / k as f64)?, TheoremId::T5, k, total);
    b.kind = BoundKind::Lower;
    Ok(b)
}

/// Total perimeter lower bound for `k` tangential n-gons with total inradius `T`.
pub fn thm6_total_peri_lower(n: u32, k: u32, total: f64) -> Result<BoundResult> {
    check_multi(n, k, total)?;
    Ok(scale_to_total(thm1_peri_lower(n, total / k as f64)?, TheoremId::T6, k, total))
}

/// Total area lower bound for `k` cyclic n-gons with total circumradius `T`.
pub fn thm7_total_area_lower(n: u32, k: u32, total: f64) -> Result<BoundResult> {
    check_multi(n, k, total)?;
    Ok(scale_to_total(thm4_area_lower(n, total / k as f64)?, TheoremId::T7, k, total))
}

/// Total area lower bound for `k` tangential n-gons with total inradius `T`.
pub fn thm8_total_area_lower(n: u32, k: u32, total: f64) -> Result<BoundResult> {
    check_multi(n, k, total)?;
    Ok(scale_to_total(thm3_area_lower(n, total / k as f64)?, TheoremId::T8, k, total))
}

/// Total perimeter lower bound for `k` n-gons with total area `T`:
/// `2nk acosh(cos(pi/n) / sin(((n - 2) pi - T/k) / 2n))`.
pub fn thm9_total_peri_lower(n: u32, k: u32, total: f64) -> Result<BoundResult> {
    check_multi(n, k, total)?;
    let kf = k as f64;
    let limit = kf * (n as f64 - 2.0) * PI;
    if total >= limit {
        return Err(Error::InvalidTotal(format!(
            "total area {total} reaches the ideal limit k (n - 2) pi = {limit}"
        )));
    }
    let per = total / kf;
    let g = regular_from_area(n, per)?;
    let margin = per - area_admissibility_threshold(n);
    Ok(BoundResult {
        theorem: TheoremId::T9,
        n,
        k,
        param: total,
        value: kf * g.perimeter,
        kind: BoundKind::Lower,
        metric: Metric::Perimeter,
        feasible: margin > 0.0,
        guard_margin: Some(margin),
        equality_spec: Some(RegularNGonSpec::new(
            n,
            DefiningQuantity::InteriorAngle(euclidean_angle(n) - per / n as f64),
        )),
    })
}

/// Total area upper bound for `k` n-gons with total perimeter `T`:
/// `k (n - 2) pi - 2nk asin(cos(pi/n) / cosh(T / 2nk))`.
pub fn thm10_total_area_upper(n: u32, k: u32, total: f64) -> Result<BoundResult> {
    check_multi(n, k, total)?;
    let kf = k as f64;
    let per = total / kf;
    let g = regular_from_perimeter(n, per)?;
    let margin = per - perimeter_admissibility_threshold(n);
    Ok(BoundResult {
        theorem: TheoremId::T10,
        n,
        k,
        param: total,
        value: kf * g.area,
        kind: BoundKind::Upper,
        metric: Metric::Area,
        feasible: margin > 0.0,
        guard_margin: Some(margin),
        equality_spec: Some(RegularNGonSpec::new(n, DefiningQuantity::Side(per / n as f64))),
    })
}

/// The fixed-total-perimeter bound with `cos(T / 2nk)` in place of
/// `cosh(T / 2nk)`, kept only to quantify the difference between the two
/// readings. NaN where the `asin` argument leaves `[-1, 1]`.
pub fn thm10_cos_variant(n: u32, k: u32, total: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    kf * (nf - 2.0) * PI - 2.0 * nf * kf * (alpha(n).cos() / (total / (2.0 * nf * kf)).cos()).asin()
}

/// Evaluate any bound by id; single-polygon ids require `k == 1`.
pub fn evaluate(theorem: TheoremId, n: u32, k: u32, param: f64) -> Result<BoundResult> {
    if !theorem.is_multi() && k != 1 {
        return Err(Error::InvalidParameter(format!(
            "theorem {theorem} concerns a single polygon; k must be 1"
        )));
    }
    match theorem {
        TheoremId::T1 => thm1_peri_lower(n, param),
        TheoremId::T2 => thm2_peri_upper(n, param),
        TheoremId::T3 => thm3_area_lower(n, param),
        TheoremId::T4 => thm4_area_lower(n, param),
        TheoremId::Cor1 => cor1_inradius_lower(n, param),
        TheoremId::T5 => thm5_total_peri_lower(n, k, param),
        TheoremId::T6 => thm6_total_peri_lower(n, k, param),
        TheoremId::T7 => thm7_total_area_lower(n, k, param),
        TheoremId::T8 => thm8_total_area_lower(n, k, param),
        TheoremId::T9 => thm9_total_peri_lower(n, k, param),
        TheoremId::T10 => thm10_total_area_upper(n, k, param),
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::hypmath::{acosh, acot};
    use crate::tol::rel_err;

    // 50-digit mpmath references.
    const FOUR_LN_3: f64 = 4.394_449_154_672_439;
    const EIGHT_LN_3: f64 = 8.788_898_309_344_878;
    const TWELVE_LN_1P_SQRT2: f64 = 10.576_483_044_234_516;
    const TWENTY_FOUR_LN_1P_SQRT2: f64 = 21.152_966_088_469_033;
    const THM9_THRESHOLD_N4: f64 = 1.708_314_345_569_904_5;
    const THM9_THRESHOLD_N3: f64 = 0.893_186_057_337_352_8;
    const THM10_THRESHOLD_N4: f64 = 6.114_283_677_923_993;
    const THM10_THRESHOLD_N12: f64 = 11.736_426_013_280_729;
    const COR1_N4_R1_PRINTED: f64 = -2.159_765_006_172_485;
    const COR1_N4_R1_REFERENCE: f64 = 0.602_080_559_268_716_9;
    const REGULAR_SQUARE_THETA1_PERIMETER: f64 = 7.517_046_549_106_67;

    /// Printed closed forms, evaluated naively.
    fn printed(theorem: TheoremId, n: u32, k: u32, t: f64) -> f64 {
        let (nf, kf) = (n as f64, k as f64);
        let a = PI / nf;
        let per = t / kf;
        match theorem {
            TheoremId::T1 | TheoremId::T6 => 2.0 * nf * kf * (a.tan() * per.sinh()).atanh(),
            TheoremId::T2 | TheoremId::T5 => 2.0 * nf * kf * (a.sin() * per.sinh()).asinh(),
            TheoremId::T3 | TheoremId::T8 => kf * ((nf - 2.0) * PI - 2.0 * nf * (a.sin() * per.cosh()).acos()),
            TheoremId::T4 | TheoremId::T7 => kf * ((nf - 2.0) * PI - 2.0 * nf * acot(a.tan() * per.cosh())),
            TheoremId::T9 => 2.0 * nf * kf * (a.cos() / (((nf - 2.0) * PI - per) / (2.0 * nf)).sin()).acosh(),
            TheoremId::T10 => kf * (nf - 2.0) * PI - 2.0 * nf * kf * (a.cos() / (per / (2.0 * nf)).cosh()).asin(),
            TheoremId::Cor1 => unreachable!(),
        }
    }

    #[test]
    fn stable_values_match_printed_forms() {
        for theorem in TheoremId::THEOREMS {
            for n in [3u32, 4, 7] {
                for k in if theorem.is_multi() { vec![1u32, 2, 5] } else { vec![1] } {
                    let per: Vec<f64> = match theorem {
                        TheoremId::T9 => vec![0.3, 0.9 * (n as f64 - 2.0) * PI],
                        TheoremId::T10 => vec![1.0, 12.0, 30.0],
                        TheoremId::T1 | TheoremId::T3 | TheoremId::T6 | TheoremId::T8 => {
                            vec![0.1, 0.5 * max_inradius(n)]
                        }
                        _ => vec![0.1, 1.0, 3.0],
                    };
                    for p in per {
                        let t = p * k as f64;
                        let b = evaluate(theorem, n, k, t).unwrap();
                        let want = printed(theorem, n, k, t);
                        assert!(rel_err(b.value, want) < 1e-12, "{theorem} n={n} k={k} T={t}: {} vs {want}", b.value);
                    }
                }
            }
        }
    }

    #[test]
    fn analytic_anchors() {
        assert!(rel_err(thm1_peri_lower(4, asinh(0.5)).unwrap().value, FOUR_LN_3) < 1e-14);
        assert!(rel_err(thm2_peri_upper(6, asinh(2.0)).unwrap().value, TWELVE_LN_1P_SQRT2) < 1e-14);
        let b3 = thm3_area_lower(6, acosh(2.0)).unwrap();
        assert!(b3.feasible);
        assert!(rel_err(b3.value, 4.0 * PI) < 1e-14, "{}", b3.value);
        assert!(thm4_area_lower(4, 1e-9).unwrap().value < 1e-17);
        assert!(rel_err(thm5_total_peri_lower(6, 2, 2.0 * asinh(2.0)).unwrap().value, TWENTY_FOUR_LN_1P_SQRT2) < 1e-14);
        assert!(rel_err(thm6_total_peri_lower(4, 2, 2.0 * asinh(0.5)).unwrap().value, EIGHT_LN_3) < 1e-14);
        let b8 = thm8_total_area_lower(6, 2, 2.0 * acosh(2.0)).unwrap();
        assert!(b8.feasible && rel_err(b8.value, 8.0 * PI) < 1e-14);
    }

    #[test]
    fn euclidean_limits() {
        let r = 1e-7;
        for n in [3u32, 4, 9] {
            let a = PI / n as f64;
            let nf = n as f64;
            assert!(rel_err(thm1_peri_lower(n, r).unwrap().value, 2.0 * nf * a.tan() * r) < 1e-12);
            assert!(rel_err(thm2_peri_upper(n, r).unwrap().value, 2.0 * nf * a.sin() * r) < 1e-12);
            assert!(rel_err(thm3_area_lower(n, r).unwrap().value, nf * a.tan() * r * r) < 1e-12);
            assert!(rel_err(thm4_area_lower(n, r).unwrap().value, nf * a.sin() * a.cos() * r * r) < 1e-12);
        }
    }

    #[test]
    fn ideal_limits() {
        for n in [3u32, 5] {
            let b = thm4_area_lower(n, 30.0).unwrap();
            assert!(rel_err(b.value, (n as f64 - 2.0) * PI) < 1e-12);
            let b = thm10_total_area_upper(n, 3, 1e4).unwrap();
            assert!(rel_err(b.value, 3.0 * (n as f64 - 2.0) * PI) < 1e-12);
        }
    }

    #[test]
    fn guards() {
        let edge = asinh(1.0 / (PI / 3.0).tan());
        assert!(!thm1_peri_lower(3, edge).unwrap().feasible);
        assert!(thm1_peri_lower(3, 0.999 * edge).unwrap().feasible);
        assert!(!thm3_area_lower(3, 1.01 * acosh(1.0 / (PI / 3.0).sin())).unwrap().feasible);
        assert!(!thm6_total_peri_lower(3, 2, 2.0 * edge).unwrap().feasible);
        assert!(thm2_peri_upper(3, 20.0).unwrap().feasible);
        assert!(matches!(thm9_total_peri_lower(4, 2, 4.0 * PI), Err(Error::InvalidTotal(_))));
        assert!(thm1_peri_lower(2, 1.0).is_err());
        assert!(thm1_peri_lower(4, 0.0).is_err());
        assert!(thm5_total_peri_lower(4, 0, 1.0).is_err());
        assert!(evaluate(TheoremId::T1, 4, 2, 0.5).is_err());
    }

    #[test]
    fn thresholds_match_oracle() {
        assert!(rel_err(area_admissibility_threshold(4), THM9_THRESHOLD_N4) < 1e-14);
        assert!(rel_err(area_admissibility_threshold(3), THM9_THRESHOLD_N3) < 1e-14);
        assert!(rel_err(area_admissibility_threshold(6), PI) < 1e-14);
        assert!(rel_err(perimeter_admissibility_threshold(4), THM10_THRESHOLD_N4) < 1e-14);
        assert!(rel_err(perimeter_admissibility_threshold(12), THM10_THRESHOLD_N12) < 1e-14);
    }

    #[test]
    fn thm9_flag_semantics_and_margin() {
        let thr = area_admissibility_threshold(4);
        let below = thm9_total_peri_lower(4, 3, 3.0 * 0.9 * thr).unwrap();
        assert!(!below.feasible && below.value.is_finite());
        assert!(below.guard_margin.unwrap() < 0.0);
        let above = thm9_total_peri_lower(4, 3, 3.0 * 1.1 * thr).unwrap();
        assert!(above.feasible && above.guard_margin.unwrap() > 0.0);
    }

    #[test]
    fn thm9_and_thm10_single_polygon_round_trips() {
        // Regular square with interior angle 1: perimeter from the 50-digit oracle.
        let area = 2.0 * PI - 4.0;
        let b = thm9_total_peri_lower(4, 1, area).unwrap();
        assert!(rel_err(b.value, REGULAR_SQUARE_THETA1_PERIMETER) < 1e-13);
        let back = thm10_total_area_upper(4, 1, b.value).unwrap();
        assert!(rel_err(back.value, area) < 1e-12);
    }

    #[test]
    fn equality_specs_reproduce_values() {
        for theorem in TheoremId::THEOREMS {
            let (k, t) = match theorem {
                TheoremId::T9 => (3, 3.0 * 2.5),
                TheoremId::T10 => (3, 3.0 * 9.0),
                t if t.is_multi() => (3, 3.0 * 0.6),
                _ => (1, 0.6),
            };
            let b = evaluate(theorem, 4, k, t).unwrap();
            let eq = b.equality_value().unwrap();
            assert!(rel_err(eq, b.value) < 1e-11, "{theorem}: {eq} vs {}", b.value);
        }
    }

    #[test]
    fn totals_are_k_times_single() {
        for (multi, single) in [
            (TheoremId::T5, TheoremId::T2),
            (TheoremId::T6, TheoremId::T1),
            (TheoremId::T7, TheoremId::T4),
            (TheoremId::T8, TheoremId::T3),
        ] {
            for k in [1u32, 2, 5] {
                let t = 0.7 * k as f64;
                let m = evaluate(multi, 5, k, t).unwrap().value;
                let s = evaluate(single, 5, 1, t / k as f64).unwrap().value;
                assert!(rel_err(m, k as f64 * s) < 1e-12);
            }
        }
    }

    #[test]
    fn single_bounds_increase_with_radius() {
        for theorem in [TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4] {
            let mut last = f64::NEG_INFINITY;
            for i in 1..=40 {
                let r = 0.02 * i as f64;
                let v = evaluate(theorem, 4, 1, r).unwrap().value;
                assert!(v > last);
                last = v;
            }
        }
    }

    #[test]
    fn cor1_printed_formula_disagrees_with_reference() {
        let a = cor1_audit(4, 1.0).unwrap();
        assert!(rel_err(a.printed, COR1_N4_R1_PRINTED) < 1e-12);
        assert!(rel_err(a.reference, COR1_N4_R1_REFERENCE) < 1e-14);
        assert!(!a.feasible);
        let b = cor1_inradius_lower(4, 1.0).unwrap();
        assert!(b.equality_spec.is_none());
    }

    #[test]
    fn cor1_reference_is_regular_inradius() {
        for n in [3u32, 6, 11] {
            for big_r in [0.2, 1.0, 2.7] {
                let g = regular_convert(RegularNGonSpec::new(n, DefiningQuantity::Circumradius(big_r))).unwrap();
                assert!(rel_err(reference_r_from_big_r(n, big_r), g.inradius) < 1e-12);
            }
        }
    }

    #[test]
    fn theorem_ids_parse_and_print() {
        for t in TheoremId::THEOREMS {
            assert_eq!(t.label().parse::<TheoremId>().unwrap(), t);
        }
        assert_eq!("cor1".parse::<TheoremId>().unwrap(), TheoremId::Cor1);
        assert_eq!("thm1.10".parse::<TheoremId>().unwrap(), TheoremId::T10);
        assert!("1.11".parse::<TheoremId>().is_err());
        assert_eq!(serde_json::to_string(&TheoremId::T10).unwrap(), "\"1.10\"");
    }
}
