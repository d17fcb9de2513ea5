//! Hyperbolic trigonometry kernel.
//!
//! Right-angled triangles, the hyperbolic law of cosines and regular n-gon
//! conversions. Inverse hyperbolic functions are evaluated in `log1p` form so
//! that small radii keep full relative precision.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `acosh(1 + t)` for `t >= 0`, accurate for tiny `t`.
pub fn acosh1p(t: f64) -> f64 {
    if t > 1e150 {
        return std::f64::consts::LN_2 + t.ln();
    }
    (t + (t * (t + 2.0)).sqrt()).ln_1p()
}

/// `acosh(x)` for `x >= 1`; NaN below the domain.
pub fn acosh(x: f64) -> f64 {
    if x < 1.0 {
        return f64::NAN;
    }
    acosh1p(x - 1.0)
}

/// Sign-symmetric `asinh` in `log1p` form.
pub fn asinh(x: f64) -> f64 {
    let ax = x.abs();
    let y = if ax > 1e150 {
        std::f64::consts::LN_2 + ax.ln()
    } else {
        (ax + ax * ax / (1.0 + (1.0 + ax * ax).sqrt())).ln_1p()
    };
    y.copysign(x)
}

/// `atanh(x) = log1p(2x / (1 - x)) / 2`; `+inf` at 1, NaN beyond.
pub fn atanh(x: f64) -> f64 {
    if x.abs() > 1.0 {
        return f64::NAN;
    }
    0.5 * (2.0 * x / (1.0 - x)).ln_1p()
}

/// Principal inverse cotangent with range `(0, pi)`.
pub fn acot(x: f64) -> f64 {
    1f64.atan2(x)
}

/// Hypotenuse of a right triangle with legs `b` and `c`: `cosh a = cosh b cosh c`.
///
/// Evaluated through `cosh a - 1 = 2 sinh^2(b/2) cosh c + 2 sinh^2(c/2)` so
/// that tiny legs do not cancel.
pub fn hyp_hypotenuse(b: f64, c: f64) -> Result<f64> {
    if !(b >= 0.0 && c >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "legs must be nonnegative, got ({b}, {c})"
        )));
    }
    let sb = (0.5 * b).sinh();
    let sc = (0.5 * c).sinh();
    let t = 2.0 * sb * sb * c.cosh() + 2.0 * sc * sc;
    if !t.is_finite() {
        return Err(Error::OutOfRange(format!("legs ({b}, {c}) overflow cosh")));
    }
    Ok(acosh1p(t))
}

/// Angle opposite side `c` in a hyperbolic triangle with sides `a`, `b`, `c`.
///
/// Law of cosines, evaluated through the half-angle form
/// `tan^2(C/2) = sinh(s-a) sinh(s-b) / (sinh s sinh(s-c))`.
pub fn angle_from_sides(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::DegenerateTriangle(format!(
            "sides must be positive, got ({a}, {b}, {c})"
        )));
    }
    let s = 0.5 * (a + b + c);
    let sin2 = (s - a).sinh() * (s - b).sinh();
    let cos2 = s.sinh() * (s - c).sinh();
    let cos_c = (cos2 - sin2) / (a.sinh() * b.sinh());
    if !cos_c.is_finite() || cos_c.abs() > 1.0 + 1e-9 {
        return Err(Error::DegenerateTriangle(format!(
            "sides ({a}, {b}, {c}) violate the triangle inequality (cos = {cos_c})"
        )));
    }
    Ok(2.0 * sin2.max(0.0).sqrt().atan2(cos2.max(0.0).sqrt()))
}

/// A right triangle with the right angle at `A`.
///
/// `a` is the hypotenuse, `b` and `c` the legs, `angle_b` / `angle_c` the
/// angles opposite `b` / `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RightTriangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub angle_b: f64,
    pub angle_c: f64,
}

/// One known element of a right triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Known {
    Hypotenuse(f64),
    LegB(f64),
    LegC(f64),
    AngleB(f64),
    AngleC(f64),
}

impl Known {
    fn slot(self) -> usize {
        match self {
            Known::Hypotenuse(_) => 0,
            Known::LegB(_) => 1,
            Known::LegC(_) => 2,
            Known::AngleB(_) => 3,
            Known::AngleC(_) => 4,
        }
    }

    fn value(self) -> f64 {
        match self {
            Known::Hypotenuse(v)
            | Known::LegB(v)
            | Known::LegC(v)
            | Known::AngleB(v)
            | Known::AngleC(v) => v,
        }
    }

    /// Swap the roles of `B` and `C`.
    fn mirrored(self) -> Known {
        match self {
            Known::Hypotenuse(v) => Known::Hypotenuse(v),
            Known::LegB(v) => Known::LegC(v),
            Known::LegC(v) => Known::LegB(v),
            Known::AngleB(v) => Known::AngleC(v),
            Known::AngleC(v) => Known::AngleB(v),
        }
    }

    fn validate(self) -> Result<()> {
        let v = self.value();
        let ok = match self {
            Known::AngleB(_) | Known::AngleC(_) => v > 0.0 && v < FRAC_PI_2,
            _ => v > 0.0 && v.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{self:?} out of range")))
        }
    }
}

impl RightTriangle {
    /// Build from the two legs; everything else follows.
    pub fn from_legs(b: f64, c: f64) -> Result<Self> {
        let a = hyp_hypotenuse(b, c)?;
        Ok(RightTriangle {
            a,
            b,
            c,
            angle_b: b.tanh().atan2(c.sinh()),
            angle_c: c.tanh().atan2(b.sinh()),
        })
    }

    fn mirrored(self) -> Self {
        RightTriangle {
            a: self.a,
            b: self.c,
            c: self.b,
            angle_b: self.angle_c,
            angle_c: self.angle_b,
        }
    }

    /// Relative residuals of the six classical right-triangle relations:
    /// `cosh a = cosh b cosh c`, `cosh a = cot B cot C`, `sinh b = sin B sinh a`,
    /// `sinh c = cot B tanh b`, `cos C = cosh c sin B`, `cos B = tanh c coth a`.
    pub fn relation_residuals(&self) -> [f64; 6] {
        let RightTriangle {
            a,
            b,
            c,
            angle_b,
            angle_c,
        } = *self;
        let rel = |l: f64, r: f64| (l - r).abs() / l.abs().max(r.abs()).max(f64::MIN_POSITIVE);
        [
            rel(a.cosh(), b.cosh() * c.cosh()),
            rel(a.cosh(), 1.0 / (angle_b.tan() * angle_c.tan())),
            rel(b.sinh(), angle_b.sin() * a.sinh()),
            rel(c.sinh(), b.tanh() / angle_b.tan()),
            rel(angle_c.cos(), c.cosh() * angle_b.sin()),
            rel(angle_b.cos(), c.tanh() / a.tanh()),
        ]
    }
}

/// Solve a right triangle from exactly two known elements (all ten pairs).
///
/// Known values are copied into the result unchanged; the rest is derived
/// from the two legs.
pub fn solve_right_triangle(known: &[Known]) -> Result<RightTriangle> {
    let mut slots = [false; 5];
    for k in known {
        slots[k.slot()] = true;
    }
    let distinct = slots.iter().filter(|&&s| s).count();
    if known.len() != 2 || distinct != 2 {
        return Err(Error::AmbiguousInput(distinct));
    }
    for k in known {
        k.validate()?;
    }
    let (mut p, mut q) = (known[0], known[1]);
    if p.slot() > q.slot() {
        std::mem::swap(&mut p, &mut q);
    }
    // Pairs whose canonical form lives on the C side are solved mirrored.
    let mirror = matches!(
        (p, q),
        (Known::Hypotenuse(_), Known::LegC(_))
            | (Known::Hypotenuse(_), Known::AngleC(_))
            | (Known::LegC(_), Known::AngleC(_))
            | (Known::LegB(_), Known::AngleC(_))
    );
    if mirror {
        let (mp, mq) = (p.mirrored(), q.mirrored());
        let (p2, q2) = if mp.slot() <= mq.slot() { (mp, mq) } else { (mq, mp) };
        return solve_canonical(p2, q2).map(RightTriangle::mirrored);
    }
    solve_canonical(p, q)
}

fn solve_canonical(p: Known, q: Known) -> Result<RightTriangle> {
    use Known::*;
    let infeasible = |why: String| Err(Error::Infeasible(why));
    let mut tri = match (p, q) {
        (Hypotenuse(a), LegB(b)) => {
            if b >= a {
                return infeasible(format!("leg {b} not shorter than hypotenuse {a}"));
            }
            let t = 2.0 * (0.5 * (a + b)).sinh() * (0.5 * (a - b)).sinh() / b.cosh();
            RightTriangle::from_legs(b, acosh1p(t))?
        }
        (LegB(b), LegC(c)) => RightTriangle::from_legs(b, c)?,
        (Hypotenuse(a), AngleB(angle_b)) => {
            let b = asinh(angle_b.sin() * a.sinh());
            let c = atanh(angle_b.cos() * a.tanh());
            RightTriangle::from_legs(b, c)?
        }
        (LegB(b), AngleB(angle_b)) => {
            let c = asinh(b.tanh() / angle_b.tan());
            RightTriangle::from_legs(b, c)?
        }
        (LegC(c), AngleB(angle_b)) => {
            let x = angle_b.tan() * c.sinh();
            if x >= 1.0 {
                return infeasible(format!(
                    "tan B sinh c = {x} >= 1 (angle too large for adjacent leg)"
                ));
            }
            RightTriangle::from_legs(atanh(x), c)?
        }
        (AngleB(angle_b), AngleC(angle_c)) => {
            let gap = FRAC_PI_2 - angle_b - angle_c;
            if gap <= 4.0 * f64::EPSILON {
                return infeasible(format!(
                    "B + C = {} >= pi/2, so cot B cot C <= 1",
                    angle_b + angle_c
                ));
            }
            let s = (0.5 * gap).sin();
            let tb = 2.0 * (0.5 * (angle_b - angle_c + FRAC_PI_2)).sin() * s / angle_c.sin();
            let tc = 2.0 * (0.5 * (angle_c - angle_b + FRAC_PI_2)).sin() * s / angle_b.sin();
            RightTriangle::from_legs(acosh1p(tb), acosh1p(tc))?
        }
        _ => unreachable!("non-canonical pair {p:?}, {q:?}"),
    };
    for k in [p, q] {
        match k {
            Hypotenuse(v) => tri.a = v,
            LegB(v) => tri.b = v,
            LegC(v) => tri.c = v,
            AngleB(v) => tri.angle_b = v,
            AngleC(v) => tri.angle_c = v,
        }
    }
    Ok(tri)
}

/// The quantity that pins down a regular n-gon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefiningQuantity {
    Circumradius(f64),
    Inradius(f64),
    InteriorAngle(f64),
    Side(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularNGonSpec {
    pub n: u32,
    pub quantity: DefiningQuantity,
}

impl RegularNGonSpec {
    pub fn new(n: u32, quantity: DefiningQuantity) -> Self {
        RegularNGonSpec { n, quantity }
    }
}

/// All metrics of a regular hyperbolic n-gon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularNGon {
    pub n: u32,
    pub circumradius: f64,
    pub inradius: f64,
    pub interior_angle: f64,
    pub side: f64,
    pub perimeter: f64,
    pub area: f64,
}

/// Upper end of the interior-angle range, `(n - 2) pi / n`.
pub fn euclidean_angle(n: u32) -> f64 {
    (n as f64 - 2.0) * PI / n as f64
}

/// Largest inradius of a regular n-gon with finite vertices: `asinh(cot(pi/n))`.
pub fn max_inradius(n: u32) -> f64 {
    asinh(1.0 / (PI / n as f64).tan())
}

fn check_n(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n must be >= 3, got {n}")));
    }
    Ok(())
}

/// Inradius and half-side of a regular n-gon with angle deficit
/// `delta = (n - 2) pi / n - theta` per vertex.
fn legs_from_deficit(n: u32, delta: f64) -> (f64, f64) {
    let alpha = PI / n as f64;
    let theta = euclidean_angle(n) - delta;
    let s = (0.25 * delta).sin();
    let t_half_side =
        2.0 * (0.5 * (FRAC_PI_2 - alpha + 0.5 * theta)).cos() * s / (0.5 * theta).sin();
    let t_inradius = 2.0 * (0.5 * (FRAC_PI_2 - 0.5 * theta + alpha)).cos() * s / alpha.sin();
    (acosh1p(t_inradius), acosh1p(t_half_side))
}

fn assemble(n: u32, inradius: f64, half_side: f64) -> Result<RegularNGon> {
    let nf = n as f64;
    let circumradius = hyp_hypotenuse(inradius, half_side)?;
    let interior_angle = 2.0 * inradius.tanh().atan2(half_side.sinh());
    // Fan of 2n right triangles, each with defect 2 atan(tanh(r/2) tanh(h/2)).
    let area = 4.0 * nf * ((0.5 * inradius).tanh() * (0.5 * half_side).tanh()).atan();
    Ok(RegularNGon {
        n,
        circumradius,
        inradius,
        interior_angle,
        side: 2.0 * half_side,
        perimeter: 2.0 * nf * half_side,
        area,
    })
}

/// Convert any defining quantity of a regular n-gon into all the others.
///
/// The decomposition is the right triangle with hypotenuse `R`, legs `r` and
/// `side / 2`, angle `pi/n` at the centre and `theta / 2` at the vertex.
pub fn regular_convert(spec: RegularNGonSpec) -> Result<RegularNGon> {
    let n = spec.n;
    check_n(n)?;
    let alpha = PI / n as f64;
    let bad = |what: &str, v: f64| Err(Error::Infeasible(format!("{what} = {v} for n = {n}")));
    match spec.quantity {
        DefiningQuantity::Circumradius(big_r) => {
            if !(big_r > 0.0 && big_r.is_finite()) {
                return bad("circumradius", big_r);
            }
            let h = asinh(alpha.sin() * big_r.sinh());
            let r = atanh(alpha.cos() * big_r.tanh());
            let mut g = assemble(n, r, h)?;
            g.circumradius = big_r;
            Ok(g)
        }
        DefiningQuantity::Inradius(r) => {
            let x = alpha.tan() * r.sinh();
            if !(r > 0.0 && x < 1.0) {
                return bad("inradius", r);
            }
            let mut g = assemble(n, r, atanh(x))?;
            g.inradius = r;
            Ok(g)
        }
        DefiningQuantity::InteriorAngle(theta) => {
            if !(theta > 0.0 && theta < euclidean_angle(n)) {
                return bad("interior angle", theta);
            }
            let delta = euclidean_angle(n) - theta;
            let (r, h) = legs_from_deficit(n, delta);
            let mut g = assemble(n, r, h)?;
            g.interior_angle = theta;
            g.area = n as f64 * delta;
            Ok(g)
        }
        DefiningQuantity::Side(side) => {
            if !(side > 0.0 && side.is_finite()) {
                return bad("side", side);
            }
            let h = 0.5 * side;
            let r = asinh(h.tanh() / alpha.tan());
            let mut g = assemble(n, r, h)?;
            g.side = side;
            Ok(g)
        }
    }
}

/// Regular n-gon of a given area, `0 < area < (n - 2) pi`.
pub fn regular_from_area(n: u32, area: f64) -> Result<RegularNGon> {
    check_n(n)?;
    let limit = (n as f64 - 2.0) * PI;
    if !(area > 0.0 && area < limit) {
        return Err(Error::Infeasible(format!(
            "area {area} outside (0, {limit}) for n = {n}"
        )));
    }
    let delta = area / n as f64;
    let (r, h) = legs_from_deficit(n, delta);
    let mut g = assemble(n, r, h)?;
    g.interior_angle = euclidean_angle(n) - delta;
    g.area = area;
    Ok(g)
}

/// Regular n-gon of a given perimeter.
pub fn regular_from_perimeter(n: u32, perimeter: f64) -> Result<RegularNGon> {
    let mut g = regular_convert(RegularNGonSpec::new(
        n,
        DefiningQuantity::Side(perimeter / n as f64),
    ))?;
    g.perimeter = perimeter;
    Ok(g)
}
