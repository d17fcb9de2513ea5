//! Cyclic and tangential polygons and their closed-form metrics.
//!
//! Both kinds are described by a radius and a partition of the full angle at
//! the centre into `n` sector angles. For a cyclic polygon sector `i` is the
//! isosceles triangle between vertices `i` and `i + 1`; for a tangential
//! polygon sector `i` is the kite between tangency points `i` and `i + 1`
//! with vertex `i` on its bisector.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::hypmath::{acot, asinh, atanh};
use crate::tol::{ANGLE_SUM, GUARD_SLACK};
use crate::{Error, Result};

/// Half of the chord cut by a central angle `theta` on a circle of radius `big_r`:
/// `sinh b = sin(theta/2) sinh R`.
pub fn cyclic_half_side(theta: f64, big_r: f64) -> f64 {
    asinh((0.5 * theta).sin() * big_r.sinh())
}

/// Tangent length from a vertex of a tangential polygon: `tanh b = sinh r tan(theta/2)`.
pub fn tangential_tangent_length(theta: f64, r: f64) -> Result<f64> {
    let x = r.sinh() * (0.5 * theta).tan();
    if !(x < 1.0 - GUARD_SLACK) {
        return Err(Error::IdealVertex(format!(
            "tan(theta/2) sinh r = {x} >= 1 for theta = {theta}, r = {r}"
        )));
    }
    Ok(atanh(x))
}

/// Base angle of the isosceles sector of a cyclic polygon:
/// `cot phi = cosh R tan(theta/2)`.
pub fn cyclic_half_angle(theta: f64, big_r: f64) -> f64 {
    acot(big_r.cosh() * (0.5 * theta).tan())
}

/// Interior angle at the vertex of a tangential sector:
/// `cos(phi/2) = sin(theta/2) cosh r`.
pub fn tangential_interior_angle(theta: f64, r: f64) -> Result<f64> {
    let x = (0.5 * theta).sin() * r.cosh();
    if x > 1.0 + GUARD_SLACK {
        return Err(Error::IdealVertex(format!(
            "sin(theta/2) cosh r = {x} > 1 for theta = {theta}, r = {r}"
        )));
    }
    Ok(2.0 * x.min(1.0).acos())
}

/// Check the partition invariant and rescale sums that are off by at most
/// [`ANGLE_SUM`].
fn normalize_thetas(thetas: &[f64]) -> Result<Vec<f64>> {
    let n = thetas.len();
    if n < 3 {
        return Err(Error::InvalidPolygon(format!("need n >= 3 sectors, got {n}")));
    }
    if let Some((i, t)) = thetas
        .iter()
        .enumerate()
        .find(|(_, &t)| !(t > 0.0 && t < PI))
    {
        return Err(Error::InvalidPolygon(format!(
            "sector angle {i} = {t} outside (0, pi)"
        )));
    }
    let sum: f64 = thetas.iter().sum();
    if (sum - TAU).abs() > ANGLE_SUM {
        return Err(Error::InvalidPolygon(format!(
            "sector angles sum to {sum}, expected 2 pi"
        )));
    }
    let scale = TAU / sum;
    Ok(thetas.iter().map(|t| t * scale).collect())
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidPolygon(format!("radius must be positive, got {radius}")));
    }
    Ok(())
}

/// A centred cyclic polygon: circumradius plus central angles.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicPolygon {
    circumradius: f64,
    thetas: Vec<f64>,
}

impl CyclicPolygon {
    pub fn new(circumradius: f64, thetas: &[f64]) -> Result<Self> {
        check_radius(circumradius)?;
        Ok(CyclicPolygon {
            circumradius,
            thetas: normalize_thetas(thetas)?,
        })
    }

    pub fn regular(n: usize, circumradius: f64) -> Result<Self> {
        Self::new(circumradius, &vec![TAU / n as f64; n])
    }

    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn perimeter(&self) -> f64 {
        self.thetas
            .iter()
            .map(|&t| 2.0 * cyclic_half_side(t, self.circumradius))
            .sum()
    }

    /// Angle at vertex `i`, which sits between sectors `i - 1` and `i`.
    pub fn interior_angles(&self) -> Vec<f64> {
        let phi: Vec<f64> = self
            .thetas
            .iter()
            .map(|&t| cyclic_half_angle(t, self.circumradius))
            .collect();
        let n = phi.len();
        (0..n).map(|i| phi[(i + n - 1) % n] + phi[i]).collect()
    }

    pub fn area(&self) -> f64 {
        let n = self.n() as f64;
        (n - 2.0) * PI - self.interior_angles().iter().sum::<f64>()
    }
}

/// A tangential polygon: inradius plus incentre angles.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentialPolygon {
    inradius: f64,
    thetas: Vec<f64>,
}

impl TangentialPolygon {
    pub fn new(inradius: f64, thetas: &[f64]) -> Result<Self> {
        check_radius(inradius)?;
        let thetas = normalize_thetas(thetas)?;
        for &t in &thetas {
            tangential_tangent_length(t, inradius)?;
        }
        Ok(TangentialPolygon { inradius, thetas })
    }

    pub fn regular(n: usize, inradius: f64) -> Result<Self> {
        Self::new(inradius, &vec![TAU / n as f64; n])
    }

    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Tangent lengths `b(theta_i)`; finite by construction.
    pub fn tangent_lengths(&self) -> Vec<f64> {
        self.thetas
            .iter()
            .map(|&t| tangential_tangent_length(t, self.inradius).expect("validated on construction"))
            .collect()
    }

    /// Side `i` joins vertices `i` and `i + 1` and has length `b_i + b_{i+1}`.
    pub fn side_lengths(&self) -> Vec<f64> {
        let b = self.tangent_lengths();
        let n = b.len();
        (0..n).map(|i| b[i] + b[(i + 1) % n]).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.tangent_lengths().iter().map(|b| 2.0 * b).sum()
    }

    pub fn interior_angles(&self) -> Vec<f64> {
        self.thetas
            .iter()
            .map(|&t| tangential_interior_angle(t, self.inradius).expect("validated on construction"))
            .collect()
    }

    pub fn area(&self) -> f64 {
        let n = self.n() as f64;
        (n - 2.0) * PI - self.interior_angles().iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolygonKind {
    Cyclic,
    Tangential,
}

/// Wire form of a polygon; `radius` is `R` for cyclic and `r` for tangential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonRecord {
    pub kind: PolygonKind,
    pub n: usize,
    pub radius: f64,
    pub thetas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonRecord", into = "PolygonRecord")]
pub enum Polygon {
    Cyclic(CyclicPolygon),
    Tangential(TangentialPolygon),
}

impl Polygon {
    pub fn new(kind: PolygonKind, radius: f64, thetas: &[f64]) -> Result<Self> {
        Ok(match kind {
            PolygonKind::Cyclic => Polygon::Cyclic(CyclicPolygon::new(radius, thetas)?),
            PolygonKind::Tangential => Polygon::Tangential(TangentialPolygon::new(radius, thetas)?),
        })
    }

    pub fn kind(&self) -> PolygonKind {
        match self {
            Polygon::Cyclic(_) => PolygonKind::Cyclic,
            Polygon::Tangential(_) => PolygonKind::Tangential,
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            Polygon::Cyclic(p) => p.circumradius(),
            Polygon::Tangential(p) => p.inradius(),
        }
    }

    pub fn thetas(&self) -> &[f64] {
        match self {
            Polygon::Cyclic(p) => p.thetas(),
            Polygon::Tangential(p) => p.thetas(),
        }
    }

    pub fn n(&self) -> usize {
        self.thetas().len()
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Polygon::Cyclic(p) => p.perimeter(),
            Polygon::Tangential(p) => p.perimeter(),
        }
    }

    pub fn interior_angles(&self) -> Vec<f64> {
        match self {
            Polygon::Cyclic(p) => p.interior_angles(),
            Polygon::Tangential(p) => p.interior_angles(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Polygon::Cyclic(p) => p.area(),
            Polygon::Tangential(p) => p.area(),
        }
    }

    /// Largest deviation of a sector angle from `2 pi / n`.
    pub fn max_sector_deviation(&self) -> f64 {
        let mean = TAU / self.n() as f64;
        self.thetas()
            .iter()
            .map(|t| (t - mean).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_regular(&self) -> bool {
        self.max_sector_deviation() <= ANGLE_SUM
    }
}

impl TryFrom<PolygonRecord> for Polygon {
    type Error = Error;

    fn try_from(rec: PolygonRecord) -> Result<Self> {
        if rec.n != rec.thetas.len() {
            return Err(Error::InvalidPolygon(format!(
                "n = {} but {} sector angles given",
                rec.n,
                rec.thetas.len()
            )));
        }
        Polygon::new(rec.kind, rec.radius, &rec.thetas)
    }
}

impl From<Polygon> for PolygonRecord {
    fn from(p: Polygon) -> Self {
        PolygonRecord {
            kind: p.kind(),
            n: p.n(),
            radius: p.radius(),
            thetas: p.thetas().to_vec(),
        }
    }
}

impl From<&Polygon> for PolygonRecord {
    fn from(p: &Polygon) -> Self {
        p.clone().into()
    }
}
