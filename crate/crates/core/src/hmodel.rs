//! Hyperboloid model of the hyperbolic plane.
//!
//! Points live on the upper sheet `x0^2 - x1^2 - x2^2 = 1` of Minkowski
//! 3-space. Every polygon closed form in [`crate::polygon`] is checked
//! against distances and angles measured here, so nothing in this module
//! reuses the sector formulas.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::hypmath::{angle_from_sides, asinh, hyp_hypotenuse};
use crate::polygon::{CyclicPolygon, Polygon, PolygonKind, TangentialPolygon};
use crate::tol::EPS_GEOM;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

impl HPoint {
    pub const ORIGIN: HPoint = HPoint {
        x0: 1.0,
        x1: 0.0,
        x2: 0.0,
    };

    /// Checked constructor: the sheet equation must hold to [`EPS_GEOM`]
    /// relative to `x0^2`.
    pub fn new(x0: f64, x1: f64, x2: f64) -> Result<Self> {
        let p = HPoint { x0, x1, x2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let defect = self.x0 * self.x0 - self.x1 * self.x1 - self.x2 * self.x2 - 1.0;
        if !(self.x0 >= 1.0 - EPS_GEOM) || defect.abs() > EPS_GEOM * self.x0 * self.x0 {
            return Err(Error::InvalidPoint(format!("{self:?} has sheet defect {defect}")));
        }
        Ok(())
    }

    /// Minkowski bilinear form `p0 q0 - p1 q1 - p2 q2`.
    pub fn minkowski(&self, other: &HPoint) -> f64 {
        self.x0 * other.x0 - self.x1 * other.x1 - self.x2 * other.x2
    }

    /// Rotation by `angle` about the origin, an isometry fixing `ORIGIN`.
    pub fn rotated(&self, angle: f64) -> HPoint {
        let (s, c) = angle.sin_cos();
        HPoint {
            x0: self.x0,
            x1: c * self.x1 - s * self.x2,
            x2: s * self.x1 + c * self.x2,
        }
    }

    /// Bearing of the point as seen from the origin.
    pub fn bearing(&self) -> f64 {
        self.x2.atan2(self.x1)
    }
}

/// Point at distance `d` from the origin in direction `alpha`.
pub fn point_at(d: f64, alpha: f64) -> HPoint {
    let s = d.sinh();
    HPoint {
        x0: d.cosh(),
        x1: s * alpha.cos(),
        x2: s * alpha.sin(),
    }
}

fn dist_unchecked(p: &HPoint, q: &HPoint) -> f64 {
    // -<p-q, p-q> = 2 (<p,q> - 1) = 4 sinh^2(d/2); no cancellation for close points.
    let (d0, d1, d2) = (p.x0 - q.x0, p.x1 - q.x1, p.x2 - q.x2);
    let chord2 = (d1 * d1 + d2 * d2 - d0 * d0).max(0.0);
    2.0 * asinh(0.5 * chord2.sqrt())
}

/// Hyperbolic distance `acosh(<p, q>)`.
pub fn dist(p: &HPoint, q: &HPoint) -> Result<f64> {
    p.validate()?;
    q.validate()?;
    Ok(dist_unchecked(p, q))
}

/// Point at parameter `t` in `[0, 1]` on the geodesic from `p` to `q`.
pub fn geodesic_point(p: &HPoint, q: &HPoint, t: f64) -> HPoint {
    let d = dist_unchecked(p, q);
    if d == 0.0 {
        return *p;
    }
    let (wp, wq) = (((1.0 - t) * d).sinh() / d.sinh(), (t * d).sinh() / d.sinh());
    HPoint {
        x0: wp * p.x0 + wq * q.x0,
        x1: wp * p.x1 + wq * q.x1,
        x2: wp * p.x2 + wq * q.x2,
    }
}

/// Distance from `c` to the geodesic segment `[p, q]`, minimised over the
/// segment parameter by golden-section search to `1e-10`.
pub fn distance_to_segment(c: &HPoint, p: &HPoint, q: &HPoint) -> f64 {
    let f = |t: f64| dist_unchecked(c, &geodesic_point(p, q, t));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-10 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    f(0.5 * (lo + hi)).min(f(0.0)).min(f(1.0))
}

/// A polygon realised on the hyperboloid with its centre at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub center: HPoint,
    pub vertices: Vec<HPoint>,
    /// Incircle tangency points; empty for cyclic embeddings.
    pub tangency_points: Vec<HPoint>,
    pub kind: PolygonKind,
}

fn cumulative(thetas: &[f64]) -> Vec<f64> {
    thetas
        .iter()
        .scan(0.0, |acc, &t| {
            let start = *acc;
            *acc += t;
            Some(start)
        })
        .collect()
}

/// Vertex `i` at distance `R` and bearing `theta_0 + ... + theta_{i-1}`.
pub fn embed_cyclic(p: &CyclicPolygon) -> Embedding {
    let big_r = p.circumradius();
    Embedding {
        center: HPoint::ORIGIN,
        vertices: cumulative(p.thetas())
            .into_iter()
            .map(|alpha| point_at(big_r, alpha))
            .collect(),
        tangency_points: Vec::new(),
        kind: PolygonKind::Cyclic,
    }
}

/// Tangency point `i` at distance `r` and bearing `theta_0 + ... + theta_{i-1}`;
/// vertex `i` on the bisector of sector `i` at distance `d_i` with
/// `cosh d_i = cosh r cosh b_i`.
pub fn embed_tangential(p: &TangentialPolygon) -> Result<Embedding> {
    let r = p.inradius();
    let starts = cumulative(p.thetas());
    let lengths = p.tangent_lengths();
    let mut vertices = Vec::with_capacity(p.n());
    for ((&start, &theta), &b) in starts.iter().zip(p.thetas()).zip(&lengths) {
        if !b.is_finite() {
            return Err(Error::IdealVertex(format!("sector {theta} at r = {r}")));
        }
        vertices.push(point_at(hyp_hypotenuse(r, b)?, start + 0.5 * theta));
    }
    Ok(Embedding {
        center: HPoint::ORIGIN,
        vertices,
        tangency_points: starts.into_iter().map(|alpha| point_at(r, alpha)).collect(),
        kind: PolygonKind::Tangential,
    })
}

pub fn embed(p: &Polygon) -> Result<Embedding> {
    match p {
        Polygon::Cyclic(c) => Ok(embed_cyclic(c)),
        Polygon::Tangential(t) => embed_tangential(t),
    }
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    fn vertex(&self, i: usize) -> &HPoint {
        &self.vertices[i % self.n()]
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| dist_unchecked(self.vertex(i), self.vertex(i + 1)))
            .collect()
    }

    /// Angles of fan triangle `(center, v_i, v_{i+1})`:
    /// `[at center, at v_i, at v_{i+1}]`.
    pub fn fan_triangle_angles(&self, i: usize) -> Result<[f64; 3]> {
        let (p, q) = (self.vertex(i), self.vertex(i + 1));
        let cp = dist_unchecked(&self.center, p);
        let cq = dist_unchecked(&self.center, q);
        let pq = dist_unchecked(p, q);
        Ok([
            angle_from_sides(cp, cq, pq)?,
            angle_from_sides(cp, pq, cq)?,
            angle_from_sides(cq, pq, cp)?,
        ])
    }

    /// Sum of the fan triangles' angles at the centre.
    pub fn central_angle_sum(&self) -> Result<f64> {
        (0..self.n())
            .map(|i| self.fan_triangle_angles(i).map(|a| a[0]))
            .sum()
    }

    /// Interior angle at every vertex, assembled from the two fan triangles
    /// meeting there.
    pub fn measured_interior_angles(&self) -> Result<Vec<f64>> {
        let n = self.n();
        let fans = (0..n)
            .map(|i| self.fan_triangle_angles(i))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..n).map(|i| fans[(i + n - 1) % n][2] + fans[i][1]).collect())
    }

    /// Distance from the centre to each side's geodesic segment.
    pub fn apothems(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| distance_to_segment(&self.center, self.vertex(i), self.vertex(i + 1)))
            .collect()
    }
}

/// Sum of consecutive vertex distances.
pub fn measured_perimeter(e: &Embedding) -> f64 {
    e.side_lengths().iter().sum()
}

/// Sum of fan-triangle angle defects.
pub fn measured_area(e: &Embedding) -> Result<f64> {
    (0..e.n())
        .map(|i| e.fan_triangle_angles(i).map(|a| PI - a.iter().sum::<f64>()))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::rel_err;
    use std::f64::consts::TAU;

    #[test]
    fn distance_basics() {
        let o = HPoint::ORIGIN;
        assert_eq!(dist(&o, &o).unwrap(), 0.0);
        for alpha in [0.0, 1.0, -2.5] {
            let d = 1.7;
            assert!(rel_err(dist(&o, &point_at(d, alpha)).unwrap(), d) < 1e-14);
        }
        assert!(rel_err(dist(&point_at(0.8, 0.0), &point_at(0.8, PI)).unwrap(), 1.6) < 1e-14);
        assert_eq!(point_at(0.0, 0.3), HPoint { x0: 1.0, x1: 0.0, x2: 0.0 });
    }

    #[test]
    fn chord_formula() {
        // 50-digit reference for d = 0.7, bearings 0.3 and 2.1.
        let want = 1.127_722_875_960_573_2;
        let (d, a, b) = (0.7f64, 0.3f64, 2.1f64);
        let got = dist(&point_at(d, a), &point_at(d, b)).unwrap();
        assert!(rel_err(got, want) < 1e-14);
        let via_cosh = (d.cosh().powi(2) - d.sinh().powi(2) * (a - b).cos()).acosh();
        assert!(rel_err(got, via_cosh) < 1e-13);
    }

    #[test]
    fn off_sheet_points_are_rejected() {
        assert!(HPoint::new(1.0, 0.5, 0.0).is_err());
        let bad = HPoint { x0: 2.0, x1: 0.0, x2: 0.0 };
        assert!(matches!(dist(&bad, &HPoint::ORIGIN), Err(Error::InvalidPoint(_))));
        assert!(HPoint::new(2f64.sqrt(), 1.0, 0.0).is_ok());
    }

    #[test]
    fn geodesic_point_stays_on_sheet_and_splits_distance() {
        let (p, q) = (point_at(1.2, 0.4), point_at(2.0, 2.9));
        let d = dist(&p, &q).unwrap();
        let m = geodesic_point(&p, &q, 0.3);
        m.validate().unwrap();
        assert!(rel_err(dist(&p, &m).unwrap(), 0.3 * d) < 1e-12);
        assert!(rel_err(dist(&m, &q).unwrap(), 0.7 * d) < 1e-12);
    }

    #[test]
    fn regular_cyclic_embedding_has_equal_chords() {
        let p = CyclicPolygon::regular(7, 1.1).unwrap();
        let e = embed_cyclic(&p);
        let sides = e.side_lengths();
        assert!(sides.iter().all(|s| (s - sides[0]).abs() < 1e-10));
        assert!((e.central_angle_sum().unwrap() - TAU).abs() < 1e-10);
    }

    #[test]
    fn cyclic_chords_match_sector_formula() {
        let thetas = [0.5, 1.9, 2.2, TAU - 4.6];
        let big_r = 1.4;
        let e = embed_cyclic(&CyclicPolygon::new(big_r, &thetas).unwrap());
        for (s, t) in e.side_lengths().iter().zip(thetas) {
            let closed = 2.0 * asinh((0.5 * t).sin() * f64::sinh(big_r));
            assert!((s - closed).abs() < 1e-10);
        }
    }

    #[test]
    fn regular_tangential_sides_touch_incircle() {
        for r in [0.1, 0.6, 1.0] {
            let e = embed_tangential(&TangentialPolygon::regular(5, r).unwrap()).unwrap();
            let d0 = dist_unchecked(&e.center, &e.vertices[0]);
            for v in &e.vertices {
                assert!((dist_unchecked(&e.center, v) - d0).abs() < 1e-12);
            }
            for a in e.apothems() {
                assert!((a - r).abs() < 1e-9, "apothem {a} vs r {r}");
            }
        }
    }

    #[test]
    fn irregular_tangential_sides_touch_incircle_at_tangency_points() {
        let p = TangentialPolygon::new(0.35, &[1.0, 1.7, 2.1, TAU - 4.8]).unwrap();
        let e = embed_tangential(&p).unwrap();
        for a in e.apothems() {
            assert!((a - 0.35).abs() < 1e-9);
        }
        // Tangency point i + 1 lies on side i and splits it into b_i + b_{i+1}.
        let b = p.tangent_lengths();
        for i in 0..4 {
            let t = &e.tangency_points[(i + 1) % 4];
            let (vi, vj) = (&e.vertices[i], &e.vertices[(i + 1) % 4]);
            assert!((dist_unchecked(vi, t) - b[i]).abs() < 1e-10);
            assert!((dist_unchecked(t, vj) - b[(i + 1) % 4]).abs() < 1e-10);
        }
    }

    #[test]
    fn tiny_tangential_polygon_collapses_to_origin() {
        let e = embed_tangential(&TangentialPolygon::regular(6, 1e-9).unwrap()).unwrap();
        assert!(e.vertices.iter().all(|v| dist_unchecked(&HPoint::ORIGIN, v) < 1e-8));
    }

    #[test]
    fn measured_triangle_area_is_below_pi() {
        let e = embed_cyclic(&CyclicPolygon::regular(3, 2.0).unwrap());
        let a = measured_area(&e).unwrap();
        assert!(a > 0.0 && a < PI);
    }

    #[test]
    fn measured_metrics_of_regular_polygon_match_gauss_bonnet() {
        let p = CyclicPolygon::regular(6, 0.9).unwrap();
        let e = embed_cyclic(&p);
        let theta = p.interior_angles()[0];
        assert!((measured_area(&e).unwrap() - (4.0 * PI - 6.0 * theta)).abs() < 1e-8);
        for a in e.measured_interior_angles().unwrap() {
            assert!((a - theta).abs() < 1e-8);
        }
    }

    #[test]
    fn rotation_preserves_distances() {
        let pts = [point_at(0.3, 0.1), point_at(2.2, 1.0), point_at(1.5, -2.0)];
        for angle in [0.7, 2.9, -1.3] {
            for p in &pts {
                for q in &pts {
                    let before = dist_unchecked(p, q);
                    let after = dist_unchecked(&p.rotated(angle), &q.rotated(angle));
                    assert!((before - after).abs() < 1e-11);
                }
            }
        }
    }
}
