//! Tolerance constants shared across the crate.
//!
//! Two error regimes exist: algebraic identities between closed forms stay
//! close to machine precision, while values measured from hyperboloid
//! embeddings accumulate error through coordinates and distances.

/// Relative tolerance for algebraic identities between closed forms.
pub const EPS_REL: f64 = 1e-12;

/// Tolerance for quantities measured on an embedding.
pub const EPS_GEOM: f64 = 1e-9;

/// Absolute tolerance on the angle-partition sum `sum(theta) = 2 pi`.
pub const ANGLE_SUM: f64 = 1e-10;

/// Inequality assertions in randomized theorem checks.
pub const INEQUALITY: f64 = 1e-12;

/// Equality-case assertions at the regular / uniform configuration.
pub const EQUALITY: f64 = 1e-9;

/// Optimizer argmin vs. the uniform point, per coordinate.
pub const OPTIMIZER: f64 = 1e-6;

/// Measured perimeter agreement (absolute plus relative part).
pub const MEASURED_PERIMETER: f64 = 1e-9;

/// Measured area and interior-angle agreement.
pub const MEASURED_AREA: f64 = 1e-8;

/// Relative slack on inclusive guard boundaries such as `sin(pi/n) cosh r <= 1`.
pub const GUARD_SLACK: f64 = 1e-15;

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

/// Relative error of `got` against `want`, falling back to absolute when `want == 0`.
pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}
