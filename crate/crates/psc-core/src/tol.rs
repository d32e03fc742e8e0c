//! Numerical tolerances shared by every module.

/// Seam tolerance when gluing profiles or descriptor boundaries.
pub const GLUE: f64 = 1e-9;

/// Bound on derivatives at the flat end of a torpedo.
pub const FLAT: f64 = 1e-8;

/// Relative tolerance for curvature comparisons.
pub const CURVATURE: f64 = 1e-6;

/// Tip exclusion radius, as a multiple of the local tip radius.
pub const TIP_FACTOR: f64 = 1e-4;

/// Edge length and coordinate tolerance for tree equality.
pub const LENGTH: f64 = 1e-9;

/// Per-coordinate tolerance for operad associativity.
pub const ASSOC: f64 = 1e-12;

/// Disk radius at or below which a configuration counts as small.
pub const SMALL_RADIUS: f64 = 0.5;

/// Disk radius at or above which a configuration counts as big.
pub const BIG_RADIUS: f64 = 0.75;

/// `a` and `b` agree within `tol` absolutely or relative to their size.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= tol * scale
}
