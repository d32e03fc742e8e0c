use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::profile::{Jet, PieceKind, Profile, WarpError};
use crate::tol;

/// `dt^2 + eta(t)^2 ds^2` on a manifold of dimension `dim`; the sphere
/// factor has dimension `dim - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedMetric {
    pub dim: usize,
    pub profile: Profile,
}

impl WarpedMetric {
    pub fn new(dim: usize, profile: Profile) -> Result<Self, WarpError> {
        if dim < 2 {
            return Err(WarpError::InvalidDimension(dim));
        }
        Ok(WarpedMetric { dim, profile })
    }

    fn tip_zones(&self) -> (f64, f64) {
        let p = &self.profile;
        let lo = p.start_tip().map_or(0.0, |d| tol::TIP_FACTOR * d);
        let hi = p.end_tip().map_or(0.0, |d| tol::TIP_FACTOR * d);
        (p.start() + lo, p.end() - hi)
    }
}

/// Scalar curvature from a jet.
pub fn curvature_of(dim: usize, j: &Jet) -> f64 {
    let n = dim as f64;
    -2.0 * (n - 1.0) * j.d2 / j.value
        + (n - 1.0) * (n - 2.0) * j.one_minus_slope_sq / (j.value * j.value)
}

pub fn scalar_curvature(m: &WarpedMetric, t: f64) -> Result<f64, WarpError> {
    let j = m.profile.jet(t)?;
    let (lo, hi) = m.tip_zones();
    let p = &m.profile;
    if (p.start_tip().is_some() && t <= lo) || (p.end_tip().is_some() && t >= hi) {
        return Err(WarpError::TipSingularity { t });
    }
    if !(j.value > 0.0) {
        return Err(WarpError::NonPositiveProfile { t, value: j.value });
    }
    Ok(curvature_of(m.dim, &j))
}

/// Warped metric of `c * g`.
pub fn rescale(m: &WarpedMetric, c: f64) -> Result<WarpedMetric, WarpError> {
    Ok(WarpedMetric {
        dim: m.dim,
        profile: m.profile.rescaled(c)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PscReport {
    pub min_r: f64,
    pub argmin: f64,
    pub samples: usize,
}

/// Curvature of a tip in the local round model, where one is available.
fn tip_limit(m: &WarpedMetric, kind: &PieceKind) -> Option<f64> {
    let n = m.dim as f64;
    match kind {
        PieceKind::Sine { amplitude } => Some(n * (n - 1.0) / (amplitude * amplitude)),
        PieceKind::Affine { slope, .. } if (slope.abs() - 1.0).abs() < 1e-15 => Some(0.0),
        _ => None,
    }
}

/// Samples the curvature on a grid refined near piece seams. Tip
/// neighbourhoods are skipped and certified by the local round model.
pub fn verify_psc(m: &WarpedMetric, grid_step: f64) -> PscReport {
    let mut report = PscReport {
        min_r: f64::INFINITY,
        argmin: f64::NAN,
        samples: 0,
    };
    let mut record = |t: f64, r: f64| {
        report.samples += 1;
        if r < report.min_r || report.argmin.is_nan() {
            report.min_r = r;
            report.argmin = t;
        }
    };
    let p = &m.profile;
    let (lo, hi) = m.tip_zones();
    if p.start_tip().is_some() {
        if let Some(r) = tip_limit(m, &p.pieces()[0].kind) {
            record(p.start(), r);
        }
    }
    if p.end_tip().is_some() {
        if let Some(r) = tip_limit(m, &p.pieces().last().unwrap().kind) {
            record(p.end(), r);
        }
    }
    let step = if grid_step > 0.0 { grid_step } else { 1e-3 };
    for piece in p.pieces() {
        let (a, b) = (piece.start.max(lo), piece.end.min(hi));
        if !(b > a) {
            continue;
        }
        let h = step.min(piece.len() / 64.0);
        let count = ((b - a) / h).ceil().max(1.0) as usize;
        let mut ts: Vec<f64> = (0..=count)
            .map(|k| a + (b - a) * k as f64 / count as f64)
            .collect();
        for e in [1e-3, 1e-6, 1e-9] {
            ts.push(a + e * (b - a));
            ts.push(b - e * (b - a));
        }
        for t in ts {
            let j = piece.jet(t);
            let r = if j.value > 0.0 {
                curvature_of(m.dim, &j)
            } else {
                f64::NEG_INFINITY
            };
            record(t, r);
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdDiscrepancy {
    pub d1: f64,
    pub d2: f64,
}

/// Difference between the stored derivatives and central differences of
/// the profile values with step `h`.
pub fn fd_check(p: &Profile, t: f64, h: f64) -> Result<FdDiscrepancy, WarpError> {
    let piece = p.piece_at(t)?;
    if !(h > 0.0) || t - h < piece.start || t + h > piece.end {
        return Err(WarpError::OutOfDomain {
            t,
            start: piece.start + h,
            end: piece.end - h,
        });
    }
    let (m, z, q) = (piece.jet(t - h).value, piece.jet(t), piece.jet(t + h).value);
    let d1 = (q - m) / (2.0 * h);
    let d2 = (q - 2.0 * z.value + m) / (h * h);
    Ok(FdDiscrepancy {
        d1: (z.d1 - d1).abs(),
        d2: (z.d2 - d2).abs(),
    })
}

/// Curvature samples as delimited text with header `t,eta,eta_p,eta_pp,R`,
/// 12 significant digits, tip zones excluded.
pub fn sample_csv(m: &WarpedMetric, grid_step: f64) -> Result<String, WarpError> {
    if !(grid_step > 0.0) {
        return Err(WarpError::InvalidParameter(format!(
            "grid step {grid_step}"
        )));
    }
    let (lo, hi) = m.tip_zones();
    let count = ((hi - lo) / grid_step).ceil().max(1.0) as usize;
    let mut out = String::from("t,eta,eta_p,eta_pp,R\n");
    for k in 0..=count {
        let t = lo + (hi - lo) * k as f64 / count as f64;
        let j = m.profile.jet(t)?;
        let r = curvature_of(m.dim, &j);
        writeln!(
            out,
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            t, j.value, j.d1, j.d2, r
        )
        .unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warp::{round_profile, torpedo_profile, Piece};

    #[test]
    fn sphere_curvature_is_constant() {
        let m = WarpedMetric::new(4, round_profile(0.5).unwrap()).unwrap();
        let rep = verify_psc(&m, 1e-3);
        assert!((rep.min_r - 48.0).abs() < 1e-6);
        assert!(rep.samples > 1000);
    }

    #[test]
    fn tips_are_excluded_from_pointwise_evaluation() {
        let m = WarpedMetric::new(3, torpedo_profile(1.0).unwrap()).unwrap();
        assert!(matches!(
            scalar_curvature(&m, 1e-5),
            Err(WarpError::TipSingularity { .. })
        ));
        assert!(scalar_curvature(&m, 1e-3).is_ok());
    }

    #[test]
    fn flat_profile_has_zero_curvature() {
        let p = Profile::single(Piece::new(
            0.0,
            2.0,
            PieceKind::Affine {
                value: 0.0,
                slope: 1.0,
            },
        ))
        .unwrap();
        let m = WarpedMetric::new(3, p).unwrap();
        assert!(verify_psc(&m, 1e-3).min_r.abs() < 1e-9);
    }

    #[test]
    fn csv_has_header_and_twelve_digits() {
        let m = WarpedMetric::new(3, torpedo_profile(1.0).unwrap()).unwrap();
        let csv = sample_csv(&m, 0.1).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,eta,eta_p,eta_pp,R"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 5);
        let mantissa = row[1].split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 12);
    }
}
