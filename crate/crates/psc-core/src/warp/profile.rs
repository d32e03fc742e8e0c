use std::sync::Arc;

use thiserror::Error;

use super::neck::Neck;
use super::quad::{bump, bump_d1, BumpTable};
use super::spline::Spline;
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WarpError {
    #[error("t = {t} is outside the profile domain [{start}, {end}]")]
    OutOfDomain { t: f64, start: f64, end: f64 },
    #[error("t = {t} lies inside the tip exclusion zone")]
    TipSingularity { t: f64 },
    #[error("profile value {value} at t = {t} is not positive")]
    NonPositiveProfile { t: f64, value: f64 },
    #[error("scale factor {0} is not positive")]
    NonPositiveScale(f64),
    #[error("angle {r} is outside the allowed range for radius {lambda}")]
    AngleOutOfRange { lambda: f64, r: f64 },
    #[error("no positive-curvature neck found for lambda = {lambda}, r = {r}, n = {dim}")]
    SearchFailed { lambda: f64, r: f64, dim: usize },
    #[error("seam mismatch: value gap {value_gap:e}, slope gap {slope_gap:e}")]
    SeamMismatch { value_gap: f64, slope_gap: f64 },
    #[error("dimension {0} is too small")]
    InvalidDimension(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Value and derivatives of a profile at a point. `one_minus_slope_sq` is
/// carried separately because `1 - d1^2` cancels badly near a sine tip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub one_minus_slope_sq: f64,
}

/// Monotone flat-ending transition: slope `slope * bump(u)` over a run of
/// length `width`, starting from `value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Blend {
    pub value: f64,
    pub slope: f64,
    pub width: f64,
    table: Arc<BumpTable>,
}

const BLEND_PANELS: usize = 512;

impl Blend {
    pub fn new(value: f64, slope: f64, width: f64, steepness: f64) -> Self {
        Blend::with_table(
            value,
            slope,
            width,
            Arc::new(BumpTable::new(steepness, BLEND_PANELS)),
        )
    }

    pub(crate) fn with_table(value: f64, slope: f64, width: f64, table: Arc<BumpTable>) -> Self {
        Blend {
            value,
            slope,
            width,
            table,
        }
    }

    pub fn steepness(&self) -> f64 {
        self.table.steepness()
    }

    /// Value reached at the far end of the run.
    pub fn end_value(&self) -> f64 {
        self.value + self.slope * self.width * self.table.total()
    }

    fn jet(&self, x: f64) -> Jet {
        let u = (x / self.width).clamp(0.0, 1.0);
        let a = self.steepness();
        let d1 = self.slope * bump(a, u);
        Jet {
            value: self.value + self.slope * self.width * self.table.integral(u),
            d1,
            d2: self.slope * bump_d1(a, u) / self.width,
            one_minus_slope_sq: (1.0 - d1) * (1.0 + d1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PieceKind {
    /// `amplitude * sin(x / amplitude)`
    Sine {
        amplitude: f64,
    },
    Const {
        value: f64,
    },
    /// `value + slope * x`
    Affine {
        value: f64,
        slope: f64,
    },
    Blend(Blend),
    Neck(Neck),
    /// Spline in the local coordinate; derivatives by finite differences.
    Sampled(Spline),
}

impl PieceKind {
    fn jet(&self, x: f64) -> Jet {
        match self {
            PieceKind::Sine { amplitude } => {
                let (s, c) = (x / amplitude).sin_cos();
                Jet {
                    value: amplitude * s,
                    d1: c,
                    d2: -s / amplitude,
                    one_minus_slope_sq: s * s,
                }
            }
            PieceKind::Const { value } => Jet {
                value: *value,
                d1: 0.0,
                d2: 0.0,
                one_minus_slope_sq: 1.0,
            },
            PieceKind::Affine { value, slope } => Jet {
                value: value + slope * x,
                d1: *slope,
                d2: 0.0,
                one_minus_slope_sq: (1.0 - slope) * (1.0 + slope),
            },
            PieceKind::Blend(b) => b.jet(x),
            PieceKind::Neck(n) => n.jet(x),
            PieceKind::Sampled(s) => {
                let h = 1e-3 * s.min_spacing();
                let f = |k: f64| s.eval(x + k * h);
                let (m2, m1, z, p1, p2) = (f(-2.0), f(-1.0), f(0.0), f(1.0), f(2.0));
                let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
                Jet {
                    value: z,
                    d1,
                    d2: (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h),
                    one_minus_slope_sq: (1.0 - d1) * (1.0 + d1),
                }
            }
        }
    }

    fn scaled(&self, k: f64) -> PieceKind {
        match self {
            PieceKind::Sine { amplitude } => PieceKind::Sine {
                amplitude: amplitude * k,
            },
            PieceKind::Const { value } => PieceKind::Const { value: value * k },
            PieceKind::Affine { value, slope } => PieceKind::Affine {
                value: value * k,
                slope: *slope,
            },
            PieceKind::Blend(b) => PieceKind::Blend(Blend::with_table(
                b.value * k,
                b.slope,
                b.width * k,
                b.table.clone(),
            )),
            PieceKind::Neck(n) => PieceKind::Neck(n.scaled(k)),
            PieceKind::Sampled(s) => PieceKind::Sampled(s.scaled(k)),
        }
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        !matches!(self, PieceKind::Sampled(_))
    }
}

/// A piece of a profile on `[start, end]`. The kind is evaluated in the
/// local coordinate `t - anchor`, or `anchor - t` when mirrored.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub anchor: f64,
    pub mirrored: bool,
    pub kind: PieceKind,
}

impl Piece {
    pub fn new(start: f64, end: f64, kind: PieceKind) -> Self {
        Piece {
            start,
            end,
            anchor: start,
            mirrored: false,
            kind,
        }
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0.0
    }

    pub fn jet(&self, t: f64) -> Jet {
        if self.mirrored {
            let j = self.kind.jet(self.anchor - t);
            Jet { d1: -j.d1, ..j }
        } else {
            self.kind.jet(t - self.anchor)
        }
    }

    fn mirror(&self, axis: f64) -> Piece {
        Piece {
            start: axis - self.end,
            end: axis - self.start,
            anchor: axis - self.anchor,
            mirrored: !self.mirrored,
            kind: self.kind.clone(),
        }
    }

    fn shift(&self, dt: f64) -> Piece {
        Piece {
            start: self.start + dt,
            end: self.end + dt,
            anchor: self.anchor + dt,
            ..self.clone()
        }
    }

    fn scale(&self, k: f64) -> Piece {
        Piece {
            start: self.start * k,
            end: self.end * k,
            anchor: self.anchor * k,
            mirrored: self.mirrored,
            kind: self.kind.scaled(k),
        }
    }
}

/// A piecewise warping function on a contiguous interval of the radial axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pieces: Vec<Piece>,
}

fn seam_gap(a: &Jet, b: &Jet) -> Option<(f64, f64)> {
    let dv = (a.value - b.value).abs();
    let ds = (a.d1 - b.d1).abs();
    let scale = a.value.abs().max(b.value.abs()).max(1.0);
    if dv <= tol::GLUE * scale && ds <= tol::GLUE {
        None
    } else {
        Some((dv, ds))
    }
}

impl Profile {
    /// Checks contiguity and C^1 seams between consecutive pieces.
    pub fn from_pieces(mut pieces: Vec<Piece>) -> Result<Self, WarpError> {
        if pieces.is_empty() {
            return Err(WarpError::InvalidParameter("profile needs a piece".into()));
        }
        for p in &pieces {
            if !(p.end > p.start) || !p.start.is_finite() || !p.end.is_finite() || p.start < 0.0 {
                return Err(WarpError::InvalidParameter(format!(
                    "bad piece interval [{}, {}]",
                    p.start, p.end
                )));
            }
        }
        for i in 1..pieces.len() {
            let (prev_end, start) = (pieces[i - 1].end, pieces[i].start);
            if (prev_end - start).abs() > 1e-12 * prev_end.abs().max(1.0) {
                return Err(WarpError::InvalidParameter(format!(
                    "gap between pieces at {prev_end} and {start}"
                )));
            }
            pieces[i].start = prev_end;
            if let Some((value_gap, slope_gap)) =
                seam_gap(&pieces[i - 1].jet(prev_end), &pieces[i].jet(prev_end))
            {
                return Err(WarpError::SeamMismatch {
                    value_gap,
                    slope_gap,
                });
            }
        }
        Ok(Profile { pieces })
    }

    pub fn single(piece: Piece) -> Result<Self, WarpError> {
        Profile::from_pieces(vec![piece])
    }

    /// Spline profile through `(ts[i], values[i])`.
    pub fn sampled(ts: Vec<f64>, values: Vec<f64>) -> Result<Self, WarpError> {
        let start = *ts
            .first()
            .ok_or_else(|| WarpError::InvalidParameter("empty grid".into()))?;
        let end = *ts.last().unwrap();
        let local: Vec<f64> = ts.iter().map(|t| t - start).collect();
        let spline = Spline::new(local, values).ok_or_else(|| {
            WarpError::InvalidParameter("grid must be strictly increasing".into())
        })?;
        Profile::single(Piece::new(start, end, PieceKind::Sampled(spline)))
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn start(&self) -> f64 {
        self.pieces[0].start
    }

    pub fn end(&self) -> f64 {
        self.pieces.last().unwrap().end
    }

    pub fn len(&self) -> f64 {
        self.end() - self.start()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn piece_index(&self, t: f64) -> Result<usize, WarpError> {
        let (start, end) = (self.start(), self.end());
        let slack = 1e-12 * end.abs().max(1.0);
        if !(t >= start - slack && t <= end + slack) {
            return Err(WarpError::OutOfDomain { t, start, end });
        }
        Ok(self
            .pieces
            .partition_point(|p| p.end < t)
            .min(self.pieces.len() - 1))
    }

    pub fn piece_at(&self, t: f64) -> Result<&Piece, WarpError> {
        Ok(&self.pieces[self.piece_index(t)?])
    }

    pub fn jet(&self, t: f64) -> Result<Jet, WarpError> {
        Ok(self.piece_at(t)?.jet(t))
    }

    pub fn value(&self, t: f64) -> Result<f64, WarpError> {
        Ok(self.jet(t)?.value)
    }

    /// Local radius of a smooth tip at the start, if the profile closes up
    /// there.
    pub fn start_tip(&self) -> Option<f64> {
        tip_radius(&self.pieces[0], self.start())
    }

    /// Local radius of a smooth tip at the end, if any.
    pub fn end_tip(&self) -> Option<f64> {
        tip_radius(self.pieces.last().unwrap(), self.end())
    }

    /// Same profile read from the other end.
    pub fn reversed(&self) -> Profile {
        let axis = self.start() + self.end();
        Profile {
            pieces: self.pieces.iter().rev().map(|p| p.mirror(axis)).collect(),
        }
    }

    pub fn shifted(&self, dt: f64) -> Profile {
        Profile {
            pieces: self.pieces.iter().map(|p| p.shift(dt)).collect(),
        }
    }

    /// Profile of the metric `c * g`: domain scaled by `sqrt(c)` and
    /// `t -> sqrt(c) * eta(t / sqrt(c))`.
    pub fn rescaled(&self, c: f64) -> Result<Profile, WarpError> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(WarpError::NonPositiveScale(c));
        }
        if c == 1.0 {
            return Ok(self.clone());
        }
        let k = c.sqrt();
        Ok(Profile {
            pieces: self.pieces.iter().map(|p| p.scale(k)).collect(),
        })
    }

    /// Appends `other` directly after this profile; value and slope must
    /// agree at the seam.
    pub fn concat(&self, other: &Profile) -> Result<Profile, WarpError> {
        let moved = other.shifted(self.end() - other.start());
        let a = self.pieces.last().unwrap().jet(self.end());
        let b = moved.pieces[0].jet(moved.start());
        if let Some((value_gap, slope_gap)) = seam_gap(&a, &b) {
            return Err(WarpError::SeamMismatch {
                value_gap,
                slope_gap,
            });
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(moved.pieces);
        Profile::from_pieces(pieces)
    }
}

fn tip_radius(piece: &Piece, t: f64) -> Option<f64> {
    let j = piece.jet(t);
    if j.value.abs() > 1e-12 * piece.len().max(1.0) {
        return None;
    }
    match &piece.kind {
        PieceKind::Sine { amplitude } => Some(amplitude.abs()),
        _ => Some(piece.len()),
    }
}

/// Glues `right`, read backwards, onto the end of `left`: both profiles are
/// given from their own start and meet at their ends, so the seam needs equal
/// values and opposite slopes.
pub fn glue_profiles(left: &Profile, right: &Profile) -> Result<Profile, WarpError> {
    left.concat(&right.reversed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine(a: f64, len: f64) -> Profile {
        Profile::single(Piece::new(0.0, len, PieceKind::Sine { amplitude: a })).unwrap()
    }

    #[test]
    fn reversal_is_an_involution() {
        let p = sine(1.0, 2.0);
        let q = p.reversed().reversed();
        for t in [0.1, 0.7, 1.9] {
            assert!((p.value(t).unwrap() - q.value(t).unwrap()).abs() < 1e-15);
        }
        let r = p.reversed();
        assert!((r.value(0.5).unwrap() - p.value(1.5).unwrap()).abs() < 1e-15);
        assert!((r.jet(0.5).unwrap().d1 + p.jet(1.5).unwrap().d1).abs() < 1e-15);
    }

    #[test]
    fn seam_checks_reject_jumps() {
        let a = Piece::new(0.0, 1.0, PieceKind::Const { value: 1.0 });
        let b = Piece::new(1.0, 2.0, PieceKind::Const { value: 2.0 });
        assert!(matches!(
            Profile::from_pieces(vec![a, b]),
            Err(WarpError::SeamMismatch { .. })
        ));
    }

    #[test]
    fn hemispheres_glue_to_a_sphere() {
        let h = sine(1.0, PI / 2.0);
        let s = glue_profiles(&h, &h).unwrap();
        assert!((s.len() - PI).abs() < 1e-15);
        assert!((s.value(2.0).unwrap() - 2f64.sin()).abs() < 1e-15);
        assert!(s.end_tip().is_some() && s.start_tip().is_some());
    }

    #[test]
    fn sampled_profile_keeps_absolute_abscissae() {
        let ts: Vec<f64> = (0..=20).map(|i| 1.0 + i as f64 * 0.05).collect();
        let vs: Vec<f64> = ts.iter().map(|t| 2.0 * t).collect();
        let p = Profile::sampled(ts, vs).unwrap();
        let j = p.jet(1.5).unwrap();
        assert!((j.value - 3.0).abs() < 1e-13);
        assert!((j.d1 - 2.0).abs() < 1e-7);
    }

    #[test]
    fn out_of_domain_is_reported() {
        assert!(matches!(
            sine(1.0, 1.0).jet(1.5),
            Err(WarpError::OutOfDomain { .. })
        ));
    }
}
