use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use super::metric::{verify_psc, WarpedMetric};
use super::neck::Neck;
use super::profile::{Blend, Piece, PieceKind, Profile, WarpError};
use super::quad::{bisect, BumpTable};

struct TorpedoShape {
    junction: f64,
    table: Arc<BumpTable>,
}

/// The unit torpedo is `sin t` up to the junction, then a blend whose slope
/// decays from `cos(junction)` to zero at `pi/2`. The junction is the root
/// that makes the profile end at height exactly 1.
fn torpedo_shape() -> &'static TorpedoShape {
    static SHAPE: OnceLock<TorpedoShape> = OnceLock::new();
    SHAPE.get_or_init(|| {
        let table = Arc::new(BumpTable::new(1.0, 512));
        let total = table.total();
        let height = |t0: f64| t0.sin() + (FRAC_PI_2 - t0) * t0.cos() * total - 1.0;
        let junction = bisect(height, 0.1, 1.5).expect("torpedo junction bracket");
        TorpedoShape { junction, table }
    })
}

/// Where the unit torpedo switches from the sine to the blend.
pub fn torpedo_junction() -> f64 {
    torpedo_shape().junction
}

/// Torpedo profile of radius `delta` on `[0, delta * pi / 2]`: round near the
/// tip, flat at height `delta` at the far end.
pub fn torpedo_profile(delta: f64) -> Result<Profile, WarpError> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(WarpError::InvalidParameter(format!(
            "torpedo radius {delta}"
        )));
    }
    let shape = torpedo_shape();
    let t0 = shape.junction;
    let head = Piece::new(0.0, delta * t0, PieceKind::Sine { amplitude: delta });
    let blend = Blend::with_table(
        delta * t0.sin(),
        t0.cos(),
        delta * (FRAC_PI_2 - t0),
        shape.table.clone(),
    );
    let tail = Piece::new(delta * t0, delta * FRAC_PI_2, PieceKind::Blend(blend));
    Profile::from_pieces(vec![head, tail])
}

/// Geodesic ball of radius `r` in the round sphere of radius `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lens {
    pub lambda: f64,
    pub r: f64,
}

impl Lens {
    pub fn new(lambda: f64, r: f64) -> Result<Self, WarpError> {
        if !(lambda > 0.0) || !(r > 0.0 && r < lambda * PI) {
            return Err(WarpError::AngleOutOfRange { lambda, r });
        }
        Ok(Lens { lambda, r })
    }

    /// Arclength profile `lambda * sin(s / lambda)` on `[0, r]`.
    pub fn profile(&self) -> Profile {
        Profile::single(Piece::new(
            0.0,
            self.r,
            PieceKind::Sine {
                amplitude: self.lambda,
            },
        ))
        .expect("sine piece")
    }

    /// The pullback to the unit disk has speed `r`: `t in (0, 1]` maps to
    /// arclength `r * t`.
    pub fn speed(&self) -> f64 {
        self.r
    }

    /// Pulled-back warping value at unit-disk radius `t`.
    pub fn pullback(&self, t: f64) -> f64 {
        self.lambda * (self.r * t / self.lambda).sin()
    }

    /// The other lens of the same sphere.
    pub fn complement(&self) -> Lens {
        Lens {
            lambda: self.lambda,
            r: self.lambda * PI - self.r,
        }
    }
}

pub fn lens_profile(lambda: f64, r: f64) -> Result<Profile, WarpError> {
    Ok(Lens::new(lambda, r)?.profile())
}

/// Round sphere of radius `lambda` as a single sine piece on `[0, lambda*pi]`.
pub fn round_profile(lambda: f64) -> Result<Profile, WarpError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(WarpError::InvalidParameter(format!("radius {lambda}")));
    }
    Profile::single(Piece::new(
        0.0,
        lambda * PI,
        PieceKind::Sine { amplitude: lambda },
    ))
}

/// Output of [`bulb_profile`].
#[derive(Debug, Clone)]
pub struct Bulb {
    pub profile: Profile,
    pub r_prime: f64,
    pub delta: f64,
    /// The `k` of the neck equation; zero for the round case.
    pub bend: f64,
    pub neck_width: f64,
}

const NECK_PANELS: usize = 256;
const MAX_HALVINGS: usize = 64;

fn bulb_pieces(theta: f64, bend: f64) -> Result<(Profile, Neck), WarpError> {
    let s0 = PI - theta;
    let neck = Neck::solve(theta.sin(), -theta.cos(), bend, NECK_PANELS);
    let head = Piece::new(0.0, s0, PieceKind::Sine { amplitude: 1.0 });
    let middle = Piece::new(s0, s0 + neck.width(), PieceKind::Neck(neck.clone()));
    let body = Profile::from_pieces(vec![head, middle])?;
    let cap = torpedo_profile(neck.end_value())?.reversed();
    Ok((body.concat(&cap)?, neck))
}

/// Bulb of head radius `lambda` and head angle `r`: a round head, a neck
/// shrinking to radius `delta`, and a torpedo cap. The neck bend starts at
/// `(n-2)/3` and is halved, shrinking `delta`, until the sampled curvature
/// is positive in dimension `n`. `r = lambda * pi / 2` gives the round
/// sphere.
pub fn bulb_profile(lambda: f64, r: f64, n: usize) -> Result<Bulb, WarpError> {
    if n < 3 {
        return Err(WarpError::InvalidDimension(n));
    }
    if !(lambda > 0.0)
        || !lambda.is_finite()
        || !(r > 0.0)
        || r > lambda * FRAC_PI_2 * (1.0 + 1e-12)
    {
        return Err(WarpError::AngleOutOfRange { lambda, r });
    }
    if (r - lambda * FRAC_PI_2).abs() <= 1e-12 * lambda {
        return Ok(Bulb {
            profile: round_profile(lambda)?,
            r_prime: lambda * FRAC_PI_2,
            delta: lambda,
            bend: 0.0,
            neck_width: 0.0,
        });
    }
    // everything scales with lambda, so build on the unit sphere
    let theta = r / lambda;
    let mut bend = (n as f64 - 2.0) / 3.0;
    for _ in 0..MAX_HALVINGS {
        // very thin necks fall below double precision at this scale
        let Ok((unit, neck)) = bulb_pieces(theta, bend) else {
            break;
        };
        let metric = WarpedMetric::new(n, unit.clone())?;
        if verify_psc(&metric, 1e-3).min_r > 0.0 {
            let delta = neck.end_value();
            let cap = delta * FRAC_PI_2;
            return Ok(Bulb {
                profile: unit.rescaled(lambda * lambda)?,
                r_prime: r * cap / (neck.width() + cap),
                delta: delta * lambda,
                bend,
                neck_width: neck.width() * lambda,
            });
        }
        bend *= 0.5;
    }
    Err(WarpError::SearchFailed { lambda, r, dim: n })
}
