//! Rotationally symmetric warped-product metrics `dt^2 + eta(t)^2 ds^2` and
//! their scalar curvature.

mod metric;
mod neck;
mod profile;
pub mod quad;
mod shapes;
mod spline;

pub use metric::{
    curvature_of, fd_check, rescale, sample_csv, scalar_curvature, verify_psc, FdDiscrepancy,
    PscReport, WarpedMetric,
};
pub use neck::Neck;
pub use profile::{glue_profiles, Blend, Jet, Piece, PieceKind, Profile, WarpError};
pub use shapes::{
    bulb_profile, lens_profile, round_profile, torpedo_junction, torpedo_profile, Bulb, Lens,
};
pub use spline::Spline;
