//! Zak transforms of Hermite windows, Zibulski–Zeevi frame-bound estimates
//! for rationally oversampled Gabor systems, and certified evaluation of
//! vanishing Zak values in extended precision.

pub mod framescan;
pub mod hermite;
pub mod identities;
pub mod xprec;
pub mod zak;
pub mod zibulski;

pub use framescan::{
    certify_obstruction, estimate_bounds, obstruction_points, scan_hyperbola,
    CertificationReport, FrameBoundsEstimate, FramescanError, GridSpec, HyperbolaScan,
    ObstructionPoint,
};
pub use hermite::{HermiteError, HermiteOrder, HermiteWindow};
pub use identities::{IdentityCase, IdentityId, VerificationReport, Verdict};
pub use xprec::{Precision, XComplex, XReal};
pub use zak::{zak_eval, zak_eval_at_precision, Coord, QuarticSurd, ZakError, ZakEvaluation, ZakParameter};
pub use zibulski::{RationalDensity, ZZMatrix, ZibulskiError};
