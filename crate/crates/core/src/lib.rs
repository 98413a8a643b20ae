//! Simulation of type-I, noncollinear and frequency-nondegenerate spontaneous
//! parametric down-conversion (SPDC).
//!
//! The crate walks the whole chain from crystal dispersion to two-photon
//! interference:
//!
//! * [`dispersion`] evaluates Sellmeier indices, the index ellipsoid and group
//!   indices of a uniaxial crystal.
//! * [`phasematch`] couples the nondegeneracy parameter ξ to the emission
//!   cones (θ₀, inner/outer cone angles, collinear locus).
//! * [`groupdelay`] expands the phase mismatch to first order in frequency and
//!   derives the oscillation and decoherence times.
//! * [`biphoton`] builds the angular-frequency, two-frequency and temporal
//!   biphoton wavefunctions for two- and four-slit angular selection.
//! * [`hom`] sends the pair through a 50/50 beamsplitter: split/unsplit
//!   probabilities, coincidence densities and comb analysis.
//! * [`oracle`] holds the independent numerical checks (quadrature, FFT and
//!   Monte-Carlo counting) that the closed forms are validated against.
//!
//! The numerical core is generic over the floating point type through the
//! [`Scalar`] trait; the aliases at the crate root fix it to `f64`, which is
//! what the command-line front end and the oracles use.
//!
//! Units: wavelengths in μm, angular frequencies in rad/fs, and every time
//! that leaves [`groupdelay`] onwards is dimensionless (ω₀·t).

// `!(x > 0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biphoton;
pub mod config;
pub mod dispersion;
pub mod error;
pub mod groupdelay;
pub mod hom;
pub mod numeric;
pub mod oracle;
pub mod output;
pub mod phasematch;
pub mod scalar;

pub use error::{Result, SpdcError};
pub use scalar::Scalar;

/// Speed of light in μm/fs.
pub const SPEED_OF_LIGHT_UM_PER_FS: f64 = 0.299_792_458;

/// Width parameter of the Gaussian stand-in for sinc: `sinc(x) ≈ exp(-α x²)`
/// with α chosen so that both have the same FWHM.
pub const SINC_GAUSS_ALPHA: f64 = 0.19292;

pub type CrystalDispersion = dispersion::CrystalDispersion<f64>;
pub type Sellmeier = dispersion::Sellmeier<f64>;
pub type Wavelength = dispersion::Wavelength<f64>;
pub type AngularFrequency = dispersion::AngularFrequency<f64>;
pub type NondegeneracyPoint = phasematch::NondegeneracyPoint<f64>;
pub type ConeGeometry = phasematch::ConeGeometry<f64>;
pub type GroupDelayCoefficients = groupdelay::GroupDelayCoefficients<f64>;
pub type TimeScales = groupdelay::TimeScales<f64>;
pub type BiphotonModel = biphoton::BiphotonModel<f64>;
pub type TemporalWf = biphoton::TemporalWf<f64>;
pub type HomModel = hom::HomModel<f64>;
pub type HomCurve = hom::HomCurve<f64>;
pub type CombReport = hom::CombReport<f64>;

pub use biphoton::{Scheme, SincKernel};
pub use config::{CrystalSpec, SetupConfig};
pub use hom::{CurveAxis, CurveKind};
pub use phasematch::Regime;
