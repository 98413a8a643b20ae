use thiserror::Error;

pub type Result<T, E = SpdcError> = std::result::Result<T, E>;

/// Errors raised by the simulation core.
///
/// Numerical payloads are stored as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpdcError {
    #[error("wavelength {wavelength_um} μm is outside the transparency window [{lo_um}, {hi_um}] μm")]
    Transparency {
        wavelength_um: f64,
        lo_um: f64,
        hi_um: f64,
    },

    #[error("wavelength {wavelength_um} μm is too close to the window edge for a derivative stencil")]
    DerivativeDomain { wavelength_um: f64 },

    #[error("no collinear phase matching angle for xi = {xi} in [{lo_rad}, {hi_rad}] rad")]
    NoCollinearSolution { xi: f64, lo_rad: f64, hi_rad: f64 },

    #[error("SPDC is forbidden at phi0 = {phi0} rad, xi = {xi} (n_p - n_eff = {index_gap:e} > 0)")]
    Forbidden { phi0: f64, xi: f64, index_gap: f64 },

    #[error("collinear regime at xi = {xi}: the angular width (δθ)_L is undefined")]
    Collinear { xi: f64 },

    #[error("pump pulse too short: tau = {tau} < 10 tau_gr = {threshold} (omega0 units)")]
    UnsupportedRegime { tau: f64, threshold: f64 },

    #[error("A_minus vanishes at xi = {xi}: temporal widths are degenerate")]
    DegenerateWidth { xi: f64 },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("quadrature failed to reach tolerance {tolerance:e} (estimate {estimate}, error {error:e})")]
    Quadrature {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("no sign change of the function on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },
}

impl SpdcError {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        SpdcError::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        SpdcError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
