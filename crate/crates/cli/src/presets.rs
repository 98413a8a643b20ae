//! Parameter values of the reproduced figures, in one place.
//!
//! Each figure lists its panels; a panel name of `""` marks a figure without
//! panels. Values that are not round numbers are explained inline.

use spdc_core::Scheme;

/// Pump orientation used by the slit-selection and cone diagrams.
pub const PHI0_REFERENCE: f64 = 0.500_758_9;
/// Nondegeneracy selected by the slits in the diagrams.
pub const XI_SELECTED: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PanelSpec {
    /// n_eff(ξ) over [0, ξ_max].
    EffectiveIndex,
    /// Collinear orientation φ₀(ξ) over [0, ξ_max].
    CollinearAngle,
    /// Inner and outer cone cross-sections with the pair positions.
    Cones { phi0: f64, xi: f64 },
    /// θ₊, θ₋ and θ₀ against ξ, one curve family per φ₀.
    ConeAngles { phi0: &'static [f64] },
    /// θ₊ and θ₋ against ξ with the slit positions for one ξ₀.
    SlitSelection { phi0: f64, xi0: f64 },
    /// A₋(ξ) and A₊(φ₀, ξ).
    GroupDelay { phi0: &'static [f64] },
    /// Rays from the crystal to the slits of a scheme.
    SlitRays { scheme: Scheme, phi0: f64, xi: f64 },
    /// Split and unsplit probabilities against delay for both schemes.
    BeamSplitter { xi: f64 },
    /// w_split against delay, one column per ξ.
    SplitVsDelay { scheme: Scheme, xi: &'static [f64] },
    /// T_osc and T_decoh against ξ.
    TimeScales { xi_lo: f64, xi_hi: f64 },
    /// Coincidence density against t₁ − t₂ at fixed delay.
    Density { scheme: Scheme, xi: f64, dt: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub name: &'static str,
    pub spec: PanelSpec,
}

#[derive(Debug, Clone, Copy)]
pub struct FigurePreset {
    pub id: &'static str,
    pub title: &'static str,
    pub panels: &'static [Panel],
}

const fn single(spec: PanelSpec) -> Panel {
    Panel { name: "", spec }
}

const fn panel(name: &'static str, spec: PanelSpec) -> Panel {
    Panel { name, spec }
}

use PanelSpec::*;

pub const FIGURES: &[FigurePreset] = &[
    FigurePreset {
        id: "fig1",
        title: "effective ordinary index n_eff(xi)",
        panels: &[single(EffectiveIndex)],
    },
    FigurePreset {
        id: "fig2",
        title: "collinear orientation phi0_coll(xi)",
        panels: &[single(CollinearAngle)],
    },
    FigurePreset {
        id: "fig3",
        title: "inner and outer emission cones",
        panels: &[single(Cones { phi0: PHI0_REFERENCE, xi: XI_SELECTED })],
    },
    FigurePreset {
        id: "fig4",
        title: "cone angles theta_-, theta_+ and theta_0",
        panels: &[single(ConeAngles { phi0: &[0.7, 0.500_758_9, 0.46, 0.39] })],
    },
    FigurePreset {
        id: "fig5",
        title: "slit selection of xi0",
        panels: &[
            panel("a", SlitSelection { phi0: PHI0_REFERENCE, xi0: XI_SELECTED }),
            panel("b", Cones { phi0: PHI0_REFERENCE, xi: XI_SELECTED }),
        ],
    },
    FigurePreset {
        id: "fig6",
        title: "group-delay coefficients A_-(xi) and A_+(phi0, xi)",
        panels: &[single(GroupDelay { phi0: &[0.37734, 0.500_578, 0.7] })],
    },
    FigurePreset {
        id: "fig7",
        title: "two-slit scheme in the (x, z) plane",
        panels: &[single(SlitRays { scheme: Scheme::TwoSlit, phi0: PHI0_REFERENCE, xi: XI_SELECTED })],
    },
    FigurePreset {
        id: "fig8",
        title: "split and unsplit pairs after the beamsplitter",
        panels: &[single(BeamSplitter { xi: 0.1 })],
    },
    FigurePreset {
        id: "fig9",
        title: "two-slit split probability vs delay",
        panels: &[single(SplitVsDelay { scheme: Scheme::TwoSlit, xi: &[0.01, 0.025, 0.03, 0.035, 0.04] })],
    },
    FigurePreset {
        id: "fig10",
        title: "four-slit split probability vs delay",
        panels: &[
            panel("a", SplitVsDelay { scheme: Scheme::FourSlit, xi: &[0.04] }),
            panel("b", SplitVsDelay { scheme: Scheme::FourSlit, xi: &[0.1] }),
            panel("c", SplitVsDelay { scheme: Scheme::FourSlit, xi: &[0.6] }),
        ],
    },
    FigurePreset {
        id: "fig11",
        title: "oscillation period and decoherence time",
        panels: &[
            panel("a", TimeScales { xi_lo: 0.01, xi_hi: 0.7 }),
            panel("b", TimeScales { xi_lo: 0.805, xi_hi: 0.823 }),
        ],
    },
    FigurePreset {
        id: "fig12",
        title: "four-slit split probability near the A_- zero",
        // Chosen so that T_decoh/T_osc equals its value at xi = 0.1 (a) and
        // xi = 0.04 (b): the curves then have the shapes of fig10 a and b,
        // compressed in time by ~20.
        panels: &[
            panel("a", SplitVsDelay { scheme: Scheme::FourSlit, xi: &[0.81294] }),
            panel("b", SplitVsDelay { scheme: Scheme::FourSlit, xi: &[0.81397] }),
        ],
    },
    FigurePreset {
        id: "fig13",
        title: "four-slit coincidence density vs t1 - t2",
        panels: &[
            panel("a", Density { scheme: Scheme::FourSlit, xi: 0.1, dt: 100.0 }),
            panel("b", Density { scheme: Scheme::FourSlit, xi: 0.1, dt: 300.0 }),
        ],
    },
    FigurePreset {
        id: "fig14",
        title: "two-slit coincidence density vs t1 - t2",
        panels: &[
            panel("a", Density { scheme: Scheme::TwoSlit, xi: 0.1, dt: 100.0 }),
            panel("b", Density { scheme: Scheme::TwoSlit, xi: 0.1, dt: 200.0 }),
            panel("c", Density { scheme: Scheme::TwoSlit, xi: 0.2, dt: 200.0 }),
        ],
    },
];

pub fn find(id: &str) -> Option<&'static FigurePreset> {
    FIGURES.iter().find(|f| f.id == id)
}
