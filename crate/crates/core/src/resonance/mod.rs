//! Resonance geometry of the Schrödinger-wave interaction.
//!
//! Names: `resonance_a` is the angular resonance quantity (not the Bessel
//! operator `(1-Δ)^{1/2}`), and `angle` is the angle between `ξ₁` and `ξ₂`
//! (not a smoothing gain).

mod bilinear;
mod geometry;
mod lemma;

pub use bilinear::{
    bilinear_constant_estimate, AdversarialRatio, BilinearConfig, BilinearStats,
};
pub use geometry::{
    modulation_lower_bound, resonance_a, resonant_shell_sample, shell_thickness, FrequencyTriple,
    ShellPoint, ShellSample,
};
pub use lemma::{calc_lemma_check, lemma_integral, LemmaEntry, LemmaReport, LEMMA_TRUNCATION};
