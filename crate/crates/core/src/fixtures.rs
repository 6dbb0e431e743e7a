//! Regression-pinned constants, checked in together with the configuration
//! hash of the run that produced them. Values that the underlying theory
//! leaves unnamed (universal norms, diagnostic magnitudes) are measured once
//! on a certified rule and frozen here.

use serde::Deserialize;
use std::sync::OnceLock;

#[derive(Debug, Clone, Deserialize)]
pub struct Pinned {
    /// Norm of the one-dimensional degree-2 section space at h_V = I.
    pub c2: f64,
    /// Quadrature rule that produced c2 (n_radial, n_angular).
    pub c2_rule: [usize; 2],
    /// Strict-inequality gap for the ε = 0.1 antiholomorphic perturbation of
    /// γ = 1 at degree 4.
    pub hormander_gap_eps01: f64,
    /// Minimal-extension mass at cutoff 3 for the perturbed built-in weight.
    pub extension_perturbed_ratio: f64,
    /// Fiber nonholomorphy magnitude of V for the generic diagnostic family.
    pub fs_generic_dbar_v: f64,
    /// Curvature minimum for the generic diagnostic family at its base point.
    pub fs_generic_min_curv: f64,
    /// Bound on toeplitz margin / s² under ψ → s·ψ for s ∈ {0.1, 0.05, 0.025}.
    pub toeplitz_margin_over_s2: f64,
    /// Hash of the built-in scenario set at pin time.
    pub catalog_hash: String,
}

static PINNED: OnceLock<Pinned> = OnceLock::new();

pub fn pinned() -> &'static Pinned {
    PINNED.get_or_init(|| {
        serde_json::from_str(include_str!("../fixtures/pinned.json"))
            .expect("fixtures/pinned.json is well-formed")
    })
}
