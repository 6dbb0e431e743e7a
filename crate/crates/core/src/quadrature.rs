//! Deterministic quadrature rules for planar domains and for ℙ¹ in an affine
//! chart, plus node-sampled integration with a fixed pairwise reduction.
//!
//! All rules are polar tensor products: Gauss–Legendre in a smoothly
//! substituted radial variable, uniform trapezoid in angle. The angular rule
//! annihilates monomials z^a z̄^b with 0 < |a−b| < n_angular exactly, and the
//! radial substitution u = r² (plane) or s = |z|²/(1+|z|²) (ℙ¹) makes the
//! surviving radial profiles polynomial, so moments are exact up to the
//! Gauss–Legendre degree.

use crate::error::{Error, Result};
use crate::num::{pairwise_sum, Pairwise, C64};
use serde::{Deserialize, Serialize};

/// Planar integration domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaneDomainSpec {
    Disk {
        radius: f64,
    },
    /// The whole plane truncated at `cutoff_radius`; integrands are expected
    /// to carry an envelope like exp(-|z|²/envelope_scale).
    GaussianPlane {
        envelope_scale: f64,
        cutoff_radius: f64,
    },
}

impl PlaneDomainSpec {
    fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        match *self {
            PlaneDomainSpec::Disk { radius } => {
                if !ok(radius) {
                    return Err(Error::InvalidRule(format!("disk radius {radius}")));
                }
            }
            PlaneDomainSpec::GaussianPlane {
                envelope_scale,
                cutoff_radius,
            } => {
                if !ok(envelope_scale) || !ok(cutoff_radius) {
                    return Err(Error::InvalidRule(format!(
                        "gaussian plane scale {envelope_scale}, cutoff {cutoff_radius}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// What a rule integrates over; kept as metadata for downstream validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "domain", rename_all = "snake_case")]
pub enum DomainTag {
    Plane { spec: PlaneDomainSpec },
    P1Chart,
}

/// Nodes and positive area-measure weights.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<C64>,
    pub weights: Vec<f64>,
    pub domain: DomainTag,
    /// Monomial moments z^a z̄^a are exact for a ≤ cert_degree.
    pub cert_degree: usize,
    /// Largest monomial degree the Gaussian envelope supports at this cutoff
    /// (usize::MAX for domains without truncation).
    pub max_envelope_degree: usize,
    /// Crude bound on the mass the truncation discards, for rule metadata.
    pub truncation_estimate: f64,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(self.weights.iter().map(|&w| C64::new(w, 0.0))).re
    }

    pub fn is_p1(&self) -> bool {
        matches!(self.domain, DomainTag::P1Chart)
    }
}

/// Gauss–Legendre nodes and weights on (-1, 1) by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and its derivative via three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn validate_counts(n_radial: usize, n_angular: usize) -> Result<()> {
    if n_radial < 2 {
        return Err(Error::InvalidRule(format!("n_radial {n_radial} < 2")));
    }
    if n_angular < 4 {
        return Err(Error::InvalidRule(format!("n_angular {n_angular} < 4")));
    }
    Ok(())
}

/// Largest monomial degree N for which the truncated Gaussian domain still
/// holds the mass of |z|^{2N} exp(-|z|²/scale): cutoff² ≥ scale·(2N + 10√(2N)).
pub fn gaussian_supported_degree(envelope_scale: f64, cutoff_radius: f64) -> usize {
    let budget = cutoff_radius * cutoff_radius / envelope_scale;
    let mut n = 0usize;
    while {
        let m = (n + 1) as f64;
        2.0 * m + 10.0 * (2.0 * m).sqrt() <= budget
    } {
        n += 1;
    }
    n
}

/// Polar tensor rule on a disk or truncated Gaussian plane. The radial
/// variable is substituted as u = r², so monomial moments ∫ z^a z̄^b dA are
/// exact for a = b ≤ n_radial−1 and exactly zero for 0 < |a−b| < n_angular.
pub fn build_plane_rule(
    spec: PlaneDomainSpec,
    n_radial: usize,
    n_angular: usize,
) -> Result<QuadratureRule> {
    spec.validate()?;
    validate_counts(n_radial, n_angular)?;
    let (outer_radius, max_envelope_degree, truncation_estimate) = match spec {
        PlaneDomainSpec::Disk { radius } => (radius, usize::MAX, 0.0),
        PlaneDomainSpec::GaussianPlane {
            envelope_scale,
            cutoff_radius,
        } => {
            let deg = gaussian_supported_degree(envelope_scale, cutoff_radius);
            if deg < 2 {
                let m = 2.0f64;
                return Err(Error::CutoffTooSmall {
                    radius: cutoff_radius,
                    degree: 2,
                    required: (envelope_scale * (2.0 * m + 10.0 * (2.0 * m).sqrt())).sqrt(),
                });
            }
            let x = cutoff_radius * cutoff_radius / envelope_scale;
            // tail mass of exp(-u/scale) past the cutoff, relative to scale
            (cutoff_radius, deg, (-x).exp() * (1.0 + x))
        }
    };

    let (gl_nodes, gl_weights) = gauss_legendre(n_radial);
    let u_max = outer_radius * outer_radius;
    let mut nodes = Vec::with_capacity(n_radial * n_angular);
    let mut weights = Vec::with_capacity(n_radial * n_angular);
    for j in 0..n_radial {
        let u = u_max * (gl_nodes[j] + 1.0) / 2.0;
        let wu = u_max / 2.0 * gl_weights[j];
        let r = u.sqrt();
        for k in 0..n_angular {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n_angular as f64;
            nodes.push(C64::from_polar(r, theta));
            weights.push(std::f64::consts::PI / n_angular as f64 * wu);
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: DomainTag::Plane { spec },
        cert_degree: n_radial - 1,
        max_envelope_degree,
        truncation_estimate,
    })
}

/// Rule for ℙ¹ in the affine chart z. The substitution s = |z|²/(1+|z|²)
/// maps the chart to (0,1); rational integrands r(z)/(1+|z|²)^d with
/// bidegree(r) ≤ (n_radial−1, n_radial−1) and d ≤ 2·n_radial integrate
/// exactly up to roundoff.
pub fn build_p1_rule(n_radial: usize, n_angular: usize) -> Result<QuadratureRule> {
    validate_counts(n_radial, n_angular)?;
    let (gl_nodes, gl_weights) = gauss_legendre(n_radial);
    let mut nodes = Vec::with_capacity(n_radial * n_angular);
    let mut weights = Vec::with_capacity(n_radial * n_angular);
    for j in 0..n_radial {
        let s = (gl_nodes[j] + 1.0) / 2.0;
        let ws = gl_weights[j] / 2.0;
        let one_minus = 1.0 - s;
        let u = s / one_minus;
        let r = u.sqrt();
        for k in 0..n_angular {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n_angular as f64;
            nodes.push(C64::from_polar(r, theta));
            weights.push(std::f64::consts::PI / n_angular as f64 * ws / (one_minus * one_minus));
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: DomainTag::P1Chart,
        cert_degree: n_radial - 1,
        max_envelope_degree: usize::MAX,
        truncation_estimate: 0.0,
    })
}

/// Σ wᵢ·sampleᵢ with the deterministic pairwise reduction in node order.
pub fn integrate(rule: &QuadratureRule, samples: &[C64]) -> Result<C64> {
    if samples.len() != rule.nodes.len() {
        return Err(Error::LengthMismatch {
            got: samples.len(),
            expected: rule.nodes.len(),
        });
    }
    let mut acc = Pairwise::new();
    for (w, s) in rule.weights.iter().zip(samples) {
        acc.push(s * *w);
    }
    Ok(acc.sum())
}

/// Convenience: integrate f sampled at the rule nodes.
pub fn integrate_fn<F: Fn(C64) -> C64>(rule: &QuadratureRule, f: F) -> C64 {
    let mut acc = Pairwise::new();
    for (w, &z) in rule.weights.iter().zip(&rule.nodes) {
        acc.push(f(z) * *w);
    }
    acc.sum()
}
