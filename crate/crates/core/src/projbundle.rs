//! Rank-two metric families h_V(t) over a disk, the induced chart weights on
//! the projectivized fiber, Gram fields of the section bundles E(l), the
//! rank-identity E(2) = det V, and Nakano positivity of E(2+m).
//!
//! The chart weight of the degree-one hyperplane bundle is
//! φ(t, w) = log((1, w)·h_{V*}(t)·(1, w)ᴴ) with h_{V*} = (h_V⁻¹)ᵀ, and E(l)
//! reuses the ℙ¹ section machinery verbatim with weight l·φ.

use crate::bergman::{gram, Basis, GramMatrix};
use crate::bundle::{chern_curvature, gen_field_positivity, DerivativeMode, GramField};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::num::C64;
use crate::quadrature::QuadratureRule;
use crate::weights::WeightFamily;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Holomorphic polynomial Σ c_k t^k.
#[derive(Clone, Debug, Default)]
pub struct HoloPoly(pub Vec<C64>);

impl HoloPoly {
    pub fn eval(&self, t: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn constant(c: C64) -> Self {
        HoloPoly(vec![c])
    }
}

/// Built-in Hermitian positive-definite 2×2 metric families on the disk.
#[derive(Clone, Debug)]
pub enum RankTwoMetricFamily {
    /// e^{−c|t|²}·I
    Conformal { c: f64 },
    /// diag(e^{−a|t|²}, e^{−b|t|²})
    Diagonal { a: f64, b: f64 },
    /// A(t)ᴴ A(t) for a polynomial matrix A(t)
    Gauge { a: [[HoloPoly; 2]; 2] },
}

impl RankTwoMetricFamily {
    pub fn identity() -> Self {
        RankTwoMetricFamily::Gauge {
            a: [
                [
                    HoloPoly::constant(C64::new(1.0, 0.0)),
                    HoloPoly::default(),
                ],
                [
                    HoloPoly::default(),
                    HoloPoly::constant(C64::new(1.0, 0.0)),
                ],
            ],
        }
    }

    /// h_V(t).
    pub fn h_v(&self, t: C64) -> CMat {
        match self {
            RankTwoMetricFamily::Conformal { c } => {
                CMat::identity(2, 2) * C64::new((-c * t.norm_sqr()).exp(), 0.0)
            }
            RankTwoMetricFamily::Diagonal { a, b } => {
                let mut m = CMat::zeros(2, 2);
                m[(0, 0)] = C64::new((-a * t.norm_sqr()).exp(), 0.0);
                m[(1, 1)] = C64::new((-b * t.norm_sqr()).exp(), 0.0);
                m
            }
            RankTwoMetricFamily::Gauge { a } => {
                let am = CMat::from_fn(2, 2, |i, j| a[i][j].eval(t));
                am.adjoint() * am
            }
        }
    }

    /// det h_V(t); real and positive for a valid family.
    pub fn det_h_v(&self, t: C64) -> f64 {
        let h = self.h_v(t);
        (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).re
    }

    /// Dual metric h_{V*}(t) = (h_V(t)⁻¹)ᵀ; errors when h_V degenerates.
    pub fn h_v_dual(&self, t: C64) -> Result<CMat> {
        let h = self.h_v(t);
        let det = h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)];
        if !(det.re > 0.0) || !det.re.is_finite() {
            return Err(Error::Hypothesis(format!(
                "rank-two metric degenerates at t = {t}: det = {det}"
            )));
        }
        let inv = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => h[(1, 1)],
            (1, 1) => h[(0, 0)],
            (0, 1) => -h[(0, 1)],
            _ => -h[(1, 0)],
        }) / det;
        Ok(inv.transpose())
    }
}

/// Serializable descriptor for configuration files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RankTwoSpec {
    Conformal { c: f64 },
    Diagonal { a: f64, b: f64 },
    /// Row-major polynomial entries of A(t), each a list of (k, re, im).
    Gauge { a: Vec<Vec<Vec<(usize, f64, f64)>>> },
}

impl RankTwoSpec {
    pub fn build(&self) -> Result<RankTwoMetricFamily> {
        match self {
            RankTwoSpec::Conformal { c } => Ok(RankTwoMetricFamily::Conformal { c: *c }),
            RankTwoSpec::Diagonal { a, b } => {
                Ok(RankTwoMetricFamily::Diagonal { a: *a, b: *b })
            }
            RankTwoSpec::Gauge { a } => {
                if a.len() != 2 || a.iter().any(|r| r.len() != 2) {
                    return Err(Error::Config("gauge matrix must be 2×2".into()));
                }
                let build_poly = |terms: &Vec<(usize, f64, f64)>| {
                    let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
                    let mut coeffs = vec![C64::new(0.0, 0.0); deg + 1];
                    for &(k, re, im) in terms {
                        coeffs[k] += C64::new(re, im);
                    }
                    HoloPoly(coeffs)
                };
                Ok(RankTwoMetricFamily::Gauge {
                    a: [
                        [build_poly(&a[0][0]), build_poly(&a[0][1])],
                        [build_poly(&a[1][0]), build_poly(&a[1][1])],
                    ],
                })
            }
        }
    }
}

/// The degree-l chart weight φ(t, w) = l·log((1,w) h_{V*}(t) (1,w)ᴴ) as a
/// weight family over the ℙ¹ chart; t-derivatives by finite differences.
pub fn induced_weight(fam: &RankTwoMetricFamily, l: u32) -> Result<WeightFamily> {
    if l < 2 {
        return Err(Error::Invalid(format!(
            "section spaces need degree l ≥ 2, got {l}"
        )));
    }
    let fam = fam.clone();
    let lf = l as f64;
    Ok(WeightFamily::custom(1, "proj_induced", move |t, w| {
        let hd = match fam.h_v_dual(t[0]) {
            Ok(h) => h,
            Err(_) => return f64::NAN,
        };
        let v0 = hd[(0, 0)] + hd[(0, 1)] * w.conj() + hd[(1, 0)] * w + hd[(1, 1)] * w.norm_sqr();
        lf * v0.re.ln()
    }))
}

/// Gram matrix of E(l) (chart sections w^k, k ≤ l−2) at base point t.
pub fn e_bundle_gram(
    fam: &RankTwoMetricFamily,
    t: C64,
    l: u32,
    rule: &QuadratureRule,
) -> Result<GramMatrix> {
    let basis = Basis::p1_sections(l)?;
    let phi = induced_weight(fam, l)?;
    gram(&basis, &phi, &[t], rule)
}

/// The universal 1×1 norm of the degree-2 section space at h_V = I, measured
/// once by quadrature and pinned as a fixture.
pub fn measure_c2(rule: &QuadratureRule) -> Result<f64> {
    Ok(e_bundle_gram(&RankTwoMetricFamily::identity(), C64::new(0.0, 0.0), 2, rule)?.h[(0, 0)].re)
}

/// max over the grid of |h_{E(2)}(t)/(c₂·det h_V(t)) − 1|: the rank-two
/// determinant identity for the one-dimensional top section space.
pub fn det_identity_residual(
    fam: &RankTwoMetricFamily,
    t_grid: &[C64],
    rule: &QuadratureRule,
    c2: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in t_grid {
        let h = e_bundle_gram(fam, t, 2, rule)?.h[(0, 0)].re;
        let det = fam.det_h_v(t);
        if !(det > 0.0) {
            return Err(Error::Hypothesis(format!(
                "det h_V(t) = {det} at t = {t} is not positive"
            )));
        }
        worst = worst.max((h / (c2 * det) - 1.0).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct Theorem71Report {
    /// min over the grid of the curvature minimum of E(2+m).
    pub min_nakano: f64,
    /// min over the grid of the curvature minimum of (V, h_V) itself.
    pub hypothesis_min: f64,
    /// whether the positivity hypothesis on h_V holds strictly.
    pub hypothesis_strict: bool,
}

const HYPOTHESIS_TOL: f64 = 1e-8;

/// Positivity of the symmetric-power bundles: with h_V strictly positively
/// curved, the L² metric on E(2+m) is strictly Nakano positive. A flat
/// family is reported with `hypothesis_strict = false`; a negatively curved
/// family is rejected.
pub fn theorem_7_1_check(
    fam: &RankTwoMetricFamily,
    t_grid: &[C64],
    m_sym: u32,
    rule: &Arc<QuadratureRule>,
    fd_step: f64,
) -> Result<Theorem71Report> {
    // hypothesis: curvature of (V, h_V)
    let fam_h = fam.clone();
    let v_field = GramField::from_fn(2, 1, fd_step, move |t| Ok(fam_h.h_v(t[0])));
    let mut hypothesis_min = f64::INFINITY;
    for &t in t_grid {
        let cond = crate::linalg::equilibrated_condition(&fam.h_v(t))?;
        if cond > 1e8 {
            return Err(Error::Hypothesis(format!(
                "h_V condition {cond:.3e} exceeds 1e8 at t = {t}"
            )));
        }
        hypothesis_min = hypothesis_min.min(gen_field_positivity(&v_field, &[t])?);
    }
    if hypothesis_min < -HYPOTHESIS_TOL {
        return Err(Error::Hypothesis(format!(
            "h_V is not Griffiths-nonnegative on the grid: min curvature {hypothesis_min:.3e}"
        )));
    }
    let hypothesis_strict = hypothesis_min > HYPOTHESIS_TOL;

    let l = 2 + m_sym;
    let phi = induced_weight(fam, l)?;
    let e_field = GramField::from_quadrature(
        Basis::p1_sections(l)?,
        phi,
        rule.clone(),
        DerivativeMode::FiniteDifference { step: fd_step },
    )?;
    let mut min_nakano = f64::INFINITY;
    for &t in t_grid {
        let curv = chern_curvature(&e_field, &[t])?;
        min_nakano = min_nakano.min(crate::bundle::nakano_min_eig(&curv)?);
    }
    Ok(Theorem71Report {
        min_nakano,
        hypothesis_min,
        hypothesis_strict,
    })
}
