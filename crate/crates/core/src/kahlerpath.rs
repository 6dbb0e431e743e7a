//! Paths of fiber metrics φ(t,·) = φ₀ + ψ(t,·) over a fixed fiber, their
//! geodesic curvature C(ψ) = ψ_{tt̄} − |∂̄_z ψ_t|²_φ, and the lower bound of
//! the bundle curvature by the Toeplitz compression of C.
//!
//! For paths with t-independent φ₀ the t-derivatives of ψ and of the full φ
//! coincide, so C is computed from the weight derivative table directly; for
//! paths depending on Re t only, 4·C equals ψ̈ − |∂̄_z ψ̇|²_φ, which we check
//! by an independent real-direction stencil.

use crate::bergman::{Basis, FiberSpace};
use crate::bundle::{chern_curvature, nakano_min_eig, DerivativeMode, GramField};
use crate::error::{Error, Result};
use crate::linalg::gen_min_eig;
use crate::num::{real_dir_derivs, Stencil, C64};
use crate::quadrature::{build_p1_rule, QuadratureRule};
use crate::weights::{ChartFn, Poly2, WeightFamily, DEFAULT_FD_STEP};
use std::sync::Arc;

/// A degree-parametrized path of metrics on the ℙ¹ fiber.
#[derive(Clone, Debug)]
pub enum PathSpec {
    /// φ = l·log(1+|z|²) + ψ with ψ built from chart functions.
    Fs { psi: Vec<(Poly2, ChartFn)> },
    /// φ = l·log(1+|z−t|²): the translation flow, gauge-flat at every degree.
    Mobius,
}

impl PathSpec {
    /// The total weight family at degree l.
    pub fn weight(&self, l: u32) -> Result<WeightFamily> {
        match self {
            PathSpec::Fs { psi } => WeightFamily::fs_family(l, psi.clone()),
            PathSpec::Mobius => Ok(WeightFamily::mobius_flow(l)),
        }
    }
}

/// Geodesic curvature C = ψ_{tt̄} − |ψ_{t z̄}|²/φ_{z z̄} of the path at (t, z).
pub fn geodesic_curvature(phi: &WeightFamily, t: C64, z: C64) -> Result<f64> {
    if phi.base_dim() != 1 {
        return Err(Error::Invalid(
            "geodesic curvature requires base dimension 1".into(),
        ));
    }
    let d = phi.wirtinger(&[t], z, DEFAULT_FD_STEP)?;
    if !(d.hess_zz > 0.0) {
        return Err(Error::FiberDegenerate {
            t: format!("{t}"),
            z: format!("{z}"),
            value: d.hess_zz,
        });
    }
    Ok(d.hess_tt[(0, 0)].re - d.mixed_tz[0].norm_sqr() / d.hess_zz)
}

/// |4·C(ψ) − (ψ̈ − |∂̄_z ψ̇|²_φ)| at (t, z), with the dotted derivatives taken
/// along Re t by an independent real-direction stencil. Meaningful for paths
/// whose ψ depends on Re t only.
pub fn real_path_identity_residual(phi: &WeightFamily, t: C64, z: C64, step: f64) -> Result<f64> {
    let c = geodesic_curvature(phi, t, z)?;
    let d = phi.wirtinger(&[t], z, DEFAULT_FD_STEP)?;

    // ψ̈ along Re t at fixed z
    let f_tz = |x: &[C64]| phi.eval(&x[..1], x[1]);
    let (_, psi_ddot) = real_dir_derivs(&f_tz, &[t, z], 0, step);

    // ψ̇ as a function of the fiber point, then its ∂̄_z by a Wirtinger stencil
    let psi_dot = |zz: &[C64]| -> C64 {
        let g = |x: &[C64]| phi.eval(&x[..1], zz[0]);
        let (dot, _) = real_dir_derivs(&g, &[t], 0, step);
        C64::new(dot, 0.0)
    };
    let st = Stencil::new(&psi_dot, &[z], step);
    let dbar_psi_dot = st.dbar(0);
    let rhs = psi_ddot - dbar_psi_dot.norm_sqr() / d.hess_zz;
    Ok((4.0 * c - rhs).abs())
}

/// Minimum generalized eigenvalue of hΘ₁₁ − T_C relative to h: the curvature
/// of the section bundle dominates the Toeplitz compression of the geodesic
/// curvature for any metric strictly positive along the fiber.
pub fn toeplitz_bound_margin(
    basis: &Basis,
    phi: &WeightFamily,
    t: C64,
    rule: &Arc<QuadratureRule>,
    mode: DerivativeMode,
) -> Result<f64> {
    let field = GramField::from_quadrature(basis.clone(), phi.clone(), rule.clone(), mode)?;
    let curv = chern_curvature(&field, &[t])?;
    let fs = FiberSpace::new(basis, phi, &[t], rule)?;
    let chi: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&z| geodesic_curvature(phi, t, z))
        .collect::<Result<_>>()?;
    let t_c = fs.toeplitz(&chi)?;
    let a = &curv.h * curv.theta(0, 0) - t_c;
    let a = crate::linalg::hermitize(&a);
    gen_min_eig(&a, &curv.h)
}

/// One row of the degree sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct QuantizationRow {
    pub l: u32,
    pub nakano_min_eig: f64,
    pub toeplitz_margin: f64,
    pub min_c: f64,
}

/// Run the path at each degree in `l_list`: curvature minimum, Toeplitz
/// bound margin, and the fiber minimum of C, each minimized over the t-grid.
pub fn quantization_report(
    path: &PathSpec,
    t_grid: &[C64],
    l_list: &[u32],
    n_radial: usize,
    n_angular: usize,
) -> Result<Vec<QuantizationRow>> {
    let mut rows = Vec::with_capacity(l_list.len());
    for &l in l_list {
        let phi = path.weight(l)?;
        let basis = Basis::p1_sections(l)?;
        let rule = Arc::new(build_p1_rule(n_radial, n_angular)?);
        let field = GramField::from_quadrature(
            basis.clone(),
            phi.clone(),
            rule.clone(),
            DerivativeMode::AnalyticWeight,
        )?;
        let mut nakano = f64::INFINITY;
        let mut margin = f64::INFINITY;
        let mut min_c = f64::INFINITY;
        for &t in t_grid {
            let curv = chern_curvature(&field, &[t])?;
            nakano = nakano.min(nakano_min_eig(&curv)?);
            margin = margin.min(toeplitz_bound_margin(
                &basis,
                &phi,
                t,
                &rule,
                DerivativeMode::AnalyticWeight,
            )?);
            for &z in &rule.nodes {
                min_c = min_c.min(geodesic_curvature(&phi, t, z)?);
            }
        }
        rows.push(QuantizationRow {
            l,
            nakano_min_eig: nakano,
            toeplitz_margin: margin,
            min_c,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::d_matrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn re_t_poly(scale: f64) -> Poly2 {
        // scale·Re t = scale·(t + t̄)/2
        Poly2::from_terms(&[(1, 0, c(scale / 2.0, 0.0)), (0, 1, c(scale / 2.0, 0.0))])
    }

    #[test]
    fn curvature_vanishes_for_t_independent_psi() {
        let phi = WeightFamily::fs_family(
            4,
            vec![(Poly2::constant(c(0.4, 0.0)), ChartFn::AbsRatio)],
        )
        .unwrap();
        let v = geodesic_curvature(&phi, c(0.3, 0.1), c(0.7, -0.2)).unwrap();
        assert!(v.abs() < 1e-13);
    }

    #[test]
    fn affine_path_curvature_and_identity() {
        // ψ = (Re t)·χ: ψ̈ = 0 so 4C = −|∂̄_z ψ̇|²_φ ≤ 0
        let phi = WeightFamily::fs_family(4, vec![(re_t_poly(1.0), ChartFn::AbsRatio)]).unwrap();
        for (t, z) in [(c(0.0, 0.0), c(0.5, 0.2)), (c(0.2, -0.1), c(1.1, 0.4))] {
            let cval = geodesic_curvature(&phi, t, z).unwrap();
            assert!(cval <= 0.0, "C = {cval}");
            let r = real_path_identity_residual(&phi, t, z, 1e-3).unwrap();
            assert!(r <= 1e-8, "identity residual {r}");
        }
    }

    #[test]
    fn quadratic_real_path_identity() {
        // ψ = (Re t)²·χ: ψ̈ = 2χ enters the identity nontrivially
        let sq = Poly2::from_terms(&[
            (2, 0, c(0.25, 0.0)),
            (1, 1, c(0.5, 0.0)),
            (0, 2, c(0.25, 0.0)),
        ]);
        let phi = WeightFamily::fs_family(4, vec![(sq, ChartFn::AbsRatio)]).unwrap();
        let r = real_path_identity_residual(&phi, c(0.3, 0.0), c(0.6, 0.3), 1e-3).unwrap();
        assert!(r <= 1e-8, "identity residual {r}");
    }

    #[test]
    fn curvature_equals_fiber_hessian_quotient_entry() {
        // cross-module identity: C(ψ) = D₁₁(φ₀+ψ) for t-independent φ₀
        let phi = WeightFamily::fs_family(
            5,
            vec![
                (Poly2::abs_sq(), ChartFn::AbsRatio),
                (re_t_poly(0.3), ChartFn::ReRatio),
            ],
        )
        .unwrap();
        let mut rng = crate::num::SplitMix64::new(17);
        for _ in 0..20 {
            let t = rng.next_c64(0.7);
            let z = rng.next_c64(1.5);
            let cval = geodesic_curvature(&phi, t, z).unwrap();
            let dm = d_matrix(&phi, &[t], z).unwrap();
            assert!((cval - dm[(0, 0)].re).abs() <= 1e-8);
        }
    }

    #[test]
    fn mobius_path_curvature_is_zero_and_margin_tiny() {
        let phi = WeightFamily::mobius_flow(4);
        for (t, z) in [(c(0.0, 0.0), c(0.4, 0.1)), (c(0.3, 0.0), c(-0.6, 0.8))] {
            let cval = geodesic_curvature(&phi, t, z).unwrap();
            assert!(cval.abs() < 1e-12, "C = {cval}");
        }
        let basis = Basis::p1_sections(4).unwrap();
        let rule = Arc::new(build_p1_rule(48, 48).unwrap());
        let margin = toeplitz_bound_margin(
            &basis,
            &phi,
            c(0.3, 0.0),
            &rule,
            DerivativeMode::AnalyticWeight,
        )
        .unwrap();
        assert!(margin.abs() <= 1e-5, "margin {margin}");
        assert!(margin >= -1e-5);
    }

    #[test]
    fn fs_quadratic_path_margin_nonnegative() {
        // ψ = |t|²·χ₁: at t = 0, C(0, z) = χ₁ ≥ 0 and the bound holds
        let phi =
            WeightFamily::fs_family(4, vec![(Poly2::abs_sq(), ChartFn::AbsRatio)]).unwrap();
        let c00 = geodesic_curvature(&phi, c(0.0, 0.0), c(0.8, -0.3)).unwrap();
        let chart = ChartFn::AbsRatio.eval(c(0.8, -0.3));
        assert!((c00 - chart).abs() < 1e-12);

        let basis = Basis::p1_sections(4).unwrap();
        let rule = Arc::new(build_p1_rule(40, 32).unwrap());
        for t in [c(0.0, 0.0), c(0.4, 0.2)] {
            let margin =
                toeplitz_bound_margin(&basis, &phi, t, &rule, DerivativeMode::AnalyticWeight)
                    .unwrap();
            assert!(margin >= -1e-5, "margin {margin} at t = {t}");
        }
    }

    #[test]
    fn quantization_rows() {
        let path = PathSpec::Fs {
            psi: vec![(Poly2::abs_sq(), ChartFn::AbsRatio)],
        };
        let rows =
            quantization_report(&path, &[c(0.0, 0.0), c(0.3, 0.1)], &[4, 6], 32, 24).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert!(row.toeplitz_margin >= -1e-5, "l = {}: {row:?}", row.l);
            assert!(row.nakano_min_eig >= -1e-6);
        }
        // trivial path: all columns vanish
        let flat = PathSpec::Fs { psi: vec![] };
        let rows = quantization_report(&flat, &[c(0.2, 0.0)], &[4], 24, 16).unwrap();
        assert!(rows[0].nakano_min_eig.abs() < 1e-10);
        assert!(rows[0].toeplitz_margin.abs() < 1e-10);
        assert!(rows[0].min_c.abs() < 1e-12);
    }
}
