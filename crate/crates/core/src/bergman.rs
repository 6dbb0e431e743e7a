//! Weighted Bergman bases, Gram matrices, kernels, projections, Toeplitz
//! compressions, and the second-fundamental-form / minimal-solution circle of
//! computations on a single fiber.
//!
//! Conventions, fixed once:
//!   h[α][β] = ∫ e_β conj(e_α) e^{−φ} dA, so that ‖u‖² = uᴴ h u for
//!   coefficient vectors u, projections are c = h⁻¹ b with b_α = ⟨m, e_α⟩,
//!   and K(z, w) = Σ e_α(z) (h⁻¹)_{αβ} conj(e_β(w)).
//! On ℙ¹ the section-space density in the affine chart is
//!   |Σ c_k z^k|² e^{−φ(t,z)} dA with φ containing the l·log(1+|z|²) term,
//!   pinned by the moment oracle ∫ |z|^{2k} (1+|z|²)^{−l} dA
//!   = π k!(l−2−k)!/(l−1)!.

use crate::error::{Error, Result};
use crate::linalg::{equilibrated_condition, hermitize, solve_hpd, CMat, CVec};
use crate::num::{Pairwise, Stencil, C64};
use crate::quadrature::{DomainTag, QuadratureRule};
use crate::weights::{WeightFamily, DEFAULT_FD_STEP};

pub const CONDITION_LIMIT: f64 = 1e12;

// ---------------------------------------------------------------------------
// Bases
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    /// z^k for k = 0..=cutoff on a planar domain.
    PlaneMonomials { cutoff: usize },
    /// Chart sections z^k, k = 0..=l−2, of the degree-l space over ℙ¹.
    P1Sections { l: u32 },
    /// Shifted scaled complex-Hermite frame spanning
    /// {(z−center)^a conj(z−center)^b : a ≤ n_hol, b ≤ n_anti}, orthogonal
    /// under exp(−scale·|z−center|²). Used as an ambient model space.
    MixedHermite {
        n_hol: usize,
        n_anti: usize,
        scale: f64,
        center: C64,
    },
}

impl Basis {
    pub fn plane_monomials(cutoff: usize) -> Basis {
        Basis::PlaneMonomials { cutoff }
    }

    pub fn p1_sections(l: u32) -> Result<Basis> {
        if l < 2 {
            return Err(Error::Invalid(format!("p1 sections need l >= 2, got {l}")));
        }
        Ok(Basis::P1Sections { l })
    }

    pub fn dim(&self) -> usize {
        match *self {
            Basis::PlaneMonomials { cutoff } => cutoff + 1,
            Basis::P1Sections { l } => (l - 1) as usize,
            Basis::MixedHermite { n_hol, n_anti, .. } => (n_hol + 1) * (n_anti + 1),
        }
    }

    /// Index of the purely holomorphic element (z−center)^p in a mixed frame,
    /// which orders the pair (p, q) as p·(n_anti+1) + q.
    pub fn mixed_hol_index(&self, p: usize) -> Option<usize> {
        match *self {
            Basis::MixedHermite { n_anti, .. } => Some(p * (n_anti + 1)),
            _ => None,
        }
    }

    /// Values of every basis element at one point.
    pub fn eval_all(&self, z: C64) -> Vec<C64> {
        match *self {
            Basis::PlaneMonomials { cutoff } => powers(z, cutoff),
            Basis::P1Sections { l } => powers(z, (l - 2) as usize),
            Basis::MixedHermite {
                n_hol,
                n_anti,
                scale,
                center,
            } => {
                // G_{0,q} = ζ̄^q, then G_{p+1,q} = ζ G_{p,q} − (q/s) G_{p,q−1}
                let zeta = z - center;
                let zetab = zeta.conj();
                let cols = n_anti + 1;
                let mut g = vec![C64::new(0.0, 0.0); (n_hol + 1) * cols];
                g[0] = C64::new(1.0, 0.0);
                for q in 0..n_anti {
                    g[q + 1] = zetab * g[q];
                }
                for p in 0..n_hol {
                    for q in 0..=n_anti {
                        let cur = g[p * cols + q];
                        let down = if q == 0 {
                            C64::new(0.0, 0.0)
                        } else {
                            g[p * cols + q - 1]
                        };
                        g[(p + 1) * cols + q] = zeta * cur - (q as f64 / scale) * down;
                    }
                }
                g
            }
        }
    }

    /// Sample matrix B[α][i] = e_α(node_i).
    pub fn sample_matrix(&self, nodes: &[C64]) -> Vec<Vec<C64>> {
        let d = self.dim();
        let mut b = vec![vec![C64::new(0.0, 0.0); nodes.len()]; d];
        for (i, &z) in nodes.iter().enumerate() {
            let vals = self.eval_all(z);
            for (alpha, v) in vals.into_iter().enumerate() {
                b[alpha][i] = v;
            }
        }
        b
    }

    fn max_degree(&self) -> usize {
        match *self {
            Basis::PlaneMonomials { cutoff } => cutoff,
            Basis::P1Sections { l } => (l - 2) as usize,
            Basis::MixedHermite { n_hol, n_anti, .. } => n_hol.max(n_anti),
        }
    }

    pub fn check_rule(&self, rule: &QuadratureRule) -> Result<()> {
        match (self, &rule.domain) {
            (Basis::P1Sections { .. }, DomainTag::P1Chart) => Ok(()),
            (Basis::P1Sections { .. }, _) => Err(Error::Invalid(
                "ℙ¹ section basis requires a ℙ¹ chart rule".into(),
            )),
            (_, DomainTag::P1Chart) => Err(Error::Invalid(
                "plane basis paired with a ℙ¹ chart rule".into(),
            )),
            (_, DomainTag::Plane { spec }) => {
                let need = self.max_degree();
                if need > rule.max_envelope_degree {
                    return Err(Error::CutoffTooSmall {
                        radius: match spec {
                            crate::quadrature::PlaneDomainSpec::GaussianPlane {
                                cutoff_radius,
                                ..
                            } => *cutoff_radius,
                            _ => 0.0,
                        },
                        degree: need,
                        required: {
                            let m = need as f64;
                            (2.0 * m + 10.0 * (2.0 * m).sqrt()).sqrt()
                        },
                    });
                }
                Ok(())
            }
        }
    }
}

fn powers(z: C64, max: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..=max {
        out.push(p);
        p *= z;
    }
    out
}

/// Value and z-derivative of a chart polynomial Σ c_k z^k.
pub fn poly_eval_and_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut val = C64::new(0.0, 0.0);
    let mut der = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

// ---------------------------------------------------------------------------
// Gram matrices and the fiber workspace
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub h: CMat,
    pub t: Vec<C64>,
    /// Condition number of the equilibrated Gram matrix.
    pub cond: f64,
}

/// Everything needed to work on one fiber at a fixed base point: basis
/// samples, weighted node measure, and the Gram matrix.
pub struct FiberSpace<'a> {
    pub basis: &'a Basis,
    pub phi: &'a WeightFamily,
    pub t: Vec<C64>,
    pub rule: &'a QuadratureRule,
    /// w_i · exp(−φ(t, z_i))
    pub wphi: Vec<f64>,
    /// B[α][i] = e_α(z_i)
    pub bmat: Vec<Vec<C64>>,
    pub gram: GramMatrix,
}

fn weighted_measure(phi: &WeightFamily, t: &[C64], rule: &QuadratureRule) -> Result<Vec<f64>> {
    let mut w = Vec::with_capacity(rule.len());
    for (&z, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let v = wt * (-phi.eval(t, z)).exp();
        if !v.is_finite() {
            return Err(Error::Invalid(format!(
                "non-finite integrand: exp(−φ)·w at z = {z}"
            )));
        }
        w.push(v);
    }
    Ok(w)
}

fn gram_from_samples(bmat: &[Vec<C64>], wphi: &[f64]) -> CMat {
    let d = bmat.len();
    let mut h = CMat::zeros(d, d);
    for alpha in 0..d {
        for beta in alpha..d {
            let mut acc = Pairwise::new();
            for i in 0..wphi.len() {
                acc.push(bmat[beta][i] * bmat[alpha][i].conj() * wphi[i]);
            }
            let v = acc.sum();
            h[(alpha, beta)] = v;
            h[(beta, alpha)] = v.conj();
        }
    }
    for alpha in 0..d {
        h[(alpha, alpha)] = C64::new(h[(alpha, alpha)].re, 0.0);
    }
    h
}

impl<'a> FiberSpace<'a> {
    pub fn new(
        basis: &'a Basis,
        phi: &'a WeightFamily,
        t: &[C64],
        rule: &'a QuadratureRule,
    ) -> Result<Self> {
        basis.check_rule(rule)?;
        let wphi = weighted_measure(phi, t, rule)?;
        let bmat = basis.sample_matrix(&rule.nodes);
        let h = gram_from_samples(&bmat, &wphi);
        let cond = equilibrated_condition(&h)?;
        if cond > CONDITION_LIMIT {
            return Err(Error::IllConditioned {
                cond,
                limit: CONDITION_LIMIT,
            });
        }
        Ok(FiberSpace {
            basis,
            phi,
            t: t.to_vec(),
            rule,
            wphi,
            bmat,
            gram: GramMatrix {
                h,
                t: t.to_vec(),
                cond,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// ⟨f, g⟩ = Σ f_i conj(g_i) w̃_i (weighted L² inner product of samples).
    pub fn inner(&self, f: &[C64], g: &[C64]) -> C64 {
        let mut acc = Pairwise::new();
        for i in 0..self.wphi.len() {
            acc.push(f[i] * g[i].conj() * self.wphi[i]);
        }
        acc.sum()
    }

    pub fn norm_sq(&self, f: &[C64]) -> f64 {
        let mut acc = Pairwise::new();
        for i in 0..self.wphi.len() {
            acc.push(C64::new(f[i].norm_sqr() * self.wphi[i], 0.0));
        }
        acc.sum().re
    }

    /// Node samples of the section with the given coefficients.
    pub fn section_samples(&self, coeffs: &CVec) -> Vec<C64> {
        let n = self.wphi.len();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (alpha, c) in coeffs.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += c * self.bmat[alpha][i];
            }
        }
        out
    }

    /// Coefficients of the orthogonal projection of node samples onto the
    /// basis span: c = h⁻¹ b with b_α = ⟨m, e_α⟩.
    pub fn project(&self, m: &[C64]) -> Result<CVec> {
        let d = self.dim();
        let mut b = CVec::zeros(d);
        for alpha in 0..d {
            let mut acc = Pairwise::new();
            for i in 0..self.wphi.len() {
                acc.push(m[i] * self.bmat[alpha][i].conj() * self.wphi[i]);
            }
            b[alpha] = acc.sum();
        }
        solve_hpd(&self.gram.h, &b)
    }

    /// ‖u‖² in coefficients: uᴴ h u.
    pub fn coeff_norm_sq(&self, u: &CVec) -> f64 {
        (u.adjoint() * &self.gram.h * u)[(0, 0)].re
    }

    /// Bergman kernel of the truncated space.
    pub fn kernel(&self, z: C64, w: C64) -> Result<C64> {
        kernel_eval(self.basis, &self.gram, z, w)
    }

    /// Toeplitz compression of multiplication by a real symbol sampled at the
    /// nodes: T[α][β] = Σ χ_i e_β conj(e_α) w̃_i. χ ≡ 1 reproduces the Gram.
    pub fn toeplitz(&self, chi: &[f64]) -> Result<CMat> {
        if chi.len() != self.wphi.len() {
            return Err(Error::LengthMismatch {
                got: chi.len(),
                expected: self.wphi.len(),
            });
        }
        let d = self.dim();
        let mut tmat = CMat::zeros(d, d);
        for alpha in 0..d {
            for beta in alpha..d {
                let mut acc = Pairwise::new();
                for i in 0..self.wphi.len() {
                    acc.push(
                        self.bmat[beta][i] * self.bmat[alpha][i].conj() * (self.wphi[i] * chi[i]),
                    );
                }
                let v = acc.sum();
                tmat[(alpha, beta)] = v;
                tmat[(beta, alpha)] = v.conj();
            }
        }
        Ok(tmat)
    }

    /// S[j][k] = ⟨π_⊥(φ_j u_j), π_⊥(φ_k u_k)⟩ for a tuple of coefficient
    /// vectors; π_⊥ is the L² complement of the basis span.
    pub fn second_fundamental_form(&self, tuple: &[CVec]) -> Result<CMat> {
        let m = self.phi.base_dim();
        if tuple.len() != m {
            return Err(Error::Invalid(format!(
                "tuple length {} does not match base dimension {m}",
                tuple.len()
            )));
        }
        let mut fj: Vec<Vec<C64>> = tuple.iter().map(|u| self.section_samples(u)).collect();
        for (i, &z) in self.rule.nodes.iter().enumerate() {
            let d = self.phi.wirtinger(&self.t, z, DEFAULT_FD_STEP)?;
            for (j, f) in fj.iter_mut().enumerate() {
                f[i] *= d.grad_t[j];
            }
        }
        let proj: Vec<CVec> = fj.iter().map(|f| self.project(f)).collect::<Result<_>>()?;
        let mut s = CMat::zeros(m, m);
        for j in 0..m {
            for k in 0..m {
                let full = self.inner(&fj[j], &fj[k]);
                let inside = (proj[k].adjoint() * &self.gram.h * &proj[j])[(0, 0)];
                s[(j, k)] = full - inside;
            }
        }
        Ok(hermitize(&s))
    }
}

/// Assemble the Gram matrix of a basis under φ(t, ·) on the given rule.
pub fn gram(
    basis: &Basis,
    phi: &WeightFamily,
    t: &[C64],
    rule: &QuadratureRule,
) -> Result<GramMatrix> {
    Ok(FiberSpace::new(basis, phi, t, rule)?.gram)
}

/// K(z, w) from a prebuilt Gram matrix.
pub fn kernel_eval(basis: &Basis, gm: &GramMatrix, z: C64, w: C64) -> Result<C64> {
    let ew = CVec::from_vec(basis.eval_all(w)).map(|x| x.conj());
    let x = solve_hpd(&gm.h, &ew)?;
    let ez = basis.eval_all(z);
    let mut k = C64::new(0.0, 0.0);
    for (alpha, v) in ez.iter().enumerate() {
        k += v * x[alpha];
    }
    Ok(k)
}

/// Minimum eigenvalue over a grid of the joint (t, z) Hessian of
/// log K_t(z, z), by finite differences with one Richardson level.
pub fn log_kernel_psh_report(
    basis: &Basis,
    phi: &WeightFamily,
    rule: &QuadratureRule,
    grid: &[(Vec<C64>, C64)],
    step: f64,
) -> Result<f64> {
    use std::cell::RefCell;
    use std::collections::BTreeMap;
    use std::rc::Rc;

    let m = phi.base_dim();
    let mut min_eig = f64::INFINITY;
    for (t0, z0) in grid {
        let gram_cache: RefCell<BTreeMap<Vec<(u64, u64)>, Rc<GramMatrix>>> =
            RefCell::new(BTreeMap::new());
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let f = |x: &[C64]| -> C64 {
            if failure.borrow().is_some() {
                return C64::new(f64::NAN, 0.0);
            }
            let t = &x[..m];
            let z = x[m];
            let key: Vec<(u64, u64)> =
                t.iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect();
            let cached = gram_cache.borrow().get(&key).cloned();
            let gm = match cached {
                Some(g) => g,
                None => match gram(basis, phi, t, rule) {
                    Ok(g) => {
                        let rc = Rc::new(g);
                        gram_cache.borrow_mut().insert(key, rc.clone());
                        rc
                    }
                    Err(e) => {
                        *failure.borrow_mut() = Some(e);
                        return C64::new(f64::NAN, 0.0);
                    }
                },
            };
            match kernel_eval(basis, &gm, z, z) {
                Ok(k) if k.re > 0.0 => C64::new(k.re.ln(), 0.0),
                Ok(k) => {
                    *failure.borrow_mut() = Some(Error::Invalid(format!(
                        "kernel value {} is not positive at t={t:?}, z={z}; \
                         truncation or quadrature failure",
                        k.re
                    )));
                    C64::new(f64::NAN, 0.0)
                }
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    C64::new(f64::NAN, 0.0)
                }
            }
        };
        let mut x0: Vec<C64> = t0.clone();
        x0.push(*z0);
        let st = Stencil::new(&f, &x0, step);
        let n = m + 1;
        let hess = CMat::from_fn(n, n, |j, k| st.ddbar(j, k));
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        min_eig = min_eig.min(crate::linalg::min_eig_hermitian(&hermitize(&hess)));
    }
    Ok(min_eig)
}

// ---------------------------------------------------------------------------
// Minimal-solution witnesses
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct HormanderWitness {
    pub norm_mu_sq: f64,
    pub norm_f_sq: f64,
    pub orth_residual: f64,
}

/// For holomorphic chart sections γ: μ = ∂^φγ = (γ' − γφ_z) dz pairs with the
/// data f = γ·ω, ω = i∂∂̄_z φ. Returns ‖μ‖², ‖f‖² and the largest normalized
/// pairing of μ against the holomorphic basis (the Stokes certificate that μ
/// is the minimal solution).
pub fn hormander_equality_witness(fs: &FiberSpace, gamma: &[C64]) -> Result<HormanderWitness> {
    if gamma.len() > fs.dim() {
        return Err(Error::Invalid(format!(
            "γ degree {} exceeds the section space (dim {})",
            gamma.len().saturating_sub(1),
            fs.dim()
        )));
    }
    let n = fs.rule.len();
    let mut mu = vec![C64::new(0.0, 0.0); n];
    let mut f_density = vec![0.0f64; n];
    for (i, &z) in fs.rule.nodes.iter().enumerate() {
        let d = fs.phi.wirtinger(&fs.t, z, DEFAULT_FD_STEP)?;
        if !(d.hess_zz > 0.0) {
            return Err(Error::FiberDegenerate {
                t: format!("{:?}", fs.t),
                z: format!("{z}"),
                value: d.hess_zz,
            });
        }
        let (gv, gd) = poly_eval_and_derivative(gamma, z);
        mu[i] = gd - gv * d.grad_z;
        f_density[i] = gv.norm_sqr() * d.hess_zz;
    }
    let norm_mu_sq = fs.norm_sq(&mu);
    let mut acc = Pairwise::new();
    for i in 0..n {
        acc.push(C64::new(f_density[i] * fs.wphi[i], 0.0));
    }
    let norm_f_sq = acc.sum().re;

    let mut orth = 0.0f64;
    if norm_mu_sq > 0.0 {
        let mu_norm = norm_mu_sq.sqrt();
        for alpha in 0..fs.dim() {
            let pairing = fs.inner(&mu, &fs.bmat[alpha]);
            let e_norm = fs.gram.h[(alpha, alpha)].re.sqrt();
            orth = orth.max(pairing.norm() / (mu_norm * e_norm));
        }
    }
    Ok(HormanderWitness {
        norm_mu_sq,
        norm_f_sq,
        orth_residual: orth,
    })
}

#[derive(Debug, Clone)]
pub struct HormanderGap {
    pub norm_mu_min_sq: f64,
    pub norm_f_sq: f64,
    pub gap: f64,
}

/// Witness for the strict direction: perturb γ by ε·z̄ and compare the
/// minimal solution of ∂̄m = −(γ+εz̄)λ against ‖f‖². The base term
/// γ' − (γ+εz̄)φ_z solves the equation only up to −ε·φ_z, so a winding-(−2)
/// correction c with ∂̄c = ε·φ_z is added; for the pure Fubini–Study fiber
/// form (a z-independent ψ offset is allowed) it has the closed form
/// c = ε·l·(u − log(1+u))/u² · z̄², u = |z|².
pub fn hormander_perturbed_gap(fs: &FiberSpace, gamma: &[C64], eps: f64) -> Result<HormanderGap> {
    let l = match fs.phi.p1_degree() {
        Some(l) => l as f64,
        None => {
            return Err(Error::Invalid(
                "perturbed witness requires a ℙ¹ chart weight family".into(),
            ))
        }
    };
    // the closed form above needs the fiber curvature of pure FS
    let probe = C64::new(0.37, 0.0);
    let d_probe = fs.phi.wirtinger(&fs.t, probe, DEFAULT_FD_STEP)?;
    let fs_probe = l / (1.0 + probe.norm_sqr()).powi(2);
    if (d_probe.hess_zz - fs_probe).abs() > 1e-10 * fs_probe {
        return Err(Error::Invalid(
            "perturbed witness requires the Fubini–Study fiber form \
             (perturbation constant along the fiber)"
                .into(),
        ));
    }

    let n = fs.rule.len();
    let mut m_sol = vec![C64::new(0.0, 0.0); n];
    let mut f_density = vec![0.0f64; n];
    for (i, &z) in fs.rule.nodes.iter().enumerate() {
        let d = fs.phi.wirtinger(&fs.t, z, DEFAULT_FD_STEP)?;
        let (gv, gd) = poly_eval_and_derivative(gamma, z);
        let gtilde = gv + eps * z.conj();
        let u = z.norm_sqr();
        let bracket = if u < 1e-3 {
            // (u − log(1+u))/u² = 1/2 − u/3 + u²/4 − u³/5 + …
            0.5 - u / 3.0 + u * u / 4.0 - u * u * u / 5.0
        } else {
            (u - (1.0 + u).ln()) / (u * u)
        };
        let corr = eps * l * bracket * z.conj() * z.conj();
        m_sol[i] = gd - gtilde * d.grad_z + corr;
        f_density[i] = gtilde.norm_sqr() * d.hess_zz;
    }
    let c = fs.project(&m_sol)?;
    let norm_mu_min_sq = fs.norm_sq(&m_sol) - fs.coeff_norm_sq(&c);
    let mut acc = Pairwise::new();
    for i in 0..n {
        acc.push(C64::new(f_density[i] * fs.wphi[i], 0.0));
    }
    let norm_f_sq = acc.sum().re;
    Ok(HormanderGap {
        norm_mu_min_sq,
        norm_f_sq,
        gap: norm_f_sq - norm_mu_min_sq,
    })
}

// ---------------------------------------------------------------------------
// Minimal holomorphic extension over the disk
// ---------------------------------------------------------------------------

/// Minimize ∫_U ‖ũ(t, ·)‖²_t dA(t) over extensions ũ(t, z) = Σ_{p≤cutoff}
/// t^p v_p(z) with ũ(0, ·) = u and every v_p in the section space; u is
/// normalized to unit fiber norm at t = 0 first. A t-independent weight
/// factorizes and the minimum is exactly area(U) = π.
pub fn minimal_extension_ratio(
    fiber_basis: &Basis,
    phi: &WeightFamily,
    fiber_rule: &QuadratureRule,
    t_rule: &QuadratureRule,
    u0: &CVec,
    t_poly_cutoff: usize,
) -> Result<f64> {
    if phi.base_dim() != 1 {
        return Err(Error::Invalid(
            "extension experiment requires base dimension 1".into(),
        ));
    }
    let d = fiber_basis.dim();
    if u0.len() != d {
        return Err(Error::LengthMismatch {
            got: u0.len(),
            expected: d,
        });
    }
    let g0 = gram(fiber_basis, phi, &[C64::new(0.0, 0.0)], fiber_rule)?;
    let n0 = (u0.adjoint() * &g0.h * u0)[(0, 0)].re;
    if !(n0 > 0.0) {
        return Err(Error::Invalid("section has zero norm at t = 0".into()));
    }
    let u = u0 / C64::new(n0.sqrt(), 0.0);

    let grams: Vec<CMat> = t_rule
        .nodes
        .iter()
        .map(|&tn| Ok(gram(fiber_basis, phi, &[tn], fiber_rule)?.h))
        .collect::<Result<_>>()?;

    let p1 = t_poly_cutoff + 1;
    let big = p1 * d;
    // A[(q,α),(p,β)] = Σ_i w_i conj(t_i)^q t_i^p G_i[α][β]
    let mut a = CMat::zeros(big, big);
    for q in 0..p1 {
        for p in 0..p1 {
            for alpha in 0..d {
                for beta in 0..d {
                    let mut acc = Pairwise::new();
                    for (i, &tn) in t_rule.nodes.iter().enumerate() {
                        let tp = tn.powu(p as u32) * tn.conj().powu(q as u32);
                        acc.push(tp * grams[i][(alpha, beta)] * t_rule.weights[i]);
                    }
                    a[(q * d + alpha, p * d + beta)] = acc.sum();
                }
            }
        }
    }
    let a = hermitize(&a);
    let a00 = a.view((0, 0), (d, d)).into_owned();
    let base = (u.adjoint() * a00 * &u)[(0, 0)].re;
    if t_poly_cutoff == 0 {
        return Ok(base);
    }
    let r = big - d;
    let a0r = a.view((0, d), (d, r)).into_owned();
    let arr = a.view((d, d), (r, r)).into_owned();
    // Schur complement: value = uᴴ(A00 − A0r Arr⁻¹ Ar0)u
    let ar0_u = a0r.adjoint() * &u;
    let x = crate::linalg::solve_hpd(&arr, &ar0_u)?;
    Ok(base - (ar0_u.adjoint() * &x)[(0, 0)].re)
}
