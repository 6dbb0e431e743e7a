//! Gram fields t ↦ h(t), their Chern curvature in a fixed holomorphic frame,
//! Nakano/Griffiths positivity certificates, and the curvature identities
//! (dual bundle, subbundle defect, fiber-Hessian lower bound, normalized-tuple
//! second derivative, degeneracy diagnostics).
//!
//! Sign convention: Θ_{jk} = −∂̄_k(h⁻¹ ∂_j h), so a rank-one Gram e^{−φ(t)}
//! has Θ₁₁ = φ_{11̄}. The curvature pairing (Θ_{jk} u, v) = vᴴ h Θ_{jk} u
//! satisfies (hΘ_{jk})ᴴ = hΘ_{kj}.

use crate::bergman::{Basis, FiberSpace};
use crate::error::{Error, Result};
use crate::linalg::{gen_min_eig, hermitize, inverse_hpd, solve_hpd_mat, CMat, CVec};
use crate::num::{Pairwise, SplitMix64, Stencil, C64};
use crate::quadrature::QuadratureRule;
use crate::weights::{WeightFamily, DEFAULT_FD_STEP};
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;
use std::sync::Arc;

/// How t-derivatives of the Gram field are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    FiniteDifference { step: f64 },
    /// ∂_j h = −∫ φ_j e_β ē_α e^{−φ}, ∂̄_k ∂_j h = ∫ (φ_j φ̄_k − φ_{jk̄}) …;
    /// needs a weight family with a closed-form derivative table.
    AnalyticWeight,
}

impl DerivativeMode {
    pub fn fd() -> Self {
        DerivativeMode::FiniteDifference {
            step: DEFAULT_FD_STEP,
        }
    }
}

type ExplicitField = Arc<dyn Fn(&[C64]) -> Result<CMat> + Send + Sync>;

#[derive(Clone)]
enum GramSource {
    Quadrature {
        basis: Basis,
        weight: WeightFamily,
        rule: Arc<QuadratureRule>,
    },
    Explicit {
        dim: usize,
        base_dim: usize,
        f: ExplicitField,
    },
}

/// The map t ↦ h(t) in a fixed holomorphic frame, with a derivative mode.
#[derive(Clone)]
pub struct GramField {
    source: GramSource,
    pub mode: DerivativeMode,
}

impl GramField {
    pub fn from_quadrature(
        basis: Basis,
        weight: WeightFamily,
        rule: Arc<QuadratureRule>,
        mode: DerivativeMode,
    ) -> Result<Self> {
        basis.check_rule(&rule)?;
        if mode == DerivativeMode::AnalyticWeight && !weight.has_analytic() {
            return Err(Error::Invalid(
                "analytic derivative mode needs a weight family with a closed-form table".into(),
            ));
        }
        Ok(GramField {
            source: GramSource::Quadrature {
                basis,
                weight,
                rule,
            },
            mode,
        })
    }

    pub fn from_fn<F>(dim: usize, base_dim: usize, step: f64, f: F) -> Self
    where
        F: Fn(&[C64]) -> Result<CMat> + Send + Sync + 'static,
    {
        GramField {
            source: GramSource::Explicit {
                dim,
                base_dim,
                f: Arc::new(f),
            },
            mode: DerivativeMode::FiniteDifference { step },
        }
    }

    pub fn dim(&self) -> usize {
        match &self.source {
            GramSource::Quadrature { basis, .. } => basis.dim(),
            GramSource::Explicit { dim, .. } => *dim,
        }
    }

    pub fn base_dim(&self) -> usize {
        match &self.source {
            GramSource::Quadrature { weight, .. } => weight.base_dim(),
            GramSource::Explicit { base_dim, .. } => *base_dim,
        }
    }

    pub fn fd_step(&self) -> f64 {
        match self.mode {
            DerivativeMode::FiniteDifference { step } => step,
            DerivativeMode::AnalyticWeight => DEFAULT_FD_STEP,
        }
    }

    pub fn h(&self, t: &[C64]) -> Result<CMat> {
        match &self.source {
            GramSource::Quadrature {
                basis,
                weight,
                rule,
            } => Ok(crate::bergman::gram(basis, weight, t, rule)?.h),
            GramSource::Explicit { f, .. } => f(t),
        }
    }

    /// The dual Gram field h*(t) = (h(t)⁻¹)ᵀ, differentiated by FD.
    pub fn dual(&self) -> GramField {
        let inner = self.clone();
        GramField::from_fn(self.dim(), self.base_dim(), self.fd_step(), move |t| {
            Ok(inverse_hpd(&inner.h(t)?)?.transpose())
        })
    }

    /// Constant frame change e'_α = Σ_β A[β][α] e_β: h'(t) = Aᴴ h(t) A.
    pub fn transformed(&self, a: CMat) -> GramField {
        let inner = self.clone();
        GramField::from_fn(self.dim(), self.base_dim(), self.fd_step(), move |t| {
            Ok(a.adjoint() * inner.h(t)? * &a)
        })
    }

    fn quadrature_parts(&self) -> Result<(&Basis, &WeightFamily, &Arc<QuadratureRule>)> {
        match &self.source {
            GramSource::Quadrature {
                basis,
                weight,
                rule,
            } => Ok((basis, weight, rule)),
            GramSource::Explicit { .. } => Err(Error::Invalid(
                "analytic derivatives need a quadrature-backed field".into(),
            )),
        }
    }

    /// ∂_j h (bar = false) or ∂̄_j h (bar = true) via the weight derivative.
    fn analytic_first(
        &self,
        fs: &FiberSpace,
        tables: &[crate::weights::DerivativeSet],
        j: usize,
        bar: bool,
    ) -> Result<CMat> {
        let factor: Vec<C64> = tables
            .iter()
            .map(|dv| {
                if bar {
                    -dv.grad_t[j].conj()
                } else {
                    -dv.grad_t[j]
                }
            })
            .collect();
        Ok(weighted_gram_like(fs, &factor))
    }

    /// ∂̄_k ∂_j h via ∂̄_k∂_j e^{−φ} = (φ_j φ̄_k − φ_{jk̄}) e^{−φ}.
    fn analytic_second(
        &self,
        fs: &FiberSpace,
        tables: &[crate::weights::DerivativeSet],
        j: usize,
        k: usize,
    ) -> Result<CMat> {
        let factor: Vec<C64> = tables
            .iter()
            .map(|dv| dv.grad_t[j] * dv.grad_t[k].conj() - dv.hess_tt[(j, k)])
            .collect();
        Ok(weighted_gram_like(fs, &factor))
    }

    /// Connection coefficient matrices Γ_j = h⁻¹ ∂_j h at t.
    pub fn connection(&self, t: &[C64]) -> Result<Vec<CMat>> {
        let m = self.base_dim();
        let h = self.h(t)?;
        let mut out = Vec::with_capacity(m);
        match self.mode {
            DerivativeMode::AnalyticWeight => {
                let (basis, weight, rule) = self.quadrature_parts()?;
                let fs = FiberSpace::new(basis, weight, t, rule)?;
                let tables = node_tables(weight, t, rule)?;
                for j in 0..m {
                    let dh = self.analytic_first(&fs, &tables, j, false)?;
                    out.push(solve_hpd_mat(&h, &dh)?);
                }
            }
            DerivativeMode::FiniteDifference { step } => {
                let st = MatStencil::new(self, t, step);
                for j in 0..m {
                    out.push(solve_hpd_mat(&h, &st.d(j)?)?);
                }
            }
        }
        Ok(out)
    }
}

/// Weight derivative tables at every node of the rule.
fn node_tables(
    phi: &WeightFamily,
    t: &[C64],
    rule: &QuadratureRule,
) -> Result<Vec<crate::weights::DerivativeSet>> {
    rule.nodes
        .iter()
        .map(|&z| phi.wirtinger(t, z, DEFAULT_FD_STEP))
        .collect()
}

/// Σ_i factor_i e_β ē_α w̃_i in the Gram index convention.
fn weighted_gram_like(fs: &FiberSpace, factor: &[C64]) -> CMat {
    let d = fs.dim();
    let mut m = CMat::zeros(d, d);
    for alpha in 0..d {
        for beta in 0..d {
            let mut acc = Pairwise::new();
            for i in 0..factor.len() {
                acc.push(fs.bmat[beta][i] * fs.bmat[alpha][i].conj() * factor[i] * fs.wphi[i]);
            }
            m[(alpha, beta)] = acc.sum();
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Matrix-valued Wirtinger stencils
// ---------------------------------------------------------------------------

struct MatStencil<'a> {
    field: &'a GramField,
    t0: Vec<C64>,
    h2: f64,
    cache: RefCell<BTreeMap<Vec<(i32, i32)>, Rc<CMat>>>,
}

impl<'a> MatStencil<'a> {
    fn new(field: &'a GramField, t0: &[C64], step: f64) -> Self {
        MatStencil {
            field,
            t0: t0.to_vec(),
            h2: step / 2.0,
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    fn eval(&self, offs: &[(i32, i32)]) -> Result<Rc<CMat>> {
        if let Some(m) = self.cache.borrow().get(offs) {
            return Ok(m.clone());
        }
        let mut t = self.t0.clone();
        for (i, &(re, im)) in offs.iter().enumerate() {
            t[i] += C64::new(re as f64 * self.h2, im as f64 * self.h2);
        }
        let m = Rc::new(self.field.h(&t)?);
        self.cache.borrow_mut().insert(offs.to_vec(), m.clone());
        Ok(m)
    }

    fn shifted(base: &[(i32, i32)], j: usize, dre: i32, dim: i32) -> Vec<(i32, i32)> {
        let mut o = base.to_vec();
        o[j].0 += dre;
        o[j].1 += dim;
        o
    }

    fn d_at(&self, base: &[(i32, i32)], j: usize, scale: i32) -> Result<CMat> {
        let s = scale as f64 * self.h2;
        let fp = self.eval(&Self::shifted(base, j, scale, 0))?;
        let fm = self.eval(&Self::shifted(base, j, -scale, 0))?;
        let fip = self.eval(&Self::shifted(base, j, 0, scale))?;
        let fim = self.eval(&Self::shifted(base, j, 0, -scale))?;
        Ok(((&*fp - &*fm) - (&*fip - &*fim) * C64::i()) / C64::new(4.0 * s, 0.0))
    }

    fn dbar_at(&self, base: &[(i32, i32)], j: usize, scale: i32) -> Result<CMat> {
        let s = scale as f64 * self.h2;
        let fp = self.eval(&Self::shifted(base, j, scale, 0))?;
        let fm = self.eval(&Self::shifted(base, j, -scale, 0))?;
        let fip = self.eval(&Self::shifted(base, j, 0, scale))?;
        let fim = self.eval(&Self::shifted(base, j, 0, -scale))?;
        Ok(((&*fp - &*fm) + (&*fip - &*fim) * C64::i()) / C64::new(4.0 * s, 0.0))
    }

    fn ddbar_diag_at(&self, j: usize, scale: i32) -> Result<CMat> {
        let s = scale as f64 * self.h2;
        let base = vec![(0, 0); self.t0.len()];
        let f0 = self.eval(&base)?;
        let fp = self.eval(&Self::shifted(&base, j, scale, 0))?;
        let fm = self.eval(&Self::shifted(&base, j, -scale, 0))?;
        let fip = self.eval(&Self::shifted(&base, j, 0, scale))?;
        let fim = self.eval(&Self::shifted(&base, j, 0, -scale))?;
        Ok((&*fp + &*fm + &*fip + &*fim - &*f0 * C64::new(4.0, 0.0)) / C64::new(4.0 * s * s, 0.0))
    }

    fn ddbar_mixed_at(&self, j: usize, k: usize, scale: i32) -> Result<CMat> {
        let s = scale as f64 * self.h2;
        let base = vec![(0, 0); self.t0.len()];
        let gp = self.dbar_at(&Self::shifted(&base, j, scale, 0), k, scale)?;
        let gm = self.dbar_at(&Self::shifted(&base, j, -scale, 0), k, scale)?;
        let gip = self.dbar_at(&Self::shifted(&base, j, 0, scale), k, scale)?;
        let gim = self.dbar_at(&Self::shifted(&base, j, 0, -scale), k, scale)?;
        Ok(((gp - gm) - (gip - gim) * C64::i()) / C64::new(4.0 * s, 0.0))
    }

    fn richardson(coarse: CMat, fine: CMat) -> CMat {
        (fine * C64::new(4.0, 0.0) - coarse) / C64::new(3.0, 0.0)
    }

    fn d(&self, j: usize) -> Result<CMat> {
        let base = vec![(0, 0); self.t0.len()];
        Ok(Self::richardson(
            self.d_at(&base, j, 2)?,
            self.d_at(&base, j, 1)?,
        ))
    }

    fn dbar(&self, j: usize) -> Result<CMat> {
        let base = vec![(0, 0); self.t0.len()];
        Ok(Self::richardson(
            self.dbar_at(&base, j, 2)?,
            self.dbar_at(&base, j, 1)?,
        ))
    }

    fn ddbar(&self, j: usize, k: usize) -> Result<CMat> {
        if j == k {
            Ok(Self::richardson(
                self.ddbar_diag_at(j, 2)?,
                self.ddbar_diag_at(j, 1)?,
            ))
        } else {
            Ok(Self::richardson(
                self.ddbar_mixed_at(j, k, 2)?,
                self.ddbar_mixed_at(j, k, 1)?,
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// Curvature
// ---------------------------------------------------------------------------

/// Θ_{jk}(t) as d×d blocks (row-major in (j, k)) plus the metric at t.
#[derive(Debug, Clone)]
pub struct CurvatureTensor {
    pub theta: Vec<CMat>,
    pub h: CMat,
    pub base_dim: usize,
    pub dim: usize,
}

impl CurvatureTensor {
    pub fn theta(&self, j: usize, k: usize) -> &CMat {
        &self.theta[j * self.base_dim + k]
    }

    /// (Θ_{jk} u, v)_h = vᴴ h Θ_{jk} u.
    pub fn pairing(&self, j: usize, k: usize, u: &CVec, v: &CVec) -> C64 {
        (v.adjoint() * &self.h * self.theta(j, k) * u)[(0, 0)]
    }

    /// Frobenius norm of the full block tensor.
    pub fn norm(&self) -> f64 {
        self.theta
            .iter()
            .map(|m| m.norm_squared())
            .sum::<f64>()
            .sqrt()
    }
}

/// Θ_{jk}(t) = −∂̄_k(h⁻¹ ∂_j h) = −h⁻¹(∂̄_k ∂_j h) + h⁻¹(∂̄_k h) h⁻¹(∂_j h).
pub fn chern_curvature(field: &GramField, t: &[C64]) -> Result<CurvatureTensor> {
    let m = field.base_dim();
    let h = field.h(t)?;

    let (d_h, dbar_h, ddbar_h): (Vec<CMat>, Vec<CMat>, Vec<CMat>) = match field.mode {
        DerivativeMode::AnalyticWeight => {
            let (basis, weight, rule) = field.quadrature_parts()?;
            let fs = FiberSpace::new(basis, weight, t, rule)?;
            let tables = node_tables(weight, t, rule)?;
            let mut d_h = Vec::with_capacity(m);
            let mut dbar_h = Vec::with_capacity(m);
            let mut ddbar_h = Vec::with_capacity(m * m);
            for j in 0..m {
                d_h.push(field.analytic_first(&fs, &tables, j, false)?);
                dbar_h.push(field.analytic_first(&fs, &tables, j, true)?);
            }
            for j in 0..m {
                for k in 0..m {
                    ddbar_h.push(field.analytic_second(&fs, &tables, j, k)?);
                }
            }
            (d_h, dbar_h, ddbar_h)
        }
        DerivativeMode::FiniteDifference { step } => {
            let st = MatStencil::new(field, t, step);
            let mut d_h = Vec::with_capacity(m);
            let mut dbar_h = Vec::with_capacity(m);
            let mut ddbar_h = Vec::with_capacity(m * m);
            for j in 0..m {
                d_h.push(st.d(j)?);
                dbar_h.push(st.dbar(j)?);
            }
            for j in 0..m {
                for k in 0..m {
                    ddbar_h.push(st.ddbar(j, k)?);
                }
            }
            (d_h, dbar_h, ddbar_h)
        }
    };

    let mut theta = Vec::with_capacity(m * m);
    for j in 0..m {
        let gamma_j = solve_hpd_mat(&h, &d_h[j])?; // h⁻¹ ∂_j h
        for k in 0..m {
            let second = solve_hpd_mat(&h, &ddbar_h[j * m + k])?;
            let first = solve_hpd_mat(&h, &dbar_h[k])? * &gamma_j;
            theta.push(first - second);
        }
    }
    Ok(CurvatureTensor {
        theta,
        h,
        base_dim: m,
        dim: field.dim(),
    })
}

const HERMITIAN_GUARD: f64 = 1e-6;

/// Hermitian-defect check in the metric-equilibrated scale, where a defect of
/// size δ moves generalized eigenvalues by about δ; a flat family with a tiny
/// curvature matrix passes, a broken derivative assembly does not.
fn check_pairing_hermitian(a: &CMat, b: &CMat) -> Result<()> {
    let n = a.nrows();
    let mut dvec = vec![0.0f64; n];
    for (i, d) in dvec.iter_mut().enumerate() {
        let bii = b[(i, i)].re;
        if !(bii > 0.0) {
            return Err(Error::BadGram(format!("metric diagonal {i} is {bii}")));
        }
        *d = 1.0 / bii.sqrt();
    }
    let scaled = CMat::from_fn(n, n, |i, j| a[(i, j)] * (dvec[i] * dvec[j]));
    let defect = (&scaled - scaled.adjoint()).norm();
    if defect > HERMITIAN_GUARD * scaled.norm().max(1.0) {
        return Err(Error::NonHermitian(defect));
    }
    Ok(())
}

fn nakano_system(curv: &CurvatureTensor) -> Result<(CMat, CMat)> {
    let (m, d) = (curv.base_dim, curv.dim);
    let mut a = CMat::zeros(m * d, m * d);
    for j in 0..m {
        for k in 0..m {
            let block = &curv.h * curv.theta(j, k);
            a.view_mut((k * d, j * d), (d, d)).copy_from(&block);
        }
    }
    let mut b = CMat::zeros(m * d, m * d);
    for j in 0..m {
        b.view_mut((j * d, j * d), (d, d)).copy_from(&curv.h);
    }
    check_pairing_hermitian(&a, &b)?;
    Ok((hermitize(&a), b))
}

/// Minimum generalized eigenvalue of the tuple form Σ(Θ_{jk}u_j, u_k)
/// relative to the block metric diag(h, …, h).
pub fn nakano_min_eig(curv: &CurvatureTensor) -> Result<f64> {
    let (a, b) = nakano_system(curv)?;
    gen_min_eig(&a, &b)
}

/// Curvature minimum of an arbitrary Gram field at one point.
pub fn gen_field_positivity(field: &GramField, t: &[C64]) -> Result<f64> {
    nakano_min_eig(&chern_curvature(field, t)?)
}

/// Deterministic direction grid on the unit sphere of ℂ^m.
pub fn default_direction_grid(m: usize) -> Vec<Vec<C64>> {
    match m {
        1 => vec![vec![C64::new(1.0, 0.0)]],
        2 => {
            let mut dirs = vec![];
            let n_theta = 9;
            let n_phase = 8;
            for i in 0..=n_theta {
                let th = std::f64::consts::FRAC_PI_2 * i as f64 / n_theta as f64;
                for p in 0..n_phase {
                    if i == 0 && p > 0 {
                        continue;
                    }
                    let ph = 2.0 * std::f64::consts::PI * p as f64 / n_phase as f64;
                    dirs.push(vec![C64::new(th.cos(), 0.0), C64::from_polar(th.sin(), ph)]);
                }
            }
            dirs
        }
        _ => panic!("direction grid supports base dimension 1 or 2"),
    }
}

/// Minimum over directions v of the minimum generalized eigenvalue of
/// Σ v_j v̄_k h Θ_{jk} relative to h.
pub fn griffiths_min(curv: &CurvatureTensor, dirs: &[Vec<C64>]) -> Result<f64> {
    let (m, d) = (curv.base_dim, curv.dim);
    let mut min = f64::INFINITY;
    for v in dirs {
        let mut a = CMat::zeros(d, d);
        for j in 0..m {
            for k in 0..m {
                a += &curv.h * curv.theta(j, k) * (v[j] * v[k].conj());
            }
        }
        check_pairing_hermitian(&a, &curv.h)?;
        min = min.min(gen_min_eig(&hermitize(&a), &curv.h)?);
    }
    Ok(min)
}

/// Check Σ(Θ*_{jk}ξ_j, ξ_k) = −Σ(Θ_{jk}u_k, u_j) with u = h⁻¹ ξ̄ over a fixed
/// seeded tuple set; returns the largest deviation.
pub fn dual_curvature_residual(field: &GramField, t: &[C64], n_tuples: usize) -> Result<f64> {
    let m = field.base_dim();
    let d = field.dim();
    let curv = chern_curvature(field, t)?;
    let dual = field.dual();
    let curv_dual = chern_curvature(&dual, t)?;
    let hinv = inverse_hpd(&curv.h)?;
    let hdual = &curv_dual.h;

    let mut rng = SplitMix64::new(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..n_tuples {
        let mut xis: Vec<CVec> = (0..m)
            .map(|_| CVec::from_fn(d, |_, _| rng.next_c64(1.0)))
            .collect();
        for xi in xis.iter_mut() {
            let nrm = (xi.adjoint() * hdual * &*xi)[(0, 0)].re.sqrt();
            *xi /= C64::new(nrm, 0.0);
        }
        let us: Vec<CVec> = xis.iter().map(|xi| &hinv * xi.map(|x| x.conj())).collect();
        let mut lhs = C64::new(0.0, 0.0);
        let mut rhs = C64::new(0.0, 0.0);
        for j in 0..m {
            for k in 0..m {
                lhs += curv_dual.pairing(j, k, &xis[j], &xis[k]);
                rhs += curv.pairing(j, k, &us[k], &us[j]);
            }
        }
        worst = worst.max((lhs + rhs).norm());
    }
    Ok(worst)
}

/// Holomorphic-in-t family of coefficient vectors u(t) = Σ t^p U_p.
#[derive(Debug, Clone)]
pub struct SectionPoly {
    pub terms: Vec<(Vec<u32>, CVec)>,
}

impl SectionPoly {
    pub fn constant(u: CVec) -> Self {
        SectionPoly {
            terms: vec![(vec![], u)],
        }
    }

    pub fn eval(&self, t: &[C64]) -> CVec {
        let d = self.terms[0].1.len();
        let mut out = CVec::zeros(d);
        for (powers, coeff) in &self.terms {
            let mut scale = C64::new(1.0, 0.0);
            for (i, &p) in powers.iter().enumerate() {
                scale *= t[i].powu(p);
            }
            out += coeff * scale;
        }
        out
    }
}

/// Minimum eigenvalue over a grid of the t-Hessian of log ‖u(t)‖²_{h(t)}.
/// Apply to the dual field to certify negativity of the dual of a
/// Nakano-nonnegative bundle.
pub fn log_norm_psh_residual(
    field: &GramField,
    section: &SectionPoly,
    grid: &[Vec<C64>],
) -> Result<f64> {
    let m = field.base_dim();
    let step = field.fd_step();
    let mut min_eig = f64::INFINITY;
    for t0 in grid {
        let cache: RefCell<BTreeMap<Vec<(u64, u64)>, Rc<CMat>>> = RefCell::new(BTreeMap::new());
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let f = |x: &[C64]| -> C64 {
            if failure.borrow().is_some() {
                return C64::new(f64::NAN, 0.0);
            }
            let key: Vec<(u64, u64)> = x.iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect();
            let cached = cache.borrow().get(&key).cloned();
            let h = match cached {
                Some(h) => h,
                None => match field.h(x) {
                    Ok(h) => {
                        let rc = Rc::new(h);
                        cache.borrow_mut().insert(key, rc.clone());
                        rc
                    }
                    Err(e) => {
                        *failure.borrow_mut() = Some(e);
                        return C64::new(f64::NAN, 0.0);
                    }
                },
            };
            let u = section.eval(x);
            let nsq = (u.adjoint() * &*h * &u)[(0, 0)].re;
            if nsq <= 0.0 {
                *failure.borrow_mut() = Some(Error::Invalid(format!(
                    "vanishing section: ‖u(t)‖² = {nsq} at t = {x:?}"
                )));
                return C64::new(f64::NAN, 0.0);
            }
            C64::new(nsq.ln(), 0.0)
        };
        let st = Stencil::new(&f, t0, step);
        let hess = CMat::from_fn(m, m, |j, k| st.ddbar(j, k));
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        min_eig = min_eig.min(crate::linalg::min_eig_hermitian(&hermitize(&hess)));
    }
    Ok(min_eig)
}

// ---------------------------------------------------------------------------
// Subbundle defect identity
// ---------------------------------------------------------------------------

/// Hermite-frame parameters adapted to the weight at (t, z = 0): the frame
/// center is the critical point of the fiber Gaussian, the scale its Hessian.
fn adapted_frame(phi: &WeightFamily, t: &[C64]) -> Result<(f64, C64)> {
    let d = phi.wirtinger(t, C64::new(0.0, 0.0), DEFAULT_FD_STEP)?;
    if !(d.hess_zz > 0.0) {
        return Err(Error::FiberDegenerate {
            t: format!("{t:?}"),
            z: "0".into(),
            value: d.hess_zz,
        });
    }
    Ok((d.hess_zz, -d.grad_z.conj() / d.hess_zz))
}

/// Change of frame from plain monomials z^a to shifted monomials (z−z₀)^k.
fn shift_monomial_coeffs(u: &CVec, z0: C64) -> CVec {
    let n = u.len();
    let mut out = CVec::zeros(n);
    for k in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        for a in k..n {
            acc += u[a] * crate::num::binomial(a, k) * z0.powu((a - k) as u32);
        }
        out[k] = acc;
    }
    out
}

/// Residual of the ambient-minus-defect curvature identity on a plane
/// scenario: the compression of the mixed-model curvature onto the
/// holomorphic subframe equals the second-fundamental-form defect plus the
/// subbundle curvature. The mixed model spans {ζ^a ζ̄^b : a ≤ n, b ≤ n_b}
/// with ζ = z − z₀ in the weight-adapted Hermite frame.
pub fn subbundle_formula_residual(
    phi: &WeightFamily,
    t: &[C64],
    rule: &Arc<QuadratureRule>,
    n: usize,
    n_b: usize,
    tuple: &[CVec],
    mode: DerivativeMode,
) -> Result<f64> {
    Ok(subbundle_formula_residuals(phi, t, rule, n, n_b, std::slice::from_ref(&tuple.to_vec()), mode)?[0])
}

/// Batched form of the identity check: the Gram fields, curvatures and node
/// tables are assembled once and reused across tuples.
pub fn subbundle_formula_residuals(
    phi: &WeightFamily,
    t: &[C64],
    rule: &Arc<QuadratureRule>,
    n: usize,
    n_b: usize,
    tuples: &[Vec<CVec>],
    mode: DerivativeMode,
) -> Result<Vec<f64>> {
    let m = phi.base_dim();
    for tuple in tuples {
        if tuple.len() != m {
            return Err(Error::Invalid(format!(
                "tuple length {} does not match base dimension {m}",
                tuple.len()
            )));
        }
    }
    let (scale, center) = adapted_frame(phi, t)?;
    let e_basis = Basis::MixedHermite {
        n_hol: n,
        n_anti: 0,
        scale,
        center,
    };
    let f_basis = Basis::MixedHermite {
        n_hol: n,
        n_anti: n_b,
        scale,
        center,
    };
    let d_e = e_basis.dim();
    let d_f = f_basis.dim();

    let e_field = GramField::from_quadrature(e_basis.clone(), phi.clone(), rule.clone(), mode)?;
    let f_field = GramField::from_quadrature(f_basis.clone(), phi.clone(), rule.clone(), mode)?;
    let curv_e = chern_curvature(&e_field, t)?;
    let curv_f = chern_curvature(&f_field, t)?;
    let fs_f = FiberSpace::new(&f_basis, phi, t, rule)?;
    let fs_e = FiberSpace::new(&e_basis, phi, t, rule)?;
    let tables = node_tables(phi, t, rule)?;

    let mut out = Vec::with_capacity(tuples.len());
    for tuple in tuples {
        let tuple_e: Vec<CVec> = tuple
            .iter()
            .map(|u| shift_monomial_coeffs(u, center))
            .collect();
        let mut tuple_f: Vec<CVec> = Vec::with_capacity(m);
        for u in &tuple_e {
            let mut big = CVec::zeros(d_f);
            for p in 0..d_e {
                big[f_basis.mixed_hol_index(p).unwrap()] = u[p];
            }
            tuple_f.push(big);
        }
        let mut fj: Vec<Vec<C64>> = tuple_e.iter().map(|u| fs_e.section_samples(u)).collect();
        for (i, dv) in tables.iter().enumerate() {
            for (j, f) in fj.iter_mut().enumerate() {
                f[i] *= dv.grad_t[j];
            }
        }
        let proj_f: Vec<CVec> = fj.iter().map(|f| fs_f.project(f)).collect::<Result<_>>()?;
        let proj_e: Vec<CVec> = fj.iter().map(|f| fs_e.project(f)).collect::<Result<_>>()?;

        let mut residual = 0.0f64;
        for j in 0..m {
            for k in 0..m {
                let ambient = curv_f.pairing(j, k, &tuple_f[j], &tuple_f[k]);
                let sub = curv_e.pairing(j, k, &tuple_e[j], &tuple_e[k]);
                let s_jk = (proj_f[k].adjoint() * &fs_f.gram.h * &proj_f[j])[(0, 0)]
                    - (proj_e[k].adjoint() * &fs_e.gram.h * &proj_e[j])[(0, 0)];
                residual += (ambient - s_jk - sub).norm();
            }
        }
        out.push(residual);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Fiber-Hessian lower bound
// ---------------------------------------------------------------------------

/// Σ(Θ_{jk}u_j, u_k) − ∫ Σ D_{jk} u_j ū_k e^{−φ}: nonnegative whenever φ is
/// plurisubharmonic with strictly positive fiber Hessian (up to truncation).
pub fn hormander_bound_margin(
    basis: &Basis,
    phi: &WeightFamily,
    t: &[C64],
    rule: &Arc<QuadratureRule>,
    tuple: &[CVec],
    mode: DerivativeMode,
) -> Result<f64> {
    let m = phi.base_dim();
    if tuple.len() != m {
        return Err(Error::Invalid(format!(
            "tuple length {} does not match base dimension {m}",
            tuple.len()
        )));
    }
    let field = GramField::from_quadrature(basis.clone(), phi.clone(), rule.clone(), mode)?;
    let curv = chern_curvature(&field, t)?;
    let mut lhs = C64::new(0.0, 0.0);
    for j in 0..m {
        for k in 0..m {
            lhs += curv.pairing(j, k, &tuple[j], &tuple[k]);
        }
    }

    let fs = FiberSpace::new(basis, phi, t, rule)?;
    let samples: Vec<Vec<C64>> = tuple.iter().map(|u| fs.section_samples(u)).collect();
    let mut acc = Pairwise::new();
    for (i, &z) in rule.nodes.iter().enumerate() {
        let dv = phi.wirtinger(t, z, DEFAULT_FD_STEP)?;
        let dm = crate::weights::d_matrix_from(&dv, t, z)?;
        let mut val = C64::new(0.0, 0.0);
        for j in 0..m {
            for k in 0..m {
                val += dm[(j, k)] * samples[j][i] * samples[k][i].conj();
            }
        }
        acc.push(val * fs.wphi[i]);
    }
    let rhs = acc.sum();
    Ok(lhs.re - rhs.re)
}

// ---------------------------------------------------------------------------
// Normalized-tuple second derivative
// ---------------------------------------------------------------------------

/// Build u_j(t) = u0_j − Σ_i (t_i − t0_i) Γ_i u0_j (so Du_j = 0 at t0) and
/// compare Σ ∂_j∂̄_k (u_j, u_k) against −Σ(Θ_{jk}u0_j, u0_k).
pub fn normal_tuple_second_derivative_residual(
    field: &GramField,
    t0: &[C64],
    tuple: &[CVec],
) -> Result<f64> {
    let m = field.base_dim();
    if tuple.len() != m {
        return Err(Error::Invalid(format!(
            "tuple length {} does not match base dimension {m}",
            tuple.len()
        )));
    }
    let curv = chern_curvature(field, t0)?;
    let gammas = field.connection(t0)?;
    let sections: Vec<SectionPoly> = tuple
        .iter()
        .map(|u0| {
            let mut terms = vec![(vec![0u32; m], u0.clone())];
            for (i, gamma) in gammas.iter().enumerate() {
                let gu = gamma * u0;
                let mut pw = vec![0u32; m];
                pw[i] = 1;
                terms.push((pw, -&gu));
                terms.push((vec![0u32; m], gu * t0[i]));
            }
            SectionPoly { terms }
        })
        .collect();

    let step = field.fd_step();
    let cache: RefCell<BTreeMap<Vec<(u64, u64)>, Rc<CMat>>> = RefCell::new(BTreeMap::new());
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let h_at = |x: &[C64]| -> Option<Rc<CMat>> {
        let key: Vec<(u64, u64)> = x.iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect();
        let cached = cache.borrow().get(&key).cloned();
        match cached {
            Some(h) => Some(h),
            None => match field.h(x) {
                Ok(h) => {
                    let rc = Rc::new(h);
                    cache.borrow_mut().insert(key, rc.clone());
                    Some(rc)
                }
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    None
                }
            },
        }
    };

    let mut total = C64::new(0.0, 0.0);
    for j in 0..m {
        for k in 0..m {
            let f = |x: &[C64]| -> C64 {
                match h_at(x) {
                    Some(h) => {
                        let uj = sections[j].eval(x);
                        let uk = sections[k].eval(x);
                        (uk.adjoint() * &*h * uj)[(0, 0)]
                    }
                    None => C64::new(f64::NAN, 0.0),
                }
            };
            let st = Stencil::new(&f, t0, step);
            total += st.ddbar(j, k);
        }
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let mut q = C64::new(0.0, 0.0);
    for j in 0..m {
        for k in 0..m {
            q += curv.pairing(j, k, &tuple[j], &tuple[k]);
        }
    }
    Ok((total + q).norm())
}

// ---------------------------------------------------------------------------
// Degeneracy diagnostics
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    pub min_curv_eig: f64,
    pub dbar_v_residual: f64,
}

/// The fiber vector field V = φ_{t z̄}/φ_{z z̄} together with the curvature
/// minimum: a gauge-flat family pairs vanishing curvature with holomorphic V.
pub fn degeneracy_diagnostics(
    basis: &Basis,
    phi: &WeightFamily,
    t: &[C64],
    rule: &Arc<QuadratureRule>,
    mode: DerivativeMode,
) -> Result<DegeneracyReport> {
    if phi.base_dim() != 1 {
        return Err(Error::Invalid(
            "degeneracy diagnostics require base dimension 1".into(),
        ));
    }
    let field = GramField::from_quadrature(basis.clone(), phi.clone(), rule.clone(), mode)?;
    let curv = chern_curvature(&field, t)?;
    let min_curv_eig = nakano_min_eig(&curv)?;

    let v_at = |z: &[C64]| -> C64 {
        match phi.wirtinger(t, z[0], DEFAULT_FD_STEP) {
            Ok(d) if d.hess_zz > 0.0 => d.mixed_tz[0] / d.hess_zz,
            _ => C64::new(f64::NAN, 0.0),
        }
    };
    let mut worst = 0.0f64;
    for &z in &rule.nodes {
        let st = Stencil::new(&v_at, &[z], DEFAULT_FD_STEP);
        let dbar = st.dbar(0);
        if !dbar.is_finite() {
            return Err(Error::FiberDegenerate {
                t: format!("{t:?}"),
                z: format!("{z}"),
                value: f64::NAN,
            });
        }
        worst = worst.max(dbar.norm());
    }
    Ok(DegeneracyReport {
        min_curv_eig,
        dbar_v_residual: worst,
    })
}
