//! Weight potentials φ(t, z): metric weights on the line bundle over the
//! fiber, parametrized by a base point t ∈ ℂ^m (m = 1 or 2).
//!
//! Each built-in family carries a closed-form table of first and mixed second
//! Wirtinger derivatives; a central-difference fallback with one Richardson
//! level covers custom weights and doubles as a hygiene cross-check.

use crate::error::{Error, Result};
use crate::linalg::{hermitize, min_eig_hermitian, CMat};
use crate::num::{Stencil, C64};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

pub const DEFAULT_FD_STEP: f64 = 1e-3;

// ---------------------------------------------------------------------------
// Polynomials in (t, t̄)
// ---------------------------------------------------------------------------

/// Dense polynomial Σ c_{ij} t^i t̄^j in a single complex variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    /// coeffs[i][j] multiplies t^i t̄^j
    coeffs: Vec<Vec<C64>>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { coeffs: vec![] }
    }

    pub fn constant(c: C64) -> Self {
        Poly2 {
            coeffs: vec![vec![c]],
        }
    }

    pub fn from_terms(terms: &[(usize, usize, C64)]) -> Self {
        let mut p = Poly2::zero();
        for &(i, j, c) in terms {
            if p.coeffs.len() <= i {
                p.coeffs.resize(i + 1, vec![]);
            }
            if p.coeffs[i].len() <= j {
                p.coeffs[i].resize(j + 1, C64::new(0.0, 0.0));
            }
            p.coeffs[i][j] += c;
        }
        p
    }

    /// |t|² convenience: t·t̄.
    pub fn abs_sq() -> Self {
        Poly2::from_terms(&[(1, 1, C64::new(1.0, 0.0))])
    }

    pub fn eval(&self, t: C64) -> C64 {
        let tb = t.conj();
        let mut acc = C64::new(0.0, 0.0);
        let mut tp = C64::new(1.0, 0.0);
        for row in &self.coeffs {
            let mut tbp = C64::new(1.0, 0.0);
            for &c in row {
                acc += c * tp * tbp;
                tbp *= tb;
            }
            tp *= t;
        }
        acc
    }

    pub fn d_t(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            if i == 0 {
                continue;
            }
            for (j, &c) in row.iter().enumerate() {
                if c != C64::new(0.0, 0.0) {
                    let mut q = Poly2::from_terms(&[(i - 1, j, c * i as f64)]);
                    std::mem::swap(&mut out, &mut q);
                    out = Poly2::add(&out, &q);
                }
            }
        }
        out
    }

    pub fn d_tbar(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if j > 0 && c != C64::new(0.0, 0.0) {
                    let q = Poly2::from_terms(&[(i, j - 1, c * j as f64)]);
                    out = Poly2::add(&out, &q);
                }
            }
        }
        out
    }

    fn add(a: &Poly2, b: &Poly2) -> Poly2 {
        let mut out = a.clone();
        for (i, row) in b.coeffs.iter().enumerate() {
            if out.coeffs.len() <= i {
                out.coeffs.resize(i + 1, vec![]);
            }
            for (j, &c) in row.iter().enumerate() {
                if out.coeffs[i].len() <= j {
                    out.coeffs[i].resize(j + 1, C64::new(0.0, 0.0));
                }
                out.coeffs[i][j] += c;
            }
        }
        out
    }

    pub fn conj(&self) -> Poly2 {
        // conj(Σ c_ij t^i t̄^j) = Σ c̄_ij t^j t̄^i
        let mut out = Poly2::zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c != C64::new(0.0, 0.0) {
                    out = Poly2::add(&out, &Poly2::from_terms(&[(j, i, c.conj())]));
                }
            }
        }
        out
    }

    /// True when the polynomial takes real values: c_{ij} = conj(c_{ji}).
    pub fn is_real_valued(&self) -> bool {
        let n = self.coeffs.len();
        let get = |i: usize, j: usize| -> C64 {
            self.coeffs
                .get(i)
                .and_then(|r| r.get(j))
                .copied()
                .unwrap_or(C64::new(0.0, 0.0))
        };
        let mut scale = 0.0f64;
        for row in &self.coeffs {
            for c in row {
                scale = scale.max(c.norm());
            }
        }
        let tol = 1e-14 * scale.max(1.0);
        let maxdim = n.max(self.coeffs.iter().map(|r| r.len()).max().unwrap_or(0));
        for i in 0..maxdim {
            for j in 0..maxdim {
                if (get(i, j) - get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|r| r.iter().all(|c| c.norm() == 0.0))
    }
}

// ---------------------------------------------------------------------------
// Chart functions on ℙ¹
// ---------------------------------------------------------------------------

/// Real-valued chart functions used to build fs-family perturbations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartFn {
    /// 1
    One,
    /// |z|²/(1+|z|²)
    AbsRatio,
    /// Re z/(1+|z|²)
    ReRatio,
    /// Im z/(1+|z|²)
    ImRatio,
}

impl ChartFn {
    pub fn eval(self, z: C64) -> f64 {
        let u = z.norm_sqr();
        match self {
            ChartFn::One => 1.0,
            ChartFn::AbsRatio => u / (1.0 + u),
            ChartFn::ReRatio => z.re / (1.0 + u),
            ChartFn::ImRatio => z.im / (1.0 + u),
        }
    }

    /// ∂_z of the chart function (∂_z̄ is its conjugate since χ is real).
    pub fn d_z(self, z: C64) -> C64 {
        let u = z.norm_sqr();
        let d = 1.0 + u;
        match self {
            ChartFn::One => C64::new(0.0, 0.0),
            ChartFn::AbsRatio => z.conj() / (d * d),
            ChartFn::ReRatio => (C64::new(1.0, 0.0) - z.conj() * z.conj()) / (2.0 * d * d),
            ChartFn::ImRatio => {
                (C64::new(1.0, 0.0) + z.conj() * z.conj()) / (C64::new(0.0, 2.0) * d * d)
            }
        }
    }

    /// ∂_z ∂_z̄ of the chart function; real.
    pub fn d_zzbar(self, z: C64) -> f64 {
        let u = z.norm_sqr();
        let d3 = (1.0 + u).powi(3);
        match self {
            ChartFn::One => 0.0,
            ChartFn::AbsRatio => (1.0 - u) / d3,
            ChartFn::ReRatio => -2.0 * z.re / d3,
            ChartFn::ImRatio => -2.0 * z.im / d3,
        }
    }
}

// ---------------------------------------------------------------------------
// Weight families
// ---------------------------------------------------------------------------

type CustomEval = Arc<dyn Fn(&[C64], C64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum WeightKind {
    /// φ = (1 + |t|²)|z|², base dimension 1 or 2.
    FockScaled { base_dim: usize },
    /// φ = |z − t|².
    FockShifted,
    /// φ = q(t)|z|² + 2 Re(ℓ(t) z) + c(t); q and c real-valued.
    FockGeneral { q: Poly2, l: Poly2, c: Poly2 },
    /// φ = l·log(1+|z|²) + Σ p_k(t) χ_k(z); the p_k real-valued.
    FsFamily { l: u32, psi: Vec<(Poly2, ChartFn)> },
    /// φ = l·log(1+|z−t|²).
    MobiusFlow { l: u32 },
    /// Arbitrary evaluation closure; derivatives by finite differences only.
    Custom {
        base_dim: usize,
        label: String,
        eval: CustomEval,
    },
}

#[derive(Clone)]
pub struct WeightFamily {
    pub kind: WeightKind,
}

impl fmt::Debug for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightFamily({})", self.family_id())
    }
}

/// Wirtinger derivative table of φ at a point (t, z).
#[derive(Clone, Debug)]
pub struct DerivativeSet {
    /// φ_{t_j}
    pub grad_t: Vec<C64>,
    /// φ_{t_j t̄_k}, Hermitian m×m
    pub hess_tt: CMat,
    /// φ_z
    pub grad_z: C64,
    /// φ_{z z̄}, real
    pub hess_zz: f64,
    /// φ_{t_j z̄}
    pub mixed_tz: Vec<C64>,
}

impl WeightFamily {
    pub fn fock_scaled(base_dim: usize) -> Self {
        assert!(base_dim == 1 || base_dim == 2);
        WeightFamily {
            kind: WeightKind::FockScaled { base_dim },
        }
    }

    pub fn fock_shifted() -> Self {
        WeightFamily {
            kind: WeightKind::FockShifted,
        }
    }

    pub fn fock_general(q: Poly2, l: Poly2, c: Poly2) -> Result<Self> {
        if !q.is_real_valued() || !c.is_real_valued() {
            return Err(Error::Invalid(
                "fock_general requires real-valued q and c".into(),
            ));
        }
        Ok(WeightFamily {
            kind: WeightKind::FockGeneral { q, l, c },
        })
    }

    pub fn fs_family(l: u32, psi: Vec<(Poly2, ChartFn)>) -> Result<Self> {
        if l < 2 {
            return Err(Error::Invalid("fs_family requires l >= 2".into()));
        }
        for (p, _) in &psi {
            if !p.is_real_valued() {
                return Err(Error::Invalid(
                    "fs_family psi coefficients must be real-valued".into(),
                ));
            }
        }
        Ok(WeightFamily {
            kind: WeightKind::FsFamily { l, psi },
        })
    }

    pub fn mobius_flow(l: u32) -> Self {
        WeightFamily {
            kind: WeightKind::MobiusFlow { l },
        }
    }

    pub fn custom<F>(base_dim: usize, label: &str, eval: F) -> Self
    where
        F: Fn(&[C64], C64) -> f64 + Send + Sync + 'static,
    {
        WeightFamily {
            kind: WeightKind::Custom {
                base_dim,
                label: label.to_string(),
                eval: Arc::new(eval),
            },
        }
    }

    pub fn base_dim(&self) -> usize {
        match &self.kind {
            WeightKind::FockScaled { base_dim } => *base_dim,
            WeightKind::Custom { base_dim, .. } => *base_dim,
            _ => 1,
        }
    }

    pub fn family_id(&self) -> &'static str {
        match &self.kind {
            WeightKind::FockScaled { .. } => "fock_scaled",
            WeightKind::FockShifted => "fock_shifted",
            WeightKind::FockGeneral { .. } => "fock_general",
            WeightKind::FsFamily { .. } => "fs_family",
            WeightKind::MobiusFlow { .. } => "mobius_flow",
            WeightKind::Custom { .. } => "custom",
        }
    }

    /// The ℙ¹ bundle degree for chart-weighted section spaces, when defined.
    pub fn p1_degree(&self) -> Option<u32> {
        match &self.kind {
            WeightKind::FsFamily { l, .. } => Some(*l),
            WeightKind::MobiusFlow { l } => Some(*l),
            _ => None,
        }
    }

    pub fn eval(&self, t: &[C64], z: C64) -> f64 {
        debug_assert_eq!(t.len(), self.base_dim());
        match &self.kind {
            WeightKind::FockScaled { .. } => {
                let a = 1.0 + t.iter().map(|ti| ti.norm_sqr()).sum::<f64>();
                a * z.norm_sqr()
            }
            WeightKind::FockShifted => (z - t[0]).norm_sqr(),
            WeightKind::FockGeneral { q, l, c } => {
                let qv = q.eval(t[0]).re;
                let lv = l.eval(t[0]);
                qv * z.norm_sqr() + 2.0 * (lv * z).re + c.eval(t[0]).re
            }
            WeightKind::FsFamily { l, psi } => {
                let mut v = *l as f64 * (1.0 + z.norm_sqr()).ln();
                for (p, chart) in psi {
                    v += p.eval(t[0]).re * chart.eval(z);
                }
                v
            }
            WeightKind::MobiusFlow { l } => *l as f64 * (1.0 + (z - t[0]).norm_sqr()).ln(),
            WeightKind::Custom { eval, .. } => eval(t, z),
        }
    }

    pub fn has_analytic(&self) -> bool {
        !matches!(self.kind, WeightKind::Custom { .. })
    }

    /// Closed-form derivative table, when the family provides one.
    pub fn analytic(&self, t: &[C64], z: C64) -> Option<DerivativeSet> {
        let one = C64::new(1.0, 0.0);
        match &self.kind {
            WeightKind::FockScaled { base_dim } => {
                let m = *base_dim;
                let a = 1.0 + t.iter().map(|ti| ti.norm_sqr()).sum::<f64>();
                let u = z.norm_sqr();
                let grad_t = t.iter().map(|ti| ti.conj() * u).collect();
                let hess_tt = CMat::from_fn(m, m, |j, k| {
                    if j == k {
                        C64::new(u, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                let mixed_tz = t.iter().map(|ti| ti.conj() * z).collect();
                Some(DerivativeSet {
                    grad_t,
                    hess_tt,
                    grad_z: a * z.conj(),
                    hess_zz: a,
                    mixed_tz,
                })
            }
            WeightKind::FockShifted => {
                let w = z - t[0];
                Some(DerivativeSet {
                    grad_t: vec![-w.conj()],
                    hess_tt: CMat::from_element(1, 1, one),
                    grad_z: w.conj(),
                    hess_zz: 1.0,
                    mixed_tz: vec![-one],
                })
            }
            WeightKind::FockGeneral { q, l, c } => {
                let t0 = t[0];
                let u = z.norm_sqr();
                let (qt, qttb) = (q.d_t(), q.d_t().d_tbar());
                let (lt, lttb, ltb) = (l.d_t(), l.d_t().d_tbar(), l.d_tbar());
                let (ct, cttb) = (c.d_t(), c.d_t().d_tbar());
                let grad_t = qt.eval(t0) * u + lt.eval(t0) * z + ltb.eval(t0).conj() * z.conj()
                    + ct.eval(t0);
                let hess = qttb.eval(t0).re * u
                    + 2.0 * (lttb.eval(t0) * z).re
                    + cttb.eval(t0).re;
                let mixed = qt.eval(t0) * z + ltb.eval(t0).conj();
                Some(DerivativeSet {
                    grad_t: vec![grad_t],
                    hess_tt: CMat::from_element(1, 1, C64::new(hess, 0.0)),
                    grad_z: q.eval(t0).re * z.conj() + l.eval(t0),
                    hess_zz: q.eval(t0).re,
                    mixed_tz: vec![mixed],
                })
            }
            WeightKind::FsFamily { l, psi } => {
                let t0 = t[0];
                let lf = *l as f64;
                let d = 1.0 + z.norm_sqr();
                let mut grad_t = C64::new(0.0, 0.0);
                let mut hess_tt = 0.0f64;
                let mut mixed = C64::new(0.0, 0.0);
                let mut grad_z = lf * z.conj() / d;
                let mut hess_zz = lf / (d * d);
                for (p, chart) in psi {
                    let pt = p.d_t().eval(t0);
                    grad_t += pt * chart.eval(z);
                    hess_tt += p.d_t().d_tbar().eval(t0).re * chart.eval(z);
                    mixed += pt * chart.d_z(z).conj();
                    grad_z += p.eval(t0).re * chart.d_z(z);
                    hess_zz += p.eval(t0).re * chart.d_zzbar(z);
                }
                Some(DerivativeSet {
                    grad_t: vec![grad_t],
                    hess_tt: CMat::from_element(1, 1, C64::new(hess_tt, 0.0)),
                    grad_z,
                    hess_zz,
                    mixed_tz: vec![mixed],
                })
            }
            WeightKind::MobiusFlow { l } => {
                let lf = *l as f64;
                let w = z - t[0];
                let rho = 1.0 + w.norm_sqr();
                let r2 = rho * rho;
                Some(DerivativeSet {
                    grad_t: vec![-lf * w.conj() / rho],
                    hess_tt: CMat::from_element(1, 1, C64::new(lf / r2, 0.0)),
                    grad_z: lf * w.conj() / rho,
                    hess_zz: lf / r2,
                    mixed_tz: vec![C64::new(-lf / r2, 0.0)],
                })
            }
            WeightKind::Custom { .. } => None,
        }
    }

    /// Derivative table by central differences with one Richardson level,
    /// regardless of whether an analytic table exists.
    pub fn wirtinger_fd(&self, t: &[C64], z: C64, step: f64) -> Result<DerivativeSet> {
        let m = self.base_dim();
        let f = |x: &[C64]| C64::new(self.eval(&x[..m], x[m]), 0.0);
        let mut x0: Vec<C64> = t.to_vec();
        x0.push(z);
        let st = Stencil::new(&f, &x0, step);
        let grad_t: Vec<C64> = (0..m).map(|j| st.d(j)).collect();
        let hess_tt = hermitize(&CMat::from_fn(m, m, |j, k| st.ddbar(j, k)));
        let grad_z = st.d(m);
        let hzz = st.ddbar(m, m);
        let mixed_tz: Vec<C64> = (0..m).map(|j| st.ddbar(j, m)).collect();
        let finite = grad_t.iter().all(|v| v.is_finite())
            && grad_z.is_finite()
            && hzz.is_finite()
            && mixed_tz.iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::StencilDomain(format!(
                "non-finite stencil value near t={t:?}, z={z}"
            )));
        }
        Ok(DerivativeSet {
            grad_t,
            hess_tt,
            grad_z,
            hess_zz: hzz.re,
            mixed_tz,
        })
    }

    /// Analytic table when available, else the finite-difference fallback.
    pub fn wirtinger(&self, t: &[C64], z: C64, step: f64) -> Result<DerivativeSet> {
        match self.analytic(t, z) {
            Some(d) => Ok(d),
            None => self.wirtinger_fd(t, z, step),
        }
    }
}

// ---------------------------------------------------------------------------
// The D-matrix and plurisubharmonicity diagnostics
// ---------------------------------------------------------------------------

/// D_{jk} = φ_{jk̄} − φ_{j z̄} conj(φ_{k z̄}) / φ_{zz̄} (fiber dimension one).
/// Errors when the fiber Hessian fails to be strictly positive.
pub fn d_matrix(phi: &WeightFamily, t: &[C64], z: C64) -> Result<CMat> {
    let d = phi.wirtinger(t, z, DEFAULT_FD_STEP)?;
    d_matrix_from(&d, t, z)
}

pub fn d_matrix_from(d: &DerivativeSet, t: &[C64], z: C64) -> Result<CMat> {
    if !(d.hess_zz > 0.0) {
        return Err(Error::FiberDegenerate {
            t: format!("{t:?}"),
            z: format!("{z}"),
            value: d.hess_zz,
        });
    }
    let m = d.grad_t.len();
    let mat = CMat::from_fn(m, m, |j, k| {
        d.hess_tt[(j, k)] - d.mixed_tz[j] * d.mixed_tz[k].conj() / d.hess_zz
    });
    Ok(hermitize(&mat))
}

/// |D₁₁ − det(joint Hessian)/fiber Hessian| at a point; the two routes agree
/// identically in exact arithmetic for base dimension one.
pub fn hessian_quotient_check(phi: &WeightFamily, t: C64, z: C64) -> Result<f64> {
    if phi.base_dim() != 1 {
        return Err(Error::Invalid(
            "hessian_quotient_check requires base dimension 1".into(),
        ));
    }
    let ts = [t];
    let d = phi.wirtinger(&ts, z, DEFAULT_FD_STEP)?;
    let dm = d_matrix_from(&d, &ts, z)?;
    let det = d.hess_tt[(0, 0)].re * d.hess_zz - d.mixed_tz[0].norm_sqr();
    Ok((dm[(0, 0)].re - det / d.hess_zz).abs())
}

/// Joint (m+1)×(m+1) complex Hessian of φ at (t, z).
pub fn joint_hessian(phi: &WeightFamily, t: &[C64], z: C64) -> Result<CMat> {
    let m = phi.base_dim();
    let d = phi.wirtinger(t, z, DEFAULT_FD_STEP)?;
    let mut h = CMat::zeros(m + 1, m + 1);
    for j in 0..m {
        for k in 0..m {
            h[(j, k)] = d.hess_tt[(j, k)];
        }
        h[(j, m)] = d.mixed_tz[j];
        h[(m, j)] = d.mixed_tz[j].conj();
    }
    h[(m, m)] = C64::new(d.hess_zz, 0.0);
    Ok(hermitize(&h))
}

/// Minimum eigenvalue of the joint Hessian over a list of points (t, z).
pub fn psh_check(phi: &WeightFamily, points: &[(Vec<C64>, C64)]) -> Result<f64> {
    let mut min = f64::INFINITY;
    for (t, z) in points {
        let h = joint_hessian(phi, t, *z)?;
        min = min.min(min_eig_hermitian(&h));
    }
    Ok(min)
}

// ---------------------------------------------------------------------------
// Serializable descriptors (CLI configuration surface)
// ---------------------------------------------------------------------------

/// One monomial c·t^i t̄^j of a coefficient polynomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTerm {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

pub fn poly_from_spec(terms: &[PolyTerm]) -> Poly2 {
    Poly2::from_terms(
        &terms
            .iter()
            .map(|t| (t.i, t.j, C64::new(t.re, t.im)))
            .collect::<Vec<_>>(),
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsiTerm {
    pub chart: ChartFn,
    pub coeff: Vec<PolyTerm>,
}

/// Weight family identifier plus parameters, as addressed from configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family_id", rename_all = "snake_case")]
pub enum WeightSpec {
    FockScaled {
        #[serde(default = "default_base_dim")]
        base_dim: usize,
    },
    FockShifted,
    FockGeneral {
        q: Vec<PolyTerm>,
        l: Vec<PolyTerm>,
        c: Vec<PolyTerm>,
    },
    FsFamily {
        l: u32,
        #[serde(default)]
        psi: Vec<PsiTerm>,
    },
    MobiusFlow {
        l: u32,
    },
}

fn default_base_dim() -> usize {
    1
}

impl WeightSpec {
    pub fn build(&self) -> Result<WeightFamily> {
        match self {
            WeightSpec::FockScaled { base_dim } => {
                if *base_dim != 1 && *base_dim != 2 {
                    return Err(Error::Config(format!(
                        "fock_scaled base_dim must be 1 or 2, got {base_dim}"
                    )));
                }
                Ok(WeightFamily::fock_scaled(*base_dim))
            }
            WeightSpec::FockShifted => Ok(WeightFamily::fock_shifted()),
            WeightSpec::FockGeneral { q, l, c } => WeightFamily::fock_general(
                poly_from_spec(q),
                poly_from_spec(l),
                poly_from_spec(c),
            ),
            WeightSpec::FsFamily { l, psi } => WeightFamily::fs_family(
                *l,
                psi.iter()
                    .map(|p| (poly_from_spec(&p.coeff), p.chart))
                    .collect(),
            ),
            WeightSpec::MobiusFlow { l } => Ok(WeightFamily::mobius_flow(*l)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn plain_fock() -> WeightFamily {
        // φ = |z|²
        WeightFamily::fock_general(
            Poly2::constant(c(1.0, 0.0)),
            Poly2::zero(),
            Poly2::zero(),
        )
        .unwrap()
    }

    #[test]
    fn wirtinger_plain_fock() {
        let phi = plain_fock();
        let d = phi.wirtinger(&[c(0.7, -0.3)], c(0.2, 0.9), 1e-3).unwrap();
        assert!((d.hess_zz - 1.0).abs() < 1e-12);
        assert!(d.grad_t[0].norm() < 1e-12);
    }

    #[test]
    fn wirtinger_fock_scaled_point() {
        // φ = (1+|t|²)|z|² at (0.5, 1): φ_t = 0.5, φ_tz̄ = 0.5, φ_tt̄ = 1
        let phi = WeightFamily::fock_scaled(1);
        let d = phi.wirtinger(&[c(0.5, 0.0)], c(1.0, 0.0), 1e-3).unwrap();
        assert!((d.grad_t[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((d.mixed_tz[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((d.hess_tt[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn wirtinger_pluriharmonic_term() {
        // φ = Re(t z) = 2 Re(ℓ z) with ℓ = t/2: at (0,0) the mixed t-z̄
        // derivative vanishes and so does the t-Hessian.
        let phi = WeightFamily::fock_general(
            Poly2::zero(),
            Poly2::from_terms(&[(1, 0, c(0.5, 0.0))]),
            Poly2::zero(),
        )
        .unwrap();
        let d = phi.wirtinger(&[c(0.0, 0.0)], c(0.0, 0.0), 1e-3).unwrap();
        assert!(d.hess_tt[(0, 0)].norm() < 1e-12);
        assert!(d.mixed_tz[0].norm() < 1e-12);
        let fd = phi.wirtinger_fd(&[c(0.0, 0.0)], c(0.0, 0.0), 1e-3).unwrap();
        assert!((fd.grad_t[0] - d.grad_t[0]).norm() < 1e-8);
        assert!((fd.mixed_tz[0] - d.mixed_tz[0]).norm() < 1e-7);
    }

    #[test]
    fn fd_matches_analytic_on_all_families() {
        let families: Vec<WeightFamily> = vec![
            WeightFamily::fock_scaled(1),
            WeightFamily::fock_scaled(2),
            WeightFamily::fock_shifted(),
            WeightFamily::fock_general(
                Poly2::from_terms(&[(0, 0, c(1.0, 0.0)), (1, 1, c(1.0, 0.0))]),
                Poly2::from_terms(&[(1, 0, c(0.5, 0.2))]),
                Poly2::from_terms(&[(1, 1, c(0.5, 0.0))]),
            )
            .unwrap(),
            WeightFamily::fs_family(
                4,
                vec![(Poly2::abs_sq(), ChartFn::AbsRatio), (
                    Poly2::from_terms(&[(1, 0, c(0.1, 0.0)), (0, 1, c(0.1, 0.0))]),
                    ChartFn::ReRatio,
                )],
            )
            .unwrap(),
            WeightFamily::mobius_flow(4),
        ];
        let mut rng = crate::num::SplitMix64::new(7);
        for phi in &families {
            let m = phi.base_dim();
            for _ in 0..5 {
                let t: Vec<C64> = (0..m).map(|_| rng.next_c64(0.6)).collect();
                let z = rng.next_c64(0.8);
                let an = phi.analytic(&t, z).unwrap();
                let fd = phi.wirtinger_fd(&t, z, 1e-3).unwrap();
                for j in 0..m {
                    assert!(
                        (an.grad_t[j] - fd.grad_t[j]).norm() < 1e-6,
                        "{} grad_t mismatch",
                        phi.family_id()
                    );
                    assert!((an.mixed_tz[j] - fd.mixed_tz[j]).norm() < 1e-6);
                    for k in 0..m {
                        assert!((an.hess_tt[(j, k)] - fd.hess_tt[(j, k)]).norm() < 1e-6);
                    }
                }
                assert!((an.grad_z - fd.grad_z).norm() < 1e-6);
                assert!((an.hess_zz - fd.hess_zz).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn d_matrix_examples() {
        // (1+|t|²)|z|² at (0, 1) → [1]
        let phi = WeightFamily::fock_scaled(1);
        let d = d_matrix(&phi, &[c(0.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert!((d[(0, 0)].re - 1.0).abs() < 1e-12);

        // |z−t|² cancels exactly → [0]
        let shifted = WeightFamily::fock_shifted();
        let d = d_matrix(&shifted, &[c(0.4, 0.2)], c(-0.3, 0.8)).unwrap();
        assert!(d[(0, 0)].norm() < 1e-12);

        // |z|² + |t|²: decoupled → [1]
        let dec = WeightFamily::fock_general(
            Poly2::constant(c(1.0, 0.0)),
            Poly2::zero(),
            Poly2::abs_sq(),
        )
        .unwrap();
        let d = d_matrix(&dec, &[c(0.3, -0.5)], c(0.2, 0.1)).unwrap();
        assert!((d[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn d_matrix_rejects_degenerate_fiber() {
        // φ = Re(t z) has vanishing fiber Hessian
        let phi = WeightFamily::fock_general(
            Poly2::zero(),
            Poly2::from_terms(&[(1, 0, c(0.5, 0.0))]),
            Poly2::zero(),
        )
        .unwrap();
        assert!(matches!(
            d_matrix(&phi, &[c(0.0, 0.0)], c(0.0, 0.0)),
            Err(Error::FiberDegenerate { .. })
        ));
    }

    #[test]
    fn hessian_quotient_examples() {
        let phi = WeightFamily::fock_scaled(1);
        let r = hessian_quotient_check(&phi, c(0.3, 0.0), c(0.7, 0.0)).unwrap();
        assert!(r <= 1e-8);

        let shifted = WeightFamily::fock_shifted();
        let r = hessian_quotient_check(&shifted, c(0.2, -0.6), c(0.1, 0.4)).unwrap();
        assert!(r <= 1e-12);

        // |z|² + 2|t|²: both routes give 2
        let dec = WeightFamily::fock_general(
            Poly2::constant(c(1.0, 0.0)),
            Poly2::zero(),
            Poly2::from_terms(&[(1, 1, c(2.0, 0.0))]),
        )
        .unwrap();
        let r = hessian_quotient_check(&dec, c(0.5, 0.5), c(0.4, -0.2)).unwrap();
        assert!(r <= 1e-12);
    }

    #[test]
    fn hessian_quotient_on_random_points() {
        let families: Vec<WeightFamily> = vec![
            WeightFamily::fock_scaled(1),
            WeightFamily::fock_shifted(),
            WeightFamily::fs_family(4, vec![(Poly2::abs_sq(), ChartFn::AbsRatio)]).unwrap(),
            WeightFamily::mobius_flow(4),
        ];
        let mut rng = crate::num::SplitMix64::new(42);
        for phi in &families {
            let mut checked = 0;
            while checked < 100 {
                let t = rng.next_c64(0.8);
                let z = rng.next_c64(1.2);
                let d = phi.wirtinger(&[t], z, DEFAULT_FD_STEP).unwrap();
                if d.hess_zz < 0.1 {
                    continue;
                }
                let r = hessian_quotient_check(phi, t, z).unwrap();
                assert!(r <= 1e-8, "{}: residual {r}", phi.family_id());
                checked += 1;
            }
        }
    }

    #[test]
    fn psh_examples() {
        // (1+|t|²)|z|² is plurisubharmonic jointly
        let phi = WeightFamily::fock_scaled(1);
        let mut pts = vec![];
        for i in 0..5 {
            for j in 0..5 {
                let t = c(-0.8 + 0.4 * i as f64, 0.1);
                let z = c(0.1 + 0.2 * j as f64, -0.3);
                pts.push((vec![t], z));
            }
        }
        assert!(psh_check(&phi, &pts).unwrap() >= -1e-10);

        // |z|² − |t|² → min eigenvalue −1
        let neg = WeightFamily::fock_general(
            Poly2::constant(c(1.0, 0.0)),
            Poly2::zero(),
            Poly2::from_terms(&[(1, 1, c(-1.0, 0.0))]),
        )
        .unwrap();
        let v = psh_check(&neg, &[(vec![c(0.2, 0.1)], c(0.3, 0.0))]).unwrap();
        assert!((v + 1.0).abs() < 1e-10);

        // φ = 0
        let zero =
            WeightFamily::fock_general(Poly2::zero(), Poly2::zero(), Poly2::zero()).unwrap();
        let v = psh_check(&zero, &[(vec![c(0.0, 0.0)], c(0.0, 0.0))]).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn psh_implies_nonnegative_d_for_base_dim_one() {
        // wherever the joint Hessian is PSD and the fiber is strict, the
        // determinant-quotient identity forces D₁₁ ≥ 0
        let fam = WeightFamily::fs_family(
            4,
            vec![(Poly2::abs_sq(), ChartFn::AbsRatio)],
        )
        .unwrap();
        let mut rng = crate::num::SplitMix64::new(11);
        for _ in 0..50 {
            let t = rng.next_c64(1.0);
            let z = rng.next_c64(1.5);
            let h = joint_hessian(&fam, &[t], z).unwrap();
            let d = fam.wirtinger(&[t], z, DEFAULT_FD_STEP).unwrap();
            if min_eig_hermitian(&h) >= 0.0 && d.hess_zz > 0.0 {
                let dm = d_matrix(&fam, &[t], z).unwrap();
                assert!(dm[(0, 0)].re >= -1e-8);
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn poly_conjugation_commutes_with_evaluation(
            tre in -2.0f64..2.0, tim in -2.0f64..2.0, seed in 0u64..u64::MAX,
        ) {
            let mut rng = crate::num::SplitMix64::new(seed);
            let terms: Vec<(usize, usize, C64)> = (0..6)
                .map(|_| {
                    (
                        (rng.next_u64() % 3) as usize,
                        (rng.next_u64() % 3) as usize,
                        rng.next_c64(2.0),
                    )
                })
                .collect();
            let p = Poly2::from_terms(&terms);
            let t = c(tre, tim);
            let lhs = p.conj().eval(t);
            let rhs = p.eval(t).conj();
            proptest::prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn d_matrix_unitary_covariance_m2() {
        // t ↦ U s pulls D back to Uᵀ D conj(U)
        let phi = WeightFamily::fock_scaled(2);
        let th = 0.7f64;
        let (cs, sn) = (th.cos(), th.sin());
        // Givens-like unitary with a complex phase on the off-diagonal
        let a = c(cs, 0.0);
        let b = c(sn * 0.8, sn * 0.6);
        let u = [[a, -b.conj()], [b, a]];
        let s0 = [c(0.4, -0.1), c(-0.2, 0.3)];
        let t0 = [
            u[0][0] * s0[0] + u[0][1] * s0[1],
            u[1][0] * s0[0] + u[1][1] * s0[1],
        ];
        let z = c(0.9, 0.2);
        let d_t = d_matrix(&phi, &t0, z).unwrap();
        let d_s = d_matrix(&phi, &s0, z).unwrap();
        // expected: D_s = Uᵀ D_t conj(U)
        let um = CMat::from_fn(2, 2, |i, j| u[i][j]);
        let expected = um.transpose() * &d_t * um.map(|x| x.conj());
        assert!((d_s - expected).norm() < 1e-8);
        let _ = u;
    }
}
