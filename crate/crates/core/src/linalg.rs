//! Hermitian linear algebra helpers on top of nalgebra.
//!
//! Gram matrices of high-degree monomial bases have diagonals spanning many
//! orders of magnitude, so every solve and every conditioning estimate here
//! works on the Jacobi-equilibrated matrix D·M·D with D = diag(m_ii^{-1/2});
//! the raw condition number would be dominated by that harmless scaling.

use crate::error::{Error, Result};
use crate::num::C64;
use nalgebra::{DMatrix, DVector};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Relative deviation from being Hermitian.
pub fn herm_defect(m: &CMat) -> f64 {
    let scale = m.norm().max(1e-300);
    (m - m.adjoint()).norm() / scale
}

fn equilibration(m: &CMat) -> Result<DVector<f64>> {
    let n = m.nrows();
    let mut d = DVector::<f64>::zeros(n);
    for i in 0..n {
        let mii = m[(i, i)].re;
        if !(mii > 0.0) || !mii.is_finite() {
            return Err(Error::BadGram(format!(
                "diagonal entry {i} is {mii}, expected strictly positive"
            )));
        }
        d[i] = 1.0 / mii.sqrt();
    }
    Ok(d)
}

fn scale_sym(m: &CMat, d: &DVector<f64>) -> CMat {
    let n = m.nrows();
    CMat::from_fn(n, n, |i, j| m[(i, j)] * (d[i] * d[j]))
}

/// Condition number of the equilibrated matrix (Hermitian positive definite
/// expected). Errors if the matrix fails to be numerically positive.
pub fn equilibrated_condition(h: &CMat) -> Result<f64> {
    let d = equilibration(h)?;
    let hs = hermitize(&scale_sym(h, &d));
    let eig = hs.symmetric_eigen();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &ev in eig.eigenvalues.iter() {
        lo = lo.min(ev);
        hi = hi.max(ev);
    }
    if lo <= 0.0 {
        return Err(Error::BadGram(format!(
            "smallest equilibrated eigenvalue {lo:.3e} is not positive"
        )));
    }
    Ok(hi / lo)
}

/// Solve H x = b for Hermitian positive definite H via equilibrated LU.
pub fn solve_hpd(h: &CMat, b: &CVec) -> Result<CVec> {
    let d = equilibration(h)?;
    let hs = scale_sym(h, &d);
    let bs = CVec::from_fn(b.len(), |i, _| b[i] * d[i]);
    let lu = hs.lu();
    let xs = lu
        .solve(&bs)
        .ok_or_else(|| Error::BadGram("singular Gram matrix in solve".into()))?;
    Ok(CVec::from_fn(xs.len(), |i, _| xs[i] * d[i]))
}

/// Solve H X = B columnwise (Hermitian positive definite H).
pub fn solve_hpd_mat(h: &CMat, b: &CMat) -> Result<CMat> {
    let d = equilibration(h)?;
    let hs = scale_sym(h, &d);
    let n = b.nrows();
    let k = b.ncols();
    let bs = CMat::from_fn(n, k, |i, j| b[(i, j)] * d[i]);
    let lu = hs.lu();
    let xs = lu
        .solve(&bs)
        .ok_or_else(|| Error::BadGram("singular Gram matrix in solve".into()))?;
    Ok(CMat::from_fn(n, k, |i, j| xs[(i, j)] * d[i]))
}

pub fn inverse_hpd(h: &CMat) -> Result<CMat> {
    let id = CMat::identity(h.nrows(), h.ncols());
    solve_hpd_mat(h, &id)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvals_hermitian(m: &CMat) -> Vec<f64> {
    let eig = hermitize(m).symmetric_eigen();
    let mut evs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    evs
}

pub fn min_eig_hermitian(m: &CMat) -> f64 {
    eigvals_hermitian(m)
        .first()
        .copied()
        .unwrap_or(f64::INFINITY)
}

/// Generalized Hermitian eigenvalues of A x = lambda B x with B positive
/// definite, via equilibration and Cholesky reduction. Ascending.
pub fn gen_eigvals_hermitian(a: &CMat, b: &CMat) -> Result<Vec<f64>> {
    let d = equilibration(b)?;
    let asc = hermitize(&scale_sym(a, &d));
    let bsc = hermitize(&scale_sym(b, &d));
    let chol = bsc
        .clone()
        .cholesky()
        .ok_or_else(|| Error::BadGram("metric matrix is not positive definite".into()))?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(&asc)
        .ok_or_else(|| Error::BadGram("triangular solve failed".into()))?;
    let y = l
        .solve_lower_triangular(&x.adjoint())
        .ok_or_else(|| Error::BadGram("triangular solve failed".into()))?;
    let c = hermitize(&y.adjoint());
    let eig = c.symmetric_eigen();
    let mut evs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    evs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    Ok(evs)
}

pub fn gen_min_eig(a: &CMat, b: &CMat) -> Result<f64> {
    Ok(gen_eigvals_hermitian(a, b)?[0])
}
