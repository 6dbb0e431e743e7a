//! Small numeric utilities: deterministic reductions, Wirtinger
//! finite-difference stencils, and a seedable generator for test points.

use std::cell::RefCell;
use std::collections::BTreeMap;

pub type C64 = num_complex::Complex64;

/// Binary-counter pairwise accumulator. For a fixed push order the reduction
/// tree is fixed, so the result is bit-identical across runs and platforms
/// with the same floating-point semantics.
#[derive(Clone)]
pub struct Pairwise {
    // stack[k] holds the sum of a block of 2^k consecutive terms
    stack: Vec<C64>,
    occupied: u64,
}

impl Pairwise {
    pub fn new() -> Self {
        Pairwise {
            stack: Vec::with_capacity(8),
            occupied: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, x: C64) {
        let mut carry = x;
        let mut k = 0usize;
        while self.occupied & (1u64 << k) != 0 {
            carry += self.stack[k];
            k += 1;
        }
        if k >= self.stack.len() {
            self.stack.resize(k + 1, C64::new(0.0, 0.0));
        }
        self.stack[k] = carry;
        self.occupied += 1;
    }

    /// Final reduction, low blocks first (fixed order).
    pub fn sum(&self) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..self.stack.len() {
            if self.occupied & (1u64 << k) != 0 {
                acc += self.stack[k];
            }
        }
        acc
    }
}

impl Default for Pairwise {
    fn default() -> Self {
        Self::new()
    }
}

pub fn pairwise_sum<I: IntoIterator<Item = C64>>(it: I) -> C64 {
    let mut acc = Pairwise::new();
    for x in it {
        acc.push(x);
    }
    acc.sum()
}

pub fn pairwise_sum_f64<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    pairwise_sum(it.into_iter().map(|x| C64::new(x, 0.0))).re
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0f64;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// splitmix64 — tiny deterministic generator for reproducible random test
/// points; stable across library versions, unlike external RNG crates.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in the square [-r, r] x [-r, r].
    pub fn next_c64(&mut self, r: f64) -> C64 {
        C64::new(
            r * (2.0 * self.next_f64() - 1.0),
            r * (2.0 * self.next_f64() - 1.0),
        )
    }
}

// ---------------------------------------------------------------------------
// Wirtinger finite differences
// ---------------------------------------------------------------------------

/// Memoizing stencil evaluator for f: C^n -> C around a fixed base point.
///
/// Offsets are integer multiples of h/2 per real/imaginary axis, so repeated
/// stencil points are computed once and the evaluation set is deterministic.
pub struct Stencil<'a, F: Fn(&[C64]) -> C64> {
    f: &'a F,
    x0: Vec<C64>,
    h2: f64,
    cache: RefCell<BTreeMap<Vec<(i32, i32)>, C64>>,
}

impl<'a, F: Fn(&[C64]) -> C64> Stencil<'a, F> {
    pub fn new(f: &'a F, x0: &[C64], step: f64) -> Self {
        Stencil {
            f,
            x0: x0.to_vec(),
            h2: step / 2.0,
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    fn eval(&self, offs: &[(i32, i32)]) -> C64 {
        if let Some(v) = self.cache.borrow().get(offs) {
            return *v;
        }
        let mut x = self.x0.clone();
        for (i, &(re, im)) in offs.iter().enumerate() {
            x[i] += C64::new(re as f64 * self.h2, im as f64 * self.h2);
        }
        let v = (self.f)(&x);
        self.cache.borrow_mut().insert(offs.to_vec(), v);
        v
    }

    fn shifted(base: &[(i32, i32)], j: usize, dre: i32, dim: i32) -> Vec<(i32, i32)> {
        let mut o = base.to_vec();
        o[j].0 += dre;
        o[j].1 += dim;
        o
    }

    // scale is the step in units of h/2: scale = 2 is the full step h.
    fn d_at(&self, base: &[(i32, i32)], j: usize, scale: i32) -> C64 {
        let s = scale as f64 * self.h2;
        let fp = self.eval(&Self::shifted(base, j, scale, 0));
        let fm = self.eval(&Self::shifted(base, j, -scale, 0));
        let fip = self.eval(&Self::shifted(base, j, 0, scale));
        let fim = self.eval(&Self::shifted(base, j, 0, -scale));
        ((fp - fm) - C64::i() * (fip - fim)) / (4.0 * s)
    }

    fn dbar_at(&self, base: &[(i32, i32)], j: usize, scale: i32) -> C64 {
        let s = scale as f64 * self.h2;
        let fp = self.eval(&Self::shifted(base, j, scale, 0));
        let fm = self.eval(&Self::shifted(base, j, -scale, 0));
        let fip = self.eval(&Self::shifted(base, j, 0, scale));
        let fim = self.eval(&Self::shifted(base, j, 0, -scale));
        ((fp - fm) + C64::i() * (fip - fim)) / (4.0 * s)
    }

    fn ddbar_diag_at(&self, j: usize, scale: i32) -> C64 {
        let s = scale as f64 * self.h2;
        let base = vec![(0, 0); self.x0.len()];
        let f0 = self.eval(&base);
        let fp = self.eval(&Self::shifted(&base, j, scale, 0));
        let fm = self.eval(&Self::shifted(&base, j, -scale, 0));
        let fip = self.eval(&Self::shifted(&base, j, 0, scale));
        let fim = self.eval(&Self::shifted(&base, j, 0, -scale));
        (fp + fm + fip + fim - 4.0 * f0) / (4.0 * s * s)
    }

    fn ddbar_mixed_at(&self, j: usize, k: usize, scale: i32) -> C64 {
        let s = scale as f64 * self.h2;
        let base = vec![(0, 0); self.x0.len()];
        let g = |b: &[(i32, i32)]| self.dbar_at(b, k, scale);
        let gp = g(&Self::shifted(&base, j, scale, 0));
        let gm = g(&Self::shifted(&base, j, -scale, 0));
        let gip = g(&Self::shifted(&base, j, 0, scale));
        let gim = g(&Self::shifted(&base, j, 0, -scale));
        ((gp - gm) - C64::i() * (gip - gim)) / (4.0 * s)
    }

    fn richardson(coarse: C64, fine: C64) -> C64 {
        (4.0 * fine - coarse) / 3.0
    }

    /// Wirtinger derivative with one level of Richardson extrapolation.
    pub fn d(&self, j: usize) -> C64 {
        let base = vec![(0, 0); self.x0.len()];
        Self::richardson(self.d_at(&base, j, 2), self.d_at(&base, j, 1))
    }

    pub fn dbar(&self, j: usize) -> C64 {
        let base = vec![(0, 0); self.x0.len()];
        Self::richardson(self.dbar_at(&base, j, 2), self.dbar_at(&base, j, 1))
    }

    /// Mixed second derivative d_j dbar_k (diagonal stencil when j == k).
    pub fn ddbar(&self, j: usize, k: usize) -> C64 {
        if j == k {
            Self::richardson(self.ddbar_diag_at(j, 2), self.ddbar_diag_at(j, 1))
        } else {
            Self::richardson(self.ddbar_mixed_at(j, k, 2), self.ddbar_mixed_at(j, k, 1))
        }
    }
}

/// First and second derivative along the real axis of coordinate j with one
/// Richardson level; used for paths depending on Re t only.
pub fn real_dir_derivs<F: Fn(&[C64]) -> f64>(f: &F, x0: &[C64], j: usize, step: f64) -> (f64, f64) {
    let evalr = |dx: f64| {
        let mut x = x0.to_vec();
        x[j] += C64::new(dx, 0.0);
        f(&x)
    };
    let f0 = evalr(0.0);
    let d1 = |h: f64| (evalr(h) - evalr(-h)) / (2.0 * h);
    let d2 = |h: f64| (evalr(h) + evalr(-h) - 2.0 * f0) / (h * h);
    let first = (4.0 * d1(step / 2.0) - d1(step)) / 3.0;
    let second = (4.0 * d2(step / 2.0) - d2(step)) / 3.0;
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_and_is_deterministic() {
        let xs: Vec<C64> = (0..1000)
            .map(|i| C64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let a = pairwise_sum(xs.iter().copied());
        let b = pairwise_sum(xs.iter().copied());
        assert_eq!(a, b);
        let naive: C64 = xs.iter().sum();
        assert!((a - naive).norm() < 1e-10);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
    }

    #[test]
    fn wirtinger_on_polynomial() {
        // f(t, z) = t^2 zbar + |z|^2, at t = 0.3 + 0.1i, z = 0.5 - 0.2i
        let f = |x: &[C64]| x[0] * x[0] * x[1].conj() + x[1] * x[1].conj();
        let x0 = [C64::new(0.3, 0.1), C64::new(0.5, -0.2)];
        let st = Stencil::new(&f, &x0, 1e-3);
        // d/dt = 2 t zbar
        let want = 2.0 * x0[0] * x0[1].conj();
        assert!((st.d(0) - want).norm() < 1e-9);
        // d/dz dbar/dz = 1
        assert!((st.ddbar(1, 1) - C64::new(1.0, 0.0)).norm() < 1e-7);
        // d_t dbar_z = 2t
        assert!((st.ddbar(0, 1) - 2.0 * x0[0]).norm() < 1e-7);
    }

    #[test]
    fn real_direction_derivatives() {
        let f = |x: &[C64]| {
            let xr = x[0].re;
            xr * xr * xr + 2.0 * xr
        };
        let x0 = [C64::new(0.5, 0.0)];
        let (d1, d2) = real_dir_derivs(&f, &x0, 0, 1e-3);
        assert!((d1 - (3.0 * 0.25 + 2.0)).abs() < 1e-9);
        assert!((d2 - 3.0).abs() < 1e-6);
    }
}
