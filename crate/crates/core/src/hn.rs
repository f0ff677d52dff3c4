//! The quantized torus `H_N`.
//!
//! States are amplitude vectors in the orthonormal comb basis `Q_0..Q_{N-1}`,
//! where `Q_n` is the Dirac comb supported on `x = n/N mod 1`. The semiclassical
//! parameter is `h = 1/(2 pi N)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanckScale {
    pub n: usize,
    pub h: f64,
}

pub fn planck(n: i64) -> Result<PlanckScale> {
    if n < 1 {
        return Err(Error::NonPositiveN(n));
    }
    Ok(PlanckScale {
        n: n as usize,
        h: 1.0 / (2.0 * PI * n as f64),
    })
}

/// `h = 1/(2 pi N)` for a dimension already known to be positive.
pub fn h_of(n: usize) -> f64 {
    1.0 / (2.0 * PI * n as f64)
}

/// Representative of `x mod 1` in `[-1/2, 1/2)`.
pub fn torus_rep(x: f64) -> f64 {
    x - (x + 0.5).floor()
}

#[derive(Clone, Debug, PartialEq)]
pub struct HnState {
    pub amplitudes: Vec<C64>,
}

impl HnState {
    pub fn new(amplitudes: Vec<C64>) -> Self {
        HnState { amplitudes }
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut a = vec![C64::new(0.0, 0.0); n];
        a[index] = C64::new(1.0, 0.0);
        HnState { amplitudes: a }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Sign of the exponent in the Fourier kernel.
///
/// `Negative` (kernel `exp(-2 pi i m n / N)`) is the convention every
/// quantization in this crate is calibrated against. `Positive` exists only
/// to demonstrate that the exact Egorov checks detect a wrong sign.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FourierSign {
    #[default]
    Negative,
    Positive,
}

/// Discrete Fourier transform on `H_N` with a precomputed table of roots of
/// unity. Read-only after construction, so it can be shared across threads.
#[derive(Clone, Debug)]
pub struct Dft {
    n: usize,
    roots: Vec<C64>,
    scale: f64,
}

impl Dft {
    pub fn new(n: usize) -> Self {
        Self::with_sign(n, FourierSign::Negative)
    }

    pub fn with_sign(n: usize, sign: FourierSign) -> Self {
        assert!(n >= 1);
        let s = match sign {
            FourierSign::Negative => -1.0,
            FourierSign::Positive => 1.0,
        };
        let roots = (0..n)
            .map(|t| C64::from_polar(1.0, s * 2.0 * PI * t as f64 / n as f64))
            .collect();
        Dft {
            n,
            roots,
            scale: (n as f64).sqrt().recip(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `(m, k)` of the unitary DFT matrix.
    #[inline]
    pub fn entry(&self, m: usize, k: usize) -> C64 {
        self.roots[(m * k) % self.n] * self.scale
    }

    pub fn forward(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|m| (0..self.n).map(|k| self.entry(m, k) * v[k]).sum())
            .collect()
    }

    pub fn inverse(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|m| (0..self.n).map(|k| self.entry(k, m).conj() * v[k]).sum())
            .collect()
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.n, self.n, |m, k| self.entry(m, k))
    }

    /// `F^H diag(d) F`, a circulant: entry `(m, j)` is `(1/N) sum_k d_k w^{-k(m-j)}`.
    pub fn fourier_multiplier(&self, d: &[C64]) -> CMatrix {
        assert_eq!(d.len(), self.n);
        let n = self.n;
        // column of the circulant indexed by (m - j) mod n
        let col: Vec<C64> = (0..n)
            .map(|t| {
                (0..n)
                    .map(|k| d[k] * self.roots[(k * t) % n].conj())
                    .sum::<C64>()
                    / n as f64
            })
            .collect();
        CMatrix::from_fn(n, n, |m, j| col[(m + n - j) % n])
    }
}

pub fn dft(state: &HnState) -> HnState {
    HnState::new(Dft::new(state.dim()).forward(&state.amplitudes))
}

pub fn idft(state: &HnState) -> HnState {
    HnState::new(Dft::new(state.dim()).inverse(&state.amplitudes))
}

pub fn dft_matrix(n: usize) -> CMatrix {
    Dft::new(n).matrix()
}

pub const DEFAULT_COHERENT_TRUNCATION: usize = 4;

/// Periodized Gaussian centred at the origin of phase space, sampled on the
/// comb: `a_m ~ sum_{|k| <= k_trunc} exp(-pi N (k + m/N)^2)`, unit norm.
pub fn coherent_ground_state(n: usize, k_trunc: usize) -> HnState {
    assert!(n >= 1 && k_trunc >= 1);
    let nf = n as f64;
    let kt = k_trunc as i64;
    let raw: Vec<f64> = (0..n)
        .map(|m| {
            (-kt..=kt)
                .map(|k| {
                    let x = k as f64 + m as f64 / nf;
                    (-PI * nf * x * x).exp()
                })
                .sum()
        })
        .collect();
    let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
    HnState::new(raw.iter().map(|&a| C64::new(a / norm, 0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn planck_values() {
        assert!((planck(100).unwrap().h - 0.00159155).abs() < 1e-8);
        assert!((planck(1).unwrap().h - 0.159155).abs() < 1e-6);
        assert_eq!(planck(0), Err(Error::NonPositiveN(0)));
        let p = planck(37).unwrap();
        assert!((p.h * 2.0 * PI * 37.0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn torus_rep_examples() {
        assert_eq!(torus_rep(0.75), -0.25);
        assert_eq!(torus_rep(-0.5), -0.5);
        assert_eq!(torus_rep(3.0), 0.0);
        assert_eq!(torus_rep(0.5), -0.5);
    }

    #[test]
    fn dft_examples() {
        let s = dft(&HnState::new(vec![c(1.0), c(0.0)]));
        let r = 0.5f64.sqrt();
        assert!((s.amplitudes[0] - c(r)).norm() < 1e-15);
        assert!((s.amplitudes[1] - c(r)).norm() < 1e-15);

        let s = dft(&HnState::new(vec![c(1.0); 4]));
        assert!((s.amplitudes[0] - c(2.0)).norm() < 1e-15);
        for a in &s.amplitudes[1..] {
            assert!(a.norm() < 1e-15);
        }
    }

    #[test]
    fn dft_matrix_unitary() {
        for n in [1usize, 2, 7, 64, 256, 1024] {
            let f = dft_matrix(n);
            let defect = f.adjoint().matmul(&f).max_abs_diff(&CMatrix::identity(n));
            assert!(defect < 1e-13, "n = {n}: {defect}");
        }
    }

    #[test]
    fn dft_order_four() {
        for n in [2usize, 5, 16, 64] {
            let f = dft_matrix(n);
            let f4 = f.pow(4);
            assert!(f4.max_abs_diff(&CMatrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn fourier_multiplier_matches_product() {
        let n = 12;
        let d: Vec<C64> = (0..n)
            .map(|k| C64::new((k as f64).cos(), k as f64 * 0.1))
            .collect();
        let dft = Dft::new(n);
        let f = dft.matrix();
        let direct = f.adjoint().matmul(&CMatrix::from_diag(&d)).matmul(&f);
        assert!(dft.fourier_multiplier(&d).max_abs_diff(&direct) < 1e-13);
    }

    /// Poisson-summed theta function, an independent route to the comb samples:
    /// `sum_k exp(-pi t (k + a)^2) = t^{-1/2} sum_n exp(-pi n^2 / t) cos(2 pi n a)`.
    fn theta_dual(t: f64, a: f64) -> f64 {
        (-20i64..=20)
            .map(|n| (-PI * (n * n) as f64 / t).exp() * (2.0 * PI * n as f64 * a).cos())
            .sum::<f64>()
            / t.sqrt()
    }

    #[test]
    fn coherent_ratio_n2() {
        let s = coherent_ground_state(2, 3);
        let ratio = s.amplitudes[0].re / s.amplitudes[1].re;
        let expect = theta_dual(2.0, 0.0) / theta_dual(2.0, 0.5);
        assert!((ratio - expect).abs() < 1e-12, "{ratio} vs {expect}");
    }

    #[test]
    fn coherent_concentrates_near_origin() {
        let n = 64;
        let s = coherent_ground_state(n, DEFAULT_COHERENT_TRUNCATION);
        assert!((s.norm() - 1.0).abs() < 1e-14);
        let mid: f64 = s.amplitudes[n / 4..=3 * n / 4]
            .iter()
            .map(|a| a.norm_sqr())
            .sum();
        assert!(mid < 1e-8, "{mid}");
        for a in &s.amplitudes {
            assert!(a.re > 0.0 && a.im == 0.0);
        }
    }

    proptest! {
        #[test]
        fn dft_roundtrip_and_isometry(v in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..40)) {
            let s = HnState::new(v.iter().map(|&(re, im)| C64::new(re, im)).collect());
            let f = dft(&s);
            prop_assert!((f.norm() - s.norm()).abs() < 1e-13);
            let back = idft(&f);
            for (a, b) in back.amplitudes.iter().zip(&s.amplitudes) {
                prop_assert!((a - b).norm() < 1e-13);
            }
        }

        #[test]
        fn coherent_unit_norm(n in 1usize..200) {
            let s = coherent_ground_state(n, DEFAULT_COHERENT_TRUNCATION);
            prop_assert!((s.norm() - 1.0).abs() < 1e-13);
        }
    }
}
