//! Eigenvalues of dense non-Hermitian complex matrices.
//!
//! The main path is balancing, Householder reduction to upper Hessenberg form
//! and single-shift complex QR with Wilkinson shifts. Eigenvectors are never
//! formed, so every transformation is restricted to the active window.
//!
//! [`char_poly_roots`] is an independent oracle for tiny matrices: the
//! Faddeev-LeVerrier characteristic polynomial solved by Durand-Kerner.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, C64};

/// Iteration budget, `40 n` sweeps in total for an `n x n` matrix.
const MAX_ITERS_PER_EIGENVALUE: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRaw {
    pub values: Vec<C64>,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    pub balance: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { balance: true }
    }
}

pub fn eigenvalues(a: &CMatrix) -> Result<SpectrumRaw> {
    eigenvalues_with(a, EigenOptions::default())
}

pub fn eigenvalues_with(a: &CMatrix, opts: EigenOptions) -> Result<SpectrumRaw> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut h = a.clone();
    if opts.balance {
        balance(&mut h);
    }
    hessenberg(&mut h);
    Ok(hessenberg_qr(&mut h))
}

/// Diagonal similarity scaling by powers of two so that row and column
/// off-diagonal 1-norms are comparable.
pub(crate) fn balance(a: &mut CMatrix) {
    let n = a.rows();
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].l1_norm();
                    r += a[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / RADIX;
            let mut f = 1.0;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// In-place unitary reduction to upper Hessenberg form.
pub(crate) fn hessenberg(a: &mut CMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    let mut v = vec![C64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let norm: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for (idx, i) in (k + 1..n).enumerate() {
            v[idx] = a[(i, k)];
        }
        v[0] -= alpha;
        let vnorm: f64 = v[..len].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for x in &mut v[..len] {
            *x /= vnorm;
        }
        // A <- (I - 2 v v^H) A on rows k+1..n
        for j in k..n {
            let mut dot = C64::new(0.0, 0.0);
            for (idx, i) in (k + 1..n).enumerate() {
                dot += v[idx].conj() * a[(i, j)];
            }
            dot *= 2.0;
            for (idx, i) in (k + 1..n).enumerate() {
                let vi = v[idx];
                a[(i, j)] -= vi * dot;
            }
        }
        // A <- A (I - 2 v v^H) on columns k+1..n
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            {
                let row = a.row(i);
                for (idx, x) in row[k + 1..n].iter().enumerate() {
                    dot += *x * v[idx];
                }
            }
            dot *= 2.0;
            for (idx, j) in (k + 1..n).enumerate() {
                let vj = v[idx];
                a[(i, j)] -= dot * vj.conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

/// Givens rotation `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [r; 0]`, `c` real.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ny = y.norm();
    if ny == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let nx = x.norm();
    if nx == 0.0 {
        return (0.0, y.conj() / ny);
    }
    let r = nx.hypot(ny);
    let c = nx / r;
    let s = (x / nx) * y.conj() / r;
    (c, s)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let den1 = p + disc;
    let den2 = p - disc;
    let den = if den1.norm() >= den2.norm() {
        den1
    } else {
        den2
    };
    if den.norm() == 0.0 {
        d
    } else {
        d - bc / den
    }
}

/// Single-shift QR on an upper Hessenberg matrix; destroys `h`.
pub(crate) fn hessenberg_qr(h: &mut CMatrix) -> SpectrumRaw {
    let n = h.rows();
    let eps = f64::EPSILON;
    let safe_min = f64::MIN_POSITIVE / eps;
    let mut values = vec![C64::new(0.0, 0.0); n];
    if n == 0 {
        return SpectrumRaw {
            values,
            converged: true,
            iterations: 0,
        };
    }
    let global_scale = h.frobenius_norm();
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    let mut converged = true;

    loop {
        // look for a negligible subdiagonal entry
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut tst = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if tst == 0.0 {
                tst = global_scale;
            }
            if sub <= (eps * tst).max(safe_min) {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            values[hi] = h[(hi, hi)];
            its = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }

        if total >= MAX_ITERS_PER_EIGENVALUE * n {
            converged = false;
            for i in 0..=hi {
                values[i] = h[(i, i)];
            }
            break;
        }
        its += 1;
        total += 1;

        let shift = if its.is_multiple_of(10) {
            // exceptional shift to break cycles
            let mut s = h[(hi, hi - 1)].norm();
            if hi >= 2 {
                s += h[(hi - 1, hi - 2)].norm();
            }
            h[(hi, hi)] + C64::new(0.75 * s, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        // implicit single-shift sweep over the window lo..=hi
        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            // rows k, k+1 (columns from k-1 within the window)
            let col_start = if k > lo { k - 1 } else { lo };
            for j in col_start..=hi {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = b * c - s.conj() * a;
            }
            // columns k, k+1 (rows lo..=min(k+2, hi))
            let row_end = (k + 2).min(hi);
            for i in lo..=row_end {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = b * c - a * s;
            }
            if k > lo {
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }

    SpectrumRaw {
        values,
        converged,
        iterations: total,
    }
}

/// Descending modulus; ties by descending real part, then descending imaginary part.
pub fn compare_by_modulus(a: &C64, b: &C64) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}

pub fn sort_by_modulus(s: &SpectrumRaw) -> Vec<C64> {
    let mut v = s.values.clone();
    v.sort_by(compare_by_modulus);
    v
}

/// Largest singular value, from the spectrum of `A^H A`.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    let gram = a.adjoint().matmul(a);
    let spec = eigenvalues(&gram).expect("finite Gram matrix");
    spec.values.iter().map(|z| z.re).fold(0.0, f64::max).sqrt()
}

/// Greedy multiset distance: walk `a` by descending modulus and match each
/// value to its nearest unused partner in `b`. Returns the worst match.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets of different size");
    let mut a_sorted = a.to_vec();
    a_sorted.sort_by(compare_by_modulus);
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for z in a_sorted {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, w)| (i, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("sizes match");
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}

const ORACLE_MAX_DIM: usize = 8;
const ORACLE_MAX_SWEEPS: usize = 500;

/// Characteristic polynomial coefficients `c_0..c_n` (monic, `c_n = 1`) by
/// the Faddeev-LeVerrier recurrence.
pub fn faddeev_leverrier(a: &CMatrix) -> Vec<C64> {
    let n = a.rows();
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[n] = C64::new(1.0, 0.0);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        m = a.matmul(&m);
        for i in 0..n {
            m[(i, i)] += coeffs[n - k + 1];
        }
        coeffs[n - k] = -a.matmul(&m).trace() / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Roots of the characteristic polynomial, for `dim <= 8`.
pub fn char_poly_roots(a: &CMatrix) -> Result<Vec<C64>> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "oracle needs a square matrix".into(),
        ));
    }
    if n > ORACLE_MAX_DIM {
        return Err(Error::OracleTooLarge(n));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let coeffs = faddeev_leverrier(a);
    // Cauchy bound on root moduli
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64 + 0.4;
            C64::from_polar(radius * (1.0 + 0.01 * i as f64), theta)
        })
        .collect();
    let residual_ok = |z: &[C64]| {
        z.iter().all(|&zi| {
            let scale: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm() * zi.norm().powi(k as i32))
                .sum();
            horner(&coeffs, zi).norm() <= 1e-12 * scale.max(1.0)
        })
    };
    let mut polish = 0;
    for _ in 0..ORACLE_MAX_SWEEPS {
        for i in 0..n {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                // coincident iterates: nudge apart
                z[i] += C64::new(1e-8, 1e-8);
                continue;
            }
            let step = horner(&coeffs, z[i]) / den;
            z[i] -= step;
        }
        if residual_ok(&z) {
            polish += 1;
            if polish >= 3 {
                return Ok(z);
            }
        }
    }
    Err(Error::OracleNoConvergence(ORACLE_MAX_SWEEPS))
}
