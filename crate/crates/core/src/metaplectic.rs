//! Quantized cat maps on `H_N`.
//!
//! A map is factored into shears and the quarter rotation, each generator is
//! quantized in closed form, and the product is taken in word order. The
//! quantization of a product is the product of quantizations, so the word
//! `[g1, g2, ...]` quantizes `g1 g2 ...` and satisfies
//! `Op(a) M_N = M_N Op(a o M)` up to a global phase.
//!
//! Generator conventions (Fourier kernel `exp(-2 pi i m n / N)`):
//!
//! | letter | matrix            | operator                          |
//! |--------|-------------------|-----------------------------------|
//! | `S`    | `[[0,-1],[1,0]]`  | `omega F^H`                       |
//! | `S⁻¹`  | `[[0,1],[-1,0]]`  | `conj(omega) F`                   |
//! | `U(b)` | `[[1,b],[0,1]]`   | `F^H diag(exp(-i pi b m^2 / N)) F` |
//! | `L(c)` | `[[1,0],[c,1]]`   | `diag(exp(i pi c m^2 / N))`       |
//! | `PAR`  | `-I`              | `Q_m -> Q_{-m mod N}`             |
//!
//! The quadratic phases are only periodic in `m` for even `N`.

use std::f64::consts::PI;
use std::fmt;

use crate::catmap::CatMap;
use crate::eigen::{eigenvalues, sort_by_modulus};
use crate::error::{Error, Result};
use crate::hn::{Dft, FourierSign};
use crate::matrix::{CMatrix, C64};
use crate::quantizer::{op_weyl, HnOperator, TorusSymbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    S,
    SInv,
    U(i64),
    L(i64),
    Par,
}

impl Generator {
    pub fn matrix(&self) -> CatMap {
        match *self {
            Generator::S => CatMap {
                a: 0,
                b: -1,
                c: 1,
                d: 0,
            },
            Generator::SInv => CatMap {
                a: 0,
                b: 1,
                c: -1,
                d: 0,
            },
            Generator::U(b) => CatMap {
                a: 1,
                b,
                c: 0,
                d: 1,
            },
            Generator::L(c) => CatMap {
                a: 1,
                b: 0,
                c,
                d: 1,
            },
            Generator::Par => CatMap {
                a: -1,
                b: 0,
                c: 0,
                d: -1,
            },
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::S => write!(f, "S"),
            Generator::SInv => write!(f, "S_INV"),
            Generator::U(b) => write!(f, "U({b})"),
            Generator::L(c) => write!(f, "L({c})"),
            Generator::Par => write!(f, "PAR"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorWord {
    pub letters: Vec<Generator>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<Generator>) -> Self {
        GeneratorWord { letters }
    }

    /// Ordered product of the letters.
    pub fn product(&self) -> CatMap {
        self.letters
            .iter()
            .fold(CatMap::IDENTITY, |acc, g| acc.compose(&g.matrix()))
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|g| g.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Euclidean factorization: peel `U(q) S` off the left until the lower-left
/// entry vanishes, then finish with `U(b)` (and `S S = -I` for a negative
/// diagonal).
pub fn factor_sl2z(m: &CatMap) -> Result<GeneratorWord> {
    if m.det() != 1 {
        return Err(Error::NotUnimodular { det: m.det() });
    }
    let mut letters = Vec::new();
    let mut cur = *m;
    while cur.c != 0 {
        let q = nearest_quotient(cur.a, cur.c);
        if q != 0 {
            letters.push(Generator::U(q));
        }
        letters.push(Generator::S);
        // cur <- S^{-1} U(-q) cur
        let shifted = Generator::U(-q).matrix().compose(&cur);
        cur = Generator::SInv.matrix().compose(&shifted);
    }
    // cur = [[s, b], [0, s]] with s = +-1
    if cur.a == 1 {
        if cur.b != 0 {
            letters.push(Generator::U(cur.b));
        }
    } else {
        letters.push(Generator::S);
        letters.push(Generator::S);
        if cur.b != 0 {
            letters.push(Generator::U(-cur.b));
        }
    }
    let word = GeneratorWord::new(letters);
    debug_assert_eq!(word.product(), *m);
    Ok(word)
}

fn nearest_quotient(a: i64, c: i64) -> i64 {
    let q = a.div_euclid(c);
    let r = a - q * c;
    if 2 * r.abs() > c.abs() {
        q + c.signum()
    } else {
        q
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PhaseMode {
    None,
    /// Rotate so the largest-modulus eigenvalue of the open operator is real positive.
    #[default]
    LeadingRealPositive,
}

/// Conventions for the generator quantizations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conventions {
    pub fourier_sign: FourierSign,
    /// Unimodular constant multiplying the quantized `S`.
    pub omega_s: C64,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            fourier_sign: FourierSign::Negative,
            omega_s: C64::from_polar(1.0, -PI / 4.0),
        }
    }
}

impl Conventions {
    pub fn flipped_dft() -> Self {
        Conventions {
            fourier_sign: FourierSign::Positive,
            ..Default::default()
        }
    }
}

fn check_even(n: usize) -> Result<()> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    Ok(())
}

/// `exp(i pi c m^2 / N)` for `m = 0..N`, with the exponent reduced exactly.
fn quadratic_phases(c: i64, n: usize) -> Vec<C64> {
    let two_n = 2 * n as i64;
    (0..n as i64)
        .map(|m| {
            let t = (i128::from(c) * i128::from(m * m)).rem_euclid(i128::from(two_n)) as i64;
            C64::from_polar(1.0, PI * t as f64 / n as f64)
        })
        .collect()
}

pub fn quantize_generator(letter: Generator, n: usize) -> Result<HnOperator> {
    quantize_generator_with(letter, n, &Conventions::default())
}

pub fn quantize_generator_with(
    letter: Generator,
    n: usize,
    conv: &Conventions,
) -> Result<HnOperator> {
    check_even(n)?;
    let dft = Dft::with_sign(n, conv.fourier_sign);
    Ok(match letter {
        Generator::S => dft.matrix().adjoint().scale(conv.omega_s),
        Generator::SInv => dft.matrix().scale(conv.omega_s.conj()),
        Generator::L(c) => CMatrix::from_diag(&quadratic_phases(c, n)),
        Generator::U(b) => dft.fourier_multiplier(&quadratic_phases(-b, n)),
        Generator::Par => {
            let mut p = CMatrix::zeros(n, n);
            for m in 0..n {
                p[((n - m) % n, m)] = C64::new(1.0, 0.0);
            }
            p
        }
    })
}

/// Product of the quantized letters, in word order.
pub fn quantize_word(word: &GeneratorWord, n: usize, conv: &Conventions) -> Result<HnOperator> {
    check_even(n)?;
    let mut acc = CMatrix::identity(n);
    for &letter in &word.letters {
        acc = match letter {
            Generator::L(c) => acc.scale_cols(&quadratic_phases(c, n)),
            _ => acc.matmul(&quantize_generator_with(letter, n, conv)?),
        };
    }
    Ok(acc)
}

/// Unimodular factor that makes the largest-modulus eigenvalue real positive.
pub fn leading_phase(values: &[C64]) -> Result<C64> {
    let mut v = values.to_vec();
    v.sort_by(crate::eigen::compare_by_modulus);
    let lead = v.first().copied().unwrap_or(C64::new(0.0, 0.0));
    let r = lead.norm();
    if r < 1e-12 {
        return Err(Error::DegeneratePhase(r));
    }
    Ok(lead.conj() / r)
}

/// Quantizes `m` on `H_N`. With [`PhaseMode::LeadingRealPositive`] the result
/// is rotated by the scalar that makes the leading eigenvalue of `chi M_N`
/// real and positive; `chi` is then required.
pub fn quantize_map(
    m: &CatMap,
    n: usize,
    phase: PhaseMode,
    chi: Option<&HnOperator>,
) -> Result<HnOperator> {
    quantize_map_with(&factor_sl2z(m)?, n, phase, chi, &Conventions::default())
}

pub fn quantize_map_with(
    word: &GeneratorWord,
    n: usize,
    phase: PhaseMode,
    chi: Option<&HnOperator>,
    conv: &Conventions,
) -> Result<HnOperator> {
    let op = quantize_word(word, n, conv)?;
    match phase {
        PhaseMode::None => Ok(op),
        PhaseMode::LeadingRealPositive => {
            let chi = chi.ok_or_else(|| {
                Error::InvalidSpec("phase normalization needs the cutoff operator".into())
            })?;
            let spec = eigenvalues(&chi.matmul(&op))?;
            let rot = leading_phase(&sort_by_modulus(&spec))?;
            Ok(op.scale(rot))
        }
    }
}

/// `a o M`: the mode `w` moves to `M^T w`. Fails if a moved mode leaves the
/// square of half-width `capacity`.
pub fn compose_symbol(sym: &TorusSymbol, m: &CatMap, capacity: usize) -> Result<TorusSymbol> {
    let mt = m.transpose();
    let moved: Vec<((i64, i64), C64)> = sym.modes().map(|(w, c)| (mt.apply(w), c)).collect();
    for &((k, l), _) in &moved {
        if k.unsigned_abs() as usize > capacity || l.unsigned_abs() as usize > capacity {
            return Err(Error::TruncationOverflow {
                k,
                l,
                k_max: capacity,
            });
        }
    }
    Ok(TorusSymbol::from_modes(moved))
}

/// Capacity `k_max (|M|_inf + 1)` for the composed table, `|M|_inf` the
/// largest absolute row sum.
pub fn composed_capacity(sym: &TorusSymbol, m: &CatMap) -> usize {
    let row_sum = (m.a.abs() + m.b.abs()).max(m.c.abs() + m.d.abs()) as usize;
    sym.k_max() * (row_sum + 1)
}

/// `cos(2 pi x) + cos(2 pi xi)`.
pub fn cos_cos_symbol() -> TorusSymbol {
    TorusSymbol::from_modes([
        ((1, 0), C64::new(0.5, 0.0)),
        ((-1, 0), C64::new(0.5, 0.0)),
        ((0, 1), C64::new(0.5, 0.0)),
        ((0, -1), C64::new(0.5, 0.0)),
    ])
}

/// `cos(2 pi x) + sin(2 pi xi)`. Being neither even nor odd it tells `M` apart
/// from `-M`, which an even probe such as `cos + cos` cannot.
pub fn probe_symbol() -> TorusSymbol {
    TorusSymbol::from_modes([
        ((1, 0), C64::new(0.5, 0.0)),
        ((-1, 0), C64::new(0.5, 0.0)),
        ((0, 1), C64::new(0.0, -0.5)),
        ((0, -1), C64::new(0.0, 0.5)),
    ])
}

/// `max |Op(a o M) - M_N^H Op(a) M_N|`, zero up to rounding for a correct
/// quantization.
pub fn egorov_residual(m: &CatMap, sym: &TorusSymbol, n: usize) -> Result<f64> {
    egorov_residual_with(&factor_sl2z(m)?, sym, n, &Conventions::default())
}

pub fn egorov_residual_with(
    word: &GeneratorWord,
    sym: &TorusSymbol,
    n: usize,
    conv: &Conventions,
) -> Result<f64> {
    let m = word.product();
    let composed = compose_symbol(sym, &m, composed_capacity(sym, &m))?;
    let mh = quantize_word(word, n, conv)?;
    let conj = mh.adjoint().matmul(&op_weyl(sym, n)).matmul(&mh);
    Ok(op_weyl(&composed, n).max_abs_diff(&conj))
}
