//! Symbols on the torus and their quantizations on `H_N`.
//!
//! A symbol is stored as a truncated Fourier table under the convention
//! `a(x, xi) = sum_{k,l} a_hat(k, l) exp(2 pi i (k x + l xi))`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catmap::CatMapAnalysis;
use crate::error::{Error, Result};
use crate::hn::{torus_rep, Dft};
use crate::matrix::{CMatrix, C64};

/// Dense operator on `H_N` in the comb basis; `rows() == cols() == N`.
pub type HnOperator = CMatrix;

pub const DEFAULT_K_MAX: usize = 48;
pub const DEFAULT_GRID: usize = 512;
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Truncation used when turning a function into a [`TorusSymbol`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolResolution {
    pub k_max: usize,
    pub grid: usize,
}

impl Default for SymbolResolution {
    fn default() -> Self {
        SymbolResolution {
            k_max: DEFAULT_K_MAX,
            grid: DEFAULT_GRID,
        }
    }
}

/// Fourier coefficients `a_hat(k, l)` for `|k|, |l| <= k_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSymbol {
    k_max: usize,
    coeffs: Vec<C64>,
    /// Phase-space support radius, when known.
    pub support_radius: Option<f64>,
}

impl TorusSymbol {
    pub fn zeros(k_max: usize) -> Self {
        let side = 2 * k_max + 1;
        TorusSymbol {
            k_max,
            coeffs: vec![C64::new(0.0, 0.0); side * side],
            support_radius: None,
        }
    }

    pub fn constant(c: C64) -> Self {
        let mut s = Self::zeros(0);
        s.set(0, 0, c);
        s
    }

    /// Builds a table from explicit modes; `k_max` is the smallest that holds them.
    pub fn from_modes<I>(modes: I) -> Self
    where
        I: IntoIterator<Item = ((i64, i64), C64)>,
    {
        let modes: Vec<_> = modes.into_iter().collect();
        let k_max = modes
            .iter()
            .map(|((k, l), _)| k.unsigned_abs().max(l.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0);
        let mut s = Self::zeros(k_max);
        for ((k, l), c) in modes {
            let cur = s.coeff(k, l);
            s.set(k, l, cur + c);
        }
        s
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    #[inline]
    fn index(&self, k: i64, l: i64) -> Option<usize> {
        let km = self.k_max as i64;
        if k.abs() > km || l.abs() > km {
            return None;
        }
        let side = 2 * km + 1;
        Some(((k + km) * side + (l + km)) as usize)
    }

    #[inline]
    pub fn coeff(&self, k: i64, l: i64) -> C64 {
        self.index(k, l)
            .map_or(C64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    /// Panics if `(k, l)` lies outside the table.
    pub fn set(&mut self, k: i64, l: i64, c: C64) {
        let i = self.index(k, l).expect("mode outside truncation");
        self.coeffs[i] = c;
    }

    /// Nonzero modes in lexicographic order.
    pub fn modes(&self) -> impl Iterator<Item = ((i64, i64), C64)> + '_ {
        let km = self.k_max as i64;
        (-km..=km)
            .flat_map(move |k| (-km..=km).map(move |l| (k, l)))
            .map(|(k, l)| ((k, l), self.coeff(k, l)))
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
    }

    /// Evaluates the truncated series at a point.
    pub fn eval(&self, x: f64, xi: f64) -> C64 {
        self.modes()
            .map(|((k, l), c)| c * C64::from_polar(1.0, 2.0 * PI * (k as f64 * x + l as f64 * xi)))
            .sum()
    }

    /// Largest coefficient modulus on the outer shell `max(|k|, |l|) = k_max`.
    pub fn tail_max(&self) -> f64 {
        let km = self.k_max as i64;
        (-km..=km)
            .flat_map(|k| (-km..=km).map(move |l| (k, l)))
            .filter(|(k, l)| k.abs() == km || l.abs() == km)
            .map(|(k, l)| self.coeff(k, l).norm())
            .fold(0.0, f64::max)
    }

    /// `max |a_hat(-k,-l) - conj(a_hat(k,l))|`; zero for real-valued symbols.
    pub fn reality_defect(&self) -> f64 {
        self.modes()
            .map(|((k, l), c)| (self.coeff(-k, -l) - c.conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> TorusSymbol {
        TorusSymbol {
            k_max: self.k_max,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            support_radius: self.support_radius,
        }
    }

    pub fn add(&self, other: &TorusSymbol) -> TorusSymbol {
        let mut out = Self::zeros(self.k_max.max(other.k_max));
        for ((k, l), c) in self.modes().chain(other.modes()) {
            let cur = out.coeff(k, l);
            out.set(k, l, cur + c);
        }
        out
    }
}

/// Samples `f` on a `grid x grid` lattice and keeps the modes `|k|, |l| <= k_max`.
pub fn symbol_from_function<F>(f: F, k_max: usize, grid: usize) -> Result<TorusSymbol>
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    if grid < 4 * k_max || grid == 0 {
        return Err(Error::GridTooCoarse { grid, k_max });
    }
    let km = k_max as i64;
    let side = 2 * k_max + 1;
    let g = grid as i64;
    let roots: Vec<C64> = (0..grid)
        .map(|t| C64::from_polar(1.0, -2.0 * PI * t as f64 / grid as f64))
        .collect();
    let root = |t: i64| roots[t.rem_euclid(g) as usize];

    // partial transform along xi: rows[p][l + km] = sum_q f(p/G, q/G) w^{l q}
    let partial: Vec<Vec<C64>> = (0..grid)
        .into_par_iter()
        .map(|p| {
            let x = p as f64 / grid as f64;
            let samples: Vec<C64> = (0..grid).map(|q| f(x, q as f64 / grid as f64)).collect();
            (-km..=km)
                .map(|l| {
                    samples
                        .iter()
                        .enumerate()
                        .map(|(q, &v)| v * root(l * q as i64))
                        .sum()
                })
                .collect()
        })
        .collect();

    let norm = 1.0 / (grid as f64 * grid as f64);
    let mut sym = TorusSymbol::zeros(k_max);
    for k in -km..=km {
        for (li, l) in (-km..=km).enumerate() {
            let c: C64 = partial
                .iter()
                .enumerate()
                .map(|(p, row)| row[li] * root(k * p as i64))
                .sum();
            sym.set(k, l, c * norm);
        }
    }
    debug_assert_eq!(sym.coeffs.len(), side * side);
    let tail = sym.tail_max();
    if tail > DEFAULT_TAIL_TOL {
        log::warn!(
            "symbol tail {tail:.3e} at k_max = {k_max} exceeds {DEFAULT_TAIL_TOL:e}; \
             raise k_max (and grid) for a sharper Weyl symbol"
        );
    }
    Ok(sym)
}

/// Weyl quantization on `H_N`:
/// `A_mj = sum_{k,l} a_hat(k, j-m-lN) (-1)^{kl} exp(pi i (j+m) k / N)`.
pub fn op_weyl(sym: &TorusSymbol, n: usize) -> HnOperator {
    assert!(n >= 1);
    let km = sym.k_max() as i64;
    let ni = n as i64;
    let two_n = 2 * ni;
    let half_roots: Vec<C64> = (0..two_n)
        .map(|t| C64::from_polar(1.0, PI * t as f64 / n as f64))
        .collect();
    // drop empty columns of the table up front
    let active_l: Vec<i64> = (-km..=km)
        .filter(|&l| (-km..=km).any(|k| sym.coeff(k, l) != C64::new(0.0, 0.0)))
        .collect();
    CMatrix::from_fn(n, n, |m, j| {
        let diff = j as i64 - m as i64;
        let s = (j + m) as i64;
        let mut acc = C64::new(0.0, 0.0);
        for &second in &active_l {
            if (diff - second).rem_euclid(ni) != 0 {
                continue;
            }
            let wrap = (diff - second) / ni;
            for k in -km..=km {
                let c = sym.coeff(k, second);
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                let phase = half_roots[(s * k).rem_euclid(two_n) as usize];
                if (k * wrap).rem_euclid(2) == 1 {
                    acc -= c * phase;
                } else {
                    acc += c * phase;
                }
            }
        }
        acc
    })
}

/// Left quantization of `f(x) g(xi)`: multiplication by `f` after the Fourier
/// multiplier `g`, i.e. `D_f F^H D_g F` with both profiles sampled at
/// `torus_rep(m / N)`.
pub fn op_left_separable<F, G>(f_profile: F, g_profile: G, n: usize) -> HnOperator
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    assert!(n >= 1);
    let pts: Vec<f64> = (0..n).map(|m| torus_rep(m as f64 / n as f64)).collect();
    let dg: Vec<C64> = pts.iter().map(|&x| C64::new(g_profile(x), 0.0)).collect();
    let df: Vec<C64> = pts.iter().map(|&x| C64::new(f_profile(x), 0.0)).collect();
    Dft::new(n).fourier_multiplier(&dg).scale_rows(&df)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpKind {
    /// `rho(x) rho(xi)`, equal to one near the origin.
    ProductBump,
    /// `(rho(x) - rho(2x)) (rho(xi) - rho(2 xi))`, vanishing near the origin.
    AnnulusProduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpSpec {
    pub kind: BumpKind,
    pub r_inner: f64,
    pub r_outer: f64,
}

impl BumpSpec {
    pub fn product(r_inner: f64, r_outer: f64) -> Self {
        BumpSpec {
            kind: BumpKind::ProductBump,
            r_inner,
            r_outer,
        }
    }

    pub fn annulus(r_inner: f64, r_outer: f64) -> Self {
        BumpSpec {
            kind: BumpKind::AnnulusProduct,
            r_inner,
            r_outer,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_inner > 0.0 && self.r_inner < self.r_outer && self.r_outer < 0.5) {
            return Err(Error::InvalidSpec(format!(
                "need 0 < r_inner < r_outer < 1/2, got ({}, {})",
                self.r_inner, self.r_outer
            )));
        }
        Ok(())
    }
}

fn smooth_step_edge(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// The plateau profile `rho`: one on `|x| <= r_inner`, zero on `|x| >= r_outer`,
/// with the exponential smooth step in between. Not periodized.
pub fn bump_profile(spec: &BumpSpec, x: f64) -> f64 {
    let ax = x.abs();
    if ax <= spec.r_inner {
        return 1.0;
    }
    if ax >= spec.r_outer {
        return 0.0;
    }
    let t = (spec.r_outer - ax) / (spec.r_outer - spec.r_inner);
    let a = smooth_step_edge(t);
    let b = smooth_step_edge(1.0 - t);
    a / (a + b)
}

/// One-dimensional factor of a separable cutoff, evaluated on the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile {
    Constant(f64),
    Bump {
        r_inner: f64,
        r_outer: f64,
    },
    /// `rho(x) - rho(2x)`.
    Annulus {
        r_inner: f64,
        r_outer: f64,
    },
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        let x = torus_rep(x);
        match *self {
            Profile::Constant(c) => c,
            Profile::Bump { r_inner, r_outer } => {
                bump_profile(&BumpSpec::product(r_inner, r_outer), x)
            }
            Profile::Annulus { r_inner, r_outer } => {
                let spec = BumpSpec::annulus(r_inner, r_outer);
                bump_profile(&spec, x) - bump_profile(&spec, 2.0 * x)
            }
        }
    }
}

/// A separable cutoff `p(x) p(xi)` with its Fourier-truncated symbol.
#[derive(Clone, Debug)]
pub struct CutoffSymbol {
    pub profile: Profile,
    pub symbol: TorusSymbol,
}

impl CutoffSymbol {
    pub fn constant(c: f64) -> Self {
        CutoffSymbol {
            profile: Profile::Constant(c),
            symbol: TorusSymbol::constant(C64::new(c, 0.0)),
        }
    }

    /// Exact (untruncated) value of the symbol.
    pub fn value(&self, x: f64, xi: f64) -> f64 {
        self.profile.eval(x) * self.profile.eval(xi)
    }

    pub fn op_left(&self, n: usize) -> HnOperator {
        let p = self.profile;
        op_left_separable(|x| p.eval(x), |x| p.eval(x), n)
    }

    pub fn op_weyl(&self, n: usize) -> HnOperator {
        op_weyl(&self.symbol, n)
    }
}

fn separable_symbol(profile: Profile, res: SymbolResolution) -> Result<TorusSymbol> {
    symbol_from_function(
        |x, xi| C64::new(profile.eval(x) * profile.eval(xi), 0.0),
        res.k_max,
        res.grid,
    )
}

pub fn make_trapped_symbol(spec: &BumpSpec, res: SymbolResolution) -> Result<CutoffSymbol> {
    spec.validate()?;
    if spec.kind != BumpKind::ProductBump {
        return Err(Error::InvalidSpec(
            "trapped cutoff needs kind product_bump".into(),
        ));
    }
    let profile = Profile::Bump {
        r_inner: spec.r_inner,
        r_outer: spec.r_outer,
    };
    let mut symbol = separable_symbol(profile, res)?;
    symbol.support_radius = Some(std::f64::consts::SQRT_2 * spec.r_outer);
    Ok(CutoffSymbol { profile, symbol })
}

pub fn make_nontrapping_symbol(spec: &BumpSpec, res: SymbolResolution) -> Result<CutoffSymbol> {
    spec.validate()?;
    if spec.kind != BumpKind::AnnulusProduct {
        return Err(Error::InvalidSpec(
            "nontrapping cutoff needs kind annulus_product".into(),
        ));
    }
    if 2.0 * spec.r_outer >= 0.5 {
        return Err(Error::InvalidSpec(format!(
            "annulus needs 2 * r_outer < 1/2, got r_outer = {}",
            spec.r_outer
        )));
    }
    let profile = Profile::Annulus {
        r_inner: spec.r_inner,
        r_outer: spec.r_outer,
    };
    let mut symbol = separable_symbol(profile, res)?;
    symbol.support_radius = Some(std::f64::consts::SQRT_2 * spec.r_outer);
    Ok(CutoffSymbol { profile, symbol })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportGuard {
    pub ok: bool,
    pub radius_limit: f64,
}

/// Compares the support radius `sqrt(2) r_outer` with `c / (lambda |Q|^2)`.
pub fn support_guard(spec: &BumpSpec, analysis: &CatMapAnalysis, c: f64) -> SupportGuard {
    let radius_limit = c / (analysis.lambda * analysis.q_norm * analysis.q_norm);
    SupportGuard {
        ok: std::f64::consts::SQRT_2 * spec.r_outer <= radius_limit,
        radius_limit,
    }
}
