//! Open quantum cat maps `Op_N(chi) M_N` and the two semiclassical studies:
//! convergence of the leading eigenvalues to `lambda^{-(2k+1)/2}` for a
//! cutoff around the fixed point, and superpolynomial decay of the spectral
//! radius for a cutoff vanishing near it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catmap::{analyze, CatMap};
use crate::eigen::{eigenvalues, sort_by_modulus};
use crate::error::{Error, Result};
use crate::hn::h_of;
use crate::matrix::C64;
use crate::metaplectic::{
    factor_sl2z, leading_phase, quantize_map_with, quantize_word, Conventions, GeneratorWord,
    PhaseMode,
};
use crate::quantizer::{
    make_nontrapping_symbol, make_trapped_symbol, support_guard, BumpKind, BumpSpec, CutoffSymbol,
    HnOperator, SymbolResolution,
};

/// Default trapped cutoff, `rho(x) rho(xi)` with plateau radius 0.10.
pub const DEFAULT_TRAPPED: BumpSpec = BumpSpec {
    kind: BumpKind::ProductBump,
    r_inner: 0.10,
    r_outer: 0.25,
};

pub const DEFAULT_NONTRAPPING: BumpSpec = BumpSpec {
    kind: BumpKind::AnnulusProduct,
    r_inner: 0.15,
    r_outer: 0.24,
};

pub const DEFAULT_K_COUNT: usize = 4;
pub const MAX_K_COUNT: usize = 8;

/// Constant in the advisory support check `sqrt(2) r_outer <= c / (lambda |Q|^2)`.
pub const SUPPORT_GUARD_C: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantization {
    Weyl,
    #[default]
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cutoff {
    Bump(BumpSpec),
    /// The constant symbol `c`; `Op_N(c) = c I`.
    Constant(f64),
}

impl From<BumpSpec> for Cutoff {
    fn from(spec: BumpSpec) -> Self {
        Cutoff::Bump(spec)
    }
}

impl Cutoff {
    pub fn symbol(&self, res: SymbolResolution) -> Result<CutoffSymbol> {
        match self {
            Cutoff::Constant(c) => Ok(CutoffSymbol::constant(*c)),
            Cutoff::Bump(spec) => match spec.kind {
                BumpKind::ProductBump => make_trapped_symbol(spec, res),
                BumpKind::AnnulusProduct => make_nontrapping_symbol(spec, res),
            },
        }
    }
}

/// Everything needed to assemble `Op_N(chi) M_N` at any even `N`.
#[derive(Clone, Debug)]
pub struct OpenMap {
    pub map: CatMap,
    pub word: GeneratorWord,
    pub cutoff: CutoffSymbol,
    pub quantization: Quantization,
    pub conventions: Conventions,
}

impl OpenMap {
    pub fn new(
        map: &CatMap,
        cutoff: Cutoff,
        quantization: Quantization,
        res: SymbolResolution,
    ) -> Result<Self> {
        let word = factor_sl2z(map)?;
        Self::with_word(word, cutoff, quantization, res)
    }

    pub fn with_word(
        word: GeneratorWord,
        cutoff: Cutoff,
        quantization: Quantization,
        res: SymbolResolution,
    ) -> Result<Self> {
        let map = word.product();
        if let (Cutoff::Bump(spec), Ok(analysis)) = (&cutoff, analyze(&map)) {
            let guard = support_guard(spec, &analysis, SUPPORT_GUARD_C);
            if !guard.ok {
                log::warn!(
                    "cutoff support radius {:.4} exceeds {:.4} = {SUPPORT_GUARD_C} / (lambda |Q|^2)",
                    std::f64::consts::SQRT_2 * spec.r_outer,
                    guard.radius_limit
                );
            }
        }
        Ok(OpenMap {
            map,
            word,
            cutoff: cutoff.symbol(res)?,
            quantization,
            conventions: Conventions::default(),
        })
    }

    pub fn cutoff_operator(&self, n: usize) -> HnOperator {
        match self.quantization {
            Quantization::Weyl => self.cutoff.op_weyl(n),
            Quantization::Left => self.cutoff.op_left(n),
        }
    }

    pub fn operator(&self, n: usize, phase: PhaseMode) -> Result<HnOperator> {
        let chi = self.cutoff_operator(n);
        let m = quantize_map_with(&self.word, n, phase, Some(&chi), &self.conventions)?;
        Ok(chi.matmul(&m))
    }

    /// Modulus-sorted spectrum, phase-normalized on the leading eigenvalue if asked.
    ///
    /// Rotating the operator by a unimodular scalar rotates every eigenvalue by
    /// the same scalar, so the normalization is applied to the computed values
    /// instead of solving twice.
    pub fn spectrum(&self, n: usize, phase: PhaseMode) -> Result<(Vec<C64>, bool)> {
        let chi = self.cutoff_operator(n);
        let m = quantize_word(&self.word, n, &self.conventions)?;
        let raw = eigenvalues(&chi.matmul(&m))?;
        let mut values = sort_by_modulus(&raw);
        if phase == PhaseMode::LeadingRealPositive {
            let rot = leading_phase(&values)?;
            for v in &mut values {
                *v *= rot;
            }
            values[0] = C64::new(values[0].norm(), 0.0);
        }
        Ok((values, raw.converged))
    }
}

/// `Op_N(chi) M_N` for a single `N`.
pub fn build_open_operator(
    m: &CatMap,
    cutoff: Cutoff,
    n: usize,
    quant: Quantization,
    phase: PhaseMode,
    res: SymbolResolution,
) -> Result<HnOperator> {
    OpenMap::new(m, cutoff, quant, res)?.operator(n, phase)
}

/// `lambda^{-(2k+1)/2}` for `k = 0..k_count`.
pub fn trapped_targets(lambda: f64, k_count: usize) -> Vec<f64> {
    (0..k_count)
        .map(|k| lambda.powf(-(2.0 * k as f64 + 1.0) / 2.0))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub n: usize,
    pub h: f64,
    pub converged: bool,
    /// Full spectrum, sorted by descending modulus.
    pub eigenvalues: Vec<C64>,
    pub targets: Vec<f64>,
    pub errors_modulus: Vec<f64>,
    pub errors_real: Vec<f64>,
    pub abs_imag: Vec<f64>,
}

impl SpectrumReport {
    pub fn new(n: usize, eigenvalues: Vec<C64>, targets: Vec<f64>, converged: bool) -> Self {
        let k_count = targets.len();
        let top = |k: usize| eigenvalues.get(k).copied().unwrap_or(C64::new(0.0, 0.0));
        SpectrumReport {
            n,
            h: h_of(n),
            converged,
            errors_modulus: (0..k_count)
                .map(|k| (top(k).norm() - targets[k]).abs())
                .collect(),
            errors_real: (0..k_count)
                .map(|k| (top(k).re - targets[k]).abs())
                .collect(),
            abs_imag: (0..k_count).map(|k| top(k).im.abs()).collect(),
            eigenvalues,
            targets,
        }
    }

    pub fn k_count(&self) -> usize {
        self.targets.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub h: f64,
    pub k: usize,
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub target: f64,
    pub abs_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrappedSweep {
    pub rows: Vec<SweepRow>,
    pub reports: Vec<SpectrumReport>,
}

fn check_n_list(n_list: &[usize], ascending: bool) -> Result<()> {
    for &n in n_list {
        if n == 0 || n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
    }
    if ascending && n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "N values must be strictly ascending".into(),
        ));
    }
    Ok(())
}

pub fn trapped_sweep(
    open: &OpenMap,
    n_list: &[usize],
    phase: PhaseMode,
    k_count: usize,
) -> Result<TrappedSweep> {
    check_n_list(n_list, false)?;
    if k_count > MAX_K_COUNT {
        return Err(Error::InvalidArgument(format!(
            "k_count {k_count} exceeds {MAX_K_COUNT}"
        )));
    }
    let lambda = analyze(&open.map)?.lambda;
    let targets = trapped_targets(lambda, k_count);
    let reports: Vec<SpectrumReport> = n_list
        .par_iter()
        .map(|&n| {
            let (values, converged) = open.spectrum(n, phase)?;
            Ok(SpectrumReport::new(n, values, targets.clone(), converged))
        })
        .collect::<Result<_>>()?;
    let rows = reports
        .iter()
        .flat_map(|r| {
            (0..r.k_count()).map(move |k| {
                let mu = r.eigenvalues.get(k).copied().unwrap_or(C64::new(0.0, 0.0));
                SweepRow {
                    n: r.n,
                    h: r.h,
                    k,
                    re: mu.re,
                    im: mu.im,
                    modulus: mu.norm(),
                    target: r.targets[k],
                    abs_err: r.errors_modulus[k],
                }
            })
        })
        .collect();
    Ok(TrappedSweep { rows, reports })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NontrapRow {
    pub n: usize,
    pub h: f64,
    pub top_modulus: f64,
    /// `None` on the first row and after a vanishing spectral radius.
    pub slope_vs_prev: Option<f64>,
    pub converged: bool,
}

/// Log-log slopes `(log r_i - log r_{i-1}) / (log h_i - log h_{i-1})`.
pub fn decay_slopes(h: &[f64], r: &[f64]) -> Vec<Option<f64>> {
    assert_eq!(h.len(), r.len());
    let mut out = Vec::with_capacity(h.len());
    let mut dead = false;
    for i in 0..h.len() {
        if r[i] <= 0.0 {
            if !dead {
                log::warn!(
                    "spectral radius vanished at h = {:e}; slopes undefined from here",
                    h[i]
                );
            }
            dead = true;
        }
        if i == 0 || dead {
            out.push(None);
            continue;
        }
        out.push(Some(
            (r[i].ln() - r[i - 1].ln()) / (h[i].ln() - h[i - 1].ln()),
        ));
    }
    out
}

pub fn nontrapping_sweep(open: &OpenMap, n_list: &[usize]) -> Result<Vec<NontrapRow>> {
    check_n_list(n_list, true)?;
    let radii: Vec<(f64, bool)> = n_list
        .par_iter()
        .map(|&n| {
            let (values, converged) = open.spectrum(n, PhaseMode::None)?;
            Ok((values.first().map_or(0.0, |z| z.norm()), converged))
        })
        .collect::<Result<_>>()?;
    let h: Vec<f64> = n_list.iter().map(|&n| h_of(n)).collect();
    let r: Vec<f64> = radii.iter().map(|x| x.0).collect();
    let slopes = decay_slopes(&h, &r);
    Ok(n_list
        .iter()
        .zip(h)
        .zip(radii)
        .zip(slopes)
        .map(
            |(((&n, h), (top_modulus, converged)), slope_vs_prev)| NontrapRow {
                n,
                h,
                top_modulus,
                slope_vs_prev,
                converged,
            },
        )
        .collect())
}

/// `max_{k >= 1} |Im mu_k|` over the report's compared eigenvalues.
pub fn phase_coherence_check(report: &SpectrumReport) -> f64 {
    report.abs_imag.iter().skip(1).copied().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::CMatrix;

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn arnold_targets() {
        let lambda = analyze(&CatMap::ARNOLD).unwrap().lambda;
        let t = trapped_targets(lambda, 4);
        let expect = [0.6180340, 0.2360680, 0.0901699, 0.0344419];
        for k in 0..4 {
            assert!((t[k] - expect[k]).abs() < 1e-7);
            assert!((t[k] - PHI.powi(-(2 * k as i32 + 1))).abs() < 1e-14);
        }
        for w in t.windows(2) {
            assert!((w[1] / w[0] - 1.0 / lambda).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_cutoffs() {
        let res = SymbolResolution::default();
        let zero = build_open_operator(
            &CatMap::ARNOLD,
            Cutoff::Constant(0.0),
            32,
            Quantization::Weyl,
            PhaseMode::None,
            res,
        )
        .unwrap();
        assert_eq!(zero.max_abs(), 0.0);
        assert!(eigenvalues(&zero)
            .unwrap()
            .values
            .iter()
            .all(|z| z.norm() == 0.0));

        for quant in [Quantization::Weyl, Quantization::Left] {
            let one = build_open_operator(
                &CatMap::ARNOLD,
                Cutoff::Constant(1.0),
                32,
                quant,
                PhaseMode::LeadingRealPositive,
                res,
            )
            .unwrap();
            assert!(
                one.adjoint()
                    .matmul(&one)
                    .max_abs_diff(&CMatrix::identity(32))
                    < 1e-10
            );
            for z in eigenvalues(&one).unwrap().values {
                assert!((z.norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn leading_eigenvalue_near_inverse_golden_ratio() {
        let open = OpenMap::new(
            &CatMap::ARNOLD,
            DEFAULT_TRAPPED.into(),
            Quantization::Left,
            SymbolResolution::default(),
        )
        .unwrap();
        let (values, converged) = open.spectrum(256, PhaseMode::LeadingRealPositive).unwrap();
        assert!(converged);
        assert!((values[0].re - 1.0 / PHI).abs() < 5e-3, "{}", values[0]);
        assert_eq!(values[0].im, 0.0);
    }

    #[test]
    fn empty_k_count() {
        let open = OpenMap::new(
            &CatMap::ARNOLD,
            DEFAULT_TRAPPED.into(),
            Quantization::Left,
            SymbolResolution::default(),
        )
        .unwrap();
        let sweep = trapped_sweep(&open, &[16, 32], PhaseMode::LeadingRealPositive, 0).unwrap();
        assert!(sweep.rows.is_empty());
        assert_eq!(sweep.reports.len(), 2);
        assert!(trapped_sweep(&open, &[16], PhaseMode::None, 9).is_err());
        assert_eq!(
            trapped_sweep(&open, &[15], PhaseMode::None, 1).unwrap_err(),
            Error::OddDimension(15)
        );
    }

    #[test]
    fn slopes_of_power_law() {
        let ns = [64usize, 128, 256, 512];
        let h: Vec<f64> = ns.iter().map(|&n| h_of(n)).collect();
        let r: Vec<f64> = h.iter().map(|x| x * x).collect();
        let s = decay_slopes(&h, &r);
        assert_eq!(s[0], None);
        for v in &s[1..] {
            assert!((v.unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn slopes_of_superpolynomial_model() {
        let h: Vec<f64> = [2usize, 4, 8, 16, 32].iter().map(|&n| h_of(n)).collect();
        let r: Vec<f64> = h.iter().map(|x| (-1.0 / x).exp()).collect();
        let s: Vec<f64> = decay_slopes(&h, &r)
            .into_iter()
            .skip(1)
            .map(Option::unwrap)
            .collect();
        for w in s.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn zero_radius_stops_slopes() {
        let s = decay_slopes(&[0.1, 0.05, 0.025, 0.0125], &[1e-2, 1e-3, 0.0, 1e-9]);
        assert!(s[1].is_some());
        assert_eq!(&s[2..], &[None, None]);
    }

    #[test]
    fn phase_coherence_trivial_cases() {
        let r = SpectrumReport::new(4, vec![C64::new(0.5, 0.0)], vec![0.6], true);
        assert_eq!(phase_coherence_check(&r), 0.0);
        let diag = vec![C64::new(0.6, 0.0), C64::new(0.2, 0.0), C64::new(0.1, 0.0)];
        let r = SpectrumReport::new(4, diag, vec![0.6, 0.2, 0.1], true);
        assert_eq!(phase_coherence_check(&r), 0.0);
    }

    #[test]
    fn nontrapping_requires_ascending() {
        let open = OpenMap::new(
            &CatMap::ARNOLD,
            DEFAULT_NONTRAPPING.into(),
            Quantization::Left,
            SymbolResolution::default(),
        )
        .unwrap();
        assert!(matches!(
            nontrapping_sweep(&open, &[64, 32]),
            Err(Error::InvalidArgument(_))
        ));
        let rows = nontrapping_sweep(&open, &[32]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].slope_vs_prev, None);
    }
}
