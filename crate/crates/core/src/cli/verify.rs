//! Self-checks of every layer at small `N`, printed as PASS/FAIL lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catmap::{analyze, escape_check, guard_radius, CatMap, RationalPoint};
use crate::eigen::{char_poly_roots, eigenvalues, multiset_distance, spectral_norm};
use crate::experiments::{OpenMap, Quantization, DEFAULT_TRAPPED};
use crate::matrix::{CMatrix, C64};
use crate::metaplectic::{
    cos_cos_symbol, egorov_residual_with, factor_sl2z, probe_symbol, quantize_word, Conventions,
    Generator, GeneratorWord, PhaseMode,
};
use crate::quantizer::{op_weyl, SymbolResolution, TorusSymbol};

pub const VERIFY_NS: [usize; 3] = [32, 64, 128];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            pass: value < tol,
            detail: format!("{value:.3e} (tol {tol:.0e})"),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    pub flip_dft: bool,
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_vec(
        n,
        n,
        (0..n * n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

/// Largest relative mismatch of `tr(A^k)` against `sum mu^k` for `k = 1..=5`.
pub fn power_trace_defect(a: &CMatrix, mu: &[C64]) -> f64 {
    let mut pow = a.clone();
    let mut worst = 0.0f64;
    for k in 1..=5 {
        if k > 1 {
            pow = pow.matmul(a);
        }
        let lhs = pow.trace();
        let rhs: C64 = mu.iter().map(|z| z.powi(k)).sum();
        let scale = mu
            .iter()
            .map(|z| z.norm().powi(k))
            .sum::<f64>()
            .max(f64::MIN_POSITIVE);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    worst
}

pub fn run(opts: VerifyOptions) -> Vec<Check> {
    let conv = if opts.flip_dft {
        Conventions::flipped_dft()
    } else {
        Conventions::default()
    };
    let mut checks = Vec::new();
    let arnold_word = factor_sl2z(&CatMap::ARNOLD).expect("Arnold map is unimodular");

    for &n in &VERIFY_NS {
        let m = quantize_word(&arnold_word, n, &conv).expect("even N");
        let defect = m.adjoint().matmul(&m).max_abs_diff(&CMatrix::identity(n));
        checks.push(Check::below(format!("unitarity N={n}"), defect, 1e-10));
    }

    let letters = [
        Generator::S,
        Generator::SInv,
        Generator::U(1),
        Generator::U(-2),
        Generator::L(1),
        Generator::L(-3),
        Generator::Par,
    ];
    let probe = probe_symbol();
    for &n in &VERIFY_NS {
        let worst = letters
            .iter()
            .map(|&g| {
                egorov_residual_with(&GeneratorWord::new(vec![g]), &probe, n, &conv)
                    .expect("egorov")
            })
            .fold(0.0, f64::max);
        checks.push(Check::below(
            format!("egorov generators N={n}"),
            worst,
            1e-8,
        ));
        for (label, sym) in [("cos+cos", cos_cos_symbol()), ("cos+sin", probe_symbol())] {
            let r = egorov_residual_with(&arnold_word, &sym, n, &conv).expect("egorov");
            checks.push(Check::below(
                format!("egorov arnold {label} N={n}"),
                r,
                1e-8,
            ));
        }
    }

    let res = SymbolResolution::default();
    let trapped = OpenMap::new(
        &CatMap::ARNOLD,
        DEFAULT_TRAPPED.into(),
        Quantization::Left,
        res,
    )
    .expect("default cutoff is valid");
    let one = TorusSymbol::constant(C64::new(1.0, 0.0));
    for &n in &VERIFY_NS {
        let id = op_weyl(&one, n).max_abs_diff(&CMatrix::identity(n));
        checks.push(Check::below(format!("weyl identity N={n}"), id, 1e-13));
        let herm = trapped.cutoff.op_weyl(n).hermitian_defect();
        checks.push(Check::below(format!("weyl hermitian N={n}"), herm, 1e-11));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = random_matrix(6, &mut rng);
        let qr = eigenvalues(&a).expect("finite");
        worst = match char_poly_roots(&a) {
            Ok(roots) => worst.max(multiset_distance(&qr.values, &roots)),
            Err(_) => f64::INFINITY,
        };
    }
    checks.push(Check::below("eigen oracle 100 random 6x6", worst, 1e-6));

    let a = random_matrix(50, &mut rng);
    let mu = eigenvalues(&a).expect("finite").values;
    checks.push(Check::below(
        "power traces random N=50",
        power_trace_defect(&a, &mu),
        1e-8,
    ));
    for &n in &VERIFY_NS {
        let op = trapped.operator(n, PhaseMode::None).expect("operator");
        let spec = eigenvalues(&op).expect("finite");
        let mut check = Check::below(
            format!("power traces open map N={n}"),
            power_trace_defect(&op, &spec.values),
            1e-8,
        );
        check.pass &= spec.converged;
        checks.push(check);
    }

    let diffs: Vec<f64> = VERIFY_NS
        .iter()
        .map(|&n| spectral_norm(&(&trapped.cutoff.op_weyl(n) - &trapped.cutoff.op_left(n))))
        .collect();
    let decreasing = diffs.windows(2).all(|w| w[1] < w[0]);
    checks.push(Check {
        name: "weyl-left gap shrinks with N".into(),
        pass: decreasing,
        detail: diffs
            .iter()
            .map(|d| format!("{d:.3e}"))
            .collect::<Vec<_>>()
            .join(" "),
    });

    let guard = guard_radius(&analyze(&CatMap::ARNOLD).expect("hyperbolic"));
    let report = escape_check(&CatMap::ARNOLD, guard, 30).expect("radius in range");
    checks.push(Check {
        name: "escape at guard radius q<=30".into(),
        pass: report.all_escape,
        detail: format!("radius {guard:.5}"),
    });
    let report = escape_check(&CatMap::ARNOLD, 0.5, 3).expect("radius in range");
    let third = RationalPoint::new(1, 1, 3);
    checks.push(Check {
        name: "radius 1/2 witness (1/3, 1/3)".into(),
        pass: report.witness.as_ref().is_some_and(|w| w.contains(&third)),
        detail: format!("{:?}", report.witness.map(|w| w.len())),
    });

    checks
}
