//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//! Lines starting with INFO are diagnostics and never affect the verdict.

use std::process::ExitCode;
use std::time::Instant;

use opencat::catmap::{analyze, escape_check, guard_radius, CatMap, RationalPoint};
use opencat::cli::verify::power_trace_defect;
use opencat::eigen::{char_poly_roots, eigenvalues, multiset_distance, spectral_norm};
use opencat::experiments::{
    nontrapping_sweep, phase_coherence_check, trapped_sweep, OpenMap, Quantization, TrappedSweep,
    DEFAULT_NONTRAPPING, DEFAULT_TRAPPED,
};
use opencat::matrix::{CMatrix, C64};
use opencat::metaplectic::{
    cos_cos_symbol, egorov_residual, quantize_map, Generator, GeneratorWord, PhaseMode,
};
use opencat::quantizer::{op_weyl, BumpSpec, SymbolResolution, TorusSymbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_TARGETS: [f64; 4] = [0.6180340, 0.2360680, 0.0901699, 0.0344419];

struct Outcome {
    pass: bool,
    detail: String,
}

fn fmt(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn open_map(spec: BumpSpec, quant: Quantization) -> OpenMap {
    OpenMap::new(
        &CatMap::ARNOLD,
        spec.into(),
        quant,
        SymbolResolution::default(),
    )
    .unwrap()
}

fn sweep(spec: BumpSpec, quant: Quantization, ns: &[usize]) -> TrappedSweep {
    trapped_sweep(
        &open_map(spec, quant),
        ns,
        PhaseMode::LeadingRealPositive,
        4,
    )
    .unwrap()
}

fn report_for(s: &TrappedSweep, n: usize) -> &opencat::experiments::SpectrumReport {
    s.reports.iter().find(|r| r.n == n).unwrap()
}

/// Criterion 1 on the pinned cutoff (0.10, 0.20).
fn trapped_limit(s: &TrappedSweep) -> Outcome {
    let first = report_for(s, 128);
    let last = report_for(s, 512);
    let mut pass = s.reports.iter().all(|r| r.converged);
    for (k, golden) in GOLDEN_TARGETS.iter().enumerate() {
        pass &= (first.targets[k] - golden).abs() < 1e-7;
        pass &= last.errors_modulus[k] <= 1e-2;
        pass &= last.errors_modulus[k] <= first.errors_modulus[k] / 5.0;
    }
    Outcome {
        pass,
        detail: format!(
            "abs_err(128) = {}, abs_err(512) = {}",
            fmt(&first.errors_modulus),
            fmt(&last.errors_modulus)
        ),
    }
}

fn imaginary_decay(s: &TrappedSweep) -> (Outcome, f64, f64) {
    let im128 = phase_coherence_check(report_for(s, 128));
    let im512 = phase_coherence_check(report_for(s, 512));
    let out = Outcome {
        pass: im512 <= 1e-3 && im512 < im128,
        detail: format!("max |Im mu_1..3|: N=128 {im128:.3e}, N=512 {im512:.3e}"),
    };
    (out, im128, im512)
}

fn nontrapping() -> Outcome {
    let rows = nontrapping_sweep(
        &open_map(DEFAULT_NONTRAPPING, Quantization::Left),
        &[64, 128, 256, 512],
    )
    .unwrap();
    let r: Vec<f64> = rows.iter().map(|x| x.top_modulus).collect();
    let slopes: Vec<f64> = rows.iter().filter_map(|x| x.slope_vs_prev).collect();
    let pass = rows.iter().all(|x| x.converged)
        && r.windows(2).all(|w| w[1] < w[0])
        && slopes.len() == 3
        && slopes.windows(2).all(|w| w[1] > w[0])
        && r[3] < r[0] / 100.0;
    Outcome {
        pass,
        detail: format!("top_modulus = {}, slopes = {}", fmt(&r), fmt(&slopes)),
    }
}

fn exactness() -> Outcome {
    let mut unit = 0.0f64;
    for n in [64, 128, 256] {
        let m = quantize_map(&CatMap::ARNOLD, n, PhaseMode::None, None).unwrap();
        unit = unit.max(m.adjoint().matmul(&m).max_abs_diff(&CMatrix::identity(n)));
    }
    let mut egorov = 0.0f64;
    for n in [32, 64] {
        egorov = egorov.max(egorov_residual(&CatMap::ARNOLD, &cos_cos_symbol(), n).unwrap());
    }
    let one = TorusSymbol::constant(C64::new(1.0, 0.0));
    let mut ident = 0.0f64;
    let mut herm = 0.0f64;
    let bump = open_map(DEFAULT_TRAPPED, Quantization::Weyl);
    for n in [32, 64, 128, 256] {
        ident = ident.max(op_weyl(&one, n).max_abs_diff(&CMatrix::identity(n)));
        herm = herm.max(bump.cutoff.op_weyl(n).hermitian_defect());
    }
    Outcome {
        pass: unit < 1e-10 && egorov < 1e-8 && ident < 1e-13 && herm < 1e-11,
        detail: format!("unitarity {unit:.2e}, egorov {egorov:.2e}, weyl(1)-I {ident:.2e}, hermiticity {herm:.2e}"),
    }
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

fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = random_matrix(6, &mut rng);
        let qr = eigenvalues(&a).unwrap();
        worst = worst.max(multiset_distance(&qr.values, &char_poly_roots(&a).unwrap()));
    }
    let a = random_matrix(50, &mut rng);
    let mu = eigenvalues(&a).unwrap().values;
    let pt50 = power_trace_defect(&a, &mu);
    let op = open_map(DEFAULT_TRAPPED, Quantization::Left)
        .operator(128, PhaseMode::None)
        .unwrap();
    let spec = eigenvalues(&op).unwrap();
    let pt128 = power_trace_defect(&op, &spec.values);
    Outcome {
        pass: worst < 1e-6 && pt50 < 1e-8 && pt128 < 1e-8 && spec.converged,
        detail: format!(
            "oracle distance {worst:.2e}, power traces N=50 {pt50:.2e}, open map N=128 {pt128:.2e}"
        ),
    }
}

fn classical() -> Outcome {
    let guard = guard_radius(&analyze(&CatMap::ARNOLD).unwrap());
    let big = escape_check(&CatMap::ARNOLD, guard, 60).unwrap();
    let small = escape_check(&CatMap::ARNOLD, 0.5, 3).unwrap();
    let mut expected = vec![
        RationalPoint::new(1, 1, 3),
        RationalPoint::new(0, 2, 3),
        RationalPoint::new(2, 2, 3),
        RationalPoint::new(0, 1, 3),
    ];
    expected.sort_by_key(|p| (p.x_num, p.y_num));
    let mut witness = small.witness.clone().unwrap_or_default();
    witness.sort_by_key(|p| (p.x_num, p.y_num));
    Outcome {
        pass: (guard - 0.09549).abs() < 1e-5
            && big.all_escape
            && !small.all_escape
            && witness == expected,
        detail: format!(
            "guard {guard:.5}, all_escape(q<=60) = {}, radius 1/2 witness of length {}",
            big.all_escape,
            witness.len()
        ),
    }
}

fn top_moduli(op: &CMatrix) -> Vec<f64> {
    opencat::eigen::sort_by_modulus(&eigenvalues(op).unwrap())
        .iter()
        .take(4)
        .map(|z| z.norm())
        .collect()
}

fn convention_independence(
    spec: BumpSpec,
    left: &TrappedSweep,
    weyl: &TrappedSweep,
) -> (Outcome, Vec<f64>, f64) {
    let n = 256;
    let res = SymbolResolution::default();
    let words = [
        GeneratorWord::new(vec![Generator::U(2), Generator::S, Generator::U(1)]),
        GeneratorWord::new(vec![
            Generator::U(1),
            Generator::S,
            Generator::S,
            Generator::S,
            Generator::U(-1),
            Generator::S,
        ]),
    ];
    assert_eq!(words[0].product(), CatMap::ARNOLD);
    assert_eq!(words[1].product(), CatMap::ARNOLD);
    let moduli: Vec<Vec<f64>> = words
        .iter()
        .map(|w| {
            let open = OpenMap::with_word(w.clone(), spec.into(), Quantization::Left, res).unwrap();
            top_moduli(&open.operator(n, PhaseMode::None).unwrap())
        })
        .collect();
    let word_diff = moduli[0]
        .iter()
        .zip(&moduli[1])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let l = report_for(left, n);
    let w = report_for(weyl, n);
    let quant_diff: Vec<f64> = (0..4)
        .map(|k| (l.eigenvalues[k].norm() - w.eigenvalues[k].norm()).abs())
        .collect();
    let cutoff = open_map(spec, Quantization::Left).cutoff;
    let gap = |n: usize| spectral_norm(&(&cutoff.op_weyl(n) - &cutoff.op_left(n)));
    let ratio = gap(128) / gap(256);
    let out = Outcome {
        pass: word_diff < 1e-9 && quant_diff.iter().all(|&d| d <= 1e-2) && (1.3..=3.0).contains(&ratio),
        detail: format!(
            "word moduli diff {word_diff:.2e}, weyl-left moduli diff N=256 {}, gap ratio 128/256 {ratio:.3}",
            fmt(&quant_diff)
        ),
    };
    (out, quant_diff, ratio)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let pinned = BumpSpec::product(0.10, 0.20);
    let ns = [128, 256, 384, 512];

    let mut results: Vec<(String, Outcome)> = Vec::new();
    let mut info: Vec<String> = Vec::new();

    let pinned_left = sweep(pinned, Quantization::Left, &ns);
    results.push((
        "1 trapped limit, cutoff (0.10, 0.20)".into(),
        trapped_limit(&pinned_left),
    ));

    let default_left = sweep(DEFAULT_TRAPPED, Quantization::Left, &ns);
    info.push(format!(
        "criterion 1 on the default cutoff (0.10, 0.25): {}",
        trapped_limit(&default_left).detail
    ));

    let (c2, _, _) = imaginary_decay(&default_left);
    results.push((
        "2 imaginary-part decay, default cutoff (0.10, 0.25)".into(),
        c2,
    ));
    let (c2_pinned, _, _) = imaginary_decay(&pinned_left);
    info.push(format!(
        "criterion 2 on cutoff (0.10, 0.20) would {}: {}",
        if c2_pinned.pass { "pass" } else { "fail" },
        c2_pinned.detail
    ));

    results.push(("3 nontrapping decay".into(), nontrapping()));
    results.push(("4 exactness suite".into(), exactness()));
    results.push(("5 eigensolver oracle".into(), oracle()));
    results.push(("6 classical proposition".into(), classical()));

    let default_weyl = sweep(DEFAULT_TRAPPED, Quantization::Weyl, &[128, 256]);
    let (c7, _, _) = convention_independence(DEFAULT_TRAPPED, &default_left, &default_weyl);
    results.push((
        "7 convention independence, default cutoff (0.10, 0.25)".into(),
        c7,
    ));
    let pinned_weyl = sweep(pinned, Quantization::Weyl, &[128, 256]);
    let (c7_pinned, _, _) = convention_independence(pinned, &pinned_left, &pinned_weyl);
    info.push(format!(
        "criterion 7 on cutoff (0.10, 0.20) would {}: {}",
        if c7_pinned.pass { "pass" } else { "fail" },
        c7_pinned.detail
    ));

    let mut all = true;
    for (name, o) in &results {
        all &= o.pass;
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    for line in &info {
        println!("INFO {line}");
    }
    println!("INFO elapsed {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
