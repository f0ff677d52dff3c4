use opencat::catmap::CatMap;
use opencat::eigen::{eigenvalues, sort_by_modulus};
use opencat::experiments::{trapped_sweep, OpenMap, Quantization, DEFAULT_TRAPPED};
use opencat::metaplectic::{quantize_word, Conventions, PhaseMode};
use opencat::quantizer::SymbolResolution;

fn moduli(values: &[opencat::matrix::C64]) -> Vec<f64> {
    values.iter().take(4).map(|z| z.norm()).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn moduli_ignore_phase_and_operator_order() {
    let n = 128;
    let open = OpenMap::new(
        &CatMap::ARNOLD,
        DEFAULT_TRAPPED.into(),
        Quantization::Left,
        SymbolResolution::default(),
    )
    .unwrap();
    let (plain, _) = open.spectrum(n, PhaseMode::None).unwrap();
    let (rotated, _) = open.spectrum(n, PhaseMode::LeadingRealPositive).unwrap();
    assert!(max_diff(&moduli(&plain), &moduli(&rotated)) < 1e-9);

    let chi = open.cutoff_operator(n);
    let m = quantize_word(&open.word, n, &Conventions::default()).unwrap();
    let swapped = sort_by_modulus(&eigenvalues(&m.matmul(&chi)).unwrap());
    assert!(max_diff(&moduli(&plain), &moduli(&swapped)) < 1e-9);

    let normalized = open.operator(n, PhaseMode::LeadingRealPositive).unwrap();
    let direct = sort_by_modulus(&eigenvalues(&normalized).unwrap());
    assert!((direct[0].im).abs() < 1e-9 && direct[0].re > 0.0);
}

#[test]
fn errors_shrink_along_default_sweep() {
    let open = OpenMap::new(
        &CatMap::ARNOLD,
        DEFAULT_TRAPPED.into(),
        Quantization::Left,
        SymbolResolution::default(),
    )
    .unwrap();
    let sweep = trapped_sweep(
        &open,
        &[128, 256, 384, 512],
        PhaseMode::LeadingRealPositive,
        4,
    )
    .unwrap();
    for k in 0..4 {
        let errs: Vec<f64> = sweep.reports.iter().map(|r| r.errors_modulus[k]).collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "k = {k}: {errs:?}");
        assert!(errs[3] < errs[0] / 5.0);
    }
    let rows: Vec<(usize, usize)> = sweep.rows.iter().map(|r| (r.n, r.k)).collect();
    let mut sorted = rows.clone();
    sorted.sort();
    assert_eq!(rows, sorted);
}
