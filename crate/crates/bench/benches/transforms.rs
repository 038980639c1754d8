//! Criterion benchmarks for the core transforms and operators at desk-scale
//! grid sizes.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use tfcalc_core::grid::{make_grid, random_test_signal};
use tfcalc_core::operators::{localization_apply, weyl_apply, LocalizationSpec, Symbol};
use tfcalc_core::tf_transforms::{gaussian_window, stft, wigner, SignalVector, WindowVector};
use tfcalc_core::verify::tuned_symbol;

fn bench_transforms(c: &mut Criterion) {
    let g = make_grid(1, 64, 8.0).unwrap();
    let f = random_test_signal(1, &g);
    let w = random_test_signal(2, &g);
    c.bench_function("stft_n64", |b| {
        b.iter(|| stft(black_box(&f), black_box(&w)).unwrap())
    });
    c.bench_function("wigner_n64", |b| {
        b.iter(|| wigner(black_box(&f), black_box(&w)).unwrap())
    });

    let sigma = tuned_symbol(7, &g, 1).unwrap();
    c.bench_function("weyl_apply_n64", |b| {
        b.iter(|| weyl_apply(black_box(&sigma), black_box(&f)).unwrap())
    });

    let win = WindowVector::new(vec![gaussian_window(&g)]).unwrap();
    let spec = LocalizationSpec::new(
        Symbol::one(&g, 1),
        win.clone(),
        win,
    )
    .unwrap();
    let fv = SignalVector::new(vec![f.clone()]).unwrap();
    c.bench_function("localization_apply_n64", |b| {
        b.iter(|| localization_apply(black_box(&spec), black_box(&fv)).unwrap())
    });
}

criterion_group!(benches, bench_transforms);
criterion_main!(benches);
