use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use num_complex::Complex64;

use sparseproc::id_laws::{
    levy_khintchine, pdf_from_exponent, AmplitudeGrid, InversionOptions, LevyExponent, LevyTriplet,
};
use sparseproc::operators::SystemSpec;
use sparseproc::quadrature::QuadratureSpec;
use sparseproc::synth::{synth_process, GridSpec, ProcessSpec};
use sparseproc::wavelets::{dct_basis, espline_basis, klt_basis, m_term_error};

fn exponents(c: &mut Criterion) {
    let mut g = c.benchmark_group("levy_khintchine");
    let quad = QuadratureSpec::default();
    for (name, t) in [("laplace", LevyTriplet::laplace()), ("sas-1.5", LevyTriplet::sas(1.5))] {
        g.bench_function(name, |b| b.iter(|| levy_khintchine(&t, black_box(2.5), &quad).unwrap()));
    }
    g.finish();

    let out = AmplitudeGrid::covering(5.0, 0.01).unwrap();
    let f = LevyExponent::sas(1.0).unwrap();
    c.bench_function("pdf_from_exponent/cauchy", |b| {
        b.iter(|| pdf_from_exponent(|w| f.eval(w), &out, &InversionOptions::default()).unwrap())
    });
}

fn synthesis(c: &mut Criterion) {
    let mut g = c.benchmark_group("synth_process");
    let systems = [
        ("ar1", SystemSpec::first_order(Complex64::new(-0.1, 0.0)).unwrap()),
        ("brownian", SystemSpec::from_poles(&[Complex64::new(0.0, 0.0)], &[], None).unwrap()),
    ];
    for n in [1usize << 12, 1 << 16] {
        g.throughput(Throughput::Elements(n as u64));
        for (name, system) in &systems {
            let grid = GridSpec::new(0.0, 1.0 / 16.0, n).unwrap();
            let spec = ProcessSpec::new(system.clone(), LevyExponent::sas(1.5).unwrap(), grid, 1);
            g.bench_with_input(BenchmarkId::new(*name, n), &spec, |b, s| b.iter(|| synth_process(s).unwrap()));
        }
    }
    g.finish();
}

fn transforms(c: &mut Criterion) {
    let n = 1024;
    let x: Vec<f64> = (0..n).map(|k| ((k * 7919) % 1031) as f64 / 1031.0 - 0.5).collect();
    let r: Vec<f64> = (0..n).map(|k| (-0.1 * k as f64).exp()).collect();
    let klt = klt_basis(&r).unwrap();
    let dct = dct_basis(n).unwrap();
    let espline = espline_basis(-0.1, 0.0, 1.0, n, 10).unwrap();

    let mut g = c.benchmark_group("m_term_error");
    g.throughput(Throughput::Elements(n as u64));
    g.bench_function("klt", |b| b.iter(|| m_term_error(black_box(&x), &klt, 100).unwrap()));
    g.bench_function("dct", |b| b.iter(|| m_term_error(black_box(&x), &dct, 100).unwrap()));
    g.bench_function("espline", |b| b.iter(|| m_term_error(black_box(&x), &espline, 100).unwrap()));
    g.finish();

    c.bench_function("klt_basis/1024", |b| b.iter(|| klt_basis(black_box(&r)).unwrap()));
}

criterion_group!(benches, exponents, synthesis, transforms);
criterion_main!(benches);
