use std::hint::black_box;

use borel_stokes::special_fn::{kernel_derivative, Kernel};
use borel_stokes::{gamma, kernel_c, KernelParams};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use num_rational::Rational64;

fn kernel_values(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_c");
    for (num, den) in [(2, 1), (3, 2), (3, 1)] {
        let params = KernelParams::new(Rational64::new(num, den), KernelParams::DEFAULT_TOL, KernelParams::DEFAULT_MAX_TERMS).unwrap();
        for r in [0.5, 4.0, 12.0] {
            let tau = Complex64::from_polar(r, 0.3);
            group.bench_with_input(BenchmarkId::new(format!("alpha={num}/{den}"), r), &tau, |b, &tau| {
                b.iter(|| kernel_c(&params, black_box(tau)))
            });
        }
    }
    group.finish();
}

fn kernel_cached(c: &mut Criterion) {
    let params = KernelParams::for_equation(1, 3).unwrap();
    let kernel = Kernel::new(&params, 0);
    let tau = Complex64::from_polar(3.0, 0.2);
    c.bench_function("kernel_cached_alpha=3", |b| b.iter(|| kernel.value(black_box(tau))));
    c.bench_function("kernel_derivative_3", |b| b.iter(|| kernel_derivative(&params, black_box(tau), 3)));
}

fn gamma_values(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma");
    for z in [Complex64::new(0.7, 0.2), Complex64::new(3.0, 50.0), Complex64::new(-4.5, 1.0)] {
        group.bench_with_input(BenchmarkId::from_parameter(z), &z, |b, &z| b.iter(|| gamma(black_box(z))));
    }
    group.finish();
}

criterion_group!(benches, kernel_values, kernel_cached, gamma_values);
criterion_main!(benches);
