use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rpw_core::oracles::highprec_kernel;
use rpw_core::specfun::{gaussian_limit_kernel, log_scaled_kernel, normalized_kernel};
use rpw_core::BesselOrder;

fn kernel_paths(c: &mut Criterion) {
    let mut g = c.benchmark_group("normalized_kernel");
    // Small x stays on the power series; large x switches to backward recurrence.
    for (label, d, x) in [("series", 1.0, 2.0), ("series", 49.0, 20.0), ("recurrence", 0.0, 45.0), ("recurrence", 9.0, 40.0)] {
        let order = BesselOrder::new(d).unwrap();
        g.bench_with_input(BenchmarkId::new(label, format!("d={d},x={x}")), &(order, x), |b, &(o, x)| {
            b.iter(|| normalized_kernel(o, black_box(x)).unwrap())
        });
    }
    g.finish();

    let order = BesselOrder::new(199.0).unwrap();
    c.bench_function("log_scaled_kernel d=199 x=60", |b| b.iter(|| log_scaled_kernel(order, black_box(60.0)).unwrap()));
    c.bench_function("gaussian_limit_kernel d=199", |b| b.iter(|| gaussian_limit_kernel(order, black_box(20.0)).unwrap()));
}

fn high_precision(c: &mut Criterion) {
    let order = BesselOrder::new(49.0).unwrap();
    let mut g = c.benchmark_group("highprec_kernel d=49 x=7");
    for digits in [30, 100] {
        g.bench_with_input(BenchmarkId::from_parameter(digits), &digits, |b, &digits| {
            b.iter(|| highprec_kernel(order, black_box(7.0), digits).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, kernel_paths, high_precision);
criterion_main!(benches);
