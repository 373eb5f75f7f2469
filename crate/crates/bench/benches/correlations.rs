use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rpw_bench::{config_pair, gaussian_matrix, unit_gamma_system};
use rpw_core::correlations::{determinant, permanent, symmetrized_correlation};
use rpw_core::oracles::{rpw_sample_correlation, RpwEnsembleConfig};
use rpw_core::{EnergyShell, KernelForm, PermutationMethod, Statistics, SystemSpec, WallGeometry};

fn wall_images(c: &mut Criterion) {
    let mut g = c.benchmark_group("wall_exact");
    for n in [4, 8, 12] {
        let (spec, energy) = unit_gamma_system(n, 2);
        let shell = EnergyShell::new(&spec, energy).unwrap();
        let (x, xp) = config_pair(spec.dof(), 1);
        g.bench_with_input(BenchmarkId::new("bessel", n), &n, |b, _| {
            b.iter(|| shell.wall_exact(black_box(&x), &xp, WallGeometry::new(0), KernelForm::Bessel).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("product", n), &n, |b, _| {
            b.iter(|| shell.wall_product(black_box(&x), &xp, WallGeometry::new(0)).unwrap())
        });
    }
    g.finish();
}

fn exchange(c: &mut Criterion) {
    let mut g = c.benchmark_group("det_perm");
    for n in [6, 12, 18] {
        let m = gaussian_matrix(n, 3, 2);
        g.bench_with_input(BenchmarkId::new("determinant", n), &m, |b, m| b.iter(|| determinant(black_box(m))));
        g.bench_with_input(BenchmarkId::new("permanent", n), &m, |b, m| b.iter(|| permanent(black_box(m)).unwrap()));
    }
    g.finish();

    let (spec, energy) = unit_gamma_system(6, 3);
    let (x, xp) = config_pair(spec.dof(), 3);
    let mut g = c.benchmark_group("symmetrized N=6 fermi");
    for (label, method, form) in [
        ("enumerate-bessel", PermutationMethod::Enumerate, KernelForm::Bessel),
        ("detperm-gaussian", PermutationMethod::DetPerm, KernelForm::Gaussian),
    ] {
        g.bench_function(label, |b| {
            b.iter(|| symmetrized_correlation(&spec, black_box(&x), &xp, energy, Statistics::Fermi, method, form).unwrap())
        });
    }
    g.finish();
}

fn random_waves(c: &mut Criterion) {
    let spec = SystemSpec::new(2, 2).unwrap();
    let cfg = RpwEnsembleConfig::new(200, 1000, 7);
    let mut g = c.benchmark_group("rpw_sample_correlation");
    g.sample_size(20);
    g.bench_function("N=2 D=2 200 waves 1000 samples", |b| {
        b.iter(|| rpw_sample_correlation(&spec, 0.5, &[0.0; 4], black_box(&[3.0, 0.0, 0.0, 0.0]), &cfg).unwrap())
    });
    g.finish();
}

criterion_group!(benches, wall_images, exchange, random_waves);
criterion_main!(benches);
