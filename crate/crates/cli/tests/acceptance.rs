//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime
//! against the budget. Exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpw_core::correlations::{
    berry_wall_single, boltzmann_average_wall, subsystem_boltzmann_factor, symmetrized_correlation, AverageMethod,
};
use rpw_core::ensemble::{
    classical_dos, coordinate_marginals, energy_to_beta, stationary_phase_time, thermal_wavelength,
};
use rpw_core::oracles::reference::{convergence_reference, convergence_window, ReferenceRecord, CONVERGENCE_GRID};
use rpw_core::oracles::{
    green_convolution_check, highprec_kernel, permutation_enumeration, rpw_sample_correlation, RpwEnsembleConfig,
};
use rpw_core::specfun::{kernel_convergence_error, normalized_kernel};
use rpw_core::{
    BesselOrder, DosMethod, EnergyShell, KernelForm, PermutationMethod, Potential, Statistics, SystemSpec,
    WallGeometry,
};

type Check = Result<String, String>;

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.4e}")).collect::<Vec<_>>().join(", ")
}

const REFERENCE_TABLE: &str = include_str!("../../core/tests/data/reference.json");

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn order(d: f64) -> BesselOrder {
    BesselOrder::new(d).unwrap()
}

fn free(n: usize, d: usize) -> SystemSpec {
    SystemSpec::new(n, d).unwrap()
}

fn bessel_gaussian_convergence() -> Check {
    let table: Vec<ReferenceRecord> = serde_json::from_str(REFERENCE_TABLE).map_err(|e| e.to_string())?;
    let orders = [1.0, 9.0, 49.0, 199.0];
    let mut errs = Vec::new();
    for d in orders {
        errs.push(kernel_convergence_error(order(d), convergence_window(d), CONVERGENCE_GRID).map_err(|e| e.to_string())?);
    }
    ensure(errs.windows(2).all(|w| w[1] < w[0]), || format!("not strictly decreasing: {errs:?}"))?;
    let oracle = convergence_reference(&table, 199.0).ok_or("no tabulated d=199 threshold")?;
    let threshold = oracle + 1e-12;
    ensure(errs[3] < threshold, || format!("d=199 error {} above threshold {threshold}", errs[3]))?;
    Ok(format!("sup errors [{}]; d=199", sci(&errs)) + &format!(" {:.12e} < {threshold:.12e}", errs[3]))
}

fn order_zero_reduction() -> Check {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let x = 50.0 * i as f64 / 999.0;
        let oracle = highprec_kernel(order(0.0), x, 20).map_err(|e| e.to_string())?.to_f64();
        let v = normalized_kernel(order(0.0), x).map_err(|e| e.to_string())?;
        worst = worst.max((v - oracle).abs());
    }
    ensure(worst < 1e-12, || format!("max |Ĵ_0 − J_0| = {worst:e}"))?;
    Ok(format!("max |Ĵ_0 − J_0| = {worst:.2e} on 1000 points"))
}

fn rpw_agreement() -> Check {
    let krs = [0.5, 1.5, 2.404825557695773, 3.0, 5.0];
    let mut worst_z = 0.0f64;
    for (i, (n, d)) in [(1, 2), (2, 2), (1, 3)].into_iter().enumerate() {
        let spec = free(n, d);
        let dof = n * d;
        let energy = 0.5; // k = 1
        let cfg = RpwEnsembleConfig::new(200, 10_000, 1000 + i as u64);
        for kr in krs {
            let mut r = vec![0.0; dof];
            r[0] = kr;
            let est = rpw_sample_correlation(&spec, energy, &vec![0.0; dof], &r, &cfg).map_err(|e| e.to_string())?;
            let want = normalized_kernel(spec.order(), kr).map_err(|e| e.to_string())?;
            let z = (est.estimate - want).abs() / est.std_error;
            worst_z = worst_z.max(z);
            ensure(z <= 3.0, || format!("N={n} D={d} kr={kr}: {} ± {} vs {want}", est.estimate, est.std_error))?;
        }
    }
    Ok(format!("15 cases, max |z| = {worst_z:.2}"))
}

fn wall_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let wall = WallGeometry::new(0);
    let mut worst = 0.0f64;
    for n in 1..=12 {
        let dim = 2;
        let spec = free(n, dim);
        let energy = 2.0 * (spec.order().value() + 1.0); // γ = 1
        let shell = EnergyShell::new(&spec, energy).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let x: Vec<f64> = (0..n * dim).map(|_| rng.random_range(0.0..1.5)).collect();
            let xp: Vec<f64> = x.iter().map(|v| v + rng.random_range(-0.5..0.5)).collect();
            let a = shell.wall_exact(&x, &xp, wall, KernelForm::Gaussian).map_err(|e| e.to_string())?.kernel_value;
            let b = shell.wall_product(&x, &xp, wall).map_err(|e| e.to_string())?.kernel_value;
            worst = worst.max((a - b).abs());
            ensure((a - b).abs() < 1e-12, || format!("N={n}: image sum {a} vs product {b}"))?;
            let mut on = x.clone();
            on[(n - 1) * dim] = 0.0;
            let a0 = shell.wall_exact(&on, &xp, wall, KernelForm::Gaussian).map_err(|e| e.to_string())?.kernel_value;
            let b0 = shell.wall_product(&on, &xp, wall).map_err(|e| e.to_string())?.kernel_value;
            ensure(a0.abs() < 1e-12 && b0.abs() < 1e-12, || format!("N={n}: on-wall values {a0}, {b0}"))?;
        }
    }
    let spec = free(1, 2);
    let energy = 0.5;
    let shell = EnergyShell::new(&spec, energy).map_err(|e| e.to_string())?;
    let mut worst_berry = 0.0f64;
    for i in 0..=40 {
        let y = 0.1 * i as f64;
        let x = [y, 0.3];
        let v = shell.wall_exact(&x, &x, wall, KernelForm::Bessel).map_err(|e| e.to_string())?.kernel_value;
        let want = berry_wall_single(1.0, y).map_err(|e| e.to_string())?;
        worst_berry = worst_berry.max((v - want).abs());
    }
    ensure(worst_berry < 1e-12, || format!("N=1 diagonal off by {worst_berry:e}"))?;
    Ok(format!("N ≤ 12: image sum vs product {worst:.1e}; wall zeros exact; 1 − J_0(2kx) to {worst_berry:.1e}"))
}

fn boltzmann_wall_average() -> Check {
    let spec = free(1, 2).with_mass(1.7).unwrap().with_hbar(0.6).unwrap();
    let beta = 2.3;
    let lambda = thermal_wavelength(&spec, beta).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for f in [0.1, 1.0, 5.0] {
        let s = f * lambda;
        let q = boltzmann_average_wall(&spec, beta, s, AverageMethod::Quadrature).map_err(|e| e.to_string())?;
        let c = boltzmann_average_wall(&spec, beta, s, AverageMethod::ClosedForm).map_err(|e| e.to_string())?;
        let want = -(-spec.mass() * s * s / (2.0 * beta * spec.hbar().powi(2))).exp_m1();
        let rel = ((q - want) / want).abs().max(((c - want) / want).abs());
        worst = worst.max(rel);
        ensure(rel < 1e-8, || format!("s={f}λ: quadrature {q}, closed {c}, expected {want}"))?;
    }
    Ok(format!("s ∈ {{0.1, 1, 5}}λ, max relative error {worst:.1e}"))
}

fn permutation_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let dim = 3;
    let mut worst = 0.0f64;
    for n in 1..=6 {
        let spec = free(n, dim);
        let energy = 2.0 * (spec.order().value() + 1.0); // γ = 1
        let gamma = 1.0;
        let n_fact: f64 = (1..=n).map(|v| v as f64).product();
        for _ in 0..50 {
            let x: Vec<f64> = (0..n * dim).map(|_| rng.random_range(0.0..2.0)).collect();
            let xp: Vec<f64> = x.iter().map(|v| v + rng.random_range(-0.4..0.4)).collect();
            let points = |c: &[f64]| c.chunks(dim).map(|p| p.to_vec()).collect::<Vec<_>>();
            for stats in [Statistics::Fermi, Statistics::Bose] {
                let fast = symmetrized_correlation(&spec, &x, &xp, energy, stats, PermutationMethod::DetPerm, KernelForm::Gaussian)
                    .map_err(|e| e.to_string())?
                    .kernel_value
                    * n_fact;
                let brute = permutation_enumeration(&points(&x), &points(&xp), gamma, stats).map_err(|e| e.to_string())?;
                let rel = (fast - brute).abs() / brute.abs();
                worst = worst.max(rel);
                ensure(rel < 1e-10, || format!("N={n} {stats:?}: {fast} vs {brute}"))?;
            }
        }
    }
    let spec = free(3, dim);
    let x = [0.2, 0.4, 0.1, 0.2, 0.4, 0.1, 0.9, 0.3, 0.5];
    let xp = [0.3, 0.1, 0.2, 0.8, 0.5, 0.4, 0.1, 0.7, 0.6];
    let mut coincidence = 0.0f64;
    for (method, form) in [(PermutationMethod::DetPerm, KernelForm::Gaussian), (PermutationMethod::Enumerate, KernelForm::Bessel)] {
        let v = symmetrized_correlation(&spec, &x, &xp, 8.0, Statistics::Fermi, method, form).map_err(|e| e.to_string())?;
        coincidence = coincidence.max(v.kernel_value.abs());
    }
    ensure(coincidence < 1e-12, || format!("fermi coincidence gives {coincidence:e}"))?;
    Ok(format!("N ≤ 6 × 50 configs, max relative error {worst:.1e}; coincidence {coincidence:.1e}"))
}

fn classical_dos_check() -> Check {
    let shapes = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3), (4, 3), (6, 2), (12, 1)];
    let mut worst_q = 0.0f64;
    let mut worst_z = 0.0f64;
    for (i, &(n, d)) in shapes.iter().enumerate() {
        let spec = free(n, d).with_box_volume(1.3).unwrap().with_mass(0.8).unwrap();
        let e = 1.7;
        let exact = classical_dos(&spec, e, DosMethod::AnalyticFree).map_err(|e| e.to_string())?.value;
        let q = classical_dos(&spec, e, DosMethod::Quadrature).map_err(|e| e.to_string())?.value;
        let rel = ((q - exact) / exact).abs();
        worst_q = worst_q.max(rel);
        ensure(rel < 1e-6, || format!("N={n} D={d}: quadrature {q} vs {exact}"))?;
        let mc = classical_dos(&spec, e, DosMethod::MonteCarlo { seed: 70 + i as u64, n_samples: 1_000_000 })
            .map_err(|e| e.to_string())?;
        // The ideal-gas integrand is constant, so the sample variance vanishes;
        // allow for rounding in the accumulated mean.
        let allowed = 3.0 * mc.std_error + 1e-12 * exact;
        ensure((mc.value - exact).abs() <= allowed, || format!("N={n} D={d}: MC {} ± {} vs {exact}", mc.value, mc.std_error))?;
        if mc.std_error > 0.0 {
            worst_z = worst_z.max((mc.value - exact).abs() / mc.std_error);
        }
    }
    let mut worst_h = 0.0f64;
    for (n, d) in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (4, 3), (12, 1)] {
        let omega = 1.3;
        let spec = free(n, d).with_potential(Potential::harmonic(omega)).unwrap().with_hbar(0.9).unwrap();
        let dof = (n * d) as i32;
        let e: f64 = 2.5;
        let fact: f64 = (1..dof).map(f64::from).product();
        let want = e.powi(dof - 1) / (fact * (spec.hbar() * omega).powi(dof));
        let got = classical_dos(&spec, e, DosMethod::Quadrature).map_err(|e| e.to_string())?.value;
        let rel = ((got - want) / want).abs();
        worst_h = worst_h.max(rel);
        ensure(rel < 1e-4, || format!("harmonic N={n} D={d}: {got} vs {want}"))?;
    }
    Ok(format!(
        "ideal gas N·D ≤ 12: quadrature {worst_q:.1e}, MC max |z| {worst_z:.2} (10^6 samples); harmonic {worst_h:.1e}"
    ))
}

fn ensemble_equivalence() -> Check {
    let mut sups = Vec::new();
    for dof in [10, 40, 100] {
        let spec = free(dof, 1).with_potential(Potential::harmonic(1.0)).unwrap();
        let cmp = coordinate_marginals(&spec, dof as f64, 801).map_err(|e| e.to_string())?;
        sups.push(cmp.sup_difference);
    }
    ensure(sups.windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {sups:?}"))?;
    ensure(sups[2] < 0.02, || format!("N·D=100 sup difference {}", sups[2]))?;
    Ok(format!("sup differences [{}] over", sci(&sups)) + " N·D ∈ {10, 40, 100}")
}

fn subsystem_limit() -> Check {
    let spec = free(1000, 3);
    let energy = 1500.0;
    let kt = 2.0 * energy / spec.dof() as f64;
    let f = subsystem_boltzmann_factor(&spec, 1, energy, kt).map_err(|e| e.to_string())?;
    let gap = f.relative_gap();
    ensure(gap < 0.01, || format!("relative gap {gap}"))?;
    Ok(format!("N=1000 D=3 M=1 at E' = kT: relative gap {gap:.3e}"))
}

fn stationary_phase() -> Check {
    let mut worst = 0.0f64;
    for (n, d, m, hbar, e) in [(1, 1, 1.0, 1.0, 1.0), (10, 3, 1.0, 1.0, 7.0), (4, 2, 2.5, 0.3, 0.9), (100, 3, 0.7, 1.9, 40.0)] {
        let spec = free(n, d).with_mass(m).unwrap().with_hbar(hbar).unwrap();
        let beta = energy_to_beta(&spec, e).map_err(|e| e.to_string())?.beta;
        let t = stationary_phase_time(&spec, &vec![0.5; spec.dof()], e).map_err(|e| e.to_string())?;
        let target = beta * hbar;
        let err = (t.re.abs() + (t.im + target).abs()) / target;
        worst = worst.max(err);
        ensure(err <= 1e-14, || format!("N={n} D={d}: t* = {t}, −iβħ = −{target}i"))?;
    }
    Ok(format!("t* = −iβħ, max relative deviation {worst:.1e}"))
}

fn convolution_identity() -> Check {
    let mut worst = 0.0f64;
    for (n, d, m, e) in [(2, 1, 1, 1.5), (2, 2, 1, 3.0), (3, 2, 1, 2.0), (2, 3, 1, 2.5), (4, 2, 2, 4.0), (8, 1, 3, 2.0), (3, 2, 2, -0.7)] {
        let spec = free(n, d);
        let dof = n * d;
        let x = vec![0.0; dof];
        let xp: Vec<f64> = (0..dof).map(|i| 0.3 + 0.17 * i as f64).collect();
        let c = green_convolution_check(&spec, m, e, &x, &xp, 1e-9).map_err(|e| e.to_string())?;
        worst = worst.max(c.rel_error);
        ensure(c.rel_error < 1e-4, || format!("N={n} D={d} M={m} E={e}: {c:?}"))?;
    }
    Ok(format!("N·D ≤ 8, 7 splits, max relative error {worst:.1e}"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rpw")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!("rpw {} exited with {:?}: {}", args.join(" "), out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn cli_determinism() -> Check {
    let subcommands = ["bessel-gauss", "wall-profile", "pair-corr", "ensemble-equiv", "rpw-verify", "dos", "sp-time"];
    let mut runs = 0;
    for sub in subcommands {
        for format in ["csv", "json"] {
            let args = [sub, "--seed", "12345", "--reproducible", "--format", format];
            let a = run_cli(&args)?;
            let b = run_cli(&args)?;
            runs += 2;
            ensure(a == b, || format!("{sub} ({format}) output differs between runs"))?;
        }
    }
    Ok(format!("7 subcommands × 2 formats, {runs} runs byte-identical"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "Bessel→Gaussian convergence", budget: Duration::from_secs(5), run: bessel_gaussian_convergence },
        Criterion { id: 2, name: "d=0 reduction to J_0", budget: Duration::from_secs(1), run: order_zero_reduction },
        Criterion { id: 3, name: "random-plane-wave agreement", budget: Duration::from_secs(60), run: rpw_agreement },
        Criterion { id: 4, name: "wall Dirichlet and image identity", budget: Duration::from_secs(10), run: wall_identity },
        Criterion { id: 5, name: "Boltzmann-averaged wall", budget: Duration::from_secs(5), run: boltzmann_wall_average },
        Criterion { id: 6, name: "permutation oracle", budget: Duration::from_secs(30), run: permutation_oracle },
        Criterion { id: 7, name: "classical density of states", budget: Duration::from_secs(60), run: classical_dos_check },
        Criterion { id: 8, name: "ensemble equivalence", budget: Duration::from_secs(60), run: ensemble_equivalence },
        Criterion { id: 9, name: "subsystem Boltzmann limit", budget: Duration::from_secs(1), run: subsystem_limit },
        Criterion { id: 10, name: "stationary-phase time", budget: Duration::from_secs(1), run: stationary_phase },
        Criterion { id: 11, name: "convolution identity", budget: Duration::from_secs(30), run: convolution_identity },
        Criterion { id: 12, name: "CLI determinism", budget: Duration::from_secs(30), run: cli_determinism },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.iter().any(|f| c.name.contains(f.as_str()))) {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget")),
            Err(e) => ("FAIL", e),
        };
        failures += usize::from(status == "FAIL");
        println!(
            "{status} criterion {:>2} {} ({:.2}s / {}s): {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
