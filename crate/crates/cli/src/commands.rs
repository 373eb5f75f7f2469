//! One function per subcommand. Each resolves its parameters, computes its
//! tables and returns them together with the resolved parameters.

use rpw_core::correlations::{
    berry_wall_single, pair_density_reduced, pair_density_unnormalized, subsystem_boltzmann_factor,
    wall_density_profile, wall_half_density_distance, Statistics,
};
use rpw_core::ensemble::{
    classical_dos, coordinate_marginals, energy_to_beta, reference_dos, stationary_phase_time, thermal_wavelength,
};
use rpw_core::oracles::{rpw_sample_correlation, RpwEnsembleConfig};
use rpw_core::specfun::{gaussian_limit_kernel, normalized_kernel};
use rpw_core::{BesselOrder, DosMethod, Potential, SystemSpec};
use serde_json::{json, Map, Value};

use crate::config::{
    to_map, BesselGaussParams, DosParams, EnsembleEquivParams, PairCorrParams, RpwVerifyParams, SpTimeParams,
    WallProfileParams,
};
use crate::error::CliError;
use crate::output::{num, Table};

/// Tables and footer of one run, with the fully resolved parameters.
pub struct RunOutput {
    pub params: Map<String, Value>,
    pub tables: Vec<Table>,
    pub footer: Map<String, Value>,
    /// Set when a verification run found a violation.
    pub verification_failed: bool,
}

impl RunOutput {
    fn new(params: Map<String, Value>, tables: Vec<Table>, footer: Value) -> Self {
        let Value::Object(footer) = footer else { unreachable!("footer is an object") };
        RunOutput { params, tables, footer, verification_failed: false }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
}

pub fn bessel_gauss(p: BesselGaussParams) -> Result<RunOutput, CliError> {
    if p.d_list.is_empty() {
        return Err(usage("d_list must not be empty"));
    }
    if p.n_grid < 2 {
        return Err(usage("n_grid must be at least 2"));
    }
    let mut rows = Table::new("kernel", &["d", "x", "kernel", "gaussian", "abs_error"]);
    let mut sup = Table::new("sup_error", &["d", "x_max", "sup_error"]);
    let mut sups = Vec::new();
    for &d in &p.d_list {
        let order = BesselOrder::new(d)?;
        let x_max = p.x_max_factor * (d + 1.0).sqrt();
        let mut worst = 0.0f64;
        for x in grid(0.0, x_max, p.n_grid) {
            let (k, g) = (normalized_kernel(order, x)?, gaussian_limit_kernel(order, x)?);
            let err = (k - g).abs();
            worst = worst.max(err);
            rows.push(vec![num(d), num(x), num(k), num(g), num(err)]);
        }
        sup.push(vec![num(d), num(x_max), num(worst)]);
        sups.push(worst);
    }
    let monotone = sups.windows(2).all(|w| w[1] < w[0]);
    let footer = json!({"sup_error": sups, "strictly_decreasing": monotone});
    Ok(RunOutput::new(to_map(&p), vec![rows, sup], footer))
}

pub fn wall_profile(mut p: WallProfileParams) -> Result<RunOutput, CliError> {
    let spec = &p.system;
    let energy = *p.energy.get_or_insert(spec.dof() as f64);
    let half = wall_half_density_distance(spec, energy)?;
    let x_max = *p.x_max.get_or_insert(4.0 * half);
    // Single-particle wavenumber at the equipartitioned energy E/N.
    let k1 = (energy / spec.kinetic_unit()).sqrt() / (spec.n_particles() as f64).sqrt();
    let mut t = Table::new("profile", &["distance", "density_ratio", "berry_single"]);
    let mut far = 0.0;
    for x in grid(0.0, x_max, p.n_grid) {
        let ratio = wall_density_profile(spec, x, energy)? * spec.box_volume();
        far = ratio;
        t.push(vec![num(x), num(ratio), num(berry_wall_single(k1, x)?)]);
    }
    let footer = json!({
        "half_density_distance": half,
        "single_particle_wavenumber": k1,
        "density_ratio_at_x_max": far,
    });
    Ok(RunOutput::new(to_map(&p), vec![t], footer))
}

pub fn pair_corr(mut p: PairCorrParams) -> Result<RunOutput, CliError> {
    if p.stats == Statistics::Boltzmann {
        return Err(usage("pair-corr needs stats fermi or bose"));
    }
    let spec = &p.system;
    let lambda = thermal_wavelength(spec, p.beta)?;
    let r_max = *p.r_max.get_or_insert(3.0 * lambda);
    let dim = spec.spatial_dim();
    let x1 = vec![0.5 * spec.box_side(); dim];
    let mut t = Table::new("pair", &["r", "r_over_lambda", "pair_density", "exchange_factor"]);
    let mut crossover = None;
    let mut prev: Option<(f64, f64)> = None;
    for r in grid(0.0, r_max, p.n_grid) {
        let mut x2 = x1.clone();
        x2[0] += r;
        let rho = pair_density_reduced(spec, &x1, &x2, p.beta, p.stats)?;
        let f = pair_density_unnormalized(spec, &x1, &x2, p.beta, p.stats)?;
        // Separation where the exchange term has decayed to half.
        let dev = (f - 1.0).abs();
        if let Some((r0, d0)) = prev {
            if crossover.is_none() && d0 >= 0.5 && dev < 0.5 {
                crossover = Some(r0 + (r - r0) * (d0 - 0.5) / (d0 - dev));
            }
        }
        prev = Some((r, dev));
        t.push(vec![num(r), num(r / lambda), num(rho), num(f)]);
    }
    let footer = json!({
        "thermal_wavelength": lambda,
        "exchange_factor_at_zero": t.rows[0][3],
        "half_exchange_distance_over_lambda": crossover.map(|c| c / lambda),
    });
    Ok(RunOutput::new(to_map(&p), vec![t], footer))
}

pub fn ensemble_equiv(mut p: EnsembleEquivParams) -> Result<RunOutput, CliError> {
    let spec = &p.system;
    let energy = *p.energy.get_or_insert(spec.dof() as f64);
    let cmp = coordinate_marginals(spec, energy, p.n_grid)?;
    let mut marg = Table::new("marginals", &["s", "microcanonical", "canonical"]);
    for ((s, a), b) in cmp.grid.iter().zip(&cmp.microcanonical).zip(&cmp.canonical) {
        marg.push(vec![num(*s), num(*a), num(*b)]);
    }
    let mut sub = Table::new("subsystem", &["e_sub", "exact", "boltzmann", "relative_gap"]);
    let kt = 2.0 * energy / spec.dof() as f64;
    for e_sub in grid(0.0, p.sub_energy_max_kt * kt, p.n_sub) {
        if e_sub >= energy {
            break;
        }
        let f = subsystem_boltzmann_factor(spec, p.subsystem_particles, energy, e_sub)?;
        sub.push(vec![num(e_sub), num(f.exact), num(f.limit), num(f.relative_gap())]);
    }
    let footer = json!({"beta": cmp.beta, "sup_difference": cmp.sup_difference, "kinetic_kt": kt});
    Ok(RunOutput::new(to_map(&p), vec![marg, sub], footer))
}

pub fn rpw_verify(p: RpwVerifyParams, seed: u64) -> Result<RunOutput, CliError> {
    if !matches!(p.system.potential(), Potential::Zero) {
        return Err(usage("rpw-verify needs the zero potential"));
    }
    if p.kr_list.is_empty() {
        return Err(usage("kr_list must not be empty"));
    }
    let spec = &p.system;
    let k = (p.energy / spec.kinetic_unit()).sqrt();
    let order = spec.order();
    let cfg = RpwEnsembleConfig::new(p.n_waves, p.n_samples, seed).with_amplitude_law(p.amplitude_law);
    let x = vec![0.0; spec.dof()];
    let mut t = Table::new("rpw", &["kr", "estimate", "std_error", "kernel", "z_score", "within_3_sigma"]);
    let mut failures = 0;
    let mut max_z = 0.0f64;
    for &kr in &p.kr_list {
        let mut r = vec![0.0; spec.dof()];
        r[0] = kr / k;
        let est = rpw_sample_correlation(spec, p.energy, &x, &r, &cfg)?;
        let want = normalized_kernel(order, kr)?;
        let diff = (est.estimate - want).abs();
        let z = if diff == 0.0 { 0.0 } else { diff / est.std_error };
        let ok = diff <= 3.0 * est.std_error;
        failures += usize::from(!ok);
        max_z = max_z.max(z);
        t.push(vec![num(kr), num(est.estimate), num(est.std_error), num(want), num(z), json!(ok)]);
    }
    let footer = json!({"failures": failures, "max_z_score": max_z});
    let mut out = RunOutput::new(to_map(&p), vec![t], footer);
    out.verification_failed = failures > 0;
    Ok(out)
}

fn dos_methods(spec: &SystemSpec, seed: u64, n_samples: usize) -> Vec<(&'static str, DosMethod)> {
    let mc = ("monte-carlo", DosMethod::MonteCarlo { seed, n_samples });
    match spec.potential() {
        Potential::Zero => vec![("analytic-free", DosMethod::AnalyticFree), ("quadrature", DosMethod::Quadrature), mc],
        Potential::Harmonic { .. } => vec![("quadrature", DosMethod::Quadrature), mc],
        Potential::Table(_) => vec![mc],
    }
}

pub fn dos(p: DosParams, seed: u64) -> Result<RunOutput, CliError> {
    if p.energies.is_empty() {
        return Err(usage("energies must not be empty"));
    }
    let spec = &p.system;
    let mut t = Table::new("dos", &["energy", "method", "value", "std_error", "reference", "relative_difference"]);
    for &e in &p.energies {
        let reference = reference_dos(spec, e)?.value;
        for (name, method) in dos_methods(spec, seed, p.n_samples) {
            let est = classical_dos(spec, e, method)?;
            let rel = (est.value - reference) / reference;
            t.push(vec![num(e), json!(name), num(est.value), num(est.std_error), num(reference), num(rel)]);
        }
    }
    let footer = json!({"dof": spec.dof()});
    Ok(RunOutput::new(to_map(&p), vec![t], footer))
}

pub fn sp_time(mut p: SpTimeParams) -> Result<RunOutput, CliError> {
    let spec = &p.system;
    let x = p
        .x
        .get_or_insert_with(|| {
            let c = if matches!(spec.potential(), Potential::Zero) { 0.5 * spec.box_side() } else { 0.0 };
            vec![c; spec.dof()]
        })
        .clone();
    let mut t = Table::new(
        "stationary_phase",
        &["energy", "beta", "t_star_re", "t_star_im", "minus_beta_hbar", "abs_difference"],
    );
    let mut worst = 0.0f64;
    for &e in &p.energies {
        let beta = energy_to_beta(spec, e)?.beta;
        let ts = stationary_phase_time(spec, &x, e)?;
        let target = -beta * spec.hbar();
        let diff = (ts.re.powi(2) + (ts.im - target).powi(2)).sqrt();
        worst = worst.max(diff / target.abs());
        t.push(vec![num(e), num(beta), num(ts.re), num(ts.im), num(target), num(diff)]);
    }
    let footer = json!({"max_relative_difference": worst});
    Ok(RunOutput::new(to_map(&p), vec![t], footer))
}
