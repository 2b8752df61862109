//! One function per subcommand; each returns the artifacts it produced.

use ionfreq_core::bosonic::{
    calibrate_prep_window, cat_preparation_report, cat_state, coherent_state, wigner, CatReport, FockDensityMatrix,
    WignerGrid,
};
use ionfreq_core::constants::{angular, ordinary};
use ionfreq_core::cooling::{
    cooling_rate, evolve_ladder_curve, evolve_nbar, quantum_jump_oracle, rate_coefficients, steady_state_nbar,
    CoolingSetup, FockLadderState, LadderOptions,
};
use ionfreq_core::grid::{linspace, samples, Spacing};
use ionfreq_core::noise::{
    anomalous_heating_rate, dephasing_rate, detection_excitation_probability, recoil_heating_expansion,
    recoil_heating_rate, recoil_quanta_per_detection, spectral_density,
};
use ionfreq_core::runtime::{
    gate_time_scaling, laser_cooling_time, qec_cooling_load, qec_load_vs_nu, regime_comparison, transport_time,
    QECCode, RegimeComparison, RegimeOutcome, RegimeSpec, ShotModel, QUOTED_LOAD_PER_ROUND_30_MHZ,
};
use ionfreq_core::trap::{check_stability, solve_design, sweep_confinement, TrapConfig};
use ionfreq_core::{Error, IonSpecies};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{RunConfig, WignerState};
use crate::error::{CliError, CliResult};
use crate::output::{Artifact, Table};

pub struct Context {
    pub seed: u64,
}

fn trap_report(trap: &TrapConfig) -> serde_json::Value {
    let sec = trap.secular();
    let verdict = check_stability(sec.micromotion_q);
    json!({
        "species": trap.species.name,
        "mass_amu": trap.species.mass_amu(),
        "rf_amplitude_v": trap.rf_amplitude,
        "rf_frequency_hz": ordinary(trap.rf_frequency),
        "ion_electrode_distance_m": trap.ion_electrode_distance,
        "differential_drive": trap.differential_drive,
        "q": sec.micromotion_q,
        "nu_hz": ordinary(sec.secular_frequency),
        "nu_rad_s": sec.secular_frequency,
        "stable": verdict.stable,
        "adiabatic": verdict.adiabatic,
        "lamb_dicke": ionfreq_core::cooling::lamb_dicke(&trap.species, sec.secular_frequency),
    })
}

/// Fixed-q confinement grid with columns r0_m,V0_V,omega_rf_rad_s,nu_rad_s,q.
pub fn confinement_table(cfg: &RunConfig, species: &IonSpecies) -> CliResult<Table> {
    let g = &cfg.trap.grid;
    let points = sweep_confinement(
        species,
        g.q,
        (g.r0_min_m, g.r0_max_m),
        (g.v0_min_v, g.v0_max_v),
        (g.r0_points, g.v0_points),
        g.spacing,
        cfg.trap.differential_drive,
    )?;
    let mut t = Table::new(["r0_m", "V0_V", "omega_rf_rad_s", "nu_rad_s", "q"]);
    for p in points {
        t.push(vec![p.r0.into(), p.v0.into(), p.omega_rf.into(), p.nu.into(), p.q.into()]);
    }
    Ok(t)
}

/// Solves the design block if present, else evaluates the drive parameters as given.
pub fn resolve_trap(cfg: &RunConfig) -> CliResult<TrapConfig> {
    let trap = match cfg.design_target()? {
        Some(target) => solve_design(&target)?,
        None => cfg.trap_config()?,
    };
    let q = trap.secular().micromotion_q;
    if !check_stability(q).stable {
        return Err(Error::Unstable { q }.into());
    }
    Ok(trap)
}

pub fn design(cfg: &RunConfig) -> CliResult<Vec<Artifact>> {
    let trap = resolve_trap(cfg)?;
    let grid = confinement_table(cfg, &trap.species)?;
    Ok(vec![
        Artifact::json("design", trap_report(&trap))?,
        Artifact::table("design_grid", grid),
    ])
}

pub struct CoolingCurve {
    pub table: Table,
    /// Largest |ladder − closed form| / closed form over the curve.
    pub max_deviation: f64,
    pub final_state: FockLadderState,
}

fn require_cooling(setup: &CoolingSetup) -> CliResult<f64> {
    let rc = cooling_rate(setup);
    if rc > 0.0 {
        Ok(rc)
    } else {
        Err(Error::NotCooling { rate: rc }.into())
    }
}

/// Ladder n̄(t) and P0(t) next to the closed-form mean.
pub fn cooling_curve(
    setup: &CoolingSetup,
    init: &FockLadderState,
    anomalous: f64,
    times: &[f64],
) -> CliResult<CoolingCurve> {
    let states = evolve_ladder_curve(setup, init, anomalous, times, &LadderOptions::default())?;
    let mut table = Table::new(["t_s", "nbar", "P0", "nbar_closed_form"]);
    let mut max_deviation: f64 = 0.0;
    let nbar0 = init.mean();
    for (&t, s) in times.iter().zip(&states) {
        let closed = evolve_nbar(setup, nbar0, anomalous, t);
        max_deviation = max_deviation.max(((s.mean() - closed) / closed).abs());
        table.push(vec![t.into(), s.mean().into(), s.ground_population().into(), closed.into()]);
    }
    let final_state = states.last().cloned().unwrap_or_else(|| init.clone());
    Ok(CoolingCurve {
        table,
        max_deviation,
        final_state,
    })
}

fn setup_summary(setup: &CoolingSetup, anomalous: f64) -> CliResult<serde_json::Value> {
    let r = rate_coefficients(setup);
    Ok(json!({
        "nu_hz": ordinary(setup.nu),
        "gamma_hz": ordinary(setup.gamma),
        "detuning_hz": ordinary(setup.detuning),
        "nu_over_gamma": setup.nu / setup.gamma,
        "lamb_dicke": setup.lamb_dicke,
        "lamb_dicke_marginal": setup.lamb_dicke_marginal(),
        "scattering_rate_per_s": setup.scattering_rate(),
        "anomalous_rate_per_s": anomalous,
        "a_plus_per_s": r.a_plus,
        "a_minus_per_s": r.a_minus,
        "cooling_rate_per_s": cooling_rate(setup),
        "steady_state_nbar": steady_state_nbar(setup, anomalous)?,
        "regime": if 2.0 * setup.nu > setup.gamma { "resolved" } else { "unresolved" },
    }))
}

pub fn cool(cfg: &RunConfig, ctx: &Context) -> CliResult<Vec<Artifact>> {
    let c = &cfg.cooling;
    let setup = cfg.cooling_setup()?;
    let rc = require_cooling(&setup)?;
    if c.points < 2 {
        return Err(CliError::config("cooling.points must be at least 2"));
    }
    let duration = c.duration_s.unwrap_or(5.0 / rc);
    let times = linspace(0.0, duration, c.points);
    let init = cfg.initial_ladder();
    let curve = cooling_curve(&setup, &init, c.anomalous_rate_per_s, &times)?;
    let mut summary = setup_summary(&setup, c.anomalous_rate_per_s)?;
    summary["nbar0"] = json!(c.nbar0);
    summary["n_max"] = json!(init.n_max());
    summary["duration_s"] = json!(duration);
    summary["final_nbar"] = json!(curve.final_state.mean());
    summary["max_relative_deviation_closed_form"] = json!(curve.max_deviation);
    if c.trajectories > 0 {
        let est = quantum_jump_oracle(&setup, &init, c.anomalous_rate_per_s, duration, c.trajectories, ctx.seed)?;
        summary["jump"] = jump_summary(est.mean, est.std_error, est.trajectories, curve.final_state.mean(), ctx.seed);
    }
    Ok(vec![
        Artifact::table("cooling_curve", curve.table),
        Artifact::json("cooling_summary", summary)?,
    ])
}

pub fn jump_summary(mean: f64, std_error: f64, trajectories: usize, ladder_mean: f64, seed: u64) -> serde_json::Value {
    json!({
        "trajectories": trajectories,
        "seed": seed,
        "mean": mean,
        "std_error": std_error,
        "ladder_mean": ladder_mean,
        "sigma_distance": (mean - ladder_mean).abs() / std_error,
    })
}

pub fn steady_state(cfg: &RunConfig) -> CliResult<Vec<Artifact>> {
    let setup = cfg.cooling_setup()?;
    require_cooling(&setup)?;
    let mut summary = setup_summary(&setup, cfg.cooling.anomalous_rate_per_s)?;
    let n = summary["steady_state_nbar"].as_f64().unwrap_or(f64::NAN);
    summary["ground_state_probability"] = json!(1.0 / (1.0 + n));
    Ok(vec![Artifact::json("steady_state", summary)?])
}

pub fn noise(cfg: &RunConfig) -> CliResult<Vec<Artifact>> {
    let species = cfg.species()?;
    let n = &cfg.noise;
    let spec = cfg.anomalous_spec()?;
    let nu = angular(n.nu_hz);
    let r0 = n.r0_m.unwrap_or(spec.r0_ref);
    let temperature = n.temperature_k.unwrap_or(spec.t_ref);
    let meas = cfg.measurement_spec(species.linewidth)?;
    let rsc = cfg
        .cooling
        .scattering_rate_per_s
        .unwrap_or(cfg.cooling.rabi_over_gamma.powi(2) * species.linewidth);
    // outside the Lamb–Dicke regime there is no recoil model to report
    let recoil = CoolingSetup::for_species(&species, rsc, 0.0, nu).ok().map(|s| {
        json!({
            "scattering_rate_per_s": rsc,
            "rate_per_s": recoil_heating_rate(&s),
            "expansion_per_s": recoil_heating_expansion(&s),
            "quanta_per_detection": recoil_quanta_per_detection(&s, meas.detect_time),
        })
    });
    let summary = json!({
        "species": species.name,
        "nu_hz": n.nu_hz,
        "r0_m": r0,
        "temperature_k": temperature,
        "s0": spec.s0,
        "spectral_density": spectral_density(&spec, nu, r0, temperature),
        "anomalous_heating_rate_per_s": anomalous_heating_rate(&spec, &species, nu, r0, temperature),
        "dephasing_rate_per_s": dephasing_rate(&cfg.dephasing_spec(), nu),
        "nbar_per_detection": meas.nbar_per_detection(nu),
        "detection_excitation_probability": detection_excitation_probability(&meas, nu),
        "recoil": recoil,
    });
    Ok(vec![Artifact::json("noise", summary)?])
}

/// Preparation window actually used: configured, or refit when `calibrate_prep` is set.
pub fn prep_window(cfg: &RunConfig) -> CliResult<f64> {
    let b = &cfg.bosonic;
    if b.calibrate_prep {
        Ok(calibrate_prep_window(
            cfg.alpha(),
            &cfg.baseline_rates()?,
            angular(b.gamma_hz),
            b.calibration_fidelity,
            &cfg.cat_config(),
        )?)
    } else {
        Ok(b.prep_time_s)
    }
}

/// Cat reports at each of `nus_hz`, evaluated in parallel and returned in input order.
pub fn cat_reports(cfg: &RunConfig, prep_time: f64, nus_hz: &[f64]) -> CliResult<Vec<CatReport>> {
    let b = &cfg.bosonic;
    let baseline = cfg.baseline_rates()?;
    let mut config = cfg.cat_config();
    config.prep_time = prep_time;
    let alpha = cfg.alpha();
    let gamma = angular(b.gamma_hz);
    nus_hz
        .par_iter()
        .map(|&f| cat_preparation_report(alpha, angular(f), &baseline, gamma, b.idle_time_s, &config))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::from)
}

pub fn cat_table(reports: &[CatReport]) -> Table {
    let mut t = Table::new(["nu_hz", "prep_fidelity", "idle_fidelity"]);
    for r in reports {
        t.push(vec![ordinary(r.nu).into(), r.prep_fidelity.into(), r.idle_fidelity.into()]);
    }
    t
}

pub fn cat_summary(cfg: &RunConfig, prep_time: f64, reports: &[CatReport]) -> serde_json::Value {
    let b = &cfg.bosonic;
    let rates: Vec<_> = reports
        .iter()
        .map(|r| {
            json!({
                "nu_hz": ordinary(r.nu),
                "heating_per_s": r.rates.heating,
                "dephasing_per_s": r.rates.dephasing,
                "thermal_nbar": r.rates.initial_thermal_nbar,
            })
        })
        .collect();
    json!({
        "alpha_re": b.alpha_re,
        "alpha_im": b.alpha_im,
        "n_max": b.n_max,
        "prep_time_s": prep_time,
        "calibrated": b.calibrate_prep,
        "idle_time_s": b.idle_time_s,
        "convention": b.convention,
        "rates": rates,
    })
}

pub fn cat(cfg: &RunConfig) -> CliResult<Vec<Artifact>> {
    if cfg.bosonic.report_nu_hz.is_empty() {
        return Err(CliError::config("bosonic.report_nu_hz is empty"));
    }
    let prep = prep_window(cfg)?;
    let reports = cat_reports(cfg, prep, &cfg.bosonic.report_nu_hz)?;
    Ok(vec![
        Artifact::table("cat_report", cat_table(&reports)),
        Artifact::json("cat_summary", cat_summary(cfg, prep, &reports))?,
    ])
}

pub fn wigner_state(cfg: &RunConfig) -> CliResult<FockDensityMatrix> {
    let b = &cfg.bosonic;
    Ok(match b.wigner.state {
        WignerState::Cat => cat_state(cfg.alpha(), b.n_max)?,
        WignerState::Coherent => coherent_state(cfg.alpha(), b.n_max)?,
        WignerState::Vacuum => FockDensityMatrix::fock(0, b.n_max),
    })
}

pub fn wigner_grid(cfg: &RunConfig, state: &FockDensityMatrix) -> CliResult<WignerGrid> {
    let w = &cfg.bosonic.wigner;
    let axis = samples(w.min, w.max, w.points, Spacing::Linear)?;
    Ok(wigner(state, &axis, &axis))
}

pub fn wigner_table(grid: &WignerGrid) -> Table {
    let mut t = Table::new(["x", "p", "W"]);
    for (i, &x) in grid.x.iter().enumerate() {
        for (j, &p) in grid.p.iter().enumerate() {
            t.push(vec![x.into(), p.into(), grid.at(i, j).into()]);
        }
    }
    t
}

pub fn wigner_cmd(cfg: &RunConfig) -> CliResult<Vec<Artifact>> {
    let state = wigner_state(cfg)?;
    let grid = wigner_grid(cfg, &state)?;
    let summary = json!({
        "state": cfg.bosonic.wigner.state,
        "w_origin": ionfreq_core::bosonic::wigner_point(&state, 0.0, 0.0),
        "w_min": grid.min(),
        "integral": grid.integral(),
        "tail_mass": state.tail_mass(),
    });
    Ok(vec![
        Artifact::table("wigner", wigner_table(&grid)),
        Artifact::json("wigner_summary", summary)?,
    ])
}

pub fn budget_table(outcomes: &[&RegimeOutcome]) -> Table {
    let mut t = Table::new([
        "nu_hz",
        "t_laser_cool_s",
        "t_state_prep_s",
        "t_quantum_ops_s",
        "t_measure_s",
        "total_s",
        "cooling_load",
        "steady_nbar",
        "target_reachable",
    ]);
    for o in outcomes {
        let b = &o.budget;
        t.push(vec![
            ordinary(o.nu).into(),
            b.t_laser_cool.into(),
            b.t_state_prep.into(),
            b.t_quantum_ops.into(),
            b.t_measure.into(),
            b.total().into(),
            o.cooling_load.into(),
            o.steady_nbar.into(),
            o.target_reachable.into(),
        ]);
    }
    t
}

pub fn comparison_json(c: &RegimeComparison) -> serde_json::Value {
    json!({
        "low_nu_hz": ordinary(c.low.nu),
        "high_nu_hz": ordinary(c.high.nu),
        "cooling_load_ratio": c.cooling_load_ratio,
        "runtime_ratio": c.runtime_ratio,
        "cooling_time_ratio": c.cooling_time_ratio,
    })
}

pub fn regime_pair(cfg: &RunConfig) -> CliResult<(ShotModel, RegimeSpec, RegimeSpec)> {
    let model = cfg.shot_model()?;
    let low = model.spec_at(angular(cfg.runtime.low_nu_hz))?;
    let high = model.spec_at(angular(cfg.runtime.high_nu_hz))?;
    Ok((model, low, high))
}

fn qec_nus(cfg: &RunConfig) -> CliResult<Vec<f64>> {
    let r = &cfg.runtime;
    Ok(samples(r.qec_nu_min_hz, r.qec_nu_max_hz, r.qec_points, Spacing::Log)?)
}

fn code_column(code: &QECCode) -> String {
    format!("load_per_round_{}_{}_{}", code.n_physical, code.k_logical, code.distance)
}

pub fn qec_table(codes: &[QECCode], model: &ShotModel, nus_hz: &[f64]) -> Table {
    let nus: Vec<f64> = nus_hz.iter().map(|&f| angular(f)).collect();
    let curves: Vec<_> = codes.iter().map(|c| qec_load_vs_nu(c, &model.measurement, &nus)).collect();
    let mut columns = vec!["nu_hz".to_string()];
    columns.extend(codes.iter().map(code_column));
    let mut t = Table::new(columns);
    for (i, &f) in nus_hz.iter().enumerate() {
        let mut row = vec![f.into()];
        row.extend(curves.iter().map(|c| c[i].load_per_round.into()));
        t.push(row);
    }
    t
}

pub fn plan(cfg: &RunConfig) -> CliResult<Vec<Artifact>> {
    let (model, low, high) = regime_pair(cfg)?;
    let cmp = regime_comparison(&low, &high)?;
    let r = &cfg.runtime;
    let scheme = cfg.gate_scheme()?;
    let regime = |spec: &RegimeSpec, o: &RegimeOutcome| -> CliResult<serde_json::Value> {
        let terms = spec.cooling_time_terms(o.budget.total());
        // the exponential mode has no answer when the target sits below the steady state
        let single = laser_cooling_time(
            o.cooling_load,
            o.cooling_rate,
            spec.target_nbar,
            o.steady_nbar,
            o.cooling_load,
            r.mode,
        )
        .ok();
        Ok(json!({
            "nu_hz": ordinary(o.nu),
            "shot_budget": o.budget,
            "shot_total_s": o.budget.total(),
            "cooling_load": o.cooling_load,
            "cooling_rate_per_s": o.cooling_rate,
            "steady_nbar": o.steady_nbar,
            "target_reachable": o.target_reachable,
            "cooling_time_terms": terms,
            "cooling_time_mode": r.mode,
            "single_pass_cooling_time_s": single,
            "transport_time_s": transport_time(r.transport_reference_time_s, model.nu_ref, o.nu, r.transport_exponent)?,
            "gate_time_s": gate_time_scaling(scheme, r.gate_reference_time_s, model.nu_ref, o.nu)?,
        }))
    };
    let codes = cfg.codes()?;
    let nus = qec_nus(cfg)?;
    let report = json!({
        "species": model.species.name,
        "cooling_scattering_rate_per_s": model.cooling_scattering_rate,
        "target_nbar": model.target_nbar,
        "gate_scheme": scheme,
        "low": regime(&low, &cmp.low)?,
        "high": regime(&high, &cmp.high)?,
        "ratios": comparison_json(&cmp),
    });
    Ok(vec![
        Artifact::table("plan_budget", budget_table(&[&cmp.low, &cmp.high])),
        Artifact::json("plan", report)?,
        Artifact::table("plan_qec_curve", qec_table(&codes, &model, &nus)),
    ])
}

pub fn qec_summary(codes: &[QECCode], model: &ShotModel) -> serde_json::Value {
    let at_30 = angular(30e6);
    let entries: Vec<_> = codes
        .iter()
        .map(|c| {
            let quoted = QUOTED_LOAD_PER_ROUND_30_MHZ
                .iter()
                .find(|(q, _)| q.n_physical == c.n_physical && q.k_logical == c.k_logical && q.distance == c.distance)
                .map(|(_, v)| *v);
            let load_30 = qec_cooling_load(c, model.measurement.nbar_per_detection(at_30)) / f64::from(c.rounds);
            json!({
                "code": c.label(),
                "rounds": c.rounds,
                "syndromes_per_round": c.syndromes(),
                "load_at_calibration": qec_cooling_load(c, model.measurement.nbar_per_detection_ref),
                "load_per_round_30_mhz": load_30,
                "quoted_load_per_round_30_mhz": quoted,
            })
        })
        .collect();
    json!({
        "nbar_per_detection_ref": model.measurement.nbar_per_detection_ref,
        "nu_ref_hz": ordinary(model.measurement.nu_ref),
        "codes": entries,
    })
}

pub fn qec(cfg: &RunConfig) -> CliResult<Vec<Artifact>> {
    let model = cfg.shot_model()?;
    let codes = cfg.codes()?;
    if codes.is_empty() {
        return Err(CliError::config("runtime.codes is empty"));
    }
    let nus = qec_nus(cfg)?;
    Ok(vec![
        Artifact::table("qec_load", qec_table(&codes, &model, &nus)),
        Artifact::json("qec_summary", qec_summary(&codes, &model))?,
    ])
}
