//! Cartesian sweeps of one or two configuration keys against a scalar observable.

use ionfreq_core::bosonic::cat_preparation_report;
use ionfreq_core::constants::{angular, ordinary};
use ionfreq_core::cooling::{cooling_rate, lamb_dicke, rate_coefficients, steady_state_nbar};
use ionfreq_core::grid::samples;
use ionfreq_core::noise::{
    anomalous_heating_rate, dephasing_rate, detection_excitation_probability, recoil_heating_rate, spectral_density,
};
use ionfreq_core::runtime::{qec_cooling_load, regime_comparison};
use ionfreq_core::trap::{omega_from_nu_and_q, solve_design, TrapConfig};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{RunConfig, SweepAxis};
use crate::error::{CliError, CliResult};
use crate::output::{Artifact, Table};

type Observable = fn(&RunConfig) -> CliResult<f64>;

/// Forward trap from the drive parameters; without an rf frequency, Ω is chosen
/// so that q equals `trap.grid.q`.
fn forward_trap(cfg: &RunConfig) -> CliResult<TrapConfig> {
    if cfg.trap.rf_frequency_hz.is_some() {
        return cfg.trap_config();
    }
    let t = &cfg.trap;
    let missing = |k: &str| CliError::config(format!("missing required key `trap.{k}`"));
    let v0 = t.rf_amplitude_v.ok_or_else(|| missing("rf_amplitude_v"))?;
    let r0 = t.ion_electrode_distance_m.ok_or_else(|| missing("ion_electrode_distance_m"))?;
    let species = cfg.species()?;
    let factor = if t.differential_drive { 2.0 } else { 1.0 };
    let omega = (2.0 * species.charge_to_mass() * factor * v0 / (t.grid.q * r0 * r0)).sqrt();
    Ok(TrapConfig::new(species, v0, omega, r0, t.differential_drive)?)
}

fn designed(cfg: &RunConfig) -> CliResult<TrapConfig> {
    let target = cfg
        .design_target()?
        .ok_or_else(|| CliError::config("observable needs a `trap.design` block"))?;
    Ok(solve_design(&target)?)
}

fn noise_point(cfg: &RunConfig) -> CliResult<(f64, f64, f64)> {
    let spec = cfg.anomalous_spec()?;
    Ok((
        angular(cfg.noise.nu_hz),
        cfg.noise.r0_m.unwrap_or(spec.r0_ref),
        cfg.noise.temperature_k.unwrap_or(spec.t_ref),
    ))
}

fn cat_point(cfg: &RunConfig) -> CliResult<ionfreq_core::bosonic::CatReport> {
    let b = &cfg.bosonic;
    let mut config = cfg.cat_config();
    config.prep_time = crate::commands::prep_window(cfg)?;
    Ok(cat_preparation_report(
        cfg.alpha(),
        angular(b.nu_hz),
        &cfg.baseline_rates()?,
        angular(b.gamma_hz),
        b.idle_time_s,
        &config,
    )?)
}

fn comparison(cfg: &RunConfig) -> CliResult<ionfreq_core::runtime::RegimeComparison> {
    let (_, low, high) = crate::commands::regime_pair(cfg)?;
    Ok(regime_comparison(&low, &high)?)
}

fn first_code_load(cfg: &RunConfig) -> CliResult<f64> {
    let model = cfg.shot_model()?;
    let code = *cfg
        .codes()?
        .first()
        .ok_or_else(|| CliError::config("runtime.codes is empty"))?;
    let n = model.measurement.nbar_per_detection(angular(cfg.runtime.high_nu_hz));
    Ok(qec_cooling_load(&code, n))
}

pub const OBSERVABLES: &[(&str, Observable)] = &[
    ("nu_hz", |c| Ok(ordinary(forward_trap(c)?.secular().secular_frequency))),
    ("q", |c| Ok(forward_trap(c)?.secular().micromotion_q)),
    ("rf_frequency_for_q_hz", |c| {
        let nu = c.cooling.nu_hz.ok_or_else(|| CliError::config("missing `cooling.nu_hz`"))?;
        Ok(ordinary(omega_from_nu_and_q(angular(nu), c.trap.grid.q)))
    }),
    ("design_rf_amplitude_v", |c| Ok(designed(c)?.rf_amplitude)),
    ("design_rf_frequency_hz", |c| Ok(ordinary(designed(c)?.rf_frequency))),
    ("design_ion_electrode_distance_m", |c| Ok(designed(c)?.ion_electrode_distance)),
    ("lamb_dicke", |c| Ok(c.cooling_setup()?.lamb_dicke)),
    ("species_lamb_dicke", |c| Ok(lamb_dicke(&c.species()?, angular(c.noise.nu_hz)))),
    ("a_plus", |c| Ok(rate_coefficients(&c.cooling_setup()?).a_plus)),
    ("a_minus", |c| Ok(rate_coefficients(&c.cooling_setup()?).a_minus)),
    ("cooling_rate", |c| Ok(cooling_rate(&c.cooling_setup()?))),
    ("steady_state_nbar", |c| {
        Ok(steady_state_nbar(&c.cooling_setup()?, c.cooling.anomalous_rate_per_s)?)
    }),
    ("spectral_density", |c| {
        let (nu, r0, t) = noise_point(c)?;
        Ok(spectral_density(&c.anomalous_spec()?, nu, r0, t))
    }),
    ("anomalous_heating_rate", |c| {
        let (nu, r0, t) = noise_point(c)?;
        Ok(anomalous_heating_rate(&c.anomalous_spec()?, &c.species()?, nu, r0, t))
    }),
    ("recoil_heating_rate", |c| {
        let s = c.cooling_setup()?;
        Ok(recoil_heating_rate(&s))
    }),
    ("dephasing_rate", |c| Ok(dephasing_rate(&c.dephasing_spec(), angular(c.noise.nu_hz)))),
    ("nbar_per_detection", |c| {
        Ok(c.measurement_spec(angular(20e6))?.nbar_per_detection(angular(c.noise.nu_hz)))
    }),
    ("detection_excitation_probability", |c| {
        let m = c.measurement_spec(angular(20e6))?;
        Ok(detection_excitation_probability(&m, angular(c.noise.nu_hz)))
    }),
    ("prep_fidelity", |c| Ok(cat_point(c)?.prep_fidelity)),
    ("idle_fidelity", |c| Ok(cat_point(c)?.idle_fidelity)),
    ("cooling_load_ratio", |c| Ok(comparison(c)?.cooling_load_ratio)),
    ("runtime_ratio", |c| Ok(comparison(c)?.runtime_ratio)),
    ("cooling_time_ratio", |c| Ok(comparison(c)?.cooling_time_ratio)),
    ("shot_total_s", |c| Ok(comparison(c)?.high.budget.total())),
    ("laser_cooling_time_s", |c| Ok(comparison(c)?.high.budget.t_laser_cool)),
    ("cooling_load", |c| Ok(comparison(c)?.high.cooling_load)),
    ("qec_load", first_code_load),
];

pub fn observable_names() -> Vec<&'static str> {
    OBSERVABLES.iter().map(|(n, _)| *n).collect()
}

fn lookup_observable(name: &str) -> CliResult<Observable> {
    OBSERVABLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| *f)
        .ok_or_else(|| {
            CliError::config(format!(
                "unknown observable `{name}`; available: {}",
                observable_names().join(", ")
            ))
        })
}

/// Location of a dotted key; the key must already exist and hold a number or null.
fn slot<'a>(root: &'a mut Value, path: &str) -> CliResult<&'a mut Value> {
    let mut node = root;
    for key in path.split('.') {
        node = node
            .as_object_mut()
            .and_then(|o| o.get_mut(key))
            .ok_or_else(|| CliError::config(format!("unknown sweep parameter `{path}`")))?;
    }
    if node.is_number() || node.is_null() {
        Ok(node)
    } else {
        Err(CliError::config(format!("sweep parameter `{path}` is not numeric")))
    }
}

fn with_values(base: &Value, template: &RunConfig, axes: &[SweepAxis], values: &[f64]) -> CliResult<RunConfig> {
    let mut v = base.clone();
    for (axis, &x) in axes.iter().zip(values) {
        let target = slot(&mut v, &axis.parameter)?;
        let integral = target.as_u64().is_some() || target.as_i64().is_some();
        *target = if integral {
            Value::from(x.round() as i64)
        } else {
            serde_json::Number::from_f64(x)
                .map(Value::Number)
                .ok_or_else(|| CliError::config("sweep value is not finite"))?
        };
    }
    let mut cfg: RunConfig =
        serde_json::from_value(v).map_err(|e| CliError::config(format!("sweep produced an invalid config: {e}")))?;
    cfg.base_dir = template.base_dir.clone();
    Ok(cfg)
}

/// Serialised form in which every optional key is present, so that unset
/// defaults can still be swept.
fn sweepable(cfg: &RunConfig) -> CliResult<Value> {
    let mut v = serde_json::to_value(cfg)?;
    v.as_object_mut().map(|o| o.remove("sweep"));
    Ok(v)
}

pub fn sweep(cfg: &RunConfig) -> CliResult<Vec<Artifact>> {
    let block = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("missing `[sweep]` block"))?;
    if block.axes.is_empty() || block.axes.len() > 2 {
        return Err(CliError::config("sweep needs one or two axes"));
    }
    let observable = lookup_observable(&block.observable)?;
    let base = sweepable(cfg)?;
    let mut grids = Vec::new();
    for axis in &block.axes {
        if axis.points == 0 {
            return Err(CliError::config(format!("sweep axis `{}` is empty", axis.parameter)));
        }
        slot(&mut base.clone(), &axis.parameter)?;
        grids.push(samples(axis.start, axis.stop, axis.points, axis.spacing)?);
    }
    let points: Vec<Vec<f64>> = match grids.as_slice() {
        [a] => a.iter().map(|&x| vec![x]).collect(),
        [a, b] => a.iter().flat_map(|&x| b.iter().map(move |&y| vec![x, y])).collect(),
        _ => unreachable!("axis count checked above"),
    };
    let values: Vec<f64> = points
        .par_iter()
        .map(|p| with_values(&base, cfg, &block.axes, p).and_then(|c| observable(&c)))
        .collect::<CliResult<_>>()?;
    let mut columns: Vec<String> = block.axes.iter().map(|a| a.parameter.clone()).collect();
    columns.push(block.observable.clone());
    let mut table = Table::new(columns);
    for (p, v) in points.iter().zip(values) {
        let mut row: Vec<_> = p.iter().map(|&x| x.into()).collect();
        row.push(v.into());
        table.push(row);
    }
    Ok(vec![Artifact::table("sweep", table)])
}
