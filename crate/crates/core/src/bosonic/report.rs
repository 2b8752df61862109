//! Cat-state preparation and idling fidelity versus motional frequency.
//!
//! Preparation is an ideal unitary taking |0⟩ to the cat, applied to the
//! thermal initial state, followed by decoherence over a preparation window.
//! The window is a single calibration constant shared by every frequency.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::fidelity::{fidelity_to_pure, FidelityConvention};
use super::lindblad::{evolve_lindblad, DecoherenceRates, LindbladOptions};
use super::state::{cat_ket, FockDensityMatrix, DEFAULT_N_MAX};
use crate::constants::angular;
use crate::error::{invalid, require_non_negative, require_positive, Result};

/// Preparation fidelity at the reference frequency that pins the preparation window.
pub const CALIBRATION_PREP_FIDELITY: f64 = 0.895;
/// Preparation window obtained by [`calibrate_prep_window`] for α = 3 and [`baseline_rates`].
pub const DEFAULT_PREP_WINDOW: f64 = 64.514e-6;

/// 100 quanta/s heating, 10 /s dephasing and n̄ = 0.1 at 2π×1 MHz.
pub fn baseline_rates() -> DecoherenceRates {
    DecoherenceRates {
        heating: 100.0,
        dephasing: 10.0,
        initial_thermal_nbar: 0.1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CatReportConfig {
    pub n_max: usize,
    /// s
    pub prep_time: f64,
    /// Frequency the baseline rates refer to, rad/s.
    pub nu_ref: f64,
    pub convention: FidelityConvention,
    pub lindblad: LindbladOptions,
}

impl Default for CatReportConfig {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            prep_time: DEFAULT_PREP_WINDOW,
            nu_ref: angular(1e6),
            convention: FidelityConvention::Root,
            lindblad: LindbladOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CatReport {
    /// rad/s
    pub nu: f64,
    pub prep_fidelity: f64,
    pub idle_fidelity: f64,
    /// Rates after scaling to `nu`.
    pub rates: DecoherenceRates,
}

/// Baseline rates moved from `nu_ref` to `nu`: heating ∝ 1/ν², dephasing ∝ 1/ν,
/// thermal spread ∝ 1/ν² capped by (Γ/2ν)².
pub fn scaled_rates(baseline: &DecoherenceRates, nu: f64, nu_ref: f64, gamma: f64) -> DecoherenceRates {
    let r = nu_ref / nu;
    let cap = (gamma / (2.0 * nu)) * (gamma / (2.0 * nu));
    DecoherenceRates {
        heating: baseline.heating * r * r,
        dephasing: baseline.dephasing * r,
        initial_thermal_nbar: (baseline.initial_thermal_nbar * r * r).min(cap),
    }
}

/// Householder reflection I − 2ww†/(w†w) with w = |0⟩ − |ψ⟩, mapping |0⟩ to |ψ⟩
/// for normalised ψ with real ⟨0|ψ⟩.
pub fn preparation_unitary(target: &[Complex64]) -> DMatrix<Complex64> {
    let dim = target.len();
    let mut w = DVector::from_iterator(dim, target.iter().map(|z| -z));
    w[0] += Complex64::new(1.0, 0.0);
    let norm = w.norm_squared();
    let mut u = DMatrix::identity(dim, dim);
    if norm > 0.0 {
        u -= (&w * w.adjoint()) * Complex64::new(2.0 / norm, 0.0);
    }
    u
}

struct Prepared {
    target: Vec<Complex64>,
    initial: FockDensityMatrix,
}

fn prepare(alpha: Complex64, rates: &DecoherenceRates, n_max: usize) -> Result<Prepared> {
    // rotate so that ⟨0|cat⟩ is real and positive; |cat⟩ is unchanged up to a phase
    let mut target = cat_ket(alpha, n_max)?;
    let phase = target[0].arg();
    let rot = Complex64::from_polar(1.0, -phase);
    target.iter_mut().for_each(|z| *z *= rot);
    let thermal = FockDensityMatrix::thermal(rates.initial_thermal_nbar, n_max)?;
    let initial = thermal.transformed(&preparation_unitary(&target));
    Ok(Prepared { target, initial })
}

fn check_inputs(alpha: Complex64, nu: f64, config: &CatReportConfig) -> Result<()> {
    require_positive("nu", nu)?;
    require_non_negative("prep_time", config.prep_time)?;
    require_positive("nu_ref", config.nu_ref)?;
    if !(alpha.re.is_finite() && alpha.im.is_finite()) || alpha.norm() == 0.0 {
        return Err(invalid("alpha", "must be finite and non-zero"));
    }
    Ok(())
}

pub fn cat_preparation_report(
    alpha: Complex64,
    nu: f64,
    baseline: &DecoherenceRates,
    gamma: f64,
    idle_time: f64,
    config: &CatReportConfig,
) -> Result<CatReport> {
    check_inputs(alpha, nu, config)?;
    require_non_negative("idle_time", idle_time)?;
    baseline.validate()?;
    let rates = scaled_rates(baseline, nu, config.nu_ref, gamma);
    let prep = prepare(alpha, &rates, config.n_max)?;
    let prepared = evolve_lindblad(&prep.initial, &rates, config.prep_time, &config.lindblad)?;
    let idled = evolve_lindblad(&prepared, &rates, idle_time, &config.lindblad)?;
    Ok(CatReport {
        nu,
        prep_fidelity: config.convention.apply(fidelity_to_pure(&prepared, &prep.target)?),
        idle_fidelity: config.convention.apply(fidelity_to_pure(&idled, &prep.target)?),
        rates,
    })
}

/// Preparation window for which the reference-frequency preparation fidelity equals `target`.
pub fn calibrate_prep_window(
    alpha: Complex64,
    baseline: &DecoherenceRates,
    gamma: f64,
    target: f64,
    config: &CatReportConfig,
) -> Result<f64> {
    check_inputs(alpha, config.nu_ref, config)?;
    let rates = scaled_rates(baseline, config.nu_ref, config.nu_ref, gamma);
    let prep = prepare(alpha, &rates, config.n_max)?;
    let fidelity = |t: f64| -> Result<f64> {
        let rho = evolve_lindblad(&prep.initial, &rates, t, &config.lindblad)?;
        Ok(config.convention.apply(fidelity_to_pure(&rho, &prep.target)?))
    };
    if fidelity(0.0)? < target {
        return Err(invalid(
            "target",
            "thermal spread alone already gives a lower preparation fidelity",
        ));
    }
    let mut hi = 1e-6;
    while fidelity(hi)? > target {
        hi *= 2.0;
        if hi > 1.0 {
            return Err(invalid("target", "not reached within one second of decoherence"));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if fidelity(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
