//! Anomalous heating, measurement recoil heating and motional dephasing.

use crate::constants::{angular, ATOMIC_MASS_UNIT, DEFAULT_LINEWIDTH, ELEMENTARY_CHARGE, REDUCED_PLANCK};
use crate::cooling::{rate_coefficients, CoolingSetup};
use crate::error::{require_non_negative, require_positive, Result};
use crate::species::IonSpecies;

/// Electric-field noise S_E = s0 (ν/ν_ref)^−α (r0/r0_ref)^−β (T/T_ref)^γ_T.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AnomalousNoiseSpec {
    /// (V/m)²/Hz at the reference point
    pub s0: f64,
    /// rad/s
    pub nu_ref: f64,
    /// m
    pub r0_ref: f64,
    /// K
    pub t_ref: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma_t: f64,
}

/// Heating rate the default noise spec produces at its reference point.
pub const REFERENCE_HEATING_RATE: f64 = 1000.0;
/// Mass the default calibration refers to (a heavy ion, 171 amu).
pub const REFERENCE_MASS_AMU: f64 = 171.0;

impl AnomalousNoiseSpec {
    /// Picks s0 so that a singly charged ion of `mass` heats at `rate` quanta/s at the reference point.
    pub fn calibrated(rate: f64, mass: f64, nu_ref: f64, r0_ref: f64, t_ref: f64) -> Result<Self> {
        require_non_negative("rate", rate)?;
        require_positive("mass", mass)?;
        require_positive("nu_ref", nu_ref)?;
        let e = ELEMENTARY_CHARGE;
        let spec = Self {
            s0: rate * 4.0 * mass * REDUCED_PLANCK * nu_ref / (e * e),
            nu_ref,
            r0_ref,
            t_ref,
            alpha: 1.0,
            beta: 4.0,
            gamma_t: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("s0", self.s0)?;
        require_positive("nu_ref", self.nu_ref)?;
        require_positive("r0_ref", self.r0_ref)?;
        require_positive("t_ref", self.t_ref)?;
        for (name, x) in [("alpha", self.alpha), ("beta", self.beta), ("gamma_t", self.gamma_t)] {
            if !x.is_finite() {
                return Err(crate::error::invalid(name, "must be finite"));
            }
        }
        Ok(())
    }
}

impl Default for AnomalousNoiseSpec {
    /// 1000 quanta/s for a 171 amu ion at 2π×1 MHz, 100 µm and 300 K.
    fn default() -> Self {
        Self::calibrated(
            REFERENCE_HEATING_RATE,
            REFERENCE_MASS_AMU * ATOMIC_MASS_UNIT,
            angular(1e6),
            100e-6,
            300.0,
        )
        .expect("default calibration is valid")
    }
}

pub fn spectral_density(spec: &AnomalousNoiseSpec, nu: f64, r0: f64, temperature: f64) -> f64 {
    spec.s0
        * libm::pow(nu / spec.nu_ref, -spec.alpha)
        * libm::pow(r0 / spec.r0_ref, -spec.beta)
        * libm::pow(temperature / spec.t_ref, spec.gamma_t)
}

/// ṅ_an = Q² S_E(ν) / (4 m ħ ν), quanta/s.
pub fn anomalous_heating_rate(
    spec: &AnomalousNoiseSpec,
    species: &IonSpecies,
    nu: f64,
    r0: f64,
    temperature: f64,
) -> f64 {
    let q = species.charge_coulomb();
    q * q * spectral_density(spec, nu, r0, temperature) / (4.0 * species.mass * REDUCED_PLANCK * nu)
}

/// Recoil heating during fluorescence detection: A+ with the laser on resonance.
pub fn recoil_heating_rate(setup: &CoolingSetup) -> f64 {
    rate_coefficients(&setup.with_detuning(0.0)).a_plus
}

/// Resolved-regime expansion η² R_sc [1 + (Γ/2ν)²] of [`recoil_heating_rate`].
pub fn recoil_heating_expansion(setup: &CoolingSetup) -> f64 {
    let x = setup.gamma / (2.0 * setup.nu);
    setup.lamb_dicke * setup.lamb_dicke * setup.scattering_rate() * (1.0 + x * x)
}

/// Recoil quanta deposited during one detection window of length `detect_time`.
pub fn recoil_quanta_per_detection(setup: &CoolingSetup, detect_time: f64) -> f64 {
    recoil_heating_rate(setup) * detect_time
}

/// Detection scattering rate for which one window of `detect_time` deposits `quanta`.
pub fn detection_scattering_rate(species: &IonSpecies, nu: f64, quanta: f64, detect_time: f64) -> Result<f64> {
    require_positive("quanta", quanta)?;
    require_positive("detect_time", detect_time)?;
    // A+ at Δ = 0 is linear in R_sc
    let unit = CoolingSetup::for_species(species, 1.0, 0.0, nu)?;
    Ok(quanta / (recoil_heating_rate(&unit) * detect_time))
}

/// Per-detection recoil load, calibrated at a reference frequency.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeasurementSpec {
    /// τ_m, s
    pub detect_time: f64,
    /// Quanta per detection at `nu_ref`.
    pub nbar_per_detection_ref: f64,
    /// rad/s
    pub nu_ref: f64,
    /// Include the (Γ/2ν)² sideband correction in the frequency scaling.
    pub use_resolved_correction: bool,
    /// Γ, rad/s; only used with the resolved correction.
    pub linewidth: f64,
}

impl Default for MeasurementSpec {
    fn default() -> Self {
        Self {
            detect_time: 100e-6,
            nbar_per_detection_ref: 11.0,
            nu_ref: angular(1e6),
            use_resolved_correction: false,
            linewidth: DEFAULT_LINEWIDTH,
        }
    }
}

impl MeasurementSpec {
    pub fn validate(&self) -> Result<()> {
        require_positive("detect_time", self.detect_time)?;
        require_positive("nbar_per_detection", self.nbar_per_detection_ref)?;
        require_positive("nu_ref", self.nu_ref)?;
        require_positive("linewidth", self.linewidth)
    }

    /// n̄_m(ν) = n̄_ref · ν_ref/ν, optionally with the sideband correction.
    pub fn nbar_per_detection(&self, nu: f64) -> f64 {
        let mut n = self.nbar_per_detection_ref * self.nu_ref / nu;
        if self.use_resolved_correction {
            let c = |v: f64| 1.0 + (self.linewidth / (2.0 * v)) * (self.linewidth / (2.0 * v));
            n *= c(nu) / c(self.nu_ref);
        }
        n
    }

    /// Mean recoil heating rate during the detection window, quanta/s.
    pub fn heating_rate(&self, nu: f64) -> f64 {
        self.nbar_per_detection(nu) / self.detect_time
    }
}

/// Probability that detection leaves the ion outside the ground state, treating
/// the post-detection distribution as thermal with mean n̄_m(ν).
pub fn detection_excitation_probability(meas: &MeasurementSpec, nu: f64) -> f64 {
    let n = meas.nbar_per_detection(nu);
    n / (1.0 + n)
}

/// Motional dephasing rate γ_φ(ν) = rate_ref · ν_ref/ν.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DephasingSpec {
    /// 1/s
    pub rate_ref: f64,
    /// rad/s
    pub nu_ref: f64,
}

impl Default for DephasingSpec {
    fn default() -> Self {
        Self {
            rate_ref: 20.0,
            nu_ref: angular(2e6),
        }
    }
}

pub fn dephasing_rate(spec: &DephasingSpec, nu: f64) -> f64 {
    spec.rate_ref * spec.nu_ref / nu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{log_log_slope, samples, Spacing};
    use crate::species::lookup_species;
    use crate::trap::TrapConfig;
    use alloc::vec::Vec;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn slope(xs: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        log_log_slope(xs, &ys)
    }

    #[test]
    fn spectral_density_scalings() {
        let s = AnomalousNoiseSpec::default();
        assert_eq!(spectral_density(&s, s.nu_ref, s.r0_ref, s.t_ref), s.s0);
        assert!(rel(spectral_density(&s, 2.0 * s.nu_ref, s.r0_ref, s.t_ref), s.s0 / 2.0) < 1e-12);
        assert!(rel(spectral_density(&s, s.nu_ref, s.r0_ref / 2.0, s.t_ref), 16.0 * s.s0) < 1e-12);
    }

    #[test]
    fn default_calibration_point() {
        let s = AnomalousNoiseSpec::default();
        let yb = lookup_species("Yb-171").unwrap();
        let rate = anomalous_heating_rate(&s, &yb, s.nu_ref, s.r0_ref, s.t_ref);
        assert!(rel(rate, 1000.0) < 1e-9);
        let doubled = anomalous_heating_rate(&s, &yb, 2.0 * s.nu_ref, s.r0_ref, s.t_ref);
        assert!(rel(doubled, 250.0) < 1e-9);
    }

    #[test]
    fn composite_heating_slopes() {
        let s = AnomalousNoiseSpec::default();
        let yb = lookup_species("Yb-171").unwrap();
        let grid = |lo: f64, hi: f64| samples(lo, hi, 9, Spacing::Log).unwrap();
        let nus = grid(s.nu_ref, 50.0 * s.nu_ref);
        assert!((slope(&nus, |nu| anomalous_heating_rate(&s, &yb, nu, s.r0_ref, s.t_ref)) + 2.0).abs() < 1e-6);
        let r0s = grid(30e-6, 1e-3);
        assert!((slope(&r0s, |r0| anomalous_heating_rate(&s, &yb, s.nu_ref, r0, s.t_ref)) + 4.0).abs() < 1e-6);
        let ts = grid(4.0, 300.0);
        assert!((slope(&ts, |t| anomalous_heating_rate(&s, &yb, s.nu_ref, s.r0_ref, t)) - 1.0).abs() < 1e-6);
        let ms = grid(9.0, 200.0);
        let per_mass = |amu: f64| {
            let ion = IonSpecies::from_atomic_data("x", amu, 1, 20e6, 370.0).unwrap();
            anomalous_heating_rate(&s, &ion, s.nu_ref, s.r0_ref, s.t_ref)
        };
        assert!((slope(&ms, per_mass) + 1.0).abs() < 1e-6);
    }

    #[test]
    fn electrode_distance_at_fixed_drive_leaves_heating_unchanged() {
        let s = AnomalousNoiseSpec::default();
        let be = lookup_species("Be-9").unwrap();
        let rate = |r0: f64| {
            let trap = TrapConfig::new(be.clone(), 280.0, angular(230e6), r0, true).unwrap();
            let nu = trap.secular().secular_frequency;
            anomalous_heating_rate(&s, &be, nu, r0, 300.0)
        };
        let base = rate(120e-6);
        for r0 in [130e-6, 150e-6, 200e-6, 240e-6] {
            assert!(rel(rate(r0), base) < 1e-9);
        }
    }

    #[test]
    fn charge_to_mass_pathway_gives_inverse_frequency() {
        let s = AnomalousNoiseSpec::default();
        let (nus, rates): (Vec<f64>, Vec<f64>) = [9.0, 25.0, 40.0, 88.0, 171.0]
            .iter()
            .map(|&amu| {
                let ion = IonSpecies::from_atomic_data("x", amu, 1, 20e6, 370.0).unwrap();
                let trap = TrapConfig::new(ion.clone(), 280.0, angular(230e6), 120e-6, true).unwrap();
                let nu = trap.secular().secular_frequency;
                (nu, anomalous_heating_rate(&s, &ion, nu, 120e-6, 300.0))
            })
            .unzip();
        assert!((log_log_slope(&nus, &rates) + 1.0).abs() < 1e-6);
    }

    fn detection(species: &IonSpecies, nu: f64) -> CoolingSetup {
        CoolingSetup::for_species(species, 1e6, 0.0, nu).unwrap()
    }

    #[test]
    fn recoil_is_the_symmetric_point() {
        let yb = lookup_species("Yb-171").unwrap();
        let s = detection(&yb, angular(2e6));
        let r = rate_coefficients(&s);
        assert!(rel(r.a_plus, r.a_minus) < 1e-15);
        assert_eq!(recoil_heating_rate(&s), r.a_plus);
    }

    #[test]
    fn recoil_expansion_gap() {
        // the exact rate sits just below the two-term expansion in the resolved regime
        let g = angular(20e6);
        for x in [2.5, 5.0, 10.0, 40.0] {
            let s = CoolingSetup::new(g, 0.1 * g, 0.0, 0.05, x * g).unwrap();
            let exact = recoil_heating_rate(&s);
            let approx = recoil_heating_expansion(&s);
            assert!(exact <= approx);
            assert!((approx - exact) / exact <= 0.05);
        }
    }

    #[test]
    fn recoil_falls_inversely_with_frequency() {
        let be = lookup_species("Be-9").unwrap();
        let lo = recoil_heating_rate(&detection(&be, angular(50e6)));
        let hi = recoil_heating_rate(&detection(&be, angular(500e6)));
        let ratio = lo / hi;
        let g = be.linewidth;
        let corr = |nu: f64| {
            let x = g / (2.0 * nu);
            1.0 + x * x / (1.0 + x * x)
        };
        assert!(rel(ratio, 10.0 * corr(angular(50e6)) / corr(angular(500e6))) < 1e-12);
        assert!((9.5..=11.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn heavy_ion_detection_calibration() {
        let yb = lookup_species("Yb-171").unwrap();
        let nu = angular(1e6);
        let meas = MeasurementSpec::default();
        let rsc = detection_scattering_rate(&yb, nu, 11.0, meas.detect_time).unwrap();
        let s = CoolingSetup::for_species(&yb, rsc, 0.0, nu).unwrap();
        assert!(rel(recoil_quanta_per_detection(&s, meas.detect_time), 11.0) < 1e-12);
    }

    #[test]
    fn excitation_probability_points() {
        let m = MeasurementSpec::default();
        let p2 = detection_excitation_probability(&m, angular(2e6));
        let p30 = detection_excitation_probability(&m, angular(30e6));
        assert!((p2 - 0.846).abs() < 5e-4, "{p2}");
        assert!((p30 - 0.268).abs() < 5e-4, "{p30}");
        assert!((p2 - 0.85).abs() <= 0.02 && (p30 - 0.25).abs() <= 0.02);
        assert!(detection_excitation_probability(&m, 1e15) < 1e-6);
        let mut last = 1.0;
        for i in 1..200 {
            let p = detection_excitation_probability(&m, angular(0.5e6 * i as f64));
            assert!(p < last && (0.0..1.0).contains(&p));
            last = p;
        }
    }

    #[test]
    fn resolved_correction_keeps_calibration_point() {
        let m = MeasurementSpec {
            use_resolved_correction: true,
            ..MeasurementSpec::default()
        };
        assert!(rel(m.nbar_per_detection(m.nu_ref), 11.0) < 1e-12);
        assert!(m.nbar_per_detection(angular(30e6)) < MeasurementSpec::default().nbar_per_detection(angular(30e6)));
    }

    #[test]
    fn dephasing_scaling() {
        let d = DephasingSpec::default();
        assert!(rel(dephasing_rate(&d, angular(50e6)), 0.8) < 1e-12);
        assert_eq!(dephasing_rate(&d, d.nu_ref), d.rate_ref);
        assert!(rel(dephasing_rate(&d, 10.0 * d.nu_ref), d.rate_ref / 10.0) < 1e-12);
    }
}
