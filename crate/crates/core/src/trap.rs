//! Linear rf (Paul) trap in the pseudopotential approximation.
//!
//! Axial confinement is neglected throughout: the radial secular frequency
//! follows from the rf drive alone.
//!
//! `differential_drive` selects an antisymmetric two-phase drive (in-phase on
//! one diagonal electrode pair, out-of-phase on the other), which doubles the
//! effective voltage across the quadrupole. With the flag cleared the
//! micromotion amplitude is `2 Q V0 / (m Ω² r0²)` evaluated literally.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::constants::{ADIABATIC_LIMIT_Q, STABILITY_LIMIT_Q};
use crate::error::{require_positive, Error, Result};
use crate::grid::{samples, Spacing};
use crate::species::IonSpecies;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TrapConfig {
    pub species: IonSpecies,
    /// V0, V
    pub rf_amplitude: f64,
    /// Ω_rf, rad/s
    pub rf_frequency: f64,
    /// r0, m
    pub ion_electrode_distance: f64,
    pub differential_drive: bool,
}

impl TrapConfig {
    pub fn new(
        species: IonSpecies,
        rf_amplitude: f64,
        rf_frequency: f64,
        ion_electrode_distance: f64,
        differential_drive: bool,
    ) -> Result<Self> {
        require_positive("rf_amplitude", rf_amplitude)?;
        require_positive("rf_frequency", rf_frequency)?;
        require_positive("ion_electrode_distance", ion_electrode_distance)?;
        Ok(Self {
            species,
            rf_amplitude,
            rf_frequency,
            ion_electrode_distance,
            differential_drive,
        })
    }

    pub fn effective_voltage(&self) -> f64 {
        drive_factor(self.differential_drive) * self.rf_amplitude
    }

    pub fn secular(&self) -> SecularParams {
        SecularParams {
            secular_frequency: secular_frequency(self),
            micromotion_q: micromotion_amplitude(self),
        }
    }
}

fn drive_factor(differential: bool) -> f64 {
    if differential {
        2.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SecularParams {
    /// ν, rad/s
    pub secular_frequency: f64,
    pub micromotion_q: f64,
}

/// q = 2 Q V_eff / (m Ω² r0²).
pub fn micromotion_amplitude(cfg: &TrapConfig) -> f64 {
    2.0 * cfg.species.charge_to_mass() * cfg.effective_voltage()
        / (cfg.rf_frequency * cfg.rf_frequency * cfg.ion_electrode_distance * cfg.ion_electrode_distance)
}

/// ν = Q V_eff / (√2 m r0² Ω).
pub fn secular_frequency(cfg: &TrapConfig) -> f64 {
    cfg.species.charge_to_mass() * cfg.effective_voltage()
        / (SQRT_2 * cfg.ion_electrode_distance * cfg.ion_electrode_distance * cfg.rf_frequency)
}

/// ν = q Ω / (2√2).
pub fn nu_from_q_and_omega(q: f64, omega: f64) -> f64 {
    q * omega / (2.0 * SQRT_2)
}

/// Ω = 2√2 ν / q.
pub fn omega_from_nu_and_q(nu: f64, q: f64) -> f64 {
    2.0 * SQRT_2 * nu / q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct StabilityVerdict {
    /// q > 0: there is any confinement at all.
    pub trapped: bool,
    /// 0 < q < 0.908.
    pub stable: bool,
    /// q² ≪ 1, taken as q ≤ 0.4.
    pub adiabatic: bool,
}

pub fn check_stability(q: f64) -> StabilityVerdict {
    let trapped = q > 0.0;
    let stable = trapped && q < STABILITY_LIMIT_Q;
    StabilityVerdict {
        trapped,
        stable,
        // solved designs land on the limit up to rounding
        adiabatic: stable && q <= ADIABATIC_LIMIT_Q * (1.0 + 1e-12),
    }
}

/// First-order radial trajectory u(t) = u0 cos(νt − φ) (1 + (q/2) cos(Ω t)).
pub fn first_order_trajectory(cfg: &TrapConfig, u0: f64, phi: f64, t: f64) -> Result<f64> {
    let SecularParams {
        secular_frequency: nu,
        micromotion_q: q,
    } = cfg.secular();
    if !check_stability(q).stable {
        return Err(Error::Unstable { q });
    }
    Ok(u0 * libm::cos(nu * t - phi) * (1.0 + 0.5 * q * libm::cos(cfg.rf_frequency * t)))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Bounds {
    pub min: f64,
    pub max: f64,
}

impl Bounds {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, x: f64) -> bool {
        // 1e-12 relative slack so that values sitting on a bound pass
        let slack = 1e-12 * self.max.abs().max(self.min.abs());
        x >= self.min - slack && x <= self.max + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DesignBounds {
    pub rf_amplitude: Bounds,
    pub rf_frequency: Bounds,
    pub ion_electrode_distance: Bounds,
}

impl Default for DesignBounds {
    fn default() -> Self {
        Self {
            rf_amplitude: Bounds::new(1.0, 5.0e3),
            rf_frequency: Bounds::new(0.0, f64::INFINITY),
            ion_electrode_distance: Bounds::new(30.0e-6, 1.0e-3),
        }
    }
}

/// Species selection for [`solve_design`]: a fixed species, or candidates to choose from.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum SpeciesChoice {
    Fixed(IonSpecies),
    Candidates(Vec<IonSpecies>),
}

/// Requested (ν, q) plus any drive parameters held fixed.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DesignTarget {
    /// rad/s
    pub target_nu: f64,
    pub target_q: f64,
    pub species: SpeciesChoice,
    pub rf_amplitude: Option<f64>,
    pub rf_frequency: Option<f64>,
    pub ion_electrode_distance: Option<f64>,
    pub differential_drive: bool,
    pub bounds: DesignBounds,
}

impl DesignTarget {
    pub fn new(target_nu: f64, target_q: f64, species: IonSpecies) -> Self {
        Self {
            target_nu,
            target_q,
            species: SpeciesChoice::Fixed(species),
            rf_amplitude: None,
            rf_frequency: None,
            ion_electrode_distance: None,
            differential_drive: true,
            bounds: DesignBounds::default(),
        }
    }

    pub fn with_rf_amplitude(mut self, v0: f64) -> Self {
        self.rf_amplitude = Some(v0);
        self
    }

    pub fn with_ion_electrode_distance(mut self, r0: f64) -> Self {
        self.ion_electrode_distance = Some(r0);
        self
    }

    pub fn with_rf_frequency(mut self, omega: f64) -> Self {
        self.rf_frequency = Some(omega);
        self
    }
}

/// Inverse design: fixes Ω from (ν, q), then balances V0 against r0 to meet q.
///
/// When both V0 and r0 are free the lowest V0 allowed by the r0 bounds is taken.
/// With candidate species, the candidate giving the lowest V0 wins.
pub fn solve_design(target: &DesignTarget) -> Result<TrapConfig> {
    require_positive("target_nu", target.target_nu)?;
    let q = target.target_q;
    if !check_stability(q).stable {
        return Err(Error::InfeasibleDesign(format!(
            "micromotion amplitude outside stability interval (0, {STABILITY_LIMIT_Q}): q = {q}"
        )));
    }
    let omega = omega_from_nu_and_q(target.target_nu, q);
    if let Some(fixed) = target.rf_frequency {
        if ((fixed - omega) / omega).abs() > 1e-9 {
            return Err(Error::InfeasibleDesign(format!(
                "fixed rf frequency {fixed:e} rad/s conflicts with the {omega:e} rad/s required by nu and q"
            )));
        }
    }
    if !target.bounds.rf_frequency.contains(omega) {
        return Err(Error::InfeasibleDesign(format!(
            "rf frequency {omega:e} rad/s outside bounds [{:e}, {:e}]",
            target.bounds.rf_frequency.min, target.bounds.rf_frequency.max
        )));
    }

    match &target.species {
        SpeciesChoice::Fixed(species) => solve_for_species(target, species, omega),
        SpeciesChoice::Candidates(list) => {
            let mut best: Option<TrapConfig> = None;
            let mut last_err = Error::InfeasibleDesign("no candidate species given".into());
            for species in list {
                match solve_for_species(target, species, omega) {
                    Ok(cfg) => {
                        if best.as_ref().is_none_or(|b| cfg.rf_amplitude < b.rf_amplitude) {
                            best = Some(cfg);
                        }
                    }
                    Err(e) => last_err = e,
                }
            }
            best.ok_or(last_err)
        }
    }
}

fn solve_for_species(target: &DesignTarget, species: &IonSpecies, omega: f64) -> Result<TrapConfig> {
    let q = target.target_q;
    let factor = drive_factor(target.differential_drive);
    // V_eff / r0² that yields the requested q
    let ratio = q * omega * omega / (2.0 * species.charge_to_mass());
    let bounds = &target.bounds;

    let (v0, r0) = match (target.rf_amplitude, target.ion_electrode_distance) {
        (Some(v0), Some(r0)) => {
            let needed = ratio * r0 * r0 / factor;
            if ((needed - v0) / v0).abs() > 1e-9 {
                return Err(Error::InfeasibleDesign(format!(
                    "{}: fixed V0 = {v0} V and r0 = {r0:e} m give q = {:.6}, not {q}",
                    species.name,
                    q * v0 / needed
                )));
            }
            (v0, r0)
        }
        (Some(v0), None) => {
            require_positive("rf_amplitude", v0)?;
            (v0, libm::sqrt(factor * v0 / ratio))
        }
        (None, Some(r0)) => {
            require_positive("ion_electrode_distance", r0)?;
            (ratio * r0 * r0 / factor, r0)
        }
        (None, None) => {
            let r_min = bounds.ion_electrode_distance.min;
            let mut r0 = r_min;
            let mut v0 = ratio * r0 * r0 / factor;
            if v0 < bounds.rf_amplitude.min {
                v0 = bounds.rf_amplitude.min;
                r0 = libm::sqrt(factor * v0 / ratio);
            }
            (v0, r0)
        }
    };

    if !bounds.rf_amplitude.contains(v0) {
        return Err(Error::InfeasibleDesign(format!(
            "{}: rf amplitude {v0:.4} V outside bounds [{}, {}]",
            species.name, bounds.rf_amplitude.min, bounds.rf_amplitude.max
        )));
    }
    if !bounds.ion_electrode_distance.contains(r0) {
        return Err(Error::InfeasibleDesign(format!(
            "{}: ion-electrode distance {r0:e} m outside bounds [{:e}, {:e}]",
            species.name, bounds.ion_electrode_distance.min, bounds.ion_electrode_distance.max
        )));
    }
    TrapConfig::new(species.clone(), v0, omega, r0, target.differential_drive)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConfinementPoint {
    /// m
    pub r0: f64,
    /// V
    pub v0: f64,
    /// rad/s
    pub omega_rf: f64,
    /// rad/s
    pub nu: f64,
    pub q: f64,
}

/// Secular frequency over an (r0, V0) grid at fixed q.
///
/// For each point Ω is set so that the micromotion amplitude equals `q`.
/// Rows are ordered with r0 outermost.
pub fn sweep_confinement(
    species: &IonSpecies,
    q: f64,
    r0_range: (f64, f64),
    v0_range: (f64, f64),
    counts: (usize, usize),
    spacing: Spacing,
    differential_drive: bool,
) -> Result<Vec<ConfinementPoint>> {
    require_positive("q", q)?;
    for (name, (lo, hi)) in [("r0_range", r0_range), ("v0_range", v0_range)] {
        require_positive(name, lo)?;
        require_positive(name, hi)?;
    }
    if counts.0 < 2 || counts.1 < 2 {
        return Err(crate::error::invalid("grid", "need at least 2 points per axis"));
    }
    let r0s = samples(r0_range.0, r0_range.1, counts.0, spacing)?;
    let v0s = samples(v0_range.0, v0_range.1, counts.1, spacing)?;
    let factor = drive_factor(differential_drive);
    let qm = species.charge_to_mass();
    let mut out = Vec::with_capacity(r0s.len() * v0s.len());
    for &r0 in &r0s {
        for &v0 in &v0s {
            let omega = libm::sqrt(2.0 * qm * factor * v0 / (q * r0 * r0));
            out.push(ConfinementPoint {
                r0,
                v0,
                omega_rf: omega,
                nu: nu_from_q_and_omega(q, omega),
                q,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{angular, TWO_PI};
    use crate::species::lookup_species;
    use proptest::prelude::*;

    fn be9() -> IonSpecies {
        lookup_species("Be-9").unwrap()
    }

    fn worked_example(differential: bool) -> TrapConfig {
        TrapConfig::new(be9(), 280.0, angular(230e6), 120e-6, differential).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn be9_worked_example_q_and_nu() {
        let cfg = worked_example(true);
        assert!(rel(micromotion_amplitude(&cfg), 0.40) < 0.01);
        assert!(rel(secular_frequency(&cfg), angular(32e6)) < 0.03);
    }

    #[test]
    fn single_ended_drive_halves_q() {
        let q = micromotion_amplitude(&worked_example(false));
        assert!(rel(q, 0.20) < 0.01, "q = {q}");
    }

    #[test]
    fn zero_drive_gives_zero() {
        let mut cfg = worked_example(true);
        cfg.rf_amplitude = 0.0;
        assert_eq!(micromotion_amplitude(&cfg), 0.0);
        assert_eq!(secular_frequency(&cfg), 0.0);
    }

    #[test]
    fn lower_voltage_smaller_trap_keeps_the_working_point() {
        let a = worked_example(true);
        let b = TrapConfig::new(be9(), 195.0, angular(230e6), 100e-6, true).unwrap();
        assert!(rel(micromotion_amplitude(&b), 0.40) < 0.01);
        assert!(rel(secular_frequency(&b), secular_frequency(&a)) < 0.01);
    }

    #[test]
    fn nu_from_q_examples() {
        assert!(rel(nu_from_q_and_omega(0.4, angular(350e6)), angular(49.5e6)) < 1e-3);
        assert!(rel(nu_from_q_and_omega(0.4, angular(230e6)), angular(32.5e6)) < 1e-3);
        assert_eq!(nu_from_q_and_omega(0.0, angular(230e6)), 0.0);
    }

    #[test]
    fn stability_verdicts() {
        let v = check_stability(0.4);
        assert!(v.trapped && v.stable && v.adiabatic);
        let v = check_stability(0.95);
        assert!(v.trapped && !v.stable && !v.adiabatic);
        let v = check_stability(0.0);
        assert!(!v.trapped && !v.stable);
        let v = check_stability(0.6);
        assert!(v.stable && !v.adiabatic);
    }

    #[test]
    fn trajectory_limits() {
        let cfg = worked_example(true);
        let q = micromotion_amplitude(&cfg);
        let u = first_order_trajectory(&cfg, 1e-6, 0.0, 0.0).unwrap();
        assert!((u - 1e-6 * (1.0 + q / 2.0)).abs() < 1e-18);

        let mut unstable = cfg.clone();
        unstable.rf_amplitude *= 3.0;
        assert!(matches!(
            first_order_trajectory(&unstable, 1e-6, 0.0, 0.0),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn trajectory_without_micromotion_is_harmonic() {
        // q → 0 by weakening the drive: the bracket tends to 1
        let mut cfg = worked_example(true);
        cfg.rf_amplitude = 1e-9;
        let nu = secular_frequency(&cfg);
        let t = 1.234e-3;
        let u = first_order_trajectory(&cfg, 1.0, 0.3, t).unwrap();
        assert!((u - libm::cos(nu * t - 0.3)).abs() < 1e-9);
    }

    #[test]
    fn rf_period_average_matches_analytic_integral() {
        // composite Simpson over one rf period versus the product-to-sum closed form
        let cfg = worked_example(true);
        let SecularParams {
            secular_frequency: nu,
            micromotion_q: q,
        } = cfg.secular();
        let omega = cfg.rf_frequency;
        let (u0, phi, t0) = (1.0, 0.7, 3.3e-7);
        let period = TWO_PI / omega;
        let n = 20_000;
        let h = period / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * first_order_trajectory(&cfg, u0, phi, t0 + h * i as f64).unwrap();
        }
        let numeric = acc * h / 3.0 / period;

        let t1 = t0 + period;
        let sin_int = |w: f64, c: f64| (libm::sin(w * t1 + c) - libm::sin(w * t0 + c)) / w;
        let harmonic = sin_int(nu, -phi);
        let beat = 0.5 * (sin_int(nu + omega, -phi) + sin_int(nu - omega, -phi));
        let analytic = u0 * (harmonic + 0.5 * q * beat) / period;
        assert!((numeric - analytic).abs() < 1e-12, "{numeric} vs {analytic}");
    }

    #[test]
    fn design_for_50_mhz_at_fixed_r0() {
        let target = DesignTarget::new(angular(50e6), 0.4, be9()).with_ion_electrode_distance(120e-6);
        let cfg = solve_design(&target).unwrap();
        assert!(rel(cfg.rf_frequency, omega_from_nu_and_q(angular(50e6), 0.4)) < 1e-12);
        assert!(rel(cfg.rf_frequency, angular(350e6)) < 0.011);
        assert!(rel(cfg.rf_amplitude, 655.0) < 0.02, "V0 = {}", cfg.rf_amplitude);
    }

    #[test]
    fn design_at_fixed_voltage_recovers_r0() {
        let target = DesignTarget::new(angular(32e6), 0.4, be9()).with_rf_amplitude(195.0);
        let cfg = solve_design(&target).unwrap();
        assert!(rel(cfg.ion_electrode_distance, 100e-6) < 0.02);
    }

    #[test]
    fn design_rejects_unstable_q() {
        let target = DesignTarget::new(angular(50e6), 1.0, be9());
        match solve_design(&target) {
            Err(Error::InfeasibleDesign(msg)) => assert!(msg.contains("stability interval")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn design_with_both_free_takes_lowest_voltage() {
        let target = DesignTarget::new(angular(50e6), 0.4, be9());
        let cfg = solve_design(&target).unwrap();
        assert!(rel(cfg.ion_electrode_distance, DesignBounds::default().ion_electrode_distance.min) < 1e-12);
        let wider = DesignTarget::new(angular(50e6), 0.4, be9()).with_ion_electrode_distance(60e-6);
        assert!(solve_design(&wider).unwrap().rf_amplitude > cfg.rf_amplitude);
    }

    #[test]
    fn design_bound_violation_names_the_parameter() {
        let mut target = DesignTarget::new(angular(50e6), 0.4, be9()).with_ion_electrode_distance(120e-6);
        target.bounds.rf_amplitude = Bounds::new(1.0, 300.0);
        match solve_design(&target) {
            Err(Error::InfeasibleDesign(msg)) => assert!(msg.contains("rf amplitude")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn design_picks_lightest_voltage_candidate() {
        let reg = crate::species::SpeciesRegistry::builtin();
        let mut target = DesignTarget::new(angular(20e6), 0.4, be9()).with_ion_electrode_distance(100e-6);
        target.species = SpeciesChoice::Candidates(reg.iter().cloned().collect());
        let cfg = solve_design(&target).unwrap();
        assert_eq!(cfg.species.name, "Be-9");
    }

    #[test]
    fn confinement_sweep_contains_worked_example() {
        let grid = sweep_confinement(&be9(), 0.4, (120e-6, 240e-6), (280.0, 1120.0), (2, 2), Spacing::Linear, true)
            .unwrap();
        let p = grid[0];
        assert!(rel(p.nu, angular(32e6)) < 0.03);
        // doubling r0 halves ν; quadrupling V0 doubles ν
        let r_doubled = grid[2];
        assert!(rel(r_doubled.nu, p.nu / 2.0) < 1e-12);
        let v_quadrupled = grid[1];
        assert!(rel(v_quadrupled.nu, 2.0 * p.nu) < 1e-12);
        assert!(sweep_confinement(&be9(), 0.4, (1e-4, 2e-4), (1.0, 2.0), (1, 3), Spacing::Linear, true).is_err());
    }

    fn arb_config() -> impl Strategy<Value = TrapConfig> {
        (1.0f64..250.0, 10.0f64..2000.0, 20.0e6f64..500.0e6, 30e-6f64..500e-6, any::<bool>()).prop_map(
            |(mass, v0, f, r0, diff)| {
                let sp = IonSpecies::from_atomic_data("X", mass, 1, 20e6, 400.0).unwrap();
                TrapConfig::new(sp, v0, angular(f), r0, diff).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn secular_is_consistent_with_q_and_omega(cfg in arb_config()) {
            let nu = secular_frequency(&cfg);
            let via_q = nu_from_q_and_omega(micromotion_amplitude(&cfg), cfg.rf_frequency);
            prop_assert!(rel(nu, via_q) < 1e-9);
        }

        #[test]
        fn design_round_trips(cfg in arb_config()) {
            let SecularParams { secular_frequency: nu, micromotion_q: q } = cfg.secular();
            prop_assume!(check_stability(q).stable);
            let mut target = DesignTarget::new(nu, q, cfg.species.clone()).with_rf_amplitude(cfg.rf_amplitude);
            target.differential_drive = cfg.differential_drive;
            target.bounds.ion_electrode_distance = Bounds::new(1e-6, 1.0);
            target.bounds.rf_amplitude = Bounds::new(0.0, 1e5);
            let back = solve_design(&target).unwrap();
            prop_assert!(rel(back.rf_frequency, cfg.rf_frequency) < 1e-6);
            prop_assert!(rel(back.ion_electrode_distance, cfg.ion_electrode_distance) < 1e-6);
            prop_assert!(rel(back.rf_amplitude, cfg.rf_amplitude) < 1e-6);
        }

        #[test]
        fn proportionalities_hold(cfg in arb_config(), k in 1.1f64..3.0) {
            let nu0 = secular_frequency(&cfg);
            let q0 = micromotion_amplitude(&cfg);
            let slope = |nu1: f64, q1: f64| (libm::log(nu1 / nu0) / libm::log(k), libm::log(q1 / q0) / libm::log(k));

            let mut c = cfg.clone();
            c.species.mass /= k; // Q/m scaled by k
            let (sn, sq) = slope(secular_frequency(&c), micromotion_amplitude(&c));
            prop_assert!((sn - 1.0).abs() < 1e-9 && (sq - 1.0).abs() < 1e-9);

            let mut c = cfg.clone();
            c.ion_electrode_distance *= k;
            let (sn, sq) = slope(secular_frequency(&c), micromotion_amplitude(&c));
            prop_assert!((sn + 2.0).abs() < 1e-9 && (sq + 2.0).abs() < 1e-9);

            let mut c = cfg.clone();
            c.rf_amplitude *= k;
            let (sn, sq) = slope(secular_frequency(&c), micromotion_amplitude(&c));
            prop_assert!((sn - 1.0).abs() < 1e-9 && (sq - 1.0).abs() < 1e-9);

            let mut c = cfg.clone();
            c.rf_frequency *= k;
            let (sn, sq) = slope(secular_frequency(&c), micromotion_amplitude(&c));
            prop_assert!((sn + 1.0).abs() < 1e-9 && (sq + 2.0).abs() < 1e-9);
        }
    }
}
