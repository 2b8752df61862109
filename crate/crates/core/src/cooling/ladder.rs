//! Population rate equation on a truncated Fock ladder.
//!
//! Anomalous heating is an infinite-temperature bath on the ladder: rate
//! (n+1)ṅ upward and n·ṅ downward out of |n⟩. Its first moment is exactly +ṅ.
//! Upward transitions out of the top level are dropped, which keeps the
//! generator probability conserving.

use alloc::vec;
use alloc::vec::Vec;

use super::{rate_coefficients, CoolingSetup, RateCoefficients};
use crate::error::{invalid, require_non_negative, Error, Result};
use crate::ode::{integrate, OdeOptions, Tolerance};

/// Populations P(0..=n_max).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FockLadderState {
    pub populations: Vec<f64>,
}

impl FockLadderState {
    pub fn from_populations(populations: Vec<f64>) -> Result<Self> {
        if populations.is_empty() {
            return Err(invalid("populations", "need at least one level"));
        }
        if populations.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(invalid("populations", "each entry must lie in [0, 1]"));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid("populations", alloc::format!("sum to {total}, not 1")));
        }
        Ok(Self { populations })
    }

    /// Thermal (geometric) distribution with mean `nbar`, renormalised on 0..=n_max.
    pub fn thermal(nbar: f64, n_max: usize) -> Self {
        Self {
            populations: geometric(nbar / (nbar + 1.0), n_max),
        }
    }

    /// Geometric distribution P(n) ∝ ratio^n on 0..=n_max.
    pub fn geometric(ratio: f64, n_max: usize) -> Self {
        Self {
            populations: geometric(ratio, n_max),
        }
    }

    pub fn fock(n: usize, n_max: usize) -> Self {
        let mut populations = vec![0.0; n_max.max(n) + 1];
        populations[n] = 1.0;
        Self { populations }
    }

    /// Truncation used when none is given: max(200, 20 n̄₀).
    pub fn default_n_max(nbar0: f64) -> usize {
        (libm::ceil(20.0 * nbar0) as usize).max(200)
    }

    pub fn n_max(&self) -> usize {
        self.populations.len() - 1
    }

    pub fn total(&self) -> f64 {
        self.populations.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.populations
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.populations
            .iter()
            .enumerate()
            .map(|(n, p)| (n as f64 - m) * (n as f64 - m) * p)
            .sum()
    }

    pub fn ground_population(&self) -> f64 {
        self.populations[0]
    }

    pub fn top_population(&self) -> f64 {
        *self.populations.last().expect("non-empty")
    }

    /// ½ Σ |P(n) − Q(n)| over the union of supports.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let len = self.populations.len().max(other.populations.len());
        let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        0.5 * (0..len)
            .map(|i| (at(&self.populations, i) - at(&other.populations, i)).abs())
            .sum::<f64>()
    }
}

fn geometric(ratio: f64, n_max: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n_max + 1);
    let mut w = 1.0;
    for _ in 0..=n_max {
        p.push(w);
        w *= ratio;
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

/// Transition rates driving the ladder.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LadderRates {
    pub a_plus: f64,
    pub a_minus: f64,
    /// ṅ_an, quanta/s
    pub anomalous: f64,
}

impl LadderRates {
    pub fn new(coefficients: RateCoefficients, anomalous: f64) -> Self {
        Self {
            a_plus: coefficients.a_plus,
            a_minus: coefficients.a_minus,
            anomalous,
        }
    }

    pub(crate) fn up(&self, n: usize, n_max: usize) -> f64 {
        if n >= n_max {
            0.0
        } else {
            (n + 1) as f64 * (self.a_plus + self.anomalous)
        }
    }

    pub(crate) fn down(&self, n: usize) -> f64 {
        n as f64 * (self.a_minus + self.anomalous)
    }

    pub fn is_zero(&self) -> bool {
        self.a_plus == 0.0 && self.a_minus == 0.0 && self.anomalous == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LadderOptions {
    pub tolerance: Tolerance,
    /// Largest P(n_max) tolerated at any accepted step.
    pub truncation_tolerance: f64,
}

impl Default for LadderOptions {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            truncation_tolerance: 1e-8,
        }
    }
}

/// dP/dt for the ladder generator.
pub fn ladder_derivative(rates: &LadderRates, p: &[f64], dp: &mut [f64]) {
    let n_max = p.len() - 1;
    for n in 0..=n_max {
        let mut acc = -(rates.up(n, n_max) + rates.down(n)) * p[n];
        if n < n_max {
            acc += rates.down(n + 1) * p[n + 1];
        }
        if n > 0 {
            acc += rates.up(n - 1, n_max) * p[n - 1];
        }
        dp[n] = acc;
    }
}

fn check_top(p: &[f64], tolerance: f64) -> Result<()> {
    let top = *p.last().expect("non-empty");
    if top > tolerance {
        Err(Error::TruncationBreach {
            mass: top,
            levels: p.len(),
            tolerance,
        })
    } else {
        Ok(())
    }
}

/// Integrates the ladder for time `t` with explicit rates.
pub fn evolve_ladder_rates(
    rates: &LadderRates,
    init: &FockLadderState,
    t: f64,
    options: &LadderOptions,
) -> Result<FockLadderState> {
    require_non_negative("t", t)?;
    require_non_negative("anomalous_rate", rates.anomalous)?;
    let tol = options.truncation_tolerance;
    check_top(&init.populations, tol)?;
    let mut p = init.populations.clone();
    integrate(
        |_, y, dy| ladder_derivative(rates, y, dy),
        0.0,
        t,
        &mut p,
        &OdeOptions::from(options.tolerance),
        |_, y| check_top(y, tol),
    )?;
    Ok(FockLadderState { populations: p })
}

/// Integrates the ladder for the laser described by `setup` plus anomalous heating.
pub fn evolve_ladder(
    setup: &CoolingSetup,
    init: &FockLadderState,
    anomalous_rate: f64,
    t: f64,
    options: &LadderOptions,
) -> Result<FockLadderState> {
    let rates = LadderRates::new(rate_coefficients(setup), anomalous_rate);
    evolve_ladder_rates(&rates, init, t, options)
}

/// Ladder states at each of the non-decreasing `times`.
pub fn evolve_ladder_curve(
    setup: &CoolingSetup,
    init: &FockLadderState,
    anomalous_rate: f64,
    times: &[f64],
    options: &LadderOptions,
) -> Result<Vec<FockLadderState>> {
    let rates = LadderRates::new(rate_coefficients(setup), anomalous_rate);
    let mut out = Vec::with_capacity(times.len());
    let mut state = init.clone();
    let mut now = 0.0;
    for &t in times {
        if t < now {
            return Err(invalid("times", "must be non-decreasing"));
        }
        state = evolve_ladder_rates(&rates, &state, t - now, options)?;
        now = t;
        out.push(state.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::angular;
    use crate::cooling::{cooling_rate, evolve_nbar, steady_state_nbar};

    fn resolved(eta: f64) -> CoolingSetup {
        let gamma = angular(20e6);
        CoolingSetup::new(gamma, 0.1 * gamma, -2.5 * gamma, eta, 2.5 * gamma).unwrap()
    }

    #[test]
    fn thermal_state_is_normalised_with_right_mean() {
        let s = FockLadderState::thermal(10.0, 400);
        assert!((s.total() - 1.0).abs() < 1e-12);
        assert!((s.mean() - 10.0).abs() < 1e-6);
        assert_eq!(FockLadderState::default_n_max(10.0), 200);
        assert_eq!(FockLadderState::default_n_max(15.0), 300);
    }

    #[test]
    fn population_validation() {
        assert!(FockLadderState::from_populations(vec![0.5, 0.4]).is_err());
        assert!(FockLadderState::from_populations(vec![1.5, -0.5]).is_err());
        assert!(FockLadderState::from_populations(vec![0.5, 0.5]).is_ok());
    }

    #[test]
    fn relaxes_to_thermal_steady_state() {
        let s = resolved(0.1);
        let init = FockLadderState::thermal(10.0, 200);
        let end = evolve_ladder(&s, &init, 0.0, 40.0 / cooling_rate(&s), &LadderOptions::default()).unwrap();
        let target = steady_state_nbar(&s, 0.0).unwrap();
        assert!(((end.mean() - target) / target).abs() < 0.02);
        let thermal = FockLadderState::thermal(end.mean(), 200);
        assert!(end.total_variation(&thermal) < 0.02);
        assert!((end.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pure_decay_without_heating_channel() {
        let rates = LadderRates {
            a_plus: 0.0,
            a_minus: 1e3,
            anomalous: 0.0,
        };
        let init = FockLadderState::fock(1, 10);
        let t = 1.5e-3;
        let end = evolve_ladder_rates(&rates, &init, t, &LadderOptions::default()).unwrap();
        assert!((end.populations[1] - libm::exp(-1e3 * t)).abs() < 1e-8);
        assert!((end.populations[0] - (1.0 - libm::exp(-1e3 * t))).abs() < 1e-8);
    }

    #[test]
    fn mean_follows_closed_form() {
        let s = resolved(0.1);
        let init = FockLadderState::thermal(10.0, 200);
        let rc = cooling_rate(&s);
        let times: Vec<f64> = (1..=20).map(|i| i as f64 * 0.25 / rc).collect();
        let curve = evolve_ladder_curve(&s, &init, 0.0, &times, &LadderOptions::default()).unwrap();
        for (t, state) in times.iter().zip(&curve) {
            let exact = evolve_nbar(&s, init.mean(), 0.0, *t);
            assert!(((state.mean() - exact) / exact).abs() < 0.01, "t = {t}");
        }
    }

    #[test]
    fn anomalous_heating_shifts_the_mean_by_its_rate() {
        let s = resolved(0.1);
        let ndot = 500.0;
        let init = FockLadderState::thermal(2.0, 200);
        let t = 2.0 / cooling_rate(&s);
        let end = evolve_ladder(&s, &init, ndot, t, &LadderOptions::default()).unwrap();
        let exact = evolve_nbar(&s, init.mean(), ndot, t);
        assert!(((end.mean() - exact) / exact).abs() < 1e-4);
    }

    #[test]
    fn geometric_distribution_is_stationary() {
        let r = rate_coefficients(&resolved(0.1));
        let rates = LadderRates::new(r, 0.0);
        let p = FockLadderState::geometric(r.a_plus / r.a_minus, 60);
        let mut dp = vec![0.0; p.populations.len()];
        ladder_derivative(&rates, &p.populations, &mut dp);
        let scale = r.a_minus;
        assert!(dp.iter().all(|d| d.abs() < 1e-12 * scale));

        let with_heating = LadderRates::new(r, 120.0);
        let p = FockLadderState::geometric((r.a_plus + 120.0) / (r.a_minus + 120.0), 60);
        ladder_derivative(&with_heating, &p.populations, &mut dp);
        assert!(dp.iter().all(|d| d.abs() < 1e-12 * scale));
    }

    #[test]
    fn generator_first_moment() {
        let rates = LadderRates {
            a_plus: 3.0,
            a_minus: 7.0,
            anomalous: 2.0,
        };
        let p = FockLadderState::thermal(1.5, 120);
        let mut dp = vec![0.0; 121];
        ladder_derivative(&rates, &p.populations, &mut dp);
        let dmean: f64 = dp.iter().enumerate().map(|(n, d)| n as f64 * d).sum();
        let expected = -(7.0 - 3.0) * p.mean() + 3.0 + 2.0;
        assert!((dmean - expected).abs() < 1e-9);
        assert!(dp.iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn truncation_breach_is_reported() {
        let s = resolved(0.1).with_detuning(angular(20e6) * 2.5);
        let init = FockLadderState::thermal(10.0, 200);
        let out = evolve_ladder(&s, &init, 0.0, 1.0, &LadderOptions::default());
        assert!(matches!(out, Err(Error::TruncationBreach { .. })));
    }
}
