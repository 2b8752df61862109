//! Stochastic sampling of the same ladder jump process, used as an independent
//! check of the rate-equation integrator.

use alloc::vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ladder::{FockLadderState, LadderRates};
use super::{rate_coefficients, CoolingSetup};
use crate::error::{invalid, require_non_negative, Result};

/// Fewest trajectories accepted by the sampler.
pub const MIN_TRAJECTORIES: usize = 100;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct JumpEstimate {
    /// Empirical distribution of n at the final time.
    pub distribution: FockLadderState,
    pub mean: f64,
    /// Standard error of `mean`.
    pub std_error: f64,
    pub trajectories: usize,
}

/// Gillespie sampling of the ladder process with explicit rates.
///
/// Trajectory `i` draws from its own ChaCha8 stream `i` of `seed`, so the
/// result depends only on the inputs and not on evaluation order.
pub fn quantum_jump_oracle_rates(
    rates: &LadderRates,
    init: &FockLadderState,
    t: f64,
    trajectories: usize,
    seed: u64,
) -> Result<JumpEstimate> {
    require_non_negative("t", t)?;
    if trajectories < MIN_TRAJECTORIES {
        return Err(invalid(
            "trajectories",
            alloc::format!("{trajectories} is below the minimum of {MIN_TRAJECTORIES}"),
        ));
    }
    if rates.is_zero() {
        // nothing moves; report the initial distribution itself
        return Ok(JumpEstimate {
            distribution: init.clone(),
            mean: init.mean(),
            std_error: libm::sqrt(init.variance() / trajectories as f64),
            trajectories,
        });
    }

    let n_max = init.n_max();
    let mut counts = vec![0usize; n_max + 1];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for i in 0..trajectories {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut n = sample_initial(&init.populations, rng.random::<f64>());
        let mut now = 0.0;
        loop {
            let up = rates.up(n, n_max);
            let down = rates.down(n);
            let total = up + down;
            if total == 0.0 {
                break;
            }
            now += -libm::log(1.0 - rng.random::<f64>()) / total;
            if now > t {
                break;
            }
            if rng.random::<f64>() * total < up {
                n += 1;
            } else {
                n -= 1;
            }
        }
        counts[n] += 1;
        sum += n as f64;
        sum_sq += (n * n) as f64;
    }
    let k = trajectories as f64;
    let mean = sum / k;
    let var = (sum_sq / k - mean * mean).max(0.0) * k / (k - 1.0);
    let distribution = FockLadderState {
        populations: counts.iter().map(|&c| c as f64 / k).collect(),
    };
    Ok(JumpEstimate {
        distribution,
        mean,
        std_error: libm::sqrt(var / k),
        trajectories,
    })
}

/// Gillespie sampling for the laser in `setup` plus anomalous heating.
pub fn quantum_jump_oracle(
    setup: &CoolingSetup,
    init: &FockLadderState,
    anomalous_rate: f64,
    t: f64,
    trajectories: usize,
    seed: u64,
) -> Result<JumpEstimate> {
    require_non_negative("anomalous_rate", anomalous_rate)?;
    let rates = LadderRates::new(rate_coefficients(setup), anomalous_rate);
    quantum_jump_oracle_rates(&rates, init, t, trajectories, seed)
}

fn sample_initial(p: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (n, &pn) in p.iter().enumerate() {
        acc += pn;
        if u < acc {
            return n;
        }
    }
    // u landed in the rounding gap above the last cumulative sum
    p.iter().rposition(|&x| x > 0.0).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::angular;
    use crate::cooling::{cooling_rate, evolve_ladder, LadderOptions};

    fn setup() -> CoolingSetup {
        let gamma = angular(20e6);
        CoolingSetup::new(gamma, 0.1 * gamma, -0.5 * gamma, 0.1, 0.5 * gamma).unwrap()
    }

    #[test]
    fn agrees_with_rate_equation_within_three_sigma() {
        let s = setup();
        let init = FockLadderState::thermal(10.0, 200);
        let t = 0.5 / cooling_rate(&s);
        let ladder = evolve_ladder(&s, &init, 200.0, t, &LadderOptions::default()).unwrap();
        let est = quantum_jump_oracle(&s, &init, 200.0, t, 2000, 7).unwrap();
        assert!(
            (est.mean - ladder.mean()).abs() <= 3.0 * est.std_error,
            "{} vs {} (se {})",
            est.mean,
            ladder.mean(),
            est.std_error
        );
        assert!((est.distribution.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_estimate() {
        let s = setup();
        let init = FockLadderState::thermal(3.0, 200);
        let a = quantum_jump_oracle(&s, &init, 0.0, 1e-4, 300, 42).unwrap();
        let b = quantum_jump_oracle(&s, &init, 0.0, 1e-4, 300, 42).unwrap();
        let c = quantum_jump_oracle(&s, &init, 0.0, 1e-4, 300, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn zero_rates_return_the_initial_state() {
        let rates = LadderRates {
            a_plus: 0.0,
            a_minus: 0.0,
            anomalous: 0.0,
        };
        let init = FockLadderState::thermal(2.0, 50);
        let est = quantum_jump_oracle_rates(&rates, &init, 1.0, 100, 1).unwrap();
        assert_eq!(est.distribution, init);
        assert_eq!(est.mean, init.mean());
    }

    #[test]
    fn too_few_trajectories() {
        let init = FockLadderState::fock(0, 10);
        assert!(quantum_jump_oracle(&setup(), &init, 0.0, 1.0, 99, 0).is_err());
    }
}
