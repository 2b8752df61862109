//! Adaptive Dormand–Prince 5(4) integrator for first-order systems on `[f64]`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub tolerance: Tolerance,
    /// First trial step; estimated from the right-hand side when `None`.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            initial_step: None,
            max_steps: 1_000_000,
        }
    }
}

impl From<Tolerance> for OdeOptions {
    fn from(tolerance: Tolerance) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus embedded fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` in place.
///
/// `observer` sees the state after every accepted step (including the last)
/// and may abort the integration by returning an error.
pub fn integrate<F, O>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y: &mut [f64],
    options: &OdeOptions,
    mut observer: O,
) -> Result<OdeStats>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]) -> Result<()>,
{
    let mut stats = OdeStats::default();
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(stats);
    }
    if !(span > 0.0) {
        return Err(Error::Integration(format!("end time {t1} precedes start {t0}")));
    }
    let n = y.len();
    let Tolerance { rtol, atol } = options.tolerance;
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    rhs(t0, y, &mut k1);
    stats.evaluations += 1;

    let mut h = match options.initial_step {
        Some(h) => h.min(span),
        None => initial_step(y, &k1, rtol, atol, span),
    };
    let mut t = t0;
    let mut previous_error = 1e-4;

    while t < t1 {
        if stats.accepted + stats.rejected >= options.max_steps {
            return Err(Error::Integration(format!(
                "exceeded {} steps at t = {t:e}",
                options.max_steps
            )));
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }

        combine(&mut stage, y, h, &[(A21, &k1)]);
        rhs(t + C2 * h, &stage, &mut k2);
        combine(&mut stage, y, h, &[(A31, &k1), (A32, &k2)]);
        rhs(t + C3 * h, &stage, &mut k3);
        combine(&mut stage, y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        rhs(t + C4 * h, &stage, &mut k4);
        combine(&mut stage, y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        rhs(t + C5 * h, &stage, &mut k5);
        combine(
            &mut stage,
            y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        );
        rhs(t + h, &stage, &mut k6);
        combine(
            &mut y_new,
            y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        rhs(t + h, &y_new, &mut k7);
        stats.evaluations += 6;

        let mut err_sq = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = atol + rtol * y[i].abs().max(y_new[i].abs());
            let r = e / scale;
            err_sq += r * r;
        }
        let err = if n == 0 { 0.0 } else { libm::sqrt(err_sq / n as f64) };
        if !err.is_finite() {
            return Err(Error::Integration(format!("non-finite error estimate at t = {t:e}")));
        }

        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y.copy_from_slice(&y_new);
            core::mem::swap(&mut k1, &mut k7);
            stats.accepted += 1;
            observer(t, y)?;
            // PI step-size control
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * libm::pow(err, -0.7 / 5.0) * libm::pow(previous_error, 0.4 / 5.0))
                    .clamp(MIN_FACTOR, MAX_FACTOR)
            };
            previous_error = err.max(1e-4);
            h *= factor;
        } else {
            stats.rejected += 1;
            h *= (SAFETY * libm::pow(err, -0.2)).max(MIN_FACTOR);
        }
        if h <= f64::EPSILON * t.abs().max(span) {
            return Err(Error::Integration(format!("step size underflow at t = {t:e}")));
        }
    }
    Ok(stats)
}

fn combine(out: &mut [f64], y: &[f64], h: f64, terms: &[(f64, &Vec<f64>)]) {
    for i in 0..out.len() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] = y[i] + h * acc;
    }
}

fn initial_step(y: &[f64], dy: &[f64], rtol: f64, atol: f64, span: f64) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (yi, fi) in y.iter().zip(dy) {
        let scale = atol + rtol * yi.abs();
        d0 += (yi / scale) * (yi / scale);
        d1 += (fi / scale) * (fi / scale);
    }
    let h = if d0 < 1e-10 || d1 < 1e-10 {
        1e-6 * span
    } else {
        0.01 * libm::sqrt(d0 / d1)
    };
    h.min(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut y = [1.0];
        let stats = integrate(
            |_, y, dy| dy[0] = -2.0 * y[0],
            0.0,
            3.0,
            &mut y,
            &OdeOptions::default(),
            |_, _| Ok(()),
        )
        .unwrap();
        assert!((y[0] - libm::exp(-6.0)).abs() < 1e-9);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let mut y = [1.0, 0.0];
        let opts = OdeOptions::from(Tolerance {
            rtol: 1e-10,
            atol: 1e-12,
        });
        integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            10.0,
            &mut y,
            &opts,
            |_, _| Ok(()),
        )
        .unwrap();
        assert!((y[0] - libm::cos(10.0)).abs() < 1e-8);
        assert!((y[1] + libm::sin(10.0)).abs() < 1e-8);
    }

    #[test]
    fn observer_can_abort() {
        let mut y = [1.0];
        let out = integrate(
            |_, _, dy| dy[0] = 1.0,
            0.0,
            1.0,
            &mut y,
            &OdeOptions::default(),
            |t, _| {
                if t > 0.0 {
                    Err(Error::Integration("stop".into()))
                } else {
                    Ok(())
                }
            },
        );
        assert!(out.is_err());
    }

    #[test]
    fn zero_span_is_identity() {
        let mut y = [4.0];
        integrate(|_, _, dy| dy[0] = 1.0, 2.0, 2.0, &mut y, &OdeOptions::default(), |_, _| Ok(())).unwrap();
        assert_eq!(y[0], 4.0);
    }
}
