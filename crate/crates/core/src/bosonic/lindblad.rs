//! Master-equation evolution of a truncated motional density matrix.
//!
//! Jump operators: √ṅ a and √ṅ a† (heating towards infinite temperature) and
//! √(2γ_φ) a†a (dephasing, so coherences decay as exp(−γ_φ (m−n)² t)).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::state::{FockDensityMatrix, TAIL_TOLERANCE};
use crate::error::{invalid, require_non_negative, Error, Result};
use crate::ode::{integrate, OdeOptions, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DecoherenceRates {
    /// ṅ, quanta/s
    pub heating: f64,
    /// γ_φ, 1/s
    pub dephasing: f64,
    pub initial_thermal_nbar: f64,
}

impl DecoherenceRates {
    pub fn validate(&self) -> Result<()> {
        require_non_negative("heating", self.heating)?;
        require_non_negative("dephasing", self.dephasing)?;
        require_non_negative("initial_thermal_nbar", self.initial_thermal_nbar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LindbladOptions {
    pub tolerance: Tolerance,
    /// Largest population tolerated above 0.9·n_max at any accepted step.
    pub tail_tolerance: f64,
    /// Also check trace, Hermiticity and positivity after every accepted step.
    pub check_invariants: bool,
}

impl Default for LindbladOptions {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            tail_tolerance: TAIL_TOLERANCE,
            check_invariants: false,
        }
    }
}

/// dρ/dt, element by element.
pub fn lindblad_derivative(rates: &DecoherenceRates, rho: &FockDensityMatrix, out: &mut FockDensityMatrix) {
    let dim = rho.dim();
    let mut buf = vec![0.0; 2 * dim * dim];
    let mut dbuf = vec![0.0; 2 * dim * dim];
    pack(rho.elements(), &mut buf);
    generator(rates, dim, &buf, &mut dbuf);
    unpack(&dbuf, out.elements_mut());
}

fn pack(src: &[Complex64], dst: &mut [f64]) {
    for (k, z) in src.iter().enumerate() {
        dst[2 * k] = z.re;
        dst[2 * k + 1] = z.im;
    }
}

fn unpack(src: &[f64], dst: &mut [Complex64]) {
    for (k, z) in dst.iter_mut().enumerate() {
        *z = Complex64::new(src[2 * k], src[2 * k + 1]);
    }
}

// Acts on interleaved (re, im) storage so it can feed the integrator directly.
fn generator(rates: &DecoherenceRates, dim: usize, y: &[f64], dy: &mut [f64]) {
    let h = rates.heating;
    let g = rates.dephasing;
    let sq: Vec<f64> = (0..=dim).map(|k| libm::sqrt(k as f64)).collect();
    // diagonal of a a† on the truncated space: 1, 2, …, dim−1, 0
    let aad = |k: usize| if k + 1 < dim { (k + 1) as f64 } else { 0.0 };
    for m in 0..dim {
        for n in 0..dim {
            let k = 2 * (m * dim + n);
            let (re, im) = (y[k], y[k + 1]);
            let mut decay = 0.5 * h * ((m + n) as f64 + aad(m) + aad(n));
            let diff = m as f64 - n as f64;
            decay += g * diff * diff;
            let mut dre = -decay * re;
            let mut dim_ = -decay * im;
            if h != 0.0 {
                if m + 1 < dim && n + 1 < dim {
                    let c = h * sq[m + 1] * sq[n + 1];
                    let j = 2 * ((m + 1) * dim + n + 1);
                    dre += c * y[j];
                    dim_ += c * y[j + 1];
                }
                if m > 0 && n > 0 {
                    let c = h * sq[m] * sq[n];
                    let j = 2 * ((m - 1) * dim + n - 1);
                    dre += c * y[j];
                    dim_ += c * y[j + 1];
                }
            }
            dy[k] = dre;
            dy[k + 1] = dim_;
        }
    }
}

fn check_step(rho: &FockDensityMatrix, options: &LindbladOptions) -> Result<()> {
    let tail = rho.tail_mass();
    if tail > options.tail_tolerance {
        return Err(Error::TruncationBreach {
            mass: tail,
            levels: rho.dim(),
            tolerance: options.tail_tolerance,
        });
    }
    if options.check_invariants {
        let trace = rho.trace();
        if (trace - 1.0).abs() > 1e-8 {
            return Err(Error::Integration(alloc::format!("trace drifted to {trace}")));
        }
        let herm = rho.hermiticity_error();
        if herm > 1e-10 {
            return Err(Error::Integration(alloc::format!("lost Hermiticity ({herm:e})")));
        }
        let low = rho.min_eigenvalue();
        if low < -1e-9 {
            return Err(Error::Integration(alloc::format!("negative eigenvalue {low:e}")));
        }
    }
    Ok(())
}

/// Evolves `state` for time `t`, calling `observer` after every accepted step.
pub fn evolve_lindblad_observed<O>(
    state: &FockDensityMatrix,
    rates: &DecoherenceRates,
    t: f64,
    options: &LindbladOptions,
    mut observer: O,
) -> Result<FockDensityMatrix>
where
    O: FnMut(f64, &FockDensityMatrix) -> Result<()>,
{
    rates.validate()?;
    require_non_negative("t", t)?;
    if !rates.heating.is_finite() || !rates.dephasing.is_finite() {
        return Err(invalid("rates", "must be finite"));
    }
    let dim = state.dim();
    check_step(state, options)?;
    let mut y = vec![0.0; 2 * dim * dim];
    pack(state.elements(), &mut y);
    let mut scratch = state.clone();
    integrate(
        |_, y, dy| generator(rates, dim, y, dy),
        0.0,
        t,
        &mut y,
        &OdeOptions::from(options.tolerance),
        |now, y| {
            unpack(y, scratch.elements_mut());
            check_step(&scratch, options)?;
            observer(now, &scratch)
        },
    )?;
    let mut out = state.clone();
    unpack(&y, out.elements_mut());
    Ok(out)
}

pub fn evolve_lindblad(
    state: &FockDensityMatrix,
    rates: &DecoherenceRates,
    t: f64,
    options: &LindbladOptions,
) -> Result<FockDensityMatrix> {
    evolve_lindblad_observed(state, rates, t, options, |_, _| Ok(()))
}
