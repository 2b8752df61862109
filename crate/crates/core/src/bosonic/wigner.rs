//! Wigner function from the Fock-basis expansion.
//!
//! Phase-space coordinates are x = (a + a†)/√2 and p = (a − a†)/(√2 i), so the
//! vacuum peaks at 1/π and ∫∫ W dx dp = 1.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::state::FockDensityMatrix;
use crate::grid::linspace;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WignerGrid {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    /// W(x_i, p_j) at index i·p.len() + j.
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p.len() + j]
    }

    /// Trapezoidal ∫∫ W dx dp over the grid.
    pub fn integral(&self) -> f64 {
        let wx = trapezoid_weights(&self.x);
        let wp = trapezoid_weights(&self.p);
        let mut total = 0.0;
        for (i, a) in wx.iter().enumerate() {
            for (j, b) in wp.iter().enumerate() {
                total += a * b * self.at(i, j);
            }
        }
        total
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut w = vec![0.0; n];
    for k in 1..n {
        let h = 0.5 * (xs[k] - xs[k - 1]);
        w[k - 1] += h;
        w[k] += h;
    }
    w
}

/// Square grid [−6, 6]² with `points` samples per axis.
pub fn default_axis(points: usize) -> Vec<f64> {
    linspace(-6.0, 6.0, points)
}

/// W at one phase-space point.
pub fn wigner_point(state: &FockDensityMatrix, x: f64, p: f64) -> f64 {
    let mut scratch = vec![Complex64::new(0.0, 0.0); state.dim()];
    wigner_with(state, x, p, &mut scratch)
}

// Iterative Laguerre recursion over the matrix elements; `w[n]` carries the
// off-diagonal basis function of the current row.
fn wigner_with(state: &FockDensityMatrix, x: f64, p: f64, w: &mut [Complex64]) -> f64 {
    let dim = state.dim();
    let a = Complex64::new(x, p) / core::f64::consts::SQRT_2;
    let two_a = 2.0 * a;
    let two_a_conj = 2.0 * a.conj();
    w[0] = Complex64::new(libm::exp(-2.0 * a.norm_sqr()) / core::f64::consts::PI, 0.0);
    let mut total = state.get(0, 0).re * w[0].re;
    for n in 1..dim {
        w[n] = two_a * w[n - 1] / libm::sqrt(n as f64);
        total += 2.0 * (state.get(0, n) * w[n]).re;
    }
    for m in 1..dim {
        let sm = libm::sqrt(m as f64);
        let mut temp = w[m];
        w[m] = (two_a_conj * temp - sm * w[m - 1]) / sm;
        total += (state.get(m, m) * w[m]).re;
        for n in (m + 1)..dim {
            let next = (two_a * w[n - 1] - sm * temp) / libm::sqrt(n as f64);
            temp = w[n];
            w[n] = next;
            total += 2.0 * (state.get(m, n) * w[n]).re;
        }
    }
    total
}

pub fn wigner(state: &FockDensityMatrix, x_grid: &[f64], p_grid: &[f64]) -> WignerGrid {
    let mut scratch = vec![Complex64::new(0.0, 0.0); state.dim()];
    let mut values = Vec::with_capacity(x_grid.len() * p_grid.len());
    for &x in x_grid {
        for &p in p_grid {
            values.push(wigner_with(state, x, p, &mut scratch));
        }
    }
    WignerGrid {
        x: x_grid.to_vec(),
        p: p_grid.to_vec(),
        values,
    }
}
