//! One-dimensional sample grids.

use alloc::vec::Vec;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `points` samples from `start` to `stop` inclusive.
pub fn samples(start: f64, stop: f64, points: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(invalid("points", "grid is empty"));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(invalid("range", "bounds must be finite"));
    }
    if points == 1 {
        return Ok(alloc::vec![start]);
    }
    match spacing {
        Spacing::Linear => Ok(linspace(start, stop, points)),
        Spacing::Log => {
            if start <= 0.0 || stop <= 0.0 {
                return Err(invalid("range", "log spacing needs positive bounds"));
            }
            Ok(linspace(libm::log(start), libm::log(stop), points)
                .into_iter()
                .map(libm::exp)
                .collect())
        }
    }
}

pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i == points - 1 {
                        stop
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

/// Least-squares slope of ln(y) against ln(x).
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let lx: Vec<f64> = xs.iter().map(|&x| libm::log(x)).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| libm::log(y)).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
