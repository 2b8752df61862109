use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, require_non_negative, Error, Result};

/// Truncation used for α = 3 work when none is given.
pub const DEFAULT_N_MAX: usize = 64;
/// Largest population tolerated above 0.9·n_max.
pub const TAIL_TOLERANCE: f64 = 1e-6;

/// Density operator on the Fock basis |0⟩..|n_max⟩, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    dim: usize,
    elements: Vec<Complex64>,
}

impl FockDensityMatrix {
    pub fn zeros(n_max: usize) -> Self {
        let dim = n_max + 1;
        Self {
            dim,
            elements: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_elements(n_max: usize, elements: Vec<Complex64>) -> Result<Self> {
        let dim = n_max + 1;
        if elements.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: elements.len(),
            });
        }
        Ok(Self { dim, elements })
    }

    /// |ψ⟩⟨ψ| for the amplitudes `psi` (not renormalised).
    pub fn from_pure(psi: &[Complex64]) -> Self {
        let dim = psi.len();
        let mut elements = Vec::with_capacity(dim * dim);
        for a in psi {
            for b in psi {
                elements.push(a * b.conj());
            }
        }
        Self { dim, elements }
    }

    pub fn fock(n: usize, n_max: usize) -> Self {
        let mut rho = Self::zeros(n_max.max(n));
        rho.set(n, n, Complex64::new(1.0, 0.0));
        rho
    }

    /// Thermal state with mean `nbar`, renormalised on the truncated space.
    pub fn thermal(nbar: f64, n_max: usize) -> Result<Self> {
        require_non_negative("nbar", nbar)?;
        let mut rho = Self::zeros(n_max);
        let ratio = nbar / (nbar + 1.0);
        let mut w = 1.0;
        let mut total = 0.0;
        for n in 0..=n_max {
            rho.set(n, n, Complex64::new(w, 0.0));
            total += w;
            w *= ratio;
        }
        rho.scale(1.0 / total);
        Ok(rho)
    }

    pub fn from_matrix(m: &DMatrix<Complex64>) -> Self {
        let dim = m.nrows();
        let mut elements = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                elements.push(m[(i, j)]);
            }
        }
        Self { dim, elements }
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.elements)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_max(&self) -> usize {
        self.dim - 1
    }

    /// ⟨m|ρ|n⟩
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.elements[m * self.dim + n]
    }

    pub fn set(&mut self, m: usize, n: usize, value: Complex64) {
        self.elements[m * self.dim + n] = value;
    }

    pub fn elements(&self) -> &[Complex64] {
        &self.elements
    }

    pub(crate) fn elements_mut(&mut self) -> &mut [Complex64] {
        &mut self.elements
    }

    pub fn scale(&mut self, factor: f64) {
        self.elements.iter_mut().for_each(|x| *x *= factor);
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim).map(|n| self.get(n, n).re).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|n| self.get(n, n).re).sum()
    }

    pub fn mean_n(&self) -> f64 {
        (0..self.dim).map(|n| n as f64 * self.get(n, n).re).sum()
    }

    pub fn variance_n(&self) -> f64 {
        let m = self.mean_n();
        (0..self.dim)
            .map(|n| (n as f64 - m) * (n as f64 - m) * self.get(n, n).re)
            .sum()
    }

    /// Tr ρ²
    pub fn purity(&self) -> f64 {
        self.elements.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Population above 0.9·n_max.
    pub fn tail_mass(&self) -> f64 {
        let start = libm::floor(0.9 * self.n_max() as f64) as usize + 1;
        (start..self.dim).map(|n| self.get(n, n).re).sum()
    }

    /// Largest |ρ_mn − ρ_nm*|.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..self.dim {
            for n in m..self.dim {
                worst = worst.max((self.get(m, n) - self.get(n, m).conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.to_matrix().symmetric_eigen().eigenvalues.iter().copied().collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Checks Hermiticity (1e-10), unit trace (1e-9) and positivity (−1e-9).
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(invalid("density_matrix", alloc::format!("not Hermitian (deviation {herm:e})")));
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > 1e-9 {
            return Err(invalid("density_matrix", alloc::format!("trace is {trace}")));
        }
        let low = self.min_eigenvalue();
        if low < -1e-9 {
            return Err(invalid("density_matrix", alloc::format!("negative eigenvalue {low:e}")));
        }
        Ok(())
    }

    /// U ρ U†
    pub fn transformed(&self, unitary: &DMatrix<Complex64>) -> Self {
        let rho = self.to_matrix();
        Self::from_matrix(&(unitary * rho * unitary.adjoint()))
    }
}

fn check_truncation(alpha: Complex64, n_max: usize) -> Result<()> {
    let mean = alpha.norm_sqr();
    let limit = n_max as f64 / 4.0;
    if mean > limit {
        Err(Error::TruncationInadequate { mean, limit })
    } else {
        Ok(())
    }
}

/// Coherent-state amplitudes e^{−|α|²/2} αⁿ/√n!, n = 0..=n_max.
pub fn coherent_amplitudes(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(n_max + 1);
    let mut x = Complex64::new(libm::exp(-0.5 * alpha.norm_sqr()), 0.0);
    c.push(x);
    for n in 1..=n_max {
        x = x * alpha / libm::sqrt(n as f64);
        c.push(x);
    }
    c
}

fn normalise(psi: &mut [Complex64]) {
    let norm = libm::sqrt(psi.iter().map(|x| x.norm_sqr()).sum::<f64>());
    psi.iter_mut().for_each(|x| *x /= norm);
}

pub fn coherent_ket(alpha: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
    check_truncation(alpha, n_max)?;
    let mut psi = coherent_amplitudes(alpha, n_max);
    normalise(&mut psi);
    Ok(psi)
}

/// (|iα⟩ + |−iα⟩)/N, N² = 2(1 + e^{−2|α|²}).
pub fn cat_ket(alpha: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
    check_truncation(alpha, n_max)?;
    let i = Complex64::new(0.0, 1.0);
    let plus = coherent_amplitudes(i * alpha, n_max);
    let minus = coherent_amplitudes(-i * alpha, n_max);
    let mut psi: Vec<Complex64> = plus.iter().zip(&minus).map(|(a, b)| a + b).collect();
    normalise(&mut psi);
    Ok(psi)
}

pub fn cat_norm_squared(alpha: Complex64) -> f64 {
    2.0 * (1.0 + libm::exp(-2.0 * alpha.norm_sqr()))
}

pub fn coherent_state(alpha: Complex64, n_max: usize) -> Result<FockDensityMatrix> {
    Ok(FockDensityMatrix::from_pure(&coherent_ket(alpha, n_max)?))
}

pub fn cat_state(alpha: Complex64, n_max: usize) -> Result<FockDensityMatrix> {
    Ok(FockDensityMatrix::from_pure(&cat_ket(alpha, n_max)?))
}
