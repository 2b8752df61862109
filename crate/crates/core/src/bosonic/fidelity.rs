use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::state::FockDensityMatrix;
use crate::error::{Error, Result};

/// Whether a fidelity is reported as the Uhlmann quantity (Tr√(√ρσ√ρ))² or its square root.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FidelityConvention {
    Squared,
    #[default]
    Root,
}

impl FidelityConvention {
    /// Converts a squared (Uhlmann) fidelity into this convention.
    pub fn apply(self, squared: f64) -> f64 {
        match self {
            Self::Squared => squared,
            Self::Root => libm::sqrt(squared.max(0.0)),
        }
    }
}

const PURITY_SLACK: f64 = 1e-10;

fn check_dims(a: &FockDensityMatrix, b: &FockDensityMatrix) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        })
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// ⟨ψ|ρ|ψ⟩
pub fn fidelity_to_pure(rho: &FockDensityMatrix, psi: &[Complex64]) -> Result<f64> {
    if psi.len() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: psi.len(),
        });
    }
    let rho = rho.to_matrix();
    let v = DVector::from_column_slice(psi);
    Ok(clamp_unit((v.adjoint() * rho * &v)[(0, 0)].re))
}

// Eigenvalues this far below the largest are rounding noise; their square
// roots would otherwise show up at the 1e-8 level.
const EIGEN_FLOOR: f64 = 1e-14;

fn floored_root(l: f64, largest: f64) -> f64 {
    if l > EIGEN_FLOOR * largest {
        libm::sqrt(l)
    } else {
        0.0
    }
}

fn hermitian_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = m.clone().symmetric_eigen();
    let largest = eig.eigenvalues.max();
    let roots: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&l| Complex64::new(floored_root(l, largest), 0.0))
        .collect();
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&DVector::from_vec(roots)) * v.adjoint()
}

/// Uhlmann fidelity from the trace norm of √ρ√σ, without any pure-state shortcut.
pub fn uhlmann_fidelity(a: &FockDensityMatrix, b: &FockDensityMatrix) -> Result<f64> {
    check_dims(a, b)?;
    let product = hermitian_sqrt(&a.to_matrix()) * hermitian_sqrt(&b.to_matrix());
    let trace: f64 = product.singular_values().iter().sum();
    Ok(clamp_unit(trace * trace))
}

fn dominant_vector(rho: &FockDensityMatrix) -> Vec<Complex64> {
    let eig = rho.to_matrix().symmetric_eigen();
    let k = eig.eigenvalues.imax();
    eig.eigenvectors.column(k).iter().copied().collect()
}

/// Squared Uhlmann fidelity in [0, 1]; reduces to ⟨ψ|ρ|ψ⟩ when either state is pure.
pub fn state_fidelity(a: &FockDensityMatrix, b: &FockDensityMatrix) -> Result<f64> {
    check_dims(a, b)?;
    if (b.purity() - 1.0).abs() < PURITY_SLACK {
        fidelity_to_pure(a, &dominant_vector(b))
    } else if (a.purity() - 1.0).abs() < PURITY_SLACK {
        fidelity_to_pure(b, &dominant_vector(a))
    } else {
        uhlmann_fidelity(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bosonic::state::{cat_state, coherent_ket, coherent_state};

    #[test]
    fn self_fidelity_is_one() {
        let rho = FockDensityMatrix::thermal(0.7, 20).unwrap();
        assert!((state_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
        let cat = cat_state(Complex64::new(2.0, 0.0), 30).unwrap();
        assert!((state_fidelity(&cat, &cat).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn orthogonal_states() {
        let a = FockDensityMatrix::fock(0, 5);
        let b = FockDensityMatrix::fock(1, 5);
        assert!(state_fidelity(&a, &b).unwrap().abs() < 1e-12);
        assert!(uhlmann_fidelity(&a, &b).unwrap().abs() < 1e-12);
    }

    #[test]
    fn pure_and_general_paths_agree() {
        let a = coherent_state(Complex64::new(3.0, 0.0), 64).unwrap();
        let psi = coherent_ket(Complex64::new(3.0 * 1.001, 0.0), 64).unwrap();
        let b = FockDensityMatrix::from_pure(&psi);
        let fast = fidelity_to_pure(&a, &psi).unwrap();
        let general = uhlmann_fidelity(&a, &b).unwrap();
        assert!((fast - general).abs() < 1e-8, "{fast} vs {general}");
        // |⟨α|β⟩|² = exp(−|α−β|²)
        assert!((fast - libm::exp(-0.003f64.powi(2))).abs() < 1e-9);
    }

    #[test]
    fn mixed_against_mixed() {
        let a = FockDensityMatrix::thermal(0.2, 20).unwrap();
        let b = FockDensityMatrix::thermal(0.4, 20).unwrap();
        // commuting states: (Σ √(p q))²
        let (p, q) = (a.populations(), b.populations());
        let expected: f64 = p.iter().zip(&q).map(|(x, y)| libm::sqrt(x * y)).sum();
        assert!((state_fidelity(&a, &b).unwrap() - expected * expected).abs() < 1e-10);
    }

    #[test]
    fn mismatched_truncation() {
        let a = FockDensityMatrix::fock(0, 5);
        let b = FockDensityMatrix::fock(0, 6);
        assert!(matches!(state_fidelity(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn conventions() {
        assert_eq!(FidelityConvention::Squared.apply(0.81), 0.81);
        assert!((FidelityConvention::Root.apply(0.81) - 0.9).abs() < 1e-15);
    }
}
