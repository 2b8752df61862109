//! Truncated Fock-space simulation of nonclassical motional states.

mod fidelity;
mod lindblad;
mod report;
mod state;
mod wigner;

pub use fidelity::{fidelity_to_pure, state_fidelity, uhlmann_fidelity, FidelityConvention};
pub use lindblad::{
    evolve_lindblad, evolve_lindblad_observed, lindblad_derivative, DecoherenceRates, LindbladOptions,
};
pub use report::{
    baseline_rates, calibrate_prep_window, cat_preparation_report, preparation_unitary, scaled_rates,
    CatReport, CatReportConfig, CALIBRATION_PREP_FIDELITY, DEFAULT_PREP_WINDOW,
};
pub use state::{
    cat_ket, cat_norm_squared, cat_state, coherent_amplitudes, coherent_ket, coherent_state,
    FockDensityMatrix, DEFAULT_N_MAX, TAIL_TOLERANCE,
};
pub use wigner::{default_axis, wigner, wigner_point, WignerGrid};
