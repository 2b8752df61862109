//! Run configuration in TOML (or JSON when the file name ends in `.json`).
//!
//! Keys ending in `_hz` are ordinary frequencies and are multiplied by 2π when
//! converted into model types. The one exception is `noise.dephasing_ref_hz`,
//! which is a decay rate in 1/s. Unknown keys are rejected in every block.

use std::path::{Path, PathBuf};

use ionfreq_core::bosonic::{
    baseline_rates, CatReportConfig, DecoherenceRates, FidelityConvention, LindbladOptions, DEFAULT_N_MAX,
    DEFAULT_PREP_WINDOW,
};
use ionfreq_core::constants::angular;
use ionfreq_core::cooling::{lamb_dicke, regime_detuning, CoolingSetup, FockLadderState};
use ionfreq_core::grid::Spacing;
use ionfreq_core::noise::{AnomalousNoiseSpec, DephasingSpec, MeasurementSpec};
use ionfreq_core::runtime::{CoolingTimeMode, GateScheme, QECCode, ShotModel, ShotParts, TRANSPORT_EXPONENT};
use ionfreq_core::trap::{Bounds, DesignBounds, DesignTarget, SpeciesChoice, TrapConfig};
use ionfreq_core::{IonSpecies, SpeciesRecord, SpeciesRegistry};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::output::Format;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub species: Option<SpeciesBlock>,
    pub trap: TrapBlock,
    pub cooling: CoolingBlock,
    pub noise: NoiseBlock,
    pub bosonic: BosonicBlock,
    pub runtime: RuntimeBlock,
    pub output: OutputBlock,
    pub sweep: Option<SweepBlock>,
    /// Directory relative paths inside the file are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpeciesBlock {
    pub name: Option<String>,
    /// JSON array of species records replacing or extending the built-in table.
    pub overrides_file: Option<PathBuf>,
    pub overrides: Vec<SpeciesRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrapBlock {
    pub rf_amplitude_v: Option<f64>,
    pub rf_frequency_hz: Option<f64>,
    pub ion_electrode_distance_m: Option<f64>,
    pub differential_drive: bool,
    pub design: Option<DesignBlock>,
    pub grid: GridBlock,
}

impl Default for TrapBlock {
    fn default() -> Self {
        Self {
            rf_amplitude_v: None,
            rf_frequency_hz: None,
            ion_electrode_distance_m: None,
            differential_drive: true,
            design: None,
            grid: GridBlock::default(),
        }
    }
}

/// Inverse design target. Drive parameters set in the enclosing trap block are held fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignBlock {
    pub target_nu_hz: Option<f64>,
    pub target_q: f64,
    /// Species to choose from instead of the configured one.
    pub candidates: Vec<String>,
    pub rf_amplitude_min_v: Option<f64>,
    pub rf_amplitude_max_v: Option<f64>,
    pub rf_frequency_min_hz: Option<f64>,
    pub rf_frequency_max_hz: Option<f64>,
    pub ion_electrode_distance_min_m: Option<f64>,
    pub ion_electrode_distance_max_m: Option<f64>,
}

impl Default for DesignBlock {
    fn default() -> Self {
        Self {
            target_nu_hz: None,
            target_q: 0.4,
            candidates: Vec::new(),
            rf_amplitude_min_v: None,
            rf_amplitude_max_v: None,
            rf_frequency_min_hz: None,
            rf_frequency_max_hz: None,
            ion_electrode_distance_min_m: None,
            ion_electrode_distance_max_m: None,
        }
    }
}

/// Fixed-q confinement grid over (r0, V0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridBlock {
    pub q: f64,
    pub r0_min_m: f64,
    pub r0_max_m: f64,
    pub r0_points: usize,
    pub v0_min_v: f64,
    pub v0_max_v: f64,
    pub v0_points: usize,
    pub spacing: Spacing,
}

impl Default for GridBlock {
    fn default() -> Self {
        Self {
            q: 0.4,
            r0_min_m: 30e-6,
            r0_max_m: 300e-6,
            r0_points: 10,
            v0_min_v: 50.0,
            v0_max_v: 1000.0,
            v0_points: 10,
            spacing: Spacing::Log,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoolingBlock {
    /// Defaults to 2.5 Γ.
    pub nu_hz: Option<f64>,
    /// Defaults to the species linewidth, else 20 MHz.
    pub gamma_hz: Option<f64>,
    /// Defaults to the species value at `nu_hz`, else 0.1.
    pub lamb_dicke: Option<f64>,
    /// Defaults to −Γ/2 below ν = Γ/2 and −ν above.
    pub detuning_hz: Option<f64>,
    pub rabi_over_gamma: f64,
    /// Overrides `rabi_over_gamma` when set.
    pub scattering_rate_per_s: Option<f64>,
    pub nbar0: f64,
    /// Defaults to five cooling times.
    pub duration_s: Option<f64>,
    pub points: usize,
    pub n_max: Option<usize>,
    pub anomalous_rate_per_s: f64,
    /// Quantum-jump trajectories for a final-time cross-check; 0 skips it.
    pub trajectories: usize,
}

impl Default for CoolingBlock {
    fn default() -> Self {
        Self {
            nu_hz: None,
            gamma_hz: None,
            lamb_dicke: None,
            detuning_hz: None,
            rabi_over_gamma: 0.1,
            scattering_rate_per_s: None,
            nbar0: 10.0,
            duration_s: None,
            points: 101,
            n_max: None,
            anomalous_rate_per_s: 0.0,
            trajectories: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseBlock {
    /// (V/m)²/Hz at the reference point; calibrated to 1000 quanta/s for 171 amu when unset.
    pub s0: Option<f64>,
    pub nu_ref_hz: f64,
    pub r0_ref_m: f64,
    #[serde(alias = "T_ref_K")]
    pub t_ref_k: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(alias = "gamma_T")]
    pub gamma_t: f64,
    /// Dephasing rate at `dephasing_nu_ref_hz`, 1/s.
    pub dephasing_ref_hz: f64,
    pub dephasing_nu_ref_hz: f64,
    pub nbar_per_detection: f64,
    pub detection_nu_ref_hz: f64,
    pub detect_time_s: f64,
    pub use_resolved_correction: bool,
    /// Evaluation point.
    pub nu_hz: f64,
    pub r0_m: Option<f64>,
    pub temperature_k: Option<f64>,
}

impl Default for NoiseBlock {
    fn default() -> Self {
        let a = AnomalousNoiseSpec::default();
        let d = DephasingSpec::default();
        let m = MeasurementSpec::default();
        Self {
            s0: None,
            nu_ref_hz: hz(a.nu_ref),
            r0_ref_m: a.r0_ref,
            t_ref_k: a.t_ref,
            alpha: a.alpha,
            beta: a.beta,
            gamma_t: a.gamma_t,
            dephasing_ref_hz: d.rate_ref,
            dephasing_nu_ref_hz: hz(d.nu_ref),
            nbar_per_detection: m.nbar_per_detection_ref,
            detection_nu_ref_hz: hz(m.nu_ref),
            detect_time_s: m.detect_time,
            use_resolved_correction: m.use_resolved_correction,
            nu_hz: 1e6,
            r0_m: None,
            temperature_k: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WignerState {
    #[default]
    Cat,
    Coherent,
    Vacuum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WignerBlock {
    pub state: WignerState,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for WignerBlock {
    fn default() -> Self {
        Self {
            state: WignerState::Cat,
            min: -6.0,
            max: 6.0,
            points: 121,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BosonicBlock {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub n_max: usize,
    pub prep_time_s: f64,
    /// Refit `prep_time_s` so the preparation fidelity at `nu_ref_hz` equals `calibration_fidelity`.
    pub calibrate_prep: bool,
    pub calibration_fidelity: f64,
    pub idle_time_s: f64,
    /// Baseline rates at `nu_ref_hz`.
    pub heating_per_s: f64,
    pub dephasing_per_s: f64,
    pub thermal_nbar: f64,
    pub nu_ref_hz: f64,
    pub gamma_hz: f64,
    /// Single evaluation point for `cat` sweeps.
    pub nu_hz: f64,
    pub report_nu_hz: Vec<f64>,
    pub convention: FidelityConvention,
    pub rtol: f64,
    pub atol: f64,
    pub wigner: WignerBlock,
}

impl Default for BosonicBlock {
    fn default() -> Self {
        let b = baseline_rates();
        let l = LindbladOptions::default();
        Self {
            alpha_re: 3.0,
            alpha_im: 0.0,
            n_max: DEFAULT_N_MAX,
            prep_time_s: DEFAULT_PREP_WINDOW,
            calibrate_prep: false,
            calibration_fidelity: ionfreq_core::bosonic::CALIBRATION_PREP_FIDELITY,
            idle_time_s: 1e-3,
            heating_per_s: b.heating,
            dephasing_per_s: b.dephasing,
            thermal_nbar: b.initial_thermal_nbar,
            nu_ref_hz: 1e6,
            gamma_hz: 20e6,
            nu_hz: 1e6,
            report_nu_hz: vec![1e6, 2e6, 5e6, 10e6, 20e6, 30e6, 50e6],
            convention: FidelityConvention::Root,
            rtol: l.tolerance.rtol,
            atol: l.tolerance.atol,
            wigner: WignerBlock::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeBlock {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    #[serde(default = "one")]
    pub rounds: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuntimeBlock {
    /// Species of the shot model; independent of the `[species]` block.
    pub species: String,
    pub gamma_hz: f64,
    pub t_state_prep_s: f64,
    pub t_quantum_ops_s: f64,
    pub t_measure_s: f64,
    pub anomalous_rate_per_s: f64,
    pub anomalous_exponent: f64,
    pub nu_ref_hz: f64,
    pub nbar_per_detection: f64,
    pub use_resolved_correction: bool,
    pub target_nbar: f64,
    /// Laser-cooling time at `nu_ref_hz` that fixes the cooling intensity.
    pub reference_cooling_time_s: f64,
    /// Overrides the calibration from `reference_cooling_time_s`.
    pub scattering_rate_per_s: Option<f64>,
    pub low_nu_hz: f64,
    pub high_nu_hz: f64,
    pub mode: CoolingTimeMode,
    pub codes: Vec<CodeBlock>,
    pub qec_nu_min_hz: f64,
    pub qec_nu_max_hz: f64,
    pub qec_points: usize,
    pub transport_reference_time_s: f64,
    pub transport_exponent: f64,
    pub gate_scheme: String,
    pub gate_reference_time_s: f64,
}

impl Default for RuntimeBlock {
    fn default() -> Self {
        let parts = ShotParts::default();
        Self {
            species: "Yb-171".into(),
            gamma_hz: 20e6,
            t_state_prep_s: parts.t_state_prep,
            t_quantum_ops_s: parts.t_quantum_ops,
            t_measure_s: parts.t_measure,
            anomalous_rate_per_s: 1000.0,
            anomalous_exponent: 2.0,
            nu_ref_hz: 1e6,
            nbar_per_detection: 11.0,
            use_resolved_correction: false,
            target_nbar: 0.15,
            reference_cooling_time_s: ionfreq_core::runtime::REFERENCE_COOLING_TIME,
            scattering_rate_per_s: None,
            low_nu_hz: 1e6,
            high_nu_hz: 40e6,
            mode: CoolingTimeMode::Quotient,
            codes: vec![
                CodeBlock { n: 5, k: 1, d: 3, rounds: 1 },
                CodeBlock { n: 144, k: 12, d: 12, rounds: 1 },
            ],
            qec_nu_min_hz: 1e6,
            qec_nu_max_hz: 100e6,
            qec_points: 25,
            transport_reference_time_s: 100e-6,
            transport_exponent: TRANSPORT_EXPONENT,
            gate_scheme: "ms".into(),
            gate_reference_time_s: 100e-6,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputBlock {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
    /// Significant digits.
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// Dotted key path into this configuration, e.g. `cooling.nu_hz`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepBlock {
    pub axes: Vec<SweepAxis>,
    pub observable: String,
}

fn hz(rad_s: f64) -> f64 {
    ionfreq_core::constants::ordinary(rad_s)
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text, path.extension().is_some_and(|e| e == "json"))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn parse(text: &str, json: bool) -> CliResult<Self> {
        if json {
            Ok(serde_json::from_str(text)?)
        } else {
            Ok(toml::from_str(text)?)
        }
    }

    pub fn registry(&self) -> CliResult<SpeciesRegistry> {
        let mut reg = SpeciesRegistry::builtin();
        if let Some(block) = &self.species {
            if let Some(file) = &block.overrides_file {
                let path = self.base_dir.join(file);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
                let records: Vec<SpeciesRecord> = serde_json::from_str(&text)?;
                reg = reg.with_overrides(&records)?;
            }
            reg = reg.with_overrides(&block.overrides)?;
        }
        Ok(reg)
    }

    /// The configured species, if any.
    pub fn species_opt(&self) -> CliResult<Option<IonSpecies>> {
        match self.species.as_ref().and_then(|b| b.name.as_deref()) {
            Some(name) => Ok(Some(self.registry()?.lookup(name)?)),
            None => Ok(None),
        }
    }

    pub fn species(&self) -> CliResult<IonSpecies> {
        self.species_opt()?
            .ok_or_else(|| CliError::config("missing required key `species.name`"))
    }

    fn trap_value(value: Option<f64>, key: &str) -> CliResult<f64> {
        value.ok_or_else(|| CliError::config(format!("missing required key `trap.{key}`")))
    }

    /// Forward trap configuration from the drive parameters.
    pub fn trap_config(&self) -> CliResult<TrapConfig> {
        let t = &self.trap;
        Ok(TrapConfig::new(
            self.species()?,
            Self::trap_value(t.rf_amplitude_v, "rf_amplitude_v")?,
            angular(Self::trap_value(t.rf_frequency_hz, "rf_frequency_hz")?),
            Self::trap_value(t.ion_electrode_distance_m, "ion_electrode_distance_m")?,
            t.differential_drive,
        )?)
    }

    pub fn design_target(&self) -> CliResult<Option<DesignTarget>> {
        let Some(d) = &self.trap.design else {
            return Ok(None);
        };
        let nu = d
            .target_nu_hz
            .ok_or_else(|| CliError::config("missing required key `trap.design.target_nu_hz`"))?;
        let species = if d.candidates.is_empty() {
            SpeciesChoice::Fixed(self.species()?)
        } else {
            let reg = self.registry()?;
            SpeciesChoice::Candidates(
                d.candidates
                    .iter()
                    .map(|n| reg.lookup(n))
                    .collect::<Result<_, _>>()?,
            )
        };
        let defaults = DesignBounds::default();
        let pick = |min: Option<f64>, max: Option<f64>, def: Bounds, scale: f64| {
            Bounds::new(min.map_or(def.min, |v| v * scale), max.map_or(def.max, |v| v * scale))
        };
        let two_pi = angular(1.0);
        Ok(Some(DesignTarget {
            target_nu: angular(nu),
            target_q: d.target_q,
            species,
            rf_amplitude: self.trap.rf_amplitude_v,
            rf_frequency: self.trap.rf_frequency_hz.map(angular),
            ion_electrode_distance: self.trap.ion_electrode_distance_m,
            differential_drive: self.trap.differential_drive,
            bounds: DesignBounds {
                rf_amplitude: pick(d.rf_amplitude_min_v, d.rf_amplitude_max_v, defaults.rf_amplitude, 1.0),
                rf_frequency: pick(d.rf_frequency_min_hz, d.rf_frequency_max_hz, defaults.rf_frequency, two_pi),
                ion_electrode_distance: pick(
                    d.ion_electrode_distance_min_m,
                    d.ion_electrode_distance_max_m,
                    defaults.ion_electrode_distance,
                    1.0,
                ),
            },
        }))
    }

    pub fn cooling_setup(&self) -> CliResult<CoolingSetup> {
        let c = &self.cooling;
        let species = self.species_opt()?;
        let gamma = c
            .gamma_hz
            .map(angular)
            .or(species.as_ref().map(|s| s.linewidth))
            .unwrap_or(angular(20e6));
        let nu = c.nu_hz.map(angular).unwrap_or(2.5 * gamma);
        let eta = c
            .lamb_dicke
            .or(species.as_ref().map(|s| lamb_dicke(s, nu)))
            .unwrap_or(0.1);
        let detuning = c.detuning_hz.map(angular).unwrap_or(regime_detuning(gamma, nu));
        Ok(match c.scattering_rate_per_s {
            Some(rsc) => CoolingSetup::from_scattering_rate(gamma, rsc, detuning, eta, nu)?,
            None => CoolingSetup::new(gamma, c.rabi_over_gamma * gamma, detuning, eta, nu)?,
        })
    }

    pub fn initial_ladder(&self) -> FockLadderState {
        let n_max = self
            .cooling
            .n_max
            .unwrap_or_else(|| FockLadderState::default_n_max(self.cooling.nbar0));
        FockLadderState::thermal(self.cooling.nbar0, n_max)
    }

    pub fn anomalous_spec(&self) -> CliResult<AnomalousNoiseSpec> {
        let n = &self.noise;
        let mut spec = AnomalousNoiseSpec {
            nu_ref: angular(n.nu_ref_hz),
            r0_ref: n.r0_ref_m,
            t_ref: n.t_ref_k,
            alpha: n.alpha,
            beta: n.beta,
            gamma_t: n.gamma_t,
            ..AnomalousNoiseSpec::default()
        };
        if let Some(s0) = n.s0 {
            spec.s0 = s0;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn dephasing_spec(&self) -> DephasingSpec {
        DephasingSpec {
            rate_ref: self.noise.dephasing_ref_hz,
            nu_ref: angular(self.noise.dephasing_nu_ref_hz),
        }
    }

    pub fn measurement_spec(&self, linewidth: f64) -> CliResult<MeasurementSpec> {
        let n = &self.noise;
        let spec = MeasurementSpec {
            detect_time: n.detect_time_s,
            nbar_per_detection_ref: n.nbar_per_detection,
            nu_ref: angular(n.detection_nu_ref_hz),
            use_resolved_correction: n.use_resolved_correction,
            linewidth,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.bosonic.alpha_re, self.bosonic.alpha_im)
    }

    pub fn baseline_rates(&self) -> CliResult<DecoherenceRates> {
        let b = &self.bosonic;
        let rates = DecoherenceRates {
            heating: b.heating_per_s,
            dephasing: b.dephasing_per_s,
            initial_thermal_nbar: b.thermal_nbar,
        };
        rates.validate()?;
        Ok(rates)
    }

    pub fn cat_config(&self) -> CatReportConfig {
        let b = &self.bosonic;
        let mut lindblad = LindbladOptions::default();
        lindblad.tolerance.rtol = b.rtol;
        lindblad.tolerance.atol = b.atol;
        CatReportConfig {
            n_max: b.n_max,
            prep_time: b.prep_time_s,
            nu_ref: angular(b.nu_ref_hz),
            convention: b.convention,
            lindblad,
        }
    }

    pub fn shot_parts(&self) -> CliResult<ShotParts> {
        let r = &self.runtime;
        let parts = ShotParts {
            t_state_prep: r.t_state_prep_s,
            t_quantum_ops: r.t_quantum_ops_s,
            t_measure: r.t_measure_s,
        };
        parts.validate()?;
        Ok(parts)
    }

    pub fn shot_model(&self) -> CliResult<ShotModel> {
        let r = &self.runtime;
        let mut species = self.registry()?.lookup(&r.species)?;
        species.linewidth = angular(r.gamma_hz);
        let nu_ref = angular(r.nu_ref_hz);
        let measurement = MeasurementSpec {
            detect_time: r.t_measure_s,
            nbar_per_detection_ref: r.nbar_per_detection,
            nu_ref,
            use_resolved_correction: r.use_resolved_correction,
            linewidth: species.linewidth,
        };
        measurement.validate()?;
        let mut model = ShotModel {
            species,
            cooling_scattering_rate: 1.0,
            anomalous_rate_ref: r.anomalous_rate_per_s,
            anomalous_exponent: r.anomalous_exponent,
            nu_ref,
            measurement,
            parts: self.shot_parts()?,
            target_nbar: r.target_nbar,
        };
        model.cooling_scattering_rate = match r.scattering_rate_per_s {
            Some(rsc) => rsc,
            None => model.calibrate_scattering_rate(nu_ref, r.reference_cooling_time_s)?,
        };
        Ok(model)
    }

    pub fn codes(&self) -> CliResult<Vec<QECCode>> {
        self.runtime
            .codes
            .iter()
            .map(|c| QECCode::new(c.n, c.k, c.d, c.rounds).map_err(CliError::from))
            .collect()
    }

    pub fn gate_scheme(&self) -> CliResult<GateScheme> {
        Ok(self.runtime.gate_scheme.parse()?)
    }
}
