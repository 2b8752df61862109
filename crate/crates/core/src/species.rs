//! Trapped-ion species and their cooling transitions.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::constants::{angular, ATOMIC_MASS_UNIT, ELEMENTARY_CHARGE, TWO_PI};
use crate::error::{invalid, require_positive, Error, Result};

/// An ion species with the cycling transition used for Doppler cooling and detection.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct IonSpecies {
    pub name: String,
    /// kg
    pub mass: f64,
    /// Charge in units of the elementary charge.
    pub charge: u32,
    /// Natural linewidth Γ of the cycling transition, rad/s.
    pub linewidth: f64,
    /// m
    pub cooling_wavelength: f64,
}

impl IonSpecies {
    pub fn new(
        name: impl Into<String>,
        mass: f64,
        charge: u32,
        linewidth: f64,
        cooling_wavelength: f64,
    ) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("linewidth", linewidth)?;
        require_positive("cooling_wavelength", cooling_wavelength)?;
        if charge == 0 {
            return Err(invalid("charge", "must be at least 1"));
        }
        Ok(Self {
            name: name.into(),
            mass,
            charge,
            linewidth,
            cooling_wavelength,
        })
    }

    /// Builds a species from tabulated units: amu, Hz (Γ/2π) and nm.
    pub fn from_atomic_data(
        name: impl Into<String>,
        mass_amu: f64,
        charge: u32,
        gamma_hz: f64,
        wavelength_nm: f64,
    ) -> Result<Self> {
        Self::new(
            name,
            mass_amu * ATOMIC_MASS_UNIT,
            charge,
            angular(gamma_hz),
            wavelength_nm * 1e-9,
        )
    }

    pub fn mass_amu(&self) -> f64 {
        self.mass / ATOMIC_MASS_UNIT
    }

    /// Charge in coulomb.
    pub fn charge_coulomb(&self) -> f64 {
        f64::from(self.charge) * ELEMENTARY_CHARGE
    }

    /// Q/m in C/kg.
    pub fn charge_to_mass(&self) -> f64 {
        self.charge_coulomb() / self.mass
    }

    /// Cooling-laser wavenumber k = 2π/λ, 1/m.
    pub fn wavenumber(&self) -> f64 {
        TWO_PI / self.cooling_wavelength
    }

    pub fn to_record(&self) -> SpeciesRecord {
        SpeciesRecord {
            name: self.name.clone(),
            mass_amu: self.mass_amu(),
            charge: self.charge,
            gamma_hz: self.linewidth / TWO_PI,
            wavelength_nm: self.cooling_wavelength * 1e9,
        }
    }
}

/// Species entry in tabulated units, as read from a species-override file.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesRecord {
    pub name: String,
    pub mass_amu: f64,
    pub charge: u32,
    pub gamma_hz: f64,
    pub wavelength_nm: f64,
}

impl SpeciesRecord {
    pub fn to_species(&self) -> Result<IonSpecies> {
        IonSpecies::from_atomic_data(
            self.name.clone(),
            self.mass_amu,
            self.charge,
            self.gamma_hz,
            self.wavelength_nm,
        )
    }
}

// name, mass number, Γ/2π (Hz), cooling wavelength (nm)
const BUILTIN: &[(&str, f64, f64, f64)] = &[
    ("Be-9", 9.0, 19.4e6, 313.13),
    ("Mg-25", 25.0, 41.3e6, 279.55),
    ("Ca-40", 40.0, 22.4e6, 396.96),
    ("Sr-88", 88.0, 21.5e6, 421.67),
    ("Ba-138", 138.0, 15.1e6, 493.41),
    ("Yb-171", 171.0, 19.6e6, 369.53),
    ("Lu-175", 175.0, 2.45e6, 646.27),
];

/// Immutable lookup table of ion species, keyed case-insensitively by name.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesRegistry {
    entries: Vec<IonSpecies>,
}

impl SpeciesRegistry {
    /// The built-in table of common singly charged species.
    pub fn builtin() -> Self {
        let entries = BUILTIN
            .iter()
            .map(|&(name, mass, gamma_hz, nm)| {
                IonSpecies::from_atomic_data(name, mass, 1, gamma_hz, nm)
                    .expect("built-in species data is valid")
            })
            .collect();
        Self { entries }
    }

    /// Returns a registry with `records` replacing built-in entries of the same
    /// name, or appended when new.
    pub fn with_overrides(mut self, records: &[SpeciesRecord]) -> Result<Self> {
        for record in records {
            let species = record.to_species()?;
            match self
                .entries
                .iter_mut()
                .find(|s| s.name.eq_ignore_ascii_case(&species.name))
            {
                Some(slot) => *slot = species,
                None => self.entries.push(species),
            }
        }
        Ok(self)
    }

    pub fn lookup(&self, name: &str) -> Result<IonSpecies> {
        self.entries
            .iter()
            .find(|s| s.name.eq_ignore_ascii_case(name.trim()))
            .cloned()
            .ok_or_else(|| Error::UnknownSpecies {
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &IonSpecies> {
        self.entries.iter()
    }
}

impl Default for SpeciesRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Looks `name` up in the built-in registry.
pub fn lookup_species(name: &str) -> Result<IonSpecies> {
    SpeciesRegistry::builtin().lookup(name)
}
