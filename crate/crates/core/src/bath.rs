//! Phonon-bath description: spectral densities, thermal occupation, Markovian
//! dephasing rates and the system operators the bath couples to.
//!
//! The spectral-density parameters are not fixed by any measurement of the
//! modelled dots; the defaults (`α = 0.01`, `ω_c = 2 meV`) only set the rate
//! scale of the Lindblad backend.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::linalg::HermitianOperator;
use crate::model::{excitation_number, excitation_projector};
use crate::{Error, Result};

/// Boltzmann constant in meV/K.
pub const K_B: f64 = 0.086173;

pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_OMEGA_C: f64 = 2.0;
pub const DEFAULT_TEMPERATURE: f64 = 77.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralFamily {
    /// `J(ω) = α ω e^{−ω/ω_c}`.
    Ohmic,
    /// `J(ω) = α ω³/ω_c² e^{−ω/ω_c}`.
    SuperOhmic,
}

impl SpectralFamily {
    /// Power of ω at low frequency.
    pub fn exponent(self) -> i32 {
        match self {
            SpectralFamily::Ohmic => 1,
            SpectralFamily::SuperOhmic => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    family: SpectralFamily,
    alpha: f64,
    omega_c: f64,
}

impl SpectralDensity {
    pub fn new(family: SpectralFamily, alpha: f64, omega_c: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::InvalidArgument(format!("alpha must be ≥ 0, got {alpha}")));
        }
        if !(omega_c > 0.0) {
            return Err(Error::InvalidArgument(format!("omega_c must be > 0, got {omega_c}")));
        }
        Ok(Self { family, alpha, omega_c })
    }

    pub fn family(&self) -> SpectralFamily {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }
}

impl Default for SpectralDensity {
    fn default() -> Self {
        Self { family: SpectralFamily::SuperOhmic, alpha: DEFAULT_ALPHA, omega_c: DEFAULT_OMEGA_C }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingMode {
    /// One reservoir coupled identically to every qubit.
    Common,
    /// One reservoir per qubit.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub sd: SpectralDensity,
    /// Kelvin.
    pub temperature: f64,
    pub coupling_mode: CouplingMode,
    /// λ, a multiplier on the system-bath coupling (rates scale as λ²).
    pub coupling_scale: f64,
}

impl BathSpec {
    pub fn new(
        sd: SpectralDensity,
        temperature: f64,
        coupling_mode: CouplingMode,
        coupling_scale: f64,
    ) -> Result<Self> {
        if !(temperature >= 0.0) {
            return Err(Error::InvalidArgument(format!("temperature must be ≥ 0, got {temperature}")));
        }
        if !(coupling_scale >= 0.0) {
            return Err(Error::InvalidArgument(format!("coupling scale must be ≥ 0, got {coupling_scale}")));
        }
        Ok(Self { sd, temperature, coupling_mode, coupling_scale })
    }
}

impl Default for BathSpec {
    fn default() -> Self {
        Self {
            sd: SpectralDensity::default(),
            temperature: DEFAULT_TEMPERATURE,
            coupling_mode: CouplingMode::Common,
            coupling_scale: 1.0,
        }
    }
}

/// Single harmonic mode of a finite bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathMode {
    /// meV.
    pub omega: f64,
    /// meV.
    pub g: f64,
    /// Fock-space truncation.
    pub levels: usize,
}

impl BathMode {
    pub fn new(omega: f64, g: f64, levels: usize) -> Result<Self> {
        let m = Self { omega, g, levels };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(Error::InvalidArgument(format!("mode frequency must be > 0, got {}", self.omega)));
        }
        if self.levels < 2 {
            return Err(Error::InvalidArgument(format!("mode needs ≥ 2 levels, got {}", self.levels)));
        }
        Ok(())
    }
}

pub fn spectral_density_value(sd: &SpectralDensity, omega: f64) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::InvalidArgument(format!("frequency must be ≥ 0, got {omega}")));
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    let cutoff = (-omega / sd.omega_c).exp();
    Ok(match sd.family {
        SpectralFamily::Ohmic => sd.alpha * omega * cutoff,
        SpectralFamily::SuperOhmic => sd.alpha * omega.powi(3) / (sd.omega_c * sd.omega_c) * cutoff,
    })
}

/// Bose–Einstein occupation `1/(e^{ω/k_BT} − 1)`; zero at `T = 0`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument(format!("frequency must be > 0, got {omega}")));
    }
    if !(temperature >= 0.0) {
        return Err(Error::InvalidArgument(format!("temperature must be ≥ 0, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega / (K_B * temperature)).exp_m1())
}

/// Operators the bath couples to: `Σ_i |X_i⟩⟨X_i|` for a common bath, the
/// individual projectors for independent baths.
pub fn build_coupling_operators(mode: CouplingMode, n_qubits: usize) -> Result<Vec<HermitianOperator>> {
    match mode {
        CouplingMode::Common => Ok(vec![excitation_number(n_qubits)?]),
        CouplingMode::Independent => {
            (0..n_qubits).map(|q| excitation_projector(q, n_qubits)).collect()
        }
    }
}

/// Markovian pure-dephasing rate `γ = 2π λ² J(ω_ref) (2 n̄(ω_ref, T) + 1)`.
pub fn dephasing_rate(spec: &BathSpec, omega_ref: f64) -> Result<f64> {
    if !(omega_ref > 0.0) {
        return Err(Error::InvalidArgument(format!("reference frequency must be > 0, got {omega_ref}")));
    }
    let j = spectral_density_value(&spec.sd, omega_ref)?;
    let n = thermal_occupation(omega_ref, spec.temperature)?;
    Ok(2.0 * PI * spec.coupling_scale.powi(2) * j * (2.0 * n + 1.0))
}

/// Dephasing rate matching a finite set of modes over `[0, window]`.
///
/// For pure dephasing each mode suppresses the coherence by
/// `exp(−(g²/2ω²)(1 − cos ωt) coth(ω/2k_BT))`. The returned `γ` makes the
/// Lindblad envelope `e^{−γt/2}` reach the time-averaged exponent at
/// `t = window`.
pub fn matched_dephasing_rate(modes: &[BathMode], temperature: f64, window: f64) -> Result<f64> {
    if !(window > 0.0) {
        return Err(Error::InvalidArgument(format!("matching window must be > 0, got {window}")));
    }
    let mut exponent = 0.0;
    for m in modes {
        m.validate()?;
        let coth = 2.0 * thermal_occupation(m.omega, temperature)? + 1.0;
        exponent += m.g * m.g / (2.0 * m.omega * m.omega) * coth;
    }
    Ok(2.0 * exponent / window)
}

/// Largest gap between adjacent distinct eigenvalues, used as the
/// characteristic frequency of the Markovian rate.
pub fn dominant_gap(eigenvalues: &[f64]) -> Option<f64> {
    eigenvalues
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&g| g > crate::spectra::DEGENERACY_TOL)
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.max(g))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn super_ohmic() -> SpectralDensity {
        SpectralDensity::new(SpectralFamily::SuperOhmic, 0.01, 2.0).unwrap()
    }

    #[test]
    fn spectral_density_examples() {
        assert_relative_eq!(spectral_density_value(&super_ohmic(), 2.0).unwrap(), 0.007357588823428847, max_relative = 1e-12);
        let ohm = SpectralDensity::new(SpectralFamily::Ohmic, 1.0, 1e6).unwrap();
        assert_relative_eq!(spectral_density_value(&ohm, 1.0).unwrap(), 1.0, epsilon = 1e-5);
        for sd in [super_ohmic(), ohm] {
            assert_eq!(spectral_density_value(&sd, 0.0).unwrap(), 0.0);
            assert!(spectral_density_value(&sd, -1.0).is_err());
        }
        assert!(SpectralDensity::new(SpectralFamily::Ohmic, -1.0, 1.0).is_err());
        assert!(SpectralDensity::new(SpectralFamily::Ohmic, 1.0, 0.0).is_err());
    }

    #[test]
    fn occupation_examples() {
        let t = 1.0 / K_B;
        assert_relative_eq!(thermal_occupation(1.0, t).unwrap(), 1.0 / (std::f64::consts::E - 1.0), max_relative = 1e-12);
        assert_eq!(thermal_occupation(3.0, 0.0).unwrap(), 0.0);
        // x = 1/(0.086173·77) = 0.1507086…
        assert_relative_eq!(thermal_occupation(1.0, 77.0).unwrap(), 6.147875299096013, max_relative = 1e-10);
        assert!(thermal_occupation(0.0, 77.0).is_err());
    }

    #[test]
    fn coupling_operator_examples() {
        let common = build_coupling_operators(CouplingMode::Common, 2).unwrap();
        assert_eq!(common.len(), 1);
        assert_eq!(common[0], HermitianOperator::from_diagonal(&[0.0, 1.0, 1.0, 2.0]));
        let ind = build_coupling_operators(CouplingMode::Independent, 1).unwrap();
        assert_eq!(ind, vec![HermitianOperator::from_diagonal(&[0.0, 1.0])]);
        let c3 = build_coupling_operators(CouplingMode::Common, 3).unwrap();
        assert_eq!(c3[0], HermitianOperator::from_diagonal(&[0.0, 1.0, 1.0, 2.0, 1.0, 2.0, 2.0, 3.0]));
    }

    #[test]
    fn rate_examples() {
        let mut spec = BathSpec::new(super_ohmic(), 0.0, CouplingMode::Common, 1.0).unwrap();
        assert_relative_eq!(dephasing_rate(&spec, 2.0).unwrap(), 0.046229093991636876, max_relative = 1e-12);
        let g1 = dephasing_rate(&spec, 2.0).unwrap();
        spec.coupling_scale = 2.0;
        assert_relative_eq!(dephasing_rate(&spec, 2.0).unwrap(), 4.0 * g1, max_relative = 1e-14);
        spec.coupling_scale = 0.0;
        assert_eq!(dephasing_rate(&spec, 2.0).unwrap(), 0.0);
        assert!(dephasing_rate(&spec, 0.0).is_err());
        assert!(BathSpec::new(super_ohmic(), -1.0, CouplingMode::Common, 1.0).is_err());
    }

    #[test]
    fn rate_grows_with_temperature() {
        let mut last = 0.0;
        for t in [0.0, 4.0, 20.0, 77.0, 300.0] {
            let spec = BathSpec::new(super_ohmic(), t, CouplingMode::Common, 1.0).unwrap();
            let g = dephasing_rate(&spec, 1.0).unwrap();
            assert!(g > last);
            last = g;
        }
    }

    #[test]
    fn matched_rate_example() {
        let modes = [BathMode::new(1.0, 0.2, 4).unwrap(), BathMode::new(2.0, 0.4, 4).unwrap()];
        // 2 · (0.02 + 0.02) / 4
        assert_relative_eq!(matched_dephasing_rate(&modes, 0.0, 4.0).unwrap(), 0.02, max_relative = 1e-14);
        assert!(matched_dephasing_rate(&modes, 77.0, 4.0).unwrap() > 0.02);
        assert!(matched_dephasing_rate(&modes, 0.0, 0.0).is_err());
    }

    #[test]
    fn gap_selection() {
        assert_eq!(dominant_gap(&[-1.0, -1.0, 0.5, 1.0]), Some(1.5));
        assert_eq!(dominant_gap(&[0.0, 0.0]), None);
    }
}
