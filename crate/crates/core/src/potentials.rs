//! The two potential families and the algebra connecting quantum numbers to
//! the separation constants of the three separated one-dimensional problems.
//!
//! Both potentials share the ring-shaped term β/(r² sin²θ):
//!
//! * Hartmann:             V = α/r + β/(r² sin²θ),   α < 0, β ≥ 0
//! * ring-shaped oscillator: V = α r² + β/(r² sin²θ), α > 0, β ≥ 0
//!
//! Separating the wave equation in spherical coordinates with
//! ψ = (R/r)(H/√sinθ)K(φ) yields Schrödinger-like equations for R and H,
//! linked by the constants `a` (θ ↔ r) and `b` (φ ↔ θ). The azimuthal factor
//! is K = e^{imφ}, which fixes b = ħ²m².

use crate::error::{Error, Result};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    /// Attractive Coulomb well plus ring term. `alpha` must be negative:
    /// only attraction supports a bound spectrum, and all downstream
    /// closed forms use |alpha|, so no generality is lost.
    Hartmann { alpha: f64, beta: f64 },
    /// Harmonic radial confinement plus ring term; `alpha` must be positive.
    RingOscillator { alpha: f64, beta: f64 },
}

impl PotentialSpec {
    pub fn hartmann(alpha: f64, beta: f64) -> Result<Self> {
        Self::Hartmann { alpha, beta }.validated()
    }

    pub fn ring_oscillator(alpha: f64, beta: f64) -> Result<Self> {
        Self::RingOscillator { alpha, beta }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let (alpha, beta) = (self.alpha(), self.beta());
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(
                "potential parameters must be finite".into(),
            ));
        }
        if beta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be nonnegative, got {beta}"
            )));
        }
        match self {
            Self::Hartmann { .. } if alpha >= 0.0 => Err(Error::InvalidParameter(format!(
                "hartmann requires alpha < 0 (attractive well), got {alpha}"
            ))),
            Self::RingOscillator { .. } if alpha <= 0.0 => Err(Error::InvalidParameter(
                format!("ring oscillator requires alpha > 0, got {alpha}"),
            )),
            ok => Ok(ok),
        }
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        match *self {
            Self::Hartmann { alpha, .. } | Self::RingOscillator { alpha, .. } => alpha,
        }
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        match *self {
            Self::Hartmann { beta, .. } | Self::RingOscillator { beta, .. } => beta,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hartmann { .. } => "hartmann",
            Self::RingOscillator { .. } => "ring",
        }
    }

    /// Radial part V₁(r) of the potential.
    #[inline]
    pub fn radial_potential(&self, r: f64) -> f64 {
        match *self {
            Self::Hartmann { alpha, .. } => alpha / r,
            Self::RingOscillator { alpha, .. } => alpha * r * r,
        }
    }
}

/// (n_r, n_θ, m). Radial and polar quantum numbers count nodes and are
/// nonnegative; m runs over all integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    pub n_r: u32,
    pub n_theta: u32,
    pub m: i32,
}

impl QuantumNumbers {
    pub fn new(n_r: u32, n_theta: u32, m: i32) -> Self {
        Self { n_r, n_theta, m }
    }
}

/// Constants produced by separating the three-dimensional problem:
/// `a` couples the θ and r equations, `b = ħ²m²` couples φ and θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationConstants {
    pub a: f64,
    pub b: f64,
}

/// Radial problem with the angular degrees of freedom folded into an
/// effective orbital index L, where L(L+1) = l² − 1/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveRadialProblem {
    pub potential: PotentialSpec,
    pub big_l: f64,
    pub energy_hint: Option<f64>,
}

impl EffectiveRadialProblem {
    pub fn with_energy_hint(mut self, energy: f64) -> Self {
        self.energy_hint = Some(energy);
        self
    }
}

/// Polar problem after absorbing the ring strength into
/// μ² = m² + β/ħ², the coefficient of the 1/sin²θ term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveAngularProblem {
    pub mu_squared: f64,
    pub l_squared_hint: Option<f64>,
}

/// b = ħ²m², from the single-valuedness of e^{imφ}.
pub fn b_from_m(m: i32, units: &UnitSystem) -> f64 {
    let mf = m as f64;
    units.hbar_sq() * mf * mf
}

/// μ² = m² + β/ħ².
pub fn mu_squared(m: i32, beta: f64, units: &UnitSystem) -> f64 {
    let mf = m as f64;
    mf * mf + beta / units.hbar_sq()
}

/// Inverts the θ quantization condition
/// √((ħ/2)² + a) − √(b+β) − ħ/2 = ħ n_θ for the separation constant a.
pub fn a_from_angular_quantization(
    n_theta: u32,
    m: i32,
    beta: f64,
    units: &UnitSystem,
) -> f64 {
    let h = units.hbar();
    let root = h * n_theta as f64 + (b_from_m(m, units) + beta).sqrt() + 0.5 * h;
    root * root - 0.25 * h * h
}

/// l² = (n_θ + μ + 1/2)², the eigenvalue of the polar equation.
pub fn l_squared(n_theta: u32, m: i32, beta: f64, units: &UnitSystem) -> f64 {
    let l = n_theta as f64 + mu_squared(m, beta, units).sqrt() + 0.5;
    l * l
}

/// Maps a level onto its effective radial problem; L = l − 1/2 = n_θ + μ.
pub fn effective_radial_problem(
    potential: &PotentialSpec,
    qn: &QuantumNumbers,
    units: &UnitSystem,
) -> EffectiveRadialProblem {
    let big_l = qn.n_theta as f64 + mu_squared(qn.m, potential.beta(), units).sqrt();
    EffectiveRadialProblem {
        potential: *potential,
        big_l,
        energy_hint: None,
    }
}

/// Polar problem for a level; the only input the θ equation needs is μ².
pub fn effective_angular_problem(
    qn: &QuantumNumbers,
    beta: f64,
    units: &UnitSystem,
) -> EffectiveAngularProblem {
    EffectiveAngularProblem {
        mu_squared: mu_squared(qn.m, beta, units),
        l_squared_hint: Some(l_squared(qn.n_theta, qn.m, beta, units)),
    }
}
