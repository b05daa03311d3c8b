//! Bound-state spectra of the Hartmann and ring-shaped oscillator
//! potentials from exact quantization of the action variables
//! J = (1/2π)∮ p dx of the quantum momentum function p = (ħ/i)·∇ψ/ψ.
//!
//! The crate carries three independent routes to every level and wires them
//! against each other:
//!
//! * [`spectra`] — closed-form action variables and energies;
//! * [`residues`] — the same actions rebuilt pole by pole from Laurent
//!   matching at the fixed singularities;
//! * [`contour`] — direct numerical contour integration of p in the complex
//!   coordinate plane (argument-principle node counting), plus the
//!   classical-action quadrature;
//! * [`oracle`] — a Numerov eigensolver for the separated equations.
//!
//! Everything uses 2μ = 1 units with ħ supplied at runtime ([`UnitSystem`]).

pub mod contour;
pub mod error;
pub mod oracle;
pub mod potentials;
pub mod residues;
mod rk;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};
pub use potentials::{PotentialSpec, QuantumNumbers, SeparationConstants};
pub use spectra::{LevelRecord, TurningPoints};
pub use units::UnitSystem;
