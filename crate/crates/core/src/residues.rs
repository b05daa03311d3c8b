//! Pole-by-pole evaluation of the action integrals.
//!
//! Each action J = (1/2π)∮ p dx is computed by distorting the contour around
//! the turning points onto the fixed poles of the integrand and matching a
//! short Laurent expansion p = b₁/s + a₀ + a₁ s + … of the momentum function
//! against its Riccati equation near each pole. Every matching reduces to a
//! quadratic with two roots; the physical root is the one whose ħ → 0 limit
//! reproduces the classical momentum branch (positive just below the branch
//! cut joining the turning points). Both roots are retained so tests can
//! assert that the rejected branch breaks the assembly.
//!
//! Branch table:
//!
//! | pole                | quadratic               | kept root                       |
//! |---------------------|-------------------------|---------------------------------|
//! | θ-plane y = ∞       | b₁² = −(β+b)            | b₁ = +i√(β+b)                   |
//! | θ-plane y = ±i      | a₀² − ħa₀ − a = 0       | a₀ = ħ/2 − √((ħ/2)²+a)          |
//! | radial r = 0        | b₁² − iħb₁ + a = 0      | b₁ = iħ/2 − i√((ħ/2)²+a)        |
//! | Coulomb r = ∞       | a₀² = E                 | a₀ = +i√(−E) (decaying tail)    |
//! | oscillator r = ∞    | b₁² = −α                | b₁ = +i√α                       |
//!
//! Contour orientation (the distorted loops around y = ±i and r = 0 run
//! clockwise) is already folded into the returned values.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::units::UnitSystem;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Leading Laurent coefficients of the momentum function at a fixed pole.
/// A coefficient is `None` when the matching does not determine it (or it is
/// not needed for the residue). `rejected_*` hold the discarded quadratic
/// roots, when the matching had two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentCoefficients {
    pub b1: Option<Complex64>,
    pub a0: Option<Complex64>,
    pub a1: Option<Complex64>,
    pub rejected_b1: Option<Complex64>,
    pub rejected_a0: Option<Complex64>,
}

impl LaurentCoefficients {
    fn empty() -> Self {
        Self {
            b1: None,
            a0: None,
            a1: None,
            rejected_b1: None,
            rejected_a0: None,
        }
    }
}

/// Which fixed pole a contribution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleSite {
    ThetaPlusI,
    ThetaMinusI,
    ThetaInfinity,
    RadialOrigin,
    RadialInfinity,
}

/// Selects one of the two first-order poles at y = ±i of the θ-plane
/// integrand (y = −cot θ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaPole {
    PlusI,
    MinusI,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleContribution {
    pub site: PoleSite,
    /// Real contribution to J; the imaginary residue of the complex
    /// assembly is below 1e-14 by construction.
    pub value: f64,
    pub coefficients: LaurentCoefficients,
}

fn real_part(site: PoleSite, value: Complex64, coefficients: LaurentCoefficients) -> PoleContribution {
    debug_assert!(
        value.im.abs() <= 1e-14 * (1.0 + value.re.abs()),
        "pole contribution acquired an imaginary part: {value}"
    );
    PoleContribution {
        site,
        value: value.re,
        coefficients,
    }
}

/// Contribution J_∞ = −√(β+b) of the pole at y = ∞ (s = 1/y → 0).
/// Matching the 1/s² powers gives b₁² = −(β+b); the classical branch just
/// below the cut fixes b₁ = +i√(β+b).
pub fn theta_infinity_contribution(
    beta: f64,
    b: f64,
    units: &UnitSystem,
) -> Result<PoleContribution> {
    let _ = units; // value is ħ-independent; kept for interface symmetry
    let radicand = beta + b;
    if radicand < 0.0 {
        return Err(Error::Domain(format!(
            "beta + b must be nonnegative, got {radicand}"
        )));
    }
    let b1 = I * radicand.sqrt();
    let coeffs = LaurentCoefficients {
        b1: Some(b1),
        a0: Some(Complex64::new(0.0, 0.0)),
        rejected_b1: Some(-b1),
        ..LaurentCoefficients::empty()
    };
    // counterclockwise loop around s = 0; the integrand's other factor
    // (s² + 1) equals 1 there, so the residue is b₁ itself
    let value = I * b1;
    Ok(real_part(PoleSite::ThetaInfinity, value, coeffs))
}

/// Contribution of the pole at y = +i or y = −i. Matching the constant terms
/// gives a₀² − ħa₀ − a = 0; the classical limit keeps
/// a₀ = ħ/2 − √((ħ/2)² + a), and the clockwise loop yields J = −a₀/2.
/// The two poles contribute identically.
pub fn theta_pole_contribution(
    a: f64,
    units: &UnitSystem,
    which: ThetaPole,
) -> Result<PoleContribution> {
    let h = units.hbar();
    let radicand = 0.25 * h * h + a;
    if radicand < 0.0 {
        return Err(Error::Domain(format!(
            "(hbar/2)^2 + a must be nonnegative, got {radicand}"
        )));
    }
    let root = radicand.sqrt();
    let a0 = Complex64::new(0.5 * h - root, 0.0);
    let rejected = Complex64::new(0.5 * h + root, 0.0);
    let coeffs = LaurentCoefficients {
        b1: Some(Complex64::new(0.0, 0.0)),
        a0: Some(a0),
        rejected_a0: Some(rejected),
        ..LaurentCoefficients::empty()
    };
    let site = match which {
        ThetaPole::PlusI => PoleSite::ThetaPlusI,
        ThetaPole::MinusI => PoleSite::ThetaMinusI,
    };
    // residue a₀/(2i) at s = 0, clockwise loop: J = −i · a₀/(2i) · ... = −a₀/2
    let value = -I * (a0 / (2.0 * I));
    Ok(real_part(site, value, coeffs))
}

/// J_θ = J_{+i} + J_{−i} + J_∞; equals the closed form
/// √((ħ/2)² + a) − √(b+β) − ħ/2.
pub fn assemble_j_theta(a: f64, b: f64, beta: f64, units: &UnitSystem) -> Result<f64> {
    let plus = theta_pole_contribution(a, units, ThetaPole::PlusI)?;
    let minus = theta_pole_contribution(a, units, ThetaPole::MinusI)?;
    let inf = theta_infinity_contribution(beta, b, units)?;
    Ok(plus.value + minus.value + inf.value)
}

/// Contribution J₀ = ħ/2 − √((ħ/2)² + a) of the radial origin.
/// Matching 1/r² powers gives b₁² − iħb₁ + a = 0; the classical branch
/// p ≈ −i√a/r keeps the lower sign, and the distorted loop is clockwise.
pub fn radial_origin_contribution(a: f64, units: &UnitSystem) -> Result<PoleContribution> {
    let h = units.hbar();
    let radicand = 0.25 * h * h + a;
    if radicand < 0.0 {
        return Err(Error::Domain(format!(
            "(hbar/2)^2 + a must be nonnegative, got {radicand}"
        )));
    }
    let root = radicand.sqrt();
    let b1 = I * (0.5 * h - root);
    let rejected = I * (0.5 * h + root);
    let coeffs = LaurentCoefficients {
        b1: Some(b1),
        rejected_b1: Some(rejected),
        ..LaurentCoefficients::empty()
    };
    let value = -I * b1; // clockwise: (1/2π)(−2πi) b₁
    Ok(real_part(PoleSite::RadialOrigin, value, coeffs))
}

/// Contribution J_∞ = |α|/(2√−E) − ħ of r = ∞ for the Coulomb radial
/// problem. The constant term satisfies a₀² = E; the decaying bound tail
/// (classical branch below the cut) selects a₀ = +i√(−E), which fixes
/// a₁ = iħ − i|α|/(2√−E). The counterclockwise residue is a₁.
pub fn radial_infinity_coulomb(
    energy: f64,
    alpha: f64,
    units: &UnitSystem,
) -> Result<PoleContribution> {
    if energy >= 0.0 {
        return Err(Error::Domain(format!(
            "coulomb tail requires E < 0, got {energy}"
        )));
    }
    let h = units.hbar();
    let kappa = (-energy).sqrt();
    let a0 = I * kappa;
    // from matching the linear terms: 2a₀a₁ − 2iħa₀ = |α| (attractive well)
    let a1 = I * h + alpha.abs() / (2.0 * a0);
    let coeffs = LaurentCoefficients {
        b1: Some(Complex64::new(0.0, 0.0)),
        a0: Some(a0),
        a1: Some(a1),
        rejected_a0: Some(-a0),
        ..LaurentCoefficients::empty()
    };
    let value = I * a1;
    Ok(real_part(PoleSite::RadialInfinity, value, coeffs))
}

/// Contribution J_∞ = E/(2√α) − 3ħ/2 of r = ∞ for the oscillator.
/// Here b₁² = −α with the classical branch b₁ = +i√α, and matching the
/// constant terms gives 2a₁b₁ = E + 3iħb₁.
pub fn radial_infinity_oscillator(
    energy: f64,
    alpha: f64,
    units: &UnitSystem,
) -> Result<PoleContribution> {
    if energy <= 0.0 {
        return Err(Error::Domain(format!(
            "oscillator tail requires E > 0, got {energy}"
        )));
    }
    if alpha <= 0.0 {
        return Err(Error::Domain(format!(
            "oscillator tail requires alpha > 0, got {alpha}"
        )));
    }
    let h = units.hbar();
    let b1 = I * alpha.sqrt();
    let a1 = energy / (2.0 * b1) + 1.5 * I * h;
    let coeffs = LaurentCoefficients {
        b1: Some(b1),
        a0: Some(Complex64::new(0.0, 0.0)),
        a1: Some(a1),
        rejected_b1: Some(-b1),
        ..LaurentCoefficients::empty()
    };
    let value = I * a1;
    Ok(real_part(PoleSite::RadialInfinity, value, coeffs))
}

/// Radial action from pole contributions: J₀ + J_∞ for Hartmann, and
/// (J₀ + J_∞)/2 for the oscillator, whose even effective potential mirrors
/// every moving pole onto the unphysical negative axis.
pub fn assemble_j_r(
    potential: &PotentialSpec,
    energy: f64,
    a: f64,
    units: &UnitSystem,
) -> Result<f64> {
    let origin = radial_origin_contribution(a, units)?;
    match *potential {
        PotentialSpec::Hartmann { alpha, .. } => {
            let inf = radial_infinity_coulomb(energy, alpha, units)?;
            Ok(origin.value + inf.value)
        }
        PotentialSpec::RingOscillator { alpha, .. } => {
            let inf = radial_infinity_oscillator(energy, alpha, units)?;
            Ok(0.5 * (origin.value + inf.value))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn u1() -> UnitSystem {
        UnitSystem::natural()
    }

    #[test]
    fn theta_infinity_examples() {
        let c = theta_infinity_contribution(0.0, 0.0, &u1()).unwrap();
        assert_eq!(c.coefficients.b1.unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(c.value, 0.0);

        let c = theta_infinity_contribution(3.0, 1.0, &u1()).unwrap();
        assert_relative_eq!(c.coefficients.b1.unwrap().im, 2.0);
        assert_relative_eq!(c.value, -2.0);

        let c = theta_infinity_contribution(0.0, 4.0, &u1()).unwrap();
        assert_relative_eq!(c.coefficients.b1.unwrap().im, 2.0);
        assert_relative_eq!(c.value, -2.0);
    }

    #[test]
    fn theta_pole_examples() {
        let c = theta_pole_contribution(0.0, &u1(), ThetaPole::PlusI).unwrap();
        assert_eq!(c.coefficients.a0.unwrap().re, 0.0);
        assert_eq!(c.value, 0.0);

        let c = theta_pole_contribution(2.0, &u1(), ThetaPole::PlusI).unwrap();
        assert_relative_eq!(c.coefficients.a0.unwrap().re, -1.0);
        assert_relative_eq!(c.value, 0.5);

        let c = theta_pole_contribution(6.0, &u1(), ThetaPole::MinusI).unwrap();
        assert_relative_eq!(c.coefficients.a0.unwrap().re, -2.0);
        assert_relative_eq!(c.value, 1.0);
    }

    #[test]
    fn theta_poles_are_symmetric() {
        for &a in &[0.0, 0.3, 2.0, 6.0, 41.7] {
            let plus = theta_pole_contribution(a, &u1(), ThetaPole::PlusI).unwrap();
            let minus = theta_pole_contribution(a, &u1(), ThetaPole::MinusI).unwrap();
            assert_eq!(plus.value, minus.value);
            assert_eq!(plus.coefficients.a0, minus.coefficients.a0);
        }
    }

    #[test]
    fn theta_assembly_examples() {
        assert_abs_diff_eq!(assemble_j_theta(0.0, 0.0, 0.0, &u1()).unwrap(), 0.0);
        assert_abs_diff_eq!(
            assemble_j_theta(6.0, 1.0, 3.0, &u1()).unwrap(),
            0.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(assemble_j_theta(2.0, 0.0, 0.0, &u1()).unwrap(), 1.0);
    }

    #[test]
    fn radial_origin_examples() {
        let c = radial_origin_contribution(0.0, &u1()).unwrap();
        assert_eq!(c.coefficients.b1.unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(c.value, 0.0);

        let c = radial_origin_contribution(2.0, &u1()).unwrap();
        assert_relative_eq!(c.coefficients.b1.unwrap().im, -1.0);
        assert_relative_eq!(c.value, -1.0);

        let c = radial_origin_contribution(6.0, &u1()).unwrap();
        assert_relative_eq!(c.coefficients.b1.unwrap().im, -2.0);
        assert_relative_eq!(c.value, -2.0);
    }

    #[test]
    fn radial_infinity_examples() {
        let c = radial_infinity_coulomb(-0.25, -1.0, &u1()).unwrap();
        assert_abs_diff_eq!(c.value, 0.0);
        let c = radial_infinity_coulomb(-1.0 / 36.0, -1.0, &u1()).unwrap();
        assert_relative_eq!(c.value, 2.0, max_relative = 1e-14);
        let c = radial_infinity_coulomb(-0.25, -2.0, &u1()).unwrap();
        assert_relative_eq!(c.value, 1.0);

        let c = radial_infinity_oscillator(3.0, 1.0, &u1()).unwrap();
        assert_abs_diff_eq!(c.value, 0.0);
        let c = radial_infinity_oscillator(7.0, 1.0, &u1()).unwrap();
        assert_relative_eq!(c.value, 2.0);
        let c = radial_infinity_oscillator(26.0, 4.0, &u1()).unwrap();
        assert_relative_eq!(c.value, 5.0);
    }

    #[test]
    fn radial_assembly_examples() {
        let h = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
        assert_abs_diff_eq!(assemble_j_r(&h, -0.25, 0.0, &u1()).unwrap(), 0.0);
        assert_abs_diff_eq!(
            assemble_j_r(&h, -1.0 / 36.0, 6.0, &u1()).unwrap(),
            0.0,
            epsilon = 1e-13
        );
        let r = PotentialSpec::ring_oscillator(1.0, 0.0).unwrap();
        assert_relative_eq!(assemble_j_r(&r, 7.0, 0.0, &u1()).unwrap(), 1.0);
    }

    // back-substitution: each kept coefficient must zero its matched power
    #[test]
    fn coefficients_satisfy_their_quadratics() {
        let units = UnitSystem::new(0.7).unwrap();
        let h = units.hbar();
        for &(a, b, beta, e) in &[
            (0.9, 1.96, 0.5, -0.11),
            (6.0, 1.0, 3.0, -1.0 / 36.0),
            (0.0, 0.0, 0.0, -0.25),
        ] {
            let c = theta_infinity_contribution(beta, b, &units).unwrap();
            let b1 = c.coefficients.b1.unwrap();
            assert!((b1 * b1 + (beta + b)).norm() < 1e-12);

            let c = theta_pole_contribution(a, &units, ThetaPole::PlusI).unwrap();
            let a0 = c.coefficients.a0.unwrap();
            assert!((a0 * a0 - h * a0 - a).norm() < 1e-12);

            let c = radial_origin_contribution(a, &units).unwrap();
            let b1 = c.coefficients.b1.unwrap();
            assert!((b1 * b1 - I * h * b1 + a).norm() < 1e-12);

            let c = radial_infinity_coulomb(e, -1.3, &units).unwrap();
            let a0 = c.coefficients.a0.unwrap();
            let a1 = c.coefficients.a1.unwrap();
            assert!((a0 * a0 - e).norm() < 1e-12);
            assert!((2.0 * a0 * a1 - 2.0 * I * h * a0 - 1.3).norm() < 1e-12);

            let c = radial_infinity_oscillator(2.0 - e, 1.7, &units).unwrap();
            let b1 = c.coefficients.b1.unwrap();
            let a1 = c.coefficients.a1.unwrap();
            assert!((b1 * b1 + 1.7).norm() < 1e-12);
            assert!((2.0 * a1 * b1 - (2.0 - e) - 3.0 * I * h * b1).norm() < 1e-12);
        }
    }
}
