//! Closed-form action variables and energy spectra, classical turning
//! points, and the classical (ħ → 0) radial action.
//!
//! Quantizing J_θ = ħ n_θ and J_r = ħ n_r gives
//!
//! * Hartmann:   E = −α² / (4ħ² (n_r + n_θ + √(β/ħ² + m²) + 1)²)
//! * oscillator: E = 2ħ√α (2n_r + n_θ + 3/2 + √(β/ħ² + m²))
//!
//! The Hartmann closed forms are written with |α|; inputs are restricted to
//! α < 0 so the sign carries no information.

use crate::error::{Error, Result};
use crate::potentials::{
    a_from_angular_quantization, b_from_m, l_squared, mu_squared, PotentialSpec, QuantumNumbers,
    SeparationConstants,
};
use crate::units::UnitSystem;

/// One fully assembled bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRecord {
    pub potential: PotentialSpec,
    pub qn: QuantumNumbers,
    pub energy: f64,
    pub constants: SeparationConstants,
    pub l_squared: f64,
    pub j_theta: f64,
    pub j_r: f64,
    pub hbar: f64,
}

/// The two real turning points bounding the classically allowed region,
/// in ascending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub inner: f64,
    pub outer: f64,
}

fn sqrt_or_domain(x: f64, what: &str) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("negative radicand in {what}: {x}")));
    }
    Ok(x.sqrt())
}

/// J_θ = √((ħ/2)² + a) − √(b+β) − ħ/2.
pub fn j_theta_closed_form(a: f64, b: f64, beta: f64, units: &UnitSystem) -> Result<f64> {
    let h = units.hbar();
    let t1 = sqrt_or_domain(0.25 * h * h + a, "(hbar/2)^2 + a")?;
    let t2 = sqrt_or_domain(b + beta, "b + beta")?;
    Ok(t1 - t2 - 0.5 * h)
}

/// J_r = |α|/(2√−E) − ħ/2 − √((ħ/2)² + a), valid for bound energies E < 0.
pub fn j_r_hartmann_closed_form(
    energy: f64,
    a: f64,
    alpha: f64,
    units: &UnitSystem,
) -> Result<f64> {
    if energy >= 0.0 {
        return Err(Error::Domain(format!(
            "hartmann radial action requires E < 0, got {energy}"
        )));
    }
    let h = units.hbar();
    let root = sqrt_or_domain(0.25 * h * h + a, "(hbar/2)^2 + a")?;
    Ok(alpha.abs() / (2.0 * (-energy).sqrt()) - 0.5 * h - root)
}

/// J_r = (E/(2√α) − ħ − √((ħ/2)² + a)) / 2. The factor 1/2 reflects the
/// symmetry of the oscillator: half of the enclosed moving poles are mirror
/// images on the unphysical negative axis.
pub fn j_r_ring_closed_form(energy: f64, a: f64, alpha: f64, units: &UnitSystem) -> Result<f64> {
    if energy <= 0.0 {
        return Err(Error::Domain(format!(
            "oscillator radial action requires E > 0, got {energy}"
        )));
    }
    if alpha <= 0.0 {
        return Err(Error::Domain(format!(
            "oscillator radial action requires alpha > 0, got {alpha}"
        )));
    }
    let h = units.hbar();
    let root = sqrt_or_domain(0.25 * h * h + a, "(hbar/2)^2 + a")?;
    Ok(0.5 * (energy / (2.0 * alpha.sqrt()) - h - root))
}

/// Hartmann bound-state energy. Depends on n_r and n_θ only through their
/// sum, which is formed in integer arithmetic so the degeneracy is exact.
pub fn energy_hartmann(qn: &QuantumNumbers, alpha: f64, beta: f64, units: &UnitSystem) -> f64 {
    let mu = mu_squared(qn.m, beta, units).sqrt();
    let n = (qn.n_r + qn.n_theta) as f64 + mu + 1.0;
    -(alpha * alpha) / (4.0 * units.hbar_sq() * n * n)
}

/// Ring-shaped oscillator energy; depends on (n_r, n_θ) through 2n_r + n_θ.
pub fn energy_ring(qn: &QuantumNumbers, alpha: f64, beta: f64, units: &UnitSystem) -> f64 {
    let mu = mu_squared(qn.m, beta, units).sqrt();
    let n = (2 * qn.n_r + qn.n_theta) as f64 + 1.5 + mu;
    2.0 * units.hbar() * alpha.sqrt() * n
}

/// Assembles the full record for one level: energy, separation constants,
/// l², and both action values (which equal ħn_θ and ħn_r by construction).
pub fn solve_level(
    potential: &PotentialSpec,
    qn: &QuantumNumbers,
    units: &UnitSystem,
) -> Result<LevelRecord> {
    let beta = potential.beta();
    let b = b_from_m(qn.m, units);
    let a = a_from_angular_quantization(qn.n_theta, qn.m, beta, units);
    let lsq = l_squared(qn.n_theta, qn.m, beta, units);
    let (energy, j_r) = match *potential {
        PotentialSpec::Hartmann { alpha, .. } => {
            let e = energy_hartmann(qn, alpha, beta, units);
            (e, j_r_hartmann_closed_form(e, a, alpha, units)?)
        }
        PotentialSpec::RingOscillator { alpha, .. } => {
            let e = energy_ring(qn, alpha, beta, units);
            (e, j_r_ring_closed_form(e, a, alpha, units)?)
        }
    };
    let j_theta = j_theta_closed_form(a, b, beta, units)?;
    Ok(LevelRecord {
        potential: *potential,
        qn: *qn,
        energy,
        constants: SeparationConstants { a, b },
        l_squared: lsq,
        j_theta,
        j_r,
        hbar: units.hbar(),
    })
}

/// Real turning points of E − V₁(r) − a/r² = 0.
///
/// Hartmann with a = 0 degenerates to (0, |α|/|E|). The oscillator quartic
/// has four roots ±r₁, ±r₂; only the two positive ones are physical.
/// Complex or coincident roots are an error, not a degenerate success.
pub fn radial_turning_points(
    potential: &PotentialSpec,
    energy: f64,
    a: f64,
) -> Result<TurningPoints> {
    if a < 0.0 {
        return Err(Error::Domain(format!(
            "separation constant a must be nonnegative, got {a}"
        )));
    }
    match *potential {
        PotentialSpec::Hartmann { alpha, .. } => {
            if energy >= 0.0 {
                return Err(Error::Domain(format!(
                    "hartmann turning points require E < 0, got {energy}"
                )));
            }
            // |E| r² − |α| r + a = 0
            let abs_e = -energy;
            let abs_a = alpha.abs();
            let disc = abs_a * abs_a - 4.0 * abs_e * a;
            if disc <= 0.0 {
                return Err(Error::NoClassicalRegion(format!(
                    "discriminant {disc} <= 0 for E = {energy}, a = {a}"
                )));
            }
            let outer = (abs_a + disc.sqrt()) / (2.0 * abs_e);
            // product of roots = a/|E|; avoids cancellation for small a
            let inner = a / (abs_e * outer);
            Ok(TurningPoints { inner, outer })
        }
        PotentialSpec::RingOscillator { alpha, .. } => {
            if energy <= 0.0 {
                return Err(Error::Domain(format!(
                    "oscillator turning points require E > 0, got {energy}"
                )));
            }
            let disc = energy * energy - 4.0 * a * alpha;
            if disc <= 0.0 {
                return Err(Error::NoClassicalRegion(format!(
                    "discriminant {disc} <= 0 for E = {energy}, a = {a}"
                )));
            }
            let outer_sq = (energy + disc.sqrt()) / (2.0 * alpha);
            let inner_sq = (a / alpha) / outer_sq;
            Ok(TurningPoints {
                inner: inner_sq.sqrt(),
                outer: outer_sq.sqrt(),
            })
        }
    }
}

/// ħ → 0 limit of the radial action:
/// |α|/(2√−E) − √a (Hartmann), E/(4√α) − √a/2 (oscillator).
///
/// At the coincident-turning-point boundary both closed forms vanish
/// identically (zero-area orbit), so exact coincidence is accepted here even
/// though [`radial_turning_points`] reports it as an error.
pub fn classical_action_closed_form(
    potential: &PotentialSpec,
    energy: f64,
    a: f64,
) -> Result<f64> {
    match radial_turning_points(potential, energy, a) {
        Ok(_) => {}
        Err(Error::NoClassicalRegion(msg)) => {
            let coincident = match *potential {
                PotentialSpec::Hartmann { alpha, .. } => {
                    alpha * alpha - 4.0 * (-energy) * a == 0.0
                }
                PotentialSpec::RingOscillator { alpha, .. } => {
                    energy * energy - 4.0 * a * alpha == 0.0
                }
            };
            if !coincident {
                return Err(Error::NoClassicalRegion(msg));
            }
        }
        Err(e) => return Err(e),
    }
    Ok(match *potential {
        PotentialSpec::Hartmann { alpha, .. } => {
            alpha.abs() / (2.0 * (-energy).sqrt()) - a.sqrt()
        }
        PotentialSpec::RingOscillator { alpha, .. } => {
            energy / (4.0 * alpha.sqrt()) - 0.5 * a.sqrt()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn u1() -> UnitSystem {
        UnitSystem::natural()
    }

    #[test]
    fn theta_action_closed_form() {
        assert_abs_diff_eq!(j_theta_closed_form(0.0, 0.0, 0.0, &u1()).unwrap(), 0.0);
        assert_relative_eq!(j_theta_closed_form(2.0, 0.0, 0.0, &u1()).unwrap(), 1.0);
        assert_abs_diff_eq!(
            j_theta_closed_form(6.0, 1.0, 3.0, &u1()).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert!(j_theta_closed_form(-1.0, 0.0, 0.0, &u1()).is_err());
    }

    #[test]
    fn hartmann_radial_action() {
        assert_abs_diff_eq!(
            j_r_hartmann_closed_form(-0.25, 0.0, -1.0, &u1()).unwrap(),
            0.0
        );
        assert_relative_eq!(
            j_r_hartmann_closed_form(-1.0 / 16.0, 0.0, -1.0, &u1()).unwrap(),
            1.0
        );
        assert_relative_eq!(
            j_r_hartmann_closed_form(-1.0 / 36.0, 2.0, -1.0, &u1()).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert!(j_r_hartmann_closed_form(0.1, 0.0, -1.0, &u1()).is_err());
    }

    #[test]
    fn ring_radial_action() {
        assert_abs_diff_eq!(j_r_ring_closed_form(3.0, 0.0, 1.0, &u1()).unwrap(), 0.0);
        assert_relative_eq!(j_r_ring_closed_form(7.0, 0.0, 1.0, &u1()).unwrap(), 1.0);
        assert_relative_eq!(j_r_ring_closed_form(9.0, 2.0, 1.0, &u1()).unwrap(), 1.0);
        assert!(j_r_ring_closed_form(-1.0, 0.0, 1.0, &u1()).is_err());
    }

    #[test]
    fn hartmann_energies() {
        let qn = QuantumNumbers::new(0, 0, 0);
        assert_relative_eq!(energy_hartmann(&qn, -1.0, 0.0, &u1()), -0.25);
        let qn = QuantumNumbers::new(1, 1, 0);
        assert_relative_eq!(energy_hartmann(&qn, -1.0, 0.0, &u1()), -1.0 / 36.0);
        let qn = QuantumNumbers::new(0, 0, 1);
        let n = 1.0 + 1.75f64.sqrt();
        assert_relative_eq!(energy_hartmann(&qn, -2.0, 0.75, &u1()), -1.0 / (n * n));
        assert_abs_diff_eq!(
            energy_hartmann(&qn, -2.0, 0.75, &u1()),
            -0.18533,
            epsilon = 1e-5
        );
    }

    #[test]
    fn ring_energies() {
        assert_relative_eq!(
            energy_ring(&QuantumNumbers::new(0, 0, 0), 1.0, 0.0, &u1()),
            3.0
        );
        assert_relative_eq!(
            energy_ring(&QuantumNumbers::new(1, 0, 0), 1.0, 0.0, &u1()),
            7.0
        );
        assert_relative_eq!(
            energy_ring(&QuantumNumbers::new(1, 1, 2), 4.0, 0.0, &u1()),
            26.0
        );
    }

    #[test]
    fn level_records_are_self_consistent() {
        let h = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
        let rec = solve_level(&h, &QuantumNumbers::new(0, 0, 0), &u1()).unwrap();
        assert_relative_eq!(rec.energy, -0.25);
        assert_eq!(rec.constants.a, 0.0);
        assert_eq!(rec.constants.b, 0.0);
        assert_relative_eq!(rec.l_squared, 0.25);
        assert_abs_diff_eq!(rec.j_theta, 0.0);
        assert_abs_diff_eq!(rec.j_r, 0.0);

        let rec = solve_level(&h, &QuantumNumbers::new(0, 1, 1), &u1()).unwrap();
        assert_relative_eq!(rec.energy, -1.0 / 36.0);
        assert_relative_eq!(rec.constants.a, 6.0);
        assert_relative_eq!(rec.constants.b, 1.0);
        assert_relative_eq!(rec.l_squared, 6.25);
        assert_relative_eq!(rec.j_theta, 1.0, max_relative = 1e-13);
        assert_abs_diff_eq!(rec.j_r, 0.0, epsilon = 1e-13);

        let r = PotentialSpec::ring_oscillator(1.0, 0.0).unwrap();
        let rec = solve_level(&r, &QuantumNumbers::new(1, 0, 0), &u1()).unwrap();
        assert_relative_eq!(rec.energy, 7.0);
        assert_relative_eq!(rec.j_r, 1.0);
        assert_abs_diff_eq!(rec.j_theta, 0.0);
    }

    #[test]
    fn turning_points() {
        let h = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
        let tp = radial_turning_points(&h, -0.25, 0.0).unwrap();
        assert_eq!(tp.inner, 0.0);
        assert_relative_eq!(tp.outer, 4.0);

        let r = PotentialSpec::ring_oscillator(1.0, 0.0).unwrap();
        let tp = radial_turning_points(&r, 3.0, 2.0).unwrap();
        assert_relative_eq!(tp.inner, 1.0);
        assert_relative_eq!(tp.outer, 2.0f64.sqrt());

        // coincident turning points on the discriminant boundary:
        // E² = 4aα exactly with a = 4, α = 1
        assert!(matches!(
            radial_turning_points(&r, 4.0, 4.0),
            Err(Error::NoClassicalRegion(_))
        ));
    }

    #[test]
    fn classical_actions() {
        let h = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
        assert_relative_eq!(classical_action_closed_form(&h, -0.25, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            classical_action_closed_form(&h, -0.25, 1.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let r = PotentialSpec::ring_oscillator(1.0, 0.0).unwrap();
        assert_relative_eq!(classical_action_closed_form(&r, 3.0, 0.0).unwrap(), 0.75);
    }
}
