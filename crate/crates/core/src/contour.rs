//! Numerical verification of the quantization condition J = nħ by analytic
//! continuation in the complex coordinate plane.
//!
//! The separated radial and polar equations are linear, so instead of
//! integrating the singular Riccati form of the momentum function (which
//! blows up at every wavefunction node) we propagate the linear equation
//! u'' = q(z) u around a closed elliptical contour enclosing the classical
//! region and form the momentum function as a log-derivative plus the
//! coordinate correction inherited from the wavefunction ansatz:
//!
//! * radial: p = (ħ/i)(u'/u − 1/r)         (u = rR·… is the reduced solution)
//! * polar:  p = (ħ/i)(u'/u − cot(θ)/2)
//!
//! The correction terms have no pole inside a contour that excludes the
//! fixed singularities, so (1/2π)∮ p dz = ħ·(number of enclosed nodes) by
//! the argument principle, with the one bookkeeping exception of a contour
//! that encloses the origin (only the a = 0 radial case, where the regular
//! solution vanishes at r = 0 and the −1/r correction removes exactly that
//! zero). Closed-path quadrature uses the uniform trapezoidal rule, which is
//! spectrally accurate for periodic analytic integrands, with sample
//! doubling until the action settles.
//!
//! The module also provides the classical-action quadrature used as the
//! independent check of the ħ → 0 closed forms.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::rk::{propagate_segment, StepStats, StepperOptions};
use crate::spectra::{radial_turning_points, TurningPoints};
use crate::units::UnitSystem;

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Quadrature tolerance on successive refinements of the contour action.
const ACTION_TOL: f64 = 1e-8;
/// Sample cap for the doubling refinement.
const MAX_SAMPLES: usize = 65536;
/// Lenient validity window for leading-order Frobenius data: the next-order
/// series term must stay below this relative size.
const START_WINDOW_TOL: f64 = 1e-2;
/// Target relative size of the next-order term when the contour driver
/// chooses its own start abscissa.
const START_TARGET: f64 = 1e-12;

/// Closed counterclockwise ellipse in the coordinate plane,
/// z(t) = center + A cos t + i B sin t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPath {
    pub center: Complex64,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Initial number of quadrature samples (power of two); refinement
    /// doubles from here.
    pub n_samples: usize,
}

impl ContourPath {
    pub fn new(
        center: Complex64,
        semi_major: f64,
        semi_minor: f64,
        n_samples: usize,
    ) -> Result<Self> {
        if !(semi_major > 0.0) || !(semi_minor > 0.0) {
            return Err(Error::InvalidParameter(
                "contour semi-axes must be positive".into(),
            ));
        }
        if !n_samples.is_power_of_two() || !(4..=MAX_SAMPLES).contains(&n_samples) {
            return Err(Error::InvalidParameter(format!(
                "n_samples must be a power of two in [4, {MAX_SAMPLES}], got {n_samples}"
            )));
        }
        Ok(Self {
            center,
            semi_major,
            semi_minor,
            n_samples,
        })
    }

    #[inline]
    pub fn point(&self, t: f64) -> Complex64 {
        self.center + Complex64::new(self.semi_major * t.cos(), self.semi_minor * t.sin())
    }

    #[inline]
    pub fn velocity(&self, t: f64) -> Complex64 {
        Complex64::new(-self.semi_major * t.sin(), self.semi_minor * t.cos())
    }

    /// Minimum distance from the path to a point, by dense sampling.
    pub fn min_distance_to(&self, w: Complex64) -> f64 {
        (0..2048)
            .map(|k| (self.point(2.0 * PI * k as f64 / 2048.0) - w).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn with_samples(mut self, n: usize) -> Self {
        self.n_samples = n;
        self
    }
}

/// One of the two separated Schrödinger-like problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeProblem {
    /// u'' = [(V₁(z) − E)/ħ² + L(L+1)/z²] u with L(L+1) = l² − 1/4.
    Radial {
        potential: PotentialSpec,
        big_l: f64,
        energy: f64,
    },
    /// u'' = [(μ² − 1/4)/sin²z − l²] u with μ² = m² + β/ħ².
    Angular { mu_squared: f64, l_squared: f64 },
}

impl OdeProblem {
    pub fn radial(potential: PotentialSpec, big_l: f64, energy: f64) -> Self {
        Self::Radial {
            potential,
            big_l,
            energy,
        }
    }

    pub fn angular(mu_squared: f64, l_squared: f64) -> Self {
        Self::Angular {
            mu_squared,
            l_squared,
        }
    }

    pub fn coefficient(&self, z: Complex64, units: &UnitSystem) -> Complex64 {
        match *self {
            Self::Radial {
                potential,
                big_l,
                energy,
            } => {
                let v = match potential {
                    PotentialSpec::Hartmann { alpha, .. } => alpha / z,
                    PotentialSpec::RingOscillator { alpha, .. } => alpha * z * z,
                };
                (v - energy) / units.hbar_sq() + big_l * (big_l + 1.0) / (z * z)
            }
            Self::Angular {
                mu_squared,
                l_squared,
            } => {
                let s = z.sin();
                (mu_squared - 0.25) / (s * s) - l_squared
            }
        }
    }

    /// Fixed singularities of the coefficient nearest the working region.
    pub fn fixed_singularities(&self) -> Vec<Complex64> {
        match self {
            Self::Radial { .. } => vec![Complex64::new(0.0, 0.0)],
            Self::Angular { .. } => vec![Complex64::new(0.0, 0.0), Complex64::new(PI, 0.0)],
        }
    }

    /// Exponent s of the regular branch u ~ x^s at the left singular point:
    /// L + 1 radially, μ + 1/2 in the polar problem.
    pub fn indicial_exponent(&self) -> f64 {
        match *self {
            Self::Radial { big_l, .. } => big_l + 1.0,
            Self::Angular { mu_squared, .. } => mu_squared.sqrt() + 0.5,
        }
    }

    /// Log-derivative correction carried by the wavefunction ansatz;
    /// p = (ħ/i)(u'/u − correction).
    pub fn qmf_correction(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Radial { .. } => 1.0 / z,
            Self::Angular { .. } => z.cos() / z.sin() * 0.5,
        }
    }

    /// Relative size of the first neglected Frobenius term at x0.
    fn next_order_estimate(&self, x0: f64, units: &UnitSystem) -> f64 {
        let (c1, c2) = self.series_coefficients(units);
        c1.abs() * x0 + c2.abs() * x0 * x0
    }

    /// Leading series coefficients of u = x^s (1 + c₁x + c₂x² + …).
    fn series_coefficients(&self, units: &UnitSystem) -> (f64, f64) {
        match *self {
            Self::Radial {
                potential,
                big_l,
                energy,
            } => {
                let h2 = units.hbar_sq();
                match potential {
                    PotentialSpec::Hartmann { alpha, .. } => {
                        let c1 = alpha / (h2 * 2.0 * (big_l + 1.0));
                        let c2 = (alpha * c1 / h2 - energy / h2) / (4.0 * big_l + 6.0);
                        (c1, c2)
                    }
                    PotentialSpec::RingOscillator { .. } => {
                        (0.0, -energy / (h2 * (4.0 * big_l + 6.0)))
                    }
                }
            }
            Self::Angular {
                mu_squared,
                l_squared,
            } => {
                let mu = mu_squared.sqrt();
                let c2 = ((mu_squared - 0.25) / 3.0 - l_squared) / (4.0 * mu + 4.0);
                (0.0, c2)
            }
        }
    }
}

/// Path for [`propagate`]: straight legs between waypoints or a closed
/// ellipse.
#[derive(Debug, Clone)]
pub enum PathSpec {
    Polyline(Vec<Complex64>),
    Ellipse(ContourPath),
}

#[derive(Debug, Clone, Copy)]
pub struct PathSample {
    pub position: Complex64,
    /// dz/dt of the parameterization at the sample.
    pub velocity: Complex64,
    pub u: Complex64,
    pub u_prime: Complex64,
}

#[derive(Debug, Clone)]
pub struct PathSolution {
    pub samples: Vec<PathSample>,
    /// Relative mismatch between the initial state and the state returned
    /// after traversing a closed path; `None` for open paths.
    pub closure_error: Option<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Converged contour action with its refinement trail.
#[derive(Debug, Clone)]
pub struct ActionEstimate {
    pub value: Complex64,
    pub refinement_history: Vec<(usize, Complex64)>,
    pub converged: bool,
}

/// Leading-order regular data (u, u') = (x0^s, s·x0^(s−1)) at a point x0
/// near the regular singular point. Errs when x0 lies outside the window
/// where the leading Frobenius term dominates.
pub fn regular_start(
    problem: &OdeProblem,
    x0: f64,
    units: &UnitSystem,
) -> Result<(Complex64, Complex64)> {
    if !(x0 > 0.0) || !x0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "start abscissa must be positive, got {x0}"
        )));
    }
    if let OdeProblem::Angular { .. } = problem {
        if x0 >= 1.0 {
            return Err(Error::StartWindow(format!(
                "angular start {x0} is not small against the domain (0, pi)"
            )));
        }
    }
    let rel = problem.next_order_estimate(x0, units);
    if rel > START_WINDOW_TOL {
        return Err(Error::StartWindow(format!(
            "next-order series term is {rel:.2e} of the leading one at x0 = {x0:.3e}"
        )));
    }
    let s = problem.indicial_exponent();
    Ok((
        Complex64::new(x0.powf(s), 0.0),
        Complex64::new(s * x0.powf(s - 1.0), 0.0),
    ))
}

/// Analytic continuation of (u, u') along a path. The coefficient must be
/// analytic on the path; legs and arcs are integrated with an adaptive
/// embedded Runge–Kutta pair at 1e-10 relative tolerance per step.
pub fn propagate(
    problem: &OdeProblem,
    path: &PathSpec,
    initial: (Complex64, Complex64),
    units: &UnitSystem,
) -> Result<PathSolution> {
    let q = |z: Complex64| problem.coefficient(z, units);
    let opts = StepperOptions::default();
    let mut stats = StepStats::default();
    let mut state = [initial.0, initial.1];

    match path {
        PathSpec::Polyline(points) => {
            if points.len() < 2 {
                return Err(Error::InvalidParameter(
                    "polyline needs at least two waypoints".into(),
                ));
            }
            let mut samples = Vec::with_capacity(points.len());
            let first_dir = points[1] - points[0];
            samples.push(PathSample {
                position: points[0],
                velocity: first_dir,
                u: state[0],
                u_prime: state[1],
            });
            for leg in points.windows(2) {
                let (from, to) = (leg[0], leg[1]);
                let dir = to - from;
                let pos = |t: f64| from + t * dir;
                let vel = |_t: f64| dir;
                state = propagate_segment(&q, &pos, &vel, 0.0, 1.0, state, &opts, &mut stats)?;
                samples.push(PathSample {
                    position: to,
                    velocity: dir,
                    u: state[0],
                    u_prime: state[1],
                });
            }
            let closed = (points[0] - points[points.len() - 1]).norm() == 0.0;
            let closure_error = closed.then(|| closure_mismatch(initial, (state[0], state[1])));
            Ok(PathSolution {
                samples,
                closure_error,
                accepted_steps: stats.accepted,
                rejected_steps: stats.rejected,
            })
        }
        PathSpec::Ellipse(contour) => {
            let n = contour.n_samples;
            let pos = |t: f64| contour.point(t);
            let vel = |t: f64| contour.velocity(t);
            let dt = 2.0 * PI / n as f64;
            let mut samples = Vec::with_capacity(n);
            for j in 0..n {
                let t = j as f64 * dt;
                samples.push(PathSample {
                    position: contour.point(t),
                    velocity: contour.velocity(t),
                    u: state[0],
                    u_prime: state[1],
                });
                state =
                    propagate_segment(&q, &pos, &vel, t, t + dt, state, &opts, &mut stats)?;
            }
            let closure_error = Some(closure_mismatch(initial, (state[0], state[1])));
            Ok(PathSolution {
                samples,
                closure_error,
                accepted_steps: stats.accepted,
                rejected_steps: stats.rejected,
            })
        }
    }
}

fn closure_mismatch(start: (Complex64, Complex64), end: (Complex64, Complex64)) -> f64 {
    let du = (end.0 - start.0).norm() / start.0.norm().max(end.0.norm()).max(1e-300);
    let dv = (end.1 - start.1).norm() / start.1.norm().max(end.1.norm()).max(1e-300);
    du.max(dv)
}

/// Momentum-function samples p = (ħ/i)(u'/u − correction) along a solved
/// path. Refuses when any sample sits numerically on a wavefunction node.
pub fn qmf_samples(
    solution: &PathSolution,
    problem: &OdeProblem,
    units: &UnitSystem,
) -> Result<Vec<Complex64>> {
    let max_u = solution
        .samples
        .iter()
        .map(|s| s.u.norm())
        .fold(0.0f64, f64::max);
    let floor = 1e-12 * max_u;
    let h = units.hbar();
    solution
        .samples
        .iter()
        .map(|s| {
            if s.u.norm() <= floor {
                return Err(Error::NodeOnContour { z: s.position });
            }
            Ok(MINUS_I * h * (s.u_prime / s.u - problem.qmf_correction(s.position)))
        })
        .collect()
}

/// Turning points of the polar problem, sin²θ* = μ²/(l² − 1/4); the allowed
/// region is (θ*, π − θ*). Errs when μ² = 0 (no turning points: the polar
/// action has no classical region to enclose).
pub fn angular_turning_points(mu_squared: f64, l_squared: f64) -> Result<TurningPoints> {
    if mu_squared <= 0.0 {
        return Err(Error::NoClassicalRegion(
            "polar problem with b + beta = 0 has no turning points".into(),
        ));
    }
    let denom = l_squared - 0.25;
    if denom <= mu_squared {
        return Err(Error::NoClassicalRegion(format!(
            "sin^2(theta*) = {} >= 1",
            mu_squared / denom
        )));
    }
    let theta_star = (mu_squared / denom).sqrt().asin();
    Ok(TurningPoints {
        inner: theta_star,
        outer: PI - theta_star,
    })
}

/// Default elliptical contour for a problem: encloses both turning points,
/// stays clear of the fixed singularities by half the gap between the
/// nearest turning point and the singularity (the full 0.1·width clearance
/// is not always geometrically available), and uses semi-minor axis
/// 0.25·width. The a = 0 radial problem has its inner turning point at the
/// origin itself; there the contour encloses the origin, which is harmless
/// because the regular solution's zero there is cancelled by the −1/r
/// correction.
pub fn default_contour(problem: &OdeProblem, units: &UnitSystem) -> Result<ContourPath> {
    let (tp, left_singular) = match *problem {
        OdeProblem::Radial {
            potential,
            big_l,
            energy,
        } => {
            let a = units.hbar_sq() * big_l * (big_l + 1.0);
            (radial_turning_points(&potential, energy, a)?, true)
        }
        OdeProblem::Angular {
            mu_squared,
            l_squared,
        } => (angular_turning_points(mu_squared, l_squared)?, true),
    };
    let width = tp.outer - tp.inner;
    let enclose_origin = matches!(problem, OdeProblem::Radial { .. })
        && tp.inner <= 1e-12 * tp.outer;

    let ext_right = match problem {
        OdeProblem::Radial { .. } => 0.15 * width,
        // symmetric gap to the singularity at pi
        OdeProblem::Angular { .. } => (0.5 * tp.inner).min(0.15 * width),
    };
    let ext_left = if enclose_origin {
        0.1 * width
    } else if left_singular {
        (0.5 * tp.inner).min(0.15 * width)
    } else {
        0.15 * width
    };

    let leftmost = tp.inner - ext_left;
    let rightmost = tp.outer + ext_right;
    let center = Complex64::new(0.5 * (leftmost + rightmost), 0.0);
    let semi_major = 0.5 * (rightmost - leftmost);
    ContourPath::new(center, semi_major, 0.25 * width, 64)
}

/// Quantum action J = (1/2π)∮ p dz around the contour, refined by sample
/// doubling until successive values differ by less than 1e-8. At an
/// eigenvalue the result is ħ·n with n the node count inside the path.
pub fn contour_action(
    problem: &OdeProblem,
    path: &ContourPath,
    units: &UnitSystem,
) -> Result<ActionEstimate> {
    // a contour through (or numerically on) a fixed singularity is invalid
    for s in problem.fixed_singularities() {
        let d = path.min_distance_to(s);
        if d < 1e-6 * path.semi_major {
            return Err(Error::InvalidParameter(format!(
                "contour passes within {d:.3e} of the fixed singularity at {s}"
            )));
        }
    }

    let start_state = lead_in_state(problem, path, units)?;

    let mut history: Vec<(usize, Complex64)> = Vec::new();
    let mut n = path.n_samples.max(4);
    let mut last_delta = f64::INFINITY;
    while n <= MAX_SAMPLES {
        let solution = propagate(
            problem,
            &PathSpec::Ellipse(path.with_samples(n)),
            start_state,
            units,
        )?;
        let p = qmf_samples(&solution, problem, units)?;
        let action = solution
            .samples
            .iter()
            .zip(&p)
            .map(|(s, pj)| pj * s.velocity)
            .sum::<Complex64>()
            / n as f64;
        if let Some(&(_, prev)) = history.last() {
            last_delta = (action - prev).norm();
        }
        history.push((n, action));
        if last_delta < ACTION_TOL {
            let value = action;
            return Ok(ActionEstimate {
                value,
                refinement_history: history,
                converged: value.im.abs() < ACTION_TOL,
            });
        }
        n *= 2;
    }
    Err(Error::ContourNotConverged {
        max_samples: MAX_SAMPLES,
        last_delta,
    })
}

/// Regular data at a tiny abscissa continued along the real axis to the
/// rightmost point of the contour, where the closed sweep starts.
fn lead_in_state(
    problem: &OdeProblem,
    path: &ContourPath,
    units: &UnitSystem,
) -> Result<(Complex64, Complex64)> {
    debug_assert!(path.center.im == 0.0, "contours are centered on the real axis");
    let z_start = path.center.re + path.semi_major;

    let (c1, c2) = problem.series_coefficients(units);
    let mut x0 = f64::INFINITY;
    if c1 != 0.0 {
        x0 = x0.min(START_TARGET / c1.abs());
    }
    if c2 != 0.0 {
        x0 = x0.min((START_TARGET / c2.abs()).sqrt());
    }
    // keep the start below the contour scale even when both coefficients
    // are tiny, and above the underflow regime
    x0 = x0.min(1e-3 * z_start).max(1e-13);

    let initial = regular_start(problem, x0, units)?;
    // geometric waypoints keep each leg's dynamic range small; a single
    // straight leg from a tiny x0 starves the stepper near the singular end
    let mut waypoints = vec![Complex64::new(x0, 0.0)];
    let mut x = x0;
    while x * 4.0 < z_start {
        x *= 4.0;
        waypoints.push(Complex64::new(x, 0.0));
    }
    waypoints.push(Complex64::new(z_start, 0.0));
    let lead = propagate(problem, &PathSpec::Polyline(waypoints), initial, units)?;
    let last = lead.samples.last().expect("polyline has samples");
    Ok((last.u, last.u_prime))
}

/// Classical radial action J_c = (1/π)∫ √(E − V_eff) dr between the turning
/// points, by adaptive quadrature after the substitution
/// r = mid − half·cos φ that removes the square-root endpoint singularities.
/// Accurate to 1e-8 absolute; serves as the independent check of the ħ → 0
/// closed forms.
pub fn classical_action_numeric(
    potential: &PotentialSpec,
    energy: f64,
    a: f64,
) -> Result<f64> {
    let tp = radial_turning_points(potential, energy, a)?;
    let mid = 0.5 * (tp.inner + tp.outer);
    let half = 0.5 * (tp.outer - tp.inner);
    let alpha = potential.alpha();
    let coulomb_edge = matches!(potential, PotentialSpec::Hartmann { .. }) && tp.inner == 0.0;
    let g = |phi: f64| {
        let r = mid - half * phi.cos();
        if r <= f64::MIN_POSITIVE {
            // inner turning point at the origin: finite limit of
            // sqrt(|alpha|/r)·half·sin(phi)
            return if coulomb_edge {
                (2.0 * alpha.abs() * half).sqrt()
            } else {
                0.0
            };
        }
        let v_eff = potential.radial_potential(r) + a / (r * r);
        (energy - v_eff).max(0.0).sqrt() * half * phi.sin()
    };
    let integral = simpson_doubling(&g, 0.0, PI, 1e-9)?;
    Ok(integral / PI)
}

fn simpson_doubling<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let mut n = 64usize;
    let mut prev = simpson(f, lo, hi, n);
    loop {
        n *= 2;
        let cur = simpson(f, lo, hi, n);
        let delta = (cur - prev).abs();
        if delta <= tol {
            return Ok(cur);
        }
        if n >= (1 << 22) {
            return Err(Error::QuadratureNotConverged { last_delta: delta });
        }
        prev = cur;
    }
}

fn simpson<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, n: usize) -> f64 {
    debug_assert!(n % 2 == 0);
    let h = (hi - lo) / n as f64;
    let mut sum = f(lo) + f(hi);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + k as f64 * h);
    }
    sum * h / 3.0
}
