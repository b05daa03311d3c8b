//! Behavioral checks of the complex-plane propagation and contour action:
//! closed-form solutions, monodromy, homotopy invariance, argument-principle
//! integrality, and the classical-action quadrature.

use num_complex::Complex64;
use qhj_spectra::contour::{
    classical_action_numeric, contour_action, default_contour, propagate, qmf_samples,
    regular_start, ContourPath, OdeProblem, PathSpec,
};
use qhj_spectra::potentials::{a_from_angular_quantization, l_squared};
use qhj_spectra::spectra::{
    classical_action_closed_form, energy_hartmann, radial_turning_points,
};
use qhj_spectra::{PotentialSpec, QuantumNumbers, UnitSystem};

fn u1() -> UnitSystem {
    UnitSystem::natural()
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn coulomb_ground_solution_along_real_axis() {
    // u = r e^{-r/2} up to normalization, so u'/u = 1/r - 1/2
    let potential = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
    let problem = OdeProblem::radial(potential, 0.0, -0.25);
    let x0 = 1e-6;
    let initial = regular_start(&problem, x0, &u1()).unwrap();
    let sol = propagate(
        &problem,
        &PathSpec::Polyline(vec![re(x0), re(2.0), re(4.0)]),
        initial,
        &u1(),
    )
    .unwrap();
    let at_two = &sol.samples[1];
    let logder = at_two.u_prime / at_two.u;
    assert!((logder - re(0.0)).norm() < 1e-8, "u'/u at r=2 was {logder}");
}

#[test]
fn oscillator_ground_solution_along_real_axis() {
    // u = r e^{-r²/2}, so u'/u = 1/r - r, vanishing at r = 1
    let potential = PotentialSpec::ring_oscillator(1.0, 0.0).unwrap();
    let problem = OdeProblem::radial(potential, 0.0, 3.0);
    let x0 = 1e-6;
    let initial = regular_start(&problem, x0, &u1()).unwrap();
    let sol = propagate(
        &problem,
        &PathSpec::Polyline(vec![re(x0), re(1.0), re(3.0)]),
        initial,
        &u1(),
    )
    .unwrap();
    let at_one = &sol.samples[1];
    let logder = at_one.u_prime / at_one.u;
    assert!((logder).norm() < 1e-8, "u'/u at r=1 was {logder}");
}

#[test]
fn qmf_of_ground_solutions_is_constant_or_linear() {
    // Coulomb: p = (ħ/i)(u'/u - 1/r) = iħκ with κ = 1/2 here
    let potential = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
    let problem = OdeProblem::radial(potential, 0.0, -0.25);
    let x0 = 1e-6;
    let initial = regular_start(&problem, x0, &u1()).unwrap();
    let waypoints: Vec<Complex64> = [x0, 0.5, 1.0, 2.0, 3.5, 5.0].iter().map(|&x| re(x)).collect();
    let sol = propagate(&problem, &PathSpec::Polyline(waypoints), initial, &u1()).unwrap();
    let p = qmf_samples(&sol, &problem, &u1()).unwrap();
    for (k, pk) in p.iter().enumerate().skip(1) {
        assert!(
            (pk - Complex64::new(0.0, 0.5)).norm() < 1e-10,
            "sample {k}: p = {pk}"
        );
    }

    // oscillator: p = i√α r, here i·r
    let potential = PotentialSpec::ring_oscillator(1.0, 0.0).unwrap();
    let problem = OdeProblem::radial(potential, 0.0, 3.0);
    let initial = regular_start(&problem, x0, &u1()).unwrap();
    let rs = [0.5, 1.0, 1.7, 2.5];
    let waypoints: Vec<Complex64> = std::iter::once(x0)
        .chain(rs.iter().copied())
        .map(re)
        .collect();
    let sol = propagate(&problem, &PathSpec::Polyline(waypoints), initial, &u1()).unwrap();
    let p = qmf_samples(&sol, &problem, &u1()).unwrap();
    for (pk, rk) in p.iter().skip(1).zip(rs.iter()) {
        assert!(
            (pk - Complex64::new(0.0, *rk)).norm() < 1e-10,
            "at r={rk}: p = {pk}"
        );
    }
}

#[test]
fn monodromy_around_closed_ellipse_is_trivial() {
    let potential = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
    let problem = OdeProblem::radial(potential, 0.0, -0.25);
    let x0 = 1e-6;
    let initial = regular_start(&problem, x0, &u1()).unwrap();
    let contour = default_contour(&problem, &u1()).unwrap();
    let start = contour.center.re + contour.semi_major;
    let lead = propagate(
        &problem,
        &PathSpec::Polyline(vec![re(x0), re(start)]),
        initial,
        &u1(),
    )
    .unwrap();
    let last = lead.samples.last().unwrap();
    let sol = propagate(
        &problem,
        &PathSpec::Ellipse(contour),
        (last.u, last.u_prime),
        &u1(),
    )
    .unwrap();
    let err = sol.closure_error.unwrap();
    assert!(err < 1e-8, "closure error {err}");
}

#[test]
fn contour_action_at_radial_eigenvalues() {
    let units = u1();
    // Coulomb, L = 0: ground state has zero action, first excited ħ·1
    let potential = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
    for (n_r, energy) in [(0u32, -0.25), (1, -1.0 / 16.0)] {
        let problem = OdeProblem::radial(potential, 0.0, energy);
        let contour = default_contour(&problem, &units).unwrap();
        let est = contour_action(&problem, &contour, &units).unwrap();
        assert!(est.converged);
        assert!(
            (est.value.re - n_r as f64).abs() < 1e-6,
            "n_r={n_r}: J = {}",
            est.value
        );
        assert!(est.value.im.abs() < 1e-8);
    }

    // oscillator n_r = 1, L = 0: E = 7
    let potential = PotentialSpec::ring_oscillator(1.0, 0.0).unwrap();
    let problem = OdeProblem::radial(potential, 0.0, 7.0);
    let contour = default_contour(&problem, &u1()).unwrap();
    let est = contour_action(&problem, &contour, &units).unwrap();
    assert!((est.value.re - 1.0).abs() < 1e-6, "J = {}", est.value);
    assert!(est.value.im.abs() < 1e-8);
}

#[test]
fn contour_action_on_angular_leg() {
    // n_θ = 1, m = 1, β = 0: μ² = 1, l² = 6.25, expected J = ħ·1
    let units = u1();
    let lsq = l_squared(1, 1, 0.0, &units);
    let problem = OdeProblem::angular(1.0, lsq);
    let contour = default_contour(&problem, &units).unwrap();
    let est = contour_action(&problem, &contour, &units).unwrap();
    assert!(est.converged);
    assert!((est.value.re - 1.0).abs() < 1e-6, "J = {}", est.value);
    assert!(est.value.im.abs() < 1e-8);
}

#[test]
fn action_is_integer_between_eigenvalues_and_jumps_across() {
    // Coulomb L=0 eigenvalues: -1/4, -1/16, -1/36. Between consecutive
    // eigenvalues the action counts the enclosed nodes exactly.
    let units = u1();
    let potential = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
    for (energy, expected) in [(-0.15, 1.0), (-0.07, 1.0), (-0.05, 2.0)] {
        let problem = OdeProblem::radial(potential, 0.0, energy);
        let contour = default_contour(&problem, &units).unwrap();
        let est = contour_action(&problem, &contour, &units).unwrap();
        assert!(
            (est.value.re - expected).abs() < 1e-6,
            "E={energy}: J = {} (expected {expected})",
            est.value
        );
        assert!(est.value.im.abs() < 1e-8);
    }
}

#[test]
fn homotopic_contours_agree() {
    let units = u1();
    let potential = PotentialSpec::hartmann(-1.0, 0.0).unwrap();
    let qn = QuantumNumbers::new(1, 1, 1);
    let energy = energy_hartmann(&qn, -1.0, 0.0, &units);
    let a = a_from_angular_quantization(1, 1, 0.0, &units);
    let big_l = 2.0;
    assert!((a - units.hbar_sq() * big_l * (big_l + 1.0)).abs() < 1e-12);
    let problem = OdeProblem::radial(potential, big_l, energy);
    let base = default_contour(&problem, &units).unwrap();
    let fatter = ContourPath::new(
        base.center,
        base.semi_major,
        base.semi_minor * 0.6,
        base.n_samples,
    )
    .unwrap();
    let j1 = contour_action(&problem, &base, &units).unwrap().value;
    let j2 = contour_action(&problem, &fatter, &units).unwrap().value;
    assert!((j1 - j2).norm() < 1e-8, "j1 = {j1}, j2 = {j2}");
    assert!((j1.re - 1.0).abs() < 1e-6);
}

#[test]
fn measure_correction_integrates_to_zero_outside_singularity() {
    // the -1/z correction term alone, integrated around a contour that
    // excludes the origin, contributes nothing
    let contour = ContourPath::new(re(3.0), 1.5, 0.8, 256).unwrap();
    let n = contour.n_samples;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        acc += 1.0 / contour.point(t) * contour.velocity(t);
    }
    acc /= n as f64;
    assert!(acc.norm() < 1e-12, "loop integral of 1/z was {acc}");
}

#[test]
fn classical_quadrature_matches_closed_forms() {
    let hartmann = PotentialSpec::hartmann(-1.3, 0.2).unwrap();
    let ring = PotentialSpec::ring_oscillator(1.7, 0.0).unwrap();
    let mut checked = 0;
    for k in 0..100 {
        let a = 0.05 + 0.11 * k as f64;
        // stay inside the bound range for the Coulomb case
        let e_h = -(1.3f64 * 1.3) / (4.0 * (a + 1.5));
        if let Ok(closed) = classical_action_closed_form(&hartmann, e_h, a) {
            let numeric = classical_action_numeric(&hartmann, e_h, a).unwrap();
            assert!(
                (closed - numeric).abs() < 1e-8,
                "hartmann a={a}: {closed} vs {numeric}"
            );
            checked += 1;
        }
        let e_r = 2.0 * (a * 1.7f64).sqrt() + 0.8 + 0.3 * k as f64;
        if let Ok(closed) = classical_action_closed_form(&ring, e_r, a) {
            let numeric = classical_action_numeric(&ring, e_r, a).unwrap();
            assert!(
                (closed - numeric).abs() < 1e-8,
                "ring a={a}: {closed} vs {numeric}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 150, "only {checked} pairs exercised");
}

#[test]
fn turning_points_feed_consistent_contours() {
    let potential = PotentialSpec::hartmann(-2.0, 0.75).unwrap();
    let qn = QuantumNumbers::new(0, 0, 1);
    let units = u1();
    let energy = energy_hartmann(&qn, -2.0, 0.75, &units);
    let a = a_from_angular_quantization(0, 1, 0.75, &units);
    let tp = radial_turning_points(&potential, energy, a).unwrap();
    assert!(tp.inner > 0.0 && tp.inner < tp.outer);
    let problem = OdeProblem::radial(potential, (1.75f64).sqrt(), energy);
    let contour = default_contour(&problem, &units).unwrap();
    // the ellipse passes between the origin and the inner turning point
    assert!(contour.center.re - contour.semi_major > 0.0);
    assert!(contour.center.re - contour.semi_major < tp.inner);
    assert!(contour.center.re + contour.semi_major > tp.outer);
}
