//! Adaptive Dormand–Prince 5(4) stepper for the linear system
//! u'' = q(z) u along a parameterized path z(t) in the complex plane.
//!
//! The state is y = (u, du/dz); in the path parameter t the system reads
//! du/dt = (du/dz)·ż(t), d(du/dz)/dt = q(z(t))·u·ż(t).

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) type State = [Complex64; 2];

// Butcher tableau, Dormand–Prince 5(4)
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// difference between the 5th- and 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepperOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for StepperOptions {
    fn default() -> Self {
        // tight per-step tolerance: log-derivative errors amplify through
        // classically forbidden stretches, and the pointwise momentum
        // checks ask for 1e-10
        Self {
            rtol: 1e-12,
            atol: 1e-280,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Advances y through t ∈ [t0, t1], where `path` gives z(t) and `velocity`
/// gives ż(t). Returns the final state.
pub(crate) fn propagate_segment<Q, P, V>(
    q: &Q,
    path: &P,
    velocity: &V,
    t0: f64,
    t1: f64,
    y0: State,
    opts: &StepperOptions,
    stats: &mut StepStats,
) -> Result<State>
where
    Q: Fn(Complex64) -> Complex64,
    P: Fn(f64) -> Complex64,
    V: Fn(f64) -> Complex64,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let rhs = |t: f64, y: &State| -> State {
        let zdot = velocity(t);
        [y[1] * zdot, q(path(t)) * y[0] * zdot]
    };

    let mut t = t0;
    let mut y = y0;
    // initial step: a fraction of the span, shortened where the local
    // wavenumber is already resolved worse than that
    let mut h = {
        let qv = q(path(t0)).norm();
        let zv = velocity(t0).norm();
        let wave = if qv > 0.0 && zv > 0.0 {
            0.5 / (qv.sqrt() * zv)
        } else {
            f64::INFINITY
        };
        (span.abs() / 8.0).min(wave).min(span.abs()) * span.signum()
    };
    let h_min = span.abs() * 1e-15;

    for _ in 0..opts.max_steps {
        if (t - t1) * span.signum() >= 0.0 {
            return Ok(y);
        }
        if (t1 - t).abs() < h.abs() {
            h = t1 - t;
        }

        let k1 = rhs(t, &y);
        let y2 = step_stage(&y, h, &[(A21, &k1)]);
        let k2 = rhs(t + C[0] * h, &y2);
        let y3 = step_stage(&y, h, &[(A31, &k1), (A32, &k2)]);
        let k3 = rhs(t + C[1] * h, &y3);
        let y4 = step_stage(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        let k4 = rhs(t + C[2] * h, &y4);
        let y5 = step_stage(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        let k5 = rhs(t + C[3] * h, &y5);
        let y6 = step_stage(
            &y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        );
        let k6 = rhs(t + C[4] * h, &y6);
        let y_new = step_stage(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(t + h, &y_new);

        let err = [
            h * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0] + E6 * k6[0] + E7 * k7[0]),
            h * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1] + E6 * k6[1] + E7 * k7[1]),
        ];

        if !y_new[0].is_finite() || !y_new[1].is_finite() {
            return Err(Error::NonFinite { z: path(t) });
        }

        // components balanced by the step length so that a node in u
        // (u ≈ 0, u' finite) does not stall the integration
        let len = (h * velocity(t + 0.5 * h)).norm().max(1e-300);
        let scale_u = opts.atol
            + opts.rtol * y[0].norm().max(y_new[0].norm()).max(len * y_new[1].norm());
        let scale_v = opts.atol
            + opts.rtol * y[1].norm().max(y_new[1].norm()).max(y_new[0].norm() / len);
        let err_norm = (err[0].norm() / scale_u).max(err[1].norm() / scale_v);

        if err_norm <= 1.0 {
            t += h;
            y = y_new;
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }

        let factor = if err_norm > 0.0 {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h.abs() < h_min {
            return Err(Error::StepSizeUnderflow { z: path(t) });
        }
    }
    Err(Error::StepSizeUnderflow { z: path(t) })
}

fn step_stage(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for &(w, k) in terms {
        out[0] += h * w * k[0];
        out[1] += h * w * k[1];
    }
    out
}
