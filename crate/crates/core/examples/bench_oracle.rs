use qhj_spectra::oracle::full_level_check;
use qhj_spectra::{PotentialSpec, QuantumNumbers, UnitSystem};
use std::time::Instant;

fn main() {
    let units = UnitSystem::natural();
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for &alpha in &[-1.0, -2.0] {
        for &beta in &[0.0, 0.5, 3.0] {
            let p = PotentialSpec::hartmann(alpha, beta).unwrap();
            for n_r in 0..3u32 {
                for n_theta in 0..3u32 {
                    for m in 0..3i32 {
                        let qn = QuantumNumbers::new(n_r, n_theta, m);
                        let c = full_level_check(&p, &qn, &units).unwrap();
                        worst = worst.max(c.e_rel_err).max(c.l2_rel_err);
                        count += 1;
                    }
                }
            }
        }
    }
    println!("hartmann: {} levels, worst rel err {:.3e}, {:?}", count, worst, t0.elapsed());
    let t1 = Instant::now();
    let mut worst: f64 = 0.0;
    for &alpha in &[1.0, 4.0] {
        for &beta in &[0.0, 0.5, 3.0] {
            let p = PotentialSpec::ring_oscillator(alpha, beta).unwrap();
            for n_r in 0..3u32 {
                for n_theta in 0..3u32 {
                    for m in 0..3i32 {
                        let qn = QuantumNumbers::new(n_r, n_theta, m);
                        let c = full_level_check(&p, &qn, &units).unwrap();
                        worst = worst.max(c.e_rel_err).max(c.l2_rel_err);
                    }
                }
            }
        }
    }
    println!("ring: worst rel err {:.3e}, {:?}", worst, t1.elapsed());
}
