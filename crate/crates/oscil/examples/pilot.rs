use oscil::funcspace::HolderFunction;
use oscil::oscillation::{theta, theta_lacunary_spectral, abs_theta, LacunaryCoeffTable};
use oscil::quad::QuadratureSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::time::Instant;

fn main() {
    let quad = QuadratureSpec::with_tols(1e-8, 1e-8);

    // (a) spectral vs quadrature residuals at N=12, J=17
    for &alpha in &[0.3f64, 0.5, 0.7] {
        let f = HolderFunction::lacunary_sine(alpha, 17).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst = 0.0f64;
        let t0 = Instant::now();
        for _ in 0..5 {
            let x: f64 = rng.gen();
            let sp = theta_lacunary_spectral(alpha, x, 12, 17, &quad).unwrap();
            let qd = theta(&f, x, 2f64.powi(-12), &quad).unwrap();
            worst = worst.max((sp - qd).abs());
        }
        println!("alpha={alpha}: max |sp-qd| over 5 x = {worst:.3e}, {:?}/5calls", t0.elapsed());
    }

    // (b) empirical c3: max over 64 x of |Theta_N - sum b_j cos| at N=12
    let table = LacunaryCoeffTable::build(0.5, 12, 40);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut c3 = 0.0f64;
    for _ in 0..64 {
        let x: f64 = rng.gen();
        let th = table.theta_levels(x)[11];
        let main: f64 = (0..=12u32).map(|j| table.b(j) * (TAU * (j as f64).exp2() * x).cos()).sum();
        c3 = c3.max((th - main).abs());
    }
    println!("empirical c3 at N=12 (64 x): {c3:.6}");
    // theory-ish bound: 2 sum_{j>N}|c| + sum_{j<=N}|b_j - 2 c_{j,N}|
    let mut bound = 0.0;
    for j in 13..=52u32 { bound += 2.0 * table.c(12, j).abs(); }
    for j in 0..=12u32 { bound += (table.b(j) - 2.0 * table.c(12, j)).abs(); }
    println!("coefficient bound for c3: {bound:.6}");

    // (c) weierstrass abs/theta factor at eps 2^-12
    let w = HolderFunction::weierstrass_cos(0.5, 64, 8).unwrap();
    let q2 = QuadratureSpec::with_tols(1e-6, 1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut min_factor = f64::INFINITY;
    for _ in 0..16 {
        let x: f64 = rng.gen();
        let a = abs_theta(&w, x, 2f64.powi(-12), &q2).unwrap();
        let t = theta(&w, x, 2f64.powi(-12), &q2).unwrap();
        let fac = a / t.abs();
        if fac < min_factor { min_factor = fac; }
    }
    println!("weier abs/|theta| min factor over 16 x at eps=2^-12: {min_factor:.4}");

    // (d) bridging margins: |theta(eps) - theta(2^-N)| vs 2H
    let f = HolderFunction::lacunary_sine(0.5, 12).unwrap();
    let h = oscil::holder_ratio_max(&f, oscil::Interval::new(-1.0, 2.0).unwrap(), 4096, 9.094947017729282e-13, 77).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut maxd = 0.0f64;
    let t0 = Instant::now();
    for _ in 0..20 {
        let n: u32 = rng.gen_range(1..10);
        let top = 2f64.powi(-(n as i32));
        let eps = top * rng.gen_range(0.5..1.0);
        let x: f64 = rng.gen();
        let d = (theta(&f, x, eps, &quad).unwrap() - theta(&f, x, top, &quad).unwrap()).abs();
        maxd = maxd.max(d / (2.0 * h));
    }
    println!("bridging: max |diff|/(2H) over 20 pairs = {maxd:.4} (H={h:.3}), {:?}/40 calls", t0.elapsed());
}
