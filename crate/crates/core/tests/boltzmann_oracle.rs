use entropic_core::boltzmann::{
    bz_initial, bz_initial_values, coefficient_a_bruteforce, kernel_bhat, BoltzConfig,
    BruteForceCoefficients, SpectralOperator,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn quad_kernel(xi: f64, eta: f64) -> f64 {
    let sinc = |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x };
    let g = move |r: f64| r * r * sinc(xi * r) * sinc(eta * r);
    let (fa, fm, fb) = (g(0.0), g(0.5), g(1.0));
    simpson(
        &g,
        0.0,
        1.0,
        fa,
        fm,
        fb,
        (fa + 4.0 * fm + fb) / 6.0,
        1e-15,
        40,
    )
}

#[test]
fn kernel_matches_quadrature() {
    let cfg = BoltzConfig::new(17).unwrap();
    let unit = cfg.lambda * std::f64::consts::PI;
    let mut points = vec![
        (0.0, 0.0),
        (std::f64::consts::PI, 0.0),
        (1e-5, 3e-5),
        (1e-4, 1e-4),
        (0.3, 0.2999),
        (0.99, 1.01),
        (1.0, 1.0),
        (2.5, 2.5),
        (7.0, 5e-5),
        (12.0, 11.9),
        (30.0, 0.5),
    ];
    // Lattice magnitudes used by the spectral operator.
    for s2 in [0usize, 1, 2, 3, 5, 17, 64, 100, 256, 768] {
        for d2 in [0usize, 1, 4, 9, 50, 192, 768] {
            points.push(((s2 as f64).sqrt() * unit, (d2 as f64).sqrt() * unit));
        }
    }
    for (xi, eta) in points {
        let got = kernel_bhat(xi, eta);
        let want = quad_kernel(xi, eta);
        assert!(
            (got - want).abs() <= 1e-10 * want.abs() + 1e-14,
            "B({xi}, {eta}) = {got}, quadrature {want}"
        );
    }
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..3.0)).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

#[test]
fn spectral_matches_brute_force_at_m3() {
    let cfg = BoltzConfig::new(3).unwrap();
    let op = SpectralOperator::new(cfg);
    let brute = BruteForceCoefficients::new(cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut states: Vec<Vec<f64>> = (0..20).map(|_| random_state(&mut rng, 27)).collect();
    states.push(bz_initial_values(&cfg));
    for f in states {
        let fast = op.collision_rhs(&f).unwrap();
        let slow = brute.collision_rhs(&f).unwrap();
        let diff: Vec<f64> = fast.iter().zip(&slow).map(|(a, b)| a - b).collect();
        let rel = max_abs(&diff) / max_abs(&slow);
        assert!(rel <= 1e-10, "relative difference {rel}");
    }
}

#[test]
fn coefficients_are_symmetric_and_translation_invariant() {
    let cfg = BoltzConfig::new(3).unwrap();
    let brute = BruteForceCoefficients::new(cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut idx = || {
        [
            rng.random_range(0..3),
            rng.random_range(0..3),
            rng.random_range(0..3),
        ]
    };
    for _ in 0..30 {
        let (p, q, r, s, shift) = (idx(), idx(), idx(), idx(), idx());
        let a = brute.coefficient(p, q, r, s).unwrap();
        let swapped = brute.coefficient(q, p, r, s).unwrap();
        assert!((a - swapped).abs() <= 1e-13, "{a} vs {swapped}");
        let move_by = |x: [usize; 3]| [0, 1, 2].map(|c| (x[c] + shift[c]) % 3);
        let moved = brute
            .coefficient(move_by(p), move_by(q), move_by(r), move_by(s))
            .unwrap();
        assert!((a - moved).abs() <= 1e-13);
        let complex = brute.coefficient_complex(p, q, r, s);
        assert!(complex.im.abs() <= 1e-13);
    }
}

#[test]
fn single_coefficient_at_m5() {
    let cfg = BoltzConfig::new(5).unwrap();
    let a = coefficient_a_bruteforce(&cfg, [1, 0, 2], [0, 3, 4], [2, 2, 2], [0, 0, 0]).unwrap();
    let b = coefficient_a_bruteforce(&cfg, [0, 3, 4], [1, 0, 2], [2, 2, 2], [0, 0, 0]).unwrap();
    assert!(a.is_finite());
    assert!((a - b).abs() <= 1e-13);
}

#[test]
fn collision_conserves_mass() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for big_m in [3, 5, 9] {
        let cfg = BoltzConfig::new(big_m).unwrap();
        let op = SpectralOperator::new(cfg);
        for _ in 0..4 {
            let f = random_state(&mut rng, cfg.n_points());
            let q = op.collision_rhs(&f).unwrap();
            let total: f64 = q.iter().sum::<f64>() * cfg.dv_cell;
            let scale: f64 = q.iter().map(|x| x.abs()).sum::<f64>() * cfg.dv_cell;
            assert!(
                total.abs() <= 1e-10 * scale,
                "M={big_m}: {total} vs {scale}"
            );
        }
    }
}

#[test]
fn initial_state_dissipates_entropy() {
    let cfg = BoltzConfig::new(9).unwrap();
    let op = SpectralOperator::new(cfg);
    let f0 = bz_initial(&cfg).unwrap();
    let production = op.entropy_production(f0.values()).unwrap();
    assert!(production < 0.0, "{production}");
}
