use gowerslab::euclid::*;
use gowerslab::engine::uk_grid;
use gowerslab::rng;
use gowerslab::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

#[test]
fn constants_match_printed_values() {
    assert_eq!(sharp_gowers_constant(1).unwrap(), 1.0);
    assert_eq!(round4(sharp_gowers_constant(2).unwrap()), 0.9367);
    assert_eq!(round4(sharp_gowers_constant(3).unwrap()), 0.9170);
    assert_eq!(round4(sharp_gowers_constant(4).unwrap()), 0.9248);
    assert!((sharp_gowers_constant(3).unwrap() - 2f64.powf(-1.0 / 8.0)).abs() < 1e-15);
}

#[test]
fn recursion_identity() {
    for k in 2..=8 {
        let r = constant_recursion(k).unwrap();
        assert!(r.diff <= 1e-12, "k = {k}: {}", r.diff);
    }
}

#[test]
fn cube_matrix_closed_form() {
    for d in 1..=12usize {
        let m = CubeFormMatrix::new(d).unwrap();
        let p = |e: i32| if e < 0 { 0 } else { 1i64 << e };
        for i in 0..=d {
            for j in 0..=d {
                let want = match (i, j) {
                    (0, 0) => p(d as i32),
                    (0, _) | (_, 0) => p(d as i32 - 1),
                    _ if i == j => p(d as i32 - 1),
                    _ => p(d as i32 - 2),
                };
                assert_eq!(m.entries[i][j], want, "d={d} ({i},{j})");
            }
        }
    }
}

/// Oracle: plain Gaussian elimination over the rationals.
fn rational_det(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for j in c..n {
                let v = &m[c][j] * &f;
                m[r][j] -= v;
            }
        }
    }
    det.to_integer()
}

#[test]
fn determinant_is_power_of_two() {
    for d in 1..=12usize {
        let det = cube_form_det(d).unwrap();
        assert_eq!(det, BigInt::one() << (d * (d - 1)), "d = {d}");
        assert_eq!(det, rational_det(&CubeFormMatrix::new(d).unwrap().entries));
    }
}

#[test]
fn gaussian_exact_values() {
    assert!((gaussian_uk_exact(1).unwrap().value - 1.0).abs() < 1e-15);
    assert!((gaussian_uk_exact(3).unwrap().value - 2f64.powf(-3.0 / 8.0)).abs() < 1e-15);
    for d in 1..=8 {
        let g = gaussian_uk_exact(d).unwrap();
        assert!(g.diff <= 1e-12, "d = {d}");
    }
}

#[test]
fn gaussian_exact_matches_grid() {
    let tol = Tolerances::default();
    let f = gaussian_signal(8.0, 256, 1.0, 0.0, 0.0).unwrap();
    for d in 1..=4 {
        let grid = uk_grid(&f, d, &tol).unwrap().value;
        assert!((grid - gaussian_uk_exact(d).unwrap().value).abs() < 1e-10, "d = {d}");
    }
}

#[test]
fn sharpness_at_m2048() {
    let tol = Tolerances::default();
    let r3 = verify_sharpness(3, 8.0, 2048, &[24, 48, 96], &tol).unwrap();
    assert!(r3.error <= 1e-3);
    assert!(r3.converging, "{:?}", r3.refinement);
    assert!(!r3.observed_orders.is_empty());
    assert!(r3.refinement[0].error > r3.refinement[1].error);
    let r2 = verify_sharpness(2, 8.0, 2048, &[], &tol).unwrap();
    assert!((r2.ratio - 0.9367).abs() <= 1e-3);
    assert!(verify_sharpness(3, 1.0, 256, &[], &tol).is_err());
}

#[test]
fn cubic_phase_is_strictly_below() {
    let tol = Tolerances::default();
    let f = gaussian_signal(8.0, 2048, 1.0, 0.0, 0.0).unwrap();
    let domain = f.domain.clone();
    let g = f.map(|i, v| {
        let x = domain.grid_point(i)[0];
        v * gowerslab::numeric::e(x * x * x)
    });
    let c3 = sharp_gowers_constant(3).unwrap();
    let ratio = sharpness_ratio(&g, 3, &tol).unwrap();
    assert!(ratio < c3 - 0.01, "ratio {ratio}");
    // A quadratic chirp keeps equality.
    let q = f.map(|i, v| {
        let x = domain.grid_point(i)[0];
        v * gowerslab::numeric::e(0.7 * x * x)
    });
    assert!((sharpness_ratio(&q, 3, &tol).unwrap() - c3).abs() < 1e-6);
}

#[test]
fn fourier_invariance_examples() {
    let tol = Tolerances::default();
    let g = gaussian_signal(8.0, 256, 1.0, 0.0, 0.0).unwrap();
    assert!(fourier_invariance_check(&g, &tol).unwrap().diff <= 1e-6);
    let m = gaussian_signal(12.0, 576, 1.0, 0.0, 3.0).unwrap();
    assert!(fourier_invariance_check(&m, &tol).unwrap().diff <= 1e-3);
    let d = gaussian_signal(12.0, 576, 2.0, 0.0, 0.0).unwrap();
    assert!(fourier_invariance_check(&d, &tol).unwrap().diff <= 1e-3);
    let narrow = gaussian_signal(8.0, 256, 0.05, 0.0, 0.0).unwrap();
    assert!(matches!(fourier_invariance_check(&narrow, &tol), Err(Error::Aliasing(_))));
}

#[test]
fn grid_fourier_of_gaussian_is_gaussian() {
    let g = gaussian_signal(8.0, 256, 1.0, 0.0, 0.0).unwrap();
    let h = grid_fourier(&g).unwrap();
    for (i, v) in h.values.iter().enumerate() {
        let xi = h.domain.grid_point(i)[0];
        assert!((v - Complex64::new((-std::f64::consts::PI * xi * xi).exp(), 0.0)).norm() < 1e-12);
    }
}

fn random_padded(seed: u64) -> Signal {
    let mut r = rng::stream(seed);
    let bumps = r.gen_range(1..=3);
    let params: Vec<(Complex64, f64, f64, f64)> = (0..bumps)
        .map(|_| {
            (
                rng::complex_normal(&mut r),
                r.gen_range(-1.0..1.0),
                r.gen_range(0.7..1.2),
                r.gen_range(-2.0..2.0),
            )
        })
        .collect();
    let domain = DomainSpec::grid(1, 8.0, 256);
    Signal::from_fn(domain.clone(), |i| {
        let x = domain.grid_point(i)[0];
        params
            .iter()
            .map(|&(a, c, s, xi)| {
                a * gowerslab::numeric::e(xi * x) * (-std::f64::consts::PI * (x - c).powi(2) / (s * s)).exp()
            })
            .sum()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_signals_obey_the_sharp_bound(seed in any::<u64>()) {
        let f = random_padded(seed);
        let c3 = sharp_gowers_constant(3).unwrap();
        let ratio = sharpness_ratio(&f, 3, &Tolerances::default()).unwrap();
        prop_assert!(ratio <= c3 * (1.0 + 2e-3), "ratio {ratio}");
    }
}
