use gowerslab::decoder::*;
use gowerslab::domains::{phase_signal, poly_from_table};
use gowerslab::generate::{generate, random_group_poly, GenParams, Kind};
use gowerslab::numeric::{dist_z, e};
use gowerslab::rng;
use gowerslab::*;
use proptest::prelude::*;
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn planted(n: usize, degree: usize, seed: u64) -> (Signal, PolyPhase) {
    let table = random_group_poly(&[n], degree, &mut rng::stream(seed));
    let p = PolyPhase::from_table_unchecked(DomainSpec::cyclic(n), degree, table);
    let c = e(0.37 + seed as f64 * 0.1);
    (phase_signal(&p, c).unwrap(), p)
}

fn noisy(delta: f64, seed: u64) -> Signal {
    let p = GenParams {
        domain: DomainSpec::cyclic(27),
        degree: 2,
        phase_noise: delta,
        ..GenParams::default()
    };
    generate(Kind::PolyPhase, &p, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn round_trip_on_planted_phases(ni in 0usize..4, k in 1usize..=4, seed in 0u64..1000) {
        let n = [9, 16, 25, 27][ni];
        let (f, p) = planted(n, k - 1, seed);
        let r = decode_group(&f, k, &tol()).unwrap();
        prop_assert!(r.residual_l1 <= 1e-7);
        prop_assert!(r.phase.distance_mod_constant(&p) <= 1e-7);
        prop_assert!((r.recompute_residual(&f) - r.residual_l1).abs() <= 1e-9);
        prop_assert!(r.diagnostics.max_cocycle_defect <= 1e-8);
        prop_assert!(r.diagnostics.max_corrector <= 1e-8);
    }

    #[test]
    fn gauge_covariance(seed in 0u64..1000, rseed in 0u64..1000) {
        let f = noisy(0.03, seed);
        let rt = random_group_poly(&[27], 2, &mut rng::stream(rseed));
        let g = f.map(|x, v| v * e(rt[x]));
        let a = decode_group(&f, 3, &tol()).unwrap();
        let b = decode_group(&g, 3, &tol()).unwrap();
        let shifted = PolyPhase::from_table_unchecked(
            f.domain.clone(),
            2,
            a.phase.table.iter().zip(&rt).map(|(x, y)| x + y).collect(),
        );
        prop_assert!(b.phase.distance_mod_constant(&shifted) <= 1e-7);
        prop_assert!((a.residual_l1 - b.residual_l1).abs() <= 1e-7);
    }
}

#[test]
fn quadratic_on_z9_recovers_exactly() {
    let f = Signal::from_fn(DomainSpec::cyclic(9), |x| e((x * x) as f64 / 9.0)).unwrap();
    let (r, table) = decode_group_detailed(&f, 3, &tol()).unwrap();
    assert!(r.residual_l1 <= 1e-8);
    for x in 0..9 {
        let d = r.phase.table[x] - r.phase.table[0] - (x * x) as f64 / 9.0;
        assert!(dist_z(d) < 1e-9);
    }
    let t = table.unwrap();
    assert!(t.corrected_defect() < 1e-8);
    // Exact cocycles need no correction.
    assert!(t.constants.iter().all(|c| c.abs() < 1e-9));
}

#[test]
fn noisy_tables_still_form_a_cocycle_after_correction() {
    let (_, table) = decode_group_detailed(&noisy(0.05, 2), 3, &tol()).unwrap();
    assert!(table.unwrap().corrected_defect() < 1e-6);
}

#[test]
fn noise_sweep_is_monotone_per_seed() {
    for seed in 0..6 {
        let mut prev = -1.0;
        for i in 0..=10 {
            let delta = i as f64 * 0.01;
            let r = decode_group(&noisy(delta, seed), 3, &tol()).unwrap();
            assert!(r.residual_l1 >= prev - 1e-12, "seed {seed} delta {delta}");
            if i == 5 {
                assert!(r.residual_l1 <= 0.25);
            }
            prev = r.residual_l1;
        }
    }
}

#[test]
fn random_unimodular_is_rejected() {
    for seed in 0..5 {
        let p = GenParams {
            domain: DomainSpec::cyclic(27),
            ..GenParams::default()
        };
        let f = generate(Kind::Random, &p, seed).unwrap();
        match decode_group(&f, 3, &tol()) {
            Err(Error::Uncovered { .. }) | Err(Error::CocycleGate { .. }) | Err(Error::Certification(_)) => {}
            Err(other) => panic!("unexpected error {other}"),
            Ok(r) => assert!(r.residual_l1 > 1.0),
        }
    }
}

#[test]
fn sup_norm_precondition() {
    let f = Signal::constant(DomainSpec::cyclic(9), Complex64::new(1.5, 0.0)).unwrap();
    assert!(decode_group(&f, 3, &tol()).unwrap_err().is_usage());
}

#[test]
fn base_mean_with_noise() {
    let mut r = rng::stream(4);
    let f = Signal::from_fn(DomainSpec::cyclic(64), |_| {
        Complex64::new(0.9, 0.0) + rng::disc(&mut r) * 0.05
    })
    .unwrap();
    let (c, res) = decode_base_mean(&f).unwrap();
    assert!((c - Complex64::new(1.0, 0.0)).norm() < 0.05);
    assert!(res <= 0.2);
}

#[test]
fn base_linear_with_noise() {
    let mut r = rng::stream(5);
    let f = Signal::from_fn(DomainSpec::cyclic(8), |x| {
        e(3.0 * x as f64 / 8.0) * (1.0 - 0.1 * r.gen::<f64>())
    })
    .unwrap();
    let out = decode_base_linear(&f).unwrap();
    assert!(dist_z(out.phase.table[1] - 3.0 / 8.0) < 1e-12);
    assert!(out.residual_l1 <= 0.15);
}

#[test]
fn base_linear_random_reports_large_residual() {
    let p = GenParams {
        domain: DomainSpec::cyclic(64),
        ..GenParams::default()
    };
    let f = generate(Kind::Random, &p, 9).unwrap();
    let out = decode_base_linear(&f).unwrap();
    assert!(out.residual_l1 > 1.0);
}

fn interval_quadratic(n: usize, seed: u64) -> Signal {
    let mut r = rng::stream(seed);
    let (a, b): (f64, f64) = (r.gen(), r.gen());
    Signal::from_fn(DomainSpec::interval(n), |i| {
        let t = (i + 1) as f64;
        e(a * t * t + b * t)
    })
    .unwrap()
}

#[test]
fn interval_exact_quadratics() {
    for seed in 0..4 {
        let f = interval_quadratic(256, seed);
        let r = decode_interval(&f, 3, &tol()).unwrap();
        assert!(r.residual_l1 <= 1e-6, "seed {seed}: {}", r.residual_l1);
        // Reported coefficients reproduce the table in the binom(n, i) basis.
        let c = r.phase.coeffs.clone().unwrap();
        for (i, &v) in r.phase.table.iter().enumerate() {
            let n = (i + 1) as f64;
            let p = c[0] + c[1] * n + c[2] * n * (n - 1.0) / 2.0;
            assert!(dist_z(p - v) < 1e-6);
        }
        poly_from_table(&r.phase.table, &f.domain, 2, 1e-8).unwrap();
    }
}

#[test]
fn interval_dimple_and_random() {
    let f = interval_quadratic(256, 11);
    let dimpled = f.map(|i, v| if i % 100 == 0 { v * 0.9 } else { v });
    assert!(decode_interval(&dimpled, 3, &tol()).unwrap().residual_l1 <= 0.1);
    let p = GenParams {
        domain: DomainSpec::interval(256),
        ..GenParams::default()
    };
    let rf = generate(Kind::Random, &p, 1).unwrap();
    assert!(decode_interval(&rf, 3, &tol()).is_err());
}

#[test]
fn interval_length_floor() {
    let f = interval_quadratic(interval_min_len(3) - 1, 0);
    assert!(decode_interval(&f, 3, &tol()).unwrap_err().is_usage());
    assert_eq!(interval_min_len(3), 96);
}

/// Oracle: degree ≤ 2 maps on Z/n with P(0) = 0 are `c1 x + c2 binom(x, 2)` with
/// `n c2 ∈ Z` and `n c1 + binom(n, 2) c2 ∈ Z`.
fn quadratic_oracle(n: usize) -> (usize, f64) {
    let mut best = f64::INFINITY;
    let mut count = 0;
    for j in 0..n {
        let c2 = j as f64 / n as f64;
        for i in 0..n {
            let c1 = (i as f64 - (n * (n - 1) / 2) as f64 * c2) / n as f64;
            let table: Vec<f64> = (0..n)
                .map(|x| c1 * x as f64 + c2 * (x * x.saturating_sub(1) / 2) as f64)
                .collect();
            if table.iter().all(|&v| dist_z(v) < 1e-9) {
                continue;
            }
            count += 1;
            let m: Complex64 = table.iter().map(|&v| e(v)).sum::<Complex64>() / n as f64;
            best = best.min((2.0 - 2.0 * m.norm()).max(0.0).sqrt());
        }
    }
    (count, best)
}

#[test]
fn separation_matches_oracle_and_bound() {
    for n in 1..=10 {
        let r = separation_scan(n, 2).unwrap();
        let (count, best) = quadratic_oracle(n);
        assert_eq!(r.count, count, "n = {n}");
        if count > 0 {
            assert!((r.min_distance - best).abs() < 1e-12);
            assert!(r.min_distance >= 2f64.powf(-1.5));
        }
    }
    let r = separation_scan(2, 1).unwrap();
    assert!((r.min_distance - 2f64.sqrt()).abs() < 1e-12);
    assert!(matches!(separation_scan(8, 4), Err(Error::EnumerationCap(_))));
}
