use gowerslab::coset::*;
use gowerslab::domains::lp_norm;
use gowerslab::engine::{critical_exponent_f64, uk_recursive};
use gowerslab::generate::{generate, GenParams, Kind};
use gowerslab::rng;
use gowerslab::*;
use proptest::prelude::*;

fn real(domain: DomainSpec, v: Vec<f64>) -> Signal {
    Signal::new(domain, v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()).unwrap()
}

fn planted(n: usize, step: usize, offset: i64, k: usize, seed: u64) -> Signal {
    let p = GenParams {
        domain: DomainSpec::cyclic(n),
        degree: k - 1,
        step: vec![step],
        offset: vec![offset],
        k,
        ..GenParams::default()
    };
    generate(Kind::CosetPhase, &p, seed).unwrap()
}

#[test]
fn markov_examples() {
    let d = DomainSpec::cyclic(100);
    let ones = real(d.clone(), vec![1.0; 100]);
    let zero = real(d.clone(), vec![0.0; 100]);
    let s = markov_split(&ones, &zero, 0.01).unwrap();
    assert!(s.set.is_empty() && s.mass_certified && s.pointwise_certified);

    let mut spike = vec![0.0; 100];
    spike[17] = 0.09;
    let s = markov_split(&ones, &real(d.clone(), spike), 0.0009).unwrap();
    assert_eq!(s.set, vec![17]);
    assert!(s.mass_certified && s.pointwise_certified);

    let err = markov_split(&ones, &real(d, vec![0.5; 100]), 0.1).unwrap_err();
    assert!(err.to_string().contains("5.000000e-1"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn markov_certificates_hold(
        f in proptest::collection::vec(0.0f64..2.0, 1..60),
        g in proptest::collection::vec(0.0f64..2.0, 60),
        slack in 1.0f64..3.0,
    ) {
        let n = f.len();
        let g = g[..n].to_vec();
        let (fi, gi): (f64, f64) = (f.iter().sum(), g.iter().sum());
        prop_assume!(fi > 1e-6 && gi > 1e-9);
        let eps = gi / fi * slack;
        let d = DomainSpec::cyclic(n);
        let s = markov_split(&real(d.clone(), f), &real(d, g), eps).unwrap();
        prop_assert!(s.mass_certified);
        prop_assert!(s.pointwise_certified);
    }

    #[test]
    fn young_inequality(seed in 0u64..10_000, ni in 0usize..3, k in 2usize..=4) {
        let n = [12, 16, 30][ni];
        let mut r = rng::stream(seed);
        let f = Signal::from_fn(DomainSpec::cyclic(n), |_| rng::complex_normal(&mut r)).unwrap();
        let lhs = young_functional(&f, k).unwrap();
        let rhs = lp_norm(&f, critical_exponent_f64(k)).unwrap().powi(2);
        prop_assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
    }
}

#[test]
fn holder_equal_indicators() {
    let d = DomainSpec::cyclic(12);
    let ind = real(d, (0..12).map(|x| if x % 3 == 0 { 1.0 } else { 0.0 }).collect());
    let m = holder_level_match(&[ind.clone(), ind.clone(), ind], &[2.0, 4.0, 4.0], 1e-9).unwrap();
    assert!(m.exceptional.is_empty());
    assert!((m.ratio - 1.0).abs() < 1e-12);
    assert!(m.constants.iter().all(|c| (c - m.constants[0]).abs() < 1e-12));
    assert!(m.pointwise_band < 1e-12);
}

#[test]
fn holder_bump_is_exceptional() {
    let d = DomainSpec::cyclic(40);
    let h: Vec<f64> = (0..40).map(|x| if x < 20 { 1.0 } else { 0.0 }).collect();
    let mut bumped = h.clone();
    bumped[30] = 0.05;
    let (a, b) = (real(d.clone(), h), real(d, bumped));
    let exps = [2.0, 2.0];
    let probe = holder_level_match(&[a.clone(), b.clone()], &exps, 0.5).unwrap();
    let eps = 1.0 - probe.ratio + 1e-12;
    let m = holder_level_match(&[a, b], &exps, eps).unwrap();
    assert_eq!(m.exceptional, vec![30]);
    assert!(m.pointwise_band < 0.01);
}

#[test]
fn holder_large_epsilon_still_reports() {
    let d = DomainSpec::cyclic(16);
    let mut r = rng::stream(3);
    let f: Vec<Signal> = (0..2)
        .map(|_| real(d.clone(), (0..16).map(|_| rng::normal(&mut r).abs()).collect()))
        .collect();
    let m = holder_level_match(&f, &[2.0, 2.0], 0.5).unwrap();
    assert!(m.ratio <= 1.0 + 1e-12);
    assert!(m.exceptional_mass <= 1.0 + 1e-12);
    let zero = real(d, vec![0.0; 16]);
    assert!(holder_level_match(&[f[0].clone(), zero], &[2.0, 2.0], 0.5).is_err());
}

/// Oracle: bitmask difference set and closure on Z/n.
fn oracle_subgroup(n: usize, mask: u32) -> Option<u32> {
    let rot = |m: u32, s: usize| -> u32 {
        let full = (1u32 << n) - 1;
        ((m << s) | (m >> (n - s))) & full
    };
    let mut d = 0u32;
    for b in 0..n {
        if mask >> b & 1 == 1 {
            // K − b
            d |= rot(mask, (n - b) % n);
        }
    }
    let (kd, dd) = (mask.count_ones(), d.count_ones());
    if 2 * dd >= 3 * kd {
        return None;
    }
    for b in 0..n {
        if d >> b & 1 == 1 && rot(d, b) != d {
            panic!("oracle: K − K not closed for n = {n}, K = {mask:b}");
        }
    }
    Some(d)
}

#[test]
fn sumset_exhaustive_up_to_14() {
    for n in 1..=14usize {
        let d = DomainSpec::cyclic(n);
        for mask in 1u32..(1 << n) {
            let k: Vec<usize> = (0..n).filter(|&b| mask >> b & 1 == 1).collect();
            match (sumset_group_test(&d, &k), oracle_subgroup(n, mask)) {
                (Ok(h), Some(o)) => {
                    let got: u32 = h.iter().map(|&x| 1u32 << x).sum();
                    assert_eq!(got, o);
                }
                (Err(Error::SumsetRatio { .. }), None) => {}
                (got, want) => panic!("n = {n}, K = {k:?}: {got:?} vs {want:?}"),
            }
        }
    }
}

#[test]
fn detect_indicator_of_even_residues() {
    let f = real(DomainSpec::cyclic(8), (0..8).map(|x| if x % 2 == 0 { 2f64.sqrt() } else { 0.0 }).collect());
    let det = detect_coset(&f, 3, 1e-9, &Tolerances::default()).unwrap();
    assert_eq!(det.coset.elements, vec![0, 2, 4, 6]);
    assert_eq!(det.coset.offset, 0);
    assert!(det.magnitude_residual < 1e-12);
}

#[test]
fn detect_shifted_coset_with_quadratic_phase() {
    let f = planted(8, 2, 1, 3, 5);
    let det = detect_coset(&f, 3, 1e-9, &Tolerances::default()).unwrap();
    assert_eq!(det.coset.elements, vec![0, 2, 4, 6]);
    assert_eq!(det.coset.offset, 1);
}

#[test]
fn detect_rejects_random() {
    let p = GenParams {
        domain: DomainSpec::cyclic(32),
        ..GenParams::default()
    };
    let f = generate(Kind::Random, &p, 2).unwrap();
    assert!(detect_coset(&f, 3, 0.1, &Tolerances::default()).is_err());
}

#[test]
fn planted_recovery_is_exact_for_all_cosets() {
    let tol = Tolerances::default();
    for n in 1..=24usize {
        for step in (1..=n).filter(|d| n % d == 0) {
            for offset in 0..n as i64 {
                for k in [2usize, 3] {
                    let f = planted(n, step, offset, k, (n * 1000 + step * 31 + offset as usize) as u64);
                    let r = recover_structured(&f, k, 1e-9, &tol)
                        .unwrap_or_else(|e| panic!("n={n} step={step} x0={offset} k={k}: {e}"));
                    assert!(r.total_residual <= 1e-7, "n={n} step={step} x0={offset} k={k}: {}", r.total_residual);
                    assert_eq!(r.coset.offset as i64, offset % step as i64);
                    r.coset.validate().unwrap();
                }
            }
        }
    }
}

#[test]
fn planted_scaling_gives_unit_norm() {
    for (n, step) in [(12usize, 3usize), (16, 4), (24, 2)] {
        let f = planted(n, step, 1, 3, 9);
        let u = uk_recursive(&f, 3).unwrap().value;
        assert!((u - 1.0).abs() < 1e-9);
        assert!((lp_norm(&f, 2.0).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn recovery_with_magnitude_noise() {
    let p = GenParams {
        domain: DomainSpec::cyclic(24),
        degree: 2,
        step: vec![2],
        offset: vec![1],
        k: 3,
        magnitude_noise: 0.02,
        ..GenParams::default()
    };
    let f = generate(Kind::CosetPhase, &p, 4).unwrap();
    let r = recover_structured(&f, 3, 0.1, &Tolerances::default()).unwrap();
    assert!(r.total_residual <= 0.2, "{}", r.total_residual);
}

#[test]
fn degenerate_k1_is_refused() {
    let f = planted(12, 3, 0, 2, 1);
    let err = recover_structured(&f, 1, 0.1, &Tolerances::default()).unwrap_err();
    assert!(err.to_string().contains("degenerate case k=1"));
}

#[test]
fn coset_phase_on_product_group() {
    let p = GenParams {
        domain: DomainSpec::group(&[4, 6]),
        degree: 2,
        step: vec![2, 3],
        offset: vec![1, 2],
        k: 3,
        ..GenParams::default()
    };
    let f = generate(Kind::CosetPhase, &p, 8).unwrap();
    let r = recover_structured(&f, 3, 1e-9, &Tolerances::default()).unwrap();
    assert!(r.total_residual <= 1e-7);
    assert_eq!(r.coset.elements.len(), 4);
}
