use gowerslab::domains::*;
use gowerslab::generate::random_group_poly;
use gowerslab::numeric::{dist_z, e};
use gowerslab::rng::{disc, stream};
use gowerslab::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_signal(domain: DomainSpec, seed: u64) -> Signal {
    let mut rng = stream(seed);
    let n = domain.cardinality();
    Signal::new(domain, (0..n).map(|_| disc(&mut rng)).collect()).unwrap()
}

fn moduli_strategy(max_card: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=32, 1..=3)
        .prop_filter("cardinality cap", move |m| m.iter().product::<usize>() <= max_card)
}

fn naive_dft(f: &Signal) -> Vec<Complex64> {
    let moduli = f.domain.moduli().unwrap().to_vec();
    let n = f.len();
    let coords: Vec<Vec<i64>> = (0..n).map(|i| f.domain.coords(i)).collect();
    (0..n)
        .map(|xi| {
            let mut z = Complex64::default();
            for x in 0..n {
                let phase: f64 = (0..moduli.len())
                    .map(|a| (coords[xi][a] * coords[x][a]) as f64 / moduli[a] as f64)
                    .sum();
                z += f.values[x] * e(-phase);
            }
            z / n as f64
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn plancherel_and_inverse(moduli in moduli_strategy(1024), seed in any::<u64>()) {
        let f = random_signal(DomainSpec::group(&moduli), seed);
        let fh = fourier(&f).unwrap();
        let lhs: f64 = fh.values.iter().map(|z| z.norm_sqr()).sum();
        let rhs = lp_norm(&f, 2.0).unwrap().powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs);
        let back = inverse_fourier(&fh).unwrap();
        for (a, b) in back.values.iter().zip(&f.values) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_matches_literal_sum(moduli in moduli_strategy(60), seed in any::<u64>()) {
        let f = random_signal(DomainSpec::group(&moduli), seed);
        let fh = fourier(&f).unwrap();
        for (a, b) in fh.values.iter().zip(naive_dft(&f)) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn translation_preserves_norms(moduli in moduli_strategy(256), seed in any::<u64>(), p in 0.5f64..6.0) {
        let f = random_signal(DomainSpec::group(&moduli), seed);
        let mut rng = stream(seed ^ 1);
        let h: Vec<i64> = moduli.iter().map(|&m| rng.gen_range(-(m as i64)..=(m as i64))).collect();
        let g = translate(&f, &h).unwrap();
        // The values are a permutation, so norms agree up to summation order.
        let key = |z: &Complex64| (z.re.to_bits(), z.im.to_bits());
        let mut a: Vec<_> = f.values.iter().map(key).collect();
        let mut b: Vec<_> = g.values.iter().map(key).collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        let (ng, nf) = (lp_norm(&g, p).unwrap(), lp_norm(&f, p).unwrap());
        prop_assert!((ng - nf).abs() <= 1e-13 * nf);
        prop_assert_eq!(lp_norm(&g, f64::INFINITY).unwrap(), lp_norm(&f, f64::INFINITY).unwrap());
        // T^h f(x) = f(x - h).
        let x = rng.gen_range(0..f.len());
        let cx = f.domain.coords(x);
        let shifted: Vec<i64> = cx.iter().zip(&h).map(|(a, b)| a - b).collect();
        prop_assert_eq!(g.values[x], f.values[f.domain.index_of(&shifted).unwrap()]);
    }

    #[test]
    fn planted_tables_accepted(moduli in moduli_strategy(200), d in 0usize..=3, seed in any::<u64>()) {
        let mut rng = stream(seed);
        let p = random_group_poly(&moduli, d, &mut rng);
        let dom = DomainSpec::group(&moduli);
        let got = poly_from_table(&p, &dom, d, 1e-8);
        prop_assert!(got.is_ok(), "{:?}", got.err());
    }

    #[test]
    fn lift_preserves_l2(n in 1usize..=40, q in 1usize..=5, seed in any::<u64>()) {
        let f = random_signal(DomainSpec::cyclic(n), seed);
        let g = lift_to_extension(&f, q).unwrap();
        prop_assert_eq!(g.len(), q * n);
        let (a, b) = (lp_norm(&g, 2.0).unwrap(), lp_norm(&f, 2.0).unwrap());
        prop_assert!((a - b).abs() < 1e-12);
        for i in 0..q * n {
            prop_assert_eq!(g.values[i], f.values[i % n]);
        }
    }
}

#[test]
fn random_tables_rejected() {
    let mut rng = stream(99);
    let groups: [&[usize]; 5] = [&[8], &[12], &[2, 4], &[3, 3], &[31]];
    let mut accepted = 0;
    let mut trials = 0;
    for g in groups {
        let dom = DomainSpec::group(g);
        for d in 1..=3 {
            for _ in 0..200 {
                let t: Vec<f64> = (0..dom.cardinality()).map(|_| rng.gen::<f64>()).collect();
                if poly_from_table(&t, &dom, d, 1e-8).is_ok() {
                    accepted += 1;
                }
                trials += 1;
            }
        }
    }
    assert!(accepted as f64 <= 0.001 * trials as f64, "{accepted}/{trials}");
}

#[test]
fn derivative_lowers_degree_exhaustively() {
    let mut groups: Vec<Vec<usize>> = (2..=64).map(|n| vec![n]).collect();
    groups.extend([vec![2, 2], vec![2, 4], vec![4, 4], vec![2, 2, 2], vec![3, 6], vec![2, 2, 2, 2], vec![4, 4, 4]]);
    let mut rng = stream(5);
    for moduli in groups {
        let dom = DomainSpec::group(&moduli);
        for d in 1..=3 {
            let p = random_group_poly(&moduli, d, &mut rng);
            let ph = PolyPhase::from_table_unchecked(dom.clone(), d, p);
            let f = phase_signal(&ph, c(1.0)).unwrap();
            for h in 0..dom.cardinality() {
                let hc = dom.coords(h);
                let g = mult_derivative(&f, &hc).unwrap();
                let table: Vec<f64> = g.values.iter().map(|z| numeric::turns(*z)).collect();
                assert!(
                    poly_from_table(&table, &dom, d - 1, 1e-8).is_ok(),
                    "{moduli:?} d={d} h={hc:?}"
                );
            }
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn frac_part(r: &BigRational) -> f64 {
    let f = r - r.floor();
    let (n, d) = (f.numer().to_string().parse::<f64>().unwrap(), f.denom().to_string().parse::<f64>().unwrap());
    n / d
}

#[test]
fn newton_coefficients_match_exact_differences() {
    // P(t) = a2 t² / q + (a1 t + a0) / N, with q = N for odd N and q = 2N for even N.
    let cases = [(5i64, 5i64, 1i64, 0i64, 0i64), (7, 7, 3, 2, 1), (9, 9, 1, 4, 5), (11, 11, 5, 0, 3), (12, 24, 1, 6, 0), (8, 16, 3, 1, 0)];
    for (n, q, a2, a1, a0) in cases {
        let exact = |t: i64| rat(a2 * t * t, q) + rat(a1 * t + a0, n);
        let table: Vec<f64> = (0..n).map(|t| frac_part(&exact(t))).collect();
        let got = poly_from_table(&table, &DomainSpec::cyclic(n as usize), 2, 1e-8).unwrap();
        let coeffs = got.coeffs.unwrap();
        let row: Vec<BigRational> = (0..3).map(exact).collect();
        let d1 = &row[1] - &row[0];
        let d2 = &row[2] - &row[1] * rat(2, 1) + &row[0];
        for (got, want) in coeffs.iter().zip([row[0].clone(), d1, d2]) {
            assert!(dist_z(got - frac_part(&want)) < 1e-12, "N={n}: {coeffs:?}");
        }
    }
    let t: Vec<f64> = (0..5).map(|n| (n * n) as f64 / 5.0).collect();
    let c5 = poly_from_table(&t, &DomainSpec::cyclic(5), 2, 1e-8).unwrap().coeffs.unwrap();
    for (a, b) in c5.iter().zip([0.0, 0.2, 0.4]) {
        assert!(dist_z(a - b) < 1e-12);
    }
    let cubic: Vec<f64> = (0..7).map(|n| (n * n * n) as f64 / 7.0).collect();
    match poly_from_table(&cubic, &DomainSpec::cyclic(7), 2, 1e-8) {
        Err(Error::NotPolynomial { defect, .. }) => assert!(defect > 0.1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn gaussian_l2_on_grid() {
    let f = Signal::from_fn(DomainSpec::grid(1, 8.0, 4096), |i| {
        let x = -8.0 + 16.0 * i as f64 / 4096.0;
        c((-std::f64::consts::PI * x * x).exp())
    })
    .unwrap();
    assert!((lp_norm(&f, 2.0).unwrap() - 2f64.powf(-0.25)).abs() < 1e-4);
}

#[test]
fn lift_examples() {
    let d = Signal::from_fn(DomainSpec::cyclic(4), |x| c(if x == 0 { 1.0 } else { 0.0 })).unwrap();
    let g = lift_to_extension(&d, 2).unwrap();
    let want = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    assert!(g.values.iter().zip(want).all(|(z, w)| *z == c(w)));
    assert_eq!(lift_to_extension(&d, 1).unwrap(), d);
    assert!(lift_to_extension(&d, 0).is_err());
    let q = Signal::from_fn(DomainSpec::cyclic(12), |n| e((n * n) as f64 / 12.0)).unwrap();
    let l = lift_to_extension(&q, 3).unwrap();
    let a = engine::uk_recursive(&q, 3).unwrap().value;
    let b = engine::uk_recursive(&l, 3).unwrap().value;
    assert!(a > 0.0 && b > 0.0 && b <= 1.0 + 1e-12);
}

#[test]
fn signal_file_format() {
    let f = random_signal(DomainSpec::group(&[2, 3]), 4);
    let s = serde_json::to_value(&f).unwrap();
    assert!(s["values"][0].as_array().unwrap().len() == 2);
    assert_eq!(s["domain"]["moduli"], serde_json::json!([2, 3]));
    let back: Signal = serde_json::from_value(s).unwrap();
    assert_eq!(back, f);
}
