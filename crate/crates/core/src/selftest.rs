//! The acceptance criteria as runnable checks.

use crate::coset::{recover_structured, sumset_group_test};
use crate::decoder::{decode_group, separation_scan};
use crate::domains::{lift_to_extension, lp_norm, DomainSpec, Signal};
use crate::engine::{
    bench_backends, critical_exponent_f64, ghk_orbit_estimate, u2_fft, uk_direct, uk_interval, uk_recursive,
    NormResult,
};
use crate::error::Result;
use crate::euclid::{
    beckner_constant, constant_recursion, cube_form_det, fourier_invariance_check, gaussian_signal,
    sharp_gowers_constant, sharpness_ratio, verify_sharpness,
};
use crate::generate::{generate, random_group_poly, GenParams, Kind};
use crate::nil::{heisenberg_nilsequence, quad_correlation_scan, quadratic_example, u3_ratio, HeisenbergSpec};
use crate::numeric::e;
use crate::rng::{complex_normal, disc, substream};
use crate::Tolerances;
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Criteria that fail by design; see the README for the measured values.
pub const KNOWN_UNATTAINABLE: &[u32] = &[12, 13];

pub type U2Fn = fn(&Signal) -> Result<NormResult>;

/// Inputs shared by every check. `u2` is swappable so a broken U² can be injected.
#[derive(Clone)]
pub struct Context {
    pub tol: Tolerances,
    pub seed: u64,
    pub u2: U2Fn,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            tol: Tolerances::default(),
            seed: 0x5eed,
            u2: u2_fft,
        }
    }
}

pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Check {
            passed,
            detail: detail.into(),
        }
    }
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub tags: &'static [&'static str],
    pub budget_s: f64,
    pub run: fn(&Context) -> Result<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: u32,
    pub name: String,
    pub tags: Vec<String>,
    pub passed: bool,
    pub detail: String,
    pub elapsed_s: f64,
    pub budget_s: f64,
    pub expected_failure: bool,
}

impl Outcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let note = if self.expected_failure { " [known unattainable]" } else { "" };
        format!(
            "{status} {:>2} {:<22} {:>7.2}s/{:<4}s {}{note}",
            self.id, self.name, self.elapsed_s, self.budget_s, self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "plancherel", tags: &["engine", "plancherel"], budget_s: 5.0, run: plancherel },
        Criterion { id: 2, name: "backend-equivalence", tags: &["engine"], budget_s: 60.0, run: backends },
        Criterion { id: 3, name: "extremisers", tags: &["engine"], budget_s: 30.0, run: extremisers },
        Criterion { id: 4, name: "critical-inequality", tags: &["engine"], budget_s: 60.0, run: critical },
        Criterion { id: 5, name: "coset-recovery", tags: &["coset"], budget_s: 120.0, run: coset_recovery },
        Criterion { id: 6, name: "decoder-noise", tags: &["decoder"], budget_s: 120.0, run: decoder_noise },
        Criterion { id: 7, name: "separation", tags: &["decoder"], budget_s: 60.0, run: separation },
        Criterion { id: 8, name: "inverse-sumset", tags: &["coset"], budget_s: 120.0, run: sumset },
        Criterion { id: 9, name: "sharp-constants", tags: &["euclid"], budget_s: 5.0, run: constants },
        Criterion { id: 10, name: "euclidean-sharpness", tags: &["euclid"], budget_s: 120.0, run: sharpness },
        Criterion { id: 11, name: "fourier-invariance", tags: &["euclid"], budget_s: 30.0, run: fourier_inv },
        Criterion { id: 12, name: "threshold-witness", tags: &["nil"], budget_s: 300.0, run: threshold },
        Criterion { id: 13, name: "extension-example", tags: &["nil"], budget_s: 300.0, run: extension },
        Criterion { id: 14, name: "ghk-consistency", tags: &["ghk", "engine"], budget_s: 60.0, run: ghk },
        Criterion { id: 15, name: "performance", tags: &["bench"], budget_s: 60.0, run: performance },
    ]
}

/// Comma-separated ids, names or tags; `None` or an empty filter selects everything.
pub fn select(filter: Option<&str>) -> Vec<Criterion> {
    let all = criteria();
    let terms: Vec<String> = match filter {
        Some(f) if !f.trim().is_empty() => f.split(',').map(|t| t.trim().to_lowercase()).collect(),
        _ => return all,
    };
    all.into_iter()
        .filter(|c| {
            terms.iter().any(|t| {
                t == &c.id.to_string() || t == c.name || c.tags.iter().any(|tag| tag == t)
            })
        })
        .collect()
}

pub fn run_one(c: &Criterion, ctx: &Context) -> Outcome {
    let start = Instant::now();
    let check = (c.run)(ctx).unwrap_or_else(|err| Check::new(false, format!("error: {err}")));
    let elapsed = start.elapsed().as_secs_f64();
    let mut passed = check.passed;
    let mut detail = check.detail;
    if elapsed > c.budget_s {
        passed = false;
        detail = format!("{detail}; over budget");
    }
    Outcome {
        id: c.id,
        name: c.name.to_string(),
        tags: c.tags.iter().map(|t| t.to_string()).collect(),
        passed,
        detail,
        elapsed_s: elapsed,
        budget_s: c.budget_s,
        expected_failure: KNOWN_UNATTAINABLE.contains(&c.id),
    }
}

/// Runs the selected criteria in id order, calling `report` after each.
pub fn run(filter: Option<&str>, ctx: &Context, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    select(filter)
        .iter()
        .map(|c| {
            let o = run_one(c, ctx);
            report(&o);
            o
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn random_signal(domain: DomainSpec, rng: &mut crate::rng::Stream) -> Result<Signal> {
    let n = domain.cardinality();
    Signal::new(domain, (0..n).map(|_| disc(rng)).collect())
}

/// `(Σ_ξ |f̂(ξ)|⁴)^{1/4}` with the transform written out as a double loop.
fn u2_literal(f: &Signal) -> f64 {
    let n = f.len();
    let roots: Vec<Complex64> = (0..n).map(|r| e(-(r as f64) / n as f64)).collect();
    let mut s = 0.0;
    for xi in 0..n {
        let mut z = Complex64::default();
        for x in 0..n {
            z += f.values[x] * roots[(xi * x) % n];
        }
        s += (z / n as f64).norm_sqr().powi(2);
    }
    s.powf(0.25)
}

fn plancherel(ctx: &Context) -> Result<Check> {
    let mut rng = substream(ctx.seed, 1);
    let mut worst = 0.0f64;
    for &n in &[16usize, 60, 128, 1024] {
        for _ in 0..50 {
            let f = random_signal(DomainSpec::cyclic(n), &mut rng)?;
            let got = (ctx.u2)(&f)?.value;
            // The direct sum costs N³; above that the literal transform is the oracle.
            let want = if (n as f64).powi(3) <= 1e7 {
                uk_direct(&f, 2, &ctx.tol)?.value
            } else {
                u2_literal(&f)
            };
            worst = worst.max(rel(got, want));
        }
    }
    Ok(Check::new(worst <= 1e-9, format!("max rel diff {worst:.2e} over 200 signals")))
}

fn backends(ctx: &Context) -> Result<Check> {
    let mut rng = substream(ctx.seed, 2);
    let shapes: [&[usize]; 6] = [&[32], &[31], &[2, 16], &[4, 8], &[2, 2, 2, 4], &[27]];
    let mut worst = 0.0f64;
    for t in 0..200 {
        let moduli = if t % 2 == 0 {
            shapes[(t / 2) % shapes.len()].to_vec()
        } else {
            vec![rng.gen_range(1..=32)]
        };
        let k = 1 + t % 4;
        let f = random_signal(DomainSpec::group(&moduli), &mut rng)?;
        let a = uk_direct(&f, k, &ctx.tol)?.value;
        let b = uk_recursive(&f, k)?.value;
        worst = worst.max(rel(a, b));
    }
    Ok(Check::new(worst <= 1e-9, format!("max rel diff {worst:.2e} over 200 signals, k <= 4, |G| <= 32")))
}

fn extremisers(ctx: &Context) -> Result<Check> {
    let mut rng = substream(ctx.seed, 3);
    let mut worst = 0.0f64;
    let shapes: [&[usize]; 5] = [&[9], &[16], &[25], &[2, 6], &[3, 3, 3]];
    for k in 1..=4 {
        for moduli in shapes {
            let p = random_group_poly(moduli, k - 1, &mut rng);
            let f = Signal::new(DomainSpec::group(moduli), p.iter().map(|&v| e(v)).collect())?;
            worst = worst.max((uk_recursive(&f, k)?.value - 1.0).abs());
        }
        for n in [7usize, 40, 100] {
            let coeffs: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let f = Signal::from_fn(DomainSpec::interval(n), |i| e(poly_at(&coeffs, (i + 1) as f64)))?;
            worst = worst.max((uk_interval(&f, k)?.value - 1.0).abs());
        }
    }
    let mut inv = 0.0f64;
    for t in 0..200 {
        let k = 2 + t % 3;
        if t % 2 == 0 {
            let moduli = shapes[t / 2 % shapes.len()];
            let g = random_signal(DomainSpec::group(moduli), &mut rng)?;
            let p = random_group_poly(moduli, k - 1, &mut rng);
            let f = g.map(|x, z| z * e(p[x]));
            inv = inv.max((uk_recursive(&f, k)?.value - uk_recursive(&g, k)?.value).abs());
        } else {
            let n = rng.gen_range(4..=40);
            let g = random_signal(DomainSpec::interval(n), &mut rng)?;
            let coeffs: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let f = g.map(|i, z| z * e(poly_at(&coeffs, (i + 1) as f64)));
            inv = inv.max((uk_interval(&f, k)?.value - uk_interval(&g, k)?.value).abs());
        }
    }
    Ok(Check::new(
        worst <= 1e-9 && inv <= 1e-9,
        format!("max |U^k(e(P)) - 1| {worst:.2e}; max invariance gap {inv:.2e}"),
    ))
}

fn poly_at(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn critical(ctx: &Context) -> Result<Check> {
    let mut rng = substream(ctx.seed, 4);
    let mut worst = f64::NEG_INFINITY;
    for t in 0..1000 {
        let k = 1 + t % 4;
        let f = match t % 3 {
            0 => {
                let n = rng.gen_range(1..=64);
                random_signal(DomainSpec::cyclic(n), &mut rng)?
            }
            1 => {
                // Sparse signals sit closest to the bound.
                let n = rng.gen_range(2..=48);
                let p: f64 = rng.gen_range(0.05..0.5);
                let mut s = random_signal(DomainSpec::group(&[2, n / 2 + 1]), &mut rng)?;
                for v in s.values.iter_mut() {
                    if rng.gen::<f64>() > p {
                        *v = Complex64::default();
                    }
                }
                s
            }
            _ => {
                let points = 128;
                let sigma = rng.gen_range(0.5..1.5);
                let g = gaussian_signal(8.0, points, sigma, rng.gen_range(-1.0..1.0), 0.0)?;
                let noise = complex_normal(&mut rng) * 0.1;
                g.map(|_, z| z * (Complex64::new(1.0, 0.0) + noise))
            }
        };
        let u = crate::engine::uk(&f, k, &ctx.tol)?.value;
        let l = lp_norm(&f, critical_exponent_f64(k))?;
        worst = worst.max(u - l);
    }
    Ok(Check::new(worst <= 1e-9, format!("max U^k - L^p_k = {worst:.2e} over 1000 signals")))
}

fn coset_recovery(ctx: &Context) -> Result<Check> {
    let mut ratio_gap = 0.0f64;
    let mut residual = 0.0f64;
    let mut cases = 0;
    for &n in &[8usize, 12, 16, 24] {
        for step in (1..=n).filter(|d| n % d == 0) {
            for offset in 0..step as i64 {
                let p = GenParams {
                    domain: DomainSpec::cyclic(n),
                    degree: 2,
                    step: vec![step],
                    offset: vec![offset],
                    k: 3,
                    ..GenParams::default()
                };
                let seed = ctx.seed ^ (n * 1009 + step * 31 + offset as usize) as u64;
                let f = generate(Kind::CosetPhase, &p, seed)?;
                let r = uk_recursive(&f, 3)?.value / lp_norm(&f, 2.0)?;
                ratio_gap = ratio_gap.max((r - 1.0).abs());
                residual = residual.max(recover_structured(&f, 3, 1e-9, &ctx.tol)?.total_residual);
                cases += 1;
            }
        }
    }
    Ok(Check::new(
        ratio_gap <= 1e-9 && residual <= 1e-7,
        format!("{cases} cosets: max |U3/L2 - 1| {ratio_gap:.2e}, max residual {residual:.2e}"),
    ))
}

fn decoder_noise(ctx: &Context) -> Result<Check> {
    let mut exact = 0.0f64;
    let mut rng = substream(ctx.seed, 6);
    for &n in &[9usize, 16, 25, 27] {
        for k in 1..=4 {
            for _ in 0..5 {
                let p = random_group_poly(&[n], k - 1, &mut rng);
                let c = e(rng.gen::<f64>());
                let f = Signal::new(DomainSpec::cyclic(n), p.iter().map(|&v| c * e(v)).collect())?;
                exact = exact.max(decode_group(&f, k, &ctx.tol)?.residual_l1);
            }
        }
    }
    let mut monotone = true;
    let mut at_005 = 0.0f64;
    for seed in 0..6u64 {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=10 {
            let delta = i as f64 * 0.01;
            let p = GenParams {
                domain: DomainSpec::cyclic(27),
                degree: 2,
                phase_noise: delta,
                ..GenParams::default()
            };
            let f = generate(Kind::PolyPhase, &p, ctx.seed.wrapping_add(seed))?;
            let r = decode_group(&f, 3, &ctx.tol)?.residual_l1;
            monotone &= r >= prev - 1e-12;
            prev = r;
            if i == 5 {
                at_005 = at_005.max(r);
            }
        }
    }
    Ok(Check::new(
        exact <= 1e-7 && monotone && at_005 <= 0.25,
        format!("exact residual {exact:.2e}; monotone {monotone}; worst residual(0.05) {at_005:.3}"),
    ))
}

fn separation(_: &Context) -> Result<Check> {
    let bound = 2f64.powf(-1.5);
    let mut min = f64::INFINITY;
    let mut count = 0;
    for n in 2..=10 {
        let r = separation_scan(n, 2)?;
        min = min.min(r.min_distance);
        count += r.count;
    }
    Ok(Check::new(min >= bound, format!("min distance {min:.6} >= {bound:.6} over {count} phases")))
}

fn sumset(_: &Context) -> Result<Check> {
    let mut triggered = 0u64;
    let mut bad = Vec::new();
    for n in 1..=14usize {
        let d = DomainSpec::cyclic(n);
        for mask in 1u32..(1 << n) {
            let k: Vec<usize> = (0..n).filter(|&b| mask >> b & 1 == 1).collect();
            let mut diff = 0u32;
            for &a in &k {
                for &b in &k {
                    diff |= 1 << ((a + n - b) % n);
                }
            }
            let small = 2 * diff.count_ones() < 3 * k.len() as u32;
            let closed = (0..n).filter(|&a| diff >> a & 1 == 1).all(|a| {
                (0..n).filter(|&b| diff >> b & 1 == 1).all(|b| diff >> ((a + b) % n) & 1 == 1)
            });
            let lib = sumset_group_test(&d, &k);
            if small {
                triggered += 1;
                let ok = closed && lib.map(|h| h.iter().map(|&x| 1u32 << x).sum::<u32>() == diff).unwrap_or(false);
                if !ok {
                    bad.push((n, mask));
                }
            } else if lib.is_ok() {
                bad.push((n, mask));
            }
        }
    }
    Ok(Check::new(
        bad.is_empty(),
        format!("{triggered} small-doubling sets, all subgroups; {} mismatches", bad.len()),
    ))
}

fn constants(_: &Context) -> Result<Check> {
    let round4 = |x: f64| (x * 1e4).round() / 1e4;
    let c = |k| sharp_gowers_constant(k);
    let printed = c(1)? == 1.0
        && round4(c(2)?) == 0.9367
        && round4(c(3)?) == 0.9170
        && (c(3)? - 2f64.powf(-0.125)).abs() < 1e-15
        && round4(c(4)?) == 0.9248;
    let dets = (1..=12).all(|d| cube_form_det(d).map(|v| v == BigInt::from(2).pow((d * (d - 1)) as u32)).unwrap_or(false));
    let mut rec = 0.0f64;
    for k in 2..=8 {
        rec = rec.max(constant_recursion(k)?.diff);
    }
    let a2 = (beckner_constant(2.0)? - 1.0).abs() < 1e-15;
    Ok(Check::new(
        printed && dets && rec <= 1e-12 && a2,
        format!("printed {printed}; det M_d {dets}; recursion diff {rec:.2e}"),
    ))
}

fn padded_signal(rng: &mut crate::rng::Stream) -> Result<Signal> {
    let bumps = rng.gen_range(1..=3);
    let params: Vec<(Complex64, f64, f64, f64)> = (0..bumps)
        .map(|_| {
            (
                complex_normal(rng),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.7..1.2),
                rng.gen_range(-2.0..2.0),
            )
        })
        .collect();
    let domain = DomainSpec::grid(1, 8.0, 256);
    let d2 = domain.clone();
    Signal::from_fn(domain, |i| {
        let x = d2.grid_point(i)[0];
        params
            .iter()
            .map(|&(a, c, s, xi)| a * e(xi * x) * (-std::f64::consts::PI * (x - c).powi(2) / (s * s)).exp())
            .sum()
    })
}

fn sharpness(ctx: &Context) -> Result<Check> {
    let r = verify_sharpness(3, 8.0, 2048, &[24, 48, 96], &ctx.tol)?;
    let c3 = sharp_gowers_constant(3)?;
    let mut rng = substream(ctx.seed, 10);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let f = padded_signal(&mut rng)?;
        worst = worst.max(sharpness_ratio(&f, 3, &ctx.tol)? / c3);
    }
    Ok(Check::new(
        r.error <= 1e-3 && r.converging && worst <= 1.0 + 2e-3,
        format!(
            "|ratio - C3| {:.2e}; refinement converging {}; max U3/(C3 L2) over 500 signals {worst:.6}",
            r.error, r.converging
        ),
    ))
}

fn fourier_inv(ctx: &Context) -> Result<Check> {
    let cases = [
        ("gaussian", gaussian_signal(8.0, 256, 1.0, 0.0, 0.0)?),
        ("modulated", gaussian_signal(12.0, 576, 1.0, 0.0, 3.0)?),
        ("dilated", gaussian_signal(12.0, 576, 2.0, 0.0, 0.0)?),
    ];
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (name, f) in &cases {
        let d = fourier_invariance_check(f, &ctx.tol)?.diff;
        worst = worst.max(d);
        parts.push(format!("{name} {d:.1e}"));
    }
    Ok(Check::new(worst <= 1e-3, parts.join(", ")))
}

/// Scan denominator for the witness: a divisor of N well inside the scan cap.
const WITNESS_DENOMINATOR: usize = 4096;

fn threshold(ctx: &Context) -> Result<Check> {
    let target = 2f64.powf(-0.125);
    let spec = HeisenbergSpec::default();
    let f = heisenberg_nilsequence(&spec)?;
    let ratio = u3_ratio(&f, &ctx.tol)?;
    let scan = quad_correlation_scan(&f, WITNESS_DENOMINATOR, &ctx.tol)?;
    // Diagnostic only: the same window with rationally independent frequencies.
    let alt = HeisenbergSpec {
        alpha2: std::f64::consts::SQRT_2 - 1.0,
        ..spec.clone()
    };
    let g = heisenberg_nilsequence(&alt)?;
    let alt_scan = quad_correlation_scan(&g, WITNESS_DENOMINATOR, &ctx.tol)?;
    let passed = (ratio - target).abs() <= 0.02 && scan.max_corr <= 0.1;
    Ok(Check::new(
        passed,
        format!(
            "N={} U3/L2 {ratio:.6}; max corr {:.3} at (a,b)=({},{}) D={}; independent-frequency pair: L2 {:.4}, max corr {:.3}",
            spec.n,
            scan.max_corr,
            scan.a,
            scan.b,
            WITNESS_DENOMINATOR,
            lp_norm(&g, 2.0)?,
            alt_scan.max_corr
        ),
    ))
}

fn extension(ctx: &Context) -> Result<Check> {
    let mut u3 = Vec::new();
    let mut base = Vec::new();
    let mut lifted = Vec::new();
    for &n in &[31usize, 61, 121] {
        let f = quadratic_example(n, 3)?;
        u3.push(uk_recursive(&f, 3)?.value);
        base.push(quad_correlation_scan(&f, n, &ctx.tol)?.max_corr);
        let g = lift_to_extension(&f, 3)?;
        lifted.push(quad_correlation_scan(&g, 3 * n, &ctx.tol)?.max_corr);
    }
    let large = u3.iter().all(|&v| v >= 0.9);
    let decreasing = base.windows(2).all(|w| w[1] < w[0]);
    let reappears = lifted.iter().all(|&v| v >= 0.9);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join("/");
    Ok(Check::new(
        large && decreasing && reappears,
        format!(
            "N=31/61/121: U3 {}; scan {}; lifted scan {}",
            fmt(&u3),
            fmt(&base),
            fmt(&lifted)
        ),
    ))
}

fn ghk(_: &Context) -> Result<Check> {
    let n = 128;
    let chi = Signal::from_fn(DomainSpec::cyclic(n), |x| e(x as f64 / n as f64))?;
    let group = u2_fft(&chi)?.value;
    let orbit = Signal::from_fn(DomainSpec::interval(8 * n), |i| e((i + 1) as f64 / n as f64))?;
    let est = ghk_orbit_estimate(&orbit, 2, &[64, 128, 256])?;
    let gap = (est.value - group).abs();
    Ok(Check::new(gap <= 0.05, format!("orbit estimate {:.4} vs group norm {group:.4}", est.value)))
}

fn performance(ctx: &Context) -> Result<Check> {
    let rows = bench_backends(&[128], 3, ctx.seed, &ctx.tol)?;
    let time = |name: &str| rows.iter().find(|r| r.backend == name).map(|r| r.elapsed_s);
    match (time("direct"), time("recursive")) {
        (Some(d), Some(r)) => {
            let speedup = d / r.max(1e-9);
            Ok(Check::new(speedup >= 10.0, format!("N=128 k=3: direct {d:.3}s, recursive {r:.4}s, {speedup:.0}x")))
        }
        _ => Ok(Check::new(false, "bench did not produce both backends")),
    }
}
