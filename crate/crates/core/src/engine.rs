//! U^k norms: direct 2^k-fold sums, the derivative recursion with an FFT base case,
//! interval norms, grid norms, the Gowers inner product and orbit estimates.

use crate::config::Tolerances;
use crate::domains::{embed_interval, DomainSpec, GroupIndex, Signal};
use crate::error::{invalid, precondition, Error, Result};
use crate::fft::FftPlan;
use crate::numeric::{pairwise_sum, pairwise_sum_by, pairwise_sum_by_c};
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Direct,
    Recursive,
    FftU2,
    Grid,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Direct => "direct",
            Backend::Recursive => "recursive",
            Backend::FftU2 => "fft_u2",
            Backend::Grid => "grid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub k: usize,
    pub value: f64,
    pub backend: Backend,
    pub work_count: u64,
    pub elapsed: f64,
}

/// `p_k = 2^k / (k+1)`.
pub fn critical_exponent(k: usize) -> Result<Ratio<u64>> {
    if k < 1 {
        return invalid("critical exponent needs k >= 1");
    }
    if k > 62 {
        return invalid("k too large for an exact 64-bit rational");
    }
    Ok(Ratio::new(1u64 << k, k as u64 + 1))
}

pub fn critical_exponent_f64(k: usize) -> f64 {
    2f64.powi(k as i32) / (k as f64 + 1.0)
}

fn check_k(k: usize, min: usize) -> Result<()> {
    if k < min {
        return precondition(format!("k must be >= {min}, got {k}"));
    }
    if k > 30 {
        return invalid(format!("k = {k} is out of range"));
    }
    Ok(())
}

fn timed(k: usize, backend: Backend, work: f64, start: Instant, value: f64) -> NormResult {
    NormResult {
        k,
        value,
        backend,
        work_count: work.min(u64::MAX as f64) as u64,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

/// Takes the 2^k-th root of a power sum after checking it is not meaningfully negative.
fn root(power: f64, k: usize, scale: f64) -> Result<f64> {
    let slack = 1e-12 * scale.max(1.0);
    if power < -slack {
        return Err(Error::NegativePowerSum(power));
    }
    Ok(power.max(0.0).powf(1.0 / 2f64.powi(k as i32)))
}

fn scale_of(values: &[Complex64], k: usize) -> f64 {
    let m = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    m.powf(2f64.powi(k as i32))
}

/// `E_{x,h} Π_ω C^{|ω|} g(x + ω·h)` by explicit summation, organised so that each
/// level multiplies `g(x)·conj(g(x+h))` once per point.
fn direct_power(values: &[Complex64], idx: &GroupIndex, k: usize) -> Complex64 {
    let n = idx.card;
    if k == 0 {
        return pairwise_sum_c_slice(values) / n as f64;
    }
    let level = |h: usize| {
        let tab = idx.translate_table(h);
        let g: Vec<Complex64> = (0..n).map(|x| values[x] * values[tab[x]].conj()).collect();
        direct_power(&g, idx, k - 1)
    };
    let parts: Vec<Complex64> = if k >= 2 && n >= 8 {
        (0..n).into_par_iter().map(level).collect()
    } else {
        (0..n).map(level).collect()
    };
    pairwise_sum_c_slice(&parts) / n as f64
}

fn pairwise_sum_c_slice(v: &[Complex64]) -> Complex64 {
    crate::numeric::pairwise_sum_c(v)
}

/// Explicit 2^k-fold sum. Refuses inputs with `|G|^{k+1}` above the work cap.
pub fn uk_direct(f: &Signal, k: usize, tol: &Tolerances) -> Result<NormResult> {
    let start = Instant::now();
    let moduli = f.domain.moduli()?;
    check_k(k, 1)?;
    let n = f.len() as f64;
    let work = n.powi(k as i32 + 1);
    if work > tol.work_cap {
        return Err(Error::WorkCap {
            work,
            cap: tol.work_cap,
        });
    }
    let idx = GroupIndex::new(moduli);
    let s = direct_power(&f.values, &idx, k);
    let value = root(s.re, k, scale_of(&f.values, k))?;
    Ok(timed(k, Backend::Direct, work, start, value))
}

/// `‖g‖_{U^k}^{2^k}` on a group, by the derivative recursion down to the Fourier U² formula.
pub(crate) fn group_power(values: &[Complex64], idx: &GroupIndex, plan: &FftPlan, k: usize, parallel: bool) -> f64 {
    let n = idx.card;
    match k {
        0 => pairwise_sum_c_slice(values).re / n as f64,
        1 => (pairwise_sum_c_slice(values) / n as f64).norm_sqr(),
        2 => {
            let mut v = values.to_vec();
            plan.forward(&mut v);
            let inv = 1.0 / n as f64;
            pairwise_sum_by(n, &|i| (v[i] * inv).norm_sqr().powi(2))
        }
        _ => {
            let level = |h: usize| {
                let nh = idx.neg(h);
                let tab = idx.translate_table(nh);
                let g: Vec<Complex64> = (0..n).map(|x| values[tab[x]] * values[x].conj()).collect();
                group_power(&g, idx, plan, k - 1, false)
            };
            let parts: Vec<f64> = if parallel {
                (0..n).into_par_iter().map(level).collect()
            } else {
                (0..n).map(level).collect()
            };
            pairwise_sum(&parts) / n as f64
        }
    }
}

/// Derivative recursion `E_h ‖(T^h f) f̄‖_{U^{k-1}}^{2^{k-1}}` with an FFT U² base case.
pub fn uk_recursive(f: &Signal, k: usize) -> Result<NormResult> {
    let start = Instant::now();
    let moduli = f.domain.moduli()?;
    check_k(k, 1)?;
    let idx = GroupIndex::new(moduli);
    let plan = FftPlan::new(moduli);
    let p = group_power(&f.values, &idx, &plan, k, true);
    let value = root(p, k, scale_of(&f.values, k))?;
    let n = f.len() as f64;
    let work = n.powi(k.saturating_sub(2) as i32) * n * n.log2().max(1.0);
    Ok(timed(k, Backend::Recursive, work, start, value))
}

/// `‖f‖_{U²} = ‖f̂‖_{L⁴}`.
pub fn u2_fft(f: &Signal) -> Result<NormResult> {
    let start = Instant::now();
    let moduli = f.domain.moduli()?;
    let idx = GroupIndex::new(moduli);
    let plan = FftPlan::new(moduli);
    let p = group_power(&f.values, &idx, &plan, 2, false);
    let value = root(p, 2, scale_of(&f.values, 2))?;
    let n = f.len() as f64;
    Ok(timed(2, Backend::FftU2, n * n.log2().max(1.0), start, value))
}

/// Picks a backend for any domain: recursion on groups, the interval ratio, or the grid scheme.
pub fn uk(f: &Signal, k: usize, tol: &Tolerances) -> Result<NormResult> {
    match f.domain {
        DomainSpec::FiniteAbelian { .. } => uk_recursive(f, k),
        DomainSpec::Interval { .. } => uk_interval(f, k),
        DomainSpec::EuclideanGrid { .. } => uk_grid(f, k, tol),
    }
}

/// `‖f̃‖_{U^k(Z/Ñ)} / ‖1_[N]‖_{U^k(Z/Ñ)}` with `Ñ = 2^k N + 1`.
///
/// Small instances run on the cyclic embedding itself; larger ones use the exact cube sums
/// over Z, which give the same ratio because no cube wraps around once `Ñ > 2^k N`.
pub fn uk_interval(f: &Signal, k: usize) -> Result<NormResult> {
    let n = interval_len(f)?;
    check_k(k, 1)?;
    let nt = (1usize << k) * n + 1;
    if (nt as f64).powi(k as i32) <= 2e7 {
        uk_interval_embedded(f, k, nt)
    } else {
        uk_interval_linear(f, k)
    }
}

fn interval_len(f: &Signal) -> Result<usize> {
    match f.domain {
        DomainSpec::Interval { n } => Ok(n),
        _ => invalid("expected an interval signal"),
    }
}

/// Interval norm computed on an explicit cyclic embedding `Z/Ñ`, `Ñ > 2^k N`.
pub fn uk_interval_embedded(f: &Signal, k: usize, ntilde: usize) -> Result<NormResult> {
    let start = Instant::now();
    let n = interval_len(f)?;
    check_k(k, 1)?;
    if ntilde <= (1usize << k) * n {
        return precondition(format!("ambient size {ntilde} must exceed 2^k N = {}", (1usize << k) * n));
    }
    let g = embed_interval(f, ntilde)?;
    let one = Signal::constant(DomainSpec::interval(n), Complex64::new(1.0, 0.0))?;
    let ind = embed_interval(&one, ntilde)?;
    let idx = GroupIndex::new(&[ntilde]);
    let plan = FftPlan::new(&[ntilde]);
    let num = group_power(&g.values, &idx, &plan, k, true);
    let den = group_power(&ind.values, &idx, &plan, k, true);
    let value = root(num / den, k, scale_of(&f.values, k))?;
    let m = ntilde as f64;
    let work = 2.0 * m.powi(k.saturating_sub(2) as i32) * m * m.log2();
    Ok(timed(k, Backend::Recursive, work, start, value))
}

/// Interval norm from exact cube sums over Z (zero-padded linear correlations).
pub fn uk_interval_linear(f: &Signal, k: usize) -> Result<NormResult> {
    let start = Instant::now();
    let n = interval_len(f)?;
    check_k(k, 1)?;
    let num = linear_cube_sum(&f.values, k, true);
    let den = indicator_cube_sum(n, k);
    let value = root(num / den, k, scale_of(&f.values, k))?;
    let nf = n as f64;
    let work = nf.powi(k.saturating_sub(2) as i32) * nf * nf.log2().max(1.0) * 4.0;
    Ok(timed(k, Backend::Recursive, work, start, value))
}

/// Number-weighted cube count `Σ_{x,h} Π_ω C^{|ω|} g(x+ω·h)` over Z for a finitely supported g.
pub(crate) fn linear_cube_sum(values: &[Complex64], k: usize, parallel: bool) -> f64 {
    let len = values.len();
    if len == 0 {
        return 0.0;
    }
    match k {
        0 => pairwise_sum_c_slice(values).re,
        1 => pairwise_sum_c_slice(values).norm_sqr(),
        2 => {
            let mut planner = FftPlanner::new();
            autocorr_energy(values, &mut planner)
        }
        _ => {
            let deriv = |h: usize| -> Vec<Complex64> {
                (0..len - h).map(|x| values[x + h] * values[x].conj()).collect()
            };
            if k == 3 {
                let term = |(planner, buf): &mut (FftPlanner<f64>, Vec<Complex64>), h: usize| {
                    let w = if h == 0 { 1.0 } else { 2.0 };
                    let l = len - h;
                    let m = crate::numeric::next_smooth(2 * l - 1);
                    buf.clear();
                    buf.extend((0..l).map(|x| values[x + h] * values[x].conj()));
                    buf.resize(m, Complex64::default());
                    planner.plan_fft_forward(m).process(buf);
                    w * pairwise_sum_by(m, &|i| buf[i].norm_sqr().powi(2)) / m as f64
                };
                let init = || (FftPlanner::new(), Vec::new());
                let parts: Vec<f64> = if parallel {
                    (0..len).into_par_iter().map_init(init, term).collect()
                } else {
                    let mut state = init();
                    (0..len).map(|h| term(&mut state, h)).collect()
                };
                pairwise_sum(&parts)
            } else {
                let term = |h: usize| {
                    let w = if h == 0 { 1.0 } else { 2.0 };
                    w * linear_cube_sum(&deriv(h), k - 1, false)
                };
                let parts: Vec<f64> = if parallel {
                    (0..len).into_par_iter().map(term).collect()
                } else {
                    (0..len).map(term).collect()
                };
                pairwise_sum(&parts)
            }
        }
    }
}

/// `Σ_y |Σ_x g(x+y) conj g(x)|²` via a zero-padded 5-smooth transform.
fn autocorr_energy(values: &[Complex64], planner: &mut FftPlanner<f64>) -> f64 {
    let len = values.len();
    if len == 0 {
        return 0.0;
    }
    let m = crate::numeric::next_smooth(2 * len - 1);
    let mut buf = vec![Complex64::default(); m];
    buf[..len].copy_from_slice(values);
    planner.plan_fft_forward(m).process(&mut buf);
    pairwise_sum_by(m, &|i| buf[i].norm_sqr().powi(2)) / m as f64
}

/// Cube count of `1_[N]` over Z: `I_1(L) = L²`, `I_k(L) = I_{k-1}(L) + 2 Σ_{j<L} I_{k-1}(j)`.
pub(crate) fn indicator_cube_sum(n: usize, k: usize) -> f64 {
    if k == 0 {
        return n as f64;
    }
    let mut cur: Vec<f64> = (0..=n).map(|l| (l as f64) * (l as f64)).collect();
    for _ in 2..=k {
        let mut next = vec![0.0; n + 1];
        let mut prefix = 0.0;
        for l in 0..=n {
            // prefix = Σ_{j=1}^{l-1} cur[j]
            next[l] = cur[l] + 2.0 * prefix;
            if l >= 1 {
                prefix += cur[l];
            }
        }
        cur = next;
    }
    cur[n]
}

/// The 2^k-linear correlation form `E_{x,h} Π_ω C^{|ω|} f_ω(x + ω·h)`.
pub fn gowers_inner(family: &[Signal], tol: &Tolerances) -> Result<Complex64> {
    let m = family.len();
    if m == 0 || !m.is_power_of_two() {
        return invalid(format!("family size {m} is not a power of two"));
    }
    let k = m.trailing_zeros() as usize;
    let domain = &family[0].domain;
    let moduli = domain.moduli()?;
    if family.iter().any(|f| &f.domain != domain) {
        return invalid("all signals in a Gowers inner product must share one domain");
    }
    let n = domain.cardinality();
    let work = (n as f64).powi(k as i32 + 1) * m as f64;
    if work > tol.work_cap {
        return Err(Error::WorkCap {
            work,
            cap: tol.work_cap,
        });
    }
    let idx = GroupIndex::new(moduli);
    let tuples = n.pow(k as u32);
    let per_tuple = |t: usize| -> Complex64 {
        let mut hs = vec![0usize; k];
        let mut r = t;
        for h in hs.iter_mut() {
            *h = r % n;
            r /= n;
        }
        pairwise_sum_by_c(n, &|x| {
            let mut prod = Complex64::new(1.0, 0.0);
            for (w, f) in family.iter().enumerate() {
                let mut y = x;
                for (j, &h) in hs.iter().enumerate() {
                    if w >> j & 1 == 1 {
                        y = idx.add(y, h);
                    }
                }
                let v = f.values[y];
                prod *= if w.count_ones() % 2 == 1 { v.conj() } else { v };
            }
            prod
        })
    };
    let parts: Vec<Complex64> = (0..tuples).into_par_iter().map(per_tuple).collect();
    Ok(pairwise_sum_c_slice(&parts) / (tuples as f64 * n as f64))
}

/// Riemann-sum approximation of `‖f‖_{U^k(R^dim)}` on a periodic grid.
pub fn uk_grid(f: &Signal, k: usize, tol: &Tolerances) -> Result<NormResult> {
    let start = Instant::now();
    let (dim, extent, points) = match f.domain {
        DomainSpec::EuclideanGrid {
            dim,
            extent,
            points,
        } => (dim, extent, points),
        _ => return invalid("uk_grid needs a grid signal"),
    };
    check_k(k, 1)?;
    let frac = boundary_mass_fraction(f, extent);
    if frac > tol.boundary_mass {
        return Err(Error::Wraparound { fraction: frac });
    }
    let shape = vec![points; dim];
    let idx = GroupIndex::new(&shape);
    let plan = FftPlan::new(&shape);
    let p = group_power(&f.values, &idx, &plan, k, true);
    let group_value = root(p, k, scale_of(&f.values, k))?;
    let value = group_value * f.domain.mass().powf(1.0 / critical_exponent_f64(k));
    let n = f.len() as f64;
    let work = n.powi(k.saturating_sub(2) as i32) * n * n.log2().max(1.0);
    Ok(timed(k, Backend::Grid, work, start, value))
}

/// Fraction of the L¹ mass sitting outside the central half-box `|x_i| ≤ L/2`.
pub fn boundary_mass_fraction(f: &Signal, extent: f64) -> f64 {
    let total = pairwise_sum_by(f.len(), &|i| f.values[i].norm());
    if total == 0.0 {
        return 0.0;
    }
    let outer = pairwise_sum_by(f.len(), &|i| {
        let x = f.domain.grid_point(i);
        if x.iter().any(|c| c.abs() > extent / 2.0) {
            f.values[i].norm()
        } else {
            0.0
        }
    });
    outer / total
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhkEstimate {
    pub k: usize,
    /// Truncations H used at every averaging level.
    pub schedule: Vec<usize>,
    pub estimates: Vec<f64>,
    pub value: f64,
    /// `(e_last - e_prev) / (H_last - H_prev)`; zero for a single truncation.
    pub slope: f64,
    /// Whether the last three estimates move monotonically (diagnostic only).
    pub monotone_tail: bool,
}

/// Nested truncated averages over an orbit `f(T^n x₀)`, base case `|E_n f|`.
pub fn ghk_orbit_estimate(orbit: &Signal, k: usize, schedule: &[usize]) -> Result<GhkEstimate> {
    let len = interval_len(orbit)?;
    check_k(k, 1)?;
    if schedule.is_empty() {
        return invalid("truncation schedule is empty");
    }
    let bound = len >> k.min(63);
    for w in schedule.windows(2) {
        if w[1] <= w[0] {
            return invalid("truncation schedule must be strictly increasing");
        }
    }
    if schedule[0] == 0 || *schedule.last().unwrap() > bound {
        return invalid(format!(
            "truncations must lie in [1, L/2^k] = [1, {bound}] for orbit length {len}"
        ));
    }
    fn power(g: &[Complex64], j: usize, h_max: usize) -> f64 {
        if j == 1 {
            return (pairwise_sum_c_slice(g) / g.len() as f64).norm_sqr();
        }
        let parts: Vec<f64> = (1..=h_max)
            .map(|h| {
                let d: Vec<Complex64> = (0..g.len() - h).map(|n| g[n + h] * g[n].conj()).collect();
                power(&d, j - 1, h_max)
            })
            .collect();
        pairwise_sum(&parts) / h_max as f64
    }
    let estimates: Vec<f64> = schedule
        .par_iter()
        .map(|&h| power(&orbit.values, k, h).max(0.0).powf(1.0 / 2f64.powi(k as i32)))
        .collect();
    let m = estimates.len();
    let slope = if m >= 2 {
        (estimates[m - 1] - estimates[m - 2]) / (schedule[m - 1] - schedule[m - 2]) as f64
    } else {
        0.0
    };
    let monotone_tail = if m >= 3 {
        let a = estimates[m - 2] - estimates[m - 3];
        let b = estimates[m - 1] - estimates[m - 2];
        a * b >= 0.0
    } else {
        true
    };
    Ok(GhkEstimate {
        k,
        schedule: schedule.to_vec(),
        value: estimates[m - 1],
        estimates,
        slope,
        monotone_tail,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub size: usize,
    pub backend: String,
    pub k: usize,
    pub elapsed_s: f64,
    pub work: u64,
    pub value: f64,
}

/// Times the direct and recursive backends on seeded random signals on `Z/N`.
pub fn bench_backends(sizes: &[usize], k: usize, seed: u64, tol: &Tolerances) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let mut rng = crate::rng::substream(seed, i as u64);
        let f = Signal::new(DomainSpec::cyclic(n), (0..n).map(|_| crate::rng::disc(&mut rng)).collect())?;
        let mut push = |r: NormResult| {
            rows.push(BenchRow {
                size: n,
                backend: r.backend.name().to_string(),
                k,
                elapsed_s: r.elapsed,
                work: r.work_count,
                value: r.value,
            })
        };
        if (n as f64).powi(k as i32 + 1) <= tol.work_cap {
            push(uk_direct(&f, k, tol)?);
        }
        push(uk_recursive(&f, k)?);
    }
    Ok(rows)
}
