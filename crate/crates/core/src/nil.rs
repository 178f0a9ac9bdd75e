//! Threshold witnesses for U³: the Heisenberg nilsequence, the `e(n²/qN)` example, the skew
//! shift, and quadratic-correlation scans over a fixed denominator.

use crate::config::Tolerances;
use crate::domains::{lp_norm, DomainSpec, Signal};
use crate::engine::uk;
use crate::error::{invalid, precondition, Error, Result};
use crate::numeric::{e, frac_mul, wrap01};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub fn golden() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeisenbergSpec {
    pub alpha1: f64,
    pub alpha2: f64,
    /// Window `F0(t) = e^{-πt²/σ²}`.
    pub sigma: f64,
    /// Series truncation radius; `None` picks the smallest radius meeting the tail bound.
    pub k_cut: Option<usize>,
    pub n: usize,
    /// Largest partial quotient allowed in the continued fractions of the alphas.
    pub cf_cap: u64,
    /// Scale `F0` to unit `L²(R)` norm.
    pub normalize: bool,
}

impl Default for HeisenbergSpec {
    fn default() -> Self {
        HeisenbergSpec {
            alpha1: golden(),
            alpha2: golden(),
            sigma: 1.0,
            k_cut: None,
            n: 65536,
            cf_cap: 10,
            normalize: true,
        }
    }
}

/// Upper bound for `Σ_{|t + k| > K} F0(t + k)` over `t ∈ [0, 1)`: two geometric tails.
pub fn gaussian_tail_bound(sigma: f64, k_cut: usize) -> f64 {
    let k = k_cut as f64;
    let s2 = sigma * sigma;
    let first = (-std::f64::consts::PI * k * k / s2).exp();
    let ratio = (-2.0 * std::f64::consts::PI * k / s2).exp();
    2.0 * first / (1.0 - ratio).max(1e-300)
}

/// Partial quotients of the continued fraction of `x ∈ (0, 1)`, stopping when the
/// remainder drops below double precision.
pub fn partial_quotients(x: f64, depth: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut r = x;
    for _ in 0..depth {
        if r < 1e-9 {
            break;
        }
        let inv = 1.0 / r;
        let a = inv.floor();
        out.push(a as u64);
        r = inv - a;
    }
    out
}

impl HeisenbergSpec {
    pub fn effective_k_cut(&self) -> usize {
        self.k_cut.unwrap_or_else(|| {
            (1..).find(|&k| gaussian_tail_bound(self.sigma, k) < 1e-10).unwrap()
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, a) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(0.0..1.0).contains(&a) {
                return invalid(format!("{name} must lie in [0, 1), got {a}"));
            }
            if a > 0.0 {
                // Twelve terms are all double precision resolves for the golden mean.
                let q = partial_quotients(a, 12);
                if let Some(&big) = q.iter().find(|&&v| v > self.cf_cap) {
                    return precondition(format!(
                        "{name} = {a} has partial quotient {big} above the cap {}",
                        self.cf_cap
                    ));
                }
            }
        }
        if !(self.sigma > 0.0) {
            return invalid("sigma must be positive");
        }
        if self.n == 0 {
            return invalid("N must be >= 1");
        }
        let tail = gaussian_tail_bound(self.sigma, self.effective_k_cut());
        if tail >= 1e-10 {
            return precondition(format!("window tail beyond K_cut is {tail:.3e} >= 1e-10"));
        }
        Ok(())
    }

    fn window(&self, t: f64) -> f64 {
        let scale = if self.normalize { (2.0 / (self.sigma * self.sigma)).sqrt().sqrt() } else { 1.0 };
        scale * (-std::f64::consts::PI * t * t / (self.sigma * self.sigma)).exp()
    }

    /// `F(x1, x2, z) = e(z) Σ_k F0(x1 + k) e(k x2)` with `|x1 + k| ≤ K_cut`.
    pub fn eval(&self, x1: f64, x2: f64, z: f64) -> Complex64 {
        let kc = self.effective_k_cut() as f64;
        let lo = (-kc - x1).ceil() as i64;
        let hi = (kc - x1).floor() as i64;
        let mut s = Complex64::default();
        for k in lo..=hi {
            s += e(wrap01(k as f64 * x2)) * self.window(x1 + k as f64);
        }
        s * e(z)
    }

    /// Orbit point `τ^n = (nα1, nα2, binom(n,2) α1 α2)` reduced to `x1, x2 ∈ [0, 1)`:
    /// returns `(t, x2, z)` with the z-coordinate adjusted by the lattice action.
    pub fn reduced_orbit_point(&self, n: i64) -> (f64, f64, f64) {
        let t = frac_mul(n as i128, self.alpha1);
        let j = ((n as f64) * self.alpha1 - t).round() as i128;
        let x2 = frac_mul(n as i128, self.alpha2);
        let nn = n as i128;
        let z = frac_mul(nn * (nn - 1) / 2, self.alpha1 * self.alpha2);
        // (x1, x2, z) = (t + j, x2, z) ~ (t, x2, z − j x2).
        let z = wrap01(z - frac_mul(j * nn, self.alpha2));
        (t, x2, z)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaCertificate {
    pub samples: usize,
    pub max_deviation: f64,
}

/// Checks `F(x1 + a, x2 + b, z + a x2) = F(x1, x2, z)` on orbit points for a few (a, b).
pub fn gamma_certificate(spec: &HeisenbergSpec, samples: usize) -> GammaCertificate {
    let n = spec.n.max(1) as i64;
    let step = (n / samples.max(1) as i64).max(1);
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..samples as i64 {
        let m = 1 + (i * step) % n;
        let (t, x2, z) = spec.reduced_orbit_point(m);
        let base = spec.eval(t, x2, z);
        for (a, b) in [(1i64, 0i64), (-1, 0), (0, 1), (2, -1), (-3, 2)] {
            let (af, bf) = (a as f64, b as f64);
            let moved = spec.eval(t + af, x2 + bf, z + af * x2);
            worst = worst.max((moved - base).norm());
        }
        count += 1;
    }
    GammaCertificate {
        samples: count,
        max_deviation: worst,
    }
}

/// `f(n) = F(τ^n)` for `n ∈ [N]`.
pub fn heisenberg_nilsequence(spec: &HeisenbergSpec) -> Result<Signal> {
    spec.validate()?;
    let cert = gamma_certificate(spec, 100);
    if cert.max_deviation > 1e-12 {
        return Err(Error::Internal(format!(
            "lattice invariance certificate failed: deviation {:.3e}",
            cert.max_deviation
        )));
    }
    let values: Vec<Complex64> = (1..=spec.n as i64)
        .into_par_iter()
        .map(|n| {
            let (t, x2, z) = spec.reduced_orbit_point(n);
            spec.eval(t, x2, z)
        })
        .collect();
    Signal::new(DomainSpec::interval(spec.n), values)
}

/// `f(n) = e(n²/(qN))` on `Z/N` for the representatives `0..N`.
pub fn quadratic_example(n: usize, q: usize) -> Result<Signal> {
    if n == 0 || q == 0 {
        return invalid("quadratic_example needs N, q >= 1");
    }
    let m = (q * n) as u128;
    Signal::from_fn(DomainSpec::cyclic(n), |i| {
        let r = (i as u128 * i as u128) % m;
        e(r as f64 / m as f64)
    })
}

/// `e(y_n)` along the skew shift `T(x, y) = (x + α, y + x)`, for `n ∈ [N]`.
pub fn skew_shift_orbit(alpha: f64, x0: f64, y0: f64, n: usize) -> Result<Signal> {
    if !(0.0..1.0).contains(&alpha) {
        return invalid(format!("alpha must lie in [0, 1), got {alpha}"));
    }
    if n == 0 {
        return invalid("N must be >= 1");
    }
    Signal::from_fn(DomainSpec::interval(n), |i| {
        let m = (i + 1) as i128;
        e(wrap01(y0 + frac_mul(m, x0) + frac_mul(m * (m - 1) / 2, alpha)))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// Bin edges are `i / bins` for `i = 0..=bins`; the last bin is closed.
    pub bins: usize,
    pub counts: Vec<u64>,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub denominator: usize,
    pub a: usize,
    pub b: usize,
    /// `max |⟨f, e((an² + bn)/D)⟩|`.
    pub max_corr: f64,
    pub l2_norm: f64,
    pub histogram: Histogram,
}

const HIST_BINS: usize = 20;

/// Scans `|⟨f, e((an² + bn)/D)⟩|` over all `a, b < D`.
///
/// For each a, the b-scan is the length-D DFT of `f(n) e(−an²/D)` folded modulo D.
pub fn quad_correlation_scan(f: &Signal, d: usize, tol: &Tolerances) -> Result<ScanResult> {
    let (offset, len) = match f.domain {
        DomainSpec::FiniteAbelian { ref moduli } if moduli.len() == 1 => (0u64, moduli[0]),
        DomainSpec::Interval { n } => (1u64, n),
        _ => return invalid("quadratic scan needs a cyclic group or an interval"),
    };
    if d == 0 {
        return invalid("denominator must be >= 1");
    }
    if d > tol.scan_denominator_cap {
        return precondition(format!(
            "denominator {d} exceeds the cap {}; scan a coarser denominator",
            tol.scan_denominator_cap
        ));
    }
    let roots: Vec<Complex64> = (0..d).map(|r| e(-(r as f64) / d as f64)).collect();
    let sq: Vec<u64> = (0..len as u64)
        .map(|i| {
            let n = (i + offset) % d as u64;
            n * n % d as u64
        })
        .collect();
    let res: Vec<u64> = (0..len as u64).map(|i| (i + offset) % d as u64).collect();
    let plan = rustfft::FftPlanner::new().plan_fft_forward(d);
    let inv = 1.0 / len as f64;
    let per_a = |a: usize| -> (f64, usize, Vec<u64>, f64) {
        let mut buf = vec![Complex64::default(); d];
        for i in 0..len {
            let r = (a as u64 * sq[i]) % d as u64;
            buf[res[i] as usize] += f.values[i] * roots[r as usize];
        }
        plan.process(&mut buf);
        let mut best = -1.0f64;
        let mut arg = 0;
        let mut counts = vec![0u64; HIST_BINS];
        let mut sum = 0.0;
        for (b, z) in buf.iter().enumerate() {
            let v = z.norm() * inv;
            if v > best + 1e-12 {
                best = v;
                arg = b;
            }
            let bin = ((v * HIST_BINS as f64) as usize).min(HIST_BINS - 1);
            counts[bin] += 1;
            sum += v;
        }
        (best, arg, counts, sum)
    };
    let rows: Vec<(f64, usize, Vec<u64>, f64)> = (0..d).into_par_iter().map(per_a).collect();
    let mut best = (-1.0f64, 0usize, 0usize);
    let mut counts = vec![0u64; HIST_BINS];
    let mut sums = Vec::with_capacity(d);
    for (a, (v, b, c, s)) in rows.into_iter().enumerate() {
        if v > best.0 + 1e-12 {
            best = (v, a, b);
        }
        for (t, x) in counts.iter_mut().zip(c) {
            *t += x;
        }
        sums.push(s);
    }
    let mean = crate::numeric::pairwise_sum(&sums) / (d * d) as f64;
    Ok(ScanResult {
        denominator: d,
        a: best.1,
        b: best.2,
        max_corr: best.0,
        l2_norm: lp_norm(f, 2.0)?,
        histogram: Histogram {
            bins: HIST_BINS,
            counts,
            mean,
        },
    })
}

/// `‖f‖_{U³} / ‖f‖_{L²}` on any compact domain.
pub fn u3_ratio(f: &Signal, tol: &Tolerances) -> Result<f64> {
    let l2 = lp_norm(f, 2.0)?;
    if l2 == 0.0 {
        return invalid("U³/L² ratio of the zero signal");
    }
    Ok(uk(f, 3, tol)?.value / l2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// Planted `e((a n² + b n)/N)` on `Z/N` with seeded a, b.
    Planted { sizes: Vec<usize> },
    Heisenberg {
        sizes: Vec<usize>,
        #[serde(default = "one")]
        sigma: f64,
        #[serde(default)]
        denominator: Option<usize>,
        /// Overrides the second frequency; the default pair is golden/golden.
        #[serde(default)]
        alpha2: Option<f64>,
    },
    Random {
        sizes: Vec<usize>,
        #[serde(default = "one_usize")]
        count: usize,
    },
    Quadext {
        sizes: Vec<usize>,
        #[serde(default = "three")]
        q: usize,
    },
}

fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn three() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default)]
    pub seed: u64,
    pub constructions: Vec<Construction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub construction: String,
    pub params: String,
    pub u3_ratio: f64,
    pub max_corr: f64,
    pub argmax_a: usize,
    pub argmax_b: usize,
}

fn row(name: &str, params: String, f: &Signal, d: usize, tol: &Tolerances) -> Result<SweepRow> {
    let s = quad_correlation_scan(f, d, tol)?;
    Ok(SweepRow {
        construction: name.to_string(),
        params,
        u3_ratio: u3_ratio(f, tol)?,
        max_corr: s.max_corr,
        argmax_a: s.a,
        argmax_b: s.b,
    })
}

/// One row per instance, in configuration order.
pub fn threshold_sweep(config: &SweepConfig, tol: &Tolerances) -> Result<Vec<SweepRow>> {
    use rand::Rng;
    let mut rows = Vec::new();
    for (ci, c) in config.constructions.iter().enumerate() {
        match c {
            Construction::Planted { sizes } => {
                for (si, &n) in sizes.iter().enumerate() {
                    let mut r = crate::rng::substream(config.seed, (ci * 1000 + si) as u64);
                    let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
                    let f = Signal::from_fn(DomainSpec::cyclic(n), |x| {
                        let x = x as u64;
                        e(((a as u64 * x * x + b as u64 * x) % n as u64) as f64 / n as f64)
                    })?;
                    rows.push(row("planted", format!("n={n};a={a};b={b}"), &f, n, tol)?);
                }
            }
            Construction::Heisenberg {
                sizes,
                sigma,
                denominator,
                alpha2,
            } => {
                for &n in sizes {
                    let base = HeisenbergSpec::default();
                    let spec = HeisenbergSpec {
                        n,
                        sigma: *sigma,
                        alpha2: alpha2.unwrap_or(base.alpha2),
                        ..base
                    };
                    let f = heisenberg_nilsequence(&spec)?;
                    let d = denominator.unwrap_or(n).min(tol.scan_denominator_cap);
                    let a2 = spec.alpha2;
                    rows.push(row("heisenberg", format!("n={n};sigma={sigma};alpha2={a2};d={d}"), &f, d, tol)?);
                }
            }
            Construction::Random { sizes, count } => {
                for (si, &n) in sizes.iter().enumerate() {
                    for j in 0..*count {
                        let mut r = crate::rng::substream(config.seed, (ci * 1000 + si) as u64 * 4096 + j as u64);
                        let f = Signal::new(DomainSpec::cyclic(n), (0..n).map(|_| crate::rng::unit(&mut r)).collect())?;
                        rows.push(row("random", format!("n={n};draw={j}"), &f, n, tol)?);
                    }
                }
            }
            Construction::Quadext { sizes, q } => {
                for &n in sizes {
                    let f = quadratic_example(n, *q)?;
                    rows.push(row("quadext", format!("n={n};q={q}"), &f, n, tol)?);
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_partial_quotients_are_ones() {
        assert!(partial_quotients(golden(), 12).iter().all(|&q| q == 1));
        let bad = HeisenbergSpec {
            alpha1: 0.001,
            ..HeisenbergSpec::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn scan_finds_planted_quadratic() {
        let f = Signal::from_fn(DomainSpec::cyclic(64), |n| {
            e(((3 * n * n + 5 * n) % 64) as f64 / 64.0)
        })
        .unwrap();
        let s = quad_correlation_scan(&f, 64, &Tolerances::default()).unwrap();
        assert_eq!((s.a, s.b), (3, 5));
        assert!((s.max_corr - 1.0).abs() < 1e-12);
    }
}
