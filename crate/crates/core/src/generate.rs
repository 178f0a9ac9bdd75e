//! Seeded signal generators.

use crate::domains::{DomainSpec, GroupIndex, Signal};
use crate::engine::critical_exponent_f64;
use crate::error::{invalid, Error, Result};
use crate::numeric::{e, wrap01};
use crate::rng::{self, Stream};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Constant,
    Character,
    PolyPhase,
    CosetPhase,
    GaussianGrid,
    Random,
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "constant" => Kind::Constant,
            "character" => Kind::Character,
            "poly-phase" => Kind::PolyPhase,
            "coset-phase" => Kind::CosetPhase,
            "gaussian-grid" => Kind::GaussianGrid,
            "random" => Kind::Random,
            _ => {
                return invalid(format!(
                    "unknown signal kind '{s}' (expected constant, character, poly-phase, coset-phase, gaussian-grid, random)"
                ))
            }
        })
    }
}

/// Generator parameters; every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    pub domain: DomainSpec,
    /// Polynomial degree for `poly-phase` and `coset-phase`.
    pub degree: usize,
    /// Frequency vector for `character`.
    pub frequency: Vec<i64>,
    /// Per-axis subgroup step for `coset-phase`: `H0 = {x : step_i | x_i}`.
    pub step: Vec<usize>,
    /// Coset offset for `coset-phase`.
    pub offset: Vec<i64>,
    /// Norm index fixing the `μ(H)^{-1/p_k}` normalisation of `coset-phase`.
    pub k: usize,
    /// Width of `gaussian-grid`: `exp(-π|x - center|²/σ²)`.
    pub sigma: f64,
    pub center: Vec<f64>,
    /// Modulation frequency of `gaussian-grid`.
    pub modulation: Vec<f64>,
    /// Amplitude δ of a smooth phase perturbation `exp(iδ g)`.
    pub phase_noise: f64,
    /// Relative magnitude noise: |f| is multiplied by `1 - ρ u`, u uniform in [0, 1).
    pub magnitude_noise: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            domain: DomainSpec::cyclic(16),
            degree: 2,
            frequency: vec![],
            step: vec![],
            offset: vec![],
            k: 3,
            sigma: 1.0,
            center: vec![],
            modulation: vec![],
            phase_noise: 0.0,
            magnitude_noise: 0.0,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Random polynomial table of degree ≤ d on `∏ Z/n_i` with `P(0) = 0`.
///
/// Sums monomials `(a/g) ∏ x_i^{α_i}` with `g` the gcd of the moduli involved, which are
/// well defined on the group.
pub fn random_group_poly(moduli: &[usize], d: usize, rng: &mut Stream) -> Vec<f64> {
    let idx = GroupIndex::new(moduli);
    let r = moduli.len();
    let mut monomials: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..r {
        monomials = monomials
            .into_iter()
            .flat_map(|m| {
                let used: u32 = m.iter().sum();
                (0..=(d as u32 - used.min(d as u32))).map(move |a| {
                    let mut v = m.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    let terms: Vec<(Vec<u32>, u64, u64)> = monomials
        .into_iter()
        .filter(|m| m.iter().any(|&a| a > 0))
        .map(|m| {
            let g = m
                .iter()
                .zip(moduli)
                .filter(|(&a, _)| a > 0)
                .fold(0usize, |g, (_, &n)| gcd(g, n)) as u64;
            let a = rng.gen_range(0..g.max(1));
            (m, a, g.max(1))
        })
        .collect();
    let mut coords = vec![0u64; r];
    (0..idx.card)
        .map(|x| {
            let mut rem = x;
            for i in (0..r).rev() {
                coords[i] = (rem % moduli[i]) as u64;
                rem /= moduli[i];
            }
            let mut s = 0.0;
            for (m, a, g) in &terms {
                let mut v = *a % g;
                for (i, &p) in m.iter().enumerate() {
                    for _ in 0..p {
                        v = (v as u128 * coords[i] as u128 % *g as u128) as u64;
                    }
                }
                s += v as f64 / *g as f64;
            }
            wrap01(s)
        })
        .collect()
}

/// Real smooth perturbation with `max |g| = 1`, built from a few low Fourier modes.
pub fn smooth_field(domain: &DomainSpec, rng: &mut Stream) -> Vec<f64> {
    let n = domain.cardinality();
    let shape = domain.shape();
    let modes: Vec<(Vec<f64>, f64, f64)> = (0..4)
        .map(|_| {
            let freq: Vec<f64> = shape.iter().map(|_| rng.gen_range(-2i64..=2) as f64).collect();
            (freq, rng::normal(rng), rng.gen::<f64>())
        })
        .collect();
    let mut g: Vec<f64> = (0..n)
        .map(|x| {
            let c = domain.coords(x);
            modes
                .iter()
                .map(|(freq, amp, ph)| {
                    let t: f64 = freq
                        .iter()
                        .zip(&c)
                        .zip(&shape)
                        .map(|((f, &ci), &m)| f * ci as f64 / m as f64)
                        .sum();
                    amp * (std::f64::consts::TAU * (t + ph)).cos()
                })
                .sum()
        })
        .collect();
    let m = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m > 0.0 {
        g.iter_mut().for_each(|v| *v /= m);
    }
    g
}

fn apply_noise(values: &mut [Complex64], p: &GenParams, seed: u64) {
    if p.phase_noise != 0.0 {
        let g = smooth_field(&p.domain, &mut rng::substream(seed, 1));
        for (v, gi) in values.iter_mut().zip(g) {
            *v *= Complex64::from_polar(1.0, p.phase_noise * gi);
        }
    }
    if p.magnitude_noise != 0.0 {
        let mut r = rng::substream(seed, 2);
        for v in values.iter_mut() {
            *v *= 1.0 - p.magnitude_noise * r.gen::<f64>();
        }
    }
}

/// Deterministic signal of the given kind from `seed`.
pub fn generate(kind: Kind, p: &GenParams, seed: u64) -> Result<Signal> {
    p.domain.validate()?;
    let n = p.domain.cardinality();
    let mut r0 = rng::substream(seed, 0);
    let mut values: Vec<Complex64> = match kind {
        Kind::Constant => vec![Complex64::new(1.0, 0.0); n],
        Kind::Random => (0..n).map(|_| rng::unit(&mut r0)).collect(),
        Kind::Character => {
            let moduli = p.domain.moduli()?;
            let freq = if p.frequency.is_empty() {
                let mut f = vec![0i64; moduli.len()];
                f[0] = 1;
                f
            } else if p.frequency.len() == moduli.len() {
                p.frequency.clone()
            } else {
                return invalid("character frequency must have one entry per axis");
            };
            (0..n)
                .map(|x| {
                    let c = p.domain.coords(x);
                    e(c.iter()
                        .zip(&freq)
                        .zip(moduli)
                        .map(|((&a, &b), &m)| (a * b).rem_euclid(m as i64) as f64 / m as f64)
                        .sum())
                })
                .collect()
        }
        Kind::PolyPhase => match &p.domain {
            DomainSpec::FiniteAbelian { moduli } => random_group_poly(moduli, p.degree, &mut r0)
                .into_iter()
                .map(e)
                .collect(),
            DomainSpec::Interval { .. } => {
                let a: Vec<f64> = (0..=p.degree).map(|_| r0.gen::<f64>()).collect();
                (0..n)
                    .map(|i| {
                        let t = (i + 1) as f64;
                        let mut s = 0.0;
                        let mut tp = 1.0;
                        for &ai in &a[1..] {
                            tp *= t;
                            s += wrap01(ai * tp);
                        }
                        e(s)
                    })
                    .collect()
            }
            DomainSpec::EuclideanGrid { .. } => {
                return invalid("poly-phase needs a group or interval domain")
            }
        },
        Kind::CosetPhase => return coset_phase(p, seed),
        Kind::GaussianGrid => {
            let dim = match p.domain {
                DomainSpec::EuclideanGrid { dim, .. } => dim,
                _ => return invalid("gaussian-grid needs a Euclidean grid domain"),
            };
            if p.sigma <= 0.0 {
                return invalid("sigma must be positive");
            }
            let center = pad(&p.center, dim);
            let modulation = pad(&p.modulation, dim);
            (0..n)
                .map(|i| {
                    let x = p.domain.grid_point(i);
                    let r2: f64 = x.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum();
                    let ph: f64 = x.iter().zip(&modulation).map(|(a, b)| a * b).sum();
                    e(ph) * (-std::f64::consts::PI * r2 / (p.sigma * p.sigma)).exp()
                })
                .collect()
        }
    };
    apply_noise(&mut values, p, seed);
    Signal::new(p.domain.clone(), values)
}

fn pad(v: &[f64], dim: usize) -> Vec<f64> {
    let mut out = v.to_vec();
    out.resize(dim, 0.0);
    out
}

/// `μ(H)^{-1/p_k} 1_{x0+H0}(x) e(P(x - x0))` with a random degree-d phase P on `H0`.
fn coset_phase(p: &GenParams, seed: u64) -> Result<Signal> {
    let moduli = p.domain.moduli()?.to_vec();
    let r = moduli.len();
    let step: Vec<usize> = if p.step.is_empty() {
        vec![1; r]
    } else if p.step.len() == r {
        p.step.clone()
    } else {
        return invalid("coset step must have one entry per axis");
    };
    for (&s, &m) in step.iter().zip(&moduli) {
        if s == 0 || m % s != 0 {
            return invalid(format!("step {s} does not divide modulus {m}"));
        }
    }
    let offset: Vec<i64> = if p.offset.is_empty() { vec![0; r] } else { p.offset.clone() };
    if offset.len() != r {
        return invalid("coset offset must have one entry per axis");
    }
    if p.k < 1 {
        return invalid("k must be >= 1");
    }
    let sub: Vec<usize> = moduli.iter().zip(&step).map(|(m, s)| m / s).collect();
    let sub_idx = GroupIndex::new(&sub);
    let phase = random_group_poly(&sub, p.degree, &mut rng::substream(seed, 0));
    let mu = sub_idx.card as f64 / p.domain.cardinality() as f64;
    let amp = mu.powf(-1.0 / critical_exponent_f64(p.k));
    let n = p.domain.cardinality();
    let mut values = vec![Complex64::default(); n];
    for (x, v) in values.iter_mut().enumerate() {
        let c = p.domain.coords(x);
        let mut j = 0usize;
        let mut inside = true;
        for i in 0..r {
            let d = (c[i] - offset[i]).rem_euclid(moduli[i] as i64) as usize;
            if d % step[i] != 0 {
                inside = false;
                break;
            }
            j = j * sub[i] + d / step[i];
        }
        if inside {
            *v = e(phase[j]) * amp;
        }
    }
    apply_noise(&mut values, p, seed);
    Signal::new(p.domain.clone(), values)
}
