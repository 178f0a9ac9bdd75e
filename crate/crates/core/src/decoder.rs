//! Polynomial-phase recovery for near-extremal signals.
//!
//! The group decoder works by induction on k: decode every multiplicative derivative at
//! one degree lower, splice the accepted derivatives into a family `Q_h` via `h = a + b`,
//! remove the constant cocycle defect by averaging, then integrate `φ(x) = Q̃_{-x}(0)`.
//! The interval decoder follows the same plan with windowed derivatives and a coefficient
//! cascade in place of the exact averaging.

use crate::config::Tolerances;
use crate::domains::{eval_binomial, poly_from_table, DomainSpec, GroupIndex, PolyPhase, Signal};
use crate::error::{invalid, precondition, Error, Result};
use crate::fft::FftPlan;
use crate::numeric::{
    binom_i128, circular_mean, dist_z, e, frac_mul, lift_half, next_pow2, pairwise_sum,
    pairwise_sum_by, pairwise_sum_by_c, turns, wrap01,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub k: usize,
    pub accepted: usize,
    pub total: usize,
}

impl LevelStats {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.accepted as f64 / self.total as f64
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DecodeDiagnostics {
    /// Accepted derivative counts aggregated per recursion level, top level first.
    pub levels: Vec<LevelStats>,
    /// Largest deviation of a cocycle defect from constancy (groups) or from zero (intervals).
    pub max_cocycle_defect: f64,
    /// Largest averaged corrector |b(h)| applied.
    pub max_corrector: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeReport {
    pub phase: PolyPhase,
    pub c: Complex64,
    pub residual_l1: f64,
    pub diagnostics: DecodeDiagnostics,
}

impl DecodeReport {
    /// `‖f − c·e(P)‖_{L¹}` recomputed from scratch.
    pub fn recompute_residual(&self, f: &Signal) -> f64 {
        l1_residual(&f.values, &self.phase.table, self.c) * f.domain.point_measure() * f.len() as f64
    }
}

#[derive(Default)]
struct Diag {
    levels: BTreeMap<usize, (usize, usize)>,
    max_defect: f64,
    max_corrector: f64,
}

impl Diag {
    fn merge(&mut self, other: Diag) {
        for (k, (a, t)) in other.levels {
            let e = self.levels.entry(k).or_insert((0, 0));
            e.0 += a;
            e.1 += t;
        }
        self.max_defect = self.max_defect.max(other.max_defect);
        self.max_corrector = self.max_corrector.max(other.max_corrector);
    }

    fn finish(self) -> DecodeDiagnostics {
        DecodeDiagnostics {
            levels: self
                .levels
                .into_iter()
                .rev()
                .map(|(k, (accepted, total))| LevelStats { k, accepted, total })
                .collect(),
            max_cocycle_defect: self.max_defect,
            max_corrector: self.max_corrector,
        }
    }
}

/// Mean of `|f - c e(P)|` over the table.
fn l1_residual(values: &[Complex64], table: &[f64], c: Complex64) -> f64 {
    pairwise_sum_by(values.len(), &|i| (values[i] - c * e(table[i])).norm()) / values.len() as f64
}

fn unit_of(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r < 1e-300 {
        Complex64::new(1.0, 0.0)
    } else {
        z / r
    }
}

fn mean_unit(values: &[Complex64]) -> Complex64 {
    unit_of(pairwise_sum_by_c(values.len(), &|i| values[i]))
}

fn check_sup(f: &Signal) -> Result<()> {
    let m = f.max_abs();
    if m > 1.0 + 1e-9 {
        return precondition(format!("decoder needs ‖f‖_∞ ≤ 1, got {m:.6}"));
    }
    Ok(())
}

fn clamp(values: &[Complex64], tau: f64) -> Vec<Complex64> {
    values
        .iter()
        .map(|&z| {
            let r = z.norm();
            if r >= tau {
                z / r
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect()
}

/// `c = mean(f)/|mean(f)|` (1 if the mean vanishes) and `‖f − c‖_{L¹}`.
pub fn decode_base_mean(f: &Signal) -> Result<(Complex64, f64)> {
    check_sup(f)?;
    let c = mean_unit(&f.values);
    let zeros = vec![0.0; f.len()];
    Ok((c, l1_residual(&f.values, &zeros, c) * f.domain.mass()))
}

/// Linear phase at the largest Fourier coefficient (smallest index on ties).
pub fn decode_base_linear(f: &Signal) -> Result<DecodeReport> {
    let moduli = f.domain.moduli()?.to_vec();
    check_sup(f)?;
    let idx = GroupIndex::new(&moduli);
    let plan = FftPlan::new(&moduli);
    let out = linear_group(&f.values, &idx, &plan);
    let phase = poly_from_table(&out.table, &f.domain, 1, 1e-6)?;
    Ok(DecodeReport {
        phase,
        c: out.c,
        residual_l1: out.residual,
        diagnostics: DecodeDiagnostics::default(),
    })
}

struct GroupDecode {
    table: Vec<f64>,
    c: Complex64,
    residual: f64,
}

/// Corrected cocycle data from the top level of a group decode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleTable {
    pub moduli: Vec<usize>,
    /// `Q_h` tables, indexed by h then x.
    pub q: Vec<Vec<f64>>,
    /// `c_{h,h'}` in (−1/2, 1/2], row-major in (h, h').
    pub constants: Vec<f64>,
    /// Averaged corrector `b(h)`.
    pub b: Vec<f64>,
    pub max_defect: f64,
}

impl CocycleTable {
    /// `Q̃_h = Q_h + b(h)`.
    pub fn corrected(&self, h: usize) -> Vec<f64> {
        self.q[h].iter().map(|v| v + self.b[h]).collect()
    }

    /// Largest `‖Q̃_{h+h'} − T^h Q̃_{h'} − Q̃_h‖` over all pairs, in R/Z.
    pub fn corrected_defect(&self) -> f64 {
        let idx = GroupIndex::new(&self.moduli);
        let n = idx.card;
        let mut worst = 0.0f64;
        for h in 0..n {
            for h2 in 0..n {
                let s = idx.add(h, h2);
                for x in 0..n {
                    let v = self.q[s][x] + self.b[s]
                        - (self.q[h2][idx.sub(x, h)] + self.b[h2])
                        - (self.q[h][x] + self.b[h]);
                    worst = worst.max(dist_z(v));
                }
            }
        }
        worst
    }
}

fn linear_group(values: &[Complex64], idx: &GroupIndex, plan: &FftPlan) -> GroupDecode {
    let n = idx.card;
    let mut v = values.to_vec();
    plan.forward(&mut v);
    let mut best = 0usize;
    let mut best_val = -1.0f64;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > best_val * (1.0 + 1e-12) + 1e-300 {
            best = i;
            best_val = a;
        }
    }
    let xi = coords_of(best, &idx.moduli);
    let table: Vec<f64> = (0..n)
        .map(|x| {
            let cx = coords_of(x, &idx.moduli);
            wrap01(
                cx.iter()
                    .zip(&xi)
                    .zip(&idx.moduli)
                    .map(|((&a, &b), &m)| ((a * b) % m) as f64 / m as f64)
                    .sum(),
            )
        })
        .collect();
    finish_group(values, table)
}

fn coords_of(mut i: usize, moduli: &[usize]) -> Vec<usize> {
    let mut c = vec![0usize; moduli.len()];
    for a in (0..moduli.len()).rev() {
        c[a] = i % moduli[a];
        i /= moduli[a];
    }
    c
}

fn finish_group(values: &[Complex64], table: Vec<f64>) -> GroupDecode {
    let rotated: Vec<Complex64> = values.iter().zip(&table).map(|(&z, &p)| z * e(-p)).collect();
    let c = mean_unit(&rotated);
    let residual = l1_residual(values, &table, c);
    GroupDecode { table, c, residual }
}

fn decode_group_inner(
    values: &[Complex64],
    idx: &GroupIndex,
    plan: &FftPlan,
    k: usize,
    tol: &Tolerances,
    diag: &mut Diag,
    keep: Option<&mut Option<CocycleTable>>,
) -> Result<GroupDecode> {
    let n = idx.card;
    if k == 1 {
        return Ok(finish_group(values, vec![0.0; n]));
    }
    if k == 2 {
        return Ok(linear_group(values, idx, plan));
    }
    let g = clamp(values, tol.mag_clamp);

    // Derivatives one degree down.
    let sub = |h: usize| -> (Option<Vec<f64>>, Diag) {
        let nh = idx.neg(h);
        let tab = idx.translate_table(nh);
        let d: Vec<Complex64> = (0..n).map(|x| g[tab[x]] * g[x].conj()).collect();
        let mut dg = Diag::default();
        match decode_group_inner(&d, idx, plan, k - 1, tol, &mut dg, None) {
            Ok(r) if r.residual <= tol.accept => {
                let shift = turns(r.c);
                (Some(r.table.iter().map(|v| v + shift).collect()), dg)
            }
            _ => (None, dg),
        }
    };
    let results: Vec<(Option<Vec<f64>>, Diag)> = if n >= 16 && k >= 3 {
        (0..n).into_par_iter().map(sub).collect()
    } else {
        (0..n).map(sub).collect()
    };
    let mut p: Vec<Option<Vec<f64>>> = Vec::with_capacity(n);
    for (t, d) in results {
        diag.merge(d);
        p.push(t);
    }
    let accepted = p.iter().filter(|t| t.is_some()).count();
    let e = diag.levels.entry(k).or_insert((0, 0));
    e.0 += accepted;
    e.1 += n;

    // Q_h = T^a P_{h-a} + P_a with the smallest admissible a.
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    for h in 0..n {
        let a = (0..n).find(|&a| p[a].is_some() && p[idx.sub(h, a)].is_some());
        let a = match a {
            Some(a) => a,
            None => {
                return Err(Error::Uncovered {
                    h: h as i64,
                    accepted,
                    total: n,
                })
            }
        };
        let pa = p[a].as_ref().unwrap();
        let pb = p[idx.sub(h, a)].as_ref().unwrap();
        q.push((0..n).map(|x| pb[idx.sub(x, a)] + pa[x]).collect());
    }

    // Cocycle constants and the constancy gate.
    let gate = tol.cocycle_gate(k);
    let mut consts = vec![0.0; n * n];
    let mut max_dev = 0.0f64;
    let mut defect = vec![0.0; n];
    for h in 0..n {
        for h2 in 0..n {
            let s = idx.add(h, h2);
            for x in 0..n {
                defect[x] = q[s][x] - q[h2][idx.sub(x, h)] - q[h][x];
            }
            let (m, dev) = circular_mean(&defect);
            if dev > gate {
                return Err(Error::CocycleGate {
                    h: h as i64,
                    h2: h2 as i64,
                    deviation: dev,
                    gate,
                });
            }
            max_dev = max_dev.max(dev);
            consts[h * n + h2] = m;
        }
    }
    diag.max_defect = diag.max_defect.max(max_dev);

    let b: Vec<f64> = (0..n)
        .map(|h| pairwise_sum(&consts[h * n..(h + 1) * n]) / n as f64)
        .collect();
    diag.max_corrector = b.iter().fold(diag.max_corrector, |m, v| m.max(v.abs()));

    // φ(x) = Q̃_{-x}(0), then certify.
    let phi: Vec<f64> = (0..n).map(|x| {
        let h = idx.neg(x);
        wrap01(q[h][0] + b[h])
    }).collect();
    let domain = DomainSpec::group(&idx.moduli);
    match poly_from_table(&phi, &domain, k - 1, tol.certify) {
        Ok(_) => {}
        Err(Error::NotPolynomial { defect, .. }) => return Err(Error::Certification(defect)),
        Err(e) => return Err(e),
    }
    let mut cert = 0.0f64;
    for h in 0..n {
        for x in 0..n {
            let v = q[h][x] + b[h] - (phi[idx.sub(x, h)] - phi[x]);
            cert = cert.max(dist_z(v));
        }
    }
    if cert > tol.certify {
        return Err(Error::Certification(cert));
    }
    if let Some(slot) = keep {
        *slot = Some(CocycleTable {
            moduli: idx.moduli.clone(),
            q,
            constants: consts,
            b,
            max_defect: max_dev,
        });
    }
    Ok(finish_group(values, phi))
}

/// Recovers `c·e(P)` with `deg P ≤ k−1` from a near-extremal signal on a finite abelian group.
pub fn decode_group(f: &Signal, k: usize, tol: &Tolerances) -> Result<DecodeReport> {
    decode_group_detailed(f, k, tol).map(|(r, _)| r)
}

/// As [`decode_group`], also returning the top-level cocycle table when k ≥ 3.
pub fn decode_group_detailed(f: &Signal, k: usize, tol: &Tolerances) -> Result<(DecodeReport, Option<CocycleTable>)> {
    let moduli = f.domain.moduli()?.to_vec();
    check_sup(f)?;
    if k < 1 {
        return precondition("decode_group needs k >= 1");
    }
    let idx = GroupIndex::new(&moduli);
    let plan = FftPlan::new(&moduli);
    let mut diag = Diag::default();
    let mut table = None;
    let out = decode_group_inner(&f.values, &idx, &plan, k, tol, &mut diag, Some(&mut table))?;
    let phase = match poly_from_table(&out.table, &f.domain, k - 1, tol.certify) {
        Ok(p) => p,
        Err(Error::NotPolynomial { defect, .. }) => return Err(Error::Certification(defect)),
        Err(e) => return Err(e),
    };
    Ok((
        DecodeReport {
            phase,
            c: out.c,
            residual_l1: out.residual,
            diagnostics: diag.finish(),
        },
        table,
    ))
}

// ---------------------------------------------------------------------------------------
// Intervals. Polynomials over Z are coefficient vectors in the basis binom(t, i), where
// t = n − 1 is the zero-based position.

/// Smallest interval length the decoder accepts at level k.
pub fn interval_min_len(k: usize) -> usize {
    if k <= 2 {
        2
    } else {
        k << (k + 2)
    }
}

/// `T^h P(t) = P(t − h)` in the binomial basis.
fn shift_coeffs(q: &[f64], h: i64) -> Vec<f64> {
    (0..q.len())
        .map(|j| {
            let mut s = 0.0;
            for (i, &qi) in q.iter().enumerate().skip(j) {
                s += frac_mul(binom_i128(-(h as i128), i - j), qi);
            }
            wrap01(s)
        })
        .collect()
}

/// Coefficient m of `T^h q`.
fn shift_coeff(q: &[f64], h: i64, m: usize) -> f64 {
    let mut s = 0.0;
    for (i, &qi) in q.iter().enumerate().skip(m) {
        s += frac_mul(binom_i128(-(h as i128), i - m), qi);
    }
    s
}

struct IntervalDecode {
    coeffs: Vec<f64>,
    c: Complex64,
    residual: f64,
}

fn finish_interval(values: &[Complex64], coeffs: Vec<f64>) -> IntervalDecode {
    let table: Vec<f64> = (0..values.len()).map(|t| eval_binomial(&coeffs, t as i64)).collect();
    let fin = finish_group(values, table);
    IntervalDecode {
        coeffs,
        c: fin.c,
        residual: fin.residual,
    }
}

/// Best real frequency: zero-padded FFT argmax, golden-section refinement, lag-one polish.
fn linear_interval(values: &[Complex64]) -> IntervalDecode {
    let len = values.len();
    let m = next_pow2(8 * len).max(64);
    let mut buf = vec![Complex64::default(); m];
    buf[..len].copy_from_slice(values);
    let mut planner = rustfft::FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let mut best = 0usize;
    let mut best_val = -1.0f64;
    for (i, z) in buf.iter().enumerate() {
        let a = z.norm();
        if a > best_val * (1.0 + 1e-12) + 1e-300 {
            best = i;
            best_val = a;
        }
    }
    let score = |beta: f64| -> f64 {
        pairwise_sum_by_c(len, &|t| values[t] * e(-beta * t as f64)).norm()
    };
    let center = best as f64 / m as f64;
    let (mut lo, mut hi) = (center - 1.0 / m as f64, center + 1.0 / m as f64);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (score(x1), score(x2));
    for _ in 0..48 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = score(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = score(x1);
        }
    }
    let mut beta = if f1 >= f2 { x1 } else { x2 };
    let mut cur = score(beta);
    for _ in 0..2 {
        let u = pairwise_sum_by_c(len.saturating_sub(1), &|t| {
            values[t + 1] * values[t].conj() * e(-beta)
        });
        let cand = beta + turns(u);
        let s = score(cand);
        if s >= cur {
            beta = cand;
            cur = s;
        } else {
            break;
        }
    }
    finish_interval(values, vec![0.0, wrap01(beta)])
}

fn decode_interval_inner(values: &[Complex64], k: usize, tol: &Tolerances, diag: &mut Diag) -> Result<IntervalDecode> {
    let len = values.len();
    if k == 1 {
        return Ok(finish_interval(values, vec![0.0]));
    }
    if k == 2 {
        return Ok(linear_interval(values));
    }
    if len < interval_min_len(k) {
        return precondition(format!(
            "interval decoder at k = {k} needs N >= {}, got {len}",
            interval_min_len(k)
        ));
    }
    let g = clamp(values, tol.mag_clamp);
    let amax = len / 4;
    let w = (len / 8) as i64;

    // Windowed derivatives f_a(t) = g(t+a) conj g(t) on [0, len − a).
    let sub = |a: usize| -> (Option<Vec<f64>>, Diag) {
        let d: Vec<Complex64> = (0..len - a).map(|t| g[t + a] * g[t].conj()).collect();
        let mut dg = Diag::default();
        match decode_interval_inner(&d, k - 1, tol, &mut dg) {
            Ok(r) if r.residual <= tol.accept => {
                let mut c = r.coeffs;
                c.resize(k - 1, 0.0);
                c[0] = wrap01(c[0] + turns(r.c));
                (Some(c), dg)
            }
            _ => (None, dg),
        }
    };
    let results: Vec<(Option<Vec<f64>>, Diag)> = (1..=amax).into_par_iter().map(sub).collect();
    let mut p: Vec<Option<Vec<f64>>> = vec![None];
    for (t, d) in results {
        diag.merge(d);
        p.push(t);
    }
    let accepted = p.iter().filter(|t| t.is_some()).count();
    let e = diag.levels.entry(k).or_insert((0, 0));
    e.0 += accepted;
    e.1 += amax;

    // Q_h = T^a (P_{a−h} − P_a) for h ∈ [−w, w].
    let ok = |a: i64| a >= 1 && a <= amax as i64 && p[a as usize].is_some();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(2 * w as usize + 1);
    for h in -w..=w {
        if h == 0 {
            q.push(vec![0.0; k - 1]);
            continue;
        }
        let a = (1..=amax as i64).find(|&a| ok(a) && ok(a - h));
        let a = match a {
            Some(a) => a,
            None => {
                return Err(Error::Uncovered {
                    h,
                    accepted,
                    total: amax,
                })
            }
        };
        let pb = p[(a - h) as usize].as_ref().unwrap();
        let pa = p[a as usize].as_ref().unwrap();
        let diff: Vec<f64> = pb.iter().zip(pa).map(|(x, y)| x - y).collect();
        q.push(shift_coeffs(&diff, a));
    }
    let at = |q: &Vec<Vec<f64>>, h: i64| -> Vec<f64> { q[(h + w) as usize].clone() };

    // Gate: the defect polynomial must be near zero on the window.
    let gate = tol.cocycle_gate(k);
    let half = w / 2;
    let step = (w / 8).max(1);
    let mut max_def = 0.0f64;
    for h in -half..=half {
        for h2 in -half..=half {
            let s = at(&q, h + h2);
            let t2 = shift_coeffs(&at(&q, h2), h);
            let t1 = at(&q, h);
            let c: Vec<f64> = (0..k - 1).map(|i| s[i] - t2[i] - t1[i]).collect();
            let mut t = 0;
            while t <= w {
                let v = dist_z(eval_binomial(&c, t));
                if v > gate {
                    return Err(Error::CocycleGate {
                        h,
                        h2,
                        deviation: v,
                        gate,
                    });
                }
                max_def = max_def.max(v);
                t += step;
            }
        }
    }
    diag.max_defect = diag.max_defect.max(max_def);

    // Coefficient cascade: clear coefficient m of the defect, from the top down.
    let top = |q: &Vec<Vec<f64>>, h: i64, h2: i64, m: usize| -> f64 {
        let s = q[(h + h2 + w) as usize][m];
        let t2 = shift_coeff(&q[(h2 + w) as usize], h, m);
        let t1 = q[(h + w) as usize][m];
        lift_half(s - t2 - t1)
    };
    let mut range = w;
    for m in (0..k - 1).rev() {
        let r2 = range / 2;
        let avg: Vec<f64> = (-r2..=r2)
            .map(|h| {
                let vals: Vec<f64> = (-r2..=r2).map(|h2| top(&q, h, h2, m)).collect();
                pairwise_sum(&vals) / vals.len() as f64
            })
            .collect();
        for (i, h) in (-r2..=r2).enumerate() {
            let slot = &mut q[(h + w) as usize][m];
            *slot = wrap01(*slot + avg[i]);
            diag.max_corrector = diag.max_corrector.max(avg[i].abs());
        }
        range = r2;
        let mut b = vec![0.0; (2 * range + 1) as usize];
        let bi = |h: i64| (h + range) as usize;
        for h in 0..range {
            b[bi(h + 1)] = b[bi(h)] + top(&q, h, 1, m);
        }
        for h in (-range + 1..=0).rev() {
            b[bi(h - 1)] = b[bi(h)] - top(&q, h - 1, 1, m);
        }
        for h in -range..=range {
            let slot = &mut q[(h + w) as usize][m];
            *slot = wrap01(*slot - b[bi(h)]);
            diag.max_corrector = diag.max_corrector.max(b[bi(h)].abs());
        }
    }
    if range < k as i64 {
        return Err(Error::Internal(format!("cascade window {range} too small for k = {k}")));
    }

    // φ(x) = Q̃_{-x}(0); Newton coefficients from φ(0..k−1).
    let phi = |x: i64| q[(-x + w) as usize][0];
    let mut row: Vec<f64> = (0..k as i64).map(phi).collect();
    let mut coeffs = Vec::with_capacity(k);
    for _ in 0..k {
        coeffs.push(wrap01(row[0]));
        row = row.windows(2).map(|v| v[1] - v[0]).collect();
    }
    let mut cert = 0.0f64;
    for x in -range..=range {
        cert = cert.max(dist_z(eval_binomial(&coeffs, x) - phi(x)));
    }
    for h in -range..=range {
        let mut t = 0;
        while t <= w {
            let lhs = eval_binomial(&q[(h + w) as usize], t);
            let rhs = eval_binomial(&coeffs, t - h) - eval_binomial(&coeffs, t);
            cert = cert.max(dist_z(lhs - rhs));
            t += step;
        }
    }
    if cert > tol.certify {
        return Err(Error::Certification(cert));
    }
    Ok(finish_interval(values, coeffs))
}

/// Recovers `c·e(P)` with `deg P ≤ k−1` from a near-extremal signal on `[N]`.
pub fn decode_interval(f: &Signal, k: usize, tol: &Tolerances) -> Result<DecodeReport> {
    let n = match f.domain {
        DomainSpec::Interval { n } => n,
        _ => return invalid("decode_interval needs an interval signal"),
    };
    check_sup(f)?;
    if k < 1 {
        return precondition("decode_interval needs k >= 1");
    }
    if n < interval_min_len(k) {
        return precondition(format!("N = {n} is below N_min({k}) = {}", interval_min_len(k)));
    }
    let mut diag = Diag::default();
    let out = decode_interval_inner(&f.values, k, tol, &mut diag)?;
    // Rewrite coefficients from binom(n−1, i) to binom(n, i).
    let mut coeffs = vec![0.0; out.coeffs.len()];
    for (j, c) in coeffs.iter_mut().enumerate() {
        let mut s = 0.0;
        for (i, &v) in out.coeffs.iter().enumerate().skip(j) {
            s += if (i - j) % 2 == 0 { v } else { -v };
        }
        *c = wrap01(s);
    }
    let table: Vec<f64> = (0..n).map(|t| eval_binomial(&out.coeffs, t as i64)).collect();
    let phase = PolyPhase {
        domain: f.domain.clone(),
        degree: k - 1,
        coeffs: Some(coeffs),
        table,
    };
    Ok(DecodeReport {
        phase,
        c: out.c,
        residual_l1: out.residual,
        diagnostics: diag.finish(),
    })
}

// ---------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub n: usize,
    pub k: usize,
    /// Number of nonconstant polynomials scanned (mod constants).
    pub count: usize,
    pub min_distance: f64,
    pub bound: f64,
    pub minimiser: Vec<f64>,
}

/// All polynomial maps `Z/n → R/Z` of degree ≤ k with `P(0) = 0`, as value tables.
///
/// Built from the fact that P is a polynomial of degree ≤ k iff its forward difference is
/// one of degree ≤ k−1 whose values sum to 0 mod 1.
pub fn enumerate_polynomials(n: usize, k: usize) -> Result<Vec<Vec<f64>>> {
    if n == 0 || n > 12 || k > 3 {
        return Err(Error::EnumerationCap(format!(
            "separation scan supports 1 <= n <= 12 and k <= 3, got n = {n}, k = {k}"
        )));
    }
    let mut polys = vec![vec![0.0; n]];
    for _ in 0..k {
        let mut next = Vec::with_capacity(polys.len() * n);
        for q0 in &polys {
            let s: f64 = q0.iter().sum();
            for j in 0..n {
                let a = (j as f64 - s) / n as f64;
                let mut p = vec![0.0; n];
                for t in 1..n {
                    p[t] = p[t - 1] + q0[t - 1] + a;
                }
                next.push(p.into_iter().map(wrap01).collect());
            }
        }
        polys = next;
    }
    Ok(polys)
}

/// Minimum of `‖e(P) − c‖_{L²}` over nonconstant polynomials P of degree ≤ k on `Z/n`
/// and unimodular c.
pub fn separation_scan(n: usize, k: usize) -> Result<SeparationReport> {
    let polys = enumerate_polynomials(n, k)?;
    let bound = 2f64.powf(-(k as f64) + 0.5);
    let mut best = f64::INFINITY;
    let mut arg = vec![0.0; n];
    let mut count = 0;
    for p in &polys {
        if p.iter().all(|&v| dist_z(v) < 1e-9) {
            continue;
        }
        count += 1;
        let m = pairwise_sum_by_c(n, &|t| e(p[t])).norm() / n as f64;
        let d = (2.0 - 2.0 * m).max(0.0).sqrt();
        if d < best {
            best = d;
            arg = p.clone();
        }
    }
    if count > 0 && best < bound - 1e-12 {
        return Err(Error::Internal(format!(
            "separation bound violated: {best} < {bound}"
        )));
    }
    Ok(SeparationReport {
        n,
        k,
        count,
        min_distance: best,
        bound,
        minimiser: arg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::phase_signal;

    #[test]
    fn base_mean_examples() {
        let f = Signal::constant(DomainSpec::cyclic(5), Complex64::new(0.0, 1.0)).unwrap();
        let (c, r) = decode_base_mean(&f).unwrap();
        assert!((c - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(r < 1e-15);
        let chi = Signal::from_fn(DomainSpec::cyclic(8), |x| e(x as f64 / 8.0)).unwrap();
        let (_, r) = decode_base_mean(&chi).unwrap();
        assert!(r > 1.0);
    }

    #[test]
    fn base_linear_character() {
        let f = Signal::from_fn(DomainSpec::cyclic(8), |x| e(3.0 * x as f64 / 8.0)).unwrap();
        let r = decode_base_linear(&f).unwrap();
        assert!(r.residual_l1 < 1e-12);
        assert!(dist_z(r.phase.table[1] - 3.0 / 8.0) < 1e-12);
    }

    #[test]
    fn quadratic_on_z9() {
        let f = Signal::from_fn(DomainSpec::cyclic(9), |x| e((x * x) as f64 / 9.0)).unwrap();
        let (r, table) = decode_group_detailed(&f, 3, &Tolerances::default()).unwrap();
        assert!(r.residual_l1 < 1e-8, "{}", r.residual_l1);
        let want = PolyPhase::from_table_unchecked(f.domain.clone(), 2, (0..9).map(|x| (x * x) as f64 / 9.0).collect());
        assert!(r.phase.distance_mod_constant(&want) < 1e-9);
        let t = table.unwrap();
        assert!(t.max_defect < 1e-8);
        assert!(t.b.iter().all(|v| v.abs() < 1e-8));
        assert!(t.corrected_defect() < 1e-8);
    }

    #[test]
    fn random_unimodular_fails() {
        let mut rng = crate::rng::stream(3);
        let f = Signal::new(DomainSpec::cyclic(27), (0..27).map(|_| crate::rng::unit(&mut rng)).collect()).unwrap();
        match decode_group(&f, 3, &Tolerances::default()) {
            Err(_) => {}
            Ok(r) => assert!(r.residual_l1 > 1.0),
        }
    }

    #[test]
    fn interval_quadratic() {
        let (a, b) = (0.2371, 0.8123);
        let n = 256;
        let f = Signal::from_fn(DomainSpec::interval(n), |i| {
            let t = (i + 1) as f64;
            e(a * t * t + b * t)
        })
        .unwrap();
        let r = decode_interval(&f, 3, &Tolerances::default()).unwrap();
        assert!(r.residual_l1 < 1e-6, "{}", r.residual_l1);
        let p = phase_signal(&r.phase, r.c).unwrap();
        let err: f64 = p.values.iter().zip(&f.values).map(|(x, y)| (x - y).norm()).sum::<f64>() / n as f64;
        assert!(err < 1e-6);
    }

    #[test]
    fn separation_small_cases() {
        let r = separation_scan(2, 1).unwrap();
        assert!((r.min_distance - 2f64.sqrt()).abs() < 1e-12);
        let r = separation_scan(5, 1).unwrap();
        assert!((r.min_distance - 2f64.sqrt()).abs() < 1e-12);
        let r = separation_scan(8, 2).unwrap();
        assert!(r.min_distance >= 2f64.powf(-1.5));
        assert_eq!(enumerate_polynomials(6, 2).unwrap().len(), 36);
        assert!(separation_scan(13, 1).is_err());
    }
}
