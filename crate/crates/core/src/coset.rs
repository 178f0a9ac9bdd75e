//! Coset detection for near-extremisers of `‖f‖_{U^k} ≤ ‖f‖_{L^{p_k}}`, and the end-to-end
//! recovery `f ≈ μ(H)^{-1/p_k} 1_{x0+H0} c e(P(· − x0))`.

use crate::config::Tolerances;
use crate::decoder::{decode_group, DecodeDiagnostics};
use crate::domains::{lp_norm, DomainSpec, GroupIndex, PolyPhase, Signal};
use crate::engine::{critical_exponent_f64, uk_recursive};
use crate::error::{invalid, precondition, Error, Result};
use crate::numeric::{e, pairwise_sum_by};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A coset `x0 + H0` of a finite abelian group, by element indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetDescriptor {
    pub domain: DomainSpec,
    /// Sorted indices of the subgroup `H0`.
    pub elements: Vec<usize>,
    /// Index of the offset `x0`: the smallest element of the coset.
    pub offset: usize,
}

impl CosetDescriptor {
    /// Checks identity, closure under addition and negation, and `|H0|` dividing `|G|`.
    pub fn validate(&self) -> Result<()> {
        let idx = GroupIndex::new(self.domain.moduli()?);
        let member = membership(idx.card, &self.elements);
        if !member.get(0).copied().unwrap_or(false) {
            return Err(Error::Internal("subgroup misses the identity".into()));
        }
        if idx.card % self.elements.len() != 0 {
            return Err(Error::Internal("subgroup order does not divide |G|".into()));
        }
        for &a in &self.elements {
            if !member[idx.neg(a)] {
                return Err(Error::Internal("subgroup not closed under negation".into()));
            }
            for &b in &self.elements {
                if !member[idx.add(a, b)] {
                    return Err(Error::Internal("subgroup not closed under addition".into()));
                }
            }
        }
        if self.offset >= idx.card {
            return Err(Error::Internal("offset outside the group".into()));
        }
        Ok(())
    }

    /// Sorted indices of `x0 + H0`.
    pub fn coset_elements(&self) -> Result<Vec<usize>> {
        let idx = GroupIndex::new(self.domain.moduli()?);
        let mut v: Vec<usize> = self.elements.iter().map(|&h| idx.add(self.offset, h)).collect();
        v.sort_unstable();
        Ok(v)
    }

    pub fn measure(&self) -> f64 {
        self.elements.len() as f64 / self.domain.cardinality() as f64
    }
}

fn membership(n: usize, elements: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &x in elements {
        if x < n {
            m[x] = true;
        }
    }
    m
}

fn real_nonneg(f: &Signal, name: &str) -> Result<Vec<f64>> {
    f.values
        .iter()
        .map(|z| {
            if z.im.abs() > 1e-12 || z.re < -1e-12 || !z.re.is_finite() {
                invalid(format!("{name} must be real and nonnegative"))
            } else {
                Ok(z.re.max(0.0))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovSplit {
    /// `{x : g(x) > √ε f(x)}`.
    pub set: Vec<usize>,
    /// `∫_E f / ∫ f`.
    pub mass_fraction: f64,
    pub sqrt_eps: f64,
    /// `∫_E f ≤ √ε ∫ f`.
    pub mass_certified: bool,
    /// `g ≤ √ε f` off E.
    pub pointwise_certified: bool,
}

/// Splits off the set where `g` is not dominated by `√ε f`, given `∫g ≤ ε∫f`.
pub fn markov_split(f: &Signal, g: &Signal, eps: f64) -> Result<MarkovSplit> {
    if f.domain != g.domain {
        return invalid("markov_split needs signals on the same domain");
    }
    if !(eps > 0.0) {
        return invalid("epsilon must be positive");
    }
    let fv = real_nonneg(f, "f")?;
    let gv = real_nonneg(g, "g")?;
    markov_split_values(&fv, &gv, eps)
}

fn markov_split_values(fv: &[f64], gv: &[f64], eps: f64) -> Result<MarkovSplit> {
    let fi = pairwise_sum_by(fv.len(), &|i| fv[i]);
    let gi = pairwise_sum_by(gv.len(), &|i| gv[i]);
    if gi > eps * fi * (1.0 + 1e-12) + 1e-300 {
        return precondition(format!(
            "markov_split needs ∫g ≤ ε∫f; got ∫g/∫f = {:.6e} > ε = {eps:.6e}",
            if fi > 0.0 { gi / fi } else { f64::INFINITY }
        ));
    }
    let s = eps.sqrt();
    let set: Vec<usize> = (0..fv.len()).filter(|&i| gv[i] > s * fv[i]).collect();
    let on_e: Vec<f64> = set.iter().map(|&i| fv[i]).collect();
    let ef = crate::numeric::pairwise_sum(&on_e);
    let mass_fraction = if fi > 0.0 { ef / fi } else { 0.0 };
    let member = membership(fv.len(), &set);
    let pointwise_certified = (0..fv.len()).all(|i| member[i] || gv[i] <= s * fv[i]);
    Ok(MarkovSplit {
        set,
        mass_fraction,
        sqrt_eps: s,
        mass_certified: ef <= s * fi,
        pointwise_certified,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderMatch {
    /// `1/p = Σ 1/p_i`.
    pub p: f64,
    /// `‖∏ f_i‖_p / ∏ ‖f_i‖_{p_i}`.
    pub ratio: f64,
    /// Exceptional set: union of the Markov sets of every pairwise stage.
    pub exceptional: Vec<usize>,
    /// `c_i = ‖f_i‖_{p_i}^{-p_i}`, so `c_i f_i^{p_i}` all integrate to 1.
    pub constants: Vec<f64>,
    /// Largest `|c_i f_i^{p_i} − c_j f_j^{p_j}| / max(·)` off the exceptional set.
    pub pointwise_band: f64,
    /// `Σ_i ∫_E c_i f_i^{p_i} / m`, the normalised mass on the exceptional set.
    pub exceptional_mass: f64,
}

/// Level matching for near-equality in Hölder's inequality.
///
/// Peels off one factor at a time: with `U = c_1 f_1^{p_1}` and `V` the normalised power
/// of the remaining product, the pointwise Young gap `U/q_1 + V/q_2 − U^{1/q_1} V^{1/q_2}`
/// has small integral, and a Markov split isolates where it is not small relative to `U + V`.
pub fn holder_level_match(factors: &[Signal], exponents: &[f64], eps: f64) -> Result<HolderMatch> {
    if factors.is_empty() || factors.len() != exponents.len() {
        return invalid("need one exponent per factor");
    }
    if exponents.iter().any(|&p| !(p >= 1.0) || !p.is_finite()) {
        return invalid("Hölder exponents must be finite and >= 1");
    }
    if !(0.0..1.0).contains(&eps) {
        return invalid("epsilon must lie in [0, 1)");
    }
    let domain = &factors[0].domain;
    if factors.iter().any(|f| &f.domain != domain) {
        return invalid("all factors must share a domain");
    }
    let w = domain.point_measure();
    let vals: Vec<Vec<f64>> = factors
        .iter()
        .enumerate()
        .map(|(i, f)| real_nonneg(f, &format!("factor {i}")))
        .collect::<Result<_>>()?;
    let norm = |v: &[f64], p: f64| (pairwise_sum_by(v.len(), &|i| v[i].powf(p)) * w).powf(1.0 / p);
    let norms: Vec<f64> = vals.iter().zip(exponents).map(|(v, &p)| norm(v, p)).collect();
    if norms.iter().any(|&n| n == 0.0) {
        return invalid("a factor vanishes identically, so equality is impossible");
    }
    let inv_p: f64 = exponents.iter().map(|p| 1.0 / p).sum();
    let p = 1.0 / inv_p;
    let n = vals[0].len();
    let product: Vec<f64> = (0..n).map(|x| vals.iter().map(|v| v[x]).product()).collect();
    let ratio = norm(&product, p) / norms.iter().product::<f64>();
    if ratio < 1.0 - eps - 1e-12 {
        return precondition(format!(
            "Hölder ratio {ratio:.6} is below 1 − ε = {:.6}",
            1.0 - eps
        ));
    }

    let mut exceptional = vec![false; n];
    let m = factors.len();
    for i in 0..m.saturating_sub(1) {
        // Stage i: f_i against the product of f_{i+1..}.
        let rest_inv: f64 = exponents[i + 1..].iter().map(|p| 1.0 / p).sum();
        let r = 1.0 / rest_inv;
        let s = 1.0 / (1.0 / exponents[i] + rest_inv);
        let rest: Vec<f64> = (0..n).map(|x| vals[i + 1..].iter().map(|v| v[x]).product()).collect();
        let (na, nb) = (norms[i], norm(&rest, r));
        if nb == 0.0 {
            return invalid("the remaining product vanishes identically");
        }
        let stage: Vec<f64> = (0..n).map(|x| vals[i][x] * rest[x]).collect();
        let stage_ratio = norm(&stage, s) / (na * nb);
        // Normalised powers with ∫U = ∫V = 1; weights 1/q_1 = s/p_i, 1/q_2 = s/r.
        let (a1, a2) = (s / exponents[i], s / r);
        let u: Vec<f64> = vals[i].iter().map(|v| (v / na).powf(exponents[i]) * w).collect();
        let v: Vec<f64> = rest.iter().map(|v| (v / nb).powf(r) * w).collect();
        let gap: Vec<f64> = (0..n)
            .map(|x| (a1 * u[x] + a2 * v[x] - u[x].powf(a1) * v[x].powf(a2)).max(0.0))
            .collect();
        let sum: Vec<f64> = (0..n).map(|x| u[x] + v[x]).collect();
        // ∫gap = 1 − stage_ratio^s ≤ 1 − (1 − ε)^s, against ∫(U + V) = 2.
        let eps_stage = ((1.0 - stage_ratio.min(1.0).powf(s)) / 2.0).max(1e-300);
        let split = markov_split_values(&sum, &gap, eps_stage * (1.0 + 1e-9))?;
        for x in split.set {
            exceptional[x] = true;
        }
    }
    let constants: Vec<f64> = norms.iter().zip(exponents).map(|(nm, p)| nm.powf(-p)).collect();
    let levels: Vec<Vec<f64>> = vals
        .iter()
        .zip(exponents)
        .zip(&constants)
        .map(|((v, &p), &c)| v.iter().map(|x| c * x.powf(p)).collect())
        .collect();
    let mut band = 0.0f64;
    let mut emass = 0.0;
    for x in 0..n {
        let (lo, hi) = levels.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), l| (lo.min(l[x]), hi.max(l[x])));
        if exceptional[x] {
            emass += levels.iter().map(|l| l[x]).sum::<f64>() * w;
        } else if hi > 0.0 {
            band = band.max((hi - lo) / hi);
        }
    }
    Ok(HolderMatch {
        p,
        ratio,
        exceptional: (0..n).filter(|&x| exceptional[x]).collect(),
        constants,
        pointwise_band: band,
        exceptional_mass: emass / m as f64,
    })
}

/// `K − K` if it is smaller than `3|K|/2`, verified to be a subgroup.
pub fn sumset_group_test(domain: &DomainSpec, k: &[usize]) -> Result<Vec<usize>> {
    let idx = GroupIndex::new(domain.moduli()?);
    if k.is_empty() {
        return precondition("sumset test needs a nonempty set");
    }
    if k.iter().any(|&x| x >= idx.card) {
        return invalid("set element outside the group");
    }
    let mut kk = k.to_vec();
    kk.sort_unstable();
    kk.dedup();
    let mut member = vec![false; idx.card];
    for &a in &kk {
        for &b in &kk {
            member[idx.sub(a, b)] = true;
        }
    }
    let d: Vec<usize> = (0..idx.card).filter(|&x| member[x]).collect();
    let ratio = d.len() as f64 / kk.len() as f64;
    if 2 * d.len() >= 3 * kk.len() {
        return Err(Error::SumsetRatio { ratio });
    }
    let desc = CosetDescriptor {
        domain: domain.clone(),
        elements: d.clone(),
        offset: 0,
    };
    desc.validate().map_err(|e| {
        Error::Internal(format!("K − K with ratio {ratio:.4} < 3/2 is not a subgroup: {e}"))
    })?;
    Ok(d)
}

/// Young's functional `(E_h ‖(T^h f) f̄‖_{L^{p_{k−1}}}^{2^{k−1}})^{1/2^{k−1}}`, bounded by
/// `‖f‖_{L^{p_k}}²`.
pub fn young_functional(f: &Signal, k: usize) -> Result<f64> {
    let moduli = f.domain.moduli()?;
    if k < 2 {
        return invalid("young_functional needs k >= 2");
    }
    let idx = GroupIndex::new(moduli);
    let q = critical_exponent_f64(k - 1);
    let pow = (1usize << (k - 1)) as f64;
    let n = idx.card;
    let terms: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|h| {
            let nh = idx.neg(h);
            let s = pairwise_sum_by(n, &|x| (f.values[idx.add(x, nh)] * f.values[x].conj()).norm().powf(q)) / n as f64;
            s.powf(pow / q)
        })
        .collect();
    Ok((crate::numeric::pairwise_sum(&terms) / n as f64).powf(1.0 / pow))
}

fn uk_value(f: &Signal, k: usize) -> Result<f64> {
    if k == 1 {
        Ok(f.integral().norm())
    } else {
        Ok(uk_recursive(f, k)?.value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetDetection {
    pub coset: CosetDescriptor,
    /// `‖|f| − μ(H0)^{-1/p_k} 1_{x0+H0}‖_{L^{p_k}}`.
    pub magnitude_residual: f64,
    pub uk: f64,
    pub level_set_size: usize,
    pub stable_shifts: usize,
    pub sumset_ratio: f64,
}

/// Finds the coset carrying a near-extremiser of the critical inequality.
pub fn detect_coset(f: &Signal, k: usize, eps: f64, tol: &Tolerances) -> Result<CosetDetection> {
    let moduli = f.domain.moduli()?.to_vec();
    if k < 1 {
        return invalid("k must be >= 1");
    }
    let pk = critical_exponent_f64(k);
    let lp = lp_norm(f, pk)?;
    if lp > 1.0 + 1e-9 {
        return precondition(format!("detect_coset needs ‖f‖_{{L^{pk}}} ≤ 1, got {lp:.6}"));
    }
    let u = uk_value(f, k)?;
    if u < 1.0 - eps {
        return precondition(format!(
            "detect_coset needs ‖f‖_{{U^{k}}} ≥ 1 − ε = {:.6}, got {u:.6}",
            1.0 - eps
        ));
    }
    let idx = GroupIndex::new(&moduli);
    let n = idx.card;
    let mags: Vec<f64> = f.values.iter().map(|z| z.norm()).collect();
    let top = mags.iter().cloned().fold(0.0, f64::max);
    let h: Vec<usize> = (0..n).filter(|&x| mags[x] >= tol.level * top).collect();
    let in_h = membership(n, &h);
    let need = (1.0 - tol.intersect_cap) * h.len() as f64;
    let k_set: Vec<usize> = (0..n)
        .into_par_iter()
        .filter(|&s| {
            let c = h.iter().filter(|&&x| in_h[idx.sub(x, s)]).count();
            c as f64 >= need - 1e-9
        })
        .collect();
    let d_size = {
        let mut m = vec![false; n];
        for &a in &k_set {
            for &b in &k_set {
                m[idx.sub(a, b)] = true;
            }
        }
        m.iter().filter(|&&b| b).count()
    };
    let sumset_ratio = d_size as f64 / k_set.len() as f64;
    let h0 = sumset_group_test(&f.domain, &k_set)?;

    // Coset of largest L^{p_k} mass, smallest representative on ties.
    let in_h0 = membership(n, &h0);
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if !seen[x] {
            reps.push(x);
            for &a in &h0 {
                seen[idx.add(x, a)] = true;
            }
        }
    }
    let masses: Vec<f64> = reps
        .par_iter()
        .map(|&r| {
            let v: Vec<f64> = h0.iter().map(|&a| mags[idx.add(r, a)].powf(pk)).collect();
            crate::numeric::pairwise_sum(&v)
        })
        .collect();
    let mut best = 0usize;
    for i in 1..reps.len() {
        if masses[i] > masses[best] * (1.0 + 1e-12) {
            best = i;
        }
    }
    let x0 = reps[best];
    let coset = CosetDescriptor {
        domain: f.domain.clone(),
        elements: h0,
        offset: x0,
    };
    coset.validate()?;
    let amp = coset.measure().powf(-1.0 / pk);
    let resid: Vec<f64> = (0..n)
        .map(|x| {
            let model = if in_h0[idx.sub(x, x0)] { amp } else { 0.0 };
            (mags[x] - model).abs().powf(pk)
        })
        .collect();
    let magnitude_residual = (crate::numeric::pairwise_sum(&resid) / n as f64).powf(1.0 / pk);
    Ok(CosetDetection {
        coset,
        magnitude_residual,
        uk: u,
        level_set_size: h.len(),
        stable_shifts: k_set.len(),
        sumset_ratio,
    })
}

/// Cyclic decomposition `H0 = ⊕ ⟨g_i⟩` found by backtracking over elements of large order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupBasis {
    pub generators: Vec<usize>,
    pub orders: Vec<usize>,
}

impl SubgroupBasis {
    /// Element `Σ j_i g_i` for the row-major index j of `∏ Z/orders_i`.
    pub fn element(&self, idx: &GroupIndex, mut j: usize) -> usize {
        let mut out = 0usize;
        for (&g, &o) in self.generators.iter().zip(&self.orders).rev() {
            let c = j % o;
            j /= o;
            for _ in 0..c {
                out = idx.add(out, g);
            }
        }
        out
    }

    pub fn domain(&self) -> DomainSpec {
        if self.orders.is_empty() {
            DomainSpec::cyclic(1)
        } else {
            DomainSpec::group(&self.orders)
        }
    }
}

pub fn subgroup_basis(domain: &DomainSpec, elements: &[usize]) -> Result<SubgroupBasis> {
    let idx = GroupIndex::new(domain.moduli()?);
    let target = elements.len();
    let mut cands: Vec<(usize, usize)> = elements
        .iter()
        .filter(|&&x| x != 0)
        .map(|&x| (idx.order(x), x))
        .collect();
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut nodes = 0usize;

    fn search(
        idx: &GroupIndex,
        cands: &[(usize, usize)],
        span: &mut Vec<bool>,
        size: usize,
        target: usize,
        chosen: &mut Vec<(usize, usize)>,
        nodes: &mut usize,
    ) -> bool {
        if size == target {
            return true;
        }
        *nodes += 1;
        if *nodes > 200_000 {
            return false;
        }
        for &(ord, g) in cands {
            if span[g] || target % (size * ord) != 0 {
                continue;
            }
            // ⟨g⟩ ∩ span must be trivial.
            let mut x = g;
            let mut direct = true;
            for _ in 1..ord {
                if span[x] {
                    direct = false;
                    break;
                }
                x = idx.add(x, g);
            }
            if !direct {
                continue;
            }
            let old: Vec<usize> = (0..idx.card).filter(|&y| span[y]).collect();
            let mut mult = 0usize;
            for _ in 1..ord {
                mult = idx.add(mult, g);
                for &y in &old {
                    span[idx.add(y, mult)] = true;
                }
            }
            chosen.push((ord, g));
            if search(idx, cands, span, size * ord, target, chosen, nodes) {
                return true;
            }
            chosen.pop();
            span.iter_mut().for_each(|b| *b = false);
            for &y in &old {
                span[y] = true;
            }
        }
        false
    }

    let mut span = vec![false; idx.card];
    span[0] = true;
    let mut chosen = Vec::new();
    if !search(&idx, &cands, &mut span, 1, target, &mut chosen, &mut nodes) {
        return Err(Error::Internal("no cyclic decomposition found for the subgroup".into()));
    }
    Ok(SubgroupBasis {
        generators: chosen.iter().map(|c| c.1).collect(),
        orders: chosen.iter().map(|c| c.0).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetReport {
    pub coset: CosetDescriptor,
    pub basis: SubgroupBasis,
    pub magnitude_residual: f64,
    /// Phase on the normalised subgroup `∏ Z/orders_i`.
    pub phase: PolyPhase,
    pub c: Complex64,
    /// `‖f − μ(H)^{-1/p_k} 1_H c e(P(· − x0))‖_{L^{p_k}}`.
    pub total_residual: f64,
    pub detection: CosetDetection,
    pub decode: DecodeDiagnostics,
}

impl CosetReport {
    /// The model signal `μ(H)^{-1/p_k} 1_H c e(P(· − x0))` on the ambient group.
    pub fn model(&self, k: usize) -> Result<Signal> {
        let idx = GroupIndex::new(self.coset.domain.moduli()?);
        let amp = self.coset.measure().powf(-1.0 / critical_exponent_f64(k));
        let mut v = vec![Complex64::default(); idx.card];
        for (j, &p) in self.phase.table.iter().enumerate() {
            let x = idx.add(self.coset.offset, self.basis.element(&idx, j));
            v[x] = self.c * e(p) * amp;
        }
        Signal::new(self.coset.domain.clone(), v)
    }
}

/// Coset detection followed by phase decoding on the normalised subgroup.
pub fn recover_structured(f: &Signal, k: usize, eps: f64, tol: &Tolerances) -> Result<CosetReport> {
    if k == 1 {
        return precondition("degenerate case k=1 excluded: recovery needs k >= 2");
    }
    let det = detect_coset(f, k, eps, tol)?;
    let pk = critical_exponent_f64(k);
    let idx = GroupIndex::new(f.domain.moduli()?);
    let basis = subgroup_basis(&f.domain, &det.coset.elements)?;
    let sub = basis.domain();
    let scale = det.coset.measure().powf(1.0 / pk);
    let restricted = Signal::from_fn(sub.clone(), |j| {
        f.values[idx.add(det.coset.offset, basis.element(&idx, j))] * scale
    })?;
    // Rounding in the renormalisation must not trip the decoder's sup-norm check.
    let top = restricted.max_abs();
    let restricted = if top > 1.0 && top <= 1.0 + 1e-9 { restricted.scale(1.0 / top) } else { restricted };
    let dec = decode_group(&restricted, k, tol)?;
    let mut report = CosetReport {
        coset: det.coset.clone(),
        basis,
        magnitude_residual: det.magnitude_residual,
        phase: dec.phase,
        c: dec.c,
        total_residual: 0.0,
        detection: det,
        decode: dec.diagnostics,
    };
    let model = report.model(k)?;
    let diff = Signal::new(
        f.domain.clone(),
        f.values.iter().zip(&model.values).map(|(a, b)| a - b).collect(),
    )?;
    report.total_residual = lp_norm(&diff, pk)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sumset_examples() {
        let d = DomainSpec::cyclic(8);
        assert_eq!(sumset_group_test(&d, &[0, 2, 4, 6]).unwrap(), vec![0, 2, 4, 6]);
        assert_eq!(sumset_group_test(&d, &[1, 3, 5, 7]).unwrap(), vec![0, 2, 4, 6]);
        match sumset_group_test(&DomainSpec::cyclic(7), &[0, 1, 3]) {
            Err(Error::SumsetRatio { ratio }) => assert!((ratio - 7.0 / 3.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn basis_of_klein_and_mixed_groups() {
        let d = DomainSpec::group(&[2, 4]);
        let all: Vec<usize> = (0..8).collect();
        let b = subgroup_basis(&d, &all).unwrap();
        assert_eq!(b.orders.iter().product::<usize>(), 8);
        let idx = GroupIndex::new(&[2, 4]);
        let mut seen: Vec<usize> = (0..8).map(|j| b.element(&idx, j)).collect();
        seen.sort_unstable();
        assert_eq!(seen, all);
        let t = subgroup_basis(&DomainSpec::cyclic(6), &[0]).unwrap();
        assert!(t.orders.is_empty());
    }
}
