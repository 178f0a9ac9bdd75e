//! Domains, signals, shifts, multiplicative derivatives, polynomial phases and the DFT.
//!
//! Group elements use mixed-radix row-major order, so `moduli = [n0, n1]` puts element
//! `(a, b)` at index `a * n1 + b`. The dual of `∏ Z/n_i` is identified with the group
//! itself through `ξ·x = Σ ξ_i x_i / n_i`.

use crate::error::{invalid, Error, Result};
use crate::fft::FftPlan;
use crate::numeric::{dist_z, e, wrap01};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    /// `∏ Z/n_i` with normalised counting measure.
    FiniteAbelian { moduli: Vec<usize> },
    /// `[N] = {1, ..., N}` with normalised counting measure.
    Interval { n: usize },
    /// `m^dim` samples of `[-L, L)^dim`, cell volume `(2L/m)^dim`, periodic for shifts.
    EuclideanGrid { dim: usize, extent: f64, points: usize },
}

impl DomainSpec {
    pub fn cyclic(n: usize) -> Self {
        DomainSpec::FiniteAbelian { moduli: vec![n] }
    }

    pub fn group(moduli: &[usize]) -> Self {
        DomainSpec::FiniteAbelian {
            moduli: moduli.to_vec(),
        }
    }

    pub fn interval(n: usize) -> Self {
        DomainSpec::Interval { n }
    }

    pub fn grid(dim: usize, extent: f64, points: usize) -> Self {
        DomainSpec::EuclideanGrid {
            dim,
            extent,
            points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::FiniteAbelian { moduli } => {
                if moduli.is_empty() || moduli.iter().any(|&n| n == 0) {
                    return invalid("group moduli must be a nonempty list of integers >= 1");
                }
            }
            DomainSpec::Interval { n } => {
                if *n == 0 {
                    return invalid("interval length must be >= 1");
                }
            }
            DomainSpec::EuclideanGrid {
                dim,
                extent,
                points,
            } => {
                if *dim == 0 || *points < 2 || !(extent.is_finite() && *extent > 0.0) {
                    return invalid("grid needs dim >= 1, points >= 2 and a positive finite extent");
                }
            }
        }
        Ok(())
    }

    /// Axis lengths in canonical row-major order.
    pub fn shape(&self) -> Vec<usize> {
        match self {
            DomainSpec::FiniteAbelian { moduli } => moduli.clone(),
            DomainSpec::Interval { n } => vec![*n],
            DomainSpec::EuclideanGrid { dim, points, .. } => vec![*points; *dim],
        }
    }

    pub fn cardinality(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_group(&self) -> bool {
        matches!(self, DomainSpec::FiniteAbelian { .. })
    }

    /// Total measure of the domain: 1 for compact variants, `(2L)^dim` for grids.
    pub fn mass(&self) -> f64 {
        match self {
            DomainSpec::EuclideanGrid { dim, extent, .. } => (2.0 * extent).powi(*dim as i32),
            _ => 1.0,
        }
    }

    /// Measure of a single point (cell volume on grids).
    pub fn point_measure(&self) -> f64 {
        self.mass() / self.cardinality() as f64
    }

    pub fn moduli(&self) -> Result<&[usize]> {
        match self {
            DomainSpec::FiniteAbelian { moduli } => Ok(moduli),
            other => Err(Error::NotAGroup(other.describe())),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DomainSpec::FiniteAbelian { moduli } => {
                let parts: Vec<String> = moduli.iter().map(|n| format!("Z/{n}")).collect();
                parts.join(" x ")
            }
            DomainSpec::Interval { n } => format!("[{n}]"),
            DomainSpec::EuclideanGrid {
                dim,
                extent,
                points,
            } => format!("grid dim={dim} extent={extent} points={points}"),
        }
    }

    /// Coordinates of the element at canonical index `idx`. Intervals report `n` in `1..=N`.
    pub fn coords(&self, idx: usize) -> Vec<i64> {
        let shape = self.shape();
        let mut c = vec![0i64; shape.len()];
        let mut i = idx;
        for a in (0..shape.len()).rev() {
            c[a] = (i % shape[a]) as i64;
            i /= shape[a];
        }
        if let DomainSpec::Interval { .. } = self {
            c[0] += 1;
        }
        c
    }

    /// Canonical index of an element; group and grid coordinates are reduced mod the axis length.
    pub fn index_of(&self, coords: &[i64]) -> Result<usize> {
        let shape = self.shape();
        if coords.len() != shape.len() {
            return invalid(format!(
                "element has {} coordinates, domain needs {}",
                coords.len(),
                shape.len()
            ));
        }
        if let DomainSpec::Interval { n } = self {
            let v = coords[0];
            if v < 1 || v > *n as i64 {
                return invalid(format!("{v} is not in [1, {n}]"));
            }
            return Ok((v - 1) as usize);
        }
        let mut idx = 0usize;
        for (a, &n) in shape.iter().enumerate() {
            idx = idx * n + coords[a].rem_euclid(n as i64) as usize;
        }
        Ok(idx)
    }

    /// Spatial coordinates of a grid sample.
    pub fn grid_point(&self, idx: usize) -> Vec<f64> {
        match self {
            DomainSpec::EuclideanGrid {
                extent, points, ..
            } => {
                let h = 2.0 * extent / *points as f64;
                self.coords(idx)
                    .into_iter()
                    .map(|j| -extent + j as f64 * h)
                    .collect()
            }
            _ => self.coords(idx).into_iter().map(|v| v as f64).collect(),
        }
    }

    /// Permutation `p` with `(T^h f)[x] = f[p[x]]`, i.e. `p[x] = index(x - h)`.
    pub fn shift_perm(&self, h: &[i64]) -> Result<Vec<usize>> {
        if let DomainSpec::Interval { .. } = self {
            return Err(Error::IntervalShift);
        }
        let shape = self.shape();
        if h.len() != shape.len() {
            return invalid("shift has the wrong number of coordinates");
        }
        let idx = GroupIndex::new(&shape);
        let hi = self.index_of(h)?;
        let nh = idx.neg(hi);
        Ok((0..idx.card).map(|x| idx.add(x, nh)).collect())
    }
}

/// Index arithmetic on a row-major product of cyclic groups.
#[derive(Clone, Debug)]
pub struct GroupIndex {
    pub moduli: Vec<usize>,
    pub card: usize,
}

impl GroupIndex {
    pub fn new(moduli: &[usize]) -> Self {
        GroupIndex {
            moduli: moduli.to_vec(),
            card: moduli.iter().product(),
        }
    }

    pub fn add(&self, mut a: usize, mut b: usize) -> usize {
        if self.moduli.len() == 1 {
            let n = self.card;
            let s = a + b;
            return if s >= n { s - n } else { s };
        }
        let mut out = 0usize;
        let mut place = 1usize;
        for &n in self.moduli.iter().rev() {
            let s = a % n + b % n;
            out += if s >= n { s - n } else { s } * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out
    }

    pub fn neg(&self, mut a: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &n in self.moduli.iter().rev() {
            let c = a % n;
            out += ((n - c) % n) * place;
            place *= n;
            a /= n;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Indices of the standard generators of the nontrivial axes.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut place = 1usize;
        for &n in self.moduli.iter().rev() {
            if n > 1 {
                gens.push(place);
            }
            place *= n;
        }
        gens.reverse();
        gens
    }

    /// Order of the element at index `a`.
    pub fn order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// `x -> index(x + s)` for all x.
    pub fn translate_table(&self, s: usize) -> Vec<usize> {
        (0..self.card).map(|x| self.add(x, s)).collect()
    }
}

/// Complex-valued function on a domain, stored in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SignalFile", into = "SignalFile")]
pub struct Signal {
    pub domain: DomainSpec,
    pub values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SignalFile {
    domain: DomainSpec,
    values: Vec<[f64; 2]>,
}

impl TryFrom<SignalFile> for Signal {
    type Error = Error;
    fn try_from(f: SignalFile) -> Result<Self> {
        Signal::new(
            f.domain,
            f.values.into_iter().map(|[a, b]| Complex64::new(a, b)).collect(),
        )
    }
}

impl From<Signal> for SignalFile {
    fn from(s: Signal) -> Self {
        SignalFile {
            domain: s.domain,
            values: s.values.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl Signal {
    pub fn new(domain: DomainSpec, values: Vec<Complex64>) -> Result<Self> {
        domain.validate()?;
        if values.len() != domain.cardinality() {
            return invalid(format!(
                "signal has {} values but {} has {} elements",
                values.len(),
                domain.describe(),
                domain.cardinality()
            ));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return invalid("signal values must be finite");
        }
        Ok(Signal { domain, values })
    }

    pub fn from_fn(domain: DomainSpec, f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        let n = domain.cardinality();
        Signal::new(domain, (0..n).map(f).collect())
    }

    pub fn constant(domain: DomainSpec, c: Complex64) -> Result<Self> {
        Signal::from_fn(domain, |_| c)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Signal {
        Signal {
            domain: self.domain.clone(),
            values: self.values.iter().enumerate().map(|(i, &z)| f(i, z)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Signal {
        self.map(|_, z| z * c)
    }

    pub fn mul(&self, other: &Signal) -> Result<Signal> {
        same_domain(self, other)?;
        Ok(self.map(|i, z| z * other.values[i]))
    }

    /// Integral with respect to the domain measure.
    pub fn integral(&self) -> Complex64 {
        crate::numeric::pairwise_sum_c(&self.values) * self.domain.point_measure()
    }
}

fn same_domain(a: &Signal, b: &Signal) -> Result<()> {
    if a.domain != b.domain {
        return invalid(format!(
            "domain mismatch: {} vs {}",
            a.domain.describe(),
            b.domain.describe()
        ));
    }
    Ok(())
}

/// `T^h f(x) = f(x - h)`.
pub fn translate(f: &Signal, h: &[i64]) -> Result<Signal> {
    let p = f.domain.shift_perm(h)?;
    Ok(f.map(|x, _| f.values[p[x]]))
}

/// `(T^h f) · conj(f)`.
pub fn mult_derivative(f: &Signal, h: &[i64]) -> Result<Signal> {
    let p = f.domain.shift_perm(h)?;
    Ok(f.map(|x, z| f.values[p[x]] * z.conj()))
}

/// `(∫|f|^p dμ)^{1/p}`, or `max |f|` for `p = ∞`.
pub fn lp_norm(f: &Signal, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return invalid(format!("L^p exponent must be positive, got {p}"));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let s = crate::numeric::pairwise_sum_by(f.len(), &|i| f.values[i].norm().powf(p));
    Ok((s * f.domain.point_measure()).powf(1.0 / p))
}

/// `f̂(ξ) = E_x f(x) e(-ξ·x)`.
pub fn fourier(f: &Signal) -> Result<Signal> {
    let moduli = f.domain.moduli()?;
    let plan = FftPlan::new(moduli);
    let mut v = f.values.clone();
    plan.forward(&mut v);
    let inv = 1.0 / v.len() as f64;
    v.iter_mut().for_each(|z| *z *= inv);
    Signal::new(f.domain.clone(), v)
}

/// `f(x) = Σ_ξ f̂(ξ) e(ξ·x)`.
pub fn inverse_fourier(fhat: &Signal) -> Result<Signal> {
    let moduli = fhat.domain.moduli()?;
    let plan = FftPlan::new(moduli);
    let mut v = fhat.values.clone();
    plan.inverse(&mut v);
    Signal::new(fhat.domain.clone(), v)
}

/// `g(n) = f(n mod N)` on `Z/qN`.
pub fn lift_to_extension(f: &Signal, q: usize) -> Result<Signal> {
    let n = match f.domain.moduli()? {
        [n] => *n,
        _ => return invalid("lift_to_extension needs a cyclic group Z/N"),
    };
    if q == 0 {
        return invalid("extension factor q must be >= 1");
    }
    Signal::from_fn(DomainSpec::cyclic(q * n), |i| f.values[i % n])
}

/// Zero-extension of an interval signal into `Z/Ñ`, with `n ∈ [N]` placed at residue `n`.
pub fn embed_interval(f: &Signal, ntilde: usize) -> Result<Signal> {
    let n = match f.domain {
        DomainSpec::Interval { n } => n,
        _ => return invalid("embed_interval needs an interval signal"),
    };
    if ntilde <= n {
        return invalid(format!("ambient size {ntilde} must exceed N = {n}"));
    }
    let mut v = vec![Complex64::default(); ntilde];
    v[1..=n].copy_from_slice(&f.values);
    Signal::new(DomainSpec::cyclic(ntilde), v)
}

/// A polynomial map into R/Z, stored as a value table with optional binomial-basis coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyPhase {
    pub domain: DomainSpec,
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    pub table: Vec<f64>,
}

impl PolyPhase {
    pub fn zero(domain: DomainSpec) -> Self {
        let n = domain.cardinality();
        PolyPhase {
            domain,
            degree: 0,
            coeffs: None,
            table: vec![0.0; n],
        }
    }

    /// Builds from a table without checking the degree.
    pub fn from_table_unchecked(domain: DomainSpec, degree: usize, table: Vec<f64>) -> Self {
        PolyPhase {
            domain,
            degree,
            coeffs: None,
            table: table.into_iter().map(wrap01).collect(),
        }
    }

    /// Max over the domain of the distance in R/Z between two phases.
    pub fn distance_mod_constant(&self, other: &PolyPhase) -> f64 {
        let d: Vec<f64> = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| a - b)
            .collect();
        crate::numeric::circular_mean(&d).1
    }
}

/// Applies `D_g P(x) = P(x - g) - P(x)` on a group table.
fn group_difference(table: &[f64], idx: &GroupIndex, g: usize) -> Vec<f64> {
    let ng = idx.neg(g);
    (0..idx.card)
        .map(|x| table[idx.add(x, ng)] - table[x])
        .collect()
}

/// Accepts `table` as a polynomial of degree ≤ d when all (d+1)-fold differences along
/// generators vanish mod 1 within `tol`.
pub fn poly_from_table(table: &[f64], domain: &DomainSpec, d: usize, tol: f64) -> Result<PolyPhase> {
    domain.validate()?;
    if table.len() != domain.cardinality() {
        return invalid("table length does not match the domain");
    }
    let defect = match domain {
        DomainSpec::FiniteAbelian { moduli } => {
            let idx = GroupIndex::new(moduli);
            let gens = idx.generators();
            let mut worst = 0.0f64;
            // All multisets of d+1 generators, as nondecreasing index sequences.
            let mut stack: Vec<(usize, usize, Vec<f64>)> = vec![(0, 0, table.to_vec())];
            while let Some((depth, start, t)) = stack.pop() {
                if depth == d + 1 {
                    worst = t.iter().map(|&v| dist_z(v)).fold(worst, f64::max);
                    continue;
                }
                for (gi, &g) in gens.iter().enumerate().skip(start) {
                    stack.push((depth + 1, gi, group_difference(&t, &idx, g)));
                }
            }
            worst
        }
        DomainSpec::Interval { .. } => {
            let mut t = table.to_vec();
            for _ in 0..=d {
                if t.len() < 2 {
                    t.clear();
                    break;
                }
                t = t.windows(2).map(|w| w[1] - w[0]).collect();
            }
            t.iter().map(|&v| dist_z(v)).fold(0.0, f64::max)
        }
        DomainSpec::EuclideanGrid { .. } => {
            return invalid("polynomial tables are supported on groups and intervals only")
        }
    };
    if defect > tol {
        return Err(Error::NotPolynomial { degree: d, defect });
    }
    let coeffs = match domain {
        DomainSpec::FiniteAbelian { moduli } if moduli.len() == 1 => {
            Some(newton_coeffs(|t| table[t % moduli[0]], d))
        }
        DomainSpec::Interval { n } => {
            let top = d.min(n - 1);
            let fwd = newton_coeffs(|t| table[t], top);
            let mut c = vec![0.0; d + 1];
            // P(n) = Σ d_i binom(n-1, i) = Σ_j binom(n, j) Σ_{i≥j} (-1)^{i-j} d_i.
            for j in 0..=top {
                let mut s = 0.0;
                for (i, &di) in fwd.iter().enumerate().skip(j) {
                    s += if (i - j) % 2 == 0 { di } else { -di };
                }
                c[j] = wrap01(s);
            }
            Some(c)
        }
        _ => None,
    };
    Ok(PolyPhase {
        domain: domain.clone(),
        degree: d,
        coeffs,
        table: table.iter().map(|&v| wrap01(v)).collect(),
    })
}

/// Forward Newton coefficients `c_i = Δ^i P(0)`, reduced to [0, 1).
fn newton_coeffs(p: impl Fn(usize) -> f64, d: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..=d).map(&p).collect();
    let mut out = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        out.push(wrap01(row[0]));
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
    }
    out
}

/// Evaluates `Σ c_i binom(t, i)` mod 1 at an integer point.
pub fn eval_binomial(coeffs: &[f64], t: i64) -> f64 {
    let mut s = 0.0;
    for (i, &c) in coeffs.iter().enumerate() {
        s += crate::numeric::frac_mul(crate::numeric::binom_i128(t as i128, i), c);
    }
    wrap01(s)
}

/// Pointwise `c · e(P(x))`.
pub fn phase_signal(p: &PolyPhase, c: Complex64) -> Result<Signal> {
    Signal::new(p.domain.clone(), p.table.iter().map(|&v| c * e(v)).collect())
}
