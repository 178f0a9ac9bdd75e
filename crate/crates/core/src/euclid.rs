//! Sharp constants on Euclidean space: `C_k`, the Young constants `A_p`, the Gaussian cube
//! form, grid checks of sharpness and of U³ invariance under the Fourier transform.

use crate::config::Tolerances;
use crate::domains::{lp_norm, DomainSpec, Signal};
use crate::engine::{critical_exponent_f64, uk_grid};
use crate::error::{invalid, precondition, Error, Result};
use crate::numeric::{e, pairwise_sum_by};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `C_k = 2^{k/2^k} / (k+1)^{(k+1)/2^{k+1}}`.
pub fn sharp_gowers_constant(k: usize) -> Result<f64> {
    if k < 1 {
        return invalid("C_k needs k >= 1");
    }
    let kf = k as f64;
    let two_k = 2f64.powi(k as i32);
    Ok((kf / two_k * std::f64::consts::LN_2 - (kf + 1.0) / (2.0 * two_k) * (kf + 1.0).ln()).exp())
}

/// `A_p = (p^{1/p} / p'^{1/p'})^{1/2}`.
pub fn beckner_constant(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return invalid(format!("A_p needs 1 < p < ∞, got {p}"));
    }
    let q = p / (p - 1.0);
    Ok((0.5 * (p.ln() / p - q.ln() / q)).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionCheck {
    pub k: usize,
    /// `(A_{2k/(k+1)}² / A_k)^{k/2^k} C_{k−1}^{1/2}`.
    pub lhs: f64,
    pub c_k: f64,
    pub diff: f64,
}

pub fn constant_recursion(k: usize) -> Result<RecursionCheck> {
    if k < 2 {
        return invalid("the recursion starts at k = 2");
    }
    let kf = k as f64;
    let a = beckner_constant(2.0 * kf / (kf + 1.0))?;
    let b = beckner_constant(kf)?;
    let lhs = (a * a / b).powf(kf / 2f64.powi(k as i32)) * sharp_gowers_constant(k - 1)?.sqrt();
    let c_k = sharp_gowers_constant(k)?;
    Ok(RecursionCheck {
        k,
        lhs,
        c_k,
        diff: (lhs - c_k).abs(),
    })
}

/// Integer matrix of `Q(x, h) = Σ_ω (x + ω·h)²` in the variables `(x, h_1, ..., h_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeFormMatrix {
    pub d: usize,
    pub entries: Vec<Vec<i64>>,
}

impl CubeFormMatrix {
    /// Sums `w wᵀ` over `w = (1, ω)`, `ω ∈ {0,1}^d`.
    pub fn new(d: usize) -> Result<Self> {
        if !(1..=12).contains(&d) {
            return invalid(format!("cube form supported for 1 <= d <= 12, got {d}"));
        }
        let mut m = vec![vec![0i64; d + 1]; d + 1];
        for omega in 0u32..(1 << d) {
            let w: Vec<i64> = std::iter::once(1)
                .chain((0..d).map(|j| (omega >> j & 1) as i64))
                .collect();
            for i in 0..=d {
                for j in 0..=d {
                    m[i][j] += w[i] * w[j];
                }
            }
        }
        Ok(CubeFormMatrix { d, entries: m })
    }
}

/// Exact `det M_d` by fraction-free (Bareiss) elimination.
pub fn cube_form_det(d: usize) -> Result<BigInt> {
    let m = CubeFormMatrix::new(d)?;
    Ok(bareiss_det(&m.entries))
}

pub fn bareiss_det(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianExact {
    pub d: usize,
    /// `det(M_d)^{-1/2^{d+1}}`.
    pub value: f64,
    /// `C_d · ‖e^{-πx²}‖_{L^{p_d}} = C_d · p_d^{-(d+1)/2^{d+1}}`.
    pub via_constant: f64,
    pub diff: f64,
}

/// `‖e^{-πx²}‖_{U^d(R)}`, from `‖f‖_{U^d}^{2^d} = det(M_d)^{-1/2}`.
pub fn gaussian_uk_exact(d: usize) -> Result<GaussianExact> {
    let det = cube_form_det(d)?;
    let log_det = det
        .to_f64()
        .ok_or_else(|| Error::Internal("determinant out of range".into()))?
        .ln();
    let pow = 2f64.powi(d as i32 + 1);
    let value = (-log_det / pow).exp();
    let p = critical_exponent_f64(d);
    let via_constant = sharp_gowers_constant(d)? * p.powf(-(d as f64 + 1.0) / pow);
    Ok(GaussianExact {
        d,
        value,
        via_constant,
        diff: (value - via_constant).abs(),
    })
}

/// `e^{-π(x−c)²/σ²} e(ξx)` on a 1-D grid.
pub fn gaussian_signal(extent: f64, points: usize, sigma: f64, center: f64, modulation: f64) -> Result<Signal> {
    let domain = DomainSpec::grid(1, extent, points);
    domain.validate()?;
    Signal::from_fn(domain.clone(), |i| {
        let x = domain.grid_point(i)[0];
        e(modulation * x) * (-std::f64::consts::PI * (x - center).powi(2) / (sigma * sigma)).exp()
    })
}

/// `‖f‖_{U^d} / ‖f‖_{L^{p_d}}` on a grid.
pub fn sharpness_ratio(f: &Signal, d: usize, tol: &Tolerances) -> Result<f64> {
    let u = uk_grid(f, d, tol)?.value;
    let l = lp_norm(f, critical_exponent_f64(d))?;
    if l == 0.0 {
        return invalid("sharpness ratio of the zero signal");
    }
    Ok(u / l)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub points: usize,
    pub ratio: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub d: usize,
    pub extent: f64,
    pub points: usize,
    pub ratio: f64,
    pub c_d: f64,
    pub error: f64,
    pub refinement: Vec<RefinementRow>,
    /// `log2(e_i / e_{i+1}) / log2(m_{i+1} / m_i)` for consecutive rows above the rounding floor.
    pub observed_orders: Vec<f64>,
    pub converging: bool,
}

/// Errors below this are treated as rounding noise in refinement studies.
pub const REFINEMENT_FLOOR: f64 = 1e-12;

fn check_padding(extent: f64, sigma: f64) -> Result<()> {
    // Standard deviation of e^{-πx²/σ²} is σ/√(2π).
    let sd = sigma / (2.0 * std::f64::consts::PI).sqrt();
    if extent < 6.0 * sd {
        return precondition(format!(
            "Gaussian needs padding of at least 6 standard deviations: extent {extent} < {:.4}",
            6.0 * sd
        ));
    }
    Ok(())
}

/// Grid ratio `U^d/L^{p_d}` of the unit Gaussian against `C_d`, with a refinement ladder.
pub fn verify_sharpness(d: usize, extent: f64, points: usize, ladder: &[usize], tol: &Tolerances) -> Result<SharpnessReport> {
    check_padding(extent, 1.0)?;
    let c_d = sharp_gowers_constant(d)?;
    let ratio = sharpness_ratio(&gaussian_signal(extent, points, 1.0, 0.0, 0.0)?, d, tol)?;
    let mut refinement = Vec::new();
    for &m in ladder {
        let r = sharpness_ratio(&gaussian_signal(extent, m, 1.0, 0.0, 0.0)?, d, tol)?;
        refinement.push(RefinementRow {
            points: m,
            ratio: r,
            error: (r - c_d).abs(),
        });
    }
    let mut observed_orders = Vec::new();
    let mut converging = true;
    for w in refinement.windows(2) {
        if w[0].error <= REFINEMENT_FLOOR {
            break;
        }
        let e1 = w[1].error.max(REFINEMENT_FLOOR);
        let order = (w[0].error / e1).log2() / (w[1].points as f64 / w[0].points as f64).log2();
        observed_orders.push(order);
        if order < 1.0 {
            converging = false;
        }
    }
    Ok(SharpnessReport {
        d,
        extent,
        points,
        ratio,
        c_d,
        error: (ratio - c_d).abs(),
        refinement,
        observed_orders,
        converging,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierInvariance {
    pub u3: f64,
    pub u3_hat: f64,
    pub diff: f64,
    /// Fraction of `|f̂|²` in the outer sixteenth of the frequency grid.
    pub edge_fraction: f64,
}

/// Grid approximation of `f̂(ξ) = ∫ f(x) e(−xξ) dx` on `ξ_k = (k − m/2)/(2L)`.
pub fn grid_fourier(f: &Signal) -> Result<Signal> {
    let (dim, extent, m) = match f.domain {
        DomainSpec::EuclideanGrid { dim, extent, points } => (dim, extent, points),
        _ => return invalid("grid_fourier needs a grid signal"),
    };
    if dim != 1 || m % 2 != 0 {
        return invalid("grid_fourier needs a 1-D grid with an even number of points");
    }
    let dx = 2.0 * extent / m as f64;
    let mut v: Vec<Complex64> = f
        .values
        .iter()
        .enumerate()
        .map(|(j, &z)| if j % 2 == 0 { z } else { -z })
        .collect();
    let mut planner = rustfft::FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut v);
    let half = m / 2;
    for (k, z) in v.iter_mut().enumerate() {
        let s = if (k + half) % 2 == 0 { dx } else { -dx };
        *z *= s;
    }
    Signal::new(DomainSpec::grid(1, m as f64 / (4.0 * extent), m), v)
}

/// Compares `‖f‖_{U³}` with `‖f̂‖_{U³}`.
pub fn fourier_invariance_check(f: &Signal, tol: &Tolerances) -> Result<FourierInvariance> {
    let fh = grid_fourier(f)?;
    let m = fh.len();
    let total = pairwise_sum_by(m, &|k| fh.values[k].norm_sqr());
    let band = m / 16;
    let edge = pairwise_sum_by(m, &|k| {
        if k < band || k >= m - band {
            fh.values[k].norm_sqr()
        } else {
            0.0
        }
    });
    let edge_fraction = if total > 0.0 { edge / total } else { 0.0 };
    if edge_fraction > 1e-6 {
        return Err(Error::Aliasing(edge_fraction));
    }
    let u3 = uk_grid(f, 3, tol)?.value;
    let u3_hat = uk_grid(&fh, 3, tol)?.value;
    Ok(FourierInvariance {
        u3,
        u3_hat,
        diff: (u3 - u3_hat).abs(),
        edge_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(sharp_gowers_constant(1).unwrap(), 1.0);
        assert!((sharp_gowers_constant(3).unwrap() - 2f64.powf(-0.125)).abs() < 1e-15);
        assert!((beckner_constant(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((beckner_constant(1.0 + 1e-9).unwrap() - 1.0).abs() < 1e-6);
        assert!(beckner_constant(1.0).is_err());
    }

    #[test]
    fn small_determinants() {
        assert_eq!(cube_form_det(1).unwrap(), BigInt::from(1));
        assert_eq!(cube_form_det(3).unwrap(), BigInt::from(64));
        assert_eq!(cube_form_det(5).unwrap(), BigInt::from(1 << 20));
        assert!(cube_form_det(13).is_err());
    }

    #[test]
    fn bareiss_with_pivoting() {
        let a = vec![vec![0, 2, 1], vec![1, 1, 0], vec![3, 0, 1]];
        // 0*(1) - 2*(1) + 1*(-3) = -5
        assert_eq!(bareiss_det(&a), BigInt::from(-5));
    }
}
