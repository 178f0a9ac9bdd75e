//! Small numeric helpers shared across modules.

use num_complex::Complex64;
use std::f64::consts::TAU;

const LEAF: usize = 16;

/// Pairwise (tree) summation with a fixed split, so the result does not depend on scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_c(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

/// Pairwise sum of `f(i)` for `i in 0..n` without materialising a vector.
pub fn pairwise_sum_by(n: usize, f: &impl Fn(usize) -> f64) -> f64 {
    fn rec(lo: usize, hi: usize, f: &impl Fn(usize) -> f64) -> f64 {
        if hi - lo <= LEAF {
            return (lo..hi).map(f).sum();
        }
        let mid = lo + (hi - lo) / 2;
        rec(lo, mid, f) + rec(mid, hi, f)
    }
    rec(0, n, f)
}

pub fn pairwise_sum_by_c(n: usize, f: &impl Fn(usize) -> Complex64) -> Complex64 {
    fn rec(lo: usize, hi: usize, f: &impl Fn(usize) -> Complex64) -> Complex64 {
        if hi - lo <= LEAF {
            return (lo..hi).map(f).sum();
        }
        let mid = lo + (hi - lo) / 2;
        rec(lo, mid, f) + rec(mid, hi, f)
    }
    rec(0, n, f)
}

/// e(x) = exp(2πix), reducing x mod 1 first.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let r = x - x.round();
    Complex64::from_polar(1.0, TAU * r)
}

/// Representative of x mod 1 in [0, 1).
#[inline]
pub fn wrap01(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Representative of x mod 1 in (-1/2, 1/2].
#[inline]
pub fn lift_half(x: f64) -> f64 {
    let r = x - x.round();
    if r <= -0.5 {
        r + 1.0
    } else {
        r
    }
}

/// Distance from x to the nearest integer.
#[inline]
pub fn dist_z(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Phase of z in units of turns, in (-1/2, 1/2].
#[inline]
pub fn turns(z: Complex64) -> f64 {
    lift_half(z.arg() / TAU)
}

/// (m · c) mod 1 for a possibly huge integer m, keeping absolute accuracy near 1e-15.
pub fn frac_mul(m: i128, c: f64) -> f64 {
    const BITS: i32 = 26;
    let scale = (1i64 << BITS) as f64;
    let c = c - c.floor();
    let hi = (c * scale).floor();
    let lo = c - hi / scale;
    let modulus = 1i128 << BITS;
    let hi_part = ((hi as i128 % modulus) * m.rem_euclid(modulus)).rem_euclid(modulus) as f64 / scale;
    let lo_part = lo * (m as f64);
    wrap01(hi_part + (lo_part - lo_part.floor()))
}

/// Binomial coefficient binom(t, i) for integer t (negative allowed) as an exact integer.
pub fn binom_i128(t: i128, i: usize) -> i128 {
    let mut num: i128 = 1;
    for j in 0..i as i128 {
        num = num * (t - j) / (j + 1);
    }
    num
}

/// Circular mean of values in R/Z, returned in (-1/2, 1/2], with the max deviation from it.
pub fn circular_mean(values: &[f64]) -> (f64, f64) {
    let s = pairwise_sum_by_c(values.len(), &|i| e(values[i]));
    let m = turns(s);
    let dev = values.iter().map(|v| dist_z(v - m)).fold(0.0, f64::max);
    (m, dev)
}

pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Smallest `2^a 3^b 5^c >= n`.
pub fn next_smooth(n: usize) -> usize {
    let n = n.max(1);
    let mut best = n.next_power_of_two();
    let mut p5 = 1;
    while p5 < best {
        let mut p35 = p5;
        while p35 < best {
            let mut m = p35;
            while m < n {
                m *= 2;
            }
            best = best.min(m);
            p35 *= 3;
        }
        p5 *= 5;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_sizes() {
        assert_eq!(next_smooth(1), 1);
        assert_eq!(next_smooth(7), 8);
        assert_eq!(next_smooth(11), 12);
        assert_eq!(next_smooth(131071), 131072);
        for n in 1..2000 {
            let m = next_smooth(n);
            assert!(m >= n);
            let mut r = m;
            for p in [2, 3, 5] {
                while r % p == 0 {
                    r /= p;
                }
            }
            assert_eq!(r, 1);
            assert!((n..m).all(|j| {
                let mut r = j;
                for p in [2, 3, 5] {
                    while r % p == 0 {
                        r /= p;
                    }
                }
                r != 1
            }));
        }
    }

    #[test]
    fn binom_matches_pascal() {
        for t in -6i128..10 {
            for i in 1..5 {
                assert_eq!(
                    binom_i128(t, i),
                    binom_i128(t - 1, i) + binom_i128(t - 1, i - 1)
                );
            }
        }
        assert_eq!(binom_i128(-1, 3), -1);
    }

    #[test]
    fn frac_mul_exact_rational() {
        // 1/8 is exact in binary, so the product mod 1 is exact too.
        assert_eq!(frac_mul(123_456_789_012_345, 0.125), 0.125);
        let c = 0.3819660112501051;
        let m = 1_000_003i128;
        let direct = wrap01((m as f64) * c);
        assert!(dist_z(frac_mul(m, c) - direct) < 1e-9);
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
        assert_eq!(pairwise_sum_by(xs.len(), &|i| xs[i]), pairwise_sum(&xs));
    }

    #[test]
    fn lifts() {
        assert_eq!(lift_half(0.5), 0.5);
        assert_eq!(lift_half(-0.5), 0.5);
        assert!((lift_half(0.75) + 0.25).abs() < 1e-15);
        assert_eq!(wrap01(-0.25), 0.75);
    }
}
