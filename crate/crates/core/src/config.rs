use serde::{Deserialize, Serialize};

/// Every tolerance and threshold used by the library, in one place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Difference-vanishing tolerance for polynomial tables (mod 1).
    pub poly: f64,
    /// Direct backends refuse more elementary operations than this.
    pub work_cap: f64,
    /// Magnitude below which the decoder replaces a value by 1.
    pub mag_clamp: f64,
    /// Derivative residual admitting a shift into the accepted set.
    pub accept: f64,
    /// Tolerance when checking that the integrated phase reproduces the corrected cocycle.
    pub certify: f64,
    /// Level-set threshold relative to max |f| in the coset detector.
    pub level: f64,
    /// Allowed loss in |H ∩ (H+h)| / |H| for the coset detector.
    pub intersect_cap: f64,
    /// Boundary mass fraction above which grid norms are refused.
    pub boundary_mass: f64,
    /// Largest denominator the quadratic scan accepts.
    pub scan_denominator_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            poly: 1e-8,
            work_cap: 1e10,
            mag_clamp: 0.5,
            accept: 0.25,
            certify: 1e-6,
            level: 0.5,
            intersect_cap: 0.25,
            boundary_mass: 1e-6,
            scan_denominator_cap: 1 << 16,
        }
    }
}

impl Tolerances {
    /// Named profiles selectable from the command line.
    pub fn profile(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default()),
            "strict" => Some(Tolerances {
                poly: 1e-10,
                accept: 0.1,
                certify: 1e-8,
                ..Self::default()
            }),
            "loose" => Some(Tolerances {
                poly: 1e-6,
                accept: 0.5,
                certify: 1e-4,
                ..Self::default()
            }),
            _ => None,
        }
    }

    /// Gate on the deviation of a cocycle defect from its mean at decoder level `k`.
    pub fn cocycle_gate(&self, k: usize) -> f64 {
        2f64.powf(-(k as f64) - 0.5)
    }
}
