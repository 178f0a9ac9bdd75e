//! Multi-dimensional DFT over a row-major product of cyclic axes.

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

/// Unnormalised forward/inverse transforms for a fixed shape. Cheap to share across threads.
#[derive(Clone)]
pub struct FftPlan {
    shape: Vec<usize>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl FftPlan {
    pub fn new(shape: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let forward = shape.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse = shape.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        FftPlan {
            shape: shape.to_vec(),
            forward,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// In place: data[ξ] <- Σ_x data[x] e(-ξ·x).
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, FftDirection::Forward);
    }

    /// In place: data[x] <- Σ_ξ data[ξ] e(ξ·x).
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, FftDirection::Inverse);
    }

    fn run(&self, data: &mut [Complex64], dir: FftDirection) {
        assert_eq!(data.len(), self.len());
        let plans = match dir {
            FftDirection::Forward => &self.forward,
            FftDirection::Inverse => &self.inverse,
        };
        let r = self.shape.len();
        let mut stride = 1usize;
        for axis in (0..r).rev() {
            let n = self.shape[axis];
            if n > 1 {
                let plan = &plans[axis];
                let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
                if stride == 1 {
                    plan.process_with_scratch(data, &mut scratch);
                } else {
                    let block = n * stride;
                    let mut line = vec![Complex64::default(); n];
                    for base in (0..data.len()).step_by(block) {
                        for s in 0..stride {
                            for (j, v) in line.iter_mut().enumerate() {
                                *v = data[base + s + j * stride];
                            }
                            plan.process_with_scratch(&mut line, &mut scratch);
                            for (j, v) in line.iter().enumerate() {
                                data[base + s + j * stride] = *v;
                            }
                        }
                    }
                }
            }
            stride *= n;
        }
    }
}
