use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse transform pair of one length; the inverse is normalized.
#[derive(Clone)]
pub(crate) struct FftPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    len: usize,
}

impl FftPair {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Self { forward, inverse, scratch: vec![Complex64::default(); scratch_len], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.forward.process_with_scratch(data, &mut self.scratch);
    }

    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.inverse.process_with_scratch(data, &mut self.scratch);
        let scale = 1.0 / self.len as f64;
        data.iter_mut().for_each(|x| *x *= scale);
    }
}

/// FFT bin frequencies in Hz, in transform order (DC, positive, negative).
pub(crate) fn frequencies(len: usize, sample_rate: f64) -> Vec<f64> {
    (0..len)
        .map(|k| {
            let signed = if k < len.div_ceil(2) { k as f64 } else { k as f64 - len as f64 };
            signed * sample_rate / len as f64
        })
        .collect()
}
