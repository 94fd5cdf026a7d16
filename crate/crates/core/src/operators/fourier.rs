//! Cached 2-D FFT plans with unitary normalization (1/sqrt(N) in both
//! directions), so the adjoint of frequency sampling is the inverse
//! transform of the zero-filled spectrum.

pub use rustfft::num_complex::Complex as NumComplex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub type Complex64 = NumComplex<f64>;

pub struct Fft2 {
    height: usize,
    width: usize,
    row_forward: Arc<dyn Fft<f64>>,
    row_inverse: Arc<dyn Fft<f64>>,
    col_forward: Arc<dyn Fft<f64>>,
    col_inverse: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(height: usize, width: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            height,
            width,
            row_forward: planner.plan_fft_forward(width),
            row_inverse: planner.plan_fft_inverse(width),
            col_forward: planner.plan_fft_forward(height),
            col_inverse: planner.plan_fft_inverse(height),
        }
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let (row_plan, col_plan) = if inverse {
            (&self.row_inverse, &self.col_inverse)
        } else {
            (&self.row_forward, &self.col_forward)
        };
        for r in 0..self.height {
            row_plan.process(&mut buf[r * self.width..(r + 1) * self.width]);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); self.height];
        for c in 0..self.width {
            for r in 0..self.height {
                col[r] = buf[r * self.width + c];
            }
            col_plan.process(&mut col);
            for r in 0..self.height {
                buf[r * self.width + c] = col[r];
            }
        }
        let scale = 1.0 / ((self.height * self.width) as f64).sqrt();
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    /// Unitary 2-D DFT of a real image given in row-major order.
    pub fn forward_unitary(&self, image: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(image.len(), self.height * self.width);
        let mut buf: Vec<Complex64> = image.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut buf, false);
        buf
    }

    /// Real part of the unitary inverse 2-D DFT of a spectrum.
    pub fn inverse_unitary_real(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        debug_assert_eq!(spectrum.len(), self.height * self.width);
        self.transform(&mut spectrum, true);
        spectrum.into_iter().map(|v| v.re).collect()
    }
}
