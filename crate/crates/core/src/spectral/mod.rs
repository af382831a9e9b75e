//! Fourier-side machinery: spectral fields with discrete Sobolev norms,
//! fractional heat kernels and their transport semigroup, the oscillatory
//! integral operator, the four-part solution decomposition, and the
//! Sobolev-index bookkeeping.

mod decompose;
mod indices;
mod oscillatory;
mod semigroup;

pub use decompose::{
    compute_p, compute_q, compute_u0, compute_uflat, decompose, reconstruct, DecompositionConfig,
    DecompositionResult, QAtoms,
};
pub use indices::{index_arithmetic, optimal_alpha, optimal_index_value, theorem_r_bound, IndexReport};
pub use oscillatory::{decay_bound_check, oscillatory_g, DecayCheck};
pub use semigroup::{apply_s, kernel_k, smoothing_bound_check, SemigroupParams, SmoothingReport};

use crate::grid::{State, TorusGrid};
use crate::{argument, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// Planner cache shared by all transforms.
fn with_fft(len: usize, inverse: bool, buf: &mut [Complex64]) {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), std::sync::Arc<dyn rustfft::Fft<f64>>>>> =
        OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let fft = {
        let mut guard = plans.lock().unwrap();
        guard
            .entry((len, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    };
    fft.process(buf);
}

/// Fourier coefficients û(n) = ∫ u(x) e^{−2πi n·x} dx of a real field on the
/// torus grid, stored in FFT index order.
#[derive(Debug, Clone)]
pub struct SpectralField {
    dim: usize,
    m: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(dim: usize, m: usize) -> Self {
        let len = if dim == 1 { m } else { m * m };
        SpectralField {
            dim,
            m,
            coeffs: vec![Complex64::ZERO; len],
        }
    }

    pub fn from_state(state: &State) -> Self {
        Self::from_values(state.grid, &state.values)
    }

    pub fn from_values(grid: TorusGrid, values: &[f64]) -> Self {
        let m = grid.m();
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        match grid.dim() {
            1 => {
                with_fft(m, false, &mut buf);
                // cell centers sit at (i+0.5)dx, so the DFT picks up a
                // half-cell phase per mode
                let norm = 1.0 / m as f64;
                let mut out = vec![Complex64::ZERO; m];
                for (i, c) in buf.iter().enumerate() {
                    let n = wavevector(i, m);
                    let phase =
                        Complex64::from_polar(1.0, -std::f64::consts::PI * n as f64 / m as f64);
                    out[i] = c * norm * phase;
                }
                SpectralField {
                    dim: 1,
                    m,
                    coeffs: out,
                }
            }
            _ => {
                // rows then columns
                for r in 0..m {
                    with_fft(m, false, &mut buf[r * m..(r + 1) * m]);
                }
                let mut col = vec![Complex64::ZERO; m];
                for c in 0..m {
                    for r in 0..m {
                        col[r] = buf[r * m + c];
                    }
                    with_fft(m, false, &mut col);
                    for r in 0..m {
                        buf[r * m + c] = col[r];
                    }
                }
                let norm = 1.0 / (m * m) as f64;
                let mut out = vec![Complex64::ZERO; m * m];
                for r in 0..m {
                    let ny = wavevector(r, m);
                    for c in 0..m {
                        let nx = wavevector(c, m);
                        let phase = Complex64::from_polar(
                            1.0,
                            -std::f64::consts::PI * (nx + ny) as f64 / m as f64,
                        );
                        out[r * m + c] = buf[r * m + c] * norm * phase;
                    }
                }
                SpectralField {
                    dim: 2,
                    m,
                    coeffs: out,
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Integer wavevector of flat index i: (n_x, n_y), n_y = 0 in 1D.
    pub fn wavevector_of(&self, i: usize) -> [i64; 2] {
        match self.dim {
            1 => [wavevector(i, self.m), 0],
            _ => [
                wavevector(i % self.m, self.m),
                wavevector(i / self.m, self.m),
            ],
        }
    }

    /// Real-space values at the cell centers.
    pub fn to_values(&self) -> Vec<f64> {
        let m = self.m;
        match self.dim {
            1 => {
                let mut buf: Vec<Complex64> = (0..m)
                    .map(|i| {
                        let n = wavevector(i, m);
                        let phase =
                            Complex64::from_polar(1.0, std::f64::consts::PI * n as f64 / m as f64);
                        self.coeffs[i] * phase
                    })
                    .collect();
                with_fft(m, true, &mut buf);
                buf.iter().map(|c| c.re).collect()
            }
            _ => {
                let mut buf: Vec<Complex64> = vec![Complex64::ZERO; m * m];
                for r in 0..m {
                    let ny = wavevector(r, m);
                    for c in 0..m {
                        let nx = wavevector(c, m);
                        let phase = Complex64::from_polar(
                            1.0,
                            std::f64::consts::PI * (nx + ny) as f64 / m as f64,
                        );
                        buf[r * m + c] = self.coeffs[r * m + c] * phase;
                    }
                }
                for r in 0..m {
                    with_fft(m, true, &mut buf[r * m..(r + 1) * m]);
                }
                let mut col = vec![Complex64::ZERO; m];
                for c in 0..m {
                    for r in 0..m {
                        col[r] = buf[r * m + c];
                    }
                    with_fft(m, true, &mut col);
                    for r in 0..m {
                        buf[r * m + c] = col[r];
                    }
                }
                buf.iter().map(|c| c.re).collect()
            }
        }
    }

    pub fn to_state(&self, grid: TorusGrid, time: f64) -> Result<State> {
        if grid.m() != self.m || grid.dim() != self.dim {
            return Err(argument("grid does not match spectral field layout"));
        }
        State::new(grid, self.to_values(), time)
    }

    /// (Σ_n (1+|2πn|²)^s |û(n)|²)^{1/2}.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let n = self.wavevector_of(i);
            let n2 = (n[0] * n[0] + n[1] * n[1]) as f64;
            let w = 1.0 + std::f64::consts::TAU * std::f64::consts::TAU * n2;
            acc += w.powf(s) * c.norm_sqr();
        }
        acc.sqrt()
    }

    /// L² norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn zero_mode(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn set_zero_mode(&mut self, v: Complex64) {
        self.coeffs[0] = v;
    }

    pub fn add(&mut self, other: &SpectralField) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }
}

#[inline]
pub(crate) fn wavevector(i: usize, m: usize) -> i64 {
    if i <= m / 2 {
        i as i64
    } else {
        i as i64 - m as i64
    }
}
