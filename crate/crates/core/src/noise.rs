//! Additive trigonometric forcing: a finite family of zero-mean modes
//! g_k driven by independent Brownian motions, with covariance bounds and
//! reproducible counter-based increments.

use crate::grid::TorusGrid;
use crate::rng::{self, DrawHash};
use crate::{argument, Result};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Cos,
    Sin,
}

/// One forcing mode σ·cos(2πn·x) or σ·sin(2πn·x) with n ≠ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub wavevector: [i64; 2],
    pub amplitude: f64,
    pub parity: Parity,
}

impl Mode {
    pub fn eval(&self, x: [f64; 2]) -> f64 {
        let phase = TAU * (self.wavevector[0] as f64 * x[0] + self.wavevector[1] as f64 * x[1]);
        match self.parity {
            Parity::Cos => self.amplitude * phase.cos(),
            Parity::Sin => self.amplitude * phase.sin(),
        }
    }

    fn grad(&self, x: [f64; 2]) -> [f64; 2] {
        let phase = TAU * (self.wavevector[0] as f64 * x[0] + self.wavevector[1] as f64 * x[1]);
        let outer = match self.parity {
            Parity::Cos => -self.amplitude * phase.sin(),
            Parity::Sin => self.amplitude * phase.cos(),
        };
        [
            outer * TAU * self.wavevector[0] as f64,
            outer * TAU * self.wavevector[1] as f64,
        ]
    }

    pub fn norm(&self) -> f64 {
        let n0 = self.wavevector[0] as f64;
        let n1 = self.wavevector[1] as f64;
        (n0 * n0 + n1 * n1).sqrt()
    }
}

/// Finite trigonometric noise model with its covariance constants.
#[derive(Debug, Clone)]
pub struct NoiseModel {
    dim: usize,
    modes: Vec<Mode>,
    pub seed_root: u64,
}

impl NoiseModel {
    pub fn from_modes(dim: usize, modes: Vec<Mode>, seed_root: u64) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(argument("noise dimension must be 1 or 2"));
        }
        for m in &modes {
            if m.wavevector == [0, 0] {
                return Err(argument("noise wavevectors must be nonzero"));
            }
            if dim == 1 && m.wavevector[1] != 0 {
                return Err(argument("1D noise modes must have wavevector [n, 0]"));
            }
            if !(m.amplitude >= 0.0) || !m.amplitude.is_finite() {
                return Err(argument("noise amplitudes must be finite and >= 0"));
            }
        }
        Ok(NoiseModel {
            dim,
            modes,
            seed_root,
        })
    }

    /// K paired cos/sin modes with power-law amplitudes |n_k|^{-decay}.
    pub fn build_default(k: usize, decay_exponent: f64, dim: usize, seed_root: u64) -> Result<Self> {
        if k < 2 || k % 2 != 0 {
            return Err(argument("noise mode count K must be even and >= 2"));
        }
        let wavevectors = default_wavevectors(dim, k / 2)?;
        let mut modes = Vec::with_capacity(k);
        for n in wavevectors {
            let norm = ((n[0] * n[0] + n[1] * n[1]) as f64).sqrt();
            let amp = norm.powf(-decay_exponent);
            modes.push(Mode {
                wavevector: n,
                amplitude: amp,
                parity: Parity::Cos,
            });
            modes.push(Mode {
                wavevector: n,
                amplitude: amp,
                parity: Parity::Sin,
            });
        }
        NoiseModel::from_modes(dim, modes, seed_root)
    }

    /// Rescales every amplitude by the same factor.
    pub fn scaled(mut self, factor: f64) -> Self {
        for m in &mut self.modes {
            m.amplitude *= factor;
        }
        self
    }

    /// Rescales so that D0 equals the given target.
    pub fn normalized_d0(self, target: f64) -> Self {
        let d0 = self.d0();
        if d0 > 0.0 {
            let f = (target / d0).sqrt();
            self.scaled(f)
        } else {
            self
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// D0 = sup_x Σ g_k(x)². Exact (Σ σ²) when every wavevector comes as an
    /// equal-amplitude cos/sin pair, otherwise a dense grid sup.
    pub fn d0(&self) -> f64 {
        if self.fully_paired() {
            // cos²+sin² collapses each pair to its σ², and Σ over all modes
            // counts the pair twice
            return self.modes.iter().map(|m| m.amplitude * m.amplitude).sum::<f64>() / 2.0;
        }
        let p = if self.dim == 1 { 8192 } else { 256 };
        let mut sup: f64 = 0.0;
        let pts = if self.dim == 1 { p } else { p * p };
        for i in 0..pts {
            let x = match self.dim {
                1 => [(i as f64 + 0.5) / p as f64, 0.0],
                _ => [
                    ((i % p) as f64 + 0.5) / p as f64,
                    ((i / p) as f64 + 0.5) / p as f64,
                ],
            };
            let g2: f64 = self.modes.iter().map(|m| m.eval(x).powi(2)).sum();
            sup = sup.max(g2);
        }
        sup
    }

    fn fully_paired(&self) -> bool {
        if self.modes.len() % 2 != 0 {
            return false;
        }
        self.modes.chunks(2).all(|pair| {
            pair[0].wavevector == pair[1].wavevector
                && pair[0].amplitude == pair[1].amplitude
                && pair[0].parity == Parity::Cos
                && pair[1].parity == Parity::Sin
        })
    }

    /// Lipschitz constant D1 = Σ σ_k² (2π|n_k|)² from the mean value theorem.
    pub fn d1(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| (m.amplitude * TAU * m.norm()).powi(2))
            .sum()
    }

    /// Σ_k ‖g_k‖²_{L²(T^N)} = Σ σ_k²/2 (exact for nonzero wavevectors).
    pub fn sum_g_l2(&self) -> f64 {
        self.modes.iter().map(|m| m.amplitude * m.amplitude / 2.0).sum()
    }

    /// G²(x) = Σ g_k(x)² sampled at all cell centers.
    pub fn g_sq_field(&self, grid: &TorusGrid) -> Vec<f64> {
        (0..grid.cells())
            .map(|i| {
                let x = grid.cell_center(i);
                self.modes.iter().map(|m| m.eval(x).powi(2)).sum()
            })
            .collect()
    }

    /// Stream of increments for one path, with the mode fields cached on a grid.
    pub fn path(&self, path_index: u64, grid: TorusGrid) -> NoisePath<'_> {
        let tables = self
            .modes
            .iter()
            .map(|m| {
                (0..grid.cells())
                    .map(|i| m.eval(grid.cell_center(i)))
                    .collect()
            })
            .collect();
        NoisePath {
            model: self,
            grid,
            path_index,
            tables,
        }
    }
}

fn default_wavevectors(dim: usize, count: usize) -> Result<Vec<[i64; 2]>> {
    match dim {
        1 => Ok((1..=count as i64).map(|n| [n, 0]).collect()),
        _ => {
            // nonzero integer vectors up to sign, ordered by |n| then lexicographically
            let r = (count as f64).sqrt().ceil() as i64 + 2;
            let mut all: Vec<[i64; 2]> = Vec::new();
            for i in -r..=r {
                for j in -r..=r {
                    if (i, j) == (0, 0) {
                        continue;
                    }
                    // canonical representative of {n, -n}
                    if i > 0 || (i == 0 && j > 0) {
                        all.push([i, j]);
                    }
                }
            }
            all.sort_by(|a, b| {
                let na = a[0] * a[0] + a[1] * a[1];
                let nb = b[0] * b[0] + b[1] * b[1];
                na.cmp(&nb).then(a.cmp(b))
            });
            if all.len() < count {
                return Err(argument("too many noise modes requested"));
            }
            all.truncate(count);
            Ok(all)
        }
    }
}

/// Deterministic increment stream: draws depend only on
/// (seed_root, path_index, step, mode).
pub struct NoisePath<'a> {
    model: &'a NoiseModel,
    grid: TorusGrid,
    pub path_index: u64,
    tables: Vec<Vec<f64>>,
}

impl<'a> NoisePath<'a> {
    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn model(&self) -> &NoiseModel {
        self.model
    }

    /// One standard normal per mode for the given step.
    pub fn gaussians(&self, step: u64) -> Vec<f64> {
        (0..self.model.modes.len() as u64)
            .map(|k| rng::standard_normal(self.model.seed_root, self.path_index, step, k))
            .collect()
    }

    /// Writes Σ_k g_k(x) ξ_k √dt into `out`, projected to exact zero grid mean.
    pub fn increment_into(&self, xi: &[f64], dt: f64, out: &mut [f64]) {
        let s = dt.sqrt();
        out.fill(0.0);
        for (table, &z) in self.tables.iter().zip(xi) {
            let w = z * s;
            for (o, g) in out.iter_mut().zip(table) {
                *o += w * g;
            }
        }
        let mean = out.iter().sum::<f64>() / out.len() as f64;
        for o in out.iter_mut() {
            *o -= mean;
        }
    }

    /// Convenience wrapper returning a fresh field.
    pub fn increment(&self, step: u64, dt: f64) -> Vec<f64> {
        let xi = self.gaussians(step);
        let mut out = vec![0.0; self.grid.cells()];
        self.increment_into(&xi, dt, &mut out);
        out
    }

    /// Sup over grid points of |W| and |∇W| for an accumulated Brownian
    /// vector β (one entry per mode); the W^{1,∞} proxy is their max.
    pub fn w1_inf(&self, beta: &[f64]) -> f64 {
        let mut sup_w: f64 = 0.0;
        let mut sup_g: f64 = 0.0;
        for i in 0..self.grid.cells() {
            let x = self.grid.cell_center(i);
            let mut w = 0.0;
            let mut gx = 0.0;
            let mut gy = 0.0;
            for (m, b) in self.model.modes.iter().zip(beta) {
                w += b * m.eval(x);
                let g = m.grad(x);
                gx += b * g[0];
                gy += b * g[1];
            }
            sup_w = sup_w.max(w.abs());
            sup_g = sup_g.max((gx * gx + gy * gy).sqrt());
        }
        sup_w.max(sup_g)
    }
}

/// Fingerprint the gaussians of steps [0, n_steps) for replay checking.
pub fn draw_hash_for(path: &NoisePath, n_steps: u64) -> u64 {
    let mut h = DrawHash::new();
    for step in 0..n_steps {
        for z in path.gaussians(step) {
            h.absorb(z);
        }
    }
    h.value()
}
