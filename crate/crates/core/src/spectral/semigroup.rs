//! Fractional heat kernel on the torus and the transport–diffusion–damping
//! semigroup acting per Fourier mode, plus an empirical check of the
//! L^m → L^n smoothing rates.

use super::{wavevector, SpectralField};
use crate::grid::TorusGrid;
use crate::{argument, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Parameters of B = γ(−Δ)^α with damping δ.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SemigroupParams {
    pub gamma: f64,
    pub delta: f64,
    pub alpha: f64,
}

impl SemigroupParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(argument("semigroup gamma must be > 0"));
        }
        if !(self.delta >= 0.0) {
            return Err(argument("semigroup delta must be >= 0"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(argument("semigroup alpha must lie in (0, 1]"));
        }
        Ok(())
    }

    /// Eigenvalue of B on the mode n: γ(2π|n|)^{2α}.
    #[inline]
    pub fn diffusion_rate(&self, n_sq: f64) -> f64 {
        if n_sq == 0.0 {
            0.0
        } else {
            self.gamma * (TAU * TAU * n_sq).powf(self.alpha)
        }
    }

    /// Full damping of the mode, diffusion plus δ.
    #[inline]
    pub fn mode_damping(&self, n_sq: f64) -> f64 {
        self.diffusion_rate(n_sq) + self.delta
    }
}

/// Kernel of e^{−tB} on the grid, as a spectral field with coefficients
/// e^{−tγ(2π|n|)^{2α}} (terms below 1e−16 dropped).
pub fn kernel_k(params: &SemigroupParams, t: f64, grid: &TorusGrid) -> Result<SpectralField> {
    params.validate()?;
    if !(t > 0.0) {
        return Err(argument("kernel_k requires t > 0"));
    }
    let mut f = SpectralField::zeros(grid.dim(), grid.m());
    for i in 0..f.coeffs().len() {
        let n = f.wavevector_of(i);
        let n_sq = (n[0] * n[0] + n[1] * n[1]) as f64;
        let c = (-t * params.diffusion_rate(n_sq)).exp();
        f.coeffs_mut()[i] = if c < 1e-16 {
            Complex64::ZERO
        } else {
            Complex64::new(c, 0.0)
        };
    }
    Ok(f)
}

/// Applies S(t): multiplication by e^{−(2πi a(ξ)·n + γ(2π|n|)^{2α} + δ)t}
/// for the frozen speed vector a(ξ).
pub fn apply_s(
    params: &SemigroupParams,
    field: &SpectralField,
    a_xi: &[f64],
    t: f64,
) -> SpectralField {
    let mut out = field.clone();
    for i in 0..out.coeffs().len() {
        let n = out.wavevector_of(i);
        let n_sq = (n[0] * n[0] + n[1] * n[1]) as f64;
        let damp = params.mode_damping(n_sq) * t;
        let phase = -TAU
            * t
            * (a_xi[0] * n[0] as f64 + a_xi.get(1).copied().unwrap_or(0.0) * n[1] as f64);
        let factor = if damp > 700.0 {
            Complex64::ZERO
        } else {
            Complex64::from_polar((-damp).exp(), phase)
        };
        out.coeffs_mut()[i] *= factor;
    }
    out
}

/// L^p exponents the smoothing check supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lp {
    L1,
    L2,
    LInf,
}

impl Lp {
    fn inv(&self) -> f64 {
        match self {
            Lp::L1 => 1.0,
            Lp::L2 => 0.5,
            Lp::LInf => 0.0,
        }
    }

    fn norm(&self, values: &[f64], vol: f64) -> f64 {
        match self {
            Lp::L1 => values.iter().map(|v| v.abs()).sum::<f64>() * vol,
            Lp::L2 => (values.iter().map(|v| v * v).sum::<f64>() * vol).sqrt(),
            Lp::LInf => values.iter().fold(0.0f64, |a, &b| a.max(b.abs())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SmoothingReport {
    pub fitted_exponent: f64,
    pub theory_exponent: f64,
    pub ok: bool,
}

/// Estimates ‖(−Δ)^{β/2} e^{−tB}‖_{L^m→L^n} on probe inputs over a t-sweep
/// and fits the t-exponent; it must not decay faster than the theoretical
/// rate −(N/2α)(1/m−1/n) − β/(2α), up to 0.1 of slack.
pub fn smoothing_bound_check(
    params: &SemigroupParams,
    m_in: Lp,
    n_out: Lp,
    beta: u8,
    grid: &TorusGrid,
    ts: &[f64],
) -> Result<SmoothingReport> {
    params.validate()?;
    if m_in.inv() < n_out.inv() {
        return Err(argument("smoothing check needs m <= n"));
    }
    if beta > 1 {
        return Err(argument("smoothing check supports beta in {0, 1}"));
    }
    if ts.len() < 3 {
        return Err(argument("smoothing check needs at least 3 t samples"));
    }

    // probe inputs: a grid delta, low and mid single modes, random
    // band-limited fields
    let cells = grid.cells();
    let mut probes: Vec<Vec<f64>> = Vec::new();
    let mut delta = vec![0.0; cells];
    delta[0] = 1.0;
    probes.push(delta);
    for k in [1usize, grid.m() / 4] {
        probes.push(
            (0..cells)
                .map(|i| (TAU * k as f64 * grid.cell_center(i)[0]).cos())
                .collect(),
        );
    }
    for seed in 0..16u64 {
        let kmax = grid.m() / 3;
        let mut v = vec![0.0; cells];
        for k in 1..=kmax as u64 {
            let a = 2.0 * crate::rng::uniform(1234, seed, k, 0) - 1.0;
            let b = 2.0 * crate::rng::uniform(1234, seed, k, 1) - 1.0;
            for (i, val) in v.iter_mut().enumerate() {
                let x = grid.cell_center(i)[0];
                *val += a * (TAU * k as f64 * x).cos() + b * (TAU * k as f64 * x).sin();
            }
        }
        probes.push(v);
    }

    let vol = grid.cell_volume();
    let mut log_t = Vec::new();
    let mut log_norm = Vec::new();
    for &t in ts {
        if !(t > 0.0) {
            return Err(argument("smoothing check needs positive times"));
        }
        let mut best = 0.0f64;
        for p in &probes {
            let denom = m_in.norm(p, vol);
            let mut f = SpectralField::from_values(*grid, p);
            for i in 0..f.coeffs().len() {
                let n = f.wavevector_of(i);
                let n_sq = (n[0] * n[0] + n[1] * n[1]) as f64;
                let mut mult = (-t * params.diffusion_rate(n_sq)).exp();
                if beta == 1 {
                    mult *= TAU * n_sq.sqrt();
                }
                f.coeffs_mut()[i] *= mult;
            }
            let val = n_out.norm(&f.to_values(), vol);
            if denom > 0.0 {
                best = best.max(val / denom);
            }
        }
        log_t.push(t.ln());
        log_norm.push(best.max(1e-300).ln());
    }

    let n = log_t.len() as f64;
    let mx = log_t.iter().sum::<f64>() / n;
    let my = log_norm.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..log_t.len() {
        sxx += (log_t[i] - mx).powi(2);
        sxy += (log_t[i] - mx) * (log_norm[i] - my);
    }
    let fitted = sxy / sxx;
    let dim = grid.dim() as f64;
    let theory = -(dim / (2.0 * params.alpha)) * (m_in.inv() - n_out.inv())
        - beta as f64 / (2.0 * params.alpha);
    Ok(SmoothingReport {
        fitted_exponent: fitted,
        theory_exponent: theory,
        ok: fitted >= theory - 0.1,
    })
}
