//! Kinetic-formulation instrumentation: the kinetic function χ, the
//! discretized dissipation measure binned over (time-window, ξ), tail masses,
//! and the stationary dissipation balance.

use crate::grid::State;
use crate::noise::NoiseModel;
use crate::solver::Observer;
use crate::{argument, Error, Result};

/// χ_u(ξ) = +1 on 0 < ξ < u, −1 on u < ξ < 0, else 0.
#[inline]
pub fn chi(u: f64, xi: f64) -> f64 {
    if u > xi && xi > 0.0 {
        1.0
    } else if 0.0 > xi && xi > u {
        -1.0
    } else {
        0.0
    }
}

/// Nonnegative mass binned uniformly over ξ ∈ [−Ξ, Ξ] per time window, with
/// under/overflow buckets. The range doubles (exact pairwise bin merge) when
/// 1.5× the running max |u| outgrows it.
#[derive(Debug, Clone)]
pub struct KineticHistogram {
    xi_max: f64,
    bins: usize,
    window_len: f64,
    windows: Vec<Window>,
    total: f64,
}

#[derive(Debug, Clone)]
struct Window {
    mass: Vec<f64>,
    underflow: f64,
    overflow: f64,
}

impl Window {
    fn new(bins: usize) -> Self {
        Window {
            mass: vec![0.0; bins],
            underflow: 0.0,
            overflow: 0.0,
        }
    }

    fn sum(&self) -> f64 {
        self.mass.iter().sum::<f64>() + self.underflow + self.overflow
    }
}

impl KineticHistogram {
    pub fn new(xi_max: f64, bins: usize, window_len: f64) -> Result<Self> {
        if bins == 0 || bins % 4 != 0 {
            return Err(argument("histogram bins must be a positive multiple of 4"));
        }
        if !(xi_max > 0.0) || !(window_len > 0.0) {
            return Err(argument("histogram needs xi_max > 0 and window_len > 0"));
        }
        Ok(KineticHistogram {
            xi_max,
            bins,
            window_len,
            windows: Vec::new(),
            total: 0.0,
        })
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn window_len(&self) -> f64 {
        self.window_len
    }

    pub fn window_count(&self) -> usize {
        self.windows.len()
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn bin_edges(&self, j: usize) -> (f64, f64) {
        let w = 2.0 * self.xi_max / self.bins as f64;
        (-self.xi_max + j as f64 * w, -self.xi_max + (j + 1) as f64 * w)
    }

    pub fn window_mass(&self, w: usize, j: usize) -> f64 {
        self.windows[w].mass[j]
    }

    pub fn window_sum(&self, w: usize) -> f64 {
        self.windows[w].sum()
    }

    pub fn overflow_mass(&self) -> f64 {
        self.windows.iter().map(|w| w.underflow + w.overflow).sum()
    }

    /// Grows the range until 1.5·max_abs fits.
    pub fn ensure_range(&mut self, max_abs: f64) {
        while 1.5 * max_abs > self.xi_max {
            self.double_range();
        }
    }

    fn double_range(&mut self) {
        let quarter = self.bins / 4;
        for w in &mut self.windows {
            let mut next = vec![0.0; self.bins];
            for i in 0..self.bins / 2 {
                next[quarter + i] = w.mass[2 * i] + w.mass[2 * i + 1];
            }
            w.mass = next;
        }
        self.xi_max *= 2.0;
    }

    pub fn add(&mut self, time: f64, xi: f64, mass: f64) {
        let w = (time / self.window_len).floor().max(0.0) as usize;
        while self.windows.len() <= w {
            self.windows.push(Window::new(self.bins));
        }
        let win = &mut self.windows[w];
        if xi < -self.xi_max {
            win.underflow += mass;
        } else if xi >= self.xi_max {
            win.overflow += mass;
        } else {
            let j = ((xi + self.xi_max) / (2.0 * self.xi_max) * self.bins as f64) as usize;
            win.mass[j.min(self.bins - 1)] += mass;
        }
        self.total += mass;
    }

    /// Mass carried by k ≤ |ξ| ≤ k+1 (proportional bin overlap); whenever the
    /// band reaches past the histogram range the whole under/overflow bucket
    /// is included.
    pub fn tail_mass(&self, k: f64) -> f64 {
        assert!(k >= 0.0, "tail_mass needs k >= 0");
        let w = 2.0 * self.xi_max / self.bins as f64;
        let mut acc = 0.0;
        let overlap = |lo: f64, hi: f64, a: f64, b: f64| -> f64 {
            let s = lo.max(a);
            let e = hi.min(b);
            (e - s).max(0.0) / (hi - lo)
        };
        for win in &self.windows {
            for j in 0..self.bins {
                let (lo, hi) = (
                    -self.xi_max + j as f64 * w,
                    -self.xi_max + (j + 1) as f64 * w,
                );
                let frac = overlap(lo, hi, k, k + 1.0) + overlap(lo, hi, -(k + 1.0), -k);
                if frac > 0.0 {
                    acc += frac * win.mass[j];
                }
            }
            if k + 1.0 > self.xi_max {
                acc += win.underflow + win.overflow;
            }
        }
        acc
    }

    /// Sums another histogram into this one (associative and commutative);
    /// ranges are aligned by doubling first.
    pub fn merge(&mut self, mut other: KineticHistogram) -> Result<()> {
        if self.bins != other.bins || self.window_len != other.window_len {
            return Err(argument("histogram merge requires same bins and window length"));
        }
        while self.xi_max < other.xi_max * (1.0 - 1e-12) {
            self.double_range();
        }
        while other.xi_max < self.xi_max * (1.0 - 1e-12) {
            other.double_range();
        }
        while self.windows.len() < other.windows.len() {
            self.windows.push(Window::new(self.bins));
        }
        for (w, ow) in self.windows.iter_mut().zip(&other.windows) {
            for (m, om) in w.mass.iter_mut().zip(&ow.mass) {
                *m += om;
            }
            w.underflow += ow.underflow;
            w.overflow += ow.overflow;
        }
        self.total += other.total;
        Ok(())
    }
}

/// One dissipation sample per record point.
#[derive(Debug, Clone, Copy)]
pub struct DissSample {
    pub time: f64,
    /// η‖∇u‖²·dt over the elapsed interval.
    pub increment: f64,
    pub elapsed: f64,
}

/// Trajectory observer accumulating the viscous dissipation measure
/// η|∇u|²δ_{u=ξ}, the ½G²δ companion, and the occupation measure of u.
pub struct KineticObserver {
    pub m_hist: KineticHistogram,
    pub g_hist: KineticHistogram,
    pub occupation: KineticHistogram,
    pub scalar_total: f64,
    pub series: Vec<DissSample>,
    eta: f64,
    g_sq: Vec<f64>,
    vol: f64,
}

impl KineticObserver {
    pub fn new(
        eta: f64,
        noise: Option<&NoiseModel>,
        grid: &crate::grid::TorusGrid,
        xi_max: f64,
        bins: usize,
        window_len: f64,
    ) -> Result<Self> {
        let g_sq = match noise {
            Some(n) => n.g_sq_field(grid),
            None => vec![0.0; grid.cells()],
        };
        Ok(KineticObserver {
            m_hist: KineticHistogram::new(xi_max, bins, window_len)?,
            g_hist: KineticHistogram::new(xi_max, bins, window_len)?,
            occupation: KineticHistogram::new(xi_max, bins, window_len)?,
            scalar_total: 0.0,
            series: Vec::new(),
            eta,
            g_sq,
            vol: grid.cell_volume(),
        })
    }
}

impl Observer for KineticObserver {
    fn on_record(&mut self, state: &State, dt_since_last: f64) {
        if dt_since_last <= 0.0 {
            return;
        }
        let max_abs = state.max_abs();
        self.m_hist.ensure_range(max_abs);
        self.g_hist.ensure_range(max_abs);
        self.occupation.ensure_range(max_abs);
        let grad_sq = state.grad_sq_per_cell();
        let mut increment = 0.0;
        for (i, &u) in state.values.iter().enumerate() {
            let w = self.eta * grad_sq[i] * self.vol * dt_since_last;
            self.m_hist.add(state.time, u, w);
            increment += w;
            self.g_hist
                .add(state.time, u, 0.5 * self.g_sq[i] * self.vol * dt_since_last);
            self.occupation.add(state.time, u, self.vol * dt_since_last);
        }
        self.scalar_total += increment;
        self.series.push(DissSample {
            time: state.time,
            increment,
            elapsed: dt_since_last,
        });
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BalanceReport {
    /// Time-averaged 2·η‖∇u‖²_{L²} past burn-in.
    pub lhs: f64,
    /// Σ_k ‖g_k‖²_{L²}, the Itô input rate.
    pub rhs: f64,
    /// lhs/rhs; None when the input rate vanishes.
    pub ratio: Option<f64>,
}

/// Stationary energy balance: in d‖u‖² = 2(u,ΦdW) + Σ‖g_k‖²dt − 2η‖∇u‖²dt
/// the drift terms cancel in a stationary regime, so the ratio tends to 1.
pub fn dissipation_balance(
    series: &[DissSample],
    noise: Option<&NoiseModel>,
    burn_in: f64,
) -> Result<BalanceReport> {
    let span = series.last().map(|s| s.time).unwrap_or(0.0);
    if span <= burn_in {
        return Err(Error::InsufficientData(format!(
            "recorded span {span:.3} does not exceed burn-in {burn_in:.3}"
        )));
    }
    let mut acc = 0.0;
    let mut elapsed = 0.0;
    for s in series {
        if s.time > burn_in {
            acc += s.increment;
            elapsed += s.elapsed;
        }
    }
    let lhs = 2.0 * acc / elapsed;
    let rhs = noise.map(|n| n.sum_g_l2()).unwrap_or(0.0);
    let ratio = if rhs > 0.0 { Some(lhs / rhs) } else { None };
    Ok(BalanceReport { lhs, rhs, ratio })
}
