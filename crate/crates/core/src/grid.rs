//! Periodic uniform grid on the torus and the cell-averaged field living on it.

use crate::{argument, Result};

/// Uniform periodic grid with M cells per dimension on [0,1)^N, N = 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    dim: usize,
    m: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, m: usize) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(argument("grid dimension must be 1 or 2"));
        }
        if m < 8 {
            return Err(argument("grid needs at least 8 cells per dimension"));
        }
        Ok(TorusGrid { dim, m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cells per dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.m as f64
    }

    /// Total cell count M^N.
    pub fn cells(&self) -> usize {
        match self.dim {
            1 => self.m,
            _ => self.m * self.m,
        }
    }

    /// Cell volume dx^N.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Center of cell i (flattened row-major for 2D); second coordinate is 0 in 1D.
    pub fn cell_center(&self, i: usize) -> [f64; 2] {
        let dx = self.dx();
        match self.dim {
            1 => [(i as f64 + 0.5) * dx, 0.0],
            _ => {
                let row = i / self.m;
                let col = i % self.m;
                [(col as f64 + 0.5) * dx, (row as f64 + 0.5) * dx]
            }
        }
    }
}

/// Cell-averaged scalar field with its time stamp.
#[derive(Debug, Clone)]
pub struct State {
    pub grid: TorusGrid,
    pub values: Vec<f64>,
    pub time: f64,
}

impl State {
    pub fn new(grid: TorusGrid, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(argument(format!(
                "state has {} values for a grid of {} cells",
                values.len(),
                grid.cells()
            )));
        }
        Ok(State { grid, values, time })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        State {
            grid,
            values: vec![0.0; grid.cells()],
            time: 0.0,
        }
    }

    /// Builds a state from a function of the cell center.
    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = (0..grid.cells()).map(|i| f(grid.cell_center(i))).collect();
        State {
            grid,
            values,
            time: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn l2(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// ‖u‖_{L^r}^r (the r-th power, not the norm).
    pub fn lr_pow(&self, r: f64) -> f64 {
        self.values.iter().map(|v| v.abs().powf(r)).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn l1_diff(&self, other: &State) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * self.grid.cell_volume()
    }

    /// Central-difference gradient at every cell, flattened per dimension.
    pub fn gradient_central(&self) -> Vec<Vec<f64>> {
        let m = self.grid.m();
        let dx = self.grid.dx();
        match self.grid.dim() {
            1 => {
                let g = (0..m)
                    .map(|i| (self.values[(i + 1) % m] - self.values[(i + m - 1) % m]) / (2.0 * dx))
                    .collect();
                vec![g]
            }
            _ => {
                let mut gx = vec![0.0; m * m];
                let mut gy = vec![0.0; m * m];
                for r in 0..m {
                    for c in 0..m {
                        let i = r * m + c;
                        gx[i] = (self.values[r * m + (c + 1) % m]
                            - self.values[r * m + (c + m - 1) % m])
                            / (2.0 * dx);
                        gy[i] = (self.values[((r + 1) % m) * m + c]
                            - self.values[((r + m - 1) % m) * m + c])
                            / (2.0 * dx);
                    }
                }
                vec![gx, gy]
            }
        }
    }

    /// ‖∇u‖²_{L²} with the central-difference gradient.
    pub fn grad_sq_l2(&self) -> f64 {
        let grads = self.gradient_central();
        let vol = self.grid.cell_volume();
        let mut acc = 0.0;
        for g in &grads {
            acc += g.iter().map(|v| v * v).sum::<f64>();
        }
        acc * vol
    }

    /// Squared central gradient magnitude per cell.
    pub fn grad_sq_per_cell(&self) -> Vec<f64> {
        let grads = self.gradient_central();
        let mut out = vec![0.0; self.values.len()];
        for g in &grads {
            for (o, v) in out.iter_mut().zip(g) {
                *o += v * v;
            }
        }
        out
    }

    /// Subtracts the grid mean in place.
    pub fn project_zero_mean(&mut self) {
        let m = self.mean();
        for v in &mut self.values {
            *v -= m;
        }
    }
}
