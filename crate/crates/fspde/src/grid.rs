//! Uniform time and space grids, grid functions and time-indexed state series.
//!
//! The spatial domain is fixed to the unit interval (0,1). Spatial
//! quadrature is the trapezoid rule on the closed uniform grid
//! x_j = j/n_cells, which integrates products of the Neumann cosine modes
//! exactly (DCT-I orthogonality), so the discrete L² inner product is
//! spectrally consistent.

use crate::error::{Error, Result};
use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

/// Uniform grid on [0, T] with points t_k = k·T/n_steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    horizon: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, n_steps: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::domain(format!(
                "time horizon must be positive and finite, got {horizon}"
            )));
        }
        if n_steps < 2 {
            return Err(Error::domain(format!(
                "a time grid needs at least 2 steps, got {n_steps}"
            )));
        }
        Ok(TimeGrid { horizon, n_steps })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of grid points, n_steps + 1.
    pub fn n_points(&self) -> usize {
        self.n_steps + 1
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        debug_assert!(k <= self.n_steps);
        k as f64 * self.horizon / self.n_steps as f64
    }

    pub fn points(&self) -> Array1<f64> {
        Array1::from_iter((0..=self.n_steps).map(|k| self.point(k)))
    }

    /// Same horizon with every `factor`-th point kept.
    pub fn coarsen(&self, factor: usize) -> Result<TimeGrid> {
        if factor == 0 || self.n_steps % factor != 0 {
            return Err(Error::domain(format!(
                "cannot coarsen {} steps by factor {factor}",
                self.n_steps
            )));
        }
        TimeGrid::new(self.horizon, self.n_steps / factor)
    }
}

/// Uniform grid on the closed unit interval with n_cells + 1 points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpatialGrid {
    n_cells: usize,
}

impl SpatialGrid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::domain(format!(
                "a spatial grid needs at least 2 cells, got {n_cells}"
            )));
        }
        Ok(SpatialGrid { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_points(&self) -> usize {
        self.n_cells + 1
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        debug_assert!(j <= self.n_cells);
        j as f64 / self.n_cells as f64
    }

    pub fn points(&self) -> Array1<f64> {
        Array1::from_iter((0..=self.n_cells).map(|j| self.point(j)))
    }

    /// Trapezoid quadrature weights (dx·[1/2, 1, ..., 1, 1/2]).
    pub fn weights(&self) -> Array1<f64> {
        let dx = self.dx();
        let mut w = Array1::from_elem(self.n_points(), dx);
        w[0] = 0.5 * dx;
        w[self.n_cells] = 0.5 * dx;
        w
    }

    /// Weighted L² inner product of two value slices on this grid.
    pub fn inner(&self, a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
        debug_assert_eq!(a.len(), self.n_points());
        debug_assert_eq!(b.len(), self.n_points());
        let n = self.n_cells;
        let mut s = 0.5 * (a[0] * b[0] + a[n] * b[n]);
        for j in 1..n {
            s += a[j] * b[j];
        }
        s * self.dx()
    }

    pub fn norm_l2(&self, a: ArrayView1<f64>) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }
}

/// An element of L²(0,1) sampled on a uniform grid, with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: SpatialGrid,
    values: Array1<f64>,
}

impl GridFunction {
    pub fn new(grid: SpatialGrid, values: Array1<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::domain(format!(
                "grid function needs {} values, got {}",
                grid.n_points(),
                values.len()
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn constant(grid: SpatialGrid, c: f64) -> Self {
        GridFunction {
            grid,
            values: Array1::from_elem(grid.n_points(), c),
        }
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = Array1::from_iter((0..grid.n_points()).map(|j| f(grid.point(j))));
        GridFunction { grid, values }
    }

    pub fn zero(grid: SpatialGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn grid(&self) -> SpatialGrid {
        self.grid
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array1<f64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array1<f64> {
        self.values
    }

    pub fn inner(&self, other: &GridFunction) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        self.grid.inner(self.values.view(), other.values.view())
    }

    pub fn norm_l2(&self) -> f64 {
        self.grid.norm_l2(self.values.view())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: &self.values * c,
        }
    }

    pub fn add_scaled(&mut self, c: f64, other: &GridFunction) {
        debug_assert_eq!(self.grid, other.grid);
        self.values.scaled_add(c, &other.values);
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.mapv(&f),
        }
    }
}

/// A time-indexed family of grid functions: rows are time points,
/// columns are spatial points.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSeries {
    tgrid: TimeGrid,
    xgrid: SpatialGrid,
    states: Array2<f64>,
}

impl StateSeries {
    pub fn new(tgrid: TimeGrid, xgrid: SpatialGrid, states: Array2<f64>) -> Result<Self> {
        if states.nrows() != tgrid.n_points() || states.ncols() != xgrid.n_points() {
            return Err(Error::domain(format!(
                "state series needs shape ({}, {}), got ({}, {})",
                tgrid.n_points(),
                xgrid.n_points(),
                states.nrows(),
                states.ncols()
            )));
        }
        Ok(StateSeries {
            tgrid,
            xgrid,
            states,
        })
    }

    pub fn zeros(tgrid: TimeGrid, xgrid: SpatialGrid) -> Self {
        StateSeries {
            tgrid,
            xgrid,
            states: Array2::zeros((tgrid.n_points(), xgrid.n_points())),
        }
    }

    /// Constant-in-time series repeating one grid function.
    pub fn constant_in_time(tgrid: TimeGrid, v: &GridFunction) -> Self {
        let mut states = Array2::zeros((tgrid.n_points(), v.grid().n_points()));
        for mut row in states.rows_mut() {
            row.assign(v.values());
        }
        StateSeries {
            tgrid,
            xgrid: v.grid(),
            states,
        }
    }

    pub fn from_fn(
        tgrid: TimeGrid,
        xgrid: SpatialGrid,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut states = Array2::zeros((tgrid.n_points(), xgrid.n_points()));
        for k in 0..tgrid.n_points() {
            let t = tgrid.point(k);
            for j in 0..xgrid.n_points() {
                states[[k, j]] = f(t, xgrid.point(j));
            }
        }
        StateSeries {
            tgrid,
            xgrid,
            states,
        }
    }

    pub fn time_grid(&self) -> TimeGrid {
        self.tgrid
    }

    pub fn spatial_grid(&self) -> SpatialGrid {
        self.xgrid
    }

    pub fn states(&self) -> &Array2<f64> {
        &self.states
    }

    pub fn states_mut(&mut self) -> &mut Array2<f64> {
        &mut self.states
    }

    pub fn state(&self, k: usize) -> ArrayView1<'_, f64> {
        self.states.row(k)
    }

    pub fn state_fn(&self, k: usize) -> GridFunction {
        GridFunction {
            grid: self.xgrid,
            values: self.states.row(k).to_owned(),
        }
    }

    pub fn state_norm(&self, k: usize) -> f64 {
        self.xgrid.norm_l2(self.states.row(k))
    }

    /// sup over grid times of the spatial L² norm.
    pub fn sup_l2_norm(&self) -> f64 {
        (0..self.tgrid.n_points()).fold(0.0f64, |m, k| m.max(self.state_norm(k)))
    }

    /// Gram matrix P[j][k] = (u(t_j), u(t_k))₂ of all states.
    pub fn gram(&self) -> Array2<f64> {
        let n = self.tgrid.n_points();
        let mut p = Array2::zeros((n, n));
        for j in 0..n {
            for k in j..n {
                let v = self.xgrid.inner(self.states.row(j), self.states.row(k));
                p[[j, k]] = v;
                p[[k, j]] = v;
            }
        }
        p
    }

    /// Pairwise distance matrix d[j][k] = ‖u(t_j) − u(t_k)‖₂ derived from
    /// the Gram matrix.
    pub fn pairwise_l2_distances(&self) -> Array2<f64> {
        let p = self.gram();
        let n = p.nrows();
        let mut d = Array2::zeros((n, n));
        for j in 0..n {
            for k in j + 1..n {
                let v = (p[[j, j]] + p[[k, k]] - 2.0 * p[[j, k]]).max(0.0).sqrt();
                d[[j, k]] = v;
                d[[k, j]] = v;
            }
        }
        d
    }

    /// self + c·other, elementwise over the whole series.
    pub fn add_scaled(&mut self, c: f64, other: &StateSeries) {
        debug_assert_eq!(self.states.dim(), other.states.dim());
        self.states.scaled_add(c, &other.states);
    }

    pub fn difference(&self, other: &StateSeries) -> Result<StateSeries> {
        if self.tgrid != other.tgrid || self.xgrid != other.xgrid {
            return Err(Error::domain(
                "state series live on different grids".to_string(),
            ));
        }
        Ok(StateSeries {
            tgrid: self.tgrid,
            xgrid: self.xgrid,
            states: &self.states - &other.states,
        })
    }

    /// Restriction to a coarser time grid keeping every `factor`-th state.
    pub fn subsample_time(&self, factor: usize) -> Result<StateSeries> {
        let tgrid = self.tgrid.coarsen(factor)?;
        let mut states = Array2::zeros((tgrid.n_points(), self.xgrid.n_points()));
        for k in 0..tgrid.n_points() {
            states.row_mut(k).assign(&self.states.row(k * factor));
        }
        Ok(StateSeries {
            tgrid,
            xgrid: self.xgrid,
            states,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn time_grid_endpoints() {
        let g = TimeGrid::new(2.0, 8).unwrap();
        assert_eq!(g.point(0), 0.0);
        assert_eq!(g.point(8), 2.0);
        assert_abs_diff_eq!(g.dt(), 0.25);
    }

    #[test]
    fn time_grid_rejects_degenerate() {
        assert!(TimeGrid::new(0.0, 8).is_err());
        assert!(TimeGrid::new(-1.0, 8).is_err());
        assert!(TimeGrid::new(1.0, 1).is_err());
    }

    #[test]
    fn trapezoid_weights_sum_to_one() {
        let g = SpatialGrid::new(64).unwrap();
        assert_abs_diff_eq!(g.weights().sum(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn inner_product_of_constants() {
        let g = SpatialGrid::new(32).unwrap();
        let a = GridFunction::constant(g, 3.0);
        let b = GridFunction::constant(g, -2.0);
        assert_abs_diff_eq!(a.inner(&b), -6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a.norm_l2(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn series_subsample_keeps_endpoints() {
        let tg = TimeGrid::new(1.0, 8).unwrap();
        let xg = SpatialGrid::new(4).unwrap();
        let s = StateSeries::from_fn(tg, xg, |t, x| t + x);
        let c = s.subsample_time(4).unwrap();
        assert_eq!(c.time_grid().n_steps(), 2);
        assert_eq!(c.state(0), s.state(0));
        assert_eq!(c.state(2), s.state(8));
    }

    #[test]
    fn pairwise_distances_match_direct() {
        let tg = TimeGrid::new(1.0, 4).unwrap();
        let xg = SpatialGrid::new(16).unwrap();
        let s = StateSeries::from_fn(tg, xg, |t, x| (t * x).sin() + t);
        let d = s.pairwise_l2_distances();
        let direct = {
            let a = s.state_fn(1);
            let mut b = s.state_fn(3);
            b.add_scaled(-1.0, &a);
            b.norm_l2()
        };
        assert_abs_diff_eq!(d[[1, 3]], direct, epsilon = 1e-12);
    }
}
