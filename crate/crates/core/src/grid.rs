//! Uniform grids on `[0, T]` and functions sampled on them.

use crate::coeff::CoefficientSpec;
use crate::error::{Error, Result};

/// Uniform grid `t_k = k·h`, `k = 0..=N`, with `h = T/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    t_end: f64,
    n_intervals: usize,
    step: f64,
}

impl Grid {
    pub fn new(t_end: f64, n_intervals: usize) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::Domain(format!(
                "grid end must be positive, got {t_end}"
            )));
        }
        if n_intervals == 0 {
            return Err(Error::Domain("grid needs at least one interval".into()));
        }
        Ok(Grid {
            t_end,
            n_intervals,
            step: t_end / n_intervals as f64,
        })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.n_intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The last node is pinned to `t_end` exactly.
    pub fn node(&self, k: usize) -> f64 {
        if k == self.n_intervals {
            self.t_end
        } else {
            k as f64 * self.step
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |k| self.node(k))
    }

    /// Samples `f` at every node.
    pub fn map(&self, f: impl FnMut(f64) -> f64) -> GridFn {
        GridFn {
            grid: *self,
            values: self.nodes().map(f).collect(),
        }
    }
}

pub fn make_grid(t_end: f64, n_intervals: usize) -> Result<Grid> {
    Grid::new(t_end, n_intervals)
}

/// Real values attached to the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFn {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "grid function value at node {k} is not finite"
            )));
        }
        Ok(GridFn { grid, values })
    }

    pub(crate) fn from_values_unchecked(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        GridFn { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFn {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid, v: f64) -> Self {
        GridFn {
            grid,
            values: vec![v; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_same_grid(&self, other: &GridFn) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub(crate) fn axpy_in_place(&mut self, a: f64, x: &GridFn) {
        for (y, xv) in self.values.iter_mut().zip(&x.values) {
            *y += a * xv;
        }
    }
}

pub fn sup_norm(f: &GridFn) -> f64 {
    f.sup_norm()
}

/// Samples a coefficient on the grid; tables must span `[0, t_end]`.
pub fn sample(spec: &CoefficientSpec, grid: &Grid) -> Result<GridFn> {
    spec.validate()?;
    spec.check_coverage(grid.t_end())?;
    Ok(grid.map(|t| spec.eval(t)))
}

/// Elementwise `a·f + b·g`.
pub fn combine(a: f64, f: &GridFn, b: f64, g: &GridFn) -> Result<GridFn> {
    f.check_same_grid(g)?;
    let values = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(x, y)| a * x + b * y)
        .collect();
    Ok(GridFn {
        grid: f.grid,
        values,
    })
}

/// Elementwise product.
pub fn pointwise_mul(f: &GridFn, g: &GridFn) -> Result<GridFn> {
    f.check_same_grid(g)?;
    let values = f.values.iter().zip(&g.values).map(|(x, y)| x * y).collect();
    Ok(GridFn {
        grid: f.grid,
        values,
    })
}
