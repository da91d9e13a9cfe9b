use crate::error::{Error, Result};
use crate::qmath::ComplexScalar;
use crate::residuals::FieldSampler;

/// Uniform spatial grid plus a uniform time axis `t_k = k dt`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub dt: f64,
    pub n_steps: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, dt: f64, n_steps: usize) -> Result<Self> {
        let grid = GridSpec {
            x_min,
            x_max,
            n_points,
            dt,
            n_steps,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Grid covering `[x_min, x_max]` with spacing `dx` (rounded to a whole number of cells).
    pub fn with_spacing(x_min: f64, x_max: f64, dx: f64, dt: f64, n_steps: usize) -> Result<Self> {
        if dx.is_nan() || dx <= 0.0 {
            return Err(Error::Config(format!("dx must be positive, got {dx}")));
        }
        let cells = ((x_max - x_min) / dx).round() as usize;
        GridSpec::new(x_min, x_max, cells + 1, dt, n_steps)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            return Err(Error::Config(format!(
                "need finite x_max > x_min, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.n_points < 3 {
            return Err(Error::Config(format!(
                "need at least 3 grid points, got {}",
                self.n_points
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn ts(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |k| self.t(k))
    }

    /// Largest step of the diffusive heuristic `dt <= 0.2 dx^2 m / hbar`.
    pub fn stable_dt(&self, m: f64, hbar: f64) -> f64 {
        0.2 * self.dx() * self.dx() * m / hbar
    }

    /// A warning when `dt` exceeds [`GridSpec::stable_dt`].
    pub fn stability_warning(&self, m: f64, hbar: f64) -> Option<String> {
        let limit = self.stable_dt(m, hbar);
        (self.dt > limit).then(|| {
            format!(
                "dt = {} exceeds the explicit-scheme heuristic 0.2 dx^2 m / hbar = {limit:.3e}",
                self.dt
            )
        })
    }
}

/// Complex samples on a grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub grid: GridSpec,
    pub t: f64,
    pub values: Vec<ComplexScalar>,
}

impl WaveField {
    pub fn new(grid: GridSpec, t: f64, values: Vec<ComplexScalar>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.n_points {
            return Err(Error::Config(format!(
                "field has {} samples for a {}-point grid",
                values.len(),
                grid.n_points
            )));
        }
        if let Some(i) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::Config(format!("field sample {i} is not finite")));
        }
        Ok(WaveField { grid, t, values })
    }

    pub fn sample<S: FieldSampler + ?Sized>(grid: GridSpec, t: f64, sampler: &S) -> Result<Self> {
        let values = grid
            .xs()
            .map(|x| sampler.eval(x, t).map_err(|e| e.at(x, t)))
            .collect::<Result<Vec<_>>>()?;
        WaveField::new(grid, t, values)
    }

    /// `max |values - sampler|` over interior points.
    pub fn interior_error<S: FieldSampler + ?Sized>(&self, exact: &S) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 1..self.grid.n_points - 1 {
            let reference = exact.eval(self.grid.x(i), self.t)?;
            worst = worst.max((self.values[i] - reference).norm());
        }
        Ok(worst)
    }
}
