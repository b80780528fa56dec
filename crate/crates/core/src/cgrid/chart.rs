use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// A rectangle `[x_min, x_max] × [y_min, y_max]` of the complex plane sampled
/// on an `nx × ny` lattice. Index `(i, j)` sits at `z = x_i + i·y_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridChart {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
}

impl GridChart {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidChart(format!("need at least 3 samples per axis, got {nx} x {ny}")));
        }
        if !(x_min.is_finite() && x_max.is_finite() && y_min.is_finite() && y_max.is_finite()) {
            return Err(Error::InvalidChart("non-finite bounds".into()));
        }
        if x_max <= x_min || y_max <= y_min {
            return Err(Error::InvalidChart(format!("empty rectangle [{x_min}, {x_max}] x [{y_min}, {y_max}]")));
        }
        Ok(Self { x_min, x_max, y_min, y_max, nx, ny })
    }

    /// Square chart `[lo, hi]²` with `n` samples per axis.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new(lo, hi, lo, hi, n, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn y_min(&self) -> f64 {
        self.y_min
    }
    pub fn y_max(&self) -> f64 {
        self.y_max
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn hx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }
    pub fn hy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }
    /// The coarser of the two spacings; all tolerances scale with it.
    pub fn h(&self) -> f64 {
        self.hx().max(self.hy())
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.x_max
        } else {
            self.x_min + i as f64 * self.hx()
        }
    }
    pub fn y(&self, j: usize) -> f64 {
        if j + 1 == self.ny {
            self.y_max
        } else {
            self.y_min + j as f64 * self.hy()
        }
    }
    pub fn z(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x(i), self.y(j))
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.nx && j < self.ny
    }

    pub fn center(&self) -> (usize, usize) {
        (self.nx / 2, self.ny / 2)
    }

    /// Grid index nearest to `z`, if `z` lies inside the rectangle.
    pub fn nearest_index(&self, z: Complex64) -> Option<(usize, usize)> {
        let fx = (z.re - self.x_min) / self.hx();
        let fy = (z.im - self.y_min) / self.hy();
        let (i, j) = (fx.round(), fy.round());
        if i < 0.0 || j < 0.0 || i >= self.nx as f64 || j >= self.ny as f64 {
            return None;
        }
        Some((i as usize, j as usize))
    }

    /// Same rectangle with a different resolution.
    pub fn with_resolution(&self, nx: usize, ny: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, self.y_min, self.y_max, nx, ny)
    }

    /// Distance (in grid steps) from index `(i, j)` to the nearest chart edge.
    pub fn edge_distance(&self, i: usize, j: usize) -> usize {
        i.min(self.nx - 1 - i).min(j).min(self.ny - 1 - j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_coordinates() {
        let c = GridChart::new(-1.0, 1.0, 0.0, 3.0, 5, 4).unwrap();
        assert_eq!(c.hx(), 0.5);
        assert_eq!(c.hy(), 1.0);
        assert_eq!(c.z(4, 3), Complex64::new(1.0, 3.0));
        assert_eq!(c.nearest_index(Complex64::new(0.1, 1.2)), Some((2, 1)));
        assert_eq!(c.edge_distance(2, 1), 1);
    }

    #[test]
    fn rejects_degenerate_charts() {
        assert!(GridChart::new(0.0, 1.0, 0.0, 1.0, 2, 5).is_err());
        assert!(GridChart::new(1.0, 1.0, 0.0, 1.0, 5, 5).is_err());
        assert!(GridChart::new(0.0, f64::NAN, 0.0, 1.0, 5, 5).is_err());
    }
}
