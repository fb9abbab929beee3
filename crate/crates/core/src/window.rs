use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `[lo_i, hi_i]` in `R^n`. All metric comparisons between
/// unbounded sets are taken inside one of these.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        if lo.is_empty() {
            return Err(Error::InvalidArgument("window must have dimension at least 1".into()));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l < h) || !l.is_finite() || !h.is_finite()) {
            return Err(Error::InvalidArgument("window requires finite lo < hi in every coordinate".into()));
        }
        Ok(Window { lo, hi })
    }

    /// `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| *l <= *x && *x <= *h)
    }

    pub fn diagonal(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l) * (h - l))
            .sum::<f64>()
            .sqrt()
    }

    /// The box `{p / rho : p in self}`.
    pub fn unscaled(&self, rho: f64) -> Window {
        Window {
            lo: self.lo.iter().map(|x| x / rho).collect(),
            hi: self.hi.iter().map(|x| x / rho).collect(),
        }
    }

    pub fn translated(&self, shift: &[f64]) -> Window {
        Window {
            lo: self.lo.iter().zip(shift).map(|(x, s)| x + s).collect(),
            hi: self.hi.iter().zip(shift).map(|(x, s)| x + s).collect(),
        }
    }

    /// Regular grid with `per_axis` points per coordinate (endpoints included).
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        assert!(per_axis >= 2, "grid needs at least two points per axis");
        let n = self.dim();
        let total = per_axis.pow(n as u32);
        (0..total)
            .map(|mut idx| {
                (0..n)
                    .map(|i| {
                        let k = idx % per_axis;
                        idx /= per_axis;
                        self.lo[i] + (self.hi[i] - self.lo[i]) * k as f64 / (per_axis - 1) as f64
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_bounds() {
        assert!(Window::new(vec![1.0], vec![0.0]).is_err());
        assert!(Window::new(vec![0.0], vec![0.0]).is_err());
        assert!(Window::new(vec![0.0, 0.0], vec![1.0]).is_err());
    }

    #[test]
    fn grid_covers_corners() {
        let w = Window::cube(2, -1.0, 1.0).unwrap();
        let g = w.grid(3);
        assert_eq!(g.len(), 9);
        assert!(g.contains(&vec![-1.0, -1.0]));
        assert!(g.contains(&vec![1.0, 1.0]));
        assert!(g.contains(&vec![0.0, 0.0]));
        assert!((w.diagonal() - 8f64.sqrt()).abs() < 1e-15);
    }
}
