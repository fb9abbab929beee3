//! Tropical polynomials `w -> min_m (c_m + <m, w>)` and their corner loci.

mod complex;
mod hull;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Exponent;

pub use complex::{CornerLocusComplex, Ray, Segment};

/// Default absolute tolerance for ties between affine forms.
pub const DEFAULT_TROP_EPS: f64 = 1e-9;

/// Support points `m` with real coefficients `c_m` (valuations of the
/// coefficients of the polynomial being tropicalized).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TropicalPolynomial {
    dim: usize,
    terms: Vec<(Exponent, f64)>,
}

impl TropicalPolynomial {
    pub fn new<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, f64)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
            if !c.is_finite() {
                return Err(Error::InvalidArgument(format!("coefficient of {m} is not finite")));
            }
            if map.insert(m.clone(), c).is_some() {
                return Err(Error::InvalidArgument(format!("exponent {m} appears twice")));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidArgument("tropical polynomial needs a nonempty support".into()));
        }
        Ok(TropicalPolynomial {
            dim,
            terms: map.into_iter().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, f64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, m: &Exponent) -> Option<f64> {
        self.terms.iter().find(|(e, _)| e == m).map(|(_, c)| *c)
    }

    /// Same support, every coefficient multiplied by `factor`.
    pub fn scale_coefficients(&self, factor: f64) -> TropicalPolynomial {
        TropicalPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    fn check(&self, w: &[f64]) -> Result<()> {
        if w.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: w.len(),
            });
        }
        Ok(())
    }

    fn values<'a>(&'a self, w: &'a [f64]) -> impl Iterator<Item = (&'a Exponent, f64)> + 'a {
        self.terms.iter().map(move |(m, c)| (m, c + m.dot(w)))
    }

    /// `min_m (c_m + <m, w>)`.
    pub fn eval(&self, w: &[f64]) -> Result<f64> {
        self.check(w)?;
        Ok(self.values(w).map(|(_, v)| v).fold(f64::INFINITY, f64::min))
    }

    /// Exponents whose affine value is within `eps` of the minimum.
    pub fn argmin_support(&self, w: &[f64], eps: f64) -> Result<Vec<Exponent>> {
        let min = self.eval(w)?;
        Ok(self
            .values(w)
            .filter(|(_, v)| *v <= min + eps)
            .map(|(m, _)| m.clone())
            .collect())
    }

    /// Whether the minimum is attained at least twice (within `eps`).
    pub fn is_member(&self, w: &[f64], eps: f64) -> Result<bool> {
        let min = self.eval(w)?;
        Ok(self.values(w).filter(|(_, v)| *v <= min + eps).nth(1).is_some())
    }

    /// The planar corner locus, dual to the regular subdivision of the Newton
    /// polygon induced by the lift `m -> (m, c_m)`.
    pub fn corner_locus_2d(&self) -> Result<CornerLocusComplex> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim,
            });
        }
        if self.terms.len() < 2 {
            return Err(Error::EmptyHypersurface);
        }
        let support: Vec<[i64; 2]> = self
            .terms
            .iter()
            .map(|(m, _)| [m.entries()[0] as i64, m.entries()[1] as i64])
            .collect();
        let integral = self.terms.iter().all(|(_, c)| c.fract() == 0.0 && c.abs() < 1e15);
        let exps: Vec<Exponent> = self.terms.iter().map(|(m, _)| m.clone()).collect();
        let coeffs: Vec<f64> = self.terms.iter().map(|(_, c)| *c).collect();
        if integral {
            let lifts = hull::ExactLifts {
                pts: self
                    .terms
                    .iter()
                    .zip(&support)
                    .map(|((_, c), m)| [m[0], m[1], *c as i64])
                    .collect(),
            };
            Ok(complex::build(&lifts, &support, &exps, &coeffs))
        } else {
            let lifts = hull::FloatLifts {
                pts: self
                    .terms
                    .iter()
                    .zip(&support)
                    .map(|((_, c), m)| [m[0] as f64, m[1] as f64, *c])
                    .collect(),
            };
            Ok(complex::build(&lifts, &support, &exps, &coeffs))
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn trop(terms: &[([i32; 2], f64)]) -> TropicalPolynomial {
        TropicalPolynomial::new(2, terms.iter().map(|(m, c)| (Exponent::from(*m), *c))).unwrap()
    }

    pub(crate) fn line() -> TropicalPolynomial {
        trop(&[([1, 0], 0.0), ([0, 1], 0.0), ([0, 0], 0.0)])
    }

    pub(crate) fn product_family() -> TropicalPolynomial {
        trop(&[
            ([2, 0], 1.0),
            ([1, 1], -1.0),
            ([0, 2], -1.0),
            ([1, 0], 0.0),
            ([0, 1], -1.0),
            ([0, 0], 0.0),
        ])
    }

    fn set(ms: &[[i32; 2]]) -> Vec<Exponent> {
        let mut v: Vec<Exponent> = ms.iter().map(|m| Exponent::from(*m)).collect();
        v.sort();
        v
    }

    #[test]
    fn eval_examples() {
        assert_eq!(line().eval(&[3.0, 5.0]).unwrap(), 0.0);
        assert_eq!(line().eval(&[-2.0, -1.0]).unwrap(), -2.0);
        assert_eq!(product_family().eval(&[0.0, 0.0]).unwrap(), -1.0);
        assert!(line().eval(&[1.0]).is_err());
    }

    #[test]
    fn argmin_examples() {
        let eps = DEFAULT_TROP_EPS;
        assert_eq!(line().argmin_support(&[0.0, 0.0], eps).unwrap(), set(&[[1, 0], [0, 1], [0, 0]]));
        assert_eq!(line().argmin_support(&[1.0, 2.0], eps).unwrap(), set(&[[0, 0]]));
        assert_eq!(line().argmin_support(&[-4.0, -4.0], eps).unwrap(), set(&[[1, 0], [0, 1]]));
    }

    #[test]
    fn membership_examples() {
        let eps = DEFAULT_TROP_EPS;
        assert!(line().is_member(&[0.0, 0.0], eps).unwrap());
        assert!(!line().is_member(&[1.0, 2.0], eps).unwrap());
        assert!(product_family().is_member(&[-1.0, 1.0], eps).unwrap());
    }

    #[test]
    fn rejects_bad_supports() {
        assert!(TropicalPolynomial::new(2, Vec::new()).is_err());
        assert!(TropicalPolynomial::new(
            2,
            vec![(Exponent::from([1, 0]), 0.0), (Exponent::from([1, 0]), 1.0)]
        )
        .is_err());
        assert!(TropicalPolynomial::new(2, vec![(Exponent::from([1]), 0.0)]).is_err());
    }

    #[test]
    fn single_monomial_has_empty_corner_locus() {
        let t = trop(&[([1, 1], 0.0)]);
        assert_eq!(t.corner_locus_2d().unwrap_err(), Error::EmptyHypersurface);
    }

    #[test]
    fn scaling_equivariance_of_membership() {
        let t = product_family();
        for rho in [0.25, 1.0, 3.0] {
            let ts = t.scale_coefficients(rho);
            for w in [[0.0, 0.0], [-1.0, 1.0], [0.5, 0.0], [0.3, 0.7], [0.0, 2.0]] {
                let scaled = [w[0] * rho, w[1] * rho];
                assert_eq!(
                    ts.is_member(&scaled, 1e-9).unwrap(),
                    t.is_member(&w, 1e-9).unwrap(),
                    "rho={rho} w={w:?}"
                );
            }
        }
    }
}
