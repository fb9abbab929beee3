//! Laurent polynomials over the complex numbers and over `C[t, 1/t]`.
//!
//! Supports are kept in a `BTreeMap`, so iteration is lexicographic in the
//! exponent vectors and two equal polynomials always serialize identically.
//! Zero coefficients are never stored. Cancellation is detected only when a
//! coefficient is bit-exactly zero after arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tropical::TropicalPolynomial;

/// Integer exponent vector `m = (m_1, ..., m_n)` of a Laurent monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<i32>);

impl Exponent {
    pub fn new(entries: Vec<i32>) -> Self {
        Exponent(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Exponent(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    /// `|m| = m_1 + ... + m_n`.
    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.0.iter().zip(w).map(|(&m, &x)| m as f64 * x).sum()
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
}

impl From<Vec<i32>> for Exponent {
    fn from(v: Vec<i32>) -> Self {
        Exponent(v)
    }
}

impl<const N: usize> From<[i32; N]> for Exponent {
    fn from(v: [i32; N]) -> Self {
        Exponent(v.to_vec())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Neumaier-compensated running sum of complex numbers.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl CompensatedSum {
    fn step(sum: &mut f64, comp: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }

    pub(crate) fn add(&mut self, z: Complex64) {
        Self::step(&mut self.re, &mut self.re_c, z.re);
        Self::step(&mut self.im, &mut self.im_c, z.im);
    }

    pub(crate) fn total(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `z^m` for a nonzero complex point.
pub(crate) fn monomial_value(m: &Exponent, z: &[Complex64]) -> Complex64 {
    m.entries()
        .iter()
        .zip(z)
        .fold(Complex64::new(1.0, 0.0), |acc, (&e, &zi)| acc * zi.powi(e))
}

/// A Laurent polynomial `f = sum a_m z^m` with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Exponent, Complex64>,
}

impl LaurentPoly {
    /// Builds a polynomial from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed; exact zeros are dropped.
    pub fn new<I, E>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, Complex64)>,
        E: Into<Exponent>,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let mut map: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            let e = e.into();
            check_dim(dim, e.dim())?;
            *map.entry(e).or_default() += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(LaurentPoly { dim, terms: map })
    }

    /// Convenience constructor for real coefficients.
    pub fn from_real<I, E>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, f64)>,
        E: Into<Exponent>,
    {
        Self::new(dim, terms.into_iter().map(|(e, c)| (e, Complex64::new(c, 0.0))))
    }

    pub fn zero(dim: usize) -> Self {
        LaurentPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::new(dim, [(Exponent::zero(dim), c)]).expect("dimension is consistent")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Exponent) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    /// True when every exponent is nonnegative (an ordinary polynomial).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Exponent::is_nonnegative)
    }

    /// Distinct exponents of coordinate `i` appearing in the support.
    pub fn exponents_in(&self, i: usize) -> Vec<i32> {
        let mut v: Vec<i32> = self.terms.keys().map(|m| m.entries()[i]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Evaluates `sum a_m z^m` with compensated summation.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        check_dim(self.dim, z.len())?;
        if z.iter().any(|zi| *zi == Complex64::new(0.0, 0.0)) {
            return Err(Error::Domain("Laurent polynomial evaluated at a zero coordinate".into()));
        }
        Ok(self.evaluate_unchecked(z))
    }

    pub(crate) fn evaluate_unchecked(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = CompensatedSum::default();
        for (m, a) in &self.terms {
            acc.add(*a * monomial_value(m, z));
        }
        acc.total()
    }

    /// `sum |a_m z^m|`, the natural magnitude against which residuals are judged.
    pub fn magnitude_scale(&self, z: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, a)| a.norm() * monomial_value(m, z).norm())
            .sum()
    }

    pub fn multiply(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        check_dim(self.dim, other.dim)?;
        let mut out: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (m1, a1) in &self.terms {
            for (m2, a2) in &other.terms {
                *out.entry(m1.add(m2)).or_default() += a1 * a2;
            }
        }
        out.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(LaurentPoly {
            dim: self.dim,
            terms: out,
        })
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        check_dim(self.dim, other.dim)?;
        LaurentPoly::new(
            self.dim,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(m, a)| (m.clone(), *a)),
        )
    }

    pub fn scale(&self, lambda: Complex64) -> LaurentPoly {
        LaurentPoly::new(self.dim, self.terms.iter().map(|(m, a)| (m.clone(), a * lambda)))
            .expect("dimension is consistent")
    }

    /// The substitution `z_i -> lambda_i z_i`.
    pub fn substitute_scaling(&self, lambda: &[Complex64]) -> Result<LaurentPoly> {
        check_dim(self.dim, lambda.len())?;
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a * monomial_value(m, lambda)));
        LaurentPoly::new(self.dim, terms)
    }

    /// Tropicalization for the trivial absolute value: support kept, all
    /// coefficients valued 0.
    pub fn trivial_tropicalize(&self) -> Result<TropicalPolynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        TropicalPolynomial::new(self.dim, self.terms.keys().map(|m| (m.clone(), 0.0)))
    }

    /// Largest total degree over the support.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Exponent::total_degree).max()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({a})*z^{m}")?;
        }
        Ok(())
    }
}

/// A family `F_t = sum a_m(t) z^m` whose coefficients are Laurent polynomials
/// in a single parameter `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct TLaurentPoly {
    dim: usize,
    terms: BTreeMap<Exponent, BTreeMap<i32, Complex64>>,
}

impl TLaurentPoly {
    /// Builds a family from `(exponent, t-exponent, coefficient)` triples.
    pub fn new<I, E>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, i32, Complex64)>,
        E: Into<Exponent>,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let mut map: BTreeMap<Exponent, BTreeMap<i32, Complex64>> = BTreeMap::new();
        for (e, k, c) in terms {
            let e = e.into();
            check_dim(dim, e.dim())?;
            *map.entry(e).or_default().entry(k).or_default() += c;
        }
        Ok(Self::canonical(dim, map))
    }

    fn canonical(dim: usize, mut map: BTreeMap<Exponent, BTreeMap<i32, Complex64>>) -> Self {
        for inner in map.values_mut() {
            inner.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        }
        map.retain(|_, inner| !inner.is_empty());
        TLaurentPoly { dim, terms: map }
    }

    /// Embeds a complex polynomial as a family constant in `t`.
    pub fn constant_family(f: &LaurentPoly) -> Self {
        let terms = f
            .terms()
            .map(|(m, a)| (m.clone(), BTreeMap::from([(0, *a)])))
            .collect();
        TLaurentPoly { dim: f.dim(), terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BTreeMap<i32, Complex64>)> {
        self.terms.iter()
    }

    /// True when no coefficient involves `t`.
    pub fn is_t_free(&self) -> bool {
        self.terms.values().all(|inner| inner.keys().all(|&k| k == 0))
    }

    pub fn multiply(&self, other: &TLaurentPoly) -> Result<TLaurentPoly> {
        check_dim(self.dim, other.dim)?;
        let mut out: BTreeMap<Exponent, BTreeMap<i32, Complex64>> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let slot = out.entry(m1.add(m2)).or_default();
                for (k1, a1) in c1 {
                    for (k2, a2) in c2 {
                        *slot.entry(k1 + k2).or_default() += a1 * a2;
                    }
                }
            }
        }
        Ok(Self::canonical(self.dim, out))
    }

    /// The fiber polynomial `F_a` obtained by substituting `t = a`.
    pub fn specialize(&self, a: Complex64) -> Result<LaurentPoly> {
        if a == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("cannot specialize a Laurent family at t = 0".into()));
        }
        let terms = self.terms.iter().map(|(m, inner)| {
            let mut acc = CompensatedSum::default();
            for (&k, c) in inner {
                acc.add(c * a.powi(k));
            }
            (m.clone(), acc.total())
        });
        LaurentPoly::new(self.dim, terms)
    }

    /// Tropical polynomial with `c_m = ord_t a_m(t)`, i.e. `-log|a_m|` for
    /// the t-adic absolute value with `|t| = 1/e`.
    pub fn t_valuation(&self) -> Result<TropicalPolynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        TropicalPolynomial::new(
            self.dim,
            self.terms.iter().map(|(m, inner)| {
                let ord = *inner.keys().next().expect("canonical inner maps are nonempty");
                (m.clone(), ord as f64)
            }),
        )
    }
}
