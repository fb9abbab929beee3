//! Monomial valuations, the hybrid seminorms `f -> |f(eta)|^rho` with their
//! trivial-norm limit at `rho = 0`, and the polycircle experiment.
//!
//! On the polycircle `|z_i| = exp(-alpha_i / rho)` the quantity
//! `sup |f|^rho` tends to `exp(-v(f))` as `rho -> 0`, where `v` is the
//! monomial valuation with weights `alpha`. The report below tabulates that
//! convergence.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::poly::LaurentPoly;

/// Polycircle radii below this are rejected rather than underflowing.
pub const MIN_POLYCIRCLE_RADIUS: f64 = 1e-300;
/// Relative size below which `f(eta)` is treated as zero.
pub const ZERO_TOL: f64 = 8.0 * f64::EPSILON;
/// Phases per axis for the tensor grid used when `n <= 2`.
pub const DEFAULT_PHASE_SAMPLES: usize = 64;

/// `v(sum a_m z^m) = min { <m, alpha> : a_m != 0 }` for positive weights.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialValuation {
    weights: Vec<f64>,
}

impl MonomialValuation {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidArgument("monomial weights must be positive and finite".into()));
        }
        Ok(MonomialValuation { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `v(f)`, or `+inf` for the zero polynomial. Only defined on
    /// polynomials (nonnegative exponents).
    pub fn value(&self, f: &LaurentPoly) -> Result<f64> {
        if f.dim() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: f.dim(),
            });
        }
        if !f.is_polynomial() {
            return Err(Error::Domain("monomial valuations need nonnegative exponents".into()));
        }
        Ok(f.support().map(|m| m.dot(&self.weights)).fold(f64::INFINITY, f64::min))
    }
}

/// A point of the hybrid space: either a section point `f -> |f(eta)|^rho`
/// or a monomial point of the trivially valued fiber.
#[derive(Clone, Debug, PartialEq)]
pub enum HybridPoint {
    Section { eta: Vec<Complex64>, rho: f64 },
    Monomial(MonomialValuation),
}

impl HybridPoint {
    pub fn section(eta: Vec<Complex64>, rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidArgument(format!("rho must lie in [0, 1], got {rho}")));
        }
        if eta.is_empty() || eta.iter().any(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidArgument("section points need nonzero coordinates".into()));
        }
        Ok(HybridPoint::Section { eta, rho })
    }
}

/// The seminorm `|f|_p`. For a section point this is `|f(eta)|^rho`, with
/// the trivial norm at `rho = 0`; for a monomial point it is `exp(-v(f))`.
///
/// A value at rounding level relative to `sum |a_m eta^m|` counts as an
/// exact zero of `f`.
pub fn hybrid_seminorm(p: &HybridPoint, f: &LaurentPoly) -> Result<f64> {
    match p {
        HybridPoint::Section { eta, rho } => {
            let mut value = f.evaluate(eta)?.norm();
            if value <= ZERO_TOL * f.magnitude_scale(eta) {
                value = 0.0;
            }
            if *rho == 0.0 {
                Ok(if value > 0.0 { 1.0 } else { 0.0 })
            } else {
                Ok(value.powf(*rho))
            }
        }
        HybridPoint::Monomial(v) => Ok((-v.value(f)?).exp()),
    }
}

/// `max(|a|, |a|_0)`: the hybrid norm on `C`.
pub fn hybrid_base_norm(a: Complex64) -> f64 {
    if a == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        a.norm().max(1.0)
    }
}

/// `lambda(x) = log |e|_x`.
pub fn lambda_of(p: &HybridPoint) -> f64 {
    match p {
        HybridPoint::Section { rho, .. } => *rho,
        HybridPoint::Monomial(_) => 0.0,
    }
}

/// `|min_m c_m|` with `c_m = -log |a_m|`, the coefficient scale entering the
/// polycircle error bound. Zero for the zero polynomial.
pub fn coefficient_log_scale(f: &LaurentPoly) -> f64 {
    let min = f.terms().map(|(_, a)| -a.norm().ln()).fold(f64::INFINITY, f64::min);
    if min.is_finite() {
        min.abs()
    } else {
        0.0
    }
}

fn check_polycircle(f: &LaurentPoly, alpha: &[f64], rho: f64) -> Result<()> {
    if alpha.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: alpha.len(),
        });
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidArgument(format!("rho must lie in (0, 1], got {rho}")));
    }
    if !f.is_polynomial() {
        return Err(Error::Domain("polycircle estimates need nonnegative exponents".into()));
    }
    MonomialValuation::new(alpha.to_vec())?;
    for &a in alpha {
        if (-a / rho).exp() < MIN_POLYCIRCLE_RADIUS {
            return Err(Error::Underflow { alpha: a, rho });
        }
    }
    Ok(())
}

/// `|f(eta)|^rho` on the polycircle, evaluated in log space.
fn powered_modulus(terms: &[(Vec<f64>, f64, f64)], alpha: &[f64], rho: f64, theta: &[f64]) -> f64 {
    let logs: Vec<(f64, f64)> = terms
        .iter()
        .map(|(m, log_a, arg_a)| {
            let log_mod = log_a - m.iter().zip(alpha).map(|(e, a)| e * a).sum::<f64>() / rho;
            let phase = arg_a + m.iter().zip(theta).map(|(e, t)| e * t).sum::<f64>();
            (log_mod, phase)
        })
        .collect();
    let top = logs.iter().map(|l| l.0).fold(f64::NEG_INFINITY, f64::max);
    let sum: Complex64 = logs
        .iter()
        .map(|(l, ph)| Complex64::from_polar((l - top).exp(), *ph))
        .sum();
    let s = sum.norm();
    if s == 0.0 {
        0.0
    } else {
        (rho * (top + s.ln())).exp()
    }
}

/// `sup |f|^rho` over the polycircle `|z_i| = exp(-alpha_i / rho)`.
///
/// For `n <= 2` the phases run over a tensor grid with `phase_samples`
/// points per axis plus `phase_samples` seeded random phase vectors; for
/// larger `n` a seeded Latin hypercube of `phase_samples^2` points is used.
pub fn polycircle_sup(f: &LaurentPoly, alpha: &[f64], rho: f64, phase_samples: usize, seed: u64) -> Result<f64> {
    polycircle_sup_with(f, alpha, rho, phase_samples, seed, Execution::default())
}

pub fn polycircle_sup_with(
    f: &LaurentPoly,
    alpha: &[f64],
    rho: f64,
    phase_samples: usize,
    seed: u64,
    execution: Execution,
) -> Result<f64> {
    check_polycircle(f, alpha, rho)?;
    if phase_samples == 0 {
        return Err(Error::InvalidArgument("need at least one phase sample".into()));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let n = f.dim();
    let terms: Vec<(Vec<f64>, f64, f64)> = f
        .terms()
        .map(|(m, a)| (m.entries().iter().map(|&e| e as f64).collect(), a.norm().ln(), a.arg()))
        .collect();
    let eval = |theta: &[f64]| powered_modulus(&terms, alpha, rho, theta);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let batches: Vec<Vec<Vec<f64>>> = if n <= 2 {
        let step = TAU / phase_samples as f64;
        let mut batches: Vec<Vec<Vec<f64>>> = (0..phase_samples)
            .map(|i| {
                if n == 1 {
                    vec![vec![i as f64 * step]]
                } else {
                    (0..phase_samples)
                        .map(|k| vec![i as f64 * step, k as f64 * step])
                        .collect()
                }
            })
            .collect();
        batches.push(
            (0..phase_samples)
                .map(|_| (0..n).map(|_| rng.random_range(0.0..TAU)).collect())
                .collect(),
        );
        batches
    } else {
        let total = phase_samples * phase_samples;
        let mut strata: Vec<Vec<usize>> = (0..n)
            .map(|_| {
                let mut p: Vec<usize> = (0..total).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        let points: Vec<Vec<f64>> = (0..total)
            .map(|k| {
                strata
                    .iter_mut()
                    .map(|p| TAU * (p[k] as f64 + rng.random_range(0.0..1.0)) / total as f64)
                    .collect()
            })
            .collect();
        points.chunks(phase_samples).map(|c| c.to_vec()).collect()
    };
    Ok(exec::max_over(execution, &batches, |batch| {
        batch.iter().map(|t| eval(t)).fold(0.0, f64::max)
    }))
}

/// One line of the polycircle convergence table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolycircleRow {
    pub rho: f64,
    pub sup: f64,
    pub target: f64,
    pub abs_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolycircleReport {
    pub rows: Vec<PolycircleRow>,
}

impl PolycircleReport {
    /// Whether `abs_error` never grows by more than `slack` (relative) from
    /// one row to the next, counting only rows with `rho <= rho_max`.
    pub fn is_non_increasing(&self, slack: f64, rho_max: f64) -> bool {
        let tail: Vec<&PolycircleRow> = self.rows.iter().filter(|r| r.rho <= rho_max).collect();
        tail.windows(2)
            .all(|w| w[1].abs_error <= w[0].abs_error * (1.0 + slack) + f64::EPSILON)
    }

    pub fn final_error(&self) -> Option<f64> {
        self.rows.last().map(|r| r.abs_error)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("rho,sup,target,abs_error\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{}", r.rho, r.sup, r.target, r.abs_error);
        }
        s
    }
}

/// Tabulates `sup |f|^rho` on the shrinking polycircles against `exp(-v(f))`.
pub fn polycircle_limit_report(f: &LaurentPoly, alpha: &[f64], rhos: &[f64]) -> Result<PolycircleReport> {
    polycircle_limit_report_with(f, alpha, rhos, DEFAULT_PHASE_SAMPLES, 0)
}

pub fn polycircle_limit_report_with(
    f: &LaurentPoly,
    alpha: &[f64],
    rhos: &[f64],
    phase_samples: usize,
    seed: u64,
) -> Result<PolycircleReport> {
    if rhos.is_empty() || rhos.windows(2).any(|w| !(w[1] < w[0])) || rhos.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidArgument("rho list must be positive and strictly decreasing".into()));
    }
    let v = MonomialValuation::new(alpha.to_vec())?.value(f)?;
    let target = (-v).exp();
    let rows = rhos
        .iter()
        .map(|&rho| {
            let sup = polycircle_sup(f, alpha, rho, phase_samples, seed)?;
            Ok(PolycircleRow {
                rho,
                sup,
                target,
                abs_error: (sup - target).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PolycircleReport { rows })
}
