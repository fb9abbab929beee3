//! Amoebae `L(V(f))` with `L(z) = (-log|z_1|, ..., -log|z_n|)`.
//!
//! Sampling fixes all but one log-modulus uniformly in a window, draws the
//! phases uniformly, and solves the remaining univariate polynomial. The
//! solved coordinate cycles through every coordinate in which `f` has at
//! least two distinct exponents, so tentacles in every direction get covered.

mod roots;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::poly::LaurentPoly;
use crate::window::Window;

pub(crate) use roots::nonzero_roots;

/// Roots whose modulus, relative to the balancing scale of their fiber
/// polynomial, leaves this band are discarded as untrustworthy.
pub const ROOT_MODULUS_BAND: (f64, f64) = (1e-12, 1e12);
/// Accepted roots satisfy `|f(z)| <= RESIDUAL_TOL * sum_m |a_m z^m|`.
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const DEFAULT_PHASE_GRID: usize = 256;
pub const DEFAULT_SLICE_TOL: f64 = 1e-3;

/// Provenance attached to a point cloud.
#[derive(Clone, Debug, PartialEq)]
pub struct CloudMeta {
    pub source: String,
    /// Product of every scaling applied so far (1 = unscaled).
    pub scaling: f64,
    pub requested: usize,
    pub seed: u64,
}

/// Counters for samples that produced no trusted point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SampleDiagnostics {
    /// Samples where the eigenvalue iteration failed.
    pub failed_samples: usize,
    /// Roots dropped by the modulus band or the residual check.
    pub rejected_roots: usize,
}

/// Finite point set in `R^n`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    pub meta: CloudMeta,
    pub diagnostics: SampleDiagnostics,
}

impl PointCloud {
    pub fn new(dim: usize, points: Vec<Vec<f64>>, meta: CloudMeta) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("cloud dimension must be at least 1".into()));
        }
        if !(meta.scaling > 0.0) {
            return Err(Error::InvalidArgument("cloud scaling must be positive".into()));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            coords.extend(p);
        }
        Ok(PointCloud {
            dim,
            coords,
            meta,
            diagnostics: SampleDiagnostics::default(),
        })
    }

    /// A cloud with default metadata, handy for fixtures.
    pub fn from_points(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            dim,
            points,
            CloudMeta {
                source: "literal".into(),
                scaling: 1.0,
                requested: 0,
                seed: 0,
            },
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// The points lying inside `window`, metadata preserved.
    pub fn restricted(&self, window: &Window) -> PointCloud {
        let coords = self
            .points()
            .filter(|p| window.contains(p))
            .flat_map(|p| p.iter().copied())
            .collect();
        PointCloud {
            dim: self.dim,
            coords,
            meta: self.meta.clone(),
            diagnostics: self.diagnostics,
        }
    }

    pub fn map_points<F: Fn(&[f64]) -> Vec<f64>>(&self, f: F) -> Result<PointCloud> {
        let pts: Vec<Vec<f64>> = self.points().map(f).collect();
        let dim = pts.first().map_or(self.dim, Vec::len);
        let mut out = PointCloud::new(dim, pts, self.meta.clone())?;
        out.diagnostics = self.diagnostics;
        Ok(out)
    }
}

/// The pointwise dilation `rho * cloud`.
pub fn scale_cloud(cloud: &PointCloud, rho: f64) -> Result<PointCloud> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("scaling factor must be positive, got {rho}")));
    }
    Ok(PointCloud {
        dim: cloud.dim,
        coords: cloud.coords.iter().map(|x| x * rho).collect(),
        meta: CloudMeta {
            scaling: cloud.meta.scaling * rho,
            ..cloud.meta.clone()
        },
        diagnostics: cloud.diagnostics,
    })
}

/// Which coordinate gets solved for in each sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FiberChoice {
    /// Cycle through every coordinate with two or more distinct exponents.
    #[default]
    AllSolvable,
    /// Always solve for the last coordinate `z_n`.
    LastCoordinate,
}

/// Parameters of [`sample_amoeba_with`].
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub count: usize,
    /// Box in `R^n`; the interval of the coordinate being solved for is ignored.
    pub window: Window,
    pub seed: u64,
    pub fibers: FiberChoice,
    pub execution: Execution,
    pub source: String,
}

impl SamplerConfig {
    pub fn new(count: usize, window: Window, seed: u64) -> Self {
        SamplerConfig {
            count,
            window,
            seed,
            fibers: FiberChoice::default(),
            execution: Execution::default(),
            source: "f".into(),
        }
    }
}

fn solvable_coordinates(f: &LaurentPoly, fibers: FiberChoice) -> Result<Vec<usize>> {
    let n = f.dim();
    let ok = |j: usize| f.exponents_in(j).len() >= 2;
    let coords: Vec<usize> = match fibers {
        FiberChoice::AllSolvable => (0..n).filter(|&j| ok(j)).collect(),
        FiberChoice::LastCoordinate => (n - 1..n).filter(|&j| ok(j)).collect(),
    };
    if coords.is_empty() {
        Err(Error::DegenerateFibers)
    } else {
        Ok(coords)
    }
}

/// Coefficients (ascending in `z_j`, starting at the smallest exponent) of
/// `f` restricted to the fiber where every other coordinate is fixed.
fn fiber_coefficients(f: &LaurentPoly, j: usize, z: &[Complex64], min_exp: i32, len: usize) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
    for (m, a) in f.terms() {
        let mut term = *a;
        for (i, (&e, zi)) in m.entries().iter().zip(z).enumerate() {
            if i != j {
                term *= zi.powi(e);
            }
        }
        coeffs[(m.entries()[j] - min_exp) as usize] += term;
    }
    coeffs
}

struct Fiber {
    j: usize,
    min_exp: i32,
    len: usize,
}

impl Fiber {
    fn new(f: &LaurentPoly, j: usize) -> Self {
        let exps = f.exponents_in(j);
        let min_exp = exps[0];
        Fiber {
            j,
            min_exp,
            len: (exps[exps.len() - 1] - min_exp) as usize + 1,
        }
    }

    /// All nonzero roots in `z_j` with the other coordinates fixed at `z`.
    fn roots(&self, f: &LaurentPoly, z: &[Complex64]) -> Option<roots::Roots> {
        nonzero_roots(&fiber_coefficients(f, self.j, z, self.min_exp, self.len))
    }
}

/// Samples the amoeba with the default fiber choice and execution.
pub fn sample_amoeba(f: &LaurentPoly, count: usize, window: &Window, seed: u64) -> Result<PointCloud> {
    sample_amoeba_with(f, &SamplerConfig::new(count, window.clone(), seed))
}

pub fn sample_amoeba_with(f: &LaurentPoly, cfg: &SamplerConfig) -> Result<PointCloud> {
    let n = f.dim();
    if cfg.window.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: cfg.window.dim(),
        });
    }
    if cfg.count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let fibers: Vec<Fiber> = solvable_coordinates(f, cfg.fibers)?
        .into_iter()
        .map(|j| Fiber::new(f, j))
        .collect();

    let per_sample = exec::map_indexed(cfg.execution, cfg.count, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        let fiber = &fibers[i % fibers.len()];
        let mut w = vec![0.0; n];
        let mut z = vec![Complex64::new(1.0, 0.0); n];
        for k in 0..n {
            if k == fiber.j {
                continue;
            }
            w[k] = rng.random_range(cfg.window.lo()[k]..cfg.window.hi()[k]);
            let theta: f64 = rng.random_range(0.0..TAU);
            z[k] = Complex64::from_polar((-w[k]).exp(), theta);
        }
        sample_fiber(f, fiber, &w, &mut z)
    });

    let mut coords = Vec::new();
    let mut diagnostics = SampleDiagnostics::default();
    for outcome in per_sample {
        match outcome {
            Some((pts, rejected)) => {
                coords.extend(pts);
                diagnostics.rejected_roots += rejected;
            }
            None => diagnostics.failed_samples += 1,
        }
    }
    Ok(PointCloud {
        dim: n,
        coords,
        meta: CloudMeta {
            source: cfg.source.clone(),
            scaling: 1.0,
            requested: cfg.count,
            seed: cfg.seed,
        },
        diagnostics,
    })
}

fn sample_fiber(f: &LaurentPoly, fiber: &Fiber, w: &[f64], z: &mut [Complex64]) -> Option<(Vec<f64>, usize)> {
    let (lo, hi) = ROOT_MODULUS_BAND;
    let found = fiber.roots(f, z)?;
    let mut out = Vec::new();
    let mut rejected = 0;
    for r in found.roots {
        let modulus = r.norm();
        if !(lo..=hi).contains(&(modulus / found.scale)) || !modulus.is_finite() {
            rejected += 1;
            continue;
        }
        z[fiber.j] = r;
        let residual = f.evaluate_unchecked(z).norm();
        if residual > RESIDUAL_TOL * f.magnitude_scale(z) {
            rejected += 1;
            continue;
        }
        for (k, wk) in w.iter().enumerate() {
            out.push(if k == fiber.j { -modulus.ln() } else { *wk });
        }
    }
    Some((out, rejected))
}

/// Approximate planar membership test: scans the phase of one coordinate
/// over a uniform grid and looks for a root of the other coordinate on the
/// circle `|z| = e^{-w}`. A hit is reported when a root lands within `tol`
/// in log-modulus, or when the number of roots inside that circle changes
/// between neighbouring phases (a root crossed it in between).
pub fn membership_slice(f: &LaurentPoly, w: &[f64], phase_grid: usize, tol: f64) -> Result<bool> {
    if f.dim() != 2 || w.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: if f.dim() != 2 { f.dim() } else { w.len() },
        });
    }
    if phase_grid < 8 {
        return Err(Error::InvalidArgument("phase grid needs at least 8 points".into()));
    }
    let coords = solvable_coordinates(f, FiberChoice::AllSolvable)?;
    let j = *coords.last().expect("nonempty");
    let k = 1 - j;
    let fiber = Fiber::new(f, j);
    let radius_log = -w[j];
    let mut z = [Complex64::new(1.0, 0.0); 2];
    let mut counts: Vec<Option<usize>> = Vec::with_capacity(phase_grid);
    for step in 0..phase_grid {
        let theta = TAU * step as f64 / phase_grid as f64;
        z[k] = Complex64::from_polar((-w[k]).exp(), theta);
        let Some(found) = fiber.roots(f, &z) else {
            counts.push(None);
            continue;
        };
        let mut inside = 0;
        for r in &found.roots {
            let log_mod = r.norm().ln();
            if (log_mod - radius_log).abs() <= tol {
                return Ok(true);
            }
            if log_mod < radius_log {
                inside += 1;
            }
        }
        counts.push(Some(inside));
    }
    let crossed = (0..phase_grid).any(|s| match (counts[s], counts[(s + 1) % phase_grid]) {
        (Some(a), Some(b)) => a != b,
        _ => false,
    });
    Ok(crossed)
}

/// Sound exterior certificate: true when a single term `|a_m| e^{-<m,w>}`
/// strictly outweighs the sum of all the others, so `f` cannot vanish on
/// the torus fiber over `w`.
pub fn lopsided_certificate(f: &LaurentPoly, w: &[f64]) -> Result<bool> {
    if w.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: w.len(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let logs: Vec<f64> = f.terms().map(|(m, a)| a.norm().ln() - m.dot(w)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let others: f64 = logs.iter().map(|l| (l - top).exp()).sum::<f64>() - 1.0;
    // the dominant term is normalized to 1; leave a rounding margin
    Ok(others < 1.0 - 1e-12)
}
