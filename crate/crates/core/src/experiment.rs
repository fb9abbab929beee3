//! Scaling-limit experiments: scaled amoebae `rho * A` against corner loci.
//!
//! For a fixed polynomial the comparison is with the corner locus of its
//! trivial tropicalization as `rho -> 0`. For a family `F_t` the fiber at
//! `t = a` is scaled by `1 / log(1/|a|)` and compared with the corner locus
//! of the t-adic valuation as `a -> 0`.

use num_complex::Complex64;

use crate::amoeba::{sample_amoeba_with, scale_cloud, PointCloud, SamplerConfig};
use crate::converge::{hausdorff_to_complex_parts, DistanceRow, DEFAULT_COMPLEX_GRID};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::poly::{LaurentPoly, TLaurentPoly};
use crate::toric::{compactify_cloud, trop_moment, LatticePolytope};
use crate::tropical::CornerLocusComplex;
use crate::window::Window;

/// Default number of amoeba samples per scaling parameter.
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Shared knobs of the convergence experiments.
#[derive(Clone, Debug)]
pub struct ExperimentSettings {
    pub samples: usize,
    /// Comparison window, in scaled coordinates.
    pub window: Window,
    pub seed: u64,
    /// Complex discretization: arclength step `diagonal / grid`.
    pub grid: usize,
    pub execution: Execution,
}

impl Default for ExperimentSettings {
    fn default() -> Self {
        ExperimentSettings {
            samples: DEFAULT_SAMPLES,
            window: Window::cube(2, -2.0, 2.0).expect("default window is valid"),
            seed: 0,
            grid: DEFAULT_COMPLEX_GRID,
            execution: Execution::default(),
        }
    }
}

/// Output of one convergence run.
#[derive(Clone, Debug)]
pub struct ConvergenceRun {
    pub complex: CornerLocusComplex,
    pub rows: Vec<DistanceRow>,
    /// The scaled clouds, one per row.
    pub clouds: Vec<PointCloud>,
}

/// `1 / log(1/|a|)`, the scaling attached to the fiber at `t = a`.
pub fn family_scaling(a: Complex64) -> Result<f64> {
    let r = a.norm();
    if r == 0.0 {
        return Err(Error::Domain("the fiber at t = 0 is not defined".into()));
    }
    if !(r < 1.0) || !r.is_finite() {
        return Err(Error::Domain(format!("|a| must be below 1, got {r}")));
    }
    Ok(1.0 / (1.0 / r).ln())
}

fn scaled_sample(f: &LaurentPoly, rho: f64, settings: &ExperimentSettings, source: String) -> Result<PointCloud> {
    let mut cfg = SamplerConfig::new(settings.samples, settings.window.unscaled(rho), settings.seed);
    cfg.execution = settings.execution;
    cfg.source = source;
    scale_cloud(&sample_amoeba_with(f, &cfg)?, rho)
}

fn row(cloud: &PointCloud, c: &CornerLocusComplex, parameter: f64, settings: &ExperimentSettings) -> Result<DistanceRow> {
    let d = hausdorff_to_complex_parts(cloud, c, &settings.window, settings.grid, settings.execution)?;
    Ok(DistanceRow {
        parameter,
        distance: d.value(),
        directed_forward: d.forward,
        directed_backward: d.backward,
    })
}

fn check_decreasing(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() || values.windows(2).any(|w| !(w[1] < w[0])) || values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidArgument(format!("{what} must be positive and strictly decreasing")));
    }
    Ok(())
}

/// Scaled amoebae of `f` at each `rho` against the trivial-valuation corner locus.
pub fn converge_a(f: &LaurentPoly, rhos: &[f64], settings: &ExperimentSettings) -> Result<ConvergenceRun> {
    check_decreasing(rhos, "rho list")?;
    let complex = f.trivial_tropicalize()?.corner_locus_2d()?;
    let mut rows = Vec::new();
    let mut clouds = Vec::new();
    for &rho in rhos {
        let cloud = scaled_sample(f, rho, settings, format!("rho={rho}"))?;
        rows.push(row(&cloud, &complex, rho, settings)?);
        clouds.push(cloud);
    }
    Ok(ConvergenceRun { complex, rows, clouds })
}

/// Fibers `F_a` scaled by `1 / log(1/|a|)` against the corner locus of the
/// t-adic valuation of `F`. The `parameter` column holds `|a|`.
pub fn family_b(family: &TLaurentPoly, values: &[Complex64], settings: &ExperimentSettings) -> Result<ConvergenceRun> {
    let moduli: Vec<f64> = values.iter().map(|a| a.norm()).collect();
    check_decreasing(&moduli, "|a| list")?;
    let complex = family.t_valuation()?.corner_locus_2d()?;
    let mut rows = Vec::new();
    let mut clouds = Vec::new();
    for &a in values {
        let rho = family_scaling(a)?;
        let f = family.specialize(a)?;
        let cloud = scaled_sample(&f, rho, settings, format!("a={a}"))?;
        rows.push(row(&cloud, &complex, a.norm(), settings)?);
        clouds.push(cloud);
    }
    Ok(ConvergenceRun { complex, rows, clouds })
}

/// One panel of the compactified picture: the scaled amoeba of a fiber and
/// the tropical curve, both pushed into the polytope.
#[derive(Clone, Debug)]
pub struct MomentPanel {
    pub parameter: Complex64,
    pub scaling: f64,
    pub amoeba: PointCloud,
    /// Polylines, one per cell of the corner locus.
    pub curve: Vec<Vec<[f64; 2]>>,
}

/// Compactified scaled amoebae of the fibers at each `a`, with the
/// compactified tropical curve of the family. Rays are followed out to
/// `reach` in scaled coordinates.
pub fn moment_panels(
    family: &TLaurentPoly,
    values: &[Complex64],
    polytope: &LatticePolytope,
    settings: &ExperimentSettings,
    reach: f64,
) -> Result<Vec<MomentPanel>> {
    if polytope.dim() != 2 || family.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: if polytope.dim() != 2 { polytope.dim() } else { family.dim() },
        });
    }
    let complex = family.t_valuation()?.corner_locus_2d()?;
    let curve = complex
        .sample_extended(reach, reach / 400.0)
        .into_iter()
        .map(|path| {
            path.into_iter()
                .map(|p| {
                    let q = trop_moment(polytope, &p)?;
                    Ok([q[0], q[1]])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    values
        .iter()
        .map(|&a| {
            let rho = family_scaling(a)?;
            let cloud = scaled_sample(&family.specialize(a)?, rho, settings, format!("a={a}"))?;
            Ok(MomentPanel {
                parameter: a,
                scaling: rho,
                amoeba: compactify_cloud(&cloud, polytope)?,
                curve: curve.clone(),
            })
        })
        .collect()
}
