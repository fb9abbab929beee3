//! The subcommands. Each writes its tables and figures into the output
//! directory and reports whether its pass criterion held.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use log::{info, warn};
use num_complex::Complex64;
use tropamoeba::amoeba::{sample_amoeba, scale_cloud, PointCloud};
use tropamoeba::converge::{distance_table_csv, rate_fit, strictly_decreasing, DistanceRow, DEFAULT_COMPLEX_GRID};
use tropamoeba::experiment::{converge_a, family_b, family_scaling, moment_panels, ConvergenceRun, ExperimentSettings};
use tropamoeba::hybrid::{polycircle_limit_report_with, DEFAULT_PHASE_SAMPLES};
use tropamoeba::io::{parse_polynomial, parse_polytope, write_cloud_csv, write_complex, PolyInput};
use tropamoeba::toric::{trop_moment, LatticePolytope};
use tropamoeba::tropical::CornerLocusComplex;
use tropamoeba::Window;

use crate::config::Settings;
use crate::svg::Plot;

/// Largest number of cloud points drawn per panel.
const MAX_PLOTTED: usize = 4000;
const DEFAULT_RHOS: [f64; 4] = [0.2, 0.1, 0.05, 0.02];
const POLYCIRCLE_SLACK: f64 = 0.1;

/// Whether the experiment met its criterion.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed(String),
}

fn load_poly(s: &Settings) -> Result<PolyInput> {
    let path = s.poly.as_ref().ok_or_else(|| anyhow!("no polynomial given (use --poly)"))?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_polynomial(&text).with_context(|| format!("in {}", path.display()))
}

fn write(out: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let path = out.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn write_plot(out: &Path, stem: &str, plot: &Plot) -> Result<()> {
    write(out, &format!("{stem}.svg"), &plot.to_svg())?;
    write(out, &format!("{stem}_plot.csv"), &plot.to_csv())
}

fn settings_for(s: &Settings) -> Result<ExperimentSettings> {
    let (lo, hi) = s.window.unwrap_or((-2.0, 2.0));
    Ok(ExperimentSettings {
        samples: s.samples.unwrap_or(tropamoeba::experiment::DEFAULT_SAMPLES),
        window: Window::cube(2, lo, hi)?,
        seed: s.seed,
        grid: s.grid.unwrap_or(DEFAULT_COMPLEX_GRID),
        ..ExperimentSettings::default()
    })
}

fn draw_complex(plot: &mut Plot, c: &CornerLocusComplex, window: &Window, layer: &str) {
    for (a, b) in c.clipped_pieces(window) {
        plot.path(layer, vec![a, b]);
    }
    for v in &c.vertices {
        if window.contains(v) {
            plot.marker(layer, *v);
        }
    }
}

fn draw_cloud(plot: &mut Plot, cloud: &PointCloud, window: &Window, layer: &str) {
    for p in cloud.restricted(window).points().take(MAX_PLOTTED) {
        plot.point(layer, [p[0], p[1]]);
    }
}

fn plot_box(w: &Window) -> ((f64, f64), (f64, f64)) {
    ((w.lo()[0], w.hi()[0]), (w.lo()[1], w.hi()[1]))
}

pub fn trop(s: &Settings) -> Result<Outcome> {
    let trop = match load_poly(s)? {
        PolyInput::Plain(f) => f.trivial_tropicalize()?,
        PolyInput::Family(f) => f.t_valuation()?,
    };
    let complex = trop.corner_locus_2d()?;
    let window = match s.window {
        Some((lo, hi)) => Window::cube(2, lo, hi)?,
        None => {
            let reach = complex
                .vertices
                .iter()
                .flat_map(|v| v.iter().map(|x| x.abs()))
                .fold(2.0, f64::max);
            let r = (reach + 1.0).ceil();
            Window::cube(2, -r, r)?
        }
    };
    write(&s.out, "trop.json", &write_complex(&complex))?;
    let (x, y) = plot_box(&window);
    let mut plot = Plot::new(x, y, "corner locus");
    draw_complex(&mut plot, &complex, &window, "complex");
    write_plot(&s.out, "trop", &plot)?;
    info!(
        "{} vertices, {} segments, {} rays",
        complex.vertices.len(),
        complex.segments.len(),
        complex.rays.len()
    );
    Ok(Outcome::Passed)
}

pub fn amoeba(s: &Settings, scale: Option<f64>) -> Result<Outcome> {
    let f = load_poly(s)?.into_plain(s.at)?;
    let (lo, hi) = s.window.unwrap_or((-6.0, 6.0));
    let window = Window::cube(f.dim(), lo, hi)?;
    let mut cloud = sample_amoeba(&f, s.samples.unwrap_or(tropamoeba::experiment::DEFAULT_SAMPLES), &window, s.seed)?;
    if cloud.diagnostics.failed_samples > 0 || cloud.diagnostics.rejected_roots > 0 {
        warn!(
            "{} samples failed, {} roots rejected",
            cloud.diagnostics.failed_samples, cloud.diagnostics.rejected_roots
        );
    }
    let mut view = window.clone();
    if let Some(rho) = scale {
        cloud = scale_cloud(&cloud, rho)?;
        view = Window::cube(f.dim(), lo * rho, hi * rho)?;
    }
    write(&s.out, "amoeba.csv", &write_cloud_csv(&cloud))?;
    if f.dim() == 2 {
        let (x, y) = plot_box(&view);
        let mut plot = Plot::new(x, y, "amoeba");
        draw_cloud(&mut plot, &cloud, &view, "amoeba");
        write_plot(&s.out, "amoeba", &plot)?;
    }
    Ok(Outcome::Passed)
}

fn report_run(s: &Settings, stem: &str, run: &ConvergenceRun, settings: &ExperimentSettings, labels: &[String]) -> Result<Outcome> {
    write(&s.out, &format!("{stem}.csv"), &distance_table_csv(&run.rows))?;
    let (x, y) = plot_box(&settings.window);
    let mut overlay = Plot::new(x, y, format!("{stem} overlay"));
    for (cloud, label) in run.clouds.iter().zip(labels) {
        draw_cloud(&mut overlay, cloud, &settings.window, label);
    }
    draw_complex(&mut overlay, &run.complex, &settings.window, "complex");
    write_plot(&s.out, stem, &overlay)?;
    for (k, (cloud, label)) in run.clouds.iter().zip(labels).enumerate() {
        let mut panel = Plot::new(x, y, label.clone());
        draw_cloud(&mut panel, cloud, &settings.window, label);
        draw_complex(&mut panel, &run.complex, &settings.window, "complex");
        write_plot(&s.out, &format!("{stem}_{k}"), &panel)?;
    }
    for r in &run.rows {
        info!(
            "parameter {}: distance {:.6} (forward {:.6}, backward {:.6})",
            r.parameter, r.distance, r.directed_forward, r.directed_backward
        );
    }
    Ok(verdict(&run.rows))
}

fn verdict(rows: &[DistanceRow]) -> Outcome {
    if strictly_decreasing(rows) {
        Outcome::Passed
    } else {
        let d: Vec<String> = rows.iter().map(|r| format!("{:.6}", r.distance)).collect();
        Outcome::Failed(format!("distances are not strictly decreasing: {}", d.join(", ")))
    }
}

pub fn converge_a_cmd(s: &Settings) -> Result<Outcome> {
    let f = load_poly(s)?.into_plain(s.at)?;
    let rhos = s.rhos.clone().ok_or_else(|| anyhow!("no rho list given (use --rhos)"))?;
    let settings = settings_for(s)?;
    let run = converge_a(&f, &rhos, &settings)?;
    if rhos.len() >= 3 {
        let ds: Vec<f64> = run.rows.iter().map(|r| r.distance).collect();
        if let Ok((slope, intercept)) = rate_fit(&rhos, &ds) {
            info!("log-log rate fit: slope {slope:.4}, intercept {intercept:.4}");
        }
    }
    let labels: Vec<String> = rhos.iter().map(|r| format!("rho={r}")).collect();
    report_run(s, "converge_a", &run, &settings, &labels)
}

fn warn_large(values: &[Complex64]) {
    let bound = (-1.0f64).exp();
    for a in values {
        if a.norm() > bound {
            warn!("|a| = {} exceeds 1/e; the fiber may be far from the limit", a.norm());
        }
    }
}

pub fn family_b_cmd(s: &Settings) -> Result<Outcome> {
    let family = load_poly(s)?.into_family();
    let values = s.a_values.clone().ok_or_else(|| anyhow!("no a list given (use --as)"))?;
    warn_large(&values);
    let settings = settings_for(s)?;
    let run = family_b(&family, &values, &settings)?;
    let labels: Vec<String> = values
        .iter()
        .map(|a| Ok(format!("a={a} scale={:.6}", family_scaling(*a)?)))
        .collect::<Result<_>>()?;
    report_run(s, "family_b", &run, &settings, &labels)
}

pub fn polycircle(s: &Settings) -> Result<Outcome> {
    let f = load_poly(s)?.into_plain(s.at)?;
    let alpha = s.alpha.clone().ok_or_else(|| anyhow!("no weights given (use --alpha)"))?;
    let rhos = s.rhos.clone().unwrap_or_else(|| DEFAULT_RHOS.to_vec());
    let report = polycircle_limit_report_with(&f, &alpha, &rhos, s.phases.unwrap_or(DEFAULT_PHASE_SAMPLES), s.seed)?;
    write(&s.out, "polycircle.csv", &report.to_csv())?;
    for r in &report.rows {
        info!("rho {}: sup {:.8}, target {:.8}, error {:.3e}", r.rho, r.sup, r.target, r.abs_error);
    }
    if report.is_non_increasing(POLYCIRCLE_SLACK, f64::INFINITY) {
        Ok(Outcome::Passed)
    } else {
        Ok(Outcome::Failed("polycircle errors grow as rho decreases".into()))
    }
}

fn polytope_for(s: &Settings, family: &tropamoeba::poly::TLaurentPoly) -> Result<LatticePolytope> {
    if let Some(path) = &s.polytope {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_polytope(&text).with_context(|| format!("in {}", path.display()));
    }
    let degree = match s.degree {
        Some(d) => d,
        None => {
            let mut d = 0i64;
            for (m, _) in family.terms() {
                if !m.is_nonnegative() {
                    bail!("negative exponents: give --polytope");
                }
                d = d.max(m.total_degree());
            }
            u32::try_from(d).context("degree out of range")?
        }
    };
    Ok(LatticePolytope::dilated_simplex(family.dim(), degree)?)
}

/// Vertices of a planar polytope in counterclockwise order.
fn outline(p: &LatticePolytope) -> Vec<[f64; 2]> {
    let mut v: Vec<[f64; 2]> = p.vertices().iter().map(|v| [v[0] as f64, v[1] as f64]).collect();
    let cx = v.iter().map(|p| p[0]).sum::<f64>() / v.len() as f64;
    let cy = v.iter().map(|p| p[1]).sum::<f64>() / v.len() as f64;
    v.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.total_cmp(&tb)
    });
    v
}

pub fn moment(s: &Settings) -> Result<Outcome> {
    let family = load_poly(s)?.into_family();
    let polytope = polytope_for(s, &family)?;
    if polytope.dim() != 2 {
        bail!("moment pictures need a planar polytope, got dimension {}", polytope.dim());
    }
    let values = s.a_values.clone().ok_or_else(|| anyhow!("no a list given (use --as)"))?;
    warn_large(&values);
    let mut settings = settings_for(s)?;
    if s.window.is_none() {
        settings.window = Window::cube(2, -3.0, 3.0)?;
    }
    let panels = moment_panels(&family, &values, &polytope, &settings, 40.0)?;
    let shape = outline(&polytope);
    let (xs, ys): (Vec<f64>, Vec<f64>) = shape.iter().map(|p| (p[0], p[1])).unzip();
    let pad = 0.05 * (xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min));
    let xr = (xs.iter().cloned().fold(f64::MAX, f64::min) - pad, xs.iter().cloned().fold(f64::MIN, f64::max) + pad);
    let yr = (ys.iter().cloned().fold(f64::MAX, f64::min) - pad, ys.iter().cloned().fold(f64::MIN, f64::max) + pad);
    let center = trop_moment(&polytope, &[0.0, 0.0])?;
    for (k, panel) in panels.iter().enumerate() {
        let mut plot = Plot::new(xr, yr, format!("a={} scale={:.6}", panel.parameter, panel.scaling));
        let mut closed = shape.clone();
        closed.push(shape[0]);
        plot.polygon("polytope", closed);
        for p in panel.amoeba.points().take(MAX_PLOTTED) {
            plot.point("amoeba", [p[0], p[1]]);
        }
        for path in &panel.curve {
            plot.path("tropical", path.clone());
        }
        plot.marker("origin", [center[0], center[1]]);
        write_plot(&s.out, &format!("moment_{k}"), &plot)?;
    }
    Ok(Outcome::Passed)
}
