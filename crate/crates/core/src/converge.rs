//! Hausdorff distances, discrete Kuratowski semicontinuity checks on sampled
//! families, and log-log rate fits.

use std::fmt::Write as _;

use crate::amoeba::PointCloud;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::tropical::CornerLocusComplex;
use crate::window::Window;

/// Arclength step of the complex discretization is `diagonal / DEFAULT_COMPLEX_GRID`.
pub const DEFAULT_COMPLEX_GRID: usize = 512;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn check_pair(a: &PointCloud, b: &PointCloud) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

fn nearest(p: &[f64], b: &PointCloud) -> f64 {
    b.points().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min)
}

/// `max_{a in A} min_{b in B} |a - b|`.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    directed_hausdorff_with(a, b, Execution::default())
}

pub fn directed_hausdorff_with(a: &PointCloud, b: &PointCloud, execution: Execution) -> Result<f64> {
    check_pair(a, b)?;
    let points: Vec<&[f64]> = a.points().collect();
    Ok(exec::max_over(execution, &points, |p| nearest(p, b)))
}

pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    hausdorff_with(a, b, Execution::default())
}

pub fn hausdorff_with(a: &PointCloud, b: &PointCloud, execution: Execution) -> Result<f64> {
    Ok(directed_hausdorff_with(a, b, execution)?.max(directed_hausdorff_with(b, a, execution)?))
}

/// Windowed distances between a planar cloud and a corner-locus complex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexDistance {
    /// `max_{a in A ∩ W} d(a, C ∩ W)`.
    pub forward: f64,
    /// `max_{c in C ∩ W} d(c, A)` over the discretized complex.
    pub backward: f64,
}

impl ComplexDistance {
    pub fn value(&self) -> f64 {
        self.forward.max(self.backward)
    }
}

/// Windowed Hausdorff distance between `A` and `C`; the complex is
/// discretized at arclength steps of `diagonal(W) / grid`.
pub fn hausdorff_to_complex(a: &PointCloud, c: &CornerLocusComplex, window: &Window, grid: usize) -> Result<f64> {
    Ok(hausdorff_to_complex_parts(a, c, window, grid, Execution::default())?.value())
}

pub fn hausdorff_to_complex_parts(
    a: &PointCloud,
    c: &CornerLocusComplex,
    window: &Window,
    grid: usize,
    execution: Execution,
) -> Result<ComplexDistance> {
    if a.dim() != 2 || window.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: if a.dim() != 2 { a.dim() } else { window.dim() },
        });
    }
    if grid == 0 {
        return Err(Error::InvalidArgument("complex grid must be positive".into()));
    }
    let pieces = c.clipped_pieces(window);
    if pieces.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let inside = a.restricted(window);
    if inside.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let pts: Vec<&[f64]> = inside.points().collect();
    let forward = exec::max_over(execution, &pts, |p| c.distance_to_pieces(&pieces, [p[0], p[1]]));
    let samples = c.sample(window, window.diagonal() / grid as f64);
    let backward = exec::max_over(execution, &samples, |s| nearest(s, a));
    Ok(ComplexDistance { forward, backward })
}

/// Parameters `b` with a point cloud `S_b` each.
#[derive(Clone, Debug)]
pub struct FamilySample {
    params: Vec<f64>,
    clouds: Vec<PointCloud>,
}

impl FamilySample {
    pub fn new(members: Vec<(f64, PointCloud)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("family needs at least one member".into()));
        }
        let (params, clouds): (Vec<f64>, Vec<PointCloud>) = members.into_iter().unzip();
        let up = params.windows(2).all(|w| w[0] < w[1]);
        let down = params.windows(2).all(|w| w[0] > w[1]);
        if !(up || down) || params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("family parameters must be strictly monotone".into()));
        }
        let dim = clouds[0].dim();
        if let Some(c) = clouds.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: c.dim(),
            });
        }
        Ok(FamilySample { params, clouds })
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn cloud(&self, i: usize) -> &PointCloud {
        &self.clouds[i]
    }

    fn neighbours(&self, b0_index: usize, delta: f64) -> impl Iterator<Item = usize> + '_ {
        let b0 = self.params[b0_index];
        (0..self.len()).filter(move |&i| i != b0_index && (self.params[i] - b0).abs() < delta)
    }

    fn origin(&self) -> Vec<f64> {
        let dim = self.clouds[0].dim();
        let mut lo = vec![f64::INFINITY; dim];
        for c in &self.clouds {
            for p in c.points() {
                for (l, x) in lo.iter_mut().zip(p) {
                    *l = l.min(*x);
                }
            }
        }
        lo
    }
}

fn check_family_args(f: &FamilySample, b0_index: usize, eps: f64, delta: f64) -> Result<()> {
    if b0_index >= f.len() {
        return Err(Error::InvalidArgument(format!("base index {b0_index} out of range")));
    }
    if !(eps > 0.0 && delta > 0.0) {
        return Err(Error::InvalidArgument("epsilon and delta must be positive".into()));
    }
    Ok(())
}

/// Grid points of spacing `h` anchored at `origin` within distance `r` of `p`.
fn grid_points_near(p: &[f64], origin: &[f64], h: f64, r: f64) -> Vec<Vec<f64>> {
    let ranges: Vec<(i64, i64)> = p
        .iter()
        .zip(origin)
        .map(|(x, o)| (((x - r - o) / h).floor() as i64, ((x + r - o) / h).ceil() as i64))
        .collect();
    let mut out = vec![Vec::new()];
    for (i, (lo, hi)) in ranges.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<f64>| {
                (*lo..=*hi).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(origin[i] + k as f64 * h);
                    v
                })
            })
            .collect();
    }
    out.retain(|y| dist(y, p) <= r);
    out
}

/// Discrete upper semicontinuity at `b0`: on the grid of spacing `eps / 2`,
/// no fiber with `|b - b0| < delta` meets the `eps / 2`-ball of a grid point
/// lying farther than `eps` from `S_{b0}`.
pub fn kuratowski_usc_check(f: &FamilySample, b0_index: usize, eps: f64, delta: f64) -> Result<bool> {
    check_family_args(f, b0_index, eps, delta)?;
    let base = f.cloud(b0_index);
    let origin = f.origin();
    let h = eps / 2.0;
    for i in f.neighbours(b0_index, delta) {
        let cloud = f.cloud(i);
        let pts: Vec<&[f64]> = cloud.points().collect();
        let worst = exec::max_over(Execution::default(), &pts, |s| {
            let far = grid_points_near(s, &origin, h, h)
                .iter()
                .any(|y| base.is_empty() || nearest(y, base) > eps);
            if far {
                1.0
            } else {
                0.0
            }
        });
        if worst > 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Discrete lower semicontinuity at `b0`: `d(S_{b0} -> S_b) <= eps` for all
/// fibers with `|b - b0| < delta`.
pub fn kuratowski_lsc_check(f: &FamilySample, b0_index: usize, eps: f64, delta: f64) -> Result<bool> {
    check_family_args(f, b0_index, eps, delta)?;
    let base = f.cloud(b0_index);
    if base.is_empty() {
        return Ok(true);
    }
    for i in f.neighbours(b0_index, delta) {
        if f.cloud(i).is_empty() || directed_hausdorff(base, f.cloud(i))? > eps {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least-squares line `log d = slope * log rho + intercept`.
pub fn rate_fit(rhos: &[f64], ds: &[f64]) -> Result<(f64, f64)> {
    if rhos.len() != ds.len() {
        return Err(Error::DimensionMismatch {
            expected: rhos.len(),
            found: ds.len(),
        });
    }
    if rhos.len() < 3 {
        return Err(Error::InvalidArgument("rate fit needs at least three points".into()));
    }
    if rhos.iter().chain(ds).any(|x| !(*x > 0.0) || !x.is_finite()) {
        return Err(Error::Domain("rate fit needs positive finite entries".into()));
    }
    let xs: Vec<f64> = rhos.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = ds.iter().map(|d| d.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("rate fit needs distinct parameters".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// One row of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceRow {
    pub parameter: f64,
    pub distance: f64,
    pub directed_forward: f64,
    pub directed_backward: f64,
}

pub fn distance_table_csv(rows: &[DistanceRow]) -> String {
    let mut s = String::from("parameter,distance,directed_forward,directed_backward\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            r.parameter, r.distance, r.directed_forward, r.directed_backward
        );
    }
    s
}

/// Whether the distances strictly decrease down the table.
pub fn strictly_decreasing(rows: &[DistanceRow]) -> bool {
    rows.windows(2).all(|w| w[1].distance < w[0].distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Exponent;
    use crate::tropical::TropicalPolynomial;

    fn cloud(pts: &[[f64; 2]]) -> PointCloud {
        PointCloud::from_points(2, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn trop_line() -> CornerLocusComplex {
        TropicalPolynomial::new(
            2,
            [([1, 0], 0.0), ([0, 1], 0.0), ([0, 0], 0.0)].map(|(m, c)| (Exponent::from(m), c)),
        )
        .unwrap()
        .corner_locus_2d()
        .unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        let a = cloud(&[[0.0, 0.0], [1.0, 0.5]]);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&cloud(&[[0.0, 0.0]]), &cloud(&[[3.0, 4.0]])).unwrap(), 5.0);
        let two = cloud(&[[0.0, 0.0], [1.0, 0.0]]);
        let one = cloud(&[[0.0, 0.0]]);
        assert_eq!(hausdorff(&two, &one).unwrap(), 1.0);
        assert_eq!(directed_hausdorff(&one, &two).unwrap(), 0.0);
        let empty = PointCloud::from_points(2, vec![]).unwrap();
        assert_eq!(hausdorff(&empty, &one).unwrap_err(), Error::EmptyCloud);
    }

    #[test]
    fn complex_distance_examples() {
        let c = trop_line();
        let w = Window::cube(2, -5.0, 5.0).unwrap();
        let on_line = c.sample(&w, 0.001);
        let a = cloud(&on_line);
        let d = hausdorff_to_complex(&a, &c, &w, 512).unwrap();
        assert!(d < 0.001, "{d}");

        // a single point: forward is its distance to the line, backward is
        // the distance from the farthest clipped complex point to it
        let a = cloud(&[[1.0, 1.0]]);
        let parts = hausdorff_to_complex_parts(&a, &c, &w, 512, Execution::Serial).unwrap();
        assert!((parts.forward - 1.0).abs() < 1e-12);
        assert!((parts.backward - 72f64.sqrt()).abs() < 1e-9);

        let outside = cloud(&[[9.0, 9.0]]);
        assert_eq!(
            hausdorff_to_complex(&outside, &c, &w, 512).unwrap_err(),
            Error::EmptyCloud
        );
    }

    #[test]
    fn complex_grid_refinement() {
        let c = trop_line();
        let w = Window::cube(2, -2.0, 2.0).unwrap();
        let a = cloud(&[[0.3, 0.1], [-1.0, -1.2], [1.5, 0.05], [0.0, 1.7], [0.02, -0.5]]);
        for grid in [8usize, 16, 64, 256] {
            let d1 = hausdorff_to_complex(&a, &c, &w, grid).unwrap();
            let d2 = hausdorff_to_complex(&a, &c, &w, 2 * grid).unwrap();
            assert!((d1 - d2).abs() <= w.diagonal() / grid as f64 + 1e-12);
        }
    }

    fn family(members: Vec<(f64, Vec<[f64; 2]>)>) -> FamilySample {
        FamilySample::new(members.into_iter().map(|(b, p)| (b, cloud(&p))).collect()).unwrap()
    }

    #[test]
    fn kuratowski_constant_family() {
        let pts = vec![[0.0, 0.0], [1.0, 0.3], [-0.5, 2.0]];
        let f = family((0..5).map(|i| (i as f64 * 0.1, pts.clone())).collect());
        for eps in [0.01, 0.1, 1.0] {
            for delta in [0.05, 0.15, 1.0] {
                assert!(kuratowski_usc_check(&f, 2, eps, delta).unwrap());
                assert!(kuratowski_lsc_check(&f, 2, eps, delta).unwrap());
            }
        }
    }

    #[test]
    fn kuratowski_moving_point() {
        let f = family((-10..=10).map(|i| (i as f64 * 0.01, vec![[i as f64 * 0.01, 0.0]])).collect());
        let eps = 0.1;
        for delta in [0.01, 0.03, 0.049] {
            assert!(kuratowski_usc_check(&f, 10, eps, delta).unwrap());
            assert!(kuratowski_lsc_check(&f, 10, eps, delta).unwrap());
        }
    }

    #[test]
    fn kuratowski_violations() {
        // an extra far point appears away from b0
        let mut members: Vec<(f64, Vec<[f64; 2]>)> = (0..5).map(|i| (i as f64 * 0.1, vec![[0.0, 0.0]])).collect();
        members[3].1.push([2.0, 2.0]);
        let f = family(members);
        assert!(!kuratowski_usc_check(&f, 2, 0.1, 0.15).unwrap());
        assert!(kuratowski_lsc_check(&f, 2, 0.1, 0.15).unwrap());

        // a component disappears next to b0
        let mut members: Vec<(f64, Vec<[f64; 2]>)> =
            (0..5).map(|i| (i as f64 * 0.1, vec![[0.0, 0.0], [2.0, 2.0]])).collect();
        members[3].1.pop();
        let f = family(members);
        assert!(!kuratowski_lsc_check(&f, 2, 0.1, 0.15).unwrap());
        assert!(kuratowski_usc_check(&f, 2, 0.1, 0.15).unwrap());
    }

    #[test]
    fn family_rejects_non_monotone_parameters() {
        let p = vec![[0.0, 0.0]];
        assert!(FamilySample::new(vec![(0.0, cloud(&p)), (1.0, cloud(&p)), (0.5, cloud(&p))]).is_err());
        assert!(FamilySample::new(vec![(1.0, cloud(&p)), (0.5, cloud(&p))]).is_ok());
    }

    #[test]
    fn lsc_is_monotone_in_eps() {
        let f = family(vec![(0.0, vec![[0.0, 0.0], [1.0, 1.0]]), (0.1, vec![[0.2, 0.0]]), (0.2, vec![[1.0, 1.3]])]);
        let mut seen = false;
        for eps in [0.1, 0.2, 0.5, 1.0, 1.5, 2.0] {
            let ok = kuratowski_lsc_check(&f, 0, eps, 1.0).unwrap();
            assert!(!seen || ok);
            seen |= ok;
        }
        assert!(seen);
    }

    #[test]
    fn rate_fit_examples() {
        let rhos = [0.2, 0.1, 0.05];
        let (s, i) = rate_fit(&rhos, &rhos).unwrap();
        assert!((s - 1.0).abs() < 1e-12 && i.abs() < 1e-12);
        let ds: Vec<f64> = rhos.iter().map(|r| 2.0 * r).collect();
        let (s, i) = rate_fit(&rhos, &ds).unwrap();
        assert!((s - 1.0).abs() < 1e-12 && (i - 2f64.ln()).abs() < 1e-12);
        assert!(rate_fit(&rhos, &[1.0, 0.0, 1.0]).is_err());
        assert!(rate_fit(&rhos[..2], &rhos[..2]).is_err());
    }

    #[test]
    fn table_csv() {
        let rows = [
            DistanceRow {
                parameter: 0.2,
                distance: 0.3,
                directed_forward: 0.3,
                directed_backward: 0.1,
            },
            DistanceRow {
                parameter: 0.1,
                distance: 0.2,
                directed_forward: 0.2,
                directed_backward: 0.1,
            },
        ];
        assert!(strictly_decreasing(&rows));
        assert_eq!(
            distance_table_csv(&rows),
            "parameter,distance,directed_forward,directed_backward\n0.2,0.3,0.3,0.1\n0.1,0.2,0.2,0.1\n"
        );
    }
}
