//! Lattice polytopes and the moment maps onto them.
//!
//! `mu(z) = sum |z^m| m / sum |z^m|` and its tropical counterpart
//! `nu(w) = mu(exp(-w))`; both weight vectors are built in log space with
//! the maximum subtracted, so large arguments cannot overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amoeba::{CloudMeta, PointCloud};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};

/// A finite set of lattice points spanning `R^n` affinely, with the extreme
/// points of its convex hull.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeDoc", into = "PolytopeDoc")]
pub struct LatticePolytope {
    dim: usize,
    points: Vec<Vec<i64>>,
    vertices: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeDoc {
    lattice_points: Vec<Vec<i64>>,
}

impl TryFrom<PolytopeDoc> for LatticePolytope {
    type Error = Error;
    fn try_from(doc: PolytopeDoc) -> Result<Self> {
        LatticePolytope::new(doc.lattice_points)
    }
}

impl From<LatticePolytope> for PolytopeDoc {
    fn from(p: LatticePolytope) -> Self {
        PolytopeDoc {
            lattice_points: p.points,
        }
    }
}

/// Determinant by fraction-free elimination.
fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, x| gcd(g, x.abs()));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Normal of the hyperplane through `base` spanned by the difference vectors
/// `diffs` (n - 1 of them), as cofactors.
fn normal(diffs: &[Vec<i128>], n: usize) -> Vec<i128> {
    (0..n)
        .map(|i| {
            let minor: Vec<Vec<i128>> = diffs
                .iter()
                .map(|d| d.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect())
                .collect();
            let s = if i % 2 == 0 { 1 } else { -1 };
            s * det(minor)
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

impl LatticePolytope {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.len());
        if dim == 0 {
            return Err(Error::InvalidArgument("polytope needs nonempty lattice points".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        let mut points = points;
        points.sort();
        points.dedup();
        let wide: Vec<Vec<i128>> = points.iter().map(|p| p.iter().map(|&x| x as i128).collect()).collect();
        let diffs: Vec<Vec<i128>> = wide[1..]
            .iter()
            .map(|p| p.iter().zip(&wide[0]).map(|(a, b)| a - b).collect())
            .collect();
        if rank(&diffs) < dim {
            return Err(Error::InvalidArgument(format!(
                "lattice points do not span R^{dim} affinely"
            )));
        }
        // facets: hyperplanes through dim affinely independent points with
        // every point on one side
        let mut facets: Vec<Vec<i128>> = Vec::new();
        for s in subsets(wide.len(), dim) {
            let base = &wide[s[0]];
            let d: Vec<Vec<i128>> = s[1..]
                .iter()
                .map(|&i| wide[i].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            let nrm = normal(&d, dim);
            if nrm.iter().all(|x| *x == 0) {
                continue;
            }
            let off: i128 = nrm.iter().zip(base).map(|(a, b)| a * b).sum();
            let sides: Vec<i128> = wide
                .iter()
                .map(|p| nrm.iter().zip(p).map(|(a, b)| a * b).sum::<i128>() - off)
                .collect();
            if sides.iter().all(|x| *x >= 0) || sides.iter().all(|x| *x <= 0) {
                facets.push(nrm.into_iter().chain(std::iter::once(off)).collect());
            }
        }
        let vertices = (0..wide.len())
            .filter(|&i| {
                let p = &wide[i];
                let tight: Vec<Vec<i128>> = facets
                    .iter()
                    .filter(|f| f[..dim].iter().zip(p).map(|(a, b)| a * b).sum::<i128>() == f[dim])
                    .map(|f| f[..dim].to_vec())
                    .collect();
                rank(&tight) == dim
            })
            .collect();
        Ok(LatticePolytope { dim, points, vertices })
    }

    /// `d` times the standard simplex in `R^dim`, with every lattice point.
    pub fn dilated_simplex(dim: usize, d: u32) -> Result<Self> {
        if dim == 0 || d == 0 {
            return Err(Error::InvalidArgument("simplex needs positive dimension and degree".into()));
        }
        let mut pts = vec![Vec::new()];
        for _ in 0..dim {
            pts = pts
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    let used: i64 = p.iter().sum();
                    (0..=(d as i64 - used)).map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        LatticePolytope::new(pts)
    }

    pub fn unit_triangle() -> Self {
        LatticePolytope::dilated_simplex(2, 1).expect("unit triangle is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lattice_points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn vertices(&self) -> Vec<&[i64]> {
        self.vertices.iter().map(|&i| self.points[i].as_slice()).collect()
    }

    /// Convex combination of the lattice points with weights `exp(logs)`.
    fn barycenter(&self, logs: &[f64]) -> Vec<f64> {
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = weights.iter().sum();
        let mut out = vec![0.0; self.dim];
        for (p, w) in self.points.iter().zip(&weights) {
            let w = w / total;
            for (o, x) in out.iter_mut().zip(p) {
                *o += w * *x as f64;
            }
        }
        out
    }

    fn log_dot(&self, v: &[f64], sign: f64) -> Vec<f64> {
        self.points
            .iter()
            .map(|m| sign * m.iter().zip(v).map(|(a, b)| *a as f64 * b).sum::<f64>())
            .collect()
    }
}

/// `mu(z) = sum_m |z^m| m / sum_m |z^m|`.
pub fn moment_map(p: &LatticePolytope, z: &[Complex64]) -> Result<Vec<f64>> {
    if z.len() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: z.len(),
        });
    }
    if z.iter().any(|c| *c == Complex64::new(0.0, 0.0) || !c.is_finite()) {
        return Err(Error::Domain("moment map needs nonzero finite coordinates".into()));
    }
    let logmod: Vec<f64> = z.iter().map(|c| c.norm().ln()).collect();
    Ok(p.barycenter(&p.log_dot(&logmod, 1.0)))
}

/// `nu(w) = sum_m exp(-<m, w>) m / sum_m exp(-<m, w>)`.
pub fn trop_moment(p: &LatticePolytope, w: &[f64]) -> Result<Vec<f64>> {
    if w.len() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: w.len(),
        });
    }
    Ok(p.barycenter(&p.log_dot(w, -1.0)))
}

/// Pushes a cloud of log-coordinates into the polytope through `nu`.
pub fn compactify_cloud(cloud: &PointCloud, p: &LatticePolytope) -> Result<PointCloud> {
    if cloud.dim() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: cloud.dim(),
        });
    }
    let pts = exec::map_indexed(Execution::default(), cloud.len(), |i| {
        p.barycenter(&p.log_dot(cloud.point(i), -1.0))
    });
    let meta = CloudMeta {
        source: format!("compactified:{}", cloud.meta.source),
        ..cloud.meta.clone()
    };
    PointCloud::new(p.dim, pts, meta)
}
