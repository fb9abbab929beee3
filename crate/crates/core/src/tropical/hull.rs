//! Lower convex hull of lifted support points `(m_1, m_2, c_m)`.
//!
//! Facets are found by brute force over triples, which is plenty at the
//! support sizes of plane curves of small degree. Integer lifts use exact
//! `i128` predicates; real lifts use a relative tie tolerance.

use std::cmp::Ordering;
use std::collections::BTreeSet;

/// Float tie tolerance in hull predicates (relative to the magnitudes involved).
pub(crate) const HULL_TIE_TOL: f64 = 1e-12;

/// Orientation predicates over a fixed set of lifted points.
pub(crate) trait LiftPredicates {
    fn len(&self) -> usize;

    /// Sign of the z-component of `(p_j - p_i) x (p_k - p_i)`, i.e. the planar
    /// orientation of the projected triple.
    fn orient2(&self, i: usize, j: usize, k: usize) -> Ordering;

    /// Sign of `n . (p_q - p_i)` with `n = (p_j - p_i) x (p_k - p_i)`.
    fn side(&self, i: usize, j: usize, k: usize, q: usize) -> Ordering;

    /// Slope `w` of the plane through the triple, written as
    /// `c = const - <w, m>`. Requires `orient2 != Equal`.
    fn plane_slope(&self, i: usize, j: usize, k: usize) -> [f64; 2];

    /// Sign of the 2-D cross product of `(q_j - q_i)` and `(q_k - q_i)` for
    /// the planar points `(t, c)` used by the collinear case.
    fn orient_line(&self, t: &[i64], i: usize, j: usize, k: usize) -> Ordering;
}

pub(crate) struct ExactLifts {
    pub pts: Vec<[i64; 3]>,
}

fn cross(a: [i128; 3], b: [i128; 3]) -> [i128; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl ExactLifts {
    fn diff(&self, a: usize, b: usize) -> [i128; 3] {
        let (p, q) = (self.pts[a], self.pts[b]);
        [
            (q[0] - p[0]) as i128,
            (q[1] - p[1]) as i128,
            (q[2] - p[2]) as i128,
        ]
    }

    fn normal(&self, i: usize, j: usize, k: usize) -> [i128; 3] {
        cross(self.diff(i, j), self.diff(i, k))
    }
}

impl LiftPredicates for ExactLifts {
    fn len(&self) -> usize {
        self.pts.len()
    }

    fn orient2(&self, i: usize, j: usize, k: usize) -> Ordering {
        self.normal(i, j, k)[2].cmp(&0)
    }

    fn side(&self, i: usize, j: usize, k: usize, q: usize) -> Ordering {
        let n = self.normal(i, j, k);
        let d = self.diff(i, q);
        (n[0] * d[0] + n[1] * d[1] + n[2] * d[2]).cmp(&0)
    }

    fn plane_slope(&self, i: usize, j: usize, k: usize) -> [f64; 2] {
        let n = self.normal(i, j, k);
        [n[0] as f64 / n[2] as f64, n[1] as f64 / n[2] as f64]
    }

    fn orient_line(&self, t: &[i64], i: usize, j: usize, k: usize) -> Ordering {
        let (ti, tj, tk) = (t[i] as i128, t[j] as i128, t[k] as i128);
        let (ci, cj, ck) = (
            self.pts[i][2] as i128,
            self.pts[j][2] as i128,
            self.pts[k][2] as i128,
        );
        ((tj - ti) * (ck - ci) - (cj - ci) * (tk - ti)).cmp(&0)
    }
}

pub(crate) struct FloatLifts {
    pub pts: Vec<[f64; 3]>,
}

fn tol_sign(v: f64, scale: f64) -> Ordering {
    if v.abs() <= HULL_TIE_TOL * scale.max(f64::MIN_POSITIVE) {
        Ordering::Equal
    } else if v > 0.0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl FloatLifts {
    fn diff(&self, a: usize, b: usize) -> [f64; 3] {
        let (p, q) = (self.pts[a], self.pts[b]);
        [q[0] - p[0], q[1] - p[1], q[2] - p[2]]
    }

    fn normal(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        let (a, b) = (self.diff(i, j), self.diff(i, k));
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl LiftPredicates for FloatLifts {
    fn len(&self) -> usize {
        self.pts.len()
    }

    fn orient2(&self, i: usize, j: usize, k: usize) -> Ordering {
        // projections are integer points, so this is exact
        let (a, b) = (self.diff(i, j), self.diff(i, k));
        (a[0] * b[1] - a[1] * b[0]).partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }

    fn side(&self, i: usize, j: usize, k: usize, q: usize) -> Ordering {
        let n = self.normal(i, j, k);
        let d = self.diff(i, q);
        let v = n[0] * d[0] + n[1] * d[1] + n[2] * d[2];
        tol_sign(v, norm3(n) * norm3(d))
    }

    fn plane_slope(&self, i: usize, j: usize, k: usize) -> [f64; 2] {
        let n = self.normal(i, j, k);
        [n[0] / n[2], n[1] / n[2]]
    }

    fn orient_line(&self, t: &[i64], i: usize, j: usize, k: usize) -> Ordering {
        let (ti, tj, tk) = (t[i] as f64, t[j] as f64, t[k] as f64);
        let (ci, cj, ck) = (self.pts[i][2], self.pts[j][2], self.pts[k][2]);
        let (a, b) = ([tj - ti, cj - ci], [tk - ti, ck - ci]);
        let v = a[0] * b[1] - a[1] * b[0];
        tol_sign(v, a[0].hypot(a[1]) * b[0].hypot(b[1]))
    }
}

/// A lower facet: the support indices lying on it and the point `w` dual to it.
#[derive(Debug, Clone)]
pub(crate) struct LowerFacet {
    pub points: BTreeSet<usize>,
    pub slope: [f64; 2],
}

/// All lower facets of the lifted point set. Assumes the projections are
/// not all collinear.
pub(crate) fn lower_facets<P: LiftPredicates>(lifts: &P) -> Vec<LowerFacet> {
    let n = lifts.len();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut facets = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (a, b, c) = match lifts.orient2(i, j, k) {
                    Ordering::Equal => continue,
                    Ordering::Greater => (i, j, k),
                    Ordering::Less => (i, k, j),
                };
                let mut on_plane = BTreeSet::from([i, j, k]);
                let mut lower = true;
                for q in 0..n {
                    if q == i || q == j || q == k {
                        continue;
                    }
                    match lifts.side(a, b, c, q) {
                        Ordering::Less => {
                            lower = false;
                            break;
                        }
                        Ordering::Equal => {
                            on_plane.insert(q);
                        }
                        Ordering::Greater => {}
                    }
                }
                if lower && seen.insert(on_plane.clone()) {
                    facets.push(LowerFacet {
                        points: on_plane,
                        slope: lifts.plane_slope(a, b, c),
                    });
                }
            }
        }
    }
    facets
}

/// Counter-clockwise convex hull of integer planar points (indices into
/// `pts`), without collinear intermediate vertices.
pub(crate) fn convex_polygon(pts: &[[i64; 2]], idx: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = idx.to_vec();
    order.sort_by_key(|&i| (pts[i][0], pts[i][1]));
    order.dedup_by_key(|i| pts[*i]);
    if order.len() < 3 {
        return order;
    }
    let cross = |o: usize, a: usize, b: usize| -> i128 {
        let (o, a, b) = (pts[o], pts[a], pts[b]);
        (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for &p in &order {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in order.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Lower chain of planar points `(t_i, c_i)` with distinct `t_i`, as index
/// pairs of consecutive chain vertices (collinear middles dropped).
pub(crate) fn lower_chain<P: LiftPredicates>(lifts: &P, t: &[i64]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by_key(|&i| t[i]);
    let mut chain: Vec<usize> = Vec::new();
    for &p in &order {
        while chain.len() >= 2
            && lifts.orient_line(t, chain[chain.len() - 2], chain[chain.len() - 1], p) != Ordering::Greater
        {
            chain.pop();
        }
        chain.push(p);
    }
    chain.windows(2).map(|w| (w[0], w[1])).collect()
}
