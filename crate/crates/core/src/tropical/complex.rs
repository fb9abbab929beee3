use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::hull::{self, LiftPredicates};
use super::TropicalPolynomial;
use crate::error::{Error, Result};
use crate::poly::Exponent;
use crate::window::Window;

/// Bounded edge between two vertices of the complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    /// Support points whose affine forms tie along this cell.
    pub tie: [Exponent; 2],
}

/// Unbounded edge leaving a vertex in a primitive integer direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub vertex: usize,
    pub direction: [i64; 2],
    pub tie: [Exponent; 2],
}

/// Vertices, segments and rays of a planar tropical curve.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CornerLocusComplex {
    pub vertices: Vec<[f64; 2]>,
    pub segments: Vec<Segment>,
    pub rays: Vec<Ray>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(v: [i64; 2]) -> [i64; 2] {
    let g = gcd(v[0], v[1]).max(1);
    [v[0] / g, v[1] / g]
}

pub(super) fn build<P: LiftPredicates>(
    lifts: &P,
    support: &[[i64; 2]],
    exps: &[Exponent],
    coeffs: &[f64],
) -> CornerLocusComplex {
    let n = support.len();
    let all_collinear = (1..n).all(|j| (1..n).all(|k| lifts.orient2(0, j, k).is_eq()));
    if all_collinear {
        return build_collinear(lifts, support, exps, coeffs);
    }

    let facets = hull::lower_facets(lifts);
    let mut cx = CornerLocusComplex::default();
    // edge (a, b) with a < b -> [(facet, off-edge point)]
    let mut edges: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (fi, facet) in facets.iter().enumerate() {
        cx.vertices.push(facet.slope);
        let idx: Vec<usize> = facet.points.iter().copied().collect();
        let poly = hull::convex_polygon(support, &idx);
        for e in 0..poly.len() {
            let (a, b) = (poly[e], poly[(e + 1) % poly.len()]);
            let off = poly[(e + 2) % poly.len()];
            edges.entry((a.min(b), a.max(b))).or_default().push((fi, off));
        }
    }
    for ((a, b), owners) in edges {
        let tie = [exps[a].clone(), exps[b].clone()];
        match owners.as_slice() {
            [(f1, _), (f2, _)] => cx.segments.push(Segment {
                start: *f1,
                end: *f2,
                tie,
            }),
            [(f, off)] => {
                let e = [support[b][0] - support[a][0], support[b][1] - support[a][1]];
                let mut d = primitive([-e[1], e[0]]);
                let q = [support[*off][0] - support[a][0], support[*off][1] - support[a][1]];
                if q[0] * d[0] + q[1] * d[1] < 0 {
                    d = [-d[0], -d[1]];
                }
                cx.rays.push(Ray {
                    vertex: *f,
                    direction: d,
                    tie,
                });
            }
            _ => unreachable!("an edge of a regular subdivision bounds at most two cells"),
        }
    }
    cx
}

fn build_collinear<P: LiftPredicates>(
    lifts: &P,
    support: &[[i64; 2]],
    exps: &[Exponent],
    coeffs: &[f64],
) -> CornerLocusComplex {
    let base = support[0];
    let far = support
        .iter()
        .find(|m| **m != base)
        .expect("support has at least two distinct points");
    let u = primitive([far[0] - base[0], far[1] - base[1]]);
    let uu = u[0] * u[0] + u[1] * u[1];
    let t: Vec<i64> = support
        .iter()
        .map(|m| ((m[0] - base[0]) * u[0] + (m[1] - base[1]) * u[1]) / uu)
        .collect();
    let perp = [-u[1], u[0]];
    let mut cx = CornerLocusComplex::default();
    for (i, j) in hull::lower_chain(lifts, &t) {
        // forms i and j tie on the line <u, w> = s
        let s = (coeffs[i] - coeffs[j]) / (t[j] - t[i]) as f64;
        let v = cx.vertices.len();
        cx.vertices.push([u[0] as f64 * s / uu as f64, u[1] as f64 * s / uu as f64]);
        let tie = [exps[i].clone(), exps[j].clone()];
        cx.rays.push(Ray {
            vertex: v,
            direction: perp,
            tie: tie.clone(),
        });
        cx.rays.push(Ray {
            vertex: v,
            direction: [-perp[0], -perp[1]],
            tie,
        });
    }
    cx
}

fn clip(p: [f64; 2], d: [f64; 2], mut t0: f64, mut t1: f64, win: &Window) -> Option<([f64; 2], [f64; 2])> {
    for i in 0..2 {
        let (lo, hi) = (win.lo()[i], win.hi()[i]);
        if d[i] == 0.0 {
            if p[i] < lo || p[i] > hi {
                return None;
            }
        } else {
            let (a, b) = ((lo - p[i]) / d[i], (hi - p[i]) / d[i]);
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            t0 = t0.max(a);
            t1 = t1.min(b);
        }
    }
    (t0 <= t1).then(|| {
        (
            [p[0] + t0 * d[0], p[1] + t0 * d[1]],
            [p[0] + t1 * d[0], p[1] + t1 * d[1]],
        )
    })
}

fn point_segment_distance(w: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let aw = [w[0] - a[0], w[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((aw[0] * ab[0] + aw[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let p = [a[0] + t * ab[0], a[1] + t * ab[1]];
    (w[0] - p[0]).hypot(w[1] - p[1])
}

impl CornerLocusComplex {
    /// Every cell intersected with the window, as closed segments.
    pub fn clipped_pieces(&self, window: &Window) -> Vec<([f64; 2], [f64; 2])> {
        let mut out = Vec::new();
        for s in &self.segments {
            let (a, b) = (self.vertices[s.start], self.vertices[s.end]);
            if let Some(piece) = clip(a, [b[0] - a[0], b[1] - a[1]], 0.0, 1.0, window) {
                out.push(piece);
            }
        }
        for r in &self.rays {
            let d = [r.direction[0] as f64, r.direction[1] as f64];
            if let Some(piece) = clip(self.vertices[r.vertex], d, 0.0, f64::INFINITY, window) {
                out.push(piece);
            }
        }
        out
    }

    /// Euclidean distance from `w` to the part of the complex inside `window`.
    pub fn distance_to(&self, w: &[f64], window: &Window) -> Result<f64> {
        if w.len() != 2 || window.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: if w.len() != 2 { w.len() } else { window.dim() },
            });
        }
        if !window.contains(w) {
            return Err(Error::InvalidArgument("query point lies outside the window".into()));
        }
        let pieces = self.clipped_pieces(window);
        if pieces.is_empty() {
            return Err(Error::EmptyComplex);
        }
        Ok(self.distance_to_pieces(&pieces, [w[0], w[1]]))
    }

    pub(crate) fn distance_to_pieces(&self, pieces: &[([f64; 2], [f64; 2])], w: [f64; 2]) -> f64 {
        pieces
            .iter()
            .map(|(a, b)| point_segment_distance(w, *a, *b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Points along every clipped cell, spaced at most `step` apart in arclength.
    pub fn sample(&self, window: &Window, step: f64) -> Vec<[f64; 2]> {
        assert!(step > 0.0, "sampling step must be positive");
        self.clipped_pieces(window)
            .into_iter()
            .flat_map(|(a, b)| sample_path(a, b, step))
            .collect()
    }

    /// Points along each cell including rays out to parameter `reach`
    /// (unclipped), for pushing through the moment map.
    pub fn sample_extended(&self, reach: f64, step: f64) -> Vec<Vec<[f64; 2]>> {
        let mut out = Vec::new();
        for s in &self.segments {
            out.push(sample_path(self.vertices[s.start], self.vertices[s.end], step));
        }
        for r in &self.rays {
            let v = self.vertices[r.vertex];
            let d = [r.direction[0] as f64, r.direction[1] as f64];
            let norm = d[0].hypot(d[1]);
            let end = [v[0] + reach * d[0] / norm, v[1] + reach * d[1] / norm];
            out.push(sample_path(v, end, step));
        }
        out
    }

    /// Checks the recorded tie pair on one interior point of every cell.
    pub fn verify_ties(&self, trop: &TropicalPolynomial, eps: f64) -> Result<bool> {
        let witnesses = self
            .segments
            .iter()
            .map(|s| {
                let (a, b) = (self.vertices[s.start], self.vertices[s.end]);
                ([(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0], &s.tie)
            })
            .chain(self.rays.iter().map(|r| {
                let v = self.vertices[r.vertex];
                ([v[0] + r.direction[0] as f64, v[1] + r.direction[1] as f64], &r.tie)
            }));
        for (p, tie) in witnesses {
            let arg = trop.argmin_support(&p, eps)?;
            if !tie.iter().all(|m| arg.contains(m)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty() && self.rays.is_empty()
    }
}

fn sample_path(a: [f64; 2], b: [f64; 2], step: f64) -> Vec<[f64; 2]> {
    let len = (b[0] - a[0]).hypot(b[1] - a[1]);
    let k = (len / step).ceil().max(1.0) as usize;
    (0..=k)
        .map(|i| {
            let t = i as f64 / k as f64;
            [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::tests::{line, product_family, trop};
    use proptest::prelude::*;

    fn rays(c: &CornerLocusComplex) -> Vec<([f64; 2], [i64; 2])> {
        let mut v: Vec<_> = c.rays.iter().map(|r| (c.vertices[r.vertex], r.direction)).collect();
        v.sort_by(|a, b| a.1.cmp(&b.1));
        v
    }

    fn window(lo: f64, hi: f64) -> Window {
        Window::cube(2, lo, hi).unwrap()
    }

    #[test]
    fn tropical_line() {
        let c = line().corner_locus_2d().unwrap();
        assert_eq!(c.vertices, vec![[0.0, 0.0]]);
        assert!(c.segments.is_empty());
        let dirs: Vec<[i64; 2]> = rays(&c).into_iter().map(|r| r.1).collect();
        assert_eq!(dirs, vec![[-1, -1], [0, 1], [1, 0]]);
        assert!(c.verify_ties(&line(), 1e-9).unwrap());
    }

    #[test]
    fn product_family_vertices_and_ties() {
        let t = product_family();
        let c = t.corner_locus_2d().unwrap();
        let mut vs = c.vertices.clone();
        vs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(vs, vec![[-1.0, 1.0], [0.0, 0.0], [0.0, 1.0]]);
        assert!(c.verify_ties(&t, 1e-9).unwrap());
    }

    #[test]
    fn product_family_matches_membership_scan() {
        // off-complex grid points are never members, points on the complex always are
        let t = product_family();
        let c = t.corner_locus_2d().unwrap();
        let win = window(-4.0, 4.0);
        let pieces = c.clipped_pieces(&win);
        for i in 0..=160 {
            for j in 0..=160 {
                let w = [-4.0 + 0.05 * i as f64 + 0.0123, -4.0 + 0.05 * j as f64 + 0.0071];
                if !win.contains(&w) {
                    continue;
                }
                let d = c.distance_to_pieces(&pieces, w);
                if d > 1e-6 {
                    assert!(!t.is_member(&w, 1e-9).unwrap(), "{w:?}");
                }
            }
        }
        for p in c.sample(&win, 0.01) {
            assert!(t.is_member(&p, 1e-9).unwrap(), "{p:?}");
        }
    }

    #[test]
    fn binomial_gives_a_line() {
        let t = trop(&[([0, 0], 0.0), ([1, 0], 0.0)]);
        let c = t.corner_locus_2d().unwrap();
        assert_eq!(c.vertices, vec![[0.0, 0.0]]);
        let dirs: Vec<[i64; 2]> = rays(&c).into_iter().map(|r| r.1).collect();
        assert_eq!(dirs, vec![[0, -1], [0, 1]]);
        assert!(c.verify_ties(&t, 1e-9).unwrap());

        let t = trop(&[([0, 0], 1.0), ([1, 1], 0.0), ([2, 2], 1.0)]);
        let c = t.corner_locus_2d().unwrap();
        assert_eq!(c.rays.len(), 4);
        assert!(c.verify_ties(&t, 1e-9).unwrap());
        for p in c.sample(&window(-3.0, 3.0), 0.05) {
            assert!(t.is_member(&p, 1e-9).unwrap());
        }
    }

    #[test]
    fn distances_to_line() {
        let c = line().corner_locus_2d().unwrap();
        let win = window(-3.0, 3.0);
        // dense sampling of the clipped complex
        let oracle = |w: [f64; 2]| {
            c.sample(&win, 1e-4)
                .iter()
                .map(|p| (p[0] - w[0]).hypot(p[1] - w[1]))
                .fold(f64::INFINITY, f64::min)
        };
        for w in [[0.0, 0.0], [1.0, 1.0], [-1.0, -2.0], [2.5, -0.5]] {
            let d = c.distance_to(&w, &win).unwrap();
            assert!((d - oracle(w)).abs() < 1e-4, "{w:?}: {d}");
        }
        assert_eq!(c.distance_to(&[0.0, 0.0], &win).unwrap(), 0.0);
        assert!((c.distance_to(&[1.0, 1.0], &win).unwrap() - 1.0).abs() < 1e-12);
        assert!((c.distance_to(&[-1.0, -2.0], &win).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(c.distance_to(&[5.0, 0.0], &win).is_err());
    }

    #[test]
    fn window_missing_the_complex() {
        let c = line().corner_locus_2d().unwrap();
        let win = Window::new(vec![1.0, 1.0], vec![2.0, 2.0]).unwrap();
        assert_eq!(c.distance_to(&[1.5, 1.5], &win).unwrap_err(), Error::EmptyComplex);
    }

    #[test]
    fn fractional_coefficients_use_float_predicates() {
        let t = trop(&[([1, 0], 0.5), ([0, 1], -0.25), ([0, 0], 0.0), ([1, 1], 0.75)]);
        let c = t.corner_locus_2d().unwrap();
        assert!(c.verify_ties(&t, 1e-9).unwrap());
        for p in c.sample(&window(-3.0, 3.0), 0.02) {
            assert!(t.is_member(&p, 1e-9).unwrap());
        }
    }

    fn arb_trop() -> impl Strategy<Value = TropicalPolynomial> {
        prop::collection::btree_map((0..4i32, 0..4i32), -3..=3i32, 2..7).prop_filter_map("needs two terms", |m| {
            TropicalPolynomial::new(2, m.into_iter().map(|((a, b), c)| (Exponent::from([a, b]), c as f64))).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn complex_agrees_with_membership(
            t in arb_trop(),
            w1 in (-4.0f64..4.0, -4.0f64..4.0),
            w2 in (-4.0f64..4.0, -4.0f64..4.0),
        ) {
            let c = t.corner_locus_2d().unwrap();
            let win = window(-5.0, 5.0);
            prop_assert!(c.verify_ties(&t, 1e-9).unwrap());
            for p in c.sample(&win, 0.1) {
                prop_assert!(t.is_member(&p, 1e-9).unwrap());
            }
            // a path between regions with different dominant terms crosses the locus
            let (a, b) = ([w1.0, w1.1], [w2.0, w2.1]);
            let ma = t.argmin_support(&a, 1e-9).unwrap();
            let mb = t.argmin_support(&b, 1e-9).unwrap();
            if ma.len() == 1 && mb.len() == 1 && ma != mb {
                let pieces = c.clipped_pieces(&win);
                let d = c.distance_to_pieces(&pieces, a);
                prop_assert!(d <= (a[0] - b[0]).hypot(a[1] - b[1]) + 1e-9);
            }
        }
    }
}
