use std::f64::consts::{SQRT_2, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use tropamoeba::amoeba::{sample_amoeba, scale_cloud, PointCloud};
use tropamoeba::converge::{hausdorff, kuratowski_lsc_check, FamilySample};
use tropamoeba::hybrid::{hybrid_seminorm, HybridPoint, MonomialValuation};
use tropamoeba::poly::{Exponent, LaurentPoly, TLaurentPoly};
use tropamoeba::toric::{moment_map, trop_moment, LatticePolytope};
use tropamoeba::tropical::TropicalPolynomial;
use tropamoeba::Window;

fn small_poly(max_exp: i32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((0..=max_exp, 0..=max_exp), -4i32..=4, -4i32..=4), 1..5).prop_filter_map(
        "nonzero",
        |terms| {
            let f = LaurentPoly::new(
                2,
                terms
                    .into_iter()
                    .map(|((a, b), re, im)| ([a, b], Complex64::new(re as f64, im as f64))),
            )
            .ok()?;
            (!f.is_zero()).then_some(f)
        },
    )
}

fn small_family() -> impl Strategy<Value = TLaurentPoly> {
    prop::collection::vec(((0..=2i32, 0..=2i32), -2i32..=2, -3i32..=3), 1..5).prop_filter_map("nonzero", |terms| {
        let f = TLaurentPoly::new(
            2,
            terms
                .into_iter()
                .map(|((a, b), k, c)| ([a, b], k, Complex64::new(c as f64, 0.0))),
        )
        .ok()?;
        (!f.is_zero()).then_some(f)
    })
}

fn torus_point() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.5f64..2.0, 0.0..TAU), 2).prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
}

fn trop_poly() -> impl Strategy<Value = TropicalPolynomial> {
    prop::collection::btree_map((-3i32..=3, -3i32..=3), -2i32..=2, 2..=8).prop_map(|m| {
        TropicalPolynomial::new(2, m.into_iter().map(|((a, b), c)| (Exponent::from([a, b]), c as f64))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_evaluates_to_product(f in small_poly(3), g in small_poly(3), z in torus_point()) {
        let lhs = f.multiply(&g).unwrap().evaluate(&z).unwrap();
        let rhs = f.evaluate(&z).unwrap() * g.evaluate(&z).unwrap();
        let scale = f.magnitude_scale(&z) * g.magnitude_scale(&z);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn specialize_commutes_with_product(f in small_family(), g in small_family(), a in prop::sample::select(vec![-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])) {
        // dyadic a keeps every power of a exact
        let a = Complex64::new(a, 0.0);
        let lhs = f.multiply(&g).unwrap().specialize(a).unwrap();
        let rhs = f.specialize(a).unwrap().multiply(&g.specialize(a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn specialize_commutes_with_product_approximately(f in small_family(), g in small_family(), a in 0.05f64..3.0) {
        let a = Complex64::new(a, 0.0);
        let lhs = f.multiply(&g).unwrap().specialize(a).unwrap();
        let rhs = f.specialize(a).unwrap().multiply(&g.specialize(a).unwrap()).unwrap();
        let z = [Complex64::new(0.7, 0.2), Complex64::new(-0.4, 1.1)];
        let scale = lhs.magnitude_scale(&z).max(rhs.magnitude_scale(&z)).max(1.0);
        for (m, c) in lhs.terms().chain(rhs.terms()) {
            prop_assert!((lhs.coeff(m) - rhs.coeff(m)).norm() <= 1e-12 * scale.max(c.norm()), "{m}");
        }
    }

    #[test]
    fn valuation_of_product(f in small_family(), g in small_family()) {
        let fg = f.multiply(&g).unwrap();
        prop_assume!(!fg.is_zero());
        let (tf, tg, tfg) = (f.t_valuation().unwrap(), g.t_valuation().unwrap(), fg.t_valuation().unwrap());
        for (m, c) in tfg.terms() {
            let mut splits = Vec::new();
            for (a, ca) in tf.terms() {
                for (b, cb) in tg.terms() {
                    if &a.add(b) == m {
                        splits.push(ca + cb);
                    }
                }
            }
            let best = splits.iter().cloned().fold(f64::INFINITY, f64::min);
            prop_assert!(c >= best, "{m}: {c} < {best}");
            if splits.iter().filter(|s| **s == best).count() == 1 {
                prop_assert_eq!(c, best);
            }
        }
    }

    #[test]
    fn tropicalization_ignores_rescaling(f in small_poly(3), r in 0.1f64..10.0, t in 0.0..TAU) {
        let g = f.scale(Complex64::from_polar(r, t));
        prop_assert_eq!(f.trivial_tropicalize().unwrap(), g.trivial_tropicalize().unwrap());
    }

    #[test]
    fn membership_scales(t in trop_poly(), w in prop::array::uniform2(-5.0f64..5.0), rho in 0.1f64..5.0) {
        let scaled = t.scale_coefficients(rho);
        prop_assert_eq!(
            scaled.is_member(&[rho * w[0], rho * w[1]], 1e-9).unwrap(),
            t.is_member(&w, 1e-9).unwrap()
        );
    }

    #[test]
    fn complex_cells_are_ties(t in trop_poly()) {
        let c = t.corner_locus_2d().unwrap();
        prop_assert!(c.verify_ties(&t, 1e-9).unwrap());
    }

    #[test]
    fn monomial_valuation_is_additive(f in small_poly(2), g in small_poly(2)) {
        let v = MonomialValuation::new(vec![1.0, SQRT_2]).unwrap();
        let (a, b, ab) = (v.value(&f).unwrap(), v.value(&g).unwrap(), v.value(&f.multiply(&g).unwrap()).unwrap());
        prop_assert!((ab - (a + b)).abs() <= 1e-9, "{ab} vs {a} + {b}");
    }

    #[test]
    fn monomial_valuation_is_ultrametric(f in small_poly(3), g in small_poly(3)) {
        let v = MonomialValuation::new(vec![1.0, SQRT_2]).unwrap();
        let sum = f.add(&g).unwrap();
        let (a, b, s) = (v.value(&f).unwrap(), v.value(&g).unwrap(), v.value(&sum).unwrap());
        prop_assert!(s >= a.min(b) - 1e-9, "{s} < min({a}, {b})");
    }

    #[test]
    fn seminorm_is_multiplicative(f in small_poly(2), g in small_poly(2), z in torus_point(), rho in 0.0f64..=1.0) {
        let fg = f.multiply(&g).unwrap();
        for rho in [rho, 0.0] {
            let p = HybridPoint::section(z.clone(), rho).unwrap();
            let (a, b, ab) = (
                hybrid_seminorm(&p, &f).unwrap(),
                hybrid_seminorm(&p, &g).unwrap(),
                hybrid_seminorm(&p, &fg).unwrap(),
            );
            if rho == 0.0 {
                prop_assert_eq!(ab, a * b);
            } else {
                prop_assert!((ab - a * b).abs() <= 1e-9 * (a * b).max(1e-300), "{ab} vs {a} * {b} at rho {rho}");
            }
        }
    }

    #[test]
    fn moment_map_sees_only_moduli(z in torus_point(), phases in prop::array::uniform2(0.0f64..TAU), d in 1u32..=3) {
        let p = LatticePolytope::dilated_simplex(2, d).unwrap();
        let rotated: Vec<Complex64> = z.iter().zip(phases).map(|(c, t)| c * Complex64::from_polar(1.0, t)).collect();
        // rotation perturbs |z| by rounding, so compare against the moduli themselves
        for w in [&z, &rotated] {
            let moduli: Vec<Complex64> = w.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect();
            prop_assert_eq!(moment_map(&p, w).unwrap(), moment_map(&p, &moduli).unwrap());
        }
        let m = moment_map(&p, &z).unwrap();
        // inside d * simplex
        prop_assert!(m[0] >= 0.0 && m[1] >= 0.0 && m[0] + m[1] <= d as f64 * (1.0 + 1e-15));
    }

    #[test]
    fn lsc_is_monotone_in_eps(pts in prop::collection::vec(prop::array::uniform2(-2.0f64..2.0), 1..6), eps in 0.01f64..1.0) {
        let members: Vec<(f64, PointCloud)> = (0..4)
            .map(|i| {
                let shifted = pts.iter().map(|p| vec![p[0] + 0.2 * i as f64, p[1]]).collect();
                (i as f64 * 0.1, PointCloud::from_points(2, shifted).unwrap())
            })
            .collect();
        let fam = FamilySample::new(members).unwrap();
        if kuratowski_lsc_check(&fam, 0, eps, 0.25).unwrap() {
            prop_assert!(kuratowski_lsc_check(&fam, 0, eps * 1.5, 0.25).unwrap());
        }
    }
}

#[test]
fn moment_map_is_injective_on_samples() {
    use rand::{Rng, SeedableRng};
    let p = LatticePolytope::unit_triangle();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let ws: Vec<[f64; 2]> = (0..1000).map(|_| [rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)]).collect();
    let images: Vec<Vec<f64>> = ws.iter().map(|w| trop_moment(&p, w).unwrap()).collect();
    for i in 0..ws.len() {
        for j in 0..i {
            let dw = (ws[i][0] - ws[j][0]).hypot(ws[i][1] - ws[j][1]);
            let dm = (images[i][0] - images[j][0]).hypot(images[i][1] - images[j][1]);
            if dw > 1e-6 {
                assert!(dm > 1e-9, "{:?} and {:?} collide", ws[i], ws[j]);
            }
        }
    }
}

#[test]
fn monomial_change_translates_the_amoeba() {
    let f = LaurentPoly::from_real(2, [([1, 0], 1.0), ([0, 1], 2.0), ([1, 1], -1.0), ([0, 0], 3.0)]).unwrap();
    let lambda = [Complex64::new(2.5, 0.0), Complex64::new(0.4, 0.0)];
    let g = f.substitute_scaling(&lambda).unwrap();
    // g(z) = f(lambda z), so A_g = A_f + log|lambda|
    let shift: Vec<f64> = lambda.iter().map(|l| l.norm().ln()).collect();
    let win = Window::cube(2, -3.0, 3.0).unwrap();
    let a = sample_amoeba(&f, 3000, &win, 5).unwrap();
    let b = sample_amoeba(&g, 3000, &win.translated(&shift), 5).unwrap();
    let moved = a.map_points(|p| vec![p[0] + shift[0], p[1] + shift[1]]).unwrap();
    let d = hausdorff(&moved, &b).unwrap();
    assert!(d <= 1e-8, "{d}");
}

#[test]
fn sampling_is_deterministic() {
    let f = LaurentPoly::from_real(2, [([2, 0], 1.0), ([0, 1], -3.0), ([1, 1], 1.0), ([0, 0], 2.0)]).unwrap();
    let win = Window::cube(2, -4.0, 4.0).unwrap();
    let a = sample_amoeba(&f, 2000, &win, 21).unwrap();
    let b = sample_amoeba(&f, 2000, &win, 21).unwrap();
    let bits = |c: &PointCloud| c.points().flat_map(|p| p.iter().map(|x| x.to_bits())).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
    let scaled = scale_cloud(&a, 0.5).unwrap();
    assert_eq!(scaled.meta.scaling, 0.5);
}
