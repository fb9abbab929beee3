//! Roots of univariate complex polynomials via companion-matrix eigenvalues.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

const SCHUR_MAX_ITER_PER_DIM: usize = 200;

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Nonzero roots of a univariate polynomial together with the balancing
/// scale `s = |p_lo / p_hi|^(1/deg)` used to compute them.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Roots {
    pub scale: f64,
    pub roots: Vec<Complex64>,
}

/// Nonzero roots of `sum_k coeffs[k] z^k` (coefficients in ascending
/// order), each polished by one Newton step. Zero roots are not reported.
///
/// The roots are computed for `u = z / s`, whose coefficients are balanced
/// in log space, so roots of huge or tiny modulus stay well conditioned.
/// Returns `None` when the eigenvalue iteration fails to converge.
pub(crate) fn nonzero_roots(coeffs: &[Complex64]) -> Option<Roots> {
    let zero = Complex64::new(0.0, 0.0);
    let hi = match coeffs.iter().rposition(|c| *c != zero) {
        Some(h) => h,
        None => return Some(Roots { scale: 1.0, roots: Vec::new() }),
    };
    let lo = coeffs.iter().position(|c| *c != zero).unwrap_or(0);
    let p = &coeffs[lo..=hi];
    let degree = p.len() - 1;
    if degree == 0 {
        return Some(Roots { scale: 1.0, roots: Vec::new() });
    }
    let log_scale = (p[0].norm().ln() - p[degree].norm().ln()) / degree as f64;
    let logs: Vec<f64> = p
        .iter()
        .enumerate()
        .map(|(k, c)| if *c == zero { f64::NEG_INFINITY } else { c.norm().ln() + k as f64 * log_scale })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let b: Vec<Complex64> = p
        .iter()
        .zip(&logs)
        .map(|(c, l)| if *c == zero { zero } else { c.unscale(c.norm()).scale((l - top).exp()) })
        .collect();
    let roots: Vec<Complex64> = match degree {
        1 => vec![-b[0] / b[1]],
        _ => {
            let lead = b[degree];
            let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
            for i in 1..degree {
                companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
            }
            for i in 0..degree {
                companion[(i, degree - 1)] = -b[i] / lead;
            }
            let schur = Schur::try_new(companion, f64::EPSILON, SCHUR_MAX_ITER_PER_DIM * degree)?;
            schur.eigenvalues()?.iter().copied().collect()
        }
    };
    let scale = log_scale.exp();
    Some(Roots {
        scale,
        roots: roots.into_iter().map(|r| polish(&b, r) * scale).collect(),
    })
}

fn polish(p: &[Complex64], r: Complex64) -> Complex64 {
    let (v, dv) = horner(p, r);
    if dv.norm() == 0.0 || !r.is_finite() {
        return r;
    }
    let next = r - v / dv;
    if next.is_finite() && horner(p, next).0.norm() <= v.norm() {
        next
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn linear_and_quadratic() {
        let r = nonzero_roots(&[c(2.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(r.roots, vec![c(2.0, 0.0)]);
        assert_eq!(r.scale, 2.0);
        // z^2 + 1
        let r = sorted(nonzero_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap().roots);
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_roots_are_stripped() {
        // z^3 - z = z (z - 1)(z + 1)
        let r = sorted(nonzero_roots(&[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap().roots);
        assert_eq!(r.len(), 2);
        assert!((r[0] + 1.0).norm() < 1e-14 && (r[1] - 1.0).norm() < 1e-14);
        assert!(nonzero_roots(&[c(0.0, 0.0), c(3.0, 0.0)]).unwrap().roots.is_empty());
        assert!(nonzero_roots(&[c(0.0, 0.0)]).unwrap().roots.is_empty());
    }

    #[test]
    fn roots_of_unity_with_complex_coefficients() {
        // 2i (z^5 - 1)
        let mut p = vec![c(0.0, 0.0); 6];
        p[0] = c(0.0, -2.0);
        p[5] = c(0.0, 2.0);
        let r = nonzero_roots(&p).unwrap().roots;
        assert_eq!(r.len(), 5);
        for z in r {
            assert!((z.powu(5) - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn huge_roots_are_balanced() {
        // (z - 1e20)(z - 3e20)
        let p = [c(3e40, 0.0), c(-4e20, 0.0), c(1.0, 0.0)];
        let r = nonzero_roots(&p).unwrap();
        assert!((r.scale - 3f64.sqrt() * 1e20).abs() < 1e6);
        let r = sorted(r.roots);
        assert!((r[0].re / 1e20 - 1.0).abs() < 1e-13 && (r[1].re / 3e20 - 1.0).abs() < 1e-13);
    }
}
