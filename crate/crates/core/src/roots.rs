//! Root solvers: a cancellation-free quadratic formula for the degree-two
//! fibres of the families, and Aberth-Ehrlich simultaneous iteration for
//! general univariate polynomials.

use std::cmp::Ordering;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Maximum number of Aberth sweeps.
pub const ABERTH_MAX_ITERATIONS: usize = 200;

/// The two roots of a quadratic, `|y_minus| <= |y_plus|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchPair<T> {
    pub y_minus: Complex<T>,
    pub y_plus: Complex<T>,
}

/// Total order used to sort roots: modulus, then real part, then imaginary
/// part.
pub fn root_order<T: Real>(a: &Complex<T>, b: &Complex<T>) -> Ordering {
    a.norm()
        .partial_cmp(&b.norm())
        .unwrap_or(Ordering::Equal)
        .then(a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal))
        .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

/// Roots of `y² + b y + c`.
///
/// The root of larger magnitude is `-(b + s)/2` with the sign of the square
/// root `s` chosen so that `b` and `s` do not cancel; the other one is `c`
/// divided by it.
pub fn quadratic_roots<T: Real>(b: Complex<T>, c: Complex<T>) -> BranchPair<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let four: T = lit(4.0);
    let mut s = (b * b - c * four).sqrt();
    if (b.conj() * s).re < T::zero() {
        s = -s;
    }
    let big = -(b + s) / lit::<T>(2.0);
    let small = if big == zero { zero } else { c / big };
    let (lo, hi) = if root_order(&small, &big) == Ordering::Greater {
        (big, small)
    } else {
        (small, big)
    };
    BranchPair {
        y_minus: lo,
        y_plus: hi,
    }
}

/// Roots of `a y² + b y + c`, `a != 0`.
pub fn quadratic_roots_general<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
) -> BranchPair<T> {
    quadratic_roots(b / a, c / a)
}

fn horner<T: Real>(coeffs: &[Complex<T>], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `Σ coeffs[j] y^j` (ascending order) by Aberth-Ehrlich
/// iteration started on a perturbed circle, returned sorted by
/// [`root_order`].
///
/// A root stops moving once its correction is below `1e-13·max(1,|root|)` or
/// its residual is at the rounding level of the evaluation, which is where
/// clustered roots stall.
pub fn poly_roots<T: Real>(coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let zero = Complex::new(T::zero(), T::zero());
    let degree = coeffs.iter().rposition(|c| *c != zero).unwrap_or(0);
    if degree == 0 {
        return Err(Error::InvalidParameter("polynomial of degree < 1".into()));
    }
    let coeffs = &coeffs[..=degree];
    // exact zero roots are factored out first
    let zeros = coeffs.iter().position(|c| *c != zero).unwrap();
    let coeffs = &coeffs[zeros..];
    let n = coeffs.len() - 1;
    let mut roots = vec![zero; zeros];
    if n == 0 {
        roots.sort_by(root_order);
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-coeffs[0] / coeffs[1]);
        roots.sort_by(root_order);
        return Ok(roots);
    }

    let lead = coeffs[n].norm();
    // radius from the geometric mean of the root moduli
    let radius = (coeffs[0].norm() / lead).powf(T::one() / T::from_usize(n).unwrap());
    let radius = if radius.is_finite() && radius > T::zero() {
        radius
    } else {
        T::one()
    };
    let offset: T = lit(0.4);
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let angle = T::TAU() * T::from_usize(k).unwrap() / T::from_usize(n).unwrap() + offset;
            Complex::from_polar(radius, angle)
        })
        .collect();
    let abs_coeffs: Vec<T> = coeffs.iter().map(|c| c.norm()).collect();
    let eps = T::epsilon();
    let step_tol: T = lit(1e-13);
    let mut done = vec![false; n];

    for _ in 0..ABERTH_MAX_ITERATIONS {
        let mut max_rel = T::zero();
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (p, dp) = horner(coeffs, zi);
            // rounding-level residual bound
            let mut bound = T::zero();
            for &a in abs_coeffs.iter().rev() {
                bound = bound * zi.norm() + a;
            }
            if p.norm() <= lit::<T>(8.0) * T::from_usize(n).unwrap() * eps * bound {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut sum = zero;
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    sum = sum + (zi - zj).inv();
                }
            }
            let w = ratio / (Complex::new(T::one(), T::zero()) - ratio * sum);
            let w = if w.re.is_finite() && w.im.is_finite() {
                w
            } else {
                ratio
            };
            z[i] = zi - w;
            let rel = w.norm() / T::one().max(z[i].norm());
            if rel < step_tol {
                done[i] = true;
            }
            max_rel = max_rel.max(rel);
        }
        if done.iter().all(|&d| d) {
            roots.extend(z);
            roots.sort_by(root_order);
            return Ok(roots);
        }
        let _ = max_rel;
    }
    Err(Error::NoConvergence {
        method: "aberth",
        iterations: ABERTH_MAX_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    #[test]
    fn quadratic_examples() {
        let r = quadratic_roots(c(-3.0, 0.0), c(2.0, 0.0));
        assert!((r.y_minus - c(1.0, 0.0)).norm() < 1e-15);
        assert!((r.y_plus - c(2.0, 0.0)).norm() < 1e-15);

        let r = quadratic_roots(c(1.0, 0.0), c(0.0, 0.0));
        assert_eq!(r.y_minus, c(0.0, 0.0));
        assert_eq!(r.y_plus, c(-1.0, 0.0));

        // λ = 13, x = 1: y² + 16y + 1
        let r = quadratic_roots(c(16.0, 0.0), c(1.0, 0.0));
        let s = 63f64.sqrt();
        assert!((r.y_plus.re - (-8.0 - s)).abs() < 1e-13);
        assert!((r.y_minus.re + 1.0 / (8.0 + s)).abs() < 1e-17);
        assert!((r.y_plus.re + 15.93725).abs() < 1e-5);
        assert!((r.y_minus.re + 0.0627462).abs() < 1e-6);
        assert!((r.y_minus * r.y_plus - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn quadratic_without_cancellation() {
        // y² - 1e8 y + 1: small root 1e-8 to full relative precision
        let r = quadratic_roots(c(-1e8, 0.0), c(1.0, 0.0));
        assert!((r.y_minus.re - 1e-8).abs() < 1e-23);
    }

    #[test]
    fn tie_break_by_real_then_imaginary() {
        // y² + 1: roots ±i of equal modulus and real part
        let r = quadratic_roots(c(0.0, 0.0), c(1.0, 0.0));
        assert!(r.y_minus.im < 0.0 && r.y_plus.im > 0.0);
        // y² - 1
        let r = quadratic_roots(c(0.0, 0.0), c(-1.0, 0.0));
        assert_eq!((r.y_minus, r.y_plus), (c(-1.0, 0.0), c(1.0, 0.0)));
    }

    #[test]
    fn poly_roots_examples() {
        let r = poly_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-13);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-13);

        let r = poly_roots(&[c(1.0, 0.0), c(3.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r.len(), 3);
        for z in r {
            assert!((z + 1.0).norm() < 1e-4, "{z}");
        }

        // Q_0 in Y at X = i: Y² + (X⁴+1) Y + X⁴ = (Y+1)(Y+X⁴) = (Y+1)²
        let x = c(0.0, 1.0);
        let x4 = x.powi(4);
        let r = poly_roots(&[x4, x4 + 1.0, c(1.0, 0.0)]).unwrap();
        for z in r {
            assert!((z + 1.0).norm() < 1e-6, "{z}");
        }
    }

    #[test]
    fn poly_roots_degenerate_inputs() {
        assert!(poly_roots(&[c(1.0, 0.0)]).is_err());
        assert!(poly_roots::<f64>(&[]).is_err());
        let r = poly_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(r, vec![c(0.0, 0.0), c(0.0, 0.0)]);
        let r = poly_roots(&[c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r[0], c(0.0, 0.0));
        assert!((r[1] - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn poly_roots_higher_degree() {
        // y^6 - 1
        let mut co = vec![c(0.0, 0.0); 7];
        co[0] = c(-1.0, 0.0);
        co[6] = c(1.0, 0.0);
        let r = poly_roots(&co).unwrap();
        for z in &r {
            assert!((z.norm() - 1.0).abs() < 1e-13);
            assert!((z.powi(6) - 1.0).norm() < 1e-12);
        }
        // Wilkinson-like spread
        let roots: Vec<C> = (1..=8).map(|k| c(k as f64, 0.0)).collect();
        let mut co = vec![c(1.0, 0.0)];
        for r in &roots {
            let mut next = vec![c(0.0, 0.0); co.len() + 1];
            for (j, a) in co.iter().enumerate() {
                next[j + 1] += *a;
                next[j] -= *a * r;
            }
            co = next;
        }
        let got = poly_roots(&co).unwrap();
        for (g, w) in got.iter().zip(&roots) {
            assert!((g - w).norm() < 1e-8, "{g} vs {w}");
        }
    }

    fn arb_c() -> impl Strategy<Value = C> {
        (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(a, b)| c(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn quadratic_vieta_and_agreement(b in arb_c(), cc in arb_c()) {
            let r = quadratic_roots(b, cc);
            let scale = 1.0 + b.norm() + cc.norm();
            prop_assert!((r.y_minus + r.y_plus + b).norm() <= 1e-10 * scale);
            prop_assert!((r.y_minus * r.y_plus - cc).norm() <= 1e-10 * scale);
            prop_assert!(r.y_minus.norm() <= r.y_plus.norm());

            let g = poly_roots(&[cc, b, c(1.0, 0.0)]).unwrap();
            let d1 = (g[0] - r.y_minus).norm() + (g[1] - r.y_plus).norm();
            let d2 = (g[1] - r.y_minus).norm() + (g[0] - r.y_plus).norm();
            let sep = (r.y_plus - r.y_minus).norm();
            // near-double roots are ill conditioned; compare relative to separation
            prop_assume!(sep > 1e-3);
            prop_assert!(d1.min(d2) <= 1e-11 * scale, "{:?} vs {:?}", g, r);
        }

        #[test]
        fn cubic_vieta(a0 in arb_c(), a1 in arb_c(), a2 in arb_c()) {
            let r = poly_roots(&[a0, a1, a2, c(1.0, 0.0)]).unwrap();
            let scale = 1.0 + a0.norm() + a1.norm() + a2.norm();
            let sum: C = r.iter().sum();
            let prod: C = r.iter().product();
            prop_assert!((sum + a2).norm() <= 1e-10 * scale);
            prop_assert!((prod + a0).norm() <= 1e-10 * scale);
        }
    }
}
