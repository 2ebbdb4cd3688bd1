//! Quadrature engines: periodic trapezoid for torus integrals, tanh-sinh for
//! algebraic endpoint singularities, adaptive Gauss-Kronrod for smooth
//! pieces.
//!
//! Singularities are only tolerated at interval endpoints; callers split
//! integrals at known interior singular points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Largest node count used by [`periodic_trapezoid_to_tolerance`] by default.
pub const TRAPEZOID_MAX_NODES: usize = 1 << 14;
/// Default level cap for [`tanh_sinh`].
pub const TANH_SINH_MAX_LEVEL: usize = 12;
/// Default subdivision cap for [`adaptive`].
pub const ADAPTIVE_MAX_INTERVALS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult<T> {
    pub value: T,
    /// Absolute difference between the last two refinement levels.
    pub error_estimate: T,
    /// Number of integrand evaluations.
    pub nodes: usize,
    /// False when the refinement cap was hit before the tolerance was met.
    pub converged: bool,
}

impl<T: Real> QuadratureResult<T> {
    /// Sum of two results over adjacent pieces.
    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            nodes: self.nodes + other.nodes,
            converged: self.converged && other.converged,
        }
    }

    pub fn scaled(self, s: T) -> Self {
        Self {
            value: self.value * s,
            error_estimate: self.error_estimate * s.abs(),
            ..self
        }
    }
}

/// Compensated (Neumaier) summation in a fixed order.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Accumulator<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Accumulator<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

fn check_finite<T: Real>(v: T, at: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            location: to_f64(at),
        })
    }
}

/// Trapezoid rule for a 1-periodic `f` on `n` equally spaced nodes `j/n`.
pub fn periodic_trapezoid<T: Real, F: Fn(T) -> T>(f: F, n: usize) -> Result<QuadratureResult<T>> {
    periodic_trapezoid_shifted(f, n, T::zero())
}

/// Trapezoid rule on the nodes `(j + shift)/n`, `0 <= shift < 1`.
///
/// The error estimate is the difference from the same rule with `n/2` nodes.
pub fn periodic_trapezoid_shifted<T: Real, F: Fn(T) -> T>(
    f: F,
    n: usize,
    shift: T,
) -> Result<QuadratureResult<T>> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "trapezoid node count must be a power of two >= 8, got {n}"
        )));
    }
    let fine = trapezoid_sum(&f, n, shift)?;
    let coarse = if shift.is_zero() {
        // nodes of the coarse rule are the even nodes of the fine one
        None
    } else {
        Some(trapezoid_sum(&f, n / 2, shift)?)
    };
    let (value, coarse_value, nodes) = match coarse {
        Some(c) => (fine.0, c.0, n + n / 2),
        None => (fine.0, fine.1, n),
    };
    Ok(QuadratureResult {
        value,
        error_estimate: (value - coarse_value).abs(),
        nodes,
        converged: true,
    })
}

/// Returns (mean over all nodes, mean over even nodes).
fn trapezoid_sum<T: Real, F: Fn(T) -> T>(f: &F, n: usize, shift: T) -> Result<(T, T)> {
    let nt: T = T::from_usize(n).unwrap();
    let mut all = Accumulator::new();
    let mut even = Accumulator::new();
    for j in 0..n {
        let t = (T::from_usize(j).unwrap() + shift) / nt;
        let v = check_finite(f(t), t)?;
        all.add(v);
        if j % 2 == 0 {
            even.add(v);
        }
    }
    let half: T = T::from_usize(n / 2).unwrap();
    Ok((all.value() / nt, even.value() / half))
}

/// Doubles the node count from `n_start` until the error estimate drops
/// below `tol` or `n_max` is reached.
pub fn periodic_trapezoid_to_tolerance<T: Real, F: Fn(T) -> T>(
    f: F,
    n_start: usize,
    n_max: usize,
    tol: T,
    shift: T,
) -> Result<QuadratureResult<T>> {
    let mut n = n_start;
    let mut res = periodic_trapezoid_shifted(&f, n, shift)?;
    let mut total = res.nodes;
    while res.error_estimate > tol && n < n_max {
        n *= 2;
        let (v, _) = trapezoid_sum(&f, n, shift)?;
        total += n;
        res = QuadratureResult {
            value: v,
            error_estimate: (v - res.value).abs(),
            nodes: total,
            converged: true,
        };
    }
    res.nodes = total;
    res.converged = res.error_estimate <= tol;
    Ok(res)
}

/// A tanh-sinh abscissa together with its exact distances to both endpoints.
#[derive(Clone, Copy, Debug)]
struct DeNode<T> {
    x: T,
    from_a: T,
    to_b: T,
    weight: T,
}

/// Nodes at `+t` and `-t` of the double-exponential map onto `[a, b]`.
fn de_pair<T: Real>(t: T, a: T, b: T) -> (DeNode<T>, DeNode<T>) {
    let half = (b - a) / lit(2.0);
    let s = T::FRAC_PI_2() * t.sinh();
    // 1 - tanh(s) = 2 e^{-2s} / (1 + e^{-2s}), exact for large s
    let e = (-(s + s)).exp();
    let c = lit::<T>(2.0) * e / (T::one() + e);
    let sech2 = lit::<T>(4.0) * e / ((T::one() + e) * (T::one() + e));
    let weight = half * T::FRAC_PI_2() * t.cosh() * sech2;
    let near = half * c;
    let far = half * (lit::<T>(2.0) - c);
    let right = DeNode {
        x: b - near,
        from_a: far,
        to_b: near,
        weight,
    };
    let left = DeNode {
        x: a + near,
        from_a: near,
        to_b: far,
        weight,
    };
    (right, left)
}

/// Tanh-sinh quadrature of `f` over `[a, b]`.
pub fn tanh_sinh<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> Result<QuadratureResult<T>> {
    tanh_sinh_with_distances(move |x, _, _| f(x), a, b, tol, TANH_SINH_MAX_LEVEL)
}

/// Tanh-sinh quadrature where the integrand receives `(x, x - a, b - x)`, the
/// distances being exact even where `x` itself rounds to an endpoint. This is
/// what makes inverse-square-root endpoint behaviour integrate to full
/// precision.
pub fn tanh_sinh_with_distances<T: Real, F: Fn(T, T, T) -> T>(
    f: F,
    a: T,
    b: T,
    tol: T,
    max_level: usize,
) -> Result<QuadratureResult<T>> {
    if !(a < b) {
        return Err(Error::InvalidParameter(format!(
            "need a < b, got [{a}, {b}]"
        )));
    }
    let t_max: T = lit(6.5);
    let eps = T::epsilon();
    let mut nodes = 0usize;

    let mut eval = |node: DeNode<T>| -> Result<T> {
        if node.from_a <= T::zero() || node.to_b <= T::zero() || node.weight.is_zero() {
            return Ok(T::zero());
        }
        nodes += 1;
        let v = f(node.x, node.from_a, node.to_b);
        if v.is_nan() || (v.is_infinite() && node.from_a > eps && node.to_b > eps) {
            return Err(Error::NonFinite {
                location: to_f64(node.x),
            });
        }
        if v.is_infinite() {
            // the abscissa is numerically on the endpoint
            return Ok(T::zero());
        }
        Ok(node.weight * v)
    };

    // level 0: h = 1, all integer t
    let mut h = T::one();
    let mut acc = Accumulator::new();
    {
        let (mid, _) = de_pair(T::zero(), a, b);
        acc.add(eval(mid)?);
        let mut k = 1usize;
        loop {
            let t = T::from_usize(k).unwrap();
            if t > t_max {
                break;
            }
            let (r, l) = de_pair(t, a, b);
            acc.add(eval(r)?);
            acc.add(eval(l)?);
            k += 1;
        }
    }
    let mut estimate = acc.value() * h;
    let mut prev = estimate;
    let mut diff = T::infinity();
    let mut converged = false;

    for level in 1..=max_level {
        h = h / lit(2.0);
        let mut level_acc = Accumulator::new();
        let mut k = 1usize;
        loop {
            let t = T::from_usize(k).unwrap() * h;
            if t > t_max {
                break;
            }
            let (r, l) = de_pair(t, a, b);
            level_acc.add(eval(r)?);
            level_acc.add(eval(l)?);
            k += 2;
        }
        estimate = prev / lit(2.0) + level_acc.value() * h;
        diff = (estimate - prev).abs();
        prev = estimate;
        if level >= 3 && (diff < tol || diff <= lit::<T>(8.0) * eps * estimate.abs()) {
            converged = true;
            break;
        }
    }
    Ok(QuadratureResult {
        value: estimate,
        error_estimate: diff,
        nodes,
        converged,
    })
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for GK_NODES[1], [3], [5], [7]
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gauss_kronrod_15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Result<(T, T)> {
    let c = (a + b) / lit(2.0);
    let h = (b - a) / lit(2.0);
    let fc = check_finite(f(c), c)?;
    let mut kronrod = fc * lit(GK_WEIGHTS[7]);
    let mut gauss = fc * lit(G_WEIGHTS[3]);
    for i in 0..7 {
        let dx = h * lit(GK_NODES[i]);
        let f1 = check_finite(f(c - dx), c - dx)?;
        let f2 = check_finite(f(c + dx), c + dx)?;
        kronrod = kronrod + (f1 + f2) * lit(GK_WEIGHTS[i]);
        if i % 2 == 1 {
            gauss = gauss + (f1 + f2) * lit(G_WEIGHTS[i / 2]);
        }
    }
    Ok((kronrod * h, (kronrod - gauss).abs() * h))
}

/// Globally adaptive Gauss-Kronrod (7-15) quadrature: the interval with the
/// largest error is bisected until the summed error falls below `tol`.
pub fn adaptive<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> Result<QuadratureResult<T>> {
    adaptive_with_cap(f, a, b, tol, ADAPTIVE_MAX_INTERVALS)
}

pub fn adaptive_with_cap<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    tol: T,
    max_intervals: usize,
) -> Result<QuadratureResult<T>> {
    if !(a < b) {
        return Err(Error::InvalidParameter(format!(
            "need a < b, got [{a}, {b}]"
        )));
    }
    let (v, e) = gauss_kronrod_15(&f, a, b)?;
    let mut pieces = vec![(a, b, v, e)];
    let mut nodes = 15;
    loop {
        let total_err = pieces.iter().fold(T::zero(), |s, p| s + p.3);
        if total_err <= tol {
            break;
        }
        if pieces.len() >= max_intervals {
            return Err(Error::NoConvergence {
                method: "adaptive",
                iterations: pieces.len(),
            });
        }
        let (worst, _) =
            pieces
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |(bi, be), (i, p)| {
                    if p.3 > be {
                        (i, p.3)
                    } else {
                        (bi, be)
                    }
                });
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = (lo + hi) / lit(2.0);
        let (v1, e1) = gauss_kronrod_15(&f, lo, mid)?;
        let (v2, e2) = gauss_kronrod_15(&f, mid, hi)?;
        nodes += 30;
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
    // sum left to right for a reproducible result
    pieces.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let mut acc = Accumulator::new();
    let mut err = T::zero();
    for p in &pieces {
        acc.add(p.2);
        err = err + p.3;
    }
    Ok(QuadratureResult {
        value: acc.value(),
        error_estimate: err,
        nodes,
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trapezoid_constant_and_trig() {
        let r = periodic_trapezoid(|_| 1.0, 16).unwrap();
        assert_eq!(r.value, 1.0);
        let r = periodic_trapezoid(|t: f64| (2.0 * PI * t).cos().powi(2), 64).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_jensen_log_two() {
        // m(x - 2) = log 2
        let f = |t: f64| {
            let z = num_complex::Complex::from_polar(1.0, 2.0 * PI * t);
            (z - 2.0).norm().ln()
        };
        let r = periodic_trapezoid(f, 256).unwrap();
        assert!((r.value - 2f64.ln()).abs() < 1e-10);
        let r = periodic_trapezoid_shifted(f, 256, 0.5).unwrap();
        assert!((r.value - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn trapezoid_rejects_bad_sizes_and_nan() {
        assert!(periodic_trapezoid(|_| 1.0, 12).is_err());
        assert!(periodic_trapezoid(|_| 1.0, 4).is_err());
        let err = periodic_trapezoid(|t: f64| if t == 0.25 { f64::NAN } else { 1.0 }, 8);
        assert_eq!(err.unwrap_err(), Error::NonFinite { location: 0.25 });
    }

    #[test]
    fn trapezoid_geometric_convergence() {
        // Re 1/(1 - ρ e^{2πit}) has mean 1 and trapezoid error ρ^n/(1-ρ^n)
        let rho = 0.5;
        let f = |t: f64| (1.0 / (1.0 - num_complex::Complex::from_polar(rho, 2.0 * PI * t))).re;
        let mut last = f64::INFINITY;
        for n in [8, 16, 32, 64] {
            let e = (periodic_trapezoid(f, n).unwrap().value - 1.0).abs();
            assert!(e <= (last * last).max(1e-13), "n = {n}: {e} vs {last}");
            last = e;
        }
        assert!(last < 1e-15);
    }

    #[test]
    fn tanh_sinh_beta_values() {
        let r = tanh_sinh_with_distances(
            |_, a: f64, b: f64| 1.0 / (a * b).sqrt(),
            0.0,
            1.0,
            1e-14,
            12,
        )
        .unwrap();
        assert!((r.value - PI).abs() < 1e-12, "{}", r.value - PI);
        assert!(r.converged);
        // B(1/2, 3/2) = π/2
        let r = tanh_sinh_with_distances(|_, a: f64, b: f64| (b / a).sqrt(), 0.0, 1.0, 1e-14, 12)
            .unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-12);
        let r = tanh_sinh(|_: f64| 1.0, 0.0, 1.0, 1e-15).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_elliptic_kernel() {
        // (π/20) 2F1(1/2,1/2;1;0.04); reference from mpmath
        let want = PI / 20.0 * 1.0102314478237051053;
        let r = tanh_sinh_with_distances(
            |t: f64, a: f64, b: f64| 1.0 / (a * b * (400.0 - 16.0 * t)).sqrt(),
            0.0,
            1.0,
            1e-13,
            12,
        )
        .unwrap();
        assert!((r.value - want).abs() < 1e-10, "{} vs {want}", r.value);
    }

    #[test]
    fn tanh_sinh_errors() {
        assert!(tanh_sinh(|x: f64| x, 1.0, 0.0, 1e-10).is_err());
        let e = tanh_sinh(
            |x: f64| {
                if (x - 0.5).abs() < 1e-3 {
                    f64::NAN
                } else {
                    1.0
                }
            },
            0.0,
            1.0,
            1e-12,
        );
        assert!(matches!(e, Err(Error::NonFinite { .. })));
        // level cap reached: flagged, not an error
        let r = tanh_sinh_with_distances(|x: f64, _, _| (40.0 * x).sin().abs(), 0.0, 1.0, 1e-15, 3)
            .unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn adaptive_polynomial_and_exp() {
        let r = adaptive(|x: f64| x * x, 0.0, 1.0, 1e-13).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
        let r = adaptive(f64::exp, 0.0, 1.0, 1e-13).unwrap();
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-12);
        let r = adaptive(|x: f64| x.abs().sqrt(), -1.0, 1.0, 1e-10).unwrap();
        assert!((r.value - 4.0 / 3.0).abs() < 1e-9);
        assert!(adaptive_with_cap(|x: f64| 1.0 / x.abs().sqrt(), -1.0, 1.0, 1e-14, 20).is_err());
    }

    #[test]
    fn sum_of_integrals_within_error() {
        let f = |x: f64| (3.0 * x).sin();
        let g = |x: f64| 1.0 / (1.0 + x * x);
        let fg = |x: f64| f(x) + g(x);
        let a = adaptive(f, 0.0, 2.0, 1e-12).unwrap();
        let b = adaptive(g, 0.0, 2.0, 1e-12).unwrap();
        let ab = adaptive(fg, 0.0, 2.0, 1e-12).unwrap();
        let slack = 2.0 * (a.error_estimate + b.error_estimate + ab.error_estimate) + 1e-15;
        assert!((ab.value - a.value - b.value).abs() <= slack);

        let a = tanh_sinh(f, 0.0, 2.0, 1e-12).unwrap();
        let b = tanh_sinh(g, 0.0, 2.0, 1e-12).unwrap();
        let ab = tanh_sinh(fg, 0.0, 2.0, 1e-12).unwrap();
        let slack = 2.0 * (a.error_estimate + b.error_estimate + ab.error_estimate) + 1e-15;
        assert!((ab.value - a.value - b.value).abs() <= slack);

        let p = |t: f64| (2.0 * PI * t).cos().exp();
        let q = |t: f64| (1.0 + 0.5 * (2.0 * PI * t).sin()).ln();
        let pq = |t: f64| p(t) + q(t);
        let a = periodic_trapezoid(p, 64).unwrap();
        let b = periodic_trapezoid(q, 64).unwrap();
        let ab = periodic_trapezoid(pq, 64).unwrap();
        let slack = 2.0 * (a.error_estimate + b.error_estimate + ab.error_estimate) + 1e-15;
        assert!((ab.value - a.value - b.value).abs() <= slack);
    }

    #[test]
    fn extended_precision_tanh_sinh() {
        use crate::Extended;
        use num_traits::Float;
        let r = tanh_sinh_with_distances(
            |_, a: Extended, b: Extended| (a * b).sqrt().recip(),
            Extended::of(0.0),
            Extended::of(1.0),
            Extended::of(1e-25),
            10,
        )
        .unwrap();
        let err = (r.value - <Extended as num_traits::FloatConst>::PI()).abs();
        assert!(err < Extended::of(1e-20), "{err:e}");
    }
}
