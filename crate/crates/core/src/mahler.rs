//! Mahler measure evaluators.
//!
//! Three routes are provided: the tensor trapezoid rule on the torus, the
//! Jensen reduction of a two-variable polynomial to a one-dimensional
//! integral, and fast paths for the families.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{
    make_family, reduced_model_coefficients, Coefficient, DenseLaurent, FamilySpec,
    LaurentPolynomial,
};
use crate::quadrature::{
    periodic_trapezoid_to_tolerance, tanh_sinh_with_distances, Accumulator, QuadratureResult,
    TANH_SINH_MAX_LEVEL, TRAPEZOID_MAX_NODES,
};
use crate::roots::{poly_roots, quadratic_roots, quadratic_roots_general, BranchPair};
use crate::scalar::{lit, log_floor, to_f64, Real};
use crate::specfun::cubic_zeros;

/// Default trapezoid node count for the measures.
pub const DEFAULT_NODES: usize = 1 << 12;
/// Nodes used to locate the points where a root crosses the unit circle.
pub const DEFAULT_SCAN_NODES: usize = 512;
/// Roots with `|log|y|| <= ON_CIRCLE` are treated as lying on the circle.
pub const ON_CIRCLE: f64 = 1e-10;
/// A local minimum of `min_j |log|y_j||` below this is taken as a crossing.
pub const CROSSING_ACCEPT: f64 = 1e-6;

/// Grid offsets, in units of the node spacing, one per torus coordinate.
/// Different offsets keep symmetric zero sets such as `x + 1/x + y + 1/y = 0`
/// off the grid.
const TORUS_SHIFTS: [f64; 3] = [0.5, 0.618_033_988_749_894_8, 0.414_213_562_373_095_05];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Torus,
    Jensen,
    FamilyFast,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Torus => "torus",
            Method::Jensen => "jensen",
            Method::FamilyFast => "family_fast",
        })
    }
}

/// A Mahler measure (in nats) with the method that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue<T> {
    pub value: T,
    pub method: Method,
    pub error_estimate: T,
    pub nodes: usize,
    pub lambda: Option<f64>,
    pub family: Option<FamilySpec>,
}

impl<T: Real> MeasureValue<T> {
    fn tagged(mut self, lambda: Option<f64>, family: Option<FamilySpec>) -> Self {
        self.lambda = lambda;
        self.family = family;
        self
    }
}

/// Node budgets and tolerance shared by the evaluators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureOptions {
    /// Initial node count of the trapezoid rules.
    pub nodes: usize,
    /// Node count at which doubling stops.
    pub max_nodes: usize,
    /// Requested absolute accuracy.
    pub tolerance: f64,
    /// Grid used to locate kinks of the Jensen integrand.
    pub scan_nodes: usize,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            nodes: DEFAULT_NODES,
            max_nodes: TRAPEZOID_MAX_NODES,
            tolerance: 1e-12,
            scan_nodes: DEFAULT_SCAN_NODES,
        }
    }
}

impl MeasureOptions {
    pub fn with_nodes(n: usize) -> Self {
        Self {
            nodes: n,
            max_nodes: n.max(TRAPEZOID_MAX_NODES),
            ..Self::default()
        }
    }
}

fn unit<T: Real>(theta: T) -> Complex<T> {
    let a = T::TAU() * theta;
    Complex::new(a.cos(), a.sin())
}

fn safe_log<T: Real>(modulus: T, location: impl FnOnce() -> Vec<f64>) -> Result<T> {
    if modulus < log_floor() {
        Err(Error::TorusZero {
            location: location(),
        })
    } else {
        Ok(modulus.ln())
    }
}

/// Mean of `log|P|` over a shifted `n^k` grid on the torus, `k <= 3`.
///
/// Where `P` vanishes on the torus the rule converges slowly and not
/// monotonically, so the error estimate is the larger of the last two
/// differences between the rules on `n`, `n/2` and `n/4` nodes per axis.
pub fn mahler_torus<T: Real, C: Coefficient>(
    p: &LaurentPolynomial<C>,
    n: usize,
) -> Result<MeasureValue<T>> {
    if p.is_zero() {
        return Err(Error::InvalidParameter(
            "the zero polynomial has no measure".into(),
        ));
    }
    let k = p.nvars();
    if k > 3 {
        return Err(Error::InvalidParameter(format!(
            "torus method supports up to 3 variables, got {k}"
        )));
    }
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "node count must be a power of two >= 8, got {n}"
        )));
    }
    let fine = torus_mean::<T, C>(p, n, &TORUS_SHIFTS)?;
    let coarse = torus_mean::<T, C>(p, n / 2, &TORUS_SHIFTS)?;
    let coarser = torus_mean::<T, C>(p, n / 4, &TORUS_SHIFTS)?;
    if !(fine.is_finite() && coarse.is_finite() && coarser.is_finite()) {
        return Err(Error::NonFinite { location: f64::NAN });
    }
    let nodes = n.pow(k as u32) + (n / 2).pow(k as u32) + (n / 4).pow(k as u32);
    Ok(MeasureValue {
        value: fine,
        method: Method::Torus,
        error_estimate: (fine - coarse).abs().max((coarse - coarser).abs()),
        nodes,
        lambda: None,
        family: None,
    })
}

fn torus_mean<T: Real, C: Coefficient>(
    p: &LaurentPolynomial<C>,
    n: usize,
    shifts: &[f64; 3],
) -> Result<T> {
    let k = p.nvars();
    let last = k - 1;
    let nt = T::from_usize(n).unwrap();
    let theta = |axis: usize, j: usize| (T::from_usize(j).unwrap() + lit(shifts[axis])) / nt;

    // P = z^shift Σ_j a_j(outer) z^j in the last variable; |z^shift| = 1
    let view = if k == 1 {
        None
    } else {
        Some(p.as_poly_in(last)?)
    };
    let dense = if k == 1 {
        Some(p.to_dense::<T>(0)?)
    } else {
        None
    };
    let inner: Vec<Complex<T>> = (0..n).map(|j| unit(theta(last, j))).collect();
    let outer_count = n.pow(last as u32);

    let rows: Vec<T> = (0..outer_count)
        .into_par_iter()
        .map(|idx| -> Result<T> {
            let mut outer_theta = Vec::with_capacity(last);
            let mut rem = idx;
            for axis in 0..last {
                outer_theta.push(theta(axis, rem % n));
                rem /= n;
            }
            let mut point: Vec<Complex<T>> = outer_theta.iter().map(|&t| unit(t)).collect();
            point.push(Complex::new(T::one(), T::zero()));
            let a: Vec<Complex<T>> = match (&view, &dense) {
                (Some(view), _) => view
                    .coeffs
                    .iter()
                    .map(|c| c.evaluate(&point))
                    .collect::<Result<Vec<_>>>()?,
                (None, Some(d)) => d
                    .coeffs
                    .iter()
                    .map(|&c| Complex::new(c, T::zero()))
                    .collect(),
                (None, None) => unreachable!(),
            };
            let mut acc = Accumulator::new();
            for (j, &z) in inner.iter().enumerate() {
                let mut v = Complex::new(T::zero(), T::zero());
                for &c in a.iter().rev() {
                    v = v * z + c;
                }
                let l = safe_log(v.norm(), || {
                    let mut loc: Vec<f64> = outer_theta.iter().map(|&t| to_f64(t)).collect();
                    loc.push(to_f64(theta(last, j)));
                    loc
                })?;
                acc.add(l);
            }
            Ok(acc.value() / nt)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut total = Accumulator::new();
    for r in rows {
        total.add(r);
    }
    Ok(total.value() / T::from_usize(outer_count).unwrap())
}

/// Jensen data of a two-variable polynomial: its coefficients `a_j(x)` as a
/// polynomial in `y`.
struct Fibration<T> {
    coeffs: Vec<DenseLaurent<T>>,
}

/// The Jensen integrand at one point of the circle.
#[derive(Clone, Copy, Debug)]
struct Fiber<T> {
    value: T,
    /// Roots outside, on and inside the unit circle.
    counts: [usize; 3],
    /// `min_j |log|y_j||` over the roots not on the circle.
    gap: T,
}

impl<T: Real> Fibration<T> {
    fn new<C: Coefficient>(p: &LaurentPolynomial<C>) -> Result<Self> {
        if p.nvars() != 2 {
            return Err(Error::InvalidParameter(format!(
                "Jensen method needs 2 variables, got {}",
                p.nvars()
            )));
        }
        if p.is_zero() {
            return Err(Error::InvalidParameter(
                "the zero polynomial has no measure".into(),
            ));
        }
        let view = p.as_poly_in(1)?;
        let coeffs = view
            .coeffs
            .iter()
            .map(|c| c.to_dense::<T>(0))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs })
    }

    fn fiber(&self, theta: T) -> Result<Fiber<T>> {
        let x = unit(theta);
        let zero = Complex::new(T::zero(), T::zero());
        let c: Vec<Complex<T>> = self.coeffs.iter().map(|a| a.eval(x)).collect();
        let Some(d) = c.iter().rposition(|v| *v != zero) else {
            return Err(Error::ZeroFiber(to_f64(theta)));
        };
        let lead = c[d].norm();
        let mut value = if lead < log_floor() {
            T::neg_infinity()
        } else {
            lead.ln()
        };
        let roots = match d {
            0 => vec![],
            1 => vec![-c[0] / c[1]],
            2 => {
                let b = quadratic_roots_general(c[2], c[1], c[0]);
                vec![b.y_minus, b.y_plus]
            }
            _ => poly_roots(&c[..=d])?,
        };
        let on: T = lit(ON_CIRCLE);
        let mut counts = [0usize; 3];
        let mut gap = T::infinity();
        for r in roots {
            let m = r.norm();
            let l = if m.is_zero() {
                T::neg_infinity()
            } else {
                m.ln()
            };
            if l.abs() <= on {
                counts[1] += 1;
            } else {
                gap = gap.min(l.abs());
                counts[if l > T::zero() { 0 } else { 2 }] += 1;
            }
            if l > T::zero() {
                value = value + l;
            }
        }
        Ok(Fiber { value, counts, gap })
    }

    /// Points of `[0, 1)` where the integrand may fail to be smooth.
    fn kinks(&self, scan: usize) -> Result<Vec<T>> {
        let nt = T::from_usize(scan).unwrap();
        let step = nt.recip();
        let at = |i: usize| (T::from_usize(i).unwrap() + lit(0.5)) / nt;
        let samples = (0..scan)
            .into_par_iter()
            .map(|i| self.fiber(at(i)))
            .collect::<Result<Vec<_>>>()?;

        let mut splits = Vec::new();
        for i in 0..scan {
            let j = (i + 1) % scan;
            if samples[i].counts != samples[j].counts {
                splits.push(self.bisect_count(at(i), at(i) + step, samples[i].counts)?);
            }
        }
        let on: T = lit(ON_CIRCLE);
        for i in 0..scan {
            let g = samples[i].gap;
            let prev = samples[(i + scan - 1) % scan].gap;
            let next = samples[(i + 1) % scan].gap;
            if g > on && g < T::one() && g <= prev && g <= next {
                let (t, gmin) = self.golden_gap(at(i) - step, at(i) + step)?;
                if gmin < lit(CROSSING_ACCEPT) {
                    splits.push(t);
                }
            }
        }
        splits.extend(self.lead_zeros_on_circle()?);

        for s in splits.iter_mut() {
            *s = *s - s.floor();
        }
        splits.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut out: Vec<T> = Vec::with_capacity(splits.len());
        let close: T = lit(1e-12);
        for s in splits {
            if out.last().map_or(true, |&l| s - l > close) {
                out.push(s);
            }
        }
        if out.len() > 1 && *out.first().unwrap() + T::one() - *out.last().unwrap() <= close {
            out.pop();
        }
        Ok(out)
    }

    fn bisect_count(&self, mut lo: T, mut hi: T, at_lo: [usize; 3]) -> Result<T> {
        for _ in 0..200 {
            let mid = (lo + hi) / lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.fiber(mid)?.counts == at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo + hi) / lit(2.0))
    }

    fn golden_gap(&self, mut a: T, mut b: T) -> Result<(T, T)> {
        let r: T = lit(0.618_033_988_749_894_8);
        let g = |t: T| -> Result<T> {
            let f = self.fiber(t)?;
            Ok(if f.counts[1] > 0 { T::zero() } else { f.gap })
        };
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let mut fc = g(c)?;
        let mut fd = g(d)?;
        for _ in 0..200 {
            if b - a <= T::epsilon() * lit(4.0) {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = g(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = g(d)?;
            }
        }
        Ok(if fc <= fd { (c, fc) } else { (d, fd) })
    }

    /// Angles where the leading coefficient vanishes on the circle; the
    /// integrand has a logarithmic singularity there when `P` has a factor
    /// depending on `x` alone.
    fn lead_zeros_on_circle(&self) -> Result<Vec<T>> {
        let Some(lead) = self.coeffs.iter().rev().find(|a| !a.is_zero()) else {
            return Ok(vec![]);
        };
        let first = lead.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        let last = lead.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        if last == first {
            return Ok(vec![]);
        }
        let c: Vec<Complex<T>> = lead.coeffs[first..=last]
            .iter()
            .map(|&v| Complex::new(v, T::zero()))
            .collect();
        let tol: T = lit(1e-6);
        Ok(poly_roots(&c)?
            .into_iter()
            .filter(|z| (z.norm() - T::one()).abs() < tol)
            .map(|z| z.im.atan2(z.re) / T::TAU())
            .collect())
    }
}

/// Jensen reduction: `m(P) = ∫₀¹ log|a_d(x)| + Σ_j log⁺|y_j(x)| dθ`,
/// `x = e^{2πiθ}`, with `y_j(x)` the roots of `P(x, ·)`.
pub fn mahler_jensen_2var<T: Real, C: Coefficient>(
    p: &LaurentPolynomial<C>,
    n: usize,
) -> Result<MeasureValue<T>> {
    mahler_jensen_2var_with(p, &MeasureOptions::with_nodes(n))
}

/// As [`mahler_jensen_2var`]. Where a root crosses the unit circle the
/// integrand has a kink; if there is any, the circle is cut there and every
/// arc is integrated by tanh-sinh. Otherwise the trapezoid rule with node
/// doubling is used.
pub fn mahler_jensen_2var_with<T: Real, C: Coefficient>(
    p: &LaurentPolynomial<C>,
    opts: &MeasureOptions,
) -> Result<MeasureValue<T>> {
    let fib = Fibration::<T>::new(p)?;
    let splits = fib.kinks(opts.scan_nodes.max(16))?;
    let tol: T = lit(opts.tolerance);
    let res = if splits.is_empty() {
        let f = |t: T| fib.fiber(t).map(|f| f.value).unwrap_or_else(|_| T::nan());
        periodic_trapezoid_to_tolerance(
            f,
            opts.nodes,
            opts.max_nodes.max(opts.nodes),
            tol,
            lit(0.5),
        )?
    } else {
        let m = splits.len();
        let arcs: Vec<(T, T)> = (0..m)
            .map(|i| {
                let a = splits[i];
                let b = if i + 1 < m {
                    splits[i + 1]
                } else {
                    splits[0] + T::one()
                };
                (a, b)
            })
            .collect();
        let parts = arcs
            .par_iter()
            .map(|&(a, b)| {
                tanh_sinh_with_distances(
                    |t, _, _| fib.fiber(t).map(|f| f.value).unwrap_or_else(|_| T::nan()),
                    a,
                    b,
                    tol,
                    TANH_SINH_MAX_LEVEL,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        parts.into_iter().reduce(QuadratureResult::combine).unwrap()
    };
    Ok(MeasureValue {
        value: res.value,
        method: Method::Jensen,
        error_estimate: res.error_estimate,
        nodes: res.nodes,
        lambda: None,
        family: None,
    })
}

/// `x(t) = e^{2πit}(1 - e^{2πit})`, the image of the unit circle under
/// `X ↦ (X-1)/X²` after `X ↦ 1/X`.
pub fn x_of_t<T: Real>(t: T) -> Complex<T> {
    let e = unit(t);
    e * (Complex::new(T::one(), T::zero()) - e)
}

/// Roots of `y² + (2x²+λx+1)y + x⁴`, ordered by modulus.
pub fn y_branches<T: Real>(lambda: T, x: Complex<T>) -> BranchPair<T> {
    let (b, c) = reduced_model_coefficients(lambda, x);
    quadratic_roots(b, c)
}

/// The same roots from `-(λx+1)(1/2 + u ± √(1/4 + u))`, `u = x²/(λx+1)`;
/// `None` when `λx + 1 = 0`.
pub fn y_branches_closed_form<T: Real>(lambda: T, x: Complex<T>) -> Option<BranchPair<T>> {
    let one = Complex::new(T::one(), T::zero());
    let l = x * lambda + one;
    if l.norm().is_zero() {
        return None;
    }
    let half: T = lit(0.5);
    let u = x * x / l;
    let s = (u + lit::<T>(0.25)).sqrt();
    let a = -(l * (u + half + s));
    let b = -(l * (u + half - s));
    let (lo, hi) = if a.norm() <= b.norm() { (a, b) } else { (b, a) };
    Some(BranchPair {
        y_minus: lo,
        y_plus: hi,
    })
}

/// Extremes of `|y₋|` and `|y₊|` along `x(t)`, `t ∈ [-1/2, 1/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchExtremes<T> {
    pub max_abs_y_minus: T,
    pub min_abs_y_plus: T,
    /// `t` where the maximum of `|y₋|` and the minimum of `|y₊|` occur.
    pub arg_t_at_extremes: (T, T),
}

/// Scans `t_j = -1/2 + j/n`, `j = 0..=n`.
pub fn branch_extremes<T: Real>(lambda: T, n: usize) -> Result<BranchExtremes<T>> {
    if n < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 samples, got {n}"
        )));
    }
    let nt = T::from_usize(n).unwrap();
    let half: T = lit(0.5);
    let mut out = BranchExtremes {
        max_abs_y_minus: T::neg_infinity(),
        min_abs_y_plus: T::infinity(),
        arg_t_at_extremes: (T::zero(), T::zero()),
    };
    for j in 0..=n {
        // exact t = 0 for even n
        let t = (T::from_usize(j).unwrap() - nt * half) / nt;
        let b = y_branches(lambda, x_of_t(t));
        let (m, p) = (b.y_minus.norm(), b.y_plus.norm());
        if m > out.max_abs_y_minus {
            out.max_abs_y_minus = m;
            out.arg_t_at_extremes.0 = t;
        }
        if p < out.min_abs_y_plus {
            out.min_abs_y_plus = p;
            out.arg_t_at_extremes.1 = t;
        }
    }
    Ok(out)
}

/// Whether the one-branch formula for `q` is available.
pub fn q_fast_regime<T: Real>(lambda: T) -> bool {
    lambda <= lit(-4.0) || lambda >= lit(13.0)
}

/// `q(λ) = m(Q_{λ+4}(X-1, Y)) = ∫₀¹ log|y₊(x(t))| dt`.
///
/// For `λ <= -4` and `λ >= 13` the integral is evaluated directly;
/// elsewhere the expanded polynomial goes through the Jensen method.
pub fn q_measure<T: Real>(lambda: T, opts: &MeasureOptions) -> Result<MeasureValue<T>> {
    let l64 = to_f64(lambda);
    let family = Some(FamilySpec::q_shifted(l64));
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda = {l64} is not finite"
        )));
    }
    if !q_fast_regime(lambda) {
        let p = make_family(&FamilySpec::q_shifted(l64))?;
        return Ok(mahler_jensen_2var_with::<T, _>(&p, opts)?.tagged(Some(l64), family));
    }
    let f = |t: T| y_branches(lambda, x_of_t(t)).y_plus.norm().ln();
    let tol: T = lit(opts.tolerance);

    // At t = ±1/6 the curve passes through x = 1, where the fibre is
    // y² + (λ+3)y + 1. For -5 <= λ <= -1 both roots lie on the unit circle
    // there and log|y₊| has a kink; just below -5 a branch point is close.
    let (x0, x1, x2) = cubic_zeros(lambda)?;
    let near: T = lit(0.05);
    let kinked = (lambda + lit(3.0)).abs() <= lit(2.0);
    let res = if kinked || [x0, x1, x2].iter().any(|&x| (x - T::one()).abs() < near) {
        let sixth = T::one() / lit(6.0);
        let a =
            tanh_sinh_with_distances(|t, _, _| f(t), T::zero(), sixth, tol, TANH_SINH_MAX_LEVEL)?;
        let b =
            tanh_sinh_with_distances(|t, _, _| f(t), sixth, lit(0.5), tol, TANH_SINH_MAX_LEVEL)?;
        a.combine(b).scaled(lit(2.0))
    } else {
        periodic_trapezoid_to_tolerance(
            f,
            opts.nodes,
            opts.max_nodes.max(opts.nodes),
            tol,
            lit(0.5),
        )?
    };
    Ok(MeasureValue {
        value: res.value,
        method: Method::FamilyFast,
        error_estimate: res.error_estimate,
        nodes: res.nodes,
        lambda: Some(l64),
        family,
    })
}

/// `p(λ) = m(P_λ)` by the Jensen method.
pub fn p_measure<T: Real>(lambda: T, opts: &MeasureOptions) -> Result<MeasureValue<T>> {
    let spec = FamilySpec::p(to_f64(lambda));
    let p = make_family(&spec)?;
    Ok(mahler_jensen_2var_with::<T, _>(&p, opts)?.tagged(Some(spec.parameter), Some(spec)))
}

/// `r(λ) = m(R_λ)` by the Jensen method; `r(-λ)` is computed as well and the
/// two must agree to `1e-10`.
pub fn r_measure<T: Real>(lambda: T, opts: &MeasureOptions) -> Result<MeasureValue<T>> {
    let spec = FamilySpec::r(to_f64(lambda));
    let v = mahler_jensen_2var_with::<T, _>(&make_family(&spec)?, opts)?;
    if spec.parameter != 0.0 {
        let w =
            mahler_jensen_2var_with::<T, _>(&make_family(&FamilySpec::r(-spec.parameter))?, opts)?;
        let diff = to_f64((v.value - w.value).abs());
        if diff > 1e-10 {
            return Err(Error::Inconsistent(format!(
                "r({0}) and r(-{0}) differ by {diff:e}",
                spec.parameter
            )));
        }
    }
    Ok(v.tagged(Some(spec.parameter), Some(spec)))
}

/// Measure of a family member by the requested method.
pub fn family_measure<T: Real>(
    spec: &FamilySpec,
    method: Method,
    opts: &MeasureOptions,
) -> Result<MeasureValue<T>> {
    let lam = spec.parameter;
    match method {
        Method::Torus => {
            let p = make_family(spec)?;
            Ok(mahler_torus::<T, _>(&p, opts.nodes)?.tagged(Some(lam), Some(*spec)))
        }
        Method::Jensen => {
            let p = make_family(spec)?;
            Ok(mahler_jensen_2var_with::<T, _>(&p, opts)?.tagged(Some(lam), Some(*spec)))
        }
        Method::FamilyFast => match spec.family {
            crate::poly::Family::QShifted => q_measure(lit(lam), opts),
            crate::poly::Family::P => p_measure(lit(lam), opts),
            crate::poly::Family::R => r_measure(lit(lam), opts),
            crate::poly::Family::Q => family_measure(spec, Method::Jensen, opts),
        },
    }
}
