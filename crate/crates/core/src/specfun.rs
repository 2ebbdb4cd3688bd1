//! Special functions and the closed-form derivatives of the three measures.
//!
//! `₂F₁` is summed as a power series on `(-1, 0.95]`; the two instances that
//! occur here, `₂F₁(1/2,1/2;1|z)` and `₂F₁(1/3,2/3;1|z)`, also have
//! arithmetic-geometric-mean evaluations valid for every `z < 1`.
//!
//! The derivative formulas integrate `1/√(-(1+λx)(1+λx+4x²))` between zeros
//! of the cubic `(1+λx)(1+λx+4x²)`. The zeros are
//! `x₀ = -1/λ`, `x₁ = -(λ+√(λ²-16))/8`, `x₂ = -(λ-√(λ²-16))/8`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mahler::{q_measure, MeasureOptions};
use crate::quadrature::{tanh_sinh_with_distances, QuadratureResult, TANH_SINH_MAX_LEVEL};
use crate::scalar::{lit, to_f64, Real};

/// Largest argument accepted by the power series.
pub const SERIES_MAX_Z: f64 = 0.95;
/// Term cap of the power series.
pub const SERIES_MAX_TERMS: usize = 100_000;
/// Absolute tolerance for the tanh-sinh evaluations in this module.
pub const INTEGRAL_TOL: f64 = 1e-14;

/// `₂F₁(a, b; c | z)` with rational parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyp2F1Spec<T> {
    pub a: Ratio<i64>,
    pub b: Ratio<i64>,
    pub c: Ratio<i64>,
    pub z: T,
}

impl<T: Real> Hyp2F1Spec<T> {
    pub fn new(a: (i64, i64), b: (i64, i64), c: (i64, i64), z: T) -> Self {
        Self {
            a: Ratio::new(a.0, a.1),
            b: Ratio::new(b.0, b.1),
            c: Ratio::new(c.0, c.1),
            z,
        }
    }

    /// `₂F₁(1/2, 1/2; 1 | z)`.
    pub fn half_half(z: T) -> Self {
        Self::new((1, 2), (1, 2), (1, 1), z)
    }

    /// `₂F₁(1/3, 2/3; 1 | z)`.
    pub fn third_two_thirds(z: T) -> Self {
        Self::new((1, 3), (2, 3), (1, 1), z)
    }

    fn is(&self, a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> bool {
        let (a, b, c) = (
            Ratio::new(a.0, a.1),
            Ratio::new(b.0, b.1),
            Ratio::new(c.0, c.1),
        );
        self.c == c && ((self.a == a && self.b == b) || (self.a == b && self.b == a))
    }
}

fn ratio_to<T: Real>(r: Ratio<i64>) -> T {
    T::from_i64(*r.numer()).unwrap() / T::from_i64(*r.denom()).unwrap()
}

/// Evaluates `₂F₁`: the power series on `(-1, 0.95]`, and the AGM forms of
/// the `(1/2,1/2;1)` and `(1/3,2/3;1)` cases on `(0.95, 1)`.
pub fn hyp2f1<T: Real>(spec: &Hyp2F1Spec<T>) -> Result<T> {
    let z = spec.z;
    if *spec.c.denom() == 1 && *spec.c.numer() <= 0 {
        return Err(Error::InvalidParameter(format!(
            "c = {} is a non-positive integer",
            spec.c
        )));
    }
    if z > lit(-1.0) && z <= lit(SERIES_MAX_Z) {
        return hyp2f1_series(ratio_to(spec.a), ratio_to(spec.b), ratio_to(spec.c), z);
    }
    if z < T::one() && spec.is((1, 2), (1, 2), (1, 1)) {
        return hyp2f1_half_half_agm(z);
    }
    if z < T::one() && spec.is((1, 3), (2, 3), (1, 1)) {
        return hyp2f1_third_two_thirds_agm(z);
    }
    Err(Error::Hyp2F1Domain(to_f64(z)))
}

/// Gauss series `Σ (a)ₙ(b)ₙ/((c)ₙ n!) zⁿ`, summed until a term falls below
/// `ε·|partial sum|`.
pub fn hyp2f1_series<T: Real>(a: T, b: T, c: T, z: T) -> Result<T> {
    if !(z > lit(-1.0) && z <= lit(SERIES_MAX_Z)) {
        return Err(Error::Hyp2F1Domain(to_f64(z)));
    }
    let eps = T::epsilon();
    let mut term = T::one();
    let mut sum = T::one();
    for n in 0..SERIES_MAX_TERMS {
        let nf = T::from_usize(n).unwrap();
        term = term * (a + nf) * (b + nf) / ((c + nf) * (nf + T::one())) * z;
        sum = sum + term;
        if term.abs() <= eps * sum.abs() / lit(4.0) {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        method: "hypergeometric series",
        iterations: SERIES_MAX_TERMS,
    })
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm<T: Real>(a: T, b: T) -> T {
    let (mut a, mut b) = (a, b);
    for _ in 0..64 {
        let an = (a + b) / lit(2.0);
        let bn = (a * b).sqrt();
        if an == a && bn == b {
            break;
        }
        let done = (an - bn).abs() <= T::epsilon() * an;
        a = an;
        b = bn;
        if done {
            break;
        }
    }
    (a + b) / lit(2.0)
}

/// Cubic analogue of the AGM: `a ← (a+2b)/3`, `b ← ∛(b(a²+ab+b²)/3)`.
pub fn agm_cubic<T: Real>(a: T, b: T) -> T {
    let (mut a, mut b) = (a, b);
    let three: T = lit(3.0);
    for _ in 0..64 {
        let an = (a + b + b) / three;
        let bn = (b * (a * a + a * b + b * b) / three).cbrt();
        let done = (an - bn).abs() <= T::epsilon() * an;
        a = an;
        b = bn;
        if done {
            break;
        }
    }
    (a + b + b) / three
}

/// `₂F₁(1/2,1/2;1|m) = 1/AGM(1, √(1-m))`, any `m < 1`.
pub fn hyp2f1_half_half_agm<T: Real>(m: T) -> Result<T> {
    if !(m < T::one()) {
        return Err(Error::Hyp2F1Domain(to_f64(m)));
    }
    Ok(agm(T::one(), (T::one() - m).sqrt()).recip())
}

/// `₂F₁(1/3,2/3;1|z) = 1/AGM₃(1, ∛(1-z))`, any `z < 1`.
pub fn hyp2f1_third_two_thirds_agm<T: Real>(z: T) -> Result<T> {
    if !(z < T::one()) {
        return Err(Error::Hyp2F1Domain(to_f64(z)));
    }
    Ok(agm_cubic(T::one(), (T::one() - z).cbrt()).recip())
}

/// Complete elliptic integral of the first kind, parameter `m = k²`.
pub fn elliptic_k<T: Real>(m: T) -> Result<T> {
    Ok(T::FRAC_PI_2() * hyp2f1_half_half_agm(m)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuBranch {
    /// `μ > 0`, `λ > 4`.
    Positive,
    /// `μ < 0`, `λ < -4`.
    Negative,
}

/// `λ = 2(1+μ²)/μ` with `|μ| <= 1`; `|μ| < 1/2` exactly when `|λ| > 5`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuParameter<T> {
    pub mu: T,
    pub lambda: T,
    pub branch: MuBranch,
}

pub fn lambda_of_mu<T: Real>(mu: T) -> T {
    lit::<T>(2.0) * (T::one() + mu * mu) / mu
}

/// The root of `2μ² - λμ + 2 = 0` of modulus at most one.
pub fn mu_of_lambda<T: Real>(lambda: T) -> Result<MuParameter<T>> {
    let four: T = lit(4.0);
    if !(lambda.abs() >= four) {
        return Err(Error::InvalidParameter(format!(
            "mu is complex for |lambda| < 4 (lambda = {lambda})"
        )));
    }
    let s = (lambda * lambda - lit(16.0)).sqrt();
    // the two roots multiply to one; take the reciprocal of the large one
    let mu = four / (lambda + lambda.signum() * s);
    let branch = if lambda > T::zero() {
        MuBranch::Positive
    } else {
        MuBranch::Negative
    };
    Ok(MuParameter { mu, lambda, branch })
}

/// The zeros `(x₀, x₁, x₂)` of `(1+λx)(1+λx+4x²)`, real for `|λ| >= 4`.
pub fn cubic_zeros<T: Real>(lambda: T) -> Result<(T, T, T)> {
    let four: T = lit(4.0);
    if !(lambda.abs() >= four) {
        return Err(Error::InvalidParameter(format!(
            "x1, x2 are complex for |lambda| < 4 (lambda = {lambda})"
        )));
    }
    let eight: T = lit(8.0);
    let s = (lambda * lambda - lit(16.0)).sqrt();
    let x0 = -lambda.recip();
    // x₁x₂ = 1/4; compute the larger one directly
    let (x1, x2) = if lambda > T::zero() {
        let x1 = -(lambda + s) / eight;
        (x1, (four * x1).recip())
    } else {
        let x2 = -(lambda - s) / eight;
        ((four * x2).recip(), x2)
    };
    Ok((x0, x1, x2))
}

/// `(1 - √(1-4x))/2` without cancellation.
fn z_minus<T: Real>(x: T) -> T {
    let two: T = lit(2.0);
    two * x / (T::one() + (T::one() - lit::<T>(4.0) * x).sqrt())
}

fn z_plus<T: Real>(x: T) -> T {
    (T::one() + (T::one() - lit::<T>(4.0) * x).sqrt()) / lit(2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `λ < -5`.
    Negative,
    /// `λ > 13`.
    Positive,
}

/// Zeros of the cubic and their preimages under `x = z(1-z)` in `(-1, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularityProfile<T> {
    pub x0: T,
    pub x1: T,
    pub x2: T,
    pub z_points: Vec<T>,
    pub regime: Regime,
}

pub fn regime_of<T: Real>(lambda: T) -> Result<Regime> {
    if lambda < lit(-5.0) {
        Ok(Regime::Negative)
    } else if lambda > lit(13.0) {
        Ok(Regime::Positive)
    } else {
        Err(Error::UnsupportedRegime {
            lambda: to_f64(lambda),
            regime: "lambda < -5 or lambda > 13",
        })
    }
}

/// Zeros and z-images for `λ < -5` or `λ > 13`, with the ordering
/// `0 < x₀ < x₁ < 1/4 < 1 < x₂` resp. `x₁ < -2 < x₂ < x₀ < 0` checked.
pub fn singular_points<T: Real>(lambda: T) -> Result<SingularityProfile<T>> {
    let profile = singular_points_unchecked(lambda)?;
    if ordering_margin(&profile) > T::zero() {
        Ok(profile)
    } else {
        Err(Error::Inconsistent(format!(
            "singularity ordering violated at lambda = {lambda}"
        )))
    }
}

/// As [`singular_points`] without the ordering check.
pub fn singular_points_unchecked<T: Real>(lambda: T) -> Result<SingularityProfile<T>> {
    let regime = regime_of(lambda)?;
    let (x0, x1, x2) = cubic_zeros(lambda)?;
    let z_points = match regime {
        Regime::Negative => vec![z_minus(x0), z_minus(x1), z_plus(x1), z_plus(x0)],
        Regime::Positive => vec![z_minus(x2), z_minus(x0)],
    };
    Ok(SingularityProfile {
        x0,
        x1,
        x2,
        z_points,
        regime,
    })
}

/// Smallest step in the chain of strict inequalities the profile must
/// satisfy (including the z-points and their bounds); positive iff all hold.
pub fn ordering_margin<T: Real>(p: &SingularityProfile<T>) -> T {
    let chain: Vec<T> = match p.regime {
        Regime::Negative => vec![T::zero(), p.x0, p.x1, lit(0.25), T::one(), p.x2],
        Regime::Positive => vec![p.x1, lit(-2.0), p.x2, p.x0, T::zero()],
    };
    let lo = match p.regime {
        Regime::Negative => T::zero(),
        Regime::Positive => -T::one(),
    };
    let mut zs = vec![lo];
    zs.extend(p.z_points.iter().copied());
    zs.push(T::one());
    chain
        .windows(2)
        .chain(zs.windows(2))
        .map(|w| w[1] - w[0])
        .fold(T::infinity(), T::min)
}

/// `dp/dλ = ₂F₁(1/3,2/3;1 | 27(λ+4)²/(λ+8)³) / (λ+8)`, `λ > 5`.
pub fn dp_dlambda<T: Real>(lambda: T) -> Result<T> {
    if !(lambda > lit(5.0)) {
        return Err(Error::UnsupportedRegime {
            lambda: to_f64(lambda),
            regime: "lambda > 5",
        });
    }
    let l4 = lambda + lit(4.0);
    let l8 = lambda + lit(8.0);
    let z = lit::<T>(27.0) * l4 * l4 / (l8 * l8 * l8);
    if !(z < T::one()) {
        return Err(Error::Hyp2F1Domain(to_f64(z)));
    }
    Ok(hyp2f1(&Hyp2F1Spec::third_two_thirds(z))? / l8)
}

/// `dr/dλ = sign(λ) ₂F₁(1/2,1/2;1 | 16/λ²) / |λ|`, `|λ| > 4`.
pub fn dr_dlambda<T: Real>(lambda: T) -> Result<T> {
    if !(lambda.abs() > lit(4.0)) {
        return Err(Error::UnsupportedRegime {
            lambda: to_f64(lambda),
            regime: "|lambda| > 4",
        });
    }
    let m = lit::<T>(16.0) / (lambda * lambda);
    Ok(hyp2f1_half_half_agm(m)? / lambda)
}

/// `dr/dλ = sign(λ)/π ∫₀¹ dt/√(t(1-t)(λ²-16t))` by tanh-sinh.
pub fn dr_dlambda_quadrature<T: Real>(lambda: T) -> Result<QuadratureResult<T>> {
    if !(lambda.abs() > lit(4.0)) {
        return Err(Error::UnsupportedRegime {
            lambda: to_f64(lambda),
            regime: "|lambda| > 4",
        });
    }
    let l2 = lambda * lambda;
    let sixteen: T = lit(16.0);
    let r = tanh_sinh_with_distances(
        |t, from0, to1| (from0 * to1 * (l2 - sixteen * t)).sqrt().recip(),
        T::zero(),
        T::one(),
        lit(INTEGRAL_TOL),
        TANH_SINH_MAX_LEVEL,
    )?;
    Ok(r.scaled(lambda.signum() / T::PI()))
}

/// `-(1+λx)(1+λx+4x²)` written out as printed, for sign checks.
pub fn cubic_radicand<T: Real>(lambda: T, x: T) -> T {
    let l = T::one() + lambda * x;
    -(l * (l + lit::<T>(4.0) * x * x))
}

fn check_midpoint<T: Real>(lambda: T, a: T, b: T, extra: impl Fn(T) -> T) -> Result<()> {
    let m = (a + b) / lit(2.0);
    if cubic_radicand(lambda, m) * extra(m) > T::zero() {
        Ok(())
    } else {
        Err(Error::NegativeRadicand {
            a: to_f64(a),
            b: to_f64(b),
        })
    }
}

/// `∫_{x₀}^{x₁} dx/√(-(1+λx)(1+λx+4x²))` for `λ < -4`.
pub fn integral_x0_x1<T: Real>(lambda: T) -> Result<QuadratureResult<T>> {
    if !(lambda < lit(-4.0)) {
        return Err(Error::UnsupportedRegime {
            lambda: to_f64(lambda),
            regime: "lambda < -4",
        });
    }
    let (x0, x1, x2) = cubic_zeros(lambda)?;
    check_midpoint(lambda, x0, x1, |_| T::one())?;
    let gap = x2 - x1;
    let four: T = lit(4.0);
    // 1+λx = λ(x-x₀), 1+λx+4x² = 4(x-x₁)(x-x₂), with x-x₁ = -d₁, x-x₂ = -(gap+d₁)
    tanh_sinh_with_distances(
        |_, d0, d1| {
            let linear = lambda * d0;
            let quad = four * d1 * (gap + d1);
            (-(linear * quad)).sqrt().recip()
        },
        x0,
        x1,
        lit(INTEGRAL_TOL),
        TANH_SINH_MAX_LEVEL,
    )
}

/// `∫_{x₂}^{x₀} dx/√(-(1+λx)(1+λx+4x²))`, and with the extra factor
/// `(1-4x)` under the root when `with_one_minus_4x`; `λ > 4`.
pub fn integral_x2_x0<T: Real>(lambda: T, with_one_minus_4x: bool) -> Result<QuadratureResult<T>> {
    if !(lambda > lit(4.0)) {
        return Err(Error::UnsupportedRegime {
            lambda: to_f64(lambda),
            regime: "lambda > 4",
        });
    }
    let (x0, x1, x2) = cubic_zeros(lambda)?;
    let four: T = lit(4.0);
    let extra = |x: T| {
        if with_one_minus_4x {
            T::one() - four * x
        } else {
            T::one()
        }
    };
    check_midpoint(lambda, x2, x0, extra)?;
    let gap = x2 - x1;
    // 1+λx = -λ(x₀-x), 1+λx+4x² = 4(x-x₂)(x-x₁) with x-x₁ = gap + (x-x₂)
    tanh_sinh_with_distances(
        |x, d2, d0| {
            let linear = -(lambda * d0);
            let quad = four * d2 * (gap + d2);
            (-(linear * quad) * extra(x)).sqrt().recip()
        },
        x2,
        x0,
        lit(INTEGRAL_TOL),
        TANH_SINH_MAX_LEVEL,
    )
}

/// `dq/dλ` from the flattened arc integral:
/// `-(1/π)∫_{x₀}^{x₁}` for `λ < -5`, and
/// `(1/2π)[∫_{x₂}^{x₀} + ∫_{x₂}^{x₀}(1-4x)^{-1/2}]` for `λ > 13`.
pub fn dq_dlambda_closed<T: Real>(lambda: T) -> Result<T> {
    let profile = singular_points(lambda)?;
    match profile.regime {
        Regime::Negative => Ok(-integral_x0_x1(lambda)?.value / T::PI()),
        Regime::Positive => {
            let a = integral_x2_x0(lambda, false)?.value;
            let b = integral_x2_x0(lambda, true)?.value;
            Ok((a + b) / (lit::<T>(2.0) * T::PI()))
        }
    }
}

/// Central difference `(q(λ+h) - q(λ-h))/(2h)` of the measure itself.
pub fn dq_dlambda_fd<T: Real>(lambda: T, h: T) -> Result<T> {
    dq_dlambda_fd_with(lambda, h, &MeasureOptions::default())
}

pub fn dq_dlambda_fd_with<T: Real>(lambda: T, h: T, opts: &MeasureOptions) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "step h = {h} must be positive"
        )));
    }
    let (lo, hi) = (lambda - h, lambda + h);
    let inside = |l: T| l <= lit(-4.0) || l >= lit(13.0);
    if !(inside(lo) && inside(hi)) || (lo < T::zero()) != (hi < T::zero()) {
        return Err(Error::UnsupportedRegime {
            lambda: to_f64(lambda),
            regime: "lambda ± h within lambda <= -4 or lambda >= 13",
        });
    }
    let qp = q_measure(hi, opts)?.value;
    let qm = q_measure(lo, opts)?.value;
    Ok((qp - qm) / (h + h))
}
