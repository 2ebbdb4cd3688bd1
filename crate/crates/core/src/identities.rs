//! Pass/fail checks of the identities between the three families.
//!
//! Every check produces a [`VerificationReport`] with `f64` sides and
//! residual; the evaluation itself runs in the scalar `T`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mahler::{
    branch_extremes, mahler_jensen_2var_with, p_measure, q_measure, r_measure, MeasureOptions,
};
use crate::poly::{make_family, verify_substitution_seeded, FamilySpec};
use crate::scalar::{lit, to_f64, Real};
use crate::specfun::{
    dp_dlambda, dq_dlambda_closed, dq_dlambda_fd_with, dr_dlambda, hyp2f1, integral_x0_x1,
    integral_x2_x0, ordering_margin, singular_points_unchecked, Hyp2F1Spec, Regime,
};

pub const MEASURE_TOL: f64 = 1e-7;
pub const DERIVATIVE_TOL: f64 = 1e-8;
pub const FD_TOL: f64 = 1e-5;
pub const FD_STEP: f64 = 1e-3;
pub const INTEGRAL_TOL: f64 = 1e-9;
pub const SPECFUN_TOL: f64 = 1e-12;
pub const BRANCH_TOL: f64 = 1e-10;
pub const SUBSTITUTION_TOL: f64 = 1e-12;
pub const BRANCH_SAMPLES: usize = 10_000;
pub const SUBSTITUTION_SAMPLES: usize = 100;

/// Label of reports that are informative only and never count as failures.
pub const EXPLORATORY: &str = "exploratory";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    #[serde(rename = "boyd")]
    Boyd,
    #[serde(rename = "main_neg")]
    MainNeg,
    #[serde(rename = "main_pos")]
    MainPos,
    #[serde(rename = "derivative_neg")]
    DerivativeNeg,
    #[serde(rename = "derivative_pos")]
    DerivativePos,
    J1,
    J2,
    J3,
    #[serde(rename = "hyp_transform_1")]
    HypTransform1,
    #[serde(rename = "hyp_transform_2")]
    HypTransform2,
    #[serde(rename = "branch_bounds")]
    BranchBounds,
    #[serde(rename = "substitution")]
    Substitution,
    #[serde(rename = "singularity_order")]
    SingularityOrder,
    #[serde(rename = "asymptotic_gap")]
    AsymptoticGap,
}

impl IdentityId {
    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Boyd => "boyd",
            IdentityId::MainNeg => "main_neg",
            IdentityId::MainPos => "main_pos",
            IdentityId::DerivativeNeg => "derivative_neg",
            IdentityId::DerivativePos => "derivative_pos",
            IdentityId::J1 => "J1",
            IdentityId::J2 => "J2",
            IdentityId::J3 => "J3",
            IdentityId::HypTransform1 => "hyp_transform_1",
            IdentityId::HypTransform2 => "hyp_transform_2",
            IdentityId::BranchBounds => "branch_bounds",
            IdentityId::Substitution => "substitution",
            IdentityId::SingularityOrder => "singularity_order",
            IdentityId::AsymptoticGap => "asymptotic_gap",
        }
    }
}

impl std::fmt::Display for IdentityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which arc integral of the derivative chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JIntegral {
    J1,
    J2,
    J3,
}

/// One checked identity at one parameter. `passed` is `|residual| <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: IdentityId,
    pub parameter: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Distinguishes several reports of one identity at one parameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl VerificationReport {
    pub fn new(id: IdentityId, parameter: f64, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::with_residual(id, parameter, lhs, rhs, lhs - rhs, tolerance)
    }

    pub fn with_residual(
        id: IdentityId,
        parameter: f64,
        lhs: f64,
        rhs: f64,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            identity_id: id,
            parameter,
            lhs,
            rhs,
            residual,
            tolerance,
            // NaN residuals fail
            passed: residual.abs() <= tolerance,
            label: None,
        }
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn is_exploratory(&self) -> bool {
        self.label.as_deref() == Some(EXPLORATORY)
    }

    fn sort_key(&self, other: &Self) -> Ordering {
        self.identity_id
            .cmp(&other.identity_id)
            .then(self.parameter.total_cmp(&other.parameter))
            .then_with(|| self.label.cmp(&other.label))
    }
}

/// Sorts by identity, then parameter, then label.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| a.sort_key(b));
}

/// True when every gating report passed.
pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed || r.is_exploratory())
}

/// One JSON object per line.
pub fn to_json_lines(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out
}

pub fn summary_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:>12} {:<18} {:>24} {:>24} {:>11} {:>9}  status",
        "identity", "parameter", "label", "lhs", "rhs", "residual", "tolerance"
    );
    for r in reports {
        let status = match (r.passed, r.is_exploratory()) {
            (true, _) => "pass",
            (false, true) => "info",
            (false, false) => "FAIL",
        };
        let _ = writeln!(
            out,
            "{:<18} {:>12} {:<18} {:>24.17e} {:>24.17e} {:>11.3e} {:>9.1e}  {status}",
            r.identity_id.name(),
            r.parameter,
            r.label.as_deref().unwrap_or("-"),
            r.lhs,
            r.rhs,
            r.residual,
            r.tolerance,
        );
    }
    let failed = reports
        .iter()
        .filter(|r| !r.passed && !r.is_exploratory())
        .count();
    let _ = writeln!(out, "{} reports, {} failed", reports.len(), failed);
    out
}

fn jensen_value<T: Real>(spec: &FamilySpec, opts: &MeasureOptions) -> Result<f64> {
    Ok(to_f64(
        mahler_jensen_2var_with::<T, _>(&make_family(spec)?, opts)?.value,
    ))
}

/// `m(Q_k) = 2 m(P_{k-4})` for `0 <= k <= 4`, `m(Q_k) = m(P_{k-4})` for `k <= -1`.
pub fn verify_boyd<T: Real>(k: i64, opts: &MeasureOptions) -> Result<VerificationReport> {
    if k >= 5 {
        return Err(Error::UnsupportedRegime {
            lambda: k as f64,
            regime: "k <= 4",
        });
    }
    let c = if k >= 0 { 2.0 } else { 1.0 };
    let lhs = jensen_value::<T>(&FamilySpec::q(k), opts)?;
    let rhs = c * jensen_value::<T>(&FamilySpec::p((k - 4) as f64), opts)?;
    Ok(VerificationReport::new(
        IdentityId::Boyd,
        k as f64,
        lhs,
        rhs,
        MEASURE_TOL,
    ))
}

/// `q = r` for `λ <= -5`, `q = (r+p)/2` for `λ >= 13`.
pub fn verify_main<T: Real>(lambda: f64, opts: &MeasureOptions) -> Result<VerificationReport> {
    Ok(verify_main_with_estimate::<T>(lambda, opts)?.0)
}

/// [`verify_main`] together with the summed error estimates of the measures
/// involved.
pub fn verify_main_with_estimate<T: Real>(
    lambda: f64,
    opts: &MeasureOptions,
) -> Result<(VerificationReport, f64)> {
    if lambda <= -5.0 {
        main_neg::<T>(lambda, opts)
    } else if lambda >= 13.0 {
        let l: T = lit(lambda);
        let q = q_measure(l, opts)?;
        let r = r_measure(l, opts)?;
        let p = p_measure(l, opts)?;
        let half: T = lit(0.5);
        let rhs = to_f64((r.value + p.value) * half);
        let est = q.error_estimate + (r.error_estimate + p.error_estimate) * half;
        let rep = VerificationReport::new(
            IdentityId::MainPos,
            lambda,
            to_f64(q.value),
            rhs,
            MEASURE_TOL,
        );
        Ok((rep, to_f64(est)))
    } else {
        Err(Error::UnsupportedRegime {
            lambda,
            regime: "lambda <= -5 or lambda >= 13",
        })
    }
}

fn main_neg<T: Real>(lambda: f64, opts: &MeasureOptions) -> Result<(VerificationReport, f64)> {
    let l: T = lit(lambda);
    let q = q_measure(l, opts)?;
    let r = r_measure(l, opts)?;
    let rep = VerificationReport::new(
        IdentityId::MainNeg,
        lambda,
        to_f64(q.value),
        to_f64(r.value),
        MEASURE_TOL,
    );
    Ok((rep, to_f64(q.error_estimate + r.error_estimate)))
}

/// `q - r` on `(-5, -4]`, where the identity is not claimed. Labelled
/// [`EXPLORATORY`].
pub fn explore_main<T: Real>(lambda: f64, opts: &MeasureOptions) -> Result<VerificationReport> {
    if !(lambda > -5.0 && lambda <= -4.0) {
        return Err(Error::UnsupportedRegime {
            lambda,
            regime: "-5 < lambda <= -4",
        });
    }
    Ok(main_neg::<T>(lambda, opts)?.0.labelled(EXPLORATORY))
}

fn derivative_id(lambda: f64) -> Result<IdentityId> {
    if lambda < -5.0 {
        Ok(IdentityId::DerivativeNeg)
    } else if lambda > 13.0 {
        Ok(IdentityId::DerivativePos)
    } else {
        Err(Error::UnsupportedRegime {
            lambda,
            regime: "lambda < -5 or lambda > 13",
        })
    }
}

/// `dq/dλ = dr/dλ` for `λ < -5`, `dq/dλ = (dr/dλ + dp/dλ)/2` for `λ > 13`.
pub fn verify_derivatives<T: Real>(lambda: f64) -> Result<VerificationReport> {
    let id = derivative_id(lambda)?;
    let l: T = lit(lambda);
    let lhs = dq_dlambda_closed(l)?;
    let rhs = match id {
        IdentityId::DerivativeNeg => dr_dlambda(l)?,
        _ => (dr_dlambda(l)? + dp_dlambda(l)?) / lit(2.0),
    };
    Ok(VerificationReport::new(
        id,
        lambda,
        to_f64(lhs),
        to_f64(rhs),
        DERIVATIVE_TOL,
    ))
}

/// Closed-form `dq/dλ` against a central difference of `q` with step `h`.
pub fn verify_derivative_fd<T: Real>(
    lambda: f64,
    h: f64,
    opts: &MeasureOptions,
) -> Result<VerificationReport> {
    let id = derivative_id(lambda)?;
    let l: T = lit(lambda);
    let lhs = to_f64(dq_dlambda_closed(l)?);
    let rhs = to_f64(dq_dlambda_fd_with(l, lit(h), opts)?);
    Ok(VerificationReport::new(id, lambda, lhs, rhs, FD_TOL).labelled("finite_difference"))
}

/// Arc integrals against `π dp/dλ` (J1), `π |dr/dλ|` (J2) and `π dr/dλ` (J3).
pub fn verify_j<T: Real>(lambda: f64, which: JIntegral) -> Result<VerificationReport> {
    let l: T = lit(lambda);
    let (id, lhs, rhs) = match which {
        JIntegral::J1 | JIntegral::J3 if !(lambda > 5.0) => {
            return Err(Error::UnsupportedRegime {
                lambda,
                regime: "lambda > 5",
            });
        }
        JIntegral::J2 if !(lambda < -5.0) => {
            return Err(Error::UnsupportedRegime {
                lambda,
                regime: "lambda < -5",
            });
        }
        JIntegral::J1 => (
            IdentityId::J1,
            integral_x2_x0(l, true)?.value,
            T::PI() * dp_dlambda(l)?,
        ),
        JIntegral::J2 => (
            IdentityId::J2,
            integral_x0_x1(l)?.value,
            -(T::PI() * dr_dlambda(l)?),
        ),
        JIntegral::J3 => (
            IdentityId::J3,
            integral_x2_x0(l, false)?.value,
            T::PI() * dr_dlambda(l)?,
        ),
    };
    Ok(VerificationReport::new(
        id,
        lambda,
        to_f64(lhs),
        to_f64(rhs),
        INTEGRAL_TOL,
    ))
}

/// Both sides of the first transformation,
/// `(1+2μ)^{-1/2} F(1/2,1/2;1|μ³(2+μ)/(1+2μ))` and
/// `(1+4μ+μ²)^{-1} F(1/3,2/3;1|27μ(1+μ)⁴/(2(1+4μ+μ²)³))`.
pub fn hyp_transform_1_sides<T: Real>(mu: T) -> Result<(T, T)> {
    let one = T::one();
    let two: T = lit(2.0);
    let a = one + two * mu;
    let lhs = a.sqrt().recip() * hyp2f1(&Hyp2F1Spec::half_half(mu * mu * mu * (two + mu) / a))?;
    let b = one + lit::<T>(4.0) * mu + mu * mu;
    let m1 = one + mu;
    let z = lit::<T>(27.0) * mu * (m1 * m1) * (m1 * m1) / (two * b * b * b);
    let rhs = hyp2f1(&Hyp2F1Spec::third_two_thirds(z))? / b;
    Ok((lhs, rhs))
}

/// Both sides of the second transformation,
/// `(1-μ⁴)^{-1/2} F(1/2,1/2;1|-μ⁴/(1-μ⁴))` and
/// `(1+μ²)^{-1} F(1/2,1/2;1|4μ²/(1+μ²)²)`.
pub fn hyp_transform_2_sides<T: Real>(mu: T) -> Result<(T, T)> {
    let one = T::one();
    let m2 = mu * mu;
    let m4 = m2 * m2;
    let a = one - m4;
    let lhs = a.sqrt().recip() * hyp2f1(&Hyp2F1Spec::half_half(-m4 / a))?;
    let b = one + m2;
    let rhs = hyp2f1(&Hyp2F1Spec::half_half(lit::<T>(4.0) * m2 / (b * b)))? / b;
    Ok((lhs, rhs))
}

fn worst_over<T: Real>(
    id: IdentityId,
    grid: &[f64],
    sides: impl Fn(T) -> Result<(T, T)>,
) -> Result<VerificationReport> {
    let mut worst: Option<VerificationReport> = None;
    for &mu in grid {
        let (l, r) = sides(lit(mu))?;
        let rep = VerificationReport::with_residual(
            id,
            mu,
            to_f64(l),
            to_f64(r),
            to_f64(l - r),
            SPECFUN_TOL,
        );
        // NaN counts as worst
        let replace = match &worst {
            None => true,
            Some(w) => !(rep.residual.abs() <= w.residual.abs()),
        };
        if replace {
            worst = Some(rep);
        }
    }
    Ok(worst.expect("grid is not empty"))
}

/// The `μ` grids of the transformations: `grid` points `μ = j/(2(grid+1))`
/// in `(0, 1/2)` for the first, and the same points with both signs for the
/// second, each with `μ = 0` added.
pub fn hyp_grids(grid: usize) -> (Vec<f64>, Vec<f64>) {
    let step = 0.5 / (grid as f64 + 1.0);
    let pos: Vec<f64> = (1..=grid).map(|j| j as f64 * step).collect();
    let mut first = vec![0.0];
    first.extend(&pos);
    let mut second: Vec<f64> = pos.iter().rev().map(|m| -m).collect();
    second.extend(first.iter());
    (first, second)
}

/// Largest residual of each transformation over [`hyp_grids`]; the report
/// parameter is the worst `μ`.
pub fn verify_hyp_transforms<T: Real>(
    grid: usize,
) -> Result<(VerificationReport, VerificationReport)> {
    if grid < 5 {
        return Err(Error::InvalidParameter(format!(
            "grid size {grid} is below 5"
        )));
    }
    let (g1, g2) = hyp_grids(grid);
    Ok((
        worst_over::<T>(IdentityId::HypTransform1, &g1, hyp_transform_1_sides)?,
        worst_over::<T>(IdentityId::HypTransform2, &g2, hyp_transform_2_sides)?,
    ))
}

/// `max|y₋| <= 1` and `min|y₊| >= 1` along the curve for `λ >= 13` or
/// `λ <= -4`. `lhs` is `max|y₋|`, `rhs` is `min|y₊|`; the residual is the
/// larger violation, and for `λ >= 13` also `|t|` at the minimum of `|y₊|`,
/// which has to sit at `t = 0`.
pub fn verify_branch_bounds<T: Real>(lambda: f64, n: usize) -> Result<VerificationReport> {
    if !(lambda >= 13.0 || lambda <= -4.0) {
        return Err(Error::UnsupportedRegime {
            lambda,
            regime: "lambda >= 13 or lambda <= -4",
        });
    }
    let e = branch_extremes::<T>(lit(lambda), n)?;
    let (lhs, rhs) = (to_f64(e.max_abs_y_minus), to_f64(e.min_abs_y_plus));
    let mut residual = (lhs - 1.0).max(1.0 - rhs).max(0.0);
    if lambda >= 13.0 {
        residual = residual.max(to_f64(e.arg_t_at_extremes.1.abs()));
    }
    Ok(VerificationReport::with_residual(
        IdentityId::BranchBounds,
        lambda,
        lhs,
        rhs,
        residual,
        BRANCH_TOL,
    ))
}

/// `0 < x₀ < x₁ < 1/4 < 1 < x₂` for `λ < -5`, `x₁ < -2 < x₂ < x₀ < 0` for
/// `λ > 13`, with the z-images ordered inside `(0,1)` resp. `(-1,1)`.
/// `lhs` is the smallest step of the chain; the residual is its negative part.
pub fn verify_singularity_order<T: Real>(lambda: f64) -> Result<VerificationReport> {
    let profile = singular_points_unchecked::<T>(lit(lambda))?;
    let margin = to_f64(ordering_margin(&profile));
    let residual = if margin > 0.0 { 0.0 } else { -margin };
    let label = match profile.regime {
        Regime::Negative => "negative",
        Regime::Positive => "positive",
    };
    Ok(VerificationReport::with_residual(
        IdentityId::SingularityOrder,
        lambda,
        margin,
        0.0,
        residual,
        0.0,
    )
    .labelled(label))
}

/// Substitution identity at `samples` torus points. `lhs` is the largest
/// pointwise residual; a failed exact expansion adds 1 to the residual.
pub fn verify_substitution_report(
    lambda: f64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let c = verify_substitution_seeded(lambda, samples, seed)?;
    let residual = c.max_residual + if c.exact_match { 0.0 } else { 1.0 };
    Ok(VerificationReport::with_residual(
        IdentityId::Substitution,
        lambda,
        c.max_residual,
        0.0,
        residual,
        SUBSTITUTION_TOL,
    )
    .labelled(if c.exact_match { "exact" } else { "not_exact" }))
}

/// `q - log|λ|`, `r - log|λ|` and `p - log|λ|` for each `λ` in the list
/// (`λ <= -5` or `λ >= 13`). Each gap must be at most 1 in modulus and, for
/// each quantity, at most the modulus of the previous gap in list order; the
/// report tolerance is that bound.
pub fn asymptotic_gap<T: Real>(
    lambdas: &[f64],
    opts: &MeasureOptions,
) -> Result<Vec<VerificationReport>> {
    for &l in lambdas {
        if !(l <= -5.0 || l >= 13.0) {
            return Err(Error::UnsupportedRegime {
                lambda: l,
                regime: "lambda <= -5 or lambda >= 13",
            });
        }
    }
    let values: Vec<[f64; 3]> = lambdas
        .par_iter()
        .map(|&l| {
            let x: T = lit(l);
            Ok([
                to_f64(q_measure(x, opts)?.value),
                to_f64(r_measure(x, opts)?.value),
                to_f64(p_measure(x, opts)?.value),
            ])
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(3 * lambdas.len());
    for (i, name) in ["q", "r", "p"].into_iter().enumerate() {
        let mut bound = 1.0f64;
        for (&l, v) in lambdas.iter().zip(&values) {
            let rhs = l.abs().ln();
            let rep = VerificationReport::new(IdentityId::AsymptoticGap, l, v[i], rhs, bound);
            bound = bound.min(rep.residual.abs());
            out.push(rep.labelled(name));
        }
    }
    Ok(out)
}

/// Named groups of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Main,
    Boyd,
    Derivatives,
    #[serde(rename = "J")]
    J,
    Hyp,
    Branches,
    Singularities,
    Asymptotics,
    Substitution,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::All,
        Suite::Main,
        Suite::Boyd,
        Suite::Derivatives,
        Suite::J,
        Suite::Hyp,
        Suite::Branches,
        Suite::Singularities,
        Suite::Asymptotics,
        Suite::Substitution,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Main => "main",
            Suite::Boyd => "boyd",
            Suite::Derivatives => "derivatives",
            Suite::J => "J",
            Suite::Hyp => "hyp",
            Suite::Branches => "branches",
            Suite::Singularities => "singularities",
            Suite::Asymptotics => "asymptotics",
            Suite::Substitution => "substitution",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

/// Parameters of a suite run. `None` lists fall back to the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub lambdas: Option<Vec<f64>>,
    pub ks: Option<Vec<i64>>,
    pub grid: usize,
    pub branch_samples: usize,
    pub substitution_samples: usize,
    pub substitution_lambdas: usize,
    pub fd_step: f64,
    pub seed: u64,
    /// Also report `q - r` on `(-5, -4]`; never gating.
    pub exploratory: bool,
    pub measure: MeasureOptions,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            lambdas: None,
            ks: None,
            grid: 20,
            branch_samples: BRANCH_SAMPLES,
            substitution_samples: SUBSTITUTION_SAMPLES,
            substitution_lambdas: 20,
            fd_step: FD_STEP,
            seed: 0,
            exploratory: false,
            measure: MeasureOptions::default(),
        }
    }
}

pub const MAIN_LAMBDAS: [f64; 10] = [-5.0, -6.0, -8.0, -10.0, -20.0, 13.0, 14.0, 16.0, 20.0, 50.0];
pub const BOYD_KS: [i64; 8] = [-3, -2, -1, 0, 1, 2, 3, 4];
pub const DERIVATIVE_LAMBDAS: [f64; 6] = [-6.0, -8.0, -12.0, 14.0, 16.0, 25.0];
pub const J_POSITIVE_LAMBDAS: [f64; 4] = [6.0, 13.5, 16.0, 25.0];
pub const J_NEGATIVE_LAMBDAS: [f64; 3] = [-6.0, -8.0, -12.0];
pub const BRANCH_LAMBDAS: [f64; 6] = [13.0, 14.0, 20.0, -4.0, -5.0, -10.0];
pub const SINGULARITY_LAMBDAS: [f64; 6] = [-5.01, -6.0, -20.0, 13.01, 16.0, 50.0];
pub const ASYMPTOTIC_LAMBDAS: [f64; 9] =
    [16.0, 32.0, 64.0, 128.0, -8.0, -16.0, -32.0, -64.0, -128.0];
pub const EXPLORATORY_LAMBDAS: [f64; 4] = [-4.0, -4.25, -4.5, -4.75];

type Task<'a> = Box<dyn Fn() -> Result<Vec<VerificationReport>> + Send + Sync + 'a>;

fn one<'a>(f: impl Fn() -> Result<VerificationReport> + Send + Sync + 'a) -> Task<'a> {
    Box::new(move || f().map(|r| vec![r]))
}

fn substitution_lambdas(params: &SuiteParams) -> Vec<f64> {
    if let Some(ls) = &params.lambdas {
        return ls.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut ls: Vec<f64> = (0..params.substitution_lambdas)
        .map(|_| rng.gen_range(-20.0..=20.0))
        .collect();
    // one small rational parameter
    ls.push(13.0);
    ls
}

fn tasks<'a, T: Real>(suite: Suite, p: &'a SuiteParams) -> Vec<Task<'a>> {
    let opts = &p.measure;
    let lambdas = |default: &[f64]| p.lambdas.clone().unwrap_or_else(|| default.to_vec());
    let mut out: Vec<Task<'a>> = Vec::new();
    match suite {
        Suite::All => {
            for s in Suite::ALL.into_iter().skip(1) {
                out.extend(tasks::<T>(s, p));
            }
        }
        Suite::Main => {
            for l in lambdas(&MAIN_LAMBDAS) {
                out.push(one(move || verify_main::<T>(l, opts)));
            }
            if p.exploratory {
                for l in EXPLORATORY_LAMBDAS {
                    out.push(one(move || explore_main::<T>(l, opts)));
                }
            }
        }
        Suite::Boyd => {
            for k in p.ks.clone().unwrap_or_else(|| BOYD_KS.to_vec()) {
                out.push(one(move || verify_boyd::<T>(k, opts)));
            }
        }
        Suite::Derivatives => {
            for l in lambdas(&DERIVATIVE_LAMBDAS) {
                out.push(one(move || verify_derivatives::<T>(l)));
                out.push(one(move || verify_derivative_fd::<T>(l, p.fd_step, opts)));
            }
        }
        Suite::J => match &p.lambdas {
            Some(ls) => {
                for &l in ls {
                    if l < 0.0 {
                        out.push(one(move || verify_j::<T>(l, JIntegral::J2)));
                    } else {
                        out.push(one(move || verify_j::<T>(l, JIntegral::J1)));
                        out.push(one(move || verify_j::<T>(l, JIntegral::J3)));
                    }
                }
            }
            None => {
                // J1 is only claimed on the dp/dλ range used by the identity
                for l in J_POSITIVE_LAMBDAS.into_iter().skip(1) {
                    out.push(one(move || verify_j::<T>(l, JIntegral::J1)));
                }
                for l in J_POSITIVE_LAMBDAS {
                    out.push(one(move || verify_j::<T>(l, JIntegral::J3)));
                }
                for l in J_NEGATIVE_LAMBDAS {
                    out.push(one(move || verify_j::<T>(l, JIntegral::J2)));
                }
            }
        },
        Suite::Hyp => out.push(Box::new(move || {
            let (a, b) = verify_hyp_transforms::<T>(p.grid)?;
            Ok(vec![a, b])
        })),
        Suite::Branches => {
            for l in lambdas(&BRANCH_LAMBDAS) {
                out.push(one(move || verify_branch_bounds::<T>(l, p.branch_samples)));
            }
        }
        Suite::Singularities => {
            for l in lambdas(&SINGULARITY_LAMBDAS) {
                out.push(one(move || verify_singularity_order::<T>(l)));
            }
        }
        Suite::Asymptotics => {
            let ls = lambdas(&ASYMPTOTIC_LAMBDAS);
            let (pos, neg): (Vec<f64>, Vec<f64>) = ls.into_iter().partition(|&l| l > 0.0);
            for group in [pos, neg] {
                if !group.is_empty() {
                    out.push(Box::new(move || asymptotic_gap::<T>(&group, opts)));
                }
            }
        }
        Suite::Substitution => {
            for (i, l) in substitution_lambdas(p).into_iter().enumerate() {
                let seed = p.seed.wrapping_add(i as u64);
                out.push(one(move || {
                    verify_substitution_report(l, p.substitution_samples, seed)
                }));
            }
        }
    }
    out
}

/// Runs a suite in parallel and returns the reports sorted by identity,
/// parameter and label. The first error aborts the run.
pub fn run_suite<T: Real>(suite: Suite, params: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let tasks = tasks::<T>(suite, params);
    let chunks: Vec<Vec<VerificationReport>> =
        tasks.par_iter().map(|t| t()).collect::<Result<_>>()?;
    let mut reports: Vec<VerificationReport> = chunks.into_iter().flatten().collect();
    sort_reports(&mut reports);
    Ok(reports)
}
