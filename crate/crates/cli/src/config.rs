use std::collections::BTreeMap;

use clap::ValueEnum;
use mahler_core::identities::{self, IdentityId, SuiteParams};
use mahler_core::mahler::MeasureOptions;
use mahler_core::quadrature::{TANH_SINH_MAX_LEVEL, TRAPEZOID_MAX_NODES};
use serde::Serialize;

pub const MIN_NODE_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

/// Everything that affects reported numbers.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub precision: Precision,
    /// Initial trapezoid node count; also the per-axis torus grid.
    pub node_budget: usize,
    pub max_nodes: usize,
    pub quadrature_tolerance: f64,
    pub scan_nodes: usize,
    /// Per-axis torus grid for three-variable polynomials when no node
    /// count is given.
    pub torus_nodes_3var: usize,
    pub tanh_sinh_max_level: usize,
    /// Pass/fail tolerance per identity; entries given on the command line
    /// replace the defaults.
    pub tolerances: BTreeMap<String, f64>,
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub output_format: Option<OutputFormat>,
    pub seed: u64,
    pub jobs: Option<usize>,
    #[serde(skip)]
    pub nodes_given: bool,
    pub hyp_grid: usize,
    pub branch_samples: usize,
    pub substitution_samples: usize,
    pub fd_step: f64,
}

pub fn default_tolerances() -> BTreeMap<String, f64> {
    use IdentityId::*;
    let tol = |id: IdentityId| match id {
        Boyd | MainNeg | MainPos => identities::MEASURE_TOL,
        DerivativeNeg | DerivativePos => identities::DERIVATIVE_TOL,
        J1 | J2 | J3 => identities::INTEGRAL_TOL,
        HypTransform1 | HypTransform2 => identities::SPECFUN_TOL,
        BranchBounds => identities::BRANCH_TOL,
        Substitution => identities::SUBSTITUTION_TOL,
        SingularityOrder => 0.0,
        AsymptoticGap => 1.0,
    };
    let mut m: BTreeMap<String, f64> = [
        Boyd,
        MainNeg,
        MainPos,
        DerivativeNeg,
        DerivativePos,
        J1,
        J2,
        J3,
        HypTransform1,
        HypTransform2,
        BranchBounds,
        Substitution,
        SingularityOrder,
        AsymptoticGap,
    ]
    .into_iter()
    .map(|id| (id.name().to_string(), tol(id)))
    .collect();
    m.insert("finite_difference".into(), identities::FD_TOL);
    m
}

impl Default for RunConfig {
    fn default() -> Self {
        let m = MeasureOptions::default();
        Self {
            precision: Precision::Double,
            node_budget: m.nodes,
            max_nodes: TRAPEZOID_MAX_NODES,
            quadrature_tolerance: m.tolerance,
            scan_nodes: m.scan_nodes,
            torus_nodes_3var: 128,
            tanh_sinh_max_level: TANH_SINH_MAX_LEVEL,
            tolerances: default_tolerances(),
            tolerance_overrides: BTreeMap::new(),
            output_format: None,
            seed: 0,
            jobs: None,
            nodes_given: false,
            hyp_grid: 20,
            branch_samples: identities::BRANCH_SAMPLES,
            substitution_samples: identities::SUBSTITUTION_SAMPLES,
            fd_step: identities::FD_STEP,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.node_budget < MIN_NODE_BUDGET {
            return Err(format!("node budget must be at least {MIN_NODE_BUDGET}"));
        }
        if !(self.quadrature_tolerance > 0.0) {
            return Err("quadrature tolerance must be positive".into());
        }
        for (k, v) in &self.tolerance_overrides {
            if !self.tolerances.contains_key(k) {
                return Err(format!("unknown tolerance key '{k}'"));
            }
            if !(*v >= 0.0) {
                return Err(format!("tolerance for '{k}' must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn measure_options(&self) -> MeasureOptions {
        MeasureOptions {
            nodes: self.node_budget,
            max_nodes: self.max_nodes.max(self.node_budget),
            tolerance: self.quadrature_tolerance,
            scan_nodes: self.scan_nodes,
        }
    }

    pub fn suite_params(&self) -> SuiteParams {
        SuiteParams {
            grid: self.hyp_grid,
            branch_samples: self.branch_samples,
            substitution_samples: self.substitution_samples,
            fd_step: self.fd_step,
            seed: self.seed,
            measure: self.measure_options(),
            ..SuiteParams::default()
        }
    }

    /// Tolerance override for a report, keyed by its label first (for
    /// `finite_difference`) and then by identity name.
    pub fn override_for(&self, id: IdentityId, label: Option<&str>) -> Option<f64> {
        label
            .and_then(|l| self.tolerance_overrides.get(l))
            .or_else(|| self.tolerance_overrides.get(id.name()))
            .copied()
    }
}
