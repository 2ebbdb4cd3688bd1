use std::fmt::Write as _;

use mahler_core::identities::{
    all_passed, run_suite, summary_table, to_json_lines, verify_branch_bounds, verify_derivatives,
    verify_j, verify_main_with_estimate, verify_singularity_order, JIntegral, Suite,
    VerificationReport,
};
use mahler_core::mahler::{
    family_measure, mahler_jensen_2var_with, mahler_torus, MeasureValue, Method,
};
use mahler_core::poly::{parse_text, FamilySpec};
use mahler_core::scalar::{lit, to_f64};
use mahler_core::specfun::{dp_dlambda, dq_dlambda_closed, dr_dlambda, regime_of};
use mahler_core::{Extended, Real};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{OutputFormat, Precision, RunConfig};
use crate::{
    ComputeArgs, Failure, FamilyArg, MethodArg, SuiteArg, SweepArgs, SweepIdentity, VerifyArgs,
    EXIT_FAILED, EXIT_NUMERICAL, EXIT_OK,
};

type Outcome = Result<(String, u8), Failure>;

fn method_of(m: MethodArg) -> Method {
    match m {
        MethodArg::Torus => Method::Torus,
        MethodArg::Jensen => Method::Jensen,
        MethodArg::Fast => Method::FamilyFast,
    }
}

fn family_spec(
    family: FamilyArg,
    lambda: Option<f64>,
    k: Option<i64>,
) -> Result<FamilySpec, Failure> {
    match (family, lambda, k) {
        (FamilyArg::Q, None, Some(k)) => Ok(FamilySpec::q(k)),
        (FamilyArg::Q, Some(l), None) => Ok(FamilySpec::q_shifted(l)),
        (FamilyArg::P, Some(l), None) => Ok(FamilySpec::p(l)),
        (FamilyArg::R, Some(l), None) => Ok(FamilySpec::r(l)),
        (FamilyArg::Q, _, _) => Err(Failure::usage(
            "family q needs exactly one of --k or --lambda",
        )),
        _ => Err(Failure::usage("families p and r need --lambda")),
    }
}

fn family_name(spec: &FamilySpec) -> String {
    serde_json::to_value(spec.family)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

#[derive(Serialize)]
struct ComputeRecord {
    family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    parameter: Option<f64>,
    method: Method,
    value: f64,
    error_estimate: f64,
    nodes: usize,
    precision: Precision,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_extended: Option<String>,
}

#[derive(Serialize)]
struct DerivativeRecord {
    family: String,
    lambda: f64,
    derivative: f64,
    precision: Precision,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivative_extended: Option<String>,
}

fn extended_digits<T: Real>(precision: Precision, x: T) -> Option<String> {
    (precision == Precision::Extended).then(|| format!("{x:.31e}"))
}

fn measure_record<T: Real>(family: String, v: &MeasureValue<T>, cfg: &RunConfig) -> ComputeRecord {
    ComputeRecord {
        family,
        parameter: v.lambda,
        method: v.method,
        value: to_f64(v.value),
        error_estimate: to_f64(v.error_estimate),
        nodes: v.nodes,
        precision: cfg.precision,
        value_extended: extended_digits(cfg.precision, v.value),
    }
}

fn compute_typed<T: Real>(a: &ComputeArgs, cfg: &RunConfig) -> Result<String, Failure> {
    let opts = cfg.measure_options();
    let format = cfg.output_format.unwrap_or(OutputFormat::Table);
    if let Some(path) = &a.poly_file {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let p = parse_text(&src)?;
        let method = a.method.unwrap_or(if p.nvars() == 2 {
            MethodArg::Jensen
        } else {
            MethodArg::Torus
        });
        let v = match method {
            MethodArg::Torus => {
                let n = if p.nvars() == 3 && !cfg.nodes_given {
                    cfg.torus_nodes_3var
                } else {
                    cfg.node_budget
                };
                mahler_torus::<T, _>(&p, n)?
            }
            MethodArg::Jensen => mahler_jensen_2var_with::<T, _>(&p, &opts)?,
            MethodArg::Fast => return Err(Failure::usage("method fast needs --family")),
        };
        return Ok(render_compute(
            &measure_record("file".into(), &v, cfg),
            format,
        ));
    }
    let family = a
        .family
        .expect("clap requires --family without --poly-file");
    let spec = family_spec(family, a.lambda, a.k)?;
    if a.derivative {
        let l: T = lit(spec.parameter);
        let d = match (family, a.k) {
            (FamilyArg::Q, None) => dq_dlambda_closed(l)?,
            (FamilyArg::R, _) => dr_dlambda(l)?,
            (FamilyArg::P, _) => dp_dlambda(l)?,
            _ => return Err(Failure::usage("--derivative needs --lambda")),
        };
        let rec = DerivativeRecord {
            family: family_name(&spec),
            lambda: spec.parameter,
            derivative: to_f64(d),
            precision: cfg.precision,
            derivative_extended: extended_digits(cfg.precision, d),
        };
        return Ok(match format {
            OutputFormat::Json => serde_json::to_string(&rec).expect("serializes") + "\n",
            OutputFormat::Csv => format!(
                "family,lambda,derivative\n{},{},{}\n",
                rec.family,
                num(rec.lambda),
                num(rec.derivative)
            ),
            OutputFormat::Table => {
                let shown = rec
                    .derivative_extended
                    .clone()
                    .unwrap_or(format!("{:.17e}", rec.derivative));
                format!("d/dlambda {}({}) = {shown}\n", rec.family, rec.lambda)
            }
        });
    }
    let method = method_of(a.method.unwrap_or(MethodArg::Fast));
    let v = family_measure::<T>(&spec, method, &opts)?;
    Ok(render_compute(
        &measure_record(family_name(&spec), &v, cfg),
        format,
    ))
}

fn render_compute(r: &ComputeRecord, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string(r).expect("serializes") + "\n",
        OutputFormat::Csv => format!(
            "family,parameter,method,value,error_estimate,nodes\n{},{},{},{},{},{}\n",
            r.family,
            opt(r.parameter),
            r.method,
            num(r.value),
            num(r.error_estimate),
            r.nodes
        ),
        OutputFormat::Table => {
            let mut s = String::new();
            let param = r.parameter.map(|p| p.to_string()).unwrap_or("-".into());
            let _ = writeln!(s, "family          {}", r.family);
            let _ = writeln!(s, "parameter       {param}");
            let value = r
                .value_extended
                .clone()
                .unwrap_or(format!("{:.17e}", r.value));
            let _ = writeln!(s, "value           {value}");
            let _ = writeln!(s, "method          {}", r.method);
            let _ = writeln!(s, "error_estimate  {:.3e}", r.error_estimate);
            let _ = writeln!(s, "nodes           {}", r.nodes);
            s
        }
    }
}

pub fn compute(a: &ComputeArgs, cfg: &RunConfig) -> Outcome {
    let text = match cfg.precision {
        Precision::Double => compute_typed::<f64>(a, cfg)?,
        Precision::Extended => compute_typed::<Extended>(a, cfg)?,
    };
    Ok((text, EXIT_OK))
}

fn suite_of(s: SuiteArg) -> Suite {
    match s {
        SuiteArg::All => Suite::All,
        SuiteArg::Main => Suite::Main,
        SuiteArg::Boyd => Suite::Boyd,
        SuiteArg::Derivatives => Suite::Derivatives,
        SuiteArg::J => Suite::J,
        SuiteArg::Hyp => Suite::Hyp,
        SuiteArg::Branches => Suite::Branches,
        SuiteArg::Singularities => Suite::Singularities,
        SuiteArg::Asymptotics => Suite::Asymptotics,
        SuiteArg::Substitution => Suite::Substitution,
    }
}

fn apply_overrides(reports: &mut [VerificationReport], cfg: &RunConfig) {
    for r in reports {
        if let Some(t) = cfg.override_for(r.identity_id, r.label.as_deref()) {
            r.tolerance = t;
            r.passed = r.residual.abs() <= t;
        }
    }
}

fn reports_csv(reports: &[VerificationReport]) -> String {
    let mut s = String::from("identity_id,parameter,label,lhs,rhs,residual,tolerance,status\n");
    for r in reports {
        let status = if r.passed {
            "pass"
        } else if r.is_exploratory() {
            "info"
        } else {
            "fail"
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{status}",
            r.identity_id,
            num(r.parameter),
            r.label.as_deref().unwrap_or(""),
            num(r.lhs),
            num(r.rhs),
            num(r.residual),
            num(r.tolerance)
        );
    }
    s
}

pub fn verify(a: &VerifyArgs, cfg: &RunConfig) -> Outcome {
    let mut params = cfg.suite_params();
    params.lambdas = a.lambda.clone();
    params.ks = a.k.clone();
    params.exploratory = a.exploratory;
    if let Some(g) = a.grid {
        params.grid = g;
    }
    if let Some(n) = a.samples {
        params.branch_samples = n;
    }
    let suite = suite_of(a.suite);
    let mut reports = match cfg.precision {
        Precision::Double => run_suite::<f64>(suite, &params)?,
        Precision::Extended => run_suite::<Extended>(suite, &params)?,
    };
    apply_overrides(&mut reports, cfg);
    let text = match cfg.output_format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_json_lines(&reports),
        OutputFormat::Table => summary_table(&reports),
        OutputFormat::Csv => reports_csv(&reports),
    };
    let code = if all_passed(&reports) {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    Ok((text, code))
}

/// One sweep row; the optional columns stay empty where they do not apply.
#[derive(Serialize)]
struct Row {
    lambda: f64,
    lhs: Option<f64>,
    rhs: Option<f64>,
    residual: Option<f64>,
    error_estimate: Option<f64>,
    status: String,
}

impl Row {
    fn error(lambda: f64, e: impl std::fmt::Display) -> Self {
        // keep the CSV field free of separators
        let msg = e.to_string().replace([',', '\n'], ";");
        Row {
            lambda,
            lhs: None,
            rhs: None,
            residual: None,
            error_estimate: None,
            status: format!("error: {msg}"),
        }
    }

    fn from_report(r: VerificationReport, estimate: Option<f64>) -> Self {
        Row {
            lambda: r.parameter,
            lhs: Some(r.lhs),
            rhs: Some(r.rhs),
            residual: Some(r.residual),
            error_estimate: estimate,
            status: if r.passed {
                "pass".into()
            } else {
                "fail".into()
            },
        }
    }
}

/// `from, from+step, ...` up to `to`, with a little slack for rounding.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err(Failure::usage("range bounds and step must be finite"));
    }
    if !(step > 0.0) {
        return Err(Failure::usage("--step must be positive"));
    }
    if to < from {
        return Err(Failure::usage(format!(
            "empty range: --to {to} is below --from {from}"
        )));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| from + i as f64 * step).collect())
}

fn in_regime(id: SweepIdentity, l: f64) -> bool {
    match id {
        SweepIdentity::Main => l <= -5.0 || l >= 13.0,
        SweepIdentity::Derivatives | SweepIdentity::Singularities => regime_of(l).is_ok(),
        SweepIdentity::J1 | SweepIdentity::J3 => l > 5.0,
        SweepIdentity::J2 => l < -5.0,
        SweepIdentity::Branches => l >= 13.0 || l <= -4.0,
    }
}

fn identity_row<T: Real>(id: SweepIdentity, l: f64, cfg: &RunConfig) -> Row {
    let opts = cfg.measure_options();
    let res = match id {
        SweepIdentity::Main => verify_main_with_estimate::<T>(l, &opts).map(|(r, e)| (r, Some(e))),
        SweepIdentity::Derivatives => verify_derivatives::<T>(l).map(|r| (r, None)),
        SweepIdentity::J1 => verify_j::<T>(l, JIntegral::J1).map(|r| (r, None)),
        SweepIdentity::J2 => verify_j::<T>(l, JIntegral::J2).map(|r| (r, None)),
        SweepIdentity::J3 => verify_j::<T>(l, JIntegral::J3).map(|r| (r, None)),
        SweepIdentity::Branches => {
            verify_branch_bounds::<T>(l, cfg.branch_samples).map(|r| (r, None))
        }
        SweepIdentity::Singularities => verify_singularity_order::<T>(l).map(|r| (r, None)),
    };
    match res {
        Ok((mut r, est)) => {
            apply_overrides(std::slice::from_mut(&mut r), cfg);
            Row::from_report(r, est)
        }
        Err(e) => Row::error(l, e),
    }
}

fn family_row<T: Real>(family: FamilyArg, method: Method, l: f64, cfg: &RunConfig) -> Row {
    let spec = match family_spec(family, Some(l), None) {
        Ok(s) => s,
        Err(f) => return Row::error(l, f.message),
    };
    match family_measure::<T>(&spec, method, &cfg.measure_options()) {
        Ok(v) => Row {
            lambda: l,
            lhs: Some(to_f64(v.value)),
            rhs: None,
            residual: None,
            error_estimate: Some(to_f64(v.error_estimate)),
            status: "ok".into(),
        },
        Err(e) => Row::error(l, e),
    }
}

/// Shortest round-trip form, with an exponent for very small or large values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn render_rows(rows: &[Row], format: OutputFormat) -> String {
    let mut s = String::new();
    match format {
        OutputFormat::Json => {
            for r in rows {
                s.push_str(&serde_json::to_string(r).expect("serializes"));
                s.push('\n');
            }
        }
        OutputFormat::Csv => {
            s.push_str("lambda,lhs,rhs,residual,error_estimate,status\n");
            for r in rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    num(r.lambda),
                    opt(r.lhs),
                    opt(r.rhs),
                    opt(r.residual),
                    opt(r.error_estimate),
                    r.status
                );
            }
        }
        OutputFormat::Table => {
            let _ = writeln!(
                s,
                "{:>10} {:>24} {:>24} {:>11} {:>11}  status",
                "lambda", "lhs", "rhs", "residual", "error_est"
            );
            let e17 = |x: Option<f64>| x.map(|v| format!("{v:.17e}")).unwrap_or("-".into());
            let e3 = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or("-".into());
            for r in rows {
                let _ = writeln!(
                    s,
                    "{:>10} {:>24} {:>24} {:>11} {:>11}  {}",
                    r.lambda,
                    e17(r.lhs),
                    e17(r.rhs),
                    e3(r.residual),
                    e3(r.error_estimate),
                    r.status
                );
            }
        }
    }
    s
}

fn sweep_rows<T: Real>(a: &SweepArgs, lambdas: &[f64], cfg: &RunConfig) -> Vec<Row> {
    let method = method_of(a.method.unwrap_or(MethodArg::Fast));
    lambdas
        .par_iter()
        .map(|&l| match (a.identity, a.family) {
            (Some(id), _) => identity_row::<T>(id, l, cfg),
            (None, Some(f)) => family_row::<T>(f, method, l, cfg),
            (None, None) => unreachable!("clap requires --family or --identity"),
        })
        .collect()
}

/// 3 when no row could be computed, 1 when an identity row failed, else 0.
fn sweep_exit(rows: &[Row]) -> u8 {
    let errored = rows
        .iter()
        .filter(|r| r.status.starts_with("error"))
        .count();
    if errored == rows.len() {
        EXIT_NUMERICAL
    } else if rows.iter().any(|r| r.status == "fail") {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

pub fn sweep(a: &SweepArgs, cfg: &RunConfig) -> Outcome {
    let lambdas = grid(a.from, a.to, a.step)?;
    if let Some(id) = a.identity {
        if let Some(bad) = lambdas.iter().find(|&&l| !in_regime(id, l)) {
            return Err(Failure::usage(format!(
                "lambda = {bad} lies outside the range of the {id:?} identity"
            )));
        }
    }
    let rows = match cfg.precision {
        Precision::Double => sweep_rows::<f64>(a, &lambdas, cfg),
        Precision::Extended => sweep_rows::<Extended>(a, &lambdas, cfg),
    };
    let text = render_rows(&rows, cfg.output_format.unwrap_or(OutputFormat::Csv));
    let code = sweep_exit(&rows);
    if code == EXIT_NUMERICAL {
        eprintln!("error: every row failed");
    }
    Ok((text, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        assert_eq!(grid(13.0, 20.0, 0.5).unwrap().len(), 15);
        assert_eq!(
            grid(5.0, 10.0, 1.0).unwrap(),
            vec![5.0, 6.0, 7.0, 8.0, 9.0, 10.0]
        );
        assert_eq!(grid(1.0, 1.0, 1.0).unwrap(), vec![1.0]);
        assert!(grid(2.0, 1.0, 1.0).is_err());
        assert!(grid(1.0, 2.0, 0.0).is_err());
        assert!(grid(1.0, 2.0, -1.0).is_err());
    }

    #[test]
    fn sweep_rows_record_errors() {
        let ok = Row {
            lambda: 1.0,
            lhs: Some(1.0),
            rhs: None,
            residual: None,
            error_estimate: Some(0.0),
            status: "ok".into(),
        };
        let bad = Row::error(2.0, "no convergence, at x = 1\nagain");
        assert_eq!(bad.status, "error: no convergence; at x = 1;again");
        let csv = render_rows(&[ok, bad], OutputFormat::Csv);
        assert!(csv.lines().all(|l| l.split(',').count() == 6), "{csv}");
        assert_eq!(
            sweep_exit(&[Row::error(2.0, "x"), Row::error(1.0, "y")]),
            EXIT_NUMERICAL
        );
        let rows = [
            Row::error(2.0, "x"),
            Row {
                status: "pass".into(),
                ..Row::error(1.0, "")
            },
        ];
        assert_eq!(sweep_exit(&rows), EXIT_OK);
        let rows = [Row {
            status: "fail".into(),
            ..Row::error(1.0, "")
        }];
        assert_eq!(sweep_exit(&rows), EXIT_FAILED);
    }

    #[test]
    fn tolerance_override_recomputes_passed() {
        let mut cfg = RunConfig::default();
        cfg.tolerance_overrides.insert("boyd".into(), 1e-3);
        let mut r = vec![VerificationReport::new(
            mahler_core::identities::IdentityId::Boyd,
            1.0,
            1.0,
            1.0015,
            1e-7,
        )];
        apply_overrides(&mut r, &cfg);
        assert!(!r[0].passed);
        cfg.tolerance_overrides.insert("boyd".into(), 2e-3);
        apply_overrides(&mut r, &cfg);
        assert!(r[0].passed);
    }
}
