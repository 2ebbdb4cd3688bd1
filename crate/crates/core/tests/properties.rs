//! Identity checks at random parameters in each regime.

use mahler_core::identities::{
    hyp_transform_2_sides, verify_branch_bounds, verify_derivatives, verify_j, verify_main,
    verify_singularity_order, IdentityId, JIntegral, VerificationReport,
};
use mahler_core::mahler::MeasureOptions;
use proptest::prelude::*;

fn lambda_neg() -> impl Strategy<Value = f64> {
    -60.0..-5.0f64
}

fn lambda_pos() -> impl Strategy<Value = f64> {
    13.0..80.0f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn main_identity_holds(l in prop_oneof![lambda_neg(), lambda_pos()]) {
        let r = verify_main::<f64>(l, &MeasureOptions::default()).unwrap();
        prop_assert!(r.passed, "{r:?}");
    }

    #[test]
    fn derivative_identity_holds(l in prop_oneof![-60.0..-5.0f64, 13.5..80.0f64]) {
        let r = verify_derivatives::<f64>(l).unwrap();
        prop_assert!(r.passed, "{r:?}");
    }

    #[test]
    fn chains_hold(l in 13.5..60.0f64, m in lambda_neg()) {
        for which in [JIntegral::J1, JIntegral::J3] {
            let r = verify_j::<f64>(l, which).unwrap();
            prop_assert!(r.passed, "{r:?}");
        }
        let r = verify_j::<f64>(m, JIntegral::J2).unwrap();
        prop_assert!(r.passed, "{r:?}");
    }

    #[test]
    fn second_transform_sides_agree(mu in -0.49..0.49f64) {
        let (a, b) = hyp_transform_2_sides(mu).unwrap();
        prop_assert!((a - b).abs() < 1e-12, "mu {mu}: {a} vs {b}");
    }

    #[test]
    fn singularities_stay_ordered(l in prop_oneof![-200.0..-5.001f64, 13.001..200.0f64]) {
        let r = verify_singularity_order::<f64>(l).unwrap();
        prop_assert!(r.passed && r.lhs > 0.0, "{r:?}");
    }

    #[test]
    fn branches_separate(l in prop_oneof![-60.0..-4.0f64, 13.0..60.0f64]) {
        let r = verify_branch_bounds::<f64>(l, 2000).unwrap();
        prop_assert!(r.passed, "{r:?}");
    }

    #[test]
    fn passed_iff_within_tolerance(lhs in -1.0..1.0f64, rhs in -1.0..1.0f64, tol in 0.0..1.0f64) {
        let r = VerificationReport::new(IdentityId::MainNeg, 0.0, lhs, rhs, tol);
        prop_assert_eq!(r.residual, lhs - rhs);
        prop_assert_eq!(r.passed, (lhs - rhs).abs() <= tol);
    }
}
