//! Frozen mpmath values (tests/oracles/reference_values.txt, produced by
//! reference_values.py) against the library.

use mahler_core::mahler::{
    mahler_jensen_2var_with, p_measure, q_measure, r_measure, MeasureOptions,
};
use mahler_core::poly::{make_family, FamilySpec};
use mahler_core::specfun::{dp_dlambda, dr_dlambda, hyp2f1, Hyp2F1Spec};
use mahler_core::Extended;
use num_traits::Float;

const TABLE: &str = include_str!("oracles/reference_values.txt");

struct Entry {
    key: String,
    arg: f64,
    value: f64,
    digits: String,
}

fn table() -> Vec<Entry> {
    TABLE
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let (key, arg, value) = match f.as_slice() {
                [k, v] => (k.to_string(), f64::NAN, *v),
                [k, a, v] => (k.to_string(), a.parse().unwrap(), *v),
                _ => panic!("bad oracle line {l}"),
            };
            Entry {
                key,
                arg,
                value: value.parse().unwrap(),
                digits: value.to_string(),
            }
        })
        .collect()
}

fn entries(key: &str) -> Vec<Entry> {
    let v: Vec<Entry> = table().into_iter().filter(|e| e.key == key).collect();
    assert!(!v.is_empty(), "no oracle rows for {key}");
    v
}

#[test]
fn measures_match_mpmath() {
    let opts = MeasureOptions::default();
    for e in entries("r") {
        let v = r_measure(e.arg, &opts).unwrap().value;
        assert!(
            (v - e.value).abs() < 1e-11,
            "r({}) = {v}, oracle {}",
            e.arg,
            e.value
        );
    }
    for e in entries("p") {
        let v = p_measure(e.arg, &opts).unwrap().value;
        assert!(
            (v - e.value).abs() < 1e-11,
            "p({}) = {v}, oracle {}",
            e.arg,
            e.value
        );
    }
    for e in entries("q") {
        let v = q_measure(e.arg, &opts).unwrap().value;
        assert!(
            (v - e.value).abs() < 1e-11,
            "q({}) = {v}, oracle {}",
            e.arg,
            e.value
        );
    }
    for e in entries("Q_k") {
        let p = make_family(&FamilySpec::q(e.arg as i64)).unwrap();
        let v = mahler_jensen_2var_with::<f64, _>(&p, &opts).unwrap().value;
        assert!(
            (v - e.value).abs() < 1e-11,
            "m(Q_{}) = {v}, oracle {}",
            e.arg,
            e.value
        );
    }
}

#[test]
fn linear_form() {
    let e = &entries("m(1+x+y)")[0];
    let p = mahler_core::poly::parse_text("1:0,0\n1:1,0\n1:0,1\n").unwrap();
    let v = mahler_jensen_2var_with::<f64, _>(&p, &MeasureOptions::default()).unwrap();
    assert!((v.value - e.value).abs() < 1e-12, "{v:?}");
}

#[test]
fn derivatives_match_mpmath() {
    for e in entries("dr") {
        let v = dr_dlambda(e.arg).unwrap();
        assert!(
            (v - e.value).abs() < 2e-15 * e.value.abs().max(1.0),
            "dr({})",
            e.arg
        );
    }
    for e in entries("dp") {
        let v = dp_dlambda(e.arg).unwrap();
        assert!(
            (v - e.value).abs() < 2e-15,
            "dp({}) = {v}, oracle {}",
            e.arg,
            e.value
        );
    }
}

#[test]
fn hypergeometric_values() {
    for e in table().into_iter().filter(|e| e.key.starts_with("2F1")) {
        let spec = if e.key.contains("1/3") {
            Hyp2F1Spec::third_two_thirds(e.arg)
        } else {
            Hyp2F1Spec::half_half(e.arg)
        };
        let v = hyp2f1(&spec).unwrap();
        assert!(
            (v - e.value).abs() < 1e-14,
            "{} = {v}, oracle {}",
            e.key,
            e.value
        );
    }
}

fn extended(digits: &str) -> Extended {
    digits.parse().expect("decimal parses")
}

#[test]
fn extended_precision_measures() {
    let opts = MeasureOptions {
        tolerance: 1e-26,
        ..MeasureOptions::default()
    };
    // the oracle carries 20 significant digits
    let tol = Extended::of(1e-18);
    for (key, lambda) in [("q", 13.0), ("q", -6.0), ("r", 6.0), ("p", 16.0)] {
        let e = entries(key).into_iter().find(|e| e.arg == lambda).unwrap();
        let l = Extended::of(lambda);
        let v = match key {
            "q" => q_measure(l, &opts),
            "r" => r_measure(l, &opts),
            _ => p_measure(l, &opts),
        }
        .unwrap()
        .value;
        let err = (v - extended(&e.digits)).abs();
        assert!(err < tol, "{key}({lambda}) = {v}, oracle {}", e.digits);
    }
}

#[test]
fn extended_precision_derivatives() {
    let tol = Extended::of(1e-18);
    for e in entries("dr") {
        let v = dr_dlambda(Extended::of(e.arg)).unwrap();
        assert!((v - extended(&e.digits)).abs() < tol, "dr({}) = {v}", e.arg);
    }
    for e in entries("dp") {
        let v = dp_dlambda(Extended::of(e.arg)).unwrap();
        assert!((v - extended(&e.digits)).abs() < tol, "dp({}) = {v}", e.arg);
    }
}
