use cmc_cli::expr::parse_rational;
use cmc_core::sigma::RationalMap;
use cmc_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Complex64> {
    prop_oneof![
        (-5i32..=5).prop_map(|k| Complex64::new(k as f64, 0.0)),
        (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(a, b)| Complex64::new(a, b)),
        (-1e-6f64..1e-6).prop_map(|a| Complex64::new(0.0, a)),
    ]
}

fn map() -> impl Strategy<Value = RationalMap> {
    (prop::collection::vec(coeff(), 1..6), prop::collection::vec(coeff(), 1..4))
        .prop_filter_map("zero denominator", |(n, d)| RationalMap::new(n, d).ok())
}

proptest! {
    #[test]
    fn printing_then_parsing_is_the_identity(m in map()) {
        let back = parse_rational(&m.to_string()).unwrap();
        prop_assert_eq!(back.numerator(), m.numerator());
        prop_assert_eq!(back.denominator(), m.denominator());
    }

    #[test]
    fn normalized_form_evaluates_like_the_source(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() > 1e-3);
        let m = parse_rational("1/z + z").unwrap();
        let direct = 1.0 / z + z;
        prop_assert!((m.eval(z) - direct).norm() <= 1e-13 * (1.0 + direct.norm()));
    }
}

#[test]
fn common_denominator_normalization() {
    let m = parse_rational("1/z + z").unwrap();
    let c = |v: f64| Complex64::new(v, 0.0);
    assert_eq!(m.numerator(), &[c(1.0), c(0.0), c(1.0)]);
    assert_eq!(m.denominator(), &[c(0.0), c(1.0)]);
}

#[test]
fn mobius_coefficients() {
    let m = parse_rational("(z^2 - 1)/(z^2 + 1)").unwrap();
    let c = |v: f64| Complex64::new(v, 0.0);
    assert_eq!(m.numerator(), &[c(-1.0), c(0.0), c(1.0)]);
    assert_eq!(m.denominator(), &[c(1.0), c(0.0), c(1.0)]);
}

#[test]
fn errors_carry_their_kind() {
    assert!(matches!(parse_rational(""), Err(Error::Syntax { pos: 0, .. })));
    assert!(matches!(parse_rational("z^0.5"), Err(Error::NonRational(_))));
    assert!(matches!(parse_rational("1/0"), Err(Error::NonRational(_))));
    assert!(matches!(parse_rational("z^65"), Err(Error::DegreeCap(65))));
}
