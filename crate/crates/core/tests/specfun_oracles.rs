//! Special-function values against reference decimals computed independently
//! (45-digit mpmath evaluations of the textbook definitions).

use p1torsion::quadrature::BilateralConfig;
use p1torsion::specfun::{ci, ei, hurwitz_zeta, r_rot_value, riemann_zeta, si, zeta_neg, zeta_prime_neg};
use p1torsion::torsion::{i_class_inner_direct, i_class_inner_value};
use p1torsion::{Precision, Rational};
use rug::Float;

fn prec() -> Precision {
    Precision::new(40).unwrap()
}

fn dec(s: &str) -> Float {
    Float::with_val(prec().bits(), Float::parse(s).unwrap())
}

fn assert_close(got: &Float, want: &str, tol: f64, what: &str) {
    let err = Float::with_val(got.prec(), got - &dec(want)).abs();
    assert!(
        err.to_f64() <= tol,
        "{what}: got {got}, want {want}, error {}",
        err.to_f64()
    );
}

#[test]
fn zeta_derivative_at_negative_odd_integers() {
    let p = prec();
    let cases = [
        (1, "-0.16542114370045092921391966024278064276403638"),
        (3, "0.00537857635777430114441697421041384289566443974"),
        (5, "-0.000572985980198635204990994148833874513253987291"),
    ];
    for (m, want) in cases {
        assert_close(&zeta_prime_neg(m, p).unwrap(), want, 1e-38, &format!("zeta'(-{m})"));
    }
}

#[test]
fn zeta_prime_minus_one_through_glaisher() {
    // ζ′(−1) = 1/12 − log A
    let log_a = dec("0.248754477033784262547252993576113976097369714");
    let want = Float::with_val(prec().bits(), 1) / 12u32 - log_a;
    let got = zeta_prime_neg(1, prec()).unwrap();
    assert!(Float::with_val(got.prec(), &got - &want).abs().to_f64() < 1e-38);
}

#[test]
fn zeta_at_negative_integers_is_bernoulli() {
    let cases = [
        (1, (-1, 12)),
        (3, (1, 120)),
        (5, (-1, 252)),
        (7, (1, 240)),
        (11, (691, 32760)),
    ];
    for (m, (n, d)) in cases {
        assert_eq!(zeta_neg(m), Rational::from((n, d)), "zeta(-{m})");
    }
}

#[test]
fn riemann_and_hurwitz_values() {
    let p = prec();
    assert_close(
        &riemann_zeta(&dec("3"), p).unwrap(),
        "1.20205690315959428539973816151144999076498629",
        1e-38,
        "zeta(3)",
    );
    assert_close(
        &hurwitz_zeta(&dec("2.5"), &dec("0.3"), p).unwrap(),
        "21.0692392022477230269553583240838466576401678",
        1e-36,
        "zeta(2.5, 0.3)",
    );
    assert_close(
        &hurwitz_zeta(&dec("-1.5"), &dec("1.7"), p).unwrap(),
        "-0.56218374424069140117461346602491105299508291",
        1e-38,
        "zeta(-1.5, 1.7)",
    );
}

#[test]
fn sine_cosine_exponential_integrals() {
    let p = prec();
    assert_close(
        &si(&dec("0.5"), p),
        "0.493107418043066689161626707572764653641337138",
        1e-38,
        "Si(0.5)",
    );
    assert_close(
        &ci(&dec("0.5"), p).unwrap(),
        "-0.177784078806612901335810271070569078090519475",
        1e-38,
        "Ci(0.5)",
    );
    assert_close(
        &si(&dec("30"), p),
        "1.56675654003035111098373130900679816652349501",
        1e-38,
        "Si(30)",
    );
    assert_close(
        &ci(&dec("30"), p).unwrap(),
        "-0.0330324172820711437792264409630037141546821299",
        1e-38,
        "Ci(30)",
    );
    assert_close(
        &ei(&dec("3"), p).unwrap(),
        "9.93383257062541655800833601921676526299065302",
        1e-37,
        "Ei(3)",
    );
}

#[test]
fn rotation_function_matches_polylog_derivative() {
    // R^rot(t) = Im ∂_s Li_s(e^{it}) at s = 0
    let cases = [
        ("0.5", "-0.314685804909796623878161446757185077669078991"),
        ("1", "0.410893470452794904132993312300426853694399217"),
        ("2", "0.297038575076127724546473427820453602881232315"),
        ("4", "-0.225811082559106044324471440126931412865117326"),
        ("5.5", "-0.294981882193503479782022608373171173244256096"),
    ];
    for (t, want) in cases {
        assert_close(
            &r_rot_value(&dec(t), prec()).unwrap(),
            want,
            1e-36,
            &format!("R^rot({t})"),
        );
    }
}

#[test]
fn i_class_inner_function_both_forms() {
    // −Σ_{k≠0} log(1 + x/2πk)/(x + 2πk) at x = 0.8
    let want = "-0.0679955701266789960568257062909573906481074999";
    let x = dec("0.8");
    assert_close(&i_class_inner_value(&x, prec()).unwrap(), want, 1e-35, "J series");
    let direct = i_class_inner_direct(&x, &BilateralConfig::default(), Precision::new(30).unwrap()).unwrap();
    assert_close(&direct, want, 1e-14, "J direct");
}
