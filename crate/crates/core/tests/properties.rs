use std::f64::consts::PI;

use hotbang::minkowski::{lorentz_from_sl2, mink_product, FourVector, SL2Element};
use hotbang::states::{fermi, StateSpec};
use hotbang::testfn::{Bump, TestFunction};
use hotbang::thermal::{macro_expectation, MacroObservable};
use hotbang::Complex64;
use proptest::prelude::*;

fn four_vector() -> impl Strategy<Value = FourVector> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(FourVector)
}

fn future_point() -> impl Strategy<Value = FourVector> {
    (prop::array::uniform3(-2.0..2.0f64), 0.05..3.0f64).prop_map(|(s, extra)| {
        let r = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        FourVector::new(r + extra, s[0], s[1], s[2])
    })
}

proptest! {
    #[test]
    fn induced_lorentz_maps_preserve_the_metric(eta in -1.5..1.5f64, theta in -3.0..3.0f64, a in four_vector(), b in four_vector()) {
        let m = *SL2Element::boost_z(eta).matrix() * *SL2Element::rotation_x(theta).matrix();
        let lambda = lorentz_from_sl2(&SL2Element::new(m).unwrap());
        let (la, lb) = (lambda.apply(&a), lambda.apply(&b));
        let scale = 1.0 + a.euclidean_norm() * b.euclidean_norm() * (2.0 * eta.abs()).exp();
        prop_assert!((mink_product(&la, &lb) - mink_product(&a, &b)).abs() < 1e-12 * scale);
    }

    #[test]
    fn fermi_factors_are_complementary(x in -800.0..800.0f64) {
        prop_assert!((fermi(x) + fermi(-x) - 1.0).abs() < 1e-15);
        prop_assert!(fermi(x).is_finite() && fermi(x) >= 0.0);
    }

    #[test]
    fn hot_bang_temperature_squared(lambda in 0.1..4.0f64, x in future_point()) {
        let state = StateSpec::hotbang(lambda).unwrap();
        let t2 = macro_expectation(&state, &MacroObservable::T2 {}, &x).unwrap();
        let expected = 1.0 / (4.0 * lambda * lambda * (x.t() * x.t() - x.spatial_norm().powi(2)));
        prop_assert!((t2 / expected - 1.0).abs() < 1e-10);
    }
}

#[test]
fn fourier_transform_at_zero_is_the_integral() {
    // ∫_{-1}^{1} e^{-1/(1-u²)} du by the trapezoid rule, which converges
    // faster than any power for a profile that is flat at both ends.
    let n = 4000;
    let h = 2.0 / n as f64;
    let mass: f64 = (1..n)
        .map(|k| {
            let u = -1.0 + k as f64 * h;
            (-1.0 / (1.0 - u * u)).exp()
        })
        .sum::<f64>()
        * h;
    let r = [0.3, 0.2, 0.25, 0.4];
    let amp = [Complex64::new(1.0, 0.5), Complex64::new(-0.2, 0.0)];
    let bump = Bump::new(FourVector::new(2.0, 0.1, 0.0, -0.2), r, amp, Complex64::new(0.5, 0.0)).unwrap();
    let f = TestFunction::single(bump);
    let zero = [Complex64::new(0.0, 0.0); 4];
    let v = f.fourier(&zero);
    let volume: f64 = r.iter().map(|ri| ri * mass).product();
    for (got, a) in v.iter().zip(amp) {
        let want = a * 0.5 * volume / (2.0 * PI).powi(2);
        assert!((got - want).norm() < 1e-12 * want.norm().max(1e-3), "{got} vs {want}");
    }
}

#[test]
fn conjugation_is_an_involution() {
    let bump = Bump::new(FourVector::new(1.5, 0.0, 0.2, 0.0), [0.2; 4], [Complex64::new(0.3, -0.7), Complex64::new(0.0, 1.0)], Complex64::new(0.0, 2.0)).unwrap();
    let f = TestFunction::single(bump);
    let x = FourVector::new(1.55, 0.05, 0.15, 0.02);
    assert_eq!(f.conj().conj().evaluate(&x), f.evaluate(&x));
    let (a, b) = (f.evaluate(&x), f.conj().evaluate(&x));
    assert_eq!(a[0].conj(), b[0]);
    assert_eq!(a[1].conj(), b[1]);
}
