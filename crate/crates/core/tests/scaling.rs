use hotbang::hotbang::dilation_exponent;
use hotbang::quad::QuadConfig;
use hotbang::states::Numerics;
use hotbang::testfn::{random_test_function, BumpFamily};

// At fixed λ the Hot Bang two-point kernel is homogeneous of degree −3 under
// x ↦ sx, and the two smearings contribute s⁴ each.
#[test]
fn hot_bang_values_scale_with_the_fifth_power() {
    let f = random_test_function(9, &BumpFamily { terms: 2, ..Default::default() }).unwrap();
    let num = Numerics { quad: QuadConfig::coarse(), ..Default::default() };
    for s in [0.5, 2.0] {
        let k = dilation_exponent(&f, 1.0, s, &num).unwrap();
        assert!((k - 5.0).abs() < 1e-6, "s = {s}: exponent {k}");
    }
}
