use num_complex::Complex64;
use serde::Serialize;

use super::{complexify, Smearing};
use crate::minkowski::FourVector;
use crate::Error;

/// Fit of the bound `|f̃(z p′)| ≤ C_N e^{−δ|p⃗| Im z} (1+|z||p⃗|)^{−N}`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PaleyWienerReport {
    pub n: u32,
    /// Support distance `δ = min (x⁰ − |x⃗|)`.
    pub delta: f64,
    /// Smallest constant valid on all samples.
    pub c_n: f64,
    /// Largest ratio of `|f̃|` to the fitted bound (1 when `C_N > 0`).
    pub worst_ratio: f64,
    pub samples: usize,
}

/// Fits `C_N` over samples `(z, p⃗)` with `Im z ≥ 0`.
pub fn paley_wiener_check(f: &dyn Smearing, n: u32, samples: &[(Complex64, [f64; 3])]) -> Result<PaleyWienerReport, Error> {
    if let Some((z, _)) = samples.iter().find(|(z, _)| z.im < 0.0) {
        return Err(Error::Domain(format!("sample z = {z} lies below the real axis")));
    }
    let delta = f.cone_margin();
    let normalized: Vec<(f64, f64)> = samples
        .iter()
        .map(|(z, p)| {
            let pp = FourVector::on_shell(*p);
            let v = f.fourier(&complexify(*z, &pp));
            let mag = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            let modulus = pp.t();
            let weight = (delta * modulus * z.im).exp() * (1.0 + z.norm() * modulus).powi(n as i32);
            (mag, mag * weight)
        })
        .collect();
    let c_n = normalized.iter().map(|s| s.1).fold(0.0, f64::max);
    let worst_ratio = if c_n > 0.0 { normalized.iter().map(|s| s.1 / c_n).fold(0.0, f64::max) } else { 0.0 };
    Ok(PaleyWienerReport { n, delta, c_n, worst_ratio, samples: samples.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::{Bump, TestFunction};
    use rand::{RngExt, SeedableRng};

    fn bump() -> TestFunction {
        TestFunction::single(Bump::standard(FourVector::new(2.0, 0.2, 0.0, -0.1), [0.4, 0.3, 0.3, 0.3]).unwrap())
    }

    fn samples(count: usize, seed: u64) -> Vec<(Complex64, [f64; 3])> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let z = Complex64::from_polar(rng.random_range(0.2..3.0), rng.random_range(0.0..std::f64::consts::PI));
                let p = [rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0)];
                (z, p)
            })
            .collect()
    }

    #[test]
    fn zero_function() {
        let f = bump().scaled(Complex64::new(0.0, 0.0));
        let r = paley_wiener_check(&f, 4, &samples(10, 1)).unwrap();
        assert_eq!(r.c_n, 0.0);
    }

    #[test]
    fn fit_is_stable_under_refinement() {
        let f = bump();
        let coarse = paley_wiener_check(&f, 4, &samples(400, 7)).unwrap();
        let mut more = samples(400, 7);
        more.extend(samples(400, 8));
        let fine = paley_wiener_check(&f, 4, &more).unwrap();
        assert!(coarse.c_n.is_finite() && coarse.c_n > 0.0);
        assert!((fine.c_n - coarse.c_n).abs() < 0.1 * fine.c_n, "{} vs {}", coarse.c_n, fine.c_n);
        assert!((fine.worst_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_decay_along_imaginary_axis() {
        let f = bump();
        let delta = f.cone_margin();
        let p = [0.6, -0.3, 0.8];
        let modulus = FourVector::on_shell(p).t();
        let ratios: Vec<f64> = [2.0, 4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|&s| {
                let v = f.fourier(&complexify(Complex64::new(0.0, s), &FourVector::on_shell(p)));
                (v[0].norm_sqr() + v[1].norm_sqr()).sqrt() * (delta * modulus * s).exp()
            })
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] <= w[0] * 1.000001), "{ratios:?}");
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(paley_wiener_check(&bump(), 2, &[(Complex64::new(1.0, -0.1), [1.0, 0.0, 0.0])]).is_err());
    }
}
