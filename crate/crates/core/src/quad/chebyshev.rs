use std::f64::consts::PI;

use super::sum::{Components, CompensatedVec};

/// A Chebyshev expansion `Σ c_j T_j(x)` on `[a, b]`.
#[derive(Debug, Clone)]
pub struct Chebyshev<T> {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<T>,
}

impl<T: Components> Chebyshev<T> {
    /// Interpolant through values at the Lobatto points `cos(πk/N)`, `k = 0..=N`.
    pub fn from_lobatto_values(a: f64, b: f64, values: &[T]) -> Self {
        let n = values.len() - 1;
        let coeffs = (0..=n)
            .map(|j| {
                let mut acc = CompensatedVec::new(T::LEN);
                for (k, v) in values.iter().enumerate() {
                    let half = if k == 0 || k == n { 0.5 } else { 1.0 };
                    acc.add_scaled(v, half * (PI * (j * k) as f64 / n as f64).cos());
                }
                let c: T = acc.value();
                let end = if j == 0 || j == n { 0.5 } else { 1.0 };
                c.scaled(2.0 / n as f64 * end)
            })
            .collect();
        Chebyshev { a, b, coeffs }
    }

    pub fn eval(&self, x: f64) -> T {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let mut b1 = T::zero();
        let mut b2 = T::zero();
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = c.plus(&b1.scaled(2.0 * t)).minus(&b2);
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0].plus(&b1.scaled(t)).minus(&b2)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Outcome of an adaptive Chebyshev fit.
#[derive(Debug, Clone)]
pub struct ChebyshevFit<T> {
    pub series: Chebyshev<T>,
    /// Estimated maximum absolute interpolation error on `[a, b]`.
    pub error: f64,
    /// Number of function evaluations spent.
    pub evaluations: usize,
}

/// Doubles the number of Lobatto points, reusing earlier values, until the
/// trailing quarter of the coefficients sums below `abs_tol` or `n_max` is
/// reached. Two off-grid probes guard the estimate.
pub fn fit_chebyshev<T, F>(f: F, a: f64, b: f64, abs_tol: f64, n_start: usize, n_max: usize) -> ChebyshevFit<T>
where
    T: Components,
    F: Fn(f64) -> T + Sync + Send,
{
    let map = |t: f64| 0.5 * (a + b) + 0.5 * (b - a) * t;
    let mut n = n_start.max(4);
    let mut values: Vec<T> = crate::map_indexed(n + 1, |k| f(map((PI * k as f64 / n as f64).cos())));
    let mut evaluations = n + 1;
    loop {
        let series = Chebyshev::from_lobatto_values(a, b, &values);
        let tail: f64 = series.coeffs[(3 * n) / 4..].iter().map(|c| c.magnitude()).sum();
        if tail <= abs_tol || 2 * n > n_max {
            let probes = [0.618_033_988_749_894_8, -0.414_213_562_373_095_1];
            let exact: Vec<T> = crate::map_indexed(probes.len(), |i| f(map(probes[i])));
            evaluations += probes.len();
            let probe_err = probes
                .iter()
                .zip(&exact)
                .map(|(&t, v)| series.eval(map(t)).minus(v).magnitude())
                .fold(0.0, f64::max);
            return ChebyshevFit { series, error: tail.max(probe_err), evaluations };
        }
        let fresh: Vec<T> = crate::map_indexed(n, |k| f(map((PI * (2 * k + 1) as f64 / (2 * n) as f64).cos())));
        evaluations += n;
        let mut merged = Vec::with_capacity(2 * n + 1);
        for k in 0..n {
            merged.push(values[k]);
            merged.push(fresh[k]);
        }
        merged.push(values[n]);
        values = merged;
        n *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn reproduces_analytic_function() {
        let fit = fit_chebyshev(|x: f64| (2.0 * x).exp() / (1.0 + x * x), 0.2, 2.9, 1e-13, 16, 256);
        for i in 0..50 {
            let x = 0.2 + 2.7 * i as f64 / 49.0;
            let exact = (2.0 * x).exp() / (1.0 + x * x);
            assert!((fit.series.eval(x) - exact).abs() < 1e-11 * exact.abs().max(1.0));
        }
        assert!(fit.error < 1e-11);
    }

    #[test]
    fn complex_values() {
        let f = |x: f64| Complex64::from_polar(1.0 + x, 3.0 * x);
        let fit = fit_chebyshev(f, 0.0, 1.0, 1e-13, 8, 128);
        assert!((fit.series.eval(0.37) - f(0.37)).norm() < 1e-12);
    }

    #[test]
    fn polynomials_are_exact_at_first_level() {
        let fit = fit_chebyshev(|x: f64| 1.0 + x - 2.0 * x * x * x, -1.0, 3.0, 1e-12, 8, 8);
        assert_eq!(fit.evaluations, 9 + 2);
        assert!((fit.series.eval(2.5) - (1.0 + 2.5 - 2.0 * 2.5f64.powi(3))).abs() < 1e-12);
    }
}
