use super::sum::{Components, CompensatedVec};
use crate::Error;

/// Result of an alternating-series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum<T> {
    pub value: T,
    /// Magnitude of the first omitted term.
    pub error_bound: f64,
    /// Number of terms included in `value`.
    pub terms: usize,
}

/// Sums `Σ_{n≥0} a_n` for a series whose terms eventually alternate with
/// decreasing magnitude.
///
/// Summation stops at the first `n` with `|a_n| < tol` whose magnitude has
/// not increased over the three preceding terms; `a_n` itself is omitted and
/// its magnitude is the returned error bound.
pub fn alternating_sum<T, F>(terms: F, tol: f64, max_n: usize) -> Result<SeriesSum<T>, Error>
where
    T: Components,
    F: FnMut(usize) -> T,
{
    run(terms, tol, max_n, None)
}

/// Same as [`alternating_sum`], also returning every partial sum.
pub fn alternating_sum_traced<T, F>(terms: F, tol: f64, max_n: usize) -> Result<(SeriesSum<T>, Vec<T>), Error>
where
    T: Components,
    F: FnMut(usize) -> T,
{
    let mut trace = Vec::new();
    let s = run(terms, tol, max_n, Some(&mut trace))?;
    Ok((s, trace))
}

fn run<T, F>(mut terms: F, tol: f64, max_n: usize, mut trace: Option<&mut Vec<T>>) -> Result<SeriesSum<T>, Error>
where
    T: Components,
    F: FnMut(usize) -> T,
{
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("series tolerance must be positive, got {tol}")));
    }
    let mut acc = CompensatedVec::new(T::LEN);
    let mut recent = [f64::INFINITY; 3];
    for n in 0..max_n {
        let a = terms(n);
        if !a.is_finite() {
            return Err(Error::NonConvergence(format!("series term {n} is not finite")));
        }
        let m = a.magnitude();
        if n >= 3 && m < tol && m <= recent[2] && recent[2] <= recent[1] && recent[1] <= recent[0] {
            return Ok(SeriesSum { value: acc.value(), error_bound: m, terms: n });
        }
        acc.add(&a);
        if let Some(t) = trace.as_deref_mut() {
            t.push(acc.value());
        }
        recent = [recent[1], recent[2], m];
    }
    Err(Error::NonConvergence(format!("alternating series did not reach tolerance {tol:e} within {max_n} terms")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_two() {
        let s = alternating_sum(|n| (-1f64).powi(n as i32) / (n as f64 + 1.0), 1e-6, 10_000_000).unwrap();
        assert!((s.value - 2f64.ln()).abs() <= s.error_bound);
    }

    #[test]
    fn zero_series() {
        let s = alternating_sum(|_| 0.0, 1e-12, 100).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.error_bound, 0.0);
    }

    #[test]
    fn geometric() {
        let s = alternating_sum(|n| (-1f64).powi(n as i32) * (-(n as f64)).exp(), 1e-12, 1000).unwrap();
        let exact = 1.0 / (1.0 + (-1f64).exp());
        assert!((s.value - exact).abs() <= s.error_bound.max(1e-15));
        assert!(s.error_bound < 1e-12);
    }

    #[test]
    fn non_convergence_is_reported() {
        let r = alternating_sum(|n| (-1f64).powi(n as i32), 1e-3, 1000);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn trace_ends_at_value() {
        let (s, t) = alternating_sum_traced(|n| (-0.5f64).powi(n as i32), 1e-10, 1000).unwrap();
        assert_eq!(t.len(), s.terms);
        assert_eq!(*t.last().unwrap(), s.value);
    }
}
