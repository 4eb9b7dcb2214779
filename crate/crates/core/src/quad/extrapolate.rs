use super::sum::Components;
use crate::Error;

/// Model assumed for the approach to the limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtrapolationKind {
    /// `v(h) = v₀ + c₁ h^q + c₂ h^{2q} + …`, eliminated by a Richardson (Neville) table.
    RichardsonPoly { power: u32 },
    /// Geometric convergence of successive samples, removed by Aitken's Δ².
    ExponentialTail,
}

impl Default for ExtrapolationKind {
    fn default() -> Self {
        ExtrapolationKind::RichardsonPoly { power: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation<T> {
    pub limit: T,
    pub uncertainty: f64,
}

/// Estimates `lim_{h→0} v(h)` from samples `(h, v(h))` ordered by decreasing `h`.
pub fn extrapolate_limit<T: Components>(samples: &[(f64, T)], kind: ExtrapolationKind) -> Result<Extrapolation<T>, Error> {
    match kind {
        ExtrapolationKind::RichardsonPoly { power } => richardson(samples, power),
        ExtrapolationKind::ExponentialTail => aitken(samples),
    }
}

fn richardson<T: Components>(samples: &[(f64, T)], power: u32) -> Result<Extrapolation<T>, Error> {
    if samples.len() < 2 {
        return Err(Error::NonConvergence("Richardson extrapolation needs at least two samples".into()));
    }
    if power == 0 {
        return Err(Error::Domain("Richardson power must be positive".into()));
    }
    let t: Vec<f64> = samples.iter().map(|(h, _)| h.powi(power as i32)).collect();
    if t.windows(2).any(|w| !(w[0] > w[1])) || t.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Domain("sample abscissae must be positive and strictly decreasing".into()));
    }
    let n = samples.len();
    let mut table: Vec<Vec<T>> = vec![samples.iter().map(|(_, v)| *v).collect()];
    for j in 1..n {
        let prev = &table[j - 1];
        let col: Vec<T> = (j..n)
            .map(|i| {
                let (a, b) = (prev[i - j], prev[i - j + 1]);
                let f = t[i] / (t[i - j] - t[i]);
                b.plus(&b.minus(&a).scaled(f))
            })
            .collect();
        table.push(col);
    }
    let best = *table[n - 1].last().unwrap();
    let same_level = *table[n - 2].last().unwrap();
    let previous_diag = table[n - 2][0];
    let uncertainty = best.minus(&same_level).magnitude().max(best.minus(&previous_diag).magnitude());
    Ok(Extrapolation { limit: best, uncertainty })
}

fn aitken<T: Components>(samples: &[(f64, T)]) -> Result<Extrapolation<T>, Error> {
    if samples.len() < 3 {
        return Err(Error::NonConvergence("Aitken extrapolation needs at least three samples".into()));
    }
    let n = samples.len();
    let (v0, v1, v2) = (samples[n - 3].1, samples[n - 2].1, samples[n - 1].1);
    let mut a = [0.0; 8];
    let mut b = [0.0; 8];
    let mut c = [0.0; 8];
    v0.write(&mut a[..T::LEN]);
    v1.write(&mut b[..T::LEN]);
    v2.write(&mut c[..T::LEN]);
    let mut out = [0.0; 8];
    for i in 0..T::LEN {
        let (d1, d2) = (b[i] - a[i], c[i] - b[i]);
        let denom = d2 - d1;
        out[i] = if denom != 0.0 && d2 != 0.0 { c[i] - d2 * d2 / denom } else { c[i] };
    }
    let limit = T::read(&out[..T::LEN]);
    let uncertainty = limit.minus(&v2).magnitude().max(v2.minus(&v1).magnitude() * f64::EPSILON);
    Ok(Extrapolation { limit, uncertainty })
}
