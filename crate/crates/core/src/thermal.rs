//! Thermal functions `L^{μ⃗ν}(β) = c_m ∂^{μ⃗ν} (β,β)^{-1}`, the coefficients
//! `c_m`, macroobservables and their expectation values in the states of
//! [`crate::states`].
//!
//! Derivatives with respect to `β` carry upper indices,
//! `∂^μ = η^{μα} ∂/∂β^α`, and are taken symbolically.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::minkowski::FourVector;
use crate::quad::{extrapolate_limit, finite_difference, Extrapolation, ExtrapolationKind, QuadConfig};
use crate::states::{point_split_vector, StateSpec};
use crate::Error;

const METRIC: [i64; 4] = [1, -1, -1, -1];

/// Exact Bernoulli numbers `B_0, B_1, …` in the modern convention
/// (`B_1 = −1/2`, `B_{2k+1} = 0` for `k ≥ 1`).
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    modern: Vec<BigRational>,
}

impl BernoulliTable {
    /// Computes `B_0..=B_max` from `Σ_{k≤n} C(n+1, k) B_k = 0`.
    pub fn new(max: usize) -> Self {
        let mut modern: Vec<BigRational> = Vec::with_capacity(max + 1);
        for n in 0..=max {
            if n == 0 {
                modern.push(BigRational::one());
                continue;
            }
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (k, b) in modern.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * b;
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            modern.push(-acc / BigRational::from_integer(binom));
        }
        BernoulliTable { modern }
    }

    /// Table shared by the whole crate.
    pub fn shared() -> &'static BernoulliTable {
        static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
        TABLE.get_or_init(|| BernoulliTable::new(160))
    }

    pub fn max_index(&self) -> usize {
        self.modern.len() - 1
    }

    /// `B_n` in the modern convention.
    pub fn modern(&self, n: usize) -> Option<&BigRational> {
        self.modern.get(n)
    }

    /// `B̂_n = |B_{2n}|`, the classical numbering `B̂_1 = 1/6, B̂_2 = 1/30, …`.
    pub fn classical(&self, n: usize) -> Option<BigRational> {
        if n == 0 {
            return None;
        }
        self.modern.get(2 * n).map(|b| b.abs())
    }

    /// `B_n` read in the given convention.
    pub fn get(&self, n: usize, convention: BernoulliConvention) -> Option<BigRational> {
        match convention {
            BernoulliConvention::Modern => self.modern(n).cloned(),
            BernoulliConvention::Classical => self.classical(n),
        }
    }
}

/// How the index of `B_n` in the formula for `c_m` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BernoulliConvention {
    Modern,
    Classical,
}

impl BernoulliConvention {
    pub const BOTH: [BernoulliConvention; 2] = [BernoulliConvention::Modern, BernoulliConvention::Classical];

    pub fn label(self) -> &'static str {
        match self {
            BernoulliConvention::Modern => "modern",
            BernoulliConvention::Classical => "classical",
        }
    }
}

/// Convention used by [`thermal_function`]. Only the classical reading gives
/// thermal functions of the same index shape as the point-split expectation
/// for every odd `m`; the modern reading makes `c_3` vanish.
pub const ADOPTED_CONVENTION: BernoulliConvention = BernoulliConvention::Classical;

/// `c_m = i π^{m+1} (2^{2m+2} − 2^{m+1}) / (m+3)! · (−1)^{(m+3)/2} B_{(m+3)/2}`
/// for odd `m`, zero for even `m`.
pub fn c_coeff(m: usize, convention: BernoulliConvention) -> Result<Complex64, Error> {
    if m.is_multiple_of(2) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let j = (m + 3) / 2;
    let b = BernoulliTable::shared()
        .get(j, convention)
        .ok_or_else(|| Error::Domain(format!("Bernoulli table too short for m = {m}")))?;
    let two = BigInt::from(2);
    let numer = two.pow((2 * m + 2) as u32) - two.pow((m + 1) as u32);
    let factorial: BigInt = (1..=m + 3).map(BigInt::from).product();
    let sign = if j.is_multiple_of(2) { 1 } else { -1 };
    let rational = BigRational::new(numer * sign, factorial) * b;
    let value = rational.to_f64().ok_or_else(|| Error::Domain(format!("c_{m} is not representable")))? * PI.powi(m as i32 + 1);
    Ok(Complex64::new(0.0, value))
}

/// The multi-index `(μ⃗, ν)` of a thermal observable; `m = |μ⃗|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalIndex {
    pub mu: Vec<usize>,
    pub nu: usize,
}

impl ThermalIndex {
    pub fn new(mu: Vec<usize>, nu: usize) -> Result<Self, Error> {
        let idx = ThermalIndex { mu, nu };
        idx.validate()?;
        Ok(idx)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.nu > 3 || self.mu.iter().any(|&m| m > 3) {
            return Err(Error::Domain(format!("spacetime indices must lie in 0..=3, got {self}")));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.mu.len()
    }

    /// All `m + 1` indices, `μ⃗` followed by `ν`.
    pub fn all(&self) -> Vec<usize> {
        let mut v = self.mu.clone();
        v.push(self.nu);
        v
    }

    /// Every index with `|μ⃗| = m`, in lexicographic order.
    pub fn enumerate(m: usize) -> Vec<ThermalIndex> {
        let total = 4usize.pow(m as u32 + 1);
        (0..total)
            .map(|mut code| {
                let mut digits = vec![0; m + 1];
                for d in digits.iter_mut().rev() {
                    *d = code % 4;
                    code /= 4;
                }
                let nu = digits.pop().unwrap();
                ThermalIndex { mu: digits, nu }
            })
            .collect()
    }
}

impl fmt::Display for ThermalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu: Vec<String> = self.mu.iter().map(|m| m.to_string()).collect();
        write!(f, "({};{})", mu.join(""), self.nu)
    }
}

/// One term `coef · Π (β^α)^{pow_α} · (β,β)^{-k}` of a symbolic derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivativeTerm {
    pub coef: i64,
    pub pow: [u32; 4],
    pub k: u32,
}

/// `∂^{i_1} … ∂^{i_n} (β,β)^{-1}` as a sum of [`DerivativeTerm`]s.
pub fn inverse_square_derivative(indices: &[usize]) -> Vec<DerivativeTerm> {
    let mut terms: BTreeMap<([u32; 4], u32), i64> = BTreeMap::new();
    terms.insert(([0; 4], 1), 1);
    for &mu in indices {
        let mut next: BTreeMap<([u32; 4], u32), i64> = BTreeMap::new();
        for (&(pow, k), &coef) in &terms {
            if pow[mu] > 0 {
                let mut p = pow;
                p[mu] -= 1;
                *next.entry((p, k)).or_insert(0) += coef * pow[mu] as i64 * METRIC[mu];
            }
            let mut p = pow;
            p[mu] += 1;
            *next.entry((p, k + 1)).or_insert(0) += -2 * k as i64 * coef;
        }
        next.retain(|_, c| *c != 0);
        terms = next;
    }
    terms.into_iter().map(|((pow, k), coef)| DerivativeTerm { coef, pow, k }).collect()
}

/// Value of a symbolic derivative at `β`.
pub fn eval_terms(terms: &[DerivativeTerm], beta: &FourVector) -> f64 {
    let q = beta.square();
    terms
        .iter()
        .map(|t| {
            let mono: f64 = (0..4).map(|a| beta[a].powi(t.pow[a] as i32)).product();
            t.coef as f64 * mono / q.powi(t.k as i32)
        })
        .sum()
}

/// `L^{μ⃗ν}(β)` in the adopted Bernoulli convention.
pub fn thermal_function(idx: &ThermalIndex, beta: &FourVector) -> Result<Complex64, Error> {
    thermal_function_with(idx, beta, ADOPTED_CONVENTION)
}

pub fn thermal_function_with(idx: &ThermalIndex, beta: &FourVector, convention: BernoulliConvention) -> Result<Complex64, Error> {
    idx.validate()?;
    beta.require_timelike_future("β")?;
    let c = c_coeff(idx.m(), convention)?;
    if c == Complex64::new(0.0, 0.0) {
        return Ok(c);
    }
    Ok(c * eval_terms(&inverse_square_derivative(&idx.all()), beta))
}

/// A user-supplied function of `β`.
#[derive(Clone)]
pub struct CustomMacro {
    pub name: String,
    pub f: Arc<dyn Fn(&FourVector) -> f64 + Send + Sync>,
}

impl CustomMacro {
    pub fn new(name: impl Into<String>, f: impl Fn(&FourVector) -> f64 + Send + Sync + 'static) -> Self {
        CustomMacro { name: name.into(), f: Arc::new(f) }
    }
}

impl fmt::Debug for CustomMacro {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Custom({})", self.name)
    }
}

impl PartialEq for CustomMacro {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && Arc::ptr_eq(&self.f, &other.f)
    }
}

/// Functions of the inverse temperature vector that are averaged over the
/// thermal parameters of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum MacroObservable {
    /// `T² = (β,β)^{-1}`.
    T2 {},
    /// `E^{μν}(β) = (π²/60)(4β^μβ^ν/(β,β)³ − η^{μν}/(β,β)²)`.
    Energy { mu: usize, nu: usize },
    /// `S^μ(β) = (π²/15) β^μ/(β,β)`.
    Entropy { mu: usize },
    /// `N_p(β) = (2π)^{-3} (1 + e^{(β,p)})^{-1}` for forward-null `p`.
    PhaseSpace { p: FourVector },
    #[serde(skip)]
    Custom(CustomMacro),
}

impl MacroObservable {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let m: MacroObservable = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid observable: {e}")))?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), Error> {
        match self {
            MacroObservable::Energy { mu, nu } if *mu > 3 || *nu > 3 => Err(Error::Domain(format!("energy indices ({mu}, {nu}) out of range"))),
            MacroObservable::Entropy { mu } if *mu > 3 => Err(Error::Domain(format!("entropy index {mu} out of range"))),
            MacroObservable::PhaseSpace { p } if !(p.is_finite() && p.is_forward_null(1e-12)) => {
                Err(Error::Domain(format!("phase-space momentum must be forward null, got {:?}", p.0)))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            MacroObservable::T2 {} => "T2".into(),
            MacroObservable::Energy { mu, nu } => format!("E{mu}{nu}"),
            MacroObservable::Entropy { mu } => format!("S{mu}"),
            MacroObservable::PhaseSpace { p } => format!("N_p[{} {} {} {}]", p[0], p[1], p[2], p[3]),
            MacroObservable::Custom(c) => c.name.clone(),
        }
    }
}

/// `Ξ(β)` for a single inverse temperature vector.
pub fn builtin_macro(xi: &MacroObservable, beta: &FourVector) -> Result<f64, Error> {
    xi.validate()?;
    beta.require_timelike_future("β")?;
    let q = beta.square();
    Ok(match xi {
        MacroObservable::T2 {} => 1.0 / q,
        MacroObservable::Energy { mu, nu } => {
            let eta = if mu == nu { METRIC[*mu] as f64 } else { 0.0 };
            PI * PI / 60.0 * (4.0 * beta[*mu] * beta[*nu] / (q * q * q) - eta / (q * q))
        }
        MacroObservable::Entropy { mu } => PI * PI / 15.0 * beta[*mu] / q,
        MacroObservable::PhaseSpace { p } => crate::states::fermi(beta.dot(p)) / (2.0 * PI).powi(3),
        MacroObservable::Custom(c) => (c.f)(beta),
    })
}

/// `‖Ξ‖_B = sup_{β∈B} |Ξ(β)|` over a sampled set `B`.
pub fn seminorm(xi: &MacroObservable, samples: &[FourVector]) -> Result<f64, Error> {
    samples.iter().try_fold(0.0f64, |acc, b| Ok(acc.max(builtin_macro(xi, b)?.abs())))
}

/// Outcome of the wave-equation test that qualifies an observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    /// Largest `|□_β Ξ|` relative to the size of the second derivatives.
    pub worst_residual: f64,
    pub admissible: bool,
}

/// Checks `□_β Ξ = 0` by finite differences at the sampled `β`.
pub fn admissibility(xi: &MacroObservable, samples: &[FourVector], tol: f64) -> Result<Admissibility, Error> {
    let mut worst = 0.0f64;
    for beta in samples {
        beta.require_timelike_future("β")?;
        let (wave, size) = box_beta(|b| builtin_macro(xi, b), beta)?;
        let rel = if size > 0.0 { wave.abs() / size } else { 0.0 };
        worst = worst.max(rel);
    }
    Ok(Admissibility { worst_residual: worst, admissible: worst < tol })
}

/// `(□ g(β), Σ_α |∂_α² g|)` by fourth-order central differences.
pub(crate) fn box_beta<G>(g: G, beta: &FourVector) -> Result<(f64, f64), Error>
where
    G: Fn(&FourVector) -> Result<f64, Error>,
{
    let h = 1e-2 * beta.cone_margin().min(beta.t());
    let failure = std::cell::RefCell::new(None);
    let eval = |b: &[f64]| match g(&FourVector::new(b[0], b[1], b[2], b[3])) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let mut wave = 0.0;
    let mut size = 0.0;
    for a in 0..4 {
        let d2: f64 = finite_difference(eval, &beta.0, &[a, a], h, 4)?;
        wave += METRIC[a] as f64 * d2;
        size += d2.abs();
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok((wave, size))
}

/// `ω(Ξ)(x)`: the average of `Ξ` over the thermal parameters of `ω` at `x`.
///
/// The vacuum is the limit of KMS states as `β` runs to timelike infinity,
/// where every built-in observable vanishes; custom observables have no
/// such limit in general and are rejected.
pub fn macro_expectation(state: &StateSpec, xi: &MacroObservable, x: &FourVector) -> Result<f64, Error> {
    state.validate()?;
    xi.validate()?;
    match state {
        StateSpec::Vacuum {} => match xi {
            MacroObservable::Custom(c) => Err(Error::Domain(format!("vacuum value of custom observable {} is undefined", c.name))),
            _ => Ok(0.0),
        },
        StateSpec::Kms { beta } => builtin_macro(xi, beta),
        StateSpec::Mixture { atoms } => atoms.iter().try_fold(0.0, |acc, a| Ok(acc + a.w * builtin_macro(xi, &a.beta)?)),
        StateSpec::Hotbang { lambda } => {
            x.require_timelike_future("x")?;
            builtin_macro(xi, &x.scale(2.0 * lambda))
        }
    }
}

/// Settings of the point-split limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PointSplitConfig {
    /// Split lengths `s`, strictly decreasing, in units of the thermal
    /// length `ℓ = min (β⁰ − |β⃗|)` of the state at `x`; the split is `ζ = sℓ(0, ê)`.
    pub steps: Vec<f64>,
    /// Spatial unit direction `ê`.
    pub direction: [f64; 3],
    /// Finite-difference step in units of `s`; below ½ keeps every stencil
    /// point spacelike.
    pub fd_ratio: f64,
    pub quad: QuadConfig,
}

impl Default for PointSplitConfig {
    fn default() -> Self {
        PointSplitConfig { steps: vec![0.08, 0.04, 0.02, 0.01], direction: [0.0, 0.0, 1.0], fd_ratio: 0.2, quad: QuadConfig::coarse() }
    }
}

impl PointSplitConfig {
    pub fn validate(&self) -> Result<(), Error> {
        self.quad.validate()?;
        let norm = self.direction.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("split direction must be a unit vector, got {:?}", self.direction)));
        }
        if self.steps.len() < 2 || self.steps.windows(2).any(|w| !(w[0] > w[1])) || self.steps.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::Config(format!("split steps must be positive and strictly decreasing, got {:?}", self.steps)));
        }
        if !(self.fd_ratio > 0.0 && self.fd_ratio < 0.25) {
            return Err(Error::Config(format!("fd_ratio must lie in (0, 1/4), got {}", self.fd_ratio)));
        }
        Ok(())
    }
}

/// `lim_{ζ→0} ∂_ζ^{μ⃗}` of the `σ^ν`-contracted normal-ordered kernel at
/// `(x+ζ, x−ζ)`, with upper-index derivatives `∂^μ_ζ = η^{μα}∂/∂ζ^α`.
pub fn point_split_expectation(state: &StateSpec, x: &FourVector, idx: &ThermalIndex, cfg: &PointSplitConfig) -> Result<Extrapolation<Complex64>, Error> {
    idx.validate()?;
    let [a, b, c, d] = point_split_components(state, x, &idx.mu, cfg)?;
    Ok([a, b, c, d][idx.nu])
}

/// [`point_split_expectation`] for all four `ν` at once; each component is
/// extrapolated separately.
pub fn point_split_components(state: &StateSpec, x: &FourVector, mu: &[usize], cfg: &PointSplitConfig) -> Result<[Extrapolation<Complex64>; 4], Error> {
    ThermalIndex { mu: mu.to_vec(), nu: 0 }.validate()?;
    cfg.validate()?;
    let zero = Extrapolation { limit: Complex64::new(0.0, 0.0), uncertainty: 0.0 };
    if let StateSpec::Vacuum {} = state {
        return Ok([zero; 4]);
    }
    let ell = thermal_length(state, x)?;
    let sign: i64 = mu.iter().map(|&m| METRIC[m]).product();
    let e = cfg.direction;
    let mut samples: Vec<(f64, [Complex64; 4])> = Vec::with_capacity(cfg.steps.len());
    for &step in &cfg.steps {
        let s = step * ell;
        let failure = std::cell::RefCell::new(None);
        let eval = |z: &[f64]| -> [Complex64; 4] {
            match point_split_vector(state, x, &FourVector::new(z[0], z[1], z[2], z[3]), &cfg.quad) {
                Ok(v) => v,
                Err(err) => {
                    failure.borrow_mut().get_or_insert(err);
                    [Complex64::new(f64::NAN, 0.0); 4]
                }
            }
        };
        let zeta0 = [0.0, s * e[0], s * e[1], s * e[2]];
        let d: [Complex64; 4] = finite_difference(eval, &zeta0, mu, cfg.fd_ratio * s, 4)?;
        if let Some(err) = failure.into_inner() {
            return Err(err);
        }
        samples.push((s, d.map(|c| c * sign as f64)));
    }
    // The contracted kernel is odd under ζ → −ζ, so odd derivatives at `sê`
    // are even in `s` and even derivatives are odd in `s`.
    let power = if mu.len() % 2 == 1 { 2 } else { 1 };
    let mut out = [zero; 4];
    for (nu, slot) in out.iter_mut().enumerate() {
        let component: Vec<(f64, Complex64)> = samples.iter().map(|(s, v)| (*s, v[nu])).collect();
        *slot = extrapolate_limit(&component, ExtrapolationKind::RichardsonPoly { power })?;
    }
    Ok(out)
}

/// Shortest `β⁰ − |β⃗|` among the inverse temperatures of `state` at `x`.
fn thermal_length(state: &StateSpec, x: &FourVector) -> Result<f64, Error> {
    let cone = |b: &FourVector| b.t() - b.spatial_norm();
    match state {
        StateSpec::Vacuum {} => Ok(1.0),
        StateSpec::Kms { beta } => Ok(cone(beta)),
        StateSpec::Mixture { atoms } => Ok(atoms.iter().map(|a| cone(&a.beta)).fold(f64::INFINITY, f64::min)),
        StateSpec::Hotbang { lambda } => {
            x.require_timelike_future("x")?;
            Ok(cone(&x.scale(2.0 * lambda)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_values() {
        let t = BernoulliTable::shared();
        assert_eq!(t.modern(0), Some(&q(1, 1)));
        assert_eq!(t.modern(1), Some(&q(-1, 2)));
        assert_eq!(t.modern(2), Some(&q(1, 6)));
        assert_eq!(t.modern(3), Some(&q(0, 1)));
        assert_eq!(t.modern(4), Some(&q(-1, 30)));
        assert_eq!(t.modern(12), Some(&q(-691, 2730)));
        assert_eq!(t.classical(1), Some(q(1, 6)));
        assert_eq!(t.classical(2), Some(q(1, 30)));
        assert_eq!(t.classical(3), Some(q(1, 42)));
        assert_eq!(t.classical(0), None);
    }

    #[test]
    fn c_coefficients() {
        for conv in BernoulliConvention::BOTH {
            assert_eq!(c_coeff(0, conv).unwrap(), Complex64::new(0.0, 0.0));
            assert_eq!(c_coeff(2, conv).unwrap(), Complex64::new(0.0, 0.0));
        }
        let pi2 = PI * PI;
        assert!((c_coeff(1, BernoulliConvention::Classical).unwrap() - Complex64::new(0.0, pi2 / 60.0)).norm() < 1e-15);
        assert!((c_coeff(1, BernoulliConvention::Modern).unwrap() - Complex64::new(0.0, pi2 / 12.0)).norm() < 1e-15);
        assert!((c_coeff(3, BernoulliConvention::Classical).unwrap() - Complex64::new(0.0, -pi2 * pi2 / 126.0)).norm() < 1e-13);
        assert_eq!(c_coeff(3, BernoulliConvention::Modern).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn symbolic_derivatives() {
        let e0 = FourVector::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(eval_terms(&inverse_square_derivative(&[0, 0]), &e0), 6.0);
        assert_eq!(eval_terms(&inverse_square_derivative(&[3, 3]), &e0), 2.0);
        let beta = FourVector::new(1.3, 0.2, -0.4, 0.1);
        let direct = |b: &[f64]| 1.0 / (b[0] * b[0] - b[1] * b[1] - b[2] * b[2] - b[3] * b[3]);
        for dirs in [vec![0usize], vec![1, 2], vec![0, 3, 3]] {
            let symbolic = eval_terms(&inverse_square_derivative(&dirs), &beta);
            let sign: f64 = dirs.iter().map(|&d| METRIC[d] as f64).product();
            let numeric: f64 = finite_difference(direct, &beta.0, &dirs, 1e-3, 4).unwrap();
            assert!((symbolic - sign * numeric).abs() < 1e-6 * symbolic.abs().max(1.0), "{dirs:?}: {symbolic} vs {numeric}");
        }
    }

    #[test]
    fn thermal_function_symmetry_and_parity() {
        let beta = FourVector::new(1.7, 0.3, 0.1, -0.5);
        let a = thermal_function(&ThermalIndex::new(vec![0, 2, 3], 1).unwrap(), &beta).unwrap();
        let b = thermal_function(&ThermalIndex::new(vec![3, 1, 0], 2).unwrap(), &beta).unwrap();
        assert_eq!(a, b);
        assert_eq!(thermal_function(&ThermalIndex::new(vec![0, 1], 1).unwrap(), &beta).unwrap(), Complex64::new(0.0, 0.0));
        let l00 = thermal_function(&ThermalIndex::new(vec![0], 0).unwrap(), &FourVector::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((l00 - 6.0 * c_coeff(1, ADOPTED_CONVENTION).unwrap()).norm() < 1e-15);
        assert!(thermal_function(&ThermalIndex::new(vec![0], 0).unwrap(), &FourVector::new(0.5, 1.0, 0.0, 0.0)).is_err());
        assert!(ThermalIndex::new(vec![4], 0).is_err());
        assert_eq!(ThermalIndex::enumerate(1).len(), 16);
    }

    #[test]
    fn builtin_values() {
        let e0 = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let pi2 = PI * PI;
        assert!((builtin_macro(&MacroObservable::Energy { mu: 0, nu: 0 }, &e0).unwrap() - pi2 / 20.0).abs() < 1e-15);
        let p = FourVector::new(1.0, 0.0, 0.0, 1.0);
        let np = builtin_macro(&MacroObservable::PhaseSpace { p }, &e0).unwrap();
        assert!((np - 1.0 / ((2.0 * PI).powi(3) * (1.0 + f64::exp(1.0)))).abs() < 1e-17);
        assert_eq!(builtin_macro(&MacroObservable::T2 {}, &FourVector::new(2.0, 0.0, 0.0, 0.0)).unwrap(), 0.25);
        assert!(MacroObservable::PhaseSpace { p: FourVector::new(1.0, 0.0, 0.0, 0.5) }.validate().is_err());
        let custom = MacroObservable::Custom(CustomMacro::new("beta0", |b| b[0]));
        assert_eq!(builtin_macro(&custom, &e0).unwrap(), 1.0);
    }

    #[test]
    fn json_forms() {
        for text in [r#"{"t2":{}}"#, r#"{"energy":{"mu":0,"nu":1}}"#, r#"{"entropy":{"mu":2}}"#, r#"{"phasespace":{"p":[1,0,0,1]}}"#] {
            let m = MacroObservable::from_json(text).unwrap();
            assert_eq!(serde_json::to_string(&m).unwrap().replace(".0", ""), text);
        }
        assert!(MacroObservable::from_json(r#"{"energy":{"mu":0,"nu":7}}"#).is_err());
        assert!(MacroObservable::from_json(r#"{"t3":{}}"#).is_err());
    }

    #[test]
    fn admissibility_of_builtins() {
        let samples = [FourVector::new(1.0, 0.1, 0.2, 0.0), FourVector::new(2.0, -0.5, 0.3, 0.9)];
        for xi in [
            MacroObservable::T2 {},
            MacroObservable::Energy { mu: 0, nu: 2 },
            MacroObservable::PhaseSpace { p: FourVector::new(1.0, 0.6, 0.0, 0.8) },
        ] {
            let a = admissibility(&xi, &samples, 1e-6).unwrap();
            assert!(a.admissible, "{xi:?}: {a:?}");
        }
        let s = admissibility(&MacroObservable::Entropy { mu: 0 }, &samples, 1e-6).unwrap();
        assert!(!s.admissible);
        let custom = MacroObservable::Custom(CustomMacro::new("beta0 squared", |b| b[0] * b[0]));
        assert!(!admissibility(&custom, &samples, 1e-6).unwrap().admissible);
    }

    #[test]
    fn expectations_in_states() {
        let x = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let hb = StateSpec::hotbang(0.5).unwrap();
        assert!((macro_expectation(&hb, &MacroObservable::T2 {}, &x).unwrap() - 1.0).abs() < 1e-15);
        let p = FourVector::new(1.0, 0.0, 0.0, 1.0);
        let np = macro_expectation(&hb, &MacroObservable::PhaseSpace { p }, &x).unwrap();
        assert!((np - 1.0 / ((2.0 * PI).powi(3) * (1.0 + f64::exp(1.0)))).abs() < 1e-17);
        assert!(macro_expectation(&hb, &MacroObservable::T2 {}, &FourVector::new(0.5, 1.0, 0.0, 0.0)).is_err());
        let b1 = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let b2 = FourVector::new(2.0, 0.5, 0.0, 0.0);
        let w = 0.3;
        let mix = StateSpec::mixture(vec![crate::states::Atom { w, beta: b1 }, crate::states::Atom { w: 1.0 - w, beta: b2 }]).unwrap();
        let xi = MacroObservable::Energy { mu: 0, nu: 1 };
        let lin = w * builtin_macro(&xi, &b1).unwrap() + (1.0 - w) * builtin_macro(&xi, &b2).unwrap();
        assert!((macro_expectation(&mix, &xi, &x).unwrap() - lin).abs() < 1e-16);
        assert_eq!(macro_expectation(&StateSpec::vacuum(), &xi, &x).unwrap(), 0.0);
        let inner = [b1, b2];
        let outer = [b1, b2, FourVector::new(0.7, 0.0, 0.0, 0.0)];
        assert!(seminorm(&MacroObservable::T2 {}, &inner).unwrap() <= seminorm(&MacroObservable::T2 {}, &outer).unwrap());
    }

    #[test]
    fn point_split_in_kms_rest_frame() {
        let cfg = PointSplitConfig::default();
        let beta = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let state = StateSpec::kms(beta).unwrap();
        let x = FourVector::new(0.0, 0.0, 0.0, 0.0);
        let idx = ThermalIndex::new(vec![0], 0).unwrap();
        let ps = point_split_expectation(&state, &x, &idx, &cfg).unwrap();
        // (2π)^{-3}·8 ∫ d³p/(2|p⃗|) p₀² n₋ = 7π²/60 in the rest frame at unit temperature.
        let expected = Complex64::new(0.0, 7.0 * PI * PI / 60.0);
        assert!((ps.limit - expected).norm() < 1e-6 * expected.norm(), "{:?}", ps);
        let even = point_split_expectation(&state, &x, &ThermalIndex::new(vec![0, 3], 0).unwrap(), &cfg).unwrap();
        assert!(even.limit.norm() <= 1e-9 + 10.0 * even.uncertainty, "{even:?}");
        let vac = point_split_expectation(&StateSpec::vacuum(), &x, &idx, &cfg).unwrap();
        assert_eq!(vac.limit, Complex64::new(0.0, 0.0));
    }
}
