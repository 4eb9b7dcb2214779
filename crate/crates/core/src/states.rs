//! Vacuum, KMS, mixture and Hot Bang states of the free massless Weyl field,
//! through their smeared two-point functions and normal-ordered kernels.
//!
//! # Shell reduction
//!
//! Every smeared expression has the form `2π ∫ d⁴p δ(p²) ε(p⁰) h(p) n(p)`.
//! With `p′ = (|p⃗|, p⃗)` it becomes `2π ∫ d³p/(2|p⃗|) [h(p′) n(p′) − h(−p′) n(−p′)]`.
//! For a pairing with `f` in the `ψ̄` slot and `g` in the `ψ` slot this module
//! works with the two upper-shell densities
//!
//! ```text
//! U(p⃗) = g̃(p′)ᵀ p′_M f̃(−p′)        D(p⃗) = g̃(−p′)ᵀ p′_M f̃(p′)
//! ```
//!
//! (the lower-shell sign is absorbed by `(−p′)_M = −p′_M`). Then
//!
//! * `{ψ(g), ψ̄(f)} = 2π ∫ (U + D)`,
//! * `ω_β(ψ̄(f)ψ(g)) = 2π ∫ (n₊ U + n₋ D)` with `n± = 1/(1 + e^{∓(β,p′)})`,
//! * the vacuum keeps `U` only (the `β → ∞` limit of the KMS weights).
//!
//! # Kernel convention
//!
//! Writing `ψ̄(f) = ∫ f_ṙ(x) ψ̄_ṙ(x) dx` and `ψ(g) = ∫ g_s(y) ψ_s(y) dy`, the
//! smeared KMS expression equals `∫∫ f(x)ᵀ K(x,y) g(y)` with
//!
//! ```text
//! K(x,y) = (2π)^{-3} ∫ d³p/(2|p⃗|) (p′_M)ᵀ [n₊ e^{i(p′,y−x)} + n₋ e^{−i(p′,y−x)}].
//! ```
//!
//! Subtracting the vacuum (`n₊ → 1`, `n₋ → 0`) and using `n₊ − 1 = −n₋` gives
//! the normal-ordered kernel
//!
//! ```text
//! W(x,y) = −2i (2π)^{-3} ∫ d³p/(2|p⃗|) n₋(p′) sin((p′, y−x)) (p′_M)ᵀ,
//! ```
//!
//! whose integrand is exponentially damped. The Hot Bang kernel is the KMS one
//! with `β = λ(x+y)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hotbang::{self, SeriesConfig};
use crate::minkowski::{FourVector, SpinorMatrix};
use crate::quad::{CompensatedVec, QuadConfig, ShellGrid};
use crate::testfn::{shell_samples, FieldKind, Smearing, TestFunction, WeylImage};
use crate::Error;

/// One KMS component of a mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub w: f64,
    pub beta: FourVector,
}

/// A state of the field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Vacuum {},
    Kms { beta: FourVector },
    Mixture { atoms: Vec<Atom> },
    Hotbang { lambda: f64 },
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

impl StateSpec {
    pub fn vacuum() -> Self {
        StateSpec::Vacuum {}
    }

    pub fn kms(beta: FourVector) -> Result<Self, Error> {
        let s = StateSpec::Kms { beta };
        s.validate()?;
        Ok(s)
    }

    pub fn mixture(atoms: Vec<Atom>) -> Result<Self, Error> {
        let s = StateSpec::Mixture { atoms };
        s.validate()?;
        Ok(s)
    }

    pub fn hotbang(lambda: f64) -> Result<Self, Error> {
        let s = StateSpec::Hotbang { lambda };
        s.validate()?;
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let s: StateSpec = serde_json::from_str(text).map_err(|e| Error::Config(format!("state: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), Error> {
        match self {
            StateSpec::Vacuum {} => Ok(()),
            StateSpec::Kms { beta } => check_beta(beta),
            StateSpec::Mixture { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::Config("mixture needs at least one atom".into()));
                }
                let mut total = 0.0;
                for a in atoms {
                    if !(a.w > 0.0 && a.w.is_finite()) {
                        return Err(Error::Config(format!("mixture weight must be positive, got {}", a.w)));
                    }
                    check_beta(&a.beta)?;
                    total += a.w;
                }
                if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                    return Err(Error::Config(format!("mixture weights sum to {total}, expected 1")));
                }
                Ok(())
            }
            StateSpec::Hotbang { lambda } => {
                if lambda.is_finite() && *lambda > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Config(format!("Hot Bang parameter must be positive, got {lambda}")))
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateSpec::Vacuum {} => "vacuum",
            StateSpec::Kms { .. } => "kms",
            StateSpec::Mixture { .. } => "mixture",
            StateSpec::Hotbang { .. } => "hotbang",
        }
    }
}

fn check_beta(beta: &FourVector) -> Result<(), Error> {
    if beta.is_finite() && beta.is_timelike_future() {
        Ok(())
    } else {
        Err(Error::Config(format!("temperature vector {:?} is not timelike-future", beta.0)))
    }
}

/// Operator order inside the two-point function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// `ω(ψ̄(f) ψ(g))`
    PsiBarPsi,
    /// `ω(ψ(g) ψ̄(f))`
    PsiPsiBar,
}

impl Ordering {
    pub const BOTH: [Ordering; 2] = [Ordering::PsiBarPsi, Ordering::PsiPsiBar];

    pub fn label(&self) -> &'static str {
        match self {
            Ordering::PsiBarPsi => "psibar_psi",
            Ordering::PsiPsiBar => "psi_psibar",
        }
    }
}

/// Numerical settings shared by all state evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    pub quad: QuadConfig,
    pub series: SeriesConfig,
}

impl Numerics {
    pub fn validate(&self) -> Result<(), Error> {
        self.quad.validate()?;
        self.series.validate()
    }
}

/// A value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error_bound: f64,
}

/// Fermi factor `1/(1 + e^{x})`, evaluated without overflow.
pub fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Common momentum scale for a pair of smearings.
pub(crate) fn pair_scale(f: &dyn Smearing, g: &dyn Smearing) -> f64 {
    (f.momentum_scale() * g.momentum_scale()).sqrt()
}

/// The densities `U` and `D` of a pairing on one shell grid.
pub(crate) struct ShellPair {
    pub grid: ShellGrid,
    up: Vec<Complex64>,
    down: Vec<Complex64>,
    /// `2π ∫ (|g̃||p′_M||f̃|)` over both shells: a size against which
    /// cancellations are judged.
    pub magnitude: f64,
}

impl ShellPair {
    /// `psibar` is the `ψ̄` test function, `psi` the `ψ` one.
    pub fn new(psibar: &dyn Smearing, psi: &dyn Smearing, quad: &QuadConfig) -> Result<Self, Error> {
        let grid = ShellGrid::new(quad, pair_scale(psibar, psi))?;
        let one = Complex64::new(1.0, 0.0);
        let (g_up, g_down) = (shell_samples(psi, one, &grid), shell_samples(psi, -one, &grid));
        let (f_up, f_down) = (shell_samples(psibar, one, &grid), shell_samples(psibar, -one, &grid));
        let n = grid.len();
        let mut up = Vec::with_capacity(n);
        let mut down = Vec::with_capacity(n);
        let mut size = CompensatedVec::new(1);
        for idx in 0..n {
            let node = grid.node(idx);
            let m = lower_null(&node.p);
            let u = m.bilinear(&g_up[idx], &f_down[idx]);
            let d = m.bilinear(&g_down[idx], &f_up[idx]);
            if !(u.re.is_finite() && u.im.is_finite() && d.re.is_finite() && d.im.is_finite()) {
                return Err(Error::NonConvergence("two-point integrand is not finite".into()));
            }
            let op = 2.0 * FourVector::on_shell(node.p).t();
            let s = op * (spinor_norm(&g_up[idx]) * spinor_norm(&f_down[idx]) + spinor_norm(&g_down[idx]) * spinor_norm(&f_up[idx]));
            size.add_scaled(&s, node.weight);
            up.push(u);
            down.push(d);
        }
        Ok(ShellPair { grid, up, down, magnitude: 2.0 * PI * size.value::<f64>() })
    }

    /// `2π ∫ (a(p′) U + b(p′) D)` for occupation weights `(a, b) = occ(p′)`.
    pub fn integrate<F: Fn(&FourVector) -> (f64, f64)>(&self, occ: F) -> Complex64 {
        let mut acc = CompensatedVec::new(2);
        for idx in 0..self.grid.len() {
            let node = self.grid.node(idx);
            let (a, b) = occ(&FourVector::on_shell(node.p));
            let v = self.up[idx] * a + self.down[idx] * b;
            acc.add_scaled(&v, node.weight);
        }
        acc.value::<Complex64>() * (2.0 * PI)
    }

    pub fn anticommutator(&self) -> Complex64 {
        self.integrate(|_| (1.0, 1.0))
    }

    /// `ω(ψ̄ψ)` for the non-Hot-Bang states.
    pub fn psibar_psi(&self, state: &StateSpec) -> Complex64 {
        match state {
            StateSpec::Vacuum {} => self.integrate(|_| (1.0, 0.0)),
            StateSpec::Kms { beta } => self.integrate(|p| kms_weights(beta, p)),
            StateSpec::Mixture { atoms } => self.integrate(|p| {
                atoms.iter().fold((0.0, 0.0), |(a, b), at| {
                    let (x, y) = kms_weights(&at.beta, p);
                    (a + at.w * x, b + at.w * y)
                })
            }),
            StateSpec::Hotbang { .. } => unreachable!("Hot Bang values come from the series"),
        }
    }
}

fn kms_weights(beta: &FourVector, p: &FourVector) -> (f64, f64) {
    let x = beta.dot(p);
    (fermi(-x), fermi(x))
}

fn spinor_norm(v: &[Complex64; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// `p′_M` for `p′ = (|p⃗|, p⃗)`.
pub(crate) fn lower_null(p: &[f64; 3]) -> SpinorMatrix {
    let p0 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    SpinorMatrix([
        [Complex64::new(p0 + p[2], 0.0), Complex64::new(p[0], -p[1])],
        [Complex64::new(p[0], p[1]), Complex64::new(p0 - p[2], 0.0)],
    ])
}

/// `{ψ(f), ψ̄(g)} = 2π ∫ dp δ(p²) ε(p⁰) f̃(p)ᵀ p_M g̃(−p)`; independent of the state.
pub fn anticommutator(f: &dyn Smearing, g: &dyn Smearing, quad: &QuadConfig) -> Result<Complex64, Error> {
    Ok(ShellPair::new(g, f, quad)?.anticommutator())
}

/// Smeared two-point function: `ω(ψ̄(f)ψ(g))` or `ω(ψ(g)ψ̄(f))`.
pub fn two_point(state: &StateSpec, f: &dyn Smearing, g: &dyn Smearing, ord: Ordering, num: &Numerics) -> Result<Complex64, Error> {
    Ok(two_point_estimate(state, f, g, ord, num)?.value)
}

/// [`two_point`] with its error estimate; the bound is zero for states
/// evaluated by a single quadrature.
pub fn two_point_estimate(state: &StateSpec, f: &dyn Smearing, g: &dyn Smearing, ord: Ordering, num: &Numerics) -> Result<Estimate, Error> {
    state.validate()?;
    if let StateSpec::Hotbang { lambda } = state {
        return hotbang::hotbang_pair(f, g, *lambda, ord, num);
    }
    let pair = ShellPair::new(f, g, &num.quad)?;
    let bar = pair.psibar_psi(state);
    let value = match ord {
        Ordering::PsiBarPsi => bar,
        Ordering::PsiPsiBar => pair.anticommutator() - bar,
    };
    Ok(Estimate { value, error_bound: 0.0 })
}

/// Both orderings integrated separately with their own occupation weights
/// (`(n₊, n₋)` and `(n₋, n₊)`) and added. Equals the anticommutator only
/// up to quadrature rounding, unlike the constructed ordering sum.
pub fn ordering_sum_independent(state: &StateSpec, f: &dyn Smearing, g: &dyn Smearing, quad: &QuadConfig) -> Result<Complex64, Error> {
    state.validate()?;
    let pair = ShellPair::new(f, g, quad)?;
    let complement = |w: (f64, f64)| (w.1, w.0);
    Ok(match state {
        StateSpec::Vacuum {} => pair.integrate(|_| (1.0, 0.0)) + pair.integrate(|_| (0.0, 1.0)),
        StateSpec::Kms { beta } => pair.integrate(|p| kms_weights(beta, p)) + pair.integrate(|p| complement(kms_weights(beta, p))),
        StateSpec::Mixture { atoms } => {
            let mut s = Complex64::new(0.0, 0.0);
            for a in atoms {
                s += pair.integrate(|p| kms_weights(&a.beta, p)) * a.w;
                s += pair.integrate(|p| complement(kms_weights(&a.beta, p))) * a.w;
            }
            s
        }
        StateSpec::Hotbang { .. } => {
            return Err(Error::Domain("Hot Bang orderings are computed by their series".into()));
        }
    })
}

/// Inverse temperature vectors and weights that make up the normal-ordered
/// kernel of `state` at `(x, y)`.
fn kernel_atoms(state: &StateSpec, x: &FourVector, y: &FourVector) -> Result<Vec<(f64, FourVector)>, Error> {
    state.validate()?;
    Ok(match state {
        StateSpec::Vacuum {} => Vec::new(),
        StateSpec::Kms { beta } => vec![(1.0, *beta)],
        StateSpec::Mixture { atoms } => atoms.iter().map(|a| (a.w, a.beta)).collect(),
        StateSpec::Hotbang { lambda } => {
            if !(x.is_timelike_future() && y.is_timelike_future()) {
                return Err(Error::Domain("Hot Bang kernel needs both points in the forward cone".into()));
            }
            vec![(1.0, (*x + *y).scale(*lambda))]
        }
    })
}

/// Momentum scale of the Fermi weight `n₋`: it decays like
/// `e^{−|p⃗|(β⁰ − |β⃗|)}` in the least damped direction.
fn thermal_scale(beta: &FourVector) -> f64 {
    2.0 / (beta.t() - beta.spatial_norm())
}

/// `ω(ψ̄_ṙ(x)ψ_s(y)) − ω_vac(ψ̄_ṙ(x)ψ_s(y))` as a matrix in `(ṙ, s)`.
pub fn normal_ordered_kernel(state: &StateSpec, x: &FourVector, y: &FourVector, quad: &QuadConfig) -> Result<SpinorMatrix, Error> {
    let atoms = kernel_atoms(state, x, y)?;
    let u = *y - *x;
    let mut total = SpinorMatrix::ZERO;
    for (w, beta) in atoms {
        let grid = ShellGrid::new(quad, thermal_scale(&beta))?;
        let m: SpinorMatrix = grid.integrate(|p| {
            let pp = FourVector::on_shell(*p);
            let s = fermi(beta.dot(&pp)) * pp.dot(&u).sin();
            lower_null(p).transpose().scale(Complex64::new(s, 0.0))
        });
        total = total + m.scale(Complex64::new(0.0, -2.0 * w / (2.0 * PI).powi(3)));
    }
    if !total.is_finite() {
        return Err(Error::NonConvergence("kernel integral is not finite".into()));
    }
    Ok(total)
}

/// Kernel contracted with `σ^ν` in the spinor indices and its `ζ` dependence
/// exposed: returns `Σ σ^ν[ṙ][s] W[ṙ][s]` at `(x+ζ, x−ζ)` for every `ν`.
///
/// The spinor contraction is done in closed form,
/// `Σ σ^ν[ṙ][s] (p′_M)ᵀ[ṙ][s] = tr(σ^ν p′_M) = 2 p′^ν`, so the result is
/// `4i (2π)^{-3} ∫ d³p/(2|p⃗|) n₋ p′^ν sin(2(p′, ζ))`.
pub fn point_split_vector(state: &StateSpec, x: &FourVector, zeta: &FourVector, quad: &QuadConfig) -> Result<[Complex64; 4], Error> {
    let (a, b) = (*x + *zeta, *x - *zeta);
    let atoms = kernel_atoms(state, &a, &b)?;
    let mut total = [Complex64::new(0.0, 0.0); 4];
    for (w, beta) in atoms {
        let grid = ShellGrid::new(quad, thermal_scale(&beta))?;
        let v: [Complex64; 4] = grid.integrate(|p| {
            let pp = FourVector::on_shell(*p);
            let s = fermi(beta.dot(&pp)) * (2.0 * pp.dot(zeta)).sin();
            std::array::from_fn(|nu| Complex64::new(s * pp[nu], 0.0))
        });
        for nu in 0..4 {
            total[nu] += v[nu] * Complex64::new(0.0, 4.0 * w / (2.0 * PI).powi(3));
        }
    }
    Ok(total)
}

/// Outcome of the Weyl-equation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylReport {
    /// `|ω(ψ̄(f) ψ(Wg))|` where `W` is the Fourier image of the Weyl operator.
    pub residual: f64,
    /// Integral of the absolute integrand, the natural size of the pairing.
    pub scale: f64,
}

impl WeylReport {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.residual / self.scale
        }
    }
}

/// Evaluates the two-point function with `g` replaced by its image under the
/// Weyl operator; the field equation makes the exact value zero.
pub fn weyl_null_check(state: &StateSpec, f: &TestFunction, g: &TestFunction, num: &Numerics) -> Result<WeylReport, Error> {
    let wg = WeylImage { inner: g, kind: FieldKind::Psi };
    let est = two_point_estimate(state, f, &wg, Ordering::PsiBarPsi, num)?;
    let scale = ShellPair::new(f, &wg, &num.quad)?.magnitude;
    Ok(WeylReport { residual: est.value.norm(), scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::Bump;

    fn bump(c: [f64; 4], r: f64) -> TestFunction {
        TestFunction::single(Bump::standard(FourVector(c), [r; 4]).unwrap())
    }

    fn coarse() -> Numerics {
        Numerics { quad: QuadConfig::coarse(), ..Default::default() }
    }

    #[test]
    fn json_variants() {
        assert_eq!(StateSpec::from_json(r#"{"vacuum":{}}"#).unwrap(), StateSpec::vacuum());
        let k = StateSpec::from_json(r#"{"kms":{"beta":[1,0,0,0.5]}}"#).unwrap();
        assert_eq!(k, StateSpec::Kms { beta: FourVector::new(1.0, 0.0, 0.0, 0.5) });
        let m = StateSpec::from_json(r#"{"mixture":{"atoms":[{"w":0.25,"beta":[1,0,0,0]},{"w":0.75,"beta":[2,0,0,0]}]}}"#).unwrap();
        assert_eq!(m.name(), "mixture");
        assert_eq!(StateSpec::from_json(r#"{"hotbang":{"lambda":0.5}}"#).unwrap(), StateSpec::Hotbang { lambda: 0.5 });
        let text = serde_json::to_string(&k).unwrap();
        assert_eq!(StateSpec::from_json(&text).unwrap(), k);
    }

    #[test]
    fn invalid_states_are_rejected() {
        for bad in [
            r#"{"kms":{"beta":[1,0,0,1]}}"#,
            r#"{"kms":{"beta":[-1,0,0,0]}}"#,
            r#"{"mixture":{"atoms":[]}}"#,
            r#"{"mixture":{"atoms":[{"w":0.5,"beta":[1,0,0,0]}]}}"#,
            r#"{"mixture":{"atoms":[{"w":-0.5,"beta":[1,0,0,0]},{"w":1.5,"beta":[1,0,0,0]}]}}"#,
            r#"{"hotbang":{"lambda":0}}"#,
            r#"{"hotbang":{"lambda":-1}}"#,
            r#"{"thermal":{}}"#,
        ] {
            assert!(matches!(StateSpec::from_json(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn fermi_is_stable() {
        assert_eq!(fermi(0.0), 0.5);
        assert_eq!(fermi(1e4), 0.0);
        assert_eq!(fermi(-1e4), 1.0);
        assert!((fermi(1.0) + fermi(-1.0) - 1.0).abs() < 1e-16);
    }

    #[test]
    fn zero_function_gives_zero() {
        let f = bump([2.0, 0.0, 0.0, 0.0], 0.5).scaled(Complex64::new(0.0, 0.0));
        let g = bump([2.5, 0.1, 0.0, 0.0], 0.4);
        let num = coarse();
        for s in [StateSpec::vacuum(), StateSpec::kms(FourVector::new(1.0, 0.0, 0.0, 0.0)).unwrap()] {
            for ord in Ordering::BOTH {
                assert_eq!(two_point(&s, &f, &g, ord, &num).unwrap(), Complex64::new(0.0, 0.0));
            }
        }
        assert_eq!(anticommutator(&f, &g, &num.quad).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_atom_mixture_is_kms() {
        let f = bump([2.0, 0.0, 0.0, 0.0], 0.5);
        let beta = FourVector::new(1.3, 0.2, 0.0, 0.1);
        let num = coarse();
        let m = StateSpec::mixture(vec![Atom { w: 1.0, beta }]).unwrap();
        let k = StateSpec::kms(beta).unwrap();
        for ord in Ordering::BOTH {
            let a = two_point(&m, &f.conj(), &f, ord, &num).unwrap();
            let b = two_point(&k, &f.conj(), &f, ord, &num).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn kms_orderings_are_positive_and_sum_to_anticommutator() {
        let f = bump([2.0, 0.1, -0.2, 0.0], 0.5);
        let num = coarse();
        let s = StateSpec::kms(FourVector::new(0.8, 0.0, 0.3, 0.0)).unwrap();
        let a = two_point(&s, &f.conj(), &f, Ordering::PsiBarPsi, &num).unwrap();
        let b = two_point(&s, &f.conj(), &f, Ordering::PsiPsiBar, &num).unwrap();
        let ac = anticommutator(&f, &f.conj(), &num.quad).unwrap();
        assert!(a.re > 0.0 && b.re > 0.0);
        assert!(a.im.abs() < 1e-12 * a.re && b.im.abs() < 1e-12 * b.re);
        assert!((a + b - ac).norm() < 1e-14 * ac.norm());
    }

    #[test]
    fn vacuum_kernel_is_zero() {
        let k = normal_ordered_kernel(&StateSpec::vacuum(), &FourVector::new(1.0, 0.0, 0.0, 0.0), &FourVector::new(2.0, 0.0, 0.0, 0.0), &QuadConfig::coarse())
            .unwrap();
        assert_eq!(k, SpinorMatrix::ZERO);
    }

    #[test]
    fn hotbang_kernel_is_kms_at_sum_point() {
        let (x, y) = (FourVector::new(1.0, 0.1, 0.0, 0.2), FourVector::new(1.4, -0.1, 0.2, 0.0));
        let lambda = 0.7;
        let q = QuadConfig::coarse();
        let h = normal_ordered_kernel(&StateSpec::hotbang(lambda).unwrap(), &x, &y, &q).unwrap();
        let k = normal_ordered_kernel(&StateSpec::kms((x + y).scale(lambda)).unwrap(), &x, &y, &q).unwrap();
        assert!((h - k).max_abs() <= 1e-10 * k.max_abs());
        assert!(normal_ordered_kernel(&StateSpec::hotbang(1.0).unwrap(), &FourVector::new(0.1, 1.0, 0.0, 0.0), &y, &q).is_err());
    }

    #[test]
    fn kernel_is_consistent_with_point_split_contraction() {
        let s = StateSpec::kms(FourVector::new(1.0, 0.2, 0.0, 0.0)).unwrap();
        let x = FourVector::new(0.0, 0.3, 0.0, 0.0);
        let zeta = FourVector::new(0.0, 0.0, 0.1, 0.2);
        let q = QuadConfig::coarse();
        let w = normal_ordered_kernel(&s, &(x + zeta), &(x - zeta), &q).unwrap();
        let v = point_split_vector(&s, &x, &zeta, &q).unwrap();
        for nu in 0..4 {
            let sig = crate::minkowski::sigma(nu);
            let mut c = Complex64::new(0.0, 0.0);
            for r in 0..2 {
                for t in 0..2 {
                    c += sig.0[r][t] * w.0[r][t];
                }
            }
            assert!((c - v[nu]).norm() < 1e-12 * v.iter().map(|z| z.norm()).fold(0.0, f64::max), "{nu}: {c} vs {}", v[nu]);
        }
    }
}
