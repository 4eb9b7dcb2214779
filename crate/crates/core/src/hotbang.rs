//! The Hot Bang state: a locally thermal state on the forward cone whose
//! inverse temperature at `x` is `2λx`.
//!
//! Its smeared two-point function is an alternating series over the angles
//! `φ_n = arg(1 + inλ)` of the angular profile
//!
//! ```text
//! Λ(φ) = G(e^{iφ}),   G(z) = ∫ d³p/(2|p⃗|) g̃(z p′)ᵀ p′_M f̃(−z̄ p′)
//! ```
//!
//! with `f` in the `ψ̄` slot and `g` in the `ψ` slot:
//!
//! ```text
//! ω(ψ̄(f)ψ(g)) = 2π Σ_{n≥0} (−1)ⁿ [c_n Λ(φ_n) + c_{n+1} Λ(π − φ_{n+1})]
//! ω(ψ(g)ψ̄(f)) = 2π Σ_{n≥0} (−1)ⁿ [c_n Λ(π − φ_n) + c_{n+1} Λ(φ_{n+1})]
//! ```
//!
//! where `c_n = cos³φ_n = (1 + n²λ²)^{-3/2}`. For the conjugate pairing
//! `(f̄, f)` the profile is the real function
//! `L(φ) = ∫ f̃(e^{iφ}p′)ᵀ p′_M conj(f̃(e^{iφ}p′))`.
//!
//! Evaluating `Λ` costs a full shell quadrature, while the series may need
//! hundreds of thousands of angles. `Λ` is smooth on `(0, π)`, so it is
//! replaced by a Chebyshev interpolant on `[φ_1, π − φ_1]`; the interpolation
//! error enters the reported bound. The endpoints `Λ(0)` and `Λ(π)` are
//! always computed directly.

use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quad::{alternating_sum, alternating_sum_traced, fit_chebyshev, Chebyshev, QuadConfig, SeriesSum, ShellGrid};
use crate::states::{lower_null, pair_scale, Estimate, Numerics, Ordering, ShellPair};
use crate::testfn::{shell_samples, Smearing, TestFunction};
use crate::Error;

/// Truncation and interpolation settings of the Hot Bang series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesConfig {
    /// Series truncation threshold relative to the size of the profile.
    pub tol: f64,
    pub max_terms: usize,
    /// At or below this `λ` the two interleaved sums are added pairwise.
    pub bracket_below: f64,
    /// Chebyshev interpolation target relative to the size of the profile.
    pub profile_tol: f64,
    pub profile_start: usize,
    pub profile_max: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { tol: 1e-13, max_terms: 10_000_000, bracket_below: 0.05, profile_tol: 1e-12, profile_start: 16, profile_max: 256 }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("series tol must be positive, got {}", self.tol)));
        }
        if !(self.profile_tol > 0.0 && self.profile_tol.is_finite()) {
            return Err(Error::Config(format!("profile_tol must be positive, got {}", self.profile_tol)));
        }
        if self.max_terms < 4 {
            return Err(Error::Config(format!("max_terms must be at least 4, got {}", self.max_terms)));
        }
        if !(self.bracket_below >= 0.0) {
            return Err(Error::Config(format!("bracket_below must be non-negative, got {}", self.bracket_below)));
        }
        if self.profile_start < 4 || self.profile_max < self.profile_start {
            return Err(Error::Config(format!(
                "profile orders must satisfy 4 ≤ start ≤ max, got {} and {}",
                self.profile_start, self.profile_max
            )));
        }
        Ok(())
    }
}

/// The angles `φ_n = arg(1 + inλ)` and their weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSchedule {
    pub lambda: f64,
    pub tol: f64,
    pub max_terms: usize,
}

impl SeriesSchedule {
    pub fn new(lambda: f64, tol: f64, max_terms: usize) -> Result<Self, Error> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("Hot Bang parameter must be positive, got {lambda}")));
        }
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("series tolerance must be positive, got {tol}")));
        }
        Ok(SeriesSchedule { lambda, tol, max_terms })
    }

    pub fn phi(&self, n: usize) -> f64 {
        (n as f64 * self.lambda).atan()
    }

    /// `cos³φ_n = (1 + n²λ²)^{-3/2}`.
    pub fn cos3(&self, n: usize) -> f64 {
        let x = n as f64 * self.lambda;
        (1.0 + x * x).powf(-1.5)
    }
}

fn check_support(f: &dyn Smearing, what: &str) -> Result<(), Error> {
    if f.cone_margin() > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be supported inside the forward cone")))
    }
}

/// `∫ d³p/(2|p⃗|) g̃(a p′)ᵀ p′_M f̃(b p′)` on `grid`.
fn shell_bilinear(psibar: &dyn Smearing, b: Complex64, psi: &dyn Smearing, a: Complex64, grid: &ShellGrid) -> Result<Complex64, Error> {
    let gs = shell_samples(psi, a, grid);
    let fs = shell_samples(psibar, b, grid);
    let v: Complex64 = reduce(grid, |idx, p| lower_null(p).bilinear(&gs[idx], &fs[idx]));
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonConvergence("shell integrand is not finite".into()));
    }
    Ok(v)
}

fn reduce<F: Fn(usize, &[f64; 3]) -> Complex64>(grid: &ShellGrid, h: F) -> Complex64 {
    let mut acc = crate::quad::CompensatedVec::new(2);
    for idx in 0..grid.len() {
        let node = grid.node(idx);
        acc.add_scaled(&h(idx, &node.p), node.weight);
    }
    acc.value()
}

/// `G(z) = ∫ d³p/(2|p⃗|) g̃(z p′)ᵀ p′_M f̃(−z̄ p′)` with `f` in the `ψ̄` slot.
pub fn pair_shell_integral(psibar: &dyn Smearing, psi: &dyn Smearing, z: Complex64, quad: &QuadConfig) -> Result<Complex64, Error> {
    let grid = ShellGrid::new(quad, pair_scale(psibar, psi))?;
    shell_bilinear(psibar, -z.conj(), psi, z, &grid)
}

/// `∫ d³p/(2|p⃗|) f̃(a p′)ᵀ p′_M conj(f̃(b p′))` and the integral of the
/// modulus of its integrand.
fn conjugate_bilinear(f: &dyn Smearing, a: Complex64, b: Complex64, quad: &QuadConfig) -> Result<(Complex64, f64), Error> {
    let grid = ShellGrid::new(quad, f.momentum_scale())?;
    let fa = shell_samples(f, a, &grid);
    let fb = if a == b { fa.clone() } else { shell_samples(f, b, &grid) };
    let v = reduce(&grid, |idx, p| {
        let c = [fb[idx][0].conj(), fb[idx][1].conj()];
        lower_null(p).bilinear(&fa[idx], &c)
    });
    let size = reduce(&grid, |idx, p| {
        let n = |s: &[Complex64; 2]| (s[0].norm_sqr() + s[1].norm_sqr()).sqrt();
        let p0 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        Complex64::new(2.0 * p0 * n(&fa[idx]) * n(&fb[idx]), 0.0)
    });
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonConvergence("shell integrand is not finite".into()));
    }
    Ok((v, size.re))
}

/// `∫ d³p/(2|p⃗|) f̃(z p′)ᵀ p′_M conj(f̃(z p′))`, which equals `|z|^{-3} L(arg z)`.
pub fn conjugate_shell_integral(f: &dyn Smearing, z: Complex64, quad: &QuadConfig) -> Result<Complex64, Error> {
    Ok(conjugate_bilinear(f, z, z, quad)?.0)
}

/// `L(φ) = ∫ d³p/(2|p⃗|) f̃(e^{iφ}p′)ᵀ p′_M conj(f̃(e^{iφ}p′))` for `φ ∈ [0, π]`.
#[allow(non_snake_case)]
pub fn L_phi(f: &dyn Smearing, phi: f64, quad: &QuadConfig) -> Result<f64, Error> {
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::Domain(format!("angle {phi} outside [0, π]")));
    }
    check_support(f, "test function")?;
    let z = Complex64::from_polar(1.0, phi);
    let (v, scale) = conjugate_bilinear(f, z, z, quad)?;
    if v.im.abs() > 1e-10 * scale {
        return Err(Error::NonConvergence(format!("L({phi}) has imaginary part {:e} against scale {scale:e}", v.im)));
    }
    if v.re < -1e-12 * scale {
        return Err(Error::NonConvergence(format!("L({phi}) = {:e} is negative beyond rounding", v.re)));
    }
    Ok(v.re)
}

/// `F(z) = ∫ f̃(zp′)ᵀ p′_M conj(f̃(z̄^{-1}p′))` for `α = 0`, and
/// `F_α(z) = ∫ f̃(z^{1+α}p′)ᵀ p′_M conj(f̃(z̄^{α−1}p′))` for `0 < α < 1`.
///
/// Rotating the radial contour by `z^{-α}` gives `F(z) = z^{3α} F_α(z)`.
#[allow(non_snake_case)]
pub fn F_z(f: &dyn Smearing, z: Complex64, alpha: f64, quad: &QuadConfig) -> Result<Complex64, Error> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("α must lie in [0, 1), got {alpha}")));
    }
    if z.norm() == 0.0 || z.im < 0.0 || !z.is_finite() {
        return Err(Error::Domain(format!("z = {z} outside the closed upper half-plane minus 0")));
    }
    let (r, theta) = z.to_polar();
    if alpha > 0.0 && theta >= PI / (1.0 + alpha) {
        return Err(Error::Domain(format!("arg z = {theta} must be below π/(1+α)")));
    }
    let a = Complex64::from_polar(r.powf(1.0 + alpha), (1.0 + alpha) * theta);
    let b = Complex64::from_polar(r.powf(alpha - 1.0), (1.0 - alpha) * theta);
    Ok(conjugate_bilinear(f, a, b, quad)?.0)
}

/// `Λ(φ)` on `{0, π} ∪ [lo, π − lo]`, interpolated in the interior.
#[derive(Debug, Clone)]
pub struct AngularProfile {
    lo: f64,
    fit: Chebyshev<Complex64>,
    at_zero: Complex64,
    at_pi: Complex64,
    /// Estimated maximum interpolation error on `[lo, π − lo]`.
    pub interpolation_error: f64,
    /// Size of the profile; tolerances are relative to it.
    pub scale: f64,
    /// Number of shell quadratures spent.
    pub evaluations: usize,
}

impl AngularProfile {
    /// Fits `eval` on `[lo, π − lo]` and evaluates both endpoints exactly.
    /// `scale` overrides the size estimate taken from the endpoint values.
    pub fn build<F>(eval: F, lo: f64, scale: Option<f64>, series: &SeriesConfig) -> Result<Self, Error>
    where
        F: Fn(f64) -> Result<Complex64, Error> + Sync + Send,
    {
        if !(lo > 0.0 && lo < 0.5 * PI) {
            return Err(Error::Domain(format!("profile lower angle {lo} outside (0, π/2)")));
        }
        let at_zero = eval(0.0)?;
        let at_pi = eval(PI)?;
        let scale = scale.unwrap_or(at_zero.norm().max(at_pi.norm()));
        let failure: Mutex<Option<Error>> = Mutex::new(None);
        let guarded = |phi: f64| match eval(phi) {
            Ok(v) => v,
            Err(e) => {
                failure.lock().expect("profile failure slot").get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        };
        let abs_tol = (series.profile_tol * scale).max(f64::MIN_POSITIVE);
        let fit = fit_chebyshev(guarded, lo, PI - lo, abs_tol, series.profile_start, series.profile_max);
        if let Some(e) = failure.into_inner().expect("profile failure slot") {
            return Err(e);
        }
        Ok(AngularProfile {
            lo,
            fit: fit.series,
            at_zero,
            at_pi,
            interpolation_error: fit.error,
            scale,
            evaluations: fit.evaluations + 2,
        })
    }

    /// Lower end of the interpolated interval.
    pub fn lower_angle(&self) -> f64 {
        self.lo
    }

    /// Whether the profile covers every angle of the `λ` schedule.
    pub fn covers(&self, lambda: f64) -> bool {
        lambda.atan() >= self.lo * (1.0 - 1e-15)
    }

    pub fn eval(&self, phi: f64) -> Result<Complex64, Error> {
        if phi == 0.0 {
            return Ok(self.at_zero);
        }
        if phi == PI {
            return Ok(self.at_pi);
        }
        let slack = 1e-14;
        if phi < self.lo - slack || phi > PI - self.lo + slack {
            return Err(Error::Domain(format!("angle {phi} outside the fitted profile range")));
        }
        Ok(self.fit.eval(phi.clamp(self.lo, PI - self.lo)))
    }
}

/// Profile `L(φ)` of the conjugate pairing `(f̄, f)`.
pub fn conjugate_profile(f: &TestFunction, lo: f64, num: &Numerics) -> Result<AngularProfile, Error> {
    num.validate()?;
    check_support(f, "test function")?;
    let quad = num.quad;
    AngularProfile::build(|phi| L_phi(f, phi, &quad).map(|v| Complex64::new(v, 0.0)), lo, None, &num.series)
}

/// Profile `Λ(φ) = G(e^{iφ})` of a general pairing. The size of the pairing on
/// the real axis sets the tolerances, so that pairings which vanish
/// identically are not chased into rounding noise.
pub fn pair_profile(psibar: &dyn Smearing, psi: &dyn Smearing, lo: f64, num: &Numerics) -> Result<AngularProfile, Error> {
    num.validate()?;
    check_support(psibar, "ψ̄ test function")?;
    check_support(psi, "ψ test function")?;
    let scale = ShellPair::new(psibar, psi, &num.quad)?.magnitude / (2.0 * PI);
    let grid = ShellGrid::new(&num.quad, pair_scale(psibar, psi))?;
    AngularProfile::build(
        |phi| {
            let z = Complex64::from_polar(1.0, phi);
            shell_bilinear(psibar, -z.conj(), psi, z, &grid)
        },
        lo,
        Some(scale),
        &num.series,
    )
}

/// Sums the Hot Bang series for one ordering from a precomputed profile.
pub fn hotbang_from_profile(profile: &AngularProfile, lambda: f64, ord: Ordering, series: &SeriesConfig) -> Result<Estimate, Error> {
    series.validate()?;
    let sched = SeriesSchedule::new(lambda, (series.tol * profile.scale).max(f64::MIN_POSITIVE), series.max_terms)?;
    if !profile.covers(lambda) {
        return Err(Error::Domain(format!("profile starts at {} but λ = {lambda} needs {}", profile.lower_angle(), lambda.atan())));
    }
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let lam = |phi: f64| match profile.eval(phi) {
        Ok(v) => v,
        Err(e) => {
            failure.lock().expect("series failure slot").get_or_insert(e);
            Complex64::new(f64::NAN, 0.0)
        }
    };
    let sign = |n: usize| if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    // `first` runs over φ_n (ψ̄ψ) or π − φ_n (ψψ̄) from n = 0; `second` over
    // the other family from n = 1.
    let angle = |upper: bool, n: usize| if upper { sched.phi(n) } else { PI - sched.phi(n) };
    let upper_first = ord == Ordering::PsiBarPsi;
    let first = |n: usize| lam(angle(upper_first, n)) * (sign(n) * sched.cos3(n));
    let second = |n: usize| lam(angle(!upper_first, n + 1)) * (sign(n) * sched.cos3(n + 1));
    let (value, bound, terms) = if lambda <= series.bracket_below {
        let s: SeriesSum<Complex64> = alternating_sum(|n| first(n) + second(n), sched.tol, sched.max_terms)?;
        (s.value, s.error_bound, s.terms)
    } else {
        let a: SeriesSum<Complex64> = alternating_sum(first, sched.tol, sched.max_terms)?;
        let b: SeriesSum<Complex64> = alternating_sum(second, sched.tol, sched.max_terms)?;
        (a.value + b.value, a.error_bound + b.error_bound, a.terms.max(b.terms))
    };
    if let Some(e) = failure.into_inner().expect("series failure slot") {
        return Err(e);
    }
    let weight: f64 = (1..=terms + 1).map(|n| 2.0 * sched.cos3(n)).sum();
    let error_bound = 2.0 * PI * (bound + profile.interpolation_error * weight);
    Ok(Estimate { value: value * (2.0 * PI), error_bound })
}

/// `ω_hb(ψ̄(f̄)ψ(f))` or `ω_hb(ψ(f)ψ̄(f̄))` with its error bound.
pub fn hotbang_smeared(f: &TestFunction, lambda: f64, ord: Ordering, num: &Numerics) -> Result<Estimate, Error> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("Hot Bang parameter must be positive, got {lambda}")));
    }
    let profile = conjugate_profile(f, lambda.atan(), num)?;
    hotbang_from_profile(&profile, lambda, ord, &num.series)
}

/// Hot Bang two-point function of a general pairing, `f` in the `ψ̄` slot.
pub fn hotbang_pair(psibar: &dyn Smearing, psi: &dyn Smearing, lambda: f64, ord: Ordering, num: &Numerics) -> Result<Estimate, Error> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("Hot Bang parameter must be positive, got {lambda}")));
    }
    let profile = pair_profile(psibar, psi, lambda.atan(), num)?;
    hotbang_from_profile(&profile, lambda, ord, &num.series)
}

/// Where a [`ConvexProfile`] comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSource {
    TestFunction,
    Synthetic(String),
}

/// A positive convex function on `[0, π]`; for such a profile the series
/// `A_L` and `B_L` are non-negative.
#[derive(Clone)]
pub struct ConvexProfile {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub source: ProfileSource,
}

/// Result of a grid spot check of positivity and midpoint convexity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileCheck {
    pub min_value: f64,
    /// Largest `(f(a) + f(b))/2 − f((a+b)/2)` deficit, negative when convex.
    pub worst_convexity_defect: f64,
}

impl ProfileCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.min_value > 0.0 && self.worst_convexity_defect <= tol
    }
}

impl ConvexProfile {
    pub fn synthetic(name: &str, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ConvexProfile { f: Arc::new(f), source: ProfileSource::Synthetic(name.to_string()) }
    }

    /// `L(φ)` of `f`, interpolated for every schedule with `λ ≥ tan(lo)`.
    pub fn from_test_function(f: &TestFunction, lo: f64, num: &Numerics) -> Result<Self, Error> {
        let p = conjugate_profile(f, lo, num)?;
        Ok(ConvexProfile { f: Arc::new(move |phi| p.eval(phi).map(|v| v.re).unwrap_or(f64::NAN)), source: ProfileSource::TestFunction })
    }

    pub fn eval(&self, phi: f64) -> f64 {
        (self.f)(phi)
    }

    /// Positivity and midpoint convexity on 101 equispaced points of `[a, b]`.
    pub fn spot_check(&self, a: f64, b: f64) -> ProfileCheck {
        let xs: Vec<f64> = (0..101).map(|i| a + (b - a) * i as f64 / 100.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
        let min_value = ys.iter().copied().fold(f64::INFINITY, f64::min);
        let mut worst = f64::NEG_INFINITY;
        for i in 1..100 {
            let scale = ys[i].abs().max(f64::MIN_POSITIVE);
            worst = worst.max((ys[i] - 0.5 * (ys[i - 1] + ys[i + 1])) / scale);
        }
        ProfileCheck { min_value, worst_convexity_defect: worst }
    }
}

/// Which regrouped series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// `A_L = Σ (−1)ⁿ [g(φ_n) + g(π − φ_{n+1})]`
    A,
    /// `B_L = Σ (−1)ⁿ [g(π − φ_n) + g(φ_{n+1})]`
    B,
}

/// `A_L` or `B_L` with `g(φ) = |cos³φ| profile(φ)`, and every partial sum.
pub fn series_terms(profile: &ConvexProfile, schedule: &SeriesSchedule, which: SeriesKind) -> Result<(SeriesSum<f64>, Vec<f64>), Error> {
    let g = |phi: f64| phi.cos().powi(3).abs() * profile.eval(phi);
    let term = |n: usize| {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let (a, b) = (schedule.phi(n), schedule.phi(n + 1));
        sign * match which {
            SeriesKind::A => g(a) + g(PI - b),
            SeriesKind::B => g(PI - a) + g(b),
        }
    };
    alternating_sum_traced(term, schedule.tol, schedule.max_terms)
}

/// One grid point of [`log_convexity_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogConvexityPoint {
    pub phi: f64,
    pub center: f64,
    pub left: f64,
    pub right: f64,
    /// `L(φ)² / (L(φ−ε) L(φ+ε))`; at most one for a log-convex profile.
    pub ratio: f64,
}

/// Outcome of [`log_convexity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct LogConvexityReport {
    /// Every value vanished against the size of the integrand.
    pub identically_zero: bool,
    pub points: Vec<LogConvexityPoint>,
    /// Points with `L(φ)² > L(φ+ε) L(φ−ε) (1 + 1e-8)`.
    pub violations: usize,
    pub worst_ratio: f64,
}

impl LogConvexityReport {
    pub fn holds(&self) -> bool {
        self.identically_zero || self.violations == 0
    }
}

const LOG_CONVEXITY_SLACK: f64 = 1e-8;

/// Checks `L(φ)² ≤ L(φ+ε) L(φ−ε)` on `grid` by direct shell quadrature.
pub fn log_convexity_check(f: &TestFunction, grid: &[f64], eps: f64, quad: &QuadConfig) -> Result<LogConvexityReport, Error> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    for &phi in grid {
        if !(phi - eps > 0.0 && phi + eps < PI) {
            return Err(Error::Domain(format!("φ = {phi} ± {eps} leaves (0, π)")));
        }
    }
    check_support(f, "test function")?;
    let eval = |phi: f64| -> Result<(f64, f64), Error> {
        let z = Complex64::from_polar(1.0, phi);
        let (v, s) = conjugate_bilinear(f, z, z, quad)?;
        Ok((v.re, s))
    };
    let mut points = Vec::with_capacity(grid.len());
    let mut sizes = 0.0f64;
    let mut largest = 0.0f64;
    let mut violations = 0;
    let mut worst_ratio = f64::NEG_INFINITY;
    for &phi in grid {
        let (center, s) = eval(phi)?;
        let (left, _) = eval(phi - eps)?;
        let (right, _) = eval(phi + eps)?;
        sizes = sizes.max(s);
        largest = largest.max(center.abs()).max(left.abs()).max(right.abs());
        let ratio = center * center / (left * right);
        if center * center > left * right * (1.0 + LOG_CONVEXITY_SLACK) {
            violations += 1;
        }
        if ratio.is_finite() {
            worst_ratio = worst_ratio.max(ratio);
        }
        points.push(LogConvexityPoint { phi, center, left, right, ratio });
    }
    let identically_zero = largest <= 1e-12 * sizes;
    if identically_zero {
        violations = 0;
    }
    Ok(LogConvexityReport { identically_zero, points, violations, worst_ratio })
}

/// Exponent `k` in `H(f_s) = s^k H(f)` for the dilation `f_s(x) = f(x/s)` at
/// fixed `λ`, measured from the `ψ̄ψ` values at `s` and `1`.
pub fn dilation_exponent(f: &TestFunction, lambda: f64, s: f64, num: &Numerics) -> Result<f64, Error> {
    let base = hotbang_smeared(f, lambda, Ordering::PsiBarPsi, num)?.value.re;
    let scaled = hotbang_smeared(&f.dilated(s)?, lambda, Ordering::PsiBarPsi, num)?.value.re;
    Ok((scaled / base).ln() / s.ln())
}
