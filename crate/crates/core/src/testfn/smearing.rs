use std::hash::{Hash, Hasher};

use num_complex::Complex64;

use super::profile::bump_weighted_rule;
use super::{ComplexFourVector, Smearing, Spinor, TestFunction};
use crate::minkowski::{complex_spinor_matrix, lorentz_from_sl2, FourVector, IndexPosition, LorentzMatrix, SL2Element, SpinorMatrix};
use crate::Error;

/// Whether a function smears `ψ` or `ψ̄`; fixes how spinor and gauge
/// transformations act on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Psi,
    PsiBar,
}

impl FieldKind {
    /// Spinor matrix acting on a function of this kind: `(Aᵀ)⁻¹` for `ψ`, `(A†)⁻¹` for `ψ̄`.
    pub fn spin_matrix(&self, a: &SL2Element) -> SpinorMatrix {
        let m = a.matrix();
        let t = match self {
            FieldKind::Psi => m.transpose(),
            FieldKind::PsiBar => m.adjoint(),
        };
        t.inverse().expect("det = 1")
    }

    /// Gauge factor `e^{iφ}` for `ψ`, `e^{−iφ}` for `ψ̄`.
    pub fn gauge_factor(&self, phase: f64) -> Complex64 {
        match self {
            FieldKind::Psi => Complex64::from_polar(1.0, phase),
            FieldKind::PsiBar => Complex64::from_polar(1.0, -phase),
        }
    }
}

/// A test function moved by a Poincaré transformation and a gauge phase.
///
/// `f ↦ M f_{(Λ,a)}` with `f_{(Λ,a)}(x) = f(Λ⁻¹(x−a))`. The transform uses
/// `f̃_{(Λ,a)}(ζ) = e^{i(ζ,a)} f̃(Λ⁻¹ζ)`, which keeps the factorized bump
/// transforms; [`LorentzImage::slow_path_fourier`] integrates the definition
/// directly for cross-checks.
#[derive(Debug, Clone)]
pub struct LorentzImage {
    inner: TestFunction,
    lambda: LorentzMatrix,
    lambda_inv: LorentzMatrix,
    shift: FourVector,
    factor: SpinorMatrix,
}

impl LorentzImage {
    pub fn evaluate(&self, x: &FourVector) -> Spinor {
        let y = self.lambda_inv.apply(&(*x - self.shift));
        self.factor.apply(&self.inner.evaluate(&y))
    }

    /// Direct 4D quadrature of `(2π)^{-2}∫ e^{i(ζ,x)} F(x) dx`
    /// after the substitution `x = Λy + a`, with about `order` nodes per axis.
    pub fn slow_path_fourier(&self, zeta: &ComplexFourVector, order: usize) -> Spinor {
        let rule = bump_weighted_rule(order);
        let m = rule.len();
        let eta = [1.0, -1.0, -1.0, -1.0];
        let mut total = [Complex64::new(0.0, 0.0); 2];
        for bump in self.inner.terms() {
            let (c, r) = (bump.center(), bump.half_widths());
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = [0usize; 4];
            loop {
                let mut y = FourVector::ZERO;
                let mut w = 1.0;
                for mu in 0..4 {
                    let (u, weight) = rule[idx[mu]];
                    y[mu] = c[mu] + r[mu] * u;
                    w *= weight * r[mu];
                }
                let x = self.lambda.apply(&y) + self.shift;
                let pairing: Complex64 = (0..4).map(|mu| zeta[mu] * (eta[mu] * x[mu])).sum();
                acc += (Complex64::i() * pairing).exp() * w;
                let mut a = 0;
                loop {
                    if a == 4 {
                        break;
                    }
                    idx[a] += 1;
                    if idx[a] < m {
                        break;
                    }
                    idx[a] = 0;
                    a += 1;
                }
                if a == 4 {
                    break;
                }
            }
            let amp = bump.amplitude().map(|z| z * bump.scale() * acc / (4.0 * std::f64::consts::PI.powi(2)));
            total[0] += amp[0];
            total[1] += amp[1];
        }
        self.factor.apply(&total)
    }
}

impl Smearing for LorentzImage {
    fn fourier(&self, zeta: &ComplexFourVector) -> Spinor {
        let pulled = self.lambda_inv.apply_complex(zeta);
        let a = self.shift;
        let pairing = zeta[0] * a[0] - zeta[1] * a[1] - zeta[2] * a[2] - zeta[3] * a[3];
        let phase = (Complex64::i() * pairing).exp();
        let v = self.factor.apply(&self.inner.fourier(&pulled));
        v.map(|z| z * phase)
    }

    fn cone_margin(&self) -> f64 {
        let mut m = f64::INFINITY;
        for bump in self.inner.terms() {
            let (c, r) = (bump.center(), bump.half_widths());
            for corner in 0..16 {
                let y = FourVector(std::array::from_fn(|mu| {
                    if corner >> mu & 1 == 1 {
                        c[mu] + r[mu]
                    } else {
                        c[mu] - r[mu]
                    }
                }));
                m = m.min((self.lambda.apply(&y) + self.shift).cone_margin());
            }
        }
        m
    }

    fn momentum_scale(&self) -> f64 {
        let stretch = self.lambda.0.iter().flatten().fold(1.0f64, |a, b| a.max(b.abs()));
        self.inner.momentum_scale() * stretch
    }
}

/// Result of [`transform`]: product form is kept whenever `A = 1`.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Transformed {
    Bumps(TestFunction),
    Lorentz(LorentzImage),
}

impl Transformed {
    pub fn evaluate(&self, x: &FourVector) -> Spinor {
        match self {
            Transformed::Bumps(f) => f.evaluate(x),
            Transformed::Lorentz(l) => l.evaluate(x),
        }
    }

    pub fn is_slow_path(&self) -> bool {
        matches!(self, Transformed::Lorentz(_))
    }
}

impl Smearing for Transformed {
    fn fourier(&self, zeta: &ComplexFourVector) -> Spinor {
        match self {
            Transformed::Bumps(f) => f.fourier(zeta),
            Transformed::Lorentz(l) => l.fourier(zeta),
        }
    }

    fn cone_margin(&self) -> f64 {
        match self {
            Transformed::Bumps(f) => f.cone_margin(),
            Transformed::Lorentz(l) => l.cone_margin(),
        }
    }

    fn momentum_scale(&self) -> f64 {
        match self {
            Transformed::Bumps(f) => f.momentum_scale(),
            Transformed::Lorentz(l) => l.momentum_scale(),
        }
    }

    fn fingerprint(&self) -> Option<u64> {
        match self {
            Transformed::Bumps(f) => f.fingerprint(),
            Transformed::Lorentz(_) => None,
        }
    }

    fn shell_samples_uncached(&self, z: Complex64, grid: &crate::quad::ShellGrid) -> Vec<Spinor> {
        match self {
            Transformed::Bumps(f) => f.shell_samples_uncached(z, grid),
            Transformed::Lorentz(l) => l.shell_samples_uncached(z, grid),
        }
    }
}

/// Applies `(A, a)` and the gauge phase to `f` as a function of the given kind.
pub fn transform(f: &TestFunction, a_sl2: &SL2Element, a: &FourVector, kind: FieldKind, phase: f64) -> Result<Transformed, Error> {
    let factor = kind.spin_matrix(a_sl2).scale(kind.gauge_factor(phase));
    if *a_sl2 == SL2Element::IDENTITY {
        let terms = f
            .terms()
            .iter()
            .map(|b| {
                let amp = factor.apply(&b.amplitude());
                super::Bump::new(b.center() + *a, b.half_widths(), amp, b.scale())
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Transformed::Bumps(TestFunction::new(terms)?.with_axis_order(f.axis_order())));
    }
    let lambda = lorentz_from_sl2(a_sl2);
    let image = LorentzImage { inner: f.clone(), lambda, lambda_inv: lambda.inverse(), shift: *a, factor };
    if !(image.cone_margin() > 0.0) {
        return Err(Error::Domain("transformed support leaves the forward cone".into()));
    }
    Ok(Transformed::Lorentz(image))
}

/// Momentum-space image of the Weyl operator.
///
/// For a `ψ`-type function `g` this is the transform of `−i(∂^M)ᵀ g`, namely
/// `−(ζ^M)ᵀ g̃(ζ)`; for a `ψ̄`-type function it is the transform of `i∂^M f`,
/// namely `ζ^M f̃(ζ)`. On the mass shell either image is annihilated by
/// `p^M p_M = (p,p) = 0`.
#[derive(Debug, Clone)]
pub struct WeylImage<S> {
    pub inner: S,
    pub kind: FieldKind,
}

impl<S: Smearing> Smearing for WeylImage<S> {
    fn fourier(&self, zeta: &ComplexFourVector) -> Spinor {
        let m = complex_spinor_matrix(zeta, IndexPosition::Upper);
        let v = self.inner.fourier(zeta);
        match self.kind {
            FieldKind::Psi => m.transpose().apply(&v).map(|z| -z),
            FieldKind::PsiBar => m.apply(&v),
        }
    }

    fn cone_margin(&self) -> f64 {
        self.inner.cone_margin()
    }

    fn momentum_scale(&self) -> f64 {
        self.inner.momentum_scale()
    }

    fn fingerprint(&self) -> Option<u64> {
        let inner = self.inner.fingerprint()?;
        let mut h = std::collections::hash_map::DefaultHasher::new();
        ("weyl", inner, self.kind == FieldKind::Psi).hash(&mut h);
        Some(h.finish())
    }
}

impl<S: Smearing + ?Sized> Smearing for &S {
    fn fourier(&self, zeta: &ComplexFourVector) -> Spinor {
        (**self).fourier(zeta)
    }
    fn cone_margin(&self) -> f64 {
        (**self).cone_margin()
    }
    fn momentum_scale(&self) -> f64 {
        (**self).momentum_scale()
    }
    fn fingerprint(&self) -> Option<u64> {
        (**self).fingerprint()
    }
    fn shell_samples_uncached(&self, z: Complex64, grid: &crate::quad::ShellGrid) -> Vec<Spinor> {
        (**self).shell_samples_uncached(z, grid)
    }
}
