//! Minkowski geometry with signature (+,−,−,−) and the 2×2 spinor calculus.
//!
//! A real four-vector `a` is represented on spinors by the Hermitian matrices
//!
//! ```text
//! a_M = [[a0 + a3, a1 − i a2],      a^M = [[ a0 − a3, −a1 + i a2],
//!        [a1 + i a2, a0 − a3]]             [−a1 − i a2,  a0 + a3]]
//! ```
//!
//! so that `a_M a^M = (a,a)·1` and `tr(σ^ν a_M) = 2 a^ν` with `σ^ν` the lower
//! matrix of the ν-th unit vector.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Metric signature of every Minkowski product in the crate.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A real four-vector `(t, x, y, z)` in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct FourVector(pub [f64; 4]);

impl From<[f64; 4]> for FourVector {
    fn from(a: [f64; 4]) -> Self {
        FourVector(a)
    }
}

impl From<FourVector> for [f64; 4] {
    fn from(a: FourVector) -> Self {
        a.0
    }
}

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector([t, x, y, z])
    }

    /// The ν-th coordinate unit vector.
    pub fn unit(nu: usize) -> Self {
        let mut e = [0.0; 4];
        e[nu] = 1.0;
        FourVector(e)
    }

    /// Forward null vector `(|p|, p)` over a spatial momentum.
    pub fn on_shell(p: [f64; 3]) -> Self {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        FourVector([r, p[0], p[1], p[2]])
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn spatial_norm(&self) -> f64 {
        let [x, y, z] = self.spatial();
        (x * x + y * y + z * z).sqrt()
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        mink_product(self, other)
    }

    pub fn square(&self) -> f64 {
        mink_product(self, self)
    }

    /// Index raised or lowered: multiplies spatial components by −1.
    pub fn flip_index(&self) -> FourVector {
        let a = self.0;
        FourVector([a[0], -a[1], -a[2], -a[3]])
    }

    pub fn scale(&self, s: f64) -> FourVector {
        FourVector(self.0.map(|c| c * s))
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_timelike_future(&self) -> bool {
        self.square() > 0.0 && self.t() > 0.0
    }

    /// Null up to a relative tolerance on the components.
    pub fn is_null(&self, tol: f64) -> bool {
        self.square().abs() <= tol * (self.t() * self.t()).max(f64::MIN_POSITIVE)
    }

    /// `p⁰ = |p⃗| > 0` up to a relative tolerance.
    pub fn is_forward_null(&self, tol: f64) -> bool {
        self.t() > 0.0 && (self.t() - self.spatial_norm()).abs() <= tol * self.t()
    }

    /// Distance `x⁰ − |x⃗|` from the boundary of the forward cone.
    pub fn cone_margin(&self) -> f64 {
        self.t() - self.spatial_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub(crate) fn require_timelike_future(&self, what: &str) -> Result<(), Error> {
        if self.is_finite() && self.is_timelike_future() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} must lie in the open forward cone, got {:?}", self.0)))
        }
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for FourVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(self.0.map(|c| -c))
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, a: FourVector) -> FourVector {
        a.scale(self)
    }
}

/// `(a,b) = a⁰b⁰ − a⃗·b⃗`.
pub fn mink_product(a: &FourVector, b: &FourVector) -> f64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

/// Which of the two spinor matrices to build from a four-vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexPosition {
    Lower,
    Upper,
}

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpinorMatrix(pub [[Complex64; 2]; 2]);

impl SpinorMatrix {
    pub const ZERO: SpinorMatrix = SpinorMatrix([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: SpinorMatrix = SpinorMatrix([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        SpinorMatrix([[a, b], [c, d]])
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        SpinorMatrix([[a, ZERO], [ZERO, d]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn transpose(&self) -> Self {
        let m = self.0;
        SpinorMatrix([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn conj(&self) -> Self {
        SpinorMatrix(self.0.map(|r| r.map(|c| c.conj())))
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    /// Inverse via the adjugate; `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        let m = self.0;
        Some(SpinorMatrix([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SpinorMatrix(self.0.map(|r| r.map(|c| c * s)))
    }

    pub fn apply(&self, v: &[Complex64; 2]) -> [Complex64; 2] {
        let m = self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Bilinear form `uᵀ M v` (no conjugation).
    pub fn bilinear(&self, u: &[Complex64; 2], v: &[Complex64; 2]) -> Complex64 {
        let mv = self.apply(v);
        u[0] * mv[0] + u[1] * mv[1]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Mul for SpinorMatrix {
    type Output = SpinorMatrix;
    fn mul(self, o: SpinorMatrix) -> SpinorMatrix {
        let (a, b) = (self.0, o.0);
        SpinorMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])
        }))
    }
}

impl Add for SpinorMatrix {
    type Output = SpinorMatrix;
    fn add(self, o: SpinorMatrix) -> SpinorMatrix {
        SpinorMatrix(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + o.0[i][j])))
    }
}

impl Sub for SpinorMatrix {
    type Output = SpinorMatrix;
    fn sub(self, o: SpinorMatrix) -> SpinorMatrix {
        SpinorMatrix(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - o.0[i][j])))
    }
}

/// `a_M` for `Lower`, `a^M` for `Upper`.
pub fn spinor_matrix(a: &FourVector, which: IndexPosition) -> SpinorMatrix {
    complex_spinor_matrix(&a.0.map(|c| Complex64::new(c, 0.0)), which)
}

/// Same construction for a complexified vector; linear in the components.
pub fn complex_spinor_matrix(a: &[Complex64; 4], which: IndexPosition) -> SpinorMatrix {
    let [a0, a1, a2, a3] = *a;
    match which {
        IndexPosition::Lower => SpinorMatrix([[a0 + a3, a1 - I * a2], [a1 + I * a2, a0 - a3]]),
        IndexPosition::Upper => SpinorMatrix([[a0 - a3, -a1 + I * a2], [-a1 - I * a2, a0 + a3]]),
    }
}

/// The basis matrices `σ^ν = (e_ν)_M`.
pub fn sigma(nu: usize) -> SpinorMatrix {
    spinor_matrix(&FourVector::unit(nu), IndexPosition::Lower)
}

/// Reads a four-vector back from a Hermitian `a_M`: `a^ν = ½ tr(σ^ν a_M)`.
pub fn vector_from_lower(m: &SpinorMatrix) -> FourVector {
    FourVector(std::array::from_fn(|nu| 0.5 * (sigma(nu) * *m).trace().re))
}

/// An element of SL(2,C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SL2Element(SpinorMatrix);

impl SL2Element {
    pub const IDENTITY: SL2Element = SL2Element(SpinorMatrix::IDENTITY);

    pub fn new(m: SpinorMatrix) -> Result<Self, Error> {
        let d = m.det();
        if (d - ONE).norm() > 1e-12 {
            return Err(Error::Domain(format!("SL(2,C) element needs det = 1, got {d}")));
        }
        Ok(SL2Element(m))
    }

    /// Pure boost with rapidity `eta` along the z axis.
    pub fn boost_z(eta: f64) -> Self {
        SL2Element(SpinorMatrix::diag(ONE * (eta / 2.0).exp(), ONE * (-eta / 2.0).exp()))
    }

    /// Rotation by `theta` about the z axis.
    pub fn rotation_z(theta: f64) -> Self {
        SL2Element(SpinorMatrix::diag(
            Complex64::from_polar(1.0, -theta / 2.0),
            Complex64::from_polar(1.0, theta / 2.0),
        ))
    }

    /// Boost with rapidity `eta` along the x axis.
    pub fn boost_x(eta: f64) -> Self {
        let (c, s) = ((eta / 2.0).cosh(), (eta / 2.0).sinh());
        SL2Element(SpinorMatrix::new(ONE * c, ONE * s, ONE * s, ONE * c))
    }

    /// Rotation by `theta` about the x axis.
    pub fn rotation_x(theta: f64) -> Self {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        SL2Element(SpinorMatrix::new(ONE * c, -I * s, -I * s, ONE * c))
    }

    pub fn matrix(&self) -> &SpinorMatrix {
        &self.0
    }

    pub fn inverse(&self) -> SL2Element {
        SL2Element(self.0.inverse().expect("det = 1"))
    }
}

impl Mul for SL2Element {
    type Output = SL2Element;
    fn mul(self, o: SL2Element) -> SL2Element {
        SL2Element(self.0 * o.0)
    }
}

/// A real 4×4 matrix acting on contravariant components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(pub [[f64; 4]; 4]);

impl LorentzMatrix {
    pub const IDENTITY: LorentzMatrix = LorentzMatrix([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    pub fn apply(&self, a: &FourVector) -> FourVector {
        FourVector(std::array::from_fn(|mu| (0..4).map(|nu| self.0[mu][nu] * a.0[nu]).sum()))
    }

    pub fn apply_complex(&self, a: &[Complex64; 4]) -> [Complex64; 4] {
        std::array::from_fn(|mu| (0..4).map(|nu| a[nu] * self.0[mu][nu]).sum())
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn inverse(&self) -> LorentzMatrix {
        LorentzMatrix(std::array::from_fn(|mu| {
            std::array::from_fn(|nu| METRIC[mu] * self.0[nu][mu] * METRIC[nu])
        }))
    }

    pub fn max_abs_diff(&self, o: &LorentzMatrix) -> f64 {
        let mut m: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                m = m.max((self.0[mu][nu] - o.0[mu][nu]).abs());
            }
        }
        m
    }
}

/// The Lorentz transformation induced by `A` through `(Λa)_M = A a_M A†`.
pub fn lorentz_from_sl2(a: &SL2Element) -> LorentzMatrix {
    let m = a.0;
    let ma = m.adjoint();
    let mut out = [[0.0; 4]; 4];
    for nu in 0..4 {
        let image = vector_from_lower(&(m * sigma(nu) * ma));
        for mu in 0..4 {
            out[mu][nu] = image.0[mu];
        }
    }
    LorentzMatrix(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn products() {
        let e0 = FourVector::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(mink_product(&e0, &e0), 1.0);
        let n = FourVector::new(1.0, 0.0, 0.0, 1.0);
        assert_eq!(mink_product(&n, &n), 0.0);
        let a = FourVector::new(2.0, 1.0, 0.0, 0.0);
        let b = FourVector::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(mink_product(&a, &b), 1.0);
    }

    #[test]
    fn classification() {
        assert!(FourVector::new(1.0, 0.5, 0.0, 0.0).is_timelike_future());
        assert!(!FourVector::new(-1.0, 0.5, 0.0, 0.0).is_timelike_future());
        assert!(!FourVector::new(1.0, 1.0, 0.0, 0.0).is_timelike_future());
        assert!(FourVector::new(1.0, 1.0, 0.0, 0.0).is_null(1e-12));
        assert!(FourVector::on_shell([0.3, -0.4, 1.2]).is_forward_null(1e-14));
    }

    #[test]
    fn spinor_examples() {
        assert_eq!(spinor_matrix(&FourVector::unit(0), IndexPosition::Lower), SpinorMatrix::IDENTITY);
        assert_eq!(
            spinor_matrix(&FourVector::unit(3), IndexPosition::Lower),
            SpinorMatrix::diag(ONE, -ONE)
        );
        assert_eq!(
            spinor_matrix(&FourVector::unit(1), IndexPosition::Lower),
            SpinorMatrix::new(ZERO, ONE, ONE, ZERO)
        );
    }

    #[test]
    fn trace_reads_components() {
        let a = FourVector::new(1.3, -0.2, 0.7, 2.1);
        let m = spinor_matrix(&a, IndexPosition::Lower);
        assert_abs_diff_eq!(m.trace().re, 2.0 * a.t(), epsilon = 1e-15);
        let back = vector_from_lower(&m);
        for i in 0..4 {
            assert_abs_diff_eq!(back[i], a[i], epsilon = 1e-15);
        }
    }

    #[test]
    fn shell_matrix_is_positive_semidefinite() {
        let p = FourVector::on_shell([0.3, -1.1, 0.5]);
        let m = spinor_matrix(&p, IndexPosition::Lower);
        // Hermitian 2×2 with trace 2|p| and determinant (p,p) = 0.
        assert_abs_diff_eq!(m.det().norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.trace().re, 2.0 * p.spatial_norm(), epsilon = 1e-14);
        assert!(m.0[0][0].re >= 0.0 && m.0[1][1].re >= 0.0);
    }

    #[test]
    fn identity_and_boost() {
        let l = lorentz_from_sl2(&SL2Element::IDENTITY);
        assert!(l.max_abs_diff(&LorentzMatrix::IDENTITY) < 1e-15);
        let eta = 0.7;
        let l = lorentz_from_sl2(&SL2Element::boost_z(eta));
        let img = l.apply(&FourVector::unit(0));
        assert_abs_diff_eq!(img[0], eta.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(img[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(img[2], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(img[3], eta.sinh(), epsilon = 1e-14);
    }

    #[test]
    fn rotation_about_z() {
        let th = 0.4;
        let l = lorentz_from_sl2(&SL2Element::rotation_z(th));
        let img = l.apply(&FourVector::unit(1));
        assert_abs_diff_eq!(img[1], th.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(img[2], th.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(l.apply(&FourVector::unit(3))[3], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn inverse_matrix() {
        let a = SL2Element::boost_x(0.3) * SL2Element::rotation_z(1.1) * SL2Element::rotation_x(-0.4);
        let l = lorentz_from_sl2(&a);
        let li = lorentz_from_sl2(&a.inverse());
        assert!(l.inverse().max_abs_diff(&li) < 1e-13);
    }

    #[test]
    fn sl2_rejects_bad_determinant() {
        assert!(SL2Element::new(SpinorMatrix::diag(ONE * 2.0, ONE)).is_err());
    }
}
