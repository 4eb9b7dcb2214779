//! Test functions `f ∈ D(V⁺, C²)` built from product bumps, and their
//! complex-argument Fourier transforms.
//!
//! A bump with center `c`, half-widths `r`, spinor amplitude `a` and scale `s`
//! is `f(x) = s·a·Π_μ b((x^μ − c^μ)/r^μ)`. Its transform factorizes:
//!
//! ```text
//! f̃(ζ) = (2π)^{-2} s a (Π r^μ) e^{i(ζ,c)} Π_μ B(ζ^μ r^μ)
//! ```
//!
//! where `B` is the Fourier integral of `b` (even, so the metric signs of the
//! spatial axes drop out of the `B` factors).

mod paley_wiener;
mod profile;
mod random;
mod smearing;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::minkowski::FourVector;
use crate::quad::ShellGrid;
use crate::Error;

pub use paley_wiener::{paley_wiener_check, PaleyWienerReport};
pub use profile::{bump_profile, bump_transform, bump_transform_scaled, order_for, ray_table, RayTable};
pub use random::{random_family, random_test_function, BumpFamily};
pub use smearing::{transform, FieldKind, LorentzImage, Transformed, WeylImage};

/// A complexified four-vector.
pub type ComplexFourVector = [Complex64; 4];

/// Spinor values `C²`.
pub type Spinor = [Complex64; 2];

const ZERO2: Spinor = [Complex64::new(0.0, 0.0); 2];

/// `z·p` for a real four-vector.
pub fn complexify(z: Complex64, p: &FourVector) -> ComplexFourVector {
    p.0.map(|c| z * c)
}

/// One product bump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BumpRecord", into = "BumpRecord")]
pub struct Bump {
    center: FourVector,
    half_widths: [f64; 4],
    amplitude: Spinor,
    scale: Complex64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BumpRecord {
    center: [f64; 4],
    half_widths: [f64; 4],
    amplitude: [[f64; 2]; 2],
    #[serde(default = "unit_scale")]
    scale: [f64; 2],
}

fn unit_scale() -> [f64; 2] {
    [1.0, 0.0]
}

impl TryFrom<BumpRecord> for Bump {
    type Error = Error;
    fn try_from(r: BumpRecord) -> Result<Self, Error> {
        Bump::new(
            FourVector(r.center),
            r.half_widths,
            r.amplitude.map(|[re, im]| Complex64::new(re, im)),
            Complex64::new(r.scale[0], r.scale[1]),
        )
    }
}

impl From<Bump> for BumpRecord {
    fn from(b: Bump) -> Self {
        BumpRecord {
            center: b.center.0,
            half_widths: b.half_widths,
            amplitude: b.amplitude.map(|z| [z.re, z.im]),
            scale: [b.scale.re, b.scale.im],
        }
    }
}

impl Bump {
    /// Fails unless all half-widths are positive and the support box lies
    /// strictly inside the forward cone.
    pub fn new(center: FourVector, half_widths: [f64; 4], amplitude: Spinor, scale: Complex64) -> Result<Self, Error> {
        if half_widths.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::Domain(format!("half-widths must be positive, got {half_widths:?}")));
        }
        if !center.is_finite() || amplitude.iter().chain([&scale]).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("bump parameters must be finite".into()));
        }
        let b = Bump { center, half_widths, amplitude, scale };
        let m = b.cone_margin();
        if !(m > 0.0) {
            return Err(Error::Domain(format!(
                "support box of bump centred at {:?} leaves the forward cone (margin {m})",
                center.0
            )));
        }
        Ok(b)
    }

    /// Unit-amplitude bump `(1, 0)` with scale 1.
    pub fn standard(center: FourVector, half_widths: [f64; 4]) -> Result<Self, Error> {
        Bump::new(center, half_widths, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], Complex64::new(1.0, 0.0))
    }

    pub fn center(&self) -> FourVector {
        self.center
    }

    pub fn half_widths(&self) -> [f64; 4] {
        self.half_widths
    }

    pub fn amplitude(&self) -> Spinor {
        self.amplitude
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    /// `min (x⁰ − |x⃗|)` over the support box, attained at a corner.
    pub fn cone_margin(&self) -> f64 {
        let c = self.center.0;
        let r = self.half_widths;
        let far: f64 = (1..4).map(|k| (c[k].abs() + r[k]).powi(2)).sum::<f64>().sqrt();
        c[0] - r[0] - far
    }

    pub fn with_scale(&self, scale: Complex64) -> Bump {
        Bump { scale, ..*self }
    }

    pub fn translated(&self, a: &FourVector) -> Result<Bump, Error> {
        Bump::new(self.center + *a, self.half_widths, self.amplitude, self.scale)
    }

    /// The bump rescaled in spacetime, `x ↦ f(x/s)`.
    pub fn dilated(&self, s: f64) -> Result<Bump, Error> {
        Bump::new(self.center.scale(s), self.half_widths.map(|r| r * s), self.amplitude, self.scale)
    }

    fn coefficient(&self) -> Spinor {
        let pref = self.scale * self.half_widths.iter().product::<f64>() / (4.0 * PI * PI);
        self.amplitude.map(|a| a * pref)
    }

    fn evaluate(&self, x: &FourVector) -> Spinor {
        let mut v = 1.0;
        for mu in 0..4 {
            let u = (x.0[mu] - self.center.0[mu]) / self.half_widths[mu];
            if u.abs() >= 1.0 {
                return ZERO2;
            }
            v *= bump_profile(u);
        }
        self.amplitude.map(|a| a * self.scale * v)
    }

    fn fourier(&self, zeta: &ComplexFourVector, order: usize) -> Spinor {
        if self.scale == Complex64::new(0.0, 0.0) {
            return ZERO2;
        }
        let c = self.center.0;
        let pairing = zeta[0] * c[0] - zeta[1] * c[1] - zeta[2] * c[2] - zeta[3] * c[3];
        let mut exponent = Complex64::i() * pairing;
        let mut product = Complex64::new(1.0, 0.0);
        for mu in 0..4 {
            let (b, e) = bump_transform_scaled(zeta[mu] * self.half_widths[mu], order);
            product *= b;
            exponent += e;
        }
        let v = exponent.exp() * product;
        self.coefficient().map(|k| k * v)
    }
}

/// A finite nonempty sum of bumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TestFunctionRecord")]
pub struct TestFunction {
    terms: Vec<Bump>,
    #[serde(skip)]
    axis_order: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TestFunctionRecord {
    terms: Vec<Bump>,
}

impl TryFrom<TestFunctionRecord> for TestFunction {
    type Error = Error;
    fn try_from(r: TestFunctionRecord) -> Result<Self, Error> {
        TestFunction::new(r.terms)
    }
}

/// Default Gauss–Legendre order of the one-dimensional transforms.
pub const DEFAULT_AXIS_ORDER: usize = 64;

impl TestFunction {
    pub fn new(terms: Vec<Bump>) -> Result<Self, Error> {
        if terms.is_empty() {
            return Err(Error::Domain("a test function needs at least one bump".into()));
        }
        Ok(TestFunction { terms, axis_order: DEFAULT_AXIS_ORDER })
    }

    pub fn single(b: Bump) -> Self {
        TestFunction { terms: vec![b], axis_order: DEFAULT_AXIS_ORDER }
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("test function: {e}")))
    }

    pub fn terms(&self) -> &[Bump] {
        &self.terms
    }

    /// Same function with a different base order for the axis transforms.
    pub fn with_axis_order(&self, order: usize) -> Self {
        TestFunction { terms: self.terms.clone(), axis_order: order.max(4) }
    }

    pub fn axis_order(&self) -> usize {
        self.axis_order
    }

    pub fn evaluate(&self, x: &FourVector) -> Spinor {
        let mut out = ZERO2;
        for t in &self.terms {
            let v = t.evaluate(x);
            out[0] += v[0];
            out[1] += v[1];
        }
        out
    }

    /// `f̃(ζ) = (2π)^{-2} ∫ dx e^{i(ζ,x)} f(x)`.
    pub fn fourier(&self, zeta: &ComplexFourVector) -> Spinor {
        let mut out = ZERO2;
        for t in &self.terms {
            let v = t.fourier(zeta, self.axis_order);
            out[0] += v[0];
            out[1] += v[1];
        }
        out
    }

    /// Componentwise complex conjugate `f̄`; still a sum of bumps.
    pub fn conj(&self) -> TestFunction {
        let terms = self
            .terms
            .iter()
            .map(|b| Bump { amplitude: b.amplitude.map(|a| a.conj()), scale: b.scale.conj(), ..*b })
            .collect();
        TestFunction { terms, axis_order: self.axis_order }
    }

    pub fn scaled(&self, s: Complex64) -> TestFunction {
        let terms = self.terms.iter().map(|b| b.with_scale(b.scale * s)).collect();
        TestFunction { terms, axis_order: self.axis_order }
    }

    pub fn translated(&self, a: &FourVector) -> Result<TestFunction, Error> {
        let terms = self.terms.iter().map(|b| b.translated(a)).collect::<Result<_, _>>()?;
        Ok(TestFunction { terms, axis_order: self.axis_order })
    }

    pub fn dilated(&self, s: f64) -> Result<TestFunction, Error> {
        let terms = self.terms.iter().map(|b| b.dilated(s)).collect::<Result<_, _>>()?;
        Ok(TestFunction { terms, axis_order: self.axis_order })
    }

    /// Sum of two test functions.
    pub fn plus(&self, other: &TestFunction) -> TestFunction {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        TestFunction { terms, axis_order: self.axis_order }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|b| b.scale == Complex64::new(0.0, 0.0) || b.amplitude == ZERO2)
    }

    fn structured_samples(&self, z: Complex64, grid: &ShellGrid) -> Vec<Spinor> {
        let per_shell = grid.shell_len();
        let (nj, nk, nq) = (grid.cos_theta.len(), grid.cos_phi.len(), grid.quarter.len());
        let table = ray_table(z);
        let rows: Vec<Vec<Spinor>> = crate::map_indexed(grid.rho.len(), |i| {
            let mut row = vec![ZERO2; per_shell];
            let rho = grid.rho[i];
            let zr = z * rho;
            let mut axis1 = vec![(Complex64::new(0.0, 0.0), 0.0); nq];
            let mut axis2 = vec![(Complex64::new(0.0, 0.0), 0.0); nq];
            for bump in &self.terms {
                if bump.scale == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let coef = bump.coefficient();
                let c = bump.center.0;
                let r = bump.half_widths;
                let (b0, e0) = table.scaled(rho * r[0]);
                for j in 0..nj {
                    let (ct, st) = (grid.cos_theta[j], grid.sin_theta[j]);
                    let (b3, e3) = table.scaled(rho * ct * r[3]);
                    for q in 0..nq {
                        axis1[q] = table.scaled(rho * st * grid.quarter[q] * r[1]);
                    }
                    if r[2] == r[1] {
                        axis2.copy_from_slice(&axis1);
                    } else {
                        for q in 0..nq {
                            axis2[q] = table.scaled(rho * st * grid.quarter[q] * r[2]);
                        }
                    }
                    let base = b0 * b3;
                    let base_exp = e0 + e3;
                    let time_part = c[0] - ct * c[3];
                    for k in 0..nk {
                        let (b1, e1) = axis1[grid.cos_slot[k]];
                        let (b2, e2) = axis2[grid.sin_slot[k]];
                        let pairing = time_part - st * (grid.cos_phi[k] * c[1] + grid.sin_phi[k] * c[2]);
                        let exponent = Complex64::i() * zr * pairing + (base_exp + e1 + e2);
                        let v = exponent.exp() * (base * b1 * b2);
                        let slot = &mut row[j * nk + k];
                        slot[0] += coef[0] * v;
                        slot[1] += coef[1] * v;
                    }
                }
            }
            row
        });
        rows.into_iter().flatten().collect()
    }
}

/// Anything that can be smeared against the field: a spinor-valued function
/// with a known complex Fourier transform.
pub trait Smearing: Send + Sync {
    /// `(2π)^{-2} ∫ dx e^{i(ζ,x)} f(x)`.
    fn fourier(&self, zeta: &ComplexFourVector) -> Spinor;

    /// `min (x⁰ − |x⃗|)` over the support; positive iff the support lies in V⁺.
    fn cone_margin(&self) -> f64;

    /// Typical momentum carried by the transform, used to place radial nodes.
    fn momentum_scale(&self) -> f64;

    /// Stable identity for caching shell samples, when available.
    fn fingerprint(&self) -> Option<u64> {
        None
    }

    /// `f̃(z p′)` at every node of `grid`, in grid order.
    fn shell_samples_uncached(&self, z: Complex64, grid: &ShellGrid) -> Vec<Spinor> {
        let per_shell = grid.shell_len();
        let rows: Vec<Vec<Spinor>> = crate::map_indexed(grid.rho.len(), |i| {
            (0..per_shell)
                .map(|r| {
                    let node = grid.node(i * per_shell + r);
                    self.fourier(&complexify(z, &FourVector::on_shell(node.p)))
                })
                .collect()
        });
        rows.into_iter().flatten().collect()
    }
}

impl Smearing for TestFunction {
    fn fourier(&self, zeta: &ComplexFourVector) -> Spinor {
        TestFunction::fourier(self, zeta)
    }

    fn cone_margin(&self) -> f64 {
        self.terms.iter().map(|b| b.cone_margin()).fold(f64::INFINITY, f64::min)
    }

    fn momentum_scale(&self) -> f64 {
        let n = (4 * self.terms.len()) as f64;
        let log_mean = self.terms.iter().flat_map(|b| b.half_widths).map(f64::ln).sum::<f64>() / n;
        (-log_mean).exp()
    }

    fn fingerprint(&self) -> Option<u64> {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.axis_order.hash(&mut h);
        for b in &self.terms {
            for x in b.center.0.iter().chain(&b.half_widths) {
                x.to_bits().hash(&mut h);
            }
            for z in b.amplitude.iter().chain([&b.scale]) {
                z.re.to_bits().hash(&mut h);
                z.im.to_bits().hash(&mut h);
            }
        }
        Some(h.finish())
    }

    fn shell_samples_uncached(&self, z: Complex64, grid: &ShellGrid) -> Vec<Spinor> {
        self.structured_samples(z, grid)
    }
}

const CACHE_CAPACITY: usize = 12;

type SampleKey = (u64, u64, u64, [u64; 7]);

/// `f̃(z p′)` on every node of `grid`, memoized for functions with a fingerprint.
pub fn shell_samples(f: &dyn Smearing, z: Complex64, grid: &ShellGrid) -> Arc<Vec<Spinor>> {
    static CACHE: OnceLock<Mutex<HashMap<SampleKey, Arc<Vec<Spinor>>>>> = OnceLock::new();
    let Some(id) = f.fingerprint() else {
        return Arc::new(f.shell_samples_uncached(z, grid));
    };
    let c = grid.config;
    let key: SampleKey = (
        id,
        z.re.to_bits(),
        z.im.to_bits(),
        [
            c.radial_order as u64,
            c.cos_theta_order as u64,
            c.azimuth_order as u64,
            c.axis_order as u64,
            grid.kappa.to_bits(),
            0,
            0,
        ],
    );
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("sample cache").get(&key) {
        return v.clone();
    }
    let v = Arc::new(f.shell_samples_uncached(z, grid));
    let mut guard = cache.lock().expect("sample cache");
    if guard.len() >= CACHE_CAPACITY {
        guard.clear();
    }
    guard.insert(key, v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadConfig;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_bump() -> Bump {
        Bump::new(FourVector::new(2.0, 0.3, -0.2, 0.1), [0.4, 0.3, 0.5, 0.35], [c(1.0, 0.2), c(-0.3, 0.7)], c(0.8, -0.1))
            .unwrap()
    }

    #[test]
    fn rejects_boxes_leaving_the_cone() {
        assert!(Bump::standard(FourVector::new(1.0, 0.8, 0.0, 0.0), [0.3; 4]).is_err());
        assert!(Bump::standard(FourVector::new(2.0, 0.0, 0.0, 0.0), [0.3, 0.0, 0.3, 0.3]).is_err());
        assert!(TestFunction::new(vec![]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let b = Bump::standard(FourVector::new(2.0, 0.0, 0.0, 0.0), [0.5; 4]).unwrap();
        let f = TestFunction::single(b);
        let v = f.evaluate(&FourVector::new(2.0, 0.0, 0.0, 0.0));
        assert!((v[0].re - (-4f64).exp()).abs() < 1e-16 && v[1] == ZERO2[0]);
        assert_eq!(f.evaluate(&FourVector::new(2.6, 0.0, 0.0, 0.0)), ZERO2);
        let g = TestFunction::new(vec![b, b.with_scale(c(-1.0, 0.0))]).unwrap();
        assert_eq!(g.evaluate(&FourVector::new(2.1, 0.1, 0.0, 0.2)), ZERO2);
    }

    #[test]
    fn support_is_exact() {
        let f = TestFunction::single(sample_bump());
        for x in [FourVector::new(2.4, 0.3, -0.2, 0.1), FourVector::new(2.0, 0.3, -0.2, 0.45000001)] {
            assert_eq!(f.evaluate(&x), ZERO2);
        }
    }

    #[test]
    fn zero_scale_transform_vanishes() {
        let f = TestFunction::single(sample_bump().with_scale(c(0.0, 0.0)));
        assert_eq!(f.fourier(&[c(1.0, 0.3), c(0.2, 0.0), c(0.0, 0.0), c(-1.0, 0.1)]), ZERO2);
        assert!(f.is_zero());
    }

    #[test]
    fn shift_theorem() {
        let f = TestFunction::single(sample_bump());
        let a = FourVector::new(0.7, 0.1, 0.2, -0.3);
        let g = f.translated(&a).unwrap();
        let zeta = [c(1.3, 0.2), c(-0.4, 0.1), c(0.9, 0.0), c(0.2, -0.3)];
        let phase = (Complex64::i()
            * (zeta[0] * a[0] - zeta[1] * a[1] - zeta[2] * a[2] - zeta[3] * a[3]))
            .exp();
        let (fg, ff) = (g.fourier(&zeta), f.fourier(&zeta));
        for s in 0..2 {
            assert!((fg[s] - phase * ff[s]).norm() < 1e-10 * ff[s].norm().max(1e-300));
        }
    }

    #[test]
    fn reality_symmetry() {
        let b = Bump::new(FourVector::new(2.0, 0.1, 0.2, 0.0), [0.4; 4], [c(1.0, 0.0), c(0.5, 0.0)], c(1.0, 0.0)).unwrap();
        let f = TestFunction::single(b);
        let zeta = [c(1.1, 0.0), c(-2.0, 0.0), c(0.7, 0.0), c(3.0, 0.0)];
        let minus = zeta.map(|z| -z);
        let (a, bb) = (f.fourier(&zeta), f.fourier(&minus));
        for s in 0..2 {
            assert!((a[s] - bb[s].conj()).norm() < 1e-12 * a[s].norm());
        }
    }

    /// 4D tensor trapezoid with 161 points per axis, evaluated in factored form.
    #[test]
    fn brute_force_oracle() {
        let bump = sample_bump();
        let f = TestFunction::single(bump);
        let zeta = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let n = 161;
        let sign = [1.0, -1.0, -1.0, -1.0];
        let mut prod = Complex64::new(1.0, 0.0);
        for mu in 0..4 {
            let (cm, r) = (bump.center()[mu], bump.half_widths()[mu]);
            let h = 2.0 * r / (n - 1) as f64;
            let mut s = Complex64::new(0.0, 0.0);
            for k in 1..n - 1 {
                let x = cm - r + k as f64 * h;
                s += (Complex64::i() * sign[mu] * zeta[mu] * x).exp() * bump_profile((x - cm) / r);
            }
            prod *= s * h;
        }
        let expect = bump.amplitude().map(|a| a * bump.scale() * prod / (4.0 * PI * PI));
        let got = f.fourier(&zeta);
        for s in 0..2 {
            assert!((got[s] - expect[s]).norm() < 1e-8 * expect[s].norm(), "{got:?} vs {expect:?}");
        }
    }

    #[test]
    fn linearity() {
        let f = TestFunction::single(sample_bump());
        let g = TestFunction::single(Bump::standard(FourVector::new(3.0, -0.5, 0.5, 0.0), [0.6, 0.4, 0.4, 0.2]).unwrap());
        let (a, b) = (c(0.3, -1.2), c(2.0, 0.5));
        let h = f.scaled(a).plus(&g.scaled(b));
        let zeta = [c(0.4, 0.5), c(1.0, 0.0), c(-0.2, 0.3), c(0.0, 0.1)];
        let (vf, vg, vh) = (f.fourier(&zeta), g.fourier(&zeta), h.fourier(&zeta));
        for s in 0..2 {
            let lin = a * vf[s] + b * vg[s];
            assert!((vh[s] - lin).norm() < 1e-12 * lin.norm().max(vh[s].norm()));
        }
    }

    #[test]
    fn cauchy_riemann() {
        let f = TestFunction::single(sample_bump());
        let zeta = [c(0.8, 0.3), c(-0.5, 0.1), c(0.2, 0.0), c(1.0, 0.2)];
        let h = 1e-3;
        for mu in 0..4 {
            let shifted = |d: Complex64| {
                let mut z = zeta;
                z[mu] += d;
                f.fourier(&z)
            };
            let (px, mx) = (shifted(c(h, 0.0)), shifted(c(-h, 0.0)));
            let (py, my) = (shifted(c(0.0, h)), shifted(c(0.0, -h)));
            for s in 0..2 {
                let dx = (px[s] - mx[s]) / (2.0 * h);
                let dy = (py[s] - my[s]) / (2.0 * h);
                let residual = (dx * Complex64::i() - dy).norm();
                assert!(residual < 1e-6 * dx.norm().max(1.0), "axis {mu}: {residual}");
            }
        }
    }

    #[test]
    fn structured_samples_match_pointwise() {
        let f = TestFunction::new(vec![
            sample_bump(),
            Bump::standard(FourVector::new(2.5, 0.0, 0.4, -0.3), [0.3, 0.3, 0.3, 0.5]).unwrap(),
        ])
        .unwrap();
        let grid = ShellGrid::new(&QuadConfig { radial_order: 8, cos_theta_order: 6, azimuth_order: 12, ..Default::default() }, 2.0)
            .unwrap();
        for z in [c(1.0, 0.0), c(-1.0, 0.0), Complex64::from_polar(1.0, 0.7), Complex64::from_polar(2.0, 2.9)] {
            let fast = f.structured_samples(z, &grid);
            let slow: Vec<Spinor> = (0..fast.len()).map(|idx| f.fourier(&complexify(z, &FourVector::on_shell(grid.node(idx).p)))).collect();
            let scale = slow.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
            for (idx, (v, w)) in fast.iter().zip(&slow).enumerate() {
                for s in 0..2 {
                    assert!((v[s] - w[s]).norm() <= 1e-13 * scale, "{z} {idx}: {v:?} vs {w:?}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"terms":[{"center":[2,0,0,0],"half_widths":[0.5,0.5,0.5,0.5],"amplitude":[[1,0],[0,0]],"scale":[1,0]}]}"#;
        let f = TestFunction::from_json(text).unwrap();
        assert_eq!(f.terms().len(), 1);
        let back = serde_json::to_string(&f).unwrap();
        assert_eq!(TestFunction::from_json(&back).unwrap(), f);
        let bad = r#"{"terms":[{"center":[0.5,0,0,0],"half_widths":[0.5,0.5,0.5,0.5],"amplitude":[[1,0],[0,0]]}]}"#;
        assert!(TestFunction::from_json(bad).is_err());
    }
}
