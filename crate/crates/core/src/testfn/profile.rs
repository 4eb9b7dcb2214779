//! The one-dimensional bump `b(u) = exp(−1/(1−u²))` and its Fourier integral.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

/// Beyond this frequency modulus `|B(w)| e^{−|Im w|}` is below `1e-10 B(0)`
/// and the transform is returned as zero.
const FREQUENCY_CUTOFF: f64 = 400.0;
const MAX_ORDER: usize = 2048;

/// `b(u) = exp(−1/(1−u²))` on `(−1, 1)`, zero elsewhere.
pub fn bump_profile(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// Nodes are cut off where `cosh²s` exceeds 42, i.e. `b < e^{−42}`.
const DE_HALF_WIDTH: f64 = 2.6;

struct HalfRule {
    nodes: Vec<f64>,
    /// Weights of the symmetric rule folded onto `u ≥ 0`, including `b(u)`.
    weights: Vec<f64>,
}

/// Trapezoid rule in `s` after `u = tanh s`, under which the bump becomes
/// `exp(−cosh²s) sech²s`, an entire function with double-exponential decay.
fn half_rule(n: usize) -> Arc<HalfRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<HalfRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().expect("half rule cache").get(&n) {
        return r.clone();
    }
    let half = (n / 2).max(1);
    let h = DE_HALF_WIDTH / half as f64;
    let mut nodes = Vec::with_capacity(half + 1);
    let mut weights = Vec::with_capacity(half + 1);
    for k in 0..=half {
        let s = k as f64 * h;
        let c = s.cosh();
        let fold = if k == 0 { 1.0 } else { 2.0 };
        nodes.push(s.tanh());
        weights.push(fold * h * (-c * c).exp() / (c * c));
    }
    let rule = Arc::new(HalfRule { nodes, weights });
    cache.lock().expect("half rule cache").entry(n).or_insert(rule).clone()
}

/// Symmetric nodes `u` on `(−1, 1)` with weights that include `b(u)`, so that
/// `Σ w g(u) ≈ ∫ b(u) g(u) du` for smooth `g`.
pub(crate) fn bump_weighted_rule(n: usize) -> Vec<(f64, f64)> {
    let rule = half_rule(n);
    let mut out = Vec::with_capacity(2 * rule.nodes.len());
    for (k, (u, w)) in rule.nodes.iter().zip(&rule.weights).enumerate().rev() {
        if k > 0 {
            out.push((-u, 0.5 * w));
        }
    }
    for (k, (u, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        out.push((*u, if k > 0 { 0.5 * w } else { *w }));
    }
    out
}

/// Node count used for frequency `|w|` when the base count is `base`.
pub fn order_for(w: f64, base: usize) -> usize {
    let mut n = base.max(8);
    while (n as f64) < 2.0 * w + base as f64 && n < MAX_ORDER {
        n *= 2;
    }
    n
}

/// `B(w) = ∫_{−1}^{1} e^{iwu} b(u) du`, returned as `(B(w) e^{−|Im w|}, |Im w|)`.
///
/// The split keeps large imaginary frequencies finite; callers add the
/// exponent to the phase of the full product before exponentiating.
pub fn bump_transform_scaled(w: Complex64, base_order: usize) -> (Complex64, f64) {
    let (a, b) = (w.re, w.im);
    if w.norm() > FREQUENCY_CUTOFF {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let rule = half_rule(order_for(w.norm(), base_order));
    let beta = b.abs();
    if beta == 0.0 {
        let mut s = 0.0;
        for (u, c) in rule.nodes.iter().zip(&rule.weights) {
            s += c * (a * u).cos();
        }
        return (Complex64::new(s, 0.0), 0.0);
    }
    let sign = b.signum();
    let (mut re, mut im) = (0.0, 0.0);
    for (u, c) in rule.nodes.iter().zip(&rule.weights) {
        let (sn, cs) = (a * u).sin_cos();
        let hi = (-beta * (1.0 - u)).exp();
        let lo = (-beta * (1.0 + u)).exp();
        re += c * cs * 0.5 * (hi + lo);
        im -= c * sn * sign * 0.5 * (hi - lo);
    }
    (Complex64::new(re, im), beta)
}

/// Spacing of [`RayTable`] in units of `|w|`.
const TABLE_STEP: f64 = 0.05;
/// Interpolation stencil of [`RayTable`]; degree `TABLE_STENCIL − 1`.
const TABLE_STENCIL: usize = 16;
const TABLE_REFRESH: usize = 32;

/// `B(z t) e^{−|Im z| |t|}` on an equispaced grid of real `t`, for one fixed
/// complex direction `z`, evaluated by local polynomial interpolation.
///
/// The samples of all nodes `u_k` are advanced by complex multiplication
/// (`e^{i z (t+Δ) u} = e^{i z t u} e^{i z Δ u}`) and recomputed directly
/// every few steps, so the table costs one multiplication per node and entry.
/// Every factor has modulus at most one after scaling.
pub struct RayTable {
    z: Complex64,
    step: f64,
    t_max: f64,
    values: Vec<Complex64>,
    weights: [f64; TABLE_STENCIL],
}

impl RayTable {
    pub fn new(z: Complex64) -> Self {
        let modulus = z.norm();
        if modulus == 0.0 {
            let b0 = bump_transform_scaled(Complex64::new(0.0, 0.0), MAX_ORDER).0;
            return RayTable { z, step: 1.0, t_max: f64::INFINITY, values: vec![b0; TABLE_STENCIL], weights: stencil_weights() };
        }
        let step = TABLE_STEP / modulus;
        let t_max = FREQUENCY_CUTOFF / modulus;
        let count = (t_max / step).ceil() as usize + TABLE_STENCIL + 1;
        let rule = half_rule(order_for(FREQUENCY_CUTOFF + TABLE_STENCIL as f64 * TABLE_STEP, 64));
        let damp = z.im.abs();
        let gen = |u: f64, j: usize| {
            let t = j as f64 * step;
            ((Complex64::i() * z * u - damp) * t).exp()
        };
        let k = rule.nodes.len();
        let mut plus = vec![Complex64::new(0.0, 0.0); k];
        let mut minus = vec![Complex64::new(0.0, 0.0); k];
        let up: Vec<Complex64> = rule.nodes.iter().map(|&u| gen(u, 1)).collect();
        let um: Vec<Complex64> = rule.nodes.iter().map(|&u| gen(-u, 1)).collect();
        let mut values = Vec::with_capacity(count);
        for j in 0..count {
            if j % TABLE_REFRESH == 0 {
                for (i, &u) in rule.nodes.iter().enumerate() {
                    plus[i] = gen(u, j);
                    minus[i] = gen(-u, j);
                }
            } else {
                for i in 0..k {
                    plus[i] *= up[i];
                    minus[i] *= um[i];
                }
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..k {
                acc += (plus[i] + minus[i]) * (0.5 * rule.weights[i]);
            }
            values.push(acc);
        }
        let pad = TABLE_STENCIL / 2;
        // Smooth continuation of `t ↦ B(zt) e^{−|Im z| t}` to a few negative `t`,
        // so that stencils near the origin stay centered.
        let mut padded: Vec<Complex64> = (1..=pad)
            .rev()
            .map(|j| {
                let t = j as f64 * step;
                let (v, e) = bump_transform_scaled(-z * t, MAX_ORDER);
                v * (2.0 * e).exp()
            })
            .collect();
        padded.extend(values);
        RayTable { z, step, t_max, values: padded, weights: stencil_weights() }
    }

    pub fn direction(&self) -> Complex64 {
        self.z
    }

    /// `(B(z t) e^{−|Im z t|}, |Im z t|)`, matching [`bump_transform_scaled`].
    pub fn scaled(&self, t: f64) -> (Complex64, f64) {
        let t = t.abs();
        if self.t_max.is_infinite() {
            return (self.values[0], 0.0);
        }
        if t > self.t_max {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let x = t / self.step;
        let half = TABLE_STENCIL / 2;
        let base = x.floor() as usize;
        let start = base + 1;
        let offset = x - base as f64 + (half - 1) as f64;
        let exponent = self.z.im.abs() * t;
        let near = offset.round();
        if (offset - near).abs() < 1e-12 {
            return (self.values[start + near as usize], exponent);
        }
        let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
        for i in 0..TABLE_STENCIL {
            let c = self.weights[i] / (offset - i as f64);
            num += self.values[start + i] * c;
            den += c;
        }
        (num / den, exponent)
    }
}

/// Barycentric weights `(−1)^i C(n−1, i)` of equispaced interpolation.
fn stencil_weights() -> [f64; TABLE_STENCIL] {
    let mut w = [0.0; TABLE_STENCIL];
    let mut binom = 1.0;
    for (i, slot) in w.iter_mut().enumerate() {
        *slot = if i % 2 == 0 { binom } else { -binom };
        binom = binom * (TABLE_STENCIL - 1 - i) as f64 / (i + 1) as f64;
    }
    w
}

type RayCache = Mutex<HashMap<(u64, u64), Arc<RayTable>>>;

/// Shared [`RayTable`] for direction `z`.
pub fn ray_table(z: Complex64) -> Arc<RayTable> {
    static CACHE: OnceLock<RayCache> = OnceLock::new();
    let key = (z.re.to_bits(), z.im.to_bits());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("ray table cache").get(&key) {
        return t.clone();
    }
    let table = Arc::new(RayTable::new(z));
    let mut guard = cache.lock().expect("ray table cache");
    if guard.len() >= 16 {
        guard.clear();
    }
    guard.entry(key).or_insert(table).clone()
}

/// Unscaled `B(w)`; overflows for very large `|Im w|`.
pub fn bump_transform(w: Complex64, base_order: usize) -> Complex64 {
    let (v, e) = bump_transform_scaled(w, base_order);
    v * e.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trapezoid rule on a fine grid: spectrally accurate because every
    /// derivative of `b` vanishes at ±1.
    fn trapezoid_oracle(w: Complex64, n: usize) -> Complex64 {
        let h = 2.0 / n as f64;
        (1..n)
            .map(|k| {
                let u = -1.0 + k as f64 * h;
                (Complex64::i() * w * u).exp() * bump_profile(u)
            })
            .sum::<Complex64>()
            * h
    }

    #[test]
    fn matches_trapezoid_oracle() {
        for w in [
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(50.0, 0.0),
            Complex64::new(180.0, 0.0),
            Complex64::new(0.0, 12.0),
            Complex64::new(7.0, -5.0),
            Complex64::new(-30.0, 20.0),
        ] {
            let exact = trapezoid_oracle(w, 8000);
            let got = bump_transform(w, 64);
            let tol = 1e-10 * exact.norm() + 1e-14;
            assert!((got - exact).norm() < tol, "w = {w}: {got} vs {exact}");
        }
    }

    #[test]
    fn value_at_zero() {
        let b0 = bump_transform(Complex64::new(0.0, 0.0), 64).re;
        assert!((b0 - 0.443_993_816_168_079_4).abs() < 1e-13, "{b0}");
    }

    #[test]
    fn even_in_frequency() {
        let w = Complex64::new(4.2, 1.3);
        assert!((bump_transform(w, 64) - bump_transform(-w, 64)).norm() < 1e-14);
    }

    #[test]
    fn scaled_form_stays_finite() {
        let (v, e) = bump_transform_scaled(Complex64::new(2.0, 350.0), 64);
        assert!(v.norm().is_finite() && e == 350.0);
    }

    #[test]
    fn ray_table_matches_direct_transform() {
        for z in [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::from_polar(1.0, 0.3),
            Complex64::from_polar(1.0, 1.5),
            Complex64::from_polar(2.5, 2.8),
            Complex64::new(0.0, 1.0),
        ] {
            let table = RayTable::new(z);
            for k in 0..4000 {
                let t = -3.0 + k as f64 * 0.1037;
                let (a, ea) = table.scaled(t);
                let (b, eb) = bump_transform_scaled(z * t, 64);
                assert!((a - b).norm() < 1e-14, "z = {z}, t = {t}: {a} vs {b}");
                assert!(b == Complex64::new(0.0, 0.0) || (ea - eb).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn large_imaginary_frequency() {
        let exact = trapezoid_oracle(Complex64::new(0.0, 60.0), 20000) * (-60f64).exp();
        let (v, e) = bump_transform_scaled(Complex64::new(0.0, 60.0), 64);
        assert_eq!(e, 60.0);
        assert!((v - exact).norm() < 1e-12 * exact.norm(), "{v} vs {exact}");
    }

    #[test]
    fn profile_support() {
        assert_eq!(bump_profile(1.0), 0.0);
        assert_eq!(bump_profile(-1.5), 0.0);
        assert!((bump_profile(0.0) - (-1f64).exp()).abs() < 1e-16);
    }
}
