use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::sum::{Components, CompensatedVec};
use super::{gauss_legendre, GaussRule};
use crate::Error;

/// Orders and tolerances of the mass-shell quadrature.
///
/// The radial rule is Gauss–Legendre in `s ∈ (0,1)` mapped to
/// `ρ = κ s/(1−s)`, where `κ` is `radial_scale` times a momentum scale supplied
/// by the caller (a typical momentum). The polar rule is Gauss–Legendre in `cos θ`, the azimuthal
/// rule is the midpoint rule on `N` equal arcs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadConfig {
    pub radial_order: usize,
    pub cos_theta_order: usize,
    pub azimuth_order: usize,
    pub radial_scale: f64,
    /// Gauss–Legendre order of the one-dimensional bump transforms.
    pub axis_order: usize,
    pub tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            radial_order: 128,
            cos_theta_order: 32,
            azimuth_order: 64,
            radial_scale: 8.0,
            axis_order: 64,
            tol: 1e-9,
        }
    }
}

impl QuadConfig {
    /// A cheaper grid for smoke runs and for the slow generic evaluation path.
    pub fn coarse() -> Self {
        QuadConfig { radial_order: 64, cos_theta_order: 16, azimuth_order: 32, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let orders = [
            ("radial_order", self.radial_order),
            ("cos_theta_order", self.cos_theta_order),
            ("azimuth_order", self.azimuth_order),
            ("axis_order", self.axis_order),
        ];
        for (name, n) in orders {
            if n < 4 {
                return Err(Error::Config(format!("{name} must be at least 4, got {n}")));
            }
        }
        if !self.azimuth_order.is_multiple_of(4) {
            return Err(Error::Config(format!(
                "azimuth_order must be a multiple of 4, got {}",
                self.azimuth_order
            )));
        }
        if !self.axis_order.is_multiple_of(2) {
            return Err(Error::Config(format!("axis_order must be even, got {}", self.axis_order)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.radial_scale > 0.0 && self.radial_scale.is_finite()) {
            return Err(Error::Config(format!("radial_scale must be positive, got {}", self.radial_scale)));
        }
        Ok(())
    }

    /// Every order doubled, for self-checks and oracle runs.
    pub fn doubled(&self) -> Self {
        QuadConfig {
            radial_order: 2 * self.radial_order,
            cos_theta_order: 2 * self.cos_theta_order,
            azimuth_order: 2 * self.azimuth_order,
            axis_order: 2 * self.axis_order,
            ..*self
        }
    }
}

/// One quadrature node on the shell.
#[derive(Debug, Clone, Copy)]
pub struct ShellNode {
    pub p: [f64; 3],
    /// Weight including the measure `d³p/(2|p⃗|)`.
    pub weight: f64,
}

/// The tensor-product grid of a [`QuadConfig`] with the radial map fixed.
///
/// Nodes are laid out radial-major, then polar, then azimuthal. The azimuth
/// angles `ϕ_k = 2π(k+½)/N` with `4 | N` make `|cos ϕ_k|` and `|sin ϕ_k|`
/// range over the same `N/4` values, which bump transforms exploit.
#[derive(Debug, Clone)]
pub struct ShellGrid {
    pub config: QuadConfig,
    pub kappa: f64,
    pub rho: Vec<f64>,
    /// Radial weights including `ρ/2` and the Jacobian of the map.
    pub rho_weight: Vec<f64>,
    pub cos_theta: Vec<f64>,
    pub sin_theta: Vec<f64>,
    pub theta_weight: Vec<f64>,
    pub cos_phi: Vec<f64>,
    pub sin_phi: Vec<f64>,
    pub phi_weight: f64,
    /// `|cos ϕ_q|` for `q < N/4`, shared by cosines and sines.
    pub quarter: Vec<f64>,
    /// Position of `|cos ϕ_k|` in `quarter`.
    pub cos_slot: Vec<usize>,
    /// Position of `|sin ϕ_k|` in `quarter`.
    pub sin_slot: Vec<usize>,
}

impl ShellGrid {
    /// Builds the grid with radial map `ρ = κ s/(1−s)`, `κ = radial_scale · scale`.
    pub fn new(config: &QuadConfig, scale: f64) -> Result<Self, Error> {
        config.validate()?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!("radial momentum scale must be positive, got {scale}")));
        }
        let kappa = config.radial_scale * scale;
        let radial: Arc<GaussRule> = gauss_legendre(config.radial_order);
        let mut rho = Vec::with_capacity(config.radial_order);
        let mut rho_weight = Vec::with_capacity(config.radial_order);
        for (x, w) in radial.nodes.iter().zip(&radial.weights) {
            let s = 0.5 * (x + 1.0);
            let r = kappa * s / (1.0 - s);
            let jac = kappa / ((1.0 - s) * (1.0 - s));
            rho.push(r);
            rho_weight.push(0.5 * w * jac * 0.5 * r);
        }
        let polar = gauss_legendre(config.cos_theta_order);
        let cos_theta = polar.nodes.clone();
        let sin_theta = cos_theta.iter().map(|c| (1.0 - c * c).sqrt()).collect();
        let n = config.azimuth_order;
        let angles: Vec<f64> = (0..n).map(|k| 2.0 * PI * (k as f64 + 0.5) / n as f64).collect();
        let quarter: Vec<f64> = angles[..n / 4].iter().map(|a| a.cos()).collect();
        let slot_of = |k: usize| {
            let k = k % (n / 2);
            if k < n / 4 {
                k
            } else {
                n / 2 - 1 - k
            }
        };
        let cos_slot = (0..n).map(slot_of).collect();
        let sin_slot = (0..n).map(|k| n / 4 - 1 - slot_of(k)).collect();
        Ok(ShellGrid {
            config: *config,
            kappa,
            rho,
            rho_weight,
            cos_theta,
            sin_theta,
            theta_weight: polar.weights.clone(),
            cos_phi: angles.iter().map(|a| a.cos()).collect(),
            sin_phi: angles.iter().map(|a| a.sin()).collect(),
            phi_weight: 2.0 * PI / n as f64,
            quarter,
            cos_slot,
            sin_slot,
        })
    }

    pub fn len(&self) -> usize {
        self.rho.len() * self.cos_theta.len() * self.cos_phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of nodes in one radial shell.
    pub fn shell_len(&self) -> usize {
        self.cos_theta.len() * self.cos_phi.len()
    }

    /// Unit direction of polar index `j` and azimuth index `k`.
    pub fn direction(&self, j: usize, k: usize) -> [f64; 3] {
        let st = self.sin_theta[j];
        [st * self.cos_phi[k], st * self.sin_phi[k], self.cos_theta[j]]
    }

    /// Node with flat index `idx`.
    pub fn node(&self, idx: usize) -> ShellNode {
        let (nj, nk) = (self.cos_theta.len(), self.cos_phi.len());
        let (i, rest) = (idx / (nj * nk), idx % (nj * nk));
        let (j, k) = (rest / nk, rest % nk);
        let n = self.direction(j, k);
        let r = self.rho[i];
        ShellNode {
            p: [r * n[0], r * n[1], r * n[2]],
            weight: self.rho_weight[i] * self.theta_weight[j] * self.phi_weight,
        }
    }

    /// Weighted sum over all nodes of per-node values laid out in grid order.
    pub fn reduce<T: Components>(&self, values: &[T]) -> T {
        assert_eq!(values.len(), self.len());
        let mut acc = CompensatedVec::new(T::LEN);
        for (idx, v) in values.iter().enumerate() {
            acc.add_scaled(v, self.node(idx).weight);
        }
        acc.value()
    }

    /// `∫ d³p/(2|p⃗|) h(p⃗)` on this grid.
    pub fn integrate<T, F>(&self, h: F) -> T
    where
        T: Components,
        F: Fn(&[f64; 3]) -> T + Sync + Send,
    {
        let per_shell = self.shell_len();
        let rows: Vec<Vec<T>> = crate::map_indexed(self.rho.len(), |i| {
            (0..per_shell).map(|r| h(&self.node(i * per_shell + r).p)).collect()
        });
        let mut acc = CompensatedVec::new(T::LEN);
        for (i, row) in rows.iter().enumerate() {
            for (r, v) in row.iter().enumerate() {
                acc.add_scaled(v, self.node(i * per_shell + r).weight);
            }
        }
        acc.value()
    }
}

/// `∫_{R³} d³p/(2|p⃗|) h(p⃗)` on the grid of `cfg` with radial momentum scale `scale`.
pub fn shell_integrate<T, F>(h: F, cfg: &QuadConfig, scale: f64) -> Result<T, Error>
where
    T: Components,
    F: Fn(&[f64; 3]) -> T + Sync + Send,
{
    let v = ShellGrid::new(cfg, scale)?.integrate(h);
    if !v.is_finite() {
        return Err(Error::NonConvergence("shell integrand produced a non-finite value".into()));
    }
    Ok(v)
}

/// Like [`shell_integrate`], repeated with all orders doubled; fails when the
/// two results differ by more than `cfg.tol` relative to the finer one.
/// Returns the finer value and the observed difference.
pub fn shell_integrate_checked<T, F>(h: F, cfg: &QuadConfig, scale: f64) -> Result<(T, f64), Error>
where
    T: Components,
    F: Fn(&[f64; 3]) -> T + Sync + Send,
{
    let coarse: T = shell_integrate(&h, cfg, scale)?;
    let fine: T = shell_integrate(&h, &cfg.doubled(), scale)?;
    let diff = fine.minus(&coarse).magnitude();
    if diff > cfg.tol * fine.magnitude().max(f64::MIN_POSITIVE) {
        return Err(Error::NonConvergence(format!(
            "shell quadrature self-check: difference {diff:e} against value {:e}",
            fine.magnitude()
        )));
    }
    Ok((fine, diff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(p: &[f64; 3]) -> f64 {
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
    }

    #[test]
    fn exponential_closed_form() {
        let v: f64 = shell_integrate(|p| (-norm(p)).exp(), &QuadConfig::default(), 1.0).unwrap();
        assert!((v / (2.0 * PI) - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn gaussian_closed_form() {
        let v: f64 = shell_integrate(|p| (-norm(p).powi(2)).exp(), &QuadConfig::default(), 1.0).unwrap();
        assert!((v / PI - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn zero_integrand() {
        let v: f64 = shell_integrate(|_| 0.0, &QuadConfig::default(), 1.0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn self_check_passes_on_smooth_integrand() {
        let cfg = QuadConfig { tol: 1e-9, ..QuadConfig::coarse() };
        let (v, diff): (f64, f64) = shell_integrate_checked(|p| (-norm(p)).exp() * (1.0 + p[2] * p[2]), &cfg, 1.0).unwrap();
        let exact = 6.0 * PI;
        assert!((v - exact).abs() < 1e-9 * exact, "{v} vs {exact}");
        assert!(diff < 1e-7, "{diff}");
    }

    #[test]
    fn azimuth_slots_reproduce_abs_trig() {
        let g = ShellGrid::new(&QuadConfig::default(), 1.0).unwrap();
        for k in 0..g.cos_phi.len() {
            assert!((g.quarter[g.cos_slot[k]] - g.cos_phi[k].abs()).abs() < 1e-15);
            assert!((g.quarter[g.sin_slot[k]] - g.sin_phi[k].abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        for cfg in [
            QuadConfig { radial_order: 3, ..Default::default() },
            QuadConfig { azimuth_order: 30, ..Default::default() },
            QuadConfig { tol: -1.0, ..Default::default() },
        ] {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        }
    }
}
