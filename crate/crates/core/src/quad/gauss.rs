use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::legendre::GaussLegendre;

/// Gauss–Legendre nodes (ascending) and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// ∫_a^b f(x) dx.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let (h, m) = (0.5 * (b - a), 0.5 * (b + a));
        let mut acc = super::Compensated::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(m + h * x));
        }
        h * acc.value()
    }
}

/// Shared Gauss–Legendre rule of order `n ≥ 1`; rules are computed once per order.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("rule cache").get(&n) {
        return rule.clone();
    }
    let degree = NonZeroUsize::new(n).expect("Gauss rule order must be positive");
    let mut pairs: Vec<(f64, f64)> = GaussLegendre::new(degree).into_node_weight_pairs().into_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rule = Arc::new(GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    });
    cache.lock().expect("rule cache").entry(n).or_insert(rule).clone()
}
