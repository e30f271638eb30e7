//! Gauss-Legendre rules and the graded variant used for endpoint singularities.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Nodes and weights mapped affinely onto [a, b].
    pub fn on(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let x = self.nodes.iter().map(|&t| mid + half * t).collect();
        let w = self.weights.iter().map(|&w| half * w).collect();
        (x, w)
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = 0.0;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * t);
        }
        s * half
    }

    pub fn integrate_c<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = Complex64::new(0.0, 0.0);
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            s += *w * f(mid + half * t);
        }
        s * half
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Cached Gauss-Legendre rule with `n` nodes (n >= 1).
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n.max(1))
        .or_insert_with(|| {
            let gl = GaussLegendre::new(NonZeroUsize::new(n.max(1)).expect("n >= 1"));
            let (nodes, weights) = gl.as_node_weight_pairs().iter().copied().unzip();
            Arc::new(Rule { nodes, weights })
        })
        .clone()
}

/// Composite Gauss-Legendre over `panels` equal pieces of [a, b].
pub fn composite_c<F: FnMut(f64) -> Complex64>(rule: &Rule, a: f64, b: f64, panels: usize, mut f: F) -> Complex64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * h;
            rule.integrate_c(lo, lo + h, &mut f)
        })
        .sum()
}

/// Integral over [0, 1] of an integrand with algebraic endpoint behaviour.
///
/// The interval is split at 1/2 and each half is mapped by u = v^4 / 2 from its
/// endpoint, which turns u^{±1/4}-type factors into polynomials in v. The
/// integrand is called as `f(u, 1 - u, du_dv)` so both endpoint distances
/// stay accurate.
pub fn graded_unit<F: FnMut(f64, f64, f64) -> Complex64>(rule: &Rule, panels: usize, mut f: F) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let h = 1.0 / panels as f64;
    for p in 0..panels {
        let (vs, ws) = rule.on(p as f64 * h, (p + 1) as f64 * h);
        for (&v, &w) in vs.iter().zip(&ws) {
            let v3 = v * v * v;
            let u = 0.5 * v3 * v;
            let jac = 2.0 * v3;
            total += w * (f(u, 1.0 - u, jac) + f(1.0 - u, u, jac));
        }
    }
    total
}
