use std::f64::consts::PI;

use crate::{Error, Result};

/// Composite Gauss–Legendre rule on `[−1, 1]`.
///
/// The interval is split into `subintervals` equal pieces, each carrying a
/// `nodes_per_subinterval`-point Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    subintervals: usize,
    nodes_per_subinterval: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(16, 64).expect("default quadrature parameters are valid")
    }
}

impl QuadratureRule {
    pub fn new(subintervals: usize, nodes_per_subinterval: usize) -> Result<Self> {
        if subintervals == 0 {
            return Err(Error::invalid("subintervals", "must be at least 1"));
        }
        if nodes_per_subinterval == 0 {
            return Err(Error::invalid("nodes_per_subinterval", "must be at least 1"));
        }
        let (ref_nodes, ref_weights) = gauss_legendre(nodes_per_subinterval);
        let width = 2.0 / subintervals as f64;
        let mut nodes = Vec::with_capacity(subintervals * nodes_per_subinterval);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for s in 0..subintervals {
            let mid = -1.0 + (s as f64 + 0.5) * width;
            for (x, w) in ref_nodes.iter().zip(&ref_weights) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        Ok(Self {
            subintervals,
            nodes_per_subinterval,
            nodes,
            weights,
        })
    }

    pub fn subintervals(&self) -> usize {
        self.subintervals
    }

    pub fn nodes_per_subinterval(&self) -> usize {
        self.nodes_per_subinterval
    }

    /// Same rule with twice as many subintervals.
    pub fn refined(&self) -> Self {
        Self::new(2 * self.subintervals, self.nodes_per_subinterval)
            .expect("refining a valid rule stays valid")
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_{-1}^{1} f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// `∫_a^b f` by affine transport of the rule.
    pub fn integrate_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.integrate(|x| f(mid + half * x))
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`,
/// by Newton iteration on the three-term Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
