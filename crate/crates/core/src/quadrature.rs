//! Gauss–Legendre rules and composite panel integration.

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on P_n from Chebyshev starting guesses.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrates `f` over [lo, hi].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Composite rule: panels halving in width toward the origin below `scale`,
/// uniform panels of width `scale` above it.
#[derive(Debug, Clone)]
pub struct GradedPanels {
    pub edges: Vec<f64>,
    pub rule: GaussLegendre,
}

impl GradedPanels {
    /// Mesh on [0, r_max] resolving an endpoint singularity down to `scale * 2^-depth`.
    pub fn new(scale: f64, r_max: f64, depth: u32, order: usize) -> Self {
        assert!(scale > 0.0 && r_max > scale);
        let mut edges = vec![0.0];
        edges.extend((1..=depth).rev().map(|k| scale * 0.5f64.powi(k as i32)));
        let count = (r_max / scale).ceil() as usize;
        let width = r_max / count as f64;
        edges.extend((1..=count).map(|i| i as f64 * width));
        Self { edges, rule: GaussLegendre::new(order) }
    }

    /// Splits every panel in two.
    pub fn refined(&self) -> Self {
        let mut edges = Vec::with_capacity(2 * self.edges.len());
        for w in self.edges.windows(2) {
            edges.push(w[0]);
            edges.push(0.5 * (w[0] + w[1]));
        }
        edges.push(*self.edges.last().unwrap_or(&0.0));
        Self { edges, rule: self.rule.clone() }
    }

    /// Integral of `f` over the whole mesh; rejects non-finite integrands.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> Result<f64> {
        let mut sum = 0.0;
        for w in self.edges.windows(2) {
            sum += self.rule.integrate(w[0], w[1], &mut f);
        }
        if sum.is_finite() {
            Ok(sum)
        } else {
            Err(Error::NonFinite("quadrature integrand"))
        }
    }

    /// All quadrature abscissae in increasing order.
    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rule.nodes.len() * (self.edges.len() - 1));
        for w in self.edges.windows(2) {
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[1] + w[0]);
            out.extend(self.rule.nodes.iter().map(|x| mid + half * x));
        }
        out
    }
}
