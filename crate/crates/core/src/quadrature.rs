//! Gauss-Legendre rules and Legendre polynomials on `[-1, 1]`.

use crate::{Error, Result};

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("a quadrature rule needs at least one point".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let k = (i + 1) as f64;
            let nf = n as f64;
            let mut x = ((4.0 * k - 1.0) * std::f64::consts::PI / (4.0 * nf + 2.0)).cos()
                * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_pair(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_pair(n, x);
            if d != 0.0 {
                dp = d;
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
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let table = legendre_table(n, x);
    table[n]
}

/// `(P_k(x), P_k'(x))` for `k = 0..=n`.
pub fn legendre_table(n: usize, x: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n + 1);
    out.push((1.0, 0.0));
    if n == 0 {
        return out;
    }
    out.push((x, 1.0));
    for k in 2..=n {
        let kf = k as f64;
        let (p1, _) = out[k - 1];
        let (p2, d2) = out[k - 2];
        let p = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p2) / kf;
        // P_k' = P_{k-2}' + (2k - 1) P_{k-1}
        let d = d2 + (2.0 * kf - 1.0) * p1;
        out.push((p, d));
    }
    out
}
