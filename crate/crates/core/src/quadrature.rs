//! One-dimensional quadrature rules on `[-1, 1]`.

use std::f64::consts::PI;

/// Nodes and weights of a rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `n`-point Gauss-Legendre rule, exact for polynomials of degree `2n - 1`.
///
/// Roots of `P_n` are found by Newton iteration from the Chebyshev-like guess
/// `cos(pi (i + 3/4) / (n + 1/2))`, evaluating `P_n` and `P_n'` with the
/// three-term recurrence. Nodes are returned in increasing order.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n > 0, "a quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    // Roots are symmetric; compute the upper half and mirror them.
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// `n`-point midpoint rule.
pub fn midpoint(n: usize) -> Rule {
    assert!(n > 0, "a quadrature rule needs at least one node");
    let h = 2.0 / n as f64;
    Rule {
        nodes: (0..n).map(|i| -1.0 + (i as f64 + 0.5) * h).collect(),
        weights: vec![h; n],
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let (p, prev) = if n == 1 { (x, 1.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - prev) / (x * x - 1.0);
    (p, d)
}
