//! Gauss–Legendre rules on `[0, 1]`.

use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss–Legendre rule mapped to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = T::lit(n as f64);
        let one = T::one();
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        for i in 0..n.div_ceil(2) {
            let k = T::lit(i as f64 + 1.0);
            let mut x = (T::PI() * (k - T::lit(0.25)) / (nf + half)).cos();
            let mut dp = one;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != T::zero() {
                dp = d;
            }
            let w = two / ((one - x * x) * dp * dp);
            // map [-1, 1] → [0, 1]; nodes ascending
            nodes[i] = (one - x) * half;
            nodes[n - 1 - i] = (one + x) * half;
            weights[i] = w * half;
            weights[n - 1 - i] = w * half;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .fold(T::zero(), |a, b| a + b)
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let one = T::one();
    let mut p0 = one;
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::lit(k as f64);
        let p2 = ((T::lit(2.0) * kf - one) * x * p1 - (kf - one) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { one } else { p1 };
    let nf = T::lit(n as f64);
    let d = nf * (x * p1 - p0) / (x * x - one);
    (p, d)
}
