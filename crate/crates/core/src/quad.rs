//! Gauss–Legendre rules on panels.

use std::sync::OnceLock;

use num_complex::Complex64;

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Cached rule for the orders used throughout the crate.
    pub fn cached(n: usize) -> &'static GaussLegendre {
        static G8: OnceLock<GaussLegendre> = OnceLock::new();
        static G16: OnceLock<GaussLegendre> = OnceLock::new();
        static G32: OnceLock<GaussLegendre> = OnceLock::new();
        static G64: OnceLock<GaussLegendre> = OnceLock::new();
        match n {
            8 => G8.get_or_init(|| GaussLegendre::new(8)),
            16 => G16.get_or_init(|| GaussLegendre::new(16)),
            32 => G32.get_or_init(|| GaussLegendre::new(32)),
            64 => G64.get_or_init(|| GaussLegendre::new(64)),
            _ => panic!("no cached Gauss-Legendre rule of order {n}"),
        }
    }

    /// Integrates a complex-valued `f` over [a, b]. Also returns the sum of
    /// |w f| which callers use for roundoff estimates.
    pub fn integrate<F, E>(&self, a: f64, b: f64, mut f: F) -> Result<(Complex64, f64), E>
    where
        F: FnMut(f64) -> Result<Complex64, E>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x)? * (w * half);
            abs_sum += v.norm();
            sum += v;
        }
        Ok((sum, abs_sum))
    }

    pub fn integrate_real<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}
