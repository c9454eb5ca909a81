//! Oracles that share no code with the library.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// η(s) by partial sums of Σ (−1)^{n−1} n^{−s} past n = 2000, smoothed by
/// 40 rounds of averaging neighbouring partial sums.
pub fn eta(s: Complex64) -> Complex64 {
    const N: usize = 2000;
    const K: usize = 40;
    let term = |n: usize| {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        (-s * (n as f64).ln()).exp() * sign
    };
    let mut partial = Complex64::new(0.0, 0.0);
    for n in 1..=N {
        partial += term(n);
    }
    let mut sums = Vec::with_capacity(K + 1);
    sums.push(partial);
    for n in N + 1..=N + K {
        partial += term(n);
        sums.push(partial);
    }
    for round in 0..K {
        for i in 0..K - round {
            sums[i] = 0.5 * (sums[i] + sums[i + 1]);
        }
    }
    sums[0]
}

pub fn zeta(s: Complex64) -> Complex64 {
    eta(s) / (1.0 - Complex64::new(2.0, 0.0).powc(1.0 - s))
}

/// Riemann–Siegel θ from its asymptotic expansion.
pub fn theta(t: f64) -> f64 {
    t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
        + 127.0 / (430080.0 * t.powi(7))
}

pub fn hardy(t: f64) -> f64 {
    (Complex64::from_polar(1.0, theta(t)) * zeta(Complex64::new(0.5, t))).re
}

/// Ordinates of sign changes of Z on (lo, hi], refined by bisection.
pub fn zeros(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil() as usize;
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = hardy(a);
    for i in 1..=n {
        let b = (lo + i as f64 * step).min(hi);
        let fb = hardy(b);
        if fa * fb < 0.0 {
            let (mut l, mut r, mut fl) = (a, b, fa);
            while r - l > 1e-12 {
                let m = 0.5 * (l + r);
                let fm = hardy(m);
                if fm * fl <= 0.0 {
                    r = m;
                } else {
                    l = m;
                    fl = fm;
                }
            }
            out.push(0.5 * (l + r));
        }
        a = b;
        fa = fb;
    }
    out
}

/// π(n) by a segmented sieve with base primes from trial division.
pub fn segmented_prime_count(n: u64) -> u64 {
    if n < 2 {
        return 0;
    }
    let root = (n as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = (2..=root)
        .filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0))
        .collect();
    const SEGMENT: u64 = 1 << 15;
    let mut count = 0;
    let mut low = 2;
    while low <= n {
        let high = (low + SEGMENT - 1).min(n);
        let mut mark = vec![true; (high - low + 1) as usize];
        for &p in &base {
            if p * p > high {
                break;
            }
            let start = (p * p).max(low.div_ceil(p) * p);
            let mut m = start;
            while m <= high {
                mark[(m - low) as usize] = false;
                m += p;
            }
        }
        count += mark.iter().filter(|b| **b).count() as u64;
        low = high + 1;
    }
    count
}

/// ψ_{−2}(x) = −ζ(−2, x+1) = x³/3 + x²/2 + x/6.
pub fn cubic_eigenfunction(x: f64) -> f64 {
    x * x * x / 3.0 + x * x / 2.0 + x / 6.0
}
