//! Chebyshev series on [-1, 1].

use std::f64::consts::PI;

/// Lobatto points `cos(πj/n)`, j = 0..=n, running from 1 down to -1.
pub fn lobatto(n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![0.0];
    }
    (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect()
}

/// Points strictly between consecutive Lobatto nodes.
pub fn midpoints(n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![0.5];
    }
    (0..n)
        .map(|j| (PI * (j as f64 + 0.5) / n as f64).cos())
        .collect()
}

/// Coefficients of the interpolant through values at `lobatto(n)`.
pub fn coeffs_from_lobatto(vals: &[f64]) -> Vec<f64> {
    let n = vals.len() - 1;
    if n == 0 {
        return vec![vals[0]];
    }
    let m = 2 * n;
    let table: Vec<f64> = (0..m).map(|i| (PI * i as f64 / n as f64).cos()).collect();
    let mut c = vec![0.0; n + 1];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut acc = 0.5 * (vals[0] + vals[n] * table[(k * n) % m]);
        for (j, v) in vals.iter().enumerate().take(n).skip(1) {
            acc += v * table[(j * k) % m];
        }
        *ck = 2.0 * acc / n as f64;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    c
}

pub fn clenshaw(c: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    let t2 = 2.0 * t;
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + t2 * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or(0.0) + t * b1 - b2
}

/// Derivative with respect to t.
pub fn derivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n - 1];
    for k in (1..n).rev() {
        let next = if k + 1 < n - 1 { d[k + 1] } else { 0.0 };
        d[k - 1] = next + 2.0 * k as f64 * c[k];
    }
    d[0] *= 0.5;
    d
}

/// Antiderivative with respect to t, vanishing at t = -1.
pub fn integral(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let get = |k: usize| if k < n { c[k] } else { 0.0 };
    let mut b = vec![0.0; n + 1];
    for (k, bk) in b.iter_mut().enumerate().skip(1) {
        let prev = if k == 1 { 2.0 * get(0) } else { get(k - 1) };
        *bk = (prev - get(k + 1)) / (2.0 * k as f64);
    }
    // value at -1 is sum (-1)^k b_k
    let at_minus: f64 = b
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
        .sum();
    b[0] = -at_minus;
    b
}

pub fn abs_sum(c: &[f64]) -> f64 {
    c.iter().map(|v| v.abs()).sum()
}

/// Size of the last three coefficients.
pub fn tail(c: &[f64]) -> f64 {
    let n = c.len();
    c[n.saturating_sub(3)..].iter().map(|v| v.abs()).sum()
}
