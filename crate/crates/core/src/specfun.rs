//! Special functions and shifted Jacobi polynomials on `[0, 1]`.
//!
//! `G_n^{(a,b)}(t) = P_n^{(a,b)}(2t - 1)` is orthogonal under
//! `rho^{(a,b)}(t) = (1 - t)^a t^b`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Exponents of the Jacobi weight `(1 - x)^a x^b` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    /// exponent at x = 1
    pub a: f64,
    /// exponent at x = 0
    pub b: f64,
}

impl JacobiParams {
    pub const fn new(a: f64, b: f64) -> Self {
        JacobiParams { a, b }
    }

    pub fn swapped(self) -> Self {
        JacobiParams::new(self.b, self.a)
    }

    /// True when `rho^{(a,b)}` is integrable on (0,1).
    pub fn is_weight(&self) -> bool {
        self.a > -1.0 && self.b > -1.0
    }

    /// `rho^{(a,b)}(x) = (1 - x)^a x^b`.
    pub fn weight(&self, x: f64) -> f64 {
        (1.0 - x).powf(self.a) * x.powf(self.b)
    }
}

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// Stirling series for x >= 10; truncation error below 1e-17 relative there.
fn ln_gamma_stirling(x: f64) -> f64 {
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let z = 1.0 / (x * x);
    let series = C.iter().rev().fold(0.0, |acc, c| acc * z + c) / x;
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + series
}

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    if x >= 10.0 {
        return ln_gamma_stirling(x);
    }
    // shift up: Gamma(x) = Gamma(x + k) / (x (x+1) ... (x+k-1))
    let mut prod = 1.0;
    let mut y = x;
    while y < 10.0 {
        prod *= y;
        y += 1.0;
    }
    ln_gamma_stirling(y) - prod.ln()
}

/// `Gamma(x)` for real `x` away from the poles `0, -1, -2, ...`.
pub fn gamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.floor() {
        return Err(Error::domain(format!("gamma has a pole at {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        ln_gamma_pos(x).exp()
    }
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / gamma_unchecked(x)
    }
}

/// Complete beta function `B(p, q)` for `p, q > 0`.
pub fn beta(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::domain(format!("beta requires p, q > 0, got ({p}, {q})")));
    }
    Ok((ln_gamma_pos(p) + ln_gamma_pos(q) - ln_gamma_pos(p + q)).exp())
}

/// Shifted Jacobi polynomial `G_n^{(a,b)}(t)`; zero for negative `n`.
pub fn jacobi_g(n: i64, p: JacobiParams, t: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    jacobi_p(n as usize, p.a, p.b, 2.0 * t - 1.0)
}

/// `P_n^{(a,b)}(x)` on `[-1, 1]` via the three-term recurrence.
pub(crate) fn jacobi_p(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = 0.5 * ((a + b + 2.0) * x + (a - b));
    for k in 1..n {
        let p2 = recurrence_step(k, a, b, x, p1, p0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// One step `P_{k+1}` from `P_k`, `P_{k-1}` for `k >= 1`.
#[inline]
fn recurrence_step(k: usize, a: f64, b: f64, x: f64, pk: f64, pkm1: f64) -> f64 {
    let k = k as f64;
    let s = 2.0 * k + a + b;
    let den = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
    let c1 = (s + 1.0) * ((s + 2.0) * s * x + a * a - b * b);
    let c2 = 2.0 * (k + a) * (k + b) * (s + 2.0);
    (c1 * pk - c2 * pkm1) / den
}

/// Fills `out[i] = G_i^{(a,b)}(t)` for `i = 0..out.len()`.
pub fn jacobi_g_all(p: JacobiParams, t: f64, out: &mut [f64]) {
    let x = 2.0 * t - 1.0;
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 0.5 * ((p.a + p.b + 2.0) * x + (p.a - p.b));
    for k in 1..out.len() - 1 {
        out[k + 1] = recurrence_step(k, p.a, p.b, x, out[k], out[k - 1]);
    }
}

/// `sum_i coeffs[i] G_i^{(a,b)}(t)` in a single recurrence sweep.
pub fn jacobi_series(coeffs: &[f64], p: JacobiParams, t: f64) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let x = 2.0 * t - 1.0;
    let mut p0 = 1.0;
    let mut sum = coeffs[0];
    if coeffs.len() == 1 {
        return sum;
    }
    let mut p1 = 0.5 * ((p.a + p.b + 2.0) * x + (p.a - p.b));
    sum += coeffs[1] * p1;
    for (k, &c) in coeffs.iter().enumerate().skip(2) {
        let p2 = recurrence_step(k - 1, p.a, p.b, x, p1, p0);
        sum += c * p2;
        p0 = p1;
        p1 = p2;
    }
    sum
}

/// `k`-th derivative in `t` of `G_n^{(a,b)}`.
pub fn jacobi_g_deriv(n: i64, p: JacobiParams, k: u32, t: f64) -> f64 {
    if k == 0 {
        return jacobi_g(n, p, t);
    }
    if n < k as i64 {
        return 0.0;
    }
    let nf = n as f64;
    let kf = k as f64;
    let ratio = (ln_gamma_pos(nf + kf + p.a + p.b + 1.0) - ln_gamma_pos(nf + p.a + p.b + 1.0)).exp();
    ratio * jacobi_g(n - k as i64, JacobiParams::new(p.a + kf, p.b + kf), t)
}

/// `|||G_n^{(a,b)}|||^2 = int_0^1 rho^{(a,b)} G_n^2`.
pub fn jacobi_norm_sq(n: usize, p: JacobiParams) -> f64 {
    let nf = n as f64;
    let (a, b) = (p.a, p.b);
    // (2n+a+b+1) Gamma(n+a+b+1); at n = 0 this is Gamma(a+b+2), which stays valid for a+b+1 <= 0
    let ab = a + b;
    let ln_den = if n == 0 {
        ln_gamma_pos(ab + 2.0)
    } else {
        (2.0 * nf + ab + 1.0).ln() + ln_gamma_pos(nf + ab + 1.0)
    };
    (ln_gamma_pos(nf + a + 1.0) + ln_gamma_pos(nf + b + 1.0) - ln_gamma_pos(nf + 1.0) - ln_den).exp()
}

const HYP_MAX_TERMS: usize = 1_000_000;

/// Gauss hypergeometric function `2F1(a, b; c; x)` for `x` in `[0, 1]`.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if c <= 0.0 && c == c.floor() {
        return Err(Error::domain(format!("hyp2f1: c = {c} is a nonpositive integer")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("hyp2f1: x = {x} outside [0, 1]")));
    }
    let s = c - a - b;
    if x == 1.0 {
        if s <= 0.0 {
            return Err(Error::domain(format!("hyp2f1 at x = 1 needs c - a - b > 0, got {s}")));
        }
        return Ok(gamma_unchecked(c) * gamma_unchecked(s) * rgamma(c - a) * rgamma(c - b));
    }
    let near_integer = (s - s.round()).abs() < 1e-8;
    if x <= 0.8 || near_integer {
        return hyp_series(a, b, c, x);
    }
    // linear transformation onto 1 - x
    let y = 1.0 - x;
    let t1 = gamma_unchecked(c) * gamma_unchecked(s) * rgamma(c - a) * rgamma(c - b);
    let t2 = gamma_unchecked(c) * gamma_unchecked(-s) * rgamma(a) * rgamma(b);
    let f1 = if t1 != 0.0 { hyp_series(a, b, 1.0 - s, y)? } else { 0.0 };
    let f2 = if t2 != 0.0 { hyp_series(c - a, c - b, 1.0 + s, y)? } else { 0.0 };
    Ok(t1 * f1 + t2 * y.powf(s) * f2)
}

fn hyp_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..HYP_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term == 0.0 || term.abs() <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::numerical(format!(
        "hyp2f1({a}, {b}; {c}; {x}) series did not converge in {HYP_MAX_TERMS} terms"
    )))
}

/// Incomplete beta `B(x; p, q) = int_0^x s^{p-1} (1 - s)^{q-1} ds`.
pub fn incomplete_beta(x: f64, p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::domain(format!("incomplete_beta requires p, q > 0, got ({p}, {q})")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("incomplete_beta: x = {x} outside [0, 1]")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return beta(p, q);
    }
    if x < (p + 1.0) / (p + q + 2.0) {
        let front = (p * x.ln() + q * (-x).ln_1p()).exp() / p;
        Ok(front * beta_cf(x, p, q)?)
    } else {
        let y = 1.0 - x;
        let front = (q * y.ln() + p * x.ln()).exp() / q;
        Ok(beta(p, q)? - front * beta_cf(y, q, p)?)
    }
}

// modified Lentz evaluation of the incomplete beta continued fraction
fn beta_cf(x: f64, p: f64, q: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let qab = p + q;
    let qap = p + 1.0;
    let qam = p - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (q - m) * x / ((qam + m2) * (p + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= 1e-16 {
            return Ok(h);
        }
    }
    Err(Error::numerical(format!("incomplete beta continued fraction stalled at x = {x}")))
}
