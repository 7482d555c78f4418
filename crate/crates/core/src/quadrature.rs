//! Gauss–Jacobi rules on `(0, 1)` and Riemann–Liouville fractional integrals.

use crate::error::{Error, Result};
use crate::specfun::{gamma, jacobi_p, log_gamma, JacobiParams};

/// Largest order accepted by [`gauss_jacobi`].
pub const MAX_ORDER: usize = 512;

const MAX_QL_SWEEPS: usize = 100;

/// Nodes and weights approximating `int_0^1 rho^{(a,b)}(x) g(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub params: JacobiParams,
    /// ascending, strictly inside (0, 1)
    pub nodes: Vec<f64>,
    /// strictly positive
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        integrate(self, g)
    }
}

/// Gauss–Jacobi rule of order `n` for the weight `(1 - x)^a x^b` on `(0, 1)`.
///
/// Nodes are eigenvalues of the Jacobi matrix (Golub–Welsch), polished by
/// Newton steps; weights come from the derivative formula.
pub fn gauss_jacobi(n: usize, p: JacobiParams) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::domain(format!("quadrature order {n} outside 1..={MAX_ORDER}")));
    }
    if !p.is_weight() {
        return Err(Error::domain(format!(
            "Jacobi weight exponents must exceed -1, got ({}, {})",
            p.a, p.b
        )));
    }
    let (a, b) = (p.a, p.b);

    // Jacobi matrix on (-1, 1) for (1-x)^a (1+x)^b
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for (i, d) in diag.iter_mut().enumerate() {
        let s = 2.0 * i as f64 + a + b;
        *d = if i == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
    }
    for i in 1..n {
        let fi = i as f64;
        let s = 2.0 * fi + a + b;
        let sq = if i == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
        } else {
            4.0 * fi * (fi + a) * (fi + b) * (fi + a + b) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[i - 1] = sq.sqrt();
    }
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(|x, y| x.total_cmp(y));

    let ln_c = log_gamma(n as f64 + a + 1.0)? + log_gamma(n as f64 + b + 1.0)?
        - log_gamma(n as f64 + a + b + 1.0)?
        - log_gamma(n as f64 + 1.0)?;
    let c = ln_c.exp();
    let nf = n as f64;
    let dscale = 0.5 * (nf + a + b + 1.0);

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (i, &x0) in diag.iter().enumerate() {
        let lo = if i == 0 { -1.0 } else { diag[i - 1] };
        let hi = if i + 1 == n { 1.0 } else { diag[i + 1] };
        let mut x = x0;
        for _ in 0..3 {
            let pn = jacobi_p(n, a, b, x);
            let dp = dscale * jacobi_p(n - 1, a + 1.0, b + 1.0, x);
            let step = pn / dp;
            let next = x - step;
            if !(next > lo && next < hi) || !next.is_finite() {
                break;
            }
            x = next;
            if step.abs() <= 1e-17 {
                break;
            }
        }
        let dp = dscale * jacobi_p(n - 1, a + 1.0, b + 1.0, x);
        let w = c / ((1.0 - x) * (1.0 + x) * dp * dp);
        nodes.push(0.5 * (1.0 + x));
        weights.push(w);
    }
    let rule = QuadratureRule { params: p, nodes, weights };
    check_rule(&rule)?;
    Ok(rule)
}

fn check_rule(rule: &QuadratureRule) -> Result<()> {
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        if !(x > 0.0 && x < 1.0) || !(w > 0.0) || !w.is_finite() {
            return Err(Error::numerical(format!(
                "invalid Gauss–Jacobi node/weight ({x}, {w}) for order {}",
                rule.order()
            )));
        }
    }
    Ok(())
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.
///
/// `d` holds the diagonal and is overwritten with the eigenvalues; `e[i]`
/// is the entry coupling rows `i` and `i + 1` and is destroyed.
pub fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    assert_eq!(e.len(), n, "off-diagonal buffer must have length n");
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::numerical(format!(
                    "QL iteration did not converge for eigenvalue {l} after {MAX_QL_SWEEPS} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Pairwise (cascade) summation; the order of additions depends only on the length.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if v.len() <= BLOCK {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// `sum_m w_m g(x_m)`, approximating `int_0^1 rho^{(a,b)} g`.
pub fn integrate<G: Fn(f64) -> f64>(rule: &QuadratureRule, g: G) -> Result<f64> {
    let mut terms = Vec::with_capacity(rule.order());
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::numerical(format!("integrand is {v} at node {x}")));
        }
        terms.push(w * v);
    }
    Ok(pairwise_sum(&terms))
}

/// Composite rule for `int_0^1 rho^{(a,b)} g` with both halves graded toward
/// their endpoint: `x = t^k / 2` on the left, `x = 1 - t^k / 2` on the right.
///
/// Intended for integrands carrying their own non-polynomial endpoint powers,
/// which a single Gauss–Jacobi rule resolves only algebraically. Each half uses
/// `n` nodes, so the result has `2n` nodes.
pub fn graded_rule(n: usize, p: JacobiParams, grade: u32) -> Result<QuadratureRule> {
    if grade == 0 {
        return Err(Error::domain("grading exponent must be at least 1"));
    }
    if !p.is_weight() {
        return Err(Error::domain(format!(
            "Jacobi weight exponents must exceed -1, got ({}, {})",
            p.a, p.b
        )));
    }
    let k = grade as f64;
    let left = gauss_jacobi(n, JacobiParams::new(0.0, k * (p.b + 1.0) - 1.0))?;
    let right = gauss_jacobi(n, JacobiParams::new(0.0, k * (p.a + 1.0) - 1.0))?;
    let mut nodes = Vec::with_capacity(2 * n);
    let mut weights = Vec::with_capacity(2 * n);
    let lscale = k / 2f64.powf(p.b + 1.0);
    for (&t, &w) in left.nodes.iter().zip(&left.weights) {
        let x = 0.5 * t.powf(k);
        nodes.push(x);
        weights.push(w * lscale * (1.0 - x).powf(p.a));
    }
    let rscale = k / 2f64.powf(p.a + 1.0);
    for (&t, &w) in right.nodes.iter().zip(&right.weights).rev() {
        let h = 0.5 * t.powf(k);
        let x = 1.0 - h;
        nodes.push(x);
        weights.push(w * rscale * x.powf(p.b));
    }
    Ok(QuadratureRule { params: p, nodes, weights })
}

/// Rule used for integrands with non-polynomial endpoint behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// [`graded_rule`] with cubic grading, `n` nodes per half.
    #[default]
    Graded,
    /// One Gauss–Jacobi rule of order `n`.
    Single,
}

impl Scheme {
    pub fn rule(self, n: usize, p: JacobiParams) -> Result<QuadratureRule> {
        match self {
            Scheme::Graded => graded_rule(n, p, 3),
            Scheme::Single => gauss_jacobi(n, p),
        }
    }
}

/// Which endpoint a fractional integral is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `0 I_x^sigma`
    Left,
    /// `x I_1^sigma`
    Right,
}

/// Order and side of a Riemann–Liouville integral.
///
/// `endpoint_exponent` is an optional known power `p` of the integrand at the
/// anchoring endpoint (`w ~ s^p` for the left side, `w ~ (1 - s)^p` for the
/// right); it is absorbed into the Gauss–Jacobi weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracIntegralSpec {
    pub sigma: f64,
    pub side: Side,
    pub endpoint_exponent: f64,
}

impl FracIntegralSpec {
    pub fn left(sigma: f64) -> Self {
        FracIntegralSpec { sigma, side: Side::Left, endpoint_exponent: 0.0 }
    }

    pub fn right(sigma: f64) -> Self {
        FracIntegralSpec { sigma, side: Side::Right, endpoint_exponent: 0.0 }
    }

    pub fn with_endpoint_exponent(mut self, p: f64) -> Self {
        self.endpoint_exponent = p;
        self
    }
}

/// Riemann–Liouville fractional integral of `w` evaluated at `x`.
pub fn frac_integral<W: Fn(f64) -> f64>(spec: FracIntegralSpec, w: W, x: f64, n: usize) -> Result<f64> {
    let sigma = spec.sigma;
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::domain(format!("fractional order {sigma} outside (0, 1)")));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("fractional integral point {x} outside (0, 1)")));
    }
    let p = spec.endpoint_exponent;
    if !(p > -1.0) {
        return Err(Error::domain(format!("endpoint exponent {p} must exceed -1")));
    }
    let g_sigma = gamma(sigma)?;
    match spec.side {
        Side::Left => {
            let rule = gauss_jacobi(n, JacobiParams::new(sigma - 1.0, p))?;
            let v = integrate(&rule, |t| {
                let s = x * t;
                w(s) / s.powf(p)
            })?;
            Ok(x.powf(sigma + p) * v / g_sigma)
        }
        Side::Right => {
            let h = 1.0 - x;
            let rule = gauss_jacobi(n, JacobiParams::new(p, sigma - 1.0))?;
            let v = integrate(&rule, |t| {
                let one_minus_s = h * (1.0 - t);
                w(x + h * t) / one_minus_s.powf(p)
            })?;
            Ok(h.powf(sigma + p) * v / g_sigma)
        }
    }
}

/// Options for [`apply_n_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApplyOptions {
    /// known power of `q` at x = 0
    pub exponent_at_zero: f64,
    /// known power of `q` at x = 1
    pub exponent_at_one: f64,
    pub order: usize,
    pub h: f64,
}

impl Default for ApplyOptions {
    fn default() -> Self {
        ApplyOptions { exponent_at_zero: 0.0, exponent_at_one: 0.0, order: 128, h: 1e-3 }
    }
}

/// `D (r 0I^{2-alpha} + (1-r) xI1^{2-alpha}) q` at `x`, differentiated by a
/// five-point centred stencil. A validation tool, not part of the solve path.
pub fn apply_n<Q: Fn(f64) -> f64>(alpha: f64, r: f64, q: Q, x: f64) -> Result<f64> {
    apply_n_with(alpha, r, q, x, &ApplyOptions::default())
}

pub fn apply_n_with<Q: Fn(f64) -> f64>(alpha: f64, r: f64, q: Q, x: f64, opts: &ApplyOptions) -> Result<f64> {
    let h = opts.h;
    if !(x - 2.0 * h > 0.0 && x + 2.0 * h < 1.0) {
        return Err(Error::domain(format!("apply_n point {x} too close to the boundary for h = {h}")));
    }
    let sigma = 2.0 - alpha;
    let left = FracIntegralSpec::left(sigma).with_endpoint_exponent(opts.exponent_at_zero);
    let right = FracIntegralSpec::right(sigma).with_endpoint_exponent(opts.exponent_at_one);
    let g = |y: f64| -> Result<f64> {
        let mut v = 0.0;
        if r != 0.0 {
            v += r * frac_integral(left, &q, y, opts.order)?;
        }
        if r != 1.0 {
            v += (1.0 - r) * frac_integral(right, &q, y, opts.order)?;
        }
        Ok(v)
    };
    let gm2 = g(x - 2.0 * h)?;
    let gm1 = g(x - h)?;
    let gp1 = g(x + h)?;
    let gp2 = g(x + 2.0 * h)?;
    Ok((gm2 - 8.0 * gm1 + 8.0 * gp1 - gp2) / (12.0 * h))
}
