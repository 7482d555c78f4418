//! The spectral method: `beta` from `(alpha, r)`, the diagonal eigenvalues,
//! the Jacobi expansion of `f`, the kernel constant `c_{-2}` and evaluation of
//! the flux `q_N` and solution `u_N`.
//!
//! With `k(x) = (1-x)^{alpha-beta-1} x^{beta-1}` the discrete flux is
//!
//! ```text
//! q_N = c_{-1} x k(x) + rho^{(alpha-beta,beta)}(x) sum_{i<N} c_i G_i^{(alpha-beta,beta)}(x)
//! ```
//!
//! and `u_N = -int_0^x (c_{-2} k + q_N) / K`. Problems with `r < 1/2` are
//! solved in the mirrored frame `x -> 1 - x`.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_jacobi, integrate, pairwise_sum, QuadratureRule, Scheme};
use crate::specfun::{gamma, incomplete_beta, jacobi_g_all, jacobi_norm_sq, jacobi_series, log_gamma, JacobiParams};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Diffusivity `K(x)`, bounded below by a positive constant.
#[derive(Clone)]
pub enum Diffusivity {
    Constant(f64),
    Variable { func: RealFn, min: f64, max: f64 },
}

impl Diffusivity {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Diffusivity::Constant(k) => *k,
            Diffusivity::Variable { func, .. } => func(x),
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            Diffusivity::Constant(k) => *k,
            Diffusivity::Variable { min, .. } => *min,
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            Diffusivity::Constant(k) => *k,
            Diffusivity::Variable { max, .. } => *max,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Diffusivity::Constant(_))
    }

    fn reflected(&self) -> Self {
        match self {
            Diffusivity::Constant(k) => Diffusivity::Constant(*k),
            Diffusivity::Variable { func, min, max } => {
                let func = func.clone();
                Diffusivity::Variable { func: Arc::new(move |x| func(1.0 - x)), min: *min, max: *max }
            }
        }
    }
}

/// Right-hand side, either as a function or as precomputed coefficients
/// `f_i = int rho^{(beta-1,alpha-beta-1)} f G_i^{(beta-1,alpha-beta-1)}`.
#[derive(Clone)]
pub enum Source {
    Function(RealFn),
    Coefficients(Vec<f64>),
}

/// One instance of the boundary value problem.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub alpha: f64,
    pub r: f64,
    pub k: Diffusivity,
    pub f: Source,
    pub exact_u: Option<RealFn>,
    /// exact flux in the range of the operator, i.e. without the kernel part
    pub exact_q: Option<RealFn>,
    /// least endpoint exponent of `f`, used for predicted rates
    pub singular_power: Option<f64>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("r", &self.r)
            .field("constant_k", &self.k.is_constant())
            .field("k_min", &self.k.min())
            .field("has_exact_u", &self.exact_u.is_some())
            .field("has_exact_q", &self.exact_q.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0 && self.alpha < 2.0) {
            return Err(Error::Invalid(format!("alpha = {} outside (1, 2)", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.r) {
            return Err(Error::Invalid(format!("r = {} outside [0, 1]", self.r)));
        }
        if !(self.k.min() > 0.0) {
            return Err(Error::Invalid(format!("diffusivity lower bound {} is not positive", self.k.min())));
        }
        Ok(())
    }

    /// The same problem in the variable `y = 1 - x`: `r -> 1 - r`, `q -> -q(1 - y)`.
    pub fn reflected(&self) -> ProblemSpec {
        let mirror = |g: &RealFn| -> RealFn {
            let g = g.clone();
            Arc::new(move |y| g(1.0 - y))
        };
        let f = match &self.f {
            Source::Function(g) => Source::Function(mirror(g)),
            // G_i^{(a,b)}(1-y) = (-1)^i G_i^{(b,a)}(y)
            Source::Coefficients(c) => Source::Coefficients(
                c.iter().enumerate().map(|(i, v)| if i % 2 == 0 { *v } else { -*v }).collect(),
            ),
        };
        let exact_q = self.exact_q.as_ref().map(|q| {
            let q = q.clone();
            Arc::new(move |y: f64| -q(1.0 - y)) as RealFn
        });
        ProblemSpec {
            name: self.name.clone(),
            alpha: self.alpha,
            r: 1.0 - self.r,
            k: self.k.reflected(),
            f,
            exact_u: self.exact_u.as_ref().map(mirror),
            exact_q,
            singular_power: self.singular_power,
        }
    }
}

/// `beta` and the eigenvalues of the operator on the weighted Jacobi basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParams {
    pub alpha: f64,
    pub r: f64,
    pub beta: f64,
    pub lambda_minus1: f64,
    /// `lambda_0 ..= lambda_{n_max}`
    pub lambdas: Vec<f64>,
}

impl SpectralParams {
    /// `(alpha - beta, beta)`: the basis of `q_N`.
    pub fn trial(&self) -> JacobiParams {
        JacobiParams::new(self.alpha - self.beta, self.beta)
    }

    /// `(beta - 1, alpha - beta - 1)`: the basis `f` is expanded in.
    pub fn test(&self) -> JacobiParams {
        JacobiParams::new(self.beta - 1.0, self.alpha - self.beta - 1.0)
    }

    /// Kernel `k(x) = (1-x)^{alpha-beta-1} x^{beta-1}`.
    pub fn kernel(&self, x: f64) -> f64 {
        (1.0 - x).powf(self.alpha - self.beta - 1.0) * x.powf(self.beta - 1.0)
    }
}

/// Root `beta` in `[alpha-1, 1]` of `r (sin pi(alpha-beta) + sin pi beta) = sin pi beta`.
///
/// `r = 1` gives `beta = alpha - 1`, where `lambda_{-1}` vanishes and the
/// solver refuses to run.
pub fn beta_from_r(alpha: f64, r: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::domain(format!("alpha = {alpha} outside (1, 2)")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("r = {r} outside [0, 1]")));
    }
    if r == 0.5 {
        return Ok(alpha / 2.0);
    }
    if r == 1.0 {
        return Ok(alpha - 1.0);
    }
    if r == 0.0 {
        return Ok(1.0);
    }
    let phi = |b: f64| r * ((PI * (alpha - b)).sin() + (PI * b).sin()) - (PI * b).sin();
    let (mut lo, mut hi) = (alpha - 1.0, 1.0);
    for _ in 0..200 {
        if hi - lo <= 1e-15 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if phi(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverse of [`beta_from_r`].
pub fn r_from_beta(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::domain(format!("alpha = {alpha} outside (1, 2)")));
    }
    if !(beta >= alpha - 1.0 && beta <= 1.0) {
        return Err(Error::domain(format!("beta = {beta} outside [alpha - 1, 1]")));
    }
    let sb = (PI * beta).sin();
    Ok(sb / ((PI * (alpha - beta)).sin() + sb))
}

/// `lambda_n = sin(pi alpha) / (sin pi(alpha-beta) + sin pi beta) * Gamma(n+alpha) / n!`.
pub fn lambda_n(alpha: f64, beta: f64, n: usize) -> f64 {
    let pref = (PI * alpha).sin() / ((PI * (alpha - beta)).sin() + (PI * beta).sin());
    let nf = n as f64;
    let lg = log_gamma(nf + alpha).expect("positive argument") - log_gamma(nf + 1.0).expect("positive argument");
    pref * lg.exp()
}

pub fn build_params(alpha: f64, r: f64, n_max: usize) -> Result<SpectralParams> {
    let beta = beta_from_r(alpha, r)?;
    let lambda_minus1 = -(1.0 - r) * gamma(alpha)? * (PI * alpha).sin() / (PI * (alpha - beta)).sin();
    let lambdas = (0..=n_max).map(|n| lambda_n(alpha, beta, n)).collect();
    Ok(SpectralParams { alpha, r, beta, lambda_minus1, lambdas })
}

/// `f_0 ..= f_m` for the basis of `params`.
pub fn compute_f_coeffs(problem: &ProblemSpec, params: &SpectralParams, m: usize, n_quad: usize) -> Result<Vec<f64>> {
    compute_f_coeffs_with(problem, params, m, n_quad, Scheme::Graded)
}

pub fn compute_f_coeffs_with(
    problem: &ProblemSpec,
    params: &SpectralParams,
    m: usize,
    n_quad: usize,
    scheme: Scheme,
) -> Result<Vec<f64>> {
    let f = match &problem.f {
        Source::Coefficients(c) => {
            let mut out = c.clone();
            out.resize(m + 1, 0.0);
            return Ok(out);
        }
        Source::Function(f) => f,
    };
    if n_quad < m + 16 {
        return Err(Error::domain(format!("n_quad = {n_quad} must be at least M + 16 = {}", m + 16)));
    }
    let p = params.test();
    let rule = scheme.rule(n_quad, p)?;
    let nodes = rule.order();
    // products[i * nodes + j] = w_j f(x_j) G_i(x_j)
    let mut products = vec![0.0; (m + 1) * nodes];
    let mut g = vec![0.0; m + 1];
    for (j, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::numerical(format!("right-hand side is {fx} at quadrature node x = {x:e}")));
        }
        jacobi_g_all(p, x, &mut g);
        for (i, gi) in g.iter().enumerate() {
            products[i * nodes + j] = w * fx * gi;
        }
    }
    Ok(products.chunks(nodes).map(pairwise_sum).collect())
}

/// Default quadrature order `max(2N, 128)`.
pub fn default_n_quad(n: usize) -> usize {
    (2 * n).max(128)
}

/// Expansion of `f` up to a maximal degree, shared by every truncation `N`.
#[derive(Clone)]
pub struct Expansion {
    /// the problem as solved; mirrored when `reflected`
    work: ProblemSpec,
    pub reflected: bool,
    pub params: SpectralParams,
    pub f_coeffs: Vec<f64>,
    pub n_quad: usize,
    /// `beta` of the caller's frame
    pub beta: f64,
    u_rules: Arc<[QuadratureRule; 2]>,
}

impl fmt::Debug for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Expansion")
            .field("reflected", &self.reflected)
            .field("params", &self.params)
            .field("n_quad", &self.n_quad)
            .field("len", &self.f_coeffs.len())
            .finish()
    }
}

impl Expansion {
    /// Expands `f` up to degree `m`, enough for any truncation `N <= m`.
    pub fn new(problem: &ProblemSpec, m: usize, n_quad: usize) -> Result<Self> {
        Self::with_scheme(problem, m, n_quad, Scheme::Graded)
    }

    pub fn with_scheme(problem: &ProblemSpec, m: usize, n_quad: usize, scheme: Scheme) -> Result<Self> {
        let (work, reflected, params) = working_frame(problem, m)?;
        let f_coeffs = compute_f_coeffs_with(&work, &params, m, n_quad, scheme)?;
        Self::finish(work, reflected, params, f_coeffs, n_quad)
    }

    /// Rebuilds an expansion from stored working-frame coefficients `f_0 ..= f_m`.
    pub fn from_coeffs(problem: &ProblemSpec, f_coeffs: Vec<f64>, n_quad: usize) -> Result<Self> {
        if f_coeffs.is_empty() {
            return Err(Error::Invalid("empty coefficient list".into()));
        }
        let (work, reflected, params) = working_frame(problem, f_coeffs.len() - 1)?;
        Self::finish(work, reflected, params, f_coeffs, n_quad)
    }

    fn finish(
        work: ProblemSpec,
        reflected: bool,
        params: SpectralParams,
        f_coeffs: Vec<f64>,
        n_quad: usize,
    ) -> Result<Self> {
        let u_rules = Arc::new([
            gauss_jacobi(n_quad, JacobiParams::new(0.0, params.beta - 1.0))?,
            gauss_jacobi(n_quad, JacobiParams::new(0.0, params.alpha - params.beta - 1.0))?,
        ]);
        let beta = if reflected { params.alpha - params.beta } else { params.beta };
        Ok(Expansion { work, reflected, params, f_coeffs, n_quad, beta, u_rules })
    }

    pub fn max_n(&self) -> usize {
        self.f_coeffs.len() - 1
    }

    /// Solution truncated at `N`.
    pub fn truncate(&self, n: usize) -> Result<SpectralSolution> {
        if n == 0 || n > self.max_n() {
            return Err(Error::domain(format!("truncation N = {n} outside 1..={}", self.max_n())));
        }
        let p = &self.params;
        let test = p.test();
        if p.lambda_minus1 == 0.0 {
            return Err(Error::domain("r = 1 (or r = 0 after mirroring) makes lambda_{-1} vanish"));
        }
        let c_minus1 = self.f_coeffs[0] / (p.lambda_minus1 * jacobi_norm_sq(0, test));
        let c: Vec<f64> = (0..n)
            .map(|i| self.f_coeffs[i + 1] / (p.lambdas[i] * jacobi_norm_sq(i + 1, test)))
            .collect();
        let c_minus2 = c_minus2_from(p, c_minus1, &c, &self.work.k, self.n_quad)?;
        let u_series = c.iter().enumerate().skip(1).map(|(i, ci)| ci / i as f64).collect();
        Ok(SpectralSolution {
            n,
            params: p.clone(),
            f_coeffs: self.f_coeffs[..=n].to_vec(),
            c_minus1,
            c,
            c_minus2,
            reflected: self.reflected,
            n_quad: self.n_quad,
            beta: self.beta,
            k: self.work.k.clone(),
            u_series,
            u_rules: self.u_rules.clone(),
        })
    }
}

fn working_frame(problem: &ProblemSpec, m: usize) -> Result<(ProblemSpec, bool, SpectralParams)> {
    problem.validate()?;
    let reflected = problem.r < 0.5;
    let work = if reflected { problem.reflected() } else { problem.clone() };
    let params = build_params(work.alpha, work.r, m)?;
    Ok((work, reflected, params))
}

/// Truncated spectral solution. Coefficients refer to the working frame,
/// which is the mirrored problem when `reflected` is set.
#[derive(Clone)]
pub struct SpectralSolution {
    pub n: usize,
    pub params: SpectralParams,
    pub f_coeffs: Vec<f64>,
    pub c_minus1: f64,
    pub c: Vec<f64>,
    pub c_minus2: f64,
    pub reflected: bool,
    pub n_quad: usize,
    beta: f64,
    k: Diffusivity,
    // c_i / i for i >= 1, the antiderivative series
    u_series: Vec<f64>,
    u_rules: Arc<[QuadratureRule; 2]>,
}

impl fmt::Debug for SpectralSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralSolution")
            .field("n", &self.n)
            .field("reflected", &self.reflected)
            .field("c_minus1", &self.c_minus1)
            .field("c_minus2", &self.c_minus2)
            .field("c", &self.c)
            .finish()
    }
}

impl SpectralSolution {
    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    /// `beta` in the caller's frame.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn diffusivity(&self) -> &Diffusivity {
        &self.k
    }

    /// `q_N(x)` for `0 < x < 1`.
    pub fn q_n(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::domain(format!("q_N is evaluated only inside (0, 1), got {x}")));
        }
        Ok(if self.reflected { -self.q_work(1.0 - x) } else { self.q_work(x) })
    }

    /// `u_N(x)` for `0 <= x <= 1`.
    pub fn u_n(&self, x: f64) -> Result<f64> {
        let y = self.frame(x)?;
        match self.k {
            Diffusivity::Constant(k0) => self.u_closed(y, k0),
            Diffusivity::Variable { .. } => self.u_quadrature_work(y),
        }
    }

    /// `u_N(x)` by per-point quadrature, whatever the diffusivity.
    pub fn u_n_quadrature(&self, x: f64) -> Result<f64> {
        let y = self.frame(x)?;
        self.u_quadrature_work(y)
    }

    fn frame(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(format!("u_N is defined on [0, 1], got {x}")));
        }
        Ok(if self.reflected { 1.0 - x } else { x })
    }

    fn q_work(&self, x: f64) -> f64 {
        let p = &self.params;
        let (a, b) = (p.alpha - p.beta, p.beta);
        let xb = x.powf(b);
        self.c_minus1 * xb * (1.0 - x).powf(a - 1.0) + (1.0 - x).powf(a) * xb * jacobi_series(&self.c, p.trial(), x)
    }

    fn u_closed(&self, x: f64, k0: f64) -> Result<f64> {
        if x == 0.0 || x == 1.0 {
            return Ok(0.0);
        }
        let p = &self.params;
        let (a, b) = (p.alpha - p.beta, p.beta);
        let plus = JacobiParams::new(a + 1.0, b + 1.0);
        let tail = plus.weight(x) * jacobi_series(&self.u_series, plus, x);
        let c0 = self.c[0];
        if x <= 0.5 {
            let s = self.c_minus2 * incomplete_beta(x, b, a)?
                + self.c_minus1 * incomplete_beta(x, b + 1.0, a)?
                + c0 * incomplete_beta(x, b + 1.0, a + 1.0)?;
            Ok(-(s - tail) / k0)
        } else {
            // integrate from the right end, using u_N(1) = 0
            let y = 1.0 - x;
            let s = self.c_minus2 * incomplete_beta(y, a, b)?
                + self.c_minus1 * incomplete_beta(y, a, b + 1.0)?
                + c0 * incomplete_beta(y, a + 1.0, b + 1.0)?;
            Ok((s + tail) / k0)
        }
    }

    fn u_quadrature_work(&self, x: f64) -> Result<f64> {
        if x == 0.0 || x == 1.0 {
            return Ok(0.0);
        }
        let p = &self.params;
        let (a, b) = (p.alpha - p.beta, p.beta);
        let trial = p.trial();
        let (cm2, cm1) = (self.c_minus2, self.c_minus1);
        if x <= 0.5 {
            // s = x t absorbs s^{beta-1}
            let v = integrate(&self.u_rules[0], |t| {
                let s = x * t;
                let om = 1.0 - s;
                (om.powf(a - 1.0) * (cm2 + cm1 * s) + om.powf(a) * s * jacobi_series(&self.c, trial, s))
                    / self.k.eval(s)
            })?;
            Ok(-x.powf(b) * v)
        } else {
            // s = 1 - h t absorbs (1-s)^{alpha-beta-1}
            let h = 1.0 - x;
            let v = integrate(&self.u_rules[1], |t| {
                let s = 1.0 - h * t;
                (s.powf(b - 1.0) * (cm2 + cm1 * s) + h * t * s.powf(b) * jacobi_series(&self.c, trial, s))
                    / self.k.eval(s)
            })?;
            Ok(h.powf(a) * v)
        }
    }
}

/// Solves `problem` at truncation `N`.
pub fn assemble(problem: &ProblemSpec, n: usize, n_quad: usize) -> Result<SpectralSolution> {
    Expansion::new(problem, n, n_quad)?.truncate(n)
}

pub fn eval_qn(sol: &SpectralSolution, x: f64) -> Result<f64> {
    sol.q_n(x)
}

pub fn eval_un(sol: &SpectralSolution, x: f64) -> Result<f64> {
    sol.u_n(x)
}

/// Recomputes `c_{-2} = -int q_N / K / int k / K` with rules of order `n_quad`.
pub fn compute_c_minus2(sol: &SpectralSolution, n_quad: usize) -> Result<f64> {
    c_minus2_from(&sol.params, sol.c_minus1, &sol.c, &sol.k, n_quad)
}

fn c_minus2_from(p: &SpectralParams, c_minus1: f64, c: &[f64], k: &Diffusivity, n_quad: usize) -> Result<f64> {
    let (num, den) = constraint_parts(p, c_minus1, c, k, n_quad)?;
    if den.abs() < 1e-300 {
        return Err(Error::numerical("degenerate kernel integral in the boundary constraint"));
    }
    Ok(-num / den)
}

// (int q_N / K, int k / K)
fn constraint_parts(p: &SpectralParams, c_minus1: f64, c: &[f64], k: &Diffusivity, n_quad: usize) -> Result<(f64, f64)> {
    let (a, b) = (p.alpha - p.beta, p.beta);
    let inv_k = |x: f64| 1.0 / k.eval(x);
    let den = integrate(&gauss_jacobi(n_quad, JacobiParams::new(a - 1.0, b - 1.0))?, inv_k)?;
    let mut num = 0.0;
    if c_minus1 != 0.0 {
        num += c_minus1 * integrate(&gauss_jacobi(n_quad, JacobiParams::new(a - 1.0, b))?, inv_k)?;
    }
    let trial = p.trial();
    num += integrate(&gauss_jacobi(n_quad, trial)?, |x| jacobi_series(c, trial, x) * inv_k(x))?;
    Ok((num, den))
}

/// `int_0^1 (c_{-2} k + q_N) / K`, which vanishes when `u_N(1) = 0`.
pub fn constraint_residual(sol: &SpectralSolution, n_quad: usize) -> Result<f64> {
    let (num, den) = constraint_parts(&sol.params, sol.c_minus1, &sol.c, &sol.k, n_quad)?;
    Ok(sol.c_minus2 * den + num)
}

/// Text cache of the expansion coefficients.
///
/// First line: `alpha r beta N n_quad` (caller's frame). Then one line
/// `i f_i c_{i-1}` for `i = 0..=N`; the third column holds the coefficient
/// produced from `f_i`, so `c_{-1}` sits on the row of `f_0`. Coefficients
/// refer to the working frame, which is mirrored when `r < 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientCache {
    pub alpha: f64,
    pub r: f64,
    pub beta: f64,
    pub n: usize,
    pub n_quad: usize,
    pub f: Vec<f64>,
    /// `c_{-1} ..= c_{N-1}`
    pub c: Vec<f64>,
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

impl CoefficientCache {
    pub fn from_solution(problem: &ProblemSpec, sol: &SpectralSolution) -> Self {
        let mut c = Vec::with_capacity(sol.n + 1);
        c.push(sol.c_minus1);
        c.extend_from_slice(&sol.c);
        CoefficientCache {
            alpha: problem.alpha,
            r: problem.r,
            beta: sol.beta(),
            n: sol.n,
            n_quad: sol.n_quad,
            f: sol.f_coeffs.clone(),
            c,
        }
    }

    /// True when the cache was produced for the same problem parameters
    /// and holds at least `n` coefficients.
    pub fn matches(&self, alpha: f64, r: f64, n_quad: usize, n: usize) -> bool {
        self.alpha == alpha && self.r == r && self.n_quad == n_quad && self.n >= n
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{} {} {} {} {}\n",
            fmt17(self.alpha),
            fmt17(self.r),
            fmt17(self.beta),
            self.n,
            self.n_quad
        );
        for i in 0..=self.n {
            s.push_str(&format!("{} {} {}\n", i, fmt17(self.f[i]), fmt17(self.c[i])));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, column: usize, message: String| Error::Parse { line, column, message };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| perr(1, 1, "empty coefficient cache".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 5 {
            return Err(perr(hl + 1, 1, "header must read `alpha r beta N n_quad`".into()));
        }
        let num = |s: &str, line: usize| -> Result<f64> {
            s.parse::<f64>().map_err(|e| perr(line, 1, format!("bad number `{s}`: {e}")))
        };
        let int = |s: &str, line: usize| -> Result<usize> {
            s.parse::<usize>().map_err(|e| perr(line, 1, format!("bad integer `{s}`: {e}")))
        };
        let (alpha, r, beta) = (num(h[0], hl + 1)?, num(h[1], hl + 1)?, num(h[2], hl + 1)?);
        let (n, n_quad) = (int(h[3], hl + 1)?, int(h[4], hl + 1)?);
        let mut f = Vec::with_capacity(n + 1);
        let mut c = Vec::with_capacity(n + 1);
        for (ln, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(perr(ln + 1, 1, "expected `i f_i c_{i-1}`".into()));
            }
            let i = int(parts[0], ln + 1)?;
            if i != f.len() {
                return Err(perr(ln + 1, 1, format!("expected index {}, found {i}", f.len())));
            }
            f.push(num(parts[1], ln + 1)?);
            c.push(num(parts[2], ln + 1)?);
        }
        if f.len() != n + 1 {
            return Err(perr(1, 1, format!("header announces N = {n} but {} rows follow", f.len())));
        }
        Ok(CoefficientCache { alpha, r, beta, n, n_quad, f, c })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}
