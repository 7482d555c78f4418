//! Weighted error norms, experimental convergence rates and predicted rates.

use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, Scheme};
use crate::solver::{Diffusivity, ProblemSpec, SpectralSolution};
use crate::specfun::{jacobi_norm_sq, JacobiParams};

pub const DEFAULT_ERROR_QUAD: usize = 256;
pub const DEFAULT_GRID: usize = 4096;

/// Errors of one truncation level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    /// `||q - q_N||` weighted by `rho^{(-(alpha-beta), -beta)}`
    pub err_q: f64,
    /// `||u - u_N||` weighted by `rho^{(-(alpha-beta+1), -(beta+1))}`
    pub err_u: f64,
    /// max `|u - u_N|` on the uniform grid
    pub err_u_inf: f64,
}

/// Rates expected from the regularity of `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedRates {
    pub j_max: f64,
    pub q: f64,
    pub u: f64,
    /// the coarse sup-norm bound only guarantees the flux rate
    pub u_inf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub kappa_q: Vec<f64>,
    pub kappa_u: Vec<f64>,
    pub kappa_u_inf: Vec<f64>,
    pub predicted: Option<PredictedRates>,
}

// sqrt( int rho^{p} (e / rho^{p})^2 )
fn weighted_error<E: Fn(f64) -> Result<f64>>(p: JacobiParams, n_quad: usize, scheme: Scheme, err: E) -> Result<f64> {
    let rule = scheme.rule(n_quad, p)?;
    let mut terms = Vec::with_capacity(rule.order());
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let e = err(x)? / p.weight(x);
        if !e.is_finite() {
            return Err(Error::numerical(format!("error integrand is {e} at x = {x:e}")));
        }
        terms.push(w * e * e);
    }
    Ok(pairwise_sum(&terms).sqrt())
}

/// Flux error on the graded rule with `n_quad` nodes per half.
pub fn weighted_q_error(sol: &SpectralSolution, problem: &ProblemSpec, n_quad: usize) -> Result<f64> {
    weighted_q_error_with(sol, problem, n_quad, Scheme::Graded)
}

pub fn weighted_q_error_with(sol: &SpectralSolution, problem: &ProblemSpec, n_quad: usize, scheme: Scheme) -> Result<f64> {
    let q = problem.exact_q.as_ref().ok_or_else(|| Error::Precondition("problem has no exact flux".into()))?;
    let (alpha, beta) = (sol.alpha(), sol.beta());
    weighted_error(JacobiParams::new(alpha - beta, beta), n_quad, scheme, |x| Ok(q(x) - sol.q_n(x)?))
}

pub fn weighted_u_error(sol: &SpectralSolution, problem: &ProblemSpec, n_quad: usize) -> Result<f64> {
    weighted_u_error_with(sol, problem, n_quad, Scheme::Graded)
}

pub fn weighted_u_error_with(sol: &SpectralSolution, problem: &ProblemSpec, n_quad: usize, scheme: Scheme) -> Result<f64> {
    let u = problem.exact_u.as_ref().ok_or_else(|| Error::Precondition("problem has no exact solution".into()))?;
    let (alpha, beta) = (sol.alpha(), sol.beta());
    weighted_error(JacobiParams::new(alpha - beta + 1.0, beta + 1.0), n_quad, scheme, |x| Ok(u(x) - sol.u_n(x)?))
}

/// Max `|u - u_N|` over `grid + 1` equispaced points of `[0, 1]`.
pub fn linf_u_error(sol: &SpectralSolution, problem: &ProblemSpec, grid: usize) -> Result<f64> {
    let u = problem.exact_u.as_ref().ok_or_else(|| Error::Precondition("problem has no exact solution".into()))?;
    if grid == 0 {
        return Err(Error::domain("grid must have at least one interval"));
    }
    let mut worst: f64 = 0.0;
    for i in 0..=grid {
        let x = i as f64 / grid as f64;
        let e = (u(x) - sol.u_n(x)?).abs();
        if !e.is_finite() {
            return Err(Error::numerical(format!("u error is {e} at x = {x}")));
        }
        worst = worst.max(e);
    }
    Ok(worst)
}

pub fn error_report(sol: &SpectralSolution, problem: &ProblemSpec, n_quad: usize, grid: usize) -> Result<ErrorReport> {
    Ok(ErrorReport {
        n: sol.n,
        err_q: weighted_q_error(sol, problem, n_quad)?,
        err_u: weighted_u_error(sol, problem, n_quad)?,
        err_u_inf: linf_u_error(sol, problem, grid)?,
    })
}

/// `kappa = log(e_1 / e_2) / log(N_2 / N_1)` for each adjacent pair.
pub fn convergence_rate(errors: &[f64], ns: &[usize]) -> Result<Vec<f64>> {
    if errors.len() != ns.len() {
        return Err(Error::domain("errors and N values differ in length"));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(Error::domain(format!("convergence rate needs positive errors, got {e}")));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("N values must increase strictly"));
    }
    Ok(errors
        .windows(2)
        .zip(ns.windows(2))
        .map(|(e, n)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect())
}

/// `j = singular_power + 2 - beta`; flux rate `alpha - 1 + j`, solution rate `alpha + j`.
pub fn predicted_rates(alpha: f64, beta: f64, singular_power: f64) -> Option<PredictedRates> {
    let j_max = singular_power + 2.0 - beta;
    if !(j_max > 0.0) {
        return None;
    }
    let q = alpha - 1.0 + j_max;
    Some(PredictedRates { j_max, q, u: alpha + j_max, u_inf: q })
}

pub fn rate_report(reports: &[ErrorReport], predicted: Option<PredictedRates>) -> Result<RateReport> {
    let ns: Vec<usize> = reports.iter().map(|r| r.n).collect();
    let col = |f: fn(&ErrorReport) -> f64| reports.iter().map(f).collect::<Vec<f64>>();
    Ok(RateReport {
        kappa_q: convergence_rate(&col(|r| r.err_q), &ns)?,
        kappa_u: convergence_rate(&col(|r| r.err_u), &ns)?,
        kappa_u_inf: convergence_rate(&col(|r| r.err_u_inf), &ns)?,
        predicted,
    })
}

/// `sqrt( sum_{i=N}^{M-1} c_i^2 |||G_i^{(alpha-beta,beta)}|||^2 )` from a reference
/// solution truncated at `M`: the exact flux error of truncation `N < M`
/// up to the tail beyond `M`.
pub fn parseval_q_tail(reference: &SpectralSolution, n: usize) -> f64 {
    let trial = reference.params.trial();
    let terms: Vec<f64> = (n..reference.c.len()).map(|i| reference.c[i].powi(2) * jacobi_norm_sq(i, trial)).collect();
    pairwise_sum(&terms).sqrt()
}

/// Solution-error analogue of [`parseval_q_tail`]; needs constant `K`.
pub fn parseval_u_tail(reference: &SpectralSolution, n: usize) -> Result<f64> {
    let k0 = match reference.diffusivity() {
        Diffusivity::Constant(k) => *k,
        Diffusivity::Variable { .. } => {
            return Err(Error::Precondition("the solution Parseval tail needs a constant diffusivity".into()))
        }
    };
    let p = reference.params.trial();
    let plus = JacobiParams::new(p.a + 1.0, p.b + 1.0);
    let terms: Vec<f64> = (n.max(1)..reference.c.len())
        .map(|i| (reference.c[i] / i as f64).powi(2) * jacobi_norm_sq(i - 1, plus))
        .collect();
    Ok(pairwise_sum(&terms).sqrt() / k0)
}
