//! Convergence studies and single solves for the `fracjac` command.

pub mod config;
pub mod report;

use std::path::{Path, PathBuf};

use fracjac::analysis::{error_report, predicted_rates, rate_report, ErrorReport, PredictedRates, RateReport};
use fracjac::problems::{example1, example2, load_custom};
use fracjac::solver::{beta_from_r, CoefficientCache, Expansion, ProblemSpec, SpectralSolution};
use rayon::prelude::*;

pub use config::{Emit, ExperimentConfig, ProblemSource, RunArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{stage}: {source}")]
    Core {
        stage: &'static str,
        #[source]
        source: fracjac::Error,
    },
    #[error("i/o on {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    /// 2 configuration, 3 numerical failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Core { source, .. } => match source {
                fracjac::Error::Parse { .. } | fracjac::Error::Invalid(_) => 2,
                fracjac::Error::Io { .. } => 4,
                _ => 3,
            },
        }
    }
}

fn at(stage: &'static str) -> impl Fn(fracjac::Error) -> CliError {
    move |source| CliError::Core { stage, source }
}

pub fn build_problem(source: &ProblemSource) -> Result<ProblemSpec, CliError> {
    let stage = at("problem");
    match source {
        ProblemSource::Example { id, alpha, r_or_beta } => {
            let r = r_or_beta.r(*alpha).map_err(&stage)?;
            if *id == 1 { example1(*alpha, r) } else { example2(*alpha, r) }.map_err(stage)
        }
        ProblemSource::Custom(path) => load_custom(path).map_err(stage),
    }
}

/// Where the expansion coefficients came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientSource {
    Computed,
    Cache,
}

/// Expands `f` up to `max_n`, going through the cache file when one is configured.
pub fn expansion(
    problem: &ProblemSpec,
    max_n: usize,
    n_quad: usize,
    cache: Option<&Path>,
) -> Result<(Expansion, CoefficientSource), CliError> {
    if let Some(path) = cache.filter(|p| p.exists()) {
        let c = CoefficientCache::read(path).map_err(at("cache"))?;
        if c.matches(problem.alpha, problem.r, n_quad, max_n) {
            let e = Expansion::from_coeffs(problem, c.f[..=max_n].to_vec(), n_quad).map_err(at("cache"))?;
            return Ok((e, CoefficientSource::Cache));
        }
    }
    let e = Expansion::new(problem, max_n, n_quad).map_err(at("expansion"))?;
    if let Some(path) = cache {
        let sol = e.truncate(max_n).map_err(at("assemble"))?;
        write_atomic(path, CoefficientCache::from_solution(problem, &sol).render().as_bytes())?;
    }
    Ok((e, CoefficientSource::Computed))
}

/// Everything a convergence study produces.
#[derive(Debug, Clone)]
pub struct Convergence {
    pub problem_name: String,
    pub alpha: f64,
    pub r: f64,
    pub beta: f64,
    pub k_constant: bool,
    pub n_quad: usize,
    pub error_quad: usize,
    pub grid: usize,
    pub reports: Vec<ErrorReport>,
    pub rates: RateReport,
    pub coefficients: CoefficientSource,
}

impl Convergence {
    pub fn predicted(&self) -> Option<PredictedRates> {
        self.rates.predicted
    }
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Convergence, CliError> {
    let problem = build_problem(&cfg.problem)?;
    if problem.exact_q.is_none() || problem.exact_u.is_none() {
        return Err(CliError::Config(format!("{}: convergence needs exact_u and exact_q", problem.name)));
    }
    let max_n = *cfg.n_list.last().ok_or_else(|| CliError::Config("empty N list".into()))?;
    let (exp, source) = expansion(&problem, max_n, cfg.n_quad, cfg.cache.as_deref())?;
    let reports = cfg
        .n_list
        .par_iter()
        .map(|&n| {
            let sol = exp.truncate(n).map_err(at("assemble"))?;
            error_report(&sol, &problem, cfg.error_quad, cfg.grid).map_err(at("errors"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let beta = beta_from_r(problem.alpha, problem.r).map_err(at("problem"))?;
    let predicted = problem.singular_power.and_then(|s| predicted_rates(problem.alpha, beta, s));
    let rates = rate_report(&reports, predicted).map_err(at("rates"))?;
    let conv = Convergence {
        problem_name: problem.name.clone(),
        alpha: problem.alpha,
        r: problem.r,
        beta,
        k_constant: problem.k.is_constant(),
        n_quad: cfg.n_quad,
        error_quad: cfg.error_quad,
        grid: cfg.grid,
        reports,
        rates,
        coefficients: source,
    };
    write_outputs(&cfg.out_dir, &[
        (cfg.emit.csv, "table.csv", report::table_csv(&conv)),
        (cfg.emit.json, "report.json", report::report_json(&conv)),
        (cfg.emit.dat, "table.dat", report::table_dat(&conv)),
    ])?;
    Ok(conv)
}

/// `u_N` and `q_N` on a uniform grid.
#[derive(Debug, Clone)]
pub struct Solution {
    pub problem_name: String,
    pub n: usize,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    /// `None` at the endpoints
    pub q: Vec<Option<f64>>,
}

pub fn run_solve(cfg: &ExperimentConfig, intervals: usize) -> Result<Solution, CliError> {
    if cfg.n_list.len() != 1 {
        return Err(CliError::Config("solve takes exactly one N".into()));
    }
    if intervals == 0 {
        return Err(CliError::Config("--points must be positive".into()));
    }
    let n = cfg.n_list[0];
    let problem = build_problem(&cfg.problem)?;
    let (exp, _) = expansion(&problem, n, cfg.n_quad, cfg.cache.as_deref())?;
    let sol = exp.truncate(n).map_err(at("assemble"))?;
    let x: Vec<f64> = (0..=intervals).map(|i| i as f64 / intervals as f64).collect();
    let (u, q) = evaluate(&sol, &x)?;
    let s = Solution { problem_name: problem.name, n, x, u, q };
    write_outputs(&cfg.out_dir, &[
        (cfg.emit.csv, "solution.csv", report::solution_csv(&s)),
        (cfg.emit.json, "solution.json", report::solution_json(&s)),
        (cfg.emit.dat, "solution.dat", report::solution_dat(&s)),
    ])?;
    Ok(s)
}

type Columns = (Vec<f64>, Vec<Option<f64>>);

fn evaluate(sol: &SpectralSolution, x: &[f64]) -> Result<Columns, CliError> {
    let rows = x
        .par_iter()
        .map(|&x| {
            let u = sol.u_n(x)?;
            let q = if x > 0.0 && x < 1.0 { Some(sol.q_n(x)?) } else { None };
            Ok((u, q))
        })
        .collect::<fracjac::Result<Vec<_>>>()
        .map_err(at("evaluate"))?;
    Ok(rows.into_iter().unzip())
}

fn write_outputs(dir: &Path, files: &[(bool, &str, String)]) -> Result<(), CliError> {
    if files.iter().any(|f| f.0) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    for (on, name, body) in files {
        if *on {
            write_atomic(&dir.join(name), body.as_bytes())?;
        }
    }
    Ok(())
}

// write to a sibling temporary, then rename
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp = PathBuf::from(path);
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    tmp.set_file_name(format!(".{name}.tmp"));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    std::fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}
