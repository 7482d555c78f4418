//! Run configuration: command-line flags merged over an optional key=value file.

use std::path::{Path, PathBuf};

use clap::Args;
use fracjac::problems::{parse_key_values, RorBeta};

use crate::CliError;

/// Which problem to solve.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    /// Built-in example 1 or 2.
    Example { id: u8, alpha: f64, r_or_beta: RorBeta },
    /// Problem file; its own alpha and r (or beta) apply.
    Custom(PathBuf),
}

/// Output files to write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Emit {
    pub csv: bool,
    pub json: bool,
    pub dat: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Emit { csv: true, json: true, dat: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSource,
    pub n_list: Vec<usize>,
    /// quadrature order for `f_i`, `c_{-2}` and `u_N`
    pub n_quad: usize,
    /// nodes per half of the graded rule used by the error norms
    pub error_quad: usize,
    /// intervals of the sup-norm grid
    pub grid: usize,
    pub out_dir: PathBuf,
    pub emit: Emit,
    pub cache: Option<PathBuf>,
}

/// Flags shared by every subcommand. Unset flags fall back to `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// key = value file with the same keys as the long flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// built-in problem (1 or 2)
    #[arg(long)]
    pub example: Option<u8>,
    /// problem file
    #[arg(long)]
    pub problem: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// alternative to --r; r is solved for
    #[arg(long)]
    pub beta: Option<f64>,
    /// truncations: `30,32,34` or `30..38:2`
    #[arg(long = "N", value_name = "LIST")]
    pub n: Option<String>,
    /// quadrature order, at least max(2 max(N), max(N) + 16) (default max(2 max(N), 128))
    #[arg(long)]
    pub nquad: Option<usize>,
    /// intervals of the sup-norm grid (default 4096)
    #[arg(long)]
    pub grid: Option<usize>,
    /// output directory (default `.`)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// comma list of csv, json, dat (default csv,json)
    #[arg(long)]
    pub emit: Option<String>,
    /// coefficient cache file, read when it matches and written otherwise
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

const CONFIG_KEYS: [&str; 11] =
    ["example", "problem", "alpha", "r", "beta", "N", "nquad", "grid", "out", "emit", "cache"];

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| bad(format!("`{key}`: cannot parse `{v}`")))
}

impl RunArgs {
    /// Fills unset fields from the config file, resolving relative paths
    /// against the file's directory.
    pub fn merged(mut self) -> Result<RunArgs, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rel = |v: &str| {
            let p = PathBuf::from(v);
            if p.is_relative() { base.join(p) } else { p }
        };
        for kv in parse_key_values(&text).map_err(|e| bad(format!("{}: {e}", path.display())))? {
            let v = kv.value.as_str();
            let k = kv.key.as_str();
            match k {
                "example" => { self.example.get_or_insert(num(k, v)?); }
                "problem" => { self.problem.get_or_insert(rel(v)); }
                "alpha" => { self.alpha.get_or_insert(num(k, v)?); }
                "r" => { self.r.get_or_insert(num(k, v)?); }
                "beta" => { self.beta.get_or_insert(num(k, v)?); }
                "N" => { self.n.get_or_insert(v.to_string()); }
                "nquad" => { self.nquad.get_or_insert(num(k, v)?); }
                "grid" => { self.grid.get_or_insert(num(k, v)?); }
                "out" => { self.out.get_or_insert(rel(v)); }
                "emit" => { self.emit.get_or_insert(v.to_string()); }
                "cache" => { self.cache.get_or_insert(rel(v)); }
                _ => {
                    return Err(bad(format!(
                        "{}:{}: unknown key `{k}` (expected one of {})",
                        path.display(),
                        kv.line,
                        CONFIG_KEYS.join(", ")
                    )))
                }
            }
        }
        Ok(self)
    }

    pub fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let a = self.merged()?;
        let problem = match (a.example, &a.problem) {
            (Some(_), Some(_)) => return Err(bad("give either --example or --problem, not both")),
            (None, None) => return Err(bad("one of --example or --problem is required")),
            (None, Some(p)) => {
                if a.alpha.is_some() || a.r.is_some() || a.beta.is_some() {
                    return Err(bad("--alpha, --r and --beta come from the problem file with --problem"));
                }
                ProblemSource::Custom(p.clone())
            }
            (Some(id), None) => {
                if id != 1 && id != 2 {
                    return Err(bad(format!("--example must be 1 or 2, got {id}")));
                }
                let alpha = a.alpha.ok_or_else(|| bad("--alpha is required with --example"))?;
                if !(alpha > 1.0 && alpha < 2.0) {
                    return Err(bad(format!("alpha = {alpha} outside (1, 2)")));
                }
                let r_or_beta = match (a.r, a.beta) {
                    (Some(r), None) if r > 0.0 && r < 1.0 => RorBeta::R(r),
                    (Some(r), None) => return Err(bad(format!("r = {r} outside (0, 1)"))),
                    (None, Some(b)) if b > alpha - 1.0 && b < 1.0 => RorBeta::Beta(b),
                    (None, Some(b)) => return Err(bad(format!("beta = {b} outside (alpha - 1, 1)"))),
                    _ => return Err(bad("exactly one of --r and --beta is required")),
                };
                ProblemSource::Example { id, alpha, r_or_beta }
            }
        };
        let n_list = parse_n_list(a.n.as_deref().ok_or_else(|| bad("--N is required"))?)?;
        let max_n = *n_list.last().expect("nonempty");
        let n_quad = a.nquad.unwrap_or_else(|| fracjac::solver::default_n_quad(max_n));
        let least = (2 * max_n).max(max_n + 16);
        if n_quad < least {
            return Err(bad(format!("--nquad {n_quad} is below max(2 max(N), max(N) + 16) = {least}")));
        }
        if n_quad > fracjac::quadrature::MAX_ORDER {
            return Err(bad(format!("--nquad {n_quad} exceeds {}", fracjac::quadrature::MAX_ORDER)));
        }
        let grid = a.grid.unwrap_or(fracjac::analysis::DEFAULT_GRID);
        if grid == 0 {
            return Err(bad("--grid must be positive"));
        }
        Ok(ExperimentConfig {
            problem,
            n_list,
            n_quad,
            error_quad: fracjac::analysis::DEFAULT_ERROR_QUAD,
            grid,
            out_dir: a.out.unwrap_or_else(|| PathBuf::from(".")),
            emit: match a.emit {
                Some(s) => parse_emit(&s)?,
                None => Emit::default(),
            },
            cache: a.cache,
        })
    }
}

/// `30,32,34` or `a..b:step` with `b` included; nonempty and strictly increasing.
pub fn parse_n_list(s: &str) -> Result<Vec<usize>, CliError> {
    let s = s.trim();
    let list: Vec<usize> = if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, st)) => (b, num::<usize>("N", st)?),
            None => (rest, 1),
        };
        let (a, b) = (num::<usize>("N", a)?, num::<usize>("N", b)?);
        if step == 0 {
            return Err(bad("--N step must be positive"));
        }
        (a..=b).step_by(step).collect()
    } else {
        s.split(',').map(|p| num::<usize>("N", p)).collect::<Result<_, _>>()?
    };
    if list.is_empty() {
        return Err(bad(format!("--N `{s}` selects no truncation")));
    }
    if list[0] == 0 || list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad(format!("--N `{s}` must be positive and strictly increasing")));
    }
    Ok(list)
}

pub fn parse_emit(s: &str) -> Result<Emit, CliError> {
    let mut e = Emit { csv: false, json: false, dat: false };
    for part in s.split(',').map(str::trim) {
        match part {
            "csv" => e.csv = true,
            "json" => e.json = true,
            "dat" => e.dat = true,
            other => return Err(bad(format!("--emit: unknown format `{other}`"))),
        }
    }
    Ok(e)
}
