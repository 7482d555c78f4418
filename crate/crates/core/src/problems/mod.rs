//! Built-in benchmark problems and user-defined problem files.

pub mod expr;

use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::solver::{beta_from_r, r_from_beta, Diffusivity, ProblemSpec, RealFn, Source};
use crate::specfun::{gamma, hyp2f1};

pub use expr::{Env, Expr};

/// Which problem a run refers to.
#[derive(Debug, Clone, PartialEq)]
pub enum ExampleId {
    Example1,
    Example2,
    Custom(String),
}

/// `r` or `beta`, whichever the user supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RorBeta {
    R(f64),
    Beta(f64),
}

impl RorBeta {
    pub fn r(self, alpha: f64) -> Result<f64> {
        match self {
            RorBeta::R(r) => Ok(r),
            RorBeta::Beta(b) => r_from_beta(alpha, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleConfig {
    pub example: ExampleId,
    pub alpha: f64,
    pub r_or_beta: RorBeta,
}

impl ExampleConfig {
    pub fn build(&self) -> Result<ProblemSpec> {
        match &self.example {
            ExampleId::Example1 => example1(self.alpha, self.r_or_beta.r(self.alpha)?),
            ExampleId::Example2 => example2(self.alpha, self.r_or_beta.r(self.alpha)?),
            ExampleId::Custom(path) => load_custom(Path::new(path)),
        }
    }
}

fn check_alpha_r(alpha: f64, r: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::Invalid(format!("alpha = {alpha} outside (1, 2)")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Invalid(format!("r = {r} outside [0, 1]")));
    }
    Ok(())
}

/// `K = 1`, exact flux `q = -6x + 6x^2`.
pub fn example1(alpha: f64, r: f64) -> Result<ProblemSpec> {
    check_alpha_r(alpha, r)?;
    let beta = beta_from_r(alpha, r)?;
    let delta = alpha.powi(3) - 9.0 * alpha.powi(2) + 26.0 * alpha - 24.0;
    let g = gamma(2.0 - alpha)?;
    let c1 = 2.0 * alpha - 8.0;
    let c2 = (alpha - 3.0) * (alpha - 4.0);
    let left = 6.0 * r / (g * delta);
    let right = 6.0 * (1.0 - r) / (g * delta);
    let f: RealFn = Arc::new(move |x: f64| {
        let y = 1.0 - x;
        left * (c1 * x.powf(3.0 - alpha) + c2 * x.powf(2.0 - alpha))
            + right * (-c1 * y.powf(3.0 - alpha) - c2 * y.powf(2.0 - alpha))
    });
    let a = 1.0 - alpha + beta;
    let f_one = hyp2f1(a, beta, beta + 1.0, 1.0)?;
    let exact_u: RealFn = Arc::new(move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let h = hyp2f1(a, beta, beta + 1.0, x.min(1.0)).unwrap_or(f64::NAN);
        3.0 * x * x - 2.0 * x * x * x - x.powf(beta) * h / f_one
    });
    let exact_q: RealFn = Arc::new(|x: f64| -6.0 * x + 6.0 * x * x);
    Ok(ProblemSpec {
        name: "example1".into(),
        alpha,
        r,
        k: Diffusivity::Constant(1.0),
        f: Source::Function(f),
        exact_u: Some(exact_u),
        exact_q: Some(exact_q),
        singular_power: Some(2.0 - alpha),
    })
}

/// `K = 1 + x^2`, exact solution `u = x^2 (1 - x)^2`.
pub fn example2(alpha: f64, r: f64) -> Result<ProblemSpec> {
    check_alpha_r(alpha, r)?;
    let g: Vec<f64> = (3..=7).map(|k| gamma(k as f64 - alpha)).collect::<Result<_>>()?;
    // g[k-3] = Gamma(k - alpha)
    let (g3, g4, g5, g6, g7) = (g[0], g[1], g[2], g[3], g[4]);
    let f: RealFn = Arc::new(move |x: f64| {
        let y = 1.0 - x;
        let p = |z: f64, e: f64| z.powf(e - alpha);
        r * (-480.0 * p(x, 6.0) / g7 + 144.0 * p(x, 5.0) / g6 - 36.0 * p(x, 4.0) / g5 + 12.0 * p(x, 3.0) / g4
            - 2.0 * p(x, 2.0) / g3)
            - (1.0 - r)
                * (480.0 * p(y, 6.0) / g7 - 336.0 * p(y, 5.0) / g6 + 132.0 * p(y, 4.0) / g5 - 32.0 * p(y, 3.0) / g4
                    + 4.0 * p(y, 2.0) / g3)
    });
    let exact_u: RealFn = Arc::new(|x: f64| x * x * (1.0 - x) * (1.0 - x));
    let exact_q: RealFn = Arc::new(|x: f64| -2.0 * (1.0 + x * x) * x * (1.0 - x) * (1.0 - 2.0 * x));
    Ok(ProblemSpec {
        name: "example2".into(),
        alpha,
        r,
        k: Diffusivity::Variable { func: Arc::new(|x: f64| 1.0 + x * x), min: 1.0, max: 2.0 },
        f: Source::Function(f),
        exact_u: Some(exact_u),
        exact_q: Some(exact_q),
        singular_power: Some(2.0 - alpha),
    })
}

/// One `key = value` line of a problem or configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyValue {
    pub key: String,
    pub value: String,
    pub line: usize,
    /// 1-based column of the first character of `value`
    pub column: usize,
}

/// Splits `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<KeyValue>> {
    let mut out: Vec<KeyValue> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let eq = content.find('=').ok_or_else(|| Error::Parse {
            line,
            column: content.len() - content.trim_start().len() + 1,
            message: "expected `key = value`".into(),
        })?;
        let key = content[..eq].trim();
        if key.is_empty() {
            return Err(Error::Parse { line, column: 1, message: "missing key before `=`".into() });
        }
        let after = &content[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        let value = after.trim();
        let column = content[..eq + 1 + lead].chars().count() + 1;
        if value.is_empty() {
            return Err(Error::Parse { line, column, message: format!("missing value for `{key}`") });
        }
        if let Some(prev) = out.iter().find(|kv| kv.key == key) {
            return Err(Error::Parse {
                line,
                column: 1,
                message: format!("duplicate key `{key}` (first set on line {})", prev.line),
            });
        }
        out.push(KeyValue { key: key.to_string(), value: value.to_string(), line, column });
    }
    Ok(out)
}

const PROBLEM_KEYS: [&str; 10] =
    ["name", "alpha", "r", "beta", "K", "f", "exact_u", "exact_q", "f_coeffs_path", "singular_power"];

const SCREEN_POINTS: usize = 1001;

fn constant(kv: &KeyValue) -> Result<f64> {
    let e = Expr::parse_at(&kv.value, kv.line, kv.column)?;
    if e.depends_on_x() {
        return Err(Error::Parse { line: kv.line, column: kv.column, message: format!("`{}` must not depend on x", kv.key) });
    }
    let v = e.eval(0.0, &Env { alpha: f64::NAN, beta: f64::NAN, r: f64::NAN });
    if !v.is_finite() {
        return Err(Error::Parse {
            line: kv.line,
            column: kv.column,
            message: format!("`{}` must be a finite number (it may not refer to other parameters)", kv.key),
        });
    }
    Ok(v)
}

fn bind(e: Expr, env: Env) -> RealFn {
    Arc::new(move |x| e.eval(x, &env))
}

/// Reads a problem file; the format is described in the workspace README.
pub fn load_custom(path: &Path) -> Result<ProblemSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_custom(&text, path.parent())
}

/// Parses problem-file text; `base` resolves a relative `f_coeffs_path`.
pub fn parse_custom(text: &str, base: Option<&Path>) -> Result<ProblemSpec> {
    let kvs = parse_key_values(text)?;
    for kv in &kvs {
        if !PROBLEM_KEYS.contains(&kv.key.as_str()) {
            return Err(Error::Parse { line: kv.line, column: 1, message: format!("unknown key `{}`", kv.key) });
        }
    }
    let get = |k: &str| kvs.iter().find(|kv| kv.key == k);
    let alpha = constant(get("alpha").ok_or_else(|| Error::Invalid("missing key `alpha`".into()))?)?;
    let r = match (get("r"), get("beta")) {
        (Some(r), None) => constant(r)?,
        (None, Some(b)) => r_from_beta(alpha, constant(b)?)?,
        _ => return Err(Error::Invalid("exactly one of `r` and `beta` is required".into())),
    };
    check_alpha_r(alpha, r)?;
    let beta = beta_from_r(alpha, r)?;
    let env = Env { alpha, beta, r };

    let kv = get("K").ok_or_else(|| Error::Invalid("missing key `K`".into()))?;
    let k_expr = Expr::parse_at(&kv.value, kv.line, kv.column)?;
    let k = if k_expr.depends_on_x() {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..SCREEN_POINTS {
            let x = i as f64 / (SCREEN_POINTS - 1) as f64;
            let v = k_expr.eval(x, &env);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Invalid(format!("K(x) = {v} at x = {x} is not positive")));
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Diffusivity::Variable { func: bind(k_expr, env), min: lo, max: hi }
    } else {
        let v = k_expr.eval(0.0, &env);
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Invalid(format!("constant K = {v} is not positive")));
        }
        Diffusivity::Constant(v)
    };

    let f = match (get("f"), get("f_coeffs_path")) {
        (Some(kv), None) => Source::Function(bind(Expr::parse_at(&kv.value, kv.line, kv.column)?, env)),
        (None, Some(kv)) => {
            let p = Path::new(&kv.value);
            let full = match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p.to_path_buf(),
            };
            let text = std::fs::read_to_string(&full).map_err(|e| Error::io(&full, e))?;
            Source::Coefficients(parse_coefficient_table(&text)?)
        }
        _ => return Err(Error::Invalid("exactly one of `f` and `f_coeffs_path` is required".into())),
    };
    let opt = |k: &str| -> Result<Option<RealFn>> {
        match get(k) {
            Some(kv) => Ok(Some(bind(Expr::parse_at(&kv.value, kv.line, kv.column)?, env))),
            None => Ok(None),
        }
    };
    Ok(ProblemSpec {
        name: get("name").map(|kv| kv.value.clone()).unwrap_or_else(|| "custom".into()),
        alpha,
        r,
        k,
        f,
        exact_u: opt("exact_u")?,
        exact_q: opt("exact_q")?,
        singular_power: get("singular_power").map(constant).transpose()?,
    })
}

/// Lines `i f_i` with consecutive indices from 0.
pub fn parse_coefficient_table(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parts: Vec<&str> = content.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse { line, column: 1, message: "expected `i f_i`".into() });
        }
        let i: usize = parts[0]
            .parse()
            .map_err(|_| Error::Parse { line, column: 1, message: format!("bad index `{}`", parts[0]) })?;
        if i != out.len() {
            return Err(Error::Parse { line, column: 1, message: format!("expected index {}, found {i}", out.len()) });
        }
        let v: f64 = parts[1].parse().map_err(|_| Error::Parse {
            line,
            column: raw.find(parts[1]).unwrap_or(0) + 1,
            message: format!("bad coefficient `{}`", parts[1]),
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Invalid("coefficient table is empty".into()));
    }
    Ok(out)
}
