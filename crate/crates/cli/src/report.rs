//! Text renderings of convergence studies and solutions.

use serde::Serialize;
use serde_json::value::RawValue;

use crate::{Convergence, Solution};

/// Three significant digits with a two-digit exponent, as in `5.22E-04`.
pub fn sci3(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.2E}");
    let (mant, exp) = s.split_once('E').expect("E in exponent format");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mant}E{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

fn full(v: f64) -> String {
    format!("{v:.16e}")
}

// 17 significant digits, `null` for non-finite values
fn num(v: f64) -> Box<RawValue> {
    let s = if v.is_finite() { full(v) } else { "null".to_string() };
    RawValue::from_string(s).expect("valid JSON number")
}

pub fn table_csv(c: &Convergence) -> String {
    let mut s = String::from("N,err_q,kappa_q,err_u,kappa_u,err_uinf,kappa_uinf\n");
    for (i, r) in c.reports.iter().enumerate() {
        let k = |v: &[f64]| if i == 0 { String::new() } else { format!("{:.2}", v[i - 1]) };
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            sci3(r.err_q),
            k(&c.rates.kappa_q),
            sci3(r.err_u),
            k(&c.rates.kappa_u),
            sci3(r.err_u_inf),
            k(&c.rates.kappa_u_inf)
        ));
    }
    match c.predicted() {
        // the solution-rate estimate assumes constant K
        Some(p) => {
            let star = if c.k_constant { "" } else { "*" };
            s.push_str(&format!("Pred.,,{:.2},,{:.2}{star},,{:.2}\n", p.q, p.u, p.u_inf));
        }
        None => s.push_str("Pred.,,,,,,\n"),
    }
    s
}

pub fn table_dat(c: &Convergence) -> String {
    let mut s = format!("# {} alpha={} r={} beta={}\n# N err_q err_u err_uinf\n", c.problem_name, c.alpha, c.r, c.beta);
    for r in &c.reports {
        s.push_str(&format!("{} {} {} {}\n", r.n, full(r.err_q), full(r.err_u), full(r.err_u_inf)));
    }
    s
}

#[derive(Serialize)]
struct Row {
    #[serde(rename = "N")]
    n: usize,
    err_q: Box<RawValue>,
    err_u: Box<RawValue>,
    err_u_inf: Box<RawValue>,
}

#[derive(Serialize)]
struct Predicted {
    j_max: Box<RawValue>,
    q: Box<RawValue>,
    u: Box<RawValue>,
    u_inf: Box<RawValue>,
    /// false when K varies: the solution-rate estimate needs constant K
    u_applies: bool,
    u_inf_note: &'static str,
}

#[derive(Serialize)]
struct Provenance {
    tool: &'static str,
    version: &'static str,
    determinism: &'static str,
}

#[derive(Serialize)]
struct Report {
    problem: String,
    alpha: Box<RawValue>,
    r: Box<RawValue>,
    beta: Box<RawValue>,
    k_constant: bool,
    n_quad: usize,
    error_quad: usize,
    grid: usize,
    rows: Vec<Row>,
    kappa_q: Vec<Box<RawValue>>,
    kappa_u: Vec<Box<RawValue>>,
    kappa_u_inf: Vec<Box<RawValue>>,
    predicted: Option<Predicted>,
    provenance: Provenance,
}

pub fn report_json(c: &Convergence) -> String {
    let ks = |v: &[f64]| v.iter().map(|&k| num(k)).collect();
    let report = Report {
        problem: c.problem_name.clone(),
        alpha: num(c.alpha),
        r: num(c.r),
        beta: num(c.beta),
        k_constant: c.k_constant,
        n_quad: c.n_quad,
        error_quad: c.error_quad,
        grid: c.grid,
        rows: c
            .reports
            .iter()
            .map(|r| Row { n: r.n, err_q: num(r.err_q), err_u: num(r.err_u), err_u_inf: num(r.err_u_inf) })
            .collect(),
        kappa_q: ks(&c.rates.kappa_q),
        kappa_u: ks(&c.rates.kappa_u),
        kappa_u_inf: ks(&c.rates.kappa_u_inf),
        predicted: c.predicted().map(|p| Predicted {
            j_max: num(p.j_max),
            q: num(p.q),
            u: num(p.u),
            u_inf: num(p.u_inf),
            u_applies: c.k_constant,
            u_inf_note: "the sup-norm estimate only guarantees the flux rate and is known to be suboptimal",
        }),
        provenance: Provenance {
            tool: "fracjac",
            version: env!("CARGO_PKG_VERSION"),
            determinism: "no random input; output depends only on the fields above",
        },
    };
    let mut s = serde_json::to_string_pretty(&report).expect("serializable report");
    s.push('\n');
    s
}

pub fn solution_csv(s: &Solution) -> String {
    let mut out = String::from("x,u_N,q_N\n");
    for ((x, u), q) in s.x.iter().zip(&s.u).zip(&s.q) {
        let q = q.map(full).unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", full(*x), full(*u), q));
    }
    out
}

pub fn solution_dat(s: &Solution) -> String {
    let mut out = format!("# {} N={}\n# x u_N\n", s.problem_name, s.n);
    for (x, u) in s.x.iter().zip(&s.u) {
        out.push_str(&format!("{} {}\n", full(*x), full(*u)));
    }
    out
}

#[derive(Serialize)]
struct SolutionJson {
    problem: String,
    #[serde(rename = "N")]
    n: usize,
    x: Vec<Box<RawValue>>,
    u_n: Vec<Box<RawValue>>,
    q_n: Vec<Option<Box<RawValue>>>,
}

pub fn solution_json(s: &Solution) -> String {
    let body = SolutionJson {
        problem: s.problem_name.clone(),
        n: s.n,
        x: s.x.iter().map(|&v| num(v)).collect(),
        u_n: s.u.iter().map(|&v| num(v)).collect(),
        q_n: s.q.iter().map(|q| q.map(num)).collect(),
    };
    let mut out = serde_json::to_string_pretty(&body).expect("serializable solution");
    out.push('\n');
    out
}
