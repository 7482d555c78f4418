use fracjac::problems::{example1, example2};
use fracjac::quadrature::{gauss_jacobi, graded_rule, QuadratureRule};
use fracjac::solver::{r_from_beta, Expansion};
use fracjac::specfun::JacobiParams;
fn err(rule: &QuadratureRule, e: &dyn Fn(f64) -> f64) -> f64 {
    let p = rule.params;
    rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| { let v = e(x) / p.weight(x); w * v * v }).sum::<f64>().sqrt()
}
fn main() {
    let r1 = r_from_beta(1.6, 0.85).unwrap();
    for p in [example1(1.6, r1).unwrap(), example2(1.8, 0.5).unwrap()] {
        let ex = Expansion::new(&p, 40, 128).unwrap();
        for n in [30, 40] {
            let s = ex.truncate(n).unwrap();
            let (a, b) = (s.alpha(), s.beta());
            let q = p.exact_q.clone().unwrap();
            let u = p.exact_u.clone().unwrap();
            let eq = |x: f64| q(x) - s.q_n(x).unwrap();
            let eu = |x: f64| u(x) - s.u_n(x).unwrap();
            let pq = JacobiParams::new(a - b, b);
            let pu = JacobiParams::new(a - b + 1.0, b + 1.0);
            print!("{} N={n} q:", p.name);
            for m in [128, 256, 512] { print!(" {:.6e}", err(&gauss_jacobi(m, pq).unwrap(), &eq)); }
            for m in [128, 256] { print!(" g{:.6e}", err(&graded_rule(m, pq, 3).unwrap(), &eq)); }
            print!("\n   u:");
            for m in [128, 256, 512] { print!(" {:.6e}", err(&gauss_jacobi(m, pu).unwrap(), &eu)); }
            for m in [128, 256] { print!(" g{:.6e}", err(&graded_rule(m, pu, 3).unwrap(), &eu)); }
            println!();
        }
    }
}
