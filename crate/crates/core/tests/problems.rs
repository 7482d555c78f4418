use fracjac::problems::{example1, example2, load_custom, parse_custom};
use fracjac::quadrature::{apply_n_with, gauss_jacobi, ApplyOptions};
use fracjac::solver::{beta_from_r, Diffusivity, ProblemSpec, Source};
use fracjac::specfun::{gamma, JacobiParams};
use fracjac::Error;

const CONFIGS: [(f64, f64); 3] = [(1.6, 0.39), (1.4, 0.5), (1.8, 0.5)];

fn f_of(p: &ProblemSpec) -> &(dyn Fn(f64) -> f64 + Send + Sync) {
    match &p.f {
        Source::Function(f) => f.as_ref(),
        Source::Coefficients(_) => panic!("expected a function source"),
    }
}

// the transcribed right-hand sides must equal the operator applied to the exact flux
#[test]
fn examples_consistent_with_operator() {
    let opts = ApplyOptions { exponent_at_zero: 1.0, exponent_at_one: 1.0, ..ApplyOptions::default() };
    for (alpha, r) in CONFIGS {
        for p in [example1(alpha, r).unwrap(), example2(alpha, r).unwrap()] {
            let q = p.exact_q.clone().unwrap();
            for x in [0.3, 0.5, 0.7] {
                let got = apply_n_with(alpha, r, |s| q(s), x, &opts).unwrap();
                let want = f_of(&p)(x);
                // f vanishes at x = 1/2 when r = 1/2
                assert!((got - want).abs() <= 1e-3 * want.abs().max(1.0), "{} alpha={alpha} r={r} x={x}: {got} vs {want}", p.name);
            }
        }
    }
}

// u(x) = -int_0^x (c_{-2} k + q) / K with c_{-2} fixed by u(1) = 0
#[test]
fn exact_u_closes_the_loop() {
    for (alpha, r) in CONFIGS {
        for p in [example1(alpha, r).unwrap(), example2(alpha, r).unwrap()] {
            let beta = beta_from_r(alpha, r).unwrap();
            let q = p.exact_q.clone().unwrap();
            // s = x t; the kernel part absorbs s^{beta-1} into the rule
            let kern = |x: f64, g: &dyn Fn(f64) -> f64| -> f64 {
                let rule = gauss_jacobi(96, JacobiParams::new(0.0, beta - 1.0)).unwrap();
                x.powf(beta) * rule.integrate(|t| (1.0 - x * t).powf(alpha - beta - 1.0) * g(x * t)).unwrap()
            };
            let plain = |x: f64, g: &dyn Fn(f64) -> f64| -> f64 {
                let rule = gauss_jacobi(64, JacobiParams::new(0.0, 0.0)).unwrap();
                x * rule.integrate(|t| g(x * t)).unwrap()
            };
            let inv_k = |s: f64| 1.0 / p.k.eval(s);
            let full = gauss_jacobi(96, JacobiParams::new(alpha - beta - 1.0, beta - 1.0)).unwrap();
            let den = full.integrate(inv_k).unwrap();
            let num = plain(1.0, &|s| q(s) * inv_k(s));
            let cm2 = -num / den;
            let u = p.exact_u.clone().unwrap();
            for m in 1..=9 {
                let x = m as f64 / 10.0;
                let v = -(cm2 * kern(x, &inv_k) + plain(x, &|s| q(s) * inv_k(s)));
                assert!((v - u(x)).abs() <= 1e-8, "{} alpha={alpha} r={r} x={x}: {v} vs {}", p.name, u(x));
            }
        }
    }
}

#[test]
fn example_values() {
    let p = example1(1.6, 0.39).unwrap();
    let (u, q) = (p.exact_u.clone().unwrap(), p.exact_q.clone().unwrap());
    assert!(u(0.0).abs() < 1e-15 && u(1.0).abs() < 1e-14);
    assert_eq!(q(0.5), -1.5);
    let delta: f64 = 1.6f64.powi(3) - 9.0 * 1.6f64.powi(2) + 26.0 * 1.6 - 24.0;
    assert!((delta + 1.344).abs() < 1e-12);

    let p = example2(1.6, 0.39).unwrap();
    let (u, q) = (p.exact_u.clone().unwrap(), p.exact_q.clone().unwrap());
    assert_eq!(u(0.5), 1.0 / 16.0);
    assert_eq!(q(0.5), 0.0);
    let x: f64 = 0.3;
    let du = 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
    assert!((-(1.0 + x * x) * du - q(x)).abs() < 1e-15);
    assert!(matches!(p.k, Diffusivity::Variable { min, max, .. } if min == 1.0 && max == 2.0));
}

#[test]
fn custom_file_reproduces_example2() {
    let (alpha, r) = (1.6, 0.39);
    let g = |k: f64| 1.0 / gamma(k - alpha).unwrap();
    let (g3, g4, g5, g6, g7) = (g(3.0), g(4.0), g(5.0), g(6.0), g(7.0));
    let text = format!(
        "# Example 2 written out by hand\n\
         alpha = {alpha:.17e}\n\
         r = {r:.17e}\n\
         K = 1 + x^2\n\
         f = r*(-480*x^(6-alpha)*{g7:.17e} + 144*x^(5-alpha)*{g6:.17e} - 36*x^(4-alpha)*{g5:.17e} \
         + 12*x^(3-alpha)*{g4:.17e} - 2*x^(2-alpha)*{g3:.17e}) \
         - (1-r)*(480*(1-x)^(6-alpha)*{g7:.17e} - 336*(1-x)^(5-alpha)*{g6:.17e} + 132*(1-x)^(4-alpha)*{g5:.17e} \
         - 32*(1-x)^(3-alpha)*{g4:.17e} + 4*(1-x)^(2-alpha)*{g3:.17e})\n\
         exact_u = x^2*(1-x)^2\n"
    );
    let dir = std::env::temp_dir().join(format!("fracjac-custom-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ex2.problem");
    std::fs::write(&path, text).unwrap();
    let custom = load_custom(&path).unwrap();
    let builtin = example2(alpha, r).unwrap();
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..10 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let x = (state >> 11) as f64 / (1u64 << 53) as f64;
        let (a, b) = (f_of(&custom)(x), f_of(&builtin)(x));
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "x={x}: {a} vs {b}");
        assert_eq!(custom.k.eval(x), builtin.k.eval(x));
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn custom_minimal_and_rejections() {
    let p = parse_custom("alpha = 1.5\nr = 0.5\nK = 1\nf = 1\n", None).unwrap();
    assert!(matches!(p.k, Diffusivity::Constant(k) if k == 1.0));
    assert_eq!(f_of(&p)(0.37), 1.0);

    let e = parse_custom("alpha = 1.5\nr = 0.5\nK = x - 0.5\nf = 1\n", None).unwrap_err();
    assert!(matches!(e, Error::Invalid(_)), "{e:?}");
    let e = parse_custom("alpha = 1.5\nr = 0.5\nbeta = 0.75\nK = 1\nf = 1\n", None).unwrap_err();
    assert!(matches!(e, Error::Invalid(_)));
    let e = parse_custom("alpha = 1.5\nr = 0.5\nK = 1\n", None).unwrap_err();
    assert!(matches!(e, Error::Invalid(_)));
    let e = parse_custom("alpha = 1.5\nr = 0.5\nK = 1\nf = 2 * (x +\n", None).unwrap_err();
    assert!(matches!(e, Error::Parse { line: 4, .. }), "{e:?}");
}
