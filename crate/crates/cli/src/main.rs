use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracjac_cli::report::sci3;
use fracjac_cli::{run_convergence, run_solve, CliError, CoefficientSource, RunArgs};

/// Jacobi spectral solver for two-sided fractional diffusion.
#[derive(Parser)]
#[command(name = "fracjac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error table and convergence rates over a list of truncations.
    Convergence(RunArgs),
    /// Tabulate u_N and q_N for one truncation.
    Solve {
        #[command(flatten)]
        args: RunArgs,
        /// number of grid intervals on [0, 1]
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Convergence(args) => {
            let cfg = args.into_config()?;
            let c = run_convergence(&cfg)?;
            if c.coefficients == CoefficientSource::Cache {
                eprintln!("coefficients read from cache");
            }
            println!("{} alpha={} r={:.6} beta={:.6}", c.problem_name, c.alpha, c.r, c.beta);
            println!("{:>4} {:>9} {:>6} {:>9} {:>6} {:>9} {:>6}", "N", "err_q", "k_q", "err_u", "k_u", "err_inf", "k_inf");
            for (i, r) in c.reports.iter().enumerate() {
                let k = |v: &[f64]| if i == 0 { String::new() } else { format!("{:.2}", v[i - 1]) };
                println!(
                    "{:>4} {:>9} {:>6} {:>9} {:>6} {:>9} {:>6}",
                    r.n,
                    sci3(r.err_q),
                    k(&c.rates.kappa_q),
                    sci3(r.err_u),
                    k(&c.rates.kappa_u),
                    sci3(r.err_u_inf),
                    k(&c.rates.kappa_u_inf)
                );
            }
            if let Some(p) = c.predicted() {
                let star = if c.k_constant { "" } else { "*" };
                println!("Pred. {:>16.2} {:>15.2}{star} {:>15.2}", p.q, p.u, p.u_inf);
            }
        }
        Command::Solve { args, points } => {
            let cfg = args.into_config()?;
            let s = run_solve(&cfg, points)?;
            let mid = s.x.len() / 2;
            println!("{} N={}: u_N({}) = {:.10e}", s.problem_name, s.n, s.x[mid], s.u[mid]);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
