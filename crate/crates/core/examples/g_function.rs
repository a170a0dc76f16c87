//! The scalar function G(omega, lambda) whose positive root is the unstable
//! eigenvalue, and its Laurent behaviour near lambda = 0.

use wavestab::pencil::{log_space, sign_changes};
use wavestab::{GridSpec, Model, StabilityProblem};

fn main() -> wavestab::Result<()> {
    let prob = StabilityProblem::with_defaults(Model::Boussinesq, 0.3, 2.0, &GridSpec::new(256))?;
    let pencil = prob.pencil()?;
    let w_star = pencil.stability_index()?.omega_star_periodic;
    let lambdas = log_space(1e-3, 1e2, 11);
    for omega in [0.3, 0.7] {
        let g = pencil.g_trace(omega, &lambdas)?;
        println!("omega = {omega}: sign changes {}", sign_changes(&g).len());
        for (l, v) in lambdas.iter().zip(&g) {
            println!("  lambda {l:>9.3e}  G {v:>13.6e}");
        }
        println!("  limit 1/(4 omega^2) = {:.6}", 1.0 / (4.0 * omega * omega));
    }
    println!("D_-2 changes sign at omega* = {w_star:.6}:");
    for f in [0.9, 1.0, 1.1] {
        let lc = pencil.laurent_coeffs(f * w_star);
        println!("  omega = {:.6}  D_-2 = {:>12.4e}  D_-1 = {:.1e}", f * w_star, lc.d_minus2, lc.d_minus1);
    }
    Ok(())
}
