//! Spectral assumptions for the linearized operator: one simple negative
//! eigenvalue, a one-dimensional kernel, and a nonzero translation pairing.

use wavestab::{GridSpec, Model, StabilityProblem};

fn main() -> wavestab::Result<()> {
    for (model, c, p, n) in [(Model::Boussinesq, 0.3, 3.0, 512), (Model::Kgz, 0.5, 3.0, 256), (Model::Beam, 1.0, 3.0, 512)] {
        let prob = StabilityProblem::with_defaults(model, c, p, &GridSpec::new(n))?;
        let r = &prob.report;
        let ev = &prob.spectrum.eigenvalues;
        println!("{} c={c} p={p} (dim {})", model.name(), ev.len());
        println!("  lowest eigenvalues: {:.6e} {:.6e} {:.6e} {:.6e}", ev[0], ev[1], ev[2], ev[3]);
        println!("  negative: {}  kernel: {}  A: {}  B: {}", r.n_negative, r.kernel_dim, r.assumption_a, r.assumption_b);
        println!("  delta^2 = {:.8}  sigma^2 = {:.8}  <phi', psi0> = {:.6}", r.delta_sq, r.sigma_sq, r.b_pairing);
    }
    Ok(())
}
