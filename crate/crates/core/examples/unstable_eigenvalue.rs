//! Locate the unstable eigenvalue from the root of G and confirm it with a
//! full eigensolve of the first-order companion matrix.

use wavestab::pencil::companion::default_re_tol;
use wavestab::pencil::{companion_spectrum, CompanionSummary};
use wavestab::{GridSpec, Model, StabilityProblem};

fn main() -> wavestab::Result<()> {
    for (model, c, p) in [(Model::Boussinesq, 0.3, 2.0), (Model::Kgz, 0.5, 3.0), (Model::Boussinesq, 0.7, 2.0)] {
        let prob = StabilityProblem::with_defaults(model, c, p, &GridSpec::new(256))?;
        let v = prob.verdict()?;
        let eigs = companion_spectrum(&prob.op, c)?;
        let summary = CompanionSummary::new(&eigs, default_re_tol(&prob.op));
        println!("{} c={c} p={p}: stable = {}", model.name(), v.stable);
        match (v.lambda0, summary.lambda0()) {
            (Some(l0), Some(z)) => {
                println!("  root of G:  lambda0 = {l0:.10}  pencil residual {:.1e}", v.pencil_residual.unwrap_or(f64::NAN));
                println!("  companion:  lambda0 = {:.10}  mirror distance {:.1e}", z.re, summary.mirror_distance(z));
            }
            _ => println!("  no unstable eigenvalue; companion max |Re| = {:.1e} (tol {:.1e})", summary.max_abs_re, summary.tol),
        }
    }
    Ok(())
}
