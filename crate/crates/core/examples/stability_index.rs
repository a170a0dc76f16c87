//! The index omega* against its closed forms, and the resulting verdict at omega = |c|.

use wavestab::verify::{boussinesq_closed_form_index, kgz_closed_form_index};
use wavestab::{GridSpec, Model, StabilityProblem};

fn main() -> wavestab::Result<()> {
    println!("{:<11} {:>4} {:>4} {:>12} {:>12} {:>12}  verdict", "model", "c", "p", "q", "omega*", "closed form");
    let mut cases: Vec<(Model, f64, f64)> = Vec::new();
    for p in [2.0, 3.0, 4.0, 5.0] {
        cases.extend([0.3, 0.6].map(|c| (Model::Boussinesq, c, p)));
    }
    cases.extend([0.0, 0.5, 0.8].map(|c| (Model::Kgz, c, 3.0)));
    for (model, c, p) in cases {
        let n = if model == Model::Kgz && c < 0.7 { 256 } else { 512 };
        let prob = StabilityProblem::with_defaults(model, c, p, &GridSpec::new(n))?;
        let ix = prob.pencil()?.stability_index()?;
        let closed = match model {
            Model::Kgz => kgz_closed_form_index(c)?,
            _ => boussinesq_closed_form_index(c, p)?,
        };
        let verdict = if c >= ix.omega_star { "stable" } else { "unstable" };
        println!("{:<11} {c:>4} {p:>4} {:>12.8} {:>12.8} {:>12.8}  {verdict}", model.name(), ix.q_index, ix.omega_star, closed);
    }
    Ok(())
}
