//! Sample the solitary waves of the three model equations and report
//! amplitude, solver residual and tail size.

use wavestab::profiles::make_profile;
use wavestab::{make_grid, Model, SolverOpts};

fn main() -> wavestab::Result<()> {
    let cases = [(Model::Boussinesq, 0.3, 2.0), (Model::Boussinesq, 0.3, 5.0), (Model::Kgz, 0.5, 3.0), (Model::Beam, 1.0, 3.0)];
    println!("{:<11} {:>5} {:>4} {:>8} {:>10} {:>10} {:>10}", "model", "c", "p", "L", "max phi", "residual", "tail");
    for (model, c, p) in cases {
        let grid = make_grid(model.default_half_length(c), 512)?;
        let prof = make_profile(model, c, p, &grid, &SolverOpts::default())?;
        let tail = prof.values[0].abs() / prof.amplitude();
        println!(
            "{:<11} {c:>5} {p:>4} {:>8.2} {:>10.6} {:>10.2e} {:>10.2e}",
            model.name(),
            grid.half_length(),
            prof.amplitude(),
            prof.residual,
            tail
        );
    }
    Ok(())
}
