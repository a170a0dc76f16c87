//! Beam waves: the pencil index against the criterion built from the speed
//! derivative of the slope norm.

use wavestab::verify::{beam_closed_form_index, beam_dphi_norm};
use wavestab::{GridSpec, Model, SolverOpts, StabilityProblem};

fn main() -> wavestab::Result<()> {
    let grid = GridSpec::new(512);
    for c in [0.8, 1.0, 1.2] {
        let (nd, dnd) = beam_dphi_norm(c, 3.0, &grid, 1e-3, &SolverOpts::default())?;
        let t = beam_closed_form_index(c, nd, dnd)?;
        let v = StabilityProblem::with_defaults(Model::Beam, c, 3.0, &grid)?.verdict()?;
        // q = d_c|phi'| / (2c |phi'|), so finite thresholds satisfy omega*^2 = c T.
        let q_formula = dnd / (2.0 * c * nd);
        println!("c={c}: |phi'| {nd:.6}  d_c|phi'| {dnd:+.6}  T {t}  omega* {}  stable {}", v.omega_star, v.stable);
        println!("      q from pencil {:+.6e}, from the norm derivative {q_formula:+.6e}", v.q_index);
    }
    Ok(())
}
