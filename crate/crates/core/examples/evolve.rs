//! Integrate the linearized equation from random data and compare the
//! measured growth rate with the pencil eigenvalue.

use wavestab::evolve::{linearized_evolve, smooth_random_init};
use wavestab::{GridSpec, Model, StabilityProblem};

fn main() -> wavestab::Result<()> {
    for (c, t_end) in [(0.3, 60.0), (0.7, 200.0)] {
        let prob = StabilityProblem::with_defaults(Model::Boussinesq, c, 2.0, &GridSpec::new(128))?;
        let lambda0 = prob.pencil()?.find_unstable_lambda(c)?.map(|u| u.lambda0);
        let init = smooth_random_init(&prob.op.grid, 1, 2.0, 7);
        let traj = linearized_evolve(&prob.op, c, &init, None, t_end)?;
        println!("Boussinesq p=2 c={c}: {} RK4 steps of {:.4}", traj.times.len() - 1, traj.dt);
        println!("  fitted rate {:.6} (R^2 {:.6})", traj.fitted_rate, traj.fit_quality);
        match lambda0 {
            Some(l) => println!("  pencil lambda0 {l:.6}, relative difference {:.2e}", (traj.fitted_rate - l).abs() / l),
            None => println!("  pencil: stable, no exponential growth expected"),
        }
    }
    Ok(())
}
