//! Sweeps the model family across the fold at `t = −3`.

use mixlink::degeneration::{linear_path, sweep};
use mixlink::{Complex64, SolverOptions, WeightSystem};

fn main() -> mixlink::Result<()> {
    let w = WeightSystem::new(2, 3)?;
    let path = linear_path(Complex64::new(-3.5, 0.0), Complex64::new(-2.5, 0.0), 40);
    let res = sweep(w, &path, &SolverOptions::default())?;
    println!("counts along the path: {:?}", res.counts);
    for ev in &res.events {
        println!(
            "{:?} at t* = {:.8}, collision u = {:.6}, roots {:?}, certificate rank {}",
            ev.kind, ev.t_star, ev.collision_point, ev.merging_roots, ev.certificate.rank
        );
    }
    Ok(())
}
