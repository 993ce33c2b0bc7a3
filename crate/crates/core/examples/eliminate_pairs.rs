//! Removes negative orbits by successive certified pair eliminations.

use mixlink::degeneration::positivize;
use mixlink::io::text::parse_orbits;
use mixlink::{LinkConfiguration, SolverOptions, WeightSystem};

fn main() -> mixlink::Result<()> {
    let w = WeightSystem::new(2, 3)?;
    let config = LinkConfiguration::new(w, parse_orbits("0.3+0.3i:+,-0.4+0.25i:+,0.55-0.35i:+,-0.1-0.5i:-")?);
    println!("start: {} positive, {} negative", config.n_pos(), config.n_neg());
    for (k, step) in positivize(&config, &SolverOptions::default())?.iter().enumerate() {
        let ev = step.sweep.events.first();
        println!(
            "step {k}: event at t* = {:?}, rank {}, rest clearance {:.3e}, now {} positive / {} negative",
            ev.map(|e| e.t_star),
            step.certificate.rank,
            step.rest_min_modulus,
            step.final_report.n_pos,
            step.final_report.n_neg
        );
    }
    Ok(())
}
