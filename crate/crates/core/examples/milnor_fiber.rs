//! Fiber counts and Euler characteristics of Milnor fibers.

use mixlink::linking::torus_model;
use mixlink::milnor::{milnor_report, sample_configuration, topology_enumeration};
use mixlink::orbit::defining_polynomial;
use mixlink::WeightSystem;

fn main() -> mixlink::Result<()> {
    let w = WeightSystem::new(2, 3)?;
    for r in 0..=1 {
        let f = defining_polynomial(&sample_configuration(w, 1, r), r)?;
        let rep = milnor_report(&f, w, r, 7)?;
        println!("d=1 r={r}: chi {} / {} (covering), fibers {}", rep.chi_paper, rep.chi_covering, rep.generic_fiber_count);
    }
    for d in 1..=3 {
        let rep = milnor_report(&torus_model(w, d)?, w, 0, 7)?;
        println!(
            "torus d={d}: axis fibers ({}, {}), chi {} / {}, agree {}",
            rep.axis1_fiber_count, rep.axis2_fiber_count, rep.chi_paper, rep.chi_covering, rep.agree
        );
    }
    for e in topology_enumeration(2, 1, w)? {
        println!("d=2 s=1 r={}: {} components, chi {}", e.r, e.components, e.chi_paper);
    }
    Ok(())
}
