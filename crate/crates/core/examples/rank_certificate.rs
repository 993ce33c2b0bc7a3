//! Smoothness certificate of the total space at the fold orbit.

use std::f64::consts::{PI, SQRT_2};

use mixlink::degeneration::{model_family, rank_check};
use mixlink::{Complex64, WeightSystem};

fn main() -> mixlink::Result<()> {
    for (p, q) in [(1, 1), (2, 3), (3, 5)] {
        let w = WeightSystem::new(p, q)?;
        let z = [Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, PI / p as f64)];
        let rep = rank_check(&model_family(w), z, Complex64::new(-3.0, 0.0), SQRT_2)?;
        println!("P = ({p},{q}): rank {} singular values {:?}", rep.rank, rep.singular_values);
    }
    Ok(())
}
