//! Gauss linking numbers of orbit pairs.

use mixlink::linking::{expected_linking, orbit_linking};
use mixlink::{Complex64, OrientedOrbit, WeightSystem};

fn main() -> mixlink::Result<()> {
    let a = OrientedOrbit::positive(Complex64::new(0.3, 0.2));
    let b = OrientedOrbit::positive(Complex64::new(-0.4, 0.3));
    let c = OrientedOrbit::negative(Complex64::new(0.1, -0.6));
    for (p, q) in [(1, 1), (2, 3), (3, 5)] {
        let w = WeightSystem::new(p, q)?;
        for (x, y) in [(&a, &b), (&a, &c)] {
            let lk = orbit_linking(w, x, y, 512)?;
            println!(
                "P=({p},{q}) {:?}/{:?}: numeric {:.4} -> {} (expected {}, {} samples)",
                x.sign, y.sign, lk.numeric, lk.snapped, expected_linking(w, x, y), lk.samples
            );
        }
    }
    Ok(())
}
