//! Number of link components of the model family along the real axis.

use mixlink::degeneration::family_poly;
use mixlink::{solve_link, Complex64, SolverOptions, WeightSystem};

fn main() -> mixlink::Result<()> {
    let w = WeightSystem::new(2, 3)?;
    let opts = SolverOptions::default();
    for t in [-4.0, -3.5, -3.0, -2.5, 0.0, 2.0, 4.0] {
        let rep = solve_link(&family_poly(w, Complex64::new(t, 0.0)), w, &opts)?;
        let charts: Vec<String> = rep
            .solutions
            .iter()
            .map(|s| format!("{:.4}{:+.4}i (deg {}, mult {})", s.u_chart.re, s.u_chart.im, s.degree, s.multiplicity))
            .collect();
        println!("t = {t:>5}: {} components  [{}]", rep.components(), charts.join(", "));
    }
    Ok(())
}
