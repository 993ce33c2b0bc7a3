//! Traces the degeneration curve, classifies a few parameters, and writes an SVG.
//!
//! `cargo run --example sigma_locus -- sigma.svg`

use mixlink::degeneration::{classify_region, solve_chart, trace_sigma};
use mixlink::io::svg::sigma_svg;
use mixlink::{Complex64, SolverOptions};

fn main() -> mixlink::Result<()> {
    let curve = trace_sigma(1024)?;
    let opts = SolverOptions::default();
    for t in [Complex64::new(0.0, 0.0), Complex64::new(4.0, 0.0), Complex64::new(-3.0, 0.0), Complex64::new(1.0, 2.0)] {
        let roots = solve_chart(t, &opts)?;
        println!("t = {t}: {:?}, {} chart roots", classify_region(t, &curve, 1e-2), roots.len());
    }
    let svg = sigma_svg(&curve)?;
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(&path, svg).map_err(|e| mixlink::Error::Io(e.to_string()))?,
        None => println!("{} bytes of SVG", svg.len()),
    }
    Ok(())
}
