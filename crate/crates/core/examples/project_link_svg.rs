//! Stereographic picture of the link of the model family at `t = 4`.
//!
//! `cargo run --example project_link_svg -- link.svg`

use mixlink::degeneration::family_poly;
use mixlink::io::svg::link_svg;
use mixlink::linking::project_link;
use mixlink::{solve_link, Complex64, SolverOptions, WeightSystem};

fn main() -> mixlink::Result<()> {
    let w = WeightSystem::new(2, 3)?;
    let rep = solve_link(&family_poly(w, Complex64::new(4.0, 0.0)), w, &SolverOptions::default())?;
    let config = rep.to_configuration()?;
    let (pole, components) = project_link(w, &config.orbits, 256)?;
    println!("{} components, pole {:?}", components.len(), pole);
    let svg = link_svg(&components)?;
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(&path, svg).map_err(|e| mixlink::Error::Io(e.to_string()))?,
        None => println!("{} bytes of SVG", svg.len()),
    }
    Ok(())
}
