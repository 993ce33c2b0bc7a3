//! Builds the defining polynomial of an oriented orbit configuration.

use mixlink::io::text::parse_orbits;
use mixlink::orbit::{defining_polynomial, validate_config};
use mixlink::{LinkConfiguration, WeightSystem};

fn main() -> mixlink::Result<()> {
    let w = WeightSystem::new(2, 3)?;
    let orbits = parse_orbits("0.3+0.2i:+,-0.4:+,0.1-0.5i:-")?;
    let config = LinkConfiguration::new(w, orbits);
    let report = validate_config(&config, 0.05);
    println!("d = {}, r = {}, violations: {}", config.d(), config.r(), report.violations.len());
    let f = defining_polynomial(&config, config.r())?;
    println!("{} terms", f.terms().len());
    println!("{}", serde_json::to_string_pretty(&f.degree_report(w)?).unwrap());
    Ok(())
}
