//! Degree report and equivariance check for a text-format polynomial.
//!
//! `cargo run --example analyze_polynomial -- "z1^3*zb1 - z2^2*zb2" 2,3`

use mixlink::io::text::parse_poly;
use mixlink::mixed_poly::verify_equivariance;
use mixlink::WeightSystem;

fn main() -> mixlink::Result<()> {
    let mut args = std::env::args().skip(1);
    let expr = args.next().unwrap_or_else(|| "z1^6*zb1^3 - 2*z2^4*zb2^2".into());
    let (p, q) = args
        .next()
        .and_then(|s| s.split_once(',').map(|(a, b)| (a.parse().ok(), b.parse().ok())))
        .and_then(|(a, b)| a.zip(b))
        .unwrap_or((2, 3));
    let w = WeightSystem::new(p, q)?;
    let f = parse_poly(&expr)?;
    let rep = f.degree_report(w)?;
    println!("f = {f}");
    println!("weights {w}");
    println!("{}", serde_json::to_string_pretty(&rep).unwrap());
    println!("equivariance residual {:.2e}", verify_equivariance(&f, w, 200, 1)?);
    Ok(())
}
