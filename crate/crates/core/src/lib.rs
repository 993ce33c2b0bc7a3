//! Links in S³ of strongly polar weighted homogeneous mixed polynomials.
//!
//! The crate builds defining polynomials for oriented configurations of
//! orbits of the circle action `ρ ∘ (z1, z2) = (ρ^p z1, ρ^q z2)`, solves them
//! back numerically, traces the degeneration locus of the model family
//! `−2 z2^{2p} z̄2^p + z1^{2q} z̄1^q + t z2^{2p} z̄1^q`, certifies smooth pair
//! eliminations, and computes Milnor-fiber Euler characteristics and linking
//! numbers with independent numeric checks.

pub mod cli;
pub mod degeneration;
pub mod error;
pub mod io;
pub mod linking;
pub mod milnor;
pub mod mixed_poly;
pub mod orbit;
pub mod planar;
pub mod slice;

pub use error::{Error, Result};
pub use mixed_poly::{DegreeReport, MixedPolynomial, MixedTerm, Point, WeightSystem};
pub use num_complex::Complex64;
pub use orbit::{LinkConfiguration, OrbitId, OrientedOrbit, Sign};
pub use planar::SolverOptions;
pub use slice::{solve_link, LinkReport};
