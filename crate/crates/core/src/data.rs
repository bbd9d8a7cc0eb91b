//! Bundled inputs: the degree-2 Henon map of `A^3` with its resolution
//! tables, plus two small maps used in examples and tests.

use crate::divisor::ResolutionDatum;
use crate::dynamics::{AffineAutomorphism, MapDefinition};

pub const HENON3_MAP: &str = include_str!("../data/henon3.map");
pub const HENON3_FORWARD: &str = include_str!("../data/henon3_forward.json");
pub const HENON3_INVERSE: &str = include_str!("../data/henon3_inverse.json");
pub const IDENTITY3_MAP: &str = include_str!("../data/identity3.map");
pub const TRIANGULAR2_MAP: &str = include_str!("../data/triangular2.map");

pub fn henon3() -> AffineAutomorphism {
    MapDefinition::parse(HENON3_MAP)
        .and_then(|d| d.to_automorphism())
        .expect("bundled map verifies")
}

/// Forward and inverse resolution tables.
pub fn henon3_resolutions() -> (ResolutionDatum, ResolutionDatum) {
    (
        ResolutionDatum::from_json(HENON3_FORWARD).expect("bundled datum parses"),
        ResolutionDatum::from_json(HENON3_INVERSE).expect("bundled datum parses"),
    )
}
