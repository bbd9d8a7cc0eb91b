use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::zeros::{common_projective_zero, ZeroSearch, ZeroWitness};
use super::AffineAutomorphism;
use crate::poly::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Regular,
    NotRegular,
    Undetermined,
}

impl std::fmt::Display for Regularity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regularity::Regular => "regular",
            Regularity::NotRegular => "not_regular",
            Regularity::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub verdict: Regularity,
    /// Chart-by-chart reasons the loci are disjoint, for a regular verdict.
    pub certificate: Vec<String>,
    /// A common indeterminacy point `[0 : x1 : ... : xn]`, for a
    /// not-regular verdict.
    pub witness: Option<ZeroWitness>,
    pub note: Option<String>,
    pub seed: u64,
}

/// Decides whether `Z(phi0)` and `Z(psi0)` are disjoint.
///
/// Both loci lie on the hyperplane at infinity, so the question is whether
/// the restrictions of the forward and inverse coordinates to `x0 = 0`
/// have a common projective zero. Exact for `n <= 3`; beyond that only a
/// seeded random search runs and the answer is either `NotRegular` with a
/// witness or `Undetermined`.
pub fn is_regular(map: &AffineAutomorphism, seed: u64) -> RegularityReport {
    let (phi, psi) = map.homogenize_pair();
    let forms: Vec<Polynomial> = phi
        .indeterminacy_locus()
        .forms()
        .iter()
        .chain(psi.indeterminacy_locus().forms())
        .cloned()
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RegularityReport {
        verdict: Regularity::Undetermined,
        certificate: vec![],
        witness: None,
        note: None,
        seed,
    };
    match common_projective_zero(&forms, &mut rng) {
        ZeroSearch::Empty { certificate } => {
            report.verdict = Regularity::Regular;
            report.certificate = certificate;
        }
        ZeroSearch::Found(mut w) => {
            report.verdict = Regularity::NotRegular;
            if let Some(p) = w.point.as_mut() {
                p.insert(0, num_traits::Zero::zero());
            }
            report.witness = Some(w);
        }
        ZeroSearch::Undetermined { reason } => report.note = Some(reason),
    }
    report
}
