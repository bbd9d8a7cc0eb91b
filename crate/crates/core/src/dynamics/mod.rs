//! Affine automorphisms of `A^n` over the rationals.
//!
//! An [`AffineAutomorphism`] is a pair `(f, f^-1)` whose compositions have
//! been checked symbolically to be the identity. From it we derive the
//! projective extensions `phi0 = (x0^d, F_1, ..., F_n)` and
//! `psi0 = (x0^e, G_1, ..., G_n)`, their indeterminacy loci on the
//! hyperplane at infinity, and exact forward/backward orbits.
//!
//! Projective coordinates are always `[x0 : x1 : ... : xn]` with `x0` the
//! coordinate cutting out the hyperplane at infinity.

mod mapfile;
mod orbit;
mod regularity;
mod zeros;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{PolyError, Polynomial};

pub use mapfile::{MapDefinition, MapFileError};
pub use orbit::{detect_cycle, orbit, BitBudget, CycleResult, OrbitError};
pub use regularity::{is_regular, Regularity, RegularityReport};
pub use zeros::{common_projective_zero, ZeroSearch, ZeroWitness};

/// An exact point of affine space.
pub type AffinePoint = Vec<BigRational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Inverse => "inverse",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("coordinate {index} of the {which} lives in {got} variables, expected {expected}")]
    CoordinateArity {
        which: &'static str,
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("a coordinate of the {which} is constant; the map cannot be an automorphism")]
    ConstantMap { which: &'static str },
    #[error("{composition} is not the identity: coordinate {coordinate} has residual {residual}")]
    NotInverse {
        composition: &'static str,
        coordinate: usize,
        residual: String,
    },
    #[error("homogenized coordinates share the factor x0")]
    CommonFactor,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A verified pair `(f, f^-1)` of polynomial maps `A^n -> A^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineAutomorphism {
    forward: Vec<Polynomial>,
    inverse: Vec<Polynomial>,
    degree: u32,
    inverse_degree: u32,
    integral: bool,
}

impl AffineAutomorphism {
    /// Builds the pair and checks `f^-1 o f = id` and `f o f^-1 = id`
    /// symbolically. Construction is the verification.
    pub fn new(forward: Vec<Polynomial>, inverse: Vec<Polynomial>) -> Result<Self, DynamicsError> {
        let n = forward.len();
        if inverse.len() != n {
            return Err(DynamicsError::Dimension {
                expected: n,
                got: inverse.len(),
            });
        }
        for (which, coords) in [("forward map", &forward), ("inverse map", &inverse)] {
            for (index, p) in coords.iter().enumerate() {
                if p.nvars() != n {
                    return Err(DynamicsError::CoordinateArity {
                        which,
                        index,
                        got: p.nvars(),
                        expected: n,
                    });
                }
            }
        }
        check_identity(&inverse, &forward, "inverse o forward")?;
        check_identity(&forward, &inverse, "forward o inverse")?;
        let degree = map_degree(&forward).ok_or(DynamicsError::ConstantMap {
            which: "forward map",
        })?;
        let inverse_degree = map_degree(&inverse).ok_or(DynamicsError::ConstantMap {
            which: "inverse map",
        })?;
        let integral = forward
            .iter()
            .chain(&inverse)
            .all(|p| p.terms().all(|(_, c)| c.is_integer()));
        Ok(AffineAutomorphism {
            forward,
            inverse,
            degree,
            inverse_degree,
            integral,
        })
    }

    /// The identity of `A^n`.
    pub fn identity(n: usize) -> Self {
        let coords: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
        Self::new(coords.clone(), coords).expect("identity is an automorphism")
    }

    /// The Henon map `(x1, ..., xn) -> (x2, x3 + x2^2, ..., xn + x_{n-1}^2, x1 + xn^2)`
    /// with its inverse, for `n >= 2`.
    pub fn henon(n: usize) -> Self {
        assert!(n >= 2, "Henon maps need at least two variables");
        let x = |i: usize| Polynomial::var(n, i);
        let mut forward = vec![x(1)];
        for i in 1..n - 1 {
            forward.push(&x(i + 1) + &x(i).pow(2));
        }
        forward.push(&x(0) + &x(n - 1).pow(2));
        // x2 = y1, x_{i+1} = y_i - x_i^2, and finally x1 = yn - xn^2.
        let mut prev = vec![Polynomial::zero(n); n];
        prev[1] = x(0);
        for i in 1..n - 1 {
            prev[i + 1] = &x(i) - &prev[i].pow(2);
        }
        prev[0] = &x(n - 1) - &prev[n - 1].pow(2);
        Self::new(forward, prev).expect("Henon inverse is exact")
    }

    pub fn dimension(&self) -> usize {
        self.forward.len()
    }

    pub fn forward(&self) -> &[Polynomial] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Polynomial] {
        &self.inverse
    }

    pub fn coordinates(&self, direction: Direction) -> &[Polynomial] {
        match direction {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        }
    }

    /// `deg f`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `deg f^-1`.
    pub fn inverse_degree(&self) -> u32 {
        self.inverse_degree
    }

    pub fn degree_of(&self, direction: Direction) -> u32 {
        match direction {
            Direction::Forward => self.degree,
            Direction::Inverse => self.inverse_degree,
        }
    }

    /// The pair with the roles of `f` and `f^-1` exchanged.
    pub fn inverted(&self) -> Self {
        AffineAutomorphism {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
            degree: self.inverse_degree,
            inverse_degree: self.degree,
            integral: self.integral,
        }
    }

    /// Exact image of `point` under `f` or `f^-1`.
    pub fn apply(
        &self,
        point: &[BigRational],
        direction: Direction,
    ) -> Result<AffinePoint, DynamicsError> {
        if point.len() != self.dimension() {
            return Err(DynamicsError::Dimension {
                expected: self.dimension(),
                got: point.len(),
            });
        }
        let coords = self.coordinates(direction);
        if self.integral && point.iter().all(|c| c.is_integer()) {
            let ints: Vec<BigInt> = point.iter().map(|c| c.to_integer()).collect();
            return Ok(coords
                .iter()
                .map(|p| {
                    BigRational::from_integer(p.evaluate_integer(&ints).expect("integral map"))
                })
                .collect());
        }
        coords
            .iter()
            .map(|p| p.evaluate(point).map_err(DynamicsError::from))
            .collect()
    }

    /// `phi0` and `psi0`, the projective extensions of `f` and `f^-1`.
    pub fn homogenize_pair(&self) -> (HomogenizedMap, HomogenizedMap) {
        (
            HomogenizedMap::from_affine(&self.forward).expect("verified forward map"),
            HomogenizedMap::from_affine(&self.inverse).expect("verified inverse map"),
        )
    }
}

fn map_degree(coords: &[Polynomial]) -> Option<u32> {
    coords
        .iter()
        .filter_map(|p| p.total_degree().ok())
        .max()
        .filter(|&d| d >= 1)
}

fn check_identity(
    outer: &[Polynomial],
    inner: &[Polynomial],
    composition: &'static str,
) -> Result<(), DynamicsError> {
    let n = inner.len();
    for (i, p) in outer.iter().enumerate() {
        let composed = p.compose(inner)?;
        let residual = &composed - &Polynomial::var(n, i);
        if !residual.is_zero() {
            return Err(DynamicsError::NotInverse {
                composition,
                coordinate: i,
                residual: residual.to_string(),
            });
        }
    }
    Ok(())
}

/// A rational map `P^n --> P^n` given by `n + 1` homogeneous coordinates of
/// one common degree, with first coordinate `x0^degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogenizedMap {
    coords: Vec<Polynomial>,
    degree: u32,
}

impl HomogenizedMap {
    /// Homogenizes affine coordinates `(F_1, ..., F_n)` to
    /// `(x0^d, F~_1, ..., F~_n)` with `d` the largest coordinate degree.
    pub fn from_affine(coords: &[Polynomial]) -> Result<Self, DynamicsError> {
        let n = coords.len();
        let degree = map_degree(coords).ok_or(DynamicsError::ConstantMap { which: "map" })?;
        let mut exps = vec![0; n + 1];
        exps[0] = degree;
        let mut out = vec![Polynomial::term(exps, BigRational::from_integer(1.into()))];
        for p in coords {
            if p.nvars() != n {
                return Err(DynamicsError::Dimension {
                    expected: n,
                    got: p.nvars(),
                });
            }
            out.push(p.homogenize(degree)?);
        }
        // A common factor must divide x0^d, so it suffices that some
        // coordinate has a term free of x0.
        let x0_free = out[1..]
            .iter()
            .any(|p| p.terms().any(|(m, _)| m.exponent(0) == 0));
        if !x0_free {
            return Err(DynamicsError::CommonFactor);
        }
        Ok(HomogenizedMap {
            coords: out,
            degree,
        })
    }

    pub fn coords(&self) -> &[Polynomial] {
        &self.coords
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Dimension `n` of the projective space.
    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    /// Evaluates all coordinates at an integer homogeneous vector.
    pub fn evaluate_integer(&self, point: &[BigInt]) -> Option<Vec<BigInt>> {
        self.coords
            .iter()
            .map(|p| p.evaluate_integer(point))
            .collect()
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<Vec<BigRational>, PolyError> {
        self.coords.iter().map(|p| p.evaluate(point)).collect()
    }

    /// Restriction of the coordinates to the hyperplane `x0 = 0`.
    pub fn indeterminacy_locus(&self) -> IndeterminacyLocus {
        let zero = BigRational::zero();
        let forms = self.coords[1..]
            .iter()
            .map(|p| {
                p.specialize(0, &zero)
                    .remove_var(0)
                    .expect("x0 was specialized away")
            })
            .collect();
        IndeterminacyLocus { forms }
    }
}

/// The indeterminacy locus `Z(phi)` of a homogenized affine map.
///
/// Since the first coordinate is `x0^d`, every indeterminacy point lies on
/// `x0 = 0`; there the locus is cut out by `forms`, the degree-`d` parts of
/// the affine coordinates (zero for coordinates of lower degree). Points are
/// given in the coordinates `[x1 : ... : xn]` of that hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndeterminacyLocus {
    forms: Vec<Polynomial>,
}

impl IndeterminacyLocus {
    pub fn forms(&self) -> &[Polynomial] {
        &self.forms
    }

    /// Whether the point `[x1 : ... : xn]` at infinity is indeterminate.
    pub fn contains(&self, point: &[BigRational]) -> bool {
        !point.iter().all(Zero::is_zero)
            && self
                .forms
                .iter()
                .all(|p| p.evaluate(point).map(|v| v.is_zero()).unwrap_or(false))
    }

    /// Decides emptiness (exactly for `n <= 3`).
    pub fn search(&self, seed: u64) -> ZeroSearch {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        common_projective_zero(&self.forms, &mut rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{integer, parse_polynomial};

    fn polys(src: &[&str]) -> Vec<Polynomial> {
        src.iter()
            .map(|s| parse_polynomial(s, &["x", "y", "z"]).unwrap())
            .collect()
    }

    fn pt(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| integer(x)).collect()
    }

    pub(crate) fn henon3() -> AffineAutomorphism {
        AffineAutomorphism::new(
            polys(&["y", "z + y^2", "x + z^2"]),
            polys(&["z - (y - x^2)^2", "x", "y - x^2"]),
        )
        .unwrap()
    }

    #[test]
    fn henon_pair_verifies_with_degrees() {
        let a = henon3();
        assert_eq!((a.degree(), a.inverse_degree()), (2, 4));
        assert_eq!(AffineAutomorphism::henon(3), a);
    }

    #[test]
    fn identity_verifies() {
        let id = AffineAutomorphism::identity(3);
        assert_eq!((id.degree(), id.inverse_degree()), (1, 1));
    }

    #[test]
    fn printed_inverse_without_square_is_rejected() {
        let err = AffineAutomorphism::new(
            polys(&["y", "z + y^2", "x + z^2"]),
            polys(&["z - (y - x^2)", "x", "y - x^2"]),
        )
        .unwrap_err();
        match err {
            DynamicsError::NotInverse {
                coordinate,
                residual,
                ..
            } => {
                assert_eq!(coordinate, 0);
                assert_ne!(residual, "0");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn apply_forward_and_inverse() {
        let a = henon3();
        assert_eq!(
            a.apply(&pt(&[1, 1, 1]), Direction::Forward).unwrap(),
            pt(&[1, 2, 2])
        );
        assert_eq!(
            a.apply(&pt(&[1, 1, 1]), Direction::Inverse).unwrap(),
            pt(&[1, 1, 0])
        );
        let p = vec![
            crate::poly::rational(1, 2),
            integer(-3),
            crate::poly::rational(5, 7),
        ];
        let back = a
            .apply(
                &a.apply(&p, Direction::Forward).unwrap(),
                Direction::Inverse,
            )
            .unwrap();
        assert_eq!(back, p);
        assert!(a.apply(&pt(&[1, 1]), Direction::Forward).is_err());
    }

    #[test]
    fn homogenized_henon_matches_display() {
        let (phi, psi) = henon3().homogenize_pair();
        // (w; x, y, z) -> [w^2 : y w : z w + y^2 : x w + z^2]
        let h = |s: &str| parse_polynomial(s, &["w", "x", "y", "z"]).unwrap();
        assert_eq!(
            phi.coords(),
            &[h("w^2"), h("y*w"), h("z*w + y^2"), h("x*w + z^2")]
        );
        assert_eq!(psi.degree(), 4);
        assert_eq!(psi.coords()[0], h("w^4"));
        assert_eq!(psi.coords()[1], h("z*w^3 - (y*w - x^2)^2"));
        assert!(psi.coords().iter().all(Polynomial::is_homogeneous));
    }

    #[test]
    fn identity_homogenizes_to_coordinates() {
        let (phi, _) = AffineAutomorphism::identity(2).homogenize_pair();
        let expect: Vec<Polynomial> = (0..3).map(|i| Polynomial::var(3, i)).collect();
        assert_eq!(phi.coords(), expect.as_slice());
    }

    #[test]
    fn henon_loci() {
        let (phi, psi) = henon3().homogenize_pair();
        let zphi = phi.indeterminacy_locus();
        assert!(zphi.contains(&pt(&[1, 0, 0])));
        for other in [[0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [3, 2, 1]] {
            assert!(!zphi.contains(&pt(&other)));
        }
        let zpsi = psi.indeterminacy_locus();
        for y in -3..=3 {
            for z in -3..=3 {
                if (y, z) != (0, 0) {
                    assert!(zpsi.contains(&pt(&[0, y, z])));
                }
            }
        }
        assert!(!zpsi.contains(&pt(&[1, 0, 0])));
        assert!(matches!(zphi.search(1), ZeroSearch::Found(_)));
        assert!(matches!(zpsi.search(1), ZeroSearch::Found(_)));
    }

    #[test]
    fn identity_has_empty_locus() {
        let (phi, _) = AffineAutomorphism::identity(3).homogenize_pair();
        assert!(matches!(
            phi.indeterminacy_locus().search(0),
            ZeroSearch::Empty { .. }
        ));
    }

    #[test]
    fn iterate_degree_is_multiplicative_for_henon() {
        let a = henon3();
        let f2: Vec<Polynomial> = a
            .forward()
            .iter()
            .map(|p| p.compose(a.forward()).unwrap())
            .collect();
        let d2 = f2.iter().map(|p| p.total_degree().unwrap()).max().unwrap();
        assert_eq!(d2, 4);
        let f3: Vec<Polynomial> = a
            .forward()
            .iter()
            .map(|p| p.compose(&f2).unwrap())
            .collect();
        assert_eq!(
            f3.iter().map(|p| p.total_degree().unwrap()).max().unwrap(),
            8
        );
    }
}
