//! Weil heights of rational points and canonical heights of automorphisms.
//!
//! Heights are natural logarithms. The integers behind them, the largest
//! absolute coordinate of a primitive homogeneous vector, are kept exactly
//! so regression tests can compare them bit for bit.

mod canonical;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{AffineAutomorphism, Direction, DynamicsError, OrbitError};
use crate::poly::Polynomial;

pub use canonical::{
    canonical, canonical_minus, canonical_plus, functional_equation_residual,
    is_periodic_by_height, CanonicalHeight, CanonicalHeightEstimate, EstimateOptions,
    HeightConvention, PeriodicityOptions, PeriodicityReport, PeriodicityVerdict, ResidualReport,
    StopReason,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeightError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("invalid estimate options: {0}")]
    InvalidOptions(String),
    #[error("the map is undefined at this point (all coordinates vanish)")]
    Indeterminate,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// A point of `P^n` as a primitive integer vector whose first nonzero
/// coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<BigInt>,
}

impl ProjectivePoint {
    pub fn from_integers(mut coords: Vec<BigInt>) -> Result<Self, HeightError> {
        let mut g = BigInt::zero();
        for c in &coords {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if g.is_zero() {
            return Err(HeightError::ZeroVector);
        }
        let first_negative = coords
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        for c in coords.iter_mut() {
            if !g.is_one() {
                *c = &*c / &g;
            }
            if first_negative {
                *c = -&*c;
            }
        }
        Ok(ProjectivePoint { coords })
    }

    /// Homogeneous rational coordinates, scaled to a primitive integer
    /// vector.
    pub fn from_rationals(coords: &[BigRational]) -> Result<Self, HeightError> {
        let l = coords
            .iter()
            .filter(|c| !c.denom().is_one())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Self::from_integers(
            coords
                .iter()
                .map(|c| c.numer() * (&l / c.denom()))
                .collect(),
        )
    }

    /// The affine point `P` as `[1 : P]`.
    pub fn from_affine(point: &[BigRational]) -> Self {
        let mut coords = Vec::with_capacity(point.len() + 1);
        coords.push(BigRational::one());
        coords.extend_from_slice(point);
        Self::from_rationals(&coords).expect("first coordinate is nonzero")
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn max_abs(&self) -> BigUint {
        self.coords
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .expect("nonempty")
    }

    pub fn height(&self) -> WeilHeight {
        WeilHeight::from_max(self.max_abs())
    }
}

/// `h(P) = log max |x_i|` for the primitive vector of `P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeilHeight {
    #[serde(serialize_with = "crate::report::serialize_display")]
    pub max_abs: BigUint,
    pub log: f64,
}

impl WeilHeight {
    pub fn from_max(max_abs: BigUint) -> Self {
        let log = ln_biguint(&max_abs);
        WeilHeight { max_abs, log }
    }
}

/// Height of an affine rational point, homogenized with a leading 1.
pub fn weil_height(point: &[BigRational]) -> WeilHeight {
    ProjectivePoint::from_affine(point).height()
}

/// Natural log of a positive integer, accurate to double precision for
/// integers of any size.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return n.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint(n: &BigInt) -> f64 {
    debug_assert!(n.sign() != Sign::Minus);
    ln_biguint(n.magnitude())
}

/// A constant `C` with `h(f(P)) <= d h(P) + C` for all rational `P`.
///
/// Writing `P = [x0 : x]` primitive and `L` for the common denominator of
/// the coefficients, the vector `L (x0^d, F~_1(x), ...)` is integral with
/// entries at most `max(L, T M) max|x|^d`, where `T` is the largest term
/// count and `M` the largest cleared coefficient.
pub fn height_growth_constant(map: &AffineAutomorphism, direction: Direction) -> f64 {
    let coords = map.coordinates(direction);
    let l = coords
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()));
    let terms = coords.iter().map(Polynomial::num_terms).max().unwrap_or(0);
    let max_num = coords
        .iter()
        .map(|p| {
            // cleared with the common denominator of all coordinates
            let scale = BigRational::from_integer(l.clone());
            p.terms()
                .map(|(_, c)| (c * &scale).to_integer().abs())
                .max()
                .unwrap_or_else(BigInt::zero)
        })
        .max()
        .unwrap_or_else(BigInt::zero);
    let bound = (BigInt::from(terms) * max_num).max(l);
    ln_bigint(&bound)
}
