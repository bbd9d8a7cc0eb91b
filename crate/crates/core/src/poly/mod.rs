//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Polynomial`] lives in a fixed number of variables `x1, ..., xn` and
//! stores only its nonzero terms, keyed by [`Monomial`] in graded
//! lexicographic order. Everything here is exact: there is no floating
//! point anywhere in this module.

mod parse;
mod resultant;
pub mod univariate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use parse::{parse_polynomial, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("target degree {target} is below the total degree {degree}")]
    TargetDegreeTooSmall { target: u32, degree: u32 },
    #[error("expected {expected} substitutions, got {got}")]
    SubstitutionCount { expected: usize, got: usize },
    #[error("variable index {var} out of range for {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },
    #[error("variable x{} occurs in neither polynomial", .var + 1)]
    VariableAbsent { var: usize },
    #[error("division is not exact")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
}

/// Exponent vector of a single term.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically with `x1 > x2 > ... > xn`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in a fixed number of variables over the rationals.
///
/// No stored coefficient is ever zero, so the zero polynomial is the empty
/// term map and structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The coordinate function `x_{var+1}`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(
            var < nvars,
            "variable {var} out of range for {nvars} variables"
        );
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        Self::term(exps, BigRational::one())
    }

    pub fn term(exponents: Vec<u32>, coeff: BigRational) -> Self {
        let nvars = exponents.len();
        let mut p = Self::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(Monomial(exponents), coeff);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials and pruning zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(PolyError::ArityMismatch {
                    left: nvars,
                    right: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigRational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Result<u32, PolyError> {
        self.terms
            .keys()
            .next_back()
            .map(Monomial::degree)
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Degree in a single variable; 0 for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    fn check_arity(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                left: self.nvars,
                right: point.len(),
            });
        }
        let powers = power_table(point, |v| self.degree_in(v));
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluation at an integer point, staying in the integers.
    ///
    /// Coefficients must be integral; returns `None` otherwise.
    pub fn evaluate_integer(&self, point: &[BigInt]) -> Option<BigInt> {
        if point.len() != self.nvars || !self.terms.values().all(|c| c.is_integer()) {
            return None;
        }
        let powers = power_table(point, |v| self.degree_in(v));
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.to_integer();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Substitutes `subs[i]` for `x_{i+1}` and expands.
    ///
    /// All substituents must share one variable count `m`; the result lives
    /// in `m` variables.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::SubstitutionCount {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let m = match subs.first() {
            Some(s) => s.nvars,
            None => 0,
        };
        if let Some(bad) = subs.iter().find(|s| s.nvars != m) {
            return Err(PolyError::ArityMismatch {
                left: m,
                right: bad.nvars,
            });
        }
        let mut powers: Vec<Vec<Polynomial>> = Vec::with_capacity(self.nvars);
        for (v, s) in subs.iter().enumerate() {
            let top = self.degree_in(v) as usize;
            let mut row = vec![Polynomial::one(m)];
            for e in 1..=top {
                let next = &row[e - 1] * s;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Polynomial::zero(m);
        for (mono, c) in &self.terms {
            let mut t = Polynomial::constant(m, c.clone());
            for (v, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[v][e as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Sum of the terms of a given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Top-degree homogeneous part.
    pub fn leading_form(&self) -> Result<Polynomial, PolyError> {
        let d = self.total_degree()?;
        Ok(self.homogeneous_part(d))
    }

    /// Homogenizes to `target_degree` with a new variable `x0` prepended at
    /// index 0, so the result has `n + 1` variables.
    pub fn homogenize(&self, target_degree: u32) -> Result<Polynomial, PolyError> {
        if let Ok(d) = self.total_degree() {
            if target_degree < d {
                return Err(PolyError::TargetDegreeTooSmall {
                    target: target_degree,
                    degree: d,
                });
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = Vec::with_capacity(self.nvars + 1);
            exps.push(target_degree - m.degree());
            exps.extend_from_slice(&m.0);
            (Monomial(exps), c.clone())
        });
        Ok(Polynomial {
            nvars: self.nvars + 1,
            terms: terms.collect(),
        })
    }

    /// Replaces a variable by a constant; the variable count is unchanged.
    pub fn specialize(&self, var: usize, value: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        let top = self.degree_in(var) as usize;
        let mut pows = vec![BigRational::one()];
        for e in 1..=top {
            let next = &pows[e - 1] * value;
            pows.push(next);
        }
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let e = std::mem::replace(&mut exps[var], 0) as usize;
            out.add_term(Monomial(exps), c * &pows[e]);
        }
        out
    }

    /// Drops variable `var`, which must not occur.
    pub fn remove_var(&self, var: usize) -> Result<Polynomial, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange {
                var,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            if m.0[var] != 0 {
                return Err(PolyError::InexactDivision);
            }
            let mut exps = m.0.clone();
            exps.remove(var);
            out.terms.insert(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Coefficients with respect to `var`: entry `k` is the coefficient of
    /// `var^k`, as a polynomial in the same variables not involving `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        if self.is_zero() {
            return vec![];
        }
        let top = self.degree_in(var) as usize;
        let mut out = vec![Polynomial::zero(self.nvars); top + 1];
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let e = std::mem::replace(&mut exps[var], 0) as usize;
            out[e].add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm).ok_or(PolyError::InexactDivision)?;
            let qc = c / lc;
            let step = Polynomial {
                nvars: self.nvars,
                terms: std::iter::once((qm.clone(), qc.clone())).collect(),
            };
            rem = &rem - &(&step * divisor);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Largest absolute numerator after clearing denominators; used for
    /// coarse height bounds.
    pub fn max_abs_cleared_coefficient(&self) -> BigInt {
        let l = self.denominator_lcm();
        self.terms
            .values()
            .map(|c| {
                (c * BigRational::from_integer(l.clone()))
                    .to_integer()
                    .abs()
            })
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Formats with the given variable names.
    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> impl fmt::Display + 'a {
        DisplayWith { poly: self, names }
    }
}

fn power_table<T>(point: &[T], degree_of: impl Fn(usize) -> u32) -> Vec<Vec<T>>
where
    T: Clone + One,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    point
        .iter()
        .enumerate()
        .map(|(v, x)| {
            let top = degree_of(v) as usize;
            let mut row = vec![T::one()];
            for e in 1..=top {
                let next = &row[e - 1] * x;
                row.push(next);
            }
            row
        })
        .collect()
}

struct DisplayWith<'a, S> {
    poly: &'a Polynomial,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for DisplayWith<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.0.iter().enumerate() {
                let name = self
                    .names
                    .get(v)
                    .map(|s| s.as_ref().to_string())
                    .unwrap_or_else(|| format!("x{}", v + 1));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let shown = self.display_with(&names).to_string();
        f.write_str(&shown)
    }
}

// Operator forms panic on arity mismatch; the `try_*` methods report it.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> [Polynomial; 3] {
        [
            Polynomial::var(3, 0),
            Polynomial::var(3, 1),
            Polynomial::var(3, 2),
        ]
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| integer(x)).collect()
    }

    /// Dense oracle: coefficients in a 3-d array indexed by exponents.
    fn dense(p: &Polynomial, size: usize) -> Vec<Vec<Vec<BigRational>>> {
        let mut out = vec![vec![vec![BigRational::zero(); size]; size]; size];
        for (m, c) in p.terms() {
            let e = m.exponents();
            out[e[0] as usize][e[1] as usize][e[2] as usize] += c;
        }
        out
    }

    fn dense_mul(
        a: &[Vec<Vec<BigRational>>],
        b: &[Vec<Vec<BigRational>>],
    ) -> Vec<Vec<Vec<BigRational>>> {
        let n = a.len();
        let mut out = vec![vec![vec![BigRational::zero(); 2 * n]; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if a[i][j][k].is_zero() {
                        continue;
                    }
                    for p in 0..n {
                        for q in 0..n {
                            for r in 0..n {
                                out[i + p][j + q][k + r] += &a[i][j][k] * &b[p][q][r];
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn add_cancels_and_merges() {
        let [x, y, z] = xyz();
        assert_eq!(&(&x + &y) + &(-&x), y);
        assert_eq!(&x + &Polynomial::zero(3), x);
        let s = &y.pow(2) + &z;
        let expect = dense(&y.pow(2), 3)
            .iter()
            .zip(dense(&z, 3))
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(r, s)| r.iter().zip(s).map(|(u, v)| u + v).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        assert_eq!(dense(&s, 3), expect);
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(3, 0);
        assert!(matches!(
            a.try_add(&b),
            Err(PolyError::ArityMismatch { .. })
        ));
        assert!(matches!(
            a.try_mul(&b),
            Err(PolyError::ArityMismatch { .. })
        ));
        assert!(a.evaluate(&ints(&[1, 2, 3])).is_err());
    }

    #[test]
    fn square_matches_dense_oracle() {
        let [x, y, _] = xyz();
        let p = &y - &x.pow(2);
        let sq = &p * &p;
        let expect = dense_mul(&dense(&p, 3), &dense(&p, 3));
        assert_eq!(dense(&sq, 6), expect);
        let by_hand = &(&y.pow(2) - &(&x.pow(2) * &y).scale(&integer(2))) + &x.pow(4);
        assert_eq!(sq, by_hand);
        assert_eq!(&p * &Polynomial::one(3), p);
        assert!((&p * &Polynomial::zero(3)).is_zero());
    }

    #[test]
    fn evaluation() {
        let [x, y, z] = xyz();
        let p = &z + &y.pow(2);
        assert_eq!(p.evaluate(&ints(&[1, 1, 1])).unwrap(), integer(2));
        let q = &x + &z.pow(2);
        assert_eq!(q.evaluate(&ints(&[1, 2, 2])).unwrap(), integer(5));
        let c = &q + &Polynomial::from_int(3, 7);
        assert_eq!(c.evaluate(&ints(&[0, 0, 0])).unwrap(), c.constant_term());
        // Horner-style cross-check on y: ((1)*y)*y + z.
        let (yv, zv) = (rational(3, 2), rational(-1, 5));
        let horner = &(&yv * &yv) + &zv;
        assert_eq!(p.evaluate(&[integer(0), yv, zv]).unwrap(), horner);
    }

    #[test]
    fn composition() {
        let [x, y, z] = xyz();
        let subs = [y.clone(), &z + &y.pow(2), &x + &z.pow(2)];
        assert_eq!(x.compose(&subs).unwrap(), subs[0]);
        let sq = y.pow(2).compose(&subs).unwrap();
        let expect = dense_mul(&dense(&subs[1], 3), &dense(&subs[1], 3));
        assert_eq!(dense(&sq, 6), expect);
        assert!(matches!(
            y.compose(&subs[..2]),
            Err(PolyError::SubstitutionCount { .. })
        ));
    }

    #[test]
    fn degrees_and_leading_forms() {
        let [x, y, z] = xyz();
        let p = &z + &y.pow(2);
        assert_eq!(p.total_degree().unwrap(), 2);
        assert_eq!(p.leading_form().unwrap(), y.pow(2));
        assert_eq!((&x + &z.pow(2)).leading_form().unwrap(), z.pow(2));
        let q = &z - &(&y - &x.pow(2)).pow(2);
        assert_eq!(q.total_degree().unwrap(), 4);
        assert_eq!(q.leading_form().unwrap(), -x.pow(4));
        assert_eq!(Polynomial::from_int(3, 5).total_degree().unwrap(), 0);
        assert_eq!(
            Polynomial::zero(3).total_degree(),
            Err(PolyError::ZeroPolynomial)
        );
        assert_eq!(
            Polynomial::zero(3).leading_form(),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn homogenization() {
        let [x, y, z] = xyz();
        let h = (&z + &y.pow(2)).homogenize(2).unwrap();
        // variables (w; x, y, z)
        let w4 = |i| Polynomial::var(4, i);
        assert_eq!(h, &(&w4(3) * &w4(0)) + &w4(2).pow(2));
        assert_eq!(
            Polynomial::from_int(3, 4).homogenize(0).unwrap(),
            Polynomial::from_int(4, 4)
        );
        assert_eq!(x.homogenize(3).unwrap(), &w4(1) * &w4(0).pow(2));
        assert!(matches!(
            y.pow(2).homogenize(1),
            Err(PolyError::TargetDegreeTooSmall { .. })
        ));
    }

    #[test]
    fn exact_division() {
        let [x, y, _] = xyz();
        let a = &x + &y;
        let b = &x - &y.pow(2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!((&prod + &x).div_exact(&a), Err(PolyError::InexactDivision));
    }

    #[test]
    fn display_is_graded_lex_descending() {
        let [x, y, _] = xyz();
        let p = (&y - &x.pow(2)).pow(2);
        assert_eq!(
            p.display_with(&["x", "y", "z"]).to_string(),
            "x^4 - 2*x^2*y + y^2"
        );
        assert_eq!(Polynomial::zero(2).to_string(), "0");
        assert_eq!(
            (&x.scale(&rational(3, 2)) - &Polynomial::one(3)).to_string(),
            "3/2*x1 - 1"
        );
    }
}
