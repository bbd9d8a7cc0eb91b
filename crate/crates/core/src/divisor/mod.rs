//! Divisor classes on resolutions of the projective extensions.
//!
//! A resolution `V` of `phi0` is recorded by the coefficients of `pi^*H`
//! and `phi^*H` in the basis `H_V, E_1, ..., E_k` of `Pic(V)`. The tables
//! are inputs; nothing here blows anything up.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("basis labels must be nonempty and distinct (offending label '{0}')")]
    BadLabels(String),
    #[error("a class on a basis of rank {rank} needs {rank} coefficients, got {got}")]
    Rank { rank: usize, got: usize },
    #[error("classes live on different bases")]
    BasisMismatch,
    #[error("pushforward images must be nonnegative multiples of H (E_{index} maps to {value} H)")]
    NegativePushforward { index: usize, value: i64 },
    #[error("no exceptional divisor has b_i s_i = 1")]
    NoEssential,
    #[error("several exceptional divisors have b_i s_i = 1: {0:?}")]
    MultipleEssential(Vec<usize>),
    #[error("the datum has no pushforward images and no essential index")]
    MissingPushforward,
    #[error("degrees do not match: the forward side has (own {v_own}, other {v_other}), the inverse side (own {w_own}, other {w_other})")]
    DegreeMismatch {
        v_own: i64,
        v_other: i64,
        w_own: i64,
        w_other: i64,
    },
    #[error("the {0} datum does not validate")]
    Invalid(Side),
    #[error("datum file: {0}")]
    Json(String),
}

/// Ordered labels; the first is the proper transform of `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicBasis {
    labels: Vec<String>,
}

impl PicBasis {
    pub fn new(labels: Vec<String>) -> Result<Arc<Self>, DivisorError> {
        let mut seen = HashSet::new();
        if labels.is_empty() {
            return Err(DivisorError::BadLabels(String::new()));
        }
        for l in &labels {
            if l.is_empty() || !seen.insert(l.as_str()) {
                return Err(DivisorError::BadLabels(l.clone()));
            }
        }
        Ok(Arc::new(PicBasis { labels }))
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// An element of `Pic ⊗ Q`, as a coefficient vector over a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    basis: Arc<PicBasis>,
    coeffs: Vec<BigRational>,
}

impl DivisorClass {
    pub fn new(basis: Arc<PicBasis>, coeffs: Vec<BigRational>) -> Result<Self, DivisorError> {
        if coeffs.len() != basis.rank() {
            return Err(DivisorError::Rank {
                rank: basis.rank(),
                got: coeffs.len(),
            });
        }
        Ok(DivisorClass { basis, coeffs })
    }

    pub fn from_integers(basis: Arc<PicBasis>, coeffs: &[i64]) -> Result<Self, DivisorError> {
        Self::new(
            basis,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(basis: Arc<PicBasis>) -> Self {
        let coeffs = vec![BigRational::zero(); basis.rank()];
        DivisorClass { basis, coeffs }
    }

    pub fn basis(&self) -> &Arc<PicBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff_of(&self, label: &str) -> Option<&BigRational> {
        self.basis.index_of(label).map(|i| &self.coeffs[i])
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        DivisorClass {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, DivisorError> {
        if self.basis != other.basis {
            return Err(DivisorError::BasisMismatch);
        }
        Ok(DivisorClass {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl fmt::Display for DivisorClass {
    /// Every coefficient is shown, zeros included, so the output lines up
    /// with the basis.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, l)) in self.coeffs.iter().zip(self.basis.labels()).enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            write!(f, "{} {l}", c.abs())?;
        }
        Ok(())
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.coeffs.len()))?;
        for (l, c) in self.basis.labels().iter().zip(&self.coeffs) {
            m.serialize_entry(l, &c.to_string())?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Resolves the extension of `f`; exceptional labels default to `E_i`.
    Forward,
    /// Resolves the extension of `f^-1`; exceptional labels default to `F_j`.
    Inverse,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Forward => "forward",
            Side::Inverse => "inverse",
        })
    }
}

/// Coefficient tables of one resolution.
///
/// `a[i]` and `b[i]` are the coefficients of `pi^*H` and `phi^*H` on the
/// `i`-th basis element (index 0 is `H_V`). `pushforward[i - 1]` is the
/// multiple of `H` that `E_i` maps to under `phi_*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionDatum {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub side: Side,
    pub degree_own: i64,
    pub degree_other: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pushforward: Option<Vec<i64>>,
}

impl ResolutionDatum {
    pub fn from_json(text: &str) -> Result<Self, DivisorError> {
        serde_json::from_str(text).map_err(|e| DivisorError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// Number of exceptional divisors.
    pub fn k(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    /// Labels of the exceptional divisors.
    pub fn exceptional_labels(&self) -> Vec<String> {
        match &self.labels {
            Some(l) => l.clone(),
            None => {
                let prefix = match self.side {
                    Side::Forward => "E",
                    Side::Inverse => "F",
                };
                (1..=self.k()).map(|i| format!("{prefix}{i}")).collect()
            }
        }
    }

    pub fn basis(&self) -> Result<Arc<PicBasis>, DivisorError> {
        let h = match self.side {
            Side::Forward => "H_V",
            Side::Inverse => "H_W",
        };
        let mut labels = vec![h.to_string()];
        labels.extend(self.exceptional_labels());
        PicBasis::new(labels)
    }

    pub fn pullback_class(&self) -> Result<DivisorClass, DivisorError> {
        DivisorClass::from_integers(self.basis()?, &self.a)
    }

    pub fn map_class(&self) -> Result<DivisorClass, DivisorError> {
        DivisorClass::from_integers(self.basis()?, &self.b)
    }
}

/// The constraints a resolution datum must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// `a` and `b` have the same length `k + 1 >= 2`, labels match.
    Shape,
    /// Both degrees are at least 1.
    PositiveDegrees,
    /// `t` is given and lies in `1..=k`.
    EssentialIndex,
    /// `a_0 = 1`.
    PullbackHyperplane,
    /// `b_0` equals the own degree.
    MapHyperplane,
    /// `a_t` equals the other degree.
    EssentialPullback,
    /// `b_t = 1`.
    EssentialMultiplicity,
    /// `b_i >= 1` for all `i >= 1`.
    PositiveMultiplicity,
    /// `a_i >= 0` for `i != t`.
    NonnegativePullback,
    /// `other * b_i >= a_i` for `i != t`.
    Dominance,
}

impl Constraint {
    pub fn describe(self) -> &'static str {
        match self {
            Constraint::Shape => "a and b have k+1 >= 2 entries each",
            Constraint::PositiveDegrees => "degrees are positive",
            Constraint::EssentialIndex => "essential index t lies in 1..k",
            Constraint::PullbackHyperplane => "pi^*H has H coefficient a_0 = 1",
            Constraint::MapHyperplane => "phi^*H has H coefficient b_0 = own degree",
            Constraint::EssentialPullback => {
                "pi^*H has coefficient a_t = other degree on the essential divisor"
            }
            Constraint::EssentialMultiplicity => {
                "phi^*H has coefficient b_t = 1 on the essential divisor"
            }
            Constraint::PositiveMultiplicity => {
                "every exceptional divisor lies over the indeterminacy locus (b_i >= 1)"
            }
            Constraint::NonnegativePullback => {
                "pi^*H has nonnegative exceptional coefficients (a_i >= 0)"
            }
            Constraint::Dominance => {
                "other degree times b_i dominates a_i off the essential divisor"
            }
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub index: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.constraint, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub side: Side,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, c: Constraint) -> bool {
        self.violations.iter().any(|v| v.constraint == c)
    }
}

/// Checks every constraint separately and lists each failure.
pub fn validate_resolution(datum: &ResolutionDatum) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |constraint, index, detail: String| {
        out.push(Violation {
            constraint,
            index,
            detail,
        })
    };
    let k = datum.k();
    if datum.a.len() < 2 || datum.a.len() != datum.b.len() {
        push(
            Constraint::Shape,
            None,
            format!("a has {} entries, b has {}", datum.a.len(), datum.b.len()),
        );
        return ValidationReport {
            side: datum.side,
            violations: out,
        };
    }
    if let Some(labels) = &datum.labels {
        if labels.len() != k {
            push(
                Constraint::Shape,
                None,
                format!("{} labels for {k} exceptional divisors", labels.len()),
            );
        }
    }
    if let Err(e) = datum.basis() {
        push(Constraint::Shape, None, e.to_string());
    }
    let (own, other) = (datum.degree_own, datum.degree_other);
    if own < 1 || other < 1 {
        push(
            Constraint::PositiveDegrees,
            None,
            format!("own {own}, other {other}"),
        );
    }
    let t = match datum.t {
        Some(t) if (1..=k).contains(&t) => Some(t),
        Some(t) => {
            push(
                Constraint::EssentialIndex,
                Some(t),
                format!("t = {t} but k = {k}"),
            );
            None
        }
        None => {
            push(
                Constraint::EssentialIndex,
                None,
                "no essential index given".into(),
            );
            None
        }
    };
    if datum.a[0] != 1 {
        push(
            Constraint::PullbackHyperplane,
            Some(0),
            format!("a_0 = {}", datum.a[0]),
        );
    }
    if datum.b[0] != own {
        push(
            Constraint::MapHyperplane,
            Some(0),
            format!("b_0 = {}, own degree {own}", datum.b[0]),
        );
    }
    if let Some(t) = t {
        if datum.a[t] != other {
            push(
                Constraint::EssentialPullback,
                Some(t),
                format!("a_{t} = {}, other degree {other}", datum.a[t]),
            );
        }
        if datum.b[t] != 1 {
            push(
                Constraint::EssentialMultiplicity,
                Some(t),
                format!("b_{t} = {}", datum.b[t]),
            );
        }
    }
    for i in 1..=k {
        if datum.b[i] < 1 {
            push(
                Constraint::PositiveMultiplicity,
                Some(i),
                format!("b_{i} = {}", datum.b[i]),
            );
        }
        if Some(i) == t {
            continue;
        }
        if datum.a[i] < 0 {
            push(
                Constraint::NonnegativePullback,
                Some(i),
                format!("a_{i} = {}", datum.a[i]),
            );
        }
        if other * datum.b[i] < datum.a[i] {
            push(
                Constraint::Dominance,
                Some(i),
                format!(
                    "{other} * b_{i} = {} < a_{i} = {}",
                    other * datum.b[i],
                    datum.a[i]
                ),
            );
        }
    }
    ValidationReport {
        side: datum.side,
        violations: out,
    }
}

/// `phi_*` from `Pic(V)` to `Pic(P^n) = Z H`: `H_V` maps to 0 and `E_i`
/// to `s_i H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushforwardMap {
    images: Vec<i64>,
}

impl PushforwardMap {
    pub fn new(images: Vec<i64>) -> Result<Self, DivisorError> {
        if let Some((i, &v)) = images.iter().enumerate().find(|(_, v)| **v < 0) {
            return Err(DivisorError::NegativePushforward {
                index: i + 1,
                value: v,
            });
        }
        Ok(PushforwardMap { images })
    }

    pub fn of_datum(datum: &ResolutionDatum) -> Result<Self, DivisorError> {
        Self::new(
            datum
                .pushforward
                .clone()
                .ok_or(DivisorError::MissingPushforward)?,
        )
    }

    /// Coefficient of `H` in the image of `sum c_i (basis)_i`.
    pub fn apply(&self, coeffs: &[BigRational]) -> Result<BigRational, DivisorError> {
        if coeffs.len() != self.images.len() + 1 {
            return Err(DivisorError::Rank {
                rank: self.images.len() + 1,
                got: coeffs.len(),
            });
        }
        Ok(coeffs[1..]
            .iter()
            .zip(&self.images)
            .map(|(c, &s)| c * BigRational::from_integer(s.into()))
            .sum())
    }
}

/// The unique `t` with `b_t s_t = 1`.
pub fn find_essential(
    datum: &ResolutionDatum,
    pushforward: &PushforwardMap,
) -> Result<usize, DivisorError> {
    if pushforward.images.len() != datum.k() || datum.b.len() != datum.a.len() {
        return Err(DivisorError::Rank {
            rank: datum.k(),
            got: pushforward.images.len(),
        });
    }
    let hits: Vec<usize> = (1..=datum.k())
        .filter(|&i| datum.b[i] * pushforward.images[i - 1] == 1)
        .collect();
    match hits.as_slice() {
        [] => Err(DivisorError::NoEssential),
        [t] => Ok(*t),
        _ => Err(DivisorError::MultipleEssential(hits)),
    }
}

/// `phi_* phi^*H = H`.
pub fn check_pushpull_identity(datum: &ResolutionDatum, pushforward: &PushforwardMap) -> bool {
    let b: Vec<BigRational> = datum
        .b
        .iter()
        .map(|&c| BigRational::from_integer(c.into()))
        .collect();
    pushforward.apply(&b).is_ok_and(|h| h.is_one())
}

/// Pullbacks of `H` to a common resolution `U` of both extensions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinedSystem {
    #[serde(serialize_with = "serialize_basis")]
    pub basis: Arc<PicBasis>,
    pub d: i64,
    pub d_prime: i64,
    pub pi: DivisorClass,
    pub phi: DivisorClass,
    pub psi: DivisorClass,
    /// Basis positions of the two essential divisors.
    pub essential: (usize, usize),
}

/// Assembles `pi_U^*H`, `phi_U^*H` and `psi_U^*H` on the basis
/// `H_U, E_1..E_k, F_1..F_l`.
///
/// With `M, I` the non-essential parts of `pi_V^*H, phi_V^*H` and `N, J`
/// those of `pi_W^*H, psi_W^*H`:
/// `pi_U^*H = H_U + d'E + dF + M + N`,
/// `phi_U^*H = d(H_U + dF + N) + E + I`,
/// `psi_U^*H = d'(H_U + d'E + M) + F + J`.
pub fn combine_resolutions(
    v: &ResolutionDatum,
    w: &ResolutionDatum,
) -> Result<CombinedSystem, DivisorError> {
    for datum in [v, w] {
        if !validate_resolution(datum).passed() {
            return Err(DivisorError::Invalid(datum.side));
        }
    }
    combine_unvalidated(v, w)
}

/// `combine_resolutions` without the constraint checks, for studying how
/// `D` reacts to data that break them. Only the shape, the essential
/// indices and the degree pairing are required.
pub fn combine_unvalidated(
    v: &ResolutionDatum,
    w: &ResolutionDatum,
) -> Result<CombinedSystem, DivisorError> {
    for datum in [v, w] {
        let shape_ok = datum.a.len() >= 2
            && datum.a.len() == datum.b.len()
            && datum.t.is_some_and(|t| (1..=datum.k()).contains(&t));
        if !shape_ok {
            return Err(DivisorError::Invalid(datum.side));
        }
    }
    if v.degree_own != w.degree_other || v.degree_other != w.degree_own {
        return Err(DivisorError::DegreeMismatch {
            v_own: v.degree_own,
            v_other: v.degree_other,
            w_own: w.degree_own,
            w_other: w.degree_other,
        });
    }
    let (d, d_prime) = (v.degree_own, w.degree_own);
    let mut labels = vec!["H".to_string()];
    labels.extend(v.exceptional_labels());
    labels.extend(w.exceptional_labels());
    let basis = PicBasis::new(labels)?;
    let (va, vb) = (&v.a[1..], &v.b[1..]);
    let (wa, wb) = (&w.a[1..], &w.b[1..]);
    let scale = |c: i64, xs: &[i64]| xs.iter().map(|x| c * x).collect::<Vec<_>>();
    let assemble = |h: i64, e: Vec<i64>, f: Vec<i64>| {
        let mut all = vec![h];
        all.extend(e);
        all.extend(f);
        DivisorClass::from_integers(basis.clone(), &all)
    };
    Ok(CombinedSystem {
        pi: assemble(1, va.to_vec(), wa.to_vec())?,
        phi: assemble(d, vb.to_vec(), scale(d, wa))?,
        psi: assemble(d_prime, scale(d_prime, va), wb.to_vec())?,
        essential: (v.t.expect("checked"), v.k() + w.t.expect("checked")),
        basis,
        d,
        d_prime,
    })
}

fn serialize_basis<S: serde::Serializer>(basis: &Arc<PicBasis>, s: S) -> Result<S::Ok, S::Error> {
    basis.labels.serialize(s)
}

/// `D = (1/d) phi_U^*H + (1/d') psi_U^*H - (1 + 1/(d d')) pi_U^*H`.
pub fn compute_d(system: &CombinedSystem) -> DivisorClass {
    let one = BigInt::one();
    let d = BigInt::from(system.d);
    let dp = BigInt::from(system.d_prime);
    let main = BigRational::one() + BigRational::new(one.clone(), &d * &dp);
    system
        .phi
        .scaled(&BigRational::new(one.clone(), d))
        .try_add(&system.psi.scaled(&BigRational::new(one, dp)))
        .and_then(|x| x.try_add(&system.pi.scaled(&-main)))
        .expect("one basis")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EffectivityReport {
    pub effective: bool,
    /// Label and coefficient of the first negative coefficient.
    pub first_negative: Option<(String, String)>,
    pub negative_labels: Vec<String>,
}

pub fn check_effective(class: &DivisorClass) -> EffectivityReport {
    let negatives: Vec<usize> = (0..class.coeffs.len())
        .filter(|&i| class.coeffs[i].is_negative())
        .collect();
    EffectivityReport {
        effective: negatives.is_empty(),
        first_negative: negatives
            .first()
            .map(|&i| (class.basis.labels[i].clone(), class.coeffs[i].to_string())),
        negative_labels: negatives
            .iter()
            .map(|&i| class.basis.labels[i].clone())
            .collect(),
    }
}

/// Everything the ledger reports for one pair of data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerReport {
    pub forward: ValidationReport,
    pub inverse: ValidationReport,
    pub essential_forward: Option<String>,
    pub essential_inverse: Option<String>,
    pub pushpull_forward: Option<bool>,
    pub pushpull_inverse: Option<bool>,
    pub system: Option<CombinedSystem>,
    pub d: Option<DivisorClass>,
    pub errors: Vec<String>,
    pub effectivity: Option<EffectivityReport>,
}

impl LedgerReport {
    pub fn passed(&self) -> bool {
        self.forward.passed()
            && self.inverse.passed()
            && self.errors.is_empty()
            && self.pushpull_forward != Some(false)
            && self.pushpull_inverse != Some(false)
            && self.effectivity.as_ref().is_some_and(|e| e.effective)
    }
}

/// Fills in missing essential indices from the pushforward data, validates
/// both sides, and computes `D`.
pub fn run_ledger(v: &ResolutionDatum, w: &ResolutionDatum) -> LedgerReport {
    let mut errors = Vec::new();
    let mut resolve = |datum: &ResolutionDatum| -> (ResolutionDatum, Option<bool>) {
        let mut datum = datum.clone();
        let mut pushpull = None;
        if datum.pushforward.is_some() {
            match PushforwardMap::of_datum(&datum) {
                Ok(pf) => {
                    match find_essential(&datum, &pf) {
                        Ok(t) if datum.t.is_none() => datum.t = Some(t),
                        Ok(t) if datum.t != Some(t) => errors.push(format!(
                            "{} side: given t = {} but the pushforward singles out {t}",
                            datum.side,
                            datum.t.expect("some")
                        )),
                        Ok(_) => {}
                        Err(e) => errors.push(format!("{} side: {e}", datum.side)),
                    }
                    pushpull = Some(check_pushpull_identity(&datum, &pf));
                }
                Err(e) => errors.push(format!("{} side: {e}", datum.side)),
            }
        }
        (datum, pushpull)
    };
    let (v, pushpull_forward) = resolve(v);
    let (w, pushpull_inverse) = resolve(w);
    let forward = validate_resolution(&v);
    let inverse = validate_resolution(&w);
    let label = |datum: &ResolutionDatum| {
        datum
            .t
            .filter(|t| (1..=datum.k()).contains(t))
            .and_then(|t| datum.exceptional_labels().get(t - 1).cloned())
    };
    let mut report = LedgerReport {
        essential_forward: label(&v),
        essential_inverse: label(&w),
        forward,
        inverse,
        pushpull_forward,
        pushpull_inverse,
        system: None,
        d: None,
        errors,
        effectivity: None,
    };
    if report.forward.passed() && report.inverse.passed() {
        match combine_resolutions(&v, &w) {
            Ok(system) => {
                let d = compute_d(&system);
                report.effectivity = Some(check_effective(&d));
                report.d = Some(d);
                report.system = Some(system);
            }
            Err(e) => report.errors.push(e.to_string()),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    fn v_side() -> ResolutionDatum {
        ResolutionDatum {
            name: None,
            side: Side::Forward,
            degree_own: 2,
            degree_other: 4,
            labels: None,
            a: vec![1, 1, 2, 2, 4, 4],
            b: vec![2, 1, 2, 1, 2, 1],
            t: Some(5),
            pushforward: Some(vec![0, 0, 0, 0, 1]),
        }
    }

    fn w_side() -> ResolutionDatum {
        ResolutionDatum {
            name: None,
            side: Side::Inverse,
            degree_own: 4,
            degree_other: 2,
            labels: None,
            a: vec![1, 1, 2, 2, 2, 1, 2, 2],
            b: vec![4, 2, 4, 2, 1, 1, 2, 1],
            t: Some(4),
            pushforward: Some(vec![0, 0, 0, 1, 0, 0, 0]),
        }
    }

    /// `D` from the closed forms, computed independently of the class
    /// arithmetic.
    fn closed_form(v: &ResolutionDatum, w: &ResolutionDatum) -> Vec<BigRational> {
        let (d, dp) = (v.degree_own, w.degree_own);
        let dd = d * dp;
        let mut out = vec![rational(dd - 1, dd)];
        for i in 1..=v.k() {
            out.push(rational(dp * v.b[i] - v.a[i], dd));
        }
        for j in 1..=w.k() {
            out.push(rational(d * w.b[j] - w.a[j], dd));
        }
        out
    }

    #[test]
    fn bundled_tables_validate() {
        assert!(validate_resolution(&v_side()).passed());
        assert!(validate_resolution(&w_side()).passed());
    }

    #[test]
    fn single_mutations_name_their_constraint() {
        let mut v = v_side();
        v.b[5] = 2;
        let r = validate_resolution(&v);
        assert_eq!(r.violations.len(), 1);
        assert!(r.violates(Constraint::EssentialMultiplicity));
        let mut v = v_side();
        v.a[3] = 9;
        assert!(validate_resolution(&v).violates(Constraint::Dominance));
        let mut v = v_side();
        v.t = Some(6);
        assert!(validate_resolution(&v).violates(Constraint::EssentialIndex));
        let mut v = v_side();
        v.b.pop();
        assert!(validate_resolution(&v).violates(Constraint::Shape));
    }

    #[test]
    fn essential_indices() {
        let v = v_side();
        assert_eq!(
            find_essential(&v, &PushforwardMap::of_datum(&v).unwrap()),
            Ok(5)
        );
        let w = w_side();
        assert_eq!(
            find_essential(&w, &PushforwardMap::of_datum(&w).unwrap()),
            Ok(4)
        );
        let zero = PushforwardMap::new(vec![0; 5]).unwrap();
        assert_eq!(find_essential(&v, &zero), Err(DivisorError::NoEssential));
        assert!(!check_pushpull_identity(&v, &zero));
        let two = PushforwardMap::new(vec![1, 0, 1, 0, 0]).unwrap();
        assert_eq!(
            find_essential(&v, &two),
            Err(DivisorError::MultipleEssential(vec![1, 3]))
        );
        assert!(!check_pushpull_identity(&v, &two));
        assert!(PushforwardMap::new(vec![0, -1]).is_err());
    }

    #[test]
    fn pushpull_on_bundled_tables() {
        for datum in [v_side(), w_side()] {
            assert!(check_pushpull_identity(
                &datum,
                &PushforwardMap::of_datum(&datum).unwrap()
            ));
        }
    }

    #[test]
    fn combined_blocks() {
        let s = combine_resolutions(&v_side(), &w_side()).unwrap();
        let ints = |c: &DivisorClass| -> Vec<i64> {
            c.coeffs()
                .iter()
                .map(|x| i64::try_from(x.to_integer()).unwrap())
                .collect()
        };
        assert_eq!(ints(&s.psi), [4, 4, 8, 8, 16, 16, 2, 4, 2, 1, 1, 2, 1]);
        assert_eq!(ints(&s.phi), [2, 1, 2, 1, 2, 1, 2, 4, 4, 4, 2, 4, 4]);
        assert_eq!(ints(&s.pi), [1, 1, 2, 2, 4, 4, 1, 2, 2, 2, 1, 2, 2]);
        assert_eq!(s.essential, (5, 9));
        assert_eq!(s.basis.labels()[9], "F4");
    }

    #[test]
    fn reproduces_d() {
        let s = combine_resolutions(&v_side(), &w_side()).unwrap();
        let d = compute_d(&s);
        let expect = [
            (7, 8),
            (3, 8),
            (3, 4),
            (1, 4),
            (1, 2),
            (0, 1),
            (3, 8),
            (3, 4),
            (1, 4),
            (0, 1),
            (1, 8),
            (1, 4),
            (0, 1),
        ];
        let expect: Vec<BigRational> = expect.iter().map(|&(n, m)| rational(n, m)).collect();
        assert_eq!(d.coeffs(), &expect[..]);
        assert_eq!(d.coeffs(), &closed_form(&v_side(), &w_side())[..]);
        assert!(check_effective(&d).effective);
        assert_eq!(
            d.to_string(),
            "7/8 H + 3/8 E1 + 3/4 E2 + 1/4 E3 + 1/2 E4 + 0 E5 + 3/8 F1 + 3/4 F2 + 1/4 F3 + 0 F4 + 1/8 F5 + 1/4 F6 + 0 F7"
        );
    }

    #[test]
    fn mutated_table_is_not_effective() {
        // validation would reject a_3 = 9, so the combination is built by hand
        let mut v = v_side();
        v.a[3] = 9;
        let r = run_ledger(&v, &w_side());
        assert!(!r.passed());
        assert!(r.forward.violates(Constraint::Dominance));
        let basis = PicBasis::new(vec!["H".into(), "E3".into()]).unwrap();
        let class = DivisorClass::new(basis, vec![rational(7, 8), rational(4 - 9, 8)]).unwrap();
        let e = check_effective(&class);
        assert!(!e.effective);
        assert_eq!(e.first_negative, Some(("E3".into(), "-5/8".into())));
    }

    #[test]
    fn degree_one_data() {
        let one = |side| ResolutionDatum {
            name: None,
            side,
            degree_own: 1,
            degree_other: 1,
            labels: None,
            a: vec![1, 1],
            b: vec![1, 1],
            t: Some(1),
            pushforward: Some(vec![1]),
        };
        let s = combine_resolutions(&one(Side::Forward), &one(Side::Inverse)).unwrap();
        let d = compute_d(&s);
        assert!(d.coeffs().iter().all(Zero::is_zero));
        assert!(check_effective(&DivisorClass::zero(s.basis.clone())).effective);
    }

    #[test]
    fn degree_mismatch() {
        let mut w = w_side();
        w.degree_other = 3;
        w.a[4] = 3;
        assert!(matches!(
            combine_resolutions(&v_side(), &w),
            Err(DivisorError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_unknown_fields() {
        let v = v_side();
        assert_eq!(ResolutionDatum::from_json(&v.to_json()).unwrap(), v);
        let bad = r#"{"side":"forward","degree_own":2,"degree_other":4,"a":[1,4],"b":[2,1],"t":1,"extra":0}"#;
        assert!(matches!(
            ResolutionDatum::from_json(bad),
            Err(DivisorError::Json(_))
        ));
    }

    #[test]
    fn missing_essential_index_is_found() {
        let mut v = v_side();
        v.t = None;
        let r = run_ledger(&v, &w_side());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.essential_forward.as_deref(), Some("E5"));
        assert_eq!(r.essential_inverse.as_deref(), Some("F4"));
    }

    #[test]
    fn permuting_labels_permutes_coefficients() {
        let perm = [3usize, 1, 5, 2, 4]; // new position i holds old E_{perm[i]}
        let v = v_side();
        let mut p = v.clone();
        p.labels = Some(perm.iter().map(|i| format!("E{i}")).collect());
        p.a = std::iter::once(v.a[0])
            .chain(perm.iter().map(|&i| v.a[i]))
            .collect();
        p.b = std::iter::once(v.b[0])
            .chain(perm.iter().map(|&i| v.b[i]))
            .collect();
        let s = v.pushforward.clone().unwrap();
        p.pushforward = Some(perm.iter().map(|&i| s[i - 1]).collect());
        p.t = None;
        let r0 = run_ledger(&v, &w_side());
        let r1 = run_ledger(&p, &w_side());
        assert_eq!(r1.essential_forward.as_deref(), Some("E5"));
        let (d0, d1) = (r0.d.unwrap(), r1.d.unwrap());
        for label in d0.basis().labels() {
            assert_eq!(d0.coeff_of(label), d1.coeff_of(label));
        }
    }
}
