//! Empirical checks of the lower bound
//! `(1/d) h(fP) + (1/d') h(f^-1 P) >= (1 + 1/(d d')) h(P) + C`
//! and of the weighted family bound `sum (1/d_i) h(z_i P) >= h(P) - C`.
//!
//! The constant `C` is never computed. Reports give the smallest observed
//! value of the left side minus the main term, and a stabilization test
//! checks that it stops moving as the sample grows.

mod sampler;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{AffineAutomorphism, BitBudget, Direction, DynamicsError, HomogenizedMap};
use crate::heights::{ln_biguint, ProjectivePoint, WeilHeight};
use crate::report::{format_point, serialize_display};

pub use sampler::{parse_point, Sampler, SamplerParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InequalityError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("map {index} of the family is undefined at {point}")]
    Indeterminate { index: usize, point: String },
    #[error("the family is empty")]
    EmptyFamily,
    #[error("family maps act on P^{expected}, the point lies in A^{got}")]
    Dimension { expected: usize, got: usize },
    #[error("evaluation exceeded the bit budget of {0} bits")]
    BudgetExceeded(u64),
    #[error("the sample is empty (all {skipped} points were skipped)")]
    EmptySample { skipped: usize },
}

/// `sum w_i log n_i` with rational weights and positive integer arguments.
///
/// Terms with argument 1 are dropped and equal arguments are merged, so two
/// combinations built from the same heights compare equal exactly.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LogCombination {
    terms: BTreeMap<BigUint, BigRational>,
}

impl LogCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn log(weight: BigRational, argument: BigUint) -> Self {
        let mut out = Self::zero();
        out.add_log(weight, argument);
        out
    }

    pub fn add_log(&mut self, weight: BigRational, argument: BigUint) {
        assert!(!argument.is_zero(), "log of zero");
        if argument.is_one() || weight.is_zero() {
            return;
        }
        let slot = self.terms.entry(argument).or_insert_with(BigRational::zero);
        *slot += weight;
        if slot.is_zero() {
            self.terms.retain(|_, w| !w.is_zero());
        }
    }

    pub fn add(&mut self, other: &LogCombination) {
        for (arg, w) in &other.terms {
            self.add_log(w.clone(), arg.clone());
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> LogCombination {
        let mut out = LogCombination::zero();
        for (arg, w) in &self.terms {
            out.add_log(w * factor, arg.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self) -> f64 {
        self.terms
            .iter()
            .map(|(arg, w)| w.to_f64().expect("finite weight") * ln_biguint(arg))
            .fold(0.0, |acc, x| acc + x)
    }
}

impl fmt::Display for LogCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (arg, w)) in self.terms.iter().enumerate() {
            let sign = if w.is_negative() { "-" } else { "+" };
            match (i, w.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            let w = w.abs();
            if !w.is_one() {
                write!(f, "{w}*")?;
            }
            write!(f, "log({arg})")?;
        }
        Ok(())
    }
}

/// One sampled point with the three heights entering the lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaRecord {
    #[serde(serialize_with = "serialize_point")]
    pub point: Vec<BigRational>,
    pub h: WeilHeight,
    pub h_forward: WeilHeight,
    pub h_inverse: WeilHeight,
    #[serde(serialize_with = "serialize_display")]
    pub delta_exact: LogCombination,
    pub delta: f64,
}

fn serialize_point<S: serde::Serializer>(p: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&format_point(p))
}

/// `(1/d) h(fP) + (1/d') h(f^-1 P) - (1 + 1/(d d')) h(P)`.
pub fn delta_statistic(
    map: &AffineAutomorphism,
    point: &[BigRational],
) -> Result<DeltaRecord, InequalityError> {
    delta_with_budget(map, point, None)
}

fn delta_with_budget(
    map: &AffineAutomorphism,
    point: &[BigRational],
    budget: Option<BitBudget>,
) -> Result<DeltaRecord, InequalityError> {
    let forward = map.apply(point, Direction::Forward)?;
    let inverse = map.apply(point, Direction::Inverse)?;
    if let Some(b) = budget {
        if !b.admits(&forward) || !b.admits(&inverse) {
            return Err(InequalityError::BudgetExceeded(b.0));
        }
    }
    let h = ProjectivePoint::from_affine(point).height();
    let h_forward = ProjectivePoint::from_affine(&forward).height();
    let h_inverse = ProjectivePoint::from_affine(&inverse).height();
    let d = BigInt::from(map.degree());
    let d_inv = BigInt::from(map.inverse_degree());
    let mut exact = LogCombination::log(
        BigRational::new(BigInt::one(), d.clone()),
        h_forward.max_abs.clone(),
    );
    exact.add_log(
        BigRational::new(BigInt::one(), d_inv.clone()),
        h_inverse.max_abs.clone(),
    );
    let main = BigRational::one() + BigRational::new(BigInt::one(), &d * &d_inv);
    exact.add_log(-main, h.max_abs.clone());
    let delta = exact.evaluate();
    Ok(DeltaRecord {
        point: point.to_vec(),
        h,
        h_forward,
        h_inverse,
        delta_exact: exact,
        delta,
    })
}

/// `sum (1/d_i) h(z_i(P)) - h(P)` for a family of projective maps, at the
/// affine point `P = [1 : P]`.
pub fn silverman_statistic(
    family: &[HomogenizedMap],
    point: &[BigRational],
) -> Result<LogCombination, InequalityError> {
    if family.is_empty() {
        return Err(InequalityError::EmptyFamily);
    }
    if let Some(map) = family.iter().find(|m| m.dimension() != point.len()) {
        return Err(InequalityError::Dimension {
            expected: map.dimension(),
            got: point.len(),
        });
    }
    let source = ProjectivePoint::from_affine(point);
    let mut out = LogCombination::log(-BigRational::one(), source.max_abs());
    let ints = source.coords().to_vec();
    for (index, map) in family.iter().enumerate() {
        let image = map.evaluate_integer(&ints).map_or_else(
            || {
                let rats: Vec<BigRational> = ints
                    .iter()
                    .cloned()
                    .map(BigRational::from_integer)
                    .collect();
                map.evaluate(&rats).expect("arity checked")
            },
            |v| v.into_iter().map(BigRational::from_integer).collect(),
        );
        let image = ProjectivePoint::from_rationals(&image).map_err(|_| {
            InequalityError::Indeterminate {
                index,
                point: format_point(point),
            }
        })?;
        out.add_log(
            BigRational::new(BigInt::one(), BigInt::from(map.degree())),
            image.max_abs(),
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    pub map_id: String,
    pub sample: String,
    /// How regularity of the map was established; filled in by callers.
    pub regularity: String,
    pub degree: u32,
    pub inverse_degree: u32,
    pub records: Vec<DeltaRecord>,
    pub min_delta: f64,
    #[serde(serialize_with = "serialize_point")]
    pub argmin: Vec<BigRational>,
    pub skipped: usize,
    pub sampler_skipped: usize,
}

impl DeltaReport {
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "point",
            "h",
            "h_forward",
            "h_inverse",
            "delta",
            "delta_exact",
        ])?;
        for r in &self.records {
            w.write_record([
                format_point(&r.point),
                r.h.log.to_string(),
                r.h_forward.log.to_string(),
                r.h_inverse.log.to_string(),
                r.delta.to_string(),
                r.delta_exact.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evaluates the statistic on every sample point in parallel; records keep
/// the sampler's order. Points whose images exceed the budget are skipped
/// and counted.
pub fn batch_verify(
    map: &AffineAutomorphism,
    map_id: &str,
    sampler: &Sampler,
    budget: BitBudget,
) -> Result<DeltaReport, InequalityError> {
    let sample = sampler.points(map, budget)?;
    let results: Vec<Result<DeltaRecord, InequalityError>> = sample
        .points
        .par_iter()
        .map(|p| delta_with_budget(map, p, Some(budget)))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let mut skipped = 0;
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(InequalityError::BudgetExceeded(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let best = records
        .iter()
        .min_by(|a, b| a.delta.total_cmp(&b.delta))
        .ok_or(InequalityError::EmptySample {
            skipped: skipped + sample.skipped,
        })?;
    Ok(DeltaReport {
        map_id: map_id.to_string(),
        sample: sampler.to_string(),
        regularity: "not checked".into(),
        degree: map.degree(),
        inverse_degree: map.inverse_degree(),
        min_delta: best.delta,
        argmin: best.point.clone(),
        records,
        skipped,
        sampler_skipped: sample.skipped,
    })
}

/// One sampled point for the family statistic over `{phi0, psi0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SilvermanRecord {
    #[serde(serialize_with = "serialize_point")]
    pub point: Vec<BigRational>,
    pub h: WeilHeight,
    #[serde(serialize_with = "serialize_display")]
    pub value_exact: LogCombination,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SilvermanReport {
    pub map_id: String,
    pub sample: String,
    pub family_degrees: Vec<u32>,
    pub records: Vec<SilvermanRecord>,
    pub min_value: f64,
    #[serde(serialize_with = "serialize_point")]
    pub argmin: Vec<BigRational>,
    pub skipped: usize,
    pub sampler_skipped: usize,
}

impl SilvermanReport {
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["point", "h", "value", "value_exact"])?;
        for r in &self.records {
            w.write_record([
                format_point(&r.point),
                r.h.log.to_string(),
                r.value.to_string(),
                r.value_exact.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `silverman_statistic` for the family `{phi0, psi0}` of `map` over a
/// sample. Points whose affine images exceed the budget are skipped.
pub fn batch_silverman(
    map: &AffineAutomorphism,
    map_id: &str,
    sampler: &Sampler,
    budget: BitBudget,
) -> Result<SilvermanReport, InequalityError> {
    let (phi, psi) = map.homogenize_pair();
    let family = [phi, psi];
    let sample = sampler.points(map, budget)?;
    let results: Vec<Result<SilvermanRecord, InequalityError>> = sample
        .points
        .par_iter()
        .map(|p| {
            let forward = map.apply(p, Direction::Forward)?;
            let inverse = map.apply(p, Direction::Inverse)?;
            if !budget.admits(&forward) || !budget.admits(&inverse) {
                return Err(InequalityError::BudgetExceeded(budget.0));
            }
            let exact = silverman_statistic(&family, p)?;
            Ok(SilvermanRecord {
                point: p.clone(),
                h: ProjectivePoint::from_affine(p).height(),
                value: exact.evaluate(),
                value_exact: exact,
            })
        })
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let mut skipped = 0;
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(InequalityError::BudgetExceeded(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let best = records
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or(InequalityError::EmptySample {
            skipped: skipped + sample.skipped,
        })?;
    Ok(SilvermanReport {
        map_id: map_id.to_string(),
        sample: sampler.to_string(),
        family_degrees: family.iter().map(HomogenizedMap::degree).collect(),
        min_value: best.value,
        argmin: best.point.clone(),
        records,
        skipped,
        sampler_skipped: sample.skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// The automorphism bound, via `batch_verify`.
    #[default]
    Delta,
    /// The family bound over `{phi0, psi0}`, via `batch_silverman`.
    Silverman,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BatchReport {
    Delta(DeltaReport),
    Silverman(SilvermanReport),
}

impl BatchReport {
    pub fn min(&self) -> f64 {
        match self {
            BatchReport::Delta(r) => r.min_delta,
            BatchReport::Silverman(r) => r.min_value,
        }
    }

    pub fn argmin(&self) -> &[BigRational] {
        match self {
            BatchReport::Delta(r) => &r.argmin,
            BatchReport::Silverman(r) => &r.argmin,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            BatchReport::Delta(r) => r.records.len(),
            BatchReport::Silverman(r) => r.records.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn skipped(&self) -> usize {
        match self {
            BatchReport::Delta(r) => r.skipped + r.sampler_skipped,
            BatchReport::Silverman(r) => r.skipped + r.sampler_skipped,
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<(), csv::Error> {
        match self {
            BatchReport::Delta(r) => r.write_csv(writer),
            BatchReport::Silverman(r) => r.write_csv(writer),
        }
    }
}

pub fn run_batch(
    map: &AffineAutomorphism,
    map_id: &str,
    sampler: &Sampler,
    budget: BitBudget,
    statistic: Statistic,
) -> Result<BatchReport, InequalityError> {
    Ok(match statistic {
        Statistic::Delta => BatchReport::Delta(batch_verify(map, map_id, sampler, budget)?),
        Statistic::Silverman => {
            BatchReport::Silverman(batch_silverman(map, map_id, sampler, budget)?)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizationOptions {
    pub factor: f64,
    pub slack: f64,
    /// Samples smaller than this are enlarged before the comparison starts.
    pub warmup: usize,
    pub statistic: Statistic,
}

impl Default for StabilizationOptions {
    fn default() -> Self {
        StabilizationOptions {
            factor: 4.0,
            slack: 0.05,
            warmup: 100,
            statistic: Statistic::Delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizationVerdict {
    Pass,
    Fail,
    /// The sample cannot be enlarged (an explicit point list).
    NotApplicable,
}

impl fmt::Display for StabilizationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilizationVerdict::Pass => "PASS",
            StabilizationVerdict::Fail => "FAIL",
            StabilizationVerdict::NotApplicable => "N/A",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationReport {
    pub verdict: StabilizationVerdict,
    pub statistic: Statistic,
    pub base_sample: String,
    pub enlarged_sample: Option<String>,
    pub base_min: f64,
    pub enlarged_min: Option<f64>,
    pub change: Option<f64>,
    pub slack: f64,
    pub base: BatchReport,
}

/// Evaluates the statistic on the sample and on its enlargement and
/// compares the two minima.
pub fn stabilization(
    map: &AffineAutomorphism,
    map_id: &str,
    sampler: &Sampler,
    budget: BitBudget,
    options: StabilizationOptions,
) -> Result<StabilizationReport, InequalityError> {
    let mut base_sampler = sampler.clone();
    while base_sampler.size_hint(map.dimension()) < options.warmup {
        match base_sampler.enlarged(options.factor) {
            Some(s) if s != base_sampler => base_sampler = s,
            _ => break,
        }
    }
    let base = run_batch(map, map_id, &base_sampler, budget, options.statistic)?;
    let mut report = StabilizationReport {
        verdict: StabilizationVerdict::NotApplicable,
        statistic: options.statistic,
        base_sample: base_sampler.to_string(),
        enlarged_sample: None,
        base_min: base.min(),
        enlarged_min: None,
        change: None,
        slack: options.slack,
        base,
    };
    if let Some(bigger) = base_sampler.enlarged(options.factor) {
        let enlarged = run_batch(map, map_id, &bigger, budget, options.statistic)?;
        let change = (enlarged.min() - report.base_min).abs();
        report.verdict = if change < options.slack {
            StabilizationVerdict::Pass
        } else {
            StabilizationVerdict::Fail
        };
        report.enlarged_sample = Some(bigger.to_string());
        report.enlarged_min = Some(enlarged.min());
        report.change = Some(change);
    }
    Ok(report)
}
