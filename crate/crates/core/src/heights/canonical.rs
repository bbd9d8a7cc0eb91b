use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use super::{HeightError, ProjectivePoint};
use crate::dynamics::{
    detect_cycle, AffineAutomorphism, BitBudget, CycleResult, Direction, OrbitError,
};
use crate::report::{serialize_display_vec, serialize_f64_lossless};

/// Iteration stops here even when a tolerance was never reached.
pub const HARD_DEPTH_CAP: usize = 256;

/// Relative allowance for floating-point rounding in residual checks.
const FLOAT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub depth: Option<usize>,
    pub tolerance: Option<f64>,
    pub budget: BitBudget,
}

impl EstimateOptions {
    pub fn depth(depth: usize) -> Self {
        EstimateOptions {
            depth: Some(depth),
            tolerance: None,
            budget: BitBudget::DEFAULT,
        }
    }

    pub fn tolerance(tolerance: f64) -> Self {
        EstimateOptions {
            depth: None,
            tolerance: Some(tolerance),
            budget: BitBudget::DEFAULT,
        }
    }

    pub fn with_budget(mut self, budget: BitBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    fn validate(&self) -> Result<(), HeightError> {
        match (self.depth, self.tolerance) {
            (None, None) => Err(HeightError::InvalidOptions(
                "give a depth, a tolerance, or both".into(),
            )),
            (Some(0), _) => Err(HeightError::InvalidOptions(
                "depth must be at least 1".into(),
            )),
            (_, Some(t)) if !(t > 0.0 && t.is_finite()) => Err(HeightError::InvalidOptions(
                format!("tolerance must be positive, got {t}"),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Depth,
    Tolerance,
    BudgetExhausted,
    DepthCap,
}

/// The terms `h(f^k P) / d^k` for `k = 0..=depth`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalHeightEstimate {
    pub direction: Direction,
    pub degree: u32,
    /// Largest primitive coordinate of each iterate; `heights[k]` is its log.
    #[serde(serialize_with = "serialize_display_vec")]
    pub max_coordinates: Vec<BigUint>,
    pub heights: Vec<f64>,
    pub values: Vec<f64>,
    /// Bound on `|limit - last value|`, infinite when no bound is available.
    #[serde(serialize_with = "serialize_f64_lossless")]
    pub tail_bound: f64,
    pub depth: usize,
    pub stop: StopReason,
    pub certified: bool,
}

impl CanonicalHeightEstimate {
    pub fn value(&self) -> f64 {
        *self.values.last().expect("at least the starting term")
    }

    pub fn interval(&self) -> (f64, f64) {
        (
            self.value() - self.tail_bound,
            self.value() + self.tail_bound,
        )
    }
}

/// `lim h(f^n P) / d^n`.
///
/// With `s_k = h(f^k P) - d h(f^(k-1) P)` the successive differences are
/// `s_k / d^k`. If `|s_k| <= K` for all `k`, the tail after `N` terms is at
/// most `K / ((d - 1) d^N)`; `K` is taken as the largest observed `|s_k|`,
/// so the bound certifies a posteriori.
pub fn canonical_plus(
    map: &AffineAutomorphism,
    point: &[BigRational],
    options: EstimateOptions,
) -> Result<CanonicalHeightEstimate, HeightError> {
    estimate(map, point, options, Direction::Forward)
}

/// `lim h(f^-n P) / d'^n`.
pub fn canonical_minus(
    map: &AffineAutomorphism,
    point: &[BigRational],
    options: EstimateOptions,
) -> Result<CanonicalHeightEstimate, HeightError> {
    estimate(map, point, options, Direction::Inverse)
}

fn estimate(
    map: &AffineAutomorphism,
    point: &[BigRational],
    options: EstimateOptions,
    direction: Direction,
) -> Result<CanonicalHeightEstimate, HeightError> {
    options.validate()?;
    if point.len() != map.dimension() {
        return Err(crate::dynamics::DynamicsError::Dimension {
            expected: map.dimension(),
            got: point.len(),
        }
        .into());
    }
    let degree = map.degree_of(direction);
    let d = f64::from(degree);
    let start = ProjectivePoint::from_affine(point).height();
    let mut est = CanonicalHeightEstimate {
        direction,
        degree,
        max_coordinates: vec![start.max_abs],
        heights: vec![start.log],
        values: vec![start.log],
        tail_bound: f64::INFINITY,
        depth: 0,
        stop: StopReason::Depth,
        certified: false,
    };
    let mut current = point.to_vec();
    let mut k_max = 0.0f64;
    let mut scale = 1.0f64;
    loop {
        if est.depth >= 1 {
            if let Some(tol) = options.tolerance {
                if est.tail_bound <= tol {
                    est.stop = StopReason::Tolerance;
                    break;
                }
            }
        }
        if options.depth == Some(est.depth) {
            est.stop = StopReason::Depth;
            break;
        }
        if est.depth >= HARD_DEPTH_CAP {
            est.stop = StopReason::DepthCap;
            break;
        }
        let next = map.apply(&current, direction)?;
        if !options.budget.admits(&next) {
            est.stop = StopReason::BudgetExhausted;
            break;
        }
        current = next;
        let h = ProjectivePoint::from_affine(&current).height();
        let prev = *est.heights.last().expect("nonempty");
        k_max = k_max.max((h.log - d * prev).abs());
        scale *= d;
        est.depth += 1;
        est.values.push(h.log / scale);
        est.heights.push(h.log);
        est.max_coordinates.push(h.max_abs);
        est.tail_bound = if degree == 1 {
            if k_max == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            k_max / ((d - 1.0) * scale)
        };
    }
    est.certified = est.stop != StopReason::BudgetExhausted
        && est.tail_bound.is_finite()
        && options.tolerance.is_none_or(|t| est.tail_bound <= t);
    Ok(est)
}

/// How the two one-sided heights are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightConvention {
    /// `h+ + h-`, nonnegative and zero exactly on periodic points.
    #[default]
    Sum,
    /// `h+ - h-`.
    Difference,
}

impl HeightConvention {
    fn combine(self, plus: f64, minus: f64) -> f64 {
        match self {
            HeightConvention::Sum => plus + minus,
            HeightConvention::Difference => plus - minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalHeight {
    pub convention: HeightConvention,
    pub value: f64,
    #[serde(serialize_with = "serialize_f64_lossless")]
    pub tail_bound: f64,
    pub certified: bool,
    pub plus: CanonicalHeightEstimate,
    pub minus: CanonicalHeightEstimate,
}

impl CanonicalHeight {
    pub fn interval(&self) -> (f64, f64) {
        (self.value - self.tail_bound, self.value + self.tail_bound)
    }
}

pub fn canonical(
    map: &AffineAutomorphism,
    point: &[BigRational],
    options: EstimateOptions,
    convention: HeightConvention,
) -> Result<CanonicalHeight, HeightError> {
    let plus = canonical_plus(map, point, options)?;
    let minus = canonical_minus(map, point, options)?;
    Ok(CanonicalHeight {
        convention,
        value: convention.combine(plus.value(), minus.value()),
        tail_bound: plus.tail_bound + minus.tail_bound,
        certified: plus.certified && minus.certified,
        plus,
        minus,
    })
}

/// Both sides of `(1/d) h(fP) + (1/d') h(f^-1 P) = (1 + 1/(d d')) h(P)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// The residual of the exact limits is 0; the computed residual is
    /// guaranteed to be at most this.
    #[serde(serialize_with = "serialize_f64_lossless")]
    pub width: f64,
    pub certified: bool,
    pub within: bool,
}

pub fn functional_equation_residual(
    map: &AffineAutomorphism,
    point: &[BigRational],
    depth: usize,
    convention: HeightConvention,
    budget: BitBudget,
) -> Result<ResidualReport, HeightError> {
    let options = EstimateOptions::depth(depth).with_budget(budget);
    let d = f64::from(map.degree());
    let d_inv = f64::from(map.inverse_degree());
    let forward = map.apply(point, Direction::Forward)?;
    let backward = map.apply(point, Direction::Inverse)?;
    let at_p = canonical(map, point, options, convention)?;
    let at_fp = canonical(map, &forward, options, convention)?;
    let at_bp = canonical(map, &backward, options, convention)?;
    let lhs = at_fp.value / d + at_bp.value / d_inv;
    let coefficient = 1.0 + 1.0 / (d * d_inv);
    let rhs = coefficient * at_p.value;
    let residual = (lhs - rhs).abs();
    let width = at_fp.tail_bound / d
        + at_bp.tail_bound / d_inv
        + coefficient * at_p.tail_bound
        + FLOAT_SLACK * (1.0 + lhs.abs() + rhs.abs());
    Ok(ResidualReport {
        lhs,
        rhs,
        residual,
        width,
        certified: at_p.certified && at_fp.certified && at_bp.certified,
        within: residual <= width,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicityOptions {
    pub tolerance: f64,
    pub budget: BitBudget,
    /// Orbit length searched for a return when the height is below the
    /// tolerance.
    pub max_cycle_depth: usize,
}

impl PeriodicityOptions {
    pub fn new(tolerance: f64) -> Self {
        PeriodicityOptions {
            tolerance,
            budget: BitBudget::DEFAULT,
            max_cycle_depth: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PeriodicityVerdict {
    Periodic { period: usize },
    Wandering,
    Undetermined,
}

impl std::fmt::Display for PeriodicityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PeriodicityVerdict::Periodic { period } => write!(f, "periodic (period {period})"),
            PeriodicityVerdict::Wandering => f.write_str("wandering"),
            PeriodicityVerdict::Undetermined => f.write_str("undetermined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicityReport {
    pub verdict: PeriodicityVerdict,
    pub height: CanonicalHeight,
    pub cycle_search_depth: usize,
    pub note: Option<String>,
}

/// Classifies `P` using the sum-convention canonical height.
///
/// An exact return `f^k P = P` settles periodicity outright. Without one,
/// `P` is wandering when the certified height interval excludes 0. The
/// orbit is searched for a return up to `max_cycle_depth` when the height
/// is below the tolerance, and only along the iterates the estimate
/// already visited otherwise.
pub fn is_periodic_by_height(
    map: &AffineAutomorphism,
    point: &[BigRational],
    options: PeriodicityOptions,
) -> Result<PeriodicityReport, HeightError> {
    if !(options.tolerance > 0.0 && options.tolerance.is_finite()) {
        return Err(HeightError::InvalidOptions(format!(
            "tolerance must be positive, got {}",
            options.tolerance
        )));
    }
    let est_options =
        EstimateOptions::tolerance(options.tolerance / 4.0).with_budget(options.budget);
    let height = canonical(map, point, est_options, HeightConvention::Sum)?;
    let (lower, upper) = height.interval();
    let small = height.certified && upper < options.tolerance;
    let cycle_search_depth = if small {
        options.max_cycle_depth
    } else {
        height.plus.depth.max(1)
    };
    let mut note = None;
    let cycle = match detect_cycle(map, point, cycle_search_depth, options.budget) {
        Ok(c) => c,
        Err(OrbitError::BudgetExceeded { completed, .. }) => {
            note = Some(format!(
                "cycle search stopped by the bit budget after {completed} steps"
            ));
            CycleResult::NoCycleFound { checked: completed }
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = match cycle {
        CycleResult::Periodic { period } => {
            if !small {
                note = Some(format!(
                    "exact return after {period} steps although the height estimate is {:.6}",
                    height.value
                ));
            }
            PeriodicityVerdict::Periodic { period }
        }
        CycleResult::NoCycleFound { .. } if height.certified && lower > 0.0 => {
            PeriodicityVerdict::Wandering
        }
        CycleResult::NoCycleFound { checked } => {
            if note.is_none() {
                note = Some(if small {
                    format!("height below tolerance but no return within {checked} steps")
                } else {
                    "height interval neither excludes 0 nor lies below the tolerance".into()
                });
            }
            PeriodicityVerdict::Undetermined
        }
    };
    Ok(PeriodicityReport {
        verdict,
        height,
        cycle_search_depth,
        note,
    })
}
