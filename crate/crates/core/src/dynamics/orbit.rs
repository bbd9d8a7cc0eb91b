use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AffineAutomorphism, AffinePoint, Direction, DynamicsError};

/// Upper bound on the bit length of any numerator or denominator produced
/// while iterating. Orbit digits grow like `d^n`, so without a budget a
/// modest depth can exhaust memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitBudget(pub u64);

impl BitBudget {
    pub const DEFAULT: BitBudget = BitBudget(1 << 20);

    pub fn admits(&self, point: &[BigRational]) -> bool {
        point
            .iter()
            .all(|c| c.numer().bits() <= self.0 && c.denom().bits() <= self.0)
    }
}

impl Default for BitBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("bit budget of {budget} bits exceeded after iterate {completed}")]
    BudgetExceeded {
        budget: u64,
        /// Index of the last iterate that fit the budget.
        completed: usize,
        /// Iterates `0..=completed`.
        partial: Vec<AffinePoint>,
    },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// `[P, fP, ..., f^depth P]` (or iterates of `f^-1`).
pub fn orbit(
    map: &AffineAutomorphism,
    start: &[BigRational],
    depth: usize,
    direction: Direction,
    budget: BitBudget,
) -> Result<Vec<AffinePoint>, OrbitError> {
    if start.len() != map.dimension() {
        return Err(DynamicsError::Dimension {
            expected: map.dimension(),
            got: start.len(),
        }
        .into());
    }
    let mut points = Vec::with_capacity(depth + 1);
    points.push(start.to_vec());
    for k in 1..=depth {
        let next = map.apply(&points[k - 1], direction)?;
        if !budget.admits(&next) {
            return Err(OrbitError::BudgetExceeded {
                budget: budget.0,
                completed: k - 1,
                partial: points,
            });
        }
        points.push(next);
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CycleResult {
    Periodic { period: usize },
    NoCycleFound { checked: usize },
}

/// Exact cycle detection along the forward orbit.
///
/// `f` is injective, so the first repetition in an orbit is always a
/// return to the starting point; comparing against `P` is enough.
pub fn detect_cycle(
    map: &AffineAutomorphism,
    start: &[BigRational],
    max_depth: usize,
    budget: BitBudget,
) -> Result<CycleResult, OrbitError> {
    if start.len() != map.dimension() {
        return Err(DynamicsError::Dimension {
            expected: map.dimension(),
            got: start.len(),
        }
        .into());
    }
    let mut current = start.to_vec();
    for k in 1..=max_depth {
        current = map.apply(&current, Direction::Forward)?;
        if current == start {
            return Ok(CycleResult::Periodic { period: k });
        }
        if !budget.admits(&current) {
            return Err(OrbitError::BudgetExceeded {
                budget: budget.0,
                completed: k - 1,
                partial: vec![],
            });
        }
    }
    Ok(CycleResult::NoCycleFound { checked: max_depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::integer;

    fn pt(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| integer(x)).collect()
    }

    /// Second evaluation path: plain i128 arithmetic on the Henon formula.
    fn henon_i128(p: [i128; 3]) -> [i128; 3] {
        [p[1], p[2] + p[1] * p[1], p[0] + p[2] * p[2]]
    }

    #[test]
    fn henon_orbit_of_ones() {
        let a = AffineAutomorphism::henon(3);
        let o = orbit(
            &a,
            &pt(&[1, 1, 1]),
            4,
            Direction::Forward,
            BitBudget::DEFAULT,
        )
        .unwrap();
        let expect = [
            [1, 1, 1],
            [1, 2, 2],
            [2, 6, 5],
            [6, 41, 27],
            [41, 1708, 735],
        ];
        let mut q = [1i128, 1, 1];
        for (got, want) in o.iter().zip(expect) {
            assert_eq!(got, &pt(&want));
            assert_eq!(got, &pt(&q.map(|c| c as i64)));
            q = henon_i128(q);
        }
    }

    #[test]
    fn depth_zero_and_fixed_point() {
        let a = AffineAutomorphism::henon(3);
        let o = orbit(
            &a,
            &pt(&[5, 6, 7]),
            0,
            Direction::Forward,
            BitBudget::DEFAULT,
        )
        .unwrap();
        assert_eq!(o, vec![pt(&[5, 6, 7])]);
        let o = orbit(
            &a,
            &pt(&[0, 0, 0]),
            6,
            Direction::Inverse,
            BitBudget::DEFAULT,
        )
        .unwrap();
        assert!(o.iter().all(|p| p == &pt(&[0, 0, 0])));
    }

    #[test]
    fn backward_orbit() {
        let a = AffineAutomorphism::henon(3);
        let o = orbit(
            &a,
            &pt(&[1, 1, 1]),
            7,
            Direction::Inverse,
            BitBudget::DEFAULT,
        )
        .unwrap();
        let expect = [
            [1, 1, 1],
            [1, 1, 0],
            [0, 1, 0],
            [-1, 0, 1],
            [0, -1, -1],
            [-2, 0, -1],
            [-17, -2, -4],
            [-84685, -17, -291],
        ];
        for (got, want) in o.iter().zip(expect) {
            assert_eq!(got, &pt(&want));
        }
    }

    #[test]
    fn budget_exhaustion_reports_progress() {
        let a = AffineAutomorphism::henon(3);
        let err = orbit(&a, &pt(&[1, 1, 1]), 40, Direction::Forward, BitBudget(64)).unwrap_err();
        match err {
            OrbitError::BudgetExceeded {
                completed, partial, ..
            } => {
                assert_eq!(partial.len(), completed + 1);
                assert!(partial.iter().all(|p| BitBudget(64).admits(p)));
                let next = a.apply(&partial[completed], Direction::Forward).unwrap();
                assert!(!BitBudget(64).admits(&next));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semigroup_law() {
        let a = AffineAutomorphism::henon(3);
        let p = pt(&[2, -1, 3]);
        let whole = orbit(&a, &p, 5, Direction::Forward, BitBudget::DEFAULT).unwrap();
        let head = orbit(&a, &p, 2, Direction::Forward, BitBudget::DEFAULT).unwrap();
        let tail = orbit(
            &a,
            head.last().unwrap(),
            3,
            Direction::Forward,
            BitBudget::DEFAULT,
        )
        .unwrap();
        assert_eq!(whole[..3], head[..]);
        assert_eq!(whole[2..], tail[..]);
    }

    #[test]
    fn cycles() {
        let a = AffineAutomorphism::henon(3);
        assert_eq!(
            detect_cycle(&a, &pt(&[0, 0, 0]), 5, BitBudget::DEFAULT).unwrap(),
            CycleResult::Periodic { period: 1 }
        );
        assert_eq!(
            detect_cycle(&a, &pt(&[1, 1, 1]), 10, BitBudget::DEFAULT).unwrap(),
            CycleResult::NoCycleFound { checked: 10 }
        );
        let id = AffineAutomorphism::identity(2);
        assert_eq!(
            detect_cycle(&id, &pt(&[3, -4]), 1, BitBudget::DEFAULT).unwrap(),
            CycleResult::Periodic { period: 1 }
        );
    }

    #[test]
    fn origin_is_the_only_small_fixed_point() {
        // f(P) = P forces x = y, y = z + y^2, z = x + z^2, i.e. x = y = z = 0.
        let a = AffineAutomorphism::henon(3);
        for x in -4..=4 {
            for y in -4..=4 {
                for z in -4..=4 {
                    let p = pt(&[x, y, z]);
                    let fixed = a.apply(&p, Direction::Forward).unwrap() == p;
                    assert_eq!(fixed, (x, y, z) == (0, 0, 0));
                }
            }
        }
    }
}
