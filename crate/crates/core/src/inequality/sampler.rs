use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::InequalityError;
use crate::dynamics::{orbit, AffineAutomorphism, BitBudget, Direction, OrbitError};
use crate::report::format_point;

/// Where sample points come from. All enumeration orders are fixed, so a
/// sampler and a map determine the report byte for byte.
#[derive(Debug, Clone, PartialEq)]
pub enum Sampler {
    /// Integer points with `|x_i| <= bound`.
    Box {
        bound: u32,
    },
    /// Points whose coordinates are the distinct rationals `p/q` with
    /// `|p| <= numerator` and `1 <= q <= denominator`.
    RationalBox {
        numerator: u32,
        denominator: u32,
    },
    /// `count` random points with coordinates drawn like `RationalBox`.
    Random {
        count: usize,
        numerator: u32,
        denominator: u32,
        seed: u64,
    },
    /// `P, fP, ..., f^depth P` for each seed.
    Orbit {
        seeds: Vec<Vec<BigRational>>,
        depth: usize,
    },
    Points(Vec<Vec<BigRational>>),
    Union(Vec<Sampler>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub points: Vec<Vec<BigRational>>,
    /// Orbit points that could not be generated within the bit budget.
    pub skipped: usize,
}

impl Sampler {
    /// The default for a map on `A^n`: a rational box with numerators up
    /// to 5 and denominators up to 3.
    pub fn default_box() -> Sampler {
        Sampler::RationalBox {
            numerator: 5,
            denominator: 3,
        }
    }

    pub fn points(
        &self,
        map: &AffineAutomorphism,
        budget: BitBudget,
    ) -> Result<Sample, InequalityError> {
        let n = map.dimension();
        let mut sample = Sample {
            points: vec![],
            skipped: 0,
        };
        match self {
            Sampler::Box { bound } => {
                let b = i64::from(*bound);
                let values: Vec<BigRational> = (-b..=b)
                    .map(|v| BigRational::from_integer(v.into()))
                    .collect();
                sample.points = cartesian_power(&values, n);
            }
            Sampler::RationalBox {
                numerator,
                denominator,
            } => {
                sample.points = cartesian_power(&box_values(*numerator, *denominator), n);
            }
            Sampler::Random {
                count,
                numerator,
                denominator,
                seed,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let num = i64::from(*numerator);
                let den = i64::from((*denominator).max(1));
                sample.points = (0..*count)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                BigRational::new(
                                    BigInt::from(rng.gen_range(-num..=num)),
                                    BigInt::from(rng.gen_range(1..=den)),
                                )
                            })
                            .collect()
                    })
                    .collect();
            }
            Sampler::Orbit { seeds, depth } => {
                for seed in seeds {
                    check_dimension(seed, n)?;
                    match orbit(map, seed, *depth, Direction::Forward, budget) {
                        Ok(points) => sample.points.extend(points),
                        Err(OrbitError::BudgetExceeded {
                            completed, partial, ..
                        }) => {
                            sample.points.extend(partial);
                            sample.skipped += depth - completed;
                        }
                        Err(OrbitError::Dynamics(e)) => return Err(e.into()),
                    }
                }
            }
            Sampler::Points(points) => {
                for p in points {
                    check_dimension(p, n)?;
                }
                sample.points = points.clone();
            }
            Sampler::Union(parts) => {
                for part in parts {
                    let s = part.points(map, budget)?;
                    sample.points.extend(s.points);
                    sample.skipped += s.skipped;
                }
            }
        }
        Ok(sample)
    }

    /// Number of points requested in `A^n`, before any budget skips.
    pub fn size_hint(&self, n: usize) -> usize {
        let power = |v: usize| v.saturating_pow(n as u32);
        match self {
            Sampler::Box { bound } => power(2 * *bound as usize + 1),
            Sampler::RationalBox {
                numerator,
                denominator,
            } => power(box_values(*numerator, *denominator).len()),
            Sampler::Random { count, .. } => *count,
            Sampler::Orbit { seeds, depth } => seeds.len() * (depth + 1),
            Sampler::Points(p) => p.len(),
            Sampler::Union(parts) => parts.iter().map(|s| s.size_hint(n)).sum(),
        }
    }

    /// A sampler containing this one with roughly `factor` times as many
    /// points per coordinate block, or `None` for explicit point lists.
    pub fn enlarged(&self, factor: f64) -> Option<Sampler> {
        let per_axis = |count: usize, n: usize| (count as f64) * factor.powf(1.0 / n as f64);
        Some(match self {
            Sampler::Box { bound } => {
                // sizes are compared in A^3, the common case; the growth
                // rate per axis is what matters
                let target = per_axis(2 * *bound as usize + 1, 3);
                let mut b = *bound + 1;
                while ((2 * b + 1) as f64) < target {
                    b += 1;
                }
                Sampler::Box { bound: b }
            }
            Sampler::RationalBox {
                numerator,
                denominator,
            } => {
                let target = per_axis(box_values(*numerator, *denominator).len(), 3);
                let (mut num, mut den) = (*numerator, *denominator);
                let mut turn = 0;
                loop {
                    if turn % 2 == 0 {
                        num += 1;
                    } else {
                        den += 1;
                    }
                    turn += 1;
                    if box_values(num, den).len() as f64 >= target {
                        break;
                    }
                }
                Sampler::RationalBox {
                    numerator: num,
                    denominator: den,
                }
            }
            Sampler::Random {
                count,
                numerator,
                denominator,
                seed,
            } => Sampler::Random {
                count: ((*count as f64) * factor).ceil() as usize,
                numerator: *numerator,
                denominator: *denominator,
                seed: *seed,
            },
            Sampler::Orbit { seeds, depth } => Sampler::Orbit {
                seeds: seeds.clone(),
                depth: (((depth + 1) as f64) * factor).ceil() as usize - 1,
            },
            Sampler::Points(_) => return None,
            Sampler::Union(parts) => {
                let grown: Vec<Sampler> = parts
                    .iter()
                    .map(|s| s.enlarged(factor).unwrap_or_else(|| s.clone()))
                    .collect();
                if grown == *parts {
                    return None;
                }
                Sampler::Union(grown)
            }
        })
    }

    /// Replaces the seed of every random component.
    pub fn with_seed(self, new_seed: u64) -> Sampler {
        match self {
            Sampler::Random {
                count,
                numerator,
                denominator,
                ..
            } => Sampler::Random {
                count,
                numerator,
                denominator,
                seed: new_seed,
            },
            Sampler::Union(parts) => {
                Sampler::Union(parts.into_iter().map(|s| s.with_seed(new_seed)).collect())
            }
            other => other,
        }
    }
}

fn check_dimension(p: &[BigRational], n: usize) -> Result<(), InequalityError> {
    if p.len() != n {
        return Err(InequalityError::Dimension {
            expected: n,
            got: p.len(),
        });
    }
    Ok(())
}

fn box_values(numerator: u32, denominator: u32) -> Vec<BigRational> {
    let num = i64::from(numerator);
    let set: BTreeSet<BigRational> = (1..=i64::from(denominator.max(1)))
        .flat_map(|q| (-num..=num).map(move |p| BigRational::new(p.into(), q.into())))
        .collect();
    set.into_iter().collect()
}

/// All `n`-tuples over `values`, first coordinate varying slowest.
fn cartesian_power(values: &[BigRational], n: usize) -> Vec<Vec<BigRational>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<BigRational>| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

impl fmt::Display for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sampler::Box { bound } => write!(f, "integer box |x_i| <= {bound}"),
            Sampler::RationalBox {
                numerator,
                denominator,
            } => {
                write!(f, "rational box |num| <= {numerator}, den <= {denominator}")
            }
            Sampler::Random {
                count,
                numerator,
                denominator,
                seed,
            } => write!(
                f,
                "{count} random points, |num| <= {numerator}, den <= {denominator}, seed {seed}"
            ),
            Sampler::Orbit { seeds, depth } => {
                let seeds: Vec<String> = seeds.iter().map(|s| format_point(s)).collect();
                write!(f, "orbits to depth {depth} of {}", seeds.join(" "))
            }
            Sampler::Points(points) => write!(f, "{} listed points", points.len()),
            Sampler::Union(parts) => {
                let parts: Vec<String> = parts.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(" + "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid sampler '{spec}': {message}")]
pub struct SamplerParseError {
    pub spec: String,
    pub message: String,
}

/// `box:B`, `rational:N/D`, `random:COUNT:N/D`, `orbit:DEPTH:P;P;...`,
/// `points:P;P;...`, joined with `+`. Points are comma-separated
/// rationals, optionally in parentheses. Random samplers start with seed 0.
impl FromStr for Sampler {
    type Err = SamplerParseError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let err = |message: &str| SamplerParseError {
            spec: spec.to_string(),
            message: message.to_string(),
        };
        let mut parts = Vec::new();
        for piece in spec.split('+') {
            let piece = piece.trim();
            let (kind, rest) = piece.split_once(':').unwrap_or((piece, ""));
            let int = |s: &str| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| err(&format!("expected an integer, got '{s}'")))
            };
            let pair = |s: &str| -> Result<(u32, u32), SamplerParseError> {
                let (n, d) = s.split_once('/').ok_or_else(|| err("expected N/D"))?;
                Ok((int(n)?, int(d)?))
            };
            let point_list = |s: &str| -> Result<Vec<Vec<BigRational>>, SamplerParseError> {
                s.split(';')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| parse_point(p).map_err(|m| err(&m)))
                    .collect()
            };
            parts.push(match kind {
                "box" => Sampler::Box { bound: int(rest)? },
                "rational" => {
                    let (numerator, denominator) = pair(rest)?;
                    if denominator == 0 {
                        return Err(err("denominator bound must be positive"));
                    }
                    Sampler::RationalBox {
                        numerator,
                        denominator,
                    }
                }
                "random" => {
                    let (count, bounds) = rest
                        .split_once(':')
                        .ok_or_else(|| err("expected random:COUNT:N/D"))?;
                    let (numerator, denominator) = pair(bounds)?;
                    if denominator == 0 {
                        return Err(err("denominator bound must be positive"));
                    }
                    Sampler::Random {
                        count: int(count)? as usize,
                        numerator,
                        denominator,
                        seed: 0,
                    }
                }
                "orbit" => {
                    let (depth, seeds) = rest
                        .split_once(':')
                        .ok_or_else(|| err("expected orbit:DEPTH:POINTS"))?;
                    let seeds = point_list(seeds)?;
                    if seeds.is_empty() {
                        return Err(err("no seed points"));
                    }
                    Sampler::Orbit {
                        seeds,
                        depth: int(depth)? as usize,
                    }
                }
                "points" => {
                    let points = point_list(rest)?;
                    if points.is_empty() {
                        return Err(err("no points"));
                    }
                    Sampler::Points(points)
                }
                other => return Err(err(&format!("unknown sampler kind '{other}'"))),
            });
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Sampler::Union(parts)
        })
    }
}

/// Parses `a, b/c, ...` or `(a, b/c, ...)`.
pub fn parse_point(text: &str) -> Result<Vec<BigRational>, String> {
    let inner = text.trim();
    let inner = inner
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(inner);
    if inner.trim().is_empty() {
        return Err("empty point".into());
    }
    inner
        .split(',')
        .map(|c| {
            let c = c.trim();
            let (n, d) = c.split_once('/').unwrap_or((c, "1"));
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| format!("invalid coordinate '{c}'"))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| format!("invalid coordinate '{c}'"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in '{c}'"));
            }
            Ok(BigRational::new(n, d))
        })
        .collect()
}
