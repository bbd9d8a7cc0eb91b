//! Common zeros of homogeneous forms in projective space over the algebraic
//! closure of the rationals.
//!
//! Exact for at most three homogeneous variables. The projective plane is
//! covered by the chart `x_k = 1` and the hyperplane `x_k = 0`, recursively.
//! In a two-variable affine chart the candidate second coordinates are the
//! roots of a resultant of two random combinations of the system; whether a
//! candidate extends to a common zero is then decided by a gcd computation
//! over `Q[t]/(R(t))` that splits the modulus whenever a leading coefficient
//! turns out to be a zero divisor. No factorization or root isolation is
//! needed, and every "found" answer carries a verifiable witness.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::poly::univariate::UnivariatePolynomial as UPoly;
use crate::poly::Polynomial;

/// A common zero, either as an explicit rational point or described by the
/// polynomials whose roots give its coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroWitness {
    /// Homogeneous coordinates when the zero is rational.
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_point"
    )]
    pub point: Option<Vec<BigRational>>,
    pub description: String,
}

fn serialize_point<S: serde::Serializer>(
    p: &Option<Vec<BigRational>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let strings: Option<Vec<String>> = p
        .as_ref()
        .map(|v| v.iter().map(|c| c.to_string()).collect());
    serde::Serialize::serialize(&strings, s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ZeroSearch {
    /// No common zero exists; one line per chart explaining why.
    Empty {
        certificate: Vec<String>,
    },
    Found(ZeroWitness),
    /// Could not decide (more than three variables, or a degenerate random
    /// choice that did not resolve).
    Undetermined {
        reason: String,
    },
}

const MONTE_CARLO_TRIALS: usize = 2000;

/// Searches for a common zero of homogeneous `forms` in `nvars` variables.
pub fn common_projective_zero<R: Rng>(forms: &[Polynomial], rng: &mut R) -> ZeroSearch {
    let Some(nvars) = forms.first().map(Polynomial::nvars) else {
        return ZeroSearch::Undetermined {
            reason: "empty system".into(),
        };
    };
    if nvars <= 3 {
        let mut certificate = Vec::new();
        match projective(
            forms.to_vec(),
            nvars,
            rng,
            &mut certificate,
            &mut Vec::new(),
        ) {
            Ok(None) => ZeroSearch::Empty { certificate },
            Ok(Some(w)) => ZeroSearch::Found(w),
            Err(reason) => ZeroSearch::Undetermined { reason },
        }
    } else {
        monte_carlo(forms, nvars, rng)
    }
}

fn name(v: usize) -> String {
    format!("x{}", v + 1)
}

fn is_common_zero(forms: &[Polynomial], point: &[BigRational]) -> bool {
    forms
        .iter()
        .all(|p| p.evaluate(point).map(|v| v.is_zero()).unwrap_or(false))
}

/// `fixed` holds the values already assigned to trailing variables, last
/// variable first.
fn projective<R: Rng>(
    forms: Vec<Polynomial>,
    k: usize,
    rng: &mut R,
    certificate: &mut Vec<String>,
    fixed: &mut Vec<BigRational>,
) -> Result<Option<ZeroWitness>, String> {
    let complete = |head: Vec<BigRational>, fixed: &[BigRational]| {
        let mut p = head;
        p.extend(fixed.iter().rev().cloned());
        p
    };
    let chart = {
        let mut parts: Vec<String> = Vec::new();
        for (i, v) in fixed.iter().rev().enumerate() {
            parts.push(format!("{} = {}", name(k + i), v));
        }
        parts
    };
    if k == 1 {
        let values: Vec<BigRational> = forms
            .iter()
            .map(|p| p.evaluate(&[BigRational::one()]).expect("one variable"))
            .collect();
        let here = complete(vec![BigRational::one()], fixed);
        return Ok(match values.iter().position(|v| !v.is_zero()) {
            Some(i) => {
                certificate.push(format!(
                    "point [{}]: form {} does not vanish",
                    join(&here),
                    i + 1
                ));
                None
            }
            None => Some(ZeroWitness {
                description: format!("every form vanishes at [{}]", join(&here)),
                point: Some(here),
            }),
        });
    }
    let last = k - 1;
    let one = BigRational::one();
    let zero = BigRational::zero();
    let mut chart_one = chart.clone();
    chart_one.insert(0, format!("{} = 1", name(last)));
    let affine: Vec<Polynomial> = forms
        .iter()
        .map(|p| {
            p.specialize(last, &one)
                .remove_var(last)
                .expect("specialized")
        })
        .collect();
    match affine_zero(affine, rng)? {
        AffineOutcome::None(reason) => {
            certificate.push(format!("chart {}: {}", chart_one.join(", "), reason));
        }
        AffineOutcome::Found { point, description } => {
            let point = point.map(|mut head| {
                head.push(one.clone());
                complete(head, fixed)
            });
            return Ok(Some(ZeroWitness {
                point,
                description: format!("chart {}: {}", chart_one.join(", "), description),
            }));
        }
    }
    let restricted: Vec<Polynomial> = forms
        .iter()
        .map(|p| {
            p.specialize(last, &zero)
                .remove_var(last)
                .expect("specialized")
        })
        .collect();
    fixed.push(zero);
    let out = projective(restricted, last, rng, certificate, fixed);
    fixed.pop();
    out
}

fn join(p: &[BigRational]) -> String {
    p.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" : ")
}

enum AffineOutcome {
    None(String),
    Found {
        point: Option<Vec<BigRational>>,
        description: String,
    },
}

/// Common zeros in affine space of dimension 1 or 2.
fn affine_zero<R: Rng>(polys: Vec<Polynomial>, rng: &mut R) -> Result<AffineOutcome, String> {
    let m = polys.first().map(Polynomial::nvars).unwrap_or(0);
    let polys: Vec<Polynomial> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    if polys.is_empty() {
        return Ok(AffineOutcome::Found {
            point: Some(vec![BigRational::zero(); m]),
            description: "every form vanishes identically".into(),
        });
    }
    if let Some(i) = polys.iter().position(Polynomial::is_constant) {
        return Ok(AffineOutcome::None(format!(
            "a restricted form is the nonzero constant {}",
            polys[i].constant_term()
        )));
    }
    match m {
        1 => Ok(univariate_zero(&polys, 0)),
        2 => bivariate_zero(&polys, rng),
        _ => Err(format!(
            "exact elimination supports at most 2 affine variables, got {m}"
        )),
    }
}

fn univariate_zero(polys: &[Polynomial], var: usize) -> AffineOutcome {
    let m = polys[0].nvars();
    let g = polys.iter().fold(UPoly::zero(), |acc, p| {
        acc.gcd(&UPoly::from_polynomial(p, var).expect("univariate"))
    });
    if g.is_zero() {
        return AffineOutcome::Found {
            point: Some(vec![BigRational::zero(); m]),
            description: "every form vanishes identically".into(),
        };
    }
    if g.is_constant() {
        return AffineOutcome::None(format!("gcd in {} is 1", name(var)));
    }
    let point = g.squarefree_part().linear_root().map(|r| {
        let mut p = vec![BigRational::zero(); m];
        p[var] = r;
        p
    });
    AffineOutcome::Found {
        point,
        description: format!("{} is a root of {}", name(var), g.to_string_in(&name(var))),
    }
}

fn random_combination<R: Rng>(polys: &[Polynomial], rng: &mut R) -> Polynomial {
    polys
        .iter()
        .fold(Polynomial::zero(polys[0].nvars()), |acc, p| {
            &acc + &p.scale(&BigRational::from_integer(rng.gen_range(1..=97).into()))
        })
}

fn bivariate_zero<R: Rng>(polys: &[Polynomial], rng: &mut R) -> Result<AffineOutcome, String> {
    if !polys.iter().any(|p| p.involves(0)) {
        return Ok(match univariate_zero(polys, 1) {
            AffineOutcome::None(r) => AffineOutcome::None(r),
            AffineOutcome::Found { point, description } => AffineOutcome::Found {
                point,
                description: format!("{description}, {} free", name(0)),
            },
        });
    }
    for _ in 0..4 {
        let q1 = random_combination(polys, rng);
        let q2 = random_combination(polys, rng);
        let Ok(res) = q1.resultant(&q2, 0) else {
            continue;
        };
        if res.is_zero() {
            if let Some(found) = specialization_witness(polys, rng) {
                return Ok(found);
            }
            continue;
        }
        let r = UPoly::from_polynomial(&res, 1)
            .expect("resultant eliminates x1")
            .squarefree_part();
        if r.is_constant() {
            return Ok(AffineOutcome::None(format!(
                "resultant in {} of two random combinations is a nonzero constant",
                name(0)
            )));
        }
        return Ok(split_gcd_search(polys, r));
    }
    Err("resultants of random combinations kept vanishing without a witness".into())
}

/// A shared factor involving `x1` shows up at almost every specialization
/// of `x2`.
fn specialization_witness<R: Rng>(polys: &[Polynomial], rng: &mut R) -> Option<AffineOutcome> {
    for _ in 0..16 {
        let b = BigRational::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=9).into());
        let special: Vec<Polynomial> = polys.iter().map(|p| p.specialize(1, &b)).collect();
        let g = special.iter().fold(UPoly::zero(), |acc, p| {
            acc.gcd(&UPoly::from_polynomial(p, 0).expect("univariate"))
        });
        if g.is_zero() || !g.is_constant() {
            let u = if g.is_zero() {
                Some(BigRational::zero())
            } else {
                g.squarefree_part().linear_root()
            };
            return Some(AffineOutcome::Found {
                point: u.map(|u| vec![u, b.clone()]),
                description: format!(
                    "{} = {}, {} a root of {}",
                    name(1),
                    b,
                    name(0),
                    g.to_string_in(&name(0))
                ),
            });
        }
    }
    None
}

/// Polynomial in `x1` with coefficients in `Q[t]/(m)`, ascending, trimmed.
type ExtPoly = Vec<UPoly>;

fn to_ext(p: &Polynomial, m: &UPoly) -> ExtPoly {
    let coeffs = p.coefficients_in(0);
    let ext = coeffs
        .iter()
        .map(|c| {
            UPoly::from_polynomial(c, 1)
                .expect("bivariate coefficient")
                .rem(m)
        })
        .collect();
    trim(ext)
}

fn trim(mut p: ExtPoly) -> ExtPoly {
    while p.last().is_some_and(UPoly::is_zero) {
        p.pop();
    }
    p
}

fn reduce(p: &ExtPoly, m: &UPoly) -> ExtPoly {
    trim(p.iter().map(|c| c.rem(m)).collect())
}

/// `a mod b` for monic `b`.
fn rem_monic(a: &ExtPoly, b: &ExtPoly, m: &UPoly) -> ExtPoly {
    let mut r = a.clone();
    while r.len() >= b.len() {
        let c = r.last().expect("nonempty").clone();
        let shift = r.len() - b.len();
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].sub(&c.mul(bj)).rem(m);
        }
        r = trim(r);
    }
    r
}

/// gcd of `a` and `b` over `Q[t]/(m)`, splitting `m` as needed. Returns
/// `(factor, gcd)` pairs whose factors multiply to `m`.
fn gcd_pair(m: UPoly, a: ExtPoly, b: ExtPoly) -> Vec<(UPoly, ExtPoly)> {
    let mut out = Vec::new();
    let mut stack = vec![(m, a, b)];
    while let Some((m, a, b)) = stack.pop() {
        let Some(lc) = b.last() else {
            out.push((m, a));
            continue;
        };
        let (g, inverse) = lc.gcd_with_cofactor(&m);
        if !g.is_constant() {
            let cofactor = m.div_rem(&g).0;
            for f in [g, cofactor] {
                let (ra, rb) = (reduce(&a, &f), reduce(&b, &f));
                stack.push((f, ra, rb));
            }
            continue;
        }
        let monic: ExtPoly = b.iter().map(|c| c.mul(&inverse).rem(&m)).collect();
        let r = rem_monic(&a, &monic, &m);
        stack.push((m, monic, r));
    }
    out
}

fn gcd_all(m: UPoly, polys: &[ExtPoly]) -> Vec<(UPoly, ExtPoly)> {
    let mut done = Vec::new();
    let mut stack = vec![(m, 0usize, ExtPoly::new())];
    while let Some((m, i, g)) = stack.pop() {
        if i == polys.len() {
            done.push((m, g));
            continue;
        }
        let next = reduce(&polys[i], &m);
        for (f, h) in gcd_pair(m.clone(), reduce(&g, &m), next) {
            stack.push((f, i + 1, h));
        }
    }
    done
}

fn split_gcd_search(polys: &[Polynomial], r: UPoly) -> AffineOutcome {
    let ext: Vec<ExtPoly> = polys.iter().map(|p| to_ext(p, &r)).collect();
    let components = gcd_all(r.clone(), &ext);
    for (factor, g) in &components {
        if g.len() == 1 {
            continue;
        }
        let point = factor.linear_root().and_then(|t| {
            let at_t = UPoly::new(g.iter().map(|c| c.evaluate(&t)).collect());
            let u = if at_t.is_zero() {
                Some(BigRational::zero())
            } else {
                at_t.squarefree_part().linear_root()
            };
            u.map(|u| vec![u, t])
        });
        let shown = if g.is_empty() {
            "every form vanishes".to_string()
        } else {
            let deg = g.len() - 1;
            format!("a common factor of degree {deg} in {} remains", name(0))
        };
        return AffineOutcome::Found {
            point,
            description: format!(
                "over the roots {} of {}, {}",
                name(1),
                factor.to_string_in(&name(1)),
                shown
            ),
        };
    }
    AffineOutcome::None(format!(
        "candidates {} = roots of {}; gcd in {} is a unit on all {} component(s)",
        name(1),
        r.to_string_in(&name(1)),
        name(0),
        components.len()
    ))
}

fn monte_carlo<R: Rng>(forms: &[Polynomial], nvars: usize, rng: &mut R) -> ZeroSearch {
    let check = |p: Vec<BigRational>| -> Option<ZeroSearch> {
        if is_common_zero(forms, &p) {
            Some(ZeroSearch::Found(ZeroWitness {
                description: format!("every form vanishes at [{}]", join(&p)),
                point: Some(p),
            }))
        } else {
            None
        }
    };
    if nvars <= 16 {
        for mask in 1u32..(1 << nvars) {
            let p = (0..nvars)
                .map(|i| BigRational::from_integer(((mask >> i) & 1).into()))
                .collect();
            if let Some(found) = check(p) {
                return found;
            }
        }
    }
    for _ in 0..MONTE_CARLO_TRIALS {
        let p: Vec<BigRational> = (0..nvars)
            .map(|_| BigRational::from_integer(rng.gen_range(-3..=3).into()))
            .collect();
        if p.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(found) = check(p) {
            return found;
        }
    }
    ZeroSearch::Undetermined {
        reason: format!(
            "no common zero among {MONTE_CARLO_TRIALS} random small points in {nvars} variables"
        ),
    }
}
