//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regular_affine::data;
use regular_affine::divisor::{
    check_effective, check_pushpull_identity, combine_unvalidated, compute_d, find_essential,
    validate_resolution, Constraint, PushforwardMap, ResolutionDatum, Side,
};
use regular_affine::dynamics::{
    is_regular, AffineAutomorphism, BitBudget, Direction, DynamicsError, MapDefinition, Regularity,
};
use regular_affine::heights::{
    canonical_plus, functional_equation_residual, height_growth_constant, is_periodic_by_height,
    weil_height, EstimateOptions, HeightConvention, PeriodicityOptions, PeriodicityVerdict,
    ProjectivePoint,
};
use regular_affine::inequality::{batch_verify, Sampler};
use regular_affine::poly::{integer, parse_polynomial, rational};

/// Limit of `h(f^n P) / 2^n` at `P = (1, 1, 1)`, from an independent
/// exact-integer run to depth 14.
const PLUS_LIMIT_ONES: f64 = 0.465_200_271_784_05;

fn pt(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| integer(x)).collect()
}

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Result<String, String> {
    let (v, w) = data::henon3_resolutions();
    let system = combine_unvalidated(&v, &w).map_err(|e| e.to_string())?;
    let d = compute_d(&system);
    let expect: Vec<BigRational> = [
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
    ]
    .iter()
    .map(|&(n, m)| rational(n, m))
    .collect();
    ensure(d.coeffs() == &expect[..], format!("D = {d}"))?;
    let labels: Vec<&str> = d.basis().labels().iter().map(String::as_str).collect();
    ensure(
        labels
            == [
                "H", "E1", "E2", "E3", "E4", "E5", "F1", "F2", "F3", "F4", "F5", "F6", "F7",
            ],
        format!("basis {labels:?}"),
    )?;
    Ok(format!("D = {d}"))
}

fn criterion_2() -> Result<String, String> {
    let (mut v, mut w) = data::henon3_resolutions();
    v.t = None;
    w.t = None;
    let tv =
        find_essential(&v, &PushforwardMap::of_datum(&v).unwrap()).map_err(|e| e.to_string())?;
    let tw =
        find_essential(&w, &PushforwardMap::of_datum(&w).unwrap()).map_err(|e| e.to_string())?;
    ensure(tv == 5 && tw == 4, format!("essential indices {tv}, {tw}"))?;
    v.t = Some(tv);
    w.t = Some(tw);
    for datum in [&v, &w] {
        let r = validate_resolution(datum);
        ensure(
            r.passed(),
            format!("{} side violations: {:?}", datum.side, r.violations),
        )?;
    }
    Ok(format!(
        "essential {} and {}, all constraints hold",
        v.exceptional_labels()[tv - 1],
        w.exceptional_labels()[tw - 1]
    ))
}

fn random_valid(rng: &mut ChaCha8Rng, side: Side, own: i64, other: i64) -> ResolutionDatum {
    let k = rng.gen_range(1..=6usize);
    let t = rng.gen_range(1..=k);
    let mut a = vec![1];
    let mut b = vec![own];
    for i in 1..=k {
        if i == t {
            a.push(other);
            b.push(1);
        } else {
            let bi = rng.gen_range(1..=5);
            b.push(bi);
            a.push(rng.gen_range(0..=other * bi));
        }
    }
    ResolutionDatum {
        name: None,
        side,
        degree_own: own,
        degree_other: other,
        labels: None,
        a,
        b,
        t: Some(t),
        pushforward: None,
    }
}

fn random_pair(rng: &mut ChaCha8Rng) -> (ResolutionDatum, ResolutionDatum) {
    let d = rng.gen_range(1..=5);
    let dp = rng.gen_range(1..=5);
    (
        random_valid(rng, Side::Forward, d, dp),
        random_valid(rng, Side::Inverse, dp, d),
    )
}

/// Breaks exactly one constraint of `datum`; returns which.
fn break_one(rng: &mut ChaCha8Rng, datum: &mut ResolutionDatum, kind: usize) -> Option<Constraint> {
    let t = datum.t.unwrap();
    let others: Vec<usize> = (1..=datum.k()).filter(|&i| i != t).collect();
    let pick = |rng: &mut ChaCha8Rng| others[rng.gen_range(0..others.len())];
    let other = datum.degree_other;
    Some(match kind {
        0 => {
            datum.a[0] = [0, 2, 3, -1][rng.gen_range(0..4)];
            Constraint::PullbackHyperplane
        }
        1 => {
            datum.b[0] = datum.degree_own + rng.gen_range(1..=3);
            Constraint::MapHyperplane
        }
        2 => {
            datum.a[t] = rng.gen_range(0..other);
            Constraint::EssentialPullback
        }
        3 => {
            datum.b[t] = rng.gen_range(2..=5);
            Constraint::EssentialMultiplicity
        }
        4 if !others.is_empty() => {
            let i = pick(rng);
            datum.b[i] = 0;
            datum.a[i] = 0;
            Constraint::PositiveMultiplicity
        }
        5 if !others.is_empty() => {
            let i = pick(rng);
            datum.a[i] = -rng.gen_range(1..=5);
            Constraint::NonnegativePullback
        }
        6 if !others.is_empty() => {
            let i = pick(rng);
            datum.a[i] = other * datum.b[i] + rng.gen_range(1..=5);
            Constraint::Dominance
        }
        _ => return None,
    })
}

fn criterion_3() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_015);
    let mut valid = 0;
    while valid < 10_000 {
        let (v, w) = random_pair(&mut rng);
        for datum in [&v, &w] {
            let r = validate_resolution(datum);
            ensure(
                r.passed(),
                format!(
                    "generator produced invalid datum {datum:?}: {:?}",
                    r.violations
                ),
            )?;
        }
        let d = compute_d(&combine_unvalidated(&v, &w).map_err(|e| e.to_string())?);
        ensure(
            check_effective(&d).effective,
            format!("valid data gave D = {d}"),
        )?;
        valid += 1;
    }
    let mut violating = 0;
    let mut per_kind = [0usize; 7];
    while violating < 2_100 {
        let (mut v, mut w) = random_pair(&mut rng);
        let kind = violating % 7;
        let target = if rng.gen_bool(0.5) { &mut v } else { &mut w };
        let Some(constraint) = break_one(&mut rng, target, kind) else {
            continue;
        };
        let report = validate_resolution(target);
        let kinds: std::collections::HashSet<Constraint> =
            report.violations.iter().map(|x| x.constraint).collect();
        ensure(
            kinds.len() == 1 && kinds.contains(&constraint),
            format!("expected only {constraint:?}, got {:?}", report.violations),
        )?;
        let d = compute_d(&combine_unvalidated(&v, &w).map_err(|e| e.to_string())?);
        let effective = check_effective(&d).effective;
        ensure(
            effective == (constraint != Constraint::Dominance),
            format!("{constraint:?} violation gave effective = {effective}, D = {d}"),
        )?;
        per_kind[kind] += 1;
        violating += 1;
    }
    Ok(format!("{valid} valid pairs effective; {violating} single violations {per_kind:?}, non-effective exactly on dominance"))
}

fn criterion_4() -> Result<String, String> {
    let good = MapDefinition::parse(data::HENON3_MAP)
        .and_then(|d| d.to_automorphism())
        .map_err(|e| e.to_string())?;
    ensure(
        good == AffineAutomorphism::henon(3),
        "bundled map differs from the built-in Henon map",
    )?;
    let vars = ["x", "y", "z"];
    let p = |s: &str| parse_polynomial(s, &vars).unwrap();
    let forward = vec![p("y"), p("z + y^2"), p("x + z^2")];
    let printed = vec![p("z - (y - x^2)"), p("x"), p("y - x^2")];
    match AffineAutomorphism::new(forward, printed) {
        Err(DynamicsError::NotInverse {
            composition,
            coordinate,
            residual,
        }) => {
            ensure(residual != "0", "zero residual")?;
            Ok(format!("corrected inverse verifies; unsquared inverse: {composition} coordinate {coordinate} residual {residual}"))
        }
        other => Err(format!("unsquared inverse was not rejected: {other:?}")),
    }
}

fn criterion_5() -> Result<String, String> {
    let henon = is_regular(&data::henon3(), 0);
    ensure(
        henon.verdict == Regularity::Regular,
        format!("henon3: {:?}", henon),
    )?;
    let tri = MapDefinition::parse(data::TRIANGULAR2_MAP)
        .and_then(|d| d.to_automorphism())
        .map_err(|e| e.to_string())?;
    let r = is_regular(&tri, 0);
    ensure(
        r.verdict == Regularity::NotRegular,
        format!("triangular: {r:?}"),
    )?;
    let w = r.witness.and_then(|w| w.point).ok_or("no witness point")?;
    let (phi, psi) = tri.homogenize_pair();
    for m in [phi, psi] {
        let image = m.evaluate(&w).map_err(|e| e.to_string())?;
        ensure(
            image.iter().all(Zero::is_zero),
            "witness is not indeterminate",
        )?;
    }
    let coords: Vec<String> = w.iter().map(ToString::to_string).collect();
    Ok(format!(
        "henon3 regular; triangular not_regular at [{}]",
        coords.join(" : ")
    ))
}

fn criterion_6() -> Result<String, String> {
    let map = data::henon3();
    let seeds = "1,1,1;1,0,0;0,1,0;0,0,1;1,-1,2";
    let small: Sampler = format!("box:5+orbit:8:{seeds}").parse().unwrap();
    let large: Sampler = format!("box:7+orbit:8:{seeds}").parse().unwrap();
    let a = batch_verify(&map, "henon3", &small, BitBudget::DEFAULT).map_err(|e| e.to_string())?;
    let b = batch_verify(&map, "henon3", &large, BitBudget::DEFAULT).map_err(|e| e.to_string())?;
    ensure(
        a.records.len() == 1331 + 45,
        format!("{} records", a.records.len()),
    )?;
    ensure(
        a.min_delta.is_finite() && b.min_delta.is_finite(),
        "non-finite minimum",
    )?;
    let change = (a.min_delta - b.min_delta).abs();
    ensure(
        change < 0.05,
        format!("min_delta {} -> {}", a.min_delta, b.min_delta),
    )?;
    Ok(format!(
        "min_delta {:.6} (box 5) vs {:.6} (box 7), change {change:.2e} < 0.05",
        a.min_delta, b.min_delta
    ))
}

fn criterion_7() -> Result<String, String> {
    let map = data::henon3();
    let ones = pt(&[1, 1, 1]);
    let e = canonical_plus(&map, &ones, EstimateOptions::depth(10)).map_err(|e| e.to_string())?;
    let diff = (e.values[6] - e.values[10]).abs();
    ensure(diff < 1e-2, format!("terms 6 and 10 differ by {diff}"))?;
    ensure(e.tail_bound <= 1e-2, format!("tail bound {}", e.tail_bound))?;
    ensure(
        (e.value() - PLUS_LIMIT_ONES).abs() <= e.tail_bound,
        format!(
            "limit {PLUS_LIMIT_ONES} outside {} +/- {}",
            e.value(),
            e.tail_bound
        ),
    )?;
    let r = functional_equation_residual(&map, &ones, 8, HeightConvention::Sum, BitBudget::DEFAULT)
        .map_err(|e| e.to_string())?;
    ensure(r.certified && r.residual <= r.width, format!("{r:?}"))?;
    Ok(format!(
        "|v6 - v10| = {diff:.2e}, tail(10) = {:.2e}, residual(8) = {:.2e} <= {:.2e}",
        e.tail_bound, r.residual, r.width
    ))
}

fn criterion_8() -> Result<String, String> {
    let map = data::henon3();
    let z = is_periodic_by_height(&map, &pt(&[0, 0, 0]), PeriodicityOptions::new(1e-3))
        .map_err(|e| e.to_string())?;
    ensure(
        matches!(z.verdict, PeriodicityVerdict::Periodic { .. }) && z.height.value == 0.0,
        format!("origin: {} with height {}", z.verdict, z.height.value),
    )?;
    let o = is_periodic_by_height(&map, &pt(&[1, 1, 1]), PeriodicityOptions::new(1e-3))
        .map_err(|e| e.to_string())?;
    let (lower, _) = o.height.interval();
    ensure(
        o.verdict == PeriodicityVerdict::Wandering && o.height.certified && lower > 0.3,
        format!("(1,1,1): {} with interval lower end {lower}", o.verdict),
    )?;
    Ok(format!(
        "(0,0,0) {} with h = 0; (1,1,1) wandering with h >= {lower:.6}",
        z.verdict
    ))
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    rational(rng.gen_range(-30..=30), rng.gen_range(1..=12))
}

fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let coords: Vec<BigRational> = (0..4).map(|_| random_rational(&mut rng)).collect();
        if coords.iter().all(Zero::is_zero) {
            continue;
        }
        let base = ProjectivePoint::from_rationals(&coords).unwrap();
        let mut s = random_rational(&mut rng);
        if s.is_zero() {
            s = rational(7, 3);
        }
        let scaled: Vec<BigRational> = coords.iter().map(|c| c * &s).collect();
        ensure(
            ProjectivePoint::from_rationals(&scaled).unwrap() == base,
            "scaling changed the point",
        )?;
    }
    let map = data::henon3();
    let mut checked = 0;
    for dir in [Direction::Forward, Direction::Inverse] {
        let c = height_growth_constant(&map, dir);
        let d = f64::from(map.degree_of(dir));
        for _ in 0..500 {
            let p: Vec<BigRational> = (0..3).map(|_| random_rational(&mut rng)).collect();
            let image = map.apply(&p, dir).map_err(|e| e.to_string())?;
            let (h, hf) = (weil_height(&p).log, weil_height(&image).log);
            ensure(
                hf <= d * h + c + 1e-9,
                format!("h(f{p:?}) = {hf} > {d} * {h} + {c}"),
            )?;
            checked += 1;
        }
    }
    let (v, w) = data::henon3_resolutions();
    for datum in [&v, &w] {
        ensure(
            check_pushpull_identity(datum, &PushforwardMap::of_datum(datum).unwrap()),
            format!("pushforward identity fails on the {} datum", datum.side),
        )?;
    }
    Ok(format!("scaling invariance on 500 points, growth bound on {checked} points, pushforward identity on both bundled tables"))
}

fn main() {
    let criteria: [(&str, Check, Duration); 9] = [
        (
            "1 exact D from the bundled tables",
            criterion_1,
            Duration::from_secs(1),
        ),
        (
            "2 essential divisors and validation",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            "3 ledger fuzz equivalence",
            criterion_3,
            Duration::from_secs(30),
        ),
        (
            "4 inverse verification",
            criterion_4,
            Duration::from_secs(1),
        ),
        ("5 regularity verdicts", criterion_5, Duration::from_secs(5)),
        (
            "6 lower bound stabilizes (box 5 vs 7)",
            criterion_6,
            Duration::from_secs(120),
        ),
        (
            "7 canonical height convergence",
            criterion_7,
            Duration::from_secs(120),
        ),
        (
            "8 periodicity by height",
            criterion_8,
            Duration::from_secs(30),
        ),
        (
            "9 height properties and pushforward identity",
            criterion_9,
            Duration::from_secs(30),
        ),
    ];
    let mut failures = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "[{}] criterion {name} ({:.2?} of {:?}): {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed,
            limit
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
