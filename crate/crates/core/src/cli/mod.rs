//! The `regaff` command line.
//!
//! Exit status 0 means the check passed, 1 that a verification failed or
//! was inconclusive, 2 that the input could not be used.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use crate::data;
use crate::divisor::{run_ledger, LedgerReport, ResolutionDatum};
use crate::dynamics::{
    is_regular, orbit, AffineAutomorphism, BitBudget, Direction, MapDefinition, OrbitError,
    Regularity, RegularityReport,
};
use crate::heights::{
    canonical, functional_equation_residual, is_periodic_by_height, CanonicalHeight,
    EstimateOptions, HeightConvention, PeriodicityOptions, PeriodicityReport, ProjectivePoint,
    ResidualReport,
};
use crate::inequality::{
    parse_point, stabilization, Sampler, StabilizationOptions, StabilizationReport,
    StabilizationVerdict, Statistic,
};
use crate::report::{format_point, serialize_display_vec, serialize_points};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "regaff",
    version,
    about = "Heights and divisor ledgers for regular affine automorphisms"
)]
pub struct Cli {
    /// Largest bit length allowed for any numerator or denominator.
    #[arg(long, global = true, env = "REGAFF_BIT_BUDGET", default_value_t = BitBudget::DEFAULT.0)]
    pub bit_budget: u64,
    /// Report format; `text` prints a short summary.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the inverse and decide regularity.
    VerifyMap(MapArgs),
    /// Exact orbit of a point.
    Orbit(OrbitArgs),
    /// Weil height of a point.
    Height(HeightArgs),
    /// Canonical height estimates.
    Canonical(CanonicalArgs),
    /// Lower-bound statistics over a sample, with a stabilization verdict.
    Inequality(InequalityArgs),
    /// Validate resolution tables and compute the divisor D.
    Divisor(DivisorArgs),
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Map definition file.
    pub map: PathBuf,
    /// Read the inverse from this file instead of the map file. The pair is
    /// still verified.
    #[arg(long)]
    pub trust_inverse: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Starting point, e.g. `1,1,1` or `(1/2,0,3)`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Iterate the inverse.
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Debug, Args)]
pub struct HeightArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Debug, Args)]
pub struct CanonicalArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Number of iterates; defaults to 10 when no tolerance is given.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Iterate until the tail bound is at most this.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Combine the one-sided heights as `h+ - h-`.
    #[arg(long)]
    pub minus_convention: bool,
    /// Also classify the point as periodic or wandering.
    #[arg(long)]
    pub classify: bool,
    /// Also evaluate the functional equation at the same depth.
    #[arg(long)]
    pub residual: bool,
}

#[derive(Debug, Args)]
pub struct InequalityArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// `box:B`, `rational:N/D`, `random:COUNT:N/D`, `orbit:DEPTH:P;P`,
    /// `points:P;P`, joined with `+`.
    #[arg(long, default_value = "rational:5/3", allow_hyphen_values = true)]
    pub sampler: String,
    /// Evaluate `sum (1/d_i) h(z_i P) - h(P)` over `{phi0, psi0}`.
    #[arg(long)]
    pub silverman: bool,
    /// Largest change of the minimum allowed under a fourfold enlargement.
    #[arg(long, default_value_t = 0.05)]
    pub slack: f64,
    /// Skip the regularity check and record the map as asserted regular.
    #[arg(long)]
    pub assume_regular: bool,
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    /// Forward-side datum (JSON); defaults to the bundled table.
    #[arg(long)]
    pub forward: Option<PathBuf>,
    /// Inverse-side datum (JSON); defaults to the bundled table.
    #[arg(long)]
    pub inverse: Option<PathBuf>,
}

/// A failure that prevents a command from running at all.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::error::Error> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

struct Output {
    json: serde_json::Value,
    csv: Option<Vec<Vec<String>>>,
    text: String,
    passed: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return if code == 0 { EXIT_PASS } else { EXIT_INPUT };
        }
    };
    match run(&cli) {
        Ok(out) => match emit(&cli, &out, stdout) {
            Ok(()) => {
                if out.passed {
                    EXIT_PASS
                } else {
                    EXIT_FAIL
                }
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: {}", e.0);
                EXIT_INPUT
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.0);
            EXIT_INPUT
        }
    }
}

fn emit(cli: &Cli, out: &Output, stdout: &mut dyn Write) -> Result<(), InputError> {
    let body = match cli.format {
        Format::Text => out.text.clone(),
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Csv => {
            let rows = out.csv.as_ref().ok_or_else(|| {
                InputError("this command has no CSV form; use --format json".into())
            })?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.write_record(row)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| InputError(e.to_string()))?)?
        }
    };
    match &cli.out {
        Some(path) => {
            std::fs::write(path, body)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            if cli.format != Format::Text {
                stdout.write_all(out.text.as_bytes())?;
            }
        }
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Output, InputError> {
    let budget = BitBudget(cli.bit_budget);
    if budget.0 == 0 {
        return Err(InputError("--bit-budget must be positive".into()));
    }
    match &cli.command {
        Command::VerifyMap(args) => verify_map(args, cli.seed),
        Command::Orbit(args) => cmd_orbit(args, budget),
        Command::Height(args) => cmd_height(args),
        Command::Canonical(args) => cmd_canonical(args, budget),
        Command::Inequality(args) => cmd_inequality(args, budget, cli.seed),
        Command::Divisor(args) => cmd_divisor(args),
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

struct LoadedMap {
    id: String,
    map: AffineAutomorphism,
}

fn load_map(args: &MapArgs) -> Result<Result<LoadedMap, String>, InputError> {
    let text = read(&args.map)?;
    let mut def = MapDefinition::parse(&text)
        .map_err(|e| InputError(format!("{}: {e}", args.map.display())))?;
    if let Some(inv) = &args.trust_inverse {
        def.attach_inverse(&read(inv)?)
            .map_err(|e| InputError(format!("{}: {e}", inv.display())))?;
    }
    let id = def.id.clone().unwrap_or_else(|| {
        args.map
            .file_stem()
            .map_or_else(|| "map".into(), |s| s.to_string_lossy().into_owned())
    });
    match def.to_automorphism() {
        Ok(map) => Ok(Ok(LoadedMap { id, map })),
        Err(crate::dynamics::MapFileError::Verification(e)) => Ok(Err(e.to_string())),
        Err(e) => Err(InputError(format!("{}: {e}", args.map.display()))),
    }
}

/// Loads a map for the commands that need a verified pair.
fn require_map(args: &MapArgs) -> Result<LoadedMap, InputError> {
    load_map(args)?.map_err(|e| InputError(format!("inverse verification failed: {e}")))
}

fn point_arg(text: &str, dim: Option<usize>) -> Result<Vec<BigRational>, InputError> {
    let p = parse_point(text).map_err(|e| InputError(format!("--point: {e}")))?;
    if let Some(n) = dim {
        if p.len() != n {
            return Err(InputError(format!(
                "--point has {} coordinates, the map acts on A^{n}",
                p.len()
            )));
        }
    }
    Ok(p)
}

fn homogeneous(point: &[BigRational]) -> String {
    let parts: Vec<String> = point.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(" : "))
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    map_id: &'a str,
    inverse_verified: bool,
    verification_error: Option<String>,
    degree: Option<u32>,
    inverse_degree: Option<u32>,
    regularity: Option<&'a RegularityReport>,
}

fn verify_map(args: &MapArgs, seed: u64) -> Result<Output, InputError> {
    let loaded = load_map(args)?;
    let (id, map) = match loaded {
        Ok(l) => (l.id, l.map),
        Err(e) => {
            let id = args.map.display().to_string();
            let report = VerifyReport {
                map_id: &id,
                inverse_verified: false,
                verification_error: Some(e.clone()),
                degree: None,
                inverse_degree: None,
                regularity: None,
            };
            return Ok(Output {
                json: serde_json::to_value(&report)?,
                csv: Some(vec![
                    vec![
                        "map_id".into(),
                        "verdict".into(),
                        "d".into(),
                        "d_prime".into(),
                    ],
                    vec![
                        id.clone(),
                        "inverse_not_verified".into(),
                        String::new(),
                        String::new(),
                    ],
                ]),
                text: format!("inverse not verified: {e}\n"),
                passed: false,
            });
        }
    };
    let reg = is_regular(&map, seed);
    let (d, dp) = (map.degree(), map.inverse_degree());
    let mut text = format!("{}, d={d}, d'={dp}\n", reg.verdict);
    for line in &reg.certificate {
        text.push_str(&format!("  {line}\n"));
    }
    if let Some(w) = &reg.witness {
        match &w.point {
            Some(p) => text.push_str(&format!("  witness {}\n", homogeneous(p))),
            None => text.push_str(&format!("  witness {}\n", w.description)),
        }
    }
    if let Some(note) = &reg.note {
        text.push_str(&format!("  note: {note}\n"));
    }
    let report = VerifyReport {
        map_id: &id,
        inverse_verified: true,
        verification_error: None,
        degree: Some(d),
        inverse_degree: Some(dp),
        regularity: Some(&reg),
    };
    Ok(Output {
        json: serde_json::to_value(&report)?,
        csv: Some(vec![
            vec![
                "map_id".into(),
                "verdict".into(),
                "d".into(),
                "d_prime".into(),
            ],
            vec![
                id.clone(),
                reg.verdict.to_string(),
                d.to_string(),
                dp.to_string(),
            ],
        ]),
        text,
        passed: reg.verdict == Regularity::Regular,
    })
}

#[derive(Serialize)]
struct OrbitReport {
    map_id: String,
    direction: Direction,
    requested_depth: usize,
    completed_depth: usize,
    complete: bool,
    #[serde(serialize_with = "serialize_points")]
    points: Vec<Vec<BigRational>>,
    #[serde(serialize_with = "serialize_display_vec")]
    max_coordinates: Vec<num_bigint::BigUint>,
}

fn cmd_orbit(args: &OrbitArgs, budget: BitBudget) -> Result<Output, InputError> {
    let loaded = require_map(&args.map)?;
    let start = point_arg(&args.point, Some(loaded.map.dimension()))?;
    let direction = if args.inverse {
        Direction::Inverse
    } else {
        Direction::Forward
    };
    let (points, complete) = match orbit(&loaded.map, &start, args.depth, direction, budget) {
        Ok(p) => (p, true),
        Err(OrbitError::BudgetExceeded { partial, .. }) => (partial, false),
        Err(e) => return Err(e.into()),
    };
    let max_coordinates: Vec<_> = points
        .iter()
        .map(|p| ProjectivePoint::from_affine(p).max_abs())
        .collect();
    let mut text = String::new();
    let mut rows = vec![vec!["k".to_string(), "point".into(), "max_abs".into()]];
    for (k, (p, m)) in points.iter().zip(&max_coordinates).enumerate() {
        text.push_str(&format!("{k}: {}\n", format_point(p)));
        rows.push(vec![k.to_string(), format_point(p), m.to_string()]);
    }
    if !complete {
        text.push_str(&format!(
            "stopped after {} of {} steps: bit budget of {} bits exceeded\n",
            points.len() - 1,
            args.depth,
            budget.0
        ));
    }
    let report = OrbitReport {
        map_id: loaded.id,
        direction,
        requested_depth: args.depth,
        completed_depth: points.len() - 1,
        complete,
        points,
        max_coordinates,
    };
    Ok(Output {
        json: serde_json::to_value(&report)?,
        csv: Some(rows),
        text,
        passed: complete,
    })
}

#[derive(Serialize)]
struct HeightReport {
    point: String,
    #[serde(serialize_with = "serialize_display_vec")]
    primitive: Vec<num_bigint::BigInt>,
    #[serde(flatten)]
    height: crate::heights::WeilHeight,
}

fn cmd_height(args: &HeightArgs) -> Result<Output, InputError> {
    let p = point_arg(&args.point, None)?;
    let proj = ProjectivePoint::from_affine(&p);
    let height = proj.height();
    let text = format!(
        "h{} = log {} = {}\n",
        format_point(&p),
        height.max_abs,
        height.log
    );
    let report = HeightReport {
        point: format_point(&p),
        primitive: proj.coords().to_vec(),
        height,
    };
    Ok(Output {
        csv: Some(vec![
            vec!["point".into(), "max_abs".into(), "log".into()],
            vec![
                report.point.clone(),
                report.height.max_abs.to_string(),
                report.height.log.to_string(),
            ],
        ]),
        json: serde_json::to_value(&report)?,
        text,
        passed: true,
    })
}

#[derive(Serialize)]
struct CanonicalReport {
    map_id: String,
    point: String,
    height: CanonicalHeight,
    periodicity: Option<PeriodicityReport>,
    residual: Option<ResidualReport>,
}

fn cmd_canonical(args: &CanonicalArgs, budget: BitBudget) -> Result<Output, InputError> {
    let loaded = require_map(&args.map)?;
    let p = point_arg(&args.point, Some(loaded.map.dimension()))?;
    let depth = match (args.depth, args.tolerance) {
        (None, None) => Some(10),
        (d, _) => d,
    };
    let options = EstimateOptions {
        depth,
        tolerance: args.tolerance,
        budget,
    };
    let convention = if args.minus_convention {
        HeightConvention::Difference
    } else {
        HeightConvention::Sum
    };
    let height = canonical(&loaded.map, &p, options, convention)?;
    let mut passed = height.certified;
    let mut text = format!(
        "h_hat{} = {} +/- {:e} ({})\n  plus:  {} (depth {}, tail {:e})\n  minus: {} (depth {}, tail {:e})\n",
        format_point(&p),
        height.value,
        height.tail_bound,
        if height.certified { "certified" } else { "not certified" },
        height.plus.value(),
        height.plus.depth,
        height.plus.tail_bound,
        height.minus.value(),
        height.minus.depth,
        height.minus.tail_bound,
    );
    let periodicity = if args.classify {
        let mut opts = PeriodicityOptions::new(args.tolerance.unwrap_or(1e-3));
        opts.budget = budget;
        let r = is_periodic_by_height(&loaded.map, &p, opts)?;
        text.push_str(&format!("  classification: {}\n", r.verdict));
        passed &= r.verdict != crate::heights::PeriodicityVerdict::Undetermined;
        Some(r)
    } else {
        None
    };
    let residual = if args.residual {
        let r =
            functional_equation_residual(&loaded.map, &p, depth.unwrap_or(10), convention, budget)?;
        text.push_str(&format!(
            "  functional equation residual {:e} within {:e}: {}\n",
            r.residual, r.width, r.within
        ));
        passed &= r.within && r.certified;
        Some(r)
    } else {
        None
    };
    let mut rows = vec![vec![
        "direction".to_string(),
        "k".into(),
        "max_abs".into(),
        "value".into(),
    ]];
    for est in [&height.plus, &height.minus] {
        for (k, (m, v)) in est.max_coordinates.iter().zip(&est.values).enumerate() {
            rows.push(vec![
                est.direction.to_string(),
                k.to_string(),
                m.to_string(),
                v.to_string(),
            ]);
        }
    }
    let report = CanonicalReport {
        map_id: loaded.id,
        point: format_point(&p),
        height,
        periodicity,
        residual,
    };
    Ok(Output {
        json: serde_json::to_value(&report)?,
        csv: Some(rows),
        text,
        passed,
    })
}

#[derive(Serialize)]
struct InequalityReport {
    map_id: String,
    regularity: String,
    seed: u64,
    #[serde(flatten)]
    stabilization: StabilizationReport,
}

fn cmd_inequality(
    args: &InequalityArgs,
    budget: BitBudget,
    seed: u64,
) -> Result<Output, InputError> {
    let loaded = require_map(&args.map)?;
    let sampler: Sampler = args.sampler.parse::<Sampler>()?.with_seed(seed);
    if args.slack.is_nan() || args.slack <= 0.0 {
        return Err(InputError("--slack must be positive".into()));
    }
    let regularity = if args.assume_regular {
        "asserted".to_string()
    } else {
        let r = is_regular(&loaded.map, seed);
        match r.verdict {
            Regularity::Regular => "certified".into(),
            other => format!("{other} (statistics computed anyway)"),
        }
    };
    let options = StabilizationOptions {
        slack: args.slack,
        statistic: if args.silverman {
            Statistic::Silverman
        } else {
            Statistic::Delta
        },
        ..Default::default()
    };
    let report = stabilization(&loaded.map, &loaded.id, &sampler, budget, options)?;
    let name = if args.silverman {
        "min silverman"
    } else {
        "min_delta"
    };
    let mut text = format!(
        "{}: {name} = {} at {} over {} points ({} skipped)\n",
        report.verdict,
        report.base_min,
        format_point(report.base.argmin()),
        report.base.len(),
        report.base.skipped(),
    );
    if let (Some(s), Some(m), Some(c)) =
        (&report.enlarged_sample, report.enlarged_min, report.change)
    {
        text.push_str(&format!(
            "  enlarged to {s}: {name} = {m}, change {c:e}, slack {}\n",
            report.slack
        ));
    }
    text.push_str(&format!("  regularity: {regularity}\n"));
    let passed = report.verdict != StabilizationVerdict::Fail;
    let mut csv_buf = Vec::new();
    report.base.write_csv(&mut csv_buf)?;
    let rows: Vec<Vec<String>> = csv::Reader::from_reader(csv_buf.as_slice())
        .into_records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()?;
    let header: Vec<String> = if args.silverman {
        ["point", "h", "value", "value_exact"]
            .map(String::from)
            .to_vec()
    } else {
        [
            "point",
            "h",
            "h_forward",
            "h_inverse",
            "delta",
            "delta_exact",
        ]
        .map(String::from)
        .to_vec()
    };
    let full = InequalityReport {
        map_id: loaded.id,
        regularity,
        seed,
        stabilization: report,
    };
    Ok(Output {
        json: serde_json::to_value(&full)?,
        csv: Some(std::iter::once(header).chain(rows).collect()),
        text,
        passed,
    })
}

fn cmd_divisor(args: &DivisorArgs) -> Result<Output, InputError> {
    let datum = |path: &Option<PathBuf>, bundled: &str| -> Result<ResolutionDatum, InputError> {
        let text = match path {
            Some(p) => read(p)?,
            None => bundled.to_string(),
        };
        ResolutionDatum::from_json(&text).map_err(|e| {
            InputError(match path {
                Some(p) => format!("{}: {e}", p.display()),
                None => e.to_string(),
            })
        })
    };
    let v = datum(&args.forward, data::HENON3_FORWARD)?;
    let w = datum(&args.inverse, data::HENON3_INVERSE)?;
    let report: LedgerReport = run_ledger(&v, &w);
    let mut text = String::new();
    for side in [&report.forward, &report.inverse] {
        if side.passed() {
            text.push_str(&format!("{} datum: all constraints hold\n", side.side));
        }
        for viol in &side.violations {
            text.push_str(&format!("{} datum: FAIL {viol}\n", side.side));
        }
    }
    for e in &report.errors {
        text.push_str(&format!("FAIL {e}\n"));
    }
    if let (Some(e), Some(f)) = (&report.essential_forward, &report.essential_inverse) {
        text.push_str(&format!("essential divisors: {e}, {f}\n"));
    }
    for (side, ok) in [
        ("forward", report.pushpull_forward),
        ("inverse", report.pushpull_inverse),
    ] {
        match ok {
            Some(true) => text.push_str(&format!("{side} pushforward of the pullback of H is H\n")),
            Some(false) => text.push_str(&format!(
                "FAIL {side} pushforward of the pullback of H is not H\n"
            )),
            None => {}
        }
    }
    let mut rows = vec![vec!["label".to_string(), "coefficient".into()]];
    if let (Some(d), Some(eff)) = (&report.d, &report.effectivity) {
        text.push_str(&format!("D = {d}\n"));
        match &eff.first_negative {
            None => text.push_str("D is effective\n"),
            Some((label, c)) => text.push_str(&format!(
                "FAIL D is not effective: coefficient {c} on {label}\n"
            )),
        }
        for (l, c) in d.basis().labels().iter().zip(d.coeffs()) {
            rows.push(vec![l.clone(), c.to_string()]);
        }
    }
    Ok(Output {
        json: serde_json::to_value(&report)?,
        csv: Some(rows),
        text,
        passed: report.passed(),
    })
}
