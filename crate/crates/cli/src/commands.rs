use kahler_twistor::bilinear::{theorem1_residual, BilinearContext, GapSpec, Theorem1Options};
use kahler_twistor::identities::{field_suite, fiber_suite, IdentityReport};
use kahler_twistor::sample;
use kahler_twistor::twistor::{solve_space_unbounded, SolutionSpace, TwistorVariant};
use kahler_twistor::{Error, Exact, Float, Involution, PairingMatrix, Scalar, SpinGeometry, SpinorSection};
use serde_json::{json, Value};
use thiserror::Error as ThisError;

use crate::args::{Backend, IdentityArgs, SolveArgs, Theorem1Args, VariantArgs};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

/// A finished run: the JSON report, summary lines and the verdict.
pub struct Outcome {
    pub report: Value,
    pub summary: Vec<String>,
    pub pass: bool,
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn setup(args: &VariantArgs, m: usize) -> Result<(TwistorVariant, SpinGeometry<Exact>), CliError> {
    let variant = args.variant().map_err(usage)?;
    variant.validate(m).map_err(usage)?;
    let geo = SpinGeometry::<Exact>::flat(m, args.convention).map_err(usage)?;
    Ok((variant, geo))
}

fn space_header(space: &SolutionSpace, args: &VariantArgs) -> Value {
    json!({
        "variant": space.variant.to_string(),
        "m": space.m,
        "r": space.variant.type_index(space.m),
        "degree": space.degree,
        "convention": args.convention.to_string(),
        "dimension": space.dimension,
        "nonconstant_dimension": space.nonconstant().count(),
        "bound": space.bound,
        "bound_respected": space.within_bound(),
    })
}

pub fn verify_identities(args: &IdentityArgs) -> Result<Outcome, CliError> {
    let c = &args.common;
    if c.backend != Backend::Exact {
        return Err(CliError::Usage("identity suites run on the exact backend only".into()));
    }
    let mut reports: Vec<IdentityReport> = fiber_suite(c.m, args.cases, c.seed).map_err(usage)?;
    reports.extend(field_suite(c.m, args.field_cases, args.degree, c.seed).map_err(usage)?);
    let pass = reports.iter().all(|r| r.pass);
    let summary = reports
        .iter()
        .map(|r| {
            let verdict = if r.pass { "pass" } else { "FAIL" };
            format!("{verdict} [{}] {} (m={}, {} cases, {} failures)", r.suite, r.identity, r.m, r.cases, r.failures)
        })
        .collect();
    let report = json!({
        "command": "verify-identities",
        "m": c.m,
        "backend": c.backend.name(),
        "seed": c.seed,
        "cases": args.cases,
        "field_cases": args.field_cases,
        "degree": args.degree,
        "pass": pass,
        "reports": reports,
    });
    Ok(Outcome { report, summary, pass })
}

pub fn solve_twistor(args: &SolveArgs) -> Result<Outcome, CliError> {
    let (variant, geo) = setup(&args.variant, args.common.m)?;
    let space = solve_space_unbounded(&variant, &geo, args.variant.degree).map_err(usage)?;
    let pass = space.within_bound();
    let mut report = space_header(&space, &args.variant);
    report["command"] = json!("solve-twistor");
    report["basis"] = Value::Array(space.basis.iter().map(SpinorSection::to_json).collect());
    let mut summary = vec![format!(
        "{variant}: m={}, degree {}, dimension {} ({} nonconstant)",
        space.m,
        space.degree,
        space.dimension,
        space.nonconstant().count()
    )];
    if let Some(b) = space.bound {
        let verdict = if pass { "respected" } else { "VIOLATED" };
        summary.push(format!("dimension bound {b}: {verdict}"));
    }
    Ok(Outcome { report, summary, pass })
}

pub fn verify_theorem1(args: &Theorem1Args) -> Result<Outcome, CliError> {
    let c = &args.common;
    let (variant, geo) = setup(&args.variant, c.m)?;
    GapSpec::for_variant(&variant, c.m).map_err(usage)?;
    let space = solve_space_unbounded(&variant, &geo, args.variant.degree).map_err(usage)?;
    let mut basis = space.basis.clone();
    if args.corrupt {
        let mut r = sample::rng(c.seed);
        for psi in &mut basis {
            *psi = psi.add(&sample::spinor_section(&mut r, c.m, args.variant.degree.max(1), 2));
        }
    }
    let opts = Theorem1Options { sampling: c.sampling(), ..Theorem1Options::default() };
    let float_geo = match c.backend {
        Backend::Float => Some(SpinGeometry::<Float>::flat(c.m, args.variant.convention).map_err(usage)?),
        Backend::Exact => None,
    };
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &inv in &args.involution.0 {
        let before = rows.len();
        for (i, psi) in basis.iter().enumerate() {
            let result = match &float_geo {
                None => check(&geo, inv, &variant, psi, &opts),
                Some(fg) => check(fg, inv, &variant, &psi.to_float().normalized(), &opts),
            };
            match result {
                Ok(reports) => rows.extend(reports.into_iter().map(|rep| {
                    let mut v = serde_json::to_value(rep).expect("report serializes");
                    v["involution"] = json!(inv.to_string());
                    v["basis_index"] = json!(i);
                    v
                })),
                Err(Error::Precondition(msg)) => rows.push(json!({
                    "involution": inv.to_string(),
                    "basis_index": i,
                    "precondition_failed": msg,
                    "pass": false,
                })),
                Err(e) => return Err(e.into()),
            }
        }
        let own = &rows[before..];
        let passed = own.iter().filter(|r| r["pass"] == json!(true)).count();
        summary.push(format!("{variant} {inv}: {passed}/{} rows pass", own.len()));
    }
    let pass = rows.iter().all(|r| r["pass"] == json!(true));
    let vacuous = space.nonconstant().count() == 0;
    if vacuous {
        summary.push("no solutions beyond constants: vacuous".into());
    }
    let mut report = space_header(&space, &args.variant);
    report["command"] = json!("verify-theorem1");
    report["backend"] = json!(c.backend.name());
    report["seed"] = json!(c.seed);
    report["tolerance"] = json!(c.tolerance);
    report["involutions"] = json!(args.involution.0.iter().map(ToString::to_string).collect::<Vec<_>>());
    report["vacuous"] = json!(vacuous);
    report["pass"] = json!(pass);
    report["rows"] = Value::Array(rows);
    Ok(Outcome { report, summary, pass })
}

fn check<S: Scalar>(
    geo: &SpinGeometry<S>,
    inv: Involution,
    variant: &TwistorVariant,
    psi: &SpinorSection<S>,
    opts: &Theorem1Options,
) -> Result<Vec<kahler_twistor::ResidualReport>, Error> {
    let pairing = PairingMatrix::build(geo.rep(), inv)?;
    let ctx = BilinearContext::new(geo, &pairing)?;
    theorem1_residual(&ctx, variant, psi, opts)
}
