use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use nilcohom::algebra::StructureConstants;
use nilcohom::catalog::{self, CatalogLookup};
use nilcohom::ce::{build_differential, CeError, CohClass, CohomologyBasis, Differential};
use nilcohom::exterior::Form;
use nilcohom::massey::{triple_massey, CupSlot, MasseyOutcome};
use nilcohom::parse::{parse_algebra, parse_form};
use nilcohom::profile::compute_profile;
use nilcohom::rational::format_rational;
use nilcohom::report::{self, class_json, envelope, form_json, matrix_json, rational_json};
use nilcohom::symplectic::{
    check_symplectic, evenness_skew_form, flex_scan, hard_lefschetz, harmonic_cohomology,
    FlexVerdict, PointOutcome, SymplecticData, SymplecticError,
};

const EXIT_DOMAIN: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "nilcohom",
    version,
    about = "Exact invariant cohomology of nilmanifolds: Betti numbers, symplectic \
             diagnostics, harmonic dimensions, Massey products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an algebra and report Jacobi, nilpotency and the lattice criterion
    Validate {
        /// Path to an algebra file, or a catalog name (`catalog:` prefix optional)
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Betti numbers and the Euler characteristic
    Betti {
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Validate a symplectic form and print Ω, Π and the volume form
    Symplectic {
        input: String,
        /// Form expression or a preregistered form name (e.g. `omega1`)
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Lefschetz image ranks and the Hard Lefschetz verdict, plus the
    /// odd-degree skew pairings
    Lefschetz {
        input: String,
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Symplectically harmonic dimensions h_k with the rank cross-check
    Harmonic {
        input: String,
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Triple Massey product of three classes, e.g. --classes "[e1],[e1],[omega]"
    Massey {
        input: String,
        #[arg(long)]
        classes: String,
        #[arg(long)]
        json: bool,
    },
    /// Scan the pencil (1-t)·A + t·B for varying harmonic dimensions
    Flex {
        input: String,
        #[arg(long = "form-a")]
        form_a: String,
        #[arg(long = "form-b")]
        form_b: String,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
        #[arg(long)]
        json: bool,
    },
    /// Three-property profile (Massey / Hard Lefschetz / odd-Betti parity)
    /// with the matched table line
    Profile {
        input: String,
        #[arg(long)]
        form: Option<String>,
        #[arg(long = "massey-bound", default_value_t = 4)]
        massey_bound: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<nilcohom::ParseError> for Failure {
    fn from(e: nilcohom::ParseError) -> Failure {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

impl From<CeError> for Failure {
    fn from(e: CeError) -> Failure {
        Failure::new(EXIT_DOMAIN, e.to_string())
    }
}

impl From<SymplecticError> for Failure {
    fn from(e: SymplecticError) -> Failure {
        match e {
            SymplecticError::OracleMismatch { .. } => Failure::new(
                EXIT_ORACLE,
                format!(
                    "CONVENTION BUG DETECTED — {e}\n\
                     The harmonic/Lefschetz cross-check can only fail through an internal \
                     sign-convention defect. No mathematical conclusion can be drawn."
                ),
            ),
            other => Failure::new(EXIT_DOMAIN, other.to_string()),
        }
    }
}

struct LoadedInput {
    label: String,
    algebra: StructureConstants,
    forms: Vec<(String, Form)>,
}

fn load_input(arg: &str) -> Result<LoadedInput, Failure> {
    let from_catalog = |name: &str| -> Option<Result<LoadedInput, Failure>> {
        match catalog::lookup(name, catalog::extra_catalog_dir().as_deref()) {
            CatalogLookup::Found(entry) => Some(Ok(LoadedInput {
                label: entry.name,
                algebra: entry.algebra,
                forms: entry.forms,
            })),
            CatalogLookup::ParseFailed(e) => Some(Err(e.into())),
            CatalogLookup::NotFound => None,
        }
    };
    if let Some(name) = arg.strip_prefix("catalog:") {
        return from_catalog(name).unwrap_or_else(|| {
            Err(Failure::new(
                EXIT_DOMAIN,
                format!("unknown catalog entry '{name}'"),
            ))
        });
    }
    if Path::new(arg).is_file() {
        let source = std::fs::read_to_string(arg)
            .map_err(|e| Failure::new(EXIT_DOMAIN, format!("cannot read {arg}: {e}")))?;
        let algebra = parse_algebra(&source)?;
        return Ok(LoadedInput {
            label: arg.to_string(),
            algebra,
            forms: Vec::new(),
        });
    }
    from_catalog(arg).unwrap_or_else(|| {
        Err(Failure::new(
            EXIT_DOMAIN,
            format!(
                "'{arg}' is neither a file nor a catalog entry (built-ins: {})",
                catalog::builtin_names().join(", ")
            ),
        ))
    })
}

/// A `--form` argument: a preregistered form name of the entry, or an
/// expression over the algebra's generators.
fn resolve_form(input: &LoadedInput, text: &str) -> Result<Form, Failure> {
    let trimmed = text.trim();
    if let Some((_, form)) = input.forms.iter().find(|(name, _)| name == trimmed) {
        return Ok(form.clone());
    }
    Ok(parse_form(trimmed, &input.algebra)?)
}

fn required_form(input: &LoadedInput, arg: &Option<String>) -> Result<Form, Failure> {
    match arg {
        Some(text) => resolve_form(input, text),
        None => match input.forms.first() {
            Some((_, form)) => Ok(form.clone()),
            None => Err(Failure::new(
                EXIT_DOMAIN,
                "no --form given and the input has no preregistered form",
            )),
        },
    }
}

fn build_complex(input: &LoadedInput) -> Result<(Differential, CohomologyBasis), Failure> {
    let d = build_differential(&input.algebra)?;
    let coh = d.cohomology();
    Ok((d, coh))
}

fn nilpotency_warning(input: &LoadedInput, warnings: &mut Vec<String>) {
    let report = input.algebra.validate();
    if report.jacobi_ok && !report.nilpotent {
        warnings.push(
            "the algebra is not nilpotent: the quasi-isomorphism with the de Rham complex of \
             a compact quotient (Nomizu) does not apply, so these are invariant-form results \
             only"
                .to_string(),
        );
    }
}

fn harmonic_caveat(half_dim: usize, warnings: &mut Vec<String>) {
    if half_dim >= 2 {
        warnings.push(format!(
            "h_k in degrees 0..={} are invariant-form dimensions; agreement with the \
             manifold-level values is established only in degrees {}, {}, {}",
            2 * half_dim - 3,
            2 * half_dim - 2,
            2 * half_dim - 1,
            2 * half_dim,
        ));
    }
}

fn names_of(input: &LoadedInput) -> Option<Vec<String>> {
    input.algebra.names().map(|n| n.to_vec())
}

fn render_form(input: &LoadedInput, form: &Form) -> String {
    form.render(input.algebra.names())
}

fn emit(
    json_mode: bool,
    command: &str,
    input_label: &str,
    results: Value,
    warnings: &[String],
    human: String,
) {
    if json_mode {
        print!(
            "{}",
            report::render(&envelope(command, input_label, results, warnings))
        );
    } else {
        print!("{human}");
        for w in warnings {
            eprintln!("warning: {w}");
        }
    }
}

fn cmd_validate(input_arg: &str, json: bool) -> Result<u8, Failure> {
    let input = load_input(input_arg)?;
    let report = input.algebra.validate();
    let violations: Vec<Value> = report
        .jacobi_violations
        .iter()
        .map(|v| {
            json!({
                "triple": [v.i, v.j, v.k],
                "residual": v.residual.iter().map(format_rational).collect::<Vec<_>>(),
            })
        })
        .collect();
    let results = json!({
        "dim": input.algebra.dim(),
        "generators": input.algebra.names(),
        "jacobi_ok": report.jacobi_ok,
        "jacobi_violations": violations,
        "nilpotent": report.nilpotent,
        "nilpotency_class": report.nilpotency_class,
        "lattice_criterion": report.lattice_criterion,
    });
    let mut human = format!(
        "algebra: {} (dim {})\njacobi: {}\n",
        input.label,
        input.algebra.dim(),
        if report.jacobi_ok {
            "ok".to_string()
        } else {
            format!("{} violation(s)", report.jacobi_violations.len())
        }
    );
    for v in &report.jacobi_violations {
        human.push_str(&format!(
            "  cyclic sum on ({},{},{}) is non-zero\n",
            v.i, v.j, v.k
        ));
    }
    human.push_str(&match report.nilpotency_class {
        Some(class) => format!("nilpotent: yes (class {class})\n"),
        None => "nilpotent: no\n".to_string(),
    });
    human.push_str("lattice criterion: satisfied (rational structure constants)\n");
    let mut warnings = Vec::new();
    nilpotency_warning(&input, &mut warnings);
    emit(json, "validate", &input.label, results, &warnings, human);
    Ok(if report.jacobi_ok && report.nilpotent {
        0
    } else {
        EXIT_DOMAIN
    })
}

fn cmd_betti(input_arg: &str, json: bool) -> Result<u8, Failure> {
    let input = load_input(input_arg)?;
    let (_, coh) = build_complex(&input)?;
    let betti = coh.betti_vector();
    let euler = coh.euler_characteristic();
    let results = json!({ "betti": betti, "euler_characteristic": euler });
    let human = format!(
        "betti: {}\neuler characteristic: {}\n",
        betti
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        euler
    );
    let mut warnings = Vec::new();
    nilpotency_warning(&input, &mut warnings);
    emit(json, "betti", &input.label, results, &warnings, human);
    Ok(0)
}

fn symplectic_data(
    input: &LoadedInput,
    d: &Differential,
    form_arg: &Option<String>,
) -> Result<(Form, SymplecticData), Failure> {
    let form = required_form(input, form_arg)?;
    let s = check_symplectic(d, &form)?;
    Ok((form, s))
}

fn cmd_symplectic(input_arg: &str, form_arg: &Option<String>, json: bool) -> Result<u8, Failure> {
    let input = load_input(input_arg)?;
    let (d, _) = build_complex(&input)?;
    let (form, s) = symplectic_data(&input, &d, form_arg)?;
    let results = json!({
        "valid": true,
        "form": form_json(&form),
        "half_dim": s.half_dim(),
        "omega_matrix": matrix_json(s.omega_matrix()),
        "poisson_bivector": matrix_json(s.poisson_bivector()),
        "volume_form": form_json(s.volume_form()),
        "volume_top_coefficient": rational_json(s.volume_top_coefficient()),
    });
    let human = format!(
        "symplectic form: {} — valid (closed, non-degenerate)\nhalf-dimension m: {}\n\
         volume form ω^m/m!: {}\n",
        render_form(&input, &form),
        s.half_dim(),
        render_form(&input, s.volume_form()),
    );
    let mut warnings = Vec::new();
    nilpotency_warning(&input, &mut warnings);
    emit(json, "symplectic", &input.label, results, &warnings, human);
    Ok(0)
}

fn cmd_lefschetz(input_arg: &str, form_arg: &Option<String>, json: bool) -> Result<u8, Failure> {
    let input = load_input(input_arg)?;
    let (d, coh) = build_complex(&input)?;
    let (form, s) = symplectic_data(&input, &d, form_arg)?;
    let lefschetz = hard_lefschetz(&s, &d, &coh)?;
    let m = s.half_dim();
    let mut skew = Vec::new();
    let mut skew_human = String::new();
    for k in 0.. {
        let degree = 2 * k + 1;
        if degree > m {
            break;
        }
        let (matrix, nondegenerate) = evenness_skew_form(&s, &coh, k);
        skew.push(json!({
            "degree": degree,
            "matrix": matrix_json(&matrix),
            "nondegenerate": nondegenerate,
        }));
        skew_human.push_str(&format!(
            "skew pairing on H^{degree}: {}\n",
            if nondegenerate {
                "non-degenerate"
            } else {
                "degenerate"
            }
        ));
    }
    let entries: Vec<Value> = lefschetz
        .entries
        .iter()
        .map(|e| {
            json!({
                "power": e.power,
                "source_degree": e.source_degree,
                "target_degree": e.target_degree,
                "rank": e.rank,
                "source_betti": e.source_betti,
                "target_betti": e.target_betti,
                "surjective": e.surjective,
                "bijective": e.bijective,
            })
        })
        .collect();
    let results = json!({
        "form": form_json(&form),
        "entries": entries,
        "hard_lefschetz": lefschetz.holds,
        "skew_pairings": skew,
    });
    let mut human = format!("form: {}\n", render_form(&input, &form));
    for e in &lefschetz.entries {
        human.push_str(&format!(
            "L^{}: H^{} -> H^{}  rank {} / target b = {}  [{}]\n",
            e.power,
            e.source_degree,
            e.target_degree,
            e.rank,
            e.target_betti,
            if e.surjective {
                "surjective"
            } else {
                "not surjective"
            }
        ));
    }
    human.push_str(&format!(
        "hard lefschetz: {}\n{}",
        if lefschetz.holds { "holds" } else { "fails" },
        skew_human
    ));
    let mut warnings = Vec::new();
    nilpotency_warning(&input, &mut warnings);
    emit(json, "lefschetz", &input.label, results, &warnings, human);
    Ok(0)
}

fn cmd_harmonic(input_arg: &str, form_arg: &Option<String>, json: bool) -> Result<u8, Failure> {
    let input = load_input(input_arg)?;
    let (d, coh) = build_complex(&input)?;
    let (form, s) = symplectic_data(&input, &d, form_arg)?;
    let summary = harmonic_cohomology(&s, &d, &coh)?;
    let oracle: Vec<Value> = summary
        .oracle
        .iter()
        .map(|(degree, rank, agrees)| {
            json!({ "degree": degree, "lefschetz_rank": rank, "agrees": agrees })
        })
        .collect();
    let results = json!({
        "form": form_json(&form),
        "h": summary.h,
        "betti": coh.betti_vector(),
        "oracle": oracle,
    });
    let mut human = format!(
        "form: {}\nh: {}\nbetti: {}\n",
        render_form(&input, &form),
        summary
            .h
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        coh.betti_vector()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    for (degree, rank, _) in &summary.oracle {
        human.push_str(&format!(
            "cross-check degree {degree}: h = {} = rank of the Lefschetz image = {rank}\n",
            summary.h[*degree]
        ));
    }
    let mut warnings = Vec::new();
    nilpotency_warning(&input, &mut warnings);
    harmonic_caveat(s.half_dim(), &mut warnings);
    emit(json, "harmonic", &input.label, results, &warnings, human);
    Ok(0)
}

/// Splits `"[e1],[e1],[omega]"` into the three bracketed expressions.
fn split_classes(text: &str) -> Result<Vec<String>, Failure> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return Err(Failure::new(
                EXIT_PARSE,
                format!("expected '[' at '{rest}' in the class list"),
            ));
        }
        let Some(end) = rest.find(']') else {
            return Err(Failure::new(EXIT_PARSE, "unbalanced '[' in the class list"));
        };
        out.push(rest[1..end].to_string());
        rest = rest[end + 1..].trim_start();
        if let Some(stripped) = rest.strip_prefix(',') {
            rest = stripped.trim_start();
        } else if !rest.is_empty() {
            return Err(Failure::new(EXIT_PARSE, "expected ',' between classes"));
        }
    }
    Ok(out)
}

fn cmd_massey(input_arg: &str, classes: &str, json: bool) -> Result<u8, Failure> {
    let input = load_input(input_arg)?;
    let (d, coh) = build_complex(&input)?;
    let exprs = split_classes(classes)?;
    if exprs.len() != 3 {
        return Err(Failure::new(
            EXIT_PARSE,
            format!(
                "--classes needs exactly three classes, found {}",
                exprs.len()
            ),
        ));
    }
    let mut parsed: Vec<CohClass> = Vec::new();
    for expr in &exprs {
        let form = resolve_form(&input, expr)?;
        let class = coh.reduce(&d, &form)?;
        parsed.push(class);
    }
    let result = triple_massey(&d, &coh, &parsed[0], &parsed[1], &parsed[2])?;
    let mut warnings = Vec::new();
    nilpotency_warning(&input, &mut warnings);
    match &result.outcome {
        MasseyOutcome::Undefined {
            failing,
            obstruction,
        } => {
            let which = match failing {
                CupSlot::LeftPair => "first·second",
                CupSlot::RightPair => "second·third",
            };
            let results = json!({
                "degrees": [result.degrees.0, result.degrees.1, result.degrees.2],
                "defined": false,
                "failing_cup": which,
                "obstruction": class_json(obstruction),
            });
            let human =
                format!("massey product is not defined: the {which} cup product is non-zero\n");
            emit(json, "massey", &input.label, results, &warnings, human);
            Ok(EXIT_DOMAIN)
        }
        MasseyOutcome::Defined(p) => {
            let results = json!({
                "degrees": [result.degrees.0, result.degrees.1, result.degrees.2],
                "defined": true,
                "witness_x": form_json(&p.x),
                "witness_y": form_json(&p.y),
                "representative": form_json(&p.representative),
                "representative_class": class_json(&p.class),
                "indeterminacy": p.indeterminacy.iter().map(class_json).collect::<Vec<_>>(),
                "trivial": p.trivial,
            });
            let human = format!(
                "massey product defined (degrees {} {} {})\n\
                 witness x (dx = a∧b): {}\nwitness y (dy = b∧c): {}\n\
                 representative: {}\nindeterminacy dimension: {}\nverdict: {}\n",
                result.degrees.0,
                result.degrees.1,
                result.degrees.2,
                render_form(&input, &p.x),
                render_form(&input, &p.y),
                render_form(&input, &p.representative),
                p.indeterminacy.len(),
                if p.trivial {
                    "trivial (contains zero)"
                } else {
                    "NON-TRIVIAL"
                }
            );
            emit(json, "massey", &input.label, results, &warnings, human);
            Ok(0)
        }
    }
}

fn cmd_flex(
    input_arg: &str,
    form_a: &str,
    form_b: &str,
    steps: usize,
    json: bool,
) -> Result<u8, Failure> {
    let input = load_input(input_arg)?;
    let (d, coh) = build_complex(&input)?;
    let wa = resolve_form(&input, form_a)?;
    let wb = resolve_form(&input, form_b)?;
    let report = flex_scan(&d, &coh, &wa, &wb, steps)?;
    let points: Vec<Value> = report
        .points
        .iter()
        .map(|p| match &p.outcome {
            PointOutcome::Symplectic { h } => json!({
                "t": format_rational(&p.t),
                "symplectic": true,
                "h": h,
            }),
            PointOutcome::Skipped { reason } => json!({
                "t": format_rational(&p.t),
                "symplectic": false,
                "reason": reason,
            }),
        })
        .collect();
    let (verdict, varying): (&str, Vec<usize>) = match &report.verdict {
        FlexVerdict::Flexible { varying_degrees } => ("flexible", varying_degrees.clone()),
        FlexVerdict::NotObserved => ("not-observed", Vec::new()),
        FlexVerdict::Inconclusive => ("inconclusive", Vec::new()),
    };
    let results = json!({
        "steps": report.steps,
        "points": points,
        "verdict": verdict,
        "varying_degrees": varying,
        "highlight_degrees": report.highlight_degrees,
    });
    let mut human = String::new();
    for p in &report.points {
        match &p.outcome {
            PointOutcome::Symplectic { h } => human.push_str(&format!(
                "t = {:>5}: h = {}\n",
                format_rational(&p.t),
                h.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            )),
            PointOutcome::Skipped { reason } => human.push_str(&format!(
                "t = {:>5}: skipped ({reason})\n",
                format_rational(&p.t)
            )),
        }
    }
    human.push_str(&format!("verdict: {verdict}"));
    if !varying.is_empty() {
        human.push_str(&format!(
            " (h varies in degrees {})",
            varying
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    human.push('\n');
    let mut warnings = Vec::new();
    nilpotency_warning(&input, &mut warnings);
    emit(json, "flex", &input.label, results, &warnings, human);
    Ok(0)
}

fn cmd_profile(
    input_arg: &str,
    form_arg: &Option<String>,
    massey_bound: usize,
    json: bool,
) -> Result<u8, Failure> {
    let input = load_input(input_arg)?;
    let (d, coh) = build_complex(&input)?;
    let (form, s) = symplectic_data(&input, &d, form_arg)?;
    let names = names_of(&input);
    let profile = compute_profile(&d, &coh, &s, massey_bound, names.as_deref())?;
    let results = json!({
        "form": form_json(&form),
        "massey_trivial_within_bound": profile.massey_trivial_within_bound,
        "massey_bound": profile.massey_bound,
        "massey_witness": profile.massey_witness.as_ref().map(|(a, b, c)| vec![a, b, c]),
        "hard_lefschetz": profile.hard_lefschetz,
        "odd_betti_even": profile.odd_betti_even,
        "line": profile.line,
        "annotation": profile.annotation,
        "table": "symplectically-aspherical",
    });
    let human = format!(
        "form: {}\nmassey products (triple, total degree ≤ {}): {}\nhard lefschetz: {}\n\
         odd betti numbers even: {}\ntable line: {} — {}\n",
        render_form(&input, &form),
        profile.massey_bound,
        if profile.massey_trivial_within_bound {
            "no non-trivial product found".to_string()
        } else {
            let (a, b, c) = profile.massey_witness.clone().unwrap();
            format!("NON-TRIVIAL, e.g. ⟨{a},{b},{c}⟩")
        },
        if profile.hard_lefschetz { "yes" } else { "no" },
        if profile.odd_betti_even { "yes" } else { "no" },
        profile.line,
        profile.annotation,
    );
    let mut warnings = vec![format!(
        "the Massey column reports triple products up to total degree {} only; a bounded scan \
         cannot certify vanishing of products of all orders",
        profile.massey_bound
    )];
    nilpotency_warning(&input, &mut warnings);
    emit(json, "profile", &input.label, results, &warnings, human);
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Validate { input, json } => cmd_validate(input, *json),
        Command::Betti { input, json } => cmd_betti(input, *json),
        Command::Symplectic { input, form, json } => cmd_symplectic(input, form, *json),
        Command::Lefschetz { input, form, json } => cmd_lefschetz(input, form, *json),
        Command::Harmonic { input, form, json } => cmd_harmonic(input, form, *json),
        Command::Massey {
            input,
            classes,
            json,
        } => cmd_massey(input, classes, *json),
        Command::Flex {
            input,
            form_a,
            form_b,
            steps,
            json,
        } => cmd_flex(input, form_a, form_b, *steps as usize, *json),
        Command::Profile {
            input,
            form,
            massey_bound,
            json,
        } => cmd_profile(input, form, *massey_bound, *json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
