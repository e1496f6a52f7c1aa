use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ga3_core::action::{
    standard_action, verify_all_with, ActionCandidate, ActionError, BasePoint, Certificate,
};
use ga3_core::bundle::{
    class_of_divisor, intersection_number, linear_system_basis, parse_bundle, parse_class,
    BundleType, DivisorClass, NormalizedBundle,
};
use ga3_core::classify::{
    classify_with, BoundarySpec, ClassifyError, Decision, FibrationDescriptor,
};
use ga3_core::links::{
    link_map, multiplicity_along_center_with, plan_links, standard_boundary, synthesize_with,
    transport_class, LinkError, LinkKind, LinkStep,
};
use ga3_core::polyalg::{parse, GroebnerError, Limits, Polynomial};

/// Certified additive-group structures on split P²-bundles over P¹.
#[derive(Parser)]
#[command(name = "ga3", version)]
struct Cli {
    #[command(flatten)]
    output: Output,
    /// Largest total degree allowed in Gröbner computations.
    #[arg(long, global = true, value_name = "N")]
    max_degree: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit plain text.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a fibration admits a G_a^3-structure.
    Classify {
        #[arg(long)]
        degree: Option<i64>,
        #[arg(short, long)]
        bundle: Option<String>,
        /// Boundary equations: first the section, then the fiber.
        #[arg(short, long = "poly")]
        poly: Vec<String>,
        /// Boundary classes: first the section, then the fiber.
        #[arg(short, long = "class", allow_hyphen_values = true)]
        class: Vec<String>,
    },
    /// Build and certify an action on a bundle by transporting along links.
    Synthesize {
        #[arg(short, long)]
        bundle: String,
    },
    /// Certify a candidate action given by the images of t1, t2, x1, x2, x3.
    Verify {
        #[arg(short, long)]
        bundle: String,
        /// Five images; the standard action when omitted.
        #[arg(short, long = "poly")]
        poly: Vec<String>,
        /// Boundary components; x3 and t1 when omitted.
        #[arg(long)]
        boundary: Vec<String>,
        /// Base point as five comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        base_point: Option<String>,
    },
    /// Monomial basis of the sections of a class.
    Linsys {
        #[arg(short, long)]
        bundle: String,
        #[arg(short, long = "class", allow_hyphen_values = true)]
        class: String,
    },
    /// Triple intersection number of three classes.
    Intersect {
        #[arg(short, long)]
        bundle: String,
        #[arg(short, long = "class", allow_hyphen_values = true, num_args = 1)]
        class: Vec<String>,
    },
    /// Link plan from P¹ × P² to a bundle.
    Plan {
        #[arg(short, long)]
        bundle: String,
    },
    /// Map of one link starting at a bundle, with divisor transport.
    Link {
        #[arg(short, long)]
        bundle: String,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Divisors to transport across the link.
        #[arg(short, long = "poly")]
        poly: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Line,
    Point,
}

enum Failure {
    Usage(String),
    Rejected(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Rejected(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<LinkError> for Failure {
    fn from(e: LinkError) -> Self {
        let resource = match &e {
            LinkError::Resource(_) => true,
            LinkError::Step { error, .. } => matches!(**error, LinkError::Resource(_)),
            _ => false,
        };
        match e {
            LinkError::Malformed(_) | LinkError::BadDivisor(_) | LinkError::Bundle(_) => {
                Failure::Usage(e.to_string())
            }
            _ if resource => Failure::Resource(e.to_string()),
            _ => Failure::Rejected(e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Link(l) => l.into(),
            ClassifyError::Conjugation(_) => Failure::Rejected(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ActionError> for Failure {
    fn from(e: ActionError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GroebnerError> for Failure {
    fn from(e: GroebnerError) -> Self {
        Failure::Resource(e.to_string())
    }
}

struct Report {
    json: Value,
    text: String,
    status: u8,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            status: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits {
        max_degree: cli.max_degree.unwrap_or(Limits::default().max_degree),
        ..Limits::default()
    };
    match run(&cli.command, &limits) {
        Ok(report) => {
            let body = if cli.output.text {
                report.text.trim_end().to_string()
            } else {
                serde_json::to_string_pretty(&report.json).unwrap()
            };
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(report.status)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: &Command, limits: &Limits) -> Result<Report, Failure> {
    match command {
        Command::Classify {
            degree,
            bundle,
            poly,
            class,
        } => run_classify(*degree, bundle.as_deref(), poly, class, limits),
        Command::Synthesize { bundle } => run_synthesize(bundle, limits),
        Command::Verify {
            bundle,
            poly,
            boundary,
            base_point,
        } => run_verify(bundle, poly, boundary, base_point.as_deref(), limits),
        Command::Linsys { bundle, class } => run_linsys(bundle, class),
        Command::Intersect { bundle, class } => run_intersect(bundle, class),
        Command::Plan { bundle } => run_plan(bundle),
        Command::Link { bundle, kind, poly } => run_link(bundle, *kind, poly, limits),
    }
}

fn bundle_arg(text: &str) -> Result<NormalizedBundle, Failure> {
    parse_bundle(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn poly_arg(text: &str) -> Result<Polynomial, Failure> {
    parse(text).map_err(|e| Failure::Usage(format!("{text:?}: {e}")))
}

fn class_arg(text: &str, bundle: &BundleType) -> Result<DivisorClass, Failure> {
    parse_class(text, bundle).map_err(|e| Failure::Usage(e.to_string()))
}

fn run_classify(
    degree: Option<i64>,
    bundle: Option<&str>,
    polys: &[String],
    classes: &[String],
    limits: &Limits,
) -> Result<Report, Failure> {
    let desc = match (degree, bundle) {
        (Some(d), None) if polys.is_empty() && classes.is_empty() => FibrationDescriptor::Degree(d),
        (None, Some(b)) => {
            let bt = bundle_arg(b)?.bundle;
            let specs: Vec<BoundarySpec> = match (polys.len(), classes.len()) {
                (2, 0) => polys
                    .iter()
                    .map(|p| poly_arg(p).map(BoundarySpec::Equation))
                    .collect::<Result<_, _>>()?,
                (0, 2) => classes
                    .iter()
                    .map(|c| class_arg(c, &bt).map(BoundarySpec::Class))
                    .collect::<Result<_, _>>()?,
                _ => {
                    return Err(Failure::Usage(
                        "give the boundary as two --poly or two --class values".into(),
                    ))
                }
            };
            let [d1, d2]: [BoundarySpec; 2] = specs.try_into().ok().unwrap();
            FibrationDescriptor::Bundle { bundle: bt, d1, d2 }
        }
        _ => {
            return Err(Failure::Usage(
                "give either --degree or --bundle with a boundary".into(),
            ))
        }
    };
    let decision = classify_with(&desc, limits)?;
    let text = match &decision {
        Decision::Yes {
            classes, synthesis, ..
        } => format!(
            "yes: boundary classes ({}) and ({}) on {}\n{}",
            classes[0],
            classes[1],
            synthesis.bundle,
            synthesis_text(synthesis)
        ),
        Decision::YesInPrinciple { note } => format!("yes in principle: {note}"),
        Decision::No { reason, .. } => format!("no: {reason}"),
    };
    let status = match decision {
        Decision::No { .. } => 1,
        _ => 0,
    };
    Ok(Report {
        json: decision.to_json(),
        text,
        status,
    })
}

fn action_text(a: &ActionCandidate) -> String {
    a.to_map()
        .iter()
        .map(|(v, p)| format!("  {v} -> {p}\n"))
        .collect()
}

fn synthesis_text(s: &ga3_core::links::Synthesis) -> String {
    let mut out = String::from("plan:\n");
    for step in &s.plan.steps {
        out += &format!("  {step}\n");
    }
    out += "action:\n";
    out += &action_text(&s.action);
    out += &certificate_text(&s.certificate);
    out
}

fn certificate_text(c: &Certificate) -> String {
    let mut out = String::new();
    for (name, verdict) in c.verdicts() {
        let name = serde_json::to_value(name).unwrap();
        let line = match verdict.witness() {
            Some(w) => format!("fail ({w})"),
            None if verdict.is_pass() => "pass".into(),
            None => format!("{}", serde_json::to_value(verdict).unwrap()),
        };
        out += &format!("{}: {line}\n", name.as_str().unwrap());
    }
    out += &format!("valid: {}\n", c.valid);
    out
}

fn run_synthesize(bundle: &str, limits: &Limits) -> Result<Report, Failure> {
    let n = bundle_arg(bundle)?;
    let s = synthesize_with(&n.bundle, limits)?;
    Ok(Report::ok(s.to_json(), synthesis_text(&s)))
}

fn base_point_arg(text: &str) -> Result<BasePoint, Failure> {
    let parts: Vec<Polynomial> = text.split(',').map(poly_arg).collect::<Result<_, _>>()?;
    let values: Vec<_> = parts
        .iter()
        .map(|p| {
            if p.is_constant() || p.is_zero() {
                Ok(p.constant_term())
            } else {
                Err(Failure::Usage(format!(
                    "base point entry {p} is not a number"
                )))
            }
        })
        .collect::<Result<_, _>>()?;
    let values: [_; 5] = values
        .try_into()
        .map_err(|_| Failure::Usage("base point needs five coordinates".into()))?;
    Ok(BasePoint::new(values)?)
}

fn run_verify(
    bundle: &str,
    polys: &[String],
    boundary: &[String],
    base_point: Option<&str>,
    limits: &Limits,
) -> Result<Report, Failure> {
    let bt = bundle_arg(bundle)?.bundle;
    let action = match polys.len() {
        0 => standard_action(&bt),
        5 => {
            let imgs: Vec<Polynomial> = polys
                .iter()
                .map(|p| poly_arg(p))
                .collect::<Result<_, _>>()?;
            ActionCandidate::new(bt, imgs.try_into().ok().unwrap())
        }
        n => {
            return Err(Failure::Usage(format!(
                "an action needs five images (t1, t2, x1, x2, x3), got {n}"
            )))
        }
    };
    let boundary: Vec<Polynomial> = if boundary.is_empty() {
        standard_boundary()
    } else {
        boundary
            .iter()
            .map(|p| poly_arg(p))
            .collect::<Result<_, _>>()?
    };
    let p0 = match base_point {
        Some(text) => base_point_arg(text)?,
        None => BasePoint::standard(),
    };
    let cert = verify_all_with(&action, &boundary, &p0, limits)?;
    let status = if cert.valid {
        0
    } else if cert.hit_resource_limit() {
        3
    } else {
        1
    };
    Ok(Report {
        json: cert.to_json(),
        text: certificate_text(&cert),
        status,
    })
}

fn run_linsys(bundle: &str, class: &str) -> Result<Report, Failure> {
    let bt = bundle_arg(bundle)?.bundle;
    let c = class_arg(class, &bt)?;
    let basis: Vec<String> = linear_system_basis(&bt, &c)
        .into_iter()
        .map(|m| m.to_string())
        .collect();
    let text = basis.join("\n");
    Ok(Report::ok(json!(basis), text))
}

fn run_intersect(bundle: &str, classes: &[String]) -> Result<Report, Failure> {
    let bt = bundle_arg(bundle)?.bundle;
    let cs: Vec<DivisorClass> = classes
        .iter()
        .map(|c| class_arg(c, &bt))
        .collect::<Result<_, _>>()?;
    let [a, b, c]: [DivisorClass; 3] = cs
        .try_into()
        .map_err(|_| Failure::Usage("intersect needs exactly three --class values".into()))?;
    let n = intersection_number(&bt, &a, &b, &c);
    Ok(Report::ok(json!(n), n.to_string()))
}

fn run_plan(bundle: &str) -> Result<Report, Failure> {
    let bt = bundle_arg(bundle)?.bundle;
    let plan = plan_links(&bt);
    let text = plan.steps.iter().map(|s| format!("{s}\n")).collect();
    Ok(Report::ok(plan.to_json(), text))
}

fn run_link(
    bundle: &str,
    kind: Kind,
    polys: &[String],
    limits: &Limits,
) -> Result<Report, Failure> {
    let bt = bundle_arg(bundle)?.bundle;
    let step = match kind {
        Kind::Line => LinkStep::new(
            LinkKind::Line,
            bt,
            BundleType::new(bt.d1() + 1, bt.d2() + 1).map_err(|e| Failure::Usage(e.to_string()))?,
        )?,
        Kind::Point => LinkStep::point(bt),
    };
    let map = link_map(&step)?;
    let mut divisors = Vec::new();
    let mut text = format!("{step}\n");
    for (v, img) in ga3_core::polyalg::Var::COX.iter().zip(&map.images) {
        text += &format!("  {v} -> {img}\n");
    }
    for p in polys {
        let p = poly_arg(p)?;
        let class = class_of_divisor(&bt, &p).map_err(|e| Failure::Usage(e.to_string()))?;
        let m = multiplicity_along_center_with(&step, &p, limits)?;
        let image = transport_class(&step, &class, m as i64)?;
        text += &format!("{p}: {class}, multiplicity {m}, transported to {image}\n");
        divisors.push(json!({
            "divisor": p.to_string(),
            "class": class,
            "multiplicity": m,
            "transported": image,
        }));
    }
    let json = json!({
        "step": step,
        "images": map.images.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "torus_factor": map.torus_factor.to_string(),
        "divisors": divisors,
    });
    Ok(Report::ok(json, text))
}
