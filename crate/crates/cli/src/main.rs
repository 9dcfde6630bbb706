//! `a1deg`: command-line front end for degree, transfer and verification
//! pipelines.

use std::io::Write;
use std::process::ExitCode;

use a1deg::degree::{global_degree, local_degree, ClosedPoint};
use a1deg::forms::{hilbert::relevant_places, hilbert_symbol, GWClass, Place, SymForm};
use a1deg::parse::{parse_elem, parse_field, parse_poly};
use a1deg::selftest::{self, Size};
use a1deg::transfer::{
    cohomological_lift, cohomological_transfer, geometric_lift, geometric_transfer,
    scaled_scharlau_form, scaled_trace_form, verify_local_transfer, CheckedClass, LiftResult,
};
use a1deg::{BigRational, Error, Field};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "a1deg",
    version,
    about = "Exact A¹-Brouwer degrees of univariate polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Degree of the rational map f/g (g defaults to 1).
    DegreeGlobal {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "1")]
        denominator: String,
    },
    /// Local degree of f at the closed point m.
    DegreeLocal(PointArgs),
    /// Geometric and cohomological lifts of f to the residue field of m.
    Lift(PointArgs),
    /// Transfer of the rank-one form <a> along the residue field of m.
    Transfer {
        #[command(flatten)]
        ext: ExtensionArgs,
        /// Scharlau transfer, or the transfer twisted by the canonical generator.
        #[arg(long, value_enum, default_value_t = Kind::Geometric)]
        kind: Kind,
    },
    /// Trace form Tr(a·x·y) of a separable residue field, checked against a local degree.
    TraceForm(ExtensionArgs),
    /// Scharlau form s(a·x·y), checked against a local degree when separable.
    ScharlauForm(ExtensionArgs),
    /// Compare the local degree of f at m with the transfers of both lifts.
    Verify(PointArgs),
    /// Hilbert symbol (a,b) at one place, or at every relevant place.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        place: Option<String>,
    },
    /// Seeded randomized property suite.
    Selftest {
        /// Overridden by the A1DEG_SEED environment variable.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SizeArg::Small)]
        size: SizeArg,
        /// Use a 2-adic Hilbert symbol with a deliberate sign error.
        #[arg(long, hide = true)]
        flip_hilbert_sign: bool,
    },
}

#[derive(Args)]
struct FieldArg {
    /// Q, F<p>, F<p>(<var>) or <base>[<sym>]/(<modulus>).
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    field: FieldArg,
    #[arg(long)]
    poly: String,
    /// Monic irreducible polynomial of the closed point.
    #[arg(long)]
    point: String,
    /// Name of the residue-field generator.
    #[arg(long)]
    symbol: Option<String>,
}

#[derive(Args)]
struct ExtensionArgs {
    #[command(flatten)]
    field: FieldArg,
    /// Monic irreducible polynomial defining the extension.
    #[arg(long)]
    modulus: String,
    /// Element of the extension, written in the generator symbol.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    scale: String,
    /// Name of the extension generator used in --scale.
    #[arg(long)]
    symbol: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Geometric,
    Cohomological,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SizeArg {
    Small,
    Medium,
}

enum Failure {
    Engine(Error),
    /// Output already written; the run did not succeed.
    Reported,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Reported) => ExitCode::from(1),
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn point(k: &Field, src: &str, symbol: Option<&str>) -> Result<ClosedPoint, Error> {
    let m = parse_poly(src, k)?;
    match symbol {
        Some(s) => ClosedPoint::with_symbol(&m, s),
        None => ClosedPoint::new(&m),
    }
}

fn class_out(c: &GWClass, output: Output) -> String {
    match output {
        Output::Text => c.to_string(),
        Output::Json => serde_json::to_string(&c.to_json()).expect("serializable"),
    }
}

fn gram_json(form: &SymForm) -> Value {
    json!(form.gram().to_strings(form.field()))
}

fn gram_text(form: &SymForm) -> String {
    let rows: Vec<String> = form
        .gram()
        .to_strings(form.field())
        .iter()
        .map(|r| format!("[{}]", r.join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn checked_out(r: &CheckedClass, output: Output) -> String {
    match output {
        Output::Text => {
            let mut s = format!("gram: {}\nclass: {}", gram_text(&r.form), r.class);
            if let Some(v) = r.cross_check {
                s.push_str(&format!("\nlocal degree check: {v}"));
            }
            s
        }
        Output::Json => json!({
            "gram": gram_json(&r.form),
            "class": r.class.to_json(),
            "cross_check": r.cross_check.map(|v| v.to_string()),
        })
        .to_string(),
    }
}

fn lift_json(l: &LiftResult, field: &Field) -> Value {
    json!({
        "kind": format!("{:?}", l.kind),
        "lifted": l.lifted.to_string(),
        "t": field.format(&l.t),
        "d": l.d,
        "u_lifted": l.u_lifted.to_string(),
        "omega0_at_t": l.omega0_at_t.as_ref().map(|w| field.format(w)),
    })
}

fn rational(src: &str) -> Result<BigRational, Error> {
    let q = Field::rationals();
    let e = parse_elem(src, &q)?;
    Ok(q.as_rational(&e).expect("rational").clone())
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let output = cli.output;
    match &cli.command {
        Command::DegreeGlobal {
            field,
            poly,
            denominator,
        } => {
            let k = parse_field(&field.field)?;
            let c = global_degree(&parse_poly(poly, &k)?, &parse_poly(denominator, &k)?)?;
            Ok(class_out(&c, output))
        }
        Command::DegreeLocal(a) => {
            let k = parse_field(&a.field.field)?;
            let p = point(&k, &a.point, a.symbol.as_deref())?;
            Ok(class_out(
                &local_degree(&parse_poly(&a.poly, &k)?, &p)?,
                output,
            ))
        }
        Command::Lift(a) => {
            let k = parse_field(&a.field.field)?;
            let p = point(&k, &a.point, a.symbol.as_deref())?;
            let f = parse_poly(&a.poly, &k)?;
            let (g, c) = (geometric_lift(&f, &p)?, cohomological_lift(&f, &p)?);
            let l = p.residue_field();
            Ok(match output {
                Output::Text => format!(
                    "residue field: {l}\ngeometric: {}\ncohomological: {}\nmultiplicity: {}\nomega0(t): {}",
                    g.lifted,
                    c.lifted,
                    g.d,
                    l.format(c.omega0_at_t.as_ref().expect("cohomological lift"))
                ),
                Output::Json => json!({
                    "residue_field": l.to_string(),
                    "geometric": lift_json(&g, l),
                    "cohomological": lift_json(&c, l),
                })
                .to_string(),
            })
        }
        Command::Transfer { ext, kind } => {
            let k = parse_field(&ext.field.field)?;
            let p = point(&k, &ext.modulus, ext.symbol.as_deref())?;
            let l = p.residue_field();
            let a = parse_elem(&ext.scale, l)?;
            if l.is_zero(&a) {
                return Err(Error::ZeroScale.into());
            }
            let beta = SymForm::diagonal(l, &[a]);
            let form = match kind {
                Kind::Geometric => geometric_transfer(&beta, &p)?,
                Kind::Cohomological => cohomological_transfer(&beta, &p)?,
            };
            let class = form.class()?;
            Ok(match output {
                Output::Text => format!("gram: {}\nclass: {class}", gram_text(&form)),
                Output::Json => {
                    json!({"gram": gram_json(&form), "class": class.to_json()}).to_string()
                }
            })
        }
        Command::TraceForm(ext) | Command::ScharlauForm(ext) => {
            let k = parse_field(&ext.field.field)?;
            let p = point(&k, &ext.modulus, ext.symbol.as_deref())?;
            let a = parse_elem(&ext.scale, p.residue_field())?;
            let r = if matches!(cli.command, Command::TraceForm(_)) {
                scaled_trace_form(&p, &a)?
            } else {
                scaled_scharlau_form(&p, &a)?
            };
            Ok(checked_out(&r, output))
        }
        Command::Verify(a) => {
            let k = parse_field(&a.field.field)?;
            let p = point(&k, &a.point, a.symbol.as_deref())?;
            let r = verify_local_transfer(&parse_poly(&a.poly, &k)?, &p)?;
            let text = match output {
                Output::Text => {
                    let g = &r.ranks;
                    format!(
                        "local degree: {}\ngeometric transfer: {} ({})\ncohomological transfer: {} ({})\nblock anti-diagonal check: {}\ngeneric diagonalization check: {}\nnorm determinant check: {}\nranks: local={} geometric={} cohomological={} lift={} naive_base_change={} residue_degree={} multiplicity={}",
                        r.lhs,
                        r.geometric,
                        r.verdict_geometric,
                        r.cohomological,
                        r.verdict_cohomological,
                        r.block_antidiagonal_check,
                        r.generic_check.map_or("skipped".to_string(), |v| v.to_string()),
                        r.det_norm_check,
                        g.lhs,
                        g.geometric,
                        g.cohomological,
                        g.lift,
                        g.naive_base_change,
                        g.residue_degree,
                        g.multiplicity
                    )
                }
                Output::Json => serde_json::to_string(&r.to_json()).expect("serializable"),
            };
            if r.consistent() {
                Ok(text)
            } else {
                emit(&text);
                Err(Failure::Reported)
            }
        }
        Command::Hilbert { a, b, place } => {
            let (a, b) = (rational(a)?, rational(b)?);
            let places = match place {
                Some(p) => vec![p.parse::<Place>()?],
                None => relevant_places(&a, &b),
            };
            let mut symbols = Vec::new();
            for p in &places {
                symbols.push((p.to_string(), hilbert_symbol(&a, &b, p)?));
            }
            let product: i8 = symbols.iter().map(|(_, s)| *s).product();
            Ok(match output {
                Output::Text => {
                    let mut lines: Vec<String> = symbols
                        .iter()
                        .map(|(p, s)| format!("({a},{b})_{p} = {s}"))
                        .collect();
                    if place.is_none() {
                        lines.push(format!("product: {product}"));
                    }
                    lines.join("\n")
                }
                Output::Json => {
                    let map: serde_json::Map<String, Value> =
                        symbols.iter().map(|(p, s)| (p.clone(), json!(s))).collect();
                    json!({"a": a.to_string(), "b": b.to_string(), "symbols": map, "product": product}).to_string()
                }
            })
        }
        Command::Selftest {
            seed,
            size,
            flip_hilbert_sign,
        } => {
            let seed = match std::env::var("A1DEG_SEED") {
                Ok(s) => s.trim().parse().map_err(|_| {
                    Error::Malformed(format!("A1DEG_SEED must be an unsigned integer, got `{s}`"))
                })?,
                Err(_) => *seed,
            };
            let size = match size {
                SizeArg::Small => Size::Small,
                SizeArg::Medium => Size::Medium,
            };
            let report = selftest::run(&selftest::Options {
                seed,
                size,
                flip_hilbert_sign: *flip_hilbert_sign,
            });
            let text = report.render();
            let text = text.trim_end().to_string();
            if report.ok() {
                Ok(text)
            } else {
                emit(&text);
                Err(Failure::Reported)
            }
        }
    }
}
