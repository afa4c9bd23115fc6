use clap::{Args, Parser, Subcommand};
use degenlab::charts::{chart_equations, enumerate_path_bases};
use degenlab::check::{
    check_maximal, moduli_normal_form, orbit_dimension, torus_maximal, unipotent_maximal,
    unipotent_orbit_dim, witness_degeneration, witness_request_from, Certificate, WitnessRequest,
};
use degenlab::compile::{arrow_name, compile_variety, parse_poly, CompiledVariety, VarietyInput};
use degenlab::curves::flat_limit;
use degenlab::decompose::decompose_summands;
use degenlab::field::{Field, Scalar};
use degenlab::format::{
    parse_algebra, parse_curve, parse_field_name, parse_module, write_algebra_file, write_module,
};
use degenlab::rep::QuotientRepresentation;
use degenlab::report::{certificate_json, report_from_check, Report, Verdicts};
use degenlab::Error;
use std::fs;
use std::process::ExitCode;

/// Exact degeneration analysis for representations of path algebras.
#[derive(Parser)]
#[command(name = "degenlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// algebra description file
    #[arg(long)]
    algebra: String,
    /// module description file
    #[arg(long)]
    module: String,
    /// working field: rational | fp:P
    #[arg(long)]
    field: Option<String>,
    /// seed for randomized subroutines
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// write output here instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Maximality check with certificates (JSON report)
    Check {
        #[command(flatten)]
        common: CommonArgs,
        /// full | unipotent | torus
        #[arg(long, default_value = "full")]
        mode: String,
    },
    /// Numeric invariants only (JSON report)
    Invariants {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Flat limit of a curve family applied to the module point
    Limit {
        #[command(flatten)]
        common: CommonArgs,
        /// curve description file
        #[arg(long)]
        curve: String,
    },
    /// Moduli normal form of a maximal point
    NormalForm {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Path bases and chart equations for the module's dimension vector
    Charts {
        #[command(flatten)]
        common: CommonArgs,
        /// restrict to truncation-closed path bases
        #[arg(long)]
        truncation_closed: bool,
    },
    /// Compile homogeneous polynomials into a quiver algebra file
    CompileVariety {
        /// homogeneous polynomial, repeatable (e.g. "x0*x2 - x1^2")
        #[arg(long = "poly")]
        polys: Vec<String>,
        /// number of homogeneous coordinates (default: inferred)
        #[arg(long)]
        coords: Option<usize>,
        /// level count override
        #[arg(long)]
        levels: Option<usize>,
        /// homogeneous coordinates of a point, comma separated
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Indecomposable direct summands
    Decompose {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn resolve_field(flag: &Option<String>) -> Result<Option<Field>, Error> {
    match flag {
        Some(s) => Ok(Some(parse_field_name(s)?)),
        None => Ok(None),
    }
}

fn emit(out: &Option<String>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::BadInput(format!("cannot write {path}: {e}"))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load(path: &str) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::BadInput(format!("cannot read {path}: {e}")))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Check { common, mode } => {
            let field = resolve_field(&common.field)?;
            let parsed = parse_algebra(&load(&common.algebra)?, field)?;
            let (_, point) = parse_module(&load(&common.module)?, &parsed.algebra)?;
            let report: Report = match mode.as_str() {
                "full" => {
                    let rep = check_maximal(&point, common.seed)?;
                    report_from_check(&rep, parsed.field, common.seed, "check", "full")
                }
                "unipotent" => {
                    let qrep = QuotientRepresentation::new(&point)?;
                    let m = unipotent_orbit_dim(&point)?;
                    let uni = unipotent_maximal(&point)?;
                    let certificate = if uni {
                        None
                    } else {
                        let w =
                            witness_degeneration(&point, &WitnessRequest::Unipotent, common.seed)?;
                        Some(certificate_json(&Certificate::Witness(w)))
                    };
                    Report {
                        tool: "degenlab".into(),
                        command: "check".into(),
                        field: parsed.field.to_string(),
                        seed: common.seed,
                        mode: "unipotent".into(),
                        dimension_vector: qrep.dim_vector(),
                        radical_layering: qrep.radical_layering().layers,
                        m,
                        top_count: point.pres.top_count(),
                        summand_count: None,
                        orbit_dim: orbit_dimension(&point)?,
                        verdicts: Some(Verdicts {
                            unipotent_maximal: Some(uni),
                            torus_maximal: None,
                            fully_maximal: None,
                        }),
                        certificate,
                    }
                }
                "torus" => {
                    let qrep = QuotientRepresentation::new(&point)?;
                    let outcome = torus_maximal(&point, common.seed)?;
                    let certificate = if outcome.maximal {
                        None
                    } else {
                        let req = witness_request_from(&point.pres, &outcome)?;
                        let w = witness_degeneration(&point, &req, common.seed)?;
                        Some(certificate_json(&Certificate::Witness(w)))
                    };
                    Report {
                        tool: "degenlab".into(),
                        command: "check".into(),
                        field: parsed.field.to_string(),
                        seed: common.seed,
                        mode: "torus".into(),
                        dimension_vector: qrep.dim_vector(),
                        radical_layering: qrep.radical_layering().layers,
                        m: unipotent_orbit_dim(&point)?,
                        top_count: point.pres.top_count(),
                        summand_count: outcome.summand_count,
                        orbit_dim: orbit_dimension(&point)?,
                        verdicts: Some(Verdicts {
                            unipotent_maximal: None,
                            torus_maximal: Some(outcome.maximal),
                            fully_maximal: None,
                        }),
                        certificate,
                    }
                }
                other => {
                    return Err(Error::BadInput(format!(
                        "unknown mode `{other}` (use full, unipotent, or torus)"
                    )))
                }
            };
            let json = serde_json::to_string_pretty(&report).expect("serializable report");
            emit(&common.out, &(json + "\n"))
        }
        Command::Invariants { common } => {
            let field = resolve_field(&common.field)?;
            let parsed = parse_algebra(&load(&common.algebra)?, field)?;
            let (_, point) = parse_module(&load(&common.module)?, &parsed.algebra)?;
            let qrep = QuotientRepresentation::new(&point)?;
            let summand_count = decompose_summands(&point, common.seed)
                .map(|s| s.len())
                .ok();
            let report = Report {
                tool: "degenlab".into(),
                command: "invariants".into(),
                field: parsed.field.to_string(),
                seed: common.seed,
                mode: "none".into(),
                dimension_vector: qrep.dim_vector(),
                radical_layering: qrep.radical_layering().layers,
                m: unipotent_orbit_dim(&point)?,
                top_count: point.pres.top_count(),
                summand_count,
                orbit_dim: orbit_dimension(&point)?,
                verdicts: None,
                certificate: None,
            };
            let json = serde_json::to_string_pretty(&report).expect("serializable report");
            emit(&common.out, &(json + "\n"))
        }
        Command::Limit { common, curve } => {
            let field = resolve_field(&common.field)?;
            let parsed = parse_algebra(&load(&common.algebra)?, field)?;
            let (pres, point) = parse_module(&load(&common.module)?, &parsed.algebra)?;
            let fam = parse_curve(&load(&curve)?, &pres)?;
            let lim = flat_limit(&fam, &point)?;
            emit(&common.out, &write_module(&lim))
        }
        Command::NormalForm { common } => {
            let field = resolve_field(&common.field)?;
            let parsed = parse_algebra(&load(&common.algebra)?, field)?;
            let (_, point) = parse_module(&load(&common.module)?, &parsed.algebra)?;
            let nf = moduli_normal_form(&point, common.seed)?;
            emit(&common.out, &write_module(&nf))
        }
        Command::Charts {
            common,
            truncation_closed,
        } => {
            let field = resolve_field(&common.field)?;
            let parsed = parse_algebra(&load(&common.algebra)?, field)?;
            let (pres, point) = parse_module(&load(&common.module)?, &parsed.algebra)?;
            let d = QuotientRepresentation::new(&point)?.dim_vector();
            let bases = enumerate_path_bases(&pres, &d, truncation_closed)?;
            let mut out = String::new();
            for b in &bases {
                let sys = chart_equations(&pres, b)?;
                out.push_str(&format!("# basis: {}\n", b.display(&pres)));
                out.push_str(&sys.emit());
                out.push('\n');
            }
            if bases.is_empty() {
                out.push_str("# no path bases for this dimension vector\n");
            }
            emit(&common.out, &out)
        }
        Command::CompileVariety {
            polys,
            coords,
            levels,
            point,
            field,
            out,
        } => {
            let field = resolve_field(&field)?.unwrap_or(Field::Rational);
            let parsed_polys = polys
                .iter()
                .map(|s| parse_poly(field, s))
                .collect::<Result<Vec<_>, _>>()?;
            let input = VarietyInput::new(field, parsed_polys, coords, levels)?;
            let compiled = compile_variety(input)?;
            let gen_lines = match &point {
                Some(coords_text) => {
                    let ks = coords_text
                        .split(',')
                        .map(|x| field.parse(x.trim()))
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(point_gen_lines(&compiled, field, &ks)?)
                }
                None => None,
            };
            let text = write_algebra_file(
                &compiled.quiver,
                &compiled.relation_lines,
                compiled.max_len,
                field,
                Some(&[compiled.top_vertex_id.clone()]),
                gen_lines.as_deref(),
            );
            emit(&out, &text)
        }
        Command::Decompose { common } => {
            let field = resolve_field(&common.field)?;
            let parsed = parse_algebra(&load(&common.algebra)?, field)?;
            let (_, point) = parse_module(&load(&common.module)?, &parsed.algebra)?;
            let summands = decompose_summands(&point, common.seed)?;
            let mut out = String::new();
            for (i, s) in summands.iter().enumerate() {
                out.push_str(&format!("# summand {}\n", i + 1));
                out.push_str(&write_module(&s.point));
            }
            emit(&common.out, &out)
        }
    }
}

/// Generator lines of C(k) for the compiled point flag.
fn point_gen_lines(
    compiled: &CompiledVariety,
    field: Field,
    ks: &[Scalar],
) -> Result<Vec<String>, Error> {
    if ks.len() != compiled.input.coords {
        return Err(Error::BadInput(format!(
            "expected {} homogeneous coordinates",
            compiled.input.coords
        )));
    }
    if ks.iter().all(|x| field.is_zero(x)) {
        return Err(Error::BadInput("zero homogeneous coordinates".into()));
    }
    let mut lines = Vec::new();
    for i in 0..ks.len() {
        for j in i + 1..ks.len() {
            let mut parts = Vec::new();
            if !field.is_zero(&ks[i]) {
                parts.push(format!(
                    "{} {} z1",
                    field.fmt_scalar(&ks[i]),
                    arrow_name(1, j)
                ));
            }
            if !field.is_zero(&ks[j]) {
                parts.push(format!(
                    "{} {} z1",
                    field.fmt_scalar(&field.neg(&ks[j])),
                    arrow_name(1, i)
                ));
            }
            if !parts.is_empty() {
                lines.push(format!("gen {}", parts.join(" + ")));
            }
        }
    }
    Ok(lines)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(0),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NeedsSplitInput(_) | Error::NotMaximal(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
