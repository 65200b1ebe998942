use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use schurian::category::{broken_ladder, complete_groupoid, ObjectId, SchurianCategory};
use schurian::cw::{build_cw, CwComplex, TwoCell};
use schurian::exactalg::{Field, Scalar};
use schurian::files::{element_to_json, parse_conjugator, CategoryFile, GradingFile};
use schurian::grading::{
    check_grading, closed_walk_subgroup, conjugate_grading, is_connected_grading, loop_degrees,
    quotient_morphism, smash_iso_witness, smash_product, universal_grading, Grading, GradingGroup,
};
use schurian::hochschild::{hh1, verify_hurewicz_iso};
use schurian::presentation::{pi1_presentation, AbelianInvariants, GroupPresentation};
use schurian::Error;

#[derive(Parser)]
#[command(name = "schurian", version, about = "Fundamental groups, gradings and HH^1 of Schurian categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Category file; standard input when omitted.
    file: Option<PathBuf>,
    /// Require every composable pair to be listed.
    #[arg(long)]
    strict: bool,
    /// Skip pattern-closure and associativity checks.
    #[arg(long)]
    no_validate: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check pattern closure and associativity.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// The attached 2-complex.
    Cw {
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
        #[command(flatten)]
        input: Input,
    },
    /// Presentation of the fundamental group.
    Pi1 {
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        simplify: bool,
        #[command(flatten)]
        input: Input,
    },
    /// H1 of the complex, compared with the abelianized fundamental group.
    Abelian {
        #[command(flatten)]
        input: Input,
    },
    /// Additive characters of the fundamental group.
    Characters {
        #[arg(long, value_parser = parse_field)]
        field: Option<Field>,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// First Hochschild-Mitchell cohomology.
    Hh1 {
        #[arg(long, value_parser = parse_field)]
        field: Option<Field>,
        #[command(flatten)]
        input: Input,
    },
    /// Verify that the Hurewicz map is an isomorphism.
    Hurewicz {
        #[arg(long, value_parser = parse_field)]
        field: Option<Field>,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Group gradings.
    Grading {
        #[command(subcommand)]
        action: GradingCommand,
    },
    /// Generate a category file.
    Gen {
        #[command(subcommand)]
        family: GenCommand,
    },
}

#[derive(Subcommand)]
enum GradingCommand {
    /// Check the grading law on every nonzero composite.
    Check {
        #[arg(long)]
        grading: PathBuf,
        #[command(flatten)]
        input: Input,
    },
    /// Whether the closed-walk degrees generate the group.
    Connected {
        #[arg(long)]
        grading: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// The grading by the fundamental group.
    Universal {
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// The map from the universal grading onto a connected grading.
    Quotient {
        #[arg(long)]
        grading: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// The smash-product covering, optionally checked against a conjugate.
    Smash {
        #[arg(long)]
        grading: PathBuf,
        /// Object-to-element map; adds an isomorphism check with the conjugated grading.
        #[arg(long)]
        conjugator: Option<PathBuf>,
        #[command(flatten)]
        input: Input,
    },
    /// Conjugate a grading by an object-to-element map.
    Conjugate {
        #[arg(long)]
        grading: PathBuf,
        #[arg(long)]
        conjugator: PathBuf,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Complete Schurian groupoid on N objects.
    Groupoid {
        n: usize,
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: Field,
    },
    /// Truncated broken ladder with M + 1 rungs, broken above level S.
    Ladder {
        m: usize,
        s: usize,
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: Field,
    },
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Printed report and whether the mathematical check it describes succeeded.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn json(v: Value, ok: bool) -> Self {
        Outcome {
            text: serde_json::to_string_pretty(&v).expect("reports serialize"),
            ok,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            // a closed pipe downstream is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::InvalidCategory(list) = &e {
                for v in list {
                    eprintln!("  {v}");
                }
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Disconnected | Error::Undecidable(_) | Error::NoConnector(_) => 1,
        _ => 2,
    }
}

fn read_source(path: Option<&Path>) -> Result<String, Error> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p)
                .map_err(|e| Error::Malformed(format!("{}: {e}", p.display())))?;
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::Malformed(format!("standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn load(input: &Input) -> Result<SchurianCategory, Error> {
    let cat = CategoryFile::parse(&read_source(input.file.as_deref())?)?.to_category(input.strict)?;
    if !input.no_validate {
        let violations = cat.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidCategory(violations.iter().map(ToString::to_string).collect()));
        }
    }
    Ok(cat)
}

fn load_grading(cat: &SchurianCategory, path: &Path) -> Result<Grading, Error> {
    GradingFile::parse(&read_source(Some(path))?)?.to_grading(cat)
}

/// A grading that must satisfy the grading law before it is used.
fn load_valid_grading(cat: &SchurianCategory, path: &Path) -> Result<Grading, Error> {
    let x = load_grading(cat, path)?;
    let violations = check_grading(cat, &x)?;
    if let Some(v) = violations.first() {
        return Err(Error::InvalidGrading(format!(
            "{} composites break the grading law, e.g. {v}",
            violations.len()
        )));
    }
    Ok(x)
}

fn base_of(cat: &SchurianCategory, base: &Option<String>) -> Result<ObjectId, Error> {
    match base {
        Some(name) => cat.object_id(name),
        None if cat.object_count() > 0 => Ok(0),
        None => Err(Error::Parameter("the category has no objects".into())),
    }
}

fn bigint_json(x: &BigInt) -> Value {
    match u64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(x.to_string()),
    }
}

fn invariants_json(a: &AbelianInvariants) -> Value {
    json!({
        "rank": a.free_rank,
        "torsion": a.torsion.iter().map(bigint_json).collect::<Vec<_>>(),
        "group": a.to_string(),
    })
}

fn presentation_json(p: &GroupPresentation) -> Value {
    json!({
        "generators": p.generators(),
        "relators": p.relators().iter().map(|r| p.word_names(r)).collect::<Vec<_>>(),
    })
}

fn named_scalars(names: impl Iterator<Item = String>, values: &[Scalar]) -> Value {
    let map: BTreeMap<String, String> = names.zip(values.iter().map(ToString::to_string)).collect();
    json!(map)
}

fn complex_json(cw: &CwComplex) -> Value {
    let name = |e: usize| cw.edges()[e].name.clone();
    let cells: Vec<Value> = cw
        .two_cells()
        .iter()
        .map(|c| {
            let boundary: Vec<Value> = c
                .boundary_steps()
                .iter()
                .map(|s| json!([name(s.morphism), s.sign.as_i64()]))
                .collect();
            match c {
                TwoCell::Triangle { g, f, composite } => json!({
                    "kind": "triangle", "g": name(*g), "f": name(*f),
                    "composite": name(*composite), "boundary": boundary,
                }),
                TwoCell::Bigon { g, f } => json!({
                    "kind": "bigon", "g": name(*g), "f": name(*f), "boundary": boundary,
                }),
            }
        })
        .collect();
    json!({
        "vertices": cw.vertices(),
        "edges": cw.edges().iter().map(|e| json!({
            "name": e.name,
            "from": cw.vertices()[e.source],
            "to": cw.vertices()[e.target],
        })).collect::<Vec<_>>(),
        "twoCells": cells,
    })
}

fn field_or(cat: &SchurianCategory, field: Option<Field>) -> Field {
    field.unwrap_or(cat.field())
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Validate { input } => {
            let cat = CategoryFile::parse(&read_source(input.file.as_deref())?)?.to_category(input.strict)?;
            let violations: Vec<String> = cat.validate().iter().map(ToString::to_string).collect();
            let ok = violations.is_empty();
            Ok(Outcome::json(
                json!({
                    "valid": ok,
                    "objects": cat.object_count(),
                    "homs": cat.morphisms().len(),
                    "nonzeroComposites": cat.constants().len(),
                    "connected": cat.is_connected(),
                    "violations": violations,
                }),
                ok,
            ))
        }
        Command::Cw { emit, input } => {
            let cw = build_cw(&load(&input)?)?;
            Ok(match emit {
                Emit::Dot => Outcome {
                    text: cw.to_dot().trim_end().to_string(),
                    ok: true,
                },
                Emit::Json => Outcome::json(
                    json!({
                        "vertices": cw.vertices().len(),
                        "edges": cw.edges().len(),
                        "twoCells": cw.two_cells().len(),
                        "euler": cw.euler_characteristic(),
                        "complex": complex_json(&cw),
                    }),
                    true,
                ),
            })
        }
        Command::Pi1 { base, simplify, input } => {
            let cat = load(&input)?;
            let c0 = base_of(&cat, &base)?;
            let pi1 = pi1_presentation(&build_cw(&cat)?, c0)?;
            let pres = if simplify {
                pi1.presentation.simplify()
            } else {
                pi1.presentation.clone()
            };
            Ok(Outcome::json(
                json!({
                    "base": cat.objects()[c0],
                    "tree": pi1.tree.edges.iter().map(|&e| &cat.morphism(e).name).collect::<Vec<_>>(),
                    "simplified": simplify,
                    "generators": pres.generators().len(),
                    "relators": pres.relators().len(),
                    "presentation": presentation_json(&pres),
                    "abelianization": invariants_json(&pres.abelianization()),
                }),
                true,
            ))
        }
        Command::Abelian { input } => {
            let cat = load(&input)?;
            let cw = build_cw(&cat)?;
            let h1 = cw.homology_h1()?;
            let ab = pi1_presentation(&cw, 0)?.presentation.abelianization();
            let agree = h1 == ab;
            Ok(Outcome::json(
                json!({
                    "cellularH1": invariants_json(&h1),
                    "abelianization": invariants_json(&ab),
                    "agree": agree,
                }),
                agree,
            ))
        }
        Command::Characters { field, base, input } => {
            let cat = load(&input)?;
            let field = field_or(&cat, field);
            let c0 = base_of(&cat, &base)?;
            let pres = pi1_presentation(&build_cw(&cat)?, c0)?.presentation;
            let basis = pres.character_space(field)?;
            Ok(Outcome::json(
                json!({
                    "field": field.to_string(),
                    "base": cat.objects()[c0],
                    "dimension": basis.len(),
                    "basis": basis.iter()
                        .map(|c| named_scalars(pres.generators().iter().cloned(), &c.values))
                        .collect::<Vec<_>>(),
                }),
                true,
            ))
        }
        Command::Hh1 { field, input } => {
            let cat = load(&input)?;
            let field = field_or(&cat, field);
            let space = hh1(&cat, field)?;
            let names = || cat.morphisms().iter().map(|m| m.name.clone());
            Ok(Outcome::json(
                json!({
                    "field": field.to_string(),
                    "dimDerivations": space.derivations.len(),
                    "dimInner": space.inner.len(),
                    "dimension": space.dimension(),
                    "cohomologyDimH1": build_cw(&cat)?.cohomology_dim_h1(field)?,
                    "representatives": space.representatives.iter()
                        .map(|d| named_scalars(names(), &d.lambda))
                        .collect::<Vec<_>>(),
                }),
                true,
            ))
        }
        Command::Hurewicz { field, base, input } => {
            let cat = load(&input)?;
            let field = field_or(&cat, field);
            let c0 = base_of(&cat, &base)?;
            let r = verify_hurewicz_iso(&cat, field, c0)?;
            Ok(Outcome::json(
                json!({
                    "field": field.to_string(),
                    "base": cat.objects()[c0],
                    "dimCharacters": r.dim_characters,
                    "dimHH1": r.dim_hh1,
                    "rank": r.rank,
                    "verdict": r.verdict(),
                    "imageMatrix": r.image_matrix.iter()
                        .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                }),
                r.is_isomorphism(),
            ))
        }
        Command::Grading { action } => run_grading(action),
        Command::Gen { family } => {
            let cat = match family {
                GenCommand::Groupoid { n, field } => complete_groupoid(n, field)?,
                GenCommand::Ladder { m, s, field } => broken_ladder(m, s, field)?,
            };
            Ok(Outcome {
                text: CategoryFile::from_category(&cat).to_json(),
                ok: true,
            })
        }
    }
}

fn run_grading(action: GradingCommand) -> Result<Outcome, Error> {
    match action {
        GradingCommand::Check { grading, input } => {
            let cat = load(&input)?;
            let x = load_grading(&cat, &grading)?;
            let violations: Vec<String> = check_grading(&cat, &x)?.iter().map(ToString::to_string).collect();
            let ok = violations.is_empty();
            Ok(Outcome::json(json!({ "valid": ok, "violations": violations }), ok))
        }
        GradingCommand::Connected { grading, base, input } => {
            let cat = load(&input)?;
            let x = load_valid_grading(&cat, &grading)?;
            let c0 = base_of(&cat, &base)?;
            let connected = is_connected_grading(&cat, &x, c0)?;
            let loops: BTreeMap<String, Value> = cat
                .morphisms()
                .iter()
                .zip(loop_degrees(&cat, &x, c0)?)
                .map(|(m, d)| (m.name.clone(), element_to_json(x.group(), &d)))
                .collect();
            let mut report = json!({
                "connected": connected,
                "base": cat.objects()[c0],
                "group": x.group().to_string(),
                "loopDegrees": loops,
            });
            if let GradingGroup::Finite(g) = x.group() {
                let sub = closed_walk_subgroup(&cat, &x, c0)?;
                report["index"] = json!(g.order() / sub.len());
            }
            Ok(Outcome::json(report, connected))
        }
        GradingCommand::Universal { base, input } => {
            let cat = load(&input)?;
            let c0 = base_of(&cat, &base)?;
            let z = universal_grading(&build_cw(&cat)?, c0)?;
            let mut file = GradingFile::from_grading(&cat, &z.grading);
            file.metadata = Some(json!({
                "base": cat.objects()[c0],
                "tree": z.pi1.tree.edges.iter().map(|&e| &cat.morphism(e).name).collect::<Vec<_>>(),
            }));
            Ok(Outcome {
                text: file.to_json(),
                ok: true,
            })
        }
        GradingCommand::Quotient { grading, base, input } => {
            let cat = load(&input)?;
            let x = load_valid_grading(&cat, &grading)?;
            let c0 = base_of(&cat, &base)?;
            let q = quotient_morphism(&cat, &x, c0)?;
            let pres = &q.universal.pi1.presentation;
            let images: BTreeMap<&String, Value> = pres
                .generators()
                .iter()
                .zip(&q.images)
                .map(|(g, d)| (g, element_to_json(x.group(), d)))
                .collect();
            let edgewise = q.edge_checks.as_ref().map(|checks| {
                checks
                    .iter()
                    .map(|c| (cat.morphism(c.edge).name.clone(), c.holds()))
                    .collect::<BTreeMap<_, _>>()
            });
            Ok(Outcome::json(
                json!({
                    "base": cat.objects()[c0],
                    "holds": q.holds(),
                    "surjective": q.surjective,
                    "relatorsTrivial": q.relators_trivial.iter().all(|&t| t),
                    "images": images,
                    "edgewise": edgewise,
                }),
                q.holds(),
            ))
        }
        GradingCommand::Smash {
            grading,
            conjugator,
            input,
        } => {
            let cat = load(&input)?;
            let x = load_valid_grading(&cat, &grading)?;
            let sp = smash_product(&cat, &x)?;
            let sc = &sp.category;
            let mut meta = json!({
                "components": sc.component_count(),
                "connected": sc.is_connected(),
                "projection": {
                    "objects": sc.objects().iter().zip(&sp.object_projection)
                        .map(|(n, &(o, _))| (n.clone(), Value::from(cat.objects()[o].clone())))
                        .collect::<BTreeMap<_, _>>(),
                    "morphisms": sc.morphisms().iter().zip(&sp.morphism_projection)
                        .map(|(m, &(e, _))| (m.name.clone(), Value::from(cat.morphism(e).name.clone())))
                        .collect::<BTreeMap<_, _>>(),
                },
            });
            let mut ok = true;
            if let Some(path) = conjugator {
                let a = parse_conjugator(&cat, x.group(), &read_source(Some(&path))?)?;
                let w = smash_iso_witness(&cat, &x, &a)?;
                ok = w.holds();
                meta["isoWitness"] = json!({
                    "holds": w.holds(),
                    "objectMap": w.object_map.iter().enumerate()
                        .map(|(p, &q)| (sc.objects()[p].clone(), Value::from(sc.objects()[q].clone())))
                        .collect::<BTreeMap<_, _>>(),
                    "failures": w.failures,
                });
            }
            let mut file = CategoryFile::from_category(sc);
            file.metadata = Some(meta);
            Ok(Outcome {
                text: file.to_json(),
                ok,
            })
        }
        GradingCommand::Conjugate {
            grading,
            conjugator,
            input,
        } => {
            let cat = load(&input)?;
            let x = load_grading(&cat, &grading)?;
            let a = parse_conjugator(&cat, x.group(), &read_source(Some(&conjugator))?)?;
            let y = conjugate_grading(&cat, &x, &a)?;
            Ok(Outcome {
                text: GradingFile::from_grading(&cat, &y).to_json(),
                ok: true,
            })
        }
    }
}
