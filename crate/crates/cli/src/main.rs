use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use stratbundle::cellbase::{validate_complex, Subcomplex};
use stratbundle::doc::{
    certificate_doc, coend_doc, covering_doc, detect_kind, iso_doc, stratification_doc, to_canonical_string, triviality_doc,
    AttachingDoc, BundleDoc, CategoryDoc, ComplexDoc, DiagramDoc, DocKind, FunctorDoc, MapDoc,
};
use stratbundle::fincat::{catalog as cats, validate_category, validate_fibre_functor, FiniteCategory, StructureCategory};
use stratbundle::funcspace::{
    associated_bundle, coend, function_bundle, nkc_certificate, principal_diagram, reconstruct_check, validate_diagram,
};
use stratbundle::oracle::{gen_instance, run_suite, InstanceSpec, Suite, SuiteConfig};
use stratbundle::strabundle::{attach_bundle, catalog, fiberwise_product, pullback, realize_total, validate_bundle, StratBundle};
use stratbundle::triviality::{covering_space, local_triviality_certificate, stratify_bundle, trivialize_over};
use stratbundle::{Error, ErrorClass, Result};

mod io;
mod workspace;

use io::{emit, read_bundle, read_doc, read_value};

/// Stratified fibre bundles over finite cell complexes. Documents are JSON;
/// outputs go to stdout unless `--out` is given.
///
/// Exit status: 0 success, 1 validation failure, 2 precondition refused,
/// 3 I/O or parse error.
#[derive(Parser)]
#[command(name = "stratbundle", version)]
struct Cli {
    #[command(flatten)]
    out: Out,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Out {
    /// Write the result here (atomically) instead of stdout.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check any input document against its invariants.
    Validate { path: PathBuf },
    /// Glue a single-stratum bundle onto another along an attaching F-map.
    Attach { y: PathBuf, m: PathBuf, attaching: PathBuf },
    /// Pull a bundle back along a stratum-preserving vertex map.
    Pullback {
        x: PathBuf,
        /// Complex document for the new base.
        source: PathBuf,
        map: PathBuf,
    },
    /// Fiberwise product of two bundles over the same base.
    Product { x: PathBuf, xp: PathBuf },
    /// The function-space bundle `X^V`.
    Fnspace { x: PathBuf, object: String },
    /// The principal diagram of a bundle.
    Principal { x: PathBuf },
    /// Coend of a diagram with a fibre functor, given as a category
    /// document on the diagram's category.
    Coend { diagram: PathBuf, fibres: PathBuf },
    /// Rebuild a bundle from its principal diagram and report the iso.
    Reconstruct { x: PathBuf },
    /// Associated bundle along a functor into another structure category.
    Associate { x: PathBuf, functor: PathBuf, category: PathBuf },
    /// Trivialize a bundle over a connected region, or find the obstruction.
    Trivialize {
        x: PathBuf,
        /// Comma-separated cell ids; the closure is taken. Defaults to the
        /// whole base.
        #[arg(long, value_delimiter = ',')]
        region: Option<Vec<String>>,
    },
    /// Certify local triviality over every closed star.
    Certify { x: PathBuf },
    /// Covering space of a bundle with bijective transitions.
    Cover { x: PathBuf },
    /// Split a bundle into its stratum pieces and check they reassemble.
    Stratify {
        x: PathBuf,
        /// Complex document with the same cells, supplying the strata.
        /// Defaults to the bundle's own stratification.
        #[arg(long)]
        strata: Option<PathBuf>,
    },
    /// Finiteness certificate of the hom-sets of a structure category.
    Nkc { category: PathBuf },
    /// Graphviz rendering of the total complex.
    Dot { x: PathBuf },
    /// Run the seeded property suites.
    Verify(VerifyArgs),
    /// Print a shipped example document.
    Example {
        /// Omit to list the available names.
        name: Option<String>,
    },
    /// Print a randomly generated bundle.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Rewrite a document in canonical form.
    Normalize { path: PathBuf },
    /// Write the manifest of a workspace directory.
    Manifest { dir: PathBuf },
    /// Check a workspace directory against its manifest.
    Check { dir: PathBuf },
}

#[derive(Args)]
struct Bounds {
    #[arg(long, default_value_t = 30)]
    max_cells: usize,
    #[arg(long, default_value_t = 3)]
    max_objects: usize,
    #[arg(long, default_value_t = 4)]
    max_fibre: usize,
    #[arg(long, default_value_t = 3)]
    max_strata: usize,
    /// Only groupoids as structure categories.
    #[arg(long)]
    groupoid: bool,
}

impl Bounds {
    fn spec(&self, seed: u64) -> InstanceSpec {
        InstanceSpec {
            seed,
            max_cells: self.max_cells,
            max_objects: self.max_objects,
            max_fibre_size: self.max_fibre,
            groupoid_only: self.groupoid,
            strata_depth: self.max_strata,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// pullback, bundle, principal or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 100)]
    seeds: usize,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    bounds: Bounds,
    /// Leave out wall-clock times so reports are byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Break every instance first; the suites must reject them as input.
    #[arg(long)]
    negative_control: bool,
}

/// What a command produced: a document, and whether it records a failed
/// check (exit status 1).
struct Outcome {
    text: String,
    failed: bool,
}

fn doc<T: Serialize>(value: &T) -> Result<Outcome> {
    Ok(Outcome {
        text: to_canonical_string(value)?,
        failed: false,
    })
}

fn checked<T: Serialize>(value: &T, ok: bool) -> Result<Outcome> {
    Ok(Outcome {
        text: to_canonical_string(value)?,
        failed: !ok,
    })
}

fn bundle_out(x: &StratBundle) -> Result<Outcome> {
    doc(&BundleDoc::from_bundle(x))
}

const EXAMPLES: &[&str] = &[
    "collapse_disk",
    "double_cover_c3",
    "double_cover_c3_z2",
    "orbit_category",
    "orbit_free_cover",
    "permutations_2",
    "product_disk",
    "swapped_disk",
    "triple_cover_c3",
    "trivial_2sheet",
    "z2",
];

fn example(name: &str) -> Option<Value> {
    let bundle = |x: StratBundle| serde_json::to_value(BundleDoc::from_bundle(&x)).ok();
    let category = |s: StructureCategory| serde_json::to_value(CategoryDoc::from_structure(&s)).ok();
    match name {
        "collapse_disk" => bundle(catalog::collapse_disk()),
        "double_cover_c3" => bundle(catalog::double_cover_c3()),
        "double_cover_c3_z2" => bundle(catalog::double_cover_c3_z2()),
        "orbit_free_cover" => bundle(catalog::orbit_free_cover()),
        "product_disk" => bundle(catalog::product_disk()),
        "swapped_disk" => bundle(catalog::swapped_disk()),
        "triple_cover_c3" => bundle(catalog::triple_cover_c3()),
        "trivial_2sheet" => bundle(catalog::trivial_2sheet()),
        "orbit_category" => category(cats::z2_orbit_category()),
        "permutations_2" => category(cats::permutation_category(&[2])),
        "z2" => category(cats::z2(true)),
        _ => None,
    }
}

#[derive(Serialize)]
struct ValidationDoc {
    kind: &'static str,
    valid: bool,
    violations: Vec<Value>,
}

fn violations<V: Serialize + std::fmt::Display>(subject: &str, vs: &[V]) -> Vec<Value> {
    vs.iter()
        .map(|v| json!({ "subject": subject, "detail": serde_json::to_value(v).unwrap_or(Value::Null), "message": v.to_string() }))
        .collect()
}

fn category_violations(doc: &CategoryDoc) -> Result<(FiniteCategory, Vec<Value>)> {
    let (cat, ff) = doc.to_parts()?;
    let mut out = violations("category", &validate_category(&cat).violations);
    if out.is_empty() {
        out.extend(violations("fibre functor", &validate_fibre_functor(&cat, &ff).violations));
    }
    Ok((cat, out))
}

fn cmd_validate(path: &Path) -> Result<Outcome> {
    let value = read_value(path)?;
    let kind = detect_kind(&value).ok_or_else(|| Error::Malformed(format!("{}: not a recognised document", path.display())))?;
    let parse_err = |e: serde_json::Error| Error::Malformed(format!("{}: {e}", path.display()));
    let found = match kind {
        DocKind::Category => category_violations(&serde_json::from_value(value).map_err(parse_err)?)?.1,
        DocKind::Complex => {
            let b = serde_json::from_value::<ComplexDoc>(value).map_err(parse_err)?.to_complex()?;
            violations("complex", &validate_complex(&b).violations)
        }
        DocKind::Bundle => {
            let d: BundleDoc = serde_json::from_value(value).map_err(parse_err)?;
            let (_, bad) = category_violations(&d.category)?;
            if bad.is_empty() {
                violations("bundle", &validate_bundle(&d.to_bundle()?).violations)
            } else {
                bad
            }
        }
        DocKind::Diagram => {
            let d: DiagramDoc = serde_json::from_value(value).map_err(parse_err)?;
            violations("diagram", &validate_diagram(&d.to_diagram()?).violations)
        }
        other => {
            return Err(Error::Precondition(format!(
                "a {} document can only be checked together with the documents it refers to",
                other.name()
            )))
        }
    };
    let report = ValidationDoc {
        kind: kind.name(),
        valid: found.is_empty(),
        violations: found,
    };
    let ok = report.valid;
    checked(&report, ok)
}

fn same_structure(a: &StratBundle, b: &StratBundle) -> Result<()> {
    if a.structure() != b.structure() {
        return Err(Error::Precondition("the bundles must share their structure category".into()));
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::from_name(&a.suite).ok_or_else(|| {
            Error::Precondition(format!("unknown suite `{}`; expected pullback, bundle, principal or all", a.suite))
        })?]
    };
    let mut reports = Vec::new();
    for suite in suites {
        reports.push(run_suite(&SuiteConfig {
            suite,
            spec: a.bounds.spec(a.seed),
            seeds: a.seeds,
            negative_control: a.negative_control,
            timing: !a.no_timing,
        })?);
    }
    let ok = reports.iter().all(|r| r.ok());
    if reports.len() == 1 {
        checked(&reports[0], ok)
    } else {
        checked(&reports, ok)
    }
}

fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Validate { path } => cmd_validate(path),
        Command::Attach { y, m, attaching } => {
            let (y, m) = (read_bundle(y)?, read_bundle(m)?);
            same_structure(&y, &m)?;
            let (a, h) = read_doc::<AttachingDoc>(attaching)?.to_parts(&m, &y)?;
            bundle_out(&attach_bundle(&y, &m, &a, &h)?.bundle)
        }
        Command::Pullback { x, source, map } => {
            let x = read_bundle(x)?;
            let src = Arc::new(read_doc::<ComplexDoc>(source)?.to_complex()?);
            validate_complex(&src).into_result()?;
            let f = read_doc::<MapDoc>(map)?.to_map(&src, x.base())?;
            bundle_out(&pullback(&x, src, &f)?.0)
        }
        Command::Product { x, xp } => bundle_out(&fiberwise_product(&read_bundle(x)?, &read_bundle(xp)?)?),
        Command::Fnspace { x, object } => {
            let x = read_bundle(x)?;
            let v = x.structure().cat.object_index(object)?;
            bundle_out(&function_bundle(&x, v)?.bundle)
        }
        Command::Principal { x } => doc(&DiagramDoc::from_diagram(&principal_diagram(&read_bundle(x)?)?)),
        Command::Coend { diagram, fibres } => {
            let p = read_doc::<DiagramDoc>(diagram)?.to_diagram()?;
            validate_diagram(&p).into_result()?;
            let (cat, ff) = read_doc::<CategoryDoc>(fibres)?.to_parts()?;
            if &cat != p.cat() {
                return Err(Error::Precondition("the fibre functor is not defined on the diagram's category".into()));
            }
            let co = coend(&p, &ff)?;
            doc(&coend_doc(&p, &ff, &co))
        }
        Command::Reconstruct { x } => {
            let x = read_bundle(x)?;
            let check = reconstruct_check(&x)?;
            checked(&iso_doc(&x, &check), check.holds)
        }
        Command::Associate { x, functor, category } => {
            let x = read_bundle(x)?;
            let g = Arc::new(read_doc::<CategoryDoc>(category)?.to_structure()?);
            let phi = read_doc::<FunctorDoc>(functor)?.to_functor(&x.structure().cat, &g.cat)?;
            bundle_out(&associated_bundle(&x, &phi, g)?.bundle)
        }
        Command::Trivialize { x, region } => {
            let x = read_bundle(x)?;
            let b = x.base();
            let region = match region {
                Some(ids) => {
                    let cells = ids.iter().map(|id| b.index_of(id)).collect::<Result<Vec<_>>>()?;
                    Subcomplex::closure_of(b, cells)
                }
                None => Subcomplex::full(b),
            };
            let t = trivialize_over(&x, &region)?;
            doc(&triviality_doc(&x, &region, &t))
        }
        Command::Certify { x } => {
            let x = read_bundle(x)?;
            let cert = local_triviality_certificate(&x)?;
            checked(&certificate_doc(&x, &cert), cert.holds())
        }
        Command::Cover { x } => {
            let x = read_bundle(x)?;
            let cov = covering_space(&x)?;
            let ok = cov.even_covering.holds();
            checked(&covering_doc(&x, &cov), ok)
        }
        Command::Stratify { x, strata } => {
            let x = read_bundle(x)?;
            let b = x.base();
            let strata = match strata {
                Some(path) => {
                    let other = read_doc::<ComplexDoc>(path)?.to_complex()?;
                    (0..b.len()).map(|c| Ok(other.stratum(other.index_of(b.id(c))?))).collect::<Result<Vec<_>>>()?
                }
                None => b.strata(),
            };
            let plain = x.with_base(Arc::new(b.with_strata(&vec![0; b.len()])?))?;
            let s = stratify_bundle(&plain, &strata)?;
            let round_trips = s.round_trips()?;
            checked(&stratification_doc(&s, round_trips), round_trips)
        }
        Command::Nkc { category } => {
            let s = read_doc::<CategoryDoc>(category)?.to_structure()?;
            let cert = nkc_certificate(&s);
            let ok = cert.holds;
            checked(&cert, ok)
        }
        Command::Dot { x } => {
            let x = read_bundle(x)?;
            Ok(Outcome {
                text: realize_total(&x).to_dot(&x),
                failed: false,
            })
        }
        Command::Verify(a) => cmd_verify(a),
        Command::Example { name } => match name {
            None => Ok(Outcome {
                text: EXAMPLES.iter().map(|n| format!("{n}\n")).collect(),
                failed: false,
            }),
            Some(n) => {
                let value = example(n).ok_or_else(|| Error::UnknownId {
                    kind: "example",
                    id: n.clone(),
                })?;
                doc(&value)
            }
        },
        Command::Generate { seed, bounds } => bundle_out(&gen_instance(&bounds.spec(*seed))?.bundle),
        Command::Normalize { path } => doc(&read_value(path)?),
        Command::Manifest { dir } => {
            let m = workspace::build(dir)?;
            let text = to_canonical_string(&m)?;
            io::write_atomic(&dir.join(workspace::MANIFEST), &text)?;
            Ok(Outcome { text, failed: false })
        }
        Command::Check { dir } => {
            let m: workspace::Manifest = read_doc(&dir.join(workspace::MANIFEST))?;
            let bad = workspace::check(dir, &m)?;
            let ok = bad.is_empty();
            checked(&json!({ "consistent": ok, "mismatches": bad }), ok)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Validation => 1,
        ErrorClass::Precondition => 2,
        ErrorClass::Input => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command).and_then(|o| emit(cli.out.out.as_deref(), &o.text).map(|_| o.failed)) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
