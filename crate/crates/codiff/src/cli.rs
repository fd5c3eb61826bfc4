//! Batch command-line front end: JSON in, JSON (or DOT) out, with
//! deterministic bytes for fixed inputs. Exit codes: 0 success, 1 domain
//! error, 2 malformed input.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::catalog::{self, CatalogId};
use crate::codifferential::Codifferential;
use crate::cohomology::cohomology;
use crate::contraction;
use crate::error::{CatalogError, ContractionError};
use crate::miniversal;
use crate::scalar::{scalar_to_json, Field};

#[derive(Parser)]
#[command(name = "codiff", version, about = "Exact Lie algebra codifferential toolkit")]
struct Cli {
    /// Directory with external catalog JSON overriding built-in data
    #[arg(long, global = true)]
    catalog_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether the input satisfies the Jacobi identity
    Jacobi {
        file: PathBuf,
        /// Reinterpret the input over this field (Q or Qi)
        #[arg(long)]
        field: Option<String>,
    },
    /// Cocycle, coboundary and cohomology dimensions at one degree
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        field: Option<String>,
    },
    /// Enumerate diagonal contractions, or contract along a curve
    Contract {
        file: PathBuf,
        /// Largest diagonal exponent searched
        #[arg(long, default_value_t = 3)]
        bound: i64,
        /// Also record the contraction to the abelian algebra
        #[arg(long)]
        include_abelian: bool,
        /// JSON file with a monomial curve matrix g_t
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Emit a DOT digraph fragment (to the given path, or stdout)
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        dot: Option<String>,
        #[arg(long)]
        field: Option<String>,
    },
    /// Miniversal deformation with base relations
    Miniversal {
        file: PathBuf,
        /// Truncation order for the power series
        #[arg(long, default_value_t = 6)]
        order: u32,
        #[arg(long)]
        field: Option<String>,
    },
    /// Identify the input against the moduli catalogs
    Identify {
        file: PathBuf,
        /// Exit with an error when the input is unclassified
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        field: Option<String>,
    },
    /// Decide equivalence of two codifferentials, with a witness
    Equivalent {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        field: Option<String>,
    },
    /// List the entries of a catalog (3c, 3r or 4c)
    Catalog {
        #[arg(long, value_name = "ID")]
        list: String,
    },
    /// Emit the expected degeneration graph of a catalog
    Graph {
        #[arg(long, value_name = "ID")]
        catalog: String,
        /// Emit DOT (to the given path, or stdout)
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        dot: Option<String>,
    },
}

enum CliError {
    Domain(String),
    Malformed(String),
}

impl From<ContractionError> for CliError {
    fn from(e: ContractionError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn read_algebra(path: &Path, field: &Option<String>) -> Result<Codifferential, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {}", path.display(), e)))?;
    let d = Codifferential::parse_str(&text)
        .map_err(|e| CliError::Malformed(format!("{}: {}", path.display(), e)))?;
    match field.as_deref() {
        None => Ok(d),
        Some("Q") => d
            .with_field(Field::Q)
            .map_err(|e| CliError::Malformed(e.to_string())),
        Some("Qi") => d
            .with_field(Field::Qi)
            .map_err(|e| CliError::Malformed(e.to_string())),
        Some(other) => Err(CliError::Malformed(format!("unknown field `{}`", other))),
    }
}

fn parse_catalog(id: &str) -> Result<CatalogId, CliError> {
    CatalogId::parse(id)
        .ok_or_else(|| CliError::Malformed(format!("unknown catalog `{}` (use 3c, 3r or 4c)", id)))
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn emit_dot(target: &str, dot: String) -> Result<(), CliError> {
    if target == "-" {
        print!("{}", dot);
        Ok(())
    } else {
        std::fs::write(target, dot)
            .map_err(|e| CliError::Malformed(format!("writing {}: {}", target, e)))
    }
}

fn classification_json(d: &Codifferential) -> serde_json::Value {
    match catalog::identify(d) {
        Ok(id) => {
            let mut map = serde_json::Map::new();
            map.insert("label".into(), serde_json::Value::String(id.label.clone()));
            map.insert(
                "params".into(),
                serde_json::Value::Array(
                    id.params.iter().map(|p| scalar_to_json(p, d.field())).collect(),
                ),
            );
            serde_json::Value::Object(map)
        }
        Err(_) => serde_json::Value::Null,
    }
}

fn node_for(d: &Codifferential, fallback: &str) -> String {
    match catalog::identify(d) {
        Ok(id) => catalog::node_name(&id.label, &id.params),
        Err(_) => fallback.to_string(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Jacobi { file, field } => {
            let d = read_algebra(&file, &field)?;
            let defect = d.jacobi_defect();
            let mut map = serde_json::Map::new();
            map.insert("is_lie".into(), serde_json::Value::Bool(defect.is_zero()));
            if !defect.is_zero() {
                map.insert(
                    "defect".into(),
                    crate::cohomology::cochain_to_json(&defect, d.field()),
                );
            }
            emit(&serde_json::Value::Object(map));
            Ok(())
        }
        Command::Cohomology { file, degree, field } => {
            let d = read_algebra(&file, &field)?;
            let report = cohomology(&d, degree).map_err(|e| CliError::Domain(e.to_string()))?;
            emit(&report.to_json(d.field()));
            Ok(())
        }
        Command::Contract { file, bound, include_abelian, curve, dot, field } => {
            let d = read_algebra(&file, &field)?;
            if let Some(curve_path) = curve {
                let text = std::fs::read_to_string(&curve_path)
                    .map_err(|e| CliError::Malformed(format!("{}: {}", curve_path.display(), e)))?;
                let v: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| CliError::Malformed(e.to_string()))?;
                let g = contraction::curve_from_json(&v)
                    .map_err(|e| CliError::Malformed(e.to_string()))?;
                let limit = contraction::contract_with_curve(&d, &g)?;
                let mut map = serde_json::Map::new();
                map.insert("source".into(), d.to_json());
                map.insert("limit".into(), limit.to_json());
                map.insert("classification".into(), classification_json(&limit));
                emit(&serde_json::Value::Object(map));
                return Ok(());
            }
            let records = contraction::enumerate_contractions(&d, bound, include_abelian)?;
            if let Some(target) = dot {
                let src = node_for(&d, "source");
                let mut out = String::from("digraph contractions {\n");
                for r in &records {
                    let name = node_for(&r.limit, "limit");
                    let label: Vec<String> =
                        r.exponents.exponents().iter().map(|e| e.to_string()).collect();
                    out.push_str(&format!(
                        "  \"{}\" -> \"{}\" [label=\"({})\"];\n",
                        src,
                        name,
                        label.join(",")
                    ));
                }
                out.push_str("}\n");
                emit_dot(&target, out)?;
                return Ok(());
            }
            let arr: Vec<serde_json::Value> = records.iter().map(|r| r.to_json()).collect();
            emit(&serde_json::Value::Array(arr));
            Ok(())
        }
        Command::Miniversal { file, order, field } => {
            let d = read_algebra(&file, &field)?;
            let res = miniversal::solve(&d, order)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            emit(&res.to_json());
            Ok(())
        }
        Command::Identify { file, strict, field } => {
            let d = read_algebra(&file, &field)?;
            match catalog::identify(&d) {
                Ok(id) => {
                    let mut map = serde_json::Map::new();
                    map.insert("label".into(), serde_json::Value::String(id.label.clone()));
                    map.insert(
                        "params".into(),
                        serde_json::Value::Array(
                            id.params.iter().map(|p| scalar_to_json(p, d.field())).collect(),
                        ),
                    );
                    if let Some(entry) = catalog::catalog_entries(CatalogId::C3)
                        .into_iter()
                        .chain(catalog::catalog_entries(CatalogId::R3))
                        .chain(catalog::catalog_entries(CatalogId::C4))
                        .find(|e| e.label == id.label)
                    {
                        map.insert(
                            "classical_name".into(),
                            serde_json::Value::String(entry.classical_name.into()),
                        );
                    }
                    emit(&serde_json::Value::Object(map));
                    Ok(())
                }
                Err(CatalogError::Unclassified) if !strict => {
                    let mut map = serde_json::Map::new();
                    map.insert("label".into(), serde_json::Value::String("Unclassified".into()));
                    emit(&serde_json::Value::Object(map));
                    Ok(())
                }
                Err(e) => Err(CliError::Domain(e.to_string())),
            }
        }
        Command::Equivalent { file1, file2, field } => {
            let a = read_algebra(&file1, &field)?;
            let b = read_algebra(&file2, &field)?;
            let mut map = serde_json::Map::new();
            match catalog::equivalent(&a, &b) {
                catalog::Equivalence::Equivalent { witness, scale } => {
                    map.insert("equivalent".into(), serde_json::Value::Bool(true));
                    let rows: Vec<serde_json::Value> = (0..witness.dim())
                        .map(|r| {
                            serde_json::Value::Array(
                                (0..witness.dim())
                                    .map(|c| scalar_to_json(witness.matrix().at(r, c), a.field()))
                                    .collect(),
                            )
                        })
                        .collect();
                    map.insert("witness".into(), serde_json::Value::Array(rows));
                    map.insert("scale".into(), scalar_to_json(&scale, a.field()));
                }
                catalog::Equivalence::Different { reason } => {
                    map.insert("equivalent".into(), serde_json::Value::Bool(false));
                    map.insert("reason".into(), serde_json::Value::String(reason));
                }
                catalog::Equivalence::Unknown => {
                    map.insert(
                        "equivalent".into(),
                        serde_json::Value::String("unknown".into()),
                    );
                }
            }
            emit(&serde_json::Value::Object(map));
            Ok(())
        }
        Command::Catalog { list } => {
            let id = parse_catalog(&list)?;
            if let Some(dir) = &cli.catalog_dir {
                let path = dir.join(format!("entries_{}.json", list.to_ascii_lowercase()));
                if path.exists() {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Malformed(e.to_string()))?;
                    let v: serde_json::Value = serde_json::from_str(&text)
                        .map_err(|e| CliError::Malformed(e.to_string()))?;
                    emit(&v);
                    return Ok(());
                }
            }
            let entries: Vec<serde_json::Value> = catalog::catalog_entries(id)
                .into_iter()
                .map(|e| {
                    let mut map = serde_json::Map::new();
                    map.insert("label".into(), serde_json::Value::String(e.label.into()));
                    map.insert("dim".into(), serde_json::Value::from(e.catalog.dim()));
                    map.insert(
                        "field".into(),
                        serde_json::Value::String(e.catalog.field().to_string()),
                    );
                    map.insert(
                        "parameter_slots".into(),
                        serde_json::Value::from(e.parameter_slots),
                    );
                    map.insert(
                        "symmetry".into(),
                        serde_json::Value::String(format!("{:?}", e.symmetry)),
                    );
                    map.insert(
                        "classical_name".into(),
                        serde_json::Value::String(e.classical_name.into()),
                    );
                    map.insert(
                        "matrix_template".into(),
                        serde_json::Value::Array(
                            e.template_rows
                                .iter()
                                .map(|r| serde_json::Value::String((*r).into()))
                                .collect(),
                        ),
                    );
                    serde_json::Value::Object(map)
                })
                .collect();
            emit(&serde_json::Value::Array(entries));
            Ok(())
        }
        Command::Graph { catalog: catalog_id, dot } => {
            let id = parse_catalog(&catalog_id)?;
            let arrows = if let Some(dir) = &cli.catalog_dir {
                let path = dir.join(format!("graph_{}.json", catalog_id.to_ascii_lowercase()));
                if path.exists() {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Malformed(e.to_string()))?;
                    let v: Vec<(String, String)> = serde_json::from_str(&text)
                        .map_err(|e| CliError::Malformed(e.to_string()))?;
                    v
                } else {
                    catalog::expected_graph(id)
                }
            } else {
                catalog::expected_graph(id)
            };
            if let Some(target) = dot {
                emit_dot(&target, catalog::graph_to_dot(id, &arrows))?;
                return Ok(());
            }
            let arr: Vec<serde_json::Value> = arrows
                .iter()
                .map(|(a, b)| {
                    serde_json::Value::Array(vec![
                        serde_json::Value::String(a.clone()),
                        serde_json::Value::String(b.clone()),
                    ])
                })
                .collect();
            emit(&serde_json::Value::Array(arr));
            Ok(())
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_cli() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {}", msg);
            1
        }
        Err(CliError::Malformed(msg)) => {
            eprintln!("error: {}", msg);
            2
        }
    }
}
