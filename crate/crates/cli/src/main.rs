use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use morita_core::algebra::k0_of_projection;
use morita_core::bimodule::{conjugate, corner_bimodule, external_tensor, internal_tensor, linking_algebra};
use morita_core::fredholm::index;
use morita_core::lab::catalog;
use morita_core::lab::json::{self, Document, DocumentError};
use morita_core::lab::{generate, run_suite, Fixture, Suite, SuiteConfig};
use morita_core::matrix as cm;
use morita_core::module::module_rank;
use morita_core::morita::{induced_map_fredholm, multiplicity_matrix};
use morita_core::{Bimodule, Error, K0Class, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "morita", version, about = "K-theory and Morita equivalence for finite-dimensional C*-algebras")]
struct Cli {
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Fredholm,
    Multiplicity,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and check its invariants.
    Validate { file: PathBuf },
    /// K₀ generators of an algebra, or the class of a projection.
    K0 { file: PathBuf },
    /// K₀ class of a module.
    Rank { file: PathBuf },
    /// Fredholm index of an operator.
    Index { file: PathBuf },
    /// Induced map K₀(A) → K₀(B) of a bimodule.
    InducedMap {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Fredholm)]
        method: Method,
    },
    /// Internal tensor product X ⊗_B Y.
    Tensor {
        x: PathBuf,
        y: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// External tensor product X₁ ⊠ X₂.
    Etensor {
        x: PathBuf,
        y: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Linking algebra of a bimodule.
    Link {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Conjugate bimodule X*.
    Conjugate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Corner bimodule P_A L P_B of a linking algebra, with P_A the first N
    /// coordinates and P_B the rest.
    Corner {
        file: PathBuf,
        #[arg(long = "pa", value_name = "N")]
        pa: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the randomized property suite.
    Verify {
        #[arg(long, default_value = "all", value_parser = ["all", "fredholm", "morita"])]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Extra document to load and check alongside the suite.
        #[arg(long = "fixture")]
        fixtures: Vec<PathBuf>,
        /// Write the report document here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit a pseudorandom document.
    Generate {
        kind: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the canonical example catalog.
    Examples {
        #[arg(long, value_name = "DIR")]
        write: PathBuf,
    },
}

/// Failure classes, mapped to exit codes 1 and 2.
enum Failure {
    Validation(String),
    Usage(String),
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx {
    tol: f64,
    format: Format,
}

impl Ctx {
    fn load(&self, path: &Path) -> Result<Document, Failure> {
        let text = read(path)?;
        json::parse(&text, self.tol).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
    }

    fn emit(&self, text: String, value: Value) {
        match self.format {
            Format::Text => println!("{text}"),
            Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
        }
    }

    fn write_or_print(&self, doc: &Document, output: Option<&Path>) -> Outcome {
        let text = json::serialize(doc);
        match output {
            Some(p) => {
                fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
                self.emit(
                    format!("wrote {} to {}", doc.kind(), p.display()),
                    json!({"written": p.display().to_string(), "kind": doc.kind()}),
                );
            }
            None => print!("{text}"),
        }
        Ok(true)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn wrong_kind(path: &Path, doc: &Document, expected: &str) -> Failure {
    Failure::Validation(format!("{}: expected {expected}, found {}", path.display(), doc.kind()))
}

fn bimodule(ctx: &Ctx, path: &Path) -> Result<Bimodule, Failure> {
    match ctx.load(path)? {
        Document::Bimodule(x) => Ok(x),
        other => Err(wrong_kind(path, &other, "bimodule")),
    }
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx {
        tol: cli.tol,
        format: cli.format,
    };
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be positive and finite, got {}", cli.tol)));
    }
    let tol = ctx.tol;
    match cli.command {
        Command::Validate { file } => {
            let doc = ctx.load(&file)?;
            ctx.emit(format!("valid {}", doc.kind()), json!({"valid": true, "kind": doc.kind()}));
            Ok(true)
        }
        Command::K0 { file } => match ctx.load(&file)? {
            Document::Algebra(a) => {
                let gens: Vec<_> = (0..a.num_blocks()).map(|i| K0Class::generator(&a, i)).collect();
                let unit = a.unit_class();
                let listed: Vec<String> = gens.iter().map(ToString::to_string).collect();
                let text = format!(
                    "K0({a}) = Z^{}\ngenerators: {}\nunit class: {unit}",
                    a.num_blocks(),
                    listed.join(" ")
                );
                let gens: Vec<&[i64]> = gens.iter().map(K0Class::vector).collect();
                ctx.emit(text, json!({"rank": a.num_blocks(), "generators": gens, "unit": unit.vector()}));
                Ok(true)
            }
            Document::Matrix(p) => {
                let c = k0_of_projection(&p, tol)?;
                ctx.emit(c.to_string(), json!({"class": c.vector()}));
                Ok(true)
            }
            other => Err(wrong_kind(&file, &other, "algebra or matrix")),
        },
        Command::Rank { file } => match ctx.load(&file)? {
            Document::Module(m) => {
                let c = module_rank(&m, tol)?;
                ctx.emit(c.to_string(), json!({"rank": c.vector()}));
                Ok(true)
            }
            other => Err(wrong_kind(&file, &other, "module")),
        },
        Command::Index { file } => match ctx.load(&file)? {
            Document::Operator(t) => {
                let c = index(&t, tol)?;
                ctx.emit(c.to_string(), json!({"index": c.vector()}));
                Ok(true)
            }
            other => Err(wrong_kind(&file, &other, "operator")),
        },
        Command::InducedMap { file, method } => {
            let x = bimodule(&ctx, &file)?;
            let oracle = match method {
                Method::Fredholm => None,
                _ => Some(multiplicity_matrix(&x, tol)?),
            };
            let fredholm = match method {
                Method::Multiplicity => None,
                _ => Some(induced_map_fredholm(&x, tol)?),
            };
            let mut lines = Vec::new();
            let mut value = serde_json::Map::new();
            if let Some(m) = &fredholm {
                lines.push(format!("fredholm: {m}"));
                value.insert("fredholm".into(), json!(m.matrix));
            }
            if let Some(m) = &oracle {
                lines.push(format!("multiplicity: {m}"));
                value.insert("multiplicity".into(), json!(m.matrix));
            }
            let agree = match (&fredholm, &oracle) {
                (Some(a), Some(b)) => {
                    let same = a.matrix == b.matrix;
                    lines.push(if same { "methods agree" } else { "METHODS DISAGREE" }.to_string());
                    value.insert("agree".into(), json!(same));
                    same
                }
                _ => true,
            };
            ctx.emit(lines.join("\n"), Value::Object(value));
            Ok(agree)
        }
        Command::Tensor { x, y, output } => {
            let z = internal_tensor(&bimodule(&ctx, &x)?, &bimodule(&ctx, &y)?, tol)?;
            ctx.write_or_print(&Document::Bimodule(z), output.as_deref())
        }
        Command::Etensor { x, y, output } => {
            let z = external_tensor(&bimodule(&ctx, &x)?, &bimodule(&ctx, &y)?, tol)?;
            ctx.write_or_print(&Document::Bimodule(z), output.as_deref())
        }
        Command::Link { file, output } => {
            let l = linking_algebra(&bimodule(&ctx, &file)?, tol)?;
            ctx.write_or_print(&Document::LinkingAlgebra(l.span.basis().to_vec()), output.as_deref())
        }
        Command::Conjugate { file, output } => {
            let x = conjugate(&bimodule(&ctx, &file)?);
            ctx.write_or_print(&Document::Bimodule(x), output.as_deref())
        }
        Command::Corner { file, pa, output } => {
            let span = match ctx.load(&file)? {
                Document::LinkingAlgebra(span) => span,
                other => return Err(wrong_kind(&file, &other, "linking-algebra")),
            };
            let d = span[0].nrows();
            if pa == 0 || pa >= d {
                return Err(Failure::Usage(format!("--pa must lie strictly between 0 and {d}")));
            }
            let bits: Vec<f64> = (0..d).map(|i| if i < pa { 1.0 } else { 0.0 }).collect();
            let p_a = cm::diag_real(&bits);
            let p_b = cm::identity(d) - &p_a;
            let x = corner_bimodule(&span, &p_a, &p_b, tol)?;
            ctx.write_or_print(&Document::Bimodule(x), output.as_deref())
        }
        Command::Verify {
            suite,
            seed,
            trials,
            fixtures,
            output,
        } => {
            if trials == 0 {
                return Err(Failure::Usage("--trials must be positive".into()));
            }
            let suite = Suite::parse(&suite).expect("validated by clap");
            let cfg = SuiteConfig {
                seed,
                trials,
                tol,
                ..SuiteConfig::default()
            };
            let fixtures = fixtures
                .iter()
                .map(|p| {
                    Ok(Fixture {
                        name: p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into()),
                        text: read(p)?,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let report = run_suite(&cfg, suite, &fixtures);
            let doc = Document::Report(report.clone());
            if let Some(p) = &output {
                fs::write(p, json::serialize(&doc))
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            }
            match ctx.format {
                Format::Json => print!("{}", json::serialize(&doc)),
                Format::Text => {
                    print!("{}", report.transcript());
                    for n in &report.notes {
                        println!("note: {n}");
                    }
                    let failed = report.properties.iter().filter(|p| !p.pass).count();
                    println!(
                        "suite {} seed {}: {} properties, {failed} failed, {} ms",
                        report.suite,
                        report.seed,
                        report.properties.len(),
                        report.wall_ms
                    );
                }
            }
            Ok(report.all_pass())
        }
        Command::Generate { kind, seed, output } => {
            let cfg = SuiteConfig {
                seed,
                tol,
                ..SuiteConfig::default()
            };
            let doc = generate(&kind, &cfg).map_err(|e| match e {
                Error::InvalidInput(m) => Failure::Usage(m),
                other => Failure::Validation(other.to_string()),
            })?;
            ctx.write_or_print(&doc, output.as_deref())
        }
        Command::Examples { write } => {
            fs::create_dir_all(&write)
                .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", write.display())))?;
            let mut names = Vec::new();
            let valid = catalog::entries().into_iter().map(|(n, d)| (n, json::serialize(&d)));
            for (name, text) in valid.chain(catalog::negative_fixtures()) {
                let p = write.join(name);
                fs::write(&p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
                names.push(name);
            }
            ctx.emit(
                format!("wrote {} documents to {}", names.len(), write.display()),
                json!({"directory": write.display().to_string(), "files": names}),
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
