//! Command-line front end for the Dowker toolkit.
//!
//! Exit codes: 0 when everything passed, 1 when a verification check
//! failed, 2 on usage, file, or parse errors. All subcommands read and
//! write UTF-8 JSON; `-` means standard input or output.

use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dowker_cli::json::{
    CertificateDoc, ComplexDoc, HomologyDoc, LoadError, MatchingDoc, OrderDoc, RelationDoc,
    VertexMapDoc, ZigzagDoc,
};
use dowker_cli::pipeline::{run_pipeline, PipelineOptions};
use dowker_cli::random::random_relation;
use dowker_core::complex::SimplicialComplex;
use dowker_core::dowker::{
    biclique_complex, dowker_complexes, dowker_left, dowker_right, rectangle_complex, Side,
};
use dowker_core::homology::homology;
use dowker_core::morse::{
    dowker_zigzag, collapse_sequence, dowker_matching_with, expand_relabels, find_cycle,
    isomorphic_zigzag, verify_certificate, VertexOrder,
};
use dowker_core::relation::Relation;

#[derive(Parser)]
#[command(
    name = "dowker",
    about = "Dowker complexes, biclique collapses, and homology of finite relations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Total-order override: JSON array permuting the combined ground-set
    /// labels of the relation the command operates on.
    #[arg(long, global = true, value_name = "perm.json")]
    order: Option<String>,

    /// Which Dowker complex to target (default: both for `dowker`, left
    /// elsewhere).
    #[arg(long, global = true, value_enum)]
    side: Option<SideArg>,

    /// Seed for random generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Expand relabel arrows of zigzags into genuine collapse arrows.
    #[arg(long, global = true)]
    expand_relabels: bool,

    /// Add f-vector and Euler characteristic as a sidecar report.
    #[arg(long, global = true)]
    stats: bool,

    /// Output path; `-` or omitted writes to standard output.
    #[arg(short, long, global = true, value_name = "out.json")]
    output: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Build the left/right Dowker complexes of a relation.
    Dowker { input: String },
    /// Build the biclique complex of a bipartite relation.
    Biclique { input: String },
    /// Build the rectangle complex of a relation.
    Rectangle { input: String },
    /// Build the acyclic matching on B \ C for one side.
    Matching { input: String },
    /// Extract the collapse certificate B ↘ C for one side.
    Collapse { input: String },
    /// Replay a collapse certificate; exits 0 if valid, 1 otherwise.
    Verify { input: String },
    /// Validate a matching and search it for cycles; exits 1 on a cycle.
    VerifyMatching {
        input: String,
        /// Host complex; defaults to the closure of the matched faces.
        #[arg(long, value_name = "complex.json")]
        complex: Option<String>,
    },
    /// Betti numbers, torsion, and Euler characteristic of a complex.
    Homology { input: String },
    /// Run the full verification pipeline on a relation (or on a random
    /// one when --nx/--ny/--density are given instead of a file).
    Pipeline {
        input: Option<String>,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        ny: Option<usize>,
        #[arg(long)]
        density: Option<f64>,
    },
    /// Generate a random relation: each pair kept with probability
    /// `density` under the seeded generator.
    Random {
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        density: f64,
    },
    /// Emit a simple-homotopy zigzag: between the Dowker complexes of a
    /// relation, or between two isomorphic complexes via --isomorphic.
    Zigzag {
        input: String,
        /// Second complex; switches the command to the isomorphism zigzag
        /// and reads `input` as a complex.
        #[arg(long, value_name = "complex.json")]
        isomorphic: Option<String>,
        /// Vertex bijection for --isomorphic, as a JSON object.
        #[arg(long, value_name = "map.json")]
        map: Option<String>,
    },
}

/// Usage, file, and parse failures; all map to exit code 2. Check
/// failures are not errors: the subcommands print their diagnostic and
/// return exit code 1 themselves.
enum Failure {
    Usage(String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<dowker_core::Error> for Failure {
    fn from(e: dowker_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        Ok(buffer)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("reading {path}: {e}")))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("parsing {path}: invalid JSON: {e}")))
}

fn load_relation(path: &str) -> Result<Relation, Failure> {
    let doc: RelationDoc = parse_json(path)?;
    doc.into_relation().map_err(Failure::from)
}

fn load_complex(path: &str) -> Result<SimplicialComplex, Failure> {
    let doc: ComplexDoc = parse_json(path)?;
    doc.into_complex().map_err(Failure::from)
}

/// Prints to stdout, treating a broken pipe as a normal end of output.
fn print_line(content: &str) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{content}") {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(Failure::Usage(format!("writing stdout: {e}"))),
    }
}

fn write_output(target: &Option<String>, content: &str) -> Result<(), Failure> {
    match target.as_deref() {
        None | Some("-") => print_line(content),
        Some(path) => std::fs::write(path, format!("{content}\n"))
            .map_err(|e| Failure::Usage(format!("writing {path}: {e}"))),
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

#[derive(Serialize)]
struct ComplexStats {
    f_vector: Vec<usize>,
    euler: i64,
}

impl ComplexStats {
    fn of(c: &SimplicialComplex) -> Self {
        ComplexStats { f_vector: c.f_vector(), euler: c.euler_characteristic() }
    }
}

/// Writes the `--stats` sidecar: next to the output file, or to stderr
/// when writing to standard output.
fn emit_stats<T: Serialize>(target: &Option<String>, stats: &T) -> Result<(), Failure> {
    let text = to_pretty(stats);
    match target.as_deref() {
        None | Some("-") => {
            eprintln!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(format!("{path}.stats.json"), format!("{text}\n"))
            .map_err(|e| Failure::Usage(format!("writing stats sidecar: {e}"))),
    }
}

fn order_for(relation: &Relation, order_path: &Option<String>) -> Result<VertexOrder, Failure> {
    let combined = relation.combined_universe().map_err(Failure::from)?;
    match order_path {
        Some(path) => {
            let doc: OrderDoc = parse_json(path)?;
            VertexOrder::from_labels(&combined, &doc.0).map_err(Failure::from)
        }
        None => Ok(VertexOrder::declaration(combined.len())),
    }
}

fn single_side(side: Option<SideArg>) -> Result<Side, Failure> {
    match side {
        Some(SideArg::Left) | None => Ok(Side::Left),
        Some(SideArg::Right) => Ok(Side::Right),
        Some(SideArg::Both) => {
            Err(Failure::Usage("--side both is only meaningful for `dowker`".into()))
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Dowker { input } => {
            let relation = load_relation(input)?;
            match cli.side.unwrap_or(SideArg::Both) {
                SideArg::Left => {
                    let c = dowker_left(&relation);
                    write_output(&cli.output, &to_pretty(&ComplexDoc::from_complex(&c)))?;
                    if cli.stats {
                        emit_stats(&cli.output, &ComplexStats::of(&c))?;
                    }
                }
                SideArg::Right => {
                    let c = dowker_right(&relation);
                    write_output(&cli.output, &to_pretty(&ComplexDoc::from_complex(&c)))?;
                    if cli.stats {
                        emit_stats(&cli.output, &ComplexStats::of(&c))?;
                    }
                }
                SideArg::Both => {
                    let pair = dowker_complexes(&relation);
                    let doc = BTreeMap::from([
                        ("left", ComplexDoc::from_complex(&pair.left)),
                        ("right", ComplexDoc::from_complex(&pair.right)),
                    ]);
                    write_output(&cli.output, &to_pretty(&doc))?;
                    if cli.stats {
                        let stats = BTreeMap::from([
                            ("left", ComplexStats::of(&pair.left)),
                            ("right", ComplexStats::of(&pair.right)),
                        ]);
                        emit_stats(&cli.output, &stats)?;
                    }
                }
            }
            Ok(0)
        }
        Command::Biclique { input } => {
            let relation = load_relation(input)?;
            let b = biclique_complex(&relation)?;
            write_output(&cli.output, &to_pretty(&ComplexDoc::from_complex(&b)))?;
            if cli.stats {
                emit_stats(&cli.output, &ComplexStats::of(&b))?;
            }
            Ok(0)
        }
        Command::Rectangle { input } => {
            let relation = load_relation(input)?;
            let e = rectangle_complex(&relation)?;
            write_output(&cli.output, &to_pretty(&ComplexDoc::from_complex(&e)))?;
            if cli.stats {
                emit_stats(&cli.output, &ComplexStats::of(&e))?;
            }
            Ok(0)
        }
        Command::Matching { input } => {
            let relation = load_relation(input)?;
            let side = single_side(cli.side)?;
            let order = order_for(&relation, &cli.order)?;
            let m = dowker_matching_with(&relation, side, &order, false)?;
            write_output(&cli.output, &to_pretty(&MatchingDoc::from_matching(&m.matching)))?;
            Ok(0)
        }
        Command::Collapse { input } => {
            let relation = load_relation(input)?;
            let side = single_side(cli.side)?;
            let order = order_for(&relation, &cli.order)?;
            let m = dowker_matching_with(&relation, side, &order, false)?;
            let certificate = collapse_sequence(&m.complex, &m.target, &m.matching)?;
            write_output(
                &cli.output,
                &to_pretty(&CertificateDoc::from_certificate(&certificate)),
            )?;
            Ok(0)
        }
        Command::Verify { input } => {
            let doc: CertificateDoc = parse_json(input)?;
            let certificate = doc.into_certificate()?;
            let report = verify_certificate(&certificate);
            if report.valid {
                print_line(&format!(
                    "valid: {} steps replay from {} faces down to {} faces",
                    certificate.steps().len(),
                    certificate.from_complex().face_count(),
                    certificate.to_complex().face_count()
                ))?;
                Ok(0)
            } else {
                let failure = report.failure.expect("invalid replay carries a failure");
                print_line(&format!("invalid: {failure}"))?;
                Ok(1)
            }
        }
        Command::VerifyMatching { input, complex } => {
            let doc: MatchingDoc = parse_json(input)?;
            let host = match complex {
                Some(path) => load_complex(path)?,
                None => doc.closure_complex()?,
            };
            let matching = match doc.into_matching(host) {
                Ok(m) => m,
                Err(e) => {
                    print_line(&format!("invalid matching: {e}"))?;
                    return Ok(1);
                }
            };
            match find_cycle(&matching) {
                None => {
                    print_line(&format!("acyclic: {} matched faces", matching.len()))?;
                    Ok(0)
                }
                Some(cycle) => {
                    let universe = matching.complex().universe();
                    let rendered: Vec<String> =
                        cycle.iter().map(|&f| universe.render_face(f)).collect();
                    print_line(&format!("cyclic: ({})", rendered.join(", ")))?;
                    Ok(1)
                }
            }
        }
        Command::Homology { input } => {
            let complex = load_complex(input)?;
            let profile = homology(&complex)?;
            let doc = HomologyDoc::from_profile(&profile)?;
            write_output(&cli.output, &to_pretty(&doc))?;
            Ok(0)
        }
        Command::Pipeline { input, nx, ny, density } => {
            let (relation, seed) = match (input, nx, ny, density) {
                (Some(path), None, None, None) => (load_relation(path)?, None),
                (None, Some(nx), Some(ny), Some(density)) => {
                    if !(0.0..=1.0).contains(density) {
                        return Err(Failure::Usage(format!(
                            "density {density} is outside [0, 1]"
                        )));
                    }
                    (random_relation(*nx, *ny, *density, cli.seed)?, Some(cli.seed))
                }
                _ => {
                    return Err(Failure::Usage(
                        "pipeline needs a relation file, or --nx, --ny and --density".into(),
                    ))
                }
            };
            let options = PipelineOptions {
                order: {
                    let doc: Option<OrderDoc> =
                        cli.order.as_ref().map(|p| parse_json(p)).transpose()?;
                    doc.map(|d| d.0)
                },
                seed,
                ..PipelineOptions::default()
            };
            let report = run_pipeline(&relation, &options)?;
            write_output(&cli.output, &to_pretty(&report))?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Random { nx, ny, density } => {
            if !(0.0..=1.0).contains(density) {
                return Err(Failure::Usage(format!("density {density} is outside [0, 1]")));
            }
            let relation = random_relation(*nx, *ny, *density, cli.seed)?;
            write_output(&cli.output, &to_pretty(&RelationDoc::from_relation(&relation)))?;
            Ok(0)
        }
        Command::Zigzag { input, isomorphic, map } => {
            let zigzag = match (isomorphic, map) {
                (None, None) => {
                    let relation = load_relation(input)?;
                    dowker_zigzag(&relation)?
                }
                (Some(other), Some(map_path)) => {
                    let d = load_complex(input)?;
                    let d2 = load_complex(other)?;
                    let doc: VertexMapDoc = parse_json(map_path)?;
                    isomorphic_zigzag(&d, &d2, &doc.0)?
                }
                _ => {
                    return Err(Failure::Usage(
                        "--isomorphic and --map must be given together".into(),
                    ))
                }
            };
            let zigzag =
                if cli.expand_relabels { expand_relabels(&zigzag)? } else { zigzag };
            write_output(&cli.output, &to_pretty(&ZigzagDoc::from_zigzag(&zigzag)))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
