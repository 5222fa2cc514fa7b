//! Batch front end over the artifact formats. Reports are deterministic:
//! stable ordering, exact rationals. Exit 0 on success, 1 on a domain error,
//! 2 on a usage error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use cantor_core::kernel::{disintegrate, fixed_points, FiniteKernel};
use cantor_core::measure::{diagonal_extract, DyadicMeasure, MeasureSeq, Parity};
use cantor_core::point::{pp_pushforward, rho_pp, PointConfig, WordMap};
use cantor_core::rat::{decimal, fmt_rat, Rat};
use cantor_core::tower::{extend_tower, ConsistentTower};
use cantor_core::tree::ClosedTree;
use cantor_core::word::Word;

use cantor_cli::formats;

#[derive(Parser)]
#[command(name = "cantor", version, about = "Exact measures on Cantor space")]
struct Cli {
    /// Largest artifact depth accepted by any parser.
    #[arg(long, global = true, default_value_t = 12)]
    depth_cap: u8,

    /// Render scalar results with k decimal digits instead of p/q.
    #[arg(long, global = true, value_name = "k")]
    decimal: Option<usize>,

    /// Write the report to a file instead of standard output.
    #[arg(long, global = true, value_name = "path")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

#[derive(Subcommand)]
enum Command {
    /// Parse any artifact file and report its type.
    Validate { file: PathBuf },
    /// Mass a measure assigns to a cylinder set.
    Mass { measure: PathBuf, cylset: PathBuf },
    /// Image measure under one of the bit-thinning projections.
    Marginal {
        measure: PathBuf,
        #[arg(long, value_enum)]
        parity: ParityArg,
    },
    /// Product measure carried along bit interleaving.
    Product { first: PathBuf, second: PathBuf },
    /// Diagonal subsequence and its limit for a sequence of measures.
    Extract {
        #[arg(required = true)]
        measures: Vec<PathBuf>,
    },
    /// Joint extension of a consistent tower, one line per cylinder.
    Extend {
        #[arg(long)]
        tower: PathBuf,
    },
    /// Conditional kernel of a measure given the level-n first factor.
    Disintegrate {
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        level: u8,
    },
    /// Vertices of a kernel's fixed-point polytope.
    Fixpoint {
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Whether every kernel row lives inside its own atom.
    StrictCheck {
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Restrict a kernel to the rows its partners leave fixed.
    DynkinRefine {
        #[arg(long)]
        kernel: PathBuf,
        /// Partner kernels; the kernel itself when omitted.
        #[arg(long = "with")]
        with: Vec<PathBuf>,
    },
    /// Distance between two point configurations over the first K cylinders.
    PpDist {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        terms: u64,
    },
    /// Pushforward of a point configuration along a word map.
    PpPush {
        config: PathBuf,
        /// `delta`, `const:<word>`, or a table file of `<source> <target>` lines.
        #[arg(long, value_name = "spec")]
        map: String,
    },
    /// Least branch of a closed tree, or the retraction of a word onto it.
    #[command(group(ArgGroup::new("query").required(true).args(["word", "least"])))]
    Select {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, value_name = "L")]
        least: Option<u8>,
    },
    /// Run the structural-law suites and print a pass/fail table.
    Oracle,
}

struct Report {
    text: String,
    ok: bool,
}

impl Report {
    fn new(text: String) -> Report {
        Report { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(report) => report,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(1);
        }
    };
    if let Some(path) = &cli.output {
        if let Err(e) = fs::write(path, &report.text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    } else {
        print!("{}", report.text);
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn at(path: &Path, e: formats::ParseError) -> String {
    format!("{}: {e}", path.display())
}

fn load_measure(path: &Path, cap: u8) -> Result<DyadicMeasure, String> {
    formats::parse_measure(&read(path)?, cap).map_err(|e| at(path, e))
}

fn load_kernel(path: &Path, cap: u8) -> Result<FiniteKernel, String> {
    formats::parse_kernel(&read(path)?, cap).map_err(|e| at(path, e))
}

fn load_tower(path: &Path, cap: u8) -> Result<ConsistentTower, String> {
    formats::parse_tower(&read(path)?, cap).map_err(|e| at(path, e))
}

fn load_points(path: &Path, cap: u8) -> Result<PointConfig, String> {
    formats::parse_points(&read(path)?, cap).map_err(|e| at(path, e))
}

fn load_tree(path: &Path, cap: u8) -> Result<ClosedTree, String> {
    formats::parse_tree(&read(path)?, cap).map_err(|e| at(path, e))
}

fn scalar(r: &Rat, cli: &Cli) -> String {
    match cli.decimal {
        Some(k) => decimal(r, k),
        None => fmt_rat(r),
    }
}

fn render_node(node: &[u32]) -> String {
    if node.is_empty() {
        "e".to_owned()
    } else {
        let labels: Vec<String> = node.iter().map(u32::to_string).collect();
        labels.join(".")
    }
}

fn run(cli: &Cli) -> Result<Report, String> {
    let cap = cli.depth_cap;
    match &cli.command {
        Command::Validate { file } => {
            let artifact =
                formats::parse_artifact(&read(file)?, cap).map_err(|e| at(file, e))?;
            Ok(Report::new(format!("valid {}\n", artifact.kind())))
        }
        Command::Mass { measure, cylset } => {
            let m = load_measure(measure, cap)?;
            let s = formats::parse_cylset(&read(cylset)?, cap).map_err(|e| at(cylset, e))?;
            let mass = m.cylinder_mass(&s).map_err(|e| e.to_string())?;
            Ok(Report::new(format!("{}\n", scalar(&mass, cli))))
        }
        Command::Marginal { measure, parity } => {
            let m = load_measure(measure, cap)?;
            let parity = match parity {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            };
            let image = m.bit_marginal(parity).map_err(|e| e.to_string())?;
            Ok(Report::new(formats::write_measure(&image)))
        }
        Command::Product { first, second } => {
            let a = load_measure(first, cap)?;
            let b = load_measure(second, cap)?;
            let p = DyadicMeasure::product_interleaved(&a, &b).map_err(|e| e.to_string())?;
            Ok(Report::new(formats::write_measure(&p)))
        }
        Command::Extract { measures } => {
            let mut items = Vec::with_capacity(measures.len());
            for path in measures {
                items.push(load_measure(path, cap)?);
            }
            let seq = MeasureSeq::new(items).map_err(|e| e.to_string())?;
            let (indices, limit) = diagonal_extract(&seq).map_err(|e| e.to_string())?;
            let rendered: Vec<String> = indices.iter().map(usize::to_string).collect();
            let mut text = format!("indices {}\n", rendered.join(" "));
            text.push_str(&formats::write_measure(&limit));
            Ok(Report::new(text))
        }
        Command::Extend { tower } => {
            let t = load_tower(tower, cap)?;
            let joint = extend_tower(&t);
            let mut text = String::new();
            for n in 0..joint.level_count() {
                for d in 0..=joint.depth(n) {
                    for w in Word::empty().extensions(d) {
                        let mass = joint.mass(n, w).map_err(|e| e.to_string())?;
                        let _ = writeln!(text, "joint level={n} {w} {}", fmt_rat(mass));
                    }
                }
            }
            Ok(Report::new(text))
        }
        Command::Disintegrate { mu, level } => {
            let m = load_measure(mu, cap)?;
            let k = disintegrate(&m, *level).map_err(|e| e.to_string())?;
            Ok(Report::new(formats::write_kernel(&k)))
        }
        Command::Fixpoint { kernel } => {
            let k = load_kernel(kernel, cap)?;
            let mut text = String::new();
            for vertex in fixed_points(&k) {
                let weights: Vec<String> = vertex.weights.iter().map(fmt_rat).collect();
                let _ = writeln!(text, "({})", weights.join(", "));
            }
            Ok(Report::new(text))
        }
        Command::StrictCheck { kernel } => {
            let k = load_kernel(kernel, cap)?;
            let text = match k.strict_witness() {
                None => "strict\n".to_owned(),
                Some(w) => {
                    let words: Vec<String> =
                        w.outside.words().iter().map(|v| v.to_string()).collect();
                    format!(
                        "not strict: atom {} escapes mass {} into {{{}}}\n",
                        w.atom,
                        fmt_rat(&w.escape),
                        words.join(",")
                    )
                }
            };
            Ok(Report::new(text))
        }
        Command::DynkinRefine { kernel, with } => {
            let k = load_kernel(kernel, cap)?;
            let partners: Vec<FiniteKernel> = if with.is_empty() {
                vec![k.clone()]
            } else {
                let mut loaded = Vec::with_capacity(with.len());
                for path in with {
                    loaded.push(load_kernel(path, cap)?);
                }
                loaded
            };
            let refined = k.dynkin_refine(&partners).map_err(|e| e.to_string())?;
            Ok(Report::new(formats::write_kernel(&refined)))
        }
        Command::PpDist { a, b, terms } => {
            let p = load_points(a, cap)?;
            let q = load_points(b, cap)?;
            let d = rho_pp(&p, &q, *terms).map_err(|e| e.to_string())?;
            Ok(Report::new(format!("{}\n", scalar(&d, cli))))
        }
        Command::PpPush { config, map } => {
            let p = load_points(config, cap)?;
            let f = if map == "delta" {
                WordMap::delta(p.depth())
            } else if let Some(word) = map.strip_prefix("const:") {
                let target = Word::parse(word)
                    .ok_or_else(|| format!("invalid word `{word}` in map spec"))?;
                WordMap::constant(p.depth(), target)
            } else {
                let path = Path::new(map);
                formats::parse_word_map(&read(path)?, cap).map_err(|e| at(path, e))?
            };
            let image = pp_pushforward(&p, &f).map_err(|e| e.to_string())?;
            Ok(Report::new(formats::write_points(&image)))
        }
        Command::Select { tree, word, least } => {
            let t = load_tree(tree, cap)?;
            let answer = match (word, least) {
                (Some(w), None) => {
                    let node = if w == "e" {
                        Vec::new()
                    } else {
                        w.split('.')
                            .map(|part| {
                                part.parse::<u32>()
                                    .map_err(|_| format!("invalid node label `{part}`"))
                            })
                            .collect::<Result<Vec<u32>, String>>()?
                    };
                    t.retract(&node).map_err(|e| e.to_string())?
                }
                (None, Some(length)) => t.least_branch(*length).map_err(|e| e.to_string())?,
                _ => unreachable!("the argument group admits exactly one query"),
            };
            Ok(Report::new(format!("{}\n", render_node(&answer))))
        }
        Command::Oracle => {
            let mut text = String::new();
            let mut ok = true;
            for suite in cantor_core::laws::run_all() {
                if suite.passed() {
                    let _ = writeln!(text, "{} pass cases={}", suite.name, suite.cases);
                } else {
                    ok = false;
                    let _ = writeln!(
                        text,
                        "{} FAIL cases={} failures={}",
                        suite.name, suite.cases, suite.failures
                    );
                    if let Some(first) = &suite.first_failure {
                        let _ = writeln!(text, "  first: {first}");
                    }
                }
            }
            Ok(Report { text, ok })
        }
    }
}
