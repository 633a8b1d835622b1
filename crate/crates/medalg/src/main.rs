use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use medalg::checks::run_registry;
use medalg::corpus::{build_corpus, CorpusSpec};
use medalg::examples::{demo, DEMOS};
use medalg::io::{write_file, AlgebraFile};
use medalg::report::{dump_reproducers, summary_table, to_json};
use medalg::HarnessError;
use medalg_core::roller::{consistent_orientations, MAX_ORIENTATION_WALLS};
use medalg_core::symbolic::{symbolic_mmc, StarletCompactification, SymbolicSpec};
use medalg_core::uniformity::t2m_check;
use medalg_core::FiniteMedianAlgebra;
use serde::{Deserialize, Serialize};

/// Finite median algebras: construction, analysis and statement checks.
#[derive(Parser)]
#[command(name = "medalg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the check registry over a generated corpus.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated check ids; all checks when omitted.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Corpus spec file (JSON); `--seed` overrides its seed.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Use the small corpus.
        #[arg(long, conflicts_with = "spec")]
        small: bool,
        /// Write one reproducer file per failure into this directory.
        #[arg(long)]
        reproducers: Option<PathBuf>,
    },
    /// Summarize an algebra file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Describe the boundary of a symbolic compactification.
    Roller {
        #[arg(long)]
        symbolic: String,
    },
    /// Dilworth colouring and chain-product coordinates of an interval.
    EmbedInterval { file: PathBuf, x: String, y: String },
    /// Run a fixed worked example.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(DEMOS))]
        name: String,
    },
    /// Write one corpus algebra, or the algebra embedded in an analysis.
    Gen {
        #[arg(long, conflicts_with = "from_report")]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Instance id; the first instance when omitted.
        #[arg(long, conflicts_with = "from_report")]
        id: Option<String>,
        /// Structured output of `analyze`.
        #[arg(long)]
        from_report: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Serialize, Deserialize)]
struct Analysis {
    n: usize,
    rank: usize,
    walls: usize,
    adjacent_pairs: usize,
    chain_intervals: usize,
    t2m: bool,
    /// Separated pair and gate pair when `t2m` fails.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    t2m_witness: Option<String>,
    discrete: bool,
    /// `None` above the orientation wall bound.
    roller_orientations: Option<usize>,
    algebra: AlgebraFile,
}

fn read(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(|source| HarnessError::Read { path: path.into(), source })
}

fn load(path: &Path) -> Result<(AlgebraFile, FiniteMedianAlgebra), HarnessError> {
    let file: AlgebraFile = serde_json::from_str(&read(path)?)?;
    let a = file.build()?;
    Ok((file, a))
}

fn analyze(file: AlgebraFile, a: &FiniteMedianAlgebra) -> Result<Analysis, HarnessError> {
    let walls = a.walls()?;
    let sb = a.chain_subbase();
    let (t2m, t2m_witness) = match t2m_check(a, &sb) {
        Ok(_) => (true, None),
        Err(v) => {
            let names: Vec<String> = v.elements.iter().map(|&e| a.element_name(e)).collect();
            (false, Some(format!("{}: {}", v.reason, names.join(" "))))
        }
    };
    let roller_orientations =
        if walls.len() <= MAX_ORIENTATION_WALLS { Some(consistent_orientations(&walls)?.len()) } else { None };
    Ok(Analysis {
        n: a.len(),
        rank: walls.rank()?,
        walls: walls.len(),
        adjacent_pairs: a.adjacent_pairs().len(),
        chain_intervals: sb.pair_count(),
        t2m,
        t2m_witness,
        discrete: a.tau_m(&sb).is_discrete(),
        roller_orientations,
        algebra: file,
    })
}

/// An element by index or by comma-separated label.
fn element(a: &FiniteMedianAlgebra, s: &str) -> Result<usize, HarnessError> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    if t.contains(',') {
        let label: Vec<u16> = t
            .split(',')
            .map(|c| c.trim().parse::<u16>())
            .collect::<Result<_, _>>()
            .map_err(|_| HarnessError::Input(format!("bad label {s:?}")))?;
        return a.index_of_label(&label).ok_or_else(|| HarnessError::Input(format!("no element labelled {s:?}")));
    }
    match t.parse::<usize>() {
        Ok(i) if i < a.len() => Ok(i),
        _ => Err(HarnessError::Input(format!("no element {s:?} among {}", a.len()))),
    }
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Verify { seed, checks, out, spec, small, reproducers } => {
            let mut corpus_spec = match (&spec, small) {
                (Some(p), _) => serde_json::from_str::<CorpusSpec>(&read(p)?)?,
                (None, true) => CorpusSpec::small(seed),
                (None, false) => CorpusSpec::default(),
            };
            corpus_spec.seed = seed;
            let corpus = build_corpus(&corpus_spec)?;
            let reports = run_registry(&corpus, checks.as_deref(), seed)?;
            print!("{}", summary_table(&reports));
            println!("{} instances, {} reports", corpus.len(), reports.len());
            if let Some(p) = out {
                write_file(&p, &to_json(&reports))?;
            }
            if let Some(dir) = reproducers {
                fs::create_dir_all(&dir).map_err(|source| HarnessError::Write { path: dir.clone(), source })?;
                dump_reproducers(&reports, &dir)?;
            }
            for r in reports.iter().filter(|r| !r.passed()) {
                let reason = r.witness.as_ref().map_or("", |w| w.reason.as_str());
                println!("FAIL {} {}: {reason}", r.check_id, r.instance_id);
            }
            Ok(reports.iter().all(|r| r.passed()))
        }
        Command::Analyze { file, format } => {
            let (f, a) = load(&file)?;
            let an = analyze(f, &a)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&an)?),
                Format::Text => {
                    println!("elements: {}", an.n);
                    println!("rank: {}", an.rank);
                    println!("walls: {}", an.walls);
                    println!("adjacent pairs: {}", an.adjacent_pairs);
                    println!("chain intervals: {}", an.chain_intervals);
                    match &an.t2m_witness {
                        None => println!("gate separation: yes"),
                        Some(w) => println!("gate separation: no ({w})"),
                    }
                    println!("intrinsic topology discrete: {}", if an.discrete { "yes" } else { "no" });
                    match an.roller_orientations {
                        Some(k) => println!("consistent orientations: {k}"),
                        None => println!(
                            "consistent orientations: not enumerated (more than {MAX_ORIENTATION_WALLS} walls)"
                        ),
                    }
                }
            }
            Ok(true)
        }
        Command::Roller { symbolic } => {
            let text = match symbolic.parse::<SymbolicSpec>()? {
                SymbolicSpec::Product(factors) => symbolic_mmc(&factors)?.describe_boundary(),
                SymbolicSpec::Starlet(n) => StarletCompactification::new(n)?.describe_boundary(),
            };
            println!("{text}");
            Ok(true)
        }
        Command::EmbedInterval { file, x, y } => {
            let (_, a) = load(&file)?;
            let (x, y) = (element(&a, &x)?, element(&a, &y)?);
            let walls = a.walls()?;
            let emb = walls.interval_chain_embedding(&a, x, y)?;
            emb.verify(&a)?;
            println!(
                "interval [{}, {}]: {} elements, {} chains",
                a.element_name(x),
                a.element_name(y),
                emb.members.len(),
                emb.classes.len()
            );
            for (i, class) in emb.classes.iter().enumerate() {
                let gens: Vec<String> = class
                    .iter()
                    .map(|&w| {
                        let (p, q) = walls.generator(w);
                        format!("{}|{}", a.element_name(p), a.element_name(q))
                    })
                    .collect();
                println!("chain {i} (length {}): {}", emb.factors[i], gens.join(" < "));
            }
            for (z, c) in emb.members.iter().zip(&emb.coords) {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                println!("{} -> ({})", a.element_name(*z), parts.join(","));
            }
            Ok(true)
        }
        Command::Demo { name } => {
            let ex = demo(&name).ok_or(HarnessError::UnknownCheck(name))?;
            for line in &ex.lines {
                println!("{line}");
            }
            match &ex.result {
                Ok(()) => println!("ok"),
                Err(v) => println!("mismatch: {}", v.reason),
            }
            Ok(ex.result.is_ok())
        }
        Command::Gen { spec, seed, id, from_report, out } => {
            let file = match from_report {
                Some(p) => serde_json::from_str::<Analysis>(&read(&p)?)?.algebra,
                None => {
                    let mut s = match spec {
                        Some(p) => serde_json::from_str::<CorpusSpec>(&read(&p)?)?,
                        None => CorpusSpec::small(seed),
                    };
                    s.seed = seed;
                    let corpus = build_corpus(&s)?;
                    let inst = match &id {
                        Some(id) => corpus.iter().find(|i| &i.id == id),
                        None => corpus.first(),
                    }
                    .ok_or_else(|| HarnessError::Input(format!("no instance {:?}", id.unwrap_or_default())))?;
                    AlgebraFile::from_algebra(&inst.algebra)?
                }
            };
            file.build()?;
            write_file(&out, &file.to_json())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
