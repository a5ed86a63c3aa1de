use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fsplit::blowup::{blow_up, boundary_splitting, classify_shape, GraphOfGroups};
use fsplit::complexes::k_graph_local;
use fsplit::config::{Config, OutputFormat};
use fsplit::freegroup::{connected_no_cutvertex, is_simple, whitehead_graph, whitehead_minimize, Word};
use fsplit::partition::{
    circle_compatible, crosses, enumerate_ideal_edges_with_ceiling, is_cagey, random_compatible_family,
    rose_compatible, Partition, SplittingClass, DEFAULT_RANK_CEILING,
};
use fsplit::verify::{self, VerificationReport, LEMMA_IDS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "fsplit", version, about = "Partition calculus for free splittings relative to a rose")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Output format: json, dot or text
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Worker threads for the exhaustive scans
    #[arg(long, global = true, env = "FSPLIT_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Largest rank accepted by enumerating commands (at most 7)
    #[arg(long, global = true, env = "FSPLIT_RANK_CEILING", default_value_t = DEFAULT_RANK_CEILING)]
    rank_ceiling: u8,
    /// Seed for sampled families
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock times in verification reports
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the ideal edges of the rose
    Enum {
        #[arg(long)]
        rank: u8,
        #[arg(long)]
        thick_only: bool,
    },
    /// Compare two partitions given by their first sides, e.g. "x1-,x2+"
    Pair {
        #[arg(long)]
        rank: u8,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Blow up the rose along a compatible family
    Blowup {
        #[arg(long)]
        rank: u8,
        /// JSON list of sides (strings or {"rank","side1"} objects), or one side per line
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        family: Option<PathBuf>,
        /// Use a random compatible family drawn from --seed instead
        #[arg(long)]
        random: bool,
    },
    /// Run a verifier, or `all`
    Verify {
        lemma: String,
        #[arg(long)]
        rank: Option<u8>,
    },
    /// Free group utilities
    Whitehead {
        #[command(subcommand)]
        command: WhiteheadCommand,
    },
    /// Local graph of roses
    Kgraph {
        #[arg(long, default_value_t = 3)]
        rank: u8,
    },
}

#[derive(Subcommand, Debug)]
enum WhiteheadCommand {
    /// Decide whether a word lies in a proper free factor
    Simple {
        #[arg(long)]
        rank: u8,
        #[arg(long)]
        word: String,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<fsplit::Error> for Failure {
    fn from(e: fsplit::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn emit_json(value: &impl Serialize) {
    emit(&serde_json::to_string_pretty(value).expect("serialisable"));
}

fn unsupported(cfg: &Config, what: &str) -> Failure {
    Failure::Usage(format!("{} output is not available for {what}", cfg.format()))
}

fn partition_json(p: &Partition) -> Value {
    serde_json::to_value(p).expect("serialisable")
}

fn run_enum(cfg: &Config, rank: u8, thick_only: bool) -> Outcome {
    cfg.check_rank(rank)?;
    let parts: Vec<Partition> = enumerate_ideal_edges_with_ceiling(rank, cfg.rank_ceiling())?
        .into_iter()
        .filter(|p| !thick_only || p.is_thick())
        .collect();
    match cfg.format() {
        OutputFormat::Json => emit_json(&json!({
            "rank": rank,
            "thick_only": thick_only,
            "count": parts.len(),
            "partitions": parts,
        })),
        OutputFormat::Text => emit(&parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n")),
        OutputFormat::Dot => return Err(unsupported(cfg, "enum")),
    }
    Ok(())
}

fn run_pair(cfg: &Config, rank: u8, p: &str, q: &str) -> Outcome {
    cfg.check_rank(rank)?;
    let (p, q) = (Partition::parse(rank, p)?, Partition::parse(rank, q)?);
    let cross = crosses(&p, &q);
    let same = p.class_representative() == q.class_representative();
    let boundary = if cross { Some(boundary_splitting(&p, &q)?) } else { None };
    match cfg.format() {
        OutputFormat::Json => {
            let b = boundary.as_ref().map(|b| {
                json!({
                    "type": b.kind,
                    "distinct_edges": b.distinct_edges(),
                    "edges": b.edges,
                    "graph": b.graph,
                    "shape": b.shape,
                })
            });
            emit_json(&json!({
                "rank": rank,
                "p": partition_json(&p),
                "q": partition_json(&q),
                "same_splitting": same,
                "crosses": cross,
                "compatible": !cross,
                "rose_compatible": rose_compatible(&p, &q)?,
                "circle_compatible": circle_compatible(&p, &q)?,
                "cagey": is_cagey(&p, &q)?,
                "boundary": b,
            }));
        }
        OutputFormat::Text => {
            let mut lines = vec![
                format!("p: {p}"),
                format!("q: {q}"),
                format!("crosses: {cross}"),
                format!("rose compatible: {}", rose_compatible(&p, &q)?),
                format!("circle compatible: {}", circle_compatible(&p, &q)?),
                format!("cagey: {}", is_cagey(&p, &q)?),
            ];
            if let Some(b) = &boundary {
                lines.push(format!("boundary: {} ({} edges)", b.kind, b.distinct_edges()));
            }
            emit(&lines.join("\n"));
        }
        OutputFormat::Dot => match &boundary {
            Some(b) => emit(&b.graph.to_dot()),
            None => return Err(Failure::Usage("the partitions are compatible; there is no boundary graph".into())),
        },
    }
    Ok(())
}

fn parse_family(rank: u8, text: &str) -> fsplit::Result<Vec<SplittingClass>> {
    let invalid = |m: String| fsplit::Error::InvalidPartition(m);
    if let Ok(items) = serde_json::from_str::<Vec<Value>>(text) {
        return items
            .into_iter()
            .map(|v| match v {
                Value::String(s) => SplittingClass::parse(rank, &s),
                obj @ Value::Object(_) => {
                    let p: Partition = serde_json::from_value(obj).map_err(|e| invalid(e.to_string()))?;
                    if p.rank() != rank {
                        return Err(fsplit::Error::RankMismatch(p.rank(), rank));
                    }
                    SplittingClass::from_partition(p)
                }
                other => Err(invalid(format!("unexpected family entry {other}"))),
            })
            .collect();
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| SplittingClass::parse(rank, l))
        .collect()
}

fn run_blowup(cfg: &Config, rank: u8, family: Option<&PathBuf>) -> Outcome {
    cfg.check_rank(rank)?;
    let family = match family {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            parse_family(rank, &text)?
        }
        None => random_compatible_family(rank, &mut ChaCha8Rng::seed_from_u64(cfg.seed()))?,
    };
    let g = blow_up(&family, rank)?;
    let shape = classify_shape(&g);
    match cfg.format() {
        OutputFormat::Json => emit_json(&json!({
            "rank": rank,
            "family": family,
            "graph": g,
            "shape": shape,
        })),
        OutputFormat::Dot => emit(&g.to_dot()),
        OutputFormat::Text => emit(&describe_graph(&g)),
    }
    Ok(())
}

fn describe_graph(g: &GraphOfGroups) -> String {
    let mut lines = vec![format!("rank {}: {} vertices, {} edges", g.rank, g.vertices.len(), g.edges.len())];
    for v in &g.vertices {
        lines.push(format!("  v{} free rank {}", v.id, v.free_rank));
    }
    for e in &g.edges {
        lines.push(format!("  e{} v{} - v{} {}", e.id, e.ends[0], e.ends[1], e.label));
    }
    lines.join("\n")
}

fn run_verify(cfg: &Config, lemma: &str, rank: Option<u8>, timings: bool) -> Outcome {
    if let Some(r) = rank {
        cfg.check_rank(r)?;
    }
    let ids: Vec<&str> = if lemma == "all" { LEMMA_IDS.to_vec() } else { vec![lemma] };
    let run_one = |id: &str| -> fsplit::Result<VerificationReport> {
        let r = if lemma == "all" { None } else { rank };
        if timings {
            verify::timed(|| verify::run(id, r))
        } else {
            verify::run(id, r)
        }
    };
    let mut reports = Vec::new();
    for id in ids {
        reports.push(run_one(id)?);
    }
    match cfg.format() {
        OutputFormat::Json if lemma == "all" => emit_json(&reports),
        OutputFormat::Json => emit_json(&reports[0]),
        OutputFormat::Text => {
            let lines: Vec<String> = reports
                .iter()
                .map(|r| {
                    let verdict = if r.passed { "PASS" } else { "FAIL" };
                    format!("{verdict} {} rank {} ({} cases, {} failures)", r.lemma, r.rank, r.cases_checked, r.failures.len())
                })
                .collect();
            emit(&lines.join("\n"));
        }
        OutputFormat::Dot => return Err(unsupported(cfg, "verify")),
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run_whitehead_simple(cfg: &Config, rank: u8, word: &str) -> Outcome {
    if rank == 0 || rank > cfg.rank_ceiling() {
        return Err(fsplit::Error::RankOutOfRange { rank, min: 1, max: cfg.rank_ceiling() }.into());
    }
    let w = Word::parse(rank, word)?;
    let simple = is_simple(&w)?;
    let min = whitehead_minimize(&w)?;
    let graph = whitehead_graph(&w)?;
    match cfg.format() {
        OutputFormat::Json => emit_json(&json!({
            "rank": rank,
            "word": w.to_string(),
            "letters": w.letters(),
            "simple": simple,
            "minimal_word": min.minimum.to_string(),
            "reducing_moves": min.moves.len(),
            "graph_connected_without_cut_vertex": connected_no_cutvertex(&graph),
        })),
        OutputFormat::Text => emit(&format!("{w}: {}", if simple { "simple" } else { "not simple" })),
        OutputFormat::Dot => return Err(unsupported(cfg, "whitehead simple")),
    }
    Ok(())
}

fn run_kgraph(cfg: &Config, rank: u8) -> Outcome {
    cfg.check_rank(rank)?;
    let k = k_graph_local(rank)?;
    let degrees: Vec<usize> = (0..k.vertices.len()).map(|v| k.degree(v)).collect();
    let names: Vec<Vec<String>> =
        k.vertices.iter().map(|v| v.classes.iter().map(SplittingClass::encode).collect()).collect();
    match cfg.format() {
        OutputFormat::Json => emit_json(&json!({
            "rank": rank,
            "vertices": names,
            "edges": k.edges,
            "degrees": degrees,
        })),
        OutputFormat::Dot => {
            let mut out = String::from("graph K {\n");
            for (i, n) in names.iter().enumerate() {
                out.push_str(&format!("  r{i} [label=\"{}\"];\n", n.join(" ; ")));
            }
            for [a, b] in &k.edges {
                out.push_str(&format!("  r{a} -- r{b};\n"));
            }
            out.push_str("}\n");
            emit(&out);
        }
        OutputFormat::Text => emit(&format!(
            "{} roses, {} edges, max degree {}",
            names.len(),
            k.edges.len(),
            degrees.iter().max().unwrap_or(&0)
        )),
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let format: OutputFormat = g.format.parse()?;
    let cfg = Config::new(g.rank_ceiling, g.workers, format, g.seed)?;
    // ignore failure: a pool may already exist when embedded
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers()).build_global();
    match &cli.command {
        Command::Enum { rank, thick_only } => run_enum(&cfg, *rank, *thick_only),
        Command::Pair { rank, p, q } => run_pair(&cfg, *rank, p, q),
        Command::Blowup { rank, family, .. } => run_blowup(&cfg, *rank, family.as_ref()),
        Command::Verify { lemma, rank } => run_verify(&cfg, lemma, *rank, g.timings),
        Command::Whitehead { command: WhiteheadCommand::Simple { rank, word } } => {
            run_whitehead_simple(&cfg, *rank, word)
        }
        Command::Kgraph { rank } => run_kgraph(&cfg, *rank),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
