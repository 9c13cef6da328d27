use std::ffi::OsString;
use std::io::{self, BufWriter, Read, Write};
use std::os::unix::ffi::OsStrExt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use rayon::prelude::*;

use pkidx::oracle::{naive_locate, naive_predecessor};
use pkidx::verify::{verify, Stats};
use pkidx::{BuildOptions, Corpus, Index, IndexFile, QueryOptions, QueryTrace};

#[derive(Parser)]
#[command(name = "pkidx", version, about = "Full-text index over bit-packed text")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index file from a text or FASTA file.
    Build {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Heavy-node threshold t (at least 2).
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        force_threshold: Option<u64>,
        /// Read the input as FASTA records.
        #[arg(long)]
        fasta: bool,
    },
    /// Answer patterns given as arguments, in a file, or on stdin.
    Query {
        index: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Print the query path as `#` lines.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Engine::Indexed)]
        engine: Engine,
        /// Print locate positions in increasing order instead of suffix order.
        #[arg(long)]
        sort_positions: bool,
        /// One pattern per line.
        #[arg(short = 'f', long = "file")]
        file: Option<PathBuf>,
        /// Patterns; a `hex:` prefix gives the bytes in hexadecimal.
        patterns: Vec<OsString>,
    },
    /// Run the self-check suites.
    Verify {
        index: PathBuf,
        /// Sampled checks per suite; 0 runs structural checks only.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print index statistics.
    Stats { index: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Count,
    Locate,
    Predecessor,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Count => "count",
            Mode::Locate => "locate",
            Mode::Predecessor => "predecessor",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Naive,
    Indexed,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("PKIDX_LOG")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { input, output, force_threshold, fasta } => {
            build(&input, &output, force_threshold.map(|t| t as usize), fasta)
        }
        Command::Query { index, mode, trace, engine, sort_positions, file, patterns } => {
            let opts = QueryArgs { mode, trace, engine, sort_positions };
            query(&index, opts, file, patterns)
        }
        Command::Verify { index, samples, seed } => run_verify(&index, samples, seed),
        Command::Stats { index } => stats(&index),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("pkidx: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn build(input: &Path, output: &Path, threshold: Option<usize>, fasta: bool) -> anyhow::Result<bool> {
    let data = std::fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let corpus = if fasta { Corpus::parse_fasta(&data)? } else { Corpus::raw(data) };
    let start = std::time::Instant::now();
    let index = Index::build_with(&corpus.text, &BuildOptions { force_threshold: threshold })
        .with_context(|| format!("indexing {}", input.display()))?;
    info!("indexed {} symbols in {:.2?}", index.len(), start.elapsed());
    let file = IndexFile::new(index, corpus.records);
    file.save(output).with_context(|| format!("writing {}", output.display()))?;
    Ok(true)
}

#[derive(Clone, Copy)]
struct QueryArgs {
    mode: Mode,
    trace: bool,
    engine: Engine,
    sort_positions: bool,
}

fn decode_pattern(raw: &[u8]) -> anyhow::Result<Vec<u8>> {
    match raw.strip_prefix(b"hex:") {
        Some(h) => hex::decode(h).context("bad hex pattern"),
        None => Ok(raw.to_vec()),
    }
}

fn read_lines(data: &[u8]) -> Vec<Vec<u8>> {
    let mut lines: Vec<Vec<u8>> =
        data.split(|&b| b == b'\n').map(|l| l.strip_suffix(b"\r").unwrap_or(l).to_vec()).collect();
    if data.ends_with(b"\n") || data.is_empty() {
        lines.pop();
    }
    lines
}

fn query(path: &Path, args: QueryArgs, file: Option<PathBuf>, patterns: Vec<OsString>) -> anyhow::Result<bool> {
    let raw_patterns: Vec<Vec<u8>> = if let Some(f) = file {
        read_lines(&std::fs::read(&f).with_context(|| format!("reading {}", f.display()))?)
    } else if !patterns.is_empty() {
        patterns.iter().map(|p| p.as_bytes().to_vec()).collect()
    } else {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        read_lines(&buf)
    };
    let index = IndexFile::load(path).with_context(|| format!("loading {}", path.display()))?;
    let text = (args.engine == Engine::Naive).then(|| index.index.text().to_bytes());

    let results: Vec<Result<String, String>> = raw_patterns
        .par_iter()
        .enumerate()
        .map(|(id, raw)| {
            let p = decode_pattern(raw).map_err(|e| format!("pattern {id}: {e:#}"))?;
            Ok(answer(&index, text.as_deref(), &p, id, args))
        })
        .collect();

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut ok = true;
    for r in results {
        match r {
            Ok(s) => out.write_all(s.as_bytes())?,
            Err(e) => {
                ok = false;
                out.flush()?;
                eprintln!("pkidx: {e}");
            }
        }
    }
    out.flush()?;
    Ok(ok)
}

/// Output block for one pattern: optional trace lines, then the result line.
fn answer(file: &IndexFile, naive_text: Option<&[u8]>, p: &[u8], id: usize, args: QueryArgs) -> String {
    let mut block = String::new();
    let (positions, predecessor) = match naive_text {
        Some(text) => {
            let mut hits = naive_locate(text, p);
            // Suffix order, as the index reports it.
            hits.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
            (hits, naive_predecessor(text, p))
        }
        None => {
            let (a, trace) = file.index.answer_traced(p, &QueryOptions::default());
            if args.trace {
                block.push_str(&trace_line(&trace));
            }
            if args.mode == Mode::Count && file.records.is_empty() {
                block.push_str(&format!("{id}\tcount\t{}\n", a.count()));
                return block;
            }
            (file.index.positions(&a), file.index.predecessor_of(&a))
        }
    };
    let mut positions = positions;
    if !file.records.is_empty() {
        positions.retain(|&s| file.records.within_record(s, p.len()));
    }
    let result = match args.mode {
        Mode::Count => positions.len().to_string(),
        Mode::Locate => {
            if args.sort_positions {
                positions.sort_unstable();
            }
            positions.iter().map(|&s| file.label(s)).collect::<Vec<_>>().join(" ")
        }
        Mode::Predecessor => predecessor.map_or_else(|| "-".to_string(), |s| file.label(s)),
    };
    block.push_str(&format!("{id}\t{}\t{result}\n", args.mode.name()));
    block
}

fn trace_line(t: &QueryTrace) -> String {
    let mut s = format!("# route={:?}", t.route).to_lowercase();
    s.push_str(&format!(
        " micro_trees={} navigated={} nav_chunks={}",
        t.micro_trees_visited, t.codes_navigated, t.nav_chunks
    ));
    if let Some(k) = t.stop_kind {
        s.push_str(&format!(" stop={}", format!("{k:?}").to_lowercase()));
    }
    if t.light_hit {
        s.push_str(" light_hit=1");
    }
    if t.heavy_pred_queries > 0 {
        s.push_str(&format!(" heavy_pred_queries={}", t.heavy_pred_queries));
    }
    if let Some(dp) = t.dp {
        s.push_str(&format!(" dp={}@{}", dp.node, dp.depth));
    }
    if let Some(src) = t.dp_source {
        s.push_str(&format!(" dp_from={}", format!("{src:?}").to_lowercase()));
    }
    s.push_str(&format!(" search_chunks={} search_steps={}\n", t.search.chunk_comparisons, t.search.iterations));
    s
}

fn run_verify(path: &Path, samples: usize, seed: u64) -> anyhow::Result<bool> {
    let file = IndexFile::load(path).with_context(|| format!("loading {}", path.display()))?;
    let reports = verify(&file, samples, seed);
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} suites, {failed} failed", reports.len())?;
    Ok(failed == 0)
}

fn stats(path: &Path) -> anyhow::Result<bool> {
    let file = IndexFile::load(path).with_context(|| format!("loading {}", path.display()))?;
    let mut out = io::stdout().lock();
    for (k, v) in Stats::of(&file).lines() {
        writeln!(out, "{k}\t{v}")?;
    }
    Ok(true)
}
