//! The `ffmem` command-line driver.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::grammar::{self, Grammar, SimpleGrammar, DEFAULT_SEED};
use crate::oracle;
use crate::prmem;
use crate::report::{self, MemRecord};
use crate::textio::{self, Format, TextCollection};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ffmem", version, about = "All-vs-all maximal exact matches on a fix-free grammar")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the grammar and write it to a file.
    Build(RunConfig),
    /// Report all MEMs of length at least tau.
    Mems(RunConfig),
    /// Report MEMs with the brute-force reference.
    Oracle(RunConfig),
    /// Compare the pipeline against the reference and list differences.
    Verify(RunConfig),
    /// Print grammar statistics.
    Stats(RunConfig),
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Input collection, or a grammar file written by `build`.
    pub input: PathBuf,
    /// Input format; detected from the first byte when omitted.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    /// Minimum MEM length.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub tau: u64,
    #[arg(long, env = "FFMEM_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Write the prMEM tuples as "X Y oX oY len" lines to this file.
    #[arg(long)]
    pub dump_prmems: Option<PathBuf>,
    /// Report without simplifying the grammar first.
    #[arg(long)]
    pub no_simplify: bool,
    /// Worker threads for the parallel stages.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Minimum length used by the reference side of `verify`.
    #[arg(long, hide = true)]
    pub oracle_tau: Option<u64>,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ffmem: {e}");
            match e {
                Error::Usage(_) => EXIT_USAGE,
                _ => EXIT_IO,
            }
        }
    }
}

pub fn run(cmd: &Command) -> Result<i32> {
    let cfg = match cmd {
        Command::Build(c) | Command::Mems(c) | Command::Oracle(c) | Command::Verify(c) | Command::Stats(c) => c,
    };
    if let Some(t) = cfg.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    match cmd {
        Command::Build(c) => cmd_build(c),
        Command::Mems(c) => cmd_mems(c),
        Command::Oracle(c) => cmd_oracle(c),
        Command::Verify(c) => cmd_verify(c),
        Command::Stats(c) => cmd_stats(c),
    }
}

enum Input {
    Text(TextCollection),
    Grammar(Grammar),
}

fn read_input(cfg: &RunConfig) -> Result<Input> {
    let data = fs::read(&cfg.input)?;
    if data.starts_with(b"FFG1") {
        return Ok(Input::Grammar(Grammar::deserialize(&data)?));
    }
    let format = cfg.format.unwrap_or_else(|| detect_format(&data));
    Ok(Input::Text(textio::parse(&data, format)?))
}

fn detect_format(data: &[u8]) -> Format {
    match data.iter().find(|c| !c.is_ascii_whitespace()) {
        Some(b'>') => Format::Fasta,
        _ => Format::Lines,
    }
}

fn read_text(cfg: &RunConfig) -> Result<TextCollection> {
    match read_input(cfg)? {
        Input::Text(tc) => Ok(tc),
        Input::Grammar(g) => {
            let strings = g.expand_strings();
            TextCollection::with_ids(strings, g.ids.clone())
        }
    }
}

fn read_grammar(cfg: &RunConfig) -> Result<Grammar> {
    Ok(match read_input(cfg)? {
        Input::Text(tc) => Grammar::build(&tc, cfg.seed),
        Input::Grammar(g) => g,
    })
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Summary line of a grammar: `n`, `G`, `g`, `h` and `G / n`.
pub fn stats_line(g: &Grammar) -> String {
    let n = g.text_len();
    let size = g.size();
    format!(
        "n={} G={} g={} h={} ratio={:.4}",
        n,
        size,
        g.num_rules(),
        g.height(),
        if n == 0 { 0.0 } else { size as f64 / n as f64 }
    )
}

pub fn cmd_build(cfg: &RunConfig) -> Result<i32> {
    let tc = match read_input(cfg)? {
        Input::Text(tc) => tc,
        Input::Grammar(_) => return Err(Error::Usage("input is already a grammar file".into())),
    };
    let g = Grammar::build(&tc, cfg.seed);
    let out = cfg.output.clone().unwrap_or_else(|| cfg.input.with_extension("ffg"));
    fs::write(&out, g.serialize())?;
    eprintln!("{}", stats_line(&g));
    Ok(EXIT_OK)
}

/// Runs detection and reporting on a grammar, optionally dumping the tuples.
pub fn pipeline(g: &Grammar, cfg: &RunConfig) -> Result<Vec<MemRecord>> {
    let tuples = prmem::find_prmems(g, cfg.tau);
    if let Some(p) = &cfg.dump_prmems {
        let mut w = BufWriter::new(fs::File::create(p)?);
        for t in &tuples {
            writeln!(w, "{t}")?;
        }
        w.flush()?;
    }
    Ok(if cfg.no_simplify {
        report::report(&tuples, &SimpleGrammar::from_grammar(g))
    } else {
        let (sg, rewritten) = grammar::simplify(g, &tuples);
        report::report(&rewritten, &sg)
    })
}

pub fn cmd_mems(cfg: &RunConfig) -> Result<i32> {
    let g = read_grammar(cfg)?;
    let recs = pipeline(&g, cfg)?;
    let mut w = open_output(cfg.output.as_deref())?;
    report::write_records(&mut w, &recs)?;
    w.flush()?;
    Ok(EXIT_OK)
}

pub fn cmd_oracle(cfg: &RunConfig) -> Result<i32> {
    let tc = read_text(cfg)?;
    let recs = oracle::brute_mems(&tc, cfg.tau);
    let mut w = open_output(cfg.output.as_deref())?;
    report::write_records(&mut w, &recs)?;
    w.flush()?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let tc = read_text(cfg)?;
    let g = match read_input(cfg)? {
        Input::Grammar(g) => g,
        Input::Text(_) => Grammar::build(&tc, cfg.seed),
    };
    let got: BTreeSet<MemRecord> = pipeline(&g, cfg)?.into_iter().collect();
    let want: BTreeSet<MemRecord> = oracle::brute_mems(&tc, cfg.oracle_tau.unwrap_or(cfg.tau)).into_iter().collect();
    let mut w = open_output(cfg.output.as_deref())?;
    let missing: Vec<_> = want.difference(&got).collect();
    let extra: Vec<_> = got.difference(&want).collect();
    for r in &missing {
        writeln!(w, "missing\t{r}")?;
    }
    for r in &extra {
        writeln!(w, "extra\t{r}")?;
    }
    let ok = missing.is_empty() && extra.is_empty();
    writeln!(
        w,
        "{} records={} oracle={} missing={} extra={}",
        if ok { "PASS" } else { "FAIL" },
        got.len(),
        want.len(),
        missing.len(),
        extra.len()
    )?;
    w.flush()?;
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}

pub fn cmd_stats(cfg: &RunConfig) -> Result<i32> {
    let g = read_grammar(cfg)?;
    let mut w = open_output(cfg.output.as_deref())?;
    writeln!(w, "{}", stats_line(&g))?;
    for (k, lv) in g.levels.iter().enumerate() {
        writeln!(w, "level {}\trules={}\tsize={}", k + 1, lv.num_rules(), lv.len())?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}
