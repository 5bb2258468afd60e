//! Command-line front end. `run` returns the process exit code: 0 on
//! success, 1 on a fatal error, 2 on a usage error.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::community::{modularity, Partition};
use crate::cooccur::KeywordGraph;
use crate::corpus::{
    parse_jsonl, parse_tta_csv, write_jsonl, ColumnMap, Corpus, FilterConfig, PeriodKind, RejectRecord,
};
use crate::error::{Error, Result};
use crate::export::{
    export_gexf, export_heatmap_csv, write_edges_csv, write_matrix_csv, write_partition_csv, write_vertices_csv,
};
use crate::lexicon::{KeywordSet, StopWordList, DEFAULT_TOP_K};
use crate::report::{analyze, Analysis, AnalyzeConfig, RunReport};
use crate::synth::{markov_generate, markov_train, random_tweets, topic_mixture, TopicSpec, WordList};

#[derive(Debug, Parser)]
#[command(
    name = "keynet",
    version,
    about = "Keyword co-occurrence community analysis for short-message archives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a corpus bucket by bucket and write a JSON report.
    Analyze(AnalyzeArgs),
    /// Generate a synthetic control corpus as JSONL.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Combine report files into a heatmap CSV.
    Export(ExportArgs),
    /// Score a partition of an edge list.
    Modularity(ModularityArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormat {
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Period {
    Month,
    Quarter,
}

impl From<Period> for PeriodKind {
    fn from(p: Period) -> Self {
        match p {
            Period::Month => PeriodKind::Month,
            Period::Quarter => PeriodKind::Quarter,
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Corpus file.
    #[arg(long)]
    input: PathBuf,
    /// Input format; guessed from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// CSV header names as `role=header` pairs, e.g. `text=content,date=created_at,is_retweet=rt`.
    #[arg(long)]
    column_map: Option<String>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "month")]
    period: Period,
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    top_k: usize,
    #[arg(long, default_value_t = crate::community::DEFAULT_RUNS)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop-word list, one word per line. Defaults to the bundled English list.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    keep_retweets: bool,
    /// Keep tweets in every language.
    #[arg(long)]
    no_lang_filter: bool,
    /// Minimum stop-word share for untagged tweets to count as English.
    #[arg(long, default_value_t = 0.10)]
    stopword_ratio: f64,
    /// Account label for the report; defaults to the input file stem.
    #[arg(long)]
    label: Option<String>,
    /// Run everything on one thread.
    #[arg(long)]
    serial: bool,
    /// Report path; written to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    export_gexf: Option<PathBuf>,
    /// Write edge and vertex CSVs per bucket.
    #[arg(long, value_name = "DIR")]
    export_edges: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    export_partitions: Option<PathBuf>,
    /// Write the dense adjacency matrix CSV per bucket.
    #[arg(long, value_name = "DIR")]
    export_matrix: Option<PathBuf>,
    /// Write a one-row heatmap CSV for this report.
    #[arg(long, value_name = "PATH")]
    heatmap: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VolumeArgs {
    #[arg(long, default_value_t = 6)]
    months: usize,
    #[arg(long, default_value_t = 100)]
    per_month: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output JSONL; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum SynthCommand {
    /// Uniformly random dictionary words.
    Random {
        #[command(flatten)]
        volume: VolumeArgs,
        /// Word list, one word per line. Defaults to the bundled list.
        #[arg(long)]
        wordlist: Option<PathBuf>,
    },
    /// Word-level Markov chain trained on a corpus.
    Markov {
        #[command(flatten)]
        volume: VolumeArgs,
        #[command(flatten)]
        train: InputArgs,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
    },
    /// Topic mixture with a known keyword-to-topic map.
    Topics {
        #[command(flatten)]
        volume: VolumeArgs,
        #[arg(long, default_value_t = 5)]
        topics: usize,
        #[arg(long, default_value_t = 40)]
        vocab: usize,
        #[arg(long, default_value_t = 8)]
        words_per_tweet: usize,
        #[arg(long, default_value_t = 0.02)]
        noise: f64,
        /// Write the ground truth as `keyword,topic` CSV.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ExportArgs {
    /// Heatmap CSV to write.
    #[arg(long)]
    heatmap: PathBuf,
    /// Report JSON files, one row each.
    #[arg(required = true)]
    reports: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct ModularityArgs {
    /// `source,target,weight` CSV.
    #[arg(long)]
    edges: PathBuf,
    /// `keyword,community` CSV covering every vertex.
    #[arg(long)]
    partition: PathBuf,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Analyze(args) => run_analyze(args),
        Command::Synth(cmd) => run_synth(cmd),
        Command::Export(args) => run_export(args),
        Command::Modularity(args) => run_modularity(args),
    }
}

fn report_rejects(path: &Path, rejects: &[RejectRecord]) {
    if rejects.is_empty() {
        return;
    }
    eprintln!("{}: {} record(s) rejected", path.display(), rejects.len());
    for r in rejects.iter().take(10) {
        eprintln!("  {r}");
    }
    if rejects.len() > 10 {
        eprintln!("  ...");
    }
}

fn read_corpus(args: &InputArgs) -> Result<(Corpus, usize)> {
    let path = &args.input;
    let format = args
        .format
        .unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Jsonl,
        });
    let source = path.display().to_string();
    let file = File::open(path).map_err(|e| Error::Config(format!("cannot read {source}: {e}")))?;
    let (corpus, rejects) = match format {
        InputFormat::Jsonl => parse_jsonl(BufReader::new(file), source)?,
        InputFormat::Csv => {
            let columns = match &args.column_map {
                Some(spec) => ColumnMap::parse(spec)?,
                None => ColumnMap::default(),
            };
            parse_tta_csv(BufReader::new(file), &columns, source)?
        }
    };
    report_rejects(path, &rejects);
    Ok((corpus, rejects.len()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn write_to(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut out = create(p)?;
            write(&mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            write(&mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn run_analyze(args: AnalyzeArgs) -> Result<()> {
    let stopwords = match &args.stopwords {
        Some(p) => StopWordList::from_path(p)?,
        None => StopWordList::english(),
    };
    let (corpus, rejected) = read_corpus(&args.input)?;
    let label = args
        .label
        .clone()
        .or_else(|| args.input.input.file_stem().map(|s| s.to_string_lossy().into_owned()));
    let cfg = AnalyzeConfig {
        period: args.period.into(),
        top_k: args.top_k,
        runs: args.runs,
        master_seed: args.seed,
        filter: FilterConfig {
            drop_retweets: !args.keep_retweets,
            english_only: !args.no_lang_filter,
            stopword_ratio_threshold: args.stopword_ratio,
        },
        label,
        parallel: !args.serial,
    };
    let mut analysis = analyze(&corpus, &stopwords, &cfg)?;
    analysis.report.input.rejected = rejected;

    let json = analysis.report.to_json()?;
    write_to(args.out.as_deref(), |w| Ok(w.write_all(json.as_bytes())?))?;
    write_exports(&analysis, &args)?;
    if let Some(path) = &args.heatmap {
        export_heatmap_csv(std::slice::from_ref(&analysis.report), path)?;
    }
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))
}

fn write_exports(analysis: &Analysis, args: &AnalyzeArgs) -> Result<()> {
    for dir in [
        &args.export_gexf,
        &args.export_edges,
        &args.export_partitions,
        &args.export_matrix,
    ]
    .into_iter()
    .flatten()
    {
        ensure_dir(dir)?;
    }
    for a in &analysis.artifacts {
        let label = a.bucket.label();
        let partition = a
            .stabilized
            .as_ref()
            .map(|s| s.representative.clone())
            .unwrap_or_else(|| Partition::singletons(a.graph.vertex_count()));
        if let Some(dir) = &args.export_gexf {
            export_gexf(&a.graph, &partition, &dir.join(format!("{label}.gexf")))?;
        }
        if let Some(dir) = &args.export_edges {
            write_to(Some(&dir.join(format!("{label}-edges.csv"))), |w| {
                write_edges_csv(&a.graph, w)
            })?;
            write_to(Some(&dir.join(format!("{label}-vertices.csv"))), |w| {
                write_vertices_csv(&a.graph, w)
            })?;
        }
        if let Some(dir) = &args.export_partitions {
            write_to(Some(&dir.join(format!("{label}-partition.csv"))), |w| {
                write_partition_csv(&a.graph, &partition, w)
            })?;
        }
        if let Some(dir) = &args.export_matrix {
            write_to(Some(&dir.join(format!("{label}-matrix.csv"))), |w| {
                write_matrix_csv(&a.graph, w)
            })?;
        }
    }
    Ok(())
}

fn run_synth(cmd: SynthCommand) -> Result<()> {
    let (corpus, out) = match cmd {
        SynthCommand::Random { volume, wordlist } => {
            let words = match wordlist {
                Some(p) => WordList::from_path(&p)?,
                None => WordList::bundled(),
            };
            (
                random_tweets(&words, volume.months, volume.per_month, volume.seed)?,
                volume.out,
            )
        }
        SynthCommand::Markov { volume, train, order } => {
            let (training, _) = read_corpus(&train)?;
            let model = markov_train(&training, order as usize)?;
            (
                markov_generate(&model, volume.months, volume.per_month, volume.seed)?,
                volume.out,
            )
        }
        SynthCommand::Topics {
            volume,
            topics,
            vocab,
            words_per_tweet,
            noise,
            truth,
        } => {
            let spec = TopicSpec {
                topic_count: topics,
                vocab_per_topic: vocab,
                words_per_tweet,
                cross_topic_noise: noise,
            };
            let (corpus, map) = topic_mixture(&spec, volume.months, volume.per_month, volume.seed)?;
            if let Some(path) = truth {
                write_to(Some(&path), |w| {
                    let mut csv = csv::Writer::from_writer(w);
                    csv.write_record(["keyword", "topic"])?;
                    for (word, topic) in &map {
                        csv.write_record([word.as_str(), &topic.to_string()])?;
                    }
                    csv.flush()?;
                    Ok(())
                })?;
            }
            (corpus, volume.out)
        }
    };
    write_to(out.as_deref(), |w| write_jsonl(&corpus, w))
}

fn run_export(args: ExportArgs) -> Result<()> {
    let reports = args
        .reports
        .iter()
        .map(|p| {
            let text =
                std::fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            RunReport::from_json(&text)
        })
        .collect::<Result<Vec<_>>>()?;
    export_heatmap_csv(&reports, &args.heatmap)
}

/// Reads a header-first CSV and returns the named columns of every row.
fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<String>>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let cols = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h.trim() == *n)
                .ok_or_else(|| Error::Config(format!("{} has no column {n:?}", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok(cols
                .iter()
                .map(|&c| rec.get(c).unwrap_or("").trim().to_string())
                .collect())
        })
        .collect()
}

fn parse_number<T: std::str::FromStr>(raw: &str, what: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::Config(format!("bad {what} {raw:?}")))
}

fn run_modularity(args: ModularityArgs) -> Result<()> {
    let edge_rows = read_columns(&args.edges, &["source", "target", "weight"])?;
    let part_rows = read_columns(&args.partition, &["keyword", "community"])?;

    let mut words: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut intern = |w: &str| -> usize {
        if let Some(&i) = index.get(w) {
            return i;
        }
        words.push(w.to_string());
        index.insert(w.to_string(), words.len() - 1);
        words.len() - 1
    };
    let mut edges = Vec::with_capacity(edge_rows.len());
    for row in &edge_rows {
        let (i, j) = (intern(&row[0]), intern(&row[1]));
        edges.push((i, j, parse_number::<u64>(&row[2], "weight")?));
    }
    for row in &part_rows {
        intern(&row[0]);
    }
    let mut labels = vec![None; words.len()];
    for row in &part_rows {
        labels[index[&row[0]]] = Some(parse_number::<usize>(&row[1], "community")?);
    }
    let labels = labels
        .iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::InvalidPartition(format!("no community for {:?}", words[i]))))
        .collect::<Result<Vec<_>>>()?;

    let graph = KeywordGraph::from_edges(KeywordSet::from_words(words)?, &edges)?;
    let q = modularity(&graph, &Partition::from_labels(&labels))?;
    println!("{q:.6}");
    Ok(())
}
