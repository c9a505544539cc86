use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tscs::corpus::text_files;
use tscs::eval::{self, ParaphraseEvaluator, Protocol, SeedPair, SensitivityReport, SweepPoint};
use tscs::{
    Alpha, Corpus, PipelineConfig, RawDocument, SimilarityMatrix, SimilarityResult, Stemming,
    Weighting,
};

const SEED_FILES: [&str; 4] = ["set1_a.txt", "set1_b.txt", "set2_a.txt", "set2_b.txt"];

/// Text similarity combining term weights with term placement.
#[derive(Debug, Parser)]
#[command(name = "tscs", version, about)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Weight of cosine against spatial similarity, in [0, 1].
    #[arg(long, global = true, default_value = "0.5", value_parser = parse_alpha)]
    alpha: Alpha,

    /// Paraphrase decision threshold, in [0, 1].
    #[arg(long, global = true, default_value_t = eval::DEFAULT_THRESHOLD, value_parser = parse_threshold)]
    threshold: f64,

    /// Term weighting (default: tf; tfidf for `sensitivity`).
    #[arg(long, global = true, value_enum)]
    weighting: Option<WeightingArg>,

    /// Stop-word file, one word per line; replaces the built-in list.
    #[arg(long, global = true, value_name = "PATH")]
    stopwords: Option<PathBuf>,

    /// Keep tokens unstemmed.
    #[arg(long, global = true)]
    no_stem: bool,

    /// Output format (default depends on the command).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare two text files.
    Sim { a: PathBuf, b: PathBuf },

    /// All-pairs similarity of the *.txt files in a directory.
    Matrix { dir: PathBuf },

    /// Count detected paraphrases in tab-separated sentence-pair files.
    EvalParaphrase {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        gold: GoldArgs,
        /// Also write per-pair scores to this CSV file.
        #[arg(long, value_name = "PATH")]
        pairs_csv: Option<PathBuf>,
    },

    /// Detection counts over a grid of alpha values.
    SweepAlpha {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        gold: GoldArgs,
        /// Comma-separated alpha values (default 0,0.1,...,1).
        #[arg(long, value_delimiter = ',', value_parser = parse_alpha)]
        alphas: Option<Vec<Alpha>>,
    },

    /// Similarity of two seed pairs as the corpus around them grows.
    Sensitivity {
        /// Directory holding exactly set1_a.txt, set1_b.txt, set2_a.txt, set2_b.txt.
        seed_dir: PathBuf,
        /// Directory of *.txt filler documents, added in file-name order.
        filler_dir: PathBuf,
        /// Comma-separated corpus sizes, strictly increasing, first >= 4.
        #[arg(long, value_delimiter = ',', default_values_t = eval::DEFAULT_SIZES)]
        sizes: Vec<usize>,
    },
}

#[derive(Debug, Args)]
struct GoldArgs {
    /// Gold score file, one per input file, in the same order.
    #[arg(long, value_name = "PATH")]
    gold: Vec<PathBuf>,

    /// Score against gold labels: a pair is a paraphrase iff gold >= CUTOFF.
    #[arg(long, value_name = "CUTOFF", requires = "gold")]
    gold_cutoff: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightingArg {
    Tf,
    Tfidf,
}

impl From<WeightingArg> for Weighting {
    fn from(arg: WeightingArg) -> Self {
        match arg {
            WeightingArg::Tf => Weighting::Tf,
            WeightingArg::Tfidf => Weighting::TfIdf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

fn parse_alpha(s: &str) -> Result<Alpha, String> {
    let value: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    Alpha::new(value).map_err(|e| e.to_string())
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let value: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    eval::check_threshold(value).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            // A closed pipe on stdout is not worth reporting.
            if let Some(io_err) = err.downcast_ref::<io::Error>() {
                if io_err.kind() == io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
            }
            eprintln!("tscs: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let opts = &cli.opts;
    let mut config = PipelineConfig::default();
    if let Some(path) = &opts.stopwords {
        config = config.with_stopwords_file(path)?;
    }
    if opts.no_stem {
        config = config.with_stemming(Stemming::None);
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());

    match &cli.command {
        Command::Sim { a, b } => {
            let weighting = opts.weighting.map_or(Weighting::Tf, Weighting::from);
            let result = sim(a, b, opts.alpha, weighting, &config)?;
            write_sim(&mut out, &result, opts.format.unwrap_or(Format::Table))?;
        }
        Command::Matrix { dir } => {
            let load = Corpus::load_directory(dir, &config)?;
            for skipped in &load.skipped {
                eprintln!("tscs: warning: skipped {skipped}");
            }
            if load.corpus.is_empty() {
                bail!("no readable .txt documents in {}", dir.display());
            }
            let weighting = opts.weighting.map_or(Weighting::Tf, Weighting::from);
            let scheme = load.corpus.scheme(weighting)?;
            let matrix = load.corpus.pairwise_matrix(opts.alpha, &scheme)?;
            write_matrix(&mut out, &matrix, opts.format.unwrap_or(Format::Csv))?;
        }
        Command::EvalParaphrase {
            files,
            gold,
            pairs_csv,
        } => {
            let (evaluator, protocol) = evaluator(files, gold, opts, &config)?;
            let point = evaluator.evaluate(opts.alpha, opts.threshold, protocol)?;
            if let Some(path) = pairs_csv {
                let file = File::create(path)
                    .with_context(|| format!("cannot create {}", path.display()))?;
                evaluator.write_pairs_csv(BufWriter::new(file), opts.alpha, opts.threshold)?;
            }
            match opts.format.unwrap_or(Format::Table) {
                Format::Table => writeln!(
                    out,
                    "detected {}/{} (rate {:.4}) at alpha {} threshold {}",
                    point.detected, point.total, point.rate, point.alpha, opts.threshold
                )?,
                Format::Csv => eval::write_sweep_csv(&mut out, &[point])?,
                Format::Json => write_json(&mut out, &point)?,
            }
        }
        Command::SweepAlpha {
            files,
            gold,
            alphas,
        } => {
            let alphas = alphas.clone().unwrap_or_else(eval::default_alpha_grid);
            let (evaluator, protocol) = evaluator(files, gold, opts, &config)?;
            let points = evaluator.sweep(&alphas, opts.threshold, protocol)?;
            write_sweep(&mut out, &points, opts.format.unwrap_or(Format::Csv))?;
        }
        Command::Sensitivity {
            seed_dir,
            filler_dir,
            sizes,
        } => {
            let (seed1, seed2) = read_seeds(seed_dir)?;
            let fillers = text_files(filler_dir)?
                .iter()
                .map(|path| read_raw(path))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let weighting = opts.weighting.map_or(Weighting::TfIdf, Weighting::from);
            let report = eval::corpus_sensitivity(
                &seed1, &seed2, &fillers, sizes, opts.alpha, weighting, &config,
            )?;
            write_sensitivity(&mut out, &report, opts.format.unwrap_or(Format::Csv))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn sim(
    a: &Path,
    b: &Path,
    alpha: Alpha,
    weighting: Weighting,
    config: &PipelineConfig,
) -> anyhow::Result<SimilarityResult> {
    // Under tf-idf the two documents are the whole corpus.
    let mut corpus = Corpus::new();
    corpus.add_document(&RawDocument::new("a", read_text(a)?), config)?;
    corpus.add_document(&RawDocument::new("b", read_text(b)?), config)?;
    let scheme = corpus.scheme(weighting)?;
    let doc = |id| &corpus.get(id).expect("inserted above").doc;
    Ok(tscs::tscs(doc("a"), doc("b"), alpha, &scheme))
}

fn evaluator(
    files: &[PathBuf],
    gold: &GoldArgs,
    opts: &GlobalOpts,
    config: &PipelineConfig,
) -> anyhow::Result<(ParaphraseEvaluator, Protocol)> {
    let gold_files = (!gold.gold.is_empty()).then_some(gold.gold.as_slice());
    let pairs = eval::load_sts_dataset(files, gold_files)?;
    if pairs.is_empty() {
        bail!("no sentence pairs in the input files");
    }
    let weighting = opts.weighting.map_or(Weighting::Tf, Weighting::from);
    let protocol = gold
        .gold_cutoff
        .map_or(Protocol::AllPositive, Protocol::GoldCutoff);
    Ok((
        ParaphraseEvaluator::new(&pairs, weighting, config)?,
        protocol,
    ))
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_raw(path: &Path) -> anyhow::Result<RawDocument> {
    let id = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(RawDocument::new(id, read_text(path)?))
}

fn read_seeds(dir: &Path) -> anyhow::Result<(SeedPair, SeedPair)> {
    let files = text_files(dir)?;
    let found: BTreeSet<String> = files
        .iter()
        .filter_map(|p| p.file_name())
        .map(|n| n.to_string_lossy().into_owned())
        .collect();
    let expected: BTreeSet<String> = SEED_FILES.iter().map(|s| s.to_string()).collect();
    if found != expected {
        bail!(
            "{} must contain exactly {} (found: {})",
            dir.display(),
            SEED_FILES.join(", "),
            found.into_iter().collect::<Vec<_>>().join(", ")
        );
    }
    let [a1, b1, a2, b2] = SEED_FILES.map(|name| read_raw(&dir.join(name)));
    Ok((SeedPair { a: a1?, b: b1? }, SeedPair { a: a2?, b: b2? }))
}

fn write_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_sim<W: Write>(out: &mut W, r: &SimilarityResult, format: Format) -> anyhow::Result<()> {
    match format {
        Format::Table => {
            writeln!(out, "cosine  {:.4}", r.cosine)?;
            writeln!(out, "tss     {:.4}", r.tss)?;
            writeln!(out, "tscs    {:.4}", r.tscs)?;
            writeln!(out, "lambda  {}", r.lambda)?;
            if r.degenerate {
                writeln!(out, "note    both documents are empty after preprocessing")?;
            }
        }
        Format::Csv => {
            writeln!(out, "cosine,tss,tscs,lambda,spatial_sum,alpha,degenerate")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.cosine,
                r.tss,
                r.tscs,
                r.lambda,
                r.spatial_sum,
                r.alpha.value(),
                r.degenerate
            )?;
        }
        Format::Json => write_json(out, r)?,
    }
    Ok(())
}

fn write_matrix<W: Write>(
    out: &mut W,
    matrix: &SimilarityMatrix,
    format: Format,
) -> anyhow::Result<()> {
    let n = matrix.len();
    match format {
        Format::Csv => matrix.write_csv(out)?,
        Format::Json => {
            let tscs: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| matrix.get(i, j).tscs).collect())
                .collect();
            write_json(out, &json!({ "ids": matrix.ids, "tscs": tscs }))?;
        }
        Format::Table => {
            let width = matrix.ids.iter().map(String::len).max().unwrap_or(0).max(6);
            write!(out, "{:width$}", "")?;
            for id in &matrix.ids {
                write!(out, "  {id:>width$}")?;
            }
            writeln!(out)?;
            for (i, id) in matrix.ids.iter().enumerate() {
                write!(out, "{id:width$}")?;
                for j in 0..n {
                    write!(out, "  {:>width$.4}", matrix.get(i, j).tscs)?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

fn write_sweep<W: Write>(out: &mut W, points: &[SweepPoint], format: Format) -> anyhow::Result<()> {
    match format {
        Format::Csv => eval::write_sweep_csv(out, points)?,
        Format::Json => write_json(out, &points)?,
        Format::Table => {
            writeln!(out, "alpha  detected  total    rate")?;
            for p in points {
                writeln!(
                    out,
                    "{:5.2}  {:8}  {:5}  {:.4}",
                    p.alpha, p.detected, p.total, p.rate
                )?;
            }
        }
    }
    Ok(())
}

fn write_sensitivity<W: Write>(
    out: &mut W,
    report: &SensitivityReport,
    format: Format,
) -> anyhow::Result<()> {
    match format {
        Format::Csv => eval::write_sensitivity_csv(out, report)?,
        Format::Json => {
            let value = json!({
                "tscs": report.tscs,
                "cosine": report.cosine,
                "variation": {
                    "tscs": eval::variation_range(&report.tscs)?,
                    "cosine": eval::variation_range(&report.cosine)?,
                },
            });
            write_json(out, &value)?;
        }
        Format::Table => {
            writeln!(out, " size  tscs_set1  tscs_set2  cos_set1  cos_set2")?;
            for (t, c) in report.tscs.iter().zip(&report.cosine) {
                writeln!(
                    out,
                    "{:5}  {:9.4}  {:9.4}  {:8.4}  {:8.4}",
                    t.corpus_size, t.sim_set1, t.sim_set2, c.sim_set1, c.sim_set2
                )?;
            }
            let t = eval::variation_range(&report.tscs)?;
            let c = eval::variation_range(&report.cosine)?;
            writeln!(
                out,
                "range  {:9.4}  {:9.4}  {:8.4}  {:8.4}",
                t.set1, t.set2, c.set1, c.set2
            )?;
        }
    }
    Ok(())
}
