//! `phraselm` command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bleu::bleu;
use crate::corpus::{load_corpus, tokenize, Sentence};
use crate::error::{Error, Result};
use crate::model::{ModelConfig, PriorMode, ScoreOptions, Scorer, TrainedModel};
use crate::rerank::{load_nbest, rerank};
use crate::segment::{aggregate, Mode};

#[derive(Debug, Parser)]
#[command(name = "phraselm", version, about = "Phrase-based n-gram language models with hidden segmentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count phrase and word n-grams into a model directory.
    ///
    /// Corpus grammar: one sentence per line, tokens separated by whitespace.
    Train(TrainArgs),
    /// Per-sentence and corpus perplexity.
    ///
    /// Output grammar: index TAB log10_prob TAB ppl TAB units TAB text, then one `#` summary line.
    Ppl(PplArgs),
    /// Perplexity grid over orders with columns Base, Sum, Sum+S., Max, Max+S.
    Table(TableArgs),
    /// Pick one hypothesis per source from an n-best list by perplexity.
    ///
    /// Input grammar: source_id ||| hypothesis ||| optional_score. Output: source_id TAB ppl TAB hypothesis.
    Rerank(RerankArgs),
    /// Corpus BLEU-4 of hypotheses against one reference per line.
    Bleu(BleuArgs),
    /// Sentence, word and vocabulary counts of a corpus.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Base,
    Word,
    Sum,
    Max,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Base | ModeArg::Word => Mode::Base,
            ModeArg::Sum => Mode::Sum,
            ModeArg::Max => Mode::Max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PriorArg {
    Exact,
    #[value(name = "half-per-word")]
    HalfPerWord,
    None,
}

impl From<PriorArg> for PriorMode {
    fn from(p: PriorArg) -> Self {
        match p {
            PriorArg::Exact => PriorMode::Exact,
            PriorArg::HalfPerWord => PriorMode::HalfPerWord,
            PriorArg::None => PriorMode::None,
        }
    }
}

#[derive(Debug, Args)]
struct Threads {
    /// Worker threads; output does not depend on this.
    #[arg(long, env = "PHRASELM_THREADS", default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Model directory to create.
    #[arg(long)]
    out: PathBuf,
    /// Phrase-level n-gram order.
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Longest phrase in words; unbounded when absent.
    #[arg(long)]
    max_phrase_len: Option<usize>,
    /// Drop training sentences longer than this; 0 keeps all.
    #[arg(long, default_value_t = 15)]
    max_train_len: usize,
    /// Order of the word n-gram baseline table.
    #[arg(long, default_value_t = 4)]
    word_order: usize,
    /// Interpolation weight of the phrase estimate.
    #[arg(long, default_value_t = 0.4)]
    lambda: f64,
    /// Good-Turing adjusts counts below this value.
    #[arg(long, default_value_t = 5)]
    gt_max_r: u64,
    #[arg(long, value_enum, default_value = "exact")]
    prior: PriorArg,
    /// Wrap sentences in <s> ... </s>.
    #[arg(long)]
    bos_eos: bool,
    /// Fail when a table would hold more distinct keys than this.
    #[arg(long)]
    max_keys: Option<usize>,
    #[command(flatten)]
    threads: Threads,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long)]
    model: PathBuf,
    /// Override the model's interpolation weight.
    #[arg(long)]
    lambda: Option<f64>,
    /// Override the model's segmentation prior.
    #[arg(long, value_enum)]
    prior: Option<PriorArg>,
    /// Longest sentence the Max model searches exactly.
    #[arg(long, default_value_t = ScoreOptions::DEFAULT_MAX_EXACT_LEN)]
    max_exact_len: usize,
    /// Leave zero-probability sentences out of corpus perplexity instead of failing.
    #[arg(long)]
    skip_oov_sentences: bool,
    #[command(flatten)]
    threads: Threads,
}

#[derive(Debug, Args)]
struct PplArgs {
    #[command(flatten)]
    score: ScoreArgs,
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "sum")]
    mode: ModeArg,
    /// Scoring order; defaults to the model's phrase order.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value = "on")]
    smoothing: Switch,
    /// Drop test sentences longer than this; 0 keeps all.
    #[arg(long, default_value_t = 10)]
    max_test_len: usize,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    score: ScoreArgs,
    #[arg(long)]
    corpus: PathBuf,
    /// Comma-separated orders, one row each; defaults to 1..=model order.
    #[arg(long, value_delimiter = ',')]
    orders: Vec<usize>,
    /// Smooth the Base column as well.
    #[arg(long)]
    smooth_base: bool,
    #[arg(long, default_value_t = 10)]
    max_test_len: usize,
}

#[derive(Debug, Args)]
struct RerankArgs {
    #[command(flatten)]
    score: ScoreArgs,
    #[arg(long)]
    nbest: PathBuf,
    #[arg(long, value_enum, default_value = "sum")]
    mode: ModeArg,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value = "on")]
    smoothing: Switch,
    /// Keep each source's first candidate (decoder 1-best).
    #[arg(long)]
    passthrough_first: bool,
}

#[derive(Debug, Args)]
struct BleuArgs {
    /// Hypotheses, one per line. Tab-separated lines use their last field.
    #[arg(long)]
    hyp: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Drop sentences longer than this; 0 keeps all.
    #[arg(long, default_value_t = 0)]
    max_len: usize,
}

fn length_limit(n: usize) -> Option<usize> {
    (n > 0).then_some(n)
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    if threads == 0 {
        return Err(Error::Config("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))
}

/// Runs the tool on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            return 1;
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    let result = match cli.command {
        Command::Train(a) => train(a, out, err),
        Command::Ppl(a) => ppl(a, out, err),
        Command::Table(a) => table(a, out, err),
        Command::Rerank(a) => rerank_cmd(a, out, err),
        Command::Bleu(a) => bleu_cmd(a, out),
        Command::Stats(a) => stats(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_out(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn train(a: TrainArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let config = ModelConfig {
        order: a.order,
        max_phrase_len: a.max_phrase_len,
        word_order: a.word_order,
        lambda: a.lambda,
        gt_max_r: a.gt_max_r,
        prior: a.prior.into(),
        bos_eos: a.bos_eos,
    };
    config.validate()?;
    let max_len = length_limit(a.max_train_len);
    writeln!(
        err,
        "# train corpus={} out={} order={} max_phrase_len={} max_train_len={} word_order={} lambda={} gt_max_r={} prior={} bos_eos={} max_keys={} threads={}",
        a.corpus.display(),
        a.out.display(),
        config.order,
        config.max_phrase_len.map_or("none".into(), |l| l.to_string()),
        max_len.map_or("none".into(), |l| l.to_string()),
        config.word_order,
        config.lambda,
        config.gt_max_r,
        config.prior,
        config.bos_eos,
        a.max_keys.map_or("none".into(), |k| k.to_string()),
        a.threads.threads,
    )
    .map_err(io_out)?;
    let started = Instant::now();
    let corpus = load_corpus(&a.corpus, max_len)?;
    let model = pool(a.threads.threads)?
        .install(|| TrainedModel::train_with_budget(&corpus, config, a.threads.threads, a.max_keys))?;
    model.save(&a.out)?;
    writeln!(
        out,
        "{}\tfiltered={}\tblank={}\tphrase_keys={}\tword_keys={}",
        corpus.stats(),
        corpus.filtered(),
        corpus.blank_lines(),
        model.phrase_counts().len(),
        model.word_counts().len()
    )
    .map_err(io_out)?;
    writeln!(
        err,
        "# elapsed_s={:.2} peak_rss_kib={}",
        started.elapsed().as_secs_f64(),
        peak_rss_kib().map_or("unknown".into(), |k| k.to_string())
    )
    .map_err(io_out)?;
    Ok(0)
}

/// High-water resident set size of this process, where /proc provides it.
pub fn peak_rss_kib() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn load_test(path: &Path, max_len: usize) -> Result<Vec<Sentence>> {
    Ok(load_corpus(path, length_limit(max_len))?.sentences().to_vec())
}

fn options(model: &TrainedModel, s: &ScoreArgs, order: Option<usize>, smoothing: bool) -> ScoreOptions {
    let d = model.default_options();
    ScoreOptions {
        order: order.unwrap_or(d.order),
        smoothing,
        lambda: s.lambda.unwrap_or(d.lambda),
        prior: s.prior.map_or(d.prior, Into::into),
        max_exact_len: s.max_exact_len,
    }
}

fn describe(o: &ScoreOptions) -> String {
    format!(
        "order={} smoothing={} lambda={} prior={} max_exact_len={}",
        o.order,
        if o.smoothing { "on" } else { "off" },
        o.lambda,
        o.prior,
        o.max_exact_len
    )
}

fn ppl(a: PplArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let model = TrainedModel::load(&a.score.model)?;
    let opts = options(&model, &a.score, a.order, a.smoothing.on());
    let mode = Mode::from(a.mode);
    writeln!(
        err,
        "# ppl model={} corpus={} mode={mode} {} max_test_len={} skip_oov_sentences={} threads={}",
        a.score.model.display(),
        a.corpus.display(),
        describe(&opts),
        a.max_test_len,
        a.score.skip_oov_sentences,
        a.score.threads.threads
    )
    .map_err(io_out)?;
    let sentences = load_test(&a.corpus, a.max_test_len)?;
    let scorer = model.scorer(opts)?;
    let results = pool(a.score.threads.threads)?.install(|| scorer.score_all(&sentences, mode));
    for (i, (s, r)) in sentences.iter().zip(&results).enumerate() {
        let line = match r {
            Ok(sc) => {
                let text = match &sc.segmentation {
                    Some(seg) => seg.render(display_tokens(&scorer, s).tokens()),
                    None => s.to_string(),
                };
                format!(
                    "{i}\t{}\t{}\t{}\t{text}",
                    sc.log_prob / std::f64::consts::LN_10,
                    sc.ppl,
                    sc.units
                )
            }
            Err(Error::ZeroProbability { .. }) => format!("{i}\t-inf\tinf\t0\t{s}"),
            Err(_) => continue,
        };
        writeln!(out, "{line}").map_err(io_out)?;
    }
    let total = sentences.len();
    let report = aggregate(results, a.score.skip_oov_sentences)?;
    writeln!(
        out,
        "# mode={mode} order={} smoothing={} sentences={total} scored={} skipped={} units={} log10_prob={} ppl={}",
        opts.order,
        if opts.smoothing { "on" } else { "off" },
        report.scored,
        report.skipped.len(),
        report.units,
        report.log_prob / std::f64::consts::LN_10,
        report.ppl
    )
    .map_err(io_out)?;
    Ok(0)
}

fn display_tokens(scorer: &Scorer<'_>, s: &Sentence) -> Sentence {
    if scorer.model().config().bos_eos {
        s.with_markers()
    } else {
        s.clone()
    }
}

/// Column headers of the perplexity grid.
pub const TABLE_COLUMNS: [&str; 5] = ["Base", "Sum", "Sum+S.", "Max", "Max+S."];

fn table(a: TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let model = TrainedModel::load(&a.score.model)?;
    let orders = if a.orders.is_empty() {
        (1..=model.config().order).collect()
    } else {
        a.orders.clone()
    };
    let base_opts = options(&model, &a.score, None, false);
    writeln!(
        err,
        "# table model={} corpus={} orders={orders:?} smooth_base={} lambda={} prior={} max_exact_len={} max_test_len={} skip_oov_sentences={} threads={}",
        a.score.model.display(),
        a.corpus.display(),
        a.smooth_base,
        base_opts.lambda,
        base_opts.prior,
        base_opts.max_exact_len,
        a.max_test_len,
        a.score.skip_oov_sentences,
        a.score.threads.threads
    )
    .map_err(io_out)?;
    let sentences = load_test(&a.corpus, a.max_test_len)?;
    let pool = pool(a.score.threads.threads)?;
    let cells = [
        (Mode::Base, a.smooth_base),
        (Mode::Sum, false),
        (Mode::Sum, true),
        (Mode::Max, false),
        (Mode::Max, true),
    ];
    writeln!(out, "n\t{}", TABLE_COLUMNS.join("\t")).map_err(io_out)?;
    let mut notes = Vec::new();
    let mut failed = None;
    for &n in &orders {
        let mut row = vec![n.to_string()];
        for (col, &(mode, smoothing)) in cells.iter().enumerate() {
            let scorer = model.scorer(options(&model, &a.score, Some(n), smoothing))?;
            let results = pool.install(|| scorer.score_all(&sentences, mode));
            match aggregate(results, a.score.skip_oov_sentences) {
                Ok(r) => {
                    row.push(format!("{:.1}", r.ppl));
                    if !r.skipped.is_empty() {
                        notes.push(format!(
                            "# n={n} {}: skipped {} of {} sentences",
                            TABLE_COLUMNS[col],
                            r.skipped.len(),
                            sentences.len()
                        ));
                    }
                }
                Err(e @ Error::Unscorable { .. }) => {
                    row.push("n/a".into());
                    notes.push(format!("# n={n} {}: {e}", TABLE_COLUMNS[col]));
                    failed.get_or_insert(e.exit_code());
                }
                Err(e) => return Err(e),
            }
        }
        writeln!(out, "{}", row.join("\t")).map_err(io_out)?;
    }
    for note in notes {
        writeln!(out, "{note}").map_err(io_out)?;
    }
    Ok(failed.unwrap_or(0))
}

fn rerank_cmd(a: RerankArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let model = TrainedModel::load(&a.score.model)?;
    let opts = options(&model, &a.score, a.order, a.smoothing.on());
    let mode = Mode::from(a.mode);
    writeln!(
        err,
        "# rerank model={} nbest={} mode={mode} {} passthrough_first={} threads={}",
        a.score.model.display(),
        a.nbest.display(),
        describe(&opts),
        a.passthrough_first,
        a.score.threads.threads
    )
    .map_err(io_out)?;
    let list = load_nbest(&a.nbest)?;
    let scorer = model.scorer(opts)?;
    let (selections, warnings) =
        pool(a.score.threads.threads)?.install(|| rerank(&scorer, &list.groups, mode, a.passthrough_first))?;
    for w in list.warnings.iter().chain(&warnings) {
        writeln!(err, "warning: {w}").map_err(io_out)?;
    }
    for s in selections {
        writeln!(out, "{s}").map_err(io_out)?;
    }
    Ok(0)
}

fn read_sentences(path: &Path, last_field: bool) -> Result<Vec<Sentence>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let line = if last_field {
                line.rsplit('\t').next().unwrap_or("")
            } else {
                line
            };
            tokenize(line).map_err(|_| Error::format(path, i + 1, "empty sentence"))
        })
        .collect()
}

fn bleu_cmd(a: BleuArgs, out: &mut dyn Write) -> Result<i32> {
    let hyps = read_sentences(&a.hyp, true)?;
    let refs = read_sentences(&a.reference, false)?;
    let report = bleu(&hyps, &refs)?;
    writeln!(out, "{report}").map_err(io_out)?;
    Ok(0)
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> Result<i32> {
    let corpus = load_corpus(&a.corpus, length_limit(a.max_len))?;
    writeln!(
        out,
        "{}\tfiltered={}\tblank={}",
        corpus.stats(),
        corpus.filtered(),
        corpus.blank_lines()
    )
    .map_err(io_out)?;
    Ok(0)
}
