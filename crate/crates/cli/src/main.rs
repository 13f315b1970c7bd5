//! `subcorpus`: mine a Japanese–English parallel corpus from two directories
//! of subtitle files, stage by stage or in one run.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use subcorpus::filter::build_corpus;
use subcorpus::ingest::{read_documents_file, write_documents_file};
use subcorpus::pipeline::checkpoint::{read_json, read_matches, read_pairs, write_json, write_matches, write_pairs};
use subcorpus::pipeline::{
    audit, capalign_stage, docalign_stage, load_alignment_resources, load_resources, prepare_directory, run_pipeline, stats_report, CorpusStats,
    FilterRecord, PipelineConfig, RunOptions, StageStats,
};
use subcorpus::synthbench::{bench_table, write_fixture, Bench, BenchConfig, CorruptionSpec, FixtureSpec};
use subcorpus::{CaptionMatchF64, Error, Language};

#[derive(Parser)]
#[command(name = "subcorpus", version, about = "Mine sentence-aligned bilingual corpora from subtitle files")]
struct Cli {
    /// Pipeline configuration (TOML). Flags override its values.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for the split shuffle.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Repeat for more log output.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lang {
    En,
    Ja,
}

impl From<Lang> for Language {
    fn from(l: Lang) -> Self {
        match l {
            Lang::En => Language::En,
            Lang::Ja => Language::Ja,
        }
    }
}

/// Flags that mirror the stage settings of [`PipelineConfig`].
#[derive(Args, Default)]
struct StageFlags {
    #[arg(long)]
    en_dir: Option<PathBuf>,
    #[arg(long)]
    ja_dir: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    no_spellcheck: bool,
    #[arg(long)]
    max_cost: Option<u32>,
    #[arg(long)]
    title_threshold: Option<f64>,
    #[arg(long)]
    hamming_threshold: Option<f64>,
    #[arg(long)]
    shift_range: Option<u32>,
    /// Caption search half-width in seconds.
    #[arg(long)]
    window: Option<f64>,
    #[arg(long)]
    percentile_z: Option<f64>,
    /// Cut at the sorted empirical quantile.
    #[arg(long)]
    empirical: bool,
    #[arg(long)]
    val_size: Option<usize>,
    #[arg(long)]
    test_size: Option<usize>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    dictionary: Option<PathBuf>,
    #[arg(long)]
    misspellings: Option<PathBuf>,
    #[arg(long)]
    unigrams: Option<PathBuf>,
    #[arg(long)]
    bigrams: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Load, normalize and (for English) spell-correct one directory into a
    /// document file.
    Ingest {
        #[arg(long, value_enum)]
        lang: Lang,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        flags: StageFlags,
    },
    /// Pair English and Japanese documents by title and timing.
    AlignDocs {
        #[arg(long)]
        en: PathBuf,
        #[arg(long)]
        ja: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        flags: StageFlags,
    },
    /// Pair captions inside each document pair.
    AlignCaptions {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        en: PathBuf,
        #[arg(long)]
        ja: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        flags: StageFlags,
    },
    /// Apply the similarity cutoff, dedup and language filter, and write splits.
    Filter {
        #[arg(long)]
        matches: PathBuf,
        #[command(flatten)]
        flags: StageFlags,
    },
    /// Run every stage with checkpoints.
    Run {
        /// Reuse checkpoints from an earlier run with the same configuration.
        #[arg(long)]
        resume: bool,
        #[command(flatten)]
        flags: StageFlags,
    },
    /// Print the statistics report of a finished run.
    Stats { output_dir: PathBuf },
    /// Recheck every threshold over the checkpoints and corpus of a run.
    Audit { output_dir: PathBuf },
    /// Score caption alignment on synthetic pairs under corruption.
    Bench(BenchArgs),
    /// Write a small synthetic corpus with resources and a configuration.
    EmitFixture {
        dir: PathBuf,
        #[arg(long, default_value_t = 3)]
        episodes: usize,
        #[arg(long, default_value_t = 20)]
        planted: usize,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 0.0)]
    time_shift: f64,
    #[arg(long, default_value_t = 1.0)]
    rate_factor: f64,
    #[arg(long, default_value_t = 0.0)]
    drop_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    ocr_noise: f64,
    #[arg(long, default_value_t = 0.0)]
    misspell_rate: f64,
    /// Use the moderate preset instead of the individual rates.
    #[arg(long)]
    moderate: bool,
    /// Seeds 0..n, one row each, plus a mean row.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long, default_value_t = 50)]
    captions: usize,
    #[arg(long, default_value_t = 12.5)]
    window: f64,
    #[arg(long)]
    no_spellcheck: bool,
}

fn base_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut config = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(w) = cli.workers {
        config.workers = w;
    }
    if cli.seed.is_some() {
        config.seed = cli.seed;
    }
    Ok(config)
}

fn apply(config: &mut PipelineConfig, f: &StageFlags) {
    fn set<T: Clone>(dst: &mut T, src: &Option<T>) {
        if let Some(v) = src {
            *dst = v.clone();
        }
    }
    fn set_opt<T: Clone>(dst: &mut Option<T>, src: &Option<T>) {
        if src.is_some() {
            *dst = src.clone();
        }
    }
    set(&mut config.en_dir, &f.en_dir);
    set(&mut config.ja_dir, &f.ja_dir);
    set(&mut config.output_dir, &f.output_dir);
    if f.no_spellcheck {
        config.spellcheck.enabled = false;
    }
    set(&mut config.spellcheck.max_cost, &f.max_cost);
    set(&mut config.docalign.title_threshold, &f.title_threshold);
    set(&mut config.docalign.hamming_threshold, &f.hamming_threshold);
    set(&mut config.docalign.shift_range_s, &f.shift_range);
    set(&mut config.capalign.window_s, &f.window);
    set(&mut config.filter.percentile_z, &f.percentile_z);
    if f.empirical {
        config.filter.empirical = true;
    }
    set(&mut config.filter.val_size, &f.val_size);
    set(&mut config.filter.test_size, &f.test_size);
    let r = &mut config.resources;
    set_opt(&mut r.lexicon, &f.lexicon);
    set_opt(&mut r.embeddings, &f.embeddings);
    set_opt(&mut r.dictionary, &f.dictionary);
    set_opt(&mut r.misspellings, &f.misspellings);
    set_opt(&mut r.unigrams, &f.unigrams);
    set_opt(&mut r.bigrams, &f.bigrams);
}

fn configured(cli: &Cli, flags: &StageFlags) -> Result<PipelineConfig> {
    let mut config = base_config(cli)?;
    apply(&mut config, flags);
    config.validate(false)?;
    Ok(config)
}

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if workers == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().context("starting worker pool")?;
    pool.install(f)
}

fn output_dir(config: &PipelineConfig) -> Result<&Path> {
    if config.output_dir.as_os_str().is_empty() {
        anyhow::bail!(Error::Config("output_dir is not set; pass --output-dir or set it in the config".into()));
    }
    Ok(&config.output_dir)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Ingest { lang, input, output, flags } => {
            let config = configured(cli, flags)?;
            let language = Language::from(*lang);
            let spell = match language {
                Language::En if config.spellcheck.enabled => load_resources(&config)?.spell,
                _ => None,
            };
            let (docs, stats) = with_workers(config.workers, || {
                Ok(prepare_directory(input, language, &config.normalize, spell.as_ref())?)
            })?;
            write_documents_file(output, &docs).with_context(|| format!("writing {}", output.display()))?;
            let (ingest, norm) = match language {
                Language::En => (&stats.ingest_en, &stats.normalize_en),
                Language::Ja => (&stats.ingest_ja, &stats.normalize_ja),
            };
            println!(
                "files {}\trejected {}\tdocuments {}\tcaptions {}\tcorrections {}",
                ingest.files_seen, ingest.rejected, norm.documents_out, norm.captions_out, stats.spellcheck.corrections
            );
        }
        Command::AlignDocs { en, ja, output, flags } => {
            let config = configured(cli, flags)?;
            let en = read_documents_file(en).map_err(Error::from)?;
            let ja = read_documents_file(ja).map_err(Error::from)?;
            let (pairs, counts) = with_workers(config.workers, || Ok(docalign_stage(&en, &ja, &config.docalign)))?;
            write_pairs(output, &pairs)?;
            println!("title candidates {}\tpairs {}", counts.title_candidates, counts.pairs);
        }
        Command::AlignCaptions { pairs, en, ja, output, flags } => {
            let config = configured(cli, flags)?;
            let pairs = read_pairs(pairs)?;
            let en = read_documents_file(en).map_err(Error::from)?;
            let ja = read_documents_file(ja).map_err(Error::from)?;
            let align = load_alignment_resources(&config)?;
            let (matches, counts) = with_workers(config.workers, || {
                Ok(capalign_stage(&pairs, &en, &ja, &config.capalign, &align)?)
            })?;
            write_matches(output, &matches)?;
            println!("document pairs {}\tja captions {}\tmatches {}", counts.pairs, counts.ja_captions, counts.matches);
        }
        Command::Filter { matches, flags } => {
            let config = configured(cli, flags)?;
            let out = output_dir(&config)?;
            let matches: Vec<CaptionMatchF64> = read_matches(matches)?;
            let filter = config.effective_filter();
            let (corpus, counts) = build_corpus(&matches, &filter)?;
            corpus.write(out)?;
            let record = FilterRecord { threshold: corpus.threshold, config: filter, counts };
            write_json(&out.join("filter.json"), &record)?;
            let stats = StageStats { filter: counts, corpus: CorpusStats::from_corpus(&corpus), ..Default::default() };
            write_json(&out.join("stats.json"), &stats)?;
            print!("{}", stats_report(&stats));
        }
        Command::Run { resume, flags } => {
            let config = configured(cli, flags)?;
            output_dir(&config)?;
            let out = run_pipeline(&config, &RunOptions { resume: *resume })?;
            print!("{}", stats_report(&out.stats));
        }
        Command::Stats { output_dir } => {
            let stats: StageStats = read_json(&output_dir.join("stats.json"))?;
            print!("{}", stats_report(&stats));
        }
        Command::Audit { output_dir } => {
            let report = audit(output_dir)?;
            println!(
                "document pairs {}\tmatches {}\tcorpus pairs {}\tthreshold {:.6}",
                report.document_pairs, report.matches, report.corpus_pairs, report.threshold
            );
            for v in &report.violations {
                println!("violation: {v}");
            }
            if !report.passed() {
                anyhow::bail!(Error::AuditFailed(report.violations.len()));
            }
            println!("audit passed");
        }
        Command::Bench(args) => bench(cli, args)?,
        Command::EmitFixture { dir, episodes, planted } => {
            let spec = FixtureSpec { episodes: *episodes, planted: *planted, ja_distractors: 2 * planted, ..Default::default() };
            let manifest = write_fixture(dir, &spec)?;
            println!("wrote {} planted pairs; run with --config {}", manifest.planted.len(), dir.join("config.toml").display());
        }
    }
    Ok(())
}

fn bench(cli: &Cli, a: &BenchArgs) -> Result<()> {
    let template = if a.moderate {
        CorruptionSpec::moderate(0)
    } else {
        CorruptionSpec {
            time_shift_s: a.time_shift,
            rate_factor: a.rate_factor,
            drop_rate: a.drop_rate,
            ocr_noise_rate: a.ocr_noise,
            misspell_rate: a.misspell_rate,
            seed: 0,
        }
    };
    template.validate().map_err(Error::from)?;
    let mut config = BenchConfig { n_captions: a.captions, spellcheck: !a.no_spellcheck, ..Default::default() };
    config.capalign.window_s = a.window;
    let bench = Bench::new();
    let rows = with_workers(cli.workers.unwrap_or(0), || {
        use rayon::prelude::*;
        (0..a.seeds)
            .into_par_iter()
            .map(|seed| {
                let spec = CorruptionSpec { seed, ..template };
                Ok((spec, bench.run_trial(&spec, &config)?.score))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    print!("{}", bench_table(&rows));
    let n = rows.len().max(1) as f64;
    let mean = |f: fn(&subcorpus::synthbench::AlignmentScore) -> f64| rows.iter().map(|(_, s)| f(s)).sum::<f64>() / n;
    println!(
        "mean\t\t\t\t\t\t{:.4}\t{:.4}\t{:.4}",
        mean(|s| s.precision),
        mean(|s| s.recall),
        mean(|s| s.f1)
    );
    Ok(())
}

/// Exit codes by error class.
fn exit_code(err: &anyhow::Error) -> u8 {
    let Some(e) = err.chain().find_map(|c| c.downcast_ref::<Error>()) else {
        return 1;
    };
    match e {
        Error::Config(_) => 2,
        Error::Ingest(_) | Error::Normalize(_) => 3,
        Error::Resource(_) | Error::Model(_) => 4,
        Error::Io { .. } | Error::Checkpoint { .. } => 5,
        Error::Filter(_) => 6,
        Error::AuditFailed(_) => 7,
    }
}

/// The error chain joined by `: `, skipping causes a message already quotes.
fn describe(err: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in err.chain() {
        let msg = cause.to_string();
        if !out.ends_with(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
