use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hybsel::bench::{
    self, BackendKind, BenchConfig, BenchRecord, StructureKind, SyntheticKind, SyntheticSpec, TextSource,
};
use hybsel::wavelet::Shape;

/// Build and benchmark hybrid-bitvector text structures.
#[derive(Parser, Debug)]
#[command(name = "hybsel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a structure and write it to a file.
    Build {
        #[command(flatten)]
        opts: StructureOpts,
        #[arg(long, value_enum, default_value_t = StructureArg::Plcp)]
        structure: StructureArg,
        #[arg(long)]
        output: PathBuf,
    },
    /// Time PLCP queries on the PLCP bitvector.
    BenchPlcp {
        #[command(flatten)]
        opts: StructureOpts,
        #[arg(long, default_value_t = bench::DEFAULT_QUERIES)]
        queries: usize,
    },
    /// Time select queries on a wavelet tree over the BWT.
    BenchBwtSelect {
        #[command(flatten)]
        opts: StructureOpts,
        #[arg(long, default_value_t = bench::DEFAULT_QUERIES)]
        queries: usize,
    },
    /// Write a synthetic text.
    GenText {
        #[command(flatten)]
        synth: SynthOpts,
        #[arg(long, value_enum)]
        synthetic: SyntheticArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args, Debug)]
struct StructureOpts {
    /// Input text file (must not contain 0x00 bytes).
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    input: Option<PathBuf>,
    /// Generate the input instead of reading a file.
    #[arg(long, value_enum)]
    synthetic: Option<SyntheticArg>,
    #[command(flatten)]
    synth: SynthOpts,
    #[arg(long, value_enum, default_value_t = BackendArg::Hyb)]
    backend: BackendArg,
    /// Blocks per superblock of the hybrid backend.
    #[arg(
        long,
        default_value_t = 16,
        value_parser = PossibleValuesParser::new(["8", "16", "32", "64"]).map(|s| s.parse::<usize>().unwrap())
    )]
    bs: usize,
    #[arg(long, value_enum, default_value_t = ShapeArg::Huff)]
    shape: ShapeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append the CSV record here instead of printing it.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Inputs longer than this many bytes are truncated.
    #[arg(long, default_value_t = bench::MAX_INPUT_BYTES)]
    max_input: usize,
}

#[derive(Args, Debug)]
struct SynthOpts {
    /// Synthetic text length in bytes.
    #[arg(long, default_value_t = 1 << 20)]
    size: usize,
    #[arg(long, default_value_t = 0.01)]
    mutation_rate: f64,
    /// Number of distinct symbols in synthetic text.
    #[arg(long, default_value_t = bench::DEFAULT_ALPHABET_SIZE)]
    alphabet: u8,
    /// Length of the repeated segment of repetitive text.
    #[arg(long, default_value_t = bench::DEFAULT_BASE_SEGMENT)]
    base_segment: usize,
}

impl SynthOpts {
    fn spec(&self, kind: SyntheticArg, seed: u64) -> SyntheticSpec {
        SyntheticSpec::new(kind.into(), self.size, seed)
            .with_mutation_rate(self.mutation_rate)
            .with_alphabet_size(self.alphabet)
            .with_base_segment(self.base_segment)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SyntheticArg {
    Random,
    Repetitive,
}

impl From<SyntheticArg> for SyntheticKind {
    fn from(k: SyntheticArg) -> Self {
        match k {
            SyntheticArg::Random => SyntheticKind::Random,
            SyntheticArg::Repetitive => SyntheticKind::Repetitive,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Hyb,
    Plain,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ShapeArg {
    Huff,
    Blcd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StructureArg {
    Plcp,
    BwtSelect,
}

impl StructureOpts {
    fn config(&self, structure: StructureKind, queries: usize) -> BenchConfig {
        let source = match (&self.input, self.synthetic) {
            (Some(path), _) => TextSource::File(path.clone()),
            (None, Some(kind)) => TextSource::Synthetic(self.synth.spec(kind, self.seed)),
            (None, None) => unreachable!("clap requires --input or --synthetic"),
        };
        let mut cfg = BenchConfig::new(source, structure);
        cfg.backend = match self.backend {
            BackendArg::Hyb => BackendKind::Hyb,
            BackendArg::Plain => BackendKind::Plain,
        };
        cfg.superblock_blocks = self.bs;
        cfg.shape = match self.shape {
            ShapeArg::Huff => Shape::Huffman,
            ShapeArg::Blcd => Shape::Balanced,
        };
        cfg.queries = queries;
        cfg.seed = self.seed;
        cfg.output = self.csv.clone();
        cfg.max_input_bytes = self.max_input;
        cfg
    }
}

fn emit(cfg: &BenchConfig, record: BenchRecord) -> Result<()> {
    match &cfg.output {
        Some(path) => bench::append_csv(path, &[record]).with_context(|| format!("writing {}", path.display())),
        None => Ok(bench::write_csv(std::io::stdout().lock(), &[record], true)?),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build {
            opts,
            structure,
            output,
        } => {
            let kind = match structure {
                StructureArg::Plcp => StructureKind::Plcp,
                StructureArg::BwtSelect => StructureKind::BwtSelect,
            };
            let cfg = opts.config(kind, 1);
            let prep = bench::prepare(&cfg)?;
            let (container, record) = bench::build_structure(&cfg, &prep)?;
            std::fs::write(&output, container.to_bytes()).with_context(|| format!("writing {}", output.display()))?;
            log::info!("wrote {} bytes to {}", record.size_bytes, output.display());
            emit(&cfg, record)
        }
        Command::BenchPlcp { opts, queries } => {
            let cfg = opts.config(StructureKind::Plcp, queries);
            let record = bench::bench_plcp(&cfg)?;
            emit(&cfg, record)
        }
        Command::BenchBwtSelect { opts, queries } => {
            let cfg = opts.config(StructureKind::BwtSelect, queries);
            let record = bench::bench_bwt_select(&cfg)?;
            emit(&cfg, record)
        }
        Command::GenText {
            synth,
            synthetic,
            seed,
            output,
        } => {
            let bytes = bench::gen_synthetic_text(&synth.spec(synthetic, seed))?;
            std::fs::write(&output, bytes).with_context(|| format!("writing {}", output.display()))?;
            Ok(())
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
