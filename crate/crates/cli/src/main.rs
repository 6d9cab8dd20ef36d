use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use compseg::report::RunMetadata;
use compseg::{
    bin_to_bars, emit_baseline, emit_profile, emit_tree, parse_play, parse_smf, play_to_sequence, read_counts,
    read_tokens, segment_sequence, shuffle_baseline, split_profile, write_counts, write_tally, write_tokens,
    ChannelFilter, Marker, SegmentNode, SegmentationConfig, WeightMode, WeightedSequence,
};

/// Segments symbolic sequences into compositional domains by maximizing the
/// Jensen-Shannon divergence between adjacent segments.
#[derive(Parser, Debug)]
#[command(name = "compseg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recursively segment a sequence and write the tree as JSON.
    Segment {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        config: ConfigArgs,
        /// Output file (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write one profile CSV per evaluated node into this directory.
        #[arg(long, value_name = "DIR")]
        emit_profiles: Option<PathBuf>,
        /// Report at most this many split levels.
        #[arg(long)]
        levels: Option<usize>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Write the first-level divergence profile with its shuffle baseline as CSV.
    Profile {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the shuffle baseline of the whole sequence as JSON.
    Baseline {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Convert a play script into a tokens file and a markers sidecar.
    IngestPlay {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Markers sidecar path (default: <output>.markers.tsv).
        #[arg(long)]
        markers_output: Option<PathBuf>,
    },
    /// Convert a Standard MIDI File into per-bar pitch-class counts.
    IngestMidi {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Count onsets on channel 10 too.
        #[arg(long)]
        include_percussion: bool,
    },
    /// Write the total count of every symbol as TSV.
    Tally {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tokens,
    Counts,
    Play,
    Midi,
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Format,
    /// Markers sidecar (kind<TAB>label<TAB>position) to carry into the report.
    #[arg(long)]
    markers: Option<PathBuf>,
    /// Added to 1-based bar numbers when labelling boundaries (midi and counts only).
    #[arg(long, allow_hyphen_values = true)]
    bar_offset: Option<i64>,
    /// Count onsets on channel 10 too (midi only).
    #[arg(long)]
    include_percussion: bool,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    #[arg(long, value_enum, default_value = "positions")]
    weight_mode: WeightModeArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Shuffle replicates pooled into each baseline.
    #[arg(long, default_value_t = 10)]
    shuffles: usize,
    #[arg(long, default_value_t = 1.0)]
    threshold_multiplier: f64,
    #[arg(long, default_value_t = 3)]
    min_split_length: usize,
    #[arg(long, default_value_t = 32)]
    max_depth: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WeightModeArg {
    Positions,
    Mass,
}

impl ConfigArgs {
    fn to_config(&self) -> Result<SegmentationConfig, CliError> {
        let config = SegmentationConfig {
            min_split_length: self.min_split_length,
            threshold_multiplier: self.threshold_multiplier,
            shuffle_replicates: self.shuffles,
            seed: self.seed,
            max_depth: self.max_depth,
            weight_mode: match self.weight_mode {
                WeightModeArg::Positions => WeightMode::Positions,
                WeightModeArg::Mass => WeightMode::Mass,
            },
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
}

impl From<compseg::Error> for CliError {
    fn from(e: compseg::Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn with_bar_offset(seq: WeightedSequence, offset: i64) -> Result<WeightedSequence, CliError> {
    let labels = (0..seq.len() as i64).map(|i| i + 1 + offset).collect();
    Ok(seq.with_labels(labels)?)
}

fn load(args: &InputArgs) -> Result<(WeightedSequence, Vec<Marker>), CliError> {
    let musical = matches!(args.format, Format::Midi | Format::Counts);
    if args.bar_offset.is_some() && !musical {
        return Err(CliError::Usage("--bar-offset applies only to midi and counts input".into()));
    }
    if args.include_percussion && args.format != Format::Midi {
        return Err(CliError::Usage("--include-percussion applies only to midi input".into()));
    }
    if args.markers.is_some() && args.format == Format::Play {
        return Err(CliError::Usage("--markers cannot be combined with play input, which has its own".into()));
    }
    let (mut seq, mut markers) = match args.format {
        Format::Tokens => (read_tokens(&read_text(&args.input)?)?, Vec::new()),
        Format::Counts => (read_counts(&read_text(&args.input)?)?, Vec::new()),
        Format::Play => play_to_sequence(&parse_play(&read_text(&args.input)?)?)?,
        Format::Midi => (read_midi(&args.input, args.include_percussion)?, Vec::new()),
    };
    if musical {
        seq = with_bar_offset(seq, args.bar_offset.unwrap_or(0))?;
    }
    if let Some(path) = &args.markers {
        markers = compseg::ingest::play::parse_markers(&read_text(path)?)?;
    }
    if let Some(m) = markers.iter().find(|m| m.position > seq.len()) {
        return Err(CliError::Input(format!("marker {} {} beyond sequence end", m.kind, m.label)));
    }
    Ok((seq, markers))
}

fn read_midi(path: &Path, include_percussion: bool) -> Result<WeightedSequence, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let (events, grid) = parse_smf(&bytes)?;
    let filter = if include_percussion { ChannelFilter::All } else { ChannelFilter::Pitched };
    Ok(bin_to_bars(&events, &grid, &filter)?)
}

fn emit_node_profiles(seq: &WeightedSequence, root: &SegmentNode, config: &SegmentationConfig, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let mut nodes = Vec::new();
    root.walk(0, &mut |node, _| {
        if let Some(b) = node.baseline {
            nodes.push((node.span, b));
        }
    });
    for (span, baseline) in nodes {
        let profile = split_profile(seq, span, config.weight_mode)?;
        let path = dir.join(format!("node_{}_{}.csv", span.start, span.end));
        write_file(&path, &emit_profile(&profile, &baseline))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Segment { input, config, output, emit_profiles, levels, threads } => {
            let config = config.to_config()?;
            let (seq, markers) = load(&input)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
            let root = pool.install(|| segment_sequence(&seq, &config))?;
            let root = match levels {
                Some(l) => root.truncated(l),
                None => root,
            };
            let meta = RunMetadata::new(&config, &seq);
            write_output(output.as_deref(), &emit_tree(&root, &meta, &markers))?;
            if let Some(dir) = emit_profiles {
                emit_node_profiles(&seq, &root, &config, &dir)?;
            }
        }
        Command::Profile { input, config, output } => {
            let config = config.to_config()?;
            let (seq, _) = load(&input)?;
            let span = seq.full_span();
            let profile = split_profile(&seq, span, config.weight_mode)?;
            let baseline = shuffle_baseline(&seq, span, &config)?;
            write_output(output.as_deref(), &emit_profile(&profile, &baseline))?;
        }
        Command::Baseline { input, config, output } => {
            let config = config.to_config()?;
            let (seq, _) = load(&input)?;
            let baseline = shuffle_baseline(&seq, seq.full_span(), &config)?;
            write_output(output.as_deref(), &emit_baseline(&baseline, seq.full_span()))?;
        }
        Command::IngestPlay { input, output, markers_output } => {
            let script = parse_play(&read_text(&input)?)?;
            write_file(&output, &write_tokens(&script.speakers()))?;
            let sidecar = markers_output.unwrap_or_else(|| {
                let mut p = output.clone().into_os_string();
                p.push(".markers.tsv");
                p.into()
            });
            write_file(&sidecar, &compseg::ingest::play::write_markers(&script.markers))?;
        }
        Command::IngestMidi { input, output, include_percussion } => {
            let seq = read_midi(&input, include_percussion)?;
            write_file(&output, &write_counts(&seq))?;
        }
        Command::Tally { input, output } => {
            let (seq, _) = load(&input)?;
            let totals = seq.tally(seq.full_span())?;
            write_output(output.as_deref(), &write_tally(seq.alphabet(), &totals))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("compseg: error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("compseg: usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
