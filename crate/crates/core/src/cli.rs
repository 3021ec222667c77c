//! Command-line front end. [`run`] is the whole program minus process
//! plumbing so that tests can drive it in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bits::{BitVector, LlrVector};
use crate::code::{build_code, encode, insert_info_bits, CodeSpec};
use crate::construction::construction_by_name;
use crate::decoder::DecoderSpec;
use crate::error::PolarError;
use crate::latency::{default_cost_model, latency_report, CostModel};
use crate::llr::LlrRule;
use crate::schedule::{build_schedule, schedule_stats, MergerConfig};
use crate::sim::{parse_snr_range, run_sweep, SimConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "polar", version, about = "Polar code construction, decoding schedules, latency and simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the code specification as JSON.
    Construct(CodeArgs),
    /// Encode an information word.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// K information bits, e.g. 1011.
        #[arg(long)]
        info: String,
    },
    /// Decode one frame of natural-order channel LLRs.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        dec: DecoderArgs,
        /// Comma-separated LLRs.
        #[arg(long, allow_hyphen_values = true)]
        llr: String,
    },
    /// Print the pruned decoding schedule and its node histogram.
    Schedule {
        #[command(flatten)]
        code: CodeArgs,
        /// Bundle (none, fast-ssc, lossless, all) or `+`/`,` separated tags.
        #[arg(long, default_value = "fast-ssc")]
        mergers: String,
        #[arg(long, default_value_t = 1)]
        min_node_size: usize,
    },
    /// Time-step latency per merger configuration.
    Latency {
        #[command(flatten)]
        code: CodeArgs,
        /// JSON cost model file; defaults to the built-in model.
        #[arg(long)]
        cost_model: Option<PathBuf>,
        /// Comma-separated configurations; the first is the baseline.
        /// Use `+` to join tags inside one configuration.
        #[arg(long, default_value = "fast-ssc,lossless,all")]
        configs: String,
        #[arg(long, value_enum, default_value_t = Format::Both)]
        format: Format,
    },
    /// Monte Carlo BER/FER sweep over Eb/N0, written as CSV.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        dec: DecoderArgs,
        /// Eb/N0 in dB as start:step:stop or a single value.
        #[arg(long)]
        snr: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        max_frames: u64,
        #[arg(long, default_value_t = 100)]
        max_frame_errors: u64,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 0 uses all available cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Value of the config_name column.
        #[arg(long)]
        name: Option<String>,
        /// Decode noise-free LLRs.
        #[arg(long)]
        noiseless: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Both,
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    /// Blocklength N.
    #[arg(long = "N", conflicts_with_all = ["n", "code"])]
    pub big_n: Option<usize>,
    /// log2 of the blocklength.
    #[arg(long = "n", conflicts_with = "code")]
    pub n: Option<u32>,
    /// Number of information bits.
    #[arg(long, conflicts_with_all = ["rate", "code"])]
    pub k: Option<usize>,
    /// Code rate; K = round(N * rate).
    #[arg(long, conflicts_with = "code")]
    pub rate: Option<f64>,
    #[arg(long, default_value = "bhattacharyya")]
    pub construction: String,
    /// Erasure probability (bhattacharyya) or design Es/N0 in dB (ga).
    #[arg(long, allow_hyphen_values = true)]
    pub design_param: Option<f64>,
    /// Read the code from a JSON file written by `construct`.
    #[arg(long)]
    pub code: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecoderArgs {
    /// sc or fast.
    #[arg(long, default_value = "fast")]
    pub decoder: String,
    #[arg(long, default_value = "fast-ssc")]
    pub mergers: String,
    /// min-sum or exact.
    #[arg(long, default_value = "min-sum")]
    pub rule: String,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<PolarError> for Failure {
    fn from(e: PolarError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

type CliResult = std::result::Result<(), Failure>;

impl CodeArgs {
    pub fn resolve(&self) -> crate::Result<CodeSpec> {
        if let Some(path) = &self.code {
            let text = std::fs::read_to_string(path)
                .map_err(|e| PolarError::Parse(format!("{}: {e}", path.display())))?;
            return CodeSpec::from_json(&text);
        }
        let n_len = match (self.big_n, self.n) {
            (Some(n), _) => n,
            (None, Some(d)) if d < usize::BITS => 1usize << d,
            (None, Some(d)) => return Err(PolarError::Parse(format!("--n {d} too large"))),
            (None, None) => return Err(PolarError::Parse("one of --N or --n is required".into())),
        };
        let k = match (self.k, self.rate) {
            (Some(k), _) => k,
            (None, Some(r)) if (0.0..=1.0).contains(&r) => (n_len as f64 * r).round() as usize,
            (None, Some(r)) => return Err(PolarError::Parse(format!("rate {r} outside [0, 1]"))),
            (None, None) => return Err(PolarError::Parse("one of --k or --rate is required".into())),
        };
        let param = match self.design_param {
            Some(p) => p,
            None => construction_by_name(&self.construction)?.default_design_param(),
        };
        build_code(n_len, k, &self.construction, param)
    }
}

impl DecoderArgs {
    fn resolve(&self) -> crate::Result<(DecoderSpec, LlrRule)> {
        let mergers = MergerConfig::parse(&self.mergers)?;
        Ok((
            DecoderSpec::from_name(&self.decoder, mergers)?,
            self.rule.parse()?,
        ))
    }
}

/// Parses `args` (including the program name) and executes the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_RUNTIME
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Construct(code) => {
            let code = code.resolve()?;
            writeln!(out, "{}", code.to_json()).map_err(runtime)
        }
        Command::Encode { code, info } => {
            let code = code.resolve()?;
            let info = BitVector::parse(&info)?;
            let x = encode(&code, &insert_info_bits(&code, &info)?)?;
            writeln!(out, "{x}").map_err(runtime)
        }
        Command::Decode { code, dec, llr } => {
            let code = code.resolve()?;
            let (spec, rule) = dec.resolve()?;
            let values = llr
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(format!("bad --llr: {e}")))?;
            let values = LlrVector::new(values)?;
            let res = spec.build(&code, rule)?.decode(&values)?;
            let doc = json!({
                "u_hat": res.u_hat.to_string(),
                "x_hat": res.x_hat.to_string(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(runtime)
        }
        Command::Schedule {
            code,
            mergers,
            min_node_size,
        } => {
            let code = code.resolve()?;
            let cfg = MergerConfig::parse(&mergers)?.with_min_node_size(min_node_size);
            let sched = build_schedule(&code, &cfg);
            let doc = json!({
                "schedule": sched,
                "stats": schedule_stats(&sched),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(runtime)
        }
        Command::Latency {
            code,
            cost_model,
            configs,
            format,
        } => {
            let code = code.resolve()?;
            let cm = match cost_model {
                Some(p) => CostModel::load(&p)?,
                None => default_cost_model(),
            };
            let cfgs = configs
                .split(',')
                .map(MergerConfig::parse)
                .collect::<crate::Result<Vec<_>>>()?;
            let report = latency_report(&code, &cfgs, &cm)?;
            if format != Format::Json {
                write!(out, "{}", report.table()).map_err(runtime)?;
            }
            if format != Format::Table {
                writeln!(out, "{}", report.to_json()).map_err(runtime)?;
            }
            Ok(())
        }
        Command::Simulate {
            code,
            dec,
            snr,
            seed,
            max_frames,
            max_frame_errors,
            out: path,
            threads,
            name,
            noiseless,
        } => {
            let code = code.resolve()?;
            let (spec, rule) = dec.resolve()?;
            let mut cfg = SimConfig::new(code, spec, parse_snr_range(&snr)?, seed);
            cfg.rule = rule;
            cfg.max_frames = max_frames;
            cfg.max_frame_errors = max_frame_errors;
            cfg.noiseless = noiseless;
            if let Some(n) = name {
                cfg.name = n;
            } else {
                cfg.name = dec.mergers_label();
            }
            cfg.validate()?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(runtime)?;
            let res = pool.install(|| run_sweep(&cfg)).map_err(runtime)?;
            let csv = res.to_csv(true);
            let summary = format!(
                "{}: N={} K={} points={} seed={} hash={}",
                res.config_name,
                res.n_len,
                res.k,
                res.points.len(),
                res.seed,
                res.config_hash
            );
            match path {
                Some(p) => {
                    std::fs::write(&p, csv).map_err(|e| runtime(format!("{}: {e}", p.display())))?;
                    writeln!(out, "{summary}").map_err(runtime)?;
                    writeln!(out, "wrote {}", p.display()).map_err(runtime)
                }
                None => {
                    out.write_all(csv.as_bytes()).map_err(runtime)?;
                    writeln!(err, "{summary}").map_err(runtime)
                }
            }
        }
    }
}

impl DecoderArgs {
    fn mergers_label(&self) -> String {
        if self.decoder == "sc" {
            return "sc".into();
        }
        MergerConfig::parse(&self.mergers)
            .map(|m| m.label())
            .unwrap_or_else(|_| self.mergers.clone())
    }
}
