//! Seeded Monte Carlo BER/FER estimation.
//!
//! Frame `f` of SNR point `p` draws everything from a ChaCha8 stream keyed
//! by `(seed, p, f)`, and frames are tallied in index order, so results do
//! not depend on how many worker threads ran them.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bits::BitVector;
use crate::channel::{channel_llrs, noiseless_llrs};
use crate::code::{encode, insert_info_bits, CodeSpec};
use crate::decoder::{DecoderSpec, FrameDecoder, PreparedDecoder};
use crate::error::{PolarError, Result};
use crate::llr::LlrRule;

/// Frames decoded between early-stop checks.
const CHUNK: u64 = 128;

pub const CSV_HEADER: &str = "config_name,N,K,ebn0_db,frames,bit_errors,frame_errors,ber,fer,seed";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub name: String,
    pub code: CodeSpec,
    pub decoder: DecoderSpec,
    pub rule: LlrRule,
    /// Eb/N0 points in dB.
    pub snr_points: Vec<f64>,
    pub max_frames: u64,
    pub max_frame_errors: u64,
    pub seed: u64,
    /// Skip the noise draw; LLRs keep their nominal scale.
    #[serde(default)]
    pub noiseless: bool,
}

impl SimConfig {
    pub fn new(code: CodeSpec, decoder: DecoderSpec, snr_points: Vec<f64>, seed: u64) -> Self {
        Self {
            name: decoder.label(),
            code,
            decoder,
            rule: LlrRule::default(),
            snr_points,
            max_frames: 100_000,
            max_frame_errors: 100,
            seed,
            noiseless: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(PolarError::InvalidSimConfig(m.into()));
        if self.max_frames < 1 {
            return bad("max_frames must be at least 1");
        }
        if self.max_frame_errors < 1 {
            return bad("max_frame_errors must be at least 1");
        }
        if self.snr_points.is_empty() {
            return bad("no SNR points");
        }
        if self.snr_points.iter().any(|s| !s.is_finite()) {
            return bad("SNR points must be finite");
        }
        if self.code.k() == 0 {
            return bad("code carries no information bits");
        }
        Ok(())
    }

    /// Short hex digest of the canonical JSON form of the configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
}

impl PointResult {
    fn from_counts(ebn0_db: f64, k: usize, frames: u64, bit_errors: u64, frame_errors: u64) -> Self {
        Self {
            ebn0_db,
            frames,
            bit_errors,
            frame_errors,
            ber: bit_errors as f64 / (frames as f64 * k as f64),
            fer: frame_errors as f64 / frames as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub config_name: String,
    #[serde(rename = "N")]
    pub n_len: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub seed: u64,
    pub config_hash: String,
    pub points: Vec<PointResult>,
}

impl SimResult {
    pub fn to_csv(&self, with_header: bool) -> String {
        let mut out = String::new();
        if with_header {
            out.push_str(CSV_HEADER);
            out.push('\n');
        }
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{:e},{:e},{}",
                self.config_name,
                self.n_len,
                self.k,
                p.ebn0_db,
                p.frames,
                p.bit_errors,
                p.frame_errors,
                p.ber,
                p.fer,
                self.seed
            );
        }
        out
    }
}

/// The random stream of one frame.
pub fn frame_rng(seed: u64, point: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 40) ^ frame);
    rng
}

/// Draws the information bits and channel LLRs of one frame.
pub fn draw_frame<R: Rng + ?Sized>(
    code: &CodeSpec,
    ebn0_db: f64,
    noiseless: bool,
    rng: &mut R,
) -> Result<(BitVector, Vec<f64>)> {
    let info: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
    let info = BitVector::new(info)?;
    let x = encode(code, &insert_info_bits(code, &info)?)?;
    let llr = if noiseless {
        noiseless_llrs(&x, ebn0_db, code.rate())?
    } else {
        channel_llrs(&x, ebn0_db, code.rate(), rng)?
    };
    Ok((info, llr.into_inner()))
}

fn frame_errors(
    cfg: &SimConfig,
    dec: &mut dyn FrameDecoder,
    ebn0_db: f64,
    point: usize,
    frame: u64,
) -> Result<u64> {
    let mut rng = frame_rng(cfg.seed, point, frame);
    let (info, llr) = draw_frame(&cfg.code, ebn0_db, cfg.noiseless, &mut rng)?;
    let out = dec.decode(&llr)?;
    Ok(info
        .iter()
        .zip(out.u_hat.iter())
        .filter(|(a, b)| a != b)
        .count() as u64)
}

fn run_point_prepared(
    cfg: &SimConfig,
    prepared: &PreparedDecoder,
    point: usize,
) -> Result<PointResult> {
    let ebn0 = cfg.snr_points[point];
    let (mut frames, mut bits, mut errs) = (0u64, 0u64, 0u64);
    while frames < cfg.max_frames && errs < cfg.max_frame_errors {
        let end = (frames + CHUNK).min(cfg.max_frames);
        let counts: Vec<u64> = (frames..end)
            .into_par_iter()
            .map_init(
                || prepared.instance(),
                |dec, f| match dec {
                    Ok(d) => frame_errors(cfg, d.as_mut(), ebn0, point, f),
                    Err(e) => Err(e.clone()),
                },
            )
            .collect::<Result<_>>()?;
        for c in counts {
            frames += 1;
            if c > 0 {
                bits += c;
                errs += 1;
                if errs >= cfg.max_frame_errors {
                    break;
                }
            }
        }
    }
    Ok(PointResult::from_counts(ebn0, cfg.code.k(), frames, bits, errs))
}

/// Runs the SNR point with index `point` of `cfg`.
pub fn run_point(cfg: &SimConfig, point: usize) -> Result<PointResult> {
    cfg.validate()?;
    if point >= cfg.snr_points.len() {
        return Err(PolarError::InvalidSimConfig(format!("no SNR point {point}")));
    }
    let prepared = cfg.decoder.prepare(&cfg.code, cfg.rule)?;
    run_point_prepared(cfg, &prepared, point)
}

pub fn run_sweep(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let prepared = cfg.decoder.prepare(&cfg.code, cfg.rule)?;
    let points = (0..cfg.snr_points.len())
        .map(|p| run_point_prepared(cfg, &prepared, p))
        .collect::<Result<_>>()?;
    Ok(SimResult {
        config_name: cfg.name.clone(),
        n_len: cfg.code.len(),
        k: cfg.code.k(),
        seed: cfg.seed,
        config_hash: cfg.hash(),
        points,
    })
}

/// Parses `start:step:stop` (inclusive) or a single value.
pub fn parse_snr_range(s: &str) -> Result<Vec<f64>> {
    let bad = || PolarError::Parse(format!("bad SNR range `{s}`, expected start:step:stop"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if parts.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    match parts[..] {
        [v] => Ok(vec![v]),
        [start, step, stop] => {
            if step <= 0.0 || stop < start {
                return Err(bad());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..n)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        _ => Err(bad()),
    }
}
