//! Polar codes with successive-cancellation and fast-SSC decoding,
//! multi-level node mergers, a time-step latency model and an AWGN
//! Monte Carlo harness.

pub mod bits;
pub mod channel;
pub mod cli;
pub mod code;
pub mod construction;
pub mod decoder;
pub mod error;
pub mod fast;
pub mod kind;
pub mod latency;
pub mod llr;
pub mod nodes;
pub mod sc;
pub mod schedule;
pub mod sim;

pub use bits::{BitVector, LlrVector};
pub use code::{build_code, encode, extract_info_bits, insert_info_bits, polar_transform, CodeSpec};
pub use decoder::{DecodeOutput, DecoderSpec, FrameDecoder};
pub use error::{PolarError, Result};
pub use fast::{decode_fast, fast_decoder, FastDecoder};
pub use kind::{NodeKind, NodeTag};
pub use latency::{default_cost_model, latency_report, schedule_latency, CostModel, LatencyReport};
pub use llr::{f_llr, g_llr, hard_decision, LlrRule};
pub use nodes::{classify, NodeDecoder, NodeRegistry};
pub use sc::{decode_sc, ScDecoder};
pub use schedule::{build_schedule, schedule_stats, DecodeSchedule, MergerConfig, Op, Step};
pub use sim::{run_point, run_sweep, PointResult, SimConfig, SimResult};
