//! Frame-level decoder interface and the name-based factory used by the
//! simulator and CLI.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::code::{extract_info_bits, polar_transform, CodeSpec};
use crate::error::{PolarError, Result};
use crate::fast::FastDecoder;
use crate::llr::LlrRule;
use crate::sc::ScDecoder;
use crate::schedule::{build_schedule, DecodeSchedule, MergerConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutput {
    /// Estimated information bits (length K).
    pub u_hat: BitVector,
    /// Estimated codeword in natural order (length N).
    pub x_hat: BitVector,
}

impl DecodeOutput {
    /// Reads information bits off a natural-order codeword estimate and
    /// re-encodes them, so `x_hat` is always a codeword of `code`.
    pub(crate) fn from_codeword(code: &CodeSpec, mut x: Vec<u8>) -> Self {
        polar_transform(&mut x);
        for (i, b) in x.iter_mut().enumerate() {
            if code.is_frozen(i) {
                *b = 0;
            }
        }
        let u_hat = extract_info_bits(code, &x).expect("length matches code");
        polar_transform(&mut x);
        Self {
            u_hat,
            x_hat: BitVector::new(x).expect("binary"),
        }
    }
}

/// Decodes one frame of natural-order channel LLRs at a time. Instances
/// own scratch buffers; use one instance per worker.
pub trait FrameDecoder: Send {
    fn name(&self) -> &str;

    fn decode(&mut self, alpha: &[f64]) -> Result<DecodeOutput>;
}

/// Which decoder to build for a code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decoder", rename_all = "kebab-case")]
pub enum DecoderSpec {
    Sc,
    Fast { mergers: MergerConfig },
}

impl DecoderSpec {
    pub fn from_name(name: &str, mergers: MergerConfig) -> Result<Self> {
        match name {
            "sc" => Ok(Self::Sc),
            "fast" | "fast-ssc" => Ok(Self::Fast { mergers }),
            other => Err(PolarError::Parse(format!("unknown decoder `{other}`"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Sc => "sc".into(),
            Self::Fast { mergers } => format!("fast[{mergers}]"),
        }
    }

    /// Does the per-code work once so that instances are cheap.
    pub fn prepare(&self, code: &CodeSpec, rule: LlrRule) -> Result<PreparedDecoder> {
        let sched = match self {
            Self::Sc => None,
            Self::Fast { mergers } => {
                let s = build_schedule(code, mergers);
                s.validate()?;
                Some(Arc::new(s))
            }
        };
        Ok(PreparedDecoder {
            code: code.clone(),
            rule,
            sched,
        })
    }

    pub fn build(&self, code: &CodeSpec, rule: LlrRule) -> Result<Box<dyn FrameDecoder>> {
        self.prepare(code, rule)?.instance()
    }
}

/// A decoder configuration bound to a code; hands out independent instances.
#[derive(Debug, Clone)]
pub struct PreparedDecoder {
    code: CodeSpec,
    rule: LlrRule,
    sched: Option<Arc<DecodeSchedule>>,
}

impl PreparedDecoder {
    pub fn instance(&self) -> Result<Box<dyn FrameDecoder>> {
        Ok(match &self.sched {
            None => Box::new(ScDecoder::new(self.code.clone(), self.rule)),
            Some(s) => Box::new(FastDecoder::new(self.code.clone(), s.clone(), self.rule)?),
        })
    }
}
