//! Schedule-driven fast-SSC decoder.

use std::sync::Arc;

use crate::code::{from_tree_order, to_tree_order, CodeSpec};
use crate::decoder::{DecodeOutput, FrameDecoder};
use crate::error::{PolarError, Result};
use crate::kind::NodeTag;
use crate::llr::{combine_into, f_into, g_into, hard_decision, LlrRule};
use crate::nodes::NodeRegistry;
use crate::schedule::{build_schedule, DecodeSchedule, MergerConfig, Op};

pub struct FastDecoder {
    code: CodeSpec,
    sched: Arc<DecodeSchedule>,
    rule: LlrRule,
    registry: &'static NodeRegistry,
    alpha: Vec<Vec<f64>>,
    /// `beta[l][side]`: partial sums of the left (0) or right (1) node at level `l`.
    beta: Vec<[Vec<u8>; 2]>,
}

impl FastDecoder {
    pub fn new(code: CodeSpec, sched: Arc<DecodeSchedule>, rule: LlrRule) -> Result<Self> {
        if sched.len != code.len() || sched.pattern != code.pattern() {
            return Err(PolarError::ScheduleMismatch(format!(
                "schedule for N={} does not belong to this N={} code",
                sched.len,
                code.len()
            )));
        }
        sched.validate()?;
        let registry = NodeRegistry::standard();
        for (k, _) in sched.nodes() {
            if k.tag != NodeTag::Generic && registry.get(k.tag).is_none() {
                return Err(PolarError::UnknownTag(k.tag.to_string()));
            }
        }
        let depth = code.depth() as usize;
        Ok(Self {
            alpha: (0..=depth).map(|l| vec![0.0; 1 << l]).collect(),
            beta: (0..=depth)
                .map(|l| [vec![0u8; 1 << l], vec![0u8; 1 << l]])
                .collect(),
            code,
            sched,
            rule,
            registry,
        })
    }

    pub fn schedule(&self) -> &DecodeSchedule {
        &self.sched
    }

    fn run(&mut self, tree_alpha: &[f64]) -> Result<Vec<u8>> {
        let depth = self.code.depth();
        self.alpha[depth as usize].copy_from_slice(tree_alpha);
        let side = |level: u32, offset: usize| {
            if level == depth {
                0
            } else {
                (offset >> level) & 1
            }
        };
        for step in &self.sched.steps {
            let l = step.level as usize;
            match step.op {
                Op::F => {
                    let (lo, hi) = self.alpha.split_at_mut(l);
                    f_into(&hi[0], self.rule, &mut lo[l - 1]);
                }
                Op::G => {
                    let (lo, hi) = self.alpha.split_at_mut(l);
                    g_into(&hi[0], &self.beta[l - 1][0], &mut lo[l - 1]);
                }
                Op::Combine => {
                    let s = side(step.level, step.offset);
                    let (lo, hi) = self.beta.split_at_mut(l);
                    let [left, right] = &lo[l - 1];
                    combine_into(left, right, &mut hi[0][s]);
                }
                Op::Node(kind) => {
                    let s = side(step.level, step.offset);
                    let out = &mut self.beta[l][s];
                    let alpha = &self.alpha[l];
                    if kind.tag == NodeTag::Generic {
                        out[0] = if self.code.is_frozen(step.offset) {
                            0
                        } else {
                            hard_decision(alpha[0])
                        };
                    } else {
                        let dec = self
                            .registry
                            .get(kind.tag)
                            .ok_or_else(|| PolarError::UnknownTag(kind.tag.to_string()))?;
                        dec.decode(alpha, kind.depth_t, self.rule, out)?;
                    }
                }
            }
        }
        Ok(self.beta[depth as usize][0].clone())
    }
}

impl FrameDecoder for FastDecoder {
    fn name(&self) -> &str {
        "fast"
    }

    fn decode(&mut self, alpha: &[f64]) -> Result<DecodeOutput> {
        if alpha.len() != self.code.len() {
            return Err(PolarError::LengthMismatch {
                expected: self.code.len(),
                actual: alpha.len(),
            });
        }
        let root = self.run(&to_tree_order(alpha))?;
        Ok(DecodeOutput::from_codeword(&self.code, from_tree_order(&root)))
    }
}

/// One-shot decode with a prebuilt schedule.
pub fn decode_fast(
    code: &CodeSpec,
    alpha: &[f64],
    sched: &DecodeSchedule,
    rule: LlrRule,
) -> Result<DecodeOutput> {
    FastDecoder::new(code.clone(), Arc::new(sched.clone()), rule)?.decode(alpha)
}

/// Builds the schedule for `cfg` and returns a ready decoder.
pub fn fast_decoder(code: &CodeSpec, cfg: &MergerConfig, rule: LlrRule) -> Result<FastDecoder> {
    FastDecoder::new(code.clone(), Arc::new(build_schedule(code, cfg)), rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{BitVector, LlrVector};
    use crate::code::{build_code, encode, insert_info_bits};
    use crate::sc::ScDecoder;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_foreign_schedule() {
        let a = build_code(16, 8, "bhattacharyya", 0.5).unwrap();
        let b = build_code(16, 9, "bhattacharyya", 0.5).unwrap();
        let s = build_schedule(&b, &MergerConfig::fast_ssc());
        assert!(matches!(
            decode_fast(&a, &[1.0; 16], &s, LlrRule::MinSum),
            Err(PolarError::ScheduleMismatch(_))
        ));
    }

    #[test]
    fn noiseless_every_config() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (n, k) in [(8, 4), (64, 32), (128, 32), (256, 200)] {
            let code = build_code(n, k, "bhattacharyya", 0.5).unwrap();
            for cfg in ["none", "fast-ssc", "lossless", "all", "fast-ssc+REP-SPC"] {
                let mut dec =
                    fast_decoder(&code, &MergerConfig::parse(cfg).unwrap(), LlrRule::MinSum).unwrap();
                for _ in 0..20 {
                    let info: Vec<u8> = (0..k).map(|_| rng.random_range(0..2)).collect();
                    let u = insert_info_bits(&code, &BitVector::new(info).unwrap()).unwrap();
                    let x = encode(&code, &u).unwrap();
                    let out = dec.decode(&LlrVector::from_codeword(&x, 3.0)).unwrap();
                    assert_eq!(out.x_hat, x, "{cfg} N={n} K={k}");
                }
            }
        }
    }

    #[test]
    fn empty_config_matches_sc() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let code = build_code(64, 30, "bhattacharyya", 0.5).unwrap();
        let mut sc = ScDecoder::new(code.clone(), LlrRule::Exact);
        let mut fast = fast_decoder(&code, &MergerConfig::none(), LlrRule::Exact).unwrap();
        for _ in 0..300 {
            let a: Vec<f64> = (0..64).map(|_| rng.random_range(-2.0..4.0)).collect();
            assert_eq!(sc.decode(&a).unwrap(), fast.decode(&a).unwrap());
        }
    }
}
