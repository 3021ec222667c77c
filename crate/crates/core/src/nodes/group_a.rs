//! Group A mergers: generalized REP nodes whose left descendants are all R0.
//!
//! With every left partial sum known to be zero, the rightmost constituent
//! sees block sums of the root LLRs. Those are produced by repeated pairwise
//! `g` steps with a zero left codeword, which is bit-identical to the
//! sequential traversal.

use super::single::{RepSpcNode, SpcNode, REP_SPC_SPAN};
use super::{check_span, halves, is_r0, is_rep_spc, is_single, is_spc, NodeDecoder};
use crate::bits::BitVector;
use crate::error::{PolarError, Result};
use crate::kind::NodeTag;
use crate::llr::{fold_pairs, LlrRule};

/// Pattern (a), `R0^t-SPC`.
pub struct R0tSpcNode;

/// Pattern (b), `R0^{t-1}-REP-SPC`.
pub struct R0t1RepSpcNode;

/// Walks down the right spine while left siblings are R0 and returns the
/// number of R0 siblings passed when `leaf` first matches.
fn r0_spine(pattern: &[bool], leaf: impl Fn(&[bool]) -> bool) -> Option<u32> {
    let mut p = pattern;
    let mut t = 0;
    while p.len() >= 2 {
        if t >= 1 && leaf(p) {
            return Some(t);
        }
        if t >= 1 && is_single(p) {
            return None;
        }
        let (l, r) = halves(p);
        if !is_r0(l) {
            return None;
        }
        t += 1;
        p = r;
    }
    None
}

fn aggregate(alpha: &[f64], levels: u32) -> Vec<f64> {
    let mut v = alpha.to_vec();
    for _ in 0..levels {
        v = fold_pairs(&v);
    }
    v
}

fn broadcast(sub: &[u8], out: &mut [u8]) {
    let block = out.len() / sub.len();
    for (chunk, &bit) in out.chunks_exact_mut(block).zip(sub) {
        chunk.fill(bit);
    }
}

impl NodeDecoder for R0tSpcNode {
    fn tag(&self) -> NodeTag {
        NodeTag::R0tSpc
    }

    fn match_pattern(&self, p: &[bool]) -> Option<u32> {
        r0_spine(p, is_spc)
    }

    fn decode(&self, alpha: &[f64], t: u32, rule: LlrRule, out: &mut [u8]) -> Result<()> {
        let ok = t >= 1 && (alpha.len() >> t) >= 2;
        check_span(self.tag(), alpha, out, t, ok)?;
        let agg = aggregate(alpha, t);
        let mut sub = vec![0u8; agg.len()];
        SpcNode.decode(&agg, 0, rule, &mut sub)?;
        broadcast(&sub, out);
        Ok(())
    }
}

impl NodeDecoder for R0t1RepSpcNode {
    fn tag(&self) -> NodeTag {
        NodeTag::R0t1RepSpc
    }

    fn match_pattern(&self, p: &[bool]) -> Option<u32> {
        r0_spine(p, is_rep_spc).map(|r0_count| r0_count + 1)
    }

    fn decode(&self, alpha: &[f64], t: u32, rule: LlrRule, out: &mut [u8]) -> Result<()> {
        let ok = t >= 1 && (alpha.len() >> (t - 1)) == REP_SPC_SPAN;
        check_span(self.tag(), alpha, out, t, ok)?;
        let agg = aggregate(alpha, t - 1);
        let mut sub = vec![0u8; agg.len()];
        RepSpcNode.decode(&agg, 0, rule, &mut sub)?;
        broadcast(&sub, out);
        Ok(())
    }
}

/// Decodes a Group A merger (`R0tSPC` or `R0t1REPSPC`) of depth `t`.
pub fn decode_group_a(kind: NodeTag, alpha: &[f64], t: u32, rule: LlrRule) -> Result<BitVector> {
    let mut out = vec![0u8; alpha.len()];
    match kind {
        NodeTag::R0tSpc => R0tSpcNode.decode(alpha, t, rule, &mut out)?,
        NodeTag::R0t1RepSpc => R0t1RepSpcNode.decode(alpha, t, rule, &mut out)?,
        other => {
            return Err(PolarError::InvalidNode {
                kind: other.to_string(),
                len: alpha.len(),
                t,
            })
        }
    }
    BitVector::new(out)
}
