//! Group C mergers: a REP leaf at the far left with SPC and/or R1 right
//! children on every level above it.
//!
//! In tree order the span splits into `2^{l0}` blocks of `2^t` LLRs and
//! the parity of every block equals the REP bit. The REP bit comes from the
//! block-wise boxplus of the root LLRs; each partial-sum bit is then taken
//! from its own LLR plus the parity-adjusted boxplus of the rest of its
//! block, and a block
//! whose parity disagrees with the REP bit has its least reliable position
//! flipped. For `REP-R1^t` those block-parity constraints are the whole
//! code and the result matches sequential decoding; for the SPC variants
//! the extra even-parity constraints of the SPC children are not enforced.

use super::{check_span, halves, is_r1, is_rep, is_single, is_spc, NodeDecoder};
use crate::bits::BitVector;
use crate::error::{PolarError, Result};
use crate::kind::NodeTag;
use crate::llr::{f_llr, hard_decision, tree_boxplus, tree_sum, LlrRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// `REP-SPC^t`
    SpcT,
    /// `REP-SPC-R1^{t-1}`
    SpcR1,
    /// `REP-R1^t`
    R1T,
}

pub struct RepCNode {
    shape: Shape,
}

impl RepCNode {
    pub fn spc_t() -> Self {
        Self { shape: Shape::SpcT }
    }

    pub fn spc_r1() -> Self {
        Self {
            shape: Shape::SpcR1,
        }
    }

    pub fn r1_t() -> Self {
        Self { shape: Shape::R1T }
    }

    fn bottom_right(&self, p: &[bool]) -> bool {
        match self.shape {
            Shape::SpcT | Shape::SpcR1 => is_spc(p),
            Shape::R1T => p.len() >= 2 && is_r1(p),
        }
    }

    fn upper_right(&self, p: &[bool]) -> bool {
        match self.shape {
            Shape::SpcT => is_spc(p),
            Shape::SpcR1 | Shape::R1T => is_r1(p),
        }
    }
}

/// Boxplus of every entry except one, for each position of `block`.
fn extrinsic(block: &[f64], rule: LlrRule) -> Vec<f64> {
    let n = block.len();
    let mut prefix = vec![None; n + 1];
    for i in 0..n {
        prefix[i + 1] = Some(match prefix[i] {
            None => block[i],
            Some(acc) => f_llr(acc, block[i], rule),
        });
    }
    let mut out = vec![0.0; n];
    let mut suffix: Option<f64> = None;
    for k in (0..n).rev() {
        out[k] = match (prefix[k], suffix) {
            (Some(p), Some(s)) => f_llr(p, s, rule),
            (Some(p), None) => p,
            (None, Some(s)) => s,
            (None, None) => 0.0,
        };
        suffix = Some(match suffix {
            None => block[k],
            Some(s) => f_llr(block[k], s, rule),
        });
    }
    out
}

impl NodeDecoder for RepCNode {
    fn tag(&self) -> NodeTag {
        match self.shape {
            Shape::SpcT => NodeTag::RepSpcT,
            Shape::SpcR1 => NodeTag::RepSpcR1T1,
            Shape::R1T => NodeTag::RepR1T,
        }
    }

    fn match_pattern(&self, pattern: &[bool]) -> Option<u32> {
        let mut p = pattern;
        let mut t = 0;
        while p.len() >= 4 {
            let (l, r) = halves(p);
            t += 1;
            if is_rep(l) && self.bottom_right(r) {
                return Some(t);
            }
            if !self.upper_right(r) || is_single(l) {
                return None;
            }
            p = l;
        }
        None
    }

    fn decode(&self, alpha: &[f64], t: u32, rule: LlrRule, out: &mut [u8]) -> Result<()> {
        let min_t = if self.shape == Shape::SpcR1 { 2 } else { 1 };
        let ok = t >= min_t && (alpha.len() >> t) >= 2;
        check_span(self.tag(), alpha, out, t, ok)?;
        let block = 1usize << t;

        let rep_llrs: Vec<f64> = alpha
            .chunks_exact(block)
            .map(|c| tree_boxplus(c, rule))
            .collect();
        let q = hard_decision(tree_sum(&rep_llrs));

        // Block parity is q, so the rest of the block votes for bit k with
        // its boxplus, sign-flipped when q = 1.
        let sign = if q == 0 { 1.0 } else { -1.0 };
        for (chunk, dst) in alpha.chunks_exact(block).zip(out.chunks_exact_mut(block)) {
            let ext = extrinsic(chunk, rule);
            let mut parity = 0u8;
            for ((o, &a), &e) in dst.iter_mut().zip(chunk).zip(&ext) {
                *o = hard_decision(a + sign * e);
                parity ^= *o;
            }
            if parity != q {
                let j = chunk
                    .iter()
                    .enumerate()
                    .fold((0, f64::INFINITY), |(bj, bv), (i, &a)| {
                        if a.abs() < bv {
                            (i, a.abs())
                        } else {
                            (bj, bv)
                        }
                    })
                    .0;
                dst[j] ^= 1;
            }
        }
        Ok(())
    }
}

/// Decodes a Group C merger (`REPSPCt`, `REPSPCR1t1` or `REPR1t`) of depth `t`.
pub fn decode_group_c(kind: NodeTag, alpha: &[f64], t: u32, rule: LlrRule) -> Result<BitVector> {
    let node = match kind {
        NodeTag::RepSpcT => RepCNode::spc_t(),
        NodeTag::RepSpcR1T1 => RepCNode::spc_r1(),
        NodeTag::RepR1T => RepCNode::r1_t(),
        other => {
            return Err(PolarError::InvalidNode {
                kind: other.to_string(),
                len: alpha.len(),
                t,
            })
        }
    };
    let mut out = vec![0u8; alpha.len()];
    node.decode(alpha, t, rule, &mut out)?;
    BitVector::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn matches() {
        // REP(2) SPC(2) SPC(4) SPC(8)
        assert_eq!(
            RepCNode::spc_t().match_pattern(&pat("0101011101111111")),
            Some(3)
        );
        // REP(2) SPC(2) R1(4)
        assert_eq!(RepCNode::spc_r1().match_pattern(&pat("01011111")), Some(2));
        // REP(4) R1(4) R1(8)
        assert_eq!(
            RepCNode::r1_t().match_pattern(&pat("0001111111111111")),
            Some(2)
        );
        assert_eq!(RepCNode::r1_t().match_pattern(&pat("0101111111111111")), None);
    }

    #[test]
    fn extrinsic_min_sum() {
        let e = extrinsic(&[2.0, -1.0, 3.0], LlrRule::MinSum);
        assert_eq!(e, vec![-1.0, 2.0, -1.0]);
        assert_eq!(extrinsic(&[5.0], LlrRule::MinSum), vec![0.0]);
    }

    #[test]
    fn all_positive_gives_zero() {
        for (kind, t) in [
            (NodeTag::RepSpcT, 2),
            (NodeTag::RepSpcR1T1, 2),
            (NodeTag::RepR1T, 3),
        ] {
            let out = decode_group_c(kind, &[1.5; 16], t, LlrRule::MinSum).unwrap();
            assert_eq!(out, BitVector::zeros(16));
        }
    }

    #[test]
    fn single_strong_negative_flips_one_bit_in_its_block() {
        // Two blocks of two (t = 1). The -5 makes block 0 parity odd while
        // the REP bit stays 0, so exactly one bit of block 0 is flipped.
        let alpha = [-5.0, 1.0, 2.0, 3.0];
        let out = decode_group_c(NodeTag::RepR1T, &alpha, 1, LlrRule::MinSum).unwrap();
        assert_eq!(&*out, &[1, 1, 0, 0]);
        let hard = [1u8, 0, 0, 0];
        let flips = out.iter().zip(hard).filter(|(a, b)| **a != *b).count();
        assert_eq!(flips, 1);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(decode_group_c(NodeTag::RepSpcR1T1, &[1.0; 8], 1, LlrRule::MinSum).is_err());
        assert!(decode_group_c(NodeTag::RepR1T, &[1.0; 8], 3, LlrRule::MinSum).is_err());
        assert!(decode_group_c(NodeTag::Spc, &[1.0; 8], 1, LlrRule::MinSum).is_err());
    }
}
