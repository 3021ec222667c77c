//! Group B mergers: a chain of `t` REP left children ending in an SPC or
//! R1 leaf of size `2^{l0}`.
//!
//! In tree order the span splits into `2^{l0}` blocks of `2^t` LLRs. Every
//! block carries the same word `a` (the re-encoded REP bits) plus one bit of
//! the leaf codeword broadcast over the block, so the output is `a ⊕ β_i`
//! for block `i`. All REP bits are estimated at once from root LLRs: the
//! `j`-th REP bit is the only message bit that differs between tree
//! positions `k` and `k + 2^{j-1}` of a block, so pairing those positions
//! with a boxplus cancels every other unknown. The first estimate is exact
//! SC; the later ones skip the partial-sum corrections a sequential
//! decoder would apply, which is where the error-rate loss comes from.

use super::{check_span, halves, is_r1, is_rep, is_single, is_spc, NodeDecoder};
use crate::bits::BitVector;
use crate::code::tree_encode;
use crate::error::{PolarError, Result};
use crate::kind::NodeTag;
use crate::llr::{f_llr, g_llr, hard_decision, tree_sum, LlrRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Leaf {
    Spc,
    R1,
}

/// `REP^t-SPC` (pattern (c)) or `REP^t-R1` (pattern (d)).
pub struct RepTNode {
    leaf: Leaf,
}

impl RepTNode {
    pub fn spc() -> Self {
        Self { leaf: Leaf::Spc }
    }

    pub fn r1() -> Self {
        Self { leaf: Leaf::R1 }
    }

    fn leaf_matches(&self, p: &[bool]) -> bool {
        match self.leaf {
            Leaf::Spc => is_spc(p),
            Leaf::R1 => p.len() >= 2 && is_r1(p),
        }
    }
}

/// Length-`2^t` message whose tree-order encoding is the word shared by
/// every block: REP patterns of sizes `2^{t-1}, …, 2, 1` carrying
/// `q[0], …, q[t-1]` (decoding order), followed by a single 0.
/// For `t = 3` this is `{0,0,0,q0, 0,q1, q2, 0}`.
pub fn rep_chain_message(q: &[u8]) -> Vec<u8> {
    let t = q.len();
    let block = 1usize << t;
    let mut w = vec![0u8; block];
    for (j, &bit) in q.iter().enumerate() {
        w[block - 1 - (block >> (j + 1))] = bit;
    }
    w
}

impl NodeDecoder for RepTNode {
    fn tag(&self) -> NodeTag {
        match self.leaf {
            Leaf::Spc => NodeTag::RepTSpc,
            Leaf::R1 => NodeTag::RepTR1,
        }
    }

    fn match_pattern(&self, pattern: &[bool]) -> Option<u32> {
        let mut p = pattern;
        let mut t = 0;
        while p.len() >= 4 {
            let (l, r) = halves(p);
            if !is_rep(l) {
                return None;
            }
            t += 1;
            if self.leaf_matches(r) {
                return Some(t);
            }
            if is_single(r) {
                return None;
            }
            p = r;
        }
        None
    }

    fn decode(&self, alpha: &[f64], t: u32, rule: LlrRule, out: &mut [u8]) -> Result<()> {
        let ok = t >= 2 && (alpha.len() >> t) >= 2;
        check_span(self.tag(), alpha, out, t, ok)?;
        let block = 1usize << t;
        let blocks = alpha.len() >> t;

        let q: Vec<u8> = (0..t)
            .map(|j| {
                let d = 1usize << j;
                let terms: Vec<f64> = (0..alpha.len())
                    .filter(|&i| i & d == 0)
                    .map(|i| f_llr(alpha[i], alpha[i + d], rule))
                    .collect();
                hard_decision(tree_sum(&terms))
            })
            .collect();
        let a = tree_encode(&rep_chain_message(&q));

        let leaf_llr: Vec<f64> = alpha
            .chunks_exact(block)
            .map(|chunk| {
                let signed: Vec<f64> = chunk
                    .iter()
                    .zip(&a)
                    .map(|(&x, &ak)| g_llr(x, 0.0, ak))
                    .collect();
                tree_sum(&signed)
            })
            .collect();
        let mut beta: Vec<u8> = leaf_llr.iter().map(|&l| hard_decision(l)).collect();
        if self.leaf == Leaf::Spc {
            super::wagner(&leaf_llr, 0, &mut beta);
        }

        for (i, chunk) in out.chunks_exact_mut(block).enumerate().take(blocks) {
            for (o, &ak) in chunk.iter_mut().zip(&a) {
                *o = ak ^ beta[i];
            }
        }
        Ok(())
    }
}

/// Decodes a Group B merger (`REPtSPC` or `REPtR1`) of depth `t`.
pub fn decode_group_b(kind: NodeTag, alpha: &[f64], t: u32, rule: LlrRule) -> Result<BitVector> {
    let node = match kind {
        NodeTag::RepTSpc => RepTNode::spc(),
        NodeTag::RepTR1 => RepTNode::r1(),
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
    fn message_layout_t3() {
        assert_eq!(rep_chain_message(&[1, 1, 1]), vec![0, 0, 0, 1, 0, 1, 1, 0]);
        assert_eq!(rep_chain_message(&[1, 0, 0]), vec![0, 0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(rep_chain_message(&[0, 1, 0]), vec![0, 0, 0, 0, 0, 1, 0, 0]);
        assert_eq!(rep_chain_message(&[0, 0, 1]), vec![0, 0, 0, 0, 0, 0, 1, 0]);
    }

    #[test]
    fn shared_word_closed_form() {
        // Bit j of the REP chain lands on tree positions whose bit j is clear.
        for t in 1..=5u32 {
            for mask in 0..(1u32 << t) {
                let q: Vec<u8> = (0..t).map(|j| ((mask >> j) & 1) as u8).collect();
                let a = tree_encode(&rep_chain_message(&q));
                for (k, &ak) in a.iter().enumerate() {
                    let want = (0..t as usize)
                        .filter(|&j| k & (1 << j) == 0)
                        .fold(0u8, |acc, j| acc ^ q[j]);
                    assert_eq!(ak, want, "t={t} q={q:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn matches() {
        // REP(4) REP(2) SPC(2)
        assert_eq!(RepTNode::spc().match_pattern(&pat("00010101")), Some(2));
        // REP(8) REP(4) R1(4)
        assert_eq!(RepTNode::r1().match_pattern(&pat("0000000100011111")), Some(2));
        // REP(2) R1(2) is the SPC(4) leaf, so this is REP(8) REP(4) SPC(4)
        assert_eq!(RepTNode::r1().match_pattern(&pat("0000000100010111")), None);
        assert_eq!(RepTNode::spc().match_pattern(&pat("0000000100010111")), Some(2));
        assert_eq!(RepTNode::spc().match_pattern(&pat("00110101")), None);
    }

    #[test]
    fn all_positive_gives_zero() {
        for kind in [NodeTag::RepTSpc, NodeTag::RepTR1] {
            let out = decode_group_b(kind, &[2.5; 32], 3, LlrRule::MinSum).unwrap();
            assert_eq!(out, BitVector::zeros(32));
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(decode_group_b(NodeTag::RepTSpc, &[1.0; 8], 1, LlrRule::MinSum).is_err());
        assert!(decode_group_b(NodeTag::RepTR1, &[1.0; 8], 3, LlrRule::MinSum).is_err());
        assert!(decode_group_b(NodeTag::R0tSpc, &[1.0; 16], 2, LlrRule::MinSum).is_err());
    }
}
