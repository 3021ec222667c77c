//! Single-level special nodes and the REP-SPC merge.

use super::{check_span, is_r0, is_r1, is_rep, is_rep_spc, is_spc, wagner, NodeDecoder};
use crate::bits::BitVector;
use crate::error::{PolarError, Result};
use crate::kind::NodeTag;
use crate::llr::{f_llr, g_llr, hard_decision, tree_sum, LlrRule};

pub(crate) const REP_SPC_SPAN: usize = 8;

pub struct R0Node;
pub struct R1Node;
pub struct RepNode;
pub struct SpcNode;
pub struct RepSpcNode;

impl NodeDecoder for R0Node {
    fn tag(&self) -> NodeTag {
        NodeTag::R0
    }

    fn match_pattern(&self, p: &[bool]) -> Option<u32> {
        is_r0(p).then_some(0)
    }

    fn decode(&self, alpha: &[f64], t: u32, _: LlrRule, out: &mut [u8]) -> Result<()> {
        check_span(self.tag(), alpha, out, t, true)?;
        out.fill(0);
        Ok(())
    }
}

impl NodeDecoder for R1Node {
    fn tag(&self) -> NodeTag {
        NodeTag::R1
    }

    fn match_pattern(&self, p: &[bool]) -> Option<u32> {
        is_r1(p).then_some(0)
    }

    fn decode(&self, alpha: &[f64], t: u32, _: LlrRule, out: &mut [u8]) -> Result<()> {
        check_span(self.tag(), alpha, out, t, true)?;
        for (o, &a) in out.iter_mut().zip(alpha) {
            *o = hard_decision(a);
        }
        Ok(())
    }
}

impl NodeDecoder for RepNode {
    fn tag(&self) -> NodeTag {
        NodeTag::Rep
    }

    fn match_pattern(&self, p: &[bool]) -> Option<u32> {
        is_rep(p).then_some(0)
    }

    fn decode(&self, alpha: &[f64], t: u32, _: LlrRule, out: &mut [u8]) -> Result<()> {
        check_span(self.tag(), alpha, out, t, true)?;
        out.fill(hard_decision(tree_sum(alpha)));
        Ok(())
    }
}

impl NodeDecoder for SpcNode {
    fn tag(&self) -> NodeTag {
        NodeTag::Spc
    }

    fn match_pattern(&self, p: &[bool]) -> Option<u32> {
        is_spc(p).then_some(0)
    }

    fn decode(&self, alpha: &[f64], t: u32, _: LlrRule, out: &mut [u8]) -> Result<()> {
        check_span(self.tag(), alpha, out, t, alpha.len() >= 2)?;
        wagner(alpha, 0, out);
        Ok(())
    }
}

impl NodeDecoder for RepSpcNode {
    fn tag(&self) -> NodeTag {
        NodeTag::RepSpc
    }

    fn match_pattern(&self, p: &[bool]) -> Option<u32> {
        is_rep_spc(p).then_some(0)
    }

    /// Two SPC decoders run on the right-child LLRs for both values of the
    /// REP bit; the REP decision selects one of them.
    fn decode(&self, alpha: &[f64], t: u32, rule: LlrRule, out: &mut [u8]) -> Result<()> {
        check_span(self.tag(), alpha, out, t, alpha.len() == REP_SPC_SPAN)?;
        let half = alpha.len() / 2;
        let left: Vec<f64> = (0..half)
            .map(|i| f_llr(alpha[2 * i], alpha[2 * i + 1], rule))
            .collect();
        let q = hard_decision(tree_sum(&left));

        let mut spc = [[0u8; REP_SPC_SPAN / 2]; 2];
        for (hyp, cw) in spc.iter_mut().enumerate() {
            let right: Vec<f64> = (0..half)
                .map(|i| g_llr(alpha[2 * i], alpha[2 * i + 1], hyp as u8))
                .collect();
            wagner(&right, 0, cw);
        }
        let chosen = &spc[usize::from(q)];
        for i in 0..half {
            out[2 * i] = q ^ chosen[i];
            out[2 * i + 1] = chosen[i];
        }
        Ok(())
    }
}

fn run(node: &dyn NodeDecoder, alpha: &[f64]) -> Result<BitVector> {
    let mut out = vec![0u8; alpha.len()];
    node.decode(alpha, 0, LlrRule::MinSum, &mut out)?;
    BitVector::new(out)
}

pub fn decode_r0(len: usize) -> BitVector {
    BitVector::zeros(len)
}

pub fn decode_r1(alpha: &[f64]) -> BitVector {
    BitVector::new(alpha.iter().map(|&a| hard_decision(a)).collect()).expect("hard decisions")
}

pub fn decode_rep(alpha: &[f64]) -> Result<BitVector> {
    if alpha.is_empty() {
        return Err(PolarError::InvalidNode {
            kind: "REP".into(),
            len: 0,
            t: 0,
        });
    }
    run(&RepNode, alpha)
}

pub fn decode_spc(alpha: &[f64]) -> Result<BitVector> {
    run(&SpcNode, alpha)
}

pub fn decode_rep_spc(alpha: &[f64], rule: LlrRule) -> Result<BitVector> {
    let mut out = vec![0u8; alpha.len()];
    RepSpcNode.decode(alpha, 0, rule, &mut out)?;
    BitVector::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    #[test]
    fn r0_r1_examples() {
        assert_eq!(decode_r0(4), b("0000"));
        assert_eq!(decode_r0(1), b("0"));
        let mut out = [1u8; 2];
        R0Node
            .decode(&[-1.0, -2.0], 0, LlrRule::MinSum, &mut out)
            .unwrap();
        assert_eq!(out, [0, 0]);
        assert_eq!(decode_r1(&[1.0, -2.0]), b("01"));
        assert_eq!(decode_r1(&[0.0]), b("0"));
        assert_eq!(decode_r1(&[3.0, 0.1, 7.0, 2.0]), b("0000"));
    }

    #[test]
    fn rep_examples() {
        assert_eq!(decode_rep(&[1.0, -2.0, 0.5, 0.3]).unwrap(), b("1111"));
        assert_eq!(decode_rep(&[1.0, 2.0, 0.5, 0.3]).unwrap(), b("0000"));
        assert!(decode_rep(&[]).is_err());
    }

    #[test]
    fn spc_examples() {
        assert_eq!(decode_spc(&[0.5, -1.0, 2.0, -3.0]).unwrap(), b("0101"));
        assert_eq!(decode_spc(&[0.5, 1.0, 2.0, -3.0]).unwrap(), b("1001"));
        assert!(decode_spc(&[0.5]).is_err());
    }

    #[test]
    fn rep_spc_length_checked() {
        assert!(decode_rep_spc(&[1.0; 4], LlrRule::MinSum).is_err());
        assert_eq!(decode_rep_spc(&[4.0; 8], LlrRule::MinSum).unwrap(), BitVector::zeros(8));
    }
}
