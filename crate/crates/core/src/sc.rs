//! Reference successive-cancellation decoder.
//!
//! Full depth-first traversal of the decoding tree, one leaf at a time,
//! with one LLR buffer and one left-codeword buffer per level. Channel
//! LLRs arrive in natural order and are permuted into tree order, where a
//! node combines entries `2i` and `2i+1`.

use crate::code::{from_tree_order, to_tree_order, CodeSpec};
use crate::decoder::{DecodeOutput, FrameDecoder};
use crate::error::{PolarError, Result};
use crate::llr::{combine_into, f_into, g_into, hard_decision, LlrRule};

pub struct ScDecoder {
    code: CodeSpec,
    rule: LlrRule,
    /// `alpha[l]` holds the LLRs entering the current node at level `l`.
    alpha: Vec<Vec<f64>>,
    /// `left[l]` holds the codeword of the last finished left child at level `l`.
    left: Vec<Vec<u8>>,
    /// `up[l]` holds the codeword being propagated upward at level `l`.
    up: Vec<Vec<u8>>,
}

impl ScDecoder {
    pub fn new(code: CodeSpec, rule: LlrRule) -> Self {
        let depth = code.depth() as usize;
        let alpha = (0..=depth).map(|l| vec![0.0; 1 << l]).collect();
        let left = (0..=depth).map(|l| vec![0u8; 1 << l]).collect();
        let up = (0..=depth).map(|l| vec![0u8; 1 << l]).collect();
        Self {
            code,
            rule,
            alpha,
            left,
            up,
        }
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    /// Decodes tree-order LLRs and returns the tree-order root codeword.
    fn run(&mut self, tree_alpha: &[f64]) -> Vec<u8> {
        let depth = self.code.depth() as usize;
        let n = self.code.len();
        self.alpha[depth].copy_from_slice(tree_alpha);

        for leaf in 0..n {
            // The node entered first on the path to this leaf is a right
            // child at level `tz`; everything below it is reached by `f`.
            let start = if leaf == 0 {
                depth
            } else {
                let tz = leaf.trailing_zeros() as usize;
                let (lo, hi) = self.alpha.split_at_mut(tz + 1);
                g_into(&hi[0], &self.left[tz], &mut lo[tz]);
                tz
            };
            for l in (0..start).rev() {
                let (lo, hi) = self.alpha.split_at_mut(l + 1);
                f_into(&hi[0], self.rule, &mut lo[l]);
            }

            let bit = if self.code.is_frozen(leaf) {
                0
            } else {
                hard_decision(self.alpha[0][0])
            };
            self.up[0][0] = bit;

            let mut l = 0;
            while l < depth {
                if (leaf >> l) & 1 == 0 {
                    let (dst, src) = (&mut self.left[l], &self.up[l]);
                    dst.copy_from_slice(src);
                    break;
                }
                let (lo, hi) = self.up.split_at_mut(l + 1);
                combine_into(&self.left[l], &lo[l], &mut hi[0]);
                l += 1;
            }
        }
        self.up[depth].clone()
    }
}

impl FrameDecoder for ScDecoder {
    fn name(&self) -> &str {
        "sc"
    }

    fn decode(&mut self, alpha: &[f64]) -> Result<DecodeOutput> {
        if alpha.len() != self.code.len() {
            return Err(PolarError::LengthMismatch {
                expected: self.code.len(),
                actual: alpha.len(),
            });
        }
        let root = self.run(&to_tree_order(alpha));
        Ok(DecodeOutput::from_codeword(&self.code, from_tree_order(&root)))
    }
}

/// One-shot SC decode.
pub fn decode_sc(code: &CodeSpec, alpha: &[f64], rule: LlrRule) -> Result<DecodeOutput> {
    ScDecoder::new(code.clone(), rule).decode(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{BitVector, LlrVector};
    use crate::code::{build_code, encode, insert_info_bits};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noiseless_all_zero() {
        let code = build_code(16, 8, "bhattacharyya", 0.5).unwrap();
        let out = decode_sc(&code, &[4.0; 16], LlrRule::MinSum).unwrap();
        assert_eq!(out.u_hat, BitVector::zeros(8));
        assert_eq!(out.x_hat, BitVector::zeros(16));
    }

    #[test]
    fn n2_hand_trace() {
        let code = CodeSpec::from_pattern_str("01").unwrap();
        let out = decode_sc(&code, &[-1.0, 0.5], LlrRule::MinSum).unwrap();
        assert_eq!(&*out.u_hat, &[1]);
        assert_eq!(&*out.x_hat, &[1, 1]);
    }

    #[test]
    fn length_mismatch() {
        let code = build_code(8, 4, "bhattacharyya", 0.5).unwrap();
        assert!(matches!(
            decode_sc(&code, &[1.0; 4], LlrRule::MinSum),
            Err(PolarError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn noiseless_exhaustive_small_codes() {
        for n in [2usize, 4, 8, 16] {
            for k in 1..=n {
                let code = build_code(n, k, "bhattacharyya", 0.5).unwrap();
                let mut dec = ScDecoder::new(code.clone(), LlrRule::MinSum);
                for m in 0..(1u64 << k.min(12)) {
                    let info: Vec<u8> = (0..k).map(|j| ((m >> (j % 12)) & 1) as u8).collect();
                    let u = insert_info_bits(&code, &BitVector::new(info.clone()).unwrap()).unwrap();
                    let x = encode(&code, &u).unwrap();
                    let out = dec.decode(&LlrVector::from_codeword(&x, 4.0)).unwrap();
                    assert_eq!(out.x_hat, x);
                    assert_eq!(&*out.u_hat, &info[..]);
                }
            }
        }
    }

    #[test]
    fn noiseless_random_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let code = build_code(1024, 512, "bhattacharyya", 0.5).unwrap();
        let mut dec = ScDecoder::new(code.clone(), LlrRule::Exact);
        for _ in 0..20 {
            let info: Vec<u8> = (0..512).map(|_| rng.random_range(0..2)).collect();
            let u = insert_info_bits(&code, &BitVector::new(info).unwrap()).unwrap();
            let x = encode(&code, &u).unwrap();
            assert_eq!(dec.decode(&LlrVector::from_codeword(&x, 4.0)).unwrap().x_hat, x);
        }
    }

    #[test]
    fn ml_equivalence_n2_k1() {
        // Code {00, 11}; ML picks the sign of alpha0 + alpha1.
        let code = CodeSpec::from_pattern_str("01").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let a = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
            let metric = |c: [u8; 2]| -> f64 {
                c.iter()
                    .zip(a)
                    .map(|(&b, l)| if b == 0 { l / 2.0 } else { -l / 2.0 })
                    .sum()
            };
            let ml = if metric([0, 0]) >= metric([1, 1]) { 0 } else { 1 };
            let out = decode_sc(&code, &a, LlrRule::Exact).unwrap();
            assert_eq!(out.u_hat[0], ml);
        }
    }

    #[test]
    fn re_encoding_consistency_noisy() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let code = build_code(64, 20, "bhattacharyya", 0.5).unwrap();
        let mut dec = ScDecoder::new(code.clone(), LlrRule::MinSum);
        for _ in 0..500 {
            let a: Vec<f64> = (0..64).map(|_| rng.random_range(-3.0..4.0)).collect();
            let out = dec.decode(&a).unwrap();
            let u = insert_info_bits(&code, &out.u_hat).unwrap();
            assert_eq!(encode(&code, &u).unwrap(), out.x_hat);
        }
    }
}
