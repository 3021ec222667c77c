//! Polar code instances, the generator-matrix encoder and the
//! information-set scatter/gather helpers.

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::construction::construction_by_name;
use crate::error::{PolarError, Result};

/// A polar code `P(N, K)` with its frozen set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CodeSpecJson", try_from = "CodeSpecJson")]
pub struct CodeSpec {
    depth: u32,
    len: usize,
    k: usize,
    frozen: Vec<bool>,
    construction: String,
    design_param: f64,
}

impl CodeSpec {
    /// Builds a code from an explicit pattern (`true` = information bit).
    pub fn from_pattern(info: &[bool]) -> Result<Self> {
        let len = info.len();
        let depth = log2_exact(len)?;
        let k = info.iter().filter(|&&b| b).count();
        Ok(Self {
            depth,
            len,
            k,
            frozen: info.iter().map(|&b| !b).collect(),
            construction: "explicit".into(),
            design_param: 0.0,
        })
    }

    /// Parses a `0`/`1` pattern string (`1` = information).
    pub fn from_pattern_str(s: &str) -> Result<Self> {
        let bits = BitVector::parse(s)?;
        Self::from_pattern(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.len as f64
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    /// Information pattern `s` (`true` = information bit).
    pub fn pattern(&self) -> Vec<bool> {
        self.frozen.iter().map(|&f| !f).collect()
    }

    pub fn pattern_string(&self) -> String {
        self.frozen.iter().map(|&f| if f { '0' } else { '1' }).collect()
    }

    pub fn construction(&self) -> &str {
        &self.construction
    }

    pub fn design_param(&self) -> f64 {
        self.design_param
    }

    pub fn info_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.frozen
            .iter()
            .enumerate()
            .filter(|(_, &f)| !f)
            .map(|(i, _)| i)
    }

    /// Frozen mask packed MSB-first (index 0 is the top bit of the
    /// first nibble), rendered as lowercase hex with `ceil(N/4)` digits.
    pub fn frozen_mask_hex(&self) -> String {
        let mut bytes = vec![0u8; self.len.div_ceil(8)];
        for (i, &f) in self.frozen.iter().enumerate() {
            if f {
                bytes[i / 8] |= 0x80 >> (i % 8);
            }
        }
        let mut s = hex::encode(bytes);
        s.truncate(self.len.div_ceil(4));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CodeSpecJson::from(self)).expect("code spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: CodeSpecJson =
            serde_json::from_str(s).map_err(|e| PolarError::Parse(e.to_string()))?;
        raw.try_into()
    }
}

/// Builds `P(N, K)` by keeping the `K` most reliable synthetic channels
/// under `method`. Equal scores freeze the lower index first.
pub fn build_code(n_len: usize, k: usize, method: &str, design_param: f64) -> Result<CodeSpec> {
    let depth = log2_exact(n_len)?;
    if k < 1 || k > n_len {
        return Err(PolarError::InfoCountOutOfRange { k, n: n_len });
    }
    let cons = construction_by_name(method)?;
    let scores = cons.scores(n_len, design_param)?;
    let mut order: Vec<usize> = (0..n_len).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(b.cmp(&a)));
    let mut frozen = vec![true; n_len];
    for &i in &order[..k] {
        frozen[i] = false;
    }
    Ok(CodeSpec {
        depth,
        len: n_len,
        k,
        frozen,
        construction: cons.name().to_string(),
        design_param,
    })
}

fn log2_exact(n: usize) -> Result<u32> {
    if n < 2 || !n.is_power_of_two() {
        return Err(PolarError::NotPowerOfTwo(n));
    }
    Ok(n.trailing_zeros())
}

/// In-place `x = u G^{⊗n}` over GF(2), `G = [[1,0],[1,1]]`, natural order.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, &b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        half *= 2;
    }
}

pub fn encode(code: &CodeSpec, u: &BitVector) -> Result<BitVector> {
    if u.len() != code.len() {
        return Err(PolarError::LengthMismatch {
            expected: code.len(),
            actual: u.len(),
        });
    }
    if let Some(i) = (0..code.len()).find(|&i| code.is_frozen(i) && u[i] != 0) {
        return Err(PolarError::NonzeroFrozen(i));
    }
    let mut x = u.to_vec();
    polar_transform(&mut x);
    Ok(BitVector::new(x).expect("transform keeps bits binary"))
}

pub fn insert_info_bits(code: &CodeSpec, info: &BitVector) -> Result<BitVector> {
    if info.len() != code.k() {
        return Err(PolarError::LengthMismatch {
            expected: code.k(),
            actual: info.len(),
        });
    }
    let mut u = vec![0u8; code.len()];
    for (pos, &b) in code.info_positions().zip(info.iter()) {
        u[pos] = b;
    }
    Ok(BitVector::new(u).expect("scattered bits stay binary"))
}

pub fn extract_info_bits(code: &CodeSpec, u: &[u8]) -> Result<BitVector> {
    if u.len() != code.len() {
        return Err(PolarError::LengthMismatch {
            expected: code.len(),
            actual: u.len(),
        });
    }
    BitVector::new(code.info_positions().map(|i| u[i]).collect())
}

pub(crate) fn bit_reverse(i: usize, depth: u32) -> usize {
    if depth == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - depth)
    }
}

/// Reorders channel values into decoding-tree order
/// (tree position `j` holds channel index `bitrev(j)`).
pub fn to_tree_order<T: Copy>(natural: &[T]) -> Vec<T> {
    let depth = natural.len().trailing_zeros();
    (0..natural.len())
        .map(|j| natural[bit_reverse(j, depth)])
        .collect()
}

/// Inverse of [`to_tree_order`]. Bit reversal is an involution, so the
/// same permutation is applied.
pub fn from_tree_order<T: Copy>(tree: &[T]) -> Vec<T> {
    to_tree_order(tree)
}

/// Re-encodes a message in decoding-tree order: the codeword produced by
/// combining leaves bottom-up, i.e. `bitrev(u G^{⊗n})`.
pub fn tree_encode(u: &[u8]) -> Vec<u8> {
    let mut x = u.to_vec();
    polar_transform(&mut x);
    to_tree_order(&x)
}

#[derive(Serialize, Deserialize)]
struct CodeSpecJson {
    n: u32,
    #[serde(rename = "N")]
    big_n: usize,
    #[serde(rename = "K")]
    k: usize,
    construction: String,
    design_param: f64,
    frozen_mask: String,
    pattern: String,
}

impl From<&CodeSpec> for CodeSpecJson {
    fn from(c: &CodeSpec) -> Self {
        Self {
            n: c.depth,
            big_n: c.len,
            k: c.k,
            construction: c.construction.clone(),
            design_param: c.design_param,
            frozen_mask: c.frozen_mask_hex(),
            pattern: c.pattern_string(),
        }
    }
}

impl From<CodeSpec> for CodeSpecJson {
    fn from(c: CodeSpec) -> Self {
        (&c).into()
    }
}

impl TryFrom<CodeSpecJson> for CodeSpec {
    type Error = PolarError;

    fn try_from(raw: CodeSpecJson) -> Result<Self> {
        let mut code = CodeSpec::from_pattern_str(&raw.pattern)?;
        if code.depth != raw.n || code.len != raw.big_n || code.k != raw.k {
            return Err(PolarError::Parse(
                "n/N/K disagree with the pattern string".into(),
            ));
        }
        if code.frozen_mask_hex() != raw.frozen_mask.to_ascii_lowercase() {
            return Err(PolarError::Parse(
                "frozen_mask disagrees with the pattern string".into(),
            ));
        }
        code.construction = raw.construction;
        code.design_param = raw.design_param;
        Ok(code)
    }
}
