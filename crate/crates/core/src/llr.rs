//! Scalar LLR kernels shared by every decoder.

use serde::{Deserialize, Serialize};

use crate::error::{PolarError, Result};

/// Check-node combination rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LlrRule {
    Exact,
    #[default]
    MinSum,
}

impl std::str::FromStr for LlrRule {
    type Err = PolarError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "min-sum" | "minsum" => Ok(Self::MinSum),
            other => Err(PolarError::Parse(format!("unknown LLR rule `{other}`"))),
        }
    }
}

impl std::fmt::Display for LlrRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::MinSum => "min-sum",
        })
    }
}

/// Largest magnitude allowed for the tanh product before `atanh`.
pub const TANH_CLAMP: f64 = 1.0 - 1e-12;

/// Left-child (boxplus) combination.
#[inline]
pub fn f_llr(a: f64, b: f64, rule: LlrRule) -> f64 {
    match rule {
        LlrRule::MinSum => {
            let m = a.abs().min(b.abs());
            if (a < 0.0) != (b < 0.0) {
                -m
            } else {
                m
            }
        }
        LlrRule::Exact => {
            let p = ((a / 2.0).tanh() * (b / 2.0).tanh()).clamp(-TANH_CLAMP, TANH_CLAMP);
            2.0 * p.atanh()
        }
    }
}

/// Right-child combination given the left child's hard bit.
#[inline]
pub fn g_llr(a: f64, b: f64, bit: u8) -> f64 {
    a * (1.0 - 2.0 * f64::from(bit)) + b
}

/// Binary quantizer: 0 for `x >= 0`, 1 otherwise.
#[inline]
pub fn hard_decision(x: f64) -> u8 {
    u8::from(x < 0.0)
}

/// Merges left and right child codewords into the parent codeword:
/// even positions carry `l ^ r`, odd positions carry `r`.
pub fn combine(beta_l: &[u8], beta_r: &[u8]) -> Result<Vec<u8>> {
    if beta_l.len() != beta_r.len() {
        return Err(PolarError::LengthMismatch {
            expected: beta_l.len(),
            actual: beta_r.len(),
        });
    }
    let mut out = vec![0; 2 * beta_l.len()];
    combine_into(beta_l, beta_r, &mut out);
    Ok(out)
}

#[inline]
pub(crate) fn combine_into(beta_l: &[u8], beta_r: &[u8], out: &mut [u8]) {
    for (i, (&l, &r)) in beta_l.iter().zip(beta_r).enumerate() {
        out[2 * i] = l ^ r;
        out[2 * i + 1] = r;
    }
}

#[inline]
pub(crate) fn f_into(alpha: &[f64], rule: LlrRule, out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = f_llr(alpha[2 * i], alpha[2 * i + 1], rule);
    }
}

#[inline]
pub(crate) fn g_into(alpha: &[f64], beta_l: &[u8], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = g_llr(alpha[2 * i], alpha[2 * i + 1], beta_l[i]);
    }
}

/// One `g` step with an all-zero left codeword: `v[2i] + v[2i+1]`.
pub(crate) fn fold_pairs(v: &[f64]) -> Vec<f64> {
    v.chunks_exact(2).map(|p| g_llr(p[0], p[1], 0)).collect()
}

/// Sum of all entries in the same pairwise order an SC traversal uses
/// when every left sibling is frozen.
pub(crate) fn tree_sum(v: &[f64]) -> f64 {
    let mut cur = v.to_vec();
    while cur.len() > 1 {
        cur = fold_pairs(&cur);
    }
    cur[0]
}

/// Boxplus of all entries, reduced pairwise in tree order.
pub(crate) fn tree_boxplus(v: &[f64], rule: LlrRule) -> f64 {
    let mut cur = v.to_vec();
    while cur.len() > 1 {
        cur = cur
            .chunks_exact(2)
            .map(|p| f_llr(p[0], p[1], rule))
            .collect();
    }
    cur[0]
}
