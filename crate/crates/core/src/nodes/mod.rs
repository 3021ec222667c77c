//! LLR-domain decoders for special nodes and multi-level mergers.
//!
//! Every node class implements [`NodeDecoder`]: it recognises its own
//! frozen/information pattern and decodes a span of tree-order LLRs into
//! the span's partial sums. [`NodeRegistry`] holds one decoder per tag in
//! classification priority order and is what the schedule builder and the
//! fast decoder consult.

mod group_a;
mod group_b;
mod group_c;
mod single;

use std::collections::BTreeSet;
use std::sync::OnceLock;

pub use group_a::{decode_group_a, R0t1RepSpcNode, R0tSpcNode};
pub use group_b::{decode_group_b, rep_chain_message, RepTNode};
pub use group_c::{decode_group_c, RepCNode};
pub use single::{
    decode_r0, decode_r1, decode_rep, decode_rep_spc, decode_spc, R0Node, R1Node, RepNode,
    RepSpcNode, SpcNode,
};

use crate::error::{PolarError, Result};
use crate::kind::NodeTag;
use crate::llr::LlrRule;

/// Smallest merger depth the classifier accepts for multi-level patterns.
pub const MIN_MERGER_DEPTH: u32 = 2;

pub trait NodeDecoder: Send + Sync {
    fn tag(&self) -> NodeTag;

    /// Returns the merger depth `t` when `pattern` (`true` = information
    /// bit) is exactly this node's pattern.
    fn match_pattern(&self, pattern: &[bool]) -> Option<u32>;

    /// Decodes tree-order LLRs of the whole span into `out`.
    fn decode(&self, alpha: &[f64], t: u32, rule: LlrRule, out: &mut [u8]) -> Result<()>;
}

pub struct NodeRegistry {
    decoders: Vec<Box<dyn NodeDecoder>>,
}

impl NodeRegistry {
    /// Empty registry; decoders are consulted in insertion order.
    pub fn new() -> Self {
        Self {
            decoders: Vec::new(),
        }
    }

    pub fn register(&mut self, decoder: Box<dyn NodeDecoder>) {
        self.decoders.retain(|d| d.tag() != decoder.tag());
        self.decoders.push(decoder);
    }

    pub fn with_builtin() -> Self {
        let mut reg = Self::new();
        reg.register(Box::new(R0Node));
        reg.register(Box::new(R1Node));
        reg.register(Box::new(RepNode));
        reg.register(Box::new(SpcNode));
        reg.register(Box::new(R0tSpcNode));
        reg.register(Box::new(R0t1RepSpcNode));
        reg.register(Box::new(RepTNode::spc()));
        reg.register(Box::new(RepTNode::r1()));
        reg.register(Box::new(RepCNode::spc_t()));
        reg.register(Box::new(RepCNode::spc_r1()));
        reg.register(Box::new(RepCNode::r1_t()));
        reg.register(Box::new(RepSpcNode));
        reg
    }

    /// Shared registry with every built-in node class.
    pub fn standard() -> &'static NodeRegistry {
        static REG: OnceLock<NodeRegistry> = OnceLock::new();
        REG.get_or_init(NodeRegistry::with_builtin)
    }

    pub fn get(&self, tag: NodeTag) -> Option<&dyn NodeDecoder> {
        self.decoders
            .iter()
            .find(|d| d.tag() == tag)
            .map(|d| d.as_ref())
    }

    pub fn tags(&self) -> impl Iterator<Item = NodeTag> + '_ {
        self.decoders.iter().map(|d| d.tag())
    }

    /// Most specific enabled class for a subtree pattern, with its depth.
    ///
    /// A pattern that is itself an R0/R1/REP/SPC node is always taken as
    /// such. Otherwise the deepest enabled multi-level merger wins (ties go
    /// to registration order), then REP-SPC. `None` means the node must be
    /// split.
    pub fn classify(&self, pattern: &[bool], enabled: &BTreeSet<NodeTag>) -> Option<(NodeTag, u32)> {
        let is_on = |d: &&Box<dyn NodeDecoder>| enabled.contains(&d.tag());
        for d in self.decoders.iter().filter(|d| d.tag().is_single_level()) {
            if let Some(t) = d.match_pattern(pattern) {
                return is_on(&d).then_some((d.tag(), t));
            }
        }
        let mut best: Option<(NodeTag, u32)> = None;
        for d in self
            .decoders
            .iter()
            .filter(|d| d.tag().is_multi_level())
            .filter(is_on)
        {
            if let Some(t) = d.match_pattern(pattern) {
                if t >= MIN_MERGER_DEPTH && best.is_none_or(|(_, bt)| t > bt) {
                    best = Some((d.tag(), t));
                }
            }
        }
        if best.is_some() {
            return best;
        }
        self.decoders
            .iter()
            .filter(|d| d.tag() == NodeTag::RepSpc)
            .filter(is_on)
            .find_map(|d| d.match_pattern(pattern).map(|t| (d.tag(), t)))
    }
}

impl Default for NodeRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

/// Classifies against every built-in class; GENERIC when nothing matches.
pub fn classify(pattern: &[bool]) -> (NodeTag, u32) {
    let all: BTreeSet<NodeTag> = NodeTag::ALL.into_iter().collect();
    NodeRegistry::standard()
        .classify(pattern, &all)
        .unwrap_or((NodeTag::Generic, 0))
}

// Pattern predicates over information flags (`true` = information).

pub(crate) fn is_r0(p: &[bool]) -> bool {
    !p.is_empty() && p.iter().all(|&b| !b)
}

pub(crate) fn is_r1(p: &[bool]) -> bool {
    !p.is_empty() && p.iter().all(|&b| b)
}

pub(crate) fn is_rep(p: &[bool]) -> bool {
    p.len() >= 2 && p[p.len() - 1] && p[..p.len() - 1].iter().all(|&b| !b)
}

pub(crate) fn is_spc(p: &[bool]) -> bool {
    p.len() >= 2 && !p[0] && p[1..].iter().all(|&b| b)
}

/// True for subtrees that fast-SSC already decodes in one shot. Such a
/// subtree is a leaf of the pruned tree, so merger patterns never look
/// inside it.
pub(crate) fn is_single(p: &[bool]) -> bool {
    is_r0(p) || is_r1(p) || is_rep(p) || is_spc(p)
}

pub(crate) fn is_rep_spc(p: &[bool]) -> bool {
    p.len() == single::REP_SPC_SPAN && {
        let (l, r) = halves(p);
        is_rep(l) && is_spc(r)
    }
}

pub(crate) fn halves<T>(p: &[T]) -> (&[T], &[T]) {
    p.split_at(p.len() / 2)
}

pub(crate) fn check_span(tag: NodeTag, alpha: &[f64], out: &[u8], t: u32, ok: bool) -> Result<()> {
    if !alpha.len().is_power_of_two() || out.len() != alpha.len() || !ok {
        return Err(PolarError::InvalidNode {
            kind: tag.to_string(),
            len: alpha.len(),
            t,
        });
    }
    Ok(())
}

/// Hard decisions with the least reliable position flipped when the
/// parity differs from `parity`. Ties in reliability go to the lowest index.
pub(crate) fn wagner(alpha: &[f64], parity: u8, out: &mut [u8]) {
    let mut p = 0u8;
    let mut j = 0usize;
    let mut best = f64::INFINITY;
    for (i, (&a, o)) in alpha.iter().zip(out.iter_mut()).enumerate() {
        *o = crate::llr::hard_decision(a);
        p ^= *o;
        if a.abs() < best {
            best = a.abs();
            j = i;
        }
    }
    if p != parity {
        out[j] ^= 1;
    }
}
