//! Node and merger classes that can appear in a pruned decoding tree.

use serde::{Deserialize, Serialize};

use crate::error::PolarError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeTag {
    #[serde(rename = "R0")]
    R0,
    #[serde(rename = "R1")]
    R1,
    #[serde(rename = "REP")]
    Rep,
    #[serde(rename = "SPC")]
    Spc,
    #[serde(rename = "REP-SPC")]
    RepSpc,
    /// Pattern (a): `t` R0 left siblings above an SPC leaf.
    #[serde(rename = "R0tSPC")]
    R0tSpc,
    /// Pattern (b): `t-1` R0 left siblings above a REP-SPC merge.
    #[serde(rename = "R0t1REPSPC")]
    R0t1RepSpc,
    /// Pattern (c): `t` REP left children down to an SPC leaf.
    #[serde(rename = "REPtSPC")]
    RepTSpc,
    /// Pattern (d): `t` REP left children down to an R1 leaf.
    #[serde(rename = "REPtR1")]
    RepTR1,
    /// Pattern (e): leftmost REP leaf, every right child an SPC node.
    #[serde(rename = "REPSPCt")]
    RepSpcT,
    /// Pattern (f): leftmost REP leaf, SPC sibling, R1 right children above.
    #[serde(rename = "REPSPCR1t1")]
    RepSpcR1T1,
    /// Pattern (g): leftmost REP leaf, every right child an R1 node.
    #[serde(rename = "REPR1t")]
    RepR1T,
    #[serde(rename = "GENERIC")]
    Generic,
}

impl NodeTag {
    pub const ALL: [NodeTag; 13] = [
        NodeTag::R0,
        NodeTag::R1,
        NodeTag::Rep,
        NodeTag::Spc,
        NodeTag::RepSpc,
        NodeTag::R0tSpc,
        NodeTag::R0t1RepSpc,
        NodeTag::RepTSpc,
        NodeTag::RepTR1,
        NodeTag::RepSpcT,
        NodeTag::RepSpcR1T1,
        NodeTag::RepR1T,
        NodeTag::Generic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeTag::R0 => "R0",
            NodeTag::R1 => "R1",
            NodeTag::Rep => "REP",
            NodeTag::Spc => "SPC",
            NodeTag::RepSpc => "REP-SPC",
            NodeTag::R0tSpc => "R0tSPC",
            NodeTag::R0t1RepSpc => "R0t1REPSPC",
            NodeTag::RepTSpc => "REPtSPC",
            NodeTag::RepTR1 => "REPtR1",
            NodeTag::RepSpcT => "REPSPCt",
            NodeTag::RepSpcR1T1 => "REPSPCR1t1",
            NodeTag::RepR1T => "REPR1t",
            NodeTag::Generic => "GENERIC",
        }
    }

    pub fn is_single_level(self) -> bool {
        matches!(self, NodeTag::R0 | NodeTag::R1 | NodeTag::Rep | NodeTag::Spc)
    }

    pub fn is_multi_level(self) -> bool {
        !self.is_single_level() && !matches!(self, NodeTag::RepSpc | NodeTag::Generic)
    }

    /// Mergers whose decoders reproduce sequential fast-SSC decisions exactly.
    pub fn is_lossless(self) -> bool {
        !matches!(
            self,
            NodeTag::RepTSpc | NodeTag::RepTR1 | NodeTag::RepSpcT | NodeTag::RepSpcR1T1
        )
    }
}

impl std::fmt::Display for NodeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NodeTag {
    type Err = PolarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let want = s.trim();
        NodeTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str().eq_ignore_ascii_case(want))
            .ok_or_else(|| PolarError::UnknownTag(s.to_string()))
    }
}

/// A node invocation: its class, the tree level `λ` of its root and the
/// merger depth `t = L - l₀` (0 for single-level nodes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeKind {
    pub tag: NodeTag,
    pub level: u32,
    pub depth_t: u32,
}

impl NodeKind {
    pub fn span(&self) -> usize {
        1 << self.level
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for tag in NodeTag::ALL {
            assert_eq!(tag.as_str().parse::<NodeTag>().unwrap(), tag);
            let json = serde_json::to_string(&tag).unwrap();
            assert_eq!(json, format!("\"{}\"", tag.as_str()));
        }
        assert!("REPx".parse::<NodeTag>().is_err());
        assert_eq!("rep-spc".parse::<NodeTag>().unwrap(), NodeTag::RepSpc);
    }

    #[test]
    fn groups() {
        let multi: Vec<_> = NodeTag::ALL.iter().filter(|t| t.is_multi_level()).collect();
        assert_eq!(multi.len(), 7);
        assert!(NodeTag::RepR1T.is_lossless());
        assert!(!NodeTag::RepTSpc.is_lossless());
    }
}
