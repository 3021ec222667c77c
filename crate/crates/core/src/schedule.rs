//! Pruned decoding-tree schedules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::CodeSpec;
use crate::error::{PolarError, Result};
use crate::kind::{NodeKind, NodeTag};
use crate::nodes::NodeRegistry;

const FAST_SSC: [NodeTag; 4] = [NodeTag::R0, NodeTag::R1, NodeTag::Rep, NodeTag::Spc];
const LOSSLESS: [NodeTag; 3] = [NodeTag::R0tSpc, NodeTag::R0t1RepSpc, NodeTag::RepR1T];
const LOSSY: [NodeTag; 4] = [
    NodeTag::RepTSpc,
    NodeTag::RepTR1,
    NodeTag::RepSpcT,
    NodeTag::RepSpcR1T1,
];

/// Named bundles accepted by [`MergerConfig::parse`].
pub const BUNDLE_NAMES: [&str; 4] = ["none", "fast-ssc", "lossless", "all"];

/// The node classes the scheduler may prune into.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MergerConfig {
    pub enabled: BTreeSet<NodeTag>,
    /// Smallest span a non-leaf node needs before it may be pruned.
    pub min_node_size: usize,
}

impl MergerConfig {
    pub fn new(enabled: impl IntoIterator<Item = NodeTag>) -> Self {
        Self {
            enabled: enabled
                .into_iter()
                .filter(|t| *t != NodeTag::Generic)
                .collect(),
            min_node_size: 1,
        }
    }

    pub fn none() -> Self {
        Self::new([])
    }

    pub fn fast_ssc() -> Self {
        Self::new(FAST_SSC)
    }

    pub fn lossless() -> Self {
        Self::new(FAST_SSC.into_iter().chain(LOSSLESS))
    }

    pub fn all() -> Self {
        Self::new(FAST_SSC.into_iter().chain(LOSSLESS).chain(LOSSY))
    }

    pub fn with_min_node_size(mut self, size: usize) -> Self {
        self.min_node_size = size.max(1);
        self
    }

    pub fn bundle(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "none" => Some(Self::none()),
            "fast-ssc" | "fastssc" => Some(Self::fast_ssc()),
            "lossless" => Some(Self::lossless()),
            "all" => Some(Self::all()),
            _ => None,
        }
    }

    /// Parses a bundle name, a tag, or a `+`/`,` separated union of both,
    /// e.g. `fast-ssc+REP-SPC` or `R0,R1,REP`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut enabled = BTreeSet::new();
        let mut any = false;
        for item in spec.split(['+', ',']).map(str::trim) {
            if item.is_empty() {
                continue;
            }
            any = true;
            if let Some(b) = Self::bundle(item) {
                enabled.extend(b.enabled);
            } else {
                match item.parse::<NodeTag>() {
                    Ok(NodeTag::Generic) | Err(_) => {
                        return Err(PolarError::UnknownMergerSet(item.to_string()))
                    }
                    Ok(tag) => {
                        enabled.insert(tag);
                    }
                }
            }
        }
        if !any {
            return Err(PolarError::UnknownMergerSet(spec.to_string()));
        }
        Ok(Self::new(enabled))
    }

    pub fn is_enabled(&self, tag: NodeTag) -> bool {
        self.enabled.contains(&tag)
    }

    /// Short display name: a bundle name when the set is one.
    pub fn label(&self) -> String {
        for name in BUNDLE_NAMES {
            let b = Self::bundle(name).expect("bundle");
            if b.enabled == self.enabled {
                return name.to_string();
            }
        }
        self.enabled
            .iter()
            .map(|t| t.as_str())
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl Default for MergerConfig {
    fn default() -> Self {
        Self::fast_ssc()
    }
}

impl FromStr for MergerConfig {
    type Err = PolarError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for MergerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    /// Left-child LLRs of the node at `level`.
    F,
    /// Right-child LLRs of the node at `level`.
    G,
    /// Partial sums of the node at `level` from its two children.
    Combine,
    /// One-shot decoding of the whole node.
    Node(NodeKind),
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::F => "F",
            Op::G => "G",
            Op::Combine => "COMBINE",
            Op::Node(_) => "NODE",
        }
    }
}

/// One schedule entry. `offset` is the index of the node's first leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub op: Op,
    pub level: u32,
    pub offset: usize,
}

impl Step {
    pub fn node_kind(&self) -> Option<NodeKind> {
        match self.op {
            Op::Node(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    op: String,
    level: u32,
    offset: usize,
    kind: Option<NodeTag>,
    t: Option<u32>,
}

impl Serialize for Step {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let k = self.node_kind();
        StepJson {
            op: self.op.name().to_string(),
            level: self.level,
            offset: self.offset,
            kind: k.map(|k| k.tag),
            t: k.map(|k| k.depth_t),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Step {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let j = StepJson::deserialize(d)?;
        let op = match (j.op.as_str(), j.kind) {
            ("F", None) => Op::F,
            ("G", None) => Op::G,
            ("COMBINE", None) => Op::Combine,
            ("NODE", Some(tag)) => Op::Node(NodeKind {
                tag,
                level: j.level,
                depth_t: j.t.unwrap_or(0),
            }),
            (op, _) => return Err(D::Error::custom(format!("bad step op `{op}`"))),
        };
        Ok(Step {
            op,
            level: j.level,
            offset: j.offset,
        })
    }
}

/// Depth-first schedule of a pruned decoding tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeSchedule {
    pub len: usize,
    /// Information flags of the code the schedule was built for.
    pub pattern: Vec<bool>,
    pub steps: Vec<Step>,
    pub merger_config: MergerConfig,
}

impl DecodeSchedule {
    pub fn depth(&self) -> u32 {
        self.len.trailing_zeros()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeKind, usize)> + '_ {
        self.steps
            .iter()
            .filter_map(|s| s.node_kind().map(|k| (k, s.offset)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| PolarError::Parse(e.to_string()))
    }

    /// Checks that NODE spans tile `[0, len)` in order and that every step
    /// sits inside the tree.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(PolarError::ScheduleMismatch(m));
        if !self.len.is_power_of_two() || self.pattern.len() != self.len {
            return bad("length".into());
        }
        let depth = self.depth();
        let mut next = 0usize;
        for s in &self.steps {
            if s.level > depth || s.offset % (1 << s.level) != 0 || s.offset >= self.len {
                return bad(format!("step {s:?} outside the tree"));
            }
            if let Op::Node(k) = s.op {
                if k.level != s.level || s.offset != next {
                    return bad(format!("node at offset {} out of order", s.offset));
                }
                next += k.span();
            } else if s.level == 0 {
                return bad("tree op at a leaf".into());
            }
        }
        if next != self.len {
            return bad(format!("nodes cover {next} of {} positions", self.len));
        }
        Ok(())
    }
}

/// Greedy top-down pruning: a node whose class is enabled is decoded in
/// one shot, anything else is split with F / G / COMBINE.
pub fn build_schedule(code: &CodeSpec, cfg: &MergerConfig) -> DecodeSchedule {
    build_schedule_with(code, cfg, NodeRegistry::standard())
}

pub fn build_schedule_with(
    code: &CodeSpec,
    cfg: &MergerConfig,
    registry: &NodeRegistry,
) -> DecodeSchedule {
    let pattern = code.pattern();
    let mut steps = Vec::new();
    visit(&pattern, code.depth(), 0, cfg, registry, &mut steps);
    DecodeSchedule {
        len: code.len(),
        pattern,
        steps,
        merger_config: cfg.clone(),
    }
}

fn visit(
    pattern: &[bool],
    level: u32,
    offset: usize,
    cfg: &MergerConfig,
    registry: &NodeRegistry,
    steps: &mut Vec<Step>,
) {
    let span = 1usize << level;
    let sub = &pattern[offset..offset + span];
    let hit = if span >= cfg.min_node_size || level == 0 {
        registry.classify(sub, &cfg.enabled)
    } else {
        None
    };
    let node = match (hit, level) {
        (Some((tag, t)), _) => Some((tag, t)),
        (None, 0) => Some((NodeTag::Generic, 0)),
        _ => None,
    };
    if let Some((tag, depth_t)) = node {
        steps.push(Step {
            op: Op::Node(NodeKind {
                tag,
                level,
                depth_t,
            }),
            level,
            offset,
        });
        return;
    }
    let step = |op| Step { op, level, offset };
    steps.push(step(Op::F));
    visit(pattern, level - 1, offset, cfg, registry, steps);
    steps.push(step(Op::G));
    visit(pattern, level - 1, offset + span / 2, cfg, registry, steps);
    steps.push(step(Op::Combine));
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleStats {
    pub steps: usize,
    pub f: usize,
    pub g: usize,
    pub combine: usize,
    pub nodes: usize,
    /// NODE steps per class.
    pub histogram: BTreeMap<NodeTag, usize>,
    /// Codeword positions covered per class.
    pub spans: BTreeMap<NodeTag, usize>,
}

pub fn schedule_stats(sched: &DecodeSchedule) -> ScheduleStats {
    let mut st = ScheduleStats {
        steps: sched.steps.len(),
        ..Default::default()
    };
    for s in &sched.steps {
        match s.op {
            Op::F => st.f += 1,
            Op::G => st.g += 1,
            Op::Combine => st.combine += 1,
            Op::Node(k) => {
                st.nodes += 1;
                *st.histogram.entry(k.tag).or_default() += 1;
                *st.spans.entry(k.tag).or_default() += k.span();
            }
        }
    }
    st
}
