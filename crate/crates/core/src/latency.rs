//! Time-step latency accounting over decode schedules.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::CodeSpec;
use crate::error::{PolarError, Result};
use crate::kind::NodeTag;
use crate::schedule::{build_schedule, DecodeSchedule, MergerConfig, Op};

/// Whole time steps charged per schedule step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub f: u64,
    pub g: u64,
    pub combine: u64,
    pub nodes: BTreeMap<NodeTag, u64>,
}

impl CostModel {
    pub fn node_cost(&self, tag: NodeTag) -> Result<u64> {
        self.nodes
            .get(&tag)
            .copied()
            .ok_or_else(|| PolarError::Unpriced(tag.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| PolarError::Parse(format!("cost model: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PolarError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cost model serializes")
    }

    /// Every entry multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Self {
        Self {
            f: self.f * k,
            g: self.g * k,
            combine: self.combine * k,
            nodes: self.nodes.iter().map(|(t, c)| (*t, c * k)).collect(),
        }
    }
}

impl Default for CostModel {
    fn default() -> Self {
        default_cost_model()
    }
}

pub fn default_cost_model() -> CostModel {
    use NodeTag::*;
    let nodes = [
        (R0, 1),
        (R1, 1),
        (Rep, 2),
        (Spc, 3),
        (RepSpc, 4),
        (R0tSpc, 4),
        (R0t1RepSpc, 4),
        (RepTSpc, 9),
        (RepTR1, 8),
        (RepSpcT, 7),
        (RepSpcR1T1, 7),
        (RepR1T, 7),
        // An unpruned leaf is one hard decision.
        (Generic, 1),
    ];
    CostModel {
        f: 1,
        g: 1,
        combine: 0,
        nodes: nodes.into_iter().collect(),
    }
}

pub fn schedule_latency(sched: &DecodeSchedule, cm: &CostModel) -> Result<u64> {
    sched.steps.iter().try_fold(0u64, |acc, s| {
        Ok(acc
            + match s.op {
                Op::F => cm.f,
                Op::G => cm.g,
                Op::Combine => cm.combine,
                Op::Node(k) => cm.node_cost(k.tag)?,
            })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyRow {
    pub config: String,
    pub enabled: Vec<NodeTag>,
    pub steps: u64,
    /// Percent reduction against the first row; `None` on the first row.
    pub reduction: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyReport {
    #[serde(rename = "N")]
    pub n_len: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub construction: String,
    pub design_param: f64,
    pub rows: Vec<LatencyRow>,
}

pub fn reduction_percent(baseline: u64, steps: u64) -> i64 {
    if baseline == 0 {
        return 0;
    }
    (100.0 * (baseline as f64 - steps as f64) / baseline as f64).round() as i64
}

/// Prices each configuration; the first one is the baseline.
pub fn latency_report(
    code: &CodeSpec,
    configs: &[MergerConfig],
    cm: &CostModel,
) -> Result<LatencyReport> {
    if configs.is_empty() {
        return Err(PolarError::InvalidSimConfig("no merger configurations".into()));
    }
    let mut rows = Vec::with_capacity(configs.len());
    let mut baseline = 0;
    for (i, cfg) in configs.iter().enumerate() {
        let steps = schedule_latency(&build_schedule(code, cfg), cm)?;
        if i == 0 {
            baseline = steps;
        }
        rows.push(LatencyRow {
            config: cfg.label(),
            enabled: cfg.enabled.iter().copied().collect(),
            steps,
            reduction: (i > 0).then(|| reduction_percent(baseline, steps)),
        });
    }
    Ok(LatencyReport {
        n_len: code.len(),
        k: code.k(),
        construction: code.construction().to_string(),
        design_param: code.design_param(),
        rows,
    })
}

impl LatencyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| PolarError::Parse(e.to_string()))
    }

    pub fn steps_of(&self, config: &str) -> Option<u64> {
        self.rows.iter().find(|r| r.config == config).map(|r| r.steps)
    }

    /// Aligned text table with one row per configuration.
    pub fn table(&self) -> String {
        let w = self
            .rows
            .iter()
            .map(|r| r.config.len())
            .chain(["config".len()])
            .max()
            .unwrap_or(6);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "N={} K={} construction={}({})",
            self.n_len, self.k, self.construction, self.design_param
        );
        let _ = writeln!(out, "{:<w$}  {:>10}  {:>9}", "config", "time steps", "reduction");
        for r in &self.rows {
            let red = r
                .reduction
                .map(|p| format!("{p}%"))
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{:<w$}  {:>10}  {:>9}", r.config, r.steps, red);
        }
        out
    }
}
