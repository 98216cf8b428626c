//! Serialized bounds report.

use qsd_core::bounds::{
    BoundsReport, Bracket, CheckStatus, ExactValue, Extremum, LowerBounds, OrderingFlag,
    UpperBounds,
};
use qsd_core::tolerance::ToleranceSet;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "qsd";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero: f64,
    pub hermitian: f64,
    pub psd: f64,
    pub reconstruction: f64,
    pub fidelity: f64,
    pub commute: f64,
    pub certificate: f64,
    pub equiprobable: f64,
}

impl From<ToleranceSet> for Tolerances {
    fn from(t: ToleranceSet) -> Self {
        Self {
            zero: t.zero,
            hermitian: t.hermitian,
            psd: t.psd,
            reconstruction: t.reconstruction,
            fidelity: t.fidelity,
            commute: t.commute,
            certificate: t.certificate,
            equiprobable: t.equiprobable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lower {
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "L2_clamped")]
    pub l2_clamped: f64,
    #[serde(rename = "L2_was_clamped")]
    pub l2_was_clamped: bool,
    #[serde(rename = "L3")]
    pub l3: f64,
    #[serde(rename = "L1_new")]
    pub l1_new: f64,
    #[serde(rename = "L2_new")]
    pub l2_new: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Upper {
    #[serde(rename = "Q2")]
    pub q2: f64,
    #[serde(rename = "Q3")]
    pub q3: f64,
    #[serde(rename = "Q4")]
    pub q4: f64,
    #[serde(rename = "Q5")]
    pub q5: f64,
    #[serde(rename = "Q_new")]
    pub q_new: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketJson {
    pub low: f64,
    pub high: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactJson {
    pub value: f64,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagJson {
    pub relation: String,
    pub asserted: bool,
    /// `holds`, `violated` or `n/a`.
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TieJson {
    pub index: usize,
    pub tied: Vec<usize>,
}

impl From<&Extremum> for TieJson {
    fn from(e: &Extremum) -> Self {
        Self {
            index: e.index,
            tied: e.tied.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ties {
    #[serde(rename = "L1_new_argmax")]
    pub l1_new_argmax: TieJson,
    #[serde(rename = "Q4_argmin")]
    pub q4_argmin: TieJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub trace_distances: Vec<Vec<f64>>,
    pub state_distances: Vec<Vec<f64>>,
    pub positive_parts: Vec<Vec<f64>>,
    pub fidelities: Vec<Vec<f64>>,
}

/// JSON document written by `qsd bounds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: String,
    pub version: String,
    /// SHA-256 of the input file bytes, lowercase hex.
    pub input_digest: String,
    pub tolerances: Tolerances,
    pub r: usize,
    pub dim: usize,
    pub priors: Vec<f64>,
    pub equiprobable: bool,
    pub lower: Lower,
    pub upper: Upper,
    pub bracket: BracketJson,
    pub exact: Option<ExactJson>,
    pub pair_sum: f64,
    pub root_trace: f64,
    pub tables: Tables,
    pub flags: Vec<FlagJson>,
    pub ties: Ties,
    #[serde(rename = "L1_new_via_trace_norms")]
    pub l1_new_via_trace_norms: f64,
    #[serde(rename = "Q4_via_trace_norms")]
    pub q4_via_trace_norms: f64,
}

pub fn status_str(status: CheckStatus) -> &'static str {
    match status {
        CheckStatus::Holds => "holds",
        CheckStatus::Violated => "violated",
        CheckStatus::NotApplicable => "n/a",
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl From<&LowerBounds> for Lower {
    fn from(l: &LowerBounds) -> Self {
        Self {
            l1: l.l1,
            l2: l.l2,
            l2_clamped: l.l2_clamped,
            l2_was_clamped: l.l2_was_clamped,
            l3: l.l3,
            l1_new: l.l1_new,
            l2_new: l.l2_new,
        }
    }
}

impl From<&UpperBounds> for Upper {
    fn from(u: &UpperBounds) -> Self {
        Self {
            q2: u.q2,
            q3: u.q3,
            q4: u.q4,
            q5: u.q5,
            q_new: u.q_new,
        }
    }
}

impl From<Bracket> for BracketJson {
    fn from(b: Bracket) -> Self {
        Self {
            low: b.low,
            high: b.high,
            width: b.width(),
        }
    }
}

impl From<ExactValue> for ExactJson {
    fn from(x: ExactValue) -> Self {
        Self {
            value: x.value,
            method: x.method.as_str().into(),
        }
    }
}

impl From<&OrderingFlag> for FlagJson {
    fn from(f: &OrderingFlag) -> Self {
        Self {
            relation: f.relation.into(),
            asserted: f.asserted,
            status: status_str(f.status).into(),
        }
    }
}

impl ReportFile {
    pub fn new(report: &BoundsReport, input: &[u8], tolerances: ToleranceSet) -> Self {
        Self {
            tool: TOOL.into(),
            version: VERSION.into(),
            input_digest: sha256_hex(input),
            tolerances: tolerances.into(),
            r: report.r,
            dim: report.dim,
            priors: report.priors.clone(),
            equiprobable: report.equiprobable,
            lower: (&report.lower).into(),
            upper: (&report.upper).into(),
            bracket: report.bracket.into(),
            exact: report.exact.map(Into::into),
            pair_sum: report.pair_sum,
            root_trace: report.root_trace,
            tables: Tables {
                trace_distances: report.table.trace_distances.clone(),
                state_distances: report.table.state_distances.clone(),
                positive_parts: report.table.positive_parts.clone(),
                fidelities: report.table.fidelities.clone(),
            },
            flags: report.flags.iter().map(Into::into).collect(),
            ties: Ties {
                l1_new_argmax: (&report.ties.l1_new).into(),
                q4_argmin: (&report.ties.q4).into(),
            },
            l1_new_via_trace_norms: report.l1_new_via_trace_norms,
            q4_via_trace_norms: report.q4_via_trace_norms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
