//! Serializable command outputs. Every rational is a `num/den` string, so
//! reports parse back to equal values.

use serde::{Deserialize, Serialize};

use crate::limit::{ConeVerdict, MatchVerdict, Monotonicity, MomentSeq};
use crate::rational::{serde_str, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    pub source: String,
    pub cone: ConeVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRow {
    #[serde(rename = "K")]
    pub size: usize,
    pub ones: u64,
    #[serde(with = "serde_str")]
    pub weight: Rational,
    pub weight_decimal_12: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinettiReport {
    pub source: String,
    pub cone: ConeVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentSeq>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monotonicity: Option<Monotonicity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<String>,
    #[serde(rename = "match", default, skip_serializing_if = "Option::is_none")]
    pub matched: Option<MatchVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentRow {
    #[serde(rename = "K")]
    pub size: usize,
    #[serde(with = "serde_str")]
    pub moment: Rational,
    pub moment_decimal_12: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "K")]
    pub size: usize,
    #[serde(with = "serde_str")]
    pub grid_point: Rational,
    #[serde(with = "serde_str")]
    pub weight: Rational,
    pub weight_decimal_12: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub source: String,
    pub cone: ConeVerdict,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergeomRow {
    #[serde(rename = "N")]
    pub deletions: u64,
    pub ell: u64,
    #[serde(with = "serde_str")]
    pub tv: Rational,
    pub tv_decimal_12: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergeomReport {
    #[serde(rename = "K")]
    pub size: u64,
    #[serde(with = "serde_str")]
    pub p: Rational,
    pub strictly_decreasing: bool,
    pub rows: Vec<HypergeomRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SwapVerdict {
    Exchangeable,
    NotExchangeable {
        outcome: String,
        state: String,
        #[serde(with = "serde_str")]
        weight: Rational,
        swapped: String,
        #[serde(with = "serde_str")]
        swapped_weight: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateCheck {
    pub state: String,
    pub verdict: SwapVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeReport {
    pub source: String,
    pub depth: usize,
    pub states_checked: usize,
    pub verdict: SwapVerdict,
}

/// Flat CSV form of one state's check; witness columns are empty when the
/// state passes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCsvRow {
    pub state: String,
    pub exchangeable: bool,
    pub outcome: String,
    pub weight: String,
    pub swapped: String,
    pub swapped_weight: String,
}

impl From<&StateCheck> for StateCsvRow {
    fn from(s: &StateCheck) -> Self {
        match &s.verdict {
            SwapVerdict::Exchangeable => StateCsvRow {
                state: s.state.clone(),
                exchangeable: true,
                outcome: String::new(),
                weight: String::new(),
                swapped: String::new(),
                swapped_weight: String::new(),
            },
            SwapVerdict::NotExchangeable {
                outcome,
                weight,
                swapped,
                swapped_weight,
                ..
            } => StateCsvRow {
                state: s.state.clone(),
                exchangeable: false,
                outcome: outcome.clone(),
                weight: crate::rational::format_rational(weight),
                swapped: swapped.clone(),
                swapped_weight: crate::rational::format_rational(swapped_weight),
            },
        }
    }
}
