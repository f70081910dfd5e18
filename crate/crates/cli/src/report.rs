//! JSON reports. Rationals are always `"p"` or `"p/q"` strings.

use serde::Serialize;

use selfishness::analysis::{DeviationRecord, LevelResult};
use selfishness::game::{Game, JointStrategy};
use selfishness::rational::{render, Rational};

use crate::document::GameDocument;

#[derive(Debug, Clone, Serialize)]
pub struct DeviationReport {
    pub player: String,
    pub from: Vec<String>,
    pub to: String,
    pub payoff_gain: String,
    pub welfare_drop: String,
    pub appeal_factor: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    /// `zero`, `finite` or `infinite`.
    pub kind: &'static str,
    /// The level as printed by the `level` command.
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<DeviationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub game: GameDocument,
    pub nash_equilibria: Vec<Vec<String>>,
    pub social_optima: Vec<Vec<String>>,
    pub stable_social_optima: Vec<Vec<String>>,
    pub level: LevelReport,
    pub price_of_stability: Option<String>,
    pub price_of_anarchy: Option<String>,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize)]
pub struct DynamicsReport {
    pub profiles: usize,
    pub improvement_edges: usize,
    pub sinks: Vec<Vec<String>>,
    pub finite_improvement_property: bool,
    pub weakly_acyclic: bool,
    pub potential_certificate: bool,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub alpha: String,
    pub price_of_stability: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub timings: Timings,
}

pub fn labels(game: &Game, s: &JointStrategy) -> Vec<String> {
    game.label_of(s).into_iter().map(str::to_owned).collect()
}

pub fn label_list(game: &Game, profiles: &[JointStrategy]) -> Vec<Vec<String>> {
    profiles.iter().map(|s| labels(game, s)).collect()
}

pub fn optional(value: Option<Rational>) -> Option<String> {
    value.as_ref().map(render)
}

fn deviation(game: &Game, names: &[String], d: &DeviationRecord) -> DeviationReport {
    DeviationReport {
        player: names[d.player].clone(),
        from: labels(game, &d.from),
        to: game.labels(d.player)[d.to_strategy].clone(),
        payoff_gain: render(&d.payoff_gain),
        welfare_drop: render(&d.welfare_drop),
        appeal_factor: render(&d.appeal_factor),
    }
}

pub fn level_report(game: &Game, names: &[String], level: &LevelResult) -> LevelReport {
    let value = level.to_string();
    match level {
        LevelResult::Zero { optimum } => LevelReport {
            kind: "zero",
            value,
            optimum: Some(labels(game, optimum)),
            deviation: None,
            reason: None,
        },
        LevelResult::Finite { optimum, deviation: d, .. } => LevelReport {
            kind: "finite",
            value,
            optimum: Some(labels(game, optimum)),
            deviation: Some(deviation(game, names, d)),
            reason: None,
        },
        LevelResult::Infinite(_) => LevelReport {
            kind: "infinite",
            value,
            optimum: None,
            deviation: None,
            reason: Some("no stable social optimum"),
        },
    }
}

pub fn render_report<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
}
