//! The analysis record shared by the command line and the HTTP service.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cv::CvBreakdown;
use crate::model::{Component, Endgame};
use crate::oracle::Oracle;
use crate::solver::{self, Rule, SolveError, TraceStep};
use crate::Score;

/// Largest game (in boxes) the exhaustive search is run on by default.
pub const DEFAULT_ORACLE_CAP: u128 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Analysis {
    pub position: String,
    pub value: Score,
    pub cv: Score,
    pub fcv: Score,
    pub tb: Score,
    pub advised_open: Option<Component>,
    pub rule: Option<Rule>,
    pub move_value: Option<Score>,
    pub trace: Vec<TraceStep>,
    #[serde(default)]
    pub oracle_fallback: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzeError {
    #[error("position has {boxes} boxes; exhaustive search is capped at {cap}")]
    TooLargeForOracle { boxes: u128, cap: u128 },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Something that computes values and advice for simple endgames. The
/// closed-form solver is the production implementation; tests substitute
/// deliberately broken ones.
pub trait Engine {
    fn value(&self, g: &Endgame) -> Result<solver::ValueResult, SolveError>;
    fn best_open(&self, g: &Endgame) -> Result<solver::MoveAdvice, SolveError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl Engine for ClosedForm {
    fn value(&self, g: &Endgame) -> Result<solver::ValueResult, SolveError> {
        solver::value_of(g)
    }

    fn best_open(&self, g: &Endgame) -> Result<solver::MoveAdvice, SolveError> {
        solver::best_open(g)
    }
}

/// Analyses `g` with `engine`, falling back to exhaustive search for odd
/// loops when the game is within `oracle_cap` boxes.
pub fn analyze_with(
    engine: &dyn Engine,
    g: &Endgame,
    oracle_cap: u128,
) -> Result<Analysis, AnalyzeError> {
    let b = CvBreakdown::of(&g.summary());
    let mut a = Analysis {
        position: g.to_string(),
        value: 0,
        cv: b.cv,
        fcv: b.fcv,
        tb: b.tb,
        advised_open: None,
        rule: None,
        move_value: None,
        trace: Vec::new(),
        oracle_fallback: false,
        oracle_agrees: None,
    };
    if g.is_simple() {
        let r = engine.value(g)?;
        a.value = r.value;
        a.trace = r.trace;
        if !g.is_empty() {
            let m = engine.best_open(g)?;
            a.advised_open = Some(m.open);
            a.rule = Some(m.rule);
            a.move_value = Some(m.move_value);
        }
        return Ok(a);
    }
    let boxes = g.total_boxes();
    if boxes > oracle_cap {
        return Err(AnalyzeError::TooLargeForOracle {
            boxes,
            cap: oracle_cap,
        });
    }
    let mut oracle = Oracle::new();
    a.value = oracle.value(g);
    a.trace = vec![TraceStep {
        subject: "G".into(),
        rule: Rule::Oracle,
        value: a.value,
    }];
    let open = oracle.preferred_open(g).expect("odd loop means non-empty");
    a.advised_open = Some(open);
    a.rule = Some(Rule::Oracle);
    a.move_value = oracle.move_value(g, open);
    a.oracle_fallback = true;
    Ok(a)
}

pub fn analyze(g: &Endgame) -> Result<Analysis, AnalyzeError> {
    analyze_with(&ClosedForm, g, DEFAULT_ORACLE_CAP)
}

/// Checks an analysis of a simple game against exhaustive search: same
/// value, and the advised open is among the optimal ones.
pub fn oracle_agrees(a: &Analysis, g: &Endgame, oracle: &mut Oracle) -> bool {
    if oracle.value(g) != a.value {
        return false;
    }
    match a.advised_open {
        Some(c) => oracle
            .optimal_opens(g)
            .map(|s| s.contains(&c))
            .unwrap_or(false),
        None => g.is_empty(),
    }
}
