//! Turn-by-turn play of an endgame.
//!
//! A turn is two actions: the defender opens a component, then the controller
//! either takes all of it (and must open next) or hands back the last two
//! boxes of a chain / four of a loop (and stays in control). Individual box
//! captures are not modelled.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Component, Endgame, ModelError};
use crate::oracle::Oracle;
use crate::solver::{self, MoveAdvice, Rule, SolveError};
use crate::Score;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    KeepControl,
    TakeAll,
}

/// The controller's response to an open. `indifferent` marks a tie, where
/// either choice gives the same final margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ControlDecision {
    pub choice: Choice,
    pub indifferent: bool,
}

impl ControlDecision {
    pub fn new(choice: Choice) -> Self {
        ControlDecision {
            choice,
            indifferent: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "camelCase")]
pub enum Phase {
    DefenderToOpen,
    ControllerToDecide { opened: Component },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Action {
    Open { component: Component },
    Decide { choice: Choice },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HistoryEntry {
    pub actor: Player,
    pub action: Action,
    pub delta_a: u128,
    pub delta_b: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("illegal in this phase: expected {expected}")]
    IllegalPhase { expected: &'static str },
    #[error("the game is over")]
    Terminal,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Advice for whoever is to act.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Advice {
    Open(MoveAdvice),
    #[serde(rename_all = "camelCase")]
    Decide {
        decision: ControlDecision,
        /// Value of what is left after the opened component.
        rest_value: Score,
        rule: Rule,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionState {
    pub initial: Endgame,
    pub opener: Player,
    pub remaining: Endgame,
    #[serde(flatten)]
    pub phase: Phase,
    pub score_a: u128,
    pub score_b: u128,
    pub to_act: Player,
    pub history: Vec<HistoryEntry>,
}

impl SessionState {
    pub fn new(g: Endgame, opener: Player) -> Self {
        SessionState {
            initial: g.clone(),
            opener,
            remaining: g,
            phase: Phase::DefenderToOpen,
            score_a: 0,
            score_b: 0,
            to_act: opener,
            history: Vec::new(),
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.remaining.is_empty() && self.phase == Phase::DefenderToOpen
    }

    pub fn score(&self, p: Player) -> u128 {
        match p {
            Player::A => self.score_a,
            Player::B => self.score_b,
        }
    }

    /// `p`'s boxes minus the opponent's.
    pub fn margin(&self, p: Player) -> Score {
        self.score(p) as Score - self.score(p.other()) as Score
    }

    /// Boxes of the component awaiting a decision.
    pub fn pending_boxes(&self) -> u128 {
        match self.phase {
            Phase::DefenderToOpen => 0,
            Phase::ControllerToDecide { opened } => opened.length() as u128,
        }
    }

    pub fn boxes_conserved(&self) -> bool {
        self.score_a + self.score_b + self.remaining.total_boxes() + self.pending_boxes()
            == self.initial.total_boxes()
    }

    pub fn apply_open(&self, c: Component) -> Result<Self, SessionError> {
        if self.phase != Phase::DefenderToOpen {
            return Err(SessionError::IllegalPhase {
                expected: "a decision",
            });
        }
        if self.is_terminal() {
            return Err(SessionError::Terminal);
        }
        let mut next = self.clone();
        next.remaining.remove_one(c)?;
        next.phase = Phase::ControllerToDecide { opened: c };
        next.to_act = self.to_act.other();
        next.history.push(HistoryEntry {
            actor: self.to_act,
            action: Action::Open { component: c },
            delta_a: 0,
            delta_b: 0,
        });
        Ok(next)
    }

    pub fn apply_decision(&self, choice: Choice) -> Result<Self, SessionError> {
        let Phase::ControllerToDecide { opened } = self.phase else {
            return Err(SessionError::IllegalPhase {
                expected: "an open",
            });
        };
        let controller = self.to_act;
        let n = opened.length() as u128;
        let t = opened.kind().handback() as u128;
        let (to_controller, to_defender, next_actor) = match choice {
            Choice::KeepControl => (n - t, t, controller.other()),
            Choice::TakeAll => (n, 0, controller),
        };
        let (delta_a, delta_b) = match controller {
            Player::A => (to_controller, to_defender),
            Player::B => (to_defender, to_controller),
        };
        let mut next = self.clone();
        next.score_a += delta_a;
        next.score_b += delta_b;
        next.phase = Phase::DefenderToOpen;
        next.to_act = next_actor;
        next.history.push(HistoryEntry {
            actor: controller,
            action: Action::Decide { choice },
            delta_a,
            delta_b,
        });
        Ok(next)
    }

    pub fn apply(&self, action: Action) -> Result<Self, SessionError> {
        match action {
            Action::Open { component } => self.apply_open(component),
            Action::Decide { choice } => self.apply_decision(choice),
        }
    }

    /// Rebuilds a state from its starting position and actions.
    pub fn replay(
        g: Endgame,
        opener: Player,
        actions: impl IntoIterator<Item = Action>,
    ) -> Result<Self, SessionError> {
        actions
            .into_iter()
            .try_fold(SessionState::new(g, opener), |s, a| s.apply(a))
    }

    /// Closed-form advice for simple positions, exhaustive search otherwise.
    pub fn advise(&self) -> Result<Advice, SessionError> {
        if self.is_terminal() {
            return Err(SessionError::Terminal);
        }
        let simple = self.remaining.is_simple();
        match self.phase {
            Phase::DefenderToOpen if simple => {
                Ok(Advice::Open(solver::best_open(&self.remaining)?))
            }
            Phase::DefenderToOpen => {
                let mut oracle = Oracle::new();
                let open = oracle
                    .preferred_open(&self.remaining)
                    .expect("non-terminal position has a move");
                let move_value = oracle.move_value(&self.remaining, open).expect("present");
                Ok(Advice::Open(MoveAdvice {
                    open,
                    move_value,
                    rule: Rule::Oracle,
                }))
            }
            Phase::ControllerToDecide { opened } => {
                let (rest_value, rule) = if simple {
                    let r = solver::value_of(&self.remaining)?;
                    let rule = r.trace.last().map(|t| t.rule).unwrap_or(Rule::Empty);
                    (r.value, rule)
                } else {
                    (Oracle::new().value(&self.remaining), Rule::Oracle)
                };
                let decision = solver::decision_for(rest_value, opened.kind());
                Ok(Advice::Decide {
                    decision,
                    rest_value,
                    rule,
                })
            }
        }
    }

    /// Plays the advised action.
    pub fn advised_step(&self) -> Result<Self, SessionError> {
        match self.advise()? {
            Advice::Open(m) => self.apply_open(m.open),
            Advice::Decide { decision, .. } => self.apply_decision(decision.choice),
        }
    }
}

pub fn new_session(g: Endgame, opener: Player) -> SessionState {
    SessionState::new(g, opener)
}

/// Both sides follow the advice until the game ends.
pub fn self_play(g: &Endgame, opener: Player) -> Result<SessionState, SessionError> {
    let mut s = SessionState::new(g.clone(), opener);
    while !s.is_terminal() {
        s = s.advised_step()?;
    }
    Ok(s)
}
