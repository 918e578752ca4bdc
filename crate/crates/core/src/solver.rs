//! Closed-form values and optimal opens for simple loony endgames.
//!
//! Everything here works on an [`EndgameSummary`], so the cost of a query is
//! independent of how many copies of each component the game holds. Where a
//! case needs the value of a subgame (the game minus its 3-chain, minus all
//! its 4-loops, ...) that subgame is evaluated by the specific case body that
//! applies to it; at most three such sub-evaluations happen per query.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cv;
use crate::model::{Component, Endgame, EndgameSummary, Kind, ModelError};
use crate::session::{Choice, ControlDecision};
use crate::Score;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("odd loop present, use the oracle")]
    NotSimple,
    #[error("no move exists in the empty game")]
    EmptyGame,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The case that produced a value or a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Empty,
    Controlled,
    ChainsOnly,
    LoopsNoFourLoops,
    LoopsFourLoops,
    No3OddCv,
    No3EvenCv,
    No3FourLoops,
    One3LoopsRestWorth2,
    One3LoopsNoFourLoops,
    One3LoopsFourLoops,
    One3BigEvenCv,
    One3BigRestWorth2,
    One3BigNoFourLoops,
    One3BigFourLoops,
    Many3EvenCv,
    Many3OddCv,
    OpenSmallestLoopNoChains,
    OpenSmallestChainNoLoops,
    OpenSmallestLoopNo3,
    One3LoopsOpen3,
    One3LoopsOpenLoop,
    One3BigOpen4Loop,
    One3BigOpen3,
    Many3Open4Loop,
    Many3Open3,
    Oracle,
}

impl Rule {
    pub fn label(self) -> &'static str {
        use Rule::*;
        match self {
            Empty => "empty",
            Controlled => "controlled-value",
            ChainsOnly => "chains-only",
            LoopsNoFourLoops => "loops-only/no-4-loops",
            LoopsFourLoops => "loops-only/4-loops",
            No3OddCv => "no-3-chains/odd-cv",
            No3EvenCv => "no-3-chains/even-cv",
            No3FourLoops => "no-3-chains/4-loops",
            One3LoopsRestWorth2 => "one-3-chain+loops/loops-worth-2",
            One3LoopsNoFourLoops => "one-3-chain+loops/no-4-loops",
            One3LoopsFourLoops => "one-3-chain+loops/4-loops",
            One3BigEvenCv => "one-3-chain+big-chain/even-cv",
            One3BigRestWorth2 => "one-3-chain+big-chain/rest-worth-2",
            One3BigNoFourLoops => "one-3-chain+big-chain/no-4-loops",
            One3BigFourLoops => "one-3-chain+big-chain/4-loops",
            Many3EvenCv => "many-3-chains/even-cv",
            Many3OddCv => "many-3-chains/odd-cv",
            OpenSmallestLoopNoChains => "open/no-chains:smallest-loop",
            OpenSmallestChainNoLoops => "open/no-loops:smallest-chain",
            OpenSmallestLoopNo3 => "open/no-3-chains:smallest-loop",
            One3LoopsOpen3 => "open/one-3-chain+loops:3-chain",
            One3LoopsOpenLoop => "open/one-3-chain+loops:smallest-loop",
            One3BigOpen4Loop => "open/one-3-chain+big-chain:4-loop",
            One3BigOpen3 => "open/one-3-chain+big-chain:3-chain",
            Many3Open4Loop => "open/many-3-chains:4-loop",
            Many3Open3 => "open/many-3-chains:3-chain",
            Oracle => "oracle",
        }
    }

    pub const ALL: [Rule; 27] = {
        use Rule::*;
        [
            Empty,
            Controlled,
            ChainsOnly,
            LoopsNoFourLoops,
            LoopsFourLoops,
            No3OddCv,
            No3EvenCv,
            No3FourLoops,
            One3LoopsRestWorth2,
            One3LoopsNoFourLoops,
            One3LoopsFourLoops,
            One3BigEvenCv,
            One3BigRestWorth2,
            One3BigNoFourLoops,
            One3BigFourLoops,
            Many3EvenCv,
            Many3OddCv,
            OpenSmallestLoopNoChains,
            OpenSmallestChainNoLoops,
            OpenSmallestLoopNo3,
            One3LoopsOpen3,
            One3LoopsOpenLoop,
            One3BigOpen4Loop,
            One3BigOpen3,
            Many3Open4Loop,
            Many3Open3,
            Oracle,
        ]
    };

    pub fn from_label(label: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.label() == label)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for Rule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Rule::from_label(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown rule {s:?}")))
    }
}

/// One evaluated (sub)game. `subject` names it relative to the queried game
/// `G`, e.g. `G\3\all-4L` is G without its 3-chain and without its 4-loops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub subject: String,
    pub rule: Rule,
    pub value: Score,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v({}) = {}  [{}]", self.subject, self.value, self.rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueResult {
    pub value: Score,
    /// Every case that fired, innermost subgames first, the queried game last.
    pub trace: Vec<TraceStep>,
    /// Subgames evaluated besides the queried game itself.
    pub restarts: u32,
    /// Primitive steps performed (case tests, controlled values, sub-evaluations).
    pub ops: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MoveAdvice {
    pub open: Component,
    pub move_value: Score,
    pub rule: Rule,
}

type Body = fn(&mut Eval, &EndgameSummary, &str) -> (Rule, Score);

const THREE: Component = Component::new_unchecked(Kind::Chain, 3);
const FOUR_LOOP: Component = Component::new_unchecked(Kind::Loop, 4);
const SIX_LOOP: Component = Component::new_unchecked(Kind::Loop, 6);

#[derive(Default)]
struct Eval {
    trace: Vec<TraceStep>,
    cache: HashMap<EndgameSummary, Score>,
    evaluations: u32,
    ops: u64,
}

fn sub(subject: &str, what: &str) -> String {
    format!("{subject}\\{what}")
}

fn less(s: &EndgameSummary, c: Component) -> EndgameSummary {
    s.without(c)
        .expect("case guard ensures the component is present")
}

impl Eval {
    fn tick(&mut self) {
        self.ops += 1;
    }

    fn cv(&mut self, s: &EndgameSummary) -> Score {
        self.tick();
        cv::cv(s)
    }

    fn eval(&mut self, s: &EndgameSummary, subject: &str, body: Body) -> Score {
        self.tick();
        if let Some(&v) = self.cache.get(s) {
            return v;
        }
        self.evaluations += 1;
        let (rule, value) = body(self, s, subject);
        self.trace.push(TraceStep {
            subject: subject.to_string(),
            rule,
            value,
        });
        self.cache.insert(*s, value);
        value
    }

    fn dispatch(&mut self, s: &EndgameSummary, subject: &str) -> (Rule, Score) {
        self.tick();
        if s.is_empty() {
            return (Rule::Empty, 0);
        }
        let c = self.cv(s);
        if c >= 2 {
            (Rule::Controlled, c)
        } else if !s.has_loops() {
            Self::chains_only(self, s, subject)
        } else if s.three_chain_count == 0 {
            Self::no3(self, s, subject)
        } else if s.three_chain_count == 1 && s.big_chain_count == 0 {
            Self::one3_loops(self, s, subject)
        } else if s.three_chain_count == 1 {
            Self::one3_big(self, s, subject)
        } else {
            Self::many3(self, s, subject)
        }
    }

    fn chains_only(&mut self, s: &EndgameSummary, _: &str) -> (Rule, Score) {
        let c = self.cv(s);
        if c >= 2 {
            (Rule::Controlled, c)
        } else if c >= 1 {
            (Rule::ChainsOnly, c)
        } else {
            (Rule::ChainsOnly, if c.rem_euclid(2) == 1 { 1 } else { 2 })
        }
    }

    fn loops_only(&mut self, s: &EndgameSummary, subject: &str) -> (Rule, Score) {
        if s.is_empty() {
            return (Rule::Empty, 0);
        }
        let c = self.cv(s);
        if c >= 2 {
            return (Rule::Controlled, c);
        }
        let f = s.four_loop_count;
        if f == 0 {
            return (Rule::LoopsNoFourLoops, two_or_four(c));
        }
        let k = self.eval(
            &s.without_four_loops(),
            &sub(subject, "all-4L"),
            Self::loops_only,
        );
        let v = if k.rem_euclid(4) == 2 {
            2
        } else if (k + 4 * (f % 2) as Score).rem_euclid(8) == 0 {
            0
        } else {
            4
        };
        (Rule::LoopsFourLoops, v)
    }

    fn no3(&mut self, s: &EndgameSummary, subject: &str) -> (Rule, Score) {
        if s.is_empty() {
            return (Rule::Empty, 0);
        }
        let c = self.cv(s);
        if c >= 2 {
            return (Rule::Controlled, c);
        }
        let f = s.four_loop_count;
        if f == 0 {
            return if c.rem_euclid(2) == 1 {
                (Rule::No3OddCv, 3)
            } else {
                (Rule::No3EvenCv, two_or_four(c))
            };
        }
        let k = self.eval(&s.without_four_loops(), &sub(subject, "all-4L"), Self::no3);
        self.tick();
        (Rule::No3FourLoops, four_fold(k, f))
    }

    fn one3_loops(&mut self, s: &EndgameSummary, subject: &str) -> (Rule, Score) {
        let c = self.cv(s);
        if c >= 2 {
            return (Rule::Controlled, c);
        }
        let h = self.eval(&less(s, THREE), &sub(subject, "3"), Self::loops_only);
        if h == 2 {
            return (Rule::One3LoopsRestWorth2, 1);
        }
        let f = s.four_loop_count;
        if f == 0 {
            return (Rule::One3LoopsNoFourLoops, 3);
        }
        let m = self.eval(
            &s.without_four_loops(),
            &sub(subject, "all-4L"),
            Self::one3_loops,
        );
        self.tick();
        (Rule::One3LoopsFourLoops, four_fold(m, f))
    }

    fn even_cv_with_three_chains(&mut self, s: &EndgameSummary) -> Score {
        if s.four_loop_count > 0 && self.cv(&less(s, FOUR_LOOP)) == 4 {
            0
        } else {
            2
        }
    }

    fn one3_big(&mut self, s: &EndgameSummary, subject: &str) -> (Rule, Score) {
        let c = self.cv(s);
        if c >= 2 {
            return (Rule::Controlled, c);
        }
        if c.rem_euclid(2) == 0 {
            return (Rule::One3BigEvenCv, self.even_cv_with_three_chains(s));
        }
        let rest = self.eval(&less(s, THREE), &sub(subject, "3"), Self::no3);
        if rest == 2 {
            return (Rule::One3BigRestWorth2, 1);
        }
        let f = s.four_loop_count;
        if f == 0 {
            return (Rule::One3BigNoFourLoops, 3);
        }
        let k = self.eval(
            &s.without_four_loops(),
            &sub(subject, "all-4L"),
            Self::one3_big,
        );
        self.tick();
        (Rule::One3BigFourLoops, four_fold(k, f))
    }

    fn many3(&mut self, s: &EndgameSummary, _: &str) -> (Rule, Score) {
        let c = self.cv(s);
        if c >= 2 {
            (Rule::Controlled, c)
        } else if c.rem_euclid(2) == 0 {
            (Rule::Many3EvenCv, self.even_cv_with_three_chains(s))
        } else {
            (Rule::Many3OddCv, 1)
        }
    }

    fn best_open(
        &mut self,
        s: &EndgameSummary,
        smallest_chain: Option<Component>,
        smallest_loop: Option<Component>,
    ) -> (Component, Rule) {
        self.tick();
        let (chain, lp) = match (smallest_chain, smallest_loop) {
            (None, Some(l)) => return (l, Rule::OpenSmallestLoopNoChains),
            (Some(c), None) => return (c, Rule::OpenSmallestChainNoLoops),
            (Some(c), Some(l)) => (c, l),
            (None, None) => unreachable!("caller rejects the empty game"),
        };
        if s.three_chain_count == 0 {
            return (lp, Rule::OpenSmallestLoopNo3);
        }
        if s.three_chain_count == 1 && s.big_chain_count == 0 {
            let h = less(s, THREE);
            if self.eval(&h, "G\\3", Self::loops_only) == 2 {
                return (chain, Rule::One3LoopsOpen3);
            }
            if lp == SIX_LOOP && self.eval(&less(&h, SIX_LOOP), "G\\3\\6L", Self::loops_only) == 2 {
                return (chain, Rule::One3LoopsOpen3);
            }
            return (lp, Rule::One3LoopsOpenLoop);
        }
        if s.three_chain_count == 1 {
            if s.four_loop_count > 0 && self.cv(s) <= 1 {
                let without_loop = less(s, FOUR_LOOP);
                if self.cv(&without_loop) == 4 {
                    return (FOUR_LOOP, Rule::One3BigOpen4Loop);
                }
                let rest = self.eval(&less(s, THREE), "G\\3", Self::no3);
                if rest == 0 || rest == 4 {
                    return (FOUR_LOOP, Rule::One3BigOpen4Loop);
                }
            }
            return (chain, Rule::One3BigOpen3);
        }
        if s.four_loop_count > 0 {
            let h = less(&less(s, THREE), FOUR_LOOP);
            let with_three = less(s, FOUR_LOOP);
            let with_loop = less(s, THREE);
            if self.cv(&with_three) == 4 || self.cv(&with_loop) == 4 || self.cv(&h) == 4 {
                return (FOUR_LOOP, Rule::Many3Open4Loop);
            }
        }
        (chain, Rule::Many3Open3)
    }

    fn move_value(&mut self, s: &EndgameSummary, c: Component) -> Score {
        let rest = less(s, c);
        let v = self.eval(&rest, &sub("G", &c.to_string()), Self::dispatch);
        let t = c.kind().handback() as Score;
        c.length() as Score - t + (v - t).abs()
    }
}

/// The element of {2, 4} congruent to `c` mod 4 (`c` even).
fn two_or_four(c: Score) -> Score {
    if c.rem_euclid(4) == 0 {
        4
    } else {
        2
    }
}

fn four_fold(w: Score, f: u128) -> Score {
    let d = w.rem_euclid(8);
    if f % 2 == 1 {
        (4 - d).abs()
    } else {
        4 - (4 - d).abs()
    }
}

/// The result of applying `x -> |4 - x|` to `w`, `f` times, in constant time.
/// Requires `w >= 0` and `w - 4f <= 4`.
pub fn iterate_four_fold(w: Score, f: u128) -> Result<Score, SolveError> {
    if w < 0 {
        return Err(SolveError::Precondition("w must be non-negative"));
    }
    if w - 4 * f as Score > 4 {
        return Err(SolveError::Precondition("w - 4f must be at most 4"));
    }
    Ok(four_fold(w, f))
}

fn require(ok: bool, what: &'static str) -> Result<(), SolveError> {
    if ok {
        Ok(())
    } else {
        Err(SolveError::Precondition(what))
    }
}

fn run(s: &EndgameSummary, body: Body) -> Result<ValueResult, SolveError> {
    if !s.is_simple() {
        return Err(SolveError::NotSimple);
    }
    let mut e = Eval::default();
    let value = e.eval(s, "G", body);
    Ok(ValueResult {
        value,
        trace: e.trace,
        restarts: e.evaluations - 1,
        ops: e.ops,
    })
}

/// Value of a simple loony endgame.
pub fn value(s: &EndgameSummary) -> Result<ValueResult, SolveError> {
    run(s, Eval::dispatch)
}

pub fn value_of(g: &Endgame) -> Result<ValueResult, SolveError> {
    value(&g.summary())
}

/// Value of a game made only of chains.
pub fn value_chains_only(s: &EndgameSummary) -> Result<Score, SolveError> {
    require(!s.has_loops(), "no loops")?;
    require(s.has_chains(), "at least one chain")?;
    Ok(run(s, Eval::chains_only)?.value)
}

/// Value of a game made only of (even) loops; the empty game is allowed.
pub fn value_loops_only(s: &EndgameSummary) -> Result<Score, SolveError> {
    require(!s.has_chains(), "no chains")?;
    Ok(run(s, Eval::loops_only)?.value)
}

/// Value of a game with no 3-chains.
pub fn value_no3(s: &EndgameSummary) -> Result<Score, SolveError> {
    require(s.three_chain_count == 0, "no 3-chains")?;
    Ok(run(s, Eval::no3)?.value)
}

/// Value of a single 3-chain plus loops.
pub fn value_one3_loops_only(s: &EndgameSummary) -> Result<Score, SolveError> {
    require(s.three_chain_count == 1, "exactly one 3-chain")?;
    require(s.big_chain_count == 0, "no other chains")?;
    require(s.has_loops(), "at least one loop")?;
    Ok(run(s, Eval::one3_loops)?.value)
}

/// Value of a single 3-chain plus at least one chain of length 4 or more.
pub fn value_one3_with_big_chain(s: &EndgameSummary) -> Result<Score, SolveError> {
    require(s.three_chain_count == 1, "exactly one 3-chain")?;
    require(s.big_chain_count > 0, "a chain of length at least 4")?;
    Ok(run(s, Eval::one3_big)?.value)
}

/// Value of a game with two or more 3-chains.
pub fn value_many3(s: &EndgameSummary) -> Result<Score, SolveError> {
    require(s.three_chain_count >= 2, "at least two 3-chains")?;
    Ok(run(s, Eval::many3)?.value)
}

/// Optimal open from a summary plus the game's smallest chain and loop.
/// Returns the advice and the number of primitive steps it took.
pub fn best_open_metered(
    s: &EndgameSummary,
    smallest_chain: Option<Component>,
    smallest_loop: Option<Component>,
) -> Result<(MoveAdvice, u64), SolveError> {
    if s.is_empty() {
        return Err(SolveError::EmptyGame);
    }
    if !s.is_simple() {
        return Err(SolveError::NotSimple);
    }
    require(
        smallest_chain.is_some() == s.has_chains() && smallest_loop.is_some() == s.has_loops(),
        "smallest components must match the summary",
    )?;
    let mut e = Eval::default();
    let (open, rule) = e.best_open(s, smallest_chain, smallest_loop);
    let move_value = e.move_value(s, open);
    Ok((
        MoveAdvice {
            open,
            move_value,
            rule,
        },
        e.ops,
    ))
}

pub fn best_open(g: &Endgame) -> Result<MoveAdvice, SolveError> {
    best_open_metered(&g.summary(), g.smallest_chain(), g.smallest_loop()).map(|(a, _)| a)
}

/// Value of opening `c` first.
pub fn move_value(g: &Endgame, c: Component) -> Result<Score, SolveError> {
    if !g.contains(c) {
        return Err(ModelError::NotPresent(c).into());
    }
    let s = g.summary();
    if !less(&s, c).is_simple() {
        return Err(SolveError::NotSimple);
    }
    Ok(Eval::default().move_value(&s, c))
}

/// Keep control when the rest is worth more than the hand-back (2 for a
/// chain, 4 for a loop), take everything when it is worth less, and keep
/// control, flagged indifferent, on a tie.
pub fn control_decision(
    rest: &EndgameSummary,
    opened: Kind,
) -> Result<ControlDecision, SolveError> {
    Ok(decision_for(value(rest)?.value, opened))
}

/// The decision given the value of what remains after the open.
pub fn decision_for(rest_value: Score, opened: Kind) -> ControlDecision {
    let t = opened.handback() as Score;
    ControlDecision {
        choice: if rest_value >= t {
            Choice::KeepControl
        } else {
            Choice::TakeAll
        },
        indifferent: rest_value == t,
    }
}
