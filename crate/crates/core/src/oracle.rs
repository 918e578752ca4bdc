//! Exhaustive memoized search over whole-component opens.
//!
//! The defender opens some component; the controller either takes it all and
//! moves next, or takes all but the last two (chain) or four (loop) boxes and
//! forces the defender to open again. Any other capture pattern is dominated
//! by one of those two, so the value of a game is
//!
//! ```text
//! v(empty) = 0
//! v(G)     = min over components C of  |C| - t + |v(G \ C) - t|
//! ```
//!
//! with `t = 2` for chains and `t = 4` for loops. This makes no assumption
//! about loop parity and is the ground truth the closed forms are checked
//! against.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Component, Endgame};
use crate::session::{Choice, ControlDecision};
use crate::Score;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no move exists in the empty game")]
    EmptyGame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveValuation {
    pub component: Component,
    pub value: Score,
}

/// One open in a replayed optimal line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineStep {
    pub opened: Component,
    pub decision: ControlDecision,
    /// Net score so far for the player who did not open first.
    pub net: Score,
}

fn threshold(c: Component) -> Score {
    c.kind().handback() as Score
}

fn open_value(c: Component, rest: Score) -> Score {
    let t = threshold(c);
    c.length() as Score - t + (rest - t).abs()
}

/// Search state. Each oracle owns its memo table; share one across calls to
/// reuse subgame values.
#[derive(Debug, Default)]
pub struct Oracle {
    memo: HashMap<Endgame, Score>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of memoized positions.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn value(&mut self, g: &Endgame) -> Score {
        if g.is_empty() {
            return 0;
        }
        if let Some(&v) = self.memo.get(g) {
            return v;
        }
        let v = g
            .distinct()
            .map(|c| {
                let rest = g.without(c).expect("component taken from the game");
                open_value(c, self.value(&rest))
            })
            .min()
            .expect("non-empty game has a move");
        self.memo.insert(g.clone(), v);
        v
    }

    /// The value of opening each distinct component first.
    pub fn move_values(&mut self, g: &Endgame) -> Result<Vec<MoveValuation>, OracleError> {
        if g.is_empty() {
            return Err(OracleError::EmptyGame);
        }
        Ok(g.distinct()
            .map(|c| {
                let rest = g.without(c).expect("component taken from the game");
                MoveValuation {
                    component: c,
                    value: open_value(c, self.value(&rest)),
                }
            })
            .collect())
    }

    pub fn move_value(&mut self, g: &Endgame, c: Component) -> Option<Score> {
        let rest = g.without(c).ok()?;
        Some(open_value(c, self.value(&rest)))
    }

    /// Every distinct component whose opening is optimal.
    pub fn optimal_opens(&mut self, g: &Endgame) -> Result<BTreeSet<Component>, OracleError> {
        let values = self.move_values(g)?;
        let best = values.iter().map(|m| m.value).min().expect("non-empty");
        Ok(values
            .into_iter()
            .filter(|m| m.value == best)
            .map(|m| m.component)
            .collect())
    }

    /// The open the defender picks in a replayed line: the shortest optimal
    /// component, chains before loops at equal length.
    pub fn preferred_open(&mut self, g: &Endgame) -> Result<Component, OracleError> {
        let opens = self.optimal_opens(g)?;
        Ok(*opens
            .iter()
            .min_by_key(|c| (c.length(), c.kind()))
            .expect("argmin set is non-empty"))
    }

    /// The controller's best response after `opened` is opened with `rest`
    /// left over. Ties keep control.
    pub fn decision(&mut self, rest: &Endgame, opened: Component) -> ControlDecision {
        let v = self.value(rest);
        let t = threshold(opened);
        ControlDecision {
            choice: if v >= t {
                Choice::KeepControl
            } else {
                Choice::TakeAll
            },
            indifferent: v == t,
        }
    }

    /// A complete optimal play-through under the fixed tie policies.
    pub fn line(&mut self, g: &Endgame) -> Vec<LineStep> {
        let mut g = g.clone();
        let mut steps = Vec::new();
        let mut net: Score = 0;
        // true while the player who did not open first is in control
        let mut second_controls = true;
        while !g.is_empty() {
            let c = self.preferred_open(&g).expect("non-empty");
            g.remove_one(c).expect("chosen from the game");
            let decision = self.decision(&g, c);
            let n = c.length() as Score;
            let t = threshold(c);
            let gain = match decision.choice {
                Choice::KeepControl => n - 2 * t,
                Choice::TakeAll => n,
            };
            net += if second_controls { gain } else { -gain };
            if decision.choice == Choice::TakeAll {
                second_controls = !second_controls;
            }
            steps.push(LineStep {
                opened: c,
                decision,
                net,
            });
        }
        steps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse;

    fn value(pos: &str) -> Score {
        Oracle::new().value(&parse(pos).unwrap())
    }

    fn comp(tok: &str) -> Component {
        tok.parse().unwrap()
    }

    #[test]
    fn single_chain_is_worth_its_length() {
        for n in 3..20 {
            assert_eq!(value(&n.to_string()), n as Score);
        }
    }

    #[test]
    fn hand_expanded_values() {
        assert_eq!(value(""), 0);
        assert_eq!(value("3+3"), 2);
        assert_eq!(value("2*3+4+6L"), 2);
        assert_eq!(value("4+2*7L"), 4);
        assert_eq!(value("4+7L"), 3);
        assert_eq!(value("2*7L"), 6);
    }

    #[test]
    fn move_values_match_known_positions() {
        let mut o = Oracle::new();
        let mv = o.move_values(&parse("3+3*6L").unwrap()).unwrap();
        assert_eq!(
            mv,
            vec![
                MoveValuation {
                    component: comp("3"),
                    value: 1
                },
                MoveValuation {
                    component: comp("6L"),
                    value: 3
                },
            ]
        );
        let g = parse("4+2*4L+2*7L").unwrap();
        assert_eq!(o.move_value(&g, comp("4")), Some(2));
        assert_eq!(o.move_value(&g, comp("4L")), Some(4));
        assert_eq!(
            o.move_values(&parse("3").unwrap()).unwrap(),
            vec![MoveValuation {
                component: comp("3"),
                value: 3
            }]
        );
        assert_eq!(o.move_values(&Endgame::new()), Err(OracleError::EmptyGame));
    }

    #[test]
    fn argmin_sets() {
        let mut o = Oracle::new();
        let set = |o: &mut Oracle, p: &str| -> Vec<String> {
            o.optimal_opens(&parse(p).unwrap())
                .unwrap()
                .iter()
                .map(|c| c.to_string())
                .collect()
        };
        assert_eq!(set(&mut o, "3+3*6L"), ["3"]);
        // opening the chain leaves the loop worth 6 to the controller
        assert_eq!(set(&mut o, "4+6L"), ["6L"]);
        assert_eq!(set(&mut o, "4L+6L"), ["4L", "6L"]);
        assert_eq!(set(&mut o, "5+7"), ["5", "7"]);
        assert_eq!(
            o.optimal_opens(&Endgame::new()),
            Err(OracleError::EmptyGame)
        );
    }

    #[test]
    fn lines() {
        let mut o = Oracle::new();
        assert!(o.line(&Endgame::new()).is_empty());
        let line = o.line(&parse("6L").unwrap());
        assert_eq!(line.len(), 1);
        assert_eq!(line[0].opened, comp("6L"));
        assert_eq!(line[0].decision.choice, Choice::TakeAll);
        assert_eq!(line[0].net, 6);

        let line = o.line(&parse("2*3+4+6L").unwrap());
        assert_eq!(line.len(), 4);
        assert_eq!(line.last().unwrap().net, 2);
        assert_eq!(line[0].opened, comp("3"));
        assert_eq!(line[0].decision.choice, Choice::TakeAll);
        assert_eq!(line[1].opened, comp("3"));
        assert_eq!(
            line[1].decision,
            ControlDecision {
                choice: Choice::KeepControl,
                indifferent: true
            }
        );
    }

    #[test]
    fn memo_is_consistent() {
        let g = parse("3+4+5+4L+6L").unwrap();
        let mut fresh = Oracle::new();
        let a = fresh.value(&g);
        assert_eq!(fresh.value(&g), a);
        let mut warmed = Oracle::new();
        warmed.value(&(g.clone() + parse("3+8L").unwrap()));
        assert_eq!(warmed.value(&g), a);
    }
}
