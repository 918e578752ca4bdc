//! Exhaustive cross-checking of an engine against the oracle.

use serde::Serialize;

use crate::model::{Component, Endgame};
use crate::oracle::Oracle;
use crate::report::Engine;
use crate::Score;

/// Which games to enumerate: every multiset of at most `max_components`
/// components drawn from chains `3..=chain_max` and even loops
/// `4..=loop_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Bounds {
    pub max_components: u32,
    pub chain_max: u64,
    pub loop_max: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_components: 5,
            chain_max: 8,
            loop_max: 10,
        }
    }
}

impl Bounds {
    pub fn alphabet(&self) -> Vec<Component> {
        let chains = (3..=self.chain_max).map(|n| Component::chain(n).expect("n >= 3"));
        let loops = (4..=self.loop_max)
            .step_by(2)
            .map(|n| Component::loop_of(n).expect("n >= 4"));
        chains.chain(loops).collect()
    }
}

/// All games within `bounds`, the empty game included, in a fixed order.
pub fn enumerate(bounds: &Bounds) -> Vec<Endgame> {
    fn go(alpha: &[Component], from: usize, left: u32, cur: &mut Endgame, out: &mut Vec<Endgame>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in from..alpha.len() {
            cur.insert(alpha[i], 1);
            go(alpha, i, left - 1, cur, out);
            cur.remove_one(alpha[i]).expect("just inserted");
        }
    }
    let alpha = bounds.alphabet();
    let mut out = Vec::new();
    go(
        &alpha,
        0,
        bounds.max_components,
        &mut Endgame::new(),
        &mut out,
    );
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Mismatch {
    pub position: String,
    pub oracle_value: Score,
    pub engine_value: Option<Score>,
    pub advised_open: Option<Component>,
    pub optimal_opens: Vec<Component>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub bounds: Bounds,
    pub cases: u64,
    pub agreed: u64,
    /// Disagreements, smallest game first.
    pub mismatches: Vec<Mismatch>,
}

impl CheckReport {
    pub fn all_agree(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn minimal_counterexample(&self) -> Option<&Mismatch> {
        self.mismatches.first()
    }
}

fn compare(engine: &dyn Engine, g: &Endgame, oracle: &mut Oracle) -> Option<Mismatch> {
    let oracle_value = oracle.value(g);
    let mut m = Mismatch {
        position: g.to_string(),
        oracle_value,
        engine_value: None,
        advised_open: None,
        optimal_opens: Vec::new(),
        detail: String::new(),
    };
    match engine.value(g) {
        Ok(r) if r.value == oracle_value => {}
        Ok(r) => {
            m.engine_value = Some(r.value);
            m.detail = "value differs".into();
            return Some(m);
        }
        Err(e) => {
            m.detail = e.to_string();
            return Some(m);
        }
    }
    m.engine_value = Some(oracle_value);
    if g.is_empty() {
        return None;
    }
    let optimal = oracle.optimal_opens(g).expect("non-empty");
    match engine.best_open(g) {
        Ok(a) if optimal.contains(&a.open) => None,
        Ok(a) => {
            m.advised_open = Some(a.open);
            m.optimal_opens = optimal.into_iter().collect();
            m.detail = format!("advised open is not optimal (rule {})", a.rule);
            Some(m)
        }
        Err(e) => {
            m.optimal_opens = optimal.into_iter().collect();
            m.detail = e.to_string();
            Some(m)
        }
    }
}

/// Compares `engine` with the oracle on every game within `bounds`.
pub fn cross_check(engine: &dyn Engine, bounds: &Bounds) -> CheckReport {
    let mut oracle = Oracle::new();
    let games = enumerate(bounds);
    let mut mismatches: Vec<(u128, u128, Mismatch)> = games
        .iter()
        .filter_map(|g| compare(engine, g, &mut oracle).map(|m| (g.total_boxes(), g.len(), m)))
        .collect();
    mismatches.sort_by(|a, b| (a.0, a.1, &a.2.position).cmp(&(b.0, b.1, &b.2.position)));
    let cases = games.len() as u64;
    CheckReport {
        bounds: *bounds,
        cases,
        agreed: cases - mismatches.len() as u64,
        mismatches: mismatches.into_iter().map(|(_, _, m)| m).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::ClosedForm;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn enumeration_counts_multisets() {
        let b = Bounds {
            max_components: 3,
            chain_max: 5,
            loop_max: 6,
        };
        // 5 symbols, multisets of size 0..=3
        let expected: u64 = (0..=3).map(|k| binom(5 + k - 1, k)).sum();
        let games = enumerate(&b);
        assert_eq!(games.len() as u64, expected);
        let distinct: std::collections::HashSet<_> = games.iter().collect();
        assert_eq!(distinct.len(), games.len());
    }

    #[test]
    fn zero_components_is_one_case() {
        let b = Bounds {
            max_components: 0,
            chain_max: 8,
            loop_max: 10,
        };
        let r = cross_check(&ClosedForm, &b);
        assert_eq!((r.cases, r.agreed), (1, 1));
        assert!(r.all_agree());
    }

    #[test]
    fn small_bounds_agree() {
        let b = Bounds {
            max_components: 3,
            chain_max: 6,
            loop_max: 8,
        };
        let r = cross_check(&ClosedForm, &b);
        assert!(r.all_agree(), "{:?}", r.minimal_counterexample());
    }
}
