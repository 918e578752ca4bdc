//! Value-preserving merges.
//!
//! Chains of length at least 4 can be swapped for one chain of length
//! `4 + sum(c - 4)`, and loops of length at least 8 for one loop of length
//! `8 + sum(l - 8)`, without changing the value of the game or which of the
//! untouched components are optimal to open. 3-chains, 4-loops and 6-loops
//! have no such identity and are left alone.

use serde::Serialize;

use crate::model::{Component, Endgame, Kind};

/// A set of components replaced by a single one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Merge {
    /// Original components with multiplicities, in canonical order.
    pub merged: Vec<(Component, u64)>,
    pub into: Component,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedForm {
    pub original: Endgame,
    pub reduced: Endgame,
    pub mapping: Vec<Merge>,
}

impl ReducedForm {
    /// A component of the original game standing for `c` in the reduced one.
    /// Any member of a merge will do; the shortest is returned.
    pub fn to_original(&self, c: Component) -> Component {
        self.mapping
            .iter()
            .find(|m| m.into == c)
            .map(|m| m.merged[0].0)
            .unwrap_or(c)
    }
}

fn merge(g: &Endgame, kind: Kind, floor: u64) -> Option<(Endgame, Merge)> {
    let merged: Vec<(Component, u64)> = g
        .counts()
        .filter(|(c, _)| c.kind() == kind && c.length() >= floor)
        .collect();
    let copies: u128 = merged.iter().map(|&(_, n)| n as u128).sum();
    if copies < 2 {
        return None;
    }
    let excess: u128 = merged
        .iter()
        .map(|&(c, n)| (c.length() - floor) as u128 * n as u128)
        .sum();
    // a merged length beyond u64 stays unmerged
    let length = u64::try_from(floor as u128 + excess).ok()?;
    let into = Component::new(kind, length).expect("merged length is at least the floor");
    let mut reduced = Endgame::new();
    for (c, n) in g.counts() {
        if !(c.kind() == kind && c.length() >= floor) {
            reduced.insert(c, n);
        }
    }
    reduced.insert(into, 1);
    Some((reduced, Merge { merged, into }))
}

fn reduce_with(g: &Endgame, steps: &[(Kind, u64)]) -> ReducedForm {
    let mut reduced = g.clone();
    let mut mapping = Vec::new();
    for &(kind, floor) in steps {
        if let Some((r, m)) = merge(&reduced, kind, floor) {
            reduced = r;
            mapping.push(m);
        }
    }
    ReducedForm {
        original: g.clone(),
        reduced,
        mapping,
    }
}

pub fn amalgamate_chains(g: &Endgame) -> ReducedForm {
    reduce_with(g, &[(Kind::Chain, 4)])
}

pub fn amalgamate_loops(g: &Endgame) -> ReducedForm {
    reduce_with(g, &[(Kind::Loop, 8)])
}

/// Both merges.
pub fn reduce(g: &Endgame) -> ReducedForm {
    reduce_with(g, &[(Kind::Chain, 4), (Kind::Loop, 8)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse;

    fn chains(p: &str) -> String {
        amalgamate_chains(&parse(p).unwrap()).reduced.to_string()
    }

    fn loops(p: &str) -> String {
        amalgamate_loops(&parse(p).unwrap()).reduced.to_string()
    }

    #[test]
    fn chain_examples() {
        assert_eq!(chains("5+5"), "6");
        assert_eq!(chains("3+4L"), "3+4L");
        assert_eq!(chains("4+5+6+3"), "3+7");
        assert_eq!(chains("7"), "7");
    }

    #[test]
    fn loop_examples() {
        assert_eq!(loops("8L+10L"), "10L");
        assert_eq!(loops("2*6L"), "2*6L");
        assert_eq!(loops("3*8L"), "8L");
        assert_eq!(loops("3+4L+9L+9L"), "3+4L+10L");
    }

    #[test]
    fn mapping_translates_back() {
        let r = reduce(&parse("3+5+6+4L+8L+12L").unwrap());
        assert_eq!(r.reduced.to_string(), "3+7+4L+12L");
        assert_eq!(r.mapping.len(), 2);
        assert_eq!(r.to_original("7".parse().unwrap()), "5".parse().unwrap());
        assert_eq!(r.to_original("12L".parse().unwrap()), "8L".parse().unwrap());
        assert_eq!(r.to_original("4L".parse().unwrap()), "4L".parse().unwrap());
    }

    #[test]
    fn idempotent() {
        let g = parse("3+4+5+2*9+6L+8L+11L").unwrap();
        let once = reduce(&g).reduced;
        assert_eq!(reduce(&once).reduced, once);
        assert!(reduce(&once).mapping.is_empty());
    }

    #[test]
    fn multiplicities_of_small_parts_unchanged() {
        let g = parse("2*3+4+4+100*4L+7*6L+8L+8L").unwrap();
        let r = reduce(&g).reduced;
        let s0 = g.summary();
        let s1 = r.summary();
        assert_eq!(s0.three_chain_count, s1.three_chain_count);
        assert_eq!(s0.four_loop_count, s1.four_loop_count);
        assert_eq!(s0.six_loop_count, s1.six_loop_count);
        assert_eq!(s1.big_chain_count, 1);
        assert_eq!(s1.big_loop_count, 1);
    }
}
