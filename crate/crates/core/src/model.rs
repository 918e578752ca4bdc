//! Endgame positions: components, canonical multisets, the position grammar
//! and constant-size summaries.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Shortest chain that counts as long.
pub const MIN_CHAIN: u64 = 3;
/// Shortest loop that can exist.
pub const MIN_LOOP: u64 = 4;

/// Most boxes a game may hold (2^124). Keeps every score and sum well inside
/// `i128`.
pub const MAX_BOXES: u128 = 1 << 124;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("chain length < 3 (got {0})")]
    ChainTooShort(u64),
    #[error("loop length < 4 (got {0})")]
    LoopTooShort(u64),
    #[error("component {0} not present")]
    NotPresent(Component),
    #[error("position too large: at most {max} boxes and 2^64-1 copies of a component", max = MAX_BOXES)]
    TooLarge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Chain,
    Loop,
}

impl Kind {
    /// Boxes the controller hands back to stay in control: two for a chain,
    /// four for a loop.
    pub fn handback(self) -> u64 {
        match self {
            Kind::Chain => 2,
            Kind::Loop => 4,
        }
    }
}

/// An isolated chain or loop, measured in boxes.
///
/// Ordering is chains before loops, then by length, which is the canonical
/// order used everywhere a multiset is printed or hashed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    kind: Kind,
    length: u64,
}

impl Component {
    pub fn new(kind: Kind, length: u64) -> Result<Self, ModelError> {
        match kind {
            Kind::Chain if length < MIN_CHAIN => Err(ModelError::ChainTooShort(length)),
            Kind::Loop if length < MIN_LOOP => Err(ModelError::LoopTooShort(length)),
            _ => Ok(Component { kind, length }),
        }
    }

    pub(crate) const fn new_unchecked(kind: Kind, length: u64) -> Self {
        Component { kind, length }
    }

    pub fn chain(length: u64) -> Result<Self, ModelError> {
        Self::new(Kind::Chain, length)
    }

    pub fn loop_of(length: u64) -> Result<Self, ModelError> {
        Self::new(Kind::Loop, length)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn is_chain(&self) -> bool {
        self.kind == Kind::Chain
    }

    pub fn is_loop(&self) -> bool {
        self.kind == Kind::Loop
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Chain => write!(f, "{}", self.length),
            Kind::Loop => write!(f, "{}L", self.length),
        }
    }
}

impl FromStr for Component {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let g: Endgame = s.parse()?;
        let mut it = g.counts();
        match (it.next(), it.next()) {
            (Some((c, 1)), None) => Ok(c),
            _ => Err(ModelError::Syntax {
                pos: 0,
                msg: format!("expected a single component, got {s:?}"),
            }),
        }
    }
}

impl Serialize for Component {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A loony endgame: a multiset of isolated components.
///
/// Stored as a sorted run-length map so that a hundred copies of a 4-loop cost
/// one entry, and equality/hashing are canonical.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endgame {
    counts: BTreeMap<Component, u64>,
}

impl Endgame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_components<I: IntoIterator<Item = Component>>(iter: I) -> Self {
        let mut g = Endgame::new();
        for c in iter {
            g.insert(c, 1);
        }
        g
    }

    /// Adds `count` copies of `c`, unless the game would exceed
    /// [`MAX_BOXES`] boxes or `u64::MAX` copies of `c`.
    pub fn try_insert(&mut self, c: Component, count: u64) -> Result<(), ModelError> {
        if count == 0 {
            return Ok(());
        }
        let have = self.multiplicity(c);
        let n = have.checked_add(count).ok_or(ModelError::TooLarge)?;
        let added = c.length as u128 * count as u128;
        if self
            .total_boxes()
            .checked_add(added)
            .is_none_or(|t| t > MAX_BOXES)
        {
            return Err(ModelError::TooLarge);
        }
        self.counts.insert(c, n);
        Ok(())
    }

    /// Adds `count` copies of `c`.
    ///
    /// # Panics
    ///
    /// If the result is too large; see [`Endgame::try_insert`].
    pub fn insert(&mut self, c: Component, count: u64) {
        self.try_insert(c, count).expect("endgame size limit")
    }

    pub fn with(mut self, c: Component, count: u64) -> Self {
        self.insert(c, count);
        self
    }

    /// Removes one copy of `c`.
    pub fn remove_one(&mut self, c: Component) -> Result<(), ModelError> {
        match self.counts.get_mut(&c) {
            Some(n) if *n > 1 => {
                *n -= 1;
                Ok(())
            }
            Some(_) => {
                self.counts.remove(&c);
                Ok(())
            }
            None => Err(ModelError::NotPresent(c)),
        }
    }

    /// The game with one copy of `c` removed.
    pub fn without(&self, c: Component) -> Result<Endgame, ModelError> {
        let mut g = self.clone();
        g.remove_one(c)?;
        Ok(g)
    }

    pub fn multiplicity(&self, c: Component) -> u64 {
        self.counts.get(&c).copied().unwrap_or(0)
    }

    pub fn contains(&self, c: Component) -> bool {
        self.counts.contains_key(&c)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct components with their multiplicities, in canonical order.
    pub fn counts(&self) -> impl Iterator<Item = (Component, u64)> + '_ {
        self.counts.iter().map(|(c, n)| (*c, *n))
    }

    /// Distinct components in canonical order.
    pub fn distinct(&self) -> impl Iterator<Item = Component> + '_ {
        self.counts.keys().copied()
    }

    /// Every component, repeated by multiplicity. Only sensible for small games.
    pub fn components(&self) -> impl Iterator<Item = Component> + '_ {
        self.counts
            .iter()
            .flat_map(|(c, n)| std::iter::repeat_n(*c, *n as usize))
    }

    /// Number of components counted with multiplicity.
    pub fn len(&self) -> u128 {
        self.counts.values().map(|&n| n as u128).sum()
    }

    pub fn total_boxes(&self) -> u128 {
        self.counts
            .iter()
            .map(|(c, n)| c.length as u128 * *n as u128)
            .sum()
    }

    /// True when every loop has even length.
    pub fn is_simple(&self) -> bool {
        self.counts
            .keys()
            .all(|c| c.kind == Kind::Chain || c.length % 2 == 0)
    }

    pub fn smallest_chain(&self) -> Option<Component> {
        self.counts.keys().find(|c| c.is_chain()).copied()
    }

    pub fn smallest_loop(&self) -> Option<Component> {
        self.counts
            .range(
                Component {
                    kind: Kind::Loop,
                    length: 0,
                }..,
            )
            .next()
            .map(|(c, _)| *c)
    }

    pub fn summary(&self) -> EndgameSummary {
        self.counts
            .iter()
            .map(|(c, n)| EndgameSummary::of_component(*c, *n))
            .fold(EndgameSummary::default(), |a, b| a + b)
    }
}

/// Disjoint union.
///
/// # Panics
///
/// If the union is too large; see [`Endgame::try_insert`].
impl Add for Endgame {
    type Output = Endgame;

    fn add(mut self, rhs: Endgame) -> Endgame {
        for (c, n) in rhs.counts {
            self.insert(c, n);
        }
        self
    }
}

impl fmt::Display for Endgame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, n)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if *n > 1 {
                write!(f, "{n}*")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Endgame {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser::new(s).position()
    }
}

impl Serialize for Endgame {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Endgame {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn parse(text: &str) -> Result<Endgame, ModelError> {
    text.parse()
}

pub fn format(g: &Endgame) -> String {
    g.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ModelError> {
        Err(ModelError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, ModelError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return match self.src.get(start) {
                Some(&b) => self.err(format!("expected a number, found {:?}", b as char)),
                None => self.err("expected a number, found end of input"),
            };
        }
        // digits are ASCII so this slice is valid UTF-8
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits.parse().or_else(|_| {
            self.pos = start;
            self.err("number too large")
        })
    }

    fn term(&mut self, g: &mut Endgame) -> Result<(), ModelError> {
        let first = self.number()?;
        let (count, length) = if self.peek() == Some(b'*') {
            if first == 0 {
                return self.err("multiplicity must be at least 1");
            }
            self.pos += 1;
            (first, self.number()?)
        } else {
            (1, first)
        };
        let kind = match self.peek() {
            Some(b'L' | b'l') => {
                self.pos += 1;
                Kind::Loop
            }
            _ => Kind::Chain,
        };
        g.try_insert(Component::new(kind, length)?, count)
    }

    fn position(mut self) -> Result<Endgame, ModelError> {
        let mut g = Endgame::new();
        if self.peek().is_none() {
            return Ok(g);
        }
        loop {
            self.term(&mut g)?;
            match self.peek() {
                None => return Ok(g),
                Some(b'+') => self.pos += 1,
                Some(b) => return self.err(format!("expected '+', found {:?}", b as char)),
            }
        }
    }
}

/// Constant-size aggregate of an endgame.
///
/// Everything the closed-form solver needs is a function of these counts and
/// sums; adding two summaries gives the summary of the disjoint union.
/// Odd loops (which only the exhaustive search supports) get their own bucket
/// so the controlled value stays defined for them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EndgameSummary {
    pub three_chain_count: u128,
    pub big_chain_count: u128,
    pub big_chain_length_sum: u128,
    pub four_loop_count: u128,
    pub six_loop_count: u128,
    pub big_loop_count: u128,
    pub big_loop_length_sum: u128,
    pub odd_loop_count: u128,
    pub odd_loop_length_sum: u128,
}

impl EndgameSummary {
    pub fn of_component(c: Component, n: u64) -> Self {
        let mut s = EndgameSummary::default();
        let sum = c.length as u128 * n as u128;
        match (c.kind, c.length) {
            (Kind::Chain, 3) => s.three_chain_count = n as u128,
            (Kind::Chain, _) => {
                s.big_chain_count = n as u128;
                s.big_chain_length_sum = sum;
            }
            (Kind::Loop, len) if len % 2 == 1 => {
                s.odd_loop_count = n as u128;
                s.odd_loop_length_sum = sum;
            }
            (Kind::Loop, 4) => s.four_loop_count = n as u128,
            (Kind::Loop, 6) => s.six_loop_count = n as u128,
            (Kind::Loop, _) => {
                s.big_loop_count = n as u128;
                s.big_loop_length_sum = sum;
            }
        }
        s
    }

    pub fn chain_count(&self) -> u128 {
        self.three_chain_count + self.big_chain_count
    }

    pub fn loop_count(&self) -> u128 {
        self.four_loop_count + self.six_loop_count + self.big_loop_count + self.odd_loop_count
    }

    pub fn has_chains(&self) -> bool {
        self.chain_count() > 0
    }

    pub fn has_loops(&self) -> bool {
        self.loop_count() > 0
    }

    pub fn is_empty(&self) -> bool {
        !self.has_chains() && !self.has_loops()
    }

    pub fn is_simple(&self) -> bool {
        self.odd_loop_count == 0
    }

    pub fn total_boxes(&self) -> u128 {
        3 * self.three_chain_count
            + self.big_chain_length_sum
            + 4 * self.four_loop_count
            + 6 * self.six_loop_count
            + self.big_loop_length_sum
            + self.odd_loop_length_sum
    }

    /// The summary with one copy of `c` taken out, or `None` if the summary
    /// cannot contain it.
    pub fn without(&self, c: Component) -> Option<Self> {
        let one = Self::of_component(c, 1);
        Some(EndgameSummary {
            three_chain_count: self.three_chain_count.checked_sub(one.three_chain_count)?,
            big_chain_count: self.big_chain_count.checked_sub(one.big_chain_count)?,
            big_chain_length_sum: self
                .big_chain_length_sum
                .checked_sub(one.big_chain_length_sum)?,
            four_loop_count: self.four_loop_count.checked_sub(one.four_loop_count)?,
            six_loop_count: self.six_loop_count.checked_sub(one.six_loop_count)?,
            big_loop_count: self.big_loop_count.checked_sub(one.big_loop_count)?,
            big_loop_length_sum: self
                .big_loop_length_sum
                .checked_sub(one.big_loop_length_sum)?,
            odd_loop_count: self.odd_loop_count.checked_sub(one.odd_loop_count)?,
            odd_loop_length_sum: self
                .odd_loop_length_sum
                .checked_sub(one.odd_loop_length_sum)?,
        })
    }

    /// The summary with every 4-loop removed.
    pub fn without_four_loops(&self) -> Self {
        EndgameSummary {
            four_loop_count: 0,
            ..*self
        }
    }
}

impl Add for EndgameSummary {
    type Output = EndgameSummary;

    fn add(self, o: EndgameSummary) -> EndgameSummary {
        EndgameSummary {
            three_chain_count: self.three_chain_count + o.three_chain_count,
            big_chain_count: self.big_chain_count + o.big_chain_count,
            big_chain_length_sum: self.big_chain_length_sum + o.big_chain_length_sum,
            four_loop_count: self.four_loop_count + o.four_loop_count,
            six_loop_count: self.six_loop_count + o.six_loop_count,
            big_loop_count: self.big_loop_count + o.big_loop_count,
            big_loop_length_sum: self.big_loop_length_sum + o.big_loop_length_sum,
            odd_loop_count: self.odd_loop_count + o.odd_loop_count,
            odd_loop_length_sum: self.odd_loop_length_sum + o.odd_loop_length_sum,
        }
    }
}
