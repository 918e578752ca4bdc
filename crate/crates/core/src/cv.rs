//! Controlled value arithmetic.
//!
//! The fully controlled value is the controller's net if they keep control
//! to the very end, handing back two boxes per chain and four per loop. The
//! terminal bonus corrects for the last component, which the controller takes
//! whole. Both read only summary counts, so this works for odd loops too even
//! though the closed-form value theorems do not.

use serde::{Deserialize, Serialize};

use crate::model::EndgameSummary;
use crate::Score;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvBreakdown {
    pub fcv: Score,
    pub tb: Score,
    pub cv: Score,
}

impl CvBreakdown {
    pub fn of(s: &EndgameSummary) -> Self {
        let (fcv, tb) = (fcv(s), tb(s));
        CvBreakdown {
            fcv,
            tb,
            cv: fcv + tb,
        }
    }
}

/// Sum of (chain - 4) over chains plus (loop - 8) over loops.
pub fn fcv(s: &EndgameSummary) -> Score {
    let n = |x: u128| x as Score;
    let sum = |x: u128| x as Score;
    -n(s.three_chain_count) + (sum(s.big_chain_length_sum) - 4 * n(s.big_chain_count))
        - 4 * n(s.four_loop_count)
        - 2 * n(s.six_loop_count)
        + (sum(s.big_loop_length_sum) - 8 * n(s.big_loop_count))
        + (sum(s.odd_loop_length_sum) - 8 * n(s.odd_loop_count))
}

pub fn tb(s: &EndgameSummary) -> Score {
    if s.is_empty() {
        0
    } else if s.big_chain_count > 0 || !s.has_loops() {
        4
    } else if !s.has_chains() {
        8
    } else {
        // loops plus chains, every chain a 3-chain
        6
    }
}

pub fn cv(s: &EndgameSummary) -> Score {
    fcv(s) + tb(s)
}
