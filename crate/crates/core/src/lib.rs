//! Exact analysis of simple loony endgames in dots and boxes.
//!
//! A simple loony endgame is a position made only of isolated long chains
//! (3 or more boxes) and isolated loops of even length (4 or more boxes).
//! [`solver`] computes its value and an optimal open in constant time from an
//! [`EndgameSummary`]; [`oracle`] is the exhaustive search the closed forms
//! are checked against.
//!
//! ```
//! let g: loony::Endgame = "3+4+100*4L+100*6L".parse().unwrap();
//! assert_eq!(loony::solver::value_of(&g).unwrap().value, 3);
//! ```

pub mod amalgamation;
pub mod check;
pub mod cv;
pub mod model;
pub mod oracle;
pub mod report;
pub mod session;
pub mod solver;

/// Box counts and net scores. Wide enough for sums of 64-bit lengths.
pub type Score = i128;

pub use cv::CvBreakdown;
pub use model::{Component, Endgame, EndgameSummary, Kind, ModelError};
pub use oracle::Oracle;
pub use session::{Choice, ControlDecision, Player, SessionState};
pub use solver::{MoveAdvice, Rule, SolveError, ValueResult};
