//! Python module `loony`.
//!
//! ```python
//! import loony
//! loony.value("3+4+100*4L+100*6L")        # 3
//! loony.best_open("3+3*6L")               # ("3", "open/one-3-chain+loops:3-chain", 1)
//! s = loony.Session("2*3+4+6L")
//! s.open("3"); s.decide("TakeAll")
//! ```

use loony::model::{format, parse};
use loony::report::{self, Analysis};
use loony::session::{self, Advice, Phase};
use loony::{solver, Choice, Component, CvBreakdown, Endgame, Oracle, Player, Score, SessionState};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn endgame(text: &str) -> PyResult<Endgame> {
    parse(text).map_err(value_error)
}

fn component(text: &str) -> PyResult<Component> {
    text.parse().map_err(value_error)
}

fn player(text: &str) -> PyResult<Player> {
    match text {
        "A" | "a" => Ok(Player::A),
        "B" | "b" => Ok(Player::B),
        _ => Err(PyValueError::new_err(format!(
            "player must be 'A' or 'B', got {text:?}"
        ))),
    }
}

fn choice(text: &str) -> PyResult<Choice> {
    match text {
        "KeepControl" => Ok(Choice::KeepControl),
        "TakeAll" => Ok(Choice::TakeAll),
        _ => Err(PyValueError::new_err(format!(
            "choice must be 'KeepControl' or 'TakeAll', got {text:?}"
        ))),
    }
}

fn player_name(p: Player) -> &'static str {
    match p {
        Player::A => "A",
        Player::B => "B",
    }
}

/// Canonical form of a position, e.g. `"6L+3+3"` -> `"2*3+6L"`.
#[pyfunction]
fn canonical(position: &str) -> PyResult<String> {
    Ok(format(&endgame(position)?))
}

/// The (component, count) pairs of a position in canonical order.
#[pyfunction]
fn components(position: &str) -> PyResult<Vec<(String, u64)>> {
    Ok(endgame(position)?
        .counts()
        .map(|(c, n)| (c.to_string(), n))
        .collect())
}

/// `(fcv, tb, cv)`.
#[pyfunction]
fn controlled_value(position: &str) -> PyResult<(Score, Score, Score)> {
    let b = CvBreakdown::of(&endgame(position)?.summary());
    Ok((b.fcv, b.tb, b.cv))
}

/// Value by the closed forms. Raises ValueError for odd loops.
#[pyfunction]
fn value(position: &str) -> PyResult<Score> {
    Ok(solver::value_of(&endgame(position)?)
        .map_err(value_error)?
        .value)
}

/// `(subject, rule, value)` for every case the solver went through.
#[pyfunction]
fn trace(position: &str) -> PyResult<Vec<(String, String, Score)>> {
    let r = solver::value_of(&endgame(position)?).map_err(value_error)?;
    Ok(r.trace
        .into_iter()
        .map(|t| (t.subject, t.rule.to_string(), t.value))
        .collect())
}

/// `(component, rule, move value)` for the advised open.
#[pyfunction]
fn best_open(position: &str) -> PyResult<(String, String, Score)> {
    let a = solver::best_open(&endgame(position)?).map_err(value_error)?;
    Ok((a.open.to_string(), a.rule.to_string(), a.move_value))
}

/// Value of opening `component` first.
#[pyfunction]
fn move_value(position: &str, component: &str) -> PyResult<Score> {
    solver::move_value(&endgame(position)?, self::component(component)?).map_err(value_error)
}

fn analysis_dict<'py>(py: Python<'py>, a: &Analysis) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("position", &a.position)?;
    d.set_item("value", a.value)?;
    d.set_item("cv", a.cv)?;
    d.set_item("fcv", a.fcv)?;
    d.set_item("tb", a.tb)?;
    d.set_item("advised_open", a.advised_open.map(|c| c.to_string()))?;
    d.set_item("rule", a.rule.map(|r| r.to_string()))?;
    d.set_item("move_value", a.move_value)?;
    let steps: Vec<(String, String, Score)> = a
        .trace
        .iter()
        .map(|t| (t.subject.clone(), t.rule.to_string(), t.value))
        .collect();
    d.set_item("trace", steps)?;
    d.set_item("oracle_fallback", a.oracle_fallback)?;
    Ok(d)
}

/// Everything about a position as a dict. Odd loops fall back to exhaustive
/// search within the size cap.
#[pyfunction]
fn analyze<'py>(py: Python<'py>, position: &str) -> PyResult<Bound<'py, PyDict>> {
    let a = report::analyze(&endgame(position)?).map_err(value_error)?;
    analysis_dict(py, &a)
}

fn searchable(position: &str) -> PyResult<Endgame> {
    let g = endgame(position)?;
    if g.total_boxes() > report::DEFAULT_ORACLE_CAP {
        return Err(value_error(format!(
            "{} boxes exceeds the exhaustive-search cap of {}",
            g.total_boxes(),
            report::DEFAULT_ORACLE_CAP
        )));
    }
    Ok(g)
}

/// Value by exhaustive search (any loop parity, small positions only).
#[pyfunction]
fn oracle_value(position: &str) -> PyResult<Score> {
    Ok(Oracle::new().value(&searchable(position)?))
}

/// Exhaustive-search value of opening each distinct component.
#[pyfunction]
fn oracle_move_values(position: &str) -> PyResult<Vec<(String, Score)>> {
    let mv = Oracle::new()
        .move_values(&searchable(position)?)
        .map_err(value_error)?;
    Ok(mv
        .into_iter()
        .map(|m| (m.component.to_string(), m.value))
        .collect())
}

/// Every optimal open, by exhaustive search.
#[pyfunction]
fn optimal_opens(position: &str) -> PyResult<Vec<String>> {
    let set = Oracle::new()
        .optimal_opens(&searchable(position)?)
        .map_err(value_error)?;
    Ok(set.into_iter().map(|c| c.to_string()).collect())
}

/// Plays the position out following the advice; returns `(score_a, score_b)`.
#[pyfunction]
#[pyo3(signature = (position, opener = "A"))]
fn self_play(position: &str, opener: &str) -> PyResult<(u128, u128)> {
    let s = session::self_play(&endgame(position)?, player(opener)?).map_err(value_error)?;
    Ok((s.score_a, s.score_b))
}

/// A game in progress. Opening and deciding raise ValueError when illegal.
#[pyclass(module = "loony")]
struct Session {
    state: SessionState,
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (position, opener = "A"))]
    fn new(position: &str, opener: &str) -> PyResult<Self> {
        let g = endgame(position)?;
        if !g.is_simple() {
            searchable(position)?;
        }
        Ok(Session {
            state: SessionState::new(g, player(opener)?),
        })
    }

    fn open(&mut self, component: &str) -> PyResult<()> {
        self.state = self
            .state
            .apply_open(self::component(component)?)
            .map_err(value_error)?;
        Ok(())
    }

    fn decide(&mut self, choice: &str) -> PyResult<()> {
        self.state = self
            .state
            .apply_decision(self::choice(choice)?)
            .map_err(value_error)?;
        Ok(())
    }

    /// Plays the advised action.
    fn step(&mut self) -> PyResult<()> {
        self.state = self.state.advised_step().map_err(value_error)?;
        Ok(())
    }

    /// Advice for whoever is to act, or None once the game is over.
    fn advice<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyDict>>> {
        if self.state.is_terminal() {
            return Ok(None);
        }
        let d = PyDict::new(py);
        match self.state.advise().map_err(value_error)? {
            Advice::Open(m) => {
                d.set_item("kind", "open")?;
                d.set_item("open", m.open.to_string())?;
                d.set_item("move_value", m.move_value)?;
                d.set_item("rule", m.rule.to_string())?;
            }
            Advice::Decide {
                decision,
                rest_value,
                rule,
            } => {
                d.set_item("kind", "decide")?;
                let c = match decision.choice {
                    Choice::KeepControl => "KeepControl",
                    Choice::TakeAll => "TakeAll",
                };
                d.set_item("choice", c)?;
                d.set_item("indifferent", decision.indifferent)?;
                d.set_item("rest_value", rest_value)?;
                d.set_item("rule", rule.to_string())?;
            }
        }
        Ok(Some(d))
    }

    #[getter]
    fn remaining(&self) -> String {
        self.state.remaining.to_string()
    }

    #[getter]
    fn phase(&self) -> &'static str {
        match self.state.phase {
            Phase::DefenderToOpen => "defenderToOpen",
            Phase::ControllerToDecide { .. } => "controllerToDecide",
        }
    }

    #[getter]
    fn opened(&self) -> Option<String> {
        match self.state.phase {
            Phase::ControllerToDecide { opened } => Some(opened.to_string()),
            Phase::DefenderToOpen => None,
        }
    }

    #[getter]
    fn to_act(&self) -> &'static str {
        player_name(self.state.to_act)
    }

    #[getter]
    fn score_a(&self) -> u128 {
        self.state.score_a
    }

    #[getter]
    fn score_b(&self) -> u128 {
        self.state.score_b
    }

    #[getter]
    fn terminal(&self) -> bool {
        self.state.is_terminal()
    }

    /// Score of `player` minus the other player's.
    fn margin(&self, player: &str) -> PyResult<Score> {
        Ok(self.state.margin(self::player(player)?))
    }

    /// The full state as JSON, in the same shape the HTTP service uses.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.state).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Session(remaining={:?}, phase={}, A={}, B={})",
            self.remaining(),
            self.phase(),
            self.state.score_a,
            self.state.score_b
        )
    }
}

#[pymodule(name = "loony")]
pub fn loony_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(components, m)?)?;
    m.add_function(wrap_pyfunction!(controlled_value, m)?)?;
    m.add_function(wrap_pyfunction!(value, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(best_open, m)?)?;
    m.add_function(wrap_pyfunction!(move_value, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_value, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_move_values, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_opens, m)?)?;
    m.add_function(wrap_pyfunction!(self_play, m)?)?;
    m.add_class::<Session>()?;
    Ok(())
}
