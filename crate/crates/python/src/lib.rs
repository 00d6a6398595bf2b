//! Python module `linkgame`: words, shadows, games, the solver and the
//! strategy engine. Every failure raises `ValueError`.

use std::fmt::Display;

use linkgame_core::regions::twist_regions;
use linkgame_core::sweep::run_criterion;
use linkgame_core::tangle::render_decomposed;
use linkgame_core::{
    applicable_strategies, choose_move, classify_syllables, closure_components, count_intersections, decompose_word, new_game,
    parse_pd, parse_word, presets, rational_splittability, reduce_word, render_pd, shadow_from_word, solve_diagram_with,
    solve_rational_with, tangle_fraction, verify_strategy, ClosureKind, CrossingState, GameConfig, GameState, Move,
    PseudoTangleWord, Role, ShadowDiagram, SolveOptions, SolveResult, StrategyId, StrategyMemory, Winner,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn role(name: &str) -> PyResult<Role> {
    name.parse().map_err(err)
}

fn closure(name: Option<&str>) -> PyResult<Option<ClosureKind>> {
    name.map(|n| n.parse().map_err(err)).transpose()
}

fn resolution(marker: &str) -> PyResult<CrossingState> {
    let mut chars = marker.chars();
    match (chars.next().and_then(CrossingState::from_marker), chars.next()) {
        (Some(s), None) if s.is_resolved() => Ok(s),
        _ => Err(err(format!("resolution must be '/' or '\\', got '{marker}'"))),
    }
}

fn move_tuple(m: &Move) -> (usize, String) {
    (m.crossing, m.resolution.marker().to_string())
}

fn solve_dict<'py>(py: Python<'py>, r: &SolveResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item(
        "winner",
        match r.winner {
            Winner::FirstMover => "first_mover",
            Winner::SecondMover => "second_mover",
            _ => "unknown",
        },
    )?;
    d.set_item("winning_role", r.winning_role.map(|r| r.to_string()))?;
    d.set_item("summary", r.summary())?;
    d.set_item("principal_variation", r.principal_variation.iter().map(move_tuple).collect::<Vec<_>>())?;
    d.set_item("nodes", r.nodes)?;
    d.set_item("unknown_leaves", r.unknown_leaves)?;
    Ok(d)
}

/// A rational pseudotangle word such as `(1,(2),3)`.
#[pyclass(module = "linkgame", name = "Word", frozen)]
struct PyWord {
    word: PseudoTangleWord,
}

#[pymethods]
impl PyWord {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyWord { word: parse_word(text).map_err(err)? })
    }

    /// Syllable sizes, resolved or not.
    #[getter]
    fn sizes(&self) -> Vec<u32> {
        self.word.sizes()
    }

    /// Signed twist counts; requires a fully resolved word.
    #[getter]
    fn nets(&self) -> PyResult<Vec<i32>> {
        if !self.word.is_fully_resolved() {
            return Err(err(format!("{} has unresolved syllables", self.word)));
        }
        Ok(self.word.nets())
    }

    #[getter]
    fn crossing_count(&self) -> u32 {
        self.word.crossing_count()
    }

    #[getter]
    fn is_resolved(&self) -> bool {
        self.word.is_fully_resolved()
    }

    /// `(si, nsi)` intersection counts.
    fn intersections(&self) -> (u32, u32) {
        let (nsi, si) = count_intersections(&self.word);
        (si, nsi)
    }

    /// Kind of every syllable after normalization, e.g. `["NSI", "SI"]`.
    fn classify(&self) -> Vec<String> {
        classify_syllables(&self.word).iter().map(ToString::to_string).collect()
    }

    /// The word with its isolated SI syllables starred.
    fn decomposition(&self) -> PyResult<String> {
        render_decomposed(&self.word).map_err(err)
    }

    /// Block structure of the decomposition.
    fn blocks(&self) -> PyResult<String> {
        decompose_word(&self.word).map(|d| d.describe()).map_err(err)
    }

    fn fraction(&self) -> String {
        tangle_fraction(&self.word).to_string()
    }

    /// The closure with two components, if any.
    fn closure(&self) -> Option<String> {
        closure_components(&self.word).1.map(|c| c.to_string())
    }

    fn reduce(&self) -> PyWord {
        PyWord { word: reduce_word(&self.word) }
    }

    fn to_shadow(&self) -> PyWord {
        PyWord { word: self.word.to_shadow() }
    }

    /// Splittability summary of a resolved word.
    fn verdict(&self) -> PyResult<String> {
        rational_splittability(&self.word).map(|v| v.summary()).map_err(err)
    }

    fn __str__(&self) -> String {
        self.word.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.word)
    }
}

/// A two-component link shadow or diagram.
#[pyclass(module = "linkgame", name = "Shadow", frozen)]
struct PyShadow {
    diagram: ShadowDiagram,
}

#[pymethods]
impl PyShadow {
    /// Closure of a word read as a shadow; `closure` is `"numerator"` or
    /// `"denominator"`, defaulting to the one with two components.
    #[staticmethod]
    #[pyo3(signature = (word, closure=None))]
    fn from_word(word: &str, closure: Option<&str>) -> PyResult<Self> {
        Ok(PyShadow { diagram: shadow_from_word(word, self::closure(closure)?).map_err(err)? })
    }

    /// Parses PD text.
    #[staticmethod]
    fn from_pd(text: &str) -> PyResult<Self> {
        Ok(PyShadow { diagram: parse_pd(text).map_err(err)? })
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        presets::preset(name)
            .map(|diagram| PyShadow { diagram })
            .ok_or_else(|| err(format!("unknown preset '{name}' (known: {})", presets::PRESET_NAMES.join(", "))))
    }

    #[getter]
    fn crossing_count(&self) -> usize {
        self.diagram.crossing_count()
    }

    #[getter]
    fn component_count(&self) -> usize {
        self.diagram.component_count()
    }

    /// Crossing markers: `?` unresolved, `/` or `\` resolved.
    #[getter]
    fn states(&self) -> String {
        self.diagram.states().iter().map(|s| s.marker()).collect()
    }

    fn si_crossings(&self) -> Vec<usize> {
        self.diagram.si_crossings()
    }

    fn nsi_crossings(&self) -> Vec<usize> {
        self.diagram.nsi_crossings()
    }

    /// Pseudo-linking number under the canonical orientation.
    fn linking_number(&self) -> PyResult<f64> {
        self.diagram.canonical_plk().map(|h| h.as_f64()).map_err(err)
    }

    fn twist_regions(&self) -> Vec<Vec<usize>> {
        twist_regions(&self.diagram).into_iter().map(|r| r.crossings).collect()
    }

    /// The same crossings with every resolution forgotten.
    fn to_shadow(&self) -> PyShadow {
        PyShadow { diagram: self.diagram.to_shadow() }
    }

    fn pd(&self) -> String {
        render_pd(&self.diagram)
    }

    /// Strategies with a proven win for their role when `first` moves first.
    fn applicable_strategies(&self, first: &str) -> PyResult<Vec<String>> {
        let config = GameConfig::new(self.diagram.to_shadow(), role(first)?);
        Ok(applicable_strategies(&config).iter().map(ToString::to_string).collect())
    }

    fn __repr__(&self) -> String {
        format!("Shadow(crossings={}, states='{}')", self.diagram.crossing_count(), self.states())
    }
}

/// A game in progress on a shadow.
#[pyclass(module = "linkgame", name = "Game")]
struct PyGame {
    config: GameConfig,
    state: GameState,
}

#[pymethods]
impl PyGame {
    #[new]
    #[pyo3(signature = (shadow, first, budget=None))]
    fn new(shadow: PyRef<'_, PyShadow>, first: &str, budget: Option<usize>) -> PyResult<Self> {
        let mut config = GameConfig::new(shadow.diagram.clone(), role(first)?);
        if let Some(b) = budget {
            config.budget = b;
        }
        let state = new_game(&config).map_err(err)?;
        Ok(PyGame { config, state })
    }

    /// Role to move; `None` once every crossing is resolved.
    #[getter]
    fn mover(&self) -> Option<String> {
        (!self.state.is_terminal()).then(|| self.state.mover().to_string())
    }

    #[getter]
    fn first_mover(&self) -> String {
        self.state.first_mover().to_string()
    }

    #[getter]
    fn history(&self) -> Vec<(usize, String)> {
        self.state.history().iter().map(move_tuple).collect()
    }

    #[getter]
    fn is_over(&self) -> bool {
        self.state.is_terminal()
    }

    #[getter]
    fn diagram(&self) -> PyShadow {
        PyShadow { diagram: self.state.diagram().clone() }
    }

    fn legal_moves(&self) -> Vec<(usize, String)> {
        self.state.legal_moves().iter().map(move_tuple).collect()
    }

    /// Resolves `crossing` with `/` or `\` for the role to move.
    fn play(&mut self, crossing: usize, resolution: &str) -> PyResult<()> {
        self.state = self.state.apply_move(Move::new(crossing, self::resolution(resolution)?)).map_err(err)?;
        Ok(())
    }

    /// Takes back the last move.
    fn undo(&mut self) -> PyResult<()> {
        self.state = self.state.undo_last().ok_or_else(|| err("no move to undo"))?;
        Ok(())
    }

    /// Pseudo-linking number of the current position.
    fn plk(&self) -> f64 {
        self.state.pseudo_linking_number().as_f64()
    }

    /// `(winner, verdict)` once the game is over, `None` before.
    fn outcome(&self) -> PyResult<Option<(Option<String>, String)>> {
        let outcome = self.state.outcome().map_err(err)?;
        Ok(outcome.map(|o| (o.winner.map(|r| r.to_string()), o.verdict.summary())))
    }

    /// Perfect-play result from the current position.
    #[pyo3(signature = (max_crossings=None))]
    fn solve<'py>(&self, py: Python<'py>, max_crossings: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
        let mut options = SolveOptions { budget: self.state.budget(), ..SolveOptions::default() };
        if let Some(b) = max_crossings {
            options.bound = b;
        }
        let state = self.state.clone();
        let result = py.detach(move || solve_diagram_with(&state, &options)).map_err(err)?;
        solve_dict(py, &result)
    }

    /// `(crossing, resolution, rationale)` the strategy plays now.
    fn strategy_move(&self, strategy: &str) -> PyResult<(usize, String, String)> {
        let id: StrategyId = strategy.parse().map_err(err)?;
        let memory = StrategyMemory::after(id, &self.config, self.state.history()).map_err(err)?;
        let (decision, _) = choose_move(&self.state, &memory).map_err(err)?;
        let (c, r) = move_tuple(&decision.mv);
        Ok((c, r, decision.rationale))
    }

    fn __repr__(&self) -> String {
        format!(
            "Game(states='{}', moves={})",
            self.state.diagram().states().iter().map(|s| s.marker()).collect::<String>(),
            self.state.history().len()
        )
    }
}

/// Perfect-play result on the syllables of a word read as a shadow.
#[pyfunction]
#[pyo3(signature = (word, first, closure=None))]
fn solve_word<'py>(py: Python<'py>, word: &str, first: &str, closure: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
    let parsed = parse_word(word).map_err(err)?.to_shadow();
    let closure = match self::closure(closure)? {
        Some(c) => c,
        None => closure_components(&parsed).1.ok_or_else(|| err(format!("no closure of {parsed} has two components")))?,
    };
    let first = role(first)?;
    let result = py.detach(move || solve_rational_with(&parsed, closure, first, &SolveOptions::default())).map_err(err)?;
    solve_dict(py, &result)
}

/// Plays `strategy` against every opponent line; returns
/// `(clean, summary)`.
#[pyfunction]
fn verify(py: Python<'_>, shadow: PyRef<'_, PyShadow>, first: &str, strategy: &str) -> PyResult<(bool, String)> {
    let id: StrategyId = strategy.parse().map_err(err)?;
    let config = GameConfig::new(shadow.diagram.to_shadow(), role(first)?);
    let report = py.detach(move || verify_strategy(id, &config)).map_err(err)?;
    Ok((report.is_clean(), report.summary()))
}

/// Runs one acceptance criterion; returns `(passed, line)`.
#[pyfunction]
fn criterion(py: Python<'_>, id: u8) -> PyResult<(bool, String)> {
    if !(1..=11).contains(&id) {
        return Err(err(format!("criterion must be 1-11, got {id}")));
    }
    let report = py.detach(move || run_criterion(id));
    Ok((report.passed(), report.line()))
}

/// Every strategy id.
#[pyfunction]
fn strategy_ids() -> Vec<&'static str> {
    StrategyId::ALL.iter().map(|s| s.name()).collect()
}

#[pymodule]
fn linkgame(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWord>()?;
    m.add_class::<PyShadow>()?;
    m.add_class::<PyGame>()?;
    m.add_function(wrap_pyfunction!(solve_word, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(criterion, m)?)?;
    m.add_function(wrap_pyfunction!(strategy_ids, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use pyo3::ffi::c_str;

    use super::*;

    #[test]
    fn module_runs_in_an_embedded_interpreter() {
        pyo3::append_to_inittab!(linkgame);
        Python::initialize();
        Python::attach(|py| {
            let code = c_str!(
                r#"
import linkgame
w = linkgame.Word("(1,(2),3)")
assert w.sizes == [1, 2, 3], w.sizes
g = linkgame.Game(linkgame.Shadow.preset("whitehead"), "linker")
c, r, _ = g.strategy_move("linking-first")
g.play(c, r)
assert g.mover == "Unlinker", g.mover
assert linkgame.solve_word("(2)", "linker", "denominator")["winning_role"] == "Unlinker"
try:
    g.play(c, "x")
    raise AssertionError("accepted a bad resolution")
except ValueError:
    pass
"#
            );
            py.run(code, None, None).map_err(|e| e.to_string()).unwrap();
        });
    }
}
