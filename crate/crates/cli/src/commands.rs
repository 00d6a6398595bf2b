use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use linkgame::game::terminal_verdict;
use linkgame::regions::twist_regions;
use linkgame::sweep::{run_criterion, CRITERIA};
use linkgame::tangle::{decompose_word, reduce_word_traced, render_decomposed};
use linkgame::{
    applicability, build_closure, classify_syllables, closure_components, count_intersections, new_game, parse_move_log,
    parse_word, presets, rational_splittability, replay_state, shadow_from_pd_file, solve_diagram_with, solve_rational_with,
    tangle_fraction, verify_strategy, ClosureKind, GameConfig, GameError, MoveLogError, PseudoTangleWord, Role, ShadowDiagram,
    SolveError, SolveOptions, SourceError, StrategyError, StrategyId, TangleError, WordParseError,
};
use linkgame_service::{ServiceConfig, ServiceError};
use serde_json::{json, Value};
use thiserror::Error;

use crate::{DiagramInput, ServeArgs, SolveArgs, SweepArgs, VerifyArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Word(#[from] WordParseError),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Service(#[from] ServiceError),
    #[error("{path}: {source}")]
    Log { path: String, source: MoveLogError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

/// Command result in both output formats.
pub struct Output {
    pub text: String,
    pub json: Value,
    /// False when a check failed; the exit code is then nonzero.
    pub success: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, success: true }
    }
}

fn kinds_line(kinds: &[linkgame::IntersectionKind]) -> Vec<&'static str> {
    kinds.iter().map(|k| if k.is_self() { "SI" } else { "NSI" }).collect()
}

fn closure_name(c: Option<ClosureKind>) -> String {
    c.map_or_else(|| "none".to_string(), |c| c.to_string())
}

pub fn word_analyze(text: &str) -> Result<Output, CliError> {
    let word = parse_word(text)?;
    let kinds = classify_syllables(&word);
    let (nsi, si) = count_intersections(&word);
    let decomposition = render_decomposed(&word).map_err(|e| e.to_string());
    let blocks = decompose_word(&word).map(|d| d.describe()).map_err(|e| e.to_string());
    let fraction = tangle_fraction(&word);
    let (pairing, closure) = closure_components(&word);
    let verdict = if word.is_fully_resolved() { Some(rational_splittability(&word)) } else { None };
    let verdict_text = match &verdict {
        Some(Ok(v)) => v.summary(),
        Some(Err(e)) => format!("none ({e})"),
        None => format!("undecided ({} unresolved crossings)", word.crossing_count()),
    };
    let mut out = String::new();
    writeln!(out, "word: {word}").unwrap();
    writeln!(out, "syllables: {}", word.len()).unwrap();
    writeln!(out, "crossings: {}", word.crossing_count()).unwrap();
    writeln!(out, "intersections: {si} SI, {nsi} NSI").unwrap();
    writeln!(out, "classification: {}", kinds_line(&kinds).join(" ")).unwrap();
    match (&decomposition, &blocks) {
        (Ok(d), Ok(b)) => {
            writeln!(out, "decomposition: {d}").unwrap();
            writeln!(out, "blocks: {b}").unwrap();
        }
        (Err(e), _) | (_, Err(e)) => writeln!(out, "decomposition: none ({e})").unwrap(),
    }
    writeln!(out, "fraction: {fraction}").unwrap();
    writeln!(out, "pairing: {pairing:?}").unwrap();
    writeln!(out, "two-component closure: {}", closure_name(closure)).unwrap();
    writeln!(out, "verdict: {verdict_text}").unwrap();
    let json = json!({
        "word": word.to_string(),
        "syllables": word.len(),
        "crossings": word.crossing_count(),
        "si": si,
        "nsi": nsi,
        "classification": kinds,
        "decomposition": decomposition.as_ref().ok(),
        "blocks": blocks.as_ref().ok(),
        "fraction": fraction.to_string(),
        "pairing": pairing,
        "closure": closure,
        "verdict": verdict.and_then(Result::ok),
        "verdict_summary": verdict_text,
    });
    Ok(Output::ok(out, json))
}

pub fn word_reduce(text: &str) -> Result<Output, CliError> {
    let word = parse_word(text)?;
    let (reduced, trace) = reduce_word_traced(&word);
    let mut out = format!("word: {word}\n");
    for (i, step) in trace.iter().enumerate() {
        writeln!(out, "{:>3}. {:?} at syllable {}: {}", i + 1, step.statement, step.position + 1, step.result).unwrap();
    }
    writeln!(out, "reduced: {reduced}").unwrap();
    let json = json!({ "word": word.to_string(), "steps": trace, "reduced": reduced.to_string() });
    Ok(Output::ok(out, json))
}

/// The word with the closure asked for, or the two-component one.
fn word_closure(word: &PseudoTangleWord, closure: Option<ClosureKind>) -> Result<ClosureKind, CliError> {
    match closure.or(closure_components(word).1) {
        Some(c) => Ok(c),
        None => Err(CliError::Usage(format!("{word} has no two-component closure; pass --closure"))),
    }
}

fn load_diagram(input: &DiagramInput) -> Result<ShadowDiagram, CliError> {
    if let Some(text) = &input.word {
        let word = parse_word(text)?;
        let closure = word_closure(&word, input.closure.map(Into::into))?;
        build_closure(&word, closure).map_err(|e| CliError::Usage(e.to_string()))
    } else if let Some(path) = &input.pd {
        Ok(shadow_from_pd_file(path)?)
    } else if let Some(name) = &input.preset {
        presets::preset(name)
            .ok_or_else(|| CliError::Usage(format!("unknown preset '{name}' (known: {})", presets::PRESET_NAMES.join(", "))))
    } else {
        Err(CliError::Usage("give --word, --pd or --preset".into()))
    }
}

pub fn shadow_analyze(input: &DiagramInput, budget: usize) -> Result<Output, CliError> {
    let d = load_diagram(input)?;
    let n = d.crossing_count();
    let si = d.si_crossings();
    let nsi = d.nsi_crossings();
    let plk = d.canonical_plk().map_err(GameError::from)?;
    let regions: Vec<Vec<usize>> = twist_regions(&d).into_iter().map(|r| r.crossings).collect();
    let unresolved = d.unresolved_crossings().len();
    let verdict = if unresolved == 0 { Some(terminal_verdict(&d, budget)?) } else { None };
    let verdict_text = match &verdict {
        Some(v) => v.summary(),
        None => format!("undecided ({unresolved} unresolved crossings)"),
    };
    let mut strategies = Vec::new();
    if d.component_count() == 2 && d.is_fully_unresolved() {
        for first in [Role::Linker, Role::Unlinker] {
            let config = GameConfig::new(d.clone(), first);
            let ids: Vec<StrategyId> = applicability(&config).into_iter().filter(|a| a.applies).map(|a| a.id).collect();
            strategies.push((first, ids));
        }
    }
    let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    writeln!(out, "crossings: {n} ({unresolved} unresolved)").unwrap();
    writeln!(out, "components: {} ({})", d.component_count(), d.shape().labels().join(", ")).unwrap();
    writeln!(out, "SI crossings: {}", list(&si)).unwrap();
    writeln!(out, "NSI crossings: {}", list(&nsi)).unwrap();
    writeln!(out, "linking number: {plk}").unwrap();
    let regions_text: Vec<String> = regions.iter().map(|r| format!("[{}]", list(r))).collect();
    writeln!(out, "twist regions: {}", regions_text.join(" ")).unwrap();
    for (first, ids) in &strategies {
        let names: Vec<&str> = ids.iter().map(|id| id.name()).collect();
        let names = if names.is_empty() { "none".to_string() } else { names.join(", ") };
        writeln!(out, "strategies ({first} first): {names}").unwrap();
    }
    writeln!(out, "verdict: {verdict_text}").unwrap();
    let strategies_json: Vec<Value> =
        strategies.iter().map(|(first, ids)| json!({ "first": first, "strategies": ids })).collect();
    let json = json!({
        "crossings": n,
        "unresolved": unresolved,
        "components": d.component_count(),
        "labels": d.shape().labels(),
        "si": si,
        "nsi": nsi,
        "linking_number": plk.to_string(),
        "linking_number_halves": plk.halves(),
        "twist_regions": regions,
        "strategies": strategies_json,
        "verdict": verdict,
        "verdict_summary": verdict_text,
    });
    Ok(Output::ok(out, json))
}

pub fn game_replay(path: &Path, budget: Option<usize>) -> Result<Output, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    let log = parse_move_log(&text).map_err(|source| CliError::Log { path: shown.clone(), source })?;
    let source = log.source.ok_or_else(|| CliError::Usage(format!("{shown}: no 'word' or 'pd' line")))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let shadow = source.load(base)?;
    let first = log.first.ok_or_else(|| CliError::Usage(format!("{shown}: no 'first' line")))?;
    let mut config = GameConfig::new(shadow, first);
    if let Some(b) = budget {
        config.budget = b;
    }
    let mut state = new_game(&config)?;
    let mut out = format!(
        "shadow: {} crossings ({} SI, {} NSI), {} moves first\n",
        state.diagram().crossing_count(),
        state.diagram().si_crossings().len(),
        state.diagram().nsi_crossings().len(),
        first
    );
    let mut plies = Vec::new();
    for (i, &mv) in log.moves.iter().enumerate() {
        let mover = state.mover();
        state = state.apply_move(mv).map_err(|e| GameError::Replay { index: i, source: Box::new(e) })?;
        let plk = state.pseudo_linking_number();
        writeln!(out, "{:>3}. {:<8} {mv}  plk {plk}", i + 1, mover.to_string()).unwrap();
        plies.push(json!({ "mover": mover, "move": mv, "plk": plk.to_string() }));
    }
    let state = replay_state(&config, &log.moves)?;
    let outcome = state.outcome()?;
    match &outcome {
        Some(o) => {
            let who = o.winner.map_or_else(|| "nobody".to_string(), |w| w.to_string());
            writeln!(out, "outcome: {who} wins ({})", o.verdict.summary()).unwrap();
        }
        None => writeln!(
            out,
            "outcome: in progress ({} unresolved, {} to move)",
            state.diagram().unresolved_crossings().len(),
            state.mover()
        )
        .unwrap(),
    }
    let json = json!({
        "first": first,
        "plies": plies,
        "terminal": state.is_terminal(),
        "winner": outcome.as_ref().and_then(|o| o.winner),
        "verdict": outcome.as_ref().map(|o| &o.verdict),
    });
    Ok(Output::ok(out, json))
}

pub fn solve(args: &SolveArgs) -> Result<Output, CliError> {
    let first: Role = args.first.into();
    let options = SolveOptions { bound: args.max_crossings, budget: args.budget, ..SolveOptions::default() };
    let result = match (&args.input.word, args.diagram) {
        (Some(text), false) => {
            let word = parse_word(text)?.to_shadow();
            let closure = word_closure(&word, args.input.closure.map(Into::into))?;
            solve_rational_with(&word, closure, first, &options)?
        }
        _ => {
            let d = load_diagram(&args.input)?;
            let state = new_game(&GameConfig { shadow: d.to_shadow(), first_mover: first, budget: args.budget })?;
            solve_diagram_with(&state, &options)?
        }
    };
    let pv: Vec<String> = result.principal_variation.iter().map(|m| m.to_string()).collect();
    let mut out = format!("{}\n", result.summary());
    writeln!(out, "principal variation: {}", pv.join(", ")).unwrap();
    writeln!(out, "nodes: {}", result.nodes).unwrap();
    if result.unknown_influence {
        writeln!(out, "warning: undecided terminal diagrams affect this result").unwrap();
    }
    let mut json = serde_json::to_value(&result).expect("solve results serialize");
    json["summary"] = json!(result.summary());
    Ok(Output::ok(out, json))
}

pub fn verify(args: &VerifyArgs) -> Result<Output, CliError> {
    let d = load_diagram(&args.input)?;
    let d = d.to_shadow();
    if d.crossing_count() > args.max_crossings {
        return Err(CliError::Usage(format!("{} crossings exceed --max-crossings {}", d.crossing_count(), args.max_crossings)));
    }
    let mut config = GameConfig::new(d, args.first.into());
    config.budget = args.budget;
    let ids = match &args.strategy {
        Some(name) => vec![name.parse::<StrategyId>().map_err(CliError::Usage)?],
        None => applicability(&config).into_iter().filter(|a| a.applies).map(|a| a.id).collect(),
    };
    let mut out = String::new();
    let mut reports = Vec::new();
    let mut success = true;
    if ids.is_empty() {
        writeln!(out, "no strategy applies").unwrap();
    }
    for id in ids {
        let report = verify_strategy(id, &config)?;
        let status = if report.is_clean() { "ok" } else { "FAILED" };
        success &= report.is_clean();
        writeln!(out, "{id} ({}): {status}, {}", report.role.map(|r| r.to_string()).unwrap_or_default(), report.summary())
            .unwrap();
        for line in report.loss_lines.iter().chain(&report.undecided_lines).take(5) {
            let moves: Vec<String> = line.iter().map(|m| m.to_string()).collect();
            writeln!(out, "    line: {}", moves.join(", ")).unwrap();
        }
        reports.push(report);
    }
    Ok(Output { text: out, json: json!({ "reports": reports, "success": success }), success })
}

pub fn sweep(args: &SweepArgs) -> Result<Output, CliError> {
    let ids: Vec<u8> = if args.criteria.is_empty() { CRITERIA.to_vec() } else { args.criteria.clone() };
    let reports: Vec<_> = ids.into_iter().map(run_criterion).collect();
    let mut out = String::new();
    for r in &reports {
        writeln!(out, "{}", r.line()).unwrap();
        for m in &r.mismatches {
            writeln!(out, "    mismatch: {m}").unwrap();
        }
    }
    let success = reports.iter().all(|r| r.passed());
    let passed = reports.iter().filter(|r| r.passed()).count();
    writeln!(out, "{passed} of {} criteria passed", reports.len()).unwrap();
    Ok(Output { text: out, json: json!({ "criteria": reports, "success": success }), success })
}

pub fn serve(args: &ServeArgs) -> Result<Output, CliError> {
    let config = ServiceConfig {
        data_dir: args.data_dir.clone(),
        ttl: Some(Duration::from_secs(args.ttl_secs)),
        ..ServiceConfig::default()
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|source| CliError::Io { path: "runtime".into(), source })?;
    eprintln!("listening on http://{}", args.addr);
    runtime.block_on(linkgame_service::serve(args.addr, config))?;
    Ok(Output::ok(String::new(), Value::Null))
}
