//! JSON files for games and structures, and JSON renderings of solver
//! reports. Rationals are written as `"p/q"` strings.
//!
//! Game file:
//!
//! ```json
//! {"players": ["A", "B"],
//!  "strategies": {"A": ["c", "d"], "B": ["c", "d"]},
//!  "atoms": [],
//!  "utilities": {"A": [{"guard": "play(A,c) and play(B,c)", "value": "3"}, ...], ...}}
//! ```
//!
//! A classical game may give `"payoffs": {"(c,d)": ["0", "5"], ...}` instead
//! of `"utilities"`. `"atom_groups"` lists sets of atoms exactly one of which
//! holds at every state.
//!
//! Structure file:
//!
//! ```json
//! {"states": [{"id": "w1", "profile": {"A": "c", "B": "c"}, "atoms": [],
//!              "beliefs": {"A": {"w1": "1"}, "B": {"w2": "1"}}}, ...]}
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::checker::Extension;
use crate::game::{
    compile_classical, FiniteUtilitySpec, Game, GameError, GameForm, PayoffTable, UtilityGuard,
};
use crate::kripke::{Belief, GammaStructure, StructureBuilder, StructureError, ValidationReport};
use crate::lang::{parse_formula, render_with, ParseError, PlayerId, StrategyId};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::solve::{NashReport, RatOutcome, RatWitness};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read `{path}`: {message}")]
    Read { path: String, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {source}")]
    Formula { path: String, source: ParseError },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("structure violates {}", .0.summary())]
    Invalid(ValidationReport),
}

fn schema(path: &str, message: impl Into<String>) -> IoError {
    IoError::Schema {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

fn object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, IoError> {
    v.as_object()
        .ok_or_else(|| schema(path, "expected an object"))
}

fn array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>, IoError> {
    v.as_array()
        .ok_or_else(|| schema(path, "expected an array"))
}

fn string<'v>(v: &'v Value, path: &str) -> Result<&'v str, IoError> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn strings(v: &Value, path: &str) -> Result<Vec<String>, IoError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, x)| string(x, &format!("{path}[{k}]")).map(str::to_owned))
        .collect()
}

/// A rational given as `"p/q"`, an integer string, or a JSON integer.
fn rational(v: &Value, path: &str) -> Result<Rational, IoError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(schema(path, "expected a rational string such as \"3/4\"")),
    };
    parse_rational(&text).map_err(|e| schema(path, e.to_string()))
}

fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), IoError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(&format!("{path}.{key}"), "unexpected key"));
        }
    }
    Ok(())
}

fn form_from_json(root: &Map<String, Value>) -> Result<GameForm, IoError> {
    let players = strings(
        root.get("players")
            .ok_or_else(|| schema("$", "missing key `players`"))?,
        "$.players",
    )?;
    let strategies = object(
        root.get("strategies")
            .ok_or_else(|| schema("$", "missing key `strategies`"))?,
        "$.strategies",
    )?;
    for key in strategies.keys() {
        if !players.contains(key) {
            return Err(schema(
                &format!("$.strategies.{key}"),
                "not a declared player",
            ));
        }
    }
    let mut builder = GameForm::builder();
    for p in &players {
        let path = format!("$.strategies.{p}");
        let list = strategies.get(p).ok_or_else(|| {
            schema(
                "$.strategies",
                format!("missing strategies for player `{p}`"),
            )
        })?;
        builder = builder.player(p, strings(list, &path)?);
    }
    if let Some(atoms) = root.get("atoms") {
        for a in strings(atoms, "$.atoms")? {
            builder = builder.atom(&a);
        }
    }
    if let Some(groups) = root.get("atom_groups") {
        for (k, g) in array(groups, "$.atom_groups")?.iter().enumerate() {
            builder = builder.exclusive_atoms(strings(g, &format!("$.atom_groups[{k}]"))?);
        }
    }
    Ok(builder.build()?)
}

fn payoffs_from_json(form: &GameForm, v: &Value) -> Result<PayoffTable, IoError> {
    let mut table = PayoffTable::new();
    for (key, row) in object(v, "$.payoffs")? {
        let path = format!("$.payoffs.{key}");
        let inner = key.trim().trim_start_matches('(').trim_end_matches(')');
        let names: Vec<StrategyId> = inner
            .split(',')
            .map(|s| StrategyId::new(s.trim()))
            .collect();
        let values = array(row, &path)?
            .iter()
            .enumerate()
            .map(|(k, x)| rational(x, &format!("{path}[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != form.player_count() {
            return Err(schema(
                &path,
                format!(
                    "expected {} payoffs, found {}",
                    form.player_count(),
                    values.len()
                ),
            ));
        }
        table.insert(names, values);
    }
    Ok(table)
}

/// Parses a game file's contents.
pub fn game_from_json(text: &str) -> Result<Game, IoError> {
    let value = parse_json(text)?;
    let root = object(&value, "$")?;
    check_keys(
        root,
        "$",
        &[
            "players",
            "strategies",
            "atoms",
            "atom_groups",
            "utilities",
            "payoffs",
        ],
    )?;
    let form = form_from_json(root)?;
    match (root.get("utilities"), root.get("payoffs")) {
        (Some(_), Some(_)) => Err(schema(
            "$",
            "give either `utilities` or `payoffs`, not both",
        )),
        (None, None) => Err(schema("$", "missing key `utilities` (or `payoffs`)")),
        (None, Some(p)) => {
            if !form.atoms().is_empty() {
                return Err(GameError::ExtraAtoms.into());
            }
            let table = payoffs_from_json(&form, p)?;
            Ok(compile_classical(&form, &table)?)
        }
        (Some(u), None) => {
            let utilities = object(u, "$.utilities")?;
            let mut specs = BTreeMap::new();
            for (player, guards) in utilities {
                let path = format!("$.utilities.{player}");
                let mut list = Vec::new();
                for (k, g) in array(guards, &path)?.iter().enumerate() {
                    let gpath = format!("{path}[{k}]");
                    let obj = object(g, &gpath)?;
                    check_keys(obj, &gpath, &["guard", "value"])?;
                    let text = string(
                        obj.get("guard")
                            .ok_or_else(|| schema(&gpath, "missing key `guard`"))?,
                        &format!("{gpath}.guard"),
                    )?;
                    let guard = parse_formula(text, &form).map_err(|source| IoError::Formula {
                        path: format!("{gpath}.guard"),
                        source,
                    })?;
                    let value = rational(
                        obj.get("value")
                            .ok_or_else(|| schema(&gpath, "missing key `value`"))?,
                        &format!("{gpath}.value"),
                    )?;
                    list.push(UtilityGuard::new(guard, value));
                }
                specs.insert(PlayerId::new(player.clone()), FiniteUtilitySpec::new(list));
            }
            Ok(Game::new(form, specs)?)
        }
    }
}

pub fn load_game(path: impl AsRef<Path>) -> Result<Game, IoError> {
    game_from_json(&read(path.as_ref())?)
}

/// Parses a structure without checking the Γ-structure conditions.
pub fn structure_from_json_unchecked(
    text: &str,
    form: &GameForm,
) -> Result<GammaStructure, IoError> {
    let value = parse_json(text)?;
    structure_from_value(&value, form)
}

fn structure_from_value(value: &Value, form: &GameForm) -> Result<GammaStructure, IoError> {
    let root = object(value, "$")?;
    check_keys(root, "$", &["states"])?;
    let states = array(
        root.get("states")
            .ok_or_else(|| schema("$", "missing key `states`"))?,
        "$.states",
    )?;
    let mut builder = StructureBuilder::new(form);
    let mut beliefs = Vec::new();
    for (k, s) in states.iter().enumerate() {
        let path = format!("$.states[{k}]");
        let obj = object(s, &path)?;
        check_keys(obj, &path, &["id", "profile", "atoms", "beliefs"])?;
        let id = string(
            obj.get("id")
                .ok_or_else(|| schema(&path, "missing key `id`"))?,
            &format!("{path}.id"),
        )?;
        let profile = object(
            obj.get("profile")
                .ok_or_else(|| schema(&path, "missing key `profile`"))?,
            &format!("{path}.profile"),
        )?;
        for key in profile.keys() {
            if form.player_index(key).is_none() {
                return Err(schema(&format!("{path}.profile.{key}"), "unknown player"));
            }
        }
        let mut names = Vec::new();
        for p in form.players() {
            let v = profile.get(p.as_str()).ok_or_else(|| {
                schema(
                    &format!("{path}.profile"),
                    format!("missing strategy for player `{p}`"),
                )
            })?;
            names.push(string(v, &format!("{path}.profile.{p}"))?.to_owned());
        }
        let atoms = match obj.get("atoms") {
            Some(a) => strings(a, &format!("{path}.atoms"))?,
            None => Vec::new(),
        };
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let atom_refs: Vec<&str> = atoms.iter().map(String::as_str).collect();
        builder = builder.state_with_atoms(id, &name_refs, &atom_refs);

        let bel = object(
            obj.get("beliefs")
                .ok_or_else(|| schema(&path, "missing key `beliefs`"))?,
            &format!("{path}.beliefs"),
        )?;
        for (player, dist) in bel {
            if form.player_index(player).is_none() {
                return Err(schema(
                    &format!("{path}.beliefs.{player}"),
                    "unknown player",
                ));
            }
            let dpath = format!("{path}.beliefs.{player}");
            let entries = object(dist, &dpath)?
                .iter()
                .map(|(t, w)| Ok((t.clone(), rational(w, &format!("{dpath}.{t}"))?)))
                .collect::<Result<Vec<_>, IoError>>()?;
            beliefs.push((id.to_owned(), player.clone(), entries));
        }
        for p in form.players() {
            if !bel.contains_key(p.as_str()) {
                return Err(schema(
                    &format!("{path}.beliefs"),
                    format!("missing belief for player `{p}`"),
                ));
            }
        }
    }
    for (state, player, entries) in &beliefs {
        let refs: Vec<(&str, Rational)> = entries
            .iter()
            .map(|(t, w)| (t.as_str(), w.clone()))
            .collect();
        builder = builder.belief(state, player, &refs);
    }
    Ok(builder.build_unchecked()?)
}

/// Parses a structure and checks it against the Γ-structure conditions.
pub fn structure_from_json(text: &str, form: &GameForm) -> Result<GammaStructure, IoError> {
    let m = structure_from_json_unchecked(text, form)?;
    let report = crate::kripke::validate_structure(&m, form)?;
    if report.is_ok() {
        Ok(m)
    } else {
        Err(IoError::Invalid(report))
    }
}

pub fn load_structure(path: impl AsRef<Path>, form: &GameForm) -> Result<GammaStructure, IoError> {
    structure_from_json(&read(path.as_ref())?, form)
}

/// A game form read off a structure file: players and strategies in order
/// of first appearance, atoms as mentioned. Used when no game is given.
pub fn infer_form(text: &str) -> Result<GameForm, IoError> {
    let value = parse_json(text)?;
    let root = object(&value, "$")?;
    let states = array(
        root.get("states")
            .ok_or_else(|| schema("$", "missing key `states`"))?,
        "$.states",
    )?;
    let mut players: Vec<(String, Vec<String>)> = Vec::new();
    let mut atoms: Vec<String> = Vec::new();
    for (k, s) in states.iter().enumerate() {
        let path = format!("$.states[{k}]");
        let obj = object(s, &path)?;
        if let Some(profile) = obj.get("profile") {
            for (p, v) in object(profile, &format!("{path}.profile"))? {
                let st = string(v, &format!("{path}.profile.{p}"))?.to_owned();
                match players.iter_mut().find(|(q, _)| q == p) {
                    Some((_, list)) => {
                        if !list.contains(&st) {
                            list.push(st);
                        }
                    }
                    None => players.push((p.clone(), vec![st])),
                }
            }
        }
        if let Some(a) = obj.get("atoms") {
            for atom in strings(a, &format!("{path}.atoms"))? {
                if !atoms.contains(&atom) {
                    atoms.push(atom);
                }
            }
        }
    }
    let mut builder = GameForm::builder();
    for (p, ss) in players {
        builder = builder.player(&p, ss);
    }
    for a in atoms {
        builder = builder.atom(&a);
    }
    Ok(builder.build()?)
}

pub fn game_to_json(game: &Game) -> Value {
    let form = game.form();
    let strategies: Map<String, Value> = form
        .players()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let list = form
                .strategies(i)
                .iter()
                .map(|s| json!(s.as_str()))
                .collect();
            (p.to_string(), Value::Array(list))
        })
        .collect();
    let utilities: Map<String, Value> = form
        .players()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let guards = game
                .utility(i)
                .guards
                .iter()
                .map(|g| json!({"guard": render_with(&g.guard, form), "value": format_rational(&g.value)}))
                .collect();
            (p.to_string(), Value::Array(guards))
        })
        .collect();
    let mut root = Map::new();
    root.insert(
        "players".into(),
        json!(form
            .players()
            .iter()
            .map(|p| p.as_str())
            .collect::<Vec<_>>()),
    );
    root.insert("strategies".into(), Value::Object(strategies));
    root.insert("atoms".into(), json!(form.atoms()));
    if !form.atom_groups().is_empty() {
        let groups: Vec<Vec<&str>> = form
            .atom_groups()
            .iter()
            .map(|g| g.iter().map(|&a| form.atoms()[a].as_str()).collect())
            .collect();
        root.insert("atom_groups".into(), json!(groups));
    }
    root.insert("utilities".into(), Value::Object(utilities));
    Value::Object(root)
}

fn belief_to_json(m: &GammaStructure, b: &Belief) -> Value {
    let entries: Map<String, Value> = b
        .weights()
        .into_iter()
        .map(|(t, w)| (m.state(t).id.clone(), json!(format_rational(&w))))
        .collect();
    Value::Object(entries)
}

pub fn structure_to_json(m: &GammaStructure, form: &GameForm) -> Value {
    let states: Vec<Value> = m
        .states()
        .iter()
        .map(|s| {
            let profile: Map<String, Value> = form
                .players()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    (
                        p.to_string(),
                        json!(form.strategies(i)[s.profile[i]].as_str()),
                    )
                })
                .collect();
            let atoms: Vec<&str> = s.atoms.iter().map(|&a| form.atoms()[a].as_str()).collect();
            let beliefs: Map<String, Value> = form
                .players()
                .iter()
                .enumerate()
                .map(|(i, p)| (p.to_string(), belief_to_json(m, &s.beliefs[i])))
                .collect();
            json!({"id": s.id, "profile": profile, "atoms": atoms, "beliefs": beliefs})
        })
        .collect();
    json!({ "states": states })
}

pub fn validation_to_json(report: &ValidationReport) -> Value {
    json!({
        "ok": report.is_ok(),
        "violations": report.violations.iter().map(|v| json!({
            "condition": v.condition.to_string(),
            "player": v.player.as_ref().map(|p| p.to_string()),
            "state": v.state,
            "detail": v.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn extension_to_json(ext: &Extension, m: &GammaStructure) -> Value {
    json!({
        "formula": ext.formula.to_string(),
        "states": ext.ids(m),
    })
}

pub fn nash_report_to_json(report: &NashReport, form: &GameForm) -> Value {
    let supports: Vec<Value> = report
        .supports
        .iter()
        .map(|v| {
            let sample = v.sample.as_ref().map(|mu| {
                let rows: Map<String, Value> = form
                    .players()
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let row: Map<String, Value> = form
                            .strategies(i)
                            .iter()
                            .enumerate()
                            .map(|(s, name)| {
                                (name.to_string(), json!(format_rational(mu.prob(i, s))))
                            })
                            .collect();
                        (p.to_string(), Value::Object(row))
                    })
                    .collect();
                Value::Object(rows)
            });
            json!({
                "support": v.support.describe(form),
                "feasible": v.is_feasible(),
                "sample": sample,
            })
        })
        .collect();
    let mut root = json!({
        "method": report.method.name(),
        "complete": report.method.is_complete(),
        "feasible": report.feasible_count(),
        "total": report.supports.len(),
        "supports": supports,
    });
    if let crate::solve::Method::Grid { denominator_bound } = report.method {
        root["denominator_bound"] = json!(denominator_bound);
    }
    root
}

pub fn rat_witness_to_json(w: &RatWitness, form: &GameForm) -> Value {
    match &w.outcome {
        RatOutcome::Witnessed { structure, state } => json!({
            "player": w.player.as_str(),
            "strategy": w.strategy.as_str(),
            "verdict": "witnessed",
            "state": structure.state(*state).id,
            "structure": structure_to_json(structure, form),
        }),
        RatOutcome::Exhausted { max_states } => json!({
            "player": w.player.as_str(),
            "strategy": w.strategy.as_str(),
            "verdict": "exhausted",
            "max_states": max_states,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{indignant_altruism, library_book, prisoners_dilemma};

    const PD: &str = r#"{
        "players": ["A", "B"],
        "strategies": {"A": ["c", "d"], "B": ["c", "d"]},
        "payoffs": {"(c,c)": ["3", "3"], "(c,d)": ["0", "5"], "(d,c)": ["5", "0"], "(d,d)": ["1", "1"]}
    }"#;

    #[test]
    fn payoff_shorthand_compiles() {
        let game = game_from_json(PD).unwrap();
        assert_eq!(game, prisoners_dilemma());
    }

    #[test]
    fn game_round_trips_through_json() {
        for game in [indignant_altruism(), library_book(), prisoners_dilemma()] {
            let text = game_to_json(&game).to_string();
            assert_eq!(game_from_json(&text).unwrap(), game);
        }
    }

    #[test]
    fn schema_errors_name_the_path() {
        let bad = PD.replace(r#"["0", "5"]"#, r#"["0", true]"#);
        match game_from_json(&bad) {
            Err(IoError::Schema { path, .. }) => assert_eq!(path, "$.payoffs.(c,d)[1]"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"players": ["A"], "strategies": {"A": ["x"]},
            "utilities": {"A": [{"guard": "play(A,y)", "value": "1"}]}}"#;
        match game_from_json(text) {
            Err(IoError::Formula { path, source }) => {
                assert_eq!(path, "$.utilities.A[0].guard");
                assert!(matches!(source, ParseError::UnknownStrategy { .. }));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(game_from_json("{"), Err(IoError::Json(_))));
    }

    #[test]
    fn structure_round_trip_and_p2_error() {
        let game = indignant_altruism();
        let text = r#"{"states": [
            {"id": "w", "profile": {"A": "c", "B": "c"}, "atoms": [],
             "beliefs": {"A": {"w": "1"}, "B": {"w": "9/10"}}}]}"#;
        match structure_from_json(text, game.form()) {
            Err(IoError::Invalid(report)) => {
                assert_eq!(report.violations.len(), 1);
                assert_eq!(report.violations[0].state.as_deref(), Some("w"));
                assert_eq!(report.violations[0].condition, crate::kripke::Condition::P2);
            }
            other => panic!("{other:?}"),
        }
        let good = text.replace("9/10", "1");
        let m = structure_from_json(&good, game.form()).unwrap();
        let back = structure_to_json(&m, game.form()).to_string();
        assert_eq!(structure_from_json(&back, game.form()).unwrap(), m);
    }

    #[test]
    fn infers_form_from_structure() {
        let text = r#"{"states": [
            {"id": "w", "profile": {"A": "c", "B": "d"}, "atoms": ["rain"],
             "beliefs": {"A": {"w": "1"}, "B": {"w": 1}}}]}"#;
        let form = infer_form(text).unwrap();
        assert_eq!(form.player_count(), 2);
        assert_eq!(form.atoms(), ["rain".to_string()]);
        let m = structure_from_json(text, &form).unwrap();
        assert_eq!(m.state(0).beliefs[1], Belief::Point(0));
    }
}
