//! Command-line front end. Exit codes: 0 success or true, 1 a check that
//! came out false or a semantic error, 2 usage, file or parse errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog;
use crate::checker::{CheckError, Evaluator};
use crate::game::{Game, GameForm};
use crate::io::{self, IoError};
use crate::kripke::{validate_structure, GammaStructure, MixedProfile};
use crate::lang::{parse_formula, render_with};
use crate::repro::{self, ReproResult};
use crate::solve::{
    find_nash, is_nash, rationalizable_set, search_rationalizable_with, NashOptions, RatOutcome,
    SearchMethod, SolveError, DEFAULT_DENOMINATOR_BOUND, DEFAULT_MAX_STATES,
};

#[derive(Debug, Parser)]
#[command(
    name = "lbg",
    version,
    about = "Model checking and solution concepts for language-based games"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check game and structure files. Structures are checked against
    /// `--game` when given, else against a form read off the file.
    Validate {
        #[arg(long)]
        game: Option<String>,
        #[arg(required = true)]
        paths: Vec<String>,
    },
    /// Evaluate a formula over a structure.
    Eval(EvalArgs),
    /// Nash equilibria via characteristic structures.
    Nash {
        #[command(subcommand)]
        command: NashCommand,
    },
    /// Rationalizability via common belief of rationality.
    Rat {
        #[command(subcommand)]
        command: RatCommand,
    },
    /// Built-in games and structures.
    Examples {
        #[command(subcommand)]
        command: ExamplesCommand,
    },
    /// Run the compiled-in reproduction items.
    Repro {
        /// Item id; see `--list`.
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        all: bool,
        #[arg(long, conflicts_with_all = ["id", "all"])]
        list: bool,
    },
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Game file or `builtin:NAME`; needed for RAT.
    #[arg(long)]
    game: Option<String>,
    /// Structure file or `builtin:NAME`.
    #[arg(long)]
    structure: String,
    /// State id; without it the whole extension is printed.
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    formula: String,
    /// Counterfactual override `PLAYER=STRATEGY`.
    #[arg(long = "override", requires = "state", value_name = "PLAYER=STRATEGY")]
    override_: Option<String>,
}

#[derive(Debug, Subcommand)]
enum NashCommand {
    /// Decide whether a mixed profile is a Nash equilibrium.
    Check {
        #[arg(long)]
        game: String,
        /// e.g. `"A: c=1/3, d=2/3; B: d=1"`
        #[arg(long)]
        profile: String,
    },
    /// Check every support profile for an equilibrium.
    Find {
        #[arg(long)]
        game: String,
        /// Grid resolution for three or more players.
        #[arg(long, default_value_t = DEFAULT_DENOMINATOR_BOUND)]
        denominator_bound: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Rooted,
    Exhaustive,
}

#[derive(Debug, Subcommand)]
enum RatCommand {
    /// Search for a structure witnessing one strategy.
    Search {
        #[arg(long)]
        game: String,
        #[arg(long)]
        player: String,
        #[arg(long)]
        strategy: String,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
        #[arg(long, value_enum, default_value = "rooted")]
        method: MethodArg,
        /// Write the witness structure file here.
        #[arg(long)]
        witness_out: Option<String>,
    },
    /// Search every strategy of every player.
    Set {
        #[arg(long)]
        game: String,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ExamplesCommand {
    List,
    /// Print a built-in game or structure as a file.
    Show {
        name: String,
    },
}

#[derive(Debug)]
enum Failure {
    /// Exit 2.
    Input(String),
    /// Exit 1.
    Semantic(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Semantic(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Semantic(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        Failure::Semantic(e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InvalidBound(_) | SolveError::Profile(_) => Failure::Input(e.to_string()),
            other => Failure::Semantic(other.to_string()),
        }
    }
}

fn output_error(e: std::io::Error) -> Failure {
    Failure::Input(format!("cannot write output: {e}"))
}

const BUILTIN: &str = "builtin:";

fn load_game(src: &str) -> Result<Game, Failure> {
    match src.strip_prefix(BUILTIN) {
        Some(name) => {
            catalog::game(name).ok_or_else(|| Failure::Input(format!("no built-in game `{name}`")))
        }
        None => Ok(io::load_game(src)?),
    }
}

fn read_text(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read `{path}`: {e}")))
}

/// A structure plus the game (if any) and form it is read against.
struct Loaded {
    game: Option<Game>,
    form: GameForm,
    structure: GammaStructure,
}

fn load_structure(src: &str, game: Option<Game>) -> Result<Loaded, Failure> {
    if let Some(name) = src.strip_prefix(BUILTIN) {
        let (own, structure) = catalog::structure(name)
            .ok_or_else(|| Failure::Input(format!("no built-in structure `{name}`")))?;
        let game = game.unwrap_or(own);
        let report = validate_structure(&structure, game.form())
            .map_err(|e| Failure::Input(e.to_string()))?;
        if !report.is_ok() {
            return Err(IoError::Invalid(report).into());
        }
        return Ok(Loaded {
            form: game.form().clone(),
            game: Some(game),
            structure,
        });
    }
    let text = read_text(src)?;
    let form = match &game {
        Some(g) => g.form().clone(),
        None => io::infer_form(&text)?,
    };
    let structure = io::structure_from_json(&text, &form)?;
    Ok(Loaded {
        game,
        form,
        structure,
    })
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    )
    .map_err(output_error)
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Validate { game, paths } => validate(game.as_deref(), paths, json, out),
        Command::Eval(args) => eval(args, json, out),
        Command::Nash { command } => match command {
            NashCommand::Check { game, profile } => nash_check(game, profile, json, out),
            NashCommand::Find {
                game,
                denominator_bound,
            } => nash_find(game, *denominator_bound, json, out),
        },
        Command::Rat { command } => match command {
            RatCommand::Search {
                game,
                player,
                strategy,
                max_states,
                method,
                witness_out,
            } => rat_search(
                game,
                player,
                strategy,
                *max_states,
                *method,
                witness_out.as_deref(),
                json,
                out,
            ),
            RatCommand::Set { game, max_states } => rat_set(game, *max_states, json, out),
        },
        Command::Examples { command } => match command {
            ExamplesCommand::List => examples_list(json, out),
            ExamplesCommand::Show { name } => examples_show(name, out),
        },
        Command::Repro { id, all, list } => repro_cmd(id.as_deref(), *all, *list, json, out),
    }
}

fn validate(
    game: Option<&str>,
    paths: &[String],
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let game = game.map(load_game).transpose()?;
    let mut results = Vec::new();
    let mut all_ok = true;
    for path in paths {
        let text = read_text(path)?;
        let value = io::parse_json(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        let (kind, violations) = if value.get("states").is_some() {
            let form = match &game {
                Some(g) => g.form().clone(),
                None => {
                    io::infer_form(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))?
                }
            };
            let m = io::structure_from_json_unchecked(&text, &form)
                .map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            let report = validate_structure(&m, &form)
                .map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            ("structure", report.violations)
        } else {
            io::game_from_json(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            ("game", Vec::new())
        };
        all_ok &= violations.is_empty();
        results.push((path.clone(), kind, violations));
    }
    if json {
        let v: Vec<Value> = results
            .iter()
            .map(|(path, kind, violations)| {
                let report = crate::kripke::ValidationReport {
                    violations: violations.clone(),
                };
                let mut r = io::validation_to_json(&report);
                r["path"] = json!(path);
                r["kind"] = json!(kind);
                r
            })
            .collect();
        emit_json(out, &Value::Array(v))?;
    } else {
        for (path, kind, violations) in &results {
            if violations.is_empty() {
                writeln!(out, "{path}: ok ({kind})").map_err(output_error)?;
            } else {
                writeln!(out, "{path}: {} violation(s)", violations.len()).map_err(output_error)?;
                for v in violations {
                    writeln!(out, "  {v}").map_err(output_error)?;
                }
            }
        }
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn eval(args: &EvalArgs, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let game = args.game.as_deref().map(load_game).transpose()?;
    let loaded = load_structure(&args.structure, game)?;
    let form = &loaded.form;
    let m = &loaded.structure;
    let f =
        parse_formula(&args.formula, form).map_err(|e| Failure::Input(format!("formula: {e}")))?;
    let rendered = render_with(&f, form);
    let mut ev = match &loaded.game {
        Some(g) => Evaluator::with_game(m, g)?,
        None => Evaluator::new(m, form)?,
    };
    let Some(state_id) = &args.state else {
        let ext = ev.extension(&f)?;
        let ids: Vec<&str> = ext.iter().map(|k| m.state(k).id.as_str()).collect();
        if json {
            emit_json(out, &json!({"formula": rendered, "extension": ids}))?;
        } else {
            writeln!(out, "[[{rendered}]] = {{{}}}", ids.join(", ")).map_err(output_error)?;
        }
        return Ok(0);
    };
    let state = m
        .state_index(state_id)
        .ok_or_else(|| Failure::Input(format!("no state `{state_id}`")))?;
    let (value, over) = match &args.override_ {
        None => (ev.holds(state, &f)?, None),
        Some(spec) => {
            let (p, s) = spec.split_once('=').ok_or_else(|| {
                Failure::Input(format!("override `{spec}` is not PLAYER=STRATEGY"))
            })?;
            let (p, s) = (p.trim(), s.trim());
            let i = form
                .player_index(p)
                .ok_or_else(|| Failure::Input(format!("unknown player `{p}`")))?;
            let k = form.strategy_index(i, s).ok_or_else(|| {
                Failure::Input(format!("unknown strategy `{s}` for player `{p}`"))
            })?;
            (ev.counterfactual_holds(state, i, k, &f)?, Some((p, s)))
        }
    };
    if json {
        emit_json(
            out,
            &json!({
                "formula": rendered,
                "state": state_id,
                "override": over.map(|(p, s)| json!({"player": p, "strategy": s})),
                "holds": value,
            }),
        )?;
    } else {
        let suffix = over
            .map(|(p, s)| format!(" with {p} playing {s}"))
            .unwrap_or_default();
        writeln!(out, "{value}").map_err(output_error)?;
        writeln!(out, "  {rendered} at {state_id}{suffix}").map_err(output_error)?;
    }
    Ok(if value { 0 } else { 1 })
}

fn nash_check(game: &str, profile: &str, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let game = load_game(game)?;
    let mu = MixedProfile::parse(game.form(), profile)
        .map_err(|e| Failure::Input(format!("profile: {e}")))?;
    let verdict = is_nash(&game, &mu)?;
    if json {
        emit_json(
            out,
            &json!({"profile": mu.describe(game.form()), "nash": verdict}),
        )?;
    } else {
        writeln!(out, "{verdict}").map_err(output_error)?;
        writeln!(out, "  {}", mu.describe(game.form())).map_err(output_error)?;
    }
    Ok(if verdict { 0 } else { 1 })
}

fn nash_find(game: &str, bound: usize, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let game = load_game(game)?;
    let form = game.form();
    let report = find_nash(
        &game,
        NashOptions {
            denominator_bound: bound,
        },
    )?;
    if json {
        emit_json(out, &io::nash_report_to_json(&report, form))?;
        return Ok(0);
    }
    let completeness = if report.method.is_complete() {
        "complete".to_owned()
    } else {
        format!("incomplete, denominators up to {bound}")
    };
    writeln!(out, "method: {} ({completeness})", report.method.name()).map_err(output_error)?;
    let width = report
        .supports
        .iter()
        .map(|v| v.support.describe(form).len())
        .max()
        .unwrap_or(0);
    for v in &report.supports {
        let support = v.support.describe(form);
        match &v.sample {
            Some(mu) => writeln!(out, "  {support:width$}  feasible    {}", mu.describe(form)),
            None => writeln!(out, "  {support:width$}  infeasible"),
        }
        .map_err(output_error)?;
    }
    writeln!(
        out,
        "{} feasible supports of {}",
        report.feasible_count(),
        report.supports.len()
    )
    .map_err(output_error)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn rat_search(
    game: &str,
    player: &str,
    strategy: &str,
    max_states: usize,
    method: MethodArg,
    witness_out: Option<&str>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let game = load_game(game)?;
    let method = match method {
        MethodArg::Rooted => SearchMethod::Rooted,
        MethodArg::Exhaustive => SearchMethod::Exhaustive,
    };
    let w = search_rationalizable_with(&game, player, strategy, max_states, method)?;
    if let (Some(path), Some((m, _))) = (witness_out, w.structure()) {
        let text = serde_json::to_string_pretty(&io::structure_to_json(m, game.form()))
            .expect("serializable");
        std::fs::write(path, text + "\n")
            .map_err(|e| Failure::Input(format!("cannot write `{path}`: {e}")))?;
    }
    if json {
        emit_json(out, &io::rat_witness_to_json(&w, game.form()))?;
    } else {
        match &w.outcome {
            RatOutcome::Witnessed { structure, state } => {
                writeln!(
                    out,
                    "witnessed: {player} playing {strategy} at state {} of a {}-state structure",
                    structure.state(*state).id,
                    structure.len()
                )
                .map_err(output_error)?;
                write_structure(out, structure, game.form())?;
            }
            RatOutcome::Exhausted { max_states } => {
                writeln!(out, "exhausted: no witness with up to {max_states} states")
                    .map_err(output_error)?;
            }
        }
    }
    Ok(if w.is_witnessed() { 0 } else { 1 })
}

fn write_structure(
    out: &mut dyn Write,
    m: &GammaStructure,
    form: &GameForm,
) -> Result<(), Failure> {
    for s in m.states() {
        let profile = form.profile_label(&s.profile);
        let atoms: Vec<&str> = s.atoms.iter().map(|&a| form.atoms()[a].as_str()).collect();
        let beliefs: Vec<String> = form
            .players()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let entries: Vec<String> = s.beliefs[i]
                    .weights()
                    .into_iter()
                    .map(|(t, w)| {
                        if w == num_traits::One::one() {
                            m.state(t).id.clone()
                        } else {
                            format!("{}:{}", m.state(t).id, crate::rational::format_rational(&w))
                        }
                    })
                    .collect();
                format!("{p}->{}", entries.join("+"))
            })
            .collect();
        let atoms = if atoms.is_empty() {
            String::new()
        } else {
            format!(" [{}]", atoms.join(", "))
        };
        writeln!(out, "  {} {profile}{atoms}  {}", s.id, beliefs.join(" "))
            .map_err(output_error)?;
    }
    Ok(())
}

fn rat_set(game: &str, max_states: usize, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let game = load_game(game)?;
    let set = rationalizable_set(&game, max_states)?;
    if json {
        let v: Vec<Value> = set
            .iter()
            .map(|w| io::rat_witness_to_json(w, game.form()))
            .collect();
        emit_json(out, &Value::Array(v))?;
    } else {
        for w in &set {
            let verdict = match &w.outcome {
                RatOutcome::Witnessed { structure, .. } => format!(
                    "witnessed ({} state{})",
                    structure.len(),
                    if structure.len() == 1 { "" } else { "s" }
                ),
                RatOutcome::Exhausted { max_states } => format!("exhausted at {max_states}"),
            };
            writeln!(out, "{} {}  {verdict}", w.player, w.strategy).map_err(output_error)?;
        }
    }
    Ok(0)
}

fn examples_list(json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    if json {
        let entries = |es: &[catalog::Entry]| -> Vec<Value> {
            es.iter()
                .map(|e| json!({"name": e.name, "summary": e.summary}))
                .collect()
        };
        emit_json(
            out,
            &json!({"games": entries(catalog::game_entries()), "structures": entries(catalog::structure_entries())}),
        )?;
        return Ok(0);
    }
    writeln!(out, "games:").map_err(output_error)?;
    for e in catalog::game_entries() {
        writeln!(out, "  {:22} {}", e.name, e.summary).map_err(output_error)?;
    }
    writeln!(out, "structures:").map_err(output_error)?;
    for e in catalog::structure_entries() {
        writeln!(out, "  {:22} {}", e.name, e.summary).map_err(output_error)?;
    }
    Ok(0)
}

fn examples_show(name: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let name = name.strip_prefix(BUILTIN).unwrap_or(name);
    let v = if let Some(g) = catalog::game(name) {
        io::game_to_json(&g)
    } else if let Some((g, m)) = catalog::structure(name) {
        io::structure_to_json(&m, g.form())
    } else {
        return Err(Failure::Input(format!(
            "no built-in game or structure `{name}`"
        )));
    };
    emit_json(out, &v)?;
    Ok(0)
}

fn repro_cmd(
    id: Option<&str>,
    all: bool,
    list: bool,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if list || (id.is_none() && !all) {
        for it in repro::items() {
            writeln!(out, "{:14} {:9} {}", it.id, it.basis.as_str(), it.claim)
                .map_err(output_error)?;
        }
        return Ok(if list { 0 } else { 2 });
    }
    let results: Vec<ReproResult> = match id {
        Some(id) => vec![repro::item(id)
            .ok_or_else(|| Failure::Input(format!("no repro item `{id}`")))?
            .run()],
        None => repro::run_all(),
    };
    if json {
        emit_json(out, &serde_json::to_value(&results).expect("serializable"))?;
    } else {
        for r in &results {
            writeln!(
                out,
                "{} {} [{}] {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.id,
                r.basis.as_str(),
                r.claim
            )
            .map_err(output_error)?;
            writeln!(out, "  expected: {}", r.expected).map_err(output_error)?;
            writeln!(out, "  observed: {}", r.observed).map_err(output_error)?;
        }
    }
    Ok(if results.iter().all(|r| r.pass) { 0 } else { 1 })
}
