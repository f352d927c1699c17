//! Rationalizability: a strategy is rationalizable if some structure has a
//! state where it is played and rationality is commonly believed. Witnesses
//! are searched among small point-belief structures, so a found witness is a
//! proof while exhausting the bound proves nothing.

use std::ops::ControlFlow;

use super::SolveError;
use crate::checker::{CheckError, CompiledGame, Evaluator, NodeId};
use crate::game::Game;
use crate::kripke::{
    enumerate_point_belief_structures, for_each_rooted_point_structure, validate_structure,
    EnumerationOptions, GammaStructure,
};
use crate::lang::{Formula, PlayerId, StrategyId};

pub const DEFAULT_MAX_STATES: usize = 6;

/// How candidate structures are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMethod {
    /// Structures in which every state is reachable from the candidate
    /// state, generated once each in discovery order.
    #[default]
    Rooted,
    /// Every structure up to relabelling, checking all of its states.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatOutcome {
    Witnessed {
        structure: GammaStructure,
        state: usize,
    },
    Exhausted {
        max_states: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatWitness {
    pub player: PlayerId,
    pub strategy: StrategyId,
    pub outcome: RatOutcome,
}

impl RatWitness {
    pub fn is_witnessed(&self) -> bool {
        matches!(self.outcome, RatOutcome::Witnessed { .. })
    }

    pub fn structure(&self) -> Option<(&GammaStructure, usize)> {
        match &self.outcome {
            RatOutcome::Witnessed { structure, state } => Some((structure, *state)),
            RatOutcome::Exhausted { .. } => None,
        }
    }
}

/// `play_i(σ) ∧ CB RAT`
pub fn witness_formula(game: &Game, player: &str, strategy: &str) -> Formula {
    let rat = Formula::all_rational(game.form().players()).expect("nonempty player list");
    Formula::play(player, strategy).and(Formula::common_belief(rat))
}

fn indices(game: &Game, player: &str, strategy: &str) -> Result<(usize, usize), SolveError> {
    let form = game.form();
    let i = form
        .player_index(player)
        .ok_or_else(|| CheckError::UnknownPlayer(player.to_owned()))?;
    let s = form
        .strategy_index(i, strategy)
        .ok_or_else(|| CheckError::UnknownStrategy {
            player: player.to_owned(),
            strategy: strategy.to_owned(),
        })?;
    Ok((i, s))
}

/// First state of `m` where `strategy` is played under common belief of
/// rationality, if any.
pub fn check_rationalizable_witness(
    game: &Game,
    m: &GammaStructure,
    player: &str,
    strategy: &str,
) -> Result<Option<usize>, SolveError> {
    indices(game, player, strategy)?;
    let report = validate_structure(m, game.form())?;
    if !report.is_ok() {
        return Err(SolveError::InvalidStructure(report));
    }
    let f = witness_formula(game, player, strategy);
    let ext = Evaluator::with_game(m, game)?.extension(&f)?;
    let first = ext.iter().next();
    Ok(first)
}

struct Query<'g> {
    compiled: CompiledGame<'g>,
    node: NodeId,
}

impl<'g> Query<'g> {
    fn new(game: &'g Game, player: &str, strategy: &str) -> Result<Self, SolveError> {
        let mut compiled = CompiledGame::new(game);
        let node = compiled.compile(&witness_formula(game, player, strategy))?;
        Ok(Self { compiled, node })
    }

    fn holds_at(&self, m: &GammaStructure) -> Result<Option<usize>, CheckError> {
        let mut ev = Evaluator::from_compiled(&self.compiled, m);
        let ext = ev.eval(self.node)?;
        let first = ext.iter().next();
        Ok(first)
    }

    fn holds_at_root(&self, m: &GammaStructure) -> Result<bool, CheckError> {
        let mut ev = Evaluator::from_compiled(&self.compiled, m);
        Ok(ev.eval(self.node)?.contains(0))
    }

    /// First rooted structure with exactly `n` states witnessing the query
    /// at its root.
    fn rooted(
        &self,
        game: &Game,
        player: usize,
        strategy: usize,
        n: usize,
    ) -> Result<Option<GammaStructure>, CheckError> {
        let mut found = None;
        let mut error = None;
        let _ = for_each_rooted_point_structure(
            game.form(),
            n,
            !game.form().atoms().is_empty(),
            |p| p[player] == strategy,
            |m| match self.holds_at_root(m) {
                Ok(true) => {
                    found = Some(m.clone());
                    ControlFlow::Break(())
                }
                Ok(false) => ControlFlow::Continue(()),
                Err(e) => {
                    error = Some(e);
                    ControlFlow::Break(())
                }
            },
        );
        match error {
            Some(e) => Err(e),
            None => Ok(found),
        }
    }
}

/// Searches structures of 1..=`max_states` states for a witness, smallest
/// first.
pub fn search_rationalizable(
    game: &Game,
    player: &str,
    strategy: &str,
    max_states: usize,
) -> Result<RatWitness, SolveError> {
    search_rationalizable_with(game, player, strategy, max_states, SearchMethod::Rooted)
}

pub fn search_rationalizable_with(
    game: &Game,
    player: &str,
    strategy: &str,
    max_states: usize,
    method: SearchMethod,
) -> Result<RatWitness, SolveError> {
    if max_states == 0 {
        return Err(SolveError::InvalidBound("max_states must be at least 1"));
    }
    let (i, s) = indices(game, player, strategy)?;
    let query = Query::new(game, player, strategy)?;
    let atoms = !game.form().atoms().is_empty();
    let mut found: Option<(GammaStructure, usize)> = None;
    let mut error: Option<CheckError> = None;

    match method {
        SearchMethod::Rooted => {
            for n in 1..=max_states {
                if let Some(m) = query.rooted(game, i, s, n)? {
                    found = Some((m, 0));
                    break;
                }
            }
        }
        SearchMethod::Exhaustive => {
            let opts = EnumerationOptions {
                atoms_enabled: atoms,
                uniform_supports: false,
            };
            for m in enumerate_point_belief_structures(game.form(), max_states, opts) {
                match query.holds_at(&m) {
                    Ok(Some(k)) => {
                        found = Some((m, k));
                        break;
                    }
                    Ok(None) => {}
                    Err(e) => {
                        error = Some(e);
                        break;
                    }
                }
            }
        }
    }
    if let Some(e) = error {
        return Err(e.into());
    }
    let outcome = match found {
        Some((structure, state)) => {
            // re-check through the public path before reporting
            let confirmed = check_rationalizable_witness(game, &structure, player, strategy)?;
            debug_assert!(
                confirmed.is_some(),
                "search produced a structure the checker rejects"
            );
            match confirmed {
                Some(_) => RatOutcome::Witnessed { structure, state },
                None => return Err(SolveError::Inconsistent("witness failed re-verification")),
            }
        }
        None => RatOutcome::Exhausted { max_states },
    };
    Ok(RatWitness {
        player: game.form().player(i).clone(),
        strategy: game.form().strategies(i)[s].clone(),
        outcome,
    })
}

/// Some rationalizable strategy of `player`: deepens the state bound for all
/// strategies together, so the smallest witness over all strategies is found
/// without exhausting the others first.
pub fn find_rationalizable_strategy(
    game: &Game,
    player: &str,
    max_states: usize,
) -> Result<Option<RatWitness>, SolveError> {
    if max_states == 0 {
        return Err(SolveError::InvalidBound("max_states must be at least 1"));
    }
    let form = game.form();
    let i = form
        .player_index(player)
        .ok_or_else(|| CheckError::UnknownPlayer(player.to_owned()))?;
    let queries = form
        .strategies(i)
        .iter()
        .map(|s| Query::new(game, player, s.as_str()))
        .collect::<Result<Vec<_>, _>>()?;
    for n in 1..=max_states {
        for (s, query) in queries.iter().enumerate() {
            if let Some(structure) = query.rooted(game, i, s, n)? {
                let name = form.strategies(i)[s].clone();
                if check_rationalizable_witness(game, &structure, player, name.as_str())?.is_none()
                {
                    return Err(SolveError::Inconsistent("witness failed re-verification"));
                }
                return Ok(Some(RatWitness {
                    player: form.player(i).clone(),
                    strategy: name,
                    outcome: RatOutcome::Witnessed {
                        structure,
                        state: 0,
                    },
                }));
            }
        }
    }
    Ok(None)
}

/// Runs the witness search for every strategy of every player, in form order.
pub fn rationalizable_set(game: &Game, max_states: usize) -> Result<Vec<RatWitness>, SolveError> {
    let form = game.form();
    let mut out = Vec::new();
    for (i, p) in form.players().iter().enumerate() {
        for s in form.strategies(i) {
            out.push(search_rationalizable(
                game,
                p.as_str(),
                s.as_str(),
                max_states,
            )?);
        }
    }
    Ok(out)
}
