//! Model checking over Γ-structures: truth sets of formulas, common belief,
//! counterfactual evaluation under a changed own strategy, and the
//! utility-based notions built on it (expected utility, best responses,
//! rationality).

mod compile;

use std::borrow::Cow;
use std::collections::HashMap;

use num_traits::Zero;
use thiserror::Error;

use crate::game::{Game, GameForm};
use crate::kripke::{check_shape, GammaStructure, StateSet, StructureError};
use crate::lang::{Formula, StrategyId};
use crate::rational::Rational;

pub(crate) use compile::{CompiledGame, Node, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("formula mentions RAT but no game (utilities) was supplied")]
    RatWithoutGame,
    #[error("unknown player `{0}`")]
    UnknownPlayer(String),
    #[error("unknown strategy `{strategy}` for player `{player}`")]
    UnknownStrategy { player: String, strategy: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("no state with index {0}")]
    UnknownState(usize),
    #[error("{0} is not supported in counterfactual evaluation")]
    Unsupported(&'static str),
    #[error(
        "utility of player `{player}` for strategy `{strategy}` at state `{state}`: {matched} guards hold, expected exactly 1"
    )]
    GuardPartition {
        player: String,
        state: String,
        strategy: String,
        matched: usize,
    },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Truth set of a formula in a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub formula: Formula,
    pub states: StateSet,
}

impl Extension {
    pub fn contains(&self, state: usize) -> bool {
        self.states.contains(state)
    }

    /// Ids of the member states, in structure order.
    pub fn ids<'m>(&self, m: &'m GammaStructure) -> Vec<&'m str> {
        self.states.iter().map(|k| m.state(k).id.as_str()).collect()
    }
}

/// Evaluation session for one structure. Truth sets are memoized per
/// subformula and per counterfactual override, so repeated queries share work.
pub struct Evaluator<'a> {
    compiled: Cow<'a, CompiledGame<'a>>,
    m: &'a GammaStructure,
    /// `supports[state][player]`
    supports: Vec<Vec<Vec<usize>>>,
    /// `weights[state][player]`
    weights: Vec<Vec<Vec<(usize, Rational)>>>,
    /// Predecessors in the union of all players' belief-support graphs.
    preds: Vec<Vec<usize>>,
    plain: Vec<Option<StateSet>>,
    counterfactual: HashMap<(NodeId, usize, usize), StateSet>,
    rational: Vec<Option<StateSet>>,
}

impl<'a> Evaluator<'a> {
    /// Session without utilities; RAT is unavailable.
    pub fn new(m: &'a GammaStructure, form: &'a GameForm) -> Result<Self, CheckError> {
        check_shape(m, form)?;
        Ok(Self::build(Cow::Owned(CompiledGame::form_only(form)), m))
    }

    /// Session with the game's utilities, enabling RAT and utility queries.
    pub fn with_game(m: &'a GammaStructure, game: &'a Game) -> Result<Self, CheckError> {
        check_shape(m, game.form())?;
        Ok(Self::build(Cow::Owned(CompiledGame::new(game)), m))
    }

    /// Session reusing a precompiled game. The structure must already match
    /// the form's shape.
    pub(crate) fn from_compiled(compiled: &'a CompiledGame<'a>, m: &'a GammaStructure) -> Self {
        Self::build(Cow::Borrowed(compiled), m)
    }

    fn build(compiled: Cow<'a, CompiledGame<'a>>, m: &'a GammaStructure) -> Self {
        let n = m.len();
        let np = compiled.form.player_count();
        let weights: Vec<Vec<Vec<(usize, Rational)>>> = m
            .states()
            .iter()
            .map(|s| {
                s.beliefs
                    .iter()
                    .map(|b| b.weights().into_iter().collect())
                    .collect()
            })
            .collect();
        let supports: Vec<Vec<Vec<usize>>> = weights
            .iter()
            .map(|row| {
                row.iter()
                    .map(|w| w.iter().map(|(t, _)| *t).collect())
                    .collect()
            })
            .collect();
        let mut preds = vec![Vec::new(); n];
        for (k, row) in supports.iter().enumerate() {
            for support in row {
                for &t in support {
                    if !preds[t].contains(&k) {
                        preds[t].push(k);
                    }
                }
            }
        }
        Self {
            compiled,
            m,
            supports,
            weights,
            preds,
            plain: Vec::new(),
            counterfactual: HashMap::new(),
            rational: vec![None; np],
        }
    }

    pub fn structure(&self) -> &GammaStructure {
        self.m
    }

    pub fn form(&self) -> &GameForm {
        self.compiled.form
    }

    fn node(&mut self, f: &Formula) -> Result<NodeId, CheckError> {
        match self.compiled.lookup(f) {
            Some(id) => Ok(id),
            None => self.compiled.to_mut().compile(f),
        }
    }

    fn check_state(&self, state: usize) -> Result<(), CheckError> {
        if state < self.m.len() {
            Ok(())
        } else {
            Err(CheckError::UnknownState(state))
        }
    }

    fn check_strategy(&self, player: usize, strategy: usize) -> Result<(), CheckError> {
        let form = self.compiled.form;
        if player >= form.player_count() {
            return Err(CheckError::UnknownPlayer(format!("#{player}")));
        }
        if strategy >= form.strategies(player).len() {
            return Err(CheckError::UnknownStrategy {
                player: form.player(player).to_string(),
                strategy: format!("#{strategy}"),
            });
        }
        Ok(())
    }

    pub fn extension(&mut self, f: &Formula) -> Result<StateSet, CheckError> {
        let id = self.node(f)?;
        self.eval(id)
    }

    pub fn holds(&mut self, state: usize, f: &Formula) -> Result<bool, CheckError> {
        self.check_state(state)?;
        Ok(self.extension(f)?.contains(state))
    }

    /// Truth of `f` at `state` when `player` is imagined to play `strategy`
    /// instead of the strategy the state assigns.
    pub fn counterfactual_holds(
        &mut self,
        state: usize,
        player: usize,
        strategy: usize,
        f: &Formula,
    ) -> Result<bool, CheckError> {
        self.check_state(state)?;
        self.check_strategy(player, strategy)?;
        let id = self.node(f)?;
        Ok(self
            .eval_counterfactual(id, player, strategy)?
            .contains(state))
    }

    pub(crate) fn eval(&mut self, id: NodeId) -> Result<StateSet, CheckError> {
        if self.plain.len() < self.compiled.nodes.len() {
            self.plain.resize(self.compiled.nodes.len(), None);
        }
        if let Some(s) = &self.plain[id] {
            return Ok(s.clone());
        }
        let m = self.m;
        let n = m.len();
        let set = match self.compiled.nodes[id] {
            Node::Play(i, s) => StateSet::from_fn(n, |k| m.strategy(k, i) == s),
            Node::Prop(a) => StateSet::from_fn(n, |k| m.state(k).atoms.contains(&a)),
            Node::Rat(i) => self.rational(i)?,
            Node::Not(g) => self.eval(g)?.complement(),
            Node::And(a, b) => {
                let a = self.eval(a)?;
                a.intersection(&self.eval(b)?)
            }
            Node::Believes(i, g) => {
                let inner = self.eval(g)?;
                StateSet::from_fn(n, |k| {
                    self.supports[k][i].iter().all(|&t| inner.contains(t))
                })
            }
            Node::CommonBelief(g) => {
                let inner = self.eval(g)?;
                self.never_reaches(&inner.complement())
            }
        };
        self.plain[id] = Some(set.clone());
        Ok(set)
    }

    /// States from which no state of `bad` is reachable in one or more
    /// belief steps.
    fn never_reaches(&self, bad: &StateSet) -> StateSet {
        let n = self.m.len();
        let mut reaches = StateSet::empty(n);
        let mut queue: Vec<usize> = bad.iter().collect();
        while let Some(t) = queue.pop() {
            for &p in &self.preds[t] {
                if !reaches.contains(p) {
                    reaches.insert(p);
                    queue.push(p);
                }
            }
        }
        reaches.complement()
    }

    fn eval_counterfactual(
        &mut self,
        id: NodeId,
        player: usize,
        strategy: usize,
    ) -> Result<StateSet, CheckError> {
        if let Some(s) = self.counterfactual.get(&(id, player, strategy)) {
            return Ok(s.clone());
        }
        let n = self.m.len();
        let set = match self.compiled.nodes[id] {
            Node::Play(i, s) if i == player => {
                if s == strategy {
                    StateSet::full(n)
                } else {
                    StateSet::empty(n)
                }
            }
            Node::Play(..) | Node::Prop(_) => self.eval(id)?,
            Node::Rat(_) => return Err(CheckError::Unsupported("RAT")),
            Node::CommonBelief(_) => return Err(CheckError::Unsupported("common belief")),
            Node::Not(g) => self.eval_counterfactual(g, player, strategy)?.complement(),
            Node::And(a, b) => {
                let a = self.eval_counterfactual(a, player, strategy)?;
                a.intersection(&self.eval_counterfactual(b, player, strategy)?)
            }
            Node::Believes(j, g) if j == player => {
                let inner = self.eval_counterfactual(g, player, strategy)?;
                StateSet::from_fn(n, |k| {
                    self.supports[k][j].iter().all(|&t| inner.contains(t))
                })
            }
            Node::Believes(..) => {
                // another player's belief: untouched by the override, but its
                // body must still be a valid counterfactual formula
                self.check_counterfactual_body(id)?;
                self.eval(id)?
            }
        };
        self.counterfactual
            .insert((id, player, strategy), set.clone());
        Ok(set)
    }

    fn check_counterfactual_body(&self, id: NodeId) -> Result<(), CheckError> {
        match self.compiled.nodes[id] {
            Node::Play(..) | Node::Prop(_) => Ok(()),
            Node::Rat(_) => Err(CheckError::Unsupported("RAT")),
            Node::CommonBelief(_) => Err(CheckError::Unsupported("common belief")),
            Node::Not(g) | Node::Believes(_, g) => self.check_counterfactual_body(g),
            Node::And(a, b) => {
                self.check_counterfactual_body(a)?;
                self.check_counterfactual_body(b)
            }
        }
    }

    fn game(&self) -> Result<&'a Game, CheckError> {
        self.compiled.game.ok_or(CheckError::RatWithoutGame)
    }

    /// Utility of `player` at `state` had they played `strategy`: the value
    /// of the unique guard holding under the override.
    pub fn counterfactual_utility(
        &mut self,
        state: usize,
        player: usize,
        strategy: usize,
    ) -> Result<Rational, CheckError> {
        self.game()?;
        self.check_state(state)?;
        self.check_strategy(player, strategy)?;
        let guards = self.compiled.guards[player].clone();
        let mut value = None;
        let mut matched = 0;
        for (g, v) in guards {
            if self
                .eval_counterfactual(g, player, strategy)?
                .contains(state)
            {
                matched += 1;
                value = Some(v);
            }
        }
        match (matched, value) {
            (1, Some(v)) => Ok(v),
            _ => {
                let form = self.compiled.form;
                Err(CheckError::GuardPartition {
                    player: form.player(player).to_string(),
                    state: self.m.state(state).id.clone(),
                    strategy: form.strategies(player)[strategy].to_string(),
                    matched,
                })
            }
        }
    }

    /// Expected counterfactual utility under `player`'s belief at `state`.
    pub fn expected_utility(
        &mut self,
        state: usize,
        player: usize,
        strategy: usize,
    ) -> Result<Rational, CheckError> {
        self.check_state(state)?;
        let weights = self.weights[state][player].clone();
        let mut total = Rational::zero();
        for (t, w) in weights {
            total += self.counterfactual_utility(t, player, strategy)? * w;
        }
        Ok(total)
    }

    /// All strategies of `player` maximizing expected utility at `state`.
    pub fn best_responses(
        &mut self,
        state: usize,
        player: usize,
    ) -> Result<Vec<usize>, CheckError> {
        self.check_state(state)?;
        let count = self.compiled.form.strategies(player).len();
        let mut best: Vec<usize> = Vec::new();
        let mut best_value: Option<Rational> = None;
        for s in 0..count {
            let eu = self.expected_utility(state, player, s)?;
            match &best_value {
                Some(b) if eu < *b => {}
                Some(b) if eu == *b => best.push(s),
                _ => {
                    best = vec![s];
                    best_value = Some(eu);
                }
            }
        }
        Ok(best)
    }

    /// States where `player` plays a best response to their beliefs.
    pub fn rational(&mut self, player: usize) -> Result<StateSet, CheckError> {
        self.game()?;
        if let Some(s) = &self.rational[player] {
            return Ok(s.clone());
        }
        let n = self.m.len();
        let mut set = StateSet::empty(n);
        for k in 0..n {
            if self
                .best_responses(k, player)?
                .contains(&self.m.strategy(k, player))
            {
                set.insert(k);
            }
        }
        self.rational[player] = Some(set.clone());
        Ok(set)
    }
}

fn player_index(form: &GameForm, player: &str) -> Result<usize, CheckError> {
    form.player_index(player)
        .ok_or_else(|| CheckError::UnknownPlayer(player.to_owned()))
}

fn strategy_index(
    form: &GameForm,
    player: &str,
    strategy: &str,
) -> Result<(usize, usize), CheckError> {
    let i = player_index(form, player)?;
    let s = form
        .strategy_index(i, strategy)
        .ok_or_else(|| CheckError::UnknownStrategy {
            player: player.to_owned(),
            strategy: strategy.to_owned(),
        })?;
    Ok((i, s))
}

fn session<'a>(
    m: &'a GammaStructure,
    form: &'a GameForm,
    game: Option<&'a Game>,
) -> Result<Evaluator<'a>, CheckError> {
    match game {
        Some(g) => Evaluator::with_game(m, g),
        None => Evaluator::new(m, form),
    }
}

/// Truth set of `f` in `m`. `game` is needed only when `f` mentions RAT; if
/// given, its form is used for the vocabulary.
pub fn extension(
    m: &GammaStructure,
    form: &GameForm,
    f: &Formula,
    game: Option<&Game>,
) -> Result<Extension, CheckError> {
    let states = session(m, form, game)?.extension(f)?;
    Ok(Extension {
        formula: f.clone(),
        states,
    })
}

pub fn holds(
    m: &GammaStructure,
    form: &GameForm,
    state: usize,
    f: &Formula,
    game: Option<&Game>,
) -> Result<bool, CheckError> {
    session(m, form, game)?.holds(state, f)
}

pub fn counterfactual_holds(
    m: &GammaStructure,
    form: &GameForm,
    state: usize,
    player: &str,
    strategy: &str,
    f: &Formula,
) -> Result<bool, CheckError> {
    let (i, s) = strategy_index(form, player, strategy)?;
    Evaluator::new(m, form)?.counterfactual_holds(state, i, s, f)
}

pub fn counterfactual_utility(
    game: &Game,
    m: &GammaStructure,
    state: usize,
    player: &str,
    strategy: &str,
) -> Result<Rational, CheckError> {
    let (i, s) = strategy_index(game.form(), player, strategy)?;
    Evaluator::with_game(m, game)?.counterfactual_utility(state, i, s)
}

pub fn expected_utility(
    game: &Game,
    m: &GammaStructure,
    state: usize,
    player: &str,
    strategy: &str,
) -> Result<Rational, CheckError> {
    let (i, s) = strategy_index(game.form(), player, strategy)?;
    Evaluator::with_game(m, game)?.expected_utility(state, i, s)
}

pub fn best_responses(
    game: &Game,
    m: &GammaStructure,
    state: usize,
    player: &str,
) -> Result<Vec<StrategyId>, CheckError> {
    let i = player_index(game.form(), player)?;
    let best = Evaluator::with_game(m, game)?.best_responses(state, i)?;
    Ok(best
        .into_iter()
        .map(|s| game.form().strategies(i)[s].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{
        compile_classical, deep_surprise, indignant_altruism, library_book, prisoners_dilemma,
        surprise_proposal, IDLE,
    };
    use crate::kripke::{
        build_characteristic_structure, MixedProfile, StructureBuilder, SupportProfile,
    };
    use crate::lang::parse_formula;
    use crate::rational::{int, ratio};

    pub(crate) fn w4(form: &GameForm) -> GammaStructure {
        StructureBuilder::new(form)
            .state("alpha", &["c", "c"])
            .state("beta", &["d", "d"])
            .state("gamma", &["c", "d"])
            .state("delta", &["d", "c"])
            .point("alpha", "A", "alpha")
            .point("beta", "A", "beta")
            .point("gamma", "A", "alpha")
            .point("delta", "A", "beta")
            .point("alpha", "B", "delta")
            .point("beta", "B", "gamma")
            .point("gamma", "B", "gamma")
            .point("delta", "B", "delta")
            .build()
            .unwrap()
    }

    fn parse(game: &Game, text: &str) -> Formula {
        parse_formula(text, game.form()).unwrap()
    }

    #[test]
    fn play_extension_on_uniform_characteristic_structure() {
        let game = prisoners_dilemma();
        let mu = MixedProfile::uniform(game.form(), &SupportProfile::full(game.form()));
        let m = build_characteristic_structure(game.form(), &mu).unwrap();
        let ext = extension(&m, game.form(), &parse(&game, "play(A,c)"), None).unwrap();
        assert_eq!(ext.ids(&m), vec!["(c,c)", "(c,d)"]);
    }

    #[test]
    fn belief_uses_support() {
        let game = indignant_altruism();
        let m = w4(game.form());
        let f = parse(&game, "B[B] play(A,d)");
        let ext = extension(&m, game.form(), &f, None).unwrap();
        // alpha's Bob-support is delta, a (d,·) state
        assert!(ext.contains(0));
        assert!(!ext.contains(2));
    }

    #[test]
    fn w4_common_belief_of_rationality_everywhere() {
        let game = indignant_altruism();
        let m = w4(game.form());
        let ext = extension(&m, game.form(), &parse(&game, "CB RAT"), Some(&game)).unwrap();
        assert!(ext.states.is_full());
        let rat = extension(&m, game.form(), &parse(&game, "RAT"), Some(&game)).unwrap();
        assert!(rat.states.is_full());
    }

    #[test]
    fn rat_requires_game() {
        let game = indignant_altruism();
        let m = w4(game.form());
        let err = extension(&m, game.form(), &Formula::rat("A"), None).unwrap_err();
        assert_eq!(err, CheckError::RatWithoutGame);
    }

    #[test]
    fn own_play_always_holds() {
        let game = indignant_altruism();
        let m = w4(game.form());
        for k in 0..m.len() {
            let f = game.form().play_profile(&m.state(k).profile);
            assert!(holds(&m, game.form(), k, &f, None).unwrap());
        }
    }

    #[test]
    fn possibility_with_supported_state() {
        let game = surprise_proposal();
        let form = game.form();
        let m = StructureBuilder::new(form)
            .state("w", &[IDLE, "q"])
            .state("v", &[IDLE, "p"])
            .belief("w", "A", &[("w", ratio(1, 2)), ("v", ratio(1, 2))])
            .belief("v", "A", &[("w", ratio(1, 2)), ("v", ratio(1, 2))])
            .point("w", "B", "w")
            .point("v", "B", "v")
            .build()
            .unwrap();
        assert!(holds(&m, form, 0, &parse(&game, "P[A] play(B,p)"), None).unwrap());
        assert!(!holds(&m, form, 0, &parse(&game, "B[A] play(B,p)"), None).unwrap());
    }

    #[test]
    fn common_belief_of_valid_formula() {
        let game = indignant_altruism();
        let m = w4(game.form());
        let f = parse(&game, "CB (play(A,c) or play(A,d))");
        assert!(extension(&m, game.form(), &f, None)
            .unwrap()
            .states
            .is_full());
    }

    #[test]
    fn override_reaches_own_beliefs() {
        let game = indignant_altruism();
        let m = w4(game.form());
        let f = parse(&game, "B[A] play(A,d)");
        for k in 0..m.len() {
            assert!(counterfactual_holds(&m, game.form(), k, "A", "d", &f).unwrap());
            assert!(!counterfactual_holds(&m, game.form(), k, "A", "c", &f).unwrap());
        }
    }

    #[test]
    fn override_rejects_rat_and_cb() {
        let game = indignant_altruism();
        let m = w4(game.form());
        let f = parse(&game, "CB play(A,c)");
        assert_eq!(
            counterfactual_holds(&m, game.form(), 0, "A", "c", &f),
            Err(CheckError::Unsupported("common belief"))
        );
        let g = parse(&game, "B[B] CB play(A,c)");
        assert!(counterfactual_holds(&m, game.form(), 0, "A", "c", &g).is_err());
    }

    #[test]
    fn indignant_utilities_at_w4() {
        let game = indignant_altruism();
        let m = w4(game.form());
        // alpha: Bob believes delta, where Alice defects
        assert_eq!(
            counterfactual_utility(&game, &m, 0, "A", "d").unwrap(),
            int(-1)
        );
        assert_eq!(
            counterfactual_utility(&game, &m, 0, "A", "c").unwrap(),
            int(3)
        );
        assert_eq!(expected_utility(&game, &m, 0, "A", "c").unwrap(), int(3));
        assert_eq!(expected_utility(&game, &m, 0, "A", "d").unwrap(), int(-1));
        assert_eq!(
            best_responses(&game, &m, 0, "A").unwrap(),
            vec![StrategyId::from("c")]
        );
    }

    #[test]
    fn indignant_defection_pays_when_unexpected() {
        let game = indignant_altruism();
        let form = game.form();
        let m = StructureBuilder::new(form)
            .state("w", &["d", "c"])
            .state("v", &["c", "c"])
            .point("w", "A", "w")
            .point("v", "A", "v")
            .point("w", "B", "v")
            .point("v", "B", "v")
            .build()
            .unwrap();
        assert_eq!(
            counterfactual_utility(&game, &m, 0, "A", "d").unwrap(),
            int(5)
        );
        let dd = StructureBuilder::new(form)
            .state("w", &["d", "d"])
            .point("w", "A", "w")
            .point("w", "B", "w")
            .build()
            .unwrap();
        assert_eq!(
            counterfactual_utility(&game, &dd, 0, "A", "d").unwrap(),
            int(-1)
        );
    }

    #[test]
    fn classical_expected_utility_under_uniform_belief() {
        let game = prisoners_dilemma();
        let mu = MixedProfile::uniform(game.form(), &SupportProfile::full(game.form()));
        let m = build_characteristic_structure(game.form(), &mu).unwrap();
        for k in 0..m.len() {
            assert_eq!(expected_utility(&game, &m, k, "A", "d").unwrap(), int(3));
            assert_eq!(
                expected_utility(&game, &m, k, "A", "c").unwrap(),
                ratio(3, 2)
            );
            assert_eq!(
                best_responses(&game, &m, k, "A").unwrap(),
                vec![StrategyId::from("d")]
            );
        }
    }

    #[test]
    fn singleton_best_response() {
        let game = surprise_proposal();
        let m = build_characteristic_structure(
            game.form(),
            &MixedProfile::uniform(game.form(), &SupportProfile::full(game.form())),
        )
        .unwrap();
        assert_eq!(
            best_responses(&game, &m, 0, "A").unwrap(),
            vec![StrategyId::from(IDLE)]
        );
    }

    #[test]
    fn surprise_utilities() {
        let game = surprise_proposal();
        let form = game.form();
        let m = StructureBuilder::new(form)
            .state("p_sure", &[IDLE, "p"])
            .state("p_doubt", &[IDLE, "p"])
            .state("q", &[IDLE, "q"])
            .point("p_sure", "A", "p_sure")
            .point("p_doubt", "A", "q")
            .point("q", "A", "q")
            .point("p_sure", "B", "p_sure")
            .point("p_doubt", "B", "p_doubt")
            .point("q", "B", "q")
            .build()
            .unwrap();
        assert_eq!(
            counterfactual_utility(&game, &m, 0, "B", "p").unwrap(),
            int(0)
        );
        assert_eq!(
            counterfactual_utility(&game, &m, 1, "B", "p").unwrap(),
            int(1)
        );
        assert_eq!(
            counterfactual_utility(&game, &m, 2, "B", "q").unwrap(),
            int(0)
        );
        assert_eq!(
            counterfactual_utility(&game, &m, 0, "B", "q").unwrap(),
            int(1)
        );
    }

    #[test]
    fn deep_surprise_level_zero() {
        let game = deep_surprise(0);
        let form = game.form();
        let m = StructureBuilder::new(form)
            .state("p_hidden", &[IDLE, "p"])
            .state("q", &[IDLE, "q"])
            .state("p_seen", &[IDLE, "p"])
            .point("p_hidden", "A", "q")
            .point("q", "A", "q")
            .point("p_seen", "A", "p_seen")
            .point("p_hidden", "B", "p_hidden")
            .point("q", "B", "q")
            .point("p_seen", "B", "p_seen")
            .build()
            .unwrap();
        assert_eq!(
            counterfactual_utility(&game, &m, 0, "B", "p").unwrap(),
            int(1)
        );
        assert_eq!(
            counterfactual_utility(&game, &m, 2, "B", "q").unwrap(),
            int(1)
        );
        assert_eq!(
            counterfactual_utility(&game, &m, 2, "B", "p").unwrap(),
            int(0)
        );
    }

    #[test]
    fn library_book_utilities() {
        let game = library_book();
        let form = game.form();
        let m = StructureBuilder::new(form)
            .state_with_atoms("sure", &["wait"], &["tomorrow"])
            .state("unsure", &["wait"])
            .point("sure", "A", "sure")
            .point("unsure", "A", "unsure")
            .build()
            .unwrap();
        assert_eq!(
            counterfactual_utility(&game, &m, 0, "A", "return").unwrap(),
            int(-1)
        );
        assert_eq!(
            counterfactual_utility(&game, &m, 0, "A", "wait").unwrap(),
            int(1)
        );
        assert_eq!(
            counterfactual_utility(&game, &m, 1, "A", "wait").unwrap(),
            int(-5)
        );
        assert_eq!(
            counterfactual_utility(&game, &m, 1, "A", "remind").unwrap(),
            int(-5)
        );
    }

    #[test]
    fn guard_partition_errors() {
        let form = GameForm::builder().player("A", ["x", "y"]).build().unwrap();
        let guard =
            |t: &str, v| crate::game::UtilityGuard::new(parse_formula(t, &form).unwrap(), int(v));
        // y has no guard; x has two
        let spec =
            crate::game::FiniteUtilitySpec::new(vec![guard("play(A,x)", 1), guard("play(A,x)", 2)]);
        let game = Game::from_ordered(form.clone(), vec![spec]).unwrap();
        let m = StructureBuilder::new(&form)
            .state("w", &["x"])
            .point("w", "A", "w")
            .build()
            .unwrap();
        match counterfactual_utility(&game, &m, 0, "A", "x") {
            Err(CheckError::GuardPartition { matched: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match counterfactual_utility(&game, &m, 0, "A", "y") {
            Err(CheckError::GuardPartition { matched: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classical_counterfactual_matches_table() {
        let form = GameForm::builder()
            .player("A", ["c", "d"])
            .player("B", ["c", "d"])
            .build()
            .unwrap();
        let mut table = crate::game::PayoffTable::new();
        for (a, b, x, y) in [
            ("c", "c", 3, 3),
            ("c", "d", 0, 5),
            ("d", "c", 5, 0),
            ("d", "d", 1, 1),
        ] {
            table.insert(vec![a.into(), b.into()], vec![int(x), int(y)]);
        }
        let game = compile_classical(&form, &table).unwrap();
        let m = w4(&form);
        for k in 0..m.len() {
            let b = m.strategy(k, 1);
            for name in ["c", "d"] {
                let expected =
                    &table[&vec![StrategyId::from(name), form.strategies(1)[b].clone()]][0];
                assert_eq!(
                    &counterfactual_utility(&game, &m, k, "A", name).unwrap(),
                    expected
                );
            }
        }
    }

    #[test]
    fn memoized_session_agrees_with_fresh_sessions() {
        let game = indignant_altruism();
        let m = w4(game.form());
        let formulas = [
            "RAT[A]",
            "CB RAT",
            "B[A] B[B] play(A,c)",
            "EB play(B,d)",
            "not RAT",
        ];
        let mut shared = Evaluator::with_game(&m, &game).unwrap();
        for text in formulas {
            let f = parse(&game, text);
            let fresh = Evaluator::with_game(&m, &game)
                .unwrap()
                .extension(&f)
                .unwrap();
            assert_eq!(shared.extension(&f).unwrap(), fresh, "{text}");
        }
    }

    #[test]
    fn unknown_state_and_strategy() {
        let game = indignant_altruism();
        let m = w4(game.form());
        assert_eq!(
            holds(&m, game.form(), 9, &Formula::play("A", "c"), None),
            Err(CheckError::UnknownState(9))
        );
        assert!(matches!(
            counterfactual_utility(&game, &m, 0, "A", "z"),
            Err(CheckError::UnknownStrategy { .. })
        ));
    }
}
