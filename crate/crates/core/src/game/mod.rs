//! Game forms and finitely specified, language-based utilities.

mod examples;

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::lang::{Formula, PlayerId, StrategyId};
use crate::rational::Rational;

pub use examples::{
    deep_surprise, indignant_altruism, library_book, pay_raise, price_atom, prisoners_dilemma,
    roadtrip, surprise_proposal, PayRaise, PayRaiseVariant, PriceCell, IDLE,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("a game form needs at least one player")]
    NoPlayers,
    #[error("duplicate player `{0}`")]
    DuplicatePlayer(String),
    #[error("player `{0}` has no strategies")]
    NoStrategies(String),
    #[error("duplicate strategy `{strategy}` for player `{player}`")]
    DuplicateStrategy { player: String, strategy: String },
    #[error("invalid identifier `{0}`")]
    InvalidName(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown player `{0}`")]
    UnknownPlayer(String),
    #[error("unknown strategy `{strategy}` for player `{player}`")]
    UnknownStrategy { player: String, strategy: String },
    #[error("no utility specification for player `{0}`")]
    MissingUtility(String),
    #[error("utility specification for player `{0}` has no guards")]
    EmptyUtility(String),
    #[error("guard for player `{player}` may not contain {construct}")]
    IllegalGuard {
        player: String,
        construct: &'static str,
    },
    #[error("classical payoffs missing for profile ({0})")]
    MissingProfile(String),
    #[error(
        "classical payoff row for profile ({profile}) has {found} entries, expected {expected}"
    )]
    PayoffArity {
        profile: String,
        found: usize,
        expected: usize,
    },
    #[error("classical games cannot declare extra atoms")]
    ExtraAtoms,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("price intervals overlap or are out of order: {0}")]
    OverlappingIntervals(String),
}

pub(crate) fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '.' || c == '\'')
}

/// Players, their strategy sets, and any extra primitive propositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameForm {
    players: Vec<PlayerId>,
    strategies: Vec<Vec<StrategyId>>,
    atoms: Vec<String>,
    atom_groups: Vec<Vec<usize>>,
}

#[derive(Debug, Default, Clone)]
pub struct GameFormBuilder {
    players: Vec<(String, Vec<String>)>,
    atoms: Vec<String>,
    groups: Vec<Vec<String>>,
}

impl GameFormBuilder {
    pub fn player<I, S>(mut self, name: &str, strategies: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.players.push((
            name.to_owned(),
            strategies.into_iter().map(Into::into).collect(),
        ));
        self
    }

    pub fn atom(mut self, name: &str) -> Self {
        self.atoms.push(name.to_owned());
        self
    }

    /// Declares a group of atoms exactly one of which holds at every state.
    /// Atoms not yet declared are added.
    pub fn exclusive_atoms<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let group: Vec<String> = names.into_iter().map(Into::into).collect();
        for a in &group {
            if !self.atoms.contains(a) {
                self.atoms.push(a.clone());
            }
        }
        self.groups.push(group);
        self
    }

    pub fn build(self) -> Result<GameForm, GameError> {
        if self.players.is_empty() {
            return Err(GameError::NoPlayers);
        }
        let mut seen = HashSet::new();
        let mut players = Vec::new();
        let mut strategies = Vec::new();
        for (p, ss) in self.players {
            if !valid_name(&p) {
                return Err(GameError::InvalidName(p));
            }
            if !seen.insert(p.clone()) {
                return Err(GameError::DuplicatePlayer(p));
            }
            if ss.is_empty() {
                return Err(GameError::NoStrategies(p));
            }
            let mut seen_s = HashSet::new();
            for s in &ss {
                if !valid_name(s) {
                    return Err(GameError::InvalidName(s.clone()));
                }
                if !seen_s.insert(s.clone()) {
                    return Err(GameError::DuplicateStrategy {
                        player: p.clone(),
                        strategy: s.clone(),
                    });
                }
            }
            players.push(PlayerId::new(p));
            strategies.push(ss.into_iter().map(StrategyId::new).collect());
        }
        let mut seen_a = HashSet::new();
        for a in &self.atoms {
            if !valid_name(a) {
                return Err(GameError::InvalidName(a.clone()));
            }
            if !seen_a.insert(a.clone()) {
                return Err(GameError::DuplicateAtom(a.clone()));
            }
        }
        let atom_groups = self
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|a| {
                        self.atoms
                            .iter()
                            .position(|x| x == a)
                            .ok_or_else(|| GameError::UnknownAtom(a.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GameForm {
            players,
            strategies,
            atoms: self.atoms,
            atom_groups,
        })
    }
}

impl GameForm {
    pub fn builder() -> GameFormBuilder {
        GameFormBuilder::default()
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn player(&self, i: usize) -> &PlayerId {
        &self.players[i]
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p.as_str() == name)
    }

    pub fn strategies(&self, player: usize) -> &[StrategyId] {
        &self.strategies[player]
    }

    pub fn strategy_index(&self, player: usize, name: &str) -> Option<usize> {
        self.strategies[player]
            .iter()
            .position(|s| s.as_str() == name)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    /// Groups of atom indices of which exactly one holds at every state.
    pub fn atom_groups(&self) -> &[Vec<usize>] {
        &self.atom_groups
    }

    /// Number of strategy profiles.
    pub fn profile_count(&self) -> usize {
        self.strategies.iter().map(Vec::len).product()
    }

    /// All strategy profiles as index vectors, in lexicographic order.
    pub fn profiles(&self) -> Profiles<'_> {
        Profiles {
            radix: self.strategies.iter().map(Vec::len).collect(),
            next: Some(vec![0; self.players.len()]),
            _form: std::marker::PhantomData,
        }
    }

    /// Human-readable `c,d` form of a profile.
    pub fn profile_label(&self, profile: &[usize]) -> String {
        profile
            .iter()
            .enumerate()
            .map(|(i, &s)| self.strategies[i][s].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Checks that every name in `f` belongs to this form.
    pub fn check_formula(&self, f: &Formula) -> Result<(), GameError> {
        let mut result = Ok(());
        f.walk(&mut |g| {
            if result.is_err() {
                return;
            }
            result = match g {
                Formula::Play(p, s) => match self.player_index(p.as_str()) {
                    None => Err(GameError::UnknownPlayer(p.to_string())),
                    Some(i) if self.strategy_index(i, s.as_str()).is_none() => {
                        Err(GameError::UnknownStrategy {
                            player: p.to_string(),
                            strategy: s.to_string(),
                        })
                    }
                    Some(_) => Ok(()),
                },
                Formula::Rat(p) | Formula::Believes(p, _) => match self.player_index(p.as_str()) {
                    None => Err(GameError::UnknownPlayer(p.to_string())),
                    Some(_) => Ok(()),
                },
                Formula::Prop(a) => match self.atom_index(a) {
                    None => Err(GameError::UnknownAtom(a.clone())),
                    Some(_) => Ok(()),
                },
                _ => Ok(()),
            };
        });
        result
    }

    /// `play(σ)` for a profile given as strategy indices.
    pub fn play_profile(&self, profile: &[usize]) -> Formula {
        Formula::conjunction(
            profile.iter().enumerate().map(|(i, &s)| {
                Formula::Play(self.players[i].clone(), self.strategies[i][s].clone())
            }),
        )
        .expect("nonempty player list")
    }
}

pub struct Profiles<'a> {
    radix: Vec<usize>,
    next: Option<Vec<usize>>,
    _form: std::marker::PhantomData<&'a GameForm>,
}

impl Iterator for Profiles<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for k in (0..succ.len()).rev() {
            succ[k] += 1;
            if succ[k] < self.radix[k] {
                self.next = Some(succ);
                return Some(cur);
            }
            succ[k] = 0;
        }
        Some(cur)
    }
}

/// A formula paired with the utility it yields when it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityGuard {
    pub guard: Formula,
    pub value: Rational,
}

impl UtilityGuard {
    pub fn new(guard: Formula, value: Rational) -> Self {
        Self { guard, value }
    }
}

/// A utility given by finitely many guards, exactly one of which is
/// expected to hold at any evaluation point.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiniteUtilitySpec {
    pub guards: Vec<UtilityGuard>,
}

impl FiniteUtilitySpec {
    pub fn new(guards: Vec<UtilityGuard>) -> Self {
        Self { guards }
    }

    /// A single always-true guard with the given value.
    pub fn constant(form: &GameForm, player: usize, value: Rational) -> Self {
        let always = Formula::disjunction(
            form.strategies(player)
                .iter()
                .map(|s| Formula::Play(form.player(player).clone(), s.clone())),
        )
        .expect("nonempty strategy set");
        Self::new(vec![UtilityGuard::new(always, value)])
    }
}

/// A game form together with one utility specification per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    form: GameForm,
    utilities: Vec<FiniteUtilitySpec>,
}

impl Game {
    /// Builds a game; `utilities` is keyed by player name.
    pub fn new(
        form: GameForm,
        mut utilities: BTreeMap<PlayerId, FiniteUtilitySpec>,
    ) -> Result<Self, GameError> {
        let mut ordered = Vec::with_capacity(form.player_count());
        for p in form.players() {
            let spec = utilities
                .remove(p)
                .ok_or_else(|| GameError::MissingUtility(p.to_string()))?;
            ordered.push(spec);
        }
        if let Some(extra) = utilities.keys().next() {
            return Err(GameError::UnknownPlayer(extra.to_string()));
        }
        Self::from_ordered(form, ordered)
    }

    /// Builds a game from specs listed in player order.
    pub fn from_ordered(
        form: GameForm,
        utilities: Vec<FiniteUtilitySpec>,
    ) -> Result<Self, GameError> {
        if utilities.len() != form.player_count() {
            let missing = form.players()[utilities.len().min(form.player_count() - 1)].to_string();
            return Err(GameError::MissingUtility(missing));
        }
        for (i, spec) in utilities.iter().enumerate() {
            let player = form.player(i).to_string();
            if spec.guards.is_empty() {
                return Err(GameError::EmptyUtility(player));
            }
            for g in &spec.guards {
                if g.guard.contains_common_belief() {
                    return Err(GameError::IllegalGuard {
                        player,
                        construct: "common belief",
                    });
                }
                if g.guard.contains_rat() {
                    return Err(GameError::IllegalGuard {
                        player,
                        construct: "rationality atoms",
                    });
                }
                form.check_formula(&g.guard)?;
            }
        }
        Ok(Self { form, utilities })
    }

    pub fn form(&self) -> &GameForm {
        &self.form
    }

    pub fn utility(&self, player: usize) -> &FiniteUtilitySpec {
        &self.utilities[player]
    }

    pub fn utilities(&self) -> &[FiniteUtilitySpec] {
        &self.utilities
    }
}

/// Classical payoff table: strategy profile (names, in player order) to one
/// payoff per player.
pub type PayoffTable = BTreeMap<Vec<StrategyId>, Vec<Rational>>;

/// Compiles a classical payoff table into guards `play(σ) -> payoff`.
pub fn compile_classical(form: &GameForm, payoffs: &PayoffTable) -> Result<Game, GameError> {
    if !form.atoms().is_empty() {
        return Err(GameError::ExtraAtoms);
    }
    for key in payoffs.keys() {
        if key.len() != form.player_count() {
            return Err(GameError::PayoffArity {
                profile: key.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","),
                found: key.len(),
                expected: form.player_count(),
            });
        }
        for (i, s) in key.iter().enumerate() {
            if form.strategy_index(i, s.as_str()).is_none() {
                return Err(GameError::UnknownStrategy {
                    player: form.player(i).to_string(),
                    strategy: s.to_string(),
                });
            }
        }
    }
    let n = form.player_count();
    let mut specs = vec![FiniteUtilitySpec::default(); n];
    for profile in form.profiles() {
        let names: Vec<StrategyId> = profile
            .iter()
            .enumerate()
            .map(|(i, &s)| form.strategies(i)[s].clone())
            .collect();
        let label = form.profile_label(&profile);
        let row = payoffs
            .get(&names)
            .ok_or_else(|| GameError::MissingProfile(label.clone()))?;
        if row.len() != n {
            return Err(GameError::PayoffArity {
                profile: label,
                found: row.len(),
                expected: n,
            });
        }
        let guard = form.play_profile(&profile);
        for (spec, value) in specs.iter_mut().zip(row) {
            spec.guards
                .push(UtilityGuard::new(guard.clone(), value.clone()));
        }
    }
    Game::from_ordered(form.clone(), specs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn builder_rejects_bad_forms() {
        assert_eq!(GameForm::builder().build(), Err(GameError::NoPlayers));
        assert!(matches!(
            GameForm::builder().player("A", ["c", "c"]).build(),
            Err(GameError::DuplicateStrategy { .. })
        ));
        assert!(matches!(
            GameForm::builder()
                .player("A", Vec::<String>::new())
                .build(),
            Err(GameError::NoStrategies(_))
        ));
        assert!(matches!(
            GameForm::builder()
                .player("A", ["c"])
                .player("A", ["d"])
                .build(),
            Err(GameError::DuplicatePlayer(_))
        ));
        assert!(matches!(
            GameForm::builder().player("A", ["c d"]).build(),
            Err(GameError::InvalidName(_))
        ));
    }

    #[test]
    fn profiles_enumerate_lexicographically() {
        let form = GameForm::builder()
            .player("A", ["c", "d"])
            .player("B", ["x", "y", "z"])
            .build()
            .unwrap();
        let all: Vec<_> = form.profiles().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[5], vec![1, 2]);
    }

    #[test]
    fn classical_pd_guards() {
        let game = prisoners_dilemma();
        let form = game.form();
        let cc = form.play_profile(&[0, 0]);
        let dc = form.play_profile(&[1, 0]);
        for p in 0..2 {
            let g = game
                .utility(p)
                .guards
                .iter()
                .find(|g| g.guard == cc)
                .unwrap();
            assert_eq!(g.value, int(3));
        }
        let a = game
            .utility(0)
            .guards
            .iter()
            .find(|g| g.guard == dc)
            .unwrap();
        let b = game
            .utility(1)
            .guards
            .iter()
            .find(|g| g.guard == dc)
            .unwrap();
        assert_eq!((a.value.clone(), b.value.clone()), (int(5), int(0)));
    }

    #[test]
    fn classical_single_player() {
        let form = GameForm::builder().player("A", ["only"]).build().unwrap();
        let mut table = PayoffTable::new();
        table.insert(vec![StrategyId::new("only")], vec![int(0)]);
        let game = compile_classical(&form, &table).unwrap();
        assert_eq!(game.utility(0).guards.len(), 1);
        assert_eq!(game.utility(0).guards[0].value, int(0));
    }

    #[test]
    fn classical_errors() {
        let form = GameForm::builder().player("A", ["c", "d"]).build().unwrap();
        let mut table = PayoffTable::new();
        table.insert(vec![StrategyId::new("c")], vec![int(1)]);
        assert!(matches!(
            compile_classical(&form, &table),
            Err(GameError::MissingProfile(_))
        ));
        let with_atom = GameForm::builder()
            .player("A", ["c"])
            .atom("x")
            .build()
            .unwrap();
        assert_eq!(
            compile_classical(&with_atom, &PayoffTable::new()),
            Err(GameError::ExtraAtoms)
        );
    }

    #[test]
    fn guards_must_be_cb_and_rat_free() {
        let form = GameForm::builder().player("A", ["c"]).build().unwrap();
        let spec = |g: Formula| FiniteUtilitySpec::new(vec![UtilityGuard::new(g, int(0))]);
        let cb = Formula::common_belief(Formula::play("A", "c"));
        assert!(matches!(
            Game::from_ordered(form.clone(), vec![spec(cb)]),
            Err(GameError::IllegalGuard { .. })
        ));
        assert!(matches!(
            Game::from_ordered(form.clone(), vec![spec(Formula::rat("A"))]),
            Err(GameError::IllegalGuard { .. })
        ));
        assert!(matches!(
            Game::from_ordered(form, vec![spec(Formula::play("A", "x"))]),
            Err(GameError::UnknownStrategy { .. })
        ));
    }
}
