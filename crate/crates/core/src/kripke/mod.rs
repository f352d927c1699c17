//! Finite Γ-structures: states labelled with strategy profiles and extra
//! atoms, plus one belief distribution per player and state.

mod characteristic;
mod enumerate;
mod stateset;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::game::GameForm;
use crate::lang::PlayerId;
use crate::rational::Rational;

pub use characteristic::{
    all_support_profiles, build_characteristic_structure, MixedProfile, ProfileError,
    SupportProfile,
};
pub use enumerate::{
    enumerate_point_belief_structures, for_each_rooted_point_structure, EnumerationOptions,
    StructureEnumeration,
};
pub use stateset::StateSet;

/// A player's belief at one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Belief {
    /// All mass on one state.
    Point(usize),
    /// Explicit weights; zero-weight entries are outside the support.
    Distribution(Vec<(usize, Rational)>),
}

impl Belief {
    /// Support states, ascending and without duplicates.
    pub fn support(&self) -> Vec<usize> {
        match self {
            Belief::Point(t) => vec![*t],
            Belief::Distribution(entries) => {
                let mut s: Vec<usize> = entries
                    .iter()
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(t, _)| *t)
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            }
        }
    }

    /// Positive weights keyed by state, merging repeated entries.
    pub fn weights(&self) -> BTreeMap<usize, Rational> {
        let mut out = BTreeMap::new();
        match self {
            Belief::Point(t) => {
                out.insert(*t, Rational::one());
            }
            Belief::Distribution(entries) => {
                for (t, w) in entries {
                    *out.entry(*t).or_insert_with(Rational::zero) += w;
                }
                out.retain(|_, w| !w.is_zero());
            }
        }
        out
    }

    fn referenced(&self) -> Vec<usize> {
        match self {
            Belief::Point(t) => vec![*t],
            Belief::Distribution(entries) => entries.iter().map(|(t, _)| *t).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub id: String,
    /// Strategy index per player.
    pub profile: Vec<usize>,
    /// Indices of the extra atoms true here, ascending.
    pub atoms: Vec<usize>,
    /// Belief per player.
    pub beliefs: Vec<Belief>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaStructure {
    states: Vec<State>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("duplicate state id `{0}`")]
    DuplicateState(String),
    #[error("state `{state}` refers to unknown state `{target}`")]
    DanglingReference { state: String, target: String },
    #[error("state `{state}`: unknown player `{player}`")]
    UnknownPlayer { state: String, player: String },
    #[error("state `{state}`: unknown strategy `{strategy}` for player `{player}`")]
    UnknownStrategy {
        state: String,
        player: String,
        strategy: String,
    },
    #[error("state `{state}`: unknown atom `{atom}`")]
    UnknownAtom { state: String, atom: String },
    #[error("state `{state}`: expected {expected} entries for {what}, found {found}")]
    Arity {
        state: String,
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("state `{state}`: no strategy given for player `{player}`")]
    MissingStrategy { state: String, player: String },
    #[error("state `{state}`: no belief given for player `{player}`")]
    MissingBelief { state: String, player: String },
    #[error("structure violates {}", .0.summary())]
    Invalid(ValidationReport),
}

impl GammaStructure {
    /// Wraps states without any checks; see [`validate_structure`].
    pub fn from_states(states: Vec<State>) -> Self {
        Self { states }
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &State {
        &self.states[k]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id == id)
    }

    /// Strategy of `player` at state `k`.
    pub fn strategy(&self, k: usize, player: usize) -> usize {
        self.states[k].profile[player]
    }

    /// Support of `player`'s belief at state `k`.
    pub fn support(&self, k: usize, player: usize) -> Vec<usize> {
        self.states[k].beliefs[player].support()
    }

    /// Rewrites every belief into explicit weights scaled by `reweight`, which
    /// must return a positive factor; rows are renormalized afterwards.
    pub fn reweighted(&self, mut reweight: impl FnMut(usize, usize, usize) -> Rational) -> Self {
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let beliefs = s
                    .beliefs
                    .iter()
                    .enumerate()
                    .map(|(i, b)| {
                        let scaled: Vec<(usize, Rational)> = b
                            .weights()
                            .into_iter()
                            .map(|(t, w)| (t, w * reweight(k, i, t)))
                            .collect();
                        let total: Rational = scaled.iter().map(|(_, w)| w.clone()).sum();
                        Belief::Distribution(
                            scaled.into_iter().map(|(t, w)| (t, w / &total)).collect(),
                        )
                    })
                    .collect();
                State {
                    beliefs,
                    ..s.clone()
                }
            })
            .collect();
        Self { states }
    }
}

/// Which structural condition a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// Nonempty state space.
    P1,
    /// Beliefs are probability distributions.
    P2,
    /// Players are sure of their own beliefs.
    P3,
    /// Players are sure of their own strategy.
    P4,
    /// Exactly one atom of each exclusive group holds.
    AtomGroup,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::P1 => "P1",
            Condition::P2 => "P2",
            Condition::P3 => "P3",
            Condition::P4 => "P4",
            Condition::AtomGroup => "atom-group",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub player: Option<PlayerId>,
    pub state: Option<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.condition)?;
        if let Some(p) = &self.player {
            write!(f, " player {p}")?;
        }
        if let Some(s) = &self.state {
            write!(f, " at state {s}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Structural sanity: arities, index ranges, unique ids.
pub(crate) fn check_shape(m: &GammaStructure, form: &GameForm) -> Result<(), StructureError> {
    let n = m.len();
    let mut ids = HashMap::new();
    for s in m.states() {
        if ids.insert(s.id.as_str(), ()).is_some() {
            return Err(StructureError::DuplicateState(s.id.clone()));
        }
    }
    for s in m.states() {
        if s.profile.len() != form.player_count() {
            return Err(StructureError::Arity {
                state: s.id.clone(),
                what: "profile",
                expected: form.player_count(),
                found: s.profile.len(),
            });
        }
        if s.beliefs.len() != form.player_count() {
            return Err(StructureError::Arity {
                state: s.id.clone(),
                what: "beliefs",
                expected: form.player_count(),
                found: s.beliefs.len(),
            });
        }
        for (i, &st) in s.profile.iter().enumerate() {
            if st >= form.strategies(i).len() {
                return Err(StructureError::UnknownStrategy {
                    state: s.id.clone(),
                    player: form.player(i).to_string(),
                    strategy: format!("#{st}"),
                });
            }
        }
        for &a in &s.atoms {
            if a >= form.atoms().len() {
                return Err(StructureError::UnknownAtom {
                    state: s.id.clone(),
                    atom: format!("#{a}"),
                });
            }
        }
        for b in &s.beliefs {
            for t in b.referenced() {
                if t >= n {
                    return Err(StructureError::DanglingReference {
                        state: s.id.clone(),
                        target: format!("#{t}"),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Checks the structure against the four Γ-structure conditions and the
/// form's exclusive atom groups.
pub fn validate_structure(
    m: &GammaStructure,
    form: &GameForm,
) -> Result<ValidationReport, StructureError> {
    check_shape(m, form)?;
    let mut report = ValidationReport::default();
    if m.is_empty() {
        report.violations.push(Violation {
            condition: Condition::P1,
            player: None,
            state: None,
            detail: "state space is empty".into(),
        });
        return Ok(report);
    }
    let weights: Vec<Vec<BTreeMap<usize, Rational>>> = m
        .states()
        .iter()
        .map(|s| s.beliefs.iter().map(Belief::weights).collect())
        .collect();

    for (k, s) in m.states().iter().enumerate() {
        for (i, b) in s.beliefs.iter().enumerate() {
            let player = Some(form.player(i).clone());
            let violation = |condition, detail: String| Violation {
                condition,
                player: player.clone(),
                state: Some(s.id.clone()),
                detail,
            };
            if let Belief::Distribution(entries) = b {
                if let Some((t, w)) = entries.iter().find(|(_, w)| *w < Rational::zero()) {
                    report.violations.push(violation(
                        Condition::P2,
                        format!("negative weight {w} on state {}", m.state(*t).id),
                    ));
                }
                let total: Rational = entries.iter().map(|(_, w)| w.clone()).sum();
                if !total.is_one() {
                    report.violations.push(violation(
                        Condition::P2,
                        format!("weights sum to {total}, not 1"),
                    ));
                    continue;
                }
            }
            for &t in weights[k][i].keys() {
                if weights[t][i] != weights[k][i] {
                    report.violations.push(violation(
                        Condition::P3,
                        format!("belief differs at supported state {}", m.state(t).id),
                    ));
                }
                if m.strategy(t, i) != s.profile[i] {
                    report.violations.push(violation(
                        Condition::P4,
                        format!(
                            "supported state {} has strategy {}, not {}",
                            m.state(t).id,
                            form.strategies(i)[m.strategy(t, i)],
                            form.strategies(i)[s.profile[i]]
                        ),
                    ));
                }
            }
        }
        for group in form.atom_groups() {
            let count = group.iter().filter(|a| s.atoms.contains(a)).count();
            if count != 1 {
                report.violations.push(Violation {
                    condition: Condition::AtomGroup,
                    player: None,
                    state: Some(s.id.clone()),
                    detail: format!(
                        "{count} atoms of group {{{}}} hold, expected exactly 1",
                        group
                            .iter()
                            .map(|&a| form.atoms()[a].as_str())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                });
            }
        }
    }
    Ok(report)
}

/// A belief entry by name: `(state, player, weighted support)`.
type NamedBelief = (String, String, Vec<(String, Rational)>);

/// Name-based construction of structures.
#[derive(Debug, Clone)]
pub struct StructureBuilder<'a> {
    form: &'a GameForm,
    states: Vec<(String, Vec<String>, Vec<String>)>,
    beliefs: Vec<NamedBelief>,
}

impl<'a> StructureBuilder<'a> {
    pub fn new(form: &'a GameForm) -> Self {
        Self {
            form,
            states: Vec::new(),
            beliefs: Vec::new(),
        }
    }

    /// Adds a state playing `profile` (one strategy name per player, in order).
    pub fn state(self, id: &str, profile: &[&str]) -> Self {
        self.state_with_atoms(id, profile, &[])
    }

    pub fn state_with_atoms(mut self, id: &str, profile: &[&str], atoms: &[&str]) -> Self {
        self.states.push((
            id.to_owned(),
            profile.iter().map(|s| s.to_string()).collect(),
            atoms.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    /// `player` at `state` is certain of `target`.
    pub fn point(self, state: &str, player: &str, target: &str) -> Self {
        self.belief(state, player, &[(target, Rational::one())])
    }

    pub fn belief(mut self, state: &str, player: &str, dist: &[(&str, Rational)]) -> Self {
        self.beliefs.push((
            state.to_owned(),
            player.to_owned(),
            dist.iter()
                .map(|(t, w)| (t.to_string(), w.clone()))
                .collect(),
        ));
        self
    }

    /// Resolves names. Does not check P1-P4; see [`validate_structure`].
    pub fn build_unchecked(self) -> Result<GammaStructure, StructureError> {
        let form = self.form;
        let index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(k, (id, _, _))| (id.as_str(), k))
            .collect();
        if index.len() != self.states.len() {
            let mut seen = HashMap::new();
            for (id, _, _) in &self.states {
                if seen.insert(id.as_str(), ()).is_some() {
                    return Err(StructureError::DuplicateState(id.clone()));
                }
            }
        }
        let mut states = Vec::with_capacity(self.states.len());
        for (id, profile, atoms) in &self.states {
            if profile.len() != form.player_count() {
                return Err(StructureError::Arity {
                    state: id.clone(),
                    what: "profile",
                    expected: form.player_count(),
                    found: profile.len(),
                });
            }
            let profile = profile
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    form.strategy_index(i, s)
                        .ok_or_else(|| StructureError::UnknownStrategy {
                            state: id.clone(),
                            player: form.player(i).to_string(),
                            strategy: s.clone(),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut atom_idx = atoms
                .iter()
                .map(|a| {
                    form.atom_index(a)
                        .ok_or_else(|| StructureError::UnknownAtom {
                            state: id.clone(),
                            atom: a.clone(),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            atom_idx.sort_unstable();
            atom_idx.dedup();
            states.push((
                id.clone(),
                profile,
                atom_idx,
                vec![None; form.player_count()],
            ));
        }
        for (state, player, dist) in self.beliefs {
            let k =
                *index
                    .get(state.as_str())
                    .ok_or_else(|| StructureError::DanglingReference {
                        state: state.clone(),
                        target: state.clone(),
                    })?;
            let i = form
                .player_index(&player)
                .ok_or_else(|| StructureError::UnknownPlayer {
                    state: state.clone(),
                    player: player.clone(),
                })?;
            let entries = dist
                .into_iter()
                .map(|(t, w)| {
                    index.get(t.as_str()).map(|&t| (t, w)).ok_or_else(|| {
                        StructureError::DanglingReference {
                            state: state.clone(),
                            target: t.clone(),
                        }
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let belief = match entries.as_slice() {
                [(t, w)] if w.is_one() => Belief::Point(*t),
                _ => Belief::Distribution(entries),
            };
            states[k].3[i] = Some(belief);
        }
        let states = states
            .into_iter()
            .map(|(id, profile, atoms, beliefs)| {
                let beliefs = beliefs
                    .into_iter()
                    .enumerate()
                    .map(|(i, b)| {
                        b.ok_or_else(|| StructureError::MissingBelief {
                            state: id.clone(),
                            player: form.player(i).to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(State {
                    id,
                    profile,
                    atoms,
                    beliefs,
                })
            })
            .collect::<Result<Vec<_>, StructureError>>()?;
        Ok(GammaStructure::from_states(states))
    }

    /// Resolves names and fails unless the result is a valid Γ-structure.
    pub fn build(self) -> Result<GammaStructure, StructureError> {
        let form = self.form;
        let m = self.build_unchecked()?;
        let report = validate_structure(&m, form)?;
        if report.is_ok() {
            Ok(m)
        } else {
            Err(StructureError::Invalid(report))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::indignant_altruism;
    use crate::rational::ratio;

    fn w4(form: &GameForm) -> StructureBuilder<'_> {
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
    }

    #[test]
    fn w4_is_valid() {
        let game = indignant_altruism();
        let m = w4(game.form()).build().unwrap();
        assert_eq!(m.len(), 4);
        assert!(validate_structure(&m, game.form()).unwrap().is_ok());
    }

    #[test]
    fn p4_violation_is_reported() {
        let game = indignant_altruism();
        let form = game.form();
        let m = StructureBuilder::new(form)
            .state("w1", &["c", "c"])
            .state("w2", &["d", "c"])
            .point("w1", "A", "w2")
            .point("w2", "A", "w2")
            .point("w1", "B", "w1")
            .point("w2", "B", "w2")
            .build_unchecked()
            .unwrap();
        let report = validate_structure(&m, form).unwrap();
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.condition, Condition::P4);
        assert_eq!(v.player.as_ref().unwrap(), "A");
        assert_eq!(v.state.as_deref(), Some("w1"));
    }

    #[test]
    fn p2_violation_is_reported() {
        let game = indignant_altruism();
        let form = game.form();
        let m = StructureBuilder::new(form)
            .state("w1", &["c", "c"])
            .belief("w1", "A", &[("w1", ratio(9, 10))])
            .point("w1", "B", "w1")
            .build_unchecked()
            .unwrap();
        let report = validate_structure(&m, form).unwrap();
        assert_eq!(report.violations[0].condition, Condition::P2);
        assert_eq!(report.violations[0].state.as_deref(), Some("w1"));
        assert!(matches!(
            StructureBuilder::new(form)
                .state("w1", &["c", "c"])
                .belief("w1", "A", &[("w1", ratio(9, 10))])
                .point("w1", "B", "w1")
                .build(),
            Err(StructureError::Invalid(_))
        ));
    }

    #[test]
    fn p3_violation_is_reported() {
        let game = indignant_altruism();
        let form = game.form();
        // Alice at w1 is sure of w2, but at w2 she is sure of w3.
        let m = StructureBuilder::new(form)
            .state("w1", &["c", "c"])
            .state("w2", &["c", "d"])
            .state("w3", &["c", "c"])
            .point("w1", "A", "w2")
            .point("w2", "A", "w3")
            .point("w3", "A", "w3")
            .point("w1", "B", "w1")
            .point("w2", "B", "w2")
            .point("w3", "B", "w3")
            .build_unchecked()
            .unwrap();
        let report = validate_structure(&m, form).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == Condition::P3 && v.state.as_deref() == Some("w1")));
    }

    #[test]
    fn structural_errors() {
        let game = indignant_altruism();
        let form = game.form();
        assert!(matches!(
            StructureBuilder::new(form)
                .state("w1", &["c", "x"])
                .build_unchecked(),
            Err(StructureError::UnknownStrategy { .. })
        ));
        assert!(matches!(
            StructureBuilder::new(form)
                .state("w1", &["c", "c"])
                .point("w1", "A", "nowhere")
                .build_unchecked(),
            Err(StructureError::DanglingReference { .. })
        ));
        assert!(matches!(
            StructureBuilder::new(form)
                .state("w1", &["c", "c"])
                .point("w1", "A", "w1")
                .build_unchecked(),
            Err(StructureError::MissingBelief { .. })
        ));
        let dangling = GammaStructure::from_states(vec![State {
            id: "w".into(),
            profile: vec![0, 0],
            atoms: vec![],
            beliefs: vec![Belief::Point(3), Belief::Point(0)],
        }]);
        assert!(matches!(
            validate_structure(&dangling, form),
            Err(StructureError::DanglingReference { .. })
        ));
    }

    #[test]
    fn empty_structure_violates_p1() {
        let game = indignant_altruism();
        let report = validate_structure(&GammaStructure::from_states(vec![]), game.form()).unwrap();
        assert_eq!(report.violations[0].condition, Condition::P1);
    }

    #[test]
    fn atom_groups_are_enforced() {
        let form = GameForm::builder()
            .player("A", ["buy"])
            .exclusive_atoms(["lo", "hi"])
            .build()
            .unwrap();
        let none = StructureBuilder::new(&form)
            .state("w", &["buy"])
            .point("w", "A", "w")
            .build_unchecked()
            .unwrap();
        let report = validate_structure(&none, &form).unwrap();
        assert_eq!(report.violations[0].condition, Condition::AtomGroup);
        let one = StructureBuilder::new(&form)
            .state_with_atoms("w", &["buy"], &["hi"])
            .point("w", "A", "w")
            .build();
        assert!(one.is_ok());
    }
}
