//! Mixed strategy profiles and the structure in which every player correctly
//! ascribes the profile to the others.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Belief, GammaStructure, State};
use crate::game::GameForm;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("expected {expected} rows, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("player `{player}`: expected {expected} probabilities, found {found}")]
    RowArity {
        player: String,
        expected: usize,
        found: usize,
    },
    #[error("player `{0}`: negative probability")]
    Negative(String),
    #[error("player `{player}`: probabilities sum to {total}, not 1")]
    Sum { player: String, total: String },
    #[error("unknown player `{0}`")]
    UnknownPlayer(String),
    #[error("unknown strategy `{strategy}` for player `{player}`")]
    UnknownStrategy { player: String, strategy: String },
    #[error("malformed profile: {0}")]
    Syntax(String),
    #[error("characteristic structures are defined only for forms without extra atoms")]
    ExtraAtoms,
}

/// One nonempty set of strategy indices per player, each ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportProfile {
    pub sets: Vec<Vec<usize>>,
}

impl SupportProfile {
    /// Every strategy of every player.
    pub fn full(form: &GameForm) -> Self {
        Self {
            sets: (0..form.player_count())
                .map(|i| (0..form.strategies(i).len()).collect())
                .collect(),
        }
    }

    pub fn describe(&self, form: &GameForm) -> String {
        let parts: Vec<String> = self
            .sets
            .iter()
            .enumerate()
            .map(|(i, set)| {
                let names: Vec<&str> = set
                    .iter()
                    .map(|&s| form.strategies(i)[s].as_str())
                    .collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        format!("({})", parts.join(","))
    }

    /// Strategy profiles in the product of the supports, lexicographic.
    pub fn product(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for set in &self.sets {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    set.iter().map(move |&s| {
                        let mut p = prefix.clone();
                        p.push(s);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

/// Every support profile of `form`: per player, nonempty subsets ordered by
/// their bitmask; profiles in lexicographic order of those.
pub fn all_support_profiles(form: &GameForm) -> Vec<SupportProfile> {
    let subsets: Vec<Vec<Vec<usize>>> = (0..form.player_count())
        .map(|i| {
            let m = form.strategies(i).len();
            assert!(
                m < usize::BITS as usize,
                "strategy set too large to enumerate supports"
            );
            (1usize..(1 << m))
                .map(|mask| (0..m).filter(|b| mask & (1 << b) != 0).collect())
                .collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for options in &subsets {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<usize>>| {
                options.iter().map(move |s| {
                    let mut p = prefix.clone();
                    p.push(s.clone());
                    p
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|sets| SupportProfile { sets })
        .collect()
}

/// A probability distribution over each player's strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedProfile {
    probs: Vec<Vec<Rational>>,
}

impl MixedProfile {
    pub fn new(form: &GameForm, probs: Vec<Vec<Rational>>) -> Result<Self, ProfileError> {
        if probs.len() != form.player_count() {
            return Err(ProfileError::Arity {
                expected: form.player_count(),
                found: probs.len(),
            });
        }
        for (i, row) in probs.iter().enumerate() {
            let player = form.player(i).to_string();
            if row.len() != form.strategies(i).len() {
                return Err(ProfileError::RowArity {
                    player,
                    expected: form.strategies(i).len(),
                    found: row.len(),
                });
            }
            if row.iter().any(|p| *p < Rational::zero()) {
                return Err(ProfileError::Negative(player));
            }
            let total: Rational = row.iter().cloned().sum();
            if !total.is_one() {
                return Err(ProfileError::Sum {
                    player,
                    total: format_rational(&total),
                });
            }
        }
        Ok(Self { probs })
    }

    /// The pure profile playing `profile[i]` for each player.
    pub fn pure(form: &GameForm, profile: &[usize]) -> Self {
        let probs = (0..form.player_count())
            .map(|i| {
                (0..form.strategies(i).len())
                    .map(|s| {
                        if s == profile[i] {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self { probs }
    }

    /// Uniform weights on each player's support set.
    pub fn uniform(form: &GameForm, support: &SupportProfile) -> Self {
        let probs = (0..form.player_count())
            .map(|i| {
                let set = &support.sets[i];
                let w = Rational::new(1.into(), (set.len() as i64).into());
                (0..form.strategies(i).len())
                    .map(|s| {
                        if set.contains(&s) {
                            w.clone()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self { probs }
    }

    /// Parses `"A: c=1/3, d=2/3; B: d=1"`. Unlisted strategies get 0; a
    /// player with no entry must have exactly one strategy.
    pub fn parse(form: &GameForm, text: &str) -> Result<Self, ProfileError> {
        let mut probs: Vec<Option<Vec<Rational>>> = vec![None; form.player_count()];
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (player, entries) = part.split_once(':').ok_or_else(|| {
                ProfileError::Syntax(format!("expected `player: s=p, ...` in `{part}`"))
            })?;
            let player = player.trim();
            let i = form
                .player_index(player)
                .ok_or_else(|| ProfileError::UnknownPlayer(player.to_owned()))?;
            let mut row = vec![Rational::zero(); form.strategies(i).len()];
            for entry in entries.split(',').map(str::trim).filter(|e| !e.is_empty()) {
                let (s, p) = entry.split_once('=').ok_or_else(|| {
                    ProfileError::Syntax(format!("expected `strategy=prob` in `{entry}`"))
                })?;
                let s = s.trim();
                let k = form
                    .strategy_index(i, s)
                    .ok_or_else(|| ProfileError::UnknownStrategy {
                        player: player.to_owned(),
                        strategy: s.to_owned(),
                    })?;
                row[k] = parse_rational(p).map_err(|e| ProfileError::Syntax(e.to_string()))?;
            }
            probs[i] = Some(row);
        }
        let probs = probs
            .into_iter()
            .enumerate()
            .map(|(i, row)| match row {
                Some(r) => Ok(r),
                None if form.strategies(i).len() == 1 => Ok(vec![Rational::one()]),
                None => Err(ProfileError::Syntax(format!(
                    "no distribution given for player `{}`",
                    form.player(i)
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(form, probs)
    }

    pub fn prob(&self, player: usize, strategy: usize) -> &Rational {
        &self.probs[player][strategy]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.probs
    }

    pub fn support(&self) -> SupportProfile {
        SupportProfile {
            sets: self
                .probs
                .iter()
                .map(|row| (0..row.len()).filter(|&s| !row[s].is_zero()).collect())
                .collect(),
        }
    }

    pub fn describe(&self, form: &GameForm) -> String {
        self.to_string_with(form)
    }

    fn to_string_with(&self, form: &GameForm) -> String {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let entries: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(s, p)| format!("{}={}", form.strategies(i)[s], format_rational(p)))
                    .collect();
                format!("{}: {}", form.player(i), entries.join(", "))
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for SupportProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.sets)
    }
}

/// States are the product of the supports (lexicographic); each player is sure
/// of their own strategy and believes the others play according to `mu`.
pub fn build_characteristic_structure(
    form: &GameForm,
    mu: &MixedProfile,
) -> Result<GammaStructure, ProfileError> {
    if !form.atoms().is_empty() {
        return Err(ProfileError::ExtraAtoms);
    }
    let support = mu.support();
    let profiles = support.product();
    let n = form.player_count();
    let states = profiles
        .iter()
        .map(|sigma| {
            let beliefs = (0..n)
                .map(|i| {
                    let entries: Vec<(usize, Rational)> = profiles
                        .iter()
                        .enumerate()
                        .filter(|(_, other)| other[i] == sigma[i])
                        .map(|(t, other)| {
                            let w: Rational = (0..n)
                                .filter(|&j| j != i)
                                .map(|j| mu.prob(j, other[j]).clone())
                                .product();
                            (t, w)
                        })
                        .collect();
                    match entries.as_slice() {
                        [(t, _)] => Belief::Point(*t),
                        _ => Belief::Distribution(entries),
                    }
                })
                .collect();
            State {
                id: format!("({})", form.profile_label(sigma)),
                profile: sigma.clone(),
                atoms: Vec::new(),
                beliefs,
            }
        })
        .collect();
    Ok(GammaStructure::from_states(states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::prisoners_dilemma;
    use crate::kripke::validate_structure;
    use crate::rational::ratio;

    #[test]
    fn uniform_pd_structure() {
        let game = prisoners_dilemma();
        let form = game.form();
        let mu = MixedProfile::parse(form, "A: c=1/2, d=1/2; B: c=1/2, d=1/2").unwrap();
        let m = build_characteristic_structure(form, &mu).unwrap();
        assert_eq!(m.len(), 4);
        assert!(validate_structure(&m, form).unwrap().is_ok());
        let cc = m.state_index("(c,c)").unwrap();
        let cd = m.state_index("(c,d)").unwrap();
        let w = m.state(cc).beliefs[0].weights();
        assert_eq!(w.len(), 2);
        assert_eq!(w[&cc], ratio(1, 2));
        assert_eq!(w[&cd], ratio(1, 2));
    }

    #[test]
    fn pure_profile_is_single_state() {
        let game = prisoners_dilemma();
        let form = game.form();
        let mu = MixedProfile::pure(form, &[0, 1]);
        let m = build_characteristic_structure(form, &mu).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.state(0).id, "(c,d)");
        assert_eq!(m.state(0).beliefs, vec![Belief::Point(0), Belief::Point(0)]);
    }

    #[test]
    fn asymmetric_profile() {
        let game = prisoners_dilemma();
        let form = game.form();
        let mu = MixedProfile::parse(form, "A: c=1/3, d=2/3; B: c=1").unwrap();
        let m = build_characteristic_structure(form, &mu).unwrap();
        assert_eq!(m.len(), 2);
        let cc = m.state_index("(c,c)").unwrap();
        let dc = m.state_index("(d,c)").unwrap();
        let w = m.state(cc).beliefs[1].weights();
        assert_eq!(w[&cc], ratio(1, 3));
        assert_eq!(w[&dc], ratio(2, 3));
    }

    #[test]
    fn profile_errors() {
        let game = prisoners_dilemma();
        let form = game.form();
        assert!(matches!(
            MixedProfile::parse(form, "A: c=1/2; B: d=1"),
            Err(ProfileError::Sum { .. })
        ));
        assert!(matches!(
            MixedProfile::parse(form, "A: x=1; B: d=1"),
            Err(ProfileError::UnknownStrategy { .. })
        ));
        assert!(matches!(
            MixedProfile::parse(form, "A: d=1"),
            Err(ProfileError::Syntax(_))
        ));
        assert!(matches!(
            MixedProfile::parse(form, "A: c=3/2, d=-1/2; B: d=1"),
            Err(ProfileError::Negative(_))
        ));
    }

    #[test]
    fn support_profiles_of_two_by_two() {
        let game = prisoners_dilemma();
        let all = all_support_profiles(game.form());
        assert_eq!(all.len(), 9);
        assert_eq!(all[0].sets, vec![vec![0], vec![0]]);
        assert_eq!(all[8].sets, vec![vec![0, 1], vec![0, 1]]);
    }
}
