//! The belief language: formulas over play atoms, extra propositions,
//! rationality atoms, negation, conjunction, individual belief and common
//! belief.
//!
//! Derived connectives (`or`, `->`, `P[i]`, `EB`, `RAT`, `play(profile)`) are
//! expanded at construction time, so every [`Formula`] is built from the seven
//! core constructors only.

mod parse;
mod render;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_formula, ParseError};
pub use render::{render_formula, render_with};

/// Name of a player.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(String);

/// Name of a strategy, unique within its player's strategy set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyId(String);

macro_rules! name_type {
    ($t:ident) => {
        impl $t {
            pub fn new(name: impl Into<String>) -> Self {
                Self(name.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $t {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl PartialEq<str> for $t {
            fn eq(&self, other: &str) -> bool {
                self.0 == other
            }
        }

        impl PartialEq<&str> for $t {
            fn eq(&self, other: &&str) -> bool {
                self.0 == *other
            }
        }
    };
}

name_type!(PlayerId);
name_type!(StrategyId);

/// A formula of the belief language, in core constructors only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Play(PlayerId, StrategyId),
    Prop(String),
    Rat(PlayerId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Believes(PlayerId, Box<Formula>),
    CommonBelief(Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("modal depth is undefined for formulas containing common belief")]
    DepthUndefined,
    #[error("unsupported construct: {0}")]
    Unsupported(&'static str),
}

impl Formula {
    pub fn play(player: impl Into<PlayerId>, strategy: impl Into<StrategyId>) -> Self {
        Formula::Play(player.into(), strategy.into())
    }

    pub fn prop(atom: impl Into<String>) -> Self {
        Formula::Prop(atom.into())
    }

    pub fn rat(player: impl Into<PlayerId>) -> Self {
        Formula::Rat(player.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    /// `a or b`, expanded to `not (not a and not b)`.
    pub fn or(self, other: Formula) -> Self {
        self.not().and(other.not()).not()
    }

    /// `a -> b`, expanded to `not (a and not b)`.
    pub fn implies(self, other: Formula) -> Self {
        self.and(other.not()).not()
    }

    pub fn believes(player: impl Into<PlayerId>, f: Formula) -> Self {
        Formula::Believes(player.into(), Box::new(f))
    }

    /// `P[i] f`, i.e. `not B[i] not f`.
    pub fn possible(player: impl Into<PlayerId>, f: Formula) -> Self {
        Formula::believes(player, f.not()).not()
    }

    pub fn common_belief(f: Formula) -> Self {
        Formula::CommonBelief(Box::new(f))
    }

    /// Right-associated conjunction. Returns `None` for an empty iterator.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let mut acc = items.pop()?;
        while let Some(f) = items.pop() {
            acc = f.and(acc);
        }
        Some(acc)
    }

    /// Right-associated disjunction. Returns `None` for an empty iterator.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let mut acc = items.pop()?;
        while let Some(f) = items.pop() {
            acc = f.or(acc);
        }
        Some(acc)
    }

    /// Everyone believes `f`: the conjunction of `B[i] f` over `players`.
    pub fn everyone_believes<'a, I>(players: I, f: &Formula) -> Option<Formula>
    where
        I: IntoIterator<Item = &'a PlayerId>,
    {
        Formula::conjunction(
            players
                .into_iter()
                .map(|p| Formula::believes(p.clone(), f.clone())),
        )
    }

    /// RAT: the conjunction of `RAT[i]` over `players`.
    pub fn all_rational<'a, I>(players: I) -> Option<Formula>
    where
        I: IntoIterator<Item = &'a PlayerId>,
    {
        Formula::conjunction(players.into_iter().map(|p| Formula::rat(p.clone())))
    }

    pub fn contains_common_belief(&self) -> bool {
        self.any(&|f| matches!(f, Formula::CommonBelief(_)))
    }

    pub fn contains_rat(&self) -> bool {
        self.any(&|f| matches!(f, Formula::Rat(_)))
    }

    fn any(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Formula::Play(..) | Formula::Prop(_) | Formula::Rat(_) => false,
            Formula::Not(f) | Formula::Believes(_, f) | Formula::CommonBelief(f) => f.any(pred),
            Formula::And(a, b) => a.any(pred) || b.any(pred),
        }
    }

    /// Calls `visit` on every node, parents before children.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a Formula)) {
        visit(self);
        match self {
            Formula::Play(..) | Formula::Prop(_) | Formula::Rat(_) => {}
            Formula::Not(f) | Formula::Believes(_, f) | Formula::CommonBelief(f) => f.walk(visit),
            Formula::And(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
        }
    }

    /// Nesting depth of belief operators.
    pub fn modal_depth(&self) -> Result<usize, FormulaError> {
        match self {
            Formula::Play(..) | Formula::Prop(_) | Formula::Rat(_) => Ok(0),
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b) => Ok(a.modal_depth()?.max(b.modal_depth()?)),
            Formula::Believes(_, f) => Ok(1 + f.modal_depth()?),
            Formula::CommonBelief(_) => Err(FormulaError::DepthUndefined),
        }
    }

    /// True iff every `play` atom of `player` lies under some `B[j]` with
    /// `j != player`. Extra propositions are independent of every player.
    pub fn is_independent_of(&self, player: &PlayerId) -> Result<bool, FormulaError> {
        fn go(f: &Formula, player: &PlayerId, shielded: bool) -> Result<bool, FormulaError> {
            match f {
                Formula::Play(p, _) => Ok(shielded || p != player),
                Formula::Prop(_) => Ok(true),
                Formula::Rat(_) => Err(FormulaError::Unsupported("RAT")),
                Formula::CommonBelief(_) => Err(FormulaError::Unsupported("CB")),
                Formula::Not(g) => go(g, player, shielded),
                Formula::And(a, b) => {
                    // evaluate both sides so unsupported constructs always surface
                    let l = go(a, player, shielded)?;
                    let r = go(b, player, shielded)?;
                    Ok(l && r)
                }
                Formula::Believes(j, g) => go(g, player, shielded || j != player),
            }
        }
        go(self, player, false)
    }
}

/// Free-function form of [`Formula::modal_depth`].
pub fn modal_depth(f: &Formula) -> Result<usize, FormulaError> {
    f.modal_depth()
}

/// Free-function form of [`Formula::is_independent_of`].
pub fn is_i_independent(f: &Formula, player: &PlayerId) -> Result<bool, FormulaError> {
    f.is_independent_of(player)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}
