//! Builders for the worked example games.

use std::collections::BTreeMap;

use super::{
    compile_classical, FiniteUtilitySpec, Game, GameError, GameForm, PayoffTable, UtilityGuard,
};
use crate::lang::{Formula, StrategyId};
use crate::rational::{int, Rational};

/// Strategy name used for players who have no decision to make.
pub const IDLE: &str = "idle";

fn g(guard: Formula, value: i64) -> UtilityGuard {
    UtilityGuard::new(guard, int(value))
}

/// Classical prisoner's dilemma with payoffs (3,3), (0,5), (5,0), (1,1).
pub fn prisoners_dilemma() -> Game {
    let form = GameForm::builder()
        .player("A", ["c", "d"])
        .player("B", ["c", "d"])
        .build()
        .expect("static form");
    let mut table = PayoffTable::new();
    for (a, b, ua, ub) in [
        ("c", "c", 3, 3),
        ("c", "d", 0, 5),
        ("d", "c", 5, 0),
        ("d", "d", 1, 1),
    ] {
        table.insert(
            vec![StrategyId::new(a), StrategyId::new(b)],
            vec![int(ua), int(ub)],
        );
    }
    compile_classical(&form, &table).expect("total table")
}

/// Bob wants to propose only if Alice does not expect it.
pub fn surprise_proposal() -> Game {
    let form = GameForm::builder()
        .player("A", [IDLE])
        .player("B", ["p", "q"])
        .build()
        .expect("static form");
    let p = Formula::play("B", "p");
    let q = Formula::play("B", "q");
    let expects = Formula::believes("A", p.clone());
    let bob = FiniteUtilitySpec::new(vec![
        g(p.clone().and(expects.clone()), 0),
        g(p.and(expects.clone().not()), 1),
        g(q.clone().and(expects.clone()), 1),
        g(q.and(expects.not()), 0),
    ]);
    let alice = FiniteUtilitySpec::constant(&form, 0, int(0));
    Game::from_ordered(form, vec![alice, bob]).expect("well-formed guards")
}

/// Prisoner's dilemma where being expected to defect makes defection cost -1.
pub fn indignant_altruism() -> Game {
    let form = GameForm::builder()
        .player("A", ["c", "d"])
        .player("B", ["c", "d"])
        .build()
        .expect("static form");
    let spec = |me: &str, other: &str| {
        let my = |s: &str| Formula::play(me, s);
        let their = |s: &str| Formula::play(other, s);
        let suspected = Formula::believes(other, my("d"));
        FiniteUtilitySpec::new(vec![
            g(my("d").and(suspected.clone()), -1),
            g(my("d").and(suspected.clone().not()).and(their("c")), 5),
            g(my("d").and(suspected.not()).and(their("d")), 1),
            g(my("c").and(their("c")), 3),
            g(my("c").and(their("d")), 0),
        ])
    };
    let specs = vec![spec("A", "B"), spec("B", "A")];
    Game::from_ordered(form, specs).expect("well-formed guards")
}

/// `P_A (P_B P_A)^k play_B(p)`.
pub(crate) fn suspicion(k: usize) -> Formula {
    let mut f = Formula::possible("A", Formula::play("B", "p"));
    for _ in 0..k {
        f = Formula::possible("A", Formula::possible("B", f));
    }
    f
}

/// Deeply surprising proposal, truncated at nesting level `max_level`.
pub fn deep_surprise(max_level: usize) -> Game {
    let form = GameForm::builder()
        .player("A", [IDLE])
        .player("B", ["p", "q"])
        .build()
        .expect("static form");
    let levels: Vec<Formula> = (0..=max_level).map(suspicion).collect();
    let none = Formula::conjunction(levels.iter().cloned().map(Formula::not)).expect("K >= 0");
    let some = Formula::disjunction(levels).expect("K >= 0");
    let propose = Formula::play("B", "p").and(none);
    let hold = Formula::play("B", "q").and(some);
    let otherwise = propose.clone().not().and(hold.clone().not());
    let bob = FiniteUtilitySpec::new(vec![g(propose, 1), g(hold, 1), g(otherwise, 0)]);
    let alice = FiniteUtilitySpec::constant(&form, 0, int(0));
    Game::from_ordered(form, vec![alice, bob]).expect("well-formed guards")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayRaiseVariant {
    /// `-|k - r|`
    Absolute,
    /// Fixed guilt for undershooting the lowest expectation, graded cost for
    /// overshooting it.
    Guilt,
    /// Bob's utility minus `delta * k`.
    Empathetic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PayRaise {
    pub variant: PayRaiseVariant,
    /// Gain weight of Bob's reference-dependent term.
    pub alpha: Rational,
    /// Loss weight of Bob's reference-dependent term.
    pub beta: Rational,
    pub delta: Rational,
    /// Alice chooses among raises `s0 .. s{n_steps-1}`.
    pub n_steps: usize,
}

impl Default for PayRaise {
    fn default() -> Self {
        Self {
            variant: PayRaiseVariant::Absolute,
            alpha: int(1),
            beta: int(1),
            delta: int(1),
            n_steps: 6,
        }
    }
}

impl PayRaise {
    /// Bob's value `k + f(k - r)`.
    pub fn bob_value(&self, k: i64, r: i64) -> Rational {
        let x = int(k - r);
        let weight = if k >= r { &self.alpha } else { &self.beta };
        int(k) + weight * x
    }

    /// Alice's value for raise `k`, lowest expectation `r`, highest `top`.
    pub fn alice_value(&self, k: i64, r: i64, top: i64) -> Rational {
        match self.variant {
            PayRaiseVariant::Absolute => int(-(k - r).abs()),
            PayRaiseVariant::Guilt => {
                if k < r {
                    int(-25)
                } else if k < top {
                    int(r - k)
                } else {
                    int(r - top + 2 * (top - k))
                }
            }
            PayRaiseVariant::Empathetic => self.bob_value(k, r) - &self.delta * int(k),
        }
    }
}

fn raise(k: usize) -> String {
    format!("s{k}")
}

/// Pay raise game: Alice picks `s_k`, Bob's reference point is the lowest
/// raise he considers possible.
pub fn pay_raise(params: &PayRaise) -> Result<Game, GameError> {
    let n = params.n_steps;
    if n == 0 {
        return Err(GameError::InvalidParameter(
            "n_steps must be at least 1".into(),
        ));
    }
    let form = GameForm::builder()
        .player("A", (0..n).map(raise))
        .player("B", [IDLE])
        .build()?;
    let gets = |k: usize| Formula::play("A", raise(k));
    let considers = |r: usize| Formula::possible("B", gets(r));
    // lowest raise Bob considers possible is exactly r
    let lowest = |r: usize| {
        let mut f = considers(r);
        for lower in (0..r).rev() {
            f = considers(lower).not().and(f);
        }
        f
    };
    // highest raise Bob considers possible is exactly top
    let highest = |top: usize| {
        let mut f = considers(top);
        for higher in (top + 1..n).rev() {
            f = f.and(considers(higher).not());
        }
        f
    };

    let mut bob = Vec::with_capacity(n * n);
    let mut alice = Vec::new();
    for k in 0..n {
        for r in 0..n {
            let guard = gets(k).and(lowest(r));
            let (ki, ri) = (k as i64, r as i64);
            bob.push(UtilityGuard::new(guard.clone(), params.bob_value(ki, ri)));
            match params.variant {
                PayRaiseVariant::Guilt => {
                    for top in r..n {
                        let g3 = guard.clone().and(highest(top));
                        alice.push(UtilityGuard::new(
                            g3,
                            params.alice_value(ki, ri, top as i64),
                        ));
                    }
                }
                _ => alice.push(UtilityGuard::new(guard, params.alice_value(ki, ri, ri))),
            }
        }
    }
    Game::from_ordered(
        form,
        vec![FiniteUtilitySpec::new(alice), FiniteUtilitySpec::new(bob)],
    )
}

/// Library book: returning today costs -1, waiting pays off only if Alice
/// believes she will return it tomorrow. `remind` is scored like `wait`.
pub fn library_book() -> Game {
    let form = GameForm::builder()
        .player("A", ["return", "wait", "remind"])
        .atom("tomorrow")
        .build()
        .expect("static form");
    let ret = Formula::play("A", "return");
    let keeps = Formula::play("A", "wait").or(Formula::play("A", "remind"));
    let expects = Formula::believes("A", Formula::prop("tomorrow"));
    let alice = FiniteUtilitySpec::new(vec![
        g(ret.clone(), -1),
        g(keeps.and(expects.clone()), 1),
        g(ret.not().and(expects.not()), -5),
    ]);
    Game::from_ordered(form, vec![alice]).expect("well-formed guards")
}

/// Half-open price interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PriceCell {
    pub lo: i64,
    pub hi: i64,
}

impl PriceCell {
    pub fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, price: i64) -> bool {
        self.lo <= price && price < self.hi
    }

    /// Atom naming this cell, e.g. `p_290_300`.
    pub fn atom(&self) -> String {
        let bound = |x: i64| {
            if x < 0 {
                format!("m{}", -x)
            } else {
                x.to_string()
            }
        };
        format!("p_{}_{}", bound(self.lo), bound(self.hi))
    }
}

/// The atom of the cell containing `price`, if any.
pub fn price_atom(partition: &[PriceCell], price: i64) -> Option<String> {
    partition
        .iter()
        .find(|c| c.contains(price))
        .map(PriceCell::atom)
}

/// A single buyer whose preferences only see which price cell holds.
pub fn roadtrip(
    partition: &[PriceCell],
    preferences: &BTreeMap<PriceCell, Rational>,
) -> Result<Game, GameError> {
    if partition.is_empty() {
        return Err(GameError::InvalidParameter("empty price partition".into()));
    }
    for c in partition {
        if c.lo >= c.hi {
            return Err(GameError::InvalidParameter(format!(
                "empty interval [{}, {})",
                c.lo, c.hi
            )));
        }
    }
    for w in partition.windows(2) {
        if w[0].hi > w[1].lo {
            return Err(GameError::OverlappingIntervals(format!(
                "[{}, {}) and [{}, {})",
                w[0].lo, w[0].hi, w[1].lo, w[1].hi
            )));
        }
    }
    let form = GameForm::builder()
        .player("A", ["buy"])
        .exclusive_atoms(partition.iter().map(PriceCell::atom))
        .build()?;
    let guards = partition
        .iter()
        .map(|c| {
            let value = preferences.get(c).cloned().ok_or_else(|| {
                GameError::InvalidParameter(format!("no preference for [{}, {})", c.lo, c.hi))
            })?;
            Ok(UtilityGuard::new(Formula::prop(c.atom()), value))
        })
        .collect::<Result<Vec<_>, GameError>>()?;
    Game::from_ordered(form, vec![FiniteUtilitySpec::new(guards)])
}
