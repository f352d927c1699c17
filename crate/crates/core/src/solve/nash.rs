//! Nash equilibria as mixed profiles whose characteristic structure makes
//! every player rational at every state.
//!
//! In a characteristic structure the truth of every formula depends only on
//! the supports of the profile, so counterfactual utilities can be tabulated
//! once per support profile. What remains is a condition on the
//! probabilities: linear in the opponent's weights for two players, and
//! multilinear beyond that.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::simplex::{maximize, Constraint, LpOutcome, Relation};
use super::SolveError;
use crate::checker::Evaluator;
use crate::game::{Game, GameForm};
use crate::kripke::{
    all_support_profiles, build_characteristic_structure, MixedProfile, SupportProfile,
};
use crate::rational::{ratio, Rational};

pub const DEFAULT_DENOMINATOR_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exact linear feasibility per support; complete.
    ExactLinear,
    /// Search over profiles with denominators up to the bound; may miss
    /// equilibria.
    Grid { denominator_bound: usize },
}

impl Method {
    pub fn is_complete(&self) -> bool {
        matches!(self, Method::ExactLinear)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::ExactLinear => "exact-linear",
            Method::Grid { .. } => "grid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NashOptions {
    /// Grid resolution used for games with three or more players.
    pub denominator_bound: usize,
}

impl Default for NashOptions {
    fn default() -> Self {
        Self {
            denominator_bound: DEFAULT_DENOMINATOR_BOUND,
        }
    }
}

/// Verdict for one support profile; `sample` is an equilibrium with exactly
/// this support when one was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportVerdict {
    pub support: SupportProfile,
    pub sample: Option<MixedProfile>,
}

impl SupportVerdict {
    pub fn is_feasible(&self) -> bool {
        self.sample.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashReport {
    pub method: Method,
    pub supports: Vec<SupportVerdict>,
}

impl NashReport {
    pub fn feasible(&self) -> impl Iterator<Item = &SupportVerdict> {
        self.supports.iter().filter(|v| v.is_feasible())
    }

    pub fn feasible_count(&self) -> usize {
        self.feasible().count()
    }
}

fn require_no_atoms(form: &GameForm) -> Result<(), SolveError> {
    if form.atoms().is_empty() {
        Ok(())
    } else {
        Err(SolveError::ExtraAtoms)
    }
}

/// True iff every player is rational at every state of the characteristic
/// structure of `mu`.
pub fn is_nash(game: &Game, mu: &MixedProfile) -> Result<bool, SolveError> {
    require_no_atoms(game.form())?;
    let m = build_characteristic_structure(game.form(), mu)?;
    let mut ev = Evaluator::with_game(&m, game)?;
    for i in 0..game.form().player_count() {
        if !ev.rational(i)?.is_full() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Counterfactual utilities in the characteristic structure of a support:
/// `values[i][s][k]` is player `i`'s utility for strategy `s` at state `k`.
struct UtilityTable {
    profiles: Vec<Vec<usize>>,
    values: Vec<Vec<Vec<Rational>>>,
}

impl UtilityTable {
    fn new(game: &Game, support: &SupportProfile) -> Result<Self, SolveError> {
        let form = game.form();
        let mu = MixedProfile::uniform(form, support);
        let m = build_characteristic_structure(form, &mu)?;
        let mut ev = Evaluator::with_game(&m, game)?;
        let mut values = Vec::with_capacity(form.player_count());
        for i in 0..form.player_count() {
            let mut per_strategy = Vec::new();
            for s in 0..form.strategies(i).len() {
                let row = (0..m.len())
                    .map(|k| ev.counterfactual_utility(k, i, s))
                    .collect::<Result<Vec<_>, _>>()?;
                per_strategy.push(row);
            }
            values.push(per_strategy);
        }
        Ok(Self {
            profiles: support.product(),
            values,
        })
    }

    /// Expected utility of `player` switching to `s` at states where they
    /// play `own`, with opponents mixing according to `mu`.
    fn expected(&self, mu: &MixedProfile, player: usize, own: usize, s: usize) -> Rational {
        self.profiles
            .iter()
            .enumerate()
            .filter(|(_, p)| p[player] == own)
            .map(|(k, p)| {
                let w: Rational = p
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != player)
                    .map(|(j, &b)| mu.prob(j, b).clone())
                    .product();
                w * &self.values[player][s][k]
            })
            .sum()
    }

    fn all_rational(&self, form: &GameForm, support: &SupportProfile, mu: &MixedProfile) -> bool {
        (0..form.player_count()).all(|i| {
            support.sets[i].iter().all(|&a| {
                let own = self.expected(mu, i, a, a);
                (0..form.strategies(i).len()).all(|s| self.expected(mu, i, a, s) <= own)
            })
        })
    }
}

/// Searches every support profile for an equilibrium with exactly that
/// support.
pub fn find_nash(game: &Game, options: NashOptions) -> Result<NashReport, SolveError> {
    let form = game.form();
    require_no_atoms(form)?;
    let method = if form.player_count() <= 2 {
        Method::ExactLinear
    } else {
        if options.denominator_bound == 0 {
            return Err(SolveError::InvalidBound(
                "denominator bound must be at least 1",
            ));
        }
        Method::Grid {
            denominator_bound: options.denominator_bound,
        }
    };
    let mut supports = Vec::new();
    for support in all_support_profiles(form) {
        let sample = solve_support(game, &support, method)?;
        supports.push(SupportVerdict { support, sample });
    }
    Ok(NashReport { method, supports })
}

/// Looks for an equilibrium whose support is exactly `support`.
pub fn solve_support(
    game: &Game,
    support: &SupportProfile,
    method: Method,
) -> Result<Option<MixedProfile>, SolveError> {
    let table = UtilityTable::new(game, support)?;
    let sample = match method {
        Method::ExactLinear => linear_feasibility(game.form(), support, &table)?,
        Method::Grid { denominator_bound } => {
            grid_search(game.form(), support, &table, denominator_bound)?
        }
    };
    if let Some(mu) = &sample {
        debug_assert!(
            is_nash(game, mu)?,
            "support solution fails the direct check"
        );
    }
    Ok(sample)
}

/// Variables: each player's weights on their support, then the minimum
/// weight `t`. Maximizes `t`; the support is feasible iff the optimum is
/// positive.
fn linear_feasibility(
    form: &GameForm,
    support: &SupportProfile,
    table: &UtilityTable,
) -> Result<Option<MixedProfile>, SolveError> {
    let np = form.player_count();
    assert!(np <= 2, "linear feasibility needs at most two players");
    let mut offset = Vec::with_capacity(np);
    let mut width = 0;
    for set in &support.sets {
        offset.push(width);
        width += set.len();
    }
    let t_var = width;
    width += 1;
    let var = |j: usize, b: usize| {
        offset[j]
            + support.sets[j]
                .iter()
                .position(|&x| x == b)
                .expect("in support")
    };

    let mut rows = Vec::new();
    for (i, set) in support.sets.iter().enumerate() {
        let mut sum = vec![Rational::zero(); width];
        for &a in set {
            sum[var(i, a)] = Rational::one();
            let mut lower = vec![Rational::zero(); width];
            lower[var(i, a)] = Rational::one();
            lower[t_var] = -Rational::one();
            rows.push(Constraint::new(lower, Relation::Ge, Rational::zero()));
        }
        rows.push(Constraint::new(sum, Relation::Eq, Rational::one()));

        for &a in set {
            for s in 0..form.strategies(i).len() {
                if s == a {
                    continue;
                }
                let mut coeffs = vec![Rational::zero(); width];
                let mut constant = Rational::zero();
                for (k, p) in table.profiles.iter().enumerate() {
                    if p[i] != a {
                        continue;
                    }
                    let diff = &table.values[i][a][k] - &table.values[i][s][k];
                    if np == 2 {
                        let j = 1 - i;
                        coeffs[var(j, p[j])] += diff;
                    } else {
                        constant += diff;
                    }
                }
                rows.push(Constraint::new(coeffs, Relation::Ge, -constant));
            }
        }
    }
    let mut objective = vec![Rational::zero(); width];
    objective[t_var] = Rational::one();
    match maximize(&objective, &rows) {
        LpOutcome::Optimal { value, x } if value.is_positive() => {
            let probs = (0..np)
                .map(|i| {
                    (0..form.strategies(i).len())
                        .map(|s| {
                            if support.sets[i].contains(&s) {
                                x[var(i, s)].clone()
                            } else {
                                Rational::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            Ok(Some(MixedProfile::new(form, probs)?))
        }
        _ => Ok(None),
    }
}

/// Distributions with all weights positive over `k` strategies whose common
/// denominator is at most `bound`, deduplicated.
pub(crate) fn grid_points(k: usize, bound: usize) -> Vec<Vec<Rational>> {
    fn compositions(
        total: usize,
        parts: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=total.saturating_sub(parts - 1) {
            prefix.push(first);
            compositions(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut points = BTreeSet::new();
    for d in k..=bound {
        let mut comps = Vec::new();
        compositions(d, k, &mut Vec::new(), &mut comps);
        for c in comps {
            points.insert(
                c.iter()
                    .map(|&x| ratio(x as i64, d as i64))
                    .collect::<Vec<_>>(),
            );
        }
    }
    points.into_iter().collect()
}

fn grid_search(
    form: &GameForm,
    support: &SupportProfile,
    table: &UtilityTable,
    bound: usize,
) -> Result<Option<MixedProfile>, SolveError> {
    let grids: Vec<Vec<Vec<Rational>>> = support
        .sets
        .iter()
        .map(|set| grid_points(set.len(), bound))
        .collect();
    if grids.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut pick = vec![0usize; grids.len()];
    loop {
        let probs = (0..form.player_count())
            .map(|i| {
                let mut row = vec![Rational::zero(); form.strategies(i).len()];
                for (&s, w) in support.sets[i].iter().zip(&grids[i][pick[i]]) {
                    row[s] = w.clone();
                }
                row
            })
            .collect();
        let mu = MixedProfile::new(form, probs)?;
        if table.all_rational(form, support, &mu) {
            return Ok(Some(mu));
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(None);
            }
            pick[i] += 1;
            if pick[i] < grids[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}
