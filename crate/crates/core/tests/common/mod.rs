//! Reference implementations used as test oracles. They work from raw
//! tables and belief supports and share no code paths with the solver.

#![allow(dead_code)]

use std::collections::BTreeSet;

use lbg::game::{compile_classical, Game, GameForm, PayoffTable};
use lbg::kripke::{GammaStructure, MixedProfile};
use lbg::lang::StrategyId;
use lbg::rational::int;
use num_rational::Ratio;
use rand::Rng;

pub type Q = Ratio<i64>;

/// `EB X`: every player's belief support lies in `x`.
pub fn everyone_believes(m: &GammaStructure, players: usize, x: &[bool]) -> Vec<bool> {
    (0..m.len())
        .map(|k| (0..players).all(|i| m.support(k, i).iter().all(|&t| x[t])))
        .collect()
}

/// `CB X` as the intersection of `EB^k X` for `k = 1 ..= |Ω|`; longer
/// iterates add nothing because every reachable state is reached by a path
/// of at most `|Ω|` steps.
pub fn common_belief_by_iteration(m: &GammaStructure, players: usize, x: &[bool]) -> Vec<bool> {
    let mut level = everyone_believes(m, players, x);
    let mut acc = level.clone();
    for _ in 1..m.len() {
        level = everyone_believes(m, players, &level);
        for (a, l) in acc.iter_mut().zip(&level) {
            *a &= *l;
        }
    }
    acc
}

/// A classical game with its raw payoff table, indexed `[profile][player]`
/// in `form.profiles()` order.
pub struct Classical {
    pub shape: Vec<usize>,
    pub payoffs: Vec<Vec<i64>>,
    pub game: Game,
}

pub fn random_classical<R: Rng>(rng: &mut R, shape: &[usize], range: i64) -> Classical {
    let form = lbg::random::form(shape, 0);
    let profiles: Vec<Vec<usize>> = form.profiles().collect();
    let payoffs: Vec<Vec<i64>> = profiles
        .iter()
        .map(|_| {
            (0..shape.len())
                .map(|_| rng.gen_range(-range..=range))
                .collect()
        })
        .collect();
    let game = classical_from(&form, &profiles, &payoffs);
    Classical {
        shape: shape.to_vec(),
        payoffs,
        game,
    }
}

pub fn classical_from(form: &GameForm, profiles: &[Vec<usize>], payoffs: &[Vec<i64>]) -> Game {
    let mut table = PayoffTable::new();
    for (p, v) in profiles.iter().zip(payoffs) {
        let names: Vec<StrategyId> = p
            .iter()
            .enumerate()
            .map(|(i, &s)| form.strategies(i)[s].clone())
            .collect();
        table.insert(names, v.iter().map(|&x| int(x)).collect());
    }
    compile_classical(form, &table).expect("total table")
}

impl Classical {
    fn index(&self, profile: &[usize]) -> usize {
        // row-major with the last player fastest, matching `form.profiles()`
        profile
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&s, &n)| acc * n + s)
    }

    pub fn payoff(&self, profile: &[usize], player: usize) -> i64 {
        self.payoffs[self.index(profile)][player]
    }

    /// Expected payoff of `player` playing `s` against the others' mixes.
    pub fn expected(&self, mu: &[Vec<Q>], player: usize, s: usize) -> Q {
        let mut total = Q::from_integer(0);
        let n = self.shape.len();
        let mut profile = vec![0; n];
        loop {
            if profile[player] == s {
                let weight = (0..n)
                    .filter(|&j| j != player)
                    .fold(Q::from_integer(1), |w, j| w * mu[j][profile[j]]);
                if weight != Q::from_integer(0) {
                    total += weight * Q::from_integer(self.payoff(&profile, player));
                }
            }
            // odometer
            let mut j = n;
            loop {
                if j == 0 {
                    return total;
                }
                j -= 1;
                profile[j] += 1;
                if profile[j] < self.shape[j] {
                    break;
                }
                profile[j] = 0;
            }
        }
    }

    /// Every supported strategy earns the best expected payoff.
    pub fn is_nash(&self, mu: &[Vec<Q>]) -> bool {
        (0..self.shape.len()).all(|i| {
            let eu: Vec<Q> = (0..self.shape[i])
                .map(|s| self.expected(mu, i, s))
                .collect();
            let best = *eu.iter().max().expect("nonempty");
            (0..self.shape[i]).all(|s| mu[i][s] == Q::from_integer(0) || eu[s] == best)
        })
    }

    /// Supports (as strategy-index sets per player) of grid profiles with
    /// denominators up to `bound` that are equilibria.
    pub fn grid_nash_supports(&self, bound: i64) -> BTreeSet<Vec<Vec<usize>>> {
        let rows: Vec<Vec<Vec<Q>>> = self.shape.iter().map(|&n| simplex_grid(n, bound)).collect();
        let mut out = BTreeSet::new();
        let mut pick = vec![0usize; rows.len()];
        loop {
            let mu: Vec<Vec<Q>> = pick.iter().zip(&rows).map(|(&k, r)| r[k].clone()).collect();
            if self.is_nash(&mu) {
                out.insert(support_of(&mu));
            }
            let mut j = rows.len();
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                pick[j] += 1;
                if pick[j] < rows[j].len() {
                    break;
                }
                pick[j] = 0;
            }
        }
    }
}

pub fn support_of(mu: &[Vec<Q>]) -> Vec<Vec<usize>> {
    mu.iter()
        .map(|row| {
            (0..row.len())
                .filter(|&s| row[s] != Q::from_integer(0))
                .collect()
        })
        .collect()
}

/// Distinct points of the `n`-simplex whose coordinates have denominators
/// up to `bound`.
pub fn simplex_grid(n: usize, bound: i64) -> Vec<Vec<Q>> {
    let mut set = BTreeSet::new();
    for q in 1..=bound {
        let mut parts = vec![0i64; n];
        compositions(q, 0, &mut parts, &mut |p| {
            set.insert(p.iter().map(|&a| Q::new(a, q)).collect::<Vec<_>>());
        });
    }
    set.into_iter().collect()
}

fn compositions(left: i64, at: usize, parts: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if at + 1 == parts.len() {
        parts[at] = left;
        f(parts);
        return;
    }
    for a in 0..=left {
        parts[at] = a;
        compositions(left - a, at + 1, parts, f);
    }
}

/// Converts an exact profile from the library into oracle rationals.
pub fn to_q(mu: &MixedProfile) -> Vec<Vec<Q>> {
    mu.rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| {
                    let n: i64 = p.numer().try_into().expect("small numerator");
                    let d: i64 = p.denom().try_into().expect("small denominator");
                    Q::new(n, d)
                })
                .collect()
        })
        .collect()
}

/// Strategies of `player` that survive iterated elimination of strictly
/// dominated strategies (pure dominators), for two-player tables.
pub fn iterated_undominated(c: &Classical) -> Vec<Vec<usize>> {
    let mut alive: Vec<Vec<usize>> = c.shape.iter().map(|&n| (0..n).collect()).collect();
    loop {
        let mut changed = false;
        for i in 0..c.shape.len() {
            let others = |profile_of: &dyn Fn(&[usize]) -> i64, rest: &[Vec<usize>]| -> Vec<i64> {
                // payoffs across all surviving opponent profiles
                let mut vals = Vec::new();
                let mut idx = vec![0usize; rest.len()];
                loop {
                    let pick: Vec<usize> = idx.iter().zip(rest).map(|(&k, r)| r[k]).collect();
                    vals.push(profile_of(&pick));
                    let mut j = rest.len();
                    loop {
                        if j == 0 {
                            return vals;
                        }
                        j -= 1;
                        idx[j] += 1;
                        if idx[j] < rest[j].len() {
                            break;
                        }
                        idx[j] = 0;
                    }
                }
            };
            let rest: Vec<Vec<usize>> = alive
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, r)| r.clone())
                .collect();
            let row = |s: usize| {
                others(
                    &|opp: &[usize]| {
                        let mut full = opp.to_vec();
                        full.insert(i, s);
                        c.payoff(&full, i)
                    },
                    &rest,
                )
            };
            let dominated: Vec<usize> = alive[i]
                .iter()
                .copied()
                .filter(|&s| {
                    let mine = row(s);
                    alive[i]
                        .iter()
                        .any(|&t| t != s && row(t).iter().zip(&mine).all(|(a, b)| a > b))
                })
                .collect();
            if !dominated.is_empty() {
                alive[i].retain(|s| !dominated.contains(s));
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}
