//! Seeded generators for games, structures, profiles and formulas, used by
//! property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::game::{compile_classical, Game, GameForm, PayoffTable};
use crate::kripke::{Belief, GammaStructure, MixedProfile, State};
use crate::lang::Formula;
use crate::rational::{int, ratio, Rational};

/// A form with the given strategy counts, players `A, B, ...`, strategies
/// `s0, s1, ...` and `atoms` free atoms `a0, a1, ...`.
pub fn form(shape: &[usize], atoms: usize) -> GameForm {
    let mut b = GameForm::builder();
    for (i, &n) in shape.iter().enumerate() {
        let name = char::from(b'A' + i as u8).to_string();
        b = b.player(&name, (0..n).map(|k| format!("s{k}")));
    }
    for a in 0..atoms {
        b = b.atom(&format!("a{a}"));
    }
    b.build().expect("generated names are valid")
}

/// A classical game on `form` (no atoms) with integer payoffs in
/// `-range..=range`.
pub fn classical_game<R: Rng>(rng: &mut R, form: &GameForm, range: i64) -> Game {
    let mut table = PayoffTable::new();
    for profile in form.profiles() {
        let names = profile
            .iter()
            .enumerate()
            .map(|(i, &s)| form.strategies(i)[s].clone())
            .collect();
        let values = (0..form.player_count())
            .map(|_| int(rng.gen_range(-range..=range)))
            .collect();
        table.insert(names, values);
    }
    compile_classical(form, &table).expect("total payoff table")
}

/// A valid structure with `n` states. Each player's states are grouped by
/// own strategy and split into cells; a cell shares one belief, supported on
/// a random nonempty subset of the cell with random positive weights (point
/// masses when `point_beliefs`).
pub fn structure<R: Rng>(
    rng: &mut R,
    form: &GameForm,
    n: usize,
    point_beliefs: bool,
) -> GammaStructure {
    assert!(n >= 1);
    let players = form.player_count();
    let profiles: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            (0..players)
                .map(|i| rng.gen_range(0..form.strategies(i).len()))
                .collect()
        })
        .collect();
    let atoms: Vec<Vec<usize>> = (0..n).map(|_| random_atoms(rng, form)).collect();
    let mut beliefs: Vec<Vec<Option<Belief>>> = vec![vec![None; players]; n];
    for i in 0..players {
        for s in 0..form.strategies(i).len() {
            let mut group: Vec<usize> = (0..n).filter(|&k| profiles[k][i] == s).collect();
            group.shuffle(rng);
            while !group.is_empty() {
                let size = rng.gen_range(1..=group.len());
                let cell: Vec<usize> = group.drain(..size).collect();
                let support_size = rng.gen_range(1..=cell.len());
                let mut support = cell[..support_size].to_vec();
                support.sort_unstable();
                let belief = if point_beliefs || support.len() == 1 {
                    Belief::Point(support[0])
                } else {
                    Belief::Distribution(
                        support
                            .iter()
                            .copied()
                            .zip(weights(rng, support.len()))
                            .collect(),
                    )
                };
                for &k in &cell {
                    beliefs[k][i] = Some(belief.clone());
                }
            }
        }
    }
    let states = (0..n)
        .map(|k| State {
            id: format!("w{k}"),
            profile: profiles[k].clone(),
            atoms: atoms[k].clone(),
            beliefs: beliefs[k]
                .iter()
                .map(|b| b.clone().expect("every state is in a cell"))
                .collect(),
        })
        .collect();
    GammaStructure::from_states(states)
}

fn random_atoms<R: Rng>(rng: &mut R, form: &GameForm) -> Vec<usize> {
    let grouped: Vec<usize> = form.atom_groups().iter().flatten().copied().collect();
    let mut out: Vec<usize> = (0..form.atoms().len())
        .filter(|a| !grouped.contains(a) && rng.gen_bool(0.5))
        .collect();
    for g in form.atom_groups() {
        out.push(*g.choose(rng).expect("nonempty group"));
    }
    out.sort_unstable();
    out
}

/// `n` positive rationals summing to one.
fn weights<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| ratio(w, total)).collect()
}

/// The same structure with every non-point belief given fresh positive
/// weights on the same support.
pub fn reweight<R: Rng>(rng: &mut R, m: &GammaStructure) -> GammaStructure {
    let mut states = m.states().to_vec();
    let players = states.first().map_or(0, |s| s.beliefs.len());
    for i in 0..players {
        // one new distribution per distinct old one, so states that shared a
        // belief still share one
        let mut fresh: Vec<(Belief, Belief)> = Vec::new();
        for state in states.iter_mut() {
            let old = state.beliefs[i].clone();
            let new = match fresh.iter().find(|(o, _)| *o == old) {
                Some((_, n)) => n.clone(),
                None => {
                    let n = match &old {
                        Belief::Point(_) => old.clone(),
                        Belief::Distribution(entries) => {
                            let w = weights(rng, entries.len());
                            Belief::Distribution(entries.iter().map(|(t, _)| *t).zip(w).collect())
                        }
                    };
                    fresh.push((old, n.clone()));
                    n
                }
            };
            state.beliefs[i] = new;
        }
    }
    GammaStructure::from_states(states)
}

/// A mixed profile with denominators up to `max_den`, each player's support
/// a random nonempty subset.
pub fn mixed_profile<R: Rng>(rng: &mut R, form: &GameForm, max_den: i64) -> MixedProfile {
    let rows = (0..form.player_count())
        .map(|i| {
            let n = form.strategies(i).len();
            let mut support: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if support.is_empty() {
                support.push(rng.gen_range(0..n));
            }
            let raw: Vec<i64> = support
                .iter()
                .map(|_| rng.gen_range(1..=max_den.max(1)))
                .collect();
            let total: i64 = raw.iter().sum();
            let mut row = vec![int(0); n];
            for (&s, w) in support.iter().zip(raw) {
                row[s] = ratio(w, total);
            }
            row
        })
        .collect();
    MixedProfile::new(form, rows).expect("rows are distributions")
}

/// Which constructors a generated formula may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaOptions {
    pub max_depth: usize,
    pub rat: bool,
    pub common_belief: bool,
}

pub fn formula<R: Rng>(rng: &mut R, form: &GameForm, opts: FormulaOptions) -> Formula {
    if opts.max_depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng, form, opts.rat);
    }
    let sub = FormulaOptions {
        max_depth: opts.max_depth - 1,
        ..opts
    };
    let players = form.players();
    match rng.gen_range(0..if opts.common_belief { 5 } else { 4 }) {
        0 => formula(rng, form, sub).not(),
        1 => formula(rng, form, sub).and(formula(rng, form, sub)),
        2 => formula(rng, form, sub).or(formula(rng, form, sub)),
        3 => Formula::believes(
            players.choose(rng).expect("players").clone(),
            formula(rng, form, sub),
        ),
        _ => Formula::common_belief(formula(rng, form, sub)),
    }
}

fn leaf<R: Rng>(rng: &mut R, form: &GameForm, rat: bool) -> Formula {
    let i = rng.gen_range(0..form.player_count());
    let choice = rng.gen_range(0..if rat { 3 } else { 2 });
    match choice {
        1 if !form.atoms().is_empty() => {
            Formula::prop(form.atoms().choose(rng).expect("atoms").clone())
        }
        2 => Formula::rat(form.player(i).clone()),
        _ => {
            let s = rng.gen_range(0..form.strategies(i).len());
            Formula::play(form.player(i).clone(), form.strategies(i)[s].clone())
        }
    }
}
