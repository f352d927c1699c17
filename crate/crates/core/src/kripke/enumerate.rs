//! Exhaustive enumeration of small structures.
//!
//! Two enumerations are provided:
//!
//! * [`enumerate_point_belief_structures`] yields every structure with at
//!   most `max_states` states, one per isomorphism class. States are
//!   relabelled so that state labels are non-decreasing, and among the
//!   label-preserving relabellings the one with the lexicographically
//!   smallest belief encoding is kept.
//! * [`for_each_rooted_point_structure`] visits structures in which every
//!   state is reachable from state 0 through belief edges, numbering states in
//!   discovery order. Each rooted structure is generated exactly once, which
//!   makes it the cheaper search space for satisfiability-style queries.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use super::{Belief, GammaStructure, State};
use crate::game::GameForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EnumerationOptions {
    /// Enumerate labellings of the extra atoms. Atoms in exclusive groups are
    /// always enumerated, since every valid state must carry one of them.
    pub atoms_enabled: bool,
    /// Also emit beliefs that are uniform over a support of several states.
    pub uniform_supports: bool,
}

/// Profile and atom set of a state.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Label {
    profile: Vec<usize>,
    atoms: Vec<usize>,
}

fn labels(form: &GameForm, atoms_enabled: bool) -> Vec<Label> {
    let in_group: Vec<bool> = (0..form.atoms().len())
        .map(|a| form.atom_groups().iter().any(|g| g.contains(&a)))
        .collect();
    let free: Vec<usize> = (0..form.atoms().len())
        .filter(|&a| atoms_enabled || in_group[a])
        .collect();
    assert!(free.len() < 20, "too many atoms to enumerate labellings");
    let atom_sets: Vec<Vec<usize>> = (0usize..(1 << free.len()))
        .map(|mask| {
            (0..free.len())
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| free[b])
                .collect::<Vec<_>>()
        })
        .filter(|set| {
            form.atom_groups()
                .iter()
                .all(|g| g.iter().filter(|a| set.contains(a)).count() == 1)
        })
        .collect();
    form.profiles()
        .flat_map(|profile| {
            atom_sets.iter().map(move |atoms| Label {
                profile: profile.clone(),
                atoms: atoms.clone(),
            })
        })
        .collect()
}

/// Every belief map for one player: `supports[k]` is the support at state
/// `k`. `keys[k]` is the player's strategy at `k`.
fn belief_maps(keys: &[usize], uniform: bool) -> Vec<Vec<Vec<usize>>> {
    fn assign(
        k: usize,
        keys: &[usize],
        uniform: bool,
        cells: &mut Vec<Vec<usize>>,
        role: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if k == keys.len() {
            finish(keys, cells, role, out);
            return;
        }
        cells.push(vec![k]);
        role.push(Some(cells.len() - 1));
        assign(k + 1, keys, uniform, cells, role, out);
        role.pop();
        cells.pop();
        if uniform {
            for c in 0..cells.len() {
                if keys[cells[c][0]] == keys[k] {
                    cells[c].push(k);
                    role.push(Some(c));
                    assign(k + 1, keys, uniform, cells, role, out);
                    role.pop();
                    cells[c].pop();
                }
            }
        }
        role.push(None);
        assign(k + 1, keys, uniform, cells, role, out);
        role.pop();
    }

    fn finish(
        keys: &[usize],
        cells: &[Vec<usize>],
        role: &[Option<usize>],
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let outsiders: Vec<usize> = (0..keys.len()).filter(|&k| role[k].is_none()).collect();
        let choices: Vec<Vec<usize>> = outsiders
            .iter()
            .map(|&k| {
                (0..cells.len())
                    .filter(|&c| keys[cells[c][0]] == keys[k])
                    .collect()
            })
            .collect();
        if choices.iter().any(Vec::is_empty) {
            return;
        }
        let mut pick = vec![0usize; outsiders.len()];
        loop {
            let mut supports: Vec<Vec<usize>> = (0..keys.len())
                .map(|k| role[k].map(|c| cells[c].clone()).unwrap_or_default())
                .collect();
            for (j, &k) in outsiders.iter().enumerate() {
                supports[k] = cells[choices[j][pick[j]]].clone();
            }
            out.push(supports);
            let mut j = 0;
            loop {
                if j == pick.len() {
                    return;
                }
                pick[j] += 1;
                if pick[j] < choices[j].len() {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
        }
    }

    let mut out = Vec::new();
    assign(0, keys, uniform, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Belief encoding of the structure relabelled by `perm` (new -> old).
fn encode(beliefs: &[&Vec<Vec<usize>>], perm: &[usize], inv: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for &old in perm {
        for b in beliefs {
            let mut s: Vec<usize> = b[old].iter().map(|&t| inv[t]).collect();
            s.sort_unstable();
            out.push(s.len());
            out.extend(s);
        }
    }
    out
}

/// Lazy stream of canonical structures, smallest state count first.
pub struct StructureEnumeration<'a> {
    form: &'a GameForm,
    opts: EnumerationOptions,
    max_states: usize,
    labels: Vec<Label>,
    n: usize,
    seq: Option<Vec<usize>>,
    buffer: VecDeque<GammaStructure>,
}

impl<'a> StructureEnumeration<'a> {
    fn advance_seq(&mut self) -> bool {
        let l = self.labels.len();
        match &mut self.seq {
            None => {
                self.seq = Some(vec![0; self.n]);
                true
            }
            Some(seq) => {
                // next non-decreasing sequence
                let mut k = seq.len();
                while k > 0 {
                    k -= 1;
                    if seq[k] + 1 < l {
                        let v = seq[k] + 1;
                        for x in &mut seq[k..] {
                            *x = v;
                        }
                        return true;
                    }
                }
                false
            }
        }
    }

    fn fill(&mut self, seq: &[usize]) {
        let n = seq.len();
        let np = self.form.player_count();
        let maps: Vec<Vec<Vec<Vec<usize>>>> = (0..np)
            .map(|i| {
                let keys: Vec<usize> = seq.iter().map(|&l| self.labels[l].profile[i]).collect();
                belief_maps(&keys, self.opts.uniform_supports)
            })
            .collect();
        if maps.iter().any(Vec::is_empty) {
            return;
        }
        let perms: Vec<(Vec<usize>, Vec<usize>)> = permutations(n)
            .into_iter()
            .filter(|p| (0..n).all(|k| seq[p[k]] == seq[k]))
            .filter(|p| p.iter().enumerate().any(|(k, &v)| k != v))
            .map(|p| {
                let mut inv = vec![0; n];
                for (k, &v) in p.iter().enumerate() {
                    inv[v] = k;
                }
                (p, inv)
            })
            .collect();
        let identity: Vec<usize> = (0..n).collect();
        let mut pick = vec![0usize; np];
        loop {
            let chosen: Vec<&Vec<Vec<usize>>> = (0..np).map(|i| &maps[i][pick[i]]).collect();
            let base = encode(&chosen, &identity, &identity);
            let canonical = perms.iter().all(|(p, inv)| base <= encode(&chosen, p, inv));
            if canonical {
                self.buffer.push_back(self.materialize(seq, &chosen));
            }
            let mut i = 0;
            loop {
                if i == np {
                    return;
                }
                pick[i] += 1;
                if pick[i] < maps[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }

    fn materialize(&self, seq: &[usize], beliefs: &[&Vec<Vec<usize>>]) -> GammaStructure {
        let states = seq
            .iter()
            .enumerate()
            .map(|(k, &l)| State {
                id: format!("w{k}"),
                profile: self.labels[l].profile.clone(),
                atoms: self.labels[l].atoms.clone(),
                beliefs: beliefs
                    .iter()
                    .map(|b| match b[k].as_slice() {
                        [t] => Belief::Point(*t),
                        support => {
                            let w = crate::rational::ratio(1, support.len() as i64);
                            Belief::Distribution(support.iter().map(|&t| (t, w.clone())).collect())
                        }
                    })
                    .collect(),
            })
            .collect();
        GammaStructure::from_states(states)
    }
}

impl Iterator for StructureEnumeration<'_> {
    type Item = GammaStructure;

    fn next(&mut self) -> Option<GammaStructure> {
        loop {
            if let Some(m) = self.buffer.pop_front() {
                return Some(m);
            }
            if self.n > self.max_states || self.labels.is_empty() {
                return None;
            }
            if self.advance_seq() {
                let seq = self.seq.clone().expect("sequence just advanced");
                self.fill(&seq);
            } else {
                self.n += 1;
                self.seq = None;
            }
        }
    }
}

/// Streams every structure with 1..=`max_states` states up to relabelling,
/// in a fixed deterministic order. Beliefs are point masses unless
/// `opts.uniform_supports` is set.
pub fn enumerate_point_belief_structures(
    form: &GameForm,
    max_states: usize,
    opts: EnumerationOptions,
) -> StructureEnumeration<'_> {
    StructureEnumeration {
        form,
        opts,
        max_states,
        labels: labels(form, opts.atoms_enabled),
        n: 1,
        seq: None,
        buffer: VecDeque::new(),
    }
}

struct Rooted<'a, F> {
    labels: Vec<Label>,
    n: usize,
    np: usize,
    state_labels: Vec<usize>,
    targets: Vec<Vec<usize>>,
    forced: Vec<Vec<bool>>,
    visit: &'a mut F,
}

const UNSET: usize = usize::MAX;

impl<F> Rooted<'_, F>
where
    F: FnMut(&GammaStructure) -> ControlFlow<()>,
{
    fn key(&self, state: usize, player: usize) -> usize {
        self.labels[self.state_labels[state]].profile[player]
    }

    fn rec(&mut self, x: usize, i: usize) -> ControlFlow<()> {
        if i == self.np {
            return self.rec(x + 1, 0);
        }
        let created = self.state_labels.len();
        if x == created {
            return if created == self.n {
                self.emit()
            } else {
                ControlFlow::Continue(())
            };
        }
        if self.forced[i][x] {
            self.targets[i][x] = x;
            let r = self.rec(x, i + 1);
            self.targets[i][x] = UNSET;
            return r;
        }
        let key = self.key(x, i);

        self.targets[i][x] = x;
        self.rec(x, i + 1)?;

        for t in 0..created {
            if t == x || self.key(t, i) != key {
                continue;
            }
            if t < x && self.targets[i][t] != t {
                continue;
            }
            let was_forced = self.forced[i][t];
            self.forced[i][t] = true;
            self.targets[i][x] = t;
            let r = self.rec(x, i + 1);
            self.forced[i][t] = was_forced;
            r?;
        }

        if created < self.n {
            for l in 0..self.labels.len() {
                if self.labels[l].profile[i] != key {
                    continue;
                }
                self.state_labels.push(l);
                self.forced[i][created] = true;
                self.targets[i][x] = created;
                let r = self.rec(x, i + 1);
                self.forced[i][created] = false;
                self.state_labels.pop();
                r?;
            }
        }
        self.targets[i][x] = UNSET;
        ControlFlow::Continue(())
    }

    fn emit(&mut self) -> ControlFlow<()> {
        let states = (0..self.n)
            .map(|k| {
                let label = &self.labels[self.state_labels[k]];
                State {
                    id: format!("w{k}"),
                    profile: label.profile.clone(),
                    atoms: label.atoms.clone(),
                    beliefs: (0..self.np)
                        .map(|i| Belief::Point(self.targets[i][k]))
                        .collect(),
                }
            })
            .collect();
        (self.visit)(&GammaStructure::from_states(states))
    }
}

/// Visits every point-belief structure with exactly `n_states` states, all
/// reachable from state 0, whose root profile satisfies `root_filter`.
/// Stops early when `visit` breaks.
pub fn for_each_rooted_point_structure<F>(
    form: &GameForm,
    n_states: usize,
    atoms_enabled: bool,
    root_filter: impl Fn(&[usize]) -> bool,
    mut visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&GammaStructure) -> ControlFlow<()>,
{
    if n_states == 0 {
        return ControlFlow::Continue(());
    }
    let np = form.player_count();
    let all = labels(form, atoms_enabled);
    let mut rooted = Rooted {
        labels: all.clone(),
        n: n_states,
        np,
        state_labels: Vec::with_capacity(n_states),
        targets: vec![vec![UNSET; n_states]; np],
        forced: vec![vec![false; n_states]; np],
        visit: &mut visit,
    };
    for (l, label) in all.iter().enumerate() {
        if !root_filter(&label.profile) {
            continue;
        }
        rooted.state_labels.push(l);
        rooted.rec(0, 0)?;
        rooted.state_labels.pop();
    }
    ControlFlow::Continue(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{library_book, prisoners_dilemma};
    use crate::kripke::validate_structure;
    use std::collections::{BTreeSet, HashSet};

    fn one_by_one() -> GameForm {
        GameForm::builder().player("A", ["only"]).build().unwrap()
    }

    /// Brute force: every function per player, filtered by the validator,
    /// counted up to relabelling by comparing whole orbits.
    fn brute_force_count(form: &GameForm, n: usize) -> usize {
        let np = form.player_count();
        let profiles: Vec<Vec<usize>> = form.profiles().collect();
        let mut orbits: HashSet<BTreeSet<Vec<usize>>> = HashSet::new();
        let total_maps = n.pow(n as u32);
        let mut labels = vec![0usize; n];
        loop {
            let mut maps = vec![0usize; np];
            loop {
                let decode = |code: usize| -> Vec<usize> {
                    let mut c = code;
                    (0..n)
                        .map(|_| {
                            let t = c % n;
                            c /= n;
                            t
                        })
                        .collect()
                };
                let funcs: Vec<Vec<usize>> = maps.iter().map(|&c| decode(c)).collect();
                let states = (0..n)
                    .map(|k| State {
                        id: format!("s{k}"),
                        profile: profiles[labels[k]].clone(),
                        atoms: vec![],
                        beliefs: (0..np).map(|i| Belief::Point(funcs[i][k])).collect(),
                    })
                    .collect();
                let m = GammaStructure::from_states(states);
                if validate_structure(&m, form).unwrap().is_ok() {
                    let orbit: BTreeSet<Vec<usize>> = permutations(n)
                        .iter()
                        .map(|p| {
                            let mut inv = vec![0; n];
                            for (k, &v) in p.iter().enumerate() {
                                inv[v] = k;
                            }
                            let mut enc = Vec::new();
                            for &old in p {
                                enc.push(labels[old]);
                                for f in &funcs {
                                    enc.push(inv[f[old]]);
                                }
                            }
                            enc
                        })
                        .collect();
                    orbits.insert(orbit);
                }
                let mut i = 0;
                loop {
                    if i == np {
                        break;
                    }
                    maps[i] += 1;
                    if maps[i] < total_maps {
                        break;
                    }
                    maps[i] = 0;
                    i += 1;
                }
                if i == np {
                    break;
                }
            }
            let mut k = 0;
            loop {
                if k == n {
                    return orbits.len();
                }
                labels[k] += 1;
                if labels[k] < profiles.len() {
                    break;
                }
                labels[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn single_strategy_single_state() {
        let form = one_by_one();
        let all: Vec<_> =
            enumerate_point_belief_structures(&form, 1, EnumerationOptions::default()).collect();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn two_by_two_single_state() {
        let game = prisoners_dilemma();
        let all: Vec<_> =
            enumerate_point_belief_structures(game.form(), 1, EnumerationOptions::default())
                .collect();
        assert_eq!(all.len(), 4);
        for m in &all {
            assert_eq!(m.state(0).beliefs, vec![Belief::Point(0), Belief::Point(0)]);
        }
    }

    #[test]
    fn two_by_two_up_to_two_states_matches_brute_force() {
        let game = prisoners_dilemma();
        let form = game.form();
        let count =
            enumerate_point_belief_structures(form, 2, EnumerationOptions::default()).count();
        let expected = brute_force_count(form, 1) + brute_force_count(form, 2);
        assert_eq!(count, expected);
        // frozen from the brute-force oracle
        assert_eq!(count, 4 + 34);
    }

    #[test]
    fn three_states_match_brute_force() {
        let game = prisoners_dilemma();
        let form = game.form();
        let exactly_three =
            enumerate_point_belief_structures(form, 3, EnumerationOptions::default())
                .filter(|m| m.len() == 3)
                .count();
        assert_eq!(exactly_three, brute_force_count(form, 3));
    }

    #[test]
    fn enumerated_structures_validate() {
        let game = library_book();
        let opts = EnumerationOptions {
            atoms_enabled: true,
            uniform_supports: false,
        };
        let mut n = 0;
        for m in enumerate_point_belief_structures(game.form(), 3, opts) {
            assert!(validate_structure(&m, game.form()).unwrap().is_ok());
            n += 1;
        }
        assert!(n > 0);
    }

    #[test]
    fn uniform_supports_validate() {
        let game = prisoners_dilemma();
        let opts = EnumerationOptions {
            atoms_enabled: false,
            uniform_supports: true,
        };
        let all: Vec<_> = enumerate_point_belief_structures(game.form(), 3, opts).collect();
        let point =
            enumerate_point_belief_structures(game.form(), 3, EnumerationOptions::default())
                .count();
        assert!(all.len() > point);
        for m in &all {
            assert!(validate_structure(m, game.form()).unwrap().is_ok());
        }
    }

    #[test]
    fn point_p3_matches_idempotence() {
        // On point-belief structures, P3 holds iff every belief map is idempotent.
        let game = prisoners_dilemma();
        let form = game.form();
        for m in enumerate_point_belief_structures(form, 3, EnumerationOptions::default()) {
            for i in 0..2 {
                for k in 0..m.len() {
                    let t = m.support(k, i)[0];
                    assert_eq!(m.support(t, i), vec![t]);
                }
            }
        }
        // and a non-idempotent map is rejected with a P3 violation
        let bad = GammaStructure::from_states(
            (0..3)
                .map(|k| State {
                    id: format!("s{k}"),
                    profile: vec![0, 0],
                    atoms: vec![],
                    beliefs: vec![Belief::Point((k + 1).min(2)), Belief::Point(k)],
                })
                .collect(),
        );
        let report = validate_structure(&bad, form).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == crate::kripke::Condition::P3));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let game = prisoners_dilemma();
        let a: Vec<_> =
            enumerate_point_belief_structures(game.form(), 2, EnumerationOptions::default())
                .collect();
        let b: Vec<_> =
            enumerate_point_belief_structures(game.form(), 2, EnumerationOptions::default())
                .collect();
        assert_eq!(a, b);
    }

    /// Discovery-order encoding of the substructure reachable from `root`.
    fn rooted_encoding(m: &GammaStructure, root: usize, np: usize) -> Vec<usize> {
        let mut order = vec![root];
        let mut pos = std::collections::HashMap::new();
        pos.insert(root, 0);
        let mut k = 0;
        let mut enc = Vec::new();
        while k < order.len() {
            let x = order[k];
            enc.extend(m.state(x).profile.iter().copied());
            for i in 0..np {
                let t = m.support(x, i)[0];
                let next = pos.len();
                let idx = *pos.entry(t).or_insert_with(|| {
                    order.push(t);
                    next
                });
                enc.push(idx);
            }
            k += 1;
        }
        enc.push(usize::MAX);
        enc.push(order.len());
        enc
    }

    #[test]
    fn rooted_enumeration_matches_reachable_substructures() {
        let game = prisoners_dilemma();
        let form = game.form();
        for n in 1..=3 {
            let mut rooted = Vec::new();
            let _ = for_each_rooted_point_structure(
                form,
                n,
                false,
                |_| true,
                |m| {
                    assert!(validate_structure(m, form).unwrap().is_ok());
                    rooted.push(rooted_encoding(m, 0, 2));
                    ControlFlow::Continue(())
                },
            );
            let distinct: BTreeSet<_> = rooted.iter().cloned().collect();
            assert_eq!(distinct.len(), rooted.len(), "duplicates at n={n}");

            let mut from_full = BTreeSet::new();
            for m in enumerate_point_belief_structures(form, n, EnumerationOptions::default()) {
                for root in 0..m.len() {
                    let enc = rooted_encoding(&m, root, 2);
                    if enc[enc.len() - 1] == n {
                        from_full.insert(enc);
                    }
                }
            }
            assert_eq!(distinct, from_full, "n={n}");
        }
    }

    #[test]
    fn rooted_enumeration_respects_root_filter_and_stops() {
        let game = prisoners_dilemma();
        let mut seen = 0;
        let flow = for_each_rooted_point_structure(
            game.form(),
            2,
            false,
            |p| p[0] == 1,
            |m| {
                assert_eq!(m.state(0).profile[0], 1);
                seen += 1;
                if seen == 3 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            },
        );
        assert!(flow.is_break());
        assert_eq!(seen, 3);
    }
}
