//! Compiled-in reproduction items. Each computes an observed summary string
//! and compares it with the expected one.

use serde::Serialize;

use crate::catalog;
use crate::checker::{counterfactual_utility, extension, CheckError};
use crate::game::{
    deep_surprise, indignant_altruism, pay_raise, prisoners_dilemma, surprise_proposal,
};
use crate::game::{Game, PayRaise, PayRaiseVariant, IDLE};
use crate::kripke::{validate_structure, GammaStructure, StructureBuilder};
use crate::lang::parse_formula;
use crate::rational::{format_rational, Rational};
use crate::solve::{
    find_nash, find_rationalizable_strategy, rationalizable_set, search_rationalizable,
    NashOptions, SolveError,
};

/// Whether the expected value is stated outright for the source example or
/// derived here by an independent argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Published,
    Derived,
}

impl Basis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Basis::Published => "published",
            Basis::Derived => "derived",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproResult {
    pub id: &'static str,
    pub basis: Basis,
    pub claim: &'static str,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct ReproItem {
    pub id: &'static str,
    pub basis: Basis,
    pub claim: &'static str,
    expected: &'static str,
    observe: fn() -> Result<String, SolveError>,
}

const ITEMS: &[ReproItem] = &[
    ReproItem {
        id: "prop2",
        basis: Basis::Published,
        claim: "indignant altruism has no Nash equilibrium",
        expected: "0 feasible supports of 9",
        observe: prop2,
    },
    ReproItem {
        id: "prop3",
        basis: Basis::Published,
        claim: "every strategy in indignant altruism is rationalizable",
        expected: "w4 valid, CB RAT at 4 of 4 states, 4 of 4 strategies witnessed within 4 states",
        observe: prop3,
    },
    ReproItem {
        id: "ex4-utility8",
        basis: Basis::Published,
        claim: "pay raise: k = 5 with lowest expectation r = 2 gives Bob utility 8",
        expected: "u_B = 8",
        observe: ex4_utility8,
    },
    ReproItem {
        id: "ex4-guilt",
        basis: Basis::Published,
        claim: "pay raise, guilt variant: Alice gets -25 whenever k < r",
        expected: "u_A = -25 at 15 of 15 pairs with k < r",
        observe: ex4_guilt,
    },
    ReproItem {
        id: "classical",
        basis: Basis::Derived,
        claim: "prisoner's dilemma: only mutual defection is Nash; only d is rationalizable",
        expected: "supports ({d},{d}); d witnessed at 1 state for A and B; c exhausted at 4 for A and B",
        observe: classical,
    },
    ReproItem {
        id: "surprise",
        basis: Basis::Derived,
        claim: "surprise proposal: no Nash equilibrium, yet both of Bob's strategies are rationalizable",
        expected: "0 feasible supports of 3; p and q witnessed within 6 states",
        observe: surprise,
    },
    ReproItem {
        id: "deep-surprise",
        basis: Basis::Derived,
        claim: "truncated deep surprise: Bob has a rationalizable strategy for K = 0 and K = 1",
        expected: "K=0 witnessed; K=1 witnessed",
        observe: deep,
    },
    ReproItem {
        id: "theorem1",
        basis: Basis::Published,
        claim: "every shipped finitely specified game has a rationalizable strategy per player",
        expected: "10 of 10 games, every player witnessed within 8 states",
        observe: theorem1,
    },
];

pub fn items() -> &'static [ReproItem] {
    ITEMS
}

pub fn item(id: &str) -> Option<&'static ReproItem> {
    ITEMS.iter().find(|it| it.id == id)
}

impl ReproItem {
    pub fn expected(&self) -> &'static str {
        self.expected
    }

    /// Runs the item. Errors become observed strings and fail the item.
    pub fn run(&self) -> ReproResult {
        let observed = match (self.observe)() {
            Ok(s) => s,
            Err(e) => format!("error: {e}"),
        };
        ReproResult {
            id: self.id,
            basis: self.basis,
            claim: self.claim,
            expected: self.expected.to_owned(),
            pass: observed == self.expected,
            observed,
        }
    }
}

pub fn run_all() -> Vec<ReproResult> {
    ITEMS.iter().map(ReproItem::run).collect()
}

fn prop2() -> Result<String, SolveError> {
    let report = find_nash(&indignant_altruism(), NashOptions::default())?;
    Ok(format!(
        "{} feasible supports of {}",
        report.feasible_count(),
        report.supports.len()
    ))
}

fn prop3() -> Result<String, SolveError> {
    let (game, m) = catalog::w4();
    let report = validate_structure(&m, game.form())?;
    let cb = parse_formula("CB RAT", game.form())
        .map_err(|_| SolveError::Inconsistent("CB RAT does not parse"))?;
    let ext = extension(&m, game.form(), &cb, Some(&game))?;
    let set = rationalizable_set(&game, 4)?;
    Ok(format!(
        "w4 {}, CB RAT at {} of {} states, {} of {} strategies witnessed within 4 states",
        if report.is_ok() { "valid" } else { "invalid" },
        ext.states.count(),
        m.len(),
        set.iter().filter(|w| w.is_witnessed()).count(),
        set.len()
    ))
}

/// Alice plays `s_k` at `w{k}`; every state shares Bob's belief `bob`
/// (uniform over the listed raises), and Alice believes her own state.
fn raise_structure(
    game: &Game,
    states: &[usize],
    bob: &[usize],
) -> Result<GammaStructure, SolveError> {
    let ids: Vec<String> = states.iter().map(|k| format!("w{k}")).collect();
    let strategies: Vec<String> = states.iter().map(|k| format!("s{k}")).collect();
    let weight = Rational::new(1.into(), (bob.len() as i64).into());
    let dist: Vec<(String, Rational)> = bob
        .iter()
        .map(|k| (format!("w{k}"), weight.clone()))
        .collect();
    let refs: Vec<(&str, Rational)> = dist.iter().map(|(s, w)| (s.as_str(), w.clone())).collect();
    let mut b = StructureBuilder::new(game.form());
    for (id, s) in ids.iter().zip(&strategies) {
        b = b.state(id, &[s.as_str(), IDLE]);
    }
    for id in &ids {
        b = b.point(id, "A", id).belief(id, "B", &refs);
    }
    Ok(b.build()?)
}

fn utility_at(
    game: &Game,
    m: &GammaStructure,
    state: usize,
    player: usize,
) -> Result<Rational, CheckError> {
    let form = game.form();
    let name = form.player(player).as_str();
    let played = form.strategies(player)[m.strategy(state, player)].as_str();
    counterfactual_utility(game, m, state, name, played)
}

fn ex4_utility8() -> Result<String, SolveError> {
    let game =
        pay_raise(&PayRaise::default()).map_err(|_| SolveError::Inconsistent("pay raise"))?;
    let m = raise_structure(&game, &[2, 5], &[2, 5])?;
    let u = utility_at(&game, &m, m.state_index("w5").expect("w5 exists"), 1)?;
    Ok(format!("u_B = {}", format_rational(&u)))
}

fn ex4_guilt() -> Result<String, SolveError> {
    let params = PayRaise {
        variant: PayRaiseVariant::Guilt,
        ..PayRaise::default()
    };
    let game = pay_raise(&params).map_err(|_| SolveError::Inconsistent("pay raise"))?;
    let (mut hits, mut total) = (0, 0);
    for k in 0..params.n_steps {
        for r in k + 1..params.n_steps {
            let m = raise_structure(&game, &[k, r], &[r])?;
            let u = utility_at(&game, &m, 0, 0)?;
            total += 1;
            if u == crate::rational::int(-25) {
                hits += 1;
            }
        }
    }
    Ok(format!("u_A = -25 at {hits} of {total} pairs with k < r"))
}

fn classical() -> Result<String, SolveError> {
    let game = prisoners_dilemma();
    let report = find_nash(&game, NashOptions::default())?;
    let supports: Vec<String> = report
        .feasible()
        .map(|v| v.support.describe(game.form()))
        .collect();
    let mut d1 = Vec::new();
    let mut c4 = Vec::new();
    for p in ["A", "B"] {
        if search_rationalizable(&game, p, "d", 1)?.is_witnessed() {
            d1.push(p);
        }
        if !search_rationalizable(&game, p, "c", 4)?.is_witnessed() {
            c4.push(p);
        }
    }
    Ok(format!(
        "supports {}; d witnessed at 1 state for {}; c exhausted at 4 for {}",
        supports.join(" "),
        d1.join(" and "),
        c4.join(" and ")
    ))
}

fn surprise() -> Result<String, SolveError> {
    let game = surprise_proposal();
    let report = find_nash(&game, NashOptions::default())?;
    let witnessed: Vec<&str> = ["p", "q"]
        .into_iter()
        .map(|s| search_rationalizable(&game, "B", s, 6).map(|w| (s, w.is_witnessed())))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter_map(|(s, ok)| ok.then_some(s))
        .collect();
    Ok(format!(
        "{} feasible supports of {}; {} witnessed within 6 states",
        report.feasible_count(),
        report.supports.len(),
        if witnessed.is_empty() {
            "none".to_owned()
        } else {
            witnessed.join(" and ")
        }
    ))
}

fn deep() -> Result<String, SolveError> {
    let parts = [0, 1]
        .into_iter()
        .map(|k| {
            let found = find_rationalizable_strategy(&deep_surprise(k), "B", 8)?;
            Ok(format!(
                "K={k} {}",
                if found.is_some() {
                    "witnessed"
                } else {
                    "exhausted"
                }
            ))
        })
        .collect::<Result<Vec<_>, SolveError>>()?;
    Ok(parts.join("; "))
}

/// The games covered by the per-player existence check.
pub fn theorem1_games() -> Vec<(&'static str, Game)> {
    [
        "indignant-altruism",
        "prisoners-dilemma",
        "surprise-proposal",
        "deep-surprise-0",
        "deep-surprise-1",
        "pay-raise",
        "pay-raise-guilt",
        "pay-raise-empathetic",
        "library-book",
        "roadtrip",
    ]
    .into_iter()
    .map(|n| (n, catalog::game(n).expect("catalog entry")))
    .collect()
}

fn theorem1() -> Result<String, SolveError> {
    let games = theorem1_games();
    let mut ok = 0;
    let mut missing = Vec::new();
    for (name, game) in &games {
        let mut all = true;
        for p in game.form().players() {
            if find_rationalizable_strategy(game, p.as_str(), 8)?.is_none() {
                all = false;
                missing.push(format!("{name}/{p}"));
            }
        }
        if all {
            ok += 1;
        }
    }
    let mut s = format!(
        "{ok} of {} games, every player witnessed within 8 states",
        games.len()
    );
    if !missing.is_empty() {
        s.push_str(&format!(" (none found for {})", missing.join(", ")));
    }
    Ok(s)
}
