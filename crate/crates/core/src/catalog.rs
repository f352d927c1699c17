//! Named built-in games and reference structures, addressable from the CLI
//! as `builtin:NAME`.

use std::collections::BTreeMap;

use crate::game::{
    deep_surprise, indignant_altruism, library_book, pay_raise, prisoners_dilemma, roadtrip,
    surprise_proposal, Game, PayRaise, PayRaiseVariant, PriceCell,
};
use crate::kripke::{GammaStructure, StructureBuilder};
use crate::rational::int;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub name: &'static str,
    pub summary: &'static str,
}

const GAMES: &[Entry] = &[
    Entry {
        name: "prisoners-dilemma",
        summary: "classical prisoner's dilemma, payoffs (3,3) (0,5) (5,0) (1,1)",
    },
    Entry {
        name: "indignant-altruism",
        summary: "prisoner's dilemma where defecting against a suspicious partner pays -1",
    },
    Entry {
        name: "surprise-proposal",
        summary: "Bob wants to surprise Alice with a proposal",
    },
    Entry {
        name: "deep-surprise-0",
        summary: "deeply surprising proposal, suspicion nesting truncated at 0",
    },
    Entry {
        name: "deep-surprise-1",
        summary: "deeply surprising proposal, suspicion nesting truncated at 1",
    },
    Entry {
        name: "pay-raise",
        summary: "pay raise with Alice minimizing |k - r|, 6 raise levels",
    },
    Entry {
        name: "pay-raise-guilt",
        summary: "pay raise with Alice's guilt utility, 6 raise levels",
    },
    Entry {
        name: "pay-raise-empathetic",
        summary: "pay raise with Alice valuing Bob's utility minus k, 6 raise levels",
    },
    Entry {
        name: "library-book",
        summary: "return the book today, or wait and believe it happens tomorrow",
    },
    Entry {
        name: "roadtrip",
        summary: "single buyer whose preferences only see coarse price cells",
    },
];

const STRUCTURES: &[Entry] = &[
    Entry {
        name: "w4",
        summary:
            "4-state structure for indignant-altruism with common belief of rationality everywhere",
    },
    Entry {
        name: "surprise-witness",
        summary: "4-state structure for surprise-proposal witnessing both of Bob's strategies",
    },
];

pub fn game_entries() -> &'static [Entry] {
    GAMES
}

pub fn structure_entries() -> &'static [Entry] {
    STRUCTURES
}

/// Price cells of the shipped roadtrip instance.
pub fn roadtrip_cells() -> Vec<PriceCell> {
    vec![
        PriceCell::new(290, 300),
        PriceCell::new(300, 310),
        PriceCell::new(20000, 20500),
    ]
}

/// The shipped roadtrip instance: utility is minus the cell's lower bound.
pub fn sample_roadtrip() -> Game {
    let cells = roadtrip_cells();
    let prefs: BTreeMap<PriceCell, _> = cells.iter().map(|c| (*c, int(-c.lo))).collect();
    roadtrip(&cells, &prefs).expect("static partition")
}

fn raise(variant: PayRaiseVariant) -> Game {
    pay_raise(&PayRaise {
        variant,
        ..PayRaise::default()
    })
    .expect("static parameters")
}

pub fn game(name: &str) -> Option<Game> {
    Some(match name {
        "prisoners-dilemma" | "pd" => prisoners_dilemma(),
        "indignant-altruism" | "ia" => indignant_altruism(),
        "surprise-proposal" => surprise_proposal(),
        "deep-surprise-0" => deep_surprise(0),
        "deep-surprise-1" => deep_surprise(1),
        "pay-raise" => raise(PayRaiseVariant::Absolute),
        "pay-raise-guilt" => raise(PayRaiseVariant::Guilt),
        "pay-raise-empathetic" => raise(PayRaiseVariant::Empathetic),
        "library-book" => library_book(),
        "roadtrip" => sample_roadtrip(),
        _ => return None,
    })
}

/// `alpha:(c,c) beta:(d,d) gamma:(c,d) delta:(d,c)` with point beliefs
/// `b_A: alpha->alpha, beta->beta, gamma->alpha, delta->beta` and
/// `b_B: alpha->delta, beta->gamma, gamma->gamma, delta->delta`.
pub fn w4() -> (Game, GammaStructure) {
    let game = indignant_altruism();
    let m = StructureBuilder::new(game.form())
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
        .build()
        .expect("valid structure");
    (game, m)
}

/// A cycle of four states in which Alice's expectations are always wrong
/// about Bob in the way that makes his move optimal.
pub fn surprise_witness() -> (Game, GammaStructure) {
    let game = surprise_proposal();
    let idle = crate::game::IDLE;
    let m = StructureBuilder::new(game.form())
        .state("w3", &[idle, "q"])
        .state("w4", &[idle, "p"])
        .state("w5", &[idle, "p"])
        .state("w6", &[idle, "q"])
        .point("w3", "B", "w3")
        .point("w3", "A", "w4")
        .point("w4", "A", "w4")
        .point("w4", "B", "w5")
        .point("w5", "B", "w5")
        .point("w5", "A", "w6")
        .point("w6", "A", "w6")
        .point("w6", "B", "w3")
        .build()
        .expect("valid structure");
    (game, m)
}

pub fn structure(name: &str) -> Option<(Game, GammaStructure)> {
    match name {
        "w4" => Some(w4()),
        "surprise-witness" => Some(surprise_witness()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::extension;
    use crate::lang::parse_formula;

    #[test]
    fn every_entry_resolves() {
        for e in game_entries() {
            assert!(game(e.name).is_some(), "{}", e.name);
        }
        for e in structure_entries() {
            assert!(structure(e.name).is_some(), "{}", e.name);
        }
        assert!(game("nope").is_none());
    }

    #[test]
    fn reference_structures_have_common_belief_of_rationality() {
        for e in structure_entries() {
            let (g, m) = structure(e.name).unwrap();
            let f = parse_formula("CB RAT", g.form()).unwrap();
            let ext = extension(&m, g.form(), &f, Some(&g)).unwrap();
            assert_eq!(ext.states.count(), m.len(), "{}", e.name);
        }
    }
}
