//! Witness structures for common belief of rationality.

use lbg::game::{deep_surprise, prisoners_dilemma, surprise_proposal};
use lbg::solve::{find_rationalizable_strategy, rationalizable_set, RatOutcome};

fn main() {
    for (name, game, bound) in [
        ("prisoner's dilemma", prisoners_dilemma(), 3),
        ("surprise proposal", surprise_proposal(), 6),
    ] {
        println!("{name}, up to {bound} states:");
        for w in rationalizable_set(&game, bound).unwrap() {
            match &w.outcome {
                RatOutcome::Witnessed { structure, state } => println!(
                    "  {} {}: witnessed at {} in {} states",
                    w.player,
                    w.strategy,
                    structure.state(*state).id,
                    structure.len()
                ),
                RatOutcome::Exhausted { max_states } => {
                    println!(
                        "  {} {}: no witness up to {max_states}",
                        w.player, w.strategy
                    )
                }
            }
        }
    }
    for k in 0..=1 {
        let w = find_rationalizable_strategy(&deep_surprise(k), "B", 8)
            .unwrap()
            .unwrap();
        println!("deep surprise K={k}: B {} witnessed", w.strategy);
    }
}
