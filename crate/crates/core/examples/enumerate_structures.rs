//! Point-belief structures up to relabeling of states.

use lbg::game::prisoners_dilemma;
use lbg::kripke::{enumerate_point_belief_structures, EnumerationOptions};

fn main() {
    let game = prisoners_dilemma();
    for max in 1..=3 {
        let count =
            enumerate_point_belief_structures(game.form(), max, EnumerationOptions::default())
                .count();
        println!("2x2 form, max_states={max}: {count} structures");
    }
}
