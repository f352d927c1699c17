//! Build Γ-structures by hand and check them against P1-P4.

use lbg::game::prisoners_dilemma;
use lbg::kripke::{validate_structure, StructureBuilder};
use lbg::rational::ratio;

fn main() {
    let game = prisoners_dilemma();
    let form = game.form();

    let good = StructureBuilder::new(form)
        .state("w1", &["c", "c"])
        .state("w2", &["c", "d"])
        .belief("w1", "A", &[("w1", ratio(1, 2)), ("w2", ratio(1, 2))])
        .belief("w2", "A", &[("w1", ratio(1, 2)), ("w2", ratio(1, 2))])
        .point("w1", "B", "w1")
        .point("w2", "B", "w2")
        .build()
        .expect("valid");
    println!("good: {} states, ok", good.len());

    // Alice unsure of her own move, and Bob's row short of one
    let bad = StructureBuilder::new(form)
        .state("w1", &["c", "c"])
        .state("w2", &["d", "c"])
        .point("w1", "A", "w2")
        .point("w2", "A", "w2")
        .belief("w1", "B", &[("w1", ratio(9, 10))])
        .point("w2", "B", "w2")
        .build_unchecked()
        .expect("names resolve");
    let report = validate_structure(&bad, form).expect("shape matches");
    for v in &report.violations {
        println!("bad: {v}");
    }
}
