//! Extensions of formulas over the 4-state indignant altruism structure.

use lbg::catalog::w4;
use lbg::checker::Evaluator;
use lbg::lang::{parse_formula, render_with};

fn main() {
    let (game, m) = w4();
    let form = game.form();
    let mut ev = Evaluator::with_game(&m, &game).expect("structure matches game");
    for text in [
        "play(A,c)",
        "B[B] play(A,d)",
        "P[A] play(B,d)",
        "RAT[A]",
        "RAT[B]",
        "CB RAT",
        "CB play(A,c)",
    ] {
        let f = parse_formula(text, form).unwrap();
        let ext = ev.extension(&f).unwrap();
        let ids: Vec<&str> = ext.iter().map(|k| m.state(k).id.as_str()).collect();
        println!("[[{}]] = {{{}}}", render_with(&f, form), ids.join(", "));
    }
}
