//! Parse belief-language formulas against a game form and print them back.

use lbg::game::indignant_altruism;
use lbg::lang::{modal_depth, parse_formula, render_with};

fn main() {
    let game = indignant_altruism();
    let form = game.form();
    for text in [
        "B[A] play(B,c)",
        "P[A] play(B,d)",
        "play((c,d))",
        "play(A,d) -> B[B] play(A,d)",
        "CB RAT",
        "EB not play(A,c)",
    ] {
        let f = parse_formula(text, form).expect("valid formula");
        let depth = modal_depth(&f).map_or("-".to_owned(), |d| d.to_string());
        println!("{text:32} => {:40} depth {depth}", render_with(&f, form));
        assert_eq!(parse_formula(&render_with(&f, form), form).unwrap(), f);
    }
    match parse_formula("B[C] play(A,c)", form) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
