//! Write a game and a structure as JSON, read them back, and evaluate.

use lbg::catalog::w4;
use lbg::checker::holds;
use lbg::io::{game_from_json, game_to_json, structure_from_json, structure_to_json};
use lbg::lang::parse_formula;

fn main() {
    let (game, m) = w4();
    let game_text = serde_json::to_string_pretty(&game_to_json(&game)).unwrap();
    let structure_text = serde_json::to_string_pretty(&structure_to_json(&m, game.form())).unwrap();
    println!("{structure_text}");

    let game2 = game_from_json(&game_text).unwrap();
    let m2 = structure_from_json(&structure_text, game2.form()).unwrap();
    assert_eq!((&game2, &m2), (&game, &m));
    let f = parse_formula("CB RAT", game2.form()).unwrap();
    let alpha = m2.state_index("alpha").unwrap();
    println!(
        "CB RAT at alpha: {}",
        holds(&m2, game2.form(), alpha, &f, Some(&game2)).unwrap()
    );

    let broken = structure_text.replacen("\"1\"", "\"9/10\"", 1);
    println!(
        "{}",
        structure_from_json(&broken, game2.form()).unwrap_err()
    );
}
