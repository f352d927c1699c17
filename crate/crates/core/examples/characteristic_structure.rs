//! The characteristic structure of a mixed profile.

use lbg::game::prisoners_dilemma;
use lbg::kripke::{build_characteristic_structure, validate_structure, MixedProfile};
use lbg::rational::format_rational;

fn main() {
    let game = prisoners_dilemma();
    let form = game.form();
    let mu = MixedProfile::parse(form, "A: c=1/3, d=2/3; B: c=1/2, d=1/2").unwrap();
    let m = build_characteristic_structure(form, &mu).unwrap();
    assert!(validate_structure(&m, form).unwrap().is_ok());
    println!("{} -> {} states", mu.describe(form), m.len());
    for s in m.states() {
        for (i, p) in form.players().iter().enumerate() {
            let row: Vec<String> = s.beliefs[i]
                .weights()
                .into_iter()
                .map(|(t, w)| format!("{}:{}", m.state(t).id, format_rational(&w)))
                .collect();
            println!("  {} Pr_{p} = {}", s.id, row.join(" "));
        }
    }
}
