//! Utilities under a unilateral change of strategy, expected utilities and
//! best responses in indignant altruism.

use lbg::catalog::w4;
use lbg::checker::Evaluator;
use lbg::lang::parse_formula;
use lbg::rational::format_rational;

fn main() {
    let (game, m) = w4();
    let form = game.form();
    let mut ev = Evaluator::with_game(&m, &game).unwrap();
    let alpha = m.state_index("alpha").unwrap();

    let suspicious = parse_formula("B[B] play(A,d)", form).unwrap();
    let own = parse_formula("B[A] play(A,d)", form).unwrap();
    println!("at alpha, Alice switching to d:");
    println!(
        "  B[B] play(A,d) stays {}",
        ev.counterfactual_holds(alpha, 0, 1, &suspicious).unwrap()
    );
    println!(
        "  B[A] play(A,d) becomes {}",
        ev.counterfactual_holds(alpha, 0, 1, &own).unwrap()
    );

    for k in 0..m.len() {
        let id = &m.state(k).id;
        for (i, p) in form.players().iter().enumerate() {
            let eus: Vec<String> = form
                .strategies(i)
                .iter()
                .enumerate()
                .map(|(s, name)| {
                    format!(
                        "{name}={}",
                        format_rational(&ev.expected_utility(k, i, s).unwrap())
                    )
                })
                .collect();
            let best: Vec<&str> = ev
                .best_responses(k, i)
                .unwrap()
                .into_iter()
                .map(|s| form.strategies(i)[s].as_str())
                .collect();
            println!(
                "{id:5} {p}: EU {}  BR {{{}}}",
                eus.join(" "),
                best.join(",")
            );
        }
    }
}
