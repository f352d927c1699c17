//! Nash equilibria by support enumeration with exact linear feasibility.

use lbg::game::{indignant_altruism, prisoners_dilemma, surprise_proposal};
use lbg::random;
use lbg::solve::{find_nash, is_nash, NashOptions};

fn main() {
    let pennies = {
        use lbg::game::{compile_classical, GameForm, PayoffTable};
        use lbg::lang::StrategyId;
        use lbg::rational::int;
        let form = GameForm::builder()
            .player("A", ["h", "t"])
            .player("B", ["h", "t"])
            .build()
            .unwrap();
        let mut table = PayoffTable::new();
        for (a, b, v) in [("h", "h", 1), ("h", "t", -1), ("t", "h", -1), ("t", "t", 1)] {
            table.insert(
                vec![StrategyId::new(a), StrategyId::new(b)],
                vec![int(v), int(-v)],
            );
        }
        compile_classical(&form, &table).unwrap()
    };
    let games = [
        ("prisoner's dilemma", prisoners_dilemma()),
        ("indignant altruism", indignant_altruism()),
        ("surprise proposal", surprise_proposal()),
        ("matching pennies", pennies),
        // three players fall back to a grid over denominators up to 8
        ("random 3-player", {
            use rand::SeedableRng;
            let mut rng = rand::rngs::StdRng::seed_from_u64(8);
            random::classical_game(&mut rng, &random::form(&[2, 2, 2], 0), 4)
        }),
    ];
    for (name, game) in &games {
        let report = find_nash(game, NashOptions::default()).unwrap();
        println!(
            "{name}: {} of {} supports feasible ({})",
            report.feasible_count(),
            report.supports.len(),
            report.method.name()
        );
        for v in report.feasible() {
            let mu = v.sample.as_ref().unwrap();
            assert!(is_nash(game, mu).unwrap());
            println!("  {}", mu.describe(game.form()));
        }
    }
}
