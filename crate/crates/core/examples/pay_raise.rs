//! Reference-dependent utilities in the pay raise game.

use lbg::checker::counterfactual_utility;
use lbg::game::{pay_raise, PayRaise, PayRaiseVariant, IDLE};
use lbg::kripke::StructureBuilder;
use lbg::rational::{format_rational, ratio};

fn main() {
    let params = PayRaise::default();
    let game = pay_raise(&params).unwrap();
    // Alice gives s5; Bob thought both s2 and s5 possible
    let m = StructureBuilder::new(game.form())
        .state("w2", &["s2", IDLE])
        .state("w5", &["s5", IDLE])
        .point("w2", "A", "w2")
        .point("w5", "A", "w5")
        .belief("w2", "B", &[("w2", ratio(1, 2)), ("w5", ratio(1, 2))])
        .belief("w5", "B", &[("w2", ratio(1, 2)), ("w5", ratio(1, 2))])
        .build()
        .unwrap();
    let w5 = m.state_index("w5").unwrap();
    let u_b = counterfactual_utility(&game, &m, w5, "B", IDLE).unwrap();
    println!("k=5, r=2: u_B = {}", format_rational(&u_b));
    for k in 0..params.n_steps {
        let u_a = counterfactual_utility(&game, &m, w5, "A", &format!("s{k}")).unwrap();
        println!("  had Alice given s{k}: u_A = {}", format_rational(&u_a));
    }

    let guilt = PayRaise {
        variant: PayRaiseVariant::Guilt,
        ..params
    };
    for k in 0..3 {
        for r in 0..3 {
            println!(
                "guilt k={k} r={r} top={r}: {}",
                format_rational(&guilt.alice_value(k, r, r))
            );
        }
    }
}
