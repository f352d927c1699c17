use std::path::PathBuf;

use lbg::catalog;
use lbg::io::{load_game, load_structure};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

#[test]
fn shipped_files_match_the_builtins() {
    let ia = load_game(data("ia.json")).unwrap();
    assert_eq!(ia, catalog::game("indignant-altruism").unwrap());
    let pd = load_game(data("pd.json")).unwrap();
    assert_eq!(pd, catalog::game("prisoners-dilemma").unwrap());
    let w4 = load_structure(data("w4.json"), ia.form()).unwrap();
    assert_eq!(w4, catalog::w4().1);
}
