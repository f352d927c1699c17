//! Run every compiled-in reproduction item.

fn main() {
    let results = lbg::repro::run_all();
    for r in &results {
        println!(
            "{} {:14} {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.observed
        );
    }
    std::process::exit(if results.iter().all(|r| r.pass) { 0 } else { 1 });
}
