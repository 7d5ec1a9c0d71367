//! Randomized property suites and the critical-pair scan.
//!
//! cargo run --release --example metatheory -- [samples] [seed]

use ls2::metatheory::{run, Suite, SuiteConfig};
use ls2::reduce::critical_pair_scan;
use ls2::Semiring;

fn main() {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let cfg = SuiteConfig::new(Semiring::Rat).samples(samples).seed(seed);
    for &suite in Suite::ALL {
        print!("{}", run(suite, &cfg));
    }

    let scan = critical_pair_scan();
    println!(
        "{} rules, {} syntactic overlaps, {} critical pairs, {} left-linear",
        scan.rules.len(),
        scan.overlaps.len(),
        scan.critical_pairs().len(),
        scan.left_linear_count()
    );
    for note in scan.linearity.iter().filter_map(|n| n.guard.map(|g| (n.rule, g))) {
        println!("  {}: {}", note.0, note.1);
    }
}
