//! Prints the number of valid words per pair count, up to a bound given as
//! the first argument (default 5).

use std::io::Write;

fn main() {
    let max: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    for p in 3..=max {
        let t0 = std::time::Instant::now();
        let counts = jassology::enumerate::count_by_pairs(p);
        println!(
            "max_pairs={p}: {counts:?} total={} in {:?}",
            counts.values().sum::<usize>(),
            t0.elapsed()
        );
        std::io::stdout().flush().unwrap();
    }
}
