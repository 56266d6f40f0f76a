//! Prints the number of stable graphs of genus g without legs.

use multicurve::graphs::{enumerate_stable_graphs, EnumerationOptions};

fn main() {
    let max_g: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    for g in 2..=max_g {
        let t = std::time::Instant::now();
        let graphs = enumerate_stable_graphs(g, 0, &EnumerationOptions::default()).expect("census");
        println!("g={g} graphs={} ({:.2?})", graphs.len(), t.elapsed());
    }
}
