//! Prints Vol Q_g, its ratio to the large genus asymptotic and p_g.

use multicurve::exact::format_rational;
use multicurve::graphs::EnumerationOptions;
use multicurve::volumes::{bounded_weight_ratio, masur_veech_volume, volume_asymptotic};

fn main() {
    let max_g: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    for g in 2..=max_g {
        let t = std::time::Instant::now();
        let v = masur_veech_volume(g, 0, &EnumerationOptions::default()).expect("volume");
        let ratio = v.total.to_f64() / volume_asymptotic(g);
        println!(
            "g={g} Vol={}*pi^{} ratio={ratio:.6} ({:.2?})",
            format_rational(&v.total_coeff()),
            v.total_pi_power(),
            t.elapsed()
        );
        let p = v.component_distribution().expect("distribution");
        let ps: Vec<String> = p.probabilities().iter().map(|x| format!("{x:.5}")).collect();
        println!("  p_g = {}", ps.join(" "));
    }
    for g in 2..=max_g + 8 {
        let r1 = bounded_weight_ratio(g, 1).expect("ratio");
        let r2 = bounded_weight_ratio(g, 2).expect("ratio");
        println!("g={g} V_1/V_inf={r1:.6} V_2/V_inf={r2:.6}");
    }
}
