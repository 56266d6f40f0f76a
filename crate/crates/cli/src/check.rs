//! Built-in invariant suites, one line per suite.

use multicurve::asymptotics::{u_coefficients, NumericConstants};
use multicurve::correlators::{correlator, genus_zero, key_equations_hold};
use multicurve::exact::{partitions, rat, Truncation};
use multicurve::graphs::{enumerate_stable_graphs, EnumerationOptions};
use multicurve::perm::{brute_force_q, q_distribution, WeightSequence};
use multicurve::special::polygamma;
use multicurve::volumes::component_distribution;

#[derive(Debug)]
pub struct Failed(pub usize);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} invariant suite(s) failed", self.0)
    }
}

impl std::error::Error for Failed {}

type Suite = fn() -> anyhow::Result<bool>;

fn correlator_equations() -> anyhow::Result<bool> {
    for g in 0..=3u32 {
        for n in 1..=6usize {
            let dim = 3 * g as i64 - 3 + n as i64;
            if !(0..=8).contains(&dim) || 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            for d in partitions(dim as u32, n) {
                let mut d = d;
                d.resize(n, 0);
                if !key_equations_hold(g, &d)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(correlator(1, &[1])? == rat(1, 24))
}

fn genus_zero_formula() -> anyhow::Result<bool> {
    for n in 3..=8usize {
        for d in partitions(n as u32 - 3, n) {
            let mut d = d;
            d.resize(n, 0);
            if genus_zero(&d)? != correlator(0, &d)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn polygamma_identities() -> anyhow::Result<bool> {
    let c = NumericConstants::get();
    Ok((0..8).all(|m| {
        (c.polygamma_one(m) / polygamma(m, 1.0) - 1.0).abs() < 1e-12
            && (c.polygamma_half(m) / polygamma(m, 0.5) - 1.0).abs() < 1e-12
    }))
}

fn graph_census() -> anyhow::Result<bool> {
    let opts = EnumerationOptions::default();
    let counts = [(2, 0, 6), (1, 1, 1), (0, 4, 3), (0, 5, 25), (1, 2, 4), (3, 0, 41)];
    for (g, n, want) in counts {
        if enumerate_stable_graphs(g, n, &opts)?.len() != want {
            return Ok(false);
        }
    }
    Ok(true)
}

fn permutation_oracle() -> anyhow::Result<bool> {
    let kinds = [
        WeightSequence::zeta(Truncation::Finite(1), rat(1, 1))?,
        WeightSequence::zeta(Truncation::Infinite, rat(1, 2))?,
        WeightSequence::zeta(Truncation::Finite(2), rat(9, 8))?,
    ];
    for w in &kinds {
        for n in 1..=6 {
            if q_distribution(n, w)? != brute_force_q(n, w)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn genus_two() -> anyhow::Result<bool> {
    let d = component_distribution(2)?;
    Ok(d.exact_masses() == Some(&[rat(7, 27), rat(5, 9), rat(5, 27)][..]))
}

fn approximation_table() -> anyhow::Result<bool> {
    let u = u_coefficients(0.5 * 150f64.ln(), 0.5, 4)?;
    Ok([0.0724, 0.2022, 0.2675, 0.2251]
        .iter()
        .zip(&u[1..])
        .all(|(want, got)| (want - got).abs() < 5e-4))
}

pub fn run() -> anyhow::Result<()> {
    let suites: [(&str, Suite); 7] = [
        ("string and dilaton equations", correlator_equations),
        ("genus zero closed form", genus_zero_formula),
        ("polygamma identities", polygamma_identities),
        ("stable graph census", graph_census),
        ("permutation oracle", permutation_oracle),
        ("genus two distribution", genus_two),
        ("approximation table", approximation_table),
    ];
    let mut failed = 0;
    for (name, suite) in suites {
        let ok = match suite() {
            Ok(ok) => ok,
            Err(e) => {
                eprintln!("{name}: {e:#}");
                false
            }
        };
        println!("{} {name}", if ok { "pass" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    if failed > 0 {
        return Err(Failed(failed).into());
    }
    Ok(())
}
