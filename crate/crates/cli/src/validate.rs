//! Re-reads emitted tables and volume reports and re-checks their
//! invariants.

use std::collections::BTreeMap;
use std::path::Path;

use multicurve::exact::{parse_rational, to_f64};
use multicurve::{Error, Rational, StableGraph};
use num_traits::{One, Zero};

use crate::commands::VolumeReport;
use crate::table::Table;

/// A file that was read but does not satisfy its invariants.
#[derive(Debug)]
pub struct Failed(pub String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "validation failed: {}", self.0)
    }
}

impl std::error::Error for Failed {}

type Check = std::result::Result<String, String>;

pub fn run(path: &Path) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    match validate_text(&text) {
        Ok(summary) => {
            println!("ok: {summary}");
            Ok(())
        }
        Err(msg) => Err(Failed(msg).into()),
    }
}

pub fn validate_text(text: &str) -> Check {
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
        if v.get("kind").and_then(|k| k.as_str()) == Some("volumes") {
            let r: VolumeReport = serde_json::from_value(v).map_err(|e| format!("malformed volume report: {e}"))?;
            return volumes(&r);
        }
    }
    let t = Table::parse(text).map_err(|e| format!("{e:#}"))?;
    table(&t)
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn decimal(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn volumes(r: &VolumeReport) -> Check {
    let grade = 6 * r.g + 2 * r.n as u32 - 6;
    ensure(r.total.pi_power == grade, || format!("total has pi-grade {} not {grade}", r.total.pi_power))?;
    ensure(r.graph_count == r.graphs.len(), || "graph_count disagrees with the list".into())?;
    let total = rational(&r.total.rational)?;
    let pi_pow = std::f64::consts::PI.powi(grade as i32);
    ensure(close(to_f64(&total) * pi_pow, decimal(&r.total.decimal)?, 1e-12), || {
        "total decimal disagrees with its rational".into()
    })?;
    let mut sum = Rational::zero();
    let mut by_edges: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut separating = Rational::zero();
    for e in &r.graphs {
        let gr = StableGraph::from_line(&e.graph).map_err(|x| format!("{}: {x}", e.graph))?;
        ensure(
            gr.genus() == r.g
                && gr.num_legs() == r.n
                && gr.num_vertices() == e.vertices
                && gr.num_edges() == e.edges
                && gr.automorphism_order() == e.automorphisms,
            || format!("graph fields disagree with {}", e.graph),
        )?;
        ensure(e.volume.pi_power == grade, || format!("{} has pi-grade {}", e.graph, e.volume.pi_power))?;
        let v = rational(&e.volume.rational)?;
        ensure(close(to_f64(&v) * pi_pow, decimal(&e.volume.decimal)?, 1e-12), || {
            format!("decimal of {} disagrees with its rational", e.graph)
        })?;
        *by_edges.entry(e.edges).or_default() += &v;
        if e.vertices >= 2 {
            separating += &v;
        }
        sum += v;
    }
    ensure(sum == total, || "graph contributions do not add up to the total".into())?;
    let mut psum = Rational::zero();
    for p in &r.distribution {
        let x = rational(&p.rational)?;
        let want = by_edges.get(&p.k).cloned().unwrap_or_default() / &total;
        ensure(x == want, || format!("p({}) disagrees with the graph contributions", p.k))?;
        psum += x;
    }
    ensure(psum.is_one(), || format!("distribution sums to {psum}"))?;
    ensure(rational(&r.separating.rational)? == separating / &total, || {
        "separating share disagrees with the graphs".into()
    })?;
    Ok(format!("volumes g={} n={} with {} graphs", r.g, r.n, r.graphs.len()))
}

fn column<'a>(t: &'a Table, name: &str) -> std::result::Result<Vec<&'a str>, String> {
    t.column(name).ok_or_else(|| format!("missing column {name}"))
}

/// Float column summing to one, skipped when the column is blank.
fn normalized(t: &Table, name: &str) -> std::result::Result<(), String> {
    let col = column(t, name)?;
    if col.iter().all(|c| c.is_empty()) {
        return Ok(());
    }
    let xs = col.iter().map(|c| decimal(c)).collect::<std::result::Result<Vec<_>, _>>()?;
    ensure(xs.iter().all(|x| *x >= 0.0), || format!("negative entry in {name}"))?;
    let s: f64 = xs.iter().sum();
    ensure((s - 1.0).abs() <= 1e-12, || format!("{name} sums to {s}"))
}

/// Exact column summing to one, skipped when the column is blank.
fn normalized_exact(t: &Table, name: &str) -> std::result::Result<(), String> {
    let col = column(t, name)?;
    if col.iter().all(|c| c.is_empty()) {
        return Ok(());
    }
    let mut s = Rational::zero();
    for c in col {
        s += rational(c)?;
    }
    ensure(s.is_one(), || format!("{name} sums to {s}"))
}

/// Every `x_rational` column matches its decimal twin `x`.
fn rationals_match_decimals(t: &Table) -> std::result::Result<(), String> {
    for name in &t.columns {
        let Some(base) = name.strip_suffix("_rational") else {
            continue;
        };
        let (exact, dec) = (column(t, name)?, column(t, base)?);
        for (r, d) in exact.iter().zip(dec) {
            if r.is_empty() {
                continue;
            }
            let (r, d) = (to_f64(&rational(r)?), decimal(d)?);
            ensure(close(r, d, 1e-15), || format!("{base}: {d} does not render {r}"))?;
        }
    }
    Ok(())
}

fn consecutive_k(t: &Table) -> std::result::Result<(), String> {
    for (i, k) in column(t, "k")?.iter().enumerate() {
        ensure(*k == (i + 1).to_string(), || format!("row {i} has k = {k}"))?;
    }
    Ok(())
}

fn table(t: &Table) -> Check {
    rationals_match_decimals(t)?;
    match t.kind() {
        "distribution" => {
            consecutive_k(t)?;
            for c in ["p_g", "q"] {
                normalized(t, c)?;
                normalized_exact(t, &format!("{c}_rational"))?;
            }
        }
        "perm" => {
            consecutive_k(t)?;
            normalized(t, "q")?;
            normalized_exact(t, "q_rational")?;
        }
        "sample" => {
            consecutive_k(t)?;
            normalized(t, "q_exact")?;
            normalized(t, "q_empirical")?;
            let (a, b, d) = (column(t, "q_exact")?, column(t, "q_empirical")?, column(t, "abs_diff")?);
            let mut tv = 0.0;
            for ((a, b), d) in a.iter().zip(b).zip(d) {
                let (a, b, d) = (decimal(a)?, decimal(b)?, decimal(d)?);
                ensure(((a - b).abs() - d).abs() <= 1e-15, || format!("abs_diff {d} for {a} and {b}"))?;
                tv += d / 2.0;
            }
            let stated = decimal(t.get_meta("total_variation").ok_or("missing total_variation")?)?;
            ensure((tv - stated).abs() <= 1e-12, || format!("total variation {stated} but rows give {tv}"))?;
        }
        "approx" => {
            consecutive_k(t)?;
            let u = column(t, "u")?.iter().map(|c| decimal(c)).collect::<std::result::Result<Vec<_>, _>>()?;
            ensure(u.iter().sum::<f64>() <= 1.0 + 1e-12, || "u coefficients exceed total mass 1".into())?;
            for c in column(t, "llt")? {
                ensure(decimal(c)? >= 0.0, || "negative llt value".into())?;
            }
        }
        "graphs" => {
            let lines = column(t, "graph")?;
            let count: usize = t
                .get_meta("count")
                .and_then(|c| c.parse().ok())
                .ok_or("missing count")?;
            ensure(count == lines.len(), || format!("count {count} but {} rows", lines.len()))?;
            let (v, e, aut) = (column(t, "vertices")?, column(t, "edges")?, column(t, "automorphisms")?);
            for (i, line) in lines.iter().enumerate() {
                let gr = StableGraph::from_line(line).map_err(|x| format!("{line}: {x}"))?;
                ensure(
                    gr.num_vertices().to_string() == v[i]
                        && gr.num_edges().to_string() == e[i]
                        && gr.automorphism_order().to_string() == aut[i],
                    || format!("row {i} disagrees with its graph"),
                )?;
            }
        }
        other => return Err(format!("unknown table kind {other:?}")),
    }
    Ok(format!("{} table with {} rows", t.kind(), t.rows.len()))
}
