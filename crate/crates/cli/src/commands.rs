use std::path::{Path, PathBuf};

use anyhow::Context;
use multicurve::asymptotics::{
    asymptotic_cumulants, exact_cumulants, lambda_n, llt_with_lambda, mod_poisson_deviation, tail_estimate,
    u_coefficients, ApproxParams, TailSide,
};
use multicurve::correlators::{global, CACHE_ENV};
use multicurve::exact::{format_decimal, format_rational, parse_rational, to_f64};
use multicurve::graphs::{enumerate_stable_graphs, EnumerationOptions};
use multicurve::perm::{empirical_distribution, q_distribution, q_distribution_f64, WeightSequence};
use multicurve::volumes::{masur_veech_volume, single_vertex_contribution_f64};
use multicurve::{Distribution, Error, PiGraded, Rational, Truncation};
use serde::{Deserialize, Serialize};

use crate::table::{Format, Table};
use crate::{Mode, Output, Weights};

/// Largest `n` handled in exact arithmetic unless asked otherwise.
pub const EXACT_LIMIT: usize = 300;

/// Grid for the mod-Poisson deviation of permutation laws.
pub const T_GRID: [f64; 5] = [0.2, 0.6, 1.0, 1.4, 1.8];

fn write_out(text: &str, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(table: &Table, out: &Output) -> anyhow::Result<()> {
    write_out(&table.render(out.format.unwrap_or(Format::Csv))?, out.output.as_deref())
}

fn truncation(s: &str) -> anyhow::Result<Truncation> {
    s.parse::<Truncation>()
        .map_err(|_| Error::InvalidParameter(format!("m must be a positive integer or inf, got {s:?}")).into())
}

/// The weights plus `(m, alpha)` when they are of zeta type.
fn weight_sequence(w: &Weights) -> anyhow::Result<(WeightSequence, Option<(Truncation, f64)>)> {
    if let Some(theta) = &w.theta {
        let vals = theta.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>()?;
        return Ok((WeightSequence::custom(vals)?, None));
    }
    let m = truncation(&w.m)?;
    let alpha = parse_rational(&w.alpha)?;
    let a = to_f64(&alpha);
    Ok((WeightSequence::zeta(m, alpha)?, Some((m, a))))
}

fn rational_cells(d: &Distribution, k: usize) -> (String, String) {
    let dec = format_decimal(d.at(k));
    let rat = d.exact_at(k).map(|r| format_rational(&r)).unwrap_or_default();
    (dec, rat)
}

/// Saves the correlator cache when the environment names a file.
fn save_cache() -> anyhow::Result<()> {
    if let Ok(p) = std::env::var(CACHE_ENV) {
        let path = PathBuf::from(p);
        let tmp = path.with_extension("tmp");
        global().save(&tmp)?;
        std::fs::rename(&tmp, &path).with_context(|| format!("replacing {}", path.display()))?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Value {
    pub pi_power: u32,
    /// Coefficient of `pi^pi_power`.
    pub rational: String,
    /// The full value as a float.
    pub decimal: String,
}

impl Value {
    fn of(v: &PiGraded, grade: u32) -> Self {
        Value {
            pi_power: grade,
            rational: format_rational(&v.coeff(grade)),
            decimal: format_decimal(v.to_f64()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prob {
    pub k: usize,
    pub rational: String,
    pub decimal: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphEntry {
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub automorphisms: u64,
    pub volume: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub kind: String,
    pub g: u32,
    pub n: usize,
    pub graph_count: usize,
    pub total: Value,
    pub graphs: Vec<GraphEntry>,
    /// Share of the volume by number of edges, i.e. number of components.
    pub distribution: Vec<Prob>,
    pub separating: Prob,
}

pub fn volumes(g: u32, n: usize, budget: usize, output: Option<PathBuf>) -> anyhow::Result<()> {
    let opts = EnumerationOptions {
        budget,
        ..Default::default()
    };
    let vb = masur_veech_volume(g, n, &opts)?;
    let grade = vb.total_pi_power();
    let dist = vb.component_distribution()?;
    let sep = vb.separating_mass()?;
    let report = VolumeReport {
        kind: "volumes".into(),
        g,
        n,
        graph_count: vb.graphs.len(),
        total: Value::of(&vb.total, grade),
        graphs: vb
            .graphs
            .iter()
            .map(|(gr, v)| GraphEntry {
                graph: gr.to_line(),
                vertices: gr.num_vertices(),
                edges: gr.num_edges(),
                automorphisms: gr.automorphism_order(),
                volume: Value::of(v, grade),
            })
            .collect(),
        distribution: dist
            .support()
            .map(|k| {
                let (decimal, rational) = rational_cells(&dist, k);
                Prob { k, rational, decimal }
            })
            .collect(),
        separating: Prob {
            k: 0,
            rational: format_rational(&sep),
            decimal: format_decimal(to_f64(&sep)),
        },
    };
    save_cache()?;
    write_out(&(serde_json::to_string_pretty(&report)? + "\n"), output.as_deref())
}

pub fn graphs(g: u32, n: usize, budget: usize, out: &Output) -> anyhow::Result<()> {
    let opts = EnumerationOptions {
        budget,
        ..Default::default()
    };
    let list = enumerate_stable_graphs(g, n, &opts)?;
    let mut t = Table::new("graphs", &["index", "vertices", "edges", "separating", "automorphisms", "graph"]);
    t.meta("g", g);
    t.meta("n", n);
    t.meta("count", list.len());
    for (i, gr) in list.iter().enumerate() {
        let c = gr.classify();
        t.push(vec![
            i.to_string(),
            c.v.to_string(),
            c.e.to_string(),
            c.s.to_string(),
            gr.automorphism_order().to_string(),
            gr.to_line(),
        ]);
    }
    emit(&t, out)
}

/// `q_{n,m,alpha}` exactly up to [`EXACT_LIMIT`], in floating point beyond.
fn permutation_law(n: usize, w: &WeightSequence, mode: Option<Mode>, k_max: Option<usize>) -> anyhow::Result<Distribution> {
    let exact = match mode {
        Some(m) => m == Mode::Exact,
        None => n <= EXACT_LIMIT && k_max.is_none(),
    };
    Ok(if exact {
        q_distribution(n, w)?
    } else {
        q_distribution_f64(n, w, k_max)?
    })
}

pub fn distribution(g: u32, mode: Mode, approx_only: bool, budget: usize, out: &Output) -> anyhow::Result<()> {
    if g < 2 {
        return Err(Error::InvalidParameter(format!("need g >= 2, got {g}")).into());
    }
    let n = 3 * g as usize - 3;
    let p_g: Option<Distribution> = match (approx_only, mode) {
        (true, _) => None,
        (false, Mode::Exact) => {
            let opts = EnumerationOptions {
                budget,
                ..Default::default()
            };
            let d = masur_veech_volume(g, 0, &opts)?.component_distribution()?;
            save_cache()?;
            Some(d)
        }
        (false, Mode::Float) => {
            let w = (1..=g)
                .map(|k| single_vertex_contribution_f64(g, k, Truncation::Infinite))
                .collect::<Result<Vec<_>, _>>()?;
            Some(Distribution::from_float_weights(1, w)?)
        }
    };
    let weights = WeightSequence::zeta(Truncation::Infinite, Rational::new(1.into(), 2.into()))?;
    let q = permutation_law(n, &weights, None, None)?;
    let lambda = lambda_n(n, Truncation::Infinite, 0.5)?;
    let u = u_coefficients(lambda, 0.5, n)?;
    let mut t = Table::new("distribution", &["k", "p_g", "p_g_rational", "q", "q_rational", "u", "llt"]);
    t.meta("g", g);
    t.meta("n", n);
    t.meta("lambda", format_decimal(lambda));
    t.meta(
        "p_g_source",
        match (approx_only, mode) {
            (true, _) => "none",
            (false, Mode::Exact) => "all stable graphs",
            (false, Mode::Float) => "single-vertex graphs",
        },
    );
    for k in 1..=n {
        let (p, pr) = match &p_g {
            Some(d) => rational_cells(d, k),
            None => (String::new(), String::new()),
        };
        let (qd, qr) = rational_cells(&q, k);
        t.push(vec![
            k.to_string(),
            p,
            pr,
            qd,
            qr,
            format_decimal(u[k]),
            format_decimal(llt_with_lambda(lambda, 0.5, k - 1)),
        ]);
    }
    emit(&t, out)
}

pub fn perm(n: usize, weights: &Weights, mode: Option<Mode>, k_max: Option<usize>, out: &Output) -> anyhow::Result<()> {
    let (w, zeta_kind) = weight_sequence(weights)?;
    let q = permutation_law(n, &w, mode, k_max)?;
    let mut t = Table::new("perm", &["k", "q", "q_rational"]);
    t.meta("n", n);
    match &w {
        WeightSequence::Zeta { m, alpha } => {
            t.meta("m", m);
            t.meta("alpha", format_rational(alpha));
        }
        WeightSequence::Custom(theta) => {
            let s: Vec<String> = theta.iter().map(format_rational).collect();
            t.meta("theta", s.join(" "));
        }
    }
    t.meta("mode", if q.is_exact() { "exact" } else { "float" });
    let kappa = exact_cumulants(&q, 4)?;
    for (i, k) in kappa.iter().enumerate() {
        t.meta(format!("kappa_{}_exact", i + 1), format_decimal(*k));
    }
    if let (Some((m, alpha)), true) = (zeta_kind, n >= 2) {
        let asym = asymptotic_cumulants(n, m, alpha, 4)?;
        for (i, k) in asym.iter().enumerate() {
            t.meta(format!("kappa_{}_asymptotic", i + 1), format_decimal(*k));
        }
        let params = ApproxParams::for_permutations(n, m, alpha)?;
        let dev = mod_poisson_deviation(&q, &params, &T_GRID)?;
        t.meta("lambda", format_decimal(params.lambda));
        t.meta("mod_poisson_deviation", format_decimal(dev));
    }
    for k in q.support() {
        let (d, r) = rational_cells(&q, k);
        t.push(vec![k.to_string(), d, r]);
    }
    emit(&t, out)
}

pub fn sample(n: usize, weights: &Weights, samples: usize, seed: u64, out: &Output) -> anyhow::Result<()> {
    let (w, _) = weight_sequence(weights)?;
    let empirical = empirical_distribution(n, &w, samples, seed)?;
    let exact = permutation_law(n, &w, None, None)?;
    let mut t = Table::new("sample", &["k", "q_exact", "q_empirical", "abs_diff"]);
    t.meta("n", n);
    t.meta("samples", samples);
    t.meta("seed", seed);
    t.meta("total_variation", format_decimal(exact.total_variation(&empirical)));
    for k in 1..=n {
        let (a, b) = (exact.at(k), empirical.at(k));
        t.push(vec![k.to_string(), format_decimal(a), format_decimal(b), format_decimal((a - b).abs())]);
    }
    emit(&t, out)
}

#[allow(clippy::too_many_arguments)]
pub fn approx(
    n: Option<usize>,
    g: Option<u32>,
    m: &str,
    alpha: &str,
    k_max: Option<usize>,
    xs: &[f64],
    out: &Output,
) -> anyhow::Result<()> {
    let n = match (n, g) {
        (Some(n), _) => n,
        (None, Some(g)) if g >= 2 => 3 * g as usize - 3,
        _ => return Err(Error::InvalidParameter("need --n, or --g >= 2".into()).into()),
    };
    let m = truncation(m)?;
    let alpha = to_f64(&parse_rational(alpha)?);
    let lambda = lambda_n(n, m, alpha)?;
    let k_max = k_max.unwrap_or_else(|| n.min((lambda + 12.0 * lambda.sqrt()).ceil() as usize + 1));
    let u = u_coefficients(lambda, alpha, k_max)?;
    let mut t = Table::new("approx", &["k", "u", "llt"]);
    t.meta("n", n);
    t.meta("m", m);
    t.meta("alpha", format_decimal(alpha));
    t.meta("lambda", format_decimal(lambda));
    for &x in xs {
        let side = if x > 1.0 { TailSide::Upper } else { TailSide::Lower };
        let e = tail_estimate(n, m, alpha, x, side)?;
        t.meta(
            format!("tail_{}_{x}", if x > 1.0 { "upper" } else { "lower" }),
            format!(
                "threshold={} x_eff={} estimate={}",
                e.threshold,
                format_decimal(e.x_eff),
                format_decimal(e.estimate)
            ),
        );
    }
    for k in 1..=k_max {
        t.push(vec![k.to_string(), format_decimal(u[k]), format_decimal(llt_with_lambda(lambda, alpha, k - 1))]);
    }
    emit(&t, out)
}
