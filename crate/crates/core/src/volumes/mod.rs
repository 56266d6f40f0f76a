//! Masur-Veech volume contributions of stable graphs, their groupings and
//! the component-count distribution of random multicurves.

mod polynomial;
mod single_vertex;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

pub use polynomial::EdgePolynomial;
pub use single_vertex::{
    approximate_distribution_qtilde, bounded_weight_ratio, single_vertex_contribution,
    single_vertex_contribution_f64, single_vertex_direct, single_vertex_distribution, single_vertex_tilde,
};

use crate::correlators::correlator;
use crate::exact::{compositions, factorial, pow2, zeta_truncated, PiGraded, Rational, Truncation};
use crate::graphs::{enumerate_stable_graphs, EnumerationOptions, StableGraph};
use crate::{Distribution, Error, Result};

fn check_stable(g: u32, n: usize) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    Ok(())
}

/// `N_{g,n}(b) = sum_{|d| = 3g-3+n} <tau_d>_g / (2^{5g-6+2n} d!) b^{2d}`.
pub fn local_polynomial(g: u32, n: usize) -> Result<EdgePolynomial> {
    check_stable(g, n)?;
    let slots: Vec<Option<usize>> = (0..n).map(Some).collect();
    vertex_polynomial(g, &slots, n)
}

/// Local polynomial of a vertex whose `i`-th half-edge carries variable
/// `slots[i]`, or the value 0 for a leg.
fn vertex_polynomial(g: u32, slots: &[Option<usize>], nvars: usize) -> Result<EdgePolynomial> {
    let n = slots.len();
    let dim = 3 * g as i64 - 3 + n as i64;
    let active: Vec<usize> = (0..n).filter(|&i| slots[i].is_some()).collect();
    let scale = pow2(-(5 * g as i64 - 6 + 2 * n as i64));
    let mut out = EdgePolynomial::zero(nvars);
    let mut d = vec![0u32; n];
    for comp in compositions(dim as u32, active.len()) {
        for (&slot, &x) in active.iter().zip(&comp) {
            d[slot] = x;
        }
        let c = correlator(g, &d)?;
        if c.is_zero() {
            continue;
        }
        let den: BigInt = comp.iter().map(|&x| factorial(x)).product();
        let mut exps = vec![0u32; nvars];
        for (&slot, &x) in active.iter().zip(&comp) {
            exps[slots[slot].unwrap()] += 2 * x;
        }
        out.add_term(exps, c * &scale / Rational::from_integer(den));
    }
    Ok(out)
}

/// `P_Gamma` in the edge variables of `graph`, edges in canonical order.
pub fn graph_polynomial(graph: &StableGraph) -> Result<EdgePolynomial> {
    let g = graph.genus() as i64;
    let n = graph.num_legs() as i64;
    let edges = graph.edges();
    let e = edges.len();
    if e == 0 {
        return Err(Error::InvalidParameter("graph without edges".into()));
    }
    let mut pref = pow2(6 * g - 5 + 2 * n)
        * Rational::new(factorial((4 * g - 4 + n) as u32), factorial((6 * g - 7 + 2 * n) as u32));
    pref /= pow2(graph.num_vertices() as i64 - 1);
    pref /= Rational::from_integer(BigInt::from(graph.automorphism_order()));

    let mut poly = EdgePolynomial::constant(e, pref);
    for v in 0..graph.num_vertices() {
        let mut slots: Vec<Option<usize>> = Vec::new();
        for (idx, &(a, b)) in edges.iter().enumerate() {
            if a == v {
                slots.push(Some(idx));
            }
            if b == v {
                slots.push(Some(idx));
            }
        }
        for &leg in graph.legs() {
            if leg == v {
                slots.push(None);
            }
        }
        let local = vertex_polynomial(graph.vertex_genera()[v], &slots, e)?;
        poly = poly.mul(&local);
    }
    Ok(poly.times_all_variables())
}

/// The operator sending `prod b_i^{m_i}` to `prod m_i! zeta_m(m_i + 1)`.
pub fn apply_zeta(p: &EdgePolynomial, m: Truncation) -> Result<PiGraded> {
    let mut cache: HashMap<u32, PiGraded> = HashMap::new();
    let mut total = PiGraded::zero();
    for (exps, c) in p.terms() {
        let mut term = PiGraded::rational(c.clone());
        for &k in exps {
            if k == 0 {
                return Err(Error::InvalidParameter("zeta operator needs every exponent >= 1".into()));
            }
            let z = match cache.get(&k) {
                Some(z) => z.clone(),
                None => {
                    let z = zeta_truncated(m, k + 1)?.scale(&Rational::from_integer(factorial(k)));
                    cache.insert(k, z.clone());
                    z
                }
            };
            term = &term * &z;
        }
        total += &term;
    }
    Ok(total)
}

/// The operator sending `prod b_i^{m_i}` to `prod m_i! / H_i^{m_i + 1}`.
pub fn apply_y(p: &EdgePolynomial, h: &[u32]) -> Result<Rational> {
    if h.len() != p.nvars() {
        return Err(Error::InvalidParameter(format!("{} weights for {} variables", h.len(), p.nvars())));
    }
    if h.contains(&0) {
        return Err(Error::InvalidParameter("weights must be positive".into()));
    }
    let mut total = Rational::zero();
    for (exps, c) in p.terms() {
        let mut term = c.clone();
        for (&k, &hi) in exps.iter().zip(h) {
            term *= Rational::new(factorial(k), num_traits::pow(BigInt::from(hi), k as usize + 1));
        }
        total += term;
    }
    Ok(total)
}

/// Contribution of square-tiled surfaces whose cylinders along the edges
/// of `graph` have heights `h`.
pub fn cylinder_contribution(graph: &StableGraph, h: &[u32]) -> Result<Rational> {
    apply_y(&graph_polynomial(graph)?, h)
}

/// `Vol(Gamma)`.
pub fn graph_volume(graph: &StableGraph) -> Result<PiGraded> {
    graph_volume_truncated(graph, Truncation::Infinite)
}

type LocalTerms = Arc<Vec<(Vec<u32>, Rational)>>;

static LOCAL_TERMS: RwLock<Option<HashMap<(u32, usize, usize), LocalTerms>>> = RwLock::new(None);

/// Terms `(d, <tau_d tau_0^legs>_g / (2^{5g-6+2n} d!))` of a local
/// polynomial with `active` variable slots and `legs` zero slots.
fn local_terms(g: u32, active: usize, legs: usize) -> Result<LocalTerms> {
    let key = (g, active, legs);
    if let Some(t) = LOCAL_TERMS.read().unwrap().as_ref().and_then(|m| m.get(&key)) {
        return Ok(t.clone());
    }
    let n = active + legs;
    let dim = 3 * g as i64 - 3 + n as i64;
    let scale = pow2(-(5 * g as i64 - 6 + 2 * n as i64));
    let mut terms = Vec::new();
    let mut d = vec![0u32; n];
    for comp in compositions(dim as u32, active) {
        d[..active].copy_from_slice(&comp);
        let c = correlator(g, &d)?;
        if c.is_zero() {
            continue;
        }
        let den: BigInt = comp.iter().map(|&x| factorial(x)).product();
        terms.push((comp, c * &scale / Rational::from_integer(den)));
    }
    let terms = Arc::new(terms);
    LOCAL_TERMS
        .write()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(key, terms.clone());
    Ok(terms)
}

/// `Z_m(P_Gamma)` without expanding `P_Gamma`: vertices are multiplied in
/// one at a time and every edge is summed out as soon as both of its ends
/// have been seen.
pub fn graph_volume_truncated(graph: &StableGraph, m: Truncation) -> Result<PiGraded> {
    let g = graph.genus() as i64;
    let n = graph.num_legs() as i64;
    let edges = graph.edges();
    let e = edges.len();
    if e == 0 {
        return Err(Error::InvalidParameter("graph without edges".into()));
    }
    let mut pref = pow2(6 * g - 5 + 2 * n)
        * Rational::new(factorial((4 * g - 4 + n) as u32), factorial((6 * g - 7 + 2 * n) as u32));
    pref /= pow2(graph.num_vertices() as i64 - 1);
    pref /= Rational::from_integer(BigInt::from(graph.automorphism_order()));

    // last vertex touching each edge
    let closes_at: Vec<usize> = edges.iter().map(|&(a, b)| a.max(b)).collect();
    let mut zeta_cache: HashMap<u32, Rational> = HashMap::new();
    let mut state: HashMap<Vec<u32>, Rational> = HashMap::new();
    state.insert(vec![0; e], pref);
    for v in 0..graph.num_vertices() {
        let mut slots = Vec::new();
        for (idx, &(a, b)) in edges.iter().enumerate() {
            if a == v {
                slots.push(idx);
            }
            if b == v {
                slots.push(idx);
            }
        }
        let legs = graph.legs().iter().filter(|&&x| x == v).count();
        let local = local_terms(graph.vertex_genera()[v], slots.len(), legs)?;
        let closing: Vec<usize> = (0..e).filter(|&i| closes_at[i] == v).collect();
        let mut next: HashMap<Vec<u32>, Rational> = HashMap::new();
        for (exps, c) in &state {
            for (d, w) in local.iter() {
                let mut x = exps.clone();
                for (&slot, &di) in slots.iter().zip(d) {
                    x[slot] += 2 * di;
                }
                let mut coeff = c * w;
                for &i in &closing {
                    // b_e^{k} with k = x[i] + 1 from the factor prod b_e
                    let k = x[i] + 1;
                    let z = match zeta_cache.get(&k) {
                        Some(z) => z.clone(),
                        None => {
                            let s = zeta_truncated(m, k + 1)?;
                            let base = match m {
                                Truncation::Infinite => s.coeff(k + 1),
                                Truncation::Finite(_) => s.coeff(0),
                            };
                            let z = base * Rational::from_integer(factorial(k));
                            zeta_cache.insert(k, z.clone());
                            z
                        }
                    };
                    coeff *= z;
                    x[i] = 0;
                }
                match next.entry(x) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += coeff,
                    std::collections::hash_map::Entry::Vacant(o) => {
                        o.insert(coeff);
                    }
                }
            }
        }
        state = next;
    }
    let total = state.remove(&vec![0; e]).unwrap_or_else(Rational::zero);
    let grade = match m {
        Truncation::Infinite => (6 * g - 6 + 2 * n) as u32,
        Truncation::Finite(_) => 0,
    };
    Ok(PiGraded::monomial(grade, total))
}

/// Per-graph volumes of `Q_{g,n}` with their groupings.
#[derive(Clone, Debug)]
pub struct VolumeBreakdown {
    pub g: u32,
    pub n: usize,
    /// Every stable graph with its contribution, in enumeration order.
    pub graphs: Vec<(StableGraph, PiGraded)>,
    pub total: PiGraded,
}

impl VolumeBreakdown {
    /// Power of pi carried by the total, `6g - 6 + 2n`.
    pub fn total_pi_power(&self) -> u32 {
        6 * self.g + 2 * self.n as u32 - 6
    }

    pub fn total_coeff(&self) -> Rational {
        self.total.coeff(self.total_pi_power())
    }

    fn group<K: Ord>(&self, key: impl Fn(&StableGraph) -> K) -> BTreeMap<K, PiGraded> {
        let mut out: BTreeMap<K, PiGraded> = BTreeMap::new();
        for (gr, v) in &self.graphs {
            *out.entry(key(gr)).or_default() += v;
        }
        out
    }

    pub fn upsilon_v(&self) -> BTreeMap<usize, PiGraded> {
        self.group(|x| x.num_vertices())
    }

    pub fn upsilon_e(&self) -> BTreeMap<usize, PiGraded> {
        self.group(|x| x.num_edges())
    }

    pub fn upsilon_ve(&self) -> BTreeMap<(usize, usize), PiGraded> {
        self.group(|x| (x.num_vertices(), x.num_edges()))
    }

    pub fn upsilon_vst(&self) -> BTreeMap<(usize, usize, usize), PiGraded> {
        self.group(|x| {
            let c = x.classify();
            (c.v, c.s, c.t)
        })
    }

    /// `p(k) = (sum of Vol(Gamma) over graphs with k edges) / Vol`, for
    /// `k = 1 ..= 3g - 3 + n`.
    pub fn component_distribution(&self) -> Result<Distribution> {
        let by_e = self.upsilon_e();
        let max = 3 * self.g as usize + self.n - 3;
        let masses = (1..=max)
            .map(|k| by_e.get(&k).cloned().unwrap_or_default().ratio(&self.total))
            .collect::<Result<Vec<_>>>()?;
        Distribution::exact(1, masses)
    }

    /// Share of the volume coming from multicurves with disconnected
    /// complement (graphs with at least two vertices).
    pub fn separating_mass(&self) -> Result<Rational> {
        let sep: PiGraded = self
            .upsilon_v()
            .into_iter()
            .filter(|(v, _)| *v >= 2)
            .map(|(_, x)| x)
            .sum();
        sep.ratio(&self.total)
    }
}

/// `Vol Q_{g,n}` as the sum of all stable graph contributions.
pub fn masur_veech_volume(g: u32, n: usize, opts: &EnumerationOptions) -> Result<VolumeBreakdown> {
    check_stable(g, n)?;
    if (6 * g as i64 - 7 + 2 * n as i64) < 0 {
        return Err(Error::InvalidParameter(format!("no multicurves on a surface of type ({g},{n})")));
    }
    let graphs = enumerate_stable_graphs(g, n, opts)?;
    let vols: Vec<PiGraded> = graphs.par_iter().map(graph_volume).collect::<Result<_>>()?;
    let total: PiGraded = vols.iter().cloned().sum();
    let grade = 6 * g + 2 * n as u32 - 6;
    if total.single_grade().map(|(p, _)| p) != Some(grade) {
        return Err(Error::Invariant(format!("volume of ({g},{n}) is not a multiple of pi^{grade}")));
    }
    Ok(VolumeBreakdown {
        g,
        n,
        graphs: graphs.into_iter().zip(vols).collect(),
        total,
    })
}

/// Exact `p_g(k)` for `k = 1 ..= 3g - 3`.
pub fn component_distribution(g: u32) -> Result<Distribution> {
    if g < 2 {
        return Err(Error::InvalidParameter(format!("component distribution needs g >= 2, got {g}")));
    }
    masur_veech_volume(g, 0, &EnumerationOptions::default())?.component_distribution()
}

/// `const_{g,n} = 2 (6g-6+2n) (4g-4+n)! 2^{4g-3+n}`.
pub fn mirzakhani_constant(g: u32, n: usize) -> Result<BigInt> {
    check_stable(g, n)?;
    let (g, n) = (g as i64, n as i64);
    Ok((BigInt::from(2 * (6 * g - 6 + 2 * n)) * factorial((4 * g - 4 + n) as u32)) << ((4 * g - 3 + n) as usize))
}

/// Frequency `c(gamma) = Vol(gamma) / const_{g,n}` of a multicurve type.
pub fn mirzakhani_frequency(vol: &PiGraded, g: u32, n: usize) -> Result<PiGraded> {
    let grade = 6 * g + 2 * n as u32 - 6;
    if !vol.is_zero() {
        match vol.single_grade() {
            Some((p, _)) if p == grade => {}
            Some((p, _)) => return Err(Error::GradeMismatch(p, grade)),
            None => return Err(Error::InvalidParameter("volume with mixed pi-grades".into())),
        }
    }
    let c = mirzakhani_constant(g, n)?;
    Ok(vol.scale(&(Rational::one() / Rational::from_integer(c))))
}

/// Large genus asymptotic `(4/pi) (8/3)^{4g-4}` of `Vol Q_g`.
pub fn volume_asymptotic(g: u32) -> f64 {
    4.0 / std::f64::consts::PI * (8.0f64 / 3.0).powi(4 * g as i32 - 4)
}

/// The same with the conjectural `1 - pi^2/(144 g)` correction.
pub fn volume_asymptotic_refined(g: u32) -> f64 {
    volume_asymptotic(g) * (1.0 - std::f64::consts::PI.powi(2) / (144.0 * g as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn b(nvars: usize, exps: &[u32], c: Rational) -> EdgePolynomial {
        let mut p = EdgePolynomial::zero(nvars);
        p.add_term(exps.to_vec(), c);
        p
    }

    #[test]
    fn local_polynomials() {
        assert_eq!(local_polynomial(0, 3).unwrap(), EdgePolynomial::constant(3, int(1)));
        assert_eq!(local_polynomial(1, 1).unwrap(), b(1, &[2], rat(1, 48)));
        let p = local_polynomial(0, 4).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.coeff(&[0, 2, 0, 0]), rat(1, 4));
        assert!(matches!(local_polynomial(0, 2), Err(Error::Unstable { .. })));
    }

    #[test]
    fn graph_polynomials() {
        let g12 = StableGraph::single_vertex(2, 1).unwrap();
        assert_eq!(graph_polynomial(&g12).unwrap(), b(1, &[5], rat(2, 15)));
        let one_edge = StableGraph::new(vec![0, 0], &[(0, 1)], vec![0, 0, 1, 1]).unwrap();
        assert_eq!(graph_polynomial(&one_edge).unwrap(), b(1, &[1], int(4)));
    }

    #[test]
    fn zeta_and_y_operators() {
        let p = b(1, &[5], rat(2, 15));
        assert_eq!(apply_zeta(&p, Truncation::Infinite).unwrap(), PiGraded::monomial(6, rat(16, 945)));
        assert_eq!(apply_zeta(&p, Truncation::Finite(1)).unwrap(), PiGraded::rational(int(16)));
        let q = b(2, &[1, 1], int(1));
        assert_eq!(apply_zeta(&q, Truncation::Infinite).unwrap(), PiGraded::monomial(4, rat(1, 36)));
        assert!(apply_zeta(&b(2, &[1, 0], int(1)), Truncation::Infinite).is_err());
        let g12 = StableGraph::single_vertex(2, 1).unwrap();
        assert_eq!(cylinder_contribution(&g12, &[1]).unwrap(), int(16));
        assert_eq!(cylinder_contribution(&g12, &[2]).unwrap(), rat(1, 4));
        assert!(cylinder_contribution(&g12, &[0]).is_err());
    }

    #[test]
    fn elimination_matches_expansion() {
        for (g, n) in [(2, 0), (3, 0), (1, 2), (0, 5), (2, 1), (1, 3)] {
            for gr in enumerate_stable_graphs(g, n, &EnumerationOptions::default()).unwrap() {
                let p = graph_polynomial(&gr).unwrap();
                assert_eq!(p.homogeneous_degree(), Some(6 * g + 2 * n as u32 - 6 - gr.num_edges() as u32));
                for m in [Truncation::Finite(1), Truncation::Finite(3), Truncation::Infinite] {
                    assert_eq!(graph_volume_truncated(&gr, m).unwrap(), apply_zeta(&p, m).unwrap(), "{gr}");
                }
            }
        }
    }

    #[test]
    fn sphere_with_four_points() {
        let v = masur_veech_volume(0, 4, &EnumerationOptions::default()).unwrap();
        assert_eq!(v.graphs.len(), 3);
        assert_eq!(v.total, PiGraded::monomial(2, int(2)));
        for (_, x) in &v.graphs {
            assert_eq!(x, &PiGraded::monomial(2, rat(2, 3)));
        }
    }

    #[test]
    fn genus_two() {
        let v = masur_veech_volume(2, 0, &EnumerationOptions::default()).unwrap();
        assert_eq!(v.total, PiGraded::monomial(6, rat(1, 15)));
        let p = v.component_distribution().unwrap();
        assert_eq!(p.exact_masses().unwrap(), &[rat(7, 27), rat(5, 9), rat(5, 27)]);
        assert_eq!(v.separating_mass().unwrap(), rat(67, 315));
        let one_vertex = v.upsilon_v()[&1].clone();
        let direct = &graph_volume(&StableGraph::single_vertex(2, 1).unwrap()).unwrap()
            + &graph_volume(&StableGraph::single_vertex(2, 2).unwrap()).unwrap();
        assert_eq!(one_vertex, direct);
    }

    #[test]
    fn frequencies() {
        assert_eq!(mirzakhani_constant(2, 0).unwrap(), BigInt::from(9216));
        let v = masur_veech_volume(2, 0, &EnumerationOptions::default()).unwrap();
        let sum: PiGraded = v
            .graphs
            .iter()
            .map(|(_, x)| mirzakhani_frequency(x, 2, 0).unwrap())
            .sum();
        assert_eq!(sum, mirzakhani_frequency(&v.total, 2, 0).unwrap());
        assert!(matches!(
            mirzakhani_frequency(&PiGraded::monomial(4, int(1)), 2, 0),
            Err(Error::GradeMismatch(4, 6))
        ));
    }
}
