use std::collections::HashMap;
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::canonical::{canonicalize, Shape};
use super::StableGraph;
use crate::{Error, Result};

/// Default cap on the number of graphs an enumeration may produce.
pub const DEFAULT_GRAPH_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub budget: usize,
    /// Randomly relabel every intermediate graph before canonicalizing.
    /// The output must not depend on it; used to test canonical forms.
    pub shuffle_seed: Option<u64>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_GRAPH_BUDGET,
            shuffle_seed: None,
        }
    }
}

/// All stable graphs of signature `(g, n)` with at least one edge, one per
/// isomorphism class, sorted by edge count, vertex count and canonical code.
///
/// Graphs with `E + 1` edges are obtained from those with `E` edges by
/// undoing an edge contraction at one vertex, starting from the single
/// vertex of genus `g`.
pub fn enumerate_stable_graphs(g: u32, n: usize, opts: &EnumerationOptions) -> Result<Vec<StableGraph>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let root = Shape {
        genera: vec![g],
        adj: vec![vec![0]],
        legs: vec![0; n],
    };
    let max_edges = 3 * g as usize + n - 3;
    let mut level = vec![root];
    let mut out: Vec<StableGraph> = Vec::new();
    for e in 1..=max_edges {
        // Shared so the budget is enforced as soon as it is exceeded
        // rather than after a whole level has been built.
        let found: Mutex<HashMap<Vec<u32>, Shape>> = Mutex::new(HashMap::new());
        let over = || {
            Error::Budget(format!(
                "more than {} stable graphs for (g={g}, n={n})",
                opts.budget
            ))
        };
        level.par_iter().enumerate().try_for_each(|(i, s)| {
            let mut rng = opts
                .shuffle_seed
                .map(|seed| ChaCha8Rng::seed_from_u64(seed ^ ((e as u64) << 32) ^ i as u64));
            for child in splits(s) {
                let child = match rng.as_mut() {
                    Some(r) => {
                        let mut order: Vec<usize> = (0..child.len()).collect();
                        order.shuffle(r);
                        child.permuted(&order)
                    }
                    None => child,
                };
                let canon = canonicalize(&child);
                let mut found = found.lock().unwrap();
                found.entry(canon.code).or_insert_with(|| child.permuted(&canon.order));
                if out.len() + found.len() > opts.budget {
                    return Err(over());
                }
            }
            Ok(())
        })?;
        let found = found.into_inner().unwrap();
        let mut shapes: Vec<(Vec<u32>, Shape)> = found.into_iter().collect();
        shapes.sort_by(|a, b| (a.1.len(), &a.0).cmp(&(b.1.len(), &b.0)));
        level = shapes.into_iter().map(|(_, s)| s).collect();
        let graphs: Vec<StableGraph> = level
            .par_iter()
            .map(|s| StableGraph::from_shape(s.clone()))
            .collect::<Result<_>>()?;
        out.extend(graphs);
    }
    Ok(out)
}

/// Every graph obtained by inserting one edge at a single vertex.
fn splits(s: &Shape) -> Vec<Shape> {
    let mut out = Vec::new();
    for v in 0..s.len() {
        if s.genera[v] >= 1 {
            let mut t = s.clone();
            t.genera[v] -= 1;
            t.adj[v][v] += 1;
            out.push(t);
        }
        split_vertex(s, v, &mut out);
    }
    out
}

fn split_vertex(s: &Shape, v: usize, out: &mut Vec<Shape>) {
    let nv = s.len();
    let loops = s.adj[v][v];
    let neighbours: Vec<usize> = (0..nv).filter(|&w| w != v && s.adj[v][w] > 0).collect();
    let legs: Vec<usize> = (0..s.legs.len()).filter(|&i| s.legs[i] == v).collect();
    let valence = s.valence(v);

    // choice per neighbour: how many parallel edges move to the new vertex
    let mut moved = vec![0u32; neighbours.len()];
    loop {
        let moved_edges: u32 = moved.iter().sum();
        for leg_mask in 0u64..(1u64 << legs.len()) {
            let moved_legs = leg_mask.count_ones();
            // loops: a stay at v, b become v-new edges, c move to new
            for c in 0..=loops {
                for b in 0..=loops - c {
                    let a = loops - b - c;
                    let n_new = moved_edges + moved_legs + b + 2 * c + 1;
                    let n_old = valence + 2 - n_new;
                    for g1 in 0..=s.genera[v] {
                        let g2 = s.genera[v] - g1;
                        if 2 * g1 as i64 - 2 + n_old as i64 <= 0 || 2 * g2 as i64 - 2 + n_new as i64 <= 0 {
                            continue;
                        }
                        let mut t = s.clone();
                        for row in t.adj.iter_mut() {
                            row.push(0);
                        }
                        t.adj.push(vec![0; nv + 1]);
                        t.genera[v] = g1;
                        t.genera.push(g2);
                        for (idx, &w) in neighbours.iter().enumerate() {
                            let m = moved[idx];
                            t.adj[v][w] -= m;
                            t.adj[w][v] -= m;
                            t.adj[nv][w] += m;
                            t.adj[w][nv] += m;
                        }
                        t.adj[v][v] = a;
                        t.adj[nv][nv] = c;
                        t.adj[v][nv] = b + 1;
                        t.adj[nv][v] = b + 1;
                        for (bit, &leg) in legs.iter().enumerate() {
                            if leg_mask >> bit & 1 == 1 {
                                t.legs[leg] = nv;
                            }
                        }
                        out.push(t);
                    }
                }
            }
        }
        let mut i = 0;
        loop {
            if i == neighbours.len() {
                return;
            }
            if moved[i] < s.adj[v][neighbours[i]] {
                moved[i] += 1;
                break;
            }
            moved[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_censuses() {
        let opts = EnumerationOptions::default();
        let g2 = enumerate_stable_graphs(2, 0, &opts).unwrap();
        let mut es: Vec<usize> = g2.iter().map(|x| x.num_edges()).collect();
        es.sort();
        assert_eq!(es, vec![1, 1, 2, 2, 3, 3]);
        assert_eq!(enumerate_stable_graphs(1, 1, &opts).unwrap().len(), 1);
        assert_eq!(enumerate_stable_graphs(0, 4, &opts).unwrap().len(), 3);
        assert_eq!(enumerate_stable_graphs(0, 3, &opts).unwrap().len(), 0);
        assert!(matches!(enumerate_stable_graphs(1, 0, &opts), Err(Error::Unstable { .. })));
    }

    #[test]
    fn budget_is_enforced() {
        let opts = EnumerationOptions {
            budget: 10,
            shuffle_seed: None,
        };
        assert!(matches!(enumerate_stable_graphs(3, 0, &opts), Err(Error::Budget(_))));
    }

    #[test]
    fn shuffling_does_not_change_the_census() {
        for (g, n) in [(2, 1), (3, 0), (1, 3), (0, 6)] {
            let plain = enumerate_stable_graphs(g, n, &EnumerationOptions::default()).unwrap();
            let shuffled = enumerate_stable_graphs(
                g,
                n,
                &EnumerationOptions {
                    shuffle_seed: Some(99),
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(plain, shuffled, "(g={g}, n={n})");
        }
    }
}
