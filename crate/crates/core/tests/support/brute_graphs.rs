//! Brute-force stable graph generator: every labelled multigraph up to the
//! edge bound, deduplicated by trying all vertex relabellings.

use std::collections::BTreeMap;

use multicurve::graphs::{enumerate_stable_graphs, EnumerationOptions};

/// Genera, upper-triangular multiplicities (diagonal = loops), legs.
pub type Key = (Vec<u32>, Vec<u32>, Vec<usize>);

fn permutations(v: usize) -> Vec<Vec<usize>> {
    if v == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(v - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, v - 1);
            out.push(q);
        }
    }
    out
}

fn key(genera: &[u32], adj: &[Vec<u32>], legs: &[usize], p: &[usize]) -> Key {
    // p[old] = new
    let v = genera.len();
    let mut g = vec![0; v];
    let mut a = vec![vec![0; v]; v];
    for i in 0..v {
        g[p[i]] = genera[i];
        for j in 0..v {
            a[p[i]][p[j]] = adj[i][j];
        }
    }
    let mut flat = Vec::new();
    for (i, row) in a.iter().enumerate() {
        flat.extend_from_slice(&row[i..]);
    }
    (g, flat, legs.iter().map(|&l| p[l]).collect())
}

/// Canonical key and automorphism order of a labelled graph.
pub fn canonical(genera: &[u32], adj: &[Vec<u32>], legs: &[usize]) -> (Key, u64) {
    let perms = permutations(genera.len());
    let keys: Vec<Key> = perms.iter().map(|p| key(genera, adj, legs, p)).collect();
    let min = keys.iter().min().unwrap().clone();
    let vertex_aut = keys.iter().filter(|k| **k == min).count() as u64;
    let mut aut = vertex_aut;
    let v = genera.len();
    for i in 0..v {
        let l = adj[i][i] as u64;
        aut *= (1..=l).product::<u64>() * 2u64.pow(l as u32);
        for j in i + 1..v {
            aut *= (1..=adj[i][j] as u64).product::<u64>();
        }
    }
    (min, aut)
}

fn connected(adj: &[Vec<u32>]) -> bool {
    let v = adj.len();
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..v {
            if adj[i][j] > 0 && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Distributions of `total` into `slots` nonnegative parts.
fn spread(total: u32, slots: usize) -> Vec<Vec<u32>> {
    if slots == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in spread(total - first, slots - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn brute_force(g: u32, n: usize) -> BTreeMap<Key, u64> {
    let mut found = BTreeMap::new();
    let max_edges = 3 * g + n as u32 - 3;
    let max_vertices = (2 * g + n as u32 - 2) as usize;
    for v in 1..=max_vertices {
        let slots: Vec<(usize, usize)> = (0..v).flat_map(|i| (i..v).map(move |j| (i, j))).collect();
        for e in 1..=max_edges {
            let loops = e as i64 - v as i64 + 1;
            if loops < 0 || loops > g as i64 {
                continue;
            }
            let vertex_genus = g - loops as u32;
            for mult in spread(e, slots.len()) {
                let mut adj = vec![vec![0u32; v]; v];
                for (&(i, j), &m) in slots.iter().zip(&mult) {
                    adj[i][j] = m;
                    adj[j][i] = m;
                }
                if !connected(&adj) {
                    continue;
                }
                for genera in spread(vertex_genus, v) {
                    for code in 0..v.pow(n as u32) {
                        let legs: Vec<usize> = (0..n).map(|i| code / v.pow(i as u32) % v).collect();
                        let stable = (0..v).all(|i| {
                            let val: u32 = adj[i].iter().sum::<u32>()
                                + adj[i][i]
                                + legs.iter().filter(|&&l| l == i).count() as u32;
                            2 * genera[i] + val > 2
                        });
                        if stable {
                            let (k, aut) = canonical(&genera, &adj, &legs);
                            found.insert(k, aut);
                        }
                    }
                }
            }
        }
    }
    found
}

/// Our enumeration mapped into the brute-force canonical form; also checks
/// the automorphism orders.
pub fn from_enumeration(g: u32, n: usize) -> BTreeMap<Key, u64> {
    let list = enumerate_stable_graphs(g, n, &EnumerationOptions::default()).unwrap();
    let mut out = BTreeMap::new();
    for gr in &list {
        let v = gr.num_vertices();
        let mut adj = vec![vec![0u32; v]; v];
        for (a, b) in gr.edges() {
            adj[a][b] += 1;
            if a != b {
                adj[b][a] += 1;
            }
        }
        let (k, aut) = canonical(gr.vertex_genera(), &adj, gr.legs());
        assert_eq!(aut, gr.automorphism_order(), "{gr}");
        assert!(out.insert(k, aut).is_none(), "duplicate {gr}");
    }
    out
}

