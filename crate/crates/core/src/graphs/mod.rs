//! Stable graphs of a surface of genus `g` with `n` labelled boundary legs:
//! connected multigraphs with genus-decorated vertices, every vertex stable,
//! and first Betti number plus vertex genera equal to `g`.

mod canonical;
mod enumerate;

use std::fmt;

use canonical::{canonicalize, Shape};
pub use enumerate::{enumerate_stable_graphs, EnumerationOptions, DEFAULT_GRAPH_BUDGET};

use crate::{Error, Result};

/// Coarse type of a graph: vertices, edges, self-loops, non-loop edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphClass {
    pub v: usize,
    pub e: usize,
    pub s: usize,
    pub t: usize,
}

/// A stable graph in canonical vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableGraph {
    g: u32,
    shape: Shape,
    code: Vec<u32>,
    aut: u64,
}

impl StableGraph {
    /// Builds and canonicalizes a graph from vertex genera, edges as vertex
    /// pairs (equal pairs are loops) and the vertex of each leg.
    pub fn new(genera: Vec<u32>, edges: &[(usize, usize)], legs: Vec<usize>) -> Result<Self> {
        let v = genera.len();
        if v == 0 {
            return Err(Error::InvalidParameter("graph without vertices".into()));
        }
        let mut adj = vec![vec![0u32; v]; v];
        for &(a, b) in edges {
            if a >= v || b >= v {
                return Err(Error::InvalidParameter(format!("edge ({a},{b}) out of range")));
            }
            adj[a][b] += 1;
            if a != b {
                adj[b][a] += 1;
            }
        }
        if let Some(&bad) = legs.iter().find(|&&x| x >= v) {
            return Err(Error::InvalidParameter(format!("leg on missing vertex {bad}")));
        }
        let shape = Shape { genera, adj, legs };
        Self::from_shape(shape)
    }

    pub(crate) fn from_shape(shape: Shape) -> Result<Self> {
        let v = shape.len();
        for i in 0..v {
            if 2 * shape.genera[i] as i64 - 2 + shape.valence(i) as i64 <= 0 {
                return Err(Error::Unstable {
                    g: shape.genera[i],
                    n: shape.valence(i) as usize,
                });
            }
        }
        if !connected(&shape) {
            return Err(Error::InvalidParameter("graph is not connected".into()));
        }
        let e = shape.edge_count() as i64;
        let g = shape.genera.iter().map(|&x| x as i64).sum::<i64>() + e - v as i64 + 1;
        let canon = canonicalize(&shape);
        let shape = shape.permuted(&canon.order);
        let mut aut = canon.vertex_automorphisms;
        for i in 0..v {
            let loops = shape.adj[i][i] as u64;
            aut *= (1..=loops).product::<u64>() << loops;
            for j in i + 1..v {
                aut *= (1..=shape.adj[i][j] as u64).product::<u64>();
            }
        }
        Ok(StableGraph {
            g: g as u32,
            shape,
            code: canon.code,
            aut,
        })
    }

    /// The graph with one vertex of genus `g - k` carrying `k` loops.
    pub fn single_vertex(g: u32, k: u32) -> Result<Self> {
        if k == 0 || k > g {
            return Err(Error::InvalidParameter(format!("need 1 <= k <= g, got k={k}, g={g}")));
        }
        let edges = vec![(0, 0); k as usize];
        Self::new(vec![g - k], &edges, vec![])
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn num_legs(&self) -> usize {
        self.shape.legs.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.shape.len()
    }

    pub fn num_edges(&self) -> usize {
        self.shape.edge_count() as usize
    }

    pub fn vertex_genera(&self) -> &[u32] {
        &self.shape.genera
    }

    /// Vertex carrying each leg.
    pub fn legs(&self) -> &[usize] {
        &self.shape.legs
    }

    /// Edges as vertex pairs `(a, b)` with `a <= b`, in canonical order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let v = self.num_vertices();
        let mut out = Vec::new();
        for i in 0..v {
            for j in i..v {
                for _ in 0..self.shape.adj[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Number of half-edges (legs included) at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.shape.valence(v) as usize
    }

    /// Order of the automorphism group acting on half-edges; legs are
    /// fixed pointwise.
    pub fn automorphism_order(&self) -> u64 {
        self.aut
    }

    pub fn classify(&self) -> GraphClass {
        let s: usize = (0..self.num_vertices()).map(|i| self.shape.adj[i][i] as usize).sum();
        let e = self.num_edges();
        GraphClass {
            v: self.num_vertices(),
            e,
            s,
            t: e - s,
        }
    }

    /// Isomorphism invariant code; equal codes mean isomorphic graphs.
    pub fn canonical_code(&self) -> &[u32] {
        &self.code
    }

    /// `g n V E S T | genera | edges | legs | aut`.
    pub fn to_line(&self) -> String {
        self.to_string()
    }

    pub fn from_line(line: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("malformed graph line {line:?}"));
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(bad());
        }
        let nums = |s: &str| -> Result<Vec<usize>> {
            s.split_whitespace().map(|x| x.parse::<usize>().map_err(|_| bad())).collect()
        };
        let head = nums(parts[0])?;
        if head.len() != 6 {
            return Err(bad());
        }
        let genera: Vec<u32> = nums(parts[1])?.into_iter().map(|x| x as u32).collect();
        let mut edges = Vec::new();
        for tok in parts[2].split_whitespace() {
            let (a, b) = tok.split_once('-').ok_or_else(bad)?;
            edges.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
        }
        let legs = nums(parts[3])?;
        let aut: u64 = parts[4].parse().map_err(|_| bad())?;
        let graph = StableGraph::new(genera, &edges, legs)?;
        let c = graph.classify();
        if head != [graph.g as usize, graph.num_legs(), c.v, c.e, c.s, c.t] || aut != graph.aut {
            return Err(Error::Invariant(format!("graph line header disagrees with its body: {line:?}")));
        }
        Ok(graph)
    }
}

impl fmt::Display for StableGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.classify();
        let genera: Vec<String> = self.shape.genera.iter().map(|x| x.to_string()).collect();
        let edges: Vec<String> = self.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        let legs: Vec<String> = self.shape.legs.iter().map(|x| x.to_string()).collect();
        write!(
            f,
            "{} {} {} {} {} {} | {} | {} | {} | {}",
            self.g,
            self.num_legs(),
            c.v,
            c.e,
            c.s,
            c.t,
            genera.join(" "),
            edges.join(" "),
            legs.join(" "),
            self.aut
        )
    }
}

fn connected(s: &Shape) -> bool {
    let n = s.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if !seen[w] && s.adj[v][w] > 0 {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_and_automorphisms() {
        let theta = StableGraph::new(vec![0, 0], &[(0, 1), (0, 1), (0, 1)], vec![]).unwrap();
        assert_eq!(theta.classify(), GraphClass { v: 2, e: 3, s: 0, t: 3 });
        assert_eq!(theta.automorphism_order(), 12);
        assert_eq!(theta.genus(), 2);

        let dumbbell = StableGraph::new(vec![0, 0], &[(0, 0), (0, 1), (1, 1)], vec![]).unwrap();
        assert_eq!(dumbbell.classify(), GraphClass { v: 2, e: 3, s: 2, t: 1 });
        assert_eq!(dumbbell.automorphism_order(), 8);

        let g22 = StableGraph::single_vertex(2, 2).unwrap();
        assert_eq!(g22.classify(), GraphClass { v: 1, e: 2, s: 2, t: 0 });
        assert_eq!(g22.automorphism_order(), 8);
        let one_loop = StableGraph::new(vec![0], &[(0, 0)], vec![0]).unwrap();
        assert_eq!(one_loop.automorphism_order(), 2);
        assert!(StableGraph::single_vertex(1, 1).is_err());
        assert_eq!(StableGraph::single_vertex(5, 3).unwrap().automorphism_order(), 48);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(StableGraph::new(vec![0, 0], &[(0, 1)], vec![]), Err(Error::Unstable { .. })));
        assert!(StableGraph::new(vec![1, 1], &[], vec![]).is_err());
        assert!(StableGraph::single_vertex(2, 3).is_err());
    }

    #[test]
    fn line_round_trip() {
        let g = StableGraph::new(vec![1, 0], &[(0, 1), (1, 1)], vec![1, 0]).unwrap();
        let line = g.to_line();
        assert_eq!(StableGraph::from_line(&line).unwrap(), g);
        let (body, _) = line.rsplit_once('|').unwrap();
        let tampered = format!("{body}| 7");
        assert!(StableGraph::from_line(&tampered).is_err());
    }
}
