//! Canonical labelling of small vertex-decorated multigraphs by colour
//! refinement and individualization.

/// Multigraph with genus-decorated vertices and labelled legs. `adj` is
/// symmetric; `adj[v][v]` counts loops at `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Shape {
    pub genera: Vec<u32>,
    pub adj: Vec<Vec<u32>>,
    /// `legs[i]` is the vertex carrying leg `i`.
    pub legs: Vec<usize>,
}

impl Shape {
    pub fn len(&self) -> usize {
        self.genera.len()
    }

    /// Number of half-edges at `v`, legs included.
    pub fn valence(&self, v: usize) -> u32 {
        let mut n: u32 = self.adj[v].iter().sum::<u32>() + self.adj[v][v];
        n += self.legs.iter().filter(|&&x| x == v).count() as u32;
        n
    }

    pub fn edge_count(&self) -> u32 {
        let mut e = 0;
        for i in 0..self.len() {
            for j in i..self.len() {
                e += self.adj[i][j];
            }
        }
        e
    }

    pub fn permuted(&self, order: &[usize]) -> Shape {
        // order[p] = old vertex placed at position p
        let mut pos = vec![0; order.len()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let genera = order.iter().map(|&v| self.genera[v]).collect();
        let adj = order
            .iter()
            .map(|&a| order.iter().map(|&b| self.adj[a][b]).collect())
            .collect();
        let legs = self.legs.iter().map(|&v| pos[v]).collect();
        Shape { genera, adj, legs }
    }

    fn code(&self, order: &[usize]) -> Vec<u32> {
        let v = order.len();
        let mut pos = vec![0u32; v];
        for (p, &x) in order.iter().enumerate() {
            pos[x] = p as u32;
        }
        let mut out = Vec::with_capacity(v + v * (v + 1) / 2 + self.legs.len());
        out.extend(order.iter().map(|&x| self.genera[x]));
        for i in 0..v {
            for j in i..v {
                out.push(self.adj[order[i]][order[j]]);
            }
        }
        out.extend(self.legs.iter().map(|&x| pos[x]));
        out
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(s).unwrap()).collect()
}

fn initial_colors(s: &Shape) -> Vec<usize> {
    let sigs: Vec<Vec<u32>> = (0..s.len())
        .map(|v| {
            let mut sig = vec![s.genera[v], s.adj[v][v], s.valence(v)];
            sig.extend(
                s.legs
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x == v)
                    .map(|(i, _)| i as u32 + 1),
            );
            sig
        })
        .collect();
    rank(&sigs)
}

fn refine(s: &Shape, mut colors: Vec<usize>) -> Vec<usize> {
    let n = s.len();
    let mut classes = colors.iter().collect::<std::collections::BTreeSet<_>>().len();
    loop {
        let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u32)> = (0..n)
                    .filter(|&w| w != v && s.adj[v][w] > 0)
                    .map(|w| (colors[w], s.adj[v][w]))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let count = next.iter().collect::<std::collections::BTreeSet<_>>().len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

pub(crate) struct Canon {
    /// `order[p]` is the input vertex placed at position `p`.
    pub order: Vec<usize>,
    pub code: Vec<u32>,
    /// Vertex permutations preserving the decorated multigraph.
    pub vertex_automorphisms: u64,
}

pub(crate) fn canonicalize(s: &Shape) -> Canon {
    let colors = refine(s, initial_colors(s));
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let mut hits = 0u64;
    search(s, colors, &mut best, &mut hits);
    let (code, order) = best.expect("at least one leaf");
    Canon {
        order,
        code,
        vertex_automorphisms: hits,
    }
}

fn search(s: &Shape, colors: Vec<usize>, best: &mut Option<(Vec<u32>, Vec<usize>)>, hits: &mut u64) {
    let n = s.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    let target = (0..n).find(|&c| counts[c] > 1);
    match target {
        None => {
            let mut order = vec![0; n];
            for (v, &c) in colors.iter().enumerate() {
                order[c] = v;
            }
            let code = s.code(&order);
            match best {
                Some((b, _)) if code > *b => {}
                Some((b, _)) if code == *b => *hits += 1,
                _ => {
                    *best = Some((code, order));
                    *hits = 1;
                }
            }
        }
        Some(c) => {
            for u in (0..n).filter(|&v| colors[v] == c) {
                let split: Vec<usize> = (0..n)
                    .map(|v| 2 * colors[v] + usize::from(v != u))
                    .collect();
                let next = refine(s, rank(&split));
                search(s, next, best, hits);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(genera: Vec<u32>, edges: &[(usize, usize)], legs: Vec<usize>) -> Shape {
        let v = genera.len();
        let mut adj = vec![vec![0; v]; v];
        for &(a, b) in edges {
            adj[a][b] += 1;
            if a != b {
                adj[b][a] += 1;
            }
        }
        Shape { genera, adj, legs }
    }

    fn petersen() -> Shape {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        shape(vec![0; 10], &e, vec![])
    }

    #[test]
    fn relabelling_gives_same_code() {
        let p = petersen();
        let base = canonicalize(&p);
        assert_eq!(base.vertex_automorphisms, 120);
        let order: Vec<usize> = vec![3, 7, 1, 9, 0, 2, 8, 6, 5, 4];
        let q = p.permuted(&order);
        assert_eq!(canonicalize(&q).code, base.code);
    }

    #[test]
    fn legs_break_symmetry() {
        let s = shape(vec![0, 0], &[(0, 1)], vec![0, 0, 1, 1]);
        assert_eq!(canonicalize(&s).vertex_automorphisms, 1);
        let t = shape(vec![0, 0], &[(0, 1), (0, 1), (0, 1)], vec![]);
        assert_eq!(canonicalize(&t).vertex_automorphisms, 2);
    }
}
