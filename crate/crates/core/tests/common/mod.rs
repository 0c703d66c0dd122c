#![allow(dead_code)]

use num_complex::Complex64 as C;
use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;

use qaoa_decode::gf2::BitVector;
use qaoa_decode::Code;

/// Simple undirected graph as a sorted edge list (0-indexed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cubic {
    pub v: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Cubic {
    fn normalized(v: usize, mut edges: Vec<(usize, usize)>) -> Self {
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        Self { v, edges }
    }

    /// Simple graph with edge multiplicities as weights.
    fn weighted(&self) -> UnGraph<(), usize> {
        let mut g = UnGraph::new_undirected();
        let nodes: Vec<_> = (0..self.v).map(|_| g.add_node(())).collect();
        for w in self.edges.chunk_by(|a, b| a == b) {
            g.add_edge(nodes[w[0].0], nodes[w[0].1], w.len());
        }
        g
    }

    fn is_simple(&self) -> bool {
        self.edges.windows(2).all(|w| w[0] != w[1])
    }

    // cheap isomorphism invariant: sorted per-vertex (triangles, distance-2 reach)
    fn signature(&self) -> Vec<(usize, usize)> {
        let mut adj = vec![Vec::new(); self.v];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut sig: Vec<(usize, usize)> = (0..self.v)
            .map(|x| {
                let tri = adj[x]
                    .iter()
                    .flat_map(|&a| adj[x].iter().map(move |&b| (a, b)))
                    .filter(|&(a, b)| a < b && adj[a].contains(&b))
                    .count();
                let mut second: Vec<usize> = adj[x].iter().flat_map(|&a| adj[a].iter().copied()).collect();
                second.sort_unstable();
                second.dedup();
                (tri, second.len())
            })
            .collect();
        sig.sort_unstable();
        sig
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.v];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.edges {
                for (p, q) in [(a, b), (b, a)] {
                    if p == x && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn disjoint_union(&self, other: &Cubic) -> Cubic {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (a + self.v, b + self.v)));
        Cubic::normalized(self.v + other.v, edges)
    }
}

fn insert_unique(classes: &mut Vec<(Cubic, Vec<(usize, usize)>, UnGraph<(), usize>)>, g: Cubic) {
    let sig = g.signature();
    let pg = g.weighted();
    if classes
        .iter()
        .any(|(_, s, h)| *s == sig && is_isomorphic_matching(h, &pg, |_, _| true, |a, b| a == b))
    {
        return;
    }
    classes.push((g, sig, pg));
}

/// Disjoint unions of at least two connected pieces with `v` vertices in total.
fn unions(by_size: &[Vec<Cubic>], v: usize) -> Vec<Cubic> {
    fn rec(by_size: &[Vec<Cubic>], acc: &Cubic, parts: usize, left: usize, min: (usize, usize), out: &mut Vec<Cubic>) {
        if left == 0 {
            if parts >= 2 {
                out.push(acc.clone());
            }
            return;
        }
        for (lv, gs) in by_size.iter().enumerate().skip(min.0) {
            let size = 2 * (lv + 1);
            if size > left {
                break;
            }
            let start = if lv == min.0 { min.1 } else { 0 };
            for (i, g) in gs.iter().enumerate().skip(start) {
                rec(by_size, &acc.disjoint_union(g), parts + 1, left - size, (lv, i), out);
            }
        }
    }
    let mut out = Vec::new();
    rec(by_size, &Cubic::normalized(0, Vec::new()), 0, v, (0, 0), &mut out);
    out
}

/// Connected simple cubic graphs on `4, 6, ..., max_v` vertices, by vertex
/// count. Loopless cubic multigraphs are grown from the theta graph by
/// subdividing two edges (possibly the same one twice) and joining the new
/// vertices; the simple ones are kept at each size.
pub fn connected_cubic_graphs(max_v: usize) -> Vec<Vec<Cubic>> {
    let theta = Cubic::normalized(2, vec![(0, 1), (0, 1), (0, 1)]);
    // connected multigraphs indexed by (vertices / 2 − 1)
    let mut by_size: Vec<Vec<Cubic>> = vec![vec![theta]];
    let mut levels = Vec::new();
    let mut v = 2;
    while v + 2 <= max_v {
        let mut classes = Vec::new();
        // disconnected multigraphs are needed as parents: a bridge cannot be
        // inserted into a connected graph without splitting it first
        let mut parents: Vec<Cubic> = by_size.last().unwrap().clone();
        parents.extend(unions(&by_size, v));
        for g in &parents {
            let m = g.edges.len();
            for i in 0..m {
                for j in i..m {
                    let (x, y) = (v, v + 1);
                    let (a, b) = g.edges[i];
                    let mut edges: Vec<(usize, usize)> = g
                        .edges
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, &e)| e)
                        .collect();
                    if i == j {
                        edges.extend([(a, x), (x, y), (y, b), (x, y)]);
                    } else {
                        let (c, d) = g.edges[j];
                        edges.extend([(a, x), (x, b), (c, y), (y, d), (x, y)]);
                    }
                    insert_unique(&mut classes, Cubic::normalized(v + 2, edges));
                }
            }
        }
        let connected: Vec<Cubic> = classes.into_iter().map(|c| c.0).filter(Cubic::is_connected).collect();
        levels.push(connected.iter().filter(|g| g.is_simple()).cloned().collect());
        by_size.push(connected);
        v += 2;
    }
    levels
}

/// All simple cubic graphs up to `max_v` vertices, connected or not.
pub fn all_cubic_graphs(max_v: usize) -> Vec<Cubic> {
    let connected: Vec<Cubic> = connected_cubic_graphs(max_v).into_iter().flatten().collect();
    // multisets of connected components, built in nondecreasing component index
    let mut out = Vec::new();
    let mut stack: Vec<(Cubic, usize)> = connected.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    while let Some((g, last)) = stack.pop() {
        for (i, c) in connected.iter().enumerate().skip(last) {
            if g.v + c.v <= max_v {
                stack.push((g.disjoint_union(c), i));
            }
        }
        out.push(g);
    }
    out.sort_by(|a, b| a.v.cmp(&b.v).then(a.edges.cmp(&b.edges)));
    out
}

/// Exhaustive minimum-weight elements of the coset with syndrome `s`.
pub fn brute_force_coset_leaders(code: &Code, s: &BitVector) -> Vec<BitVector> {
    let len = code.error_len();
    let members: Vec<BitVector> = (0..1u64 << len)
        .map(|x| BitVector::from_u64(x, len))
        .filter(|e| &code.syndrome(e).unwrap() == s)
        .collect();
    let best = members.iter().map(|e| code.error_weight(e)).min().unwrap();
    members.into_iter().filter(|e| code.error_weight(e) == best).collect()
}

pub type Dense = Vec<Vec<C>>;

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![C::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![C::new(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Full-matrix QAOA state: `e^{−iβ ΣX}` as a Kronecker product of 2×2 rotations,
/// `e^{−iγC}` as a dense diagonal, applied to `|+⟩`.
pub fn dense_qaoa_state(diagonal: &[f64], gammas: &[f64], betas: &[f64]) -> Vec<C> {
    let dim = diagonal.len();
    let m = dim.trailing_zeros();
    let mut psi: Vec<C> = vec![C::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    for (&g, &b) in gammas.iter().zip(betas) {
        let mut cost = vec![vec![C::new(0.0, 0.0); dim]; dim];
        for (i, &d) in diagonal.iter().enumerate() {
            cost[i][i] = C::new(0.0, -g * d).exp();
        }
        let r: Dense = vec![
            vec![C::new(b.cos(), 0.0), C::new(0.0, -b.sin())],
            vec![C::new(0.0, -b.sin()), C::new(b.cos(), 0.0)],
        ];
        let mut mixer: Dense = vec![vec![C::new(1.0, 0.0)]];
        for _ in 0..m {
            mixer = kron(&mixer, &r);
        }
        let u = dense_mul(&mixer, &cost);
        psi = (0..dim).map(|i| (0..dim).map(|j| u[i][j] * psi[j]).sum()).collect();
    }
    psi
}
