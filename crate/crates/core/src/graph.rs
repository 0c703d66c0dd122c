//! Undirected simple graphs and the MaxCut → generator-decoding reduction.

use std::collections::BTreeSet;

use crate::engine::{run_circuit, AngleSchedule};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::hamiltonian::classical_generator_cost;
use crate::optimizer::{optimize, Objective, Strategy};
use crate::rng::derive_seed;

/// Simple undirected graph; vertices are `0..vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges are normalized to `(min, max)`; self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {}", a + 1)));
            }
            if a >= vertices || b >= vertices {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) outside {vertices} vertices",
                    a + 1,
                    b + 1
                )));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({}, {})", e.0 + 1, e.1 + 1)));
            }
            out.push(e);
        }
        Ok(Self { vertices, edges: out })
    }

    /// Parse an edge list: one 1-indexed `u v` pair per line, `#` comments
    /// allowed. The vertex count is the largest index seen.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_vertex = 0;
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected two vertex indices, found {}", fields.len()),
                });
            }
            let parse = |s: &str| -> Result<usize> {
                match s.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(Error::Parse {
                        line: line_no,
                        msg: format!("`{s}` is not a 1-indexed vertex"),
                    }),
                }
            };
            let (a, b) = (parse(fields[0])?, parse(fields[1])?);
            if a == b {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("self-loop at vertex {a}"),
                });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate edge {a} {b}"),
                });
            }
            max_vertex = max_vertex.max(a).max(b);
            edges.push((a - 1, b - 1));
        }
        Self::new(max_vertex, &edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Number of edges crossing the partition given by `assignment`.
    pub fn cut_value(&self, assignment: &BitVector) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| assignment.get(a) != assignment.get(b))
            .count()
    }

    /// Exhaustive maximum cut and one optimal assignment.
    pub fn brute_force_maxcut(&self) -> (usize, BitVector) {
        assert!(self.vertices <= 30, "brute force limited to 30 vertices");
        let mut best = (0, BitVector::zeros(self.vertices));
        // fixing the last vertex to 0 halves the search
        let half = if self.vertices == 0 { 1 } else { 1u64 << (self.vertices - 1) };
        for x in 0..half {
            let u = BitVector::from_u64(x, self.vertices);
            let c = self.cut_value(&u);
            if c > best.0 {
                best = (c, u);
            }
        }
        best
    }
}

/// Vertex–edge incidence matrix `G` (V × E) and the all-ones target `z`.
///
/// For an assignment `u`, `uG` marks the cut edges, so
/// `cut(u) = E − d_H(uG, z)` and the generator-based decoding objective is
/// maximized exactly by maximum cuts.
pub fn maxcut_to_decoding(g: &Graph) -> Result<(BitMatrix, BitVector)> {
    if g.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut inc = BitMatrix::zeros(g.vertices, g.edges.len());
    for (j, &(a, b)) in g.edges.iter().enumerate() {
        inc.set(a, j, true);
        inc.set(b, j, true);
    }
    Ok((inc, BitVector::ones(g.edges.len())))
}

/// Outcome of level-`p` QAOA on a MaxCut instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxCutRun {
    pub cut: usize,
    pub assignment: BitVector,
    pub f_p: f64,
    pub schedule: AngleSchedule<f64>,
    /// Exhaustive optimum, when `V ≤ 20`.
    pub optimum: Option<usize>,
}

impl MaxCutRun {
    pub fn ratio(&self) -> Option<f64> {
        self.optimum.map(|o| if o == 0 { 1.0 } else { self.cut as f64 / o as f64 })
    }
}

/// Optimize angles for the reduced decoding Hamiltonian, draw `shots`
/// samples and keep the best cut.
pub fn qaoa_maxcut(g: &Graph, p: usize, shots: usize, strategy: Strategy, seed: u64) -> Result<MaxCutRun> {
    let (inc, z) = maxcut_to_decoding(g)?;
    let h = classical_generator_cost::<f64>(&inc, &z)?;
    let obj = Objective::new(&h, p)?;
    let report = optimize(&obj, strategy, derive_seed(seed, &[0]))?;
    let psi = run_circuit(obj.diagonal(), &report.best)?;
    let samples = psi.sample_indices(shots, derive_seed(seed, &[1]))?;
    let mut best = (0, BitVector::zeros(g.vertices));
    for x in samples {
        let u = BitVector::from_u64(x, g.vertices);
        let c = g.cut_value(&u);
        if c > best.0 {
            best = (c, u);
        }
    }
    Ok(MaxCutRun {
        cut: best.0,
        assignment: best.1,
        f_p: report.best_value,
        schedule: report.best,
        optimum: (g.vertices <= 20).then(|| g.brute_force_maxcut().0),
    })
}
