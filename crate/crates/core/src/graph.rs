//! Finite directed graphs with named vertices and edges.
//!
//! Vertex and edge order is fixed at construction and fixes matrix indexing.
//! The adjacency matrix is indexed (target, source).

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use std::collections::{HashMap, VecDeque};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<String>,
    source: Vec<VertexId>,
    target: Vec<VertexId>,
    vindex: HashMap<String, VertexId>,
    eindex: HashMap<String, EdgeId>,
}

/// A nonempty sequence of composable edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    pub edges: Vec<EdgeId>,
}

impl Graph {
    pub fn new<V, E, S>(vertices: &[V], edges: &[(E, S, S)]) -> Result<Self>
    where
        V: AsRef<str>,
        E: AsRef<str>,
        S: AsRef<str>,
    {
        let mut g = Graph::empty();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (e, s, t) in edges {
            g.add_edge(e.as_ref(), s.as_ref(), t.as_ref())?;
        }
        Ok(g)
    }

    pub fn empty() -> Self {
        Graph {
            vertices: Vec::new(),
            edges: Vec::new(),
            source: Vec::new(),
            target: Vec::new(),
            vindex: HashMap::new(),
            eindex: HashMap::new(),
        }
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<VertexId> {
        if self.vindex.contains_key(id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        let v = self.vertices.len();
        self.vertices.push(id.to_string());
        self.vindex.insert(id.to_string(), v);
        Ok(v)
    }

    pub fn add_edge(&mut self, id: &str, src: &str, dst: &str) -> Result<EdgeId> {
        if self.eindex.contains_key(id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        let s = self.vertex(src)?;
        let t = self.vertex(dst)?;
        Ok(self.push_edge(id.to_string(), s, t))
    }

    pub(crate) fn push_edge(&mut self, id: String, s: VertexId, t: VertexId) -> EdgeId {
        let e = self.edges.len();
        self.eindex.insert(id.clone(), e);
        self.edges.push(id);
        self.source.push(s);
        self.target.push(t);
        e
    }

    pub fn vertex(&self, id: &str) -> Result<VertexId> {
        self.vindex.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<EdgeId> {
        self.eindex.get(id).copied().ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edges
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.source[e]
    }

    pub fn target(&self, e: EdgeId) -> VertexId {
        self.target[e]
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).filter(move |&e| self.source[e] == v)
    }

    pub fn composable(&self, e: EdgeId, f: EdgeId) -> bool {
        self.target[e] == self.source[f]
    }

    pub fn is_path(&self, edges: &[EdgeId]) -> bool {
        edges.iter().all(|&e| e < self.edges.len())
            && edges.windows(2).all(|w| self.composable(w[0], w[1]))
    }

    pub fn path(&self, edges: Vec<EdgeId>) -> Result<PathWord> {
        if edges.is_empty() {
            return Err(Error::InvalidPath("empty word".into()));
        }
        for w in edges.windows(2) {
            if !self.composable(w[0], w[1]) {
                return Err(Error::NotComposable(
                    self.edge_name(w[0]).into(),
                    self.edge_name(w[1]).into(),
                ));
            }
        }
        Ok(PathWord { edges })
    }

    pub fn word_name(&self, edges: &[EdgeId]) -> String {
        edges.iter().map(|&e| self.edge_name(e)).collect::<Vec<_>>().join(",")
    }

    /// Entry (v, w) counts edges with source w and target v.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut counts = vec![0i64; n * n];
        for e in 0..self.edges.len() {
            counts[self.target[e] * n + self.source[e]] += 1;
        }
        let mut m = IntMatrix::zeros(n, n);
        for v in 0..n {
            for w in 0..n {
                m.set(v, w, BigInt::from(counts[v * n + w]));
            }
        }
        m
    }

    /// reach[v][w]: some path of length >= 1 runs from v to w.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.vertices.len();
        let mut reach = vec![vec![false; n]; n];
        for (v, row) in reach.iter_mut().enumerate() {
            let mut queue: VecDeque<VertexId> = VecDeque::new();
            for e in self.out_edges(v) {
                let t = self.target[e];
                if !row[t] {
                    row[t] = true;
                    queue.push_back(t);
                }
            }
            while let Some(u) = queue.pop_front() {
                for e in self.out_edges(u) {
                    let t = self.target[e];
                    if !row[t] {
                        row[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        reach
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(self.reachability().iter().all(|row| row.iter().all(|&b| b)))
    }

    /// Least k with A^k entrywise positive, searched up to (d-1)^2 + 1.
    pub fn primitivity_exponent(&self) -> Result<Option<usize>> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let base = self.adjacency_matrix().positivity();
        let bound = (n - 1) * (n - 1) + 1;
        let mut power = base.clone();
        for k in 1..=bound {
            if power.iter().all(|row| row.iter().all(|&b| b)) {
                return Ok(Some(k));
            }
            power = bool_product(&power, &base);
        }
        Ok(None)
    }

    pub fn is_primitive(&self) -> Result<(bool, Option<usize>)> {
        let k = self.primitivity_exponent()?;
        Ok((k.is_some(), k))
    }

    /// All paths of length n, lexicographic by edge index.
    pub fn paths_of_length(&self, n: usize, from: Option<VertexId>, to: Option<VertexId>) -> Vec<PathWord> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut stack: Vec<EdgeId> = Vec::with_capacity(n);
        self.extend_paths(n, from, to, &mut stack, &mut out);
        out
    }

    fn extend_paths(
        &self,
        n: usize,
        from: Option<VertexId>,
        to: Option<VertexId>,
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<PathWord>,
    ) {
        if stack.len() == n {
            if to.is_none_or(|t| self.target[*stack.last().unwrap()] == t) {
                out.push(PathWord { edges: stack.clone() });
            }
            return;
        }
        for e in 0..self.edges.len() {
            let ok = match stack.last() {
                None => from.is_none_or(|v| self.source[e] == v),
                Some(&p) => self.target[p] == self.source[e],
            };
            if ok {
                stack.push(e);
                self.extend_paths(n, from, to, stack, out);
                stack.pop();
            }
        }
    }

    /// Number of paths of length n, by matrix powering.
    pub fn count_paths(&self, n: usize) -> BigInt {
        let a = self.adjacency_matrix();
        let mut p = IntMatrix::identity(a.rows());
        for _ in 0..n {
            p = p.mul(&a);
        }
        (0..p.rows()).flat_map(|i| (0..p.cols()).map(move |j| (i, j))).map(|(i, j)| p.get(i, j).clone()).sum()
    }

    /// Higher block graph: vertices are paths of length K-1, edges paths of length K.
    pub fn higher_block_graph(&self, k: usize) -> Result<Graph> {
        if k < 2 {
            return Err(Error::Precondition("block length must be at least 2".into()));
        }
        let verts = self.paths_of_length(k - 1, None, None);
        let mut g = Graph::empty();
        let mut index: HashMap<Vec<EdgeId>, VertexId> = HashMap::new();
        for w in &verts {
            let v = g.add_vertex(&self.word_name(&w.edges))?;
            index.insert(w.edges.clone(), v);
        }
        for w in self.paths_of_length(k, None, None) {
            let s = index[&w.edges[..k - 1]];
            let t = index[&w.edges[1..]];
            g.push_edge(self.word_name(&w.edges), s, t);
        }
        Ok(g)
    }

    /// Shortest cycle (as an edge list) using only edges accepted by `allowed`.
    pub fn shortest_cycle<F: Fn(EdgeId) -> bool>(&self, allowed: F) -> Option<Vec<EdgeId>> {
        let mut best: Option<Vec<EdgeId>> = None;
        for start in 0..self.vertices.len() {
            // BFS from start over allowed edges; a cycle closes when an edge returns to start
            let mut pred: Vec<Option<EdgeId>> = vec![None; self.vertices.len()];
            let mut seen = vec![false; self.vertices.len()];
            let mut queue = VecDeque::new();
            seen[start] = true;
            queue.push_back(start);
            let mut found: Option<Vec<EdgeId>> = None;
            'bfs: while let Some(u) = queue.pop_front() {
                for e in self.out_edges(u).filter(|&e| allowed(e)) {
                    let t = self.target[e];
                    if t == start {
                        let mut cyc = vec![e];
                        let mut x = u;
                        while x != start {
                            let pe = pred[x].unwrap();
                            cyc.push(pe);
                            x = self.source[pe];
                        }
                        cyc.reverse();
                        found = Some(cyc);
                        break 'bfs;
                    }
                    if !seen[t] {
                        seen[t] = true;
                        pred[t] = Some(e);
                        queue.push_back(t);
                    }
                }
            }
            if let Some(c) = found {
                if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                    best = Some(c);
                }
            }
        }
        best
    }
}

fn bool_product(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}
