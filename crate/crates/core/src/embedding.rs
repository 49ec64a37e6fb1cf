//! Seed data (G, H, xi0, xi1): hypothesis checks, superscripts, quotient graph
//! and completion tables.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use std::collections::{HashSet, VecDeque};
use std::fmt;

#[derive(Clone, Debug)]
pub struct EmbeddingPair {
    pub g: Graph,
    pub h: Graph,
    xi0_v: Vec<VertexId>,
    xi1_v: Vec<VertexId>,
    xi0_e: Vec<EdgeId>,
    xi1_e: Vec<EdgeId>,
    // per G-edge: (superscript, H-edge) when the edge lies in an image
    image: Vec<Option<(u8, EdgeId)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub pass: bool,
    pub witness: Option<String>,
}

impl Check {
    fn ok() -> Self {
        Check { pass: true, witness: None }
    }

    fn fail(w: String) -> Self {
        Check { pass: false, witness: Some(w) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub h0: Check,
    pub h1: Check,
    pub h2: Check,
    pub primitive: Check,
    /// Informational: H contains a cycle, so X_H is nonempty.
    pub h_has_cycle: bool,
}

impl HypothesisReport {
    pub fn standing(&self) -> bool {
        self.h0.pass && self.h1.pass && self.h2.pass && self.primitive.pass
    }

    pub fn failures(&self) -> Vec<(&'static str, &Check)> {
        [("H0", &self.h0), ("H1", &self.h1), ("H2", &self.h2), ("primitive", &self.primitive)]
            .into_iter()
            .filter(|(_, c)| !c.pass)
            .collect()
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, c) in
            [("H0", &self.h0), ("H1", &self.h1), ("H2", &self.h2), ("primitive", &self.primitive)]
        {
            match (&c.pass, &c.witness) {
                (true, _) => writeln!(f, "{name} passes")?,
                (false, Some(w)) => writeln!(f, "{name} fails at {w}")?,
                (false, None) => writeln!(f, "{name} fails")?,
            }
        }
        if !self.h_has_cycle {
            writeln!(f, "note: H has no cycle")?;
        }
        Ok(())
    }
}

/// The quotient graph G_xi with the edge map tau.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    pub graph: Graph,
    pub tau: Vec<EdgeId>,
}

/// A xi-tail: a path inside xi(H^1) leading to a cycle inside xi(H^1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tail {
    pub lead: Vec<EdgeId>,
    pub cycle: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct CompletionTables {
    /// (a) per vertex: an infinite forward path inside xi(H^1), if any.
    pub tail: Vec<Option<Tail>>,
    /// (b) per vertex: shortest nonempty path of non-xi edges ending at a vertex with a tail.
    pub nonxi_to_tail: Vec<Option<Vec<EdgeId>>>,
    /// (c) per vertex: shortest path whose last edge is non-xi.
    pub to_nonxi: Vec<Option<Vec<EdgeId>>>,
}

impl EmbeddingPair {
    /// Builds the pair from separate vertex maps; both edge maps must be
    /// injective graph homomorphisms.
    pub fn with_vertex_maps(
        g: Graph,
        h: Graph,
        xi0_v: Vec<VertexId>,
        xi1_v: Vec<VertexId>,
        xi0_e: Vec<EdgeId>,
        xi1_e: Vec<EdgeId>,
    ) -> Result<Self> {
        let nv = h.vertex_count();
        let ne = h.edge_count();
        if xi0_v.len() != nv || xi1_v.len() != nv || xi0_e.len() != ne || xi1_e.len() != ne {
            return Err(Error::NotHomomorphism("maps must be total on H".into()));
        }
        for (vmap, emap, label) in [(&xi0_v, &xi0_e, "xi0"), (&xi1_v, &xi1_e, "xi1")] {
            if vmap.iter().any(|&v| v >= g.vertex_count()) || emap.iter().any(|&e| e >= g.edge_count()) {
                return Err(Error::NotHomomorphism(format!("{label} maps outside G")));
            }
            if vmap.iter().collect::<HashSet<_>>().len() != nv
                || emap.iter().collect::<HashSet<_>>().len() != ne
            {
                return Err(Error::NotHomomorphism(format!("{label} is not injective")));
            }
            for y in 0..ne {
                let x = emap[y];
                if g.source(x) != vmap[h.source(y)] || g.target(x) != vmap[h.target(y)] {
                    return Err(Error::NotHomomorphism(format!(
                        "{label}({}) = {} does not respect endpoints",
                        h.edge_name(y),
                        g.edge_name(x)
                    )));
                }
            }
        }
        let mut image = vec![None; g.edge_count()];
        for y in 0..ne {
            image[xi1_e[y]] = Some((1u8, y));
        }
        for y in 0..ne {
            image[xi0_e[y]] = Some((0u8, y));
        }
        Ok(EmbeddingPair { g, h, xi0_v, xi1_v, xi0_e, xi1_e, image })
    }

    /// Builds the pair with one shared vertex map, so (H0) holds by construction.
    pub fn new(g: Graph, h: Graph, vmap: Vec<VertexId>, xi0_e: Vec<EdgeId>, xi1_e: Vec<EdgeId>) -> Result<Self> {
        Self::with_vertex_maps(g, h, vmap.clone(), vmap, xi0_e, xi1_e)
    }

    /// Convenience constructor from names.
    pub fn from_names(
        g: Graph,
        h: Graph,
        vmap: &[(&str, &str)],
        xi0: &[(&str, &str)],
        xi1: &[(&str, &str)],
    ) -> Result<Self> {
        let mut vm = vec![usize::MAX; h.vertex_count()];
        for (hv, gv) in vmap {
            vm[h.vertex(hv)?] = g.vertex(gv)?;
        }
        let mut e0 = vec![usize::MAX; h.edge_count()];
        for (he, ge) in xi0 {
            e0[h.edge(he)?] = g.edge(ge)?;
        }
        let mut e1 = vec![usize::MAX; h.edge_count()];
        for (he, ge) in xi1 {
            e1[h.edge(he)?] = g.edge(ge)?;
        }
        Self::new(g, h, vm, e0, e1)
    }

    pub fn xi0_vertex(&self, v: VertexId) -> VertexId {
        self.xi0_v[v]
    }

    pub fn xi_edge(&self, i: u8, y: EdgeId) -> EdgeId {
        if i == 0 {
            self.xi0_e[y]
        } else {
            self.xi1_e[y]
        }
    }

    pub fn in_image(&self, e: EdgeId) -> bool {
        self.image[e].is_some()
    }

    /// The superscript of the embedding containing e.
    pub fn epsilon(&self, e: EdgeId) -> Result<u8> {
        self.image[e].map(|(i, _)| i).ok_or_else(|| Error::NotInImage(self.g.edge_name(e).into()))
    }

    /// (superscript, H-edge) for an edge in the image.
    pub fn preimage(&self, e: EdgeId) -> Option<(u8, EdgeId)> {
        self.image[e]
    }

    /// The partner edge xi^{1-i}(y) of e = xi^i(y).
    pub fn partner(&self, e: EdgeId) -> Option<EdgeId> {
        self.image[e].map(|(i, y)| self.xi_edge(1 - i, y))
    }

    pub fn check_standing_hypotheses(&self) -> HypothesisReport {
        let h0 = match (0..self.h.vertex_count()).find(|&v| self.xi0_v[v] != self.xi1_v[v]) {
            None => Check::ok(),
            Some(v) => Check::fail(self.h.vertex_name(v).to_string()),
        };
        let img0: HashSet<EdgeId> = self.xi0_e.iter().copied().collect();
        let h1 = match (0..self.h.edge_count()).find(|&y| img0.contains(&self.xi1_e[y])) {
            None => Check::ok(),
            Some(y) => Check::fail(self.h.edge_name(y).to_string()),
        };
        let image: HashSet<EdgeId> = self.xi0_e.iter().chain(&self.xi1_e).copied().collect();
        let h2 = match (0..self.h.edge_count()).find(|&y| {
            let x0 = self.xi0_e[y];
            !(0..self.g.edge_count()).any(|x| {
                !image.contains(&x)
                    && self.g.source(x) == self.g.source(x0)
                    && self.g.target(x) == self.g.target(x0)
            })
        }) {
            None => Check::ok(),
            Some(y) => Check::fail(self.h.edge_name(y).to_string()),
        };
        let primitive = match self.g.primitivity_exponent() {
            Ok(Some(_)) => Check::ok(),
            Ok(None) => Check::fail(self.primitivity_witness()),
            Err(_) => Check::fail("empty graph".into()),
        };
        let h_has_cycle = self.h.vertex_count() > 0 && self.h.shortest_cycle(|_| true).is_some();
        HypothesisReport { h0, h1, h2, primitive, h_has_cycle }
    }

    fn primitivity_witness(&self) -> String {
        let reach = self.g.reachability();
        for v in 0..self.g.vertex_count() {
            for w in 0..self.g.vertex_count() {
                if !reach[v][w] {
                    return format!("no path {} -> {}", self.g.vertex_name(v), self.g.vertex_name(w));
                }
            }
        }
        "periodic (imprimitive) graph".to_string()
    }

    pub fn quotient_graph(&self) -> Result<QuotientGraph> {
        let report = self.check_standing_hypotheses();
        if !report.h0.pass {
            return Err(Error::Hypothesis("H0", report.h0.witness.unwrap_or_default()));
        }
        if !report.h1.pass {
            return Err(Error::Hypothesis("H1", report.h1.witness.unwrap_or_default()));
        }
        let mut q = Graph::empty();
        for v in self.g.vertex_names() {
            q.add_vertex(v)?;
        }
        let mut used: HashSet<String> = HashSet::new();
        let mut fresh = |base: String| {
            let mut name = format!("{base}'");
            while used.contains(&name) {
                name.push('\'');
            }
            used.insert(name.clone());
            name
        };
        let mut tau = vec![usize::MAX; self.g.edge_count()];
        for e in 0..self.g.edge_count() {
            if tau[e] != usize::MAX {
                continue;
            }
            match self.image[e] {
                Some((_, y)) => {
                    let name = fresh(self.h.edge_name(y).to_string());
                    let qe = q.push_edge(name, self.g.source(e), self.g.target(e));
                    tau[self.xi0_e[y]] = qe;
                    tau[self.xi1_e[y]] = qe;
                }
                None => {
                    let name = fresh(self.g.edge_name(e).to_string());
                    tau[e] = q.push_edge(name, self.g.source(e), self.g.target(e));
                }
            }
        }
        Ok(QuotientGraph { graph: q, tau })
    }

    pub fn completion_tables(&self) -> Result<CompletionTables> {
        let g = &self.g;
        let n = g.vertex_count();
        for v in 0..n {
            if g.out_edges(v).next().is_none() {
                return Err(Error::DeadEnd(g.vertex_name(v).to_string()));
            }
        }
        // vertices lying on a cycle inside the image, with a shortest such cycle
        let mut on_cycle: Vec<Option<Vec<EdgeId>>> = vec![None; n];
        for (v, slot) in on_cycle.iter_mut().enumerate() {
            *slot = self.shortest_image_cycle_through(v);
        }
        let mut tail = vec![None; n];
        for (v, slot) in tail.iter_mut().enumerate() {
            // BFS inside the image for the nearest vertex on an image cycle
            let mut pred: Vec<Option<EdgeId>> = vec![None; n];
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([v]);
            seen[v] = true;
            while let Some(u) = queue.pop_front() {
                if let Some(c) = &on_cycle[u] {
                    let mut lead = Vec::new();
                    let mut x = u;
                    while x != v {
                        let e = pred[x].unwrap();
                        lead.push(e);
                        x = g.source(e);
                    }
                    lead.reverse();
                    *slot = Some(Tail { lead, cycle: c.clone() });
                    break;
                }
                for e in g.out_edges(u).filter(|&e| self.in_image(e)) {
                    let t = g.target(e);
                    if !seen[t] {
                        seen[t] = true;
                        pred[t] = Some(e);
                        queue.push_back(t);
                    }
                }
            }
        }
        let has_tail: Vec<bool> = tail.iter().map(Option::is_some).collect();
        let nonxi_to_tail =
            (0..n).map(|v| self.shortest_path_to(v, |e| !self.in_image(e), |w, _| has_tail[w])).collect();
        let to_nonxi = (0..n).map(|v| self.shortest_path_to(v, |_| true, |_, e| !self.in_image(e))).collect();
        Ok(CompletionTables { tail, nonxi_to_tail, to_nonxi })
    }

    fn shortest_image_cycle_through(&self, v: VertexId) -> Option<Vec<EdgeId>> {
        let g = &self.g;
        let n = g.vertex_count();
        let mut pred: Vec<Option<EdgeId>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(u) = queue.pop_front() {
            for e in g.out_edges(u).filter(|&e| self.in_image(e)) {
                let t = g.target(e);
                if t == v {
                    let mut cyc = vec![e];
                    let mut x = u;
                    while x != v {
                        let pe = pred[x].unwrap();
                        cyc.push(pe);
                        x = g.source(pe);
                    }
                    cyc.reverse();
                    return Some(cyc);
                }
                if !seen[t] {
                    seen[t] = true;
                    pred[t] = Some(e);
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Shortest nonempty path from v over `allowed` edges whose final (vertex, edge) satisfies `goal`.
    fn shortest_path_to<A, F>(&self, v: VertexId, allowed: A, goal: F) -> Option<Vec<EdgeId>>
    where
        A: Fn(EdgeId) -> bool,
        F: Fn(VertexId, EdgeId) -> bool,
    {
        let g = &self.g;
        let n = g.vertex_count();
        let mut pred: Vec<Option<EdgeId>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([v]);
        let rebuild = |pred: &Vec<Option<EdgeId>>, last: EdgeId| {
            let mut path = vec![last];
            let mut x = g.source(last);
            while x != v {
                let e = pred[x].unwrap();
                path.push(e);
                x = g.source(e);
            }
            path.reverse();
            path
        };
        seen[v] = true;
        while let Some(u) = queue.pop_front() {
            for e in g.out_edges(u).filter(|&e| allowed(e)) {
                let t = g.target(e);
                if goal(t, e) {
                    return Some(rebuild(&pred, e));
                }
                if !seen[t] {
                    seen[t] = true;
                    pred[t] = Some(e);
                    queue.push_back(t);
                }
            }
        }
        None
    }
}

/// Standard desk examples.
pub mod examples {
    use super::*;

    /// One vertex, G-edges a, b (xi0(h) = a, xi1(h) = b). Fails only (H2).
    pub fn full2() -> EmbeddingPair {
        let g = Graph::new(&["v"], &[("a", "v", "v"), ("b", "v", "v")]).unwrap();
        let h = Graph::new(&["v"], &[("h", "v", "v")]).unwrap();
        EmbeddingPair::from_names(g, h, &[("v", "v")], &[("h", "a")], &[("h", "b")]).unwrap()
    }

    /// One vertex, G-edges a, b, c (xi0(h) = a, xi1(h) = b, c outside the image).
    pub fn full3() -> EmbeddingPair {
        let g = Graph::new(&["v"], &[("a", "v", "v"), ("b", "v", "v"), ("c", "v", "v")]).unwrap();
        let h = Graph::new(&["v"], &[("h", "v", "v")]).unwrap();
        EmbeddingPair::from_names(g, h, &[("v", "v")], &[("h", "a")], &[("h", "b")]).unwrap()
    }
}
