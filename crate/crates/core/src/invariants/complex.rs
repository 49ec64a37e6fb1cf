//! The pair complex on the 7-block presentation and its boundary.

use super::groups::cokernel;
use crate::embedding::EmbeddingPair;
use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use std::collections::{HashMap, HashSet};

pub const DEFAULT_WORD_CAP: u128 = 10_000_000;
const BLOCK: usize = 7;

pub type Word = Vec<EdgeId>;
pub type PairWord = (Word, Word);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Containment {
    pub label: String,
    pub checked: usize,
    pub violations: usize,
}

impl Containment {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Carry pair-words: genuinely related windows with a swapped pivot,
/// which the cell listing leaves out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotDiagnostic {
    pub carry_edges: usize,
    /// Carry edges with the pivot at position 6 whose initial pair is off the diagonal.
    pub off_diagonal_sources: usize,
}

#[derive(Clone, Debug)]
pub struct PairComplex {
    pub block_vertices: usize,
    pub block_edges: usize,
    /// V_0 .. V_6
    pub vertex_cells: Vec<Vec<PairWord>>,
    /// E_0 .. E_7
    pub edge_cells: Vec<Vec<PairWord>>,
    pub disjoint: bool,
    pub containments: Vec<Containment>,
    /// Rank of Z[V_6] modulo v - v.alpha.
    pub symmetric_quotient_rank: usize,
    /// Paths of length 7 off the diagonal end in V_6.
    pub long_paths_end_in_top: bool,
    /// One H^6 word per generator, with t(xi0(y)) - t(xi1(y)) over G^0.
    pub boundary: Vec<(Word, Vec<BigInt>)>,
    pub pivot: PivotDiagnostic,
}

impl PairComplex {
    pub fn boundary_vanishes(&self) -> bool {
        self.boundary.iter().all(|(_, v)| v.iter().all(|x| *x == BigInt::from(0)))
    }

    pub fn containments_hold(&self) -> bool {
        self.containments.iter().all(Containment::holds)
    }
}

fn image(p: &EmbeddingPair, i: u8, y: &[EdgeId]) -> Word {
    y.iter().map(|&e| p.xi_edge(i, e)).collect()
}

fn join(x: &[EdgeId], y: &[EdgeId]) -> Word {
    let mut w = x.to_vec();
    w.extend_from_slice(y);
    w
}

/// Cells of length-n pair words: 0 diagonal, k prefix-then-swap, n fully swapped.
fn cells(p: &EmbeddingPair, n: usize) -> Vec<Vec<PairWord>> {
    let mut out = vec![Vec::new(); n + 1];
    for x in p.g.paths_of_length(n, None, None) {
        out[0].push((x.edges.clone(), x.edges));
    }
    for k in 1..=n {
        let ys = p.h.paths_of_length(k, None, None);
        let xs = if k < n { p.g.paths_of_length(n - k, None, None) } else { Vec::new() };
        for y in &ys {
            let (a, b) = (image(p, 0, &y.edges), image(p, 1, &y.edges));
            let start = p.xi0_vertex(p.h.source(y.edges[0]));
            if k == n {
                out[k].push((a.clone(), b.clone()));
                out[k].push((b, a));
                continue;
            }
            for x in xs.iter().filter(|x| p.g.target(*x.edges.last().unwrap()) == start) {
                out[k].push((join(&x.edges, &a), join(&x.edges, &b)));
                out[k].push((join(&x.edges, &b), join(&x.edges, &a)));
            }
        }
    }
    out
}

/// Carry windows of length n with the pivot at position q (1-indexed, q < n).
fn carry_words(p: &EmbeddingPair, n: usize, q: usize) -> Vec<PairWord> {
    let mut out = Vec::new();
    let xs = if q > 1 { p.g.paths_of_length(q - 1, None, None) } else { Vec::new() };
    for y in p.h.paths_of_length(n - q + 1, None, None) {
        let start = p.xi0_vertex(p.h.source(y.edges[0]));
        for i in 0..2u8 {
            let mut a = vec![p.xi_edge(1 - i, y.edges[0])];
            a.extend(image(p, i, &y.edges[1..]));
            let mut b = vec![p.xi_edge(i, y.edges[0])];
            b.extend(image(p, 1 - i, &y.edges[1..]));
            if q == 1 {
                out.push((a, b));
            } else {
                for x in xs.iter().filter(|x| p.g.target(*x.edges.last().unwrap()) == start) {
                    out.push((join(&x.edges, &a), join(&x.edges, &b)));
                }
            }
        }
    }
    out
}

pub fn build_pair_complex(p: &EmbeddingPair) -> Result<PairComplex> {
    build_pair_complex_with_cap(p, DEFAULT_WORD_CAP)
}

pub fn build_pair_complex_with_cap(p: &EmbeddingPair, cap: u128) -> Result<PairComplex> {
    let count = (p.g.edge_count() as u128).checked_pow(BLOCK as u32).unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::SizeGuard { count, cap });
    }
    let vertex_cells = cells(p, BLOCK - 1);
    let edge_cells = cells(p, BLOCK);

    let mut index: HashMap<&PairWord, usize> = HashMap::new();
    let mut disjoint = true;
    for (k, cell) in vertex_cells.iter().enumerate() {
        for w in cell {
            disjoint &= index.insert(w, k).is_none();
        }
    }
    let mut seen = HashSet::new();
    for w in edge_cells.iter().flatten() {
        disjoint &= seen.insert(w);
    }

    let initial = |(a, b): &PairWord| (a[..BLOCK - 1].to_vec(), b[..BLOCK - 1].to_vec());
    let terminal = |(a, b): &PairWord| (a[1..].to_vec(), b[1..].to_vec());
    let mut containments = Vec::new();
    for (j, cell) in edge_cells.iter().enumerate() {
        let want_i = j.saturating_sub(1);
        let want_t = j.min(BLOCK - 1);
        let vi = cell.iter().filter(|w| index.get(&initial(w)) != Some(&want_i)).count();
        let vt = cell.iter().filter(|w| index.get(&terminal(w)) != Some(&want_t)).count();
        containments.push(Containment { label: format!("i(E_{j}) in V_{want_i}"), checked: cell.len(), violations: vi });
        containments.push(Containment { label: format!("t(E_{j}) in V_{want_t}"), checked: cell.len(), violations: vt });
    }

    // paths of length 7 inside the off-diagonal part
    let off: Vec<(&PairWord, PairWord, PairWord)> = edge_cells
        .iter()
        .flatten()
        .map(|w| (w, initial(w), terminal(w)))
        .filter(|(_, s, t)| index.get(s).is_some_and(|&k| k > 0) && index.get(t).is_some_and(|&k| k > 0))
        .collect();
    let mut frontier: HashSet<PairWord> =
        index.iter().filter(|(_, &k)| k > 0).map(|(w, _)| (*w).clone()).collect();
    for _ in 0..BLOCK {
        frontier = off.iter().filter(|(_, s, _)| frontier.contains(s)).map(|(_, _, t)| t.clone()).collect();
    }
    let long_paths_end_in_top = frontier.iter().all(|w| index.get(w) == Some(&(BLOCK - 1)));

    // Z[V_6] / <v - v.alpha>
    let top = &vertex_cells[BLOCK - 1];
    let pos: HashMap<&PairWord, usize> = top.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rel = IntMatrix::zeros(top.len(), top.len());
    for (c, (a, b)) in top.iter().enumerate() {
        let r = pos[&(b.clone(), a.clone())];
        rel.set(c, c, BigInt::from(1));
        let cur = rel.get(r, c) - 1;
        rel.set(r, c, cur);
    }
    let symmetric_quotient_rank = cokernel(&rel).rank;

    let boundary = p
        .h
        .paths_of_length(BLOCK - 1, None, None)
        .into_iter()
        .map(|y| {
            let mut v = vec![BigInt::from(0); p.g.vertex_count()];
            let a = image(p, 0, &y.edges);
            let b = image(p, 1, &y.edges);
            v[p.g.target(*a.last().unwrap())] += 1;
            v[p.g.target(*b.last().unwrap())] -= 1;
            (y.edges, v)
        })
        .collect();

    let carries = carry_words(p, BLOCK, BLOCK - 1);
    let off_diagonal_sources = carries.iter().filter(|w| index.get(&initial(w)) != Some(&0)).count();
    let carry_edges = (1..BLOCK).map(|q| carry_words(p, BLOCK, q).len()).sum();

    Ok(PairComplex {
        block_vertices: p.g.count_paths(BLOCK - 1).try_into().unwrap_or(usize::MAX),
        block_edges: p.g.count_paths(BLOCK).try_into().unwrap_or(usize::MAX),
        vertex_cells,
        edge_cells,
        disjoint,
        containments,
        symmetric_quotient_rank,
        long_paths_end_in_top,
        boundary,
        pivot: PivotDiagnostic { carry_edges, off_diagonal_sources },
    })
}
