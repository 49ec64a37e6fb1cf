//! Matrices with prescribed Bowen-Franks groups, and seed pairs with
//! prescribed K-groups.

use super::groups::FgAbelianGroup;
use crate::embedding::EmbeddingPair;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// A square matrix A of size >= d0 with entries >= m0 and coker(I - A) = target.
pub fn realize_group_matrix(target: &FgAbelianGroup, d0: usize, m0: u64) -> IntMatrix {
    let mut diag: Vec<BigInt> = std::iter::repeat_n(BigInt::zero(), target.rank).collect();
    diag.extend(target.torsion.iter().cloned());
    // at least one trailing 1, and d >= 2 so that the last row step is unimodular
    let d = (diag.len() + 1).max(d0).max(2);
    diag.resize(d, BigInt::from(1));
    let mut b = IntMatrix::diagonal(&diag);
    let last = d - 1;
    // column ops: make the last row all ones
    for j in 0..last {
        for i in 0..d {
            let v = b.get(i, j) + b.get(i, last);
            b.set(i, j, v);
        }
    }
    // row ops: every other row gets m0 copies of the last row
    let m0 = BigInt::from(m0);
    for i in 0..last {
        for j in 0..d {
            let v = b.get(i, j) + &m0 * b.get(last, j);
            b.set(i, j, v);
        }
    }
    for j in 0..d {
        let v = b.get(last, j) + b.get(0, j);
        b.set(last, j, v);
    }
    b.add(&IntMatrix::identity(d))
}

/// Builds (G, H, xi) with K_0(R^s) = Z^{rank k1} (+) k0_torsion and K_1(R^s) = k1.
pub fn synthesize_seed(k0_torsion: &FgAbelianGroup, k1: &FgAbelianGroup) -> Result<EmbeddingPair> {
    if k0_torsion.rank != 0 {
        return Err(Error::Precondition("K_0 target must be a torsion group".into()));
    }
    let a = realize_group_matrix(k1, 1, 1);
    let d = a.rows();
    let m0 = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| 2 * a.get(i, j).to_u64().expect("small entries") + 1)
        .max()
        .unwrap_or(1);
    let b = realize_group_matrix(k0_torsion, d, m0);
    let dp = b.rows();

    let count = |m: &IntMatrix, i: usize, j: usize| m.get(i, j).to_usize().expect("small entries");
    let gv: Vec<String> = (0..dp).map(|i| format!("v{i}")).collect();
    let hv: Vec<String> = (0..d).map(|i| format!("v{i}")).collect();
    // adjacency A^T: A(i, j) edges from i to j
    let mut h = Graph::empty();
    for v in &hv {
        h.add_vertex(v)?;
    }
    let mut g = Graph::empty();
    for v in &gv {
        g.add_vertex(v)?;
    }
    let mut xi0: Vec<EdgeId> = Vec::new();
    let mut xi1: Vec<EdgeId> = Vec::new();
    for i in 0..dp {
        for j in 0..dp {
            let mut g_edges = Vec::new();
            for k in 0..count(&b, i, j) {
                g_edges.push(g.add_edge(&format!("g{i}_{j}_{k}"), &gv[i], &gv[j])?);
            }
            if i < d && j < d {
                let m = count(&a, i, j);
                for k in 0..m {
                    h.add_edge(&format!("h{i}_{j}_{k}"), &hv[i], &hv[j])?;
                    xi0.push(g_edges[k]);
                    xi1.push(g_edges[m + k]);
                }
            }
        }
    }
    let vmap = (0..d).collect();
    EmbeddingPair::new(g, h, vmap, xi0, xi1)
}
