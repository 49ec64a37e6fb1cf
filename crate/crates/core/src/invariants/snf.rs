//! Smith normal form over the integers.

use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ...
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal entries, min(rows, cols) of them.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Checks every defining property against the original matrix.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let diag = self.diagonal();
        let chain = diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        });
        self.u.mul(a).mul(&self.v) == self.d
            && self.d.is_diagonal()
            && diag.iter().all(|x| !x.is_negative())
            && chain
            && self.u.is_unimodular()
            && self.v.is_unimodular()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let t = m.get(i, c).clone();
                let s = m.get(j, c).clone();
                m.set(i, c, s);
                m.set(j, c, t);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows() {
                let t = m.get(r, i).clone();
                let s = m.get(r, j).clone();
                m.set(r, i, s);
                m.set(r, j, t);
            }
        }
    }

    /// row i += k * row j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let v = m.get(i, c) + k * m.get(j, c);
                m.set(i, c, v);
            }
        }
    }

    /// col i += k * col j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows() {
                let v = m.get(r, i) + k * m.get(r, j);
                m.set(r, i, v);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let v = -m.get(i, c);
                m.set(i, c, v);
            }
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work { a: a.clone(), u: IntMatrix::identity(rows), v: IntMatrix::identity(cols) };
    for t in 0..rows.min(cols) {
        loop {
            // pivot: smallest nonzero absolute value, first in row-major order
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = w.a.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(w);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = w.a.get(i, t).div_floor(w.a.get(t, t));
                if !q.is_zero() {
                    w.add_row(i, t, &-q);
                }
                clean &= w.a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = w.a.get(t, j).div_floor(w.a.get(t, t));
                if !q.is_zero() {
                    w.add_col(j, t, &-q);
                }
                clean &= w.a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let p = w.a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(w.a.get(i, j) % &p).is_zero()));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    finish(w)
}

fn finish(mut w: Work) -> SmithDecomposition {
    for t in 0..w.a.rows().min(w.a.cols()) {
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    SmithDecomposition { u: w.u, d: w.a, v: w.v }
}
