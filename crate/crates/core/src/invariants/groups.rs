//! Finitely generated abelian groups and stationary presentations.

use super::snf::smith_normal_form;
use crate::graph::Graph;
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Z^rank (+) Z/t1 (+) ... with t1 | t2 | ... and every t >= 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        FgAbelianGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, torsion: Vec::new() }
    }

    /// Canonicalizes arbitrary cyclic orders (0 means Z, 1 is dropped).
    pub fn from_cyclic(orders: &[BigInt]) -> Self {
        let d = IntMatrix::diagonal(orders);
        cokernel(&d)
    }

    pub fn new(rank: usize, torsion: &[i64]) -> Self {
        let mut orders: Vec<BigInt> = torsion.iter().map(|&t| BigInt::from(t)).collect();
        orders.extend(std::iter::repeat_n(BigInt::zero(), rank));
        Self::from_cyclic(&orders)
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        let t = Self::from_cyclic(&orders);
        FgAbelianGroup { rank: self.rank + other.rank + t.rank, torsion: t.torsion }
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn torsion_part(&self) -> FgAbelianGroup {
        FgAbelianGroup { rank: 0, torsion: self.torsion.clone() }
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().fold(BigInt::one(), |a, b| a * b))
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" (+) "))
        }
    }
}

impl FromStr for FgAbelianGroup {
    type Err = String;

    /// Accepts the rendered form, e.g. `Z^1 (+) Z/2`, `Z + Z/3`, or `0`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut orders = Vec::new();
        for part in s.replace("(+)", "+").split('+').map(str::trim) {
            match part {
                "0" | "" => {}
                "Z" => orders.push(BigInt::zero()),
                _ => {
                    if let Some(r) = part.strip_prefix("Z^") {
                        let r: usize = r.parse().map_err(|_| format!("bad rank in `{part}`"))?;
                        orders.extend(std::iter::repeat_n(BigInt::zero(), r));
                    } else if let Some(d) = part.strip_prefix("Z/") {
                        let d: BigInt = d.parse().map_err(|_| format!("bad order in `{part}`"))?;
                        if d < BigInt::from(2) {
                            return Err(format!("torsion order must be at least 2 in `{part}`"));
                        }
                        orders.push(d);
                    } else {
                        return Err(format!("cannot read `{part}` as a cyclic group"));
                    }
                }
            }
        }
        Ok(Self::from_cyclic(&orders))
    }
}

/// Z^rows / A Z^cols.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    let s = smith_normal_form(a);
    let diag = s.diagonal();
    let zeros = diag.iter().filter(|x| x.is_zero()).count() + a.rows().saturating_sub(a.cols());
    let torsion = diag.into_iter().filter(|x| x.abs() > BigInt::one()).collect();
    FgAbelianGroup { rank: zeros, torsion }
}

pub fn kernel_rank(a: &IntMatrix) -> usize {
    a.cols() - smith_normal_form(a).rank()
}

/// cokernel(I - A).
pub fn bowen_franks(g: &Graph) -> FgAbelianGroup {
    cokernel(&g.adjacency_matrix().identity_minus())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Stable,
    Unstable,
}

/// The inductive limit lim(Z^size, matrix), with a label for the automorphism it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGroupPresentation {
    pub name: String,
    pub size: usize,
    pub matrix: IntMatrix,
    pub automorphism: String,
}

impl fmt::Display for MarkedGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.matrix.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{} = lim(Z^{}, [{}]), automorphism {}", self.name, self.size, rows.join("; "), self.automorphism)
    }
}

/// D^s presented by A, D^u by A^T.
pub fn dimension_group(g: &Graph, variant: Variant, name: &str, automorphism: &str) -> MarkedGroupPresentation {
    let a = g.adjacency_matrix();
    let matrix = match variant {
        Variant::Stable => a,
        Variant::Unstable => a.transpose(),
    };
    MarkedGroupPresentation {
        name: name.to_string(),
        size: g.vertex_count(),
        matrix,
        automorphism: automorphism.to_string(),
    }
}
