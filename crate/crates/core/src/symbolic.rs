//! Eventually periodic rays and the flip relation.
//!
//! Positions are 1-indexed. A ray is stored in normal form: the cycle is
//! primitive and the prefix is as short as possible, so two rays describe the
//! same infinite path exactly when their components agree.

use crate::embedding::{CompletionTables, EmbeddingPair};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoRay {
    prefix: Vec<EdgeId>,
    cycle: Vec<EdgeId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kappa {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Finite(k) => write!(f, "{k}"),
            Kappa::Infinite => write!(f, "inf"),
        }
    }
}

/// A point of the circle, in turns, reduced into [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(BigRational);

impl Angle {
    pub fn new(t: BigRational) -> Self {
        let fl = t.floor();
        Angle(t - fl)
    }

    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    pub fn turns(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// 2^{-n} as an exact rational.
pub fn pow2_neg(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << n)
}

/// A point of the quotient: the canonical representative of its class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassPoint {
    pub rep: LassoRay,
}

impl LassoRay {
    /// Validates composability and normalizes.
    pub fn new(g: &Graph, prefix: Vec<EdgeId>, cycle: Vec<EdgeId>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidPath("empty cycle".into()));
        }
        let mut all = prefix.clone();
        all.extend(&cycle);
        all.push(cycle[0]);
        if let Some(w) = all.windows(2).find(|w| !g.composable(w[0], w[1])) {
            return Err(Error::NotComposable(g.edge_name(w[0]).into(), g.edge_name(w[1]).into()));
        }
        Ok(Self::normalized(prefix, cycle))
    }

    /// Normalizes without validation.
    pub(crate) fn normalized(mut prefix: Vec<EdgeId>, cycle: Vec<EdgeId>) -> Self {
        let mut cycle = primitive_root(cycle);
        while let (Some(&p), Some(&c)) = (prefix.last(), cycle.last()) {
            if p != c {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        LassoRay { prefix, cycle }
    }

    /// Parses `e1,e2;c1,c2` with edge names from g.
    pub fn parse(g: &Graph, text: &str) -> Result<Self> {
        let (pre, cyc) = text
            .split_once(';')
            .ok_or_else(|| Error::InvalidPath(format!("ray `{text}` lacks `;`")))?;
        let names = |s: &str| -> Result<Vec<EdgeId>> {
            s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| g.edge(t)).collect()
        };
        Self::new(g, names(pre)?, names(cyc)?)
    }

    pub fn prefix(&self) -> &[EdgeId] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[EdgeId] {
        &self.cycle
    }

    /// Edge at 1-indexed position p.
    pub fn at(&self, p: usize) -> EdgeId {
        debug_assert!(p >= 1);
        if p <= self.prefix.len() {
            self.prefix[p - 1]
        } else {
            self.cycle[(p - self.prefix.len() - 1) % self.cycle.len()]
        }
    }

    pub fn first(&self) -> EdgeId {
        self.at(1)
    }

    pub fn source(&self, g: &Graph) -> VertexId {
        g.source(self.first())
    }

    /// Positions 1..=n.
    pub fn take(&self, n: usize) -> Vec<EdgeId> {
        (1..=n).map(|p| self.at(p)).collect()
    }

    /// Number of positions after which both rays are periodic with a common period.
    pub(crate) fn horizon(&self, other: &LassoRay) -> usize {
        self.prefix.len().max(other.prefix.len()) + self.cycle.len().lcm(&other.cycle.len())
    }

    /// Length of the longest common prefix, or None when the rays are equal.
    pub fn common_prefix(&self, other: &LassoRay) -> Option<usize> {
        if self == other {
            return None;
        }
        let h = self.horizon(other);
        (1..=h).find(|&p| self.at(p) != other.at(p)).map(|p| p - 1)
    }

    /// Lexicographic comparison by edge index, position by position.
    pub fn lex_cmp(&self, other: &LassoRay) -> Ordering {
        let h = self.horizon(other);
        for p in 1..=h {
            match self.at(p).cmp(&other.at(p)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn shift(&self) -> LassoRay {
        if self.prefix.is_empty() {
            let mut c = self.cycle.clone();
            c.rotate_left(1);
            LassoRay { prefix: vec![], cycle: c }
        } else {
            LassoRay::normalized(self.prefix[1..].to_vec(), self.cycle.clone())
        }
    }

    pub fn shift_by(&self, n: usize) -> LassoRay {
        let mut x = self.clone();
        for _ in 0..n {
            x = x.shift();
        }
        x
    }

    /// Prepends edges (caller guarantees composability).
    pub(crate) fn prepend(&self, edges: &[EdgeId]) -> LassoRay {
        let mut p = edges.to_vec();
        p.extend(&self.prefix);
        LassoRay::normalized(p, self.cycle.clone())
    }

    /// Applies an edge map (e.g. tau), renormalizing.
    pub fn map_edges<F: Fn(EdgeId) -> EdgeId>(&self, f: F) -> LassoRay {
        LassoRay::normalized(self.prefix.iter().map(|&e| f(e)).collect(), self.cycle.iter().map(|&e| f(e)).collect())
    }

    pub fn display(&self, g: &Graph) -> String {
        format!("{};{}", g.word_name(&self.prefix), g.word_name(&self.cycle))
    }
}

fn primitive_root(cycle: Vec<EdgeId>) -> Vec<EdgeId> {
    let n = cycle.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| cycle[i] == cycle[i - d]) {
            return cycle[..d].to_vec();
        }
    }
    cycle
}

pub fn kappa(p: &EmbeddingPair, x: &LassoRay) -> Kappa {
    if x.cycle.iter().any(|&e| !p.in_image(e)) {
        Kappa::Infinite
    } else {
        Kappa::Finite(x.prefix.iter().filter(|&&e| !p.in_image(e)).count())
    }
}

/// n(x): the first position outside the image.
pub fn first_nonxi(p: &EmbeddingPair, x: &LassoRay) -> Result<usize> {
    let total = x.prefix.len() + x.cycle.len();
    (1..=total).find(|&q| !p.in_image(x.at(q))).ok_or(Error::NoNonXiEdge)
}

/// Binary sum of superscripts over positions 1..=n, as a rational in [0, 1).
fn digit_sum(p: &EmbeddingPair, edges: &[EdgeId]) -> BigRational {
    let mut num = BigInt::zero();
    for &e in edges {
        num <<= 1;
        if p.epsilon(e) == Ok(1) {
            num += 1;
        }
    }
    BigRational::new(num, BigInt::one() << edges.len())
}

/// Real value of the superscript expansion (not reduced mod 1).
pub fn theta_real(p: &EmbeddingPair, x: &LassoRay) -> BigRational {
    match first_nonxi(p, x) {
        Ok(n) => digit_sum(p, &x.take(n - 1)),
        Err(_) => {
            let head = digit_sum(p, &x.prefix);
            let l = x.cycle.len();
            // cycle digits c/2^l repeated: c/(2^l - 1)
            let c = digit_sum(p, &x.cycle) * BigRational::from_integer(BigInt::one() << l);
            let rep = c / BigRational::from_integer((BigInt::one() << l) - 1);
            head + rep * pow2_neg(x.prefix.len())
        }
    }
}

pub fn theta(p: &EmbeddingPair, x: &LassoRay) -> Angle {
    Angle::new(theta_real(p, x))
}

/// The unique partner x' != x with x ~ x', if any.
pub fn flip(p: &EmbeddingPair, x: &LassoRay) -> Option<LassoRay> {
    let i = p.epsilon(x.cycle[0]).ok()?;
    if x.cycle.iter().any(|&e| p.epsilon(e) != Ok(i)) {
        return None;
    }
    // m: last prefix position (1-indexed) outside the constant-superscript tail
    let m = (1..=x.prefix.len()).rev().find(|&q| p.epsilon(x.prefix[q - 1]) != Ok(i)).unwrap_or(0);
    let swap = |e: EdgeId| p.partner(e).expect("tail lies in the image");
    let mut prefix = x.prefix.clone();
    for e in prefix.iter_mut().skip(m) {
        *e = swap(*e);
    }
    if m > 0 {
        let pivot = x.prefix[m - 1];
        if p.in_image(pivot) {
            // carry: opposite superscript at m
            prefix[m - 1] = swap(pivot);
        }
    }
    let cycle = x.cycle.iter().map(|&e| swap(e)).collect();
    Some(LassoRay::normalized(prefix, cycle))
}

pub fn canonical(p: &EmbeddingPair, x: &LassoRay) -> ClassPoint {
    match flip(p, x) {
        Some(y) if y.lex_cmp(x) == Ordering::Less => ClassPoint { rep: y },
        _ => ClassPoint { rep: x.clone() },
    }
}

pub fn same_class(p: &EmbeddingPair, x: &LassoRay, y: &LassoRay) -> bool {
    x == y || flip(p, x).as_ref() == Some(y)
}

impl ClassPoint {
    pub fn of(p: &EmbeddingPair, x: &LassoRay) -> Self {
        canonical(p, x)
    }

    /// Both representatives of the class.
    pub fn members(&self, p: &EmbeddingPair) -> Vec<LassoRay> {
        let mut v = vec![self.rep.clone()];
        v.extend(flip(p, &self.rep));
        v
    }

    /// sigma_xi on classes.
    pub fn shift(&self, p: &EmbeddingPair) -> ClassPoint {
        canonical(p, &self.rep.shift())
    }
}

/// Shortest completion from v: a segment with exactly r non-image edges,
/// ending at a vertex that carries an image tail.
pub fn complete_from(
    p: &EmbeddingPair,
    tables: &CompletionTables,
    v: VertexId,
    r: usize,
) -> Option<(Vec<EdgeId>, Vec<EdgeId>, Vec<EdgeId>)> {
    let g = &p.g;
    let mut pred: HashMap<(VertexId, usize), (VertexId, usize, EdgeId)> = HashMap::new();
    let mut queue = VecDeque::from([(v, r)]);
    let mut seen = std::collections::HashSet::from([(v, r)]);
    while let Some((u, rem)) = queue.pop_front() {
        if rem == 0 {
            if let Some(tail) = &tables.tail[u] {
                let mut seg = Vec::new();
                let mut s = (u, rem);
                while let Some(&(pu, prem, e)) = pred.get(&s) {
                    seg.push(e);
                    s = (pu, prem);
                }
                seg.reverse();
                return Some((seg, tail.lead.clone(), tail.cycle.clone()));
            }
        }
        for e in g.out_edges(u) {
            let next = if p.in_image(e) {
                (g.target(e), rem)
            } else if rem > 0 {
                (g.target(e), rem - 1)
            } else {
                continue;
            };
            if seen.insert(next) {
                pred.insert(next, (u, rem, e));
                queue.push_back(next);
            }
        }
    }
    None
}

/// A ray agreeing with x on positions 1..=n with exactly k non-image edges.
pub fn stratum_approximant(
    p: &EmbeddingPair,
    tables: &CompletionTables,
    x: &LassoRay,
    n: usize,
    k: usize,
) -> Result<LassoRay> {
    let head = x.take(n);
    let found = head.iter().filter(|&&e| !p.in_image(e)).count();
    if k < found {
        return Err(Error::StratumTooSmall { k, found });
    }
    let v = match head.last() {
        Some(&e) => p.g.target(e),
        None => x.source(&p.g),
    };
    let (seg, lead, cycle) =
        complete_from(p, tables, v, k - found).ok_or_else(|| Error::NoTail(p.g.vertex_name(v).into()))?;
    let mut prefix = head;
    prefix.extend(seg);
    prefix.extend(lead);
    Ok(LassoRay::normalized(prefix, cycle))
}

/// A preimage z of x under the shift starting with y's first edge.
/// When the class of x has a member whose first edge equals y's second edge,
/// that member is used.
pub fn lift_preimage(p: &EmbeddingPair, x: &LassoRay, y: &LassoRay) -> Result<LassoRay> {
    let y1 = y.first();
    let y2 = y.at(2);
    let chosen = if x.first() == y2 {
        x.clone()
    } else {
        match flip(p, x) {
            Some(f) if f.first() == y2 => f,
            _ => x.clone(),
        }
    };
    if !p.g.composable(y1, chosen.first()) {
        return Err(Error::NotComposable(p.g.edge_name(y1).into(), p.g.edge_name(chosen.first()).into()));
    }
    Ok(chosen.prepend(&[y1]))
}
