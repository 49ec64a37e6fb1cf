//! Two-sided paths, truncated inverse-limit towers, the bracket, and the
//! decision procedure for equal images under the factor map.

use crate::embedding::EmbeddingPair;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::metric::{Metric, MetricInterval};
use crate::symbolic::{canonical, lift_preimage, pow2_neg, ClassPoint, LassoRay};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

/// A bi-infinite eventually periodic path `...past past | core | future future...`.
/// The core occupies positions `start .. start + |core|`.
#[derive(Clone, Debug)]
pub struct BiLasso {
    past: Vec<EdgeId>,
    core: Vec<EdgeId>,
    future: Vec<EdgeId>,
    start: i64,
}

impl BiLasso {
    pub fn new(g: &Graph, past: Vec<EdgeId>, core: Vec<EdgeId>, future: Vec<EdgeId>, start: i64) -> Result<Self> {
        if past.is_empty() || future.is_empty() {
            return Err(Error::InvalidPath("empty cycle".into()));
        }
        let check = |w: &[EdgeId]| -> Result<()> {
            match w.windows(2).find(|w| !g.composable(w[0], w[1])) {
                Some(w) => Err(Error::NotComposable(g.edge_name(w[0]).into(), g.edge_name(w[1]).into())),
                None => Ok(()),
            }
        };
        let mut all = past.clone();
        all.push(past[0]);
        check(&all)?;
        let mut all = vec![*past.last().unwrap()];
        all.extend(&core);
        all.extend(&future);
        all.push(future[0]);
        check(&all)?;
        Ok(BiLasso { past, core, future, start })
    }

    /// Parses `past;left|right;future`. Without `|` the core starts at position 1.
    pub fn parse(g: &Graph, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidPath(format!("bi-lasso `{text}` needs two `;`")));
        }
        let names = |s: &str| -> Result<Vec<EdgeId>> {
            s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| g.edge(t)).collect()
        };
        let (left, right) = parts[1].split_once('|').unwrap_or(("", parts[1]));
        let left = names(left)?;
        let mut core = left.clone();
        core.extend(names(right)?);
        Self::new(g, names(parts[0])?, core, names(parts[2])?, 1 - left.len() as i64)
    }

    pub fn periodic(g: &Graph, cycle: Vec<EdgeId>) -> Result<Self> {
        Self::new(g, cycle.clone(), Vec::new(), cycle, 1)
    }

    pub fn past(&self) -> &[EdgeId] {
        &self.past
    }

    pub fn core(&self) -> &[EdgeId] {
        &self.core
    }

    pub fn future(&self) -> &[EdgeId] {
        &self.future
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// First position of the future part.
    pub fn end(&self) -> i64 {
        self.start + self.core.len() as i64
    }

    pub fn at(&self, n: i64) -> EdgeId {
        if n < self.start {
            let len = self.past.len() as i64;
            let j = self.start - n - 1;
            self.past[(len - 1 - j.rem_euclid(len)) as usize]
        } else if n < self.end() {
            self.core[(n - self.start) as usize]
        } else {
            let len = self.future.len() as i64;
            self.future[(n - self.end()).rem_euclid(len) as usize]
        }
    }

    /// The one-sided ray (x_n, x_{n+1}, ...), re-indexed from 1.
    pub fn ray_from(&self, n: i64) -> LassoRay {
        let end = self.end();
        if n >= end {
            let mut cycle = self.future.clone();
            let r = (n - end).rem_euclid(cycle.len() as i64) as usize;
            cycle.rotate_left(r);
            LassoRay::normalized(Vec::new(), cycle)
        } else {
            LassoRay::normalized((n..end).map(|k| self.at(k)).collect(), self.future.clone())
        }
    }

    pub fn shift(&self) -> BiLasso {
        BiLasso { start: self.start - 1, ..self.clone() }
    }

    pub fn unshift(&self) -> BiLasso {
        BiLasso { start: self.start + 1, ..self.clone() }
    }

    pub fn map_edges<F: Fn(EdgeId) -> EdgeId>(&self, f: F) -> BiLasso {
        BiLasso {
            past: self.past.iter().map(|&e| f(e)).collect(),
            core: self.core.iter().map(|&e| f(e)).collect(),
            future: self.future.iter().map(|&e| f(e)).collect(),
            start: self.start,
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        let names = |w: &[EdgeId]| w.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join(",");
        // widen the core until it touches position 1
        let lo = self.start.min(1);
        let hi = self.end().max(1);
        let core: Vec<EdgeId> = (lo..hi).map(|n| self.at(n)).collect();
        let mut future = self.future.clone();
        future.rotate_left((hi - self.end()).rem_euclid(self.future.len() as i64) as usize);
        let mut past = self.past.clone();
        past.rotate_right((self.start - lo).rem_euclid(self.past.len() as i64) as usize);
        let split = (1 - lo) as usize;
        format!("{};{}|{};{}", names(&past), names(&core[..split]), names(&core[split..]), names(&future))
    }
}

fn agree_left(x: &BiLasso, y: &BiLasso, upto: i64) -> bool {
    let l = x.past.len().lcm(&y.past.len()) as i64;
    let lo = x.start.min(y.start).min(upto + 1) - l;
    (lo..=upto).all(|n| x.at(n) == y.at(n))
}

fn agree_right(x: &BiLasso, y: &BiLasso, from: i64) -> bool {
    let l = x.future.len().lcm(&y.future.len()) as i64;
    let hi = x.end().max(y.end()).max(from) + l - 1;
    (from..=hi).all(|n| x.at(n) == y.at(n))
}

impl PartialEq for BiLasso {
    fn eq(&self, other: &Self) -> bool {
        agree_left(self, other, 0) && agree_right(self, other, 1)
    }
}

impl Eq for BiLasso {}

/// A truncated point (x^0, ..., x^M) of the inverse limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub levels: Vec<ClassPoint>,
}

impl Tower {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &ClassPoint {
        &self.levels[n]
    }

    pub fn is_consistent(&self, p: &EmbeddingPair) -> bool {
        self.levels.windows(2).all(|w| w[1].shift(p) == w[0])
    }
}

/// Level n is the class of the ray read from position 1 - n.
pub fn pi_xi_tower(p: &EmbeddingPair, x: &BiLasso, depth: usize) -> Tower {
    Tower { levels: (0..=depth as i64).map(|n| canonical(p, &x.ray_from(1 - n))).collect() }
}

pub fn shift_tower(p: &EmbeddingPair, x: &Tower) -> Tower {
    Tower { levels: x.levels.iter().map(|c| c.shift(p)).collect() }
}

pub const EPSILON: (i64, i64) = (1, 2);
pub const LAMBDA: (i64, i64) = (1, 2);

/// Sup of 2^{-n} d(x^n, y^n) over computed levels, widened by the tail 3 * 2^{-M}.
pub fn tower_distance(m: &Metric, x: &Tower, y: &Tower) -> Result<MetricInterval> {
    if x.depth() != y.depth() {
        return Err(Error::DepthMismatch(x.depth(), y.depth()));
    }
    let depth = x.depth();
    let precision = depth + 12;
    let mut lo = BigRational::zero();
    let mut hi = pow2_neg(depth) * BigRational::from_integer(3.into());
    for n in 0..=depth {
        let d = m.d_class(&x.levels[n], &y.levels[n], precision)?;
        let s = pow2_neg(n);
        lo = lo.max(&s * d.lo);
        hi = hi.max(s * d.hi);
    }
    Ok(MetricInterval { lo, hi })
}

/// The bracket: z^0 = x^0 and z^{n+1} a lift of z^n towards y^{n+1}.
/// Each member of the class y^{n+1} proposes a lift; the closest one is kept.
pub fn bracket(m: &Metric, x: &Tower, y: &Tower) -> Result<Tower> {
    let d = tower_distance(m, x, y)?;
    if d.hi > BigRational::new(EPSILON.0.into(), EPSILON.1.into()) {
        return Err(Error::BracketUndefined(d.hi.to_string()));
    }
    let p = m.pair;
    let precision = x.depth() + 12;
    let mut levels = vec![x.levels[0].clone()];
    for n in 1..=x.depth() {
        let target = &y.levels[n];
        let mut best: Option<(BigRational, ClassPoint)> = None;
        let mut last_err = None;
        for member in target.members(p) {
            match lift_preimage(p, &levels[n - 1].rep, &member) {
                Ok(z) => {
                    let c = canonical(p, &z);
                    let dz = m.d_class(&c, target, precision)?.hi;
                    if best.as_ref().is_none_or(|(b, _)| dz < *b) {
                        best = Some((dz, c));
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
        match best {
            Some((_, c)) => levels.push(c),
            None => return Err(last_err.expect("a class has at least one member")),
        }
    }
    Ok(Tower { levels })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairWitness {
    /// x = y.
    Equal,
    /// x = xi^i(z), y = xi^{1-i}(z) for an H bi-path z.
    Swap { i: u8, z: BiLasso },
    /// Agreement before m, a pivot at m, swapped tails after m.
    /// `pivot` is z_m when the pivot is itself a swap; `tail` is z_{m+1}, z_{m+2}, ...
    Carry { m: i64, i: u8, pivot: Option<EdgeId>, tail: LassoRay },
}

impl PairWitness {
    pub fn case(&self) -> char {
        match self {
            PairWitness::Equal => 'a',
            PairWitness::Swap { .. } => 'b',
            PairWitness::Carry { .. } => 'c',
        }
    }
}

impl fmt::Display for PairWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairWitness::Equal => write!(f, "case a"),
            PairWitness::Swap { i, .. } => write!(f, "case b, i = {i}"),
            PairWitness::Carry { m, i, .. } => write!(f, "case c, m = {m}, i = {i}"),
        }
    }
}

/// Decides whether x and y have the same image in the quotient system.
pub fn pair_related(p: &EmbeddingPair, x: &BiLasso, y: &BiLasso) -> Option<PairWitness> {
    if x == y {
        return Some(PairWitness::Equal);
    }
    let lp = x.past.len().lcm(&y.past.len()) as i64;
    let lf = x.future.len().lcm(&y.future.len()) as i64;
    let lo = x.start.min(y.start) - lp;
    let hi = x.end().max(y.end()) + lf - 1;
    let swapped = |n: i64, i: u8| {
        let e = x.at(n);
        p.epsilon(e) == Ok(i) && p.partner(e) == Some(y.at(n))
    };
    let pre = |e: EdgeId| p.preimage(e).expect("edge lies in the image").1;
    for i in 0..2u8 {
        if (lo..=hi).all(|n| swapped(n, i)) {
            return Some(PairWitness::Swap { i, z: x.map_edges(pre) });
        }
    }
    for i in 0..2u8 {
        for m in lo..=hi {
            if !agree_left(x, y, m - 1) {
                break;
            }
            let (a, b) = (x.at(m), y.at(m));
            let pivot = if a == b && !p.in_image(a) {
                None
            } else if swapped(m, 1 - i) {
                Some(pre(a))
            } else {
                continue;
            };
            if (m + 1..=hi.max(m + lf)).all(|n| swapped(n, i)) {
                let tail = x.ray_from(m + 1).map_edges(pre);
                return Some(PairWitness::Carry { m, i, pivot, tail });
            }
        }
    }
    None
}

/// A minimal cycle avoiding the image, and the periodic points repeating it.
#[derive(Clone, Debug)]
pub struct TransversalSpec {
    pub cycle: Vec<EdgeId>,
    pub points: Vec<BiLasso>,
}

pub fn transversal_spec(p: &EmbeddingPair) -> Result<TransversalSpec> {
    let cycle = p.g.shortest_cycle(|e| !p.in_image(e)).ok_or(Error::NoTransversal)?;
    let points = (0..cycle.len())
        .map(|r| {
            let mut c = cycle.clone();
            c.rotate_left(r);
            BiLasso::periodic(&p.g, c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransversalSpec { cycle, points })
}

/// y_n = p_n for all n <= 0, some p in P.
pub fn membership_yu(spec: &TransversalSpec, x: &BiLasso) -> bool {
    spec.points.iter().any(|q| agree_left(x, q, 0))
}

/// y_n = p_n for all n >= -1, some p in P.
pub fn membership_ys(spec: &TransversalSpec, x: &BiLasso) -> bool {
    spec.points.iter().any(|q| agree_right(x, q, -1))
}
