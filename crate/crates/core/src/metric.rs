//! Exact metrics: d_G, circle distance, the stratum recursion d_k, and
//! certified intervals for the extended pseudo-metric.

use crate::embedding::{CompletionTables, EmbeddingPair, QuotientGraph};
use crate::error::{Error, Result};
use crate::symbolic::{
    complete_from, first_nonxi, kappa, pow2_neg, stratum_approximant, theta, Angle, ClassPoint, Kappa,
    LassoRay,
};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

pub type MetricValue = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl MetricInterval {
    pub fn exact(v: BigRational) -> Self {
        MetricInterval { lo: v.clone(), hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

impl fmt::Display for MetricInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// 2^{-m} with m the common prefix length; 0 for equal rays.
pub fn d_shift(x: &LassoRay, y: &LassoRay) -> MetricValue {
    match x.common_prefix(y) {
        None => BigRational::zero(),
        Some(m) => pow2_neg(m),
    }
}

/// Shortest rotation distance on the circle, in turns.
pub fn circle_distance(s: &Angle, t: &Angle) -> MetricValue {
    let d = Angle::new(s.turns() - t.turns());
    let a = d.turns().clone();
    let b = BigRational::from_integer(1.into()) - &a;
    if a <= b {
        a
    } else {
        b
    }
}

/// Context bundling the pair with its quotient and completion data.
pub struct Metric<'a> {
    pub pair: &'a EmbeddingPair,
    pub quotient: QuotientGraph,
    pub tables: CompletionTables,
}

impl<'a> Metric<'a> {
    pub fn new(pair: &'a EmbeddingPair) -> Result<Self> {
        Ok(Metric { pair, quotient: pair.quotient_graph()?, tables: pair.completion_tables()? })
    }

    pub fn tau(&self, x: &LassoRay) -> LassoRay {
        x.map_edges(|e| self.quotient.tau[e])
    }

    pub fn d_quotient_graph(&self, x: &LassoRay, y: &LassoRay) -> MetricValue {
        d_shift(&self.tau(x), &self.tau(y))
    }

    /// lambda_k on a common finite stratum.
    pub fn lambda(&self, x: &LassoRay, y: &LassoRay) -> Result<MetricValue> {
        let p = self.pair;
        let k = common_stratum(p, x, y)?;
        let mut x = x.clone();
        let mut y = y.clone();
        let mut scale = BigRational::from_integer(1.into());
        let mut total = BigRational::zero();
        for _ in 0..k {
            let nx = first_nonxi(p, &x)?;
            let ny = first_nonxi(p, &y)?;
            let tx = theta(p, &x);
            let ty = theta(p, &y);
            let head = (pow2_neg(nx) - pow2_neg(ny)).abs() + circle_distance(&tx, &ty);
            total += &scale * head;
            if nx != ny || tx != ty {
                return Ok(total);
            }
            scale *= pow2_neg(2 + nx);
            x = x.shift_by(nx);
            y = y.shift_by(ny);
        }
        total += scale * circle_distance(&theta(p, &x), &theta(p, &y));
        Ok(total)
    }

    /// d_k = d_{G_xi}(tau x, tau y) + lambda_k(x, y).
    pub fn d_stratum(&self, x: &LassoRay, y: &LassoRay) -> Result<MetricValue> {
        Ok(self.d_quotient_graph(x, y) + self.lambda(x, y)?)
    }

    /// Enclosure of the extended pseudo-metric from depth-n approximants.
    pub fn d_extended(&self, x: &LassoRay, y: &LassoRay, n: usize) -> Result<MetricInterval> {
        let p = self.pair;
        if let (Kappa::Finite(a), Kappa::Finite(b)) = (kappa(p, x), kappa(p, y)) {
            if a == b {
                return Ok(MetricInterval::exact(self.d_stratum(x, y)?));
            }
        }
        let count = |r: &LassoRay| r.take(n).iter().filter(|&&e| !p.in_image(e)).count();
        let end = |r: &LassoRay| match n {
            0 => r.source(&p.g),
            _ => p.g.target(r.at(n)),
        };
        let (jx, jy) = (count(x), count(y));
        let (vx, vy) = (end(x), end(y));
        let start = jx.max(jy);
        let limit = start + 2 * p.g.vertex_count() + p.g.edge_count() + 2;
        let k = (start..=limit)
            .find(|&k| {
                complete_from(p, &self.tables, vx, k - jx).is_some()
                    && complete_from(p, &self.tables, vy, k - jy).is_some()
            })
            .ok_or_else(|| Error::NoTail(p.g.vertex_name(vx).into()))?;
        let xa = stratum_approximant(p, &self.tables, x, n, k)?;
        let ya = stratum_approximant(p, &self.tables, y, n, k)?;
        let mid = self.d_stratum(&xa, &ya)?;
        let slack = pow2_neg(n) * BigRational::from_integer(6.into());
        let lo = &mid - &slack;
        let lo = if lo.is_negative() { BigRational::zero() } else { lo };
        Ok(MetricInterval { lo, hi: mid + slack })
    }

    pub fn d_class(&self, cx: &ClassPoint, cy: &ClassPoint, n: usize) -> Result<MetricInterval> {
        if cx == cy {
            return Ok(MetricInterval::exact(BigRational::zero()));
        }
        self.d_extended(&cx.rep, &cy.rep, n)
    }
}

fn common_stratum(p: &EmbeddingPair, x: &LassoRay, y: &LassoRay) -> Result<usize> {
    match (kappa(p, x), kappa(p, y)) {
        (Kappa::Finite(a), Kappa::Finite(b)) if a == b => Ok(a),
        (a, b) => Err(Error::StratumMismatch(a.to_string(), b.to_string())),
    }
}
