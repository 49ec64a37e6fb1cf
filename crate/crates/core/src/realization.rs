//! The planar map zeta, its circle geometry, fibers over the quotient graph,
//! and SVG output.

use crate::embedding::{CompletionTables, EmbeddingPair, QuotientGraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};
use crate::metric::Metric;
use crate::symbolic::{
    canonical, first_nonxi, kappa, pow2_neg, rat_to_f64, stratum_approximant, theta, Angle, ClassPoint, Kappa,
    LassoRay,
};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

/// Floating slack added to every certified bound.
const FLOAT_SLACK: f64 = 1e-12;

fn unit(a: &Angle) -> Complex64 {
    Complex64::from_polar(1.0, TAU * a.to_f64())
}

/// zeta_k on a ray of finite stratum.
pub fn zeta_exact(p: &EmbeddingPair, x: &LassoRay) -> Result<Complex64> {
    let k = match kappa(p, x) {
        Kappa::Finite(k) => k,
        Kappa::Infinite => return Err(Error::StratumMismatch("finite".into(), "inf".into())),
    };
    // unroll: sum of scale * (1 - 2^{1-n}) e(theta), then scale * e(theta) at stratum 0
    let mut x = x.clone();
    let mut scale = 1.0f64;
    let mut z = Complex64::zero();
    for _ in 0..k {
        let n = first_nonxi(p, &x)?;
        z += scale * (1.0 - 2f64.powi(1 - n as i32)) * unit(&theta(p, &x));
        scale *= 2f64.powi(-3 - n as i32);
        x = x.shift_by(n);
    }
    Ok(z + scale * unit(&theta(p, &x)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaValue {
    pub value: Complex64,
    /// Certified bound on |value - zeta(x)|.
    pub error: f64,
}

/// zeta on any lasso; rays of infinite stratum go through a depth-n approximant.
pub fn zeta_approx(p: &EmbeddingPair, tables: &CompletionTables, x: &LassoRay, n: usize) -> Result<ZetaValue> {
    if let Kappa::Finite(_) = kappa(p, x) {
        return Ok(ZetaValue { value: zeta_exact(p, x)?, error: FLOAT_SLACK });
    }
    let found = x.take(n).iter().filter(|&&e| !p.in_image(e)).count();
    let approx = stratum_approximant(p, tables, x, n, found)?;
    // d(x, approx) <= 3 * 2^{-n}, zeta is 8-Lipschitz
    let error = 8.0 * 3.0 * rat_to_f64(&pow2_neg(n)) + FLOAT_SLACK;
    Ok(ZetaValue { value: zeta_exact(p, &approx)?, error })
}

/// One circle of the image: rays sharing the (n_i, theta_i) chain, then any xi-tail.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CircleSpec {
    pub levels: Vec<(usize, Angle)>,
}

impl CircleSpec {
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    /// 2^{-3k - sum n_i}
    pub fn radius(&self) -> BigRational {
        pow2_neg(3 * self.k() + self.levels.iter().map(|l| l.0).sum::<usize>())
    }

    pub fn center(&self) -> Complex64 {
        let mut scale = 1.0f64;
        let mut z = Complex64::zero();
        for (n, t) in &self.levels {
            z += scale * (1.0 - 2f64.powi(1 - *n as i32)) * unit(t);
            scale *= 2f64.powi(-3 - *n as i32);
        }
        z
    }
}

#[derive(Clone, Debug)]
pub struct CircleSet {
    pub specs: Vec<CircleSpec>,
    pub pruned: usize,
    /// Sum of the radii of pruned specs.
    pub pruned_radius: BigRational,
}

fn digits_angle(digits: &[u8]) -> Angle {
    let mut num = num_bigint::BigInt::zero();
    for &d in digits {
        num = num * 2 + d;
    }
    Angle::new(BigRational::new(num, num_bigint::BigInt::from(1) << digits.len()))
}

pub fn circle_specs(p: &EmbeddingPair, max_k: usize, max_depth: usize, min_radius: &BigRational) -> Result<CircleSet> {
    let tables = p.completion_tables()?;
    let mut found: Vec<CircleSpec> = Vec::new();
    if tables.tail.iter().any(Option::is_some) {
        found.push(CircleSpec { levels: Vec::new() });
    }
    struct Walk<'a> {
        p: &'a EmbeddingPair,
        tables: &'a CompletionTables,
        max_k: usize,
        max_depth: usize,
        out: Vec<CircleSpec>,
    }
    impl Walk<'_> {
        fn go(&mut self, v: VertexId, pos: usize, levels: &mut Vec<(usize, Angle)>, digits: &mut Vec<u8>) {
            if pos == self.max_depth {
                return;
            }
            for e in self.p.g.out_edges(v) {
                let t = self.p.g.target(e);
                match self.p.epsilon(e) {
                    Ok(i) => {
                        digits.push(i);
                        self.go(t, pos + 1, levels, digits);
                        digits.pop();
                    }
                    Err(_) => {
                        let seg = std::mem::take(digits);
                        levels.push((seg.len() + 1, digits_angle(&seg)));
                        if self.tables.tail[t].is_some() {
                            self.out.push(CircleSpec { levels: levels.clone() });
                        }
                        if levels.len() < self.max_k {
                            self.go(t, pos + 1, levels, &mut Vec::new());
                        }
                        levels.pop();
                        *digits = seg;
                    }
                }
            }
        }
    }
    if max_k > 0 {
        let mut w = Walk { p, tables: &tables, max_k, max_depth, out: Vec::new() };
        for v in 0..p.g.vertex_count() {
            w.go(v, 0, &mut Vec::new(), &mut Vec::new());
        }
        found.extend(w.out);
    }
    found.sort_by(|a, b| {
        let ns = |s: &CircleSpec| s.levels.iter().map(|l| l.0).collect::<Vec<_>>();
        let ts = |s: &CircleSpec| s.levels.iter().map(|l| l.1.clone()).collect::<Vec<_>>();
        (a.k(), ns(a), ts(a)).cmp(&(b.k(), ns(b), ts(b)))
    });
    found.dedup();
    let (specs, pruned): (Vec<_>, Vec<_>) = found.into_iter().partition(|s| &s.radius() >= min_radius);
    let pruned_radius = pruned.iter().map(CircleSpec::radius).fold(BigRational::zero(), |a, b| a + b);
    Ok(CircleSet { specs, pruned: pruned.len(), pruned_radius })
}

fn fmt9(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn render_svg(
    p: &EmbeddingPair,
    max_k: usize,
    max_depth: usize,
    min_radius: &BigRational,
    scale: f64,
) -> Result<String> {
    let set = circle_specs(p, max_k, max_depth, min_radius)?;
    let half = 1.1 * scale;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{w}\" viewBox=\"{o} {o} {w} {w}\">",
        w = fmt9(2.0 * half),
        o = fmt9(-half)
    );
    for s in &set.specs {
        let c = s.center();
        let _ = writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\"/>",
            fmt9(scale * c.re),
            fmt9(-scale * c.im),
            fmt9(scale * rat_to_f64(&s.radius())),
            fmt9(scale / 500.0)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberClass {
    Circles(usize),
    Points(u128),
    TotallyDisconnected,
}

/// The shape of the fiber of X_xi^+ over a ray of the quotient graph.
pub fn fiber_classify(p: &EmbeddingPair, q: &QuotientGraph, base: &LassoRay) -> FiberClass {
    let mut pre: Vec<Vec<EdgeId>> = vec![Vec::new(); q.graph.edge_count()];
    for (e, &t) in q.tau.iter().enumerate() {
        pre[t].push(e);
    }
    let identified = |f: EdgeId| pre[f].len() == 2;
    let h_vertices: Vec<VertexId> = (0..p.h.vertex_count()).map(|v| p.xi0_vertex(v)).collect();
    let cycle_free = base.cycle().iter().all(|&f| identified(f));
    let cycle_marked = base.cycle().iter().any(|&f| identified(f));
    if !cycle_free {
        if cycle_marked {
            return FiberClass::TotallyDisconnected;
        }
        let m = base.prefix().iter().filter(|&&f| identified(f)).count();
        return FiberClass::Points(1u128 << m);
    }
    // last non-xi position ending at an H vertex
    let last = (1..=base.prefix().len())
        .rev()
        .find(|&n| !identified(base.at(n)) && h_vertices.contains(&q.graph.target(base.at(n))));
    let Some(n) = last else {
        return FiberClass::Circles(1);
    };
    // DFS over G-prefixes with the same tau-image up to n
    fn count(p: &EmbeddingPair, pre: &[Vec<EdgeId>], base: &LassoRay, n: usize, pos: usize, prev: Option<EdgeId>) -> usize {
        if pos > n {
            return 1;
        }
        pre[base.at(pos)]
            .iter()
            .filter(|&&e| prev.is_none_or(|f| p.g.composable(f, e)))
            .map(|&e| count(p, pre, base, n, pos + 1, Some(e)))
            .sum()
    }
    FiberClass::Circles(count(p, &pre, base, n, 1, None))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityReport {
    pub lassos: usize,
    pub classes: usize,
    /// Distinct classes sharing the discrete invariant.
    pub collisions: usize,
    /// Members of one class with different invariants.
    pub inconsistencies: usize,
}

type Invariant = (LassoRay, Vec<(usize, Angle)>, Option<Angle>);

/// tau-image, the (n_i, theta_i) chain through position `window`, and the tail angle.
fn invariant(p: &EmbeddingPair, tau: &[EdgeId], x: &LassoRay, window: usize) -> Invariant {
    let image = x.map_edges(|e| tau[e]);
    let mut chain = Vec::new();
    let mut y = x.clone();
    let mut pos = 0;
    let finite = matches!(kappa(p, x), Kappa::Finite(_));
    loop {
        match first_nonxi(p, &y) {
            Ok(n) if !finite && pos + n > window => break,
            Ok(n) => {
                chain.push((n, theta(p, &y)));
                pos += n;
                y = y.shift_by(n);
            }
            Err(_) => return (image, chain, Some(theta(p, &y))),
        }
    }
    (image, chain, None)
}

/// Compares classes of lassos (every prefix of length `depth`, cycles of length <= 2)
/// by their discrete invariant.
pub fn embedding_injectivity_check(p: &EmbeddingPair, depth: usize, cap: usize) -> Result<InjectivityReport> {
    let q = p.quotient_graph()?;
    let prefixes = p.g.paths_of_length(depth, None, None);
    let mut lassos = Vec::new();
    for w in &prefixes {
        let v = p.g.target(*w.edges.last().expect("depth >= 1"));
        let mut cycles: Vec<Vec<EdgeId>> = Vec::new();
        for e in p.g.out_edges(v) {
            if p.g.target(e) == v {
                cycles.push(vec![e]);
            }
            for f in p.g.out_edges(p.g.target(e)) {
                if p.g.target(f) == v {
                    cycles.push(vec![e, f]);
                }
            }
        }
        for c in cycles {
            lassos.push(LassoRay::new(&p.g, w.edges.clone(), c)?);
            if lassos.len() > cap {
                return Err(Error::SizeGuard { count: lassos.len() as u128, cap: cap as u128 });
            }
        }
    }
    let window = depth + 4;
    let mut by_class: HashMap<ClassPoint, Invariant> = HashMap::new();
    let mut inconsistencies = 0;
    for x in &lassos {
        let key = invariant(p, &q.tau, x, window);
        let c = canonical(p, x);
        match by_class.get(&c) {
            Some(k) if *k != key => inconsistencies += 1,
            Some(_) => {}
            None => {
                by_class.insert(c, key);
            }
        }
    }
    let mut seen: HashMap<&Invariant, &ClassPoint> = HashMap::new();
    let mut collisions = 0;
    for (c, key) in &by_class {
        if seen.insert(key, c).is_some() {
            collisions += 1;
        }
    }
    Ok(InjectivityReport { lassos: lassos.len(), classes: by_class.len(), collisions, inconsistencies })
}

/// The planar data of the embedding into the quotient path space times C.
pub fn embed_point(p: &EmbeddingPair, m: &Metric, x: &LassoRay, n: usize) -> Result<(LassoRay, ZetaValue)> {
    Ok((m.tau(x), zeta_approx(p, &m.tables, x, n)?))
}
