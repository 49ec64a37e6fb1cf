//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};
use xi_quotient::bundle::{parse_bundle, serialize_bundle};
use xi_quotient::embedding::examples::{full2, full3};
use xi_quotient::invariants::complex::build_pair_complex;
use xi_quotient::invariants::{ruelle_k_theory, smith_normal_form, synthesize_seed, FgAbelianGroup};
use xi_quotient::metric::d_shift;
use xi_quotient::realization::{circle_specs, embedding_injectivity_check, fiber_classify, zeta_approx, zeta_exact, FiberClass};
use xi_quotient::smale::{bracket, pair_related, pi_xi_tower, shift_tower, tower_distance, BiLasso, Tower};
use xi_quotient::symbolic::{canonical, kappa, lift_preimage};
use xi_quotient::{EmbeddingPair, Graph, IntMatrix, Kappa, LassoRay, Metric};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pow2(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << n)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// First-principles evaluation on the one-vertex example with loops a, b, c.
mod oracle {
    use super::*;

    #[derive(Clone, Debug)]
    pub struct Seq {
        pre: Vec<u8>,
        cyc: Vec<u8>,
    }

    const C: u8 = 2;

    fn digit(name: &str) -> u8 {
        match name {
            "a" => 0,
            "b" => 1,
            "c" => C,
            _ => panic!("edge `{name}` outside a, b, c"),
        }
    }

    impl Seq {
        pub fn of(g: &Graph, x: &LassoRay) -> Seq {
            let d = |e: &usize| digit(g.edge_name(*e));
            Seq { pre: x.prefix().iter().map(d).collect(), cyc: x.cycle().iter().map(d).collect() }
        }

        fn at(&self, i: usize) -> u8 {
            if i <= self.pre.len() {
                self.pre[i - 1]
            } else {
                self.cyc[(i - self.pre.len() - 1) % self.cyc.len()]
            }
        }

        pub fn shift(&self, n: usize) -> Seq {
            if n <= self.pre.len() {
                return Seq { pre: self.pre[n..].to_vec(), cyc: self.cyc.clone() };
            }
            let mut cyc = self.cyc.clone();
            let r = (n - self.pre.len()) % cyc.len();
            cyc.rotate_left(r);
            Seq { pre: Vec::new(), cyc }
        }

        pub fn kappa(&self) -> Option<usize> {
            (!self.cyc.contains(&C)).then(|| self.pre.iter().filter(|&&s| s == C).count())
        }

        pub fn n(&self) -> usize {
            (1..).find(|&i| self.at(i) == C).unwrap()
        }

        /// Angle in turns, reduced into [0, 1).
        pub fn theta(&self) -> BigRational {
            let mut s = BigRational::zero();
            if self.kappa() == Some(0) {
                for (j, &e) in self.pre.iter().enumerate() {
                    s += BigRational::from_integer(e.into()) * pow2(j + 1);
                }
                let l = self.cyc.len();
                let mut c = BigInt::zero();
                for &e in &self.cyc {
                    c = c * 2 + e;
                }
                let period = (BigInt::one() << l) - 1;
                s += BigRational::new(c, period) * pow2(self.pre.len());
            } else {
                for j in 1..self.n() {
                    s += BigRational::from_integer(self.at(j).into()) * pow2(j);
                }
            }
            frac(&s)
        }
    }

    fn frac(x: &BigRational) -> BigRational {
        x - x.floor()
    }

    pub fn circ(s: &BigRational, t: &BigRational) -> BigRational {
        let f = frac(&(s - t));
        let g = BigRational::one() - &f;
        f.min(g)
    }

    fn horizon(x: &Seq, y: &Seq) -> usize {
        let (a, b) = (x.cyc.len(), y.cyc.len());
        x.pre.len().max(y.pre.len()) + a * b / num_integer::gcd(a, b) + 1
    }

    fn d_map(x: &Seq, y: &Seq, f: impl Fn(u8) -> u8) -> BigRational {
        (1..=horizon(x, y)).find(|&i| f(x.at(i)) != f(y.at(i))).map_or_else(BigRational::zero, |i| pow2(i - 1))
    }

    pub fn d_g(x: &Seq, y: &Seq) -> BigRational {
        d_map(x, y, |s| s)
    }

    pub fn d_tau(x: &Seq, y: &Seq) -> BigRational {
        d_map(x, y, |s| u8::from(s == C))
    }

    pub fn lambda(x: &Seq, y: &Seq, k: usize) -> BigRational {
        if k == 0 {
            return circ(&x.theta(), &y.theta());
        }
        let (nx, ny) = (x.n(), y.n());
        let (tx, ty) = (x.theta(), y.theta());
        let mut v = (pow2(nx) - pow2(ny)).abs() + circ(&tx, &ty);
        if nx == ny && tx == ty {
            v += pow2(2 + nx) * lambda(&x.shift(nx), &y.shift(ny), k - 1);
        }
        v
    }

    pub fn d_k(x: &Seq, y: &Seq) -> BigRational {
        let k = x.kappa().expect("finite stratum");
        assert_eq!(Some(k), y.kappa());
        d_tau(x, y) + lambda(x, y, k)
    }

    fn e(t: &BigRational) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * super::to_f64(t))
    }

    /// zeta unrolled level by level on a finite stratum.
    pub fn zeta(x: &Seq) -> Complex64 {
        let mut x = x.clone();
        let mut scale = 1.0;
        let mut z = Complex64::zero();
        for _ in 0..x.kappa().expect("finite stratum") {
            let n = x.n();
            z += scale * (1.0 - 2f64.powi(1 - n as i32)) * e(&x.theta());
            scale *= 2f64.powi(-3 - n as i32);
            x = x.shift(n);
        }
        z + scale * e(&x.theta())
    }

    pub fn unit(t: &BigRational) -> Complex64 {
        e(t)
    }
}

fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

/// Lassos with prefix length <= max_pre and cycle length <= max_cyc.
fn corpus(p: &EmbeddingPair, max_pre: usize, max_cyc: usize, finite: bool) -> Vec<LassoRay> {
    let g = &p.g;
    let mut cycles = Vec::new();
    for n in 1..=max_cyc {
        for v in 0..g.vertex_count() {
            for w in g.paths_of_length(n, Some(v), Some(v)) {
                if !finite || w.edges.iter().all(|&e| p.in_image(e)) {
                    cycles.push(w.edges);
                }
            }
        }
    }
    let mut prefixes = vec![Vec::new()];
    for n in 1..=max_pre {
        prefixes.extend(g.paths_of_length(n, None, None).into_iter().map(|w| w.edges));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for pre in &prefixes {
        for c in &cycles {
            if let Ok(r) = LassoRay::new(g, pre.clone(), c.clone()) {
                if seen.insert(r.clone()) {
                    out.push(r);
                }
            }
        }
    }
    out
}

fn stratum(p: &EmbeddingPair, x: &LassoRay) -> Option<usize> {
    match kappa(p, x) {
        Kappa::Finite(k) => Some(k),
        Kappa::Infinite => None,
    }
}

struct Strata {
    all: Vec<LassoRay>,
    by_kappa: HashMap<usize, Vec<LassoRay>>,
}

impl Strata {
    fn new(p: &EmbeddingPair, rays: Vec<LassoRay>) -> Strata {
        let mut by_kappa: HashMap<usize, Vec<LassoRay>> = HashMap::new();
        let mut all = Vec::new();
        for r in rays {
            if let Some(k) = stratum(p, &r) {
                by_kappa.entry(k).or_default().push(r.clone());
                all.push(r);
            }
        }
        Strata { all, by_kappa }
    }

    fn pick(&self, r: &mut ChaCha8Rng) -> LassoRay {
        self.all.choose(r).unwrap().clone()
    }

    /// A ray of the same stratum as x, often sharing a long prefix with it.
    fn partner(&self, p: &EmbeddingPair, x: &LassoRay, r: &mut ChaCha8Rng) -> LassoRay {
        let k = stratum(p, x).unwrap();
        if r.gen_bool(0.6) {
            for _ in 0..24 {
                let h = r.gen_range(1..=7);
                let head = x.take(h);
                let used = head.iter().filter(|&&e| !p.in_image(e)).count();
                let Some(rest) = k.checked_sub(used).and_then(|j| self.by_kappa.get(&j)) else { continue };
                let o = rest.choose(r).unwrap();
                let mut pre = head;
                pre.extend_from_slice(o.prefix());
                if let Ok(y) = LassoRay::new(&p.g, pre, o.cycle().to_vec()) {
                    return y;
                }
            }
        }
        self.by_kappa[&k].choose(r).unwrap().clone()
    }
}

fn metric_axioms(p: &EmbeddingPair, s: &Strata, seed: u64, use_oracle: bool) -> Outcome {
    let m = Metric::new(p).map_err(|e| e.to_string())?;
    let mut r = rng(seed);
    let d = |x: &LassoRay, y: &LassoRay| m.d_stratum(x, y).unwrap();
    let (mut pairs, mut zeros, mut triples) = (0, 0, 0);
    for _ in 0..10_000 {
        let x = s.pick(&mut r);
        let y = s.partner(p, &x, &mut r);
        let dxy = d(&x, &y);
        ensure!(dxy == d(&y, &x), "asymmetric at {} / {}", x.display(&p.g), y.display(&p.g));
        let dq = m.d_quotient_graph(&x, &y);
        let dg = d_shift(&x, &y);
        let lam = m.lambda(&x, &y).unwrap();
        ensure!(dq <= dxy && dxy <= &dg * q(3, 1), "bounds fail at {} / {}", x.display(&p.g), y.display(&p.g));
        ensure!(lam <= &dg * q(2, 1), "lambda bound fails at {} / {}", x.display(&p.g), y.display(&p.g));
        let same = canonical(p, &x) == canonical(p, &y);
        ensure!(dxy.is_zero() == same, "separation fails at {} / {}", x.display(&p.g), y.display(&p.g));
        zeros += usize::from(same);
        if use_oracle {
            let (ox, oy) = (oracle::Seq::of(&p.g, &x), oracle::Seq::of(&p.g, &y));
            ensure!(dxy == oracle::d_k(&ox, &oy), "oracle disagrees at {} / {}", x.display(&p.g), y.display(&p.g));
            ensure!(dg == oracle::d_g(&ox, &oy), "d_G disagrees at {} / {}", x.display(&p.g), y.display(&p.g));
        }
        pairs += 1;
    }
    for _ in 0..10_000 {
        let x = s.pick(&mut r);
        let y = s.partner(p, &x, &mut r);
        let z = if r.gen_bool(0.5) { s.partner(p, &x, &mut r) } else { s.partner(p, &y, &mut r) };
        ensure!(
            d(&x, &z) <= d(&x, &y) + d(&y, &z),
            "triangle fails at {} / {} / {}",
            x.display(&p.g),
            y.display(&p.g),
            z.display(&p.g)
        );
        triples += 1;
    }
    Ok(format!("{} rays, {pairs} pairs ({zeros} at distance 0), {triples} triples", s.all.len()))
}

/// A two-vertex pair satisfying the standing hypotheses, drawn at random.
fn random_two_vertex(seed: u64) -> EmbeddingPair {
    let mut r = rng(seed);
    let vs = ["u", "w"];
    loop {
        let mut h_edges = Vec::new();
        let mut g_edges = Vec::new();
        let (mut x0, mut x1) = (Vec::new(), Vec::new());
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                for k in 0..r.gen_range(0..=1) {
                    let h = format!("h{i}{j}{k}");
                    for s in ["0", "1", "s"] {
                        g_edges.push((format!("g{i}{j}{k}{s}"), *a, *b));
                    }
                    x0.push((h.clone(), format!("g{i}{j}{k}0")));
                    x1.push((h.clone(), format!("g{i}{j}{k}1")));
                    h_edges.push((h, *a, *b));
                }
                for k in 0..r.gen_range(0..=1) {
                    g_edges.push((format!("e{i}{j}{k}"), *a, *b));
                }
            }
        }
        let Ok(g) = Graph::new(&vs, &g_edges) else { continue };
        let Ok(h) = Graph::new(&vs, &h_edges) else { continue };
        let x0: Vec<(&str, &str)> = x0.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let x1: Vec<(&str, &str)> = x1.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let Ok(p) = EmbeddingPair::from_names(g, h, &[("u", "u"), ("w", "w")], &x0, &x1) else { continue };
        let rep = p.check_standing_hypotheses();
        if rep.standing() && rep.h_has_cycle && p.h.edge_count() >= 2 {
            return p;
        }
    }
}

fn c1_hypotheses() -> Outcome {
    let r2 = full2().check_standing_hypotheses();
    let f = r2.failures();
    ensure!(f.len() == 1 && f[0].0 == "H2" && f[0].1.witness.is_some(), "FULL2 report: {r2}");
    let r3 = full3().check_standing_hypotheses();
    ensure!(r3.standing(), "FULL3 report: {r3}");
    Ok(format!("FULL2 fails only H2 ({}), FULL3 passes all four", f[0].1.witness.as_deref().unwrap_or("")))
}

fn c2_metric() -> Outcome {
    let p3 = full3();
    let s3 = Strata::new(&p3, corpus(&p3, 5, 2, true));
    let a = metric_axioms(&p3, &s3, 2, true)?;
    let p2 = random_two_vertex(7);
    let s2 = Strata::new(&p2, corpus(&p2, 3, 2, true));
    let b = metric_axioms(&p2, &s2, 3, false)?;
    Ok(format!("FULL3: {a}; two-vertex ({} G-edges): {b}", p2.g.edge_count()))
}

fn c3_expansive() -> Outcome {
    let p = full3();
    let m = Metric::new(&p).unwrap();
    let classes: Vec<LassoRay> = {
        let mut seen = HashSet::new();
        corpus(&p, 5, 2, true).into_iter().map(|x| canonical(&p, &x).rep).filter(|x| seen.insert(x.clone())).collect()
    };
    let s = Strata::new(&p, classes);
    let quarter = q(1, 4);
    let mut checked = 0;
    let mut r = rng(5);
    for k in s.by_kappa.keys().copied().collect::<Vec<_>>() {
        let xs = &s.by_kappa[&k];
        for (i, x) in xs.iter().enumerate() {
            for y in &xs[i + 1..] {
                let d = m.d_stratum(x, y).unwrap();
                if d > quarter || d.is_zero() {
                    continue;
                }
                // thin the quadratic corpus
                if !r.gen_bool(0.25) {
                    continue;
                }
                let (sx, sy) = (canonical(&p, &x.shift()).rep, canonical(&p, &y.shift()).rep);
                let ds = m.d_stratum(&sx, &sy).unwrap();
                ensure!(
                    &d * q(2, 1) <= ds && ds <= &d * q(8, 1),
                    "ratio {} at {} / {}",
                    &ds / &d,
                    x.display(&p.g),
                    y.display(&p.g)
                );
                checked += 1;
            }
        }
    }
    let ray = |t: &str| LassoRay::parse(&p.g, t).unwrap();
    let (x, y) = (ray("c;a"), ray("c,b;a"));
    let lib = m.d_stratum(&x.shift(), &y.shift()).unwrap() / m.d_stratum(&x, &y).unwrap();
    let (ox, oy) = (oracle::Seq::of(&p.g, &x), oracle::Seq::of(&p.g, &y));
    let want = oracle::d_k(&ox.shift(1), &oy.shift(1)) / oracle::d_k(&ox, &oy);
    ensure!(lib == want && want == q(8, 1), "witness ratio {lib}, oracle {want}");
    ensure!(checked >= 1000, "only {checked} close pairs");
    Ok(format!("{checked} class pairs with d <= 1/4; witness ratio {lib}"))
}

fn c4_lifting() -> Outcome {
    let mut total = 0;
    let mut violations = 0;
    let mut first: Option<String> = None;
    for (p, seed) in [(full3(), 11u64), (random_two_vertex(7), 12)] {
        let m = Metric::new(&p).unwrap();
        let s = Strata::new(&p, corpus(&p, if p.g.vertex_count() == 1 { 5 } else { 3 }, 2, true));
        let mut r = rng(seed);
        let mut done = 0;
        let mut tries = 0;
        while done < 700 && tries < 100_000 {
            tries += 1;
            let y = s.pick(&mut r);
            let sy = y.shift();
            let x = s.partner(&p, &sy, &mut r);
            let base = m.d_stratum(&x, &sy).unwrap();
            if base > q(1, 2) {
                continue;
            }
            let z = lift_preimage(&p, &x, &y).map_err(|e| e.to_string())?;
            ensure!(canonical(&p, &z.shift()) == canonical(&p, &x), "shift of lift misses {}", x.display(&p.g));
            let dz = m.d_stratum(&z, &y).unwrap();
            if dz > &base * q(1, 2) {
                violations += 1;
                first.get_or_insert_with(|| {
                    format!("d(z, y) = {dz} > {base}/2 at x = {}, y = {}", x.display(&p.g), y.display(&p.g))
                });
            }
            done += 1;
        }
        total += done;
    }
    ensure!(total >= 1000, "only {total} samples");
    ensure!(violations == 0, "{violations} of {total} samples break the contraction; first: {}", first.unwrap_or_default());
    Ok(format!("{total} lifts checked on FULL3 and the two-vertex pair"))
}

fn c5_zeta() -> Outcome {
    let p = full3();
    let tables = p.completion_tables().unwrap();
    let m = Metric::new(&p).unwrap();
    let all = corpus(&p, 5, 2, false);
    let depth = 24;
    let mut zs = HashMap::new();
    for x in &all {
        let z = zeta_approx(&p, &tables, x, depth).map_err(|e| e.to_string())?;
        ensure!(z.value.norm() <= 1.0 + z.error, "|zeta| too large at {}", x.display(&p.g));
        if stratum(&p, x).is_some() {
            let o = oracle::zeta(&oracle::Seq::of(&p.g, x));
            ensure!((o - z.value).norm() <= 1e-12, "zeta disagrees with unrolled sum at {}", x.display(&p.g));
        }
        zs.insert(x.clone(), z);
    }
    let mut r = rng(21);
    let mut lips = 0;
    for _ in 0..3000 {
        let x = all.choose(&mut r).unwrap();
        let y = if r.gen_bool(0.5) {
            all.choose(&mut r).unwrap().clone()
        } else {
            let mut pre = x.take(r.gen_range(1..=6));
            let o = all.choose(&mut r).unwrap();
            pre.extend_from_slice(o.prefix());
            LassoRay::new(&p.g, pre, o.cycle().to_vec()).unwrap()
        };
        let zy = match zs.get(&y) {
            Some(z) => z.clone(),
            None => zeta_approx(&p, &tables, &y, depth).unwrap(),
        };
        let zx = &zs[x];
        let d = m.d_extended(x, &y, depth).unwrap();
        let gap = (zx.value - zy.value).norm();
        ensure!(
            gap <= 8.0 * to_f64(&d.hi) + zx.error + zy.error,
            "Lipschitz bound fails at {} / {}",
            x.display(&p.g),
            y.display(&p.g)
        );
        lips += 1;
    }
    let mut rec = 0;
    for x in all.iter().filter(|x| matches!(stratum(&p, x), Some(k) if k >= 1)) {
        let o = oracle::Seq::of(&p.g, x);
        let n = o.n();
        let lhs = zeta_exact(&p, x).unwrap() - (1.0 - 2f64.powi(1 - n as i32)) * oracle::unit(&o.theta());
        let rhs = 2f64.powi(-3 - n as i32) * zeta_exact(&p, &x.shift_by(n)).unwrap();
        ensure!((lhs - rhs).norm() <= 1e-12, "recursion fails at {}", x.display(&p.g));
        rec += 1;
    }
    let inj = embedding_injectivity_check(&p, 6, 1 << 20).map_err(|e| e.to_string())?;
    ensure!(inj.collisions == 0 && inj.inconsistencies == 0, "injectivity report {inj:?}");
    Ok(format!(
        "{} rays bounded, {lips} Lipschitz pairs, {rec} recursion checks, injectivity: {} lassos / {} classes / 0 collisions",
        all.len(),
        inj.lassos,
        inj.classes
    ))
}

fn c6_figure() -> Outcome {
    let p = full3();
    let set = circle_specs(&p, 1, 4, &BigRational::zero()).map_err(|e| e.to_string())?;
    let mut counts = Vec::new();
    for n in 1..=4usize {
        let specs: Vec<_> = set.specs.iter().filter(|s| s.k() == 1 && s.levels[0].0 == n).collect();
        counts.push(specs.len());
        let r = 1.0 - 2f64.powi(1 - n as i32);
        let mut want: Vec<Complex64> = (0..1usize << (n - 1))
            .map(|j| Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / (1u64 << (n - 1)) as f64))
            .collect();
        for s in &specs {
            ensure!(s.radius() == pow2(3 + n), "radius {} at n = {n}", s.radius());
            let c = s.center();
            let hit = want.iter().position(|w| (w - c).norm() <= 1e-9);
            ensure!(hit.is_some(), "unexpected center {c} at n = {n}");
            want.swap_remove(hit.unwrap());
        }
        ensure!(want.is_empty(), "missing centers at n = {n}: {want:?}");
    }
    ensure!(counts == [1, 2, 4, 8], "counts {counts:?}");
    Ok(format!("counts {counts:?}, centers within 1e-9, radii 2^(-3-n)"))
}

/// (rank, torsion) of Z / m, a one-by-one cokernel.
fn cyclic(m: i64) -> (usize, Vec<BigInt>) {
    match m.abs() {
        0 => (1, vec![]),
        1 => (0, vec![]),
        a => (0, vec![BigInt::from(a)]),
    }
}

fn det_bareiss(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn c7_ktheory() -> Outcome {
    let p = full3();
    let k = ruelle_k_theory(&p);
    let ag = p.g.adjacency_matrix().entry_i64(0, 0).unwrap();
    let ah = p.h.adjacency_matrix().entry_i64(0, 0).unwrap();
    // one-by-one: transposes are trivial
    let (cg, kg) = (cyclic(1 - ag), cyclic(1 - ag).0);
    let (ch, kh) = (cyclic(1 - ah), cyclic(1 - ah).0);
    let k0 = FgAbelianGroup { rank: cg.0 + kh, torsion: cg.1.clone() };
    let k1 = FgAbelianGroup { rank: ch.0 + kg, torsion: ch.1.clone() };
    ensure!(k.k0_rs == k0 && k.k0_ru == k0, "K0 = {} / {}, want {k0}", k.k0_rs, k.k0_ru);
    ensure!(k.k1_rs == k1 && k.k1_ru == k1, "K1 = {} / {}, want {k1}", k.k1_rs, k.k1_ru);
    ensure!(k0.to_string() == "Z^1 (+) Z/2" && k1.to_string() == "Z^1", "oracle gave {k0}, {k1}");
    let mut r = rng(31);
    for t in 0..1000 {
        let (rows, cols) = (r.gen_range(1..=8), r.gen_range(1..=8));
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(&a);
        let s = smith_normal_form(&m);
        ensure!(s.verify(&m), "verification fails on sample {t}");
        ensure!(s.u.mul(&m).mul(&s.v) == s.d, "U A V != D on sample {t}");
        ensure!(s.u.determinant().abs().is_one() && s.v.determinant().abs().is_one(), "not unimodular on sample {t}");
        let diag = s.diagonal();
        let g = a.iter().flatten().fold(0i64, |g, &x| num_integer::gcd(g, x));
        ensure!(diag[0] == BigInt::from(g), "first invariant factor {} vs gcd {g} on sample {t}", diag[0]);
        if rows == cols {
            let wide: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
            let prod = diag.iter().fold(BigInt::one(), |p, d| p * d);
            ensure!(prod == BigInt::from(det_bareiss(&wide).abs()), "|det| mismatch on sample {t}");
        }
    }
    Ok(format!("K0 = {k0}, K1 = {k1} for both; 1000 Smith forms verified"))
}

fn c8_synthesis() -> Outcome {
    let mut r = rng(41);
    let mut n = 0;
    let mut biggest = 0;
    for _ in 0..24 {
        let draw = |r: &mut ChaCha8Rng| -> Vec<i64> { (0..r.gen_range(0..=3)).map(|_| r.gen_range(2..=12)).collect() };
        let rank = r.gen_range(0..=2);
        let t1 = draw(&mut r);
        let t0 = draw(&mut r);
        let k1 = FgAbelianGroup::new(rank, &t1);
        let k0 = FgAbelianGroup::new(0, &t0);
        let pair = synthesize_seed(&k0, &k1).map_err(|e| format!("{k0} / {k1}: {e}"))?;
        let text = serialize_bundle(&pair, Some("target"));
        let back = parse_bundle(&text).map_err(|e| e.to_string())?.pair;
        ensure!(back.check_standing_hypotheses().standing(), "check fails for {k0} / {k1}");
        let k = ruelle_k_theory(&back);
        let order = |t: &[i64]| t.iter().fold(BigInt::one(), |a, &b| a * b);
        ensure!(k.k1_rs == k1, "K1 = {} for target {k1}", k.k1_rs);
        ensure!(k.k0_rs.torsion_part() == k0 && k.k0_rs.rank == rank, "K0 = {} for target {k0}, rank {rank}", k.k0_rs);
        ensure!(
            k.k1_rs.torsion_part().order() == Some(order(&t1)) && k.k0_rs.torsion_part().order() == Some(order(&t0)),
            "torsion orders differ for {k0} / {k1}"
        );
        biggest = biggest.max(back.g.edge_count());
        n += 1;
    }
    Ok(format!("{n} targets round-tripped, largest G has {biggest} edges"))
}

/// Counts H-paths of length n by depth-first search.
fn count_paths(g: &Graph, n: usize) -> usize {
    fn go(g: &Graph, v: usize, left: usize) -> usize {
        if left == 0 {
            return 1;
        }
        g.out_edges(v).map(|e| go(g, g.target(e), left - 1)).sum()
    }
    (0..g.vertex_count()).map(|v| go(g, v, n)).sum()
}

fn c9_complex() -> Outcome {
    let p = full3();
    let c = build_pair_complex(&p).map_err(|e| e.to_string())?;
    let h6 = count_paths(&p.h, 6);
    ensure!(c.containments.len() == 16 && c.containments_hold(), "containments {:?}", c.containments);
    ensure!(c.disjoint, "cells overlap");
    ensure!(c.vertex_cells[6].len() == 2 * h6, "|V6| = {}, |H^6| = {h6}", c.vertex_cells[6].len());
    ensure!(c.symmetric_quotient_rank == h6, "rank {}", c.symmetric_quotient_rank);
    ensure!(c.boundary.len() == h6 && c.boundary_vanishes(), "boundary {:?}", c.boundary);
    Ok(format!(
        "{} blocks, 8 containments (16 checks) hold, |V6| = {}, rank {h6}, boundary zero",
        c.block_vertices,
        c.vertex_cells[6].len()
    ))
}

const M: usize = 8;

fn edge_names(p: &EmbeddingPair) -> Vec<usize> {
    (0..p.g.edge_count()).collect()
}

fn random_word(r: &mut ChaCha8Rng, edges: &[usize], len: usize) -> Vec<usize> {
    (0..len).map(|_| *edges.choose(r).unwrap()).collect()
}

/// Bi-lasso with window [-5, 5), periodic past and future.
struct Spec {
    past: Vec<usize>,
    window: Vec<usize>,
    future: Vec<usize>,
}

const LEFT: i64 = -5;

impl Spec {
    fn random(r: &mut ChaCha8Rng, edges: &[usize]) -> Spec {
        let pl = r.gen_range(1..=2);
        let fl = r.gen_range(1..=2);
        Spec { past: random_word(r, edges, pl), window: random_word(r, edges, 10), future: random_word(r, edges, fl) }
    }

    fn build(&self, g: &Graph) -> BiLasso {
        BiLasso::new(g, self.past.clone(), self.window.clone(), self.future.clone(), LEFT).unwrap()
    }

    /// Same edges at positions -2..=3, everything else redrawn.
    fn near(&self, r: &mut ChaCha8Rng, edges: &[usize]) -> Spec {
        let mut s = Spec::random(r, edges);
        for pos in -2..=3i64 {
            let i = (pos - LEFT) as usize;
            s.window[i] = self.window[i];
        }
        s
    }
}

fn levels_equal(a: &Tower, b: &Tower) -> bool {
    a.levels == b.levels
}

fn truncate(t: &Tower) -> Tower {
    Tower { levels: t.levels[..t.levels.len() - 1].to_vec() }
}

fn inverse_shift(t: &Tower) -> Tower {
    Tower { levels: t.levels[1..].to_vec() }
}

fn smale_on(p: &EmbeddingPair, seed: u64) -> Outcome {
    let m = Metric::new(p).unwrap();
    let edges = edge_names(p);
    let mut r = rng(seed);
    let tower = |b: &BiLasso| pi_xi_tower(p, b, M);
    let slack = pow2(M) * q(3, 1);
    let half = q(1, 2);
    let (mut b1, mut b2, mut b3, mut b4, mut c1, mut c2) = (0, 0, 0, 0, 0, 0);
    for _ in 0..60 {
        let sx = Spec::random(&mut r, &edges);
        let bx = sx.build(&p.g);
        let by = sx.near(&mut r, &edges).build(&p.g);
        let (x, y) = (tower(&bx), tower(&by));
        let z = tower(&sx.near(&mut r, &edges).build(&p.g));
        let br = |a: &Tower, b: &Tower| bracket(&m, a, b).ok();
        ensure!(br(&x, &x).is_some_and(|t| levels_equal(&t, &x)), "B1 fails");
        b1 += 1;
        let Some(xz) = br(&x, &z) else { continue };
        if let Some(yz) = br(&y, &z) {
            if let Some(l) = br(&x, &yz) {
                ensure!(levels_equal(&l, &xz), "B2 fails");
                b2 += 1;
            }
        }
        if let Some(xy) = br(&x, &y) {
            if let Some(l) = br(&xy, &z) {
                ensure!(levels_equal(&l, &xz), "B3 fails");
                b3 += 1;
            }
            let (sx_, sy_) = (shift_tower(p, &x), shift_tower(p, &y));
            if let Some(l) = br(&sx_, &sy_) {
                let want = shift_tower(p, &xy);
                if let Some(n) = (0..=M).find(|&n| l.levels[n] != want.levels[n]) {
                    return Err(format!(
                        "B4 fails at level {n}: [sx, sy] gives {}, s[x, y] gives {}",
                        l.levels[n].rep.display(&p.g),
                        want.levels[n].rep.display(&p.g)
                    ));
                }
                b4 += 1;
            }
            // [x, w] = w: w is stable-close to x
            if br(&x, &xy).is_some_and(|t| levels_equal(&t, &xy)) {
                let a = tower_distance(&m, &x, &xy).unwrap();
                let s = tower_distance(&m, &shift_tower(p, &x), &shift_tower(p, &xy)).unwrap();
                ensure!(s.hi <= &half * &a.hi + &slack, "C1 fails: {} vs {}", s.hi, a.hi);
                c1 += 1;
            }
        }
        // [x, w] = x: w is unstable-close to x; one extra level so the inverse shift keeps depth M
        let (x1, y1) = (pi_xi_tower(p, &bx, M + 1), pi_xi_tower(p, &by, M + 1));
        if let Some(w) = br(&y1, &x1) {
            if br(&x1, &w).is_some_and(|t| levels_equal(&t, &x1)) {
                let a = tower_distance(&m, &truncate(&x1), &truncate(&w)).unwrap();
                let s = tower_distance(&m, &inverse_shift(&x1), &inverse_shift(&w)).unwrap();
                ensure!(s.hi <= &half * &a.hi + &slack, "C2 fails: {} vs {}", s.hi, a.hi);
                c2 += 1;
            }
        }
    }
    ensure!(b2 > 0 && b3 > 0 && b4 > 0 && c1 > 0 && c2 > 0, "too few defined brackets: {b2} {b3} {b4} {c1} {c2}");

    // pair_related against d = 0
    let sym: Vec<usize> = edges.iter().copied().filter(|&e| p.in_image(e)).collect();
    let partner = |e: usize| p.partner(e).unwrap();
    let eps = |e: usize| p.epsilon(e).unwrap();
    let mut related = 0;
    let mut unrelated = 0;
    for t in 0..100 {
        let sx = Spec::random(&mut r, &edges);
        let (x, y) = match t % 4 {
            0 => {
                // x = xi^i(z), y = xi^(1-i)(z)
                let i = r.gen_range(0..2u8);
                let side: Vec<usize> = sym.iter().copied().filter(|&e| eps(e) == i).collect();
                let s = Spec { past: random_word(&mut r, &side, 1), window: random_word(&mut r, &side, 10), future: random_word(&mut r, &side, 1) };
                let flip = |w: &[usize]| w.iter().map(|&e| partner(e)).collect::<Vec<_>>();
                let x = s.build(&p.g);
                let y = BiLasso::new(&p.g, flip(&s.past), flip(&s.window), flip(&s.future), LEFT).unwrap();
                (x, y)
            }
            1 => {
                // carry: agree before the pivot, swapped tails after it
                let i = r.gen_range(0..2u8);
                let cut = r.gen_range(1..9usize);
                let lo_tail = *sym.iter().find(|&&e| eps(e) == i).unwrap();
                let hi_pivot = *sym.iter().find(|&&e| eps(e) == 1 - i).unwrap();
                let nonimage: Vec<usize> = edges.iter().copied().filter(|&e| !p.in_image(e)).collect();
                let pivot_equal = !nonimage.is_empty() && r.gen_bool(0.5);
                let mut wx = sx.window[..cut].to_vec();
                let mut wy = wx.clone();
                if pivot_equal {
                    let c = nonimage[0];
                    wx.push(c);
                    wy.push(c);
                } else {
                    wx.push(hi_pivot);
                    wy.push(partner(hi_pivot));
                }
                while wx.len() < 10 {
                    wx.push(lo_tail);
                    wy.push(partner(lo_tail));
                }
                let x = BiLasso::new(&p.g, sx.past.clone(), wx, vec![lo_tail], LEFT).unwrap();
                let y = BiLasso::new(&p.g, sx.past.clone(), wy, vec![partner(lo_tail)], LEFT).unwrap();
                (x, y)
            }
            _ => (sx.build(&p.g), sx.near(&mut r, &edges).build(&p.g)),
        };
        let rel = pair_related(p, &x, &y).is_some();
        let d = tower_distance(&m, &tower(&x), &tower(&y)).unwrap();
        ensure!(
            rel == d.lo.is_zero(),
            "pair_related = {rel} but distance [{}, {}] for {} / {}",
            d.lo,
            d.hi,
            x.display(&p.g),
            y.display(&p.g)
        );
        if rel {
            related += 1;
        } else {
            unrelated += 1;
        }
    }

    // right tails equal, left parts differ
    let mut sinj = 0;
    for _ in 0..100 {
        let sx = Spec::random(&mut r, &edges);
        let mut sy = Spec::random(&mut r, &edges);
        sy.future = sx.future.clone();
        let cut = r.gen_range(0..10usize);
        sy.window[cut..].copy_from_slice(&sx.window[cut..]);
        let (x, y) = (sx.build(&p.g), sy.build(&p.g));
        if x == y {
            continue;
        }
        ensure!(pair_related(p, &x, &y).is_none(), "right-tail-equal pair related: {} / {}", x.display(&p.g), y.display(&p.g));
        sinj += 1;
    }
    Ok(format!("B1 {b1}, B2 {b2}, B3 {b3}, B4 {b4}, C1 {c1}, C2 {c2}, related {related}/{unrelated}, s-injective {sinj}"))
}

fn c10_smale() -> Outcome {
    let a = smale_on(&full2(), 51)?;
    let b = smale_on(&full3(), 52)?;
    Ok(format!("FULL2: {a}; FULL3: {b}"))
}

/// Lifts through tau of the first `len` base symbols, by depth-first search.
fn lift_count(g: &Graph, base: &[String], len: usize) -> u128 {
    fn go(g: &Graph, v: usize, base: &[String]) -> u128 {
        match base.split_first() {
            None => 1,
            Some((b, rest)) => g
                .out_edges(v)
                .filter(|&e| image_name(g.edge_name(e)) == *b)
                .map(|e| go(g, g.target(e), rest))
                .sum(),
        }
    }
    (0..g.vertex_count()).map(|v| go(g, v, &base[..len])).sum()
}

fn image_name(e: &str) -> String {
    match e {
        "a" | "b" => "h'".into(),
        other => format!("{other}'"),
    }
}

fn fiber_oracle(g: &Graph, pre: &[String], cyc: &[String]) -> FiberClass {
    let identified = |s: &String| s == "h'";
    let has_id = cyc.iter().any(identified);
    let has_other = cyc.iter().any(|s| !identified(s));
    if has_id && has_other {
        return FiberClass::TotallyDisconnected;
    }
    if !has_id {
        return FiberClass::Points(lift_count(g, pre, pre.len()));
    }
    match pre.iter().rposition(|s| !identified(s)) {
        None => FiberClass::Circles(1),
        Some(last) => FiberClass::Circles(lift_count(g, pre, last + 1) as usize),
    }
}

fn c11_fibers() -> Outcome {
    let p = full3();
    let qg = p.quotient_graph().unwrap();
    let names = |w: &[usize]| w.iter().map(|&e| qg.graph.edge_name(e).to_string()).collect::<Vec<_>>();
    let mut seen = HashSet::new();
    let mut tally: HashMap<&'static str, usize> = HashMap::new();
    for plen in 0..=4 {
        let prefixes: Vec<Vec<usize>> =
            if plen == 0 { vec![vec![]] } else { qg.graph.paths_of_length(plen, None, None).into_iter().map(|w| w.edges).collect() };
        for pre in &prefixes {
            for clen in 1..=2 {
                for c in qg.graph.paths_of_length(clen, Some(0), Some(0)) {
                    let Ok(base) = LassoRay::new(&qg.graph, pre.clone(), c.edges) else { continue };
                    if !seen.insert(base.clone()) {
                        continue;
                    }
                    let got = fiber_classify(&p, &qg, &base);
                    let want = fiber_oracle(&p.g, &names(base.prefix()), &names(base.cycle()));
                    ensure!(got == want, "{}: got {got:?}, oracle {want:?}", base.display(&qg.graph));
                    let kind = match got {
                        FiberClass::Circles(_) => "circles",
                        FiberClass::Points(_) => "points",
                        FiberClass::TotallyDisconnected => "totally disconnected",
                    };
                    *tally.entry(kind).or_default() += 1;
                }
            }
        }
    }
    let r = |s: &str| LassoRay::parse(&qg.graph, s).unwrap();
    ensure!(fiber_classify(&p, &qg, &r(";c'")) == FiberClass::Points(1), "(;c') is not one point");
    ensure!(fiber_classify(&p, &qg, &r(";c',h'")) == FiberClass::TotallyDisconnected, "(;c',h') misclassified");
    let mut t: Vec<_> = tally.into_iter().collect();
    t.sort();
    Ok(format!("{} base lassos agree with the oracle: {t:?}", seen.len()))
}

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
    /// Set when the failure is an accepted, recorded deviation.
    known: Option<&'static str>,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "hypothesis gate", limit: Some(Duration::from_secs(1)), run: c1_hypotheses, known: None },
        Criterion { id: 2, name: "metric axioms", limit: Some(Duration::from_secs(60)), run: c2_metric, known: None },
        Criterion { id: 3, name: "expansiveness", limit: Some(Duration::from_secs(30)), run: c3_expansive, known: None },
        Criterion {
            id: 4,
            name: "lifting",
            limit: None,
            run: c4_lifting,
            known: Some("preimages with the prescribed first edge all share one angle, so the contraction fails when the circle distance wraps past 1/2"),
        },
        Criterion { id: 5, name: "zeta", limit: None, run: c5_zeta, known: None },
        Criterion { id: 6, name: "circle geometry", limit: None, run: c6_figure, known: None },
        Criterion { id: 7, name: "K-theory and Smith forms", limit: Some(Duration::from_secs(30)), run: c7_ktheory, known: None },
        Criterion { id: 8, name: "synthesis round trip", limit: Some(Duration::from_secs(120)), run: c8_synthesis, known: None },
        Criterion { id: 9, name: "pair complex", limit: Some(Duration::from_secs(120)), run: c9_complex, known: None },
        Criterion { id: 10, name: "Smale space", limit: None, run: c10_smale, known: None },
        Criterion { id: 11, name: "fiber classification", limit: None, run: c11_fibers, known: None },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let mut known = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str()) || *f == c.id.to_string()) {
            continue;
        }
        let t = Instant::now();
        let res = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = t.elapsed();
        let res = match (res, c.limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        let (tag, detail) = match &res {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] {:>2} {} ({:.2?}): {detail}", c.id, c.name, took);
        match (&res, c.known) {
            (Err(_), Some(why)) => {
                println!("       known deviation: {why}");
                known += 1;
            }
            (Err(_), None) => failed += 1,
            (Ok(_), Some(_)) => println!("       note: listed as a known deviation but passed"),
            (Ok(_), None) => {}
        }
    }
    if known > 0 {
        println!("{known} criteria fail as recorded deviations");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
