//! The `xiq` command line.
//!
//! Exit codes: 0 success, 1 domain failure, 2 usage or parse error.

use crate::bundle::{parse_bundle, serialize_bundle, SeedBundle};
use crate::error::Error;
use crate::invariants::complex::build_pair_complex;
use crate::invariants::ktheory::{homology_table, ruelle_k_theory};
use crate::invariants::synthesis::synthesize_seed;
use crate::invariants::FgAbelianGroup;
use crate::metric::Metric;
use crate::realization::{fiber_classify, render_svg, zeta_approx, FiberClass};
use crate::symbolic::{kappa, LassoRay};
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "xiq", about = "Quotients of edge shifts by pairs of graph embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the standing hypotheses.
    Check { bundle: PathBuf },
    /// Homology table and K-groups.
    Invariants { bundle: PathBuf },
    /// Distance between two rays (`prefix;cycle`).
    Distance {
        bundle: PathBuf,
        x: String,
        y: String,
        #[arg(long, default_value_t = 24)]
        depth: usize,
    },
    /// The planar coordinate of a ray.
    Zeta {
        bundle: PathBuf,
        ray: String,
        #[arg(long, default_value_t = 24)]
        depth: usize,
    },
    /// Shape of the fiber over a ray of the quotient graph.
    Fibers { bundle: PathBuf, ray: String },
    /// Write the circle picture as SVG.
    Render {
        bundle: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_k: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Smallest radius drawn, as a rational such as 1/4096.
        #[arg(long, default_value = "0")]
        min_radius: String,
        #[arg(long, default_value_t = 400.0)]
        scale: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build a bundle with prescribed K-groups.
    Synthesize {
        /// K_1 target, e.g. `Z^1 (+) Z/3`.
        #[arg(long)]
        k1: String,
        /// Torsion of the K_0 target, e.g. `Z/2`.
        #[arg(long)]
        k0tor: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Pair-complex checks on the 7-block presentation.
    Complex { bundle: PathBuf },
}

/// Outcome of a command: text to print and an exit code.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidPath(_)
        | Error::UnknownEdge(_)
        | Error::UnknownVertex(_)
        | Error::NotComposable(..)
        | Error::DuplicateId(_)
        | Error::EmptyGraph => 2,
        _ => 1,
    }
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn load(path: &Path) -> Result<SeedBundle, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_bundle(&text).map_err(|e| Failure { code: 2, msg: format!("{}: {e}", path.display()) })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure { code: 1, msg: format!("{}: {e}", path.display()) })
}

pub fn execute(cmd: &Command) -> Outcome {
    let mut out = String::new();
    match dispatch(cmd, &mut out) {
        Ok(code) => Outcome { code, stdout: out },
        Err(f) => {
            eprintln!("error: {}", f.msg);
            Outcome { code: f.code, stdout: out }
        }
    }
}

fn dispatch(cmd: &Command, out: &mut String) -> Result<i32, Failure> {
    match cmd {
        Command::Check { bundle } => {
            let b = load(bundle)?;
            let r = b.pair.check_standing_hypotheses();
            out.push_str(&r.to_string());
            Ok(if r.standing() { 0 } else { 1 })
        }
        Command::Invariants { bundle } => {
            let b = load(bundle)?;
            let h = homology_table(&b.pair);
            for (k, g) in h.stable.iter().enumerate() {
                let _ = writeln!(out, "H^s_{k} = {g}");
            }
            for (k, g) in h.unstable.iter().enumerate() {
                let _ = writeln!(out, "H^u_{k} = {g}");
            }
            out.push_str("H^s_k = 0 for k >= 2\nH^u_k = 0 for k >= 2\n");
            let k = ruelle_k_theory(&b.pair);
            for (key, g) in [("K0(S)", &k.k0_s), ("K1(S)", &k.k1_s), ("K0(U)", &k.k0_u), ("K1(U)", &k.k1_u)] {
                let _ = writeln!(out, "{key} = {g}");
            }
            for (key, g) in [("K0(R^s)", &k.k0_rs), ("K1(R^s)", &k.k1_rs), ("K0(R^u)", &k.k0_ru), ("K1(R^u)", &k.k1_ru)] {
                let _ = writeln!(out, "{key} = {g}");
            }
            let _ = writeln!(out, "valid = {}", k.valid);
            Ok(0)
        }
        Command::Distance { bundle, x, y, depth } => {
            let b = load(bundle)?;
            let p = &b.pair;
            let rx = LassoRay::parse(&p.g, x)?;
            let ry = LassoRay::parse(&p.g, y)?;
            let m = Metric::new(p)?;
            let d = m.d_extended(&rx, &ry, *depth)?;
            let _ = writeln!(out, "kappa = {} {}", kappa(p, &rx), kappa(p, &ry));
            let _ = writeln!(out, "distance = {d}");
            let _ = writeln!(out, "exact = {}", d.is_exact());
            Ok(0)
        }
        Command::Zeta { bundle, ray, depth } => {
            let b = load(bundle)?;
            let p = &b.pair;
            let r = LassoRay::parse(&p.g, ray)?;
            let z = zeta_approx(p, &p.completion_tables()?, &r, *depth)?;
            let _ = writeln!(out, "re = {:.12}", z.value.re);
            let _ = writeln!(out, "im = {:.12}", z.value.im);
            let _ = writeln!(out, "error = {:.3e}", z.error);
            Ok(0)
        }
        Command::Fibers { bundle, ray } => {
            let b = load(bundle)?;
            let q = b.pair.quotient_graph()?;
            let r = LassoRay::parse(&q.graph, ray)?;
            let text = match fiber_classify(&b.pair, &q, &r) {
                FiberClass::Circles(n) => format!("circles {n}"),
                FiberClass::Points(n) => format!("points {n}"),
                FiberClass::TotallyDisconnected => "totally-disconnected".to_string(),
            };
            let _ = writeln!(out, "fiber = {text}");
            Ok(0)
        }
        Command::Render { bundle, max_k, depth, min_radius, scale, output } => {
            let b = load(bundle)?;
            let r: BigRational = min_radius.parse().map_err(|_| usage(format!("bad --min-radius `{min_radius}`")))?;
            let svg = render_svg(&b.pair, *max_k, *depth, &r, *scale)?;
            write_file(output, &svg)?;
            let _ = writeln!(out, "circles = {}", svg.matches("<circle").count());
            let _ = writeln!(out, "output = {}", output.display());
            Ok(0)
        }
        Command::Synthesize { k1, k0tor, output } => {
            let k1g: FgAbelianGroup = k1.parse().map_err(usage)?;
            let k0g: FgAbelianGroup = k0tor.parse().map_err(usage)?;
            if k0g.rank != 0 {
                return Err(usage("--k0tor must be a finite group"));
            }
            let pair = synthesize_seed(&k0g, &k1g)?;
            write_file(output, &serialize_bundle(&pair, Some("synthesized")))?;
            let report = pair.check_standing_hypotheses();
            let k = ruelle_k_theory(&pair);
            let want_k0 = FgAbelianGroup::free(k1g.rank).direct_sum(&k0g);
            let ok = report.standing() && k.k0_rs == want_k0 && k.k1_rs == k1g;
            let _ = writeln!(out, "G vertices = {}", pair.g.vertex_count());
            let _ = writeln!(out, "G edges = {}", pair.g.edge_count());
            let _ = writeln!(out, "H vertices = {}", pair.h.vertex_count());
            let _ = writeln!(out, "H edges = {}", pair.h.edge_count());
            let _ = writeln!(out, "standing = {}", report.standing());
            let _ = writeln!(out, "K0(R^s) = {}", k.k0_rs);
            let _ = writeln!(out, "K1(R^s) = {}", k.k1_rs);
            let _ = writeln!(out, "round_trip = {}", if ok { "pass" } else { "fail" });
            Ok(if ok { 0 } else { 1 })
        }
        Command::Complex { bundle } => {
            let b = load(bundle)?;
            let c = build_pair_complex(&b.pair)?;
            let _ = writeln!(out, "block vertices = {}", c.block_vertices);
            let _ = writeln!(out, "block edges = {}", c.block_edges);
            for (k, cell) in c.vertex_cells.iter().enumerate() {
                let _ = writeln!(out, "|V_{k}| = {}", cell.len());
            }
            for (k, cell) in c.edge_cells.iter().enumerate() {
                let _ = writeln!(out, "|E_{k}| = {}", cell.len());
            }
            let _ = writeln!(out, "disjoint = {}", c.disjoint);
            for ct in &c.containments {
                let _ = writeln!(out, "{} = {}", ct.label, if ct.holds() { "pass" } else { "fail" });
            }
            let _ = writeln!(out, "symmetric quotient rank = {}", c.symmetric_quotient_rank);
            let _ = writeln!(out, "long paths end in V_6 = {}", c.long_paths_end_in_top);
            let _ = writeln!(out, "boundary vanishes = {}", c.boundary_vanishes());
            let _ = writeln!(out, "carry edges outside cells = {}", c.pivot.carry_edges);
            let ok = c.disjoint && c.containments_hold() && c.boundary_vanishes() && c.long_paths_end_in_top;
            Ok(if ok { 0 } else { 1 })
        }
    }
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let o = execute(&cli.command);
    print!("{}", o.stdout);
    o.code
}
