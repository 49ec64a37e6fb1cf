//! Line-based seed bundle files.
//!
//! ```text
//! # comment
//! name full3
//! graph G
//! vertex v
//! edge a v v
//! graph H
//! vertex v
//! edge h v v
//! map vertex v v
//! map xi0 h a
//! map xi1 h b
//! ```

use crate::embedding::EmbeddingPair;
use crate::error::{Error, Result};
use crate::graph::Graph;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct SeedBundle {
    pub name: Option<String>,
    pub pair: EmbeddingPair,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    G,
    H,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_bundle(text: &str) -> Result<SeedBundle> {
    let mut g = Graph::empty();
    let mut h = Graph::empty();
    let mut name = None;
    let mut section = Section::None;
    let mut vmap: HashMap<usize, usize> = HashMap::new();
    let mut xi: [HashMap<usize, usize>; 2] = [HashMap::new(), HashMap::new()];
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tok: Vec<&str> = content.split_whitespace().collect();
        let here = |e: Error| err(line, e.to_string());
        match tok.as_slice() {
            ["name", rest @ ..] if !rest.is_empty() => name = Some(rest.join(" ")),
            ["graph", "G"] => section = Section::G,
            ["graph", "H"] => section = Section::H,
            ["graph", other] => return Err(err(line, format!("unknown graph `{other}`, expected G or H"))),
            ["vertex", id] => {
                let target = match section {
                    Section::G => &mut g,
                    Section::H => &mut h,
                    Section::None => return Err(err(line, "vertex before any `graph` line")),
                };
                target.add_vertex(id).map_err(here)?;
            }
            ["edge", id, src, dst] => {
                let target = match section {
                    Section::G => &mut g,
                    Section::H => &mut h,
                    Section::None => return Err(err(line, "edge before any `graph` line")),
                };
                target.add_edge(id, src, dst).map_err(here)?;
            }
            ["map", "vertex", hv, gv] => {
                let a = h.vertex(hv).map_err(here)?;
                let b = g.vertex(gv).map_err(here)?;
                if vmap.insert(a, b).is_some() {
                    return Err(err(line, format!("vertex `{hv}` mapped twice")));
                }
            }
            ["map", which @ ("xi0" | "xi1"), he, ge] => {
                let k = usize::from(*which == "xi1");
                let a = h.edge(he).map_err(here)?;
                let b = g.edge(ge).map_err(here)?;
                if xi[k].insert(a, b).is_some() {
                    return Err(err(line, format!("{which}({he}) given twice")));
                }
            }
            _ => return Err(err(line, format!("malformed line `{content}`"))),
        }
    }
    if g.vertex_count() == 0 {
        return Err(err(last_line.max(1), "graph G has no vertices"));
    }
    if h.vertex_count() == 0 {
        return Err(err(last_line.max(1), "graph H has no vertices"));
    }
    let vm = (0..h.vertex_count())
        .map(|v| vmap.get(&v).copied().ok_or_else(|| err(last_line, format!("vertex `{}` of H is unmapped", h.vertex_name(v)))))
        .collect::<Result<Vec<_>>>()?;
    let edges = |k: usize| {
        (0..h.edge_count())
            .map(|e| {
                xi[k].get(&e).copied().ok_or_else(|| err(last_line, format!("edge `{}` has no xi{k} image", h.edge_name(e))))
            })
            .collect::<Result<Vec<_>>>()
    };
    let (e0, e1) = (edges(0)?, edges(1)?);
    let pair = EmbeddingPair::new(g, h, vm, e0, e1)?;
    Ok(SeedBundle { name, pair })
}

pub fn serialize_bundle(pair: &EmbeddingPair, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(n) = name {
        out.push_str(&format!("name {n}\n"));
    }
    for (label, graph) in [("G", &pair.g), ("H", &pair.h)] {
        out.push_str(&format!("graph {label}\n"));
        for v in graph.vertex_names() {
            out.push_str(&format!("vertex {v}\n"));
        }
        for e in 0..graph.edge_count() {
            out.push_str(&format!(
                "edge {} {} {}\n",
                graph.edge_name(e),
                graph.vertex_name(graph.source(e)),
                graph.vertex_name(graph.target(e))
            ));
        }
    }
    for v in 0..pair.h.vertex_count() {
        out.push_str(&format!("map vertex {} {}\n", pair.h.vertex_name(v), pair.g.vertex_name(pair.xi0_vertex(v))));
    }
    for i in 0..2u8 {
        for e in 0..pair.h.edge_count() {
            out.push_str(&format!("map xi{i} {} {}\n", pair.h.edge_name(e), pair.g.edge_name(pair.xi_edge(i, e))));
        }
    }
    out
}
