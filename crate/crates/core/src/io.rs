//! Text formats: edge lists, graph6, and short graph names such as `K_4`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Parses an edge list: one edge per line as `u v` or `u v w` (0-based,
/// `w` in `[0, 1]`); blank lines and lines starting with `#` are skipped.
/// The vertex count is `max(min_order, largest index + 1)`.
pub fn parse_edge_list(text: &str, min_order: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut n = min_order;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(k) = comment.trim().strip_prefix("n =") {
                n = n.max(k.trim().parse().map_err(|_| {
                    Error::Parse(format!("line {}: bad order header", lineno + 1))
                })?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: {line:?}", lineno + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(bad());
        }
        let u: usize = fields[0].parse().map_err(|_| bad())?;
        let v: usize = fields[1].parse().map_err(|_| bad())?;
        let w: f64 = match fields.get(2) {
            Some(s) => s.parse().map_err(|_| bad())?,
            None => 1.0,
        };
        if u == v || !(0.0..=1.0).contains(&w) {
            return Err(bad());
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v, w));
    }
    Graph::from_weighted_edges(n, &edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("# n = {}\n", g.n());
    for (u, v, w) in g.edges() {
        if w == 1.0 {
            out.push_str(&format!("{u} {v}\n"));
        } else {
            out.push_str(&format!("{u} {v} {w}\n"));
        }
    }
    out
}

const GRAPH6_HEADER: &str = ">>graph6<<";

/// graph6 encoding of an unweighted graph.
pub fn to_graph6(g: &Graph) -> Result<String> {
    g.require_unweighted()?;
    let n = g.n();
    let mut out = String::new();
    if n < 63 {
        out.push((n as u8 + 63) as char);
    } else if n < 258_048 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 0x3f) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 0x3f) as u8 + 63) as char);
        }
    }
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(g.has_edge(i, j));
        }
    }
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << (5 - k);
            }
        }
        out.push((byte + 63) as char);
    }
    Ok(out)
}

/// Decodes one graph6 string (an optional `>>graph6<<` header is accepted).
pub fn from_graph6(s: &str) -> Result<Graph> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(GRAPH6_HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    let bad = |why: &str| Error::BadGraph6(format!("{s:?}: {why}"));
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(bad(&format!("byte {b} outside 63..=126")));
    }
    let six = |b: u8| (b - 63) as usize;
    let (n, body) = match bytes {
        [] => return Err(bad("empty")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(bad("truncated size"));
            }
            let n = rest[..6].iter().fold(0, |acc, &b| (acc << 6) | six(b));
            (n, &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(bad("truncated size"));
            }
            let n = rest[..3].iter().fold(0, |acc, &b| (acc << 6) | six(b));
            (n, &rest[3..])
        }
        [first, rest @ ..] => (six(*first), rest),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    if body.len() != nbits.div_ceil(6) {
        return Err(bad(&format!(
            "expected {} data bytes for n = {n}, found {}",
            nbits.div_ceil(6),
            body.len()
        )));
    }
    let bit = |k: usize| (six(body[k / 6]) >> (5 - k % 6)) & 1 == 1;
    if (nbits..body.len() * 6).any(bit) {
        return Err(bad("nonzero padding bits"));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.set_weight(i, j, 1.0)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Every graph in a graph6 catalog, one per nonblank line.
pub fn parse_graph6_catalog(text: &str) -> Result<Vec<(String, Graph)>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let code = l.strip_prefix(GRAPH6_HEADER).unwrap_or(l).to_string();
            from_graph6(&code).map(|g| (code, g))
        })
        .collect()
}

/// Graph from a short name: `K4`/`K_4` (complete), `K1,3`/`K_{1,3}`
/// (complete bipartite), `P3` (path), `C6` (cycle), `S4` (star on 4
/// vertices), `E4` (no edges).
pub fn named_graph(name: &str) -> Result<Graph> {
    let unknown = || Error::UnknownName(name.to_string());
    let s: String = name
        .chars()
        .filter(|c| !matches!(c, '_' | '{' | '}' | ' '))
        .collect();
    let mut chars = s.chars();
    let kind = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
    let rest = chars.as_str();
    let nums = rest
        .split(',')
        .map(|t| t.parse::<usize>().map_err(|_| unknown()))
        .collect::<Result<Vec<_>>>()?;
    match (kind, nums.as_slice()) {
        ('K', [n]) => Ok(Graph::complete(*n)),
        ('K', [r, s]) => Ok(Graph::complete_bipartite(*r, *s)),
        ('P', [n]) => Ok(Graph::path(*n)),
        ('C', [n]) if *n >= 3 => Ok(Graph::cycle(*n)),
        ('S', [n]) if *n >= 1 => Ok(Graph::star(*n)),
        ('E', [n]) => Ok(Graph::empty(*n)),
        _ => Err(unknown()),
    }
}

/// Reads a graph from `spec`: an existing file (graph6 when the extension is
/// `.g6`, otherwise an edge list padded to `min_order` vertices) or a short
/// graph name.
pub fn read_graph(spec: &str, min_order: usize) -> Result<Graph> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        if path.extension().is_some_and(|e| e == "g6") {
            let first = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .ok_or_else(|| Error::BadGraph6(format!("{spec}: empty file")))?;
            let g = from_graph6(first)?;
            if g.n() < min_order {
                return Err(Error::DimensionMismatch {
                    expected: min_order,
                    got: g.n(),
                });
            }
            Ok(g)
        } else {
            parse_edge_list(&text, min_order)
        }
    } else {
        named_graph(spec)
    }
}
