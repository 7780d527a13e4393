//! Text formats: edge-list graphs, graph6, and atom catalog files.
//!
//! Edge-list: first significant line `n m`, then m lines `u v` (0-based).
//! Anything after `#` on a line is a comment; blank lines are skipped.
//!
//! graph6 is the usual 6-bit printable encoding; a leading `>>graph6<<`
//! header is recognized, otherwise the caller decides via a flag.

use crate::count::CoverCount;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Refuse graph6 inputs above this order; the bit vector is quadratic in n
/// and nothing downstream wants graphs remotely this large.
pub const GRAPH6_MAX_N: usize = 4096;

const ATOMS_MAGIC: &str = "#covercount-atoms";
const ATOMS_VERSION: &str = "v1";

fn significant_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

fn parse_usize(tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad {what}: {tok:?} is not a nonnegative integer")))
}

fn parse_two(line: &str, what: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it
        .next()
        .ok_or_else(|| Error::Parse(format!("{what} line is empty")))?;
    let b = it
        .next()
        .ok_or_else(|| Error::Parse(format!("{what} line {line:?} has only one field")))?;
    if let Some(extra) = it.next() {
        return Err(Error::Parse(format!(
            "{what} line {line:?} has trailing field {extra:?}"
        )));
    }
    Ok((parse_usize(a, what)?, parse_usize(b, what)?))
}

/// Parses the edge-list format described in the module docs.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = significant_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input: expected a `n m` header line".into()))?;
    let (n, m) = parse_two(header, "header")?;
    let mut edges = Vec::with_capacity(m);
    for k in 0..m {
        let line = lines.next().ok_or_else(|| {
            Error::Parse(format!("header promises {m} edges but input ends after {k}"))
        })?;
        edges.push(parse_two(line, "edge")?);
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!(
            "unexpected input after {m} edges: {extra:?}"
        )));
    }
    Graph::new(n, edges)
}

/// Writes a graph in the edge-list format; parses back to the same graph.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses a graph6 line (the first significant line of `text`); tolerates
/// and strips the optional `>>graph6<<` header.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::Parse("empty input: expected a graph6 line".into()))?;
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    decode_graph6(line.as_bytes())
}

fn g6_val(b: u8) -> Result<u64> {
    if !(63..=126).contains(&b) {
        return Err(Error::Parse(format!(
            "byte {:?} is outside the graph6 alphabet",
            b as char
        )));
    }
    Ok(u64::from(b) - 63)
}

fn decode_graph6(bytes: &[u8]) -> Result<Graph> {
    // Order: one byte for n <= 62, '~' + 3 bytes to 258047, '~~' + 6 above.
    let (n, mut pos) = if bytes.first() == Some(&126) {
        let (count, start) = if bytes.get(1) == Some(&126) {
            (6, 2)
        } else {
            (3, 1)
        };
        if bytes.len() < start + count {
            return Err(Error::Parse("graph6 input truncated in the size field".into()));
        }
        let mut n: u64 = 0;
        for &b in &bytes[start..start + count] {
            n = (n << 6) | g6_val(b)?;
        }
        (n, start + count)
    } else {
        let b = *bytes
            .first()
            .ok_or_else(|| Error::Parse("empty graph6 line".into()))?;
        (g6_val(b)?, 1)
    };
    if n as usize > GRAPH6_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "graph6 order {n} exceeds the supported maximum {GRAPH6_MAX_N}"
        )));
    }
    let n = n as usize;
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    if bytes.len() - pos != need {
        return Err(Error::Parse(format!(
            "graph6 body has {} bytes, expected {need} for n = {n}",
            bytes.len() - pos
        )));
    }
    let mut vals = Vec::with_capacity(need);
    for &b in &bytes[pos..] {
        vals.push(g6_val(b)?);
    }
    pos = 0;
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if vals[pos / 6] >> (5 - pos % 6) & 1 == 1 {
                edges.push((i, j));
            }
            pos += 1;
        }
    }
    while pos % 6 != 0 {
        if vals[pos / 6] >> (5 - pos % 6) & 1 == 1 {
            return Err(Error::Parse("graph6 padding bits must be zero".into()));
        }
        pos += 1;
    }
    Graph::new(n, edges)
}

/// Encodes a graph as a bare graph6 line (no header, no newline).
pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.vertex_count();
    if n > GRAPH6_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "graph order {n} exceeds the supported graph6 maximum {GRAPH6_MAX_N}"
        )));
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let bits = n * n.saturating_sub(1) / 2;
    let body_at = out.len();
    out.resize(body_at + bits.div_ceil(6), 63);
    let mut pos = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                out[body_at + pos / 6] += 1 << (5 - pos % 6);
            }
            pos += 1;
        }
    }
    Ok(String::from_utf8(out).unwrap())
}

/// Parses a graph file, deciding the format by the `>>graph6<<` header or
/// the caller's flag; everything else is treated as an edge list.
pub fn parse_graph_auto(text: &str, force_graph6: bool) -> Result<Graph> {
    if force_graph6 || text.trim_start().starts_with(">>graph6<<") {
        parse_graph6(text)
    } else {
        parse_edge_list(text)
    }
}

/// Writes an atom catalog file: a header carrying the certification bound,
/// then one edge-list block per atom in catalog order.
pub fn write_atoms_file(atoms: &[(Graph, CoverCount)], certification_bound: u64) -> String {
    let mut out = format!(
        "{ATOMS_MAGIC} {ATOMS_VERSION} T={certification_bound} count={}\n",
        atoms.len()
    );
    for (i, (g, alpha)) in atoms.iter().enumerate() {
        out.push_str(&format!("# atom {i} alpha={alpha}\n"));
        out.push_str(&write_edge_list(g));
    }
    out
}

/// Parses an atom catalog file; returns the atoms in file order and the
/// certification bound asserted by the header.
pub fn parse_atoms_file(text: &str) -> Result<(Vec<Graph>, u64)> {
    let mut raw = text.lines();
    let header = loop {
        match raw.next() {
            Some(l) if l.trim().is_empty() => continue,
            Some(l) => break l.trim(),
            None => return Err(Error::Parse("empty input: expected an atoms header".into())),
        }
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != ATOMS_MAGIC || toks[1] != ATOMS_VERSION {
        return Err(Error::Parse(format!(
            "bad atoms header {header:?}: expected `{ATOMS_MAGIC} {ATOMS_VERSION} T=<bound> count=<k>`"
        )));
    }
    let field = |tok: &str, key: &str| -> Result<u64> {
        tok.strip_prefix(key)
            .and_then(|v| v.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("bad atoms header field {tok:?}")))
    };
    let bound = field(toks[2], "T=")?;
    let count = field(toks[3], "count=")? as usize;
    let rest: String = raw.collect::<Vec<_>>().join("\n");
    let mut lines = significant_lines(&rest);
    let mut graphs = Vec::with_capacity(count);
    for k in 0..count {
        let head = lines.next().ok_or_else(|| {
            Error::Parse(format!("header promises {count} atoms but input ends after {k}"))
        })?;
        let (n, m) = parse_two(head, "atom header")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines.next().ok_or_else(|| {
                Error::Parse(format!("atom {k} promises {m} edges but input ends early"))
            })?;
            edges.push(parse_two(line, "edge")?);
        }
        graphs.push(Graph::new(n, edges)?);
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!(
            "unexpected input after {count} atoms: {extra:?}"
        )));
    }
    Ok((graphs, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::proof_guided_atoms;
    use crate::corpus::connected_graphs_up_to;
    use crate::count::count_covers;

    #[test]
    fn edge_list_round_trip_with_comments() {
        let text = "# a hexagon\n6 6  # n m\n0 1\n1 2\n2 3\n3 4\n4 5\n\n5 0\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g, Graph::cycle(6));
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        assert_eq!(count_covers(&g).to_u64(), Some(18));
    }

    #[test]
    fn edge_list_rejects_malformed_input() {
        assert!(matches!(parse_edge_list(""), Err(Error::Parse(_))));
        assert!(matches!(parse_edge_list("2\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_edge_list("2 1\n0\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_edge_list("2 2\n0 1\n"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_edge_list("2 1\n0 1\n1 0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_edge_list("2 1\n0 x\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_edge_list("2 1\n1 1\n"),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            parse_edge_list("2 2\n0 1\n1 0\n"),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn graph6_known_encodings() {
        assert_eq!(parse_graph6("A_").unwrap(), Graph::new(2, [(0, 1)]).unwrap());
        assert_eq!(parse_graph6("Cl").unwrap(), Graph::cycle(4));
        assert_eq!(parse_graph6(">>graph6<<Cl").unwrap(), Graph::cycle(4));
        assert_eq!(parse_graph6("?").unwrap(), Graph::empty());
        assert_eq!(write_graph6(&Graph::cycle(4)).unwrap(), "Cl");
        assert_eq!(write_graph6(&Graph::new(2, [(0, 1)]).unwrap()).unwrap(), "A_");
    }

    #[test]
    fn graph6_round_trips_small_corpus() {
        for g in connected_graphs_up_to(6).unwrap() {
            let enc = write_graph6(&g).unwrap();
            assert_eq!(decode_graph6(enc.as_bytes()).unwrap(), g);
        }
    }

    #[test]
    fn graph6_round_trips_long_size_field() {
        let g = Graph::path(70);
        let enc = write_graph6(&g).unwrap();
        assert!(enc.starts_with('~'));
        assert_eq!(parse_graph6(&enc).unwrap(), g);
    }

    #[test]
    fn graph6_rejects_malformed_input() {
        assert!(matches!(parse_graph6(""), Err(Error::Parse(_))));
        assert!(matches!(parse_graph6("C"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph6("Clx"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph6("A"), Err(Error::Parse(_))));
        // K2's byte with a padding bit forced on.
        assert!(matches!(parse_graph6("A`"), Err(Error::Parse(_))));
        assert!(parse_graph6("~~~???@?").is_err());
    }

    #[test]
    fn auto_detection_prefers_header_then_flag() {
        assert_eq!(parse_graph_auto(">>graph6<<Cl\n", false).unwrap(), Graph::cycle(4));
        assert_eq!(parse_graph_auto("Cl", true).unwrap(), Graph::cycle(4));
        assert_eq!(
            parse_graph_auto("2 1\n0 1\n", false).unwrap(),
            Graph::new(2, [(0, 1)]).unwrap()
        );
    }

    #[test]
    fn atoms_file_round_trip() {
        let atoms = proof_guided_atoms(67);
        let text = write_atoms_file(&atoms, 67);
        let (graphs, bound) = parse_atoms_file(&text).unwrap();
        assert_eq!(bound, 67);
        assert_eq!(graphs.len(), 7);
        for (g, (orig, _)) in graphs.iter().zip(atoms.iter()) {
            assert_eq!(g, orig);
        }
    }

    #[test]
    fn atoms_file_rejects_malformed_input() {
        assert!(matches!(parse_atoms_file(""), Err(Error::Parse(_))));
        assert!(matches!(
            parse_atoms_file("#covercount-atoms v2 T=1 count=0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_atoms_file("#covercount-atoms v1 T=x count=0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_atoms_file("#covercount-atoms v1 T=1 count=2\n2 1\n0 1\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_atoms_file("#covercount-atoms v1 T=1 count=1\n2 1\n0 1\n9 9\n"),
            Err(Error::Parse(_))
        ));
    }
}
