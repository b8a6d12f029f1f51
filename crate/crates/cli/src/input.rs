//! Text formats for problem instances.
//!
//! Lines starting with `#`, and lines whose first token is `c`, are
//! comments in every format.

use rsproof::graph::Graph;
use rsproof::tasks::appendix::{BoolMatrix, CnfFormula, Csp2Constraint, Csp2Instance};

use crate::CliError;

fn is_comment(line: &str) -> bool {
    let t = line.trim_start();
    t.starts_with('#') || t.split_whitespace().next() == Some("c")
}

/// Non-comment lines, trimmed, keeping blank lines (they separate blocks).
fn content_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !is_comment(l)).map(str::trim).collect()
}

fn parse_num<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T, CliError> {
    tok.parse().map_err(|_| CliError::Parse(format!("bad {what} '{tok}'")))
}

/// Comments dropped, whitespace collapsed, blank-line runs merged; the
/// bytes the instance digest is taken over.
pub fn canonicalize(text: &str) -> String {
    let mut out: Vec<String> = Vec::new();
    for l in content_lines(text) {
        let norm = l.split_whitespace().collect::<Vec<_>>().join(" ");
        if norm.is_empty() && out.last().is_none_or(|p| p.is_empty()) {
            continue;
        }
        out.push(norm);
    }
    while out.last().is_some_and(|l| l.is_empty()) {
        out.pop();
    }
    out.join("\n")
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// `p edge n m` followed by `m` lines `e u v` (1-based). Repeated edges and
/// loops are only accepted when `multigraph` is set.
pub fn parse_graph(text: &str, multigraph: bool) -> Result<Graph, CliError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for line in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["p", _, n, m] => {
                if header.is_some() {
                    return Err(CliError::Parse("repeated 'p' line".into()));
                }
                header = Some((parse_num(n, "vertex count")?, parse_num(m, "edge count")?));
            }
            ["e", u, v] => {
                let (n, _) = header.ok_or_else(|| CliError::Parse("edge before the 'p' line".into()))?;
                let (u, v): (usize, usize) = (parse_num(u, "vertex")?, parse_num(v, "vertex")?);
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(CliError::Parse(format!("edge ({u}, {v}) outside 1..={n}")));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(CliError::Parse(format!("unexpected line '{line}'"))),
        }
    }
    let (n, m) = header.ok_or_else(|| CliError::Parse("missing 'p edge n m' line".into()))?;
    if edges.len() != m {
        return Err(CliError::Parse(format!("header declares {m} edges, found {}", edges.len())));
    }
    let g = if multigraph { Graph::multigraph(n, edges) } else { Graph::new(n, edges) };
    g.map_err(|e| CliError::Parse(e.to_string()))
}

/// DIMACS `p cnf v m`; clauses are literal lists terminated by `0`.
pub fn parse_cnf(text: &str) -> Result<CnfFormula, CliError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() == Some(&"p") {
            if toks.len() != 4 || toks[1] != "cnf" {
                return Err(CliError::Parse(format!("bad header '{line}'")));
            }
            header = Some((parse_num(toks[2], "variable count")?, parse_num(toks[3], "clause count")?));
            continue;
        }
        if toks.first() == Some(&"%") {
            break;
        }
        if header.is_none() && !toks.is_empty() {
            return Err(CliError::Parse("clause before the 'p cnf' line".into()));
        }
        for t in toks {
            let lit: i64 = parse_num(t, "literal")?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let (v, m) = header.ok_or_else(|| CliError::Parse("missing 'p cnf v m' line".into()))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != m {
        return Err(CliError::Parse(format!("header declares {m} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(v, clauses).map_err(|e| CliError::Parse(e.to_string()))
}

fn blocks(text: &str) -> Vec<Vec<&str>> {
    let mut out = vec![Vec::new()];
    for l in content_lines(text) {
        if l.is_empty() {
            if !out.last().unwrap().is_empty() {
                out.push(Vec::new());
            }
        } else {
            out.last_mut().unwrap().push(l);
        }
    }
    out.retain(|b| !b.is_empty());
    out
}

fn bool_block(lines: &[&str]) -> Result<BoolMatrix, CliError> {
    let rows = lines
        .iter()
        .map(|l| l.split_whitespace().map(|t| parse_num::<u8>(t, "bit")).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    BoolMatrix::new(rows).map_err(|e| CliError::Parse(e.to_string()))
}

/// Two 0/1 matrices of equal shape, rows whitespace-separated, the
/// matrices separated by a blank line.
pub fn parse_bool_matrices(text: &str) -> Result<(BoolMatrix, BoolMatrix), CliError> {
    let b = blocks(text);
    if b.len() != 2 {
        return Err(CliError::Parse(format!("expected two matrices separated by a blank line, found {}", b.len())));
    }
    let (x, y) = (bool_block(&b[0])?, bool_block(&b[1])?);
    if x.n() != y.n() || x.t() != y.t() {
        return Err(CliError::Parse("matrices differ in shape".into()));
    }
    Ok((x, y))
}

/// Whitespace-separated non-negative integers.
pub fn parse_ints(text: &str) -> Result<Vec<u64>, CliError> {
    let v: Vec<u64> = content_lines(text)
        .iter()
        .flat_map(|l| l.split_whitespace())
        .map(|t| parse_num(t, "integer"))
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err(CliError::Parse("no integers found".into()));
    }
    Ok(v)
}

/// Square integer matrix, one row per line.
pub fn parse_int_matrix(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let rows: Vec<Vec<i64>> = content_lines(text)
        .iter()
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(|t| parse_num(t, "integer")).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(CliError::Parse("expected a non-empty square matrix".into()));
    }
    Ok(rows)
}

/// One subset per line (1-based elements); an optional `p family n` line
/// fixes the universe size, otherwise it is the largest element.
pub fn parse_family(text: &str) -> Result<(usize, Vec<u64>), CliError> {
    let mut n: Option<usize> = None;
    let mut sets = Vec::new();
    let mut largest = 0usize;
    for line in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["p", "family", k] => n = Some(parse_num(k, "universe size")?),
            _ => {
                let mut mask = 0u64;
                for t in toks {
                    let x: usize = parse_num(t, "element")?;
                    if x == 0 || x > 63 {
                        return Err(CliError::Parse(format!("element {x} outside 1..=63")));
                    }
                    largest = largest.max(x);
                    mask |= 1 << (x - 1);
                }
                sets.push(mask);
            }
        }
    }
    let n = n.unwrap_or(largest);
    if largest > n {
        return Err(CliError::Parse(format!("element {largest} outside the universe 1..={n}")));
    }
    if sets.is_empty() {
        return Err(CliError::Parse("empty family".into()));
    }
    Ok((n, sets))
}

/// Header `n sigma m`, then `m` lines `u v` (1-based variables) followed by
/// allowed value pairs `a,b` (0-based values) and an optional `w=W`.
pub fn parse_csp(text: &str) -> Result<Csp2Instance, CliError> {
    let lines: Vec<&str> = content_lines(text).into_iter().filter(|l| !l.is_empty()).collect();
    let head: Vec<&str> = lines
        .first()
        .ok_or_else(|| CliError::Parse("missing 'n sigma m' header".into()))?
        .split_whitespace()
        .collect();
    if head.len() != 3 {
        return Err(CliError::Parse("header must be 'n sigma m'".into()));
    }
    let (n, sigma, m): (usize, usize, usize) =
        (parse_num(head[0], "n")?, parse_num(head[1], "sigma")?, parse_num(head[2], "m")?);
    if lines.len() - 1 != m {
        return Err(CliError::Parse(format!("header declares {m} constraints, found {}", lines.len() - 1)));
    }
    let mut cs = Vec::with_capacity(m);
    for l in &lines[1..] {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 2 {
            return Err(CliError::Parse(format!("constraint '{l}' needs two variables")));
        }
        let (u, v): (usize, usize) = (parse_num(toks[0], "variable")?, parse_num(toks[1], "variable")?);
        if u == 0 || v == 0 {
            return Err(CliError::Parse("variables are 1-based".into()));
        }
        let mut allowed = Vec::new();
        let mut weight = 1u64;
        for t in &toks[2..] {
            if let Some(w) = t.strip_prefix("w=") {
                weight = parse_num(w, "weight")?;
            } else if let Some((a, b)) = t.split_once(',') {
                allowed.push((parse_num(a, "value")?, parse_num(b, "value")?));
            } else {
                return Err(CliError::Parse(format!("bad token '{t}' in constraint")));
            }
        }
        cs.push(Csp2Constraint {
            u: u - 1,
            v: v - 1,
            allowed,
            weight,
        });
    }
    Csp2Instance::new(n, sigma, cs).map_err(|e| match e {
        rsproof::Error::Unsupported(s) => CliError::Unsupported(s),
        e => CliError::Parse(e.to_string()),
    })
}
