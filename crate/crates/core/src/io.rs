//! Text formats for graphs, signals, polynomials and plot series.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::charpoly::Polynomial;
use crate::error::{GspError, Result};
use crate::graph::Graph;
use crate::signal::{Domain, GraphSignal};

const COORD_HEADER: &str = "%%coord";

fn parse_err(line: usize, msg: impl Into<String>) -> GspError {
    GspError::Parse { line, msg: msg.into() }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.trim().parse::<f64>().map_err(|_| parse_err(line, format!("bad number `{tok}`")))
}

/// Parses `re`, `imj` or `re+imj` / `re-imj`.
pub fn parse_complex(tok: &str, line: usize) -> Result<Complex64> {
    let t = tok.trim();
    if t.is_empty() {
        return Err(parse_err(line, "empty field"));
    }
    let Some(body) = t.strip_suffix(['j', 'i']) else {
        return Ok(Complex64::new(parse_f64(t, line)?, 0.0));
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let im_of = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_f64(s, line),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(parse_f64(&body[..k], line)?, im_of(&body[k..])?)),
        None => Ok(Complex64::new(0.0, im_of(body)?)),
    }
}

/// Round-trippable text for a complex number.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}j", z.re, z.im)
    } else {
        format!("{}+{}j", z.re, z.im)
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Dense CSV adjacency, one row per line.
pub fn parse_adjacency_csv(text: &str) -> Result<Graph> {
    let rows = content_lines(text)
        .map(|(ln, l)| l.split(',').map(|t| parse_complex(t, ln)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Graph::from_rows(&rows)
}

pub fn adjacency_to_csv(g: &Graph) -> String {
    let mut out = String::new();
    for row in g.adjacency().rows() {
        let line: Vec<String> = row.iter().map(|&z| format_complex(z)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Sparse coordinate text: header `%%coord N`, then `i j re im` per nonzero.
pub fn parse_adjacency_coord(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or(GspError::EmptyInput)?;
    let n = header
        .strip_prefix(COORD_HEADER)
        .ok_or_else(|| parse_err(ln, "missing %%coord header"))?
        .trim()
        .parse::<usize>()
        .map_err(|_| parse_err(ln, "bad dimension in header"))?;
    let mut a = Array2::zeros((n, n));
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 && toks.len() != 4 {
            return Err(parse_err(ln, "expected `i j re [im]`"));
        }
        let idx = |t: &str| -> Result<usize> {
            let v = t.parse::<usize>().map_err(|_| parse_err(ln, format!("bad index `{t}`")))?;
            if v >= n {
                return Err(parse_err(ln, format!("index {v} out of range")));
            }
            Ok(v)
        };
        let (i, j) = (idx(toks[0])?, idx(toks[1])?);
        let im = if toks.len() == 4 { parse_f64(toks[3], ln)? } else { 0.0 };
        a[[i, j]] = Complex64::new(parse_f64(toks[2], ln)?, im);
    }
    Graph::from_adjacency(a)
}

pub fn adjacency_to_coord(g: &Graph) -> String {
    let mut out = format!("{COORD_HEADER} {}\n", g.n());
    for (i, j, z) in g.nonzeros() {
        let _ = writeln!(out, "{i} {j} {} {}", z.re, z.im);
    }
    out
}

/// Dense CSV or sparse coordinate text, chosen by the header.
pub fn parse_graph(text: &str) -> Result<Graph> {
    match content_lines(text).next() {
        None => Err(GspError::EmptyInput),
        Some((_, l)) if l.starts_with(COORD_HEADER) => parse_adjacency_coord(text),
        Some(_) => parse_adjacency_csv(text),
    }
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

/// Writes coordinate format when the extension is `.coord` or `.txt`, dense CSV otherwise.
pub fn write_graph(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    let path = path.as_ref();
    let sparse = matches!(path.extension().and_then(|e| e.to_str()), Some("coord" | "txt"));
    let text = if sparse { adjacency_to_coord(g) } else { adjacency_to_csv(g) };
    Ok(fs::write(path, text)?)
}

/// One `re,im` pair (or a bare `re`) per line.
pub fn parse_signal(text: &str, domain: Domain) -> Result<GraphSignal> {
    let values = content_lines(text)
        .map(|(ln, l)| {
            let toks: Vec<&str> = l.split(',').collect();
            match toks.as_slice() {
                [re] => Ok(Complex64::new(parse_f64(re, ln)?, 0.0)),
                [re, im] => Ok(Complex64::new(parse_f64(re, ln)?, parse_f64(im, ln)?)),
                _ => Err(parse_err(ln, "expected `re,im`")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(GspError::EmptyInput);
    }
    Ok(GraphSignal::new(values, domain))
}

pub fn signal_to_text(values: &[Complex64]) -> String {
    let mut out = String::new();
    for z in values {
        let _ = writeln!(out, "{},{}", z.re, z.im);
    }
    out
}

pub fn read_signal(path: impl AsRef<Path>, domain: Domain) -> Result<GraphSignal> {
    parse_signal(&fs::read_to_string(path)?, domain)
}

pub fn write_signal(path: impl AsRef<Path>, values: &[Complex64]) -> Result<()> {
    Ok(fs::write(path, signal_to_text(values))?)
}

/// One `k,re,im` line per coefficient.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let mut coeffs: Vec<Complex64> = Vec::new();
    for (ln, l) in content_lines(text) {
        let toks: Vec<&str> = l.split(',').collect();
        if toks.len() != 3 {
            return Err(parse_err(ln, "expected `k,re,im`"));
        }
        let k = toks[0].trim().parse::<usize>().map_err(|_| parse_err(ln, "bad power"))?;
        if k >= coeffs.len() {
            coeffs.resize(k + 1, Complex64::new(0.0, 0.0));
        }
        coeffs[k] = Complex64::new(parse_f64(toks[1], ln)?, parse_f64(toks[2], ln)?);
    }
    if coeffs.is_empty() {
        return Err(GspError::EmptyInput);
    }
    Ok(Polynomial::new(coeffs))
}

pub fn polynomial_to_text(p: &Polynomial) -> String {
    let mut out = String::new();
    for (k, z) in p.coeffs().iter().enumerate() {
        let _ = writeln!(out, "{k},{},{}", z.re, z.im);
    }
    out
}

/// Plot series with header `index,re,im`.
pub fn series_to_csv(values: &[Complex64]) -> String {
    let mut out = String::from("index,re,im\n");
    for (k, z) in values.iter().enumerate() {
        let _ = writeln!(out, "{k},{},{}", z.re, z.im);
    }
    out
}

fn dot_weight(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format_complex(z)
    }
}

/// Graphviz digraph. Edges of weight 1 carry no label.
pub fn graph_to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("digraph {name} {{\n");
    for v in 0..g.n() {
        let label = g.labels().map(|l| l[v].clone()).unwrap_or_else(|| v.to_string());
        let _ = writeln!(out, "  {v} [label=\"{label}\"];");
    }
    let mut edges = g.nonzeros();
    edges.sort_by_key(|&(i, j, _)| (j, i));
    for (i, j, w) in edges {
        if w == Complex64::new(1.0, 0.0) {
            let _ = writeln!(out, "  {j} -> {i};");
        } else {
            let _ = writeln!(out, "  {j} -> {i} [label=\"{}\"];", dot_weight(w));
        }
    }
    out.push_str("}\n");
    out
}
