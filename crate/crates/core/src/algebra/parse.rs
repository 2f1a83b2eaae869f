//! Line-oriented algebra files.
//!
//! ```text
//! kind associative
//! basis u:even w:odd x:even t:odd
//! product[2] (x,t)->w=1 (t,x)->w=1
//! beta (u,w)=1 (w,u)=1
//! I (t)->x=1
//! H (x)->t=1
//! ```
//!
//! `cyclic[n] (i0,...,in)=v` gives a product directly in cyclic form. Indices
//! are basis names. Several entries may share a line; `#` starts a comment.

use super::{cyclic_slots, raw_slots, AlgebraKind, AlgebraSpec};
use crate::superlinear::{fmt_q, parse_q, GradedBasis, Matrix, Parity, SparseTensor, Q};
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

struct Entry {
    inputs: Vec<usize>,
    output: Option<usize>,
    value: Q,
}

fn parse_entry(tok: &str, basis: &GradedBasis, line: usize, col: usize, arrow: bool) -> Result<Entry> {
    let err = |m: &str| perr(line, col, format!("{m} in '{tok}'"));
    let rest = tok.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
    let close = rest.find(')').ok_or_else(|| err("missing ')'"))?;
    let lookup = |name: &str| {
        basis
            .index_of(name)
            .ok_or_else(|| perr(line, col, format!("unknown basis element '{name}'")))
    };
    let inputs = rest[..close]
        .split(',')
        .map(|s| lookup(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    let mut after = &rest[close + 1..];
    let output = if arrow {
        after = after.strip_prefix("->").ok_or_else(|| err("expected '->'"))?;
        let eq = after.find('=').ok_or_else(|| err("expected '='"))?;
        let o = lookup(&after[..eq])?;
        after = &after[eq..];
        Some(o)
    } else {
        None
    };
    let value = after
        .strip_prefix('=')
        .and_then(parse_q)
        .ok_or_else(|| err("expected '=<p/q>'"))?;
    Ok(Entry {
        inputs,
        output,
        value,
    })
}

fn arity_of(keyword: &str, prefix: &str, line: usize, col: usize) -> Result<usize> {
    let n = keyword[prefix.len()..]
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| perr(line, col, format!("malformed '{keyword}'")))?;
    if n < 2 {
        return Err(perr(line, col, "products need arity at least 2"));
    }
    Ok(n)
}

pub fn parse_algebra(text: &str) -> Result<AlgebraSpec> {
    let mut kind = None;
    let mut basis: Option<Arc<GradedBasis>> = None;
    let mut raw: BTreeMap<usize, SparseTensor> = BTreeMap::new();
    let mut cyclic: BTreeMap<usize, SparseTensor> = BTreeMap::new();
    let mut beta: Option<Matrix> = None;
    let mut i_op: Option<Matrix> = None;
    let mut h_op: Option<Matrix> = None;

    for (li, raw_line) in text.lines().enumerate() {
        let line = li + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(kcol, keyword)) = toks.first() else {
            continue;
        };
        let args = &toks[1..];
        if keyword == "kind" {
            let [(c, v)] = args else {
                return Err(perr(line, kcol, "expected 'kind associative|a_infinity'"));
            };
            kind = Some(match *v {
                "associative" => AlgebraKind::Associative,
                "a_infinity" => AlgebraKind::AInfinity,
                other => return Err(perr(line, *c, format!("unknown kind '{other}'"))),
            });
            continue;
        }
        if keyword == "basis" {
            if basis.is_some() {
                return Err(perr(line, kcol, "basis declared twice"));
            }
            let mut elems = Vec::new();
            for &(c, t) in args {
                let (name, p) = t
                    .split_once(':')
                    .ok_or_else(|| perr(line, c, format!("expected name:parity, found '{t}'")))?;
                if name.is_empty() || name.contains(['(', ')', ',', '=', '-', '>']) {
                    return Err(perr(line, c, format!("invalid basis name '{name}'")));
                }
                let parity = match p {
                    "even" => Parity::Even,
                    "odd" => Parity::Odd,
                    other => return Err(perr(line, c, format!("unknown parity '{other}'"))),
                };
                elems.push((name.to_string(), parity));
            }
            basis = Some(Arc::new(
                GradedBasis::new(elems).map_err(|e| perr(line, kcol, e.to_string()))?,
            ));
            continue;
        }
        let b = basis
            .clone()
            .ok_or_else(|| perr(line, kcol, "basis must be declared first"))?;
        let d = b.dim();
        let put = |t: &mut SparseTensor, idx: Vec<usize>, v: Q, c: usize| {
            t.add_entry(idx, v).map_err(|e| perr(line, c, e.to_string()))
        };
        if keyword.starts_with("product") {
            let n = arity_of(keyword, "product", line, kcol)?;
            let t = raw
                .entry(n)
                .or_insert_with(|| SparseTensor::new(raw_slots(&b, n)));
            for &(c, tok) in args {
                let e = parse_entry(tok, &b, line, c, true)?;
                if e.inputs.len() != n {
                    return Err(perr(line, c, format!("expected {n} inputs")));
                }
                let mut idx = e.inputs;
                idx.push(e.output.expect("arrow entry"));
                put(t, idx, e.value, c)?;
            }
        } else if keyword.starts_with("cyclic") {
            let n = arity_of(keyword, "cyclic", line, kcol)?;
            let t = cyclic
                .entry(n)
                .or_insert_with(|| SparseTensor::new(cyclic_slots(&b, n)));
            for &(c, tok) in args {
                let e = parse_entry(tok, &b, line, c, false)?;
                if e.inputs.len() != n + 1 {
                    return Err(perr(line, c, format!("expected {} indices", n + 1)));
                }
                put(t, e.inputs, e.value, c)?;
            }
        } else if keyword == "beta" {
            let m = beta.get_or_insert_with(|| Matrix::zeros(d, d));
            for &(c, tok) in args {
                let e = parse_entry(tok, &b, line, c, false)?;
                let [i, j] = e.inputs[..] else {
                    return Err(perr(line, c, "beta entries take two indices"));
                };
                m[(i, j)] += e.value;
            }
        } else if keyword == "I" || keyword == "H" {
            let slot = if keyword == "I" { &mut i_op } else { &mut h_op };
            let m = slot.get_or_insert_with(|| Matrix::zeros(d, d));
            for &(c, tok) in args {
                let e = parse_entry(tok, &b, line, c, true)?;
                let [i] = e.inputs[..] else {
                    return Err(perr(line, c, "operator entries take one input"));
                };
                m[(e.output.expect("arrow entry"), i)] += e.value;
            }
        } else {
            return Err(perr(line, kcol, format!("unknown section '{keyword}'")));
        }
    }

    let basis = basis.ok_or_else(|| perr(1, 1, "missing basis declaration"))?;
    let d = basis.dim();
    Ok(AlgebraSpec {
        kind: kind.unwrap_or(AlgebraKind::Associative),
        raw_products: raw,
        cyclic_products: cyclic,
        beta,
        i_op: i_op.unwrap_or_else(|| Matrix::zeros(d, d)),
        h_op,
        basis,
    })
}

fn push_operator(out: &mut String, key: &str, m: &Matrix, basis: &GradedBasis) {
    for i in 0..m.cols() {
        for j in 0..m.rows() {
            let v = &m[(j, i)];
            if !v.is_zero() {
                out.push_str(&format!(
                    "{key} ({})->{}={}\n",
                    basis.name(i),
                    basis.name(j),
                    fmt_q(v)
                ));
            }
        }
    }
}

/// Writes a spec in the format accepted by [`parse_algebra`].
pub fn write_algebra(spec: &AlgebraSpec) -> String {
    let b = &spec.basis;
    let mut out = String::new();
    out.push_str(match spec.kind {
        AlgebraKind::Associative => "kind associative\n",
        AlgebraKind::AInfinity => "kind a_infinity\n",
    });
    let decl: Vec<String> = (0..b.dim())
        .map(|i| format!("{}:{}", b.name(i), b.parity(i)))
        .collect();
    out.push_str(&format!("basis {}\n", decl.join(" ")));
    let join = |idx: &[usize]| idx.iter().map(|&i| b.name(i)).collect::<Vec<_>>().join(",");
    for (n, t) in &spec.raw_products {
        for (idx, v) in t.entries() {
            out.push_str(&format!(
                "product[{n}] ({})->{}={}\n",
                join(&idx[..*n]),
                b.name(idx[*n]),
                fmt_q(v)
            ));
        }
    }
    for (n, t) in &spec.cyclic_products {
        for (idx, v) in t.entries() {
            out.push_str(&format!("cyclic[{n}] ({})={}\n", join(idx), fmt_q(v)));
        }
    }
    if let Some(beta) = &spec.beta {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                if !beta[(i, j)].is_zero() {
                    out.push_str(&format!(
                        "beta ({},{})={}\n",
                        b.name(i),
                        b.name(j),
                        fmt_q(&beta[(i, j)])
                    ));
                }
            }
        }
    }
    push_operator(&mut out, "I", &spec.i_op, b);
    if let Some(h) = &spec.h_op {
        push_operator(&mut out, "H", h, b);
    }
    out
}
