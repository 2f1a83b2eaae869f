use super::{Functional, Letter};
use crate::superlinear::{fmt_q, parse_q, Parity};
use crate::{Error, Result};

/// One line per term: `hbar=<k> cycles=[[a,b,...],...] coeff=<p/q>`, in the
/// canonical term order.
pub fn write_functional(f: &Functional) -> String {
    let mut out = String::new();
    for (k, v) in f.terms() {
        let cycles: Vec<String> = k
            .monomial
            .cycles()
            .iter()
            .map(|c| {
                let ls: Vec<String> = c.letters().iter().map(u32::to_string).collect();
                format!("[{}]", ls.join(","))
            })
            .collect();
        out.push_str(&format!(
            "hbar={} cycles=[{}] coeff={}\n",
            k.hbar,
            cycles.join(","),
            fmt_q(v)
        ));
    }
    out
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_cycles(s: &str, line: usize, col: usize, n_letters: usize) -> Result<Vec<Vec<Letter>>> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| perr(line, col, "cycles must be enclosed in [ ]"))?;
    let mut cycles = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body_end = rest
            .find(']')
            .ok_or_else(|| perr(line, col, "unterminated cycle"))?;
        let body = rest[..body_end]
            .strip_prefix('[')
            .ok_or_else(|| perr(line, col, "expected '[' to open a cycle"))?;
        let mut cyc = Vec::new();
        for tok in body.split(',') {
            let l: Letter = tok
                .trim()
                .parse()
                .map_err(|_| perr(line, col, format!("bad letter '{tok}'")))?;
            if l as usize >= n_letters {
                return Err(perr(line, col, format!("letter {l} out of range")));
            }
            cyc.push(l);
        }
        cycles.push(cyc);
        rest = &rest[body_end + 1..];
        rest = rest.strip_prefix(',').unwrap_or(rest);
    }
    Ok(cycles)
}

/// Inverse of [`write_functional`]. Blank lines and `#` comments are skipped.
pub fn parse_functional(text: &str, parities: &[Parity]) -> Result<Functional> {
    let mut f = Functional::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut hbar = None;
        let mut cycles = None;
        let mut coeff = None;
        for field in t.split_whitespace() {
            let col = raw.find(field).unwrap_or(0) + 1;
            let (key, val) = field
                .split_once('=')
                .ok_or_else(|| perr(line, col, format!("expected key=value, found '{field}'")))?;
            match key {
                "hbar" => {
                    hbar = Some(
                        val.parse::<u32>()
                            .map_err(|_| perr(line, col, "bad hbar power"))?,
                    )
                }
                "cycles" => cycles = Some(parse_cycles(val, line, col, parities.len())?),
                "coeff" => coeff = Some(parse_q(val).ok_or_else(|| perr(line, col, "bad coefficient"))?),
                other => return Err(perr(line, col, format!("unknown field '{other}'"))),
            }
        }
        let missing = |name: &str| perr(line, 1, format!("missing field '{name}'"));
        f.add_term(
            hbar.ok_or_else(|| missing("hbar"))?,
            &cycles.ok_or_else(|| missing("cycles"))?,
            coeff.ok_or_else(|| missing("coeff"))?,
            parities,
        )
        .map_err(|e| perr(line, 1, e.to_string()))?;
    }
    Ok(f)
}
