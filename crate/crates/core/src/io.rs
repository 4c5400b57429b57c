//! Text formats for stabilizer matrices and circuits.
//!
//! Stabilizer files start with `n=<int> r=<int>` followed by `r` lines
//! `row: p1, ..., pn | q1, ..., qn`. The alternative `f4 n=<int>` header takes
//! rows `row: t1, ..., tn` whose entries are sums of `1`, `w` or `W` times a
//! power of `D`. Circuit files start with `n=<int>` and list one gate per line.
//! `#` starts a comment everywhere.

use std::collections::HashMap;

use thiserror::Error;

use crate::gates::{Circuit, Gate};
use crate::matrix::LaurentMatrix;
use crate::poly::LaurentPoly;
use crate::stabilizer::{from_f4, F4Poly, StabilizerMatrix};
use crate::verify::{WindowOp, WindowProgram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn perr(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Parses whitespace-separated `key=value` fields; `keys` must all occur.
fn fields<'a>(
    line: usize,
    words: &[&'a str],
    keys: &[&str],
) -> Result<HashMap<&'a str, &'a str>, ParseError> {
    let mut map = HashMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| perr(line, format!("expected key=value, found `{w}`")))?;
        if !keys.contains(&k) {
            return Err(perr(line, format!("unknown field `{k}`")));
        }
        if map.insert(k, v).is_some() {
            return Err(perr(line, format!("duplicate field `{k}`")));
        }
    }
    for k in keys {
        if !map.contains_key(k) {
            return Err(perr(line, format!("missing field `{k}`")));
        }
    }
    Ok(map)
}

fn int<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ParseError> {
    v.parse()
        .map_err(|_| perr(line, format!("bad integer `{v}` for `{key}`")))
}

fn row_body(line: usize, l: &str) -> Result<&str, ParseError> {
    l.strip_prefix("row:")
        .ok_or_else(|| perr(line, "expected `row:`"))
}

fn poly_list(line: usize, s: &str, n: usize) -> Result<Vec<LaurentPoly>, ParseError> {
    let entries: Vec<&str> = s.split(',').collect();
    if entries.len() != n {
        return Err(perr(
            line,
            format!("expected {n} entries, found {}", entries.len()),
        ));
    }
    entries
        .iter()
        .map(|e| {
            e.parse()
                .map_err(|err: crate::poly::ParsePolyError| perr(line, err.to_string()))
        })
        .collect()
}

fn f4_entry(line: usize, s: &str) -> Result<F4Poly, ParseError> {
    let compact: String = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*')
        .collect();
    if compact.is_empty() {
        return Err(perr(line, "empty entry"));
    }
    let mut out = F4Poly::default();
    for term in compact.split('+') {
        let (coef, rest) = match term.chars().next() {
            Some(c @ ('w' | 'W')) => (c, &term[1..]),
            _ => match term.strip_prefix('1') {
                Some(r) if r.starts_with('D') => ('1', r),
                _ => ('1', term),
            },
        };
        let power: LaurentPoly = if rest.is_empty() {
            LaurentPoly::one()
        } else {
            rest.parse()
                .map_err(|e: crate::poly::ParsePolyError| perr(line, e.to_string()))?
        };
        if !power.is_zero() && !power.is_monomial() {
            return Err(perr(
                line,
                format!("term `{term}` is not a single power of D"),
            ));
        }
        if matches!(coef, '1' | 'W') {
            out.one += &power;
        }
        if matches!(coef, 'w' | 'W') {
            out.omega += &power;
        }
    }
    Ok(out)
}

pub fn parse_stabilizer(text: &str) -> Result<StabilizerMatrix, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    if words.first() == Some(&"f4") {
        let h = fields(hl, &words[1..], &["n"])?;
        let n: usize = int(hl, "n", h["n"])?;
        let mut rows = Vec::new();
        for (ln, l) in lines {
            let body = row_body(ln, l)?;
            let entries: Vec<&str> = body.split(',').collect();
            if entries.len() != n {
                return Err(perr(
                    ln,
                    format!("expected {n} entries, found {}", entries.len()),
                ));
            }
            rows.push(
                entries
                    .iter()
                    .map(|e| f4_entry(ln, e))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        if rows.is_empty() {
            return Err(perr(hl, "no rows"));
        }
        return from_f4(&rows).map_err(|e| perr(hl, e.to_string()));
    }
    let h = fields(hl, &words, &["n", "r"])?;
    let n: usize = int(hl, "n", h["n"])?;
    let r: usize = int(hl, "r", h["r"])?;
    let (mut xs, mut zs) = (Vec::new(), Vec::new());
    for (ln, l) in lines {
        let body = row_body(ln, l)?;
        let (xp, zp) = body
            .split_once('|')
            .ok_or_else(|| perr(ln, "expected `|` between X and Z parts"))?;
        xs.push(poly_list(ln, xp, n)?);
        zs.push(poly_list(ln, zp, n)?);
    }
    if xs.len() != r {
        return Err(perr(
            hl,
            format!("header declares r={r} but {} rows follow", xs.len()),
        ));
    }
    if r == 0 {
        return StabilizerMatrix::new(LaurentMatrix::zeros(0, n), LaurentMatrix::zeros(0, n))
            .map_err(|e| perr(hl, e.to_string()));
    }
    StabilizerMatrix::new(LaurentMatrix::from_rows(xs), LaurentMatrix::from_rows(zs))
        .map_err(|e| perr(hl, e.to_string()))
}

pub fn format_stabilizer(s: &StabilizerMatrix) -> String {
    let mut out = format!("n={} r={}\n", s.n(), s.r());
    for i in 0..s.r() {
        let join = |m: &LaurentMatrix| {
            m.row(i)
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        out.push_str(&format!("row: {} | {}\n", join(s.x()), join(s.z())));
    }
    out
}

/// One gate line, qubits 1-based. `allow_same` admits `CNOT c=i t=i`, which
/// only the verification loader gives a meaning to.
pub(crate) fn parse_gate_line(
    line: usize,
    l: &str,
    n: usize,
    allow_same: bool,
) -> Result<Gate, ParseError> {
    let words: Vec<&str> = l.split_whitespace().collect();
    let qubit = |map: &HashMap<&str, &str>, k: &str| -> Result<usize, ParseError> {
        let q: usize = int(line, k, map[k])?;
        if q == 0 || q > n {
            return Err(perr(line, format!("qubit {q} out of range 1..={n}")));
        }
        Ok(q - 1)
    };
    let gate = match words[0] {
        "H" | "P" => {
            let m = fields(line, &words[1..], &["q"])?;
            let q = qubit(&m, "q")?;
            if words[0] == "H" {
                Gate::H(q)
            } else {
                Gate::P(q)
            }
        }
        "PL" => {
            let m = fields(line, &words[1..], &["q", "l"])?;
            Gate::PL {
                qubit: qubit(&m, "q")?,
                offset: int(line, "l", m["l"])?,
            }
        }
        "CNOT" => {
            let m = fields(line, &words[1..], &["c", "t", "off"])?;
            Gate::Cnot {
                control: qubit(&m, "c")?,
                target: qubit(&m, "t")?,
                offset: int(line, "off", m["off"])?,
            }
        }
        "CSIGN" => {
            let m = fields(line, &words[1..], &["a", "b", "off"])?;
            Gate::Csign {
                a: qubit(&m, "a")?,
                b: qubit(&m, "b")?,
                offset: int(line, "off", m["off"])?,
            }
        }
        other => return Err(perr(line, format!("unknown gate `{other}`"))),
    };
    match gate.validate(n) {
        Ok(()) => Ok(gate),
        Err(crate::gates::GateError::SameQubit(Gate::Cnot { offset, .. })) if allow_same => {
            if offset == 0 {
                return Err(perr(
                    line,
                    format!("{gate}: a chain needs a nonzero offset"),
                ));
            }
            Ok(gate)
        }
        Err(e) => Err(perr(line, e.to_string())),
    }
}

pub(crate) fn circuit_lines(
    text: &str,
    allow_same: bool,
) -> Result<(usize, Vec<Gate>), ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let h = fields(hl, &words, &["n"])?;
    let n: usize = int(hl, "n", h["n"])?;
    let gates = lines
        .map(|(ln, l)| parse_gate_line(ln, l, n, allow_same))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((n, gates))
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let (n, gates) = circuit_lines(text, false)?;
    Ok(Circuit { n, gates })
}

pub fn format_circuit(c: &Circuit) -> String {
    c.to_string()
}

/// Circuit format for verification runs. Besides ordinary gates it accepts
/// `CNOT c=i t=i off=l` with `l != 0`, read as the sequential CNOT chain.
pub fn parse_program(text: &str) -> Result<WindowProgram, ParseError> {
    let (n, gates) = circuit_lines(text, true)?;
    let mut ops = Vec::new();
    for g in gates {
        ops.push(match g {
            Gate::Cnot {
                control,
                target,
                offset,
            } if control == target => WindowOp::CnotChain {
                qubit: control,
                offset,
            },
            g => WindowOp::Template(g),
        });
    }
    Ok(WindowProgram { n, ops })
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "# rate one third\nn=3 r=2\nrow: 1 + D, 1, 1 + D | 0, D, D\nrow: 0, D, D | 1 + D, 1 + D, 1\n";

    #[test]
    fn stabilizer_round_trip() {
        let s = parse_stabilizer(WORKED).unwrap();
        assert_eq!(s.params().to_string(), "n=3 k=1 r=2 m=1");
        let text = format_stabilizer(&s);
        assert_eq!(parse_stabilizer(&text).unwrap(), s);
        assert_eq!(format_stabilizer(&parse_stabilizer(&text).unwrap()), text);
    }

    #[test]
    fn f4_block_matches_binary_image() {
        let f4 = "f4 n=3\nrow: 1 + 1 D, 1 + w D, 1 + W D\n";
        assert_eq!(
            parse_stabilizer(f4).unwrap(),
            parse_stabilizer(WORKED).unwrap()
        );
        let f4 = "f4 n=3\nrow: 1 + D, 1 + wD, 1 + W*D^1\n";
        assert_eq!(
            parse_stabilizer(f4).unwrap(),
            parse_stabilizer(WORKED).unwrap()
        );
    }

    #[test]
    fn stabilizer_errors() {
        assert_eq!(parse_stabilizer("").unwrap_err().message, "empty input");
        assert!(parse_stabilizer("# nothing\n\n").is_err());
        assert!(parse_stabilizer("n=2 r=2\nrow: 0, 1 | 1, 0\n").is_err());
        assert_eq!(
            parse_stabilizer("n=2 r=1\nrow: 0, 1 | 1\n")
                .unwrap_err()
                .line,
            2
        );
        assert!(parse_stabilizer("n=1 r=1\nrow: D^x | 1\n").is_err());
        assert!(parse_stabilizer("n=1\nrow: 0 | 1\n").is_err());
    }

    #[test]
    fn circuit_round_trip() {
        let text =
            "n=3\nH q=1\nP q=2\nPL q=3 l=2\nCNOT c=1 t=2 off=-1\n# comment\nCSIGN a=2 b=3 off=0\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(
            c.gates[3],
            Gate::Cnot {
                control: 0,
                target: 1,
                offset: -1
            }
        );
        assert_eq!(format_circuit(&c), text.replace("# comment\n", ""));
    }

    #[test]
    fn circuit_errors() {
        assert!(parse_circuit("n=2\nCNOT c=1 t=1 off=0\n").is_err());
        assert!(parse_circuit("n=2\nH q=3\n").is_err());
        assert!(parse_circuit("n=2\nH q=0\n").is_err());
        assert!(parse_circuit("n=2\nT q=1\n").is_err());
        assert!(parse_circuit("n=2\nCNOT c=1 t=2\n").is_err());
        assert!(parse_circuit("").is_err());
        assert!(circuit_lines("n=2\nCNOT c=1 t=1 off=1\n", true).is_ok());
    }

    #[test]
    fn program_with_chain() {
        let p = parse_program("n=1\nCNOT c=1 t=1 off=1\nH q=1\n").unwrap();
        assert_eq!(
            p.ops,
            vec![
                WindowOp::CnotChain {
                    qubit: 0,
                    offset: 1
                },
                WindowOp::Template(Gate::H(0))
            ]
        );
        assert!(!p.is_circuit());
        assert_eq!(
            parse_program("n=1\n# chain\nCNOT c=1 t=1 off=0\n")
                .unwrap_err()
                .line,
            3
        );
        assert_eq!(
            parse_program("n=2\nH q=2\n")
                .unwrap()
                .to_circuit()
                .unwrap()
                .len(),
            1
        );
    }
}
