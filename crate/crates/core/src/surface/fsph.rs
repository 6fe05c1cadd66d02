//! The `fsph` v1 text format.
//!
//! ```text
//! fsph 1
//! # comments and blank lines are ignored
//! t 0 1 1 1          # triangle index and side lengths
//! t 1 1 1 1
//! g 0 0 1 2          # glue slot (0,0) to slot (1,2)
//! g 0 1 1 1
//! g 0 2 1 0
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{ConeSurface, RawSurface, Slot};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: expected header 'fsph 1'")]
    MissingHeader { line: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: side length must be a positive finite number, got {value}")]
    NonPositiveLength { line: usize, value: f64 },
    #[error("line {line}: triangle {index} declared twice")]
    DuplicateTriangle { line: usize, index: usize },
    #[error("triangle indices must be 0..{count} without gaps; {missing} is missing")]
    MissingTriangle { count: usize, missing: usize },
    #[error("line {line}: slot {slot} is glued more than once")]
    DuplicateGluing { line: usize, slot: Slot },
    #[error("line {line}: {what} out of range")]
    OutOfRange { line: usize, what: String },
    #[error("empty surface file")]
    Empty,
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| syntax(line, format!("invalid {what} '{tok}'")))
}

/// Parse `fsph` text into an unvalidated surface.
pub fn parse_surface(text: &str) -> Result<RawSurface, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    if header.split_whitespace().collect::<Vec<_>>() != ["fsph", "1"] {
        return Err(ParseError::MissingHeader { line: hline });
    }

    let mut tris: Vec<Option<[f64; 3]>> = Vec::new();
    let mut glue_lines: Vec<(usize, Slot, Slot)> = Vec::new();
    for (line, content) in lines {
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "t" => {
                if toks.len() != 5 {
                    return Err(syntax(line, "expected 't <index> <len0> <len1> <len2>'"));
                }
                let index = parse_usize(toks[1], line, "triangle index")?;
                let mut l = [0.0; 3];
                for (k, tok) in toks[2..].iter().enumerate() {
                    let v: f64 =
                        tok.parse().map_err(|_| syntax(line, format!("invalid length '{tok}'")))?;
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(ParseError::NonPositiveLength { line, value: v });
                    }
                    l[k] = v;
                }
                if tris.len() <= index {
                    tris.resize(index + 1, None);
                }
                if tris[index].is_some() {
                    return Err(ParseError::DuplicateTriangle { line, index });
                }
                tris[index] = Some(l);
            }
            "g" => {
                if toks.len() != 5 {
                    return Err(syntax(line, "expected 'g <t1> <e1> <t2> <e2>'"));
                }
                let mut v = [0usize; 4];
                for (k, tok) in toks[1..].iter().enumerate() {
                    v[k] = parse_usize(tok, line, "index")?;
                }
                for &e in &[v[1], v[3]] {
                    if e > 2 {
                        return Err(ParseError::OutOfRange {
                            line,
                            what: format!("edge index {e}"),
                        });
                    }
                }
                glue_lines.push((line, Slot::new(v[0], v[1]), Slot::new(v[2], v[3])));
            }
            other => return Err(syntax(line, format!("unknown record '{other}'"))),
        }
    }

    let count = tris.len();
    let lengths = tris
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or(ParseError::MissingTriangle { count, missing: i }))
        .collect::<Result<Vec<_>, _>>()?;

    let mut gluing = vec![None; 3 * count];
    for (line, a, b) in glue_lines {
        for s in [a, b] {
            if s.triangle >= count {
                return Err(ParseError::OutOfRange {
                    line,
                    what: format!("triangle index {}", s.triangle),
                });
            }
        }
        if gluing[a.index()].is_some() {
            return Err(ParseError::DuplicateGluing { line, slot: a });
        }
        if gluing[b.index()].is_some() {
            return Err(ParseError::DuplicateGluing { line, slot: b });
        }
        gluing[a.index()] = Some(b);
        gluing[b.index()] = Some(a);
    }
    Ok(RawSurface { lengths, gluing })
}

/// Canonical text form: triangles in index order, each glued pair once with
/// the lower slot first. Lengths use the shortest round-tripping decimal.
pub fn serialize_surface(s: &RawSurface) -> String {
    let mut out = String::from("fsph 1\n");
    for (i, l) in s.lengths.iter().enumerate() {
        let _ = writeln!(out, "t {i} {:?} {:?} {:?}", l[0], l[1], l[2]);
    }
    for (i, g) in s.gluing.iter().enumerate() {
        if let Some(p) = g {
            let me = Slot::from_index(i);
            if me <= *p {
                let _ = writeln!(out, "g {} {} {} {}", me.triangle, me.edge, p.triangle, p.edge);
            }
        }
    }
    out
}

impl ConeSurface {
    pub fn to_fsph(&self) -> String {
        serialize_surface(&self.to_raw())
    }
}
