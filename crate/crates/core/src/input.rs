//! The quiver-with-relations input language.
//!
//! ```text
//! # Jordan preprojective
//! vertex 1
//! arrow x : 1 -> 1
//! arrow y : 1 -> 1
//! rel r = x.y - y.x
//! ```
//!
//! Paths compose left to right: `x.y` is `x` followed by `y`, so
//! `t(x) = s(y)` is required. `e_v` is the trivial path at vertex `v`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{PathVector, Scalar};
use crate::error::{Error, ParseError, Result};
use crate::quiver::{validate_quiver, Path, Quiver};
use crate::relations::{Relation, RelationSet};
use crate::superpotential::Superpotential;

/// A parsed input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDocument {
    pub quiver: Quiver,
    /// Relation generators in input order.
    pub relations: Vec<Relation>,
    pub potential: Option<(String, Superpotential)>,
    pub options: Options,
}

/// Settings supplied by the caller rather than the file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub truncation: Option<usize>,
    pub dimension: Option<u8>,
}

impl InputDocument {
    pub fn relation_set(&self) -> Result<RelationSet> {
        RelationSet::new(&self.quiver, self.relations.clone())
    }

    /// Canonical text form; parsing it yields an equal document.
    pub fn render(&self) -> String {
        let q = &self.quiver;
        let mut out = String::new();
        for v in q.vertex_names() {
            let _ = writeln!(out, "vertex {v}");
        }
        for a in q.arrows() {
            let _ = writeln!(
                out,
                "arrow {} : {} -> {}",
                a.name,
                q.vertex_name(a.source),
                q.vertex_name(a.target)
            );
        }
        for r in &self.relations {
            let _ = writeln!(out, "rel {} = {}", r.name, r.element.display(q));
        }
        if let Some((name, w)) = &self.potential {
            let _ = writeln!(out, "potential {} = {}", name, w.element().display(q));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Colon,
    Arrow,
    Equals,
    Plus,
    Minus,
    Star,
    Slash,
    Dot,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            ':' => Tok::Colon,
            '=' => Tok::Equals,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '.' => Tok::Dot,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            '-' => Tok::Minus,
            c if is_word_char(c) => {
                let start = i;
                while i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Word(chars[start..i].iter().collect()),
                    col,
                });
                continue;
            }
            other => {
                return Err(ParseError::new(
                    lineno,
                    col,
                    format!("unexpected character '{other}'"),
                ))
            }
        };
        out.push(Token { tok, col });
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct RawTerm {
    coeff: Scalar,
    /// Arrow names with columns, or a single `e_v` word.
    path: Vec<(String, usize)>,
    col: usize,
}

#[derive(Clone, Debug)]
struct RawExpr {
    terms: Vec<RawTerm>,
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k)
    }

    fn col(&self) -> usize {
        self.peek().map_or(self.end_col, |t| t.col)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn word(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Word(w),
                col,
            }) => {
                self.pos += 1;
                Ok((w.clone(), *col))
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{what}'"))),
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.err("unexpected trailing input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let col = self.col();
        let (w, _) = self.word("integer")?;
        w.parse::<BigInt>()
            .map_err(|_| ParseError::new(self.line, col, format!("expected integer, found '{w}'")))
    }

    fn expr(&mut self) -> Result<RawExpr, ParseError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek().map(|t| &t.tok) {
            Some(Tok::Minus) => {
                self.pos += 1;
                -Scalar::one()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                Scalar::one()
            }
            _ => Scalar::one(),
        };
        loop {
            let mut term = self.term()?;
            term.coeff *= &sign;
            terms.push(term);
            sign = match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => Scalar::one(),
                Some(Tok::Minus) => -Scalar::one(),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(RawExpr { terms })
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let col = self.col();
        let is_number = |t: Option<&Token>| {
            matches!(t, Some(Token { tok: Tok::Word(w), .. }) if w.chars().all(|c| c.is_ascii_digit()))
        };
        let mut coeff = Scalar::one();
        let next = self.peek_at(1).map(|t| &t.tok);
        if is_number(self.peek()) && matches!(next, Some(Tok::Star) | Some(Tok::Slash)) {
            let numer = self.integer()?;
            let denom = if matches!(self.peek().map(|t| &t.tok), Some(Tok::Slash)) {
                self.pos += 1;
                let dcol = self.col();
                let d = self.integer()?;
                if d.is_zero() {
                    return Err(ParseError::new(self.line, dcol, "zero denominator"));
                }
                d
            } else {
                BigInt::one()
            };
            coeff = BigRational::new(numer, denom);
            self.expect(Tok::Star, "*")?;
        }
        let mut path = vec![self.word("path")?];
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Dot)) {
            self.pos += 1;
            path.push(self.word("arrow name")?);
        }
        Ok(RawTerm { coeff, path, col })
    }
}

enum RawLine {
    Vertex(String),
    Arrow(String, String, String),
    Rel(String, RawExpr),
    Potential(String, RawExpr),
}

fn parse_line(line: &str, lineno: usize) -> Result<Option<(RawLine, usize)>, ParseError> {
    let trimmed = line.trim_start();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let toks = lex(line, lineno)?;
    let mut cur = Cursor {
        toks: &toks,
        pos: 0,
        line: lineno,
        end_col: line.chars().count() + 1,
    };
    let (keyword, kcol) = cur.word("declaration keyword")?;
    let parsed = match keyword.as_str() {
        "vertex" => RawLine::Vertex(cur.word("vertex name")?.0),
        "arrow" => {
            let (name, _) = cur.word("arrow name")?;
            cur.expect(Tok::Colon, ":")?;
            let (s, _) = cur.word("source vertex")?;
            cur.expect(Tok::Arrow, "->")?;
            let (t, _) = cur.word("target vertex")?;
            RawLine::Arrow(name, s, t)
        }
        "rel" | "potential" => {
            let (name, _) = cur.word("name")?;
            cur.expect(Tok::Equals, "=")?;
            let e = cur.expr()?;
            if keyword == "rel" {
                RawLine::Rel(name, e)
            } else {
                RawLine::Potential(name, e)
            }
        }
        other => {
            return Err(ParseError::new(
                lineno,
                kcol,
                format!("unknown declaration '{other}'"),
            ))
        }
    };
    cur.done()?;
    Ok(Some((parsed, kcol)))
}

fn resolve_expr(q: &Quiver, e: &RawExpr, line: usize) -> Result<PathVector, ParseError> {
    let mut out = PathVector::zero(q);
    for t in &e.terms {
        let first = &t.path[0];
        let path = if t.path.len() == 1 && first.0.starts_with("e_") && q.arrow_id(&first.0).is_none() {
            let v = &first.0[2..];
            let id = q
                .vertex(v)
                .ok_or_else(|| ParseError::new(line, first.1, format!("unknown vertex {v}")))?;
            Path::trivial(id)
        } else {
            let arrows = t
                .path
                .iter()
                .map(|(name, col)| {
                    q.arrow_id(name)
                        .ok_or_else(|| ParseError::new(line, *col, format!("unknown arrow {name}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Path::from_arrows(q, arrows)
                .map_err(|_| ParseError::new(line, t.col, "non-composable path"))?
        };
        out.add_term(path, t.coeff.clone());
    }
    Ok(out)
}

/// Parses a single expression (as on the right of `rel r = ...`) against `q`.
pub fn parse_expression(q: &Quiver, text: &str) -> Result<PathVector> {
    let toks = lex(text, 1)?;
    let mut cur = Cursor {
        toks: &toks,
        pos: 0,
        line: 1,
        end_col: text.chars().count() + 1,
    };
    let e = cur.expr()?;
    cur.done()?;
    Ok(resolve_expr(q, &e, 1)?)
}

/// Parses a whole document.
pub fn parse(text: &str) -> Result<InputDocument> {
    let mut vertices: Vec<(String, usize, usize)> = Vec::new();
    let mut arrows: Vec<(String, String, String, usize, usize)> = Vec::new();
    let mut rels: Vec<(String, RawExpr, usize, usize)> = Vec::new();
    let mut potentials: Vec<(String, RawExpr, usize, usize)> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let Some((parsed, col)) = parse_line(line, lineno)? else {
            continue;
        };
        match parsed {
            RawLine::Vertex(v) => vertices.push((v, lineno, col)),
            RawLine::Arrow(a, s, t) => arrows.push((a, s, t, lineno, col)),
            RawLine::Rel(n, e) => rels.push((n, e, lineno, col)),
            RawLine::Potential(n, e) => potentials.push((n, e, lineno, col)),
        }
    }

    let mut seen = BTreeSet::new();
    for (v, line, col) in &vertices {
        if !seen.insert(v.as_str()) {
            return Err(ParseError::new(*line, *col, format!("duplicate id {v}")).into());
        }
    }
    let mut seen_arrows = BTreeSet::new();
    for (a, s, t, line, col) in &arrows {
        if !seen_arrows.insert(a.as_str()) {
            return Err(ParseError::new(*line, *col, format!("duplicate id {a}")).into());
        }
        if a.starts_with("e_") {
            return Err(ParseError::new(
                *line,
                *col,
                format!("arrow name {a} clashes with trivial path syntax e_"),
            )
            .into());
        }
        for endpoint in [s, t] {
            if !seen.contains(endpoint.as_str()) {
                return Err(
                    ParseError::new(*line, *col, format!("dangling endpoint {endpoint}")).into(),
                );
            }
        }
    }
    let quiver = validate_quiver(
        vertices.iter().map(|v| v.0.clone()),
        arrows
            .iter()
            .map(|(a, s, t, _, _)| (a.clone(), s.clone(), t.clone())),
    )?;

    let mut relations = Vec::new();
    let mut rel_names = BTreeSet::new();
    for (name, e, line, col) in &rels {
        if !rel_names.insert(name.as_str()) {
            return Err(ParseError::new(*line, *col, format!("duplicate id {name}")).into());
        }
        let element = resolve_expr(&quiver, e, *line)?;
        match element.min_degree() {
            None => {
                return Err(ParseError::new(*line, *col, format!("relation {name} is zero")).into())
            }
            Some(d) if d < 2 => {
                return Err(ParseError::new(
                    *line,
                    *col,
                    "relation degree < 2 (relations must lie in kQ_{>=2})",
                )
                .into())
            }
            _ => {}
        }
        relations.push(Relation::new(name.clone(), element));
    }

    if potentials.len() > 1 {
        let (_, _, line, col) = &potentials[1];
        return Err(ParseError::new(*line, *col, "at most one potential per document").into());
    }
    let potential = match potentials.first() {
        Some((name, e, line, col)) => {
            let element = resolve_expr(&quiver, e, *line)?;
            let w = Superpotential::new(&quiver, element).map_err(|e| match e {
                Error::NonCyclic(term) => Error::Parse(ParseError::new(
                    *line,
                    *col,
                    format!("non-cyclic potential term {term}"),
                )),
                other => other,
            })?;
            Some((name.clone(), w))
        }
        None => None,
    };

    Ok(InputDocument {
        quiver,
        relations,
        potential,
        options: Options::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const JORDAN: &str = "vertex 1\narrow x : 1 -> 1\narrow y : 1 -> 1\nrel r = x.y - y.x\n";

    fn err_text(text: &str) -> String {
        parse(text).unwrap_err().to_string()
    }

    #[test]
    fn jordan_document() {
        let doc = parse(JORDAN).unwrap();
        assert_eq!(doc.quiver.arrow_count(), 2);
        assert_eq!(doc.relations.len(), 1);
        assert_eq!(doc.relations[0].element.display(&doc.quiver).to_string(), "x.y - y.x");
        assert_eq!(parse(&doc.render()).unwrap(), doc);
    }

    #[test]
    fn comments_blank_lines_and_coefficients() {
        let text = "# k<x,y>\n\nvertex 1\narrow x : 1 -> 1\narrow y : 1 -> 1\nrel r = 1/2*x.y + 3*y.x - x.x\n";
        let doc = parse(text).unwrap();
        assert_eq!(
            doc.relations[0].element.display(&doc.quiver).to_string(),
            "-x.x + 1/2*x.y + 3*y.x"
        );
        assert_eq!(parse(&doc.render()).unwrap(), doc);
    }

    #[test]
    fn semantic_errors_are_located() {
        let text = "vertex 1\nvertex 2\narrow x : 1 -> 2\nrel r = x.x\n";
        let e = err_text(text);
        assert_eq!(e, "non-composable path at line 4, column 9");

        let e = err_text("vertex 1\narrow x : 1 -> 1\nrel r = x\n");
        assert!(e.starts_with("relation degree < 2"), "{e}");
        assert!(e.contains("line 3"), "{e}");

        let e = err_text("vertex 1\narrow a : 1 -> 2\n");
        assert_eq!(e, "dangling endpoint 2 at line 2, column 1");

        let e = err_text("vertex 1\nvertex 2\narrow a : 1 -> 2\narrow a : 2 -> 1\n");
        assert_eq!(e, "duplicate id a at line 4, column 1");

        let e = err_text("vertex 1\narrow x : 1 -> 1\nrel r = x.q\n");
        assert_eq!(e, "unknown arrow q at line 3, column 11");
    }

    #[test]
    fn syntax_errors_are_located() {
        assert_eq!(err_text("vertex 1\narrow x 1 -> 1\n"), "expected ':' at line 2, column 9");
        assert_eq!(err_text("vertx 1\n"), "unknown declaration 'vertx' at line 1, column 1");
        assert_eq!(
            err_text("vertex 1\narrow x : 1 -> 1\nrel r = 1/0*x.x\n"),
            "zero denominator at line 3, column 11"
        );
        assert_eq!(err_text("vertex 1 $\n"), "unexpected character '$' at line 1, column 10");
        assert_eq!(err_text("vertex 1\narrow x : 1 -> 1\nrel r = x.x +\n"), "expected path at line 3, column 14");
    }

    #[test]
    fn potentials_must_be_cyclic() {
        let text = "vertex 1\nvertex 2\narrow a : 1 -> 2\npotential w = a\n";
        let e = err_text(text);
        assert!(e.starts_with("non-cyclic potential term a"), "{e}");

        let text = "vertex 1\narrow x : 1 -> 1\narrow y : 1 -> 1\narrow z : 1 -> 1\npotential w = x.y.z - x.z.y\n";
        let doc = parse(text).unwrap();
        assert!(doc.potential.is_some());
        assert_eq!(parse(&doc.render()).unwrap(), doc);
    }

    #[test]
    fn trivial_paths() {
        let q = Quiver::from_parts(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let x = parse_expression(&q, "e_1 - 2*a").unwrap();
        assert_eq!(x.display(&q).to_string(), "e_1 - 2*a");
        assert!(parse_expression(&q, "e_3").is_err());
    }
}
