//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! <kind> <n> [name]
//! <body>
//! ```
//!
//! Bodies by kind:
//! - `preorder`, `poset`: edges `i j` meaning `i ≼ j`, closed reflexively and transitively
//! - `topology`: one subbase set per line, e.g. `{0,2}`
//! - `bitop`: `t1 {..}` / `t2 {..}` subbase lines plus edges
//! - `qpm`: `n` rows of `n` rationals (`p/q` or integers)
//! - `family`: one member per line, `n` rationals each
//!
//! Emission is canonical: every related pair, every open set, ascending.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use ordkit::topology::{from_quasi_pseudometric, is_closed_in_product};
use ordkit::{FinitePoset, FinitePreorder, FiniteTopology, Rational, SubsetMask, UtilityFamily, Valuation};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Kind {
    Preorder,
    Poset,
    Topology,
    Bitop,
    Qpm,
    Family,
}

impl Kind {
    pub const ALL: [Kind; 6] = [Kind::Preorder, Kind::Poset, Kind::Topology, Kind::Bitop, Kind::Qpm, Kind::Family];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Preorder => "preorder",
            Kind::Poset => "poset",
            Kind::Topology => "topology",
            Kind::Bitop => "bitop",
            Kind::Qpm => "qpm",
            Kind::Family => "family",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown instance kind `{s}`"))
    }
}

/// Two topologies and a preorder, not yet known to be order-closed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitopCandidate {
    pub t1: FiniteTopology,
    pub t2: FiniteTopology,
    pub ord: FinitePreorder,
}

impl BitopCandidate {
    pub fn is_closed(&self) -> bool {
        is_closed_in_product(&self.t1, &self.t2, &self.ord).is_closed()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Instance {
    Preorder(FinitePreorder),
    Poset(FinitePoset),
    Topology(FiniteTopology),
    Bitop(BitopCandidate),
    Qpm(Vec<Vec<Rational>>),
    Family(UtilityFamily),
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Preorder(_) => Kind::Preorder,
            Instance::Poset(_) => Kind::Poset,
            Instance::Topology(_) => Kind::Topology,
            Instance::Bitop(_) => Kind::Bitop,
            Instance::Qpm(_) => Kind::Qpm,
            Instance::Family(_) => Kind::Family,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Instance::Preorder(p) => p.len(),
            Instance::Poset(p) => p.len(),
            Instance::Topology(t) => t.len(),
            Instance::Bitop(b) => b.ord.len(),
            Instance::Qpm(d) => d.len(),
            Instance::Family(f) => f.carrier(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InstanceFile {
    pub name: Option<String>,
    pub instance: Instance,
}

impl InstanceFile {
    pub fn new(instance: Instance) -> Self {
        InstanceFile { name: None, instance }
    }
}

/// `PARSE_ERROR` with a 1-based position.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("PARSE_ERROR at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl Line<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column, message: message.into() }
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.column + t.text.chars().count())
    }
}

/// Splits on whitespace, keeping `{...}` together and dropping `#` comments.
fn tokenize(number: usize, raw: &str) -> Line<'_> {
    let text = raw.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some(&(start, c)) = iter.peek() {
        if c.is_whitespace() {
            iter.next();
            continue;
        }
        let mut end = text.len();
        if c == '{' {
            for (i, ch) in iter.by_ref() {
                if ch == '}' {
                    end = i + 1;
                    break;
                }
            }
        } else {
            while let Some(&(i, ch)) = iter.peek() {
                if ch.is_whitespace() {
                    end = i;
                    break;
                }
                iter.next();
            }
        }
        let column = text[..start].chars().count() + 1;
        tokens.push(Token { text: &text[start..end], column });
    }
    Line { number, tokens }
}

fn parse_index(line: &Line, tok: &Token, n: usize) -> Result<usize, ParseError> {
    let x: usize = tok
        .text
        .parse()
        .map_err(|_| line.err(tok.column, format!("expected an element index, found `{}`", tok.text)))?;
    if x >= n {
        return Err(line.err(tok.column, format!("element {x} outside 0..{n}")));
    }
    Ok(x)
}

fn parse_set(line: &Line, tok: &Token, n: usize) -> Result<SubsetMask, ParseError> {
    let inner = tok
        .text
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| line.err(tok.column, format!("expected a set like {{0,2}}, found `{}`", tok.text)))?;
    let mut set = SubsetMask::empty(n);
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let x: usize = part.parse().map_err(|_| line.err(tok.column, format!("bad set element `{part}`")))?;
        if x >= n {
            return Err(line.err(tok.column, format!("element {x} outside 0..{n}")));
        }
        set.insert(x);
    }
    Ok(set)
}

fn parse_rational(line: &Line, tok: &Token) -> Result<Rational, ParseError> {
    Rational::from_str(tok.text)
        .map_err(|_| line.err(tok.column, format!("expected a rational p/q, found `{}`", tok.text)))
}

fn parse_row(line: &Line, n: usize) -> Result<Vec<Rational>, ParseError> {
    if line.tokens.len() != n {
        return Err(line.err(line.end_column(), format!("expected {n} values, found {}", line.tokens.len())));
    }
    line.tokens.iter().map(|t| parse_rational(line, t)).collect()
}

fn parse_edge(line: &Line, n: usize) -> Result<(usize, usize), ParseError> {
    match &line.tokens[..] {
        [a, b] => Ok((parse_index(line, a, n)?, parse_index(line, b, n)?)),
        _ => Err(line.err(line.tokens[0].column, "expected an edge `i j`")),
    }
}

/// A set argument like `{0,2}` on an `n`-element carrier; line 1 is the
/// argument itself.
pub fn parse_subset(text: &str, n: usize) -> Result<SubsetMask, ParseError> {
    let line = tokenize(1, text);
    match &line.tokens[..] {
        [tok] => parse_set(&line, tok, n),
        _ => Err(line.err(1, "expected exactly one set")),
    }
}

/// `n` whitespace-separated rationals.
pub fn parse_values(text: &str, n: usize) -> Result<Vec<Rational>, ParseError> {
    parse_row(&tokenize(1, text), n)
}

pub fn parse(text: &str) -> Result<InstanceFile, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, raw)| tokenize(i + 1, raw)).filter(|l| !l.tokens.is_empty());
    let header = lines.next().ok_or(ParseError { line: 1, column: 1, message: "missing header".into() })?;
    let kind: Kind = header.tokens[0].text.parse().map_err(|m: String| header.err(header.tokens[0].column, m))?;
    let n_tok = header.tokens.get(1).ok_or_else(|| header.err(header.end_column(), "missing element count"))?;
    let n: usize =
        n_tok.text.parse().map_err(|_| header.err(n_tok.column, format!("bad element count `{}`", n_tok.text)))?;
    if n > ordkit::MAX_ELEMENTS {
        return Err(header.err(n_tok.column, format!("at most {} elements are supported", ordkit::MAX_ELEMENTS)));
    }
    let name = match header.tokens.len() {
        2 => None,
        3 => Some(header.tokens[2].text.to_string()),
        _ => return Err(header.err(header.tokens[3].column, "unexpected trailing token in header")),
    };
    let body: Vec<Line> = lines.collect();
    let instance = match kind {
        Kind::Preorder | Kind::Poset => {
            let edges = body.iter().map(|l| parse_edge(l, n)).collect::<Result<Vec<_>, _>>()?;
            let p = FinitePreorder::closure_of(n, edges).map_err(|e| header.err(1, e.to_string()))?;
            if kind == Kind::Poset {
                Instance::Poset(FinitePoset::try_from_preorder(p).map_err(|e| header.err(1, e.to_string()))?)
            } else {
                Instance::Preorder(p)
            }
        }
        Kind::Topology => {
            let mut subbase = Vec::new();
            for l in &body {
                if l.tokens.len() != 1 {
                    return Err(l.err(l.tokens[0].column, "expected one set per line"));
                }
                subbase.push(parse_set(l, &l.tokens[0], n)?);
            }
            Instance::Topology(FiniteTopology::generate(n, &subbase))
        }
        Kind::Bitop => {
            let (mut s1, mut s2, mut edges) = (Vec::new(), Vec::new(), Vec::new());
            for l in &body {
                match l.tokens[0].text {
                    "t1" | "t2" => {
                        let tok = l.tokens.get(1).ok_or_else(|| l.err(l.end_column(), "missing set"))?;
                        if l.tokens.len() > 2 {
                            return Err(l.err(l.tokens[2].column, "unexpected trailing token"));
                        }
                        let set = parse_set(l, tok, n)?;
                        if l.tokens[0].text == "t1" {
                            s1.push(set)
                        } else {
                            s2.push(set)
                        }
                    }
                    _ => edges.push(parse_edge(l, n)?),
                }
            }
            let ord = FinitePreorder::closure_of(n, edges).map_err(|e| header.err(1, e.to_string()))?;
            Instance::Bitop(BitopCandidate {
                t1: FiniteTopology::generate(n, &s1),
                t2: FiniteTopology::generate(n, &s2),
                ord,
            })
        }
        Kind::Qpm => {
            if body.len() != n {
                let at = body.get(n).map_or(header.number, |l| l.number);
                return Err(ParseError {
                    line: at,
                    column: 1,
                    message: format!("expected {n} matrix rows, found {}", body.len()),
                });
            }
            let d = body.iter().map(|l| parse_row(l, n)).collect::<Result<Vec<_>, _>>()?;
            from_quasi_pseudometric(&d).map_err(|e| header.err(1, e.to_string()))?;
            Instance::Qpm(d)
        }
        Kind::Family => {
            let members = body.iter().map(|l| parse_row(l, n).map(Valuation::new)).collect::<Result<Vec<_>, _>>()?;
            Instance::Family(UtilityFamily::new(n, members).map_err(|e| header.err(1, e.to_string()))?)
        }
    };
    Ok(InstanceFile { name, instance })
}

pub fn parse_file(path: &Path) -> anyhow::Result<InstanceFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse(&text)?)
}

fn emit_pairs(out: &mut String, p: &FinitePreorder) {
    for (x, y) in p.strict_pairs() {
        let _ = writeln!(out, "{x} {y}");
    }
}

fn emit_row(out: &mut String, row: &[Rational]) {
    let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "{}", cells.join(" "));
}

pub fn emit(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let mut out = format!("{} {}", inst.kind(), inst.len());
    if let Some(name) = &file.name {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    match inst {
        Instance::Preorder(p) => emit_pairs(&mut out, p),
        Instance::Poset(p) => emit_pairs(&mut out, p.as_preorder()),
        Instance::Topology(t) => {
            for u in t.opens() {
                let _ = writeln!(out, "{u}");
            }
        }
        Instance::Bitop(b) => {
            for u in b.t1.opens() {
                let _ = writeln!(out, "t1 {u}");
            }
            for u in b.t2.opens() {
                let _ = writeln!(out, "t2 {u}");
            }
            emit_pairs(&mut out, &b.ord);
        }
        Instance::Qpm(d) => d.iter().for_each(|row| emit_row(&mut out, row)),
        Instance::Family(f) => f.iter().for_each(|m| emit_row(&mut out, m.values())),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preorder_header_and_edges() {
        let f = parse("preorder 3\n0 1\n1 2\n").unwrap();
        assert_eq!(f.instance, Instance::Preorder(FinitePoset::chain(3).into_preorder()));
        assert_eq!(emit(&f), "preorder 3\n0 1\n0 2\n1 2\n");
    }

    #[test]
    fn comments_names_and_blank_lines() {
        let f = parse("# a chain\n\nposet 2 tiny # trailing\n0 1\n").unwrap();
        assert_eq!(f.name.as_deref(), Some("tiny"));
        assert_eq!(emit(&f), "poset 2 tiny\n0 1\n");
    }

    #[test]
    fn qpm_is_validated() {
        let f = parse("qpm 2\n0 0\n1 0\n").unwrap();
        assert!(matches!(f.instance, Instance::Qpm(_)));
        let e = parse("qpm 3\n0 1 5\n1 0 1\n1 1 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(e.message.contains("quasi-pseudometric"));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse("lattice 3\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse("preorder x\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 10));
        let e = parse("preorder 3\n0 1\n1 7\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse("poset 2\n0 1\n1 0\n").unwrap_err();
        assert!(e.message.contains("antisymmetric"));
        let e = parse("family 2\n0 1/2 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse("").is_err());
        assert!(parse("topology 2\n{0,x}\n").is_err());
    }

    #[test]
    fn round_trips() {
        let texts = [
            "preorder 3\n0 1\n1 0\n",
            "poset 0\n",
            "topology 3\n{0}\n{1,2}\n",
            "bitop 2\nt1 {1}\nt2 {0}\n0 1\n",
            "qpm 2\n0 1/2\n3 0\n",
            "family 3 fam\n0 1/2 1\n1 1 0\n",
        ];
        for text in texts {
            let parsed = parse(text).unwrap();
            let emitted = emit(&parsed);
            let again = parse(&emitted).unwrap();
            assert_eq!(again, parsed);
            assert_eq!(emit(&again), emitted);
        }
    }

    #[test]
    fn sets_may_contain_spaces() {
        let f = parse("topology 3\n{0, 2}\n").unwrap();
        let Instance::Topology(t) = f.instance else { panic!() };
        assert!(t.is_open(&SubsetMask::from_elements(3, [0, 2])));
    }
}
