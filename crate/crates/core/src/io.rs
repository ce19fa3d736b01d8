//! Line-based text formats.
//!
//! Every document starts with a header line `<kind> <version>`. Each further
//! line is a keyword followed by whitespace-separated tokens. `#` starts a
//! comment that runs to the end of the line; blank lines are ignored.
//!
//! Instance (`.ocp`):
//!
//! ```text
//! ocp 1
//! label s1 8           # required label and its weight
//! extra omega_1_1 11   # auxiliary element, weighted but not required
//! edge E1 s1 s2        # edge id followed by its elements
//! budget 592           # decimal, or: budget pow2 9 6 4  (sum of 2^e)
//! uncoverable          # optional marker admitting labels no edge covers
//! ```
//!
//! Covering (`.cov`): `cov 1`, an optional `instance <path-or-id>` line and
//! one `sequence <edge ids…>` line.
//!
//! 3-Partition (`.3p`): `3p 1`, then `m <bins>`, `B <target>`, `a <values…>`.
//!
//! Reduction map (`.map`): `ocpmap 1`, the source (`m`, `B`, `a`), the
//! parameters `t` and `w`, `infeasible true|false`, and one line per valid
//! triplet, generated edge and token (all indices 1-based).
//!
//! The serializers write the canonical form: fixed line order, one space
//! between tokens, budgets as exponent lists.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::str::SplitWhitespace;

use thiserror::Error;

use crate::cost::BigCost;
use crate::instance::{Covering, InstanceError, OcpInstance};
use crate::reduction::{
    reduce_3p_to_ocp, GadgetEdgeKind, ReductionMap, ThreePartitionInstance, TokenKind,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; 0 when the error concerns the document as a whole.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected header `{0} {FORMAT_VERSION}`")]
    MissingHeader(&'static str),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(String),
    #[error("unknown keyword {0:?}")]
    UnknownKeyword(String),
    #[error("missing {0}")]
    MissingToken(&'static str),
    #[error("unexpected trailing token {0:?}")]
    TrailingToken(String),
    #[error("invalid integer {0:?}")]
    BadInteger(String),
    #[error("weight of {0:?} must be positive")]
    NonPositiveWeight(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("edge {edge:?} references unknown element {element:?}")]
    UnknownElement { edge: String, element: String },
    #[error("malformed budget: {0}")]
    MalformedBudget(String),
    #[error("field `{0}` given twice")]
    DuplicateField(&'static str),
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("reduction map does not match its source instance: {0}")]
    InconsistentMap(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

struct Line<'a> {
    number: usize,
    keyword: &'a str,
    rest: SplitWhitespace<'a>,
}

impl<'a> Line<'a> {
    fn next(&mut self, what: &'static str) -> Result<&'a str, ParseError> {
        self.rest
            .next()
            .ok_or_else(|| err(self.number, ParseErrorKind::MissingToken(what)))
    }

    fn integer<T: std::str::FromStr>(&mut self, what: &'static str) -> Result<T, ParseError> {
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| err(self.number, ParseErrorKind::BadInteger(tok.to_string())))
    }

    fn integers<T: std::str::FromStr>(&mut self) -> Result<Vec<T>, ParseError> {
        let number = self.number;
        self.rest
            .by_ref()
            .map(|tok| {
                tok.parse()
                    .map_err(|_| err(number, ParseErrorKind::BadInteger(tok.to_string())))
            })
            .collect()
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.rest.next() {
            Some(tok) => Err(err(
                self.number,
                ParseErrorKind::TrailingToken(tok.to_string()),
            )),
            None => Ok(()),
        }
    }
}

/// Splits a document into content lines and checks the header.
fn lines<'a>(text: &'a str, kind: &'static str) -> Result<Vec<Line<'a>>, ParseError> {
    let mut out = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut rest = content.split_whitespace();
        rest.next().map(|keyword| Line {
            number: i + 1,
            keyword,
            rest,
        })
    });
    let mut header = out
        .next()
        .ok_or_else(|| err(0, ParseErrorKind::MissingHeader(kind)))?;
    if header.keyword != kind {
        return Err(err(header.number, ParseErrorKind::MissingHeader(kind)));
    }
    let version = header.next("format version")?;
    if version != FORMAT_VERSION.to_string() {
        return Err(err(
            header.number,
            ParseErrorKind::UnsupportedVersion(version.to_string()),
        ));
    }
    header.end()?;
    Ok(out.collect())
}

fn set_once<T>(
    slot: &mut Option<T>,
    value: T,
    field: &'static str,
    line: usize,
) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(err(line, ParseErrorKind::DuplicateField(field)));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_budget(line: &mut Line<'_>) -> Result<BigCost, ParseError> {
    let first = line.next("budget value")?;
    if first == "pow2" {
        let exps: Vec<u64> = line.integers().map_err(|e| ParseError {
            kind: ParseErrorKind::MalformedBudget(e.kind.to_string()),
            ..e
        })?;
        return Ok(BigCost::from_exponents(exps));
    }
    let value = BigCost::parse_decimal(first)
        .map_err(|e| err(line.number, ParseErrorKind::MalformedBudget(e.to_string())))?;
    line.end()?;
    Ok(value)
}

pub fn parse_instance(text: &str) -> Result<OcpInstance, ParseError> {
    let mut builder = OcpInstance::builder();
    let mut elements = HashSet::new();
    let mut edges = HashSet::new();
    let mut budget = None;
    let mut uncoverable = false;
    for mut line in lines(text, "ocp")? {
        let n = line.number;
        match line.keyword {
            kw @ ("label" | "extra") => {
                let id = line.next("element id")?;
                let weight: u64 = line.integer("weight").map_err(|e| {
                    if line_negative(&e) {
                        err(n, ParseErrorKind::NonPositiveWeight(id.to_string()))
                    } else {
                        e
                    }
                })?;
                line.end()?;
                if weight == 0 {
                    return Err(err(n, ParseErrorKind::NonPositiveWeight(id.to_string())));
                }
                if !elements.insert(id) {
                    return Err(err(n, ParseErrorKind::DuplicateId(id.to_string())));
                }
                builder = if kw == "label" {
                    builder.label(id, weight)
                } else {
                    builder.extra(id, weight)
                };
            }
            "edge" => {
                let id = line.next("edge id")?;
                if !edges.insert(id) {
                    return Err(err(n, ParseErrorKind::DuplicateId(id.to_string())));
                }
                let members: Vec<&str> = line.rest.by_ref().collect();
                if members.is_empty() {
                    return Err(err(n, ParseErrorKind::MissingToken("edge elements")));
                }
                if let Some(unknown) = members.iter().find(|m| !elements.contains(*m)) {
                    return Err(err(
                        n,
                        ParseErrorKind::UnknownElement {
                            edge: id.to_string(),
                            element: unknown.to_string(),
                        },
                    ));
                }
                builder = builder.edge(id, members);
            }
            "budget" => {
                let value = parse_budget(&mut line)?;
                set_once(&mut budget, value, "budget", n)?;
            }
            "uncoverable" => {
                line.end()?;
                uncoverable = true;
            }
            other => return Err(err(n, ParseErrorKind::UnknownKeyword(other.to_string()))),
        }
    }
    builder
        .budget(budget)
        .allow_uncoverable(uncoverable)
        .build()
        .map_err(|e| err(0, e.into()))
}

fn line_negative(e: &ParseError) -> bool {
    matches!(&e.kind, ParseErrorKind::BadInteger(tok) if tok.starts_with('-'))
}

fn push_budget(out: &mut String, budget: &BigCost) {
    out.push_str("budget pow2");
    for e in budget.terms() {
        let _ = write!(out, " {e}");
    }
    out.push('\n');
}

pub fn serialize_instance(instance: &OcpInstance) -> String {
    let mut out = format!("ocp {FORMAT_VERSION}\n");
    for e in instance.required_labels() {
        let _ = writeln!(out, "label {} {}", e.name, e.weight);
    }
    for e in instance.extra_elements() {
        let _ = writeln!(out, "extra {} {}", e.name, e.weight);
    }
    for edge in instance.edges() {
        out.push_str("edge ");
        out.push_str(&edge.name);
        for &x in &edge.elements {
            out.push(' ');
            out.push_str(&instance.element(x).name);
        }
        out.push('\n');
    }
    if let Some(b) = instance.budget() {
        push_budget(&mut out, b);
    }
    if !instance.is_coverable() {
        out.push_str("uncoverable\n");
    }
    out
}

/// A covering as written on disk: edge ids, not yet resolved.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoveringDocument {
    /// Path or id of the instance the sequence refers to.
    pub instance: Option<String>,
    pub sequence: Vec<String>,
}

impl CoveringDocument {
    pub fn from_covering(
        instance: &OcpInstance,
        covering: &Covering,
        reference: Option<String>,
    ) -> Result<Self, InstanceError> {
        Ok(CoveringDocument {
            instance: reference,
            sequence: instance
                .edge_names(covering)?
                .into_iter()
                .map(String::from)
                .collect(),
        })
    }

    pub fn resolve(&self, instance: &OcpInstance) -> Result<Covering, InstanceError> {
        instance.covering(&self.sequence)
    }
}

pub fn parse_covering(text: &str) -> Result<CoveringDocument, ParseError> {
    let mut instance = None;
    let mut sequence = None;
    for mut line in lines(text, "cov")? {
        let n = line.number;
        match line.keyword {
            "instance" => {
                let r = line.next("instance reference")?.to_string();
                line.end()?;
                set_once(&mut instance, r, "instance", n)?;
            }
            "sequence" => {
                let ids = line.rest.by_ref().map(String::from).collect();
                set_once(&mut sequence, ids, "sequence", n)?;
            }
            other => return Err(err(n, ParseErrorKind::UnknownKeyword(other.to_string()))),
        }
    }
    Ok(CoveringDocument {
        instance,
        sequence: sequence.ok_or_else(|| err(0, ParseErrorKind::MissingField("sequence")))?,
    })
}

pub fn serialize_covering(doc: &CoveringDocument) -> String {
    let mut out = format!("cov {FORMAT_VERSION}\n");
    if let Some(r) = &doc.instance {
        let _ = writeln!(out, "instance {r}");
    }
    out.push_str("sequence");
    for id in &doc.sequence {
        out.push(' ');
        out.push_str(id);
    }
    out.push('\n');
    out
}

#[derive(Default)]
struct SourceFields {
    m: Option<usize>,
    b: Option<u64>,
    a: Option<Vec<u64>>,
}

impl SourceFields {
    /// Handles `m`, `B` and `a`; returns false for any other keyword.
    fn accept(&mut self, line: &mut Line<'_>) -> Result<bool, ParseError> {
        let n = line.number;
        match line.keyword {
            "m" => {
                let v = line.integer("bin count")?;
                line.end()?;
                set_once(&mut self.m, v, "m", n)?;
            }
            "B" => {
                let v = line.integer("bin target")?;
                line.end()?;
                set_once(&mut self.b, v, "B", n)?;
            }
            "a" => {
                let v = line.integers()?;
                set_once(&mut self.a, v, "a", n)?;
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn finish(self) -> Result<ThreePartitionInstance, ParseError> {
        let missing = |f| err(0, ParseErrorKind::MissingField(f));
        Ok(ThreePartitionInstance::new(
            self.m.ok_or_else(|| missing("m"))?,
            self.b.ok_or_else(|| missing("B"))?,
            self.a.ok_or_else(|| missing("a"))?,
        ))
    }
}

/// Parses a 3-Partition document. Constraint violations are not checked here.
pub fn parse_3p(text: &str) -> Result<ThreePartitionInstance, ParseError> {
    let mut fields = SourceFields::default();
    for mut line in lines(text, "3p")? {
        if !fields.accept(&mut line)? {
            return Err(err(
                line.number,
                ParseErrorKind::UnknownKeyword(line.keyword.to_string()),
            ));
        }
    }
    fields.finish()
}

fn push_source(out: &mut String, m: usize, b: u64, a: &[u64]) {
    let _ = writeln!(out, "m {m}");
    let _ = writeln!(out, "B {b}");
    out.push('a');
    for v in a {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
}

pub fn serialize_3p(tp: &ThreePartitionInstance) -> String {
    let mut out = format!("3p {FORMAT_VERSION}\n");
    push_source(&mut out, tp.m, tp.b, &tp.a);
    out
}

pub fn serialize_map(map: &ReductionMap) -> String {
    let p = &map.params;
    let mut out = format!("ocpmap {FORMAT_VERSION}\n");
    push_source(&mut out, p.m, p.b, &map.a);
    let _ = writeln!(out, "t {}", p.t);
    let _ = writeln!(out, "w {}", p.w);
    let _ = writeln!(out, "infeasible {}", map.infeasible);
    for (j, t) in map.triplets.iter().enumerate() {
        let _ = writeln!(out, "triplet {} {} {} {}", j + 1, t[0] + 1, t[1] + 1, t[2] + 1);
    }
    for e in &map.edges {
        let kind = match e.kind {
            GadgetEdgeKind::Opening => "opening",
            GadgetEdgeKind::Assignment => "assignment",
        };
        let _ = writeln!(out, "edge {} {kind} {} {}", e.name, e.bin + 1, e.triplet + 1);
    }
    for t in &map.tokens {
        let kind = match t.kind {
            TokenKind::Opening => "opening",
            TokenKind::Closing => "closing",
        };
        let _ = writeln!(out, "token {} {kind} {} {}", t.name, t.bin + 1, t.triplet + 1);
    }
    out
}

/// Parses a reduction map. The map is rebuilt from its source instance and
/// must agree with it line for line.
pub fn parse_map(text: &str) -> Result<ReductionMap, ParseError> {
    let mut fields = SourceFields::default();
    for mut line in lines(text, "ocpmap")? {
        match line.keyword {
            "t" | "w" | "infeasible" | "triplet" | "edge" | "token" => {}
            _ => {
                if !fields.accept(&mut line)? {
                    return Err(err(
                        line.number,
                        ParseErrorKind::UnknownKeyword(line.keyword.to_string()),
                    ));
                }
            }
        }
    }
    let source = fields.finish()?;
    let rebuilt = reduce_3p_to_ocp(&source)
        .map_err(|e| err(0, ParseErrorKind::InconsistentMap(e.to_string())))?
        .map;
    let expected = serialize_map(&rebuilt);
    let canonical = |s: &str| -> Vec<String> {
        s.lines()
            .map(|l| l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>().join(" "))
            .filter(|l| !l.is_empty())
            .collect()
    };
    let (got, want) = (canonical(text), canonical(&expected));
    if got != want {
        let at = got
            .iter()
            .zip(&want)
            .position(|(g, w)| g != w)
            .unwrap_or(got.len().min(want.len()));
        let detail = match (got.get(at), want.get(at)) {
            (Some(g), Some(w)) => format!("found `{g}`, expected `{w}`"),
            (Some(g), None) => format!("unexpected `{g}`"),
            (None, Some(w)) => format!("missing `{w}`"),
            (None, None) => unreachable!(),
        };
        return Err(err(0, ParseErrorKind::InconsistentMap(detail)));
    }
    Ok(rebuilt)
}

impl fmt::Display for CoveringDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_covering(self))
    }
}
