//! Line-oriented reaction text format.
//!
//! ```text
//! # comment
//! #! species: S0 S1 E ES0      (optional: fixes species order)
//! S0 + E <-> ES0 @ b0 = 3.4, 1.7
//! ES0 -> S1 + E @ c0 = 1.7
//! 0 -> S0
//! ```
//!
//! `<->` expands to `<label>_fwd` and `<label>_rev`. Reactions without a label
//! get `r<k>` where `k` counts reaction lines from 1. A rate annotation
//! `= v` applies to both directions of a reversible line; `= v, w` sets
//! forward and reverse rates separately.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::network::{is_identifier, Complex, RateAssignment, ReactionNetwork};

const SPECIES_PRAGMA: &str = "#! species:";

/// A parsed document: the network plus any inline rate annotations.
#[derive(Debug, Clone)]
pub struct Document {
    pub network: ReactionNetwork,
    pub rates: BTreeMap<String, f64>,
}

/// Parses reaction text into a validated network, ignoring rate annotations.
pub fn parse_network(text: &str) -> Result<ReactionNetwork> {
    parse_document(text).map(|d| d.network)
}

/// Parses reaction text, keeping inline `@ label = value` rates.
pub fn parse_document(text: &str) -> Result<Document> {
    let mut species: Vec<String> = Vec::new();
    let mut species_index: HashMap<String, usize> = HashMap::new();
    let mut reactions: Vec<(Complex, Complex, String)> = Vec::new();
    let mut positions: Vec<(usize, usize)> = Vec::new();
    let mut rates = BTreeMap::new();
    let mut reaction_count = 0usize;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = raw.trim_start();
        if let Some(rest) = trimmed.strip_prefix(SPECIES_PRAGMA) {
            let offset = raw.len() - rest.len();
            for name in rest.split_whitespace() {
                if !is_identifier(name) {
                    return Err(parse_error(line_no, offset + 1, format!("invalid species name `{name}`")));
                }
                if species_index.contains_key(name) {
                    return Err(parse_error(line_no, offset + 1, format!("species `{name}` listed twice")));
                }
                species_index.insert(name.to_string(), species.len());
                species.push(name.to_string());
            }
            continue;
        }
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        reaction_count += 1;
        let tokens = tokenize(content, line_no)?;
        let mut p = LineParser {
            tokens: &tokens,
            pos: 0,
            line: line_no,
            end_col: content.len() + 1,
        };
        let (src, col) = p.complex(&mut species, &mut species_index)?;
        let reversible = match p.next() {
            Some(Tok { kind: Kind::Arrow, .. }) => false,
            Some(Tok { kind: Kind::BiArrow, .. }) => true,
            other => return Err(p.unexpected(other, "`->` or `<->`")),
        };
        let (prod, _) = p.complex(&mut species, &mut species_index)?;
        let mut label = format!("r{reaction_count}");
        let mut values: Vec<f64> = Vec::new();
        if let Some(Tok { kind: Kind::At, .. }) = p.peek() {
            p.pos += 1;
            match p.next() {
                Some(Tok { kind: Kind::Ident(name), .. }) => label = name.clone(),
                other => return Err(p.unexpected(other, "a reaction label")),
            }
            if let Some(Tok { kind: Kind::Eq, .. }) = p.peek() {
                p.pos += 1;
                values.push(p.number()?);
                if let Some(Tok { kind: Kind::Comma, .. }) = p.peek() {
                    p.pos += 1;
                    values.push(p.number()?);
                }
            }
        }
        if let Some(t) = p.peek() {
            return Err(parse_error(line_no, t.col, "unexpected trailing input".into()));
        }
        if src == prod {
            return Err(parse_error(line_no, col, format!("self-loop in reaction `{label}`")));
        }
        if values.len() == 2 && !reversible {
            return Err(parse_error(line_no, col, "two rates given for an irreversible reaction".into()));
        }
        let mut push = |s: Complex, t: Complex, l: String, v: Option<f64>| -> Result<()> {
            if reactions.iter().any(|(_, _, x)| *x == l) {
                return Err(parse_error(line_no, col, format!("duplicate reaction label `{l}`")));
            }
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(parse_error(line_no, col, format!("rate for `{l}` must be positive")));
                }
                rates.insert(l.clone(), v);
            }
            reactions.push((s, t, l));
            positions.push((line_no, col));
            Ok(())
        };
        if reversible {
            let fwd = values.first().copied();
            let rev = values.get(1).copied().or(fwd);
            push(src.clone(), prod.clone(), format!("{label}_fwd"), fwd)?;
            push(prod, src, format!("{label}_rev"), rev)?;
        } else {
            push(src, prod, label, values.first().copied())?;
        }
    }

    if reactions.is_empty() {
        return Err(parse_error(1, 1, "no reactions declared".into()));
    }
    let network = ReactionNetwork::new(&species, reactions)?;
    Ok(Document { network, rates })
}

/// Parses inline rates and validates them against the parsed network.
pub fn parse_rates(text: &str) -> Result<RateAssignment> {
    let doc = parse_document(text)?;
    RateAssignment::for_network(&doc.network, doc.rates)
}

/// Deterministic text form: a species pragma followed by one irreversible
/// reaction per line in network order, each with its label.
pub fn canonical_serialize(net: &ReactionNetwork) -> String {
    serialize_inner(net, None)
}

/// As [`canonical_serialize`], with `= value` annotations from `rates`.
pub fn serialize_with_rates(net: &ReactionNetwork, rates: &RateAssignment) -> String {
    serialize_inner(net, Some(rates))
}

fn serialize_inner(net: &ReactionNetwork, rates: Option<&RateAssignment>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", SPECIES_PRAGMA, net.species_names().join(" "));
    for r in net.reactions() {
        let _ = write!(
            out,
            "{} -> {} @ {}",
            net.format_complex(net.source(r)),
            net.format_complex(net.product(r)),
            r.label
        );
        if let Some(v) = rates.and_then(|k| k.get(&r.label)) {
            let _ = write!(out, " = {v}");
        }
        out.push('\n');
    }
    out
}

fn parse_error(line: usize, column: usize, message: String) -> Error {
    Error::Parse {
        line,
        column,
        message,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Ident(String),
    Int(u32),
    Number(f64),
    Plus,
    Arrow,
    BiArrow,
    At,
    Eq,
    Comma,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: Kind,
    col: usize,
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Tok>> {
    let bytes = line.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if line[i..].starts_with("<->") {
            out.push(Tok { kind: Kind::BiArrow, col });
            i += 3;
        } else if line[i..].starts_with("->") {
            out.push(Tok { kind: Kind::Arrow, col });
            i += 2;
        } else if c == '+' {
            out.push(Tok { kind: Kind::Plus, col });
            i += 1;
        } else if c == '@' {
            out.push(Tok { kind: Kind::At, col });
            i += 1;
        } else if c == '=' {
            out.push(Tok { kind: Kind::Eq, col });
            i += 1;
        } else if c == ',' {
            out.push(Tok { kind: Kind::Comma, col });
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_ascii_alphanumeric() || d == '_' || d == '*' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Tok {
                kind: Kind::Ident(line[start..i].to_string()),
                col,
            });
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            // digits first; a following letter means "coefficient + species"
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let is_float = i < bytes.len()
                && matches!(bytes[i] as char, '.' | 'e' | 'E')
                && !(matches!(bytes[i] as char, 'e' | 'E')
                    && !bytes
                        .get(i + 1)
                        .map(|b| (*b as char).is_ascii_digit() || *b == b'-' || *b == b'+')
                        .unwrap_or(false));
            if is_float || c == '.' {
                while i < bytes.len() {
                    let d = bytes[i] as char;
                    let sign_ok = (d == '-' || d == '+') && matches!(bytes[i - 1] as char, 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || sign_ok {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let text = &line[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| parse_error(line_no, col, format!("invalid number `{text}`")))?;
                out.push(Tok { kind: Kind::Number(v), col });
            } else {
                let text = &line[start..i];
                let v: u32 = text
                    .parse()
                    .map_err(|_| parse_error(line_no, col, format!("invalid integer `{text}`")))?;
                out.push(Tok { kind: Kind::Int(v), col });
            }
        } else {
            return Err(parse_error(line_no, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct LineParser<'a> {
    tokens: &'a [Tok],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn unexpected(&self, tok: Option<&Tok>, expected: &str) -> Error {
        match tok {
            Some(t) => parse_error(self.line, t.col, format!("expected {expected}, found {:?}", t.kind)),
            None => parse_error(self.line, self.end_col, format!("expected {expected}, found end of line")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        match self.next() {
            Some(Tok { kind: Kind::Number(v), .. }) => Ok(*v),
            Some(Tok { kind: Kind::Int(v), .. }) => Ok(*v as f64),
            other => Err(self.unexpected(other, "a rate value")),
        }
    }

    fn complex(
        &mut self,
        species: &mut Vec<String>,
        index: &mut HashMap<String, usize>,
    ) -> Result<(Complex, usize)> {
        let start_col = self.peek().map(|t| t.col).unwrap_or(self.end_col);
        // the zero complex is a lone `0`
        if let Some(Tok { kind: Kind::Int(0), .. }) = self.peek() {
            let follows_ident = matches!(self.tokens.get(self.pos + 1), Some(Tok { kind: Kind::Ident(_), .. }));
            if !follows_ident {
                self.pos += 1;
                return Ok((Complex::zero(), start_col));
            }
        }
        let mut terms = Vec::new();
        loop {
            let coeff = match self.peek() {
                Some(Tok { kind: Kind::Int(k), col }) => {
                    if *k == 0 {
                        return Err(parse_error(self.line, *col, "zero coefficient".into()));
                    }
                    self.pos += 1;
                    *k
                }
                _ => 1,
            };
            let name = match self.next() {
                Some(Tok { kind: Kind::Ident(name), .. }) => name.clone(),
                other => return Err(self.unexpected(other, "a species name")),
            };
            let idx = match index.get(&name) {
                Some(&i) => i,
                None => {
                    species.push(name.clone());
                    index.insert(name, species.len() - 1);
                    species.len() - 1
                }
            };
            terms.push((idx, coeff));
            match self.peek() {
                Some(Tok { kind: Kind::Plus, .. }) => self.pos += 1,
                _ => break,
            }
        }
        Ok((Complex::from_terms(terms), start_col))
    }
}
