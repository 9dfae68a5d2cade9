//! The universal element representation.
//!
//! Every value manipulated by the engine — carrier elements, proofs,
//! dependent pairs, functor layers, terms — inhabits the single universe
//! [`El`]. One total order ([`canonical_order`]) and one textual rendering
//! cover the whole universe, which is what makes canonical sets and golden
//! tests possible.

use std::cmp::Ordering;
use std::fmt;

use crate::error::ParseError;

/// A universal tagged value.
///
/// The variant order is load-bearing: the derived `Ord` implements the
/// canonical total order (tag precedence `Unit < Atom < Inl < Inr < Pair <
/// Seq < Set < DPair < Mu`, lexicographic within a tag).
///
/// Invariants:
/// - `Set` payloads are strictly increasing (sorted, duplicate-free).
/// - `DPair(x, p)` pairs a carrier element with a proof; it is produced by
///   comprehension and decoration, never by hand in ordinary data.
/// - `Mu` wraps exactly one constructor layer of a fixed-point term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum El {
    Unit,
    Atom(String),
    Inl(Box<El>),
    Inr(Box<El>),
    Pair(Box<El>, Box<El>),
    Seq(Vec<El>),
    Set(Vec<El>),
    DPair(Box<El>, Box<El>),
    Mu(Box<El>),
}

impl El {
    pub fn atom(name: impl Into<String>) -> El {
        El::Atom(name.into())
    }

    pub fn inl(x: El) -> El {
        El::Inl(Box::new(x))
    }

    pub fn inr(x: El) -> El {
        El::Inr(Box::new(x))
    }

    pub fn pair(a: El, b: El) -> El {
        El::Pair(Box::new(a), Box::new(b))
    }

    pub fn dpair(x: El, p: El) -> El {
        El::DPair(Box::new(x), Box::new(p))
    }

    pub fn mu(layer: El) -> El {
        El::Mu(Box::new(layer))
    }

    /// A set value in canonical form: sorted, duplicates removed.
    pub fn set(mut members: Vec<El>) -> El {
        members.sort();
        members.dedup();
        El::Set(members)
    }

    /// Renders the canonical textual form. Stable across runs; the inverse
    /// of [`parse_el`].
    pub fn render(&self) -> String {
        self.to_string()
    }
}

/// The canonical total order on elements.
pub fn canonical_order(a: &El, b: &El) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for El {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            El::Unit => write!(f, "*"),
            El::Atom(name) => write!(f, "{name}"),
            El::Inl(x) => write!(f, "inl({x})"),
            El::Inr(x) => write!(f, "inr({x})"),
            El::Pair(a, b) => write!(f, "({a}, {b})"),
            El::Seq(xs) => {
                write!(f, "[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            El::Set(xs) => {
                write!(f, "{{")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            El::DPair(x, p) => write!(f, "<{x} | {p}>"),
            El::Mu(layer) => write!(f, "in({layer})"),
        }
    }
}

/// Parses the canonical element rendering.
pub fn parse_el(input: &str) -> Result<El, ParseError> {
    let mut p = ElParser::new(input);
    let el = p.element()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("trailing input after element"));
    }
    Ok(el)
}

struct ElParser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> ElParser<'a> {
    fn new(src: &'a str) -> Self {
        ElParser {
            chars: src.chars().collect(),
            pos: 0,
            src,
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let consumed: usize = self.chars[..self.pos.min(self.chars.len())]
            .iter()
            .map(|c| c.len_utf8())
            .sum();
        let prefix = &self.src[..consumed.min(self.src.len())];
        let line = prefix.chars().filter(|&c| c == '\n').count() + 1;
        let col = prefix.chars().rev().take_while(|&c| c != '\n').count() + 1;
        ParseError::new(line, col, msg)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(self.err(format!("expected '{want}', found '{c}'"))),
            None => Err(self.err(format!("expected '{want}', found end of input"))),
        }
    }

    fn element(&mut self) -> Result<El, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('*') => {
                self.bump();
                Ok(El::Unit)
            }
            Some('(') => {
                self.bump();
                let a = self.element()?;
                self.expect(',')?;
                let b = self.element()?;
                self.expect(')')?;
                Ok(El::pair(a, b))
            }
            Some('[') => {
                self.bump();
                let xs = self.comma_list(']')?;
                Ok(El::Seq(xs))
            }
            Some('{') => {
                self.bump();
                let xs = self.comma_list('}')?;
                Ok(El::set(xs))
            }
            Some('<') => {
                self.bump();
                let x = self.element()?;
                self.expect('|')?;
                let p = self.element()?;
                self.expect('>')?;
                Ok(El::dpair(x, p))
            }
            Some(c) if is_ident_char(c) => {
                let name = self.ident();
                if self.peek() == Some('(') {
                    match name.as_str() {
                        "inl" | "inr" | "in" => {
                            self.bump();
                            let inner = self.element()?;
                            self.expect(')')?;
                            Ok(match name.as_str() {
                                "inl" => El::inl(inner),
                                "inr" => El::inr(inner),
                                _ => El::mu(inner),
                            })
                        }
                        _ => Err(self.err(format!("unknown constructor '{name}'"))),
                    }
                } else {
                    Ok(El::Atom(name))
                }
            }
            Some(c) => Err(self.err(format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn comma_list(&mut self, close: char) -> Result<Vec<El>, ParseError> {
        let mut items = Vec::new();
        self.skip_ws();
        if self.peek() == Some(close) {
            self.bump();
            return Ok(items);
        }
        loop {
            items.push(self.element()?);
            self.skip_ws();
            match self.bump() {
                Some(c) if c == close => return Ok(items),
                Some(',') => continue,
                Some(c) => return Err(self.err(format!("expected ',' or '{close}', found '{c}'"))),
                None => return Err(self.err(format!("expected '{close}', found end of input"))),
            }
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if is_ident_char(c)) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_reflexive_on_atoms() {
        assert_eq!(
            canonical_order(&El::atom("a"), &El::atom("a")),
            Ordering::Equal
        );
    }

    #[test]
    fn tag_precedence_inl_before_inr() {
        assert_eq!(
            canonical_order(&El::inl(El::Unit), &El::inr(El::Unit)),
            Ordering::Less
        );
    }

    #[test]
    fn sorting_follows_tag_precedence() {
        let mut xs = vec![
            El::set(vec![El::atom("b")]),
            El::Unit,
            El::atom("a"),
        ];
        xs.sort();
        assert_eq!(
            xs,
            vec![El::Unit, El::atom("a"), El::set(vec![El::atom("b")])]
        );
    }

    #[test]
    fn set_constructor_sorts_and_dedups() {
        let s = El::set(vec![El::atom("b"), El::atom("a"), El::atom("b")]);
        assert_eq!(s, El::Set(vec![El::atom("a"), El::atom("b")]));
    }

    #[test]
    fn render_parse_round_trip() {
        let value = El::pair(
            El::inl(El::Unit),
            El::Seq(vec![
                El::dpair(El::atom("x0"), El::atom("p")),
                El::mu(El::set(vec![El::Unit])),
            ]),
        );
        let text = value.render();
        assert_eq!(parse_el(&text).unwrap(), value);
    }

    #[test]
    fn keyword_atoms_survive_round_trip() {
        let value = El::pair(El::atom("in"), El::atom("inl"));
        assert_eq!(parse_el(&value.render()).unwrap(), value);
    }

    #[test]
    fn parse_reports_positions() {
        let err = parse_el("(a,\n b").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.msg.contains("expected ')'"));
    }
}
