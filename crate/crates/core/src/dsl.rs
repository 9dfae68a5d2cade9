//! The datatype-declaration DSL: parsing, compilation to functor codes, and
//! rendering of the derived induction rules.
//!
//! Grammar:
//!
//! ```text
//! file  := {setdecl} decl
//! setdecl := "set" NAME "=" "{" ident {"," ident} "}"
//! decl  := "data" NAME "=" ctor {"|" ctor}
//! ctor  := NAME {atype}
//! atype := NAME | "(" type ")"
//! type  := "List" atype | "Pf" atype | atype {"," atype} | NAME
//! ```
//!
//! `--` starts a comment running to the end of the line. Named constant sets
//! must be declared before the data declaration that uses them. Mutual and
//! parameterized (nested) declarations are rejected with explicit
//! diagnostics rather than silently mis-compiled.

use serde::Serialize;

use crate::el::El;
use crate::error::ParseError;
use crate::functor::FunctorCode;
use crate::sets::FinSet;

/// One argument position of a constructor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgType {
    /// The declared type itself.
    Rec,
    /// A named constant set declared in the same file.
    Named(String, FinSet),
    /// A finite list.
    ListOf(Box<ArgType>),
    /// A finite set (powerset).
    PfOf(Box<ArgType>),
    /// A tuple of at least two components.
    TupleOf(Vec<ArgType>),
}

/// A parsed datatype declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub constructors: Vec<(String, Vec<ArgType>)>,
    pub sets: Vec<(String, FinSet)>,
}

struct Lexer {
    tokens: Vec<Token>,
    pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Token {
    kind: Tok,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Equals,
    Bar,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eof,
}

fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = source.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '-' => {
                chars.next();
                col += 1;
                match chars.peek() {
                    Some('-') => {
                        while let Some(&c) = chars.peek() {
                            if c == '\n' {
                                break;
                            }
                            chars.next();
                            col += 1;
                        }
                    }
                    Some('>') => {
                        return Err(ParseError::new(
                            tline,
                            tcol,
                            "function-space argument types are not supported",
                        ))
                    }
                    _ => return Err(ParseError::new(tline, tcol, "unexpected '-'")),
                }
            }
            '=' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: Tok::Equals, line: tline, col: tcol });
            }
            '|' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: Tok::Bar, line: tline, col: tcol });
            }
            '(' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: Tok::LParen, line: tline, col: tcol });
            }
            ')' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: Tok::RParen, line: tline, col: tcol });
            }
            '{' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: Tok::LBrace, line: tline, col: tcol });
            }
            '}' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: Tok::RBrace, line: tline, col: tcol });
            }
            ',' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: Tok::Comma, line: tline, col: tcol });
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        ident.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Token { kind: Tok::Ident(ident), line: tline, col: tcol });
            }
            other => {
                return Err(ParseError::new(
                    tline,
                    tcol,
                    format!("unexpected character '{other}'"),
                ))
            }
        }
    }
    tokens.push(Token { kind: Tok::Eof, line, col });
    Ok(tokens)
}

impl Lexer {
    fn peek(&self) -> Tok {
        self.tokens[self.pos].kind.clone()
    }

    fn peek_ident(&self) -> Option<String> {
        match &self.tokens[self.pos].kind {
            Tok::Ident(name) => Some(name.clone()),
            _ => None,
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError::new(t.line, t.col, msg)
    }

    fn expect(&mut self, kind: Tok, what: &str) -> Result<Token, ParseError> {
        if self.peek() == kind {
            Ok(self.bump())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        let t = self.tokens[self.pos].clone();
        match t.kind {
            Tok::Ident(name) => {
                self.bump();
                Ok((name, t.line, t.col))
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }
}

/// Parses a declaration file: named constant sets followed by exactly one
/// data declaration.
pub fn parse_decl(source: &str) -> Result<Decl, ParseError> {
    let mut lx = Lexer {
        tokens: lex(source)?,
        pos: 0,
    };
    let mut sets: Vec<(String, FinSet)> = Vec::new();

    while lx.peek_ident().as_deref() == Some("set") {
        lx.bump();
        let (name, line, col) = lx.ident("a set name")?;
        if sets.iter().any(|(n, _)| n == &name) {
            return Err(ParseError::new(line, col, format!("duplicate set '{name}'")));
        }
        lx.expect(Tok::Equals, "'='")?;
        lx.expect(Tok::LBrace, "'{'")?;
        let mut elems = Vec::new();
        if lx.peek() != Tok::RBrace {
            loop {
                let (e, ..) = lx.ident("a set element")?;
                elems.push(El::atom(e));
                if lx.peek() == Tok::Comma {
                    lx.bump();
                } else {
                    break;
                }
            }
        }
        lx.expect(Tok::RBrace, "'}'")?;
        sets.push((name, FinSet::new(elems)));
    }

    let kw = lx.ident("'data'")?;
    if kw.0 != "data" {
        return Err(ParseError::new(kw.1, kw.2, "expected 'data'"));
    }
    let (name, nline, ncol) = lx.ident("a datatype name")?;
    if sets.iter().any(|(n, _)| n == &name) {
        return Err(ParseError::new(
            nline,
            ncol,
            format!("'{name}' is already a set name"),
        ));
    }
    if let Some(param) = lx.peek_ident() {
        return Err(lx.err(format!(
            "type parameter '{param}' found: parameterized (nested) datatypes are not supported"
        )));
    }
    lx.expect(Tok::Equals, "'='")?;

    let mut constructors: Vec<(String, Vec<ArgType>)> = Vec::new();
    loop {
        let (ctor, cline, ccol) = lx.ident("a constructor name")?;
        if constructors.iter().any(|(n, _)| n == &ctor) {
            return Err(ParseError::new(
                cline,
                ccol,
                format!("duplicate constructor '{ctor}'"),
            ));
        }
        let mut args = Vec::new();
        loop {
            match lx.peek() {
                Tok::Ident(_) => {
                    let (arg, line, col) = lx.ident("an argument type")?;
                    args.push(resolve_name(&arg, &name, &sets, line, col)?);
                }
                Tok::LParen => {
                    lx.bump();
                    let t = parse_type(&mut lx, &name, &sets)?;
                    lx.expect(Tok::RParen, "')'")?;
                    args.push(t);
                }
                _ => break,
            }
        }
        constructors.push((ctor, args));
        if lx.peek() == Tok::Bar {
            lx.bump();
        } else {
            break;
        }
    }

    match lx.peek() {
        Tok::Eof => {}
        Tok::Ident(kw) if kw == "data" => {
            return Err(lx.err(
                "a second data declaration found: mutual declarations are not supported",
            ))
        }
        _ => return Err(lx.err("trailing input after declaration")),
    }

    Ok(Decl {
        name,
        constructors,
        sets,
    })
}

fn resolve_name(
    name: &str,
    decl_name: &str,
    sets: &[(String, FinSet)],
    line: usize,
    col: usize,
) -> Result<ArgType, ParseError> {
    if name == decl_name {
        return Ok(ArgType::Rec);
    }
    if let Some((_, s)) = sets.iter().find(|(n, _)| n == name) {
        return Ok(ArgType::Named(name.to_string(), s.clone()));
    }
    if name == "List" || name == "Pf" {
        return Err(ParseError::new(
            line,
            col,
            format!("'{name}' needs an argument, e.g. ({name} {decl_name})"),
        ));
    }
    Err(ParseError::new(
        line,
        col,
        format!("unknown name '{name}' (recursive references may only name '{decl_name}')"),
    ))
}

fn parse_type(
    lx: &mut Lexer,
    decl_name: &str,
    sets: &[(String, FinSet)],
) -> Result<ArgType, ParseError> {
    let head = match lx.peek_ident().as_deref() {
        Some("List") => {
            lx.bump();
            let inner = parse_atype(lx, decl_name, sets)?;
            ArgType::ListOf(Box::new(inner))
        }
        Some("Pf") => {
            lx.bump();
            let inner = parse_atype(lx, decl_name, sets)?;
            ArgType::PfOf(Box::new(inner))
        }
        _ => parse_atype(lx, decl_name, sets)?,
    };
    if lx.peek() != Tok::Comma {
        return Ok(head);
    }
    let mut parts = vec![head];
    while lx.peek() == Tok::Comma {
        lx.bump();
        parts.push(parse_atype(lx, decl_name, sets)?);
    }
    Ok(ArgType::TupleOf(parts))
}

fn parse_atype(
    lx: &mut Lexer,
    decl_name: &str,
    sets: &[(String, FinSet)],
) -> Result<ArgType, ParseError> {
    match lx.peek() {
        Tok::Ident(_) => {
            let (name, line, col) = lx.ident("a type name")?;
            resolve_name(&name, decl_name, sets, line, col)
        }
        Tok::LParen => {
            lx.bump();
            let t = parse_type(lx, decl_name, sets)?;
            lx.expect(Tok::RParen, "')'")?;
            Ok(t)
        }
        _ => Err(lx.err("expected a type")),
    }
}

/// Renders a declaration back to source form. Parsing the result gives the
/// declaration back.
pub fn render_decl(d: &Decl) -> String {
    let mut out = String::new();
    for (name, elems) in &d.sets {
        out.push_str(&format!("set {name} = {{"));
        for (i, e) in elems.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&e.to_string());
        }
        out.push_str("}\n");
    }
    out.push_str(&format!("data {} =", d.name));
    for (i, (ctor, args)) in d.constructors.iter().enumerate() {
        if i > 0 {
            out.push_str(" |");
        }
        out.push(' ');
        out.push_str(ctor);
        for arg in args {
            out.push(' ');
            out.push_str(&render_arg(arg, d));
        }
    }
    out.push('\n');
    out
}

fn render_arg(arg: &ArgType, d: &Decl) -> String {
    match arg {
        ArgType::Rec => d.name.clone(),
        ArgType::Named(n, _) => n.clone(),
        ArgType::ListOf(inner) => format!("(List {})", render_arg(inner, d)),
        ArgType::PfOf(inner) => format!("(Pf {})", render_arg(inner, d)),
        ArgType::TupleOf(parts) => {
            let inner: Vec<String> = parts.iter().map(|p| render_arg(p, d)).collect();
            format!("({})", inner.join(", "))
        }
    }
}

/// Compiles a declaration to its underlying functor: the sum over
/// constructors of the product of argument codes, with the empty product the
/// singleton constant.
pub fn compile_functor(d: &Decl) -> FunctorCode {
    let ctor_codes: Vec<FunctorCode> = d
        .constructors
        .iter()
        .map(|(_, args)| {
            let arg_codes: Vec<FunctorCode> = args.iter().map(arg_code).collect();
            product_of(arg_codes)
        })
        .collect();
    sum_of(ctor_codes)
}

fn arg_code(arg: &ArgType) -> FunctorCode {
    match arg {
        ArgType::Rec => FunctorCode::Id,
        ArgType::Named(_, s) => FunctorCode::Const(s.clone()),
        ArgType::ListOf(inner) => FunctorCode::seq(arg_code(inner)),
        ArgType::PfOf(inner) => FunctorCode::pow(arg_code(inner)),
        ArgType::TupleOf(parts) => {
            product_of(parts.iter().map(arg_code).collect())
        }
    }
}

fn product_of(mut codes: Vec<FunctorCode>) -> FunctorCode {
    match codes.len() {
        0 => FunctorCode::Const(FinSet::singleton_unit()),
        1 => codes.pop().expect("one element"),
        _ => {
            let last = codes.pop().expect("nonempty");
            codes
                .into_iter()
                .rev()
                .fold(last, |acc, c| FunctorCode::prod(c, acc))
        }
    }
}

fn sum_of(mut codes: Vec<FunctorCode>) -> FunctorCode {
    match codes.len() {
        0 => FunctorCode::Const(FinSet::empty()),
        1 => codes.pop().expect("one element"),
        _ => {
            let last = codes.pop().expect("nonempty");
            codes
                .into_iter()
                .rev()
                .fold(last, |acc, c| FunctorCode::sum(c, acc))
        }
    }
}

/// The machine-readable form of a derived rule.
#[derive(Debug, Clone, Serialize)]
pub struct RuleJson {
    pub datatype: String,
    pub premises: Vec<PremiseJson>,
    pub conclusion: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PremiseJson {
    pub constructor: String,
    pub hypotheses: Vec<String>,
}

/// One premise per constructor, with binders, induction hypotheses read off
/// the proof positions, and the constructor conclusion.
fn premise_parts(ctor: &str, args: &[ArgType]) -> (Vec<String>, Vec<String>, String) {
    let mut vars: Vec<String> = Vec::new();
    let mut hyps: Vec<String> = Vec::new();
    let mut used: std::collections::BTreeMap<&'static str, usize> = Default::default();

    let mut fresh = |stem: &'static str, multi: bool| -> String {
        let n = used.entry(stem).or_insert(0);
        *n += 1;
        if *n == 1 && !multi {
            stem.to_string()
        } else {
            format!("{stem}{n}")
        }
    };
    let multi = |stem: &'static str, args: &[ArgType]| -> bool {
        args.iter().filter(|a| var_stem(a) == stem).count() > 1
    };

    for arg in args {
        let stem = var_stem(arg);
        match arg {
            ArgType::PfOf(inner) if matches!(**inner, ArgType::Rec) => {
                vars.push("{s1,…,sn}".to_string());
                hyps.push("P s1 × … × P sn".to_string());
            }
            _ => {
                let v = fresh(stem, multi(stem, args));
                if let Some(h) = hypothesis(arg, &v) {
                    hyps.push(h);
                }
                vars.push(v);
            }
        }
    }

    let conclusion = if vars.is_empty() {
        format!("P {ctor}")
    } else {
        format!("P ({ctor} {})", vars.join(" "))
    };
    (vars, hyps, conclusion)
}

fn var_stem(arg: &ArgType) -> &'static str {
    match arg {
        ArgType::Rec => "n",
        ArgType::Named(..) => "c",
        ArgType::ListOf(_) => "rs",
        ArgType::PfOf(_) => "s",
        ArgType::TupleOf(_) => "t",
    }
}

/// The induction hypothesis contributed by one argument, if it contains
/// recursive positions. `depth` freshens bound index variables in nested
/// lists and sets.
fn hypothesis(arg: &ArgType, var: &str) -> Option<String> {
    hypothesis_at(arg, var, 0)
}

fn hypothesis_at(arg: &ArgType, var: &str, depth: usize) -> Option<String> {
    let bound = |stem: &str| {
        if depth == 0 {
            stem.to_string()
        } else {
            format!("{stem}{depth}")
        }
    };
    match arg {
        ArgType::Rec => Some(format!("P {}", atom_or_parens(var))),
        ArgType::Named(..) => None,
        ArgType::ListOf(inner) => {
            let k = bound("k");
            let idx = format!("({var} !! {k})");
            hypothesis_at(inner, &idx, depth + 1)
                .map(|h| format!("∀ {k} < length {var}. {h}"))
        }
        ArgType::PfOf(inner) => {
            let s = bound("s");
            hypothesis_at(inner, &s, depth + 1).map(|h| format!("∀ {s} ∈ {var}. {h}"))
        }
        ArgType::TupleOf(parts) => {
            let hs: Vec<String> = parts
                .iter()
                .enumerate()
                .filter_map(|(i, p)| hypothesis_at(p, &format!("({var}.{})", i + 1), depth))
                .collect();
            if hs.is_empty() {
                None
            } else {
                Some(hs.join(" × "))
            }
        }
    }
}

fn atom_or_parens(expr: &str) -> String {
    if expr.starts_with('(') || !expr.contains(' ') {
        expr.to_string()
    } else {
        format!("({expr})")
    }
}

fn premise_line(ctor: &str, args: &[ArgType]) -> String {
    let (vars, hyps, conclusion) = premise_parts(ctor, args);
    if vars.is_empty() {
        return conclusion;
    }
    let mut line = format!("∀ {}. ", vars.join(" "));
    for h in &hyps {
        let wrapped = if h.contains('∀') {
            format!("({h})")
        } else {
            h.clone()
        };
        line.push_str(&wrapped);
        line.push_str(" → ");
    }
    line.push_str(&conclusion);
    line
}

/// Renders the derived induction rule as text: one premise per constructor,
/// then the conclusion. Byte-stable for golden tests.
pub fn derive_rule_text(d: &Decl) -> String {
    let mut out = String::new();
    out.push_str(&format!("datatype {}\n", d.name));
    out.push_str("premises:\n");
    for (ctor, args) in &d.constructors {
        out.push_str(&format!("  {}\n", premise_line(ctor, args)));
    }
    out.push_str("conclusion:\n");
    out.push_str(&format!("  ∀ (t : {}). P t\n", d.name));
    out
}

/// The same rule in the documented JSON schema.
pub fn derive_rule_json(d: &Decl) -> RuleJson {
    RuleJson {
        datatype: d.name.clone(),
        premises: d
            .constructors
            .iter()
            .map(|(ctor, args)| {
                let (_, hyps, _) = premise_parts(ctor, args);
                PremiseJson {
                    constructor: ctor.clone(),
                    hypotheses: hyps,
                }
            })
            .collect(),
        conclusion: format!("∀ (t : {}). P t", d.name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::induction::{hs_code, nat_code, rose_code};

    #[test]
    fn parses_nat() {
        let d = parse_decl("data Nat = Zero | Succ Nat").unwrap();
        assert_eq!(d.name, "Nat");
        assert_eq!(
            d.constructors,
            vec![
                ("Zero".to_string(), vec![]),
                ("Succ".to_string(), vec![ArgType::Rec]),
            ]
        );
    }

    #[test]
    fn parses_rose() {
        let d = parse_decl("data Rose = Node (List Rose)").unwrap();
        assert_eq!(
            d.constructors,
            vec![(
                "Node".to_string(),
                vec![ArgType::ListOf(Box::new(ArgType::Rec))]
            )]
        );
    }

    #[test]
    fn parses_hs() {
        let d = parse_decl("data HS = MkHS (Pf HS)").unwrap();
        assert_eq!(
            d.constructors,
            vec![(
                "MkHS".to_string(),
                vec![ArgType::PfOf(Box::new(ArgType::Rec))]
            )]
        );
    }

    #[test]
    fn compiles_the_three_paper_datatypes() {
        assert_eq!(
            compile_functor(&parse_decl("data Nat = Zero | Succ Nat").unwrap()),
            nat_code()
        );
        assert_eq!(
            compile_functor(&parse_decl("data Rose = Node (List Rose)").unwrap()),
            rose_code()
        );
        assert_eq!(
            compile_functor(&parse_decl("data HS = MkHS (Pf HS)").unwrap()),
            hs_code()
        );
    }

    #[test]
    fn compiles_lists_over_a_named_set() {
        let src = "set A = { a0, a1 }\ndata ListA = Nil | Cons A ListA";
        let d = parse_decl(src).unwrap();
        let code = compile_functor(&d);
        let a = FinSet::new([El::atom("a0"), El::atom("a1")]);
        assert_eq!(
            code,
            FunctorCode::sum(
                FunctorCode::Const(FinSet::singleton_unit()),
                FunctorCode::prod(FunctorCode::Const(a), FunctorCode::Id)
            )
        );
    }

    #[test]
    fn render_parse_round_trip() {
        let sources = [
            "data Nat = Zero | Succ Nat",
            "data Rose = Node (List Rose)",
            "data HS = MkHS (Pf HS)",
            "set A = { a0, a1 }\ndata T = L A | B T T | W (List (Pf T)) | Tup (A, T)",
        ];
        for src in sources {
            let d = parse_decl(src).unwrap();
            let rendered = render_decl(&d);
            assert_eq!(parse_decl(&rendered).unwrap(), d, "{rendered}");
        }
    }

    #[test]
    fn rejects_duplicate_constructors() {
        let err = parse_decl("data T = A | A").unwrap_err();
        assert!(err.msg.contains("duplicate constructor"));
    }

    #[test]
    fn rejects_unknown_names_with_position() {
        let err = parse_decl("data T = MkT Elsewhere").unwrap_err();
        assert!(err.msg.contains("unknown name 'Elsewhere'"));
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 14);
    }

    #[test]
    fn rejects_mutual_declarations() {
        let err = parse_decl("data A = MkA\ndata B = MkB").unwrap_err();
        assert!(err.msg.contains("mutual declarations are not supported"));
    }

    #[test]
    fn rejects_parameterized_declarations() {
        let err = parse_decl("data PTree a = PLeaf a | PNode (PTree (a, a))").unwrap_err();
        assert!(err.msg.contains("not supported"));
    }

    #[test]
    fn rejects_function_spaces() {
        let err = parse_decl("data Hyp = MkHyp ((Hyp -> Int) -> Int)").unwrap_err();
        assert!(err.msg.contains("function-space"));
    }

    #[test]
    fn nat_rule_text() {
        let d = parse_decl("data Nat = Zero | Succ Nat").unwrap();
        assert_eq!(
            derive_rule_text(&d),
            "datatype Nat\npremises:\n  P Zero\n  ∀ n. P n → P (Succ n)\nconclusion:\n  ∀ (t : Nat). P t\n"
        );
    }

    #[test]
    fn rose_rule_text() {
        let d = parse_decl("data Rose = Node (List Rose)").unwrap();
        assert_eq!(
            derive_rule_text(&d),
            "datatype Rose\npremises:\n  ∀ rs. (∀ k < length rs. P (rs !! k)) → P (Node rs)\nconclusion:\n  ∀ (t : Rose). P t\n"
        );
    }

    #[test]
    fn hs_rule_text() {
        let d = parse_decl("data HS = MkHS (Pf HS)").unwrap();
        assert_eq!(
            derive_rule_text(&d),
            "datatype HS\npremises:\n  ∀ {s1,…,sn}. P s1 × … × P sn → P (MkHS {s1,…,sn})\nconclusion:\n  ∀ (t : HS). P t\n"
        );
    }

    #[test]
    fn json_schema_shape() {
        let d = parse_decl("data Nat = Zero | Succ Nat").unwrap();
        let json = serde_json::to_value(derive_rule_json(&d)).unwrap();
        assert_eq!(json["datatype"], "Nat");
        assert_eq!(json["premises"][0]["constructor"], "Zero");
        assert_eq!(json["premises"][0]["hypotheses"].as_array().unwrap().len(), 0);
        assert_eq!(json["premises"][1]["hypotheses"][0], "P n");
        assert_eq!(json["conclusion"], "∀ (t : Nat). P t");
    }
}
