//! Concrete syntax: terms of all three dialects, types, contexts and
//! judgements.
//!
//! ```text
//! term  := ("\" | "lam" | "λ") ident "." term
//!        | ("nu" | "ν") ident "." term
//!        | ("mu" | "μ") name "." term          (a bare ident in the nlm dialect)
//!        | atom { atom }
//! atom  := ident | "[" name "]" arg | "[" term "]" arg | "(" term ")"
//! arg   := atom | binder form
//! name  := "'" ident
//! type  := ntype [ "->" type ]
//! ntype := "~" ntype | tyvar | "(" type ")"
//! ```

use std::fmt;

use crate::ident::Ident;
use crate::syntax::{rename_apart, Term};
use crate::types::{Conclusion, TyVar, Type, TypingContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { offset, message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lambda,
    Mu,
    Nu,
    Dot,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Name(String),
    Ident(String),
    Arrow,
    Tilde,
    Bottom,
    Colon,
    Comma,
    Turnstile,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lambda => f.write_str("λ"),
            Tok::Mu => f.write_str("mu"),
            Tok::Nu => f.write_str("nu"),
            Tok::Dot => f.write_str("'.'"),
            Tok::LBrack => f.write_str("'['"),
            Tok::RBrack => f.write_str("']'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Name(a) => write!(f, "name '{a}"),
            Tok::Ident(x) => write!(f, "identifier {x}"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Tilde => f.write_str("'~'"),
            Tok::Bottom => f.write_str("'#'"),
            Tok::Colon => f.write_str("':'"),
            Tok::Comma => f.write_str("','"),
            Tok::Turnstile => f.write_str("'|-'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() && !matches!(c, 'λ' | 'μ' | 'ν') || c == '_'
}

fn is_ident_char(c: char) -> bool {
    (c.is_alphanumeric() && !matches!(c, 'λ' | 'μ' | 'ν')) || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '\\' | 'λ' => Some(Tok::Lambda),
            'μ' => Some(Tok::Mu),
            'ν' => Some(Tok::Nu),
            '.' => Some(Tok::Dot),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '~' | '¬' => Some(Tok::Tilde),
            '#' | '⊥' => Some(Tok::Bottom),
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            '→' => Some(Tok::Arrow),
            '⊢' => Some(Tok::Turnstile),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((tok, start));
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, start));
            i += 2;
            continue;
        }
        if c == '|' && chars.get(i + 1) == Some(&'-') {
            out.push((Tok::Turnstile, start));
            i += 2;
            continue;
        }
        if c == '\'' {
            i += 1;
            if i >= chars.len() || !is_ident_start(chars[i]) {
                return err(start, "expected an identifier after the apostrophe of a name");
            }
            let s = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push((Tok::Name(chars[s..i].iter().collect()), start));
            continue;
        }
        if is_ident_start(c) {
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "lam" => Tok::Lambda,
                "mu" => Tok::Mu,
                "nu" => Tok::Nu,
                _ => Tok::Ident(word),
            };
            out.push((tok, start));
            continue;
        }
        return err(start, format!("unexpected character {c:?}"));
    }
    out.push((Tok::Eof, chars.len()));
    Ok(out)
}

/// Which calculus a source text is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    /// The full calculus with names and first-class negation.
    L,
    /// The λμ fragment: no ν, no negated application, μ always followed by a naming.
    Lmu,
    /// νλμ: one identifier class, μ binds a variable, no namings.
    Nlm,
}

impl Dialect {
    /// Guesses the dialect from a file extension (`.l`, `.lmu`, `.nlm`).
    pub fn from_extension(path: &str) -> Option<Dialect> {
        let ext = path.rsplit_once('.')?.1;
        match ext {
            "l" => Some(Dialect::L),
            "lmu" => Some(Dialect::Lmu),
            "nlm" => Some(Dialect::Nlm),
            _ => None,
        }
    }
}

impl std::str::FromStr for Dialect {
    type Err = String;
    fn from_str(s: &str) -> Result<Dialect, String> {
        match s {
            "l" => Ok(Dialect::L),
            "lmu" => Ok(Dialect::Lmu),
            "nlm" => Ok(Dialect::Nlm),
            _ => Err(format!("unknown dialect {s:?} (expected l, lmu or nlm)")),
        }
    }
}

/// Parse tree shared by the dialects before identifiers are classified.
#[derive(Clone, Debug)]
pub(crate) enum Raw {
    Var(String),
    Lam(String, Box<Raw>),
    Nu(String, Box<Raw>),
    /// μ binding a name (`mu 'a.M`)
    MuName(String, Box<Raw>),
    /// μ binding a variable (`mu x.M`, nlm only)
    MuVar(String, Box<Raw>),
    App(Box<Raw>, Box<Raw>),
    Naming(String, Box<Raw>),
    NegApp(Box<Raw>, Box<Raw>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    dialect: Dialect,
}

impl Parser {
    fn new(text: &str, dialect: Dialect) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, dialect })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            err(self.offset(), format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            err(self.offset(), format!("unexpected {} after the end of the term", self.peek()))
        }
    }

    fn variable(&mut self, after: &str) -> Result<String, ParseError> {
        let off = self.offset();
        match self.bump() {
            Tok::Ident(x) => Ok(x),
            Tok::Name(a) => err(off, format!("expected a variable after {after}, found name '{a}")),
            t => err(off, format!("expected a variable after {after}, found {t}")),
        }
    }

    fn starts_binder(&self) -> bool {
        matches!(self.peek(), Tok::Lambda | Tok::Mu | Tok::Nu)
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        match self.peek() {
            Tok::Lambda | Tok::Mu | Tok::Nu => self.binder(),
            _ => self.app(),
        }
    }

    fn binder(&mut self) -> Result<Raw, ParseError> {
        let off = self.offset();
        match self.bump() {
            Tok::Lambda => {
                let x = self.variable("λ")?;
                self.expect(Tok::Dot)?;
                Ok(Raw::Lam(x, Box::new(self.term()?)))
            }
            Tok::Nu => {
                let x = self.variable("nu")?;
                self.expect(Tok::Dot)?;
                Ok(Raw::Nu(x, Box::new(self.term()?)))
            }
            Tok::Mu => {
                let boff = self.offset();
                let binder = self.bump();
                let raw = match (binder, self.dialect) {
                    (Tok::Name(a), Dialect::L | Dialect::Lmu) => {
                        self.expect(Tok::Dot)?;
                        Raw::MuName(a, Box::new(self.term()?))
                    }
                    (Tok::Ident(x), Dialect::Nlm) => {
                        self.expect(Tok::Dot)?;
                        Raw::MuVar(x, Box::new(self.term()?))
                    }
                    (Tok::Ident(x), _) => {
                        return err(boff, format!("expected a name after mu, found variable {x} (names are written 'a)"))
                    }
                    (Tok::Name(a), Dialect::Nlm) => {
                        return err(boff, format!("mu binds a variable in the nlm dialect, found name '{a}"))
                    }
                    (t, _) => return err(boff, format!("expected a binder after mu, found {t}")),
                };
                Ok(raw)
            }
            t => err(off, format!("expected a binder, found {t}")),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LBrack | Tok::LParen)
    }

    fn app(&mut self) -> Result<Raw, ParseError> {
        let mut head = self.atom()?;
        loop {
            if self.starts_atom() {
                let arg = self.atom()?;
                head = Raw::App(Box::new(head), Box::new(arg));
            } else if self.starts_binder() {
                let arg = self.binder()?;
                return Ok(Raw::App(Box::new(head), Box::new(arg)));
            } else {
                return Ok(head);
            }
        }
    }

    /// Argument position after `]`: an atom, or a binder form.
    fn bracket_arg(&mut self) -> Result<Raw, ParseError> {
        if self.starts_binder() {
            self.binder()
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        let off = self.offset();
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(Raw::Var(x))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::LBrack => {
                self.bump();
                if let (Tok::Name(a), Tok::RBrack) = (self.peek().clone(), self.peek_at(1)) {
                    if self.dialect == Dialect::Nlm {
                        return err(self.offset(), format!("the nlm dialect has no names, found '{a}"));
                    }
                    self.bump();
                    self.bump();
                    let body = self.bracket_arg()?;
                    return Ok(Raw::Naming(a, Box::new(body)));
                }
                let m = self.term()?;
                self.expect(Tok::RBrack)?;
                let n = self.bracket_arg()?;
                Ok(Raw::NegApp(Box::new(m), Box::new(n)))
            }
            Tok::Name(a) => err(off, format!("a name is not a term: '{a} can only appear as [ '{a} ] M or after mu")),
            t => err(off, format!("expected a term, found {t}")),
        }
    }
}

pub(crate) fn parse_raw(text: &str, dialect: Dialect) -> Result<Raw, ParseError> {
    let mut p = Parser::new(text, dialect)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

fn raw_to_term(r: &Raw) -> Term {
    match r {
        Raw::Var(x) => Term::var(x.as_str()),
        Raw::Lam(x, b) => Term::lam(x.as_str(), raw_to_term(b)),
        Raw::Nu(x, b) => Term::nu(x.as_str(), raw_to_term(b)),
        Raw::MuName(a, b) => Term::mu(a.as_str(), raw_to_term(b)),
        Raw::MuVar(..) => unreachable!("variable-binding mu only exists in the nlm dialect"),
        Raw::App(m, n) => Term::app(raw_to_term(m), raw_to_term(n)),
        Raw::Naming(a, b) => Term::naming(a.as_str(), raw_to_term(b)),
        Raw::NegApp(m, n) => Term::neg_app(raw_to_term(m), raw_to_term(n)),
    }
}

/// Parses a term of the full calculus. Bound identifiers that clash with
/// another binder or with a free identifier are renamed apart.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    Ok(rename_apart(&raw_to_term(&parse_raw(text, Dialect::L)?)))
}

// ---------------------------------------------------------------------------
// Types

#[derive(Clone, Debug)]
pub(crate) enum RawType {
    Var(String),
    Bottom,
    Arrow(Box<RawType>, Box<RawType>),
    Neg(Box<RawType>),
}

impl Parser {
    fn ty(&mut self) -> Result<RawType, ParseError> {
        let a = self.ntype()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let b = self.ty()?;
            Ok(RawType::Arrow(Box::new(a), Box::new(b)))
        } else {
            Ok(a)
        }
    }

    fn ntype(&mut self) -> Result<RawType, ParseError> {
        let off = self.offset();
        match self.bump() {
            Tok::Tilde => Ok(RawType::Neg(Box::new(self.ntype()?))),
            Tok::Ident(v) => Ok(RawType::Var(v)),
            Tok::Bottom => Ok(RawType::Bottom),
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            t => err(off, format!("expected a type, found {t}")),
        }
    }
}

pub(crate) fn tyvar_of(s: &str) -> TyVar {
    if let Some(digits) = s.strip_prefix('p') {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) && !digits.starts_with('0') {
            if let Ok(n) = digits.parse() {
                return TyVar::Gen(n);
            }
        }
    }
    TyVar::Named(Ident::new(s))
}

fn raw_to_type(r: &RawType, off: usize) -> Result<Type, ParseError> {
    match r {
        RawType::Var(v) => Ok(Type::Var(tyvar_of(v))),
        RawType::Bottom => err(off, "# (bottom) is not a type; it may only stand alone as a conclusion"),
        RawType::Arrow(a, b) => Ok(Type::arrow(raw_to_type(a, off)?, raw_to_type(b, off)?)),
        RawType::Neg(a) => Ok(Type::neg(raw_to_type(a, off)?)),
    }
}

pub(crate) fn parse_raw_type(text: &str) -> Result<RawType, ParseError> {
    let mut p = Parser::new(text, Dialect::L)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a type. `p<n>` is a numbered type variable, any other identifier a
/// named one.
pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    raw_to_type(&parse_raw_type(text)?, 0)
}

/// Parses a conclusion: a type, or `#` / `⊥` on its own.
pub fn parse_conclusion(text: &str) -> Result<Conclusion, ParseError> {
    match parse_raw_type(text)? {
        RawType::Bottom => Ok(Conclusion::Bottom),
        r => Ok(Conclusion::Ty(raw_to_type(&r, 0)?)),
    }
}

/// Parses a context such as `x:p1, 'a:~p2`. The empty string is the empty
/// context. Names must be given negated types.
pub fn parse_context(text: &str) -> Result<TypingContext, ParseError> {
    let mut p = Parser::new(text, Dialect::L)?;
    let mut g = TypingContext::new();
    if *p.peek() == Tok::Eof {
        return Ok(g);
    }
    loop {
        let off = p.offset();
        let subject = p.bump();
        p.expect(Tok::Colon)?;
        let toff = p.offset();
        let t = raw_to_type(&p.ty()?, toff)?;
        match subject {
            Tok::Ident(x) => {
                if g.vars.insert(Ident::new(&x), t).is_some() {
                    return err(off, format!("variable {x} is declared twice"));
                }
            }
            Tok::Name(a) => {
                if !matches!(t, Type::Neg(_)) {
                    return err(toff, format!("name '{a} must have a negated type, found {t}"));
                }
                if g.names.insert(Ident::new(&a), t).is_some() {
                    return err(off, format!("name '{a} is declared twice"));
                }
            }
            t => return err(off, format!("expected a variable or a name, found {t}")),
        }
        match p.bump() {
            Tok::Comma => continue,
            Tok::Eof => return Ok(g),
            t => return err(p.offset(), format!("expected ',' or end of context, found {t}")),
        }
    }
}

/// Parses a judgement `Γ ⊢ M : A` (`|-` also accepted).
pub fn parse_judgement(text: &str) -> Result<(TypingContext, Term, Conclusion), ParseError> {
    let (ctx, rest, rest_off) = if let Some(i) = text.find('⊢') {
        (&text[..i], &text[i + '⊢'.len_utf8()..], i + 1)
    } else if let Some(i) = text.find("|-") {
        (&text[..i], &text[i + 2..], i + 2)
    } else {
        return err(0, "expected a judgement of the form  context ⊢ term : type");
    };
    let Some(colon) = rest.rfind(':') else {
        return err(rest_off, "expected ':' between the term and its type");
    };
    let shift = |e: ParseError, by: usize| ParseError { offset: e.offset + by, ..e };
    let g = parse_context(ctx)?;
    let m = parse_term(&rest[..colon]).map_err(|e| shift(e, rest_off))?;
    let a = parse_conclusion(&rest[colon + 1..]).map_err(|e| shift(e, rest_off + colon + 1))?;
    Ok((g, m, a))
}
