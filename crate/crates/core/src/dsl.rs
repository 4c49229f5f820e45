//! Text syntax for dependency atoms.
//!
//! ```text
//! FD   := names "->" names
//! EMVD := names "->>" names "|" names
//! DEP  := "dep(" names ";" names ")"
//! IND  := names "_||_" names | names "_||_{" names "}" names
//! names := "()" | ident+
//! ```
//!
//! `→`, `↠` and `⊥` are accepted for `->`, `->>` and `_||_`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::team::AttributeTuple;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DependencyAtom {
    /// `x -> y`
    Fd { x: AttributeTuple, y: AttributeTuple },
    /// `z ->> x | y`
    Emvd {
        z: AttributeTuple,
        x: AttributeTuple,
        y: AttributeTuple,
    },
    /// `dep(u; v)`
    Dep { u: AttributeTuple, v: AttributeTuple },
    /// `u _||_{w} v`
    Ind {
        u: AttributeTuple,
        w: AttributeTuple,
        v: AttributeTuple,
    },
}

impl DependencyAtom {
    /// Every attribute tuple the atom mentions.
    pub fn tuples(&self) -> Vec<&AttributeTuple> {
        match self {
            DependencyAtom::Fd { x, y } => vec![x, y],
            DependencyAtom::Emvd { z, x, y } => vec![z, x, y],
            DependencyAtom::Dep { u, v } => vec![u, v],
            DependencyAtom::Ind { u, w, v } => vec![u, w, v],
        }
    }

    /// The EMVD `z ->> x | y` an atom is equivalent to; `None` for the
    /// functional kinds.
    pub fn as_emvd(&self) -> Option<(&AttributeTuple, &AttributeTuple, &AttributeTuple)> {
        match self {
            DependencyAtom::Emvd { z, x, y } => Some((z, x, y)),
            DependencyAtom::Ind { u, w, v } => Some((w, u, v)),
            _ => None,
        }
    }
}

impl fmt::Display for DependencyAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DependencyAtom::Fd { x, y } => write!(f, "{x} -> {y}"),
            DependencyAtom::Emvd { z, x, y } => write!(f, "{z} ->> {x} | {y}"),
            DependencyAtom::Dep { u, v } => write!(f, "dep({u}; {v})"),
            DependencyAtom::Ind { u, w, v } if w.is_empty() => write!(f, "{u} _||_ {v}"),
            DependencyAtom::Ind { u, w, v } => write!(f, "{u} _||_{{{w}}} {v}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: found {found}, expected {}", expected.join(" or "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unsupported at byte {offset}: {what}")]
    Unsupported { offset: usize, what: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Arrow,
    DoubleArrow,
    Bar,
    Perp,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Arrow => "\"->\"".into(),
            Tok::DoubleArrow => "\"->>\"".into(),
            Tok::Bar => "\"|\"".into(),
            Tok::Perp => "\"_||_\"".into(),
            Tok::LBrace => "\"{\"".into(),
            Tok::RBrace => "\"}\"".into(),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::Semi => "\";\"".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let fixed: &[(&str, Tok)] = &[
            ("->>", Tok::DoubleArrow),
            ("->", Tok::Arrow),
            ("_||_", Tok::Perp),
            ("↠", Tok::DoubleArrow),
            ("→", Tok::Arrow),
            ("⊥", Tok::Perp),
            ("|", Tok::Bar),
            ("{", Tok::LBrace),
            ("}", Tok::RBrace),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            (";", Tok::Semi),
        ];
        if let Some((lit, tok)) = fixed.iter().find(|(lit, _)| rest.starts_with(lit)) {
            out.push((i, tok.clone()));
            i += lit.len();
            // "⊥_{w}" is accepted as well as "⊥{w}"
            if *tok == Tok::Perp && text[i..].starts_with("_{") {
                i += 1;
            }
            continue;
        }
        if is_ident_char(c) {
            let len = rest.find(|ch: char| !is_ident_char(ch)).unwrap_or(rest.len());
            out.push((i, Tok::Ident(rest[..len].to_string())));
            i += len;
            continue;
        }
        return Err(ParseError::Syntax {
            offset: i,
            found: format!("{c:?}"),
            expected: vec!["attribute name", "operator"],
        });
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            found: self.peek().describe(),
            expected,
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(vec![name]))
        }
    }

    fn names(&mut self) -> Result<AttributeTuple, ParseError> {
        if *self.peek() == Tok::LParen && *self.peek_at(1) == Tok::RParen {
            self.pos += 2;
            return Ok(AttributeTuple::empty());
        }
        let mut names = Vec::new();
        while let Tok::Ident(name) = self.peek().clone() {
            if *self.peek_at(1) == Tok::LParen {
                return Err(ParseError::Unsupported {
                    offset: self.offset(),
                    what: format!("function term {name}(...); atoms range over attribute names only"),
                });
            }
            names.push(name);
            self.pos += 1;
        }
        if names.is_empty() {
            return Err(self.error(vec!["attribute name", "\"()\""]));
        }
        Ok(AttributeTuple(names))
    }

    fn atom(&mut self) -> Result<DependencyAtom, ParseError> {
        if matches!(self.peek(), Tok::Ident(k) if k == "dep") && *self.peek_at(1) == Tok::LParen
            && *self.peek_at(2) != Tok::RParen
        {
            self.pos += 2;
            let u = self.names()?;
            self.expect(Tok::Semi, "\";\"")?;
            let v = self.names()?;
            self.expect(Tok::RParen, "\")\"")?;
            return Ok(DependencyAtom::Dep { u, v });
        }
        let left = self.names()?;
        let atom = match self.peek() {
            Tok::Arrow => {
                self.pos += 1;
                DependencyAtom::Fd {
                    x: left,
                    y: self.names()?,
                }
            }
            Tok::DoubleArrow => {
                self.pos += 1;
                let x = self.names()?;
                self.expect(Tok::Bar, "\"|\"")?;
                let y = self.names()?;
                DependencyAtom::Emvd { z: left, x, y }
            }
            Tok::Perp => {
                self.pos += 1;
                let w = if *self.peek() == Tok::LBrace {
                    self.pos += 1;
                    let w = if *self.peek() == Tok::RBrace {
                        AttributeTuple::empty()
                    } else {
                        self.names()?
                    };
                    self.expect(Tok::RBrace, "\"}\"")?;
                    w
                } else {
                    AttributeTuple::empty()
                };
                DependencyAtom::Ind {
                    u: left,
                    w,
                    v: self.names()?,
                }
            }
            _ => return Err(self.error(vec!["\"->\"", "\"->>\"", "\"_||_\""])),
        };
        Ok(atom)
    }
}

pub fn parse_atom(text: &str) -> Result<DependencyAtom, ParseError> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let atom = parser.atom()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(vec!["end of input"]));
    }
    Ok(atom)
}

impl FromStr for DependencyAtom {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_atom(s)
    }
}
