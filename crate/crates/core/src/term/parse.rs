use crate::error::ParseError;

use super::{NamingContext, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Lambda,
    BigLambda,
    Dot,
    Colon,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Arrow,
    Star,
    Ident(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lambda => "`\\`".into(),
            Tok::BigLambda => "`/\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Ident(s) => format!("name `{s}`"),
        }
    }
}

/// Tokens paired with their character offsets.
pub(crate) fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '\\' | 'λ' => Tok::Lambda,
            'Λ' => Tok::BigLambda,
            '/' if chars.get(i + 1) == Some(&'\\') => {
                i += 1;
                Tok::BigLambda
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            '→' => Tok::Arrow,
            '.' => Tok::Dot,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '<' | '⟨' => Tok::LAngle,
            '>' | '⟩' => Tok::RAngle,
            '*' | '×' => Tok::Star,
            c if c.is_ascii_alphabetic() => {
                while i + 1 < chars.len()
                    && (chars[i + 1].is_ascii_alphanumeric()
                        || chars[i + 1] == '_'
                        || chars[i + 1] == '\'')
                {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => return Err(ParseError::syntax(start, format!("unexpected character `{other}`"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Cursor over a token stream, shared by the untyped and typed parsers.
pub(crate) struct Cursor {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Cursor, ParseError> {
        Ok(Cursor {
            toks: lex(text)?,
            pos: 0,
            end: text.chars().count(),
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    pub(crate) fn peek_at(&self, ahead: usize) -> Option<&Tok> {
        self.toks.get(self.pos + ahead).map(|(_, t)| t)
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        let found = self
            .peek()
            .map_or_else(|| "end of input".to_owned(), Tok::describe);
        ParseError::syntax(self.offset(), format!("expected {wanted}, found {found}"))
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.unexpected("end of input"))
        } else {
            Ok(())
        }
    }
}

/// Parses the untyped surface syntax into a nameless term.
///
/// Application is left-associative and a lambda body extends as far right as
/// possible. Free names are resolved against `ctx`.
pub fn parse(text: &str, ctx: &NamingContext) -> Result<Term, ParseError> {
    let mut parser = Parser {
        cur: Cursor::new(text)?,
        ctx,
        binders: Vec::new(),
    };
    let t = parser.term()?;
    parser.cur.finish()?;
    Ok(t)
}

struct Parser<'a> {
    cur: Cursor,
    ctx: &'a NamingContext,
    binders: Vec<String>,
}

impl Parser<'_> {
    fn term(&mut self) -> Result<Term, ParseError> {
        if self.cur.eat(&Tok::Lambda) {
            return self.lam_rest();
        }
        let mut t = self.atom()?;
        loop {
            match self.cur.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let arg = self.atom()?;
                    t = Term::app(t, arg);
                }
                // A trailing lambda argument swallows the rest of the input.
                Some(Tok::Lambda) => {
                    self.cur.bump();
                    let arg = self.lam_rest()?;
                    return Ok(Term::app(t, arg));
                }
                _ => return Ok(t),
            }
        }
    }

    fn lam_rest(&mut self) -> Result<Term, ParseError> {
        let name = self.cur.ident()?;
        self.cur.expect(Tok::Dot)?;
        self.binders.push(name);
        let body = self.term();
        self.binders.pop();
        Ok(Term::lam(body?))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.cur.peek() {
            Some(Tok::LParen) => {
                self.cur.bump();
                let t = self.term()?;
                self.cur.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(_)) => {
                let name = self.cur.ident()?;
                self.resolve(&name)
            }
            _ => Err(self.cur.unexpected("a name, `(` or `\\`")),
        }
    }

    fn resolve(&self, name: &str) -> Result<Term, ParseError> {
        if let Some(i) = self.binders.iter().rev().position(|b| b == name) {
            return Ok(Term::Var(i));
        }
        self.ctx
            .index_of(name)
            .map(|i| Term::Var(i + self.binders.len()))
            .ok_or_else(|| ParseError::UnboundName(name.to_owned()))
    }
}
