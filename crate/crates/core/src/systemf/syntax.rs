//! Concrete syntax and JSON for types and typed terms.
//!
//! ```text
//! ty   ::= "forall" a "." ty | prod ("->" ty)?
//! prod ::= tatom ("*" tatom)*
//! tatom::= "Unit" | a | "(" ty ")"
//! term ::= "\" x ":" ty "." term | "/\" a "." term | app
//! app  ::= head (atom | "[" ty "]")*
//! head ::= "fst" atom | "snd" atom | atom
//! atom ::= x | "()" | "(" term ")" | "<" term "," term ">"
//! ```

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, ParseError, TermError};
use crate::term::parse::{Cursor, Tok};
use crate::term::NameSupply;

use super::{CtxEntry, TTerm, Ty, TyCtx};

const KEYWORDS: [&str; 4] = ["forall", "fst", "snd", "Unit"];

/// A typing context whose entries carry surface names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    names: Vec<String>,
    ctx: TyCtx,
}

impl Signature {
    pub fn empty() -> Signature {
        Signature::default()
    }

    pub fn ctx(&self) -> &TyCtx {
        &self.ctx
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn scope(&self) -> Vec<(String, bool)> {
        self.names
            .iter()
            .zip(self.ctx.entries())
            .map(|(n, e)| (n.clone(), matches!(e, CtxEntry::Type)))
            .collect()
    }

    pub fn push_type(&mut self, name: &str) {
        self.names.push(name.to_owned());
        self.ctx.push_type();
    }

    pub fn push_term(&mut self, name: &str, ty: Ty) {
        self.names.push(name.to_owned());
        self.ctx.push_term(ty);
    }
}

/// Parses `"b, c:b, p:Unit*Unit"`: a bare name binds a type variable, `x:A`
/// binds a term variable. Later entries may mention earlier type names.
pub fn parse_signature(text: &str) -> Result<Signature, Error> {
    let mut sig = Signature::empty();
    for entry in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match entry.split_once(':') {
            Some((name, ty)) => {
                let name = name.trim();
                check_name(name)?;
                let ty = parse_ty_in(ty, &sig.scope())?;
                sig.push_term(name, ty);
            }
            None => {
                check_name(entry)?;
                sig.push_type(entry);
            }
        }
        let last = sig.names.last().expect("just pushed");
        if sig.names[..sig.names.len() - 1].contains(last) {
            return Err(TermError::DuplicateName(last.clone()).into());
        }
    }
    Ok(sig)
}

fn check_name(name: &str) -> Result<(), ParseError> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !KEYWORDS.contains(&name);
    if ok {
        Ok(())
    } else {
        Err(ParseError::syntax(0, format!("`{name}` is not a valid name")))
    }
}

pub fn parse_ty(text: &str, sig: &Signature) -> Result<Ty, ParseError> {
    parse_ty_in(text, &sig.scope())
}

fn parse_ty_in(text: &str, scope: &[(String, bool)]) -> Result<Ty, ParseError> {
    let mut p = Parser {
        cur: Cursor::new(text)?,
        scope: scope.to_vec(),
    };
    let ty = p.ty()?;
    p.cur.finish()?;
    Ok(ty)
}

pub fn parse_tterm(text: &str, sig: &Signature) -> Result<TTerm, ParseError> {
    let mut p = Parser {
        cur: Cursor::new(text)?,
        scope: sig.scope(),
    };
    let t = p.term()?;
    p.cur.finish()?;
    Ok(t)
}

struct Parser {
    cur: Cursor,
    /// Names in scope, outermost first; `true` marks a type variable.
    scope: Vec<(String, bool)>,
}

impl Parser {
    fn resolve(&self, name: &str, is_type: bool) -> Result<usize, ParseError> {
        self.scope
            .iter()
            .rev()
            .filter(|(_, t)| *t == is_type)
            .position(|(n, _)| n == name)
            .ok_or_else(|| ParseError::UnboundName(name.to_owned()))
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.cur.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.cur.bump();
            true
        } else {
            false
        }
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        let name = self.cur.ident()?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(ParseError::syntax(self.cur.offset(), format!("`{name}` is reserved")));
        }
        Ok(name)
    }

    fn ty(&mut self) -> Result<Ty, ParseError> {
        if self.keyword("forall") {
            let name = self.binder()?;
            self.cur.expect(Tok::Dot)?;
            self.scope.push((name, true));
            let body = self.ty();
            self.scope.pop();
            return Ok(Ty::all(body?));
        }
        let dom = self.prod()?;
        if self.cur.eat(&Tok::Arrow) {
            Ok(Ty::arr(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn prod(&mut self) -> Result<Ty, ParseError> {
        let mut ty = self.ty_atom()?;
        while self.cur.eat(&Tok::Star) {
            ty = Ty::prod(ty, self.ty_atom()?);
        }
        Ok(ty)
    }

    fn ty_atom(&mut self) -> Result<Ty, ParseError> {
        if self.cur.eat(&Tok::LParen) {
            let ty = self.ty()?;
            self.cur.expect(Tok::RParen)?;
            return Ok(ty);
        }
        if self.keyword("Unit") {
            return Ok(Ty::Unit);
        }
        let name = self.cur.ident().map_err(|_| self.cur.unexpected("a type"))?;
        Ok(Ty::TVar(self.resolve(&name, true)?))
    }

    fn term(&mut self) -> Result<TTerm, ParseError> {
        if self.cur.eat(&Tok::Lambda) {
            let name = self.binder()?;
            self.cur.expect(Tok::Colon)?;
            let annot = self.ty()?;
            self.cur.expect(Tok::Dot)?;
            self.scope.push((name, false));
            let body = self.term();
            self.scope.pop();
            return Ok(TTerm::lam(annot, body?));
        }
        if self.cur.eat(&Tok::BigLambda) {
            let name = self.binder()?;
            self.cur.expect(Tok::Dot)?;
            self.scope.push((name, true));
            let body = self.term();
            self.scope.pop();
            return Ok(TTerm::tlam(body?));
        }
        let mut t = self.head()?;
        loop {
            match self.cur.peek() {
                Some(Tok::LBracket) => {
                    self.cur.bump();
                    let ty = self.ty()?;
                    self.cur.expect(Tok::RBracket)?;
                    t = TTerm::tapp(t, ty);
                }
                Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                    t = TTerm::app(t, self.atom()?);
                }
                Some(Tok::LParen) | Some(Tok::LAngle) => t = TTerm::app(t, self.atom()?),
                _ => return Ok(t),
            }
        }
    }

    fn head(&mut self) -> Result<TTerm, ParseError> {
        if self.keyword("fst") {
            return Ok(TTerm::fst(self.atom()?));
        }
        if self.keyword("snd") {
            return Ok(TTerm::snd(self.atom()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<TTerm, ParseError> {
        match self.cur.peek() {
            Some(Tok::LParen) if self.cur.peek_at(1) == Some(&Tok::RParen) => {
                self.cur.bump();
                self.cur.bump();
                Ok(TTerm::Unit)
            }
            Some(Tok::LParen) => {
                self.cur.bump();
                let t = self.term()?;
                self.cur.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::LAngle) => {
                self.cur.bump();
                let a = self.term()?;
                self.cur.expect(Tok::Comma)?;
                let b = self.term()?;
                self.cur.expect(Tok::RAngle)?;
                Ok(TTerm::pair(a, b))
            }
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let name = self.cur.ident()?;
                Ok(TTerm::Var(self.resolve(&name, false)?))
            }
            _ => Err(self.cur.unexpected("a term")),
        }
    }
}

/// Naming state for printing: every name in scope, with its kind.
struct Names {
    scope: Vec<(String, bool)>,
}

impl Names {
    fn lookup(&self, index: usize, is_type: bool) -> Result<String, TermError> {
        self.scope
            .iter()
            .rev()
            .filter(|(_, t)| *t == is_type)
            .nth(index)
            .map(|(n, _)| n.clone())
            .ok_or(TermError::IndexOutOfRange { index })
    }

    fn fresh(&self, is_type: bool) -> String {
        let supply = if is_type { NameSupply::TYPES } else { NameSupply::TERMS };
        supply.fresh(self.scope.iter().map(|(n, _)| n.as_str()).chain(KEYWORDS))
    }
}

pub fn pretty_ty(ty: &Ty, sig: &Signature) -> Result<String, TermError> {
    let mut names = Names { scope: sig.scope() };
    let mut out = String::new();
    write_ty(ty, 0, &mut names, &mut out)?;
    Ok(out)
}

/// Precedence levels: 0 forall, 1 arrow, 2 product, 3 atom.
fn write_ty(ty: &Ty, min_prec: u8, names: &mut Names, out: &mut String) -> Result<(), TermError> {
    let prec = match ty {
        Ty::All(_) => 0,
        Ty::Arr(..) => 1,
        Ty::Prod(..) => 2,
        Ty::TVar(_) | Ty::Unit => 3,
    };
    let paren = prec < min_prec;
    if paren {
        out.push('(');
    }
    match ty {
        Ty::TVar(i) => out.push_str(&names.lookup(*i, true)?),
        Ty::Unit => out.push_str("Unit"),
        Ty::All(body) => {
            let name = names.fresh(true);
            out.push_str("forall ");
            out.push_str(&name);
            out.push_str(". ");
            names.scope.push((name, true));
            let r = write_ty(body, 0, names, out);
            names.scope.pop();
            r?;
        }
        Ty::Arr(a, b) => {
            write_ty(a, 2, names, out)?;
            out.push_str(" -> ");
            write_ty(b, 1, names, out)?;
        }
        Ty::Prod(a, b) => {
            write_ty(a, 2, names, out)?;
            out.push_str(" * ");
            write_ty(b, 3, names, out)?;
        }
    }
    if paren {
        out.push(')');
    }
    Ok(())
}

pub fn pretty_tterm(t: &TTerm, sig: &Signature) -> Result<String, TermError> {
    let mut names = Names { scope: sig.scope() };
    let mut out = String::new();
    write_tterm(t, 0, &mut names, &mut out)?;
    Ok(out)
}

/// Precedence levels: 0 binders, 1 application-like, 2 atoms.
fn write_tterm(t: &TTerm, min_prec: u8, names: &mut Names, out: &mut String) -> Result<(), TermError> {
    let prec = match t {
        TTerm::Lam(..) | TTerm::TLam(_) => 0,
        TTerm::App(..) | TTerm::TApp(..) | TTerm::Fst(_) | TTerm::Snd(_) => 1,
        TTerm::Var(_) | TTerm::Unit | TTerm::Pair(..) => 2,
    };
    let paren = prec < min_prec;
    if paren {
        out.push('(');
    }
    match t {
        TTerm::Var(i) => out.push_str(&names.lookup(*i, false)?),
        TTerm::Unit => out.push_str("()"),
        TTerm::Lam(annot, body) => {
            let name = names.fresh(false);
            out.push('\\');
            out.push_str(&name);
            out.push(':');
            write_ty(annot, 0, names, out)?;
            out.push_str(". ");
            names.scope.push((name, false));
            let r = write_tterm(body, 0, names, out);
            names.scope.pop();
            r?;
        }
        TTerm::TLam(body) => {
            let name = names.fresh(true);
            out.push_str("/\\");
            out.push_str(&name);
            out.push_str(". ");
            names.scope.push((name, true));
            let r = write_tterm(body, 0, names, out);
            names.scope.pop();
            r?;
        }
        TTerm::App(f, a) => {
            write_tterm(f, 1, names, out)?;
            out.push(' ');
            write_tterm(a, 2, names, out)?;
        }
        TTerm::TApp(f, ty) => {
            write_tterm(f, 1, names, out)?;
            out.push_str(" [");
            write_ty(ty, 0, names, out)?;
            out.push(']');
        }
        TTerm::Fst(p) | TTerm::Snd(p) => {
            out.push_str(if matches!(t, TTerm::Fst(_)) { "fst " } else { "snd " });
            write_tterm(p, 2, names, out)?;
        }
        TTerm::Pair(a, b) => {
            out.push('<');
            write_tterm(a, 0, names, out)?;
            out.push_str(", ");
            write_tterm(b, 0, names, out)?;
            out.push('>');
        }
    }
    if paren {
        out.push(')');
    }
    Ok(())
}

// JSON: {"tvar": n} | {"arr": [A, B]} | {"all": A} | {"unit": null} | {"prod": [A, B]}
impl Ty {
    pub fn to_json(&self) -> Value {
        match self {
            Ty::TVar(i) => json!({ "tvar": i }),
            Ty::Arr(a, b) => json!({ "arr": [a.to_json(), b.to_json()] }),
            Ty::All(b) => json!({ "all": b.to_json() }),
            Ty::Unit => json!({ "unit": null }),
            Ty::Prod(a, b) => json!({ "prod": [a.to_json(), b.to_json()] }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Ty, Error> {
        let (tag, body) = single_field(v)?;
        Ok(match tag {
            "tvar" => Ty::TVar(index(body)?),
            "arr" => {
                let (a, b) = pair(body)?;
                Ty::arr(Ty::from_json(a)?, Ty::from_json(b)?)
            }
            "all" => Ty::all(Ty::from_json(body)?),
            "unit" => Ty::Unit,
            "prod" => {
                let (a, b) = pair(body)?;
                Ty::prod(Ty::from_json(a)?, Ty::from_json(b)?)
            }
            other => return Err(Error::Json(format!("unknown type tag `{other}`"))),
        })
    }
}

// JSON extends the untyped encoding: {"var": n} | {"lam": M, "annot": A} |
// {"app": [M, N]} | {"tlam": M} | {"tapp": [M, A]} | {"unit": null} |
// {"pair": [M, N]} | {"fst": M} | {"snd": M}
impl TTerm {
    pub fn to_json(&self) -> Value {
        match self {
            TTerm::Var(i) => json!({ "var": i }),
            TTerm::Lam(a, b) => json!({ "lam": b.to_json(), "annot": a.to_json() }),
            TTerm::App(f, a) => json!({ "app": [f.to_json(), a.to_json()] }),
            TTerm::TLam(b) => json!({ "tlam": b.to_json() }),
            TTerm::TApp(f, ty) => json!({ "tapp": [f.to_json(), ty.to_json()] }),
            TTerm::Unit => json!({ "unit": null }),
            TTerm::Pair(a, b) => json!({ "pair": [a.to_json(), b.to_json()] }),
            TTerm::Fst(p) => json!({ "fst": p.to_json() }),
            TTerm::Snd(p) => json!({ "snd": p.to_json() }),
        }
    }

    pub fn from_json(v: &Value) -> Result<TTerm, Error> {
        if let Some(obj) = v.as_object() {
            if obj.len() == 2 {
                if let (Some(body), Some(annot)) = (obj.get("lam"), obj.get("annot")) {
                    return Ok(TTerm::lam(Ty::from_json(annot)?, TTerm::from_json(body)?));
                }
            }
        }
        let (tag, body) = single_field(v)?;
        Ok(match tag {
            "var" => TTerm::Var(index(body)?),
            "app" => {
                let (f, a) = pair(body)?;
                TTerm::app(TTerm::from_json(f)?, TTerm::from_json(a)?)
            }
            "tlam" => TTerm::tlam(TTerm::from_json(body)?),
            "tapp" => {
                let (f, ty) = pair(body)?;
                TTerm::tapp(TTerm::from_json(f)?, Ty::from_json(ty)?)
            }
            "unit" => TTerm::Unit,
            "pair" => {
                let (a, b) = pair(body)?;
                TTerm::pair(TTerm::from_json(a)?, TTerm::from_json(b)?)
            }
            "fst" => TTerm::fst(TTerm::from_json(body)?),
            "snd" => TTerm::snd(TTerm::from_json(body)?),
            "lam" => return Err(Error::Json("typed lambda is missing its `annot`".into())),
            other => return Err(Error::Json(format!("unknown term tag `{other}`"))),
        })
    }
}

fn single_field(v: &Value) -> Result<(&str, &Value), Error> {
    match v.as_object() {
        Some(obj) if obj.len() == 1 => {
            let (k, v) = obj.iter().next().expect("one field");
            Ok((k.as_str(), v))
        }
        _ => Err(Error::Json(format!("expected a single-field object, found {v}"))),
    }
}

fn pair(v: &Value) -> Result<(&Value, &Value), Error> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((a, b)),
        _ => Err(Error::Json(format!("expected a two-element array, found {v}"))),
    }
}

fn index(v: &Value) -> Result<usize, Error> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::Json(format!("expected an index, found {v}")))
}

impl Serialize for Ty {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ty {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Ty, D::Error> {
        Ty::from_json(&Value::deserialize(d)?).map_err(D::Error::custom)
    }
}

impl Serialize for TTerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TTerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<TTerm, D::Error> {
        TTerm::from_json(&Value::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature() {
        let sig = parse_signature("b, c:b, f:b -> b").unwrap();
        assert_eq!(sig.ctx().type_depth(), 1);
        assert_eq!(sig.ctx().lookup(0), Some(Ty::arr(Ty::TVar(0), Ty::TVar(0))));
        assert_eq!(sig.ctx().lookup(1), Some(Ty::TVar(0)));
        assert!(parse_signature("c:b").is_err());
        assert!(parse_signature("b, b").is_err());
        assert!(parse_signature("fst").is_err());
    }

    #[test]
    fn types() {
        let sig = parse_signature("b").unwrap();
        assert_eq!(
            parse_ty("forall a. a -> b", &sig).unwrap(),
            Ty::all(Ty::arr(Ty::TVar(0), Ty::TVar(1)))
        );
        assert_eq!(
            parse_ty("Unit * Unit -> b", &sig).unwrap(),
            Ty::arr(Ty::prod(Ty::Unit, Ty::Unit), Ty::TVar(0))
        );
        assert_eq!(
            parse_ty("b -> b -> b", &sig).unwrap(),
            Ty::arr(Ty::TVar(0), Ty::arr(Ty::TVar(0), Ty::TVar(0)))
        );
    }

    #[test]
    fn terms() {
        let sig = parse_signature("p:Unit*Unit").unwrap();
        assert_eq!(
            parse_tterm("<fst p, snd p>", &sig).unwrap(),
            TTerm::pair(TTerm::fst(TTerm::Var(0)), TTerm::snd(TTerm::Var(0)))
        );
        let empty = Signature::empty();
        assert_eq!(
            parse_tterm("/\\a. \\x:a. x", &empty).unwrap(),
            TTerm::tlam(TTerm::lam(Ty::TVar(0), TTerm::Var(0)))
        );
        assert_eq!(
            parse_tterm("(/\\a. \\x:a. x) [Unit] ()", &empty).unwrap(),
            TTerm::app(
                TTerm::tapp(TTerm::tlam(TTerm::lam(Ty::TVar(0), TTerm::Var(0))), Ty::Unit),
                TTerm::Unit
            )
        );
        assert_eq!(
            parse_tterm("\\x: forall a. a -> a. x", &empty).unwrap(),
            TTerm::lam(Ty::all(Ty::arr(Ty::TVar(0), Ty::TVar(0))), TTerm::Var(0))
        );
    }

    #[test]
    fn term_and_type_namespaces_are_separate() {
        // The type variable `a` does not shift the term index of `x`.
        let t = parse_tterm("\\x:Unit. /\\a. x", &Signature::empty()).unwrap();
        assert_eq!(t, TTerm::lam(Ty::Unit, TTerm::tlam(TTerm::Var(0))));
    }

    #[test]
    fn pretty_round_trip() {
        let sig = parse_signature("b, c:b, p:Unit*Unit").unwrap();
        for text in [
            "<fst p, snd p>",
            "/\\a. \\x:a -> b. x c",
            "(/\\a. \\x:a. x) [forall a. a -> b] (fst p)",
            "\\x:Unit * Unit -> Unit. x <(), snd p>",
            "fst (\\x:b. p) c",
        ] {
            let t = parse_tterm(text, &sig).unwrap();
            let printed = pretty_tterm(&t, &sig).unwrap();
            assert_eq!(parse_tterm(&printed, &sig).unwrap(), t, "{text} printed as {printed}");
        }
    }

    #[test]
    fn pretty_examples() {
        let sig = parse_signature("p:Unit*Unit").unwrap();
        let t = TTerm::pair(TTerm::fst(TTerm::Var(0)), TTerm::snd(TTerm::Var(0)));
        assert_eq!(pretty_tterm(&t, &sig).unwrap(), "<fst p, snd p>");
        let id = TTerm::tlam(TTerm::lam(Ty::TVar(0), TTerm::Var(0)));
        assert_eq!(pretty_tterm(&id, &Signature::empty()).unwrap(), "/\\a. \\x:a. x");
        let ty = Ty::all(Ty::arr(Ty::arr(Ty::TVar(0), Ty::TVar(0)), Ty::TVar(0)));
        assert_eq!(pretty_ty(&ty, &Signature::empty()).unwrap(), "forall a. (a -> a) -> a");
    }

    #[test]
    fn json_encoding() {
        let t = TTerm::tapp(TTerm::tlam(TTerm::lam(Ty::TVar(0), TTerm::Var(0))), Ty::Unit);
        let v = t.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"tapp":[{"tlam":{"annot":{"tvar":0},"lam":{"var":0}}},{"unit":null}]}"#
        );
        assert_eq!(TTerm::from_json(&v).unwrap(), t);
        assert!(TTerm::from_json(&json!({"lam": {"var": 0}})).is_err());
    }
}
