//! Text syntax for terms and proof scripts.
//!
//! Terms: `a . b` composes (b first), `a (x) b` tensors, postfix `*` takes the
//! adjoint, `1[M,X]` is an identity, `^rho[X,Y](t)` and `^sigma[X](t)` are
//! lifts. Inside brackets `×` (or `*`) forms products of objects.

use std::collections::BTreeSet;

use super::term::{adj, lift, Factor, FormalObject, Gen, LiftBy, ObjExpr, Position, Term};
use crate::error::{Error, Result};

pub(crate) struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str, line: usize, col0: usize) -> Self {
        Self { chars: src.chars().collect(), pos: 0, line, col0, _src: src }
    }

    pub(crate) fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.col0 + self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn looking_at(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars())
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.looking_at(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{s}'")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_' || self.chars[self.pos] == '~')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("expected a number"))
    }
}

pub(crate) struct TermParser<'a, 'b> {
    pub(crate) cur: Cursor<'a>,
    /// Declared atoms; `None` accepts any.
    pub(crate) objects: Option<&'b BTreeSet<String>>,
}

impl TermParser<'_, '_> {
    fn obj_prim(&mut self) -> Result<ObjExpr> {
        if self.cur.eat("(") {
            let e = self.obj()?;
            self.cur.expect(")")?;
            return Ok(e);
        }
        let start = self.cur.pos;
        let name = self.cur.ident()?;
        if name == "M" {
            return Err(self.cur.err("'M' is reserved for L²M"));
        }
        if let Some(decl) = self.objects {
            if !decl.contains(&name) {
                self.cur.pos = start;
                return Err(self.cur.err(format!("undeclared object {name:?}")));
            }
        }
        Ok(ObjExpr::Atom(name))
    }

    fn obj(&mut self) -> Result<ObjExpr> {
        let mut e = self.obj_prim()?;
        while self.cur.eat("×") || self.cur.eat("*") {
            let r = self.obj_prim()?;
            e = ObjExpr::Prod(Box::new(e), Box::new(r));
        }
        Ok(e)
    }

    fn obj_list(&mut self) -> Result<Vec<ObjExpr>> {
        self.cur.expect("[")?;
        let mut out = Vec::new();
        if self.cur.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(self.obj()?);
            if self.cur.eat("]") {
                return Ok(out);
            }
            self.cur.expect(",")?;
        }
    }

    fn factor_list(&mut self) -> Result<Vec<Factor>> {
        self.cur.expect("[")?;
        let mut out = Vec::new();
        if self.cur.eat("]") {
            return Ok(out);
        }
        loop {
            if self.cur.looking_at("M") && !self.next_is_ident_char(1) {
                self.cur.pos += 1;
                out.push(Factor::M);
            } else {
                out.push(Factor::Sp(self.obj()?));
            }
            if self.cur.eat("]") {
                return Ok(out);
            }
            self.cur.expect(",")?;
        }
    }

    fn next_is_ident_char(&mut self, offset: usize) -> bool {
        self.cur.chars.get(self.cur.pos + offset).is_some_and(|c| c.is_alphanumeric() || *c == '_')
    }

    fn atom(&mut self) -> Result<Term> {
        if self.cur.looking_at("(x)") {
            return Err(self.cur.err("unexpected tensor sign"));
        }
        if self.cur.eat("(") {
            let t = self.comp()?;
            self.cur.expect(")")?;
            return Ok(t);
        }
        if self.cur.eat("^rho") {
            let es = self.obj_list()?;
            self.cur.expect("(")?;
            let t = self.comp()?;
            self.cur.expect(")")?;
            return Ok(lift(LiftBy::Rho(es), t));
        }
        if self.cur.eat("^sigma") {
            let es = self.obj_list()?;
            if es.len() != 1 {
                return Err(self.cur.err("^sigma takes exactly one object"));
            }
            self.cur.expect("(")?;
            let t = self.comp()?;
            self.cur.expect(")")?;
            return Ok(lift(LiftBy::Sigma(es.into_iter().next().unwrap()), t));
        }
        if self.cur.eat("1") {
            return Ok(Term::Id(FormalObject(self.factor_list()?)));
        }
        let start = self.cur.pos;
        let name = self.cur.ident()?;
        let args = self.obj_list()?;
        Gen::from_parts(&name, args).map(Term::Gen).map_err(|m| {
            self.cur.pos = start;
            self.cur.err(m)
        })
    }

    fn postfix(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while self.cur.eat("*") {
            t = adj(t);
        }
        Ok(t)
    }

    fn tensor(&mut self) -> Result<Term> {
        let mut parts = vec![self.postfix()?];
        while self.cur.eat("(x)") {
            parts.push(self.postfix()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Term::Tensor(parts) })
    }

    pub(crate) fn comp(&mut self) -> Result<Term> {
        let mut parts = vec![self.tensor()?];
        while self.cur.looking_at(".") {
            self.cur.pos += 1;
            parts.push(self.tensor()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Term::Comp(parts) })
    }
}

/// Parses a term; atoms must be among `objects` when given.
pub fn parse_term(text: &str, objects: Option<&BTreeSet<String>>) -> Result<Term> {
    parse_term_at(text, objects, 1, 0)
}

pub(crate) fn parse_term_at(
    text: &str,
    objects: Option<&BTreeSet<String>>,
    line: usize,
    col0: usize,
) -> Result<Term> {
    let mut p = TermParser { cur: Cursor::new(text, line, col0), objects };
    let t = p.comp()?;
    if !p.cur.at_end() {
        return Err(p.cur.err("trailing input"));
    }
    Ok(t)
}

/// Parses a position `root`, `4.0`, `[3..5]` or `4.0[0..2]`.
pub fn parse_position(text: &str) -> Result<Position> {
    parse_position_at(text, 1, 0)
}

pub(crate) fn parse_position_at(
    text: &str,
    line: usize,
    col0: usize,
) -> Result<Position> {
    let mut c = Cursor::new(text, line, col0);
    let mut path = Vec::new();
    if !c.eat("root") {
        while c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
            path.push(c.number()?);
            if !c.looking_at(".") {
                break;
            }
            c.pos += 1;
        }
    }
    let window = if c.eat("[") {
        let i = c.number()?;
        c.expect("..")?;
        let j = c.number()?;
        c.expect("]")?;
        if j < i {
            return Err(c.err("window end precedes start"));
        }
        Some((i, j))
    } else {
        None
    };
    if !c.at_end() {
        return Err(c.err("malformed position"));
    }
    Ok((path, window))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::term::{normalize, typecheck};

    #[test]
    fn round_trip_printing() {
        for s in [
            "W[X,Y×Z] . ^rho[X](W[Y,Z])",
            "Fa[X,Y,Z] . W[X×Y,Z] . W[X,Y]",
            "U[X]* (x) 1[Y,Z]",
            "1[M] (x) iota[(X×Y)×Z,X]*",
            "^sigma[X](u[Y,Z]*) . (1[M] (x) 1[])",
            "^rho[X,Y](U[Z])*",
            "(U[X] . U[X]*)*",
        ] {
            let t = parse_term(s, None).unwrap();
            assert_eq!(parse_term(&t.to_string(), None).unwrap(), t, "{s} -> {t}");
        }
    }

    #[test]
    fn products_accept_star() {
        let a = parse_term("U[X*Y]", None).unwrap();
        let b = parse_term("U[X×Y]", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn typing_examples() {
        let (s, t) = typecheck(&parse_term("U[X]", None).unwrap()).unwrap();
        assert_eq!(format!("{s} → {t}"), "L²M⊗L²X → L²M");
        let (s, t) = typecheck(&parse_term("U[X] . U[X]*", None).unwrap()).unwrap();
        assert_eq!((s.to_string(), t.to_string()), ("L²M".into(), "L²M".into()));
        let err = typecheck(&parse_term("U[X] . U[Y]", None).unwrap()).unwrap_err();
        assert!(matches!(err, Error::IllTyped { .. }), "{err}");
    }

    #[test]
    fn undeclared_objects_rejected() {
        let decl: BTreeSet<String> = ["X".to_string()].into();
        assert!(parse_term("U[X]", Some(&decl)).is_ok());
        assert!(matches!(parse_term("U[Q]", Some(&decl)), Err(Error::Parse { column: 3, .. })));
    }

    #[test]
    fn positions() {
        assert_eq!(parse_position("root").unwrap(), (vec![], None));
        assert_eq!(parse_position("4.0[0..2]").unwrap(), (vec![4, 0], Some((0, 2))));
        assert_eq!(parse_position("[3..5]").unwrap(), (vec![], Some((3, 5))));
        assert_eq!(parse_position("7").unwrap(), (vec![7], None));
        assert!(parse_position("1.[").is_err());
    }

    #[test]
    fn normalization() {
        let t = parse_term("(U[X] . 1[M,X]) . (1[M] (x) 1[X]) . (U[X]* . U[X])*", None).unwrap();
        let n = normalize(&t);
        assert_eq!(n.to_string(), "U[X] . U[X]* . U[X]");
        let t = parse_term("(U[X]* (x) 1[Y]) (x) 1[Z]", None).unwrap();
        assert_eq!(normalize(&t).to_string(), "U[X]* (x) 1[Y,Z]");
    }
}
