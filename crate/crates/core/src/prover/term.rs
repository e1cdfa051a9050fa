//! Formal objects, morphism terms, typing and normalization.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A product of declared atoms, e.g. `(X×Y)×Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjExpr {
    Atom(String),
    Prod(Box<ObjExpr>, Box<ObjExpr>),
}

impl ObjExpr {
    pub fn atom(name: &str) -> Self {
        ObjExpr::Atom(name.to_string())
    }

    pub fn prod(a: &ObjExpr, b: &ObjExpr) -> Self {
        ObjExpr::Prod(Box::new(a.clone()), Box::new(b.clone()))
    }

    pub fn atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            ObjExpr::Atom(a) => {
                out.insert(a.clone());
            }
            ObjExpr::Prod(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }
}

impl fmt::Display for ObjExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjExpr::Atom(a) => f.write_str(a),
            ObjExpr::Prod(a, b) => {
                let side = |e: &ObjExpr| match e {
                    ObjExpr::Atom(_) => e.to_string(),
                    ObjExpr::Prod(..) => format!("({e})"),
                };
                write!(f, "{}×{}", side(a), side(b))
            }
        }
    }
}

/// A tensor factor of a module: `L²M` or `L²(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    M,
    Sp(ObjExpr),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::M => f.write_str("M"),
            Factor::Sp(e) => write!(f, "{e}"),
        }
    }
}

/// A formal object: the ordered list of tensor factors (empty list = ℂ).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalObject(pub Vec<Factor>);

impl FormalObject {
    pub fn starts_with_m(&self) -> bool {
        self.0.first() == Some(&Factor::M)
    }
}

impl fmt::Display for FormalObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ℂ");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|x| match x {
                Factor::M => "L²M".to_string(),
                Factor::Sp(ObjExpr::Atom(a)) => format!("L²{a}"),
                Factor::Sp(e) => format!("L²({e})"),
            })
            .collect();
        f.write_str(&parts.join("⊗"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    /// U_A : L²M⊗L²A → L²M
    U(ObjExpr),
    /// u_{A,B} on L²M⊗L²A⊗L²B
    SmallU(ObjExpr, ObjExpr),
    /// ι_{A,B} : L²(A×B) → L²A⊗L²B
    Iota(ObjExpr, ObjExpr),
    /// ω_{A,B,C} on L²A⊗L²B⊗L²C
    Omega(ObjExpr, ObjExpr, ObjExpr),
    /// ω̃_{A,B,C} : L²M⊗L²((A×B)×C) → L²M⊗L²(A×(B×C))
    OmegaT(ObjExpr, ObjExpr, ObjExpr),
    /// W_{A,B} ∈ (ρ_Aρ_B, ρ_{A×B})
    W(ObjExpr, ObjExpr),
    /// F(a_{A,B,C}) ∈ (ρ_{(A×B)×C}, ρ_{A×(B×C)})
    Fa(ObjExpr, ObjExpr, ObjExpr),
}

impl Gen {
    pub fn name(&self) -> &'static str {
        match self {
            Gen::U(_) => "U",
            Gen::SmallU(..) => "u",
            Gen::Iota(..) => "iota",
            Gen::Omega(..) => "omega",
            Gen::OmegaT(..) => "omega~",
            Gen::W(..) => "W",
            Gen::Fa(..) => "Fa",
        }
    }

    pub fn args(&self) -> Vec<&ObjExpr> {
        match self {
            Gen::U(a) => vec![a],
            Gen::SmallU(a, b) | Gen::Iota(a, b) | Gen::W(a, b) => vec![a, b],
            Gen::Omega(a, b, c) | Gen::OmegaT(a, b, c) | Gen::Fa(a, b, c) => vec![a, b, c],
        }
    }

    pub fn from_parts(name: &str, args: Vec<ObjExpr>) -> std::result::Result<Self, String> {
        let want = match name {
            "U" => 1,
            "u" | "iota" | "W" => 2,
            "omega" | "omega~" | "Fa" => 3,
            _ => return Err(format!("unknown generator {name:?}")),
        };
        if args.len() != want {
            return Err(format!("{name} takes {want} object arguments, got {}", args.len()));
        }
        let mut it = args.into_iter();
        let mut next = || it.next().unwrap();
        Ok(match name {
            "U" => Gen::U(next()),
            "u" => Gen::SmallU(next(), next()),
            "iota" => Gen::Iota(next(), next()),
            "W" => Gen::W(next(), next()),
            "omega" => Gen::Omega(next(), next(), next()),
            "omega~" => Gen::OmegaT(next(), next(), next()),
            _ => Gen::Fa(next(), next(), next()),
        })
    }

    pub fn signature(&self) -> (FormalObject, FormalObject) {
        use Factor::{Sp, M};
        let o = |v: Vec<Factor>| FormalObject(v);
        match self {
            Gen::U(a) => (o(vec![M, Sp(a.clone())]), o(vec![M])),
            Gen::SmallU(a, b) => {
                let t = o(vec![M, Sp(a.clone()), Sp(b.clone())]);
                (t.clone(), t)
            }
            Gen::Iota(a, b) => {
                (o(vec![Sp(ObjExpr::prod(a, b))]), o(vec![Sp(a.clone()), Sp(b.clone())]))
            }
            Gen::Omega(a, b, c) => {
                let t = o(vec![Sp(a.clone()), Sp(b.clone()), Sp(c.clone())]);
                (t.clone(), t)
            }
            Gen::OmegaT(a, b, c) => (
                o(vec![M, Sp(ObjExpr::prod(&ObjExpr::prod(a, b), c))]),
                o(vec![M, Sp(ObjExpr::prod(a, &ObjExpr::prod(b, c)))]),
            ),
            Gen::W(..) | Gen::Fa(..) => (o(vec![M]), o(vec![M])),
        }
    }

    /// For intertwiners in End(M): (source endomorphism, target endomorphism)
    /// as lists of ρ-subscripts.
    pub fn rho_type(&self) -> Option<(Vec<ObjExpr>, Vec<ObjExpr>)> {
        match self {
            Gen::W(a, b) => Some((vec![a.clone(), b.clone()], vec![ObjExpr::prod(a, b)])),
            Gen::Fa(a, b, c) => Some((
                vec![ObjExpr::prod(&ObjExpr::prod(a, b), c)],
                vec![ObjExpr::prod(a, &ObjExpr::prod(b, c))],
            )),
            _ => None,
        }
    }

    /// Whether the generator involves an absorption unitary, directly or by
    /// definition.
    pub fn is_symbolic(&self) -> bool {
        matches!(self, Gen::U(_) | Gen::W(..) | Gen::Fa(..))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiftBy {
    /// ^{ρ_{A_1}⋯ρ_{A_k}}
    Rho(Vec<ObjExpr>),
    /// ^{σ_A}, inserting L²A after L²M
    Sigma(ObjExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Id(FormalObject),
    Gen(Gen),
    /// `[a, b, c]` is a∘b∘c (c acts first).
    Comp(Vec<Term>),
    Tensor(Vec<Term>),
    Lift(LiftBy, Box<Term>),
    Adj(Box<Term>),
}

pub fn id(factors: Vec<Factor>) -> Term {
    Term::Id(FormalObject(factors))
}

pub fn gen(g: Gen) -> Term {
    Term::Gen(g)
}

pub fn adj(t: Term) -> Term {
    Term::Adj(Box::new(t))
}

pub fn comp(ts: Vec<Term>) -> Term {
    Term::Comp(ts)
}

pub fn tensor(ts: Vec<Term>) -> Term {
    Term::Tensor(ts)
}

pub fn lift(by: LiftBy, t: Term) -> Term {
    Term::Lift(by, Box::new(t))
}

pub fn sp(e: &ObjExpr) -> Factor {
    Factor::Sp(e.clone())
}

impl Term {
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Id(_) | Term::Gen(_) => vec![],
            Term::Comp(ts) | Term::Tensor(ts) => ts.iter().collect(),
            Term::Lift(_, t) | Term::Adj(t) => vec![t],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Term::Id(_) | Term::Gen(_) => vec![],
            Term::Comp(ts) | Term::Tensor(ts) => ts.iter_mut().collect(),
            Term::Lift(_, t) | Term::Adj(t) => vec![t],
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i).and_then(|c| c.at(rest)),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children_mut().into_iter().nth(i).and_then(|c| c.at_mut(rest)),
        }
    }

    pub fn is_id(&self) -> bool {
        matches!(self, Term::Id(_))
    }

    /// Whether any generator or lift in the term needs an absorption unitary.
    pub fn is_symbolic(&self) -> bool {
        match self {
            Term::Gen(g) => g.is_symbolic(),
            Term::Lift(LiftBy::Rho(_), _) => true,
            _ => self.children().iter().any(|c| c.is_symbolic()),
        }
    }

    pub fn atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Id(o) => o.0.iter().for_each(|f| {
                if let Factor::Sp(e) = f {
                    e.atoms(out)
                }
            }),
            Term::Gen(g) => g.args().into_iter().for_each(|e| e.atoms(out)),
            Term::Lift(by, t) => {
                match by {
                    LiftBy::Rho(es) => es.iter().for_each(|e| e.atoms(out)),
                    LiftBy::Sigma(e) => e.atoms(out),
                }
                t.atoms(out);
            }
            _ => self.children().into_iter().for_each(|c| c.atoms(out)),
        }
    }
}

fn fmt_objs(es: &[ObjExpr]) -> String {
    es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Id(o) => {
                let parts: Vec<String> = o.0.iter().map(|x| x.to_string()).collect();
                write!(f, "1[{}]", parts.join(","))
            }
            Term::Gen(g) => {
                let args: Vec<ObjExpr> = g.args().into_iter().cloned().collect();
                write!(f, "{}[{}]", g.name(), fmt_objs(&args))
            }
            Term::Comp(ts) => {
                let parts: Vec<String> = ts
                    .iter()
                    .map(|t| if matches!(t, Term::Comp(_)) { format!("({t})") } else { t.to_string() })
                    .collect();
                f.write_str(&parts.join(" . "))
            }
            Term::Tensor(ts) => {
                let parts: Vec<String> = ts
                    .iter()
                    .map(|t| {
                        if matches!(t, Term::Comp(_) | Term::Tensor(_)) {
                            format!("({t})")
                        } else {
                            t.to_string()
                        }
                    })
                    .collect();
                f.write_str(&parts.join(" (x) "))
            }
            Term::Lift(LiftBy::Rho(es), t) => write!(f, "^rho[{}]({t})", fmt_objs(es)),
            Term::Lift(LiftBy::Sigma(e), t) => write!(f, "^sigma[{e}]({t})"),
            Term::Adj(t) => match **t {
                Term::Gen(_) | Term::Lift(..) | Term::Id(_) | Term::Adj(_) => write!(f, "{t}*"),
                _ => write!(f, "({t})*"),
            },
        }
    }
}

/// Renders a tree position: dotted path plus optional window.
/// A path into the term tree and an optional window `[i..j]` on the node.
pub type Position = (Vec<usize>, Option<(usize, usize)>);

pub fn fmt_position(path: &[usize], window: Option<(usize, usize)>) -> String {
    let p: Vec<String> = path.iter().map(|i| i.to_string()).collect();
    let mut s = p.join(".");
    if let Some((i, j)) = window {
        s.push_str(&format!("[{i}..{j}]"));
    }
    if s.is_empty() {
        s.push_str("root");
    }
    s
}

fn ill(path: &[usize], message: impl Into<String>) -> Error {
    Error::IllTyped { position: fmt_position(path, None), message: message.into() }
}

/// Source and target of a term, or the position of the first typing failure.
pub fn typecheck(t: &Term) -> Result<(FormalObject, FormalObject)> {
    typecheck_at(t, &mut vec![])
}

fn typecheck_at(t: &Term, path: &mut Vec<usize>) -> Result<(FormalObject, FormalObject)> {
    match t {
        Term::Id(o) => Ok((o.clone(), o.clone())),
        Term::Gen(g) => Ok(g.signature()),
        Term::Adj(inner) => {
            path.push(0);
            let (s, t) = typecheck_at(inner, path)?;
            path.pop();
            Ok((t, s))
        }
        Term::Comp(ts) => {
            if ts.is_empty() {
                return Err(ill(path, "empty composition"));
            }
            let mut types = Vec::with_capacity(ts.len());
            for (i, c) in ts.iter().enumerate() {
                path.push(i);
                types.push(typecheck_at(c, path)?);
                path.pop();
            }
            for i in 0..ts.len() - 1 {
                if types[i].0 != types[i + 1].1 {
                    return Err(ill(
                        path,
                        format!(
                            "cannot compose: factor {i} expects {} but factor {} yields {}",
                            types[i].0,
                            i + 1,
                            types[i + 1].1
                        ),
                    ));
                }
            }
            Ok((types[ts.len() - 1].0.clone(), types[0].1.clone()))
        }
        Term::Tensor(ts) => {
            let (mut s, mut tg) = (vec![], vec![]);
            for (i, c) in ts.iter().enumerate() {
                path.push(i);
                let (a, b) = typecheck_at(c, path)?;
                path.pop();
                s.extend(a.0);
                tg.extend(b.0);
            }
            let check = |o: &Vec<Factor>| o.iter().skip(1).all(|f| *f != Factor::M);
            if !check(&s) || !check(&tg) {
                return Err(ill(path, "L²M may only appear as the first tensor factor"));
            }
            Ok((FormalObject(s), FormalObject(tg)))
        }
        Term::Lift(by, inner) => {
            path.push(0);
            let (s, tg) = typecheck_at(inner, path)?;
            path.pop();
            if !s.starts_with_m() || !tg.starts_with_m() {
                return Err(ill(path, format!("lift needs a right M-module map, got {s} → {tg}")));
            }
            match by {
                LiftBy::Rho(es) if es.is_empty() => Err(ill(path, "empty ρ-list")),
                LiftBy::Rho(_) => Ok((s, tg)),
                LiftBy::Sigma(x) => {
                    let ins = |o: FormalObject| {
                        let mut v = o.0;
                        v.insert(1, Factor::Sp(x.clone()));
                        FormalObject(v)
                    };
                    Ok((ins(s), ins(tg)))
                }
            }
        }
    }
}

/// Canonical form: flattened compositions and tensors, identities dropped
/// from chains and merged inside tensors, adjoints pushed onto generators
/// and lifts.
pub fn normalize(t: &Term) -> Term {
    match t {
        Term::Id(_) | Term::Gen(_) => t.clone(),
        Term::Adj(inner) => push_adjoint(&normalize(inner)),
        Term::Lift(by, inner) => Term::Lift(by.clone(), Box::new(normalize(inner))),
        Term::Comp(ts) => {
            let mut flat = Vec::new();
            for c in ts {
                match normalize(c) {
                    Term::Comp(cs) => flat.extend(cs),
                    other => flat.push(other),
                }
            }
            let first_id = flat.iter().find(|c| c.is_id()).cloned();
            flat.retain(|c| !c.is_id());
            match flat.len() {
                0 => first_id.unwrap_or_else(|| id(vec![])),
                1 => flat.pop().unwrap(),
                _ => Term::Comp(flat),
            }
        }
        Term::Tensor(ts) => {
            let mut flat: Vec<Term> = Vec::new();
            for c in ts {
                let parts = match normalize(c) {
                    Term::Tensor(cs) => cs,
                    other => vec![other],
                };
                for p in parts {
                    match (flat.last_mut(), p) {
                        (_, Term::Id(o)) if o.0.is_empty() => {}
                        (Some(Term::Id(prev)), Term::Id(o)) => prev.0.extend(o.0),
                        (_, p) => flat.push(p),
                    }
                }
            }
            match flat.len() {
                0 => id(vec![]),
                1 => flat.pop().unwrap(),
                _ => Term::Tensor(flat),
            }
        }
    }
}

fn push_adjoint(t: &Term) -> Term {
    match t {
        Term::Id(_) => t.clone(),
        Term::Adj(inner) => (**inner).clone(),
        Term::Comp(ts) => Term::Comp(ts.iter().rev().map(push_adjoint).collect()),
        Term::Tensor(ts) => Term::Tensor(ts.iter().map(push_adjoint).collect()),
        Term::Gen(_) | Term::Lift(..) => adj(t.clone()),
    }
}

/// Path to the first position where two terms differ, with both subterms.
pub fn first_difference(a: &Term, b: &Term) -> Option<(Vec<usize>, String, String)> {
    fn go(a: &Term, b: &Term, path: &mut Vec<usize>) -> Option<(Vec<usize>, String, String)> {
        if a == b {
            return None;
        }
        let same_shape = match (a, b) {
            (Term::Comp(x), Term::Comp(y)) | (Term::Tensor(x), Term::Tensor(y)) => x.len() == y.len(),
            (Term::Lift(p, _), Term::Lift(q, _)) => p == q,
            (Term::Adj(_), Term::Adj(_)) => true,
            _ => false,
        };
        if same_shape {
            for (i, (x, y)) in a.children().into_iter().zip(b.children()).enumerate() {
                path.push(i);
                if let Some(d) = go(x, y, path) {
                    return Some(d);
                }
                path.pop();
            }
        }
        Some((path.clone(), a.to_string(), b.to_string()))
    }
    go(a, b, &mut vec![])
}
