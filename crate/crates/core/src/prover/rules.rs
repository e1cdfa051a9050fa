//! Oriented rewrite rules and their application at explicit positions.
//!
//! Every rule has a forward direction. The backward direction is either
//! inferred from the redex or, where the left side cannot be recovered
//! (unitarity, lifts of identities), taken from a `with` hint that the
//! checker validates by rewriting it forward.

use std::fmt;

use super::term::{
    adj, comp, fmt_position, gen, id, lift, normalize, sp, tensor, typecheck, Factor,
    FormalObject, Gen, LiftBy, ObjExpr, Position, Term,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        })
    }
}

pub const RULES: &[&str] = &[
    "R1", "R2", "R2*", "R3.comp", "R3.adj", "R3.nest", "R3.pad", "R3.unit", "R3.id", "R4", "R5",
    "R6", "R6.omega", "R7", "R8", "R8.pad",
];

/// One-line statement of each rule, used by traces and `explain`.
pub fn rule_statement(rule: &str) -> Option<&'static str> {
    Some(match rule {
        "R1" => "U_A U_A* = 1 and U_A* U_A = 1",
        "R2" => "w ^{ρ}U_C = ^{ρ'}U_C (w ⊗ 1_C) for an intertwiner w ∈ (ρ, ρ')",
        "R2*" => "(^{ρ'}U_C)* w = (w ⊗ 1_C)(^{ρ}U_C)* for an intertwiner w ∈ (ρ, ρ')",
        "R3.comp" => "^L(a b) = ^L(a) ^L(b)",
        "R3.adj" => "^L(t*) = (^L t)*",
        "R3.nest" => "^{ρ_A}(^{ρ_B} t) = ^{ρ_A ρ_B} t",
        "R3.pad" => "^L(t ⊗ 1_K) = ^L(t) ⊗ 1_K",
        "R3.unit" => "^{ρ}(1_M ⊗ s) = 1_M ⊗ s and ^{σ_X}(1_M ⊗ s) = 1_M ⊗ 1_X ⊗ s",
        "R3.id" => "^L(1) = 1",
        "R4" => "^{ρ_A}(t) = (U_A ⊗ 1_K) ^{σ_A}(t) (U_A* ⊗ 1_H)",
        "R5" => "W_{A,B} = U_{A×B} (1 ⊗ ι*_{A,B}) u*_{A,B} (U_A* ⊗ 1_B) (^{ρ_A}U_B)*",
        "R6" => "F(a_{A,B,C}) = U_{A×(B×C)} ω̃_{A,B,C} U*_{(A×B)×C}",
        "R6.omega" => "ω̃ = (1⊗ι*_{A,B×C})(1⊗1_A⊗ι*_{B,C})(1⊗ω_{A,B,C})(1⊗ι_{A,B}⊗1_C)(1⊗ι_{A×B,C})",
        "R7" => "(1⊗ι*_{X,Y×Z}) u*_{X,Y×Z} (1⊗1_X⊗ι*_{Y,Z}) ^{σ_X}(u*_{Y,Z}) = ω̃ (1⊗ι*_{X×Y,Z}) u*_{X×Y,Z} (1⊗ι*_{X,Y}⊗1_Z) (u*_{X,Y}⊗1_Z)",
        "R8" => "(f ⊗ 1_{K'})(1 ⊗ g) = (1 ⊗ g)(f ⊗ 1_K) for g: K → K'",
        "R8.pad" => "(a ⊗ 1_K)(b ⊗ 1_K) = (a b) ⊗ 1_K",
        _ => return None,
    })
}

/// Whether the backward direction can be inferred without a hint.
pub fn has_inferred_backward(rule: &str) -> bool {
    !matches!(rule, "R1" | "R3.unit" | "R3.id")
}

type Rewrite = std::result::Result<Term, String>;

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

fn chain(t: &Term) -> &[Term] {
    match t {
        Term::Comp(ts) => ts,
        other => std::slice::from_ref(other),
    }
}

fn objects_of(o: &FormalObject) -> Vec<Factor> {
    o.0.clone()
}

fn without_m(o: &FormalObject) -> Vec<Factor> {
    o.0.iter().skip(1).cloned().collect()
}

fn pad(t: Term, k: Vec<Factor>) -> Term {
    normalize(&tensor(vec![t, id(k)]))
}

fn from_parts(mut parts: Vec<Term>) -> Term {
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        tensor(parts)
    }
}

/// `rest ⊗ 1_K` with the identity as last tensor component.
fn split_trailing(t: &Term) -> Option<(Term, Vec<Factor>)> {
    match t {
        Term::Tensor(ts) if ts.len() >= 2 => match ts.last() {
            Some(Term::Id(k)) => Some((from_parts(ts[..ts.len() - 1].to_vec()), k.0.clone())),
            _ => None,
        },
        _ => None,
    }
}

/// `1_D ⊗ rest` with the identity as first tensor component.
fn split_leading(t: &Term) -> Option<(Vec<Factor>, Term)> {
    match t {
        Term::Tensor(ts) if ts.len() >= 2 => match ts.first() {
            Some(Term::Id(d)) => Some((d.0.clone(), from_parts(ts[1..].to_vec()))),
            _ => None,
        },
        _ => None,
    }
}

fn types(t: &Term) -> std::result::Result<(FormalObject, FormalObject), String> {
    typecheck(t).map_err(|e| e.to_string())
}

fn intertwiner(t: &Term) -> Option<(Vec<ObjExpr>, Vec<ObjExpr>)> {
    match t {
        Term::Gen(g) => g.rho_type(),
        Term::Adj(inner) => match &**inner {
            Term::Gen(g) => g.rho_type().map(|(s, t)| (t, s)),
            _ => None,
        },
        _ => None,
    }
}

fn lifted_u(t: &Term) -> Option<(Vec<ObjExpr>, ObjExpr)> {
    match t {
        Term::Lift(LiftBy::Rho(es), body) => match &**body {
            Term::Gen(Gen::U(c)) => Some((es.clone(), c.clone())),
            _ => None,
        },
        _ => None,
    }
}

fn u_gen(a: &ObjExpr) -> Term {
    gen(Gen::U(a.clone()))
}

// ---------------------------------------------------------------------------
// rule bodies

fn r1(t: &Term) -> Rewrite {
    match chain(t) {
        [Term::Gen(Gen::U(a)), Term::Adj(b)] if **b == u_gen(a) => Ok(id(vec![Factor::M])),
        [Term::Adj(b), Term::Gen(Gen::U(a))] if **b == u_gen(a) => Ok(id(vec![Factor::M, sp(a)])),
        _ => fail("expected U_A U_A* or U_A* U_A"),
    }
}

fn r2(t: &Term) -> Rewrite {
    let [w, l] = chain(t) else { return fail("expected two factors w . ^rho(U)") };
    let (src, tgt) = intertwiner(w).ok_or("first factor is not a W/Fa intertwiner")?;
    let (rho, c) = lifted_u(l).ok_or("second factor is not ^rho[..](U[C])")?;
    if rho != src {
        return fail("lift does not match the intertwiner's source");
    }
    Ok(comp(vec![lift(LiftBy::Rho(tgt), u_gen(&c)), pad(w.clone(), vec![sp(&c)])]))
}

fn r2_back(t: &Term) -> Rewrite {
    let [l, p] = chain(t) else { return fail("expected two factors ^rho(U) . (w (x) 1)") };
    let (rho, c) = lifted_u(l).ok_or("first factor is not ^rho[..](U[C])")?;
    let (w, k) = split_trailing(p).ok_or("second factor is not padded")?;
    let (src, tgt) = intertwiner(&w).ok_or("padded factor is not an intertwiner")?;
    if k != vec![sp(&c)] || rho != tgt {
        return fail("padding or lift does not match");
    }
    Ok(comp(vec![w, lift(LiftBy::Rho(src), u_gen(&c))]))
}

fn r2_star(t: &Term) -> Rewrite {
    let [l, w] = chain(t) else { return fail("expected two factors (^rho U)* . w") };
    let Term::Adj(inner) = l else { return fail("first factor is not an adjoint lift") };
    let (rho, c) = lifted_u(inner).ok_or("first factor is not (^rho[..](U[C]))*")?;
    let (src, tgt) = intertwiner(w).ok_or("second factor is not a W/Fa intertwiner")?;
    if rho != tgt {
        return fail("lift does not match the intertwiner's target");
    }
    Ok(comp(vec![pad(w.clone(), vec![sp(&c)]), adj(lift(LiftBy::Rho(src), u_gen(&c)))]))
}

fn r2_star_back(t: &Term) -> Rewrite {
    let [p, l] = chain(t) else { return fail("expected two factors (w (x) 1) . (^rho U)*") };
    let (w, k) = split_trailing(p).ok_or("first factor is not padded")?;
    let Term::Adj(inner) = l else { return fail("second factor is not an adjoint lift") };
    let (rho, c) = lifted_u(inner).ok_or("second factor is not (^rho[..](U[C]))*")?;
    let (src, tgt) = intertwiner(&w).ok_or("padded factor is not an intertwiner")?;
    if k != vec![sp(&c)] || rho != src {
        return fail("padding or lift does not match");
    }
    Ok(comp(vec![adj(lift(LiftBy::Rho(tgt), u_gen(&c))), w]))
}

fn r3_comp(t: &Term) -> Rewrite {
    match t {
        Term::Lift(by, body) => match &**body {
            Term::Comp(ts) => Ok(comp(ts.iter().map(|x| lift(by.clone(), x.clone())).collect())),
            _ => fail("lift body is not a composition"),
        },
        _ => fail("expected a lift"),
    }
}

fn r3_comp_back(t: &Term) -> Rewrite {
    let ts = chain(t);
    if ts.len() < 2 {
        return fail("expected a composition of lifts");
    }
    let mut by0 = None;
    let mut bodies = Vec::new();
    for x in ts {
        let Term::Lift(by, body) = x else { return fail("factor is not a lift") };
        if by0.get_or_insert(by) != &by {
            return fail("lifts differ");
        }
        bodies.push((**body).clone());
    }
    Ok(lift(by0.unwrap().clone(), comp(bodies)))
}

fn r3_adj(t: &Term) -> Rewrite {
    match t {
        Term::Lift(by, body) => match &**body {
            Term::Adj(x) => Ok(adj(lift(by.clone(), (**x).clone()))),
            _ => fail("lift body is not an adjoint"),
        },
        _ => fail("expected a lift"),
    }
}

fn r3_adj_back(t: &Term) -> Rewrite {
    match t {
        Term::Adj(x) => match &**x {
            Term::Lift(by, body) => Ok(lift(by.clone(), adj((**body).clone()))),
            _ => fail("adjoint of something other than a lift"),
        },
        _ => fail("expected an adjoint lift"),
    }
}

fn r3_nest(t: &Term) -> Rewrite {
    match t {
        Term::Lift(LiftBy::Rho(a), body) => match &**body {
            Term::Lift(LiftBy::Rho(b), inner) => {
                Ok(lift(LiftBy::Rho([a.clone(), b.clone()].concat()), (**inner).clone()))
            }
            _ => fail("body is not a ρ-lift"),
        },
        _ => fail("expected nested ρ-lifts"),
    }
}

fn r3_nest_back(t: &Term) -> Rewrite {
    match t {
        Term::Lift(LiftBy::Rho(es), body) if es.len() >= 2 => Ok(lift(
            LiftBy::Rho(vec![es[0].clone()]),
            lift(LiftBy::Rho(es[1..].to_vec()), (**body).clone()),
        )),
        _ => fail("expected a lift by at least two ρ's"),
    }
}

fn r3_pad(t: &Term) -> Rewrite {
    match t {
        Term::Lift(by, body) => {
            let (rest, k) = split_trailing(body).ok_or("lift body has no trailing identity")?;
            Ok(tensor(vec![lift(by.clone(), rest), id(k)]))
        }
        _ => fail("expected a lift"),
    }
}

fn r3_pad_back(t: &Term) -> Rewrite {
    let (l, k) = split_trailing(t).ok_or("expected ^L(t) (x) 1_K")?;
    match l {
        Term::Lift(by, body) => Ok(lift(by, pad(*body, k))),
        _ => fail("padded factor is not a lift"),
    }
}

fn r3_unit(t: &Term) -> Rewrite {
    let Term::Lift(by, body) = t else { return fail("expected a lift") };
    let (d, s) = split_leading(body).ok_or("lift body is not 1_M (x) s")?;
    if d.first() != Some(&Factor::M) {
        return fail("leading identity does not start with L²M");
    }
    let d = match by {
        LiftBy::Rho(_) => d,
        LiftBy::Sigma(x) => {
            let mut d = d;
            d.insert(1, sp(x));
            d
        }
    };
    Ok(tensor(vec![id(d), s]))
}

fn r3_id(t: &Term) -> Rewrite {
    match t {
        Term::Lift(LiftBy::Rho(_), body) if body.is_id() => Ok((**body).clone()),
        Term::Lift(LiftBy::Sigma(x), body) => match &**body {
            Term::Id(o) if o.starts_with_m() => {
                let mut v = o.0.clone();
                v.insert(1, sp(x));
                Ok(id(v))
            }
            _ => fail("lift body is not an identity on L²M⊗…"),
        },
        _ => fail("expected a lift of an identity"),
    }
}

fn r4(t: &Term) -> Rewrite {
    let Term::Lift(LiftBy::Rho(es), body) = t else { return fail("expected ^rho[A](t)") };
    let [a] = es.as_slice() else { return fail("R4 applies to a single ρ_A") };
    let (s, tg) = types(body)?;
    Ok(comp(vec![
        pad(u_gen(a), without_m(&tg)),
        lift(LiftBy::Sigma(a.clone()), (**body).clone()),
        pad(adj(u_gen(a)), without_m(&s)),
    ]))
}

fn r4_back(t: &Term) -> Rewrite {
    let ts = chain(t);
    let Some(Term::Lift(LiftBy::Sigma(a), body)) = ts.get(1) else {
        return fail("expected (U (x) 1) . ^sigma[A](t) . (U* (x) 1)");
    };
    let candidate = lift(LiftBy::Rho(vec![a.clone()]), (**body).clone());
    verify_inverse(r4, &candidate, t)
}

fn w_expansion(a: &ObjExpr, b: &ObjExpr) -> Term {
    comp(vec![
        u_gen(&ObjExpr::prod(a, b)),
        tensor(vec![id(vec![Factor::M]), adj(gen(Gen::Iota(a.clone(), b.clone())))]),
        adj(gen(Gen::SmallU(a.clone(), b.clone()))),
        tensor(vec![adj(u_gen(a)), id(vec![sp(b)])]),
        adj(lift(LiftBy::Rho(vec![a.clone()]), u_gen(b))),
    ])
}

fn r5(t: &Term) -> Rewrite {
    match t {
        Term::Gen(Gen::W(a, b)) => Ok(w_expansion(a, b)),
        _ => fail("expected W[A,B]"),
    }
}

fn r5_back(t: &Term) -> Rewrite {
    match chain(t).get(2) {
        Some(Term::Adj(x)) => match &**x {
            Term::Gen(Gen::SmallU(a, b)) => verify_inverse(r5, &gen(Gen::W(a.clone(), b.clone())), t),
            _ => fail("third factor is not u*[A,B]"),
        },
        _ => fail("expected the five-factor expansion of W[A,B]"),
    }
}

fn r6(t: &Term) -> Rewrite {
    match t {
        Term::Gen(Gen::Fa(a, b, c)) => Ok(comp(vec![
            u_gen(&ObjExpr::prod(a, &ObjExpr::prod(b, c))),
            gen(Gen::OmegaT(a.clone(), b.clone(), c.clone())),
            adj(u_gen(&ObjExpr::prod(&ObjExpr::prod(a, b), c))),
        ])),
        _ => fail("expected Fa[A,B,C]"),
    }
}

fn r6_back(t: &Term) -> Rewrite {
    match chain(t).get(1) {
        Some(Term::Gen(Gen::OmegaT(a, b, c))) => {
            verify_inverse(r6, &gen(Gen::Fa(a.clone(), b.clone(), c.clone())), t)
        }
        _ => fail("expected U . omega~[A,B,C] . U*"),
    }
}

fn omega_expansion(a: &ObjExpr, b: &ObjExpr, c: &ObjExpr) -> Term {
    let m = || id(vec![Factor::M]);
    comp(vec![
        tensor(vec![m(), adj(gen(Gen::Iota(a.clone(), ObjExpr::prod(b, c))))]),
        tensor(vec![id(vec![Factor::M, sp(a)]), adj(gen(Gen::Iota(b.clone(), c.clone())))]),
        tensor(vec![m(), gen(Gen::Omega(a.clone(), b.clone(), c.clone()))]),
        tensor(vec![m(), gen(Gen::Iota(a.clone(), b.clone())), id(vec![sp(c)])]),
        tensor(vec![m(), gen(Gen::Iota(ObjExpr::prod(a, b), c.clone()))]),
    ])
}

fn r6_omega(t: &Term) -> Rewrite {
    match t {
        Term::Gen(Gen::OmegaT(a, b, c)) => Ok(omega_expansion(a, b, c)),
        _ => fail("expected omega~[A,B,C]"),
    }
}

fn r6_omega_back(t: &Term) -> Rewrite {
    let Some((_, Term::Gen(Gen::Omega(a, b, c)))) = chain(t).get(2).and_then(split_leading) else {
        return fail("expected the five-factor expansion of omega~");
    };
    verify_inverse(r6_omega, &gen(Gen::OmegaT(a, b, c)), t)
}

/// Both sides of the σ-level cocycle identity for (X, Y, Z).
pub fn r7_sides(x: &ObjExpr, y: &ObjExpr, z: &ObjExpr) -> (Term, Term) {
    let m = || id(vec![Factor::M]);
    let yz = ObjExpr::prod(y, z);
    let xy = ObjExpr::prod(x, y);
    let lhs = comp(vec![
        tensor(vec![m(), adj(gen(Gen::Iota(x.clone(), yz.clone())))]),
        adj(gen(Gen::SmallU(x.clone(), yz))),
        tensor(vec![id(vec![Factor::M, sp(x)]), adj(gen(Gen::Iota(y.clone(), z.clone())))]),
        lift(LiftBy::Sigma(x.clone()), adj(gen(Gen::SmallU(y.clone(), z.clone())))),
    ]);
    let rhs = comp(vec![
        gen(Gen::OmegaT(x.clone(), y.clone(), z.clone())),
        tensor(vec![m(), adj(gen(Gen::Iota(xy.clone(), z.clone())))]),
        adj(gen(Gen::SmallU(xy, z.clone()))),
        tensor(vec![m(), adj(gen(Gen::Iota(x.clone(), y.clone()))), id(vec![sp(z)])]),
        tensor(vec![adj(gen(Gen::SmallU(x.clone(), y.clone()))), id(vec![sp(z)])]),
    ]);
    (normalize(&lhs), normalize(&rhs))
}

fn r7(t: &Term) -> Rewrite {
    let Some(Term::Adj(u)) = chain(t).get(1) else { return fail("second factor is not u*[X,Y×Z]") };
    let Term::Gen(Gen::SmallU(x, ObjExpr::Prod(y, z))) = &**u else {
        return fail("second factor is not u*[X,Y×Z]");
    };
    let (lhs, rhs) = r7_sides(x, y, z);
    if normalize(t) != lhs {
        return fail(format!("redex differs from the left side {lhs}"));
    }
    Ok(rhs)
}

fn r7_back(t: &Term) -> Rewrite {
    let Some(Term::Gen(Gen::OmegaT(x, y, z))) = chain(t).first() else {
        return fail("first factor is not omega~[X,Y,Z]");
    };
    let (lhs, rhs) = r7_sides(x, y, z);
    if normalize(t) != rhs {
        return fail(format!("redex differs from the right side {rhs}"));
    }
    Ok(lhs)
}

fn r8(t: &Term) -> Rewrite {
    let [a, b] = chain(t) else { return fail("expected two factors (f (x) 1) . (1 (x) g)") };
    let (f, k2) = split_trailing(a).ok_or("first factor has no trailing identity")?;
    let (d, g) = split_leading(b).ok_or("second factor has no leading identity")?;
    let (fs, ft) = types(&f)?;
    let (gs, gt) = types(&g)?;
    if d != objects_of(&fs) || k2 != objects_of(&gt) {
        return fail("identities do not match the domains of f and g");
    }
    Ok(comp(vec![tensor(vec![id(ft.0), g]), tensor(vec![f, id(gs.0)])]))
}

fn r8_back(t: &Term) -> Rewrite {
    let [a, b] = chain(t) else { return fail("expected two factors (1 (x) g) . (f (x) 1)") };
    let (c, g) = split_leading(a).ok_or("first factor has no leading identity")?;
    let (f, k) = split_trailing(b).ok_or("second factor has no trailing identity")?;
    let (fs, ft) = types(&f)?;
    let (gs, gt) = types(&g)?;
    if c != objects_of(&ft) || k != objects_of(&gs) {
        return fail("identities do not match the codomain of f and domain of g");
    }
    Ok(comp(vec![tensor(vec![f, id(gt.0)]), tensor(vec![id(fs.0), g])]))
}

fn r8_pad(t: &Term) -> Rewrite {
    let ts = chain(t);
    if ts.len() < 2 {
        return fail("expected at least two padded factors");
    }
    let parts: Vec<(Term, Vec<Factor>)> = ts
        .iter()
        .map(|x| split_trailing(x).ok_or("factor has no trailing identity"))
        .collect::<std::result::Result<_, _>>()?;
    let mut common = parts[0].1.len();
    for (_, k) in &parts[1..] {
        let max = common.min(k.len());
        common = (0..=max)
            .rev()
            .find(|&n| parts[0].1[parts[0].1.len() - n..] == k[k.len() - n..])
            .unwrap_or(0);
    }
    if common == 0 {
        return fail("padded factors share no trailing identity");
    }
    let k0 = &parts[0].1;
    let kk = k0[k0.len() - common..].to_vec();
    let bodies = parts
        .into_iter()
        .map(|(r, k)| normalize(&tensor(vec![r, id(k[..k.len() - common].to_vec())])))
        .collect();
    Ok(tensor(vec![comp(bodies), id(kk)]))
}

fn r8_pad_back(t: &Term) -> Rewrite {
    match t {
        Term::Tensor(ts) if ts.len() == 2 => match (&ts[0], &ts[1]) {
            (Term::Comp(cs), Term::Id(k)) => {
                Ok(comp(cs.iter().map(|c| pad(c.clone(), k.0.clone())).collect()))
            }
            _ => fail("expected (a . b . …) (x) 1_K"),
        },
        _ => fail("expected (a . b . …) (x) 1_K"),
    }
}

fn verify_inverse(forward: fn(&Term) -> Rewrite, candidate: &Term, redex: &Term) -> Rewrite {
    match forward(candidate) {
        Ok(out) if normalize(&out) == normalize(redex) => Ok(candidate.clone()),
        _ => fail("redex is not an instance of the rule's right side"),
    }
}

fn forward_fn(rule: &str) -> Option<fn(&Term) -> Rewrite> {
    Some(match rule {
        "R1" => r1,
        "R2" => r2,
        "R2*" => r2_star,
        "R3.comp" => r3_comp,
        "R3.adj" => r3_adj,
        "R3.nest" => r3_nest,
        "R3.pad" => r3_pad,
        "R3.unit" => r3_unit,
        "R3.id" => r3_id,
        "R4" => r4,
        "R5" => r5,
        "R6" => r6,
        "R6.omega" => r6_omega,
        "R7" => r7,
        "R8" => r8,
        "R8.pad" => r8_pad,
        _ => return None,
    })
}

fn backward_fn(rule: &str) -> Option<fn(&Term) -> Rewrite> {
    Some(match rule {
        "R2" => r2_back,
        "R2*" => r2_star_back,
        "R3.comp" => r3_comp_back,
        "R3.adj" => r3_adj_back,
        "R3.nest" => r3_nest_back,
        "R3.pad" => r3_pad_back,
        "R4" => r4_back,
        "R5" => r5_back,
        "R6" => r6_back,
        "R6.omega" => r6_omega_back,
        "R7" => r7_back,
        "R8" => r8_back,
        "R8.pad" => r8_pad_back,
        _ => return None,
    })
}

/// When `small` is `1_P` and `big` is `1_{P,K}`, returns K.
fn padded_identity(small: &Term, big: &Term) -> Option<Vec<Factor>> {
    match (small, big) {
        (Term::Id(p), Term::Id(q)) if q.0.len() > p.0.len() && q.0.starts_with(&p.0) => {
            Some(q.0[p.0.len()..].to_vec())
        }
        _ => None,
    }
}

/// Rewrites a redex (already extracted) in the given direction.
///
/// A backward hint whose forward image is `1_P` may also be used on an
/// identity `1_{P,K}`; it is then inserted as `hint ⊗ 1_K`.
pub fn rewrite(
    rule: &str,
    direction: Direction,
    redex: &Term,
    hint: Option<&Term>,
) -> std::result::Result<Term, String> {
    let fwd = forward_fn(rule).ok_or_else(|| format!("unknown rule {rule:?}"))?;
    let out = match (direction, hint) {
        (Direction::Forward, None) => fwd(redex)?,
        (Direction::Forward, Some(_)) => return fail("hints are only used backward"),
        (Direction::Backward, Some(h)) => {
            let h = normalize(h);
            types(&h).map_err(|e| format!("hint is ill-typed: {e}"))?;
            match fwd(&h) {
                Ok(out) if normalize(&out) == normalize(redex) => h,
                Ok(out) if padded_identity(&normalize(&out), redex).is_some() => {
                    let rest = padded_identity(&normalize(&out), redex).unwrap();
                    tensor(vec![h, id(rest)])
                }
                Ok(out) => return fail(format!("hint rewrites to {}, not to the redex", normalize(&out))),
                Err(e) => return fail(format!("hint does not match the rule: {e}")),
            }
        }
        (Direction::Backward, None) => match backward_fn(rule) {
            Some(back) => back(redex)?,
            None => return fail(format!("{rule} needs a `with` hint to run backward")),
        },
    };
    let out = normalize(&out);
    let before = types(redex)?;
    let after = types(&out).map_err(|e| format!("rewrite is ill-typed: {e}"))?;
    if before != after {
        return fail(format!(
            "side condition fails: redex has type {} → {}, rewrite has {} → {}",
            before.0, before.1, after.0, after.1
        ));
    }
    Ok(out)
}

/// The subterm addressed by a position. Windows select a slice of a
/// composition (any other node counts as a chain of one); an empty window
/// denotes the identity at that junction.
pub fn focus(term: &Term, path: &[usize], window: Option<(usize, usize)>) -> Result<Term> {
    let pos = fmt_position(path, window);
    let node = term.at(path).ok_or_else(|| Error::RuleMismatch {
        rule: String::new(),
        position: pos.clone(),
        message: "no subterm at this path".into(),
    })?;
    let Some((i, j)) = window else { return Ok(node.clone()) };
    let ts = chain(node);
    if j > ts.len() || i > j {
        return Err(Error::RuleMismatch {
            rule: String::new(),
            position: pos,
            message: format!("window out of range for {} factors", ts.len()),
        });
    }
    Ok(match j - i {
        0 => {
            let o = if i < ts.len() { typecheck(&ts[i])?.1 } else { typecheck(&ts[i - 1])?.0 };
            Term::Id(o)
        }
        1 => ts[i].clone(),
        _ => Term::Comp(ts[i..j].to_vec()),
    })
}

fn replace(term: &Term, path: &[usize], window: Option<(usize, usize)>, new: Term) -> Term {
    let mut out = term.clone();
    let node = out.at_mut(path).expect("focus checked the path");
    match window {
        None => *node = new,
        Some((i, j)) => {
            let mut ts = chain(node).to_vec();
            ts.splice(i..j, std::iter::once(new));
            *node = Term::Comp(ts);
        }
    }
    normalize(&out)
}

/// Applies one rule at a position; the result is normalized and retyped.
pub fn apply_rule(
    term: &Term,
    rule: &str,
    path: &[usize],
    window: Option<(usize, usize)>,
    direction: Direction,
    hint: Option<&Term>,
) -> Result<Term> {
    let mismatch = |message: String| Error::RuleMismatch {
        rule: rule.to_string(),
        position: fmt_position(path, window),
        message,
    };
    let redex = focus(term, path, window).map_err(|e| match e {
        Error::RuleMismatch { message, .. } => mismatch(message),
        other => other,
    })?;
    let new = rewrite(rule, direction, &redex, hint).map_err(mismatch)?;
    let out = replace(term, path, window, new);
    let before = typecheck(term)?;
    let after = typecheck(&out)?;
    assert_eq!(before, after, "subject reduction violated by {rule} at {}", fmt_position(path, window));
    Ok(out)
}

/// Every position of a term: each path, plus every window of each
/// composition (including empty ones when `empty_windows`).
pub fn positions(term: &Term, empty_windows: bool) -> Vec<Position> {
    fn go(
        t: &Term,
        path: &mut Vec<usize>,
        empty: bool,
        out: &mut Vec<Position>,
    ) {
        out.push((path.clone(), None));
        let n = chain(t).len();
        for i in 0..=n {
            for j in i..=n {
                let len = j - i;
                if (len == 0 && empty) || (len >= 2 && len < n) {
                    out.push((path.clone(), Some((i, j))));
                }
            }
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            go(c, path, empty, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(term, &mut vec![], empty_windows, &mut out);
    out
}
