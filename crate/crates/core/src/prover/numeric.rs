//! Evaluation of U-free terms in a kernel model, and the soundness bridge
//! between rewrite rules and matrices.
//!
//! Terms are evaluated with tensor factors in the order they are written
//! (L²M first). The kernel model stores L²M innermost, so its matrices are
//! permuted on the way in.

use std::collections::BTreeMap;

use super::parse::parse_term;
use super::rules::{rewrite, Direction};
use super::term::{normalize, typecheck, Factor, FormalObject, Gen, LiftBy, ObjExpr, Term};
use crate::error::{Error, Result};
use crate::graded::{associator_matrix, iota, GradedObject};
use crate::kernel::NumericKernelModel;
use crate::linalg::{self, CMatrix};

/// Outcome of a soundness check.
#[derive(Debug, Clone, PartialEq)]
pub enum Soundness {
    Residual(f64),
    SymbolicOnly,
}

pub struct Evaluator<'a> {
    pub model: &'a NumericKernelModel,
    pub objects: &'a BTreeMap<String, GradedObject>,
}

impl Evaluator<'_> {
    pub fn object(&self, e: &ObjExpr) -> Result<GradedObject> {
        match e {
            ObjExpr::Atom(a) => self
                .objects
                .get(a)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument(format!("no instance for object {a}"))),
            ObjExpr::Prod(a, b) => self.object(a)?.tensor(&self.object(b)?),
        }
    }

    fn factor_dim(&self, f: &Factor) -> Result<usize> {
        Ok(match f {
            Factor::M => self.model.dim(),
            Factor::Sp(e) => self.object(e)?.len(),
        })
    }

    pub fn dim(&self, o: &FormalObject) -> Result<usize> {
        o.0.iter().map(|f| self.factor_dim(f)).product()
    }

    /// The matrix of a term, or `None` when it involves an absorption
    /// unitary (U, W, Fa or a ρ-lift).
    pub fn eval(&self, t: &Term) -> Result<Option<CMatrix>> {
        if t.is_symbolic() {
            return Ok(None);
        }
        typecheck(t)?;
        self.eval_pure(t).map(Some)
    }

    fn eval_pure(&self, t: &Term) -> Result<CMatrix> {
        let d = self.model.dim();
        Ok(match t {
            Term::Id(o) => linalg::identity(self.dim(o)?),
            Term::Gen(g) => match g {
                Gen::SmallU(a, b) => {
                    let (x, y) = (self.object(a)?, self.object(b)?);
                    inner_to_outer(&self.model.u_object(&x, &y)?, d)
                }
                Gen::Iota(a, b) => iota(&self.object(a)?, &self.object(b)?),
                Gen::Omega(a, b, c) => {
                    associator_matrix(&self.object(a)?, &self.object(b)?, &self.object(c)?, self.model.omega())?
                }
                Gen::OmegaT(a, b, c) => {
                    let (x, y, z) = (self.object(a)?, self.object(b)?, self.object(c)?);
                    let src = x.tensor(&y)?.tensor(&z)?;
                    let tgt = x.tensor(&y.tensor(&z)?)?;
                    let mut m = CMatrix::zeros(tgt.len(), src.len());
                    // ((x,y),z) and (x,(y,z)) share the x-major index
                    for (i, &gx) in x.grades().iter().enumerate() {
                        for (j, &gy) in y.grades().iter().enumerate() {
                            for (k, &gz) in z.grades().iter().enumerate() {
                                let p = (i * y.len() + j) * z.len() + k;
                                m[(p, p)] = self.model.omega().get(&[gx, gy, gz]).to_complex();
                            }
                        }
                    }
                    linalg::kron(&linalg::identity(d), &m)
                }
                Gen::U(_) | Gen::W(..) | Gen::Fa(..) => unreachable!("symbolic generators are filtered"),
            },
            Term::Adj(inner) => self.eval_pure(inner)?.adjoint(),
            Term::Comp(ts) => {
                let mut it = ts.iter();
                let mut acc = self.eval_pure(it.next().expect("nonempty composition"))?;
                for c in it {
                    acc *= self.eval_pure(c)?;
                }
                acc
            }
            Term::Tensor(ts) => {
                let mut acc = CMatrix::from_element(1, 1, linalg::ONE);
                for c in ts {
                    acc = linalg::kron(&acc, &self.eval_pure(c)?);
                }
                acc
            }
            Term::Lift(LiftBy::Sigma(x), inner) => {
                let a = self.eval_pure(inner)?;
                self.sigma_lift(&self.object(x)?, &a)
            }
            Term::Lift(LiftBy::Rho(_), _) => unreachable!("symbolic lifts are filtered"),
        })
    }

    /// ^{σ_X}(A) for A: L²M⊗H → L²M⊗K, returned as L²M⊗L²X⊗H → L²M⊗L²X⊗K.
    pub fn sigma_lift(&self, x: &GradedObject, a: &CMatrix) -> CMatrix {
        let d = self.model.dim();
        let (k, h) = (a.nrows() / d, a.ncols() / d);
        let n = x.len();
        let mut out = CMatrix::zeros(d * n * k, d * n * h);
        for (xi, &g) in x.grades().iter().enumerate() {
            for r in 0..k {
                for c in 0..h {
                    let mut blk = CMatrix::zeros(d, d);
                    for i in 0..d {
                        for j in 0..d {
                            blk[(i, j)] = a[(i * k + r, j * h + c)];
                        }
                    }
                    let img = self.model.alpha(g, &blk);
                    for i in 0..d {
                        for j in 0..d {
                            out[((i * n + xi) * k + r, (j * n + xi) * h + c)] = img[(i, j)];
                        }
                    }
                }
            }
        }
        out
    }
}

/// Reorders a square matrix from (point, M) index order to (M, point).
pub fn inner_to_outer(m: &CMatrix, d: usize) -> CMatrix {
    let p = m.nrows() / d;
    let perm: Vec<usize> = (0..p * d).map(|k| (k % d) * p + k / d).collect();
    let pi = linalg::permutation(&perm);
    &pi * m * pi.transpose()
}

/// A U-free left side for each rule that admits one; the right side is
/// produced by the rule itself.
pub fn rule_instance(rule: &str) -> Option<Term> {
    let text = match rule {
        "R7" => {
            let (lhs, _) = super::rules::r7_sides(&ObjExpr::atom("X"), &ObjExpr::atom("Y"), &ObjExpr::atom("Z"));
            return Some(lhs);
        }
        "R8" => "(1[M] (x) iota[X,Y] (x) 1[Y×Z]) . (1[M,X×Y] (x) iota[Y,Z]*)",
        "R8.pad" => "(1[M] (x) iota[X,Y]* (x) 1[Z]) . (u[X,Y]* (x) 1[Z])",
        "R3.comp" => "^sigma[X](u[Y,Z] . u[Y,Z] . (1[M] (x) iota[Y,Z]))",
        "R3.adj" => "^sigma[X](u[Y,Z]*)",
        "R3.pad" => "^sigma[X](u[Y,Z] (x) 1[X])",
        "R3.unit" => "^sigma[X](1[M] (x) iota[Y,Z])",
        "R3.id" => "^sigma[X](1[M,Y])",
        "R6.omega" => "omega~[X,Y,Z]",
        _ => return None,
    };
    Some(normalize(&parse_term(text, None).expect("built-in instance parses")))
}

/// Instantiates a rule with the given objects for X, Y, Z and returns the
/// operator-norm distance between its two sides.
pub fn numeric_soundness(
    rule: &str,
    model: &NumericKernelModel,
    objects: &BTreeMap<String, GradedObject>,
) -> Result<Soundness> {
    let Some(lhs) = rule_instance(rule) else { return Ok(Soundness::SymbolicOnly) };
    let rhs = rewrite(rule, Direction::Forward, &lhs, None).map_err(|message| Error::RuleMismatch {
        rule: rule.to_string(),
        position: "root".into(),
        message,
    })?;
    let ev = Evaluator { model, objects };
    match (ev.eval(&lhs)?, ev.eval(&rhs)?) {
        (Some(a), Some(b)) => Ok(Soundness::Residual(linalg::op_norm(&(a - b)))),
        _ => Ok(Soundness::SymbolicOnly),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn setup(seed: u64) -> (NumericKernelModel, BTreeMap<String, GradedObject>) {
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = NumericKernelModel::random(g.clone(), 2, 3, &mut rng).unwrap();
        let mut objs = BTreeMap::new();
        objs.insert("X".into(), GradedObject::from_grades(g.clone(), &[1, 2]).unwrap());
        objs.insert("Y".into(), GradedObject::from_grades(g.clone(), &[0, 2]).unwrap());
        objs.insert("Z".into(), GradedObject::from_grades(g, &[1, 1]).unwrap());
        (model, objs)
    }

    #[test]
    fn sigma_lift_matches_kernel_amplification() {
        let (model, objs) = setup(3);
        let ev = Evaluator { model: &model, objects: &objs };
        let (y, z) = (&objs["Y"], &objs["Z"]);
        let u = model.u_object(y, z).unwrap();
        let kernel = model.sigma_amplified(&objs["X"], &u).unwrap();
        let ours = ev.sigma_lift(&objs["X"], &inner_to_outer(&u, 2));
        assert!(linalg::op_norm(&(inner_to_outer(&kernel, 2) - ours)) < 1e-12);
    }

    #[test]
    fn instantiable_rules_are_sound() {
        let (model, objs) = setup(5);
        for rule in crate::prover::RULES {
            match numeric_soundness(rule, &model, &objs).unwrap() {
                Soundness::Residual(r) => assert!(r <= 1e-10, "{rule}: {r}"),
                Soundness::SymbolicOnly => assert!(rule_instance(rule).is_none(), "{rule}"),
            }
        }
        assert_eq!(numeric_soundness("R1", &model, &objs).unwrap(), Soundness::SymbolicOnly);
        assert_eq!(numeric_soundness("R8", &model, &objs).unwrap(), Soundness::Residual(0.0));
    }
}
