//! Finite matrix model of a G-kernel: `M = M_d(C)`, `α_g = Ad V_g` and
//! `u_{g,h} = b(g,h)·V_g V_h V_{gh}*`.
//!
//! Every automorphism of a matrix algebra is inner, so the outer class is
//! trivial here and the absorption unitaries `U_X` do not exist once `|X| ≥ 2`.
//! The model therefore only realizes σ-level data; ρ-level statements live in
//! [`crate::prover`] as formal symbols.
//!
//! Layout: an operator on `L²M ⊗ L²X` is a `(|X|·d)`-square matrix with the
//! point index outer and the matrix index inner, `(x, i) ↦ x·d + i`.

use std::collections::BTreeSet;
use std::sync::Arc;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::graded::{associator_matrix, hom_dimension, same_group, GradedMap, GradedObject};
use crate::group::{coboundary, Cochain, FiniteGroup, Phase};
use crate::linalg::{self, CMatrix};

/// Residual tolerance for every numeric identity.
pub const TOL: f64 = 1e-10;

const UNITARY_TOL: f64 = 1e-12;
const SNAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct NumericKernelModel {
    group: Arc<FiniteGroup>,
    d: usize,
    v: Vec<CMatrix>,
    b: Cochain,
    u: Vec<CMatrix>,
    omega: Cochain,
}

impl NumericKernelModel {
    pub fn new(group: Arc<FiniteGroup>, d: usize, v: Vec<CMatrix>, b: Cochain) -> Result<Self> {
        let n = group.order();
        if d == 0 {
            return Err(invalid("matrix dimension must be positive"));
        }
        if v.len() != n {
            return Err(invalid(format!("expected {n} unitaries, got {}", v.len())));
        }
        if b.degree() != 2 || b.group_order() != n {
            return Err(invalid("b must be a 2-cochain on the model's group"));
        }
        for (g, vg) in v.iter().enumerate() {
            if vg.nrows() != d || vg.ncols() != d {
                return Err(invalid(format!(
                    "V_{g} is {}x{}, expected {d}x{d}",
                    vg.nrows(),
                    vg.ncols()
                )));
            }
            let dev = linalg::unitarity_defect(vg);
            if dev > UNITARY_TOL {
                return Err(invalid(format!("V_{g} is not unitary (deviation {dev:.3e})")));
            }
        }
        let dev = linalg::op_norm(&(&v[0] - linalg::identity(d)));
        if dev > UNITARY_TOL {
            return Err(invalid(format!("V_e must be the identity (deviation {dev:.3e})")));
        }
        let mut u = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                let m = &v[g] * &v[h] * v[gh].adjoint() * b.get(&[g, h]).to_complex();
                u.push(m);
            }
        }
        let mut model =
            Self { omega: Cochain::trivial(&group, 3)?, group, d, v, b, u };
        model.omega = model.measure_omega_inner()?;
        Ok(model)
    }

    /// All `V_g = 1`, `b` trivial.
    pub fn trivial(group: Arc<FiniteGroup>, d: usize) -> Result<Self> {
        let b = Cochain::trivial(&group, 2)?;
        let v = vec![linalg::identity(d); group.order()];
        Self::new(group, d, v, b)
    }

    /// Haar-random `V_g` for g ≠ e and a random normalized `b` with angle
    /// denominator `b_denom`.
    pub fn random<R: Rng + ?Sized>(
        group: Arc<FiniteGroup>,
        d: usize,
        b_denom: i64,
        rng: &mut R,
    ) -> Result<Self> {
        let v = group
            .elements()
            .map(|g| if g == 0 { linalg::identity(d) } else { linalg::random_unitary(d, rng) })
            .collect();
        let b = Cochain::random(&group, 2, b_denom, rng)?;
        Self::new(group, d, v, b)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.v
    }

    pub fn b(&self) -> &Cochain {
        &self.b
    }

    /// The measured 3-cochain, equal to `db`.
    pub fn omega(&self) -> &Cochain {
        &self.omega
    }

    /// α_g(m) = V_g m V_g*.
    pub fn alpha(&self, g: usize, m: &CMatrix) -> CMatrix {
        &self.v[g] * m * self.v[g].adjoint()
    }

    pub fn u_pair(&self, g: usize, h: usize) -> &CMatrix {
        &self.u[g * self.group.order() + h]
    }

    /// Matrix units of M, the generating set for every homomorphism check.
    pub fn generators(&self) -> Vec<CMatrix> {
        let d = self.d;
        (0..d * d).map(|k| linalg::matrix_unit(d, k / d, k % d)).collect()
    }

    /// ‖α_g α_h(m) − Ad u_{g,h} α_{gh}(m)‖ maximized over g, h and matrix units.
    pub fn alpha_composition_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for g in self.group.elements() {
            for h in self.group.elements() {
                let u = self.u_pair(g, h);
                let gh = self.group.mul(g, h);
                for m in self.generators() {
                    let lhs = self.alpha(g, &self.alpha(h, &m));
                    let rhs = u * self.alpha(gh, &m) * u.adjoint();
                    worst = worst.max(linalg::op_norm(&(lhs - rhs)));
                }
            }
        }
        worst
    }

    fn kernel_sides(&self, g: usize, h: usize, k: usize) -> (CMatrix, CMatrix) {
        let grp = &self.group;
        let lhs = self.u_pair(g, h) * self.u_pair(grp.mul(g, h), k);
        let rhs = self.alpha(g, self.u_pair(h, k)) * self.u_pair(g, grp.mul(h, k));
        (lhs, rhs)
    }

    fn measure_omega_inner(&self) -> Result<Cochain> {
        let n = self.group.order();
        let denom = self.b.denominator_lcm() * (n * n * n) as i64;
        let failure = std::cell::RefCell::new(None);
        let c = Cochain::from_fn(&self.group, 3, |a| {
            let (lhs, rhs) = self.kernel_sides(a[0], a[1], a[2]);
            let z = (rhs.adjoint() * &lhs).trace() / self.d as f64;
            let resid = linalg::op_norm(&(&lhs - &rhs * z));
            match Phase::snap(z, denom, SNAP_TOL) {
                Some(p) if resid <= TOL => p,
                _ => {
                    failure.borrow_mut().get_or_insert(format!(
                        "sides at ({},{},{}) are not proportional to a phase (residual {resid:.3e}, ratio {z})",
                        a[0], a[1], a[2]
                    ));
                    Phase::one()
                }
            }
        });
        if let Some(msg) = failure.into_inner() {
            return Err(Error::ModelInconsistency(msg));
        }
        // non-normalized ratios would already be rejected by from_fn
        c.map_err(|e| Error::ModelInconsistency(e.to_string()))
    }

    /// Recomputes ω from u: u_{g,h}u_{gh,k} = ω(g,h,k)·α_g(u_{h,k})·u_{g,hk}.
    pub fn measure_omega(&self) -> Result<Cochain> {
        self.measure_omega_inner()
    }

    /// Kernel identity residual for each triple, using the measured ω.
    pub fn kernel_identity_residuals(&self) -> Vec<([usize; 3], f64)> {
        let mut out = Vec::new();
        for g in self.group.elements() {
            for h in self.group.elements() {
                for k in self.group.elements() {
                    let (lhs, rhs) = self.kernel_sides(g, h, k);
                    let w = self.omega.get(&[g, h, k]).to_complex();
                    out.push(([g, h, k], linalg::op_norm(&(lhs - rhs * w))));
                }
            }
        }
        out
    }

    pub fn kernel_identity_residual(&self) -> f64 {
        self.kernel_identity_residuals().into_iter().map(|(_, r)| r).fold(0.0, f64::max)
    }

    fn check_object(&self, x: &GradedObject) -> Result<()> {
        if same_group(x.group(), &self.group) {
            Ok(())
        } else {
            Err(invalid("object is graded by a different group than the model"))
        }
    }

    fn check_square(&self, m: &CMatrix, n: usize, what: &str) -> Result<()> {
        if m.nrows() != n || m.ncols() != n {
            return Err(invalid(format!(
                "{what} is {}x{}, expected {n}x{n}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(())
    }

    /// σ_X(m) = ⊕_x α_{g_X(x)}(m).
    pub fn sigma(&self, x: &GradedObject, m: &CMatrix) -> Result<CMatrix> {
        self.check_object(x)?;
        self.check_square(m, self.d, "argument of sigma")?;
        let blocks: Vec<CMatrix> = x.grades().iter().map(|&g| self.alpha(g, m)).collect();
        Ok(linalg::block_diag(&blocks))
    }

    /// (σ_X ⊗ id)(A) for A on L²M ⊗ H with `dim H = h`, returned on
    /// L²M ⊗ L²X ⊗ H: blocks `[(x,k),(x,k')] = α_{g_X(x)}(A_{k,k'})`.
    pub fn sigma_amplified(&self, x: &GradedObject, a: &CMatrix) -> Result<CMatrix> {
        self.check_object(x)?;
        let d = self.d;
        if a.nrows() != a.ncols() || !a.nrows().is_multiple_of(d) {
            return Err(invalid(format!("amplified argument has shape {}x{}", a.nrows(), a.ncols())));
        }
        let h = a.nrows() / d;
        let mut out = CMatrix::zeros(x.len() * h * d, x.len() * h * d);
        for (xi, &g) in x.grades().iter().enumerate() {
            for k in 0..h {
                for k2 in 0..h {
                    let blk = a.view((k * d, k2 * d), (d, d)).into_owned();
                    let r = (xi * h + k) * d;
                    let c = (xi * h + k2) * d;
                    out.view_mut((r, c), (d, d)).copy_from(&self.alpha(g, &blk));
                }
            }
        }
        Ok(out)
    }

    /// u_{X,Y}: block u_{g_X(x), g_Y(y)} at (x, y).
    pub fn u_object(&self, x: &GradedObject, y: &GradedObject) -> Result<CMatrix> {
        self.check_object(x)?;
        self.check_object(y)?;
        let mut blocks = Vec::with_capacity(x.len() * y.len());
        for &gx in x.grades() {
            for &gy in y.grades() {
                blocks.push(self.u_pair(gx, gy).clone());
            }
        }
        Ok(linalg::block_diag(&blocks))
    }

    /// Unital *-homomorphism residual of σ_X on matrix units.
    pub fn verify_sigma_hom(&self, x: &GradedObject) -> Result<f64> {
        let gens = self.generators();
        let images: Vec<CMatrix> = gens.iter().map(|m| self.sigma(x, m)).collect::<Result<_>>()?;
        let dim = x.len() * self.d;
        let mut worst = linalg::op_norm(&(self.sigma(x, &linalg::identity(self.d))? - linalg::identity(dim)));
        for (i, m) in gens.iter().enumerate() {
            worst = worst.max(linalg::op_norm(&(self.sigma(x, &m.adjoint())? - images[i].adjoint())));
            for (j, n) in gens.iter().enumerate() {
                let prod = self.sigma(x, &(m * n))?;
                worst = worst.max(linalg::op_norm(&(prod - &images[i] * &images[j])));
            }
        }
        Ok(worst)
    }

    /// max_m ‖(σ_X⊗id)σ_Y(m) − u_{X,Y}(1⊗ι)σ_{X×Y}(m)(1⊗ι)*u_{X,Y}*‖.
    pub fn verify_sigma_tensor(&self, x: &GradedObject, y: &GradedObject) -> Result<f64> {
        let u = self.u_object(x, y)?;
        self.verify_sigma_tensor_with(x, y, &u)
    }

    /// As [`Self::verify_sigma_tensor`] with a caller-supplied `u_{X,Y}`.
    pub fn verify_sigma_tensor_with(
        &self,
        x: &GradedObject,
        y: &GradedObject,
        u: &CMatrix,
    ) -> Result<f64> {
        let xy = x.tensor(y)?;
        let dim = xy.len() * self.d;
        self.check_square(u, dim, "u_{X,Y}")?;
        // 1 ⊗ ι in the point-outer layout
        let iota = linalg::kron(&crate::graded::iota(x, y), &linalg::identity(self.d));
        let mut worst: f64 = 0.0;
        for m in self.generators() {
            let lhs = self.sigma_amplified(x, &self.sigma(y, &m)?)?;
            let rhs = u * &iota * self.sigma(&xy, &m)? * iota.adjoint() * u.adjoint();
            worst = worst.max(linalg::op_norm(&(lhs - rhs)));
        }
        Ok(worst)
    }

    /// Pads an operator on L²M⊗L²X⊗L²Y with 1 on a trailing L²Z factor,
    /// keeping M innermost.
    fn pad_trailing(&self, a: &CMatrix, z: usize) -> CMatrix {
        let d = self.d;
        let p = a.nrows() / d;
        let mut out = CMatrix::zeros(p * z * d, p * z * d);
        for r in 0..p {
            for c in 0..p {
                let blk = a.view((r * d, c * d), (d, d));
                for k in 0..z {
                    out.view_mut(((r * z + k) * d, (c * z + k) * d), (d, d)).copy_from(&blk);
                }
            }
        }
        out
    }

    /// Both sides of the σ-level pentagon:
    /// `(u_{X,Y}⊗1_Z)·u_{X×Y,Z}` and `(1⊗ω_{X,Y,Z})·σ_X(u_{Y,Z})·u_{X,Y×Z}`.
    pub fn pentagon_sides(
        &self,
        x: &GradedObject,
        y: &GradedObject,
        z: &GradedObject,
    ) -> Result<(CMatrix, CMatrix)> {
        let xy = x.tensor(y)?;
        let yz = y.tensor(z)?;
        let lhs = self.pad_trailing(&self.u_object(x, y)?, z.len()) * self.u_object(&xy, z)?;
        let omega = linalg::kron(&associator_matrix(x, y, z, &self.omega)?, &linalg::identity(self.d));
        let rhs = omega * self.sigma_amplified(x, &self.u_object(y, z)?)? * self.u_object(x, &yz)?;
        Ok((lhs, rhs))
    }

    pub fn verify_pentagon_sigma(
        &self,
        x: &GradedObject,
        y: &GradedObject,
        z: &GradedObject,
    ) -> Result<f64> {
        let (lhs, rhs) = self.pentagon_sides(x, y, z)?;
        Ok(linalg::op_norm(&(lhs - rhs)))
    }

    /// Orthonormal (Hilbert–Schmidt) basis of {T : T σ_X(m) = σ_Y(m) T}.
    pub fn intertwiners(&self, x: &GradedObject, y: &GradedObject) -> Result<Vec<CMatrix>> {
        self.check_object(x)?;
        self.check_object(y)?;
        let (p, q) = (x.len() * self.d, y.len() * self.d);
        let n = p * q;
        if n == 0 {
            return Ok(vec![]);
        }
        // vec(T A) = (Aᵀ ⊗ 1) vec T and vec(B T) = (1 ⊗ B) vec T, column-major
        let mut gram = CMatrix::zeros(n, n);
        for m in self.generators() {
            let a = self.sigma(x, &m)?;
            let b = self.sigma(y, &m)?;
            let k = linalg::kron(&a.transpose(), &linalg::identity(q))
                - linalg::kron(&linalg::identity(p), &b);
            gram += k.adjoint() * k;
        }
        let eig = SymmetricEigen::new(gram);
        let scale = eig.eigenvalues.amax().max(1.0);
        let mut basis = Vec::new();
        for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam.abs() <= 1e-9 * scale {
                let col = eig.eigenvectors.column(idx);
                basis.push(CMatrix::from_column_slice(q, p, col.as_slice()));
            }
        }
        Ok(basis)
    }

    pub fn intertwiner_dim(&self, x: &GradedObject, y: &GradedObject) -> Result<usize> {
        Ok(self.intertwiners(x, y)?.len())
    }

    /// Largest ‖T σ_X(m) − σ_Y(m) T‖ over matrix units.
    pub fn intertwiner_residual(
        &self,
        x: &GradedObject,
        y: &GradedObject,
        t: &CMatrix,
    ) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for m in self.generators() {
            let r = t * self.sigma(x, &m)? - self.sigma(y, &m)? * t;
            worst = worst.max(linalg::op_norm(&r));
        }
        Ok(worst)
    }

    /// F(t) realized at σ-level as `1_M ⊗ t`, with its intertwiner residual
    /// and an exact injectivity check (t is read back from F(t)).
    pub fn functor_f_sigma(&self, t: &GradedMap) -> Result<FunctorImage> {
        let checked = GradedMap::new(t.source.clone(), t.target.clone(), t.matrix.clone())?;
        self.check_object(&checked.source)?;
        let matrix = linalg::kron(&checked.matrix, &linalg::identity(self.d));
        let residual = self.intertwiner_residual(&checked.source, &checked.target, &matrix)?;
        let d = self.d;
        let injective = (0..t.matrix.nrows()).all(|r| {
            (0..t.matrix.ncols()).all(|c| matrix[(r * d, c * d)] == t.matrix[(r, c)])
        });
        Ok(FunctorImage { matrix, residual, injective })
    }

    /// Naturality of u at σ-level: u_{X',Y}·(t⊗1_Y⊗1) − (t⊗1_Y⊗1)·u_{X,Y} and the
    /// analogous difference for `s: Y → Y'` on the right factor.
    pub fn u_naturality_residual(&self, t: &GradedMap, y: &GradedObject) -> Result<f64> {
        let d1 = linalg::identity(self.d);
        let ty = linalg::kron(&linalg::kron(&t.matrix, &linalg::identity(y.len())), &d1);
        let left = self.u_object(&t.target, y)? * &ty - &ty * self.u_object(&t.source, y)?;
        let yt = linalg::kron(&linalg::kron(&linalg::identity(y.len()), &t.matrix), &d1);
        let right = self.u_object(y, &t.target)? * &yt - &yt * self.u_object(y, &t.source)?;
        Ok(linalg::op_norm(&left).max(linalg::op_norm(&right)))
    }

    /// The object σ_{μ_E}: points of E with weights from μ and grade = point.
    pub fn subset_object(&self, mu: &[f64], subset: &[usize]) -> Result<GradedObject> {
        GradedObject::new(
            self.group.clone(),
            subset.iter().map(|&g| (format!("g{g}"), mu[g], g)).collect(),
        )
    }

    /// Minimality conditions for the given lift over subsets of supp μ.
    pub fn minimality_report(&self, mu: &[f64], opts: &MinimalityOptions) -> Result<MinimalityReport> {
        let n = self.group.order();
        if mu.len() != n {
            return Err(invalid(format!("mu has {} entries, group has order {n}", mu.len())));
        }
        if mu.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(invalid("mu must be non-negative"));
        }
        let support: Vec<usize> = (0..n).filter(|&g| mu[g] > 0.0).collect();
        if support.is_empty() {
            return Err(invalid("mu has empty support"));
        }
        let s = support.len();
        let full = (1u64 << s) - 1;
        let members = |mask: u64| -> Vec<usize> {
            (0..s).filter(|i| mask >> i & 1 == 1).map(|i| support[i]).collect()
        };
        let exhaustive = s <= opts.exhaustive_cutoff;
        let mut pairs_i = BTreeSet::new();
        let mut pairs_ii = BTreeSet::new();
        if exhaustive {
            for e in 1..full {
                pairs_ii.insert((e, full & !e));
                let rest = full & !e;
                // nonempty submasks of the complement
                let mut f = rest;
                while f > 0 {
                    pairs_i.insert((e, f));
                    f = (f - 1) & rest;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..opts.samples {
                let e = rng.random_range(1..full);
                pairs_ii.insert((e, full & !e));
                let rest: Vec<usize> = (0..s).filter(|i| (full & !e) >> i & 1 == 1).collect();
                let k = rng.random_range(1..=rest.len());
                let f = sample(&mut rng, rest.len(), k).iter().fold(0u64, |acc, i| acc | 1 << rest[i]);
                pairs_i.insert((e, f));
            }
        }
        let record = |(e, f): (u64, u64)| -> Result<PairRecord> {
            let (ev, fv) = (members(e), members(f));
            let xe = self.subset_object(mu, &ev)?;
            let xf = self.subset_object(mu, &fv)?;
            Ok(PairRecord {
                intertwiner_dim: self.intertwiner_dim(&xe, &xf)?,
                hom_dim: hom_dimension(&xe, &xf),
                e: ev,
                f: fv,
            })
        };
        let condition_i: Vec<PairRecord> = pairs_i.into_iter().map(record).collect::<Result<_>>()?;
        let condition_ii: Vec<PairRecord> = pairs_ii.into_iter().map(record).collect::<Result<_>>()?;
        let minimal_i = condition_i.iter().all(|p| p.intertwiner_dim == 0);
        let minimal_ii = condition_ii.iter().all(|p| p.intertwiner_dim == 0);
        let not_full_pairs = condition_i
            .iter()
            .filter(|p| p.hom_dim < p.intertwiner_dim)
            .count();
        Ok(MinimalityReport {
            support,
            exhaustive,
            minimal_i,
            minimal_ii,
            conditions_agree: minimal_i == minimal_ii,
            minimal: minimal_i && minimal_ii,
            not_full_pairs,
            condition_i,
            condition_ii,
        })
    }
}

#[derive(Debug, Clone)]
pub struct FunctorImage {
    pub matrix: CMatrix,
    pub residual: f64,
    pub injective: bool,
}

#[derive(Debug, Clone)]
pub struct MinimalityOptions {
    /// Largest support enumerated exhaustively.
    pub exhaustive_cutoff: usize,
    /// Number of sampled subsets beyond the cutoff.
    pub samples: usize,
    pub seed: u64,
}

impl Default for MinimalityOptions {
    fn default() -> Self {
        Self { exhaustive_cutoff: 5, samples: 64, seed: 0 }
    }
}

/// One disjoint pair (E, F) of subsets of the support.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRecord {
    pub e: Vec<usize>,
    pub f: Vec<usize>,
    pub intertwiner_dim: usize,
    /// dim Hom(μ_E, μ_F) in the graded category; zero for disjoint sets.
    pub hom_dim: usize,
}

#[derive(Debug, Clone)]
pub struct MinimalityReport {
    pub support: Vec<usize>,
    pub exhaustive: bool,
    /// All disjoint pairs (E, F).
    pub condition_i: Vec<PairRecord>,
    /// Each E against its complement in the support.
    pub condition_ii: Vec<PairRecord>,
    pub minimal_i: bool,
    pub minimal_ii: bool,
    pub conditions_agree: bool,
    pub minimal: bool,
    /// Pairs whose intertwiner space is larger than the Hom space, witnessing
    /// that F is not full.
    pub not_full_pairs: usize,
}

impl MinimalityReport {
    pub fn f_not_full(&self) -> bool {
        self.not_full_pairs > 0
    }
}

/// Diagonal unitary with the given phases.
pub fn diag_phases(phases: &[Phase]) -> CMatrix {
    let entries: Vec<Complex64> = phases.iter().map(|p| p.to_complex()).collect();
    linalg::diagonal(&entries)
}

/// `V_g = D^g` on a cyclic group for a single diagonal generator `D`.
pub fn cyclic_powers(n: usize, generator: &CMatrix) -> Vec<CMatrix> {
    let d = generator.nrows();
    let mut out = vec![linalg::identity(d)];
    for _ in 1..n {
        let next = generator * out.last().unwrap();
        out.push(next);
    }
    out
}

/// The pair (coboundary(b), measured ω) for cross-checking.
pub fn omega_against_coboundary(model: &NumericKernelModel) -> Result<(Cochain, Cochain)> {
    Ok((coboundary(&model.group, &model.b)?, model.measure_omega()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2).unwrap())
    }

    fn z2_diag(b11: Phase) -> NumericKernelModel {
        let g = z2();
        let v1 = diag_phases(&[Phase::one(), Phase::new(1, 2)]);
        let b = Cochain::from_entries(&g, 2, &[(vec![1, 1], b11)]).unwrap();
        NumericKernelModel::new(g, 2, vec![linalg::identity(2), v1], b).unwrap()
    }

    #[test]
    fn trivial_model() {
        let m = NumericKernelModel::trivial(z2(), 2).unwrap();
        assert!(m.omega().is_trivial());
        assert!(m.u_pair(1, 1) == &linalg::identity(2));
    }

    #[test]
    fn z2_diag_u() {
        let m = z2_diag(Phase::one());
        assert!(linalg::op_norm(&(m.u_pair(1, 1) - linalg::identity(2))) < 1e-15);
        assert!(m.omega().is_trivial());
    }

    #[test]
    fn rejects_non_unitary() {
        let g = z2();
        let mut bad = linalg::identity(2);
        bad[(0, 0)] = Complex64::new(2.0, 0.0);
        let b = Cochain::trivial(&g, 2).unwrap();
        let err = NumericKernelModel::new(g, 2, vec![linalg::identity(2), bad], b).unwrap_err();
        assert!(err.to_string().contains("V_1"), "{err}");
    }

    #[test]
    fn sigma_blocks() {
        let m = z2_diag(Phase::one());
        let x = GradedObject::from_grades(z2(), &[0, 1]).unwrap();
        let s = m.sigma(&x, &linalg::matrix_unit(2, 0, 1)).unwrap();
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 1)] = linalg::ONE;
        expected[(2, 3)] = -linalg::ONE;
        assert!(linalg::op_norm(&(s - expected)) < 1e-15);
        assert!(m.sigma(&x, &linalg::identity(3)).is_err());
    }

    #[test]
    fn omega_equals_coboundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let m = NumericKernelModel::random(g, 2, 6, &mut rng).unwrap();
        let (db, w) = omega_against_coboundary(&m).unwrap();
        assert_eq!(db, w);
        assert!(m.kernel_identity_residual() <= TOL);
        assert!(m.alpha_composition_residual() <= TOL);
    }

    #[test]
    fn intertwiner_witness() {
        let m = z2_diag(Phase::one());
        let x = GradedObject::from_grades(z2(), &[0]).unwrap();
        let y = GradedObject::from_grades(z2(), &[1]).unwrap();
        let basis = m.intertwiners(&x, &y).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(m.intertwiner_residual(&x, &y, &m.unitaries()[1]).unwrap() < 1e-15);
        assert!(m.intertwiners(&x, &GradedObject::empty(z2())).unwrap().is_empty());
        assert_eq!(m.intertwiner_dim(&x, &x).unwrap(), 1);
    }

    #[test]
    fn trivial_group_is_vacuously_minimal() {
        let g = Arc::new(FiniteGroup::cyclic(1).unwrap());
        let m = NumericKernelModel::trivial(g, 2).unwrap();
        let r = m.minimality_report(&[1.0], &MinimalityOptions::default()).unwrap();
        assert!(r.minimal && r.conditions_agree);
        assert!(m.minimality_report(&[0.0], &MinimalityOptions::default()).is_err());
    }
}
