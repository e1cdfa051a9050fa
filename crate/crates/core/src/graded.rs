//! Finite weighted G-graded point sets `(X, μ_X, g_X)` and their L² spaces.
//!
//! Points of a product `X × Y` are ordered row-major, `(x, y) ↦ x·|Y| + y`.
//! Under this convention the canonical isomorphism `L²(X×Y) → L²X ⊗ L²Y` is the
//! identity matrix and reassociating `((x,y),z) ↔ (x,(y,z))` does not move any
//! index.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::group::{is_cocycle, Cochain, FiniteGroup, Phase};
use crate::linalg::{self, CMatrix};

#[derive(Debug, Clone)]
pub struct GradedObject {
    group: Arc<FiniteGroup>,
    labels: Vec<String>,
    weights: Vec<f64>,
    grades: Vec<usize>,
}

impl PartialEq for GradedObject {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group)
            && self.labels == other.labels
            && self.weights == other.weights
            && self.grades == other.grades
    }
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GradedObject {
    /// Points given as `(label, weight, grade)` records.
    pub fn new(group: Arc<FiniteGroup>, points: Vec<(String, f64, usize)>) -> Result<Self> {
        let mut labels = Vec::with_capacity(points.len());
        let mut weights = Vec::with_capacity(points.len());
        let mut grades = Vec::with_capacity(points.len());
        for (label, w, g) in points {
            if !(w > 0.0 && w.is_finite()) {
                return Err(invalid(format!("weight of point {label:?} must be positive, got {w}")));
            }
            if g >= group.order() {
                return Err(invalid(format!(
                    "grade {g} of point {label:?} is not an element of a group of order {}",
                    group.order()
                )));
            }
            labels.push(label);
            weights.push(w);
            grades.push(g);
        }
        Ok(Self { group, labels, weights, grades })
    }

    /// Points labelled by their index, all with weight 1.
    pub fn from_grades(group: Arc<FiniteGroup>, grades: &[usize]) -> Result<Self> {
        Self::new(
            group,
            grades.iter().enumerate().map(|(i, &g)| (format!("p{i}"), 1.0, g)).collect(),
        )
    }

    /// The singleton with weight 1 and trivial grade.
    pub fn unit(group: Arc<FiniteGroup>) -> Self {
        Self::new(group, vec![("e".to_string(), 1.0, 0)]).expect("unit object is valid")
    }

    pub fn empty(group: Arc<FiniteGroup>) -> Self {
        Self { group, labels: vec![], weights: vec![], grades: vec![] }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn grades(&self) -> &[usize] {
        &self.grades
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    /// Dimension of L²X.
    pub fn l2_dim(&self) -> usize {
        self.len()
    }

    /// Indices of the points of grade `g`.
    pub fn fiber(&self, g: usize) -> Vec<usize> {
        self.grades.iter().enumerate().filter(|(_, &h)| h == g).map(|(i, _)| i).collect()
    }

    /// Same points with every weight multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        let pts = self
            .labels
            .iter()
            .zip(&self.weights)
            .zip(&self.grades)
            .map(|((l, w), g)| (l.clone(), w * factor, *g))
            .collect();
        Self::new(self.group.clone(), pts)
    }

    fn check_group(&self, other: &GradedObject) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(invalid("objects are graded by different groups"))
        }
    }

    /// Cartesian product with product measure and grade `g_X(x)·g_Y(y)`.
    pub fn tensor(&self, other: &GradedObject) -> Result<GradedObject> {
        self.check_group(other)?;
        let mut pts = Vec::with_capacity(self.len() * other.len());
        for x in 0..self.len() {
            for y in 0..other.len() {
                pts.push((
                    format!("({},{})", self.labels[x], other.labels[y]),
                    self.weights[x] * other.weights[y],
                    self.group.mul(self.grades[x], other.grades[y]),
                ));
            }
        }
        GradedObject::new(self.group.clone(), pts)
    }

    /// Weighted inner product Σ μ(x) ξ(x) conj(η(x)).
    pub fn inner(&self, xi: &[Complex64], eta: &[Complex64]) -> Complex64 {
        self.weights.iter().zip(xi.iter().zip(eta)).map(|(w, (a, b))| a * b.conj() * *w).sum()
    }

    pub fn norm(&self, xi: &[Complex64]) -> f64 {
        self.inner(xi, xi).re.max(0.0).sqrt()
    }

    /// The projection-valued measure of the grading.
    pub fn pvm(&self) -> Pvm {
        let n = self.len();
        let projections = self
            .group
            .elements()
            .map(|g| {
                let diag: Vec<Complex64> = self
                    .grades
                    .iter()
                    .map(|&h| if h == g { linalg::ONE } else { linalg::ZERO })
                    .collect();
                if n == 0 {
                    CMatrix::zeros(0, 0)
                } else {
                    linalg::diagonal(&diag)
                }
            })
            .collect();
        Pvm { projections }
    }
}

/// Grade-fiber projections E_X(g), one per group element.
#[derive(Debug, Clone)]
pub struct Pvm {
    pub projections: Vec<CMatrix>,
}

impl Pvm {
    /// Largest deviation from idempotence, self-adjointness, orthogonality and
    /// completeness.
    pub fn defect(&self) -> f64 {
        let Some(first) = self.projections.first() else { return 0.0 };
        let n = first.nrows();
        let mut worst: f64 = 0.0;
        let mut total = CMatrix::zeros(n, n);
        for (g, p) in self.projections.iter().enumerate() {
            worst = worst.max(linalg::op_norm(&(p * p - p)));
            worst = worst.max(linalg::op_norm(&(p.adjoint() - p)));
            for q in &self.projections[g + 1..] {
                worst = worst.max(linalg::op_norm(&(p * q)));
            }
            total += p;
        }
        worst.max(linalg::op_norm(&(total - linalg::identity(n))))
    }
}

/// A C(G)-equivariant map L²X → L²Y in the point bases.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub source: GradedObject,
    pub target: GradedObject,
    pub matrix: CMatrix,
}

impl GradedMap {
    /// Checks shape and grade-block support.
    pub fn new(source: GradedObject, target: GradedObject, matrix: CMatrix) -> Result<Self> {
        source.check_group(&target)?;
        if matrix.nrows() != target.len() || matrix.ncols() != source.len() {
            return Err(invalid(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                target.len(),
                source.len()
            )));
        }
        for y in 0..target.len() {
            for x in 0..source.len() {
                if target.grades[y] != source.grades[x] && matrix[(y, x)] != linalg::ZERO {
                    return Err(invalid(format!(
                        "entry ({y},{x}) connects grades {} and {}; not C(G)-equivariant",
                        target.grades[y], source.grades[x]
                    )));
                }
            }
        }
        Ok(Self { source, target, matrix })
    }

    pub fn identity(x: &GradedObject) -> Self {
        Self { source: x.clone(), target: x.clone(), matrix: linalg::identity(x.len()) }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GradedMap) -> Result<GradedMap> {
        if first.target != self.source {
            return Err(invalid("maps are not composable"));
        }
        GradedMap::new(first.source.clone(), self.target.clone(), &self.matrix * &first.matrix)
    }

    /// Adjoint for the weighted inner products:
    /// (t*)_{x,y} = conj(t_{y,x}) · μ_Y(y) / μ_X(x).
    pub fn adjoint(&self) -> GradedMap {
        let (src, tgt) = (&self.source, &self.target);
        let matrix = CMatrix::from_fn(src.len(), tgt.len(), |x, y| {
            self.matrix[(y, x)].conj() * (tgt.weights[y] / src.weights[x])
        });
        GradedMap { source: tgt.clone(), target: src.clone(), matrix }
    }

    pub fn apply(&self, xi: &[Complex64]) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(xi);
        (&self.matrix * v).iter().copied().collect()
    }
}

/// Matrix units e_{y,x} for every pair of points with equal grade.
pub fn hom_basis(x: &GradedObject, y: &GradedObject) -> Result<Vec<GradedMap>> {
    x.check_group(y)?;
    let mut out = Vec::new();
    for yi in 0..y.len() {
        for xi in 0..x.len() {
            if y.grades[yi] == x.grades[xi] {
                let mut m = CMatrix::zeros(y.len(), x.len());
                m[(yi, xi)] = linalg::ONE;
                out.push(GradedMap { source: x.clone(), target: y.clone(), matrix: m });
            }
        }
    }
    Ok(out)
}

/// Σ_g |X_g|·|Y_g|.
pub fn hom_dimension(x: &GradedObject, y: &GradedObject) -> usize {
    x.group.elements().map(|g| x.fiber(g).len() * y.fiber(g).len()).sum()
}

/// The canonical unitary L²(X×Y) → L²X ⊗ L²Y; the identity in row-major order.
pub fn iota(x: &GradedObject, y: &GradedObject) -> CMatrix {
    linalg::identity(x.len() * y.len())
}

/// Diagonal entries ω(g_X(x), g_Y(y), g_Z(z)) over the points of X×Y×Z.
pub fn associator_phase(
    x: &GradedObject,
    y: &GradedObject,
    z: &GradedObject,
    omega: &Cochain,
) -> Result<Vec<Phase>> {
    x.check_group(y)?;
    y.check_group(z)?;
    if !is_cocycle(&x.group, omega) {
        return Err(invalid("associator requires a 3-cocycle on the ambient group"));
    }
    let mut out = Vec::with_capacity(x.len() * y.len() * z.len());
    for &gx in &x.grades {
        for &gy in &y.grades {
            for &gz in &z.grades {
                out.push(omega.get(&[gx, gy, gz]));
            }
        }
    }
    Ok(out)
}

pub fn associator_matrix(
    x: &GradedObject,
    y: &GradedObject,
    z: &GradedObject,
    omega: &Cochain,
) -> Result<CMatrix> {
    let phases = associator_phase(x, y, z, omega)?;
    let diag: Vec<Complex64> = phases.iter().map(|p| p.to_complex()).collect();
    Ok(if diag.is_empty() { CMatrix::zeros(0, 0) } else { linalg::diagonal(&diag) })
}

/// [α^ω f](x,(y,z)) = ω(g_X(x), g_Y(y), g_Z(z)) · f((x,y),z).
pub fn alpha_omega_action(
    x: &GradedObject,
    y: &GradedObject,
    z: &GradedObject,
    omega: &Cochain,
    f: &[Complex64],
) -> Result<Vec<Complex64>> {
    let phases = associator_phase(x, y, z, omega)?;
    if f.len() != phases.len() {
        return Err(invalid(format!("vector has length {}, expected {}", f.len(), phases.len())));
    }
    Ok(f.iter().zip(&phases).map(|(v, p)| v * p.to_complex()).collect())
}

/// Inverse of [`alpha_omega_action`].
pub fn alpha_omega_inverse(
    x: &GradedObject,
    y: &GradedObject,
    z: &GradedObject,
    omega: &Cochain,
    f: &[Complex64],
) -> Result<Vec<Complex64>> {
    alpha_omega_action(x, y, z, &omega.inverse(), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard_cyclic_3cocycle;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2).unwrap())
    }

    #[test]
    fn dims_and_tensor() {
        let g = z2();
        assert_eq!(GradedObject::empty(g.clone()).l2_dim(), 0);
        let x = GradedObject::from_grades(g.clone(), &[0, 1, 1]).unwrap();
        let y = GradedObject::from_grades(g.clone(), &[1, 0]).unwrap();
        assert_eq!(x.l2_dim(), 3);
        let xy = y.tensor(&x).unwrap();
        assert_eq!(xy.l2_dim(), 6);
        assert_eq!(xy.grades(), &[1, 0, 0, 0, 1, 1]);
        let u = GradedObject::unit(g.clone());
        let xu = x.tensor(&u).unwrap();
        assert_eq!(xu.grades(), x.grades());
        assert_eq!(xu.weights(), x.weights());
    }

    #[test]
    fn product_measure() {
        let g = z2();
        let a = GradedObject::new(g.clone(), vec![("a".into(), 2.0, 1)]).unwrap();
        let b = GradedObject::new(g.clone(), vec![("b".into(), 3.0, 1)]).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.weights(), &[6.0]);
        assert_eq!(ab.grades(), &[0]);
    }

    #[test]
    fn invalid_points() {
        let g = z2();
        assert!(GradedObject::new(g.clone(), vec![("a".into(), 0.0, 0)]).is_err());
        assert!(GradedObject::new(g.clone(), vec![("a".into(), 1.0, 2)]).is_err());
        let z3 = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let x = GradedObject::unit(g);
        let y = GradedObject::unit(z3);
        assert!(x.tensor(&y).is_err());
    }

    #[test]
    fn hom_basis_counts() {
        let g = z2();
        let x = GradedObject::from_grades(g.clone(), &[0, 0]).unwrap();
        let y = GradedObject::from_grades(g.clone(), &[0]).unwrap();
        assert_eq!(hom_basis(&x, &y).unwrap().len(), 2);
        let b = GradedObject::from_grades(g.clone(), &[0, 0]).unwrap();
        let c = GradedObject::from_grades(g.clone(), &[1]).unwrap();
        assert!(hom_basis(&b, &c).unwrap().is_empty());
        let basis = hom_basis(&x, &x).unwrap();
        let id = linalg::identity(2);
        for i in 0..2 {
            assert!(basis.iter().any(|t| t.matrix[(i, i)] == id[(i, i)]));
        }
    }

    #[test]
    fn grade_block_enforced() {
        let g = z2();
        let x = GradedObject::from_grades(g.clone(), &[0]).unwrap();
        let y = GradedObject::from_grades(g.clone(), &[1]).unwrap();
        assert!(GradedMap::new(x, y, linalg::identity(1)).is_err());
    }

    #[test]
    fn weighted_adjoint() {
        let g = z2();
        let x = GradedObject::new(g.clone(), vec![("x".into(), 2.0, 0)]).unwrap();
        let y = GradedObject::new(g.clone(), vec![("y".into(), 1.0, 0)]).unwrap();
        let t = GradedMap::new(x.clone(), y.clone(), linalg::identity(1)).unwrap();
        let ts = t.adjoint();
        assert_eq!(ts.matrix[(0, 0)], Complex64::new(0.5, 0.0));
        // pairing identity on basis vectors
        let e = [linalg::ONE];
        let lhs = y.inner(&t.apply(&e), &e);
        let rhs = x.inner(&e, &ts.apply(&e));
        assert!((lhs - rhs).norm() < 1e-15);
        let id = GradedMap::identity(&x);
        assert_eq!(id.adjoint().matrix, id.matrix);
    }

    #[test]
    fn pvm_is_complete() {
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let x = GradedObject::from_grades(g, &[0, 2, 2, 1]).unwrap();
        assert!(x.pvm().defect() < 1e-15);
    }

    #[test]
    fn associator_values() {
        let g = z2();
        let w = standard_cyclic_3cocycle(2, 1).unwrap();
        let one = GradedObject::from_grades(g.clone(), &[1]).unwrap();
        let ph = associator_phase(&one, &one, &one, &w).unwrap();
        assert_eq!(ph, vec![Phase::new(1, 2)]);
        let m = associator_matrix(&one, &one, &one, &w).unwrap();
        assert!((m[(0, 0)] + linalg::ONE).norm() < 1e-15);
        let e = GradedObject::from_grades(g.clone(), &[0, 0]).unwrap();
        assert!(associator_phase(&e, &e, &e, &w).unwrap().iter().all(Phase::is_one));
        let triv = Cochain::trivial(&g, 3).unwrap();
        let x = GradedObject::from_grades(g.clone(), &[0, 1]).unwrap();
        assert!(associator_phase(&x, &x, &x, &triv).unwrap().iter().all(Phase::is_one));
        let bad = Cochain::from_entries(&g, 3, &[(vec![1, 1, 1], Phase::new(1, 4))]).unwrap();
        assert!(associator_phase(&x, &x, &x, &bad).is_err());
    }

    #[test]
    fn alpha_action_trivial_and_length() {
        let g = z2();
        let x = GradedObject::from_grades(g.clone(), &[0, 1]).unwrap();
        let triv = Cochain::trivial(&g, 3).unwrap();
        let f: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, 1.0)).collect();
        assert_eq!(alpha_omega_action(&x, &x, &x, &triv, &f).unwrap(), f);
        assert!(alpha_omega_action(&x, &x, &x, &triv, &f[..7]).is_err());
    }

    #[test]
    fn empty_objects_are_legal() {
        let g = z2();
        let e = GradedObject::empty(g.clone());
        let x = GradedObject::from_grades(g.clone(), &[1]).unwrap();
        assert_eq!(e.tensor(&x).unwrap().l2_dim(), 0);
        assert!(hom_basis(&e, &x).unwrap().is_empty());
        assert_eq!(iota(&e, &x).nrows(), 0);
        assert!(e.pvm().defect() == 0.0);
        let w = standard_cyclic_3cocycle(2, 1).unwrap();
        assert!(associator_phase(&e, &x, &x, &w).unwrap().is_empty());
    }
}
