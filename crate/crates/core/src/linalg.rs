//! Small dense complex matrix helpers shared by the numeric layers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// e_{ij} in an n×n matrix algebra.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// Kronecker product, `a` outer and `b` inner.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Operator norm (largest singular value). Empty matrices have norm 0.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

/// ‖a*a − 1‖ + ‖aa* − 1‖.
pub fn unitarity_defect(a: &CMatrix) -> f64 {
    if a.nrows() != a.ncols() {
        return f64::INFINITY;
    }
    let n = a.nrows();
    let ad = a.adjoint();
    op_norm(&(&ad * a - identity(n))) + op_norm(&(a * &ad - identity(n)))
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// diagonal phases of R divided out.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Discrete Fourier matrix F_{jk} = ω^{jk}/√n.
pub fn fourier(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |j, k| {
        Complex64::from_polar(s, std::f64::consts::TAU * (j * k) as f64 / n as f64)
    })
}

/// Permutation matrix sending basis vector `j` to `perm[j]`.
pub fn permutation(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let mut m = CMatrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = ONE;
    }
    m
}

pub fn diagonal(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..5 {
            assert!(unitarity_defect(&random_unitary(n, &mut rng)) < 1e-12);
        }
        assert!(unitarity_defect(&fourier(3)) < 1e-12);
        assert!(unitarity_defect(&permutation(&[2, 0, 1])) < 1e-15);
    }

    #[test]
    fn kron_layout() {
        let a = matrix_unit(2, 0, 1);
        let b = identity(3);
        let k = kron(&a, &b);
        assert_eq!(k[(0, 3)], ONE);
        assert_eq!(k[(2, 5)], ONE);
        assert_eq!(op_norm(&k), 1.0);
        assert_eq!(op_norm(&CMatrix::zeros(0, 0)), 0.0);
    }
}
