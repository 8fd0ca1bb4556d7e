//! Eigenvalues of small dense real matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};

pub const MAX_DIM: usize = 5;

/// All eigenvalues of a real square matrix of dimension at most 5, with
/// multiplicity, sorted by real part then imaginary part.
pub fn eig_dense(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if m.nrows() != m.ncols() {
        return Err(domain(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    if m.nrows() > MAX_DIM {
        return Err(domain(format!("dimension {} exceeds {MAX_DIM}", m.nrows())));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(domain("matrix has non-finite entries"));
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Convergence("Schur decomposition did not converge".into()))?;
    let mut eigs: Vec<Complex64> = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    sort_eigenvalues(&mut eigs);
    Ok(eigs)
}

pub fn sort_eigenvalues(eigs: &mut [Complex64]) {
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Largest distance in an optimal-greedy pairing of two eigenvalue lists of
/// equal length. Sorting alone is fragile for conjugate pairs whose real
/// parts differ in the last bit.
pub fn max_pairing_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("lists have equal length");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let e = eig_dense(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(e.len(), 3);
        for z in e {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn block_triangular_reads_diagonal() {
        let mut m = DMatrix::<f64>::zeros(5, 5);
        let diag = [1.3, -2.0, 0.5, 4.0, -0.25];
        for i in 0..5 {
            m[(i, i)] = diag[i];
            for j in i + 1..5 {
                m[(i, j)] = (i + 2 * j) as f64 * 0.1;
            }
        }
        let e = eig_dense(&m).unwrap();
        let mut want: Vec<Complex64> = diag.iter().map(|&d| Complex64::new(d, 0.0)).collect();
        sort_eigenvalues(&mut want);
        assert!(max_pairing_distance(&e, &want) < 1e-14);
    }

    #[test]
    fn companion_matrix() {
        // lambda^2 + 3 lambda - 4 = (lambda - 1)(lambda + 4)
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 4.0, -3.0]);
        let e = eig_dense(&m).unwrap();
        assert!((e[0] - Complex64::new(-4.0, 0.0)).norm() < 1e-14);
        assert!((e[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn complex_pair() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        let e = eig_dense(&m).unwrap();
        assert!((e[0] - Complex64::new(0.0, -2.0)).norm() < 1e-14);
        assert!((e[1] - Complex64::new(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn too_large() {
        assert!(eig_dense(&DMatrix::identity(6, 6)).is_err());
    }

    #[test]
    fn transpose_has_same_spectrum() {
        let vals = [
            0.3, -1.2, 0.7, 2.0, 0.1, 1.1, 0.4, -0.6, 0.9, -2.2, 0.05, 0.8, 1.7, -0.3, 0.2, -1.0,
            0.6, 0.0, 0.35, 1.4, -0.9, 0.25, 0.5, -0.45, 1.9,
        ];
        let m = DMatrix::from_row_slice(5, 5, &vals);
        let a = eig_dense(&m).unwrap();
        let b = eig_dense(&m.transpose()).unwrap();
        assert!(max_pairing_distance(&a, &b) < 1e-12);
    }
}
