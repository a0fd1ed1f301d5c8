//! Exact determinants of small dense rational matrices.

use crate::exact::Rational;

/// Square dense matrix stored row-major.
pub type Matrix = Vec<Vec<Rational>>;

/// Determinant by fraction-free (Bareiss) elimination.
///
/// Row swaps pick the first nonzero entry in the pivot column, which for the
/// unit-subdiagonal matrices used throughout this crate is the structural `1`
/// whenever the diagonal entry vanishes. The empty matrix has determinant 1.
///
/// Panics if the matrix is not square.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut a: Matrix = m.to_vec();
    let mut negate = false;
    let mut prev = Rational::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = if n == 0 {
        Rational::one()
    } else {
        a[n - 1][n - 1].clone()
    };
    if negate {
        -d
    } else {
        d
    }
}
