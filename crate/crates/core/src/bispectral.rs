//! Coefficient transforms `P_n -> P_n + gamma_n P_{n-1}` and the determinant
//! families `G`, `Delta`, `E` that express the operator coefficients of a
//! family in terms of its expansion coefficients.
//!
//! All three determinants share one shape: a first row of weighted
//! coefficients over a block of the triangle whose remaining rows carry a
//! unit subdiagonal. Entries `b_{m,s}` with `s > m` read as zero.

use num_bigint::BigInt;

use crate::darboux::GammaSequence;
use crate::det::{determinant, Matrix};
use crate::diffop::DiffOperator;
use crate::eigenpoly::CoeffTriangle;
use crate::error::{Error, Result};
use crate::exact::comb::Pascal;
use crate::exact::Rational;

/// `b^(1)_{n,i} = b_{n,i} + gamma_n b_{n-1,i}`, keeping every row monic.
pub fn transform_coeffs(b: &CoeffTriangle, gammas: &GammaSequence) -> Result<CoeffTriangle> {
    if gammas.len() < b.n_max() {
        return Err(Error::DimensionMismatch(format!(
            "triangle reaches n = {} but gammas stop at gamma_{}",
            b.n_max(),
            gammas.len()
        )));
    }
    let rows = (0..=b.n_max())
        .map(|n| {
            let g = gammas.get(n);
            (0..=n)
                .map(|i| {
                    if n == 0 || i == n || g.is_zero() {
                        b.get(n, i)
                    } else {
                        b.get(n, i) + &g * b.get(n - 1, i)
                    }
                })
                .collect()
        })
        .collect();
    CoeffTriangle::from_rows(rows)
}

fn check_nk(b: &CoeffTriangle, n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n || n > b.n_max() {
        return Err(Error::Index(format!(
            "need 1 <= k <= n <= {}, got n = {n}, k = {k}",
            b.n_max()
        )));
    }
    Ok(())
}

/// `k x k` matrix with row 0 equal to `weights[c] * b_{n-k+1+c, n-k}` and
/// row `i >= 1` equal to `b_{n-k+1+c, n-k+i}`.
fn weighted_block(b: &CoeffTriangle, n: usize, k: usize, weights: &[Rational]) -> Matrix {
    let base = n - k;
    (0..k)
        .map(|i| {
            (0..k)
                .map(|c| {
                    let v = b.get(base + 1 + c, base + i);
                    if i == 0 {
                        &weights[c] * v
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect()
}

/// `G_n^(k)`: first-row weights `lambda_{n-k} - lambda_{n-k+c}` for `c = 1..=k`;
/// equals `(-1)^k delta_n^(k)`.
pub fn det_g(b: &CoeffTriangle, lambdas: &[Rational], n: usize, k: usize) -> Result<Rational> {
    check_nk(b, n, k)?;
    if lambdas.len() <= n {
        return Err(Error::Index(format!(
            "eigenvalues up to lambda_{n} needed, got {}",
            lambdas.len()
        )));
    }
    let weights: Vec<Rational> = (1..=k).map(|c| &lambdas[n - k] - &lambdas[n - k + c]).collect();
    Ok(determinant(&weighted_block(b, n, k, &weights)))
}

/// `Delta_{k,n,s}`: first-row weights
/// `C(n-k, s-1) + C(n-k+1, s-1) + ... + C(n-k+c-1, s-1)` for `c = 1..=k`.
pub fn det_delta(q: &CoeffTriangle, n: usize, k: usize, s: usize) -> Result<Rational> {
    check_nk(q, n, k)?;
    if s == 0 {
        return Err(Error::Index("Delta needs s >= 1".into()));
    }
    let pascal = Pascal::new(n);
    let mut acc = BigInt::from(0);
    let weights: Vec<Rational> = (0..k)
        .map(|c| {
            acc += pascal.binom(n - k + c, s - 1);
            Rational::from(acc.clone())
        })
        .collect();
    Ok(determinant(&weighted_block(q, n, k, &weights)))
}

/// `E_{k,n,s}`, of order `k - s - 1`: entries `q_{m+1+c, m+i}` with
/// `m = n - k + s + 1`. Order zero gives 1.
pub fn det_e(q: &CoeffTriangle, n: usize, k: usize, s: usize) -> Result<Rational> {
    check_nk(q, n, k)?;
    if s >= k {
        return Err(Error::Index(format!("E needs s <= k - 1, got k = {k}, s = {s}")));
    }
    let order = k - s - 1;
    let base = n - k + s + 1;
    let m: Matrix = (0..order)
        .map(|i| (0..order).map(|c| q.get(base + 1 + c, base + i)).collect())
        .collect();
    Ok(determinant(&m))
}

/// `E_{k,n,s}` for `s = 0..k`.
fn e_column(q: &CoeffTriangle, n: usize, k: usize) -> Result<Vec<Rational>> {
    (0..k).map(|s| det_e(q, n, k, s)).collect()
}

fn weighted_e(gammas: &GammaSequence, e: &[Rational], n: usize, k: usize, j: usize) -> Rational {
    let start = n - k + j + 1;
    let mut prod = Rational::one();
    let mut total = Rational::zero();
    for r in 1..=k - j {
        prod *= gammas.get(start + r - 1);
        if prod.is_zero() {
            break;
        }
        let ev = &e[j + r - 1];
        if !ev.is_zero() {
            total += &prod * ev;
        }
    }
    total
}

/// `sum_{r=1}^{k-j} gamma_{n-k+j+1} ... gamma_{n-k+j+r} E_{k,n,j+r-1}`.
pub fn gamma_weighted_e_sum(
    q: &CoeffTriangle,
    gammas: &GammaSequence,
    n: usize,
    k: usize,
    j: usize,
) -> Result<Rational> {
    check_nk(q, n, k)?;
    if j >= k {
        return Err(Error::Index(format!("need j < k, got j = {j}, k = {k}")));
    }
    gammas.require(n)?;
    Ok(weighted_e(gammas, &e_column(q, n, k)?, n, k, j))
}

/// Sum over `j` of `(-1)^j weight(n-k+j) b_{n-k+j,n-k}` times the
/// gamma-weighted `E` sum; shared by the necessary condition and the Hermite
/// brute-force sum.
pub(crate) fn alternating_e_sum(
    b: &CoeffTriangle,
    gammas: &GammaSequence,
    n: usize,
    k: usize,
    mut weight: impl FnMut(usize) -> Result<Rational>,
) -> Result<Rational> {
    check_nk(b, n, k)?;
    gammas.require(n)?;
    let e = e_column(b, n, k)?;
    let mut total = Rational::zero();
    for j in 0..k {
        let coeff = b.get(n - k + j, n - k);
        if coeff.is_zero() {
            continue;
        }
        let term = weight(n - k + j)? * coeff * weighted_e(gammas, &e, n, k, j);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// The quantity that must vanish at `(n, k)`, `k` above the order, for the
/// transformed family to be eigenfunctions of an operator sharing the
/// spectrum of `op`:
/// `sum_j (-1)^j (lambda_{m+1} - lambda_m) b_{m,n-k} sum_r gamma... E_{k,n,j+r-1}`
/// with `m = n - k + j`.
pub fn necessary_condition(
    op: &DiffOperator,
    b: &CoeffTriangle,
    gammas: &GammaSequence,
    n: usize,
    k: usize,
) -> Result<Rational> {
    alternating_e_sum(b, gammas, n, k, |m| {
        let gap = op.eigenvalue_difference(m, m + 1)?;
        debug_assert_eq!(gap, op.consecutive_gap(m));
        Ok(gap)
    })
}
