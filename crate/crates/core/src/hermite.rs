//! Hermite polynomials under Geronimus transformations: the operator, its
//! Jacobi matrix, the admissible `gamma` sequences, and the sum `Sigma_H(n, k)`
//! whose non-vanishing rules out a differential operator for the transformed
//! family.

use num_bigint::BigInt;

use crate::bispectral::alternating_e_sum;
use crate::darboux::GammaSequence;
use crate::diffop::DiffOperator;
use crate::eigenpoly::{eigen_triangle, CoeffTriangle};
use crate::error::{Error, Result};
use crate::exact::comb::{binomial, factorial};
use crate::exact::{Poly, Rational};
use crate::recurrence::BandedHessenberg;

/// `y'' - 2x y'`, with eigenvalues `-2n`.
pub fn hermite_operator() -> DiffOperator {
    DiffOperator::new(
        Some("hermite".into()),
        vec![Poly::zero(), Poly::from_ints(&[0, -2]), Poly::one()],
    )
    .expect("Hermite coefficients satisfy the degree bound")
}

/// Zero diagonal, subdiagonal `n / 2`.
pub fn hermite_recurrence_matrix(n_max: usize) -> BandedHessenberg {
    BandedHessenberg::from_fn(1, n_max, |n, k| {
        if k + 1 == n {
            Rational::new(BigInt::from(n), BigInt::from(2))
        } else {
            Rational::zero()
        }
    })
    .expect("tridiagonal rows have the right shape")
}

fn fact(n: usize) -> Rational {
    Rational::from(factorial(n))
}

fn pow2(e: usize) -> Rational {
    Rational::from(BigInt::from(1) << e)
}

/// `b_{n,n-2s} = (-1)^s n! / (4^s (n-2s)! s!)`.
pub fn hermite_coeff(n: usize, s: usize) -> Result<Rational> {
    if 2 * s > n {
        return Err(Error::Index(format!("need 2s <= n, got n = {n}, s = {s}")));
    }
    let v = fact(n) / (pow2(2 * s) * fact(n - 2 * s) * fact(s));
    Ok(if s % 2 == 1 { -v } else { v })
}

/// Monic Hermite triangle from [`hermite_coeff`]; odd gaps are zero.
pub fn hermite_triangle(n_max: usize) -> CoeffTriangle {
    let rows = (0..=n_max)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    let gap = n - i;
                    if gap % 2 == 1 {
                        Rational::zero()
                    } else {
                        hermite_coeff(n, gap / 2).expect("gap within range")
                    }
                })
                .collect()
        })
        .collect();
    CoeffTriangle::from_rows(rows).expect("rows are monic")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaMode {
    /// `gamma_{m+1} = -m / (2 gamma_m)`; the sequence for which the transformed
    /// family satisfies a three-term recurrence.
    Constrained,
    /// `gamma_m = gamma_2 + 1/(2 gamma_1) - (m-1)/(2 gamma_{m-1})` for `m >= 3`.
    General(Rational),
}

/// `gamma_1, ..., gamma_{m_max}` starting from `gamma1`.
pub fn gamma_sequence(gamma1: &Rational, m_max: usize, mode: &GammaMode) -> Result<GammaSequence> {
    if gamma1.is_zero() {
        return Err(Error::ZeroGamma(1));
    }
    let mut g: Vec<Rational> = Vec::with_capacity(m_max);
    if m_max == 0 {
        return Ok(GammaSequence::new(g));
    }
    g.push(gamma1.clone());
    let offset = match mode {
        GammaMode::Constrained => Rational::zero(),
        GammaMode::General(gamma2) => {
            if m_max >= 2 {
                g.push(gamma2.clone());
            }
            gamma2 + (Rational::from(2) * gamma1).checked_recip().expect("gamma1 nonzero")
        }
    };
    while g.len() < m_max {
        let m = g.len() + 1;
        let prev = &g[m - 2];
        let step = Rational::from(m - 1)
            .checked_div(&(Rational::from(2) * prev))
            .ok_or(Error::ZeroGamma(m - 1))?;
        g.push(&offset - step);
    }
    Ok(GammaSequence::new(g))
}

/// Closed form of the constrained sequence:
/// `gamma_{2m} = -[(2m-1)(2m-3)...3] / [(2m-2)...2] / (2 gamma_1)` and
/// `gamma_{2m+1} = [2m(2m-2)...2] / [(2m-1)...3] gamma_1`.
pub fn gamma_closed(gamma1: &Rational, m: usize) -> Result<Rational> {
    if gamma1.is_zero() {
        return Err(Error::ZeroGamma(1));
    }
    if m == 0 {
        return Err(Error::Index("gammas are indexed from 1".into()));
    }
    let half = m / 2;
    if m.is_multiple_of(2) {
        let num: BigInt = (1..half).map(|t| BigInt::from(2 * t + 1)).product();
        let den: BigInt = (1..half).map(|t| BigInt::from(2 * t)).product();
        Ok(-(Rational::new(num, den) / (Rational::from(2) * gamma1)))
    } else {
        let num: BigInt = (1..=half).map(|t| BigInt::from(2 * t)).product();
        let den: BigInt = (1..=half).map(|t| BigInt::from(2 * t - 1)).product();
        Ok(Rational::new(num, den) * gamma1)
    }
}

/// `E_{k,n,j+r-1}` over the Hermite triangle: zero when `t = k - j - r` is odd,
/// otherwise `n! / ((n-t)! (t/2)! 2^t)`.
pub fn det_e_hermite_closed(n: usize, k: usize, j: usize, r: usize) -> Result<Rational> {
    if r == 0 || k > n || j + r > k {
        return Err(Error::Index(format!(
            "need r >= 1, j + r <= k <= n, got n = {n}, k = {k}, j = {j}, r = {r}"
        )));
    }
    let t = k - j - r;
    if t % 2 == 1 {
        return Ok(Rational::zero());
    }
    Ok(fact(n) / (fact(n - t) * fact(t / 2) * pow2(t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SMode {
    Sum,
    Closed,
}

/// `S_M(m) = sum_{r=0}^{M} (-1/4)^r (2m+2r-1)! / (r! (m+r-1)!) C(m-1+M, m-1+r)`.
pub fn s_value(big_m: usize, m: usize, mode: SMode) -> Result<Rational> {
    if m == 0 {
        return Err(Error::Index("S_M(m) needs m >= 1".into()));
    }
    match mode {
        SMode::Sum => Ok((0..=big_m)
            .map(|r| {
                let v = fact(2 * m + 2 * r - 1) / (fact(r) * fact(m + r - 1) * pow2(2 * r))
                    * Rational::from(binomial(m - 1 + big_m, m - 1 + r));
                if r % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .sum()),
        SMode::Closed => {
            let num: BigInt = (1..=big_m as i64).map(|t| BigInt::from(2 * t - 3)).product();
            let s1 = Rational::from(num) / (fact(big_m) * pow2(big_m));
            Ok(fact(2 * m - 1) / fact(m - 1) * s1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMode {
    /// Determinant sum over the back-substituted Hermite triangle.
    Bruteforce,
    /// Double sum using the closed `E` values.
    Sum,
    /// Product form through `S_M(m)`; defined for `n` even and `k` odd.
    Closed,
}

fn check_sigma(n: usize, k: usize, gamma1: &Rational) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Index(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if gamma1.is_zero() {
        return Err(Error::ZeroGamma(1));
    }
    Ok(())
}

/// `Sigma_H(n, k)` for the constrained sequence starting at `gamma1`.
pub fn sigma_h(n: usize, k: usize, gamma1: &Rational, mode: SigmaMode) -> Result<Rational> {
    check_sigma(n, k, gamma1)?;
    match mode {
        SigmaMode::Bruteforce => {
            let b = eigen_triangle(&hermite_operator(), n)?;
            let gammas = gamma_sequence(gamma1, n, &GammaMode::Constrained)?;
            alternating_e_sum(&b, &gammas, n, k, |_| Ok(Rational::one()))
        }
        SigmaMode::Sum => {
            let gammas = gamma_sequence(gamma1, n, &GammaMode::Constrained)?;
            let mut total = Rational::zero();
            for j in (0..k).step_by(2) {
                let outer = fact(n - k + j) / (pow2(j) * fact(n - k) * fact(j / 2));
                let mut inner = Rational::zero();
                for s in (0..k - j).step_by(2) {
                    let e = fact(n) / (fact(n - s) * fact(s / 2) * pow2(s));
                    inner += gammas.product(n - k + j + 1, n - s) * e;
                }
                let term = outer * inner;
                if (j / 2) % 2 == 1 {
                    total -= term;
                } else {
                    total += term;
                }
            }
            Ok(total)
        }
        SigmaMode::Closed => {
            if n % 2 == 1 || k.is_multiple_of(2) {
                return Err(Error::Parity { n, k });
            }
            let pre = fact(n) / (gamma1 * fact(n / 2) * fact(n - k) * pow2(n));
            let pre = if k.div_ceil(2) % 2 == 1 { -pre } else { pre };
            Ok(pre * s_value((k - 1) / 2, (n - k).div_ceil(2), SMode::Closed)?)
        }
    }
}

/// The intermediate double sum over `r` and `q` from which the closed form is
/// read off; `n` even, `k` odd.
pub fn sigma_h_double_sum(n: usize, k: usize, gamma1: &Rational) -> Result<Rational> {
    check_sigma(n, k, gamma1)?;
    if n % 2 == 1 || k.is_multiple_of(2) {
        return Err(Error::Parity { n, k });
    }
    let half_k = (k - 1) / 2;
    let half_gap = (n - k - 1) / 2;
    let mut total = Rational::zero();
    for r in 0..=half_k {
        let outer = fact(n - k + 2 * r) / (pow2(2 * r) * fact(half_gap + r) * fact(r));
        let inner: Rational = (0..=half_k - r)
            .map(|q| {
                let v = (fact(q) * fact(n / 2 - q))
                    .checked_recip()
                    .expect("factorials are positive");
                if q % 2 == 0 {
                    -v
                } else {
                    v
                }
            })
            .sum();
        total += outer * inner;
    }
    Ok(fact(n) / (gamma1 * fact(n - k) * pow2(n)) * total)
}
