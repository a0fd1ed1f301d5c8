//! Monic eigenpolynomials `P_n` of a differential operator, computed either by
//! back substitution in the triangular system `(M_{n+1} - lambda_n I) b_n = 0`
//! or by the explicit sum over integer compositions.

use serde::{Deserialize, Serialize};

use crate::diffop::{DeltaTable, DiffOperator};
use crate::error::{Error, Result};
use crate::exact::{Poly, Rational};

/// Default bound on `n` for [`eigenpoly_explicit`].
pub const DEFAULT_COMPOSITION_CAP: usize = 25;

/// Coefficients `b_{n,i}` of a family of monic polynomials, `0 <= i <= n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Rational>>", into = "Vec<Vec<Rational>>")]
pub struct CoeffTriangle {
    rows: Vec<Vec<Rational>>,
}

impl CoeffTriangle {
    /// Builds a triangle from monic polynomials with `deg P_n = n`.
    pub fn from_polys(polys: &[Poly]) -> Result<Self> {
        let rows = polys
            .iter()
            .enumerate()
            .map(|(n, p)| {
                if p.degree() != Some(n) || !p.is_monic() {
                    return Err(Error::DimensionMismatch(format!(
                        "entry {n} is not a monic polynomial of degree {n}: {p}"
                    )));
                }
                Ok(p.coeffs().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        CoeffTriangle::from_rows(rows)
    }

    /// Row `n` must hold `n + 1` coefficients ending in 1.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::DimensionMismatch("empty coefficient triangle".into()));
        }
        for (n, row) in rows.iter().enumerate() {
            if row.len() != n + 1 || !row[n].is_one() {
                return Err(Error::DimensionMismatch(format!(
                    "row {n} must have {} entries with a leading 1",
                    n + 1
                )));
            }
        }
        Ok(CoeffTriangle { rows })
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `b_{n,i}`, zero when `i > n`. Panics if `n > n_max`.
    pub fn get(&self, n: usize, i: usize) -> Rational {
        self.rows[n].get(i).cloned().unwrap_or_default()
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    pub fn poly(&self, n: usize) -> Poly {
        Poly::new(self.rows[n].clone())
    }

    pub fn polys(&self) -> Vec<Poly> {
        (0..self.rows.len()).map(|n| self.poly(n)).collect()
    }

    /// The leading `n_max + 1` rows.
    pub fn truncate(&self, n_max: usize) -> CoeffTriangle {
        CoeffTriangle {
            rows: self.rows[..=n_max.min(self.n_max())].to_vec(),
        }
    }
}

impl TryFrom<Vec<Vec<Rational>>> for CoeffTriangle {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Rational>>) -> Result<Self> {
        CoeffTriangle::from_rows(rows)
    }
}

impl From<CoeffTriangle> for Vec<Vec<Rational>> {
    fn from(t: CoeffTriangle) -> Self {
        t.rows
    }
}

/// Leading `(n+1) x (n+1)` block of the upper-triangular banded matrix `M`
/// whose entry `(m, m+k)` is `delta_{m+k}^(k)` for `0 <= k <= N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MTruncation {
    order: usize,
    rows: Vec<Vec<Rational>>,
}

impl MTruncation {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Entry `(row, col)`; zero below the diagonal and beyond the band.
    pub fn get(&self, row: usize, col: usize) -> Rational {
        if col < row || col - row > self.order {
            return Rational::zero();
        }
        self.rows[row][col].clone()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.rows.clone()
    }

    /// `(M_{n+1} - lambda I) b` for a coefficient vector `b`.
    pub fn residual(&self, lambda: &Rational, b: &[Rational]) -> Vec<Rational> {
        let size = self.size();
        assert_eq!(b.len(), size, "coefficient vector length");
        (0..size)
            .map(|m| {
                let band: Rational = (m..size.min(m + self.order + 1)).map(|c| self.get(m, c) * &b[c]).sum();
                band - lambda * &b[m]
            })
            .collect()
    }
}

pub fn m_truncation(dt: &DeltaTable, n: usize) -> Result<MTruncation> {
    if n > dt.n_max() {
        return Err(Error::Index(format!(
            "truncation size {} exceeds the delta table (n_max = {})",
            n + 1,
            dt.n_max()
        )));
    }
    let order = dt.order();
    let rows = (0..=n)
        .map(|m| {
            (0..=n)
                .map(|c| {
                    if c < m || c - m > order {
                        Rational::zero()
                    } else {
                        dt.get(c, c - m)
                    }
                })
                .collect()
        })
        .collect();
    Ok(MTruncation { order, rows })
}

/// Reports the first `m < n` with `lambda_m = lambda_n`.
fn check_pivots(dt: &DeltaTable, n: usize) -> Result<()> {
    let ln = dt.lambda(n);
    match (0..n).find(|&m| dt.lambda(m) == ln) {
        Some(m) => Err(Error::EigenvalueCollision { m, n }),
        None => Ok(()),
    }
}

/// Back substitution for `b_n` using a precomputed delta table.
pub fn backsub_from_table(dt: &DeltaTable, n: usize) -> Result<Vec<Rational>> {
    if n > dt.n_max() {
        return Err(Error::Index(format!(
            "degree {n} exceeds the delta table (n_max = {})",
            dt.n_max()
        )));
    }
    check_pivots(dt, n)?;
    let order = dt.order();
    let ln = dt.lambda(n);
    let mut b = vec![Rational::zero(); n + 1];
    b[n] = Rational::one();
    for m in (0..n).rev() {
        let rhs: Rational = (1..=order.min(n - m)).map(|k| dt.get(m + k, k) * &b[m + k]).sum();
        // pivot is nonzero by check_pivots
        b[m] = -rhs / (dt.lambda(m) - &ln);
    }
    Ok(b)
}

/// `P_n` by back substitution from the last coefficient upward.
pub fn eigenpoly_backsub(op: &DiffOperator, n: usize) -> Result<Poly> {
    let dt = op.delta_table(n);
    backsub_from_table(&dt, n).map(Poly::new)
}

/// `P_0, ..., P_{n_max}` as a coefficient triangle, sharing one delta table.
pub fn eigen_triangle(op: &DiffOperator, n_max: usize) -> Result<CoeffTriangle> {
    let dt = op.delta_table(n_max);
    let rows = (0..=n_max)
        .map(|n| backsub_from_table(&dt, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoeffTriangle { rows })
}

/// All ordered tuples of positive integers `<= max_part` summing to `total`.
///
/// Output is in lexicographic order of the parts. `total = 0` yields no
/// compositions.
pub fn enumerate_compositions(total: usize, max_part: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in 1..=max_part.min(rest) {
            prefix.push(part);
            go(rest - part, max_part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 && max_part > 0 {
        go(total, max_part, &mut Vec::new(), &mut out);
    }
    out
}

/// The explicit composition-sum value of `b_{n,i}`, parts bounded by `max_part`.
pub fn explicit_coeff(dt: &DeltaTable, n: usize, i: usize, max_part: usize) -> Rational {
    let ln = dt.lambda(n);
    enumerate_compositions(n - i, max_part)
        .iter()
        .map(|parts| {
            let mut index = i;
            let mut term = Rational::one();
            for &part in parts {
                let denom = &ln - dt.lambda(index);
                index += part;
                let num = dt.get(index, part);
                if num.is_zero() {
                    return Rational::zero();
                }
                term = term * num / denom;
            }
            term
        })
        .sum()
}

/// `P_n` from the explicit composition formula with parts pruned to `N`.
pub fn eigenpoly_explicit(op: &DiffOperator, n: usize) -> Result<Poly> {
    eigenpoly_explicit_capped(op, n, DEFAULT_COMPOSITION_CAP)
}

pub fn eigenpoly_explicit_capped(op: &DiffOperator, n: usize, cap: usize) -> Result<Poly> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let dt = op.delta_table(n);
    check_pivots(&dt, n)?;
    let mut coeffs: Vec<Rational> = (0..n).map(|i| explicit_coeff(&dt, n, i, dt.order())).collect();
    coeffs.push(Rational::one());
    Ok(Poly::new(coeffs))
}

/// Whether `L p = lambda p` holds exactly.
pub fn verify_eigen(op: &DiffOperator, p: &Poly, lambda: &Rational) -> bool {
    op.apply(p) == p.scale(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn hermite() -> DiffOperator {
        DiffOperator::new(None, vec![Poly::zero(), Poly::from_ints(&[0, -2]), Poly::one()]).unwrap()
    }

    fn shift_only() -> DiffOperator {
        DiffOperator::new(None, vec![Poly::zero(), Poly::one()]).unwrap()
    }

    #[test]
    fn m_truncation_examples() {
        let dt = hermite().delta_table(2);
        let m = m_truncation(&dt, 2).unwrap();
        let expect = [[0, 0, 2], [0, -2, 0], [0, 0, -4]];
        for (r, row) in expect.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(m.get(r, c), rat(v, 1), "({r},{c})");
            }
        }
        let m0 = m_truncation(&dt, 0).unwrap();
        assert_eq!(m0.to_dense(), vec![vec![Rational::zero()]]);
        assert!(matches!(m_truncation(&dt, 3), Err(Error::Index(_))));
    }

    #[test]
    fn m_truncation_band_and_diagonal() {
        let op = DiffOperator::new(
            None,
            vec![Poly::zero(), Poly::from_ints(&[1, -1]), Poly::from_ints(&[0, 1])],
        )
        .unwrap();
        let dt = op.delta_table(9);
        let m = m_truncation(&dt, 9).unwrap();
        for r in 0..10 {
            assert_eq!(m.get(r, r), dt.lambda(r));
            for c in 0..10 {
                if c > r + 2 || c < r {
                    assert!(m.to_dense()[r][c].is_zero());
                }
            }
        }
    }

    #[test]
    fn backsub_examples() {
        let h = hermite();
        assert_eq!(eigenpoly_backsub(&h, 0).unwrap(), Poly::one());
        assert_eq!(
            eigenpoly_backsub(&h, 2).unwrap(),
            Poly::new(vec![rat(-1, 2), rat(0, 1), rat(1, 1)])
        );
        let h3 = eigenpoly_backsub(&h, 3).unwrap();
        assert_eq!(h3.coeff(1), rat(-3, 2));
        assert_eq!(h3, Poly::new(vec![rat(0, 1), rat(-3, 2), rat(0, 1), rat(1, 1)]));
    }

    #[test]
    fn collisions_abort() {
        assert_eq!(
            eigenpoly_backsub(&shift_only(), 1),
            Err(Error::EigenvalueCollision { m: 0, n: 1 })
        );
        assert_eq!(
            eigenpoly_explicit(&shift_only(), 2),
            Err(Error::EigenvalueCollision { m: 0, n: 2 })
        );
        assert_eq!(eigenpoly_backsub(&shift_only(), 0).unwrap(), Poly::one());
    }

    #[test]
    fn compositions() {
        let c = enumerate_compositions(3, 3);
        assert_eq!(c, vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]);
        let c = enumerate_compositions(4, 2);
        assert_eq!(c.len(), 5);
        for want in [
            vec![2, 2],
            vec![2, 1, 1],
            vec![1, 2, 1],
            vec![1, 1, 2],
            vec![1, 1, 1, 1],
        ] {
            assert!(c.contains(&want));
        }
        assert_eq!(enumerate_compositions(1, 4), vec![vec![1]]);
        for total in 1..=10 {
            let all = enumerate_compositions(total, total);
            assert_eq!(all.len(), 1 << (total - 1));
            assert!(all.iter().all(|p| p.iter().sum::<usize>() == total));
        }
    }

    #[test]
    fn explicit_examples() {
        let h = hermite();
        assert_eq!(eigenpoly_explicit(&h, 1).unwrap(), Poly::x());
        let h4 = eigenpoly_explicit(&h, 4).unwrap();
        assert_eq!(
            h4,
            Poly::new(vec![rat(3, 4), rat(0, 1), rat(-3, 1), rat(0, 1), rat(1, 1)])
        );
        let dt = h.delta_table(2);
        assert_eq!(explicit_coeff(&dt, 2, 0, 2), rat(-1, 2));
        assert_eq!(
            eigenpoly_explicit_capped(&h, 6, 5),
            Err(Error::CapExceeded { n: 6, cap: 5 })
        );
    }

    #[test]
    fn verify_examples() {
        let h = hermite();
        let h2 = Poly::new(vec![rat(-1, 2), rat(0, 1), rat(1, 1)]);
        assert!(verify_eigen(&h, &h2, &rat(-4, 1)));
        assert!(!verify_eigen(&h, &Poly::from_ints(&[0, 0, 1]), &rat(-4, 1)));
        assert!(verify_eigen(&shift_only(), &Poly::one(), &Rational::zero()));
    }

    #[test]
    fn triangle_validation() {
        assert!(CoeffTriangle::from_polys(&[Poly::one(), Poly::from_ints(&[0, 2])]).is_err());
        assert!(CoeffTriangle::from_polys(&[Poly::one(), Poly::from_ints(&[0, 0, 1])]).is_err());
        let t = CoeffTriangle::from_polys(&[Poly::one(), Poly::from_ints(&[3, 1])]).unwrap();
        assert_eq!(t.get(1, 0), rat(3, 1));
        assert!(t.get(1, 5).is_zero());
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"[["1"],["3","1"]]"#);
        let back: CoeffTriangle = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<CoeffTriangle>(r#"[["1"],["3","2"]]"#).is_err());
    }
}
