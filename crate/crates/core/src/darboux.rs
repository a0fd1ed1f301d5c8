//! UL (Geronimus) factorizations of `J - C I`, the rotated products that
//! define Geronimus transforms, and conjugation `T J T^{-1}` by the unit lower
//! bidiagonal matrix `T` with subdiagonal `gamma_1, gamma_2, ...`.
//!
//! `T^{-1}` is never formed; the entries of `T J T^{-1}` come from the
//! column recursion of `D T = T J`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::recurrence::BandedHessenberg;

/// `gamma_1, gamma_2, ...`, one-based; `gamma_0` reads as zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GammaSequence {
    gammas: Vec<Rational>,
}

impl GammaSequence {
    /// `gammas[0]` is `gamma_1`.
    pub fn new(gammas: Vec<Rational>) -> Self {
        GammaSequence { gammas }
    }

    pub fn zeros(m: usize) -> Self {
        GammaSequence::new(vec![Rational::zero(); m])
    }

    /// Largest index covered.
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// `gamma_i`; zero for `i = 0`. Panics beyond [`GammaSequence::len`].
    pub fn get(&self, i: usize) -> Rational {
        if i == 0 {
            Rational::zero()
        } else {
            self.gammas[i - 1].clone()
        }
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.gammas
    }

    pub fn require(&self, top: usize) -> Result<()> {
        if top > self.len() {
            Err(Error::Index(format!(
                "gamma_{top} needed but the sequence stops at gamma_{}",
                self.len()
            )))
        } else {
            Ok(())
        }
    }

    /// `gamma_from * gamma_{from+1} * ... * gamma_to`; 1 when `to < from`.
    pub fn product(&self, from: usize, to: usize) -> Rational {
        (from..=to).map(|i| self.get(i)).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BidiagonalKind {
    Upper,
    Lower,
}

/// Truncated bidiagonal matrix. For `Upper`, `offdiag[i]` is entry `(i, i+1)`;
/// for `Lower`, `offdiag[i]` is entry `(i+1, i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bidiagonal {
    pub kind: BidiagonalKind,
    pub diag: Vec<Rational>,
    pub offdiag: Vec<Rational>,
}

impl Bidiagonal {
    pub fn new(kind: BidiagonalKind, diag: Vec<Rational>, offdiag: Vec<Rational>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch(format!(
                "bidiagonal of size {} needs {} off-diagonal entries, got {}",
                diag.len(),
                diag.len().saturating_sub(1),
                offdiag.len()
            )));
        }
        Ok(Bidiagonal { kind, diag, offdiag })
    }

    /// Upper bidiagonal with the given diagonal and unit superdiagonal.
    pub fn upper_unit(diag: Vec<Rational>) -> Result<Self> {
        let off = vec![Rational::one(); diag.len().saturating_sub(1)];
        Bidiagonal::new(BidiagonalKind::Upper, diag, off)
    }

    /// Unit lower bidiagonal with subdiagonal `sub[0] = (1,0), sub[1] = (2,1), ...`.
    pub fn lower_unit(sub: Vec<Rational>) -> Result<Self> {
        let diag = vec![Rational::one(); sub.len() + 1];
        Bidiagonal::new(BidiagonalKind::Lower, diag, sub)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let b: Bidiagonal = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Bidiagonal::new(b.kind, b.diag, b.offdiag)
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        match self.kind {
            _ if i == j => self.diag[i].clone(),
            BidiagonalKind::Upper if j == i + 1 => self.offdiag[i].clone(),
            BidiagonalKind::Lower if i == j + 1 => self.offdiag[j].clone(),
            _ => Rational::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let n = self.size();
        (0..n).map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// `self * m` for a dense `m` of matching size, touching two rows per output row.
    fn mul_dense(&self, m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let neighbour = match self.kind {
                    BidiagonalKind::Upper => (i + 1 < n).then(|| (i + 1, &self.offdiag[i])),
                    BidiagonalKind::Lower => (i > 0).then(|| (i - 1, &self.offdiag[i - 1])),
                };
                (0..n)
                    .map(|j| {
                        let mut v = &self.diag[i] * &m[i][j];
                        if let Some((r, w)) = neighbour {
                            if !w.is_zero() {
                                v += w * &m[r][j];
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

/// `J - C I = U L` on a truncation: `U` upper bidiagonal with diagonal
/// `u_0, u_1, ...` and unit superdiagonal, `L` unit lower bidiagonal with
/// subdiagonal `l_1, l_2, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidiagonalPair {
    pub upper: Bidiagonal,
    pub lower: Bidiagonal,
    /// `l_{size}`, the first subdiagonal entry past the truncation; needed for
    /// the last diagonal entry of `U L`.
    pub l_next: Rational,
}

impl BidiagonalPair {
    pub fn size(&self) -> usize {
        self.upper.size()
    }

    /// Rows of `U L` that are determined by the stored factors.
    pub fn trusted(&self) -> usize {
        self.size()
    }

    pub fn u(&self, i: usize) -> &Rational {
        &self.upper.diag[i]
    }

    /// `l_i` for `1 <= i <= size`.
    pub fn l(&self, i: usize) -> &Rational {
        if i == self.size() {
            &self.l_next
        } else {
            &self.lower.offdiag[i - 1]
        }
    }

    /// `C I + U L` as a tridiagonal matrix on the trusted block.
    pub fn reconstruct(&self, c: &Rational) -> BandedHessenberg {
        BandedHessenberg::from_fn(1, self.size() - 1, |i, k| {
            if k == i {
                c + self.u(i) + self.l(i + 1)
            } else {
                self.u(i) * self.l(i)
            }
        })
        .expect("tridiagonal rows have the right shape")
    }

    /// `C I + L U`, the p = 1 Geronimus transform; exact on every stored row.
    pub fn geronimus(&self, c: &Rational) -> BandedHessenberg {
        BandedHessenberg::from_fn(1, self.size() - 1, |i, k| {
            if k == i {
                let lu = if i == 0 { Rational::zero() } else { self.l(i).clone() };
                c + self.u(i) + lu
            } else {
                self.l(i) * self.u(i - 1)
            }
        })
        .expect("tridiagonal rows have the right shape")
    }
}

/// Outcome of [`ul_factorize`]: the factors and the sizes `n` for which
/// `det(C I_n - J_n)` vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlFactorization {
    pub pair: BidiagonalPair,
    pub singular_truncations: Vec<usize>,
}

fn require_tridiagonal(j: &BandedHessenberg, n_max: usize) -> Result<()> {
    if j.p() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "UL factorization is computed for tridiagonal J only (p = 1), got p = {}",
            j.p()
        )));
    }
    if n_max > j.n_max() {
        return Err(Error::Index(format!(
            "rows up to {n_max} requested but J stops at row {}",
            j.n_max()
        )));
    }
    Ok(())
}

/// `det(C I_n - J_n)` for `n = 0..=size` by the three-term continuant.
pub fn truncation_determinants(j: &BandedHessenberg, c: &Rational, size: usize) -> Result<Vec<Rational>> {
    require_tridiagonal(j, size.saturating_sub(1))?;
    let mut dets = Vec::with_capacity(size + 1);
    dets.push(Rational::one());
    for n in 1..=size {
        let mut d = (c - j.alpha(n - 1, n - 1)) * &dets[n - 1];
        if n >= 2 {
            d -= j.alpha(n - 1, n - 2) * &dets[n - 2];
        }
        dets.push(d);
    }
    Ok(dets)
}

/// Sequential UL factorization of `J - C I` with free parameter `l_1`,
/// covering rows `0..=n_max`.
///
/// `u_0 = (alpha_{0,0} - C) - l_1`, then `u_i = alpha_{i,i-1} / l_i` and
/// `l_{i+1} = (alpha_{i,i} - C) - u_i`. When `l_i = 0` and `alpha_{i,i-1} = 0`,
/// `u_i` is taken to be 0. Vanishing truncation determinants are reported,
/// not rejected; see [`ul_factorize_strict`].
pub fn ul_factorize(j: &BandedHessenberg, c: &Rational, l1: &Rational, n_max: usize) -> Result<UlFactorization> {
    require_tridiagonal(j, n_max)?;
    let mut u = Vec::with_capacity(n_max + 1);
    let mut l = Vec::with_capacity(n_max + 1);
    l.push(l1.clone());
    u.push(j.alpha(0, 0) - c - l1);
    for i in 1..=n_max {
        let sub = j.alpha(i, i - 1);
        let li = &l[i - 1];
        let ui = if li.is_zero() {
            if !sub.is_zero() {
                return Err(Error::SingularPivot(i));
            }
            Rational::zero()
        } else {
            sub / li
        };
        l.push(j.alpha(i, i) - c - &ui);
        u.push(ui);
    }
    let l_next = l.pop().expect("l has n_max + 1 entries");
    let pair = BidiagonalPair {
        upper: Bidiagonal::upper_unit(u)?,
        lower: Bidiagonal::lower_unit(l)?,
        l_next,
    };
    let singular_truncations = truncation_determinants(j, c, n_max + 1)?
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, d)| d.is_zero())
        .map(|(n, _)| n)
        .collect();
    Ok(UlFactorization {
        pair,
        singular_truncations,
    })
}

/// [`ul_factorize`] that additionally requires `det(C I_n - J_n) != 0` for
/// every `1 <= n <= n_max + 1`.
pub fn ul_factorize_strict(j: &BandedHessenberg, c: &Rational, l1: &Rational, n_max: usize) -> Result<BidiagonalPair> {
    let f = ul_factorize(j, c, l1, n_max)?;
    match f.singular_truncations.first() {
        Some(&n) => Err(Error::SingularTruncation(n)),
        None => Ok(f.pair),
    }
}

/// `J^(s) = C I + L^(p-s+1) ... L^(p) U L^(1) ... L^(p-s)` on the leading
/// `block` rows.
///
/// `factors` is `[U, L^(1), ..., L^(p)]`, all of one size, with at least
/// `p + 1` rows of padding beyond `block`.
pub fn geronimus_transform(factors: &[Bidiagonal], c: &Rational, s: usize, block: usize) -> Result<BandedHessenberg> {
    let p = factors
        .len()
        .checked_sub(1)
        .filter(|&p| p >= 1)
        .ok_or_else(|| Error::DimensionMismatch("need an upper factor and at least one lower factor".into()))?;
    let (upper, lowers) = factors.split_first().expect("non-empty");
    if upper.kind != BidiagonalKind::Upper || upper.offdiag.iter().any(|v| !v.is_one()) {
        return Err(Error::DimensionMismatch(
            "first factor must be upper bidiagonal with unit superdiagonal".into(),
        ));
    }
    if lowers
        .iter()
        .any(|f| f.kind != BidiagonalKind::Lower || f.diag.iter().any(|v| !v.is_one()))
    {
        return Err(Error::DimensionMismatch(
            "remaining factors must be unit lower bidiagonal".into(),
        ));
    }
    let size = upper.size();
    if factors.iter().any(|f| f.size() != size) {
        return Err(Error::DimensionMismatch("factors differ in size".into()));
    }
    if !(1..=p).contains(&s) {
        return Err(Error::Index(format!("s must lie in 1..={p}, got {s}")));
    }
    if block == 0 || size < block + p + 1 {
        return Err(Error::PaddingInsufficient(format!(
            "block of {block} rows with {} factors needs size >= {}, got {size}",
            p + 1,
            block + p + 1
        )));
    }
    // L^(p-s+1) .. L^(p), U, L^(1) .. L^(p-s)
    let mut order: Vec<&Bidiagonal> = lowers[p - s..].iter().collect();
    order.push(upper);
    order.extend(&lowers[..p - s]);

    let mut prod = order.last().expect("non-empty").to_dense();
    for f in order.iter().rev().skip(1) {
        prod = f.mul_dense(&prod);
    }
    for (i, row) in prod.iter().enumerate().take(block) {
        for (k, v) in row.iter().enumerate().take(block + 1) {
            let outside = k > i + 1 || i > k + p;
            let bad = (outside && !v.is_zero()) || (k == i + 1 && !v.is_one());
            if bad {
                return Err(Error::DimensionMismatch(format!(
                    "product is not ({})-banded Hessenberg at ({i}, {k})",
                    p + 2
                )));
            }
        }
    }
    BandedHessenberg::from_fn(
        p,
        block - 1,
        |i, k| {
            if i == k {
                c + &prod[i][k]
            } else {
                prod[i][k].clone()
            }
        },
    )
}

/// Truncation of a lower Hessenberg matrix with unit superdiagonal; row `i`
/// stores entries `(i, 0..=i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerHessenberg {
    pub rows: Vec<Vec<Rational>>,
}

impl LowerHessenberg {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        if j == i + 1 {
            Rational::one()
        } else if j > i {
            Rational::zero()
        } else {
            self.rows[i][j].clone()
        }
    }

    /// Entries `(r + d, r)` for every stored row.
    pub fn subdiagonal(&self, d: usize) -> Vec<Rational> {
        (d..self.rows.len()).map(|i| self.rows[i][i - d].clone()).collect()
    }

    /// First nonzero entry strictly below subdiagonal `p`, if any.
    pub fn band_violation(&self, p: usize) -> Option<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .find_map(|(i, row)| (0..i.saturating_sub(p)).find(|&j| !row[j].is_zero()).map(|j| (i, j)))
    }

    pub fn to_banded(&self, p: usize) -> Option<BandedHessenberg> {
        if self.band_violation(p).is_some() {
            return None;
        }
        BandedHessenberg::from_fn(p, self.n_max(), |i, j| self.rows[i][j].clone()).ok()
    }

    pub fn to_dense(&self, size: usize) -> Vec<Vec<Rational>> {
        (0..size)
            .map(|i| (0..size).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// `T J T^{-1}` on rows `0..=n_max`.
///
/// Row by row, from the superdiagonal leftwards:
/// `d_{i,j} = alpha_{i,j} + gamma_i alpha_{i-1,j} - gamma_{j+1} d_{i,j+1}` with
/// `d_{i,i+1} = 1`. Needs `gamma_1..gamma_{n_max+1}`.
pub fn conjugate_by_t(j: &BandedHessenberg, gammas: &GammaSequence, n_max: usize) -> Result<LowerHessenberg> {
    if n_max > j.n_max() {
        return Err(Error::Index(format!(
            "rows up to {n_max} requested but J stops at row {}",
            j.n_max()
        )));
    }
    gammas.require(n_max + 1)?;
    let rows = (0..=n_max)
        .map(|i| {
            let gi = gammas.get(i);
            let mut row = vec![Rational::zero(); i + 1];
            let mut right = Rational::one();
            for col in (0..=i).rev() {
                let mut v = j.entry(i, col);
                if i > 0 && !gi.is_zero() {
                    v += &gi * j.entry(i - 1, col);
                }
                v -= gammas.get(col + 1) * &right;
                row[col] = v.clone();
                right = v;
            }
            row
        })
        .collect();
    Ok(LowerHessenberg { rows })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn hermite_j(n_max: usize) -> BandedHessenberg {
        BandedHessenberg::from_fn(
            1,
            n_max,
            |n, k| {
                if k + 1 == n {
                    rat(n as i64, 2)
                } else {
                    Rational::zero()
                }
            },
        )
        .unwrap()
    }

    /// gamma_1 = 1, gamma_{m+1} = -m / (2 gamma_m)
    fn geronimus_gammas(m: usize) -> GammaSequence {
        let mut g = vec![rat(1, 1)];
        for k in 1..m {
            let next = rat(-(k as i64), 2) / &g[k - 1];
            g.push(next);
        }
        GammaSequence::new(g)
    }

    fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let n = a.len();
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|t| &a[i][t] * &b[t][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn gamma_sequence_basics() {
        let g = GammaSequence::new(vec![rat(1, 1), rat(-1, 2), rat(2, 1)]);
        assert!(g.get(0).is_zero());
        assert_eq!(g.get(3), rat(2, 1));
        assert_eq!(g.product(1, 3), rat(-1, 1));
        assert_eq!(g.product(3, 2), rat(1, 1));
        assert!(g.require(3).is_ok());
        assert!(matches!(g.require(4), Err(Error::Index(_))));
    }

    #[test]
    fn hermite_ul() {
        let f = ul_factorize(&hermite_j(30), &Rational::zero(), &rat(1, 1), 30).unwrap();
        let pair = &f.pair;
        assert_eq!(pair.u(0), &rat(-1, 1));
        assert_eq!(pair.u(1), &rat(1, 2));
        assert_eq!(pair.l(2), &rat(-1, 2));
        for i in 1..=30 {
            assert_eq!(pair.l(i) * pair.l(i + 1), rat(-(i as i64), 2));
        }
        assert_eq!(pair.reconstruct(&Rational::zero()), hermite_j(30));
        // det(-J_n) vanishes for odd n when the diagonal is zero
        assert_eq!(f.singular_truncations, (1..=31).step_by(2).collect::<Vec<_>>());
        assert_eq!(
            ul_factorize_strict(&hermite_j(30), &Rational::zero(), &rat(1, 1), 30),
            Err(Error::SingularTruncation(1))
        );
    }

    #[test]
    fn ul_dense_product_check() {
        let j = hermite_j(12);
        let c = rat(3, 2);
        let f = ul_factorize(&j, &c, &rat(-2, 5), 12).unwrap();
        let ul = matmul(&f.pair.upper.to_dense(), &f.pair.lower.to_dense());
        let dense_j = j.to_dense(13);
        // the last row of a truncated U L product misses l_{13}
        for i in 0..12 {
            for k in 0..13 {
                let cid = if i == k { c.clone() } else { Rational::zero() };
                assert_eq!(&cid + &ul[i][k], dense_j[i][k], "({i},{k})");
            }
        }
        assert_eq!(ul_factorize_strict(&j, &c, &rat(-2, 5), 12).unwrap(), f.pair);
    }

    #[test]
    fn continuant_matches_dense_determinant() {
        let j = hermite_j(8);
        let c = rat(1, 3);
        let dets = truncation_determinants(&j, &c, 9).unwrap();
        for n in 1..=9 {
            let m: Vec<Vec<Rational>> = j
                .to_dense(n)
                .into_iter()
                .enumerate()
                .map(|(i, row)| {
                    row.into_iter()
                        .enumerate()
                        .map(|(k, v)| if i == k { &c - v } else { -v })
                        .collect()
                })
                .collect();
            assert_eq!(dets[n], crate::det::determinant(&m));
        }
    }

    #[test]
    fn shift_matrix_ul() {
        let j = BandedHessenberg::from_fn(1, 6, |_, _| Rational::zero()).unwrap();
        let f = ul_factorize(&j, &Rational::zero(), &Rational::zero(), 6).unwrap();
        assert!(f.pair.upper.diag.iter().all(Rational::is_zero));
        assert!(f.pair.lower.offdiag.iter().all(Rational::is_zero));
        assert_eq!(f.pair.reconstruct(&Rational::zero()), j);
    }

    #[test]
    fn hermite_zero_pivot() {
        assert_eq!(
            ul_factorize(&hermite_j(5), &Rational::zero(), &Rational::zero(), 5),
            Err(Error::SingularPivot(1))
        );
    }

    #[test]
    fn geronimus_identity_factor() {
        let u = Bidiagonal::upper_unit(vec![rat(1, 1); 6]).unwrap();
        let l = Bidiagonal::lower_unit(vec![Rational::zero(); 5]).unwrap();
        let c = rat(2, 1);
        let out = geronimus_transform(&[u.clone(), l], &c, 1, 4).unwrap();
        for i in 0..4 {
            assert_eq!(out.alpha(i, i), rat(3, 1));
            if i > 0 {
                assert!(out.alpha(i, i - 1).is_zero());
            }
        }
    }

    #[test]
    fn geronimus_p1_matches_lu_formula() {
        let f = ul_factorize(&hermite_j(20), &Rational::zero(), &rat(1, 1), 20).unwrap();
        let direct = f.pair.geronimus(&Rational::zero());
        let factors = [f.pair.upper.clone(), f.pair.lower.clone()];
        let rotated = geronimus_transform(&factors, &Rational::zero(), 1, 19).unwrap();
        assert_eq!(rotated, direct.truncate(18));
    }

    #[test]
    fn geronimus_p2_rotation() {
        let size = 8;
        let u = Bidiagonal::upper_unit((0..size).map(|i| rat(i as i64 + 1, 3)).collect()).unwrap();
        let l1 = Bidiagonal::lower_unit((1..size).map(|i| rat(2 - i as i64, 5)).collect()).unwrap();
        let l2 = Bidiagonal::lower_unit((1..size).map(|i| rat(i as i64, 7)).collect()).unwrap();
        let c = rat(-1, 2);
        let factors = [u.clone(), l1.clone(), l2.clone()];
        let dense = |b: &Bidiagonal| b.to_dense();
        let s2 = matmul(&matmul(&dense(&l1), &dense(&l2)), &dense(&u));
        let s1 = matmul(&matmul(&dense(&l2), &dense(&u)), &dense(&l1));
        for (s, oracle) in [(2, s2), (1, s1)] {
            let out = geronimus_transform(&factors, &c, s, 5).unwrap();
            for i in 0..5 {
                for k in 0..5 {
                    let cid = if i == k { c.clone() } else { Rational::zero() };
                    assert_eq!(out.entry(i, k), &cid + &oracle[i][k], "s={s} ({i},{k})");
                }
            }
        }
        assert!(matches!(
            geronimus_transform(&factors, &c, 1, 6),
            Err(Error::PaddingInsufficient(_))
        ));
        assert!(matches!(geronimus_transform(&factors, &c, 3, 5), Err(Error::Index(_))));
        assert!(matches!(
            geronimus_transform(&[l1.clone(), u.clone()], &c, 1, 5),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn conjugation_hermite_geronimus() {
        let n_max = 30;
        let g = geronimus_gammas(n_max + 2);
        let d = conjugate_by_t(&hermite_j(n_max), &g, n_max).unwrap();
        for r in 0..=n_max {
            assert_eq!(d.entry(r, r), g.get(r) - g.get(r + 1));
        }
        for r in 0..n_max {
            let expect = rat(r as i64 + 1, 2) - g.get(r + 1) * (g.get(r + 1) - g.get(r + 2));
            assert_eq!(d.entry(r + 1, r), expect);
        }
        assert!(d.subdiagonal(2).iter().all(Rational::is_zero));
        assert_eq!(d.band_violation(1), None);
        let f = ul_factorize(&hermite_j(n_max), &Rational::zero(), &rat(1, 1), n_max).unwrap();
        assert_eq!(d.to_banded(1).unwrap(), f.pair.geronimus(&Rational::zero()));
    }

    #[test]
    fn conjugation_with_zero_gammas_is_identity() {
        let j = hermite_j(10);
        let d = conjugate_by_t(&j, &GammaSequence::zeros(11), 10).unwrap();
        assert_eq!(d.to_banded(1).unwrap(), j);
    }

    #[test]
    fn conjugation_with_unit_gammas_is_not_tridiagonal() {
        let d = conjugate_by_t(&hermite_j(10), &GammaSequence::new(vec![rat(1, 1); 11]), 10).unwrap();
        for v in d.subdiagonal(2) {
            assert_eq!(v, rat(-1, 2));
        }
        assert_eq!(d.band_violation(1), Some((2, 0)));
        assert!(d.to_banded(1).is_none());
    }

    #[test]
    fn conjugation_matches_dense_similarity() {
        // T J = D T on the leading block, with T, J dense
        let n = 9;
        let j = hermite_j(n);
        let g = GammaSequence::new((1..=n + 1).map(|i| rat(i as i64 % 3 - 1, 2)).collect());
        let d = conjugate_by_t(&j, &g, n).unwrap();
        let t = Bidiagonal::lower_unit((1..=n).map(|i| g.get(i)).collect())
            .unwrap()
            .to_dense();
        let lhs = matmul(&t, &j.to_dense(n + 1));
        let rhs = matmul(&d.to_dense(n + 1), &t);
        // the last column of D T misses gamma_{n+1} d_{i,n+1}
        for i in 0..=n {
            for k in 0..n {
                assert_eq!(lhs[i][k], rhs[i][k], "({i},{k})");
            }
        }
        assert!(matches!(conjugate_by_t(&j, &g, n + 1), Err(Error::Index(_))));
        assert!(matches!(
            conjugate_by_t(&j, &GammaSequence::zeros(3), 5),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn bidiagonal_document() {
        let b = Bidiagonal::from_json(r#"{"kind":"lower","diag":["1","1","1"],"offdiag":["1/2","-3"]}"#).unwrap();
        assert_eq!(b.entry(2, 1), rat(-3, 1));
        assert_eq!(b.entry(1, 2), Rational::zero());
        assert!(Bidiagonal::from_json(r#"{"kind":"upper","diag":["1"],"offdiag":["1"]}"#).is_err());
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(Bidiagonal::from_json(&text).unwrap(), b);
    }
}
