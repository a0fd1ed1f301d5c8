//! The difference-operator side: banded lower Hessenberg matrices with unit
//! superdiagonal, the `(p+2)`-term recurrences they encode, and recovery of
//! such a recurrence from a given monic family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Poly, Rational};

/// Truncation of a `(p+2)`-banded Hessenberg matrix `J`.
///
/// Row `n` stores `alpha_{n,k}` for `max(0, n-p) <= k <= n`; the
/// superdiagonal entries are 1 and everything else is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandedHessenberg {
    p: usize,
    rows: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandedRow {
    pub n: usize,
    pub alpha: Vec<Rational>,
}

/// JSON form: each row lists `alpha_{n,n-p}, ..., alpha_{n,n}` (shorter for
/// `n < p`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandedDocument {
    pub p: usize,
    pub rows: Vec<BandedRow>,
}

impl BandedHessenberg {
    pub fn new(p: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if p == 0 {
            return Err(Error::DimensionMismatch("bandwidth p must be positive".into()));
        }
        if rows.is_empty() {
            return Err(Error::DimensionMismatch("banded matrix has no rows".into()));
        }
        for (n, row) in rows.iter().enumerate() {
            if row.len() != n.min(p) + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "row {n} has {} entries, expected {}",
                    row.len(),
                    n.min(p) + 1
                )));
            }
        }
        Ok(BandedHessenberg { p, rows })
    }

    /// Builds rows `0..=n_max` from `alpha(n, k)`.
    pub fn from_fn(p: usize, n_max: usize, mut alpha: impl FnMut(usize, usize) -> Rational) -> Result<Self> {
        let rows = (0..=n_max)
            .map(|n| (n.saturating_sub(p)..=n).map(|k| alpha(n, k)).collect())
            .collect();
        BandedHessenberg::new(p, rows)
    }

    pub fn from_document(doc: &BandedDocument) -> Result<Self> {
        let rows = doc
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if r.n != i {
                    return Err(Error::DimensionMismatch(format!(
                        "rows must be listed in order from 0; found n = {} at position {i}",
                        r.n
                    )));
                }
                Ok(r.alpha.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        BandedHessenberg::new(doc.p, rows)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: BandedDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        BandedHessenberg::from_document(&doc)
    }

    pub fn to_document(&self) -> BandedDocument {
        BandedDocument {
            p: self.p,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(n, alpha)| BandedRow {
                    n,
                    alpha: alpha.clone(),
                })
                .collect(),
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Index of the last stored row.
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// Matrix entry `(n, k)`: `alpha_{n,k}` inside the band, 1 on the
    /// superdiagonal, zero elsewhere. Panics if row `n` is not stored and the
    /// entry is inside the band.
    pub fn entry(&self, n: usize, k: usize) -> Rational {
        if k == n + 1 {
            return Rational::one();
        }
        if k > n || n - k > self.p {
            return Rational::zero();
        }
        self.rows[n][k - n.saturating_sub(self.p)].clone()
    }

    pub fn alpha(&self, n: usize, k: usize) -> Rational {
        self.entry(n, k)
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    /// Dense `size x size` leading block, superdiagonal included.
    pub fn to_dense(&self, size: usize) -> Vec<Vec<Rational>> {
        (0..size)
            .map(|n| (0..size).map(|k| self.entry(n, k)).collect())
            .collect()
    }

    /// Leading rows `0..=n_max`.
    pub fn truncate(&self, n_max: usize) -> BandedHessenberg {
        BandedHessenberg {
            p: self.p,
            rows: self.rows[..=n_max.min(self.n_max())].to_vec(),
        }
    }
}

/// `P_0, ..., P_{n_max}` from `P_{n+1} = (x - alpha_{n,n}) P_n - sum_{k=n-p}^{n-1} alpha_{n,k} P_k`
/// with `P_0 = 1`.
pub fn polys_from_recurrence(j: &BandedHessenberg, n_max: usize) -> Result<Vec<Poly>> {
    if n_max > j.n_max() + 1 {
        return Err(Error::Index(format!(
            "P_{n_max} needs recurrence row {}, but rows stop at {}",
            n_max - 1,
            j.n_max()
        )));
    }
    let mut polys = Vec::with_capacity(n_max + 1);
    polys.push(Poly::one());
    for n in 0..n_max {
        let lo = n.saturating_sub(j.p());
        let next = (lo..=n).fold(polys[n].shift(), |acc, k| acc.add_scaled(&polys[k], &-j.alpha(n, k)));
        polys.push(next);
    }
    Ok(polys)
}

/// `sum_{k=n-p}^{n} alpha_{n,k} P_k + P_{n+1}`, i.e. row `n` of `J` applied to
/// the family; equals `x P_n` exactly when the family obeys the recurrence.
pub fn hessenberg_apply(j: &BandedHessenberg, polys: &[Poly], n: usize) -> Result<Poly> {
    if n > j.n_max() || n + 1 >= polys.len() {
        return Err(Error::Index(format!(
            "row {n} needs P_0..P_{} and recurrence row {n}",
            n + 1
        )));
    }
    let lo = n.saturating_sub(j.p());
    Ok((lo..=n).fold(polys[n + 1].clone(), |acc, k| acc.add_scaled(&polys[k], &j.alpha(n, k))))
}

/// Where a family first fails to satisfy a `(p+2)`-term recurrence: in row
/// `n`, `x P_n - P_{n+1}` has the nonzero component `residual` along `P_index`
/// with `index < n - p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitFailure {
    pub n: usize,
    pub index: usize,
    pub residual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitOutcome {
    Fitted(BandedHessenberg),
    Failed(FitFailure),
}

impl FitOutcome {
    pub fn is_fitted(&self) -> bool {
        matches!(self, FitOutcome::Fitted(_))
    }
}

/// Coordinates of `r` (with `deg r <= top`) in the basis `P_0..P_top` of a
/// monic family, by repeated leading-term elimination.
fn expand_in_family(mut r: Poly, polys: &[Poly], top: usize) -> Vec<Rational> {
    let mut coords = vec![Rational::zero(); top + 1];
    for m in (0..=top).rev() {
        let c = r.coeff(m);
        if !c.is_zero() {
            r = r.add_scaled(&polys[m], &-&c);
            coords[m] = c;
        }
    }
    debug_assert!(r.is_zero());
    coords
}

/// Tries to express the family through a `(p+2)`-term recurrence.
///
/// Every row `n = 0..len-2` is tested. The first row whose expansion of
/// `x P_n - P_{n+1}` reaches below `P_{n-p}` is reported as a [`FitFailure`].
pub fn fit_recurrence(polys: &[Poly], p: usize) -> Result<FitOutcome> {
    if p == 0 {
        return Err(Error::DimensionMismatch("bandwidth p must be positive".into()));
    }
    if polys.len() < p + 3 {
        return Err(Error::DimensionMismatch(format!(
            "fitting p = {p} needs at least {} polynomials, got {}",
            p + 3,
            polys.len()
        )));
    }
    for (n, q) in polys.iter().enumerate() {
        if q.degree() != Some(n) || !q.is_monic() {
            return Err(Error::DimensionMismatch(format!(
                "P_{n} is not monic of degree {n}: {q}"
            )));
        }
    }
    let mut rows = Vec::with_capacity(polys.len() - 1);
    for n in 0..polys.len() - 1 {
        let r = &polys[n].shift() - &polys[n + 1];
        let coords = expand_in_family(r, polys, n);
        let lo = n.saturating_sub(p);
        if let Some(index) = (0..lo).find(|&i| !coords[i].is_zero()) {
            return Ok(FitOutcome::Failed(FitFailure {
                n,
                index,
                residual: coords[index].clone(),
            }));
        }
        rows.push(coords[lo..].to_vec());
    }
    BandedHessenberg::new(p, rows).map(FitOutcome::Fitted)
}
