//! Finite-order differential operators `L = sum_i a_i(x) d^i/dx^i` with
//! `deg a_i <= i`, their delta tables and their eigenvalue sequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Pascal, Poly, Rational};

/// A differential operator with polynomial coefficients `a_0, ..., a_N`.
///
/// Invariants: `deg a_i <= i`, `a_0 = 0`, `a_N != 0` and `N >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOperator {
    name: Option<String>,
    coeffs: Vec<Poly>,
    /// Constant removed from `a_0` at load time, if any.
    a0_shift: Option<Rational>,
}

/// JSON form of an operator: `coeffs[i]` lists `a_i` in ascending powers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub coeffs: Vec<Vec<Rational>>,
}

impl DiffOperator {
    /// Validates and normalizes coefficient polynomials `a_0, a_1, ...`.
    ///
    /// A nonzero constant `a_0` is subtracted away (so `lambda_0 = 0`) and
    /// recorded in [`DiffOperator::a0_shift`]; trailing zero coefficients are
    /// dropped.
    pub fn new(name: Option<String>, mut coeffs: Vec<Poly>) -> Result<Self> {
        for (i, a) in coeffs.iter().enumerate() {
            if let Some(d) = a.degree() {
                if d > i {
                    return Err(Error::DegreeViolation { index: i, degree: d });
                }
            }
        }
        if coeffs.is_empty() {
            coeffs.push(Poly::zero());
        }
        let a0_shift = (!coeffs[0].is_zero()).then(|| coeffs[0].coeff(0));
        coeffs[0] = Poly::zero();
        while coeffs.len() > 1 && coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::OrderZero);
        }
        Ok(DiffOperator { name, coeffs, a0_shift })
    }

    /// Builds an operator from its document form.
    ///
    /// Rows beyond `order` must be zero; a declared order whose top coefficient
    /// vanishes is lowered to the true order.
    pub fn from_document(doc: &OperatorDocument) -> Result<Self> {
        for (i, row) in doc.coeffs.iter().enumerate().skip(doc.order + 1) {
            if row.iter().any(|c| !c.is_zero()) {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient a_{i} is nonzero but the declared order is {}",
                    doc.order
                )));
            }
        }
        let coeffs = doc.coeffs.iter().cloned().map(Poly::new).collect();
        DiffOperator::new(doc.name.clone(), coeffs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: OperatorDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        DiffOperator::from_document(&doc)
    }

    pub fn to_document(&self) -> OperatorDocument {
        OperatorDocument {
            name: self.name.clone(),
            order: self.order(),
            coeffs: self.coeffs.iter().map(|a| a.coeffs().to_vec()).collect(),
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `a_i`, zero for `i > N`.
    pub fn coeff_poly(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `a_{i,j}`, the coefficient of `x^j` in `a_i`.
    pub fn a(&self, i: usize, j: usize) -> Rational {
        self.coeffs.get(i).map(|p| p.coeff(j)).unwrap_or_default()
    }

    pub fn a0_shift(&self) -> Option<&Rational> {
        self.a0_shift.as_ref()
    }

    /// `L p = sum_{i=1}^{N} a_i p^{(i)}`.
    pub fn apply(&self, p: &Poly) -> Poly {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .fold(Poly::zero(), |acc, (i, a)| &acc + &(a * &p.derivative(i)))
    }

    /// Delta table `delta_n^(k)` for `0 <= k <= n <= n_max`.
    pub fn delta_table(&self, n_max: usize) -> DeltaTable {
        let pascal = Pascal::new(n_max);
        let order = self.order();
        let delta = (0..=n_max)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        if k > order {
                            return Rational::zero();
                        }
                        (k..=n.min(order))
                            .map(|i| {
                                let w = pascal.binom(n, i) * pascal.factorial(i);
                                self.a(i, i - k) * Rational::from(w)
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect();
        DeltaTable { order, delta }
    }

    /// Eigenvalues `lambda_0..lambda_{n_max}` and the distinctness verdict.
    pub fn spectrum(&self, n_max: usize) -> Spectrum {
        let pascal = Pascal::new(n_max);
        let lambdas: Vec<Rational> = (0..=n_max)
            .map(|n| {
                (1..=n.min(self.order()))
                    .map(|i| self.a(i, i) * Rational::from(pascal.binom(n, i) * pascal.factorial(i)))
                    .sum()
            })
            .collect();
        let distinct = spectrum_is_distinct(&lambdas);
        Spectrum { lambdas, distinct }
    }

    /// `lambda_j - lambda_i` computed from the cumulative-binomial form.
    pub fn eigenvalue_difference(&self, i: usize, j: usize) -> Result<Rational> {
        if i >= j {
            return Err(Error::Index(format!(
                "eigenvalue_difference needs i < j, got i = {i}, j = {j}"
            )));
        }
        let pascal = Pascal::new(j);
        let mut total = Rational::zero();
        for s in 1..=j.min(self.order()) {
            let a_ss = self.a(s, s);
            if a_ss.is_zero() {
                continue;
            }
            let weight: num_bigint::BigInt = (i..j).map(|m| pascal.binom(m, s - 1)).sum();
            total += a_ss * Rational::from(weight * pascal.factorial(s));
        }
        Ok(total)
    }

    /// `sum_{s=1}^{N} C(m, s-1) s! a_{s,s}`, which equals `lambda_{m+1} - lambda_m`.
    pub fn consecutive_gap(&self, m: usize) -> Rational {
        let top = (m + 1).min(self.order());
        let pascal = Pascal::new(m.max(top));
        (1..=top)
            .map(|s| self.a(s, s) * Rational::from(pascal.binom(m, s - 1) * pascal.factorial(s)))
            .sum()
    }
}

/// Triangle of `delta_n^(k)` values for one operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaTable {
    order: usize,
    delta: Vec<Vec<Rational>>,
}

impl DeltaTable {
    pub fn n_max(&self) -> usize {
        self.delta.len() - 1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `delta_n^(k)`; zero for `k > n`. Panics if `n > n_max`.
    pub fn get(&self, n: usize, k: usize) -> Rational {
        self.delta[n].get(k).cloned().unwrap_or_default()
    }

    pub fn lambda(&self, n: usize) -> Rational {
        self.get(n, 0)
    }

    pub fn lambdas(&self) -> Vec<Rational> {
        self.delta.iter().map(|row| row[0].clone()).collect()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.delta
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub lambdas: Vec<Rational>,
    pub distinct: bool,
}

/// True iff `lambdas[1..]` are pairwise distinct and all differ from `lambdas[0]`.
pub fn spectrum_is_distinct(lambdas: &[Rational]) -> bool {
    let mut seen = std::collections::HashSet::with_capacity(lambdas.len());
    lambdas.iter().all(|l| seen.insert(l))
}
