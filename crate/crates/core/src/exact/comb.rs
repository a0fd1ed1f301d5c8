//! Binomial coefficients and factorials over arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Memoized Pascal triangle together with a factorial table.
///
/// Rows are extended on demand; `binom(n, k)` is zero for `k > n`.
#[derive(Debug, Clone)]
pub struct Pascal {
    rows: Vec<Vec<BigInt>>,
    factorials: Vec<BigInt>,
}

impl Default for Pascal {
    fn default() -> Self {
        Pascal::new(0)
    }
}

impl Pascal {
    pub fn new(n_max: usize) -> Self {
        let mut p = Pascal {
            rows: vec![vec![BigInt::one()]],
            factorials: vec![BigInt::one()],
        };
        p.ensure(n_max);
        p
    }

    /// Extends the table through row `n`.
    pub fn ensure(&mut self, n: usize) {
        while self.rows.len() <= n {
            let prev = self.rows.last().expect("row 0 always present");
            let m = prev.len();
            let mut row = Vec::with_capacity(m + 1);
            row.push(BigInt::one());
            for k in 1..m {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::one());
            self.rows.push(row);
            let next = self.factorials.last().unwrap() * BigInt::from(m);
            self.factorials.push(next);
        }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, k)`, zero when `k > n`. Panics if `n` exceeds the table.
    pub fn binom(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            BigInt::zero()
        } else {
            self.rows[n][k].clone()
        }
    }

    pub fn factorial(&self, n: usize) -> &BigInt {
        &self.factorials[n]
    }
}

/// `C(n, k)` by the multiplicative formula, for one-off use outside tables.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Falling factorial `n (n-1) ... (n-i+1) = C(n, i) i!`.
pub fn falling(n: usize, i: usize) -> BigInt {
    if i > n {
        return BigInt::zero();
    }
    ((n - i + 1)..=n).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
}
