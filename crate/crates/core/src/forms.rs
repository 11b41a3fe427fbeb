//! Linear forms `L_j(x) = sum_i theta[i][j] x_i` and their transposes
//! `R_i(u) = sum_j theta[i][j] u_j`.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Integer vector with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn zeros(len: usize) -> Self {
        IntVector(vec![BigInt::from(0); len])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        IntVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// `theta` is stored row-major by variable index: `theta[i][j]` is the
/// coefficient of `x_i` in `L_j`. Both directions read the same storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormSystem {
    theta: Vec<Vec<Scalar>>,
    m: usize,
    n: usize,
}

impl LinearFormSystem {
    pub fn new(theta: Vec<Vec<Scalar>>) -> Result<Self> {
        let m = theta.len();
        if m == 0 {
            return Err(Error::Domain("system needs at least one variable".into()));
        }
        let n = theta[0].len();
        if n == 0 {
            return Err(Error::Domain("system needs at least one form".into()));
        }
        for row in &theta {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        Ok(LinearFormSystem { theta, m, n })
    }

    /// Builds an `m x n` system from a row-major flat list.
    pub fn from_row_major(m: usize, n: usize, flat: Vec<Scalar>) -> Result<Self> {
        if flat.len() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                got: flat.len(),
            });
        }
        if m == 0 || n == 0 {
            return Err(Error::Domain("m and n must be positive".into()));
        }
        let mut it = flat.into_iter();
        let theta = (0..m).map(|_| it.by_ref().take(n).collect()).collect();
        Self::new(theta)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `d = m + n`.
    pub fn d(&self) -> usize {
        self.m + self.n
    }

    pub fn theta(&self, i: usize, j: usize) -> &Scalar {
        &self.theta[i][j]
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.theta
    }

    pub fn is_exact(&self) -> bool {
        self.theta.iter().flatten().all(Scalar::is_exact)
    }

    /// `(L_1(a), ..., L_n(a))`.
    pub fn eval_forms(&self, a: &IntVector) -> Result<Vec<Scalar>> {
        if a.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: a.len(),
            });
        }
        let coeffs: Vec<Scalar> = a.0.iter().map(|x| Scalar::from_int(x.clone())).collect();
        Ok((0..self.n)
            .map(|j| {
                coeffs
                    .iter()
                    .zip(&self.theta)
                    .fold(Scalar::zero(), |acc, (x, row)| acc + x * &row[j])
            })
            .collect())
    }

    /// `(R_1(u), ..., R_m(u))`.
    pub fn eval_transposed(&self, u: &IntVector) -> Result<Vec<Scalar>> {
        if u.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: u.len(),
            });
        }
        let coeffs: Vec<Scalar> = u.0.iter().map(|x| Scalar::from_int(x.clone())).collect();
        Ok(self
            .theta
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&coeffs)
                    .fold(Scalar::zero(), |acc, (t, x)| acc + t * x)
            })
            .collect())
    }
}
