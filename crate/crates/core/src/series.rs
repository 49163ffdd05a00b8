//! Truncated exponential generating series with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::factorial;
use crate::error::{Error, Result};

/// `Σ_{m ≤ N} c_m x^m`, so that the m-th count is `m! · c_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgfSeries {
    coeffs: Vec<BigRational>,
}

pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidRequest(format!("not a rational \"p/q\": {s}"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Wire form: EGF coefficients as `"p/q"` strings plus the derived counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub coeffs: Vec<String>,
    pub counts: Vec<String>,
}

impl EgfSeries {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least the constant term");
        EgfSeries { coeffs }
    }

    /// The series whose m-th count is `counts[m]`.
    pub fn from_counts(counts: &[BigInt]) -> Self {
        Self::from_coeffs(
            counts
                .iter()
                .enumerate()
                .map(|(m, c)| BigRational::new(c.clone(), BigInt::from(factorial(m))))
                .collect(),
        )
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = c;
        EgfSeries { coeffs }
    }

    /// `e^{a x}` truncated at `x^order`.
    pub fn exp(a: &BigRational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut power = BigRational::one();
        for m in 0..=order {
            coeffs.push(&power / BigRational::from_integer(BigInt::from(factorial(m))));
            power *= a;
        }
        EgfSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> &BigRational {
        &self.coeffs[m]
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        EgfSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `f(x) ↦ f(a·x)`.
    pub fn rescale(&self, a: &BigRational) -> Self {
        let mut power = BigRational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &power);
            power *= a;
        }
        EgfSeries { coeffs }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = EgfSeries::constant(BigRational::one(), self.order());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `m! · c_m`, required to be an integer.
    pub fn count(&self, m: usize) -> Result<BigInt> {
        let v = &self.coeffs[m] * BigRational::from_integer(BigInt::from(factorial(m)));
        if !v.is_integer() {
            return Err(Error::NonIntegral(format!("series count at m={m} is {v}")));
        }
        Ok(v.to_integer())
    }

    pub fn counts(&self) -> Result<Vec<BigInt>> {
        (0..self.coeffs.len()).map(|m| self.count(m)).collect()
    }

    /// Counts as nonnegative integers.
    pub fn natural_counts(&self) -> Result<Vec<BigUint>> {
        self.counts()?
            .into_iter()
            .map(|c| {
                if c.is_negative() {
                    Err(Error::NonIntegral(format!("negative series count {c}")))
                } else {
                    Ok(c.to_biguint().unwrap())
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<SeriesJson> {
        Ok(SeriesJson {
            coeffs: self.coeffs.iter().map(rational_string).collect(),
            counts: self.counts()?.iter().map(BigInt::to_string).collect(),
        })
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        if j.coeffs.is_empty() {
            return Err(Error::InvalidRequest("empty series".into()));
        }
        let s = EgfSeries { coeffs: j.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<_>>()? };
        let counts: Vec<String> = s.counts()?.iter().map(BigInt::to_string).collect();
        if counts != j.counts {
            return Err(Error::InvalidRequest("series counts disagree with coefficients".into()));
        }
        Ok(s)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let order = self.order().min(other.order());
        EgfSeries { coeffs: (0..=order).map(|m| f(&self.coeffs[m], &other.coeffs[m])).collect() }
    }
}

impl Add for &EgfSeries {
    type Output = EgfSeries;
    fn add(self, rhs: &EgfSeries) -> EgfSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &EgfSeries {
    type Output = EgfSeries;
    fn sub(self, rhs: &EgfSeries) -> EgfSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &EgfSeries {
    type Output = EgfSeries;
    fn neg(self) -> EgfSeries {
        EgfSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Truncated Cauchy product; the result has the smaller of the two orders.
impl Mul for &EgfSeries {
    type Output = EgfSeries;
    fn mul(self, rhs: &EgfSeries) -> EgfSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        EgfSeries { coeffs }
    }
}
