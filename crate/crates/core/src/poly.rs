//! Symmetric Laurent polynomials in the monomial symmetric basis, and exact
//! linear solving for fitting them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{parse_rational, rational_string};

/// `Σ_λ c_λ m_λ(x_1..x_ℓ) / (x_1 + … + x_ℓ)^d`.
///
/// Keys are exponent vectors of length ℓ sorted in decreasing order; entries
/// may be negative (Laurent monomials). `d` is zero except for the unstable
/// two-variable convention `1/(x_1 + x_2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricLaurentPoly {
    vars: usize,
    terms: BTreeMap<Vec<i32>, BigRational>,
    power_sum_divisor: u32,
}

fn canonical(mut exps: Vec<i32>) -> Vec<i32> {
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps
}

/// Distinct rearrangements of a multiset, in lexicographic order.
fn distinct_permutations(sorted_desc: &[i32]) -> Vec<Vec<i32>> {
    let mut cur: Vec<i32> = sorted_desc.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next_permutation
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

fn int_pow(x: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// `m_λ(x)`.
pub fn monomial_symmetric(lambda: &[i32], x: &[BigRational]) -> BigRational {
    distinct_permutations(lambda)
        .iter()
        .map(|perm| perm.iter().zip(x).map(|(&e, xi)| int_pow(xi, e)).product::<BigRational>())
        .sum()
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: Vec<i32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
pub struct PolyJson {
    vars: usize,
    terms: Vec<TermJson>,
    power_sum_divisor: u32,
}

impl SymmetricLaurentPoly {
    pub fn zero(vars: usize) -> Self {
        SymmetricLaurentPoly { vars, terms: BTreeMap::new(), power_sum_divisor: 0 }
    }

    pub fn with_divisor(vars: usize, power_sum_divisor: u32) -> Self {
        SymmetricLaurentPoly { vars, terms: BTreeMap::new(), power_sum_divisor }
    }

    /// `c · m_λ`.
    pub fn monomial(lambda: Vec<i32>, c: BigRational) -> Self {
        let mut p = Self::zero(lambda.len());
        p.add_term(lambda, c);
        p
    }

    /// Adds `c · m_λ`; λ is sorted into canonical order.
    pub fn add_term(&mut self, lambda: Vec<i32>, c: BigRational) {
        assert_eq!(lambda.len(), self.vars, "exponent vector length must equal the number of variables");
        let key = canonical(lambda);
        let slot = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn power_sum_divisor(&self) -> u32 {
        self.power_sum_divisor
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lambda: &[i32]) -> BigRational {
        self.terms.get(&canonical(lambda.to_vec())).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degrees of the nonzero terms, net of the divisor.
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.terms
            .keys()
            .map(|k| k.iter().map(|&e| e as i64).sum::<i64>() - self.power_sum_divisor as i64)
            .collect()
    }

    pub fn evaluate(&self, x: &[BigRational]) -> Result<BigRational> {
        if x.len() != self.vars {
            return Err(Error::InvalidRequest(format!("expected {} arguments, got {}", self.vars, x.len())));
        }
        let mut acc = BigRational::zero();
        for (lambda, c) in &self.terms {
            acc += c * monomial_symmetric(lambda, x);
        }
        if self.power_sum_divisor > 0 {
            let p1: BigRational = x.iter().cloned().sum();
            if p1.is_zero() {
                return Err(Error::InvalidRequest("power-sum divisor vanishes".into()));
            }
            acc /= num_traits::pow(p1, self.power_sum_divisor as usize);
        }
        Ok(acc)
    }

    pub fn evaluate_at(&self, x: &[u32]) -> Result<BigRational> {
        let x: Vec<BigRational> = x.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        self.evaluate(&x)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::with_divisor(self.vars, self.power_sum_divisor);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Sum of two polynomials with the same divisor.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.vars != other.vars || self.power_sum_divisor != other.power_sum_divisor {
            return Err(Error::InvalidRequest("adding polynomials of different shapes".into()));
        }
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    /// Multiplies by `(x_1 + … + x_ℓ)^j`, cancelling the divisor first.
    pub fn times_power_sum(&self, j: u32) -> Self {
        let cancel = j.min(self.power_sum_divisor);
        let j = j - cancel;
        let divisor = self.power_sum_divisor - cancel;
        // expand into full monomials, multiply, then read off sorted keys
        let mut full: BTreeMap<Vec<i32>, BigRational> = BTreeMap::new();
        for (lambda, c) in &self.terms {
            for perm in distinct_permutations(lambda) {
                *full.entry(perm).or_insert_with(BigRational::zero) += c;
            }
        }
        for _ in 0..j {
            let mut next: BTreeMap<Vec<i32>, BigRational> = BTreeMap::new();
            for (e, c) in &full {
                for i in 0..self.vars {
                    let mut f = e.clone();
                    f[i] += 1;
                    *next.entry(f).or_insert_with(BigRational::zero) += c;
                }
            }
            full = next;
        }
        let mut out = Self::with_divisor(self.vars, divisor);
        for (e, c) in full {
            if !c.is_zero() && e.windows(2).all(|w| w[0] >= w[1]) {
                out.terms.insert(e, c);
            }
        }
        out
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars,
            terms: self.terms.iter().map(|(k, v)| TermJson { exps: k.clone(), coeff: rational_string(v) }).collect(),
            power_sum_divisor: self.power_sum_divisor,
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let mut p = Self::with_divisor(j.vars, j.power_sum_divisor);
        for t in &j.terms {
            if t.exps.len() != j.vars {
                return Err(Error::InvalidRequest("term length does not match vars".into()));
            }
            p.add_term(t.exps.clone(), parse_rational(&t.coeff)?);
        }
        Ok(p)
    }
}

impl Serialize for SymmetricLaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricLaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        Self::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// Outcome of an exact solve of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<BigRational>),
    Inconsistent { rank: usize },
    Underdetermined { rank: usize },
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// Row echelon form by fraction-free (Bareiss) elimination. Returns the
/// pivot columns; every division is exact.
fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..m[i].len() {
                let v = &m[row][col] * &m[i][j] - &m[i][col] * &m[row][j];
                let (quot, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[i][j] = quot;
            }
            m[i][col] = BigInt::zero();
        }
        // rows above the pivot row are untouched below col; scale them so the
        // exactness invariant carries to the next pivot
        prev = m[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Solves `A x = b` exactly.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Solution {
    let unknowns = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut full = row.clone();
            full.push(rhs.clone());
            clear_denominators(&full)
        })
        .collect();
    let pivots = bareiss(&mut m, unknowns);
    let rank = pivots.len();
    if m[rank..].iter().any(|row| !row[unknowns].is_zero()) {
        return Solution::Inconsistent { rank };
    }
    if rank < unknowns {
        return Solution::Underdetermined { rank };
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate().rev() {
        let mut acc = BigRational::from_integer(m[i][unknowns].clone());
        for j in col + 1..unknowns {
            acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[col] = acc / BigRational::from_integer(m[i][col].clone());
    }
    Solution::Unique(x)
}

/// Rank of `A`.
pub fn rank(a: &[Vec<BigRational>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| clear_denominators(r)).collect();
    bareiss(&mut m, cols).len()
}

#[allow(dead_code)]
pub(crate) fn is_nonnegative_integer(q: &BigRational) -> bool {
    q.is_integer() && !q.is_negative()
}
