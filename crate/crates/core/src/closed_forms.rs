//! Closed forms: factorization counts in cyclic groups, the comparison of
//! connected counts in G(r,s,n) with those of the underlying permutation in
//! S_n, and the generating-series identities built on it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binomial, factorial};
use crate::counting::Counter;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupParams};
use crate::series::EgfSeries;

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn to_natural(v: BigRational, what: &str) -> Result<BigUint> {
    if !v.is_integer() || v.is_negative() {
        return Err(Error::NonIntegral(format!("{what} evaluated to {v}")));
    }
    Ok(v.to_integer().to_biguint().unwrap())
}

/// Number of ways to write `ζ_q^t` as a product of `m` nontrivial elements
/// of the cyclic group `μ_q`.
pub fn cyclic_count(q: u32, t: u32, m: u32) -> Result<BigUint> {
    if q == 0 || t >= q {
        return Err(Error::InvalidRequest(format!("cyclic count needs 0 <= t < q, got q={q}, t={t}")));
    }
    if q == 1 {
        return Ok(if m == 0 { BigUint::one() } else { BigUint::zero() });
    }
    let sign = if m.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let mut v = BigInt::from(q - 1).pow(m) - &sign;
    debug_assert!((&v % BigInt::from(q)).is_zero());
    v /= BigInt::from(q);
    if t == 0 {
        v += sign;
    }
    Ok(v.to_biguint().expect("cyclic counts are nonnegative"))
}

/// `r^{m1-n+1} · n^{m2} · C(m1+m2, m1) · f_{m2}^{φ(ω)} · f̃_{m1}^{π(ω)}`,
/// evaluated exactly and required to be an integer.
pub fn comparison_refined(counter: &Counter, w: &GroupElement, m1: u32, m2: u32) -> Result<BigUint> {
    let params = w.params();
    let n = params.n() as i64;
    let r = params.r();
    let perm_connected = counter.connected_from_all(&w.project_pi(), m1)?;
    if perm_connected.is_zero() {
        return Ok(BigUint::zero());
    }
    let cyclic = cyclic_count(params.q(), w.project_phi(), m2)?;
    let r_power = m1 as i64 - n + 1;
    let r_factor = if r_power >= 0 {
        rat(BigInt::from(r).pow(r_power as u32))
    } else {
        rat(1) / rat(BigInt::from(r).pow((-r_power) as u32))
    };
    let v = r_factor
        * rat(BigInt::from(n).pow(m2))
        * rat(binomial((m1 + m2) as usize, m1 as usize))
        * rat(cyclic)
        * rat(perm_connected);
    to_natural(v, "comparison formula")
}

/// `Σ_{m1 ≤ m} comparison_refined(ω, m1, m - m1)`.
pub fn comparison_total(counter: &Counter, w: &GroupElement, m: u32) -> Result<BigUint> {
    let mut acc = BigUint::zero();
    for m1 in 0..=m {
        acc += comparison_refined(counter, w, m1, m - m1)?;
    }
    Ok(acc)
}

/// `(1/q)(e^{(q-1)x} − e^{−x}) + δ e^{−x}` with `q = r/s` and `δ = [t = 0]`.
pub fn phi_series(params: GroupParams, t: u32, order: usize) -> Result<EgfSeries> {
    let q = params.q();
    if t >= q {
        return Err(Error::InvalidRequest(format!("phi exponent {t} not in [0, {q})")));
    }
    let minus = EgfSeries::exp(&rat(-1), order);
    let body = (&EgfSeries::exp(&rat(q as i64 - 1), order) - &minus).scale(&(rat(1) / rat(q)));
    Ok(if t == 0 { &body + &minus } else { body })
}

/// `(1/r^{n-1}) f^{φ(ω)}(n x) f̃^{π(ω)}(r x)`, with the S_n connected series
/// taken from `counter`.
pub fn connected_series(counter: &Counter, w: &GroupElement, order: usize) -> Result<EgfSeries> {
    let params = w.params();
    let n = params.n();
    let r = params.r();
    let perm_counts = counter.connected_counts(&w.project_pi(), order as u32)?;
    let perm_series = EgfSeries::from_counts(&perm_counts.into_iter().map(BigInt::from).collect::<Vec<_>>());
    let phi = phi_series(params, w.project_phi(), order)?.rescale(&rat(n));
    let prod = &phi * &perm_series.rescale(&rat(r));
    Ok(prod.scale(&(rat(1) / rat(BigInt::from(r).pow(n - 1)))))
}

/// `(e^{ax/2} − e^{−ax/2})^{n−1}`.
fn sinh_power(a: u64, n: u32, order: usize) -> EgfSeries {
    let half = BigRational::new(BigInt::from(a), BigInt::from(2));
    let diff = &EgfSeries::exp(&half, order) - &EgfSeries::exp(&-half, order);
    diff.pow(n - 1)
}

/// `(1/n!)(e^{xn/2} − e^{−xn/2})^{n−1}`: all factorizations of a long cycle
/// in S_n.
pub fn jackson_series(n: u32, order: usize) -> Result<EgfSeries> {
    if n == 0 {
        return Err(Error::InvalidRequest("n must be positive".into()));
    }
    Ok(sinh_power(n as u64, n, order).scale(&(rat(1) / rat(factorial(n as usize)))))
}

/// `(1/(n! r^{n−1})) f^{φ}(n x) (e^{xrn/2} − e^{−xrn/2})^{n−1}`: all
/// factorizations of an element of G(r,s,n) lying over a long cycle.
pub fn long_cycle_series(params: GroupParams, t: u32, order: usize) -> Result<EgfSeries> {
    let n = params.n();
    let r = params.r();
    let phi = phi_series(params, t, order)?.rescale(&rat(n));
    let body = &phi * &sinh_power(r as u64 * n as u64, n, order);
    let norm = rat(factorial(n as usize)) * rat(BigInt::from(r).pow(n - 1));
    Ok(body.scale(&(rat(1) / norm)))
}
