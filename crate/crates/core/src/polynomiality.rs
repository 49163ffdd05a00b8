//! Recovery of the symmetric polynomials behind connected factorization
//! counts, by exact interpolation over sampled cycle types.
//!
//! A connected count is normalized as
//! `f̃_m^ω = prefactor(m) · ∏ n_i^{n_i+1}/n_i! · P(n_1, …, n_ℓ)`
//! and `P` is fitted in the monomial symmetric basis over the degree window
//! `[2g−3+ℓ, 3g−3+ℓ]`, where `m = 2g + n + ℓ − 2`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::closed_forms::cyclic_count;
use crate::combinatorics::factorial;
use crate::counting::Counter;
use crate::error::{Error, Result};
use crate::group::{CycleType, GroupParams};
use crate::poly::{solve, Solution, SymmetricLaurentPoly};
use crate::series::rational_string;

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn rpow(base: u32, e: i64) -> BigRational {
    let p = rat(BigInt::from(base).pow(e.unsigned_abs() as u32));
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// A genus `g ∈ ½ℤ_{≥0}`, stored as `2g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genus {
    twice: u32,
}

impl Genus {
    pub fn from_twice(twice: u32) -> Self {
        Genus { twice }
    }

    pub fn integer(g: u32) -> Self {
        Genus { twice: 2 * g }
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    pub fn is_integer(&self) -> bool {
        self.twice.is_multiple_of(2)
    }

    /// The genus of length-`m` data with `n` points and `ℓ` cycles, if any.
    pub fn of(m: u32, n: u32, ell: usize) -> Option<Self> {
        let twice = m as i64 - n as i64 - ell as i64 + 2;
        (twice >= 0).then_some(Genus { twice: twice as u32 })
    }

    /// `m = 2g + n + ℓ − 2`.
    pub fn length(&self, n: u32, ell: usize) -> Result<u32> {
        let m = self.twice as i64 + n as i64 + ell as i64 - 2;
        u32::try_from(m).map_err(|_| Error::InvalidRequest(format!("no length for g={self}, n={n}, l={ell}")))
    }

    /// Integer degree window `[⌈2g−3+ℓ⌉, ⌊3g−3+ℓ⌋]`; may be empty.
    pub fn window(&self, ell: usize) -> (i64, i64) {
        let g2 = self.twice as i64;
        let ell = ell as i64;
        (g2 - 3 + ell, (3 * g2 - 6 + 2 * ell).div_euclid(2))
    }

    pub fn is_unstable(&self, ell: usize) -> bool {
        self.twice == 0 && ell <= 2
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Genus {
    type Err = Error;

    /// Accepts `3`, `5/2` or `2.5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRequest(format!("genus must be a nonnegative integer or half-integer, got {s:?}"));
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(Genus { twice: 2 * num }),
                "2" => Ok(Genus { twice: num }),
                _ => Err(bad()),
            };
        }
        if let Some(int) = s.strip_suffix(".5") {
            let int: u32 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            return Ok(Genus { twice: 2 * int + 1 });
        }
        let int: u32 = s.strip_suffix(".0").unwrap_or(s).parse().map_err(|_| bad())?;
        Ok(Genus { twice: 2 * int })
    }
}

impl Serialize for Genus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Genus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Which power of `r` multiplies `m!` in the normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `m! / r^{n−1}`.
    Printed,
    /// `m! · r^{m−n+1}`.
    Derived,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Printed => "printed",
            Normalization::Derived => "derived",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Normalization::Printed),
            "derived" => Ok(Normalization::Derived),
            _ => Err(Error::InvalidRequest(format!("normalization must be printed or derived, got {s:?}"))),
        }
    }
}

/// `prefactor(m) · ∏ n_i^{n_i+1}/n_i!`.
pub fn elsv_prefactor(m: u32, cycle_type: &CycleType, normalization: Normalization, r: u32) -> BigRational {
    let n = cycle_type.n() as i64;
    let r_exp = match normalization {
        Normalization::Printed => 1 - n,
        Normalization::Derived => m as i64 - n + 1,
    };
    let mut acc = rat(factorial(m as usize)) * rpow(r, r_exp);
    for &p in cycle_type.parts() {
        acc *= rat(BigInt::from(p).pow(p + 1)) / rat(factorial(p as usize));
    }
    acc
}

/// `f̃ / (prefactor(m) · ∏ n_i^{n_i+1}/n_i!)`.
pub fn elsv_normalize(
    count: &BigUint,
    m: u32,
    cycle_type: &CycleType,
    normalization: Normalization,
    params: GroupParams,
) -> Result<BigRational> {
    if cycle_type.n() != params.n() {
        return Err(Error::InvalidRequest(format!("cycle type {cycle_type} does not fit {params}")));
    }
    Ok(rat(count.clone()) / elsv_prefactor(m, cycle_type, normalization, params.r()))
}

/// True iff every nonzero term has total degree in `[2g−3+ℓ, 3g−3+ℓ]`.
pub fn degree_window_check(poly: &SymmetricLaurentPoly, genus: Genus, ell: usize) -> bool {
    let g2 = genus.twice() as i64;
    let ell = ell as i64;
    poly.degrees().iter().all(|&d| d >= g2 - 3 + ell && 2 * d <= 3 * g2 - 6 + 2 * ell)
}

/// Partitions of `n` into exactly `ell` positive parts.
pub fn cycle_types(n: u32, ell: usize) -> Vec<CycleType> {
    fn rec(rest: u32, slots: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<CycleType>) {
        if slots == 0 {
            if rest == 0 {
                out.push(CycleType::new(cur.clone()).unwrap());
            }
            return;
        }
        let lo = rest.div_ceil(slots as u32).max(1);
        for p in (lo..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, slots - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if ell > 0 && n as usize >= ell {
        rec(n, ell, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Exponent vectors of length `ell` with nonincreasing entries summing to `d`.
fn partitions_padded(d: i64, ell: usize) -> Vec<Vec<i32>> {
    fn rec(rest: i64, slots: usize, max: i64, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if slots == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for p in (0..=max.min(rest)).rev() {
            cur.push(p as i32);
            rec(rest - p, slots - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d >= 0 {
        rec(d, ell, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Basis shape for `(g, ℓ)`: a fixed power-sum divisor and a list of `λ`.
fn basis(genus: Genus, ell: usize) -> (u32, Vec<Vec<i32>>) {
    let (lo, hi) = genus.window(ell);
    if genus.is_unstable(ell) && ell == 2 {
        return (1, vec![vec![0, 0]]);
    }
    if ell == 1 {
        return (0, (lo..=hi).map(|d| vec![d as i32]).collect());
    }
    (0, (lo.max(0)..=hi).flat_map(|d| partitions_padded(d, ell)).collect())
}

/// The fixed unstable forms `1/x²` and `1/(x₁+x₂)`.
pub fn unstable_convention(ell: usize) -> Result<SymmetricLaurentPoly> {
    match ell {
        1 => Ok(SymmetricLaurentPoly::monomial(vec![-2], BigRational::one())),
        2 => {
            let mut p = SymmetricLaurentPoly::with_divisor(2, 1);
            p.add_term(vec![0, 0], BigRational::one());
            Ok(p)
        }
        _ => Err(Error::InvalidRequest(format!("(0,{ell}) is stable"))),
    }
}

/// One normalized data point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub cycle_type: CycleType,
    pub n: u32,
    pub m: u32,
    pub count: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeldOut {
    pub point: SamplePoint,
    pub predicted: String,
    pub residual: String,
}

/// Result of an accepted fit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitReport {
    pub genus: Genus,
    pub ell: usize,
    pub r: u32,
    pub s: u32,
    pub delta: Option<u8>,
    pub normalization: Normalization,
    pub window: (i64, i64),
    pub basis: Vec<Vec<i32>>,
    pub polynomial: SymmetricLaurentPoly,
    pub training: Vec<SamplePoint>,
    pub held_out: Vec<HeldOut>,
    pub window_ok: bool,
    /// Some held-out sample sits at an `n` absent from training and was
    /// reproduced exactly.
    pub n_independent: bool,
}

/// A connected count sampled at a cycle type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub cycle_type: CycleType,
    pub delta: u8,
    pub count: BigUint,
}

struct Point {
    sample: SamplePoint,
    x: Vec<u32>,
    value: BigRational,
}

fn make_points(
    genus: Genus,
    ell: usize,
    params: GroupParams,
    normalization: Normalization,
    samples: &[Sample],
) -> Result<Vec<Point>> {
    let mut pts = Vec::with_capacity(samples.len());
    for s in samples {
        let ct = &s.cycle_type;
        if ct.len() != ell {
            return Err(Error::InvalidRequest(format!("sample {ct} has {} cycles, expected {ell}", ct.len())));
        }
        let n = ct.n();
        let m = genus.length(n, ell)?;
        let value = elsv_normalize(&s.count, m, ct, normalization, params.with_n(n)?)?;
        pts.push(Point {
            sample: SamplePoint {
                cycle_type: ct.clone(),
                n,
                m,
                count: s.count.to_string(),
                value: rational_string(&value),
            },
            x: ct.parts().to_vec(),
            value,
        });
    }
    pts.sort_by(|a, b| (a.sample.n, &a.sample.cycle_type).cmp(&(b.sample.n, &b.sample.cycle_type)));
    Ok(pts)
}

fn evaluate_basis(divisor: u32, lambdas: &[Vec<i32>], x: &[u32]) -> Vec<BigRational> {
    lambdas
        .iter()
        .map(|l| {
            let mut p = SymmetricLaurentPoly::with_divisor(x.len(), divisor);
            p.add_term(l.clone(), BigRational::one());
            p.evaluate_at(x).expect("cycle-type parts are positive")
        })
        .collect()
}

fn residuals(poly: &SymmetricLaurentPoly, pts: &[&Point]) -> Vec<HeldOut> {
    pts.iter()
        .map(|p| {
            let predicted = poly.evaluate_at(&p.x).expect("cycle-type parts are positive");
            HeldOut {
                point: p.sample.clone(),
                residual: rational_string(&(&p.value - &predicted)),
                predicted: rational_string(&predicted),
            }
        })
        .collect()
}

fn describe(bad: &[HeldOut]) -> String {
    bad.iter()
        .map(|h| format!("n={} type {} value {} predicted {}", h.point.n, h.point.cycle_type, h.point.value, h.predicted))
        .collect::<Vec<_>>()
        .join("; ")
}

enum SplitPolicy {
    /// Hold out the largest n if the rest determines the fit, else train on all.
    Lenient,
    /// Always hold out the largest n.
    Strict,
}

#[allow(clippy::too_many_arguments)]
fn fit_points(
    genus: Genus,
    ell: usize,
    params: GroupParams,
    delta: Option<u8>,
    normalization: Normalization,
    pts: Vec<Point>,
    policy: SplitPolicy,
) -> Result<FitReport> {
    if pts.is_empty() {
        return Err(Error::InvalidRequest("no samples".into()));
    }
    let (divisor, lambdas) = basis(genus, ell);
    let unknowns = lambdas.len();
    let max_n = pts.iter().map(|p| p.sample.n).max().unwrap();
    let distinct_n: BTreeSet<u32> = pts.iter().map(|p| p.sample.n).collect();

    let system = |set: &[&Point]| {
        let a: Vec<Vec<BigRational>> = set.iter().map(|p| evaluate_basis(divisor, &lambdas, &p.x)).collect();
        let b: Vec<BigRational> = set.iter().map(|p| p.value.clone()).collect();
        solve(&a, &b)
    };
    let to_poly = |coeffs: &[BigRational]| {
        let mut p = SymmetricLaurentPoly::with_divisor(ell, divisor);
        for (l, c) in lambdas.iter().zip(coeffs) {
            p.add_term(l.clone(), c.clone());
        }
        p
    };

    let all: Vec<&Point> = pts.iter().collect();
    let below: Vec<&Point> = pts.iter().filter(|p| p.sample.n < max_n).collect();
    let above: Vec<&Point> = pts.iter().filter(|p| p.sample.n == max_n).collect();

    let (training, held) = match policy {
        SplitPolicy::Strict => (below, above),
        SplitPolicy::Lenient => {
            if !below.is_empty() && !matches!(system(&below), Solution::Underdetermined { .. }) {
                (below, above)
            } else {
                (all, Vec::new())
            }
        }
    };
    if training.is_empty() {
        return Err(Error::Underdetermined { rank: 0, unknowns });
    }

    let coeffs = match system(&training) {
        Solution::Unique(c) => c,
        Solution::Underdetermined { rank } => return Err(Error::Underdetermined { rank, unknowns }),
        Solution::Inconsistent { .. } => {
            let ns: BTreeSet<u32> = training.iter().map(|p| p.sample.n).collect();
            // evidence: fit the smallest n alone when that suffices
            let first: Vec<&Point> = training.iter().copied().filter(|p| p.sample.n == *ns.first().unwrap()).collect();
            let evidence = match system(&first) {
                Solution::Unique(c) => {
                    let bad: Vec<HeldOut> = residuals(&to_poly(&c), &training)
                        .into_iter()
                        .filter(|h| h.residual != "0/1")
                        .collect();
                    describe(&bad)
                }
                _ => training.iter().map(|p| format!("n={} value {}", p.sample.n, p.sample.value)).collect::<Vec<_>>().join("; "),
            };
            return Err(if ns.len() > 1 {
                Error::NInconsistent(evidence)
            } else {
                Error::FitFailure(format!("training samples admit no polynomial in the window: {evidence}"))
            });
        }
    };

    let polynomial = to_poly(&coeffs);
    let held_out = residuals(&polynomial, &held);
    let bad: Vec<HeldOut> = held_out.iter().filter(|h| h.residual != "0/1").cloned().collect();
    if !bad.is_empty() {
        return Err(match policy {
            SplitPolicy::Strict => Error::NInconsistent(describe(&bad)),
            SplitPolicy::Lenient => Error::FitFailure(format!("nonzero held-out residual: {}", describe(&bad))),
        });
    }
    let training_ns: BTreeSet<u32> = training.iter().map(|p| p.sample.n).collect();
    let n_independent = held.iter().any(|p| !training_ns.contains(&p.sample.n)) && distinct_n.len() > 1;
    Ok(FitReport {
        genus,
        ell,
        r: params.r(),
        s: params.s(),
        delta,
        normalization,
        window: genus.window(ell),
        basis: lambdas.clone(),
        window_ok: degree_window_check(&polynomial, genus, ell),
        polynomial,
        training: training.iter().map(|p| p.sample.clone()).collect(),
        held_out,
        n_independent,
    })
}

/// Fits `P_{g,ℓ}` from symmetric-group samples `(cycle type, f̃)`.
///
/// For `(0,1)` and `(0,2)` the fixed forms `1/x²` and `1/(x₁+x₂)` are
/// returned after checking them against every sample.
pub fn fit_sn_polynomial(g: u32, ell: usize, samples: &[(CycleType, BigUint)]) -> Result<FitReport> {
    if ell == 0 {
        return Err(Error::InvalidRequest("l must be positive".into()));
    }
    if samples.is_empty() {
        return Err(Error::InvalidRequest("no samples".into()));
    }
    let genus = Genus::integer(g);
    let samples: Vec<Sample> =
        samples.iter().map(|(ct, c)| Sample { cycle_type: ct.clone(), delta: 1, count: c.clone() }).collect();
    let params = GroupParams::new(1, 1, 1)?;
    let pts = make_points(genus, ell, params, Normalization::Printed, &samples)?;
    if genus.is_unstable(ell) {
        let polynomial = unstable_convention(ell)?;
        let held: Vec<&Point> = pts.iter().collect();
        let held_out = residuals(&polynomial, &held);
        let bad: Vec<HeldOut> = held_out.iter().filter(|h| h.residual != "0/1").cloned().collect();
        if !bad.is_empty() {
            return Err(Error::FitFailure(format!("convention disagrees with data: {}", describe(&bad))));
        }
        let (divisor, lambdas) = basis(genus, ell);
        debug_assert_eq!(divisor, polynomial.power_sum_divisor());
        return Ok(FitReport {
            genus,
            ell,
            r: 1,
            s: 1,
            delta: None,
            normalization: Normalization::Printed,
            window: genus.window(ell),
            basis: lambdas,
            window_ok: degree_window_check(&polynomial, genus, ell),
            polynomial,
            training: Vec::new(),
            n_independent: pts.iter().map(|p| p.sample.n).collect::<BTreeSet<_>>().len() > 1,
            held_out,
        });
    }
    fit_points(genus, ell, params, None, Normalization::Printed, pts, SplitPolicy::Lenient)
}

/// Fits `P^δ_{g,ℓ}` for G(r,s,n) from samples spanning at least two values
/// of `n`; samples at the largest `n` are held out.
pub fn fit_grsn_polynomial(
    genus: Genus,
    ell: usize,
    delta: u8,
    params: GroupParams,
    normalization: Normalization,
    samples: &[Sample],
) -> Result<FitReport> {
    if ell == 0 {
        return Err(Error::InvalidRequest("l must be positive".into()));
    }
    if delta > 1 {
        return Err(Error::InvalidRequest(format!("delta must be 0 or 1, got {delta}")));
    }
    if let Some(s) = samples.iter().find(|s| s.delta != delta) {
        return Err(Error::InvalidRequest(format!("sample {} has delta {}, expected {delta}", s.cycle_type, s.delta)));
    }
    let ns: BTreeSet<u32> = samples.iter().map(|s| s.cycle_type.n()).collect();
    if ns.len() < 2 {
        return Err(Error::InvalidRequest(format!(
            "samples span {} value(s) of n; n-independence needs at least two",
            ns.len()
        )));
    }
    let pts = make_points(genus, ell, params, normalization, samples)?;
    fit_points(genus, ell, params, Some(delta), normalization, pts, SplitPolicy::Strict)
}

/// Inverts the normalization at a new cycle type.
pub fn predict_connected_count(
    report: &FitReport,
    cycle_type: &CycleType,
    params: GroupParams,
    delta: u8,
    m: u32,
) -> Result<BigUint> {
    if cycle_type.len() != report.ell {
        return Err(Error::InvalidRequest(format!("{cycle_type} has {} cycles, report has l={}", cycle_type.len(), report.ell)));
    }
    if (params.r(), params.s()) != (report.r, report.s) {
        return Err(Error::InvalidRequest(format!("report is for r={}, s={}, not {params}", report.r, report.s)));
    }
    if report.delta.is_some_and(|d| d != delta) {
        return Err(Error::InvalidRequest(format!("report is for delta={:?}, not {delta}", report.delta)));
    }
    let expected = report.genus.length(cycle_type.n(), report.ell)?;
    if m != expected {
        return Err(Error::InvalidRequest(format!("g={} needs m={expected}, got m={m}", report.genus)));
    }
    let v = report.polynomial.evaluate_at(cycle_type.parts())?
        * elsv_prefactor(m, cycle_type, report.normalization, params.r());
    if !v.is_integer() || v.is_negative() {
        return Err(Error::NonIntegral(format!("prediction for {cycle_type} at m={m} is {v}")));
    }
    Ok(v.to_integer().to_biguint().unwrap())
}

/// How sampled counts are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMethod {
    Inversion,
    Enumeration,
}

/// Connected counts at the canonical representative of every cycle type of
/// length `ell`, for each `n`.
pub fn generate_samples(
    counter: &Counter,
    params: GroupParams,
    genus: Genus,
    ell: usize,
    delta: u8,
    ns: &[u32],
    method: SampleMethod,
) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for &n in ns {
        let p = params.with_n(n)?;
        let m = genus.length(n, ell)?;
        for ct in cycle_types(n, ell) {
            let w = ct.representative(p, delta)?;
            let count = match method {
                SampleMethod::Inversion => counter.connected_from_all(&w, m)?,
                SampleMethod::Enumeration => counter.count_connected_enum_total(&w, m)?,
            };
            out.push(Sample { cycle_type: ct, delta, count });
        }
    }
    Ok(out)
}

/// `Σ_j r^{−j} f_j^φ / j! · (x_1+…+x_ℓ)^j · P_{g−j/2,ℓ}`, the polynomial the
/// comparison formula predicts under the derived normalization. `sn` maps
/// `2g'` to `P_{g',ℓ}`; half-integer genera of S_n vanish and may be absent.
pub fn expected_from_sn(
    params: GroupParams,
    delta: u8,
    genus: Genus,
    ell: usize,
    sn: &dyn Fn(Genus) -> Result<SymmetricLaurentPoly>,
) -> Result<SymmetricLaurentPoly> {
    let q = params.q();
    let t = if delta == 1 {
        0
    } else if q >= 2 {
        1
    } else {
        return Err(Error::InvalidRequest(format!("{params} has no elements with delta = 0")));
    };
    let mut acc: Option<SymmetricLaurentPoly> = None;
    for j in 0..=genus.twice() {
        let c = rat(cyclic_count(q, t, j)?) * rpow(params.r(), -(j as i64)) / rat(factorial(j as usize));
        if c.is_zero() {
            continue;
        }
        let base = sn(Genus::from_twice(genus.twice() - j))?;
        let term = base.times_power_sum(j).scale(&c);
        acc = Some(match acc {
            None => term,
            Some(a) if a.power_sum_divisor() == term.power_sum_divisor() => a.add(&term)?,
            Some(a) => return Err(Error::InvalidRequest(format!("mixed divisors {} and {}", a.power_sum_divisor(), term.power_sum_divisor()))),
        });
    }
    Ok(acc.unwrap_or_else(|| SymmetricLaurentPoly::with_divisor(ell, basis(genus, ell).0)))
}

/// Outcome of fitting under one normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Attempt {
    Accepted { report: Box<FitReport> },
    Rejected { error: String },
}

/// Both normalizations tried on the same samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationVerdict {
    pub genus: Genus,
    pub ell: usize,
    pub r: u32,
    pub s: u32,
    pub delta: u8,
    pub ns: Vec<u32>,
    /// Normalized values under each prefactor, one row per sample.
    pub evidence: Vec<VerdictRow>,
    pub printed: Attempt,
    pub derived: Attempt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub cycle_type: CycleType,
    pub n: u32,
    pub m: u32,
    pub count: String,
    pub printed: String,
    pub derived: String,
}

impl NormalizationVerdict {
    /// Normalizations under which the fit was accepted with an exact
    /// prediction at an unseen n.
    pub fn successful(&self) -> Vec<Normalization> {
        let mut out = Vec::new();
        for (nz, a) in [(Normalization::Printed, &self.printed), (Normalization::Derived, &self.derived)] {
            if matches!(a, Attempt::Accepted { report } if report.n_independent) {
                out.push(nz);
            }
        }
        out
    }
}

pub fn normalization_verdict(
    genus: Genus,
    ell: usize,
    delta: u8,
    params: GroupParams,
    samples: &[Sample],
) -> Result<NormalizationVerdict> {
    let attempt = |nz| match fit_grsn_polynomial(genus, ell, delta, params, nz, samples) {
        Ok(report) => Ok(Attempt::Accepted { report: Box::new(report) }),
        Err(e) if e.is_consistency_failure() => Ok(Attempt::Rejected { error: e.to_string() }),
        Err(e) => Err(e),
    };
    let printed = attempt(Normalization::Printed)?;
    let derived = attempt(Normalization::Derived)?;
    let mut evidence = Vec::with_capacity(samples.len());
    for s in samples {
        let n = s.cycle_type.n();
        let m = genus.length(n, ell)?;
        let p = params.with_n(n)?;
        evidence.push(VerdictRow {
            cycle_type: s.cycle_type.clone(),
            n,
            m,
            count: s.count.to_string(),
            printed: rational_string(&elsv_normalize(&s.count, m, &s.cycle_type, Normalization::Printed, p)?),
            derived: rational_string(&elsv_normalize(&s.count, m, &s.cycle_type, Normalization::Derived, p)?),
        });
    }
    let ns: BTreeSet<u32> = samples.iter().map(|s| s.cycle_type.n()).collect();
    Ok(NormalizationVerdict {
        genus,
        ell,
        r: params.r(),
        s: params.s(),
        delta,
        ns: ns.into_iter().collect(),
        evidence,
        printed,
        derived,
    })
}
