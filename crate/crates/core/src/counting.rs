//! Exact factorization counts.
//!
//! * `f_m^ω` and `f_{m1,m2}^ω` come from a dynamic program over the whole
//!   group: a dense count vector indexed by a perfect ranking of G(r,s,n),
//!   advanced one reflection at a time.
//! * Connected counts `f̃` come either from brute-force enumeration of
//!   reflection tuples (the oracle), or from inverting the decomposition of a
//!   graph into connected components over the partitions of `ω`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binomial, binomial_convolution};
use crate::dsu::RollbackDsu;
use crate::error::{Error, Result};
use crate::group::{reflections, GroupElement, GroupParams, Reflection};
use crate::table::{CountKey, CountTable, Provenance, SharedTable};

/// Guardrails against runaway enumeration or DP sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of reflection tuples one enumeration may visit.
    pub max_enum_tuples: u128,
    /// Largest `|G| · rounds` a DP may allocate.
    pub max_dp_states: u128,
    pub parallel: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_enum_tuples: 1_000_000_000, max_dp_states: 200_000_000, parallel: true }
    }
}

/// Perfect ranking of G(r,s,n): permutation rank (Lehmer code) in the high
/// digits, then `n-1` free exponents in base r, then the last exponent's
/// quotient by s (its residue mod s is forced by the group condition).
#[derive(Debug, Clone)]
pub struct ElementIndex {
    params: GroupParams,
    exp_block: u64,
    size: u64,
}

impl ElementIndex {
    pub fn new(params: GroupParams) -> Result<Self> {
        let size = params.order();
        if size > u64::MAX as u128 / 2 || params.n() > 20 {
            return Err(Error::ResourceLimit { what: "group order", needed: size, limit: u64::MAX as u128 / 2 });
        }
        let exp_block = (params.r() as u64).pow(params.n() - 1) * params.q() as u64;
        Ok(ElementIndex { params, exp_block, size: size as u64 })
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn rank(&self, e: &GroupElement) -> usize {
        let perm = e.perm();
        let n = perm.len();
        let mut prank: u64 = 0;
        let mut used: u32 = 0;
        for (i, &p) in perm.iter().enumerate() {
            let smaller_unused = (p as usize) - (used & ((1u32 << p) - 1)).count_ones() as usize;
            prank = prank * (n - i) as u64 + smaller_unused as u64;
            used |= 1 << p;
        }
        let r = self.params.r() as u64;
        let s = self.params.s() as u64;
        let exps = e.exps();
        let mut erank: u64 = 0;
        for &x in &exps[..n - 1] {
            erank = erank * r + x as u64;
        }
        erank = erank * self.params.q() as u64 + exps[n - 1] as u64 / s;
        (prank * self.exp_block + erank) as usize
    }

    pub fn unrank(&self, idx: usize) -> GroupElement {
        let n = self.params.n() as usize;
        let r = self.params.r() as u64;
        let s = self.params.s() as u64;
        let q = self.params.q() as u64;
        let idx = idx as u64;
        let mut prank = idx / self.exp_block;
        let mut erank = idx % self.exp_block;

        let mut exps = vec![0u32; n];
        let j = erank % q;
        erank /= q;
        for slot in (0..n - 1).rev() {
            exps[slot] = (erank % r) as u32;
            erank /= r;
        }
        let partial: u64 = exps[..n - 1].iter().map(|&x| x as u64).sum();
        exps[n - 1] = ((s - partial % s) % s + s * j) as u32;

        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let base = (n - i) as u64;
            digits[i] = (prank % base) as usize;
            prank /= base;
        }
        let mut avail: Vec<u32> = (0..n as u32).collect();
        let perm: Vec<u32> = digits.iter().map(|&d| avail.remove(d)).collect();
        GroupElement::from_parts_unchecked(self.params, perm, exps)
    }
}

/// One DP round: `next[h] = Σ_{ρ ∈ step} prev[ρ h]`. Valid because each step
/// set is closed under inverses.
fn dp_step(index: &ElementIndex, step: &[Reflection], prev: &[BigUint], parallel: bool) -> Vec<BigUint> {
    let cell = |h: usize| {
        let base = index.unrank(h);
        let mut acc = BigUint::zero();
        for rho in step {
            let mut g = base.clone();
            rho.apply_left(&mut g);
            let v = &prev[index.rank(&g)];
            if !v.is_zero() {
                acc += v;
            }
        }
        acc
    };
    if parallel {
        (0..index.size()).into_par_iter().map(cell).collect()
    } else {
        (0..index.size()).map(cell).collect()
    }
}

fn delta_vector(index: &ElementIndex) -> Vec<BigUint> {
    let mut v = vec![BigUint::zero(); index.size()];
    v[index.rank(&GroupElement::identity(index.params))] = BigUint::one();
    v
}

fn split_reflections(params: GroupParams) -> (Vec<Reflection>, Vec<Reflection>) {
    reflections(params).into_iter().partition(Reflection::is_swap)
}

#[derive(Debug)]
struct TotalDp {
    index: ElementIndex,
    rounds: Vec<Vec<BigUint>>,
}

#[derive(Debug)]
struct RefinedDp {
    index: ElementIndex,
    // cells[m1][m2]
    cells: Vec<Vec<Vec<BigUint>>>,
}

/// Product distribution of all tuples with a fixed split, total and connected.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct EnumCounts {
    pub counts: HashMap<GroupElement, (u64, u64)>,
}

impl EnumCounts {
    pub fn all(&self, w: &GroupElement) -> u64 {
        self.counts.get(w).map_or(0, |c| c.0)
    }

    pub fn connected(&self, w: &GroupElement) -> u64 {
        self.counts.get(w).map_or(0, |c| c.1)
    }

    fn merge(mut self, other: EnumCounts) -> EnumCounts {
        for (k, (a, c)) in other.counts {
            let e = self.counts.entry(k).or_insert((0, 0));
            e.0 += a;
            e.1 += c;
        }
        self
    }
}

struct TupleWalker<'a> {
    r1: &'a [Reflection],
    r2: &'a [Reflection],
    stack: Vec<GroupElement>,
    dsu: RollbackDsu,
    out: EnumCounts,
}

impl TupleWalker<'_> {
    fn push(&mut self, rho: &Reflection) {
        let mut next = self.stack.last().expect("stack starts with the identity").clone();
        rho.apply_left(&mut next);
        self.stack.push(next);
        match *rho {
            Reflection::Swap { i, j, .. } => {
                self.dsu.union(i - 1, j - 1);
            }
            Reflection::Diagonal { .. } => self.dsu.mark(),
        }
    }

    fn pop(&mut self) {
        self.stack.pop();
        self.dsu.rollback();
    }

    fn run(&mut self, left1: u32, left2: u32) {
        if left1 == 0 && left2 == 0 {
            let connected = u64::from(self.dsu.components() == 1);
            let top = self.stack.last().unwrap().clone();
            let e = self.out.counts.entry(top).or_insert((0, 0));
            e.0 += 1;
            e.1 += connected;
            return;
        }
        if left1 > 0 {
            for rho in self.r1 {
                self.push(rho);
                self.run(left1 - 1, left2);
                self.pop();
            }
        }
        if left2 > 0 {
            for rho in self.r2 {
                self.push(rho);
                self.run(left1, left2 - 1);
                self.pop();
            }
        }
    }
}

/// Enumerates every tuple in `R^{m1+m2}` with `m1` swaps and `m2` diagonals
/// and tallies its product, tracking connectivity with a rollback union-find.
pub fn enumerate_tuples(params: GroupParams, m1: u32, m2: u32, limits: &Limits) -> Result<EnumCounts> {
    let (r1, r2) = split_reflections(params);
    let m = (m1 + m2) as usize;
    let needed = (r1.len() as u128)
        .saturating_pow(m1)
        .saturating_mul((r2.len() as u128).saturating_pow(m2))
        .saturating_mul(binomial(m, m2 as usize).to_string().parse::<u128>().unwrap_or(u128::MAX));
    if needed > limits.max_enum_tuples {
        return Err(Error::ResourceLimit { what: "tuple enumeration", needed, limit: limits.max_enum_tuples });
    }
    let n = params.n() as usize;
    let fresh = || TupleWalker {
        r1: &r1,
        r2: &r2,
        stack: vec![GroupElement::identity(params)],
        dsu: RollbackDsu::new(n),
        out: EnumCounts::default(),
    };
    if m == 0 || !limits.parallel {
        let mut w = fresh();
        w.run(m1, m2);
        return Ok(w.out);
    }
    // split on the first factor
    let firsts: Vec<(Reflection, u32, u32)> = (if m1 > 0 { r1.iter().map(|&x| (x, m1 - 1, m2)).collect() } else { vec![] })
        .into_iter()
        .chain(if m2 > 0 { r2.iter().map(|&x| (x, m1, m2 - 1)).collect() } else { vec![] })
        .collect();
    Ok(firsts
        .par_iter()
        .map(|(rho, a, b)| {
            let mut w = fresh();
            w.push(rho);
            w.run(*a, *b);
            w.out
        })
        .reduce(EnumCounts::default, EnumCounts::merge))
}

/// Memoizing front end for all counting routes. Every value it returns is
/// also recorded in a shared [`CountTable`], so two routes that disagree on
/// a key surface as an error.
#[derive(Debug, Default)]
pub struct Counter {
    limits: Limits,
    totals: Mutex<HashMap<GroupParams, Arc<TotalDp>>>,
    refined: Mutex<HashMap<GroupParams, Arc<RefinedDp>>>,
    enumerations: Mutex<HashMap<(GroupParams, u32, u32), Arc<EnumCounts>>>,
    connected: Mutex<HashMap<GroupElement, Arc<Vec<BigUint>>>>,
    table: SharedTable,
}

impl Counter {
    pub fn new(limits: Limits) -> Self {
        Counter { limits, ..Default::default() }
    }

    pub fn with_table(limits: Limits, table: CountTable) -> Self {
        Counter { limits, table: SharedTable::new(table), ..Default::default() }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn table(&self) -> Arc<CountTable> {
        self.table.snapshot()
    }

    fn record(&self, key: CountKey, value: &BigUint, provenance: Provenance) -> Result<()> {
        self.table.insert(key, value.clone(), provenance)
    }

    fn check_dp(&self, index: &ElementIndex, rounds: u128) -> Result<()> {
        let needed = (index.size() as u128).saturating_mul(rounds);
        if needed > self.limits.max_dp_states {
            return Err(Error::ResourceLimit { what: "dp states", needed, limit: self.limits.max_dp_states });
        }
        Ok(())
    }

    fn total_dp(&self, params: GroupParams, m: u32) -> Result<Arc<TotalDp>> {
        if let Some(dp) = self.totals.lock().unwrap().get(&params) {
            if dp.rounds.len() > m as usize {
                return Ok(dp.clone());
            }
        }
        let index = ElementIndex::new(params)?;
        self.check_dp(&index, m as u128 + 1)?;
        let all = reflections(params);
        let mut rounds = vec![delta_vector(&index)];
        for _ in 0..m {
            let next = dp_step(&index, &all, rounds.last().unwrap(), self.limits.parallel);
            rounds.push(next);
        }
        let dp = Arc::new(TotalDp { index, rounds });
        self.totals.lock().unwrap().insert(params, dp.clone());
        Ok(dp)
    }

    /// `f_0^ω, …, f_m^ω`.
    pub fn total_counts(&self, w: &GroupElement, m: u32) -> Result<Vec<BigUint>> {
        let dp = self.total_dp(w.params(), m)?;
        let idx = dp.index.rank(w);
        let out: Vec<BigUint> = dp.rounds[..=m as usize].iter().map(|v| v[idx].clone()).collect();
        for (k, v) in out.iter().enumerate() {
            self.record(CountKey::total(w.clone(), k as u32, false), v, Provenance::Dp)?;
        }
        Ok(out)
    }

    /// `f_m^ω`: ordered m-tuples of reflections whose product is ω.
    pub fn count_all(&self, w: &GroupElement, m: u32) -> Result<BigUint> {
        Ok(self.total_counts(w, m)?.pop().unwrap())
    }

    fn refined_dp(&self, params: GroupParams, m1: u32, m2: u32) -> Result<Arc<RefinedDp>> {
        let (a, b) = (m1 as usize, m2 as usize);
        if let Some(dp) = self.refined.lock().unwrap().get(&params) {
            if dp.cells.len() > a && dp.cells[0].len() > b {
                return Ok(dp.clone());
            }
        }
        let index = ElementIndex::new(params)?;
        self.check_dp(&index, (m1 as u128 + 1) * (m2 as u128 + 1))?;
        let (r1, r2) = split_reflections(params);
        let mut cells: Vec<Vec<Vec<BigUint>>> = Vec::with_capacity(a + 1);
        for i in 0..=a {
            let mut row: Vec<Vec<BigUint>> = Vec::with_capacity(b + 1);
            for j in 0..=b {
                let cell = if i == 0 && j == 0 {
                    delta_vector(&index)
                } else {
                    let mut acc = vec![BigUint::zero(); index.size()];
                    if i > 0 {
                        for (x, y) in acc.iter_mut().zip(dp_step(&index, &r1, &cells[i - 1][j], self.limits.parallel)) {
                            *x += y;
                        }
                    }
                    if j > 0 && !r2.is_empty() {
                        for (x, y) in acc.iter_mut().zip(dp_step(&index, &r2, &row[j - 1], self.limits.parallel)) {
                            *x += y;
                        }
                    }
                    acc
                };
                row.push(cell);
            }
            cells.push(row);
        }
        let dp = Arc::new(RefinedDp { index, cells });
        self.refined.lock().unwrap().insert(params, dp.clone());
        Ok(dp)
    }

    /// `f_{m1,m2}^ω`: factorizations with `m1` swaps and `m2` diagonals.
    pub fn count_refined(&self, w: &GroupElement, m1: u32, m2: u32) -> Result<BigUint> {
        let dp = self.refined_dp(w.params(), m1, m2)?;
        let v = dp.cells[m1 as usize][m2 as usize][dp.index.rank(w)].clone();
        self.record(CountKey::refined(w.clone(), m1, m2, false), &v, Provenance::Dp)?;
        Ok(v)
    }

    pub fn enumeration(&self, params: GroupParams, m1: u32, m2: u32) -> Result<Arc<EnumCounts>> {
        let key = (params, m1, m2);
        if let Some(e) = self.enumerations.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let e = Arc::new(enumerate_tuples(params, m1, m2, &self.limits)?);
        self.enumerations.lock().unwrap().insert(key, e.clone());
        Ok(e)
    }

    /// `f_{m1,m2}^ω` by enumeration.
    pub fn count_refined_enum(&self, w: &GroupElement, m1: u32, m2: u32) -> Result<BigUint> {
        let v = BigUint::from(self.enumeration(w.params(), m1, m2)?.all(w));
        self.record(CountKey::refined(w.clone(), m1, m2, false), &v, Provenance::Enumeration)?;
        Ok(v)
    }

    /// `f̃_{m1,m2}^ω` by enumeration; the trusted oracle for connected counts.
    pub fn count_connected_enum(&self, w: &GroupElement, m1: u32, m2: u32) -> Result<BigUint> {
        let v = BigUint::from(self.enumeration(w.params(), m1, m2)?.connected(w));
        self.record(CountKey::refined(w.clone(), m1, m2, true), &v, Provenance::Enumeration)?;
        Ok(v)
    }

    /// `f̃_m^ω` summed over all splits, by enumeration.
    pub fn count_connected_enum_total(&self, w: &GroupElement, m: u32) -> Result<BigUint> {
        let mut acc = BigUint::zero();
        for m2 in 0..=m {
            acc += self.count_connected_enum(w, m - m2, m2)?;
        }
        self.record(CountKey::total(w.clone(), m, true), &acc, Provenance::Enumeration)?;
        Ok(acc)
    }

    /// `f̃_0^ω, …, f̃_m^ω` by inverting the component decomposition:
    /// `f̃_k = f_k − Σ_{partitions with ≥ 2 blocks} k! [x^k] ∏ f̃^{ω_i}(x)`.
    pub fn connected_counts(&self, w: &GroupElement, m: u32) -> Result<Vec<BigUint>> {
        let len = m as usize + 1;
        if let Some(v) = self.connected.lock().unwrap().get(w) {
            if v.len() >= len {
                return Ok(v[..len].to_vec());
            }
        }
        let totals = self.total_counts(w, m)?;
        let mut acc: Vec<BigInt> = totals.into_iter().map(BigInt::from).collect();
        for part in w.partitions() {
            if part.len() < 2 {
                continue;
            }
            let mut prod = vec![BigUint::zero(); len];
            prod[0] = BigUint::one();
            for block in part.dense_restrictions(w) {
                let c = self.connected_counts(&block, m)?;
                prod = binomial_convolution(&prod, &c, len);
            }
            for (a, p) in acc.iter_mut().zip(prod) {
                *a -= BigInt::from(p);
            }
        }
        let mut out = Vec::with_capacity(len);
        for (k, a) in acc.into_iter().enumerate() {
            if a.sign() == Sign::Minus {
                return Err(Error::NonIntegral(format!("negative connected count {a} for {w:?} at m={k}")));
            }
            let v = a.to_biguint().unwrap();
            self.record(CountKey::total(w.clone(), k as u32, true), &v, Provenance::Inversion)?;
            out.push(v);
        }
        self.connected.lock().unwrap().insert(w.clone(), Arc::new(out.clone()));
        Ok(out)
    }

    /// `f̃_m^ω` by inversion.
    pub fn connected_from_all(&self, w: &GroupElement, m: u32) -> Result<BigUint> {
        Ok(self.connected_counts(w, m)?.pop().unwrap())
    }

    /// Populates `table` with `f̃_0..=m` for every block of every partition of
    /// `w`, computed by `provenance` (inversion or enumeration).
    pub fn fill_connected_table(
        &self,
        w: &GroupElement,
        m: u32,
        provenance: Provenance,
        table: &mut CountTable,
    ) -> Result<()> {
        for part in w.partitions() {
            for block in part.dense_restrictions(w) {
                for k in 0..=m {
                    let key = CountKey::total(block.clone(), k, true);
                    if table.get(&key).is_some() {
                        continue;
                    }
                    let v = match provenance {
                        Provenance::Enumeration => self.count_connected_enum_total(&block, k)?,
                        Provenance::Inversion => self.connected_from_all(&block, k)?,
                        other => {
                            return Err(Error::InvalidRequest(format!("cannot fill connected counts by {other}")))
                        }
                    };
                    table.insert(key, v, provenance)?;
                }
            }
        }
        Ok(())
    }
}

/// Reassembles `f_m^ω` from connected counts:
/// `Σ_{partitions} Σ_{m_1+…+m_ℓ=m} multinomial · ∏ f̃_{m_i}^{ω_i}`.
pub fn all_from_connected(w: &GroupElement, m: u32, table: &CountTable) -> Result<BigUint> {
    let len = m as usize + 1;
    let mut total = BigUint::zero();
    for part in w.partitions() {
        let mut prod = vec![BigUint::zero(); len];
        prod[0] = BigUint::one();
        for block in part.dense_restrictions(w) {
            let series = (0..=m)
                .map(|k| {
                    let key = CountKey::total(block.clone(), k, true);
                    table.get(&key).cloned().ok_or_else(|| Error::MissingEntry(key.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            prod = binomial_convolution(&prod, &series, len);
        }
        total += &prod[m as usize];
    }
    Ok(total)
}

/// `f_m^ω` with default limits and a throwaway cache.
pub fn count_all(w: &GroupElement, m: u32) -> Result<BigUint> {
    Counter::default().count_all(w, m)
}

pub fn count_refined(w: &GroupElement, m1: u32, m2: u32) -> Result<BigUint> {
    Counter::default().count_refined(w, m1, m2)
}

pub fn count_connected_enum(w: &GroupElement, m1: u32, m2: u32) -> Result<BigUint> {
    Counter::default().count_connected_enum(w, m1, m2)
}

pub fn connected_from_all(w: &GroupElement, m: u32) -> Result<BigUint> {
    Counter::default().connected_from_all(w, m)
}
