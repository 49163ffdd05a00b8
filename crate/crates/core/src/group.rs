//! Elements of the complex reflection groups G(r,s,n).
//!
//! An element is a monomial matrix whose nonzero entries are r-th roots of
//! unity. It is stored as a permutation together with an exponent vector: the
//! element sends the basis vector `v_i` to `ζ_r^{exps[i]} v_{perm[i]}`. The
//! group condition is that the exponents sum to a multiple of `s`.
//!
//! Vertex indices in the public API and in serialized form are 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The triple (r, s, n) with `s | r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct GroupParams {
    r: u32,
    s: u32,
    n: u32,
}

#[derive(Deserialize)]
struct RawParams {
    r: u32,
    s: u32,
    n: u32,
}

impl TryFrom<RawParams> for GroupParams {
    type Error = Error;
    fn try_from(p: RawParams) -> Result<Self> {
        GroupParams::new(p.r, p.s, p.n)
    }
}

impl GroupParams {
    pub fn new(r: u32, s: u32, n: u32) -> Result<Self> {
        let bad = |reason| Err(Error::InvalidParams { r, s, n, reason });
        if r == 0 || s == 0 {
            return bad("r and s must be positive");
        }
        if n == 0 {
            return bad("n must be positive");
        }
        if !r.is_multiple_of(s) {
            return bad("s must divide r");
        }
        Ok(GroupParams { r, s, n })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Order of the cyclic quotient `μ_{r/s}`.
    pub fn q(&self) -> u32 {
        self.r / self.s
    }

    /// The same (r, s) with a different rank.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        GroupParams::new(self.r, self.s, n)
    }

    /// `|G(r,s,n)| = r^n n! / s`.
    pub fn order(&self) -> u128 {
        let mut fact: u128 = 1;
        for k in 2..=self.n as u128 {
            fact = fact.saturating_mul(k);
        }
        (self.r as u128)
            .saturating_pow(self.n - 1)
            .saturating_mul(self.q() as u128)
            .saturating_mul(fact)
    }

    /// Number of swap reflections plus number of diagonal reflections.
    pub fn reflection_count(&self) -> usize {
        let n = self.n as usize;
        n * (n - 1) / 2 * self.r as usize + n * (self.q() as usize - 1)
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.r, self.s, self.n)
    }
}

/// A generalized permutation matrix in G(r,s,n).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ElementJson", into = "ElementJson")]
pub struct GroupElement {
    params: GroupParams,
    // 0-based images
    perm: Vec<u32>,
    exps: Vec<u32>,
}

/// Wire form: `{"r":R,"s":S,"n":N,"perm":[...],"exps":[...]}`, 1-based images.
#[derive(Serialize, Deserialize)]
struct ElementJson {
    r: u32,
    s: u32,
    n: u32,
    perm: Vec<u32>,
    exps: Vec<u32>,
}

impl TryFrom<ElementJson> for GroupElement {
    type Error = Error;
    fn try_from(j: ElementJson) -> Result<Self> {
        let params = GroupParams::new(j.r, j.s, j.n)?;
        if j.perm.contains(&0) {
            return Err(Error::InvalidElement("perm images are 1-based".into()));
        }
        GroupElement::from_zero_based(params, j.perm.iter().map(|p| p - 1).collect(), j.exps)
    }
}

impl From<GroupElement> for ElementJson {
    fn from(e: GroupElement) -> Self {
        ElementJson {
            r: e.params.r,
            s: e.params.s,
            n: e.params.n,
            perm: e.perm_one_based(),
            exps: e.exps,
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{perm={:?}, exps={:?}}}", self.params, self.perm_one_based(), self.exps)
    }
}

impl GroupElement {
    pub fn identity(params: GroupParams) -> Self {
        let n = params.n as usize;
        GroupElement { params, perm: (0..n as u32).collect(), exps: vec![0; n] }
    }

    /// Builds an element from 1-based images; exponents are reduced mod r.
    pub fn from_one_based(params: GroupParams, perm: &[u32], exps: &[i64]) -> Result<Self> {
        let perm0: Vec<u32> = perm
            .iter()
            .map(|&p| {
                if p == 0 {
                    Err(Error::InvalidElement("perm images are 1-based".into()))
                } else {
                    Ok(p - 1)
                }
            })
            .collect::<Result<_>>()?;
        Self::from_zero_based(params, perm0, exps.iter().map(|&e| e.rem_euclid(params.r as i64) as u32).collect())
    }

    /// Builds an element from 0-based images and canonical exponents.
    pub fn from_zero_based(params: GroupParams, perm: Vec<u32>, exps: Vec<u32>) -> Result<Self> {
        let n = params.n as usize;
        if perm.len() != n || exps.len() != n {
            return Err(Error::InvalidElement(format!(
                "expected {n} images and {n} exponents, got {} and {}",
                perm.len(),
                exps.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            let p = p as usize;
            if p >= n || seen[p] {
                return Err(Error::InvalidElement(format!("perm {:?} is not a bijection", perm)));
            }
            seen[p] = true;
        }
        if let Some(&e) = exps.iter().find(|&&e| e >= params.r) {
            return Err(Error::InvalidElement(format!("exponent {e} not in [0, {})", params.r)));
        }
        let total: u64 = exps.iter().map(|&e| e as u64).sum();
        if !total.is_multiple_of(params.s as u64) {
            return Err(Error::InvalidElement(format!(
                "exponent sum {total} is not divisible by s={}",
                params.s
            )));
        }
        Ok(GroupElement { params, perm, exps })
    }

    pub(crate) fn from_parts_unchecked(params: GroupParams, perm: Vec<u32>, exps: Vec<u32>) -> Self {
        debug_assert!(Self::from_zero_based(params, perm.clone(), exps.clone()).is_ok());
        GroupElement { params, perm, exps }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n as usize
    }

    /// 0-based images.
    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn perm_one_based(&self) -> Vec<u32> {
        self.perm.iter().map(|p| p + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p as usize == i) && self.exps.iter().all(|&e| e == 0)
    }

    /// `multiply(a, b) = a ∘ b`: `b` is applied first.
    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.params != other.params {
            return Err(Error::ParamMismatch(self.params.to_string(), other.params.to_string()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &GroupElement) -> GroupElement {
        let r = self.params.r;
        let mut perm = Vec::with_capacity(self.perm.len());
        let mut exps = Vec::with_capacity(self.perm.len());
        for (&pb, &eb) in other.perm.iter().zip(&other.exps) {
            let pb = pb as usize;
            perm.push(self.perm[pb]);
            exps.push((eb + self.exps[pb]) % r);
        }
        GroupElement { params: self.params, perm, exps }
    }

    pub fn inverse(&self) -> GroupElement {
        let r = self.params.r;
        let n = self.n();
        let mut perm = vec![0; n];
        let mut exps = vec![0; n];
        for i in 0..n {
            let p = self.perm[i] as usize;
            perm[p] = i as u32;
            exps[p] = (r - self.exps[i]) % r;
        }
        GroupElement { params: self.params, perm, exps }
    }

    /// Image of the 1-based basis index `i`: `(image, exponent)` with
    /// `ω(v_i) = ζ_r^exponent v_image`.
    pub fn apply(&self, i: usize) -> Result<(usize, u32)> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        Ok((self.perm[i - 1] as usize + 1, self.exps[i - 1]))
    }

    /// The underlying permutation as an element of G(1,1,n).
    pub fn project_pi(&self) -> GroupElement {
        let params = GroupParams { r: 1, s: 1, n: self.params.n };
        GroupElement { params, perm: self.perm.clone(), exps: vec![0; self.n()] }
    }

    /// `φ(ω) = ζ_{r/s}^t`; returns `t ∈ [0, r/s)`.
    pub fn project_phi(&self) -> u32 {
        let total: u64 = self.exps.iter().map(|&e| e as u64).sum();
        ((total / self.params.s as u64) % self.params.q() as u64) as u32
    }

    /// 1 when `φ(ω) = 1`, else 0.
    pub fn delta(&self) -> u8 {
        u8::from(self.project_phi() == 0)
    }

    /// Cycles of the underlying permutation, each listed from its smallest
    /// 0-based vertex, ordered by that vertex.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v as u32);
                v = self.perm[v] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.cycles().iter().map(|c| c.len() as u32).collect())
            .expect("a permutation of n >= 1 points has a nonempty cycle type")
    }

    /// Restriction of `self` to a union of cycles, re-indexed onto `1..=|block|`
    /// in increasing vertex order. Returns `None` when the block is not a union
    /// of cycles or violates the mod-s condition.
    pub fn restrict_dense(&self, block: &[u32]) -> Option<GroupElement> {
        let mut sorted = block.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut local = vec![u32::MAX; self.n()];
        for (idx, &v) in sorted.iter().enumerate() {
            local[v as usize] = idx as u32;
        }
        let mut perm = Vec::with_capacity(sorted.len());
        let mut exps = Vec::with_capacity(sorted.len());
        for &v in &sorted {
            let img = local[self.perm[v as usize] as usize];
            if img == u32::MAX {
                return None;
            }
            perm.push(img);
            exps.push(self.exps[v as usize]);
        }
        let params = GroupParams::new(self.params.r, self.params.s, sorted.len() as u32).ok()?;
        GroupElement::from_zero_based(params, perm, exps).ok()
    }

    /// The element equal to `self` on `block` and the identity elsewhere.
    fn restrict_in_place(&self, block: &[u32]) -> GroupElement {
        let mut out = GroupElement::identity(self.params);
        for &v in block {
            out.perm[v as usize] = self.perm[v as usize];
            out.exps[v as usize] = self.exps[v as usize];
        }
        out
    }

    /// All partitions of this element: set partitions of `[n]` into unions of
    /// cycles whose restrictions each satisfy the group condition.
    pub fn partitions(&self) -> Vec<ElementPartition> {
        let cycles = self.cycles();
        let s = self.params.s as u64;
        let cycle_sums: Vec<u64> =
            cycles.iter().map(|c| c.iter().map(|&v| self.exps[v as usize] as u64).sum()).collect();
        let mut out = Vec::new();
        for labels in set_partitions(cycles.len()) {
            let nblocks = labels.iter().copied().max().map_or(0, |m| m + 1);
            let mut sums = vec![0u64; nblocks];
            for (c, &b) in labels.iter().enumerate() {
                sums[b] += cycle_sums[c];
            }
            if sums.iter().any(|t| t % s != 0) {
                continue;
            }
            let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); nblocks];
            for (c, &b) in labels.iter().enumerate() {
                blocks[b].extend_from_slice(&cycles[c]);
            }
            for b in &mut blocks {
                b.sort_unstable();
            }
            blocks.sort();
            let restrictions = blocks.iter().map(|b| self.restrict_in_place(b)).collect();
            out.push(ElementPartition {
                blocks: blocks.into_iter().map(|b| b.into_iter().map(|v| v + 1).collect()).collect(),
                restrictions,
            });
        }
        out
    }
}

/// Restricted growth strings of length `k`: every set partition of `{0..k}`,
/// given as a block label per element.
pub(crate) fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(pos: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur[pos] = b;
            rec(pos + 1, if b == max { max + 1 } else { max }, cur, out);
        }
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur = vec![0; k];
    rec(1, 1, &mut cur, &mut out);
    out
}

/// One block decomposition of an element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementPartition {
    /// 1-based vertex sets, each sorted, blocks in lexicographic order.
    pub blocks: Vec<Vec<u32>>,
    /// One element per block, acting as the identity off its block.
    pub restrictions: Vec<GroupElement>,
}

impl ElementPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Each restriction re-indexed onto `G(r,s,|block|)`.
    pub fn dense_restrictions(&self, whole: &GroupElement) -> Vec<GroupElement> {
        self.blocks
            .iter()
            .map(|b| {
                let zero: Vec<u32> = b.iter().map(|v| v - 1).collect();
                whole.restrict_dense(&zero).expect("partition blocks are valid restrictions")
            })
            .collect()
    }
}

/// Multiset of cycle lengths, sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType {
    parts: Vec<u32>,
}

impl CycleType {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidRequest(format!("cycle type {parts:?} must have positive parts")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of cycles, ℓ.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Canonical representative with this cycle type: cycles on consecutive
    /// vertex runs in order, each `i -> i+1` and back to the run start. When
    /// `delta == 0` the exponent `s` sits on the first vertex, so that
    /// `φ(ω) = ζ_{r/s}`.
    pub fn representative(&self, params: GroupParams, delta: u8) -> Result<GroupElement> {
        if params.n != self.n() {
            return Err(Error::InvalidRequest(format!("cycle type {:?} does not fit {}", self.parts, params)));
        }
        let n = self.n() as usize;
        let mut perm = vec![0u32; n];
        let mut start = 0usize;
        for &len in &self.parts {
            let len = len as usize;
            for k in 0..len {
                perm[start + k] = (start + (k + 1) % len) as u32;
            }
            start += len;
        }
        let mut exps = vec![0u32; n];
        match delta {
            1 => {}
            0 => {
                if params.q() < 2 {
                    return Err(Error::InvalidRequest(format!("{params} has no elements with delta = 0")));
                }
                exps[0] = params.s;
            }
            _ => return Err(Error::InvalidRequest(format!("delta must be 0 or 1, got {delta}"))),
        }
        GroupElement::from_zero_based(params, perm, exps)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A reflection of G(r,s,n); indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "ReflectionJson", from = "ReflectionJson")]
pub enum Reflection {
    /// `σ_ij^{k/r}`: `v_i -> ζ_r^k v_j`, `v_j -> ζ_r^{-k} v_i`, with `i < j`.
    Swap { i: u32, j: u32, k: u32 },
    /// `τ_i^{sk/r}`: `v_i -> ζ_r^{sk} v_i`, with `0 < k < r/s`.
    Diagonal { i: u32, k: u32 },
}

#[derive(Serialize, Deserialize)]
enum ReflectionJson {
    #[serde(rename = "swap")]
    Swap(u32, u32, u32),
    #[serde(rename = "diag")]
    Diag(u32, u32),
}

impl From<Reflection> for ReflectionJson {
    fn from(r: Reflection) -> Self {
        match r {
            Reflection::Swap { i, j, k } => ReflectionJson::Swap(i, j, k),
            Reflection::Diagonal { i, k } => ReflectionJson::Diag(i, k),
        }
    }
}

impl From<ReflectionJson> for Reflection {
    fn from(r: ReflectionJson) -> Self {
        match r {
            ReflectionJson::Swap(i, j, k) => Reflection::Swap { i, j, k },
            ReflectionJson::Diag(i, k) => Reflection::Diagonal { i, k },
        }
    }
}

impl Reflection {
    pub fn validate(&self, params: GroupParams) -> Result<()> {
        let n = params.n;
        let ok = match *self {
            Reflection::Swap { i, j, k } => 1 <= i && i < j && j <= n && k < params.r,
            Reflection::Diagonal { i, k } => 1 <= i && i <= n && 0 < k && k < params.q(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidReflection(format!("{self:?} is not a reflection of {params}")))
        }
    }

    pub fn is_swap(&self) -> bool {
        matches!(self, Reflection::Swap { .. })
    }

    pub fn to_element(&self, params: GroupParams) -> Result<GroupElement> {
        self.validate(params)?;
        let mut e = GroupElement::identity(params);
        match *self {
            Reflection::Swap { i, j, k } => {
                let (a, b) = (i as usize - 1, j as usize - 1);
                e.perm[a] = b as u32;
                e.perm[b] = a as u32;
                e.exps[a] = k;
                e.exps[b] = (params.r - k) % params.r;
            }
            Reflection::Diagonal { i, k } => {
                e.exps[i as usize - 1] = params.s * k;
            }
        }
        Ok(e)
    }

    /// Composes `self ∘ acc` without materializing `self` as an element.
    pub(crate) fn apply_left(&self, acc: &mut GroupElement) {
        let r = acc.params.r;
        let s = acc.params.s;
        match *self {
            Reflection::Swap { i, j, k } => {
                let (a, b) = (i - 1, j - 1);
                for idx in 0..acc.perm.len() {
                    let p = acc.perm[idx];
                    if p == a {
                        acc.perm[idx] = b;
                        acc.exps[idx] = (acc.exps[idx] + k) % r;
                    } else if p == b {
                        acc.perm[idx] = a;
                        acc.exps[idx] = (acc.exps[idx] + r - k) % r;
                    }
                }
            }
            Reflection::Diagonal { i, k } => {
                let a = i - 1;
                if let Some(idx) = acc.perm.iter().position(|&p| p == a) {
                    acc.exps[idx] = (acc.exps[idx] + s * k) % r;
                }
            }
        }
    }
}

/// Every reflection of G(r,s,n): all swaps ordered by (i, j, k), then all
/// diagonals ordered by (i, k).
pub fn reflections(params: GroupParams) -> Vec<Reflection> {
    let n = params.n;
    let mut out = Vec::with_capacity(params.reflection_count());
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 0..params.r {
                out.push(Reflection::Swap { i, j, k });
            }
        }
    }
    for i in 1..=n {
        for k in 1..params.q() {
            out.push(Reflection::Diagonal { i, k });
        }
    }
    out
}

/// Left fold of a word `(ρ_1, …, ρ_m)` into `ρ_m ⋯ ρ_1`.
pub fn product(params: GroupParams, word: &[Reflection]) -> Result<GroupElement> {
    let mut acc = GroupElement::identity(params);
    for rho in word {
        rho.validate(params)?;
        rho.apply_left(&mut acc);
    }
    Ok(acc)
}
