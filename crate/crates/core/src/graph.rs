//! Decorated graphs: the ordered, labeled multigraph attached to a tuple of
//! reflections, its ordered edge walks, and the element it evaluates to.
//!
//! Edge `e = {i, j}` with `i < j` and label `k` is the swap `σ_ij^{k/r}`; a
//! self-edge `{i, i}` with label `k ∈ (0, r/s)` is the diagonal `τ_i^{sk/r}`.
//! The walk `w_i` starts at `i` and, at each step, leaves along the first
//! later edge incident to its current vertex. Then `ω(v_i) = ζ_r^{κ(w_i)}
//! v_{end(w_i)}` where `κ(w_i)` sums `+κ` on up-steps, `s·κ` on loops and
//! `-κ` on down-steps.

use serde::{Deserialize, Serialize};

use crate::dsu::RollbackDsu;
use crate::error::{Error, Result};
use crate::group::{self, GroupElement, GroupParams, Reflection};

/// An edge with 1-based endpoints `a <= b` and its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub label: u32,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn contains(&self, v: u32) -> bool {
        self.a == v || self.b == v
    }

    pub fn to_reflection(&self) -> Reflection {
        if self.is_loop() {
            Reflection::Diagonal { i: self.a, k: self.label }
        } else {
            Reflection::Swap { i: self.a, j: self.b, k: self.label }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct DecoratedGraph {
    params: GroupParams,
    edges: Vec<Edge>,
}

/// Wire form `{"r":…,"s":…,"n":…,"edges":[[i,j,k],…]}`; edge order matters.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    r: u32,
    s: u32,
    n: u32,
    edges: Vec<[u32; 3]>,
}

impl TryFrom<GraphJson> for DecoratedGraph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Self> {
        let params = GroupParams::new(j.r, j.s, j.n)?;
        DecoratedGraph::new(params, j.edges.iter().map(|&[a, b, k]| (a, b, k)))
    }
}

impl From<DecoratedGraph> for GraphJson {
    fn from(g: DecoratedGraph) -> Self {
        GraphJson {
            r: g.params.r(),
            s: g.params.s(),
            n: g.params.n(),
            edges: g.edges.iter().map(|e| [e.a, e.b, e.label]).collect(),
        }
    }
}

/// One step along a directed edge, 1-based vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    /// 0-based position of the edge in the graph's edge order.
    pub edge: usize,
    pub tail: u32,
    pub head: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub start: u32,
    pub end: u32,
    pub steps: Vec<Step>,
}

impl DecoratedGraph {
    /// Builds a graph from `(i, j, label)` triples in edge order; `i` and `j`
    /// may come in either order.
    pub fn new(params: GroupParams, edges: impl IntoIterator<Item = (u32, u32, u32)>) -> Result<Self> {
        let mut out = Vec::new();
        for (i, j, k) in edges {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            let e = Edge { a, b, label: k };
            e.to_reflection()
                .validate(params)
                .map_err(|_| Error::InvalidGraph(format!("edge ({i},{j}) with label {k} is not valid in {params}")))?;
            out.push(e);
        }
        Ok(DecoratedGraph { params, edges: out })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `(|E1|, |E2|)`.
    pub fn split(&self) -> (usize, usize) {
        let loops = self.edges.iter().filter(|e| e.is_loop()).count();
        (self.edges.len() - loops, loops)
    }

    pub fn from_tuple(params: GroupParams, tuple: &[Reflection]) -> Result<Self> {
        let mut edges = Vec::with_capacity(tuple.len());
        for rho in tuple {
            rho.validate(params)?;
            edges.push(match *rho {
                Reflection::Swap { i, j, k } => Edge { a: i, b: j, label: k },
                Reflection::Diagonal { i, k } => Edge { a: i, b: i, label: k },
            });
        }
        Ok(DecoratedGraph { params, edges })
    }

    pub fn to_tuple(&self) -> Vec<Reflection> {
        self.edges.iter().map(Edge::to_reflection).collect()
    }

    /// Incidence lists: for each 0-based vertex, the increasing indices of
    /// edges containing it (a loop is listed once).
    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.params.n() as usize];
        for (idx, e) in self.edges.iter().enumerate() {
            inc[e.a as usize - 1].push(idx);
            if !e.is_loop() {
                inc[e.b as usize - 1].push(idx);
            }
        }
        inc
    }

    fn walk_with(&self, inc: &[Vec<usize>], start: u32) -> Walk {
        let mut v = start;
        let mut next_min = 0usize;
        let mut steps = Vec::new();
        loop {
            let list = &inc[v as usize - 1];
            let pos = list.partition_point(|&e| e < next_min);
            let Some(&idx) = list.get(pos) else { break };
            let e = self.edges[idx];
            let head = if e.a == v { e.b } else { e.a };
            steps.push(Step { edge: idx, tail: v, head });
            v = head;
            next_min = idx + 1;
        }
        Walk { start, end: v, steps }
    }

    /// The ordered walk `w_i` from 1-based vertex `i`.
    pub fn ordered_walk(&self, i: u32) -> Result<Walk> {
        let n = self.params.n();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i as usize, n: n as usize });
        }
        Ok(self.walk_with(&self.incidence(), i))
    }

    /// `w_1, …, w_n`.
    pub fn ordered_walks(&self) -> Vec<Walk> {
        let inc = self.incidence();
        (1..=self.params.n()).map(|i| self.walk_with(&inc, i)).collect()
    }

    /// Signed weight of a walk, not reduced mod r.
    pub fn walk_weight(&self, w: &Walk) -> i64 {
        let s = self.params.s() as i64;
        w.steps
            .iter()
            .map(|st| {
                let k = self.edges[st.edge].label as i64;
                match st.head.cmp(&st.tail) {
                    std::cmp::Ordering::Greater => k,
                    std::cmp::Ordering::Equal => s * k,
                    std::cmp::Ordering::Less => -k,
                }
            })
            .sum()
    }

    /// The element read off the walks: `perm[i] = end(w_i)`,
    /// `exps[i] = κ(w_i) mod r`.
    pub fn evaluate_walks(&self) -> GroupElement {
        let r = self.params.r() as i64;
        let mut perm = Vec::with_capacity(self.params.n() as usize);
        let mut exps = Vec::with_capacity(self.params.n() as usize);
        for w in self.ordered_walks() {
            perm.push(w.end - 1);
            exps.push(self.walk_weight(&w).rem_euclid(r) as u32);
        }
        GroupElement::from_parts_unchecked(self.params, perm, exps)
    }

    /// The product `ρ_m ⋯ ρ_1` of the edge reflections.
    pub fn evaluate_product(&self) -> GroupElement {
        group::product(self.params, &self.to_tuple()).expect("edges are validated on construction")
    }

    /// The element this graph factors. Debug builds cross-check the walk
    /// evaluation against the product fold.
    pub fn evaluate(&self) -> GroupElement {
        let by_product = self.evaluate_product();
        debug_assert_eq!(by_product, self.evaluate_walks(), "walk evaluation disagrees with product");
        by_product
    }

    /// True iff the underlying multigraph on all n vertices is connected.
    pub fn is_connected(&self) -> bool {
        let mut dsu = RollbackDsu::new(self.params.n() as usize);
        for e in &self.edges {
            dsu.union(e.a - 1, e.b - 1);
        }
        dsu.components() == 1
    }
}
