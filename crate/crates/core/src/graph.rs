//! Simple undirected graphs on the labels `1..=n+1`, and enumeration of
//! their connected induced subgraphs.
//!
//! Vertex sets are 64-bit masks; bit `i - 1` stands for label `i`. Every
//! public function speaks in 1-based labels.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Limits;

/// Largest ground set a [`VertexSet`] can hold.
pub const MAX_VERTICES: usize = 64;

/// A subset of `[n+1]` stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(label: usize) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&label));
        VertexSet(1 << (label - 1))
    }

    /// `{1, ..., size}`.
    pub fn full(size: usize) -> Self {
        if size >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << size) - 1)
        }
    }

    /// Builds a set from labels; rejects labels outside `1..=ground`.
    pub fn from_labels<I: IntoIterator<Item = usize>>(ground: usize, labels: I) -> Result<Self> {
        let mut bits = 0u64;
        for l in labels {
            if l == 0 || l > ground || l > MAX_VERTICES {
                return Err(Error::Input(format!(
                    "vertex label {l} outside the ground set 1..={ground}"
                )));
            }
            bits |= 1 << (l - 1);
        }
        Ok(VertexSet(bits))
    }

    pub fn labels(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(b + 1)
            }
        })
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=MAX_VERTICES).contains(&label) && self.0 & (1 << (label - 1)) != 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn max_label(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(64 - self.0.leading_zeros() as usize)
        }
    }

    /// Order by cardinality, then lexicographically on the sorted label lists.
    pub fn canonical_cmp(&self, other: &VertexSet) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                // smallest differing label belongs to self
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Per-vertex counts of connected induced subgraphs containing the vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct KVector(Vec<u64>);

impl KVector {
    pub fn new(values: Vec<u64>) -> Self {
        KVector(values)
    }

    /// `k` of the vertex with 1-based `label`.
    pub fn get(&self, label: usize) -> u64 {
        self.0[label - 1]
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest label whose count is minimal among counts greater than one.
    pub fn pivot(&self) -> Option<usize> {
        let mut best: Option<(u64, usize)> = None;
        for (i, &k) in self.0.iter().enumerate() {
            if k > 1 && best.is_none_or(|(b, _)| k < b) {
                best = Some((k, i + 1));
            }
        }
        best.map(|(_, l)| l)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertex_count", &self.vertex_count)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Graph on `1..=vertex_count`. Self-loops, duplicate edges and
    /// out-of-range endpoints are rejected.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(vertex_count)?;
        for (u, v) in edges {
            if u == 0 || v == 0 || u > vertex_count || v > vertex_count {
                return Err(Error::Input(format!(
                    "edge {{{u},{v}}} has an endpoint outside 1..={vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::Input(format!("duplicate edge {{{u},{v}}}")));
            }
            g.adj[u - 1] |= 1 << (v - 1);
            g.adj[v - 1] |= 1 << (u - 1);
        }
        Ok(g)
    }

    pub fn empty(vertex_count: usize) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Input("a graph needs at least one vertex".into()));
        }
        if vertex_count > MAX_VERTICES {
            return Err(Error::Input(format!(
                "{vertex_count} vertices exceeds the supported maximum of {MAX_VERTICES}"
            )));
        }
        Ok(Graph {
            vertex_count,
            adj: vec![0; vertex_count],
        })
    }

    pub fn complete(size: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=size)
            .flat_map(|u| (u + 1..=size).map(move |v| (u, v)))
            .collect();
        Graph::new(size, edges)
    }

    pub fn path(size: usize) -> Result<Self> {
        Graph::new(size, (1..size).map(|u| (u, u + 1)))
    }

    pub fn cycle(size: usize) -> Result<Self> {
        if size < 3 {
            return Err(Error::Input(format!(
                "a cycle needs at least 3 vertices, got {size}"
            )));
        }
        Graph::new(size, (1..size).map(|u| (u, u + 1)).chain([(1, size)]))
    }

    /// Star with centre 1 and leaves `2..=size`.
    pub fn star(size: usize) -> Result<Self> {
        Graph::new(size, (2..=size).map(|v| (1, v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.vertex_count)
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 1..=self.vertex_count {
            for v in VertexSet(self.adj[u - 1]).iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u >= 1 && u <= self.vertex_count && VertexSet(self.adj[u - 1]).contains(v)
    }

    pub fn neighbors(&self, label: usize) -> VertexSet {
        VertexSet(self.adj[label - 1])
    }

    pub fn degree(&self, label: usize) -> usize {
        self.adj[label - 1].count_ones() as usize
    }

    fn check_subset(&self, s: VertexSet) -> Result<()> {
        if s.is_empty() {
            return Err(Error::Precondition("vertex subset must be nonempty".into()));
        }
        if !s.is_subset(self.vertex_set()) {
            return Err(Error::Precondition(format!(
                "vertex subset {s} is not contained in 1..={}",
                self.vertex_count
            )));
        }
        Ok(())
    }

    /// Whether the subgraph induced by `s` is connected. Singletons count as
    /// connected.
    pub fn is_connected_induced(&self, s: VertexSet) -> Result<bool> {
        self.check_subset(s)?;
        Ok(self.reach_within(s.bits() & s.bits().wrapping_neg(), s.bits()) == s.bits())
    }

    pub fn is_connected(&self) -> bool {
        let all = self.vertex_set().bits();
        self.reach_within(1, all) == all
    }

    /// Vertices reachable from `seed` without leaving `within`.
    fn reach_within(&self, seed: u64, within: u64) -> u64 {
        let mut seen = seed & within;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let b = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[b];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Maximal connected vertex sets, ordered by smallest label.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut left = self.vertex_set().bits();
        let mut out = Vec::new();
        while left != 0 {
            let seed = left & left.wrapping_neg();
            let comp = self.reach_within(seed, left);
            out.push(VertexSet(comp));
            left &= !comp;
        }
        out
    }

    /// Induced subgraph on `s`, relabelled to `1..=|s|` in increasing label
    /// order. The second value maps each new label `i` to `labels[i - 1]`.
    pub fn induced(&self, s: VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_subset(s)?;
        let labels = s.labels();
        let mut pos = vec![0usize; self.vertex_count + 1];
        for (i, &l) in labels.iter().enumerate() {
            pos[l] = i + 1;
        }
        let edges = self
            .edges()
            .into_iter()
            .filter(|&(u, v)| s.contains(u) && s.contains(v))
            .map(|(u, v)| (pos[u], pos[v]));
        Ok((Graph::new(labels.len(), edges)?, labels))
    }

    /// Applies a relabelling: old label `l` becomes `perm[l - 1]`.
    pub fn relabel(&self, perm: &Relabeling) -> Graph {
        let edges = self
            .edges()
            .into_iter()
            .map(|(u, v)| (perm.apply(u), perm.apply(v)));
        Graph::new(self.vertex_count, edges).expect("a permutation preserves simplicity")
    }

    pub fn without_vertex(&self, label: usize) -> Result<(Graph, Vec<usize>)> {
        self.induced(self.vertex_set().difference(VertexSet::singleton(label)))
    }

    /// Calls `visit` once for every connected induced subgraph's vertex mask.
    ///
    /// Sets are grown from their smallest vertex through the neighbour
    /// frontier; candidates already branched on are excluded from later
    /// siblings, so each set is produced exactly once.
    pub(crate) fn for_each_connected_subset<F: FnMut(u64)>(&self, mut visit: F) {
        fn grow<F: FnMut(u64)>(adj: &[u64], set: u64, cand: u64, forb: u64, visit: &mut F) {
            visit(set);
            let mut forb = forb;
            let mut rest = cand;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                let bit = 1u64 << b;
                rest &= !bit;
                let next = set | bit;
                let next_cand = (rest | adj[b]) & !next & !forb;
                grow(adj, next, next_cand, forb, visit);
                forb |= bit;
            }
        }
        for v in 0..self.vertex_count {
            let start = 1u64 << v;
            let below = start - 1;
            grow(&self.adj, start, self.adj[v] & !below, below, &mut visit);
        }
    }
}

/// A permutation of `1..=n` used to move a chosen vertex to the last label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relabeling {
    /// `forward[old - 1] = new`.
    forward: Vec<usize>,
}

impl Relabeling {
    pub fn identity(n: usize) -> Self {
        Relabeling {
            forward: (1..=n).collect(),
        }
    }

    /// Transposition of `label` and `n`.
    pub fn moving_to_last(n: usize, label: usize) -> Self {
        let mut r = Relabeling::identity(n);
        r.forward.swap(label - 1, n - 1);
        r
    }

    pub fn apply(&self, old: usize) -> usize {
        self.forward[old - 1]
    }

    pub fn invert(&self, new: usize) -> usize {
        self.forward.iter().position(|&x| x == new).unwrap() + 1
    }

    pub fn apply_set(&self, s: VertexSet) -> VertexSet {
        VertexSet(s.iter().fold(0, |acc, l| acc | 1 << (self.apply(l) - 1)))
    }

    pub fn invert_set(&self, s: VertexSet) -> VertexSet {
        VertexSet(s.iter().fold(0, |acc, l| acc | 1 << (self.invert(l) - 1)))
    }
}

fn check_cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(Error::ResourceLimit {
            what,
            value: value as u64,
            cap: cap as u64,
        })
    } else {
        Ok(())
    }
}

/// All nonempty `I` with `g|_I` connected, in canonical order.
pub fn enumerate_connected_subsets(g: &Graph, limits: &Limits) -> Result<Vec<VertexSet>> {
    check_cap("vertex count for enumeration", g.vertex_count(), limits.max_enum)?;
    let mut out = Vec::new();
    g.for_each_connected_subset(|s| out.push(VertexSet(s)));
    out.sort_by(VertexSet::canonical_cmp);
    Ok(out)
}

/// `k_i` for every vertex, without materialising the subsets.
pub fn count_k(g: &Graph, limits: &Limits) -> Result<KVector> {
    check_cap("vertex count for counting", g.vertex_count(), limits.max_count)?;
    let mut k = vec![0u64; g.vertex_count()];
    g.for_each_connected_subset(|s| {
        let mut rest = s;
        while rest != 0 {
            k[rest.trailing_zeros() as usize] += 1;
            rest &= rest - 1;
        }
    });
    Ok(KVector(k))
}

/// Number of connected induced subgraphs, i.e. `|B(G)|`.
pub fn count_connected_subsets(g: &Graph, limits: &Limits) -> Result<u64> {
    check_cap("vertex count for counting", g.vertex_count(), limits.max_count)?;
    let mut n = 0u64;
    g.for_each_connected_subset(|_| n += 1);
    Ok(n)
}
