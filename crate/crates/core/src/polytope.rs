//! Exact H-representations of nestohedra, projection to `R^n`, vertex and
//! edge enumeration, and the lattice checks run on them.
//!
//! Two vertex oracles are provided and are deliberately unrelated:
//! [`enumerate_vertices_bruteforce`] solves every `n`-subset of constraint
//! boundaries and keeps feasible points, while [`vertices_from_nested`]
//! solves only the facet systems named by maximal nested sets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::building_set::BuildingSet;
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::linalg::{self, rat, Rational};
use crate::{ser, Limits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }
}

impl Serialize for Sense {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstraintLabel {
    /// The sum-of-all-coordinates equality.
    Total,
    /// The facet `F_I` of a building-set member `I`.
    Member(VertexSet),
    Named(String),
}

impl fmt::Display for ConstraintLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintLabel::Total => write!(f, "total"),
            ConstraintLabel::Member(s) => write!(f, "{s}"),
            ConstraintLabel::Named(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for ConstraintLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ConstraintLabel::Member(m) => m.serialize(s),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub label: ConstraintLabel,
    pub coefficients: Vec<i64>,
    pub sense: Sense,
    #[serde(serialize_with = "ser::rational")]
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(label: ConstraintLabel, coefficients: Vec<i64>, sense: Sense, rhs: Rational) -> Self {
        Constraint {
            label,
            coefficients,
            sense,
            rhs,
        }
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.coefficients
            .iter()
            .zip(x)
            .filter(|(c, _)| **c != 0)
            .fold(Rational::zero(), |acc, (&c, xi)| acc + xi * BigInt::from(c))
    }

    /// Nonnegative exactly when the constraint holds. For equalities this is
    /// minus the absolute residual.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        let v = self.evaluate(x);
        match self.sense {
            Sense::Ge => v - &self.rhs,
            Sense::Le => &self.rhs - v,
            Sense::Eq => -(v - &self.rhs).abs(),
        }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.evaluate(x) == self.rhs
    }

    /// Coefficients rewritten as a `>=` row.
    pub fn ge_row(&self) -> Vec<i64> {
        match self.sense {
            Sense::Le => self.coefficients.iter().map(|c| -c).collect(),
            _ => self.coefficients.clone(),
        }
    }

    /// Primitive outward normal of the bounding hyperplane.
    pub fn outward_normal(&self) -> Vec<i64> {
        let out: Vec<BigInt> = self.ge_row().iter().map(|&c| BigInt::from(-c)).collect();
        let g = out.iter().fold(BigInt::zero(), |a, x| num::Integer::gcd(&a, x));
        if g.is_zero() {
            return vec![0; out.len()];
        }
        out.iter().map(|x| (x / &g).to_i64().unwrap()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfspaceSystem {
    pub dimension: usize,
    pub constraints: Vec<Constraint>,
    /// For a projected system: the value of the dropped equality, so that
    /// points can be lifted back with `x_{n+1} = total - sum x_i`.
    #[serde(serialize_with = "ser::option_rational")]
    pub lifted_total: Option<Rational>,
}

impl HalfspaceSystem {
    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dimension && self.constraints.iter().all(|c| c.holds(x))
    }

    pub fn index_of(&self, label: &ConstraintLabel) -> Option<usize> {
        self.constraints.iter().position(|c| &c.label == label)
    }

    pub fn active_set(&self, x: &[Rational]) -> Vec<usize> {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| c.sense != Sense::Eq && c.is_tight(x))
            .map(|(i, _)| i)
            .collect()
    }

    /// Appends `x_{n+1} = total - sum x_i` to a projected point.
    pub fn lift(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        let total = self.lifted_total.as_ref()?;
        let sum = x.iter().fold(Rational::zero(), |a, b| a + b);
        let mut out = x.to_vec();
        out.push(total - sum);
        Some(out)
    }
}

/// `sum x_i = |B|` together with `sum_{i in I} x_i >= |B|_I|` for every
/// member `I` other than the full ground set.
pub fn hrep(b: &BuildingSet) -> Result<HalfspaceSystem> {
    if !b.has_full_ground() {
        return Err(Error::Dimension(format!(
            "the ground set {} is not a member, so the nestohedron is not full-dimensional",
            b.ground()
        )));
    }
    let d = b.ground_size();
    let ground = b.ground();
    let mut constraints = vec![Constraint::new(
        ConstraintLabel::Total,
        vec![1; d],
        Sense::Eq,
        rat(b.len() as i64),
    )];
    for &m in b.members() {
        if m == ground {
            continue;
        }
        let coeffs = (1..=d).map(|l| m.contains(l) as i64).collect();
        let rhs = b.restrict(m)?.len() as i64;
        constraints.push(Constraint::new(ConstraintLabel::Member(m), coeffs, Sense::Ge, rat(rhs)));
    }
    Ok(HalfspaceSystem {
        dimension: d,
        constraints,
        lifted_total: None,
    })
}

/// H-representation of the permutohedron with vertex coordinates `c`:
/// `sum_{i in I} x_i >= c_1 + ... + c_{|I|}` for every nonempty proper `I`
/// and `sum x_i = sum c_i`.
pub fn permutohedron_hrep(c: &[Rational], limits: &Limits) -> Result<HalfspaceSystem> {
    if c.is_empty() {
        return Err(Error::Input("the coordinate vector is empty".into()));
    }
    if c.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Input("coordinates must be strictly increasing".into()));
    }
    let d = c.len();
    if d - 1 > limits.max_dim {
        return Err(Error::ResourceLimit {
            what: "permutohedron dimension",
            value: (d - 1) as u64,
            cap: limits.max_dim as u64,
        });
    }
    let mut prefix = vec![Rational::zero()];
    for x in c {
        let next = prefix.last().unwrap() + x;
        prefix.push(next);
    }
    let mut subsets: Vec<VertexSet> = (1..(1u64 << d) - 1).map(VertexSet::from_bits).collect();
    subsets.sort_by(VertexSet::canonical_cmp);
    let mut constraints = vec![Constraint::new(
        ConstraintLabel::Total,
        vec![1; d],
        Sense::Eq,
        prefix[d].clone(),
    )];
    for s in subsets {
        let coeffs = (1..=d).map(|l| s.contains(l) as i64).collect();
        constraints.push(Constraint::new(
            ConstraintLabel::Member(s),
            coeffs,
            Sense::Ge,
            prefix[s.len()].clone(),
        ));
    }
    Ok(HalfspaceSystem {
        dimension: d,
        constraints,
        lifted_total: None,
    })
}

/// Eliminates `x_{n+1}` through the single equality `sum x_i = T`.
///
/// Each remaining row `a . x (sense) r` becomes
/// `(a_i - a_{n+1})_{i<=n} . x (sense) r - a_{n+1} T`; rows whose nonzero
/// coefficients all came out negative are negated so that, for
/// building-set facets, the result keeps 0/1 coefficients.
pub fn project(h: &HalfspaceSystem) -> Result<HalfspaceSystem> {
    let eqs: Vec<&Constraint> = h.constraints.iter().filter(|c| c.sense == Sense::Eq).collect();
    if eqs.len() != 1 || eqs[0].coefficients.iter().any(|&c| c != 1) || h.dimension == 0 {
        return Err(Error::Precondition(
            "projection needs exactly one equality of the form sum x_i = T".into(),
        ));
    }
    let total = eqs[0].rhs.clone();
    let n = h.dimension - 1;
    let mut constraints = Vec::with_capacity(h.constraints.len() - 1);
    for c in h.constraints.iter().filter(|c| c.sense != Sense::Eq) {
        let last = c.coefficients[n];
        let mut coeffs: Vec<i64> = c.coefficients[..n].iter().map(|&a| a - last).collect();
        let mut rhs = &c.rhs - &total * BigInt::from(last);
        let mut sense = c.sense;
        let nonzero: Vec<i64> = coeffs.iter().copied().filter(|&a| a != 0).collect();
        if !nonzero.is_empty() && nonzero.iter().all(|&a| a < 0) {
            coeffs.iter_mut().for_each(|a| *a = -*a);
            rhs = -rhs;
            sense = if sense == Sense::Ge { Sense::Le } else { Sense::Ge };
        }
        constraints.push(Constraint::new(c.label.clone(), coeffs, sense, rhs));
    }
    Ok(HalfspaceSystem {
        dimension: n,
        constraints,
        lifted_total: Some(total),
    })
}

/// A polytope together with the system it was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polytope {
    pub system: HalfspaceSystem,
    #[serde(serialize_with = "ser::rational_vec_vec")]
    pub vertices: Vec<Vec<Rational>>,
    /// Sorted constraint indices tight at each vertex.
    pub vertex_facets: Vec<Vec<usize>>,
}

impl Polytope {
    pub fn dimension(&self) -> usize {
        self.system.dimension
    }

    pub fn lifted_vertices(&self) -> Option<Vec<Vec<Rational>>> {
        self.vertices.iter().map(|v| self.system.lift(v)).collect()
    }

    /// `max <w, v>` over the vertices, in projected coordinates.
    pub fn support(&self, w: &[Rational]) -> Option<Rational> {
        self.vertices
            .iter()
            .map(|v| v.iter().zip(w).fold(Rational::zero(), |a, (x, y)| a + x * y))
            .max()
    }

    /// Precomputed lifted vertex data for repeated support queries.
    pub fn lifted_support_oracle(&self) -> Option<SupportOracle> {
        let lifted = self.lifted_vertices()?;
        let den = lifted
            .iter()
            .flatten()
            .fold(BigInt::one(), |a, x| num::Integer::lcm(&a, x.denom()));
        let scaled: Option<Vec<Vec<i128>>> = lifted
            .iter()
            .map(|v| v.iter().map(|x| (x * &den).to_integer().to_i128()).collect())
            .collect();
        Some(SupportOracle {
            fast: scaled.zip(den.to_i128()),
            vertices: lifted,
        })
    }
}

pub struct SupportOracle {
    fast: Option<(Vec<Vec<i128>>, i128)>,
    vertices: Vec<Vec<Rational>>,
}

impl SupportOracle {
    pub fn eval(&self, w: &[i64]) -> Option<Rational> {
        if let Some((scaled, den)) = &self.fast {
            let best = scaled
                .iter()
                .map(|v| {
                    v.iter().zip(w).try_fold(0i128, |a, (&x, &y)| {
                        x.checked_mul(y as i128).and_then(|p| a.checked_add(p))
                    })
                })
                .collect::<Option<Vec<i128>>>()
                .and_then(|vals| vals.into_iter().max());
            if let Some(b) = best {
                return Some(Rational::new(BigInt::from(b), BigInt::from(*den)));
            }
        }
        self.vertices
            .iter()
            .map(|v| v.iter().zip(w).fold(Rational::zero(), |a, (x, &y)| a + x * BigInt::from(y)))
            .max()
    }
}

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
}

/// Advances `idx` to the next `k`-combination of `0..m` in lexicographic
/// order; returns false after the last one.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Rejects systems with a nonzero recession direction `d`, i.e. `a . d >= 0`
/// for every `>=` row. The cone is trivial iff the rows have full rank and
/// no extreme ray exists; extreme rays are kernels of `n - 1` rows.
fn check_bounded(h: &HalfspaceSystem) -> Result<()> {
    let n = h.dimension;
    let rows: Vec<Vec<i64>> = h.constraints.iter().map(|c| c.ge_row()).collect();
    let feasible_dir = |d: &[BigInt]| {
        rows.iter().all(|r| {
            let v = r.iter().zip(d).fold(BigInt::zero(), |a, (&x, y)| a + y * x);
            !v.is_negative()
        })
    };
    let unbounded = |d: Vec<BigInt>| Error::Unbounded {
        direction: d.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect(),
    };
    if linalg::rank_int(&rows) < n {
        let d = linalg::nullspace_vector(&rows, n).expect("rank deficiency leaves a kernel");
        return Err(unbounded(linalg::primitive(&d)));
    }
    let m = rows.len();
    if n - 1 > m {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..n - 1).collect();
    loop {
        let sub: Vec<&[i64]> = idx.iter().map(|&i| rows[i].as_slice()).collect();
        let d = linalg::kernel_vector(&sub, n);
        if d.iter().any(|x| !x.is_zero()) {
            if feasible_dir(&d) {
                return Err(unbounded(linalg::primitive(&d)));
            }
            let neg: Vec<BigInt> = d.iter().map(|x| -x).collect();
            if feasible_dir(&neg) {
                return Err(unbounded(linalg::primitive(&neg)));
            }
        }
        if !next_combination(&mut idx, m) {
            return Ok(());
        }
    }
}

/// Integer form of a constraint: `scaled . x (sense) rhs` with the
/// right-hand side's denominator cleared.
struct IntRow {
    scaled: Vec<i128>,
    rhs: i128,
    sense: Sense,
}

fn int_rows(h: &HalfspaceSystem) -> Option<Vec<IntRow>> {
    h.constraints
        .iter()
        .map(|c| {
            let q = c.rhs.denom().to_i128()?;
            let p = c.rhs.numer().to_i128()?;
            let scaled = c
                .coefficients
                .iter()
                .map(|&a| (a as i128).checked_mul(q))
                .collect::<Option<Vec<_>>>()?;
            Some(IntRow {
                scaled,
                rhs: p,
                sense: c.sense,
            })
        })
        .collect()
}

enum Candidate {
    Singular,
    Infeasible,
    Vertex(Vec<Rational>, Vec<usize>),
}

fn candidate_fast(rows: &[IntRow], idx: &[usize]) -> Option<Candidate> {
    let mat: Vec<&[i128]> = idx.iter().map(|&i| rows[i].scaled.as_slice()).collect();
    let rhs: Vec<i128> = idx.iter().map(|&i| rows[i].rhs).collect();
    let Some((xs, den)) = linalg::cramer_i128(&mat, &rhs)? else {
        return Some(Candidate::Singular);
    };
    let mut active = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let lhs = r.scaled.iter().zip(&xs).try_fold(0i128, |a, (&c, &x)| {
            c.checked_mul(x).and_then(|p| a.checked_add(p))
        })?;
        let rhs = r.rhs.checked_mul(den)?;
        let ok = match r.sense {
            Sense::Ge => lhs >= rhs,
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
        };
        if !ok {
            return Some(Candidate::Infeasible);
        }
        if lhs == rhs && r.sense != Sense::Eq {
            active.push(i);
        }
    }
    let point = xs
        .into_iter()
        .map(|x| Rational::new(BigInt::from(x), BigInt::from(den)))
        .collect();
    Some(Candidate::Vertex(point, active))
}

fn candidate_exact(h: &HalfspaceSystem, idx: &[usize]) -> Candidate {
    let mat: Vec<Vec<Rational>> = idx
        .iter()
        .map(|&i| h.constraints[i].coefficients.iter().map(|&a| rat(a)).collect())
        .collect();
    let rhs: Vec<Rational> = idx.iter().map(|&i| h.constraints[i].rhs.clone()).collect();
    match linalg::solve_rational(&mat, &rhs) {
        None => Candidate::Singular,
        Some(x) if h.contains(&x) => {
            let active = h.active_set(&x);
            Candidate::Vertex(x, active)
        }
        Some(_) => Candidate::Infeasible,
    }
}

fn check_enumeration_caps(h: &HalfspaceSystem, limits: &Limits) -> Result<()> {
    if h.dimension > limits.max_dim {
        return Err(Error::ResourceLimit {
            what: "polytope dimension",
            value: h.dimension as u64,
            cap: limits.max_dim as u64,
        });
    }
    let subsets = binomial(h.constraints.len(), h.dimension);
    if subsets > limits.max_subsets as u128 {
        return Err(Error::ResourceLimit {
            what: "constraint subsets for brute-force enumeration",
            value: subsets.min(u64::MAX as u128) as u64,
            cap: limits.max_subsets,
        });
    }
    Ok(())
}

/// Vertices of a bounded inequality system by solving every `n`-subset of
/// constraint boundaries and keeping the feasible, distinct solutions.
pub fn enumerate_vertices_bruteforce(h: &HalfspaceSystem, limits: &Limits) -> Result<Polytope> {
    if h.constraints.iter().any(|c| c.sense == Sense::Eq) {
        return Err(Error::Precondition(
            "brute-force enumeration expects a projected system without equalities".into(),
        ));
    }
    if h.constraints.iter().any(|c| c.coefficients.len() != h.dimension) {
        return Err(Error::Input("constraint length does not match the dimension".into()));
    }
    check_enumeration_caps(h, limits)?;
    let n = h.dimension;
    if n == 0 {
        let point: Vec<Rational> = Vec::new();
        let (vertices, vertex_facets) = if h.contains(&point) {
            (vec![point.clone()], vec![h.active_set(&point)])
        } else {
            (vec![], vec![])
        };
        return Ok(Polytope {
            system: h.clone(),
            vertices,
            vertex_facets,
        });
    }
    check_bounded(h)?;

    let m = h.constraints.len();
    let mut found: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
    if m >= n {
        let rows = int_rows(h);
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let cand = rows
                .as_ref()
                .and_then(|r| candidate_fast(r, &idx))
                .unwrap_or_else(|| candidate_exact(h, &idx));
            if let Candidate::Vertex(x, active) = cand {
                found.entry(x).or_insert(active);
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    let (vertices, vertex_facets) = found.into_iter().unzip();
    Ok(Polytope {
        system: h.clone(),
        vertices,
        vertex_facets,
    })
}

/// Every `n`-element family of proper members that is pairwise nested or
/// disjoint and never contains a disjoint subfamily (of size at least two)
/// whose union is a member. Each family is listed in canonical member order.
pub fn enumerate_vertices_nested(b: &BuildingSet) -> Result<Vec<Vec<VertexSet>>> {
    if !b.has_full_ground() {
        return Err(Error::Dimension(
            "nested-set enumeration needs the full ground set as a member".into(),
        ));
    }
    let n = b.ground_size() - 1;
    let facets: Vec<VertexSet> = b
        .members()
        .iter()
        .copied()
        .filter(|&m| m != b.ground())
        .collect();

    fn disjoint_unions_ok(b: &BuildingSet, chosen: &[VertexSet], new: VertexSet) -> bool {
        // every pairwise-disjoint subfamily containing `new`
        fn rec(b: &BuildingSet, pool: &[VertexSet], acc: VertexSet, size: usize) -> bool {
            if size >= 2 && b.contains(acc) {
                return false;
            }
            for (i, &s) in pool.iter().enumerate() {
                if !s.intersects(acc) && !rec(b, &pool[i + 1..], acc.union(s), size + 1) {
                    return false;
                }
            }
            true
        }
        let pool: Vec<VertexSet> = chosen.iter().copied().filter(|s| !s.intersects(new)).collect();
        rec(b, &pool, new, 1)
    }

    fn search(
        b: &BuildingSet,
        facets: &[VertexSet],
        start: usize,
        n: usize,
        chosen: &mut Vec<VertexSet>,
        out: &mut Vec<Vec<VertexSet>>,
    ) {
        if chosen.len() == n {
            out.push(chosen.clone());
            return;
        }
        for i in start..facets.len() {
            if facets.len() - i < n - chosen.len() {
                break;
            }
            let f = facets[i];
            let nested_or_disjoint = chosen
                .iter()
                .all(|&c| c.is_subset(f) || f.is_subset(c) || !c.intersects(f));
            if nested_or_disjoint && disjoint_unions_ok(b, chosen, f) {
                chosen.push(f);
                search(b, facets, i + 1, n, chosen, out);
                chosen.pop();
            }
        }
    }

    let mut out = Vec::new();
    search(b, &facets, 0, n, &mut Vec::with_capacity(n), &mut out);
    Ok(out)
}

/// Vertices obtained by solving the facet equations of each maximal nested
/// set against the projected system `h` of `b`. Every solution must be
/// feasible and distinct, otherwise the face description is contradicted.
pub fn vertices_from_nested(b: &BuildingSet, h: &HalfspaceSystem, limits: &Limits) -> Result<Polytope> {
    let n = h.dimension;
    if n + 1 != b.ground_size() || h.lifted_total.is_none() {
        return Err(Error::Precondition(
            "expected the projected system of the same building set".into(),
        ));
    }
    if n > limits.max_dim {
        return Err(Error::ResourceLimit {
            what: "polytope dimension",
            value: n as u64,
            cap: limits.max_dim as u64,
        });
    }
    let index: HashMap<VertexSet, usize> = h
        .constraints
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c.label {
            ConstraintLabel::Member(m) => Some((m, i)),
            _ => None,
        })
        .collect();
    let rows = int_rows(h);
    let mut found: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
    for family in enumerate_vertices_nested(b)? {
        let idx: Vec<usize> = family
            .iter()
            .map(|m| {
                index
                    .get(m)
                    .copied()
                    .ok_or_else(|| Error::Internal(format!("no constraint labelled {m}")))
            })
            .collect::<Result<_>>()?;
        let cand = rows
            .as_ref()
            .and_then(|r| candidate_fast(r, &idx))
            .unwrap_or_else(|| candidate_exact(h, &idx));
        match cand {
            Candidate::Vertex(x, active) => {
                if found.insert(x.clone(), active).is_some() {
                    return Err(Error::Internal(format!(
                        "two nested sets give the same point {x:?}"
                    )));
                }
            }
            Candidate::Singular => {
                return Err(Error::Internal(format!(
                    "facets of nested set {family:?} are linearly dependent"
                )))
            }
            Candidate::Infeasible => {
                return Err(Error::Internal(format!(
                    "facets of nested set {family:?} meet outside the polytope"
                )))
            }
        }
    }
    let (vertices, vertex_facets) = found.into_iter().unzip();
    Ok(Polytope {
        system: h.clone(),
        vertices,
        vertex_facets,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeDescriptor {
    /// Vertex indices `(from, to)` with `to - from = length * direction`.
    pub endpoints: (usize, usize),
    pub primitive_direction: Vec<i64>,
    #[serde(serialize_with = "ser::rational")]
    pub affine_length: Rational,
}

fn check_simple(p: &Polytope) -> Result<()> {
    let n = p.dimension();
    for (i, f) in p.vertex_facets.iter().enumerate() {
        if f.len() != n {
            return Err(Error::NonSimple {
                vertex: i,
                active: f.len(),
                dimension: n,
            });
        }
    }
    Ok(())
}

/// Primitive direction (first nonzero entry positive) and affine length of
/// the segment between two points; endpoints are swapped if needed so the
/// length is nonnegative.
pub fn segment_direction(a: &[Rational], b: &[Rational]) -> (bool, Vec<i64>, Rational) {
    let diff: Vec<Rational> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let (dir, len) = linalg::integer_direction(&diff);
    let flip = dir.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let dir: Vec<i64> = dir
        .iter()
        .map(|x| {
            let x = if flip { -x } else { x.clone() };
            x.to_i64().expect("edge directions of small polytopes fit in i64")
        })
        .collect();
    (flip, dir, len)
}

/// Edges of a simple polytope: vertex pairs sharing exactly `n - 1` facets.
pub fn edges(p: &Polytope) -> Result<Vec<EdgeDescriptor>> {
    check_simple(p)?;
    let n = p.dimension();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut by_ridge: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (v, facets) in p.vertex_facets.iter().enumerate() {
        for skip in 0..n {
            let mut key = facets.clone();
            key.remove(skip);
            by_ridge.entry(key).or_default().push(v);
        }
    }
    let mut out = Vec::new();
    for (key, vs) in by_ridge {
        match vs.as_slice() {
            [_] => {
                return Err(Error::Internal(format!(
                    "vertex {} has a ray along facets {key:?} with no second endpoint",
                    vs[0]
                )))
            }
            &[a, b] => {
                let (flip, dir, len) = segment_direction(&p.vertices[a], &p.vertices[b]);
                let endpoints = if flip { (b, a) } else { (a, b) };
                out.push(EdgeDescriptor {
                    endpoints,
                    primitive_direction: dir,
                    affine_length: len,
                });
            }
            _ => {
                return Err(Error::Internal(format!(
                    "{} vertices share the ridge {key:?}",
                    vs.len()
                )))
            }
        }
    }
    out.sort_by(|x, y| {
        let kx = (x.endpoints.0.min(x.endpoints.1), x.endpoints.0.max(x.endpoints.1));
        let ky = (y.endpoints.0.min(y.endpoints.1), y.endpoints.0.max(y.endpoints.1));
        kx.cmp(&ky)
    });
    Ok(out)
}

/// Lifts a projected direction back to the hyperplane `sum x_i = const`.
pub fn lift_direction(d: &[i64]) -> Vec<i64> {
    let mut out = d.to_vec();
    out.push(-d.iter().sum::<i64>());
    out
}

/// Whether a lifted direction is `e_j - e_k` up to sign.
pub fn is_root_direction(lifted: &[i64]) -> bool {
    let plus = lifted.iter().filter(|&&x| x == 1).count();
    let minus = lifted.iter().filter(|&&x| x == -1).count();
    let zero = lifted.iter().filter(|&&x| x == 0).count();
    plus == 1 && minus == 1 && zero + 2 == lifted.len()
}

/// Every edge of a projected nestohedron, lifted back, is parallel to some
/// `e_j - e_k`.
pub fn verify_edge_directions(p: &Polytope) -> Result<bool> {
    Ok(edges(p)?
        .iter()
        .all(|e| is_root_direction(&lift_direction(&e.primitive_direction))))
}

/// At every vertex the primitive outward normals of the tight facets form a
/// lattice basis (determinant `+-1`).
pub fn delzant_check(p: &Polytope) -> Result<bool> {
    check_simple(p)?;
    for facets in &p.vertex_facets {
        let normals: Vec<Vec<i64>> = facets
            .iter()
            .map(|&i| p.system.constraints[i].outward_normal())
            .collect();
        if linalg::det_int(&normals).abs() != BigInt::one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of constraints that do not define a facet, i.e. whose tight
/// vertices span less than an `(n - 1)`-dimensional affine set.
pub fn redundant_constraints(p: &Polytope) -> Vec<usize> {
    let n = p.dimension();
    if n == 0 {
        return Vec::new();
    }
    (0..p.system.constraints.len())
        .filter(|&c| {
            let on: Vec<&Vec<Rational>> = p
                .vertices
                .iter()
                .zip(&p.vertex_facets)
                .filter(|(_, f)| f.contains(&c))
                .map(|(v, _)| v)
                .collect();
            let Some((first, rest)) = on.split_first() else {
                return true;
            };
            let diffs: Vec<Vec<Rational>> = rest
                .iter()
                .map(|v| v.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
                .collect();
            let rank = if diffs.is_empty() { 0 } else { linalg::rank_rational(diffs) };
            rank + 1 < n
        })
        .collect()
}

/// `h_{P_B}(w) = sum_{I in B} max_{i in I} w_i`, the support function of the
/// Minkowski sum of the simplices `Delta_I`.
pub fn support_minkowski(b: &BuildingSet, w: &[i64]) -> Result<Rational> {
    if w.len() != b.ground_size() {
        return Err(Error::Precondition(format!(
            "direction has {} entries, ground set has {}",
            w.len(),
            b.ground_size()
        )));
    }
    let total: BigInt = b
        .members()
        .iter()
        .map(|m| BigInt::from(m.iter().map(|l| w[l - 1]).max().expect("members are nonempty")))
        .sum();
    Ok(Rational::from_integer(total))
}

/// Whether the segment `[p, q]` lies in `{x : h}`; by convexity only the
/// endpoints need checking.
pub fn contains_segment(h: &HalfspaceSystem, p: &[Rational], q: &[Rational]) -> Result<bool> {
    if p.len() != h.dimension || q.len() != h.dimension {
        return Err(Error::Precondition(format!(
            "segment endpoints must have dimension {}",
            h.dimension
        )));
    }
    Ok(h.contains(p) && h.contains(q))
}
