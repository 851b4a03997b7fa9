//! The width formula and the certificates that pin it down from both sides.
//!
//! For a connected graph with pivot `p` (minimal `k_p > 1`, relabelled to
//! the last vertex), the projected nestohedron contains the diamond of
//! segments `L_i = {x : x_j = a for j != i, 1 <= x_i <= k_p}` and lies
//! between the parallel hyperplanes `sum x_i = |B| - 1` and
//! `sum x_i = |B| - k_p`. Both facts are re-checked on every call.

use std::collections::BTreeSet;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::building_set::BuildingSet;
use crate::error::{Error, Result};
use crate::graph::{count_k, Graph, KVector, Relabeling, VertexSet};
use crate::linalg::{rat, Rational};
use crate::polytope::{
    self, contains_segment, edges, enumerate_vertices_bruteforce, hrep, is_root_direction,
    lift_direction, permutohedron_hrep, project, segment_direction, support_minkowski,
    vertices_from_nested, Constraint, ConstraintLabel, HalfspaceSystem, Polytope, Sense,
};
use crate::{ser, Limits};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentWidth {
    pub vertices: VertexSet,
    pub width: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthResult {
    pub width: u64,
    pub pivot_vertex: Option<usize>,
    pub k: KVector,
    pub component_widths: Vec<ComponentWidth>,
}

fn width_of(k: &KVector, labels: impl Iterator<Item = usize>) -> u64 {
    labels
        .map(|l| k.get(l))
        .filter(|&x| x > 1)
        .min()
        .map_or(0, |x| x - 1)
}

/// `min{k_i - 1 : k_i > 1}`, or 0 when every vertex is isolated.
///
/// Component widths are recounted on each induced component and must agree
/// with the vertex-wise minimum.
pub fn gromov_width(g: &Graph, limits: &Limits) -> Result<WidthResult> {
    let k = count_k(g, limits)?;
    let pivot = k.pivot();
    let width = pivot.map_or(0, |p| k.get(p) - 1);
    let mut component_widths = Vec::new();
    for comp in g.connected_components() {
        let (sub, labels) = g.induced(comp)?;
        let local = count_k(&sub, limits)?;
        if labels.iter().enumerate().any(|(i, &l)| local.get(i + 1) != k.get(l)) {
            return Err(Error::Internal(format!(
                "component {comp} counts differ from the whole graph"
            )));
        }
        component_widths.push(ComponentWidth {
            vertices: comp,
            width: width_of(&local, 1..=sub.vertex_count()),
        });
    }
    let by_component = component_widths
        .iter()
        .filter(|c| c.vertices.len() >= 2)
        .map(|c| c.width)
        .min()
        .unwrap_or(0);
    if by_component != width {
        return Err(Error::Internal(format!(
            "vertex-wise width {width} differs from component-wise width {by_component}"
        )));
    }
    Ok(WidthResult {
        width,
        pivot_vertex: pivot,
        k,
        component_widths,
    })
}

/// A closed segment in projected coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    #[serde(serialize_with = "ser::rational_vec")]
    pub from: Vec<Rational>,
    #[serde(serialize_with = "ser::rational_vec")]
    pub to: Vec<Rational>,
    pub primitive_direction: Vec<i64>,
    #[serde(serialize_with = "ser::rational")]
    pub affine_length: Rational,
}

impl Segment {
    fn new(from: Vec<Rational>, to: Vec<Rational>) -> Self {
        let (flip, dir, len) = segment_direction(&from, &to);
        let (from, to) = if flip { (to, from) } else { (from, to) };
        Segment {
            from,
            to,
            primitive_direction: dir,
            affine_length: len,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiamondCertificate {
    #[serde(serialize_with = "ser::rational")]
    pub rho: Rational,
    #[serde(serialize_with = "ser::option_rational")]
    pub a: Option<Rational>,
    #[serde(serialize_with = "ser::option_rational_vec")]
    pub center: Option<Vec<Rational>>,
    pub segments: Vec<Segment>,
    pub containment_checked: bool,
    pub pivot_vertex: Option<usize>,
    /// Original label of each projected coordinate.
    pub coordinate_labels: Vec<usize>,
    /// Original label of the coordinate eliminated by projection.
    pub dropped_label: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParallelFacetCertificate {
    pub u: Vec<i64>,
    #[serde(serialize_with = "ser::rational")]
    pub lambda: Rational,
    #[serde(serialize_with = "ser::rational")]
    pub mu: Rational,
    #[serde(serialize_with = "ser::rational")]
    pub bound: Rational,
    /// Facet whose hyperplane is `<u, x> = lambda`, in original labels.
    pub upper_facet: VertexSet,
    /// Facet whose hyperplane is `<u, x> = mu`, in original labels.
    pub lower_facet: VertexSet,
    pub edge_pairings_ok: bool,
    /// `"enumerated edges"` when edges were computed, `"root directions"`
    /// when every `e_j - e_k` was paired instead.
    pub edge_pairings_source: &'static str,
    pub supports_attained: bool,
    /// `"vertices"` or `"support function"`.
    pub support_source: &'static str,
    pub edge_count: Option<usize>,
    pub coordinate_labels: Vec<usize>,
    pub dropped_label: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub limits: Limits,
    /// Enumerate vertices and edges to verify supports and pairings.
    pub geometry: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            limits: Limits::default(),
            geometry: true,
        }
    }
}

/// Graph relabelled so the pivot is last, with its building set and
/// projected system.
struct Pivoted {
    pivot: usize,
    k_pivot: u64,
    relabel: Relabeling,
    b: BuildingSet,
    system: HalfspaceSystem,
}

impl Pivoted {
    fn new(g: &Graph, limits: &Limits) -> Result<Self> {
        if g.vertex_count() < 2 || !g.is_connected() {
            return Err(Error::Precondition(
                "certificates need a connected graph with at least two vertices".into(),
            ));
        }
        let k = count_k(g, limits)?;
        let pivot = k.pivot().expect("a connected graph with an edge has k_i > 1");
        let relabel = Relabeling::moving_to_last(g.vertex_count(), pivot);
        let b = BuildingSet::from_graph(&g.relabel(&relabel), limits)?;
        let system = project(&hrep(&b)?)?;
        Ok(Pivoted {
            pivot,
            k_pivot: k.get(pivot),
            relabel,
            b,
            system,
        })
    }

    fn n(&self) -> usize {
        self.system.dimension
    }

    fn coordinate_labels(&self) -> Vec<usize> {
        (1..=self.n()).map(|i| self.relabel.invert(i)).collect()
    }
}

fn axis_segment(n: usize, i: usize, base: &Rational, lo: &Rational, hi: &Rational) -> Segment {
    let mut from = vec![base.clone(); n];
    let mut to = from.clone();
    from[i] = lo.clone();
    to[i] = hi.clone();
    Segment::new(from, to)
}

/// Checks the diamond's own claims against `h` and returns whether the
/// segments are contained.
fn verify_axis_diamond(h: &HalfspaceSystem, segments: &[Segment], rho: &Rational) -> Result<bool> {
    let n = h.dimension;
    for (i, s) in segments.iter().enumerate() {
        let mut e = vec![0i64; n];
        e[i] = 1;
        if s.primitive_direction != e || &s.affine_length != rho {
            return Err(Error::Internal(format!(
                "segment {} has direction {:?} and length {}",
                i + 1,
                s.primitive_direction,
                s.affine_length
            )));
        }
        if !contains_segment(h, &s.from, &s.to)? {
            return Err(Error::Internal(format!(
                "segment {} from {:?} to {:?} leaves the polytope",
                i + 1,
                s.from,
                s.to
            )));
        }
    }
    Ok(true)
}

/// Diamond of axis-parallel segments through `(a, ..., a)` with
/// `a = (|B| - k_p - 1) / (n - 1)`, each of affine length `k_p - 1`.
pub fn lower_certificate(g: &Graph, limits: &Limits) -> Result<DiamondCertificate> {
    let pv = Pivoted::new(g, limits)?;
    let n = pv.n();
    let kp = rat(pv.k_pivot as i64);
    let one = Rational::one();
    let rho = &kp - &one;
    let (a, center, segments) = if n == 1 {
        (None, None, vec![Segment::new(vec![one.clone()], vec![kp.clone()])])
    } else {
        let a = Rational::new(
            BigInt::from(pv.b.len() as i64 - pv.k_pivot as i64 - 1),
            BigInt::from(n as i64 - 1),
        );
        if a < one || a > kp {
            return Err(Error::Internal(format!(
                "diamond centre coordinate {a} lies outside [1, {kp}]"
            )));
        }
        let segments = (0..n).map(|i| axis_segment(n, i, &a, &one, &kp)).collect();
        (Some(a.clone()), Some(vec![a; n]), segments)
    };
    let containment_checked = verify_axis_diamond(&pv.system, &segments, &rho)?;
    Ok(DiamondCertificate {
        rho,
        a,
        center,
        segments,
        containment_checked,
        pivot_vertex: Some(pv.pivot),
        coordinate_labels: pv.coordinate_labels(),
        dropped_label: pv.pivot,
    })
}

fn dot(u: &[i64], x: &[Rational]) -> Rational {
    u.iter()
        .zip(x)
        .fold(Rational::zero(), |acc, (&a, b)| acc + b * BigInt::from(a))
}

fn pairs_unit(u: &[i64], eta: &[i64]) -> bool {
    let s: i64 = u.iter().zip(eta).map(|(a, b)| a * b).sum();
    (-1..=1).contains(&s)
}

/// Finds the projected constraint with the given label and checks that it
/// reads `<u, x> (sense) rhs`.
fn expect_facet(h: &HalfspaceSystem, label: VertexSet, u: &[i64], sense: Sense, rhs: &Rational) -> Result<()> {
    let c: &Constraint = h
        .index_of(&ConstraintLabel::Member(label))
        .map(|i| &h.constraints[i])
        .ok_or_else(|| Error::Internal(format!("facet {label} is missing")))?;
    if c.coefficients != u || c.sense != sense || &c.rhs != rhs {
        return Err(Error::Internal(format!(
            "facet {label} reads {:?} {} {}, expected {:?} {} {}",
            c.coefficients,
            c.sense.symbol(),
            c.rhs,
            u,
            sense.symbol(),
            rhs
        )));
    }
    Ok(())
}

struct SupportCheck {
    pairings_ok: bool,
    attained: bool,
    edge_count: usize,
}

/// Checks `mu <= <u, v> <= lambda` on every vertex with both values
/// attained, and `<u, eta>` in `{0, +-1}` on every edge.
fn check_on_polytope(p: &Polytope, u: &[i64], lambda: &Rational, mu: &Rational) -> Result<SupportCheck> {
    let values: Vec<Rational> = p.vertices.iter().map(|v| dot(u, v)).collect();
    let (Some(max), Some(min)) = (values.iter().max(), values.iter().min()) else {
        return Err(Error::Internal("the polytope has no vertices".into()));
    };
    let es = edges(p)?;
    Ok(SupportCheck {
        pairings_ok: es.iter().all(|e| pairs_unit(u, &e.primitive_direction)),
        attained: max == lambda && min == mu,
        edge_count: es.len(),
    })
}

/// Supporting hyperplanes `sum x_i = |B| - 1` and `sum x_i = |B| - k_p`
/// with `u = (1, ..., 1)`, giving the bound `k_p - 1`.
pub fn upper_certificate(g: &Graph, opts: &CertifyOptions) -> Result<ParallelFacetCertificate> {
    let pv = Pivoted::new(g, &opts.limits)?;
    let n = pv.n();
    let total = pv.b.len() as i64;
    let u = vec![1i64; n];
    let lambda = rat(total - 1);
    let mu = rat(total - pv.k_pivot as i64);

    let last = VertexSet::singleton(n + 1);
    let rest = VertexSet::full(n);
    if !pv.b.contains(rest) {
        return Err(Error::Internal(format!(
            "removing pivot {} disconnects the graph",
            pv.pivot
        )));
    }
    expect_facet(&pv.system, last, &u, Sense::Le, &lambda)?;
    expect_facet(&pv.system, rest, &u, Sense::Ge, &mu)?;

    let (check, edge_source, support_source) = if opts.geometry {
        let p = vertices_from_nested(&pv.b, &pv.system, &opts.limits)?;
        (check_on_polytope(&p, &u, &lambda, &mu)?, "enumerated edges", "vertices")
    } else {
        // lifted u = (1, ..., 1, 0); every root e_j - e_k pairs into {0, +-1}
        let mut lifted = u.clone();
        lifted.push(0);
        let neg: Vec<i64> = lifted.iter().map(|x| -x).collect();
        let max = support_minkowski(&pv.b, &lifted)?;
        let min = -support_minkowski(&pv.b, &neg)?;
        let roots_ok = (0..=n).all(|j| {
            (0..=n).filter(|&k| k != j).all(|k| {
                let s = lifted[j] - lifted[k];
                (-1..=1).contains(&s)
            })
        });
        let check = SupportCheck {
            pairings_ok: roots_ok,
            attained: max == lambda && min == mu,
            edge_count: 0,
        };
        (check, "root directions", "support function")
    };
    if !check.pairings_ok {
        return Err(Error::Internal("an edge pairs with u outside {0, +-1}".into()));
    }
    if !check.attained {
        return Err(Error::Internal(
            "the supporting hyperplanes are not both attained".into(),
        ));
    }
    let p = pv.pivot;
    Ok(ParallelFacetCertificate {
        bound: &lambda - &mu,
        u,
        lambda,
        mu,
        upper_facet: VertexSet::singleton(p),
        lower_facet: g.vertex_set().difference(VertexSet::singleton(p)),
        edge_pairings_ok: true,
        edge_pairings_source: edge_source,
        supports_attained: true,
        support_source,
        edge_count: opts.geometry.then_some(check.edge_count),
        coordinate_labels: pv.coordinate_labels(),
        dropped_label: p,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentCertificate {
    /// Global label of each local vertex of the component.
    pub labels: Vec<usize>,
    pub lower: DiamondCertificate,
    pub upper: ParallelFacetCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub width: WidthResult,
    pub components: Vec<ComponentCertificate>,
    /// The minimal component `rho` and `bound` both equal the width.
    pub tight: bool,
}

/// Width plus both certificates for every component with an edge.
pub fn certify(g: &Graph, opts: &CertifyOptions) -> Result<CertificationReport> {
    let width = gromov_width(g, &opts.limits)?;
    let mut components = Vec::new();
    for comp in g.connected_components() {
        if comp.len() < 2 {
            continue;
        }
        let (sub, labels) = g.induced(comp)?;
        components.push(ComponentCertificate {
            labels,
            lower: lower_certificate(&sub, &opts.limits)?,
            upper: upper_certificate(&sub, opts)?,
        });
    }
    let w = rat(width.width as i64);
    let min_rho = components.iter().map(|c| c.lower.rho.clone()).min();
    let min_bound = components.iter().map(|c| c.upper.bound.clone()).min();
    let tight = match (min_rho, min_bound) {
        (Some(r), Some(b)) => r == w && b == w,
        _ => width.width == 0,
    };
    if !tight {
        return Err(Error::Internal(format!(
            "certificates do not meet at the width {}",
            width.width
        )));
    }
    Ok(CertificationReport {
        width,
        components,
        tight,
    })
}

/// Whether the graph stays connected after removing `pivot` (default: the
/// minimal-`k` pivot). Failure for a vertex attaining the minimal `k` is an
/// internal error.
pub fn check_parallel_facets_exist(g: &Graph, pivot: Option<usize>, limits: &Limits) -> Result<bool> {
    if g.vertex_count() < 2 || !g.is_connected() {
        return Err(Error::Precondition(
            "parallel facets are defined for connected graphs with at least two vertices".into(),
        ));
    }
    let k = count_k(g, limits)?;
    let best = k.pivot().expect("connected graphs with an edge have k_i > 1");
    let p = pivot.unwrap_or(best);
    if p == 0 || p > g.vertex_count() {
        return Err(Error::Input(format!("vertex {p} is not in the graph")));
    }
    let rest = g.vertex_set().difference(VertexSet::singleton(p));
    let ok = g.is_connected_induced(rest)?;
    if !ok && k.get(p) == k.get(best) {
        return Err(Error::Internal(format!(
            "removing minimal vertex {p} disconnects the graph"
        )));
    }
    Ok(ok)
}

/// `n * k_i >= |B| - 1` for every vertex of a connected graph.
pub fn check_k_inequality(g: &Graph, limits: &Limits) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Precondition("the graph must be connected".into()));
    }
    let k = count_k(g, limits)?;
    let total: u64 = crate::graph::count_connected_subsets(g, limits)?;
    let n = g.vertex_count() as u64 - 1;
    Ok(k.values().iter().all(|&ki| n * ki + 1 >= total))
}

fn f_value(b: &BuildingSet, i: VertexSet) -> Rational {
    Rational::new(
        BigInt::from(b.restriction_size(i) as i64 - 1),
        BigInt::from(i.len() as i64 - 1),
    )
}

/// `f(I) = (|B|_I| - 1) / (|I| - 1)` grows along chains `I < J` with
/// `|J| = |I| + 1`, and `(|B| - k_p - 1) / (n - 1) >= f(I)` for every
/// proper member with `|I| >= 2`.
pub fn check_f_monotonic(b: &BuildingSet) -> Result<bool> {
    if !b.has_full_ground() {
        return Err(Error::Precondition("the ground set must be a member".into()));
    }
    let members: Vec<VertexSet> = b.members().iter().copied().filter(|m| m.len() >= 2).collect();
    for &i in &members {
        let fi = f_value(b, i);
        for &j in &members {
            if j.len() == i.len() + 1 && i.is_subset(j) && f_value(b, j) < fi {
                return Ok(false);
            }
        }
    }
    let n = b.ground_size() - 1;
    if n < 2 {
        return Ok(true);
    }
    let k = b.membership_counts();
    let kp = k.pivot().map_or(1, |p| k.get(p));
    let a = Rational::new(
        BigInt::from(b.len() as i64 - kp as i64 - 1),
        BigInt::from(n as i64 - 1),
    );
    Ok(members
        .iter()
        .filter(|&&m| m != b.ground())
        .all(|&m| a >= f_value(b, m)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub width_g: u64,
    pub width_h: u64,
    pub holds: bool,
    pub strict_required: bool,
    pub strict: bool,
}

/// Checks that `h` (vertex `i` of `h` is vertex `embedding[i - 1]` of `g`)
/// is a subgraph of `g`.
fn check_embedding(g: &Graph, h: &Graph, embedding: &[usize]) -> Result<()> {
    if embedding.len() != h.vertex_count() {
        return Err(Error::Input(format!(
            "embedding lists {} vertices, the subgraph has {}",
            embedding.len(),
            h.vertex_count()
        )));
    }
    let distinct: BTreeSet<usize> = embedding.iter().copied().collect();
    if distinct.len() != embedding.len() || embedding.iter().any(|&l| l == 0 || l > g.vertex_count()) {
        return Err(Error::Input(
            "embedding must list distinct vertices of the larger graph".into(),
        ));
    }
    for (u, v) in h.edges() {
        if !g.has_edge(embedding[u - 1], embedding[v - 1]) {
            return Err(Error::Input(format!(
                "edge {u}-{v} maps to {}-{}, which is not an edge",
                embedding[u - 1],
                embedding[v - 1]
            )));
        }
    }
    Ok(())
}

/// `width(h) <= width(g)`, strictly when `h` has fewer vertices. A
/// violation is an internal error.
pub fn subgraph_monotonicity(g: &Graph, h: &Graph, embedding: &[usize], limits: &Limits) -> Result<MonotonicityReport> {
    if !g.is_connected() {
        return Err(Error::Precondition("the larger graph must be connected".into()));
    }
    check_embedding(g, h, embedding)?;
    let width_g = gromov_width(g, limits)?.width;
    let width_h = gromov_width(h, limits)?.width;
    let strict_required = h.vertex_count() < g.vertex_count();
    let report = MonotonicityReport {
        width_g,
        width_h,
        holds: width_h <= width_g,
        strict_required,
        strict: width_h < width_g,
    };
    if !report.holds || (strict_required && !report.strict) {
        return Err(Error::Internal(format!(
            "subgraph width {width_h} against graph width {width_g} breaks monotonicity"
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonsqueezingReport {
    pub width_g: u64,
    pub width_h: u64,
    pub k: usize,
    pub m: u64,
    pub obstructed: bool,
    pub statement: String,
}

/// Compares `M_G x R^{2m}` with `M_H x R^{2k+2m}` for a connected proper
/// subgraph `h` on `|G| - k` vertices.
pub fn nonsqueezing_report(g: &Graph, h: &Graph, embedding: &[usize], m: u64, limits: &Limits) -> Result<NonsqueezingReport> {
    if !h.is_connected() {
        return Err(Error::Input("the subgraph must be connected".into()));
    }
    if h.vertex_count() >= g.vertex_count() {
        return Err(Error::Input(
            "the subgraph must have fewer vertices than the graph".into(),
        ));
    }
    let mono = subgraph_monotonicity(g, h, embedding, limits)?;
    let k = g.vertex_count() - h.vertex_count();
    let statement = format!(
        "width(M_G x R^{gm}) = width(M_G) = {wg} > {wh} = width(M_H) = width(M_H x R^{hm}), \
         so M_H x R^{hm} does not embed symplectically into M_G x R^{gm}",
        gm = 2 * m,
        hm = 2 * (k as u64) + 2 * m,
        wg = mono.width_g,
        wh = mono.width_h,
    );
    Ok(NonsqueezingReport {
        width_g: mono.width_g,
        width_h: mono.width_h,
        k,
        m,
        obstructed: mono.width_g > mono.width_h,
        statement,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermutohedronReport {
    #[serde(serialize_with = "ser::rational_vec")]
    pub c: Vec<Rational>,
    #[serde(serialize_with = "ser::rational")]
    pub width: Rational,
    pub lower: DiamondCertificate,
    pub upper: ParallelFacetCertificate,
    pub vertex_count: Option<usize>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == perm.len() {
            out.push(perm.clone());
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, out);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, &mut out);
    out
}

/// The permutohedron on the orbit of `c` as a polytope whose vertices are
/// the coordinate permutations, each checked against `h`.
fn permutohedron_polytope(c: &[Rational], h: &HalfspaceSystem) -> Result<Polytope> {
    let mut vertices = Vec::new();
    let mut vertex_facets = Vec::new();
    for perm in permutations(c.len()) {
        let v: Vec<Rational> = perm[..c.len() - 1].iter().map(|&i| c[i].clone()).collect();
        if !h.contains(&v) {
            return Err(Error::Internal(format!("permuted point {v:?} violates a facet")));
        }
        vertex_facets.push(h.active_set(&v));
        vertices.push(v);
    }
    Ok(Polytope {
        system: h.clone(),
        vertices,
        vertex_facets,
    })
}

/// Width `c_{n+1} - c_1` of the permutohedron with vertex coordinates `c`,
/// bounded below by a diamond centred at `sum_{i=2}^n c_i / (n - 1)` and
/// above by the hyperplanes `x_1 = c_1` and `x_1 = c_{n+1}`.
pub fn permutohedron_width(c: &[Rational], opts: &CertifyOptions) -> Result<PermutohedronReport> {
    if c.len() < 2 {
        return Err(Error::Input("need at least two coordinates".into()));
    }
    let h = project(&permutohedron_hrep(c, &opts.limits)?)?;
    let n = c.len() - 1;
    let lo = c[0].clone();
    let hi = c[n].clone();
    let width = &hi - &lo;
    let labels: Vec<usize> = (1..=n).collect();

    let (a, center, segments) = if n == 1 {
        (None, None, vec![Segment::new(vec![lo.clone()], vec![hi.clone()])])
    } else {
        let a = c[1..n].iter().fold(Rational::zero(), |s, x| s + x) / BigInt::from(n as i64 - 1);
        let segments = (0..n).map(|i| axis_segment(n, i, &a, &lo, &hi)).collect();
        (Some(a.clone()), Some(vec![a; n]), segments)
    };
    let containment_checked = verify_axis_diamond(&h, &segments, &width)?;
    let lower = DiamondCertificate {
        rho: width.clone(),
        a,
        center,
        segments,
        containment_checked,
        pivot_vertex: None,
        coordinate_labels: labels.clone(),
        dropped_label: n + 1,
    };

    let mut u = vec![0i64; n];
    u[0] = 1;
    let first = VertexSet::singleton(1);
    let others = VertexSet::full(n + 1).difference(first);
    expect_facet(&h, first, &u, Sense::Ge, &lo)?;
    expect_facet(&h, others, &u, Sense::Le, &hi)?;
    let (check, edge_source, support_source, vertex_count) = if opts.geometry {
        let p = permutohedron_polytope(c, &h)?;
        let count = p.vertices.len();
        (check_on_polytope(&p, &u, &hi, &lo)?, "enumerated edges", "vertices", Some(count))
    } else {
        // rearrangement: max <w, v> pairs sorted w with increasing c
        let support = |w: &[i64]| {
            let mut w = w.to_vec();
            w.sort();
            w.iter().zip(c).fold(Rational::zero(), |s, (&wi, ci)| s + ci * BigInt::from(wi))
        };
        let mut lifted = u.clone();
        lifted.push(0);
        let neg: Vec<i64> = lifted.iter().map(|x| -x).collect();
        let check = SupportCheck {
            pairings_ok: true,
            attained: support(&lifted) == hi && -support(&neg) == lo,
            edge_count: 0,
        };
        (check, "root directions", "support function", None)
    };
    if !check.pairings_ok || !check.attained {
        return Err(Error::Internal(
            "the permutohedron's parallel facets fail verification".into(),
        ));
    }
    let upper = ParallelFacetCertificate {
        bound: width.clone(),
        u,
        lambda: hi,
        mu: lo,
        upper_facet: others,
        lower_facet: first,
        edge_pairings_ok: true,
        edge_pairings_source: edge_source,
        supports_attained: true,
        support_source,
        edge_count: opts.geometry.then_some(check.edge_count),
        coordinate_labels: labels,
        dropped_label: n + 1,
    };
    Ok(PermutohedronReport {
        c: c.to_vec(),
        width,
        lower,
        upper,
        vertex_count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NestohedronBoundReport {
    pub formula_value: u64,
    #[serde(serialize_with = "ser::option_rational")]
    pub best_upper: Option<Rational>,
    pub best_u: Option<Vec<i64>>,
    /// Diamond size found by the search; a lower bound, not a width.
    #[serde(serialize_with = "ser::rational")]
    pub lower_found: Rational,
    #[serde(serialize_with = "ser::option_rational_vec")]
    pub lower_center: Option<Vec<Rational>>,
    pub lower_basis: Option<Vec<Vec<i64>>>,
    pub formula_tight: bool,
    pub vertex_count: usize,
    pub edge_count: usize,
}

/// Range of `t` with `x + t d` inside `h`; `None` if `x` is outside.
fn chord(h: &HalfspaceSystem, x: &[Rational], d: &[i64]) -> Option<Rational> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for c in &h.constraints {
        let row = c.ge_row();
        let ad: i64 = row.iter().zip(d).map(|(a, b)| a * b).sum();
        let rhs = if c.sense == Sense::Le { -c.rhs.clone() } else { c.rhs.clone() };
        let slack = dot(&row, x) - rhs;
        if slack.is_negative() {
            return None;
        }
        if ad == 0 {
            continue;
        }
        let t = -slack / BigInt::from(ad);
        if ad > 0 {
            lo = Some(lo.map_or(t.clone(), |l| l.max(t)));
        } else {
            hi = Some(hi.map_or(t.clone(), |u| u.min(t)));
        }
    }
    Some(hi? - lo?)
}

/// Projection of `e_i - e_j` for the lifted labels `i, j` in `1..=n+1`.
fn projected_root(n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut d = vec![0i64; n];
    if i <= n {
        d[i - 1] += 1;
    }
    if j <= n {
        d[j - 1] -= 1;
    }
    d
}

/// Along the line `x_i = s` (`i != j`, lifted `x_j = total - n s`), the
/// value of `s` maximising the smallest constraint slack.
fn diagonal_chebyshev(h: &HalfspaceSystem, total: &Rational, j: usize) -> Option<Rational> {
    let n = h.dimension;
    let point = |s: &Rational| -> Vec<Rational> {
        (1..=n)
            .map(|i| if i == j { total - s * BigInt::from(n as i64) } else { s.clone() })
            .collect()
    };
    // slack_c(s) = alpha_c + beta_c s
    let zero = Rational::zero();
    let one = Rational::one();
    let lines: Vec<(Rational, Rational)> = h
        .constraints
        .iter()
        .map(|c| {
            let s0 = c.slack(&point(&zero));
            let s1 = c.slack(&point(&one));
            (s0.clone(), s1 - s0)
        })
        .collect();
    let mut candidates: BTreeSet<Rational> = BTreeSet::new();
    for (x, (a1, b1)) in lines.iter().enumerate() {
        for (a2, b2) in &lines[x + 1..] {
            if b1 != b2 {
                candidates.insert((a2 - a1) / (b1 - b2));
            }
        }
        if !b1.is_zero() {
            candidates.insert(-a1 / b1);
        }
    }
    let min_slack = |s: &Rational| lines.iter().map(|(a, b)| a + b * s).min();
    candidates
        .into_iter()
        .filter_map(|s| min_slack(&s).map(|m| (m, s)))
        .filter(|(m, _)| !m.is_negative())
        .max_by(|x, y| x.0.cmp(&y.0).then_with(|| y.1.cmp(&x.1)))
        .map(|(_, s)| s)
}

/// Formula value, best parallel-facet upper bound, and the best diamond
/// found by a heuristic search, for any building set containing its ground
/// set.
pub fn nestohedron_bounds(b: &BuildingSet, limits: &Limits) -> Result<NestohedronBoundReport> {
    let h = project(&hrep(b)?)?;
    let n = h.dimension;
    let counts = b.membership_counts();
    let formula_value = counts.pivot().map_or(0, |p| counts.get(p) - 1);
    let p = enumerate_vertices_bruteforce(&h, limits)?;
    if n == 0 {
        return Ok(NestohedronBoundReport {
            formula_value,
            best_upper: Some(Rational::zero()),
            best_u: Some(Vec::new()),
            lower_found: Rational::zero(),
            lower_center: Some(Vec::new()),
            lower_basis: Some(Vec::new()),
            formula_tight: formula_value == 0,
            vertex_count: p.vertices.len(),
            edge_count: 0,
        });
    }
    let es = edges(&p)?;

    let mut candidates: BTreeSet<Vec<i64>> = BTreeSet::new();
    for c in &h.constraints {
        candidates.insert(c.coefficients.clone());
        candidates.insert(c.coefficients.iter().map(|x| -x).collect());
    }
    candidates.insert(vec![1; n]);
    let mut best: Option<(Rational, Vec<i64>)> = None;
    for u in candidates {
        if u.iter().all(|&x| x == 0) || !es.iter().all(|e| pairs_unit(&u, &e.primitive_direction)) {
            continue;
        }
        let values: Vec<Rational> = p.vertices.iter().map(|v| dot(&u, v)).collect();
        let spread = values.iter().max().unwrap() - values.iter().min().unwrap();
        let leading_positive = |v: &[i64]| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
        let better = best.as_ref().is_none_or(|(b, bu)| {
            &spread < b || (&spread == b && leading_positive(&u) && !leading_positive(bu))
        });
        if better {
            best = Some((spread, u));
        }
    }

    let total = h.lifted_total.clone().expect("projected systems record their total");
    let mut centers: Vec<Vec<Rational>> = Vec::new();
    let count = BigInt::from(p.vertices.len());
    centers.push(
        (0..n)
            .map(|i| p.vertices.iter().fold(Rational::zero(), |s, v| s + &v[i]) / &count)
            .collect(),
    );
    for j in 1..=n + 1 {
        let lifted_point = |s: &Rational| -> Vec<Rational> {
            (1..=n)
                .map(|i| if i == j { &total - s * BigInt::from(n as i64) } else { s.clone() })
                .collect()
        };
        if n >= 2 {
            let a = Rational::new(
                BigInt::from(b.len() as i64 - counts.get(j) as i64 - 1),
                BigInt::from(n as i64 - 1),
            );
            centers.push(lifted_point(&a));
        }
        if let Some(s) = diagonal_chebyshev(&h, &total, j) {
            centers.push(lifted_point(&s));
        }
    }

    type Diamond = (Rational, Option<Vec<Rational>>, Option<Vec<Vec<i64>>>);
    let mut lower: Diamond = (Rational::zero(), None, None);
    for center in &centers {
        for j in 1..=n + 1 {
            let basis: Vec<Vec<i64>> = (1..=n + 1).filter(|&i| i != j).map(|i| projected_root(n, i, j)).collect();
            let lens: Option<Vec<Rational>> = basis.iter().map(|d| chord(&h, center, d)).collect();
            if let Some(rho) = lens.and_then(|l| l.into_iter().min()) {
                if rho > lower.0 {
                    lower = (rho, Some(center.clone()), Some(basis));
                }
            }
        }
    }
    // a vertex with its n edges is a diamond when the edges form a basis
    for (vi, v) in p.vertices.iter().enumerate() {
        let incident: Vec<&polytope::EdgeDescriptor> = es
            .iter()
            .filter(|e| e.endpoints.0 == vi || e.endpoints.1 == vi)
            .collect();
        let basis: Vec<Vec<i64>> = incident.iter().map(|e| e.primitive_direction.clone()).collect();
        if basis.len() != n || crate::linalg::det_int(&basis).abs() != BigInt::one() {
            continue;
        }
        let rho = incident.iter().map(|e| e.affine_length.clone()).min().unwrap();
        if rho > lower.0 {
            lower = (rho, Some(v.clone()), Some(basis));
        }
    }

    let (lower_found, lower_center, lower_basis) = lower;
    if let Some((up, _)) = &best {
        if &lower_found > up {
            return Err(Error::Internal(format!(
                "diamond of size {lower_found} exceeds the upper bound {up}"
            )));
        }
    }
    let fv = rat(formula_value as i64);
    let formula_tight = best.as_ref().is_some_and(|(up, _)| up == &fv) && lower_found == fv;
    let (best_upper, best_u) = match best {
        Some((up, u)) => (Some(up), Some(u)),
        None => (None, None),
    };
    Ok(NestohedronBoundReport {
        formula_value,
        best_upper,
        best_u,
        lower_found,
        lower_center,
        lower_basis,
        formula_tight,
        vertex_count: p.vertices.len(),
        edge_count: es.len(),
    })
}

/// Whether a primitive projected direction lifts to some `e_j - e_k`.
pub fn is_root(direction: &[i64]) -> bool {
    is_root_direction(&lift_direction(direction))
}

/// Converts a rational to `u64` if it is a nonnegative integer.
pub fn as_u64(x: &Rational) -> Option<u64> {
    x.is_integer().then(|| x.to_integer().to_u64()).flatten()
}
