//! Building sets on `[n+1]`: graphical ones from connected induced
//! subgraphs, and arbitrary ones checked against the two axioms.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_connected_subsets, Graph, KVector, VertexSet, MAX_VERTICES};
use crate::Limits;

/// One failed building-set axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    MissingSingleton {
        label: usize,
    },
    NotUnionClosed {
        left: VertexSet,
        right: VertexSet,
        union: VertexSet,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingSingleton { label } => write!(f, "missing singleton {{{label}}}"),
            Violation::NotUnionClosed { left, right, union } => {
                write!(f, "{left} and {right} intersect but {union} is absent")
            }
        }
    }
}

/// Outcome of checking the axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildingSet {
    ground_size: usize,
    /// Canonical order: cardinality, then lexicographic.
    members: Vec<VertexSet>,
    /// Same members sorted by raw bits, for membership queries.
    lookup: Vec<u64>,
}

fn structural_check(ground_size: usize, members: &[VertexSet]) -> Result<Vec<u64>> {
    if ground_size == 0 || ground_size > MAX_VERTICES {
        return Err(Error::Input(format!(
            "ground size must lie in 1..={MAX_VERTICES}, got {ground_size}"
        )));
    }
    let ground = VertexSet::full(ground_size);
    for m in members {
        if m.is_empty() {
            return Err(Error::Input("building-set members must be nonempty".into()));
        }
        if !m.is_subset(ground) {
            return Err(Error::Input(format!(
                "member {m} is not a subset of 1..={ground_size}"
            )));
        }
    }
    let mut lookup: Vec<u64> = members.iter().map(|m| m.bits()).collect();
    lookup.sort_unstable();
    if let Some(w) = lookup.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Input(format!(
            "duplicate member {}",
            VertexSet::from_bits(w[0])
        )));
    }
    Ok(lookup)
}

/// Checks both axioms for a candidate member list. Structural problems
/// (members outside the ground set, empty or repeated members) are errors;
/// axiom failures are reported as violations.
pub fn validate(ground_size: usize, members: &[VertexSet]) -> Result<Validation> {
    let lookup = structural_check(ground_size, members)?;
    let has = |s: VertexSet| lookup.binary_search(&s.bits()).is_ok();
    let mut violations = Vec::new();
    for label in 1..=ground_size {
        if !has(VertexSet::singleton(label)) {
            violations.push(Violation::MissingSingleton { label });
        }
    }
    let mut sorted = members.to_vec();
    sorted.sort_by(VertexSet::canonical_cmp);
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            if a.intersects(b) && !has(a.union(b)) {
                violations.push(Violation::NotUnionClosed {
                    left: a,
                    right: b,
                    union: a.union(b),
                });
            }
        }
    }
    Ok(Validation { violations })
}

impl BuildingSet {
    /// Validated construction; any axiom failure is returned as
    /// [`Error::InvalidBuildingSet`].
    pub fn new(ground_size: usize, members: Vec<VertexSet>) -> Result<Self> {
        let v = validate(ground_size, &members)?;
        if !v.is_valid() {
            return Err(Error::InvalidBuildingSet(v.violations));
        }
        Ok(Self::from_parts(ground_size, members))
    }

    fn from_parts(ground_size: usize, mut members: Vec<VertexSet>) -> Self {
        members.sort_by(VertexSet::canonical_cmp);
        let mut lookup: Vec<u64> = members.iter().map(|m| m.bits()).collect();
        lookup.sort_unstable();
        BuildingSet {
            ground_size,
            members,
            lookup,
        }
    }

    /// The graphical building set: all connected induced subgraphs.
    pub fn from_graph(g: &Graph, limits: &Limits) -> Result<Self> {
        let members = enumerate_connected_subsets(g, limits)?;
        Ok(Self::from_parts(g.vertex_count(), members))
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn ground(&self) -> VertexSet {
        VertexSet::full(self.ground_size)
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: VertexSet) -> bool {
        self.lookup.binary_search(&s.bits()).is_ok()
    }

    pub fn validate(&self) -> Validation {
        validate(self.ground_size, &self.members).expect("constructed sets are structurally sound")
    }

    pub fn has_full_ground(&self) -> bool {
        self.contains(self.ground())
    }

    /// `B|_w`: members contained in `w`.
    pub fn restrict(&self, window: VertexSet) -> Result<RestrictedBuildingSet<'_>> {
        if window.is_empty() || !window.is_subset(self.ground()) {
            return Err(Error::Precondition(format!(
                "window {window} is not a nonempty subset of 1..={}",
                self.ground_size
            )));
        }
        let members = self
            .members
            .iter()
            .copied()
            .filter(|m| m.is_subset(window))
            .collect();
        Ok(RestrictedBuildingSet {
            base: self,
            window,
            members,
        })
    }

    /// `|B|_w|` without materialising the restriction.
    pub fn restriction_size(&self, window: VertexSet) -> usize {
        self.members.iter().filter(|m| m.is_subset(window)).count()
    }

    /// Number of members containing each label; for graphical sets this is
    /// exactly the `k` vector.
    pub fn membership_counts(&self) -> KVector {
        let mut k = vec![0u64; self.ground_size];
        for m in &self.members {
            for l in m.iter() {
                k[l - 1] += 1;
            }
        }
        KVector::new(k)
    }
}

#[derive(Debug, Clone)]
pub struct RestrictedBuildingSet<'a> {
    pub base: &'a BuildingSet,
    pub window: VertexSet,
    pub members: Vec<VertexSet>,
}

impl RestrictedBuildingSet<'_> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[usize]) -> VertexSet {
        VertexSet::from_labels(64, labels.iter().copied()).unwrap()
    }

    fn sets(list: &[&[usize]]) -> Vec<VertexSet> {
        list.iter().map(|l| set(l)).collect()
    }

    #[test]
    fn validate_examples() {
        let counter = sets(&[&[1], &[2], &[3], &[4], &[1, 2], &[3, 4], &[1, 2, 3, 4]]);
        assert!(validate(4, &counter).unwrap().is_valid());
        assert!(validate(2, &sets(&[&[1], &[2]])).unwrap().is_valid());

        let bad = validate(3, &sets(&[&[1], &[2], &[1, 2], &[2, 3]])).unwrap();
        assert_eq!(
            bad.violations,
            vec![
                Violation::MissingSingleton { label: 3 },
                Violation::NotUnionClosed {
                    left: set(&[1, 2]),
                    right: set(&[2, 3]),
                    union: set(&[1, 2, 3])
                }
            ]
        );
        assert!(matches!(
            BuildingSet::new(3, sets(&[&[1], &[2], &[1, 2], &[2, 3]])),
            Err(Error::InvalidBuildingSet(_))
        ));
    }

    #[test]
    fn structural_errors() {
        assert!(validate(2, &sets(&[&[1], &[3]])).is_err());
        assert!(validate(2, &[VertexSet::EMPTY]).is_err());
        assert!(validate(2, &sets(&[&[1], &[1]])).is_err());
    }

    #[test]
    fn from_graph_examples() {
        let lim = Limits::default();
        let p3 = BuildingSet::from_graph(&Graph::path(3).unwrap(), &lim).unwrap();
        assert_eq!(p3.len(), 6);
        assert!(p3.contains(set(&[1, 2, 3])));
        assert!(p3.has_full_ground());

        let two = BuildingSet::from_graph(&Graph::empty(2).unwrap(), &lim).unwrap();
        assert_eq!(two.members(), &sets(&[&[1], &[2]])[..]);
        assert!(!two.has_full_ground());

        let k2 = BuildingSet::from_graph(&Graph::complete(2).unwrap(), &lim).unwrap();
        assert_eq!(k2.members(), &sets(&[&[1], &[2], &[1, 2]])[..]);
    }

    #[test]
    fn restrict_examples() {
        let lim = Limits::default();
        let p3 = BuildingSet::from_graph(&Graph::path(3).unwrap(), &lim).unwrap();
        let r = p3.restrict(set(&[1, 2])).unwrap();
        assert_eq!(r.members, sets(&[&[1], &[2], &[1, 2]]));
        assert_eq!(p3.restrict(set(&[2])).unwrap().len(), 1);
        let k3 = BuildingSet::from_graph(&Graph::complete(3).unwrap(), &lim).unwrap();
        assert_eq!(k3.restrict(set(&[1, 3])).unwrap().members, sets(&[&[1], &[3], &[1, 3]]));
        assert!(p3.restrict(set(&[4])).is_err());
    }

    #[test]
    fn counterexample_has_full_ground() {
        let b = BuildingSet::new(
            4,
            sets(&[&[1], &[2], &[3], &[4], &[1, 2], &[3, 4], &[1, 2, 3, 4]]),
        )
        .unwrap();
        assert!(b.has_full_ground());
        assert_eq!(b.membership_counts().values(), &[3, 3, 3, 3]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
            (1..=max_n).prop_flat_map(|n| {
                let pairs: Vec<(usize, usize)> = (1..=n)
                    .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
                    .collect();
                proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
                    let edges: Vec<_> = pairs
                        .iter()
                        .zip(keep)
                        .filter(|(_, k)| *k)
                        .map(|(e, _)| *e)
                        .collect();
                    Graph::new(n, edges).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn graphical_sets_are_building_sets(g in arb_graph(7)) {
                let b = BuildingSet::from_graph(&g, &Limits::default()).unwrap();
                prop_assert!(b.validate().is_valid());
                prop_assert_eq!(b.has_full_ground(), g.is_connected());
            }

            #[test]
            fn size_is_additive_over_components(g in arb_graph(8)) {
                let lim = Limits::default();
                let b = BuildingSet::from_graph(&g, &lim).unwrap();
                let mut total = 0;
                for c in g.connected_components() {
                    let (sub, _) = g.induced(c).unwrap();
                    total += BuildingSet::from_graph(&sub, &lim).unwrap().len();
                }
                prop_assert_eq!(b.len(), total);
            }

            #[test]
            fn restriction_equals_induced_subgraph(g in arb_graph(7), mask in 1u64..128) {
                let lim = Limits::default();
                let w = VertexSet::from_bits(mask).intersection(g.vertex_set());
                prop_assume!(!w.is_empty());
                let b = BuildingSet::from_graph(&g, &lim).unwrap();
                let (sub, labels) = g.induced(w).unwrap();
                let mut lifted: Vec<VertexSet> = BuildingSet::from_graph(&sub, &lim)
                    .unwrap()
                    .members()
                    .iter()
                    .map(|m| VertexSet::from_labels(64, m.iter().map(|l| labels[l - 1])).unwrap())
                    .collect();
                lifted.sort_by(VertexSet::canonical_cmp);
                prop_assert_eq!(b.restrict(w).unwrap().members, lifted);
            }
        }
    }
}
