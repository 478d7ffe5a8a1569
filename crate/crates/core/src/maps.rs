//! Vertex maps between graphs and the local conditions that make them
//! homomorphisms, emulators or covers.
//!
//! Every check walks domain vertices in ascending id order and stops at the
//! first violation, which it returns as a [`LocalFailure`]. Witnesses are
//! therefore reproducible, and each one can be re-validated against the map
//! with [`LocalFailure::holds_for`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("assignment has {found} entries, domain has {expected} vertices")]
    AssignmentLength { expected: usize, found: usize },
    #[error("domain vertex {0} has no image")]
    Unassigned(VertexId),
    #[error("domain vertex {0} does not exist")]
    UnknownDomainVertex(VertexId),
    #[error("image {image} of domain vertex {at} is not a codomain vertex")]
    UnknownCodomainVertex { at: VertexId, image: VertexId },
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(LocalFailure),
    #[error("cannot compose: codomain of the first map differs from the domain of the second")]
    ComposeMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    /// Some neighbor of `f(at)` has no preimage among the neighbors of `at`.
    NotSurjective,
    /// Two neighbors of `at` share an image.
    NotInjective,
    /// An edge at `at` is not sent to an edge.
    NotEdgePreserving,
    /// A codomain vertex has empty preimage.
    NotVertexSurjective,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureKind::NotSurjective => "not-surjective",
            FailureKind::NotInjective => "not-injective",
            FailureKind::NotEdgePreserving => "not-edge-preserving",
            FailureKind::NotVertexSurjective => "not-vertex-surjective",
        })
    }
}

/// A violated local condition.
///
/// `at` is the offending domain vertex (absent for vertex-surjectivity
/// failures). `detail` holds the codomain vertices involved: the missing
/// neighbor, the duplicated image, the two images of a bad edge, or the
/// missing codomain vertex. For edge failures `neighbor` is the other
/// domain endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFailure {
    pub kind: FailureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbor: Option<VertexId>,
    pub detail: Vec<VertexId>,
}

impl fmt::Display for LocalFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(at) = self.at {
            write!(f, " at {at}")?;
        }
        let detail: Vec<String> = self.detail.iter().map(|v| v.to_string()).collect();
        write!(f, " [{}]", detail.join(", "))
    }
}

impl LocalFailure {
    /// Re-evaluates the failed condition against `m`; true iff it still fails
    /// exactly as described.
    pub fn holds_for(&self, m: &GraphMap) -> bool {
        let dom = &m.domain;
        let cod = &m.codomain;
        let in_dom = |v: VertexId| dom.contains(v);
        match self.kind {
            FailureKind::NotVertexSurjective => match self.detail.as_slice() {
                [missing] => cod.contains(*missing) && !m.assignment.contains(missing),
                _ => false,
            },
            FailureKind::NotEdgePreserving => {
                let (Some(u), Some(w)) = (self.at, self.neighbor) else {
                    return false;
                };
                if !in_dom(u) || !in_dom(w) || !dom.has_edge(u, w) {
                    return false;
                }
                let (a, b) = (m.image(u), m.image(w));
                self.detail == [a, b] && !cod.has_edge(a, b)
            }
            FailureKind::NotInjective => {
                let (Some(at), [dup]) = (self.at, self.detail.as_slice()) else {
                    return false;
                };
                in_dom(at) && dom.neighbors(at).iter().filter(|&&u| m.image(u) == *dup).count() >= 2
            }
            FailureKind::NotSurjective => {
                let (Some(at), [missing]) = (self.at, self.detail.as_slice()) else {
                    return false;
                };
                in_dom(at)
                    && cod.has_edge(m.image(at), *missing)
                    && dom.neighbors(at).iter().all(|&u| m.image(u) != *missing)
            }
        }
    }

    /// Same failure with ids replaced by display names, for reports.
    pub fn named(&self, m: &GraphMap) -> NamedFailure {
        NamedFailure {
            kind: self.kind,
            at: self.at.map(|v| m.domain.label(v)),
            neighbor: self.neighbor.map(|v| m.domain.label(v)),
            detail: self.detail.iter().map(|&v| m.codomain.label(v)).collect(),
        }
    }
}

/// [`LocalFailure`] with display names instead of ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedFailure {
    pub kind: FailureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbor: Option<String>,
    pub detail: Vec<String>,
}

/// A total vertex assignment from `domain` to `codomain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    domain: Graph,
    codomain: Graph,
    assignment: Vec<VertexId>,
}

impl GraphMap {
    /// `assignment[i]` is the image of domain vertex `i`.
    pub fn new(domain: Graph, codomain: Graph, assignment: Vec<VertexId>) -> Result<Self, MapError> {
        if assignment.len() != domain.vertex_count() {
            return Err(MapError::AssignmentLength { expected: domain.vertex_count(), found: assignment.len() });
        }
        for (i, &image) in assignment.iter().enumerate() {
            if !codomain.contains(image) {
                return Err(MapError::UnknownCodomainVertex { at: VertexId::from(i), image });
            }
        }
        Ok(GraphMap { domain, codomain, assignment })
    }

    pub fn identity(g: &Graph) -> Self {
        GraphMap { domain: g.clone(), codomain: g.clone(), assignment: g.vertices().collect() }
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.codomain
    }

    pub fn assignment(&self) -> &[VertexId] {
        &self.assignment
    }

    #[inline]
    pub fn image(&self, v: VertexId) -> VertexId {
        self.assignment[v.index()]
    }

    pub fn into_parts(self) -> (Graph, Graph, Vec<VertexId>) {
        (self.domain, self.codomain, self.assignment)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphMap) -> Result<GraphMap, MapError> {
        if self.codomain != next.domain {
            return Err(MapError::ComposeMismatch);
        }
        let assignment = self.assignment.iter().map(|&v| next.image(v)).collect();
        Ok(GraphMap { domain: self.domain.clone(), codomain: next.codomain.clone(), assignment })
    }

    /// Preimage size of every codomain vertex, indexed by codomain id.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.codomain.vertex_count()];
        for &v in &self.assignment {
            sizes[v.index()] += 1;
        }
        sizes
    }

    fn first_missing_vertex(&self) -> Option<LocalFailure> {
        let sizes = self.fiber_sizes();
        sizes.iter().position(|&s| s == 0).map(|i| LocalFailure {
            kind: FailureKind::NotVertexSurjective,
            at: None,
            neighbor: None,
            detail: vec![VertexId::from(i)],
        })
    }

    /// Images of the neighbors of `v`, one slot per codomain neighbor of
    /// `f(v)` counting hits. Requires the homomorphism property.
    fn neighbor_hits(&self, v: VertexId) -> (&[VertexId], Vec<usize>) {
        let target = self.codomain.neighbors(self.image(v));
        let mut hits = vec![0; target.len()];
        for &u in self.domain.neighbors(v) {
            let pos = target.binary_search(&self.image(u)).expect("homomorphism sends neighbors to neighbors");
            hits[pos] += 1;
        }
        (target, hits)
    }

    /// Checks that every domain edge goes to a codomain edge.
    pub fn verify_homomorphism(&self) -> Result<(), LocalFailure> {
        for v in self.domain.vertices() {
            let a = self.image(v);
            for &w in self.domain.neighbors(v) {
                let b = self.image(w);
                if !self.codomain.has_edge(a, b) {
                    return Err(LocalFailure {
                        kind: FailureKind::NotEdgePreserving,
                        at: Some(v),
                        neighbor: Some(w),
                        detail: vec![a, b],
                    });
                }
            }
        }
        Ok(())
    }

    /// Emulator condition: vertex-surjective, and the neighbors of every
    /// domain vertex hit every neighbor of its image.
    pub fn verify_emulator(&self) -> Result<Result<(), LocalFailure>, MapError> {
        self.verify_homomorphism().map_err(MapError::NotHomomorphism)?;
        for v in self.domain.vertices() {
            let (target, hits) = self.neighbor_hits(v);
            if let Some(pos) = hits.iter().position(|&h| h == 0) {
                return Ok(Err(LocalFailure {
                    kind: FailureKind::NotSurjective,
                    at: Some(v),
                    neighbor: None,
                    detail: vec![target[pos]],
                }));
            }
        }
        Ok(self.first_missing_vertex().map_or(Ok(()), Err))
    }

    /// Cover condition: vertex-surjective, and the induced neighbor maps are
    /// bijections. A duplicated image is reported ahead of a missing one.
    pub fn verify_cover(&self) -> Result<Result<(), LocalFailure>, MapError> {
        self.verify_homomorphism().map_err(MapError::NotHomomorphism)?;
        for v in self.domain.vertices() {
            let (target, hits) = self.neighbor_hits(v);
            if let Some(pos) = hits.iter().position(|&h| h > 1) {
                return Ok(Err(LocalFailure {
                    kind: FailureKind::NotInjective,
                    at: Some(v),
                    neighbor: None,
                    detail: vec![target[pos]],
                }));
            }
            if let Some(pos) = hits.iter().position(|&h| h == 0) {
                return Ok(Err(LocalFailure {
                    kind: FailureKind::NotSurjective,
                    at: Some(v),
                    neighbor: None,
                    detail: vec![target[pos]],
                }));
            }
        }
        Ok(self.first_missing_vertex().map_or(Ok(()), Err))
    }

    pub fn classify(&self) -> Classification {
        if let Err(f) = self.verify_homomorphism() {
            return Classification { class: MapClass::Invalid, witness: Some(f) };
        }
        match self.verify_emulator().expect("homomorphism checked") {
            Err(f) => Classification { class: MapClass::HomomorphismOnly, witness: Some(f) },
            Ok(()) => match self.verify_cover().expect("homomorphism checked") {
                Ok(()) => Classification { class: MapClass::Cover, witness: None },
                Err(f) => Classification { class: MapClass::ProperEmulator, witness: Some(f) },
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapClass {
    Cover,
    ProperEmulator,
    HomomorphismOnly,
    Invalid,
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapClass::Cover => "cover",
            MapClass::ProperEmulator => "proper-emulator",
            MapClass::HomomorphismOnly => "homomorphism-only",
            MapClass::Invalid => "invalid",
        })
    }
}

/// Result of [`GraphMap::classify`]. The witness explains why the map is not
/// in the next stronger class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: MapClass,
    pub witness: Option<LocalFailure>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn ids(v: &[u32]) -> Vec<VertexId> {
        v.iter().map(|&i| VertexId(i)).collect()
    }

    fn c6_to_c3() -> GraphMap {
        GraphMap::new(cycle(6), cycle(3), ids(&[0, 1, 2, 0, 1, 2])).unwrap()
    }

    fn path_to_edge() -> GraphMap {
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let e = Graph::from_edges(2, [(0, 1)]).unwrap();
        GraphMap::new(p, e, ids(&[0, 1, 0])).unwrap()
    }

    #[test]
    fn constructor_checks_totality() {
        assert!(matches!(GraphMap::new(cycle(3), cycle(3), ids(&[0, 1])), Err(MapError::AssignmentLength { .. })));
        assert!(matches!(
            GraphMap::new(cycle(3), cycle(3), ids(&[0, 1, 5])),
            Err(MapError::UnknownCodomainVertex { .. })
        ));
    }

    #[test]
    fn homomorphism_examples() {
        let cube = Graph::from_edges(
            8,
            [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)],
        )
        .unwrap();
        assert_eq!(GraphMap::identity(&cube).verify_homomorphism(), Ok(()));
        assert_eq!(c6_to_c3().verify_homomorphism(), Ok(()));

        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        let constant = GraphMap::new(edge.clone(), edge, ids(&[0, 0])).unwrap();
        let f = constant.verify_homomorphism().unwrap_err();
        assert_eq!(f.kind, FailureKind::NotEdgePreserving);
        assert_eq!(f.at, Some(VertexId(0)));
        assert!(f.holds_for(&constant));
        assert_eq!(constant.classify().class, MapClass::Invalid);
        assert!(matches!(constant.verify_emulator(), Err(MapError::NotHomomorphism(_))));
    }

    #[test]
    fn emulator_and_cover_examples() {
        let m = path_to_edge();
        assert_eq!(m.verify_emulator(), Ok(Ok(())));
        let f = m.verify_cover().unwrap().unwrap_err();
        assert_eq!(f.kind, FailureKind::NotInjective);
        assert_eq!(f.at, Some(VertexId(1)));
        assert_eq!(f.detail, ids(&[0]));
        assert!(f.holds_for(&m));
        assert_eq!(m.classify().class, MapClass::ProperEmulator);

        let c = c6_to_c3();
        assert_eq!(c.verify_emulator(), Ok(Ok(())));
        assert_eq!(c.verify_cover(), Ok(Ok(())));
        assert_eq!(c.classify(), Classification { class: MapClass::Cover, witness: None });
        assert_eq!(GraphMap::identity(&cycle(5)).classify().class, MapClass::Cover);
    }

    #[test]
    fn missing_neighbor_and_missing_vertex() {
        // C6 onto C6 by a non-surjective fold: 0 1 2 1 2 1 misses vertices 3,4,5.
        let m = GraphMap::new(cycle(6), cycle(6), ids(&[0, 1, 2, 1, 2, 1])).unwrap();
        let f = m.verify_emulator().unwrap().unwrap_err();
        assert_eq!(f.kind, FailureKind::NotSurjective);
        assert_eq!(f.at, Some(VertexId(0)));
        assert_eq!(f.detail, ids(&[5]));
        assert!(f.holds_for(&m));
        assert_eq!(m.classify().class, MapClass::HomomorphismOnly);

        // Single edge onto a path: locally fine at both ends of the edge only
        // if we ignore vertex 2, so vertex-surjectivity must catch it.
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let e = Graph::from_edges(2, [(0, 1)]).unwrap();
        let m = GraphMap::new(e, p, ids(&[0, 1])).unwrap();
        let f = m.verify_emulator().unwrap().unwrap_err();
        assert_eq!(f.kind, FailureKind::NotSurjective);
        assert!(f.holds_for(&m));

        let two = Graph::from_edges(2, [(0, 1)]).unwrap();
        let k2_twice = two.disjoint_union(&two);
        let m = GraphMap::new(two.clone(), k2_twice, ids(&[0, 1])).unwrap();
        let f = m.verify_cover().unwrap().unwrap_err();
        assert_eq!(f.kind, FailureKind::NotVertexSurjective);
        assert_eq!(f.detail, ids(&[2]));
        assert!(f.holds_for(&m));
    }

    #[test]
    fn witness_does_not_hold_for_other_maps() {
        let f = path_to_edge().verify_cover().unwrap().unwrap_err();
        assert!(!f.holds_for(&GraphMap::identity(&cycle(3))));
    }

    #[test]
    fn fibers() {
        assert_eq!(c6_to_c3().fiber_sizes(), vec![2, 2, 2]);
        assert_eq!(GraphMap::identity(&cycle(4)).fiber_sizes(), vec![1; 4]);
        assert_eq!(path_to_edge().fiber_sizes(), vec![2, 1]);
    }

    #[test]
    fn composition() {
        // C12 -> C6 -> C3
        let a = GraphMap::new(cycle(12), cycle(6), (0..12).map(|i| VertexId(i % 6)).collect()).unwrap();
        let b = c6_to_c3();
        let ab = a.then(&b).unwrap();
        assert_eq!(ab.verify_cover(), Ok(Ok(())));
        assert_eq!(b.then(&a), Err(MapError::ComposeMismatch));
    }
}
