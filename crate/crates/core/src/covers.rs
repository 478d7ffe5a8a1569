//! Z/2 voltage double covers, the projective-planarity decision, and
//! quotients by fixed-point-free involutions.
//!
//! A connected graph embeds in the projective plane iff some Z/2 voltage
//! assignment yields a planar derived graph: an embedding lifts to its
//! antipodal double cover, and conversely a planar regular cover forces a
//! projective embedding. Voltages on a spanning tree can be normalized to
//! zero, leaving `2^cycle_rank` assignments to try.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{test_planarity, RotationSystem};
use crate::graph::{Graph, VertexId};
use crate::maps::GraphMap;
use crate::planarity::lr_planarity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge [{0}, {1}] is not an edge of the graph")]
    UnknownEdge(VertexId, VertexId),
    #[error("edge [{0}, {1}] has no voltage")]
    MissingVoltage(VertexId, VertexId),
    #[error("voltage {0} is not 0 or 1")]
    BadVoltage(u8),
    #[error("given edges do not form a spanning tree")]
    NotSpanningTree,
    #[error("pairing has {found} entries, graph has {expected} vertices")]
    PairingLength { expected: usize, found: usize },
    #[error("pairing fixes vertex {0}")]
    FixedPoint(VertexId),
    #[error("pairing is not an involution at vertex {0}")]
    NotInvolution(VertexId),
    #[error("pairing does not preserve edge [{0}, {1}]")]
    NotAutomorphism(VertexId, VertexId),
    #[error("edge [{0}, {1}] joins a vertex to its partner and would become a loop")]
    LoopCreatingEdge(VertexId, VertexId),
    #[error("vertex {0} is adjacent to both {1} and its partner; the quotient would merge edges")]
    MergedEdges(VertexId, VertexId),
    #[error("map is not invariant under the pairing at vertex {0}")]
    MapNotInvariant(VertexId),
    #[error("map domain differs from the graph being quotiented")]
    MapDomainMismatch,
    #[error("malformed key {0:?}")]
    BadKey(String),
}

/// A Z/2 label on every edge of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoltageAssignment {
    graph: Graph,
    /// Aligned with `graph.edges()`.
    voltage: Vec<bool>,
}

impl VoltageAssignment {
    pub fn zero(graph: Graph) -> Self {
        let m = graph.edge_count();
        VoltageAssignment { graph, voltage: vec![false; m] }
    }

    /// Voltage 1 on exactly the listed edges.
    pub fn from_edges(graph: Graph, ones: &[(VertexId, VertexId)]) -> Result<Self, CoverError> {
        let mut va = VoltageAssignment::zero(graph);
        for &(u, w) in ones {
            va.set(u, w, true)?;
        }
        Ok(va)
    }

    /// From the `"u-w": 0|1` file mapping; every edge must be covered.
    pub fn from_map(graph: Graph, voltage: &BTreeMap<String, u8>) -> Result<Self, CoverError> {
        let mut parsed = BTreeMap::new();
        for (key, &b) in voltage {
            if b > 1 {
                return Err(CoverError::BadVoltage(b));
            }
            let (u, w) = parse_edge_key(key).ok_or_else(|| CoverError::BadKey(key.clone()))?;
            if !graph.has_edge(u, w) {
                return Err(CoverError::UnknownEdge(u, w));
            }
            parsed.insert((u.min(w), u.max(w)), b == 1);
        }
        let mut out = Vec::with_capacity(graph.edge_count());
        for (u, w) in graph.edges() {
            out.push(*parsed.get(&(u, w)).ok_or(CoverError::MissingVoltage(u, w))?);
        }
        Ok(VoltageAssignment { graph, voltage: out })
    }

    pub fn to_map(&self) -> BTreeMap<String, u8> {
        self.graph.edges().zip(&self.voltage).map(|((u, w), &b)| (format!("{u}-{w}"), u8::from(b))).collect()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    fn edge_position(&self, u: VertexId, w: VertexId) -> Option<usize> {
        let (a, b) = (u.min(w), u.max(w));
        self.graph.edges().position(|e| e == (a, b))
    }

    pub fn set(&mut self, u: VertexId, w: VertexId, value: bool) -> Result<(), CoverError> {
        let i = self.edge_position(u, w).ok_or(CoverError::UnknownEdge(u, w))?;
        self.voltage[i] = value;
        Ok(())
    }

    pub fn get(&self, u: VertexId, w: VertexId) -> Option<bool> {
        self.edge_position(u, w).map(|i| self.voltage[i])
    }

    /// Edges carrying voltage 1.
    pub fn ones(&self) -> Vec<(VertexId, VertexId)> {
        self.graph.edges().zip(&self.voltage).filter(|(_, &b)| b).map(|(e, _)| e).collect()
    }

    /// The derived graph and its projection onto the base.
    ///
    /// Vertex `(v, s)` gets id `v + s * n`; an edge `{u, w}` with voltage `b`
    /// lifts to `{(u, s), (w, s ^ b)}` for both sheets `s`. Lifted vertices
    /// keep the base vertex's display name.
    pub fn derive_double_cover(&self) -> (Graph, GraphMap) {
        let cover = derived_graph(&self.graph, &self.voltage);
        let n = self.graph.vertex_count();
        let assignment = (0..2 * n).map(|i| VertexId::from(i % n)).collect();
        let projection = GraphMap::new(cover.clone(), self.graph.clone(), assignment).expect("projection is total");
        (cover, projection)
    }
}

fn parse_edge_key(key: &str) -> Option<(VertexId, VertexId)> {
    let (a, b) = key.split_once('-')?;
    Some((VertexId(a.trim().parse().ok()?), VertexId(b.trim().parse().ok()?)))
}

fn derived_graph(base: &Graph, voltage: &[bool]) -> Graph {
    let n = base.vertex_count();
    let mut cover = Graph::new();
    for _sheet in 0..2 {
        for v in base.vertices() {
            cover.add_vertex(base.name(v).map(str::to_owned));
        }
    }
    for ((u, w), &b) in base.edges().zip(voltage) {
        for s in 0..2usize {
            let t = s ^ usize::from(b);
            cover
                .add_edge(VertexId::from(u.index() + s * n), VertexId::from(w.index() + t * n))
                .expect("lifted edge is simple");
        }
    }
    cover
}

/// Swaps the two sheets of a derived double cover of an `n`-vertex graph.
pub fn sheet_swap(cover: &Graph) -> Result<Involution, CoverError> {
    let n = cover.vertex_count() / 2;
    let pairing = (0..2 * n).map(|i| VertexId::from((i + n) % (2 * n))).collect();
    Involution::new(cover, pairing)
}

/// Certificate of projective planarity: a voltage assignment whose derived
/// graph is planar, together with that graph and a spherical embedding.
#[derive(Clone, Debug)]
pub struct ProjectiveCertificate {
    pub voltage: VoltageAssignment,
    pub cover: Graph,
    pub projection: GraphMap,
    pub embedding: RotationSystem,
}

#[derive(Clone, Debug)]
pub struct ProjectiveDecision {
    pub projective_planar: bool,
    pub cycle_rank: usize,
    /// Assignments examined in enumeration order, up to and including the
    /// first success; `2^cycle_rank` on refutation.
    pub assignments_checked: u64,
    pub certificate: Option<ProjectiveCertificate>,
}

/// BFS spanning tree from the smallest vertex, neighbors in ascending order.
pub fn bfs_spanning_tree(g: &Graph) -> Vec<(VertexId, VertexId)> {
    let mut tree = Vec::new();
    if g.is_empty() {
        return tree;
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([VertexId(0)]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                tree.push((u.min(w), u.max(w)));
                queue.push_back(w);
            }
        }
    }
    tree
}

/// Decides projective planarity by exhaustive voltage enumeration with the
/// default BFS spanning tree.
pub fn is_projective_planar(g: &Graph) -> Result<ProjectiveDecision, CoverError> {
    if !g.is_connected() {
        return Err(CoverError::Disconnected);
    }
    is_projective_planar_with_tree(g, &bfs_spanning_tree(g))
}

/// As [`is_projective_planar`], normalizing voltages to zero on `tree`.
///
/// Co-tree edges are taken in ascending edge order, and assignments are
/// enumerated lexicographically with the first co-tree edge most
/// significant. The reported certificate is the first planar one in that
/// order, whatever the thread scheduling.
pub fn is_projective_planar_with_tree(
    g: &Graph,
    tree: &[(VertexId, VertexId)],
) -> Result<ProjectiveDecision, CoverError> {
    if !g.is_connected() {
        return Err(CoverError::Disconnected);
    }
    let tree_set: std::collections::BTreeSet<(VertexId, VertexId)> =
        tree.iter().map(|&(u, w)| (u.min(w), u.max(w))).collect();
    let mut check = Graph::with_vertices(g.vertex_count());
    for &(u, w) in &tree_set {
        if !g.has_edge(u, w) {
            return Err(CoverError::NotSpanningTree);
        }
        check.add_edge(u, w).unwrap();
    }
    if tree_set.len() + 1 != g.vertex_count() || !check.is_connected() {
        return Err(CoverError::NotSpanningTree);
    }

    let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    let cotree: Vec<usize> = (0..edges.len()).filter(|&i| !tree_set.contains(&edges[i])).collect();
    let rank = cotree.len();
    debug_assert_eq!(rank, g.cycle_rank());
    assert!(rank < 63, "cycle rank {rank} is too large to enumerate");
    let total = 1u64 << rank;

    let voltage_of = |k: u64| {
        let mut v = vec![false; edges.len()];
        for (j, &i) in cotree.iter().enumerate() {
            v[i] = (k >> (rank - 1 - j)) & 1 == 1;
        }
        v
    };

    let found = (0..total).into_par_iter().find_first(|&k| lr_planarity(&derived_graph(g, &voltage_of(k))).is_some());

    let Some(k) = found else {
        return Ok(ProjectiveDecision {
            projective_planar: false,
            cycle_rank: rank,
            assignments_checked: total,
            certificate: None,
        });
    };
    let voltage = VoltageAssignment { graph: g.clone(), voltage: voltage_of(k) };
    let (cover, projection) = voltage.derive_double_cover();
    let embedding = test_planarity(&cover).embedding.expect("certificate cover is planar");
    Ok(ProjectiveDecision {
        projective_planar: true,
        cycle_rank: rank,
        assignments_checked: k + 1,
        certificate: Some(ProjectiveCertificate { voltage, cover, projection, embedding }),
    })
}

/// A fixed-point-free automorphism of order two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    pairing: Vec<VertexId>,
}

impl Involution {
    pub fn new(g: &Graph, pairing: Vec<VertexId>) -> Result<Self, CoverError> {
        if pairing.len() != g.vertex_count() {
            return Err(CoverError::PairingLength { expected: g.vertex_count(), found: pairing.len() });
        }
        for v in g.vertices() {
            let p = pairing[v.index()];
            if !g.contains(p) || pairing[p.index()] != v {
                return Err(CoverError::NotInvolution(v));
            }
            if p == v {
                return Err(CoverError::FixedPoint(v));
            }
        }
        for (u, w) in g.edges() {
            if !g.has_edge(pairing[u.index()], pairing[w.index()]) {
                return Err(CoverError::NotAutomorphism(u, w));
            }
        }
        Ok(Involution { pairing })
    }

    /// From the `{"<v>": <w>}` file mapping; listing one direction of a pair
    /// is enough.
    pub fn from_map(g: &Graph, pairs: &BTreeMap<String, VertexId>) -> Result<Self, CoverError> {
        let n = g.vertex_count();
        let mut pairing: Vec<Option<VertexId>> = vec![None; n];
        for (k, &w) in pairs {
            let v = VertexId(k.trim().parse().map_err(|_| CoverError::BadKey(k.clone()))?);
            if !g.contains(v) || !g.contains(w) {
                return Err(CoverError::NotInvolution(v));
            }
            for (a, b) in [(v, w), (w, v)] {
                match pairing[a.index()] {
                    Some(existing) if existing != b => return Err(CoverError::NotInvolution(a)),
                    _ => pairing[a.index()] = Some(b),
                }
            }
        }
        let pairing = pairing
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or(CoverError::FixedPoint(VertexId::from(i))))
            .collect::<Result<Vec<_>, _>>()?;
        Involution::new(g, pairing)
    }

    pub fn to_map(&self) -> BTreeMap<String, VertexId> {
        self.pairing.iter().enumerate().filter(|(i, p)| *i < p.index()).map(|(i, &p)| (i.to_string(), p)).collect()
    }

    #[inline]
    pub fn partner(&self, v: VertexId) -> VertexId {
        self.pairing[v.index()]
    }

    pub fn pairing(&self) -> &[VertexId] {
        &self.pairing
    }
}

/// Output of [`quotient_by_involution`].
#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: Graph,
    /// Two-to-one cover of the quotient.
    pub projection: GraphMap,
    /// `induced ∘ projection = m` when a map was supplied.
    pub induced: Option<GraphMap>,
}

/// Collapses each pair `{v, partner(v)}` to one vertex.
///
/// Orbits are numbered by their smaller member, ascending, and take that
/// member's display name.
pub fn quotient_by_involution(g: &Graph, inv: &Involution, m: Option<&GraphMap>) -> Result<Quotient, CoverError> {
    let inv = Involution::new(g, inv.pairing.clone())?;
    for (u, w) in g.edges() {
        if inv.partner(u) == w {
            return Err(CoverError::LoopCreatingEdge(u, w));
        }
    }
    for v in g.vertices() {
        for &w in g.neighbors(v) {
            if w < inv.partner(w) && g.has_edge(v, inv.partner(w)) {
                return Err(CoverError::MergedEdges(v, w));
            }
        }
    }
    if let Some(m) = m {
        if m.domain() != g {
            return Err(CoverError::MapDomainMismatch);
        }
        if let Some(v) = g.vertices().find(|&v| m.image(v) != m.image(inv.partner(v))) {
            return Err(CoverError::MapNotInvariant(v));
        }
    }

    let mut orbit = vec![VertexId(0); g.vertex_count()];
    let mut reps = Vec::new();
    let mut quotient = Graph::new();
    for v in g.vertices() {
        let p = inv.partner(v);
        if v < p {
            let q = quotient.add_vertex(g.name(v).map(str::to_owned));
            orbit[v.index()] = q;
            orbit[p.index()] = q;
            reps.push(v);
        }
    }
    for (u, w) in g.edges() {
        quotient.add_edge(orbit[u.index()], orbit[w.index()]).expect("no loops after the checks above");
    }
    let projection = GraphMap::new(g.clone(), quotient.clone(), orbit).expect("orbit map is total");
    let induced = m.map(|m| {
        let assignment = reps.iter().map(|&r| m.image(r)).collect();
        GraphMap::new(quotient.clone(), m.codomain().clone(), assignment).expect("induced map is total")
    });
    Ok(Quotient { graph: quotient, projection, induced })
}

/// File form of a voltage assignment: `{"graph": …, "voltage": {"u-w": 0|1}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoltageFile {
    pub graph: Graph,
    pub voltage: BTreeMap<String, u8>,
}

impl VoltageFile {
    pub fn from_assignment(va: &VoltageAssignment) -> Self {
        VoltageFile { graph: va.graph.clone(), voltage: va.to_map() }
    }

    pub fn into_assignment(self) -> Result<VoltageAssignment, CoverError> {
        VoltageAssignment::from_map(self.graph, &self.voltage)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::is_planar;
    use crate::iso::are_isomorphic;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::with_vertices(n);
        for u in 0..n {
            for w in u + 1..n {
                g.add_edge(u.into(), w.into()).unwrap();
            }
        }
        g
    }

    fn cube() -> Graph {
        Graph::from_edges(
            8,
            [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)],
        )
        .unwrap()
    }

    #[test]
    fn zero_voltages_give_two_copies() {
        let (cover, proj) = VoltageAssignment::zero(cube()).derive_double_cover();
        assert_eq!(cover.vertex_count(), 16);
        assert_eq!(cover.connected_components().len(), 2);
        assert_eq!(proj.verify_cover(), Ok(Ok(())));
        assert!(is_planar(&cover));
    }

    #[test]
    fn one_crossing_edge_on_triangle_gives_hexagon() {
        let va = VoltageAssignment::from_edges(cycle(3), &[(VertexId(0), VertexId(1))]).unwrap();
        let (cover, proj) = va.derive_double_cover();
        assert!(are_isomorphic(&cover, &cycle(6)));
        assert_eq!(proj.verify_cover(), Ok(Ok(())));
    }

    #[test]
    fn voltage_map_round_trip_and_errors() {
        let va = VoltageAssignment::from_edges(cycle(4), &[(VertexId(3), VertexId(0))]).unwrap();
        let map = va.to_map();
        assert_eq!(map["0-3"], 1);
        assert_eq!(VoltageAssignment::from_map(cycle(4), &map).unwrap(), va);
        let mut partial = map.clone();
        partial.remove("1-2");
        assert!(matches!(VoltageAssignment::from_map(cycle(4), &partial), Err(CoverError::MissingVoltage(..))));
        let mut extra = map;
        extra.insert("0-2".into(), 0);
        assert!(matches!(VoltageAssignment::from_map(cycle(4), &extra), Err(CoverError::UnknownEdge(..))));
    }

    #[test]
    fn k5_is_projective_planar() {
        let d = is_projective_planar(&complete(5)).unwrap();
        assert!(d.projective_planar);
        assert_eq!(d.cycle_rank, 6);
        let cert = d.certificate.unwrap();
        assert_eq!(cert.cover.vertex_count(), 10);
        assert_eq!(cert.projection.verify_cover(), Ok(Ok(())));
        assert!(is_planar(&cert.cover));
        assert_eq!(cert.embedding.euler_genus(), Ok(0));
    }

    #[test]
    fn planar_graphs_succeed_on_first_assignment() {
        let d = is_projective_planar(&cube()).unwrap();
        assert!(d.projective_planar);
        assert_eq!(d.assignments_checked, 1);
        assert!(d.certificate.unwrap().voltage.ones().is_empty());
    }

    #[test]
    fn disconnected_rejected() {
        let g = cycle(3).disjoint_union(&cycle(3));
        assert!(matches!(is_projective_planar(&g), Err(CoverError::Disconnected)));
        assert!(matches!(
            is_projective_planar_with_tree(&cycle(4), &[(VertexId(0), VertexId(1))]),
            Err(CoverError::NotSpanningTree)
        ));
    }

    #[test]
    fn hexagon_antipodal_quotient_is_triangle() {
        let c6 = cycle(6);
        let inv = Involution::new(&c6, (0..6).map(|i| VertexId((i + 3) % 6)).collect()).unwrap();
        let q = quotient_by_involution(&c6, &inv, None).unwrap();
        assert!(are_isomorphic(&q.graph, &cycle(3)));
        assert_eq!(q.projection.verify_cover(), Ok(Ok(())));
        assert_eq!(q.projection.fiber_sizes(), vec![2, 2, 2]);
    }

    #[test]
    fn cube_antipodal_quotient_is_k4() {
        // antipode in this numbering: 0<->6, 1<->7, 2<->4, 3<->5
        let pairing = [6, 7, 4, 5, 2, 3, 0, 1].iter().map(|&i| VertexId(i)).collect();
        let g = cube();
        let inv = Involution::new(&g, pairing).unwrap();
        let q = quotient_by_involution(&g, &inv, None).unwrap();
        assert!(are_isomorphic(&q.graph, &complete(4)));
        assert_eq!(q.projection.verify_cover(), Ok(Ok(())));
    }

    #[test]
    fn involution_validation() {
        let c4 = cycle(4);
        let ids = |v: &[u32]| v.iter().map(|&i| VertexId(i)).collect::<Vec<_>>();
        assert_eq!(Involution::new(&c4, ids(&[0, 2, 1, 3])), Err(CoverError::FixedPoint(VertexId(0))));
        assert_eq!(Involution::new(&c4, ids(&[1, 2, 3, 0])), Err(CoverError::NotInvolution(VertexId(0))));
        // swapping 0<->1 and 2<->3 on the path 0-1-2-3 plus chord is not an automorphism
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        assert!(matches!(Involution::new(&g, ids(&[1, 0, 3, 2])), Err(CoverError::NotAutomorphism(..))));
        // reflection of C4 swapping adjacent vertices creates loops
        let inv = Involution::new(&c4, ids(&[1, 0, 3, 2])).unwrap();
        assert!(matches!(quotient_by_involution(&c4, &inv, None), Err(CoverError::LoopCreatingEdge(..))));
        // antipodal C4 would merge the two edges at each vertex
        let inv = Involution::new(&c4, ids(&[2, 3, 0, 1])).unwrap();
        assert!(matches!(quotient_by_involution(&c4, &inv, None), Err(CoverError::MergedEdges(..))));
    }

    #[test]
    fn quotient_with_invariant_map() {
        let c12 = cycle(12);
        let m = GraphMap::new(c12.clone(), cycle(3), (0..12).map(|i| VertexId(i % 3)).collect()).unwrap();
        let inv = Involution::new(&c12, (0..12).map(|i| VertexId((i + 6) % 12)).collect()).unwrap();
        let q = quotient_by_involution(&c12, &inv, Some(&m)).unwrap();
        let induced = q.induced.unwrap();
        assert_eq!(q.projection.then(&induced).unwrap(), m);
        assert_eq!(induced.verify_cover(), Ok(Ok(())));

        let bad = GraphMap::new(c12.clone(), cycle(12), (0..12).map(VertexId::from).collect()).unwrap();
        assert_eq!(
            quotient_by_involution(&c12, &inv, Some(&bad)).unwrap_err(),
            CoverError::MapNotInvariant(VertexId(0))
        );
    }
}
