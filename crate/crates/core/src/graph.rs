//! Finite simple undirected graphs.
//!
//! Vertices are dense identifiers `0..n` handed out in creation order. Each
//! vertex may carry a display name, which is what reports and exports show;
//! covers and quotients renumber vertices but carry names across.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a vertex within one [`Graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(u32::try_from(i).expect("vertex index overflows u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop requested at vertex {0}")]
    Loop(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex ids must be exactly 0..{expected}, found {found}")]
    SparseIds { expected: usize, found: u32 },
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("edge [{0}, {1}] is not written with the smaller id first")]
    NonCanonicalEdge(VertexId, VertexId),
    #[error("duplicate edge [{0}, {1}]")]
    DuplicateEdge(VertexId, VertexId),
}

/// A finite simple undirected graph.
///
/// Adjacency lists are kept sorted, so every iteration order exposed here is
/// ascending by [`VertexId`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    names: Vec<Option<String>>,
    adj: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// `n` isolated, unnamed vertices.
    pub fn with_vertices(n: usize) -> Self {
        Graph { names: vec![None; n], adj: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Builds a graph on `n` vertices from an edge list. Repeated edges are
    /// merged; loops and out-of-range endpoints are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::with_vertices(n);
        for (u, v) in edges {
            g.add_edge(u.into(), v.into())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: Option<String>) -> VertexId {
        let id = VertexId::from(self.names.len());
        self.names.push(name);
        self.adj.push(Vec::new());
        id
    }

    /// Adds the edge `{u, v}`. Returns `false` if it was already present.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        match self.adj[u.index()].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u.index()].insert(pos, v);
                let pos = self.adj[v.index()].binary_search(&u).unwrap_err();
                self.adj[v.index()].insert(pos, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    /// Removes the edge `{u, v}`. Returns `false` if it was absent.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        match self.adj[u.index()].binary_search(&v) {
            Ok(pos) => {
                self.adj[u.index()].remove(pos);
                let pos = self.adj[v.index()].binary_search(&u).unwrap();
                self.adj[v.index()].remove(pos);
                self.edge_count -= 1;
                Ok(true)
            }
            Err(_) => Ok(false),
        }
    }

    pub fn set_name(&mut self, v: VertexId, name: Option<String>) -> Result<(), GraphError> {
        self.check(v)?;
        self.names[v.index()] = name;
        Ok(())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.names.len()
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + ExactSizeIterator {
        (0..self.names.len() as u32).map(VertexId)
    }

    /// Edges as `(min, max)` pairs in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |u| self.adj[u.index()].iter().copied().filter(move |&w| u < w).map(move |w| (u, w)))
    }

    /// Open neighborhood of `v`, sorted ascending.
    ///
    /// Panics if `v` is not a vertex of this graph; see [`Graph::try_neighbors`].
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v.index()]
    }

    pub fn try_neighbors(&self, v: VertexId) -> Result<&[VertexId], GraphError> {
        self.check(v)?;
        Ok(&self.adj[v.index()])
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.index()].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains(u) && self.contains(v) && self.adj[u.index()].binary_search(&v).is_ok()
    }

    pub fn name(&self, v: VertexId) -> Option<&str> {
        self.names.get(v.index()).and_then(|n| n.as_deref())
    }

    /// Display name, falling back to the numeric id.
    pub fn label(&self, v: VertexId) -> String {
        match self.name(v) {
            Some(n) => n.to_string(),
            None => v.to_string(),
        }
    }

    /// First vertex carrying display name `name`.
    pub fn vertex_named(&self, name: &str) -> Option<VertexId> {
        self.vertices().find(|&v| self.name(v) == Some(name))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for s in self.vertices() {
            if seen[s.index()] {
                continue;
            }
            seen[s.index()] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in self.neighbors(u) {
                    if !seen[w.index()] {
                        seen[w.index()] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// True for graphs with exactly one component. The empty graph is not
    /// connected.
    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// `|E| - |V| + c`, the dimension of the cycle space.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count + self.connected_components().len() - self.vertex_count()
    }

    /// Subgraph induced on `keep`, renumbered in the given order. Names are
    /// carried over.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Graph {
        let mut index = vec![None; self.vertex_count()];
        let mut h = Graph::new();
        for &v in keep {
            index[v.index()] = Some(h.add_vertex(self.names[v.index()].clone()));
        }
        for (u, w) in self.edges() {
            if let (Some(a), Some(b)) = (index[u.index()], index[w.index()]) {
                h.add_edge(a, b).expect("induced edge is valid");
            }
        }
        h
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.vertex_count() as u32;
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(other.names[v.index()].clone());
        }
        for (u, w) in other.edges() {
            g.add_edge(VertexId(u.0 + offset), VertexId(w.0 + offset)).expect("shifted edge is valid");
        }
        g
    }

    /// Two-coloring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.vertex_count()];
        for comp in self.connected_components() {
            let s = comp[0];
            side[s.index()] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u.index()].unwrap();
                for &w in self.neighbors(u) {
                    match side[w.index()] {
                        None => {
                            side[w.index()] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    /// Vertex sets as ordered sets, convenient for comparisons in tests.
    pub fn edge_set(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.edges().collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<[u32; 2]>,
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        let edges = g.edges().map(|(u, w)| [u.0, w.0]).collect();
        let vertices = g.names.into_iter().enumerate().map(|(i, name)| VertexJson { id: i as u32, name }).collect();
        GraphJson { vertices, edges }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(json: GraphJson) -> Result<Self, GraphError> {
        let n = json.vertices.len();
        let mut names: Vec<Option<Option<String>>> = vec![None; n];
        for v in json.vertices {
            let slot = names.get_mut(v.id as usize).ok_or(GraphError::SparseIds { expected: n, found: v.id })?;
            if slot.is_some() {
                return Err(GraphError::DuplicateVertex(VertexId(v.id)));
            }
            *slot = Some(v.name);
        }
        let mut g = Graph::with_vertices(n);
        g.names = names.into_iter().map(|n| n.unwrap()).collect();
        for [a, b] in json.edges {
            let (u, w) = (VertexId(a), VertexId(b));
            if a > b {
                return Err(GraphError::NonCanonicalEdge(u, w));
            }
            if !g.add_edge(u, w)? {
                return Err(GraphError::DuplicateEdge(u, w));
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> Graph {
        Graph::from_edges(
            8,
            [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)],
        )
        .unwrap()
    }

    #[test]
    fn add_vertex_counts() {
        let mut g = Graph::new();
        let a = g.add_vertex(None);
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        let b = g.add_vertex(Some("x".into()));
        assert_ne!(a, b);

        let mut c = cube();
        c.add_vertex(None);
        assert_eq!((c.vertex_count(), c.edge_count()), (9, 12));
    }

    #[test]
    fn add_edge_idempotent_and_rejects_loops() {
        let mut g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(g.add_edge(VertexId(0), VertexId(2)).unwrap());
        assert_eq!(g.edge_count(), 3);
        assert!(!g.add_edge(VertexId(2), VertexId(0)).unwrap());
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.add_edge(VertexId(1), VertexId(1)), Err(GraphError::Loop(VertexId(1))));
        assert_eq!(g.add_edge(VertexId(1), VertexId(7)), Err(GraphError::UnknownVertex(VertexId(7))));
    }

    #[test]
    fn neighbors_of_cube_corner() {
        let g = cube();
        assert_eq!(g.neighbors(VertexId(0)), &[VertexId(1), VertexId(3), VertexId(4)]);
        assert!(g.try_neighbors(VertexId(8)).is_err());
    }

    #[test]
    fn cycle_rank_examples() {
        let tree = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(tree.cycle_rank(), 0);
        assert_eq!(cube().cycle_rank(), 5);
        assert_eq!(Graph::new().cycle_rank(), 0);
    }

    #[test]
    fn components() {
        assert_eq!(cube().connected_components().len(), 1);
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(two.connected_components().len(), 2);
        assert!(!Graph::new().is_connected());
    }

    #[test]
    fn json_rejects_malformed() {
        let bad = [
            r#"{"vertices":[{"id":0},{"id":1}],"edges":[[1,0]]}"#,
            r#"{"vertices":[{"id":0},{"id":2}],"edges":[]}"#,
            r#"{"vertices":[{"id":0}],"edges":[[0,0]]}"#,
            r#"{"vertices":[{"id":0},{"id":1}],"edges":[[0,1],[0,1]]}"#,
            r#"{"vertices":[],"edges":[],"extra":1}"#,
            r#"{"vertices":[{"id":0,"label":"a"}],"edges":[]}"#,
        ];
        for s in bad {
            assert!(serde_json::from_str::<Graph>(s).is_err(), "{s}");
        }
        let g: Graph = serde_json::from_str(r#"{"vertices":[{"id":1,"name":"b"},{"id":0}],"edges":[[0,1]]}"#).unwrap();
        assert_eq!(g.name(VertexId(1)), Some("b"));
        assert!(g.has_edge(VertexId(1), VertexId(0)));
    }

    #[test]
    fn bipartition_of_cube_and_triangle() {
        assert!(cube().bipartition().is_some());
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(tri.bipartition().is_none());
    }
}
