//! Combinatorial embeddings (rotation systems), face tracing and planarity.
//!
//! Convention used everywhere in this crate: `rotation[v]` lists the
//! neighbors of `v` in clockwise order, and a face is traced by arriving at
//! `w` along `v -> w` and leaving along `w -> x`, where `x` is the neighbor
//! following `v` in `rotation[w]`. Face counts do not depend on the
//! convention; the identity of individual walks does.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::maps::GraphMap;
use crate::planarity::lr_planarity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("rotation has {found} entries, graph has {expected} vertices")]
    RotationLength { expected: usize, found: usize },
    #[error("rotation at vertex {0} is not a permutation of its neighbors")]
    NotAPermutation(VertexId),
    #[error("euler genus is defined for connected graphs only")]
    Disconnected,
    #[error("walk is not a face of this rotation system")]
    NotAFace,
    #[error("map domain differs from the embedded graph")]
    MapDomainMismatch,
}

/// A face as the cyclic sequence of vertices met along its boundary walk.
pub type Face = Vec<VertexId>;

/// Cyclic clockwise neighbor order at each vertex of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    graph: Graph,
    rotation: Vec<Vec<VertexId>>,
}

impl RotationSystem {
    pub fn new(graph: Graph, rotation: Vec<Vec<VertexId>>) -> Result<Self, EmbeddingError> {
        if rotation.len() != graph.vertex_count() {
            return Err(EmbeddingError::RotationLength { expected: graph.vertex_count(), found: rotation.len() });
        }
        for v in graph.vertices() {
            let mut sorted = rotation[v.index()].clone();
            sorted.sort_unstable();
            if sorted != graph.neighbors(v) {
                return Err(EmbeddingError::NotAPermutation(v));
            }
        }
        Ok(RotationSystem { graph, rotation })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.rotation[v.index()]
    }

    pub fn rotations(&self) -> &[Vec<VertexId>] {
        &self.rotation
    }

    /// The neighbor following `u` in the rotation at `v`.
    fn successor(&self, v: VertexId, u: VertexId) -> VertexId {
        let rot = &self.rotation[v.index()];
        let pos = rot.iter().position(|&x| x == u).expect("u is a neighbor of v");
        rot[(pos + 1) % rot.len()]
    }

    /// Boundary walks. Every directed edge lies on exactly one walk; walks
    /// start at their smallest dart in (tail, head) order, and are listed in
    /// that order. Isolated vertices contribute no walk.
    pub fn faces(&self) -> Vec<Face> {
        let mut dart_index: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        let mut darts = Vec::new();
        for v in self.graph.vertices() {
            for &w in self.graph.neighbors(v) {
                dart_index.insert((v, w), darts.len());
                darts.push((v, w));
            }
        }
        let mut used = vec![false; darts.len()];
        let mut faces = Vec::new();
        for start in 0..darts.len() {
            if used[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !used[d] {
                used[d] = true;
                let (v, w) = darts[d];
                face.push(v);
                let x = self.successor(w, v);
                d = dart_index[&(w, x)];
            }
            faces.push(face);
        }
        faces
    }

    /// `2 - V + E - F`, twice the orientable genus. Zero means spherical.
    pub fn euler_genus(&self) -> Result<usize, EmbeddingError> {
        if !self.graph.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        let v = self.graph.vertex_count() as i64;
        let e = self.graph.edge_count() as i64;
        // A single vertex still bounds one face.
        let f = self.faces().len().max(1) as i64;
        Ok((2 - v + e - f) as usize)
    }

    /// Faces when every component is drawn on one common sphere. Only
    /// meaningful when each component is embedded with genus zero.
    pub fn sphere_face_count(&self) -> usize {
        let with_edges = self.graph.connected_components().iter().filter(|c| c.len() > 1).count();
        if with_edges == 0 {
            return 1;
        }
        self.faces().len() + 1 - with_edges
    }

    /// Restriction to one connected component, renumbered in ascending order.
    pub fn component(&self, vertices: &[VertexId]) -> RotationSystem {
        let mut index = vec![None; self.graph.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v.index()] = Some(VertexId::from(i));
        }
        let graph = self.graph.induced_subgraph(vertices);
        let rotation = vertices
            .iter()
            .map(|&v| self.rotation[v.index()].iter().filter_map(|w| index[w.index()]).collect())
            .collect();
        RotationSystem { graph, rotation }
    }

    /// Whether `walk` is, up to cyclic shift, one of this system's faces.
    pub fn is_face(&self, walk: &[VertexId]) -> bool {
        if walk.is_empty() {
            return false;
        }
        self.faces().iter().any(|f| same_cycle(f, walk))
    }

    /// Images under `m` of the vertices on `face`.
    pub fn face_labels(&self, m: &GraphMap, face: &[VertexId]) -> Result<BTreeSet<VertexId>, EmbeddingError> {
        if m.domain() != &self.graph {
            return Err(EmbeddingError::MapDomainMismatch);
        }
        if !self.is_face(face) {
            return Err(EmbeddingError::NotAFace);
        }
        Ok(face.iter().map(|&v| m.image(v)).collect())
    }

    /// Whether the faces admit a 2-coloring in which faces sharing an edge
    /// differ. Returns the color of each face in [`RotationSystem::faces`]
    /// order.
    pub fn face_two_coloring(&self) -> Option<Vec<bool>> {
        let faces = self.faces();
        let mut dart_face = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for k in 0..f.len() {
                dart_face.insert((f[k], f[(k + 1) % f.len()]), i);
            }
        }
        let mut dual = Graph::with_vertices(faces.len());
        for (&(v, w), &i) in &dart_face {
            let j = dart_face[&(w, v)];
            if i == j {
                // an edge with the same face on both sides
                return None;
            }
            dual.add_edge(VertexId::from(i), VertexId::from(j)).unwrap();
        }
        dual.bipartition()
    }
}

fn same_cycle(a: &[VertexId], b: &[VertexId]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|s| (0..a.len()).all(|k| a[(s + k) % a.len()] == b[k]))
}

/// Outcome of [`test_planarity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarityResult {
    pub planar: bool,
    /// Present iff `planar`; every component is embedded with genus zero.
    pub embedding: Option<RotationSystem>,
}

/// Left-right planarity test. Deterministic for a given input graph.
pub fn test_planarity(g: &Graph) -> PlanarityResult {
    match lr_planarity(g) {
        None => PlanarityResult { planar: false, embedding: None },
        Some(rotation) => {
            let embedding = RotationSystem::new(g.clone(), rotation).expect("planarity test yields a rotation system");
            PlanarityResult { planar: true, embedding: Some(embedding) }
        }
    }
}

pub fn is_planar(g: &Graph) -> bool {
    lr_planarity(g).is_some()
}

/// JSON form: `{"graph": <graph>, "rotation": {"<vid>": [<neighbors>]}}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingJson {
    pub graph: Graph,
    pub rotation: std::collections::BTreeMap<String, Vec<VertexId>>,
}
