//! Named graphs, corner patches, apex insertion and the bundled emulator
//! assets.
//!
//! Cube labels: the 8-cycle `0-1-2-3-4-5-6-7` plus the chords `0-3`, `1-6`,
//! `2-5`, `4-7`. Odd labels form one side of the bipartition, so the apex of
//! `k45_minus_4k2` (named `v`) is joined to `1, 3, 5, 7`.
//!
//! Octahedron labels: `0..6` with antipodal pairs `(0,3)`, `(1,4)`, `(2,5)`;
//! every other pair is an edge. `k1222` adds an apex `v` joined to all six.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::{CoverError, Involution};
use crate::embedding::{test_planarity, EmbeddingError, Face, RotationSystem};
use crate::graph::{Graph, GraphError, VertexId};
use crate::maps::{Classification, GraphMap, LocalFailure, MapClass, MapError, NamedFailure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unknown construction {0:?}")]
    UnknownName(String),
    #[error("vertex {0} is not a cube vertex")]
    NotACubeVertex(VertexId),
    #[error("asset has no embedding")]
    MissingEmbedding,
    #[error("asset has no shaded faces")]
    NoShadedFaces,
    #[error("shaded face {0} is not a face of the embedding")]
    NotAFace(usize),
    #[error("shaded face {0} is listed twice")]
    DuplicateShadedFace(usize),
    #[error("shaded face {0} is not a closed walk in the graph")]
    NotAWalk(usize),
    #[error("shaded face {face} shows labels {found:?}, apex needs exactly {expected:?}")]
    ConditionA { face: usize, found: Vec<String>, expected: Vec<String> },
    #[error("vertex {0} lies on no shaded face")]
    ConditionB(VertexId),
    #[error("map codomain is not the expected target {0}")]
    TargetMismatch(String),
    #[error("apex {0} must be the last vertex of the target")]
    ApexNotLast(VertexId),
    #[error("map is not an emulator: {0}")]
    NotEmulator(LocalFailure),
    #[error("graph is not planar")]
    NotPlanar,
    #[error("embedding is not spherical")]
    NotSpherical,
    #[error("no gluing of corner patches satisfies the emulator conditions")]
    NoGluing,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Graphs that can be built by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedConstruction {
    Cube,
    Octahedron,
    K45Minus4K2,
    K1222,
    /// Base plus an apex named `v` joined to every base vertex.
    Cone(Box<NamedConstruction>),
}

impl FromStr for NamedConstruction {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("cone(").and_then(|r| r.strip_suffix(')')) {
            return Ok(NamedConstruction::Cone(Box::new(inner.parse()?)));
        }
        match s {
            "cube" => Ok(NamedConstruction::Cube),
            "octahedron" => Ok(NamedConstruction::Octahedron),
            "k45_minus_4k2" => Ok(NamedConstruction::K45Minus4K2),
            "k1222" => Ok(NamedConstruction::K1222),
            _ => Err(ConstructionError::UnknownName(s.to_string())),
        }
    }
}

impl fmt::Display for NamedConstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedConstruction::Cube => f.write_str("cube"),
            NamedConstruction::Octahedron => f.write_str("octahedron"),
            NamedConstruction::K45Minus4K2 => f.write_str("k45_minus_4k2"),
            NamedConstruction::K1222 => f.write_str("k1222"),
            NamedConstruction::Cone(b) => write!(f, "cone({b})"),
        }
    }
}

const CUBE_EDGES: [(usize, usize); 12] =
    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (0, 7), (0, 3), (1, 6), (2, 5), (4, 7)];

/// The four octahedron faces of one color class. Each pair shares exactly
/// one label.
pub const GREAT_CIRCLE_TRIANGLES: [[u32; 3]; 4] = [[0, 1, 2], [2, 3, 4], [1, 3, 5], [0, 4, 5]];

fn named(n: usize) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(Some(i.to_string()));
    }
    g
}

fn cone(base: &Graph) -> Graph {
    let mut g = base.clone();
    let apex = g.add_vertex(Some("v".into()));
    for v in base.vertices() {
        g.add_edge(apex, v).unwrap();
    }
    g
}

pub fn build(name: &NamedConstruction) -> Graph {
    match name {
        NamedConstruction::Cube => {
            let mut g = named(8);
            for (u, w) in CUBE_EDGES {
                g.add_edge(u.into(), w.into()).unwrap();
            }
            g
        }
        NamedConstruction::Octahedron => {
            let mut g = named(6);
            for u in 0..6usize {
                for w in u + 1..6 {
                    if w != u + 3 {
                        g.add_edge(u.into(), w.into()).unwrap();
                    }
                }
            }
            g
        }
        NamedConstruction::K45Minus4K2 => {
            let mut g = build(&NamedConstruction::Cube);
            let apex = g.add_vertex(Some("v".into()));
            for odd in [1usize, 3, 5, 7] {
                g.add_edge(apex, odd.into()).unwrap();
            }
            g
        }
        NamedConstruction::K1222 => cone(&build(&NamedConstruction::Octahedron)),
        NamedConstruction::Cone(base) => cone(&build(base)),
    }
}

/// Builds a construction from its textual name.
pub fn build_named(name: &str) -> Result<Graph, ConstructionError> {
    Ok(build(&name.parse()?))
}

/// The antipodal pairing of the octahedron, read off the great-circle
/// triangles: the partner of `x` is the one label missing from every listed
/// triangle through `x`.
pub fn octahedron_antipodes() -> Involution {
    let oct = build(&NamedConstruction::Octahedron);
    let pairing = (0..6u32)
        .map(|x| {
            let seen: BTreeSet<u32> =
                GREAT_CIRCLE_TRIANGLES.iter().filter(|t| t.contains(&x)).flatten().copied().collect();
            let missing: Vec<u32> = (0..6).filter(|y| !seen.contains(y)).collect();
            assert_eq!(missing.len(), 1, "great-circle triangles determine antipodes");
            VertexId(missing[0])
        })
        .collect();
    Involution::new(&oct, pairing).expect("antipodal pairing is a free involution")
}

/// Whether the octahedron's faces 2-color so that one color class is exactly
/// the great-circle triangles.
pub fn face_two_coloring_check() -> bool {
    let oct = build(&NamedConstruction::Octahedron);
    let emb = test_planarity(&oct).embedding.expect("octahedron is planar");
    let Some(colors) = emb.face_two_coloring() else {
        return false;
    };
    let faces = emb.faces();
    let target: BTreeSet<BTreeSet<u32>> = GREAT_CIRCLE_TRIANGLES.iter().map(|t| t.iter().copied().collect()).collect();
    [false, true].iter().any(|&c| {
        let class: BTreeSet<BTreeSet<u32>> =
            faces.iter().zip(&colors).filter(|(_, &k)| k == c).map(|(f, _)| f.iter().map(|v| v.0).collect()).collect();
        class == target
    })
}

/// The three cube squares at `corner`, as a 7-vertex patch mapped to the
/// cube.
///
/// Patch vertex 0 is the corner; vertices 1..=6 run around the hexagonal
/// boundary alternating cube-neighbors of the corner and the far corners of
/// the incident squares.
pub fn corner_patch(corner: VertexId) -> Result<(Graph, GraphMap), ConstructionError> {
    let cube = build(&NamedConstruction::Cube);
    if !cube.contains(corner) {
        return Err(ConstructionError::NotACubeVertex(corner));
    }
    let ring = patch_ring(&cube, corner);
    let mut patch = Graph::new();
    let mut assignment = Vec::new();
    for &label in std::iter::once(&corner).chain(&ring) {
        patch.add_vertex(cube.name(label).map(str::to_owned));
        assignment.push(label);
    }
    for k in 0..6usize {
        if k % 2 == 0 {
            patch.add_edge(VertexId(0), VertexId::from(k + 1)).unwrap();
        }
        patch.add_edge(VertexId::from(k + 1), VertexId::from((k + 1) % 6 + 1)).unwrap();
    }
    let map = GraphMap::new(patch.clone(), cube, assignment)?;
    Ok((patch, map))
}

/// Cube labels around the hexagon of the patch at `corner`:
/// `n1, d12, n2, d23, n3, d31`.
fn patch_ring(cube: &Graph, corner: VertexId) -> Vec<VertexId> {
    let nbrs = cube.neighbors(corner);
    let far = |a: VertexId, b: VertexId| -> VertexId {
        *cube
            .neighbors(a)
            .iter()
            .find(|&&x| x != corner && cube.has_edge(x, b))
            .expect("two neighbors of a cube corner share one other neighbor")
    };
    let mut ring = Vec::with_capacity(6);
    for i in 0..3 {
        let (a, b) = (nbrs[i], nbrs[(i + 1) % 3]);
        ring.push(a);
        ring.push(far(a, b));
    }
    ring
}

/// Metadata carried by asset files.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssetMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_vertices: Option<usize>,
    /// Construction name of the map's codomain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Display name of the apex vertex whose copies sit in shaded faces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex: Option<String>,
    /// For assets without apex copies: the construction the apex belongs to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub insertion_target: Option<String>,
}

/// A graph with an emulator map and optional embedding data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureAsset {
    pub graph: Graph,
    pub map: GraphMap,
    pub embedding: Option<RotationSystem>,
    pub shaded_faces: Vec<Face>,
    pub involution: Option<Involution>,
    pub meta: AssetMeta,
}

/// Adds one apex copy inside each shaded face of `base`.
///
/// `base.map` must target `target` with `apex` removed, and `apex` must be
/// the last vertex of `target`. Every shaded face must show exactly the
/// apex's target neighborhood, and every vertex must lie on a shaded face.
/// New vertices are appended, one per shaded face in order, and joined to
/// each distinct vertex on the face boundary. When the base carries an
/// involution that permutes the shaded faces, it is extended to the copies.
pub fn apex_insertion(base: &FigureAsset, target: &Graph, apex: VertexId) -> Result<FigureAsset, ConstructionError> {
    if apex.index() + 1 != target.vertex_count() {
        return Err(ConstructionError::ApexNotLast(apex));
    }
    let codomain = base.map.codomain();
    let target_base = target.induced_subgraph(&target.vertices().filter(|&v| v != apex).collect::<Vec<_>>());
    if codomain.vertex_count() != target_base.vertex_count() || codomain.edge_set() != target_base.edge_set() {
        return Err(ConstructionError::TargetMismatch(base.meta.insertion_target.clone().unwrap_or_default()));
    }
    if let Err(f) = base.map.verify_emulator()? {
        return Err(ConstructionError::NotEmulator(f));
    }
    let embedding = base.embedding.as_ref().ok_or(ConstructionError::MissingEmbedding)?;
    if base.shaded_faces.is_empty() {
        return Err(ConstructionError::NoShadedFaces);
    }
    let faces = embedding.faces();
    for (i, face) in base.shaded_faces.iter().enumerate() {
        if !faces.iter().any(|f| same_cycle(f, face)) {
            return Err(ConstructionError::NotAFace(i));
        }
        if base.shaded_faces[..i].iter().any(|f| same_cycle(f, face)) {
            return Err(ConstructionError::DuplicateShadedFace(i));
        }
    }
    let required: BTreeSet<VertexId> = target.neighbors(apex).iter().copied().collect();
    check_conditions(&base.graph, &base.map, target, &required, &base.shaded_faces, |_| true)?;

    let mut graph = base.graph.clone();
    let mut assignment = base.map.assignment().to_vec();
    let mut rotation = embedding.rotations().to_vec();
    let mut copies = Vec::new();
    for face in &base.shaded_faces {
        let a = graph.add_vertex(target.name(apex).map(str::to_owned));
        assignment.push(apex);
        copies.push(a);
        let simple = face.iter().collect::<BTreeSet<_>>().len() == face.len();
        for &v in face {
            graph.add_edge(a, v)?;
        }
        if simple {
            // face corner at face[k] sits between face[k-1] and face[k+1]
            let k_len = face.len();
            for k in 0..k_len {
                let v = face[k];
                let prev = face[(k + k_len - 1) % k_len];
                let rot = &mut rotation[v.index()];
                let pos = rot.iter().position(|&x| x == prev).unwrap();
                rot.insert(pos + 1, a);
            }
            rotation.push(face.iter().rev().copied().collect());
        } else {
            rotation.clear();
        }
    }
    let embedding =
        if rotation.len() == graph.vertex_count() { Some(RotationSystem::new(graph.clone(), rotation)?) } else { None };
    let map = GraphMap::new(graph.clone(), target.clone(), assignment)?;
    if let Err(f) = map.verify_emulator()? {
        return Err(ConstructionError::NotEmulator(f));
    }

    let involution = base.involution.as_ref().and_then(|inv| {
        // the partner of a face is the shaded face traced by the partners of
        // its boundary, in either direction
        let mut pairing = inv.pairing().to_vec();
        for face in &base.shaded_faces {
            let image: Vec<VertexId> = face.iter().map(|&v| inv.partner(v)).collect();
            let reversed: Vec<VertexId> = image.iter().rev().copied().collect();
            let j = base.shaded_faces.iter().position(|f| same_cycle(f, &image) || same_cycle(f, &reversed))?;
            pairing.push(copies[j]);
        }
        Involution::new(&graph, pairing).ok()
    });

    Ok(FigureAsset {
        graph,
        map,
        embedding,
        shaded_faces: base.shaded_faces.clone(),
        involution,
        meta: AssetMeta {
            expected_vertices: None,
            target: base.meta.insertion_target.clone(),
            apex: target.name(apex).map(str::to_owned),
            insertion_target: None,
        },
    })
}

fn same_cycle(a: &[VertexId], b: &[VertexId]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|s| (0..a.len()).all(|k| a[(s + k) % a.len()] == b[k]))
}

/// Checks both shaded-face conditions. `needs_face` selects the vertices
/// that must lie on a shaded face.
fn check_conditions(
    graph: &Graph,
    map: &GraphMap,
    label_graph: &Graph,
    required: &BTreeSet<VertexId>,
    shaded: &[Face],
    needs_face: impl Fn(VertexId) -> bool,
) -> Result<(), ConstructionError> {
    let mut on_face = vec![false; graph.vertex_count()];
    for (i, face) in shaded.iter().enumerate() {
        let closed = !face.is_empty()
            && face.iter().all(|&v| graph.contains(v))
            && (face.len() < 2 || (0..face.len()).all(|k| graph.has_edge(face[k], face[(k + 1) % face.len()])));
        if !closed {
            return Err(ConstructionError::NotAWalk(i));
        }
        let labels: BTreeSet<VertexId> = face.iter().map(|&v| map.image(v)).collect();
        if &labels != required {
            let names = |s: &BTreeSet<VertexId>| s.iter().map(|&v| label_graph.label(v)).collect();
            return Err(ConstructionError::ConditionA { face: i, found: names(&labels), expected: names(required) });
        }
        for &v in face {
            on_face[v.index()] = true;
        }
    }
    if let Some(v) = graph.vertices().find(|&v| needs_face(v) && !on_face[v.index()]) {
        return Err(ConstructionError::ConditionB(v));
    }
    Ok(())
}

/// Summary produced by [`verify_asset`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssetReport {
    pub vertices: usize,
    pub edges: usize,
    pub planar: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub classification: MapClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<NamedFailure>,
    /// Preimage sizes keyed by target display name.
    pub fiber_sizes: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_vertices: Option<usize>,
    pub shaded_faces: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution_valid: Option<bool>,
    pub warnings: Vec<String>,
}

/// Re-verifies an asset from scratch: emulator condition, planarity,
/// embedding genus, shaded-face conditions and involution. A vertex count
/// that differs from `meta.expected_vertices` is a warning only.
pub fn verify_asset(asset: &FigureAsset) -> Result<AssetReport, ConstructionError> {
    let map = &asset.map;
    if map.domain() != &asset.graph {
        return Err(MapError::ComposeMismatch.into());
    }
    if let Some(t) = &asset.meta.target {
        let expected = build_named(t)?;
        if map.codomain() != &expected {
            return Err(ConstructionError::TargetMismatch(t.clone()));
        }
    }

    let Classification { class, witness } = map.classify();
    match class {
        MapClass::Cover | MapClass::ProperEmulator => {}
        MapClass::HomomorphismOnly => return Err(ConstructionError::NotEmulator(witness.unwrap())),
        MapClass::Invalid => return Err(MapError::NotHomomorphism(witness.unwrap()).into()),
    }

    if !test_planarity(&asset.graph).planar {
        return Err(ConstructionError::NotPlanar);
    }
    if let Some(emb) = &asset.embedding {
        if emb.graph() != &asset.graph {
            return Err(EmbeddingError::MapDomainMismatch.into());
        }
        for comp in asset.graph.connected_components() {
            if emb.component(&comp).euler_genus()? != 0 {
                return Err(ConstructionError::NotSpherical);
            }
        }
    }

    if !asset.shaded_faces.is_empty() {
        let apex_name = asset.meta.apex.as_deref().unwrap_or("v");
        let codomain = map.codomain();
        if let Some(apex) = codomain.vertex_named(apex_name) {
            // apex copies already present
            let required = codomain.neighbors(apex).iter().copied().collect();
            check_conditions(&asset.graph, map, codomain, &required, &asset.shaded_faces, |v| map.image(v) != apex)?;
        } else {
            let full = build_named(asset.meta.insertion_target.as_deref().unwrap_or("k1222"))?;
            let apex = full.vertex_named(apex_name).ok_or(ConstructionError::TargetMismatch(apex_name.into()))?;
            let required = full.neighbors(apex).iter().copied().collect();
            let emb = asset.embedding.as_ref().ok_or(ConstructionError::MissingEmbedding)?;
            let faces = emb.faces();
            for (i, face) in asset.shaded_faces.iter().enumerate() {
                if !faces.iter().any(|f| same_cycle(f, face)) {
                    return Err(ConstructionError::NotAFace(i));
                }
            }
            check_conditions(&asset.graph, map, &full, &required, &asset.shaded_faces, |_| true)?;
        }
    }

    let involution_valid = match &asset.involution {
        None => None,
        Some(inv) => {
            Involution::new(&asset.graph, inv.pairing().to_vec())?;
            if let Some(v) = asset.graph.vertices().find(|&v| map.image(v) != map.image(inv.partner(v))) {
                return Err(CoverError::MapNotInvariant(v).into());
            }
            Some(true)
        }
    };

    let mut warnings = Vec::new();
    if let Some(expected) = asset.meta.expected_vertices {
        if expected != asset.graph.vertex_count() {
            warnings.push(format!("vertex count {} differs from expected {}", asset.graph.vertex_count(), expected));
        }
    }

    let fiber_sizes =
        map.fiber_sizes().into_iter().enumerate().map(|(i, s)| (map.codomain().label(VertexId::from(i)), s)).collect();

    Ok(AssetReport {
        vertices: asset.graph.vertex_count(),
        edges: asset.graph.edge_count(),
        planar: true,
        target: asset.meta.target.clone(),
        classification: class,
        witness: witness.map(|w| w.named(map)),
        fiber_sizes,
        expected_vertices: asset.meta.expected_vertices,
        shaded_faces: asset.shaded_faces.len(),
        involution_valid,
        warnings,
    })
}

/// One corner patch placed on a frame triangle: its center label and the
/// cube labels given to the triangle's three frame corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Placement {
    center: VertexId,
    corners: [VertexId; 3],
}

/// The cuboctahedral frame, read off a cube: triangles are cube vertices,
/// frame corners are cube edges, squares are cube faces.
struct Frame {
    /// For each triangle, its three frame corners (edge indices).
    corners: Vec<[usize; 3]>,
    /// For each triangle and each side `(k, k+1)`, the square it borders.
    side_square: Vec<[usize; 3]>,
    squares: usize,
    edges: Vec<(VertexId, VertexId)>,
}

fn cube_frame() -> Frame {
    let cube = build(&NamedConstruction::Cube);
    let edges: Vec<(VertexId, VertexId)> = cube.edges().collect();
    let edge_index = |a: VertexId, b: VertexId| edges.iter().position(|&e| e == (a.min(b), a.max(b))).unwrap();
    // squares: 4-cycles a-b-c-d, stored as vertex sets
    let mut squares: Vec<BTreeSet<VertexId>> = Vec::new();
    for a in cube.vertices() {
        for &b in cube.neighbors(a) {
            for &d in cube.neighbors(a) {
                if b >= d {
                    continue;
                }
                for &c in cube.neighbors(b) {
                    if c != a && cube.has_edge(c, d) {
                        let s: BTreeSet<VertexId> = [a, b, c, d].into_iter().collect();
                        if !squares.contains(&s) {
                            squares.push(s);
                        }
                    }
                }
            }
        }
    }
    squares.sort();
    let mut corners = Vec::new();
    let mut side_square = Vec::new();
    for t in cube.vertices() {
        let n = cube.neighbors(t);
        corners.push([edge_index(t, n[0]), edge_index(t, n[1]), edge_index(t, n[2])]);
        let mut sides = [0; 3];
        for k in 0..3 {
            let (a, b) = (n[k], n[(k + 1) % 3]);
            sides[k] = squares.iter().position(|s| s.contains(&t) && s.contains(&a) && s.contains(&b)).unwrap();
        }
        side_square.push(sides);
    }
    Frame { corners, side_square, squares: squares.len(), edges }
}

fn permutations3(items: [VertexId; 3]) -> [[VertexId; 3]; 6] {
    let [a, b, c] = items;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

/// Backtracking search for a gluing of eight even-centered corner patches.
///
/// Constraints: the two patches at a frame corner agree on its label and
/// have different centers (so the corner sees all three cube neighbors),
/// and the four side vertices around each square carry four different odd
/// labels (so the apex copy in that square sees `1, 3, 5, 7`).
fn glue_corner_patches(cube: &Graph, frame: &Frame) -> Option<Vec<Placement>> {
    struct State<'a> {
        cube: &'a Graph,
        frame: &'a Frame,
        corner_label: Vec<Option<VertexId>>,
        corner_center: Vec<Option<VertexId>>,
        square_odds: Vec<Vec<VertexId>>,
        out: Vec<Placement>,
    }

    fn side_label(cube: &Graph, center: VertexId, a: VertexId, b: VertexId) -> VertexId {
        *cube.neighbors(center).iter().find(|&&n| cube.has_edge(n, a) && cube.has_edge(n, b)).unwrap()
    }

    fn rec(st: &mut State, t: usize) -> bool {
        if t == st.frame.corners.len() {
            return true;
        }
        let corners = st.frame.corners[t];
        for center in [0u32, 2, 4, 6].map(VertexId) {
            let diag: Vec<VertexId> = st
                .cube
                .vertices()
                .filter(|&x| x != center && !st.cube.has_edge(x, center))
                .filter(|&x| st.cube.neighbors(x).iter().any(|&y| st.cube.has_edge(y, center)))
                .collect();
            for labels in permutations3([diag[0], diag[1], diag[2]]) {
                let clash = (0..3).any(|k| {
                    let c = corners[k];
                    st.corner_label[c].is_some_and(|l| l != labels[k]) || st.corner_center[c] == Some(center)
                });
                if clash {
                    continue;
                }
                let sides: Vec<(usize, VertexId)> = (0..3)
                    .map(|k| {
                        let s = st.frame.side_square[t][k];
                        (s, side_label(st.cube, center, labels[k], labels[(k + 1) % 3]))
                    })
                    .collect();
                if sides.iter().any(|(s, odd)| st.square_odds[*s].contains(odd)) {
                    continue;
                }
                let fresh: Vec<usize> = (0..3).filter(|&k| st.corner_label[corners[k]].is_none()).collect();
                for &k in &fresh {
                    st.corner_label[corners[k]] = Some(labels[k]);
                    st.corner_center[corners[k]] = Some(center);
                }
                for &(s, odd) in &sides {
                    st.square_odds[s].push(odd);
                }
                st.out.push(Placement { center, corners: labels });
                if rec(st, t + 1) {
                    return true;
                }
                st.out.pop();
                for &(s, _) in &sides {
                    st.square_odds[s].pop();
                }
                for &k in &fresh {
                    st.corner_label[corners[k]] = None;
                    st.corner_center[corners[k]] = None;
                }
            }
        }
        false
    }

    let mut st = State {
        cube,
        frame,
        corner_label: vec![None; frame.edges.len()],
        corner_center: vec![None; frame.edges.len()],
        square_odds: vec![Vec::new(); frame.squares],
        out: Vec::new(),
    };
    rec(&mut st, 0).then_some(st.out)
}

/// Planar emulator of `k45_minus_4k2` from eight corner patches glued in
/// the cuboctahedral pattern, with an apex copy in each of the six square
/// regions.
///
/// Vertex order: the 12 shared frame corners sorted by label and then by
/// the centers of their two patches, then per patch its center and
/// three side vertices, then the six apex copies.
pub fn figure2_asset() -> Result<FigureAsset, ConstructionError> {
    let cube = build(&NamedConstruction::Cube);
    let target = build(&NamedConstruction::K45Minus4K2);
    let apex_label = target.vertex_named("v").unwrap();
    let frame = cube_frame();
    let placements = glue_corner_patches(&cube, &frame).ok_or(ConstructionError::NoGluing)?;

    let mut graph = Graph::new();
    let mut assignment = Vec::new();
    let mut corner_vertex = vec![None; frame.edges.len()];
    // each frame corner: (label, centers of the two patches meeting there)
    let mut corner_keys: Vec<(VertexId, Vec<VertexId>)> = vec![(VertexId(0), Vec::new()); frame.edges.len()];
    for (t, p) in placements.iter().enumerate() {
        for k in 0..3 {
            let key = &mut corner_keys[frame.corners[t][k]];
            key.0 = p.corners[k];
            key.1.push(p.center);
            key.1.sort();
        }
    }
    let mut order: Vec<usize> = (0..frame.edges.len()).collect();
    order.sort_by(|&a, &b| corner_keys[a].cmp(&corner_keys[b]).then(a.cmp(&b)));
    for i in order {
        let label = corner_keys[i].0;
        corner_vertex[i] = Some(graph.add_vertex(cube.name(label).map(str::to_owned)));
        assignment.push(label);
    }

    let mut square_sides: Vec<Vec<VertexId>> = vec![Vec::new(); frame.squares];
    for (t, p) in placements.iter().enumerate() {
        // the patch for this center, with its ring matched to the frame
        let (patch, patch_map) = corner_patch(p.center)?;
        let ring: Vec<VertexId> = (1..=6).map(|i| patch_map.image(VertexId(i))).collect();
        let center = graph.add_vertex(cube.name(p.center).map(str::to_owned));
        assignment.push(p.center);
        debug_assert_eq!(patch.degree(VertexId(0)), 3);
        for k in 0..3 {
            let (a, b) = (p.corners[k], p.corners[(k + 1) % 3]);
            // the ring neighbor shared by the diagonals a and b
            let pos_a = ring.iter().position(|&x| x == a).unwrap();
            let pos_b = ring.iter().position(|&x| x == b).unwrap();
            let mid = if (pos_a + 2) % 6 == pos_b { (pos_a + 1) % 6 } else { (pos_b + 1) % 6 };
            let label = ring[mid];
            let side = graph.add_vertex(cube.name(label).map(str::to_owned));
            assignment.push(label);
            graph.add_edge(center, side)?;
            graph.add_edge(side, corner_vertex[frame.corners[t][k]].unwrap())?;
            graph.add_edge(side, corner_vertex[frame.corners[t][(k + 1) % 3]].unwrap())?;
            square_sides[frame.side_square[t][k]].push(side);
        }
    }
    for sides in &square_sides {
        let a = graph.add_vertex(Some("v".into()));
        assignment.push(apex_label);
        for &s in sides {
            graph.add_edge(a, s)?;
        }
    }

    let map = GraphMap::new(graph.clone(), target, assignment)?;
    let embedding = test_planarity(&graph).embedding.ok_or(ConstructionError::NotPlanar)?;
    Ok(FigureAsset {
        graph,
        map,
        embedding: Some(embedding),
        shaded_faces: Vec::new(),
        involution: None,
        meta: AssetMeta {
            expected_vertices: Some(50),
            target: Some("k45_minus_4k2".into()),
            apex: None,
            insertion_target: None,
        },
    })
}

/// Points of the cuboctahedron: permutations of `(±1, ±1, 0)`.
fn cuboctahedron_points() -> Vec<[i32; 3]> {
    let mut pts = Vec::new();
    for zero in 0..3 {
        for s in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
            let mut p = [0; 3];
            let others: Vec<usize> = (0..3).filter(|&i| i != zero).collect();
            p[others[0]] = s[0];
            p[others[1]] = s[1];
            pts.push(p);
        }
    }
    pts.sort();
    pts
}

fn dot(a: [i32; 3], b: [i32; 3]) -> i32 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Octahedron emulator drawn on four great circles, ready for apex
/// insertion.
///
/// The circles are the planes normal to the cube diagonals, meeting in the
/// 12 cuboctahedron points. Circle `i` carries the labels of
/// `GREAT_CIRCLE_TRIANGLES[i]`: a crossing is labeled by the one label its
/// two circles share, and each arc between crossings is subdivided once by
/// a vertex with the circle's third label. Inside each triangular region the
/// three subdivision vertices are joined into a triangle. The six square
/// regions are octagonal faces showing all six labels; they are the shaded
/// faces. The antipodal map is a label-preserving free involution.
///
/// Vertex order: 12 crossings by coordinates, then 24 subdivision vertices
/// by arc.
pub fn figure3_base() -> Result<FigureAsset, ConstructionError> {
    const NORMALS: [[i32; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];
    let oct = build(&NamedConstruction::Octahedron);
    let pts = cuboctahedron_points();
    let circles_of = |p: [i32; 3]| -> Vec<usize> { (0..4).filter(|&i| dot(NORMALS[i], p) == 0).collect() };
    let triple = |i: usize| -> BTreeSet<u32> { GREAT_CIRCLE_TRIANGLES[i].iter().copied().collect() };

    let mut graph = Graph::new();
    let mut assignment = Vec::new();
    for &p in &pts {
        let c = circles_of(p);
        let label = *triple(c[0]).intersection(&triple(c[1])).next().unwrap();
        graph.add_vertex(Some(label.to_string()));
        assignment.push(VertexId(label));
    }
    let mut arc_vertex = BTreeMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if dot(pts[i], pts[j]) != 1 {
                continue;
            }
            let circle = *circles_of(pts[i]).iter().find(|c| circles_of(pts[j]).contains(c)).unwrap();
            let mut third = triple(circle);
            third.remove(&assignment[i].0);
            third.remove(&assignment[j].0);
            let label = *third.iter().next().unwrap();
            let m = graph.add_vertex(Some(label.to_string()));
            assignment.push(VertexId(label));
            graph.add_edge(VertexId::from(i), m)?;
            graph.add_edge(m, VertexId::from(j))?;
            arc_vertex.insert((i, j), m);
        }
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if dot(pts[i], pts[j]) == 1 && dot(pts[j], pts[k]) == 1 && dot(pts[i], pts[k]) == 1 {
                    let (a, b, c) = (arc_vertex[&(i, j)], arc_vertex[&(j, k)], arc_vertex[&(i, k)]);
                    graph.add_edge(a, b)?;
                    graph.add_edge(b, c)?;
                    graph.add_edge(a, c)?;
                }
            }
        }
    }

    let index_of = |p: [i32; 3]| pts.iter().position(|&q| q == p).unwrap();
    let mut pairing = vec![VertexId(0); graph.vertex_count()];
    for (i, &p) in pts.iter().enumerate() {
        pairing[i] = VertexId::from(index_of([-p[0], -p[1], -p[2]]));
    }
    for (&(i, j), &m) in &arc_vertex {
        let (a, b) = (pairing[i].index(), pairing[j].index());
        pairing[m.index()] = arc_vertex[&(a.min(b), a.max(b))];
    }
    let involution = Involution::new(&graph, pairing)?;

    let map = GraphMap::new(graph.clone(), oct, assignment)?;
    let embedding = test_planarity(&graph).embedding.ok_or(ConstructionError::NotPlanar)?;
    let shaded_faces: Vec<Face> = embedding
        .faces()
        .into_iter()
        .filter(|f| f.iter().map(|&v| map.image(v)).collect::<BTreeSet<_>>().len() == 6)
        .collect();

    Ok(FigureAsset {
        graph,
        map,
        embedding: Some(embedding),
        shaded_faces,
        involution: Some(involution),
        meta: AssetMeta {
            expected_vertices: None,
            target: Some("octahedron".into()),
            apex: Some("v".into()),
            insertion_target: Some("k1222".into()),
        },
    })
}

/// Planar emulator of `k1222`: [`figure3_base`] with an apex copy in each
/// shaded face.
pub fn figure3_asset() -> Result<FigureAsset, ConstructionError> {
    let base = figure3_base()?;
    let target = build(&NamedConstruction::K1222);
    let apex = target.vertex_named("v").unwrap();
    let mut asset = apex_insertion(&base, &target, apex)?;
    asset.meta.expected_vertices = Some(266);
    Ok(asset)
}
