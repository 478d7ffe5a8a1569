//! File formats: maps, embeddings, involutions, figure assets, and DOT /
//! GraphML export.
//!
//! A graph reference is either an inline graph object, `"builtin:<name>"`
//! for a named construction, or a path resolved relative to the file that
//! mentions it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{build_named, AssetMeta, ConstructionError, FigureAsset};
use crate::covers::{CoverError, Involution};
use crate::embedding::{EmbeddingError, EmbeddingJson, RotationSystem};
use crate::graph::{Graph, VertexId};
use crate::maps::{GraphMap, MapError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad key {0:?}: expected a vertex id")]
    BadKey(String),
    #[error("map file needs a domain")]
    MissingDomain,
    #[error("asset map domain differs from the asset graph")]
    DomainMismatch,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|e| FormatError::Io { path: path.to_path_buf(), message: e.to_string() })
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Inline(Graph),
    Reference(String),
}

impl GraphRef {
    pub fn resolve(&self, base: &Path) -> Result<Graph, FormatError> {
        match self {
            GraphRef::Inline(g) => Ok(g.clone()),
            GraphRef::Reference(r) => match r.strip_prefix("builtin:") {
                Some(name) => Ok(build_named(name)?),
                None => load_graph(&base.join(r)),
            },
        }
    }
}

/// Reads a graph file, or builds `builtin:<name>`.
pub fn load_graph(path: &Path) -> Result<Graph, FormatError> {
    if let Some(name) = path.to_str().and_then(|s| s.strip_prefix("builtin:")) {
        return Ok(build_named(name)?);
    }
    Ok(serde_json::from_str(&read_file(path)?)?)
}

fn parse_key(key: &str) -> Result<VertexId, FormatError> {
    key.parse().map(VertexId).map_err(|_| FormatError::BadKey(key.to_string()))
}

/// JSON map: `{"domain", "codomain", "assignment": {"<id>": <id>}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<GraphRef>,
    pub codomain: GraphRef,
    pub assignment: BTreeMap<String, VertexId>,
}

impl MapFile {
    /// Inline domain and codomain.
    pub fn from_map(m: &GraphMap) -> Self {
        MapFile {
            domain: Some(GraphRef::Inline(m.domain().clone())),
            codomain: GraphRef::Inline(m.codomain().clone()),
            assignment: assignment_json(m),
        }
    }

    /// Resolves references; `default_domain` stands in for a missing domain.
    pub fn resolve(&self, base: &Path, default_domain: Option<&Graph>) -> Result<GraphMap, FormatError> {
        let domain = match (&self.domain, default_domain) {
            (Some(d), _) => d.resolve(base)?,
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(FormatError::MissingDomain),
        };
        let codomain = self.codomain.resolve(base)?;
        let mut assignment = vec![None; domain.vertex_count()];
        for (k, &t) in &self.assignment {
            let v = parse_key(k)?;
            if !domain.contains(v) {
                return Err(MapError::UnknownDomainVertex(v).into());
            }
            assignment[v.index()] = Some(t);
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or(MapError::Unassigned(VertexId::from(i))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GraphMap::new(domain, codomain, assignment)?)
    }
}

fn assignment_json(m: &GraphMap) -> BTreeMap<String, VertexId> {
    m.assignment().iter().enumerate().map(|(i, &t)| (i.to_string(), t)).collect()
}

pub fn load_map(path: &Path) -> Result<GraphMap, FormatError> {
    let file: MapFile = serde_json::from_str(&read_file(path)?)?;
    file.resolve(&base_dir(path), None)
}

fn rotation_from_json(graph: Graph, rotation: &BTreeMap<String, Vec<VertexId>>) -> Result<RotationSystem, FormatError> {
    let mut rot = vec![Vec::new(); graph.vertex_count()];
    for (k, r) in rotation {
        let v = parse_key(k)?;
        if !graph.contains(v) {
            return Err(FormatError::BadKey(k.clone()));
        }
        rot[v.index()] = r.clone();
    }
    Ok(RotationSystem::new(graph, rot)?)
}

fn rotation_to_json(emb: &RotationSystem) -> BTreeMap<String, Vec<VertexId>> {
    emb.rotations().iter().enumerate().map(|(i, r)| (i.to_string(), r.clone())).collect()
}

pub fn embedding_to_json(emb: &RotationSystem) -> EmbeddingJson {
    EmbeddingJson { graph: emb.graph().clone(), rotation: rotation_to_json(emb) }
}

pub fn embedding_from_json(json: EmbeddingJson) -> Result<RotationSystem, FormatError> {
    rotation_from_json(json.graph, &json.rotation)
}

/// JSON involution: `{"pairing": {"<v>": <w>}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvolutionFile {
    pub pairing: BTreeMap<String, VertexId>,
}

impl InvolutionFile {
    pub fn from_involution(inv: &Involution) -> Self {
        InvolutionFile { pairing: inv.to_map() }
    }

    pub fn resolve(&self, g: &Graph) -> Result<Involution, FormatError> {
        Ok(Involution::from_map(g, &self.pairing)?)
    }
}

pub fn load_involution(path: &Path, g: &Graph) -> Result<Involution, FormatError> {
    let file: InvolutionFile = serde_json::from_str(&read_file(path)?)?;
    file.resolve(g)
}

/// Asset file. The map's domain defaults to `graph`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssetFile {
    pub graph: Graph,
    pub map: MapFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<BTreeMap<String, Vec<VertexId>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shaded_faces: Vec<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<InvolutionFile>,
    #[serde(default)]
    pub meta: AssetMeta,
}

impl AssetFile {
    /// Serializable form. The codomain is written as a builtin reference
    /// when the asset names its target.
    pub fn from_asset(a: &FigureAsset) -> Self {
        let codomain = match &a.meta.target {
            Some(t) if build_named(t).ok().as_ref() == Some(a.map.codomain()) => {
                GraphRef::Reference(format!("builtin:{t}"))
            }
            _ => GraphRef::Inline(a.map.codomain().clone()),
        };
        AssetFile {
            graph: a.graph.clone(),
            map: MapFile { domain: None, codomain, assignment: assignment_json(&a.map) },
            embedding: a.embedding.as_ref().map(rotation_to_json),
            shaded_faces: a.shaded_faces.clone(),
            involution: a.involution.as_ref().map(InvolutionFile::from_involution),
            meta: a.meta.clone(),
        }
    }

    pub fn resolve(&self, base: &Path) -> Result<FigureAsset, FormatError> {
        let map = self.map.resolve(base, Some(&self.graph))?;
        if map.domain() != &self.graph {
            return Err(FormatError::DomainMismatch);
        }
        let embedding = match &self.embedding {
            Some(r) => Some(rotation_from_json(self.graph.clone(), r)?),
            None => None,
        };
        let involution = match &self.involution {
            Some(i) => Some(i.resolve(&self.graph)?),
            None => None,
        };
        Ok(FigureAsset {
            graph: self.graph.clone(),
            map,
            embedding,
            shaded_faces: self.shaded_faces.clone(),
            involution,
            meta: self.meta.clone(),
        })
    }
}

pub fn parse_asset(text: &str, base: &Path) -> Result<FigureAsset, FormatError> {
    let file: AssetFile = serde_json::from_str(text)?;
    file.resolve(base)
}

pub fn load_asset(path: &Path) -> Result<FigureAsset, FormatError> {
    parse_asset(&read_file(path)?, &base_dir(path))
}

/// Pretty JSON with a trailing newline, as written for bundled assets.
pub fn asset_to_string(a: &FigureAsset) -> String {
    let mut s = serde_json::to_string_pretty(&AssetFile::from_asset(a)).expect("asset serializes");
    s.push('\n');
    s
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Undirected DOT, nodes `n<id>` labeled by display name.
pub fn to_dot(g: &Graph) -> String {
    let mut s = String::from("graph G {\n");
    for v in g.vertices() {
        writeln!(s, "  n{} [label=\"{}\"];", v.0, dot_escape(&g.label(v))).unwrap();
    }
    for (u, w) in g.edges() {
        writeln!(s, "  n{} -- n{};", u.0, w.0).unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn to_graphml(g: &Graph) -> String {
    let mut s = String::from(concat!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
        "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n",
        "  <graph id=\"G\" edgedefault=\"undirected\">\n",
    ));
    for v in g.vertices() {
        writeln!(s, "    <node id=\"n{}\"><data key=\"label\">{}</data></node>", v.0, xml_escape(&g.label(v))).unwrap();
    }
    for (i, (u, w)) in g.edges().enumerate() {
        writeln!(s, "    <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\"/>", u.0, w.0).unwrap();
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}
