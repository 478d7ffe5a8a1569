//! Backtracking search for emulator labelings of a host graph onto a target.
//!
//! Host vertices are assigned in degree-descending order (ties by id), each
//! trying target vertices in ascending id. A branch is cut when an edge
//! lands on a non-edge, when some assigned vertex can no longer reach every
//! neighbor of its image with its remaining unassigned neighbors, or when
//! too few vertices remain to hit every target vertex. Every labeling found
//! is re-checked with [`GraphMap::verify_emulator`] before it is returned.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::is_planar;
use crate::graph::{Graph, VertexId};
use crate::iso::canonical_form;
use crate::maps::GraphMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("partial assignment names unknown host vertex {0}")]
    UnknownHostVertex(VertexId),
    #[error("partial assignment maps to unknown target vertex {0}")]
    UnknownTargetVertex(VertexId),
    #[error("partial assignment sends edge {0}-{1} to a non-edge")]
    InconsistentPartial(VertexId, VertexId),
    #[error("node budget exhausted on host {0}")]
    BudgetExceeded(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Maximum number of tentative assignments.
    pub nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { nodes: 50_000_000 }
    }
}

#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub host: Graph,
    pub target: Graph,
    pub partial: BTreeMap<VertexId, VertexId>,
    pub limits: SearchLimits,
}

impl SearchProblem {
    pub fn new(host: Graph, target: Graph) -> Self {
        SearchProblem { host, target, partial: BTreeMap::new(), limits: SearchLimits::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        map: GraphMap,
        nodes: u64,
    },
    /// The whole search space was explored without success.
    Refuted {
        nodes: u64,
    },
    BudgetExhausted {
        nodes: u64,
    },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. }
            | SearchOutcome::Refuted { nodes }
            | SearchOutcome::BudgetExhausted { nodes } => *nodes,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found { .. } => "found",
            SearchOutcome::Refuted { .. } => "refuted",
            SearchOutcome::BudgetExhausted { .. } => "budget-exhausted",
        }
    }

    pub fn map(&self) -> Option<&GraphMap> {
        match self {
            SearchOutcome::Found { map, .. } => Some(map),
            _ => None,
        }
    }
}

struct Solver<'a> {
    host: &'a Graph,
    target: &'a Graph,
    order: Vec<VertexId>,
    image: Vec<Option<VertexId>>,
    hits: Vec<u32>,
    unassigned: usize,
    nodes: u64,
    budget: u64,
}

enum Step {
    Done,
    Dead,
    OutOfBudget,
}

impl Solver<'_> {
    /// Whether `u` (assigned) can still see every neighbor of its image.
    fn admissible(&self, u: VertexId) -> bool {
        let t = self.image[u.index()].unwrap();
        let mut free = 0usize;
        let mut seen = Vec::new();
        for &w in self.host.neighbors(u) {
            match self.image[w.index()] {
                Some(x) => seen.push(x),
                None => free += 1,
            }
        }
        let missing = self.target.neighbors(t).iter().filter(|x| !seen.contains(x)).count();
        missing <= free
    }

    fn consistent(&self, v: VertexId) -> bool {
        let t = self.image[v.index()].unwrap();
        for &w in self.host.neighbors(v) {
            if let Some(x) = self.image[w.index()] {
                if !self.target.has_edge(t, x) {
                    return false;
                }
            }
        }
        if !self.admissible(v) {
            return false;
        }
        if !self.host.neighbors(v).iter().all(|&w| self.image[w.index()].is_none() || self.admissible(w)) {
            return false;
        }
        let unhit = self.hits.iter().filter(|&&h| h == 0).count();
        unhit <= self.unassigned
    }

    fn run(&mut self, depth: usize) -> Step {
        if depth == self.order.len() {
            return if self.hits.iter().all(|&h| h > 0) { Step::Done } else { Step::Dead };
        }
        let v = self.order[depth];
        for t in self.target.vertices() {
            if self.nodes >= self.budget {
                return Step::OutOfBudget;
            }
            self.nodes += 1;
            self.image[v.index()] = Some(t);
            self.hits[t.index()] += 1;
            self.unassigned -= 1;
            if self.consistent(v) {
                match self.run(depth + 1) {
                    Step::Dead => {}
                    other => return other,
                }
            }
            self.unassigned += 1;
            self.hits[t.index()] -= 1;
            self.image[v.index()] = None;
        }
        Step::Dead
    }
}

/// Validates the partial assignment and searches for an emulator labeling.
///
/// Determinism: the first labeling in the fixed variable/value order is the
/// one returned.
pub fn find_emulator_labeling(p: &SearchProblem) -> Result<SearchOutcome, SearchError> {
    let (host, target) = (&p.host, &p.target);
    let mut image = vec![None; host.vertex_count()];
    for (&v, &t) in &p.partial {
        if !host.contains(v) {
            return Err(SearchError::UnknownHostVertex(v));
        }
        if !target.contains(t) {
            return Err(SearchError::UnknownTargetVertex(t));
        }
        image[v.index()] = Some(t);
    }
    for (u, w) in host.edges() {
        if let (Some(a), Some(b)) = (image[u.index()], image[w.index()]) {
            if !target.has_edge(a, b) {
                return Err(SearchError::InconsistentPartial(u, w));
            }
        }
    }

    let mut order: Vec<VertexId> = host.vertices().filter(|v| image[v.index()].is_none()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(host.degree(v)), v));
    let mut hits = vec![0u32; target.vertex_count()];
    for t in image.iter().flatten() {
        hits[t.index()] += 1;
    }
    let mut solver =
        Solver { host, target, unassigned: order.len(), order, image, hits, nodes: 0, budget: p.limits.nodes };
    let pre_ok = host.vertices().all(|v| solver.image[v.index()].is_none() || solver.admissible(v))
        && solver.hits.iter().filter(|&&h| h == 0).count() <= solver.unassigned;
    let step = if pre_ok { solver.run(0) } else { Step::Dead };
    let nodes = solver.nodes;
    match step {
        Step::Dead => Ok(SearchOutcome::Refuted { nodes }),
        Step::OutOfBudget => Ok(SearchOutcome::BudgetExhausted { nodes }),
        Step::Done => {
            let assignment = solver.image.into_iter().map(Option::unwrap).collect();
            let map = GraphMap::new(host.clone(), target.clone(), assignment).expect("complete assignment");
            match map.verify_emulator() {
                Ok(Ok(())) => Ok(SearchOutcome::Found { map, nodes }),
                other => panic!("search returned a labeling that fails verification: {other:?}"),
            }
        }
    }
}

/// Outcome for one host in a [`refute_small_hosts`] run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostResult {
    pub graph: Graph,
    pub outcome: String,
    pub nodes: u64,
    /// Target vertex per host vertex, when a labeling was found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labeling: Option<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefuteReport {
    pub max_vertices: usize,
    pub hosts_checked: usize,
    pub hosts_with_emulator: usize,
    /// Fewest host vertices among hosts with a labeling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smallest_emulator: Option<usize>,
    pub hosts: Vec<HostResult>,
}

/// Connected planar graphs on `1..=max_vertices` vertices, one per
/// isomorphism class, ordered by vertex count then edge count then
/// canonical form.
///
/// Every connected graph has a vertex whose removal leaves it connected, so
/// adding one vertex joined to a nonempty subset reaches every class.
pub fn connected_planar_graphs(max_vertices: usize) -> Vec<Graph> {
    let mut all = Vec::new();
    if max_vertices == 0 {
        return all;
    }
    let mut layer = vec![Graph::with_vertices(1)];
    all.extend(layer.iter().cloned());
    for n in 2..=max_vertices {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &layer {
            for mask in 1u32..(1 << (n - 1)) {
                let mut h = g.clone();
                let v = h.add_vertex(None);
                for u in 0..n - 1 {
                    if mask & (1 << u) != 0 {
                        h.add_edge(VertexId::from(u), v).unwrap();
                    }
                }
                if !is_planar(&h) {
                    continue;
                }
                let form = canonical_form(&h);
                if seen.insert(form.clone()) {
                    next.push((h.edge_count(), form, h));
                }
            }
        }
        next.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        layer = next.into_iter().map(|(_, _, h)| h).collect();
        all.extend(layer.iter().cloned());
    }
    all
}

/// Runs the labeling search on every connected planar host with at most
/// `max_vertices` vertices.
///
/// Disconnected hosts are skipped: any component of an emulator of a
/// connected target is itself an emulator, so they add no new sizes.
/// `limits` applies per host; exhausting it on any host is an error.
pub fn refute_small_hosts(
    target: &Graph,
    max_vertices: usize,
    limits: SearchLimits,
) -> Result<RefuteReport, SearchError> {
    let mut hosts = Vec::new();
    for (i, host) in connected_planar_graphs(max_vertices).into_iter().enumerate() {
        let problem = SearchProblem { host: host.clone(), target: target.clone(), partial: BTreeMap::new(), limits };
        let outcome = find_emulator_labeling(&problem)?;
        if let SearchOutcome::BudgetExhausted { .. } = outcome {
            return Err(SearchError::BudgetExceeded(i));
        }
        hosts.push(HostResult {
            graph: host,
            outcome: outcome.label().to_string(),
            nodes: outcome.nodes(),
            labeling: outcome.map().map(|m| m.assignment().to_vec()),
        });
    }
    let found: Vec<&HostResult> = hosts.iter().filter(|h| h.labeling.is_some()).collect();
    Ok(RefuteReport {
        max_vertices,
        hosts_checked: hosts.len(),
        hosts_with_emulator: found.len(),
        smallest_emulator: found.iter().map(|h| h.graph.vertex_count()).min(),
        hosts,
    })
}
