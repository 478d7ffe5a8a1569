//! Shared helpers for integration tests: graph generators and brute-force
//! oracles that do not go through the library's algorithms.

#![allow(dead_code)]

pub mod props;

use planemu::{Graph, VertexId};
use rand::Rng;

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for w in u + 1..n {
            g.add_edge(u.into(), w.into()).unwrap();
        }
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)))).unwrap()
}

/// G(n, p) on vertices `0..n`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for w in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u.into(), w.into()).unwrap();
            }
        }
    }
    g
}

/// Connected G(n, p): a random spanning tree plus independent extra edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = random_graph(rng, n, p);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u.into(), v.into()).unwrap();
    }
    g
}

/// All graphs on `n` labeled vertices, by edge bitmask.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap()
    })
}

fn disjoint_paths(g: &Graph, pairs: &[(usize, usize)], k: usize, blocked: &mut Vec<bool>) -> bool {
    if k == pairs.len() {
        return true;
    }
    let (a, b) = pairs[k];
    // depth-first over simple paths a -> b whose interior avoids blocked vertices
    fn walk(g: &Graph, cur: usize, target: usize, pairs: &[(usize, usize)], k: usize, blocked: &mut Vec<bool>) -> bool {
        for &w in g.neighbors(VertexId::from(cur)) {
            let w = w.index();
            if w == target {
                if disjoint_paths(g, pairs, k + 1, blocked) {
                    return true;
                }
                continue;
            }
            if blocked[w] {
                continue;
            }
            blocked[w] = true;
            let found = walk(g, w, target, pairs, k, blocked);
            blocked[w] = false;
            if found {
                return true;
            }
        }
        false
    }
    // an edge may serve only one pair; pairs are distinct so direct edges are
    // never reused, and interiors are disjoint by blocking
    walk(g, a, b, pairs, k, blocked)
}

fn has_subdivision(g: &Graph, branch: &[usize], pairs: &[(usize, usize)]) -> bool {
    let mut blocked = vec![false; g.vertex_count()];
    for &b in branch {
        blocked[b] = true;
    }
    let pairs: Vec<(usize, usize)> = pairs.iter().map(|&(i, j)| (branch[i], branch[j])).collect();
    disjoint_paths(g, &pairs, 0, &mut blocked)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Kuratowski oracle: planar iff no subgraph is a subdivision of K5 or K3,3.
/// Exponential; intended for graphs with at most eight vertices.
pub fn kuratowski_planar(g: &Graph) -> bool {
    let n = g.vertex_count();
    let deg = |v: usize| g.degree(VertexId::from(v));

    let k5_pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    for branch in subsets(n, 5) {
        if branch.iter().all(|&v| deg(v) >= 4) && has_subdivision(g, &branch, &k5_pairs) {
            return false;
        }
    }

    let k33_pairs: Vec<(usize, usize)> = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
    for six in subsets(n, 6) {
        if !six.iter().all(|&v| deg(v) >= 3) {
            continue;
        }
        // fix six[0] on the first side to skip mirrored splits
        for rest in subsets(5, 2) {
            let left = [six[0], six[1 + rest[0]], six[1 + rest[1]]];
            let right: Vec<usize> = six.iter().copied().filter(|v| !left.contains(v)).collect();
            let branch = [left[0], left[1], left[2], right[0], right[1], right[2]];
            if has_subdivision(g, &branch, &k33_pairs) {
                return false;
            }
        }
    }
    true
}

/// Brute-force isomorphism by trying every bijection. Small graphs only.
pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut found = false;
    heap_permutations(&mut perm, n, &mut |p| {
        if !found && g.edges().all(|(u, w)| h.has_edge(VertexId::from(p[u.index()]), VertexId::from(p[w.index()]))) {
            found = true;
        }
    });
    found
}

pub fn heap_permutations(a: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(a);
        return;
    }
    for i in 0..k {
        heap_permutations(a, k - 1, f);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}
