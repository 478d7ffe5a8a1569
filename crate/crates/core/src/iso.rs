//! Canonical forms and isomorphism for small graphs, by color refinement
//! plus individualization. Display names are ignored.

use crate::graph::{Graph, VertexId};

/// Canonical adjacency code: two graphs are isomorphic iff their codes are
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    n: usize,
    bits: Vec<u64>,
}

/// Stable refinement: recolor by (color, sorted neighbor colors) until the
/// number of classes stops growing. Colors are ranks of signatures, so the
/// result does not depend on vertex numbering.
fn refine(g: &Graph, mut colors: Vec<u32>) -> Vec<u32> {
    loop {
        let classes = count_classes(&colors);
        let mut sigs: Vec<(u32, Vec<u32>, usize)> = g
            .vertices()
            .map(|v| {
                let mut nb: Vec<u32> = g.neighbors(v).iter().map(|w| colors[w.index()]).collect();
                nb.sort_unstable();
                (colors[v.index()], nb, v.index())
            })
            .collect();
        sigs.sort();
        let mut next = vec![0u32; colors.len()];
        let mut rank = 0u32;
        for i in 0..sigs.len() {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                rank += 1;
            }
            next[sigs[i].2] = rank;
        }
        colors = next;
        if count_classes(&colors) == classes {
            return colors;
        }
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn code(g: &Graph, colors: &[u32]) -> Vec<u64> {
    let n = g.vertex_count();
    let mut order = vec![0usize; n];
    for v in 0..n {
        order[colors[v] as usize] = v;
    }
    let mut bits = vec![0u64; (n * n).div_ceil(64).max(1)];
    for i in 0..n {
        for j in 0..n {
            if g.has_edge(VertexId::from(order[i]), VertexId::from(order[j])) {
                let k = i * n + j;
                bits[k / 64] |= 1 << (k % 64);
            }
        }
    }
    bits
}

fn search(g: &Graph, colors: Vec<u32>, best: &mut Option<Vec<u64>>) {
    let colors = refine(g, colors);
    let n = colors.len();
    if count_classes(&colors) == n {
        let c = code(g, &colors);
        if best.as_ref().is_none_or(|b| c > *b) {
            *best = Some(c);
        }
        return;
    }
    // first non-singleton class in color order
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let target = sizes.iter().position(|&s| s > 1).unwrap() as u32;
    for v in 0..n {
        if colors[v] != target {
            continue;
        }
        let individualized =
            colors.iter().enumerate().map(|(u, &c)| 2 * c + u32::from(u != v || c != target)).collect();
        search(g, individualized, best);
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let colors = g.vertices().map(|v| g.degree(v) as u32).collect();
    let mut best = None;
    search(g, colors, &mut best);
    CanonicalForm { n: g.vertex_count(), bits: best.unwrap_or_default() }
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.vertex_count() == h.vertex_count() && g.edge_count() == h.edge_count() && canonical_form(g) == canonical_form(h)
}
