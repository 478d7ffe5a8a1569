//! Left-right planarity test with embedding construction.
//!
//! Three depth-first passes: orientation (heights, lowpoints, nesting
//! depths), testing (conflict pairs of return-edge intervals), and
//! embedding (resolving each edge's side and threading half-edges into
//! cyclic neighbor lists). Runs in linear time after the edge-count bound.

use std::collections::HashMap;

use crate::graph::{Graph, VertexId};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

/// Cyclic neighbor lists under construction: for every half-edge `(v, w)`
/// the clockwise and counterclockwise neighbors of `w` around `v`.
#[derive(Default)]
struct HalfEdges {
    links: HashMap<(usize, usize), (usize, usize)>,
    first: Vec<Option<usize>>,
}

impl HalfEdges {
    fn new(n: usize) -> Self {
        HalfEdges { links: HashMap::new(), first: vec![None; n] }
    }

    fn add_cw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        let Some(r) = reference else {
            self.links.insert((v, w), (w, w));
            self.first[v] = Some(w);
            return;
        };
        let cw_ref = self.links[&(v, r)].0;
        self.links.get_mut(&(v, r)).unwrap().0 = w;
        self.links.insert((v, w), (cw_ref, r));
        self.links.get_mut(&(v, cw_ref)).unwrap().1 = w;
    }

    fn add_ccw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        let Some(r) = reference else {
            self.links.insert((v, w), (w, w));
            self.first[v] = Some(w);
            return;
        };
        let ccw_ref = self.links[&(v, r)].1;
        self.add_cw(v, w, Some(ccw_ref));
        if self.first[v] == Some(r) {
            self.first[v] = Some(w);
        }
    }

    fn add_first(&mut self, v: usize, w: usize) {
        let r = self.first[v];
        self.add_ccw(v, w, r);
    }

    fn clockwise(&self, v: usize) -> Vec<usize> {
        let Some(start) = self.first[v] else {
            return Vec::new();
        };
        let mut order = vec![start];
        let mut cur = self.links[&(v, start)].0;
        while cur != start {
            order.push(cur);
            cur = self.links[&(v, cur)].0;
        }
        order
    }
}

struct LrState<'g> {
    g: &'g Graph,
    // oriented edges
    tail: Vec<usize>,
    head: Vec<usize>,
    out: Vec<Vec<usize>>,
    undirected: HashMap<(usize, usize), usize>,
    oriented: Vec<bool>,

    roots: Vec<usize>,
    height: Vec<usize>,
    parent_edge: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<i64>,

    ordered_out: Vec<Vec<usize>>,
    reference: Vec<Option<usize>>,
    side: Vec<i8>,
    stack: Vec<ConflictPair>,
    stack_bottom: Vec<usize>,
    lowpt_edge: Vec<usize>,

    left_ref: Vec<usize>,
    right_ref: Vec<usize>,
}

impl<'g> LrState<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        let m = g.edge_count();
        let mut undirected = HashMap::with_capacity(m);
        for (i, (u, w)) in g.edges().enumerate() {
            undirected.insert((u.index(), w.index()), i);
        }
        LrState {
            g,
            tail: Vec::with_capacity(m),
            head: Vec::with_capacity(m),
            out: vec![Vec::new(); n],
            undirected,
            oriented: vec![false; m],
            roots: Vec::new(),
            height: vec![NONE; n],
            parent_edge: vec![NONE; n],
            lowpt: Vec::with_capacity(m),
            lowpt2: Vec::with_capacity(m),
            nesting_depth: Vec::with_capacity(m),
            ordered_out: Vec::new(),
            reference: Vec::new(),
            side: Vec::new(),
            stack: Vec::new(),
            stack_bottom: Vec::new(),
            lowpt_edge: Vec::new(),
            left_ref: vec![NONE; n],
            right_ref: vec![NONE; n],
        }
    }

    fn undirected_id(&self, u: usize, w: usize) -> usize {
        self.undirected[&(u.min(w), u.max(w))]
    }

    fn orient(&mut self, v: usize) {
        let e = self.parent_edge[v];
        let neighbors: Vec<usize> = self.g.neighbors(VertexId::from(v)).iter().map(|w| w.index()).collect();
        for w in neighbors {
            let uid = self.undirected_id(v, w);
            if self.oriented[uid] {
                continue;
            }
            self.oriented[uid] = true;
            let vw = self.tail.len();
            self.tail.push(v);
            self.head.push(w);
            self.out[v].push(vw);
            self.lowpt.push(self.height[v]);
            self.lowpt2.push(self.height[v]);
            self.nesting_depth.push(0);

            if self.height[w] == NONE {
                self.parent_edge[w] = vw;
                self.height[w] = self.height[v] + 1;
                self.orient(w);
            } else {
                self.lowpt[vw] = self.height[w];
            }

            self.nesting_depth[vw] = 2 * self.lowpt[vw] as i64;
            if self.lowpt2[vw] < self.height[v] {
                self.nesting_depth[vw] += 1;
            }

            if e != NONE {
                if self.lowpt[vw] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                    self.lowpt[e] = self.lowpt[vw];
                } else if self.lowpt[vw] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                }
            }
        }
    }

    fn conflicting(&self, interval: &Interval, b: usize) -> bool {
        match interval.high {
            Some(h) => self.lowpt[h] > self.lowpt[b],
            None => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => unreachable!("empty conflict pair on stack"),
        }
    }

    fn test(&mut self, v: usize) -> bool {
        let e = self.parent_edge[v];
        let ordered = self.ordered_out[v].clone();
        for &ei in &ordered {
            let w = self.head[ei];
            self.stack_bottom[ei] = self.stack.len();
            if ei == self.parent_edge[w] {
                if !self.test(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = ei;
                self.stack.push(ConflictPair {
                    left: Interval::default(),
                    right: Interval { low: Some(ei), high: Some(ei) },
                });
            }

            if self.lowpt[ei] < self.height[v] {
                if ei == ordered[0] {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if e != NONE {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let mut q = self.stack.pop().expect("return edges of e_i are on the stack");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let q_low = q.right.low.expect("nonempty right interval");
            if self.lowpt[q_low] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else {
                    self.reference[p.right.low.unwrap()] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.reference[q_low] = Some(self.lowpt_edge[e]);
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }

        while let Some(top) = self.stack.last() {
            let top = *top;
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(low) = p.right.low {
                self.reference[low] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(low) = p.left.low {
                self.reference[low] = q.left.high;
            }
            p.left.low = q.left.low;
        }

        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.tail[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(low) = p.left.low {
                self.side[low] = -1;
            }
        }

        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.head[h] != u {
                    break;
                }
                p.left.high = self.reference[h];
            }
            if p.left.high.is_none() {
                if let Some(low) = p.left.low {
                    self.reference[low] = p.right.low;
                    self.side[low] = -1;
                    p.left.low = None;
                }
            }

            while let Some(h) = p.right.high {
                if self.head[h] != u {
                    break;
                }
                p.right.high = self.reference[h];
            }
            if p.right.high.is_none() {
                if let Some(low) = p.right.low {
                    self.reference[low] = p.left.low;
                    self.side[low] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }

        if self.lowpt[e] < self.height[u] {
            let top = *self.stack.last().expect("return edge keeps a conflict pair");
            let (hl, hr) = (top.left.high, top.right.high);
            self.reference[e] = match (hl, hr) {
                (Some(l), None) => Some(l),
                (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                _ => hr,
            };
        }
    }

    fn sign(&mut self, e: usize) -> i8 {
        // Iterative form of the recursive sign resolution.
        let mut chain = vec![e];
        while let Some(r) = self.reference[*chain.last().unwrap()] {
            chain.push(r);
        }
        let mut acc = self.side[*chain.last().unwrap()];
        for &x in chain.iter().rev().skip(1) {
            self.side[x] *= acc;
            self.reference[x] = None;
            acc = self.side[x];
        }
        self.side[e]
    }

    fn embed(&mut self, v: usize, half: &mut HalfEdges) {
        let ordered = self.ordered_out[v].clone();
        for ei in ordered {
            let w = self.head[ei];
            if ei == self.parent_edge[w] {
                half.add_first(w, v);
                self.left_ref[v] = w;
                self.right_ref[v] = w;
                self.embed(w, half);
            } else if self.side[ei] == 1 {
                let r = self.right_ref[w];
                half.add_cw(w, v, Some(r));
            } else {
                let r = self.left_ref[w];
                half.add_ccw(w, v, Some(r));
                self.left_ref[w] = v;
            }
        }
    }
}

/// Returns clockwise neighbor orders of a planar embedding, or `None` if the
/// graph is not planar.
pub(crate) fn lr_planarity(g: &Graph) -> Option<Vec<Vec<VertexId>>> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n > 2 && m > 3 * n - 6 {
        return None;
    }

    let mut st = LrState::new(g);
    for v in 0..n {
        if st.height[v] == NONE {
            st.height[v] = 0;
            st.roots.push(v);
            st.orient(v);
        }
    }

    let m = st.tail.len();
    let by_depth = |st: &LrState, v: usize| {
        let mut order = st.out[v].clone();
        order.sort_by_key(|&e| st.nesting_depth[e]);
        order
    };
    st.ordered_out = (0..n).map(|v| by_depth(&st, v)).collect();
    st.reference = vec![None; m];
    st.side = vec![1; m];
    st.stack_bottom = vec![0; m];
    st.lowpt_edge = vec![NONE; m];

    let roots = st.roots.clone();
    for &r in &roots {
        if !st.test(r) {
            return None;
        }
    }

    for e in 0..m {
        let s = st.sign(e) as i64;
        st.nesting_depth[e] *= s;
    }

    let mut half = HalfEdges::new(n);
    st.ordered_out = (0..n).map(|v| by_depth(&st, v)).collect();
    for v in 0..n {
        let mut previous = None;
        for &e in &st.ordered_out[v] {
            let w = st.head[e];
            half.add_cw(v, w, previous);
            previous = Some(w);
        }
    }
    for &r in &roots {
        st.embed(r, &mut half);
    }

    Some((0..n).map(|v| half.clockwise(v).into_iter().map(VertexId::from).collect()).collect())
}
