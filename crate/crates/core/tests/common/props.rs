//! Property checks shared by the proptest suites and the acceptance run.
//! Each takes a seed and returns a description of the first violation.

use planemu::covers::{
    bfs_spanning_tree, is_projective_planar, is_projective_planar_with_tree, quotient_by_involution, sheet_swap,
    VoltageAssignment,
};
use planemu::embedding::is_planar;
use planemu::iso::are_isomorphic;
use planemu::search::{find_emulator_labeling, SearchOutcome, SearchProblem};
use planemu::{Graph, GraphMap, MapClass, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub type Check = Result<(), String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Neighbor-image counts straight from the definitions: `None` if some edge
/// is not preserved, else whether every neighborhood is hit (emulator) and
/// hit exactly once (cover), plus vertex surjectivity.
pub fn oracle_class(host: &Graph, target: &Graph, a: &[usize]) -> Option<(bool, bool)> {
    for (u, w) in host.edges() {
        if !target.has_edge(VertexId::from(a[u.index()]), VertexId::from(a[w.index()])) {
            return None;
        }
    }
    let mut hit = vec![false; target.vertex_count()];
    for &t in a {
        hit[t] = true;
    }
    let onto = hit.iter().all(|&h| h);
    let (mut emu, mut cover) = (onto, onto);
    for v in host.vertices() {
        let mut counts = vec![0usize; target.vertex_count()];
        for w in host.neighbors(v) {
            counts[a[w.index()]] += 1;
        }
        for t in target.neighbors(VertexId::from(a[v.index()])) {
            emu &= counts[t.index()] >= 1;
            cover &= counts[t.index()] == 1;
        }
        cover &= host.degree(v) == target.degree(VertexId::from(a[v.index()]));
    }
    Some((emu, cover && emu))
}

fn assignment(m: &GraphMap) -> Vec<usize> {
    m.assignment().iter().map(|v| v.index()).collect()
}

pub fn random_voltage<R: Rng>(rng: &mut R, g: &Graph) -> VoltageAssignment {
    let ones: Vec<(VertexId, VertexId)> = g.edges().filter(|_| rng.gen_bool(0.5)).collect();
    VoltageAssignment::from_edges(g.clone(), &ones).unwrap()
}

/// A double cover of `g` with some extra lifts of base edges added, which
/// keeps the projection an emulator and usually makes it proper.
pub fn random_emulator<R: Rng>(rng: &mut R, g: &Graph) -> GraphMap {
    let (mut cover, proj) = random_voltage(rng, g).derive_double_cover();
    let n = g.vertex_count();
    for (u, w) in g.edges() {
        if rng.gen_bool(0.3) {
            let (a, b) = (u.index(), w.index());
            let other = if cover.has_edge(VertexId::from(a), VertexId::from(b)) { b + n } else { b };
            cover.add_edge(VertexId::from(a), VertexId::from(other)).unwrap();
        }
    }
    GraphMap::new(cover, g.clone(), proj.assignment().to_vec()).unwrap()
}

pub fn cover_implies_emulator(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(1..=9);
    let p = r.gen_range(0.2..0.8);
    let g = random_graph(&mut r, n, p);
    let (cover, proj) = random_voltage(&mut r, &g).derive_double_cover();
    let class = oracle_class(&cover, &g, &assignment(&proj));
    if class != Some((true, true)) {
        return Err(format!("derived cover of {:?} fails the cover oracle", g.edge_set()));
    }
    if proj.verify_cover() != Ok(Ok(())) || proj.verify_emulator() != Ok(Ok(())) {
        return Err(format!("library rejects derived cover of {:?}", g.edge_set()));
    }
    Ok(())
}

pub fn composition_closure(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(1..=6);
    let g = random_connected_graph(&mut r, n, 0.4);
    // covers compose to covers
    let (c1, p1) = random_voltage(&mut r, &g).derive_double_cover();
    let (_, p2) = random_voltage(&mut r, &c1).derive_double_cover();
    let both = p2.then(&p1).map_err(|e| e.to_string())?;
    if oracle_class(both.domain(), &g, &assignment(&both)) != Some((true, true))
        || both.classify().class != MapClass::Cover
    {
        return Err(format!("composed covers over {:?} are not a cover", g.edge_set()));
    }
    // emulators compose to emulators
    let e1 = random_emulator(&mut r, &g);
    let e2 = random_emulator(&mut r, e1.domain());
    let both = e2.then(&e1).map_err(|e| e.to_string())?;
    let oracle = oracle_class(both.domain(), &g, &assignment(&both));
    if !matches!(oracle, Some((true, _))) || both.verify_emulator() != Ok(Ok(())) {
        return Err(format!("composed emulators over {:?} are not an emulator", g.edge_set()));
    }
    Ok(())
}

pub fn derive_quotient_roundtrip(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(1..=10);
    let p = r.gen_range(0.1..0.7);
    let g = random_graph(&mut r, n, p);
    let (cover, proj) = random_voltage(&mut r, &g).derive_double_cover();
    let inv = sheet_swap(&cover).map_err(|e| e.to_string())?;
    let q = quotient_by_involution(&cover, &inv, Some(&proj)).map_err(|e| e.to_string())?;
    if !are_isomorphic(&q.graph, &g) {
        return Err(format!("quotient of derived cover of {:?} is not isomorphic", g.edge_set()));
    }
    if n <= 7 && !brute_isomorphic(&q.graph, &g) {
        return Err(format!("brute force disagrees on {:?}", g.edge_set()));
    }
    match &q.induced {
        Some(m) if m.classify().class == MapClass::Cover => Ok(()),
        _ => Err("induced map on the quotient is not a cover".into()),
    }
}

pub fn planar_implies_projective(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(1..=8);
    let g = random_connected_graph(&mut r, n, 0.3);
    if !kuratowski_planar(&g) || g.cycle_rank() > 14 {
        return Ok(());
    }
    let d = is_projective_planar(&g).map_err(|e| e.to_string())?;
    if !d.projective_planar || d.assignments_checked != 1 {
        return Err(format!("planar {:?} not accepted by the all-zero voltage", g.edge_set()));
    }
    Ok(())
}

/// The decision must not depend on which spanning tree is normalized.
pub fn spanning_tree_independence(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(2..=7);
    let g = random_connected_graph(&mut r, n, 0.5);
    if g.cycle_rank() > 12 {
        return Ok(());
    }
    // random spanning tree: shuffle edges, keep those joining components
    let mut edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    edges.shuffle(&mut r);
    let mut comp: Vec<usize> = (0..n).collect();
    let mut tree = Vec::new();
    for (u, w) in edges {
        let (a, b) = (comp[u.index()], comp[w.index()]);
        if a != b {
            comp.iter_mut().filter(|c| **c == b).for_each(|c| *c = a);
            tree.push((u, w));
        }
    }
    let a = is_projective_planar_with_tree(&g, &bfs_spanning_tree(&g)).map_err(|e| e.to_string())?;
    let b = is_projective_planar_with_tree(&g, &tree).map_err(|e| e.to_string())?;
    if a.projective_planar != b.projective_planar {
        return Err(format!("tree choice changes the decision on {:?}", g.edge_set()));
    }
    for c in [&a, &b].into_iter().filter_map(|d| d.certificate.as_ref()) {
        if c.projection.verify_cover() != Ok(Ok(())) || !is_planar(&c.cover) {
            return Err("certificate does not check".into());
        }
    }
    Ok(())
}

pub fn planarity_monotone(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(1..=9);
    let p = r.gen_range(0.2..0.8);
    let g = random_graph(&mut r, n, p);
    if !is_planar(&g) {
        return Ok(());
    }
    for (u, w) in g.edges() {
        let mut h = g.clone();
        h.remove_edge(u, w).unwrap();
        if !is_planar(&h) {
            return Err(format!("deleting {u}-{w} from planar {:?} broke planarity", g.edge_set()));
        }
    }
    Ok(())
}

/// A double cover of an emulator host, mapped down to the base, quotients
/// back to an emulator.
pub fn quotient_preserves_emulator(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(1..=6);
    let g = random_connected_graph(&mut r, n, 0.4);
    let e = random_emulator(&mut r, &g);
    let (d, p) = random_voltage(&mut r, e.domain()).derive_double_cover();
    let m = p.then(&e).map_err(|x| x.to_string())?;
    let inv = sheet_swap(&d).map_err(|x| x.to_string())?;
    let q = quotient_by_involution(&d, &inv, Some(&m)).map_err(|x| x.to_string())?;
    let induced = q.induced.ok_or("no induced map")?;
    let oracle = oracle_class(induced.domain(), &g, &assignment(&induced));
    if !matches!(oracle, Some((true, _))) || induced.verify_emulator() != Ok(Ok(())) {
        return Err(format!("quotient lost the emulator property over {:?}", g.edge_set()));
    }
    Ok(())
}

/// Search soundness, plus agreement with enumerating every labeling.
pub fn search_agrees_with_brute_force(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(1..=8);
    let p = r.gen_range(0.2..0.7);
    let host = random_graph(&mut r, n, p);
    let targets = [complete(2), path(3), complete(3), cycle(4), complete(4)];
    let target = targets.choose(&mut r).unwrap().clone();
    let k = target.vertex_count();
    let mut exists = false;
    let mut a = vec![0usize; n];
    'outer: loop {
        if matches!(oracle_class(&host, &target, &a), Some((true, _))) {
            exists = true;
            break;
        }
        for digit in a.iter_mut() {
            *digit += 1;
            if *digit < k {
                continue 'outer;
            }
            *digit = 0;
        }
        break;
    }
    let outcome =
        find_emulator_labeling(&SearchProblem::new(host.clone(), target.clone())).map_err(|e| e.to_string())?;
    match (&outcome, exists) {
        (SearchOutcome::Found { map, .. }, true) => {
            if matches!(oracle_class(&host, &target, &assignment(map)), Some((true, _))) {
                Ok(())
            } else {
                Err("returned labeling fails the oracle".into())
            }
        }
        (SearchOutcome::Refuted { .. }, false) => Ok(()),
        _ => Err(format!(
            "search says {} but brute force says {exists} on host {:?} target {:?}",
            outcome.label(),
            host.edge_set(),
            target.edge_set()
        )),
    }
}

/// Runs `check` on seeds `0..count`, stopping at the first failure.
pub fn run_seeds(count: u64, check: fn(u64) -> Check) -> Check {
    (0..count).try_for_each(|s| check(s).map_err(|e| format!("seed {s}: {e}")))
}

/// Apex copies inside one or both faces of a cycle wrapping `k` times
/// around `C_n` give an emulator of the wheel over `C_n`; shading a face
/// twice is rejected.
pub fn apex_insertion_on_wrapped_cycles(seed: u64) -> Check {
    use planemu::constructions::{apex_insertion, AssetMeta, ConstructionError, FigureAsset};
    use planemu::embedding::test_planarity;

    let mut r = rng(seed);
    let n = r.gen_range(3..=7);
    let k = r.gen_range(1..=3);
    let host = cycle(k * n);
    let base_map = GraphMap::new(host.clone(), cycle(n), (0..k * n).map(|i| VertexId::from(i % n)).collect())
        .map_err(|e| e.to_string())?;
    let emb = test_planarity(&host).embedding.ok_or("cycle not planar")?;
    let faces = emb.faces();
    let shaded = if r.gen_bool(0.5) { vec![faces[0].clone()] } else { faces.clone() };
    let mut wheel = cycle(n);
    let hub = wheel.add_vertex(None);
    for v in 0..n {
        wheel.add_edge(VertexId::from(v), hub).unwrap();
    }
    let mut base = FigureAsset {
        graph: host.clone(),
        map: base_map,
        embedding: Some(emb),
        shaded_faces: shaded.clone(),
        involution: None,
        meta: AssetMeta::default(),
    };
    let out = apex_insertion(&base, &wheel, hub).map_err(|e| e.to_string())?;
    if out.graph.vertex_count() != k * n + shaded.len() {
        return Err("wrong vertex count after insertion".into());
    }
    if !matches!(oracle_class(&out.graph, &wheel, &assignment(&out.map)), Some((true, _))) {
        return Err(format!("n={n} k={k}: result is not an emulator of the wheel"));
    }
    let emb = out.embedding.ok_or("insertion dropped the embedding")?;
    if emb.euler_genus() != Ok(0) || !is_planar(&out.graph) {
        return Err(format!("n={n} k={k}: result is not planar"));
    }
    base.shaded_faces = vec![faces[0].clone(), faces[0].clone()];
    match apex_insertion(&base, &wheel, hub) {
        Err(ConstructionError::DuplicateShadedFace(1)) => Ok(()),
        other => Err(format!("duplicate shading accepted: {other:?}")),
    }
}
