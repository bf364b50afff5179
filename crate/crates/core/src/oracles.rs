//! Independent brute-force verification kernels.
//!
//! Path counting runs a layer-by-layer dynamic program over arbitrary
//! precision integers, cross-checkable against plain DFS enumeration.
//! Intersection classification compares reconstructed critical paths
//! layer-aligned (vertex ids encode layers, so equal vertices share a
//! layer). Diameter and stretch are all-sources BFS; every sweep is
//! parallel over a read-only graph with order-preserving reductions, so
//! reports do not depend on the worker count.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::adversary::trial_rng;
use crate::base::{CriticalPath, LayeredGraph};
use crate::{ObstructorError, Result};

/// Exact number of directed `s -> t` paths.
///
/// Counts can be exponential in the layer count, hence the big integers.
/// Returns 0 when `t` is unreachable and 1 when `s == t` (the empty path).
pub fn count_paths(g: &LayeredGraph, s: u64, t: u64) -> BigUint {
    if s == t {
        return BigUint::one();
    }
    let (ls, lt) = (g.layer_of(s), g.layer_of(t));
    if ls >= lt {
        return BigUint::zero();
    }
    let mut frontier: HashMap<u64, BigUint> = HashMap::new();
    frontier.insert(s, BigUint::one());
    let mut buf = Vec::new();
    for _ in ls..lt {
        let mut next: HashMap<u64, BigUint> = HashMap::with_capacity(frontier.len() * 2);
        for (v, cnt) in frontier {
            g.out_neighbors_into(v, &mut buf);
            for &w in &buf {
                *next.entry(w).or_insert_with(BigUint::zero) += &cnt;
            }
        }
        frontier = next;
    }
    frontier.remove(&t).unwrap_or_else(BigUint::zero)
}

/// Naive DFS path enumeration, the cross-oracle for [`count_paths`].
/// Returns `None` once the count exceeds `cap`.
pub fn count_paths_dfs(g: &LayeredGraph, s: u64, t: u64, cap: u64) -> Option<u64> {
    fn rec(g: &LayeredGraph, v: u64, t: u64, lt: u64, cap: u64, acc: &mut u64) -> bool {
        if v == t {
            *acc += 1;
            return *acc <= cap;
        }
        if g.layer_of(v) >= lt {
            return true;
        }
        for w in g.out_neighbors(v) {
            if !rec(g, w, t, lt, cap, acc) {
                return false;
            }
        }
        true
    }
    let mut acc = 0;
    if rec(g, s, t, g.layer_of(t), cap, &mut acc) {
        Some(acc)
    } else {
        None
    }
}

/// Shape of the shared-vertex set of two critical paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionClass {
    Empty,
    SingleVertex,
    SingleEdge,
    /// Contiguous subpath of exactly two edges.
    Path2,
    /// Contiguous subpath of the given edge length (>= 3).
    Longer(u32),
    /// Shared vertices that are not consecutive in the paths.
    NonContiguous,
}

impl IntersectionClass {
    pub fn label(self) -> &'static str {
        match self {
            IntersectionClass::Empty => "empty",
            IntersectionClass::SingleVertex => "vertex",
            IntersectionClass::SingleEdge => "edge",
            IntersectionClass::Path2 => "path2",
            IntersectionClass::Longer(_) => "longer",
            IntersectionClass::NonContiguous => "noncontiguous",
        }
    }

    /// Edge length of the shared subpath; `None` when non-contiguous.
    pub fn contiguous_edges(self) -> Option<u32> {
        match self {
            IntersectionClass::Empty | IntersectionClass::SingleVertex => Some(0),
            IntersectionClass::SingleEdge => Some(1),
            IntersectionClass::Path2 => Some(2),
            IntersectionClass::Longer(e) => Some(e),
            IntersectionClass::NonContiguous => None,
        }
    }
}

/// Classify the intersection of two same-graph paths given as layer-aligned
/// vertex slices (position i holds the layer-i vertex).
pub fn classify_intersection_slices(p1: &[u64], p2: &[u64]) -> IntersectionClass {
    debug_assert_eq!(p1.len(), p2.len());
    let mut count = 0usize;
    let mut first = usize::MAX;
    let mut last = 0usize;
    for (i, (a, b)) in p1.iter().zip(p2.iter()).enumerate() {
        if a == b {
            count += 1;
            if first == usize::MAX {
                first = i;
            }
            last = i;
        }
    }
    if count == 0 {
        return IntersectionClass::Empty;
    }
    if last - first + 1 != count {
        return IntersectionClass::NonContiguous;
    }
    match count {
        1 => IntersectionClass::SingleVertex,
        2 => IntersectionClass::SingleEdge,
        3 => IntersectionClass::Path2,
        c => IntersectionClass::Longer((c - 1) as u32),
    }
}

pub fn classify_intersection(p1: &CriticalPath, p2: &CriticalPath) -> IntersectionClass {
    classify_intersection_slices(&p1.vertices, &p2.vertices)
}

/// All critical-path vertex sequences, materialized once for the sweeps.
pub struct PathCache {
    stride: usize,
    verts: Vec<u64>,
}

impl PathCache {
    pub fn build(g: &LayeredGraph) -> Self {
        let stride = g.params().layers as usize;
        let verts: Vec<u64> = g
            .pairs()
            .par_iter()
            .flat_map_iter(|pair| g.path_vertices(pair))
            .collect();
        Self { stride, verts }
    }

    pub fn len(&self) -> usize {
        if self.stride == 0 {
            0
        } else {
            self.verts.len() / self.stride
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn path(&self, idx: usize) -> &[u64] {
        &self.verts[idx * self.stride..(idx + 1) * self.stride]
    }
}

/// Inverted index: for each vertex, the ascending list of critical-path
/// indices through it.
pub struct PathIndex {
    offsets: Vec<usize>,
    items: Vec<u32>,
}

impl PathIndex {
    pub fn build(g: &LayeredGraph, cache: &PathCache) -> Self {
        let n = g.vertex_count() as usize;
        let mut counts = vec![0usize; n + 1];
        for &v in &cache.verts {
            counts[v as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut fill = counts;
        let mut items = vec![0u32; cache.verts.len()];
        for idx in 0..cache.len() {
            for &v in cache.path(idx) {
                items[fill[v as usize]] = idx as u32;
                fill[v as usize] += 1;
            }
        }
        Self { offsets, items }
    }

    pub fn paths_at(&self, v: u64) -> &[u32] {
        &self.items[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Ascending intersection of the path lists of `u` and `v`.
    pub fn paths_through_both(&self, u: u64, v: u64) -> Vec<u32> {
        let (mut a, mut b) = (self.paths_at(u), self.paths_at(v));
        let mut out = Vec::new();
        while let (Some(&x), Some(&y)) = (a.first(), b.first()) {
            match x.cmp(&y) {
                std::cmp::Ordering::Less => a = &a[1..],
                std::cmp::Ordering::Greater => b = &b[1..],
                std::cmp::Ordering::Equal => {
                    out.push(x);
                    a = &a[1..];
                    b = &b[1..];
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    /// Use the plain all-pairs double loop while `C(|P|, 2)` stays below this.
    pub naive_pair_limit: u64,
    /// Cap on inverted-index collision events for the exhaustive sweep.
    pub index_event_limit: u64,
    /// Sample size once both exhaustive modes are over budget.
    pub sample_size: u64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            naive_pair_limit: 10_000_000,
            index_event_limit: 200_000_000,
            sample_size: 100_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default)]
struct SweepAccum {
    counts: [u64; 6],
    max_shared: u64,
    witness: Option<(u32, u32)>,
    compared: u64,
}

impl SweepAccum {
    fn record(&mut self, i: u32, j: u32, class: IntersectionClass, shared: u64) {
        let slot = match class {
            IntersectionClass::Empty => 0,
            IntersectionClass::SingleVertex => 1,
            IntersectionClass::SingleEdge => 2,
            IntersectionClass::Path2 => 3,
            IntersectionClass::Longer(_) => 4,
            IntersectionClass::NonContiguous => 5,
        };
        self.counts[slot] += 1;
        if shared > self.max_shared || (shared == self.max_shared && self.witness.is_none()) {
            self.max_shared = shared;
            self.witness = Some((i, j));
        }
        self.compared += 1;
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.compared += other.compared;
        if other.max_shared > self.max_shared
            || (other.max_shared == self.max_shared && self.witness.is_none())
        {
            self.max_shared = other.max_shared;
            self.witness = other.witness;
        }
        self
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionReport {
    pub mode: &'static str,
    /// Distinct unordered pairs compared (for the index mode, pairs with an
    /// empty intersection are accounted for arithmetically).
    pub pairs_total: u64,
    pub compared: u64,
    pub class_counts: BTreeMap<&'static str, u64>,
    pub max_shared_vertices: u64,
    pub witness: Option<(u32, u32)>,
}

impl IntersectionReport {
    /// True when every intersection is a contiguous subpath of at most
    /// `max_edges` edges.
    pub fn within(&self, max_edges: u32) -> bool {
        if self.class_counts.get("noncontiguous").copied().unwrap_or(0) > 0 {
            return false;
        }
        self.max_shared_vertices <= u64::from(max_edges) + 1
    }
}

fn shared_count(class: IntersectionClass, p1: &[u64], p2: &[u64]) -> u64 {
    match class {
        IntersectionClass::Empty => 0,
        IntersectionClass::SingleVertex => 1,
        IntersectionClass::SingleEdge => 2,
        IntersectionClass::Path2 => 3,
        IntersectionClass::Longer(e) => u64::from(e) + 1,
        IntersectionClass::NonContiguous => {
            p1.iter().zip(p2).filter(|(a, b)| a == b).count() as u64
        }
    }
}

/// Classify the intersection of every unordered pair of distinct critical
/// paths.
///
/// Three modes, picked by cost: a plain double loop, an exhaustive sweep
/// over the inverted vertex index (pairs never sharing a vertex are Empty
/// by definition, so only colliding pairs need a walk), and seeded random
/// sampling as the last resort.
pub fn intersection_sweep(
    g: &LayeredGraph,
    cache: &PathCache,
    cfg: &SweepConfig,
) -> IntersectionReport {
    let p = cache.len();
    let pairs_total = (p as u64) * (p as u64 - 1) / 2;
    let naive_cost = pairs_total;
    if naive_cost <= cfg.naive_pair_limit {
        let acc = (0..p)
            .into_par_iter()
            .map(|i| {
                let mut local = SweepAccum::default();
                let pi = cache.path(i);
                for j in i + 1..p {
                    let pj = cache.path(j);
                    let class = classify_intersection_slices(pi, pj);
                    local.record(i as u32, j as u32, class, shared_count(class, pi, pj));
                }
                local
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(SweepAccum::default(), SweepAccum::merge);
        return finish_sweep("exhaustive-pairs", pairs_total, acc, true);
    }

    let index = PathIndex::build(g, cache);
    let events: u64 = (0..g.vertex_count())
        .map(|v| {
            let c = index.paths_at(v).len() as u64;
            c * (c - 1) / 2
        })
        .sum();
    if events <= cfg.index_event_limit {
        let acc = (0..g.vertex_count())
            .into_par_iter()
            .map(|v| {
                let mut local = SweepAccum::default();
                let at = index.paths_at(v);
                let layer = g.layer_of(v) as usize;
                for (ai, &a) in at.iter().enumerate() {
                    let pa = cache.path(a as usize);
                    for &b in &at[ai + 1..] {
                        let pb = cache.path(b as usize);
                        // process each colliding pair at its first shared layer only
                        if pa[..layer].iter().zip(&pb[..layer]).any(|(x, y)| x == y) {
                            continue;
                        }
                        let class = classify_intersection_slices(pa, pb);
                        local.record(a, b, class, shared_count(class, pa, pb));
                    }
                }
                local
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(SweepAccum::default(), SweepAccum::merge);
        let mut acc = acc;
        // pairs that never collide at any vertex have empty intersections
        acc.counts[0] = pairs_total - acc.compared;
        acc.compared = pairs_total;
        return finish_sweep("exhaustive-index", pairs_total, acc, false);
    }

    let mut rng = trial_rng(cfg.seed, 0x157, 0);
    let mut acc = SweepAccum::default();
    for _ in 0..cfg.sample_size {
        let i = rng.random_range(0..p);
        let mut j = rng.random_range(0..p - 1);
        if j >= i {
            j += 1;
        }
        let (i, j) = (i.min(j), i.max(j));
        let (pi, pj) = (cache.path(i), cache.path(j));
        let class = classify_intersection_slices(pi, pj);
        acc.record(i as u32, j as u32, class, shared_count(class, pi, pj));
    }
    finish_sweep("sampled", pairs_total, acc, true)
}

fn finish_sweep(
    mode: &'static str,
    pairs_total: u64,
    acc: SweepAccum,
    _counted_empty: bool,
) -> IntersectionReport {
    let mut class_counts = BTreeMap::new();
    for (slot, label) in [
        (0usize, "empty"),
        (1, "vertex"),
        (2, "edge"),
        (3, "path2"),
        (4, "longer"),
        (5, "noncontiguous"),
    ] {
        class_counts.insert(label, acc.counts[slot]);
    }
    IntersectionReport {
        mode,
        pairs_total,
        compared: acc.compared,
        class_counts,
        max_shared_vertices: acc.max_shared,
        witness: acc.witness,
    }
}

#[derive(Clone, Debug)]
pub struct EdgeMultiplicityReport {
    pub distinct_path_edges: u64,
    pub graph_edges: u64,
    pub min_multiplicity: u64,
    pub max_multiplicity: u64,
    /// The union of critical paths is exactly the edge set.
    pub covers_edge_set: bool,
    pub witness_max: (u64, u64),
}

/// Multiplicity of every edge over all critical paths. For any family member
/// the step of an edge pins one generator coordinate, so the exact value is
/// `h^(k-2)` for every edge (1 for the base family: perfect coverage).
pub fn edge_multiplicities(g: &LayeredGraph, cache: &PathCache) -> EdgeMultiplicityReport {
    let mut mult: HashMap<(u64, u64), u64> = HashMap::new();
    for idx in 0..cache.len() {
        for w in cache.path(idx).windows(2) {
            *mult.entry((w[0], w[1])).or_insert(0) += 1;
        }
    }
    let distinct = mult.len() as u64;
    let mut min_m = u64::MAX;
    let mut max_m = 0;
    let mut witness = (0, 0);
    for (&e, &m) in &mult {
        if m > max_m || (m == max_m && e < witness) {
            max_m = m;
            witness = e;
        }
        min_m = min_m.min(m);
    }
    if distinct == 0 {
        min_m = 0;
    }
    EdgeMultiplicityReport {
        distinct_path_edges: distinct,
        graph_edges: g.edge_count(),
        min_multiplicity: min_m,
        max_multiplicity: max_m,
        covers_edge_set: distinct == g.edge_count(),
        witness_max: witness,
    }
}

#[derive(Clone, Debug)]
pub struct SubpathMultiplicityReport {
    pub max_multiplicity: u64,
    pub witness: (u64, u64, u64),
    /// Hull size, the claimed bound for the four-coordinate family.
    pub bound: u64,
    pub within_bound: bool,
}

/// Maximum number of critical paths containing any single 2-edge subpath.
///
/// Meaningful for families with at least four coordinates; the bound
/// `h = |V2+(r)|` is asserted only there (for k >= 5 the value is reported,
/// not asserted — it genuinely exceeds h).
pub fn max_length2_multiplicity(
    g: &LayeredGraph,
    cache: &PathCache,
) -> Result<SubpathMultiplicityReport> {
    if g.params().coord_count < 4 {
        return Err(ObstructorError::InvalidParam(format!(
            "length-2 multiplicity needs k >= 4, got k = {} (use edge multiplicities instead)",
            g.params().coord_count
        )));
    }
    let mut mult: HashMap<(u64, u64, u64), u64> = HashMap::new();
    for idx in 0..cache.len() {
        for w in cache.path(idx).windows(3) {
            *mult.entry((w[0], w[1], w[2])).or_insert(0) += 1;
        }
    }
    let mut max_m = 0;
    let mut witness = (0, 0, 0);
    for (&key, &m) in &mult {
        if m > max_m || (m == max_m && key < witness) {
            max_m = m;
            witness = key;
        }
    }
    let bound = g.hull_size();
    Ok(SubpathMultiplicityReport {
        max_multiplicity: max_m,
        witness,
        bound,
        within_bound: max_m <= bound,
    })
}

struct BfsScratch {
    dist: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: VecDeque<u64>,
}

impl BfsScratch {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![0; n],
            stamp: vec![0; n],
            epoch: 0,
            queue: VecDeque::new(),
        }
    }
}

fn bfs_eccentricity(
    g: &LayeredGraph,
    extra: &HashMap<u64, Vec<u64>>,
    s: u64,
    scratch: &mut BfsScratch,
    buf: &mut Vec<u64>,
) -> (u64, u64) {
    scratch.epoch += 1;
    let epoch = scratch.epoch;
    scratch.queue.clear();
    scratch.queue.push_back(s);
    scratch.stamp[s as usize] = epoch;
    scratch.dist[s as usize] = 0;
    let mut ecc = 0u32;
    let mut far = s;
    while let Some(u) = scratch.queue.pop_front() {
        let du = scratch.dist[u as usize];
        g.out_neighbors_into(u, buf);
        if let Some(ex) = extra.get(&u) {
            buf.extend_from_slice(ex);
        }
        for &w in buf.iter() {
            if scratch.stamp[w as usize] != epoch {
                scratch.stamp[w as usize] = epoch;
                scratch.dist[w as usize] = du + 1;
                if du + 1 > ecc || (du + 1 == ecc && w < far) {
                    ecc = du + 1;
                    far = w;
                }
                scratch.queue.push_back(w);
            }
        }
    }
    (u64::from(ecc), far)
}

#[derive(Clone, Debug)]
pub struct DiameterReport {
    /// Max distance over reachable ordered pairs in the graph plus shortcuts.
    pub diameter: u64,
    pub witness: (u64, u64),
}

/// Reachability of `v` from `u` in the bare layered graph (no shortcuts),
/// by forward cone search.
pub fn reaches(g: &LayeredGraph, u: u64, v: u64) -> bool {
    if u == v {
        return true;
    }
    let lv = g.layer_of(v);
    if g.layer_of(u) >= lv {
        return false;
    }
    let mut frontier: HashSet<u64> = HashSet::from([u]);
    let mut buf = Vec::new();
    for _ in g.layer_of(u)..lv {
        let mut next = HashSet::with_capacity(frontier.len() * 2);
        for &x in &frontier {
            g.out_neighbors_into(x, &mut buf);
            next.extend(buf.iter().copied());
        }
        if next.contains(&v) {
            return true;
        }
        frontier = next;
    }
    false
}

/// Max over reachable ordered pairs of the shortest-path length in the graph
/// plus `extra` shortcut edges, by BFS from every source.
///
/// Every extra edge must already lie in the transitive closure (adding it
/// must not change reachability); violations are rejected.
pub fn diameter(g: &LayeredGraph, extra: &[(u64, u64)]) -> Result<DiameterReport> {
    let n = g.vertex_count();
    let mut grouped: HashMap<u64, Vec<u64>> = HashMap::new();
    for &(u, v) in extra {
        if u >= n || v >= n {
            return Err(ObstructorError::InvalidParam(format!(
                "shortcut ({u}, {v}) out of range"
            )));
        }
        if u == v {
            return Err(ObstructorError::InvalidParam(format!(
                "shortcut ({u}, {v}) is a self-loop"
            )));
        }
        if !reaches(g, u, v) {
            return Err(ObstructorError::InvalidParam(format!(
                "shortcut ({u}, {v}) is outside the transitive closure"
            )));
        }
        grouped.entry(u).or_default().push(v);
    }
    let per_source: Vec<(u64, u64)> = (0..n)
        .into_par_iter()
        .map_init(
            || (BfsScratch::new(n as usize), Vec::new()),
            |(scratch, buf), s| bfs_eccentricity(g, &grouped, s, scratch, buf),
        )
        .collect();
    let mut best = (0u64, (0u64, 0u64));
    for (s, &(ecc, far)) in per_source.iter().enumerate() {
        if ecc > best.0 {
            best = (ecc, (s as u64, far));
        }
    }
    Ok(DiameterReport {
        diameter: best.0,
        witness: best.1,
    })
}

/// Shortest `s -> t` distance in the layered graph plus one extra edge.
pub fn distance_with_extra_edge(g: &LayeredGraph, e: (u64, u64), s: u64, t: u64) -> Option<u64> {
    let mut dist: HashMap<u64, u64> = HashMap::from([(s, 0)]);
    let mut queue = VecDeque::from([s]);
    let mut buf = Vec::new();
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if u == t {
            return Some(du);
        }
        g.out_neighbors_into(u, &mut buf);
        if u == e.0 {
            buf.push(e.1);
        }
        for &w in &buf {
            if !dist.contains_key(&w) {
                dist.insert(w, du + 1);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Critical pairs whose unique path contains both `u` and `v` — exactly the
/// pairs whose distance the shortcut `(u, v)` can reduce.
pub fn shortcut_damage(
    g: &LayeredGraph,
    index: &PathIndex,
    u: u64,
    v: u64,
) -> Result<Vec<u32>> {
    let gap = g
        .layer_of(v)
        .checked_sub(g.layer_of(u))
        .unwrap_or(0);
    if gap < 2 {
        return Err(ObstructorError::InvalidParam(format!(
            "shortcut ({u}, {v}) has layer gap {gap} < 2"
        )));
    }
    if !reaches(g, u, v) {
        return Err(ObstructorError::InvalidParam(format!(
            "({u}, {v}) not in the transitive closure"
        )));
    }
    Ok(index.paths_through_both(u, v))
}

#[derive(Clone, Debug)]
pub struct DamageSweepReport {
    pub candidates_gap2: u64,
    pub candidates_longer: u64,
    pub max_gap2_damage: u64,
    pub max_longer_damage: u64,
    /// Hull size: the claimed gap-2 damage bound.
    pub gap2_bound: u64,
    pub gap2_within: bool,
    pub longer_within: bool,
    /// Every damaged pair's distance after adding the gap-2 shortcut,
    /// recomputed by BFS, dropped by exactly one.
    pub gap2_decrease_exactly_one: bool,
    pub bfs_recomputed: u64,
}

/// Exhaustive damage check over all on-path vertex pairs with layer gap >= 2.
///
/// Every distinct `(u, v)` is processed once (at its smallest damaged-path
/// index). For gap-2 shortcuts the per-pair distance decrease is recomputed
/// from scratch by BFS over the graph plus that single shortcut.
pub fn damage_sweep(
    g: &LayeredGraph,
    cache: &PathCache,
    index: &PathIndex,
) -> DamageSweepReport {
    let layers = g.params().layers as usize;
    let full = (g.params().layers - 1) as u64;
    #[derive(Default)]
    struct Local {
        gap2: u64,
        longer: u64,
        max2: u64,
        maxl: u64,
        decrease_ok: bool,
        bfs: u64,
    }
    let locals: Vec<Local> = (0..cache.len())
        .into_par_iter()
        .map(|idx| {
            let mut loc = Local {
                decrease_ok: true,
                ..Default::default()
            };
            let path = cache.path(idx);
            for i in 0..layers {
                for j in i + 2..layers {
                    let (u, v) = (path[i], path[j]);
                    let damaged = index.paths_through_both(u, v);
                    // first damaged path owns this candidate
                    if damaged.first() != Some(&(idx as u32)) {
                        continue;
                    }
                    let gap = (j - i) as u64;
                    if gap == 2 {
                        loc.gap2 += 1;
                        loc.max2 = loc.max2.max(damaged.len() as u64);
                        for &q in &damaged {
                            let pair = &g.pairs()[q as usize];
                            let d = distance_with_extra_edge(g, (u, v), pair.source, pair.target);
                            loc.bfs += 1;
                            if d != Some(full - 1) {
                                loc.decrease_ok = false;
                            }
                        }
                    } else {
                        loc.longer += 1;
                        loc.maxl = loc.maxl.max(damaged.len() as u64);
                    }
                }
            }
            loc
        })
        .collect();
    let mut out = DamageSweepReport {
        candidates_gap2: 0,
        candidates_longer: 0,
        max_gap2_damage: 0,
        max_longer_damage: 0,
        gap2_bound: g.hull_size(),
        gap2_within: true,
        longer_within: true,
        gap2_decrease_exactly_one: true,
        bfs_recomputed: 0,
    };
    for loc in locals {
        out.candidates_gap2 += loc.gap2;
        out.candidates_longer += loc.longer;
        out.max_gap2_damage = out.max_gap2_damage.max(loc.max2);
        out.max_longer_damage = out.max_longer_damage.max(loc.maxl);
        out.gap2_decrease_exactly_one &= loc.decrease_ok;
        out.bfs_recomputed += loc.bfs;
    }
    out.gap2_within = out.max_gap2_damage <= out.gap2_bound;
    out.longer_within = out.max_longer_damage <= 1;
    out
}

/// Simple undirected graph on vertices `0..n`, adjacency sorted ascending.
#[derive(Clone, Debug)]
pub struct UGraph {
    adj: Vec<Vec<u64>>,
}

impl UGraph {
    pub fn new(n: u64) -> Self {
        Self {
            adj: vec![Vec::new(); n as usize],
        }
    }

    pub fn n(&self) -> u64 {
        self.adj.len() as u64
    }

    pub fn add_edge(&mut self, u: u64, v: u64) {
        self.adj[u as usize].push(v);
        self.adj[v as usize].push(u);
    }

    pub fn finish(&mut self) {
        for l in &mut self.adj {
            l.sort_unstable();
            l.dedup();
        }
    }

    pub fn neighbors(&self, v: u64) -> &[u64] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u64, v: u64) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> u64 {
        self.adj.iter().map(|l| l.len() as u64).sum::<u64>() / 2
    }

    /// BFS distances from `s`; `u32::MAX` marks unreachable.
    pub fn bfs(&self, s: u64) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        dist[s as usize] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &w in self.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS avoiding a set of removed edges (canonical `(min, max)` keys).
    pub fn bfs_without(&self, s: u64, removed: &HashSet<(u64, u64)>) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        dist[s as usize] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &w in self.neighbors(u) {
                if removed.contains(&(u.min(w), u.max(w))) {
                    continue;
                }
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Candidate structure whose distances are compared against the base graph.
pub enum StretchCandidate<'a> {
    /// The base graph minus a set of canonical `(min, max)` edges.
    SpannerRemoved(&'a HashSet<(u64, u64)>),
    /// An explicit subgraph given by its edge list (validated as a subset).
    SpannerEdges(&'a [(u64, u64)]),
    /// Weighted graph on (a subset of) the base vertices.
    Emulator(&'a [(u64, u64, u64)]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stretch {
    Finite(i64),
    Infinite,
}

impl Stretch {
    pub fn at_least(&self, bound: i64) -> bool {
        match self {
            Stretch::Finite(b) => *b >= bound,
            Stretch::Infinite => true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StretchReport {
    /// Max additive stretch over the evaluated pairs.
    pub beta: Stretch,
    pub argmax: Option<(u64, u64)>,
    pub pairs_evaluated: u64,
}

/// Max additive stretch of `candidate` over `pairs`:
/// `beta = max d_candidate(s, t) - d_base(s, t)`, infinite when any pair is
/// disconnected in the candidate.
pub fn stretch(base: &UGraph, candidate: &StretchCandidate, pairs: &[(u64, u64)]) -> Result<StretchReport> {
    if let StretchCandidate::SpannerEdges(edges) = candidate {
        for &(u, v) in *edges {
            if !base.has_edge(u, v) {
                return Err(ObstructorError::InvalidParam(format!(
                    "spanner edge ({u}, {v}) is not a base edge"
                )));
            }
        }
    }
    enum CandDist {
        Unweighted(Vec<u32>),
        Weighted(HashMap<u64, u64>),
    }
    impl CandDist {
        fn get(&self, t: u64) -> Option<u64> {
            match self {
                CandDist::Unweighted(d) => {
                    let x = d[t as usize];
                    (x != u32::MAX).then_some(u64::from(x))
                }
                CandDist::Weighted(d) => d.get(&t).copied(),
            }
        }
    }

    let weighted_adj = match candidate {
        StretchCandidate::Emulator(edges) => {
            let mut adj: HashMap<u64, Vec<(u64, u64)>> = HashMap::new();
            for &(u, v, w) in *edges {
                if u >= base.n() || v >= base.n() {
                    return Err(ObstructorError::InvalidParam(format!(
                        "emulator edge ({u}, {v}) out of range"
                    )));
                }
                adj.entry(u).or_default().push((v, w));
                adj.entry(v).or_default().push((u, w));
            }
            for l in adj.values_mut() {
                l.sort_unstable();
            }
            Some(adj)
        }
        _ => None,
    };
    let subgraph = match candidate {
        StretchCandidate::SpannerEdges(edges) => {
            let mut g = UGraph::new(base.n());
            for &(u, v) in *edges {
                g.add_edge(u, v);
            }
            g.finish();
            Some(g)
        }
        _ => None,
    };

    let mut sources: Vec<u64> = pairs.iter().map(|&(s, _)| s).collect();
    sources.sort_unstable();
    sources.dedup();
    let per_source: Vec<(u64, Vec<u32>, CandDist)> = sources
        .par_iter()
        .map(|&s| {
            let base_d = base.bfs(s);
            let cand = match candidate {
                StretchCandidate::SpannerRemoved(removed) => {
                    CandDist::Unweighted(base.bfs_without(s, removed))
                }
                StretchCandidate::SpannerEdges(_) => {
                    CandDist::Unweighted(subgraph.as_ref().unwrap().bfs(s))
                }
                StretchCandidate::Emulator(_) => {
                    CandDist::Weighted(dijkstra(weighted_adj.as_ref().unwrap(), s))
                }
            };
            (s, base_d, cand)
        })
        .collect();
    let mut by_source: HashMap<u64, (Vec<u32>, CandDist)> = HashMap::new();
    for (s, base_d, cand) in per_source {
        by_source.insert(s, (base_d, cand));
    }

    let mut beta = Stretch::Finite(i64::MIN);
    let mut argmax = None;
    for &(s, t) in pairs {
        let (base_d, cand) = &by_source[&s];
        let db = base_d[t as usize];
        if db == u32::MAX {
            return Err(ObstructorError::InvalidParam(format!(
                "pair ({s}, {t}) is disconnected in the base graph"
            )));
        }
        match cand.get(t) {
            None => {
                beta = Stretch::Infinite;
                argmax = Some((s, t));
                break;
            }
            Some(d) => {
                let diff = d as i64 - i64::from(db);
                if let Stretch::Finite(b) = beta {
                    if diff > b {
                        beta = Stretch::Finite(diff);
                        argmax = Some((s, t));
                    }
                }
            }
        }
    }
    if beta == Stretch::Finite(i64::MIN) {
        beta = Stretch::Finite(0);
        argmax = None;
    }
    Ok(StretchReport {
        beta,
        argmax,
        pairs_evaluated: pairs.len() as u64,
    })
}

/// Integer-weight Dijkstra over a sparse adjacency map.
pub fn dijkstra(adj: &HashMap<u64, Vec<(u64, u64)>>, s: u64) -> HashMap<u64, u64> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut dist: HashMap<u64, u64> = HashMap::from([(s, 0)]);
    let mut heap = BinaryHeap::from([Reverse((0u64, s))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist.get(&u).is_some_and(|&best| d > best) {
            continue;
        }
        for &(v, w) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            let nd = d + w;
            if dist.get(&v).is_none_or(|&best| nd < best) {
                dist.insert(v, nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}
