//! Executable lower-bound experiments: shortcut budgets, clique-edge
//! deletions on the obstacle graph, emulator-to-spanner reduction, and the
//! parameter balancing calculator.
//!
//! Every seeded routine derives its generator from `(master seed, stream,
//! trial)`, so trials are independent, reproducible, and identical under any
//! worker count.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::base::{Family, LayeredGraph};
use crate::hull::positive_hull;
use crate::obstacle::ObstacleGraph;
use crate::oracles::{diameter, dijkstra, reaches, stretch, Stretch, StretchCandidate, UGraph};
use crate::{ObstructorError, Result};

pub fn trial_rng(master: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&master.to_le_bytes());
    seed[8..16].copy_from_slice(&stream.to_le_bytes());
    seed[16..24].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

fn sample_indices(rng: &mut ChaCha8Rng, len: usize, amount: usize) -> Vec<usize> {
    let mut idx = rand::seq::index::sample(rng, len, amount).into_vec();
    idx.sort_unstable();
    idx
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Folklore,
    Random,
    Greedy,
    File,
}

/// Shortcut edges; every entry lies in the transitive closure of the host
/// graph (validated when the diameter is evaluated).
#[derive(Clone, Debug)]
pub struct ShortcutSet {
    pub edges: Vec<(u64, u64)>,
    pub provenance: Provenance,
}

/// Forward reachable set of `u`, layer by layer.
fn reachable_cone(g: &LayeredGraph, u: u64) -> Vec<u64> {
    let mut seen: HashSet<u64> = HashSet::from([u]);
    let mut frontier = vec![u];
    let mut buf = Vec::new();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            g.out_neighbors_into(x, &mut buf);
            for &w in &buf {
                if seen.insert(w) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Sample `sample_size` vertices and shortcut every reachable ordered pair
/// inside the sample. Deterministic given the seed.
pub fn folklore_shortcut_set(g: &LayeredGraph, sample_size: u64, seed: u64) -> Result<ShortcutSet> {
    let n = g.vertex_count();
    if sample_size > n {
        return Err(ObstructorError::InvalidParam(format!(
            "folklore sample {sample_size} exceeds vertex count {n}"
        )));
    }
    let mut rng = trial_rng(seed, 2, 0);
    let mut sample = sample_indices(&mut rng, n as usize, sample_size as usize);
    sample.sort_unstable();
    let in_sample: HashSet<u64> = sample.iter().map(|&v| v as u64).collect();
    let mut edges = Vec::new();
    for &u in &sample {
        let u = u as u64;
        for v in reachable_cone(g, u) {
            if v != u && in_sample.contains(&v) {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    Ok(ShortcutSet {
        edges,
        provenance: Provenance::Folklore,
    })
}

/// All transitive-closure pairs with layer gap >= 2 (the shortcuts that can
/// shorten something), ascending.
pub fn useful_closure_pairs(g: &LayeredGraph) -> Vec<(u64, u64)> {
    let n = g.vertex_count();
    (0..n)
        .into_par_iter()
        .map(|u| {
            let lu = g.layer_of(u);
            let mut out: Vec<(u64, u64)> = reachable_cone(g, u)
                .into_iter()
                .filter(|&v| g.layer_of(v) >= lu + 2)
                .map(|v| (u, v))
                .collect();
            out.sort_unstable();
            out
        })
        .flatten_iter()
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Random,
    Greedy,
    Folklore,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::Random => "random",
            Strategy::Greedy => "greedy",
            Strategy::Folklore => "folklore",
        }
    }

    pub fn all() -> [Strategy; 3] {
        [Strategy::Random, Strategy::Greedy, Strategy::Folklore]
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Strategy::Random),
            "greedy" => Ok(Strategy::Greedy),
            "folklore" => Ok(Strategy::Folklore),
            _ => Err(ObstructorError::Parse(format!("unknown strategy {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiameterBound {
    Exact(u64),
    AtLeast(u64),
}

impl DiameterBound {
    pub fn holds(self, measured: u64) -> bool {
        match self {
            DiameterBound::Exact(x) => measured == x,
            DiameterBound::AtLeast(x) => measured >= x,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ShortcutTrialRow {
    pub strategy: &'static str,
    pub trial: u32,
    pub shortcut_count: u64,
    pub diameter: u64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ShortcutEvalReport {
    pub baseline_diameter: u64,
    pub budget: u64,
    pub pair_count: u64,
    pub bound: Option<DiameterBound>,
    pub rows: Vec<ShortcutTrialRow>,
    pub all_pass: bool,
}

/// Diameter bound implied by the family's damage lemma when fewer shortcuts
/// than critical pairs are added. Families with one-vertex intersections
/// keep the full diameter; the four-coordinate family can lose at most the
/// hull size; the generalized family carries no proven bound, so only the
/// measured value is reported.
pub fn budget_diameter_bound(g: &LayeredGraph) -> Option<DiameterBound> {
    let d = g.params().depth;
    match g.family() {
        Family::G0 => Some(DiameterBound::Exact(d)),
        Family::Galt2 => Some(DiameterBound::Exact(2 * d)),
        Family::Galt3 => Some(DiameterBound::AtLeast(
            (3 * d).saturating_sub(g.hull_size()),
        )),
        Family::GaltGen(_) => None,
    }
}

/// Measure the diameter under each strategy's shortcut set, `trials` times,
/// with the budget strictly below the critical-pair count.
pub fn eval_shortcut_budget(
    g: &LayeredGraph,
    budget: u64,
    strategies: &[Strategy],
    trials: u32,
    seed: u64,
) -> Result<ShortcutEvalReport> {
    let pair_count = g.pairs().len() as u64;
    if budget >= pair_count {
        return Err(ObstructorError::InvalidParam(format!(
            "budget {budget} must stay below the pair count {pair_count}"
        )));
    }
    let baseline = diameter(g, &[])?.diameter;
    let bound = budget_diameter_bound(g);
    let closure = useful_closure_pairs(g);
    let n = g.vertex_count();
    let mut rows = Vec::new();
    for &strategy in strategies {
        match strategy {
            Strategy::Random => {
                for trial in 0..trials {
                    let mut rng = trial_rng(seed, 0, u64::from(trial));
                    let take = (budget as usize).min(closure.len());
                    let edges: Vec<(u64, u64)> = sample_indices(&mut rng, closure.len(), take)
                        .into_iter()
                        .map(|i| closure[i])
                        .collect();
                    rows.push(make_row(g, strategy, trial, &edges, bound)?);
                }
            }
            Strategy::Greedy => {
                // descending layer gap, ties by vertex id; deterministic, so
                // one evaluation covers every trial
                let mut ordered = closure.clone();
                ordered.sort_by_key(|&(u, v)| {
                    (std::cmp::Reverse(g.layer_of(v) - g.layer_of(u)), u, v)
                });
                ordered.truncate(budget as usize);
                let row = make_row(g, strategy, 0, &ordered, bound)?;
                for trial in 0..trials {
                    rows.push(ShortcutTrialRow {
                        trial,
                        ..row.clone()
                    });
                }
            }
            Strategy::Folklore => {
                let sample_size = (n as f64).sqrt().ceil() as u64;
                for trial in 0..trials {
                    let sub_seed = seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(u64::from(trial) + 1));
                    let set = folklore_shortcut_set(g, sample_size.min(n), sub_seed)?;
                    let mut edges = set.edges;
                    edges.truncate(budget as usize);
                    rows.push(make_row(g, strategy, trial, &edges, bound)?);
                }
            }
        }
    }
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(ShortcutEvalReport {
        baseline_diameter: baseline,
        budget,
        pair_count,
        bound,
        rows,
        all_pass,
    })
}

fn make_row(
    g: &LayeredGraph,
    strategy: Strategy,
    trial: u32,
    edges: &[(u64, u64)],
    bound: Option<DiameterBound>,
) -> Result<ShortcutTrialRow> {
    let report = diameter(g, edges)?;
    Ok(ShortcutTrialRow {
        strategy: strategy.label(),
        trial,
        shortcut_count: edges.len() as u64,
        diameter: report.diameter,
        pass: bound.map_or(true, |b| b.holds(report.diameter)),
    })
}

/// Clique-edge deletion plans for the obstacle graph.
#[derive(Clone, Debug)]
pub enum DeletionPlan {
    /// Delete `delete_count` (default `D`) clique edges from one seeded
    /// critical path.
    PerPath { delete_count: Option<u64> },
    /// Delete `count` clique edges sampled over the whole graph.
    RandomClique { count: u64 },
    /// Delete exactly these edges; rejected unless all are clique edges.
    CliqueEdges(Vec<(u64, u64)>),
}

#[derive(Clone, Debug)]
pub struct SpannerTrialRow {
    pub trial: u32,
    pub deleted: u64,
    /// Index of the designated path for per-path plans.
    pub target_pair: Option<usize>,
    /// Additive stretch of the designated pair, when one exists.
    pub designated_stretch: Option<i64>,
    /// Max loss of clique edges over a single critical path.
    pub max_path_loss: u64,
    pub beta: Stretch,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct SpannerAdversaryReport {
    /// `2D`, the stretch the deletion lemma forces.
    pub bound: u64,
    pub mode: &'static str,
    pub rows: Vec<SpannerTrialRow>,
    pub all_pass: bool,
}

/// Evaluate clique-edge deletion plans. Per-path plans must force additive
/// stretch at least `2D` on the designated pair; the full stretch report is
/// computed when the pair set is within `full_pairs_limit`, otherwise beta
/// is reported over the designated pair alone (a lower bound on the true
/// max).
pub fn spanner_adversary(
    gobs: &ObstacleGraph,
    plan: &DeletionPlan,
    trials: u32,
    seed: u64,
    full_pairs_limit: u64,
) -> Result<SpannerAdversaryReport> {
    let d = gobs.depth();
    let bound = 2 * d;
    let pair_endpoints = gobs.pair_endpoints();
    let full_eval = pair_endpoints.len() as u64 <= full_pairs_limit;
    let mode = if full_eval { "exhaustive" } else { "sampled" };
    // clique edge -> containing critical path (at most one by the
    // intersection bound; verified cheaply here)
    let mut edge_owner: HashMap<(u64, u64), u32> = HashMap::new();
    for idx in 0..gobs.pairs().len() {
        for e in gobs.path_clique_edges(idx) {
            let prev = edge_owner.insert(e, idx as u32);
            debug_assert!(prev.is_none(), "clique edge on two critical paths");
        }
    }

    let mut rows = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, 10, u64::from(trial));
        let (removed, target_pair): (BTreeSet<(u64, u64)>, Option<usize>) = match plan {
            DeletionPlan::PerPath { delete_count } => {
                let idx = rand::Rng::random_range(&mut rng, 0..gobs.pairs().len());
                let path_edges = gobs.path_clique_edges(idx);
                let dc = delete_count.unwrap_or(d).min(path_edges.len() as u64) as usize;
                let removed = sample_indices(&mut rng, path_edges.len(), dc)
                    .into_iter()
                    .map(|i| path_edges[i])
                    .collect();
                (removed, Some(idx))
            }
            DeletionPlan::RandomClique { count } => {
                let all = gobs.clique_edge_list();
                if *count > all.len() as u64 {
                    return Err(ObstructorError::InvalidParam(format!(
                        "cannot delete {count} of {} clique edges",
                        all.len()
                    )));
                }
                let removed = sample_indices(&mut rng, all.len(), *count as usize)
                    .into_iter()
                    .map(|i| all[i])
                    .collect();
                (removed, None)
            }
            DeletionPlan::CliqueEdges(list) => {
                let mut removed = BTreeSet::new();
                for &(u, v) in list {
                    if !gobs.is_clique_edge(u, v) {
                        return Err(ObstructorError::InvalidParam(format!(
                            "({u}, {v}) is not a clique edge"
                        )));
                    }
                    removed.insert((u.min(v), u.max(v)));
                }
                (removed, None)
            }
        };

        let removed_set: HashSet<(u64, u64)> = removed.iter().copied().collect();
        let mut losses: HashMap<u32, u64> = HashMap::new();
        for e in &removed {
            if let Some(&owner) = edge_owner.get(e) {
                *losses.entry(owner).or_insert(0) += 1;
            }
        }
        let max_path_loss = losses.values().copied().max().unwrap_or(0);

        let designated_stretch = target_pair.map(|idx| {
            let (s, t) = (gobs.pairs()[idx].source, gobs.pairs()[idx].target);
            let base_d = gobs.graph().bfs(s)[t as usize];
            let cand_d = gobs.graph().bfs_without(s, &removed_set)[t as usize];
            if cand_d == u32::MAX {
                i64::MAX
            } else {
                i64::from(cand_d) - i64::from(base_d)
            }
        });

        let eval_pairs: Vec<(u64, u64)> = if full_eval {
            pair_endpoints.clone()
        } else {
            match target_pair {
                Some(idx) => vec![pair_endpoints[idx]],
                None => {
                    let take = full_pairs_limit.min(pair_endpoints.len() as u64) as usize;
                    sample_indices(&mut rng, pair_endpoints.len(), take)
                        .into_iter()
                        .map(|i| pair_endpoints[i])
                        .collect()
                }
            }
        };
        let report = stretch(
            gobs.graph(),
            &StretchCandidate::SpannerRemoved(&removed_set),
            &eval_pairs,
        )?;
        let pass = match plan {
            DeletionPlan::PerPath { .. } => {
                designated_stretch.is_some_and(|s| s >= bound as i64)
            }
            _ => true,
        };
        rows.push(SpannerTrialRow {
            trial,
            deleted: removed.len() as u64,
            target_pair,
            designated_stretch: designated_stretch.filter(|&s| s != i64::MAX),
            max_path_loss,
            beta: report.beta,
            pass,
        });
    }
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(SpannerAdversaryReport {
        bound,
        mode,
        rows,
        all_pass,
    })
}

/// Weighted emulator on a subset of the obstacle-graph vertices.
#[derive(Clone, Debug)]
pub struct Emulator {
    pub edges: Vec<(u64, u64, u64)>,
}

/// Normalize weights to exact distances. Weights below the true distance
/// are invalid; weights above it are clamped down (losing nothing, since a
/// valid emulator edge is never cheaper to route than the graph itself).
pub fn normalize_emulator(gobs: &ObstacleGraph, edges: &[(u64, u64, u64)]) -> Result<Emulator> {
    let mut by_source: HashMap<u64, Vec<u32>> = HashMap::new();
    let mut out = Vec::with_capacity(edges.len());
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    for &(u, v, w) in edges {
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            continue;
        }
        let dist = by_source
            .entry(key.0)
            .or_insert_with(|| gobs.graph().bfs(key.0));
        let d = dist[key.1 as usize];
        if d == u32::MAX {
            return Err(ObstructorError::InvalidParam(format!(
                "emulator edge ({u}, {v}) joins disconnected vertices"
            )));
        }
        if w < u64::from(d) {
            return Err(ObstructorError::InvalidParam(format!(
                "emulator edge ({u}, {v}) weight {w} is below the true distance {d}"
            )));
        }
        out.push((key.0, key.1, u64::from(d)));
    }
    out.sort_unstable();
    Ok(Emulator { edges: out })
}

/// One exact weighted edge per critical pair: the canonical zero-stretch
/// emulator.
pub fn exact_pair_emulator(gobs: &ObstacleGraph) -> Result<Emulator> {
    let raw: Vec<(u64, u64, u64)> = gobs
        .pairs()
        .iter()
        .map(|p| (p.source, p.target, u64::from(u32::MAX - 1)))
        .collect();
    normalize_emulator(gobs, &raw)
}

/// Seeded random emulator: all pair endpoints plus `extra_vertices` sampled
/// vertices; optionally a direct exact edge per critical pair; plus
/// `extra_edges` random connections with over-inflated weights that the
/// normalization clamps back down.
pub fn random_emulator(
    gobs: &ObstacleGraph,
    extra_vertices: u64,
    extra_edges: u64,
    include_pair_edges: bool,
    seed: u64,
) -> Result<Emulator> {
    let mut rng = trial_rng(seed, 20, 0);
    let n = gobs.vertex_count();
    let mut pool: BTreeSet<u64> = gobs
        .pairs()
        .iter()
        .flat_map(|p| [p.source, p.target])
        .collect();
    for i in sample_indices(&mut rng, n as usize, (extra_vertices as usize).min(n as usize)) {
        pool.insert(i as u64);
    }
    let pool: Vec<u64> = pool.into_iter().collect();
    let mut raw: Vec<(u64, u64, u64)> = Vec::new();
    if include_pair_edges {
        for p in gobs.pairs() {
            raw.push((p.source, p.target, u64::from(u32::MAX - 1)));
        }
    }
    let mut attempts = 0;
    let mut added = 0;
    while added < extra_edges && attempts < extra_edges * 20 {
        attempts += 1;
        let a = pool[rand::Rng::random_range(&mut rng, 0..pool.len())];
        let b = pool[rand::Rng::random_range(&mut rng, 0..pool.len())];
        if a == b {
            continue;
        }
        raw.push((a.min(b), a.max(b), u64::from(u32::MAX - 1)));
        added += 1;
    }
    normalize_emulator(gobs, &raw)
}

#[derive(Clone, Debug)]
pub struct EmulatorReductionReport {
    pub emulator_edges: u64,
    pub pairs_total: u64,
    pub pairs_connected: u64,
    /// Every pair connected in the emulator keeps its emulator distance in
    /// the output spanner, exactly.
    pub distances_preserved: bool,
    pub preservation_witness: Option<(u64, u64)>,
    /// Pairs disconnected in the emulator that the union subgraph happens to
    /// connect anyway (informational).
    pub extra_connected: u64,
    pub spanner_edges: u64,
    pub clique_edges: u64,
    pub clique_bound: u64,
    pub within_clique_bound: bool,
}

/// Expand each pair's emulator shortest path edge-by-edge into obstacle-graph
/// shortest paths (choosing, among shortest, one with the fewest clique
/// edges) and return the union subgraph with its evaluation report.
pub fn emulator_to_spanner(
    gobs: &ObstacleGraph,
    em: &Emulator,
) -> Result<(Vec<(u64, u64)>, EmulatorReductionReport)> {
    let em = normalize_emulator(gobs, &em.edges)?;
    let mut adj: HashMap<u64, Vec<(u64, u64)>> = HashMap::new();
    for &(u, v, w) in &em.edges {
        adj.entry(u).or_default().push((v, w));
        adj.entry(v).or_default().push((u, w));
    }
    for l in adj.values_mut() {
        l.sort_unstable();
    }

    let mut dist_cache: HashMap<u64, HashMap<u64, u64>> = HashMap::new();
    let mut expansion_cache: HashMap<(u64, u64), Vec<(u64, u64)>> = HashMap::new();
    let mut spanner: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut em_dist: Vec<Option<u64>> = Vec::with_capacity(gobs.pairs().len());

    for pair in gobs.pairs() {
        let (s, t) = (pair.source, pair.target);
        if !dist_cache.contains_key(&s) {
            dist_cache.insert(s, dijkstra(&adj, s));
        }
        let ds = &dist_cache[&s];
        let Some(&dt) = ds.get(&t) else {
            em_dist.push(None);
            continue;
        };
        em_dist.push(Some(dt));
        // deterministic shortest-route extraction: walk back from t picking
        // the smallest predecessor that closes the distance equation
        let mut route = vec![t];
        let mut cur = t;
        while cur != s {
            let mut next = None;
            for &(w, wt) in adj.get(&cur).map(Vec::as_slice).unwrap_or(&[]) {
                if let Some(&dw) = ds.get(&w) {
                    if dw + wt == ds[&cur] && next.is_none_or(|b| w < b) {
                        next = Some(w);
                    }
                }
            }
            cur = next.expect("route extraction follows dijkstra distances");
            route.push(cur);
        }
        route.reverse();
        for hop in route.windows(2) {
            let key = (hop[0].min(hop[1]), hop[0].max(hop[1]));
            let edges = expansion_cache
                .entry(key)
                .or_insert_with(|| min_clique_shortest_path(gobs, key.0, key.1));
            spanner.extend(edges.iter().copied());
        }
    }

    let spanner_edges: Vec<(u64, u64)> = spanner.into_iter().collect();
    let mut sp = UGraph::new(gobs.vertex_count());
    for &(u, v) in &spanner_edges {
        sp.add_edge(u, v);
    }
    sp.finish();

    let mut preserved = true;
    let mut witness = None;
    let mut connected = 0;
    let mut extra_connected = 0;
    let mut sp_cache: HashMap<u64, Vec<u32>> = HashMap::new();
    for (idx, pair) in gobs.pairs().iter().enumerate() {
        let (s, t) = (pair.source, pair.target);
        let dsp = sp_cache.entry(s).or_insert_with(|| sp.bfs(s))[t as usize];
        match em_dist[idx] {
            Some(de) => {
                connected += 1;
                if u64::from(dsp) != de {
                    preserved = false;
                    witness.get_or_insert((s, t));
                }
            }
            None => {
                if dsp != u32::MAX {
                    extra_connected += 1;
                }
            }
        }
    }
    let clique_edges = spanner_edges
        .iter()
        .filter(|&&(u, v)| gobs.is_clique_edge(u, v))
        .count() as u64;
    let clique_bound = 2 * gobs.depth() * em.edges.len() as u64;
    let report = EmulatorReductionReport {
        emulator_edges: em.edges.len() as u64,
        pairs_total: gobs.pairs().len() as u64,
        pairs_connected: connected,
        distances_preserved: preserved,
        preservation_witness: witness,
        extra_connected,
        spanner_edges: spanner_edges.len() as u64,
        clique_edges,
        clique_bound,
        within_clique_bound: clique_edges <= clique_bound,
    };
    Ok((spanner_edges, report))
}

/// Among shortest `a`-`b` paths, pick one with the fewest clique edges
/// (deterministically) and return its edge set.
fn min_clique_shortest_path(gobs: &ObstacleGraph, a: u64, b: u64) -> Vec<(u64, u64)> {
    let g = gobs.graph();
    let dist = g.bfs(a);
    debug_assert_ne!(dist[b as usize], u32::MAX);
    let mut order: Vec<u64> = (0..g.n())
        .filter(|&v| dist[v as usize] != u32::MAX && dist[v as usize] <= dist[b as usize])
        .collect();
    order.sort_unstable_by_key(|&v| (dist[v as usize], v));
    let mut clique_cost: HashMap<u64, u64> = HashMap::from([(a, 0)]);
    for &v in &order {
        if v == a {
            continue;
        }
        let dv = dist[v as usize];
        let mut best = None;
        for &w in g.neighbors(v) {
            if dist[w as usize] + 1 == dv {
                if let Some(&cw) = clique_cost.get(&w) {
                    let c = cw + u64::from(gobs.is_clique_edge(w, v));
                    if best.is_none_or(|b| c < b) {
                        best = Some(c);
                    }
                }
            }
        }
        if let Some(c) = best {
            clique_cost.insert(v, c);
        }
    }
    let mut edges = Vec::new();
    let mut cur = b;
    while cur != a {
        let dv = dist[cur as usize];
        let cc = clique_cost[&cur];
        let mut pick = None;
        for &w in g.neighbors(cur) {
            if dist[w as usize] + 1 == dv {
                if let Some(&cw) = clique_cost.get(&w) {
                    if cw + u64::from(gobs.is_clique_edge(w, cur)) == cc
                        && pick.is_none_or(|b| w < b)
                    {
                        pick = Some(w);
                    }
                }
            }
        }
        let w = pick.expect("predecessor exists on a shortest path");
        edges.push((w.min(cur), w.max(cur)));
        cur = w;
    }
    edges
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Application {
    ShortcutGalt2,
    ShortcutGalt3,
    Spanner,
    Emulator,
}

impl Application {
    pub fn label(self) -> &'static str {
        match self {
            Application::ShortcutGalt2 => "shortcut-galt2",
            Application::ShortcutGalt3 => "shortcut-galt3",
            Application::Spanner => "spanner",
            Application::Emulator => "emulator",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "shortcut-galt2" => Ok(Application::ShortcutGalt2),
            "shortcut-galt3" => Ok(Application::ShortcutGalt3),
            "spanner" => Ok(Application::Spanner),
            "emulator" => Ok(Application::Emulator),
            _ => Err(ObstructorError::Parse(format!("unknown application {s}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParamSuggestion {
    pub application: Application,
    pub depth: u64,
    pub radius: u64,
    pub predicted_vertices: u128,
    /// Lower-bound exponent the balanced family realizes.
    pub exponent: Ratio<i64>,
}

/// Balance the hull radius against the depth for each application and
/// predict the resulting instance size from the exact count formulas.
pub fn suggest_params(application: Application, depth: u64) -> Result<ParamSuggestion> {
    if depth < 1 {
        return Err(ObstructorError::InvalidParam(format!(
            "depth must be >= 1, got {depth}"
        )));
    }
    let df = depth as f64;
    // nearest integer, floored at 1
    let radius = match application {
        Application::ShortcutGalt2 | Application::Spanner => (df.powf(1.5).round() as u64).max(1),
        Application::ShortcutGalt3 => (df.powf(0.75).round() as u64).max(1),
        Application::Emulator => depth
            .checked_pow(3)
            .ok_or_else(|| ObstructorError::InvalidParam("depth^3 overflow".into()))?,
    };
    let hull = positive_hull(radius as i64)?.len() as u128;
    let d = u128::from(depth);
    let l = 3 * d * u128::from(radius);
    let predicted_vertices = match application {
        Application::ShortcutGalt2 => (2 * d + 1) * l.pow(3),
        Application::ShortcutGalt3 => (3 * d + 1) * l.pow(4),
        Application::Spanner | Application::Emulator => {
            2 * l.pow(3)
                + (2 * d - 1) * l.pow(3) * 2 * hull
                + 2 * d * l.pow(3) * hull * (d - 1)
        }
    };
    let exponent = match application {
        Application::ShortcutGalt2 => Ratio::new(2, 17),
        Application::ShortcutGalt3 => Ratio::new(1, 8),
        Application::Spanner => Ratio::new(2, 21),
        Application::Emulator => Ratio::new(2, 29),
    };
    Ok(ParamSuggestion {
        application,
        depth,
        radius,
        predicted_vertices,
        exponent,
    })
}
