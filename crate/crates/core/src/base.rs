//! Layered digraph carrier shared by the base family and all alternation
//! products.
//!
//! A family with `k` coordinates lives on `(k-1)*D + 1` layers over
//! `(Z/LZ)^k` with `L = 3*D*r`. Step `i` acts on the coordinate pair
//! `(p, p+1)` where `p = i mod (k-1)`, advancing it by a hull vector.
//! The two-coordinate case (a single block, every step the same) is the
//! base graph; three and four coordinates are the overlapping products.
//!
//! Vertex id codec (frozen; all files use it):
//! `id = layer * L^k + sum_j x[j] * L^j`, coordinates little-endian.

use crate::hull::{positive_hull, HullSet};
use crate::{ObstructorError, Result};

pub const DEFAULT_VERTEX_BUDGET: u64 = 2_000_000;
pub const DEFAULT_EXPLICIT_ADJACENCY_LIMIT: u64 = 1_000_000;

pub const DEFAULT_PAIR_BUDGET: u64 = 10_000_000;

/// Resource caps enforced at build time.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Hard cap on the vertex count; builds above it are rejected.
    pub max_vertices: u64,
    /// Hard cap on the critical-pair count (`L^k * h^(k-1)` grows much
    /// faster than the vertex count for large k).
    pub max_pairs: u64,
    /// Above this vertex count adjacency is generated on demand from the
    /// edge rule instead of being stored.
    pub explicit_adjacency_limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_vertices: DEFAULT_VERTEX_BUDGET,
            max_pairs: DEFAULT_PAIR_BUDGET,
            explicit_adjacency_limit: DEFAULT_EXPLICIT_ADJACENCY_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    G0,
    Galt2,
    Galt3,
    GaltGen(u32),
}

impl Family {
    pub fn coord_count(self) -> u32 {
        match self {
            Family::G0 => 2,
            Family::Galt2 => 3,
            Family::Galt3 => 4,
            Family::GaltGen(k) => k,
        }
    }

    /// Steps per depth unit: the layer count is `step_rounds() * D + 1`.
    pub fn step_rounds(self) -> u64 {
        u64::from(self.coord_count()) - 1
    }

    pub fn tag(self) -> String {
        match self {
            Family::G0 => "G0".into(),
            Family::Galt2 => "GALT2".into(),
            Family::Galt3 => "GALT3".into(),
            Family::GaltGen(k) => format!("GALTGEN({k})"),
        }
    }

    pub fn parse_tag(s: &str) -> Result<Self> {
        match s {
            "G0" => Ok(Family::G0),
            "GALT2" => Ok(Family::Galt2),
            "GALT3" => Ok(Family::Galt3),
            _ => {
                if let Some(inner) = s.strip_prefix("GALTGEN(").and_then(|t| t.strip_suffix(')')) {
                    let k: u32 = inner
                        .parse()
                        .map_err(|_| ObstructorError::Parse(format!("bad family tag {s}")))?;
                    if k < 3 {
                        return Err(ObstructorError::Parse(format!(
                            "generalized family needs k >= 3, got {k}"
                        )));
                    }
                    Ok(Family::GaltGen(k))
                } else {
                    Err(ObstructorError::Parse(format!("unknown family tag {s}")))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphParams {
    pub depth: u64,
    pub radius: u64,
    pub coord_count: u32,
    /// Modulus `L = 3 * depth * radius`.
    pub modulus: u64,
    /// `(coord_count - 1) * depth + 1`.
    pub layers: u64,
}

/// Source/target pair reproduced from a base point and a generator tuple of
/// hull vectors, one per step residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    pub source: u64,
    pub target: u64,
    pub base: Vec<u64>,
    pub gammas: Vec<(u64, u64)>,
}

/// A critical pair together with its reconstructed vertex sequence, one
/// vertex per layer.
#[derive(Clone, Debug)]
pub struct CriticalPath {
    pub pair: CriticalPair,
    pub vertices: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u64>,
}

impl Csr {
    pub fn from_edges(n: u64, edges: &mut Vec<(u64, u64)>) -> Self {
        edges.sort_unstable();
        let mut offsets = vec![0usize; n as usize + 1];
        for &(u, _) in edges.iter() {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n as usize {
            offsets[i + 1] += offsets[i];
        }
        Self {
            offsets,
            targets: edges.iter().map(|&(_, v)| v).collect(),
        }
    }

    pub fn out(&self, v: u64) -> &[u64] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn edge_count(&self) -> u64 {
        self.targets.len() as u64
    }
}

#[derive(Clone, Debug)]
enum Adjacency {
    Explicit(Csr),
    Rule,
}

#[derive(Clone, Debug)]
pub struct LayeredGraph {
    family: Family,
    params: GraphParams,
    hull: HullSet,
    steps: Vec<(u64, u64)>,
    pow: Vec<u64>,
    adjacency: Adjacency,
    pairs: Vec<CriticalPair>,
}

impl LayeredGraph {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn hull(&self) -> &HullSet {
        &self.hull
    }

    pub fn hull_size(&self) -> u64 {
        self.steps.len() as u64
    }

    /// Hull vectors in ascending first-coordinate order, reduced to `u64`.
    pub fn steps(&self) -> &[(u64, u64)] {
        &self.steps
    }

    pub fn vertex_count(&self) -> u64 {
        self.params.layers * self.pow[self.params.coord_count as usize]
    }

    /// Vertices per layer, `L^k`.
    pub fn per_layer(&self) -> u64 {
        self.pow[self.params.coord_count as usize]
    }

    pub fn edge_count(&self) -> u64 {
        match &self.adjacency {
            Adjacency::Explicit(csr) => csr.edge_count(),
            Adjacency::Rule => {
                (self.params.layers - 1)
                    * self.pow[self.params.coord_count as usize]
                    * self.hull_size()
            }
        }
    }

    pub fn pairs(&self) -> &[CriticalPair] {
        &self.pairs
    }

    pub fn has_explicit_adjacency(&self) -> bool {
        matches!(self.adjacency, Adjacency::Explicit(_))
    }

    pub fn vertex_id(&self, layer: u64, coords: &[u64]) -> u64 {
        let k = self.params.coord_count as usize;
        debug_assert_eq!(coords.len(), k);
        let mut id = layer * self.pow[k];
        for (j, &c) in coords.iter().enumerate() {
            id += c * self.pow[j];
        }
        id
    }

    pub fn layer_of(&self, v: u64) -> u64 {
        v / self.pow[self.params.coord_count as usize]
    }

    pub fn coords_of(&self, v: u64) -> Vec<u64> {
        let k = self.params.coord_count as usize;
        let mut x = v % self.pow[k];
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            out.push(x % self.params.modulus);
            x /= self.params.modulus;
        }
        out
    }

    /// Coordinate block advanced by steps leaving `layer`.
    pub fn acting_index(&self, layer: u64) -> usize {
        (layer % (u64::from(self.params.coord_count) - 1)) as usize
    }

    /// Out-neighbors of `v`, ascending, appended to `buf`.
    pub fn out_neighbors_into(&self, v: u64, buf: &mut Vec<u64>) {
        buf.clear();
        match &self.adjacency {
            Adjacency::Explicit(csr) => buf.extend_from_slice(csr.out(v)),
            Adjacency::Rule => {
                self.rule_out_neighbors(v, buf);
                buf.sort_unstable();
            }
        }
    }

    pub fn out_neighbors(&self, v: u64) -> Vec<u64> {
        let mut buf = Vec::new();
        self.out_neighbors_into(v, &mut buf);
        buf
    }

    fn rule_out_neighbors(&self, v: u64, buf: &mut Vec<u64>) {
        let layer = self.layer_of(v);
        if layer + 1 >= self.params.layers {
            return;
        }
        let l = self.params.modulus;
        let p = self.acting_index(layer);
        let coords = self.coords_of(v);
        for &(g1, g2) in &self.steps {
            let mut y = coords.clone();
            y[p] = (y[p] + g1) % l;
            y[p + 1] = (y[p + 1] + g2) % l;
            buf.push(self.vertex_id(layer + 1, &y));
        }
    }

    /// In-neighbors under the edge rule (independent of any loaded edge list).
    pub fn rule_in_neighbors(&self, v: u64) -> Vec<u64> {
        let layer = self.layer_of(v);
        if layer == 0 {
            return Vec::new();
        }
        let l = self.params.modulus;
        let p = self.acting_index(layer - 1);
        let coords = self.coords_of(v);
        let mut out = Vec::with_capacity(self.steps.len());
        for &(g1, g2) in &self.steps {
            let mut x = coords.clone();
            x[p] = (x[p] + l - g1 % l) % l;
            x[p + 1] = (x[p + 1] + l - g2 % l) % l;
            out.push(self.vertex_id(layer - 1, &x));
        }
        out.sort_unstable();
        out
    }

    pub fn edge_exists(&self, u: u64, v: u64) -> bool {
        match &self.adjacency {
            Adjacency::Explicit(csr) => csr.out(u).binary_search(&v).is_ok(),
            Adjacency::Rule => self.rule_edge_exists(u, v),
        }
    }

    fn rule_edge_exists(&self, u: u64, v: u64) -> bool {
        self.step_of_edge(u, v).is_some()
    }

    /// Index into [`Self::steps`] of the hull vector realizing edge `(u, v)`,
    /// derived arithmetically from the edge rule.
    pub fn step_of_edge(&self, u: u64, v: u64) -> Option<usize> {
        let lu = self.layer_of(u);
        if self.layer_of(v) != lu + 1 || lu + 1 >= self.params.layers {
            return None;
        }
        let l = self.params.modulus;
        let p = self.acting_index(lu);
        let cu = self.coords_of(u);
        let cv = self.coords_of(v);
        for (j, (&a, &b)) in cu.iter().zip(cv.iter()).enumerate() {
            if j != p && j != p + 1 && a != b {
                return None;
            }
        }
        let d1 = (cv[p] + l - cu[p]) % l;
        let d2 = (cv[p + 1] + l - cu[p + 1]) % l;
        self.steps.binary_search(&(d1, d2)).ok()
    }

    /// Reconstruct and validate the closed-form critical path of `pair`.
    ///
    /// Rejects generators outside the hull, endpoint mismatches, and (for
    /// loaded graphs) steps whose edge is absent from the adjacency.
    pub fn critical_path(&self, pair: &CriticalPair) -> Result<CriticalPath> {
        let k = self.params.coord_count as usize;
        if pair.base.len() != k || pair.gammas.len() != k - 1 {
            return Err(ObstructorError::InvalidPair(format!(
                "generator arity mismatch for source {}",
                pair.source
            )));
        }
        for &(g1, g2) in &pair.gammas {
            if !self.hull.contains_point((g1 as i64, g2 as i64)) {
                return Err(ObstructorError::NotInHull(g1, g2));
            }
        }
        if self.vertex_id(0, &pair.base) != pair.source {
            return Err(ObstructorError::InvalidPair(format!(
                "base point does not encode source {}",
                pair.source
            )));
        }
        let vertices = self.path_vertices(pair);
        if *vertices.last().unwrap() != pair.target {
            return Err(ObstructorError::InvalidPair(format!(
                "generator tuple does not reproduce target {}",
                pair.target
            )));
        }
        for w in vertices.windows(2) {
            if !self.edge_exists(w[0], w[1]) {
                return Err(ObstructorError::InvalidPair(format!(
                    "missing edge {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(CriticalPath {
            pair: pair.clone(),
            vertices,
        })
    }

    /// The closed-form vertex sequence of `pair`, without validation.
    pub fn path_vertices(&self, pair: &CriticalPair) -> Vec<u64> {
        let l = self.params.modulus;
        let mut coords = pair.base.clone();
        let mut out = Vec::with_capacity(self.params.layers as usize);
        out.push(pair.source);
        for i in 0..self.params.layers - 1 {
            let p = self.acting_index(i);
            let (g1, g2) = pair.gammas[p];
            coords[p] = (coords[p] + g1) % l;
            coords[p + 1] = (coords[p + 1] + g2) % l;
            out.push(self.vertex_id(i + 1, &coords));
        }
        out
    }
}

/// Target coordinates of the pair generated by `base` and `gammas`:
/// each coordinate receives `depth` copies of the second component of the
/// previous block's vector and of the first component of its own block's.
pub fn pair_target_coords(
    base: &[u64],
    gammas: &[(u64, u64)],
    depth: u64,
    modulus: u64,
) -> Vec<u64> {
    let k = base.len();
    let mut y = base.to_vec();
    for (j, yj) in y.iter_mut().enumerate() {
        if j >= 1 {
            *yj = (*yj + depth * gammas[j - 1].1) % modulus;
        }
        if j + 1 < k {
            *yj = (*yj + depth * gammas[j].0) % modulus;
        }
    }
    y
}

/// Build any family member over `(Z/LZ)^k` with its critical pairs.
pub fn build_family(
    family: Family,
    depth: u64,
    radius: u64,
    budget: &Budget,
) -> Result<LayeredGraph> {
    if depth < 1 || radius < 1 {
        return Err(ObstructorError::InvalidParam(format!(
            "depth and radius must be >= 1, got D={depth} r={radius}"
        )));
    }
    let k = family.coord_count();
    if k < 2 {
        return Err(ObstructorError::InvalidParam(format!(
            "family needs at least 2 coordinates, got {k}"
        )));
    }
    let modulus = 3u64
        .checked_mul(depth)
        .and_then(|x| x.checked_mul(radius))
        .ok_or_else(|| ObstructorError::InvalidParam("modulus overflow".into()))?;
    let layers = family.step_rounds() * depth + 1;

    let mut pow = Vec::with_capacity(k as usize + 1);
    pow.push(1u64);
    for _ in 0..k {
        let next = pow
            .last()
            .unwrap()
            .checked_mul(modulus)
            .ok_or_else(|| ObstructorError::InvalidParam("coordinate space overflow".into()))?;
        pow.push(next);
    }
    let per_layer = pow[k as usize];
    let n = u128::from(layers) * u128::from(per_layer);
    if n > u128::from(budget.max_vertices) {
        return Err(ObstructorError::BudgetExceeded {
            needed: n,
            budget: budget.max_vertices,
        });
    }

    let hull = positive_hull(radius as i64)?;
    let pair_count = (0..k - 1).try_fold(u128::from(per_layer), |acc, _| {
        acc.checked_mul(hull.len() as u128)
    });
    match pair_count {
        Some(p) if p <= u128::from(budget.max_pairs) => {}
        _ => {
            return Err(ObstructorError::BudgetExceeded {
                needed: pair_count.unwrap_or(u128::MAX),
                budget: budget.max_pairs,
            })
        }
    }
    let steps: Vec<(u64, u64)> = hull
        .points()
        .iter()
        .map(|&(x, y)| (x as u64, y as u64))
        .collect();

    let mut g = LayeredGraph {
        family,
        params: GraphParams {
            depth,
            radius,
            coord_count: k,
            modulus,
            layers,
        },
        hull,
        steps,
        pow,
        adjacency: Adjacency::Rule,
        pairs: Vec::new(),
    };
    g.pairs = generate_pairs(&g);
    if g.vertex_count() <= budget.explicit_adjacency_limit {
        g.adjacency = Adjacency::Explicit(materialize_adjacency(&g));
    }
    Ok(g)
}

fn generate_pairs(g: &LayeredGraph) -> Vec<CriticalPair> {
    let k = g.params.coord_count as usize;
    let h = g.steps.len();
    let per_layer = g.pow[k];
    let last_layer = g.params.layers - 1;
    let mut pairs = Vec::with_capacity(per_layer as usize * h.pow(k as u32 - 1).max(1));
    let mut pick = vec![0usize; k - 1];
    for x_id in 0..per_layer {
        let base = g.coords_of(x_id);
        pick.fill(0);
        loop {
            let gammas: Vec<(u64, u64)> = pick.iter().map(|&i| g.steps[i]).collect();
            let y = pair_target_coords(&base, &gammas, g.params.depth, g.params.modulus);
            pairs.push(CriticalPair {
                source: x_id,
                target: g.vertex_id(last_layer, &y),
                base: base.clone(),
                gammas,
            });
            // odometer over (V2+)^{k-1}
            let mut j = k - 1;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                pick[j] += 1;
                if pick[j] < h {
                    break;
                }
                pick[j] = 0;
                if j == 0 {
                    break;
                }
            }
            if pick.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    pairs
}

fn materialize_adjacency(g: &LayeredGraph) -> Csr {
    let n = g.vertex_count();
    let mut edges = Vec::with_capacity(g.edge_count() as usize);
    let mut buf = Vec::new();
    for v in 0..n {
        buf.clear();
        g.rule_out_neighbors(v, &mut buf);
        for &w in &buf {
            edges.push((v, w));
        }
    }
    Csr::from_edges(n, &mut edges)
}

/// Assemble a graph from parsed parts (a loaded edge list and pair list).
/// The adjacency is taken verbatim from `edges`; verification against the
/// edge rule happens downstream.
pub fn from_parts(
    family: Family,
    depth: u64,
    radius: u64,
    mut edges: Vec<(u64, u64)>,
    pairs: Vec<CriticalPair>,
    budget: &Budget,
) -> Result<LayeredGraph> {
    let mut g = build_family(family, depth, radius, budget)?;
    let n = g.vertex_count();
    for &(u, v) in &edges {
        if u >= n || v >= n {
            return Err(ObstructorError::Parse(format!(
                "edge ({u}, {v}) references a vertex outside 0..{n}"
            )));
        }
    }
    g.adjacency = Adjacency::Explicit(Csr::from_edges(n, &mut edges));
    g.pairs = pairs;
    Ok(g)
}

/// The base family: `D + 1` layers over `(Z/LZ)^2`, critical pairs
/// `(v_x^0, v_{x+D*g}^D)` for every base point `x` and hull vector `g`.
pub fn build_g0(depth: u64, radius: u64, budget: &Budget) -> Result<LayeredGraph> {
    build_family(Family::G0, depth, radius, budget)
}

/// See [`LayeredGraph::critical_path`].
pub fn g0_critical_path(g: &LayeredGraph, pair: &CriticalPair) -> Result<CriticalPath> {
    g.critical_path(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g0_exact_counts_d1_r1() {
        let g = build_g0(1, 1, &Budget::default()).unwrap();
        assert_eq!(g.vertex_count(), 18);
        assert_eq!(g.edge_count(), 18);
        assert_eq!(g.pairs().len(), 18);
        assert_eq!(g.params().modulus, 3);
        assert_eq!(g.params().layers, 2);
    }

    #[test]
    fn g0_exact_counts_d2_r1() {
        let g = build_g0(2, 1, &Budget::default()).unwrap();
        assert_eq!(g.vertex_count(), 108);
        assert_eq!(g.edge_count(), 144);
        assert_eq!(g.pairs().len(), 72);
    }

    #[test]
    fn g0_rejects_bad_params() {
        assert!(build_g0(0, 1, &Budget::default()).is_err());
        assert!(build_g0(1, 0, &Budget::default()).is_err());
        let tiny = Budget {
            max_vertices: 10,
            ..Budget::default()
        };
        assert!(matches!(
            build_g0(1, 1, &tiny),
            Err(ObstructorError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn g0_path_d2_r1_forced() {
        let g = build_g0(2, 1, &Budget::default()).unwrap();
        // x = (0,0), gamma = (1,0): layers 0,1,2 at coords (0,0), (1,0), (2,0)
        let pair = g
            .pairs()
            .iter()
            .find(|p| p.base == vec![0, 0] && p.gammas == vec![(1, 0)])
            .unwrap();
        let path = g.critical_path(pair).unwrap();
        let want: Vec<u64> = vec![
            g.vertex_id(0, &[0, 0]),
            g.vertex_id(1, &[1, 0]),
            g.vertex_id(2, &[2, 0]),
        ];
        assert_eq!(path.vertices, want);
    }

    #[test]
    fn critical_path_rejects_foreign_generator() {
        let g = build_g0(2, 1, &Budget::default()).unwrap();
        let mut pair = g.pairs()[0].clone();
        pair.gammas = vec![(1, 1)]; // not a hull member at r=1
        assert!(matches!(
            g.critical_path(&pair),
            Err(ObstructorError::NotInHull(1, 1))
        ));
    }

    #[test]
    fn out_degree_is_hull_size_except_last_layer() {
        let g = build_family(Family::Galt2, 2, 1, &Budget::default()).unwrap();
        let h = g.hull_size() as usize;
        let mut buf = Vec::new();
        for v in 0..g.vertex_count() {
            g.out_neighbors_into(v, &mut buf);
            let expect = if g.layer_of(v) + 1 == g.params().layers {
                0
            } else {
                h
            };
            assert_eq!(buf.len(), expect, "vertex {v}");
        }
    }

    #[test]
    fn rule_and_explicit_adjacency_agree() {
        let explicit = build_family(Family::Galt3, 1, 1, &Budget::default()).unwrap();
        let rule_only = build_family(
            Family::Galt3,
            1,
            1,
            &Budget {
                explicit_adjacency_limit: 0,
                ..Budget::default()
            },
        )
        .unwrap();
        assert!(explicit.has_explicit_adjacency());
        assert!(!rule_only.has_explicit_adjacency());
        for v in 0..explicit.vertex_count() {
            assert_eq!(explicit.out_neighbors(v), rule_only.out_neighbors(v));
        }
        for v in 0..explicit.vertex_count() {
            for w in explicit.rule_in_neighbors(v) {
                assert!(explicit.edge_exists(w, v));
            }
        }
    }

    #[test]
    fn pair_generators_are_bijective() {
        for (family, d, r) in [
            (Family::G0, 2, 2),
            (Family::Galt2, 1, 2),
            (Family::Galt3, 1, 1),
        ] {
            let g = build_family(family, d, r, &Budget::default()).unwrap();
            let mut endpoints: Vec<(u64, u64)> =
                g.pairs().iter().map(|p| (p.source, p.target)).collect();
            let total = endpoints.len() as u64;
            endpoints.sort_unstable();
            endpoints.dedup();
            assert_eq!(endpoints.len() as u64, total, "{family:?} collision");
            let k = g.params().coord_count;
            let expect =
                g.pow[k as usize] * g.hull_size().pow(k - 1);
            assert_eq!(total, expect);
        }
    }

    #[test]
    fn family_tags_roundtrip() {
        for f in [
            Family::G0,
            Family::Galt2,
            Family::Galt3,
            Family::GaltGen(5),
        ] {
            assert_eq!(Family::parse_tag(&f.tag()).unwrap(), f);
        }
        assert!(Family::parse_tag("GALTGEN(2)").is_err());
        assert!(Family::parse_tag("nope").is_err());
    }

    proptest! {
        #[test]
        fn id_codec_roundtrip(layer in 0u64..5, c0 in 0u64..9, c1 in 0u64..9, c2 in 0u64..9) {
            let g = build_family(Family::Galt2, 3, 1, &Budget::default()).unwrap();
            let l = g.params().modulus;
            prop_assume!(c0 < l && c1 < l && c2 < l);
            let id = g.vertex_id(layer, &[c0, c1, c2]);
            prop_assert_eq!(g.layer_of(id), layer);
            prop_assert_eq!(g.coords_of(id), vec![c0, c1, c2]);
        }
    }
}
