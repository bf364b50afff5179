//! Obstacle product of the three-coordinate alternation graph.
//!
//! Two transformations applied to the (undirected) alternation graph:
//! every edge is subdivided into a path of `D` edges (`D - 1` new interior
//! vertices), and every original vertex in an interior layer is replaced by
//! a complete bipartite clique with one left port per in-edge and one right
//! port per out-edge. Boundary layers (first and last) keep their original
//! vertices, and subdivision paths incident to them attach directly.
//!
//! Vertex id layout, in blocks:
//! * `0 .. L^3` — layer-0 originals (id = coordinate index);
//! * `L^3 .. 2 L^3` — last-layer originals;
//! * clique block — interior vertex `(layer, x)`, side (0 = left, 1 = right),
//!   port index `0..h`;
//! * subdivision block — original edge index times position `1..D`.
//!
//! Port order is fixed by sorting neighbor vertex ids, so the construction
//! is deterministic.

use std::collections::HashSet;

use crate::alternation::build_galt2;
use crate::base::{Budget, CriticalPair, LayeredGraph};
use crate::oracles::UGraph;
use crate::{ObstructorError, Result};

pub const LEFT: u64 = 0;
pub const RIGHT: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObstaclePair {
    pub source: u64,
    pub target: u64,
}

#[derive(Clone, Debug)]
pub struct ObstacleGraph {
    alt: LayeredGraph,
    graph: UGraph,
    clique_edges: Vec<(u64, u64)>,
    clique_set: HashSet<(u64, u64)>,
    pairs: Vec<ObstaclePair>,
    clique_base: u64,
    subdiv_base: u64,
}

/// Exact vertex count: boundary originals, clique vertices, and subdivision
/// interiors.
pub fn expected_vertex_count(depth: u64, per_layer: u64, hull: u64) -> u64 {
    2 * per_layer
        + (2 * depth - 1) * per_layer * 2 * hull
        + 2 * depth * per_layer * hull * (depth - 1)
}

/// Exact edge count: subdivision paths plus clique edges.
pub fn expected_edge_count(depth: u64, per_layer: u64, hull: u64) -> u64 {
    2 * depth * per_layer * hull * depth + (2 * depth - 1) * per_layer * hull * hull
}

impl ObstacleGraph {
    pub fn alt(&self) -> &LayeredGraph {
        &self.alt
    }

    pub fn graph(&self) -> &UGraph {
        &self.graph
    }

    pub fn pairs(&self) -> &[ObstaclePair] {
        &self.pairs
    }

    pub fn alt_pairs(&self) -> &[CriticalPair] {
        self.alt.pairs()
    }

    pub fn vertex_count(&self) -> u64 {
        self.graph.n()
    }

    pub fn edge_count(&self) -> u64 {
        self.graph.edge_count()
    }

    /// Clique edges in canonical ascending order.
    pub fn clique_edge_list(&self) -> &[(u64, u64)] {
        &self.clique_edges
    }

    pub fn is_clique_edge(&self, u: u64, v: u64) -> bool {
        self.clique_set.contains(&(u.min(v), u.max(v)))
    }

    pub fn depth(&self) -> u64 {
        self.alt.params().depth
    }

    fn per_layer(&self) -> u64 {
        self.alt.per_layer()
    }

    fn hull(&self) -> u64 {
        self.alt.hull_size()
    }

    fn clique_id(&self, layer: u64, x: u64, side: u64, port: u64) -> u64 {
        self.clique_base + (((layer - 1) * self.per_layer() + x) * 2 + side) * self.hull() + port
    }

    fn subdiv_id(&self, edge_index: u64, pos: u64) -> u64 {
        self.subdiv_base + edge_index * (self.depth() - 1) + (pos - 1)
    }

    fn alt_edge_index(&self, u: u64, v: u64) -> u64 {
        let gi = self
            .alt
            .step_of_edge(u, v)
            .expect("alt edge expected by construction") as u64;
        u * self.hull() + gi
    }

    /// Port of edge `(u, v)` on the right side of `K_u`.
    fn out_port(&self, u: u64, v: u64) -> u64 {
        let outs = self.alt.out_neighbors(u);
        outs.binary_search(&v).expect("out-neighbor") as u64
    }

    /// Port of edge `(u, v)` on the left side of `K_v`.
    fn in_port(&self, v: u64, u: u64) -> u64 {
        let ins = self.alt.rule_in_neighbors(v);
        ins.binary_search(&u).expect("in-neighbor") as u64
    }

    /// Endpoint of the subdivision path of alt edge `(u, v)` on the `u` side.
    fn tail_attachment(&self, u: u64, v: u64) -> u64 {
        let layer = self.alt.layer_of(u);
        if layer == 0 {
            u % self.per_layer()
        } else {
            self.clique_id(layer, u % self.per_layer(), RIGHT, self.out_port(u, v))
        }
    }

    /// Endpoint of the subdivision path of alt edge `(u, v)` on the `v` side.
    fn head_attachment(&self, u: u64, v: u64) -> u64 {
        let layer = self.alt.layer_of(v);
        if layer + 1 == self.alt.params().layers {
            self.per_layer() + v % self.per_layer()
        } else {
            self.clique_id(layer, v % self.per_layer(), LEFT, self.in_port(v, u))
        }
    }

    /// The canonical critical path of pair `idx`: subdivision paths of the
    /// underlying alternation path joined by one clique edge per interior
    /// layer. Length `2*D*D + 2*D - 1`, of which `2*D - 1` are clique edges.
    pub fn critical_path(&self, idx: usize) -> Vec<u64> {
        let pair = &self.alt.pairs()[idx];
        let pv = self.alt.path_vertices(pair);
        let d = self.depth();
        let mut out = Vec::with_capacity((2 * d * d + 2 * d) as usize);
        out.push(self.pairs[idx].source);
        for i in 0..pv.len() - 1 {
            let (u, v) = (pv[i], pv[i + 1]);
            if i > 0 {
                out.push(self.tail_attachment(u, v));
            }
            let e = self.alt_edge_index(u, v);
            for q in 1..d {
                out.push(self.subdiv_id(e, q));
            }
            out.push(self.head_attachment(u, v));
        }
        out
    }

    /// Clique edges along the canonical path of pair `idx`, in path order.
    pub fn path_clique_edges(&self, idx: usize) -> Vec<(u64, u64)> {
        let path = self.critical_path(idx);
        path.windows(2)
            .filter(|w| self.is_clique_edge(w[0], w[1]))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .collect()
    }

    pub fn pair_endpoints(&self) -> Vec<(u64, u64)> {
        self.pairs.iter().map(|p| (p.source, p.target)).collect()
    }
}

/// Apply edge expansion and clique replacement to the three-coordinate
/// alternation graph with the given parameters.
pub fn build_gobs(depth: u64, radius: u64, budget: &Budget) -> Result<ObstacleGraph> {
    let alt = build_galt2(depth, radius, budget)?;
    let per_layer = alt.per_layer();
    let h = alt.hull_size();
    let n = expected_vertex_count(depth, per_layer, h);
    if u128::from(n) > u128::from(budget.max_vertices) {
        return Err(ObstructorError::BudgetExceeded {
            needed: u128::from(n),
            budget: budget.max_vertices,
        });
    }
    let clique_base = 2 * per_layer;
    let subdiv_base = clique_base + (2 * depth - 1) * per_layer * 2 * h;

    let mut gobs = ObstacleGraph {
        graph: UGraph::new(n),
        clique_edges: Vec::new(),
        clique_set: HashSet::new(),
        pairs: Vec::new(),
        clique_base,
        subdiv_base,
        alt,
    };

    // subdivision paths for every alt edge
    let alt_n = gobs.alt.vertex_count();
    let mut buf = Vec::new();
    for u in 0..alt_n {
        gobs.alt.out_neighbors_into(u, &mut buf);
        let outs = buf.clone();
        for &v in &outs {
            let e = gobs.alt_edge_index(u, v);
            let mut prev = gobs.tail_attachment(u, v);
            for q in 1..depth {
                let s = gobs.subdiv_id(e, q);
                gobs.graph.add_edge(prev, s);
                prev = s;
            }
            let head = gobs.head_attachment(u, v);
            gobs.graph.add_edge(prev, head);
        }
    }

    // bipartite cliques at interior originals
    for layer in 1..gobs.alt.params().layers - 1 {
        for x in 0..per_layer {
            for pl in 0..h {
                let a = gobs.clique_id(layer, x, LEFT, pl);
                for pr in 0..h {
                    let b = gobs.clique_id(layer, x, RIGHT, pr);
                    gobs.graph.add_edge(a, b);
                    gobs.clique_edges.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    gobs.graph.finish();
    gobs.clique_edges.sort_unstable();
    gobs.clique_set = gobs.clique_edges.iter().copied().collect();

    gobs.pairs = gobs
        .alt
        .pairs()
        .iter()
        .map(|p| ObstaclePair {
            source: p.source,
            target: per_layer + p.target % per_layer,
        })
        .collect();
    Ok(gobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_d1_r1() {
        let g = build_gobs(1, 1, &Budget::default()).unwrap();
        assert_eq!(g.vertex_count(), 162);
        assert_eq!(g.edge_count(), 216);
        assert_eq!(g.pairs().len(), 108);
        assert_eq!(g.clique_edge_list().len(), 108);
    }

    #[test]
    fn counts_match_formulas() {
        for (d, r) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let g = build_gobs(d, r, &Budget::default()).unwrap();
            let per_layer = g.alt().per_layer();
            let h = g.alt().hull_size();
            assert_eq!(g.vertex_count(), expected_vertex_count(d, per_layer, h));
            assert_eq!(g.edge_count(), expected_edge_count(d, per_layer, h));
            assert_eq!(
                g.clique_edge_list().len() as u64,
                (2 * d - 1) * per_layer * h * h
            );
        }
    }

    #[test]
    fn canonical_path_shape() {
        for (d, r) in [(1, 1), (2, 1), (2, 2)] {
            let g = build_gobs(d, r, &Budget::default()).unwrap();
            let want_len = (2 * d * d + 2 * d - 1) as usize;
            for idx in [0usize, 1, g.pairs().len() - 1] {
                let path = g.critical_path(idx);
                assert_eq!(path.len(), want_len + 1);
                assert_eq!(path[0], g.pairs()[idx].source);
                assert_eq!(*path.last().unwrap(), g.pairs()[idx].target);
                for w in path.windows(2) {
                    assert!(g.graph().has_edge(w[0], w[1]), "missing {w:?}");
                }
                assert_eq!(g.path_clique_edges(idx).len() as u64, 2 * d - 1);
            }
        }
    }

    #[test]
    fn ports_have_one_non_clique_edge() {
        let g = build_gobs(2, 1, &Budget::default()).unwrap();
        for v in g.clique_base..g.subdiv_base {
            let non_clique = g
                .graph()
                .neighbors(v)
                .iter()
                .filter(|&&w| !g.is_clique_edge(v, w))
                .count();
            assert_eq!(non_clique, 1, "port {v}");
            let clique = g.graph().neighbors(v).len() - non_clique;
            assert_eq!(clique as u64, g.hull());
        }
    }

    #[test]
    fn length_two_paths_have_unique_clique_route() {
        // For each interior original, the attachment map edge -> port is a
        // bijection per side; combined with one clique edge per port pair
        // this forces a unique 3-edge route through the clique.
        let g = build_gobs(2, 2, &Budget::default()).unwrap();
        let alt = g.alt();
        for layer in 1..alt.params().layers - 1 {
            for x in 0..alt.per_layer().min(40) {
                let v = layer * alt.per_layer() + x;
                let ins = alt.rule_in_neighbors(v);
                let outs = alt.out_neighbors(v);
                let in_ports: Vec<u64> = ins.iter().map(|&w| g.in_port(v, w)).collect();
                let out_ports: Vec<u64> = outs.iter().map(|&w| g.out_port(v, w)).collect();
                let mut ip = in_ports.clone();
                ip.sort_unstable();
                ip.dedup();
                assert_eq!(ip.len(), ins.len(), "left ports collide at {v}");
                let mut op = out_ports.clone();
                op.sort_unstable();
                op.dedup();
                assert_eq!(op.len(), outs.len(), "right ports collide at {v}");
            }
        }
    }

    #[test]
    fn budget_enforced() {
        let tiny = Budget {
            max_vertices: 100,
            ..Budget::default()
        };
        assert!(build_gobs(1, 1, &tiny).is_err());
    }
}
