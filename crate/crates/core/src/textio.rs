//! Text file formats.
//!
//! Hull file: header `hull r=<r> d=2 size=<s>`, then one `x y` line per
//! member in ascending-x order.
//!
//! Graph file: header
//! `graph family=<tag> D=<D> r=<r> k=<k> L=<L> layers=<layers> n=<n> m=<m>`,
//! then one `u v` edge per line under the id codec (obstacle graphs carry a
//! third column flagging clique edges: `u v c`, c in {0, 1}).
//!
//! Pairs file: one line per pair, `s t x1 .. xk g1 g2 .. `, listing the base
//! point and the generator components.

use std::fmt::Write as _;

use crate::base::{from_parts, Budget, CriticalPair, Family, LayeredGraph};
use crate::hull::{HullSet, LatticeVector};
use crate::obstacle::ObstacleGraph;
use crate::{ObstructorError, Result};

pub fn write_hull(h: &HullSet) -> String {
    let mut s = format!("hull r={} d=2 size={}\n", h.radius, h.len());
    for i in 0..h.len() {
        let (x, y) = h.xy(i);
        let _ = writeln!(s, "{x} {y}");
    }
    s
}

pub fn parse_hull(text: &str) -> Result<HullSet> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| ObstructorError::Parse("empty hull file".into()))?;
    let fields = parse_header(header, "hull")?;
    let radius: i64 = field(&fields, "r")?;
    let size: usize = field(&fields, "size")?;
    let mut vectors = Vec::with_capacity(size);
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let mut it = line.split_whitespace();
        let x: i64 = next_num(&mut it, line)?;
        let y: i64 = next_num(&mut it, line)?;
        vectors.push(LatticeVector::new(vec![x, y]));
    }
    if vectors.len() != size {
        return Err(ObstructorError::Parse(format!(
            "hull size mismatch: header {} vs {} lines",
            size,
            vectors.len()
        )));
    }
    Ok(HullSet {
        radius,
        dim: 2,
        vectors,
    })
}

pub fn write_graph(g: &LayeredGraph) -> String {
    let p = g.params();
    let mut s = format!(
        "graph family={} D={} r={} k={} L={} layers={} n={} m={}\n",
        g.family().tag(),
        p.depth,
        p.radius,
        p.coord_count,
        p.modulus,
        p.layers,
        g.vertex_count(),
        g.edge_count()
    );
    let mut buf = Vec::new();
    for u in 0..g.vertex_count() {
        g.out_neighbors_into(u, &mut buf);
        for &v in &buf {
            let _ = writeln!(s, "{u} {v}");
        }
    }
    s
}

pub fn write_pairs(g: &LayeredGraph) -> String {
    let mut s = String::new();
    for pair in g.pairs() {
        let _ = write!(s, "{} {}", pair.source, pair.target);
        for &x in &pair.base {
            let _ = write!(s, " {x}");
        }
        for &(g1, g2) in &pair.gammas {
            let _ = write!(s, " {g1} {g2}");
        }
        s.push('\n');
    }
    s
}

pub fn write_obstacle_graph(g: &ObstacleGraph) -> String {
    let p = g.alt().params();
    let mut s = format!(
        "graph family=GOBS D={} r={} k={} L={} layers={} n={} m={}\n",
        p.depth,
        p.radius,
        p.coord_count,
        p.modulus,
        p.layers,
        g.vertex_count(),
        g.edge_count()
    );
    for u in 0..g.vertex_count() {
        for &v in g.graph().neighbors(u) {
            if u < v {
                let _ = writeln!(s, "{u} {v} {}", u8::from(g.is_clique_edge(u, v)));
            }
        }
    }
    s
}

pub fn write_obstacle_pairs(g: &ObstacleGraph) -> String {
    let mut s = String::new();
    for (obs, alt) in g.pairs().iter().zip(g.alt_pairs()) {
        let _ = write!(s, "{} {}", obs.source, obs.target);
        for &x in &alt.base {
            let _ = write!(s, " {x}");
        }
        for &(g1, g2) in &alt.gammas {
            let _ = write!(s, " {g1} {g2}");
        }
        s.push('\n');
    }
    s
}

pub struct ParsedGraphHeader {
    pub family: Family,
    pub depth: u64,
    pub radius: u64,
    pub n: u64,
    pub m: u64,
}

pub fn parse_graph(text: &str, budget: &Budget) -> Result<(ParsedGraphHeader, Vec<(u64, u64)>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| ObstructorError::Parse("empty graph file".into()))?;
    let fields = parse_header(header, "graph")?;
    let family = Family::parse_tag(&field::<String>(&fields, "family")?)?;
    let depth: u64 = field(&fields, "D")?;
    let radius: u64 = field(&fields, "r")?;
    let n: u64 = field(&fields, "n")?;
    let m: u64 = field(&fields, "m")?;
    let _ = budget;
    let mut edges = Vec::with_capacity(m as usize);
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let mut it = line.split_whitespace();
        let u: u64 = next_num(&mut it, line)?;
        let v: u64 = next_num(&mut it, line)?;
        edges.push((u, v));
    }
    Ok((
        ParsedGraphHeader {
            family,
            depth,
            radius,
            n,
            m,
        },
        edges,
    ))
}

pub fn parse_pairs(text: &str, coord_count: u32) -> Result<Vec<CriticalPair>> {
    let k = coord_count as usize;
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let nums: Vec<u64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| ObstructorError::Parse(format!("bad pair line: {line}")))
            })
            .collect::<Result<_>>()?;
        let want = 2 + k + 2 * (k - 1);
        if nums.len() != want {
            return Err(ObstructorError::Parse(format!(
                "pair line has {} fields, expected {want}: {line}",
                nums.len()
            )));
        }
        let base = nums[2..2 + k].to_vec();
        let gammas = nums[2 + k..]
            .chunks(2)
            .map(|c| (c[0], c[1]))
            .collect();
        out.push(CriticalPair {
            source: nums[0],
            target: nums[1],
            base,
            gammas,
        });
    }
    Ok(out)
}

/// Rebuild a layered graph from its graph and pairs files. The adjacency is
/// the file's edge list, so downstream verification checks the file content,
/// not the rule.
pub fn load_graph(graph_text: &str, pairs_text: &str, budget: &Budget) -> Result<LayeredGraph> {
    let (header, edges) = parse_graph(graph_text, budget)?;
    let pairs = parse_pairs(pairs_text, header.family.coord_count())?;
    from_parts(
        header.family,
        header.depth,
        header.radius,
        edges,
        pairs,
        budget,
    )
}

fn parse_header(line: &str, kind: &str) -> Result<Vec<(String, String)>> {
    let mut it = line.split_whitespace();
    let first = it
        .next()
        .ok_or_else(|| ObstructorError::Parse("empty header".into()))?;
    if first != kind {
        return Err(ObstructorError::Parse(format!(
            "expected {kind} header, got {first}"
        )));
    }
    let mut out = Vec::new();
    for tok in it {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| ObstructorError::Parse(format!("bad header token {tok}")))?;
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(fields: &[(String, String)], key: &str) -> Result<T> {
    fields
        .iter()
        .find(|(k, _)| k == key)
        .ok_or_else(|| ObstructorError::Parse(format!("missing header field {key}")))?
        .1
        .parse()
        .map_err(|_| ObstructorError::Parse(format!("bad value for header field {key}")))
}

fn next_num<T: std::str::FromStr>(
    it: &mut std::str::SplitWhitespace<'_>,
    line: &str,
) -> Result<T> {
    it.next()
        .ok_or_else(|| ObstructorError::Parse(format!("short line: {line}")))?
        .parse()
        .map_err(|_| ObstructorError::Parse(format!("bad number in line: {line}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::build_g0;

    #[test]
    fn hull_roundtrip() {
        let h = crate::hull::positive_hull(3).unwrap();
        let text = write_hull(&h);
        assert!(text.starts_with("hull r=3 d=2 size=3\n"));
        let back = parse_hull(&text).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn graph_roundtrip_preserves_structure() {
        let g = build_g0(2, 1, &Budget::default()).unwrap();
        let gt = write_graph(&g);
        let pt = write_pairs(&g);
        assert!(gt.starts_with("graph family=G0 D=2 r=1 k=2 L=6 layers=3 n=108 m=144\n"));
        let loaded = load_graph(&gt, &pt, &Budget::default()).unwrap();
        assert_eq!(loaded.vertex_count(), g.vertex_count());
        assert_eq!(loaded.edge_count(), g.edge_count());
        assert_eq!(loaded.pairs(), g.pairs());
        for v in 0..g.vertex_count() {
            assert_eq!(loaded.out_neighbors(v), g.out_neighbors(v));
        }
    }

    #[test]
    fn tampered_graph_detected_by_path_validation() {
        let g = build_g0(2, 1, &Budget::default()).unwrap();
        let gt = write_graph(&g);
        let pt = write_pairs(&g);
        // drop the first edge line
        let mut lines: Vec<&str> = gt.lines().collect();
        lines.remove(1);
        let tampered = lines.join("\n");
        let loaded = load_graph(&tampered, &pt, &Budget::default()).unwrap();
        assert_eq!(loaded.edge_count(), g.edge_count() - 1);
        let bad = g
            .pairs()
            .iter()
            .filter(|p| loaded.critical_path(p).is_err())
            .count();
        assert!(bad >= 1);
    }
}
