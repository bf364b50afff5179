//! Alternation-product builders and the diameter exponent function.
//!
//! The three-coordinate product packs two base-graph copies into overlapping
//! blocks (steps alternate between coordinates (1,2) and (2,3)); the
//! four-coordinate product does the same with three copies. The generalized
//! builder takes any `k >= 3`; `k = 3` and `k = 4` reproduce the two fixed
//! products edge-for-edge under the id codec.

use num_rational::Ratio;

use crate::base::{build_family, Budget, CriticalPair, CriticalPath, Family, LayeredGraph};
use crate::{ObstructorError, Result};

/// `2D + 1` layers over `(Z/LZ)^3`; even steps act on coordinates (1,2),
/// odd steps on (2,3). Critical pairs carry generator pairs
/// `(gamma, gamma') ∈ (V2+(r))^2`.
pub fn build_galt2(depth: u64, radius: u64, budget: &Budget) -> Result<LayeredGraph> {
    build_family(Family::Galt2, depth, radius, budget)
}

/// `3D + 1` layers over `(Z/LZ)^4`; steps with residue 0, 1, 2 act on
/// coordinate pairs (1,2), (2,3), (3,4). Generator triples.
pub fn build_galt3(depth: u64, radius: u64, budget: &Budget) -> Result<LayeredGraph> {
    build_family(Family::Galt3, depth, radius, budget)
}

/// Generalized product over `(Z/LZ)^k` with `(k-1)D + 1` layers; step
/// residue `p` acts on coordinates `(p+1, p+2)` (1-based).
pub fn build_galt_general(k: u32, depth: u64, radius: u64, budget: &Budget) -> Result<LayeredGraph> {
    if k < 3 {
        return Err(ObstructorError::InvalidParam(format!(
            "generalized product needs k >= 3, got {k}"
        )));
    }
    build_family(Family::GaltGen(k), depth, radius, budget)
}

/// See [`LayeredGraph::critical_path`].
pub fn critical_path_of(g: &LayeredGraph, pair: &CriticalPair) -> Result<CriticalPath> {
    g.critical_path(pair)
}

/// Exponent governing the vertex count of the balanced k-coordinate product:
/// `f(k) = (2k^2 + k - 4) / (2(k - 2))`, as an exact rational.
pub fn exponent_f(k: i64) -> Result<Ratio<i64>> {
    if k <= 2 {
        return Err(ObstructorError::InvalidParam(format!(
            "exponent_f needs k >= 3 (pole at k = 2), got {k}"
        )));
    }
    Ok(Ratio::new(2 * k * k + k - 4, 2 * (k - 2)))
}

/// Integer argmin of [`exponent_f`] over `lo..=hi` (smallest k on ties).
pub fn exponent_argmin(lo: i64, hi: i64) -> Result<i64> {
    if lo < 3 || hi < lo {
        return Err(ObstructorError::InvalidParam(format!(
            "argmin range must satisfy 3 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    let mut best = lo;
    let mut best_val = exponent_f(lo)?;
    for k in lo + 1..=hi {
        let v = exponent_f(k)?;
        if v < best_val {
            best = k;
            best_val = v;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::pair_target_coords;

    #[test]
    fn galt2_exact_counts_d1_r1() {
        let g = build_galt2(1, 1, &Budget::default()).unwrap();
        assert_eq!(g.vertex_count(), 81);
        assert_eq!(g.edge_count(), 108);
        assert_eq!(g.pairs().len(), 108);
    }

    #[test]
    fn galt3_exact_counts_d1_r1() {
        let g = build_galt3(1, 1, &Budget::default()).unwrap();
        assert_eq!(g.vertex_count(), 324);
        assert_eq!(g.edge_count(), 486);
        assert_eq!(g.pairs().len(), 648);
    }

    #[test]
    fn galt_general_k5_counts() {
        let g = build_galt_general(5, 1, 1, &Budget::default()).unwrap();
        assert_eq!(g.vertex_count(), 1215);
        assert_eq!(g.pairs().len(), 3888);
        assert!(build_galt_general(2, 1, 1, &Budget::default()).is_err());
    }

    #[test]
    fn general_k3_matches_galt2() {
        let a = build_galt2(2, 1, &Budget::default()).unwrap();
        let b = build_galt_general(3, 2, 1, &Budget::default()).unwrap();
        assert_eq!(a.vertex_count(), b.vertex_count());
        for v in 0..a.vertex_count() {
            assert_eq!(a.out_neighbors(v), b.out_neighbors(v));
        }
        let pa: Vec<(u64, u64)> = a.pairs().iter().map(|p| (p.source, p.target)).collect();
        let pb: Vec<(u64, u64)> = b.pairs().iter().map(|p| (p.source, p.target)).collect();
        assert_eq!(pa, pb);
    }

    #[test]
    fn general_k4_matches_galt3() {
        let a = build_galt3(1, 2, &Budget::default()).unwrap();
        let b = build_galt_general(4, 1, 2, &Budget::default()).unwrap();
        assert_eq!(a.vertex_count(), b.vertex_count());
        for v in 0..a.vertex_count() {
            assert_eq!(a.out_neighbors(v), b.out_neighbors(v));
        }
        let pa: Vec<(u64, u64)> = a.pairs().iter().map(|p| (p.source, p.target)).collect();
        let pb: Vec<(u64, u64)> = b.pairs().iter().map(|p| (p.source, p.target)).collect();
        assert_eq!(pa, pb);
    }

    #[test]
    fn galt2_endpoint_formula() {
        // (x1 + D*g1, x2 + D*g2 + D*g1', x3 + D*g2'), componentwise mod L
        let d = 2;
        let l = 6;
        let y = pair_target_coords(&[1, 2, 3], &[(1, 0), (0, 1)], d, l);
        assert_eq!(y, vec![(1 + 2) % 6, (2 + 0 + 0) % 6, (3 + 2) % 6]);
    }

    #[test]
    fn galt2_path_layout_d1() {
        let g = build_galt2(1, 1, &Budget::default()).unwrap();
        for pair in g.pairs() {
            let path = g.critical_path(pair).unwrap();
            assert_eq!(path.vertices.len(), 3);
        }
    }

    #[test]
    fn exponent_values() {
        assert_eq!(exponent_f(3).unwrap(), Ratio::new(17, 2));
        assert_eq!(exponent_f(4).unwrap(), Ratio::new(8, 1));
        assert_eq!(exponent_f(5).unwrap(), Ratio::new(51, 6));
        assert!(exponent_f(2).is_err());
        assert_eq!(exponent_argmin(3, 12).unwrap(), 4);
    }
}
