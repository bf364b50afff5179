//! Exact integer geometry for lattice balls and their convex-hull vertex sets.
//!
//! Everything here is integer-only. The hull builder runs an Andrew monotone
//! chain over the boundary columns of the quarter disk and keeps true vertices
//! only (collinear boundary points are dropped), so the output is strictly
//! convex by construction. [`verify_hull_properties`] re-checks that claim
//! through an unrelated code path: exact convex-combination membership tests.

use crate::{ObstructorError, Result};

/// Integer point in `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn norm_sq(&self) -> i64 {
        self.coords.iter().map(|c| c * c).sum()
    }
}

/// Convex-hull vertices of the lattice ball of radius `radius` restricted to
/// the closed nonnegative quadrant, sorted by ascending first coordinate.
///
/// Invariants (checked by [`verify_hull_properties`]):
/// * every member has nonnegative coordinates and squared norm `<= radius^2`;
/// * no member is a convex combination of the others;
/// * no two members share a first or a second coordinate;
/// * second coordinates strictly decrease as first coordinates increase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullSet {
    pub radius: i64,
    pub dim: usize,
    pub vectors: Vec<LatticeVector>,
}

impl HullSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Member `i` as an `(x, y)` pair.
    pub fn xy(&self, i: usize) -> (i64, i64) {
        (self.vectors[i].coords[0], self.vectors[i].coords[1])
    }

    pub fn points(&self) -> Vec<(i64, i64)> {
        (0..self.len()).map(|i| self.xy(i)).collect()
    }

    /// Membership test; members are sorted by first coordinate.
    pub fn contains_point(&self, p: (i64, i64)) -> bool {
        self.vectors
            .binary_search_by(|v| (v.coords[0], v.coords[1]).cmp(&p))
            .is_ok()
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    let ax = (a.0 - o.0) as i128;
    let ay = (a.1 - o.1) as i128;
    let bx = (b.0 - o.0) as i128;
    let by = (b.1 - o.1) as i128;
    ax * by - ay * bx
}

/// All integer points within Euclidean distance `radius` of the origin,
/// in ascending lexicographic order.
pub fn lattice_ball(dim: usize, radius: i64) -> Result<Vec<LatticeVector>> {
    if radius < 0 {
        return Err(ObstructorError::InvalidParam(format!(
            "lattice_ball radius must be nonnegative, got {radius}"
        )));
    }
    if !(1..=3).contains(&dim) {
        return Err(ObstructorError::InvalidParam(format!(
            "lattice_ball supports dimensions 1..=3, got {dim}"
        )));
    }
    let r2 = radius * radius;
    let mut out = Vec::new();
    match dim {
        1 => {
            for x in -radius..=radius {
                out.push(LatticeVector::new(vec![x]));
            }
        }
        2 => {
            for x in -radius..=radius {
                let ymax = (r2 - x * x).isqrt();
                for y in -ymax..=ymax {
                    out.push(LatticeVector::new(vec![x, y]));
                }
            }
        }
        3 => {
            for x in -radius..=radius {
                let rem = r2 - x * x;
                let ymax = rem.isqrt();
                for y in -ymax..=ymax {
                    let zmax = (rem - y * y).isqrt();
                    for z in -zmax..=zmax {
                        out.push(LatticeVector::new(vec![x, y, z]));
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(out)
}

/// Hull vertices of the radius-`radius` lattice ball lying in the closed
/// nonnegative quadrant (dimension 2 only). Always contains `(radius, 0)`
/// and `(0, radius)`.
///
/// Runs in `O(radius)` time and `O(output)` extra memory: only the boundary
/// column points `(x, ymax(x))` can be hull vertices, and they are streamed
/// through a monotone chain with a strict turn test.
pub fn positive_hull(radius: i64) -> Result<HullSet> {
    if radius < 1 {
        return Err(ObstructorError::InvalidParam(format!(
            "positive_hull radius must be >= 1, got {radius}"
        )));
    }
    if radius > (1 << 31) {
        return Err(ObstructorError::InvalidParam(format!(
            "positive_hull radius {radius} too large (max 2^31)"
        )));
    }
    let r2 = radius * radius;
    let mut chain: Vec<(i64, i64)> = Vec::new();
    for x in 0..=radius {
        let p = (x, (r2 - x * x).isqrt());
        while chain.len() >= 2 && cross(chain[chain.len() - 2], chain[chain.len() - 1], p) >= 0 {
            chain.pop();
        }
        chain.push(p);
    }
    Ok(HullSet {
        radius,
        dim: 2,
        vectors: chain
            .into_iter()
            .map(|(x, y)| LatticeVector::new(vec![x, y]))
            .collect(),
    })
}

/// Exact test for `p ∈ conv(pts)` in the plane.
///
/// Membership is witnessed by a coincident point, a containing segment, or a
/// containing non-degenerate triangle; by Caratheodory nothing else is needed.
pub fn in_convex_hull(p: (i64, i64), pts: &[(i64, i64)]) -> bool {
    if pts.iter().any(|&q| q == p) {
        return true;
    }
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            if on_segment(p, a, b) {
                return true;
            }
        }
    }
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if in_triangle(p, pts[i], pts[j], pts[k]) {
                    return true;
                }
            }
        }
    }
    false
}

fn on_segment(p: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    cross(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn in_triangle(p: (i64, i64), a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> bool {
    if cross(a, b, c) == 0 {
        // Degenerate triangles are covered by the segment pass.
        return false;
    }
    let s1 = cross(a, b, p);
    let s2 = cross(b, c, p);
    let s3 = cross(c, a, p);
    (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0)
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub pass: bool,
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn ok() -> Self {
        Self { pass: true, witness: None }
    }

    fn fail(witness: String) -> Self {
        Self { pass: false, witness: Some(witness) }
    }
}

/// Per-invariant verification report for a hull set. Failures are reported,
/// never thrown.
#[derive(Clone, Debug)]
pub struct HullVerification {
    pub membership: CheckOutcome,
    pub strict_convexity: CheckOutcome,
    pub coordinate_distinct: CheckOutcome,
    pub monotone_second: CheckOutcome,
}

impl HullVerification {
    pub fn all_pass(&self) -> bool {
        self.membership.pass
            && self.strict_convexity.pass
            && self.coordinate_distinct.pass
            && self.monotone_second.pass
    }
}

/// Check every hull-set invariant on `h`, whether it was built by
/// [`positive_hull`] or handcrafted/loaded from a file.
///
/// Strict convexity is checked exactly: each member is tested against the
/// convex hull of the remaining members with [`in_convex_hull`], a code path
/// disjoint from the monotone-chain builder.
pub fn verify_hull_properties(h: &HullSet) -> HullVerification {
    let pts = h.points();
    let r2 = h.radius * h.radius;

    let mut membership = CheckOutcome::ok();
    for &(x, y) in &pts {
        if x < 0 || y < 0 || x * x + y * y > r2 {
            membership = CheckOutcome::fail(format!("({x}, {y}) outside nonnegative ball"));
            break;
        }
    }
    if h.dim != 2 {
        membership = CheckOutcome::fail(format!("dimension {} unsupported", h.dim));
    }

    let mut strict = CheckOutcome::ok();
    for (i, &p) in pts.iter().enumerate() {
        let others: Vec<(i64, i64)> = pts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &q)| q)
            .collect();
        if in_convex_hull(p, &others) {
            strict = CheckOutcome::fail(format!(
                "({}, {}) is a convex combination of the other members",
                p.0, p.1
            ));
            break;
        }
    }

    let mut distinct = CheckOutcome::ok();
    'outer: for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].0 == pts[j].0 || pts[i].1 == pts[j].1 {
                distinct = CheckOutcome::fail(format!(
                    "members ({}, {}) and ({}, {}) share a coordinate",
                    pts[i].0, pts[i].1, pts[j].0, pts[j].1
                ));
                break 'outer;
            }
        }
    }

    let mut monotone = CheckOutcome::ok();
    for w in pts.windows(2) {
        if !(w[0].0 < w[1].0 && w[0].1 > w[1].1) {
            monotone = CheckOutcome::fail(format!(
                "({}, {}) -> ({}, {}) is not x-increasing / y-decreasing",
                w[0].0, w[0].1, w[1].0, w[1].1
            ));
            break;
        }
    }

    HullVerification {
        membership,
        strict_convexity: strict,
        coordinate_distinct: distinct,
        monotone_second: monotone,
    }
}

/// Least-squares slope of `log |V2+(r)|` against `log r`.
///
/// Needs at least four distinct radii, each in `1..=8192`.
pub fn hull_growth_exponent(radii: &[i64]) -> Result<f64> {
    if radii.len() < 4 {
        return Err(ObstructorError::InvalidParam(format!(
            "growth fit needs at least 4 radii, got {}",
            radii.len()
        )));
    }
    let mut sorted = radii.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(ObstructorError::InvalidParam(
            "growth fit radii must be distinct".into(),
        ));
    }
    if sorted[0] < 1 || *sorted.last().unwrap() > 8192 {
        return Err(ObstructorError::InvalidParam(
            "growth fit radii must lie in 1..=8192".into(),
        ));
    }
    let mut xs = Vec::with_capacity(radii.len());
    let mut ys = Vec::with_capacity(radii.len());
    for &r in radii {
        let size = positive_hull(r)?.len();
        xs.push((r as f64).ln());
        ys.push((size as f64).ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(h: &HullSet) -> Vec<(i64, i64)> {
        h.points()
    }

    #[test]
    fn ball_examples() {
        assert_eq!(lattice_ball(2, 0).unwrap().len(), 1);
        let b1: Vec<_> = lattice_ball(2, 1)
            .unwrap()
            .iter()
            .map(|v| (v.coords[0], v.coords[1]))
            .collect();
        assert_eq!(b1.len(), 5);
        for p in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)] {
            assert!(b1.contains(&p));
        }
        assert_eq!(lattice_ball(2, 2).unwrap().len(), 13);
        assert_eq!(lattice_ball(1, 3).unwrap().len(), 7);
        assert_eq!(lattice_ball(3, 1).unwrap().len(), 7);
    }

    #[test]
    fn ball_rejects_bad_input() {
        assert!(lattice_ball(2, -1).is_err());
        assert!(lattice_ball(0, 1).is_err());
        assert!(lattice_ball(4, 1).is_err());
    }

    #[test]
    fn hull_small_exact_sets() {
        assert_eq!(pts(&positive_hull(1).unwrap()), vec![(0, 1), (1, 0)]);
        assert_eq!(pts(&positive_hull(2).unwrap()), vec![(0, 2), (2, 0)]);
        assert_eq!(pts(&positive_hull(3).unwrap()), vec![(0, 3), (2, 2), (3, 0)]);
        assert_eq!(
            pts(&positive_hull(4).unwrap()),
            vec![(0, 4), (2, 3), (3, 2), (4, 0)]
        );
        assert!(positive_hull(0).is_err());
    }

    #[test]
    fn hull_axis_extremes_always_present() {
        for r in 1..=100 {
            let h = positive_hull(r).unwrap();
            let p = pts(&h);
            assert_eq!(p[0], (0, r));
            assert_eq!(*p.last().unwrap(), (r, 0));
        }
    }

    #[test]
    fn verification_passes_on_built_hulls() {
        for r in [1, 2, 3, 5, 8, 13, 21, 64] {
            let v = verify_hull_properties(&positive_hull(r).unwrap());
            assert!(v.all_pass(), "r={r}: {v:?}");
        }
    }

    #[test]
    fn verification_catches_shared_coordinate() {
        let h = HullSet {
            radius: 2,
            dim: 2,
            vectors: vec![
                LatticeVector::new(vec![1, 0]),
                LatticeVector::new(vec![1, 1]),
            ],
        };
        let v = verify_hull_properties(&h);
        assert!(!v.coordinate_distinct.pass);
    }

    #[test]
    fn verification_catches_collinear_triple() {
        let h = HullSet {
            radius: 2,
            dim: 2,
            vectors: vec![
                LatticeVector::new(vec![0, 2]),
                LatticeVector::new(vec![1, 1]),
                LatticeVector::new(vec![2, 0]),
            ],
        };
        let v = verify_hull_properties(&h);
        assert!(!v.strict_convexity.pass);
    }

    /// Independent oracle: a positive-quadrant ball point is a hull vertex iff
    /// it is not a convex combination of the rest of the full ball.
    fn oracle_hull(r: i64) -> Vec<(i64, i64)> {
        let ball: Vec<(i64, i64)> = lattice_ball(2, r)
            .unwrap()
            .iter()
            .map(|v| (v.coords[0], v.coords[1]))
            .collect();
        let mut out = Vec::new();
        for &p in ball.iter().filter(|p| p.0 >= 0 && p.1 >= 0) {
            let others: Vec<(i64, i64)> = ball.iter().copied().filter(|&q| q != p).collect();
            if !in_convex_hull(p, &others) {
                out.push(p);
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn hull_matches_membership_oracle() {
        for r in 1..=8 {
            assert_eq!(pts(&positive_hull(r).unwrap()), oracle_hull(r), "r={r}");
        }
    }

    /// Supporting-line sweep: reflect the positive hull into all four
    /// quadrants and check that no ball point lies strictly outside any
    /// edge of the resulting polygon.
    #[test]
    fn ball_contained_in_reflected_hull_up_to_r64() {
        for r in [1, 2, 3, 4, 7, 16, 33, 64] {
            let chain = pts(&positive_hull(r).unwrap());
            let mut poly: Vec<(i64, i64)> = Vec::new();
            for &(x, y) in &chain {
                for (sx, sy) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
                    poly.push((sx * x, sy * y));
                }
            }
            poly.sort_unstable();
            poly.dedup();
            // Counterclockwise angular order, exact comparator.
            let half = |p: (i64, i64)| i32::from(!(p.1 > 0 || (p.1 == 0 && p.0 > 0)));
            poly.sort_by(|&a, &b| {
                half(a)
                    .cmp(&half(b))
                    .then_with(|| 0.cmp(&cross((0, 0), a, b)))
            });
            let ball = lattice_ball(2, r).unwrap();
            for e in 0..poly.len() {
                let a = poly[e];
                let b = poly[(e + 1) % poly.len()];
                for v in &ball {
                    let p = (v.coords[0], v.coords[1]);
                    assert!(
                        cross(a, b, p) >= 0,
                        "r={r}: {p:?} strictly outside edge {a:?}-{b:?}"
                    );
                }
            }
        }
    }

    /// Strict convexity in the form used by the unique-path arguments: a
    /// multiset of m members summing to m*g for a member g forces every
    /// element to equal g. Exhaustive for r <= 4, m <= 4.
    #[test]
    fn equal_sum_forces_equal_members() {
        for r in 1..=4 {
            let h = positive_hull(r).unwrap();
            let p = pts(&h);
            let idx = p.len();
            for m in 1..=4usize {
                // multisets as non-decreasing index vectors
                let mut pick = vec![0usize; m];
                'multisets: loop {
                    let sum = pick
                        .iter()
                        .fold((0i64, 0i64), |acc, &i| (acc.0 + p[i].0, acc.1 + p[i].1));
                    for &g in &p {
                        if sum == (g.0 * m as i64, g.1 * m as i64) {
                            assert!(
                                pick.iter().all(|&i| p[i] == g),
                                "r={r}: non-constant multiset {pick:?} sums to {m}*{g:?}"
                            );
                        }
                    }
                    let Some(j) = (0..m).rev().find(|&j| pick[j] + 1 < idx) else {
                        break 'multisets;
                    };
                    let v = pick[j] + 1;
                    for slot in pick.iter_mut().skip(j) {
                        *slot = v;
                    }
                }
            }
        }
    }

    #[test]
    fn growth_fit_input_validation() {
        assert!(hull_growth_exponent(&[64, 128, 256]).is_err());
        assert!(hull_growth_exponent(&[64, 64, 128, 256]).is_err());
        assert!(hull_growth_exponent(&[64, 128, 256, 16384]).is_err());
    }

    proptest! {
        #[test]
        fn hull_size_nondecreasing(r in 1i64..200) {
            let a = positive_hull(r).unwrap().len();
            let b = positive_hull(r + 1).unwrap().len();
            prop_assert!(b >= a);
        }

        #[test]
        fn hull_members_are_ball_points(r in 1i64..300) {
            let h = positive_hull(r).unwrap();
            for v in &h.vectors {
                prop_assert!(v.norm_sq() <= r * r);
                prop_assert!(v.coords.iter().all(|&c| c >= 0));
            }
        }
    }
}
