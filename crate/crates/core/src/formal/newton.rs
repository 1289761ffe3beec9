use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use super::ScalarOperator;

/// Boundary edge of the Newton polygon, from `start` to `end` in the
/// `(j, valuation)` plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonEdge {
    pub start: (usize, i64),
    pub end: (usize, i64),
    pub slope: Ratio<i64>,
    pub length: usize,
}

/// Lower boundary of the convex hull of `⋃_j {(x, y) : x ≤ j, y ≥ v(a_j)}`.
///
/// Edges are sorted by increasing slope. The slope-0 edge (when present)
/// runs from `(0, v_min)` to the largest index attaining `v_min`; the
/// horizontal lengths sum to the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    points: Vec<(usize, i64)>,
    edges: Vec<NewtonEdge>,
    order: usize,
}

impl NewtonPolygon {
    pub fn points(&self) -> &[(usize, i64)] {
        &self.points
    }

    pub fn edges(&self) -> &[NewtonEdge] {
        &self.edges
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn positive_edges(&self) -> impl Iterator<Item = &NewtonEdge> {
        self.edges.iter().filter(|e| e.slope > Ratio::zero())
    }

    /// Slope multiset as `(slope, multiplicity)`, increasing; slope 0 is
    /// listed only with positive multiplicity.
    pub fn slopes(&self) -> Vec<(Ratio<i64>, usize)> {
        self.edges.iter().map(|e| (e.slope, e.length)).collect()
    }

    /// Multiplicity of `s` in the slope multiset.
    pub fn multiplicity(&self, s: Ratio<i64>) -> usize {
        self.edges.iter().filter(|e| e.slope == s).map(|e| e.length).sum()
    }

    pub fn has_positive_slope(&self) -> bool {
        self.positive_edges().next().is_some()
    }

    pub fn max_slope(&self) -> Ratio<i64> {
        self.edges.last().map(|e| e.slope).unwrap_or_else(Ratio::zero)
    }

    /// Least common multiple of slope denominators: the ramification index
    /// after which every slope is an integer.
    pub fn ramification(&self) -> i64 {
        self.edges.iter().fold(1, |acc, e| acc.lcm(e.slope.denom()))
    }
}

pub fn newton_polygon_slopes(l: &ScalarOperator) -> NewtonPolygon {
    let points: Vec<(usize, i64)> =
        l.coeffs().iter().enumerate().filter_map(|(j, a)| a.valuation().map(|v| (j, v))).collect();
    let r = l.order();
    let v_min = points.iter().map(|p| p.1).min().expect("a_r is nonzero");
    let j0 = points.iter().filter(|p| p.1 == v_min).map(|p| p.0).max().expect("nonempty");
    let mut edges = Vec::new();
    if j0 > 0 {
        edges.push(NewtonEdge { start: (0, v_min), end: (j0, v_min), slope: Ratio::zero(), length: j0 });
    }
    // lower hull of the points right of j0, by monotone chain
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &p in points.iter().filter(|p| p.0 >= j0) {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as i64 - a.0 as i64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = b.0 - a.0;
        edges.push(NewtonEdge { start: a, end: b, slope: Ratio::new(b.1 - a.1, len as i64), length: len });
    }
    debug_assert_eq!(edges.iter().map(|e| e.length).sum::<usize>(), r);
    NewtonPolygon { points, edges, order: r }
}

/// Fuchs criterion in δ-form: `v(a_r) = min_j v(a_j)`.
pub fn fuchs_criterion(l: &ScalarOperator) -> bool {
    let vr = l.leading().valuation().expect("a_r is nonzero");
    l.coeffs().iter().filter_map(|a| a.valuation()).all(|v| v >= vr)
}
