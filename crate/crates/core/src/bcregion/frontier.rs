use std::cmp::Ordering;

/// Rates below this many nats are rounding noise.
const RATE_FLOOR: f64 = 1e-12;

/// Nonnegative secrecy rate pair, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    /// Clamps both components at zero; rates within rounding of zero become
    /// exactly zero.
    pub fn clamped(self) -> Self {
        let snap = |r: f64| if r < RATE_FLOOR { 0.0 } else { r };
        Self {
            r1: snap(self.r1),
            r2: snap(self.r2),
        }
    }

    /// Weak dominance within `tol`: `self ≥ other − tol` componentwise.
    pub fn covers(&self, other: &RatePair, tol: f64) -> bool {
        self.r1 >= other.r1 - tol && self.r2 >= other.r2 - tol
    }
}

/// A down-closed rate region.
#[derive(Debug, Clone, PartialEq)]
pub enum RateRegion {
    /// Everything below a single corner.
    Rectangle { corner: RatePair },
    /// Union of rectangles under Pareto-maximal points, sorted by `r1`
    /// ascending and `r2` descending.
    Frontier { points: Vec<RatePair> },
}

impl RateRegion {
    pub fn frontier(points: Vec<RatePair>) -> Self {
        RateRegion::Frontier {
            points: pareto_front(&points),
        }
    }

    /// Maximal points of the region.
    pub fn points(&self) -> Vec<RatePair> {
        match self {
            RateRegion::Rectangle { corner } => vec![*corner],
            RateRegion::Frontier { points } => points.clone(),
        }
    }

    /// Membership of a rate pair within `tol`.
    pub fn contains(&self, p: &RatePair, tol: f64) -> bool {
        match self {
            RateRegion::Rectangle { corner } => corner.covers(p, tol),
            RateRegion::Frontier { points } => points.iter().any(|q| q.covers(p, tol)),
        }
    }

    /// Inclusion test: every maximal point of `self` lies in `outer`.
    pub fn is_subset_of(&self, outer: &RateRegion, tol: f64) -> bool {
        self.points().iter().all(|p| outer.contains(p, tol))
    }

    /// Largest `r1` and `r2` over the region.
    pub fn extent(&self) -> (f64, f64) {
        self.points()
            .iter()
            .fold((0.0, 0.0), |(a, b), p| (f64::max(a, p.r1), f64::max(b, p.r2)))
    }
}

/// Pareto-maximal subset sorted by `r1` ascending (so `r2` strictly
/// descending). Duplicates and weakly dominated points are dropped.
pub fn pareto_front(points: &[RatePair]) -> Vec<RatePair> {
    let mut sorted: Vec<RatePair> = points
        .iter()
        .copied()
        .filter(|p| p.r1.is_finite() && p.r2.is_finite())
        .collect();
    // r1 descending, ties broken by r2 descending
    sorted.sort_by(|a, b| match b.r1.total_cmp(&a.r1) {
        Ordering::Equal => b.r2.total_cmp(&a.r2),
        o => o,
    });
    let mut out: Vec<RatePair> = Vec::new();
    let mut best_r2 = f64::NEG_INFINITY;
    for p in sorted {
        if p.r2 > best_r2 {
            out.push(p);
            best_r2 = p.r2;
        }
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(a: f64, b: f64) -> RatePair {
        RatePair::new(a, b)
    }

    #[test]
    fn single_point() {
        assert_eq!(pareto_front(&[rp(1.0, 1.0)]), vec![rp(1.0, 1.0)]);
    }

    #[test]
    fn dominated_point_removed() {
        let f = pareto_front(&[rp(1.0, 2.0), rp(2.0, 1.0), rp(1.0, 1.0)]);
        assert_eq!(f, vec![rp(1.0, 2.0), rp(2.0, 1.0)]);
    }

    #[test]
    fn ties_and_duplicates() {
        let f = pareto_front(&[rp(1.0, 1.0), rp(2.0, 1.0), rp(2.0, 1.0), rp(0.0, 1.0)]);
        assert_eq!(f, vec![rp(2.0, 1.0)]);
        assert!(pareto_front(&[]).is_empty());
    }

    #[test]
    fn clamping_normalizes_negative_zero() {
        let p = rp(-0.3, -0.0).clamped();
        assert_eq!(rp(1e-15, 0.5).clamped(), rp(0.0, 0.5));
        assert_eq!(p, rp(0.0, 0.0));
        assert!(p.r2.is_sign_positive());
    }

    #[test]
    fn containment() {
        let rect = RateRegion::Rectangle { corner: rp(1.0, 1.0) };
        let front = RateRegion::frontier(vec![rp(0.5, 2.0), rp(2.0, 0.5)]);
        assert!(rect.contains(&rp(1.0, 0.2), 0.0));
        assert!(!rect.contains(&rp(1.1, 0.2), 0.0));
        assert!(front.contains(&rp(0.4, 1.9), 0.0));
        assert!(!front.contains(&rp(1.0, 1.0), 0.0));
        assert!(!rect.is_subset_of(&front, 1e-9));
        assert!(RateRegion::Rectangle { corner: rp(0.5, 0.5) }.is_subset_of(&front, 0.0));
    }
}
