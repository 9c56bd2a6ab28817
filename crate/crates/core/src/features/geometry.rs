//! Convex hull and diameter of integer point sets.

/// Integer lattice point `(x, y)`.
pub type Point = (i64, i64);

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn dist_sq(a: Point, b: Point) -> i64 {
    (a.0 - b.0).pow(2) + (a.1 - b.1).pow(2)
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, without
/// collinear points. Input order does not matter.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Squared diameter of a convex polygon (counter-clockwise) by rotating calipers.
pub fn hull_diameter_sq(hull: &[Point]) -> i64 {
    match hull.len() {
        0 | 1 => 0,
        2 => dist_sq(hull[0], hull[1]),
        n => {
            let mut best = 0;
            let mut j = 1;
            for i in 0..n {
                let next = (i + 1) % n;
                // advance the antipodal pointer while the triangle area grows
                while cross(hull[i], hull[next], hull[(j + 1) % n]) > cross(hull[i], hull[next], hull[j]) {
                    j = (j + 1) % n;
                }
                best = best.max(dist_sq(hull[i], hull[j])).max(dist_sq(hull[next], hull[j]));
            }
            best
        }
    }
}

/// Squared diameter of an arbitrary point set.
pub fn diameter_sq(points: &[Point]) -> i64 {
    hull_diameter_sq(&convex_hull(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_hull() {
        let pts = [(0, 0), (2, 0), (1, 1), (2, 2), (0, 2), (1, 0)];
        assert_eq!(convex_hull(&pts), vec![(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(diameter_sq(&pts), 8);
    }

    #[test]
    fn degenerate_sets() {
        assert_eq!(diameter_sq(&[]), 0);
        assert_eq!(diameter_sq(&[(3, 3)]), 0);
        assert_eq!(diameter_sq(&[(0, 0), (0, 5), (0, 2)]), 25);
    }

    proptest! {
        #[test]
        fn calipers_match_brute_force(pts in proptest::collection::vec((-30i64..30, -30i64..30), 1..60)) {
            let brute = pts.iter()
                .flat_map(|&a| pts.iter().map(move |&b| dist_sq(a, b)))
                .max()
                .unwrap();
            prop_assert_eq!(diameter_sq(&pts), brute);
        }
    }
}
