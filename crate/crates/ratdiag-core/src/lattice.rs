//! Newton polygons and lattice-point counts, all in exact integer arithmetic.
//!
//! The generic genus of a plane curve equals the number of interior lattice
//! points of the Newton polygon of its defining polynomial. Interior points
//! are enumerated directly and cross-checked against Pick's theorem
//! (2A = 2I + B - 2) on every call.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

pub type Point = (i64, i64);

/// Convex hull of a support set. `vertices` walk counterclockwise starting
/// from the lexicographically smallest vertex; no three consecutive vertices
/// are collinear. A hull that collapses to a segment or a single point is
/// flagged `degenerate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolygon {
    pub vertices: Vec<Point>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    EmptySupport,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::EmptySupport => write!(f, "empty support has no Newton polygon"),
        }
    }
}

fn cross(o: Point, a: Point, b: Point) -> i128 {
    let (ox, oy) = o;
    let (ax, ay) = a;
    let (bx, by) = b;
    (ax - ox) as i128 * (by - oy) as i128 - (ay - oy) as i128 * (bx - ox) as i128
}

/// Convex hull by Andrew's monotone chain; collinear boundary points are
/// dropped so vertices are exactly the extreme points.
pub fn newton_polygon(support: &[Point]) -> Result<LatticePolygon, LatticeError> {
    if support.is_empty() {
        return Err(LatticeError::EmptySupport);
    }
    let mut pts: Vec<Point> = support.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() == 1 {
        return Ok(LatticePolygon { vertices: pts, degenerate: true });
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    if lower.len() == 2 && upper.len() == 2 {
        // All points collinear: a segment between the two extremes.
        return Ok(LatticePolygon { vertices: lower, degenerate: true });
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(LatticePolygon { vertices: lower, degenerate: false })
}

impl LatticePolygon {
    /// Twice the enclosed area (shoelace); zero for degenerate hulls.
    pub fn area2(&self) -> i128 {
        if self.degenerate {
            return 0;
        }
        let n = self.vertices.len();
        let mut s: i128 = 0;
        for i in 0..n {
            let (x0, y0) = self.vertices[i];
            let (x1, y1) = self.vertices[(i + 1) % n];
            s += x0 as i128 * y1 as i128 - x1 as i128 * y0 as i128;
        }
        s
    }

    /// Lattice points on the boundary: sum of gcds of edge vectors.
    pub fn boundary_lattice_points(&self) -> i64 {
        match self.vertices.len() {
            1 => 1,
            2 => {
                let (x0, y0) = self.vertices[0];
                let (x1, y1) = self.vertices[1];
                (x1 - x0).gcd(&(y1 - y0)) + 1
            }
            n => {
                let mut b = 0i64;
                for i in 0..n {
                    let (x0, y0) = self.vertices[i];
                    let (x1, y1) = self.vertices[(i + 1) % n];
                    b += (x1 - x0).gcd(&(y1 - y0));
                }
                b
            }
        }
    }

    fn contains_strictly(&self, p: Point) -> bool {
        if self.degenerate {
            return false;
        }
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) > 0)
    }
}

/// Interior lattice points in ascending (x, y) order. The count is verified
/// against Pick's theorem before returning.
pub fn interior_lattice_points(hull: &LatticePolygon) -> Vec<Point> {
    if hull.degenerate {
        return Vec::new();
    }
    let xs: Vec<i64> = hull.vertices.iter().map(|p| p.0).collect();
    let ys: Vec<i64> = hull.vertices.iter().map(|p| p.1).collect();
    let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    let mut interior = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            if hull.contains_strictly((x, y)) {
                interior.push((x, y));
            }
        }
    }
    let pick = (hull.area2() - hull.boundary_lattice_points() as i128 + 2) / 2;
    assert_eq!(
        interior.len() as i128,
        pick,
        "interior enumeration disagrees with Pick's theorem"
    );
    interior
}

/// Number of interior lattice points of the Newton polygon of the support:
/// the genus of a curve with generic coefficients on that support.
pub fn generic_genus(support: &[Point]) -> Result<usize, LatticeError> {
    let hull = newton_polygon(support)?;
    Ok(interior_lattice_points(&hull).len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_hull() {
        let pts = [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (1, 0)];
        let hull = newton_polygon(&pts).unwrap();
        assert!(!hull.degenerate);
        assert_eq!(hull.vertices, alloc::vec![(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(hull.area2(), 8);
        assert_eq!(hull.boundary_lattice_points(), 8);
        assert_eq!(interior_lattice_points(&hull), alloc::vec![(1, 1)]);
    }

    #[test]
    fn triangle_genus_by_pick() {
        // (0,0),(4,2),(2,4): area 6, boundary 6, so 4 interior points.
        let pts = [(0, 0), (4, 2), (2, 4)];
        assert_eq!(generic_genus(&pts).unwrap(), 4);
        let hull = newton_polygon(&pts).unwrap();
        assert_eq!(hull.area2(), 12);
        assert_eq!(hull.boundary_lattice_points(), 6);
    }

    #[test]
    fn degenerate_supports() {
        let hull = newton_polygon(&[(1, 1)]).unwrap();
        assert!(hull.degenerate);
        assert_eq!(interior_lattice_points(&hull).len(), 0);
        let hull = newton_polygon(&[(0, 0), (2, 2), (4, 4)]).unwrap();
        assert!(hull.degenerate);
        assert_eq!(hull.vertices, alloc::vec![(0, 0), (4, 4)]);
        assert_eq!(hull.boundary_lattice_points(), 5);
        assert!(newton_polygon(&[]).is_err());
    }

    #[test]
    fn collinear_points_are_not_vertices() {
        let pts = [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (0, 2), (1, 2), (0, 1)];
        let hull = newton_polygon(&pts).unwrap();
        assert_eq!(hull.vertices.len(), 4);
    }
}
