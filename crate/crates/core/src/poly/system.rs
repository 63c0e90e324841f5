//! Common affine zeros of two bivariate polynomials.

use std::cmp::Ordering;
use std::fmt;

use super::{Axis, BiPoly};
use crate::error::{AodeError, Result};
use crate::numbers::{all_roots, AlgebraicNumber, APoly};

type A = AlgebraicNumber;

/// A point `(y, z)` of the plane.
#[derive(Clone, PartialEq, Eq)]
pub struct Point {
    pub y: A,
    pub z: A,
}

impl Point {
    pub fn new(y: A, z: A) -> Self {
        Point { y, z }
    }

    /// Lexicographic order on the canonical numeric order of the coordinates.
    pub fn numeric_cmp(&self, other: &Self) -> Ordering {
        self.y.numeric_cmp(&other.y).then_with(|| self.z.numeric_cmp(&other.z))
    }

    pub fn render(&self) -> String {
        format!("({}, {})", self.y.render(), self.z.render())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn distinct_roots(p: &APoly) -> Result<Vec<A>> {
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    Ok(all_roots(p)?.into_iter().map(|(r, _)| r).collect())
}

/// All common zeros of `f` and `g` in the affine plane, sorted. The
/// resultant in `z` gives the candidate `y` coordinates; at each of them the
/// `z` coordinates are the roots of the gcd of the two slices.
pub fn solve_system(f: &BiPoly, g: &BiPoly) -> Result<Vec<Point>> {
    if f.is_zero() || g.is_zero() {
        return Err(AodeError::CommonComponent);
    }
    let res: APoly = f.as_poly_in_z().resultant(&g.as_poly_in_z());
    if res.is_zero() {
        return Err(AodeError::CommonComponent);
    }
    let mut out = Vec::new();
    for y0 in distinct_roots(&res)? {
        let fs = f.univariate_slice(Axis::FixY, &y0);
        let gs = g.univariate_slice(Axis::FixY, &y0);
        if fs.is_zero() && gs.is_zero() {
            return Err(AodeError::CommonComponent);
        }
        let h = fs.gcd(&gs);
        for z0 in distinct_roots(&h)? {
            out.push(Point::new(y0.clone(), z0));
        }
    }
    out.sort_by(|p, q| p.numeric_cmp(q));
    Ok(out)
}
