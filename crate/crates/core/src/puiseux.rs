//! Places of the curve `F(y, z) = 0` at a finite point.
//!
//! Branches are computed by the rational Newton–Puiseux method. For an edge
//! of slope `m/q` and a root `ξ` of its characteristic polynomial the
//! substitution `x = ξ^v X^q`, `z = X^m (ξ^u + Z)` with `uq - vm = 1` avoids
//! taking `q`-th roots, and every root `ξ` (over the algebraic closure)
//! yields distinct places, so conjugate expansions under `t ↦ ζt` never
//! appear twice. Once the root is simple the remaining expansion is a
//! regular implicit function computed by Newton iteration.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{AodeError, Result};
use crate::numbers::json::value_to_json;
use crate::numbers::tower::{common_field, roots_in_field};
use crate::numbers::{all_roots, AlgebraicNumber, APoly};
use crate::poly::{BiPoly, Point};
use crate::series::{Order, TruncatedSeries};
use crate::upoly::UniPoly;

type A = AlgebraicNumber;

/// An edge of the Newton polygon relevant to branches `z = a y^μ + ...`
/// with `μ > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// The exponent `μ`.
    pub slope: BigRational,
    /// Monomials `(deg_y, deg_z)` on the edge, by increasing `deg_z`.
    pub points: Vec<(usize, usize)>,
}

impl Edge {
    fn q(&self) -> usize {
        self.slope.denom().try_into().unwrap()
    }

    fn m(&self) -> usize {
        self.slope.numer().try_into().unwrap()
    }

    /// Weighted degree `q*deg_y + m*deg_z` shared by the edge monomials.
    fn level(&self) -> usize {
        let (i, j) = self.points[0];
        self.q() * i + self.m() * j
    }

    /// Polynomial in `T` whose roots are the values of `z^q / y^m` along the
    /// branches of this edge.
    fn characteristic(&self, f: &BiPoly) -> APoly {
        let j0 = self.points[0].1;
        let mut c = Vec::new();
        for &(i, j) in &self.points {
            let k = (j - j0) / self.q();
            if c.len() <= k {
                c.resize(k + 1, A::zero());
            }
            c[k] = f.coeff(i, j);
        }
        UniPoly::new(c)
    }
}

/// Lowest `deg_y` of the coefficient of each power of `z`.
fn lowest_y_degrees(f: &BiPoly) -> Vec<Option<usize>> {
    let mut v: Vec<Option<usize>> = vec![None; f.deg_z() + 1];
    for (&(i, j), _) in f.terms() {
        v[j] = Some(v[j].map_or(i, |w| w.min(i)));
    }
    v
}

fn hull_edges(f: &BiPoly) -> Vec<Edge> {
    let v = lowest_y_degrees(f);
    let pts: Vec<(usize, usize)> = v.iter().enumerate().filter_map(|(j, w)| w.map(|w| (j, w))).collect();
    let Some(&(jstart, _)) = pts.first() else {
        return Vec::new();
    };
    let vmin = pts.iter().map(|p| p.1).min().unwrap();
    let jend = pts.iter().find(|p| p.1 == vmin).unwrap().0;
    let cand: Vec<(usize, usize)> = pts.into_iter().filter(|p| p.0 >= jstart && p.0 <= jend).collect();
    // lower convex hull by the monotone chain, points as (j, i)
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &(j, i) in &cand {
        let p = (j as i64, i as i64);
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2)
        .map(|w| {
            let (ja, ia) = w[0];
            let (jb, ib) = w[1];
            let slope = BigRational::new(BigInt::from(ia - ib), BigInt::from(jb - ja));
            let (q, m): (usize, usize) = (slope.denom().try_into().unwrap(), slope.numer().try_into().unwrap());
            let level = q * ia as usize + m * ja as usize;
            let mut points: Vec<(usize, usize)> =
                f.terms().map(|(&k, _)| k).filter(|&(i, j)| q * i + m * j == level).collect();
            points.sort_by_key(|p| p.1);
            Edge { slope, points }
        })
        .collect()
}

/// Edges of the Newton polygon of `f` giving branches through the origin.
pub fn newton_polygon(f: &BiPoly) -> Result<Vec<Edge>> {
    let edges = hull_edges(f);
    if edges.is_empty() {
        return Err(AodeError::DegenerateInput);
    }
    Ok(edges)
}

/// `2(deg_y F - 1) deg_z F + 1`.
pub fn default_bound(f: &BiPoly) -> usize {
    2 * f.deg_y().saturating_sub(1) * f.deg_z() + 1
}

/// How a place sits relative to the coordinate axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RamificationKind {
    None,
    ZRamification,
    YRamification,
    Singular,
}

impl RamificationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RamificationKind::None => "none",
            RamificationKind::ZRamification => "z_ramification",
            RamificationKind::YRamification => "y_ramification",
            RamificationKind::Singular => "singular",
        }
    }
}

/// A place `(A, B)` with `A = c0 + λ t^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct Place {
    center: Point,
    e: usize,
    lambda: A,
    a: TruncatedSeries,
    b: TruncatedSeries,
    center_multiplicity: usize,
}

impl Place {
    pub fn new(center: Point, lambda: A, e: usize, b: TruncatedSeries, center_multiplicity: usize) -> Self {
        let mut ac = vec![A::zero(); e + 1];
        ac[0] = center.y.clone();
        ac[e] = lambda.clone();
        Place { center, e, lambda, a: TruncatedSeries::exact(ac), b, center_multiplicity }
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Ramification index: `A - c0 = λ t^e`.
    pub fn e(&self) -> usize {
        self.e
    }

    pub fn lambda(&self) -> &A {
        &self.lambda
    }

    pub fn a(&self) -> &TruncatedSeries {
        &self.a
    }

    pub fn b(&self) -> &TruncatedSeries {
        &self.b
    }

    pub fn center_multiplicity(&self) -> usize {
        self.center_multiplicity
    }

    /// `ord_c(B)`, the order of `B - c1`.
    pub fn ord_b_at_center(&self) -> Result<usize> {
        let d = self.b.sub(&TruncatedSeries::constant(self.center.z.clone()));
        match d.order() {
            Order::Finite(k) => Ok(k),
            o => Err(AodeError::InsufficientPrecision(format!("ord_c(B) {o} is not certified"))),
        }
    }

    /// `min(ord_c A, ord_c B)`.
    pub fn order(&self) -> Result<usize> {
        Ok(self.e.min(self.ord_b_at_center()?))
    }

    pub fn tangent(&self) -> Result<(A, A)> {
        let n = self.e;
        let m = self.ord_b_at_center()?;
        let bm = self.b.coeff(m).expect("certified");
        Ok(match n.cmp(&m) {
            Ordering::Equal => (self.lambda.clone(), bm),
            Ordering::Less => (self.lambda.clone(), A::zero()),
            Ordering::Greater => (A::zero(), bm),
        })
    }

    pub fn ramification_kind(&self) -> Result<RamificationKind> {
        if self.center_multiplicity > 1 {
            return Ok(RamificationKind::Singular);
        }
        let (n, m) = (self.e, self.ord_b_at_center()?);
        Ok(if n > m && m == 1 {
            RamificationKind::ZRamification
        } else if m > n && n == 1 {
            RamificationKind::YRamification
        } else {
            RamificationKind::None
        })
    }

    pub fn to_json(&self) -> Result<Value> {
        let (tv0, tv1) = self.tangent()?;
        Ok(json!({
            "center": [value_to_json(&self.center.y), value_to_json(&self.center.z)],
            "e": self.e,
            "A": self.a.to_json(),
            "B": self.b.to_json(),
            "order": self.order()?,
            "tangent": [value_to_json(&tv0), value_to_json(&tv1)],
            "kind": self.ramification_kind()?.as_str(),
        }))
    }

    /// Residual `F(A, B)` as a truncated series.
    pub fn residual(&self, f: &BiPoly) -> TruncatedSeries {
        eval_series(f, &self.a, &self.b)
    }
}

/// `F(a(t), b(t))` with precision tracking.
pub fn eval_series(f: &BiPoly, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let pz = f.as_poly_in_z();
    let mut acc = TruncatedSeries::zero();
    for c in pz.coeffs().iter().rev() {
        let mut cy = TruncatedSeries::zero();
        for k in c.coeffs().iter().rev() {
            cy = cy.mul(a).add(&TruncatedSeries::constant(k.clone()));
        }
        acc = acc.mul(b).add(&cy);
    }
    acc
}

fn pow_i(x: &A, e: i64) -> A {
    if e >= 0 {
        x.pow(e as u64)
    } else {
        x.inv().pow((-e) as u64)
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Accumulated substitution `x = Λ T^E`, `z = P(T) + κ T^M Z`.
#[derive(Clone)]
struct Transform {
    lambda: A,
    e: usize,
    p: Vec<A>,
    kappa: A,
    m: usize,
}

impl Transform {
    fn identity() -> Self {
        Transform { lambda: A::one(), e: 1, p: Vec::new(), kappa: A::one(), m: 0 }
    }

    /// Composes with `T = ξ^v T'^q`, `Z = T'^m (ξ^u + Z')`.
    fn then(&self, xi: &A, q: usize, m: usize, u: i64, v: i64) -> Self {
        let xv = pow_i(xi, v);
        let mut p = vec![A::zero(); self.p.len().saturating_sub(1) * q + 1];
        let mut s = A::one();
        for (k, c) in self.p.iter().enumerate() {
            if k > 0 {
                s = s.mul(&xv);
            }
            if !c.is_zero() {
                p[k * q] = c.mul(&s);
            }
        }
        let kappa = self.kappa.mul(&pow_i(xi, v * self.m as i64));
        let top = q * self.m + m;
        if p.len() <= top {
            p.resize(top + 1, A::zero());
        }
        p[top] = p[top].add(&kappa.mul(&pow_i(xi, u)));
        Transform { lambda: self.lambda.mul(&pow_i(&xv, self.e as i64)), e: self.e * q, p, kappa, m: top }
    }
}

/// `h(ξ^v X^q, X^m (ξ^u + Z)) / X^level`.
fn substitute(h: &BiPoly, edge: &Edge, xi: &A, u: i64, v: i64) -> BiPoly {
    let (q, m, level) = (edge.q(), edge.m(), edge.level());
    let mut terms = Vec::new();
    for (&(i, j), c) in h.terms() {
        let xdeg = q * i + m * j - level;
        for k in 0..=j {
            let coeff = c
                .mul(&pow_i(xi, v * i as i64 + u * (j - k) as i64))
                .mul(&A::from_i64(binomial(j, k)));
            terms.push(((xdeg, k), coeff));
        }
    }
    BiPoly::from_terms(terms)
}

fn trunc_mul(a: &[A], b: &[A], n: usize) -> Vec<A> {
    let mut out = vec![A::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

fn trunc_inv(a: &[A], n: usize) -> Vec<A> {
    let inv0 = a[0].inv();
    let mut out: Vec<A> = Vec::with_capacity(n);
    for k in 0..n {
        if k == 0 {
            out.push(inv0.clone());
            continue;
        }
        let mut s = A::zero();
        for i in 1..=k.min(a.len().saturating_sub(1)) {
            s = s.add(&a[i].mul(&out[k - i]));
        }
        out.push(s.neg().mul(&inv0));
    }
    out
}

fn eval_trunc(hz: &UniPoly<APoly>, r: &[A], n: usize) -> Vec<A> {
    let mut acc = vec![A::zero(); n];
    for c in hz.coeffs().iter().rev() {
        acc = trunc_mul(&acc, r, n);
        for (i, x) in c.coeffs().iter().enumerate().take(n) {
            acc[i] = acc[i].add(x);
        }
    }
    acc
}

/// The root `Z(X)` with `Z(0) = 0` of `h`, where `h_Z(0, 0) ≠ 0`, to `n`
/// coefficients. Returns whether the truncation is an exact root.
fn regular_root(h: &BiPoly, n: usize) -> (Vec<A>, bool) {
    let hz = h.as_poly_in_z();
    let dz = h.separant().as_poly_in_z();
    let mut r = vec![A::zero()];
    let mut p = 1;
    while p < n {
        let p2 = (2 * p).min(n);
        r.resize(p2, A::zero());
        let val = eval_trunc(&hz, &r, p2);
        let der = eval_trunc(&dz, &r, p2);
        let step = trunc_mul(&val, &trunc_inv(&der, p2), p2);
        for (x, s) in r.iter_mut().zip(step) {
            *x = x.sub(&s);
        }
        p = p2;
    }
    r.truncate(n);
    // a terminating root: check the polynomial exactly
    let poly: APoly = UniPoly::new(r.clone());
    let exact = (poly.is_zero() || poly.deg() + 1 < n) && eval_exact(&hz, &poly);
    (r, exact)
}

fn eval_exact(hz: &UniPoly<APoly>, z: &APoly) -> bool {
    let mut acc = APoly::zero();
    for c in hz.coeffs().iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc.is_zero()
}

struct Branch {
    t: Transform,
    /// Root `Z(X)` of the final transformed polynomial.
    r: Vec<A>,
    exact: bool,
}

fn bezout(q: usize, m: usize) -> (i64, i64) {
    // u q - v m = 1
    let e = (q as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    (e.x, -e.y)
}

/// All branches of `h` with positive valuation, each expanded until `z` is
/// certified to `need` coefficients.
fn branches(h: &BiPoly, t: &Transform, need: usize, out: &mut Vec<Branch>) -> Result<()> {
    let jstart = h.terms().map(|(k, _)| k.1).min().unwrap_or(0);
    if jstart > 0 {
        out.push(Branch { t: t.clone(), r: Vec::new(), exact: true });
    }
    for edge in hull_edges(h) {
        let (q, m) = (edge.q(), edge.m());
        let (u, v) = bezout(q, m);
        let phi = edge.characteristic(h);
        for (xi, mult) in all_roots(&phi)? {
            let h1 = substitute(h, &edge, &xi, u, v);
            let t1 = t.then(&xi, q, m, u, v);
            if mult == 1 {
                let n = need.saturating_sub(t1.m).max(1);
                let (r, exact) = regular_root(&h1, n);
                out.push(Branch { t: t1, r, exact });
            } else {
                branches(&h1, &t1, need, out)?;
            }
        }
    }
    Ok(())
}

/// `λ` such that `λ^e = 1/Λ` inside the field of the place, preferring the
/// last root in the canonical order.
fn normalizer(lambda: &A, e: usize, b: &[A]) -> Result<Option<A>> {
    if lambda.is_one() {
        return Ok(None);
    }
    if e == 1 {
        return Ok(Some(lambda.inv()));
    }
    let field = common_field(b.iter().chain(std::iter::once(lambda)))?;
    let mut c = vec![A::zero(); e + 1];
    c[0] = lambda.inv().neg();
    c[e] = A::one();
    let roots = roots_in_field(&UniPoly::new(c), field.as_ref())?;
    Ok(roots.last().map(|r| r.0.clone()))
}

fn place_from_branch(center: &Point, br: Branch, n: usize, mult: usize) -> Result<Place> {
    let Branch { t, r, exact } = br;
    // z(T) = P(T) + κ T^M R(T)
    let len = (t.m + r.len()).max(t.p.len());
    let mut z = vec![A::zero(); len];
    for (k, c) in t.p.iter().enumerate() {
        z[k] = c.clone();
    }
    for (k, c) in r.iter().enumerate() {
        z[t.m + k] = z[t.m + k].add(&t.kappa.mul(c));
    }
    let (lambda, z) = match normalizer(&t.lambda, t.e, &z)? {
        Some(mu) => {
            let mut s = A::one();
            let scaled = z
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if k > 0 {
                        s = s.mul(&mu);
                    }
                    c.mul(&s)
                })
                .collect();
            (A::one(), scaled)
        }
        None => (t.lambda.clone(), z),
    };
    let mut b = z;
    if b.is_empty() {
        b.push(A::zero());
    }
    b[0] = b[0].add(&center.z);
    let b = if exact {
        TruncatedSeries::exact(b)
    } else {
        let certified = t.m + r.len();
        TruncatedSeries::truncated(b, certified.min(n + 1))
    };
    Ok(Place::new(center.clone(), lambda, t.e, b, mult))
}

fn cmp_series_desc(x: &TruncatedSeries, y: &TruncatedSeries) -> Ordering {
    let n = x.coeffs().len().max(y.coeffs().len());
    for k in 0..n {
        let a = x.coeff(k).unwrap_or_else(A::zero);
        let b = y.coeff(k).unwrap_or_else(A::zero);
        match b.numeric_cmp(&a) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// One representative per place of the curve centered at `c`, with `B`
/// certified through `t^n` (or exact when it terminates).
pub fn places_at(f: &BiPoly, c: &Point, n: usize) -> Result<Vec<Place>> {
    let mult = f.multiplicity_at(&c.y, &c.z)?;
    let g = f.translate(&c.y, &c.z);
    let mut raw = Vec::new();
    branches(&g, &Transform::identity(), n + 1, &mut raw)?;
    let mut places = raw
        .into_iter()
        .map(|br| place_from_branch(c, br, n, mult))
        .collect::<Result<Vec<_>>>()?;
    places.sort_by(|p, q| {
        q.e.cmp(&p.e)
            .then_with(|| q.lambda.numeric_cmp(&p.lambda))
            .then_with(|| cmp_series_desc(&p.b, &q.b))
    });
    Ok(places)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::ring::qq;

    fn pt(a: i64, b: i64) -> Point {
        Point::new(A::from_i64(a), A::from_i64(b))
    }

    #[test]
    fn polygon_of_translated_cubic() {
        let f = parse_polynomial("y'^2 - y^3 + 2*y^2 - y").unwrap();
        let e = newton_polygon(&f).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].slope, qq(1, 2));
        assert_eq!(e[0].points, vec![(1, 0), (0, 2)]);
        let node = parse_polynomial("y'^2 - y^2*(1 + y)").unwrap();
        assert_eq!(newton_polygon(&node).unwrap()[0].slope, qq(1, 1));
        assert_eq!(newton_polygon(&parse_polynomial("y' - y").unwrap()).unwrap()[0].slope, qq(1, 1));
        assert_eq!(newton_polygon(&parse_polynomial("y' - 1").unwrap()), Err(AodeError::DegenerateInput));
    }

    #[test]
    fn nodal_cubic_places() {
        let f = parse_polynomial("y'^2 - y^3 - y^2").unwrap();
        let at0 = places_at(&f, &pt(0, 0), 9).unwrap();
        assert_eq!(at0.len(), 2);
        assert_eq!(at0[0].a(), &TruncatedSeries::t());
        assert_eq!(at0[0].b().coeff(1), Some(A::one()));
        assert_eq!(at0[1].b().coeff(1), Some(A::from_i64(-1)));
        for p in &at0 {
            assert_eq!(p.tangent().unwrap().0, A::one());
            assert_eq!(p.ramification_kind().unwrap(), RamificationKind::Singular);
            assert_eq!(p.b().trunc(), Some(9));
        }
        let at1 = places_at(&f, &pt(-1, 0), 9).unwrap();
        assert_eq!(at1.len(), 1);
        let p = &at1[0];
        assert_eq!(p.a(), &TruncatedSeries::exact(vec![A::from_i64(-1), A::zero(), A::one()]));
        assert_eq!(p.b(), &TruncatedSeries::exact(vec![A::zero(), A::one(), A::zero(), A::from_i64(-1)]));
        assert_eq!(p.tangent().unwrap(), (A::zero(), A::one()));
        assert_eq!(p.ramification_kind().unwrap(), RamificationKind::ZRamification);
        assert_eq!(places_at(&f, &pt(1, 0), 9), Err(AodeError::PointNotOnCurve));
    }

    #[test]
    fn residuals_vanish() {
        let f = parse_polynomial("((y'-1)^2 + y^2)^3 - 4*(y'-1)^2*y^2").unwrap();
        let places = places_at(&f, &pt(0, 1), 12).unwrap();
        assert_eq!(places.len(), 4);
        assert_eq!(places.iter().map(|p| p.order().unwrap()).sum::<usize>(), 4);
        for p in &places {
            let r = p.residual(&f);
            assert!(r.order().finite().is_none(), "{r}");
            assert!(r.trunc().unwrap() >= 12);
        }
    }
}
