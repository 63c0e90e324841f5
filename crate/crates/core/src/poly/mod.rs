//! Bivariate polynomials `F(y, z)` over algebraic numbers, where `z` stands
//! for `y'`.

mod parse;
mod system;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{AodeError, Result};
use crate::numbers::{AlgebraicNumber, APoly};
use crate::upoly::{render_sum, UniPoly};

pub use parse::{parse_number, parse_polynomial, parse_tuple, Expr};
pub use system::{solve_system, Point};
pub use validate::validate_input;

type A = AlgebraicNumber;

#[derive(Clone, PartialEq)]
pub struct BiPoly {
    /// `(deg_y, deg_z) -> coefficient`, zero coefficients never stored.
    terms: BTreeMap<(usize, usize), A>,
}

/// Which variable `univariate_slice` fixes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Fix `z = v`, leaving a polynomial in `y`.
    FixZ,
    /// Fix `y = v`, leaving a polynomial in `z`.
    FixY,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: A) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: A, dy: usize, dz: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((dy, dz), c);
        }
        BiPoly { terms }
    }

    pub fn y() -> Self {
        Self::monomial(A::one(), 1, 0)
    }

    pub fn z() -> Self {
        Self::monomial(A::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), A)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, &c);
        }
        p
    }

    fn add_term(&mut self, k: (usize, usize), c: &A) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &A)> {
        self.terms.iter()
    }

    pub fn coeff(&self, dy: usize, dz: usize) -> A {
        self.terms.get(&(dy, dz)).cloned().unwrap_or_else(A::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_y(&self) -> usize {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_z(&self) -> usize {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|k| k.0 + k.1).max().unwrap_or(0)
    }

    /// Lowest total degree of a monomial; the multiplicity at the origin
    /// when the constant term vanishes.
    pub fn low_degree(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.0 + k.1).min()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &A) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            for ((d, e), f) in &other.terms {
                out.add_term((a + d, b + e), &c.mul(f));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(A::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, y: &A, z: &A) -> A {
        // Horner in z over Horner-in-y coefficients
        let pz = self.as_poly_in_z();
        let mut acc = A::zero();
        for c in pz.coeffs().iter().rev() {
            acc = acc.mul(z).add(&c.eval(y));
        }
        acc
    }

    /// `dF/dz`, the separant.
    pub fn separant(&self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            if *b > 0 {
                out.add_term((*a, b - 1), &c.mul(&A::from_i64(*b as i64)));
            }
        }
        out
    }

    /// `dF/dy`.
    pub fn d_dy(&self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            if *a > 0 {
                out.add_term((a - 1, *b), &c.mul(&A::from_i64(*a as i64)));
            }
        }
        out
    }

    /// `F(y + c0, z + c1)`.
    pub fn translate(&self, c0: &A, c1: &A) -> Self {
        let shift = |p: &APoly, c: &A| p.shift(c);
        // shift y inside each z-coefficient, then shift z
        let pz = self.as_poly_in_z();
        let pz: UniPoly<APoly> = UniPoly::new(pz.coeffs().iter().map(|c| shift(c, c0)).collect());
        let mut acc: UniPoly<APoly> = UniPoly::zero();
        let lin: UniPoly<APoly> = UniPoly::new(vec![UniPoly::constant(c1.clone()), UniPoly::one()]);
        for c in pz.coeffs().iter().rev() {
            acc = acc.mul(&lin).add(&UniPoly::constant(c.clone()));
        }
        Self::from_poly_in_z(&acc)
    }

    pub fn univariate_slice(&self, axis: Axis, v: &A) -> APoly {
        match axis {
            Axis::FixZ => {
                let py = self.as_poly_in_y();
                UniPoly::new(py.coeffs().iter().map(|c| c.eval(v)).collect())
            }
            Axis::FixY => {
                let pz = self.as_poly_in_z();
                UniPoly::new(pz.coeffs().iter().map(|c| c.eval(v)).collect())
            }
        }
    }

    /// `F` as a polynomial in `z` whose coefficients are polynomials in `y`.
    pub fn as_poly_in_z(&self) -> UniPoly<APoly> {
        let mut cols: Vec<Vec<A>> = vec![Vec::new(); self.deg_z() + 1];
        for ((a, b), c) in &self.terms {
            let col = &mut cols[*b];
            if col.len() <= *a {
                col.resize(a + 1, A::zero());
            }
            col[*a] = c.clone();
        }
        UniPoly::new(cols.into_iter().map(UniPoly::new).collect())
    }

    /// `F` as a polynomial in `y` whose coefficients are polynomials in `z`.
    pub fn as_poly_in_y(&self) -> UniPoly<APoly> {
        let mut rows: Vec<Vec<A>> = vec![Vec::new(); self.deg_y() + 1];
        for ((a, b), c) in &self.terms {
            let row = &mut rows[*a];
            if row.len() <= *b {
                row.resize(b + 1, A::zero());
            }
            row[*b] = c.clone();
        }
        UniPoly::new(rows.into_iter().map(UniPoly::new).collect())
    }

    pub fn from_poly_in_z(p: &UniPoly<APoly>) -> Self {
        let mut out = Self::zero();
        for (b, col) in p.coeffs().iter().enumerate() {
            for (a, c) in col.coeffs().iter().enumerate() {
                out.add_term((a, b), c);
            }
        }
        out
    }

    pub fn from_poly_in_y(p: &UniPoly<APoly>) -> Self {
        let mut out = Self::zero();
        for (a, row) in p.coeffs().iter().enumerate() {
            for (b, c) in row.coeffs().iter().enumerate() {
                out.add_term((a, b), c);
            }
        }
        out
    }

    /// Text form using `y` and `y'`, accepted back by the parser. Terms are
    /// ordered by decreasing degree in `y'`, then in `y`.
    pub fn render(&self) -> String {
        let mut keys: Vec<&(usize, usize)> = self.terms.keys().collect();
        keys.sort_by(|p, q| q.1.cmp(&p.1).then(q.0.cmp(&p.0)));
        let terms: Vec<(String, String)> = keys
            .into_iter()
            .map(|k| {
                let c = &self.terms[k];
                let mut m = Vec::new();
                match k.0 {
                    0 => {}
                    1 => m.push("y".to_string()),
                    e => m.push(format!("y^{e}")),
                }
                match k.1 {
                    0 => {}
                    1 => m.push("y'".to_string()),
                    e => m.push(format!("y'^{e}")),
                }
                (c.render(), m.join("*"))
            })
            .collect();
        render_sum(&terms)
    }

    /// Multiplicity of the curve at `(c0, c1)`: lowest total degree of the
    /// translated polynomial.
    pub fn multiplicity_at(&self, c0: &A, c1: &A) -> Result<usize> {
        let t = self.translate(c0, c1);
        if !t.coeff(0, 0).is_zero() {
            return Err(AodeError::PointNotOnCurve);
        }
        Ok(t.low_degree().expect("nonzero polynomial"))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> BiPoly {
        parse_polynomial("(y')^2 - y^3 - y^2").unwrap()
    }

    #[test]
    fn separant_of_nodal_cubic() {
        assert_eq!(ex1().separant(), parse_polynomial("2*y'").unwrap());
    }

    #[test]
    fn translation_and_back() {
        let f = ex1();
        let t = f.translate(&A::from_i64(-1), &A::zero());
        assert_eq!(t, parse_polynomial("y'^2 - y^3 + 2*y^2 - y").unwrap());
        assert_eq!(t.translate(&A::from_i64(1), &A::zero()), f);
        let line = parse_polynomial("y' - y").unwrap();
        assert_eq!(line.translate(&A::one(), &A::one()), line);
    }

    #[test]
    fn multiplicities() {
        let f = ex1();
        assert_eq!(f.multiplicity_at(&A::zero(), &A::zero()).unwrap(), 2);
        assert_eq!(f.multiplicity_at(&A::from_i64(-1), &A::zero()).unwrap(), 1);
        assert_eq!(f.multiplicity_at(&A::one(), &A::zero()), Err(AodeError::PointNotOnCurve));
    }

    #[test]
    fn slices() {
        let f = ex1();
        let s = f.univariate_slice(Axis::FixZ, &A::zero());
        assert_eq!(s.coeffs(), &[A::zero(), A::zero(), A::from_i64(-1), A::from_i64(-1)]);
        let s = f.univariate_slice(Axis::FixY, &A::one());
        assert_eq!(s.coeffs(), &[A::from_i64(-2), A::zero(), A::one()]);
    }

    #[test]
    fn render_round_trip() {
        let f = parse_polynomial("((y'-1)^2 + y^2)^3 - 4*(y'-1)^2*y^2").unwrap();
        assert_eq!(parse_polynomial(&f.render()).unwrap(), f);
        assert_eq!(ex1().render(), "y'^2 - y^3 - y^2");
    }
}
