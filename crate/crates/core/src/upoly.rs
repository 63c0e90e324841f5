//! Dense univariate polynomials over any [`Ring`].
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so the
//! zero polynomial is the empty vector. Nesting (`UniPoly<UniPoly<C>>`) is how
//! bivariate elimination is expressed.

use std::fmt;

use crate::ring::{Field, Ring};

#[derive(Clone, PartialEq)]
pub struct UniPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> UniPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: C, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    /// `x - a`
    pub fn linear_root(a: &C) -> Self {
        Self::new(vec![a.neg(), C::one()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; handy where the caller
    /// already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::zero)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn map<D: Ring>(&self, f: impl FnMut(&C) -> D) -> UniPoly<D> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul_x_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&C::from_i64(i as i64)))
                .collect(),
        )
    }

    /// `self(inner(x))`
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `self(x + a)`
    pub fn shift(&self, a: &C) -> Self {
        if a.is_zero() {
            return self.clone();
        }
        self.compose(&Self::new(vec![a.clone(), C::one()]))
    }

    /// `self(-x)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { c.neg() } else { c.clone() })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => C::zero(),
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u64) -> Self {
        Ring::pow(self, e)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-remainder by zero");
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.clone();
        let mut steps = 0u64;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc();
            r = r.scale(&lb).sub(&b.scale(&lr).mul_x_pow(dr - db));
            steps += 1;
        }
        let missing = (da - db + 1) as u64 - steps;
        if missing > 0 {
            r = r.scale(&lb.pow(missing));
        }
        r
    }

    /// Exact division in `C[x]`; valid whenever `other` divides `self`.
    pub fn exact_div_poly(&self, other: &Self) -> Self {
        let db = other.degree().expect("division by zero polynomial");
        let lb = other.lc();
        let mut r = self.clone();
        let Some(da) = r.degree() else {
            return Self::zero();
        };
        if da < db {
            return Self::zero();
        }
        let mut quot = vec![C::zero(); da - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = r.lc().exact_div(&lb);
            r = r.sub(&other.scale(&c).mul_x_pow(dr - db));
            quot[dr - db] = c;
        }
        Self::new(quot)
    }

    /// Resultant via the subresultant PRS, which keeps coefficient growth in
    /// check over polynomial rings.
    pub fn resultant(&self, other: &Self) -> C {
        let (Some(da0), Some(db0)) = (self.degree(), other.degree()) else {
            return C::zero();
        };
        if db0 == 0 {
            return other.lc().pow(da0 as u64);
        }
        if da0 == 0 {
            return self.lc().pow(db0 as u64);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut sign = C::one();
        if da0 < db0 {
            std::mem::swap(&mut a, &mut b);
            if da0 % 2 == 1 && db0 % 2 == 1 {
                sign = sign.neg();
            }
        }
        let mut g = C::one();
        let mut h = C::one();
        loop {
            let da = a.deg();
            let db = b.deg();
            let delta = (da - db) as u64;
            if da % 2 == 1 && db % 2 == 1 {
                sign = sign.neg();
            }
            let r = a.pseudo_rem(&b);
            a = b;
            if r.is_zero() {
                return C::zero();
            }
            let denom = g.mul(&h.pow(delta));
            b = r.map(|c| c.exact_div(&denom));
            g = a.lc();
            if delta > 0 {
                h = g.pow(delta).exact_div(&h.pow(delta - 1));
            }
            if b.deg() == 0 {
                break;
            }
        }
        let da = a.deg() as u64;
        let lb = b.lc();
        let last = if da == 1 { lb } else { lb.pow(da).exact_div(&h.pow(da - 1)) };
        sign.mul(&last)
    }

    /// Renders with the given variable name; `coeff` must return a string
    /// that is either atomic or starts with a sign.
    pub fn render(&self, var: &str, coeff: impl Fn(&C) -> String) -> String {
        let terms: Vec<(String, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (coeff(c), monomial_str(var, i)))
            .collect();
        render_sum(&terms)
    }
}

impl<C: Field> UniPoly<C> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().inv();
        self.scale(&inv)
    }

    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        let db = b.degree().expect("division by zero polynomial");
        let inv = b.lc().inv();
        let mut r = self.clone();
        let Some(da) = r.degree() else {
            return (Self::zero(), Self::zero());
        };
        if da < db {
            return (Self::zero(), r);
        }
        let mut quot = vec![C::zero(); da - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = r.lc().mul(&inv);
            r = r.sub(&b.scale(&c).mul_x_pow(dr - db));
            quot[dr - db] = c;
        }
        (Self::new(quot), r)
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.div_rem(b).1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qt.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&qt.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Yun's algorithm. Returns monic squarefree factors with their
    /// multiplicities; the product equals `self.monic()`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let f = self.monic();
        if f.deg() == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div_poly(&a0);
        let c = df.exact_div_poly(&a0);
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            b = b.exact_div_poly(&a);
            let c = d.exact_div_poly(&a);
            d = c.sub(&b.derivative());
            if a.deg() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        let f = self.monic();
        if f.deg() == 0 {
            return f;
        }
        f.exact_div_poly(&f.gcd(&f.derivative()))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }
}

impl<C: Ring> Ring for UniPoly<C> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        UniPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        UniPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        UniPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        UniPoly::neg(self)
    }
    fn from_i64(n: i64) -> Self {
        UniPoly::constant(C::from_i64(n))
    }
    fn exact_div(&self, other: &Self) -> Self {
        self.exact_div_poly(other)
    }
}

impl<C: Ring> fmt::Debug for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

pub(crate) fn monomial_str(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

/// True when `s` needs parentheses to be used as a factor.
pub(crate) fn is_compound(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    body.contains(" + ") || body.contains(" - ")
}

/// Joins `(coefficient, monomial)` pairs into `a*m1 - b*m2 + ...`.
pub(crate) fn render_sum(terms: &[(String, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (c, m)) in terms.iter().enumerate() {
        let term = if m.is_empty() {
            if is_compound(c) && idx > 0 {
                format!("({c})")
            } else {
                c.clone()
            }
        } else if c == "1" {
            m.clone()
        } else if c == "-1" {
            format!("-{m}")
        } else if is_compound(c) {
            format!("({c})*{m}")
        } else {
            format!("{c}*{m}")
        };
        if idx == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qq};
    use num_rational::BigRational;

    fn p(v: &[i64]) -> UniPoly<BigRational> {
        UniPoly::new(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn resultant_of_linears() {
        // Res(x - 3, x - 5) = 3 - 5
        assert_eq!(p(&[-3, 1]).resultant(&p(&[-5, 1])), q(-2));
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 2, x^2 - 3) = prod over roots of x^2-2 of (r^2 - 3) = (2-3)^2 = 1
        assert_eq!(p(&[-2, 0, 1]).resultant(&p(&[-3, 0, 1])), q(1));
        // Res(x^3 - x, 2x^2 + 1): roots 0, 1, -1 of the first, monic.
        // prod(2r^2 + 1) = 1 * 3 * 3 = 9
        assert_eq!(p(&[0, -1, 0, 1]).resultant(&p(&[1, 0, 2])), q(9));
        // swapped order picks up (-1)^(3*2) = 1
        assert_eq!(p(&[1, 0, 2]).resultant(&p(&[0, -1, 0, 1])), q(9));
    }

    #[test]
    fn resultant_with_common_root_vanishes() {
        assert_eq!(p(&[-1, 0, 1]).resultant(&p(&[1, 1])), q(0));
    }

    #[test]
    fn bivariate_resultant_eliminates() {
        // Res_z(z^2 - y, z - y) = y^2 - y as a polynomial in y.
        let y = UniPoly::<BigRational>::x();
        let f = UniPoly::new(vec![y.neg(), UniPoly::zero(), UniPoly::one()]);
        let g = UniPoly::new(vec![y.neg(), UniPoly::one()]);
        let r = f.resultant(&g);
        assert_eq!(r, p(&[0, -1, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^2 (x+2)^3 x
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]).pow(3)).mul(&p(&[0, 1]));
        let dec = f.squarefree_decomposition();
        let mut prod = UniPoly::one();
        for (g, m) in &dec {
            prod = prod.mul(&g.pow(*m as u64));
        }
        assert_eq!(prod, f.monic());
        assert_eq!(dec.iter().map(|(_, m)| *m).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn xgcd_identity() {
        let a = p(&[-2, 0, 1]);
        let b = p(&[1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, UniPoly::one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), UniPoly::one());
    }

    #[test]
    fn shift_and_render() {
        let f = p(&[0, 0, 1]).shift(&q(1));
        assert_eq!(f, p(&[1, 2, 1]));
        let g = UniPoly::new(vec![qq(1, 2), q(-1), q(0), q(1)]);
        assert_eq!(g.render("x", crate::ring::fmt_rational), "x^3 - x + 1/2");
    }

    #[test]
    fn pseudo_remainder_definition() {
        // prem(x^2, 2x + 1) = 2^2 * x^2 mod (2x + 1) = 1
        let r = p(&[0, 0, 1]).pseudo_rem(&p(&[1, 2]));
        assert_eq!(r, p(&[1]));
    }
}
