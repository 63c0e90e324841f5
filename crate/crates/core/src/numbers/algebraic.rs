//! Exact algebraic numbers: a rational, or an element of an interned number
//! field written in the power basis of its generator.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::complex::{locate_root, CBox};
use super::field::{intern_field, trim, NumberField};
use super::qpoly::{squarefree_split, QPoly};
use super::tower;
use crate::ring::{self, fmt_rational};
use crate::upoly::{is_compound, monomial_str, render_sum, UniPoly};

#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Option<Arc<NumberField>>,
    /// Power-basis coefficients, no trailing zeros. For rationals at most
    /// one entry.
    coeffs: Vec<BigRational>,
}

impl AlgebraicNumber {
    pub fn rational(r: BigRational) -> Self {
        AlgebraicNumber { field: None, coeffs: trim(vec![r]) }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Element of `field` with the given power-basis coefficients. Demotes
    /// to a rational when only the constant coefficient survives.
    pub fn in_field(field: &Arc<NumberField>, coeffs: Vec<BigRational>) -> Self {
        let coeffs = field.arith().reduce(coeffs);
        if coeffs.len() <= 1 {
            AlgebraicNumber { field: None, coeffs }
        } else {
            AlgebraicNumber { field: Some(field.clone()), coeffs }
        }
    }

    /// Generator of `field`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::in_field(field, vec![BigRational::zero(), BigRational::one()])
    }

    /// The `index`-th root (0-based, canonical order) of an irreducible
    /// rational polynomial. Quadratic fields are normalized to `Q(sqrt(D))`.
    pub fn root_of_irreducible(minpoly: &QPoly, index: usize) -> Self {
        let m = minpoly.monic();
        match m.deg() {
            0 => panic!("root of a constant polynomial"),
            1 => Self::rational(-m.coeff(0)),
            2 => {
                let b = m.coeff(1);
                let c = m.coeff(0);
                let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
                let (k, d) = squarefree_split(&disc);
                let dpoly = UniPoly::new(vec![
                    BigRational::from_integer(-d),
                    BigRational::zero(),
                    BigRational::one(),
                ]);
                let field = intern_field(&dpoly, 1, None);
                // roots (-b -+ k sqrt D)/2 in canonical order
                let sign = if index == 1 { BigRational::one() } else { -BigRational::one() };
                let two = BigRational::from_integer(2.into());
                Self::in_field(&field, vec![-&b / &two, sign * k / two])
            }
            _ => Self::generator(&intern_field(&m, index, None)),
        }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.field.is_none()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.field.is_none() {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Absolute degree of the field the value is stored in.
    pub fn field_degree(&self) -> usize {
        self.field.as_ref().map_or(1, |f| f.degree())
    }

    /// Re-expresses the value in `target`, which must contain the value's
    /// field through a known embedding.
    pub fn lift_to(&self, target: &Arc<NumberField>) -> Vec<BigRational> {
        match &self.field {
            None => self.coeffs.clone(),
            Some(f) if Arc::ptr_eq(f, target) => self.coeffs.clone(),
            Some(f) => {
                let image = super::field::known_embedding(f, target)
                    .expect("lifting into a field without a known embedding");
                target.arith().eval_q(&self.coeffs, &image)
            }
        }
    }

    /// Smallest known field containing both values' fields. Creates a
    /// compositum if needed; that path ignores the degree cap.
    fn common(a: &Self, b: &Self) -> Option<Arc<NumberField>> {
        match (&a.field, &b.field) {
            (None, None) => None,
            (Some(f), None) | (None, Some(f)) => Some(f.clone()),
            (Some(f), Some(g)) if Arc::ptr_eq(f, g) => Some(f.clone()),
            (Some(f), Some(g)) => Some(tower::compositum(f, g, usize::MAX).expect("uncapped compositum")),
        }
    }

    fn binop(
        &self,
        other: &Self,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        op: impl Fn(&NumberField, &[BigRational], &[BigRational]) -> Vec<BigRational>,
    ) -> Self {
        match Self::common(self, other) {
            None => {
                let z = BigRational::zero();
                let a = self.coeffs.first().unwrap_or(&z);
                let b = other.coeffs.first().unwrap_or(&z);
                Self::rational(rat(a, b))
            }
            Some(f) => {
                let a = self.lift_to(&f);
                let b = other.lift_to(&f);
                let c = op(&f, &a, &b);
                Self::in_field(&f, c)
            }
        }
    }

    /// Exact rectangular enclosure with both sides at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> CBox {
        match &self.field {
            None => CBox::real(self.as_rational().unwrap()),
            Some(f) => {
                let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
                let mut work = bits + 4;
                loop {
                    let b = f.eval_box(&self.coeffs, work);
                    if b.width() <= target {
                        return b;
                    }
                    work += work / 2 + 8;
                }
            }
        }
    }

    /// Midpoint approximation as `f64` pair, for display and numeric demos.
    pub fn to_f64(&self) -> (f64, f64) {
        let b = self.enclosure(60);
        let (re, im) = b.mid();
        (super::complex::rational_to_f64(&re), super::complex::rational_to_f64(&im))
    }

    /// Deterministic total order: equal values compare equal, otherwise by
    /// real part, then imaginary part. Parts that cannot be separated at
    /// 256 bits are treated as equal.
    pub fn numeric_cmp(&self, other: &Self) -> Ordering {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a.cmp(&b);
        }
        if let (Some(f), Some(g)) = (&self.field, &other.field) {
            let gen = [BigRational::zero(), BigRational::one()];
            if self.coeffs == gen && other.coeffs == gen && f.minpoly() == g.minpoly() {
                // conjugate generators: canonical root order is this order
                return f.root_index().cmp(&g.root_index());
            }
            if Arc::ptr_eq(f, g) && self.coeffs == other.coeffs {
                return Ordering::Equal;
            }
        }
        let mut bits = 16;
        let mut re_equal = false;
        loop {
            let (a, b) = (self.enclosure(bits), other.enclosure(bits));
            if !re_equal {
                if a.re.hi < b.re.lo {
                    return Ordering::Less;
                }
                if b.re.hi < a.re.lo {
                    return Ordering::Greater;
                }
            }
            if re_equal || bits >= 64 {
                if a.im.hi < b.im.lo {
                    return Ordering::Less;
                }
                if b.im.hi < a.im.lo {
                    return Ordering::Greater;
                }
            }
            if bits == 64 && self == other {
                return Ordering::Equal;
            }
            if bits >= 256 {
                if re_equal {
                    return Ordering::Equal;
                }
                re_equal = true;
            } else {
                bits *= 2;
            }
        }
    }

    /// Minimal polynomial over the rationals (monic).
    pub fn minimal_polynomial(&self) -> QPoly {
        match &self.field {
            None => UniPoly::linear_root(&self.as_rational().unwrap()),
            Some(f) => {
                let charpoly = tower::char_poly(f, &self.coeffs);
                let factors = super::qpoly::factor_q(&charpoly);
                if factors.len() == 1 {
                    return factors[0].0.clone();
                }
                let idx = tower::which_factor(&factors.iter().map(|(g, _)| g.clone()).collect::<Vec<_>>(), |b| {
                    self.enclosure(b)
                });
                factors[idx].0.clone()
            }
        }
    }

    /// Re-expresses the value in the smallest field generated by itself,
    /// so `sqrt(2)` computed in `Q(sqrt 2, sqrt 3)` prints as `sqrt(2)`.
    pub fn simplify(&self) -> Self {
        let Some(f) = &self.field else { return self.clone() };
        let m = self.minimal_polynomial();
        if m.deg() == f.degree() && (f.degree() != 2 || f.quadratic_radicand().is_some()) {
            return self.clone();
        }
        let idx = locate_root(&m, |b| self.enclosure(b));
        let v = Self::root_of_irreducible(&m, idx);
        if let Some(g) = &v.field {
            // The value's field embeds into the original one.
            if g.degree() >= 2 && super::field::known_embedding(g, f).is_none() {
                let gen = tower::express_generator(g, f, &v, self);
                super::field::register_embedding(g, f, gen);
            }
        }
        v
    }

    /// Rendering with an explicit generator symbol, used by text output.
    pub fn render(&self) -> String {
        match &self.field {
            None => fmt_rational(&self.as_rational().unwrap()),
            Some(f) => {
                let sym = f.symbol();
                let terms: Vec<(String, String)> = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !Zero::is_zero(*c))
                    .map(|(i, c)| (fmt_rational(c), monomial_str(&paren_symbol(&sym), i)))
                    .collect();
                render_sum(&terms)
            }
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        match (&self.field, &other.field) {
            (None, None) => self.coeffs == other.coeffs,
            (None, Some(_)) | (Some(_), None) => false,
            (Some(f), Some(g)) if Arc::ptr_eq(f, g) => self.coeffs == other.coeffs,
            _ => self.sub(other).is_zero(),
        }
    }
}

impl Eq for AlgebraicNumber {}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<BigRational> for AlgebraicNumber {
    fn from(r: BigRational) -> Self {
        Self::rational(r)
    }
}

impl AlgebraicNumber {
    pub fn zero() -> Self {
        AlgebraicNumber { field: None, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.field.is_none() && self.coeffs.len() == 1 && One::is_one(&self.coeffs[0])
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        self.binop(other, |a, b| a + b, |f, a, b| f.arith().add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        self.binop(other, |a, b| a - b, |f, a, b| f.arith().sub(a, b))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if Zero::is_zero(r) {
            return Self::zero();
        }
        AlgebraicNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        self.binop(other, |a, b| a * b, |f, a, b| f.arith().mul(a, b))
    }

    pub fn neg(&self) -> Self {
        AlgebraicNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        match &self.field {
            None => Self::rational(self.coeffs[0].recip()),
            Some(f) => Self::in_field(f, f.arith().inv(&self.coeffs)),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        if let Some(r) = other.as_rational() {
            assert!(!Zero::is_zero(&r), "division by zero");
            return self.scale(&r.recip());
        }
        self.mul(&other.inv())
    }

    pub fn checked_div(&self, other: &Self) -> crate::error::Result<Self> {
        if other.is_zero() {
            return Err(crate::error::AodeError::DivisionByZero);
        }
        Ok(self.div(other))
    }

    pub fn pow(&self, e: u64) -> Self {
        ring::Ring::pow(self, e)
    }
}

impl ring::Ring for AlgebraicNumber {
    fn zero() -> Self {
        AlgebraicNumber::zero()
    }
    fn one() -> Self {
        AlgebraicNumber::one()
    }
    fn is_zero(&self) -> bool {
        AlgebraicNumber::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        AlgebraicNumber::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        AlgebraicNumber::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        AlgebraicNumber::mul(self, other)
    }
    fn neg(&self) -> Self {
        AlgebraicNumber::neg(self)
    }
    fn from_i64(n: i64) -> Self {
        AlgebraicNumber::from_i64(n)
    }
    fn exact_div(&self, other: &Self) -> Self {
        AlgebraicNumber::div(self, other)
    }
    fn is_one(&self) -> bool {
        AlgebraicNumber::is_one(self)
    }
}

impl ring::Field for AlgebraicNumber {
    fn inv(&self) -> Self {
        AlgebraicNumber::inv(self)
    }
    fn div(&self, other: &Self) -> Self {
        AlgebraicNumber::div(self, other)
    }
}

fn paren_symbol(sym: &str) -> String {
    sym.to_string()
}

/// Wraps a rendered value in parentheses when it is a sum.
pub fn paren(s: &str) -> String {
    if is_compound(s) {
        format!("({s})")
    } else {
        s.to_string()
    }
}
