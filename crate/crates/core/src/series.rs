//! Truncated power series in `t` with explicit precision tracking.
//!
//! A series either is an exact polynomial or knows its first `prec`
//! coefficients; everything beyond is unknown. Arithmetic propagates the
//! number of certified coefficients so that results never claim more than
//! their inputs determine.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{AodeError, Result};
use crate::numbers::json::{value_from_json, value_to_json};
use crate::numbers::AlgebraicNumber;
use crate::ring::{Field, Ring};
use crate::upoly::{monomial_str, render_sum, UniPoly};

#[derive(Clone, PartialEq)]
pub struct Series<C> {
    /// For exact series: the polynomial coefficients without trailing zeros.
    /// Otherwise exactly `prec` coefficients.
    coeffs: Vec<C>,
    /// `None` for an exact polynomial.
    prec: Option<usize>,
}

pub type TruncatedSeries = Series<AlgebraicNumber>;

/// Order (valuation) of a series as far as it is certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// The first nonzero coefficient has this index.
    Finite(usize),
    /// Every certified coefficient vanishes; the order exceeds the truncation
    /// order given here (which is `-1` when nothing is certified).
    Beyond(i64),
    /// The exact zero series.
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(k),
            _ => None,
        }
    }

    /// A lower bound for the true valuation.
    fn lower_bound(self) -> usize {
        match self {
            Order::Finite(k) => k,
            Order::Beyond(n) => (n + 1) as usize,
            Order::Infinite => usize::MAX,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Beyond(n) => write!(f, "> {n}"),
            Order::Infinite => f.write_str("infinity"),
        }
    }
}

fn trim<C: Ring>(mut v: Vec<C>) -> Vec<C> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

impl<C: Field> Series<C> {
    /// Series known to the first `prec` coefficients; `coeffs` is padded with
    /// zeros or cut to that length.
    pub fn truncated(mut coeffs: Vec<C>, prec: usize) -> Self {
        coeffs.resize(prec, C::zero());
        Series { coeffs, prec: Some(prec) }
    }

    /// Series certified up to and including `t^n`.
    pub fn with_trunc(coeffs: Vec<C>, n: usize) -> Self {
        Self::truncated(coeffs, n + 1)
    }

    pub fn exact(coeffs: Vec<C>) -> Self {
        Series { coeffs: trim(coeffs), prec: None }
    }

    pub fn from_poly(p: &UniPoly<C>) -> Self {
        Self::exact(p.coeffs().to_vec())
    }

    pub fn zero() -> Self {
        Self::exact(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::exact(vec![c])
    }

    /// The series `t`.
    pub fn t() -> Self {
        Self::exact(vec![C::zero(), C::one()])
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Number of certified coefficients, `None` when exact.
    pub fn prec(&self) -> Option<usize> {
        self.prec
    }

    /// Truncation order `N`: coefficients up to `t^N` are certified. `None`
    /// when exact, `-1` when nothing is certified.
    pub fn trunc(&self) -> Option<i64> {
        self.prec.map(|p| p as i64 - 1)
    }

    /// Stored coefficients: all certified ones, or the polynomial ones.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `t^k` when certified.
    pub fn coeff(&self, k: usize) -> Option<C> {
        match self.prec {
            Some(p) if k >= p => None,
            _ => Some(self.coeffs.get(k).cloned().unwrap_or_else(C::zero)),
        }
    }

    pub fn order(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Order::Finite(k),
            None => match self.prec {
                Some(p) => Order::Beyond(p as i64 - 1),
                None => Order::Infinite,
            },
        }
    }

    fn prec_or_max(&self) -> usize {
        self.prec.unwrap_or(usize::MAX)
    }

    fn with_prec(coeffs: Vec<C>, prec: usize) -> Self {
        if prec == usize::MAX {
            Self::exact(coeffs)
        } else {
            Self::truncated(coeffs, prec)
        }
    }

    /// Forgets everything beyond the first `prec` coefficients.
    pub fn truncate(&self, prec: usize) -> Self {
        let p = prec.min(self.prec_or_max());
        let mut c = self.coeffs.clone();
        c.truncate(p);
        Self::with_prec(c, p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec_or_max().min(other.prec_or_max());
        let len = self.coeffs.len().max(other.coeffs.len()).min(p);
        let c = (0..len)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => C::zero(),
            })
            .collect();
        Self::with_prec(c, p)
    }

    pub fn neg(&self) -> Self {
        Series { coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), prec: self.prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let c = self.coeffs.iter().map(|c| c.mul(k)).collect();
        match self.prec {
            Some(p) => Self::truncated(c, p),
            None => Self::exact(c),
        }
    }

    /// Product; certified to `min(P_a + ord b, P_b + ord a)` coefficients.
    pub fn mul(&self, other: &Self) -> Self {
        let va = self.order().lower_bound();
        let vb = other.order().lower_bound();
        let p = self.prec_or_max().saturating_add(vb).min(other.prec_or_max().saturating_add(va));
        let len = if self.coeffs.is_empty() || other.coeffs.is_empty() {
            0
        } else {
            (self.coeffs.len() + other.coeffs.len() - 1).min(p)
        };
        let mut out = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::with_prec(out, p)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplication by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.coeffs.is_empty() && self.prec.is_none() {
            return self.clone();
        }
        let mut c = vec![C::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::with_prec(c, self.prec_or_max().saturating_add(k))
    }

    /// Termwise derivative; one certified coefficient is lost.
    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&C::from_i64(i as i64)))
            .collect();
        match self.prec {
            Some(p) => Self::truncated(c, p.saturating_sub(1)),
            None => Self::exact(c),
        }
    }

    /// Multiplicative inverse of a unit, to the same precision. Exact
    /// constants stay exact; other exact series need `invert_to`.
    pub fn invert(&self) -> Result<Self> {
        match self.prec {
            None if self.coeffs.len() <= 1 => {
                let c = self.coeff(0).unwrap();
                if c.is_zero() {
                    return Err(AodeError::NotAUnit);
                }
                Ok(Self::constant(c.inv()))
            }
            None => Err(AodeError::InsufficientPrecision(
                "the inverse of a non-constant polynomial needs a truncation order; use invert_to".into(),
            )),
            Some(p) => self.invert_to(p),
        }
    }

    /// Inverse certified to `min(prec, self.prec)` coefficients.
    pub fn invert_to(&self, prec: usize) -> Result<Self> {
        let p = prec.min(self.prec_or_max());
        let c0 = match self.coeff(0) {
            Some(c) if !c.is_zero() => c,
            _ => return Err(AodeError::NotAUnit),
        };
        let inv0 = c0.inv();
        let mut out: Vec<C> = Vec::with_capacity(p);
        for k in 0..p {
            if k == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut s = C::zero();
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s = s.add(&self.coeffs[i].mul(&out[k - i]));
            }
            out.push(s.neg().mul(&inv0));
        }
        Ok(Self::truncated(out, p))
    }

    /// `outer(inner)` by Horner's rule. Requires `inner(0) = 0` certified.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let v = match inner.order() {
            Order::Finite(0) => return Err(AodeError::InnerNotPositiveOrder),
            Order::Beyond(n) if n < 0 => return Err(AodeError::InnerNotPositiveOrder),
            o => o.lower_bound(),
        };
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        Ok(match self.prec {
            // unknown tail of the outer series contributes O(inner^P)
            Some(p) => acc.truncate(v.saturating_mul(p)),
            None => acc,
        })
    }

    /// Value at `t = 0` when certified.
    pub fn constant_term(&self) -> Option<C> {
        self.coeff(0)
    }

    /// Equality of all coefficients certified in both.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.prec_or_max().min(other.prec_or_max());
        let len = self.coeffs.len().max(other.coeffs.len()).min(p);
        (0..len).all(|i| {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(C::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(C::zero);
            a == b
        })
    }

    pub fn map<D: Field>(&self, f: impl FnMut(&C) -> D) -> Series<D> {
        let c = self.coeffs.iter().map(f).collect();
        match self.prec {
            Some(p) => Series::truncated(c, p),
            None => Series::exact(c),
        }
    }
}

impl<C: Field + fmt::Display> Series<C> {
    /// `c0 + c1*t + ... + O(t^{N+1})`, zero coefficients omitted.
    pub fn render(&self, var: &str) -> String {
        let terms: Vec<(String, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.to_string(), monomial_str(var, i)))
            .collect();
        match self.prec {
            None => render_sum(&terms),
            Some(p) => {
                let big_o = format!("O({})", if p == 0 { "1".to_string() } else { monomial_str(var, p) });
                if terms.is_empty() {
                    big_o
                } else {
                    format!("{} + {big_o}", render_sum(&terms))
                }
            }
        }
    }
}

impl<C: Field + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl<C: Field + fmt::Display> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl TruncatedSeries {
    /// `{"coeffs": [...], "trunc": N}`; `trunc` is `null` for an exact
    /// polynomial.
    pub fn to_json(&self) -> Value {
        json!({
            "coeffs": self.coeffs.iter().map(value_to_json).collect::<Vec<_>>(),
            "trunc": self.trunc(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || AodeError::InvalidRequest("malformed series JSON".into());
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(value_from_json)
            .collect::<Result<Vec<_>>>()?;
        match &v["trunc"] {
            Value::Null => Ok(Self::exact(coeffs)),
            n => {
                let n = n.as_i64().filter(|&n| n >= -1).ok_or_else(bad)?;
                if coeffs.len() != (n + 1) as usize {
                    return Err(bad());
                }
                Ok(Self::truncated(coeffs, (n + 1) as usize))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qq};
    use num_rational::BigRational;

    type S = Series<BigRational>;

    fn tr(v: &[BigRational], n: usize) -> S {
        S::with_trunc(v.to_vec(), n)
    }

    #[test]
    fn product_and_cancellation() {
        let a = tr(&[q(1), q(1)], 5);
        let b = tr(&[q(1), q(-1)], 5);
        assert!(a.mul(&b).agrees_with(&S::exact(vec![q(1), q(0), q(-1)])));
        assert_eq!(a.mul(&b).trunc(), Some(5));
        let t = tr(&[q(0), q(1)], 4);
        let z = t.add(&t.neg());
        assert_eq!(z.order(), Order::Beyond(4));
    }

    #[test]
    fn square_of_reparametrization() {
        let s = tr(&[q(0), qq(1, 2), q(0), qq(-1, 24), q(0), qq(1, 240)], 5);
        let sq = s.mul(&s);
        assert_eq!(sq.trunc(), Some(6));
        // t^6: 2*(1/2)*(1/240) + (1/24)^2 = 17/2880
        assert_eq!(sq.coeffs(), &[q(0), q(0), qq(1, 4), q(0), qq(-1, 24), q(0), qq(17, 2880)]);
    }

    #[test]
    fn derivatives() {
        assert_eq!(S::exact(vec![q(-1), q(0), q(1)]).derivative(), S::exact(vec![q(0), q(2)]));
        assert_eq!(S::constant(q(3)).derivative(), S::zero());
        let s = tr(&[q(0), q(1), q(0), qq(1, 6), q(0), qq(17, 240)], 5);
        assert_eq!(s.derivative(), tr(&[q(1), q(0), qq(1, 2), q(0), qq(17, 48)], 4));
    }

    #[test]
    fn inverses() {
        let g = tr(&[q(1), q(-1)], 6).invert().unwrap();
        assert_eq!(g, tr(&vec![q(1); 7], 6));
        assert_eq!(S::constant(q(2)).invert().unwrap(), S::constant(qq(1, 2)));
        let a = tr(&[q(1), q(1)], 6);
        assert!(a.invert().unwrap().mul(&a).agrees_with(&S::one()));
        assert_eq!(tr(&[q(0), q(1)], 3).invert(), Err(AodeError::NotAUnit));
    }

    #[test]
    fn composition() {
        let a = S::exact(vec![q(-1), q(0), q(1)]);
        let s = tr(&[q(0), qq(1, 2), q(0), qq(-1, 24), q(0), qq(1, 240)], 5);
        let y = a.compose(&s).unwrap();
        assert_eq!(y.trunc(), Some(6));
        assert_eq!(y.coeffs()[..5], [q(-1), q(0), qq(1, 4), q(0), qq(-1, 24)]);
        assert_eq!(a.compose(&S::t()).unwrap(), a);
        assert_eq!(S::t().compose(&s).unwrap(), s);
        assert_eq!(a.compose(&a), Err(AodeError::InnerNotPositiveOrder));
    }

    #[test]
    fn rendering() {
        let y = tr(&[q(-1), q(0), qq(1, 4), q(0), qq(-1, 24)], 4);
        assert_eq!(y.render("t"), "-1 + 1/4*t^2 - 1/24*t^4 + O(t^5)");
        assert_eq!(S::exact(vec![q(0), q(1), q(0), q(-1)]).to_string(), "t - t^3");
        assert_eq!(tr(&[], 2).to_string(), "O(t^3)");
    }

    #[test]
    fn json_round_trip() {
        let s2 = crate::poly::parse_number("sqrt(2)").unwrap();
        let s = TruncatedSeries::with_trunc(vec![AlgebraicNumber::one(), s2.clone(), AlgebraicNumber::rational(qq(5, 4))], 3);
        assert_eq!(TruncatedSeries::from_json(&s.to_json()).unwrap(), s);
        let e = TruncatedSeries::exact(vec![AlgebraicNumber::zero(), s2]);
        assert_eq!(TruncatedSeries::from_json(&e.to_json()).unwrap(), e);
    }
}
