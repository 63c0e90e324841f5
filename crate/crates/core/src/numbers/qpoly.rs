//! Helpers for polynomials with rational coefficients.

use algebraics::polynomial::Polynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ring::fmt_rational;
use crate::upoly::UniPoly;

pub type QPoly = UniPoly<BigRational>;

/// Integer coefficients of the primitive part, with positive leading
/// coefficient.
pub fn primitive_integer_coeffs(p: &QPoly) -> Vec<BigInt> {
    assert!(!p.is_zero(), "primitive part of zero");
    let mut den = BigInt::one();
    for c in p.coeffs() {
        den = den.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = p.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if ints.last().unwrap().is_negative() {
        g = -g;
    }
    for c in ints.iter_mut() {
        *c = &*c / &g;
    }
    ints
}

pub fn from_integers(c: &[BigInt]) -> QPoly {
    UniPoly::new(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
}

/// Factors `p` over the rationals into monic irreducible factors with
/// multiplicities. The order is deterministic: by degree, then coefficients.
pub fn factor_q(p: &QPoly) -> Vec<(QPoly, usize)> {
    assert!(!p.is_zero(), "factoring the zero polynomial");
    let mut out = Vec::new();
    for (part, mult) in p.squarefree_decomposition() {
        if part.deg() == 0 {
            continue;
        }
        for f in factor_squarefree(&part) {
            out.push((f, mult));
        }
    }
    out.sort_by(|a, b| poly_key_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
    out
}

/// Irreducible monic factors of a squarefree polynomial.
pub fn factor_squarefree(p: &QPoly) -> Vec<QPoly> {
    let n = p.deg();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![p.monic()];
    }
    // Strip the factor x first; it is common and cheap.
    if p.coeff(0).is_zero() {
        let rest = p.exact_div_poly(&UniPoly::x());
        let mut fs = factor_squarefree(&rest);
        fs.push(UniPoly::x());
        fs.sort_by(poly_key_cmp);
        return fs;
    }
    if n == 2 {
        let disc = p.coeff(1) * p.coeff(1) - BigRational::from_integer(4.into()) * p.coeff(0) * p.coeff(2);
        if rational_sqrt(&disc).is_none() {
            return vec![p.monic()];
        }
    }
    let ints = primitive_integer_coeffs(p);
    let poly: Polynomial<BigInt> = ints.into();
    let factors = poly.factor();
    let mut fs: Vec<QPoly> = factors
        .polynomial_factors
        .into_iter()
        .map(|f| from_integers(&f.polynomial.into_coefficients()).monic())
        .collect();
    fs.sort_by(poly_key_cmp);
    fs
}

fn poly_key_cmp(a: &QPoly, b: &QPoly) -> std::cmp::Ordering {
    a.deg().cmp(&b.deg()).then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Rational roots of `p` (without multiplicity), ascending.
pub fn rational_roots(p: &QPoly) -> Vec<BigRational> {
    let mut roots: Vec<BigRational> = factor_q(p)
        .into_iter()
        .filter(|(f, _)| f.deg() == 1)
        .map(|(f, _)| -f.coeff(0))
        .collect();
    roots.sort();
    roots
}

/// Exact square root of a non-negative rational, if it is a square.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &n * &n == *x.numer() && &d * &d == *x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Writes `x` as `k^2 * D` with `D` a squarefree integer (sign kept in `D`)
/// and `k` a positive rational. Trial division, so meant for modest inputs.
pub fn squarefree_split(x: &BigRational) -> (BigRational, BigInt) {
    assert!(!x.is_zero());
    // x = n/d = n*d / d^2
    let num = x.numer() * x.denom();
    let sign = if num.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = num.abs();
    let mut k = BigInt::one();
    let mut d = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let pp = &p * &p;
        while (&m % &pp).is_zero() {
            m /= &pp;
            k *= &p;
        }
        if (&m % &p).is_zero() {
            m /= &p;
            d *= &p;
        }
        p += 1;
        if p.bits() > 40 {
            // give up on full factorisation; the rest is treated as squarefree
            break;
        }
    }
    d *= m;
    (BigRational::new(k, x.denom().clone()), sign * d)
}

/// Renders with integer-friendly formatting, e.g. `x^3 - x + 1/2`.
pub fn render_qpoly(p: &QPoly, var: &str) -> String {
    p.render(var, fmt_rational)
}
