//! Property suites shared by the property tests and the acceptance report.
#![allow(dead_code)]

use std::sync::Arc;

use aode_core::numbers::{AlgebraicNumber, NumberField};
use aode_core::poly::parse_number;
use aode_core::series::TruncatedSeries;
use aode_core::AodeError;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type A = AlgebraicNumber;

pub const CASES: u32 = 1000;

fn field_of(src: &str) -> Arc<NumberField> {
    parse_number(src).unwrap().field().unwrap().clone()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..30, 1i64..12).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

/// Elements of the cubic field generated by a complex root of `x^3 - x - 1`.
fn cubic_element() -> impl Strategy<Value = A> {
    let k = field_of("root(x^3 - x - 1, 1)");
    prop::collection::vec(rational(), 3).prop_map(move |c| A::in_field(&k, c))
}

fn quadratic_element(d: &'static str) -> impl Strategy<Value = A> {
    let k = field_of(d);
    prop::collection::vec(rational(), 2).prop_map(move |c| A::in_field(&k, c))
}

/// Series over `Q(sqrt 2)`, either exact or truncated at or above their
/// length.
fn series() -> impl Strategy<Value = TruncatedSeries> {
    (prop::collection::vec(quadratic_element("sqrt(2)"), 0..6), prop::option::of(0usize..3)).prop_map(
        |(c, extra)| match extra {
            Some(k) => TruncatedSeries::truncated(c.clone(), c.len() + k + 1),
            None => TruncatedSeries::exact(c),
        },
    )
}

fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
    (quadratic_element("sqrt(2)"), series()).prop_filter_map("unit", |(c0, s)| {
        if c0.is_zero() {
            return None;
        }
        let mut c = vec![c0];
        c.extend(s.coeffs().iter().skip(1).cloned());
        Some(match s.prec() {
            Some(p) => TruncatedSeries::truncated(c.clone(), p.max(c.len())),
            None => TruncatedSeries::truncated(c.clone(), c.len() + 2),
        })
    })
}

/// Positive-order series with a nonzero linear term.
fn inner_series() -> impl Strategy<Value = TruncatedSeries> {
    (quadratic_element("sqrt(2)"), series()).prop_filter_map("order one", |(c1, s)| {
        if c1.is_zero() {
            return None;
        }
        let mut c = vec![A::zero(), c1];
        c.extend(s.coeffs().iter().skip(2).cloned());
        Some(match s.prec() {
            Some(p) => TruncatedSeries::truncated(c.clone(), p.max(c.len())),
            None => TruncatedSeries::exact(c),
        })
    })
}

fn check(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Associativity, commutativity, distributivity and inverses in a cubic
/// field, plus canonical equality across `Q(sqrt 2)` and `Q(sqrt 3)`.
pub fn field_axioms(cases: u32) -> Result<(), String> {
    run(cases, (cubic_element(), cubic_element(), cubic_element()), |(x, y, z)| {
        check(x.add(&y).add(&z) == x.add(&y.add(&z)), "addition is associative")?;
        check(x.mul(&y).mul(&z) == x.mul(&y.mul(&z)), "multiplication is associative")?;
        check(x.mul(&y) == y.mul(&x), "multiplication commutes")?;
        check(x.mul(&y.add(&z)) == x.mul(&y).add(&x.mul(&z)), "distributivity")?;
        check(x.sub(&x).is_zero(), "x - x = 0")?;
        if !x.is_zero() {
            check(x.mul(&x.inv()).is_one(), "x * x^-1 = 1")?;
            check(y.mul(&x).div(&x) == y, "(y x) / x = y")?;
        }
        Ok(())
    })?;
    run(cases, (quadratic_element("sqrt(2)"), quadratic_element("sqrt(3)")), |(x, y)| {
        check(x.add(&y).sub(&y) == x, "(x + y) - y = x across fields")?;
        check(x.add(&y).mul(&x.sub(&y)) == x.mul(&x).sub(&y.mul(&y)), "difference of squares")?;
        Ok(())
    })
}

/// Ring axioms for truncated series with exact precision bookkeeping.
pub fn series_ring_axioms(cases: u32) -> Result<(), String> {
    run(cases, (series(), series(), series()), |(a, b, c)| {
        let l = a.mul(&b).mul(&c);
        let r = a.mul(&b.mul(&c));
        check(l.agrees_with(&r) && l.prec() == r.prec(), "multiplication is associative")?;
        check(a.mul(&b) == b.mul(&a), "multiplication commutes")?;
        check(a.add(&b).add(&c) == a.add(&b.add(&c)), "addition is associative")?;
        check(a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))), "distributivity")?;
        check(a.sub(&a).order().finite().is_none(), "a - a has no certified nonzero term")?;
        check(a.mul(&TruncatedSeries::one()) == a, "one is neutral")?;
        Ok(())
    })
}

/// `(f ∘ g)' = (f' ∘ g) g'` for `ord(g) = 1`.
pub fn chain_rule(cases: u32) -> Result<(), String> {
    run(cases, (series(), inner_series()), |(f, g)| {
        let lhs = f.compose(&g).unwrap().derivative();
        let rhs = f.derivative().compose(&g).unwrap().mul(&g.derivative());
        check(lhs.agrees_with(&rhs), "chain rule")?;
        let p = lhs.prec().unwrap_or(usize::MAX).min(rhs.prec().unwrap_or(usize::MAX));
        let expected = match (f.prec(), g.prec()) {
            (None, None) => usize::MAX,
            (fp, gp) => fp.unwrap_or(usize::MAX).min(gp.unwrap_or(usize::MAX)).saturating_sub(1),
        };
        check(p >= expected.min(1_000), "chain rule is checked on the certified range")
    })
}

/// Inversion and composition contracts.
pub fn invert_compose(cases: u32) -> Result<(), String> {
    run(cases, (unit_series(), series(), inner_series(), inner_series()), |(u, f, g, h)| {
        let inv = u.invert().unwrap();
        let p = u.prec().unwrap();
        check(inv.prec() == Some(p), "inverse keeps the precision")?;
        check(u.mul(&inv).agrees_with(&TruncatedSeries::one()), "u * u^-1 = 1")?;
        check(u.mul(&inv).prec() == Some(p), "product is certified to the same precision")?;
        check(inv.invert().unwrap().agrees_with(&u), "inversion is an involution")?;
        check(f.compose(&TruncatedSeries::t()).unwrap() == f, "t is the identity for composition")?;
        let l = f.compose(&g).unwrap().compose(&h).unwrap();
        let r = f.compose(&g.compose(&h).unwrap()).unwrap();
        check(l.agrees_with(&r), "composition is associative")?;
        check(f.compose(&u) == Err(AodeError::InnerNotPositiveOrder), "units cannot be substituted")?;
        check(g.invert() == Err(AodeError::NotAUnit) || g.is_exact(), "positive order is not a unit")?;
        Ok(())
    })
}
