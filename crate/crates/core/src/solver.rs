//! Formal power series solutions from places.
//!
//! A place `(A, B)` with `A = c0 + λ t^e` comes from a solution exactly when
//! `ord(A') = ord(B)`. In that case the reparametrization `S` solving
//! `A'(S) S' = B(S)` turns it into the solution `y = A(S)`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use serde_json::{json, Value};

use crate::error::{AodeError, Result};
use crate::numbers::field::{degree_cap, with_degree_cap};
use crate::numbers::json::value_to_json;
use crate::numbers::{all_roots, AlgebraicNumber};
use crate::poly::{Axis, BiPoly, Point};
use crate::puiseux::{eval_series, places_at, Place};
use crate::series::{Order, TruncatedSeries};

type A = AlgebraicNumber;

/// A truncated solution together with the place it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionTruncation {
    pub series: TruncatedSeries,
    pub center: Point,
    /// Index of the generating place in the output of `places_at`.
    pub place_id: usize,
    pub repar: TruncatedSeries,
}

impl SolutionTruncation {
    pub fn to_json(&self) -> Value {
        json!({
            "center": point_json(&self.center),
            "series": self.series.to_json(),
            "place_id": self.place_id,
            "repar": self.repar.to_json(),
        })
    }

    pub fn render(&self) -> String {
        format!("y(t) = {}", self.series.render("t"))
    }
}

pub fn point_json(p: &Point) -> Value {
    json!([value_to_json(&p.y), value_to_json(&p.z)])
}

fn ord_plain(b: &TruncatedSeries) -> Result<usize> {
    match b.order() {
        Order::Finite(k) => Ok(k),
        o => Err(AodeError::InsufficientPrecision(format!("ord(B) {o} is not certified"))),
    }
}

/// `ord(A') = ord(B)`, checked against the center form: for `c1 != 0` the
/// place must have `ord_c(A) = 1`, and for `c1 = 0` we need
/// `ord_c(B) = ord_c(A) - 1`.
pub fn is_order_suitable(p: &Place) -> Result<bool> {
    let ord_da = p.e() - 1;
    let plain = ord_plain(p.b())? == ord_da;
    let center_form = if p.center().z.is_zero() {
        p.ord_b_at_center()? + 1 == p.e()
    } else {
        p.e() == 1
    };
    assert_eq!(plain, center_form, "order-suitability tests disagree at {}", p.center());
    Ok(plain)
}

/// The series `S` with `ord(S) = 1` and `A'(S) S' = B(S)`, through `t^n`.
///
/// With `k = e - 1` both sides carry `S^k`, so the equation reduces to
/// `e λ S' = B~(S)` where `B = t^k B~`. Powers of `S` are built one
/// coefficient at a time; appending `s_i t^i` never changes coefficients
/// of `S^j` below `t^i`.
pub fn reparametrize(p: &Place, n: usize) -> Result<TruncatedSeries> {
    if !is_order_suitable(p)? {
        return Err(AodeError::NotOrderSuitable);
    }
    let k = p.e() - 1;
    let lead = p.lambda().scale(&crate::ring::qq(p.e() as i64, 1));
    let bt = (0..n)
        .map(|i| {
            p.b().coeff(k + i).ok_or_else(|| {
                AodeError::InsufficientPrecision(format!("place carries too few coefficients for order {n}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // pw[j][i] = [t^i] S^j
    let mut s = vec![A::zero(); n + 1];
    let mut pw: Vec<Vec<A>> = vec![vec![A::zero(); n + 1]; n + 1];
    pw[0][0] = A::one();
    for i in 0..n {
        if i > 0 {
            pw[1][i] = s[i].clone();
            for j in 2..=i {
                let mut acc = A::zero();
                for l in 1..=i + 1 - j {
                    if !s[l].is_zero() && !pw[j - 1][i - l].is_zero() {
                        acc = acc.add(&s[l].mul(&pw[j - 1][i - l]));
                    }
                }
                pw[j][i] = acc;
            }
        }
        let mut c = A::zero();
        for (j, b) in bt.iter().enumerate().take(i + 1) {
            if !b.is_zero() && !pw[j][i].is_zero() {
                c = c.add(&b.mul(&pw[j][i]));
            }
        }
        s[i + 1] = c.div(&lead.scale(&crate::ring::qq(i as i64 + 1, 1)));
    }
    Ok(TruncatedSeries::with_trunc(s, n))
}

/// `A(S)` through `t^n`.
fn solution_from(p: &Place, s: &TruncatedSeries, n: usize) -> TruncatedSeries {
    let a = TruncatedSeries::constant(p.center().y.clone()).add(&s.pow(p.e() as u32).scale(p.lambda()));
    a.truncate(n + 1)
}

/// Non-constant solutions with initial tuple `c`, each through
/// `t^max(n, mult + e)`. Empty when `c` is off the curve.
pub fn solve_at(f: &BiPoly, c: &Point, n: usize) -> Result<Vec<SolutionTruncation>> {
    if !f.eval(&c.y, &c.z).is_zero() {
        return Ok(Vec::new());
    }
    let mult = f.multiplicity_at(&c.y, &c.z)?;
    let places = places_at(f, c, n.max(2 * mult) + mult)?;
    let mut out: Vec<SolutionTruncation> = Vec::new();
    for (id, p) in places.iter().enumerate() {
        if !is_order_suitable(p)? {
            continue;
        }
        let order = n.max(mult + p.e());
        let s = reparametrize(p, order)?;
        let y = solution_from(p, &s, order);
        out.push(SolutionTruncation { series: y, center: c.clone(), place_id: id, repar: s });
    }
    for i in 0..out.len() {
        for j in 0..i {
            if out[i].series == out[j].series {
                return Err(AodeError::InsufficientPrecision(format!(
                    "solutions from places {} and {} agree through the computed order",
                    out[j].place_id, out[i].place_id
                )));
            }
        }
    }
    Ok(out)
}

/// The separant recursion: with `c_0..c_k` fixed and `c_{k+1} = 0`, the
/// coefficient `ρ` of `t^k` in `F(y, y')` gives
/// `c_{k+1} = -ρ / ((k+1) S_F(c0, c1))`.
pub fn direct_method(f: &BiPoly, c: &Point, n: usize) -> Result<SolutionTruncation> {
    if !f.eval(&c.y, &c.z).is_zero() {
        return Err(AodeError::PointNotOnCurve);
    }
    let sep = f.separant().eval(&c.y, &c.z);
    if sep.is_zero() {
        return Err(AodeError::SeparantVanishes);
    }
    let mut cs = vec![c.y.clone(), c.z.clone()];
    for k in 1..n {
        cs.push(A::zero());
        let y = TruncatedSeries::truncated(cs.clone(), k + 2);
        let rho = eval_series(f, &y, &y.derivative()).coeff(k).expect("precision k + 1");
        cs[k + 1] = rho.neg().div(&sep.scale(&crate::ring::qq(k as i64 + 1, 1)));
    }
    cs.truncate(n + 1);
    Ok(SolutionTruncation {
        series: TruncatedSeries::with_trunc(cs, n),
        center: c.clone(),
        place_id: 0,
        repar: TruncatedSeries::t(),
    })
}

/// Roots of `F(y, 0)`, sorted.
pub fn constant_solutions(f: &BiPoly) -> Result<Vec<A>> {
    let p = f.univariate_slice(Axis::FixZ, &A::zero());
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    let mut roots: Vec<A> = all_roots(&p)?.into_iter().map(|(r, _)| r).collect();
    roots.sort_by(|a, b| a.numeric_cmp(b));
    Ok(roots)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub point: Point,
    /// `c1 = 0`.
    pub on_axis: bool,
    /// `S_F(c) = 0`.
    pub separant_zero: bool,
}

impl CriticalPoint {
    /// Points on the z-axis with a nonvanishing separant are never centers
    /// of solution places.
    pub fn non_solution_place(&self) -> bool {
        self.on_axis && !self.separant_zero
    }

    pub fn to_json(&self) -> Value {
        let mut tags = Vec::new();
        if self.on_axis {
            tags.push("z_axis");
        }
        if self.separant_zero {
            tags.push("separant");
        }
        json!({
            "point": point_json(&self.point),
            "tags": tags,
            "non_solution_place": self.non_solution_place(),
        })
    }

    pub fn render(&self) -> String {
        let mut tags = Vec::new();
        if self.on_axis {
            tags.push("z-axis");
        }
        if self.separant_zero {
            tags.push("separant");
        }
        let mut s = format!("{}  [{}]", self.point, tags.join(", "));
        if self.non_solution_place() {
            s.push_str("  non-solution-place");
        }
        s
    }
}

/// `V(F, z) ∪ V(F, S_F)`, sorted, each point tagged with its components.
pub fn critical_set(f: &BiPoly) -> Result<Vec<CriticalPoint>> {
    let axis = crate::poly::solve_system(f, &BiPoly::z())?;
    let sep = crate::poly::solve_system(f, &f.separant())?;
    let mut out: Vec<CriticalPoint> = Vec::new();
    for p in axis {
        let separant_zero = sep.contains(&p);
        out.push(CriticalPoint { point: p, on_axis: true, separant_zero });
    }
    for p in sep {
        if !out.iter().any(|q| q.point == p) {
            out.push(CriticalPoint { on_axis: p.z.is_zero(), point: p, separant_zero: true });
        }
    }
    out.sort_by(|a, b| a.point.numeric_cmp(&b.point));
    Ok(out)
}

/// Initial tuples bucketed by the number of non-constant solutions. Every
/// point of the curve outside the critical set has exactly one, so
/// `A1 = C(F) \ complement_of`.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    /// Critical points by solution count, except count 1.
    pub buckets: BTreeMap<usize, Vec<Point>>,
    /// Every critical point outside `A1`.
    pub complement_of: Vec<Point>,
    /// Critical points that do lie in `A1`.
    pub extra: Vec<Point>,
    pub constants: Vec<A>,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        let pts = |v: &[Point]| v.iter().map(point_json).collect::<Vec<_>>();
        let mut m = serde_json::Map::new();
        let mut keys: Vec<usize> = self.buckets.keys().copied().chain([1]).collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            if k == 1 {
                m.insert(
                    "A1".into(),
                    json!({"complement_of": pts(&self.complement_of), "extra": pts(&self.extra)}),
                );
            } else {
                m.insert(format!("A{k}"), json!(pts(&self.buckets[&k])));
            }
        }
        m.insert("constants".into(), json!(self.constants.iter().map(value_to_json).collect::<Vec<_>>()));
        Value::Object(m)
    }

    pub fn render(&self) -> String {
        let set = |v: &[Point]| format!("{{{}}}", v.iter().map(|p| p.render()).collect::<Vec<_>>().join(", "));
        let mut lines = Vec::new();
        let mut keys: Vec<usize> = self.buckets.keys().copied().chain([1]).collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            if k == 1 {
                let mut s = format!("A1 = C(F) \\ {}", set(&self.complement_of));
                if !self.extra.is_empty() {
                    s.push_str(&format!(", including the critical points {}", set(&self.extra)));
                }
                lines.push(s);
            } else {
                lines.push(format!("A{k} = {}", set(&self.buckets[&k])));
            }
        }
        let consts: Vec<String> = self.constants.iter().map(|c| c.render()).collect();
        lines.push(format!("constants = {{{}}}", consts.join(", ")));
        lines.join("\n")
    }
}

/// Runs `solve_at` at every critical point, on up to `jobs` threads. The
/// result does not depend on `jobs`.
pub fn classify(f: &BiPoly, n: usize, jobs: usize) -> Result<Classification> {
    let crit: Vec<Point> = critical_set(f)?.into_iter().map(|c| c.point).collect();
    let count = |p: &Point| -> Result<usize> { Ok(solve_at(f, p, n)?.len()) };
    let counts: Vec<Result<usize>> = if jobs <= 1 || crit.len() <= 1 {
        crit.iter().map(count).collect()
    } else {
        let cap = degree_cap();
        let next = AtomicUsize::new(0);
        let mut slots: Vec<Option<Result<usize>>> = vec![None; crit.len()];
        std::thread::scope(|sc| {
            let handles: Vec<_> = (0..jobs.min(crit.len()))
                .map(|_| {
                    sc.spawn(|| {
                        with_degree_cap(cap, || {
                            let mut done = Vec::new();
                            loop {
                                let i = next.fetch_add(1, AtomicOrdering::SeqCst);
                                if i >= crit.len() {
                                    break;
                                }
                                done.push((i, count(&crit[i])));
                            }
                            done
                        })
                    })
                })
                .collect();
            for h in handles {
                for (i, r) in h.join().expect("classification worker panicked") {
                    slots[i] = Some(r);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("every point is processed")).collect()
    };
    let mut buckets: BTreeMap<usize, Vec<Point>> = BTreeMap::new();
    let mut extra = Vec::new();
    let mut complement_of = Vec::new();
    for (p, k) in crit.into_iter().zip(counts) {
        match k? {
            1 => extra.push(p),
            k => {
                complement_of.push(p.clone());
                buckets.entry(k).or_default().push(p);
            }
        }
    }
    Ok(Classification { buckets, complement_of, extra, constants: constant_solutions(f)? })
}
