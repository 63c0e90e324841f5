//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Criteria 2 and 3 contain checks against expected values that disagree with
//! exact arithmetic on the same data. Those checks are run and reported as
//! failures; the test only fails if anything else breaks.

mod common;

use std::time::{Duration, Instant};

use aode_core::numbers::{all_roots, AlgebraicNumber};
use aode_core::poly::{parse_number, parse_polynomial, validate_input, Axis, BiPoly, Point};
use aode_core::puiseux::{default_bound, eval_series, places_at, Place};
use aode_core::series::TruncatedSeries;
use aode_core::solver::{
    classify, constant_solutions, critical_set, direct_method, is_order_suitable, reparametrize, solve_at,
    SolutionTruncation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type A = AlgebraicNumber;

const EX1: &str = "y'^2 - y^3 - y^2";
const EX2: &str = "((y'-1)^2 + y^2)^3 - 4*(y'-1)^2*y^2";

/// Checks whose expected values are known to contradict exact arithmetic,
/// with the reason printed next to the failure.
const KNOWN_CONFLICTS: &[(&str, &str)] = &[
    (
        "y2 = t - t^3/6 + 17/240*t^5",
        "the fourth place (t, 1 - t^2/2 - 3t^4/16) forces the t^5 coefficient -1/240",
    ),
    (
        "tangent at (0,1) is parallel to the y'-axis",
        "the only place is (t^2, 1 + t^(2m+1)), whose tangent (1, 0) is parallel to the y-axis",
    ),
];

fn q(s: &str) -> A {
    parse_number(s).unwrap()
}

fn pt(y: &str, z: &str) -> Point {
    Point::new(q(y), q(z))
}

fn ser(cs: &[&str], n: usize) -> TruncatedSeries {
    TruncatedSeries::with_trunc(cs.iter().map(|c| q(c)).collect(), n)
}

#[derive(Default)]
struct Criterion {
    checks: Vec<(String, bool, String)>,
}

impl Criterion {
    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push((name.to_string(), ok, detail.into()));
    }

    fn timed(&mut self, limit: Duration, elapsed: Duration) {
        self.check(&format!("runtime within {limit:?}"), elapsed <= limit, format!("{elapsed:?}"));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

/// Everything computed in criteria 1 to 4, for the residual suite.
#[derive(Default)]
struct Collected {
    places: Vec<(BiPoly, Place)>,
    solutions: Vec<(BiPoly, SolutionTruncation)>,
}

impl Collected {
    fn places(&mut self, f: &BiPoly, c: &Point, n: usize) -> Vec<Place> {
        let ps = places_at(f, c, n).unwrap();
        self.places.extend(ps.iter().map(|p| (f.clone(), p.clone())));
        ps
    }

    fn solve(&mut self, f: &BiPoly, c: &Point, n: usize) -> Vec<SolutionTruncation> {
        let s = solve_at(f, c, n).unwrap();
        self.solutions.extend(s.iter().map(|x| (f.clone(), x.clone())));
        s
    }
}

fn series_list(s: &[SolutionTruncation]) -> String {
    s.iter().map(|x| x.series.to_string()).collect::<Vec<_>>().join("; ")
}

fn criterion_1(col: &mut Collected) -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let f = parse_polynomial(EX1).unwrap();
    let crit: Vec<Point> = critical_set(&f).unwrap().into_iter().map(|c| c.point).collect();
    c.check("critical set {(0,0), (-1,0)}", crit == vec![pt("-1", "0"), pt("0", "0")], format!("{crit:?}"));
    let s0 = col.solve(&f, &pt("0", "0"), 9);
    c.check("no solutions at (0,0)", s0.is_empty(), series_list(&s0));
    let s1 = col.solve(&f, &pt("-1", "0"), 4);
    c.check(
        "solution -1 + t^2/4 - t^4/24 at (-1,0)",
        s1.len() == 1 && s1[0].series == ser(&["-1", "0", "1/4", "0", "-1/24"], 4),
        series_list(&s1),
    );
    let s2 = col.solve(&f, &pt("1", "sqrt(2)"), 3);
    c.check(
        "solution 1 + sqrt2 t + 5t^2/4 + 2sqrt2 t^3/3 at (1, sqrt2)",
        s2.len() == 1 && s2[0].series == ser(&["1", "sqrt(2)", "5/4", "2/3*sqrt(2)"], 3),
        series_list(&s2),
    );
    let cl = classify(&f, 1, 1).unwrap();
    c.check(
        "A0 = {(0,0)}, A1 = C(F) minus {(0,0)}",
        cl.buckets.len() == 1 && cl.buckets.get(&0) == Some(&vec![pt("0", "0")]) && cl.complement_of == vec![pt("0", "0")],
        cl.render(),
    );
    let consts = constant_solutions(&f).unwrap();
    c.check("constants {0, -1}", consts == vec![q("-1"), q("0")], format!("{consts:?}"));
    col.places(&f, &pt("0", "0"), default_bound(&f));
    col.places(&f, &pt("-1", "0"), default_bound(&f));
    c.timed(Duration::from_secs(5), start.elapsed());
    c
}

fn is_zero_of(poly: &str, y: &A, z: &A) -> bool {
    parse_polynomial(poly).unwrap().eval(y, z).is_zero()
}

fn criterion_2(col: &mut Collected) -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let f = parse_polynomial(EX2).unwrap();
    let c1 = pt("0", "1");
    let places = col.places(&f, &c1, default_bound(&f));
    c.check("four places at (0,1)", places.len() == 4, format!("{}", places.len()));
    if places.len() == 4 {
        // (λ t^2, 1 + b t + ...) is (t^2, 1 + √2 t + ...) up to t ↦ μt exactly
        // when b^2/λ = 2; the sign of λ separates the two classes.
        let invariant = |p: &Place| {
            let b1 = p.b().coeff(1).unwrap();
            b1.mul(&b1).div(p.lambda())
        };
        let first = (0..2).all(|i| places[i].e() == 2 && places[i].b().coeff(0) == Some(q("1")));
        c.check(
            "P1, P2 equivalent to (t^2, 1 + sqrt2 t + ...) and (-t^2, 1 - sqrt2 t + ...)",
            first && invariant(&places[0]) == q("2") && invariant(&places[1]) == q("-2"),
            format!("({}, {}), ({}, {})", places[0].a(), places[0].b().truncate(3), places[1].a(), places[1].b().truncate(3)),
        );
        let p3 = &places[2];
        let p4 = &places[3];
        let lead = |p: &Place, cs: &[&str]| {
            p.a() == &TruncatedSeries::t() && p.b().truncate(6).agrees_with(&ser(cs, 5)) && p.b().prec().unwrap() >= 6
        };
        c.check(
            "P3, P4 = (t, 1 ± t^2/2 ± 3t^4/16 + O(t^6))",
            lead(p3, &["1", "0", "1/2", "0", "3/16", "0"]) && lead(p4, &["1", "0", "-1/2", "0", "-3/16", "0"]),
            format!("{}; {}", p3.b().truncate(6), p4.b().truncate(6)),
        );
        let suitable: Vec<bool> = places.iter().map(|p| is_order_suitable(p).unwrap()).collect();
        c.check("only P3, P4 order-suitable", suitable == vec![false, false, true, true], format!("{suitable:?}"));
        let s3 = reparametrize(p3, 5).unwrap();
        c.check(
            "S = t + t^3/6 + 17t^5/240 for P3",
            s3 == ser(&["0", "1", "0", "1/6", "0", "17/240"], 5),
            s3.to_string(),
        );
    }
    let sols = col.solve(&f, &c1, 5);
    let y1 = ser(&["0", "1", "0", "1/6", "0", "17/240"], 5);
    let y2 = ser(&["0", "1", "0", "-1/6", "0", "17/240"], 5);
    c.check("two solutions at (0,1)", sols.len() == 2, series_list(&sols));
    c.check("y1 = t + t^3/6 + 17/240*t^5", sols.iter().any(|s| s.series == y1), series_list(&sols));
    c.check(KNOWN_CONFLICTS[0].0, sols.iter().any(|s| s.series == y2), series_list(&sols));

    let cl = classify(&f, 1, 4).unwrap();
    let a0 = cl.buckets.get(&0).cloned().unwrap_or_default();
    let alpha = a0.iter().filter(|p| p.z.is_zero() && is_zero_of("y^6 + 3*y^4 - y^2 + 1", &p.y, &p.z)).count();
    let beta_gamma = a0
        .iter()
        .filter(|p| is_zero_of("81/16*y^2 - 3", &p.y, &p.z) && is_zero_of("27*y'^2 - 54*y' + 19", &p.y, &p.z))
        .count();
    c.check(
        "A0 = {(alpha, 0)} (6 points) and {(4beta/9, gamma)} (4 points)",
        a0.len() == 10 && alpha == 6 && beta_gamma == 4,
        format!("{} points: {alpha} alpha, {beta_gamma} beta-gamma", a0.len()),
    );
    c.check(
        "A2 = {(0,1)} and no other buckets",
        cl.buckets.get(&2) == Some(&vec![c1.clone()]) && cl.buckets.len() == 2 && cl.extra.is_empty(),
        cl.render().lines().filter(|l| !l.starts_with("A0") && !l.starts_with("A1")).collect::<Vec<_>>().join(" | "),
    );
    let consts = constant_solutions(&f).unwrap();
    let ok = consts.len() == 6
        && consts.iter().all(|a| is_zero_of("y^6 + 3*y^4 - y^2 + 1", a, &A::zero()))
        && (0..6).all(|i| (0..i).all(|j| consts[i] != consts[j]));
    c.check("constants are the six roots of a^6 + 3a^4 - a^2 + 1", ok, format!("{}", consts.len()));
    c.timed(Duration::from_secs(120), start.elapsed());
    c
}

fn criterion_3(col: &mut Collected) -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let mut tangents = Vec::new();
    let mut all_empty = true;
    let mut single = true;
    for m in 1..=4 {
        let f = parse_polynomial(&format!("(y'-1)^2 - y^{}", 2 * m + 1)).unwrap();
        let c1 = pt("0", "1");
        all_empty &= col.solve(&f, &c1, 5).is_empty();
        let ps = col.places(&f, &c1, default_bound(&f));
        single &= ps.len() == 1;
        if let Some(p) = ps.first() {
            let (u, v) = p.tangent().unwrap();
            tangents.push((u, v));
        }
    }
    c.check("no solutions at (0,1) for m = 1..4", all_empty, "");
    c.check("a single place at (0,1)", single, "");
    let vertical = tangents.iter().all(|(u, v)| u.is_zero() && !v.is_zero());
    c.check(
        KNOWN_CONFLICTS[1].0,
        vertical && tangents.len() == 4,
        tangents.iter().map(|(u, v)| format!("({u}, {v})")).collect::<Vec<_>>().join(" "),
    );
    c.timed(Duration::from_secs(10), start.elapsed());
    c
}

/// Deterministic random irreducible cubics with small coefficients.
fn random_cubics(count: usize) -> Vec<BiPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(20190611);
    let mut out = Vec::new();
    while out.len() < count {
        let mut terms = Vec::new();
        for i in 0..=3usize {
            for j in 0..=3 - i {
                if rng.gen_bool(0.6) {
                    let k: i64 = rng.gen_range(-3..=3);
                    if k != 0 {
                        terms.push(((i, j), A::from_i64(k)));
                    }
                }
            }
        }
        let f = BiPoly::from_terms(terms);
        if f.total_degree() == 3 && f.deg_z() >= 1 && validate_input(&f).is_ok() {
            out.push(f);
        }
    }
    out
}

fn criterion_4(col: &mut Collected) -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let mut curves: Vec<BiPoly> = [EX1, EX2, "(y'-1)^2 - y^3"].iter().map(|s| parse_polynomial(s).unwrap()).collect();
    curves.extend(random_cubics(5));
    let mut tested = 0;
    let mut mismatches = Vec::new();
    for f in &curves {
        let mut here = 0;
        for c0 in ["2", "-1/2", "1/3", "3", "-2"] {
            if here == 3 {
                break;
            }
            let slice = f.univariate_slice(Axis::FixY, &q(c0));
            if slice.deg() == 0 {
                continue;
            }
            for (z0, _) in all_roots(&slice).unwrap() {
                let p = Point::new(q(c0), z0);
                if p.z.is_zero() || f.separant().eval(&p.y, &p.z).is_zero() || here == 3 {
                    continue;
                }
                let direct = direct_method(f, &p, 10).unwrap();
                let sols = col.solve(f, &p, 10);
                col.solutions.push((f.clone(), direct.clone()));
                if sols.len() != 1 || sols[0].series != direct.series {
                    mismatches.push(format!("{} at {p}", f.render()));
                }
                here += 1;
                tested += 1;
            }
        }
    }
    c.check("at least 20 points", tested >= 20, format!("{tested}"));
    c.check("direct method and places agree through t^10", mismatches.is_empty(), mismatches.join("; "));
    c.timed(Duration::from_secs(120), start.elapsed());
    c
}

fn criterion_5(col: &Collected) -> Criterion {
    let mut c = Criterion::default();
    let mut bad = Vec::new();
    for (f, p) in &col.places {
        let r = p.residual(f);
        let n = p.b().trunc().map(|t| t as usize);
        let ok = r.order().finite().is_none() && n.is_none_or(|n| r.prec().is_none_or(|rp| rp > n));
        if !ok {
            bad.push(format!("place at {} of {}: {r}", p.center(), f.render()));
        }
    }
    for (f, s) in &col.solutions {
        let n = s.series.trunc().unwrap() as usize;
        let r = eval_series(f, &s.series, &s.series.derivative());
        let ok = r.order().finite().is_none() && r.prec().is_none_or(|rp| rp >= n);
        if !ok {
            bad.push(format!("solution at {} of {}: {r}", s.center, f.render()));
        }
    }
    c.check(
        &format!("{} places and {} solutions have vanishing residuals", col.places.len(), col.solutions.len()),
        bad.is_empty(),
        bad.join("; "),
    );
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::default();
    for (src, p, m) in [(EX1, pt("0", "0"), 2), (EX2, pt("0", "1"), 4)] {
        let f = parse_polynomial(src).unwrap();
        let by_places: usize = places_at(&f, &p, default_bound(&f)).unwrap().iter().map(|p| p.order().unwrap()).sum();
        let by_degree = f.translate(&p.y, &p.z).low_degree().unwrap();
        c.check(
            &format!("multiplicity {m} at {p}"),
            by_places == m && by_degree == m,
            format!("place orders {by_places}, lowest degree {by_degree}"),
        );
    }
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    for (name, r) in [
        ("field axioms", common::field_axioms(common::CASES)),
        ("series ring axioms", common::series_ring_axioms(common::CASES)),
        ("chain rule", common::chain_rule(common::CASES)),
        ("invert/compose", common::invert_compose(common::CASES)),
    ] {
        c.check(&format!("{name}, {} cases", common::CASES), r.is_ok(), r.err().unwrap_or_default());
    }
    c.timed(Duration::from_secs(60), start.elapsed());
    c
}

/// Not a pass/fail criterion: residual decay of the truncated solution at
/// (-1, 0) for real `t` in `[-1/4, 1/4]`.
fn convergence_demo() {
    let f = parse_polynomial(EX1).unwrap();
    let eval = |cs: &[f64], t: f64| cs.iter().rev().fold(0.0, |acc, c| acc * t + c);
    println!("convergence demo (not graded): max |F(y_N, y_N')| on |t| <= 1/4");
    for n in [4, 8, 12] {
        let s = &solve_at(&f, &pt("-1", "0"), n).unwrap()[0].series;
        let cs: Vec<f64> = s.coeffs().iter().map(|c| c.to_f64().0).collect();
        let ds: Vec<f64> = cs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
        let worst = (-20..=20)
            .map(|k| k as f64 / 80.0)
            .map(|t| {
                let (y, z) = (eval(&cs, t), eval(&ds, t));
                (z * z - y * y * y - y * y).abs()
            })
            .fold(0.0, f64::max);
        println!("  order {n:>2}: {worst:.3e}");
    }
}

#[test]
fn acceptance_report() {
    let mut col = Collected::default();
    let results = [
        criterion_1(&mut col),
        criterion_2(&mut col),
        criterion_3(&mut col),
        criterion_4(&mut col),
        criterion_5(&col),
        criterion_6(),
        criterion_7(),
    ];
    let mut unexpected = Vec::new();
    for (i, r) in results.iter().enumerate() {
        println!("criterion {}: {}", i + 1, if r.passed() { "PASS" } else { "FAIL" });
        for (name, ok, detail) in &r.checks {
            if *ok {
                continue;
            }
            match KNOWN_CONFLICTS.iter().find(|k| k.0 == name) {
                Some((_, why)) => println!("    failed: {name} [{detail}]; {why}"),
                None => {
                    println!("    failed: {name} [{detail}]");
                    unexpected.push(format!("criterion {}: {name}", i + 1));
                }
            }
        }
    }
    convergence_demo();
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
}
