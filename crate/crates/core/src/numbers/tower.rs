//! Factorization over number fields (Trager's norm method), root finding in
//! and over a field, and composita of two fields.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::algebraic::AlgebraicNumber;
use super::complex::{locate_root, root_count, root_disk, CBox};
use super::field::{
    cached_compositum, degree_cap, intern_field, known_embedding, register_embedding,
    store_compositum, ModArith, NumberField,
};
use super::qpoly::{factor_squarefree, QPoly};
use crate::error::{AodeError, Result};
use crate::upoly::UniPoly;

pub type APoly = UniPoly<AlgebraicNumber>;

/// An irreducible factor `g` of a polynomial over `K`, together with the
/// rational polynomial `norm` satisfied by `xi + shift*theta` for roots `xi`
/// of `g` (`theta` the generator of `K`).
#[derive(Clone, Debug)]
pub struct FieldFactor {
    pub poly: APoly,
    pub norm: QPoly,
    pub shift: i64,
}

/// A root of a field factor, identified by a root of its norm before any
/// field is created for it.
#[derive(Clone, Debug)]
struct Candidate {
    norm: QPoly,
    index: usize,
    /// Image of the base generator in `Q(eta)`.
    theta: Vec<BigRational>,
    /// The root itself in `Q(eta)`.
    xi: Vec<BigRational>,
}

/// Common field of a list of values, creating composita as needed.
pub fn common_field<'a>(values: impl IntoIterator<Item = &'a AlgebraicNumber>) -> Result<Option<Arc<NumberField>>> {
    let mut acc: Option<Arc<NumberField>> = None;
    for v in values {
        if let Some(f) = v.field() {
            acc = Some(match acc {
                None => f.clone(),
                Some(a) => compositum(&a, f, degree_cap())?,
            });
        }
    }
    Ok(acc)
}

/// Coefficients of `f` lifted into `field` (as power-basis vectors).
fn lifted(field: &Arc<NumberField>, f: &APoly) -> Vec<Vec<BigRational>> {
    f.coeffs().iter().map(|c| c.lift_to(field)).collect()
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `G(x, y) = sum_k f_k(y) (x - s*y)^k` reduced modulo `m(y)`, as a
/// polynomial in `y` with coefficients in `Q[x]`.
fn shifted_bivariate(field: &NumberField, fk: &[Vec<BigRational>], s: i64) -> Vec<QPoly> {
    let d = field.degree();
    let mut g: Vec<Vec<BigRational>> = Vec::new();
    let deg = fk.len().saturating_sub(1);
    let width = deg + 1;
    for (k, coeff) in fk.iter().enumerate() {
        for j in 0..=k {
            let c = BigRational::from_integer(binomial(k, j) * BigInt::from(-s).pow(j as u32));
            if c.is_zero() {
                continue;
            }
            for (a, fa) in coeff.iter().enumerate() {
                if fa.is_zero() {
                    continue;
                }
                let ypow = a + j;
                while g.len() <= ypow {
                    g.push(vec![BigRational::zero(); width]);
                }
                g[ypow][k - j] += fa * &c;
            }
        }
    }
    // reduce modulo m(y), coefficientwise in x
    let m = field.minpoly();
    while g.len() > d {
        let top = g.pop().unwrap();
        let base = g.len() - d;
        for i in 0..d {
            let mi = m.coeff(i);
            if mi.is_zero() {
                continue;
            }
            for (xk, t) in top.iter().enumerate() {
                if !t.is_zero() {
                    g[base + i][xk] -= t * &mi;
                }
            }
        }
    }
    g.into_iter().map(UniPoly::new).collect()
}

/// The norm `Res_y(m(y), G(x, y))`.
fn norm_poly(field: &NumberField, fk: &[Vec<BigRational>], s: i64) -> QPoly {
    let g = UniPoly::new(shifted_bivariate(field, fk, s));
    let m: UniPoly<QPoly> = UniPoly::new(field.minpoly().coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect());
    m.resultant(&g)
}

/// Characteristic polynomial of multiplication by the element `v`.
pub fn char_poly(field: &NumberField, v: &[BigRational]) -> QPoly {
    // Res_y(m(y), x - v(y))
    let mut g: Vec<QPoly> = v.iter().map(|c| UniPoly::constant(-c)).collect();
    if g.is_empty() {
        g.push(UniPoly::zero());
    }
    g[0] = g[0].add(&UniPoly::x());
    let m: UniPoly<QPoly> = UniPoly::new(field.minpoly().coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect());
    m.resultant(&UniPoly::new(g)).monic()
}

/// Index of the factor (in `factors`) having a root inside the enclosures
/// produced by `target`.
pub fn which_factor(factors: &[QPoly], mut target: impl FnMut(u32) -> CBox) -> usize {
    let mut bits = 24;
    loop {
        let b = target(bits);
        let hits: Vec<usize> = factors
            .iter()
            .enumerate()
            .filter(|(_, f)| super::complex::root_disks(f, bits).iter().any(|d| d.meets_box(&b)))
            .map(|(i, _)| i)
            .collect();
        if hits.len() == 1 {
            return hits[0];
        }
        assert!(bits < 1 << 14, "could not match a value to a factor");
        bits *= 2;
    }
}

/// Image of the generator of `small` in `big`, given one value `v`
/// expressed in both (where `v` in `small` is either the generator or
/// `a + b*generator`).
pub fn express_generator(
    small: &Arc<NumberField>,
    big: &Arc<NumberField>,
    v_small: &AlgebraicNumber,
    v_big: &AlgebraicNumber,
) -> Vec<BigRational> {
    let c = v_small.lift_to(small);
    let x = v_big.lift_to(big);
    let a = c.first().cloned().unwrap_or_else(BigRational::zero);
    let b = c.get(1).cloned().expect("value does not generate its field");
    assert!(c.len() == 2, "value must be affine in the generator");
    let k = big.arith();
    k.scale(&k.sub(&x, &[a]), &b.recip())
}

/// Factors a squarefree polynomial over the field generated by its
/// coefficients (or over `field` when given).
pub fn factor_over(field: Option<&Arc<NumberField>>, f: &APoly) -> Vec<FieldFactor> {
    let f = f.monic();
    if f.deg() == 0 {
        return Vec::new();
    }
    let Some(k) = field else {
        let qf: QPoly = f.map(|c| c.as_rational().expect("rational polynomial expected"));
        return factor_squarefree(&qf)
            .into_iter()
            .map(|g| FieldFactor { poly: g.map(|c| AlgebraicNumber::rational(c.clone())), norm: g, shift: 0 })
            .collect();
    };
    if f.deg() == 1 {
        let norm = char_poly(k, &f.coeff(0).neg().lift_to(k));
        return vec![FieldFactor { poly: f.clone(), norm, shift: 0 }];
    }
    let fk = lifted(k, &f);
    let theta = AlgebraicNumber::generator(k);
    let mut s: i64 = 0;
    loop {
        let n = norm_poly(k, &fk, s);
        if n.deg() == f.deg() * k.degree() && n.is_squarefree() {
            let n = n.monic();
            let parts = factor_squarefree(&n);
            if parts.len() == 1 {
                return vec![FieldFactor { poly: f, norm: n, shift: s }];
            }
            let st = theta.mul(&AlgebraicNumber::from_i64(s));
            let mut out = Vec::new();
            for ni in parts {
                let shifted: APoly = ni.map(|c| AlgebraicNumber::rational(c.clone())).shift(&st);
                let g = f.gcd(&shifted);
                if g.deg() >= 1 {
                    out.push(FieldFactor { poly: g, norm: ni, shift: s });
                }
            }
            return out;
        }
        s = if s <= 0 { 1 - s } else { -s };
    }
}

/// Roots of a nonlinear field factor, as candidates pinned to roots of the
/// norm. Only those consistent with the pinned generator of `field` survive.
fn candidates(field: Option<&Arc<NumberField>>, fac: &FieldFactor) -> Vec<Candidate> {
    let n = root_count(&fac.norm);
    let Some(k) = field else {
        return (0..n)
            .map(|index| Candidate {
                norm: fac.norm.clone(),
                index,
                theta: Vec::new(),
                xi: vec![BigRational::zero(), BigRational::one()],
            })
            .collect();
    };
    let l = ModArith::new(&fac.norm);
    // gcd over Q(eta) of m(y) and G(eta, y) is y - theta
    let fk = lifted(k, &fac.poly);
    let g = shifted_bivariate(k, &fk, fac.shift);
    let g_eta: Vec<Vec<BigRational>> = g.into_iter().map(|c| l.reduce(c.into_coeffs())).collect();
    let m_l: Vec<Vec<BigRational>> =
        k.minpoly().coeffs().iter().map(|c| super::field::trim(vec![c.clone()])).collect();
    let lin = l.poly_gcd(m_l, g_eta);
    assert_eq!(lin.len(), 2, "norm shift failed to separate conjugates");
    let theta = l.neg(&lin[0]);
    let xi = l.sub(&[BigRational::zero(), BigRational::one()], &l.scale(&theta, &BigRational::from_integer(fac.shift.into())));
    let m = k.minpoly();
    let mut out = Vec::new();
    for index in 0..n {
        let j = locate_root(&m, |bits| {
            let eta = root_disk(&fac.norm, index, bits).to_box();
            eta.eval_poly(&theta, bits + 8)
        });
        if j == k.root_index() {
            out.push(Candidate { norm: fac.norm.clone(), index, theta: theta.clone(), xi: xi.clone() });
        }
    }
    assert_eq!(out.len(), fac.poly.deg(), "conjugate selection mismatch");
    out
}

fn cap_check(field: Option<&Arc<NumberField>>, degree: usize, cap: usize) -> Result<()> {
    if degree > cap {
        let tower = field.map_or("Q".to_string(), |f| {
            f.tower().iter().map(|l| l.symbol()).collect::<Vec<_>>().join(" > ")
        });
        return Err(AodeError::ExtensionLimitExceeded { degree, cap, tower });
    }
    Ok(())
}

fn realize(field: Option<&Arc<NumberField>>, c: &Candidate) -> AlgebraicNumber {
    match field {
        None => AlgebraicNumber::root_of_irreducible(&c.norm, c.index),
        Some(k) => {
            let l = intern_field(&c.norm, c.index, Some((k, c.theta.clone())));
            AlgebraicNumber::in_field(&l, c.xi.clone())
        }
    }
}

fn candidate_box(c: &Candidate, bits: u32) -> CBox {
    let eta = root_disk(&c.norm, c.index, bits).to_box();
    eta.eval_poly(&c.xi, bits + 8)
}

/// Smallest field (up to known embeddings) containing both `a` and `b`.
pub fn compositum(a: &Arc<NumberField>, b: &Arc<NumberField>, cap: usize) -> Result<Arc<NumberField>> {
    if Arc::ptr_eq(a, b) {
        return Ok(a.clone());
    }
    if let Some(c) = cached_compositum(a, b) {
        return Ok(c);
    }
    if known_embedding(b, a).is_some() {
        return Ok(a.clone());
    }
    if known_embedding(a, b).is_some() {
        return Ok(b.clone());
    }
    // Factor b's minimal polynomial over a and find the factor vanishing at b.
    let mb = b.minpoly();
    let f: APoly = mb.map(|c| AlgebraicNumber::rational(c.clone()));
    let factors = factor_over(Some(a), &f);
    let mut all: Vec<(Option<AlgebraicNumber>, Option<Candidate>)> = Vec::new();
    for fac in &factors {
        if fac.poly.deg() == 1 {
            all.push((Some(fac.poly.coeff(0).neg()), None));
        } else {
            for c in candidates(Some(a), fac) {
                all.push((None, Some(c)));
            }
        }
    }
    let mut bits = 24;
    let chosen = loop {
        let boxes: Vec<CBox> = all
            .iter()
            .map(|(r, c)| match (r, c) {
                (Some(r), _) => r.enclosure(bits),
                (None, Some(c)) => candidate_box(c, bits),
                _ => unreachable!(),
            })
            .collect();
        let target = b.disk(bits);
        let hits: Vec<usize> = (0..all.len()).filter(|&i| target.meets_box(&boxes[i])).collect();
        if hits.len() == 1 {
            break hits[0];
        }
        assert!(bits < 1 << 14, "could not identify the compositum");
        bits *= 2;
    };
    let result = match &all[chosen] {
        (Some(r), _) => {
            register_embedding(b, a, r.lift_to(a));
            a.clone()
        }
        (None, Some(c)) => {
            cap_check(Some(a), c.norm.deg(), cap)?;
            let v = realize(Some(a), c);
            let l = v.field().unwrap().clone();
            register_embedding(b, &l, v.lift_to(&l));
            l
        }
        _ => unreachable!(),
    };
    store_compositum(a, b, &result);
    Ok(result)
}

fn sort_roots(roots: &mut [(AlgebraicNumber, usize)]) {
    roots.sort_by(|x, y| x.0.numeric_cmp(&y.0));
}

/// Roots of `f` lying in the field generated by its coefficients (or the
/// larger `field` when given), with multiplicities.
pub fn roots_in_field(f: &APoly, field: Option<&Arc<NumberField>>) -> Result<Vec<(AlgebraicNumber, usize)>> {
    let k = match field {
        Some(k) => Some(k.clone()),
        None => common_field(f.coeffs())?,
    };
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        if part.deg() == 0 {
            continue;
        }
        for fac in factor_over(k.as_ref(), &part) {
            if fac.poly.deg() == 1 {
                out.push((fac.poly.coeff(0).neg(), mult));
            }
        }
    }
    sort_roots(&mut out);
    Ok(out)
}

/// All complex roots of `f` with multiplicities; roots outside the
/// coefficient field get new extension fields.
pub fn all_roots(f: &APoly) -> Result<Vec<(AlgebraicNumber, usize)>> {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    let k = common_field(f.coeffs())?;
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        if part.deg() == 0 {
            continue;
        }
        for fac in factor_over(k.as_ref(), &part) {
            if fac.poly.deg() == 1 {
                out.push((fac.poly.coeff(0).neg(), mult));
                continue;
            }
            cap_check(k.as_ref(), fac.norm.deg(), degree_cap())?;
            for c in candidates(k.as_ref(), &fac) {
                out.push((realize(k.as_ref(), &c), mult));
            }
        }
    }
    sort_roots(&mut out);
    Ok(out)
}

/// Returns a root of `f`: one in the coefficient field when it exists,
/// otherwise the first root of the lowest-degree irreducible factor.
pub fn adjoin_root(f: &APoly) -> Result<AlgebraicNumber> {
    assert!(f.deg() >= 1, "adjoin_root needs a non-constant polynomial");
    let k = common_field(f.coeffs())?;
    let sf = f.squarefree_part();
    let mut facs = factor_over(k.as_ref(), &sf);
    facs.sort_by_key(|fac| fac.poly.deg());
    let fac = &facs[0];
    if fac.poly.deg() == 1 {
        return Ok(fac.poly.coeff(0).neg());
    }
    cap_check(k.as_ref(), fac.norm.deg(), degree_cap())?;
    let mut vals: Vec<AlgebraicNumber> = candidates(k.as_ref(), fac).iter().map(|c| realize(k.as_ref(), c)).collect();
    vals.sort_by(|x, y| x.numeric_cmp(y));
    Ok(vals.remove(0))
}

/// Convenience for rational polynomials.
pub fn qpoly_to_apoly(p: &QPoly) -> APoly {
    p.map(|c| AlgebraicNumber::rational(c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qq};

    fn p(v: &[i64]) -> APoly {
        UniPoly::new(v.iter().map(|&x| AlgebraicNumber::from_i64(x)).collect())
    }

    fn sqrt(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::root_of_irreducible(&UniPoly::new(vec![q(-n), q(0), q(1)]), 1)
    }

    #[test]
    fn rational_root_needs_no_extension() {
        let r = adjoin_root(&p(&[-1, 0, 1])).unwrap();
        assert!(r.is_rational());
    }

    #[test]
    fn sextic_generator_satisfies_minpoly() {
        let f = p(&[1, 0, -1, 0, 3, 0, 1]);
        let a = adjoin_root(&f).unwrap();
        assert_eq!(a.field_degree(), 6);
        let mut acc = AlgebraicNumber::zero();
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(&a).add(c);
        }
        assert!(acc.is_zero());
        assert_eq!(all_roots(&f).unwrap().len(), 6);
    }

    #[test]
    fn gamma_roots_over_sqrt_six() {
        let f = p(&[19, -54, 27]);
        let s6 = sqrt(6);
        assert!(roots_in_field(&f, None).unwrap().is_empty());
        let roots = roots_in_field(&f, s6.field()).unwrap();
        let expect_hi = AlgebraicNumber::from_i64(1).add(&s6.mul(&AlgebraicNumber::rational(qq(2, 9))));
        let expect_lo = AlgebraicNumber::from_i64(1).sub(&s6.mul(&AlgebraicNumber::rational(qq(2, 9))));
        assert_eq!(roots, vec![(expect_lo, 1), (expect_hi, 1)]);
    }

    #[test]
    fn factoring_over_quadratic_field() {
        // x^4 - 10x^2 + 1 splits into two quadratics over Q(sqrt 2)
        let f = p(&[1, 0, -10, 0, 1]);
        let facs = factor_over(sqrt(2).field(), &f);
        assert_eq!(facs.len(), 2);
        assert!(facs.iter().all(|g| g.poly.deg() == 2));
        let roots = all_roots(&f).unwrap();
        assert_eq!(roots.len(), 4);
        for (r, m) in &roots {
            assert_eq!(*m, 1);
            let v = f.eval(r);
            assert!(v.is_zero());
        }
    }

    #[test]
    fn tower_over_sqrt_two() {
        // x^2 - sqrt(2) needs a quartic extension with parent Q(sqrt 2)
        let s2 = sqrt(2);
        let f: APoly = UniPoly::new(vec![s2.neg(), AlgebraicNumber::zero(), AlgebraicNumber::one()]);
        let roots = all_roots(&f).unwrap();
        assert_eq!(roots.len(), 2);
        for (r, _) in &roots {
            assert_eq!(r.mul(r), s2);
            assert_eq!(r.field().unwrap().tower().len(), 2);
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let f = p(&[1, 0, -1, 0, 3, 0, 1]);
        let r = super::super::field::with_degree_cap(4, || adjoin_root(&f));
        assert!(matches!(r, Err(AodeError::ExtensionLimitExceeded { .. })));
    }
}
