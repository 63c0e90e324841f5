//! Input validation: `F` must involve `y'`, must not be `y' - λ`, and must
//! be irreducible over the algebraic closure of the rationals.
//!
//! Absolute irreducibility is decided through a power series root. Fix a
//! rational `a` with `F(a, z)` squarefree of full degree, put `y = x + a` and
//! let `φ(x)` be the series root through a simple root of `F(a, z)`. A proper
//! factor of `F` over any number field yields `H ≠ 0` with `deg_z H < n` and
//! `deg_x H ≤ m` killing `φ`; conversely such an `H` with
//! `H(x, φ) ≡ 0 mod x^M`, `M > m(n + deg_z H)`, shares a factor with `F`
//! because `Res_z(F, H)` has degree below `M`. The linear conditions are
//! tested for full column rank modulo a prime, which certifies
//! irreducibility; when that fails the kernel is computed exactly and gives
//! the witness factor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{Axis, BiPoly};
use crate::error::{AodeError, Result};
use crate::numbers::qpoly::{factor_q, QPoly};
use crate::numbers::tower::{all_roots, qpoly_to_apoly};
use crate::numbers::{AlgebraicNumber, APoly};
use crate::upoly::UniPoly;

type A = AlgebraicNumber;
type ZPoly = UniPoly<APoly>;

fn not_irreducible(factor: &BiPoly) -> AodeError {
    AodeError::NotIrreducible { factor: normalize(factor).render() }
}

/// Scales so that the leading coefficient (highest power of `z`, then of `y`)
/// is one.
fn normalize(f: &BiPoly) -> BiPoly {
    let lead = f
        .terms()
        .max_by(|p, q| p.0 .1.cmp(&q.0 .1).then(p.0 .0.cmp(&q.0 .0)))
        .map(|(_, c)| c.clone())
        .expect("nonzero factor");
    f.scale(&lead.inv())
}

fn content(p: &ZPoly) -> APoly {
    let mut g = APoly::zero();
    for c in p.coeffs() {
        g = g.gcd(c);
        if g.deg() == 0 && !g.is_zero() {
            break;
        }
    }
    g.monic()
}

fn primitive_part(p: &ZPoly) -> ZPoly {
    let c = content(p);
    if c.deg() == 0 {
        return p.clone();
    }
    p.map(|x| x.exact_div_poly(&c))
}

/// Gcd in `K[y][z]` by the primitive remainder sequence.
fn gcd_in_z(f: &ZPoly, g: &ZPoly) -> ZPoly {
    let c = content(f).gcd(&content(g));
    let (mut a, mut b) = (primitive_part(f), primitive_part(g));
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return a.map(|x| x.mul(&c));
        }
        if b.deg() == 0 {
            return UniPoly::constant(c);
        }
        let r = a.pseudo_rem(&b);
        a = b;
        b = if r.is_zero() { r } else { primitive_part(&r) };
    }
}

/// Checks the standing assumptions on the input polynomial.
pub fn validate_input(f: &BiPoly) -> Result<()> {
    if f.deg_z() == 0 {
        return Err(AodeError::NoDerivative);
    }
    if !f.is_rational() {
        return Err(AodeError::InvalidRequest("the equation must have rational coefficients".into()));
    }
    if f.deg_y() == 0 {
        if f.deg_z() == 1 {
            let lambda = f.coeff(0, 0).neg().div(&f.coeff(0, 1));
            return Err(AodeError::TrivialLinear { equation: format!("y' = {}", lambda.render()) });
        }
        let slice = f.univariate_slice(Axis::FixY, &A::zero());
        let root = &all_roots(&slice)?[0].0;
        return Err(not_irreducible(&BiPoly::z().sub(&BiPoly::constant(root.clone()))));
    }
    let pz = f.as_poly_in_z();
    let cz = content(&pz);
    if cz.deg() > 0 {
        return Err(not_irreducible(&BiPoly::from_poly_in_z(&UniPoly::constant(cz))));
    }
    let cy = content(&f.as_poly_in_y());
    if cy.deg() > 0 {
        return Err(not_irreducible(&BiPoly::from_poly_in_y(&UniPoly::constant(cy))));
    }
    let g = gcd_in_z(&pz, &pz.derivative());
    if g.deg() > 0 {
        return Err(not_irreducible(&BiPoly::from_poly_in_z(&g)));
    }
    absolutely_irreducible(f)
}

/// Small rationals in the order 0, 1, -1, 2, -2, ...
fn small_integers() -> impl Iterator<Item = i64> {
    (0..).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
}

fn absolutely_irreducible(f: &BiPoly) -> Result<()> {
    let (n, m) = (f.deg_z(), f.deg_y());
    for p in primes_from(101).take(4) {
        if let Some(full) = full_rank_mod_p(f, p) {
            if full {
                return Ok(());
            }
        }
    }
    // rank deficient modulo several primes: almost surely reducible, so
    // find the factor exactly
    let a = small_integers()
        .map(A::from_i64)
        .find(|a| {
            let s = f.univariate_slice(Axis::FixY, a);
            s.deg() == n && s.is_squarefree()
        })
        .expect("a squarefree specialization exists for squarefree F");
    let slice = f.univariate_slice(Axis::FixY, &a);
    let qslice: QPoly = slice.map(|c| c.as_rational().expect("rational"));
    let factors = factor_q(&qslice);
    let low = factors.iter().map(|(g, _)| g.deg()).min().unwrap();
    let mut roots: Vec<A> = Vec::new();
    for (g, _) in factors.iter().filter(|(g, _)| g.deg() == low) {
        roots.extend(all_roots(&qpoly_to_apoly(g))?.into_iter().map(|r| r.0));
    }
    roots.sort_by(|x, y| x.numeric_cmp(y));
    let zeta = roots.pop().unwrap();
    let shifted = f.translate(&a, &A::zero());
    for d in 1..n {
        let prec = m * (n + d) + 1;
        let phi = series_root(&shifted, &zeta, prec);
        if let Some(h) = kernel_vector(&phi, d, m, prec) {
            let h = BiPoly::from_terms(h).translate(&a.neg(), &A::zero());
            let h = BiPoly::from_poly_in_z(&primitive_part(&h.as_poly_in_z()));
            return Err(not_irreducible(&h));
        }
    }
    unreachable!("rank deficient modulo every prime tried but no exact factor")
}

/// Coefficients of the series root `φ` of `g(x, z)` with `φ(0) = zeta`, a
/// simple root of `g(0, z)`, modulo `x^prec`.
fn series_root(g: &BiPoly, zeta: &A, prec: usize) -> Vec<A> {
    let gz = g.as_poly_in_z();
    let slope = g.separant().eval(&A::zero(), zeta).inv();
    let mut phi = vec![zeta.clone()];
    for k in 1..prec {
        phi.push(A::zero());
        let val = eval_series(&gz, &phi, k + 1)[k].clone();
        phi[k] = val.neg().mul(&slope);
    }
    phi
}

fn series_mul(a: &[A], b: &[A], prec: usize) -> Vec<A> {
    let mut out = vec![A::zero(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn eval_series(gz: &ZPoly, phi: &[A], prec: usize) -> Vec<A> {
    let mut acc = vec![A::zero(); prec];
    for c in gz.coeffs().iter().rev() {
        acc = series_mul(&acc, phi, prec);
        for (i, x) in c.coeffs().iter().enumerate().take(prec) {
            acc[i] = acc[i].add(x);
        }
    }
    acc
}

/// Nonzero `H = Σ h_jk x^k z^j`, `j ≤ d`, `k ≤ m`, with `H(x, φ) ≡ 0 mod x^prec`.
fn kernel_vector(phi: &[A], d: usize, m: usize, prec: usize) -> Option<Vec<((usize, usize), A)>> {
    let mut powers = vec![{
        let mut one = vec![A::zero(); prec];
        one[0] = A::one();
        one
    }];
    for j in 1..=d {
        let next = series_mul(&powers[j - 1], phi, prec);
        powers.push(next);
    }
    let cols: Vec<(usize, usize)> = (0..=d).flat_map(|j| (0..=m).map(move |k| (j, k))).collect();
    let mut rows: Vec<Vec<A>> = (0..prec)
        .map(|r| {
            cols.iter()
                .map(|&(j, k)| if r >= k { powers[j][r - k].clone() } else { A::zero() })
                .collect()
        })
        .collect();
    let pivots = row_reduce(&mut rows, cols.len());
    let free = (0..cols.len()).find(|c| !pivots.iter().any(|(_, pc)| pc == c))?;
    let mut h = vec![A::zero(); cols.len()];
    h[free] = A::one();
    for (r, pc) in &pivots {
        h[*pc] = rows[*r][free].neg();
    }
    Some(cols.into_iter().zip(h).map(|((j, k), c)| ((k, j), c)).collect())
}

/// Reduced row echelon form in place; returns `(row, column)` of each pivot.
fn row_reduce(rows: &mut [Vec<A>], ncols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row.iter()) {
                    *x = x.sub(&y.mul(&factor));
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&n| is_prime(n))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn rational_mod(r: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = r.denom().mod_floor(&pb).to_u64().unwrap();
    if den == 0 {
        return None;
    }
    let num = r.numer().mod_floor(&pb).to_u64().unwrap();
    Some(num * inv_mod(den, p) % p)
}

/// Full column rank of the series conditions modulo `p`, or `None` when the
/// prime is unusable.
fn full_rank_mod_p(f: &BiPoly, p: u64) -> Option<bool> {
    let (n, m) = (f.deg_z(), f.deg_y());
    // g[j][i]: coefficient of y^i z^j
    let mut g = vec![vec![0u64; m + 1]; n + 1];
    for ((i, j), c) in f.terms() {
        g[*j][*i] = rational_mod(&c.as_rational()?, p)?;
    }
    let eval_y = |j: usize, a: u64| g[j].iter().rev().fold(0, |acc, c| (acc * a + c) % p);
    let (a, zeta) = (0..p.min(64)).find_map(|a| {
        let col: Vec<u64> = (0..=n).map(|j| eval_y(j, a)).collect();
        (0..p).find_map(|z| {
            let v = col.iter().rev().fold(0, |acc, c| (acc * z + c) % p);
            let d = (1..=n).rev().fold(0, |acc, j| (acc * z + col[j] * j as u64) % p);
            (v == 0 && d != 0).then_some((a, z))
        })
    })?;
    // shifted coefficients of g(x + a, z)
    let mut binom = vec![vec![0u64; m + 1]; m + 1];
    for i in 0..=m {
        binom[i][0] = 1;
        for k in 1..=i {
            binom[i][k] = (binom[i - 1][k - 1] + if k < i { binom[i - 1][k] } else { 0 }) % p;
        }
    }
    let mut sh = vec![vec![0u64; m + 1]; n + 1];
    for j in 0..=n {
        for i in 0..=m {
            if g[j][i] == 0 {
                continue;
            }
            for k in 0..=i {
                let t = g[j][i] * binom[i][k] % p * pow_mod(a, (i - k) as u64, p) % p;
                sh[j][k] = (sh[j][k] + t) % p;
            }
        }
    }
    let prec = m * (2 * n - 1) + 1;
    let mul = |x: &[u64], y: &[u64], len: usize| {
        let mut out = vec![0u64; len];
        for (i, &u) in x.iter().enumerate().take(len) {
            if u == 0 {
                continue;
            }
            for (j, &v) in y.iter().enumerate().take(len - i) {
                out[i + j] = (out[i + j] + u * v) % p;
            }
        }
        out
    };
    let deriv0 = (1..=n).rev().fold(0, |acc, j| (acc * zeta + sh[j][0] * j as u64) % p);
    let slope = inv_mod(deriv0, p);
    let mut phi = vec![zeta];
    for k in 1..prec {
        phi.push(0);
        let mut acc = vec![0u64; k + 1];
        for j in (0..=n).rev() {
            acc = mul(&acc, &phi, k + 1);
            for (i, c) in sh[j].iter().enumerate().take(k + 1) {
                acc[i] = (acc[i] + c) % p;
            }
        }
        phi[k] = (p - acc[k]) % p * slope % p;
    }
    let mut powers = vec![{
        let mut one = vec![0u64; prec];
        one[0] = 1;
        one
    }];
    for j in 1..n {
        let next = mul(&powers[j - 1], &phi, prec);
        powers.push(next);
    }
    let cols: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..=m).map(move |k| (j, k))).collect();
    let mut rows: Vec<Vec<u64>> = (0..prec)
        .map(|r| cols.iter().map(|&(j, k)| if r >= k { powers[j][r - k] } else { 0 }).collect())
        .collect();
    for (rank, c) in (0..cols.len()).enumerate() {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            return Some(false);
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in rank + 1..rows.len() {
            let factor = rows[i][c];
            if factor != 0 {
                let (top, rest) = rows.split_at_mut(i);
                for (x, y) in rest[0][c..].iter_mut().zip(&top[rank][c..]) {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn check(src: &str) -> Result<()> {
        validate_input(&parse_polynomial(src).unwrap())
    }

    #[test]
    fn accepted() {
        check("y'^2 - y^3 - y^2").unwrap();
        check("((y'-1)^2 + y^2)^3 - 4*(y'-1)^2*y^2").unwrap();
        check("(y'-1)^2 - y^3").unwrap();
        check("y' - y").unwrap();
        check("y'^3 + y^3 + 1").unwrap();
    }

    #[test]
    fn rejected() {
        assert_eq!(check("y'^2 - y^2"), Err(AodeError::NotIrreducible { factor: "y' - y".into() }));
        assert_eq!(check("y' - 5"), Err(AodeError::TrivialLinear { equation: "y' = 5".into() }));
        assert_eq!(check("y^2 + 1"), Err(AodeError::NoDerivative));
        assert_eq!(check("y*y' - y^2"), Err(AodeError::NotIrreducible { factor: "y".into() }));
        assert_eq!(check("(y' - y)^2"), Err(AodeError::NotIrreducible { factor: "y' - y".into() }));
        assert!(matches!(check("y'^2 - 2"), Err(AodeError::NotIrreducible { .. })));
    }

    #[test]
    fn reducible_only_over_an_extension() {
        // (y' - sqrt(2) y)(y' + sqrt(2) y)
        let err = check("y'^2 - 2*y^2").unwrap_err();
        let AodeError::NotIrreducible { factor } = err else { panic!("{err:?}") };
        assert_eq!(factor, "y' - sqrt(2)*y");
        // x^2 + y^2 factors over Q(i)
        assert!(matches!(check("y'^2 + y^2 + 2*y'*y^2 + y^4"), Err(AodeError::NotIrreducible { .. })));
    }
}
