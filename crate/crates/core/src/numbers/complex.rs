//! Certified complex root isolation for squarefree rational polynomials, and
//! the rectangular interval arithmetic used to enclose algebraic numbers.
//!
//! Approximations come from the Aberth–Ehrlich iteration, first in `f64` and
//! then in big-integer fixed point. Every result is certified exactly: with
//! Weierstrass corrections `W_i = p(z_i) / (lc * prod_{j != i}(z_i - z_j))`,
//! the disks `|z - z_i| <= n |W_i|` contain all roots and each connected
//! component of `k` disks contains exactly `k` roots. Pairwise disjoint disks
//! therefore isolate the roots.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::qpoly::{primitive_integer_coeffs, QPoly};

/// Closed real interval with rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    fn scale(&self, k: &BigRational) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Outward rounding onto the grid `2^-bits` to stop denominators from
    /// growing without bound.
    fn round_out(&self, bits: u32) -> Interval {
        Interval { lo: round_down(&self.lo, bits), hi: round_up(&self.hi, bits) }
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn round_down(x: &BigRational, bits: u32) -> BigRational {
    if x.denom().bits() <= bits as u64 {
        return x.clone();
    }
    let scaled = (x.numer() << bits).div_floor(x.denom());
    BigRational::new(scaled, pow2(bits))
}

fn round_up(x: &BigRational, bits: u32) -> BigRational {
    if x.denom().bits() <= bits as u64 {
        return x.clone();
    }
    let scaled = (x.numer() << bits).div_ceil(x.denom());
    BigRational::new(scaled, pow2(bits))
}

/// Axis-parallel complex box.
#[derive(Clone, Debug, PartialEq)]
pub struct CBox {
    pub re: Interval,
    pub im: Interval,
}

impl CBox {
    pub fn point(re: BigRational, im: BigRational) -> Self {
        CBox { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn real(x: BigRational) -> Self {
        CBox::point(x, BigRational::zero())
    }

    /// The larger of the two side lengths.
    pub fn width(&self) -> BigRational {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn overlaps(&self, other: &CBox) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn add(&self, o: &CBox) -> CBox {
        CBox { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CBox) -> CBox {
        CBox { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &CBox) -> CBox {
        CBox {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, k: &BigRational) -> CBox {
        CBox { re: self.re.scale(k), im: self.im.scale(k) }
    }

    pub fn round_out(&self, bits: u32) -> CBox {
        CBox { re: self.re.round_out(bits), im: self.im.round_out(bits) }
    }

    pub fn mid(&self) -> (BigRational, BigRational) {
        (self.re.mid(), self.im.mid())
    }

    /// Evaluates `sum coeffs[k] * z^k` over this box.
    pub fn eval_poly(&self, coeffs: &[BigRational], bits: u32) -> CBox {
        let mut acc = CBox::real(BigRational::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&CBox::real(c.clone())).round_out(bits);
        }
        acc
    }
}

/// Disk `|z - center| <= radius` with rational data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Disk {
    pub re: BigRational,
    pub im: BigRational,
    pub radius: BigRational,
}

impl Disk {
    pub fn to_box(&self) -> CBox {
        CBox {
            re: Interval::new(&self.re - &self.radius, &self.re + &self.radius),
            im: Interval::new(&self.im - &self.radius, &self.im + &self.radius),
        }
    }

    fn center_dist2(&self, other: &Disk) -> BigRational {
        let dx = &self.re - &other.re;
        let dy = &self.im - &other.im;
        &dx * &dx + &dy * &dy
    }

    pub fn intersects(&self, other: &Disk) -> bool {
        let s = &self.radius + &other.radius;
        self.center_dist2(other) <= &s * &s
    }

    /// True if `other` lies entirely inside `self`.
    pub fn contains_disk(&self, other: &Disk) -> bool {
        if other.radius > self.radius {
            return false;
        }
        let s = &self.radius - &other.radius;
        self.center_dist2(other) <= &s * &s
    }

    pub fn conj(&self) -> Disk {
        Disk { re: self.re.clone(), im: -&self.im, radius: self.radius.clone() }
    }

    /// Whether the axis-aligned box of this disk meets `b`.
    pub fn meets_box(&self, b: &CBox) -> bool {
        self.to_box().overlaps(b)
    }
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64 { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
    fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Complex fixed-point number `(re + i*im) / 2^prec`.
#[derive(Clone, Debug)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Fx, prec: u32) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> prec,
            im: (&self.re * &o.im + &self.im * &o.re) >> prec,
        }
    }
    fn div(&self, o: &Fx, prec: u32) -> Option<Fx> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let nre = &self.re * &o.re + &self.im * &o.im;
        let nim = &self.im * &o.re - &self.re * &o.im;
        Some(Fx { re: (nre << prec) / &den, im: (nim << prec) / &den })
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn magnitude_bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }
}

fn f64_to_fx(z: C64, prec: u32) -> Fx {
    let conv = |x: f64| -> BigInt {
        let r = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        (r.numer() << prec) / r.denom()
    };
    Fx { re: conv(z.re), im: conv(z.im) }
}

fn rescale(z: &Fx, from: u32, to: u32) -> Fx {
    if to >= from {
        Fx { re: &z.re << (to - from), im: &z.im << (to - from) }
    } else {
        Fx { re: &z.re >> (from - to), im: &z.im >> (from - to) }
    }
}

/// Cauchy bound `1 + max |c_k / c_n|` as an `f64` (may be infinite).
fn cauchy_bound(c: &[BigInt]) -> f64 {
    let n = c.len() - 1;
    let lc = c[n].to_f64().unwrap_or(f64::INFINITY).abs();
    let mut m: f64 = 0.0;
    for ck in &c[..n] {
        let v = ck.to_f64().unwrap_or(f64::INFINITY).abs() / lc;
        m = m.max(v);
    }
    1.0 + m
}

fn initial_guesses(c: &[BigInt]) -> Vec<C64> {
    let n = c.len() - 1;
    let r = cauchy_bound(c).min(1e150);
    let r = if r.is_finite() { r } else { 1e150 };
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            C64 { re: 0.5 * r * theta.cos(), im: 0.5 * r * theta.sin() }
        })
        .collect()
}

fn aberth_f64(c: &[BigInt]) -> Vec<C64> {
    let n = c.len() - 1;
    let mut z = initial_guesses(c);
    let cf: Vec<C64> = c
        .iter()
        .map(|x| C64 { re: x.to_f64().unwrap_or(f64::NAN), im: 0.0 })
        .collect();
    if cf.iter().any(|x| !x.re.is_finite()) {
        return z;
    }
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner_f64(&cf, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = p.div(dp);
            let mut s = C64 { re: 0.0, im: 0.0 };
            for j in 0..n {
                if j != i {
                    s = s.add(C64 { re: 1.0, im: 0.0 }.div(z[i].sub(z[j])));
                }
            }
            let corr = w.div(C64 { re: 1.0, im: 0.0 }.sub(w.mul(s)));
            if corr.re.is_finite() && corr.im.is_finite() {
                z[i] = z[i].sub(corr);
                moved = moved.max(corr.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn horner_f64(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64 { re: 0.0, im: 0.0 };
    let mut dp = C64 { re: 0.0, im: 0.0 };
    for ck in c.iter().rev() {
        dp = dp.mul(z).add(p);
        p = p.mul(z).add(*ck);
    }
    (p, dp)
}

fn horner_fx(c: &[Fx], z: &Fx, prec: u32) -> (Fx, Fx) {
    let zero = Fx { re: BigInt::zero(), im: BigInt::zero() };
    let mut p = zero.clone();
    let mut dp = zero;
    for ck in c.iter().rev() {
        dp = dp.mul(z, prec).add(&p);
        p = p.mul(z, prec).add(ck);
    }
    (p, dp)
}

fn aberth_fixed(c: &[BigInt], z: &mut [Fx], prec: u32) {
    let n = z.len();
    let one = Fx { re: pow2(prec), im: BigInt::zero() };
    let cfx: Vec<Fx> = c.iter().map(|x| Fx { re: x << prec, im: BigInt::zero() }).collect();
    for iter in 0..200 {
        let mut worst = 0u64;
        for i in 0..n {
            let (p, dp) = horner_fx(&cfx, &z[i], prec);
            if p.is_zero() {
                continue;
            }
            let Some(w) = p.div(&dp, prec) else {
                z[i].re += BigInt::from(iter + 1);
                worst = u64::MAX;
                continue;
            };
            let mut s = Fx { re: BigInt::zero(), im: BigInt::zero() };
            let mut collided = false;
            for j in 0..n {
                if j != i {
                    match one.div(&z[i].sub(&z[j]), prec) {
                        Some(t) => s = s.add(&t),
                        None => collided = true,
                    }
                }
            }
            if collided {
                z[i].im += BigInt::from(iter + 7);
                worst = u64::MAX;
                continue;
            }
            let den = one.sub(&w.mul(&s, prec));
            let corr = w.div(&den, prec).unwrap_or(w);
            z[i] = z[i].sub(&corr);
            worst = worst.max(corr.magnitude_bits());
        }
        if worst <= 4 {
            break;
        }
    }
}

/// `ceil`-style dyadic upper bound of `sqrt(x)` on the grid `2^-bits`.
fn sqrt_upper(x: &BigRational, bits: u32) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let scaled = (x.numer() << (2 * bits)) / x.denom();
    let s = scaled.sqrt() + BigInt::one();
    BigRational::new(s, pow2(bits))
}

/// Certifies the approximations, returning isolating disks on success.
fn certify(c: &[BigInt], z: &[Fx], prec: u32) -> Option<Vec<Disk>> {
    let n = z.len();
    let lc = &c[n];
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        // V = 2^(prec*n) * p(z_i), evaluated exactly.
        let mut vre = lc.clone();
        let mut vim = BigInt::zero();
        for k in (0..n).rev() {
            let nre = &vre * &z[i].re - &vim * &z[i].im;
            let nim = &vre * &z[i].im + &vim * &z[i].re;
            vre = nre + (&c[k] << (prec as usize * (n - k)));
            vim = nim;
        }
        let mut dre = BigInt::one();
        let mut dim = BigInt::zero();
        for j in 0..n {
            if j == i {
                continue;
            }
            let ere = &z[i].re - &z[j].re;
            let eim = &z[i].im - &z[j].im;
            let nre = &dre * &ere - &dim * &eim;
            let nim = &dre * &eim + &dim * &ere;
            dre = nre;
            dim = nim;
        }
        let d2 = &dre * &dre + &dim * &dim;
        if d2.is_zero() {
            return None;
        }
        let v2 = &vre * &vre + &vim * &vim;
        let nn = BigInt::from(n * n);
        let rad2 = BigRational::new(nn * v2, lc * lc * d2 * pow2(2 * prec));
        radii.push(sqrt_upper(&rad2, prec + 16));
    }
    let scale = BigRational::from_integer(pow2(prec));
    let disks: Vec<Disk> = (0..n)
        .map(|i| Disk {
            re: BigRational::from_integer(z[i].re.clone()) / &scale,
            im: BigRational::from_integer(z[i].im.clone()) / &scale,
            radius: radii[i].clone(),
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if disks[i].intersects(&disks[j]) {
                return None;
            }
        }
    }
    Some(disks)
}

/// Isolates all complex roots of a squarefree polynomial so that every disk
/// has radius at most `2^-bits`. The order of the result is arbitrary.
pub fn isolate_roots(p: &QPoly, bits: u32) -> Vec<Disk> {
    let c = primitive_integer_coeffs(p);
    let n = c.len() - 1;
    assert!(n >= 1, "isolating roots of a constant");
    if n == 1 {
        let root = BigRational::new(-c[0].clone(), c[1].clone());
        return vec![Disk { re: root, im: BigRational::zero(), radius: BigRational::zero() }];
    }
    let approx = aberth_f64(&c);
    let mut prec: u32 = 64;
    let mut z: Vec<Fx> = approx.iter().map(|&a| f64_to_fx(a, prec)).collect();
    // Separate exact duplicates so the iteration can move them apart.
    for i in 0..n {
        for j in 0..i {
            if z[i].re == z[j].re && z[i].im == z[j].im {
                z[i].im += BigInt::from(i + 1);
            }
        }
    }
    let target = BigRational::new(BigInt::one(), pow2(bits));
    loop {
        aberth_fixed(&c, &mut z, prec);
        if let Some(disks) = certify(&c, &z, prec) {
            if disks.iter().all(|d| d.radius <= target) {
                return disks;
            }
        }
        let next = prec.saturating_mul(2);
        assert!(next <= 1 << 20, "root isolation did not converge");
        z = z.iter().map(|v| rescale(v, prec, next)).collect();
        // Symmetric configurations can trap the iteration (two starts on the
        // perpendicular bisector of a close real pair stay there), so nudge
        // each approximation in a different direction.
        let shift = next - prec / 2;
        for (i, v) in z.iter_mut().enumerate() {
            let th = 1.3 + 2.1 * i as f64;
            let nudge = f64_to_fx(C64 { re: th.cos(), im: th.sin() }, shift);
            v.re += nudge.re;
            v.im += nudge.im;
        }
        prec = next;
    }
}

/// Compares two isolated roots of the same real polynomial. `None` means the
/// disks are not yet small enough to decide.
fn compare_roots(disks: &[Disk], i: usize, j: usize, give_up: bool) -> Option<Ordering> {
    let (a, b) = (&disks[i], &disks[j]);
    let (ra, rb) = (a.to_box().re, b.to_box().re);
    if ra.hi < rb.lo {
        return Some(Ordering::Less);
    }
    if rb.hi < ra.lo {
        return Some(Ordering::Greater);
    }
    // Conjugate pair: equal real parts exactly.
    let conj = a.conj();
    let hits: Vec<usize> = (0..disks.len()).filter(|&k| disks[k].intersects(&conj)).collect();
    let equal_re = (hits.len() == 1 && hits[0] == j) || give_up;
    if equal_re {
        let (ia, ib) = (a.to_box().im, b.to_box().im);
        if ia.hi < ib.lo {
            return Some(Ordering::Less);
        }
        if ib.hi < ia.lo {
            return Some(Ordering::Greater);
        }
        if give_up {
            return Some((&a.re, &a.im).cmp(&(&b.re, &b.im)));
        }
    }
    None
}

/// Root disks of one polynomial kept in canonical order: lexicographic by
/// real part, then imaginary part.
#[derive(Debug)]
pub struct RootSet {
    poly: QPoly,
    disks: Vec<Disk>,
    bits: u32,
}

impl RootSet {
    fn build(poly: &QPoly) -> RootSet {
        let mut bits = 32;
        loop {
            let disks = isolate_roots(poly, bits);
            let n = disks.len();
            let give_up = bits >= 512;
            let mut idx: Vec<usize> = (0..n).collect();
            let mut undecided = false;
            // insertion sort with a partial comparator
            for k in 1..n {
                let mut m = k;
                while m > 0 {
                    match compare_roots(&disks, idx[m - 1], idx[m], give_up) {
                        Some(Ordering::Greater) => {
                            idx.swap(m - 1, m);
                            m -= 1;
                        }
                        Some(_) => break,
                        None => {
                            undecided = true;
                            break;
                        }
                    }
                }
                if undecided {
                    break;
                }
            }
            if !undecided {
                let disks = idx.into_iter().map(|i| disks[i].clone()).collect();
                return RootSet { poly: poly.clone(), disks, bits };
            }
            bits *= 2;
        }
    }

    fn refine(&mut self, bits: u32) {
        if bits <= self.bits {
            return;
        }
        let mut want = bits;
        loop {
            let fresh = isolate_roots(&self.poly, want);
            let mut mapped = Vec::with_capacity(self.disks.len());
            for old in &self.disks {
                let hits: Vec<&Disk> = fresh.iter().filter(|d| d.intersects(old)).collect();
                if hits.len() != 1 {
                    break;
                }
                mapped.push(hits[0].clone());
            }
            if mapped.len() == self.disks.len() {
                self.disks = mapped;
                self.bits = want;
                return;
            }
            want += 16;
        }
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }
}

type RootCache = Mutex<HashMap<Vec<BigRational>, Arc<Mutex<RootSet>>>>;

fn root_cache() -> &'static RootCache {
    static CACHE: OnceLock<RootCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn root_set(poly: &QPoly) -> Arc<Mutex<RootSet>> {
    let monic = poly.monic();
    let key = monic.coeffs().to_vec();
    if let Some(rs) = root_cache().lock().unwrap().get(&key) {
        return rs.clone();
    }
    let rs = Arc::new(Mutex::new(RootSet::build(&monic)));
    root_cache().lock().unwrap().entry(key).or_insert(rs).clone()
}

/// Number of complex roots of the squarefree polynomial `poly`.
pub fn root_count(poly: &QPoly) -> usize {
    root_set(poly).lock().unwrap().len()
}

/// Isolating disk for the `index`-th root (canonical order) of a squarefree
/// polynomial, with radius at most `2^-bits`.
pub fn root_disk(poly: &QPoly, index: usize, bits: u32) -> Disk {
    let rs = root_set(poly);
    let mut guard = rs.lock().unwrap();
    guard.refine(bits);
    guard.disks[index].clone()
}

/// All isolating disks in canonical order with radius at most `2^-bits`.
pub fn root_disks(poly: &QPoly, bits: u32) -> Vec<Disk> {
    let rs = root_set(poly);
    let mut guard = rs.lock().unwrap();
    guard.refine(bits);
    guard.disks.clone()
}

/// Index of the root of `poly` whose isolating disk meets `target`, refining
/// until exactly one does. `target` must enclose some root of `poly`.
pub fn locate_root(poly: &QPoly, mut target: impl FnMut(u32) -> CBox) -> usize {
    let mut bits = 32;
    loop {
        let disks = root_disks(poly, bits);
        let b = target(bits);
        let hits: Vec<usize> =
            disks.iter().enumerate().filter(|(_, d)| d.meets_box(&b)).map(|(i, _)| i).collect();
        if hits.len() == 1 {
            return hits[0];
        }
        assert!(bits < 1 << 16, "could not locate root: no isolating disk matches");
        bits *= 2;
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Sign-aware bit length used for quick magnitude estimates.
pub fn bit_size(x: &BigRational) -> i64 {
    if x.is_zero() {
        return i64::MIN;
    }
    let s = if x.numer().sign() == Sign::Minus { -1 } else { 1 };
    s * (x.numer().bits() as i64 - x.denom().bits() as i64)
}

pub fn abs_rational(x: &BigRational) -> BigRational {
    x.abs()
}
