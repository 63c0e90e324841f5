//! Simple number fields `Q(eta)` pinned to one complex root of an
//! irreducible minimal polynomial, plus the global registry that interns
//! them and records known embeddings between them.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::complex::{root_disk, CBox, Disk};
use super::qpoly::{render_qpoly, QPoly};
use crate::upoly::UniPoly;

/// Arithmetic in `Q[x]/(m)` for a monic irreducible `m`. Elements are
/// coefficient vectors with no trailing zeros.
#[derive(Clone, Debug)]
pub struct ModArith {
    m: Vec<BigRational>,
}

impl ModArith {
    pub fn new(minpoly: &QPoly) -> Self {
        let monic = minpoly.monic();
        ModArith { m: monic.into_coeffs() }
    }

    pub fn degree(&self) -> usize {
        self.m.len() - 1
    }

    pub fn minpoly(&self) -> QPoly {
        UniPoly::new(self.m.clone())
    }

    pub fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        while v.len() > d {
            let top = v.pop().unwrap();
            if !top.is_zero() {
                let base = v.len() - d;
                for i in 0..d {
                    if !self.m[i].is_zero() {
                        v[base + i] -= &top * &self.m[i];
                    }
                }
            }
        }
        trim(v)
    }

    pub fn add(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let z = BigRational::zero();
        trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let z = BigRational::zero();
        trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self, a: &[BigRational]) -> Vec<BigRational> {
        a.iter().map(|c| -c).collect()
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce(out)
    }

    pub fn scale(&self, a: &[BigRational], k: &BigRational) -> Vec<BigRational> {
        if k.is_zero() {
            return Vec::new();
        }
        a.iter().map(|c| c * k).collect()
    }

    /// Inverse via the extended Euclidean algorithm modulo `m`.
    pub fn inv(&self, a: &[BigRational]) -> Vec<BigRational> {
        assert!(!a.is_empty(), "inverse of zero");
        let (g, s, _) = UniPoly::new(a.to_vec()).xgcd(&self.minpoly());
        debug_assert_eq!(g.deg(), 0);
        let s = s.scale(&g.coeff(0).recip());
        self.reduce(s.into_coeffs())
    }

    pub fn pow(&self, a: &[BigRational], mut e: u64) -> Vec<BigRational> {
        let mut base = a.to_vec();
        let mut acc = vec![BigRational::one()];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Evaluates a rational polynomial at the element `at`.
    pub fn eval_q(&self, p: &[BigRational], at: &[BigRational]) -> Vec<BigRational> {
        let mut acc: Vec<BigRational> = Vec::new();
        for c in p.iter().rev() {
            acc = self.mul(&acc, at);
            acc = self.add(&acc, std::slice::from_ref(c));
        }
        acc
    }

    /// Monic gcd of two polynomials with coefficients in this ring, which
    /// must be a field (true when `m` is irreducible).
    pub fn poly_gcd(
        &self,
        a: Vec<Vec<BigRational>>,
        b: Vec<Vec<BigRational>>,
    ) -> Vec<Vec<BigRational>> {
        let mut a = trim_poly(a);
        let mut b = trim_poly(b);
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            return a;
        }
        let inv = self.inv(a.last().unwrap());
        a.iter().map(|c| self.mul(c, &inv)).collect()
    }

    fn poly_rem(&self, a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = self.inv(&b[db]);
        while r.len() > db {
            let top = r.pop().unwrap();
            if top.is_empty() {
                continue;
            }
            let f = self.mul(&top, &inv);
            let base = r.len() - db;
            for i in 0..db {
                let t = self.mul(&f, &b[i]);
                r[base + i] = self.sub(&r[base + i], &t);
            }
            r = trim_poly(r);
        }
        trim_poly(r)
    }
}

pub(crate) fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn trim_poly(mut v: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    while v.last().is_some_and(|c| c.is_empty()) {
        v.pop();
    }
    v
}

/// `Q(eta)` where `eta` is the `root_index`-th root (canonical order) of
/// `minpoly`. Fields are interned, so pointer equality is field equality.
pub struct NumberField {
    id: usize,
    arith: ModArith,
    root_index: usize,
    parent: Option<Arc<NumberField>>,
}

impl NumberField {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn degree(&self) -> usize {
        self.arith.degree()
    }

    pub fn minpoly(&self) -> QPoly {
        self.arith.minpoly()
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    pub fn arith(&self) -> &ModArith {
        &self.arith
    }

    pub fn parent(&self) -> Option<&Arc<NumberField>> {
        self.parent.as_ref()
    }

    /// Fields from the bottom of the tower up to and including this one.
    pub fn tower(self: &Arc<Self>) -> Vec<Arc<NumberField>> {
        let mut chain = vec![self.clone()];
        while let Some(p) = chain.last().unwrap().parent.clone() {
            chain.push(p);
        }
        chain.reverse();
        chain
    }

    /// Isolating disk of the generator with radius at most `2^-bits`.
    pub fn disk(&self, bits: u32) -> Disk {
        root_disk(&self.minpoly(), self.root_index, bits)
    }

    /// Enclosure of the element with the given coefficients.
    pub fn eval_box(&self, coeffs: &[BigRational], bits: u32) -> CBox {
        let g = self.disk(bits).to_box();
        g.eval_poly(coeffs, bits + 8)
    }

    /// `sqrt(D)` when the field is `Q(sqrt(D))` pinned to the root with
    /// positive real or imaginary part.
    pub fn quadratic_radicand(&self) -> Option<BigRational> {
        let m = &self.arith.m;
        if m.len() == 3 && m[1].is_zero() && self.root_index == 1 {
            Some(-m[0].clone())
        } else {
            None
        }
    }

    /// Text form of the generator, parseable by the input grammar.
    pub fn symbol(&self) -> String {
        match self.quadratic_radicand() {
            Some(d) => format!("sqrt({})", crate::ring::fmt_rational(&d)),
            None => format!("root({}, {})", render_qpoly(&self.minpoly(), "x"), self.root_index + 1),
        }
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField#{}({})", self.id, self.symbol())
    }
}

/// Upper bound on the absolute degree of any field created by root
/// adjunction.
static DEGREE_CAP: AtomicUsize = AtomicUsize::new(64);

thread_local! {
    static LOCAL_CAP: std::cell::Cell<Option<usize>> = const { std::cell::Cell::new(None) };
}

pub fn degree_cap() -> usize {
    LOCAL_CAP.with(|c| c.get()).unwrap_or_else(|| DEGREE_CAP.load(Ordering::Relaxed))
}

/// Runs `f` with a degree cap that applies to the current thread only.
pub fn with_degree_cap<T>(cap: usize, f: impl FnOnce() -> T) -> T {
    let old = LOCAL_CAP.with(|c| c.replace(Some(cap.max(1))));
    let out = f();
    LOCAL_CAP.with(|c| c.set(old));
    out
}

pub fn set_degree_cap(cap: usize) {
    DEGREE_CAP.store(cap.max(1), Ordering::Relaxed);
}

type FieldKey = (Vec<BigRational>, usize);

#[derive(Default)]
struct Registry {
    by_key: HashMap<FieldKey, Arc<NumberField>>,
    by_id: Vec<Arc<NumberField>>,
    /// `edges[from]` lists `(to, image of from's generator in to)`.
    edges: HashMap<usize, Vec<(usize, Vec<BigRational>)>>,
    composita: HashMap<(usize, usize), usize>,
}

fn registry() -> &'static Mutex<Registry> {
    static REG: OnceLock<Mutex<Registry>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(Registry::default()))
}

/// Returns the interned field for `(minpoly, root_index)`, creating it with
/// the given parent and parent embedding if new. The embedding is recorded
/// either way.
pub fn intern_field(
    minpoly: &QPoly,
    root_index: usize,
    parent: Option<(&Arc<NumberField>, Vec<BigRational>)>,
) -> Arc<NumberField> {
    let arith = ModArith::new(minpoly);
    assert!(arith.degree() >= 2, "number fields need degree at least 2");
    let key = (arith.m.clone(), root_index);
    let mut reg = registry().lock().unwrap();
    let field = match reg.by_key.get(&key) {
        Some(f) => f.clone(),
        None => {
            let id = reg.by_id.len();
            let f = Arc::new(NumberField {
                id,
                arith,
                root_index,
                parent: parent.as_ref().map(|(p, _)| (*p).clone()),
            });
            reg.by_id.push(f.clone());
            reg.by_key.insert(key, f.clone());
            f
        }
    };
    if let Some((p, image)) = parent {
        add_edge(&mut reg, p.id, field.id, image);
    }
    field
}

fn add_edge(reg: &mut Registry, from: usize, to: usize, image: Vec<BigRational>) {
    let list = reg.edges.entry(from).or_default();
    if !list.iter().any(|(t, _)| *t == to) {
        list.push((to, image));
    }
}

/// Records that `from`'s generator maps to `image` in `to`.
pub fn register_embedding(from: &Arc<NumberField>, to: &Arc<NumberField>, image: Vec<BigRational>) {
    let mut reg = registry().lock().unwrap();
    add_edge(&mut reg, from.id, to.id, image);
}

/// Image of `from`'s generator in `to`, if an embedding is known (directly
/// or by composing recorded embeddings).
pub fn known_embedding(from: &Arc<NumberField>, to: &Arc<NumberField>) -> Option<Vec<BigRational>> {
    if Arc::ptr_eq(from, to) {
        return Some(vec![BigRational::zero(), BigRational::one()]);
    }
    let (edges, fields) = {
        let reg = registry().lock().unwrap();
        (reg.edges.clone(), reg.by_id.clone())
    };
    // breadth-first search for a path from -> ... -> to
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([from.id]);
    prev.insert(from.id, from.id);
    while let Some(u) = queue.pop_front() {
        if u == to.id {
            break;
        }
        for (v, _) in edges.get(&u).map(|l| l.as_slice()).unwrap_or(&[]) {
            if !prev.contains_key(v) {
                prev.insert(*v, u);
                queue.push_back(*v);
            }
        }
    }
    if !prev.contains_key(&to.id) {
        return None;
    }
    let mut path = vec![to.id];
    while *path.last().unwrap() != from.id {
        path.push(prev[path.last().unwrap()]);
    }
    path.reverse();
    // image of from's generator, expressed successively in each field on the path
    let mut image = vec![BigRational::zero(), BigRational::one()];
    for w in path.windows(2) {
        let e = &edges[&w[0]].iter().find(|(t, _)| *t == w[1]).unwrap().1;
        image = fields[w[1]].arith.eval_q(&image, e);
    }
    if path.len() > 2 {
        register_embedding(from, to, image.clone());
    }
    Some(image)
}

pub fn cached_compositum(a: &Arc<NumberField>, b: &Arc<NumberField>) -> Option<Arc<NumberField>> {
    let key = (a.id.min(b.id), a.id.max(b.id));
    let reg = registry().lock().unwrap();
    reg.composita.get(&key).map(|&id| reg.by_id[id].clone())
}

pub fn store_compositum(a: &Arc<NumberField>, b: &Arc<NumberField>, c: &Arc<NumberField>) {
    let key = (a.id.min(b.id), a.id.max(b.id));
    registry().lock().unwrap().composita.insert(key, c.id);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;

    fn p(v: &[i64]) -> QPoly {
        UniPoly::new(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn inverse_of_sqrt_two() {
        let k = ModArith::new(&p(&[-2, 0, 1]));
        let inv = k.inv(&[q(0), q(1)]);
        assert_eq!(inv, vec![q(0), crate::ring::qq(1, 2)]);
        assert_eq!(k.mul(&[q(0), q(1)], &[q(0), q(1)]), vec![q(2)]);
    }

    #[test]
    fn interning_is_by_key() {
        let a = intern_field(&p(&[-5, 0, 1]), 1, None);
        let b = intern_field(&p(&[-5, 0, 1]), 1, None);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.symbol(), "sqrt(5)");
    }

    #[test]
    fn gcd_over_field() {
        // over Q(sqrt 2): gcd(x^2 - 2, x - sqrt 2) = x - sqrt 2
        let k = ModArith::new(&p(&[-2, 0, 1]));
        let a = vec![vec![q(-2)], vec![], vec![q(1)]];
        let b = vec![vec![q(0), q(-1)], vec![q(1)]];
        assert_eq!(k.poly_gcd(a, b.clone()), b);
    }
}
