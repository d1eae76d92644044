//! Finite fields `F_{p^m} = F_p[y]/(f)` with `f` the least monic irreducible of
//! degree `m`, Frobenius, norm and trace, and the reciprocity map
//! `rec_q: Z → Gal(F_{q^n}/F_q)` at finite levels.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{factor, require_prime};
use crate::error::{Error, Result};

/// Default cap on the field size for exhaustive enumeration.
pub const ENUMERATION_BOUND: u64 = 10_000;

type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// `a mod f` for monic `f`.
fn poly_rem(mut a: Poly, f: &[u64], p: u64) -> Poly {
    let d = f.len() - 1;
    while a.len() > d {
        let lead = *a.last().expect("nonempty");
        let shift = a.len() - 1 - d;
        if lead != 0 {
            for (i, &c) in f.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - lead * c % p) % p;
            }
        }
        a.pop();
        a = trim(a);
    }
    a
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

fn poly_gcd(a: Poly, b: Poly, p: u64) -> Poly {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let inv = inv_mod_p(*b.last().expect("nonempty"), p);
        let monic: Poly = b.iter().map(|c| c * inv % p).collect();
        let r = poly_rem(a, &monic, p);
        a = monic;
        b = r;
    }
    a
}

/// `y^{p^k} mod f`.
fn frobenius_power_of_y(f: &[u64], p: u64, k: u32) -> Poly {
    let mut x = poly_rem(vec![0, 1], f, p);
    for _ in 0..k {
        x = poly_pow(&x, p as u128, f, p);
    }
    x
}

fn poly_pow(a: &[u64], mut e: u128, f: &[u64], p: u64) -> Poly {
    let mut base = poly_rem(a.to_vec(), f, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(poly_mul(&acc, &base, p), f, p);
        }
        base = poly_rem(poly_mul(&base, &base, p), f, p);
        e >>= 1;
    }
    acc
}

/// Rabin's test for a monic `f` of degree `m` over `F_p`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = (f.len() - 1) as u32;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let y = vec![0u64, 1];
    if poly_sub(&frobenius_power_of_y(f, p, m), &y, p).iter().any(|&c| c != 0) {
        return false;
    }
    for (r, _) in factor(m as u64) {
        let h = poly_sub(&frobenius_power_of_y(f, p, m / r as u32), &y, p);
        if poly_gcd(f.to_vec(), h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree `m` whose coefficient vector
/// `(c_{m−1}, …, c_0)` is lexicographically least.
pub fn least_irreducible(p: u64, m: u32) -> Result<Poly> {
    require_prime(p)?;
    if p >= 1 << 31 {
        return Err(Error::UnsupportedPrime { p, op: "finite fields" });
    }
    let total = (p as u128).pow(m);
    for code in 0..total {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut c = code;
        for _ in 0..m {
            f.push((c % p as u128) as u64);
            c /= p as u128;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[derive(Debug, PartialEq, Eq)]
struct FieldDesc {
    p: u64,
    m: u32,
    modulus: Poly,
}

/// `F_{p^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField(Arc<FieldDesc>);

/// An element of a [`FiniteField`], coefficients of `1, y, …, y^{m−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElement {
    coeffs: Poly,
}

impl FiniteField {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let modulus = least_irreducible(p, m)?;
        Ok(FiniteField(Arc::new(FieldDesc { p, m, modulus })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn size(&self) -> u64 {
        self.0.p.pow(self.0.m)
    }

    pub fn zero(&self) -> FqElement {
        FqElement { coeffs: Vec::new() }
    }

    pub fn one(&self) -> FqElement {
        FqElement { coeffs: vec![1] }
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Result<FqElement> {
        if c.len() > self.0.m as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::InvalidArgument("coefficients out of range".into()));
        }
        Ok(FqElement { coeffs: trim(c.to_vec()) })
    }

    /// The element with base-`p` digits of `k` as coefficients.
    pub fn element(&self, mut k: u64) -> FqElement {
        let mut c = Vec::new();
        for _ in 0..self.0.m {
            c.push(k % self.0.p);
            k /= self.0.p;
        }
        FqElement { coeffs: trim(c) }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        (0..self.size()).map(|k| self.element(k))
    }

    pub fn add(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let p = self.0.p;
        let n = a.coeffs.len().max(b.coeffs.len());
        let c = (0..n)
            .map(|i| (a.coeffs.get(i).copied().unwrap_or(0) + b.coeffs.get(i).copied().unwrap_or(0)) % p)
            .collect();
        FqElement { coeffs: trim(c) }
    }

    pub fn mul(&self, a: &FqElement, b: &FqElement) -> FqElement {
        FqElement { coeffs: poly_rem(poly_mul(&a.coeffs, &b.coeffs, self.0.p), &self.0.modulus, self.0.p) }
    }

    pub fn pow(&self, a: &FqElement, e: u128) -> FqElement {
        FqElement { coeffs: poly_pow(&a.coeffs, e, &self.0.modulus, self.0.p) }
    }

    pub fn inverse(&self, a: &FqElement) -> Result<FqElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size() as u128 - 2))
    }

    /// `q = p^f` for `f | m`.
    fn check_subfield(&self, f: u32) -> Result<u128> {
        if f == 0 || self.0.m % f != 0 {
            return Err(Error::InvalidArgument(format!(
                "F_{{{}^{}}} is not a subfield of F_{{{}^{}}}",
                self.0.p, f, self.0.p, self.0.m
            )));
        }
        Ok((self.0.p as u128).pow(f))
    }

    /// `σ_q(x) = x^q` with `q = p^f`.
    pub fn frobenius(&self, x: &FqElement, f: u32) -> Result<FqElement> {
        let q = self.check_subfield(f)?;
        Ok(self.pow(x, q))
    }

    /// `σ_q^k(x) = x^{q^k}`.
    pub fn frobenius_power(&self, x: &FqElement, f: u32, k: u32) -> Result<FqElement> {
        self.check_subfield(f)?;
        let mut y = x.clone();
        for _ in 0..k {
            y = self.frobenius(&y, f)?;
        }
        Ok(y)
    }

    /// The conjugates `x, x^q, …, x^{q^{n−1}}` over `F_q`, `q = p^f`.
    pub fn conjugates(&self, x: &FqElement, f: u32) -> Result<Vec<FqElement>> {
        let n = self.0.m / f;
        let mut out = vec![x.clone()];
        for _ in 1..n {
            let last = out.last().expect("nonempty");
            out.push(self.frobenius(last, f)?);
        }
        Ok(out)
    }

    /// `N(x) = x^{(q^n−1)/(q−1)}`.
    pub fn norm(&self, x: &FqElement, f: u32) -> Result<FqElement> {
        let q = self.check_subfield(f)?;
        let n = self.0.m / f;
        Ok(self.pow(x, (q.pow(n) - 1) / (q - 1)))
    }

    /// `N(x) = Π σ^i(x)`.
    pub fn norm_by_conjugates(&self, x: &FqElement, f: u32) -> Result<FqElement> {
        Ok(self.conjugates(x, f)?.iter().fold(self.one(), |acc, c| self.mul(&acc, c)))
    }

    /// `Tr(x) = Σ σ^i(x)`.
    pub fn trace(&self, x: &FqElement, f: u32) -> Result<FqElement> {
        Ok(self.conjugates(x, f)?.iter().fold(self.zero(), |acc, c| self.add(&acc, c)))
    }

    /// `Tr(x) = Σ x^{q^i}`, each power taken directly.
    pub fn trace_by_powers(&self, x: &FqElement, f: u32) -> Result<FqElement> {
        let q = self.check_subfield(f)?;
        let n = self.0.m / f;
        let mut acc = self.zero();
        for i in 0..n {
            acc = self.add(&acc, &self.pow(x, q.pow(i)));
        }
        Ok(acc)
    }

    /// Whether `x ∈ F_q`, `q = p^f`.
    pub fn in_subfield(&self, x: &FqElement, f: u32) -> Result<bool> {
        Ok(&self.frobenius(x, f)? == x)
    }

    /// A generator of `F_{p^m}^×`, the first in enumeration order.
    pub fn primitive_element(&self) -> FqElement {
        let order = self.size() - 1;
        let primes: Vec<u64> = factor(order).into_iter().map(|(r, _)| r).collect();
        self.elements()
            .skip(1)
            .find(|g| primes.iter().all(|r| self.pow(g, (order / r) as u128) != self.one()))
            .expect("the multiplicative group is cyclic")
    }

    /// Multiplicative order of `x ≠ 0`.
    pub fn order(&self, x: &FqElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroOperand { op: "order" });
        }
        let mut n = self.size() - 1;
        for (r, e) in factor(n) {
            for _ in 0..e {
                if self.pow(x, (n / r) as u128) == self.one() {
                    n /= r;
                }
            }
        }
        Ok(n)
    }

    /// The embedding `F_{p^d} → F_{p^m}` sending the generator `y` of the
    /// smaller field to the least root of its modulus.
    pub fn embedding_from(&self, small: &FiniteField) -> Result<Embedding> {
        if small.p() != self.p() || self.degree() % small.degree() != 0 {
            return Err(Error::InvalidArgument("no embedding between these fields".into()));
        }
        let g = small.modulus();
        let root = self
            .elements()
            .find(|z| {
                let mut acc = self.zero();
                for &c in g.iter().rev() {
                    acc = self.add(&self.mul(&acc, z), &self.element(c));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::InvalidArgument("modulus has no root".into()))?;
        Ok(Embedding { small: small.clone(), large: self.clone(), root })
    }

    pub fn describe(&self) -> FieldJson {
        FieldJson { p: self.0.p, degree: self.0.m, size: self.size(), modulus: self.0.modulus.clone() }
    }
}

impl FqElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldJson {
    pub p: u64,
    pub degree: u32,
    pub size: u64,
    /// Coefficients of the modulus from the constant term up.
    pub modulus: Vec<u64>,
}

/// `F_{p^d} → F_{p^m}`, `y ↦ root`.
#[derive(Clone, Debug)]
pub struct Embedding {
    small: FiniteField,
    large: FiniteField,
    pub root: FqElement,
}

impl Embedding {
    pub fn apply(&self, x: &FqElement) -> FqElement {
        let l = &self.large;
        let mut acc = l.zero();
        for &c in x.coeffs.iter().rev() {
            acc = l.add(&l.mul(&acc, &self.root), &l.element(c));
        }
        acc
    }

    pub fn source(&self) -> &FiniteField {
        &self.small
    }
}

/// `σ_{q,n}^k ∈ Gal(F_{q^n}/F_q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GaloisElement {
    pub n: u32,
    pub k: u32,
}

impl GaloisElement {
    pub fn compose(&self, o: &GaloisElement) -> Result<GaloisElement> {
        if self.n != o.n {
            return Err(Error::InvalidArgument("Galois elements at different levels".into()));
        }
        Ok(GaloisElement { n: self.n, k: (self.k + o.k) % self.n })
    }

    /// Image under `Gal(F_{q^n}/F_q) → Gal(F_{q^m}/F_q)`, `m | n`.
    pub fn restrict(&self, m: u32) -> Result<GaloisElement> {
        if m == 0 || self.n % m != 0 {
            return Err(Error::InvalidArgument(format!("{m} does not divide {}", self.n)));
        }
        Ok(GaloisElement { n: m, k: self.k % m })
    }

    /// Action on `F_{q^n}` given as a field of degree `f·n` over `F_p`.
    pub fn act(&self, field: &FiniteField, f: u32, x: &FqElement) -> Result<FqElement> {
        if field.degree() != f * self.n {
            return Err(Error::InvalidArgument("field does not match the level".into()));
        }
        field.frobenius_power(x, f, self.k)
    }
}

/// `rec_q(k) = σ_q^k` at level `n`.
pub fn rec_q(k: i64, n: u32) -> Result<GaloisElement> {
    if n == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    Ok(GaloisElement { n, k: k.rem_euclid(n as i64) as u32 })
}

fn check_bound(p: u64, e: u32, bound: u64) -> Result<()> {
    match p.checked_pow(e) {
        Some(size) if size <= bound => Ok(()),
        Some(size) => Err(Error::BoundExceeded { size, bound }),
        None => Err(Error::BoundExceeded { size: u64::MAX, bound }),
    }
}

/// Whether `N: F_{q^n}^× → F_q^×` is onto, `q = p^f`, by enumeration.
pub fn norm_surjectivity_check(p: u64, f: u32, n: u32, bound: u64) -> Result<bool> {
    require_prime(p)?;
    check_bound(p, f * n, bound)?;
    let field = FiniteField::new(p, f * n)?;
    let mut image = BTreeSet::new();
    for x in field.elements().skip(1) {
        let y = field.norm(&x, f)?;
        if !field.in_subfield(&y, f)? {
            return Ok(false);
        }
        image.insert(y);
    }
    Ok(image.len() as u64 == p.pow(f) - 1 && !image.contains(&field.zero()))
}

/// Smallest `k ≥ 1` with `x^{q^k} = x` for every `x ∈ F_{q^n}`, by enumeration.
pub fn frobenius_order(p: u64, f: u32, n: u32, bound: u64) -> Result<u32> {
    require_prime(p)?;
    check_bound(p, f * n, bound)?;
    let field = FiniteField::new(p, f * n)?;
    let elems: Vec<FqElement> = field.elements().collect();
    let mut current = elems.clone();
    for k in 1..=n {
        current = current.iter().map(|x| field.frobenius(x, f)).collect::<Result<_>>()?;
        if current == elems {
            return Ok(k);
        }
    }
    Err(Error::InvalidArgument("Frobenius order exceeds the degree".into()))
}

/// `#{x ∈ F_{q^n} : σ_q^d(x) = x}` by enumeration.
pub fn fixed_points(p: u64, f: u32, n: u32, d: u32, bound: u64) -> Result<u64> {
    require_prime(p)?;
    check_bound(p, f * n, bound)?;
    let field = FiniteField::new(p, f * n)?;
    let mut count = 0;
    for x in field.elements() {
        if field.frobenius_power(&x, f, d)? == x {
            count += 1;
        }
    }
    Ok(count)
}
