//! Exact elements of the cyclotomic closure of `Q`, as rational combinations
//! of roots of unity in a fixed basis.
//!
//! A root `exp(2πiθ)` is a basis element when, for every prime `q` dividing
//! the order of `θ`, the `q`-primary part `e/q^k` of `θ` has top base-`q`
//! digit of `e` different from `q - 1`. For each `n` these are exactly the
//! tensor products of the power bases of `Q(ζ_{q^k})`, so two combinations
//! are equal iff their reduced coefficient maps coincide.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::angle::RationalAngle;
use crate::arith::{factor, format_rational, inv_mod, parse_rational, rational_to_f64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Cyclotomic {
    terms: Terms,
}

/// Basis terms sorted by angle. Elements seen in practice have a handful of
/// terms, where a sorted vector beats a tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
struct Terms(Vec<(RationalAngle, Coef)>);

impl Terms {
    fn new() -> Self {
        Terms(Vec::new())
    }

    fn iter(&self) -> std::slice::Iter<'_, (RationalAngle, Coef)> {
        self.0.iter()
    }

    fn keys(&self) -> impl Iterator<Item = &RationalAngle> {
        self.0.iter().map(|(t, _)| t)
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn get(&self, th: &RationalAngle) -> Option<&Coef> {
        self.0.binary_search_by(|(t, _)| t.cmp(th)).ok().map(|i| &self.0[i].1)
    }
}

impl<'a> IntoIterator for &'a Terms {
    type Item = &'a (RationalAngle, Coef);
    type IntoIter = std::slice::Iter<'a, (RationalAngle, Coef)>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<(RationalAngle, Coef)> for Terms {
    /// The input must already be sorted by angle.
    fn from_iter<I: IntoIterator<Item = (RationalAngle, Coef)>>(it: I) -> Self {
        Terms(it.into_iter().collect())
    }
}

/// A rational coefficient, held in machine words whenever it fits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Coef {
    Small(Rational64),
    Big(Box<BigRational>),
}

impl Coef {
    fn from_big(r: BigRational) -> Coef {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Coef::Small(Rational64::new_raw(n, d)),
            _ => Coef::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Coef::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Coef::Big(r) => (**r).clone(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Coef::Small(r) => r.is_zero(),
            Coef::Big(r) => r.is_zero(),
        }
    }

    fn neg(&self) -> Coef {
        match self {
            Coef::Small(r) if *r.numer() != i64::MIN => Coef::Small(-r),
            _ => Coef::from_big(-self.to_big()),
        }
    }

    fn add(&self, o: &Coef) -> Coef {
        if let (Coef::Small(a), Coef::Small(b)) = (self, o) {
            if let Some(c) = a.checked_add(b) {
                return Coef::Small(c);
            }
        }
        Coef::from_big(self.to_big() + o.to_big())
    }

    fn mul(&self, o: &Coef) -> Coef {
        if let (Coef::Small(a), Coef::Small(b)) = (self, o) {
            if let Some(c) = a.checked_mul(b) {
                return Coef::Small(c);
            }
        }
        Coef::from_big(self.to_big() * o.to_big())
    }

    fn to_f64(&self) -> f64 {
        match self {
            Coef::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Coef::Big(r) => rational_to_f64(r),
        }
    }
}

fn factor_cached(n: u64) -> Rc<[(u64, u32)]> {
    thread_local! {
        static CACHE: RefCell<HashMap<u64, Rc<[(u64, u32)]>>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|c| c.borrow_mut().entry(n).or_insert_with(|| factor(n).into()).clone())
}

fn accumulate(out: &mut Terms, th: RationalAngle, c: Coef) {
    match out.0.binary_search_by(|(t, _)| t.cmp(&th)) {
        Err(i) => out.0.insert(i, (th, c)),
        Ok(i) => {
            let sum = out.0[i].1.add(&c);
            if sum.is_zero() {
                out.0.remove(i);
            } else {
                out.0[i].1 = sum;
            }
        }
    }
}

/// Whether the `q`-primary part of `θ` (with `q^k ‖ n`) has top digit `q - 1`.
fn digit_offends(theta: &RationalAngle, n: u64, q: u64, k: u32) -> bool {
    let qk = q.pow(k);
    let m = n / qk;
    // e ≡ a·m^{-1} (mod q^k)
    let e = if m == 1 {
        theta.numer() % qk
    } else {
        let inv = inv_mod(m % qk, qk).expect("coprime parts");
        ((theta.numer() % qk) as u128 * inv as u128 % qk as u128) as u64
    };
    e / q.pow(k - 1) == q - 1
}

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

/// The first prime `q` where `θ` fails the basis condition.
fn offending_prime(theta: &RationalAngle) -> Option<u64> {
    let n = theta.denom();
    let mut rest = n;
    for q in SMALL_PRIMES {
        if rest == 1 {
            return None;
        }
        if rest % q != 0 {
            continue;
        }
        let mut k = 0;
        while rest % q == 0 {
            rest /= q;
            k += 1;
        }
        if digit_offends(theta, n, q, k) {
            return Some(q);
        }
    }
    if rest == 1 {
        return None;
    }
    factor_cached(rest).iter().find(|&&(q, k)| digit_offends(theta, n, q, k)).map(|&(q, _)| q)
}

fn push_reduced(out: &mut Terms, theta: RationalAngle, c: Coef) {
    match offending_prime(&theta) {
        None => accumulate(out, theta, c),
        Some(q) => {
            // ζ^θ = -Σ_{d=1}^{q-1} ζ^{θ - d/q}
            let c = c.neg();
            for d in 1..q {
                push_reduced(out, theta.sub(&RationalAngle::new(d as i128, q)), c.clone());
            }
        }
    }
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic::default()
    }

    pub fn one() -> Self {
        Cyclotomic::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Cyclotomic::term(r, RationalAngle::ZERO)
    }

    pub fn from_int(n: i64) -> Self {
        Cyclotomic::from_rational(BigRational::from_integer(n.into()))
    }

    /// `exp(2πiθ)`.
    pub fn root(theta: RationalAngle) -> Self {
        Cyclotomic::term(BigRational::one(), theta)
    }

    /// `c·exp(2πiθ)`.
    pub fn term(c: BigRational, theta: RationalAngle) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            push_reduced(&mut terms, theta, Coef::from_big(c));
        }
        Cyclotomic { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (BigRational, RationalAngle)>>(it: I) -> Self {
        let mut terms = Terms::new();
        for (c, th) in it {
            if !c.is_zero() {
                push_reduced(&mut terms, th, Coef::from_big(c));
            }
        }
        Cyclotomic { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value, if this element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&RationalAngle::ZERO).map(Coef::to_big),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RationalAngle, BigRational)> + '_ {
        self.terms.iter().map(|(t, c)| (t, c.to_big()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Cyclotomic) -> Cyclotomic {
        let mut terms = self.terms.clone();
        for (th, c) in &o.terms {
            accumulate(&mut terms, *th, c.clone());
        }
        Cyclotomic { terms }
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic { terms: self.terms.iter().map(|(t, c)| (*t, c.neg())).collect() }
    }

    pub fn sub(&self, o: &Cyclotomic) -> Cyclotomic {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Cyclotomic {
        if r.is_zero() {
            return Cyclotomic::zero();
        }
        let r = Coef::from_big(r.clone());
        Cyclotomic { terms: self.terms.iter().map(|(t, c)| (*t, c.mul(&r))).collect() }
    }

    /// Multiplication by `exp(2πiθ)`.
    pub fn rotate(&self, theta: &RationalAngle) -> Cyclotomic {
        if theta.is_zero() {
            return self.clone();
        }
        let mut terms = Terms::new();
        for (t, c) in &self.terms {
            push_reduced(&mut terms, t.add(theta), c.clone());
        }
        Cyclotomic { terms }
    }

    /// `self += o·exp(2πiθ)`.
    pub fn add_rotated(&mut self, o: &Cyclotomic, theta: &RationalAngle) {
        for (t, c) in &o.terms {
            push_reduced(&mut self.terms, t.add(theta), c.clone());
        }
    }

    pub fn mul(&self, o: &Cyclotomic) -> Cyclotomic {
        let mut terms = Terms::new();
        for (t1, c1) in &self.terms {
            for (t2, c2) in &o.terms {
                push_reduced(&mut terms, t1.add(t2), c1.mul(c2));
            }
        }
        Cyclotomic { terms }
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Cyclotomic {
        let mut terms = Terms::new();
        for (t, c) in &self.terms {
            push_reduced(&mut terms, t.neg(), c.clone());
        }
        Cyclotomic { terms }
    }

    /// Squared modulus `z·conj(z)`, exact.
    pub fn norm_sqr(&self) -> Cyclotomic {
        self.mul(&self.conj())
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(t, c)| t.to_complex() * c.to_f64())
            .sum()
    }

    /// Common order of all roots present.
    pub fn conductor(&self) -> u64 {
        self.terms.keys().fold(1u64, |a, t| num_integer::lcm(a, t.denom()))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                if t.is_zero() {
                    format_rational(&c.to_big())
                } else {
                    format!("{}*e({})", format_rational(&c.to_big()), t)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON form: a rational string, or a list of `[coefficient, angle]` pairs.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CycJson {
    Rational(String),
    Int(i64),
    Terms(Vec<(String, String)>),
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_rational() {
            Some(r) => CycJson::Rational(format_rational(&r)).serialize(s),
            None => CycJson::Terms(
                self.terms.iter().map(|(t, c)| (format_rational(&c.to_big()), t.to_string())).collect(),
            )
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CycJson::deserialize(d)?;
        Cyclotomic::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<CycJson> for Cyclotomic {
    type Error = Error;
    fn try_from(j: CycJson) -> Result<Cyclotomic> {
        match j {
            CycJson::Rational(s) => Ok(Cyclotomic::from_rational(parse_rational(&s)?)),
            CycJson::Int(n) => Ok(Cyclotomic::from_rational(BigRational::from_integer(BigInt::from(n)))),
            CycJson::Terms(v) => {
                let mut out = Vec::with_capacity(v.len());
                for (c, t) in v {
                    out.push((parse_rational(&c)?, t.parse::<RationalAngle>()?));
                }
                Ok(Cyclotomic::from_terms(out))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ang(a: i128, b: u64) -> RationalAngle {
        RationalAngle::new(a, b)
    }

    #[test]
    fn sums_of_all_roots_vanish() {
        for n in [2u64, 3, 4, 5, 6, 8, 9, 12, 25, 30, 49] {
            let s = Cyclotomic::from_terms((0..n).map(|k| (BigRational::one(), ang(k as i128, n))));
            assert!(s.is_zero(), "n={n}");
        }
        // primitive 6th roots sum to the Möbius value μ(6) = 1
        let prim = Cyclotomic::root(ang(1, 6)).add(&Cyclotomic::root(ang(5, 6)));
        assert_eq!(prim, Cyclotomic::one());
    }

    #[test]
    fn quadratic_gauss_sum_squares_to_5() {
        // Σ (k|5) ζ_5^k squared is 5
        let leg = [0i64, 1, -1, -1, 1];
        let g = Cyclotomic::from_terms(
            (1..5).map(|k| (BigRational::from_integer(leg[k].into()), ang(k as i128, 5))),
        );
        assert_eq!(g.mul(&g), Cyclotomic::from_int(5));
        assert!((g.to_complex().re - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let z = Cyclotomic::root(ang(1, 3)).add(&Cyclotomic::from_int(2));
        let s = serde_json::to_string(&z).unwrap();
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        let r: Cyclotomic = serde_json::from_str("\"-3/4\"").unwrap();
        assert_eq!(r.as_rational().unwrap(), BigRational::new((-3).into(), 4.into()));
    }

    proptest! {
        #[test]
        fn exact_equality_matches_floats(
            xs in proptest::collection::vec((-5i64..5, 0i128..60, 1usize..6), 1..6),
            ys in proptest::collection::vec((-5i64..5, 0i128..60, 1usize..6), 1..6),
        ) {
            let dens = [1u64, 2, 3, 4, 5, 12];
            let mk = |v: &Vec<(i64, i128, usize)>| Cyclotomic::from_terms(
                v.iter().map(|&(c, a, d)| (BigRational::from_integer(c.into()), ang(a, dens[d])))
            );
            let x = mk(&xs);
            let y = mk(&ys);
            let prod = x.mul(&y);
            prop_assert!((prod.to_complex() - x.to_complex() * y.to_complex()).norm() < 1e-10);
            prop_assert_eq!(x.sub(&x), Cyclotomic::zero());
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            let zero_by_float = (x.to_complex() - y.to_complex()).norm() < 1e-9;
            prop_assert_eq!(x == y, zero_by_float);
        }
    }
}
