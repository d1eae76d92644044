//! Bruhat functions on `Q_p`: finite sums of twisted coset indicators
//! `t ↦ c·χ_p(t₀t)·1_{x₀+p^nZ_p}(t)`, with exact Haar integrals and the
//! closed-form Fourier transform `f̂(y) = ∫ f(x)χ_p(xy) dx`.
//!
//! Canonical form: the support is partitioned into the maximal cosets
//! `c + p^m Z_p` on which `f` equals a single `a·χ_p(tx)` with `a ≠ 0`. The
//! twist `t` is reduced modulo `p^{-m}` and the centre modulo `p^m` (both to
//! their digit truncations), which makes the block list unique.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::cell::OnceCell;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::angle::RationalAngle;
use crate::arith::{format_rational, frac_p, ord_p_rational, p_power, parse_rational, require_prime, trunc_p};
use crate::characters::MultCharacter;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

mod pnum;
use pnum::PNum;

/// Upper bound on the number of tree nodes visited while canonicalizing.
pub const TERM_LIMIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BruhatTerm {
    pub coeff: Cyclotomic,
    pub twist: BigRational,
    pub center: BigRational,
    pub level: i64,
}

impl BruhatTerm {
    pub fn indicator(center: BigRational, level: i64) -> Self {
        BruhatTerm { coeff: Cyclotomic::one(), twist: BigRational::zero(), center, level }
    }

    pub fn contains(&self, x: &BigRational, p: u64) -> bool {
        in_coset(x, &self.center, self.level, p)
    }

    pub fn eval(&self, x: &BigRational, p: u64) -> Cyclotomic {
        if !self.contains(x, p) {
            return Cyclotomic::zero();
        }
        self.coeff.rotate(&chi_p(&(&self.twist * x), p))
    }
}

/// `χ_p(x) = exp(2πi f(x))` as an angle.
pub fn chi_p(x: &BigRational, p: u64) -> RationalAngle {
    RationalAngle::from_rational(&frac_p(x, p)).expect("p-power denominator")
}

fn in_coset(x: &BigRational, c: &BigRational, level: i64, p: u64) -> bool {
    match ord_p_rational(&(x - c), p) {
        None => true,
        Some(v) => v >= level,
    }
}

/// A Bruhat function in canonical form.
#[derive(Clone, Debug)]
pub struct BruhatFunction {
    p: u64,
    raw: Vec<Raw>,
    blocks: OnceCell<Vec<BruhatTerm>>,
}

impl PartialEq for BruhatFunction {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.raw == o.raw
    }
}

impl Eq for BruhatFunction {}

impl std::hash::Hash for BruhatFunction {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.p.hash(h);
        self.raw.hash(h);
    }
}

/// A term with coordinates in `Z[1/p]`, centre and twist already reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Raw {
    coeff: Cyclotomic,
    twist: PNum,
    center: PNum,
    level: i64,
}

enum Node {
    Empty,
    Leaf(Raw),
    Split,
}

/// Characters present on a coset `c + p^m Z_p`: canonical twist mod `p^{-m}`
/// ↦ `(t, a)` standing for `a·χ_p(t x)`, where `t` is any representative of
/// the class. Representatives are only rewritten when two classes collide.
type Classes = BTreeMap<PNum, (PNum, Rc<Cyclotomic>)>;

struct Canon {
    p: u64,
    out: Vec<Raw>,
    visited: usize,
}

/// `(a, t)` on the coset `c + p^m Z_p` rewritten with `t` reduced mod `p^{-m}`.
fn normalize_block(p: u64, a: Cyclotomic, t: &BigRational, c: &BigRational, m: i64) -> BruhatTerm {
    let t2 = trunc_p(t, p, -m);
    let shift = t - &t2;
    let a = if shift.is_zero() { a } else { a.rotate(&chi_p(&(shift * c), p)) };
    BruhatTerm { coeff: a, twist: t2, center: trunc_p(c, p, m), level: m }
}

/// Same as [`normalize_block`] for a centre already reduced mod `p^m`.
fn reduce_twist(p: u64, a: &Cyclotomic, t: PNum, c: PNum, m: i64) -> Result<(PNum, Cyclotomic)> {
    let t2 = t.trunc(-m, p)?;
    let shift = t.sub(t2, p)?;
    if shift.is_zero() {
        return Ok((t2, a.clone()));
    }
    Ok((t2, a.rotate(&shift.mul(c)?.chi(p)?)))
}

/// Adds `a·χ_p(t x)` on the coset around `c` to the class `key`.
fn add_class(p: u64, classes: &mut Classes, key: PNum, t: PNum, a: Rc<Cyclotomic>, c: PNum) -> Result<()> {
    match classes.entry(key) {
        Entry::Vacant(e) => {
            e.insert((t, a));
        }
        Entry::Occupied(mut e) => {
            let (t1, a1) = e.get_mut();
            // χ_p(t x) = χ_p((t − t₁)c)·χ_p(t₁ x) on the coset
            let theta = t.sub(*t1, p)?.mul(c)?.chi(p)?;
            Rc::make_mut(a1).add_rotated(&a, &theta);
        }
    }
    Ok(())
}

impl Canon {
    fn descend(&mut self, c: PNum, m: i64, mut classes: Classes, inside: Vec<&Raw>) -> Result<Node> {
        self.visited += 1;
        if self.visited > TERM_LIMIT {
            return Err(Error::TooManyTerms { limit: TERM_LIMIT });
        }
        let p = self.p;
        classes.retain(|_, (_, a)| !a.is_zero());
        if inside.is_empty() {
            match classes.len() {
                0 => return Ok(Node::Empty),
                1 => {
                    let (_, (t, a)) = classes.into_iter().next().expect("one class");
                    let (t2, a2) = reduce_twist(p, &a, t, c, m)?;
                    return Ok(Node::Leaf(Raw { coeff: a2, twist: t2, center: c, level: m }));
                }
                _ => {}
            }
        }
        let mut buckets: Vec<Vec<&Raw>> = vec![Vec::new(); p as usize];
        for term in inside {
            buckets[term.center.digit(m, p)? as usize].push(term);
        }
        let mut children = Vec::with_capacity(p as usize);
        for (k, bucket) in buckets.into_iter().enumerate() {
            let ck = c.add(PNum::monomial(k as u64, m, p), p)?;
            let mut sub = Classes::new();
            for (t, a) in classes.values() {
                add_class(p, &mut sub, t.trunc(-(m + 1), p)?, *t, a.clone(), ck)?;
            }
            let mut ins = Vec::new();
            for term in bucket {
                if term.level == m + 1 {
                    add_class(p, &mut sub, term.twist, term.twist, Rc::new(term.coeff.clone()), ck)?;
                } else {
                    ins.push(term);
                }
            }
            let node = self.descend(ck, m + 1, sub, ins)?;
            children.push((ck, node));
        }
        if let Some(leaf) = try_merge(p, c, m, &children)? {
            return Ok(Node::Leaf(leaf));
        }
        for (_, node) in children {
            if let Node::Leaf(b) = node {
                self.out.push(b);
            }
        }
        Ok(Node::Split)
    }
}

/// Merges `p` sibling leaves into one block on their parent when possible.
fn try_merge(p: u64, c: PNum, m: i64, children: &[(PNum, Node)]) -> Result<Option<Raw>> {
    let Some(leaves) = children
        .iter()
        .map(|(_, n)| match n {
            Node::Leaf(b) => Some(b),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
    else {
        return Ok(None);
    };
    let t = leaves[0].twist;
    if leaves.iter().any(|b| b.twist != t) {
        return Ok(None);
    }
    // On the parent the candidate twist is t + j·p^{-(m+1)}; sibling k then
    // carries the extra factor χ_p(j·k/p).
    // a_1 = a_0·χ_p(j/p) pins down j; then a_k = a_0·χ_p(jk/p) for all k.
    let a0 = &leaves[0].coeff;
    let Some(j) = (0..p).find(|&j| leaves[1].coeff == a0.rotate(&RationalAngle::new(j as i128, p))) else {
        return Ok(None);
    };
    for (k, b) in leaves.iter().enumerate().skip(2) {
        if b.coeff != a0.rotate(&RationalAngle::new((j * k as u64) as i128, p)) {
            return Ok(None);
        }
    }
    let shift = PNum::monomial(j, -(m + 1), p);
    let a = a0.rotate(&shift.mul(children[0].0)?.chi(p)?.neg());
    let (t2, a2) = reduce_twist(p, &a, t.add(shift, p)?, c, m)?;
    Ok(Some(Raw { coeff: a2, twist: t2, center: c, level: m }))
}

/// Reduces the centre mod `p^m` and the twist mod `p^{-m}`.
fn normalize_raw(p: u64, coeff: &Cyclotomic, twist: PNum, center: PNum, level: i64) -> Result<Raw> {
    let c = center.trunc(level, p)?;
    let (t, a) = reduce_twist(p, coeff, twist, c, level)?;
    Ok(Raw { coeff: a, twist: t, center: c, level })
}

fn to_raw(p: u64, t: &BruhatTerm) -> Result<Raw> {
    match (PNum::from_rational(&t.twist, p), PNum::from_rational(&t.center, p)) {
        (Ok(tw), Ok(c)) => normalize_raw(p, &t.coeff, tw, c, t.level),
        _ => {
            let b = normalize_block(p, t.coeff.clone(), &t.twist, &t.center, t.level);
            Ok(Raw {
                coeff: b.coeff,
                twist: PNum::from_rational(&b.twist, p)?,
                center: PNum::from_rational(&b.center, p)?,
                level: b.level,
            })
        }
    }
}

/// Brings raw terms into canonical form.
pub fn canonicalize(p: u64, terms: &[BruhatTerm]) -> Result<BruhatFunction> {
    require_prime(p)?;
    let mut raws = Vec::with_capacity(terms.len());
    for t in terms.iter().filter(|t| !t.coeff.is_zero()) {
        raws.push(to_raw(p, t)?);
    }
    canonicalize_raw(p, raws)
}

/// Canonical form of normalized terms.
fn canonicalize_raw(p: u64, raws: Vec<Raw>) -> Result<BruhatFunction> {
    let raws: Vec<Raw> = raws.into_iter().filter(|t| !t.coeff.is_zero()).collect();
    if raws.is_empty() {
        return Ok(BruhatFunction::zero(p));
    }
    let c0 = raws[0].center;
    let mut root_level = i64::MAX;
    for t in &raws {
        root_level = root_level.min(t.level);
        if let Some(v) = t.center.sub(c0, p)?.valuation() {
            root_level = root_level.min(v);
        }
    }
    let root = c0.trunc(root_level, p)?;
    let mut classes = Classes::new();
    let mut inside = Vec::new();
    for t in &raws {
        if t.level == root_level {
            add_class(p, &mut classes, t.twist, t.twist, Rc::new(t.coeff.clone()), root)?;
        } else {
            inside.push(t);
        }
    }
    let mut canon = Canon { p, out: Vec::new(), visited: 0 };
    if let Node::Leaf(b) = canon.descend(root, root_level, classes, inside)? {
        canon.out.push(b);
    }
    let mut raw = canon.out;
    // centres are reduced into [0, p^m), so at a fixed level the digit
    // expansion order is the numeric order
    let mut err = None;
    raw.sort_by(|a, b| {
        a.level.cmp(&b.level).then_with(|| match a.center.sub(b.center, p) {
            Ok(d) => d.signum().cmp(&0),
            Err(e) => {
                err = Some(e);
                std::cmp::Ordering::Equal
            }
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(BruhatFunction { p, raw, blocks: OnceCell::new() })
}

impl BruhatFunction {
    pub fn new(p: u64, terms: Vec<BruhatTerm>) -> Result<Self> {
        canonicalize(p, &terms)
    }

    pub fn zero(p: u64) -> Self {
        BruhatFunction { p, raw: Vec::new(), blocks: OnceCell::new() }
    }

    /// `1_{c + p^n Z_p}`.
    pub fn indicator(p: u64, center: BigRational, level: i64) -> Result<Self> {
        BruhatFunction::new(p, vec![BruhatTerm::indicator(center, level)])
    }

    /// `1_{p^n Z_p}`.
    pub fn ball(p: u64, level: i64) -> Result<Self> {
        BruhatFunction::indicator(p, BigRational::zero(), level)
    }

    /// `1_{Z_p^×}`.
    pub fn units(p: u64) -> Result<Self> {
        BruhatFunction::ball(p, 0)?.sub(&BruhatFunction::ball(p, 1)?)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn blocks(&self) -> &[BruhatTerm] {
        self.blocks.get_or_init(|| {
            self.raw
                .iter()
                .map(|r| BruhatTerm {
                    coeff: r.coeff.clone(),
                    twist: r.twist.to_rational(self.p),
                    center: r.center.to_rational(self.p),
                    level: r.level,
                })
                .collect()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn eval(&self, x: &BigRational) -> Cyclotomic {
        self.blocks()
            .iter()
            .find(|b| b.contains(x, self.p))
            .map(|b| b.eval(x, self.p))
            .unwrap_or_default()
    }

    /// `f(0)`.
    pub fn value_at_zero(&self) -> Cyclotomic {
        self.eval(&BigRational::zero())
    }

    fn map_terms(&self, f: impl Fn(&BruhatTerm) -> BruhatTerm) -> Result<BruhatFunction> {
        BruhatFunction::new(self.p, self.blocks().iter().map(f).collect())
    }

    fn map_raw(&self, f: impl Fn(&Raw) -> Result<Raw>) -> Result<BruhatFunction> {
        let raws = self.raw.iter().map(f).collect::<Result<Vec<_>>>()?;
        canonicalize_raw(self.p, raws)
    }

    fn check_prime(&self, o: &BruhatFunction) -> Result<()> {
        if self.p != o.p {
            return Err(Error::PrimeMismatch { left: self.p, right: o.p });
        }
        Ok(())
    }

    pub fn add(&self, o: &BruhatFunction) -> Result<BruhatFunction> {
        self.check_prime(o)?;
        canonicalize_raw(self.p, self.raw.iter().chain(&o.raw).cloned().collect())
    }

    pub fn scale(&self, a: &Cyclotomic) -> Result<BruhatFunction> {
        if a.is_zero() {
            return Ok(BruhatFunction::zero(self.p));
        }
        Ok(BruhatFunction {
            p: self.p,
            raw: self.raw.iter().map(|b| Raw { coeff: b.coeff.mul(a), ..b.clone() }).collect(),
            blocks: OnceCell::new(),
        })
    }

    pub fn sub(&self, o: &BruhatFunction) -> Result<BruhatFunction> {
        self.add(&o.scale(&Cyclotomic::from_int(-1))?)
    }

    /// `x ↦ f(−x)`.
    pub fn reflect(&self) -> Result<BruhatFunction> {
        let p = self.p;
        self.map_raw(|b| normalize_raw(p, &b.coeff, b.twist.neg(), b.center.neg(), b.level))
    }

    /// `x ↦ conj(f(x))`.
    pub fn conj(&self) -> Result<BruhatFunction> {
        let p = self.p;
        self.map_raw(|b| normalize_raw(p, &b.coeff.conj(), b.twist.neg(), b.center, b.level))
    }

    /// `x ↦ f(x/a)`.
    pub fn dilate(&self, a: &BigRational) -> Result<BruhatFunction> {
        let v = ord_p_rational(a, self.p).ok_or(Error::DivisionByZero)?;
        self.map_terms(|b| BruhatTerm {
            coeff: b.coeff.clone(),
            twist: &b.twist / a,
            center: &b.center * a,
            level: b.level + v,
        })
    }

    /// `f̂(y) = ∫ f(x) χ_p(xy) dx`, term by term:
    /// `(c, t, x₀, n) ↦ (c·χ_p(t x₀)·p^{-n}, x₀, −t, −n)`.
    pub fn fourier(&self) -> Result<BruhatFunction> {
        let p = self.p;
        let scales: BTreeMap<i64, BigRational> = self.raw.iter().map(|b| (b.level, p_power(p, -b.level))).collect();
        self.map_raw(|b| {
            let coeff = b.coeff.rotate(&b.twist.mul(b.center)?.chi(p)?).scale(&scales[&b.level]);
            normalize_raw(p, &coeff, b.center, b.twist.neg(), -b.level)
        })
    }

    /// `∫ f dx` with `μ(Z_p) = 1`.
    pub fn integrate_additive(&self) -> Cyclotomic {
        self.blocks()
            .iter()
            .filter(|b| b.twist.is_zero())
            .fold(Cyclotomic::zero(), |acc, b| acc.add(&b.coeff.scale(&p_power(self.p, -b.level))))
    }

    /// `∫ |f|² dx`.
    pub fn l2_norm_sqr(&self) -> Cyclotomic {
        self.blocks()
            .iter()
            .fold(Cyclotomic::zero(), |acc, b| acc.add(&b.coeff.norm_sqr().scale(&p_power(self.p, -b.level))))
    }

    /// `∫ f(x)|x|_p^k d^×x` with `d^×x = (p/(p−1)) dx/|x|_p`.
    pub fn integrate_multiplicative(&self, k: i64) -> Result<Cyclotomic> {
        let p = self.p;
        let pr = BigRational::from_integer(BigInt::from(p));
        let norm = &pr / (&pr - BigRational::one());
        let mut total = Cyclotomic::zero();
        for b in self.blocks() {
            match ord_p_rational(&b.center, p) {
                Some(v) if v < b.level => {
                    // |x| = p^{-v} on the whole block
                    if b.twist.is_zero() {
                        let w = &norm * p_power(p, -v * (k - 1)) * p_power(p, -b.level);
                        total = total.add(&b.coeff.scale(&w));
                    }
                }
                _ => {
                    if k <= 0 {
                        return Err(Error::Divergent(format!(
                            "f(0) ≠ 0 and |x|^{k} d^×x is not integrable at 0"
                        )));
                    }
                    let geo = |j: i64| p_power(p, -j * k) / (BigRational::one() - p_power(p, -k));
                    let w = if b.twist.is_zero() {
                        geo(b.level)
                    } else {
                        let vt = ord_p_rational(&b.twist, p).expect("nonzero twist");
                        let shell = -vt - 1;
                        geo(-vt) - p_power(p, -shell * k) / (&pr - BigRational::one())
                    };
                    total = total.add(&b.coeff.scale(&w));
                }
            }
        }
        Ok(total)
    }
}

/// `∫_{Z_p} log|x|_p dx` truncated after the shells `n ≤ K`.
pub fn log_abs_integral(p: u64, k: u32) -> f64 {
    let pf = p as f64;
    let lp = pf.ln();
    let mut s = 0.0;
    for n in (1..=k).rev() {
        s += n as f64 * (pf.powi(-(n as i32)) - pf.powi(-(n as i32) - 1));
    }
    -lp * s
}

/// Additive volume of the shell `p^n Z_p^×`.
pub fn shell_volume(p: u64, n: i64) -> BigRational {
    p_power(p, -n) - p_power(p, -n - 1)
}

/// Mellin transform of `1_{Z_p^×}` against `χ`, by the explicit character sum
/// `(1/φ(p^n)) Σ_{u ∈ (Z/p^nZ)^×} χ̲(u)`.
pub fn mellin_indicator_unit(chi: &MultCharacter) -> Result<Cyclotomic> {
    let p = chi.p;
    let n = chi.degree().max(1);
    let m = p.pow(n);
    let mut sum = Cyclotomic::zero();
    let mut count = 0u64;
    for u in (1..m).filter(|u| u % p != 0) {
        sum = sum.add(&Cyclotomic::root(chi.unit_angle(u)?));
        count += 1;
    }
    Ok(sum.scale(&BigRational::new(BigInt::one(), BigInt::from(count))))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: Cyclotomic,
    #[serde(default = "zero_str")]
    twist: String,
    #[serde(default = "zero_str")]
    center: String,
    level: i64,
}

fn zero_str() -> String {
    "0".into()
}

#[derive(Serialize, Deserialize)]
pub struct BruhatJson {
    p: u64,
    terms: Vec<TermJson>,
}

impl BruhatFunction {
    pub fn to_json(&self) -> BruhatJson {
        BruhatJson {
            p: self.p,
            terms: self
                .blocks()
                .iter()
                .map(|b| TermJson {
                    coeff: b.coeff.clone(),
                    twist: format_rational(&b.twist),
                    center: format_rational(&b.center),
                    level: b.level,
                })
                .collect(),
        }
    }

    pub fn from_json(j: &BruhatJson) -> Result<BruhatFunction> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            terms.push(BruhatTerm {
                coeff: t.coeff.clone(),
                twist: parse_rational(&t.twist)?,
                center: parse_rational(&t.center)?,
                level: t.level,
            });
        }
        BruhatFunction::new(j.p, terms)
    }
}

impl Serialize for BruhatFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BruhatFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BruhatJson::deserialize(d)?;
        BruhatFunction::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// Random terms with small centre and twist denominators, for tests and
/// benchmarks.
pub mod random {
    use super::*;

    /// A deterministic pseudo-random generator of Bruhat terms.
    pub struct TermSampler {
        state: u64,
        twisted: bool,
    }

    impl TermSampler {
        pub fn new(seed: u64) -> Self {
            TermSampler { state: seed ^ 0x9e37_79b9_7f4a_7c15, twisted: false }
        }

        /// Also draw nonzero twists (half of the terms).
        pub fn twisted(mut self, on: bool) -> Self {
            self.twisted = on;
            self
        }

        fn next(&mut self) -> u64 {
            // splitmix64
            self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = self.state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^ (z >> 31)
        }

        fn below(&mut self, n: u64) -> u64 {
            self.next() % n
        }

        fn small_rational(&mut self, p: u64, max_den_exp: i64) -> BigRational {
            let e = self.below(max_den_exp as u64 + 1) as i64;
            let num = self.below(2 * p * p + 1) as i64 - (p * p) as i64;
            BigRational::from_integer(num.into()) * p_power(p, -e)
        }

        /// Up to `max_terms` terms with levels in `[lo, hi]`.
        pub fn terms(&mut self, p: u64, max_terms: usize, lo: i64, hi: i64) -> Vec<BruhatTerm> {
            let count = 1 + self.below(max_terms as u64) as usize;
            (0..count)
                .map(|_| {
                    let level = lo + self.below((hi - lo + 1) as u64) as i64;
                    let center = self.small_rational(p, 1);
                    let twist = if self.twisted && self.below(2) == 1 {
                        self.small_rational(p, 1)
                    } else {
                        BigRational::zero()
                    };
                    let coeff = {
                        let c = BigRational::from_integer((self.below(7) as i64 - 3).into());
                        let c = if c.is_zero() { BigRational::one() } else { c };
                        if self.below(3) == 0 {
                            Cyclotomic::term(c, RationalAngle::new(self.below(p) as i128, p))
                        } else {
                            Cyclotomic::from_rational(c)
                        }
                    };
                    BruhatTerm { coeff, twist, center, level }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::random::TermSampler;
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ind(p: u64, c: BigRational, n: i64) -> BruhatTerm {
        let _ = p;
        BruhatTerm::indicator(c, n)
    }

    #[test]
    fn coset_decompositions_merge() {
        for p in [2u64, 3, 5, 7] {
            let split: Vec<_> = (0..p as i64).map(|k| ind(p, q(k, 1), 1)).collect();
            let f = BruhatFunction::new(p, split).unwrap();
            assert_eq!(f, BruhatFunction::ball(p, 0).unwrap());
            assert_eq!(f.blocks().len(), 1);
            let u = BruhatFunction::units(p).unwrap();
            let expect = BruhatFunction::new(p, (1..p as i64).map(|k| ind(p, q(k, 1), 1)).collect()).unwrap();
            assert_eq!(u, expect);
            assert_eq!(BruhatFunction::new(p, u.blocks().to_vec()).unwrap(), u);
        }
        assert_eq!(BruhatFunction::units(2).unwrap().blocks().len(), 1);
    }

    #[test]
    fn characters_on_a_ball_are_single_blocks() {
        // Σ_j χ_p(j x/p) on Z_p = p·1_{pZ_p}
        let p = 5;
        let terms: Vec<_> = (0..p as i64)
            .map(|j| BruhatTerm { coeff: Cyclotomic::one(), twist: q(j, p as i64), center: q(0, 1), level: 0 })
            .collect();
        let f = BruhatFunction::new(p, terms).unwrap();
        let expect = BruhatFunction::ball(p, 1).unwrap().scale(&Cyclotomic::from_int(p as i64)).unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn haar_volumes() {
        for p in [2u64, 3, 5, 7] {
            assert_eq!(BruhatFunction::ball(p, 0).unwrap().integrate_additive(), Cyclotomic::one());
            let vol = BruhatFunction::units(p).unwrap().integrate_additive();
            assert_eq!(vol.as_rational().unwrap(), q(p as i64 - 1, p as i64));
            for n in -2..4 {
                let shell = BruhatFunction::ball(p, n).unwrap().sub(&BruhatFunction::ball(p, n + 1).unwrap()).unwrap();
                assert_eq!(shell.integrate_additive().as_rational().unwrap(), shell_volume(p, n));
                assert_eq!(shell.integrate_multiplicative(0).unwrap(), Cyclotomic::one());
            }
        }
    }

    #[test]
    fn twisted_ball_integral() {
        // ∫_{p^n Z_p} χ_p = p^{-n} for n ≥ 0, else 0
        for n in -3..4 {
            let f = BruhatFunction::new(
                5,
                vec![BruhatTerm { coeff: Cyclotomic::one(), twist: q(1, 1), center: q(0, 1), level: n }],
            )
            .unwrap();
            let expect = if n >= 0 { p_power(5, -n) } else { BigRational::zero() };
            assert_eq!(f.integrate_additive().as_rational().unwrap(), expect);
        }
    }

    #[test]
    fn multiplicative_integrals() {
        let zp = BruhatFunction::ball(5, 0).unwrap();
        assert_eq!(zp.integrate_multiplicative(2).unwrap().as_rational().unwrap(), q(25, 24));
        assert!(matches!(zp.integrate_multiplicative(0), Err(Error::Divergent(_))));
        let u = BruhatFunction::units(7).unwrap();
        assert_eq!(u.integrate_multiplicative(0).unwrap(), Cyclotomic::one());
        // φ₀ = χ_p·1_{p^{-1}Z_p} against |x|^k: shell oracle Σ_{j≥0} p^{-jk} − p^{k}/(p−1)
        let p = 3;
        let f = BruhatFunction::new(
            p,
            vec![BruhatTerm { coeff: Cyclotomic::one(), twist: q(1, 1), center: q(0, 1), level: -1 }],
        )
        .unwrap();
        let got = f.integrate_multiplicative(2).unwrap().as_rational().unwrap();
        let expect = q(1, 1) / (q(1, 1) - p_power(p, -2)) - p_power(p, 2) / q(p as i64 - 1, 1);
        assert_eq!(got, expect);
    }

    #[test]
    fn log_integral() {
        assert!((log_abs_integral(5, 40) + 5f64.ln() / 4.0).abs() < 1e-12);
        assert!((log_abs_integral(2, 60) + 2f64.ln()).abs() < 1e-12);
        assert_eq!(log_abs_integral(3, 0), 0.0);
    }

    #[test]
    fn fourier_closed_forms() {
        for p in [2u64, 3, 5] {
            for n in -2..3 {
                let f = BruhatFunction::ball(p, n).unwrap();
                let expect = BruhatFunction::ball(p, -n).unwrap().scale(&Cyclotomic::from_rational(p_power(p, -n))).unwrap();
                assert_eq!(f.fourier().unwrap(), expect);
            }
            let zp = BruhatFunction::ball(p, 0).unwrap();
            assert_eq!(zp.fourier().unwrap(), zp);
        }
        // 1_{x+p^nZ_p} ↦ χ_p(tx)p^{-n} on p^{-n}Z_p
        let p = 3;
        let x = q(2, 3);
        let f = BruhatFunction::indicator(p, x.clone(), 1).unwrap();
        let g = f.fourier().unwrap();
        for t in [q(0, 1), q(1, 1), q(7, 9), q(4, 27), q(1, 81)] {
            let expect = if in_coset(&t, &q(0, 1), -1, p) {
                Cyclotomic::term(p_power(p, -1), chi_p(&(&t * &x), p))
            } else {
                Cyclotomic::zero()
            };
            assert_eq!(g.eval(&t), expect, "t={t}");
        }
    }

    #[test]
    fn reflection_examples() {
        let p = 5;
        let f = BruhatFunction::indicator(p, q(1, 1), 1).unwrap();
        assert_eq!(f.reflect().unwrap(), BruhatFunction::indicator(p, q(-1, 1), 1).unwrap());
        let zp = BruhatFunction::ball(p, 0).unwrap();
        assert_eq!(zp.reflect().unwrap(), zp);
    }

    #[test]
    fn mellin_of_unit_indicator() {
        let z = Complex64::new(0.0, 0.0);
        let unr = MultCharacter::unramified(5, z).unwrap();
        assert_eq!(mellin_indicator_unit(&unr).unwrap(), Cyclotomic::one());
        let chi = MultCharacter::odd(5, z, RationalAngle::new(1, 4)).unwrap();
        assert!(mellin_indicator_unit(&chi).unwrap().is_zero());
        let chi = MultCharacter::odd(7, z, RationalAngle::new(1, 42)).unwrap();
        assert!(mellin_indicator_unit(&chi).unwrap().is_zero());
    }

    #[test]
    fn guard_trips() {
        // two overlapping characters far apart in twist force a deep split
        let p = 7;
        let terms = vec![
            BruhatTerm::indicator(q(0, 1), -3),
            BruhatTerm { coeff: Cyclotomic::one(), twist: q(1, 7i64.pow(4)), center: q(0, 1), level: -3 },
        ];
        assert!(matches!(BruhatFunction::new(p, terms), Err(Error::TooManyTerms { .. })));
    }

    #[test]
    fn json_round_trip() {
        let mut s = TermSampler::new(11).twisted(true);
        let f = BruhatFunction::new(3, s.terms(3, 5, -2, 2)).unwrap();
        let j = serde_json::to_string(&f).unwrap();
        let g: BruhatFunction = serde_json::from_str(&j).unwrap();
        assert_eq!(f, g);
    }

    fn sample_points(p: u64) -> Vec<BigRational> {
        let mut pts = Vec::new();
        for e in -3i64..4 {
            for k in [-7i64, -1, 0, 1, 2, 3, 11, 25] {
                pts.push(BigRational::from_integer(k.into()) * p_power(p, e));
                pts.push(BigRational::from_integer(k.into()) * p_power(p, e) + q(1, 3 * p as i64 + 1));
            }
        }
        pts
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn canonical_form_preserves_values(seed in any::<u64>(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let terms = TermSampler::new(seed).twisted(true).terms(p, 6, -2, 2);
            let f = BruhatFunction::new(p, terms.clone()).unwrap();
            for x in sample_points(p) {
                let raw = terms.iter().fold(Cyclotomic::zero(), |a, t| a.add(&t.eval(&x, p)));
                prop_assert_eq!(f.eval(&x), raw);
            }
            prop_assert_eq!(BruhatFunction::new(p, f.blocks().to_vec()).unwrap(), f.clone());
        }

        #[test]
        fn double_transform_is_reflection(seed in any::<u64>(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let f = BruhatFunction::new(p, TermSampler::new(seed).twisted(true).terms(p, 8, -3, 3)).unwrap();
            prop_assert_eq!(f.fourier().unwrap().fourier().unwrap(), f.reflect().unwrap());
            prop_assert_eq!(f.reflect().unwrap().reflect().unwrap(), f);
        }

        #[test]
        fn linearity_plancherel_conjugation(s1 in any::<u64>(), s2 in any::<u64>(), pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let f = BruhatFunction::new(p, TermSampler::new(s1).twisted(true).terms(p, 4, -2, 2)).unwrap();
            let g = BruhatFunction::new(p, TermSampler::new(s2).twisted(true).terms(p, 4, -2, 2)).unwrap();
            let a = Cyclotomic::term(q(2, 1), RationalAngle::new(1, 3));
            let b = Cyclotomic::from_int(-3);
            let lhs = f.scale(&a).unwrap().add(&g.scale(&b).unwrap()).unwrap().fourier().unwrap();
            let rhs = f.fourier().unwrap().scale(&a).unwrap().add(&g.fourier().unwrap().scale(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(f.l2_norm_sqr(), f.fourier().unwrap().l2_norm_sqr());
            // conj(f)^(t) = conj(f^(−t))
            let left = f.conj().unwrap().fourier().unwrap();
            let right = f.fourier().unwrap().reflect().unwrap().conj().unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn measure_scaling(seed in any::<u64>(), e in -3i64..4, k in 1i64..20, pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let f = BruhatFunction::new(p, TermSampler::new(seed).twisted(true).terms(p, 4, -2, 2)).unwrap();
            let a = BigRational::from_integer(k.into()) * p_power(p, e);
            let lhs = f.dilate(&a).unwrap().integrate_additive();
            let abs_a = p_power(p, -ord_p_rational(&a, p).unwrap());
            prop_assert_eq!(lhs, f.integrate_additive().scale(&abs_a));
        }
    }
}
