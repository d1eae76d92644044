//! Additive characters `χ_{p,t}(x) = exp(2πi f(tx))` and multiplicative
//! characters `χ(x) = |x|_p^s χ̲(u(x))` of `Q_p^×`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::angle::RationalAngle;
use crate::arith::{
    factor, frac_p, inv_mod, mul_mod, ord_p_rational, pow_mod, primitive_root_p2, require_prime,
};
use crate::error::{Error, Result};
use crate::padic::PadicNumber;

/// `f(x)`: the digits of `x` strictly below position 0, as a rational in
/// `[0, 1) ∩ Z[1/p]`.
pub fn fractional_part(x: &PadicNumber) -> Result<BigRational> {
    if x.absolute_precision() < 0 && !x.is_zero() {
        return Err(Error::InsufficientPrecision {
            op: "fractional_part",
            needed: 0,
            have: x.absolute_precision(),
        });
    }
    if x.is_zero() {
        if x.absolute_precision() < 0 {
            return Err(Error::InsufficientPrecision {
                op: "fractional_part",
                needed: 0,
                have: x.absolute_precision(),
            });
        }
        return Ok(BigRational::zero());
    }
    Ok(frac_p(&x.to_rational(), x.prime()))
}

/// `[x] = x − f(x) ∈ Z_p`.
pub fn integral_part(x: &PadicNumber) -> Result<PadicNumber> {
    let f = fractional_part(x)?;
    if f.is_zero() {
        return Ok(x.clone());
    }
    let prec = (x.absolute_precision() - ord_p_rational(&f, x.prime()).unwrap_or(0)).max(1) as u32;
    x.sub(&PadicNumber::from_ratio(&f, x.prime(), prec)?)
}

/// `χ_{p,t}: x ↦ χ_p(tx)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveCharacter {
    pub p: u64,
    pub t: BigRational,
}

impl AdditiveCharacter {
    pub fn new(p: u64, t: BigRational) -> Result<Self> {
        require_prime(p)?;
        Ok(AdditiveCharacter { p, t })
    }

    pub fn standard(p: u64) -> Result<Self> {
        AdditiveCharacter::new(p, BigRational::from_integer(1.into()))
    }

    /// `Some(k)` when the conductor is `p^k Z_p`; `None` for the trivial character.
    pub fn conductor_level(&self) -> Option<i64> {
        ord_p_rational(&self.t, self.p).map(|v| -v)
    }

    pub fn eval_rational(&self, x: &BigRational) -> RationalAngle {
        RationalAngle::from_rational(&frac_p(&(&self.t * x), self.p)).expect("p-power denominator")
    }

    pub fn eval(&self, x: &PadicNumber) -> Result<RationalAngle> {
        if x.prime() != self.p {
            return Err(Error::PrimeMismatch { left: self.p, right: x.prime() });
        }
        if self.t.is_zero() {
            return Ok(RationalAngle::ZERO);
        }
        let vt = ord_p_rational(&self.t, self.p).expect("nonzero");
        let known = x.absolute_precision() + vt;
        if known < 0 {
            return Err(Error::InsufficientPrecision { op: "additive_eval", needed: -vt, have: x.absolute_precision() });
        }
        Ok(self.eval_rational(&x.to_rational()))
    }
}

/// `f_p(x)` for every prime in the denominator of `x`, with the integer
/// `Σ f_p(x) − x` witnessing `Π_{p≤∞} χ_p(x) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPrinciple {
    pub local: Vec<(u64, BigRational)>,
    pub witness: BigInt,
}

pub fn product_principle_check(x: &BigRational) -> Result<ProductPrinciple> {
    let d = x
        .denom()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("denominator too large to factor".into()))?;
    let mut sum = BigRational::zero();
    let mut local = Vec::new();
    for (p, _) in factor(d) {
        let f = frac_p(x, p);
        sum += &f;
        local.push((p, f));
    }
    let diff = sum - x;
    if !diff.is_integer() {
        return Err(Error::InvalidArgument("fractional parts failed to cancel".into()));
    }
    Ok(ProductPrinciple { local, witness: diff.to_integer() })
}

/// Values of `χ̲` on the generators of `Z_p^×`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitData {
    /// `χ̲(g) = exp(2πiα)` with `g` the fixed generator for odd `p`.
    Odd { alpha: RationalAngle },
    /// `χ̲(−1)` and `χ̲(5)` for `p = 2`.
    Dyadic { beta: RationalAngle, gamma: RationalAngle },
}

/// `χ(x) = |x|_p^s χ̲(u(x))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultCharacter {
    pub p: u64,
    pub s: Complex64,
    unit: UnitData,
    degree: u32,
}

/// `p^{−v s}·exp(2πiθ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharValue {
    pub p: u64,
    pub valuation: i64,
    pub s: Complex64,
    pub angle: RationalAngle,
}

impl CharValue {
    pub fn to_complex(&self) -> Complex64 {
        let m = (-(self.valuation as f64) * self.s * (self.p as f64).ln()).exp();
        m * self.angle.to_complex()
    }
}

/// The generator used for `(Z/p^nZ)^×`, `p` odd.
pub fn unit_generator(p: u64) -> u64 {
    primitive_root_p2(p)
}

struct DlogTable {
    modulus: u64,
    generator: u64,
    order: u64,
    step: u64,
    baby: HashMap<u64, u64>,
    giant: u64,
}

const DLOG_TABLE_CAP: u64 = 1_000_000;

impl DlogTable {
    fn build(modulus: u64, generator: u64, order: u64) -> DlogTable {
        let step = ((order as f64).sqrt().ceil() as u64).clamp(1, DLOG_TABLE_CAP);
        let mut baby = HashMap::with_capacity(step as usize);
        let mut y = 1u64 % modulus;
        for j in 0..step {
            baby.entry(y).or_insert(j);
            y = mul_mod(y, generator, modulus);
        }
        let ginv = inv_mod(generator, modulus).expect("unit");
        let giant = pow_mod(ginv, step, modulus);
        DlogTable { modulus, generator, order, step, baby, giant }
    }

    fn log(&self, u: u64) -> Option<u64> {
        let mut y = u % self.modulus;
        let rounds = self.order.div_ceil(self.step);
        for i in 0..=rounds {
            if let Some(j) = self.baby.get(&y) {
                return Some((i * self.step + j) % self.order);
            }
            y = mul_mod(y, self.giant, self.modulus);
        }
        debug_assert!(self.generator > 0);
        None
    }
}

fn dlog_table(modulus: u64, generator: u64, order: u64) -> Arc<DlogTable> {
    static TABLES: OnceLock<Mutex<HashMap<(u64, u64), Arc<DlogTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().expect("dlog lock").get(&(modulus, generator)) {
        return t.clone();
    }
    let t = Arc::new(DlogTable::build(modulus, generator, order));
    tables.lock().expect("dlog lock").insert((modulus, generator), t.clone());
    t
}

/// `k` with `g^k ≡ u (mod p^n)` for odd `p`.
pub fn discrete_log(p: u64, n: u32, u: u64) -> Result<u64> {
    let m = p.checked_pow(n).ok_or_else(|| Error::InvalidArgument("modulus overflow".into()))?;
    if u % p == 0 {
        return Err(Error::InvalidArgument(format!("{u} is not a unit mod {p}")));
    }
    let order = (p - 1) * (m / p);
    let t = dlog_table(m, unit_generator(p), order);
    t.log(u).ok_or_else(|| Error::InvalidArgument("discrete log failed".into()))
}

/// `(b, c)` with `u ≡ (−1)^b 5^c (mod 2^n)`.
pub fn dyadic_log(n: u32, u: u64) -> Result<(u64, u64)> {
    if u % 2 == 0 {
        return Err(Error::InvalidArgument(format!("{u} is not a unit mod 2")));
    }
    let m = 1u64 << n;
    let u = u % m;
    let b = u64::from(u % 4 == 3);
    if n <= 2 {
        return Ok((b, 0));
    }
    let v = if b == 1 { m - u } else { u };
    let t = dlog_table(m, 5, m / 4);
    let c = t.log(v).ok_or_else(|| Error::InvalidArgument("discrete log failed".into()))?;
    Ok((b, c))
}

fn p_adic_part(d: u64, p: u64) -> (u32, u64) {
    let mut a = 0;
    let mut r = d;
    while r % p == 0 {
        r /= p;
        a += 1;
    }
    (a, r)
}

impl MultCharacter {
    pub fn unramified(p: u64, s: Complex64) -> Result<Self> {
        require_prime(p)?;
        let unit = if p == 2 {
            UnitData::Dyadic { beta: RationalAngle::ZERO, gamma: RationalAngle::ZERO }
        } else {
            UnitData::Odd { alpha: RationalAngle::ZERO }
        };
        Ok(MultCharacter { p, s, unit, degree: 0 })
    }

    /// Odd `p`: `χ̲(g) = exp(2πiα)`; `α` must have order dividing `(p−1)p^k`.
    pub fn odd(p: u64, s: Complex64, alpha: RationalAngle) -> Result<Self> {
        require_prime(p)?;
        if p == 2 {
            return Err(Error::UnsupportedPrime { p, op: "MultCharacter::odd" });
        }
        let degree = if alpha.is_zero() {
            0
        } else {
            let (a, rest) = p_adic_part(alpha.denom(), p);
            if (p - 1) % rest != 0 {
                return Err(Error::InvalidArgument(format!(
                    "angle {alpha} is not a character value on the generator mod {p}^k"
                )));
            }
            a + 1
        };
        Ok(MultCharacter { p, s, unit: UnitData::Odd { alpha }, degree })
    }

    /// `p = 2`: `χ̲(−1) = exp(2πiβ)` with `β ∈ {0, 1/2}` and `χ̲(5) = exp(2πiγ)`
    /// with `γ` of 2-power order.
    pub fn dyadic(s: Complex64, beta: RationalAngle, gamma: RationalAngle) -> Result<Self> {
        if beta.denom() > 2 {
            return Err(Error::InvalidArgument("χ̲(−1) must be ±1".into()));
        }
        let (a, rest) = p_adic_part(gamma.denom(), 2);
        if rest != 1 {
            return Err(Error::InvalidArgument("χ̲(5) must have 2-power order".into()));
        }
        let degree = if !gamma.is_zero() {
            a + 2
        } else if !beta.is_zero() {
            2
        } else {
            0
        };
        Ok(MultCharacter { p: 2, s, unit: UnitData::Dyadic { beta, gamma }, degree })
    }

    /// The quadratic character `(·|p)` times `|·|^s`, `p` odd.
    pub fn legendre(p: u64, s: Complex64) -> Result<Self> {
        MultCharacter::odd(p, s, RationalAngle::HALF)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_ramified(&self) -> bool {
        self.degree > 0
    }

    pub fn unit_data(&self) -> UnitData {
        self.unit
    }

    /// The angle `χ̲(g)`; for `p = 2`, `χ̲(5)`.
    pub fn generator_angle(&self) -> RationalAngle {
        match self.unit {
            UnitData::Odd { alpha } => alpha,
            UnitData::Dyadic { gamma, .. } => gamma,
        }
    }

    pub fn with_s(&self, s: Complex64) -> MultCharacter {
        MultCharacter { s, ..*self }
    }

    fn map_unit(&self, f: impl Fn(RationalAngle) -> RationalAngle) -> UnitData {
        match self.unit {
            UnitData::Odd { alpha } => UnitData::Odd { alpha: f(alpha) },
            UnitData::Dyadic { beta, gamma } => UnitData::Dyadic { beta: f(beta), gamma: f(gamma) },
        }
    }

    /// `χ̄`.
    pub fn conj(&self) -> MultCharacter {
        MultCharacter { s: self.s.conj(), unit: self.map_unit(|a| a.neg()), ..*self }
    }

    /// `χ̌ = χ^{−1}|·|`.
    pub fn dual(&self) -> MultCharacter {
        MultCharacter { s: 1.0 - self.s, unit: self.map_unit(|a| a.neg()), ..*self }
    }

    /// `χ̲` applied to a unit residue `u mod p^n`, `n` the degree.
    pub fn unit_angle(&self, u: u64) -> Result<RationalAngle> {
        if self.degree == 0 {
            return Ok(RationalAngle::ZERO);
        }
        match self.unit {
            UnitData::Odd { alpha } => {
                let k = discrete_log(self.p, self.degree, u)?;
                Ok(alpha.scale(k as i64))
            }
            UnitData::Dyadic { beta, gamma } => {
                let (b, c) = dyadic_log(self.degree.max(2), u)?;
                Ok(beta.scale(b as i64).add(&gamma.scale(c as i64)))
            }
        }
    }

    /// `χ̲(−1)` as an angle in `{0, 1/2}`.
    pub fn chi_minus_one(&self) -> RationalAngle {
        if self.degree == 0 {
            return RationalAngle::ZERO;
        }
        let m = self.p.pow(self.degree);
        self.unit_angle(m - 1).expect("−1 is a unit")
    }

    pub fn eval(&self, x: &PadicNumber) -> Result<CharValue> {
        if x.prime() != self.p {
            return Err(Error::PrimeMismatch { left: self.p, right: x.prime() });
        }
        let v = x.valuation()?;
        let angle = if self.degree == 0 {
            RationalAngle::ZERO
        } else {
            if x.precision() < self.degree {
                return Err(Error::InsufficientPrecision {
                    op: "mult_eval",
                    needed: self.degree as i64,
                    have: x.precision() as i64,
                });
            }
            let u = x.unit_part()?.residue_mod(self.degree)?;
            self.unit_angle(u.to_u64().expect("fits"))?
        };
        Ok(CharValue { p: self.p, valuation: v, s: self.s, angle })
    }

    pub fn eval_rational(&self, x: &BigRational) -> Result<CharValue> {
        if x.is_zero() {
            return Err(Error::ZeroOperand { op: "mult_eval" });
        }
        let x = PadicNumber::from_ratio(x, self.p, self.degree.max(1))?;
        self.eval(&x)
    }

    /// `χ(p) = p^{−s}` (the value on the uniformizer, `χ̲(1)` being 1).
    pub fn at_uniformizer(&self) -> Complex64 {
        (-self.s * (self.p as f64).ln()).exp()
    }

    pub fn descriptor(&self) -> CharacterDescriptor {
        let (beta, gamma) = match self.unit {
            UnitData::Odd { .. } => (None, None),
            UnitData::Dyadic { beta, gamma } => (Some(beta), Some(gamma)),
        };
        CharacterDescriptor {
            p: self.p,
            s: [self.s.re, self.s.im],
            n: self.degree,
            generator_angle: self.generator_angle(),
            minus_one_angle: beta,
            five_angle: gamma,
        }
    }

    pub fn from_descriptor(d: &CharacterDescriptor) -> Result<MultCharacter> {
        let s = Complex64::new(d.s[0], d.s[1]);
        let chi = if d.p == 2 {
            MultCharacter::dyadic(s, d.minus_one_angle.unwrap_or_default(), d.five_angle.unwrap_or(d.generator_angle))?
        } else {
            MultCharacter::odd(d.p, s, d.generator_angle)?
        };
        if chi.degree != d.n {
            return Err(Error::InvalidArgument(format!(
                "declared degree {} but the angles give degree {}",
                d.n, chi.degree
            )));
        }
        Ok(chi)
    }

    /// Every `χ̲` of degree at most `n`, with exponent `s`. Odd `p` only.
    pub fn all_of_degree_at_most(p: u64, n: u32, s: Complex64) -> Result<Vec<MultCharacter>> {
        require_prime(p)?;
        if p == 2 {
            return Err(Error::UnsupportedPrime { p, op: "all_of_degree_at_most" });
        }
        if n == 0 {
            return Ok(vec![MultCharacter::unramified(p, s)?]);
        }
        let order = (p - 1) * p.pow(n - 1);
        (0..order)
            .map(|k| MultCharacter::odd(p, s, RationalAngle::new(k as i128, order)))
            .collect()
    }
}

/// JSON descriptor of a multiplicative character.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterDescriptor {
    pub p: u64,
    pub s: [f64; 2],
    pub n: u32,
    pub generator_angle: RationalAngle,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus_one_angle: Option<RationalAngle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub five_angle: Option<RationalAngle>,
}

/// Number of characters of `(Z/p^nZ)^×` of exact degree `n`, `p` odd.
pub fn enumerate_degree(p: u64, n: u32) -> Result<u64> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::UnsupportedPrime { p, op: "enumerate_degree" });
    }
    match n {
        0 => Ok(1),
        1 => Ok(p - 2),
        _ => Ok(p.pow(n - 2) * (p - 1) * (p - 1)),
    }
}

/// Whether `x` lies in `1 + p^k Z_p` (as a residue mod `p^n`, `k ≤ n`).
pub fn in_unit_subgroup(u: u64, p: u64, k: u32) -> bool {
    if k == 0 {
        return u % p != 0;
    }
    u % p.pow(k) == 1 % p.pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn fractional_parts() {
        let x = PadicNumber::from_rational(7, 1, 5, 10).unwrap();
        assert!(fractional_part(&x).unwrap().is_zero());
        let y = PadicNumber::from_rational(3 * 5 + 2, 5, 5, 10).unwrap();
        assert_eq!(fractional_part(&y).unwrap(), q(2, 5));
        let z = integral_part(&y).unwrap();
        assert!(z.agrees_with_rational(&q(3, 1)));
    }

    #[test]
    fn additive_values() {
        let chi = AdditiveCharacter::standard(5).unwrap();
        assert!(chi.eval_rational(&q(17, 3)).is_zero());
        assert_eq!(chi.eval_rational(&q(1, 5)), RationalAngle::new(1, 5));
        assert_eq!(chi.conductor_level(), Some(0));
        let chi = AdditiveCharacter::new(5, q(1, 25)).unwrap();
        assert_eq!(chi.conductor_level(), Some(2));
        assert!(chi.eval_rational(&q(25, 1)).is_zero());
        assert!(!chi.eval_rational(&q(5, 1)).is_zero());
    }

    #[test]
    fn product_principle() {
        let r = product_principle_check(&q(1, 7)).unwrap();
        assert_eq!(r.local, vec![(7, q(1, 7))]);
        assert_eq!(r.witness, 0.into());
        let x = q(22, 7) + q(3, 5);
        let r = product_principle_check(&x).unwrap();
        // partial fractions: 22/7 + 3/5 = 3 + 1/7 + 3/5
        assert_eq!(r.local, vec![(5, q(3, 5)), (7, q(1, 7))]);
        assert_eq!(r.witness, (-3).into());
        let r = product_principle_check(&q(-12, 1)).unwrap();
        assert!(r.local.is_empty());
        assert_eq!(r.witness, 12.into());
    }

    #[test]
    fn degrees_and_counts() {
        assert_eq!(enumerate_degree(5, 1).unwrap(), 3);
        assert_eq!(enumerate_degree(5, 2).unwrap(), 16);
        assert_eq!(enumerate_degree(3, 3).unwrap(), 12);
        // brute force: characters of (Z/p^nZ)^× by generator image, filtered by
        // triviality on 1 + p^{n-1}Z_p
        for (p, n) in [(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (11, 2), (13, 2)] {
            let m = p.pow(n);
            let order = (p - 1) * p.pow(n - 1);
            let g = unit_generator(p);
            let mut count = 0;
            for k in 0..order {
                let alpha = RationalAngle::new(k as i128, order);
                // χ̲(u) for u ∈ U_{n-1} through powers of g
                let mut trivial_on_prev = true;
                let mut y = 1u64;
                for e in 0..order {
                    if in_unit_subgroup(y, p, n - 1) && !alpha.scale(e as i64).is_zero() {
                        trivial_on_prev = false;
                        break;
                    }
                    y = mul_mod(y, g, m);
                }
                if !trivial_on_prev {
                    count += 1;
                    assert_eq!(MultCharacter::odd(p, Complex64::new(0.0, 0.0), alpha).unwrap().degree(), n);
                }
            }
            assert_eq!(count, enumerate_degree(p, n).unwrap(), "p={p} n={n}");
        }
    }

    #[test]
    fn evaluation() {
        let s = Complex64::new(0.3, 1.1);
        let chi = MultCharacter::unramified(5, s).unwrap();
        let v = chi.eval(&PadicNumber::from_integer(5, 5, 10).unwrap()).unwrap().to_complex();
        assert!((v - (-s * 5f64.ln()).exp()).norm() < 1e-15);
        let i4 = MultCharacter::odd(5, Complex64::new(0.0, 0.0), RationalAngle::new(1, 4)).unwrap();
        assert_eq!(i4.degree(), 1);
        let g = unit_generator(5);
        let v = i4.eval(&PadicNumber::from_integer(g as i64, 5, 5).unwrap()).unwrap();
        assert_eq!(v.angle, RationalAngle::new(1, 4));
        let one = i4.eval(&PadicNumber::one(5, 5)).unwrap();
        assert!(one.angle.is_zero());
        assert!(MultCharacter::odd(5, s, RationalAngle::new(1, 3)).is_err());
    }

    #[test]
    fn signs_at_minus_one() {
        let z = Complex64::new(0.0, 0.0);
        assert!(MultCharacter::unramified(7, z).unwrap().chi_minus_one().is_zero());
        assert!(MultCharacter::legendre(5, z).unwrap().chi_minus_one().is_zero());
        assert_eq!(MultCharacter::legendre(3, z).unwrap().chi_minus_one(), RationalAngle::HALF);
        // the Legendre character agrees with Euler's criterion
        for p in [3u64, 5, 7, 11, 13] {
            let chi = MultCharacter::legendre(p, z).unwrap();
            for a in 1..p {
                let expect = if crate::arith::legendre(a as i64, p) == 1 { RationalAngle::ZERO } else { RationalAngle::HALF };
                assert_eq!(chi.unit_angle(a).unwrap(), expect);
            }
        }
    }

    #[test]
    fn dyadic_characters() {
        let z = Complex64::new(0.0, 0.0);
        let chi4 = MultCharacter::dyadic(z, RationalAngle::HALF, RationalAngle::ZERO).unwrap();
        assert_eq!(chi4.degree(), 2);
        assert_eq!(chi4.unit_angle(3).unwrap(), RationalAngle::HALF);
        assert!(chi4.unit_angle(5).unwrap().is_zero());
        let chi8 = MultCharacter::dyadic(z, RationalAngle::ZERO, RationalAngle::HALF).unwrap();
        assert_eq!(chi8.degree(), 3);
        assert_eq!(chi8.unit_angle(5).unwrap(), RationalAngle::HALF);
        assert!(chi8.unit_angle(7).unwrap().is_zero());
    }

    #[test]
    fn descriptor_round_trip() {
        let chi = MultCharacter::odd(7, Complex64::new(0.5, 0.25), RationalAngle::new(1, 6)).unwrap();
        let j = serde_json::to_string(&chi.descriptor()).unwrap();
        assert_eq!(j, r#"{"p":7,"s":[0.5,0.25],"n":1,"generator_angle":"1/6"}"#);
        let d: CharacterDescriptor = serde_json::from_str(&j).unwrap();
        assert_eq!(MultCharacter::from_descriptor(&d).unwrap(), chi);
    }

    proptest! {
        #[test]
        fn fractional_part_laws(a in -100000i64..100000, b in 1i64..3000, c in -100000i64..100000, d in 1i64..3000, pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let x = q(a, b);
            let y = q(c, d);
            let f = |r: &BigRational| frac_p(r, p);
            let fx = f(&x);
            prop_assert!(fx >= q(0, 1) && fx < q(1, 1));
            prop_assert!((f(&(&x + &y)) - f(&x) - f(&y)).is_integer());
            let chi = AdditiveCharacter::standard(p).unwrap();
            prop_assert_eq!(chi.eval_rational(&(&x + &y)), chi.eval_rational(&x).add(&chi.eval_rational(&y)));
            // conductor law
            if a != 0 {
                let t = AdditiveCharacter::new(p, x.clone()).unwrap();
                let k = t.conductor_level().unwrap();
                let inside = crate::arith::p_power(p, k) * q(c, 1);
                prop_assert!(t.eval_rational(&inside).is_zero());
                prop_assert!(!t.eval_rational(&crate::arith::p_power(p, k - 1)).is_zero());
            }
        }

        #[test]
        fn multiplicativity(a in 1i64..1_000_000, b in 1i64..1_000_000, k in 0u64..100, pi in 0usize..3) {
            let p = [3u64, 5, 7][pi];
            let order = (p - 1) * p;
            let chi = MultCharacter::odd(p, Complex64::new(0.2, -0.7), RationalAngle::new(k as i128, order)).unwrap();
            let x = PadicNumber::from_integer(a, p, 6).unwrap();
            let y = PadicNumber::from_integer(b, p, 6).unwrap();
            let vx = chi.eval(&x).unwrap();
            let vy = chi.eval(&y).unwrap();
            let vxy = chi.eval(&x.mul(&y).unwrap()).unwrap();
            prop_assert_eq!(vxy.angle, vx.angle.add(&vy.angle));
            prop_assert_eq!(vxy.valuation, vx.valuation + vy.valuation);
            prop_assert!((vxy.to_complex() - vx.to_complex() * vy.to_complex()).norm() < 1e-9 * vxy.to_complex().norm().max(1.0));
        }
    }
}
