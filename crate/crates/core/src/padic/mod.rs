//! Exact arithmetic in `Q_p` at finite relative precision.
//!
//! A nonzero value is stored as `p^v * u` where `u` is an integer in
//! `[1, p^N)` prime to `p`, known modulo `p^N`. Zero carries only an absolute
//! precision `M` (the value is known to be `0 mod p^M`).
//!
//! Precision propagation: `add` keeps the minimum of the operands' absolute
//! precisions, `mul` keeps the minimum relative precision.

mod format;
mod roots;
mod series;

pub use format::PadicJson;
pub use roots::{hensel_sqrt, teichmuller, teichmuller_of};
pub use series::{factorial_valuation, series_sum, FnSeries, PadicSeries, DEFAULT_BUDGET_FACTOR};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{big_inv_mod, big_pow, p_power, require_prime, split_p_int};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Zero { abs_prec: i64 },
    Unit { valuation: i64, unit: BigUint, prec: u32 },
}

/// An element of `Q_p` known to finite precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u64,
    repr: Repr,
}

/// `|x|_p = p^{-v}`, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PAbsValue {
    pub p: u64,
    /// `Some(v)` for `p^{-v}`, `None` for 0.
    pub neg_exponent: Option<i64>,
}

impl PAbsValue {
    pub fn zero(p: u64) -> Self {
        PAbsValue { p, neg_exponent: None }
    }

    pub fn from_valuation(p: u64, v: i64) -> Self {
        PAbsValue { p, neg_exponent: Some(v) }
    }

    pub fn to_rational(&self) -> BigRational {
        match self.neg_exponent {
            None => BigRational::zero(),
            Some(v) => p_power(self.p, -v),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.neg_exponent {
            None => 0.0,
            Some(v) => (self.p as f64).powi(-(v as i32)),
        }
    }
}

impl std::ops::Mul for PAbsValue {
    type Output = PAbsValue;
    fn mul(self, rhs: PAbsValue) -> PAbsValue {
        assert_eq!(self.p, rhs.p, "absolute values over different primes");
        let neg_exponent = match (self.neg_exponent, rhs.neg_exponent) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        PAbsValue { p: self.p, neg_exponent }
    }
}

impl PartialOrd for PAbsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.p != other.p {
            return None;
        }
        Some(match (self.neg_exponent, other.neg_exponent) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            // larger valuation, smaller absolute value
            (Some(a), Some(b)) => b.cmp(&a),
        })
    }
}

fn modulus(p: u64, prec: u32) -> BigUint {
    big_pow(p, prec)
}

impl PadicNumber {
    /// Builds `p^valuation * unit` reducing `unit` mod `p^prec`. The caller
    /// guarantees `p ∤ unit`.
    fn from_unit(p: u64, valuation: i64, unit: BigUint, prec: u32) -> Self {
        debug_assert!(prec >= 1);
        let unit = unit % modulus(p, prec);
        debug_assert!(!(&unit % p).is_zero());
        PadicNumber { p, repr: Repr::Unit { valuation, unit, prec } }
    }

    /// Builds a value from an integer known mod `p^abs_prec`, normalizing the
    /// valuation.
    fn from_residue(p: u64, residue: BigInt, scale: i64, abs_prec: i64) -> Self {
        // value = residue * p^scale, known modulo p^abs_prec
        if residue.is_zero() {
            return PadicNumber::zero(p, abs_prec);
        }
        let (k, rest) = split_p_int(&residue, p);
        let valuation = scale + k as i64;
        if valuation >= abs_prec {
            return PadicNumber::zero(p, abs_prec);
        }
        let prec = (abs_prec - valuation) as u32;
        let m = BigInt::from(modulus(p, prec));
        let unit = rest.mod_floor(&m).to_biguint().expect("nonnegative");
        PadicNumber::from_unit(p, valuation, unit, prec)
    }

    pub fn zero(p: u64, abs_prec: i64) -> Self {
        PadicNumber { p, repr: Repr::Zero { abs_prec } }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PadicNumber::from_unit(p, 0, BigUint::one(), prec.max(1))
    }

    /// The image of `numer/denom` in `Q_p` with `prec` significant digits.
    /// Zero is returned at absolute precision `prec`.
    pub fn from_rational(
        numer: impl Into<BigInt>,
        denom: impl Into<BigInt>,
        p: u64,
        prec: u32,
    ) -> Result<Self> {
        let (numer, denom) = (numer.into(), denom.into());
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        require_prime(p)?;
        if prec == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        if numer.is_zero() {
            return Ok(PadicNumber::zero(p, prec as i64));
        }
        let (kn, n) = split_p_int(&numer, p);
        let (kd, d) = split_p_int(&denom, p);
        let m = BigInt::from(modulus(p, prec));
        let dinv = big_inv_mod(&d, &m).expect("unit mod p^N");
        let unit = (n * dinv).mod_floor(&m).to_biguint().expect("nonnegative");
        Ok(PadicNumber::from_unit(p, kn as i64 - kd as i64, unit, prec))
    }

    pub fn from_ratio(r: &BigRational, p: u64, prec: u32) -> Result<Self> {
        PadicNumber::from_rational(r.numer().clone(), r.denom().clone(), p, prec)
    }

    pub fn from_integer(n: impl Into<BigInt>, p: u64, prec: u32) -> Result<Self> {
        PadicNumber::from_rational(n, 1, p, prec)
    }

    /// Builds `Σ a_i p^{valuation+i}` from explicit digits; `digits[0]` must be
    /// nonzero.
    pub fn from_digits(p: u64, valuation: i64, digits: &[u64]) -> Result<Self> {
        require_prime(p)?;
        if digits.is_empty() {
            return Err(Error::InvalidArgument("empty digit sequence".into()));
        }
        if digits[0] == 0 {
            return Err(Error::InvalidArgument("leading digit must be nonzero".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::InvalidArgument(format!("digit {d} out of range for p={p}")));
        }
        let mut unit = BigUint::zero();
        for &d in digits.iter().rev() {
            unit = unit * p + d;
        }
        Ok(PadicNumber::from_unit(p, valuation, unit, digits.len() as u32))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn valuation(&self) -> Result<i64> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroOperand { op: "valuation" }),
            Repr::Unit { valuation, .. } => Ok(*valuation),
        }
    }

    /// Relative precision `N`; zero for the Zero value.
    pub fn precision(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Unit { prec, .. } => *prec,
        }
    }

    /// The exponent `M` such that the value is known modulo `p^M`.
    pub fn absolute_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs_prec } => *abs_prec,
            Repr::Unit { valuation, prec, .. } => valuation + *prec as i64,
        }
    }

    /// Base-`p` digits of the unit part, lowest first. Empty for Zero.
    pub fn digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Zero { .. } => Vec::new(),
            Repr::Unit { unit, prec, .. } => {
                let mut out = Vec::with_capacity(*prec as usize);
                let mut u = unit.clone();
                let pb = BigUint::from(self.p);
                for _ in 0..*prec {
                    let (q, r) = u.div_rem(&pb);
                    out.push(r.iter_u64_digits().next().unwrap_or(0));
                    u = q;
                }
                out
            }
        }
    }

    /// Unit part as an integer in `[1, p^N)`.
    pub fn unit_integer(&self) -> Result<&BigUint> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroOperand { op: "unit_part" }),
            Repr::Unit { unit, .. } => Ok(unit),
        }
    }

    pub fn unit_part(&self) -> Result<PadicNumber> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroOperand { op: "unit_part" }),
            Repr::Unit { unit, prec, .. } => {
                Ok(PadicNumber::from_unit(self.p, 0, unit.clone(), *prec))
            }
        }
    }

    pub fn abs_p(&self) -> PAbsValue {
        match &self.repr {
            Repr::Zero { .. } => PAbsValue::zero(self.p),
            Repr::Unit { valuation, .. } => PAbsValue::from_valuation(self.p, *valuation),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.repr, Repr::Unit { valuation: 0, .. })
    }

    /// The represented value truncated below `p^{abs_prec}`, as a rational
    /// `Σ a_i p^{v+i}` over the known digits.
    pub fn to_rational(&self) -> BigRational {
        match &self.repr {
            Repr::Zero { .. } => BigRational::zero(),
            Repr::Unit { valuation, unit, .. } => {
                BigRational::from_integer(BigInt::from(unit.clone())) * p_power(self.p, *valuation)
            }
        }
    }

    /// Residue of an integral value modulo `p^k`, for `k` at most the
    /// absolute precision.
    pub fn residue_mod(&self, k: u32) -> Result<BigUint> {
        if (k as i64) > self.absolute_precision() {
            return Err(Error::InsufficientPrecision {
                op: "residue_mod",
                needed: k as i64,
                have: self.absolute_precision(),
            });
        }
        match &self.repr {
            Repr::Zero { .. } => Ok(BigUint::zero()),
            Repr::Unit { valuation, unit, .. } => {
                if *valuation < 0 {
                    return Err(Error::InvalidArgument("value is not in Z_p".into()));
                }
                let shifted = unit * big_pow(self.p, *valuation as u32);
                Ok(shifted % modulus(self.p, k))
            }
        }
    }

    /// Truncates to at most `prec` significant digits.
    pub fn with_precision(&self, prec: u32) -> PadicNumber {
        match &self.repr {
            Repr::Zero { abs_prec } => PadicNumber::zero(self.p, *abs_prec),
            Repr::Unit { valuation, unit, prec: n } => {
                let n2 = prec.clamp(1, *n);
                PadicNumber::from_unit(self.p, *valuation, unit.clone(), n2)
            }
        }
    }

    /// Truncates so the value is known modulo `p^abs` at most.
    pub fn with_absolute_precision(&self, abs: i64) -> PadicNumber {
        match &self.repr {
            Repr::Zero { abs_prec } => PadicNumber::zero(self.p, (*abs_prec).min(abs)),
            Repr::Unit { valuation, unit, prec } => {
                if *valuation >= abs {
                    return PadicNumber::zero(self.p, abs);
                }
                let n2 = ((abs - valuation) as u32).min(*prec);
                PadicNumber::from_unit(self.p, *valuation, unit.clone(), n2)
            }
        }
    }

    fn check_prime(&self, other: &PadicNumber) -> Result<()> {
        if self.p != other.p {
            Err(Error::PrimeMismatch { left: self.p, right: other.p })
        } else {
            Ok(())
        }
    }

    /// Integer `m` with value `≡ m * p^scale (mod p^abs)`.
    fn scaled_residue(&self, scale: i64) -> BigInt {
        match &self.repr {
            Repr::Zero { .. } => BigInt::zero(),
            Repr::Unit { valuation, unit, .. } => {
                let shift = (valuation - scale) as u32;
                BigInt::from(unit * big_pow(self.p, shift))
            }
        }
    }

    fn floor_valuation(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs_prec } => *abs_prec,
            Repr::Unit { valuation, .. } => *valuation,
        }
    }

    pub fn add(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        let abs = self.absolute_precision().min(other.absolute_precision());
        let scale = self.floor_valuation().min(other.floor_valuation()).min(abs);
        let sum = self.scaled_residue(scale) + other.scaled_residue(scale);
        let m = BigInt::from(modulus(self.p, (abs - scale) as u32));
        Ok(PadicNumber::from_residue(self.p, sum.mod_floor(&m), scale, abs))
    }

    pub fn neg(&self) -> PadicNumber {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit { valuation, unit, prec } => {
                let m = modulus(self.p, *prec);
                PadicNumber::from_unit(self.p, *valuation, &m - unit, *prec)
            }
        }
    }

    pub fn sub(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { abs_prec: a }, Repr::Zero { abs_prec: b }) => {
                PadicNumber::zero(self.p, a + b)
            }
            (Repr::Zero { abs_prec }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::Zero { abs_prec }) => {
                PadicNumber::zero(self.p, abs_prec + valuation)
            }
            (
                Repr::Unit { valuation: v1, unit: u1, prec: n1 },
                Repr::Unit { valuation: v2, unit: u2, prec: n2 },
            ) => {
                let prec = *n1.min(n2);
                PadicNumber::from_unit(self.p, v1 + v2, u1 * u2, prec)
            }
        })
    }

    pub fn inverse(&self) -> Result<PadicNumber> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroOperand { op: "inverse" }),
            Repr::Unit { valuation, unit, prec } => {
                let m = BigInt::from(modulus(self.p, *prec));
                let inv = big_inv_mod(&BigInt::from(unit.clone()), &m).expect("unit");
                Ok(PadicNumber::from_unit(
                    self.p,
                    -valuation,
                    inv.to_biguint().expect("nonnegative"),
                    *prec,
                ))
            }
        }
    }

    pub fn div(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        self.mul(&other.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Result<PadicNumber> {
        let prec = self.precision().max(1);
        let mut acc = PadicNumber::one(self.p, prec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Whether `self` and `other` agree modulo `p^M` with `M` the smaller of
    /// the two absolute precisions.
    pub fn agrees_with(&self, other: &PadicNumber) -> bool {
        if self.p != other.p {
            return false;
        }
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// `x == numer/denom` at the precision of `x`.
    pub fn agrees_with_rational(&self, r: &BigRational) -> bool {
        let n = (self.absolute_precision() - crate::arith::ord_p_rational(r, self.p).unwrap_or(0))
            .max(1) as u32;
        match PadicNumber::from_ratio(r, self.p, n + 2) {
            Ok(x) => self.agrees_with(&x),
            Err(_) => false,
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(n: i64, d: i64, p: u64, prec: u32) -> PadicNumber {
        PadicNumber::from_rational(n, d, p, prec).unwrap()
    }

    #[test]
    fn expansion_of_24_over_17() {
        let x = qp(24, 17, 3, 10);
        assert_eq!(x.valuation().unwrap(), 1);
        assert_eq!(&x.digits()[..9], &[1, 0, 1, 0, 2, 0, 1, 1, 2]);
        assert_eq!(x.abs_p().to_rational(), BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn minus_one_and_geometric() {
        for p in [2u64, 3, 5, 7, 11] {
            let m1 = qp(-1, 1, p, 12);
            assert!(m1.digits().iter().all(|&d| d == p - 1));
            let g = qp(1, 1 - p as i64, p, 12);
            assert_eq!(g.valuation().unwrap(), 0);
            assert!(g.digits().iter().all(|&d| d == 1));
            let inv = qp(1 - p as i64, 1, p, 12).inverse().unwrap();
            assert_eq!(inv, g);
        }
    }

    #[test]
    fn additive_inverse_cancels_to_zero() {
        let x = qp(1, 1, 7, 10);
        let s = x.add(&qp(-1, 1, 7, 10)).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.absolute_precision(), 10);
    }

    #[test]
    fn carries_and_products() {
        let p5 = qp(5, 1, 5, 8);
        let sq = p5.mul(&p5).unwrap();
        assert_eq!(sq.valuation().unwrap(), 2);
        assert_eq!(sq.digits()[0], 1);
        assert!(sq.digits()[1..].iter().all(|&d| d == 0));
        let five = qp(2, 1, 5, 8).add(&qp(3, 1, 5, 8)).unwrap();
        assert_eq!(five.valuation().unwrap(), 1);
        assert_eq!(five.digits(), vec![1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(five.absolute_precision(), 8);
    }

    #[test]
    fn inverse_of_17_in_q3() {
        let x = qp(17, 1, 3, 8);
        let r = x.inverse().unwrap();
        // extended-gcd oracle mod 3^8
        let m = 3i64.pow(8);
        let expected = (1..m).find(|r| (17 * r) % m == 1).unwrap();
        assert_eq!(r.residue_mod(8).unwrap(), BigUint::from(expected as u64));
        assert!(x.mul(&r).unwrap().agrees_with(&PadicNumber::one(3, 8)));
    }

    #[test]
    fn zero_operand_errors() {
        let z = PadicNumber::zero(5, 10);
        assert!(matches!(z.valuation(), Err(Error::ZeroOperand { .. })));
        assert!(matches!(z.inverse(), Err(Error::ZeroOperand { .. })));
        assert!(matches!(z.unit_part(), Err(Error::ZeroOperand { .. })));
        assert!(matches!(
            qp(1, 1, 5, 4).add(&qp(1, 1, 7, 4)),
            Err(Error::PrimeMismatch { .. })
        ));
    }

    #[test]
    fn valuation_examples() {
        let x = qp(50, 3, 5, 6);
        assert_eq!(x.valuation().unwrap(), 2);
        assert_eq!(x.abs_p().to_rational(), BigRational::new(1.into(), 25.into()));
        let u = x.unit_part().unwrap();
        let p2 = qp(25, 1, 5, 6);
        assert!(p2.mul(&u).unwrap().agrees_with(&x));
        assert_eq!(qp(1, 1, 5, 6).valuation().unwrap(), 0);
    }

    #[test]
    fn precision_rules() {
        // cancellation loses relative precision but keeps absolute precision
        let a = qp(1, 1, 3, 6);
        let b = qp(-1 + 81, 1, 3, 6);
        let s = a.add(&b).unwrap();
        assert_eq!(s.valuation().unwrap(), 4);
        assert_eq!(s.absolute_precision(), 6);
        assert_eq!(s.precision(), 2);
        let m = qp(2, 1, 3, 4).mul(&qp(5, 1, 3, 9)).unwrap();
        assert_eq!(m.precision(), 4);
    }
}
