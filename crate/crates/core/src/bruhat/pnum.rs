//! Elements of `Z[1/p]` as `num·p^exp` in machine integers, for the inner
//! loops of canonicalization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::angle::RationalAngle;
use crate::arith::{p_power, split_p_int};
use crate::error::{Error, Result};

/// `num·p^exp` with `p ∤ num`; zero is `(0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct PNum {
    num: i128,
    exp: i64,
}

fn overflow() -> Error {
    Error::InvalidArgument("p-adic coordinate exceeds the 128-bit range".into())
}

pub(crate) fn ppow(p: u64, k: i64) -> Result<i128> {
    match k {
        0 => Ok(1),
        1 => Ok(p as i128),
        _ => {
            let k = u32::try_from(k).map_err(|_| overflow())?;
            (p as i128).checked_pow(k).ok_or_else(overflow)
        }
    }
}

impl PNum {
    pub const ZERO: PNum = PNum { num: 0, exp: 0 };

    pub fn new(mut num: i128, mut exp: i64, p: u64) -> PNum {
        if num == 0 {
            return PNum::ZERO;
        }
        let pi = p as i128;
        while num % pi == 0 {
            num /= pi;
            exp += 1;
        }
        PNum { num, exp }
    }

    /// Fails unless `r ∈ Z[1/p]` with a numerator that fits.
    pub fn from_rational(r: &BigRational, p: u64) -> Result<PNum> {
        if r.is_zero() {
            return Ok(PNum::ZERO);
        }
        let (k, rest) = split_p_int(r.denom(), p);
        if rest != BigInt::from(1) {
            return Err(Error::InvalidArgument(format!("{r} is not in Z[1/{p}]")));
        }
        let num = r.numer().to_i128().ok_or_else(overflow)?;
        Ok(PNum::new(num, -(k as i64), p))
    }

    pub fn to_rational(self, p: u64) -> BigRational {
        if self.exp >= 0 {
            return BigRational::from_integer(BigInt::from(self.num)) * p_power(p, self.exp);
        }
        // p ∤ num, so the fraction is already reduced
        let den = ppow(p, -self.exp).expect("denominator fits, as num·p^exp was formed");
        BigRational::new_raw(BigInt::from(self.num), BigInt::from(den))
    }

    pub fn signum(self) -> i128 {
        self.num.signum()
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn neg(self) -> PNum {
        PNum { num: -self.num, exp: self.exp }
    }

    pub fn add(self, o: PNum, p: u64) -> Result<PNum> {
        if self.is_zero() {
            return Ok(o);
        }
        if o.is_zero() {
            return Ok(self);
        }
        let e = self.exp.min(o.exp);
        let a = self.num.checked_mul(ppow(p, self.exp - e)?).ok_or_else(overflow)?;
        let b = o.num.checked_mul(ppow(p, o.exp - e)?).ok_or_else(overflow)?;
        Ok(PNum::new(a.checked_add(b).ok_or_else(overflow)?, e, p))
    }

    pub fn sub(self, o: PNum, p: u64) -> Result<PNum> {
        self.add(o.neg(), p)
    }

    pub fn mul(self, o: PNum) -> Result<PNum> {
        if self.is_zero() || o.is_zero() {
            return Ok(PNum::ZERO);
        }
        Ok(PNum { num: self.num.checked_mul(o.num).ok_or_else(overflow)?, exp: self.exp + o.exp })
    }

    /// `k·p^e`.
    pub fn monomial(k: u64, e: i64, p: u64) -> PNum {
        PNum::new(k as i128, e, p)
    }

    pub fn valuation(self) -> Option<i64> {
        (!self.is_zero()).then_some(self.exp)
    }

    /// The digits strictly below position `level`.
    pub fn trunc(self, level: i64, p: u64) -> Result<PNum> {
        if self.is_zero() || self.exp >= level {
            return Ok(PNum::ZERO);
        }
        let m = ppow(p, level - self.exp)?;
        Ok(PNum::new(self.num.rem_euclid(m), self.exp, p))
    }

    /// The digit at position `pos`.
    pub fn digit(self, pos: i64, p: u64) -> Result<u64> {
        if self.is_zero() || pos < self.exp {
            return Ok(0);
        }
        let low = ppow(p, pos - self.exp)?;
        let m = low.checked_mul(p as i128).ok_or_else(overflow)?;
        Ok((self.num.rem_euclid(m) / low) as u64)
    }

    /// `χ_p(self)` as an angle.
    pub fn chi(self, p: u64) -> Result<RationalAngle> {
        let f = self.trunc(0, p)?;
        if f.is_zero() {
            return Ok(RationalAngle::ZERO);
        }
        let den = u64::try_from(ppow(p, -f.exp)?).map_err(|_| overflow())?;
        Ok(RationalAngle::new(f.num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac_p, ord_p_rational, trunc_p};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn agrees_with_rational_arithmetic(
            a in -10_000i64..10_000, ea in -4i64..4,
            b in -10_000i64..10_000, eb in -4i64..4,
            lvl in -5i64..5, pi in 0usize..4,
        ) {
            let p = [2u64, 3, 5, 7][pi];
            let ra = BigRational::from_integer(a.into()) * p_power(p, ea);
            let rb = BigRational::from_integer(b.into()) * p_power(p, eb);
            let x = PNum::from_rational(&ra, p).unwrap();
            let y = PNum::from_rational(&rb, p).unwrap();
            prop_assert_eq!(x.to_rational(p), ra.clone());
            prop_assert_eq!(x.add(y, p).unwrap().to_rational(p), &ra + &rb);
            prop_assert_eq!(x.mul(y).unwrap().to_rational(p), &ra * &rb);
            prop_assert_eq!(x.trunc(lvl, p).unwrap().to_rational(p), trunc_p(&ra, p, lvl));
            prop_assert_eq!(x.valuation(), ord_p_rational(&ra, p));
            prop_assert_eq!(x.chi(p).unwrap(), RationalAngle::from_rational(&frac_p(&ra, p)).unwrap());
            let d = x.digit(lvl, p).unwrap();
            let expect = (trunc_p(&ra, p, lvl + 1) - trunc_p(&ra, p, lvl)) * p_power(p, -lvl);
            prop_assert_eq!(BigRational::from_integer((d as i64).into()), expect);
        }
    }

    #[test]
    fn rejects_foreign_denominators() {
        assert!(PNum::from_rational(&BigRational::new(1.into(), 3.into()), 5).is_err());
    }
}
