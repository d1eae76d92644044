//! Elements of `Q/Z`, standing for the roots of unity `exp(2πiθ)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `θ = num/den` reduced, with `0 ≤ num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle {
    num: u64,
    den: u64,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };
    pub const HALF: RationalAngle = RationalAngle { num: 1, den: 2 };

    /// `a/b mod 1`; panics if `b = 0`.
    pub fn new(a: i128, b: u64) -> Self {
        assert!(b != 0, "angle with zero denominator");
        let r = a.rem_euclid(b as i128) as u64;
        let g = r.gcd(&b);
        RationalAngle { num: r / g, den: b / g }
    }

    pub fn from_rational(r: &BigRational) -> Result<Self> {
        let den = r
            .denom()
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument(format!("angle denominator too large: {r}")))?;
        let num = r.numer().mod_floor(&BigInt::from(den)).to_u64().expect("reduced below den");
        Ok(RationalAngle::new(num as i128, den))
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    /// The order of `exp(2πiθ)`.
    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn add(&self, o: &RationalAngle) -> RationalAngle {
        if o.num == 0 {
            return *self;
        }
        if self.num == 0 {
            return *o;
        }
        let l = if self.den == o.den { self.den } else { self.den.lcm(&o.den) };
        // both scaled numerators lie in [0, l), so one subtraction reduces the sum
        let a = self.num as u128 * (l / self.den) as u128 + o.num as u128 * (l / o.den) as u128;
        let r = if a >= l as u128 { a - l as u128 } else { a } as u64;
        let g = r.gcd(&l);
        RationalAngle { num: r / g, den: l / g }
    }

    pub fn neg(&self) -> RationalAngle {
        RationalAngle::new(-(self.num as i128), self.den)
    }

    pub fn sub(&self, o: &RationalAngle) -> RationalAngle {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i64) -> RationalAngle {
        let a = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        RationalAngle::new(a, self.den)
    }

    pub fn to_complex(&self) -> Complex64 {
        // reduce to (-1/2, 1/2] for accuracy near 1
        let mut t = self.num as f64 / self.den as f64;
        if 2 * self.num > self.den {
            t = -((self.den - self.num) as f64 / self.den as f64);
        }
        let x = 2.0 * std::f64::consts::PI * t;
        Complex64::new(x.cos(), x.sin())
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for RationalAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = crate::arith::parse_rational(s)?;
        RationalAngle::from_rational(&r)
    }
}

impl Serialize for RationalAngle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalAngle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Default for RationalAngle {
    fn default() -> Self {
        RationalAngle::ZERO
    }
}
