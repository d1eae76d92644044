//! Text and JSON forms of [`PadicNumber`].
//!
//! Text: `p=5 v=1 digits=[2,0,3] prec=3` for nonzero values (all `prec`
//! digits listed, lowest first) and `p=5 zero absprec=10` for zero.
//! JSON carries the same fields.

use serde::{Deserialize, Serialize};

use super::PadicNumber;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PadicJson {
    Nonzero { p: u64, v: i64, digits: Vec<u64>, prec: u32 },
    Zero { p: u64, zero: bool, absprec: i64 },
}

impl PadicNumber {
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return format!("p={} zero absprec={}", self.p, self.absolute_precision());
        }
        let digits: Vec<String> = self.digits().iter().map(u64::to_string).collect();
        format!(
            "p={} v={} digits=[{}] prec={}",
            self.p,
            self.valuation().expect("nonzero"),
            digits.join(","),
            self.precision()
        )
    }

    pub fn parse_text(s: &str) -> Result<PadicNumber> {
        let bad = |why: &str| Error::Parse(format!("{why} in {s:?}"));
        let mut p = None;
        let mut v = None;
        let mut digits = None;
        let mut prec = None;
        let mut absprec = None;
        let mut zero = false;
        for tok in s.split_whitespace() {
            if tok == "zero" {
                zero = true;
                continue;
            }
            let (key, val) = tok.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match key {
                "p" => p = Some(val.parse::<u64>().map_err(|_| bad("bad p"))?),
                "v" => v = Some(val.parse::<i64>().map_err(|_| bad("bad v"))?),
                "prec" => prec = Some(val.parse::<u32>().map_err(|_| bad("bad prec"))?),
                "absprec" => absprec = Some(val.parse::<i64>().map_err(|_| bad("bad absprec"))?),
                "digits" => {
                    let inner = val
                        .strip_prefix('[')
                        .and_then(|x| x.strip_suffix(']'))
                        .ok_or_else(|| bad("digits must be bracketed"))?;
                    let ds: std::result::Result<Vec<u64>, _> = if inner.is_empty() {
                        Ok(Vec::new())
                    } else {
                        inner.split(',').map(|d| d.trim().parse::<u64>()).collect()
                    };
                    digits = Some(ds.map_err(|_| bad("bad digit"))?);
                }
                _ => return Err(bad("unknown key")),
            }
        }
        let p = p.ok_or_else(|| bad("missing p"))?;
        if zero {
            if v.is_some() || digits.is_some() || prec.is_some() {
                return Err(bad("zero takes only absprec"));
            }
            crate::arith::require_prime(p)?;
            return Ok(PadicNumber::zero(p, absprec.ok_or_else(|| bad("missing absprec"))?));
        }
        if absprec.is_some() {
            return Err(bad("absprec only applies to zero"));
        }
        PadicJson::Nonzero {
            p,
            v: v.ok_or_else(|| bad("missing v"))?,
            digits: digits.ok_or_else(|| bad("missing digits"))?,
            prec: prec.ok_or_else(|| bad("missing prec"))?,
        }
        .try_into()
    }

    pub fn to_json_value(&self) -> PadicJson {
        PadicJson::from(self)
    }
}

impl From<&PadicNumber> for PadicJson {
    fn from(x: &PadicNumber) -> Self {
        if x.is_zero() {
            PadicJson::Zero { p: x.p, zero: true, absprec: x.absolute_precision() }
        } else {
            PadicJson::Nonzero {
                p: x.p,
                v: x.valuation().expect("nonzero"),
                digits: x.digits(),
                prec: x.precision(),
            }
        }
    }
}

impl TryFrom<PadicJson> for PadicNumber {
    type Error = Error;

    fn try_from(j: PadicJson) -> Result<PadicNumber> {
        match j {
            PadicJson::Zero { p, zero, absprec } => {
                if !zero {
                    return Err(Error::Parse("zero flag must be true".into()));
                }
                crate::arith::require_prime(p)?;
                Ok(PadicNumber::zero(p, absprec))
            }
            PadicJson::Nonzero { p, v, digits, prec } => {
                if digits.len() != prec as usize {
                    return Err(Error::Parse(format!(
                        "digit count {} does not match prec {prec}",
                        digits.len()
                    )));
                }
                PadicNumber::from_digits(p, v, &digits)
            }
        }
    }
}

impl Serialize for PadicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PadicJson::deserialize(d)?;
        PadicNumber::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn text_forms() {
        let x = PadicNumber::from_rational(24, 17, 3, 4).unwrap();
        assert_eq!(x.to_text(), "p=3 v=1 digits=[1,0,1,0] prec=4");
        let z = PadicNumber::zero(5, 12);
        assert_eq!(z.to_text(), "p=5 zero absprec=12");
        assert_eq!(PadicNumber::parse_text(&z.to_text()).unwrap(), z);
        assert!(PadicNumber::parse_text("p=5 v=0 digits=[0,1] prec=2").is_err());
        assert!(PadicNumber::parse_text("p=5 v=0 digits=[1,5] prec=2").is_err());
        assert!(PadicNumber::parse_text("p=5 v=0 digits=[1,2] prec=3").is_err());
        assert!(PadicNumber::parse_text("p=6 v=0 digits=[1] prec=1").is_err());
    }

    #[test]
    fn json_form() {
        let x = PadicNumber::from_rational(-7, 25, 5, 3).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"p":5,"v":-2,"digits":[3,3,4],"prec":3}"#);
        let back: PadicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let z: PadicNumber = serde_json::from_str(r#"{"p":7,"zero":true,"absprec":4}"#).unwrap();
        assert!(z.is_zero());
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(n in -100000i64..100000, d in 1i64..5000,
                                    pi in 0usize..5, prec in 1u32..30) {
            let p = [2u64, 3, 5, 7, 13][pi];
            let x = PadicNumber::from_rational(n, d, p, prec).unwrap();
            let t = x.to_text();
            prop_assert_eq!(PadicNumber::parse_text(&t).unwrap().to_text(), t);
            let j = serde_json::to_string(&x).unwrap();
            let y: PadicNumber = serde_json::from_str(&j).unwrap();
            prop_assert_eq!(serde_json::to_string(&y).unwrap(), j);
        }
    }
}
