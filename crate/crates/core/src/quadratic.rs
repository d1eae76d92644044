//! Square classes of `Q_p^×`, quadratic extensions `Q_p(√τ)` and the
//! quadratic characters `sgn_τ`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{legendre, require_prime, smallest_nonresidue};
use crate::error::{Error, Result};
use crate::padic::{teichmuller_of, PAbsValue, PadicNumber};

/// An element of `Q_p^× / (Q_p^×)²`.
///
/// `odd_valuation` records the parity of `v(x)`. For odd `p`, `unit` is 0 for
/// a residue and 1 for a non-residue unit part. For `p = 2`, `unit` is the
/// unit part mod 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub p: u64,
    pub odd_valuation: bool,
    pub unit: u8,
}

impl SquareClass {
    pub fn one(p: u64) -> Self {
        SquareClass { p, odd_valuation: false, unit: if p == 2 { 1 } else { 0 } }
    }

    /// All classes: 4 for odd `p`, 8 for `p = 2`.
    pub fn all(p: u64) -> Vec<SquareClass> {
        let units: &[u8] = if p == 2 { &[1, 7, 5, 3] } else { &[0, 1] };
        let mut out = Vec::new();
        for odd in [false, true] {
            for &u in units {
                out.push(SquareClass { p, odd_valuation: odd, unit: u });
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        *self == SquareClass::one(self.p)
    }

    pub fn mul(&self, o: &SquareClass) -> SquareClass {
        assert_eq!(self.p, o.p);
        let unit = if self.p == 2 {
            ((self.unit as u32 * o.unit as u32) % 8) as u8
        } else {
            self.unit ^ o.unit
        };
        SquareClass { p: self.p, odd_valuation: self.odd_valuation ^ o.odd_valuation, unit }
    }

    /// Label: `1, u, p, up` for odd `p`; `±1, ±2, ±5, ±10` for `p = 2`.
    pub fn label(&self) -> String {
        if self.p == 2 {
            let base = match self.unit {
                1 => 1,
                7 => -1,
                5 => 5,
                _ => -5,
            };
            return (if self.odd_valuation { 2 * base } else { base }).to_string();
        }
        match (self.odd_valuation, self.unit) {
            (false, 0) => "1",
            (false, _) => "u",
            (true, 0) => "p",
            (true, _) => "up",
        }
        .to_string()
    }

    pub fn parse_label(p: u64, s: &str) -> Result<SquareClass> {
        SquareClass::all(p)
            .into_iter()
            .find(|c| c.label() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown square class {s:?} for p={p}")))
    }

    /// A representative element. For odd `p`, `u` is the Teichmüller lift of
    /// the smallest quadratic non-residue.
    pub fn representative(&self, prec: u32) -> Result<PadicNumber> {
        let p = self.p;
        let unit = if p == 2 {
            let label: i64 = self.label().parse().expect("numeric label");
            return PadicNumber::from_integer(label, 2, prec);
        } else if self.unit == 0 {
            PadicNumber::one(p, prec)
        } else {
            teichmuller_of(smallest_nonresidue(p), p, prec)?
        };
        if self.odd_valuation {
            unit.mul(&PadicNumber::from_integer(p, p, prec)?)
        } else {
            Ok(unit)
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The square class of a nonzero `x`.
pub fn square_class(x: &PadicNumber) -> Result<SquareClass> {
    if x.is_zero() {
        return Err(Error::ZeroOperand { op: "square_class" });
    }
    let p = x.prime();
    let need = if p == 2 { 4 } else { 3 };
    if x.precision() < need {
        return Err(Error::InsufficientPrecision {
            op: "square_class",
            needed: need as i64,
            have: x.precision() as i64,
        });
    }
    let v = x.valuation()?;
    let u = x.unit_integer()?;
    let unit = if p == 2 {
        (u % BigUint::from(8u32)).to_u8().expect("small")
    } else {
        let u0 = (u % BigUint::from(p)).to_u64().expect("small");
        if legendre(u0 as i64, p) == 1 {
            0
        } else {
            1
        }
    };
    Ok(SquareClass { p, odd_valuation: v.rem_euclid(2) == 1, unit })
}

pub fn is_square(x: &PadicNumber) -> Result<bool> {
    Ok(square_class(x)?.is_one())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationData {
    pub e: u32,
    pub f: u32,
}

/// Ramification index and residual degree of `Q_p(√τ)`, `p` odd.
pub fn classify_quadratic(tau: &SquareClass) -> Result<RamificationData> {
    if tau.p == 2 {
        return Err(Error::UnsupportedPrime { p: 2, op: "classify_quadratic" });
    }
    if tau.is_one() {
        return Err(Error::InvalidArgument("τ must not be a square".into()));
    }
    Ok(if tau.odd_valuation {
        RamificationData { e: 2, f: 1 }
    } else {
        RamificationData { e: 1, f: 2 }
    })
}

/// `x + y√τ` in `Q_p(√τ)` for a fixed non-square `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExtElement {
    pub tau: PadicNumber,
    pub x: PadicNumber,
    pub y: PadicNumber,
}

/// `p^{-h/2}`, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfPowerAbs {
    pub p: u64,
    pub half_exponent: Option<i64>,
}

impl HalfPowerAbs {
    pub fn to_f64(&self) -> f64 {
        match self.half_exponent {
            None => 0.0,
            Some(h) => (self.p as f64).powf(-(h as f64) / 2.0),
        }
    }

    pub fn squared(&self) -> PAbsValue {
        match self.half_exponent {
            None => PAbsValue::zero(self.p),
            Some(h) => PAbsValue::from_valuation(self.p, h),
        }
    }
}

impl QuadExtElement {
    pub fn new(tau: PadicNumber, x: PadicNumber, y: PadicNumber) -> Result<Self> {
        if x.prime() != tau.prime() || y.prime() != tau.prime() {
            return Err(Error::PrimeMismatch { left: tau.prime(), right: x.prime() });
        }
        if tau.is_zero() || is_square(&tau)? {
            return Err(Error::InvalidArgument("τ must be a non-square".into()));
        }
        Ok(QuadExtElement { tau, x, y })
    }

    fn same_field(&self, o: &QuadExtElement) -> Result<()> {
        if self.tau != o.tau {
            return Err(Error::InvalidArgument("elements of different extensions".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &QuadExtElement) -> Result<QuadExtElement> {
        self.same_field(o)?;
        Ok(QuadExtElement { tau: self.tau.clone(), x: self.x.add(&o.x)?, y: self.y.add(&o.y)? })
    }

    pub fn mul(&self, o: &QuadExtElement) -> Result<QuadExtElement> {
        self.same_field(o)?;
        let x = self.x.mul(&o.x)?.add(&self.tau.mul(&self.y.mul(&o.y)?)?)?;
        let y = self.x.mul(&o.y)?.add(&self.y.mul(&o.x)?)?;
        Ok(QuadExtElement { tau: self.tau.clone(), x, y })
    }

    pub fn conj(&self) -> QuadExtElement {
        QuadExtElement { tau: self.tau.clone(), x: self.x.clone(), y: self.y.neg() }
    }

    /// `x² − τy²`.
    pub fn norm(&self) -> Result<PadicNumber> {
        self.x.mul(&self.x)?.sub(&self.tau.mul(&self.y.mul(&self.y)?)?)
    }

    /// `|norm|_p^{1/2}`, the absolute value extending `|·|_p`.
    pub fn abs_canonical(&self) -> Result<HalfPowerAbs> {
        let n = self.norm()?;
        Ok(HalfPowerAbs { p: n.prime(), half_exponent: n.valuation().ok() })
    }

    /// `|norm|_p`, the module of multiplication by the element.
    pub fn abs_normalized(&self) -> Result<PAbsValue> {
        Ok(self.norm()?.abs_p())
    }
}

type NormTable = HashMap<(u64, SquareClass), BTreeSet<SquareClass>>;

fn norm_table() -> &'static Mutex<NormTable> {
    static T: OnceLock<Mutex<NormTable>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Square classes of the norm group `N(Q_p(√τ)^×)`, by searching the values
/// `a² − τb²` over `0 ≤ a, b < p²`. The class of each value is decided by
/// Hensel's criterion.
pub fn norm_group_classes(tau: &SquareClass) -> Result<BTreeSet<SquareClass>> {
    let p = tau.p;
    if p == 2 {
        return Err(Error::UnsupportedPrime { p, op: "sgn_tau" });
    }
    if tau.is_one() {
        return Err(Error::InvalidArgument("τ must not be a square".into()));
    }
    if let Some(s) = norm_table().lock().expect("table lock").get(&(p, *tau)) {
        return Ok(s.clone());
    }
    let prec = 12;
    let t = tau.representative(prec)?;
    let mut found = BTreeSet::new();
    let bound = p * p;
    'search: for a in 0..bound {
        let a2 = PadicNumber::from_integer(a * a, p, prec)?;
        for b in 1..bound {
            let b2 = PadicNumber::from_integer(b * b, p, prec)?;
            let n = a2.sub(&t.mul(&b2)?)?;
            if n.is_zero() || n.precision() < 3 {
                continue;
            }
            found.insert(square_class(&n)?);
            if found.len() == 2 {
                break 'search;
            }
        }
    }
    if found.len() != 2 {
        return Err(Error::InvalidArgument(format!("norm search for τ={tau} found {found:?}")));
    }
    norm_table().lock().expect("table lock").insert((p, *tau), found.clone());
    Ok(found)
}

/// `sgn_τ(x)`: `+1` if `x` is a norm from `Q_p(√τ)`, else `−1`.
pub fn sgn_tau(tau: &SquareClass, x: &PadicNumber) -> Result<i32> {
    require_prime(tau.p)?;
    if x.prime() != tau.p {
        return Err(Error::PrimeMismatch { left: tau.p, right: x.prime() });
    }
    let classes = norm_group_classes(tau)?;
    Ok(if classes.contains(&square_class(x)?) { 1 } else { -1 })
}

/// One row per non-trivial class: ramification data and norm-group classes.
#[derive(Clone, Debug, Serialize)]
pub struct QuadExtRow {
    pub p: u64,
    pub tau: String,
    pub e: u32,
    pub f: u32,
    pub norm_group_classes: Vec<String>,
}

pub fn quadratic_extension_table(p: u64) -> Result<Vec<QuadExtRow>> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::UnsupportedPrime { p, op: "quadratic_extension_table" });
    }
    SquareClass::all(p)
        .into_iter()
        .filter(|c| !c.is_one())
        .map(|tau| {
            let r = classify_quadratic(&tau)?;
            let n = norm_group_classes(&tau)?;
            Ok(QuadExtRow {
                p,
                tau: tau.label(),
                e: r.e,
                f: r.f,
                norm_group_classes: n.iter().map(SquareClass::label).collect(),
            })
        })
        .collect()
}
