//! Desk-scale adeles and ideles of `Q`: a rational diagonal part with finitely
//! many local overrides.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factor, format_rational, frac_p, ord_p_rational, p_power, rational_to_f64, require_prime};
use crate::bruhat::BruhatFunction;
use crate::characters::fractional_part;
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, DEFAULT_PRECISION};

/// Primes dividing the numerator or denominator of `r`.
pub fn prime_support(r: &BigRational) -> Result<Vec<u64>> {
    let mut out = BTreeSet::new();
    for part in [r.numer(), r.denom()] {
        if part.is_zero() {
            continue;
        }
        let n = part
            .abs()
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument(format!("{part} is too large to factor")))?;
        out.extend(factor(n).into_iter().map(|(p, _)| p));
    }
    Ok(out.into_iter().collect())
}

/// `|x|_p` for every `p | x`, `|x|_∞`, and their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFormula {
    pub local: Vec<(u64, BigRational)>,
    pub real: BigRational,
    pub product: BigRational,
}

pub fn product_formula(x: &BigRational) -> Result<ProductFormula> {
    if x.is_zero() {
        return Err(Error::ZeroOperand { op: "product_formula" });
    }
    let mut product = x.abs();
    let mut local = Vec::new();
    for p in prime_support(x)? {
        let a = p_power(p, -ord_p_rational(x, p).expect("nonzero"));
        product *= &a;
        local.push((p, a));
    }
    Ok(ProductFormula { local, real: x.abs(), product })
}

/// The archimedean component: exact when it is the diagonal rational.
#[derive(Clone, Debug, PartialEq)]
pub enum RealPart {
    Exact(BigRational),
    Float(f64),
}

impl RealPart {
    pub fn to_f64(&self) -> f64 {
        match self {
            RealPart::Exact(r) => rational_to_f64(r),
            RealPart::Float(x) => *x,
        }
    }
}

/// `x = (x_p)_p × x_∞`: `x_p` is `overrides[p]` if present, otherwise the image
/// of `global`; `x_∞` is `real` if set, otherwise `global`.
#[derive(Clone, Debug, PartialEq)]
pub struct Adele {
    pub global: BigRational,
    overrides: BTreeMap<u64, PadicNumber>,
    pub real: Option<f64>,
    prec: u32,
}

impl Adele {
    pub fn diagonal(r: BigRational) -> Self {
        Adele { global: r, overrides: BTreeMap::new(), real: None, prec: DEFAULT_PRECISION }
    }

    pub fn zero() -> Self {
        Adele::diagonal(BigRational::zero())
    }

    pub fn with_override(mut self, x: PadicNumber) -> Result<Self> {
        require_prime(x.prime())?;
        self.prec = self.prec.max(x.precision());
        self.overrides.insert(x.prime(), x);
        Ok(self)
    }

    pub fn with_real(mut self, t: f64) -> Self {
        self.real = Some(t);
        self
    }

    pub fn overrides(&self) -> &BTreeMap<u64, PadicNumber> {
        &self.overrides
    }

    /// `x_p`.
    pub fn component(&self, p: u64) -> Result<PadicNumber> {
        if let Some(x) = self.overrides.get(&p) {
            return Ok(x.clone());
        }
        if self.global.is_zero() {
            return Ok(PadicNumber::zero(p, self.prec as i64));
        }
        PadicNumber::from_ratio(&self.global, p, self.prec)
    }

    pub fn real_part(&self) -> RealPart {
        match self.real {
            Some(t) => RealPart::Float(t),
            None => RealPart::Exact(self.global.clone()),
        }
    }

    /// Primes at which `x_p` may fail to be a unit.
    pub fn support(&self) -> Result<Vec<u64>> {
        let mut s: BTreeSet<u64> = prime_support(&self.global)?.into_iter().collect();
        s.extend(self.overrides.keys().copied());
        Ok(s.into_iter().collect())
    }

    /// `v_p(x_p)`, `None` for zero.
    pub fn valuation_at(&self, p: u64) -> Option<i64> {
        match self.overrides.get(&p) {
            Some(x) => x.valuation().ok(),
            None => ord_p_rational(&self.global, p),
        }
    }

    /// `x − r` for rational `r`, componentwise.
    pub fn sub_rational(&self, r: &BigRational) -> Result<Adele> {
        let mut overrides = BTreeMap::new();
        for (&p, x) in &self.overrides {
            let y = match ord_p_rational(r, p) {
                Some(v) if v < x.absolute_precision() => {
                    let prec = (x.absolute_precision() - v).max(1) as u32;
                    x.sub(&PadicNumber::from_ratio(r, p, prec)?)?
                }
                _ => x.clone(),
            };
            overrides.insert(p, y);
        }
        Ok(Adele {
            global: &self.global - r,
            overrides,
            real: self.real.map(|t| t - rational_to_f64(r)),
            prec: self.prec,
        })
    }

    /// Membership in `D = ∏ Z_p × [0, 1)`.
    pub fn in_fundamental_domain(&self) -> Result<bool> {
        for p in self.support()? {
            if matches!(self.valuation_at(p), Some(v) if v < 0) {
                return Ok(false);
            }
        }
        Ok(match self.real_part() {
            RealPart::Exact(r) => !r.is_negative() && r < BigRational::one(),
            RealPart::Float(t) => (0.0..1.0).contains(&t),
        })
    }

    pub fn to_json(&self) -> AdeleJson {
        AdeleJson {
            global: format_rational(&self.global),
            overrides: self.overrides.iter().map(|(p, x)| (p.to_string(), x.to_text())).collect(),
            real: self.real,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdeleJson {
    pub global: String,
    pub overrides: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real: Option<f64>,
}

/// `x = d + r` with `d ∈ ∏ Z_p × [0, 1)` and `r ∈ Q`.
pub fn fundamental_domain_reduce(x: &Adele) -> Result<(Adele, BigRational)> {
    let mut r = BigRational::zero();
    for p in x.support()? {
        if !matches!(x.valuation_at(p), Some(v) if v < 0) {
            continue;
        }
        r += match x.overrides.get(&p) {
            Some(xp) => fractional_part(xp)?,
            None => frac_p(&x.global, p),
        };
    }
    let n = match x.real_part() {
        RealPart::Exact(g) => (g - &r).floor(),
        RealPart::Float(t) => {
            let f = (t - rational_to_f64(&r)).floor();
            BigRational::from_integer(BigInt::from(f as i64))
        }
    };
    r += n;
    Ok((x.sub_rational(&r)?, r))
}

/// An adele with every component nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Idele(Adele);

impl Idele {
    pub fn new(x: Adele) -> Result<Self> {
        // a zero diagonal part would make almost every component zero
        if x.global.is_zero() {
            return Err(Error::ZeroOperand { op: "Idele::new" });
        }
        if x.real == Some(0.0) || x.overrides.values().any(|v| v.is_zero()) {
            return Err(Error::ZeroOperand { op: "Idele::new" });
        }
        Ok(Idele(x))
    }

    pub fn diagonal(r: BigRational) -> Result<Self> {
        Idele::new(Adele::diagonal(r))
    }

    pub fn adele(&self) -> &Adele {
        &self.0
    }
}

/// `|x|_A` split as an exact finite part and the archimedean factor.
#[derive(Clone, Debug, PartialEq)]
pub struct AdelicAbs {
    pub finite: BigRational,
    pub real: RealPart,
}

impl AdelicAbs {
    pub fn value(&self) -> f64 {
        rational_to_f64(&self.finite) * self.real.to_f64()
    }

    /// The product, when `x_∞` is the diagonal rational.
    pub fn exact(&self) -> Option<BigRational> {
        match &self.real {
            RealPart::Exact(r) => Some(&self.finite * r),
            RealPart::Float(_) => None,
        }
    }
}

/// `|x|_A = Π_{p≤∞} |x_p|_p`.
pub fn adelic_abs(x: &Idele) -> Result<AdelicAbs> {
    let x = &x.0;
    let mut finite = BigRational::one();
    for p in x.support()? {
        let v = x.valuation_at(p).ok_or(Error::ZeroOperand { op: "adelic_abs" })?;
        finite *= p_power(p, -v);
    }
    let real = match x.real_part() {
        RealPart::Exact(r) => RealPart::Exact(r.abs()),
        RealPart::Float(t) => RealPart::Float(t.abs()),
    };
    Ok(AdelicAbs { finite, real })
}

/// `μ_A(xD)` for `D = ∏ Z_p × [0, 1)`, assembled from the local volumes
/// `vol(x_p Z_p)` and `|x_∞|`.
pub fn scaled_domain_volume(x: &Idele) -> Result<AdelicAbs> {
    let a = &x.0;
    let mut finite = BigRational::one();
    for p in a.support()? {
        let v = a.valuation_at(p).ok_or(Error::ZeroOperand { op: "scaled_domain_volume" })?;
        let vol = BruhatFunction::ball(p, v)?.integrate_additive();
        finite *= vol.as_rational().expect("rational volume");
    }
    let real = match a.real_part() {
        RealPart::Exact(r) => RealPart::Exact(r.abs()),
        RealPart::Float(t) => RealPart::Float(t.abs()),
    };
    Ok(AdelicAbs { finite, real })
}

/// `x = q·u` with `q = (Π_p |x_p|_p)^{−1}` a positive rational and every
/// `u_p ∈ Z_p^×`. The archimedean component is ignored.
pub fn idele_unit_decomposition(x: &Idele) -> Result<(BigRational, Idele)> {
    let a = &x.0;
    let mut q = BigRational::one();
    for p in a.support()? {
        let v = a.valuation_at(p).ok_or(Error::ZeroOperand { op: "idele_unit_decomposition" })?;
        q *= p_power(p, v);
    }
    let qi = q.recip();
    let mut overrides = BTreeMap::new();
    for (&p, xp) in &a.overrides {
        let s = PadicNumber::from_ratio(&qi, p, xp.precision())?;
        overrides.insert(p, xp.mul(&s)?);
    }
    let u = Adele { global: &a.global * &qi, overrides, real: None, prec: a.prec };
    Ok((q, Idele(u)))
}
