//! Local zeta integrals `Z(f,χ) = ∫ f(x)χ(x) d^×x` on `Q_p^×`, Gauss sums and
//! the local factors `ρ`, `L`, `ε`.
//!
//! Here `χ = χ̲·|·|^s` carries its exponent. The unitary convention
//! `ω = ω̲·|·|^{−iw}` with a separate `s` is [`UnitaryCharacter`]; it maps to
//! `χ̲·|·|^{s−iw}`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::angle::RationalAngle;
use crate::arith::{inv_mod, ord_p_rational, p_power};
use crate::bruhat::{chi_p, BruhatFunction, BruhatTerm, TERM_LIMIT};
use crate::characters::{CharacterDescriptor, MultCharacter};
use crate::error::{Error, Result};

/// `|1 − χ(p)|` below this counts as a pole of `L(χ)`.
pub const POLE_TOL: f64 = 1e-12;

/// A meromorphic value: finite, or a pole tagged with its location.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LocalValue {
    Finite(Complex64),
    Pole { location: Complex64 },
}

impl LocalValue {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            LocalValue::Finite(z) => Some(z),
            LocalValue::Pole { .. } => None,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, LocalValue::Pole { .. })
    }

    fn map(self, f: impl FnOnce(Complex64) -> Complex64) -> LocalValue {
        match self {
            LocalValue::Finite(z) => LocalValue::Finite(f(z)),
            pole => pole,
        }
    }
}

impl Serialize for LocalValue {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LocalValue::Finite(z) => [z.re, z.im].serialize(ser),
            LocalValue::Pole { location } => {
                let mut m = ser.serialize_map(Some(2))?;
                m.serialize_entry("pole", &true)?;
                m.serialize_entry("location", &[location.re, location.im])?;
                m.end()
            }
        }
    }
}

fn pf(p: u64) -> f64 {
    p as f64
}

/// `p^{−k s}`.
fn p_pow_s(p: u64, k: i64, s: Complex64) -> Complex64 {
    (-(k as f64) * s * pf(p).ln()).exp()
}

/// `u(x) mod p^n` for `x ≠ 0` in `Z_(p)`-form, `x = p^{v} u`.
fn unit_residue(x: &BigRational, p: u64, v: i64, n: u32) -> u64 {
    let m = p.pow(n);
    let u = x / p_power(p, v);
    let mb = BigInt::from(m);
    let num = u.numer().mod_floor(&mb).to_u64().expect("below modulus");
    let den = u.denom().mod_floor(&mb).to_u64().expect("below modulus");
    (num as u128 * inv_mod(den, m).expect("unit denominator") as u128 % m as u128) as u64
}

/// Sum of `χ_p(t x)·χ̲(u(x))` over the representatives `x`.
fn character_sum<'a>(
    chi: &MultCharacter,
    twist: &BigRational,
    reps: impl Iterator<Item = BigRational> + 'a,
    v: i64,
) -> Result<Complex64> {
    let p = chi.p;
    let n = chi.degree();
    let mut acc = Complex64::new(0.0, 0.0);
    for x in reps {
        let mut a = if twist.is_zero() { RationalAngle::ZERO } else { chi_p(&(twist * &x), p) };
        if n > 0 {
            a = a.add(&chi.unit_angle(unit_residue(&x, p, v, n))?);
        }
        acc += a.to_complex();
    }
    Ok(acc)
}

fn guard(p: u64, e: i64) -> Result<u64> {
    match p.checked_pow(e as u32) {
        Some(c) if (c as usize) <= TERM_LIMIT * 10 => Ok(c),
        _ => Err(Error::TooManyTerms { limit: TERM_LIMIT * 10 }),
    }
}

/// `∫_{B} χ_p(tx) χ(x) d^×x` over a block `B = c + p^m Z_p` not containing 0.
fn block_off_zero(chi: &MultCharacter, b: &BruhatTerm, v: i64) -> Result<Complex64> {
    let p = chi.p;
    let m = b.level;
    let mut l = m.max(v + chi.degree() as i64);
    if !b.twist.is_zero() {
        l = l.max(-ord_p_rational(&b.twist, p).expect("nonzero"));
    }
    let count = guard(p, l - m)?;
    let step = p_power(p, m);
    let reps = (0..count).map(|j| &b.center + &step * BigInt::from(j));
    let sum = character_sum(chi, &b.twist, reps, v)?;
    let w = pf(p) / (pf(p) - 1.0) * pf(p).powi((v - l) as i32);
    Ok(sum * w * p_pow_s(p, v, chi.s))
}

/// `∫_{p^m Z_p} χ_p(tx) χ(x) d^×x`, shell by shell with a geometric tail.
fn block_at_zero(chi: &MultCharacter, b: &BruhatTerm) -> Result<Complex64> {
    let p = chi.p;
    let m = b.level;
    let n = chi.degree() as i64;
    let tv = (!b.twist.is_zero()).then(|| -ord_p_rational(&b.twist, p).expect("nonzero"));
    let k = tv.map_or(m, |t| t.max(m));
    let mut total = Complex64::new(0.0, 0.0);
    for v in m..k {
        let l = (v + n).max(v + 1).max(tv.unwrap_or(v + 1));
        let count = guard(p, l - v)?;
        let base = p_power(p, v);
        let reps = (1..count).filter(|e| e % p != 0).map(|e| &base * BigInt::from(e));
        let sum = character_sum(chi, &b.twist, reps, v)?;
        let w = pf(p) / (pf(p) - 1.0) * pf(p).powi((v - l) as i32);
        total += sum * w * p_pow_s(p, v, chi.s);
    }
    if !chi.is_ramified() {
        if chi.s.re <= 0.0 {
            return Err(Error::Divergent(format!(
                "f(0) ≠ 0 and Re(s) = {} ≤ 0 for an unramified character",
                chi.s.re
            )));
        }
        let q = p_pow_s(p, 1, chi.s);
        total += p_pow_s(p, k, chi.s) / (1.0 - q);
    }
    Ok(total)
}

/// `Z(f, χ) = ∫ f(x) χ(x) d^×x`.
pub fn local_zeta(f: &BruhatFunction, chi: &MultCharacter) -> Result<Complex64> {
    if f.prime() != chi.p {
        return Err(Error::PrimeMismatch { left: f.prime(), right: chi.p });
    }
    let p = chi.p;
    let mut total = Complex64::new(0.0, 0.0);
    for b in f.blocks() {
        let v = ord_p_rational(&b.center, p);
        let part = match v {
            Some(v) if v < b.level => block_off_zero(chi, b, v)?,
            _ => block_at_zero(chi, b)?,
        };
        total += b.coeff.to_complex() * part;
    }
    Ok(total)
}

/// `Z(f, χ̲|·|^s)` for an explicit `s`.
pub fn local_zeta_at(f: &BruhatFunction, chi: &MultCharacter, s: Complex64) -> Result<Complex64> {
    local_zeta(f, &chi.with_s(s))
}

/// `φ₀ = 1_{Z_p}` when `χ̲` is trivial, otherwise `φ_n = χ_p·1_{p^{−n}Z_p}`.
pub fn standard_function(chi: &MultCharacter) -> Result<BruhatFunction> {
    let p = chi.p;
    let n = chi.degree() as i64;
    let twist = if n == 0 { BigRational::zero() } else { BigRational::one() };
    BruhatFunction::new(
        p,
        vec![BruhatTerm {
            coeff: crate::cyclotomic::Cyclotomic::one(),
            twist,
            center: BigRational::zero(),
            level: -n,
        }],
    )
}

/// `τ(χ) = Σ_{e ∈ (Z/p^nZ)^×} χ̲(e) exp(2πi e/p^n)`.
#[derive(Clone, Debug, Serialize)]
pub struct GaussSum {
    pub character: CharacterDescriptor,
    pub terms: Vec<RationalAngle>,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
}

pub fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn gauss_sum(chi: &MultCharacter) -> Result<GaussSum> {
    let n = chi.degree();
    if n == 0 {
        return Err(Error::InvalidArgument("the Gauss sum needs a ramified character".into()));
    }
    let p = chi.p;
    let m = p.pow(n);
    let mut terms = Vec::with_capacity(m as usize);
    for e in (1..m).filter(|e| e % p != 0) {
        terms.push(chi.unit_angle(e)?.add(&RationalAngle::new(e as i128, m)));
    }
    let value = terms.iter().map(|a| a.to_complex()).sum();
    Ok(GaussSum { character: chi.descriptor(), terms, value })
}

/// `∫_{Z_p^×} χ_p(vu) χ̲(u) d^×u` by a residue sum. It vanishes unless
/// `|v|_p = p^n`.
pub fn vanishing_lemma_check(chi: &MultCharacter, v: &BigRational) -> Result<Complex64> {
    let p = chi.p;
    let n = chi.degree();
    if n == 0 {
        return Err(Error::InvalidArgument("needs a ramified character".into()));
    }
    let vv = ord_p_rational(v, p).ok_or(Error::ZeroOperand { op: "vanishing_lemma_check" })?;
    let l = (n as i64).max(-vv).max(1);
    let count = guard(p, l)?;
    let reps = (1..count).filter(|e| e % p != 0).map(|e| BigRational::from_integer(BigInt::from(e)));
    let sum = character_sum(&chi.with_s(Complex64::new(0.0, 0.0)), v, reps, 0)?;
    let units = (count / p * (p - 1)) as f64;
    Ok(sum / units)
}

/// d^×-volume of `U_{p,n} = 1 + p^n Z_p`, `n ≥ 1`: `p^{1−n}/(p−1)`.
pub fn unit_subgroup_volume(p: u64, n: u32) -> BigRational {
    let pr = BigRational::from_integer(BigInt::from(p));
    pr.clone() / (pr - BigRational::one()) * p_power(p, -(n as i64))
}

/// `L(χ)`: `(1 − χ(p))^{−1}` unramified, `1` ramified.
pub fn l_factor(chi: &MultCharacter) -> LocalValue {
    if chi.is_ramified() {
        return LocalValue::Finite(Complex64::new(1.0, 0.0));
    }
    let d = 1.0 - chi.at_uniformizer();
    if d.norm() < POLE_TOL {
        LocalValue::Pole { location: chi.s }
    } else {
        LocalValue::Finite(1.0 / d)
    }
}

/// `ρ(χ)` in closed form: `(1 − p^{−(1−s)})/(1 − p^{−s})` unramified,
/// `τ(χ) χ̲(−1) p^{n(s−1)}` ramified of degree `n`.
pub fn rho(chi: &MultCharacter) -> Result<LocalValue> {
    let p = chi.p;
    if !chi.is_ramified() {
        let num = 1.0 - chi.dual().at_uniformizer();
        return Ok(l_factor(chi).map(|l| l * num));
    }
    let n = chi.degree() as i64;
    let tau = gauss_sum(chi)?.value;
    let sign = chi.chi_minus_one().to_complex();
    Ok(LocalValue::Finite(tau * sign * (n as f64 * (chi.s - 1.0) * pf(p).ln()).exp()))
}

/// `ρ(χ) = Z(f,χ)/Z(f̂,χ̌)`.
pub fn rho_quotient(f: &BruhatFunction, chi: &MultCharacter) -> Result<Complex64> {
    let num = local_zeta(f, chi)?;
    let den = local_zeta(&f.fourier()?, &chi.dual())?;
    if den.norm() == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(num / den)
}

/// `ε(χ)`: `1` unramified, `ρ(χ)` ramified.
pub fn epsilon(chi: &MultCharacter) -> Result<Complex64> {
    if !chi.is_ramified() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(rho(chi)?.finite().expect("ramified ρ is entire"))
}

/// `W(χ̲) = ε(|·|^{1/2}χ̲) = τ(χ) χ̲(−1) p^{−n/2}`.
pub fn root_number(chi: &MultCharacter) -> Result<Complex64> {
    epsilon(&chi.with_s(Complex64::new(0.5, 0.0)))
}

/// Residue of `ρ(|·|^s)` at `s = 0`: `(p−1)/(p log p)`.
pub fn rho_residue_at_zero(p: u64) -> f64 {
    (pf(p) - 1.0) / (pf(p) * pf(p).ln())
}

/// Residuals `|Z(f,χ)Z(ĝ,χ̌) − Z(f̂,χ̌)Z(g,χ)|` and `|Z(f,χ) − ρ(χ)Z(f̂,χ̌)|`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FunctionalEquationResidual {
    pub cross: f64,
    pub rho: f64,
}

pub fn functional_equation_check(
    f: &BruhatFunction,
    g: &BruhatFunction,
    chi: &MultCharacter,
) -> Result<FunctionalEquationResidual> {
    let dual = chi.dual();
    let fh = f.fourier()?;
    let gh = g.fourier()?;
    let zf = local_zeta(f, chi)?;
    let zg = local_zeta(g, chi)?;
    let zfh = local_zeta(&fh, &dual)?;
    let zgh = local_zeta(&gh, &dual)?;
    let cross = (zf * zgh - zfh * zg).norm();
    let rho = match rho(chi)? {
        LocalValue::Finite(r) => (zf - r * zfh).norm(),
        LocalValue::Pole { .. } => f64::NAN,
    };
    Ok(FunctionalEquationResidual { cross, rho })
}

/// `ω = ω̲·|·|^{−iw}` with `ω̲` unitary on `Z_p^×`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryCharacter {
    unit: MultCharacter,
    pub w: f64,
}

impl UnitaryCharacter {
    /// The exponent stored in `unit` is discarded.
    pub fn new(unit: &MultCharacter, w: f64) -> Self {
        UnitaryCharacter { unit: unit.with_s(Complex64::new(0.0, 0.0)), w }
    }

    /// Splits `χ̲|·|^{s'}` as `ω|·|^s` with `s = Re(s')` and `w = −Im(s')`.
    pub fn split(chi: &MultCharacter) -> (UnitaryCharacter, f64) {
        (UnitaryCharacter::new(chi, -chi.s.im), chi.s.re)
    }

    /// `ω|·|^s` as a character `χ̲|·|^{s−iw}`.
    pub fn at(&self, s: Complex64) -> MultCharacter {
        self.unit.with_s(s - Complex64::new(0.0, self.w))
    }

    pub fn conj(&self) -> UnitaryCharacter {
        UnitaryCharacter { unit: self.unit.conj(), w: -self.w }
    }

    pub fn p(&self) -> u64 {
        self.unit.p
    }

    pub fn degree(&self) -> u32 {
        self.unit.degree()
    }

    pub fn unit(&self) -> &MultCharacter {
        &self.unit
    }

    /// `ω(p) = p^{iw}`.
    pub fn at_uniformizer(&self) -> Complex64 {
        (Complex64::new(0.0, self.w) * pf(self.p()).ln()).exp()
    }

    pub fn l_factor(&self, s: Complex64) -> LocalValue {
        l_factor(&self.at(s))
    }

    pub fn epsilon(&self, s: Complex64) -> Result<Complex64> {
        epsilon(&self.at(s))
    }

    /// `ρ(ω,s) = Z(f,ω,s)/Z(f̂,ω̄,1−s)`.
    pub fn rho(&self, s: Complex64) -> Result<LocalValue> {
        rho(&self.at(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::random::TermSampler;
    use crate::cyclotomic::Cyclotomic;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Riemann sum of `f(x)χ(x)` over cosets of `p^L Z_p` in the shells `v ∈ [lo, hi]`.
    fn brute_zeta(f: &BruhatFunction, chi: &MultCharacter, lo: i64, hi: i64, fine: i64) -> Complex64 {
        let p = chi.p;
        let mut acc = c(0.0, 0.0);
        for v in lo..=hi {
            let l = v + fine;
            let count = p.pow((l - v) as u32);
            for e in (1..count).filter(|e| e % p != 0) {
                let x = p_power(p, v) * BigRational::from_integer(e.into());
                let fx = f.eval(&x).to_complex();
                if fx.norm() == 0.0 {
                    continue;
                }
                let cx = chi.eval_rational(&x).unwrap().to_complex();
                let dx = pf(p).powi(-(l as i32));
                acc += fx * cx * dx * pf(p) / (pf(p) - 1.0) * pf(p).powi(v as i32);
            }
        }
        acc
    }

    #[test]
    fn ball_gives_geometric_series() {
        for p in [2, 3, 5, 7] {
            let s = c(0.6, 1.3);
            let chi = MultCharacter::unramified(p, s).unwrap();
            let z = local_zeta(&BruhatFunction::ball(p, 0).unwrap(), &chi).unwrap();
            let want = 1.0 / (1.0 - p_pow_s(p, 1, s));
            assert!((z - want).norm() < 1e-13);
        }
    }

    #[test]
    fn phi_n_closed_form() {
        for p in [3u64, 5, 7] {
            for n in 1..=2 {
                let s = c(0.3, -0.8);
                for chi in MultCharacter::all_of_degree_at_most(p, n, s).unwrap() {
                    if chi.degree() != n {
                        continue;
                    }
                    let z = local_zeta(&standard_function(&chi).unwrap(), &chi).unwrap();
                    let tau = gauss_sum(&chi).unwrap().value;
                    let want = tau * (pf(p).ln() * (1.0 + n as f64 * (s - 1.0))).exp() / (pf(p) - 1.0);
                    assert!((z - want).norm() < 1e-10, "p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn matches_riemann_sum_on_random_functions() {
        let mut sampler = TermSampler::new(11).twisted(true);
        for p in [3u64, 5] {
            let chi = MultCharacter::odd(p, c(0.7, 0.2), RationalAngle::new(1, p - 1)).unwrap();
            for _ in 0..4 {
                let f = BruhatFunction::new(p, sampler.terms(p, 3, -1, 1)).unwrap();
                let z = local_zeta(&f, &chi).unwrap();
                // ramified χ̲: shells deep inside the support cancel exactly
                let brute = brute_zeta(&f, &chi, -3, 3, 4);
                assert!((z - brute).norm() < 1e-9, "{z} vs {brute}");
            }
        }
    }

    #[test]
    fn legendre_gauss_sum_mod_5() {
        let chi = MultCharacter::legendre(5, c(0.0, 0.0)).unwrap();
        let g = gauss_sum(&chi).unwrap();
        // direct 4-term sum: Σ (e|5) ζ₅^e
        let z = |k: f64| c(0.0, 2.0 * std::f64::consts::PI * k / 5.0).exp();
        let direct = z(1.0) - z(2.0) - z(3.0) + z(4.0);
        assert!((g.value - direct).norm() < 1e-14);
        assert!((g.value - c(5f64.sqrt(), 0.0)).norm() < 1e-13);
        assert_eq!(g.terms.len(), 4);
        assert!((root_number(&chi).unwrap() - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn gauss_sum_identities() {
        for p in [3u64, 5, 7] {
            for chi in MultCharacter::all_of_degree_at_most(p, 2, c(0.0, 0.0)).unwrap() {
                if !chi.is_ramified() {
                    continue;
                }
                let n = chi.degree();
                let t = gauss_sum(&chi).unwrap().value;
                let td = gauss_sum(&chi.dual()).unwrap().value;
                let sign = chi.chi_minus_one().to_complex();
                assert!((t * td - sign * pf(p).powi(n as i32)).norm() < 1e-10);
                assert!((t.norm() - pf(p).powf(n as f64 / 2.0)).abs() < 1e-10);
                let tc = gauss_sum(&chi.conj()).unwrap().value;
                assert!((tc - sign * t.conj()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn vanishing_lemma() {
        let chi = MultCharacter::odd(7, c(0.0, 0.0), RationalAngle::new(1, 42)).unwrap();
        assert_eq!(chi.degree(), 2);
        for v in [q(1, 7), q(1, 1), q(7, 1), q(1, 343)] {
            assert!(vanishing_lemma_check(&chi, &v).unwrap().norm() < 1e-12, "v={v}");
        }
        let z = vanishing_lemma_check(&chi, &q(1, 49)).unwrap();
        let tau = gauss_sum(&chi).unwrap().value;
        assert!((z - tau / 42.0).norm() < 1e-12);
    }

    #[test]
    fn volume_identity() {
        assert_eq!(unit_subgroup_volume(5, 1), q(1, 4));
        assert_eq!(unit_subgroup_volume(3, 3), q(1, 18));
        // d^×-volume via integrate_multiplicative on 1 + p^n Z_p
        let f = BruhatFunction::indicator(3, q(1, 1), 3).unwrap();
        assert_eq!(f.integrate_multiplicative(0).unwrap(), Cyclotomic::from_rational(q(1, 18)));
    }

    #[test]
    fn rho_closed_form_equals_quotient() {
        let mut sampler = TermSampler::new(5);
        for p in [3u64, 5, 7] {
            for alpha in [RationalAngle::ZERO, RationalAngle::new(1, p - 1), RationalAngle::new(1, p * (p - 1))] {
                let chi = MultCharacter::odd(p, c(0.4, 0.9), alpha).unwrap();
                let closed = rho(&chi).unwrap().finite().unwrap();
                let mut tried = 0;
                while tried < 3 {
                    let f = BruhatFunction::new(p, sampler.terms(p, 4, -2, 2)).unwrap();
                    let Ok(r) = rho_quotient(&f, &chi) else { continue };
                    if local_zeta(&f, &chi).unwrap().norm() < 1e-6 {
                        continue;
                    }
                    assert!((r - closed).norm() < 1e-9 * closed.norm().max(1.0), "p={p} α={alpha}");
                    tried += 1;
                }
            }
        }
    }

    #[test]
    fn rho_factorization_and_poles() {
        for p in [2u64, 3] {
            for k in 0..8 {
                let s = c(0.1 + 0.1 * k as f64, -1.0 + 0.3 * k as f64);
                let chi = MultCharacter::unramified(p, s).unwrap();
                let r = rho(&chi).unwrap().finite().unwrap();
                let via = l_factor(&chi).finite().unwrap() / l_factor(&chi.dual()).finite().unwrap();
                assert!((r - via).norm() < 1e-12);
                assert_eq!(epsilon(&chi).unwrap(), c(1.0, 0.0));
            }
        }
        let chi = MultCharacter::unramified(5, c(0.0, 2.0 * std::f64::consts::PI / 5f64.ln())).unwrap();
        assert!(l_factor(&chi).is_pole());
        assert!(rho(&chi).unwrap().is_pole());
        let json = serde_json::to_string(&rho(&chi).unwrap()).unwrap();
        assert!(json.starts_with("{\"pole\":true"));
    }

    #[test]
    fn residue_at_zero() {
        for p in [2u64, 3, 5, 7] {
            // symmetric difference quotient for s·ρ(s) at s = 0
            let h = 1e-5;
            let at = |s: f64| {
                let chi = MultCharacter::unramified(p, c(s, 0.0)).unwrap();
                s * rho(&chi).unwrap().finite().unwrap().re
            };
            let est = (at(h) + at(-h)) / 2.0;
            assert!((est - rho_residue_at_zero(p)).abs() < 1e-8, "p={p}");
        }
    }

    #[test]
    fn divergence_is_reported() {
        let chi = MultCharacter::unramified(3, c(-0.5, 0.0)).unwrap();
        let f = BruhatFunction::ball(3, 0).unwrap();
        assert!(matches!(local_zeta(&f, &chi), Err(Error::Divergent(_))));
        // f(0) = 0: any s
        let g = BruhatFunction::units(3).unwrap();
        assert!((local_zeta(&g, &chi).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn even_function_odd_character_vanishes() {
        let p = 7;
        let chi = MultCharacter::odd(p, c(0.5, 0.0), RationalAngle::new(1, 2)).unwrap();
        assert_eq!(chi.chi_minus_one(), RationalAngle::HALF);
        let mut sampler = TermSampler::new(3).twisted(true);
        for _ in 0..5 {
            let f = BruhatFunction::new(p, sampler.terms(p, 4, -1, 2)).unwrap();
            let even = f.add(&f.reflect().unwrap()).unwrap();
            assert!(local_zeta(&even, &chi).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_convention() {
        let unit = MultCharacter::odd(5, c(0.0, 0.0), RationalAngle::new(1, 4)).unwrap();
        let w = 0.7;
        let s = c(0.3, 0.1);
        let om = UnitaryCharacter::new(&unit, w);
        let closed = om.rho(s).unwrap().finite().unwrap();
        let tau = gauss_sum(&unit).unwrap().value;
        let sign = unit.chi_minus_one().to_complex();
        let want = tau * sign * (1.0 * (s - c(0.0, w) - 1.0) * 5f64.ln()).exp();
        assert!((closed - want).norm() < 1e-12);
        let f = standard_function(&unit).unwrap();
        let quot = rho_quotient(&f, &om.at(s)).unwrap();
        assert!((quot - closed).norm() < 1e-10);
        // unramified: ω(p) = p^{iw}
        let om0 = UnitaryCharacter::new(&MultCharacter::unramified(5, s).unwrap(), w);
        let r0 = om0.rho(s).unwrap().finite().unwrap();
        let ob = om0.conj().at_uniformizer();
        let want0 = (1.0 - ob * (-(1.0 - s) * 5f64.ln()).exp()) / (1.0 - om0.at_uniformizer() * (-s * 5f64.ln()).exp());
        assert!((r0 - want0).norm() < 1e-12);
        let (back, re) = UnitaryCharacter::split(&om0.at(s));
        assert!((back.w - (w - s.im)).abs() < 1e-15 && (re - s.re).abs() < 1e-15);
        assert!((back.at(c(re, 0.0)).s - om0.at(s).s).norm() < 1e-15);
    }

    #[test]
    fn dyadic_characters() {
        let chi = MultCharacter::dyadic(c(0.5, 0.0), RationalAngle::HALF, RationalAngle::new(1, 2)).unwrap();
        let n = chi.degree();
        let t = gauss_sum(&chi).unwrap().value;
        assert!((t.norm() - 2f64.powf(n as f64 / 2.0)).abs() < 1e-12);
        let z = local_zeta(&standard_function(&chi).unwrap(), &chi).unwrap();
        let want = t * (2f64.ln() * (1.0 + n as f64 * (chi.s - 1.0))).exp();
        assert!((z - want).norm() < 1e-12);
    }
}
