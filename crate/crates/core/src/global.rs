//! Global objects over `Q`: the theta series, the completed zeta function
//! `Λ(s) = π^{−s/2}Γ(s/2)ζ(s)`, adelic Poisson summation, and global `L`/`ε`
//! assembled from local factors.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::adele::{adelic_abs, Idele};
use crate::angle::RationalAngle;
use crate::arith::{p_power, primes_up_to, rational_to_f64, require_prime};
use crate::characters::MultCharacter;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gamma::{l_arch, Parity};
use crate::local_zeta::{epsilon, ser_complex};
use crate::quadrature;

/// Terms of `Σ e^{−πn²x}` below this are dropped.
pub const THETA_CUTOFF: f64 = 1e-18;

/// `e^{−πn²x}` for `n = 1, 2, …` down to the cutoff, summed smallest first.
fn gaussian_tail(x: f64) -> f64 {
    let mut terms = Vec::new();
    let mut n = 1u64;
    loop {
        let t = (-PI * (n * n) as f64 * x).exp();
        if t < THETA_CUTOFF {
            break;
        }
        terms.push(t);
        n += 1;
    }
    terms.iter().rev().sum()
}

fn require_positive(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("expected a positive real, got {x}")))
    }
}

/// `θ(x) = Σ_{n∈Z} e^{−πn²x}`.
pub fn theta(x: f64) -> Result<f64> {
    require_positive(x)?;
    Ok(1.0 + 2.0 * gaussian_tail(x))
}

/// `ψ(x) = Σ_{n≥1} e^{−πn²x} = (θ(x) − 1)/2`.
pub fn psi(x: f64) -> Result<f64> {
    require_positive(x)?;
    Ok(gaussian_tail(x))
}

/// Absolute tolerance per unit panel of the `Λ` integral.
const LAMBDA_TOL: f64 = 1e-15;

/// `Λ(s) = 1/(s−1) − 1/s + ∫_1^∞ ψ(x)(x^{s/2} + x^{(1−s)/2}) dx/x`.
pub fn completed_zeta(s: Complex64) -> Result<Complex64> {
    for pole in [0.0, 1.0] {
        if (s - pole).norm() < 1e-12 {
            return Err(Error::PoleProximity { location: format!("{pole}") });
        }
    }
    let a = (s.re / 2.0).max((1.0 - s.re) / 2.0) - 1.0;
    // ψ(x) x^{a} ≤ 1.1·e^{−πx} x^{a} bounds the integrand beyond X
    let mut x_max = 2.0f64;
    while 1.1 * (-PI * x_max).exp() * x_max.powf(a) / PI > 1e-17 {
        x_max += 1.0;
    }
    let panels = x_max as usize - 1;
    let f = |x: f64| {
        let lx = x.ln();
        let w = (s / 2.0 * lx).exp() + ((1.0 - s) / 2.0 * lx).exp();
        w * (gaussian_tail(x) / x)
    };
    let parts: Vec<Complex64> = (0..panels)
        .into_par_iter()
        .map(|k| {
            let lo = 1.0 + k as f64;
            quadrature::integrate(&f, lo, lo + 1.0, LAMBDA_TOL, 30).value
        })
        .collect();
    let integral: Complex64 = parts.into_iter().sum();
    Ok(1.0 / (s - 1.0) - 1.0 / s + integral)
}

/// Richardson extrapolation of `g(h)` to `h → 0` along `h, h/2, h/4, …`,
/// assuming `g(h) = g(0) + c₁h + c₂h² + …`. Returns the estimate and the
/// difference between the last two diagonal entries.
pub fn richardson(g: impl Fn(f64) -> Result<Complex64>, h0: f64, levels: usize) -> Result<(Complex64, f64)> {
    let mut table: Vec<Vec<Complex64>> = Vec::new();
    for i in 0..levels {
        let h = h0 / f64::from(1u32 << i);
        let mut row = vec![g(h)?];
        for j in 1..=i {
            let f = f64::from(1u32 << j);
            let v = (f * row[j - 1] - table[i - 1][j - 1]) / (f - 1.0);
            row.push(v);
        }
        table.push(row);
    }
    let last = table[levels - 1][levels - 1];
    let prev = table[levels - 2][levels - 2];
    Ok((last, (last - prev).norm()))
}

/// Residues of `Λ` at 1 and 0: limits of `(s−1)Λ(s)` and `sΛ(s)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Residues {
    #[serde(serialize_with = "ser_complex")]
    pub at_one: Complex64,
    pub at_one_error: f64,
    #[serde(serialize_with = "ser_complex")]
    pub at_zero: Complex64,
    pub at_zero_error: f64,
}

pub fn lambda_residues(h0: f64, levels: usize) -> Result<Residues> {
    let one = Complex64::new(1.0, 0.0);
    let (at_one, at_one_error) = richardson(|h| Ok(completed_zeta(one + h)? * h), h0, levels)?;
    let (at_zero, at_zero_error) = richardson(|h| Ok(completed_zeta(Complex64::new(h, 0.0))? * h), h0, levels)?;
    Ok(Residues { at_one, at_one_error, at_zero, at_zero_error })
}

/// `Φ = ⊗_p 1_{p^{k_p}Z_p} ⊗ e^{−πx²}`, with `k_p = 0` except at finitely many primes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PoissonSpec {
    pub shifts: BTreeMap<u64, i64>,
}

impl PoissonSpec {
    pub fn standard() -> Self {
        PoissonSpec::default()
    }

    pub fn with_shift(mut self, p: u64, k: i64) -> Result<Self> {
        require_prime(p)?;
        self.shifts.insert(p, k);
        Ok(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonResult {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `a` with `{r : Φ(rx) ≠ 0} = aZ`.
    pub lattice: String,
    pub terms: u64,
}

/// `Σ_{n∈Z} e^{−π(nc)²}` truncated where the terms drop below `e^{−40}`.
fn gaussian_lattice_sum(c: f64) -> (f64, u64) {
    let n_max = ((40.0 / PI).sqrt() / c).ceil() as u64 + 1;
    let tail: f64 = (1..=n_max).rev().map(|n| (-PI * (n as f64 * c).powi(2)).exp()).sum();
    (1.0 + 2.0 * tail, 2 * n_max + 1)
}

/// `|Σ_{r∈Q} Φ(rx) − |x|_A^{−1} Σ_{q∈Q} Φ̂(qx^{−1})|`.
pub fn poisson_check(spec: &PoissonSpec, x: &Idele) -> Result<PoissonResult> {
    let a = x.adele();
    let mut primes: Vec<u64> = a.support()?;
    primes.extend(spec.shifts.keys().copied());
    primes.sort_unstable();
    primes.dedup();
    let mut lattice = BigRational::one();
    let mut dual_scale = BigRational::one();
    for p in primes {
        let k = spec.shifts.get(&p).copied().unwrap_or(0);
        let v = a.valuation_at(p).ok_or(Error::ZeroOperand { op: "poisson_check" })?;
        lattice *= p_power(p, k - v);
        // Φ̂_p = p^{−k} 1_{p^{−k}Z_p}
        dual_scale *= p_power(p, -k);
    }
    let t = a.real_part().to_f64().abs();
    if t == 0.0 {
        return Err(Error::ZeroOperand { op: "poisson_check" });
    }
    let af = rational_to_f64(&lattice);
    let (lhs, n1) = gaussian_lattice_sum(af * t);
    let (raw, n2) = gaussian_lattice_sum(1.0 / (af * t));
    let norm = adelic_abs(x)?.value();
    let rhs = rational_to_f64(&dual_scale) * raw / norm;
    Ok(PoissonResult {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        lattice: crate::arith::format_rational(&lattice),
        terms: n1 + n2,
    })
}

/// `ω = ω̲|·|_A^{−iw}` with `ω̲` of finite order: ramified local data at the
/// primes of `S_ω` and the sign `σ` at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalCharacter {
    pub w: f64,
    ramified: BTreeMap<u64, MultCharacter>,
    pub parity: Parity,
}

impl GlobalCharacter {
    pub fn trivial() -> Self {
        GlobalCharacter { w: 0.0, ramified: BTreeMap::new(), parity: Parity::Even }
    }

    /// `σ` is forced by triviality on `−1 ∈ Q^×`: `(−1)^σ Π_p χ̲_p(−1) = 1`.
    pub fn new(w: f64, ramified: Vec<MultCharacter>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut sign = RationalAngle::ZERO;
        for chi in ramified {
            if !chi.is_ramified() {
                return Err(Error::InvalidArgument(format!("the component at {} is unramified", chi.p)));
            }
            sign = sign.add(&chi.chi_minus_one());
            let chi = chi.with_s(Complex64::new(0.0, 0.0));
            if map.insert(chi.p, chi).is_some() {
                return Err(Error::InvalidArgument("two components at the same prime".into()));
            }
        }
        let parity = if sign.is_zero() { Parity::Even } else { Parity::Odd };
        Ok(GlobalCharacter { w, ramified: map, parity })
    }

    /// As [`GlobalCharacter::new`], rejecting a declared `σ` that contradicts the local data.
    pub fn with_parity(w: f64, ramified: Vec<MultCharacter>, parity: Parity) -> Result<Self> {
        let g = GlobalCharacter::new(w, ramified)?;
        if g.parity != parity {
            return Err(Error::InvalidArgument(format!(
                "σ = {} contradicts ω(−1) = 1 for the given ramified data",
                parity.sigma()
            )));
        }
        Ok(g)
    }

    pub fn ramified(&self) -> &BTreeMap<u64, MultCharacter> {
        &self.ramified
    }

    pub fn is_trivial(&self) -> bool {
        self.ramified.is_empty() && self.w == 0.0
    }

    /// `Σ_{q∈S, q≠ℓ} χ̲_q(ℓ)` as an angle.
    fn foreign_angle(&self, l: u64) -> Result<RationalAngle> {
        let mut a = RationalAngle::ZERO;
        for (&q, chi) in &self.ramified {
            if q != l {
                let m = q.pow(chi.degree());
                a = a.add(&chi.unit_angle(l % m)?);
            }
        }
        Ok(a)
    }

    /// `ω_ℓ` as a character `χ̲_ℓ|·|^{s'}`: from `ω(ℓ) = 1` on `Q^×`,
    /// `ω_ℓ(ℓ) = ℓ^{iw} Π_{q∈S, q≠ℓ} χ̲_q(ℓ)^{−1}`.
    pub fn local_component(&self, l: u64, s: Complex64) -> Result<MultCharacter> {
        require_prime(l)?;
        let theta = self.foreign_angle(l)?.to_rational();
        let shift = Complex64::new(0.0, 2.0 * PI * rational_to_f64(&theta) / (l as f64).ln() - self.w);
        let base = match self.ramified.get(&l) {
            Some(chi) => chi.clone(),
            None => MultCharacter::unramified(l, Complex64::new(0.0, 0.0))?,
        };
        Ok(base.with_s(s + shift))
    }

    /// `ω_ℓ(ℓ)` split into its exact finite-order part and `w`, for `ℓ ∉ S`.
    pub fn euler_alpha(&self, l: u64) -> Result<Option<ExactAlpha>> {
        if self.ramified.contains_key(&l) {
            return Ok(None);
        }
        Ok(Some(ExactAlpha { root: Cyclotomic::root(self.foreign_angle(l)?.neg()), w: self.w }))
    }
}

/// `α = ζ·ℓ^{iw}` with `ζ` an exact root of unity.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactAlpha {
    pub root: Cyclotomic,
    pub w: f64,
}

impl ExactAlpha {
    pub fn to_complex(&self, l: u64) -> Complex64 {
        self.root.to_complex() * (Complex64::new(0.0, self.w) * (l as f64).ln()).exp()
    }
}

/// Truncated `L(ω,s) = Π_{p≤P} L(ω_p,s) × L(ω_∞,s)`.
#[derive(Clone, Debug, Serialize)]
pub struct GlobalL {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub finite: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub archimedean: Complex64,
    pub prime_bound: u64,
    pub primes: usize,
    /// Bound on `|value − limit|` from the omitted primes.
    pub truncation_bound: f64,
}

const EULER_CHUNK: usize = 4096;

pub fn global_l(omega: &GlobalCharacter, s: Complex64, prime_bound: u64) -> Result<GlobalL> {
    if s.re <= 1.0 {
        return Err(Error::Divergent(format!("the Euler product needs Re(s) > 1, got {}", s.re)));
    }
    let primes = primes_up_to(prime_bound);
    let trivial_unit = omega.ramified.is_empty();
    let factor = |l: u64| -> Result<Complex64> {
        if omega.ramified.contains_key(&l) {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let lf = l as f64;
        let mut z = (-(s - Complex64::new(0.0, omega.w)) * lf.ln()).exp();
        if !trivial_unit {
            z *= omega.foreign_angle(l)?.neg().to_complex();
        }
        Ok(1.0 / (1.0 - z))
    };
    // fixed chunks, multiplied left to right: the result does not depend on the thread count
    let chunks: Vec<Result<Complex64>> = primes
        .par_chunks(EULER_CHUNK)
        .map(|c| c.iter().try_fold(Complex64::new(1.0, 0.0), |acc, &l| Ok(acc * factor(l)?)))
        .collect();
    let mut finite = Complex64::new(1.0, 0.0);
    for c in chunks {
        finite *= c?;
    }
    let archimedean = l_arch(omega.parity, omega.w, s)?;
    let value = finite * archimedean;
    let sigma = s.re;
    let pb = prime_bound.max(1) as f64;
    let log_tail = pb.powf(1.0 - sigma) / ((sigma - 1.0) * (1.0 - pb.powf(-sigma)));
    Ok(GlobalL {
        value,
        finite,
        archimedean,
        prime_bound,
        primes: primes.len(),
        truncation_bound: value.norm() * log_tail.exp_m1(),
    })
}

/// `ε(ω,s) = Π_{p∈S_ω} ε(ω_p,s)`.
pub fn global_epsilon(omega: &GlobalCharacter, s: Complex64) -> Result<Complex64> {
    let mut e = Complex64::new(1.0, 0.0);
    for &p in omega.ramified.keys() {
        e *= epsilon(&omega.local_component(p, s)?)?;
    }
    Ok(e)
}

/// The Euler-product route and the theta-integral route to `Λ(s)` for `ω` trivial.
#[derive(Clone, Debug, Serialize)]
pub struct TwoRouteZeta {
    #[serde(serialize_with = "ser_complex")]
    pub euler: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub theta: Complex64,
    pub difference: f64,
    pub truncation_bound: f64,
}

pub fn two_route_zeta(s: Complex64, prime_bound: u64) -> Result<TwoRouteZeta> {
    let l = global_l(&GlobalCharacter::trivial(), s, prime_bound)?;
    let t = completed_zeta(s)?;
    Ok(TwoRouteZeta { euler: l.value, theta: t, difference: (l.value - t).norm(), truncation_bound: l.truncation_bound })
}

/// Local Euler factor `1 − α X` (`X = p^{−s}`), or `1` at a ramified prime.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerFactor {
    pub p: u64,
    pub alpha: Option<ExactAlpha>,
}

impl EulerFactor {
    pub fn eval_inverse(&self, s: Complex64) -> Complex64 {
        match &self.alpha {
            None => Complex64::new(1.0, 0.0),
            Some(a) => 1.0 - a.to_complex(self.p) * (-s * (self.p as f64).ln()).exp(),
        }
    }
}

/// `Π_{p∈S} L(ω₂,p)/L(ω₁,p) = Π (1 − α₁X_p)/(1 − α₂X_p)` with exact cancellation:
/// `remaining` lists the factor pairs that did not cancel.
#[derive(Clone, Debug)]
pub struct FactorRatio {
    pub cancelled: Vec<u64>,
    pub remaining: Vec<(EulerFactor, EulerFactor)>,
}

impl FactorRatio {
    pub fn is_identically_one(&self) -> bool {
        self.remaining.is_empty()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.remaining
            .iter()
            .map(|(n, d)| n.eval_inverse(s) / d.eval_inverse(s))
            .product()
    }
}

pub fn euler_factor_ratio(w1: &GlobalCharacter, w2: &GlobalCharacter, primes: &[u64]) -> Result<FactorRatio> {
    let mut cancelled = Vec::new();
    let mut remaining = Vec::new();
    for &p in primes {
        let a = EulerFactor { p, alpha: w1.euler_alpha(p)? };
        let b = EulerFactor { p, alpha: w2.euler_alpha(p)? };
        // 1 − αX as a polynomial in X: equal iff the α agree exactly
        if a == b {
            cancelled.push(p);
        } else {
            remaining.push((a, b));
        }
    }
    Ok(FactorRatio { cancelled, remaining })
}

/// `ω` trivial against itself: the ratio `Π (1 − p^{−s})/(1 − α_p p^{−s})` with `α_p = 1`.
pub fn rigidity_check(omega: &GlobalCharacter, primes: &[u64]) -> Result<FactorRatio> {
    euler_factor_ratio(omega, omega, primes)
}
