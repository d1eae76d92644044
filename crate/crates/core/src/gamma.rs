//! Complex Gamma function and the archimedean local factors.
//!
//! `Γ` uses the Lanczos approximation with `g = 607/128` and 15 coefficients,
//! and reflection `Γ(z)Γ(1−z) = π/sin(πz)` for `Re(z) < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// Distance below which an argument counts as sitting on a pole of `Γ`.
pub const POLE_TOL: f64 = 1e-12;

fn check_pole(z: Complex64) -> Result<()> {
    if z.re <= POLE_TOL {
        let k = z.re.round();
        if (z - Complex64::new(k, 0.0)).norm() < POLE_TOL {
            return Err(Error::PoleProximity { location: format!("{k}") });
        }
    }
    Ok(())
}

/// `log Γ(z)` for `Re(z) ≥ 1/2` (principal branch of the Lanczos form).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += *c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// `Γ(z)`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.5 {
        // Γ(z) = π / (sin(πz) Γ(1−z))
        let s = (PI * z).sin();
        return Ok(PI / (s * ln_gamma_right(1.0 - z).exp()));
    }
    Ok(ln_gamma_right(z).exp())
}

/// `Γ(x)` for real `x`.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(gamma(Complex64::new(x, 0.0))?.re)
}

/// `log Γ(z)` for `Re(z) ≥ 1/2`, up to a multiple of `2πi`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.5 {
        let g = gamma(z)?;
        return Ok(g.ln());
    }
    Ok(ln_gamma_right(z))
}

/// `Γ_R(s) = π^{−s/2} Γ(s/2)`.
pub fn gamma_r(s: Complex64) -> Result<Complex64> {
    Ok((-s / 2.0 * PI.ln()).exp() * gamma(s / 2.0)?)
}

/// `Γ_C(s) = (2π)^{1−s} Γ(s)`.
pub fn gamma_c(s: Complex64) -> Result<Complex64> {
    Ok(((1.0 - s) * (2.0 * PI).ln()).exp() * gamma(s)?)
}

/// Parity of a character of `R^×`: `ω(x) = sgn(x)^σ |x|^{−iw}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_sigma(sigma: u8) -> Result<Parity> {
        match sigma {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            _ => Err(Error::InvalidArgument(format!("σ must be 0 or 1, got {sigma}"))),
        }
    }

    pub fn sigma(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// `L(ω_∞, s)`: `Γ_R(s − iw)` for σ = 0, `Γ_R(s − iw + 1)` for σ = 1.
pub fn l_arch(parity: Parity, w: f64, s: Complex64) -> Result<Complex64> {
    let z = s - Complex64::new(0.0, w) + parity.sigma() as f64;
    gamma_r(z)
}

/// `ρ(ω_∞, s) = Z(f,ω,s)/Z(f̂,ω̄,1−s)`:
/// `L(ω,s)/L(ω̄,1−s)` for σ = 0 and `−i·L(ω,s)/L(ω̄,1−s)` for σ = 1.
pub fn rho_arch(parity: Parity, w: f64, s: Complex64) -> Result<Complex64> {
    let num = l_arch(parity, w, s)?;
    let den = l_arch(parity, -w, 1.0 - s)?;
    let q = num / den;
    Ok(match parity {
        Parity::Even => q,
        Parity::Odd => Complex64::new(0.0, -1.0) * q,
    })
}

/// `2^{1−s} π^{−s} cos(πs/2) Γ(s)` (σ = 0) or `−i·2^{1−s} π^{−s} sin(πs/2) Γ(s)` (σ = 1),
/// the duplication-formula form of `ρ(|·|^s sgn^σ)`.
pub fn rho_arch_closed(parity: Parity, s: Complex64) -> Result<Complex64> {
    let base = ((1.0 - s) * 2f64.ln() - s * PI.ln()).exp() * gamma(s)?;
    Ok(match parity {
        Parity::Even => base * (PI * s / 2.0).cos(),
        Parity::Odd => Complex64::new(0.0, -1.0) * base * (PI * s / 2.0).sin(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma as sr_gamma;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    /// Stirling series after shifting the argument past 20, as an independent route.
    fn stirling(z: Complex64) -> Complex64 {
        let mut z = z;
        let mut shift = Complex64::new(1.0, 0.0);
        while z.norm() < 20.0 || z.re < 10.0 {
            shift *= z;
            z += 1.0;
        }
        let b = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0];
        let mut series = Complex64::new(0.0, 0.0);
        let mut zp = z;
        for bk in b {
            series += bk / zp;
            zp *= z * z;
        }
        let lg = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series;
        lg.exp() / shift
    }

    #[test]
    fn real_axis_matches_statrs() {
        for k in 0..200 {
            let x = -9.95 + 0.1 * k as f64;
            if (x - x.round()).abs() < 1e-9 && x <= 0.0 {
                continue;
            }
            let ours = gamma_real(x).unwrap();
            let theirs = sr_gamma(x);
            assert!(((ours - theirs) / theirs).abs() < 1e-13, "x={x}: {ours} vs {theirs}");
        }
    }

    #[test]
    fn complex_matches_stirling_route() {
        for &(re, im) in &[(0.3, 0.7), (2.5, -3.0), (-4.2, 1.1), (7.0, 9.0), (-9.5, -0.3), (0.5, 14.0), (0.2, 1.0)] {
            let z = c(re, im);
            let r = rel(gamma(z).unwrap(), stirling(z));
            assert!(r < 1e-13, "z={z}: rel {r}");
        }
    }

    #[test]
    fn recurrence_and_special_values() {
        let z = c(1.3, 2.2);
        assert!(rel(gamma(z + 1.0).unwrap(), z * gamma(z).unwrap()) < 1e-14);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-15);
        assert!(rel(gamma(c(6.0, 0.0)).unwrap(), c(120.0, 0.0)) < 1e-14);
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(gamma(c(0.0, 0.0)), Err(Error::PoleProximity { .. })));
        assert!(matches!(gamma(c(-3.0, 0.0)), Err(Error::PoleProximity { .. })));
        assert!(gamma(c(-3.0, 1e-6)).is_ok());
    }

    #[test]
    fn archimedean_reflection_both_parities() {
        for &(re, im) in &[(0.3, 0.7), (0.25, -2.0), (1.7, 0.4), (-0.6, 3.3)] {
            let s = c(re, im);
            for parity in [Parity::Even, Parity::Odd] {
                let a = rho_arch(parity, 0.0, s).unwrap();
                let b = rho_arch_closed(parity, s).unwrap();
                assert!(rel(a, b) < 1e-12, "{parity:?} s={s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn gamma_c_at_integers() {
        // Γ_C(1) = Γ(1) = 1, Γ_C(2) = (2π)^{−1}
        assert!(rel(gamma_c(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-15);
        assert!(rel(gamma_c(c(2.0, 0.0)).unwrap(), c(1.0 / (2.0 * PI), 0.0)) < 1e-14);
    }

    #[test]
    fn w_shift_is_a_translation() {
        let s = c(0.4, 0.2);
        let w = 1.5;
        let a = rho_arch(Parity::Even, w, s).unwrap();
        let b = rho_arch(Parity::Even, 0.0, s - c(0.0, w)).unwrap();
        assert!(rel(a, b) < 1e-14);
    }
}
