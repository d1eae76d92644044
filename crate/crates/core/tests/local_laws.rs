use num_complex::Complex64;
use proptest::prelude::*;

use tate_core::angle::RationalAngle;
use tate_core::bruhat::random::TermSampler;
use tate_core::bruhat::BruhatFunction;
use tate_core::characters::MultCharacter;
use tate_core::local_zeta::{epsilon, functional_equation_check, gauss_sum, local_zeta, UnitaryCharacter};

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn character(pi: usize, idx: usize, re: f64, im: f64) -> MultCharacter {
    let p = PRIMES[pi];
    let s = Complex64::new(re, im);
    let all = if p == 2 {
        // χ̲(−1) = e^{2πiβ}, χ̲(5) = e^{2πiγ}
        let mut v = Vec::new();
        for b in 0..2 {
            for g in 0..4 {
                v.push(MultCharacter::dyadic(s, RationalAngle::new(b, 2), RationalAngle::new(g, 4)).unwrap());
            }
        }
        v
    } else {
        MultCharacter::all_of_degree_at_most(p, 2, s).unwrap()
    };
    all[idx % all.len()]
}

fn function(p: u64, seed: u64) -> BruhatFunction {
    BruhatFunction::new(p, TermSampler::new(seed).twisted(true).terms(p, 4, -2, 2)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn epsilon_duality_and_conjugation(pi in 0usize..4, idx in 0usize..64, re in 0.05f64..0.95, im in -6.0f64..6.0) {
        let chi = character(pi, idx, re, im);
        let sign = chi.chi_minus_one().to_complex();
        let e = epsilon(&chi).unwrap();
        let dual = epsilon(&chi.dual()).unwrap();
        prop_assert!((e * dual - sign).norm() < 1e-10, "ε(χ)ε(χ̌) = {}", e * dual);
        // χ̄ has conjugated unit part and exponent s̄
        let bar = chi.conj().with_s(chi.s.conj());
        prop_assert!((epsilon(&bar).unwrap() - sign * e.conj()).norm() < 1e-10);
        if chi.is_ramified() {
            let tau = gauss_sum(&chi).unwrap().value;
            let tau_bar = gauss_sum(&chi.conj()).unwrap().value;
            prop_assert!((tau_bar - sign * tau.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn functional_equation(
        pi in 0usize..4, idx in 0usize..64, re in 0.1f64..0.9, im in -4.0f64..4.0,
        s1 in any::<u64>(), s2 in any::<u64>(),
    ) {
        let chi = character(pi, idx, re, im);
        let p = chi.p;
        let (f, g) = (function(p, s1), function(p, s2));
        let r = functional_equation_check(&f, &g, &chi).unwrap();
        let zf = local_zeta(&f, &chi).unwrap().norm();
        let zg = local_zeta(&g, &chi).unwrap().norm();
        let zfh = local_zeta(&f.fourier().unwrap(), &chi.dual()).unwrap().norm();
        let zgh = local_zeta(&g.fourier().unwrap(), &chi.dual()).unwrap().norm();
        let scale = (zf * zgh).max(zfh * zg).max(1.0);
        prop_assert!(r.cross <= 1e-9 * scale, "cross residual {} at scale {}", r.cross, scale);
        prop_assert!(r.rho <= 1e-9 * zf.max(zfh).max(1.0), "ρ residual {}", r.rho);
    }

    #[test]
    fn unitary_split_round_trips(pi in 0usize..4, idx in 0usize..64, re in -2.0f64..2.0, im in -6.0f64..6.0) {
        let chi = character(pi, idx, re, im);
        let (omega, s) = UnitaryCharacter::split(&chi);
        let back = omega.at(Complex64::new(s, 0.0));
        prop_assert_eq!(back.s, chi.s);
        prop_assert_eq!(back.degree(), chi.degree());
        prop_assert_eq!(back.chi_minus_one(), chi.chi_minus_one());
        prop_assert!((omega.at_uniformizer() * (-(s) * (chi.p as f64).ln()).exp() - chi.at_uniformizer()).norm() < 1e-12);
        if chi.is_ramified() {
            prop_assert!((omega.epsilon(Complex64::new(s, 0.0)).unwrap() - epsilon(&chi).unwrap()).norm() < 1e-12);
        }
    }
}
