use num_complex::Complex64;
use proptest::prelude::*;

use tate_core::angle::RationalAngle;
use tate_core::arith::primes_up_to;
use tate_core::characters::MultCharacter;
use tate_core::finite_field::{rec_q, FiniteField};
use tate_core::global::{completed_zeta, rigidity_check, theta, GlobalCharacter};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_inversion(x in 0.05f64..20.0) {
        let lhs = theta(1.0 / x).unwrap();
        let rhs = x.sqrt() * theta(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0));
    }

    #[test]
    fn lambda_symmetry(re in -3.0f64..4.0, im in 0.3f64..25.0) {
        let s = Complex64::new(re, im);
        let a = completed_zeta(s).unwrap();
        let b = completed_zeta(1.0 - s).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-3), "{} vs {}", a, b);
    }

    #[test]
    fn rigidity_for_random_ramification(
        w in -3.0f64..3.0,
        picks in prop::collection::btree_map(0usize..4, 1u64..1000, 1..3),
    ) {
        // one ramified character per chosen prime, of conductor exponent ≤ 2
        let mut ramified = Vec::new();
        for (pi, k) in picks {
            let p = [3u64, 5, 7, 11][pi];
            let order = p * (p - 1);
            ramified.push(MultCharacter::odd(p, ZERO, RationalAngle::new((k % order).max(1) as i128, order)).unwrap());
        }
        let omega = GlobalCharacter::new(w, ramified).unwrap();
        let r = rigidity_check(&omega, &primes_up_to(300)).unwrap();
        prop_assert!(r.is_identically_one());
    }

    #[test]
    fn trace_linear_norm_multiplicative(pi in 0usize..3, a in any::<u64>(), b in any::<u64>(), c in 0u64..5) {
        // F_{p^4} over F_{p^2}
        let p = [2u64, 3, 5][pi];
        let field = FiniteField::new(p, 4).unwrap();
        let x = field.element(a % field.size());
        let y = field.element(b % field.size());
        let sum = field.add(&x, &y);
        let scalar = field.element(c % p);
        prop_assert_eq!(
            field.trace(&field.add(&field.mul(&scalar, &x), &y), 2).unwrap(),
            field.add(&field.mul(&scalar, &field.trace(&x, 2).unwrap()), &field.trace(&y, 2).unwrap())
        );
        prop_assert_eq!(field.trace(&sum, 2).unwrap(), field.trace_by_powers(&sum, 2).unwrap());
        let prod = field.mul(&x, &y);
        prop_assert_eq!(
            field.norm(&prod, 2).unwrap(),
            field.mul(&field.norm(&x, 2).unwrap(), &field.norm(&y, 2).unwrap())
        );
        prop_assert_eq!(field.norm(&prod, 2).unwrap(), field.norm_by_conjugates(&prod, 2).unwrap());
    }

    #[test]
    fn reciprocity_is_a_compatible_homomorphism(j in -500i64..500, k in -500i64..500, ni in 0usize..4) {
        let n = [4u32, 6, 8, 12][ni];
        let sum = rec_q(j, n).unwrap().compose(&rec_q(k, n).unwrap()).unwrap();
        prop_assert_eq!(sum, rec_q(j + k, n).unwrap());
        for m in (1..=n).filter(|m| n % m == 0) {
            prop_assert_eq!(sum.restrict(m).unwrap(), rec_q(j + k, m).unwrap());
        }
    }
}
