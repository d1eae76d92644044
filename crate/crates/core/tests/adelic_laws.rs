use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use tate_core::adele::{
    adelic_abs, fundamental_domain_reduce, idele_unit_decomposition, scaled_domain_volume, Adele, Idele, RealPart,
};
use tate_core::arith::rational_to_f64;
use tate_core::PadicNumber;

const PREC: u32 = 16;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A diagonal rational, up to two overridden components at small primes,
/// and optionally a free real component.
fn adele(nonzero: bool) -> impl Strategy<Value = Adele> {
    let lo = if nonzero { 1 } else { 0 };
    (
        (-5000i64..5000).prop_filter("sign", move |n| !nonzero || *n != 0),
        1i64..3000,
        prop::collection::vec((0usize..4, lo..2000i64, 1i64..500), 0..3),
        prop::option::of(-40.0f64..40.0),
    )
        .prop_map(move |(n, d, overrides, real)| {
            let mut x = Adele::diagonal(q(n, d));
            for (pi, a, b) in overrides {
                let p = [2u64, 3, 5, 7][pi];
                x = x.with_override(PadicNumber::from_ratio(&q(a, b), p, PREC).unwrap()).unwrap();
            }
            match real {
                Some(t) if !nonzero || t != 0.0 => x.with_real(t),
                _ => x,
            }
        })
}

fn real_value(x: &Adele) -> f64 {
    match x.real_part() {
        RealPart::Exact(r) => rational_to_f64(&r),
        RealPart::Float(t) => t,
    }
}

proptest! {
    #[test]
    fn fundamental_domain_partition(x in adele(false)) {
        let (d, r) = fundamental_domain_reduce(&x).unwrap();
        prop_assert!(d.in_fundamental_domain().unwrap());
        let (d2, r2) = fundamental_domain_reduce(&d).unwrap();
        prop_assert_eq!(&d2, &d);
        prop_assert!(r2.is_zero());
        for p in x.support().unwrap() {
            let back = match PadicNumber::from_ratio(&r, p, PREC + 8) {
                Ok(rp) => d.component(p).unwrap().add(&rp).unwrap(),
                Err(_) => d.component(p).unwrap(),
            };
            prop_assert!(back.agrees_with(&x.component(p).unwrap()), "p = {}", p);
        }
        let t = real_value(&x);
        prop_assert!((real_value(&d) + rational_to_f64(&r) - t).abs() <= 1e-12 * t.abs().max(1.0));
    }

    #[test]
    fn domain_volume_is_the_adelic_norm(x in adele(true)) {
        let x = Idele::new(x).unwrap();
        let a = adelic_abs(&x).unwrap();
        let b = scaled_domain_volume(&x).unwrap();
        prop_assert_eq!(a.finite, b.finite);
        prop_assert_eq!(a.real, b.real);
    }

    #[test]
    fn integral_ideles_land_in_one_unit_coset(
        n in 1i64..100_000,
        units in prop::collection::vec((0usize..4, 1i64..500, 1i64..500), 0..3),
    ) {
        // n·u with u_p ∈ Z_p^× at the overridden primes
        let mut x = Adele::diagonal(q(n, 1));
        let expected = q(n, 1);
        for (pi, a, b) in units {
            let p = [2u64, 3, 5, 7][pi];
            if a % p as i64 == 0 || b % p as i64 == 0 || x.overrides().contains_key(&p) {
                continue;
            }
            let mut k = 0;
            let mut m = n;
            while m % p as i64 == 0 {
                m /= p as i64;
                k += 1;
            }
            let unit = PadicNumber::from_ratio(&q(a, b), p, PREC).unwrap();
            let scale = PadicNumber::from_integer(num_bigint::BigInt::from(p).pow(k), p, PREC).unwrap();
            x = x.with_override(unit.mul(&scale).unwrap()).unwrap();
        }
        let x = Idele::new(x).unwrap();
        let (m, u) = idele_unit_decomposition(&x).unwrap();
        prop_assert_eq!(&m, &expected);
        prop_assert!(m.is_integer() && m >= BigRational::one());
        for p in u.adele().support().unwrap() {
            prop_assert_eq!(u.adele().valuation_at(p), Some(0), "p = {}", p);
        }
    }
}
