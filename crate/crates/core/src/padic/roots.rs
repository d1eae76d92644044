//! Square roots by Hensel lifting and Teichmüller representatives.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::PadicNumber;
use crate::arith::{big_inv_mod, big_pow, legendre, mul_mod, pow_mod, primitive_root, require_prime};
use crate::error::{Error, Result};

/// Tonelli-Shanks: a square root of the residue `a` modulo the odd prime `p`.
fn sqrt_mod_p(a: u64, p: u64) -> u64 {
    let a = a % p;
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z as i64, p) == -1).expect("odd prime");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// A square root of `x`, or `None` when `x` is not a square in `Q_p`.
///
/// For odd `p` the root has the relative precision of `x`. For `p = 2` one
/// digit is lost (`r` is only determined modulo `2^{N-1}` by `r² mod 2^N`) and
/// at least three digits of the unit part are needed to decide.
pub fn hensel_sqrt(x: &PadicNumber) -> Result<Option<PadicNumber>> {
    if x.is_zero() {
        return Err(Error::ZeroOperand { op: "hensel_sqrt" });
    }
    let p = x.prime();
    let v = x.valuation()?;
    if v.rem_euclid(2) == 1 {
        return Ok(None);
    }
    let n = x.precision();
    let u = BigInt::from(x.unit_integer()?.clone());
    if p == 2 {
        if n < 3 {
            return Err(Error::InsufficientPrecision { op: "hensel_sqrt", needed: 3, have: n as i64 });
        }
        let u8 = (&u % 8u32).to_u64_digits().1.first().copied().unwrap_or(0);
        if u8 != 1 {
            return Ok(None);
        }
        // r² ≡ u mod 2^k for k = 3, then fix one bit per step
        let mut r = BigInt::one();
        for k in 3..n {
            let m = BigInt::from(big_pow(2, k + 1));
            if (&r * &r - &u).mod_floor(&m) != BigInt::zero() {
                r += BigInt::from(big_pow(2, k - 1));
            }
        }
        let prec = n - 1;
        let r = r.mod_floor(&BigInt::from(big_pow(2, prec)));
        return Ok(Some(PadicNumber::from_unit(
            2,
            v / 2,
            r.to_biguint().expect("nonnegative"),
            prec,
        )));
    }
    let u0 = (&u % p).to_u64_digits().1.first().copied().unwrap_or(0);
    if legendre(u0 as i64, p) != 1 {
        return Ok(None);
    }
    let mut r = BigInt::from(sqrt_mod_p(u0, p));
    let mut k = 1u32;
    while k < n {
        k = (2 * k).min(n);
        let m = BigInt::from(big_pow(p, k));
        let inv = big_inv_mod(&(2 * &r), &m).expect("2r is a unit");
        r = (&r - (&r * &r - &u) * inv).mod_floor(&m);
    }
    Ok(Some(PadicNumber::from_unit(p, v / 2, r.to_biguint().expect("nonnegative"), n)))
}

/// The Teichmüller lift of the smallest primitive root `g` mod `p`, computed
/// as `g^{p^{N-1}} mod p^N`.
pub fn teichmuller(p: u64, prec: u32) -> Result<PadicNumber> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::UnsupportedPrime { p, op: "teichmuller" });
    }
    if prec == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    teichmuller_of(primitive_root(p), p, prec)
}

/// The unique `(p-1)`-st root of unity congruent to `a` mod `p`.
pub fn teichmuller_of(a: u64, p: u64, prec: u32) -> Result<PadicNumber> {
    require_prime(p)?;
    if p == 2 || a % p == 0 {
        return Err(Error::InvalidArgument(format!("no Teichmüller lift of {a} mod {p}")));
    }
    let m = big_pow(p, prec);
    let z = BigUint::from(a).modpow(&big_pow(p, prec - 1), &m);
    PadicNumber::from_integer(BigInt::from(z), p, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qp(n: i64, p: u64, prec: u32) -> PadicNumber {
        PadicNumber::from_rational(n, 1, p, prec).unwrap()
    }

    #[test]
    fn squares_in_q5() {
        let r = hensel_sqrt(&qp(6, 5, 20)).unwrap().unwrap();
        assert!(r.mul(&r).unwrap().agrees_with(&qp(6, 5, 20)));
        assert!(hensel_sqrt(&qp(2, 5, 20)).unwrap().is_none());
        assert!(hensel_sqrt(&qp(3, 5, 20)).unwrap().is_none());
        let i = hensel_sqrt(&qp(-1, 5, 20)).unwrap().unwrap();
        assert!(i.mul(&i).unwrap().agrees_with(&qp(-1, 5, 20)));
        assert!(hensel_sqrt(&qp(5, 5, 20)).unwrap().is_none());
        let r = hensel_sqrt(&qp(25 * 6, 5, 20)).unwrap().unwrap();
        assert_eq!(r.valuation().unwrap(), 1);
    }

    #[test]
    fn dyadic_roots() {
        let r = hensel_sqrt(&qp(17, 2, 20)).unwrap().unwrap();
        assert_eq!(r.precision(), 19);
        assert!(r.mul(&r).unwrap().agrees_with(&qp(17, 2, 20)));
        assert!(hensel_sqrt(&qp(-7, 2, 30)).unwrap().is_some());
        for bad in [3, 5, 7, -1, 2, 6] {
            assert!(hensel_sqrt(&qp(bad, 2, 20)).unwrap().is_none(), "{bad}");
        }
        assert!(hensel_sqrt(&qp(1, 2, 2)).is_err());
    }

    #[test]
    fn minus_one_square_iff_1_mod_4() {
        for p in [3u64, 5, 7, 11, 13] {
            let sq = hensel_sqrt(&qp(-1, p, 10)).unwrap().is_some();
            assert_eq!(sq, p % 4 == 1, "p={p}");
        }
    }

    #[test]
    fn teichmuller_lifts() {
        for (p, g) in [(3u64, 2u64), (5, 2), (7, 3), (11, 2), (13, 2)] {
            let z = teichmuller(p, 15).unwrap();
            assert_eq!(z.residue_mod(1).unwrap(), BigUint::from(g));
            assert!(z.pow(p - 1).unwrap().agrees_with(&PadicNumber::one(p, 15)));
            for k in 1..p - 1 {
                assert!(!z.pow(k).unwrap().agrees_with(&PadicNumber::one(p, 15)));
            }
        }
        assert!(teichmuller(3, 10).unwrap().agrees_with(&qp(-1, 3, 10)));
        assert!(matches!(teichmuller(2, 5), Err(Error::UnsupportedPrime { .. })));
    }

    proptest! {
        #[test]
        fn root_squares_back(n in 1i64..1_000_000, pi in 0usize..5, prec in 4u32..25) {
            let p = [2u64, 3, 5, 7, 11][pi];
            let x = qp(n, p, prec);
            let sq = x.mul(&x).unwrap();
            let r = hensel_sqrt(&sq).unwrap().expect("square of something");
            prop_assert!(r.mul(&r).unwrap().agrees_with(&sq));
            if let Some(r) = hensel_sqrt(&x).unwrap() {
                prop_assert!(r.mul(&r).unwrap().agrees_with(&x));
            }
        }
    }
}
