//! Summation of p-adically convergent series.

use super::PadicNumber;
use crate::arith::require_prime;
use crate::error::{Error, Result};

/// Default term budget is this factor times the target precision.
pub const DEFAULT_BUDGET_FACTOR: usize = 10;

/// A series `Σ_{n≥0} a_n` in `Q_p`.
pub trait PadicSeries {
    /// The term `a_n`, known to at least the absolute precision the caller
    /// asks for.
    fn term(&self, n: usize, abs_prec: i64) -> Result<PadicNumber>;

    /// A lower bound on `v(a_m)` valid for every `m ≥ n`. `i64::MAX` means
    /// all remaining terms vanish.
    fn tail_valuation_bound(&self, n: usize) -> i64;
}

/// A series given by two closures.
pub struct FnSeries<T, B> {
    pub term: T,
    pub bound: B,
}

impl<T, B> PadicSeries for FnSeries<T, B>
where
    T: Fn(usize, i64) -> Result<PadicNumber>,
    B: Fn(usize) -> i64,
{
    fn term(&self, n: usize, abs_prec: i64) -> Result<PadicNumber> {
        (self.term)(n, abs_prec)
    }

    fn tail_valuation_bound(&self, n: usize) -> i64 {
        (self.bound)(n)
    }
}

/// Sums terms until the certified tail valuation reaches `target`, returning
/// the sum modulo `p^target` and the number of terms used.
pub fn series_sum<S: PadicSeries + ?Sized>(
    series: &S,
    p: u64,
    target: i64,
    budget: Option<usize>,
) -> Result<(PadicNumber, usize)> {
    require_prime(p)?;
    let budget = budget.unwrap_or(DEFAULT_BUDGET_FACTOR * target.max(1) as usize);
    let mut sum = PadicNumber::zero(p, target);
    let mut n = 0usize;
    while series.tail_valuation_bound(n) < target {
        if n >= budget {
            return Err(Error::NonConvergent { budget });
        }
        let t = series.term(n, target)?;
        if t.prime() != p {
            return Err(Error::PrimeMismatch { left: p, right: t.prime() });
        }
        sum = sum.add(&t)?;
        n += 1;
    }
    if sum.absolute_precision() < target {
        return Err(Error::InsufficientPrecision {
            op: "series_sum",
            needed: target,
            have: sum.absolute_precision(),
        });
    }
    Ok((sum.with_absolute_precision(target), n))
}

/// `v_p(n!) = Σ_k ⌊n/p^k⌋`.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        total += q;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn factorial(n: usize) -> BigInt {
        (1..=n).fold(BigInt::from(1), |a, k| a * k)
    }

    #[test]
    fn factorial_valuations() {
        assert_eq!(factorial_valuation(10, 5), 2);
        assert_eq!(factorial_valuation(0, 7), 0);
        // oracle: strip factors of 3 from 100! directly
        let mut f = factorial(100);
        let mut k = 0;
        while &f % 3 == BigInt::from(0) {
            f /= 3;
            k += 1;
        }
        assert_eq!(factorial_valuation(100, 3), k);
    }

    #[test]
    fn geometric_series() {
        for p in [2u64, 3, 5, 7] {
            let s = FnSeries {
                term: |n: usize, abs: i64| {
                    PadicNumber::from_integer(BigInt::from(p).pow(n as u32), p, (abs - n as i64).max(1) as u32)
                },
                bound: |n: usize| n as i64,
            };
            let (sum, used) = series_sum(&s, p, 25, None).unwrap();
            assert_eq!(used, 25);
            let expect = BigRational::new(1.into(), (1 - p as i64).into());
            assert!(sum.agrees_with_rational(&expect));
            assert_eq!(sum.absolute_precision(), 25);
        }
    }

    #[test]
    fn n_times_factorial_sums_to_minus_one() {
        let p = 2;
        let s = FnSeries {
            term: |n: usize, abs: i64| {
                let t = BigInt::from(n) * factorial(n);
                if n == 0 {
                    Ok(PadicNumber::zero(p, abs))
                } else {
                    PadicNumber::from_integer(t, p, abs.max(1) as u32)
                }
            },
            bound: |n: usize| factorial_valuation(n as u64, p) as i64,
        };
        let (sum, used) = series_sum(&s, p, 30, None).unwrap();
        assert!(sum.agrees_with_rational(&BigRational::from_integer((-1).into())));
        assert_eq!(used, 32);
    }

    #[test]
    fn zero_series_and_budget() {
        let zero = FnSeries {
            term: |_: usize, abs: i64| Ok(PadicNumber::zero(5, abs)),
            bound: |n: usize| if n == 0 { 0 } else { i64::MAX },
        };
        let (s, _) = series_sum(&zero, 5, 10, None).unwrap();
        assert!(s.is_zero());
        let stuck = FnSeries {
            term: |_: usize, _: i64| PadicNumber::from_integer(1, 5, 10),
            bound: |_: usize| 0,
        };
        assert!(matches!(series_sum(&stuck, 5, 10, None), Err(Error::NonConvergent { budget: 100 })));
    }
}
