//! Exact combinatorial counting helpers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Exact, unbounded nonnegative count.
pub type BigCount = BigUint;

pub fn factorial(n: usize) -> BigCount {
    falling_factorial(n, n)
}

/// `n * (n - 1) * ... * (n - k + 1)`; zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    (n - k + 1..=n).fold(BigCount::one(), |acc, x| acc * BigCount::from(x))
}

/// Binomial coefficient `n choose k`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    // each prefix product is itself a binomial, so the division is exact
    let mut acc = BigCount::one();
    for i in 0..k {
        acc *= BigCount::from(n - i);
        acc /= BigCount::from(i + 1);
    }
    acc
}

/// `numerator / denominator` as a float, robust to denominators far beyond
/// `f64::MAX`. Returns `None` for a zero denominator.
pub fn ratio(numerator: &BigCount, denominator: &BigCount) -> Option<f64> {
    if denominator.is_zero() {
        return None;
    }
    let shift = denominator.bits().saturating_sub(960);
    let d = (denominator >> shift).to_f64()?;
    let n = (numerator >> shift).to_f64()?;
    Some(n / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(0), BigCount::from(1u32));
        assert_eq!(factorial(5), BigCount::from(120u32));
        assert_eq!(falling_factorial(16, 8), BigCount::from(518_918_400u64));
        assert_eq!(falling_factorial(3, 4), BigCount::zero());
        assert_eq!(binomial(4, 2), BigCount::from(6u32));
        assert_eq!(binomial(10, 0), BigCount::from(1u32));
        assert_eq!(binomial(2, 3), BigCount::zero());
    }

    #[test]
    fn binomial_matches_pascal() {
        let mut row = vec![BigCount::one()];
        for n in 1..40 {
            let mut next = vec![BigCount::one(); n + 1];
            for k in 1..n {
                next[k] = &row[k - 1] + &row[k];
            }
            for (k, v) in next.iter().enumerate() {
                assert_eq!(&binomial(n, k), v);
            }
            row = next;
        }
    }

    #[test]
    fn ratio_of_huge_counts() {
        let big = factorial(300);
        assert_eq!(ratio(&big, &big), Some(1.0));
        let r = ratio(&BigCount::from(2u32), &big).unwrap();
        assert!((0.0..1e-300).contains(&r));
        assert_eq!(ratio(&BigCount::one(), &BigCount::zero()), None);
    }
}
