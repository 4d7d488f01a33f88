//! Factorials, reciprocal factorials, and binomial coefficients.
//!
//! The coefficient formulas expand into factorials whose arguments can run
//! negative at the edges of their index ranges; such terms vanish. That
//! convention lives in exactly one place: [`recip_factorial`] returns zero
//! for a negative argument, and every formula divides by factorials through
//! it rather than handling its own edge cases.

use std::cell::RefCell;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;

thread_local! {
    // Memoized 0!, 1!, 2!, ... — the verification grids recompute the same
    // factorials millions of times.
    static TABLE: RefCell<Vec<BigInt>> = RefCell::new(vec![BigInt::one()]);
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let n = n as usize;
    TABLE.with(|table| {
        let mut table = table.borrow_mut();
        while table.len() <= n {
            let next = table.last().unwrap() * table.len();
            table.push(next);
        }
        table[n].clone()
    })
}

/// 1/n! as a rational, with 1/n! = 0 whenever n < 0.
pub fn recip_factorial(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::one(), factorial(n as u64))
    }
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn small_factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(10), BigInt::from(3628800));
    }

    #[test]
    fn reciprocal_of_negative_factorial_vanishes() {
        assert_eq!(recip_factorial(-1), Rational::zero());
        assert_eq!(recip_factorial(-17), Rational::zero());
        assert_eq!(recip_factorial(4), rat(1, 24));
    }

    #[test]
    fn binomials_match_pascal() {
        for n in 0..12u64 {
            for k in 0..=n {
                let lhs = binomial(n + 1, k + 1);
                let rhs = binomial(n, k) + binomial(n, k + 1);
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(binomial(9, 3), BigInt::from(84));
        assert_eq!(binomial(3, 9), BigInt::zero());
    }
}
