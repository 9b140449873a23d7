//! Exact rational scalars.
//!
//! Everything in this crate is computed over `Q`; no floats anywhere.

use num::{BigInt, BigRational, One, Zero};

pub type Q = BigRational;

/// Shorthand for the rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from(BigInt::from(n))
}

pub fn qzero() -> Q {
    Q::zero()
}

pub fn qone() -> Q {
    Q::one()
}

/// `1/k!` as a rational.
pub fn inv_factorial(k: usize) -> Q {
    let mut f = BigInt::one();
    for i in 1..=k {
        f *= BigInt::from(i as i64);
    }
    BigRational::new(BigInt::one(), f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(inv_factorial(0), qone());
        assert_eq!(inv_factorial(3), q(1, 6));
        assert_eq!(q(2, 4), q(1, 2));
    }
}
