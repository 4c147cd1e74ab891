//! Scalar types accepted by the function-valued parts of the crate.

use std::fmt;

use num_traits::Num;

/// An ordered field-like number: exact rationals, or `f32`/`f64` when exactness
/// is not needed.
///
/// Only `+ - * /`, comparisons and the constants zero and one are used, so
/// dyadic values produced by the separation constructors stay exact even in
/// binary floating point.
pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + fmt::Display {
    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }

    fn from_usize(k: usize) -> Self {
        // repeated doubling keeps this exact and overflow-free for small k
        let mut acc = Self::zero();
        let mut pow = Self::one();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc + pow.clone();
            }
            pow = pow.clone() + pow;
            k >>= 1;
        }
        acc
    }

    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()) / Self::two()
    }

    fn abs_diff(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone() - b.clone()
        } else {
            b.clone() - a.clone()
        }
    }
}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + fmt::Debug + fmt::Display {}

pub(crate) fn min_of<T: Scalar>(a: &T, b: &T) -> T {
    if b < a {
        b.clone()
    } else {
        a.clone()
    }
}

pub(crate) fn max_of<T: Scalar>(a: &T, b: &T) -> T {
    if b > a {
        b.clone()
    } else {
        a.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn small_integers_are_exact() {
        assert_eq!(<Ratio<i64> as Scalar>::from_usize(0), Ratio::from_integer(0));
        assert_eq!(<Ratio<i64> as Scalar>::from_usize(13), Ratio::from_integer(13));
        assert_eq!(<f64 as Scalar>::from_usize(7), 7.0);
    }

    #[test]
    fn midpoints() {
        let a = Ratio::new(1i64, 4);
        let b = Ratio::new(1i64, 2);
        assert_eq!(<Ratio<i64> as Scalar>::midpoint(&a, &b), Ratio::new(3, 8));
        assert_eq!(<f64 as Scalar>::midpoint(&0.0, &1.0), 0.5);
        assert_eq!(<f64 as Scalar>::abs_diff(&0.25, &1.0), 0.75);
    }
}
