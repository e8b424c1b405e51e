//! Exact coefficient fields.
//!
//! Every computation in the crate is carried out over an exact field. The
//! [`Scalar`] trait collects what the series and linear-algebra layers need
//! from such a field; it is implemented for `num_rational::Ratio<T>` over any
//! signed integer type, so `Ratio<BigInt>` (the crate-wide [`crate::Rational`])
//! and small fixed-width ratios for tests both work.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, Zero};

pub trait Scalar:
    Clone
    + Debug
    + Display
    + FromStr
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn from_fraction(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn is_integer(&self) -> bool;

    /// Positive denominator of the reduced fraction.
    fn denominator(&self) -> Self;

    /// Least common multiple of the denominators of `xs` (one for an empty slice).
    fn common_denominator<'a, I>(xs: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a;

    fn mul_ref(&self, other: &Self) -> Self;

    fn add_assign_ref(&mut self, other: &Self);

    fn sub_assign_ref(&mut self, other: &Self);
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Debug + Display + FromStr + Integer + Signed + FromPrimitive,
{
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(T::from_i64(n).expect("integer does not fit the scalar type"))
    }

    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }

    fn denominator(&self) -> Self {
        Ratio::from_integer(self.denom().clone())
    }

    fn common_denominator<'a, I>(xs: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        let mut acc = T::one();
        for x in xs {
            if !x.is_zero() {
                acc = acc.lcm(x.denom());
            }
        }
        Ratio::from_integer(acc)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = &*self + other;
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        *self = &*self - other;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Q = Ratio<BigInt>;

    #[test]
    fn common_denominator_is_lcm() {
        let xs = [Q::from_fraction(1, 4), Q::from_fraction(5, 6), <Q as Scalar>::from_i64(3)];
        assert_eq!(Q::common_denominator(&xs), <Q as Scalar>::from_i64(12));
        assert_eq!(Q::common_denominator(std::iter::empty::<&Q>()), Q::one());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let x: Q = "-10/4".parse().unwrap();
        assert_eq!(x.to_string(), "-5/2");
        assert_eq!(<Q as Scalar>::from_i64(7).to_string(), "7");
        assert!("1/0".parse::<Q>().is_err());
    }

    #[test]
    fn fixed_width_ratio_is_a_scalar() {
        let x = Ratio::<i64>::from_fraction(3, 9);
        assert_eq!(x.denominator(), Ratio::from_integer(3));
        assert!(!Scalar::is_integer(&x));
    }
}
