//! Exact half-integer arithmetic.
//!
//! Index values are stored as doubled integers so that sums and averages of
//! intersection numbers never round. Comparisons are exact; floats only enter
//! at display time.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};

/// An exact half-integer: the represented value is `doubled / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };

    /// Value `doubled / 2`.
    pub fn from_doubled(doubled: i64) -> Self {
        HalfInt { doubled }
    }

    pub fn from_int(v: i64) -> Self {
        HalfInt { doubled: 2 * v }
    }

    /// The half-average of two integers: `(a + b) / 2`.
    pub fn average(a: i64, b: i64) -> Self {
        HalfInt { doubled: a + b }
    }

    pub fn doubled(&self) -> i64 {
        self.doubled
    }

    pub fn is_integer(&self) -> bool {
        self.doubled % 2 == 0
    }

    /// Integer value if this is one.
    pub fn as_integer(&self) -> Option<i64> {
        if self.is_integer() {
            Some(self.doubled / 2)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.doubled as f64 / 2.0
    }

    /// Numerator/denominator in lowest terms (denominator 1 or 2).
    pub fn num_den(&self) -> (i64, i64) {
        if self.is_integer() {
            (self.doubled / 2, 1)
        } else {
            (self.doubled, 2)
        }
    }

    pub fn halve(&self) -> Option<HalfInt> {
        if self.doubled % 2 == 0 {
            Some(HalfInt { doubled: self.doubled / 2 })
        } else {
            None
        }
    }

    pub fn scale_int(&self, k: i64) -> HalfInt {
        HalfInt { doubled: self.doubled * k }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, other: HalfInt) -> HalfInt {
        HalfInt { doubled: self.doubled + other.doubled }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, other: HalfInt) -> HalfInt {
        HalfInt { doubled: self.doubled - other.doubled }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { doubled: -self.doubled }
    }
}

impl Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        iter.fold(HalfInt::ZERO, |a, b| a + b)
    }
}

impl From<i64> for HalfInt {
    fn from(v: i64) -> Self {
        HalfInt::from_int(v)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.num_den();
        if den == 1 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/2")
        }
    }
}
