//! Exact half-integers, stored doubled.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The value when it is an integer.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// Parses `"3"`, `"-1/2"` and similar.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().ok().map(HalfInt::from_int),
            Some((num, "2")) => num.trim().parse::<i64>().ok().map(HalfInt),
            Some(_) => None,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt(self.0 * rhs)
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.0 += rhs.0;
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: HalfInt) {
        self.0 -= rhs.0;
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        HalfInt(iter.map(|h| h.0).sum())
    }
}

/// Exact quarter-integers, stored as a multiple of 1/4. Euler measures and
/// corner multiplicities of domains live here.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Quarter(i64);

impl Quarter {
    pub const fn from_quarters(q: i64) -> Self {
        Quarter(q)
    }

    pub const fn quarters(self) -> i64 {
        self.0
    }

    /// The value when it is a half-integer.
    pub fn to_half(self) -> Option<HalfInt> {
        (self.0 % 2 == 0).then_some(HalfInt(self.0 / 2))
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().ok().map(|n| Quarter(4 * n)),
            Some((num, "2")) => num.trim().parse::<i64>().ok().map(|n| Quarter(2 * n)),
            Some((num, "4")) => num.trim().parse::<i64>().ok().map(Quarter),
            Some(_) => None,
        }
    }
}

impl From<HalfInt> for Quarter {
    fn from(h: HalfInt) -> Self {
        Quarter(2 * h.0)
    }
}

impl Add for Quarter {
    type Output = Quarter;
    fn add(self, rhs: Quarter) -> Quarter {
        Quarter(self.0 + rhs.0)
    }
}

impl Neg for Quarter {
    type Output = Quarter;
    fn neg(self) -> Quarter {
        Quarter(-self.0)
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_half() {
            Some(h) => write!(f, "{h}"),
            None => write!(f, "{}/4", self.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        for (twice, text) in [(0, "0"), (1, "1/2"), (-3, "-3/2"), (4, "2"), (-6, "-3")] {
            let h = HalfInt::from_twice(twice);
            assert_eq!(h.to_string(), text);
            assert_eq!(HalfInt::parse(text), Some(h));
        }
        assert_eq!(HalfInt::parse("1/3"), None);
        assert_eq!(HalfInt::parse("x"), None);
    }

    #[test]
    fn arithmetic() {
        let a = HalfInt::from_twice(-3);
        assert_eq!(a + HalfInt::HALF, HalfInt::from_int(-1));
        assert_eq!(a * 2, HalfInt::from_int(-3));
        assert_eq!((a - a).to_int(), Some(0));
        assert_eq!(a.to_int(), None);
    }

    #[test]
    fn quarters() {
        assert_eq!(Quarter::parse("-1/4").unwrap().quarters(), -1);
        assert_eq!(Quarter::parse("1/2").unwrap().to_half(), Some(HalfInt::HALF));
        assert_eq!(Quarter::parse("-2").unwrap().to_half(), Some(HalfInt::from_int(-2)));
        let q = Quarter::parse("1/4").unwrap();
        assert_eq!((q + q).to_half(), Some(HalfInt::HALF));
        assert_eq!(q.to_half(), None);
        assert_eq!(q.to_string(), "1/4");
    }
}
