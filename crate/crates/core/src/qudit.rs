//! Quaternary values and their packed-binary encoding.

use std::fmt;
use std::str::FromStr;

use crate::error::ValueError;

/// A single quaternary digit, always in `0..=3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Qudit(u8);

impl Qudit {
    pub const ZERO: Qudit = Qudit(0);
    pub const ONE: Qudit = Qudit(1);
    pub const TWO: Qudit = Qudit(2);
    pub const THREE: Qudit = Qudit(3);

    /// All four values in ascending order.
    pub const ALL: [Qudit; 4] = [Qudit(0), Qudit(1), Qudit(2), Qudit(3)];

    pub fn new(value: u8) -> Result<Self, ValueError> {
        if value < 4 {
            Ok(Qudit(value))
        } else {
            Err(ValueError::OutOfRange { value: value as u64, radix: 4 })
        }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn to_bits(self) -> BitPair {
        BitPair { msb: self.0 & 2 != 0, lsb: self.0 & 1 != 0 }
    }

    #[inline]
    pub fn from_bits(bits: BitPair) -> Self {
        Qudit(((bits.msb as u8) << 1) | bits.lsb as u8)
    }

    /// 0 and 3 keep their bit pair under a swap.
    pub fn is_symmetric(self) -> bool {
        let b = self.to_bits();
        b.msb == b.lsb
    }

    pub fn is_asymmetric(self) -> bool {
        !self.is_symmetric()
    }
}

impl TryFrom<u8> for Qudit {
    type Error = ValueError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Qudit::new(value)
    }
}

impl From<Qudit> for u8 {
    fn from(q: Qudit) -> u8 {
        q.0
    }
}

impl From<BitPair> for Qudit {
    fn from(bits: BitPair) -> Self {
        Qudit::from_bits(bits)
    }
}

impl fmt::Display for Qudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Qudit {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: u64 = s.trim().parse().map_err(|_| ValueError::NotANumber(s.to_string()))?;
        if v < 4 {
            Ok(Qudit(v as u8))
        } else {
            Err(ValueError::OutOfRange { value: v, radix: 4 })
        }
    }
}

/// The two bits `<x1, x0>` of a qudit, where the value is `2*x1 + x0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitPair {
    pub msb: bool,
    pub lsb: bool,
}

impl BitPair {
    pub fn new(msb: bool, lsb: bool) -> Self {
        BitPair { msb, lsb }
    }

    pub fn swapped(self) -> Self {
        BitPair { msb: self.lsb, lsb: self.msb }
    }
}

impl From<Qudit> for BitPair {
    fn from(q: Qudit) -> Self {
        q.to_bits()
    }
}

/// Free-function spelling of [`Qudit::to_bits`].
pub fn qudit_to_bits(q: Qudit) -> BitPair {
    q.to_bits()
}

/// Free-function spelling of [`Qudit::from_bits`].
pub fn bits_to_qudit(b: BitPair) -> Qudit {
    Qudit::from_bits(b)
}
