//! Fixed-width binary strings.
//!
//! Bits are indexed left to right: position 0 is the leftmost character of
//! the textual form and the most significant bit of the stored word. The
//! string `"110"` therefore has ones at positions 0 and 1.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: u32,
    bits: u64,
}

#[inline]
fn width_mask(width: u32) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn check_width(width: u32) -> Result<()> {
    if (1..=BitString::MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(Error::InvalidWidth(width))
    }
}

impl BitString {
    pub const MAX_WIDTH: u32 = 64;

    pub fn new(width: u32, bits: u64) -> Result<Self> {
        check_width(width)?;
        if bits & !width_mask(width) != 0 {
            return Err(Error::ValueTooWide { width, bits });
        }
        Ok(Self { width, bits })
    }

    /// The all-zeros string. Panics if `width` is not in `1..=64`.
    pub fn zeros(width: u32) -> Self {
        check_width(width).expect("invalid bit string width");
        Self { width, bits: 0 }
    }

    /// The all-ones string. Panics if `width` is not in `1..=64`.
    pub fn ones(width: u32) -> Self {
        check_width(width).expect("invalid bit string width");
        Self {
            width,
            bits: width_mask(width),
        }
    }

    /// String with a single one at `position` (0 = leftmost).
    pub fn unit(width: u32, position: u32) -> Self {
        Self::zeros(width).with_bit(position, true)
    }

    /// String with ones exactly at the given positions.
    pub fn from_positions<I: IntoIterator<Item = u32>>(width: u32, positions: I) -> Self {
        positions
            .into_iter()
            .fold(Self::zeros(width), |acc, p| acc.with_bit(p, true))
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Raw value, most significant bit = position 0.
    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    fn shift_of(&self, position: u32) -> u32 {
        assert!(
            position < self.width,
            "bit position {position} out of range for width {}",
            self.width
        );
        self.width - 1 - position
    }

    pub fn get(&self, position: u32) -> bool {
        (self.bits >> self.shift_of(position)) & 1 == 1
    }

    pub fn with_bit(self, position: u32, value: bool) -> Self {
        let bit = 1u64 << self.shift_of(position);
        let bits = if value {
            self.bits | bit
        } else {
            self.bits & !bit
        };
        Self { bits, ..self }
    }

    fn same_width(&self, other: &Self) -> Result<()> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            })
        }
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(Self {
            width: self.width,
            bits: self.bits & other.bits,
        })
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(Self {
            width: self.width,
            bits: self.bits | other.bits,
        })
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(Self {
            width: self.width,
            bits: self.bits ^ other.bits,
        })
    }

    /// Parity of the overlap, `sum a_i b_i mod 2`.
    pub fn inner_product(&self, other: &Self) -> Result<u8> {
        self.same_width(other)?;
        Ok(((self.bits & other.bits).count_ones() & 1) as u8)
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn complement(&self) -> Self {
        Self {
            width: self.width,
            bits: !self.bits & width_mask(self.width),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_ones(&self) -> bool {
        self.bits == width_mask(self.width)
    }

    /// Positions holding a one, left to right.
    pub fn one_positions(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.width).filter(move |&p| self.get(p))
    }
}

impl BitAnd for BitString {
    type Output = BitString;

    /// Panics on width mismatch; use [`BitString::and`] for a checked version.
    fn bitand(self, rhs: Self) -> Self {
        self.and(&rhs).expect("bit string width mismatch")
    }
}

impl BitOr for BitString {
    type Output = BitString;

    fn bitor(self, rhs: Self) -> Self {
        self.or(&rhs).expect("bit string width mismatch")
    }
}

impl BitXor for BitString {
    type Output = BitString;

    fn bitxor(self, rhs: Self) -> Self {
        self.xor(&rhs).expect("bit string width mismatch")
    }
}

impl Not for BitString {
    type Output = BitString;

    fn not(self) -> Self {
        self.complement()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = (0..self.width)
            .map(|p| if self.get(p) { '1' } else { '0' })
            .collect();
        f.pad(&text)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let width = s.len();
        if width == 0 || width > Self::MAX_WIDTH as usize {
            return Err(Error::Parse(s.to_string()));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Parse(s.to_string())),
                };
        }
        Ok(Self {
            width: width as u32,
            bits,
        })
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
