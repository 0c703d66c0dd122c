use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Fixed-length vector over GF(2), packed into 64-bit words.
///
/// Position 0 is the first coordinate of the mathematical vector and the
/// least significant bit of the integer encoding.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Build from 0/1 entries; any other value is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v.set(i, true),
                other => return Err(Error::InvalidArgument(format!("bit value {other} at position {i}"))),
            }
        }
        Ok(v)
    }

    /// Decode the integer encoding (bit `i` of `value` becomes coordinate `i`).
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS, "integer encoding limited to 64 bits");
        let mask = if len == WORD_BITS { u64::MAX } else { (1u64 << len) - 1 };
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value & mask;
        }
        v
    }

    /// Integer encoding; `None` when longer than 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= bit;
        } else {
            self.words[i / WORD_BITS] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        Self { len, words }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &Self) -> Result<bool> {
        check_dim("dot product", self.len, other.len)?;
        Ok(dot_words(&self.words, &other.words))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::from_bools(self.iter().chain(other.iter()))
    }

    /// Sub-vector of coordinates `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self::from_bools((start..end).map(|i| self.get(i)))
    }

    /// Swap the two length-n halves (the symplectic twist Λ applied on the right).
    pub fn swap_halves(&self) -> Result<Self> {
        if !self.len.is_multiple_of(2) {
            return Err(Error::OddLength(self.len));
        }
        let n = self.len / 2;
        Ok(self.slice(n, self.len).concat(&self.slice(0, n)))
    }

    /// Bitstring rendered with `|` between the halves, e.g. `10000|00000`.
    pub fn to_symplectic_string(&self) -> String {
        let s = self.to_string();
        let n = self.len / 2;
        format!("{}|{}", &s[..n], &s[n..])
    }

    pub fn try_xor(&self, other: &Self) -> Result<Self> {
        check_dim("vector addition", self.len, other.len)?;
        Ok(self ^ other)
    }
}

#[inline]
pub(crate) fn dot_words(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum::<u32>() & 1 == 1
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses `0`/`1` characters; `|`, `,`, `_` and whitespace are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::new();
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '|' | ',' | '_' | ' ' | '(' | ')' => {}
                other => return Err(Error::InvalidArgument(format!("unexpected character `{other}` in bitstring"))),
            }
        }
        Ok(Self::from_bools(bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weights() {
        assert_eq!(BitVector::zeros(7).weight(), 0);
        assert_eq!("0000010".parse::<BitVector>().unwrap().weight(), 1);
        assert_eq!("1110010".parse::<BitVector>().unwrap().weight(), 4);
    }

    #[test]
    fn lsb_is_first_coordinate() {
        let v = BitVector::from_u64(0b110, 3);
        assert_eq!(v.to_string(), "011");
        assert_eq!(v.to_u64(), Some(6));
    }

    #[test]
    fn rejects_bad_bits() {
        assert!(BitVector::from_bits(&[0, 2]).is_err());
        assert!("01x".parse::<BitVector>().is_err());
    }

    #[test]
    fn swap_halves_requires_even_length() {
        let v: BitVector = "10000|00000".parse().unwrap();
        assert_eq!(v.swap_halves().unwrap().to_symplectic_string(), "00000|10000");
        assert_eq!(BitVector::zeros(3).swap_halves(), Err(Error::OddLength(3)));
    }

    #[test]
    fn long_vectors_span_words() {
        let mut v = BitVector::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.support(), vec![0, 64, 129]);
        assert_eq!(v.to_u64(), None);
        assert!(v.dot(&v).unwrap());
    }

    proptest! {
        #[test]
        fn integer_encoding_round_trips(value in any::<u64>(), len in 0usize..=64) {
            let v = BitVector::from_u64(value, len);
            let back = BitVector::from_u64(v.to_u64().unwrap(), len);
            prop_assert_eq!(&back, &v);
            let parsed: BitVector = v.to_string().parse().unwrap();
            prop_assert_eq!(parsed, v);
        }
    }
}
