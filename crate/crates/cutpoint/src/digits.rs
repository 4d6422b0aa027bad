//! Digit words and their fractional values.
//!
//! A [`DigitWord`] is a string of decimal digits. Its fractional value
//! `0.d1 d2 … dn` is the exact rational `Σ d_j · 10^{-j}`. The matrix
//! gadgets only ever consume *pair words* — words over the digit pairs
//! `11` and `12` — because fractional values of such words can never
//! collide through trailing zeros.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigitsError {
    #[error("character {0:?} is not a decimal digit")]
    NotADigit(char),
    #[error("digit {0} out of range 0..=9")]
    DigitOutOfRange(u8),
    #[error("recoding requires an alphabet of exactly 2 symbols, got {0}")]
    NotBinaryAlphabet(usize),
    #[error("symbol {0:?} is not in the declared alphabet")]
    UnknownSymbol(char),
}

/// A word of decimal digits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DigitWord {
    digits: Vec<u8>,
}

impl DigitWord {
    pub fn empty() -> Self {
        DigitWord { digits: Vec::new() }
    }

    pub fn parse(s: &str) -> Result<Self, DigitsError> {
        let mut digits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let d = ch.to_digit(10).ok_or(DigitsError::NotADigit(ch))? as u8;
            digits.push(d);
        }
        Ok(DigitWord { digits })
    }

    pub fn from_digits(digits: Vec<u8>) -> Result<Self, DigitsError> {
        if let Some(&d) = digits.iter().find(|&&d| d > 9) {
            return Err(DigitsError::DigitOutOfRange(d));
        }
        Ok(DigitWord { digits })
    }

    /// Number of digits.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn concat(&self, other: &DigitWord) -> DigitWord {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        DigitWord { digits }
    }

    /// True when every digit is 1 or 2 and the length is even — the shape
    /// the matrix gadgets require.
    pub fn is_pair_word(&self) -> bool {
        self.digits.len().is_multiple_of(2) && self.digits.iter().all(|&d| d == 1 || d == 2)
    }

    /// The exact value `0.d1 d2 … dn = Σ d_j · 10^{-j}`.
    ///
    /// Trailing zeros change the length but not the value; callers that
    /// need values to determine words must stick to pair words.
    pub fn fractional_value(&self) -> Rational {
        let mut numer = BigInt::from(0u8);
        for &d in &self.digits {
            numer = numer * 10 + d;
        }
        Rational::from_big(BigRational::new(numer, pow10(self.digits.len())))
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitWord({self})")
    }
}

fn pow10(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..n {
        acc *= 10;
    }
    acc
}

/// Exactly `1/10^n`.
pub fn pow10_neg(n: usize) -> Rational {
    Rational::from_big(BigRational::new(BigInt::one(), pow10(n)))
}

/// Recodes a word over a two-letter alphabet into a pair word: the first
/// letter of the alphabet becomes the digits `11`, the second `12`. The
/// canonical order of the two letters is their declaration order.
pub fn recode_binary(word: &str, alphabet: &[char]) -> Result<DigitWord, DigitsError> {
    if alphabet.len() != 2 {
        return Err(DigitsError::NotBinaryAlphabet(alphabet.len()));
    }
    let mut digits = Vec::with_capacity(2 * word.len());
    for ch in word.chars() {
        if ch == alphabet[0] {
            digits.extend_from_slice(&[1, 1]);
        } else if ch == alphabet[1] {
            digits.extend_from_slice(&[1, 2]);
        } else {
            return Err(DigitsError::UnknownSymbol(ch));
        }
    }
    Ok(DigitWord { digits })
}
