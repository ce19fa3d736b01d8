//! Exact nonnegative integers stored as sums of distinct powers of two.
//!
//! Covering costs are sums of terms `2^u` where `u` can be far larger than
//! any machine word. Keeping only the exponents of the set bits makes
//! addition and comparison cost proportional to the number of terms, not to
//! the bit-length of the value.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

/// Values whose top bit is below this exponent are displayed in decimal.
const DECIMAL_DISPLAY_LIMIT: u64 = 256;

/// An exact natural number `Σ 2^e` over a strictly decreasing list of
/// exponents. The empty list is zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BigCost {
    // strictly decreasing
    terms: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostParseError {
    #[error("empty cost literal")]
    Empty,
    #[error("invalid decimal digit in {0:?}")]
    InvalidDigit(String),
    #[error("exponent list is not strictly decreasing at position {0}")]
    NotDecreasing(usize),
}

impl BigCost {
    pub const fn zero() -> Self {
        BigCost { terms: Vec::new() }
    }

    /// `2^exponent`.
    pub fn pow2(exponent: u64) -> Self {
        BigCost {
            terms: vec![exponent],
        }
    }

    /// Builds a cost from exponents in any order; duplicates are carried.
    pub fn from_exponents<I: IntoIterator<Item = u64>>(exponents: I) -> Self {
        exponents.into_iter().map(BigCost::pow2).sum()
    }

    /// Builds a cost from a list that must already be strictly decreasing.
    pub fn from_normalized(terms: Vec<u64>) -> Result<Self, CostParseError> {
        if let Some(pos) = terms.windows(2).position(|w| w[0] <= w[1]) {
            return Err(CostParseError::NotDecreasing(pos + 1));
        }
        Ok(BigCost { terms })
    }

    pub fn from_u128(mut value: u128) -> Self {
        let mut terms = Vec::new();
        while value != 0 {
            let top = 127 - value.leading_zeros() as u64;
            terms.push(top);
            value &= !(1u128 << top);
        }
        BigCost { terms }
    }

    pub fn from_biguint(value: &BigUint) -> Self {
        let bits = value.bits();
        let terms = (0..bits).rev().filter(|&i| value.bit(i)).collect();
        BigCost { terms }
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut out = BigUint::default();
        for &e in &self.terms {
            out.set_bit(e, true);
        }
        out
    }

    /// Exact value when it fits in 128 bits.
    pub fn to_u128(&self) -> Option<u128> {
        match self.terms.first() {
            None => Some(0),
            Some(&top) if top < 128 => Some(self.terms.iter().map(|&e| 1u128 << e).sum()),
            Some(_) => None,
        }
    }

    /// Exponents of the set bits, largest first.
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `⌊log₂ self⌋`, i.e. the largest exponent. `None` for zero.
    pub fn floor_log2(&self) -> Option<u64> {
        self.terms.first().copied()
    }

    /// Approximate `log₂ self` using the leading 64 terms. `None` for zero.
    pub fn log2(&self) -> Option<f64> {
        let top = *self.terms.first()?;
        let mantissa: f64 = self
            .terms
            .iter()
            .take(64)
            .map(|&e| (-((top - e) as f64)).exp2())
            .sum();
        Some(top as f64 + mantissa.log2())
    }

    /// `self · 2^shift`.
    pub fn shl(&self, shift: u64) -> Self {
        BigCost {
            terms: self.terms.iter().map(|&e| e + shift).collect(),
        }
    }

    /// `self · factor`.
    pub fn mul_u64(&self, factor: u64) -> Self {
        (0..64)
            .filter(|bit| factor >> bit & 1 == 1)
            .map(|bit| self.shl(bit))
            .sum()
    }

    /// Largest `k` with `2^k` dividing both values. `None` if both are zero.
    pub fn common_pow2(&self, other: &Self) -> Option<u64> {
        match (self.terms.last(), other.terms.last()) {
            (Some(&a), Some(&b)) => Some(a.min(b)),
            (Some(&a), None) | (None, Some(&a)) => Some(a),
            (None, None) => None,
        }
    }

    /// `self / 2^shift`, requiring exact divisibility.
    pub fn shr_exact(&self, shift: u64) -> Option<Self> {
        if self.terms.last().is_some_and(|&low| low < shift) {
            return None;
        }
        Some(BigCost {
            terms: self.terms.iter().map(|&e| e - shift).collect(),
        })
    }

    pub fn to_decimal_string(&self) -> String {
        self.to_biguint().to_string()
    }

    /// `2^a + 2^b + …`, or `0`.
    pub fn to_power_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|e| format!("2^{e}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse_decimal(text: &str) -> Result<Self, CostParseError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(CostParseError::Empty);
        }
        if !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CostParseError::InvalidDigit(text.to_string()));
        }
        let value = BigUint::parse_bytes(text.as_bytes(), 10)
            .ok_or_else(|| CostParseError::InvalidDigit(text.to_string()))?;
        Ok(Self::from_biguint(&value))
    }

    fn add_terms(a: &[u64], b: &[u64]) -> Vec<u64> {
        // Ripple-carry addition over the sparse bits, lowest exponent first.
        let mut out = Vec::with_capacity(a.len().max(b.len()) + 1);
        let (mut i, mut j) = (a.len(), b.len());
        let mut carry: Option<u64> = None;
        loop {
            let x = (i > 0).then(|| a[i - 1]);
            let y = (j > 0).then(|| b[j - 1]);
            let Some(low) = [x, y, carry].into_iter().flatten().min() else {
                break;
            };
            let mut count = 0;
            if x == Some(low) {
                count += 1;
                i -= 1;
            }
            if y == Some(low) {
                count += 1;
                j -= 1;
            }
            if carry == Some(low) {
                count += 1;
            }
            carry = None;
            match count {
                1 => out.push(low),
                2 => carry = Some(low + 1),
                _ => {
                    out.push(low);
                    carry = Some(low + 1);
                }
            }
        }
        out.reverse();
        out
    }
}

impl Ord for BigCost {
    fn cmp(&self, other: &Self) -> Ordering {
        // Distinct bits in decreasing order: lexicographic order on the
        // exponent lists is integer order.
        self.terms.cmp(&other.terms)
    }
}

impl PartialOrd for BigCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &BigCost {
    type Output = BigCost;

    fn add(self, rhs: &BigCost) -> BigCost {
        BigCost {
            terms: BigCost::add_terms(&self.terms, &rhs.terms),
        }
    }
}

impl Add for BigCost {
    type Output = BigCost;

    fn add(self, rhs: BigCost) -> BigCost {
        &self + &rhs
    }
}

impl AddAssign<&BigCost> for BigCost {
    fn add_assign(&mut self, rhs: &BigCost) {
        if rhs.terms.is_empty() {
            return;
        }
        self.terms = BigCost::add_terms(&self.terms, &rhs.terms);
    }
}

impl AddAssign for BigCost {
    fn add_assign(&mut self, rhs: BigCost) {
        *self += &rhs;
    }
}

impl Sum for BigCost {
    fn sum<I: Iterator<Item = BigCost>>(iter: I) -> Self {
        iter.fold(BigCost::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a BigCost> for BigCost {
    fn sum<I: Iterator<Item = &'a BigCost>>(iter: I) -> Self {
        iter.fold(BigCost::zero(), |acc, x| &acc + x)
    }
}

impl From<u64> for BigCost {
    fn from(value: u64) -> Self {
        BigCost::from_u128(value.into())
    }
}

impl FromStr for BigCost {
    type Err = CostParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigCost::parse_decimal(s)
    }
}

impl fmt::Display for BigCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.floor_log2() {
            Some(top) if top >= DECIMAL_DISPLAY_LIMIT => f.write_str(&self.to_power_string()),
            _ => f.write_str(&self.to_decimal_string()),
        }
    }
}

impl fmt::Debug for BigCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigCost({})", self.to_power_string())
    }
}
