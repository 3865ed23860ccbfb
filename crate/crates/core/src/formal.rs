//! Integer formal linear combinations of canonically keyed terms.
//!
//! Keys are opaque printable strings produced by the term's home module
//! (diagram or graph canonical keys). Coefficients are arbitrary-precision
//! integers so every sum built here is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

/// Separator used for tensor-product keys.
pub const TENSOR_SEP: &str = " ⊗ ";

/// A formal sum `Σ c_i · key_i` with integer coefficients.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<String, BigInt>,
}

impl FormalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single term `c · key`. Returns the zero sum when `c == 0`.
    pub fn term(key: impl Into<String>, coeff: impl Into<BigInt>) -> Self {
        let mut sum = Self::zero();
        sum.add_term(key.into(), coeff.into());
        sum
    }

    fn add_term(&mut self, key: String, coeff: BigInt) {
        if coeff == BigInt::ZERO {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == BigInt::ZERO {
                    e.remove();
                }
            }
        }
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut out = Self::zero();
        if c == BigInt::ZERO {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * &c);
        }
        out
    }

    /// Bilinear tensor product; term keys become `key_a ⊗ key_b`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add_term(format!("{ka}{TENSOR_SEP}{kb}"), ca * cb);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &str) -> BigInt {
        self.terms.get(key).cloned().unwrap_or(BigInt::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BigInt)> {
        self.terms.iter().map(|(k, c)| (k.as_str(), c))
    }

    /// Sum of all coefficients.
    pub fn total_mass(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl fmt::Display for FormalSum {
    /// Renders as `±c·key` lines sorted by key; the zero sum prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                writeln!(f)?;
            }
            first = false;
            if c >= &BigInt::ZERO {
                write!(f, "+{c}·{k}")?;
            } else {
                write!(f, "{c}·{k}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_plus_empty_is_empty() {
        assert_eq!(FormalSum::zero().add(&FormalSum::zero()), FormalSum::zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = FormalSum::term("X", 1);
        let b = FormalSum::term("X", -1);
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn coefficient_arithmetic() {
        let a = FormalSum::term("X", 1).add(&FormalSum::term("Y", 2));
        let b = FormalSum::term("Y", 3);
        let sum = a.add(&b);
        assert_eq!(sum.coefficient("X"), 1.into());
        assert_eq!(sum.coefficient("Y"), 5.into());
        assert_eq!(sum.len(), 2);
    }

    #[test]
    fn singleton_tensor() {
        let t = FormalSum::term("X", 1).tensor(&FormalSum::term("Y", 1));
        assert_eq!(t, FormalSum::term(format!("X{TENSOR_SEP}Y"), 1));
    }

    #[test]
    fn zero_annihilates_tensor() {
        assert!(FormalSum::zero().tensor(&FormalSum::term("Y", 1)).is_zero());
    }

    #[test]
    fn tensor_multiplies_coefficients() {
        let t = FormalSum::term("X", 2).tensor(&FormalSum::term("Y", 3));
        assert_eq!(t.coefficient(&format!("X{TENSOR_SEP}Y")), 6.into());
    }

    #[test]
    fn equality_is_order_independent() {
        let a = FormalSum::term("X", 1).add(&FormalSum::term("Y", 1));
        let b = FormalSum::term("Y", 1).add(&FormalSum::term("X", 1));
        assert_eq!(a, b);
        assert_ne!(FormalSum::term("X", 1), FormalSum::term("X", 2));
    }

    #[test]
    fn render_is_sorted_and_signed() {
        let s = FormalSum::term("b", -2).add(&FormalSum::term("a", 1));
        assert_eq!(s.to_string(), "+1·a\n-2·b");
        assert_eq!(FormalSum::zero().to_string(), "0");
    }
}
