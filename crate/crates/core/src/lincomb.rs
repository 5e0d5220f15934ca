//! Linear combinations of basis elements with exact integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

/// A finite formal sum of basis elements with [`BigInt`] coefficients.
///
/// Zero coefficients are never stored, and iteration is in the order of the
/// basis type, so two combinations are equal iff they print the same.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LinComb<B: Ord> {
    terms: BTreeMap<B, BigInt>,
}

impl<B: Ord> LinComb<B> {
    pub fn zero() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }

    /// The single term `1 * basis`.
    pub fn unit(basis: B) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(basis, BigInt::from(1));
        LinComb { terms }
    }

    pub fn with_coeff(basis: B, coeff: BigInt) -> Self {
        let mut c = Self::zero();
        c.add_term(basis, coeff);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of basis elements with nonzero coefficient.
    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, basis: &B) -> BigInt {
        self.terms.get(basis).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, basis: B, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(basis);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self)
    where
        B: Clone,
    {
        for (b, c) in other.iter() {
            self.add_term(b.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self
    where
        B: Clone,
    {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self
    where
        B: Clone,
    {
        let mut out = self.clone();
        for (b, c) in other.iter() {
            out.add_term(b.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self
    where
        B: Clone,
    {
        let mut out = Self::zero();
        for (b, c) in self.iter() {
            out.add_term(b.clone(), c * k);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    /// True when every stored coefficient equals one.
    pub fn all_coeffs_one(&self) -> bool {
        self.terms.values().all(|c| *c == BigInt::from(1))
    }

    pub fn into_iter_terms(self) -> impl Iterator<Item = (B, BigInt)> {
        self.terms.into_iter()
    }
}

impl<B: Ord + Clone> FromIterator<(B, BigInt)> for LinComb<B> {
    fn from_iter<I: IntoIterator<Item = (B, BigInt)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in iter {
            out.add_term(b, c);
        }
        out
    }
}

impl<B: Ord + fmt::Display> fmt::Debug for LinComb<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *c == BigInt::from(1) {
                write!(f, "{b}")?;
            } else {
                write!(f, "{c}*{b}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut c: LinComb<u32> = LinComb::zero();
        c.add_term(3, BigInt::from(2));
        c.add_term(3, BigInt::from(-2));
        assert!(c.is_zero());
        assert_eq!(c.support_len(), 0);
    }

    #[test]
    fn addition_merges_terms() {
        let a = LinComb::unit(1u32);
        let b = LinComb::unit(1u32);
        let s = a.add(&b);
        assert_eq!(s.coeff(&1), BigInt::from(2));
    }
}
