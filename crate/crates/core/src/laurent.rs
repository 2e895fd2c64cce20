//! Exact integer Laurent polynomials in the indeterminate `v`.
//!
//! This is the coefficient ring for everything downstream: scalars live in
//! `Z[v, v^-1]`, the bar involution swaps `v` and `v^-1`, and the scalar
//! `delta = v + v^-1` plays a distinguished role in the quotient algebra
//! relations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An integer Laurent polynomial in `v`, kept canonical: zero coefficients
/// are never stored, so equality is plain map equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LaurentInt {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    /// The monomial `v^n`.
    pub fn v_pow(n: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(n, BigInt::one());
        LaurentInt { terms }
    }

    /// The scalar `delta = v + v^-1`.
    pub fn delta() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(1, BigInt::one());
        terms.insert(-1, BigInt::one());
        LaurentInt { terms }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        let n = n.into();
        let mut terms = BTreeMap::new();
        if !n.is_zero() {
            terms.insert(0, n);
        }
        LaurentInt { terms }
    }

    pub fn monomial(coeff: impl Into<BigInt>, exponent: i64) -> Self {
        let c = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        LaurentInt { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> BigInt {
        self.terms.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn insert_add(&mut self, exponent: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn add(&self, other: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c);
        }
        out
    }

    pub fn add_assign(&mut self, other: &LaurentInt) {
        for (e, c) in &other.terms {
            self.insert_add(*e, c);
        }
    }

    pub fn neg(&self) -> LaurentInt {
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, &(-c));
        }
        out
    }

    pub fn mul(&self, other: &LaurentInt) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert_add(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> LaurentInt {
        if c.is_zero() {
            return LaurentInt::zero();
        }
        LaurentInt {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Multiply by `v^n`.
    pub fn shift(&self, n: i64) -> LaurentInt {
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (e + n, c.clone())).collect(),
        }
    }

    /// The bar involution, exchanging `v` and `v^-1`.
    pub fn bar(&self) -> LaurentInt {
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Membership in `A^- = Z[v^-1]`: every exponent is `<= 0`.
    pub fn in_a_minus(&self) -> bool {
        self.max_exponent().map_or(true, |e| e <= 0)
    }

    /// Membership in `v^-1 A^-`: every exponent is `<= -1`.
    pub fn in_vinv_a_minus(&self) -> bool {
        self.max_exponent().map_or(true, |e| e <= -1)
    }

    /// Exact division by `delta = v + v^-1`, if possible.
    ///
    /// Shift to an ordinary polynomial in `Z[v]` and divide by `v^2 + 1`;
    /// the unit `v` absorbs the bookkeeping.
    pub fn div_delta(&self) -> Option<LaurentInt> {
        if self.is_zero() {
            return Some(LaurentInt::zero());
        }
        let low = self.min_exponent().unwrap();
        let high = self.max_exponent().unwrap();
        let deg = (high - low) as usize;
        // p[k] = coefficient of v^(low + k)
        let mut p: Vec<BigInt> = vec![BigInt::zero(); deg + 1];
        for (e, c) in &self.terms {
            p[(e - low) as usize] = c.clone();
        }
        // Divide p by v^2 + 1 from the top.
        if deg < 2 {
            return None;
        }
        let mut q: Vec<BigInt> = vec![BigInt::zero(); deg - 1];
        for k in (2..=deg).rev() {
            let lead = std::mem::take(&mut p[k]);
            if lead.is_zero() {
                continue;
            }
            p[k - 2] -= &lead;
            q[k - 2] = lead;
        }
        if !p[0].is_zero() || !p[1].is_zero() {
            return None;
        }
        let mut out = LaurentInt::zero();
        for (k, c) in q.into_iter().enumerate() {
            // quotient of (p, v^2+1) sits at v^(low + k + 2); dividing by
            // delta = v^-1 (v^2 + 1) adds one more power of v.
            out.insert_add(low + k as i64 + 1, &c);
        }
        Some(out)
    }

    /// True when the polynomial is an integer multiple of `delta^k`.
    pub fn divisible_by_delta_pow(&self, k: u32) -> bool {
        let mut cur = self.clone();
        for _ in 0..k {
            match cur.div_delta() {
                Some(next) => cur = next,
                None => return false,
            }
        }
        true
    }

    /// The unique `(n, k)` with `self = n * delta^k`, when it exists.
    ///
    /// `k` is maximal by repeated exact division, and the remaining factor
    /// must be a constant.
    pub fn delta_power_decompose(&self) -> Option<(BigInt, u32)> {
        if self.is_zero() {
            return None;
        }
        let mut cur = self.clone();
        let mut k = 0u32;
        while let Some(next) = cur.div_delta() {
            cur = next;
            k += 1;
        }
        if cur.min_exponent() == Some(0) && cur.max_exponent() == Some(0) {
            Some((cur.coeff(0), k))
        } else {
            None
        }
    }

    /// Constant polynomials report their integer value.
    pub fn as_int(&self) -> Option<BigInt> {
        if self.is_zero() {
            Some(BigInt::zero())
        } else if self.min_exponent() == Some(0) && self.max_exponent() == Some(0) {
            Some(self.coeff(0))
        } else {
            None
        }
    }
}

impl fmt::Debug for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if *e == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "v^{e}")?;
            } else {
                write!(f, "{a}*v^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let n = serde_json::Number::from_string_unchecked(c.to_string());
            map.serialize_entry(&e.to_string(), &n)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, serde_json::Number>::deserialize(deserializer)?;
        let mut out = LaurentInt::zero();
        for (e, c) in raw {
            let e: i64 = e.parse().map_err(D::Error::custom)?;
            let c: BigInt = c.to_string().parse().map_err(D::Error::custom)?;
            out.insert_add(e, &c);
        }
        Ok(out)
    }
}
