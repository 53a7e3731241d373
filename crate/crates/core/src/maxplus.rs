//! The group ring `Z[Q]` of formal sums `Σ c_α [α]` with the product
//! `[α] ∨ [β] = [max(α, β)]`, the degree `d` and weight `v` homomorphisms, and
//! the pair bound they satisfy on the positive cone.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite formal sum of symbols `[α]`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct MaxPlusElem {
    coeffs: BTreeMap<Rational, i64>,
}

impl MaxPlusElem {
    pub fn zero() -> Self {
        MaxPlusElem::default()
    }

    /// `c [α]`.
    pub fn term(c: i64, alpha: Rational) -> Self {
        let mut x = MaxPlusElem::zero();
        x.add_term(c, alpha);
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut x = MaxPlusElem::zero();
        for (c, a) in terms {
            x.add_term(c, a);
        }
        x
    }

    pub fn add_term(&mut self, c: i64, alpha: Rational) {
        if c == 0 {
            return;
        }
        match self.coeffs.entry(alpha) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Rational, i64)> {
        self.coeffs.iter().map(|(a, &c)| (a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Membership in the positive cone: keys and coefficients non-negative.
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|(a, &c)| !a.is_negative() && c > 0)
    }

    /// `d(x) = Σ c_α`.
    pub fn degree(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// `v(x) = Σ c_α α`.
    pub fn weight(&self) -> Rational {
        self.coeffs.iter().map(|(a, &c)| a * Rational::from_int(c)).sum()
    }
}

impl Add for &MaxPlusElem {
    type Output = MaxPlusElem;

    fn add(self, rhs: &MaxPlusElem) -> MaxPlusElem {
        let mut out = self.clone();
        for (a, c) in rhs.coeffs() {
            out.add_term(c, a.clone());
        }
        out
    }
}

impl fmt::Display for MaxPlusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (a, c)) in self.coeffs().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if c != 1 {
                write!(f, "{c}")?;
            }
            write!(f, "[{a}]")?;
        }
        Ok(())
    }
}

/// Bi-additive extension of `[α] ∨ [β] = [max(α, β)]`.
pub fn mp_vee(x: &MaxPlusElem, y: &MaxPlusElem) -> MaxPlusElem {
    let mut out = MaxPlusElem::zero();
    for (a, c) in x.coeffs() {
        for (b, e) in y.coeffs() {
            out.add_term(c * e, Rational::max(a, b));
        }
    }
    out
}

pub fn mp_degree_weight(x: &MaxPlusElem) -> (i64, Rational) {
    (x.degree(), x.weight())
}

/// `Σ dim [slope]` over the irreducible constituents of a representation.
pub fn s_map(constituents: &[(u64, Rational)]) -> Result<MaxPlusElem> {
    let mut out = MaxPlusElem::zero();
    for (dim, slope) in constituents {
        if slope.is_negative() {
            return Err(Error::Precondition(format!("negative slope {slope}")));
        }
        if *dim == 0 {
            return Err(Error::Precondition("constituent of dimension 0".into()));
        }
        out.add_term(*dim as i64, slope.clone());
    }
    Ok(out)
}

/// `d2 v1 + d1 v2 - min(v1, v2)`.
pub fn pair_upper_bound(d1: i64, v1: &Rational, d2: i64, v2: &Rational) -> Rational {
    Rational::from_int(d2) * v1 + Rational::from_int(d1) * v2 - Rational::min(v1, v2)
}

/// Elements `(d_k - 1)[0] + [v_k]` whose product attains the pair bound.
pub fn optimal_witness(d1: i64, v1: &Rational, d2: i64, v2: &Rational) -> Result<(MaxPlusElem, MaxPlusElem)> {
    if d1 < 1 || d2 < 1 || v1.is_negative() || v2.is_negative() {
        return Err(Error::Precondition("need d >= 1 and v >= 0".into()));
    }
    let w = |d: i64, v: &Rational| {
        let mut x = MaxPlusElem::term(d - 1, Rational::zero());
        x.add_term(1, v.clone());
        x
    };
    Ok((w(d1, v1), w(d2, v2)))
}
