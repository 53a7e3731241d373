//! Semisimple Weil-Deligne representations as multisets of `Sp_r(class)`.
//!
//! Text form:
//!
//! ```text
//! rep  := term ('+' term)* | '0'
//! term := [int '*'] 'Sp_' int '(' id ')'
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{ClassId, ModelInstance};

/// `Sp_r` of an irreducible class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Indecomposable {
    pub cls: ClassId,
    pub r: u32,
}

impl Indecomposable {
    pub fn new(r: u32, cls: impl Into<ClassId>) -> Self {
        Indecomposable { cls: cls.into(), r }
    }
}

impl fmt::Display for Indecomposable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sp_{}({})", self.r, self.cls)
    }
}

/// A direct sum of indecomposables, kept normalized: equal terms merged,
/// ordered by (class id, r).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WDRep {
    terms: BTreeMap<Indecomposable, u64>,
}

impl WDRep {
    pub fn zero() -> Self {
        WDRep::default()
    }

    pub fn single(r: u32, cls: impl Into<ClassId>) -> Self {
        let mut x = WDRep::zero();
        x.add_term(1, Indecomposable::new(r, cls));
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Indecomposable)>) -> Self {
        let mut x = WDRep::zero();
        for (k, t) in terms {
            x.add_term(k, t);
        }
        x
    }

    pub fn add_term(&mut self, k: u64, t: Indecomposable) {
        assert!(t.r >= 1, "Sp-length must be >= 1");
        if k > 0 {
            *self.terms.entry(t).or_insert(0) += k;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with multiplicities, in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Indecomposable, u64)> {
        self.terms.iter().map(|(t, &k)| (t, k))
    }

    /// Number of distinct indecomposables.
    pub fn num_distinct(&self) -> usize {
        self.terms.len()
    }

    /// The unique indecomposable when the rep is a single term of multiplicity one.
    pub fn as_indecomposable(&self) -> Option<&Indecomposable> {
        match self.terms.iter().next() {
            Some((t, 1)) if self.terms.len() == 1 => Some(t),
            _ => None,
        }
    }

    pub fn direct_sum(&self, other: &WDRep) -> WDRep {
        let mut out = self.clone();
        for (t, k) in other.terms() {
            out.add_term(k, t.clone());
        }
        out
    }

    pub fn dim(&self, m: &ModelInstance) -> Result<u64> {
        let mut d = 0;
        for (t, k) in self.terms() {
            d += k * t.r as u64 * m.get(&t.cls)?.dim as u64;
        }
        Ok(d)
    }

    /// Checks that every class resolves in `m`.
    pub fn resolve(&self, m: &ModelInstance) -> Result<()> {
        for (t, _) in self.terms() {
            m.idx(&t.cls)?;
        }
        Ok(())
    }

    /// True when every term lives over the unramified class.
    pub fn is_unramified(&self) -> bool {
        self.terms.keys().all(|t| t.cls.is_unit())
    }
}

impl fmt::Display for WDRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (t, k)) in self.terms().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if k > 1 {
                write!(f, "{k}*")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Serialize for WDRep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Contragredient at orbit level: every class goes to its dual.
pub fn rep_dual(x: &WDRep, m: &ModelInstance) -> Result<WDRep> {
    let mut out = WDRep::zero();
    for (t, k) in x.terms() {
        let c = m.get(&t.cls)?;
        out.add_term(k, Indecomposable::new(t.r, c.dual.clone()));
    }
    Ok(out)
}

/// Parses the text form and checks every class against `m`.
pub fn parse_rep(text: &str, m: &ModelInstance) -> Result<WDRep> {
    let x = parse_rep_unchecked(text)?;
    x.resolve(m)?;
    Ok(x)
}

/// Parses the text form without resolving class ids.
pub fn parse_rep_unchecked(text: &str) -> Result<WDRep> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.peek() == Some(b'0') {
        let save = p.pos;
        p.pos += 1;
        p.skip_ws();
        if p.at_end() {
            return Ok(WDRep::zero());
        }
        p.pos = save;
    }
    let mut out = WDRep::zero();
    loop {
        let (k, t) = p.term()?;
        out.add_term(k, t);
        p.skip_ws();
        match p.peek() {
            None => return Ok(out),
            Some(b'+') => p.pos += 1,
            Some(_) => return Err(p.err("expected '+' or end of input")),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected {lit:?}")))
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "integer out of range".into(),
            })
    }

    fn ident(&mut self) -> Result<ClassId> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c == b'\'') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a class id"));
        }
        Ok(ClassId::new(std::str::from_utf8(&self.src[start..self.pos]).unwrap()))
    }

    fn term(&mut self) -> Result<(u64, Indecomposable)> {
        self.skip_ws();
        let start = self.pos;
        let mut k = 1;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            k = self.int()?;
            self.expect("*")?;
            if k == 0 {
                return Err(Error::Parse {
                    pos: start,
                    msg: "multiplicity must be >= 1".into(),
                });
            }
        }
        self.expect("Sp_")?;
        let r_pos = self.pos;
        let r = self.int()?;
        if r == 0 || r > u32::MAX as u64 {
            return Err(Error::Parse {
                pos: r_pos,
                msg: "Sp-length must be >= 1".into(),
            });
        }
        self.expect("(")?;
        let cls = self.ident()?;
        self.expect(")")?;
        Ok((k, Indecomposable::new(r as u32, cls)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{IrreducibleClass, PairingEntry};
    use crate::rational::Rational;

    fn model() -> ModelInstance {
        let c = |id: &str, dim, slope: Rational, dual: &str| IrreducibleClass {
            id: id.into(),
            dim,
            slope,
            deg: 1,
            dual: dual.into(),
            minimal_sigma: false,
            minimal_eta: false,
        };
        let classes = vec![
            c("u", 1, Rational::zero(), "u"),
            c("s1", 2, Rational::half(), "s2"),
            c("s2", 2, Rational::half(), "s1"),
        ];
        let q = Rational::new(1, 4);
        let entries = [
            PairingEntry::new("s1", "s1", Rational::half()),
            PairingEntry::new("s2", "s2", Rational::half()),
            PairingEntry::new("s1", "s2", q),
        ];
        ModelInstance::new(classes, &entries, &["u".into()]).unwrap()
    }

    #[test]
    fn parses_single_term() {
        let m = model();
        let x = parse_rep("Sp_3(u)", &m).unwrap();
        assert_eq!(x, WDRep::single(3, "u"));
        assert_eq!(x.dim(&m).unwrap(), 3);
    }

    #[test]
    fn merges_equal_terms() {
        let m = model();
        let x = parse_rep("2*Sp_2(s1) + Sp_2(s1)", &m).unwrap();
        assert_eq!(x.num_distinct(), 1);
        assert_eq!(x.to_string(), "3*Sp_2(s1)");
        assert_eq!(x.dim(&m).unwrap(), 12);
    }

    #[test]
    fn zero_rep() {
        let m = model();
        let x = parse_rep(" 0 ", &m).unwrap();
        assert!(x.is_zero());
        assert_eq!(x.to_string(), "0");
        assert_eq!(x.dim(&m).unwrap(), 0);
    }

    #[test]
    fn canonical_order_and_whitespace() {
        let m = model();
        let x = parse_rep(" Sp_2 ( s2 )+Sp_1(u) +  Sp_1( s1)", &m).unwrap();
        assert_eq!(x.to_string(), "Sp_1(s1) + Sp_2(s2) + Sp_1(u)");
    }

    #[test]
    fn errors_carry_positions() {
        let m = model();
        match parse_rep("Sp_2(u) + Sq_1(u)", &m) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_rep("Sp_0(u)", &m), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_rep("Sp_1(zz)", &m), Err(Error::UnknownClass(_))));
        assert!(matches!(parse_rep("", &m), Err(Error::Parse { .. })));
        assert!(matches!(parse_rep("Sp_1(u) Sp_1(u)", &m), Err(Error::Parse { pos: 8, .. })));
    }

    #[test]
    fn dual_is_an_involution() {
        let m = model();
        assert_eq!(rep_dual(&WDRep::single(3, "u"), &m).unwrap(), WDRep::single(3, "u"));
        let x = parse_rep("Sp_2(s1)", &m).unwrap();
        let d = rep_dual(&x, &m).unwrap();
        assert_eq!(d, WDRep::single(2, "s2"));
        assert_eq!(rep_dual(&d, &m).unwrap(), x);
    }
}
