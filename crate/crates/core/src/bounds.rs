//! Lower and upper bounds for exponents of tensor products, checked on
//! concrete inputs, plus witnesses that attain them.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponents::{exponents_of, is_minimal_rep, tensor_exponents};
use crate::maxplus::{mp_vee, optimal_witness, pair_upper_bound, s_map, MaxPlusElem};
use crate::model::{ClassId, IrreducibleClass, Mode, ModelInstance, PairingEntry};
use crate::rational::Rational;
use crate::rep::{rep_dual, WDRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    A,
    AS,
    B,
    BIndec,
    BS,
    BSIrr,
    C,
    CIrr,
    CS,
    CSIrr,
    /// `v(x ∨ y)` against the pair bound in the max-plus ring.
    MaxPlus,
    /// `sw(x ⊗ y) <= v(S(x) ∨ S(y))`.
    SwanBridge,
    /// `varsigma(x ⊗ dual x)` against `(1 - 1/l) varsigma(x)` for the dim-`l` witnesses.
    SelfSlope,
}

impl Theorem {
    pub const ALL: [Theorem; 13] = [
        Theorem::A,
        Theorem::AS,
        Theorem::B,
        Theorem::BIndec,
        Theorem::BS,
        Theorem::BSIrr,
        Theorem::C,
        Theorem::CIrr,
        Theorem::CS,
        Theorem::CSIrr,
        Theorem::MaxPlus,
        Theorem::SwanBridge,
        Theorem::SelfSlope,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Theorem::A => "A",
            Theorem::AS => "AS",
            Theorem::B => "B",
            Theorem::BIndec => "B_indec",
            Theorem::BS => "BS",
            Theorem::BSIrr => "BS_irr",
            Theorem::C => "C",
            Theorem::CIrr => "C_irr",
            Theorem::CS => "CS",
            Theorem::CSIrr => "CS_irr",
            Theorem::MaxPlus => "MP",
            Theorem::SwanBridge => "SW_BRIDGE",
            Theorem::SelfSlope => "SELF_SLOPE",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Theorem::ALL
            .iter()
            .copied()
            .find(|th| th.label().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::InvalidParams(format!("unknown theorem label {t:?}")))
    }
}

impl Serialize for Theorem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckInputs {
    pub x: String,
    pub y: String,
    pub model: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub theorem: Theorem,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    pub equality: bool,
    /// False when the theorem's hypothesis fails; such rows are not violations.
    pub precondition_met: bool,
    pub inputs: CheckInputs,
}

impl CheckResult {
    fn new(theorem: Theorem, lhs: Rational, rhs: Rational, holds: bool, inputs: CheckInputs) -> Self {
        let equality = lhs == rhs;
        CheckResult {
            theorem,
            lhs,
            rhs,
            holds,
            equality,
            precondition_met: true,
            inputs,
        }
    }

    /// A row that counts against the theorem.
    pub fn is_violation(&self) -> bool {
        self.precondition_met && !self.holds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BVariant {
    Sum,
    IndecOrIrr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CVariant {
    General,
    Irreducible,
}

fn inputs(x: &WDRep, y: &WDRep, m: &ModelInstance) -> CheckInputs {
    CheckInputs {
        x: x.to_string(),
        y: y.to_string(),
        model: m.digest(),
    }
}

fn nonzero(x: &WDRep) -> Result<()> {
    if x.is_zero() {
        Err(Error::ZeroRepresentation)
    } else {
        Ok(())
    }
}

fn normalized(x: &WDRep, mode: Mode, m: &ModelInstance) -> Result<Rational> {
    Ok(exponents_of(x, m)?.normalized(mode)?.clone())
}

fn tensor_normalized(x: &WDRep, y: &WDRep, mode: Mode, m: &ModelInstance) -> Result<Rational> {
    Ok(tensor_exponents(x, y, m)?.normalized(mode)?.clone())
}

/// Single term of multiplicity one, with `r = 1` when `irreducible`.
fn require_single(x: &WDRep, irreducible: bool, what: &str) -> Result<()> {
    match x.as_indecomposable() {
        Some(t) if !irreducible || t.r == 1 => Ok(()),
        _ => Err(Error::Precondition(format!("{what} variant needs a single {} term, got {x}", if irreducible { "irreducible" } else { "indecomposable" }))),
    }
}

/// `eta(x ⊗ y) >= max(eta x, eta y) / 2` for minimal `x` (varsigma in sigma mode).
pub fn check_bound_a(x: &WDRep, y: &WDRep, m: &ModelInstance, mode: Mode) -> Result<CheckResult> {
    nonzero(x)?;
    nonzero(y)?;
    let lhs = tensor_normalized(x, y, mode, m)?;
    let rhs = Rational::max(&normalized(x, mode, m)?, &normalized(y, mode, m)?) * Rational::half();
    let holds = lhs >= rhs;
    let th = match mode {
        Mode::Eta => Theorem::A,
        Mode::Sigma => Theorem::AS,
    };
    let mut r = CheckResult::new(th, lhs, rhs, holds, inputs(x, y, m));
    r.precondition_met = is_minimal_rep(x, mode, m)?;
    Ok(r)
}

/// `eta(x ⊗ dual y)` against the diagonal terms `eta(x ⊗ dual x)`, `eta(y ⊗ dual y)`.
pub fn check_bound_b(x: &WDRep, y: &WDRep, m: &ModelInstance, mode: Mode, variant: BVariant) -> Result<CheckResult> {
    nonzero(x)?;
    nonzero(y)?;
    let th = match (mode, variant) {
        (Mode::Eta, BVariant::Sum) => Theorem::B,
        (Mode::Eta, BVariant::IndecOrIrr) => Theorem::BIndec,
        (Mode::Sigma, BVariant::Sum) => Theorem::BS,
        (Mode::Sigma, BVariant::IndecOrIrr) => Theorem::BSIrr,
    };
    if variant == BVariant::IndecOrIrr {
        require_single(x, mode == Mode::Sigma, th.label())?;
        require_single(y, mode == Mode::Sigma, th.label())?;
    }
    let (xd, yd) = (rep_dual(x, m)?, rep_dual(y, m)?);
    let lhs = tensor_normalized(x, &yd, mode, m)?;
    let a = tensor_normalized(x, &xd, mode, m)?;
    let b = tensor_normalized(y, &yd, mode, m)?;
    let rhs = match variant {
        BVariant::Sum => (a + b) * Rational::half(),
        BVariant::IndecOrIrr => Rational::max(&a, &b),
    };
    let holds = lhs >= rhs;
    Ok(CheckResult::new(th, lhs, rhs, holds, inputs(x, y, m)))
}

/// Upper bounds: `ar(x ⊗ y) <= dim(y) ar(x) + dim(x) ar(y) - min(ar x, ar y)`,
/// or `eta(x ⊗ y) <= max(eta x, eta y)` for irreducibles.
pub fn check_bound_c(x: &WDRep, y: &WDRep, m: &ModelInstance, mode: Mode, variant: CVariant) -> Result<CheckResult> {
    nonzero(x)?;
    nonzero(y)?;
    let th = match (mode, variant) {
        (Mode::Eta, CVariant::General) => Theorem::C,
        (Mode::Eta, CVariant::Irreducible) => Theorem::CIrr,
        (Mode::Sigma, CVariant::General) => Theorem::CS,
        (Mode::Sigma, CVariant::Irreducible) => Theorem::CSIrr,
    };
    let (lhs, rhs) = match variant {
        CVariant::General => {
            let (ex, ey) = (exponents_of(x, m)?, exponents_of(y, m)?);
            let (ax, ay) = (Rational::from(ex.exponent(mode)), Rational::from(ey.exponent(mode)));
            let lhs = Rational::from(tensor_exponents(x, y, m)?.exponent(mode));
            let rhs = Rational::from(ey.dim) * &ax + Rational::from(ex.dim) * &ay - Rational::min(&ax, &ay);
            (lhs, rhs)
        }
        CVariant::Irreducible => {
            require_single(x, true, th.label())?;
            require_single(y, true, th.label())?;
            let lhs = tensor_normalized(x, y, mode, m)?;
            let rhs = Rational::max(&normalized(x, mode, m)?, &normalized(y, mode, m)?);
            (lhs, rhs)
        }
    };
    let holds = lhs <= rhs;
    Ok(CheckResult::new(th, lhs, rhs, holds, inputs(x, y, m)))
}

/// `sw(x ⊗ y) <= v(S(x) ∨ S(y))` with `S` the max-plus image of the Weil restriction.
pub fn check_swan_bridge(x: &WDRep, y: &WDRep, m: &ModelInstance) -> Result<CheckResult> {
    let lhs = Rational::from(tensor_exponents(x, y, m)?.sw);
    let rhs = mp_vee(&rep_s_map(x, m)?, &rep_s_map(y, m)?).weight();
    let holds = lhs <= rhs;
    Ok(CheckResult::new(Theorem::SwanBridge, lhs, rhs, holds, inputs(x, y, m)))
}

/// `Σ k r m_i [slope_i]` over the terms `k Sp_r(i)`.
pub fn rep_s_map(x: &WDRep, m: &ModelInstance) -> Result<MaxPlusElem> {
    let mut parts = Vec::new();
    for (t, k) in x.terms() {
        let c = m.get(&t.cls)?;
        parts.push((k * t.r as u64 * c.dim as u64, c.slope.clone()));
    }
    s_map(&parts)
}

/// Exponent data of a pair of irreducible representations of general linear groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GLPair {
    pub m: u64,
    pub n: u64,
    pub ar_pair: i64,
    /// Number of unramified characters `chi` with `chi ρ ≅ dual π`.
    pub d: u64,
}

impl GLPair {
    pub fn check(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::Precondition("m and n must be >= 1".into()));
        }
        if self.d != 0 && (self.m != self.n || self.n % self.d != 0) {
            return Err(Error::Precondition(format!(
                "d = {} needs m = n and d | n (m = {}, n = {})",
                self.d, self.m, self.n
            )));
        }
        Ok(())
    }
}

/// `sw = ar - mn + d` and `varsigma = sw / mn`.
pub fn gl_pair_dictionary(p: &GLPair) -> Result<(i64, Rational)> {
    p.check()?;
    let mn = (p.m * p.n) as i64;
    let sw = p.ar_pair - mn + p.d as i64;
    if sw < 0 {
        return Err(Error::Precondition(format!("negative Swan exponent {sw} for {p:?}")));
    }
    Ok((sw, Rational::new(sw, mn)))
}

/// Inverse direction: the pair exponent from the Swan exponent.
pub fn gl_pair_from_swan(m: u64, n: u64, sw: i64, d: u64) -> Result<GLPair> {
    let p = GLPair {
        m,
        n,
        ar_pair: sw + (m * n) as i64 - d as i64,
        d,
    };
    p.check()?;
    gl_pair_dictionary(&p)?;
    Ok(p)
}

/// Model carrying the equality witnesses.
///
/// | id | dim | slope | deg | dual | `s(i, dual i)` |
/// |----|-----|-------|-----|------|----------------|
/// | u | 1 | 0 | 1 | u | 0 |
/// | t | 1 | 0 | 1 | t | 0 |
/// | chi1, chi1d | 1 | 1 | 1 | each other | 0 |
/// | w2 | 2 | 1/2 | 2 | w2 | 1/4 |
/// | w3 | 3 | 1/3 | 1 | w3 | 2/9 |
/// | w5 | 5 | 1/5 | 1 | w5 | 4/25 |
pub fn witness_model() -> ModelInstance {
    let c = |id: &str, dim, slope: Rational, deg, dual: &str| IrreducibleClass {
        id: id.into(),
        dim,
        slope,
        deg,
        dual: dual.into(),
        minimal_sigma: false,
        minimal_eta: false,
    };
    let classes = vec![
        c("u", 1, Rational::zero(), 1, "u"),
        c("t", 1, Rational::zero(), 1, "t"),
        c("chi1", 1, Rational::one(), 1, "chi1d"),
        c("chi1d", 1, Rational::one(), 1, "chi1"),
        c("w2", 2, Rational::half(), 2, "w2"),
        c("w3", 3, Rational::new(1, 3), 1, "w3"),
        c("w5", 5, Rational::new(1, 5), 1, "w5"),
    ];
    let entries = [
        PairingEntry::new("chi1", "chi1", Rational::one()),
        PairingEntry::new("chi1d", "chi1d", Rational::one()),
        PairingEntry::new("chi1", "chi1d", Rational::zero()),
        PairingEntry::new("w2", "w2", Rational::new(1, 4)),
        PairingEntry::new("w3", "w3", Rational::new(2, 9)),
        PairingEntry::new("w5", "w5", Rational::new(4, 25)),
    ];
    let chars: Vec<ClassId> = ["u", "t", "chi1", "chi1d"].into_iter().map(ClassId::from).collect();
    ModelInstance::new(classes, &entries, &chars)
        .expect("witness model is well formed")
        .with_computed_flags()
}

/// Equality cases for A, AS, B, BS, C, CS, C_irr, the dim-`l` self slopes and
/// the max-plus pair bound.
pub fn sharpness_suite() -> Result<Vec<CheckResult>> {
    let m = witness_model();
    let one = |id: &str| WDRep::single(1, id);
    let w2 = one("w2");
    let mut out = vec![
        check_bound_a(&w2, &w2, &m, Mode::Eta)?,
        check_bound_a(&w2, &w2, &m, Mode::Sigma)?,
        check_bound_b(&w2, &w2, &m, Mode::Eta, BVariant::Sum)?,
        check_bound_b(&w2, &w2, &m, Mode::Sigma, BVariant::Sum)?,
        check_bound_c(&one("t"), &one("u"), &m, Mode::Eta, CVariant::General)?,
        check_bound_c(&one("chi1"), &one("u"), &m, Mode::Sigma, CVariant::General)?,
        check_bound_c(&one("chi1"), &w2, &m, Mode::Eta, CVariant::Irreducible)?,
    ];
    for id in ["w3", "w5"] {
        let x = one(id);
        let l = Rational::from(m.get(&id.into())?.dim);
        let lhs = tensor_normalized(&x, &rep_dual(&x, &m)?, Mode::Sigma, &m)?;
        let rhs = (Rational::one() - l.recip()) * normalized(&x, Mode::Sigma, &m)?;
        let holds = lhs == rhs;
        out.push(CheckResult::new(Theorem::SelfSlope, lhs, rhs, holds, inputs(&x, &x, &m)));
    }
    out.push(max_plus_check(2, &Rational::from_int(3), 1, &Rational::from_int(5))?);
    Ok(out)
}

/// `v(σ1 ∨ σ2)` for the optimal witnesses against the pair bound; equality expected.
pub fn max_plus_check(d1: i64, v1: &Rational, d2: i64, v2: &Rational) -> Result<CheckResult> {
    let (a, b) = optimal_witness(d1, v1, d2, v2)?;
    let lhs = mp_vee(&a, &b).weight();
    let rhs = pair_upper_bound(d1, v1, d2, v2);
    let holds = lhs <= rhs;
    Ok(CheckResult::new(
        Theorem::MaxPlus,
        lhs,
        rhs,
        holds,
        CheckInputs {
            x: a.to_string(),
            y: b.to_string(),
            model: String::new(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_model;
    use crate::rep::parse_rep;

    #[test]
    fn witness_model_is_valid() {
        let m = witness_model();
        let r = validate_model(&m);
        assert!(r.ok, "{:?}", r.violations);
        assert!(m.get(&"w2".into()).unwrap().minimal_eta);
    }

    #[test]
    fn a_examples() {
        let m = witness_model();
        let u = WDRep::single(1, "u");
        let r = check_bound_a(&u, &u, &m, Mode::Eta).unwrap();
        assert!(r.holds && r.equality && r.precondition_met);
        assert_eq!(r.lhs, Rational::zero());
        let x = parse_rep("Sp_3(u) + Sp_1(u)", &m).unwrap();
        let y = parse_rep("Sp_2(w3) + Sp_1(chi1)", &m).unwrap();
        let r = check_bound_a(&x, &y, &m, Mode::Eta).unwrap();
        assert!(r.holds && r.precondition_met);
        let ey = exponents_of(&y, &m).unwrap();
        assert!(r.lhs >= *ey.eta().unwrap());
        let w2 = WDRep::single(1, "w2");
        let r = check_bound_a(&w2, &w2, &m, Mode::Eta).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (Rational::new(3, 4), Rational::new(3, 4)));
        assert!(r.equality);
    }

    #[test]
    fn non_minimal_is_flagged_not_counted() {
        let m = witness_model();
        let t = WDRep::single(1, "t");
        let r = check_bound_a(&t, &t, &m, Mode::Eta).unwrap();
        assert!(!r.precondition_met);
        assert!(!r.is_violation());
    }

    #[test]
    fn b_examples() {
        let m = witness_model();
        let x = parse_rep("Sp_2(w3) + Sp_1(t)", &m).unwrap();
        let r = check_bound_b(&x, &x, &m, Mode::Eta, BVariant::Sum).unwrap();
        assert!(r.holds && r.equality);
        let r = check_bound_b(&WDRep::single(2, "w2"), &WDRep::single(1, "w5"), &m, Mode::Eta, BVariant::IndecOrIrr).unwrap();
        assert!(r.holds);
        let r = check_bound_b(&WDRep::single(1, "w3"), &WDRep::single(1, "w5"), &m, Mode::Sigma, BVariant::IndecOrIrr).unwrap();
        assert_eq!(r.lhs, Rational::new(1, 3));
        assert!(r.holds);
        assert!(check_bound_b(&x, &x, &m, Mode::Eta, BVariant::IndecOrIrr).is_err());
        assert!(check_bound_b(&WDRep::single(2, "w2"), &x, &m, Mode::Sigma, BVariant::IndecOrIrr).is_err());
    }

    #[test]
    fn c_examples() {
        let m = witness_model();
        let r = check_bound_c(&WDRep::single(2, "u"), &WDRep::single(3, "u"), &m, Mode::Eta, CVariant::General).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (Rational::from_int(4), Rational::from_int(6)));
        assert!(r.holds && !r.equality);
        let r = check_bound_c(&WDRep::single(1, "t"), &WDRep::single(1, "u"), &m, Mode::Eta, CVariant::General).unwrap();
        assert!(r.holds && r.equality);
        assert_eq!(r.lhs, Rational::one());
        let u = WDRep::single(1, "u");
        let r = check_bound_c(&u, &u, &m, Mode::Eta, CVariant::General).unwrap();
        assert!(r.holds && r.equality);
        assert!(check_bound_c(&WDRep::single(2, "w2"), &u, &m, Mode::Eta, CVariant::Irreducible).is_err());
        assert!(matches!(check_bound_c(&WDRep::zero(), &u, &m, Mode::Eta, CVariant::General), Err(Error::ZeroRepresentation)));
    }

    #[test]
    fn gl_dictionary() {
        let p = GLPair { m: 2, n: 2, ar_pair: 3, d: 2 };
        assert_eq!(gl_pair_dictionary(&p).unwrap(), (1, Rational::new(1, 4)));
        let p = GLPair { m: 1, n: 1, ar_pair: 0, d: 1 };
        assert_eq!(gl_pair_dictionary(&p).unwrap().0, 0);
        let p = GLPair { m: 2, n: 3, ar_pair: 9, d: 0 };
        assert_eq!(gl_pair_dictionary(&p).unwrap().0, 3);
        assert!(gl_pair_dictionary(&GLPair { m: 2, n: 3, ar_pair: 9, d: 1 }).is_err());
        assert!(gl_pair_dictionary(&GLPair { m: 4, n: 4, ar_pair: 9, d: 3 }).is_err());
        assert!(gl_pair_dictionary(&GLPair { m: 2, n: 2, ar_pair: 1, d: 0 }).is_err());
        assert_eq!(gl_pair_from_swan(2, 2, 1, 2).unwrap().ar_pair, 3);
    }

    #[test]
    fn sharpness_rows_are_equalities() {
        let rows = sharpness_suite().unwrap();
        for r in &rows {
            assert!(r.holds && r.equality, "{r:?}");
        }
        let labels: Vec<&str> = rows.iter().map(|r| r.theorem.label()).collect();
        assert_eq!(labels, ["A", "AS", "B", "BS", "C", "CS", "C_irr", "SELF_SLOPE", "SELF_SLOPE", "MP"]);
        assert_eq!(rows[7].lhs, Rational::new(2, 9));
        assert_eq!(rows[8].lhs, Rational::new(4, 25));
        assert_eq!(rows[9].lhs, Rational::from_int(10));
    }
}
