//! Irreducible twist-orbit classes, the tensor-slope pairing between them, and
//! the axiom checks every downstream computation relies on.
//!
//! A class stands for an unramified-twist orbit of irreducible Weil-group
//! representations. The pairing `s(i, j)` is the Swan slope of the tensor
//! product of the two classes. Axiom labels:
//!
//! | label | statement |
//! |-------|-----------|
//! | M1 | `m_i * m_j * s(i,j)` is an integer |
//! | M2 | `s(u,i) = slope(i)` |
//! | M3 | `s(i,j) <= max(slope_i, slope_j)`, with equality when the slopes differ |
//! | M4 | `s(i,j) = s(dual i, dual j)` |
//! | M5 | `s(i, dual i) <= s(i, k)` for every `k` |
//! | M6 | `D(i,j) <= max(D(i,k), D(k,j))` where `D(i,j) = s(i, dual j)` |
//! | M7 | sigma-minimal classes have `s(i, dual i) >= slope_i / 2` |
//! | M8 | eta-minimal classes satisfy the half-max lower bound against every class |
//! | twist-witness | some character `x` of the model has `s(x, i) <= 2 s(i, dual i)` |

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exponents;
use crate::rational::Rational;

pub const UNIT_ID: &str = "u";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(String);

impl ClassId {
    pub fn new(s: impl Into<String>) -> Self {
        ClassId(s.into())
    }

    pub fn unit() -> Self {
        ClassId(UNIT_ID.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0 == UNIT_ID
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ClassId {
    fn from(s: &str) -> Self {
        ClassId::new(s)
    }
}

/// Which normalized exponent a minimality or bound question is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Artin exponent per dimension.
    Eta,
    /// Swan exponent per dimension.
    Sigma,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eta" => Ok(Mode::Eta),
            "sigma" | "varsigma" => Ok(Mode::Sigma),
            other => Err(Error::InvalidParams(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Eta => "eta",
            Mode::Sigma => "sigma",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleClass {
    pub id: ClassId,
    pub dim: u32,
    pub slope: Rational,
    /// Number of unramified characters fixing the class under twisting.
    pub deg: u32,
    pub dual: ClassId,
    pub minimal_sigma: bool,
    pub minimal_eta: bool,
}

impl IrreducibleClass {
    pub fn is_char(&self) -> bool {
        self.dim == 1
    }

    /// `dim * slope`, the Swan exponent of a member of the orbit.
    pub fn swan(&self) -> Rational {
        &self.slope * Rational::from(self.dim)
    }
}

/// Dense symmetric table of tensor slopes, indexed by class position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingTable {
    n: usize,
    s: Vec<Rational>,
}

impl PairingTable {
    pub fn new(n: usize) -> Self {
        PairingTable {
            n,
            s: vec![Rational::zero(); n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.s[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.s[i * self.n + j] = v.clone();
        self.s[j * self.n + i] = v;
    }
}

/// A complete model: classes, pairing and the in-model character set.
///
/// Construction only checks structure (ids resolve, the dual map is an
/// involution, the unramified class exists). Axioms are checked by
/// [`validate_model`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelInstance {
    classes: Vec<IrreducibleClass>,
    index: HashMap<ClassId, usize>,
    duals: Vec<usize>,
    pairing: PairingTable,
    characters: Vec<usize>,
    unit: usize,
}

impl ModelInstance {
    /// Builds a model from class data, a possibly partial list of pairing
    /// entries and the character ids. Entries forced by M2/M3 (or mirrored
    /// through M4) may be omitted.
    pub fn new(
        classes: Vec<IrreducibleClass>,
        entries: &[PairingEntry],
        characters: &[ClassId],
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(classes.len());
        for (k, c) in classes.iter().enumerate() {
            if c.dim == 0 {
                return Err(Error::BadClass(c.id.clone(), "dim must be >= 1".into()));
            }
            if c.deg == 0 {
                return Err(Error::BadClass(c.id.clone(), "deg must be >= 1".into()));
            }
            if index.insert(c.id.clone(), k).is_some() {
                return Err(Error::DuplicateClass(c.id.clone()));
            }
        }
        let lookup = |id: &ClassId| index.get(id).copied().ok_or_else(|| Error::UnknownClass(id.clone()));
        let mut duals = Vec::with_capacity(classes.len());
        for c in &classes {
            duals.push(lookup(&c.dual)?);
        }
        for (k, &d) in duals.iter().enumerate() {
            if duals[d] != k {
                return Err(Error::DualNotInvolutive(classes[k].id.clone()));
            }
        }
        let unit = *index.get(&ClassId::unit()).ok_or(Error::MissingUnit)?;
        let chars = characters.iter().map(lookup).collect::<Result<Vec<_>>>()?;

        let n = classes.len();
        let mut given: Vec<Option<Rational>> = vec![None; n * n];
        for e in entries {
            let (i, j) = (lookup(&e.i)?, lookup(&e.j)?);
            for (a, b) in [(i, j), (j, i)] {
                match &given[a * n + b] {
                    Some(v) if v != &e.slope => {
                        return Err(Error::ConflictingPairing(e.i.clone(), e.j.clone()))
                    }
                    _ => given[a * n + b] = Some(e.slope.clone()),
                }
            }
        }
        let mut pairing = PairingTable::new(n);
        for i in 0..n {
            for j in i..n {
                let v = if let Some(v) = &given[i * n + j] {
                    v.clone()
                } else if i == unit {
                    classes[j].slope.clone()
                } else if j == unit {
                    classes[i].slope.clone()
                } else if classes[i].slope != classes[j].slope {
                    Rational::max(&classes[i].slope, &classes[j].slope)
                } else if classes[i].slope.is_zero() {
                    Rational::zero()
                } else if let Some(v) = &given[duals[i] * n + duals[j]] {
                    v.clone()
                } else {
                    return Err(Error::MissingPairing(classes[i].id.clone(), classes[j].id.clone()));
                };
                pairing.set(i, j, v);
            }
        }
        Ok(ModelInstance {
            classes,
            index,
            duals,
            pairing,
            characters: chars,
            unit,
        })
    }

    /// The model with the single class `u`.
    pub fn unit_only() -> Self {
        let u = IrreducibleClass {
            id: ClassId::unit(),
            dim: 1,
            slope: Rational::zero(),
            deg: 1,
            dual: ClassId::unit(),
            minimal_sigma: true,
            minimal_eta: true,
        };
        ModelInstance::new(vec![u], &[], &[ClassId::unit()]).expect("unit model is well formed")
    }

    pub fn classes(&self) -> &[IrreducibleClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, idx: usize) -> &IrreducibleClass {
        &self.classes[idx]
    }

    pub fn idx(&self, id: &ClassId) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownClass(id.clone()))
    }

    pub fn get(&self, id: &ClassId) -> Result<&IrreducibleClass> {
        Ok(&self.classes[self.idx(id)?])
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, idx: usize) -> usize {
        self.duals[idx]
    }

    /// Tensor slope `s(i, j)` by class position.
    pub fn s(&self, i: usize, j: usize) -> &Rational {
        self.pairing.get(i, j)
    }

    pub fn pairing(&self) -> &PairingTable {
        &self.pairing
    }

    /// Positions of the in-model characters.
    pub fn characters(&self) -> &[usize] {
        &self.characters
    }

    pub fn is_character(&self, idx: usize) -> bool {
        self.characters.contains(&idx)
    }

    /// Copy of the model with both minimality flags recomputed from the data.
    pub fn with_computed_flags(mut self) -> Self {
        let flags: Vec<(bool, bool)> = (0..self.len())
            .map(|k| (minimal_by_idx(k, Mode::Sigma, &self), minimal_by_idx(k, Mode::Eta, &self)))
            .collect();
        for (c, (sig, eta)) in self.classes.iter_mut().zip(flags) {
            c.minimal_sigma = sig;
            c.minimal_eta = eta;
        }
        self
    }

    /// The same model with every class replaced by its dual.
    ///
    /// Ids are relabelled through the dual map, so class `i` of the result
    /// carries the data of `dual(i)`.
    pub fn dualized(&self) -> ModelInstance {
        let n = self.len();
        let mut classes = self.classes.clone();
        for k in 0..n {
            let src = &self.classes[self.duals[k]];
            classes[k].dim = src.dim;
            classes[k].slope = src.slope.clone();
            classes[k].deg = src.deg;
            classes[k].minimal_sigma = src.minimal_sigma;
            classes[k].minimal_eta = src.minimal_eta;
        }
        let mut pairing = PairingTable::new(n);
        for i in 0..n {
            for j in i..n {
                pairing.set(i, j, self.s(self.duals[i], self.duals[j]).clone());
            }
        }
        ModelInstance {
            classes,
            index: self.index.clone(),
            duals: self.duals.clone(),
            pairing,
            characters: self.characters.iter().map(|&c| self.duals[c]).collect(),
            unit: self.unit,
        }
    }

    pub fn to_file(&self) -> ModelFile {
        let classes = self
            .classes
            .iter()
            .map(|c| ClassEntry {
                id: c.id.clone(),
                dim: c.dim,
                slope: c.slope.clone(),
                deg: c.deg,
                dual: c.dual.clone(),
                flags: Some(ClassFlags {
                    minimal_sigma: c.minimal_sigma,
                    minimal_eta: c.minimal_eta,
                }),
            })
            .collect();
        let mut pairing = Vec::new();
        for i in 0..self.len() {
            for j in i..self.len() {
                pairing.push(PairingEntry {
                    i: self.classes[i].id.clone(),
                    j: self.classes[j].id.clone(),
                    slope: self.s(i, j).clone(),
                });
            }
        }
        ModelFile {
            classes,
            pairing,
            characters: self.characters.iter().map(|&k| self.classes[k].id.clone()).collect(),
        }
    }

    pub fn from_file(file: &ModelFile) -> Result<Self> {
        let flagless = file.classes.iter().all(|c| c.flags.is_none());
        let classes = file
            .classes
            .iter()
            .map(|c| IrreducibleClass {
                id: c.id.clone(),
                dim: c.dim,
                slope: c.slope.clone(),
                deg: c.deg,
                dual: c.dual.clone(),
                minimal_sigma: c.flags.as_ref().is_some_and(|f| f.minimal_sigma),
                minimal_eta: c.flags.as_ref().is_some_and(|f| f.minimal_eta),
            })
            .collect();
        let m = ModelInstance::new(classes, &file.pairing, &file.characters)?;
        Ok(if flagless { m.with_computed_flags() } else { m })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        ModelInstance::from_file(&file)
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub classes: Vec<ClassEntry>,
    #[serde(default)]
    pub pairing: Vec<PairingEntry>,
    pub characters: Vec<ClassId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub id: ClassId,
    pub dim: u32,
    pub slope: Rational,
    pub deg: u32,
    pub dual: ClassId,
    /// Computed on load when no class of the file carries flags.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<ClassFlags>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFlags {
    #[serde(default)]
    pub minimal_sigma: bool,
    #[serde(default)]
    pub minimal_eta: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingEntry {
    pub i: ClassId,
    pub j: ClassId,
    pub slope: Rational,
}

impl PairingEntry {
    pub fn new(i: impl Into<ClassId>, j: impl Into<ClassId>, slope: Rational) -> Self {
        PairingEntry {
            i: i.into(),
            j: j.into(),
            slope,
        }
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
    M7,
    M8,
    /// `dim * slope` must be an integer.
    SwanIntegral,
    /// `deg` divides `dim`.
    DegDivides,
    /// Characters have `deg = 1`.
    CharDeg,
    /// The dual class has the same dim, slope and deg.
    DualPreserves,
    /// Characters are dim-1 classes and include `u`.
    CharSet,
    /// A character tensored with its dual is unramified: `s(x, dual x) = 0`.
    CharSelfPairing,
    /// The characters of the model reach a minimal twist of every class.
    TwistWitness,
    /// `u` has dim 1, slope 0 and is self-dual.
    Unit,
    NegativeSlope,
    FlagSigma,
    FlagEta,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::M1 => "M1",
            Axiom::M2 => "M2",
            Axiom::M3 => "M3",
            Axiom::M4 => "M4",
            Axiom::M5 => "M5",
            Axiom::M6 => "M6",
            Axiom::M7 => "M7",
            Axiom::M8 => "M8",
            Axiom::SwanIntegral => "swan-integral",
            Axiom::DegDivides => "deg-divides-dim",
            Axiom::CharDeg => "char-deg",
            Axiom::DualPreserves => "dual-preserves",
            Axiom::CharSet => "char-set",
            Axiom::CharSelfPairing => "char-self-pairing",
            Axiom::TwistWitness => "twist-witness",
            Axiom::Unit => "unit",
            Axiom::NegativeSlope => "negative-slope",
            Axiom::FlagSigma => "flag-minimal-sigma",
            Axiom::FlagEta => "flag-minimal-eta",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub classes: Vec<ClassId>,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// Violation counts per axiom label.
    pub fn counts(&self) -> BTreeMap<Axiom, usize> {
        let mut out = BTreeMap::new();
        for v in &self.violations {
            *out.entry(v.axiom).or_insert(0) += 1;
        }
        out
    }
}

/// Checks M1-M8 and the class invariants exhaustively.
///
/// Every violation is reported with the class ids that witness it and the two
/// sides of the failed relation.
pub fn validate_model(m: &ModelInstance) -> ValidationReport {
    let n = m.len();
    let mut out = Vec::new();
    let ids = |ks: &[usize]| ks.iter().map(|&k| m.classes[k].id.clone()).collect::<Vec<_>>();
    let mut push = |axiom, ks: &[usize], lhs: Rational, rhs: Rational| {
        out.push(Violation {
            axiom,
            classes: ids(ks),
            lhs,
            rhs,
        })
    };

    // Class invariants.
    let u = m.unit;
    let uc = &m.classes[u];
    if uc.dim != 1 || !uc.slope.is_zero() || m.duals[u] != u {
        push(Axiom::Unit, &[u], uc.slope.clone(), Rational::zero());
    }
    for (k, c) in m.classes.iter().enumerate() {
        if c.slope.is_negative() {
            push(Axiom::NegativeSlope, &[k], c.slope.clone(), Rational::zero());
        }
        if !c.swan().is_integer() {
            push(Axiom::SwanIntegral, &[k], c.swan(), c.swan().floor_to_grid(1));
        }
        if c.dim % c.deg != 0 {
            push(Axiom::DegDivides, &[k], Rational::from(c.deg), Rational::from(c.dim));
        }
        if c.dim == 1 && c.deg != 1 {
            push(Axiom::CharDeg, &[k], Rational::from(c.deg), Rational::one());
        }
        let d = &m.classes[m.duals[k]];
        if d.dim != c.dim || d.slope != c.slope || d.deg != c.deg {
            push(Axiom::DualPreserves, &[k, m.duals[k]], c.slope.clone(), d.slope.clone());
        }
        if c.is_char() && !m.s(k, m.duals[k]).is_zero() {
            push(Axiom::CharSelfPairing, &[k], m.s(k, m.duals[k]).clone(), Rational::zero());
        }
    }
    if !m.characters.contains(&u) {
        push(Axiom::CharSet, &[u], Rational::zero(), Rational::one());
    }
    for &x in &m.characters {
        if !m.classes[x].is_char() {
            push(Axiom::CharSet, &[x], Rational::from(m.classes[x].dim), Rational::one());
        }
    }

    for i in 0..n {
        let ci = &m.classes[i];
        for j in i..n {
            let cj = &m.classes[j];
            let s = m.s(i, j);
            // M1
            let scaled = s * Rational::from(ci.dim as u64 * cj.dim as u64);
            if !scaled.is_integer() {
                push(Axiom::M1, &[i, j], scaled.clone(), scaled.floor_to_grid(1));
            }
            // M3
            let top = Rational::max(&ci.slope, &cj.slope);
            if s > &top || (ci.slope != cj.slope && s != &top) || s.is_negative() {
                push(Axiom::M3, &[i, j], s.clone(), top);
            }
            // M4
            let mirrored = m.s(m.duals[i], m.duals[j]);
            if s != mirrored {
                push(Axiom::M4, &[i, j], s.clone(), mirrored.clone());
            }
        }
        // M2
        if m.s(u, i) != &ci.slope {
            push(Axiom::M2, &[u, i], m.s(u, i).clone(), ci.slope.clone());
        }
        // M5
        let own = m.s(i, m.duals[i]);
        for k in 0..n {
            if own > m.s(i, k) {
                push(Axiom::M5, &[i, k], own.clone(), m.s(i, k).clone());
            }
        }
    }

    // M6 on D(i,j) = s(i, dual j).
    let dist = |i: usize, j: usize| m.s(i, m.duals[j]);
    for i in 0..n {
        for j in 0..n {
            let dij = dist(i, j);
            for k in 0..n {
                let bound = Rational::max(dist(i, k), dist(k, j));
                if dij > &bound {
                    push(Axiom::M6, &[i, j, k], dij.clone(), bound);
                }
            }
        }
    }

    for (i, ci) in m.classes.iter().enumerate() {
        let sigma_min = minimal_by_idx(i, Mode::Sigma, m);
        let eta_min = minimal_by_idx(i, Mode::Eta, m);
        if ci.minimal_sigma != sigma_min {
            push(Axiom::FlagSigma, &[i], bool_q(ci.minimal_sigma), bool_q(sigma_min));
        }
        if ci.minimal_eta != eta_min {
            push(Axiom::FlagEta, &[i], bool_q(ci.minimal_eta), bool_q(eta_min));
        }
        let own = m.s(i, m.duals[i]);
        let twice = own * Rational::from_int(2);
        if let Some(&x) = m.characters.iter().min_by(|&&a, &&b| m.s(a, i).cmp(m.s(b, i))) {
            if m.s(x, i) > &twice {
                push(Axiom::TwistWitness, &[i, x], m.s(x, i).clone(), twice);
            }
        }
        // M7
        if ci.minimal_sigma {
            let own = m.s(i, m.duals[i]);
            let half = &ci.slope * Rational::half();
            if own < &half {
                push(Axiom::M7, &[i], own.clone(), half);
            }
        }
        // M8
        if ci.minimal_eta {
            let eta_i = exponents::irreducible_eta(i, m);
            for j in 0..n {
                let eta_j = exponents::irreducible_eta(j, m);
                let (ar, _, dim) = exponents::kernel_q(1, i, 1, j, m);
                let lhs = ar / Rational::from(dim);
                let rhs = Rational::max(&eta_i, &eta_j) * Rational::half();
                if lhs < rhs {
                    push(Axiom::M8, &[i, j], lhs, rhs);
                }
            }
        }
    }

    ValidationReport {
        ok: out.is_empty(),
        violations: out,
    }
}

fn bool_q(b: bool) -> Rational {
    Rational::from_int(b as i64)
}

/// In-model minimality of a single class.
///
/// `Sigma`: no in-model character lowers the Swan slope by twisting.
/// `Eta`: no in-model character lowers the Artin exponent by twisting.
pub fn is_minimal_class(id: &ClassId, mode: Mode, m: &ModelInstance) -> Result<bool> {
    Ok(minimal_by_idx(m.idx(id)?, mode, m))
}

pub(crate) fn minimal_by_idx(i: usize, mode: Mode, m: &ModelInstance) -> bool {
    let c = &m.classes[i];
    match mode {
        Mode::Sigma => m.characters.iter().all(|&x| m.s(x, i) >= &c.slope),
        Mode::Eta => {
            let own = exponents::irreducible_artin(i, m);
            m.characters
                .iter()
                .all(|&x| exponents::twisted_irreducible_artin(x, i, m) >= own)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(id: &str, dim: u32, slope: Rational, deg: u32, dual: &str) -> IrreducibleClass {
        IrreducibleClass {
            id: id.into(),
            dim,
            slope,
            deg,
            dual: dual.into(),
            minimal_sigma: false,
            minimal_eta: false,
        }
    }

    fn unit() -> IrreducibleClass {
        class("u", 1, Rational::zero(), 1, "u")
    }

    #[test]
    fn unit_only_model_is_valid() {
        let m = ModelInstance::new(vec![unit()], &[], &["u".into()])
            .unwrap()
            .with_computed_flags();
        let report = validate_model(&m);
        assert!(report.ok, "{:?}", report.violations);
        assert_eq!(m.s(0, 0), &Rational::zero());
        assert!(is_minimal_class(&"u".into(), Mode::Eta, &m).unwrap());
        assert!(is_minimal_class(&"u".into(), Mode::Sigma, &m).unwrap());
    }

    #[test]
    fn max_rule_violation_is_reported() {
        let classes = vec![
            unit(),
            class("i", 1, Rational::from_int(1), 1, "i"),
            class("j", 1, Rational::from_int(2), 1, "j"),
        ];
        let entries = [
            PairingEntry::new("i", "j", Rational::new(3, 2)),
            PairingEntry::new("i", "i", Rational::zero()),
            PairingEntry::new("j", "j", Rational::zero()),
        ];
        let m = ModelInstance::new(classes, &entries, &["u".into(), "i".into(), "j".into()])
            .unwrap()
            .with_computed_flags();
        let report = validate_model(&m);
        assert!(!report.ok);
        let m3: Vec<_> = report.violations.iter().filter(|v| v.axiom == Axiom::M3).collect();
        assert_eq!(m3.len(), 1);
        assert_eq!(m3[0].classes, vec![ClassId::from("i"), ClassId::from("j")]);
        assert_eq!(m3[0].lhs, Rational::new(3, 2));
        assert_eq!(m3[0].rhs, Rational::from_int(2));
    }

    #[test]
    fn flags_are_computed_when_absent() {
        let text = r#"{
            "classes": [
                {"id": "u", "dim": 1, "slope": "0", "deg": 1, "dual": "u"},
                {"id": "w", "dim": 2, "slope": "1/2", "deg": 2, "dual": "w"}
            ],
            "pairing": [{"i": "w", "j": "w", "slope": "1/4"}],
            "characters": ["u"]
        }"#;
        let m = ModelInstance::from_json(text).unwrap();
        assert!(validate_model(&m).ok);
        assert!(m.get(&"w".into()).unwrap().minimal_eta);
        let again = ModelInstance::from_json(&m.to_json()).unwrap();
        assert_eq!(again.to_json(), m.to_json());
    }

    #[test]
    fn unreachable_minimal_twist_is_reported() {
        let two = Rational::from_int(2);
        let classes = vec![
            unit(),
            class("c", 1, two.clone(), 1, "c"),
            class("t", 4, two.clone(), 2, "t"),
        ];
        let entries = [
            PairingEntry::new("c", "c", Rational::zero()),
            PairingEntry::new("t", "t", Rational::zero()),
            PairingEntry::new("c", "t", Rational::one()),
        ];
        let m = ModelInstance::new(classes, &entries, &["u".into(), "c".into()])
            .unwrap()
            .with_computed_flags();
        let report = validate_model(&m);
        let tw: Vec<_> = report.violations.iter().filter(|v| v.axiom == Axiom::TwistWitness).collect();
        assert_eq!(tw.len(), 1, "{:?}", report.violations);
        assert_eq!(tw[0].classes, vec![ClassId::from("t"), ClassId::from("c")]);
        assert_eq!(tw[0].lhs, Rational::one());
    }

    #[test]
    fn diagonal_minimality_violation_is_reported() {
        // i, k dim 2 at slope 1/2 and self-dual; s(i,i) = 1/2 > s(i,k) = 1/4.
        let half = Rational::half();
        let classes = vec![
            unit(),
            class("i", 2, half.clone(), 1, "i"),
            class("k", 2, half.clone(), 1, "k"),
        ];
        let entries = [
            PairingEntry::new("i", "i", half.clone()),
            PairingEntry::new("k", "k", half.clone()),
            PairingEntry::new("i", "k", Rational::new(1, 4)),
        ];
        let m = ModelInstance::new(classes, &entries, &["u".into()])
            .unwrap()
            .with_computed_flags();
        let report = validate_model(&m);
        assert!(report.violations.iter().any(|v| v.axiom == Axiom::M5
            && v.classes == vec![ClassId::from("i"), ClassId::from("k")]
            && v.lhs == half
            && v.rhs == Rational::new(1, 4)));
    }

    #[test]
    fn structural_errors_are_distinct() {
        let bad_dual = vec![unit(), class("a", 2, Rational::zero(), 1, "b"), class("b", 2, Rational::zero(), 1, "b")];
        assert!(matches!(
            ModelInstance::new(bad_dual, &[], &["u".into()]),
            Err(Error::DualNotInvolutive(_))
        ));
        let dangling = vec![unit(), class("a", 2, Rational::zero(), 1, "zz")];
        assert!(matches!(
            ModelInstance::new(dangling, &[], &["u".into()]),
            Err(Error::UnknownClass(_))
        ));
        let dup = vec![unit(), unit()];
        assert!(matches!(ModelInstance::new(dup, &[], &["u".into()]), Err(Error::DuplicateClass(_))));
        let no_unit = vec![class("a", 1, Rational::zero(), 1, "a")];
        assert!(matches!(ModelInstance::new(no_unit, &[], &[]), Err(Error::MissingUnit)));
    }

    #[test]
    fn ambiguous_omission_is_an_error() {
        let half = Rational::half();
        let classes = vec![unit(), class("i", 2, half.clone(), 1, "i"), class("k", 2, half, 1, "k")];
        let err = ModelInstance::new(classes, &[], &["u".into()]).unwrap_err();
        assert!(matches!(err, Error::MissingPairing(_, _)));
    }

    #[test]
    fn forced_entries_are_reconstructed() {
        let classes = vec![
            unit(),
            class("t", 1, Rational::zero(), 1, "t"),
            class("x", 1, Rational::from_int(2), 1, "x"),
        ];
        let entries = [PairingEntry::new("x", "x", Rational::zero())];
        let m = ModelInstance::new(classes, &entries, &["u".into(), "t".into(), "x".into()]).unwrap();
        assert_eq!(m.s(0, 2), &Rational::from_int(2));
        assert_eq!(m.s(1, 2), &Rational::from_int(2));
        assert_eq!(m.s(0, 1), &Rational::zero());
    }

    #[test]
    fn tame_character_is_sigma_but_not_eta_minimal() {
        let classes = vec![unit(), class("t", 1, Rational::zero(), 1, "t")];
        let m = ModelInstance::new(classes, &[], &["u".into(), "t".into()]).unwrap();
        let t = ClassId::from("t");
        assert!(is_minimal_class(&t, Mode::Sigma, &m).unwrap());
        assert!(!is_minimal_class(&t, Mode::Eta, &m).unwrap());
        assert!(is_minimal_class(&"nope".into(), Mode::Eta, &m).is_err());
    }

    #[test]
    fn flag_mismatch_is_a_violation() {
        let mut t = class("t", 1, Rational::zero(), 1, "t");
        t.minimal_eta = true;
        t.minimal_sigma = true;
        let mut u = unit();
        u.minimal_eta = true;
        u.minimal_sigma = true;
        let m = ModelInstance::new(vec![u, t], &[], &["u".into(), "t".into()]).unwrap();
        let report = validate_model(&m);
        assert_eq!(report.counts().get(&Axiom::FlagEta), Some(&1));
        assert_eq!(report.counts().get(&Axiom::FlagSigma), None);
    }

    #[test]
    fn file_round_trip_preserves_digest() {
        let classes = vec![unit(), class("t", 1, Rational::zero(), 1, "t")];
        let m = ModelInstance::new(classes, &[], &["u".into(), "t".into()])
            .unwrap()
            .with_computed_flags();
        let back = ModelInstance::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.digest(), m.digest());
    }
}
