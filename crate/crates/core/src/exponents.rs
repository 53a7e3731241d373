//! Artin and Swan exponents of representations and of their tensor products.
//!
//! Everything reduces to one kernel for `Sp_r(i) ⊗ Sp_s(j)`:
//!
//! ```text
//! dim = r*s*m_i*m_j
//! sw  = dim * s(i,j)
//! ar  = sw + dim - d*min(r,s)      d = deg_i if j = dual(i), else 0
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ClassId, Mode, ModelInstance};
use crate::rational::Rational;
use crate::rep::WDRep;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentReport {
    pub dim: u64,
    pub ar: u64,
    pub sw: u64,
    pub eta: Option<Rational>,
    pub varsigma: Option<Rational>,
}

impl ExponentReport {
    pub fn new(dim: u64, ar: u64, sw: u64) -> Self {
        let ratio = |n: u64| (dim > 0).then(|| Rational::from(n) / Rational::from(dim));
        ExponentReport {
            dim,
            ar,
            sw,
            eta: ratio(ar),
            varsigma: ratio(sw),
        }
    }

    pub fn eta(&self) -> Result<&Rational> {
        self.eta.as_ref().ok_or(Error::ZeroRepresentation)
    }

    pub fn varsigma(&self) -> Result<&Rational> {
        self.varsigma.as_ref().ok_or(Error::ZeroRepresentation)
    }

    /// `ar` in eta mode, `sw` in sigma mode.
    pub fn exponent(&self, mode: Mode) -> u64 {
        match mode {
            Mode::Eta => self.ar,
            Mode::Sigma => self.sw,
        }
    }

    /// `eta` or `varsigma` according to the mode.
    pub fn normalized(&self, mode: Mode) -> Result<&Rational> {
        match mode {
            Mode::Eta => self.eta(),
            Mode::Sigma => self.varsigma(),
        }
    }
}

/// Exponents of `Sp_r(i) ⊗ Sp_s(j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TensorKernel {
    pub ar: u64,
    pub sw: u64,
    pub dim: u64,
}

fn to_u64(q: &Rational) -> Result<u64> {
    if q.is_negative() {
        return Err(Error::NonIntegral(q.to_string()));
    }
    q.to_i64().map(|v| v as u64).ok_or_else(|| Error::NonIntegral(q.to_string()))
}

/// `ar` of the irreducible class at position `i`.
pub(crate) fn irreducible_artin(i: usize, m: &ModelInstance) -> Rational {
    if i == m.unit() {
        return Rational::zero();
    }
    let c = m.class(i);
    Rational::from(c.dim) * (&c.slope + Rational::one())
}

/// `eta` of the irreducible class at position `i`: 0 for `u`, slope + 1 otherwise.
pub(crate) fn irreducible_eta(i: usize, m: &ModelInstance) -> Rational {
    if i == m.unit() {
        Rational::zero()
    } else {
        &m.class(i).slope + Rational::one()
    }
}

/// `ar(x ⊗ σ_i)` for the dim-1 class `x`.
pub(crate) fn twisted_irreducible_artin(x: usize, i: usize, m: &ModelInstance) -> Rational {
    let c = m.class(i);
    if c.dim == 1 && x == m.dual(i) {
        Rational::zero()
    } else {
        Rational::from(c.dim) * (m.s(x, i) + Rational::one())
    }
}

/// Kernel values as exact rationals; integral whenever the model satisfies M1.
pub(crate) fn kernel_q(r: u32, i: usize, s: u32, j: usize, m: &ModelInstance) -> (Rational, Rational, u64) {
    let dim = r as u64 * s as u64 * m.class(i).dim as u64 * m.class(j).dim as u64;
    let d = if j == m.dual(i) { m.class(i).deg as u64 } else { 0 };
    let sw = Rational::from(dim) * m.s(i, j);
    let ar = &sw + Rational::from(dim) - Rational::from(d * r.min(s) as u64);
    (ar, sw, dim)
}

fn kernel_idx(r: u32, i: usize, s: u32, j: usize, m: &ModelInstance) -> Result<TensorKernel> {
    let (ar, sw, dim) = kernel_q(r, i, s, j, m);
    Ok(TensorKernel {
        ar: to_u64(&ar)?,
        sw: to_u64(&sw)?,
        dim,
    })
}

pub fn indec_tensor_kernel(r: u32, i: &ClassId, s: u32, j: &ClassId, m: &ModelInstance) -> Result<TensorKernel> {
    if r == 0 || s == 0 {
        return Err(Error::Precondition("Sp-length must be >= 1".into()));
    }
    kernel_idx(r, m.idx(i)?, s, m.idx(j)?, m)
}

pub fn exponents_of(x: &WDRep, m: &ModelInstance) -> Result<ExponentReport> {
    let (mut dim, mut ar, mut sw) = (0u64, 0u64, 0u64);
    for (t, k) in x.terms() {
        let i = m.idx(&t.cls)?;
        let c = m.class(i);
        let r = t.r as u64;
        let sw_i = to_u64(&c.swan())?;
        dim += k * r * c.dim as u64;
        sw += k * r * sw_i;
        ar += k * if i == m.unit() { r - 1 } else { r * (sw_i + c.dim as u64) };
    }
    Ok(ExponentReport::new(dim, ar, sw))
}

/// Bilinear expansion of the kernel over the terms of `x` and `y`.
pub fn tensor_exponents(x: &WDRep, y: &WDRep, m: &ModelInstance) -> Result<ExponentReport> {
    let ys = y
        .terms()
        .map(|(t, k)| Ok((m.idx(&t.cls)?, t.r, k)))
        .collect::<Result<Vec<_>>>()?;
    let (mut dim, mut ar, mut sw) = (0u64, 0u64, 0u64);
    for (t, k) in x.terms() {
        let i = m.idx(&t.cls)?;
        for &(j, s, l) in &ys {
            let kern = kernel_idx(t.r, i, s, j, m)?;
            dim += k * l * kern.dim;
            ar += k * l * kern.ar;
            sw += k * l * kern.sw;
        }
    }
    Ok(ExponentReport::new(dim, ar, sw))
}

fn character_idx(chi: &ClassId, m: &ModelInstance) -> Result<usize> {
    let x = m.idx(chi)?;
    if m.is_character(x) {
        Ok(x)
    } else {
        Err(Error::NotACharacter(chi.clone()))
    }
}

fn twisted_artin_idx(x: usize, rep: &WDRep, m: &ModelInstance) -> Result<u64> {
    let mut total = 0;
    for (t, k) in rep.terms() {
        let i = m.idx(&t.cls)?;
        let r = t.r as u64;
        let c = m.class(i);
        total += k * if c.dim == 1 && x == m.dual(i) {
            r - 1
        } else {
            r * to_u64(&(Rational::from(c.dim) * (m.s(x, i) + Rational::one())))?
        };
    }
    Ok(total)
}

fn twisted_swan_idx(x: usize, rep: &WDRep, m: &ModelInstance) -> Result<u64> {
    let mut total = 0;
    for (t, k) in rep.terms() {
        let i = m.idx(&t.cls)?;
        total += k * t.r as u64 * to_u64(&(Rational::from(m.class(i).dim) * m.s(x, i)))?;
    }
    Ok(total)
}

/// `ar(chi ⊗ x)` for an in-model character `chi`.
pub fn twisted_artin(chi: &ClassId, x: &WDRep, m: &ModelInstance) -> Result<u64> {
    twisted_artin_idx(character_idx(chi, m)?, x, m)
}

/// `sw(chi ⊗ x)` for an in-model character `chi`.
pub fn twisted_swan(chi: &ClassId, x: &WDRep, m: &ModelInstance) -> Result<u64> {
    twisted_swan_idx(character_idx(chi, m)?, x, m)
}

pub fn is_eta_minimal_rep(x: &WDRep, m: &ModelInstance) -> Result<bool> {
    is_minimal_rep(x, Mode::Eta, m)
}

pub fn is_sigma_minimal_rep(x: &WDRep, m: &ModelInstance) -> Result<bool> {
    is_minimal_rep(x, Mode::Sigma, m)
}

/// No in-model character lowers `ar` (eta) or `sw` (sigma) by twisting.
pub fn is_minimal_rep(x: &WDRep, mode: Mode, m: &ModelInstance) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroRepresentation);
    }
    let own = exponents_of(x, m)?.exponent(mode);
    for &chi in m.characters() {
        let twisted = match mode {
            Mode::Eta => twisted_artin_idx(chi, x, m)?,
            Mode::Sigma => twisted_swan_idx(chi, x, m)?,
        };
        if twisted < own {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Common `eta` (or slope) of the irreducible constituents, if there is one.
///
/// `u` counts as 0 in eta mode, so unramified reps are homogeneous.
pub fn homogeneity_level(x: &WDRep, mode: Mode, m: &ModelInstance) -> Result<Option<Rational>> {
    let mut level: Option<Rational> = None;
    for (t, _) in x.terms() {
        let i = m.idx(&t.cls)?;
        let v = match mode {
            Mode::Eta => irreducible_eta(i, m),
            Mode::Sigma => m.class(i).slope.clone(),
        };
        match &level {
            Some(l) if l != &v => return Ok(None),
            _ => level = Some(v),
        }
    }
    Ok(level)
}

pub fn is_eta_homogeneous(x: &WDRep, m: &ModelInstance) -> Result<bool> {
    Ok(homogeneity_level(x, Mode::Eta, m)?.is_some())
}

/// `eta` of an in-model character: 0 for `u`, `slope + 1` otherwise.
pub fn character_eta(chi: &ClassId, m: &ModelInstance) -> Result<Rational> {
    Ok(irreducible_eta(character_idx(chi, m)?, m))
}
