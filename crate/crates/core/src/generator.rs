//! Seeded generation of valid models and random representations.
//!
//! Within one slope level the pairing comes from a laminar tree over dual
//! orbits: `s(i, j)` is the height of the least common ancestor of `i` and
//! `dual j`, and `s(i, dual i)` is a leaf self-value below every ancestor.
//! Across levels the max rule fixes every entry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_model, ClassId, IrreducibleClass, ModelInstance, PairingEntry};
use crate::rational::{gcd_all, Rational};
use crate::rep::{Indecomposable, WDRep};

/// SplitMix64: a fixed, platform-independent 64-bit stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..n`, by rejection.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    /// Uniform integer in `lo..=hi`.
    pub fn between(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo) as u64 + 1) as i64
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len() as u64) as usize]
    }
}

/// Mixes two words into a child seed.
pub fn derive_seed(a: u64, b: u64) -> u64 {
    let mut r = SplitMix64::new(a ^ b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    r.next_u64()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub slope_levels: Vec<Rational>,
    pub classes_per_level: usize,
    pub dim_pool: Vec<u32>,
    pub max_deg: u32,
    pub tree_depth: usize,
    pub char_per_level: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            slope_levels: vec![Rational::zero(), Rational::half(), Rational::one(), Rational::from_int(2)],
            classes_per_level: 3,
            dim_pool: vec![1, 2, 3, 4],
            max_deg: 2,
            tree_depth: 3,
            char_per_level: 2,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn with_seed(&self, seed: u64) -> GenParams {
        GenParams { seed, ..self.clone() }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidParams(s.to_string()));
        if self.slope_levels.is_empty() {
            return bad("slope_levels is empty");
        }
        let mut sorted = self.slope_levels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.slope_levels.len() {
            return bad("slope levels must be distinct");
        }
        if sorted[0].is_negative() {
            return bad("slope levels must be >= 0");
        }
        if self.classes_per_level == 0 || self.tree_depth == 0 || self.char_per_level == 0 || self.max_deg == 0 {
            return bad("counts must be >= 1");
        }
        if self.dim_pool.is_empty() || self.dim_pool.contains(&0) {
            return bad("dim_pool must be non-empty with entries >= 1");
        }
        for c in &self.slope_levels {
            if !c.is_integer() && self.noncharacter_dims(c).is_empty() {
                return Err(Error::InvalidParams(format!("no dimension in dim_pool fits slope {c}")));
            }
        }
        Ok(())
    }

    fn noncharacter_dims(&self, c: &Rational) -> Vec<u32> {
        self.dim_pool
            .iter()
            .copied()
            .filter(|&m| m >= 2 && c.times_is_integer(m as u64))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GenStats {
    /// Construction attempts, including the accepted one.
    pub rounds: usize,
}

const MAX_ROUNDS: usize = 100;

pub fn gen_model(p: &GenParams) -> Result<ModelInstance> {
    gen_model_with_stats(p).map(|(m, _)| m)
}

/// Rejection loop around [`build_candidate`]; every accepted model passes
/// `validate_model`.
pub fn gen_model_with_stats(p: &GenParams) -> Result<(ModelInstance, GenStats)> {
    p.check()?;
    let mut rng = SplitMix64::new(p.seed);
    let mut last = String::new();
    for round in 1..=MAX_ROUNDS {
        match build_candidate(p, &mut rng) {
            Ok(m) => {
                let report = validate_model(&m);
                if report.ok {
                    return Ok((m, GenStats { rounds: round }));
                }
                last = format!("{:?}", report.counts());
            }
            Err(Error::Generation { reason, .. }) => last = reason,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Generation {
        rounds: MAX_ROUNDS,
        reason: last,
    })
}

struct Draft {
    id: ClassId,
    dim: u32,
    deg: u32,
    level: usize,
}

/// A dual orbit: one self-dual class or a pair swapped by the dual map.
struct Cluster {
    members: Vec<usize>,
    is_char: bool,
}

fn build_candidate(p: &GenParams, rng: &mut SplitMix64) -> Result<ModelInstance> {
    let mut levels = p.slope_levels.clone();
    levels.sort();
    if !levels[0].is_zero() {
        levels.insert(0, Rational::zero());
    }

    let mut drafts: Vec<Draft> = vec![Draft {
        id: ClassId::unit(),
        dim: 1,
        deg: 1,
        level: 0,
    }];
    let mut duals: Vec<usize> = vec![0];
    let mut clusters_by_level: Vec<Vec<Cluster>> = Vec::new();

    for (li, c) in levels.iter().enumerate() {
        let mut clusters = Vec::new();
        let used = p.slope_levels.contains(c);
        let n_total = if used { p.classes_per_level } else { 0 };
        let n_char = if c.is_integer() { p.char_per_level.min(n_total) } else { 0 };
        let dims = p.noncharacter_dims(c);
        let n_other = if dims.is_empty() { 0 } else { n_total - n_char };

        let mut k = 0;
        for (count, is_char) in [(n_char, true), (n_other, false)] {
            let mut left = count;
            while left > 0 {
                let (dim, deg) = if is_char {
                    (1, 1)
                } else {
                    let m = *rng.pick(&dims);
                    let divs: Vec<u32> = (1..=m).filter(|d| m % d == 0 && *d <= p.max_deg).collect();
                    (m, *rng.pick(&divs))
                };
                let size = if left >= 2 && rng.coin() { 2 } else { 1 };
                let prefix = if is_char { "chi" } else { "s" };
                let first = drafts.len();
                for _ in 0..size {
                    drafts.push(Draft {
                        id: ClassId::new(format!("{prefix}{li}_{k}")),
                        dim,
                        deg,
                        level: li,
                    });
                    k += 1;
                }
                let members: Vec<usize> = (first..first + size).collect();
                if size == 2 {
                    duals.extend([first + 1, first]);
                } else {
                    duals.push(first);
                }
                clusters.push(Cluster { members, is_char });
                left -= size;
            }
        }
        clusters_by_level.push(clusters);
    }

    let n = drafts.len();
    let mut table = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&levels[drafts[i].level], &levels[drafts[j].level]);
            table[i][j] = Rational::max(a, b);
        }
    }

    // D(i, j) within each level; s(i, j) = D(i, dual j).
    let mut dist = vec![vec![Rational::zero(); n]; n];
    for (li, clusters) in clusters_by_level.iter().enumerate() {
        let c = &levels[li];
        if c.is_zero() || clusters.is_empty() {
            continue;
        }
        let mut top: Vec<Vec<usize>> = Vec::new();
        let groups = rng.between(1, clusters.len() as i64) as usize;
        top.resize_with(groups, Vec::new);
        for k in 0..clusters.len() {
            top[rng.below(groups as u64) as usize].push(k);
        }
        top.retain(|g| !g.is_empty());

        let members = |ks: &[usize]| -> Vec<usize> { ks.iter().flat_map(|&k| clusters[k].members.clone()).collect() };
        let all: Vec<Vec<usize>> = top.iter().map(|g| members(g)).collect();
        assign_cross(&all, c, &mut dist);

        for g in &top {
            let has_char = g.iter().any(|&k| clusters[k].is_char);
            let (lo, hi) = if has_char {
                (Rational::zero(), None)
            } else {
                (c * Rational::half(), Some(c.clone()))
            };
            let hi = match hi {
                Some(h) => h,
                None => {
                    // strictly below the level: largest grid point under c
                    let g_all = node_grid(&[members(g)], &drafts);
                    let top_h = c - Rational::new(1, g_all.max(1) as i64);
                    if top_h.is_negative() {
                        return Err(gen_fail("no room below level for a character group"));
                    }
                    top_h
                }
            };
            build_subtree(g, clusters, &drafts, &lo, &hi, p.tree_depth, rng, &mut dist)?;
        }
    }

    for i in 0..n {
        for j in 0..n {
            if drafts[i].level == drafts[j].level && !levels[drafts[i].level].is_zero() {
                table[i][j] = dist[i][duals[j]].clone();
            }
        }
    }

    let classes: Vec<IrreducibleClass> = drafts
        .iter()
        .enumerate()
        .map(|(k, d)| IrreducibleClass {
            id: d.id.clone(),
            dim: d.dim,
            slope: levels[d.level].clone(),
            deg: d.deg,
            dual: drafts[duals[k]].id.clone(),
            minimal_sigma: false,
            minimal_eta: false,
        })
        .collect();
    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            entries.push(PairingEntry::new(drafts[i].id.clone(), drafts[j].id.clone(), table[i][j].clone()));
        }
    }
    let characters: Vec<ClassId> = drafts.iter().filter(|d| d.dim == 1).map(|d| d.id.clone()).collect();
    Ok(ModelInstance::new(classes, &entries, &characters)?.with_computed_flags())
}

fn gen_fail(reason: &str) -> Error {
    Error::Generation {
        rounds: 0,
        reason: reason.to_string(),
    }
}

/// gcd of `m_a * m_b` over pairs taken from different children.
fn node_grid(children: &[Vec<usize>], drafts: &[Draft]) -> u64 {
    let mut prods = Vec::new();
    for (x, a) in children.iter().enumerate() {
        for b in children.iter().skip(x + 1) {
            for &i in a {
                for &j in b {
                    prods.push(drafts[i].dim as u64 * drafts[j].dim as u64);
                }
            }
        }
    }
    if children.len() == 1 {
        for &i in &children[0] {
            for &j in &children[0] {
                prods.push(drafts[i].dim as u64 * drafts[j].dim as u64);
            }
        }
    }
    gcd_all(prods)
}

fn assign_cross(children: &[Vec<usize>], h: &Rational, dist: &mut [Vec<Rational>]) {
    for (x, a) in children.iter().enumerate() {
        for (y, b) in children.iter().enumerate() {
            if x != y {
                for &i in a {
                    for &j in b {
                        dist[i][j] = h.clone();
                    }
                }
            }
        }
    }
}

/// A grid point of `(1/g)Z` in `[lo, hi]`, favouring the endpoints.
fn draw_height(lo: &Rational, hi: &Rational, g: u64, rng: &mut SplitMix64) -> Option<Rational> {
    let a = (lo.ceil_to_grid(g) * Rational::from(g)).to_i64()?;
    let b = (hi.floor_to_grid(g) * Rational::from(g)).to_i64()?;
    if a > b {
        return None;
    }
    let k = match rng.below(4) {
        0 => a,
        1 => b,
        _ => rng.between(a, b),
    };
    Some(Rational::new(k, g as i64))
}

/// Fills `dist` for the clusters `ks` below a node of height `hi`.
#[allow(clippy::too_many_arguments)]
fn build_subtree(
    ks: &[usize],
    clusters: &[Cluster],
    drafts: &[Draft],
    lo: &Rational,
    hi: &Rational,
    depth: usize,
    rng: &mut SplitMix64,
    dist: &mut [Vec<Rational>],
) -> Result<()> {
    if ks.len() == 1 {
        return build_leaf(&clusters[ks[0]], drafts, lo, hi, rng, dist);
    }
    let parts = if depth <= 1 {
        ks.len()
    } else {
        rng.between(2, ks.len() as i64) as usize
    };
    let mut split: Vec<Vec<usize>> = vec![Vec::new(); parts];
    for (x, &k) in ks.iter().enumerate() {
        // every part non-empty: seed the first `parts` entries, then scatter
        let slot = if x < parts { x } else { rng.below(parts as u64) as usize };
        split[slot].push(k);
    }
    let members: Vec<Vec<usize>> = split
        .iter()
        .map(|g| g.iter().flat_map(|&k| clusters[k].members.clone()).collect())
        .collect();
    let g = node_grid(&members, drafts);
    let h = draw_height(lo, hi, g, rng).ok_or_else(|| gen_fail("empty height range at internal node"))?;
    assign_cross(&members, &h, dist);
    for part in &split {
        build_subtree(part, clusters, drafts, lo, &h, depth.saturating_sub(1), rng, dist)?;
    }
    Ok(())
}

fn build_leaf(
    cl: &Cluster,
    drafts: &[Draft],
    lo: &Rational,
    hi: &Rational,
    rng: &mut SplitMix64,
    dist: &mut [Vec<Rational>],
) -> Result<()> {
    let i = cl.members[0];
    let m = drafts[i].dim as u64;
    let mut hi = hi.clone();
    if cl.members.len() == 2 {
        let j = cl.members[1];
        let h = draw_height(lo, &hi, m * m, rng).ok_or_else(|| gen_fail("empty range for a dual pair"))?;
        dist[i][j] = h.clone();
        dist[j][i] = h.clone();
        hi = h;
    }
    let own = if cl.is_char {
        Rational::zero()
    } else {
        draw_height(lo, &hi, m * m, rng).ok_or_else(|| gen_fail("empty range for a self value"))?
    };
    for &k in &cl.members {
        dist[k][k] = own.clone();
    }
    Ok(())
}

/// Random rep with `1..=max_terms` indecomposables of length `1..=max_r`.
pub fn gen_rep(m: &ModelInstance, max_terms: usize, max_r: u32, seed: u64) -> WDRep {
    let mut rng = SplitMix64::new(seed);
    let mut out = WDRep::zero();
    if max_terms == 0 || max_r == 0 {
        return out;
    }
    let terms = 1 + rng.below(max_terms as u64);
    for _ in 0..terms {
        let c = &m.classes()[rng.below(m.len() as u64) as usize];
        let r = 1 + rng.below(max_r as u64) as u32;
        out.add_term(1, Indecomposable::new(r, c.id.clone()));
    }
    out
}
