//! Exact linear algebra for nilpotent operators: Jordan blocks, the tensor
//! operator `A⊗1 + 1⊗B`, ranks and Jordan types.
//!
//! This is the ground truth for representations over the unramified class,
//! where the Artin exponent is the rank of the monodromy operator.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::model::ClassId;
use crate::rep::{Indecomposable, WDRep};

/// Sparse rational matrix, row major, each row sorted by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rational)>>,
}

type SparseRow = Vec<(usize, Rational)>;

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rational::one()));
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                out[i][*j] = v.clone();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (j, v)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| axpy(a, &Rational::one(), b))
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: SparseRow = Vec::new();
            for (k, v) in row {
                acc = axpy(&acc, v, &other.data[*k]);
            }
            out.data[i] = acc;
        }
        out
    }

    /// Kronecker product; index `(a, b)` maps to `a * other.dim + b`.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for (a, arow) in self.data.iter().enumerate() {
            for b in 0..other.rows {
                let row = &mut out.data[a * other.rows + b];
                for (a2, x) in arow {
                    for (b2, y) in &other.data[b] {
                        row.push((a2 * other.cols + b2, x * y));
                    }
                }
            }
        }
        out
    }

    /// Exact rank by Gaussian elimination over the rationals.
    ///
    /// Rows are first grouped into connected components of the row/column
    /// incidence graph; each component is eliminated on its own.
    pub fn rank(&self) -> usize {
        let mut uf = UnionFind::new(self.rows + self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, _) in row {
                uf.union(i, self.rows + j);
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, row) in self.data.iter().enumerate() {
            if !row.is_empty() {
                groups.entry(uf.find(i)).or_default().push(i);
            }
        }
        groups
            .values()
            .map(|rows| echelon_rank(rows.iter().map(|&i| self.data[i].clone())))
            .sum()
    }
}

/// `a + c * b` for sorted sparse rows.
fn axpy(a: &[(usize, Rational)], c: &Rational, b: &[(usize, Rational)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn echelon_rank(rows: impl Iterator<Item = SparseRow>) -> usize {
    // Pivot rows keyed by leading column, normalized to a leading 1.
    let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
    for mut v in rows {
        while let Some((lead, coef)) = v.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => v = axpy(&v, &-coef, p),
                None => {
                    let inv = coef.recip();
                    let normalized = v.into_iter().map(|(c, x)| (c, x * &inv)).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Weakly decreasing list of positive block sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A nilpotent endomorphism of `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentOp {
    mat: SparseMatrix,
}

impl NilpotentOp {
    /// Wraps a square matrix, checking that its `n`-th power vanishes.
    pub fn new(mat: SparseMatrix) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::Precondition("operator must be square".into()));
        }
        let mut p = mat.clone();
        for _ in 1..mat.rows().max(1) {
            if p.is_zero() {
                break;
            }
            p = p.mul(&mat);
        }
        if !p.is_zero() {
            return Err(Error::Precondition("operator is not nilpotent".into()));
        }
        Ok(NilpotentOp { mat })
    }

    /// Block-diagonal regular nilpotent with one Jordan block per part,
    /// ones on the superdiagonal.
    pub fn from_partition(p: &Partition) -> Self {
        let n = p.size() as usize;
        let mut mat = SparseMatrix::zeros(n, n);
        let mut base = 0;
        for &b in p.parts() {
            for k in 0..(b as usize).saturating_sub(1) {
                mat.set(base + k, base + k + 1, Rational::one());
            }
            base += b as usize;
        }
        NilpotentOp { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.mat
    }

    /// `self ⊗ 1 + 1 ⊗ other`, the monodromy of a tensor product.
    pub fn tensor(&self, other: &NilpotentOp) -> NilpotentOp {
        let a = self.mat.kron(&SparseMatrix::identity(other.dim()));
        let b = SparseMatrix::identity(self.dim()).kron(&other.mat);
        NilpotentOp { mat: a.add(&b) }
    }

    pub fn rank(&self) -> usize {
        self.mat.rank()
    }

    /// `rank(N^k)` for `k = 0, 1, ...` up to the first zero power.
    pub fn rank_sequence(&self) -> Vec<usize> {
        let mut out = vec![self.dim()];
        let mut p = self.mat.clone();
        while *out.last().unwrap() > 0 {
            out.push(p.rank());
            p = p.mul(&self.mat);
        }
        out
    }

    /// Jordan type read off the rank sequence: the number of blocks of size
    /// at least `k` is `rank(N^(k-1)) - rank(N^k)`.
    pub fn jordan_type(&self) -> Partition {
        let ranks = self.rank_sequence();
        let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
        let mut parts = Vec::new();
        for (k, &c) in at_least.iter().enumerate() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..c - next {
                parts.push(k as u32 + 1);
            }
        }
        Partition::new(parts)
    }
}

/// Rank of the tensor monodromy built from two Jordan types.
pub fn nilpotent_rank(a: &Partition, b: &Partition) -> usize {
    NilpotentOp::from_partition(a)
        .tensor(&NilpotentOp::from_partition(b))
        .rank()
}

/// Jordan type of `J_r ⊗ 1 + 1 ⊗ J_s`.
pub fn tensor_partition(r: u32, s: u32) -> Partition {
    assert!(r >= 1 && s >= 1, "block sizes must be >= 1");
    let a = NilpotentOp::from_partition(&Partition::new(vec![r]));
    let b = NilpotentOp::from_partition(&Partition::new(vec![s]));
    a.tensor(&b).jordan_type()
}

/// Jordan type of the monodromy of a rep over `u` alone.
pub fn unramified_partition(x: &WDRep) -> Result<Partition> {
    let mut parts = Vec::new();
    for (t, k) in x.terms() {
        if !t.cls.is_unit() {
            return Err(Error::Precondition(format!("{} is not over the unramified class", t)));
        }
        parts.extend(std::iter::repeat(t.r).take(k as usize));
    }
    Ok(Partition::new(parts))
}

/// Every rep over `u` with `1..=max_terms` terms (counted with multiplicity)
/// of length at most `max_r`.
pub fn unramified_reps(max_terms: usize, max_r: u32) -> Vec<WDRep> {
    fn extend(prefix: &mut Vec<u32>, min_r: u32, max_r: u32, left: usize, out: &mut Vec<WDRep>) {
        for r in min_r..=max_r {
            prefix.push(r);
            out.push(WDRep::from_terms(prefix.iter().map(|&r| (1, Indecomposable::new(r, ClassId::unit())))));
            if left > 1 {
                extend(prefix, r, max_r, left - 1, out);
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if max_terms > 0 {
        extend(&mut Vec::new(), 1, max_r, max_terms, &mut out);
    }
    out
}

/// `ar(x ⊗ y)` for reps over `u`, as the rank of the tensor monodromy.
pub fn unramified_oracle_artin(x: &WDRep, y: &WDRep) -> Result<u64> {
    let (a, b) = (unramified_partition(x)?, unramified_partition(y)?);
    if a.is_empty() || b.is_empty() {
        return Ok(0);
    }
    Ok(nilpotent_rank(&a, &b) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn single_block_ranks() {
        assert_eq!(nilpotent_rank(&p(&[2]), &p(&[3])), 4);
        assert_eq!(nilpotent_rank(&p(&[1]), &p(&[1])), 0);
        assert_eq!(nilpotent_rank(&p(&[4]), &p(&[4])), 12);
    }

    #[test]
    fn tensor_partitions() {
        assert_eq!(tensor_partition(1, 5), p(&[5]));
        assert_eq!(tensor_partition(2, 2), p(&[3, 1]));
        assert_eq!(tensor_partition(2, 3), p(&[4, 2]));
        assert_eq!(tensor_partition(3, 3), p(&[5, 3, 1]));
    }

    #[test]
    fn oracle_examples() {
        let x = WDRep::single(2, "u");
        let y = WDRep::single(3, "u");
        assert_eq!(unramified_oracle_artin(&x, &y).unwrap(), 4);
        let one = WDRep::single(1, "u");
        assert_eq!(unramified_oracle_artin(&one, &y).unwrap(), 2);
        let xx = x.direct_sum(&x);
        assert_eq!(unramified_oracle_artin(&xx, &y).unwrap(), 8);
        assert!(unramified_oracle_artin(&WDRep::single(1, "t"), &y).is_err());
        assert_eq!(unramified_oracle_artin(&WDRep::zero(), &y).unwrap(), 0);
    }

    #[test]
    fn rank_matches_dense_reasoning() {
        let q = |n| Rational::from_int(n);
        let m = SparseMatrix::from_dense(&[
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ]);
        assert_eq!(m.rank(), 2);
        assert_eq!(SparseMatrix::identity(4).rank(), 4);
        assert_eq!(SparseMatrix::zeros(3, 5).rank(), 0);
        assert_eq!(m.to_dense()[1][2], q(6));
    }

    #[test]
    fn enumerates_multisets() {
        assert_eq!(unramified_reps(3, 8).len(), 164);
        assert_eq!(unramified_reps(1, 4).len(), 4);
        assert!(unramified_reps(0, 4).is_empty());
    }

    #[test]
    fn nilpotency_is_checked() {
        let j = NilpotentOp::from_partition(&p(&[3, 2]));
        assert!(NilpotentOp::new(j.matrix().clone()).is_ok());
        assert!(NilpotentOp::new(SparseMatrix::identity(2)).is_err());
        assert_eq!(j.jordan_type(), p(&[3, 2]));
        assert_eq!(j.rank_sequence(), vec![5, 3, 1, 0]);
    }
}
