//! Multiplicative relations among k symbolic roots as an integer sublattice
//! of Z^k, with Smith/Hermite normal forms, quotient-group invariants, and
//! counting of degree-M root classes.
//!
//! A relation `(e_1, ..., e_k)` encodes `prod_i rho_i^{e_i} = 1`; since both
//! sides of a product equality have the same total degree, every relation row
//! sums to zero. The quotient `Z^k / N` then classifies distinct products of
//! the roots. One caveat the caller must keep in mind: this model carries no
//! root multiplicities, so the degree-M class count predicts the number of
//! distinct characteristic roots of the M-th power, which equals the rank
//! only in the squarefree (all multiplicities one) case.

use crate::rational::{binomial, Int, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("relation row {row} has coordinate sum {sum}, expected 0")]
    InvalidRelation { row: usize, sum: Int },
    #[error("relation row {row} has {got} coordinates, expected {expected}")]
    DimensionMismatch { row: usize, expected: usize, got: usize },
    #[error("enumeration of {count} degree-{m} vectors exceeds the cap of {cap}")]
    TooLarge { count: Int, m: u64, cap: u64 },
    #[error("root at position {0} is zero")]
    ZeroRoot(usize),
    #[error("invalid lattice literal: {0}")]
    BadLiteral(String),
}

/// Sublattice of Z^k spanned by relation rows (each summing to zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationLattice {
    k: usize,
    relations: Vec<Vec<Int>>,
}

impl RelationLattice {
    pub fn new(k: usize, relations: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        for (row, r) in relations.iter().enumerate() {
            if r.len() != k {
                return Err(LatticeError::DimensionMismatch { row, expected: k, got: r.len() });
            }
            let sum: Int = r.iter().sum();
            if !sum.is_zero() {
                return Err(LatticeError::InvalidRelation { row, sum });
            }
        }
        Ok(RelationLattice { k, relations })
    }

    pub fn from_ints(k: usize, relations: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::new(
            k,
            relations.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn relations(&self) -> &[Vec<Int>] {
        &self.relations
    }

    pub fn to_json(&self) -> String {
        let lit = LatticeLiteral {
            k: self.k,
            relations: self
                .relations
                .iter()
                .map(|r| r.iter().map(|x| x.to_i64().expect("relation entry fits i64")).collect())
                .collect(),
        };
        serde_json::to_string(&lit).expect("lattice literal serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, LatticeError> {
        let lit: LatticeLiteral =
            serde_json::from_str(s).map_err(|e| LatticeError::BadLiteral(e.to_string()))?;
        Self::new(
            lit.k,
            lit.relations
                .iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }
}

/// JSON wire form: `{"k":5, "relations":[[4,-1,-1,-1,-1],[2,1,-2,1,-2]]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct LatticeLiteral {
    pub k: usize,
    pub relations: Vec<Vec<i64>>,
}

/// Invariant-factor decomposition of Z^k / N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientStructure {
    /// Invariant factors > 1, in divisibility order.
    pub torsion: Vec<Int>,
    /// Rank of the free part.
    pub free_rank: usize,
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V` and diagonal
/// `D` whose nonnegative entries form a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub d: Vec<Vec<Int>>,
    pub u: Vec<Vec<Int>>,
    pub v: Vec<Vec<Int>>,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..n).map(|i| self.d[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn identity(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

/// Smith normal form by elementary row/column reduction, pivot chosen as the
/// minimal nonzero absolute value. Entries are arbitrary precision, so there
/// is no intermediate overflow to worry about.
pub fn smith_normal_form(a: &[Vec<Int>]) -> SnfDecomposition {
    let rows = a.len();
    assert!(rows > 0, "matrix must be nonempty");
    let cols = a[0].len();
    assert!(cols > 0, "matrix must be nonempty");
    assert!(a.iter().all(|r| r.len() == cols), "ragged matrix");

    let mut d: Vec<Vec<Int>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let t_max = rows.min(cols);
    for t in 0..t_max {
        'pivot: loop {
            // minimal |nonzero| pivot in the trailing submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero()
                        && best
                            .map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'pivot };
            if pi != t {
                d.swap(t, pi);
                u.swap(t, pi);
            }
            if pj != t {
                for row in d.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let mut clean = true;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = div_nearest(&d[i][t], &d[t][t]);
                    if !q.is_zero() {
                        for j in 0..cols {
                            let delta = &q * &d[t][j];
                            d[i][j] -= delta;
                        }
                        for j in 0..rows {
                            let delta = &q * &u[t][j];
                            u[i][j] -= delta;
                        }
                    }
                    if !d[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = div_nearest(&d[t][j], &d[t][t]);
                    if !q.is_zero() {
                        for i in 0..rows {
                            let delta = &q * &d[i][t];
                            d[i][j] -= delta;
                        }
                        for i in 0..cols {
                            let delta = &q * &v[i][t];
                            v[i][j] -= delta;
                        }
                    }
                    if !d[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // pivot must divide every remaining entry for the chain to hold
            let pivot = d[t][t].clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&d[i][j] % &pivot).is_zero());
            if let Some((i, _)) = offender {
                for j in 0..cols {
                    let add = d[i][j].clone();
                    d[t][j] += add;
                }
                for j in 0..rows {
                    let add = u[i][j].clone();
                    u[t][j] += add;
                }
                continue 'pivot;
            }
            break 'pivot;
        }
        if d[t][t].is_negative() {
            for j in 0..cols {
                d[t][j] = -std::mem::take(&mut d[t][j]);
            }
            for j in 0..rows {
                u[t][j] = -std::mem::take(&mut u[t][j]);
            }
        }
    }
    SnfDecomposition { d, u, v }
}

/// Quotient toward zero with remainder minimized in absolute value; keeps the
/// Euclidean descent fast.
fn div_nearest(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    let double_r: Int = &r * Int::from(2);
    if double_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Invariant factors of `Z^k / N`: torsion entries (> 1) plus the free rank
/// `k - rank(relations)`.
pub fn quotient_invariants(lattice: &RelationLattice) -> Result<QuotientStructure, LatticeError> {
    // re-validate: rows must sum to zero
    for (row, r) in lattice.relations().iter().enumerate() {
        let sum: Int = r.iter().sum();
        if !sum.is_zero() {
            return Err(LatticeError::InvalidRelation { row, sum });
        }
    }
    if lattice.relations().is_empty() {
        return Ok(QuotientStructure { torsion: Vec::new(), free_rank: lattice.k() });
    }
    let snf = smith_normal_form(lattice.relations());
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    let torsion = diag.into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect();
    Ok(QuotientStructure { torsion, free_rank: lattice.k() - nonzero })
}

/// Conjectured degree of the eventual polynomial describing the rank
/// sequence: one less than the free rank (-1 for a full-relation lattice).
pub fn predicted_degree(lattice: &RelationLattice) -> i64 {
    match quotient_invariants(lattice) {
        Ok(q) => q.free_rank as i64 - 1,
        Err(_) => -1,
    }
}

/// Row-echelon basis of the lattice with positive pivots (Hermite-style);
/// reduction against it yields one canonical representative per coset.
fn hermite_basis(rows: &[Vec<Int>], k: usize) -> Vec<Vec<Int>> {
    let mut work: Vec<Vec<Int>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut out: Vec<Vec<Int>> = Vec::new();
    for col in 0..k {
        loop {
            let nz: Vec<usize> = (0..work.len()).filter(|&i| !work[i][col].is_zero()).collect();
            match nz.len() {
                0 => break,
                1 => {
                    let mut row = work.remove(nz[0]);
                    if row[col].is_negative() {
                        for x in row.iter_mut() {
                            *x = -std::mem::take(x);
                        }
                    }
                    out.push(row);
                    break;
                }
                _ => {
                    let &min_idx = nz
                        .iter()
                        .min_by_key(|&&i| work[i][col].abs())
                        .expect("nonempty");
                    for &i in &nz {
                        if i == min_idx {
                            continue;
                        }
                        let q = div_nearest(&work[i][col], &work[min_idx][col]);
                        if !q.is_zero() {
                            for j in 0..k {
                                let delta = &q * &work[min_idx][j];
                                work[i][j] -= delta;
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Reduces `v` to the canonical representative of `v + N` (entries at pivot
/// columns land in `[0, pivot)`).
fn reduce_mod_basis(v: &mut [Int], basis: &[Vec<Int>], pivots: &[usize]) {
    for (row, &col) in basis.iter().zip(pivots) {
        let q = v[col].div_floor(&row[col]);
        if !q.is_zero() {
            for j in 0..v.len() {
                let delta = &q * &row[j];
                v[j] -= delta;
            }
        }
    }
}

fn pivot_columns(basis: &[Vec<Int>]) -> Vec<usize> {
    basis
        .iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero basis row"))
        .collect()
}

const CLASS_CAP: u64 = 1_000_000;

/// Counts distinct classes of nonnegative integer vectors with coordinate
/// sum `m` modulo the relation lattice: the predicted number of distinct
/// characteristic roots of the M-th power.
pub fn count_degree_m_classes(lattice: &RelationLattice, m: u64) -> Result<u64, LatticeError> {
    assert!(m >= 1, "degree must be >= 1");
    for (row, r) in lattice.relations().iter().enumerate() {
        let sum: Int = r.iter().sum();
        if !sum.is_zero() {
            return Err(LatticeError::InvalidRelation { row, sum });
        }
    }
    let k = lattice.k() as u64;
    let count = binomial(m + k - 1, m as i64);
    if count.to_u64().map_or(true, |c| c > CLASS_CAP) {
        return Err(LatticeError::TooLarge { count, m, cap: CLASS_CAP });
    }
    let basis = hermite_basis(lattice.relations(), lattice.k());
    let pivots = pivot_columns(&basis);
    let mut seen: HashSet<Vec<Int>> = HashSet::new();
    let mut vector = vec![0u64; lattice.k()];
    enumerate_sum_vectors(m, 0, &mut vector, &mut |v| {
        let mut rep: Vec<Int> = v.iter().map(|&x| Int::from(x)).collect();
        reduce_mod_basis(&mut rep, &basis, &pivots);
        seen.insert(rep);
    });
    Ok(seen.len() as u64)
}

fn enumerate_sum_vectors(remaining: u64, idx: usize, v: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if idx + 1 == v.len() {
        v[idx] = remaining;
        f(v);
        return;
    }
    for take in 0..=remaining {
        v[idx] = take;
        enumerate_sum_vectors(remaining - take, idx + 1, v, f);
    }
}

/// Derives the full relation lattice for nonzero *rational* roots: factors
/// each root over the primes (sign tracked as an order-2 coordinate) and
/// solves for all sum-zero integer kernels of the exponent matrix.
pub fn relations_from_rational_roots(roots: &[Rational]) -> Result<RelationLattice, LatticeError> {
    let k = roots.len();
    assert!(k >= 1, "at least one root required");
    for (i, r) in roots.iter().enumerate() {
        if r.is_zero() {
            return Err(LatticeError::ZeroRoot(i));
        }
    }

    // exponent vectors over the primes appearing anywhere, plus a sign bit
    let mut primes: Vec<Int> = Vec::new();
    let mut exponents: Vec<Vec<i64>> = Vec::new(); // per root, aligned with primes
    let mut signs: Vec<u8> = Vec::new();
    for root in roots {
        signs.push(if root.numer().is_negative() { 1 } else { 0 });
        let mut expo: Vec<i64> = vec![0; primes.len()];
        for (value, direction) in [(root.numer().abs(), 1i64), (root.denom().abs(), -1i64)] {
            for (p, e) in factorize(&value) {
                match primes.iter().position(|q| *q == p) {
                    Some(idx) => expo[idx] += direction * e,
                    None => {
                        primes.push(p);
                        for other in exponents.iter_mut() {
                            other.push(0);
                        }
                        expo.push(direction * e);
                    }
                }
            }
        }
        expo.resize(primes.len(), 0);
        exponents.push(expo);
    }

    // rows: one per prime, plus the sum-zero constraint
    let mut matrix: Vec<Vec<Int>> = Vec::new();
    for (pi, _) in primes.iter().enumerate() {
        matrix.push((0..k).map(|ri| Int::from(exponents[ri][pi])).collect());
    }
    matrix.push(vec![Int::one(); k]);

    // integer kernel via SNF: columns of V past the rank span {x : A x = 0}
    let snf = smith_normal_form(&matrix);
    let rank = snf.rank();
    let mut kernel: Vec<Vec<Int>> = (rank..k)
        .map(|j| (0..k).map(|i| snf.v[i][j].clone()).collect())
        .collect();

    // restrict to even total sign: an index-<=2 sublattice
    let parity = |vec: &[Int]| -> bool {
        let mut odd = false;
        for (x, &s) in vec.iter().zip(&signs) {
            if s == 1 && x.is_odd() {
                odd = !odd;
            }
        }
        odd
    };
    if let Some(first_odd) = kernel.iter().position(|v| parity(v)) {
        let pivot_vec = kernel[first_odd].clone();
        for (i, v) in kernel.iter_mut().enumerate() {
            if i != first_odd && parity(v) {
                for (x, p) in v.iter_mut().zip(&pivot_vec) {
                    *x -= p;
                }
            }
        }
        for x in kernel[first_odd].iter_mut() {
            *x *= 2;
        }
    }

    let basis = hermite_basis(&kernel, k);
    RelationLattice::new(k, basis)
}

fn factorize(value: &Int) -> Vec<(Int, i64)> {
    let mut out = Vec::new();
    let mut n = value.clone();
    debug_assert!(n.is_positive());
    let mut p = Int::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0i64;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += if p == Int::from(2) { Int::one() } else { Int::from(2) };
    }
    if n > Int::one() {
        out.push((n, 1));
    }
    out
}
