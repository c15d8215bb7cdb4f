//! Closed-form multiplicity rules and rank bounds for termwise products and
//! powers, plus a brute-force multiset oracle that realizes the worst-case
//! count directly.

use crate::rational::{binomial, Int};
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("distinct-root count k = {k} exceeds rank r = {r}")]
    KGreaterThanR { k: u64, r: u64 },
    #[error("oracle enumeration of {count} multisets exceeds the cap of {cap}")]
    TooLarge { count: Int, cap: u64 },
}

/// Root multiplicity profile: `multiplicities[i]` is the multiplicity of the
/// i-th distinct root, so `k = multiplicities.len()` and `r = sum`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSpec {
    multiplicities: Vec<u64>,
}

impl RootSpec {
    pub fn new(multiplicities: Vec<u64>) -> Self {
        assert!(!multiplicities.is_empty(), "at least one root required");
        assert!(multiplicities.iter().all(|&m| m >= 1), "multiplicities must be >= 1");
        RootSpec { multiplicities }
    }

    pub fn distinct_count(&self) -> u64 {
        self.multiplicities.len() as u64
    }

    pub fn rank(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }
}

/// Multiplicity of a product root rho1*rho2 when no other root pair shares
/// the product: `m1 + m2 - 1`.
pub fn product_multiplicity(m1: u64, m2: u64) -> u64 {
    assert!(m1 >= 1 && m2 >= 1);
    m1 + m2 - 1
}

/// General form for a product of `len(ms)` factors: `1 - len + sum(ms)`.
pub fn product_multiplicity_general(ms: &[u64]) -> u64 {
    assert!(!ms.is_empty(), "at least one factor required");
    assert!(ms.iter().all(|&m| m >= 1));
    1 + ms.iter().sum::<u64>() - ms.len() as u64
}

/// Sharpened product bound `r1*r2 - (r1 - k1)(r2 - k2)`, which equals the
/// coarse bound `r1*r2` exactly when one factor has all distinct roots.
pub fn product_rank_bound(r1: u64, k1: u64, r2: u64, k2: u64) -> Int {
    assert!(k1 >= 1 && k1 <= r1 && k2 >= 1 && k2 <= r2);
    Int::from(r1) * Int::from(r2) - Int::from(r1 - k1) * Int::from(r2 - k2)
}

/// Power bound for a rank-`r` sequence with all roots distinct:
/// `binomial(M + r - 1, M)`.
pub fn power_bound_distinct(r: u64, m: u64) -> Int {
    assert!(r >= 1 && m >= 1);
    binomial(m + r - 1, m as i64)
}

/// Refined power bound for rank `r` with `k` distinct roots:
/// `(r - k) * binomial(M + k - 1, M - 1) + binomial(M + k - 1, M)`.
pub fn power_bound_refined(r: u64, k: u64, m: u64) -> Result<Int, BoundsError> {
    assert!(r >= 1 && m >= 1 && k >= 1);
    if k > r {
        return Err(BoundsError::KGreaterThanR { k, r });
    }
    Ok(Int::from(r - k) * binomial(m + k - 1, m as i64 - 1) + binomial(m + k - 1, m as i64))
}

const ORACLE_CAP: u64 = 1_000_000;

/// Brute-force worst-case rank: enumerates every size-`M` multiset over the
/// `k` roots, assumes all multiset products are distinct with no coefficient
/// cancellation, and sums the product multiplicities.
pub fn bound_oracle(spec: &RootSpec, m: u64) -> Result<Int, BoundsError> {
    assert!(m >= 1);
    let k = spec.distinct_count();
    let count = binomial(m + k - 1, m as i64);
    if count.to_u64().map_or(true, |c| c > ORACLE_CAP) {
        return Err(BoundsError::TooLarge { count, cap: ORACLE_CAP });
    }
    let mut total = Int::from(0);
    let mut exponents = vec![0u64; k as usize];
    enumerate_compositions(m, 0, &mut exponents, &mut |expo| {
        // multiset with expo[i] copies of root i: multiplicity
        // 1 - M + sum_i expo[i] * m_i
        let weighted: u64 = expo
            .iter()
            .zip(spec.multiplicities())
            .map(|(&e, &mult)| e * mult)
            .sum();
        total += Int::from(1 + weighted - m);
    });
    Ok(total)
}

fn enumerate_compositions(remaining: u64, idx: usize, expo: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if idx + 1 == expo.len() {
        expo[idx] = remaining;
        f(expo);
        return;
    }
    for take in 0..=remaining {
        expo[idx] = take;
        enumerate_compositions(remaining - take, idx + 1, expo, f);
    }
}

/// All compositions of `r` into exactly `k` positive parts.
pub fn multiplicity_compositions(r: u64, k: u64) -> Vec<Vec<u64>> {
    assert!(k >= 1 && k <= r);
    let mut out = Vec::new();
    let mut parts = vec![0u64; k as usize];
    fn rec(remaining: u64, idx: usize, parts: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let slots_left = parts.len() - idx;
        if slots_left == 1 {
            if remaining >= 1 {
                parts[idx] = remaining;
                out.push(parts.clone());
            }
            return;
        }
        for take in 1..=(remaining - (slots_left as u64 - 1)) {
            parts[idx] = take;
            rec(remaining - take, idx + 1, parts, out);
        }
    }
    rec(r, 0, &mut parts, &mut out);
    out
}
