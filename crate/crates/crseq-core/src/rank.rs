//! Minimal-recurrence (rank) computation from exact terms.
//!
//! The engine finds the minimal-order linear recurrence annihilating the
//! supplied terms via a fraction-free Berlekamp–Massey iteration over the
//! integers (denominators are cleared first), then strips any `x^m` factor
//! from the characteristic polynomial — trailing zero coefficients — so the
//! reported recurrence has nonzero constant coefficient. The stripped factor
//! is the transient: the recurrence holds from that index on.
//!
//! Certification policy: there is no a-priori bound on how many terms pin
//! down the rank of an *eventually* recursive sequence. The engine requires
//! `2*rank + transient + guard` supplied terms (guard defaults to
//! [`DEFAULT_GUARD`]) and [`rank_of_power`] / [`rank_of_product`] size their
//! windows from the closed-form bounds, doubling once on failure. Everything
//! is exact integer/rational arithmetic; there are no tolerances anywhere.

use crate::bounds;
use crate::rational::{denominator_lcm, Int, Rational};
use crate::sequence::{termwise_power, termwise_product, LinRecSequence, Recurrence};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Extra terms validated beyond the `2*rank + transient` window.
pub const DEFAULT_GUARD: usize = 10;

/// Hard cap on requested window sizes, to fail fast on absurd inputs.
const WINDOW_CAP: usize = 200_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankError {
    #[error("insufficient terms: supply at least {needed_extra} more to certify this rank")]
    InsufficientTerms { needed_extra: usize },
    #[error("candidate recurrence fails at term index {index}; the window was too short")]
    ValidationFailed { index: usize },
    #[error("hankel determinant of size {size} needs {needed} terms, got {got}")]
    TooFewTerms { size: usize, needed: usize, got: usize },
    #[error("window of {requested} terms exceeds the cap of {cap}")]
    WindowTooLarge { requested: usize, cap: usize },
}

/// Result of a certified rank computation.
///
/// `recurrence` is in strict-rank form (`c_0 != 0`) unless `rank == 0`, and
/// its residual is zero on every supplied index `>= transient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    pub recurrence: Recurrence,
    pub transient: usize,
    pub terms_used: usize,
    pub guard_validated: usize,
}

struct BmOutcome {
    /// Integer-scaled connection polynomial, length `l + 1`, `conn[0] != 0`.
    conn: Vec<Int>,
    l: usize,
}

/// Fraction-free Berlekamp–Massey over the integers.
///
/// The connection polynomial is maintained up to an integer scale factor,
/// which leaves every branch decision (discrepancy zero? length change?)
/// unaffected. After each cross-multiplied update the vector is reduced to
/// its primitive representative, which keeps coefficient growth at
/// Hankel-minor size throughout.
fn berlekamp_massey(u: &[Int]) -> BmOutcome {
    let mut conn: Vec<Int> = vec![Int::one()];
    let mut prev: Vec<Int> = vec![Int::one()];
    let mut l: usize = 0;
    let mut shift: usize = 1;
    let mut prev_disc: Int = Int::one();

    for n in 0..u.len() {
        let mut d = Int::zero();
        for i in 0..=l.min(n) {
            if !conn[i].is_zero() {
                d += &conn[i] * &u[n - i];
            }
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        // candidate = prev_disc * conn - d * x^shift * prev, stripped
        let new_len = conn.len().max(shift + prev.len());
        let mut next: Vec<Int> = vec![Int::zero(); new_len];
        for (i, ci) in conn.iter().enumerate() {
            next[i] = &prev_disc * ci;
        }
        for (j, pj) in prev.iter().enumerate() {
            next[shift + j] -= &d * pj;
        }
        strip_content(&mut next);
        if 2 * l <= n {
            prev = std::mem::replace(&mut conn, next);
            prev_disc = d;
            l = n + 1 - l;
            shift = 1;
        } else {
            conn = next;
            shift += 1;
        }
    }

    conn.resize(l + 1, Int::zero());
    strip_content(&mut conn);
    if conn[0].is_negative() {
        for c in conn.iter_mut() {
            *c = -std::mem::take(c);
        }
    }
    BmOutcome { conn, l }
}

fn strip_content(v: &mut [Int]) {
    let mut g = Int::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = if g.is_zero() { x.clone() } else { crate::rational::big_gcd(&g, x) };
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
}

/// Finds the minimal-order recurrence annihilating `terms`, strips the
/// transient, and validates the result on every supplied index.
pub fn minimal_recurrence(terms: &[Rational], guard: usize) -> Result<RankCertificate, RankError> {
    let n_terms = terms.len();
    let lambda = denominator_lcm(terms);
    let scale = Rational::from_integer(lambda);
    let u: Vec<Int> = terms
        .iter()
        .map(|t| {
            let v = t * &scale;
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect();

    let BmOutcome { conn, l } = berlekamp_massey(&u);

    // trailing zeros of the characteristic polynomial = x^m transient factor
    let transient = conn.iter().rev().take_while(|c| c.is_zero()).count();
    let rank = l - transient;

    let lead = conn[0].clone();
    let rec_coeffs: Vec<Rational> = (1..=rank)
        .map(|i| -Rational::new(conn[i].clone(), lead.clone()))
        .collect();
    let recurrence = Recurrence::new(rec_coeffs);

    // residual check over the full supplied range
    for n in l..n_terms {
        let mut acc = Int::zero();
        for i in 0..=rank {
            if !conn[i].is_zero() {
                acc += &conn[i] * &u[n - i];
            }
        }
        if !acc.is_zero() {
            return Err(RankError::ValidationFailed { index: n });
        }
    }

    let needed = 2 * rank + transient + guard;
    if n_terms < needed {
        return Err(RankError::InsufficientTerms { needed_extra: needed - n_terms });
    }

    Ok(RankCertificate {
        rank,
        recurrence,
        transient,
        terms_used: n_terms,
        guard_validated: n_terms - (2 * rank + transient),
    })
}

fn checked_window(bound: usize, t_allow: usize, guard: usize) -> Result<usize, RankError> {
    let requested = 2 * bound + t_allow + guard;
    if requested > WINDOW_CAP {
        return Err(RankError::WindowTooLarge { requested, cap: WINDOW_CAP });
    }
    Ok(requested)
}

/// Rank certificate for the termwise `m`-th power of `seq`.
///
/// The window is sized from the closed-form bound on the rank of the power
/// (using the order and the distinct-root count of the characteristic
/// polynomial) plus the transient allowance and guard, and is doubled once if
/// certification fails.
pub fn rank_of_power(seq: &LinRecSequence, m: u32) -> Result<RankCertificate, RankError> {
    rank_of_power_with_guard(seq, m, DEFAULT_GUARD)
}

pub fn rank_of_power_with_guard(
    seq: &LinRecSequence,
    m: u32,
    guard: usize,
) -> Result<RankCertificate, RankError> {
    assert!(m >= 1, "power must be >= 1");
    let r = seq.recurrence.order();
    let bound = if r == 0 {
        0
    } else {
        let k = seq
            .recurrence
            .char_poly()
            .distinct_root_count()
            .expect("characteristic polynomial is monic, hence nonzero");
        int_to_usize(&bounds::power_bound_refined(r as u64, k as u64, m as u64).unwrap())?
    };
    let mut window = checked_window(bound, seq.transient_allowance(), guard)?;
    let mut stream = seq.stream();
    for attempt in 0..2 {
        stream.ensure(window);
        let mut power = termwise_power(stream.clone(), m, window);
        let terms = power.terms(window).to_vec();
        match minimal_recurrence(&terms, guard) {
            Ok(cert) => return Ok(cert),
            Err(RankError::InsufficientTerms { .. } | RankError::ValidationFailed { .. })
                if attempt == 0 =>
            {
                window = (window * 2).min(WINDOW_CAP);
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("loop returns on the second attempt")
}

/// Rank certificate for the termwise product of two sequences. The window is
/// sized from the product bound `r1 * r2`.
pub fn rank_of_product(
    a: &LinRecSequence,
    b: &LinRecSequence,
) -> Result<RankCertificate, RankError> {
    rank_of_product_with_guard(a, b, DEFAULT_GUARD)
}

pub fn rank_of_product_with_guard(
    a: &LinRecSequence,
    b: &LinRecSequence,
    guard: usize,
) -> Result<RankCertificate, RankError> {
    let bound = a.recurrence.order() * b.recurrence.order();
    let t_allow = a.transient_allowance().max(b.transient_allowance());
    let mut window = checked_window(bound, t_allow, guard)?;
    for attempt in 0..2 {
        let mut prod = termwise_product(a.stream(), b.stream(), window);
        let terms = prod.terms(window).to_vec();
        match minimal_recurrence(&terms, guard) {
            Ok(cert) => return Ok(cert),
            Err(RankError::InsufficientTerms { .. } | RankError::ValidationFailed { .. })
                if attempt == 0 =>
            {
                window = (window * 2).min(WINDOW_CAP);
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("loop returns on the second attempt")
}

/// Exact determinant of the `m x m` matrix with entry `(i, j)` equal to
/// `terms[i + j - 2]` (1-based `i`, `j`).
pub fn hankel_determinant(terms: &[Rational], m: usize) -> Result<Rational, RankError> {
    assert!(m >= 1, "matrix size must be >= 1");
    let needed = 2 * m - 1;
    if terms.len() < needed {
        return Err(RankError::TooFewTerms { size: m, needed, got: terms.len() });
    }
    let lambda = denominator_lcm(&terms[..needed]);
    let scale = Rational::from_integer(lambda.clone());
    let matrix: Vec<Vec<Int>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let v = &terms[i + j] * &scale;
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    let det = bareiss_determinant(matrix);
    Ok(Rational::new(det, num_traits::pow::pow(lambda, m)))
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn bareiss_determinant(mut a: Vec<Vec<Int>>) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign_flip = false;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return Int::zero(),
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &pivot - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = Int::zero();
        }
        prev = pivot;
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

fn int_to_usize(v: &Int) -> Result<usize, RankError> {
    use num_traits::ToPrimitive;
    v.to_usize().ok_or(RankError::WindowTooLarge { requested: usize::MAX, cap: WINDOW_CAP })
}
