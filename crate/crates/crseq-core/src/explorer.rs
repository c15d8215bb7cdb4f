//! Rank sequences of termwise powers: profiles, generic-vs-particular
//! classification, eventual (quasi-)polynomial fitting, and coefficient-space
//! searches.
//!
//! Generic rank sequences are estimated by Monte Carlo: the rank of each
//! power is maximized over `trials` random integer initial-value vectors.
//! Coefficient cancellation only happens on a measure-zero set of initial
//! values, so random ones realize the general sequence almost surely; a fixed
//! seed keeps runs reproducible. Undersampling can only depress a rank
//! estimate, never inflate it.
//!
//! Rank sequences that stabilize do so as a polynomial per residue class of
//! M modulo a small period. "Pseudo-polynomial" behavior of particular rank
//! sequences is interpreted here as exactly that quasi-polynomial shape
//! (period 1 = plain eventual polynomial).

use crate::bounds::{self, BoundsError};
use crate::rank::{rank_of_power, RankError};
use crate::rational::{format_rational, rat, Int, Rational};
use crate::sequence::{LinRecSequence, Recurrence};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Default number of random initial-value trials for the generic sampler.
pub const DEFAULT_TRIALS: usize = 3;
/// Default bound on random initial-value entries.
pub const DEFAULT_INIT_BOUND: i64 = 50;
/// Default number of powers examined.
pub const DEFAULT_MMAX: usize = 8;
/// Default fit-acceptance window.
pub const DEFAULT_FIT_WINDOW: usize = 4;
/// Default maximal quasi-polynomial period tried.
pub const DEFAULT_MAX_PERIOD: usize = 4;

const MAX_FIT_DEGREE: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExplorerError {
    #[error("rank computation failed at power M={m}: {source}")]
    RankFailed {
        m: u32,
        #[source]
        source: RankError,
    },
    #[error("length mismatch: profile has {profile} entries, generic has {generic}")]
    LengthMismatch { profile: usize, generic: usize },
    #[error("search needs {needed} rank computations, budget allows {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    General,
    Particular,
    Unknown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::General => write!(f, "general"),
            Classification::Particular => write!(f, "particular"),
            Classification::Unknown => write!(f, "unknown"),
        }
    }
}

/// One polynomial per residue class of M modulo `period`, exact from `onset`
/// onward. `period == 1` is a plain eventual polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    period: usize,
    /// Monomial coefficients, low degree first, indexed by `M % period`.
    components: Vec<Vec<Rational>>,
    onset: usize,
}

impl QuasiPolynomial {
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn onset(&self) -> usize {
        self.onset
    }

    pub fn components(&self) -> &[Vec<Rational>] {
        &self.components
    }

    pub fn component(&self, m: usize) -> &[Rational] {
        &self.components[m % self.period]
    }

    pub fn eval(&self, m: usize) -> Rational {
        let mm = rat(m as i64);
        let mut acc = rat(0);
        for c in self.component(m).iter().rev() {
            acc = acc * &mm + c;
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Leading coefficient of the highest-degree component (first such
    /// component for ties).
    pub fn leading_coefficient(&self) -> Rational {
        let deg = self.degree();
        for c in &self.components {
            if c.len() == deg + 1 {
                return c.last().cloned().unwrap_or_else(|| rat(0));
            }
        }
        rat(0)
    }

    /// Renders e.g. `M^2/2 + 3M/2 + 1`, or per-residue branches for period
    /// greater than one.
    pub fn render(&self) -> String {
        if self.period == 1 {
            render_poly(&self.components[0])
        } else {
            let parts: Vec<String> = (0..self.period)
                .map(|r| format!("M=={r} (mod {}): {}", self.period, render_poly(&self.components[r])))
                .collect();
            format!("{{{}}}", parts.join("; "))
        }
    }
}

fn render_poly(coeffs: &[Rational]) -> String {
    if coeffs.iter().all(|c| c.is_zero()) {
        return "0".to_string();
    }
    let mut out = String::new();
    for (deg, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let var = match deg {
            0 => String::new(),
            1 => "M".to_string(),
            _ => format!("M^{deg}"),
        };
        if deg == 0 {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&var);
        } else if mag.denom().is_one() {
            out.push_str(&format!("{}{}", mag.numer(), var));
        } else if mag.numer().is_one() {
            out.push_str(&format!("{}/{}", var, mag.denom()));
        } else {
            out.push_str(&format!("{}{}/{}", mag.numer(), var, mag.denom()));
        }
    }
    out
}

/// Per-power ranks of a concrete sequence, with the matching closed-form
/// bounds and transients.
#[derive(Debug, Clone)]
pub struct RankProfile {
    pub seq: LinRecSequence,
    pub mmax: usize,
    pub ranks: Vec<usize>,
    pub bounds: Vec<Int>,
    pub transients: Vec<usize>,
    pub fitted: Option<QuasiPolynomial>,
    pub classification: Classification,
}

impl RankProfile {
    pub fn with_fit(mut self, max_period: usize, window: usize) -> Self {
        self.fitted = fit_quasi_polynomial(&self.ranks, max_period, window);
        self
    }
}

/// Ranks of `seq^M` for `M = 1..=mmax`, with refined bounds computed from the
/// order and distinct-root count of the characteristic polynomial.
pub fn rank_sequence(seq: &LinRecSequence, mmax: usize) -> Result<RankProfile, ExplorerError> {
    assert!(mmax >= 1, "mmax must be >= 1");
    let r = seq.recurrence.order() as u64;
    let k = if r == 0 {
        0
    } else {
        seq.recurrence
            .char_poly()
            .distinct_root_count()
            .expect("monic characteristic polynomial") as u64
    };
    let mut ranks = Vec::with_capacity(mmax);
    let mut bound_list = Vec::with_capacity(mmax);
    let mut transients = Vec::with_capacity(mmax);
    for m in 1..=mmax {
        let cert = rank_of_power(seq, m as u32)
            .map_err(|source| ExplorerError::RankFailed { m: m as u32, source })?;
        ranks.push(cert.rank);
        transients.push(cert.transient);
        bound_list.push(if r == 0 {
            Int::zero()
        } else {
            bounds::power_bound_refined(r, k, m as u64)?
        });
    }
    Ok(RankProfile {
        seq: seq.clone(),
        mmax,
        ranks,
        bounds: bound_list,
        transients,
        fitted: None,
        classification: Classification::Unknown,
    })
}

/// Monte Carlo estimate of the general rank sequence of a recurrence: the
/// per-power maximum over `trials` random integer initial-value vectors with
/// entries in `[-DEFAULT_INIT_BOUND, DEFAULT_INIT_BOUND]`.
pub fn generic_rank_sequence(
    rec: &Recurrence,
    mmax: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<usize>, ExplorerError> {
    generic_rank_sequence_with_bound(rec, mmax, trials, seed, DEFAULT_INIT_BOUND)
}

pub fn generic_rank_sequence_with_bound(
    rec: &Recurrence,
    mmax: usize,
    trials: usize,
    seed: u64,
    init_bound: i64,
) -> Result<Vec<usize>, ExplorerError> {
    assert!(trials >= 1, "at least one trial required");
    assert!(rec.order() >= 1, "recurrence must have positive order");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = vec![0usize; mmax];
    for _ in 0..trials {
        let init = random_init(&mut rng, rec.order(), init_bound);
        let seq = LinRecSequence::new(rec.clone(), init).expect("init length = order");
        for m in 1..=mmax {
            let cert = rank_of_power(&seq, m as u32)
                .map_err(|source| ExplorerError::RankFailed { m: m as u32, source })?;
            best[m - 1] = best[m - 1].max(cert.rank);
        }
    }
    Ok(best)
}

fn random_init(rng: &mut ChaCha8Rng, order: usize, bound: i64) -> Vec<Rational> {
    loop {
        let init: Vec<i64> = (0..order).map(|_| rng.gen_range(-bound..=bound)).collect();
        if init.iter().any(|&x| x != 0) {
            return init.into_iter().map(rat).collect();
        }
    }
}

/// Compares a concrete profile against the generic sequence of its
/// recurrence. Equal means general; anywhere strictly below means the
/// initial values cancel something, i.e. particular.
pub fn classify(ranks: &[usize], generic: &[usize]) -> Result<Classification, ExplorerError> {
    if ranks.len() != generic.len() {
        return Err(ExplorerError::LengthMismatch {
            profile: ranks.len(),
            generic: generic.len(),
        });
    }
    let below = ranks.iter().zip(generic).any(|(r, g)| r < g);
    let above = ranks.iter().zip(generic).any(|(r, g)| r > g);
    Ok(match (below, above) {
        (false, false) => Classification::General,
        (true, false) => Classification::Particular,
        // the profile exceeding the sampled generic estimate means the
        // sampler undershot; the profile itself then witnesses generic values
        (false, true) => Classification::General,
        (true, true) => Classification::Unknown,
    })
}

/// Fits an eventual quasi-polynomial to observed ranks.
///
/// For each period `p` (smallest first) and each residue class of M mod `p`,
/// the fit takes the lowest degree `d` whose Newton polynomial through the
/// last `d+1` class entries reproduces at least `d + window - 1` trailing
/// entries of the class. Evidence below that threshold is rejected rather
/// than extrapolated. The returned fit reproduces every observed rank from
/// `onset` onward exactly.
pub fn fit_quasi_polynomial(
    ranks: &[usize],
    max_period: usize,
    window: usize,
) -> Option<QuasiPolynomial> {
    assert!(window >= 2, "window must be >= 2");
    assert!(max_period >= 1, "max_period must be >= 1");
    'period: for p in 1..=max_period {
        let mut components = vec![Vec::new(); p];
        let mut onset = 1usize;
        for residue in 0..p {
            let ms: Vec<usize> = (1..=ranks.len()).filter(|m| m % p == residue).collect();
            let t = ms.len();
            if t < window.min(2) {
                continue 'period;
            }
            let mut accepted = None;
            for d in 0..=MAX_FIT_DEGREE {
                if d + 1 > t || d + window - 1 > t {
                    break;
                }
                let points: Vec<(usize, usize)> =
                    ms[t - d - 1..].iter().map(|&m| (m, ranks[m - 1])).collect();
                let poly = newton_polynomial(&points);
                // extend the matched tail as far down as possible
                let mut first = t - d - 1;
                while first > 0 {
                    let m = ms[first - 1];
                    if eval_poly(&poly, m) == rat(ranks[m - 1] as i64) {
                        first -= 1;
                    } else {
                        break;
                    }
                }
                let matched = t - first;
                if matched >= d + window - 1 {
                    accepted = Some((poly, ms[first]));
                    break;
                }
            }
            let Some((poly, class_onset)) = accepted else { continue 'period };
            components[residue] = poly;
            onset = onset.max(class_onset);
        }
        return Some(QuasiPolynomial { period: p, components, onset });
    }
    None
}

fn eval_poly(coeffs: &[Rational], m: usize) -> Rational {
    let mm = rat(m as i64);
    let mut acc = rat(0);
    for c in coeffs.iter().rev() {
        acc = acc * &mm + c;
    }
    acc
}

/// Interpolating polynomial through the points, as monomial coefficients
/// (low degree first), via Newton divided differences.
fn newton_polynomial(points: &[(usize, usize)]) -> Vec<Rational> {
    let xs: Vec<Rational> = points.iter().map(|&(x, _)| rat(x as i64)).collect();
    let mut diffs: Vec<Rational> = points.iter().map(|&(_, y)| rat(y as i64)).collect();
    let n = points.len();
    // divided differences in place: diffs[i] = f[x_0..x_i]
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &diffs[i] - &diffs[i - 1];
            let den = &xs[i] - &xs[i - level];
            diffs[i] = num / den;
        }
    }
    // expand the Newton form to monomial coefficients
    let mut coeffs: Vec<Rational> = vec![rat(0); n];
    let mut basis: Vec<Rational> = vec![rat(0); n];
    basis[0] = rat(1);
    let mut basis_len = 1usize;
    for (i, dd) in diffs.iter().enumerate() {
        for j in 0..basis_len {
            coeffs[j] = &coeffs[j] + &(dd * &basis[j]);
        }
        if i + 1 < n {
            // basis *= (x - xs[i])
            let mut next = vec![rat(0); basis_len + 1];
            for j in 0..basis_len {
                next[j + 1] = &next[j + 1] + &basis[j];
                next[j] = &next[j] - &(&xs[i] * &basis[j]);
            }
            basis_len += 1;
            basis[..basis_len].clone_from_slice(&next[..basis_len]);
        }
    }
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(rat(0));
    }
    coeffs
}

/// Configuration for the coefficient-space search.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Recurrence order searched.
    pub order: usize,
    /// Inclusive coefficient range.
    pub coeff_min: i64,
    pub coeff_max: i64,
    pub mmax: usize,
    pub trials: usize,
    pub seed: u64,
    pub init_bound: i64,
    /// Cap on total rank computations; `None` means unlimited.
    pub budget: Option<u64>,
    pub max_period: usize,
    pub window: usize,
}

impl SearchConfig {
    pub fn new(order: usize, coeff_min: i64, coeff_max: i64) -> Self {
        SearchConfig {
            order,
            coeff_min,
            coeff_max,
            mmax: DEFAULT_MMAX,
            trials: DEFAULT_TRIALS,
            seed: 0,
            init_bound: DEFAULT_INIT_BOUND,
            budget: None,
            max_period: DEFAULT_MAX_PERIOD,
            window: DEFAULT_FIT_WINDOW,
        }
    }
}

/// One deduplicated search result: the lexicographically first coefficient
/// tuple realizing its generic rank sequence.
#[derive(Debug, Clone)]
pub struct SearchRow {
    pub coeffs: Vec<i64>,
    pub ranks: Vec<usize>,
    pub fitted: Option<QuasiPolynomial>,
    pub classification: Classification,
    /// Whether the ranks attain the refined bound for every M <= mmax.
    pub attains_bound: bool,
}

/// Enumerates integer coefficient tuples (c_{r-1}, ..., c_0) with c_0 != 0,
/// computes each tuple's generic rank sequence, deduplicates by the full
/// rank-sequence prefix, and returns rows sorted by (eventual polynomial
/// degree, leading coefficient, lexicographic coefficients).
///
/// Tuples are distributed across parallel workers; each worker is pure given
/// (tuple, seed), and results are merged deterministically.
pub fn search(cfg: &SearchConfig) -> Result<Vec<SearchRow>, ExplorerError> {
    if cfg.order < 1 {
        return Err(ExplorerError::BadConfig("order must be >= 1".into()));
    }
    if cfg.coeff_min > cfg.coeff_max {
        return Err(ExplorerError::BadConfig("empty coefficient range".into()));
    }
    if cfg.mmax < 1 || cfg.trials < 1 {
        return Err(ExplorerError::BadConfig("mmax and trials must be >= 1".into()));
    }
    let tuples = enumerate_tuples(cfg.order, cfg.coeff_min, cfg.coeff_max);
    if let Some(budget) = cfg.budget {
        let needed = tuples.len() as u64 * cfg.mmax as u64 * cfg.trials as u64;
        if needed > budget {
            return Err(ExplorerError::BudgetExceeded { needed, budget });
        }
    }

    let outcomes: Vec<(Vec<i64>, Result<Vec<usize>, ExplorerError>)> = tuples
        .into_par_iter()
        .map(|coeffs| {
            let rec = Recurrence::from_int_coeffs(&coeffs);
            let seed = tuple_seed(cfg.seed, &coeffs);
            let ranks = generic_rank_sequence_with_bound(
                &rec,
                cfg.mmax,
                cfg.trials,
                seed,
                cfg.init_bound,
            );
            (coeffs, ranks)
        })
        .collect();

    // deduplicate by rank sequence, keeping the first tuple in search order
    let mut dedup: BTreeMap<Vec<usize>, Vec<i64>> = BTreeMap::new();
    for (coeffs, outcome) in outcomes {
        let ranks = outcome?;
        dedup.entry(ranks).or_insert(coeffs);
    }

    let mut rows: Vec<SearchRow> = dedup
        .into_iter()
        .map(|(ranks, coeffs)| {
            let fitted = fit_quasi_polynomial(&ranks, cfg.max_period, cfg.window);
            let rec = Recurrence::from_int_coeffs(&coeffs);
            let r = rec.order() as u64;
            let k = rec
                .char_poly()
                .distinct_root_count()
                .expect("monic characteristic polynomial") as u64;
            let attains = ranks.iter().enumerate().all(|(i, &rank)| {
                bounds::power_bound_refined(r, k, i as u64 + 1)
                    .map(|b| b == Int::from(rank))
                    .unwrap_or(false)
            });
            SearchRow {
                coeffs,
                ranks,
                fitted,
                classification: Classification::General,
                attains_bound: attains,
            }
        })
        .collect();

    rows.sort_by(|a, b| row_sort_key(a).cmp(&row_sort_key(b)));
    Ok(rows)
}

fn row_sort_key(row: &SearchRow) -> (usize, Rational, Vec<i64>, Vec<usize>) {
    match &row.fitted {
        Some(fit) => (fit.degree(), fit.leading_coefficient(), row.coeffs.clone(), row.ranks.clone()),
        None => (usize::MAX, rat(0), row.coeffs.clone(), row.ranks.clone()),
    }
}

fn enumerate_tuples(order: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; order];
    fn rec(idx: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if idx == cur.len() {
            out.push(cur.clone());
            return;
        }
        let last = idx + 1 == cur.len();
        for v in lo..=hi {
            if last && v == 0 {
                continue; // c_0 != 0
            }
            cur[idx] = v;
            rec(idx + 1, lo, hi, cur, out);
        }
    }
    rec(0, lo, hi, &mut cur, &mut out);
    out
}

fn tuple_seed(seed: u64, coeffs: &[i64]) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &c in coeffs {
        h ^= c as u64;
        h = splitmix64(h);
    }
    h
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
