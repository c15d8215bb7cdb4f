//! Constant-recursive sequences: recurrence coefficients, exact term
//! generation, and lazily extended streams for termwise products and powers.
//!
//! Coefficient order convention: a recurrence of order `r` is stored as the
//! tuple `(c_{r-1}, ..., c_1, c_0)`, highest shift first, meaning
//! `s(n+r) = c_{r-1} s(n+r-1) + ... + c_1 s(n+1) + c_0 s(n)`.
//! All I/O uses the same order.
//!
//! # Concurrency contract
//!
//! [`TermStream`] memoizes computed prefixes behind a plain `&mut` API. A
//! stream is confined to one task; parallel workers must clone the stream (or
//! the underlying [`LinRecSequence`]) and extend their own copies. Term
//! generation is deterministic, so clones always agree on shared prefixes.

use crate::poly::RationalPolynomial;
use crate::rational::{format_rational, parse_rational, rat, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("characteristic polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("need at least {order} initial terms for an order-{order} recurrence, got {got}")]
    TooFewInitialTerms { order: usize, got: usize },
    #[error("invalid sequence literal: {0}")]
    BadLiteral(String),
}

/// Linear recurrence with constant rational coefficients, stored highest
/// shift first: `(c_{r-1}, ..., c_0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Recurrence {
    coeffs: Vec<Rational>,
}

impl Recurrence {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Recurrence { coeffs }
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Recurrence::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Strict-rank form requires a nonzero trailing coefficient `c_0`
    /// (trivially true for the empty order-0 recurrence).
    pub fn is_strict_rank(&self) -> bool {
        self.coeffs.last().map_or(true, |c0| !c0.is_zero())
    }

    /// The monic characteristic polynomial
    /// `x^r - (c_{r-1} x^{r-1} + ... + c_1 x + c_0)`.
    pub fn char_poly(&self) -> RationalPolynomial {
        let r = self.order();
        let mut coeffs = vec![rat(0); r + 1];
        coeffs[r] = rat(1);
        for (i, c) in self.coeffs.iter().enumerate() {
            // c_{r-1-i} multiplies x^{r-1-i}
            coeffs[r - 1 - i] = -c.clone();
        }
        RationalPolynomial::new(coeffs)
    }

    /// Inverse of [`Recurrence::char_poly`] for monic polynomials of degree >= 1.
    pub fn from_char_poly(p: &RationalPolynomial) -> Result<Self, SequenceError> {
        if !p.is_monic() || p.degree().map_or(true, |d| d == 0) {
            return Err(SequenceError::NotMonic);
        }
        let r = p.degree().unwrap();
        let coeffs = (0..r).map(|i| -p.coeff(r - 1 - i)).collect();
        Ok(Recurrence::new(coeffs))
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A recurrence together with initial terms. Extra initial terms beyond the
/// order are allowed and trusted as-is; they model transients of eventually
/// recursive sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinRecSequence {
    pub recurrence: Recurrence,
    pub initial_terms: Vec<Rational>,
    pub label: Option<String>,
}

impl LinRecSequence {
    pub fn new(recurrence: Recurrence, initial_terms: Vec<Rational>) -> Result<Self, SequenceError> {
        if initial_terms.len() < recurrence.order() {
            return Err(SequenceError::TooFewInitialTerms {
                order: recurrence.order(),
                got: initial_terms.len(),
            });
        }
        Ok(LinRecSequence { recurrence, initial_terms, label: None })
    }

    pub fn from_ints(coeffs: &[i64], init: &[i64]) -> Result<Self, SequenceError> {
        LinRecSequence::new(
            Recurrence::from_int_coeffs(coeffs),
            init.iter().map(|&x| rat(x)).collect(),
        )
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Extra initial terms beyond the recurrence order.
    pub fn transient_allowance(&self) -> usize {
        self.initial_terms.len() - self.recurrence.order()
    }

    /// First `n` terms, exactly. Terms beyond the initial block satisfy the
    /// recurrence; an order-0 recurrence generates zeros.
    pub fn generate_terms(&self, n: usize) -> Vec<Rational> {
        let mut terms: Vec<Rational> = self.initial_terms.iter().take(n).cloned().collect();
        extend_terms(&self.recurrence, &mut terms, n);
        terms
    }

    pub fn stream(&self) -> TermStream {
        TermStream {
            cache: self.initial_terms.clone(),
            source: StreamSource::Sequence(self.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SequenceLiteral::from(self)).expect("literal serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, SequenceError> {
        let lit: SequenceLiteral =
            serde_json::from_str(s).map_err(|e| SequenceError::BadLiteral(e.to_string()))?;
        lit.try_into()
    }
}

fn extend_terms(rec: &Recurrence, terms: &mut Vec<Rational>, n: usize) {
    let r = rec.order();
    while terms.len() < n {
        let i = terms.len();
        if r == 0 {
            // an order-0 recurrence generates the zero tail
            terms.push(rat(0));
            continue;
        }
        debug_assert!(i >= r, "term generation started below the initial block");
        let mut next = rat(0);
        for (t, c) in rec.coeffs().iter().enumerate() {
            if !c.is_zero() {
                next = next + c * &terms[i - 1 - t];
            }
        }
        terms.push(next);
    }
}

/// JSON wire form: `{"coeffs": ["5","-9","7","-2"], "init": ["1","1","2","1"]}`
/// with rationals as `"p"` or `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceLiteral {
    pub coeffs: Vec<String>,
    pub init: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

impl From<&LinRecSequence> for SequenceLiteral {
    fn from(seq: &LinRecSequence) -> Self {
        SequenceLiteral {
            coeffs: seq.recurrence.coeffs().iter().map(format_rational).collect(),
            init: seq.initial_terms.iter().map(format_rational).collect(),
            label: seq.label.clone(),
        }
    }
}

impl TryFrom<SequenceLiteral> for LinRecSequence {
    type Error = SequenceError;
    fn try_from(lit: SequenceLiteral) -> Result<Self, SequenceError> {
        let parse_all = |xs: &[String]| -> Result<Vec<Rational>, SequenceError> {
            xs.iter()
                .map(|s| parse_rational(s).map_err(|e| SequenceError::BadLiteral(e.to_string())))
                .collect()
        };
        let mut seq = LinRecSequence::new(
            Recurrence::new(parse_all(&lit.coeffs)?),
            parse_all(&lit.init)?,
        )?;
        seq.label = lit.label;
        Ok(seq)
    }
}

#[derive(Debug, Clone)]
enum StreamSource {
    Sequence(LinRecSequence),
    Product(Box<TermStream>, Box<TermStream>),
    Power(Box<TermStream>, u32),
    Literal,
}

/// Memoizing exact term stream. See the module docs for the concurrency
/// contract (confine to one task, clone for parallel workers).
#[derive(Debug, Clone)]
pub struct TermStream {
    cache: Vec<Rational>,
    source: StreamSource,
}

impl TermStream {
    pub fn from_terms(terms: Vec<Rational>) -> Self {
        TermStream { cache: terms, source: StreamSource::Literal }
    }

    pub fn constant(value: Rational) -> Self {
        LinRecSequence::new(Recurrence::new(vec![rat(1)]), vec![value])
            .unwrap()
            .stream()
    }

    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }

    /// Extends the memoized prefix to at least `n` terms.
    pub fn ensure(&mut self, n: usize) {
        if self.cache.len() >= n {
            return;
        }
        match &mut self.source {
            StreamSource::Sequence(seq) => extend_terms(&seq.recurrence, &mut self.cache, n),
            StreamSource::Product(a, b) => {
                a.ensure(n);
                b.ensure(n);
                for i in self.cache.len()..n {
                    let t = &a.cache[i] * &b.cache[i];
                    self.cache.push(t);
                }
            }
            StreamSource::Power(a, m) => {
                a.ensure(n);
                let m = *m;
                for i in self.cache.len()..n {
                    self.cache.push(rational_pow(&a.cache[i], m));
                }
            }
            StreamSource::Literal => {
                panic!("literal stream of {} terms cannot be extended to {}", self.cache.len(), n)
            }
        }
    }

    pub fn terms(&mut self, n: usize) -> &[Rational] {
        self.ensure(n);
        &self.cache[..n]
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.cache
    }
}

fn rational_pow(x: &Rational, m: u32) -> Rational {
    let mut acc = Rational::one();
    let mut base = x.clone();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Termwise product stream, pre-extended to `n` terms.
pub fn termwise_product(a: TermStream, b: TermStream, n: usize) -> TermStream {
    let mut s = TermStream {
        cache: Vec::new(),
        source: StreamSource::Product(Box::new(a), Box::new(b)),
    };
    s.ensure(n);
    s
}

/// Termwise `m`-th power stream (`m >= 1`), pre-extended to `n` terms.
pub fn termwise_power(a: TermStream, m: u32, n: usize) -> TermStream {
    assert!(m >= 1, "termwise power requires M >= 1");
    let mut s = TermStream {
        cache: Vec::new(),
        source: StreamSource::Power(Box::new(a), m),
    };
    s.ensure(n);
    s
}

/// Fibonacci numbers: coeffs (1,1), init (0,1).
pub fn fibonacci() -> LinRecSequence {
    LinRecSequence::from_ints(&[1, 1], &[0, 1]).unwrap().with_label("fibonacci")
}

/// Lucas numbers: same recurrence as Fibonacci, init (2,1).
pub fn lucas() -> LinRecSequence {
    LinRecSequence::from_ints(&[1, 1], &[2, 1]).unwrap().with_label("lucas")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalPolynomial;

    #[test]
    fn fibonacci_terms() {
        let fib = fibonacci();
        let got = fib.generate_terms(8);
        let want: Vec<Rational> = [0, 1, 1, 2, 3, 5, 8, 13].iter().map(|&x| rat(x)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn quadruple_root_example_terms() {
        let seq = LinRecSequence::from_ints(&[5, -9, 7, -2], &[1, 1, 2, 1]).unwrap();
        let got = seq.generate_terms(7);
        let want: Vec<Rational> = [1, 1, 2, 1, -8, -37, -110].iter().map(|&x| rat(x)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn mixed_root_example_terms() {
        let seq = LinRecSequence::from_ints(&[2, -1, 2], &[2, 3, 3]).unwrap();
        let got = seq.generate_terms(5);
        let want: Vec<Rational> = [2, 3, 3, 7, 17].iter().map(|&x| rat(x)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn char_poly_examples() {
        let p = Recurrence::from_int_coeffs(&[5, -9, 7, -2]).char_poly();
        assert_eq!(p, RationalPolynomial::from_int_coeffs(&[2, -7, 9, -5, 1]));
        // ... which factors as (x-1)^3 (x-2)
        let factored = &RationalPolynomial::from_int_coeffs(&[-1, 1]).pow(3)
            * &RationalPolynomial::from_int_coeffs(&[-2, 1]);
        assert_eq!(p, factored);

        let p = Recurrence::from_int_coeffs(&[1, 1]).char_poly();
        assert_eq!(p, RationalPolynomial::from_int_coeffs(&[-1, -1, 1]));

        let p = Recurrence::from_int_coeffs(&[0, -1]).char_poly();
        assert_eq!(p, RationalPolynomial::from_int_coeffs(&[1, 0, 1]));
    }

    #[test]
    fn recurrence_from_char_poly_examples() {
        let p = RationalPolynomial::from_int_coeffs(&[-2, 1, -2, 1]);
        let rec = Recurrence::from_char_poly(&p).unwrap();
        assert_eq!(rec, Recurrence::from_int_coeffs(&[2, -1, 2]));

        let p = RationalPolynomial::from_int_coeffs(&[-2, 1]);
        let rec = Recurrence::from_char_poly(&p).unwrap();
        assert_eq!(rec, Recurrence::from_int_coeffs(&[2]));

        // round trip on x^5 - 2x^4 - x^3 + 2x^2 + x + 1
        let p = RationalPolynomial::from_int_coeffs(&[1, 1, 2, -1, -2, 1]);
        let rec = Recurrence::from_char_poly(&p).unwrap();
        assert_eq!(rec.char_poly(), p);
        assert_eq!(rec, Recurrence::from_int_coeffs(&[2, 1, -2, -1, -1]));
    }

    #[test]
    fn from_char_poly_rejects_non_monic() {
        let p = RationalPolynomial::from_int_coeffs(&[1, 2]);
        assert_eq!(Recurrence::from_char_poly(&p), Err(SequenceError::NotMonic));
        let constant = RationalPolynomial::from_int_coeffs(&[1]);
        assert_eq!(Recurrence::from_char_poly(&constant), Err(SequenceError::NotMonic));
    }

    #[test]
    fn product_fibonacci_lucas() {
        let mut p = termwise_product(fibonacci().stream(), lucas().stream(), 5);
        let want: Vec<Rational> = [0, 1, 3, 8, 21].iter().map(|&x| rat(x)).collect();
        assert_eq!(p.terms(5), &want[..]);
    }

    #[test]
    fn product_with_all_ones_is_identity() {
        let seq = LinRecSequence::from_ints(&[2, -1, 2], &[2, 3, 3]).unwrap();
        let ones = TermStream::constant(rat(1));
        let mut p = termwise_product(seq.stream(), ones, 12);
        assert_eq!(p.terms(12), &seq.generate_terms(12)[..]);
    }

    #[test]
    fn power_examples() {
        let mut sq = termwise_power(fibonacci().stream(), 2, 6);
        let want: Vec<Rational> = [0, 1, 1, 4, 9, 25].iter().map(|&x| rat(x)).collect();
        assert_eq!(sq.terms(6), &want[..]);

        let seq = LinRecSequence::from_ints(&[2, -1, 2], &[2, 3, 3]).unwrap();
        let mut one = termwise_power(seq.stream(), 1, 9);
        assert_eq!(one.terms(9), &seq.generate_terms(9)[..]);

        // squaring the +-1 alternating sequence gives all ones
        let alt = LinRecSequence::from_ints(&[0, -1], &[1, 1]).unwrap();
        let mut sq = termwise_power(alt.stream(), 2, 8);
        assert!(sq.terms(8).iter().all(|t| t == &rat(1)));
    }

    #[test]
    fn recurrence_residual_is_zero_on_generated_terms() {
        let seq = LinRecSequence::from_ints(&[5, -9, 7, -2], &[1, 1, 2, 1]).unwrap();
        let terms = seq.generate_terms(40);
        let r = seq.recurrence.order();
        for i in r..terms.len() {
            let mut acc = terms[i].clone();
            for (t, c) in seq.recurrence.coeffs().iter().enumerate() {
                acc = acc - c * &terms[i - 1 - t];
            }
            assert!(acc.is_zero(), "residual nonzero at index {i}");
        }
    }

    #[test]
    fn power_equals_iterated_product() {
        let seq = LinRecSequence::from_ints(&[1, 1], &[0, 1]).unwrap();
        for m in 1..=4u32 {
            let mut pow = termwise_power(seq.stream(), m, 30);
            let mut prod = seq.stream();
            for _ in 1..m {
                prod = termwise_product(prod, seq.stream(), 30);
            }
            let mut prod = prod;
            assert_eq!(pow.terms(30), prod.terms(30));
        }
    }

    #[test]
    fn generation_is_deterministic_across_clones() {
        let seq = LinRecSequence::from_ints(&[2, -1, 2], &[2, 3, 3]).unwrap();
        let stream = seq.stream();
        let mut clones: Vec<TermStream> = (0..4).map(|_| stream.clone()).collect();
        let first = clones[0].terms(25).to_vec();
        for c in &mut clones[1..] {
            assert_eq!(c.terms(25), &first[..]);
        }
    }

    #[test]
    fn json_literal_round_trip() {
        let json = r#"{"coeffs": ["5","-9","7","-2"], "init": ["1","1","2","1"]}"#;
        let seq = LinRecSequence::from_json(json).unwrap();
        assert_eq!(seq, LinRecSequence::from_ints(&[5, -9, 7, -2], &[1, 1, 2, 1]).unwrap());
        let back = LinRecSequence::from_json(&seq.to_json()).unwrap();
        assert_eq!(back, seq);

        // rationals in p/q form
        let json = r#"{"coeffs": ["1/2"], "init": ["3/4"]}"#;
        let seq = LinRecSequence::from_json(json).unwrap();
        assert_eq!(seq.recurrence.coeffs()[0], crate::rational::rat_frac(1, 2));
    }

    #[test]
    fn too_few_initial_terms_is_an_error() {
        let err = LinRecSequence::from_ints(&[1, 1], &[1]).unwrap_err();
        assert_eq!(err, SequenceError::TooFewInitialTerms { order: 2, got: 1 });
    }
}
