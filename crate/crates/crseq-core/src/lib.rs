//! Exact-arithmetic toolkit for constant-recursive (C-finite) sequences.
//!
//! The crate computes certified ranks (minimal recurrences) of termwise
//! powers and products, evaluates the closed-form rank bounds driven by root
//! multiplicities, enumerates rank sequences over coefficient spaces, fits
//! eventual (quasi-)polynomials to them, and analyzes multiplicative
//! relations among characteristic roots through integer-lattice normal
//! forms. All arithmetic is exact; nothing is floating point.

pub mod bounds;
pub mod explorer;
pub mod lattice;
pub mod poly;
pub mod rank;
pub mod rational;
pub mod sequence;
pub mod tables;

pub use bounds::{
    bound_oracle, power_bound_distinct, power_bound_refined, product_multiplicity,
    product_multiplicity_general, product_rank_bound, BoundsError, RootSpec,
};
pub use explorer::{
    classify, fit_quasi_polynomial, generic_rank_sequence, rank_sequence, search, Classification,
    ExplorerError, QuasiPolynomial, RankProfile, SearchConfig, SearchRow,
};
pub use lattice::{
    count_degree_m_classes, predicted_degree, quotient_invariants, relations_from_rational_roots,
    smith_normal_form, LatticeError, QuotientStructure, RelationLattice, SnfDecomposition,
};
pub use poly::{PolyError, RationalPolynomial};
pub use rank::{
    hankel_determinant, minimal_recurrence, rank_of_power, rank_of_power_with_guard,
    rank_of_product, rank_of_product_with_guard, RankCertificate, RankError, DEFAULT_GUARD,
};
pub use rational::{
    binomial, format_rational, parse_rational, rat, rat_frac, Int, ParseRationalError, Rational,
};
pub use sequence::{
    fibonacci, lucas, termwise_power, termwise_product, LinRecSequence, Recurrence,
    SequenceError, SequenceLiteral, TermStream,
};
