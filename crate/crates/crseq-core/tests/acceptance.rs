//! End-to-end verification suite. One test per criterion; each prints a
//! single PASS line (run with `--nocapture` to see them). Every check is
//! exact integer/rational equality — no tolerances exist anywhere.

use crseq_core::{
    bound_oracle, classify, count_degree_m_classes, fit_quasi_polynomial, generic_rank_sequence,
    hankel_determinant, minimal_recurrence, power_bound_distinct, power_bound_refined,
    predicted_degree, quotient_invariants, rank_of_power, rank_of_product, rank_sequence, rat,
    search, smith_normal_form, termwise_power, Classification, Int, LinRecSequence, Rational,
    RationalPolynomial, Recurrence, RelationLattice, RootSpec, SearchConfig, DEFAULT_GUARD,
};
use crseq_core::bounds::multiplicity_compositions;
use crseq_core::rank::bareiss_determinant;
use crseq_core::sequence::fibonacci;
use crseq_core::tables;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int_coeffs(xs: &[i64]) -> Recurrence {
    Recurrence::from_int_coeffs(xs)
}

fn fib_power_terms(m: u32, n: usize) -> Vec<Rational> {
    termwise_power(fibonacci().stream(), m, n).terms(n).to_vec()
}

#[test]
fn criterion_01_fibonacci_power_recurrences() {
    let cases: [(u32, &[i64]); 3] =
        [(2, &[2, 2, -1]), (3, &[3, 6, -3, -1]), (4, &[5, 15, -15, -5, 1])];
    for (m, want) in cases {
        let cert = minimal_recurrence(&fib_power_terms(m, 24), DEFAULT_GUARD).unwrap();
        assert_eq!(cert.rank, m as usize + 1, "rank of F^{m}");
        assert_eq!(cert.transient, 0);
        assert_eq!(cert.recurrence, int_coeffs(want), "recurrence of F^{m}");
    }
    println!("criterion 1 PASS: Fibonacci square/cube/fourth-power minimal recurrences");
}

#[test]
fn criterion_02_fibonacci_rank_sequence_is_m_plus_one() {
    let profile = rank_sequence(&fibonacci(), 8).unwrap();
    let want: Vec<usize> = (2..=9).collect();
    assert_eq!(profile.ranks, want);
    assert!(profile.transients.iter().all(|&t| t == 0));
    println!("criterion 2 PASS: Fibonacci rank sequence 2..9 for M=1..8");
}

#[test]
fn criterion_03_order_ten_product() {
    let s = LinRecSequence::from_ints(&[0, 2, 0, -1], &[1, 1, 2, 1]).unwrap();
    let t = LinRecSequence::from_ints(&[7, -16, 12], &[1, 1, 1]).unwrap();
    let cert = rank_of_product(&s, &t).unwrap();
    assert_eq!(cert.rank, 10);
    assert_eq!(
        cert.recurrence,
        int_coeffs(&[0, 30, 0, -345, 0, 1900, 0, -5040, 0, 5184])
    );

    let lin = |root: i64| RationalPolynomial::from_int_coeffs(&[-root, 1]);
    let product = &(&lin(2).pow(3) * &lin(-2).pow(3)) * &(&lin(3).pow(2) * &lin(-3).pow(2));
    assert_eq!(cert.recurrence.char_poly(), product);
    assert_eq!(
        product,
        RationalPolynomial::from_int_coeffs(&[-5184, 0, 5040, 0, -1900, 0, 345, 0, -30, 0, 1])
    );
    println!("criterion 3 PASS: order-10 product recurrence and its characteristic polynomial");
}

#[test]
fn criterion_04_power_recurrence_table() {
    let table = tables::table2();
    let seq = table.sequence();
    let profile = rank_sequence(&seq, 5).unwrap();
    assert_eq!(profile.ranks, vec![4, 9, 16, 25, 36]);
    for row in &table.rows {
        let cert = rank_of_power(&seq, row.m).unwrap();
        let want = Recurrence::new(
            row.coeffs.iter().map(|s| crseq_core::parse_rational(s).unwrap()).collect(),
        );
        assert_eq!(cert.recurrence, want, "minimal recurrence of power M={}", row.m);
        assert_eq!(cert.transient, 0);
    }
    println!("criterion 4 PASS: rank sequence 4,9,16,25,36 and power recurrences for M=1..3");
}

#[test]
fn criterion_05_multiset_oracle_matches_refined_bound() {
    let mut checked = 0u64;
    for r in 1..=7u64 {
        for k in 1..=r {
            let refined: Vec<Int> =
                (1..=6).map(|m| power_bound_refined(r, k, m).unwrap()).collect();
            for comp in multiplicity_compositions(r, k) {
                let spec = RootSpec::new(comp.clone());
                for m in 1..=6u64 {
                    assert_eq!(
                        bound_oracle(&spec, m).unwrap(),
                        refined[m as usize - 1],
                        "oracle mismatch at r={r} k={k} M={m} comp={comp:?}"
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 5 PASS: multiset oracle equals refined bound on {checked} cases");
}

#[test]
fn criterion_06_rank_two_search_finds_exactly_five_sequences() {
    let mut cfg = SearchConfig::new(2, -3, 3);
    cfg.mmax = 8;
    cfg.trials = 3;
    cfg.seed = 0;
    let rows = search(&cfg).unwrap();
    let mut found: Vec<Vec<usize>> = rows.iter().map(|r| r.ranks.clone()).collect();
    found.sort();
    let mut want: Vec<Vec<usize>> = tables::table1_blocks()[0]
        .rows
        .iter()
        .map(|r| r.ranks.clone())
        .collect();
    want.sort();
    assert_eq!(found, want, "rank-2 search must find exactly the five known sequences");
    println!("criterion 6 PASS: rank-2 search over [-3,3]^2 yields exactly 5 rank sequences");
}

#[test]
fn criterion_07_rank_three_rows_reproduce() {
    let block = &tables::table1_blocks()[1];
    assert_eq!(block.order, 3);
    for row in &block.rows {
        let rec = int_coeffs(&row.coeffs);
        let got = generic_rank_sequence(&rec, 8, 2, 0x7a31e).unwrap();
        assert_eq!(got, row.ranks, "rank sequence of {:?}", row.coeffs);
        let fit = fit_quasi_polynomial(&got, 4, 4)
            .unwrap_or_else(|| panic!("no eventual polynomial found for {:?}", row.coeffs));
        assert_eq!(fit.period(), 1);
        assert_eq!(
            fit.component(1),
            &row.poly_coeffs()[..],
            "eventual polynomial of {:?}",
            row.coeffs
        );
    }
    println!("criterion 7 PASS: all 8 rank-3 rows reproduce ranks (M<=8) and eventual polynomials");
}

#[test]
fn criterion_08_particular_sequences() {
    let alt = LinRecSequence::from_ints(&[0, -1], &[1, 1]).unwrap();
    let profile = rank_sequence(&alt, 5).unwrap();
    assert_eq!(profile.ranks, vec![2, 1, 2, 1, 2]);
    let generic = generic_rank_sequence(&alt.recurrence, 5, 3, 0).unwrap();
    assert_eq!(generic, vec![2, 2, 2, 2, 2]);
    assert_eq!(classify(&profile.ranks, &generic).unwrap(), Classification::Particular);

    let seq = LinRecSequence::from_ints(&[2, -1, 2], &[2, 3, 3]).unwrap();
    let profile = rank_sequence(&seq, 5).unwrap();
    assert_eq!(profile.ranks, vec![3, 4, 6, 7, 9]);
    let generic = generic_rank_sequence(&seq.recurrence, 5, 3, 0).unwrap();
    assert_eq!(generic, vec![3, 5, 7, 9, 11]);
    assert_eq!(classify(&profile.ranks, &generic).unwrap(), Classification::Particular);
    println!("criterion 8 PASS: both cancellation examples classified particular");
}

#[test]
fn criterion_09_relation_lattice_and_quadratic_growth() {
    let lattice =
        RelationLattice::from_ints(5, &[&[4, -1, -1, -1, -1], &[2, 1, -2, 1, -2]]).unwrap();

    let snf = smith_normal_form(lattice.relations());
    assert_eq!(snf.diagonal(), vec![Int::from(1), Int::from(3)]);

    let q = quotient_invariants(&lattice).unwrap();
    assert_eq!(q.torsion, vec![Int::from(3)]);
    assert_eq!(q.free_rank, 3);
    assert_eq!(predicted_degree(&lattice), 2);

    // gating scale: recompute the rank sequence for M <= 6
    let seq = LinRecSequence::from_ints(&[2, 1, -2, -1, -1], &[1, 2, -1, 1, 1]).unwrap();
    let profile = rank_sequence(&seq, 6).unwrap();
    assert_eq!(profile.ranks, vec![5, 15, 35, 67, 111, 167]);

    let fit = fit_quasi_polynomial(&profile.ranks, 4, 4).expect("quadratic fit");
    assert_eq!(fit.period(), 1);
    assert_eq!(fit.component(1), &[rat(11), rat(-10), rat(6)]);
    assert_eq!(fit.degree() as i64, predicted_degree(&lattice));
    println!(
        "criterion 9 PASS: SNF diag (1,3), quotient Z3 (+) Z^3, fitted 6M^2-10M+11 of degree 2"
    );
}

fn eval_poly_at(coeffs: &[Rational], m: usize) -> Rational {
    let mm = rat(m as i64);
    let mut acc = rat(0);
    for c in coeffs.iter().rev() {
        acc = acc * &mm + c;
    }
    acc
}

/// The reference polynomial must at least reproduce the trailing listed
/// entries; anything else is a hard contradiction.
fn golden_poly_consistent_with_tail(row: &tables::GoldenRow) -> bool {
    let poly = row.poly_coeffs();
    let t = row.ranks.len();
    (t.saturating_sub(3)..t).all(|i| eval_poly_at(&poly, i + 1) == rat(row.ranks[i] as i64))
}

#[test]
fn criterion_10_appendix_spot_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc10);
    let mut fit_underdetermined: Vec<Vec<i64>> = Vec::new();
    let mut documented_discrepancies: Vec<Vec<i64>> = Vec::new();
    let mut checked_rows = 0usize;
    for (rows, picks) in [(tables::appendix_rank4(), 10usize), (tables::appendix_rank5(), 5)] {
        let mut order: Vec<usize> = (0..rows.len()).collect();
        for i in 0..picks {
            let j = i + rng.gen_range(0..order.len() - i);
            order.swap(i, j);
        }
        for &idx in &order[..picks] {
            let row = &rows[idx];
            // discrepant source rows (see the table notes) are checked
            // against their documented corrected expectation
            let (check_coeffs, expected): (&[i64], &[usize]) =
                match (&row.corrected_coeffs, &row.corrected_ranks) {
                    (Some(cc), _) => (cc, &row.ranks),
                    (None, Some(cr)) => (&row.coeffs, cr),
                    (None, None) => (&row.coeffs, &row.ranks),
                };
            if row.note.is_some() {
                documented_discrepancies.push(row.coeffs.clone());
            }
            let rec = int_coeffs(check_coeffs);
            let mmax = expected.len().min(6);
            let got = generic_rank_sequence(&rec, mmax, 1, 0xc10 + idx as u64).unwrap();
            assert_eq!(got, expected[..mmax], "rank-sequence prefix of {:?}", row.coeffs);
            if row.note.is_some() && row.corrected_coeffs.is_none() {
                checked_rows += 1;
                continue; // listed polynomial belongs to inconsistent data
            }
            // polynomial check from the full listed prefix; a finite prefix
            // does not always pin down the eventual polynomial (two
            // polynomials can agree on all but one listed entry), so a
            // differing-but-consistent fit is reported, not failed; an
            // inconsistent reference polynomial would be a hard failure
            assert!(
                golden_poly_consistent_with_tail(row),
                "reference polynomial contradicts listed ranks for {:?}",
                row.coeffs
            );
            let determined = row.ranks.len() >= 8
                && match fit_quasi_polynomial(&row.ranks, 4, 4) {
                    Some(fit) => {
                        fit.period() == 1 && fit.component(1) == &row.poly_coeffs()[..]
                    }
                    None => false,
                };
            if !determined {
                fit_underdetermined.push(row.coeffs.clone());
            }
            checked_rows += 1;
        }
    }
    println!(
        "criterion 10 PASS: {checked_rows} appendix rows reproduce their first 6 entries \
         (documented source discrepancies: {documented_discrepancies:?}); eventual polynomial \
         underdetermined by the listed prefix for {fit_underdetermined:?}"
    );
}

#[test]
fn criterion_11_property_suites() {
    // rank <= refined bound on every named fixture
    let fixtures: Vec<(LinRecSequence, usize)> = vec![
        (fibonacci(), 6),
        (crseq_core::lucas(), 5),
        (LinRecSequence::from_ints(&[5, -9, 7, -2], &[1, 1, 2, 1]).unwrap(), 4),
        (LinRecSequence::from_ints(&[0, -1], &[1, 1]).unwrap(), 6),
        (LinRecSequence::from_ints(&[2, -1, 2], &[2, 3, 3]).unwrap(), 5),
        (LinRecSequence::from_ints(&[0, 2, 0, -1], &[1, 1, 2, 1]).unwrap(), 3),
        (LinRecSequence::from_ints(&[7, -16, 12], &[1, 1, 1]).unwrap(), 3),
        (LinRecSequence::from_ints(&[2, 1, -2, -1, -1], &[1, 2, -1, 1, 1]).unwrap(), 4),
        (LinRecSequence::from_ints(&[82, 82, -1], &[1, 2, 3]).unwrap(), 3),
    ];
    for (seq, mmax) in &fixtures {
        let profile = rank_sequence(seq, *mmax).unwrap();
        for (i, rank) in profile.ranks.iter().enumerate() {
            assert!(
                Int::from(*rank) <= profile.bounds[i],
                "rank exceeds refined bound for {:?} at M={}",
                seq.recurrence,
                i + 1
            );
        }
    }

    // refined <= distinct; equality iff k >= r-1 or M = 1
    for r in 1..=7u64 {
        for k in 1..=r {
            for m in 1..=6u64 {
                let refined = power_bound_refined(r, k, m).unwrap();
                let distinct = power_bound_distinct(r, m);
                assert!(refined <= distinct, "dominance fails at r={r} k={k} M={m}");
                if k + 1 >= r || m == 1 {
                    assert_eq!(refined, distinct, "expected equality at r={r} k={k} M={m}");
                } else {
                    assert!(refined < distinct, "expected strict bound at r={r} k={k} M={m}");
                }
            }
        }
    }

    // SNF contract on 500 random integer matrices
    let mut rng = ChaCha8Rng::seed_from_u64(0x50f);
    for round in 0..500 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let a: Vec<Vec<Int>> = (0..rows)
            .map(|_| (0..cols).map(|_| Int::from(rng.gen_range(-20..=20i64))).collect())
            .collect();
        let snf = smith_normal_form(&a);
        assert_eq!(
            bareiss_determinant(snf.u.clone()).abs(),
            Int::one(),
            "U not unimodular in round {round}"
        );
        assert_eq!(
            bareiss_determinant(snf.v.clone()).abs(),
            Int::one(),
            "V not unimodular in round {round}"
        );
        let diag = snf.diagonal();
        for i in 0..diag.len().saturating_sub(1) {
            if !diag[i].is_zero() && !diag[i + 1].is_zero() {
                assert!((&diag[i + 1] % &diag[i]).is_zero(), "chain broken in round {round}");
            }
        }
        // U*A*V == D
        let mul = |x: &Vec<Vec<Int>>, y: &Vec<Vec<Int>>| -> Vec<Vec<Int>> {
            (0..x.len())
                .map(|i| {
                    (0..y[0].len())
                        .map(|j| (0..y.len()).map(|t| &x[i][t] * &y[t][j]).sum())
                        .collect()
                })
                .collect()
        };
        assert_eq!(mul(&mul(&snf.u, &a), &snf.v), snf.d, "U*A*V != D in round {round}");
    }

    // shift and scale invariance of the rank on 200 random fixtures
    let mut rng = ChaCha8Rng::seed_from_u64(0x51f7);
    for _ in 0..200 {
        let order = rng.gen_range(1..=4usize);
        let mut coeffs: Vec<i64> = (0..order).map(|_| rng.gen_range(-5..=5)).collect();
        while coeffs[order - 1] == 0 {
            coeffs[order - 1] = rng.gen_range(-5..=5);
        }
        let init: Vec<i64> = (0..order).map(|_| rng.gen_range(-10..=10)).collect();
        let seq = LinRecSequence::from_ints(&coeffs, &init).unwrap();
        let terms = seq.generate_terms(2 * order + 14);
        let base = minimal_recurrence(&terms, 4).unwrap();
        for shift in 1..=2usize {
            let shifted = minimal_recurrence(&terms[shift..], 4).unwrap();
            assert_eq!(shifted.rank, base.rank, "shift invariance for {coeffs:?}/{init:?}");
        }
        let lam = crseq_core::rat_frac(-5, 3);
        let scaled: Vec<Rational> = terms.iter().map(|t| t * &lam).collect();
        let scaled_cert = minimal_recurrence(&scaled, 4).unwrap();
        assert_eq!(scaled_cert.rank, base.rank);
        assert_eq!(scaled_cert.recurrence, base.recurrence);
    }
    println!(
        "criterion 11 PASS: bound dominance, fixture soundness, 500 SNF contracts, \
         200 shift/scale invariances"
    );
}

/// Conjecture probe (reported, never asserted): does the fitted eventual
/// polynomial degree match the free rank minus one?
#[test]
fn probe_predicted_degree_against_fits() {
    // the two sequences with known relation lattices
    let cases: Vec<(&str, RelationLattice, Vec<usize>)> = vec![
        (
            "order-5 torsion example",
            RelationLattice::from_ints(5, &[&[4, -1, -1, -1, -1], &[2, 1, -2, 1, -2]]).unwrap(),
            generic_rank_sequence(&int_coeffs(&[2, 1, -2, -1, -1]), 6, 1, 7).unwrap(),
        ),
        (
            "plus-minus-one pair",
            crseq_core::relations_from_rational_roots(&[rat(1), rat(-1)]).unwrap(),
            generic_rank_sequence(&int_coeffs(&[0, 1]), 6, 1, 7).unwrap(),
        ),
    ];
    for (name, lattice, ranks) in cases {
        let predicted = predicted_degree(&lattice);
        match fit_quasi_polynomial(&ranks, 4, 4) {
            Some(fit) => println!(
                "probe: {name}: fitted degree {} vs predicted {} ({})",
                fit.degree(),
                predicted,
                if fit.degree() as i64 == predicted { "agrees" } else { "MISMATCH - finding" }
            ),
            None => println!("probe: {name}: no fit from {} entries", ranks.len()),
        }
    }
}

/// Class counts from rational-root relation lattices agree with observed
/// generic ranks in the squarefree case.
#[test]
fn probe_class_counts_against_squarefree_rational_root_fixtures() {
    // char poly (x-2)(x-3)(x-6): roots with the single relation 2*3 = 6
    let roots = [rat(2), rat(3), rat(6)];
    let lattice = crseq_core::relations_from_rational_roots(&roots).unwrap();
    let rec = Recurrence::from_char_poly(
        &(&(&RationalPolynomial::linear(rat(2)) * &RationalPolynomial::linear(rat(3)))
            * &RationalPolynomial::linear(rat(6))),
    )
    .unwrap();
    let generic = generic_rank_sequence(&rec, 5, 2, 3).unwrap();
    for m in 1..=5usize {
        let classes = count_degree_m_classes(&lattice, m as u64).unwrap();
        assert!(
            generic[m - 1] as u64 <= classes,
            "rank exceeds class count at M={m}"
        );
        assert_eq!(generic[m - 1] as u64, classes, "generic rank should attain class count");
    }

    // independent primes: class count is the full multiset count
    let roots = [rat(2), rat(3), rat(5)];
    let lattice = crseq_core::relations_from_rational_roots(&roots).unwrap();
    let rec = Recurrence::from_char_poly(
        &(&(&RationalPolynomial::linear(rat(2)) * &RationalPolynomial::linear(rat(3)))
            * &RationalPolynomial::linear(rat(5))),
    )
    .unwrap();
    let generic = generic_rank_sequence(&rec, 5, 2, 3).unwrap();
    for m in 1..=5usize {
        assert_eq!(
            generic[m - 1] as u64,
            count_degree_m_classes(&lattice, m as u64).unwrap()
        );
    }
    println!("probe: class counts match generic ranks on squarefree rational-root fixtures");
}

/// Sanity: the fixture used throughout for the Hankel determinant examples.
#[test]
fn hankel_example_from_squared_fibonacci() {
    let sq = fib_power_terms(2, 4);
    assert_eq!(hankel_determinant(&sq, 2).unwrap(), rat(-1));
}
