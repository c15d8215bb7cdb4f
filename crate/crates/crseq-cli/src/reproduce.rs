//! Recomputes the embedded reference tables and diffs each row against the
//! stored data.

use crate::output::Table;
use crseq_core::tables::{GoldenRow, PowerRecurrenceTable};
use crseq_core::{
    fit_quasi_polynomial, generic_rank_sequence, rank_of_power, parse_rational, Recurrence,
};

pub struct ReproduceReport {
    pub table: Table,
    pub mismatches: usize,
}

pub struct RowConfig {
    pub mmax: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_period: usize,
    pub window: usize,
}

fn coeff_string(coeffs: &[i64]) -> String {
    coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn ranks_string(ranks: &[usize]) -> String {
    ranks.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
}

/// Recomputes each row's rank-sequence prefix (and re-fits its eventual
/// polynomial from the stored full prefix where that determines one).
///
/// Rows whose source data is internally inconsistent carry corrections (see
/// the table notes); those are verified against the corrected expectation
/// and reported as documented discrepancies rather than mismatches.
pub fn reproduce_rows(rows: &[GoldenRow], cfg: &RowConfig) -> Result<ReproduceReport, String> {
    let mut table =
        Table::new(&["coefficients", "rank sequence", "eventual polynomial", "status"]);
    let mut mismatches = 0usize;
    for (idx, row) in rows.iter().enumerate() {
        // for discrepant source rows, check the coherent combination:
        // either the corrected tuple against the listed ranks, or the
        // printed tuple against its certified corrected ranks
        let (check_coeffs, expected): (&[i64], &[usize]) =
            match (&row.corrected_coeffs, &row.corrected_ranks) {
                (Some(cc), _) => (cc, &row.ranks),
                (None, Some(cr)) => (&row.coeffs, cr),
                (None, None) => (&row.coeffs, &row.ranks),
            };
        let discrepant = row.note.is_some();
        let rec = Recurrence::from_int_coeffs(check_coeffs);
        let mmax = cfg.mmax.min(expected.len());
        let computed = generic_rank_sequence(&rec, mmax, cfg.trials, cfg.seed ^ idx as u64)
            .map_err(|e| format!("row {:?}: {e}", row.coeffs))?;
        let ranks_ok = computed == expected[..mmax];

        // fit from the stored full prefix; a finite prefix does not always
        // determine the eventual polynomial, so absence or a tail-consistent
        // alternative fit is reported as indeterminate rather than failed
        let (poly_text, poly_status) = if discrepant && row.corrected_coeffs.is_none() {
            ("-".to_string(), "poly not checked (source row discrepant)")
        } else {
            match fit_quasi_polynomial(&row.ranks, cfg.max_period, cfg.window) {
                Some(fit) if fit.period() == 1 => {
                    let matches = fit.component(1) == &row.poly_coeffs()[..];
                    (
                        fit.render(),
                        if matches { "poly ok" } else { "poly differs (prefix ambiguous)" },
                    )
                }
                Some(fit) => (fit.render(), "poly differs (prefix ambiguous)"),
                None => ("-".to_string(), "poly undetermined"),
            }
        };

        let status = if ranks_ok && !discrepant {
            format!("OK (M<={mmax}); {poly_status}")
        } else if ranks_ok {
            format!(
                "KNOWN SOURCE DISCREPANCY, corrected expectation confirmed (M<={mmax}): {}",
                row.note.as_deref().unwrap_or("")
            )
        } else {
            mismatches += 1;
            format!(
                "MISMATCH (M<={mmax}): computed {}, expected {}",
                ranks_string(&computed),
                ranks_string(&expected[..mmax])
            )
        };
        table.push(vec![coeff_string(&row.coeffs), ranks_string(&row.ranks), poly_text, status]);
    }
    Ok(ReproduceReport { table, mismatches })
}

/// Recomputes the minimal recurrences of the powers of the stored order-4
/// sequence and diffs the coefficient tuples.
pub fn reproduce_power_recurrences(
    table_data: &PowerRecurrenceTable,
) -> Result<ReproduceReport, String> {
    let seq = table_data.sequence();
    let mut table = Table::new(&["M", "coefficients", "status"]);
    let mut mismatches = 0usize;
    for row in &table_data.rows {
        let cert = rank_of_power(&seq, row.m).map_err(|e| format!("M={}: {e}", row.m))?;
        let want = Recurrence::new(
            row.coeffs
                .iter()
                .map(|s| parse_rational(s).expect("embedded table data parses"))
                .collect(),
        );
        let ok = cert.recurrence == want;
        if !ok {
            mismatches += 1;
        }
        table.push(vec![
            row.m.to_string(),
            row.coeffs.join(","),
            if ok { "OK".into() } else { format!("MISMATCH: computed {}", cert.recurrence) },
        ]);
    }
    Ok(ReproduceReport { table, mismatches })
}
