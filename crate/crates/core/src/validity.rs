//! External cluster validity: contingency tables, pair counts, RI, ARI,
//! variation of information and max-normalized mutual information.
//!
//! All logarithms are natural and `0 log 0 = 0`. Partitions are compared as
//! label vectors; `u` is the candidate and `q` the reference.

use crate::error::{Error, Result};
use crate::partition::CrispPartition;
use crate::series::remap_labels;

/// `r x c` co-occurrence counts `n_ij = |{k : u_k = i, q_k = j}|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    /// Table from zero-based labels with known cluster counts `r` and `c`.
    pub fn new(u: &[usize], r: usize, q: &[usize], c: usize) -> Result<Self> {
        if u.len() != q.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: q.len(),
            });
        }
        let mut counts = vec![vec![0u64; c]; r];
        for (&i, &j) in u.iter().zip(q) {
            if i >= r || j >= c {
                return Err(Error::InvalidParameter(format!(
                    "label pair ({i}, {j}) outside a {r}x{c} table"
                )));
            }
            counts[i][j] += 1;
        }
        let row_sums = counts.iter().map(|row| row.iter().sum()).collect();
        let col_sums = (0..c)
            .map(|j| counts.iter().map(|row| row[j]).sum())
            .collect();
        Ok(Self {
            counts,
            row_sums,
            col_sums,
            total: u.len() as u64,
        })
    }

    /// Table from arbitrary label values, remapped by first appearance.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(u: &[L], q: &[L]) -> Result<Self> {
        let u = remap_labels(u);
        let q = remap_labels(q);
        let r = u.iter().max().map_or(0, |m| m + 1);
        let c = q.iter().max().map_or(0, |m| m + 1);
        Self::new(&u, r, &q, c)
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    fn cells(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.iter().flatten().copied()
    }
}

/// Contingency table of candidate `u` against reference `q`.
pub fn contingency(u: &CrispPartition, q: &CrispPartition) -> Result<ContingencyTable> {
    ContingencyTable::new(u.labels(), u.clusters(), q.labels(), q.clusters())
}

/// Paired-comparison counts: `a` together in both, `b` together only in the
/// reference, `c` together only in the candidate, `d` apart in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }
}

pub fn pair_counts(table: &ContingencyTable) -> PairCounts {
    let n = table.total;
    let sum_sq: u64 = table.cells().map(|x| x * x).sum();
    let row_sq: u64 = table.row_sums.iter().map(|x| x * x).sum();
    let col_sq: u64 = table.col_sums.iter().map(|x| x * x).sum();
    let a = table.cells().map(|x| x * x.saturating_sub(1)).sum::<u64>() / 2;
    PairCounts {
        a,
        b: (col_sq - sum_sq) / 2,
        c: (row_sq - sum_sq) / 2,
        d: (n * n + sum_sq - row_sq - col_sq) / 2,
    }
}

/// Fraction of object pairs on which the two partitions agree.
pub fn rand_index(p: &PairCounts) -> f64 {
    let total = p.total();
    if total == 0 {
        return 1.0;
    }
    (p.a + p.d) as f64 / total as f64
}

/// Hubert-Arabie adjusted Rand index. When the chance-correction
/// denominator vanishes the result is 1 for identical partitions, else 0.
pub fn adjusted_rand(p: &PairCounts) -> f64 {
    let (a, b, c) = (p.a as f64, p.b as f64, p.c as f64);
    let total = p.total() as f64;
    if total == 0.0 {
        return 1.0;
    }
    let expected = (a + c) * (a + b) / total;
    let denom = ((a + c) + (a + b)) / 2.0 - expected;
    if denom == 0.0 {
        return if p.b == 0 && p.c == 0 { 1.0 } else { 0.0 };
    }
    (a - expected) / denom
}

fn entropy(counts: &[u64], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&x| x > 0)
        .map(|&x| {
            let p = x as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Shannon entropy of the candidate (row) partition.
pub fn entropy_rows(table: &ContingencyTable) -> f64 {
    entropy(&table.row_sums, table.total as f64)
}

/// Shannon entropy of the reference (column) partition.
pub fn entropy_cols(table: &ContingencyTable) -> f64 {
    entropy(&table.col_sums, table.total as f64)
}

pub fn mutual_information(table: &ContingencyTable) -> f64 {
    let n = table.total as f64;
    let mut mi = 0.0;
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &nij) in row.iter().enumerate() {
            if nij == 0 {
                continue;
            }
            let pij = nij as f64 / n;
            let pi = table.row_sums[i] as f64 / n;
            let pj = table.col_sums[j] as f64 / n;
            mi += pij * (pij / (pi * pj)).ln();
        }
    }
    mi
}

/// Joint entropy minus mutual information; 0 only for equal partitions.
/// Summed cell by cell as `-p_ij (ln(n_ij / a_i) + ln(n_ij / b_j))`, which
/// is exactly zero when the partitions coincide.
pub fn variation_of_information(table: &ContingencyTable) -> f64 {
    let n = table.total as f64;
    let mut vi = 0.0;
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &nij) in row.iter().enumerate() {
            if nij == 0 {
                continue;
            }
            let x = nij as f64;
            let given_row = (x / table.row_sums[i] as f64).ln();
            let given_col = (x / table.col_sums[j] as f64).ln();
            vi -= x / n * (given_row + given_col);
        }
    }
    vi.max(0.0)
}

/// Mutual information over the larger of the two entropies. Coinciding
/// partitions, including two single-cluster ones, score exactly 1.
pub fn nmi_max(table: &ContingencyTable) -> f64 {
    if variation_of_information(table) == 0.0 {
        return 1.0;
    }
    let h = entropy_rows(table).max(entropy_cols(table));
    (mutual_information(table) / h).clamp(0.0, 1.0)
}

/// The four indices for one candidate/reference pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CviReport {
    pub ri: f64,
    pub ari: f64,
    pub nmi: f64,
    pub vi: f64,
}

impl CviReport {
    pub fn from_table(table: &ContingencyTable) -> Self {
        let pairs = pair_counts(table);
        Self {
            ri: rand_index(&pairs),
            ari: adjusted_rand(&pairs),
            nmi: nmi_max(table),
            vi: variation_of_information(table),
        }
    }

    /// Scores candidate labels `u` against reference labels `q`.
    pub fn compare<L: Copy + Eq + std::hash::Hash>(u: &[L], q: &[L]) -> Result<Self> {
        Ok(Self::from_table(&ContingencyTable::from_labels(u, q)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn table(u: &[usize], q: &[usize]) -> ContingencyTable {
        ContingencyTable::from_labels(u, q).unwrap()
    }

    #[test]
    fn worked_example_against_itself() {
        let u = CrispPartition::new(vec![0, 1, 0, 2, 0], 3).unwrap();
        let t = contingency(&u, &u).unwrap();
        assert_eq!(t.counts(), &[vec![3, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn single_row_table() {
        let t = table(&[0, 0, 0, 0], &[0, 0, 1, 1]);
        assert_eq!(t.counts(), &[vec![2, 2]]);
    }

    #[test]
    fn pair_counts_small_cases() {
        let p = pair_counts(&table(&[0, 0, 1, 1], &[0, 0, 1, 1]));
        assert_eq!(
            p,
            PairCounts {
                a: 2,
                b: 0,
                c: 0,
                d: 4
            }
        );
        let p = pair_counts(&table(&[0, 0, 1, 1], &[0, 0, 0, 1]));
        assert_eq!((p.a, p.d, p.b + p.c), (1, 2, 3));
        assert_abs_diff_eq!(rand_index(&p), 0.5, epsilon = 1e-15);
        let p = pair_counts(&table(&[0; 5], &[0; 5]));
        assert_eq!(
            p,
            PairCounts {
                a: 10,
                b: 0,
                c: 0,
                d: 0
            }
        );
    }

    #[test]
    fn identical_partitions_score_perfectly() {
        let t = table(&[0, 1, 0, 2, 0], &[0, 1, 0, 2, 0]);
        let r = CviReport::from_table(&t);
        assert_eq!((r.ri, r.ari), (1.0, 1.0));
        assert_abs_diff_eq!(r.nmi, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.vi, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_single_clusters() {
        let r = CviReport::compare(&[0; 4], &[0; 4]).unwrap();
        assert_eq!((r.ari, r.nmi, r.vi), (1.0, 1.0, 0.0));
    }

    #[test]
    fn single_cluster_versus_halves() {
        let t = table(&[0, 0, 0, 0], &[0, 0, 1, 1]);
        assert_abs_diff_eq!(variation_of_information(&t), 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(nmi_max(&t), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ari_crossed_halves() {
        // a = 0, a + c = a + b = 2, 6 pairs: (0 - 2/3) / (2 - 2/3)
        let p = pair_counts(&table(&[0, 0, 1, 1], &[0, 1, 0, 1]));
        assert_abs_diff_eq!(adjusted_rand(&p), -0.5, epsilon = 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert!(ContingencyTable::from_labels(&[0, 1], &[0]).is_err());
    }
}
