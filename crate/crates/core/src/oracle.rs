//! Brute-force ground truth on DBL_2 at small scale.
//!
//! Instances are enumerated as count vectors (multiplicity per history), which
//! is exact under anonymity. Leader vectors are computed straight from the
//! definition of a connection, without the matrix or kernel code.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{build_matrix, leader_vector_from_history, CountVector};
use crate::error::{Error, Result};
use crate::witness::{leader_histories, realize_multigraph};

/// Default cap on `vectors * histories` touched by one enumeration.
pub const DEFAULT_MAX_CELLS: u128 = 1_000_000_000;

/// All compositions of `n` into `parts` nonnegative parts, from `[n, 0, ..]`
/// to `[.., 0, n]`.
pub struct Compositions {
    current: Option<Vec<u64>>,
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let mut c = out.clone();
        let k = c.len();
        let tail = c[k - 1];
        c[k - 1] = 0;
        if let Some(i) = (0..k - 1).rev().find(|&i| c[i] > 0) {
            c[i] -= 1;
            c[i + 1] = tail + 1;
            self.current = Some(c);
        }
        Some(out)
    }
}

/// Every count vector with population `n` over histories of length `depth`.
pub fn enumerate_count_vectors(n: u64, depth: usize) -> impl Iterator<Item = CountVector> {
    assert!(depth >= 1, "depth must be at least 1");
    let parts = 3usize.pow(depth as u32);
    let mut first = vec![0u64; parts];
    first[0] = n;
    Compositions { current: Some(first) }.map(move |counts| CountVector { round: depth - 1, counts })
}

/// `C(n + k - 1, n)` for `k` parts.
pub fn count_vector_total(n: u64, depth: usize) -> u128 {
    let parts = 3u128.pow(depth as u32);
    let mut acc: u128 = 1;
    for i in 0..n as u128 {
        acc = acc * (parts + i) / (i + 1);
    }
    acc
}

/// Connection multiplicities for `counts` over depth-`depth` histories: entry
/// for `(label, prefix)` counts nodes whose history starts with `prefix` and
/// whose next label set contains `label`. Rows go by prefix length, then
/// label, then prefix.
pub fn leader_counts_direct(counts: &[u64], depth: usize) -> Vec<u64> {
    let mut offsets = Vec::with_capacity(depth);
    let mut total = 0;
    for d in 0..depth {
        offsets.push(total);
        total += 2 * 3usize.pow(d as u32);
    }
    let mut out = vec![0u64; total];
    for (index, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let digits: Vec<usize> = (0..depth)
            .rev()
            .map(|p| (index / 3usize.pow(p as u32)) % 3)
            .collect();
        let mut prefix = 0;
        for (d, &step) in digits.iter().enumerate() {
            let width = 3usize.pow(d as u32);
            // step 0 is {1}, 1 is {2}, 2 is {1,2}
            if step != 1 {
                out[offsets[d] + prefix] += c;
            }
            if step != 0 {
                out[offsets[d] + width + prefix] += c;
            }
            prefix = prefix * 3 + step;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cell {
    /// Some leader vector of population `n` is shared with `n - 1` or `n + 1`.
    Ambiguous,
    /// Checked by enumeration: every leader vector of population `n` is unique to it.
    Distinguishable,
    /// Not enumerated; follows from an earlier distinguishable round because
    /// `m_{r+1}` determines `m_r`.
    Implied,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    pub n: u64,
    pub minimal_round: Option<usize>,
    /// `floor(log3(2n + 1)) - 1`.
    pub predicted: i64,
    pub cells: Vec<Cell>,
}

impl OracleRow {
    /// The lower bound `r < floor(log3(2n+1)) - 1 => cannot count` is respected.
    pub fn agrees(&self, r_max: usize) -> Option<bool> {
        match self.minimal_round {
            Some(r) => Some(r as i64 >= self.predicted),
            None if (r_max as i64 + 1) >= self.predicted => Some(true),
            None => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleTable {
    pub n_max: u64,
    pub r_max: usize,
    pub rows: Vec<OracleRow>,
}

impl OracleTable {
    pub fn row(&self, n: u64) -> Option<&OracleRow> {
        self.rows.iter().find(|row| row.n == n)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,minimal_round,predicted_floor_log3(2n+1)-1,agrees\n");
        for row in &self.rows {
            let minimal = row.minimal_round.map_or_else(String::new, |r| r.to_string());
            let agrees = row.agrees(self.r_max).map_or_else(|| "unknown".to_string(), |a| a.to_string());
            out.push_str(&format!("{},{},{},{}\n", row.n, minimal, row.predicted, agrees));
        }
        out
    }
}

/// `floor(log3(x))` for `x >= 1`.
pub fn floor_log3(mut x: u64) -> u32 {
    let mut e = 0;
    while x >= 3 {
        x /= 3;
        e += 1;
    }
    e
}

fn pack(v: &[u64]) -> Result<Box<[u8]>> {
    v.iter()
        .map(|&x| u8::try_from(x).map_err(|_| Error::Format(format!("count {x} too large to pack"))))
        .collect()
}

/// Whether some round-`r` leader vector arises from both population `p` and `p + 1`.
pub fn populations_share_vector(p: u64, r: usize, max_cells: u128) -> Result<bool> {
    let depth = r + 1;
    let width = 3u128.pow(depth as u32);
    let cells = (count_vector_total(p, depth) + count_vector_total(p + 1, depth)) * width;
    if cells > max_cells {
        return Err(Error::ResourceGuard { cells, limit: max_cells });
    }
    let mut seen = HashSet::new();
    for s in enumerate_count_vectors(p, depth) {
        seen.insert(pack(&leader_counts_direct(&s.counts, depth))?);
    }
    for s in enumerate_count_vectors(p + 1, depth) {
        if seen.contains(&pack(&leader_counts_direct(&s.counts, depth))?) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// For each `n <= n_max`, the first round `r <= r_max` at which no leader
/// vector of population `n` is shared with another population. Only adjacent
/// populations are compared: solution sets along a line are contiguous, and
/// populations never reach zero.
pub fn min_distinguishing_round(n_max: u64, r_max: usize, max_cells: u128) -> Result<OracleTable> {
    if n_max == 0 || n_max > 250 {
        return Err(Error::Format(format!("n_max must lie in 1..=250, got {n_max}")));
    }
    let mut rows: Vec<OracleRow> = (1..=n_max)
        .map(|n| OracleRow {
            n,
            minimal_round: None,
            predicted: floor_log3(2 * n + 1) as i64 - 1,
            cells: Vec::new(),
        })
        .collect();
    for r in 0..=r_max {
        let open: Vec<u64> = rows.iter().filter(|row| row.minimal_round.is_none()).map(|row| row.n).collect();
        if open.is_empty() {
            for row in rows.iter_mut() {
                row.cells.push(Cell::Implied);
            }
            continue;
        }
        // shared[p] for the pair (p, p + 1); p = 0 never shares.
        let mut shared = vec![false; n_max as usize + 1];
        for p in 1..=n_max {
            if open.contains(&p) || open.contains(&(p + 1)) {
                shared[p as usize] = populations_share_vector(p, r, max_cells)?;
            }
        }
        for row in rows.iter_mut() {
            if row.minimal_round.is_some() {
                row.cells.push(Cell::Implied);
                continue;
            }
            let n = row.n as usize;
            if shared[n - 1] || shared[n] {
                row.cells.push(Cell::Ambiguous);
            } else {
                row.cells.push(Cell::Distinguishable);
                row.minimal_round = Some(r);
            }
        }
    }
    Ok(OracleTable { n_max, r_max, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub counts: Vec<u64>,
    pub simulated: Vec<u64>,
    pub product: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub round: usize,
    pub trials: usize,
    pub seed: u64,
    pub mismatches: Vec<Mismatch>,
}

/// Random count vector with population in `1..=max_population`.
pub fn random_count_vector(rng: &mut impl Rng, r: usize, max_population: u64) -> CountVector {
    let width = 3usize.pow(r as u32 + 1);
    let n = rng.gen_range(1..=max_population);
    let mut counts = vec![0u64; width];
    for _ in 0..n {
        counts[rng.gen_range(0..width)] += 1;
    }
    CountVector { round: r, counts }
}

/// Leader vector from simulating the realized multigraph against `M_r s`.
pub fn crosscheck_vector(s: &CountVector) -> Result<Option<Mismatch>> {
    let r = s.round;
    let product = build_matrix(r).mul_count(s)?.entries;
    let m = realize_multigraph(s)?;
    let histories = leader_histories(&m, r + 1)?;
    let simulated = leader_vector_from_history(&histories[r])?.entries;
    Ok((simulated != product).then(|| Mismatch { counts: s.counts.clone(), simulated, product }))
}

pub fn crosscheck_matrix(r: usize, trials: usize, seed: u64) -> Result<CrosscheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for _ in 0..trials {
        let s = random_count_vector(&mut rng, r, 12);
        if let Some(m) = crosscheck_vector(&s)? {
            mismatches.push(m);
        }
    }
    Ok(CrosscheckReport { round: r, trials, seed, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_count_vectors(1, 1).count(), 3);
        assert_eq!(enumerate_count_vectors(2, 1).count(), 6);
        assert_eq!(enumerate_count_vectors(4, 2).count(), 495);
        assert_eq!(count_vector_total(4, 2), 495);
        assert_eq!(count_vector_total(7, 3), 4_272_048);
    }

    #[test]
    fn enumeration_is_distinct_and_exact() {
        let all: Vec<_> = enumerate_count_vectors(3, 2).collect();
        assert!(all.iter().all(|s| s.population() == 3));
        let unique: HashSet<_> = all.iter().map(|s| s.counts.clone()).collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn direct_counts_match_two_double_label_nodes() {
        assert_eq!(leader_counts_direct(&[0, 0, 2], 1), vec![2, 2]);
        assert_eq!(leader_counts_direct(&[0, 1, 0], 1), vec![0, 1]);
    }

    #[test]
    fn floor_log3_values() {
        assert_eq!(floor_log3(1), 0);
        assert_eq!(floor_log3(3), 1);
        assert_eq!(floor_log3(8), 1);
        assert_eq!(floor_log3(9), 2);
        assert_eq!(floor_log3(27), 3);
    }

    #[test]
    fn guard_trips() {
        assert!(matches!(
            populations_share_vector(6, 3, 1000),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn crosscheck_single_vectors() {
        let s = CountVector::new(0, vec![0, 0, 2]).unwrap();
        assert_eq!(crosscheck_vector(&s).unwrap(), None);
        let unit = CountVector::new(0, vec![0, 1, 0]).unwrap();
        assert_eq!(build_matrix(0).mul_count(&unit).unwrap().entries, vec![0, 1]);
        assert_eq!(crosscheck_vector(&unit).unwrap(), None);
    }

    #[test]
    fn csv_header_and_rows() {
        let table = min_distinguishing_round(3, 1, DEFAULT_MAX_CELLS).unwrap();
        let csv = table.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,minimal_round,predicted_floor_log3(2n+1)-1,agrees");
        assert_eq!(lines[1], "1,1,0,true");
        assert_eq!(lines[3], "3,1,0,true");
    }
}
