//! The leader's equation systems on M(DBL_2).
//!
//! After round `r` the leader knows, for every round `r' <= r`, label `j` and
//! history prefix `p` of depth `r'`, how many nodes with history `p` reached it
//! over a `j`-labelled edge in round `r'`. The unknowns are the numbers of
//! nodes per depth-`r + 1` history. Histories are ordered lexicographically
//! with `{1} < {2} < {1,2}` position by position, and the matrix is stored as
//! two runs of ones per row.

mod elimination;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LabelSet;
use crate::sim::LeaderHistory;

pub use elimination::{primitive, Rref};

/// One entry of a DBL_2 history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    One,
    Two,
    Both,
}

impl Step {
    pub const ALL: [Step; 3] = [Step::One, Step::Two, Step::Both];

    pub fn code(self) -> usize {
        self as usize
    }

    pub fn from_code(code: usize) -> Step {
        Step::ALL[code]
    }

    pub fn labels(self) -> LabelSet {
        match self {
            Step::One => [1].into_iter().collect(),
            Step::Two => [2].into_iter().collect(),
            Step::Both => [1, 2].into_iter().collect(),
        }
    }

    pub fn from_labels(set: LabelSet) -> Option<Step> {
        Step::ALL.into_iter().find(|s| s.labels() == set)
    }

    pub fn has_label(self, label: u32) -> bool {
        matches!((self, label), (Step::One, 1) | (Step::Two, 2) | (Step::Both, 1 | 2))
    }
}

/// A DBL_2 node history, addressed by its lexicographic index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct History(pub Vec<Step>);

impl History {
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, s| acc * 3 + s.code())
    }

    pub fn from_index(depth: usize, mut index: usize) -> History {
        let mut steps = vec![Step::One; depth];
        for slot in steps.iter_mut().rev() {
            *slot = Step::from_code(index % 3);
            index /= 3;
        }
        History(steps)
    }

    pub fn label_sets(&self) -> Vec<LabelSet> {
        self.0.iter().map(|s| s.labels()).collect()
    }

    pub fn from_label_sets(sets: &[LabelSet]) -> Option<History> {
        sets.iter().map(|&s| Step::from_labels(s)).collect::<Option<Vec<_>>>().map(History)
    }
}

pub fn pow3(e: usize) -> usize {
    3usize.pow(e as u32)
}

/// Every history of the given depth, in column order.
pub fn enumerate_histories(depth: usize) -> Vec<History> {
    (0..pow3(depth)).map(|i| History::from_index(depth, i)).collect()
}

/// `3^(r+1)`.
pub fn column_count(r: usize) -> usize {
    pow3(r + 1)
}

/// `2 * sum_{k=0..r} 3^k`.
pub fn row_count(r: usize) -> usize {
    pow3(r + 1) - 1
}

/// Row of the connection `(label, prefix)` in `M_r` for any `r >= prefix.depth()`.
pub fn row_index(label: u32, prefix: &History) -> usize {
    let d = prefix.depth();
    (pow3(d) - 1) + (label as usize - 1) * pow3(d) + prefix.index()
}

/// Inverse of [`row_index`].
pub fn row_connection(row: usize) -> (u32, History) {
    let mut d = 0;
    while row_count(d) <= row {
        d += 1;
    }
    let offset = row - (pow3(d) - 1);
    let label = (offset / pow3(d)) as u32 + 1;
    (label, History::from_index(d, offset % pow3(d)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Run {
    pub start: usize,
    pub len: usize,
}

/// `M_r`, stored row by row as its two runs of ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMatrix {
    pub round: usize,
    pub rows: Vec<[Run; 2]>,
}

impl StateMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        column_count(self.round)
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|runs| {
                let mut row = vec![0u8; self.col_count()];
                for run in runs {
                    row[run.start..run.start + run.len].fill(1);
                }
                row
            })
            .collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.col_count() {
            return Err(Error::DimensionMismatch { expected: self.col_count(), found: len });
        }
        Ok(())
    }

    /// `M_r x` over the integers.
    pub fn mul_i64(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.check_len(x.len())?;
        let mut prefix = vec![0i64; x.len() + 1];
        for (i, v) in x.iter().enumerate() {
            prefix[i + 1] = prefix[i].checked_add(*v).ok_or_else(overflow)?;
        }
        self.rows
            .iter()
            .map(|runs| {
                runs.iter().try_fold(0i64, |acc, run| {
                    acc.checked_add(prefix[run.start + run.len] - prefix[run.start]).ok_or_else(overflow)
                })
            })
            .collect()
    }

    pub fn mul_count(&self, s: &CountVector) -> Result<LeaderVector> {
        self.check_len(s.counts.len())?;
        let mut prefix = vec![0u64; s.counts.len() + 1];
        for (i, v) in s.counts.iter().enumerate() {
            prefix[i + 1] = prefix[i].checked_add(*v).ok_or_else(overflow)?;
        }
        let entries = self
            .rows
            .iter()
            .map(|runs| {
                runs.iter().try_fold(0u64, |acc, run| {
                    acc.checked_add(prefix[run.start + run.len] - prefix[run.start]).ok_or_else(overflow)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LeaderVector { round: self.round, entries })
    }
}

fn overflow() -> Error {
    Error::Format("integer overflow in matrix product".into())
}

pub fn build_matrix(r: usize) -> StateMatrix {
    let mut rows = Vec::with_capacity(row_count(r));
    for depth in 0..=r {
        let trail = pow3(r - depth);
        for label in 1..=2usize {
            for prefix in 0..pow3(depth) {
                let base = prefix * 3 * trail;
                rows.push([
                    Run { start: base + (label - 1) * trail, len: trail },
                    Run { start: base + 2 * trail, len: trail },
                ]);
            }
        }
    }
    StateMatrix { round: r, rows }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelVector {
    pub round: usize,
    pub entries: Vec<i64>,
}

/// `k_r = [k_{r-1}, k_{r-1}, -k_{r-1}]`, starting from `k_{-1} = [1]`.
pub fn kernel_recursive(r: usize) -> KernelVector {
    let mut k = vec![1i64];
    for _ in 0..=r {
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        let mut next = Vec::with_capacity(k.len() * 3);
        next.extend_from_slice(&k);
        next.extend_from_slice(&k);
        next.extend(neg);
        k = next;
    }
    KernelVector { round: r, entries: k }
}

/// Integer kernel basis of `m` by exact rational elimination.
pub fn kernel_generic(m: &StateMatrix) -> Vec<Vec<BigInt>> {
    let rows = elimination::to_rational_rows(&m.to_dense());
    Rref::new(rows, m.col_count(), None).integer_kernel()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KernelSums {
    pub sum_pos: u64,
    pub sum_neg: u64,
    pub total: i64,
}

pub fn kernel_sums(k: &KernelVector) -> KernelSums {
    let sum_pos = k.entries.iter().filter(|&&x| x > 0).map(|&x| x as u64).sum();
    let sum_neg = k.entries.iter().filter(|&&x| x < 0).map(|&x| x.unsigned_abs()).sum();
    let total = k.entries.iter().sum();
    KernelSums { sum_pos, sum_neg, total }
}

/// `s_r`: number of nodes per depth-`r + 1` history.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountVector {
    pub round: usize,
    pub counts: Vec<u64>,
}

impl CountVector {
    pub fn new(round: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != column_count(round) {
            return Err(Error::DimensionMismatch { expected: column_count(round), found: counts.len() });
        }
        Ok(Self { round, counts })
    }

    pub fn population(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `self + t * k`, or `None` if a component would go negative.
    pub fn shifted(&self, k: &KernelVector, t: i64) -> Option<CountVector> {
        let counts = self
            .counts
            .iter()
            .zip(&k.entries)
            .map(|(&c, &kv)| u64::try_from(c as i128 + t as i128 * kv as i128).ok())
            .collect::<Option<Vec<_>>>()?;
        Some(CountVector { round: self.round, counts })
    }
}

/// `m_r`, in the row order of [`build_matrix`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeaderVector {
    pub round: usize,
    pub entries: Vec<u64>,
}

/// Arranges the multiplicities of a full-disclosure leader history in row order.
pub fn leader_vector_from_history(h: &LeaderHistory) -> Result<LeaderVector> {
    if h.depth() == 0 {
        return Err(Error::DepthMismatch { expected: 1, found: 0 });
    }
    let r = h.depth() - 1;
    let mut entries = vec![0u64; row_count(r)];
    for (i, round) in h.0.iter().enumerate() {
        for (label, history, count) in &round.0 {
            if history.depth() != i {
                return Err(Error::DepthMismatch { expected: i, found: history.depth() });
            }
            if !(1..=2).contains(label) {
                return Err(Error::Format(format!("label {label} outside DBL_2")));
            }
            let prefix = History::from_label_sets(&history.0)
                .ok_or_else(|| Error::Format(format!("history {history:?} is not a DBL_2 history")))?;
            entries[row_index(*label, &prefix)] += count;
        }
    }
    Ok(LeaderVector { round: r, entries })
}

/// Every nonnegative integer solution of `M_r s = m`, by increasing population.
///
/// A particular solution comes from exact elimination with the free variable
/// at zero; the rest lie on the line through it along `k_r`.
pub fn solve_nonneg(m: &LeaderVector, r: usize) -> Result<Vec<CountVector>> {
    if m.round != r || m.entries.len() != row_count(r) {
        return Err(Error::DimensionMismatch { expected: row_count(r), found: m.entries.len() });
    }
    let matrix = build_matrix(r);
    let rows = elimination::to_rational_rows(&matrix.to_dense());
    let rhs = m.entries.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
    let rref = Rref::new(rows, matrix.col_count(), Some(rhs));
    let Some(x) = rref.particular_solution() else {
        return Ok(Vec::new());
    };
    let particular = x
        .iter()
        .map(|q| {
            if q.is_integer() {
                q.to_integer().to_i64().ok_or_else(|| Error::NonIntegral(format!("{q} out of range")))
            } else {
                Err(Error::NonIntegral(format!("component {q}")))
            }
        })
        .collect::<Result<Vec<i64>>>()?;

    let k = kernel_recursive(r);
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for (&p, &kv) in particular.iter().zip(&k.entries) {
        if kv > 0 {
            lo = lo.max(-p);
        } else {
            hi = hi.min(p);
        }
    }
    if lo > hi {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for t in lo..=hi {
        let counts = particular
            .iter()
            .zip(&k.entries)
            .map(|(&p, &kv)| (p + t * kv) as u64)
            .collect();
        let s = CountVector { round: r, counts };
        if s.population() > 0 {
            out.push(s);
        }
    }
    Ok(out)
}

/// JSON dump of a 0/1 matrix, row-major.
pub fn matrix_json(m: &StateMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        m.to_dense()
            .into_iter()
            .map(|row| serde_json::Value::Array(row.into_iter().map(|x| x.into()).collect()))
            .collect(),
    )
}

/// JSON array of exact integers; magnitudes beyond 2^53 - 1 become strings.
pub fn exact_json<T: Copy + Into<i128>>(v: &[T]) -> serde_json::Value {
    const SAFE: i128 = (1 << 53) - 1;
    serde_json::Value::Array(
        v.iter()
            .map(|&x| {
                let x: i128 = x.into();
                if x.abs() <= SAFE {
                    serde_json::Value::from(x as i64)
                } else {
                    serde_json::Value::String(x.to_string())
                }
            })
            .collect(),
    )
}

/// Parses an array written by [`exact_json`].
pub fn parse_exact_json(v: &serde_json::Value) -> Result<Vec<i128>> {
    let arr = v.as_array().ok_or_else(|| Error::Format("expected a JSON array".into()))?;
    arr.iter()
        .map(|x| match x {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(i128::from)
                .ok_or_else(|| Error::Format(format!("{n} is not an integer"))),
            serde_json::Value::String(s) => {
                s.parse::<i128>().map_err(|e| Error::Format(format!("{s}: {e}")))
            }
            other => Err(Error::Format(format!("unexpected {other}"))),
        })
        .collect()
}

/// Converts a big-integer kernel vector to machine integers when it fits.
pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// `true` when `v` is all zeros.
pub fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|x| x.is_zero())
}
