//! Exact Gauss-Jordan elimination over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced row echelon form of a rational matrix, optionally augmented with
/// one right-hand-side column.
#[derive(Debug, Clone)]
pub struct Rref {
    pub cols: usize,
    /// Non-zero rows of the reduced matrix, each led by a pivot of 1.
    pub rows: Vec<Vec<BigRational>>,
    pub pivots: Vec<usize>,
    /// Reduced right-hand side, one entry per original row (zero rows last).
    pub rhs: Option<Vec<BigRational>>,
}

impl Rref {
    pub fn new(matrix: Vec<Vec<BigRational>>, cols: usize, rhs: Option<Vec<BigRational>>) -> Self {
        let mut rows = matrix;
        let mut rhs = rhs;
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..cols {
            if next == rows.len() {
                break;
            }
            let Some(found) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(next, found);
            if let Some(b) = rhs.as_mut() {
                b.swap(next, found);
            }
            let inv = rows[next][col].recip();
            if !inv.is_one() {
                for x in rows[next].iter_mut().filter(|x| !x.is_zero()) {
                    *x *= &inv;
                }
                if let Some(b) = rhs.as_mut() {
                    b[next] *= &inv;
                }
            }
            let support: Vec<usize> = (col..cols).filter(|&c| !rows[next][c].is_zero()).collect();
            let pivot_row = rows[next].clone();
            let pivot_rhs = rhs.as_ref().map(|b| b[next].clone());
            for i in 0..rows.len() {
                if i == next || rows[i][col].is_zero() {
                    continue;
                }
                let factor = rows[i][col].clone();
                for &c in &support {
                    let delta = &factor * &pivot_row[c];
                    rows[i][c] -= delta;
                }
                if let (Some(b), Some(p)) = (rhs.as_mut(), pivot_rhs.as_ref()) {
                    let delta = &factor * p;
                    b[i] -= delta;
                }
            }
            pivots.push(col);
            next += 1;
        }
        rows.truncate(next);
        Rref { cols, rows, pivots, rhs }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// One rational solution with every free variable set to zero, or `None`
    /// if the augmented system is inconsistent.
    pub fn particular_solution(&self) -> Option<Vec<BigRational>> {
        let rhs = self.rhs.as_ref()?;
        if rhs[self.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = rhs[i].clone();
        }
        Some(x)
    }

    /// Basis of the right nullspace, one vector per free column, scaled to
    /// primitive integer vectors whose first non-zero entry is positive.
    pub fn integer_kernel(&self) -> Vec<Vec<BigInt>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (i, &p) in self.pivots.iter().enumerate() {
                    v[p] = -self.rows[i][f].clone();
                }
                primitive(&v)
            })
            .collect()
    }
}

/// Clears denominators and divides out the content.
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !gcd.is_zero() {
        for x in ints.iter_mut() {
            *x /= &gcd;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -x.clone();
        }
    }
    ints
}

pub fn to_rational_rows(rows: &[Vec<u8>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}
