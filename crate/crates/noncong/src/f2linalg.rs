//! Dense GF(2) linear algebra: rank, solving, and matrix-vector products.
//!
//! Rows are bit-packed into `u64` words so that row elimination is a handful
//! of XORs. Matrices at descent scale are tiny (k ≤ ~15) but range scans
//! touch a lot of them, so constant factors matter more than asymptotics.

use crate::{Error, Result};

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    bits: Vec<u64>,
}

impl F2Vector {
    pub fn zero(len: usize) -> Self {
        F2Vector {
            len,
            bits: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = F2Vector::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b % 2 == 1);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.bits[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.bits[i / WORD] |= 1 << (i % WORD);
        } else {
            self.bits[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    /// Sum of all entries in F₂.
    pub fn parity(&self) -> bool {
        self.bits.iter().fold(0u32, |acc, w| acc ^ w.count_ones()) % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

/// Row-major bit-packed matrix over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![F2Vector::zero(cols); rows],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = F2Matrix::zero(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = F2Matrix::zero(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b % 2 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    /// Row rank via Gaussian elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, pivot);
            let pivot_row = work[rank].clone();
            for (r, row) in work.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// GF(2) matrix-vector product.
    pub fn mat_vec(&self, x: &F2Vector) -> Result<F2Vector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, vector has length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = F2Vector::zero(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            let dot = row
                .bits
                .iter()
                .zip(&x.bits)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            out.set(i, dot % 2 == 1);
        }
        Ok(out)
    }

    /// Solve `M·x = t` over GF(2).
    ///
    /// Returns `None` when the system is inconsistent; otherwise the
    /// canonical particular solution (column-order pivoting, free variables
    /// zero) together with a basis of the nullspace.
    pub fn solve(&self, t: &F2Vector) -> Result<Option<(F2Vector, Vec<F2Vector>)>> {
        if t.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, rhs has length {}",
                self.rows,
                self.cols,
                t.len()
            )));
        }
        // Augmented elimination: work rows carry the rhs bit alongside.
        let mut work = self.data.clone();
        let mut rhs: Vec<bool> = t.iter_bits().collect();
        let mut pivot_col_of_row: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, pivot);
            rhs.swap(rank, pivot);
            let pivot_row = work[rank].clone();
            let pivot_rhs = rhs[rank];
            for r in 0..self.rows {
                if r != rank && work[r].get(col) {
                    work[r].xor_assign(&pivot_row);
                    rhs[r] ^= pivot_rhs;
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        // Inconsistent iff a zero row has rhs 1.
        for r in rank..self.rows {
            if rhs[r] && work[r].is_zero() {
                return Ok(None);
            }
        }
        let mut particular = F2Vector::zero(self.cols);
        for (r, &col) in pivot_col_of_row.iter().enumerate() {
            particular.set(col, rhs[r]);
        }
        let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
        let is_pivot = {
            let mut mark = vec![false; self.cols];
            for &c in &pivot_cols {
                mark[c] = true;
            }
            mark
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = F2Vector::zero(self.cols);
            v.set(free, true);
            for (r, &col) in pivot_col_of_row.iter().enumerate() {
                if work[r].get(free) {
                    v.set(col, true);
                }
            }
            basis.push(v);
        }
        Ok(Some((particular, basis)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ones(k: usize) -> F2Matrix {
        F2Matrix::from_rows(&vec![vec![1u8; k]; k])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(F2Matrix::zero(1, 1).rank(), 0);
        assert_eq!(ones(2).rank(), 1);
        for k in 1..10 {
            assert_eq!(F2Matrix::identity(k).rank(), k);
        }
        assert_eq!(F2Matrix::zero(0, 0).rank(), 0);
    }

    #[test]
    fn solve_examples() {
        let m = ones(2);
        let (x, basis) = m.solve(&F2Vector::from_bits(&[1, 1])).unwrap().unwrap();
        assert_eq!(x, F2Vector::from_bits(&[1, 0]));
        assert_eq!(basis, vec![F2Vector::from_bits(&[1, 1])]);
        assert!(m.solve(&F2Vector::from_bits(&[1, 0])).unwrap().is_none());
        let zero = F2Vector::zero(2);
        let (x0, _) = m.solve(&zero).unwrap().unwrap();
        assert!(x0.is_zero());
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = F2Matrix::zero(2, 3);
        assert!(m.solve(&F2Vector::zero(3)).is_err());
        assert!(m.mat_vec(&F2Vector::zero(2)).is_err());
    }

    #[test]
    fn mat_vec_examples() {
        let x = F2Vector::from_bits(&[1, 0, 1, 1]);
        assert_eq!(F2Matrix::identity(4).mat_vec(&x).unwrap(), x);
        assert!(F2Matrix::zero(4, 4).mat_vec(&x).unwrap().is_zero());
        let m = ones(2);
        assert!(m.mat_vec(&F2Vector::from_bits(&[1, 1])).unwrap().is_zero());
    }

    /// Exhaustive cross-check of solve against direct enumeration.
    #[test]
    fn solve_matches_enumeration_small() {
        let cases: Vec<F2Matrix> = vec![
            ones(2),
            F2Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]),
            F2Matrix::from_rows(&[vec![0, 1, 1], vec![1, 1, 0], vec![1, 0, 1]]),
            F2Matrix::from_rows(&[vec![1, 0, 1, 1], vec![0, 0, 1, 1]]),
            F2Matrix::zero(3, 3),
        ];
        for m in cases {
            let cols = m.cols();
            let rows = m.rows();
            for tmask in 0u32..1 << rows {
                let t = F2Vector::from_bits(
                    &(0..rows).map(|i| (tmask >> i & 1) as u8).collect::<Vec<_>>(),
                );
                let brute: Vec<u32> = (0..1u32 << cols)
                    .filter(|&xm| {
                        let x = F2Vector::from_bits(
                            &(0..cols).map(|i| (xm >> i & 1) as u8).collect::<Vec<_>>(),
                        );
                        m.mat_vec(&x).unwrap() == t
                    })
                    .collect();
                match m.solve(&t).unwrap() {
                    None => assert!(brute.is_empty()),
                    Some((x, basis)) => {
                        assert_eq!(m.mat_vec(&x).unwrap(), t);
                        for b in &basis {
                            assert!(m.mat_vec(b).unwrap().is_zero());
                        }
                        // solution count is 2^(cols − rank)
                        assert_eq!(brute.len(), 1usize << (cols - m.rank()));
                        assert_eq!(basis.len(), cols - m.rank());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rank_invariant_under_row_permutation(
            rows in prop::collection::vec(prop::collection::vec(0u8..2, 6), 1..7),
            seed in 0u64..1000,
        ) {
            let m = F2Matrix::from_rows(&rows);
            let mut perm: Vec<usize> = (0..rows.len()).collect();
            // cheap deterministic shuffle
            let mut s = seed.wrapping_add(0x9e3779b97f4a7c15);
            for i in (1..perm.len()).rev() {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                perm.swap(i, (s % (i as u64 + 1)) as usize);
            }
            let permuted: Vec<Vec<u8>> = perm.iter().map(|&i| rows[i].clone()).collect();
            prop_assert_eq!(m.rank(), F2Matrix::from_rows(&permuted).rank());
        }

        #[test]
        fn solve_roundtrip(
            rows in prop::collection::vec(prop::collection::vec(0u8..2, 5), 1..6),
            t in prop::collection::vec(0u8..2, 1..6),
        ) {
            let m = F2Matrix::from_rows(&rows);
            if t.len() == m.rows() {
                let t = F2Vector::from_bits(&t);
                if let Some((x, basis)) = m.solve(&t).unwrap() {
                    prop_assert_eq!(m.mat_vec(&x).unwrap(), t);
                    for b in basis {
                        prop_assert!(m.mat_vec(&b).unwrap().is_zero());
                    }
                }
            }
        }
    }
}
