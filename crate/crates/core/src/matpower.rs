//! Boolean matrix powers.
//!
//! Powers are taken over the Boolean semiring (OR as addition, AND as
//! multiplication). The support of a semiring product equals the support of
//! the integer product, so binarizing after every product or once at the end
//! gives the same matrix, and entries never overflow.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = u64::BITS as usize;

/// Square boolean matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize) -> Self {
        let words_per_row = n.div_ceil(WORD_BITS);
        BinaryMatrix {
            n,
            words_per_row,
            bits: vec![0; n * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from dense rows; every row must have length `rows.len()`.
    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != n) {
            return Err(Error::invalid(format!(
                "matrix is not square: {n} rows but a row of length {}",
                bad.as_ref().len()
            )));
        }
        Ok(Self::from_fn(n, |i, j| rows[i].as_ref()[j]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n && j < self.n, "index ({i},{j}) out of bounds");
        self.bits[i * self.words_per_row + j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.n && j < self.n, "index ({i},{j}) out of bounds");
        let word = &mut self.bits[i * self.words_per_row + j / WORD_BITS];
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    /// Packed words of row `i`; bits past column `n` are always zero.
    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        let start = i * self.words_per_row;
        &self.bits[start..start + self.words_per_row]
    }

    /// True iff rows `i` and `j` share at least one set column.
    pub fn rows_intersect(&self, i: usize, j: usize) -> bool {
        self.row(i).iter().zip(self.row(j)).any(|(a, b)| a & b != 0)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|&w| w == 0)
    }

    /// Column indices of the set entries in row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * WORD_BITS + bit)
            })
        })
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn diagonal_all_ones(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    /// True iff every set entry of `other` is also set in `self`.
    pub fn is_superset_of(&self, other: &BinaryMatrix) -> Result<bool> {
        self.check_same_size(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| b & !a == 0))
    }

    pub fn to_dense(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn check_same_size(&self, other: &BinaryMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let line: String = (0..self.n)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Product over the Boolean semiring: `(a·b)(i,j) = OR_t a(i,t) AND b(t,j)`.
pub fn bool_multiply(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<BinaryMatrix> {
    a.check_same_size(b)?;
    let mut out = BinaryMatrix::zeros(a.n);
    let wpr = a.words_per_row;
    for (i, out_row) in out.bits.chunks_mut(wpr.max(1)).enumerate().take(a.n) {
        for t in a.row_ones(i) {
            for (o, w) in out_row.iter_mut().zip(b.row(t)) {
                *o |= w;
            }
        }
    }
    Ok(out)
}

/// Exponents and multiplication counts for an `n`-node input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerPlan {
    pub n: usize,
    /// Naive exponent, `floor(n/2)`.
    pub k: usize,
    /// Squaring count, `ceil(log2(floor(n/2)))` for `n >= 4`, else 0.
    pub m: u32,
    pub naive_mults: usize,
    pub fast_mults: usize,
}

impl PowerPlan {
    /// Exponent reached by the fast method, `2^m`.
    pub fn fast_exponent(&self) -> u128 {
        1u128 << self.m
    }
}

pub fn make_power_plan(n: usize) -> Result<PowerPlan> {
    if n < 1 {
        return Err(Error::invalid("power plan needs at least one node"));
    }
    let k = n / 2;
    // for n <= 3, k <= 1 and log2 is zero or undefined: G = A
    let m = if n >= 4 {
        k.next_power_of_two().trailing_zeros()
    } else {
        0
    };
    Ok(PowerPlan {
        n,
        k,
        m,
        naive_mults: k.saturating_sub(1),
        fast_mults: m as usize,
    })
}

/// Repeated squaring: `G := A`, then `G := G²` `m` times, giving `A^(2^m)`.
///
/// Returns the power together with the number of products performed.
pub fn power_fast(a: &BinaryMatrix) -> Result<(BinaryMatrix, usize)> {
    let plan = make_power_plan(a.n().max(1))?;
    let mut g = a.clone();
    let mut mults = 0;
    for _ in 0..plan.m {
        g = bool_multiply(&g, &g)?;
        mults += 1;
    }
    Ok((g, mults))
}

/// Literal `A^k`, `k = floor(n/2)`, by `k - 1` successive multiplications.
///
/// Performs `floor(n/2) - 1` full products; meant as a test oracle for small inputs.
pub fn power_naive_oracle(a: &BinaryMatrix) -> Result<BinaryMatrix> {
    Ok(power_naive_counted(a)?.0)
}

pub fn power_naive_counted(a: &BinaryMatrix) -> Result<(BinaryMatrix, usize)> {
    let plan = make_power_plan(a.n().max(1))?;
    let mut g = a.clone();
    let mut mults = 0;
    for _ in 1..plan.k {
        g = bool_multiply(&g, a)?;
        mults += 1;
    }
    Ok((g, mults))
}
