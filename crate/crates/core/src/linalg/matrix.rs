use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Storage {
    /// Every entry fits in `i64`.
    Small(Vec<i64>),
    /// At least one entry does not fit in `i64`.
    Big(Vec<BigInt>),
}

impl Storage {
    fn from_big(entries: Vec<BigInt>) -> Self {
        let small: Option<Vec<i64>> = entries.iter().map(ToPrimitive::to_i64).collect();
        match small {
            Some(v) => Storage::Small(v),
            None => Storage::Big(entries),
        }
    }

    fn from_wide(entries: Vec<i128>) -> Self {
        let small: Option<Vec<i64>> = entries.iter().map(|&x| i64::try_from(x).ok()).collect();
        match small {
            Some(v) => Storage::Small(v),
            None => Storage::Big(entries.into_iter().map(BigInt::from).collect()),
        }
    }

    fn to_big(&self) -> Vec<BigInt> {
        match self {
            Storage::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Storage::Big(v) => v.clone(),
        }
    }
}

/// Dense exact integer matrix, row-major.
///
/// Entries are unbounded. Matrices whose entries all fit in `i64` are kept in
/// a machine-word representation and arithmetic on them is overflow-checked,
/// escalating to arbitrary precision when a result leaves the word range.
/// Equality does not depend on the representation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Storage,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, Error> {
        if entries.len() != rows * cols {
            return Err(Error::EntryCount { expected: rows * cols, found: entries.len() });
        }
        Ok(IntMatrix { rows, cols, data: Storage::from_big(entries) })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self, Error> {
        if entries.len() != rows * cols {
            return Err(Error::EntryCount { expected: rows * cols, found: entries.len() });
        }
        Ok(IntMatrix { rows, cols, data: Storage::Small(entries.to_vec()) })
    }

    /// Builds a matrix from rows of machine integers. All rows must have the
    /// same length; an empty slice gives the 0×0 matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, Error> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::RaggedRows { row: i, expected: cols, found: r.len() });
            }
            entries.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: Storage::Small(entries) })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: Storage::Small(alloc::vec![0; rows * cols]) }
    }

    pub fn identity(n: usize) -> Self {
        let mut v = alloc::vec![0i64; n * n];
        for i in 0..n {
            v[i * n + i] = 1;
        }
        IntMatrix { rows: n, cols: n, data: Storage::Small(v) }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// Entry at `(i, j)`. Panics when out of range.
    pub fn entry(&self, i: usize, j: usize) -> BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        match &self.data {
            Storage::Small(v) => BigInt::from(v[i * self.cols + j]),
            Storage::Big(v) => v[i * self.cols + j].clone(),
        }
    }

    pub fn entry_i64(&self, i: usize, j: usize) -> Option<i64> {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        match &self.data {
            Storage::Small(v) => Some(v[i * self.cols + j]),
            Storage::Big(v) => v[i * self.cols + j].to_i64(),
        }
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> Vec<BigInt> {
        self.data.to_big()
    }

    /// Entries as machine integers, if every entry fits.
    pub fn as_i64(&self) -> Option<&[i64]> {
        match &self.data {
            Storage::Small(v) => Some(v),
            Storage::Big(_) => None,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        let e = self.entries();
        if self.cols == 0 {
            return alloc::vec![Vec::new(); self.rows];
        }
        e.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        match &self.data {
            Storage::Small(v) => v
                .iter()
                .enumerate()
                .all(|(k, &x)| x == i64::from(k / self.cols == k % self.cols)),
            // A big entry is never 0 or 1.
            Storage::Big(_) => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Storage::Small(v) => v.iter().all(|&x| x == 0),
            Storage::Big(_) => false,
        }
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        let data = match &self.data {
            Storage::Small(v) => {
                let mut out = alloc::vec![0i64; r * c];
                for i in 0..r {
                    for j in 0..c {
                        out[j * r + i] = v[i * c + j];
                    }
                }
                Storage::Small(out)
            }
            Storage::Big(v) => {
                let mut out = alloc::vec![BigInt::zero(); r * c];
                for i in 0..r {
                    for j in 0..c {
                        out[j * r + i] = v[i * c + j].clone();
                    }
                }
                Storage::Big(out)
            }
        };
        IntMatrix { rows: c, cols: r, data }
    }

    pub fn try_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, Error> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "multiply",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        if let (Storage::Small(a), Storage::Small(b)) = (&self.data, &rhs.data) {
            if let Some(out) = mul_wide(a, b, n, m, p) {
                return Ok(IntMatrix { rows: n, cols: p, data: Storage::from_wide(out) });
            }
        }
        let (a, b) = (self.data.to_big(), rhs.data.to_big());
        let mut out = alloc::vec![BigInt::zero(); n * p];
        for i in 0..n {
            for k in 0..m {
                let aik = &a[i * m + k];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..p {
                    out[i * p + j] += aik * &b[k * p + j];
                }
            }
        }
        Ok(IntMatrix { rows: n, cols: p, data: Storage::from_big(out) })
    }

    fn zip_with(
        &self,
        rhs: &IntMatrix,
        op: &'static str,
        small: fn(i64, i64) -> i128,
        big: fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<IntMatrix, Error> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch { op, left: self.shape(), right: rhs.shape() });
        }
        let data = match (&self.data, &rhs.data) {
            (Storage::Small(a), Storage::Small(b)) => {
                Storage::from_wide(a.iter().zip(b).map(|(&x, &y)| small(x, y)).collect())
            }
            _ => {
                let (a, b) = (self.data.to_big(), rhs.data.to_big());
                Storage::from_big(a.iter().zip(&b).map(|(x, y)| big(x, y)).collect())
            }
        };
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, rhs: &IntMatrix) -> Result<IntMatrix, Error> {
        self.zip_with(rhs, "add", |x, y| i128::from(x) + i128::from(y), |x, y| x + y)
    }

    pub fn try_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix, Error> {
        self.zip_with(rhs, "subtract", |x, y| i128::from(x) - i128::from(y), |x, y| x - y)
    }

    /// Non-negative integer power of a square matrix.
    pub fn pow(&self, mut exp: u32) -> Result<IntMatrix, Error> {
        if !self.is_square() {
            return Err(Error::NotSquare { shape: self.shape() });
        }
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Concatenates matrices with equal row counts side by side.
    pub fn hstack(rows: usize, blocks: &[IntMatrix]) -> Result<IntMatrix, Error> {
        let cols: usize = blocks.iter().map(IntMatrix::cols).sum();
        for b in blocks {
            if b.rows != rows {
                return Err(Error::DimensionMismatch {
                    op: "hstack",
                    left: (rows, cols),
                    right: b.shape(),
                });
            }
        }
        let all_small = blocks.iter().all(|b| matches!(b.data, Storage::Small(_)));
        if all_small {
            let mut out = alloc::vec![0i64; rows * cols];
            let mut offset = 0;
            for b in blocks {
                let Storage::Small(v) = &b.data else { unreachable!() };
                for i in 0..rows {
                    out[i * cols + offset..i * cols + offset + b.cols]
                        .copy_from_slice(&v[i * b.cols..(i + 1) * b.cols]);
                }
                offset += b.cols;
            }
            return Ok(IntMatrix { rows, cols, data: Storage::Small(out) });
        }
        let mut out = alloc::vec![BigInt::zero(); rows * cols];
        let mut offset = 0;
        for b in blocks {
            let v = b.data.to_big();
            for i in 0..rows {
                for j in 0..b.cols {
                    out[i * cols + offset + j] = v[i * b.cols + j].clone();
                }
            }
            offset += b.cols;
        }
        Ok(IntMatrix { rows, cols, data: Storage::from_big(out) })
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        let mut out = alloc::vec![BigInt::zero(); r * c];
        let (a, b) = (self.data.to_big(), other.data.to_big());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[i * c + j] = a[i * self.cols + j].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i) * c + self.cols + j] = b[i * other.cols + j].clone();
            }
        }
        IntMatrix { rows: r, cols: c, data: Storage::from_big(out) }
    }

    /// Submatrix of rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> IntMatrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let v = self.data.to_big();
        let mut out = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            out.extend_from_slice(&v[i * self.cols + c0..i * self.cols + c1]);
        }
        IntMatrix { rows: r1 - r0, cols: c1 - c0, data: Storage::from_big(out) }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, Error> {
        if !self.is_square() {
            return Err(Error::NotSquare { shape: self.shape() });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.data.to_big();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        Ok(sign * &a[n * n - 1])
    }
}

fn mul_wide(a: &[i64], b: &[i64], n: usize, m: usize, p: usize) -> Option<Vec<i128>> {
    let mut out = alloc::vec![0i128; n * p];
    for i in 0..n {
        for k in 0..m {
            let aik = i128::from(a[i * m + k]);
            if aik == 0 {
                continue;
            }
            let row = &b[k * p..(k + 1) * p];
            let dst = &mut out[i * p..(i + 1) * p];
            for (d, &bkj) in dst.iter_mut().zip(row) {
                *d = d.checked_add(aik * i128::from(bkj))?;
            }
        }
    }
    Some(out)
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.to_rows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_sub(rhs).expect("matrix difference dimension mismatch")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        let data = match &self.data {
            Storage::Small(v) => Storage::from_wide(v.iter().map(|&x| -i128::from(x)).collect()),
            Storage::Big(v) => Storage::from_big(v.iter().map(|x| -x).collect()),
        };
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escalates_on_overflow() {
        let big = IntMatrix::from_rows(&[[i64::MAX, 0], [0, 1]]).unwrap();
        let sq = &big * &big;
        assert!(sq.as_i64().is_none());
        assert_eq!(sq.entry(0, 0), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        assert_eq!(sq.entry(1, 1), BigInt::from(1));
    }

    #[test]
    fn representation_does_not_affect_equality() {
        let a = IntMatrix::new(1, 2, alloc::vec![BigInt::from(3), BigInt::from(-4)]).unwrap();
        let b = IntMatrix::from_rows(&[[3, -4]]).unwrap();
        assert_eq!(a, b);
        let huge = BigInt::from(i64::MAX) + BigInt::from(1);
        let c = IntMatrix::new(1, 1, alloc::vec![huge.clone()]).unwrap();
        let back = &c - &IntMatrix::from_rows(&[[1]]).unwrap();
        assert_eq!(back, IntMatrix::from_rows(&[[i64::MAX]]).unwrap());
        assert!(back.as_i64().is_some());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows: [&[i64]; 2] = [&[1, 2], &[3]];
        assert!(matches!(IntMatrix::from_rows(&rows), Err(Error::RaggedRows { row: 1, .. })));
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_rows(&[[0, 1, 2], [3, 4, 5], [6, 7, 9]]).unwrap();
        assert_eq!(m.det().unwrap(), BigInt::from(-3));
        let trefoil = IntMatrix::from_rows(&[[1, 1], [-1, 0]]).unwrap();
        assert_eq!(trefoil.det().unwrap(), BigInt::from(1));
        assert_eq!(IntMatrix::zeros(3, 3).det().unwrap(), BigInt::from(0));
    }

    #[test]
    fn stacking_and_sums() {
        let a = IntMatrix::from_rows(&[[1, 2], [3, 4]]).unwrap();
        let b = IntMatrix::from_rows(&[[5], [6]]).unwrap();
        let h = IntMatrix::hstack(2, &[a.clone(), b]).unwrap();
        assert_eq!(h, IntMatrix::from_rows(&[[1, 2, 5], [3, 4, 6]]).unwrap());
        let d = a.direct_sum(&IntMatrix::identity(1));
        assert_eq!(d, IntMatrix::from_rows(&[[1, 2, 0], [3, 4, 0], [0, 0, 1]]).unwrap());
        assert_eq!(d.submatrix(0, 2, 0, 2), a);
    }

    #[test]
    fn powers() {
        let t = IntMatrix::from_rows(&[[1, 1], [-1, 0]]).unwrap();
        assert!(t.pow(6).unwrap().is_identity());
        assert!(!t.pow(3).unwrap().is_identity());
        assert_eq!(t.pow(3).unwrap(), -&IntMatrix::identity(2));
    }
}
