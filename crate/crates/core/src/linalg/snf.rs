use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::scalar::{Overflow, Scalar};

/// `U · M · V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal of `D`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.entry(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Row-major working copy plus the accumulated transforms.
struct Work<T> {
    rows: usize,
    cols: usize,
    a: Vec<T>,
    u: Option<Vec<T>>,
    v: Option<Vec<T>>,
}

fn identity<T: Scalar>(n: usize) -> Vec<T> {
    let mut out = alloc::vec![T::zero(); n * n];
    for i in 0..n {
        out[i * n + i] = T::one();
    }
    out
}

impl<T: Scalar> Work<T> {
    fn new(rows: usize, cols: usize, a: Vec<T>, track: bool) -> Self {
        let (u, v) = if track {
            (Some(identity(rows)), Some(identity(cols)))
        } else {
            (None, None)
        };
        Work { rows, cols, a, u, v }
    }

    fn at(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            self.a.swap(i * self.cols + j, k * self.cols + j);
        }
        if let Some(u) = &mut self.u {
            for j in 0..self.rows {
                u.swap(i * self.rows + j, k * self.rows + j);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for i in 0..self.rows {
            self.a.swap(i * self.cols + j, i * self.cols + k);
        }
        if let Some(v) = &mut self.v {
            for i in 0..self.cols {
                v.swap(i * self.cols + j, i * self.cols + k);
            }
        }
    }

    /// row_i -= q · row_k
    fn row_axpy(&mut self, i: usize, k: usize, q: &T) -> Result<(), Overflow> {
        fn go<T: Scalar>(m: &mut [T], w: usize, i: usize, k: usize, q: &T) -> Result<(), Overflow> {
            for j in 0..w {
                let x = &m[k * w + j];
                if x.vanishes() {
                    continue;
                }
                let y = m[i * w + j].sub(&q.mul(x)?)?;
                m[i * w + j] = y;
            }
            Ok(())
        }
        go(&mut self.a, self.cols, i, k, q)?;
        if let Some(u) = &mut self.u {
            go(u, self.rows, i, k, q)?;
        }
        Ok(())
    }

    /// col_j -= q · col_k
    fn col_axpy(&mut self, j: usize, k: usize, q: &T) -> Result<(), Overflow> {
        fn go<T: Scalar>(m: &mut [T], h: usize, w: usize, j: usize, k: usize, q: &T) -> Result<(), Overflow> {
            for i in 0..h {
                let x = &m[i * w + k];
                if x.vanishes() {
                    continue;
                }
                let y = m[i * w + j].sub(&q.mul(x)?)?;
                m[i * w + j] = y;
            }
            Ok(())
        }
        go(&mut self.a, self.rows, self.cols, j, k, q)?;
        if let Some(v) = &mut self.v {
            go(v, self.cols, self.cols, j, k, q)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<(), Overflow> {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.a[idx] = self.a[idx].neg()?;
        }
        if let Some(u) = &mut self.u {
            for j in 0..self.rows {
                let idx = i * self.rows + j;
                u[idx] = u[idx].neg()?;
            }
        }
        Ok(())
    }

    /// Position of a nonzero entry of least absolute value in the trailing
    /// block starting at `(t, t)`.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.at(i, j);
                if x.vanishes() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.cmp_abs(self.at(bi, bj)) == Ordering::Less,
                };
                if better {
                    best = Some((i, j));
                    if x.cmp_abs(&T::one()) == Ordering::Equal {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Smallest nonzero entry in row `t` or column `t`, off the pivot.
    fn min_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let cands = (t + 1..self.rows).map(|i| (i, t)).chain((t + 1..self.cols).map(|j| (t, j)));
        for (i, j) in cands {
            let x = self.at(i, j);
            if x.vanishes() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.cmp_abs(self.at(bi, bj)) == Ordering::Less) {
                best = Some((i, j));
            }
        }
        best
    }

    fn run(&mut self) -> Result<(), Overflow> {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.at(t, t).clone();
                for i in t + 1..self.rows {
                    if !self.at(i, t).vanishes() {
                        let q = self.at(i, t).quot(&pivot)?;
                        self.row_axpy(i, t, &q)?;
                    }
                }
                for j in t + 1..self.cols {
                    if !self.at(t, j).vanishes() {
                        let q = self.at(t, j).quot(&pivot)?;
                        self.col_axpy(j, t, &q)?;
                    }
                }
                if let Some((i, j)) = self.min_in_cross(t) {
                    // Remainders are smaller than the pivot; promote one.
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                // Row and column are clear; enforce divisibility of the rest.
                let mut offender = None;
                'scan: for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        let x = self.at(i, j);
                        if !x.vanishes() && !x.sub(&x.quot(&pivot)?.mul(&pivot)?)?.vanishes() {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => self.row_axpy(t, i, &T::one().neg()?)?,
                    None => break,
                }
            }
            if self.at(t, t).below_zero() {
                self.negate_row(t)?;
            }
        }
        Ok(())
    }
}

fn to_matrix<T: Scalar>(rows: usize, cols: usize, v: Vec<T>) -> IntMatrix {
    IntMatrix::new(rows, cols, v.into_iter().map(Scalar::into_big).collect())
        .expect("working buffer has the matrix shape")
}

fn reduce(m: &IntMatrix, track: bool) -> (IntMatrix, Option<IntMatrix>, Option<IntMatrix>) {
    let (r, c) = m.shape();
    if let Some(small) = m.as_i64() {
        let mut w = Work::new(r, c, small.to_vec(), track);
        if w.run().is_ok() {
            return (
                to_matrix(r, c, w.a),
                w.u.map(|u| to_matrix(r, r, u)),
                w.v.map(|v| to_matrix(c, c, v)),
            );
        }
    }
    let mut w = Work::new(r, c, m.entries(), track);
    w.run().expect("arbitrary precision cannot overflow");
    (to_matrix(r, c, w.a), w.u.map(|u| to_matrix(r, r, u)), w.v.map(|v| to_matrix(c, c, v)))
}

/// Smith normal form with transforms.
///
/// Pivots are chosen by least absolute value. The computation runs in `i64`
/// with checked arithmetic and restarts in arbitrary precision on overflow.
pub fn snf(m: &IntMatrix) -> SmithDecomposition {
    let (d, u, v) = reduce(m, true);
    SmithDecomposition { u: u.unwrap(), d, v: v.unwrap() }
}

/// Diagonal of the Smith normal form, without transforms. Includes zeros
/// up to `min(rows, cols)`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = reduce(m, false);
    (0..m.rows().min(m.cols())).map(|i| d.entry(i, i)).collect()
}

pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).iter().filter(|d| !d.is_zero()).count()
}

/// Structure of `ℤ^rows / column-span(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelStructure {
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
}

pub fn cokernel_structure(m: &IntMatrix) -> CokernelStructure {
    let factors = invariant_factors(m);
    let nonzero = factors.iter().filter(|d| !d.is_zero()).count();
    CokernelStructure {
        free_rank: m.rows() - nonzero,
        torsion: factors.into_iter().filter(|d| d.is_positive() && !d.is_one()).collect(),
    }
}
