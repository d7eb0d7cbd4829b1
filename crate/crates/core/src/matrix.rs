//! Small dense matrices over an exact coefficient ring.
//!
//! Inversion and solving use Gauss-Jordan elimination with exact division,
//! so they require a field ring (Q or F_p).

use crate::coeff::{Coeff, Ring};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    ring: Ring,
    a: Vec<Coeff>,
}

impl Mat {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, ring, a: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Mat {
        let mut m = Mat::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<Coeff>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Mat::zero(ring, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::ArityMismatch { expected: c, found: row.len() });
            }
            for (j, v) in row.into_iter().enumerate() {
                if v.ring() != ring {
                    return Err(Error::RingMismatch {
                        left: ring.to_string(),
                        right: v.ring().to_string(),
                    });
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coeff) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Coeff] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zero(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::ArityMismatch { expected: self.cols, found: other.rows });
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        let mut m = Mat::zero(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.ring.zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// Inverse by Gauss-Jordan elimination; `SingularMatrix` if not invertible.
    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::ArityMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Mat::identity(self.ring, n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !work.get(r, col).is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot_row != col {
                work.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let pivot_inv = work.get(col, col).inv().map_err(|_| Error::SingularMatrix)?;
            work.scale_row(col, &pivot_inv);
            inv.scale_row(col, &pivot_inv);
            for r in 0..n {
                if r == col || work.get(r, col).is_zero() {
                    continue;
                }
                let factor = work.get(r, col).clone();
                work.sub_scaled_row(r, col, &factor);
                inv.sub_scaled_row(r, col, &factor);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, f: &Coeff) {
        for c in 0..self.cols {
            let v = self.get(i, c).mul(f);
            self.set(i, c, v);
        }
    }

    /// row_i -= f * row_j
    fn sub_scaled_row(&mut self, i: usize, j: usize, f: &Coeff) {
        for c in 0..self.cols {
            let v = self.get(i, c).sub(&self.get(j, c).mul(f));
            self.set(i, c, v);
        }
    }

    /// Any exact solution of `self * x = b`, with free variables set to zero;
    /// None if the system is inconsistent.
    pub fn solve_any(&self, b: &[Coeff]) -> Result<Option<Vec<Coeff>>> {
        if b.len() != self.rows {
            return Err(Error::ArityMismatch { expected: self.rows, found: b.len() });
        }
        let rows = self.rows;
        let cols = self.cols;
        let mut aug = Mat::zero(self.ring, rows, cols + 1);
        for i in 0..rows {
            for j in 0..cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, cols, b[i].clone());
        }
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !aug.get(i, c).is_zero()) else {
                continue;
            };
            aug.swap_rows(pr, r);
            let inv = aug.get(r, c).inv().map_err(|_| Error::SingularMatrix)?;
            aug.scale_row(r, &inv);
            for i in 0..rows {
                if i != r && !aug.get(i, c).is_zero() {
                    let f = aug.get(i, c).clone();
                    aug.sub_scaled_row(i, r, &f);
                }
            }
            pivot_of_row[r] = Some(c);
            r += 1;
        }
        // Inconsistent if a zero row has nonzero augment.
        for i in r..rows {
            if !aug.get(i, cols).is_zero() {
                return Ok(None);
            }
        }
        let mut x = vec![self.ring.zero(); cols];
        for i in 0..r {
            if let Some(c) = pivot_of_row[i] {
                x[c] = aug.get(i, cols).clone();
            }
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{fp, Q};

    fn qm(rows: Vec<Vec<i64>>) -> Mat {
        Mat::from_rows(
            Q,
            rows.into_iter()
                .map(|r| r.into_iter().map(|v| Q.from_i64(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let m = qm(vec![vec![1, 1], vec![0, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn singular_detected() {
        let m = qm(vec![vec![1, 2], vec![2, 4]]);
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn inverse_mod_p() {
        let ring = fp(3);
        let m = Mat::from_rows(
            ring,
            vec![
                vec![ring.from_i64(1), ring.from_i64(1)],
                vec![ring.from_i64(0), ring.from_i64(1)],
            ],
        )
        .unwrap();
        assert!(m.mul(&m.inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn solve_underdetermined() {
        // x + y = 3 has a solution with free variable zeroed.
        let m = qm(vec![vec![1, 1]]);
        let sol = m.solve_any(&[Q.from_i64(3)]).unwrap().unwrap();
        let got = sol[0].add(&sol[1]);
        assert_eq!(got, Q.from_i64(3));
    }

    #[test]
    fn solve_inconsistent() {
        let m = qm(vec![vec![1, 1], vec![1, 1]]);
        let sol = m.solve_any(&[Q.from_i64(0), Q.from_i64(1)]).unwrap();
        assert!(sol.is_none());
    }
}
