//! Dense row-major complex matrices.
//!
//! Only what the operators on `H_N` need: products, adjoints, traces and a
//! handful of norms. Products are parallelized over output rows, so every
//! entry is computed by exactly one thread in a fixed order and results do
//! not depend on scheduling.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

pub type C64 = Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from a row-major vector.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "shape mismatch");
        CMatrix { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&x| C64::new(x, 0.0))
            })
            .collect();
        CMatrix::from_vec(r, c, data)
    }

    /// Fills an `rows x cols` matrix from `f(i, j)`, in parallel over rows.
    pub fn from_fn<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> C64 + Sync,
    {
        let mut data = vec![C64::new(0.0, 0.0); rows * cols];
        if cols > 0 {
            data.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = f(i, j);
                }
            });
        }
        CMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let n = rhs.cols;
        let mut data = vec![C64::new(0.0, 0.0); self.rows * n];
        if n > 0 {
            data.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
                for (k, &a) in self.row(i).iter().enumerate() {
                    if a.re == 0.0 && a.im == 0.0 {
                        continue;
                    }
                    for (o, &b) in out.iter_mut().zip(rhs.row(k)) {
                        *o += a * b;
                    }
                }
            });
        }
        CMatrix {
            rows: self.rows,
            cols: n,
            data,
        }
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Left multiplication by `diag(d)`.
    pub fn scale_rows(&self, d: &[C64]) -> CMatrix {
        assert_eq!(d.len(), self.rows);
        let mut out = self.clone();
        for (i, &di) in d.iter().enumerate() {
            for x in &mut out.data[i * self.cols..(i + 1) * self.cols] {
                *x *= di;
            }
        }
        out
    }

    /// Right multiplication by `diag(d)`.
    pub fn scale_cols(&self, d: &[C64]) -> CMatrix {
        assert_eq!(d.len(), self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            for (x, &dj) in out.data[i * self.cols..(i + 1) * self.cols]
                .iter_mut()
                .zip(d)
            {
                *x *= dj;
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |self - other|` entrywise.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// `max |A - A^H|` entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn pow(&self, k: u32) -> CMatrix {
        assert!(self.is_square());
        let mut acc = CMatrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.matmul(self);
        }
        acc
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn matmul_small() {
        let a = CMatrix::from_vec(2, 2, vec![c(1., 0.), c(0., 1.), c(2., 0.), c(1., 1.)]);
        let b = CMatrix::from_vec(2, 2, vec![c(0., 1.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let p = a.matmul(&b);
        assert_eq!(p[(0, 0)], c(0., 2.));
        assert_eq!(p[(0, 1)], c(1., 0.));
        assert_eq!(p[(1, 0)], c(1., 3.));
        assert_eq!(p[(1, 1)], c(2., 0.));
    }

    #[test]
    fn adjoint_and_hermitian_defect() {
        let a = CMatrix::from_vec(2, 2, vec![c(1., 0.), c(2., 3.), c(2., -3.), c(5., 0.)]);
        assert_eq!(a.hermitian_defect(), 0.0);
        assert_eq!(a.adjoint(), a);
        let b = CMatrix::from_vec(2, 2, vec![c(0., 1.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        assert!((b.hermitian_defect() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_scaling_matches_product() {
        let a = CMatrix::from_fn(3, 3, |i, j| c(i as f64 + 1.0, j as f64 - 1.0));
        let d = [c(1., 1.), c(0., 2.), c(-1., 0.)];
        let dm = CMatrix::from_diag(&d);
        assert!(a.scale_rows(&d).max_abs_diff(&dm.matmul(&a)) < 1e-15);
        assert!(a.scale_cols(&d).max_abs_diff(&a.matmul(&dm)) < 1e-15);
    }
}
