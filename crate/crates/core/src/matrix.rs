//! Dense matrices over F_p with Gaussian elimination.

use std::fmt;

use crate::field::Prime;

#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from row-major data, reducing every entry mod p.
    pub fn from_vec(p: Prime, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        let data = data.into_iter().map(|x| x % p.get()).collect();
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(p: Prime, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_vec(p, rows.len(), cols, rows.concat())
    }

    pub fn from_fn(p: Prime, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % p.get());
            }
        }
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p.get();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn weight(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| p.mul(x, c)).collect(),
        }
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(self.p, rows, cols, |i, j| self.get(row0 + i, col0 + j))
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let p = u64::from(self.p.get());
        let mut out = vec![0u32; self.rows * rhs.cols];
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = u64::from(self.get(i, k));
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(rhs.row(k)) {
                    *slot = (*slot + a * u64::from(b)) % p;
                }
            }
            for (j, &a) in acc.iter().enumerate() {
                out[i * rhs.cols + j] = a as u32;
            }
        }
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    /// Square-and-multiply power; `pow(0)` is the identity.
    pub fn pow(&self, mut exp: u64) -> FpMatrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Self::identity(self.p, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Reduced row echelon form, returning the pivot columns and the
    /// determinant factor picked up along the way (only meaningful for
    /// square input).
    fn eliminate(&mut self) -> (Vec<usize>, u32) {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut det = 1 % p.get();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                det = 0;
                continue;
            };
            if pivot != row {
                for j in 0..self.cols {
                    self.data.swap(pivot * self.cols + j, row * self.cols + j);
                }
                det = p.neg(det);
            }
            let lead = self.get(row, col);
            det = p.mul(det, lead);
            let inv = p.inv(lead).expect("pivot is nonzero");
            for j in 0..self.cols {
                let v = p.mul(self.get(row, j), inv);
                self.data[row * self.cols + j] = v;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = p.sub(self.get(r, j), p.mul(factor, self.get(row, j)));
                    self.data[r * self.cols + j] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        if pivots.len() < self.rows.min(self.cols) {
            det = 0;
        }
        (pivots, det)
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().0.len()
    }

    pub fn determinant(&self) -> u32 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return 1 % self.p.get();
        }
        let (pivots, det) = self.clone().eliminate();
        if pivots.len() == self.rows {
            det
        } else {
            0
        }
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let (pivots, _) = aug.eliminate();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(aug.submatrix(0, n, n, n))
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix mod {} ({}x{})", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}
