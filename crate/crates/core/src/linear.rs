//! Matrices over a finite field.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;

/// Uniform element of `field` from raw generator output.
pub(crate) fn random_elem(field: &Field, rng: &mut dyn RngCore) -> u32 {
    let q = field.q() as u64;
    // reject the top partial block so every residue is equally likely
    let zone = u64::MAX - u64::MAX % q;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return (v % q) as u32;
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(field: &Field, rows: &mut [Vec<u32>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).unwrap();
        for v in rows[r].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = field.neg(row[c]);
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                if pv != 0 {
                    *v = field.mul_add(*v, factor, pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Solves `A x = b`; returns one solution or `None` when inconsistent.
pub fn solve(field: &Field, a: &[Vec<u32>], b: &[u32]) -> Option<Vec<u32>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![0; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][ncols];
    }
    Some(x)
}

/// A `rows x cols` matrix, optionally carrying a verified inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Vec<u32>>,
    inverse: Option<Vec<Vec<u32>>>,
}

impl LinearMap {
    pub fn new(field: &Field, data: Vec<Vec<u32>>) -> Result<LinearMap> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        if rows == 0 || cols == 0 {
            return Err(Error::dim("empty matrix"));
        }
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::dim("ragged matrix rows"));
        }
        if data.iter().flatten().any(|&v| v >= field.q()) {
            return Err(Error::dim(format!("matrix entry outside {field}")));
        }
        Ok(LinearMap { field: field.clone(), rows, cols, data, inverse: None })
    }

    pub fn identity(field: &Field, n: usize) -> LinearMap {
        let data: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        LinearMap { field: field.clone(), rows: n, cols: n, inverse: Some(data.clone()), data }
    }

    /// Block-diagonal matrix.
    pub fn block_diagonal(field: &Field, blocks: &[LinearMap]) -> LinearMap {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = vec![vec![0; cols]; rows];
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    data[r0 + i][c0 + j] = b.data[i][j];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        LinearMap { field: field.clone(), rows, cols, data, inverse: None }
    }

    /// Deterministic uniformly random invertible matrix with its inverse attached.
    pub fn random_invertible(field: &Field, n: usize, seed: u64) -> LinearMap {
        assert!(n >= 1, "dimension must be positive");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        LinearMap::random_invertible_with(field, n, &mut rng)
    }

    pub fn random_invertible_with(field: &Field, n: usize, rng: &mut dyn RngCore) -> LinearMap {
        loop {
            let data: Vec<Vec<u32>> =
                (0..n).map(|_| (0..n).map(|_| random_elem(field, rng)).collect()).collect();
            let m = LinearMap { field: field.clone(), rows: n, cols: n, data, inverse: None };
            if let Ok(m) = m.with_inverse() {
                return m;
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.data[i][j]
    }

    pub fn data(&self) -> &[Vec<u32>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i]
    }

    pub fn stored_inverse(&self) -> Option<&[Vec<u32>]> {
        self.inverse.as_deref()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn rank(&self) -> usize {
        rank(&self.field, &self.data)
    }

    /// Computes and attaches the inverse, checking `A * A^-1 = I`.
    pub fn with_inverse(mut self) -> Result<LinearMap> {
        if self.inverse.is_some() {
            return Ok(self);
        }
        let inv = self.compute_inverse()?;
        self.inverse = Some(inv);
        Ok(self)
    }

    fn compute_inverse(&self) -> Result<Vec<Vec<u32>>> {
        if !self.is_square() {
            return Err(Error::dim("only square matrices are invertible"));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<u32>> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        let pivots = rref(&self.field, &mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::pre("matrix is singular"));
        }
        Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// The inverse as a map (which in turn carries `self` as its inverse).
    pub fn inverse(&self) -> Result<LinearMap> {
        let inv = match &self.inverse {
            Some(i) => i.clone(),
            None => self.compute_inverse()?,
        };
        Ok(LinearMap {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: inv,
            inverse: Some(self.data.clone()),
        })
    }

    /// Checks a stored inverse; maps without one pass trivially.
    pub fn verify_inverse(&self) -> bool {
        match &self.inverse {
            None => true,
            Some(inv) => {
                let a = LinearMap { inverse: None, ..self.clone() };
                let b = LinearMap { data: inv.clone(), inverse: None, ..self.clone() };
                a.matmul(&b).is_ok_and(|p| p.data == LinearMap::identity(&self.field, self.rows).data)
            }
        }
    }

    pub fn matmul(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let data = (0..self.rows)
            .map(|i| {
                (0..other.cols)
                    .map(|j| (0..self.cols).fold(0, |acc, k| f.mul_add(acc, self.data[i][k], other.data[k][j])))
                    .collect()
            })
            .collect();
        Ok(LinearMap { field: f.clone(), rows: self.rows, cols: other.cols, data, inverse: None })
    }

    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::dim(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let f = &self.field;
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| f.mul_add(acc, a, b)))
            .collect())
    }

    pub fn transpose(&self) -> LinearMap {
        let data = (0..self.cols).map(|j| (0..self.rows).map(|i| self.data[i][j]).collect()).collect();
        LinearMap { field: self.field.clone(), rows: self.cols, cols: self.rows, data, inverse: None }
    }

    pub fn determinant(&self) -> Result<u32> {
        if !self.is_square() {
            return Err(Error::dim("determinant of a non-square matrix"));
        }
        let f = &self.field;
        let mut m = self.data.clone();
        let n = self.rows;
        let mut det = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| m[i][c] != 0) else {
                return Ok(0);
            };
            if p != c {
                m.swap(p, c);
                det = f.neg(det);
            }
            det = f.mul(det, m[c][c]);
            let inv = f.inv(m[c][c])?;
            for i in c + 1..n {
                if m[i][c] == 0 {
                    continue;
                }
                let factor = f.neg(f.mul(m[i][c], inv));
                for j in c..n {
                    let v = m[c][j];
                    m[i][j] = f.mul_add(m[i][j], factor, v);
                }
            }
        }
        Ok(det)
    }
}
