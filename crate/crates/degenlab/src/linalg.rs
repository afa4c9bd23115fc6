//! Exact subspace calculus: reduced row echelon forms as canonical
//! representatives, sums, intersections, kernels and images.

use crate::field::{Field, Scalar};
use crate::Error;
use std::cmp::Ordering;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Matrix, Error> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(
                "rows of unequal ambient dimension".into(),
            ));
        }
        let n = rows.len();
        Ok(Matrix {
            field,
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_slice(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, r: Vec<Scalar>) {
        assert_eq!(r.len(), self.cols);
        self.data.extend(r);
        self.rows += 1;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self.get(r, c)).expect("pivot nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !f.is_zero(self.get(i, c)) {
                    let factor = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = f.sub(self.get(i, j), &f.mul(&factor, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// self * other.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if f.is_zero(self.get(i, k)) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(self.get(i, k), other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Applies the matrix (as a map on column vectors) to `v`.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !f.is_zero(self.get(i, j)) && !f.is_zero(&v[j]) {
                    out[i] = f.add(&out[i], &f.mul(self.get(i, j), &v[j]));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = f.add(&out.data[i], &other.data[i]);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let f = self.field;
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = f.mul(v, c);
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let mut t = f.zero();
        for i in 0..self.rows {
            t = f.add(&t, self.get(i, i));
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    /// Basis (as rows) of { x : self * x = 0 }.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut x = vec![f.zero(); self.cols];
            x[free] = f.one();
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = f.neg(m.get(r, free));
            }
            basis.push(x);
        }
        basis
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                return f.zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = f.neg(&det);
            }
            det = f.mul(&det, m.get(c, c));
            let inv = f.inv(m.get(c, c)).unwrap();
            for i in c + 1..m.rows {
                if f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = f.mul(m.get(i, c), &inv);
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let n = self.rows;
        let mut aug = Matrix::zero(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Matrix::zero(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(out)
    }
}

/// A subspace in canonical form: the reduced row echelon basis is the
/// equality witness, so equal subspaces compare bit-identical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Matrix,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_rows(field: Field, ambient: usize, rows: Vec<Vec<Scalar>>) -> Result<Subspace, Error> {
        let mut m = Matrix::from_rows(field, ambient, rows)?;
        let pivots = m.rref();
        let rank = pivots.len();
        let mut basis = Matrix::zero(field, rank, ambient);
        for i in 0..rank {
            for j in 0..ambient {
                basis.set(i, j, m.get(i, j).clone());
            }
        }
        Ok(Subspace {
            ambient,
            basis,
            pivots,
        })
    }

    pub fn field(&self) -> Field {
        self.basis.field
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i)).collect()
    }

    /// Reduces `v` against the echelon basis; returns the residue.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        let mut v = v.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            if !f.is_zero(&v[c]) {
                let factor = v[c].clone();
                for j in 0..self.ambient {
                    v[j] = f.sub(&v[j], &f.mul(&factor, self.basis.get(r, j)));
                }
            }
        }
        v
    }

    pub fn contains_vec(&self, v: &[Scalar]) -> bool {
        let f = self.field();
        self.reduce(v).iter().all(|x| f.is_zero(x))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let f = self.field();
        let mut v = v.to_vec();
        let mut coords = vec![f.zero(); self.dim()];
        for (r, &c) in self.pivots.iter().enumerate() {
            if !f.is_zero(&v[c]) {
                let factor = v[c].clone();
                for j in 0..self.ambient {
                    v[j] = f.sub(&v[j], &f.mul(&factor, self.basis.get(r, j)));
                }
                coords[r] = factor;
            }
        }
        if v.iter().all(|x| f.is_zero(x)) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        (0..other.dim()).all(|i| self.contains_vec(&other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, Error> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("subspace sum".into()));
        }
        let mut rows = self.rows();
        rows.extend(other.rows());
        Subspace::from_rows(self.field(), self.ambient, rows)
    }

    /// Zassenhaus double-block elimination.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, Error> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("subspace intersection".into()));
        }
        let f = self.field();
        let n = self.ambient;
        let mut block = Matrix::zero(f, self.dim() + other.dim(), 2 * n);
        for i in 0..self.dim() {
            for j in 0..n {
                block.set(i, j, self.basis.get(i, j).clone());
                block.set(i, n + j, self.basis.get(i, j).clone());
            }
        }
        for i in 0..other.dim() {
            for j in 0..n {
                block.set(self.dim() + i, j, other.basis.get(i, j).clone());
            }
        }
        let pivots = block.rref();
        let mut rows = Vec::new();
        for (r, &c) in pivots.iter().enumerate() {
            if c >= n {
                rows.push(block.row(r)[n..].to_vec());
            }
        }
        // rows with pivot in the left block contribute to the sum, the rest
        // span the intersection
        Subspace::from_rows(f, n, rows)
    }

    /// Maps every basis vector through `map` (a matrix acting on column
    /// vectors of the ambient space) and returns the image span.
    pub fn image_of_map(&self, map: &Matrix) -> Result<Subspace, Error> {
        let rows = (0..self.dim())
            .map(|i| map.apply(&self.basis.row(i)))
            .collect();
        Subspace::from_rows(self.field(), map.rows, rows)
    }

    pub fn kernel_of_map(field: Field, map: &Matrix) -> Subspace {
        let rows = map.nullspace();
        Subspace::from_rows(field, map.cols, rows).expect("nullspace rows")
    }

    /// Ambient coordinates not used as pivots; these index a canonical
    /// complement of the subspace.
    pub fn complement_cols(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = self.pivots.iter().peekable();
        for c in 0..self.ambient {
            if p.peek() == Some(&&c) {
                p.next();
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Total order on subspaces of one ambient space, used only as a
    /// deterministic tie-break.
    pub fn canonical_cmp(&self, other: &Subspace) -> Ordering {
        let f = self.field();
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.pivots.cmp(&other.pivots))
            .then_with(|| {
                for i in 0..self.dim() {
                    for j in 0..self.ambient {
                        let a = f.fmt_scalar(self.basis.get(i, j));
                        let b = f.fmt_scalar(other.basis.get(i, j));
                        match a.cmp(&b) {
                            Ordering::Equal => {}
                            o => return o,
                        }
                    }
                }
                Ordering::Equal
            })
    }
}
