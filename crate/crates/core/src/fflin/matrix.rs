//! Dense matrices, echelon forms, subspaces and quotients.

use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(field: F, n: usize, a: u64) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = a;
        }
        m
    }

    pub fn from_data(field: F, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: F, rows: &[Vec<u64>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Self::from_data(field, rows.len(), cols, data)
    }

    pub fn from_int_rows(field: F, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let conv: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
            .collect();
        Self::from_rows(field, &conv, cols)
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_data(field, rows, cols, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: F, len: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..len {
                m.data[i * cols.len() + j] = c[i];
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u64] {
        &self.data
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.field.clone(), self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let ot = o.transpose();
        let mut out = Self::zeros(self.field.clone(), self.rows, o.cols);
        for i in 0..self.rows {
            let r = self.row(i);
            for j in 0..o.cols {
                out.data[i * o.cols + j] = self.field.dot(r, ot.row(j));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    /// `v^T A`
    pub fn vec_mul(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a != 0 {
                self.field.axpy(&mut out, a, self.row(i));
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Self::from_data(f.clone(), self.rows, self.cols, data)
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Self::from_data(f.clone(), self.rows, self.cols, data)
    }

    pub fn scale(&self, a: u64) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|&x| f.mul(a, x)).collect();
        Self::from_data(f.clone(), self.rows, self.cols, data)
    }

    /// `self += a * o`
    pub fn add_scaled(&mut self, a: u64, o: &Self) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = self.field.clone();
        f.axpy(&mut self.data, a, &o.data);
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.field.clone(), self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> u64 {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.field.clone(), rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.field.clone(), self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            m.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            m.row_mut(i)[self.cols..].copy_from_slice(o.row(i));
        }
        m
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Self::from_data(self.field.clone(), self.rows + o.rows, self.cols, data)
    }

    /// Reinterprets entries in a field containing this one (same packing).
    pub fn embed<G: Field>(&self, g: &G) -> Matrix<G> {
        Matrix::from_data(g.clone(), self.rows, self.cols, self.data.clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Row `dst -= a * row src`, starting from column `from`.
    fn row_sub(&mut self, dst: usize, src: usize, a: u64, from: usize) {
        let c = self.cols;
        let na = self.field.neg(a);
        let (s, d) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * c);
            (&lo[src * c + from..src * c + c], &mut hi[from..c])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * c);
            (&hi[from..c], &mut lo[dst * c + from..dst * c + c])
        };
        self.field.axpy(d, na, s);
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, col) != 0) else {
                continue;
            };
            self.swap_rows(r, piv);
            let inv = self.field.inv(self.get(r, col)).unwrap();
            let f = self.field.clone();
            f.scale(&mut self.row_mut(r)[col..], inv);
            for i in 0..self.rows {
                if i != r {
                    let a = self.get(i, col);
                    if a != 0 {
                        self.row_sub(i, r, a, col);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right kernel `{v : A v = 0}`.
    pub fn kernel(&self) -> Subspace<F> {
        let (r, pivots) = self.rref();
        let mut is_piv = vec![false; self.cols];
        for &p in &pivots {
            is_piv[p] = true;
        }
        let mut vecs = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_piv[j]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = self.field.neg(r.get(i, free));
            }
            vecs.push(v);
        }
        Subspace::from_vectors(self.field.clone(), self.cols, vecs)
    }

    /// Column space.
    pub fn image(&self) -> Subspace<F> {
        Subspace::from_rows(self.transpose())
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(self.field.clone(), n));
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.submatrix(&rows, &cols))
    }

    /// Some `X` with `A X = B`, if one exists.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows);
        let aug = self.hstack(b);
        let (r, piv) = aug.rref();
        if piv.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.field.clone(), self.cols, b.cols);
        for (i, &p) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, r.get(i, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn det(&self) -> Result<u64> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = 1u64;
        for col in 0..m.cols {
            let Some(piv) = (col..m.rows).find(|&i| m.get(i, col) != 0) else {
                return Ok(0);
            };
            if piv != col {
                m.swap_rows(piv, col);
                det = f.neg(det);
            }
            let a = m.get(col, col);
            det = f.mul(det, a);
            let inv = f.inv(a).unwrap();
            for i in col + 1..m.rows {
                let b = m.get(i, col);
                if b != 0 {
                    m.row_sub(i, col, f.mul(b, inv), col);
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(x - A)` via Hessenberg reduction.
    pub fn charpoly(&self) -> Result<Poly<F>> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.clone();
        for m in 0..n.saturating_sub(2) {
            let Some(i) = (m + 1..n).find(|&i| h.get(i, m) != 0) else {
                continue;
            };
            if i != m + 1 {
                h.swap_rows(i, m + 1);
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m + 1);
                }
            }
            let inv = f.inv(h.get(m + 1, m)).unwrap();
            for i in m + 2..n {
                let u = f.mul(h.get(i, m), inv);
                if u == 0 {
                    continue;
                }
                h.row_sub(i, m + 1, u, 0);
                for r in 0..n {
                    let v = f.add(h.get(r, m + 1), f.mul(u, h.get(r, i)));
                    h.set(r, m + 1, v);
                }
            }
        }
        // p_k is the charpoly of the leading k x k block.
        let mut ps: Vec<Poly<F>> = vec![Poly::one(f.clone())];
        for k in 1..=n {
            let a = h.get(k - 1, k - 1);
            let lin = Poly::new(f.clone(), vec![f.neg(a), 1]);
            let mut pk = lin.mul(&ps[k - 1]);
            let mut t = 1u64;
            for i in 1..k {
                t = f.mul(t, h.get(k - i, k - i - 1));
                let c = f.mul(t, h.get(k - i - 1, k - 1));
                if c != 0 {
                    pk = pk.sub(&ps[k - i - 1].scale(c));
                }
            }
            ps.push(pk);
        }
        Ok(ps.pop().unwrap())
    }

    /// `g(A)` by Horner's rule.
    pub fn eval_poly(&self, g: &Poly<F>) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(self.field.clone(), n, n);
        for &c in g.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self.mul(o) == o.mul(self)
    }
}

/// A subspace of `F^n`, held as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn from_rows(m: Matrix<F>) -> Self {
        let (r, pivots) = m.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let all: Vec<usize> = (0..m.cols()).collect();
        Subspace {
            basis: r.submatrix(&keep, &all),
            pivots,
        }
    }

    pub fn from_vectors(field: F, n: usize, vecs: Vec<Vec<u64>>) -> Self {
        Self::from_rows(Matrix::from_rows(field, &vecs, n))
    }

    pub fn zero(field: F, n: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, n),
            pivots: vec![],
        }
    }

    pub fn full(field: F, n: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, n),
            pivots: (0..n).collect(),
        }
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the echelon basis.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field();
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let a = r[p];
            if a != 0 {
                f.axpy(&mut r, f.neg(a), self.basis.row(i));
            }
        }
        r
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, o: &Self) -> bool {
        (0..o.dim()).all(|i| self.contains(o.basis.row(i)))
    }

    /// Coordinates with respect to the echelon basis.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p]).collect())
    }

    pub fn sum(&self, o: &Self) -> Self {
        Self::from_rows(self.basis.vstack(&o.basis))
    }

    pub fn intersection(&self, o: &Self) -> Self {
        let f = self.field().clone();
        let stacked = self.basis.vstack(&o.basis);
        let left = stacked.transpose().kernel();
        let d = self.dim();
        let vecs: Vec<Vec<u64>> = (0..left.dim())
            .map(|i| {
                let x = &left.basis.row(i)[..d];
                self.basis.vec_mul(x)
            })
            .collect();
        Self::from_vectors(f, self.ambient_dim(), vecs)
    }

    /// Image under `A` acting on column vectors.
    pub fn image_under(&self, a: &Matrix<F>) -> Self {
        let vecs = (0..self.dim()).map(|i| a.mul_vec(self.basis.row(i))).collect();
        Self::from_vectors(self.field().clone(), a.rows(), vecs)
    }

    pub fn is_invariant(&self, a: &Matrix<F>) -> bool {
        (0..self.dim()).all(|i| self.contains(&a.mul_vec(self.basis.row(i))))
    }

    /// Matrix of `A|_{self}` in the echelon basis (`A` must preserve `self`).
    pub fn restrict(&self, a: &Matrix<F>) -> Matrix<F> {
        let d = self.dim();
        let mut m = Matrix::zeros(self.field().clone(), d, d);
        for j in 0..d {
            let w = a.mul_vec(self.basis.row(j));
            for (i, &p) in self.pivots.iter().enumerate() {
                m.set(i, j, w[p]);
            }
        }
        m
    }

    pub fn embed<G: Field>(&self, g: &G) -> Subspace<G> {
        Subspace {
            basis: self.basis.embed(g),
            pivots: self.pivots.clone(),
        }
    }
}

/// `F^n -> F^n / W` with a basis of unit vectors at the non-pivot columns.
#[derive(Clone, Debug)]
pub struct QuotientMap<F: Field> {
    /// Column indices whose unit vectors lift the quotient basis.
    pub lift_indices: Vec<usize>,
    /// `(n - dim W) x n`
    pub project: Matrix<F>,
}

impl<F: Field> QuotientMap<F> {
    pub fn new(sub: &Subspace<F>) -> Self {
        let f = sub.field().clone();
        let n = sub.ambient_dim();
        let mut piv_row = vec![usize::MAX; n];
        for (i, &p) in sub.pivots().iter().enumerate() {
            piv_row[p] = i;
        }
        let lift: Vec<usize> = (0..n).filter(|&j| piv_row[j] == usize::MAX).collect();
        let mut pos = vec![usize::MAX; n];
        for (k, &j) in lift.iter().enumerate() {
            pos[j] = k;
        }
        let mut project = Matrix::zeros(f.clone(), lift.len(), n);
        for j in 0..n {
            if pos[j] != usize::MAX {
                project.set(pos[j], j, 1);
            } else {
                let row = sub.basis().row(piv_row[j]);
                for (k, &l) in lift.iter().enumerate() {
                    project.set(k, j, f.neg(row[l]));
                }
            }
        }
        QuotientMap {
            lift_indices: lift,
            project,
        }
    }

    pub fn dim(&self) -> usize {
        self.lift_indices.len()
    }

    pub fn project(&self, v: &[u64]) -> Vec<u64> {
        self.project.mul_vec(v)
    }

    pub fn lift(&self, k: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.project.cols()];
        v[self.lift_indices[k]] = 1;
        v
    }

    /// Matrix on the quotient of an endomorphism preserving `W`.
    pub fn induced(&self, a: &Matrix<F>) -> Matrix<F> {
        let d = self.dim();
        let mut m = Matrix::zeros(self.project.field().clone(), d, d);
        for k in 0..d {
            let col = a.column(self.lift_indices[k]);
            let img = self.project(&col);
            for i in 0..d {
                m.set(i, k, img[i]);
            }
        }
        m
    }
}
