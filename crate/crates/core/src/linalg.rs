// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra for small matrices (dimension ≤ 16).
//!
//! Storage is row-major. Everything here is `O(n³)` straightforward code:
//! the largest operator in the crate is the 16×16 Liouvillian.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{re, Cx, Real};

const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_vec(rows, cols, data.iter().map(|&x| re(T::of(x))).collect())
    }

    pub fn from_diagonal(diag: &[Cx<T>]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { Complex::zero() })
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Cx<T>], v: &[Cx<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Projector `|u⟩⟨u|`.
    pub fn projector(u: &[Cx<T>]) -> Self {
        Self::outer(u, u)
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

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Cx<T>) -> Cx<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// `‖a − b‖_max`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// `‖h − h†‖_max`.
    pub fn hermitian_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * *b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(self
            .data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).fold(Complex::zero(), |acc, (a, b)| acc + *a * *b))
            .collect())
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// Column-stacking vectorization: `vec(ρ)[j·n + i] = ρ[i][j]`.
    pub fn vectorize(&self) -> Vec<Cx<T>> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    /// Inverse of [`ComplexMatrix::vectorize`] for an `n × n` matrix.
    pub fn unvectorize(v: &[Cx<T>], n: usize) -> Self {
        assert_eq!(v.len(), n * n);
        Self::from_fn(n, n, |i, j| v[j * n + i])
    }

    pub fn kron(&self, other: &Self) -> Self {
        kron(self, other)
    }

    /// Replaces the matrix by its Hermitian part `(h + h†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale_real(T::of(0.5))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Cx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

/// Matrix product. Panics on inner-dimension mismatch; use
/// [`ComplexMatrix::matmul`] for the fallible form.
impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs).expect("inner dimensions must agree")
    }
}

/// Kronecker product `a ⊗ b`; `a` is the major (left) factor.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    ComplexMatrix::from_fn(rows, cols, |i, j| a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)])
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| acc + v[(i, k)] * v[(j, k)].conj() * f(self.values[k]))
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|x| x)
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Sweeps until every off-diagonal magnitude is below `1e-14` (relative to
/// the matrix scale when that exceeds one) or 100 sweeps have run.
pub fn hermitian_eig<T: Real>(h: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch { expected: h.rows, found: h.cols });
    }
    let defect = h.hermitian_defect();
    if !(defect <= T::tol(1e-10)) {
        return Err(Error::NotHermitian { defect: defect.to_f64_lossy() });
    }
    let n = h.rows;
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::<T>::identity(n);
    let threshold = T::tol(1e-14) * a.max_abs().max(T::one());

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < threshold * T::of(1e-3) {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq, mag);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`: `a ← J† a J`, `v ← v J`.
///
/// `J` is a phase on column `q` (making `a[p][q]` real) followed by the real
/// rotation with `tan θ` the smaller root of `t² + 2τt − 1 = 0`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize, apq: Cx<T>, mag: T) {
    let n = a.rows;
    let phase = apq / mag;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (T::of(2.0) * mag);
    let t = if tau == T::zero() { T::one() } else { tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt()) };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    let jpp = re(c);
    let jpq = re(s);
    let jqp = phase.conj() * (-s);
    let jqq = phase.conj() * c;

    for m in [&mut *a, &mut *v] {
        for k in 0..n {
            let xp = m[(k, p)];
            let xq = m[(k, q)];
            m[(k, p)] = xp * jpp + xq * jqp;
            m[(k, q)] = xp * jpq + xq * jqq;
        }
    }
    for k in 0..n {
        let xp = a[(p, k)];
        let xq = a[(q, k)];
        a[(p, k)] = jpp.conj() * xp + jqp.conj() * xq;
        a[(q, k)] = jpq.conj() * xp + jqq.conj() * xq;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = re(a[(p, p)].re);
    a[(q, q)] = re(a[(q, q)].re);
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-1e-8, 0)` are clamped to zero; anything more negative is
/// rejected.
pub fn psd_sqrt<T: Real>(rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eig(rho)?;
    if let Some(&min) = eig.values.first() {
        if min < -T::tol(1e-8) {
            return Err(Error::NotPsd { eigenvalue: min.to_f64_lossy() });
        }
    }
    Ok(eig.reconstruct_with(|x| x.max(T::zero()).sqrt()))
}

/// Solves `a·x = b` by Gaussian elimination with partial pivoting.
pub fn solve_linear<T: Real>(a: &ComplexMatrix<T>, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols });
    }
    let n = a.rows;
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let scale = a.max_abs();
    let tiny = T::tol(1e-13) * scale;
    let mut m = a.clone();
    let mut x = b.to_vec();

    for col in 0..n {
        let (pivot_row, pivot_mag) =
            (col..n)
                .map(|r| (r, m[(r, col)].norm()))
                .fold((col, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot_mag >= tiny) || pivot_mag == T::zero() {
            return Err(Error::Singular { pivot: pivot_mag.to_f64_lossy() });
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot_row, j)];
                m[(pivot_row, j)] = tmp;
            }
            x.swap(col, pivot_row);
        }
        let pivot = m[(col, col)];
        for r in (col + 1)..n {
            let factor = m[(r, col)] / pivot;
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let sub = factor * m[(col, j)];
                m[(r, j)] -= sub;
            }
            let sub = factor * x[col];
            x[r] -= sub;
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for j in (col + 1)..n {
            acc -= m[(col, j)] * x[j];
        }
        x[col] = acc / m[(col, col)];
    }
    Ok(x)
}
