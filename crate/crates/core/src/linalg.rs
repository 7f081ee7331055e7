//! Dense linear algebra kernel: symmetric eigendecomposition (cyclic Jacobi),
//! linear solves (LU with partial pivoting), minimum-norm least squares and
//! spectral helpers.
//!
//! Everything here is desk-scale dense arithmetic over `f64`; matrices are
//! value types with row-major storage.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Condition-estimate limit for [`solve_linear`].
pub const COND_LIMIT: f64 = 1e12;

/// Relative cutoff under which eigenvalues of a Gram matrix are treated as
/// zero by the pseudoinverse.
const PINV_CUTOFF: f64 = 1e-12;

/// Dense row-major matrix of `f64` entries, finite by construction.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl core::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Matrix({}x{})", self.rows, self.cols)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from row-major data, rejecting non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Config("matrix dimensions must be positive".to_string()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::Config("matrix needs at least one row".to_string()));
        }
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Matrix::from_vec(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self^T * x` without forming the transpose.
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "tr_matvec length mismatch");
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.get(i, j) * xi;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| math::max(m, math::abs(*v)))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if math::abs(self.get(i, j) - self.get(j, i)) > tol {
                    return false;
                }
            }
        }
        true
    }

    /// `(A + A^T) / 2`; callers use it to guard symmetric kernels against
    /// representation noise.
    pub fn symmetrized(&self) -> Matrix {
        assert_eq!(self.rows, self.cols, "symmetrized needs a square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        out
    }

    /// Gram matrix `self^T * self`.
    pub fn gram(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for a in 0..self.cols {
                let ra = row[a];
                if ra == 0.0 {
                    continue;
                }
                for b in 0..self.cols {
                    out.data[a * self.cols + b] += ra * row[b];
                }
            }
        }
        out
    }

    /// Outer Gram matrix `self * self^T`.
    pub fn gram_outer(&self) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.rows);
        for a in 0..self.rows {
            for b in a..self.rows {
                let v = self.row(a).iter().zip(self.row(b)).map(|(x, y)| x * y).sum();
                out.set(a, b, v);
                out.set(b, a, v);
            }
        }
        out
    }
}

fn check_finite(v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Returns eigenvalues in ascending order; when `want_vectors` is set, also
/// the orthonormal eigenvector matrix (columns matching the value order).
fn jacobi_eigen(a: &Matrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Matrix>)> {
    let n = a.rows();
    check_finite(a.data())?;
    let mut m = a.symmetrized();
    let mut v = want_vectors.then(|| Matrix::identity(n));

    if n == 1 {
        return Ok((vec![m.get(0, 0)], v));
    }

    let scale = math::max(m.max_abs(), 1.0);
    let tol = 1e-15 * scale;
    const MAX_SWEEPS: usize = 64;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                off = math::max(off, math::abs(m.get(p, q)));
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if math::abs(apq) <= tol * 1e-2 {
                    continue;
                }
                // symmetric Schur 2x2 rotation (Golub & Van Loan)
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + math::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + math::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;

                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                m.set(p, q, 0.0);
                m.set(q, p, 0.0);

                if let Some(vm) = v.as_mut() {
                    for k in 0..n {
                        let vkp = vm.get(k, p);
                        let vkq = vm.get(k, q);
                        vm.set(k, p, c * vkp - s * vkq);
                        vm.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).partial_cmp(&m.get(j, j)).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| m.get(i, i)).collect();
    let vecs = v.map(|vm| {
        let mut out = Matrix::zeros(n, n);
        for (newcol, &oldcol) in order.iter().enumerate() {
            for r in 0..n {
                out.set(r, newcol, vm.get(r, oldcol));
            }
        }
        out
    });
    Ok((vals, vecs))
}

/// Eigenvalues of a symmetric matrix, ascending.
///
/// The input is symmetrized defensively; entries must be finite.
pub fn sym_eigvals(a: &Matrix) -> Result<Vec<f64>> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch { expected: a.rows(), got: a.cols() });
    }
    jacobi_eigen(a, false).map(|(vals, _)| vals)
}

/// Full symmetric eigendecomposition: ascending eigenvalues and the matrix
/// whose columns are the matching orthonormal eigenvectors.
pub fn sym_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch { expected: a.rows(), got: a.cols() });
    }
    let (vals, vecs) = jacobi_eigen(a, true)?;
    Ok((vals, vecs.expect("vectors requested")))
}

/// Eigenvalues of the product `s1 * s2` of two symmetric positive definite
/// matrices, ascending.
///
/// The product of two SPD matrices has real positive eigenvalues; they are
/// computed through the similar symmetric matrix `s2^{1/2} * s1 * s2^{1/2}`,
/// avoiding any general nonsymmetric eigensolver.
pub fn eigvals_spd_product(s1: &Matrix, s2: &Matrix) -> Result<Vec<f64>> {
    if s1.rows() != s1.cols() || s2.rows() != s2.cols() || s1.rows() != s2.rows() {
        return Err(Error::DimensionMismatch { expected: s1.rows(), got: s2.rows() });
    }
    let s1_vals = sym_eigvals(s1)?;
    if s1_vals[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: s1_vals[0] });
    }
    let (s2_vals, s2_vecs) = sym_eigen(s2)?;
    if s2_vals[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: s2_vals[0] });
    }
    let n = s2.rows();
    // s2^{1/2} = V diag(sqrt(lambda)) V^T
    let mut half = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += s2_vecs.get(i, k) * math::sqrt(s2_vals[k]) * s2_vecs.get(j, k);
            }
            half.set(i, j, acc);
            half.set(j, i, acc);
        }
    }
    let m = half.matmul(s1).matmul(&half);
    sym_eigvals(&m.symmetrized())
}

/// Solves `a * x = b` by LU factorization with partial pivoting.
///
/// Rejects exactly singular systems and systems whose diagonal-growth
/// condition estimate exceeds [`COND_LIMIT`].
pub fn solve_linear(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.cols() });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    check_finite(a.data())?;
    check_finite(b)?;

    let mut lu = a.clone();
    let mut x: Vec<f64> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for col in 0..n {
        let mut pivot = col;
        let mut best = math::abs(lu.get(col, col));
        for r in (col + 1)..n {
            let v = math::abs(lu.get(r, col));
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best == 0.0 {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                let tmp = lu.get(col, j);
                lu.set(col, j, lu.get(pivot, j));
                lu.set(pivot, j, tmp);
            }
            perm.swap(col, pivot);
            x.swap(col, pivot);
        }
        let d = lu.get(col, col);
        for r in (col + 1)..n {
            let f = lu.get(r, col) / d;
            if f != 0.0 {
                lu.set(r, col, f);
                for j in (col + 1)..n {
                    lu.set(r, j, lu.get(r, j) - f * lu.get(col, j));
                }
                x[r] -= f * x[col];
            }
        }
    }

    // cheap conditioning proxy from the U diagonal spread
    let mut dmax = 0.0f64;
    let mut dmin = f64::INFINITY;
    for i in 0..n {
        let d = math::abs(lu.get(i, i));
        dmax = math::max(dmax, d);
        dmin = if d < dmin { d } else { dmin };
    }
    if dmin == 0.0 {
        return Err(Error::Singular);
    }
    let cond_estimate = dmax / dmin;
    if cond_estimate > COND_LIMIT {
        return Err(Error::IllConditioned { cond_estimate });
    }

    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in (i + 1)..n {
            acc -= lu.get(i, j) * x[j];
        }
        x[i] = acc / lu.get(i, i);
    }
    Ok(x)
}

/// Minimum-Euclidean-norm minimizer of `(1/2) * ||y - h x||^2`
/// (the pseudoinverse solution), handling rank deficiency.
pub fn min_norm_lstsq(h: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != h.rows() {
        return Err(Error::DimensionMismatch { expected: h.rows(), got: y.len() });
    }
    check_finite(h.data())?;
    check_finite(y)?;
    // Work on the smaller Gram matrix; both routes yield the pseudoinverse
    // solution: h^+ = h^T (h h^T)^+ = (h^T h)^+ h^T.
    if h.rows() <= h.cols() {
        let g = h.gram_outer();
        let z = pinv_apply(&g, y)?;
        Ok(h.tr_matvec(&z))
    } else {
        let g = h.gram();
        let b = h.tr_matvec(y);
        pinv_apply(&g, &b)
    }
}

/// Applies the pseudoinverse of a symmetric PSD matrix to a vector via its
/// eigendecomposition, zeroing modes below the relative cutoff.
fn pinv_apply(g: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let (vals, vecs) = sym_eigen(g)?;
    let n = g.rows();
    let cutoff = vals.last().map(|v| v * PINV_CUTOFF).unwrap_or(0.0);
    let mut out = vec![0.0; n];
    for k in 0..n {
        if vals[k] <= cutoff || vals[k] <= 0.0 {
            continue;
        }
        let mut proj = 0.0;
        for i in 0..n {
            proj += vecs.get(i, k) * b[i];
        }
        let scale = proj / vals[k];
        for (i, o) in out.iter_mut().enumerate() {
            *o += vecs.get(i, k) * scale;
        }
    }
    Ok(out)
}

/// Largest eigenvalue of `h^T h`, i.e. the squared largest singular value
/// of `h`.
pub fn gram_lambda_max(h: &Matrix) -> Result<f64> {
    check_finite(h.data())?;
    let g = if h.rows() <= h.cols() { h.gram_outer() } else { h.gram() };
    let vals = sym_eigvals(&g)?;
    Ok(math::max(*vals.last().expect("nonempty spectrum"), 0.0))
}

/// Euclidean norm.
pub fn norm(v: &[f64]) -> f64 {
    math::sqrt(v.iter().map(|x| x * x).sum())
}

/// Largest absolute entry difference between two equal-length slices.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| math::max(m, math::abs(x - y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // frozen reference: random symmetric 8x8 (entries rounded to 1e-6) and
    // its eigenvalues from an independent dense eigensolver
    const SYM8: [[f64; 8]; 8] = [
        [0.304717, -0.528393, 0.559601, 0.256118, -1.231639, -0.279463, 0.403377, -0.295692],
        [-0.528393, -0.853044, -0.039742, 0.212829, -0.373871, 0.835198, 0.267544, 0.317824],
        [0.559601, -0.039742, 0.87845, 0.241192, 0.215559, -0.67322, 0.75583, -0.51018],
        [0.256118, 0.212829, 0.241192, 0.365444, 0.770852, 0.331491, 1.386468, 0.280932],
        [-1.231639, -0.373871, 0.215559, 0.770852, -0.113947, -0.361735, -1.140819, -0.516138],
        [-0.279463, 0.835198, -0.67322, 0.331491, -0.361735, 0.218689, 0.275879, -0.055645],
        [0.403377, 0.267544, 0.75583, 1.386468, -1.140819, 0.275879, -0.470373, -0.238062],
        [-0.295692, 0.317824, -0.51018, 0.280932, -0.516138, -0.055645, -0.238062, 0.586222],
    ];
    const SYM8_EIGVALS: [f64; 8] = [
        -2.6889386317020474,
        -1.5385770581964282,
        -0.90882982023297,
        -0.010057880345631522,
        0.5607449006109911,
        1.3596977512936903,
        1.7842216757576272,
        2.3578970628147675,
    ];

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
        let data: Vec<f64> = (0..rows * cols)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        Matrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn eigvals_identity() {
        let vals = sym_eigvals(&Matrix::identity(3)).unwrap();
        assert_eq!(vals, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn eigvals_hand_2x2() {
        // [[2,1],[1,2]] has characteristic roots 1 and 3
        let vals = sym_eigvals(&mat(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert!((vals[0] - 1.0).abs() <= 1e-12);
        assert!((vals[1] - 3.0).abs() <= 1e-12);
    }

    #[test]
    fn eigvals_diagonal_sorted_exact() {
        let vals = sym_eigvals(&mat(&[&[0.7, 0.0], &[0.0, 0.2]])).unwrap();
        assert_eq!(vals, vec![0.2, 0.7]);
    }

    #[test]
    fn eigvals_frozen_8x8() {
        let rows: Vec<&[f64]> = SYM8.iter().map(|r| &r[..]).collect();
        let vals = sym_eigvals(&mat(&rows)).unwrap();
        for (got, want) in vals.iter().zip(SYM8_EIGVALS) {
            assert!((got - want).abs() <= 1e-9, "got {got}, want {want}");
        }
    }

    #[test]
    fn eigvals_rejects_non_finite() {
        let m = Matrix { rows: 2, cols: 2, data: vec![1.0, f64::NAN, f64::NAN, 1.0] };
        assert_eq!(sym_eigvals(&m), Err(Error::NonFinite));
    }

    #[test]
    fn eigen_reconstructs_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2usize, 5, 9] {
            let a = random_matrix(&mut rng, n, n).symmetrized();
            let (vals, vecs) = sym_eigen(&a).unwrap();
            // A v_k = lambda_k v_k
            for k in 0..n {
                let col: Vec<f64> = (0..n).map(|i| vecs.get(i, k)).collect();
                let av = a.matvec(&col);
                for i in 0..n {
                    assert!((av[i] - vals[k] * col[i]).abs() <= 1e-10 * (1.0 + a.max_abs()));
                }
            }
            // orthonormal columns
            let vtv = vecs.transpose().matmul(&vecs);
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((vtv.get(i, j) - want).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn spd_product_diagonal() {
        let s1 = Matrix::identity(2);
        let s2 = mat(&[&[0.3, 0.0], &[0.0, 0.8]]);
        let vals = eigvals_spd_product(&s1, &s2).unwrap();
        assert!((vals[0] - 0.3).abs() <= 1e-12);
        assert!((vals[1] - 0.8).abs() <= 1e-12);
    }

    #[test]
    fn spd_product_hand_2x2() {
        // S1 = [[1,-0.5],[-0.5,1]] has eigenvalues {0.5, 1.5}
        let s1 = mat(&[&[1.0, -0.5], &[-0.5, 1.0]]);
        let vals = eigvals_spd_product(&s1, &Matrix::identity(2)).unwrap();
        assert!((vals[0] - 0.5).abs() <= 1e-12);
        assert!((vals[1] - 1.5).abs() <= 1e-12);
    }

    #[test]
    fn spd_product_rejects_indefinite_factor() {
        let s1 = mat(&[&[1.0, 0.0], &[0.0, -2.0]]);
        match eigvals_spd_product(&s1, &Matrix::identity(2)) {
            Err(Error::NotPositiveDefinite { min_eigenvalue }) => {
                assert!((min_eigenvalue + 2.0).abs() <= 1e-12);
            }
            other => panic!("expected NotPositiveDefinite, got {other:?}"),
        }
    }

    #[test]
    fn spd_product_positive_eigenvalues() {
        // random SPD pair: eigenvalues of the product stay strictly positive
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [2usize, 4, 7] {
            let a = random_matrix(&mut rng, n, n);
            let b = random_matrix(&mut rng, n, n);
            let mut s1 = a.gram();
            let mut s2 = b.gram();
            for i in 0..n {
                s1.set(i, i, s1.get(i, i) + 0.5);
                s2.set(i, i, s2.get(i, i) + 0.5);
            }
            let vals = eigvals_spd_product(&s1, &s2).unwrap();
            assert!(vals[0] > 1e-9, "min eigenvalue {}", vals[0]);
        }
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let b = vec![3.0, -1.0];
        assert_eq!(solve_linear(&Matrix::identity(2), &b).unwrap(), b);
        let a = mat(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let x = solve_linear(&a, &[2.0, 8.0]).unwrap();
        assert!((x[0] - 1.0).abs() <= 1e-14);
        assert!((x[1] - 2.0).abs() <= 1e-14);
    }

    #[test]
    fn solve_residual_random_20x20() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut a = random_matrix(&mut rng, 20, 20);
        for i in 0..20 {
            a.set(i, i, a.get(i, i) + 8.0); // keep it well conditioned
        }
        let b: Vec<f64> = (0..20).map(|_| rng.gen::<f64>() - 0.5).collect();
        let x = solve_linear(&a, &b).unwrap();
        let r: Vec<f64> = a.matvec(&x).iter().zip(&b).map(|(ax, bb)| ax - bb).collect();
        let bound = 1e-9 * (a.max_abs() * norm(&x) + norm(&b));
        assert!(norm(&r) <= bound, "residual {} > {}", norm(&r), bound);
    }

    #[test]
    fn solve_rejects_singular() {
        let a = mat(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let err = solve_linear(&a, &[1.0, 2.0]).unwrap_err();
        assert!(
            matches!(err, Error::Singular | Error::IllConditioned { .. }),
            "got {err:?}"
        );
    }

    #[test]
    fn solve_reports_condition_estimate() {
        let a = mat(&[&[1.0, 0.0], &[0.0, 1e-15]]);
        match solve_linear(&a, &[1.0, 1.0]) {
            Err(Error::IllConditioned { cond_estimate }) => assert!(cond_estimate > 1e12),
            other => panic!("expected IllConditioned, got {other:?}"),
        }
    }

    #[test]
    fn min_norm_picks_zero_free_coordinates() {
        let h = mat(&[&[1.0, 0.0, 0.0]]);
        let x = min_norm_lstsq(&h, &[2.0]).unwrap();
        assert!((x[0] - 2.0).abs() <= 1e-12);
        assert!(x[1].abs() <= 1e-12 && x[2].abs() <= 1e-12);
    }

    #[test]
    fn min_norm_square_full_rank() {
        let x = min_norm_lstsq(&Matrix::identity(2), &[3.0, 4.0]).unwrap();
        assert!((x[0] - 3.0).abs() <= 1e-12 && (x[1] - 4.0).abs() <= 1e-12);
    }

    #[test]
    fn min_norm_result_orthogonal_to_null_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let h = random_matrix(&mut rng, 2, 3);
            let y = vec![rng.gen::<f64>(), rng.gen::<f64>()];
            let x = min_norm_lstsq(&h, &y).unwrap();
            // for a full-rank 2x3 matrix the null space is spanned by the
            // cross product of the two rows (independent of the solver)
            let (r0, r1) = (h.row(0), h.row(1));
            let nvec = [
                r0[1] * r1[2] - r0[2] * r1[1],
                r0[2] * r1[0] - r0[0] * r1[2],
                r0[0] * r1[1] - r0[1] * r1[0],
            ];
            if norm(&nvec) < 1e-8 {
                continue; // degenerate draw
            }
            let dot: f64 = nvec.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!(dot.abs() <= 1e-10 * (1.0 + norm(&x)), "null-space leak {dot}");
        }
    }

    #[test]
    fn min_norm_satisfies_normal_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (rows, cols) in [(2usize, 3usize), (5, 3), (4, 4), (1, 6)] {
            let h = random_matrix(&mut rng, rows, cols);
            let y: Vec<f64> = (0..rows).map(|_| rng.gen::<f64>()).collect();
            let x = min_norm_lstsq(&h, &y).unwrap();
            let lhs = h.gram().matvec(&x);
            let rhs = h.tr_matvec(&y);
            assert!(max_abs_diff(&lhs, &rhs) <= 1e-9 * (1.0 + h.max_abs() * h.max_abs()));
        }
    }

    #[test]
    fn gram_lambda_max_examples() {
        assert!((gram_lambda_max(&Matrix::identity(3)).unwrap() - 1.0).abs() <= 1e-12);
        let two_i = mat(&[&[2.0, 0.0], &[0.0, 2.0]]);
        assert!((gram_lambda_max(&two_i).unwrap() - 4.0).abs() <= 1e-12);
        // [[1,1],[0,1]]: gram eigenvalues (3 +- sqrt(5)) / 2
        let h = mat(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let want = 2.618033988749895;
        assert!((gram_lambda_max(&h).unwrap() - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn gram_lambda_max_dominates_rayleigh_quotients() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let h = random_matrix(&mut rng, 4, 7);
        let lmax = gram_lambda_max(&h).unwrap();
        for _ in 0..100 {
            let v: Vec<f64> = (0..7).map(|_| rng.gen::<f64>() - 0.5).collect();
            let hv = h.matvec(&v);
            let q = hv.iter().map(|x| x * x).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
            assert!(lmax + 1e-9 >= q, "Rayleigh quotient {q} above lambda_max {lmax}");
        }
    }

    #[test]
    fn diag_eigvals_equal_sorted_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let n = 1 + rng.gen_range(0..8);
            let mut m = Matrix::zeros(n, n);
            let mut d: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
            for i in 0..n {
                m.set(i, i, d[i]);
            }
            let vals = sym_eigvals(&m).unwrap();
            d.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (got, want) in vals.iter().zip(&d) {
                assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn display_formats_are_stable() {
        let err = Error::DimensionMismatch { expected: 3, got: 5 };
        assert_eq!(format!("{err}"), "dimension mismatch: expected 3, got 5");
    }
}
