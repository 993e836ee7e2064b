//! Dense complex matrices, Rayleigh and Haar samplers, and the spectral
//! routines (SVD, ordered eigenvalues, log-determinants) used by every
//! channel model in the crate.
//!
//! Matrices are small (antenna counts of at most eight or so), so everything
//! is a thin layer over `nalgebra`'s dynamically sized matrices.

use nalgebra::{Cholesky, DMatrix, SVD};
use num_complex::Complex64;

use crate::error::{DmtError, Result};
use crate::rng::SimRng;

/// Orthonormality tolerance for unitary checks and SVD factors.
pub const UNITARY_TOL: f64 = 1e-10;

/// Dense complex matrix with at least one row and one column.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dims(rows, cols)?;
        if entries.len() != rows * cols {
            return Err(DmtError::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, &entries),
        })
    }

    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_nalgebra(inner: DMatrix<Complex64>) -> Result<Self> {
        check_dims(inner.nrows(), inner.ncols())?;
        Ok(Self { inner })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dims(rows, cols)?;
        Ok(Self {
            inner: DMatrix::zeros(rows, cols),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_dims(n, n)?;
        Ok(Self {
            inner: DMatrix::identity(n, n),
        })
    }

    pub fn scalar(value: Complex64) -> Self {
        Self {
            inner: DMatrix::from_element(1, 1, value),
        }
    }

    /// Rectangular matrix with `diag` on its main diagonal.
    pub fn from_real_diagonal(rows: usize, cols: usize, diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        if diag.len() > rows.min(cols) {
            return Err(DmtError::Dimension(format!(
                "{} diagonal entries do not fit a {rows}x{cols} matrix",
                diag.len()
            )));
        }
        for (i, &d) in diag.iter().enumerate() {
            m.inner[(i, i)] = Complex64::new(d, 0.0);
        }
        Ok(m)
    }

    /// Assembles a matrix from a grid of blocks. Every block in a block row
    /// must share its height and every block in a block column its width.
    pub fn from_blocks(grid: &[Vec<&ComplexMatrix>]) -> Result<Self> {
        let first = grid
            .first()
            .ok_or_else(|| DmtError::Dimension("empty block grid".into()))?;
        let widths: Vec<usize> = first.iter().map(|b| b.cols()).collect();
        let mut heights = Vec::with_capacity(grid.len());
        for row in grid {
            if row.len() != widths.len() {
                return Err(DmtError::Dimension("ragged block grid".into()));
            }
            let h = row[0].rows();
            for (b, &w) in row.iter().zip(&widths) {
                if b.rows() != h || b.cols() != w {
                    return Err(DmtError::Dimension("inconsistent block sizes".into()));
                }
            }
            heights.push(h);
        }
        let total_rows: usize = heights.iter().sum();
        let total_cols: usize = widths.iter().sum();
        let mut out = DMatrix::zeros(total_rows, total_cols);
        let mut r0 = 0;
        for (row, &h) in grid.iter().zip(&heights) {
            let mut c0 = 0;
            for (b, &w) in row.iter().zip(&widths) {
                out.view_mut((r0, c0), (h, w)).copy_from(&b.inner);
                c0 += w;
            }
            r0 += h;
        }
        Ok(Self { inner: out })
    }

    pub fn block_diagonal(blocks: &[&ComplexMatrix]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(DmtError::Dimension("no diagonal blocks".into()));
        }
        let rows: usize = blocks.iter().map(|b| b.rows()).sum();
        let cols: usize = blocks.iter().map(|b| b.cols()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.view_mut((r0, c0), (b.rows(), b.cols()))
                .copy_from(&b.inner);
            r0 += b.rows();
            c0 += b.cols();
        }
        Ok(Self { inner: out })
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    /// Checked product `self * rhs`.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(DmtError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self {
            inner: &self.inner * &rhs.inner,
        })
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.rows() != rhs.rows() || self.cols() != rhs.cols() {
            return Err(DmtError::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self {
            inner: &self.inner + &rhs.inner,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            inner: self.inner.map(|z| z * factor),
        }
    }

    /// `A A^H`.
    pub fn outer_gram(&self) -> Self {
        Self {
            inner: &self.inner * self.inner.adjoint(),
        }
    }

    /// Squared Frobenius norm.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.inner.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Leading `count` columns.
    pub fn leading_columns(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.cols() {
            return Err(DmtError::Dimension(format!(
                "cannot take {count} leading columns of a matrix with {} columns",
                self.cols()
            )));
        }
        Ok(Self {
            inner: self.inner.columns(0, count).into_owned(),
        })
    }

    /// Largest absolute entry of `A^H A - I`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let gram = self.inner.adjoint() * &self.inner;
        let n = gram.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.rows() == self.cols() && self.orthonormality_deviation() <= tol
    }

    /// Largest absolute entry of `A - A^H`.
    pub fn hermitian_deviation(&self) -> f64 {
        if self.rows() != self.cols() {
            return f64::INFINITY;
        }
        (&self.inner - self.inner.adjoint())
            .iter()
            .fold(0.0, |acc: f64, z| acc.max(z.norm()))
    }

    pub fn determinant(&self) -> Result<Complex64> {
        if self.rows() != self.cols() {
            return Err(DmtError::Dimension("determinant of a non-square matrix".into()));
        }
        Ok(self.inner.clone().determinant())
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        (&self.inner - &other.inner)
            .iter()
            .fold(0.0, |acc: f64, z| acc.max(z.norm()))
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(DmtError::Dimension(format!(
            "matrix dimensions must be positive, got {rows}x{cols}"
        )));
    }
    Ok(())
}

fn check_finite(a: &ComplexMatrix) -> Result<()> {
    if !a.is_finite() {
        return Err(DmtError::Numeric("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Matrix of i.i.d. circularly symmetric complex Gaussians with unit
/// variance (half per real component).
pub fn sample_gaussian_channel(rows: usize, cols: usize, rng: &mut SimRng) -> Result<ComplexMatrix> {
    check_dims(rows, cols)?;
    let inner = DMatrix::from_fn(rows, cols, |_, _| rng.complex_gaussian());
    Ok(ComplexMatrix { inner })
}

/// Haar-distributed `p x p` unitary.
///
/// A complex Gaussian matrix is QR-factored and each column of `Q` is
/// rotated by the phase of the matching diagonal entry of `R`, which makes
/// the factorization unique and the law of `Q` invariant.
pub fn sample_haar_unitary(p: usize, rng: &mut SimRng) -> Result<ComplexMatrix> {
    sample_haar_frame(p, p, rng)
}

/// First `k` columns of a Haar unitary of size `p`: a uniformly distributed
/// orthonormal `p x k` frame.
pub fn sample_haar_frame(p: usize, k: usize, rng: &mut SimRng) -> Result<ComplexMatrix> {
    check_dims(p, k)?;
    if k > p {
        return Err(DmtError::Dimension(format!(
            "cannot draw {k} orthonormal columns in dimension {p}"
        )));
    }
    let z = sample_gaussian_channel(p, k, rng)?;
    let qr = z.inner.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..k {
        let d = r[(j, j)];
        let n = d.norm();
        let phase = if n > 0.0 { d / n } else { Complex64::new(1.0, 0.0) };
        for i in 0..p {
            q[(i, j)] *= phase;
        }
    }
    Ok(ComplexMatrix { inner: q })
}

/// Economy SVD `A = U diag(sigma) V^H` with non-increasing `sigma`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.sigma.len();
        let mut us = self.u.inner.clone();
        for j in 0..k {
            let s = self.sigma[j];
            for i in 0..us.nrows() {
                us[(i, j)] *= s;
            }
        }
        ComplexMatrix {
            inner: us * self.v.inner.adjoint(),
        }
    }
}

fn decompose(a: &ComplexMatrix, vectors: bool) -> Result<SVD<Complex64, nalgebra::Dyn, nalgebra::Dyn>> {
    check_finite(a)?;
    let mut svd = SVD::try_new(a.inner.clone(), vectors, vectors, f64::EPSILON, 0)
        .ok_or_else(|| DmtError::Numeric("SVD did not converge".into()))?;
    svd.sort_by_singular_values();
    Ok(svd)
}

/// Singular value decomposition. `u` is `rows x k` and `v` is `cols x k`
/// with `k = min(rows, cols)`.
pub fn svd(a: &ComplexMatrix) -> Result<SvdResult> {
    let dec = decompose(a, true)?;
    let u = dec
        .u
        .ok_or_else(|| DmtError::Numeric("SVD produced no left vectors".into()))?;
    let v_t = dec
        .v_t
        .ok_or_else(|| DmtError::Numeric("SVD produced no right vectors".into()))?;
    Ok(SvdResult {
        u: ComplexMatrix { inner: u },
        sigma: dec.singular_values.iter().copied().collect(),
        v: ComplexMatrix {
            inner: v_t.adjoint(),
        },
    })
}

/// Eigenvalues of `A^H A` restricted to the first `min(rows, cols)`, in
/// non-increasing order.
pub fn ordered_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let dec = decompose(a, false)?;
    Ok(dec.singular_values.iter().map(|s| s * s).collect())
}

/// `i`-th (1-based) ordered eigenvalue, zero beyond the stored rank.
pub fn eigenvalue_at(values: &[f64], i: usize) -> f64 {
    if i == 0 {
        return values.first().copied().unwrap_or(0.0);
    }
    values.get(i - 1).copied().unwrap_or(0.0)
}

/// nalgebra's complex Cholesky takes square roots of negative pivots
/// instead of failing, so definiteness is read off the factor's diagonal.
fn has_positive_real_diagonal(chol: &Cholesky<Complex64, nalgebra::Dyn>) -> bool {
    let l = chol.l_dirty();
    (0..l.nrows()).all(|i| {
        let z = l[(i, i)];
        z.re > 0.0 && z.im.abs() <= 1e-12 * z.re
    })
}

/// `log2 |I + scale * A A^H N^{-1}|` with `N` the optional noise covariance
/// (identity when absent).
///
/// The noise is whitened with its Cholesky factor and the resulting Hermitian
/// positive-definite matrix is factored again, so the log-determinant is a
/// sum of logs of a triangular diagonal.
pub fn log_det_i_plus(scale: f64, a: &ComplexMatrix, noise_cov: Option<&ComplexMatrix>) -> Result<f64> {
    if !(scale >= 0.0) || !scale.is_finite() {
        return Err(DmtError::Domain(format!("scale must be finite and nonnegative, got {scale}")));
    }
    check_finite(a)?;
    if scale == 0.0 {
        return Ok(0.0);
    }
    let whitened = match noise_cov {
        None => a.inner.clone(),
        Some(n) => {
            if n.rows() != a.rows() || n.cols() != a.rows() {
                return Err(DmtError::Dimension(format!(
                    "noise covariance is {}x{} but the signal has {} rows",
                    n.rows(),
                    n.cols(),
                    a.rows()
                )));
            }
            check_finite(n)?;
            let scale_n = n.inner.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
            if n.hermitian_deviation() > 1e-10 * scale_n {
                return Err(DmtError::Numeric("noise covariance is not Hermitian".into()));
            }
            let chol = Cholesky::new(n.inner.clone())
                .filter(has_positive_real_diagonal)
                .ok_or_else(|| DmtError::Numeric("noise covariance is not positive definite".into()))?;
            chol.l_dirty()
                .solve_lower_triangular(&a.inner)
                .ok_or_else(|| DmtError::Numeric("singular noise factor".into()))?
        }
    };
    let gram = if whitened.nrows() <= whitened.ncols() {
        &whitened * whitened.adjoint()
    } else {
        whitened.adjoint() * &whitened
    };
    let k = gram.nrows();
    let m = DMatrix::<Complex64>::identity(k, k) + gram * Complex64::new(scale, 0.0);
    let chol = Cholesky::new(m)
        .filter(has_positive_real_diagonal)
        .ok_or_else(|| DmtError::Numeric("I + scale*A*A^H lost definiteness".into()))?;
    let l = chol.l_dirty();
    let mut total = 0.0;
    for i in 0..k {
        total += l[(i, i)].re.log2();
    }
    Ok(2.0 * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Laplace expansion; only for small test matrices.
    fn cofactor_det(m: &[Vec<Complex64>]) -> Complex64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut total = c(0.0, 0.0);
        for j in 0..n {
            let minor: Vec<Vec<Complex64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += m[0][j] * cofactor_det(&minor) * sign;
        }
        total
    }

    fn rows_of(a: &ComplexMatrix) -> Vec<Vec<Complex64>> {
        (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j)).collect()).collect()
    }

    #[test]
    fn gaussian_shape_and_zero_dims() {
        let mut rng = SimRng::from_seed(1);
        let h = sample_gaussian_channel(2, 3, &mut rng).unwrap();
        assert_eq!((h.rows(), h.cols()), (2, 3));
        assert!(matches!(sample_gaussian_channel(0, 3, &mut rng), Err(DmtError::Dimension(_))));
        assert!(matches!(sample_gaussian_channel(2, 0, &mut rng), Err(DmtError::Dimension(_))));
    }

    #[test]
    fn gaussian_scalar_unit_power() {
        let mut rng = SimRng::from_seed(11);
        let n = 1_000_000;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += sample_gaussian_channel(1, 1, &mut rng).unwrap().frobenius_norm_sq();
        }
        let mean = acc / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean |h|^2 = {mean}");
    }

    #[test]
    fn gaussian_3x3_total_power() {
        let mut rng = SimRng::from_seed(12);
        let n = 1_000_000;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += sample_gaussian_channel(3, 3, &mut rng).unwrap().frobenius_norm_sq();
        }
        let mean = acc / n as f64;
        assert!((mean - 9.0).abs() < 0.09, "mean ||H||^2 = {mean}");
    }

    #[test]
    fn haar_scalar_has_unit_modulus() {
        let mut rng = SimRng::from_seed(3);
        for _ in 0..100 {
            let t = sample_haar_unitary(1, &mut rng).unwrap();
            assert!((t.get(0, 0).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_is_unitary_with_unit_determinant() {
        let mut rng = SimRng::from_seed(4);
        for _ in 0..200 {
            let t = sample_haar_unitary(3, &mut rng).unwrap();
            assert!(t.is_unitary(UNITARY_TOL));
            assert!((t.determinant().unwrap().norm() - 1.0).abs() < 1e-10);
        }
        assert!(matches!(sample_haar_unitary(0, &mut rng), Err(DmtError::Dimension(_))));
    }

    #[test]
    fn haar_first_moment() {
        let mut rng = SimRng::from_seed(5);
        let n = 1_000_000;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += sample_haar_unitary(4, &mut rng).unwrap().get(0, 0).norm_sqr();
        }
        let mean = acc / n as f64;
        assert!((mean - 0.25).abs() < 0.25 * 0.02, "E|theta_11|^2 = {mean}");
    }

    #[test]
    fn haar_frame_is_orthonormal() {
        let mut rng = SimRng::from_seed(6);
        let f = sample_haar_frame(5, 2, &mut rng).unwrap();
        assert_eq!((f.rows(), f.cols()), (5, 2));
        assert!(f.orthonormality_deviation() < UNITARY_TOL);
        assert!(sample_haar_frame(2, 3, &mut rng).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let d = ComplexMatrix::from_real_diagonal(2, 2, &[2.0, 1.0]).unwrap();
        assert_eq!(ordered_eigenvalues(&d).unwrap(), vec![4.0, 1.0]);
        let z = ComplexMatrix::zeros(3, 2).unwrap();
        assert_eq!(ordered_eigenvalues(&z).unwrap(), vec![0.0, 0.0]);
        assert_eq!(eigenvalue_at(&[4.0, 1.0], 3), 0.0);
        assert_eq!(eigenvalue_at(&[4.0, 1.0], 2), 1.0);
    }

    #[test]
    fn eigenvalue_product_matches_cofactor_determinant() {
        let mut rng = SimRng::from_seed(8);
        for _ in 0..100 {
            let a = sample_gaussian_channel(3, 3, &mut rng).unwrap();
            let prod: f64 = ordered_eigenvalues(&a).unwrap().iter().product();
            let det = cofactor_det(&rows_of(&a)).norm_sqr();
            assert!((prod - det).abs() <= 1e-8 * det.max(1e-300), "{prod} vs {det}");
        }
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let a = ComplexMatrix::from_row_major(1, 2, vec![c(f64::NAN, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(ordered_eigenvalues(&a), Err(DmtError::Numeric(_))));
        assert!(matches!(svd(&a), Err(DmtError::Numeric(_))));
    }

    #[test]
    fn svd_examples() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(svd(&i2).unwrap().sigma, vec![1.0, 1.0]);
        let d = ComplexMatrix::from_real_diagonal(2, 2, &[3.0, 0.0]).unwrap();
        assert_eq!(svd(&d).unwrap().sigma, vec![3.0, 0.0]);
    }

    #[test]
    fn svd_matches_eigenvalues_on_tall_matrices() {
        let mut rng = SimRng::from_seed(9);
        for _ in 0..100 {
            let a = sample_gaussian_channel(4, 2, &mut rng).unwrap();
            let s = svd(&a).unwrap();
            let ev = ordered_eigenvalues(&a).unwrap();
            for (sv, e) in s.sigma.iter().zip(&ev) {
                assert!((sv - e.sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn log_det_examples() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert!((log_det_i_plus(1.0, &i2, None).unwrap() - 2.0).abs() < 1e-12);
        let one = ComplexMatrix::scalar(c(1.0, 0.0));
        let two = ComplexMatrix::scalar(c(2.0, 0.0));
        let v = log_det_i_plus(3.0, &one, Some(&two)).unwrap();
        assert!((v - 2.5_f64.log2()).abs() < 1e-12);
        let mut rng = SimRng::from_seed(10);
        let a = sample_gaussian_channel(3, 2, &mut rng).unwrap();
        assert_eq!(log_det_i_plus(0.0, &a, None).unwrap(), 0.0);
    }

    #[test]
    fn log_det_rejects_bad_noise() {
        let one = ComplexMatrix::scalar(c(1.0, 0.0));
        let neg = ComplexMatrix::scalar(c(-1.0, 0.0));
        assert!(matches!(log_det_i_plus(1.0, &one, Some(&neg)), Err(DmtError::Numeric(_))));
        let skew = ComplexMatrix::from_real_row_major(2, 2, &[2.0, 1.0, 0.0, 2.0]).unwrap();
        let a = ComplexMatrix::identity(2).unwrap();
        assert!(matches!(log_det_i_plus(1.0, &a, Some(&skew)), Err(DmtError::Numeric(_))));
        assert!(matches!(log_det_i_plus(-1.0, &a, None), Err(DmtError::Domain(_))));
    }

    #[test]
    fn log_det_matches_cofactor_oracle() {
        let mut rng = SimRng::from_seed(13);
        for _ in 0..50 {
            let a = sample_gaussian_channel(3, 2, &mut rng).unwrap();
            let b = sample_gaussian_channel(3, 3, &mut rng).unwrap();
            let noise = ComplexMatrix::identity(3).unwrap().add(&b.outer_gram()).unwrap();
            let s = 2.7;
            // |I + s A A^H N^-1| = |N + s A A^H| / |N|
            let num = noise.add(&a.outer_gram().scale(s)).unwrap();
            let expected = (cofactor_det(&rows_of(&num)).re / cofactor_det(&rows_of(&noise)).re).log2();
            let got = log_det_i_plus(s, &a, Some(&noise)).unwrap();
            assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
        }
    }

    #[test]
    fn block_assembly() {
        let a = ComplexMatrix::identity(2).unwrap();
        let z = ComplexMatrix::zeros(2, 2).unwrap();
        let m = ComplexMatrix::from_blocks(&[vec![&a, &z], vec![&a, &a]]).unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 4));
        assert_eq!(m.get(2, 0), c(1.0, 0.0));
        assert_eq!(m.get(0, 2), c(0.0, 0.0));
        let d = ComplexMatrix::block_diagonal(&[&a, &ComplexMatrix::scalar(c(5.0, 0.0))]).unwrap();
        assert_eq!(d.get(2, 2), c(5.0, 0.0));
        assert_eq!(d.get(0, 2), c(0.0, 0.0));
    }
}
