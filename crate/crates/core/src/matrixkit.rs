//! Dense complex linear algebra shared by every other module.
//!
//! Matrices are plain `nalgebra` dynamic matrices of `Complex64`. On top of
//! that this module provides:
//!
//! * an LU wrapper with a Hager/Higham 1-norm condition estimate, so callers
//!   can reject numerically singular systems instead of trusting a solve;
//! * fractional powers of Hermitian positive-definite matrices through a full
//!   eigendecomposition;
//! * completion of a row vector into a unitary right-singular frame;
//! * 1-based block selection mirroring `[A]_{rows, cols}` selectors;
//! * residual diagnostics for unitary-symmetric matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const J: Complex64 = Complex64::new(0.0, 1.0);

/// Relative Hermitian-asymmetry admitted by [`hermitian_power`].
pub const HERMITIAN_TOL: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.im)
}

/// Block-diagonal matrix `[[a, 0], [0, b]]`.
pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = CMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// 2x2 block matrix `[[a, b], [c, d]]`.
pub fn block2(a: &CMatrix, b: &CMatrix, cm: &CMatrix, d: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows());
    assert_eq!(cm.nrows(), d.nrows());
    assert_eq!(a.ncols(), cm.ncols());
    assert_eq!(b.ncols(), d.ncols());
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut out = CMatrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((0, c1), (r1, c2)).copy_from(b);
    out.view_mut((r1, 0), (r2, c1)).copy_from(cm);
    out.view_mut((r1, c1), (r2, c2)).copy_from(d);
    out
}

pub fn ensure_finite(m: &CMatrix, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `||a - b||_F / ||b||_F`, falling back to the absolute difference when `b` is zero.
pub fn rel_frobenius(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = (a - b).norm();
    let scale = b.norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Complex product computed as four real products, which lets the real
/// kernel's blocking do the work.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "matmul dimension mismatch");
    let (ar, ai) = (real_part(a), imag_part(a));
    let (br, bi) = (real_part(b), imag_part(b));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, c)
}

/// LU factorization with partial pivoting plus a cheap reciprocal condition
/// estimate in the 1-norm.
pub struct Lu {
    lu: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    norm1: f64,
    n: usize,
    singular: bool,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Self {
        assert!(a.is_square(), "LU of a non-square matrix");
        let n = a.nrows();
        let norm1 = norm1(a);
        let lu = a.clone().lu();
        let u = lu.u();
        let singular = (0..n).any(|i| u[(i, i)].norm() == 0.0);
        Lu { lu, norm1, n, singular }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        self.lu
            .solve(b)
            .unwrap_or_else(|| CMatrix::from_element(b.nrows(), b.ncols(), c(f64::NAN, f64::NAN)))
    }

    /// Solves `A^H X = B`.
    pub fn solve_adjoint(&self, b: &CMatrix) -> CMatrix {
        // P A = L U  =>  A^H = U^H L^H P
        let u = self.lu.u();
        let l = self.lu.l();
        let nan = || CMatrix::from_element(b.nrows(), b.ncols(), c(f64::NAN, f64::NAN));
        let Some(a) = u.ad_solve_upper_triangular(b) else {
            return nan();
        };
        let Some(mut y) = l.ad_solve_lower_triangular(&a) else {
            return nan();
        };
        self.lu.p().inv_permute_rows(&mut y);
        y
    }

    /// Solves `X A = B`.
    pub fn solve_right(&self, b: &CMatrix) -> CMatrix {
        self.solve_adjoint(&b.adjoint()).adjoint()
    }

    /// Reciprocal 1-norm condition number estimate (Hager's method with
    /// Higham's alternating-sign safeguard).
    pub fn rcond(&self) -> f64 {
        let n = self.n;
        if n == 0 {
            return 1.0;
        }
        if self.singular || self.norm1 == 0.0 {
            return 0.0;
        }
        let mut x = CMatrix::from_element(n, 1, c(1.0 / n as f64, 0.0));
        let mut estimate = 0.0f64;
        for iter in 0..5 {
            let y = self.solve(&x);
            let y1: f64 = y.iter().map(|z| z.norm()).sum();
            if !y1.is_finite() {
                return 0.0;
            }
            if iter > 0 && y1 <= estimate {
                break;
            }
            estimate = y1;
            let xi = y.map(|z| {
                let r = z.norm();
                if r > 0.0 {
                    z / r
                } else {
                    c(1.0, 0.0)
                }
            });
            let z = self.solve_adjoint(&xi);
            let (jmax, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            let ztx = (z.adjoint() * &x)[(0, 0)].re;
            if zmax <= ztx {
                break;
            }
            x = CMatrix::zeros(n, 1);
            x[(jmax, 0)] = c(1.0, 0.0);
        }
        let alt = CMatrix::from_fn(n, 1, |i, _| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
            c(sign * (1.0 + i as f64 / denom), 0.0)
        });
        let alt_est = 2.0 * self.solve(&alt).iter().map(|z| z.norm()).sum::<f64>() / (3.0 * n as f64);
        let inv_norm = estimate.max(alt_est);
        if !inv_norm.is_finite() || inv_norm == 0.0 {
            return 0.0;
        }
        1.0 / (self.norm1 * inv_norm)
    }
}

/// Factorizes `a`, returning the factorization or the offending rcond when it
/// falls below `min_rcond`.
pub fn factor_checked(a: &CMatrix, min_rcond: f64) -> std::result::Result<Lu, f64> {
    let lu = Lu::new(a);
    let rcond = lu.rcond();
    if rcond < min_rcond || !rcond.is_finite() {
        Err(rcond)
    } else {
        Ok(lu)
    }
}

/// Exponents supported by [`hermitian_power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermitianExponent {
    Half,
    NegHalf,
    NegOne,
}

impl HermitianExponent {
    fn apply(self, lambda: f64) -> f64 {
        match self {
            HermitianExponent::Half => lambda.sqrt(),
            HermitianExponent::NegHalf => 1.0 / lambda.sqrt(),
            HermitianExponent::NegOne => 1.0 / lambda,
        }
    }
}

/// Eigendecomposition of a Hermitian positive-definite matrix, after checking
/// both properties.
pub struct HermitianEigen {
    vectors: CMatrix,
    values: Vec<f64>,
}

impl HermitianEigen {
    pub fn new(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        ensure_finite(a, "Hermitian matrix")?;
        let asymmetry = (a - a.adjoint()).norm();
        let tolerance = HERMITIAN_TOL * a.norm();
        if asymmetry > tolerance {
            return Err(Error::NotHermitian { asymmetry, tolerance });
        }
        let sym = (a + a.adjoint()).scale(0.5);
        let eig = SymmetricEigen::new(sym);
        let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(HermitianEigen { vectors: eig.eigenvectors, values })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn power(&self, exponent: HermitianExponent) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= c(exponent.apply(self.values[k]), 0.0);
        }
        let s = &scaled * self.vectors.adjoint();
        // the product is Hermitian up to rounding; make it exact
        (&s + s.adjoint()).scale(0.5)
    }
}

/// `A^p` for Hermitian positive-definite `A` and `p` in {1/2, -1/2, -1}.
pub fn hermitian_power(a: &CMatrix, exponent: HermitianExponent) -> Result<CMatrix> {
    Ok(HermitianEigen::new(a)?.power(exponent))
}

/// Real symmetric variant of [`hermitian_power`].
pub fn symmetric_power(a: &RMatrix, exponent: HermitianExponent) -> Result<RMatrix> {
    Ok(real_part(&hermitian_power(&to_complex(a), exponent)?))
}

/// Right-singular frame of a nonzero row vector `g`.
///
/// Returns `(v, v_perp)` where `v = g^H / ||g||` and the columns of `v_perp`
/// complete it to a unitary basis. The completion is Gram-Schmidt applied to
/// the canonical basis vectors in index order, skipping the one that `v`
/// overlaps most.
///
/// Gram-Schmidt on canonical vectors has a closed form: after `e_k1 .. e_k(m-1)`
/// have been absorbed, the span of everything so far is those vectors plus
/// `u`, the part of `v` on the remaining coordinates. So the next vector is
/// `e_km - u conj(v_km) / ||u||^2`, normalized. The pivot stays in `u`, which
/// keeps `||u||^2 >= 2 |v_km|^2` and the normalization well away from zero.
pub fn right_singular_frame(g: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    if g.nrows() != 1 || g.ncols() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "right_singular_frame expects a nonempty row vector, got {}x{}",
            g.nrows(),
            g.ncols()
        )));
    }
    ensure_finite(g, "row vector")?;
    let n = g.ncols();
    let norm = g.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let v = g.adjoint().unscale(norm);

    let pivot = v
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
        .0;
    let order: Vec<usize> = (0..n).filter(|&k| k != pivot).collect();

    // tail[m] = |v_pivot|^2 + sum of |v_k|^2 over order[m..]
    let mut tail = vec![v[pivot].norm_sqr(); order.len() + 1];
    for m in (0..order.len()).rev() {
        tail[m] = tail[m + 1] + v[order[m]].norm_sqr();
    }

    let mut v_perp = CMatrix::zeros(n, n - 1);
    for (m, &k) in order.iter().enumerate() {
        let coef = v[k].conj() / tail[m];
        let scale = 1.0 / (1.0 - v[k].norm_sqr() / tail[m]).sqrt();
        let mut col = v_perp.column_mut(m);
        for &j in order[m..].iter().chain(std::iter::once(&pivot)) {
            col[j] = -v[j] * coef * scale;
        }
        col[k] += c(scale, 0.0);
    }
    Ok((v, v_perp))
}

/// Inclusive 1-based index range, as in `[A]_{2:N+1, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub start: usize,
    pub end: usize,
}

impl IndexRange {
    pub fn new(start: usize, end: usize) -> Self {
        IndexRange { start, end }
    }

    pub fn single(i: usize) -> Self {
        IndexRange { start: i, end: i }
    }

    /// `offset + (1:len)`.
    pub fn after(offset: usize, len: usize) -> Self {
        IndexRange { start: offset + 1, end: offset + len }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.start >= 1 && self.start <= self.end && self.end <= dim {
            Ok(())
        } else {
            Err(Error::OutOfRange { start: self.start, end: self.end, dim })
        }
    }
}

/// Copy of the block of `a` addressed by 1-based inclusive ranges.
pub fn block(a: &CMatrix, rows: IndexRange, cols: IndexRange) -> Result<CMatrix> {
    rows.check(a.nrows())?;
    cols.check(a.ncols())?;
    Ok(a
        .view((rows.start - 1, cols.start - 1), (rows.len(), cols.len()))
        .into_owned())
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UnitarySymmetryResiduals {
    /// max |Θ^H Θ - I|
    pub unitary: f64,
    /// max |Θ - Θ^T|
    pub symmetry: f64,
}

impl UnitarySymmetryResiduals {
    pub fn within(&self, tol: f64) -> bool {
        self.unitary < tol && self.symmetry < tol
    }
}

pub fn is_unitary_symmetric(theta: &CMatrix) -> UnitarySymmetryResiduals {
    assert!(theta.is_square(), "unitary-symmetric check needs a square matrix");
    let n = theta.nrows();
    let gram = theta.adjoint() * theta - identity(n);
    let asym = theta - theta.transpose();
    UnitarySymmetryResiduals { unitary: max_abs(&gram), symmetry: max_abs(&asym) }
}
