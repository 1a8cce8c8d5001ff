//! Finite-dimensional subspace algebra over truncated ambient spaces:
//! orthonormal frames, projections, complements, sums, intersections,
//! principal-angle distances and functional kernels.
//!
//! A `Frame` is a matrix with orthonormal columns; the zero subspace (no
//! columns) is a legal value everywhere. Rank decisions are always relative
//! (`σ_k / σ_1 < rank_tol`) because constructions mix vectors of very
//! different norms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hardy::TaylorVec;
use crate::scalar::{exactness_tol, fmax, fmin, sqrt, Cx, Scalar};
use crate::tolerance::Tolerances;

/// Matrix with orthonormal columns spanning a subspace of `ℂ^rows`.
#[derive(Debug, Clone)]
pub struct Frame<T: Scalar> {
    columns: DMatrix<Cx<T>>,
    tol: Tolerances<T>,
}

impl<T: Scalar> Frame<T> {
    /// The zero subspace of `ℂ^rows`.
    pub fn zero(rows: usize, tol: Tolerances<T>) -> Self {
        Frame {
            columns: DMatrix::zeros(rows, 0),
            tol,
        }
    }

    /// The full ambient space (identity columns).
    pub fn full_ambient(rows: usize, tol: Tolerances<T>) -> Self {
        Frame {
            columns: DMatrix::identity(rows, rows),
            tol,
        }
    }

    /// Wrap a matrix whose columns are already orthonormal; the Gram matrix
    /// is verified entrywise.
    pub fn from_orthonormal(columns: DMatrix<Cx<T>>, tol: Tolerances<T>) -> Result<Self> {
        let f = Frame { columns, tol };
        let g = f.gram_residual();
        if g > exactness_tol::<T>() {
            return Err(Error::InvalidInput(format!(
                "columns are not orthonormal: max Gram deviation {:.3e}",
                g.to_f64_lossy()
            )));
        }
        Ok(f)
    }

    /// Orthonormal basis of the span of arbitrary columns via rank-revealing
    /// SVD; singular values below `rank_tol · σ_max` are discarded. An empty
    /// or all-zero input yields the zero frame.
    pub fn from_columns(mat: &DMatrix<Cx<T>>, tol: Tolerances<T>) -> Self {
        if mat.ncols() == 0 {
            return Frame::zero(mat.nrows(), tol);
        }
        let (q, _svals) = orthonormalize_svd(mat, tol.rank_tol);
        Frame { columns: q, tol }
    }

    /// Orthonormal basis of the span of a list of Taylor vectors.
    pub fn from_spanning(vectors: &[TaylorVec<T>], tol: Tolerances<T>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidInput(
                "from_spanning needs at least one vector to fix the ambient degree; use Frame::zero otherwise".into(),
            ));
        }
        let rows = vectors[0].ambient_degree() + 1;
        for v in vectors {
            if v.ambient_degree() + 1 != rows {
                return Err(Error::DimensionMismatch {
                    context: "from_spanning ambient degrees",
                    expected: rows - 1,
                    got: v.ambient_degree(),
                });
            }
        }
        let mat = DMatrix::from_fn(rows, vectors.len(), |i, j| vectors[j].coeff(i));
        Ok(Self::from_columns(&mat, tol))
    }

    /// Fast path for spanning sets that are provably full-rank and close to
    /// orthonormal (isometric images of orthonormal sets, triangular
    /// generator families): two-pass modified Gram-Schmidt with a drop
    /// tolerance. Falls back to the SVD path when a column collapses.
    pub(crate) fn from_near_orthonormal(mat: &DMatrix<Cx<T>>, tol: Tolerances<T>) -> Self {
        if mat.ncols() == 0 {
            return Frame::zero(mat.nrows(), tol);
        }
        match orthonormalize_mgs(mat, T::of(1e-6)) {
            Some(q) => Frame { columns: q, tol },
            None => Self::from_columns(mat, tol),
        }
    }

    pub fn rows(&self) -> usize {
        self.columns.nrows()
    }

    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    /// Ambient degree when the rows are Taylor coefficients `c_0..c_N`.
    pub fn ambient_degree(&self) -> usize {
        self.rows() - 1
    }

    pub fn tol(&self) -> &Tolerances<T> {
        &self.tol
    }

    pub fn mat(&self) -> &DMatrix<Cx<T>> {
        &self.columns
    }

    pub fn column(&self, j: usize) -> DVector<Cx<T>> {
        self.columns.column(j).into_owned()
    }

    pub fn column_taylor(&self, j: usize) -> TaylorVec<T> {
        TaylorVec::from_dvector(&self.column(j))
    }

    /// Max entrywise deviation of `FᴴF` from the identity.
    pub fn gram_residual(&self) -> T {
        let g = self.columns.ad_mul(&self.columns);
        let mut worst = T::zero();
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let expect = if i == j {
                    Complex::new(T::one(), T::zero())
                } else {
                    Complex::new(T::zero(), T::zero())
                };
                worst = fmax(worst, (g[(i, j)] - expect).norm());
            }
        }
        worst
    }

    /// Orthogonal projection: returns `P v` and the residual norm
    /// `‖v − P v‖`. Pythagoras `‖v‖² = ‖Pv‖² + residual²` holds to rounding.
    pub fn project_vec(&self, v: &DVector<Cx<T>>) -> Result<(DVector<Cx<T>>, T)> {
        if v.nrows() != self.rows() {
            return Err(Error::DimensionMismatch {
                context: "project ambient",
                expected: self.rows(),
                got: v.nrows(),
            });
        }
        if self.dim() == 0 {
            return Ok((DVector::zeros(self.rows()), v.norm()));
        }
        let coeff = self.columns.ad_mul(v);
        let proj = &self.columns * &coeff;
        let residual = (v - &proj).norm();
        Ok((proj, residual))
    }

    /// Projection of a Taylor vector onto the subspace.
    pub fn project(&self, v: &TaylorVec<T>) -> Result<(TaylorVec<T>, T)> {
        let (p, r) = self.project_vec(&v.to_dvector())?;
        Ok((TaylorVec::from_dvector(&p), r))
    }

    /// Residual norm of `v` against the subspace (membership test).
    pub fn residual_of(&self, v: &DVector<Cx<T>>) -> Result<T> {
        Ok(self.project_vec(v)?.1)
    }

    /// Orthogonal complement inside the truncated ambient space, computed by
    /// accumulating the Householder reflectors of the frame columns; the
    /// result has dimension exactly `rows − dim`.
    pub fn orthocomplement(&self) -> Frame<T> {
        let comp = householder_complement(&self.columns);
        Frame {
            columns: comp,
            tol: self.tol,
        }
    }

    /// Sine of the largest principal angle between two subspaces of equal
    /// dimension, computed stably as `σ_max((I − P₁) F₂)`. Subspaces of
    /// different dimensions are never equal: the sentinel `1` is returned.
    pub fn distance(&self, other: &Frame<T>) -> T {
        if self.rows() != other.rows() || self.dim() != other.dim() {
            return T::one();
        }
        if self.dim() == 0 {
            return T::zero();
        }
        let cross = self.columns.ad_mul(&other.columns);
        let g = &other.columns - &self.columns * cross;
        fmin(T::one(), spectral_norm(&g))
    }

    /// Span of the union. Inputs sharing the ambient are concatenated and
    /// re-orthonormalized with rank decisions.
    pub fn sum(&self, other: &Frame<T>) -> Result<Frame<T>> {
        if self.rows() != other.rows() {
            return Err(Error::DimensionMismatch {
                context: "frame_sum ambient",
                expected: self.rows(),
                got: other.rows(),
            });
        }
        let mut mat = DMatrix::zeros(self.rows(), self.dim() + other.dim());
        mat.view_mut((0, 0), (self.rows(), self.dim()))
            .copy_from(&self.columns);
        mat.view_mut((0, self.dim()), (self.rows(), other.dim()))
            .copy_from(&other.columns);
        if mat.ncols() == 0 {
            return Ok(Frame::zero(self.rows(), self.tol));
        }
        // Unions of two orthonormal frames are well-conditioned unless the
        // subspaces genuinely overlap; the SVD keeps the rank decision honest
        // for small systems while MGS keeps desk-scale runs fast.
        if mat.ncols() <= 128 {
            Ok(Frame::from_columns(&mat, self.tol))
        } else {
            Ok(Frame::from_near_orthonormal(&mat, self.tol))
        }
    }

    /// Intersection via the double complement:
    /// `(F₁ ∩ F₂) = (F₁⊥ + F₂⊥)⊥`.
    pub fn intersect(&self, other: &Frame<T>) -> Result<Frame<T>> {
        let sum = self.orthocomplement().sum(&other.orthocomplement())?;
        Ok(sum.orthocomplement())
    }

    /// Kernel of the point-evaluation functional `f ↦ f(0)` restricted to
    /// the subspace: dimension drops by one when some member has
    /// `f(0) ≠ 0`, otherwise the frame is returned unchanged.
    pub fn kernel_of_point_evaluation(&self) -> Frame<T> {
        self.kernel_of_coordinate(0)
    }

    /// Kernel of the coordinate functional `f ↦ c_row(f)` restricted to the
    /// subspace.
    pub fn kernel_of_coordinate(&self, row: usize) -> Frame<T> {
        if self.dim() == 0 {
            return self.clone();
        }
        // The functional on coefficients c is u^H c with u_j = conj(F[row, j]).
        let u = DVector::from_fn(self.dim(), |j, _| self.columns[(row, j)].conj());
        let un = u.norm();
        if un <= self.tol.rank_tol {
            return self.clone();
        }
        let unit = DMatrix::from_column_slice(self.dim(), 1, (u / Complex::new(un, T::zero())).as_slice());
        let inner = householder_complement(&unit);
        Frame {
            columns: &self.columns * inner,
            tol: self.tol,
        }
    }

    /// Largest column-residual of `other`'s basis against this subspace:
    /// zero when `other ⊆ self`.
    pub fn containment_residual(&self, other: &Frame<T>) -> T {
        let mut worst = T::zero();
        for j in 0..other.dim() {
            let col = other.column(j);
            let r = self.project_vec(&col).map(|(_, r)| r).unwrap_or(T::one());
            worst = fmax(worst, r);
        }
        worst
    }

    /// Max absolute inner product between the two frames' columns; used for
    /// orthogonality preconditions.
    pub fn max_cross_inner(&self, other: &Frame<T>) -> T {
        if self.dim() == 0 || other.dim() == 0 {
            return T::zero();
        }
        let cross = self.columns.ad_mul(&other.columns);
        let mut worst = T::zero();
        for v in cross.iter() {
            worst = fmax(worst, v.norm());
        }
        worst
    }
}

/// Stack of `blocks` Hardy components: a frame over `ℂ^{blocks·block_rows}`
/// whose block structure is immutable.
#[derive(Debug, Clone)]
pub struct ProductFrame<T: Scalar> {
    blocks: usize,
    block_rows: usize,
    frame: Frame<T>,
}

impl<T: Scalar> ProductFrame<T> {
    pub fn new(blocks: usize, block_rows: usize, frame: Frame<T>) -> Result<Self> {
        if blocks == 0 || frame.rows() != blocks * block_rows {
            return Err(Error::DimensionMismatch {
                context: "product frame rows",
                expected: blocks * block_rows,
                got: frame.rows(),
            });
        }
        Ok(ProductFrame {
            blocks,
            block_rows,
            frame,
        })
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn frame(&self) -> &Frame<T> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Component `b` of column `j` as a Taylor vector.
    pub fn block_of_column(&self, j: usize, b: usize) -> TaylorVec<T> {
        let col = self.frame.column(j);
        let mut v = TaylorVec::zero(self.block_rows - 1);
        for i in 0..self.block_rows {
            v.coeffs_mut()[i] = col[b * self.block_rows + i];
        }
        v
    }
}

/// Rank-revealing orthonormalization: thin SVD, keep left singular vectors
/// with `σ > rank_tol · σ_max`. Returns the kept basis and all singular
/// values.
pub(crate) fn orthonormalize_svd<T: Scalar>(
    mat: &DMatrix<Cx<T>>,
    rank_tol: T,
) -> (DMatrix<Cx<T>>, Vec<T>) {
    let svd = mat.clone().svd(true, false);
    let u = svd.u.expect("SVD with left singular vectors");
    let svals: Vec<T> = svd.singular_values.iter().copied().collect();
    let smax = svals.iter().copied().fold(T::zero(), fmax);
    let rank = if smax <= T::zero() {
        0
    } else {
        svals.iter().filter(|&&s| s > rank_tol * smax).count()
    };
    (u.columns(0, rank).into_owned(), svals)
}

/// Two-pass modified Gram-Schmidt. Returns `None` when a column's residual
/// falls below `drop_tol` (possible rank deficiency — caller should use the
/// SVD path instead).
pub(crate) fn orthonormalize_mgs<T: Scalar>(
    mat: &DMatrix<Cx<T>>,
    drop_tol: T,
) -> Option<DMatrix<Cx<T>>> {
    let n = mat.nrows();
    let k = mat.ncols();
    let mut q = mat.clone_owned();
    for j in 0..k {
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i);
                let c = qi.dotc(&q.column(j));
                let qi = qi.clone_owned();
                let mut col = q.column_mut(j);
                col.axpy(-c, &qi, Complex::new(T::one(), T::zero()));
            }
        }
        let norm = q.column(j).norm();
        if norm < drop_tol {
            return None;
        }
        let scale = Complex::new(T::one() / norm, T::zero());
        q.column_mut(j).apply(|c| *c *= scale);
    }
    let _ = n;
    Some(q)
}

/// Orthonormal basis of the orthogonal complement of `q`'s column span,
/// assembled from the Householder reflectors of the (orthonormal) columns.
pub(crate) fn householder_complement<T: Scalar>(q: &DMatrix<Cx<T>>) -> DMatrix<Cx<T>> {
    let n = q.nrows();
    let d = q.ncols();
    if d == 0 {
        return DMatrix::identity(n, n);
    }
    if d >= n {
        return DMatrix::zeros(n, 0);
    }
    // Reflector j zeroes work[j+1.., j]; v is stored padded to length n.
    let mut work = q.clone_owned();
    let mut reflectors: Vec<(DVector<Cx<T>>, T)> = Vec::with_capacity(d);
    for j in 0..d {
        let m = n - j;
        let mut v = DVector::zeros(n);
        let beta = work.view((j, j), (m, 1)).norm();
        if beta <= T::zero() {
            reflectors.push((v, T::zero()));
            continue;
        }
        let x0 = work[(j, j)];
        let phase = if x0.norm() > T::zero() {
            x0 / Complex::new(x0.norm(), T::zero())
        } else {
            Complex::new(T::one(), T::zero())
        };
        for i in j..n {
            v[i] = work[(i, j)];
        }
        v[j] += phase * Complex::new(beta, T::zero());
        let nv2 = v.norm_squared();
        // Apply H = I − 2 v vᴴ / ‖v‖² to the remaining columns.
        for col in (j + 1)..d {
            let mut dot = Complex::new(T::zero(), T::zero());
            for i in j..n {
                dot += v[i].conj() * work[(i, col)];
            }
            let factor = dot * Complex::new(T::of(2.0) / nv2, T::zero());
            for i in j..n {
                let vi = v[i];
                work[(i, col)] -= vi * factor;
            }
        }
        reflectors.push((v, nv2));
    }
    // Complement column k of the implicit full unitary Q = H_0 … H_{d−1}:
    // apply the reflectors to the identity column e_{d+c} from the inside out.
    let mut out = DMatrix::zeros(n, n - d);
    let mut col = DVector::zeros(n);
    for c in 0..(n - d) {
        for x in col.iter_mut() {
            *x = Complex::new(T::zero(), T::zero());
        }
        col[d + c] = Complex::new(T::one(), T::zero());
        for j in (0..d).rev() {
            let (v, nv2) = &reflectors[j];
            if *nv2 <= T::zero() {
                continue;
            }
            let mut dot = Complex::new(T::zero(), T::zero());
            for i in j..n {
                dot += v[i].conj() * col[i];
            }
            let factor = dot * Complex::new(T::of(2.0) / *nv2, T::zero());
            for i in j..n {
                let vi = v[i];
                col[i] -= vi * factor;
            }
        }
        out.set_column(c, &col);
    }
    out
}

/// Largest singular value. Small systems go through the SVD; large ones use
/// the Frobenius bound when it is already conclusive and a fixed-iteration
/// power method otherwise.
pub(crate) fn spectral_norm<T: Scalar>(g: &DMatrix<Cx<T>>) -> T {
    if g.ncols() == 0 || g.nrows() == 0 {
        return T::zero();
    }
    if g.ncols() <= 128 {
        let svd = g.clone().svd(false, false);
        return svd
            .singular_values
            .iter()
            .copied()
            .fold(T::zero(), fmax);
    }
    let fro = g.norm();
    if fro <= T::of(1e-7) {
        // σ_max ≤ ‖·‖_F: a conservative bound is enough below any threshold
        // the toolkit certifies.
        return fro;
    }
    // Power iteration on GᴴG, seeded with the largest column.
    let mut best = 0;
    let mut best_norm = T::zero();
    for j in 0..g.ncols() {
        let cn = g.column(j).norm();
        if cn > best_norm {
            best_norm = cn;
            best = j;
        }
    }
    let mut v = g.column(best).into_owned();
    let mut sigma = best_norm;
    for _ in 0..80 {
        let w = g.ad_mul(&v);
        let u = g * &w;
        let un = u.norm();
        if un <= T::zero() {
            return T::zero();
        }
        sigma = sqrt(w.norm());
        v = u / Complex::new(un, T::zero());
    }
    // Rayleigh refinement: σ ≈ ‖Gᴴ v‖ for the converged left vector.
    let w = g.ad_mul(&v);
    fmax(sigma, w.norm())
}
