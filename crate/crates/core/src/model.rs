//! Constructions tied to inner functions: the shift-invariant range `θH²`,
//! the model space `K_θ = (θH²)⊥` built two independent ways, isometric
//! multiplier images `g·K`, wandering subspaces, and the orthocomplement
//! identity `(ψ K_θ)⊥ = θψH² ⊕ K_ψ`.
//!
//! The Takenaka–Malmquist frame is the canonical `K_θ` handed to other
//! modules: its error is analytic (pure truncation tail), not algorithmic.
//! The orthocomplement construction exists so the two routes can be
//! cross-checked against each other.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::hardy::{multiply_truncate, BlaschkeProduct, TaylorVec};
use crate::scalar::{abs, fmax, sqrt, Cx, Scalar};
use crate::tolerance::Tolerances;

/// Resolution gate for constructions involving `b`: the truncation tail must
/// sit strictly below the residual tolerance.
fn require_resolved<T: Scalar>(
    b: &BlaschkeProduct<T>,
    ambient_degree: usize,
    tol: &Tolerances<T>,
) -> Result<T> {
    let tail = b.tail_budget(ambient_degree);
    tol.with_tail(tol.tail_tol + tail).check_resolved()?;
    Ok(tail)
}

/// Frame of `θH²` at truncation: the span of `{trunc(B·z^k) : 0 ≤ k ≤ N − deg B}`.
/// Exactly the polynomial multiples of `B` inside the window, so the
/// dimension is `N − deg B + 1`.
pub fn theta_h2<T: Scalar>(
    b: &BlaschkeProduct<T>,
    ambient_degree: usize,
    tol: &Tolerances<T>,
) -> Result<Frame<T>> {
    let n = ambient_degree;
    if n < b.degree() + 1 {
        return Err(Error::DimensionMismatch {
            context: "theta_h2 ambient degree",
            expected: b.degree() + 1,
            got: n,
        });
    }
    let tail = require_resolved(b, n, tol)?;
    let (expansion, _) = b.to_taylor(n)?;
    let count = n - b.degree() + 1;
    let mut mat = DMatrix::zeros(n + 1, count);
    for k in 0..count {
        // trunc(B·z^k): expansion coefficients shifted up by k.
        for i in 0..(n + 1 - k) {
            mat[(i + k, k)] = expansion.coeff(i);
        }
    }
    // The generators are lower-triangular in their leading index, hence
    // independent; MGS keeps the construction fast at full window size.
    let frame = Frame::from_near_orthonormal(&mat, tol.with_tail(tol.tail_tol + tail));
    debug_assert_eq!(frame.dim(), count);
    Ok(frame)
}

/// Exact orthonormal basis of the model space `K_θ`: columns are
/// truncations of
/// `φ_k(z) = sqrt(1 − |a_k|²) / (1 − conj(a_k) z) · Π_{j<k} b_{a_j}(z)`.
/// The dimension equals `deg B`; each column is orthogonal to `θH²` up to
/// the truncation tail.
pub fn takenaka_malmquist_basis<T: Scalar>(
    b: &BlaschkeProduct<T>,
    ambient_degree: usize,
    tol: &Tolerances<T>,
) -> Result<Frame<T>> {
    let n = ambient_degree;
    if n < usize::max(b.degree(), 1) {
        return Err(Error::DimensionMismatch {
            context: "takenaka_malmquist ambient degree",
            expected: usize::max(b.degree(), 1),
            got: n,
        });
    }
    let tail = require_resolved(b, n, tol)?;
    let tol = tol.with_tail(tol.tail_tol + tail);
    if b.degree() == 0 {
        return Ok(Frame::zero(n + 1, tol));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut mat = DMatrix::zeros(n + 1, b.degree());
    // Partial product Π_{j<k} b_{a_j}, updated factor by factor.
    let mut partial = TaylorVec::<T>::zero(n);
    partial.coeffs_mut()[0] = Complex::new(T::one(), T::zero());
    for (k, &a) in b.zeros().iter().enumerate() {
        let amod = a.norm();
        let scale = Complex::new(sqrt(T::one() - amod * amod), T::zero());
        // Cauchy kernel series Σ conj(a)^m z^m, truncated.
        let mut cauchy = TaylorVec::<T>::zero(n);
        let mut pow = Complex::new(T::one(), T::zero());
        for m in 0..=n {
            cauchy.coeffs_mut()[m] = pow;
            pow *= a.conj();
        }
        let (col, _) = multiply_truncate(&partial, &cauchy, n);
        for i in 0..=n {
            let v = col.coeff(i) * scale;
            mat[(i, k)] = if v.norm_sqr() == T::zero() { zero } else { v };
        }
        // Append factor b_{a_k} for the next column.
        let factor = BlaschkeProduct::new(vec![a], Complex::new(T::one(), T::zero()))?;
        let (ft, _) = factor.to_taylor(n)?;
        let (next, _) = multiply_truncate(&partial, &ft, n);
        partial = next;
    }
    Frame::from_orthonormal(mat, tol)
}

/// Canonical `K_θ` constructor (the Takenaka–Malmquist route).
pub fn model_space<T: Scalar>(
    b: &BlaschkeProduct<T>,
    ambient_degree: usize,
    tol: &Tolerances<T>,
) -> Result<Frame<T>> {
    takenaka_malmquist_basis(b, ambient_degree, tol)
}

/// Image of a subspace under multiplication by `g`, with the isometry
/// defect `max | ‖g·k‖ − 1 |` over the orthonormal input basis. For inner
/// `g` the defect is pure truncation tail.
pub fn multiplier_space<T: Scalar>(
    g: &TaylorVec<T>,
    k: &Frame<T>,
    ambient_degree: usize,
    tol: &Tolerances<T>,
) -> Result<(Frame<T>, T)> {
    let n = ambient_degree;
    if g.ambient_degree() != n || k.ambient_degree() != n {
        return Err(Error::DimensionMismatch {
            context: "multiplier_space ambient degree",
            expected: n,
            got: usize::min(g.ambient_degree(), k.ambient_degree()),
        });
    }
    if k.dim() == 0 {
        return Ok((Frame::zero(n + 1, *k.tol()), T::zero()));
    }
    let mut mat = DMatrix::zeros(n + 1, k.dim());
    let mut defect = T::zero();
    for j in 0..k.dim() {
        let col = k.column_taylor(j);
        let (prod, _) = multiply_truncate(g, &col, n);
        defect = fmax(defect, abs(prod.norm() - T::one()));
        for i in 0..=n {
            mat[(i, j)] = prod.coeff(i);
        }
    }
    let frame = if defect < T::of(1e-3) {
        Frame::from_near_orthonormal(&mat, *tol)
    } else {
        Frame::from_columns(&mat, *tol)
    };
    Ok((frame, defect))
}

/// Wandering subspace `W = M ⊖ S M` of a frame under the block shift, and
/// its dimension (the Lax–Beurling multiplicity at truncation). The shift is
/// applied to the guard-compatible part of `M` (top block coefficients
/// projected out), which keeps it exactly isometric.
pub fn wandering_subspace<T: Scalar>(
    m: &Frame<T>,
    blocks: usize,
    tol: &Tolerances<T>,
) -> Result<(Frame<T>, usize)> {
    if blocks == 0 || m.rows() % blocks != 0 {
        return Err(Error::DimensionMismatch {
            context: "wandering_subspace block count",
            expected: 1,
            got: blocks,
        });
    }
    if m.dim() == 0 {
        return Ok((Frame::zero(m.rows(), *tol), 0));
    }
    let guarded = guard_kernel(m, blocks)?;
    let shifted_cols = block_shift_matrix(guarded.mat(), blocks);
    // W = M ∩ (S M_g)⊥: project S M_g out of M's basis and re-orthonormalize.
    let coeff = shifted_cols.ad_mul(m.mat());
    let reduced = m.mat() - shifted_cols * coeff;
    let w = Frame::from_columns(&reduced, *tol);
    let r = w.dim();
    Ok((w, r))
}

/// Guard-compatible subframe: the joint kernel of the per-block top
/// coefficient functionals (codimension at most `blocks`). Errors when the
/// subspace is nonzero but nothing survives the guard.
pub fn guard_kernel<T: Scalar>(m: &Frame<T>, blocks: usize) -> Result<Frame<T>> {
    let block_rows = m.rows() / blocks;
    let mut g = m.clone();
    for b in 0..blocks {
        g = g.kernel_of_coordinate((b + 1) * block_rows - 1);
    }
    if m.dim() > 0 && g.dim() == 0 {
        return Err(Error::GuardViolation(
            "no guard-compatible directions: every member has top-coefficient mass".into(),
        ));
    }
    Ok(g)
}

/// Apply the (block) shift to every column: rows move up one index inside
/// each block; the vacated bottom row is zero. Callers are responsible for
/// guard handling of the dropped top row.
pub(crate) fn block_shift_matrix<T: Scalar>(
    mat: &DMatrix<Cx<T>>,
    blocks: usize,
) -> DMatrix<Cx<T>> {
    let rows = mat.nrows();
    let block_rows = rows / blocks;
    let mut out = DMatrix::zeros(rows, mat.ncols());
    for j in 0..mat.ncols() {
        for b in 0..blocks {
            let base = b * block_rows;
            for i in 1..block_rows {
                out[(base + i, j)] = mat[(base + i - 1, j)];
            }
        }
    }
    out
}

/// Apply the (block) backward shift to every column: rows move down one
/// index inside each block; always defined.
pub(crate) fn block_backward_shift_matrix<T: Scalar>(
    mat: &DMatrix<Cx<T>>,
    blocks: usize,
) -> DMatrix<Cx<T>> {
    let rows = mat.nrows();
    let block_rows = rows / blocks;
    let mut out = DMatrix::zeros(rows, mat.ncols());
    for j in 0..mat.ncols() {
        for b in 0..blocks {
            let base = b * block_rows;
            for i in 1..block_rows {
                out[(base + i - 1, j)] = mat[(base + i, j)];
            }
        }
    }
    out
}

/// Both sides of the identity `(ψ K_θ)⊥ = θψH² ⊕ K_ψ`, built independently,
/// and the subspace distance between them.
pub struct OrthocomplementIdentity<T: Scalar> {
    pub lhs: Frame<T>,
    pub rhs: Frame<T>,
    pub distance: T,
}

pub fn lemma_orthocomplement<T: Scalar>(
    psi: &BlaschkeProduct<T>,
    theta: &BlaschkeProduct<T>,
    ambient_degree: usize,
    tol: &Tolerances<T>,
) -> Result<OrthocomplementIdentity<T>> {
    if psi.degree() == 0 || theta.degree() == 0 {
        return Err(Error::Precondition(
            "the orthocomplement identity needs non-constant inner functions".into(),
        ));
    }
    let n = ambient_degree;
    require_resolved(psi, n, tol)?;
    require_resolved(theta, n, tol)?;
    let product = psi.product(theta)?;
    require_resolved(&product, n, tol)?;

    let k_theta = takenaka_malmquist_basis(theta, n, tol)?;
    let (psi_taylor, _) = psi.to_taylor(n)?;
    let (psi_k_theta, _) = multiplier_space(&psi_taylor, &k_theta, n, tol)?;
    let lhs = psi_k_theta.orthocomplement();

    let range = theta_h2(&product, n, tol)?;
    let k_psi = takenaka_malmquist_basis(psi, n, tol)?;
    let rhs = range.sum(&k_psi)?;

    let distance = lhs.distance(&rhs);
    Ok(OrthocomplementIdentity { lhs, rhs, distance })
}
