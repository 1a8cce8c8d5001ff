//! Defect computation and classification: invariant, almost-invariant and
//! nearly invariant subspaces, reproducing kernels at the origin, and the
//! witness constructions around them.
//!
//! The defect of `T` on `M` is the numerical rank of the out-of-space block
//! `(I − P_M) T P_M`. Rank is a discrete quantity extracted from continuous
//! data, so every report carries the rank gap `σ_m / σ_{m+1}` as a
//! confidence certificate; runs with gap below `10³` are flagged
//! indeterminate instead of classified.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::hardy::{BlaschkeProduct, TaylorVec};
use crate::model::{
    block_backward_shift_matrix, block_shift_matrix, guard_kernel, model_space, multiplier_space,
};
use crate::scalar::{fmax, Cx, Scalar};
use crate::tolerance::Tolerances;

/// Minimum rank gap for a defect decision to count as certified.
pub const RANK_GAP_FLOOR: f64 = 1e3;

/// Named operators whose defects the Hardy-side machinery computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftOp {
    S,
    Sstar,
}

/// Subspace classification under a named operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Invariant,
    AlmostInvariant(usize),
    NearlyInvariant(usize),
    None_,
}

impl Classification {
    /// Collapse `almost_invariant(0)` to `invariant`: an almost-invariant
    /// subspace with empty defect space is invariant outright.
    pub fn almost(m: usize) -> Self {
        if m == 0 {
            Classification::Invariant
        } else {
            Classification::AlmostInvariant(m)
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Invariant => write!(f, "invariant"),
            Classification::AlmostInvariant(m) => write!(f, "almost_invariant({m})"),
            Classification::NearlyInvariant(m) => write!(f, "nearly_invariant({m})"),
            Classification::None_ => write!(f, "none"),
        }
    }
}

/// Result of a defect computation: the minimal out-of-space directions `F`
/// (orthogonal to `M` by construction), the singular values of the
/// out-of-space block, and the certified classification.
#[derive(Debug, Clone)]
pub struct DefectReport<T: Scalar> {
    pub defect_dim: usize,
    pub defect_frame: Frame<T>,
    /// Top singular values of the out-of-space block followed by the bound
    /// on everything that was left behind, sorted descending.
    pub residual_spectrum: Vec<T>,
    /// `σ_m / σ_{m+1}`-style confidence ratio across the rank cut.
    pub rank_gap: T,
    pub classification: Classification,
    pub indeterminate: bool,
    /// Columns of `M` removed by the top-coefficient guard (shift only).
    pub guard_codim: usize,
    /// Largest residual of an operator image against `M ⊕ F`.
    pub reconstruction_residual: T,
}

/// Rank analysis of an out-of-space block: greedy pivoted orthogonalization
/// down to `floor`, then an exact small SVD of the extracted part. The top
/// singular values are recovered to `floor` accuracy without a full
/// factorization of the (large) block.
pub(crate) struct BlockRank<T: Scalar> {
    pub basis: DMatrix<Cx<T>>,
    pub svals: Vec<T>,
    pub remainder_max_col: T,
    pub remainder_fro: T,
}

pub(crate) fn analyze_block<T: Scalar>(block: &DMatrix<Cx<T>>, floor: T) -> BlockRank<T> {
    let n = block.nrows();
    let d = block.ncols();
    let mut residual = block.clone_owned();
    let mut picks: Vec<DVector<Cx<T>>> = Vec::new();
    loop {
        let mut best = 0usize;
        let mut best_norm = T::zero();
        for j in 0..d {
            let cn = residual.column(j).norm();
            if cn > best_norm {
                best_norm = cn;
                best = j;
            }
        }
        if best_norm <= floor || picks.len() >= usize::min(n, d) {
            break;
        }
        let mut q = residual.column(best).into_owned();
        // Re-orthogonalize the pick against earlier directions for stability.
        for _ in 0..2 {
            for p in &picks {
                let c = p.dotc(&q);
                q.axpy(-c, p, Complex::new(T::one(), T::zero()));
            }
        }
        let qn = q.norm();
        if qn <= floor {
            break;
        }
        q /= Complex::new(qn, T::zero());
        for j in 0..d {
            let c = q.dotc(&residual.column(j));
            let mut col = residual.column_mut(j);
            col.axpy(-c, &q, Complex::new(T::one(), T::zero()));
        }
        picks.push(q);
    }
    let m = picks.len();
    let mut remainder_max_col = T::zero();
    for j in 0..d {
        remainder_max_col = fmax(remainder_max_col, residual.column(j).norm());
    }
    let remainder_fro = residual.norm();
    if m == 0 {
        return BlockRank {
            basis: DMatrix::zeros(n, 0),
            svals: Vec::new(),
            remainder_max_col,
            remainder_fro,
        };
    }
    let mut qmat = DMatrix::zeros(n, m);
    for (j, p) in picks.iter().enumerate() {
        qmat.set_column(j, p);
    }
    // Exact top-m singular data: block ≈ Q (Qᴴ block) with the remainder
    // bounded by `floor`, so the SVD of the small projected matrix recovers
    // the leading singular values and left vectors.
    let small = qmat.ad_mul(block);
    let svd = small.svd(true, false);
    let u_small = svd.u.expect("left vectors");
    let mut svals: Vec<T> = svd.singular_values.iter().copied().collect();
    svals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut basis = &qmat * u_small;
    // Deterministic phase convention: largest-magnitude entry real positive.
    for j in 0..basis.ncols() {
        let mut idx = 0usize;
        let mut mag = T::zero();
        for i in 0..basis.nrows() {
            let a = basis[(i, j)].norm();
            if a > mag {
                mag = a;
                idx = i;
            }
        }
        if mag > T::zero() {
            let phase = basis[(idx, j)] / Complex::new(mag, T::zero());
            let correction = phase.conj();
            for i in 0..basis.nrows() {
                basis[(i, j)] *= correction;
            }
        }
    }
    BlockRank {
        basis,
        svals,
        remainder_max_col,
        remainder_fro,
    }
}

/// Assemble a defect report from raw operator images of an orthonormal
/// basis of (a guarded part of) `M`.
pub(crate) fn defect_from_images<T: Scalar>(
    m_frame: &Frame<T>,
    images: &DMatrix<Cx<T>>,
    guard_codim: usize,
    tol: &Tolerances<T>,
    classify: impl Fn(usize) -> Classification,
) -> DefectReport<T> {
    let floor = tol.residual_tol;
    let block = if m_frame.dim() == 0 {
        images.clone_owned()
    } else {
        let coeff = m_frame.mat().ad_mul(images);
        images - m_frame.mat() * coeff
    };
    let analysis = analyze_block(&block, floor);
    let m = analysis.basis.ncols();
    let mut spectrum = analysis.svals.clone();
    spectrum.push(analysis.remainder_max_col);
    let rank_gap = if m == 0 {
        safe_ratio(floor, analysis.remainder_fro)
    } else {
        safe_ratio(analysis.svals[m - 1], analysis.remainder_max_col)
    };
    let indeterminate = rank_gap < T::of(RANK_GAP_FLOOR);
    let classification = if indeterminate {
        Classification::None_
    } else {
        classify(m)
    };
    DefectReport {
        defect_dim: m,
        defect_frame: Frame::from_orthonormal(analysis.basis, *tol)
            .expect("extracted defect basis is orthonormal"),
        residual_spectrum: spectrum,
        rank_gap,
        classification,
        indeterminate,
        guard_codim,
        reconstruction_residual: analysis.remainder_max_col,
    }
}

fn safe_ratio<T: Scalar>(num: T, den: T) -> T {
    if den <= T::of(1e-300) {
        T::infinity()
    } else {
        num / den
    }
}

/// Defect of a named shift operator on `M`.
///
/// For `T = S` the computation runs on the guard-compatible part of `M`
/// (top Taylor coefficient projected out, codimension at most one), which
/// keeps the applied shift exactly isometric; the removed codimension is
/// reported. For `T = S*` no guard is needed.
pub fn operator_defect<T: Scalar>(
    m: &Frame<T>,
    op: ShiftOp,
    tol: &Tolerances<T>,
) -> Result<DefectReport<T>> {
    tol.check_resolved()?;
    let (active, guard_codim) = match op {
        ShiftOp::S => {
            let g = guard_kernel(m, 1)?;
            let codim = m.dim() - g.dim();
            (g, codim)
        }
        ShiftOp::Sstar => (m.clone(), 0),
    };
    let images = match op {
        ShiftOp::S => block_shift_matrix(active.mat(), 1),
        ShiftOp::Sstar => block_backward_shift_matrix(active.mat(), 1),
    };
    Ok(defect_from_images(
        m,
        &images,
        guard_codim,
        tol,
        Classification::almost,
    ))
}

/// Near-invariance defect for `S*`: the out-of-space rank of `S*` applied to
/// `M₀ = {f ∈ M : f(0) = 0}`. By construction this never exceeds the
/// almost-invariance defect of `S*` on the same subspace.
pub fn nearly_sstar_defect<T: Scalar>(m: &Frame<T>, tol: &Tolerances<T>) -> Result<DefectReport<T>> {
    tol.check_resolved()?;
    let m0 = m.kernel_of_point_evaluation();
    let images = block_backward_shift_matrix(m0.mat(), 1);
    Ok(defect_from_images(m, &images, 0, tol, |md| {
        Classification::NearlyInvariant(md)
    }))
}

/// Reproducing kernel of `M` at the origin.
#[derive(Debug, Clone)]
pub enum KernelAtZero<T: Scalar> {
    /// `k₀ = P_M 1` with `‖k₀‖ > 0`; `f₀ = k₀/‖k₀‖` satisfies
    /// `f₀(0) = ‖k₀‖ > 0` automatically.
    Present {
        f0: TaylorVec<T>,
        k0: TaylorVec<T>,
        k0_norm: T,
    },
    /// Every member of `M` vanishes at the origin.
    AllVanish,
}

pub fn reproducing_kernel_zero<T: Scalar>(m: &Frame<T>) -> KernelAtZero<T> {
    if m.dim() == 0 {
        return KernelAtZero::AllVanish;
    }
    let u = DVector::from_fn(m.dim(), |j, _| m.mat()[(0, j)].conj());
    let norm = u.norm();
    if norm <= m.tol().rank_tol {
        return KernelAtZero::AllVanish;
    }
    let k0_vec = m.mat() * &u;
    let k0 = TaylorVec::from_dvector(&k0_vec);
    let f0 = k0.scale(Complex::new(T::one() / norm, T::zero()));
    KernelAtZero::Present { f0, k0, k0_norm: norm }
}

/// Outcome of the almost-vs-nearly classification for `S*`.
#[derive(Debug, Clone)]
pub struct ClassifyOutcome<T: Scalar> {
    pub near: DefectReport<T>,
    /// Residual of `S* f₀` against `M ⊕ F`; absent in the all-vanish case.
    pub s_star_f0_residual: Option<T>,
    pub classification: Classification,
}

/// Classify `M` under `S*`: nearly invariant with defect `m` always; almost
/// invariant with the same defect exactly when `S* f₀ ∈ M ⊕ F` (the
/// all-vanish case needs no extra condition).
pub fn almost_sstar_classify<T: Scalar>(
    m: &Frame<T>,
    tol: &Tolerances<T>,
) -> Result<ClassifyOutcome<T>> {
    let near = nearly_sstar_defect(m, tol)?;
    if near.indeterminate {
        return Ok(ClassifyOutcome {
            classification: Classification::None_,
            s_star_f0_residual: None,
            near,
        });
    }
    match reproducing_kernel_zero(m) {
        KernelAtZero::AllVanish => Ok(ClassifyOutcome {
            classification: Classification::almost(near.defect_dim),
            s_star_f0_residual: None,
            near,
        }),
        KernelAtZero::Present { f0, .. } => {
            let x = f0.backward_shift().to_dvector();
            let (_, rm) = m.project_vec(&x)?;
            let residual = if near.defect_frame.dim() == 0 {
                rm
            } else {
                let pm = m.mat() * m.mat().ad_mul(&x);
                let pf = near.defect_frame.mat() * near.defect_frame.mat().ad_mul(&x);
                (x - pm - pf).norm()
            };
            let classification = if residual <= tol.residual_tol {
                Classification::almost(near.defect_dim)
            } else {
                Classification::NearlyInvariant(near.defect_dim)
            };
            Ok(ClassifyOutcome {
                near,
                s_star_f0_residual: Some(residual),
                classification,
            })
        }
    }
}

/// Witness report: `M = (θ K_θ)⊥` for inner `θ` with `θ(0) = 0` is
/// almost-invariant for `S` with defect one, yet fails near `S*`-invariance:
/// `f = θ²` lies in `M`, vanishes at the origin, and `S* f` stays a positive
/// distance away from `M`.
#[derive(Debug, Clone)]
pub struct CounterexampleReport<T: Scalar> {
    pub s_defect: DefectReport<T>,
    pub membership_residual: T,
    pub f_value_at_zero: T,
    /// `‖(I − P_M) S* f‖` — bounded below by a positive margin.
    pub margin: T,
}

pub fn prop25_counterexample<T: Scalar>(
    theta: &BlaschkeProduct<T>,
    ambient_degree: usize,
    tol: &Tolerances<T>,
) -> Result<CounterexampleReport<T>> {
    if !theta.vanishes_at_zero() {
        return Err(Error::Precondition(
            "the counterexample needs θ(0) = 0 (a zero at the origin)".into(),
        ));
    }
    let n = ambient_degree;
    let square = theta.product(theta)?;
    let tol_run = tol.add_tail(square.tail_budget(n));
    tol_run.check_resolved()?;

    let k_theta = model_space(theta, n, &tol_run)?;
    let (theta_taylor, _) = theta.to_taylor(n)?;
    let (theta_k, _) = multiplier_space(&theta_taylor, &k_theta, n, &tol_run)?;
    let m = theta_k.orthocomplement();

    let s_defect = operator_defect(&m, ShiftOp::S, &tol_run)?;
    let (f, _) = square.to_taylor(n)?;
    let (_, membership_residual) = m.project(&f)?;
    let f_value_at_zero = f.value_at_zero().norm();
    let sf = f.backward_shift();
    let (_, margin) = m.project(&sf)?;
    Ok(CounterexampleReport {
        s_defect,
        membership_residual,
        f_value_at_zero,
        margin,
    })
}

/// Dual form of almost-invariance. For `T M ⊆ M ⊕ F` (operator named by
/// `op`, `F ⊥ M`), the adjoint carries `(M ⊕ F)⊥` into `M⊥`, and
/// `M⊥ = (M ⊕ F)⊥ ⊕ G` with `G = P_{M⊥} F` of the same dimension as `F`.
#[derive(Debug, Clone)]
pub struct RelationReport<T: Scalar> {
    /// Largest residual of an adjoint image of `(M ⊕ F)⊥` against `M⊥`.
    pub inclusion_residual: T,
    pub g_dim: usize,
    pub f_dim: usize,
    /// Distance between `(M ⊕ F)⊥ ⊕ G` and `M⊥`.
    pub decomposition_distance: T,
}

pub fn orthocomplement_relation_check<T: Scalar>(
    m: &Frame<T>,
    f: &Frame<T>,
    op: ShiftOp,
    tol: &Tolerances<T>,
) -> Result<RelationReport<T>> {
    if m.max_cross_inner(f) > T::of(1e-10) {
        return Err(Error::Precondition(
            "defect frame must be orthogonal to the subspace".into(),
        ));
    }
    let sum = m.sum(f)?;
    let w = sum.orthocomplement();
    // Adjoint images: op = S certifies S M ⊆ M ⊕ F, whose dual statement
    // moves (M ⊕ F)⊥ by S*; op = S* dually applies S under the guard.
    let images = match op {
        ShiftOp::S => block_backward_shift_matrix(w.mat(), 1),
        ShiftOp::Sstar => {
            let wg = guard_kernel(&w, 1)?;
            block_shift_matrix(wg.mat(), 1)
        }
    };
    // Residual against M⊥ is the projection onto M.
    let mut inclusion_residual = T::zero();
    if m.dim() > 0 {
        let coeff = m.mat().ad_mul(&images);
        for j in 0..coeff.ncols() {
            inclusion_residual = fmax(inclusion_residual, coeff.column(j).norm());
        }
    }
    let g = if f.dim() == 0 {
        Frame::zero(m.rows(), *tol)
    } else if m.dim() == 0 {
        f.clone()
    } else {
        let reduced = f.mat() - m.mat() * m.mat().ad_mul(f.mat());
        Frame::from_columns(&reduced, *tol)
    };
    let decomposition = w.sum(&g)?;
    let decomposition_distance = decomposition.distance(&m.orthocomplement());
    Ok(RelationReport {
        inclusion_residual,
        g_dim: g.dim(),
        f_dim: f.dim(),
        decomposition_distance,
    })
}

/// Impossibility of `S M = M ⊕ F` for nontrivial `M`: the shift is
/// injective, so `dim S M = dim M` falls short of `dim(M ⊕ F)` by exactly
/// `dim F`.
#[derive(Debug, Clone)]
pub struct StrictInclusionReport<T: Scalar> {
    /// Numerical rank of the shifted guarded basis (must equal its size).
    pub s_image_rank: usize,
    pub injective: bool,
    /// `dim(M ⊕ F) − dim M = dim F`: the obstruction to equality.
    pub gap: usize,
    /// `dim(M ⊕ F) − dim S M_g` at truncation.
    pub truncated_codim: usize,
    pub inclusion_residual: T,
}

pub fn strict_inclusion_check<T: Scalar>(
    m: &Frame<T>,
    f: &Frame<T>,
    tol: &Tolerances<T>,
) -> Result<StrictInclusionReport<T>> {
    let guarded = guard_kernel(m, 1)?;
    let images = block_shift_matrix(guarded.mat(), 1);
    let sum = m.sum(f)?;
    let mut inclusion_residual = T::zero();
    for j in 0..images.ncols() {
        let col = images.column(j).into_owned();
        let (_, r) = sum.project_vec(&col)?;
        inclusion_residual = fmax(inclusion_residual, r);
    }
    if inclusion_residual > tol.residual_tol {
        return Err(Error::Precondition(format!(
            "S M ⊆ M ⊕ F fails: residual {:.3e}",
            inclusion_residual.to_f64_lossy()
        )));
    }
    // The guarded shift is exactly isometric, so the image Gram matrix is the
    // identity up to rounding and the rank equals the guarded dimension.
    let image_frame = Frame::from_orthonormal(images, *tol)?;
    let s_image_rank = image_frame.dim();
    let injective = s_image_rank == guarded.dim();
    Ok(StrictInclusionReport {
        s_image_rank,
        injective,
        gap: f.dim(),
        truncated_codim: sum.dim() - s_image_rank,
        inclusion_residual,
    })
}
