//! The generalized Hitt iteration: coefficient-stream decomposition of
//! members of a nearly `S*`-invariant subspace with finite defect, the
//! extraction of the associated backward-shift-invariant subspace `K` of a
//! vector-valued Hardy space, and the converse synthesis.
//!
//! For `f` in such a subspace `M` the iteration peels one Taylor layer per
//! step: split off the reproducing-kernel component `α_k f₀`, apply `S*`,
//! record the defect components `β_{k,j} = ⟨S*f₁, e_j⟩`, and continue with
//! the projection back into `M`. Norm bookkeeping is exact at every step:
//! each split is orthogonal, so `‖f‖² = Σ|α|² + Σ|β|² + ‖g_n‖²` up to
//! rounding plus the reported projection leak.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::frame::{Frame, ProductFrame};
use crate::hardy::{multiply_truncate, TaylorVec};
use crate::invariance::{nearly_sstar_defect, reproducing_kernel_zero, KernelAtZero};
use crate::model::block_backward_shift_matrix;
use crate::scalar::{abs, fmax, sqrt, Cx, Scalar};
use crate::tolerance::Tolerances;

/// Which branch of the structure theorem applies to the subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HittCase {
    /// Some member of `M` does not vanish at the origin; the decomposition
    /// carries a `k₀` stream against the normalized reproducing kernel.
    I,
    /// Every member vanishes at the origin; only defect streams appear.
    II,
}

impl std::fmt::Display for HittCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HittCase::I => write!(f, "i"),
            HittCase::II => write!(f, "ii"),
        }
    }
}

/// Iteration controls: hard step cap and the relative norm threshold that
/// declares convergence. The compressed iteration operator has spectral
/// radius below one at truncation, so geometric decay is expected; the cap
/// protects against near-degenerate spectra.
#[derive(Debug, Clone, Copy)]
pub struct HittOptions<T: Scalar> {
    pub n_max: usize,
    pub conv_tol: T,
}

impl<T: Scalar> HittOptions<T> {
    pub fn for_degree(ambient_degree: usize) -> Self {
        HittOptions {
            n_max: 4 * (ambient_degree + 1),
            conv_tol: T::of(1e-10),
        }
    }
}

/// Per-subspace data shared by every member decomposition: the case, the
/// normalized reproducing kernel (case i) and the canonical defect basis
/// from the near-invariance computation (left singular vectors ordered by
/// singular value, deterministic phase).
#[derive(Debug, Clone)]
pub struct HittContext<T: Scalar> {
    pub case: HittCase,
    pub f0: Option<TaylorVec<T>>,
    pub defect: Frame<T>,
}

impl<T: Scalar> HittContext<T> {
    pub fn new(m: &Frame<T>, tol: &Tolerances<T>) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::Precondition(
                "cannot decompose members of the zero subspace".into(),
            ));
        }
        let near = nearly_sstar_defect(m, tol)?;
        let (case, f0) = match reproducing_kernel_zero(m) {
            KernelAtZero::Present { f0, .. } => (HittCase::I, Some(f0)),
            KernelAtZero::AllVanish => (HittCase::II, None),
        };
        Ok(HittContext {
            case,
            f0,
            defect: near.defect_frame,
        })
    }

    pub fn defect_dim(&self) -> usize {
        self.defect.dim()
    }

    /// Number of stream components: `m + 1` in case (i), `m` in case (ii).
    pub fn blocks(&self) -> usize {
        match self.case {
            HittCase::I => self.defect.dim() + 1,
            HittCase::II => self.defect.dim(),
        }
    }
}

/// One iteration step applied to `g ∈ M`.
#[derive(Debug, Clone)]
pub struct HittStep<T: Scalar> {
    /// `⟨g, f₀⟩`; absent in case (ii).
    pub alpha: Option<Cx<T>>,
    /// `β_j = ⟨S* f₁, e_j⟩` against the defect basis.
    pub beta: Vec<Cx<T>>,
    /// `P_M S* f₁` — the next iterate.
    pub g_next: TaylorVec<T>,
    /// Norm of the part of `S* f₁` captured by neither `M` nor the defect
    /// basis; zero for an exactly nearly-invariant subspace.
    pub leak: T,
}

/// Single step of the iteration with explicit inputs. `f0` selects case (i)
/// behaviour; `e` may be any orthonormal basis of the defect space
/// (orthogonal to `M`).
pub fn hitt_step<T: Scalar>(
    g: &TaylorVec<T>,
    m: &Frame<T>,
    f0: Option<&TaylorVec<T>>,
    e: &Frame<T>,
    tol: &Tolerances<T>,
) -> Result<HittStep<T>> {
    let gv = g.to_dvector();
    let gnorm = gv.norm();
    let (_, residual) = m.project_vec(&gv)?;
    if residual > tol.residual_tol * fmax(T::one(), gnorm) {
        return Err(Error::Precondition(format!(
            "hitt_step input is not a member of the subspace: residual {:.3e}",
            residual.to_f64_lossy()
        )));
    }
    if e.dim() > 0 && m.max_cross_inner(e) > T::of(1e-9) {
        return Err(Error::Precondition(
            "defect basis must be orthogonal to the subspace".into(),
        ));
    }
    let state = step_raw(&gv, m, f0.map(|f| f.to_dvector()).as_ref(), e);
    Ok(HittStep {
        alpha: state.alpha,
        beta: state.beta.iter().copied().collect(),
        g_next: TaylorVec::from_dvector(&state.g_next),
        leak: state.leak,
    })
}

struct RawStep<T: Scalar> {
    alpha: Option<Cx<T>>,
    beta: DVector<Cx<T>>,
    g_next: DVector<Cx<T>>,
    leak: T,
}

fn step_raw<T: Scalar>(
    g: &DVector<Cx<T>>,
    m: &Frame<T>,
    f0: Option<&DVector<Cx<T>>>,
    e: &Frame<T>,
) -> RawStep<T> {
    // Case (i): strip the reproducing-kernel component so that f₁(0) = 0.
    let (alpha, f1) = match f0 {
        Some(f0v) => {
            let a = f0v.dotc(g);
            (Some(a), g - f0v * a)
        }
        None => (None, g.clone_owned()),
    };
    // Backward shift: coefficients move down one index. Exact.
    let n = f1.nrows();
    let mut sf = DVector::zeros(n);
    for i in 1..n {
        sf[i - 1] = f1[i];
    }
    let beta = if e.dim() > 0 {
        e.mat().ad_mul(&sf)
    } else {
        DVector::zeros(0)
    };
    let g_next = if m.dim() > 0 {
        m.mat() * m.mat().ad_mul(&sf)
    } else {
        DVector::zeros(n)
    };
    let mut rest = sf - &g_next;
    if e.dim() > 0 {
        rest -= e.mat() * &beta;
    }
    RawStep {
        alpha,
        beta,
        g_next,
        leak: rest.norm(),
    }
}

/// Output of the full iteration on one member.
#[derive(Debug, Clone)]
pub struct HittDecomposition<T: Scalar> {
    pub case: HittCase,
    /// `α_0, α_1, …` — empty in case (ii).
    pub alpha: Vec<Cx<T>>,
    /// `beta[k][j] = β_{k+1, j}`: defect coefficients of step `k`.
    pub beta: Vec<Vec<Cx<T>>>,
    pub f0: Option<TaylorVec<T>>,
    pub defect_basis: Vec<TaylorVec<T>>,
    /// `‖g_0‖ = ‖f‖, ‖g_1‖, …` — non-increasing.
    pub g_norm_trace: Vec<T>,
    /// `‖f − k₀ f₀ − Σ_j z k_j e_j‖` with products truncated at `N`.
    pub reconstruction_residual: T,
    /// `| ‖f‖² − Σ|α|² − Σ|β|² − ‖g_n‖² |`.
    pub parseval_residual: T,
    pub converged: bool,
    /// `k₀(z) = Σ α_k z^k`, truncated to the ambient degree (case i).
    pub k0: Option<TaylorVec<T>>,
    /// `k_j(z) = Σ_{k≥1} β_{k,j} z^{k−1}`, truncated to the ambient degree.
    pub k_streams: Vec<TaylorVec<T>>,
    /// Largest per-step projection leak observed.
    pub max_leak: T,
}

/// Decompose one member of `M`; case and defect basis are determined from
/// the subspace itself.
pub fn hitt_decompose<T: Scalar>(
    m: &Frame<T>,
    f: &TaylorVec<T>,
    opts: &HittOptions<T>,
    tol: &Tolerances<T>,
) -> Result<HittDecomposition<T>> {
    let ctx = HittContext::new(m, tol)?;
    hitt_decompose_with(&ctx, m, f, opts, tol)
}

/// Decompose with a precomputed context (shared across members of the same
/// subspace).
pub fn hitt_decompose_with<T: Scalar>(
    ctx: &HittContext<T>,
    m: &Frame<T>,
    f: &TaylorVec<T>,
    opts: &HittOptions<T>,
    tol: &Tolerances<T>,
) -> Result<HittDecomposition<T>> {
    let n = m.ambient_degree();
    if f.ambient_degree() != n {
        return Err(Error::DimensionMismatch {
            context: "hitt_decompose ambient degree",
            expected: n,
            got: f.ambient_degree(),
        });
    }
    let fv = f.to_dvector();
    let fnorm = fv.norm();
    let (_, membership) = m.project_vec(&fv)?;
    if membership > tol.residual_tol * fmax(T::one(), fnorm) {
        return Err(Error::Precondition(format!(
            "hitt_decompose input is not a member of the subspace: residual {:.3e}",
            membership.to_f64_lossy()
        )));
    }
    let f0v = ctx.f0.as_ref().map(|f0| f0.to_dvector());
    let e = &ctx.defect;
    let md = e.dim();

    let mut alpha: Vec<Cx<T>> = Vec::new();
    let mut beta: Vec<Vec<Cx<T>>> = Vec::new();
    let mut trace = vec![fnorm];
    let mut max_leak = T::zero();
    let mut g = fv.clone_owned();
    let mut converged = fnorm == T::zero();
    while !converged && trace.len() <= opts.n_max {
        let step = step_raw(&g, m, f0v.as_ref(), e);
        if let Some(a) = step.alpha {
            alpha.push(a);
        }
        beta.push(step.beta.iter().copied().collect());
        max_leak = fmax(max_leak, step.leak);
        g = step.g_next;
        let gn = g.norm();
        trace.push(gn);
        if gn <= opts.conv_tol * fmax(fnorm, T::epsilon()) {
            converged = true;
        }
    }

    // Assemble the streams, truncated to the ambient window.
    let k0 = match ctx.case {
        HittCase::I => {
            let mut v = TaylorVec::zero(n);
            for (k, a) in alpha.iter().enumerate().take(n + 1) {
                v.coeffs_mut()[k] = *a;
            }
            Some(v)
        }
        HittCase::II => None,
    };
    let mut k_streams = Vec::with_capacity(md);
    for j in 0..md {
        let mut v = TaylorVec::zero(n);
        for (k, row) in beta.iter().enumerate().take(n + 1) {
            v.coeffs_mut()[k] = row[j];
        }
        // stored as k_j: coefficient of z^{k} in z·k_j is β_{k+1,j}
        k_streams.push(v);
    }

    let defect_basis: Vec<TaylorVec<T>> = (0..md).map(|j| e.column_taylor(j)).collect();

    // Reconstruction residual.
    let mut recon = TaylorVec::zero(n);
    if let (Some(k0v), Some(f0)) = (k0.as_ref(), ctx.f0.as_ref()) {
        let (p, _) = multiply_truncate(k0v, f0, n);
        recon = recon.axpy(Complex::new(T::one(), T::zero()), &p)?;
    }
    for (j, kj) in k_streams.iter().enumerate() {
        // z·k_j then multiply by e_j
        let mut zk = TaylorVec::zero(n);
        for i in 1..=n {
            zk.coeffs_mut()[i] = kj.coeff(i - 1);
        }
        let (p, _) = multiply_truncate(&zk, &defect_basis[j], n);
        recon = recon.axpy(Complex::new(T::one(), T::zero()), &p)?;
    }
    let reconstruction_residual = f.sub(&recon)?.norm();

    // Exact norm bookkeeping.
    let alpha_energy: T = alpha.iter().map(|a| a.norm_sqr()).sum();
    let beta_energy: T = beta
        .iter()
        .map(|row| row.iter().map(|b| b.norm_sqr()).sum::<T>())
        .sum();
    let gn = *trace.last().expect("trace is nonempty");
    let parseval_residual = abs(fnorm * fnorm - alpha_energy - beta_energy - gn * gn);

    Ok(HittDecomposition {
        case: ctx.case,
        alpha,
        beta,
        f0: ctx.f0.clone(),
        defect_basis,
        g_norm_trace: trace,
        reconstruction_residual,
        parseval_residual,
        converged,
        k0,
        k_streams,
        max_leak,
    })
}

/// The extracted vector-valued subspace together with its certificates.
#[derive(Debug, Clone)]
pub struct KExtraction<T: Scalar> {
    pub case: HittCase,
    pub k: ProductFrame<T>,
    pub f0: Option<TaylorVec<T>>,
    pub defect: Frame<T>,
    /// `max | ‖(k₀,…,k_m)‖ − 1 |` over images of the orthonormal basis.
    pub isometry_residual: T,
    /// Largest residual of a block-backward-shift image against `K`.
    pub invariance_residual: T,
    pub converged: bool,
}

/// Decompose every column of `M` and stack the coefficient streams into an
/// orthonormal frame for `K ⊆ H²(ℂ^{blocks})`.
pub fn extract_k_subspace<T: Scalar>(
    m: &Frame<T>,
    opts: &HittOptions<T>,
    tol: &Tolerances<T>,
) -> Result<KExtraction<T>> {
    let ctx = HittContext::new(m, tol)?;
    let n = m.ambient_degree();
    let blocks = ctx.blocks();
    if blocks == 0 {
        return Err(Error::Precondition(
            "nontrivial all-vanishing subspace with zero defect cannot occur; nothing to extract"
                .into(),
        ));
    }
    let rows = blocks * (n + 1);
    let mut stacked = DMatrix::zeros(rows, m.dim());
    let mut isometry_residual = T::zero();
    let mut converged = true;
    for j in 0..m.dim() {
        let col = m.column_taylor(j);
        let dec = hitt_decompose_with(&ctx, m, &col, opts, tol)?;
        converged &= dec.converged;
        let mut offset = 0usize;
        if let Some(k0) = dec.k0.as_ref() {
            for i in 0..=n {
                stacked[(i, j)] = k0.coeff(i);
            }
            offset = 1;
        }
        for (b, kj) in dec.k_streams.iter().enumerate() {
            for i in 0..=n {
                stacked[((offset + b) * (n + 1) + i, j)] = kj.coeff(i);
            }
        }
        let stack_norm = stacked.column(j).norm();
        isometry_residual = fmax(isometry_residual, abs(stack_norm - T::one()));
    }
    let k_frame = Frame::from_near_orthonormal(&stacked, *tol);
    let k = ProductFrame::new(blocks, n + 1, k_frame)?;

    // Block-backward-shift invariance of K.
    let images = block_backward_shift_matrix(k.frame().mat(), blocks);
    let mut invariance_residual = T::zero();
    for j in 0..images.ncols() {
        let col = images.column(j).into_owned();
        let (_, r) = k.frame().project_vec(&col)?;
        invariance_residual = fmax(invariance_residual, r);
    }
    Ok(KExtraction {
        case: ctx.case,
        k,
        f0: ctx.f0,
        defect: ctx.defect,
        isometry_residual,
        invariance_residual,
        converged,
    })
}

/// Converse synthesis: given a stream subspace `K`, a kernel candidate and a
/// defect basis, rebuild `M = {k₀ f₀ + Σ_j z k_j e_j}` with truncated
/// products.
pub fn synthesize_from_k<T: Scalar>(
    k: &ProductFrame<T>,
    f0: Option<&TaylorVec<T>>,
    e: &Frame<T>,
    ambient_degree: usize,
    tol: &Tolerances<T>,
) -> Result<Frame<T>> {
    let n = ambient_degree;
    let expected_blocks = usize::from(f0.is_some()) + e.dim();
    if k.blocks() != expected_blocks {
        return Err(Error::DimensionMismatch {
            context: "synthesize_from_k block count",
            expected: expected_blocks,
            got: k.blocks(),
        });
    }
    if k.block_rows() != n + 1 || e.rows() != n + 1 {
        return Err(Error::DimensionMismatch {
            context: "synthesize_from_k ambient degree",
            expected: n + 1,
            got: k.block_rows(),
        });
    }
    if k.dim() == 0 {
        return Ok(Frame::zero(n + 1, *tol));
    }
    let mut mat = DMatrix::zeros(n + 1, k.dim());
    for j in 0..k.dim() {
        let mut acc = TaylorVec::zero(n);
        let mut offset = 0usize;
        if let Some(f0) = f0 {
            let k0 = k.block_of_column(j, 0);
            let (p, _) = multiply_truncate(&k0, f0, n);
            acc = acc.axpy(Complex::new(T::one(), T::zero()), &p)?;
            offset = 1;
        }
        for b in 0..e.dim() {
            let kj = k.block_of_column(j, offset + b);
            let mut zk = TaylorVec::zero(n);
            for i in 1..=n {
                zk.coeffs_mut()[i] = kj.coeff(i - 1);
            }
            let ej = e.column_taylor(b);
            let (p, _) = multiply_truncate(&zk, &ej, n);
            acc = acc.axpy(Complex::new(T::one(), T::zero()), &p)?;
        }
        for i in 0..=n {
            mat[(i, j)] = acc.coeff(i);
        }
    }
    if k.dim() <= 128 {
        Ok(Frame::from_columns(&mat, *tol))
    } else {
        Ok(Frame::from_near_orthonormal(&mat, *tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::BlaschkeProduct;
    use crate::model::{multiplier_space, takenaka_malmquist_basis, theta_h2};

    type C = Cx<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn monomial_frame(ks: &[usize], deg: usize) -> Frame<f64> {
        let vecs: Vec<_> = ks
            .iter()
            .map(|&k| TaylorVec::monomial(k, deg).unwrap())
            .collect();
        Frame::from_spanning(&vecs, tol()).unwrap()
    }

    fn half() -> BlaschkeProduct<f64> {
        BlaschkeProduct::from_zeros(vec![c(0.5, 0.0)]).unwrap()
    }

    #[test]
    fn step_on_model_space() {
        // M = K_{z²}, f₀ = 1, E empty, g = 1 + z → α = 1, g_next = 1.
        let n = 8;
        let m = monomial_frame(&[0, 1], n);
        let f0 = TaylorVec::monomial(0, n).unwrap();
        let e = Frame::zero(n + 1, tol());
        let mut g = TaylorVec::zero(n);
        g.coeffs_mut()[0] = c(1.0, 0.0);
        g.coeffs_mut()[1] = c(1.0, 0.0);
        let step = hitt_step(&g, &m, Some(&f0), &e, &tol()).unwrap();
        assert_eq!(step.alpha.unwrap(), c(1.0, 0.0));
        assert!(step.beta.is_empty());
        let expect = TaylorVec::monomial(0, n).unwrap();
        assert!(step.g_next.sub(&expect).unwrap().norm() < 1e-13);
        assert!(step.leak < 1e-13);
    }

    #[test]
    fn step_case_two_defect_coefficient() {
        // M = θH², θ = z·b_{1/2}, E = span{b_{1/2}}, g = θ → β₁ = 1, g_next = 0.
        let n = 64;
        let theta = BlaschkeProduct::monomial(1).product(&half()).unwrap();
        let m = theta_h2(&theta, n, &tol()).unwrap();
        let (bt, _) = half().to_taylor(n).unwrap();
        let e = Frame::from_spanning(&[bt], tol()).unwrap();
        let (tt, _) = theta.to_taylor(n).unwrap();
        let step = hitt_step(&tt, &m, None, &e, &tol()).unwrap();
        assert_eq!(step.beta.len(), 1);
        assert!((step.beta[0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!(step.g_next.norm() < 1e-10);
    }

    #[test]
    fn step_zero_input() {
        let n = 8;
        let m = monomial_frame(&[0, 1], n);
        let e = Frame::zero(n + 1, tol());
        let z = TaylorVec::zero(n);
        let step = hitt_step(&z, &m, None, &e, &tol()).unwrap();
        assert!(step.g_next.norm() == 0.0);
        assert!(step.leak == 0.0);
    }

    #[test]
    fn step_rejects_non_member() {
        let n = 8;
        let m = monomial_frame(&[0, 1], n);
        let e = Frame::zero(n + 1, tol());
        let outsider = TaylorVec::monomial(5, n).unwrap();
        assert!(matches!(
            hitt_step(&outsider, &m, None, &e, &tol()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn decompose_model_space_member() {
        // M = K_{z²}, f = 1 + z → α = (1, 1), reconstruction exact.
        let n = 8;
        let m = monomial_frame(&[0, 1], n);
        let mut f = TaylorVec::zero(n);
        f.coeffs_mut()[0] = c(1.0, 0.0);
        f.coeffs_mut()[1] = c(1.0, 0.0);
        let dec = hitt_decompose(&m, &f, &HittOptions::for_degree(n), &tol()).unwrap();
        assert_eq!(dec.case, HittCase::I);
        assert!(dec.converged);
        assert_eq!(dec.alpha.len(), 2);
        assert!((dec.alpha[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((dec.alpha[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(dec.reconstruction_residual < 1e-12);
        assert!(dec.parseval_residual < 1e-12 * f.norm_sqr());
        let k0 = dec.k0.unwrap();
        assert!((k0.coeff(0) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((k0.coeff(1) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn decompose_case_two_range() {
        let n = 64;
        let theta = BlaschkeProduct::monomial(1).product(&half()).unwrap();
        let m = theta_h2(&theta, n, &tol()).unwrap();
        let (tt, _) = theta.to_taylor(n).unwrap();
        let dec = hitt_decompose(&m, &tt, &HittOptions::for_degree(n), &tol()).unwrap();
        assert_eq!(dec.case, HittCase::II);
        assert!(dec.alpha.is_empty());
        assert!(dec.converged);
        // single defect stream with |β₁| = 1 (phase of e₁ is the SVD's)
        assert_eq!(dec.beta[0].len(), 1);
        assert!((dec.beta[0][0].norm() - 1.0).abs() < 1e-9);
        let tail: f64 = dec.beta.iter().skip(1).map(|r| r[0].norm_sqr()).sum();
        assert!(tail < 1e-16);
        assert!(dec.parseval_residual < 1e-10);
        assert!(dec.reconstruction_residual < 1e-9);
    }

    #[test]
    fn decompose_multiplier_space_member() {
        let n = 128;
        let g = half();
        let (gt, _) = g.to_taylor(n).unwrap();
        let k = takenaka_malmquist_basis(&BlaschkeProduct::monomial(3), n, &tol()).unwrap();
        let (m, _) = multiplier_space(&gt, &k, n, &tol()).unwrap();
        // deterministic pseudo-random member
        let mut f = TaylorVec::zero(n);
        for j in 0..m.dim() {
            let col = m.column_taylor(j);
            let w = c(0.3 + 0.4 * j as f64, -0.2 + 0.1 * j as f64);
            f = f.axpy(w, &col).unwrap();
        }
        let dec = hitt_decompose(&m, &f, &HittOptions::for_degree(n), &tol()).unwrap();
        assert!(dec.converged);
        assert!(dec.reconstruction_residual <= 1e-7 * f.norm());
        assert!(dec.parseval_residual <= 1e-7 * f.norm_sqr());
        // trace is non-increasing
        for w in dec.g_norm_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn extract_model_space_is_identity_block() {
        // M = K_{z³}: case i, m = 0, K recovers the Taylor data.
        let n = 24;
        let m = monomial_frame(&[0, 1, 2], n);
        let ex = extract_k_subspace(&m, &HittOptions::for_degree(n), &tol()).unwrap();
        assert_eq!(ex.case, HittCase::I);
        assert_eq!(ex.k.blocks(), 1);
        assert_eq!(ex.k.dim(), 3);
        assert!(ex.isometry_residual <= 1e-10);
        assert!(ex.invariance_residual <= 1e-10);
        let expect = monomial_frame(&[0, 1, 2], n);
        assert!(ex.k.frame().distance(&expect) <= 1e-9);
    }

    #[test]
    fn extract_case_two_full_block() {
        // M = θH² with θ = z²: case ii, m = 1, e₁ = z, K = full window.
        let n = 24;
        let m = theta_h2(&BlaschkeProduct::monomial(2), n, &tol()).unwrap();
        let ex = extract_k_subspace(&m, &HittOptions::for_degree(n), &tol()).unwrap();
        assert_eq!(ex.case, HittCase::II);
        assert_eq!(ex.k.blocks(), 1);
        assert_eq!(ex.defect.dim(), 1);
        let e1 = monomial_frame(&[1], n);
        assert!(ex.defect.distance(&e1) <= 1e-10);
        assert!(ex.invariance_residual <= 1e-9);
        // K is the image of a (N−1)-dimensional space inside the window
        assert_eq!(ex.k.dim(), m.dim());
    }

    #[test]
    fn extract_multiplier_space() {
        let n = 64;
        let g = half();
        let (gt, _) = g.to_taylor(n).unwrap();
        let k = takenaka_malmquist_basis(&BlaschkeProduct::monomial(2), n, &tol()).unwrap();
        let (m, _) = multiplier_space(&gt, &k, n, &tol()).unwrap();
        let ex = extract_k_subspace(&m, &HittOptions::for_degree(n), &tol()).unwrap();
        assert_eq!(ex.case, HittCase::I);
        assert_eq!(ex.defect.dim(), 0);
        assert_eq!(ex.k.dim(), 2);
        assert!(ex.isometry_residual <= 1e-8);
    }

    #[test]
    fn synthesize_round_trip() {
        // M = g K_{z³} → extract → synthesize → same subspace.
        let n = 96;
        let g = half();
        let (gt, _) = g.to_taylor(n).unwrap();
        let k = takenaka_malmquist_basis(&BlaschkeProduct::monomial(3), n, &tol()).unwrap();
        let (m, _) = multiplier_space(&gt, &k, n, &tol()).unwrap();
        let ex = extract_k_subspace(&m, &HittOptions::for_degree(n), &tol()).unwrap();
        let rebuilt = synthesize_from_k(
            &ex.k,
            ex.f0.as_ref(),
            &ex.defect,
            n,
            &tol(),
        )
        .unwrap();
        assert_eq!(rebuilt.dim(), m.dim());
        assert!(m.distance(&rebuilt) <= 1e-7, "distance {}", m.distance(&rebuilt));
    }

    #[test]
    fn synthesize_simple_block() {
        // K = span{(1, 0)} in two blocks with f₀ = 1: M = span{1}.
        let n = 8;
        let mut mat = DMatrix::zeros(2 * (n + 1), 1);
        mat[(0, 0)] = c(1.0, 0.0);
        let kf = Frame::from_orthonormal(mat, tol()).unwrap();
        let k = ProductFrame::new(2, n + 1, kf).unwrap();
        let f0 = TaylorVec::monomial(0, n).unwrap();
        let e = monomial_frame(&[1], n);
        let m = synthesize_from_k(&k, Some(&f0), &e, n, &tol()).unwrap();
        assert_eq!(m.dim(), 1);
        assert!(m.distance(&monomial_frame(&[0], n)) <= 1e-12);
    }

    #[test]
    fn synthesize_block_mismatch() {
        let n = 8;
        let mut mat = DMatrix::zeros(2 * (n + 1), 1);
        mat[(0, 0)] = c(1.0, 0.0);
        let kf = Frame::from_orthonormal(mat, tol()).unwrap();
        let k = ProductFrame::new(2, n + 1, kf).unwrap();
        let e = Frame::zero(n + 1, tol());
        assert!(matches!(
            synthesize_from_k(&k, None, &e, n, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn case_dispatch_matches_kernel_flag() {
        let n = 32;
        for (frame, expect) in [
            (monomial_frame(&[0, 1], n), HittCase::I),
            (monomial_frame(&[1, 2], n), HittCase::II),
        ] {
            let ctx = HittContext::new(&frame, &tol()).unwrap();
            assert_eq!(ctx.case, expect);
        }
    }
}
