//! Truncated Hardy-space arithmetic: Taylor coefficient vectors on the disc,
//! the shift and backward shift, finite Blaschke products and their
//! expansions.
//!
//! A `TaylorVec` holds coefficients `c_0..c_N` of an analytic function on the
//! unit disc; Parseval gives `‖f‖² = Σ |c_k|²`. The shift `S f(z) = z f(z)`
//! moves coefficients up one index and is kept honestly isometric by a hard
//! guard on the top coefficient: mass is never silently dropped off the
//! truncation window.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::scalar::{abs, fmax, powi, sqrt, Cx, Scalar};
use crate::tolerance::Tolerances;

/// Largest admissible Blaschke zero modulus. With ambient degree `N = 128`
/// the geometric tail `0.9^129` is below `1.3e-6`; runs that need tighter
/// residuals must raise `N` and the tolerance machinery enforces that.
pub const ZERO_MODULUS_CAP: f64 = 0.9;

/// Unimodularity slack allowed for the Blaschke constant.
pub const CONSTANT_UNIMODULAR_TOL: f64 = 1e-14;

/// Finite complex coefficient vector `c_0..c_N` of a truncated analytic
/// function on the disc.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorVec<T: Scalar> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Scalar> TaylorVec<T> {
    /// Build from raw coefficients. Requires ambient degree `N ≥ 1`
    /// (at least two coefficients) and finite entries.
    pub fn new(coeffs: Vec<Cx<T>>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput(
                "a TaylorVec needs ambient degree N >= 1".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("TaylorVec coefficients"));
        }
        Ok(TaylorVec { coeffs })
    }

    /// The zero function at ambient degree `n`.
    pub fn zero(ambient_degree: usize) -> Self {
        TaylorVec {
            coeffs: vec![Cx::new(T::zero(), T::zero()); ambient_degree + 1],
        }
    }

    /// The monomial `z^k` at ambient degree `n`.
    pub fn monomial(k: usize, ambient_degree: usize) -> Result<Self> {
        if k > ambient_degree {
            return Err(Error::DimensionMismatch {
                context: "monomial degree",
                expected: ambient_degree,
                got: k,
            });
        }
        let mut v = Self::zero(ambient_degree);
        v.coeffs[k] = Cx::new(T::one(), T::zero());
        Ok(v)
    }

    pub fn ambient_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Cx<T> {
        self.coeffs[k]
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Cx<T>] {
        &mut self.coeffs
    }

    /// Largest index `k` with `|c_k| > 0`, or `None` for the zero vector.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| c.norm_sqr() > T::zero())
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        sqrt(self.norm_sqr())
    }

    /// `f(0)`, exactly `c_0`.
    pub fn value_at_zero(&self) -> Cx<T> {
        self.coeffs[0]
    }

    /// L²(𝕋) inner product in coefficient form: `Σ c_k(f) conj(c_k(g))`,
    /// linear in `self` and conjugate-linear in `other`.
    pub fn inner(&self, other: &Self) -> Result<Cx<T>> {
        if self.ambient_degree() != other.ambient_degree() {
            return Err(Error::DimensionMismatch {
                context: "inner product ambient degrees",
                expected: self.ambient_degree(),
                got: other.ambient_degree(),
            });
        }
        let mut acc = Cx::new(T::zero(), T::zero());
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            acc += a * b.conj();
        }
        Ok(acc)
    }

    /// Horner evaluation of the truncated series at `|z| ≤ 1`.
    pub fn evaluate(&self, z: Cx<T>) -> Result<Cx<T>> {
        let r = z.norm();
        if r > T::one() + T::of(1e-12) {
            return Err(Error::OutsideDisc {
                modulus: r.to_f64_lossy(),
            });
        }
        let mut acc = Cx::new(T::zero(), T::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        Ok(acc)
    }

    /// The shift `S f(z) = z f(z)`. Guarded: the top coefficient must vanish
    /// within `tol.tail_tol`, otherwise mass would fall off the window and
    /// the isometry `‖S f‖ = ‖f‖` would be silently destroyed.
    pub fn shift(&self, tol: &Tolerances<T>) -> Result<Self> {
        let top = self.coeffs[self.ambient_degree()].norm();
        if top > tol.tail_tol {
            return Err(Error::ShiftOverflow {
                magnitude: top.to_f64_lossy(),
                guard: tol.tail_tol.to_f64_lossy(),
            });
        }
        let mut out = Self::zero(self.ambient_degree());
        for k in 1..self.coeffs.len() {
            out.coeffs[k] = self.coeffs[k - 1];
        }
        Ok(out)
    }

    /// The backward shift `S* f(z) = (f(z) − f(0)) / z`: coefficients move
    /// down one index, `c_0` is discarded. Always defined;
    /// `‖S* f‖² = ‖f‖² − |f(0)|²` exactly.
    pub fn backward_shift(&self) -> Self {
        let mut out = Self::zero(self.ambient_degree());
        for k in 1..self.coeffs.len() {
            out.coeffs[k - 1] = self.coeffs[k];
        }
        out
    }

    /// Scale by a complex constant.
    pub fn scale(&self, c: Cx<T>) -> Self {
        TaylorVec {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `self + c * other` (ambient degrees must match).
    pub fn axpy(&self, c: Cx<T>, other: &Self) -> Result<Self> {
        if self.ambient_degree() != other.ambient_degree() {
            return Err(Error::DimensionMismatch {
                context: "axpy ambient degrees",
                expected: self.ambient_degree(),
                got: other.ambient_degree(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b * c)
            .collect();
        Ok(TaylorVec { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Cx::new(-T::one(), T::zero()), other)
    }

    /// Copy into a dense column vector (the frame-side representation).
    pub fn to_dvector(&self) -> DVector<Cx<T>> {
        DVector::from_column_slice(&self.coeffs)
    }

    pub fn from_dvector(v: &DVector<Cx<T>>) -> Self {
        TaylorVec {
            coeffs: v.iter().copied().collect(),
        }
    }

    /// Truncate or zero-pad to a new ambient degree. Truncation reports the
    /// discarded energy.
    pub fn resize(&self, ambient_degree: usize) -> (Self, T) {
        let mut out = Self::zero(ambient_degree);
        let keep = usize::min(self.coeffs.len(), ambient_degree + 1);
        out.coeffs[..keep].copy_from_slice(&self.coeffs[..keep]);
        let dropped: T = self.coeffs[keep..].iter().map(|c| c.norm_sqr()).sum();
        (out, sqrt(dropped))
    }
}

/// Cauchy-product coefficients of `f·g` through degree `N`; the discarded
/// tail energy (ℓ² norm of coefficients above `N`) is returned alongside.
pub fn multiply_truncate<T: Scalar>(
    f: &TaylorVec<T>,
    g: &TaylorVec<T>,
    ambient_degree: usize,
) -> (TaylorVec<T>, T) {
    let df = f.effective_degree().unwrap_or(0);
    let dg = g.effective_degree().unwrap_or(0);
    let full = df + dg;
    let mut coeffs = vec![Cx::new(T::zero(), T::zero()); full + 1];
    for i in 0..=df {
        let fi = f.coeffs[i];
        if fi.norm_sqr() == T::zero() {
            continue;
        }
        for j in 0..=dg {
            coeffs[i + j] += fi * g.coeffs[j];
        }
    }
    let mut out = TaylorVec::zero(ambient_degree);
    let keep = usize::min(full, ambient_degree);
    out.coeffs[..=keep].copy_from_slice(&coeffs[..=keep]);
    let dropped: T = coeffs
        .iter()
        .skip(ambient_degree + 1)
        .map(|c| c.norm_sqr())
        .sum();
    (out, sqrt(dropped))
}

/// Finite Blaschke product: a list of zeros in the open disc (repetitions
/// allowed, moduli capped) times a unimodular constant. These are the only
/// inner functions the truncated model represents exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct<T: Scalar> {
    zeros: Vec<Cx<T>>,
    constant: Cx<T>,
}

impl<T: Scalar> BlaschkeProduct<T> {
    pub fn new(zeros: Vec<Cx<T>>, constant: Cx<T>) -> Result<Self> {
        let cap = T::of(ZERO_MODULUS_CAP);
        for a in &zeros {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NonFinite("Blaschke zero"));
            }
            if a.norm() > cap {
                return Err(Error::ZeroModulusCap {
                    modulus: a.norm().to_f64_lossy(),
                    cap: ZERO_MODULUS_CAP,
                });
            }
        }
        let cnorm = constant.norm();
        if abs(cnorm - T::one()) > T::of(CONSTANT_UNIMODULAR_TOL) {
            return Err(Error::NonUnimodularConstant {
                modulus: cnorm.to_f64_lossy(),
                tol: CONSTANT_UNIMODULAR_TOL,
            });
        }
        // Renormalize exactly so downstream unimodularity is not eroded.
        let constant = constant / Cx::new(cnorm, T::zero());
        Ok(BlaschkeProduct { zeros, constant })
    }

    /// Convenience constructor with constant 1.
    pub fn from_zeros(zeros: Vec<Cx<T>>) -> Result<Self> {
        Self::new(zeros, Cx::new(T::one(), T::zero()))
    }

    /// `B(z) = z^k`.
    pub fn monomial(k: usize) -> Self {
        BlaschkeProduct {
            zeros: vec![Cx::new(T::zero(), T::zero()); k],
            constant: Cx::new(T::one(), T::zero()),
        }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[Cx<T>] {
        &self.zeros
    }

    pub fn constant(&self) -> Cx<T> {
        self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.zeros.is_empty()
    }

    /// True when some zero sits at the origin (within rounding).
    pub fn vanishes_at_zero(&self) -> bool {
        self.zeros.iter().any(|a| a.norm() < T::of(1e-14))
    }

    /// Product of two Blaschke products: zeros concatenate, constants
    /// multiply.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        Self::new(zeros, self.constant * other.constant)
    }

    /// Largest zero modulus, zero for a constant product.
    pub fn max_zero_modulus(&self) -> T {
        self.zeros
            .iter()
            .map(|a| a.norm())
            .fold(T::zero(), fmax)
    }

    /// Truncation-tail budget at ambient degree `N`: `Σ_i |a_i|^(N+1)`.
    pub fn tail_budget(&self, ambient_degree: usize) -> T {
        self.zeros
            .iter()
            .map(|a| powi(a.norm(), ambient_degree as i32 + 1))
            .fold(T::zero(), |acc, x| acc + x)
    }

    /// Evaluate `γ · Π_i b_{a_i}(z)` with the factor convention
    /// `b_a(z) = (|a|/a)(a − z)/(1 − conj(a) z)` for `a ≠ 0` and
    /// `b_0(z) = z`, so each factor is positive at the origin when `a ≠ 0`.
    pub fn eval(&self, z: Cx<T>) -> Result<Cx<T>> {
        let r = z.norm();
        if r > T::one() + T::of(1e-12) {
            return Err(Error::OutsideDisc {
                modulus: r.to_f64_lossy(),
            });
        }
        let mut acc = self.constant;
        for a in &self.zeros {
            acc *= blaschke_factor_eval(*a, z)?;
        }
        Ok(acc)
    }

    /// Taylor coefficients through degree `N` by factor-wise convolution of
    /// each factor's geometric-series expansion. Returns the coefficient
    /// vector and the tail budget `Σ_i |a_i|^(N+1)`.
    pub fn to_taylor(&self, ambient_degree: usize) -> Result<(TaylorVec<T>, T)> {
        if ambient_degree < usize::max(self.degree(), 1) {
            return Err(Error::DimensionMismatch {
                context: "blaschke_to_taylor ambient degree",
                expected: usize::max(self.degree(), 1),
                got: ambient_degree,
            });
        }
        let n = ambient_degree;
        let mut acc = vec![Cx::new(T::zero(), T::zero()); n + 1];
        acc[0] = self.constant;
        let mut scratch = vec![Cx::new(T::zero(), T::zero()); n + 1];
        for a in &self.zeros {
            let factor = blaschke_factor_taylor(*a, n);
            // Coefficients up to N of the product only need factor
            // coefficients up to N, so the convolution below is exact.
            for c in scratch.iter_mut() {
                *c = Cx::new(T::zero(), T::zero());
            }
            for (i, ai) in acc.iter().enumerate() {
                if ai.norm_sqr() == T::zero() {
                    continue;
                }
                for (j, fj) in factor.iter().take(n + 1 - i).enumerate() {
                    scratch[i + j] += ai * fj;
                }
            }
            std::mem::swap(&mut acc, &mut scratch);
        }
        let tail = self.tail_budget(n);
        Ok((TaylorVec { coeffs: acc }, tail))
    }
}

/// Single factor value `b_a(z)`.
fn blaschke_factor_eval<T: Scalar>(a: Cx<T>, z: Cx<T>) -> Result<Cx<T>> {
    let amod = a.norm();
    if amod == T::zero() {
        return Ok(z);
    }
    let denom = Cx::new(T::one(), T::zero()) - a.conj() * z;
    if denom.norm() < T::of(1e-14) {
        return Err(Error::NearPole {
            denominator: denom.norm().to_f64_lossy(),
        });
    }
    let unit = Cx::new(amod, T::zero()) / a;
    Ok(unit * (a - z) / denom)
}

/// Taylor coefficients of one factor through degree `n`:
/// `b_a = (|a|/a)(a − z) Σ_k (conj(a) z)^k`, so `t_0 = |a|` and
/// `t_k = (|a|/a) conj(a)^{k−1} (|a|² − 1)` for `k ≥ 1`; `b_0 = z`.
fn blaschke_factor_taylor<T: Scalar>(a: Cx<T>, n: usize) -> Vec<Cx<T>> {
    let zero = Cx::new(T::zero(), T::zero());
    let mut out = vec![zero; n + 1];
    let amod = a.norm();
    if amod == T::zero() {
        if n >= 1 {
            out[1] = Cx::new(T::one(), T::zero());
        }
        return out;
    }
    let unit = Cx::new(amod, T::zero()) / a;
    let drop = Cx::new(amod * amod - T::one(), T::zero());
    out[0] = Cx::new(amod, T::zero());
    let mut pow = Cx::new(T::one(), T::zero());
    for k in 1..=n {
        out[k] = unit * drop * pow;
        pow *= a.conj();
    }
    out
}

/// Combined tail budget of several Blaschke products at ambient degree `N`.
pub fn tail_budget_of<T: Scalar>(products: &[&BlaschkeProduct<T>], ambient_degree: usize) -> T {
    products
        .iter()
        .map(|b| b.tail_budget(ambient_degree))
        .fold(T::zero(), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Cx<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn tv(coeffs: &[f64]) -> TaylorVec<f64> {
        TaylorVec::new(coeffs.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    fn half() -> BlaschkeProduct<f64> {
        BlaschkeProduct::from_zeros(vec![c(0.5, 0.0)]).unwrap()
    }

    #[test]
    fn inner_product_orthogonal_pair() {
        // f = 1 + z, g = 1 - z
        let f = tv(&[1.0, 1.0]);
        let g = tv(&[1.0, -1.0]);
        assert_eq!(f.inner(&g).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn inner_product_parseval() {
        let f = tv(&[1.0, 1.0, 1.0, 0.0]);
        assert_eq!(f.inner(&f).unwrap(), c(3.0, 0.0));
    }

    #[test]
    fn inner_product_dimension_error() {
        let f = tv(&[1.0, 0.0]);
        let g = tv(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            f.inner(&g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn shift_moves_up_and_preserves_norm() {
        let tol = Tolerances::default();
        let f = tv(&[1.0, 0.0, 0.0]);
        let sf = f.shift(&tol).unwrap();
        assert_eq!(sf.coeffs(), tv(&[0.0, 1.0, 0.0]).coeffs());
        assert_eq!(sf.norm(), f.norm());
    }

    #[test]
    fn shift_guard_rejects_top_mass() {
        let tol = Tolerances::default();
        let f = tv(&[0.0, 0.0, 1.0]);
        match f.shift(&tol) {
            Err(Error::ShiftOverflow { magnitude, .. }) => assert_eq!(magnitude, 1.0),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn shift_matches_multiply_by_z() {
        let tol = Tolerances::<f64>::default().with_tail(1e-12);
        let (b, _) = half().to_taylor(64).unwrap();
        let shifted = b.shift(&tol).unwrap();
        let z = TaylorVec::monomial(1, 64).unwrap();
        let (prod, _) = multiply_truncate(&z, &b, 64);
        let diff = shifted.sub(&prod).unwrap();
        assert!(diff.norm() < 1e-15);
        assert!((shifted.norm() - b.norm()).abs() < 1e-15);
    }

    #[test]
    fn backward_shift_basics() {
        let f = TaylorVec::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)]).unwrap();
        let bf = f.backward_shift();
        assert_eq!(bf.coeffs(), tv(&[2.0, 3.0, 0.0, 0.0]).coeffs());
        // constant function goes to zero
        let one = tv(&[5.0, 0.0]);
        assert_eq!(one.backward_shift().norm(), 0.0);
        // partial isometry identity
        let nf = f.norm_sqr();
        let nb = bf.norm_sqr();
        assert!((nb + f.value_at_zero().norm_sqr() - nf).abs() < 1e-15);
    }

    #[test]
    fn backward_shift_splits_factor() {
        // θ = z · b_{1/2} : S*θ = b_{1/2}
        let theta = BlaschkeProduct::monomial(1).product(&half()).unwrap();
        let (t, _) = theta.to_taylor(64).unwrap();
        let (b, _) = half().to_taylor(64).unwrap();
        let diff = t.backward_shift().sub(&b).unwrap();
        assert!(diff.norm() < 1e-14);
    }

    #[test]
    fn shift_roundtrips() {
        let tol = Tolerances::<f64>::default().with_tail(1e-10);
        let f = tv(&[0.3, -0.2, 0.7, 0.0]);
        let sf = f.shift(&tol).unwrap();
        assert_eq!(sf.backward_shift().coeffs(), f.coeffs());
        // S S* f = f - f(0)
        let g = f.backward_shift().shift(&tol).unwrap();
        let mut expect = f.clone();
        expect.coeffs_mut()[0] = c(0.0, 0.0);
        assert_eq!(g.coeffs(), expect.coeffs());
    }

    #[test]
    fn evaluate_examples() {
        let f = tv(&[1.0, 2.0, 3.0]);
        assert_eq!(f.evaluate(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let n = 16;
        let ones = TaylorVec::new(vec![c(1.0, 0.0); n + 1]).unwrap();
        let v = ones.evaluate(c(1.0, 0.0)).unwrap();
        assert!((v - c((n + 1) as f64, 0.0)).norm() < 1e-12);
        assert!(matches!(
            f.evaluate(c(1.5, 0.0)),
            Err(Error::OutsideDisc { .. })
        ));
    }

    #[test]
    fn evaluate_blaschke_expansion_at_point() {
        let (b, _) = half().to_taylor(128).unwrap();
        let got = b.evaluate(c(0.3, 0.0)).unwrap();
        let expect = (0.5 - 0.3) / (1.0 - 0.15);
        assert!((got - c(expect, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn blaschke_eval_conventions() {
        // single zero at 0: γ z
        let b0 = BlaschkeProduct::monomial(1);
        assert_eq!(b0.eval(c(0.3, 0.1)).unwrap(), c(0.3, 0.1));
        // b_a(0) = |a| > 0
        assert_eq!(half().eval(c(0.0, 0.0)).unwrap(), c(0.5, 0.0));
    }

    #[test]
    fn blaschke_unimodular_on_circle() {
        let b = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0), c(-1.0 / 3.0, 0.0)]).unwrap();
        for k in 0..64 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let z = c(t.cos(), t.sin());
            let v = b.eval(z).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-12, "at k={k}");
        }
    }

    #[test]
    fn blaschke_constructor_guards() {
        assert!(matches!(
            BlaschkeProduct::from_zeros(vec![c(0.95, 0.0)]),
            Err(Error::ZeroModulusCap { .. })
        ));
        assert!(matches!(
            BlaschkeProduct::new(vec![], c(0.5, 0.0)),
            Err(Error::NonUnimodularConstant { .. })
        ));
    }

    #[test]
    fn taylor_expansion_monomial() {
        let b = BlaschkeProduct::<f64>::monomial(2);
        let (t, _) = b.to_taylor(8).unwrap();
        assert_eq!(t.coeffs(), tv(&[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).coeffs());
    }

    #[test]
    fn taylor_expansion_half_zero() {
        // Symbolic oracle: (1/2 − z)/(1 − z/2) = (1/2 − z)·Σ (z/2)^k
        let (t, _) = half().to_taylor(4).unwrap();
        let expect = [0.5, -0.75, -0.375, -0.1875, -0.09375];
        for (k, e) in expect.iter().enumerate() {
            assert!((t.coeff(k) - c(*e, 0.0)).norm() < 1e-15, "coeff {k}");
        }
    }

    #[test]
    fn taylor_expansion_matches_eval() {
        let b = BlaschkeProduct::from_zeros(vec![
            c(0.5, 0.1),
            c(-0.3, 0.2),
            c(0.0, 0.0),
            c(0.1, -0.6),
            c(-0.2, -0.2),
        ])
        .unwrap();
        let (t, tail) = b.to_taylor(128).unwrap();
        let z = c(0.4, 0.0);
        let direct = b.eval(z).unwrap();
        let series = t.evaluate(z).unwrap();
        assert!((direct - series).norm() < tail + 1e-13);
    }

    #[test]
    fn unit_norm_of_inner_expansion() {
        let b = BlaschkeProduct::from_zeros(vec![c(0.9, 0.0), c(0.0, -0.7)]).unwrap();
        let (t, _) = b.to_taylor(256).unwrap();
        let tail = b.tail_budget(256);
        let n2 = t.norm_sqr();
        assert!(n2 <= 1.0 + 1e-12);
        assert!(n2 >= 1.0 - 10.0 * tail.max(1e-12));
    }

    #[test]
    fn multiply_truncate_examples() {
        let z = TaylorVec::<f64>::monomial(1, 8).unwrap();
        let (z2, dropped) = multiply_truncate(&z, &z, 8);
        assert_eq!(z2.coeffs(), TaylorVec::<f64>::monomial(2, 8).unwrap().coeffs());
        assert_eq!(dropped, 0.0);

        let one = TaylorVec::monomial(0, 8).unwrap();
        let g = tv(&[0.1, 0.2, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let (p, _) = multiply_truncate(&one, &g, 8);
        assert_eq!(p.coeffs(), g.coeffs());
    }

    #[test]
    fn multiply_truncate_matches_product_expansion() {
        let b = half();
        let (t, _) = b.to_taylor(128).unwrap();
        let (sq, _) = multiply_truncate(&t, &t, 128);
        let two = b.product(&b).unwrap();
        let (expect, tail) = two.to_taylor(128).unwrap();
        let diff = sq.sub(&expect).unwrap();
        assert!(diff.norm() < tail + 1e-12);
    }

    #[test]
    fn effective_degree_metadata() {
        let f = tv(&[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(f.effective_degree(), Some(1));
        assert_eq!(TaylorVec::<f64>::zero(4).effective_degree(), None);
    }
}
