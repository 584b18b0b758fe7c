//! Orthonormal-frame arithmetic for subspaces of `C^d`.
//!
//! A subspace is represented by a [`Frame`]: a `d x r` matrix with
//! orthonormal columns (`r` may be zero). Bases are never unique, so
//! equality of subspaces is always decided through projectors or principal
//! angles, never by comparing basis matrices.

use crate::error::{Error, Result};
use crate::tolerance::TolerancePolicy;
use crate::{CMatrix, CVector, C64};

/// An orthonormal basis of a subspace of `C^d`.
#[derive(Debug, Clone)]
pub struct Frame {
    ambient_dim: usize,
    basis: CMatrix,
}

/// Result of [`compare`]: containment, equality, and the projector gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    /// First subspace is contained in the second (max principal-angle sine
    /// at most `containment_tol`).
    pub is_subset: bool,
    /// Containment in both directions.
    pub is_equal: bool,
    /// Operator norm of the projector difference. Always in `[0, 1]` up to
    /// rounding; `< 1` forces equal ranks.
    pub gap: f64,
}

impl Frame {
    /// Wrap a matrix that is already orthonormal. Checks the Gram invariant
    /// `basis^H basis = I` within `cmp_atol`.
    pub fn new(ambient_dim: usize, basis: CMatrix, tol: &TolerancePolicy) -> Result<Self> {
        if basis.nrows() != ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "frame basis rows",
                expected: ambient_dim,
                got: basis.nrows(),
            });
        }
        if basis.ncols() > ambient_dim {
            return Err(Error::OutOfRange {
                what: format!(
                    "frame rank {} exceeds ambient dimension {}",
                    basis.ncols(),
                    ambient_dim
                ),
            });
        }
        let gram = basis.adjoint() * &basis;
        let eye = CMatrix::identity(gram.nrows(), gram.ncols());
        if (gram - eye).norm() > tol.cmp_atol * (1.0 + basis.ncols() as f64) {
            return Err(Error::OutOfRange {
                what: "frame columns are not orthonormal".to_string(),
            });
        }
        Ok(Self { ambient_dim, basis })
    }

    pub(crate) fn from_orthonormal(ambient_dim: usize, basis: CMatrix) -> Self {
        debug_assert_eq!(basis.nrows(), ambient_dim);
        Self { ambient_dim, basis }
    }

    /// The zero subspace of `C^d`.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    /// All of `C^d` with the standard basis.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: CMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of a single standard basis vector.
    pub fn standard(ambient_dim: usize, index: usize) -> Self {
        let mut basis = CMatrix::zeros(ambient_dim, 1);
        basis[(index, 0)] = C64::new(1.0, 0.0);
        Self { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the subspace (number of basis columns).
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// The orthogonal projector `B B^H` onto the subspace.
    pub fn projector(&self) -> CMatrix {
        if self.rank() == 0 {
            return CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        }
        &self.basis * self.basis.adjoint()
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &CVector) -> Result<CVector> {
        self.check_vector(v)?;
        if self.rank() == 0 {
            return Ok(CVector::zeros(self.ambient_dim));
        }
        Ok(&self.basis * (self.basis.adjoint() * v))
    }

    /// Coordinates of the projection of `v` in this frame's basis.
    pub fn coords(&self, v: &CVector) -> Result<CVector> {
        self.check_vector(v)?;
        Ok(self.basis.adjoint() * v)
    }

    /// Projector-based equality test; bases themselves are never compared.
    pub fn same_subspace(&self, other: &Frame, tol: &TolerancePolicy) -> Result<bool> {
        Ok(compare(self, other, tol)?.is_equal)
    }

    fn check_vector(&self, v: &CVector) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "vector against frame",
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        Ok(())
    }
}

fn check_ambient(f1: &Frame, f2: &Frame) -> Result<()> {
    if f1.ambient_dim != f2.ambient_dim {
        return Err(Error::AmbientMismatch {
            left: f1.ambient_dim,
            right: f2.ambient_dim,
        });
    }
    Ok(())
}

/// Orthonormal basis of the column space of an arbitrary matrix, with the
/// rank cut from `tol`. This is the one rank decision everything else
/// reduces to.
pub fn col_space(mat: &CMatrix, tol: &TolerancePolicy) -> Frame {
    col_space_scaled(mat, 0.0, tol)
}

/// [`col_space`] with an external scale floored into the cutoff.
///
/// A block extracted from a unit-scale structure (a row slice of an
/// orthonormal frame, say) can be numerically zero while its own largest
/// singular value is mere rounding noise; cutting relative to that noise
/// would keep junk directions. Passing the parent scale (usually `1.0`)
/// makes the cutoff `max(sigma_max, scale) * rank_rtol * max(rows, cols)`.
pub fn col_space_scaled(mat: &CMatrix, scale: f64, tol: &TolerancePolicy) -> Frame {
    let d = mat.nrows();
    if mat.ncols() == 0 || d == 0 {
        return Frame::zero(d);
    }
    let svd = crate::linalg::jacobi_svd(mat, false);
    let sigma_max = svd.sigma_max();
    if sigma_max.max(scale) == 0.0 {
        return Frame::zero(d);
    }
    let cutoff = tol.rank_cutoff(sigma_max.max(scale), mat.nrows(), mat.ncols());
    Frame::from_orthonormal(d, svd.basis_above(cutoff))
}

/// Largest singular value; 0 for an empty matrix.
pub fn operator_norm(mat: &CMatrix) -> f64 {
    crate::linalg::spectral_norm(mat)
}

/// Minimum-norm least-squares solution of `A x = b` for every column of `b`.
pub fn least_squares(a: &CMatrix, b: &CMatrix, tol: &TolerancePolicy) -> CMatrix {
    if a.ncols() == 0 {
        return CMatrix::zeros(0, b.ncols());
    }
    if a.nrows() == 0 {
        return CMatrix::zeros(a.ncols(), b.ncols());
    }
    let svd = crate::linalg::jacobi_svd(a, true);
    let cutoff = tol.rank_cutoff(svd.sigma_max(), a.nrows(), a.ncols());
    svd.solve(b, cutoff)
}

/// Orthonormal basis of the null space `{x : A x = 0}`, computed as the
/// complement of the column space of `A^H`.
pub fn null_space(a: &CMatrix, tol: &TolerancePolicy) -> Frame {
    let row_space = col_space(&a.adjoint(), tol);
    complement(&row_space)
}

/// [`null_space`] with an external scale, as in [`col_space_scaled`].
pub fn null_space_scaled(a: &CMatrix, scale: f64, tol: &TolerancePolicy) -> Frame {
    let row_space = col_space_scaled(&a.adjoint(), scale, tol);
    complement(&row_space)
}

/// Orthonormalize a set of `d`-vectors into a frame spanning their span.
pub fn orthonormalize(vectors: &[CVector], tol: &TolerancePolicy) -> Result<Frame> {
    if vectors.is_empty() {
        return Err(Error::OutOfRange {
            what: "orthonormalize of an empty list has no ambient dimension; use Frame::zero"
                .to_string(),
        });
    }
    let d = vectors[0].len();
    orthonormalize_in(d, vectors, tol)
}

/// Orthonormalize with the ambient dimension given explicitly, so the empty
/// list yields the zero subspace of `C^d`.
pub fn orthonormalize_in(d: usize, vectors: &[CVector], tol: &TolerancePolicy) -> Result<Frame> {
    for v in vectors {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                context: "orthonormalize input",
                expected: d,
                got: v.len(),
            });
        }
    }
    if vectors.is_empty() {
        return Ok(Frame::zero(d));
    }
    let mut mat = CMatrix::zeros(d, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        mat.set_column(j, v);
    }
    Ok(col_space(&mat, tol))
}

/// Orthogonal complement: returns `G` with `G` perpendicular to `F` and
/// `rank F + rank G = d`; the two projectors sum to the identity.
pub fn complement(f: &Frame) -> Frame {
    let d = f.ambient_dim();
    if f.rank() == 0 {
        return Frame::full(d);
    }
    if f.rank() == d {
        return Frame::zero(d);
    }
    let residual = CMatrix::identity(d, d) - f.projector();
    // Eigenvalues of I - P are exactly 0 or 1, so the 1/2 cut is unambiguous.
    let svd = crate::linalg::jacobi_svd(&residual, false);
    Frame::from_orthonormal(d, svd.basis_above(0.5))
}

/// Span of the union, `F1 + F2`.
pub fn span_sum(f1: &Frame, f2: &Frame, tol: &TolerancePolicy) -> Result<Frame> {
    check_ambient(f1, f2)?;
    let d = f1.ambient_dim();
    if f1.rank() == 0 {
        return Ok(f2.clone());
    }
    if f2.rank() == 0 {
        return Ok(f1.clone());
    }
    let mut mat = CMatrix::zeros(d, f1.rank() + f2.rank());
    for j in 0..f1.rank() {
        mat.set_column(j, &f1.basis().column(j));
    }
    for j in 0..f2.rank() {
        mat.set_column(f1.rank() + j, &f2.basis().column(j));
    }
    Ok(col_space(&mat, tol))
}

/// Intersection `F1 ∩ F2`, via the complement identity
/// `(F1 ∩ F2)^⊥ = F1^⊥ + F2^⊥`.
pub fn intersect(f1: &Frame, f2: &Frame, tol: &TolerancePolicy) -> Result<Frame> {
    check_ambient(f1, f2)?;
    let sum = span_sum(&complement(f1), &complement(f2), tol)?;
    Ok(complement(&sum))
}

/// Distance from `v` to the subspace: `|v - P_F v|`, the minimum of
/// `|v - w|` over `w` in the subspace.
pub fn distance(v: &CVector, f: &Frame) -> Result<f64> {
    let proj = f.project(v)?;
    Ok((v - proj).norm())
}

/// Containment, equality, and projector gap between two subspaces.
///
/// `is_subset` holds when the largest principal-angle sine of `f1` against
/// `f2` is at most `containment_tol`; `gap` is the operator norm of the
/// projector difference.
pub fn compare(f1: &Frame, f2: &Frame, tol: &TolerancePolicy) -> Result<Comparison> {
    check_ambient(f1, f2)?;
    let subset_12 = max_angle_sine(f1, f2) <= tol.containment_tol;
    let subset_21 = max_angle_sine(f2, f1) <= tol.containment_tol;
    let gap = operator_norm(&(f1.projector() - f2.projector()));
    Ok(Comparison {
        is_subset: subset_12,
        is_equal: subset_12 && subset_21,
        gap,
    })
}

/// Largest principal-angle sine of `f1` against `f2`:
/// `max_{unit v in F1} d(v, F2)`. Zero-rank `f1` is contained in anything.
fn max_angle_sine(f1: &Frame, f2: &Frame) -> f64 {
    if f1.rank() == 0 {
        return 0.0;
    }
    if f2.rank() == 0 {
        return 1.0;
    }
    let residual = f1.basis() - f2.basis() * (f2.basis().adjoint() * f1.basis());
    operator_norm(&residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{c, cv, random_frame, rng};
    use proptest::prelude::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn orthonormalize_collinear_inputs() {
        let t = tol();
        let f = orthonormalize(&[cv(&[(1.0, 0.0), (0.0, 0.0)]), cv(&[(2.0, 0.0), (0.0, 0.0)])], &t)
            .unwrap();
        assert_eq!(f.rank(), 1);
        let e1 = Frame::standard(2, 0);
        assert!(f.same_subspace(&e1, &t).unwrap());
    }

    #[test]
    fn orthonormalize_empty_span() {
        let f = orthonormalize_in(3, &[], &tol()).unwrap();
        assert_eq!(f.rank(), 0);
        assert_eq!(f.ambient_dim(), 3);
    }

    #[test]
    fn orthonormalize_gram_identity() {
        // Oracle: the Gram matrix of the output must be the identity.
        let t = tol();
        let f = orthonormalize(&[cv(&[(1.0, 0.0), (1.0, 0.0)]), cv(&[(1.0, 0.0), (-1.0, 0.0)])], &t)
            .unwrap();
        assert_eq!(f.rank(), 2);
        let gram = f.basis().adjoint() * f.basis();
        let eye = CMatrix::identity(2, 2);
        assert!((gram - eye).norm() < 1e-12);
    }

    #[test]
    fn orthonormalize_rejects_mixed_lengths() {
        let err = orthonormalize(&[cv(&[(1.0, 0.0)]), cv(&[(1.0, 0.0), (0.0, 0.0)])], &tol());
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn complement_standard_cases() {
        let t = tol();
        let c1 = complement(&Frame::standard(2, 0));
        assert!(c1.same_subspace(&Frame::standard(2, 1), &t).unwrap());
        let c0 = complement(&Frame::zero(3));
        assert_eq!(c0.rank(), 3);
    }

    #[test]
    fn complement_projector_sum_oracle() {
        let t = tol();
        let mut r = rng(11);
        let f = random_frame(4, 2, &mut r, &t);
        let g = complement(&f);
        assert_eq!(g.rank(), 2);
        let sum = f.projector() + g.projector();
        let eye = CMatrix::identity(4, 4);
        assert!((sum - eye).norm() < 1e-10);
    }

    #[test]
    fn intersect_standard_cases() {
        let t = tol();
        let f1 = span_sum(&Frame::standard(3, 0), &Frame::standard(3, 1), &t).unwrap();
        let f2 = span_sum(&Frame::standard(3, 1), &Frame::standard(3, 2), &t).unwrap();
        let inter = intersect(&f1, &f2, &t).unwrap();
        assert!(inter.same_subspace(&Frame::standard(3, 1), &t).unwrap());

        let self_inter = intersect(&f1, &f1, &t).unwrap();
        assert!(self_inter.same_subspace(&f1, &t).unwrap());
    }

    #[test]
    fn span_sum_standard_cases() {
        let t = tol();
        let s = span_sum(&Frame::standard(2, 0), &Frame::standard(2, 1), &t).unwrap();
        assert_eq!(s.rank(), 2);
        let mut r = rng(3);
        let f = random_frame(4, 2, &mut r, &t);
        let s2 = span_sum(&f, &Frame::zero(4), &t).unwrap();
        assert!(s2.same_subspace(&f, &t).unwrap());
    }

    #[test]
    fn span_sum_rank_matches_generator_rank() {
        // Oracle: rank of the concatenated generator matrix.
        let t = tol();
        let mut r = rng(17);
        for _ in 0..8 {
            let f1 = random_frame(5, 2, &mut r, &t);
            let f2 = random_frame(5, 2, &mut r, &t);
            let mut gen = CMatrix::zeros(5, 4);
            for j in 0..2 {
                gen.set_column(j, &f1.basis().column(j));
                gen.set_column(2 + j, &f2.basis().column(j));
            }
            let svd = gen.svd(false, false);
            let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
            let cut = t.rank_cutoff(smax, 5, 4);
            let rank = svd.singular_values.iter().filter(|s| **s > cut).count();
            assert_eq!(span_sum(&f1, &f2, &t).unwrap().rank(), rank);
        }
    }

    #[test]
    fn distance_examples() {
        let t = tol();
        let e1 = Frame::standard(2, 0);
        let e2 = Frame::standard(2, 1);
        assert!(distance(&cv(&[(1.0, 0.0), (0.0, 0.0)]), &e1).unwrap() < 1e-14);
        assert!((distance(&cv(&[(1.0, 0.0), (0.0, 0.0)]), &e2).unwrap() - 1.0).abs() < 1e-14);
        // Least-squares oracle: min_w |v - w| over w in span{e1} is attained
        // at w = e1 for v = e1 + e2, with value 1.
        let v = cv(&[(1.0, 0.0), (1.0, 0.0)]);
        let coeff = least_squares(&e1.basis().clone(), &CMatrix::from_column_slice(2, 1, v.as_slice()), &t);
        let best = e1.basis() * coeff;
        let oracle = (CMatrix::from_column_slice(2, 1, v.as_slice()) - best).norm();
        assert!((distance(&v, &e1).unwrap() - oracle).abs() < 1e-14);
        assert!((oracle - 1.0).abs() < 1e-14);
    }

    #[test]
    fn compare_subset_and_gap() {
        let t = tol();
        let e1 = Frame::standard(2, 0);
        let full = Frame::full(2);
        let cmp = compare(&e1, &full, &t).unwrap();
        assert!(cmp.is_subset);
        assert!(!cmp.is_equal);
        // Projectors of different rank differ in norm by exactly 1.
        assert!((cmp.gap - 1.0).abs() < 1e-12);

        let refl = compare(&e1, &e1, &t).unwrap();
        assert!(refl.is_equal);
        assert!(refl.gap < 1e-14);
    }

    #[test]
    fn compare_gap_is_principal_angle_sine() {
        let t = tol();
        let theta = std::f64::consts::PI / 6.0;
        let rotated = orthonormalize(&[cv(&[(theta.cos(), 0.0), (theta.sin(), 0.0)])], &t).unwrap();
        let cmp = compare(&Frame::standard(2, 0), &rotated, &t).unwrap();
        assert!((cmp.gap - 0.5).abs() < 1e-12);
        assert!(!cmp.is_subset);
    }

    #[test]
    fn rank_mismatch_forces_gap_one() {
        let t = tol();
        let mut r = rng(23);
        for _ in 0..6 {
            let f1 = random_frame(5, 2, &mut r, &t);
            let f2 = random_frame(5, 3, &mut r, &t);
            let cmp = compare(&f1, &f2, &t).unwrap();
            assert!(cmp.gap >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn ambient_mismatch_is_rejected() {
        let t = tol();
        let f1 = Frame::standard(2, 0);
        let f2 = Frame::standard(3, 0);
        assert!(matches!(
            span_sum(&f1, &f2, &t),
            Err(Error::AmbientMismatch { .. })
        ));
        assert!(matches!(
            intersect(&f1, &f2, &t),
            Err(Error::AmbientMismatch { .. })
        ));
        assert!(matches!(
            compare(&f1, &f2, &t),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn frame_new_rejects_skewed_basis() {
        let t = tol();
        let mut mat = CMatrix::zeros(2, 2);
        mat[(0, 0)] = c(1.0, 0.0);
        mat[(0, 1)] = c(1.0, 0.0);
        mat[(1, 1)] = c(1.0, 0.0);
        assert!(Frame::new(2, mat, &t).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn complement_projectors_sum_to_identity(seed in 0u64..500, d in 1usize..6, r in 0usize..6) {
            let t = tol();
            let r = r.min(d);
            let mut rg = rng(seed);
            let f = random_frame(d, r, &mut rg, &t);
            let g = complement(&f);
            prop_assert_eq!(f.rank() + g.rank(), d);
            let sum = f.projector() + g.projector();
            let eye = CMatrix::identity(d, d);
            prop_assert!((sum - eye).norm() < 1e-10);
        }

        #[test]
        fn pythagoras_identity(seed in 0u64..500, d in 1usize..6, r in 0usize..6) {
            let t = tol();
            let r = r.min(d);
            let mut rg = rng(seed.wrapping_add(1000));
            let f = random_frame(d, r, &mut rg, &t);
            let v = crate::test_util::random_vector(d, &mut rg);
            let dist = distance(&v, &f).unwrap();
            let proj = f.project(&v).unwrap().norm();
            prop_assert!((dist * dist + proj * proj - v.norm_squared()).abs() < 1e-9 * (1.0 + v.norm_squared()));
        }

        #[test]
        fn intersection_dimension_formula(seed in 0u64..500) {
            let t = tol();
            let mut rg = rng(seed.wrapping_add(9000));
            let d = 5;
            let f1 = random_frame(d, 2, &mut rg, &t);
            let f2 = random_frame(d, 3, &mut rg, &t);
            let inter = intersect(&f1, &f2, &t).unwrap();
            let sum = span_sum(&f1, &f2, &t).unwrap();
            prop_assert_eq!(inter.rank() + sum.rank(), f1.rank() + f2.rank());
        }

        #[test]
        fn equal_rank_small_gap_means_equal_rank(seed in 0u64..500) {
            // Projector gap below 1 transfers ranks.
            let t = tol();
            let mut rg = rng(seed.wrapping_add(40_000));
            let f1 = random_frame(4, 2, &mut rg, &t);
            let f2 = random_frame(4, 2, &mut rg, &t);
            let cmp = compare(&f1, &f2, &t).unwrap();
            if cmp.gap < 1.0 - 1e-9 {
                prop_assert_eq!(f1.rank(), f2.rank());
            }
        }
    }
}
