//! A numerical calculus for linear relations (multivalued linear operators)
//! on finite-dimensional complex Hilbert spaces.
//!
//! A linear relation is a subspace of `C^n x C^n`, generalizing the graph of
//! an operator: it may assign a whole coset to a vector (multivalued part)
//! or be defined only on a proper subspace. This crate provides
//!
//! * orthonormal-frame arithmetic for subspaces ([`subspace`]),
//! * the relation algebra: parts, inverse, sums, products, shifts, and the
//!   adjoint ([`relation`]),
//! * quotient-space operator parts and relation norms ([`quotient`]),
//! * deficiency spaces and indices ([`deficiency`]),
//! * relative-boundedness certificates, projector-gap bounds, homotopy
//!   index tracking, and invariance verdicts ([`perturbation`]),
//! * deterministic corpus generators ([`corpus`]),
//! * named, registry-dispatched verification suites ([`suites`]), and
//! * a command-line front end with a JSON relation format ([`cli`]).
//!
//! Inner products are linear in the first argument and conjugate-linear in
//! the second throughout.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to evaluate in parallel.

pub mod cli;
pub mod corpus;
pub mod deficiency;
pub mod error;
pub mod linalg;
pub mod perturbation;
pub mod quotient;
pub mod relation;
pub mod report;
pub mod subspace;
pub mod suites;
pub mod tolerance;

/// Complex scalar used everywhere.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

pub use error::{Error, Result};
pub use tolerance::TolerancePolicy;

/// Inner product, linear in the first argument, conjugate-linear in the
/// second: `<x, y> = sum_i x_i conj(y_i)`.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

#[cfg(test)]
pub(crate) mod test_util {
    use crate::subspace::{col_space, Frame};
    use crate::tolerance::TolerancePolicy;
    use crate::{CMatrix, CVector, C64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Complex vector from (re, im) pairs.
    pub fn cv(parts: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(parts.len(), parts.iter().map(|(re, im)| C64::new(*re, *im)))
    }

    pub fn random_vector(d: usize, rng: &mut ChaCha8Rng) -> CVector {
        CVector::from_fn(d, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
    }

    pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
    }

    pub fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let a = random_matrix(d, d, rng);
        (&a + a.adjoint()) * C64::new(0.5, 0.0)
    }

    /// Random `r`-dimensional subspace of `C^d` (Gaussian columns, orthonormalized).
    pub fn random_frame(d: usize, r: usize, rng: &mut ChaCha8Rng, tol: &TolerancePolicy) -> Frame {
        if r == 0 {
            return Frame::zero(d);
        }
        loop {
            let f = col_space(&random_matrix(d, r, rng), tol);
            if f.rank() == r {
                return f;
            }
        }
    }
}
