//! Quotient-space machinery: representatives modulo a subspace, the
//! single-valued operator part of a relation, and the relation norms built
//! from it.
//!
//! The image coset `T(x)` of a relation is flattened to a single vector by
//! taking its representative orthogonal to the multivalued part `T(0)`;
//! the map `x -> rep(T(x))` is the operator part. Norms of cosets and of
//! the whole relation reduce to ordinary matrix norms of that map.

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::subspace::{distance, least_squares, operator_norm, Frame};
use crate::tolerance::TolerancePolicy;
use crate::{CMatrix, CVector, C64};

/// The representative of `[v]` in `E^⊥`: `v - P_E v`.
///
/// The quotient inner product of two classes is the inner product of their
/// representatives, so this single function carries the whole quotient
/// structure in finite dimension.
pub fn quotient_rep(v: &CVector, e: &Frame) -> Result<CVector> {
    let p = e.project(v)?;
    Ok(v - p)
}

/// Quotient inner product `<[x], [y]>` modulo `E`.
pub fn quotient_inner(x: &CVector, y: &CVector, e: &Frame) -> Result<C64> {
    let xr = quotient_rep(x, e)?;
    let yr = quotient_rep(y, e)?;
    Ok(crate::inner(&xr, &yr))
}

/// The single-valued operator part of a relation: the map sending each
/// domain vector to the `T(0)^⊥`-representative of its image coset.
#[derive(Debug, Clone)]
pub struct OperatorPart {
    parent: Relation,
    domain: Frame,
    mv: Frame,
    /// Maps domain coordinates (in `domain`'s basis) into `C^n`; every
    /// column lies in the orthogonal complement of the multivalued part.
    matrix: CMatrix,
}

impl OperatorPart {
    /// Build the operator part of `t`.
    ///
    /// For each domain basis vector a graph preimage is solved by least
    /// squares against the graph frame; its value part is then projected
    /// onto `T(0)^⊥`. The result does not depend on which graph preimage
    /// the solver picks, because two values over the same argument differ
    /// by an element of `T(0)`.
    pub fn new(t: &Relation, tol: &TolerancePolicy) -> Self {
        let parts = t.parts(tol);
        let domain = parts.domain;
        let mv = parts.mv;
        let n = t.ambient_dim();
        let r = domain.rank();
        if r == 0 {
            return Self {
                parent: t.clone(),
                domain,
                mv,
                matrix: CMatrix::zeros(n, 0),
            };
        }
        let gx = t.x_block();
        let gf = t.f_block();
        let coeffs = least_squares(&gx, domain.basis(), tol);
        let values = &gf * coeffs;
        let projected = if mv.rank() == 0 {
            values
        } else {
            &values - mv.basis() * (mv.basis().adjoint() * &values)
        };
        Self {
            parent: t.clone(),
            domain,
            mv,
            matrix: projected,
        }
    }

    pub fn parent(&self) -> &Relation {
        &self.parent
    }

    pub fn domain(&self) -> &Frame {
        &self.domain
    }

    pub fn mv(&self) -> &Frame {
        &self.mv
    }

    /// The matrix from domain coordinates to `C^n`.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Apply to a vector of domain coordinates.
    pub fn apply_coords(&self, coords: &CVector) -> CVector {
        &self.matrix * coords
    }

    /// Apply to `x`, which must lie in the domain within the containment
    /// tolerance; near-members are first projected onto the domain.
    pub fn apply(&self, x: &CVector, tol: &TolerancePolicy) -> Result<CVector> {
        let coords = self.domain_coords(x, tol)?;
        Ok(self.apply_coords(&coords))
    }

    /// `|T(x)|`: the norm of the image coset, equal to the distance from
    /// any value over `x` to the multivalued part.
    pub fn norm_at(&self, x: &CVector, tol: &TolerancePolicy) -> Result<f64> {
        Ok(self.apply(x, tol)?.norm())
    }

    /// `|T|`: the largest singular value of the operator-part matrix,
    /// i.e. the supremum of `|T(x)|` over unit domain vectors.
    pub fn norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    fn domain_coords(&self, x: &CVector, tol: &TolerancePolicy) -> Result<CVector> {
        let dist = distance(x, &self.domain)?;
        if dist > tol.containment_tol * x.norm().max(1.0) {
            return Err(Error::DomainMembership { distance: dist });
        }
        self.domain.coords(x)
    }
}

/// Convenience wrapper building the operator part on the fly.
pub fn operator_part(t: &Relation, tol: &TolerancePolicy) -> OperatorPart {
    OperatorPart::new(t, tol)
}

/// `|T(x)|` for a single `x` in the domain.
pub fn norm_at(t: &Relation, x: &CVector, tol: &TolerancePolicy) -> Result<f64> {
    OperatorPart::new(t, tol).norm_at(x, tol)
}

/// The norm of the relation.
pub fn relation_norm(t: &Relation, tol: &TolerancePolicy) -> f64 {
    OperatorPart::new(t, tol).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{c, cv, random_hermitian, random_matrix, random_vector, rng};
    use crate::CMatrix;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn quotient_rep_cases() {
        let t = tol();
        let v = cv(&[(1.0, 2.0), (0.5, -1.0)]);
        let rep = quotient_rep(&v, &Frame::zero(2)).unwrap();
        assert!((&rep - &v).norm() < 1e-15);

        let e = Frame::standard(2, 0);
        let inside = cv(&[(3.0, -1.0), (0.0, 0.0)]);
        assert!(quotient_rep(&inside, &e).unwrap().norm() < 1e-15);
        let _ = t;
    }

    #[test]
    fn quotient_inner_two_routes_agree() {
        let t = tol();
        let mut rg = rng(13);
        for _ in 0..10 {
            let e = crate::test_util::random_frame(4, 2, &mut rg, &t);
            let x = random_vector(4, &mut rg);
            let y = random_vector(4, &mut rg);
            let via_reps = quotient_inner(&x, &y, &e).unwrap();
            // Other route: inner product through the complement projector.
            let q = crate::subspace::complement(&e).projector();
            let via_proj = crate::inner(&(&q * &x), &(&q * &y));
            assert!((via_reps - via_proj).norm() < 1e-12);
        }
    }

    #[test]
    fn operator_part_of_full_domain_graph_is_the_matrix() {
        let t = tol();
        let mut rg = rng(19);
        let m = random_matrix(3, 3, &mut rg);
        let rel = Relation::from_operator(&m, None, &t).unwrap();
        let part = OperatorPart::new(&rel, &t);
        for i in 0..3 {
            let e = CVector::from_fn(3, |k, _| if k == i { c(1.0, 0.0) } else { c(0.0, 0.0) });
            let got = part.apply(&e, &t).unwrap();
            let want = &m * &e;
            assert!((got - want).norm() < 1e-10);
        }
    }

    #[test]
    fn operator_part_of_purely_multivalued_is_empty() {
        let t = tol();
        let rel = Relation::from_generators(1, &[cv(&[(0.0, 0.0), (1.0, 0.0)])], &t).unwrap();
        let part = OperatorPart::new(&rel, &t);
        assert_eq!(part.domain().rank(), 0);
        assert_eq!(part.matrix().ncols(), 0);
        assert_eq!(part.norm(), 0.0);
    }

    #[test]
    fn operator_part_projects_along_mv() {
        let t = tol();
        // T = span{(e1, e1 + e2), (0, e2)}: T(0) = span{e2}, so the
        // representative of T(e1) is e1.
        let rel = Relation::from_generators(
            2,
            &[
                cv(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (1.0, 0.0)]),
                cv(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
            ],
            &t,
        )
        .unwrap();
        let part = OperatorPart::new(&rel, &t);
        let e1 = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let img = part.apply(&e1, &t).unwrap();
        assert!((img - e1).norm() < 1e-10);
    }

    #[test]
    fn norm_at_examples() {
        let t = tol();
        let rel = Relation::from_generators(
            2,
            &[
                cv(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (1.0, 0.0)]),
                cv(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
            ],
            &t,
        )
        .unwrap();
        let e1 = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        // Distance from e1 + e2 to span{e2} is exactly 1.
        assert!((norm_at(&rel, &e1, &t).unwrap() - 1.0).abs() < 1e-10);

        let m = CMatrix::from_diagonal(&cv(&[(3.0, 0.0), (4.0, 0.0)]));
        let diag = Relation::from_operator(&m, None, &t).unwrap();
        let e2 = cv(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!((norm_at(&diag, &e2, &t).unwrap() - 4.0).abs() < 1e-10);

        let zero = cv(&[(0.0, 0.0), (0.0, 0.0)]);
        assert!(norm_at(&diag, &zero, &t).unwrap() < 1e-12);
    }

    #[test]
    fn norm_at_rejects_outside_domain() {
        let t = tol();
        let dom = Frame::standard(2, 0);
        let rel = Relation::from_operator(&CMatrix::identity(2, 2), Some(&dom), &t).unwrap();
        let e2 = cv(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(matches!(
            norm_at(&rel, &e2, &t),
            Err(Error::DomainMembership { .. })
        ));
    }

    #[test]
    fn relation_norm_examples() {
        let t = tol();
        let m = CMatrix::from_diagonal(&cv(&[(3.0, 0.0), (4.0, 0.0)]));
        let rel = Relation::from_operator(&m, None, &t).unwrap();
        assert!((relation_norm(&rel, &t) - 4.0).abs() < 1e-10);

        let zero = Relation::from_operator(&CMatrix::zeros(2, 2), None, &t).unwrap();
        assert!(relation_norm(&zero, &t) < 1e-12);
    }

    #[test]
    fn relation_norm_is_absolutely_homogeneous() {
        let t = tol();
        let mut rg = rng(29);
        for _ in 0..6 {
            let m = random_matrix(3, 3, &mut rg);
            let rel = Relation::from_operator(&m, None, &t).unwrap();
            let alpha = c(0.0, 2.0);
            let scaled = rel.scalar_mul(alpha, &t);
            let lhs = relation_norm(&scaled, &t);
            let rhs = alpha.norm() * relation_norm(&rel, &t);
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs));
        }
    }

    #[test]
    fn operator_part_is_basis_independent() {
        let t = tol();
        let mut rg = rng(37);
        let rel = Relation::from_generators(
            3,
            &(0..2).map(|_| random_vector(6, &mut rg)).collect::<Vec<_>>(),
            &t,
        )
        .unwrap();
        // Remix the graph basis by a random unitary; the subspace, and with
        // it the operator part, must not change.
        let mix = crate::subspace::col_space(&random_matrix(2, 2, &mut rg), &t);
        assert_eq!(mix.rank(), 2);
        let remixed_basis = rel.graph().basis() * mix.basis();
        let remixed = Relation::from_graph(
            3,
            Frame::new(6, remixed_basis, &t).unwrap(),
        )
        .unwrap();

        let p1 = OperatorPart::new(&rel, &t);
        let p2 = OperatorPart::new(&remixed, &t);
        for _ in 0..5 {
            let coords = random_vector(p1.domain().rank(), &mut rg);
            let x = p1.domain().basis() * &coords;
            let y1 = p1.apply(&x, &t).unwrap();
            let y2 = p2.apply(&x, &t).unwrap();
            assert!((y1 - y2).norm() < 1e-9);
        }
    }

    #[test]
    fn hermitian_operator_part_is_symmetric_in_quotient_inner() {
        let t = tol();
        let mut rg = rng(43);
        let h = random_hermitian(4, &mut rg);
        let rel = Relation::from_operator(&h, None, &t).unwrap();
        let part = OperatorPart::new(&rel, &t);
        for _ in 0..5 {
            let x1 = random_vector(4, &mut rg);
            let x2 = random_vector(4, &mut rg);
            let lhs = crate::inner(
                &part.apply(&x2, &t).unwrap(),
                &quotient_rep(&x1, part.mv()).unwrap(),
            );
            let rhs = crate::inner(
                &quotient_rep(&x2, part.mv()).unwrap(),
                &part.apply(&x1, &t).unwrap(),
            );
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }
}
