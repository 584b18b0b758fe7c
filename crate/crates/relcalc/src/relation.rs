//! The algebra of linear relations in `C^n x C^n`.
//!
//! A relation is stored as an orthonormal frame of its graph inside
//! `C^{2n}`; rows `1..n` carry the argument part of each graph vector and
//! rows `n+1..2n` the value part. Everything an operator can do — and the
//! multivalued, non-densely-defined cases an operator cannot express — is
//! derived from that one representation.

use crate::error::{Error, Result};
use crate::subspace::{
    col_space_scaled, complement, compare, distance, intersect, null_space_scaled, Frame,
};
use crate::tolerance::TolerancePolicy;
use crate::{CMatrix, CVector, C64};

/// A linear relation: a subspace of `C^n x C^n`.
#[derive(Debug, Clone)]
pub struct Relation {
    ambient_dim: usize,
    graph: Frame,
}

/// The four canonical parts of a relation.
#[derive(Debug, Clone)]
pub struct Parts {
    /// Vectors that are the argument of some pair.
    pub domain: Frame,
    /// Vectors that are the value of some pair.
    pub range: Frame,
    /// Arguments paired with zero.
    pub null: Frame,
    /// Values paired with zero: the multivalued part `T(0)`.
    pub mv: Frame,
}

/// Structural classification of a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// `T(0) = {0}`: the relation is the graph of an operator.
    pub is_operator: bool,
    /// `D(T)` is all of the space.
    pub is_densely_defined: bool,
    /// The graph is contained in the adjoint's graph.
    pub is_hermitian: bool,
    /// The graph equals the adjoint's graph.
    pub is_selfadjoint: bool,
}

/// Stack `(x, f)` into a single `2n`-vector.
pub fn pair_vector(x: &CVector, f: &CVector) -> CVector {
    let n = x.len();
    debug_assert_eq!(f.len(), n);
    CVector::from_fn(2 * n, |i, _| if i < n { x[i] } else { f[i - n] })
}

/// Split a `2n`-vector into its `(x, f)` halves.
pub fn split_pair(w: &CVector) -> (CVector, CVector) {
    let n = w.len() / 2;
    (
        CVector::from_fn(n, |i, _| w[i]),
        CVector::from_fn(n, |i, _| w[n + i]),
    )
}

impl Relation {
    /// Wrap an existing graph frame in `C^{2n}`.
    pub fn from_graph(ambient_dim: usize, graph: Frame) -> Result<Self> {
        if graph.ambient_dim() != 2 * ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "relation graph ambient",
                expected: 2 * ambient_dim,
                got: graph.ambient_dim(),
            });
        }
        Ok(Self { ambient_dim, graph })
    }

    /// Relation spanned by a list of `2n`-vectors.
    pub fn from_generators(
        ambient_dim: usize,
        generators: &[CVector],
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        let graph = crate::subspace::orthonormalize_in(2 * ambient_dim, generators, tol)?;
        Ok(Self { ambient_dim, graph })
    }

    /// Graph of the matrix `m` restricted to `domain` (all of `C^n` when
    /// `None`): pairs `(x, m x)` for `x` in the domain.
    pub fn from_operator(
        m: &CMatrix,
        domain: Option<&Frame>,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "operator matrix columns",
                expected: n,
                got: m.ncols(),
            });
        }
        let full = Frame::full(n);
        let dom = domain.unwrap_or(&full);
        if dom.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                context: "operator domain ambient",
                expected: n,
                got: dom.ambient_dim(),
            });
        }
        let generators: Vec<CVector> = (0..dom.rank())
            .map(|j| {
                let x = CVector::from(dom.basis().column(j));
                let f = m * &x;
                pair_vector(&x, &f)
            })
            .collect();
        Self::from_generators(n, &generators, tol)
    }

    /// The identity relation `{(x, x)}`.
    pub fn identity(n: usize) -> Self {
        let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut basis = CMatrix::zeros(2 * n, n);
        for j in 0..n {
            basis[(j, j)] = inv_sqrt2;
            basis[(n + j, j)] = inv_sqrt2;
        }
        Self {
            ambient_dim: n,
            graph: Frame::from_orthonormal(2 * n, basis),
        }
    }

    /// The trivial relation `{(0, 0)}`.
    pub fn trivial(n: usize) -> Self {
        Self {
            ambient_dim: n,
            graph: Frame::zero(2 * n),
        }
    }

    /// The zero operator on the given domain: pairs `(x, 0)`.
    pub fn zero_on(domain: &Frame) -> Self {
        let n = domain.ambient_dim();
        let mut basis = CMatrix::zeros(2 * n, domain.rank());
        for j in 0..domain.rank() {
            for i in 0..n {
                basis[(i, j)] = domain.basis()[(i, j)];
            }
        }
        Self {
            ambient_dim: n,
            graph: Frame::from_orthonormal(2 * n, basis),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the graph as a subspace of `C^{2n}`.
    pub fn graph_dim(&self) -> usize {
        self.graph.rank()
    }

    pub fn graph(&self) -> &Frame {
        &self.graph
    }

    /// Argument-part block of the graph basis (`n x r`).
    pub fn x_block(&self) -> CMatrix {
        let n = self.ambient_dim;
        self.graph.basis().rows(0, n).into_owned()
    }

    /// Value-part block of the graph basis (`n x r`).
    pub fn f_block(&self) -> CMatrix {
        let n = self.ambient_dim;
        self.graph.basis().rows(n, n).into_owned()
    }

    /// Domain, range, null space and multivalued part.
    pub fn parts(&self, tol: &TolerancePolicy) -> Parts {
        let gx = self.x_block();
        let gf = self.f_block();
        let domain = col_space_scaled(&gx, 1.0, tol);
        let range = col_space_scaled(&gf, 1.0, tol);
        // Graph vectors with vanishing value part: (x, 0) in T.
        let f_null = null_space_scaled(&gf, 1.0, tol);
        let null = col_space_scaled(&(&gx * f_null.basis()), 1.0, tol);
        // Graph vectors with vanishing argument part: (0, f) in T.
        let x_null = null_space_scaled(&gx, 1.0, tol);
        let mv = col_space_scaled(&(&gf * x_null.basis()), 1.0, tol);
        Parts {
            domain,
            range,
            null,
            mv,
        }
    }

    /// `T^{-1} = {(f, x) : (x, f) in T}`: the two block rows swapped.
    pub fn inverse(&self) -> Self {
        let n = self.ambient_dim;
        let r = self.graph_dim();
        let basis = self.graph.basis();
        let mut swapped = CMatrix::zeros(2 * n, r);
        for j in 0..r {
            for i in 0..n {
                swapped[(i, j)] = basis[(n + i, j)];
                swapped[(n + i, j)] = basis[(i, j)];
            }
        }
        Self {
            ambient_dim: n,
            graph: Frame::from_orthonormal(2 * n, swapped),
        }
    }

    /// `alpha T = {(x, alpha f)}`; for `alpha = 0` this is `D(T) x {0}`.
    pub fn scalar_mul(&self, alpha: C64, tol: &TolerancePolicy) -> Self {
        let n = self.ambient_dim;
        let r = self.graph_dim();
        let basis = self.graph.basis();
        let mut mapped = CMatrix::zeros(2 * n, r);
        for j in 0..r {
            for i in 0..n {
                mapped[(i, j)] = basis[(i, j)];
                mapped[(n + i, j)] = alpha * basis[(n + i, j)];
            }
        }
        Self {
            ambient_dim: n,
            graph: col_space_scaled(&mapped, 1.0, tol),
        }
    }

    /// `T - lambda I = {(x, f - lambda x) : (x, f) in T}`.
    pub fn shift(&self, lambda: C64, tol: &TolerancePolicy) -> Self {
        let n = self.ambient_dim;
        let r = self.graph_dim();
        let basis = self.graph.basis();
        let mut mapped = CMatrix::zeros(2 * n, r);
        for j in 0..r {
            for i in 0..n {
                mapped[(i, j)] = basis[(i, j)];
                mapped[(n + i, j)] = basis[(n + i, j)] - lambda * basis[(i, j)];
            }
        }
        Self {
            ambient_dim: n,
            graph: col_space_scaled(&mapped, 1.0, tol),
        }
    }

    /// Operator-like sum `T + S = {(x, f + g) : (x, f) in T, (x, g) in S}`.
    ///
    /// Computed through the lifted space `{(x, f, g)}` in `C^{3n}` so
    /// multivalued parts and non-dense domains come out right without any
    /// case split; `D(T+S) = D(T) ∩ D(S)` and `(T+S)(0) = T(0) + S(0)`.
    pub fn op_sum(&self, other: &Relation, tol: &TolerancePolicy) -> Result<Relation> {
        let n = self.check_same_ambient(other)?;
        let lifted = self.lifted_pairs(other, PairKind::CommonArgument, tol)?;
        let r = lifted.rank();
        let basis = lifted.basis();
        let mut image = CMatrix::zeros(2 * n, r);
        for j in 0..r {
            for i in 0..n {
                image[(i, j)] = basis[(i, j)];
                image[(n + i, j)] = basis[(n + i, j)] + basis[(2 * n + i, j)];
            }
        }
        Ok(Relation {
            ambient_dim: n,
            graph: col_space_scaled(&image, 1.0, tol),
        })
    }

    /// The lifted space `{(x, f, g)}` in `C^{3n}` constrained by this
    /// relation on `(x, f)` and by `other` on either `(x, g)` (common
    /// argument) or `(f, g)` (chained).
    fn lifted_pairs(
        &self,
        other: &Relation,
        kind: PairKind,
        tol: &TolerancePolicy,
    ) -> Result<Frame> {
        let n = self.ambient_dim;
        let rt = self.graph_dim();
        let rs = other.graph_dim();
        // {(x, f, g) : (x, f) in self, g free}
        let mut lift_t = CMatrix::zeros(3 * n, rt + n);
        for j in 0..rt {
            for i in 0..2 * n {
                lift_t[(i, j)] = self.graph.basis()[(i, j)];
            }
        }
        for k in 0..n {
            lift_t[(2 * n + k, rt + k)] = C64::new(1.0, 0.0);
        }
        // Second constraint, with the free block placed on the unconstrained
        // coordinate.
        let mut lift_s = CMatrix::zeros(3 * n, rs + n);
        match kind {
            PairKind::CommonArgument => {
                // {(x, f, g) : (x, g) in other, f free}
                for j in 0..rs {
                    for i in 0..n {
                        lift_s[(i, j)] = other.graph.basis()[(i, j)];
                        lift_s[(2 * n + i, j)] = other.graph.basis()[(n + i, j)];
                    }
                }
                for k in 0..n {
                    lift_s[(n + k, rs + k)] = C64::new(1.0, 0.0);
                }
            }
            PairKind::Chained => {
                // {(x, f, g) : (f, g) in other, x free}
                for j in 0..rs {
                    for i in 0..n {
                        lift_s[(n + i, j)] = other.graph.basis()[(i, j)];
                        lift_s[(2 * n + i, j)] = other.graph.basis()[(n + i, j)];
                    }
                }
                for k in 0..n {
                    lift_s[(k, rs + k)] = C64::new(1.0, 0.0);
                }
            }
        }
        let frame_t = Frame::from_orthonormal(3 * n, lift_t);
        let frame_s = Frame::from_orthonormal(3 * n, lift_s);
        intersect(&frame_t, &frame_s, tol)
    }

    /// The lifted pair space `{(x, f, g) : (x, f) in self, (x, g) in other}`
    /// as a frame in `C^{3n}`.
    pub(crate) fn lifted_common_argument(
        &self,
        other: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<Frame> {
        self.check_same_ambient(other)?;
        self.lifted_pairs(other, PairKind::CommonArgument, tol)
    }

    /// The adjoint: all `(y, g)` with `<g, x> = <y, f>` for every
    /// `(x, f)` in the relation. Computed as the orthogonal complement in
    /// `C^{2n}` of the rotated graph under `(x, f) -> (-f, x)`.
    pub fn adjoint(&self, _tol: &TolerancePolicy) -> Relation {
        let n = self.ambient_dim;
        let r = self.graph_dim();
        let basis = self.graph.basis();
        let mut rotated = CMatrix::zeros(2 * n, r);
        for j in 0..r {
            for i in 0..n {
                rotated[(i, j)] = -basis[(n + i, j)];
                rotated[(n + i, j)] = basis[(i, j)];
            }
        }
        let rotated_frame = Frame::from_orthonormal(2 * n, rotated);
        Relation {
            ambient_dim: n,
            graph: complement(&rotated_frame),
        }
    }

    /// Operator / dense-domain / Hermitian / self-adjoint flags.
    pub fn classify(&self, tol: &TolerancePolicy) -> Classification {
        let parts = self.parts(tol);
        let adj = self.adjoint(tol);
        let cmp = compare(&self.graph, &adj.graph, tol)
            .expect("adjoint lives in the same ambient space");
        Classification {
            is_operator: parts.mv.rank() == 0,
            is_densely_defined: parts.domain.rank() == self.ambient_dim,
            is_hermitian: cmp.is_subset,
            is_selfadjoint: cmp.is_equal,
        }
    }

    /// Is the stacked pair `(x, f)` a member of the graph (up to tolerance)?
    pub fn contains_pair(&self, x: &CVector, f: &CVector, tol: &TolerancePolicy) -> Result<bool> {
        if x.len() != self.ambient_dim || f.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "pair against relation",
                expected: self.ambient_dim,
                got: x.len().max(f.len()),
            });
        }
        let w = pair_vector(x, f);
        let dist = distance(&w, &self.graph)?;
        Ok(dist <= tol.containment_tol * w.norm().max(1.0))
    }

    /// Projector-based equality of two relations as subspaces of `C^{2n}`.
    pub fn same_relation(&self, other: &Relation, tol: &TolerancePolicy) -> Result<bool> {
        self.check_same_ambient(other)?;
        self.graph.same_subspace(&other.graph, tol)
    }

    fn check_same_ambient(&self, other: &Relation) -> Result<usize> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(self.ambient_dim)
    }
}

#[derive(Clone, Copy)]
enum PairKind {
    CommonArgument,
    Chained,
}

/// Product `S T = {(x, g) : (x, f) in T, (f, g) in S for some f}`,
/// via the lifted triple space: apply `t` first, then `s`.
pub fn compose(s: &Relation, t: &Relation, tol: &TolerancePolicy) -> Result<Relation> {
    if s.ambient_dim() != t.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: s.ambient_dim(),
            right: t.ambient_dim(),
        });
    }
    let n = t.ambient_dim();
    let lifted = t.lifted_pairs(s, PairKind::Chained, tol)?;
    let r = lifted.rank();
    let basis = lifted.basis();
    let mut image = CMatrix::zeros(2 * n, r);
    for j in 0..r {
        for i in 0..n {
            image[(i, j)] = basis[(i, j)];
            image[(n + i, j)] = basis[(2 * n + i, j)];
        }
    }
    Ok(Relation {
        ambient_dim: n,
        graph: col_space_scaled(&image, 1.0, tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{c, cv, random_hermitian, random_matrix, rng};
    use proptest::prelude::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn random_relation(n: usize, r: usize, seed: u64) -> Relation {
        let t = tol();
        let mut rg = rng(seed);
        loop {
            let gens: Vec<CVector> = (0..r)
                .map(|_| crate::test_util::random_vector(2 * n, &mut rg))
                .collect();
            let rel = Relation::from_generators(n, &gens, &t).unwrap();
            if rel.graph_dim() == r {
                return rel;
            }
        }
    }

    #[test]
    fn build_zero_operator_on_c1() {
        let t = tol();
        let m = CMatrix::zeros(1, 1);
        let rel = Relation::from_operator(&m, None, &t).unwrap();
        assert_eq!(rel.graph_dim(), 1);
        let expected = Relation::from_generators(1, &[cv(&[(1.0, 0.0), (0.0, 0.0)])], &t).unwrap();
        assert!(rel.same_relation(&expected, &t).unwrap());
    }

    #[test]
    fn build_purely_multivalued() {
        let t = tol();
        let rel = Relation::from_generators(1, &[cv(&[(0.0, 0.0), (1.0, 0.0)])], &t).unwrap();
        let parts = rel.parts(&t);
        assert_eq!(parts.domain.rank(), 0);
        assert_eq!(parts.mv.rank(), 1);
    }

    #[test]
    fn build_identity_restricted() {
        let t = tol();
        let dom = Frame::standard(2, 0);
        let rel = Relation::from_operator(&CMatrix::identity(2, 2), Some(&dom), &t).unwrap();
        let expected = Relation::from_generators(
            2,
            &[cv(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)])],
            &t,
        )
        .unwrap();
        assert!(rel.same_relation(&expected, &t).unwrap());
    }

    #[test]
    fn parts_of_rank_one_shifted_pair() {
        let t = tol();
        // T = span{(e1, e2)} in n = 2.
        let rel = Relation::from_generators(
            2,
            &[cv(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])],
            &t,
        )
        .unwrap();
        let parts = rel.parts(&t);
        assert!(parts.domain.same_subspace(&Frame::standard(2, 0), &t).unwrap());
        assert!(parts.range.same_subspace(&Frame::standard(2, 1), &t).unwrap());
        assert_eq!(parts.null.rank(), 0);
        assert_eq!(parts.mv.rank(), 0);
    }

    #[test]
    fn parts_of_zero_times_c() {
        let t = tol();
        let rel = Relation::from_generators(1, &[cv(&[(0.0, 0.0), (1.0, 0.0)])], &t).unwrap();
        let parts = rel.parts(&t);
        assert_eq!(parts.domain.rank(), 0);
        assert_eq!(parts.range.rank(), 1);
        assert_eq!(parts.null.rank(), 0);
        assert_eq!(parts.mv.rank(), 1);
    }

    #[test]
    fn parts_of_diagonal_graph() {
        let t = tol();
        let m = CMatrix::from_diagonal(&cv(&[(1.0, 0.0), (0.0, 0.0)]));
        let rel = Relation::from_operator(&m, None, &t).unwrap();
        let parts = rel.parts(&t);
        // Membership oracle: (e2, 0) must lie in the graph, (e1, 0) must not.
        let e1 = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let e2 = cv(&[(0.0, 0.0), (1.0, 0.0)]);
        let zero = cv(&[(0.0, 0.0), (0.0, 0.0)]);
        assert!(rel.contains_pair(&e2, &zero, &t).unwrap());
        assert!(!rel.contains_pair(&e1, &zero, &t).unwrap());
        assert!(parts.null.same_subspace(&Frame::standard(2, 1), &t).unwrap());
        assert_eq!(parts.mv.rank(), 0);
        assert_eq!(parts.domain.rank(), 2);
    }

    #[test]
    fn rank_nullity_between_graph_domain_and_mv() {
        let t = tol();
        for seed in 0..12 {
            let rel = random_relation(3, (seed as usize % 6) + 1, 100 + seed);
            let parts = rel.parts(&t);
            assert_eq!(
                rel.graph_dim(),
                parts.domain.rank() + parts.mv.rank(),
                "graph dim splits into domain and multivalued part"
            );
        }
    }

    #[test]
    fn inverse_of_scalar_graph() {
        let t = tol();
        let two = CMatrix::from_element(1, 1, c(2.0, 0.0));
        let half = CMatrix::from_element(1, 1, c(0.5, 0.0));
        let rel = Relation::from_operator(&two, None, &t).unwrap();
        let expected = Relation::from_operator(&half, None, &t).unwrap();
        assert!(rel.inverse().same_relation(&expected, &t).unwrap());
    }

    #[test]
    fn inverse_definition_oracle() {
        let t = tol();
        // T = span{(e1, 0)} in n = 2; the inverse pairs (0, e1).
        let rel = Relation::from_generators(
            2,
            &[cv(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)])],
            &t,
        )
        .unwrap();
        let inv = rel.inverse();
        let parts = inv.parts(&t);
        assert_eq!(parts.domain.rank(), 0);
        assert!(parts.mv.same_subspace(&Frame::standard(2, 0), &t).unwrap());
    }

    #[test]
    fn scalar_mul_cases() {
        let t = tol();
        let rel = random_relation(2, 2, 7);
        let same = rel.scalar_mul(c(1.0, 0.0), &t);
        assert!(same.same_relation(&rel, &t).unwrap());

        // alpha = 0 on {0} x C collapses to the trivial relation.
        let mv = Relation::from_generators(1, &[cv(&[(0.0, 0.0), (1.0, 0.0)])], &t).unwrap();
        let zeroed = mv.scalar_mul(c(0.0, 0.0), &t);
        assert_eq!(zeroed.graph_dim(), 0);

        // Two routes to i*M: scale the relation, or build from the scaled matrix.
        let mut rg = rng(5);
        let m = random_matrix(3, 3, &mut rg);
        let g = Relation::from_operator(&m, None, &t).unwrap();
        let scaled = g.scalar_mul(c(0.0, 1.0), &t);
        let direct = Relation::from_operator(&(&m * c(0.0, 1.0)), None, &t).unwrap();
        assert!(scaled.same_relation(&direct, &t).unwrap());
    }

    #[test]
    fn op_sum_of_full_domain_graphs() {
        let t = tol();
        let mut rg = rng(9);
        let a = random_matrix(3, 3, &mut rg);
        let b = random_matrix(3, 3, &mut rg);
        let sum = Relation::from_operator(&a, None, &t)
            .unwrap()
            .op_sum(&Relation::from_operator(&b, None, &t).unwrap(), &t)
            .unwrap();
        let direct = Relation::from_operator(&(&a + &b), None, &t).unwrap();
        assert!(sum.same_relation(&direct, &t).unwrap());
    }

    #[test]
    fn op_sum_with_zero_operator_is_identity_map() {
        let t = tol();
        let rel = random_relation(3, 2, 21);
        let dom = rel.parts(&t).domain;
        let zero = Relation::zero_on(&dom);
        let sum = rel.op_sum(&zero, &t).unwrap();
        assert!(sum.same_relation(&rel, &t).unwrap());
    }

    #[test]
    fn op_sum_with_disjoint_domains_is_trivial() {
        let t = tol();
        let s1 = Relation::from_generators(
            2,
            &[cv(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)])],
            &t,
        )
        .unwrap();
        let s2 = Relation::from_generators(
            2,
            &[cv(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)])],
            &t,
        )
        .unwrap();
        let sum = s1.op_sum(&s2, &t).unwrap();
        assert_eq!(sum.graph_dim(), 0);
    }

    #[test]
    fn compose_matches_matrix_product() {
        let t = tol();
        let mut rg = rng(31);
        let a = random_matrix(3, 3, &mut rg);
        let b = random_matrix(3, 3, &mut rg);
        let ra = Relation::from_operator(&a, None, &t).unwrap();
        let rb = Relation::from_operator(&b, None, &t).unwrap();
        let prod = compose(&ra, &rb, &t).unwrap();
        let direct = Relation::from_operator(&(&a * &b), None, &t).unwrap();
        assert!(prod.same_relation(&direct, &t).unwrap());
    }

    #[test]
    fn compose_with_inverse_recovers_coset_structure() {
        // For T = {0} x C, T T^{-1} is all of C x C.
        let t = tol();
        let rel = Relation::from_generators(1, &[cv(&[(0.0, 0.0), (1.0, 0.0)])], &t).unwrap();
        let prod = compose(&rel, &rel.inverse(), &t).unwrap();
        assert_eq!(prod.graph_dim(), 2);
    }

    #[test]
    fn compose_identity_is_neutral() {
        let t = tol();
        let rel = random_relation(3, 2, 41);
        let id = Relation::identity(3);
        let prod = compose(&id, &rel, &t).unwrap();
        assert!(prod.same_relation(&rel, &t).unwrap());
    }

    #[test]
    fn shift_matches_matrix_shift() {
        let t = tol();
        let mut rg = rng(55);
        let m = random_matrix(3, 3, &mut rg);
        let lambda = c(0.7, -0.3);
        let shifted = Relation::from_operator(&m, None, &t).unwrap().shift(lambda, &t);
        let direct =
            Relation::from_operator(&(&m - CMatrix::identity(3, 3) * lambda), None, &t).unwrap();
        assert!(shifted.same_relation(&direct, &t).unwrap());
    }

    #[test]
    fn shift_fixed_points() {
        let t = tol();
        let rel = random_relation(2, 2, 61);
        assert!(rel.shift(c(0.0, 0.0), &t).same_relation(&rel, &t).unwrap());

        let mv = Relation::from_generators(1, &[cv(&[(0.0, 0.0), (1.0, 0.0)])], &t).unwrap();
        let shifted = mv.shift(c(2.5, 1.0), &t);
        assert!(shifted.same_relation(&mv, &t).unwrap());
    }

    #[test]
    fn adjoint_of_hermitian_matrix_graph() {
        let t = tol();
        let mut rg = rng(71);
        let h = random_hermitian(3, &mut rg);
        let rel = Relation::from_operator(&h, None, &t).unwrap();
        let adj = rel.adjoint(&t);
        assert!(adj.same_relation(&rel, &t).unwrap());
    }

    #[test]
    fn adjoint_satisfies_pairing_identity() {
        // Oracle: every adjoint generator (y, g) pairs with every graph
        // generator (x, f) through <g, x> = <y, f>.
        let t = tol();
        for seed in 0..6 {
            let rel = random_relation(3, 2 + (seed as usize % 3), 80 + seed);
            let adj = rel.adjoint(&t);
            assert_eq!(adj.graph_dim(), 2 * 3 - rel.graph_dim());
            for ja in 0..adj.graph_dim() {
                let w = CVector::from(adj.graph().basis().column(ja));
                let (y, g) = split_pair(&w);
                for jt in 0..rel.graph_dim() {
                    let v = CVector::from(rel.graph().basis().column(jt));
                    let (x, f) = split_pair(&v);
                    let lhs = crate::inner(&g, &x);
                    let rhs = crate::inner(&y, &f);
                    assert!((lhs - rhs).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn adjoint_of_multivalued_line_is_itself() {
        let t = tol();
        let rel = Relation::from_generators(1, &[cv(&[(0.0, 0.0), (1.0, 0.0)])], &t).unwrap();
        let adj = rel.adjoint(&t);
        assert!(adj.same_relation(&rel, &t).unwrap());
    }

    #[test]
    fn adjoint_of_imaginary_scalar_graph() {
        let t = tol();
        let m = CMatrix::from_element(1, 1, c(0.0, 1.0));
        let rel = Relation::from_operator(&m, None, &t).unwrap();
        let adj = rel.adjoint(&t);
        let expected =
            Relation::from_operator(&CMatrix::from_element(1, 1, c(0.0, -1.0)), None, &t).unwrap();
        assert!(adj.same_relation(&expected, &t).unwrap());
    }

    #[test]
    fn classify_hermitian_matrix_graph() {
        let t = tol();
        let mut rg = rng(91);
        let h = random_hermitian(4, &mut rg);
        let cls = Relation::from_operator(&h, None, &t).unwrap().classify(&t);
        assert!(cls.is_operator && cls.is_densely_defined && cls.is_hermitian && cls.is_selfadjoint);
    }

    #[test]
    fn classify_partial_zero_pair() {
        let t = tol();
        // T = span{(e1, 0)} in n = 2: Hermitian but far from self-adjoint.
        let rel = Relation::from_generators(
            2,
            &[cv(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)])],
            &t,
        )
        .unwrap();
        let cls = rel.classify(&t);
        assert!(cls.is_hermitian);
        assert!(!cls.is_selfadjoint);
        assert_eq!(rel.adjoint(&t).graph_dim(), 3);
    }

    #[test]
    fn classify_purely_multivalued_line() {
        let t = tol();
        let rel = Relation::from_generators(1, &[cv(&[(0.0, 0.0), (1.0, 0.0)])], &t).unwrap();
        let cls = rel.classify(&t);
        assert!(cls.is_hermitian && cls.is_selfadjoint);
        assert!(!cls.is_operator && !cls.is_densely_defined);
    }

    #[test]
    fn hermitian_pairing_matches_classification() {
        let t = tol();
        for seed in 0..10 {
            let rel = random_relation(3, 2, 200 + seed);
            let cls = rel.classify(&t);
            let mut pairing_ok = true;
            for j1 in 0..rel.graph_dim() {
                let w1 = CVector::from(rel.graph().basis().column(j1));
                let (x, f) = split_pair(&w1);
                for j2 in 0..rel.graph_dim() {
                    let w2 = CVector::from(rel.graph().basis().column(j2));
                    let (y, g) = split_pair(&w2);
                    if (crate::inner(&f, &y) - crate::inner(&x, &g)).norm() > 1e-9 {
                        pairing_ok = false;
                    }
                }
            }
            assert_eq!(cls.is_hermitian, pairing_ok);
        }
    }

    #[test]
    fn coset_law_for_multivalued_images() {
        // For (x, y) in T, every (x, y + m) with m in T(0) is again in T,
        // and the image coset has the dimension of T(0).
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
        let parts = rel.parts(&t);
        assert_eq!(parts.mv.rank(), 1);
        let x = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let y = cv(&[(1.0, 0.0), (1.0, 0.0)]);
        assert!(rel.contains_pair(&x, &y, &t).unwrap());
        for j in 0..parts.mv.rank() {
            let m = CVector::from(parts.mv.basis().column(j));
            assert!(rel.contains_pair(&x, &(&y + &m), &t).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn adjoint_is_an_involution(seed in 0u64..300, r in 1usize..5) {
            let t = tol();
            let rel = random_relation(3, r.min(5), seed);
            let back = rel.adjoint(&t).adjoint(&t);
            prop_assert!(back.same_relation(&rel, &t).unwrap());
        }

        #[test]
        fn inverse_is_an_involution(seed in 0u64..300, r in 1usize..5) {
            let t = tol();
            let rel = random_relation(2, r.min(4), seed.wrapping_add(7000));
            let back = rel.inverse().inverse();
            prop_assert!(back.same_relation(&rel, &t).unwrap());
        }

        #[test]
        fn inverse_swaps_parts(seed in 0u64..300, r in 1usize..5) {
            let t = tol();
            let rel = random_relation(2, r.min(4), seed.wrapping_add(15_000));
            let parts = rel.parts(&t);
            let inv_parts = rel.inverse().parts(&t);
            prop_assert!(inv_parts.domain.same_subspace(&parts.range, &t).unwrap());
            prop_assert!(inv_parts.mv.same_subspace(&parts.null, &t).unwrap());
        }
    }
}
