//! Deficiency spaces and indices.
//!
//! The deficiency space of a relation at `lambda` is the orthogonal
//! complement of the range of `T - lambda I`; its dimension is the
//! deficiency index at `lambda`. For Hermitian relations the index is
//! constant on each open half-plane, so the pair is read off at `±i` and
//! the constancy is verified on random half-plane samples rather than
//! assumed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::report::complex_pair;
use crate::subspace::{complement, Frame};
use crate::tolerance::TolerancePolicy;
use crate::C64;

/// One sampled spectral parameter and the index found there.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LambdaSample {
    #[serde(with = "complex_pair")]
    pub lambda: C64,
    pub index: usize,
}

/// Indices at `±i` plus half-plane constancy evidence.
#[derive(Debug, Clone, Serialize)]
pub struct DeficiencyReport {
    /// Identifies the relation the report is about.
    pub context: String,
    pub ambient_dim: usize,
    pub graph_dim: usize,
    pub samples: Vec<LambdaSample>,
    pub d_plus: usize,
    pub d_minus: usize,
    /// Every upper-half-plane sample agreed with `d_plus` and every
    /// lower-half-plane sample with `d_minus`.
    pub constancy_ok: bool,
}

/// The deficiency space `R(T - lambda I)^⊥`.
pub fn deficiency_space(t: &Relation, lambda: C64, tol: &TolerancePolicy) -> Frame {
    let shifted = t.shift(lambda, tol);
    let range = shifted.parts(tol).range;
    complement(&range)
}

/// Raw per-`lambda` index, with no hypothesis on the relation.
pub fn deficiency_index(t: &Relation, lambda: C64, tol: &TolerancePolicy) -> usize {
    deficiency_space(t, lambda, tol).rank()
}

/// Raw indices over a caller-chosen list of parameters; makes no constancy
/// claim and accepts non-Hermitian input.
pub fn deficiency_samples(
    t: &Relation,
    lambdas: &[C64],
    tol: &TolerancePolicy,
) -> Vec<LambdaSample> {
    lambdas
        .iter()
        .map(|&lambda| LambdaSample {
            lambda,
            index: deficiency_index(t, lambda, tol),
        })
        .collect()
}

/// Indices `(d_+, d_-)` of a Hermitian relation, read at `±i`, with
/// `sample_count` extra random parameters per open half-plane backing the
/// constancy flag. Non-Hermitian input is refused because constancy is
/// only guaranteed for Hermitian relations; use [`deficiency_samples`] for
/// raw per-parameter ranks.
pub fn deficiency_indices(
    t: &Relation,
    sample_count: usize,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<DeficiencyReport> {
    if sample_count == 0 {
        return Err(Error::OutOfRange {
            what: "sample_count must be at least 1".to_string(),
        });
    }
    let cls = t.classify(tol);
    if !cls.is_hermitian {
        return Err(Error::HypothesisViolation {
            check: "hermitian input",
            detail: "deficiency indices are only constant per half-plane for Hermitian relations"
                .to_string(),
        });
    }
    let mut lambdas = vec![C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_count {
        lambdas.push(random_half_plane_lambda(&mut rng, 1.0));
    }
    for _ in 0..sample_count {
        lambdas.push(random_half_plane_lambda(&mut rng, -1.0));
    }
    let samples = deficiency_samples(t, &lambdas, tol);
    let d_plus = samples[0].index;
    let d_minus = samples[1].index;
    let constancy_ok = samples.iter().all(|s| {
        if s.lambda.im > 0.0 {
            s.index == d_plus
        } else {
            s.index == d_minus
        }
    });
    Ok(DeficiencyReport {
        context: format!("relation(n={}, graph_dim={})", t.ambient_dim(), t.graph_dim()),
        ambient_dim: t.ambient_dim(),
        graph_dim: t.graph_dim(),
        samples,
        d_plus,
        d_minus,
        constancy_ok,
    })
}

/// Both indices at exactly `±i`, without sampling.
pub fn indices_at_i(t: &Relation, tol: &TolerancePolicy) -> (usize, usize) {
    (
        deficiency_index(t, C64::new(0.0, 1.0), tol),
        deficiency_index(t, C64::new(0.0, -1.0), tol),
    )
}

/// Random nonreal parameter in one half-plane, kept away from the real
/// axis (`0.1 <= |Im| <= 10`, `|Re| <= 10`) so shifted ranges stay well
/// conditioned.
pub fn random_half_plane_lambda(rng: &mut ChaCha8Rng, half_plane_sign: f64) -> C64 {
    let re: f64 = rng.random_range(-10.0..10.0);
    let im: f64 = rng.random_range(0.1..10.0);
    C64::new(re, half_plane_sign.signum() * im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Relation;
    use crate::test_util::{cv, random_hermitian, rng};
    use crate::CMatrix;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn hermitian_graph_has_no_deficiency() {
        let t = tol();
        let mut rg = rng(3);
        let h = random_hermitian(3, &mut rg);
        let rel = Relation::from_operator(&h, None, &t).unwrap();
        assert_eq!(deficiency_space(&rel, C64::new(0.0, 1.0), &t).rank(), 0);
    }

    #[test]
    fn trivial_relation_has_full_deficiency() {
        let t = tol();
        let rel = Relation::trivial(1);
        let space = deficiency_space(&rel, C64::new(2.0, -3.0), &t);
        assert_eq!(space.rank(), 1);
    }

    #[test]
    fn half_graph_pair_has_rank_one_deficiency() {
        let t = tol();
        // T = span{(e1, 0)} in n = 2: the shifted range is span{e1}.
        let rel = Relation::from_generators(
            2,
            &[cv(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)])],
            &t,
        )
        .unwrap();
        let space = deficiency_space(&rel, C64::new(0.0, 1.0), &t);
        assert_eq!(space.rank(), 1);
        assert!(space
            .same_subspace(&crate::subspace::Frame::standard(2, 1), &t)
            .unwrap());
    }

    #[test]
    fn selfadjoint_relation_reports_zero_indices() {
        let t = tol();
        let mut rg = rng(5);
        let h = random_hermitian(4, &mut rg);
        let rel = Relation::from_operator(&h, None, &t).unwrap();
        let report = deficiency_indices(&rel, 4, 11, &t).unwrap();
        assert_eq!((report.d_plus, report.d_minus), (0, 0));
        assert!(report.constancy_ok);
    }

    #[test]
    fn multivalued_line_reports_zero_indices() {
        let t = tol();
        let rel = Relation::from_generators(1, &[cv(&[(0.0, 0.0), (1.0, 0.0)])], &t).unwrap();
        let report = deficiency_indices(&rel, 4, 13, &t).unwrap();
        assert_eq!((report.d_plus, report.d_minus), (0, 0));
        assert!(report.constancy_ok);
    }

    #[test]
    fn non_hermitian_input_is_refused() {
        let t = tol();
        let m = CMatrix::from_element(1, 1, C64::new(0.0, 1.0));
        let rel = Relation::from_operator(&m, None, &t).unwrap();
        assert!(matches!(
            deficiency_indices(&rel, 2, 1, &t),
            Err(Error::HypothesisViolation { .. })
        ));
        // But raw sampling still answers.
        let raw = deficiency_samples(&rel, &[C64::new(0.0, 1.0), C64::new(0.0, -1.0)], &t);
        assert_eq!(raw.len(), 2);
    }

    #[test]
    fn nonreal_shift_of_hermitian_has_trivial_null_space() {
        let t = tol();
        let mut rg = rng(7);
        let h = random_hermitian(3, &mut rg);
        let rel = Relation::from_operator(&h, None, &t).unwrap();
        for lambda in [C64::new(0.5, 1.0), C64::new(-2.0, -0.3)] {
            let shifted = rel.shift(lambda, &t);
            assert_eq!(shifted.parts(&t).null.rank(), 0);
        }
    }
}
