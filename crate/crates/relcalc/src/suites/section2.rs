//! Algebraic laws of relations: image cosets, norms, recomposition, and
//! the structural facts about Hermitian multivalued parts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{random_in_frame, LawSuite, LawTally, SuiteConfig};
use crate::corpus;
use crate::quotient::{quotient_rep, relation_norm, OperatorPart};
use crate::relation::{compose, Relation};
use crate::report::Check;
use crate::subspace::{compare, complement, distance, span_sum, Frame};
use crate::tolerance::TolerancePolicy;
use crate::{CMatrix, CVector, C64};

/// Image cosets: `y in T(x)` iff `T(x) = {y} + T(0)`, and the product
/// identities `(T T^{-1})(y) = {y} + T(0)`, `(T^{-1} T)(x) = {x} + N(T)`.
pub struct Lemma21;

impl LawSuite for Lemma21 {
    fn name(&self) -> &'static str {
        "lemma21"
    }

    fn summary(&self) -> &'static str {
        "image cosets are translates of the multivalued part"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let corpus = match corpus::default_corpus_sized(cfg.seed, &cfg.sizes, tol) {
            Ok(c) => c,
            Err(e) => return vec![Check::fail("corpus generation", "lemma21", e.to_string())],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x21);
        let mut coset = LawTally::new("image coset tracks the multivalued part", "lemma21");
        let mut coset_neg = LawTally::new(
            "shifting the value off the multivalued part leaves the graph",
            "lemma21",
        );
        let mut zero_in = LawTally::new("zero in the image means the image is the multivalued part", "lemma21");
        let mut prod_right = LawTally::new("product with the inverse fixes range cosets", "lemma21");
        let mut prod_left = LawTally::new("inverse product fixes domain cosets", "lemma21");

        for case in &corpus {
            let rel = &case.relation;
            let n = rel.ambient_dim();
            let part = OperatorPart::new(rel, tol);
            let parts = rel.parts(tol);
            let label = case.spec.label();

            for _ in 0..2 {
                let Some(x) = random_in_frame(part.domain(), &mut rng) else {
                    break;
                };
                let y = part.apply(&x, tol).expect("x lies in the domain");
                for j in 0..parts.mv.rank() {
                    let m = CVector::from(parts.mv.basis().column(j));
                    let ok = rel.contains_pair(&x, &(&y + &m), tol).unwrap();
                    coset.record(ok, || format!("{label}: y + mv direction {j} left the graph"));
                }
                // A unit direction orthogonal to T(0) is never a coset shift.
                let off = complement(&parts.mv);
                if let Some(v) = random_in_frame(&off, &mut rng) {
                    let ok = !rel.contains_pair(&x, &(&y + &v), tol).unwrap();
                    coset_neg.record(ok, || format!("{label}: off-coset shift stayed in the graph"));
                }
            }

            if let Some(x0) = random_in_frame(&parts.null, &mut rng) {
                // 0 in T(x0): the whole image must be T(0).
                let mut ok = true;
                for j in 0..parts.mv.rank() {
                    let m = CVector::from(parts.mv.basis().column(j));
                    ok &= rel.contains_pair(&x0, &m, tol).unwrap();
                }
                let y0 = part.apply(&x0, tol).expect("null vector is in the domain");
                ok &= y0.norm() < tol.cmp_atol * 10.0;
                zero_in.record(ok, || format!("{label}: image of a null vector is not T(0)"));
            }

            // (T T^{-1})(y) = {y} + T(0) on sampled y in R(T).
            let tt_inv = compose(rel, &rel.inverse(), tol).unwrap();
            let tt_parts = tt_inv.parts(tol);
            if let Some(y) = random_in_frame(&parts.range, &mut rng) {
                let mut ok = tt_inv.contains_pair(&y, &y, tol).unwrap();
                for j in 0..parts.mv.rank() {
                    let m = CVector::from(parts.mv.basis().column(j));
                    ok &= tt_inv.contains_pair(&y, &(&y + &m), tol).unwrap();
                }
                ok &= compare(&tt_parts.mv, &parts.mv, tol).unwrap().is_equal;
                prod_right.record(ok, || format!("{label}: (T T^-1)(y) is not {{y}} + T(0)"));
            }

            // (T^{-1} T)(x) = {x} + N(T) on sampled x in D(T).
            let invt_t = compose(&rel.inverse(), rel, tol).unwrap();
            let invt_parts = invt_t.parts(tol);
            if let Some(x) = random_in_frame(&parts.domain, &mut rng) {
                let mut ok = invt_t.contains_pair(&x, &x, tol).unwrap();
                for j in 0..parts.null.rank() {
                    let m = CVector::from(parts.null.basis().column(j));
                    ok &= invt_t.contains_pair(&x, &(&x + &m), tol).unwrap();
                }
                ok &= compare(&invt_parts.mv, &parts.null, tol).unwrap().is_equal;
                prod_left.record(ok, || format!("{label}: (T^-1 T)(x) is not {{x}} + N(T)"));
            }
            let _ = n;
        }

        vec![
            coset.into_check(),
            coset_neg.into_check(),
            zero_in.into_check(),
            prod_right.into_check(),
            prod_left.into_check(),
        ]
    }
}

/// Norm laws: scaling, the triangle inequality, the distance
/// characterization of `|T(x)|`, and the pairing supremum oracle.
pub struct Lemma22;

impl LawSuite for Lemma22 {
    fn name(&self) -> &'static str {
        "lemma22"
    }

    fn summary(&self) -> &'static str {
        "relation norms scale, add, and match their coset distances"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let corpus = match corpus::default_corpus_sized(cfg.seed, &cfg.sizes, tol) {
            Ok(c) => c,
            Err(e) => return vec![Check::fail("corpus generation", "lemma22", e.to_string())],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x22);
        let mut scaling = LawTally::new("norms scale by the modulus", "lemma22");
        let mut dist_law = LawTally::new(
            "the image norm is the distance of any value to the multivalued part",
            "lemma22",
        );
        let mut triangle_at = LawTally::new("pointwise triangle inequality under sums", "lemma22");
        let mut triangle_norm = LawTally::new("relation-norm triangle inequality", "lemma22");
        let mut pairing_sup = LawTally::new(
            "the image norm is the supremum of pairings over its span",
            "lemma22",
        );

        for case in &corpus {
            let rel = &case.relation;
            let label = case.spec.label();
            let part = OperatorPart::new(rel, tol);
            let parts = rel.parts(tol);
            let norm = part.norm();

            for alpha in [C64::new(0.0, 2.0), C64::new(-3.0, 0.0), C64::new(0.5, 0.5)] {
                let scaled = rel.scalar_mul(alpha, tol);
                let got = relation_norm(&scaled, tol);
                let want = alpha.norm() * norm;
                scaling.record(
                    (got - want).abs() <= 1e-9 * (1.0 + want),
                    || format!("{label}: |aT| = {got:.3e} vs |a||T| = {want:.3e}"),
                );
                if let Some(x) = random_in_frame(part.domain(), &mut rng) {
                    let got = crate::quotient::norm_at(&scaled, &x, tol).unwrap();
                    let want = alpha.norm() * part.norm_at(&x, tol).unwrap();
                    scaling.record(
                        (got - want).abs() <= 1e-9 * (1.0 + want),
                        || format!("{label}: |(aT)(x)| mismatch"),
                    );
                }
            }

            if let Some(x) = random_in_frame(part.domain(), &mut rng) {
                let rep = part.apply(&x, tol).unwrap();
                // Any value over x: representative plus a multivalued shift.
                let y = if let Some(m) = random_in_frame(&parts.mv, &mut rng) {
                    let scale: f64 = StandardNormal.sample(&mut rng);
                    &rep + &(m * C64::new(2.0 * scale, 0.0))
                } else {
                    rep.clone()
                };
                let got = part.norm_at(&x, tol).unwrap();
                let want = distance(&y, &parts.mv).unwrap();
                dist_law.record(
                    (got - want).abs() <= 1e-9 * (1.0 + want),
                    || format!("{label}: |T(x)| = {got:.3e} but d(y, T(0)) = {want:.3e}"),
                );

                // Pairing supremum over the span of the representative:
                // every unit vector there is a phase times the normalized
                // representative, so the supremum equals the norm exactly.
                let fact = rep.norm();
                if fact > 1e-12 {
                    let unit = &rep / C64::new(fact, 0.0);
                    let mut sup: f64 = 0.0;
                    for _ in 0..256 {
                        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                        let y = &unit * C64::new(0.0, theta).exp();
                        sup = sup.max(crate::inner(&rep, &y).norm());
                    }
                    pairing_sup.record(
                        sup <= fact + 1e-12 && sup >= fact - 1e-8,
                        || format!("{label}: pairing sup {sup:.12e} vs norm {fact:.12e}"),
                    );
                }
            }
        }

        // Triangle laws need pairs on a common domain.
        let pairs = match corpus::default_pairs_sized(cfg.seed, &cfg.sizes, tol) {
            Ok(p) => p,
            Err(e) => return vec![Check::fail("pair generation", "lemma22", e.to_string())],
        };
        for pair in &pairs {
            let sum = pair.base.op_sum(&pair.pert, tol).unwrap();
            let sum_part = OperatorPart::new(&sum, tol);
            let base_part = OperatorPart::new(&pair.base, tol);
            let pert_part = OperatorPart::new(&pair.pert, tol);
            let label = format!("{} + {}", pair.base_spec.label(), pair.profile.name());
            if let Some(x) = random_in_frame(sum_part.domain(), &mut rng) {
                let lhs = sum_part.norm_at(&x, tol).unwrap();
                let rhs = base_part.norm_at(&x, tol).unwrap() + pert_part.norm_at(&x, tol).unwrap();
                triangle_at.record(
                    lhs <= rhs + 1e-9 * (1.0 + rhs),
                    || format!("{label}: |(T+S)(x)| = {lhs:.3e} > {rhs:.3e}"),
                );
            }
            let lhs = sum_part.norm();
            let rhs = base_part.norm() + pert_part.norm();
            triangle_norm.record(
                lhs <= rhs + 1e-9 * (1.0 + rhs),
                || format!("{label}: |T+S| = {lhs:.3e} > {rhs:.3e}"),
            );
        }

        vec![
            scaling.into_check(),
            dist_law.into_check(),
            triangle_at.into_check(),
            triangle_norm.into_check(),
            pairing_sup.into_check(),
        ]
    }
}

/// `T = T - S + S` holds exactly when the domain and multivalued
/// inclusions do, in both directions.
pub struct Lemma24;

impl LawSuite for Lemma24 {
    fn name(&self) -> &'static str {
        "lemma24"
    }

    fn summary(&self) -> &'static str {
        "recomposition is equivalent to the two inclusions"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let mut tally = LawTally::new(
            "recomposition agrees with domain and multivalued inclusions",
            "lemma24",
        );
        let mut negatives = 0usize;

        let pairs = match corpus::default_pairs_sized(cfg.seed, &cfg.sizes, tol) {
            Ok(p) => p,
            Err(e) => return vec![Check::fail("pair generation", "lemma24", e.to_string())],
        };
        for pair in &pairs {
            let rep = crate::perturbation::inclusion_report(&pair.base, &pair.pert, tol).unwrap();
            tally.record(rep.recompose_ok == (rep.dom_ok && rep.mv_ok), || {
                format!(
                    "{} + {}: recompose {} vs dom {} mv {}",
                    pair.base_spec.label(),
                    pair.profile.name(),
                    rep.recompose_ok,
                    rep.dom_ok,
                    rep.mv_ok
                )
            });
        }

        // Violating pairs: a perturbation with a smaller domain, and one
        // with a multivalued part the base cannot absorb.
        for (si, &n) in cfg.sizes.iter().enumerate() {
            if n < 2 {
                continue;
            }
            let seed = cfg.seed.wrapping_add(0x2400 + si as u64);
            let base = corpus::cayley_selfadjoint(n, seed, tol).unwrap();
            let small = corpus::hermitian_restriction(&base, n - 1, seed + 1, tol).unwrap();
            let rep = crate::perturbation::inclusion_report(&base, &small, tol).unwrap();
            if !rep.dom_ok {
                negatives += 1;
                tally.record(
                    rep.recompose_ok == (rep.dom_ok && rep.mv_ok),
                    || format!("restricted domain pair at n = {n}"),
                );
            }

            let mv_heavy = corpus::cayley_with_spectrum(n, 1, 0, seed + 2, tol).unwrap();
            let operator_base =
                corpus::cayley_with_spectrum(n, 0, 0, seed + 3, tol).unwrap();
            let rep = crate::perturbation::inclusion_report(&operator_base, &mv_heavy, tol).unwrap();
            if !rep.mv_ok {
                negatives += 1;
                tally.record(
                    rep.recompose_ok == (rep.dom_ok && rep.mv_ok),
                    || format!("unabsorbed multivalued pair at n = {n}"),
                );
            }
        }

        let mut checks = vec![tally.into_check()];
        checks.push(Check::expect(
            format!("violating pairs exercised ({negatives})"),
            "lemma24",
            negatives > 0 || cfg.sizes.iter().all(|&n| n < 2),
            "no inclusion-violating pair was generated",
        ));
        checks
    }
}

/// A Hermitian perturbation defined on at least the domain of a
/// self-adjoint base has its multivalued part absorbed by the base.
pub struct Lemma25;

impl LawSuite for Lemma25 {
    fn name(&self) -> &'static str {
        "lemma25"
    }

    fn summary(&self) -> &'static str {
        "self-adjoint bases absorb Hermitian multivalued parts"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let mut tally = LawTally::new(
            "multivalued part of the perturbation lands inside the base's",
            "lemma25",
        );
        let mut necessity = LawTally::new(
            "a merely Hermitian base can fail to absorb",
            "lemma25",
        );
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x25);

        for (si, &n) in cfg.sizes.iter().enumerate() {
            for k in 0..4u64 {
                let seed = cfg.seed.wrapping_add(0x2500 + 100 * si as u64 + k);
                let mv_dim = if n >= 2 { (k % 2) as usize + ((n >= 3) as usize) } else { 1 };
                let base =
                    corpus::cayley_with_spectrum(n, mv_dim.min(n), 0, seed, tol).unwrap();
                let pert = hermitian_with_free_mv(&base, &mut rng, tol);
                let cls = pert.classify(tol);
                let base_parts = base.parts(tol);
                let pert_parts = pert.parts(tol);
                let dom_ok = compare(&base_parts.domain, &pert_parts.domain, tol)
                    .unwrap()
                    .is_subset;
                let absorbed = compare(&pert_parts.mv, &base_parts.mv, tol).unwrap().is_subset;
                tally.record(cls.is_hermitian && dom_ok && absorbed, || {
                    format!(
                        "n = {n}, seed = {seed}: hermitian = {}, dom = {dom_ok}, absorbed = {absorbed}",
                        cls.is_hermitian
                    )
                });
            }

            // Necessity of self-adjointness: a restriction with trivial
            // multivalued part admits a Hermitian perturbation whose
            // multivalued part it cannot absorb.
            if n >= 2 {
                let seed = cfg.seed.wrapping_add(0x25F0 + si as u64);
                let sa = corpus::cayley_with_spectrum(n, 0, 0, seed, tol).unwrap();
                let hermitian_only = corpus::hermitian_restriction(&sa, n - 1, seed + 1, tol).unwrap();
                let base_parts = hermitian_only.parts(tol);
                if base_parts.mv.rank() == 0 && base_parts.domain.rank() < n {
                    let pert = hermitian_with_free_mv(&hermitian_only, &mut rng, tol);
                    let pert_parts = pert.parts(tol);
                    if pert_parts.mv.rank() > 0 {
                        let absorbed =
                            compare(&pert_parts.mv, &base_parts.mv, tol).unwrap().is_subset;
                        necessity.record(!absorbed, || {
                            format!("n = {n}: absorption held without self-adjointness")
                        });
                    }
                }
            }
        }

        let mut checks = vec![tally.into_check()];
        if necessity.cases() > 0 {
            checks.push(necessity.into_check());
        }
        checks
    }
}

/// Build a Hermitian relation whose domain contains the base's and whose
/// multivalued part is a random subspace orthogonal to its domain (not
/// steered into the base's multivalued part).
fn hermitian_with_free_mv(
    base: &Relation,
    rng: &mut ChaCha8Rng,
    tol: &TolerancePolicy,
) -> Relation {
    let n = base.ambient_dim();
    let dom_t = base.parts(tol).domain;
    let free = complement(&dom_t);
    let mv_dim = if free.rank() == 0 {
        0
    } else {
        rng.random_range(0..=free.rank().min(2))
    };
    let mv = random_subspace_of(&free, mv_dim, rng, tol);
    let usable = crate::subspace::intersect(&free, &complement(&mv), tol).unwrap();
    let extra_dim = if usable.rank() == 0 {
        0
    } else {
        rng.random_range(0..=usable.rank())
    };
    let extra = random_subspace_of(&usable, extra_dim, rng, tol);
    let domain = span_sum(&dom_t, &extra, tol).unwrap();

    let g = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    });
    let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    let compressed = domain.projector() * h * domain.projector();
    let mut generators: Vec<CVector> = (0..domain.rank())
        .map(|j| {
            let x = CVector::from(domain.basis().column(j));
            let f = &compressed * &x;
            crate::relation::pair_vector(&x, &f)
        })
        .collect();
    for j in 0..mv.rank() {
        generators.push(crate::relation::pair_vector(
            &CVector::zeros(n),
            &CVector::from(mv.basis().column(j)),
        ));
    }
    Relation::from_generators(n, &generators, tol).unwrap()
}

fn random_subspace_of(
    frame: &Frame,
    dim: usize,
    rng: &mut ChaCha8Rng,
    tol: &TolerancePolicy,
) -> Frame {
    if dim == 0 || frame.rank() == 0 {
        return Frame::zero(frame.ambient_dim());
    }
    loop {
        let mix = CMatrix::from_fn(frame.rank(), dim, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        });
        let candidate = crate::subspace::col_space(&(frame.basis() * mix), tol);
        if candidate.rank() == dim {
            return candidate;
        }
    }
}

/// Hermitian relations have domain orthogonal to multivalued part and a
/// symmetric operator part in the quotient inner product.
pub struct Lemma26;

impl LawSuite for Lemma26 {
    fn name(&self) -> &'static str {
        "lemma26"
    }

    fn summary(&self) -> &'static str {
        "hermitian structure: orthogonality and quotient symmetry"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let corpus = match corpus::default_corpus_sized(cfg.seed, &cfg.sizes, tol) {
            Ok(c) => c,
            Err(e) => return vec![Check::fail("corpus generation", "lemma26", e.to_string())],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x26);
        let mut ortho = LawTally::new("domain is orthogonal to the multivalued part", "lemma26");
        let mut symmetry = LawTally::new("operator part is quotient-symmetric", "lemma26");

        for case in &corpus {
            let rel = &case.relation;
            let label = case.spec.label();
            let parts = rel.parts(tol);
            let part = OperatorPart::new(rel, tol);

            if parts.domain.rank() > 0 && parts.mv.rank() > 0 {
                let overlap =
                    crate::subspace::operator_norm(&(parts.domain.basis().adjoint() * parts.mv.basis()));
                ortho.record(overlap < 1e-9, || {
                    format!("{label}: <domain, mv> overlap {overlap:.3e}")
                });
            } else {
                ortho.record(true, || String::new());
            }

            let (x1, x2) = (
                random_in_frame(&parts.domain, &mut rng),
                random_in_frame(&parts.domain, &mut rng),
            );
            if let (Some(x1), Some(x2)) = (x1, x2) {
                let lhs = crate::inner(
                    &part.apply(&x2, tol).unwrap(),
                    &quotient_rep(&x1, &parts.mv).unwrap(),
                );
                let rhs = crate::inner(
                    &quotient_rep(&x2, &parts.mv).unwrap(),
                    &part.apply(&x1, tol).unwrap(),
                );
                symmetry.record((lhs - rhs).norm() < 1e-9, || {
                    format!("{label}: symmetry defect {:.3e}", (lhs - rhs).norm())
                });
            }
        }

        vec![ortho.into_check(), symmetry.into_check()]
    }
}
