//! Index-invariance suites: the homotopy theorem, the unit-slope
//! inequality, and the corollary dispatch across the mode registry.

use super::{LawSuite, LawTally, SuiteConfig};
use crate::corpus::{self, PairProfile};
use crate::deficiency::indices_at_i;
use crate::perturbation::{homotopy_sweep, invariance_report, st_inverse_analysis};
use crate::report::Check;
use crate::C64;

/// Every hypothesis-satisfying corpus pair keeps its indices under the
/// perturbation, and the homotopy trace independently reports constant
/// rank with sound endpoints.
pub struct Thm31Suite;

impl LawSuite for Thm31Suite {
    fn name(&self) -> &'static str {
        "thm31"
    }

    fn summary(&self) -> &'static str {
        "index invariance along the interpolated family"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let mut verdicts = LawTally::new("mode verdict: indices preserved", "thm31");
        let mut homotopy = LawTally::new("homotopy trace has constant rank", "thm31");
        let mut soundness = LawTally::new("trace endpoints match independent indices", "thm31");

        let pairs = match corpus::default_pairs_sized(cfg.seed, &cfg.sizes, tol) {
            Ok(p) => p,
            Err(e) => return vec![Check::fail("pair generation", "thm31", e.to_string())],
        };
        for pair in &pairs {
            let label = format!("{} + {}", pair.base_spec.label(), pair.profile.name());
            let verdict = invariance_report(&pair.base, &pair.pert, "thm31", tol).unwrap();
            if !verdict.applicable {
                verdicts.record(false, || format!("{label}: hypotheses unexpectedly failed"));
                continue;
            }
            verdicts.record(verdict.holds(), || {
                format!(
                    "{label}: indices {:?} became {:?}",
                    verdict.base_indices, verdict.perturbed_indices
                )
            });

            match homotopy_sweep(&pair.base, &pair.pert, 4, tol) {
                Ok(trace) => {
                    homotopy.record(trace.rank_constant(), || {
                        format!("{label}: rank changed along the trace")
                    });
                    let (start, end) = trace.endpoint_ranks();
                    let sum = pair.base.op_sum(&pair.pert, tol).unwrap();
                    soundness.record(
                        start == indices_at_i(&pair.base, tol)
                            && end == indices_at_i(&sum, tol),
                        || format!("{label}: endpoints {start:?} -> {end:?} disagree"),
                    );
                }
                Err(e) => homotopy.record(false, || format!("{label}: {e}")),
            }
        }

        vec![
            verdicts.into_check(),
            homotopy.into_check(),
            soundness.into_check(),
        ]
    }
}

/// Unit-slope certificates only ever shrink indices; the negated base is
/// the equality-at-zero example.
pub struct Thm32Suite;

impl LawSuite for Thm32Suite {
    fn name(&self) -> &'static str {
        "thm32"
    }

    fn summary(&self) -> &'static str {
        "indices never grow under unit-slope perturbations"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let mut inequality = LawTally::new("index inequality holds", "thm32");
        let mut negated = LawTally::new("negated base reaches equality at zero", "thm32");

        for (si, &n) in cfg.sizes.iter().enumerate() {
            let seed = cfg.seed.wrapping_add(0x3200 + 32 * si as u64);
            // Operator bases: the perturbation must be a densely defined
            // Hermitian operator, so bases vary but perturbations are
            // matrix graphs.
            let bases = [
                corpus::cayley_selfadjoint(n, seed, tol).unwrap(),
                corpus::hermitian_restriction(
                    &corpus::cayley_selfadjoint(n, seed + 1, tol).unwrap(),
                    n.saturating_sub(1),
                    seed + 2,
                    tol,
                )
                .unwrap(),
            ];
            for (bi, base) in bases.iter().enumerate() {
                let pert =
                    corpus::perturbation_pair(base, PairProfile::BoundedRandom, seed + 10 + bi as u64, tol)
                        .unwrap();
                let verdict = invariance_report(base, &pert, "thm32", tol).unwrap();
                if !verdict.applicable {
                    inequality.record(false, || format!("n = {n}: hypotheses failed"));
                    continue;
                }
                inequality.record(verdict.holds(), || {
                    format!(
                        "n = {n}: indices {:?} vs {:?}",
                        verdict.perturbed_indices, verdict.base_indices
                    )
                });
            }

            // S = -T with a self-adjoint operator base: certificate with
            // a = 0 and indices (0, 0) on both sides.
            let base = corpus::cayley_selfadjoint(n, seed + 20, tol).unwrap();
            let pert = base.scalar_mul(C64::new(-1.0, 0.0), tol);
            let verdict = invariance_report(&base, &pert, "thm32", tol).unwrap();
            negated.record(
                verdict.applicable
                    && verdict.holds()
                    && verdict.base_indices == (0, 0)
                    && verdict.perturbed_indices == (0, 0),
                || format!("n = {n}: negated base verdict {verdict:?}"),
            );
        }

        vec![inequality.into_check(), negated.into_check()]
    }
}

/// Dispatch every registered corollary mode over pairs engineered for its
/// hypotheses, including skip behavior and both truth values of the
/// self-adjointness equivalence.
pub struct Corollaries;

impl LawSuite for Corollaries {
    fn name(&self) -> &'static str {
        "corollaries"
    }

    fn summary(&self) -> &'static str {
        "hypothesis-checked corollary verdicts across the mode registry"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let mut applicable_hold = LawTally::new("applicable corollary verdicts hold", "corollaries");
        let mut equivalence = LawTally::new(
            "self-adjointness equivalence in both truth values",
            "corollaries",
        );
        let mut skips = LawTally::new("violated hypotheses produce skips, not claims", "corollaries");
        let mut operator_products = LawTally::new(
            "operator perturbations give operator products with the inverse",
            "corollaries",
        );

        for (si, &n) in cfg.sizes.iter().enumerate() {
            let seed = cfg.seed.wrapping_add(0x3300 + 64 * si as u64);
            let selfadjoint = corpus::cayley_with_spectrum(n, (n >= 2) as usize, 0, seed, tol).unwrap();
            let hermitian_only = corpus::hermitian_restriction(
                &corpus::cayley_selfadjoint(n, seed + 1, tol).unwrap(),
                n.saturating_sub(1),
                seed + 2,
                tol,
            )
            .unwrap();

            for (label, base) in [("selfadjoint", &selfadjoint), ("restricted", &hermitian_only)] {
                // cor31: a small multiple has relative bound below one.
                let small = base.scalar_mul(C64::new(1.0 / 3.0, 0.0), tol);
                for mode in ["cor31", "cor32", "cor33", "cor38"] {
                    let verdict = invariance_report(base, &small, mode, tol).unwrap();
                    applicable_hold.record(verdict.applicable && verdict.holds(), || {
                        format!("{mode} on {label} multiple at n = {n}: {verdict:?}")
                    });
                }

                // cor32 equivalence carries the base's truth value.
                let verdict = invariance_report(base, &small, "cor32", tol).unwrap();
                let sum = base.op_sum(&small, tol).unwrap();
                let base_sa = base.classify(tol).is_selfadjoint;
                let sum_sa = sum.classify(tol).is_selfadjoint;
                equivalence.record(
                    verdict.holds() && base_sa == sum_sa && base_sa == (label == "selfadjoint"),
                    || format!("cor32 on {label} at n = {n}: {base_sa} vs {sum_sa}"),
                );

                // cor35: nonnegative multiples couple accretively.
                let quarter = base.scalar_mul(C64::new(0.25, 0.0), tol);
                let verdict = invariance_report(base, &quarter, "cor35", tol).unwrap();
                applicable_hold.record(verdict.applicable && verdict.holds(), || {
                    format!("cor35 on {label} at n = {n}: {verdict:?}")
                });

                // cor36: the sum against the base shares domain and
                // multivalued part.
                let shifted = base.op_sum(&quarter, tol).unwrap();
                let verdict = invariance_report(base, &shifted, "cor36", tol).unwrap();
                applicable_hold.record(verdict.applicable && verdict.holds(), || {
                    format!("cor36 on {label} at n = {n}: {verdict:?}")
                });
            }

            // Skip paths: a product bound at or above one (cor33) and a
            // sign-indefinite coupling (cor35).
            let big = selfadjoint.scalar_mul(C64::new(2.0, 0.0), tol);
            let verdict = invariance_report(&selfadjoint, &big, "cor33", tol).unwrap();
            skips.record(verdict.skipped() && verdict.conclusion_ok.is_none(), || {
                format!("cor33 accepted a product bound of 2 at n = {n}")
            });
            let negated = selfadjoint.scalar_mul(C64::new(-1.0, 0.0), tol);
            let verdict = invariance_report(&selfadjoint, &negated, "cor35", tol).unwrap();
            skips.record(verdict.skipped(), || {
                format!("cor35 accepted an anti-accretive pair at n = {n}")
            });

            // Operator products with the inverse: null-space inclusion and
            // an operator perturbation force an operator product.
            let pert = corpus::perturbation_pair(
                &selfadjoint,
                PairProfile::Multiple { kappa: 0.5 },
                seed + 7,
                tol,
            )
            .unwrap();
            let report = st_inverse_analysis(&pert, &selfadjoint, tol).unwrap();
            operator_products.record(report.is_operator, || {
                format!("half multiple at n = {n} gave a multivalued product")
            });
            if n >= 2 {
                // Null spaces that disagree produce a genuinely multivalued
                // product.
                let with_null = corpus::cayley_with_spectrum(n, 0, 1, seed + 8, tol).unwrap();
                let identity_graph = crate::relation::Relation::identity(n);
                let report = st_inverse_analysis(&identity_graph, &with_null, tol).unwrap();
                operator_products.record(!report.is_operator, || {
                    format!("disagreeing null spaces still gave an operator at n = {n}")
                });
            }
        }

        vec![
            applicable_hold.into_check(),
            equivalence.into_check(),
            skips.into_check(),
            operator_products.into_check(),
        ]
    }
}
