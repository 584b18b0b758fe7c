//! Quantitative bounds: projector-gap sweeps, the spectral-shift identity
//! with its resolvent bound, and certificate transforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{random_in_frame, LawSuite, LawTally, SuiteConfig};
use crate::corpus;
use crate::perturbation::{
    certify_bound, projector_family, rebase_certificate, DomainForms, RelBoundCertificate,
};
use crate::quotient::{relation_norm, OperatorPart};
use crate::relation::Relation;
use crate::report::Check;
use crate::tolerance::TolerancePolicy;
use crate::{CMatrix, CVector, C64};

/// Gap of the range projectors of `A + kB` obeys `|P_k - P_0| <= 2c|k|`
/// for `|k| <= 1/(2c)`, with the domination `|B(x)| <= 2c |(A+kB)(x)|`.
pub struct Lemma29;

impl LawSuite for Lemma29 {
    fn name(&self) -> &'static str {
        "lemma29"
    }

    fn summary(&self) -> &'static str {
        "range projectors move at most linearly in the coupling"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let mut gap_bound = LawTally::new("projector gap within twice the coupling", "lemma29");
        let mut domination = LawTally::new("perturbation dominated by the coupled sum", "lemma29");
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x29);

        for (si, &n) in cfg.sizes.iter().enumerate() {
            let seed = cfg.seed.wrapping_add(0x2900 + 64 * si as u64);
            let bases = [
                corpus::cayley_selfadjoint(n, seed, tol).unwrap(),
                corpus::cayley_with_spectrum(n, (n >= 2) as usize, 0, seed + 1, tol).unwrap(),
            ];
            for (bi, a) in bases.iter().enumerate() {
                let triples = build_triples(a, seed + 10 * bi as u64, &mut rng, tol);
                for (b, c) in triples {
                    run_triple(a, &b, c, &mut gap_bound, &mut domination, &mut rng, tol);
                }
            }
        }

        // Analytic pair: the gap is |k| / sqrt(1 + |k|^2) exactly.
        let mut analytic = LawTally::new("analytic rank-one sweep matches in closed form", "lemma29");
        let a = Relation::from_generators(
            2,
            &[pair_from_reals(&[1.0, 0.0], &[0.0, 1.0])],
            tol,
        )
        .unwrap();
        let b = Relation::from_generators(
            2,
            &[pair_from_reals(&[1.0, 0.0], &[1.0, 0.0])],
            tol,
        )
        .unwrap();
        let grid: Vec<C64> = vec![
            C64::new(0.0, 0.0),
            C64::new(0.1, 0.0),
            C64::new(0.0, 0.25),
            C64::new(0.3, 0.3),
            C64::new(0.5, 0.0),
        ];
        match projector_family(&a, &b, 1.0, &grid, tol) {
            Ok(points) => {
                for p in points {
                    let expected = p.k.norm() / (1.0 + p.k.norm_sqr()).sqrt();
                    analytic.record((p.gap - expected).abs() <= 1e-10, || {
                        format!("k = {}: gap {:.12e} vs {:.12e}", p.k, p.gap, expected)
                    });
                    analytic.record(p.gap <= 1.0 + 1e-12, || {
                        format!("k = {}: gap exceeded 1", p.k)
                    });
                }
            }
            Err(e) => analytic.record(false, || e.to_string()),
        }

        vec![
            gap_bound.into_check(),
            domination.into_check(),
            analytic.into_check(),
        ]
    }
}

fn pair_from_reals(x: &[f64], f: &[f64]) -> CVector {
    let n = x.len();
    CVector::from_fn(2 * n, |i, _| {
        let v = if i < n { x[i] } else { f[i - n] };
        C64::new(v, 0.0)
    })
}

/// Perturbations dominated by `a`: a real multiple, and a contraction of
/// the operator part, each with its exact domination constant.
fn build_triples(
    a: &Relation,
    seed: u64,
    rng: &mut ChaCha8Rng,
    tol: &TolerancePolicy,
) -> Vec<(Relation, f64)> {
    let mut triples = Vec::new();
    triples.push((a.scalar_mul(C64::new(0.6, 0.0), tol), 0.6));
    triples.push((a.clone(), 1.0));

    // Contraction of the operator part, acting on the same domain.
    let part = OperatorPart::new(a, tol);
    if part.domain().rank() > 0 {
        let n = a.ambient_dim();
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed);
        let raw = CMatrix::from_fn(n, n, |_, _| {
            use rand_distr::{Distribution, StandardNormal};
            let re: f64 = StandardNormal.sample(&mut rng2);
            let im: f64 = StandardNormal.sample(&mut rng2);
            C64::new(re, im)
        });
        let norm = crate::subspace::operator_norm(&raw);
        let target = 0.7;
        let contraction = raw * C64::new(target / norm.max(1e-12), 0.0);
        let mapped = &contraction * part.matrix();
        let generators: Vec<CVector> = (0..part.domain().rank())
            .map(|j| {
                let x = CVector::from(part.domain().basis().column(j));
                let f = CVector::from(mapped.column(j));
                crate::relation::pair_vector(&x, &f)
            })
            .collect();
        let b = Relation::from_generators(n, &generators, tol).unwrap();
        triples.push((b, target));
    }
    let _ = rng;
    triples
}

fn run_triple(
    a: &Relation,
    b: &Relation,
    c: f64,
    gap_bound: &mut LawTally,
    domination: &mut LawTally,
    rng: &mut ChaCha8Rng,
    tol: &TolerancePolicy,
) {
    if c == 0.0 {
        return;
    }
    let half = 1.0 / (2.0 * c);
    let phases = [
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
    ];
    let mut grid = vec![C64::new(0.0, 0.0)];
    for &rho in &[0.25 * half, 0.5 * half, half] {
        for &phase in &phases {
            grid.push(phase * C64::new(rho, 0.0));
        }
    }
    let points = match projector_family(a, b, c, &grid, tol) {
        Ok(p) => p,
        Err(e) => {
            gap_bound.record(false, || format!("preconditions failed: {e}"));
            return;
        }
    };
    for p in &points {
        gap_bound.record(p.gap <= 2.0 * c * p.k.norm() + 1e-8, || {
            format!("gap {:.3e} at |k| = {:.3e} with c = {c}", p.gap, p.k.norm())
        });
    }

    // Domination along the grid, sampled over the base domain.
    let a_part = OperatorPart::new(a, tol);
    let b_part = OperatorPart::new(b, tol);
    for &k in grid.iter().skip(1) {
        let sum = a.op_sum(&b.scalar_mul(k, tol), tol).unwrap();
        let sum_part = OperatorPart::new(&sum, tol);
        for _ in 0..2 {
            if let Some(x) = random_in_frame(a_part.domain(), rng) {
                let lhs = b_part.norm_at(&x, tol).unwrap();
                let rhs = 2.0 * c * sum_part.norm_at(&x, tol).unwrap();
                domination.record(lhs <= rhs + 1e-8 * (1.0 + rhs), || {
                    format!("|B(x)| = {lhs:.3e} > 2c|(A+kB)(x)| = {rhs:.3e} at k = {k}")
                });
            }
        }
    }
}

/// The spectral-shift identity
/// `|(T - zI)(x)|^2 = |(T - Re z I)(x)|^2 + (Im z)^2 |x|^2` and the
/// resolvent bound `|(T - zI)^{-1}| <= 1/|Im z|` for Hermitian relations.
pub struct Lemma31;

impl LawSuite for Lemma31 {
    fn name(&self) -> &'static str {
        "lemma31"
    }

    fn summary(&self) -> &'static str {
        "shift identity and resolvent bound for Hermitian relations"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let corpus = match corpus::default_corpus_sized(cfg.seed, &cfg.sizes, tol) {
            Ok(c) => c,
            Err(e) => return vec![Check::fail("corpus generation", "lemma31", e.to_string())],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x31);
        let mut identity = LawTally::new("squared shift identity", "lemma31");
        let mut resolvent = LawTally::new("resolvent norm bounded by the imaginary part", "lemma31");
        let mut exclusion = LawTally::new("no nonreal eigenvalues", "lemma31");

        for case in &corpus {
            let rel = &case.relation;
            let label = case.spec.label();
            let domain = rel.parts(tol).domain;
            for _ in 0..3 {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                let z = crate::deficiency::random_half_plane_lambda(&mut rng, sign);
                let shifted_z = rel.shift(z, tol);
                let shifted_a = rel.shift(C64::new(z.re, 0.0), tol);
                let part_z = OperatorPart::new(&shifted_z, tol);
                let part_a = OperatorPart::new(&shifted_a, tol);
                for _ in 0..2 {
                    if let Some(x) = random_in_frame(&domain, &mut rng) {
                        let lhs = part_z.norm_at(&x, tol).unwrap().powi(2);
                        let rhs = part_a.norm_at(&x, tol).unwrap().powi(2)
                            + z.im * z.im * x.norm_squared();
                        let bound = 1e-9 * (1.0 + x.norm_squared()) * (1.0 + z.norm_sqr());
                        identity.record((lhs - rhs).abs() <= bound, || {
                            format!("{label}: residual {:.3e} at z = {z}", (lhs - rhs).abs())
                        });
                    }
                }
                let inv_norm = relation_norm(&shifted_z.inverse(), tol);
                resolvent.record(inv_norm <= 1.0 / z.im.abs() + 1e-9, || {
                    format!("{label}: resolvent norm {inv_norm:.3e} at z = {z}")
                });
                exclusion.record(shifted_z.parts(tol).null.rank() == 0, || {
                    format!("{label}: nonreal eigenvalue at z = {z}")
                });
            }
        }

        vec![
            identity.into_check(),
            resolvent.into_check(),
            exclusion.into_check(),
        ]
    }
}

/// Rebasing a linear certificate with slope below one onto the
/// interpolated sum keeps it valid with constants
/// `(a/(1-b), b/(1-b))`.
pub struct Lemma32;

impl LawSuite for Lemma32 {
    fn name(&self) -> &'static str {
        "lemma32"
    }

    fn summary(&self) -> &'static str {
        "certificates transfer onto interpolated sums"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<Check> {
        let tol = &cfg.tol;
        let mut arithmetic = LawTally::new("transform arithmetic", "lemma32");
        let mut transferred = LawTally::new("rebased certificates verify", "lemma32");
        let mut rejects = LawTally::new("slope at least one is rejected", "lemma32");

        // Exact arithmetic spot checks.
        let c = RelBoundCertificate::linear(1.0, 0.5, "spot");
        let moved = rebase_certificate(&c, 0.0).unwrap();
        arithmetic.record((moved.a - 2.0).abs() < 1e-15 && (moved.b - 1.0).abs() < 1e-15, || {
            format!("(1, 1/2) became ({}, {})", moved.a, moved.b)
        });
        let c = RelBoundCertificate::linear(0.3, 0.0, "spot");
        let moved = rebase_certificate(&c, 1.0).unwrap();
        arithmetic.record((moved.a - 0.3).abs() < 1e-15 && moved.b.abs() < 1e-15, || {
            format!("(a, 0) became ({}, {})", moved.a, moved.b)
        });
        let c = RelBoundCertificate::linear(1.0, 1.0, "spot");
        rejects.record(rebase_certificate(&c, 0.5).is_err(), || {
            "b = 1 was accepted".to_string()
        });
        let c = RelBoundCertificate::linear(1.0, 1.5, "spot");
        rejects.record(rebase_certificate(&c, 0.5).is_err(), || {
            "b = 1.5 was accepted".to_string()
        });

        let pairs = match corpus::default_pairs_sized(cfg.seed, &cfg.sizes, tol) {
            Ok(p) => p,
            Err(e) => return vec![Check::fail("pair generation", "lemma32", e.to_string())],
        };
        for pair in &pairs {
            let Ok(forms) = DomainForms::new(&pair.base, &pair.pert, tol) else {
                continue;
            };
            let b = 0.4;
            let a = crate::perturbation::frontier_a(&forms, b, tol);
            let cert = RelBoundCertificate::linear(
                a,
                b,
                format!("{} + {}", pair.base_spec.label(), pair.profile.name()),
            );
            for t_val in [0.0, 0.3, 0.7, 1.0] {
                let rebased = rebase_certificate(&cert, t_val).unwrap();
                let shifted = pair
                    .base
                    .op_sum(&pair.pert.scalar_mul(C64::new(t_val, 0.0), tol), tol)
                    .unwrap();
                match certify_bound(&shifted, &pair.pert, &rebased, 512, cfg.seed ^ 0x32, tol) {
                    Ok(check) => transferred.record(check.holds, || {
                        format!(
                            "{}: rebased ({:.3e}, {:.3e}) fails at t = {t_val} with residual {:.3e}",
                            cert.context, rebased.a, rebased.b, check.worst_residual
                        )
                    }),
                    Err(e) => transferred.record(false, || format!("{}: {e}", cert.context)),
                }
            }
        }

        vec![
            arithmetic.into_check(),
            transferred.into_check(),
            rejects.into_check(),
        ]
    }
}
