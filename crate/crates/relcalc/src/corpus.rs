//! Deterministic, seeded generators of structured relations and
//! perturbation pairs.
//!
//! Generators draw from a ChaCha8 stream keyed by a 64-bit seed, with
//! complex entries assembled from consecutive standard-normal pairs, so an
//! identical spec reproduces the identical relation bit for bit and corpora
//! can be regenerated from their serialized specs alone.
//!
//! Self-adjoint relations come from the unitary parametrization
//! `T = {((I - W) v, i (I + W) v)}`: eigenvalue `1` of `W` contributes to
//! the multivalued part and eigenvalue `-1` to the null space, so shaped
//! spectra plant those features organically.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::subspace::{col_space, complement, span_sum, Frame};
use crate::tolerance::TolerancePolicy;
use crate::{CMatrix, CVector, C64};

/// Shape of the perturbation produced by [`perturbation_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum PairProfile {
    /// The zero operator on the base domain.
    Zero,
    /// A real multiple of the base.
    Multiple { kappa: f64 },
    /// A random Hermitian matrix on the whole space.
    BoundedRandom,
    /// Random Hermitian relation with enlarged domain and multivalued part
    /// inside the base's.
    MvMatchingRandom,
}

impl PairProfile {
    pub fn name(&self) -> &'static str {
        match self {
            PairProfile::Zero => "zero",
            PairProfile::Multiple { .. } => "multiple",
            PairProfile::BoundedRandom => "bounded-random",
            PairProfile::MvMatchingRandom => "mv-matching-random",
        }
    }
}

/// A reproducible recipe for one relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CorpusSpec {
    /// Self-adjoint relation from a random unitary with `mv_dim`
    /// eigenvalues pinned at `1` and `null_dim` at `-1`.
    Cayley {
        n: usize,
        #[serde(default)]
        mv_dim: usize,
        #[serde(default)]
        null_dim: usize,
        seed: u64,
    },
    /// Hermitian restriction of the same-seed Cayley relation to a random
    /// `graph_dim`-dimensional subspace of its graph.
    Restriction {
        n: usize,
        #[serde(default)]
        mv_dim: usize,
        #[serde(default)]
        null_dim: usize,
        graph_dim: usize,
        seed: u64,
    },
    /// Perturbation of the realized `base` spec with the given profile.
    PairProfile {
        base: Box<CorpusSpec>,
        #[serde(flatten)]
        profile: PairProfile,
        seed: u64,
    },
    /// Graph of a real tridiagonal matrix, optionally restricted away from
    /// both endpoints.
    Jacobi {
        n: usize,
        diag: Vec<f64>,
        offdiag: Vec<f64>,
        restrict_ends: bool,
    },
}

impl CorpusSpec {
    /// Realize the spec into a relation. Identical specs produce bitwise
    /// identical graphs.
    pub fn realize(&self, tol: &TolerancePolicy) -> Result<Relation> {
        match self {
            CorpusSpec::Cayley {
                n,
                mv_dim,
                null_dim,
                seed,
            } => cayley_with_spectrum(*n, *mv_dim, *null_dim, *seed, tol),
            CorpusSpec::Restriction {
                n,
                mv_dim,
                null_dim,
                graph_dim,
                seed,
            } => {
                let base = cayley_with_spectrum(*n, *mv_dim, *null_dim, *seed, tol)?;
                hermitian_restriction(&base, *graph_dim, seed.wrapping_add(1), tol)
            }
            CorpusSpec::PairProfile { base, profile, seed } => {
                let base_rel = base.realize(tol)?;
                perturbation_pair(&base_rel, *profile, *seed, tol)
            }
            CorpusSpec::Jacobi {
                n,
                diag,
                offdiag,
                restrict_ends,
            } => jacobi_relation(*n, diag, offdiag, *restrict_ends, tol),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            CorpusSpec::Cayley { n, .. }
            | CorpusSpec::Restriction { n, .. }
            | CorpusSpec::Jacobi { n, .. } => *n,
            CorpusSpec::PairProfile { base, .. } => base.ambient_dim(),
        }
    }

    /// Short label used in report contexts.
    pub fn label(&self) -> String {
        match self {
            CorpusSpec::Cayley {
                n,
                mv_dim,
                null_dim,
                seed,
            } => format!("cayley(n={n}, mv={mv_dim}, null={null_dim}, seed={seed})"),
            CorpusSpec::Restriction {
                n,
                graph_dim,
                seed,
                ..
            } => format!("restriction(n={n}, m={graph_dim}, seed={seed})"),
            CorpusSpec::PairProfile { base, profile, seed } => {
                format!("pair({}, {}, seed={seed})", base.label(), profile.name())
            }
            CorpusSpec::Jacobi {
                n, restrict_ends, ..
            } => format!("jacobi(n={n}, restricted={restrict_ends})"),
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Seeded Haar-like random unitary: orthonormalized complex Gaussian.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng, tol: &TolerancePolicy) -> CMatrix {
    loop {
        let frame = col_space(&gaussian_matrix(n, n, rng), tol);
        if frame.rank() == n {
            return frame.basis().clone();
        }
    }
}

/// The self-adjoint relation of a unitary `w`:
/// `T = span{((I - w) v, i (I + w) v) : v}`.
pub fn cayley_from_unitary(w: &CMatrix, tol: &TolerancePolicy) -> Result<Relation> {
    let n = w.nrows();
    if w.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "unitary matrix",
            expected: n,
            got: w.ncols(),
        });
    }
    let eye = CMatrix::identity(n, n);
    let x_part = &eye - w;
    let f_part = (&eye + w) * C64::new(0.0, 1.0);
    let mut generators = CMatrix::zeros(2 * n, n);
    for j in 0..n {
        for i in 0..n {
            generators[(i, j)] = x_part[(i, j)];
            generators[(n + i, j)] = f_part[(i, j)];
        }
    }
    Relation::from_graph(n, col_space(&generators, tol))
}

/// Seeded random self-adjoint relation with generic spectrum.
pub fn cayley_selfadjoint(n: usize, seed: u64, tol: &TolerancePolicy) -> Result<Relation> {
    cayley_with_spectrum(n, 0, 0, seed, tol)
}

/// Seeded random self-adjoint relation with `mv_dim` unitary eigenvalues
/// pinned at `1` (multivalued directions) and `null_dim` at `-1` (null
/// directions); remaining phases are kept away from `±1` so the graph
/// stays well conditioned.
pub fn cayley_with_spectrum(
    n: usize,
    mv_dim: usize,
    null_dim: usize,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<Relation> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "ambient dimension must be positive".to_string(),
        });
    }
    if mv_dim + null_dim > n {
        return Err(Error::OutOfRange {
            what: format!("mv_dim + null_dim = {} exceeds n = {n}", mv_dim + null_dim),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = if mv_dim == 0 && null_dim == 0 {
        random_unitary(n, &mut rng, tol)
    } else {
        let v = random_unitary(n, &mut rng, tol);
        let mut phases = CVector::zeros(n);
        for i in 0..n {
            phases[i] = if i < mv_dim {
                C64::new(1.0, 0.0)
            } else if i < mv_dim + null_dim {
                C64::new(-1.0, 0.0)
            } else {
                // Phase in (0.15, pi - 0.15), random sign of the angle.
                let theta: f64 = rng.random_range(0.15..(std::f64::consts::PI - 0.15));
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                C64::new(0.0, sign * theta).exp()
            };
        }
        &v * CMatrix::from_diagonal(&phases) * v.adjoint()
    };
    cayley_from_unitary(&w, tol)
}

/// Restrict a self-adjoint relation to a seeded random `m`-dimensional
/// subspace of its graph; the result is Hermitian with indices
/// `(n - m, n - m)`.
pub fn hermitian_restriction(
    base: &Relation,
    m: usize,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<Relation> {
    if !base.classify(tol).is_selfadjoint {
        return Err(Error::HypothesisViolation {
            check: "selfadjoint base",
            detail: "restrictions are Hermitian only when the base is self-adjoint".to_string(),
        });
    }
    let r = base.graph_dim();
    if m > r {
        return Err(Error::OutOfRange {
            what: format!("restriction dimension {m} exceeds graph dimension {r}"),
        });
    }
    if m == r {
        return Ok(base.clone());
    }
    if m == 0 {
        return Ok(Relation::trivial(base.ambient_dim()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mix = loop {
        let candidate = col_space(&gaussian_matrix(r, m, &mut rng), tol);
        if candidate.rank() == m {
            break candidate;
        }
    };
    let restricted = base.graph().basis() * mix.basis();
    Relation::from_graph(
        base.ambient_dim(),
        col_space(&restricted, tol),
    )
}

/// Build a Hermitian perturbation of `base` satisfying the inclusion
/// hypotheses: the perturbation's domain contains the base's and its
/// multivalued part sits inside the base's.
pub fn perturbation_pair(
    base: &Relation,
    profile: PairProfile,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<Relation> {
    if !base.classify(tol).is_hermitian {
        return Err(Error::HypothesisViolation {
            check: "hermitian base",
            detail: "perturbation profiles are designed for Hermitian bases".to_string(),
        });
    }
    let n = base.ambient_dim();
    let parts = base.parts(tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match profile {
        PairProfile::Zero => Ok(Relation::zero_on(&parts.domain)),
        PairProfile::Multiple { kappa } => Ok(base.scalar_mul(C64::new(kappa, 0.0), tol)),
        PairProfile::BoundedRandom => {
            let g = gaussian_matrix(n, n, &mut rng);
            let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
            Relation::from_operator(&h, None, tol)
        }
        PairProfile::MvMatchingRandom => {
            // Multivalued part: random subspace of the base's.
            let mv_target = if parts.mv.rank() == 0 {
                Frame::zero(n)
            } else {
                let dim = rng.random_range(1..=parts.mv.rank());
                let mix = loop {
                    let candidate =
                        col_space(&gaussian_matrix(parts.mv.rank(), dim, &mut rng), tol);
                    if candidate.rank() == dim {
                        break candidate;
                    }
                };
                col_space(&(parts.mv.basis() * mix.basis()), tol)
            };
            // Domain: the base domain plus a random slice of what is
            // orthogonal to both the domain and the chosen multivalued part.
            let occupied = span_sum(&parts.domain, &mv_target, tol)?;
            let free = complement(&occupied);
            let extra_dim = if free.rank() == 0 {
                0
            } else {
                rng.random_range(0..=free.rank())
            };
            let domain = if extra_dim == 0 {
                parts.domain.clone()
            } else {
                let mix = loop {
                    let candidate =
                        col_space(&gaussian_matrix(free.rank(), extra_dim, &mut rng), tol);
                    if candidate.rank() == extra_dim {
                        break candidate;
                    }
                };
                let extra = col_space(&(free.basis() * mix.basis()), tol);
                span_sum(&parts.domain, &extra, tol)?
            };
            // Hermitian action compressed to the domain; its range stays in
            // the domain, which is orthogonal to the multivalued part.
            let g = gaussian_matrix(n, n, &mut rng);
            let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
            let compressed = domain.projector() * h * domain.projector();
            let mut generators: Vec<CVector> = (0..domain.rank())
                .map(|j| {
                    let x = CVector::from(domain.basis().column(j));
                    let f = &compressed * &x;
                    crate::relation::pair_vector(&x, &f)
                })
                .collect();
            for j in 0..mv_target.rank() {
                let zero = CVector::zeros(n);
                let m = CVector::from(mv_target.basis().column(j));
                generators.push(crate::relation::pair_vector(&zero, &m));
            }
            Relation::from_generators(n, &generators, tol)
        }
    }
}

/// Graph of the real tridiagonal matrix with the given diagonal and
/// off-diagonal; with `restrict_ends` the graph is cut down to arguments
/// supported away from both endpoints, yielding a non-densely-defined
/// Hermitian relation with indices at least `(1, 1)` for `n >= 3`.
pub fn jacobi_relation(
    n: usize,
    diag: &[f64],
    offdiag: &[f64],
    restrict_ends: bool,
    tol: &TolerancePolicy,
) -> Result<Relation> {
    if diag.len() != n {
        return Err(Error::DimensionMismatch {
            context: "jacobi diagonal",
            expected: n,
            got: diag.len(),
        });
    }
    if n == 0 || offdiag.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            context: "jacobi off-diagonal",
            expected: n.saturating_sub(1),
            got: offdiag.len(),
        });
    }
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(diag[i], 0.0);
    }
    for i in 0..n - 1 {
        m[(i, i + 1)] = C64::new(offdiag[i], 0.0);
        m[(i + 1, i)] = C64::new(offdiag[i], 0.0);
    }
    if !restrict_ends {
        return Relation::from_operator(&m, None, tol);
    }
    let interior = if n <= 2 {
        Frame::zero(n)
    } else {
        let mut basis = CMatrix::zeros(n, n - 2);
        for j in 0..n - 2 {
            basis[(j + 1, j)] = C64::new(1.0, 0.0);
        }
        Frame::from_orthonormal(n, basis)
    };
    Relation::from_operator(&m, Some(&interior), tol)
}

/// One relation of the default corpus together with its recipe.
#[derive(Debug, Clone)]
pub struct CorpusCase {
    pub spec: CorpusSpec,
    pub relation: Relation,
}

/// One perturbation pair of the default corpus.
#[derive(Debug, Clone)]
pub struct PairCase {
    pub base_spec: CorpusSpec,
    pub profile: PairProfile,
    pub base: Relation,
    pub pert: Relation,
}

/// Ambient dimensions covered by the default corpus.
pub const DEFAULT_SIZES: [usize; 6] = [1, 2, 3, 4, 8, 16];

/// The default relation corpus: for every size it contains generic
/// self-adjoint relations, relations with nontrivial multivalued part,
/// with nontrivial null space, and (for `n >= 2`) non-densely-defined
/// Hermitian restrictions, plus Jacobi graphs for `n >= 3`.
pub fn default_corpus(seed: u64, tol: &TolerancePolicy) -> Result<Vec<CorpusCase>> {
    default_corpus_sized(seed, &DEFAULT_SIZES, tol)
}

/// Same coverage pattern over caller-chosen sizes.
pub fn default_corpus_sized(
    seed: u64,
    sizes: &[usize],
    tol: &TolerancePolicy,
) -> Result<Vec<CorpusCase>> {
    let mut specs: Vec<CorpusSpec> = Vec::new();
    for (si, &n) in sizes.iter().enumerate() {
        let base = seed.wrapping_add(1000 * si as u64);
        for k in 0..4 {
            specs.push(CorpusSpec::Cayley {
                n,
                mv_dim: 0,
                null_dim: 0,
                seed: base + k,
            });
        }
        // Nontrivial multivalued part and nontrivial null space.
        for k in 0..2 {
            specs.push(CorpusSpec::Cayley {
                n,
                mv_dim: 1,
                null_dim: 0,
                seed: base + 10 + k,
            });
            specs.push(CorpusSpec::Cayley {
                n,
                mv_dim: 0,
                null_dim: 1,
                seed: base + 20 + k,
            });
        }
        if n >= 2 {
            specs.push(CorpusSpec::Cayley {
                n,
                mv_dim: 1,
                null_dim: 1,
                seed: base + 30,
            });
        }
        // Non-dense domains via graph restrictions (m < n), including the
        // fully trivial one.
        let mut ms = vec![0];
        if n >= 2 {
            ms.push(n / 2);
            ms.push(n - 1);
        }
        for (mi, &m) in ms.iter().enumerate() {
            for k in 0..2 {
                specs.push(CorpusSpec::Restriction {
                    n,
                    mv_dim: 0,
                    null_dim: 0,
                    graph_dim: m,
                    seed: base + 40 + 10 * mi as u64 + k,
                });
            }
        }
        if n >= 2 {
            specs.push(CorpusSpec::Restriction {
                n,
                mv_dim: 1,
                null_dim: 0,
                graph_dim: n - 1,
                seed: base + 70,
            });
        }
        if n >= 3 {
            let mut rng = ChaCha8Rng::seed_from_u64(base + 80);
            let diag: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let offdiag: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.2..1.5)).collect();
            specs.push(CorpusSpec::Jacobi {
                n,
                diag: diag.clone(),
                offdiag: offdiag.clone(),
                restrict_ends: false,
            });
            specs.push(CorpusSpec::Jacobi {
                n,
                diag,
                offdiag,
                restrict_ends: true,
            });
        }
    }
    specs
        .into_iter()
        .map(|spec| {
            let relation = spec.realize(tol)?;
            Ok(CorpusCase { spec, relation })
        })
        .collect()
}

/// Default perturbation pairs: every profile over a spread of Hermitian
/// bases, exercising each invariance mode's hypothesis combination.
pub fn default_pairs(seed: u64, tol: &TolerancePolicy) -> Result<Vec<PairCase>> {
    default_pairs_sized(seed, &DEFAULT_SIZES, tol)
}

/// Same pair pattern over caller-chosen sizes.
pub fn default_pairs_sized(
    seed: u64,
    sizes: &[usize],
    tol: &TolerancePolicy,
) -> Result<Vec<PairCase>> {
    let mut pairs = Vec::new();
    for (si, &n) in sizes.iter().enumerate() {
        let base_seed = seed.wrapping_add(777 * si as u64);
        let bases = [
            CorpusSpec::Cayley {
                n,
                mv_dim: 0,
                null_dim: 0,
                seed: base_seed,
            },
            CorpusSpec::Cayley {
                n,
                mv_dim: if n >= 2 { 1 } else { 0 },
                null_dim: 0,
                seed: base_seed + 1,
            },
            CorpusSpec::Restriction {
                n,
                mv_dim: 0,
                null_dim: 0,
                graph_dim: n.saturating_sub(1),
                seed: base_seed + 2,
            },
        ];
        let profiles = [
            PairProfile::Zero,
            PairProfile::Multiple { kappa: 1.0 / 3.0 },
            PairProfile::Multiple { kappa: -0.25 },
            PairProfile::BoundedRandom,
            PairProfile::MvMatchingRandom,
        ];
        for (bi, base_spec) in bases.iter().enumerate() {
            let base = base_spec.realize(tol)?;
            for (pi, &profile) in profiles.iter().enumerate() {
                let pert_seed = base_seed + 100 + 10 * bi as u64 + pi as u64;
                let pert = perturbation_pair(&base, profile, pert_seed, tol)?;
                pairs.push(PairCase {
                    base_spec: base_spec.clone(),
                    profile,
                    base: base.clone(),
                    pert,
                });
            }
        }
    }
    Ok(pairs)
}
