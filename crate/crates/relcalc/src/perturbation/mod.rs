//! Relative-boundedness certificates, projector-gap bounds, homotopy index
//! tracking, and theorem-shaped invariance verdicts.
//!
//! The quantitative core works on Gram forms: with `D` an orthonormal basis
//! of the base domain and `x = D c`, both `|T(x)|^2` and `|S(x)|^2` are
//! Hermitian forms in the coordinates `c`, so every inequality of the shape
//! `|S(x)|^2 <= a^2 |x|^2 + b^2 |T(x)|^2` is decided exactly by one extreme
//! eigenvalue.

pub mod invariance;

pub use invariance::{invariance_modes, invariance_report, InvarianceMode, InvarianceVerdict};

use nalgebra::SymmetricEigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quotient::OperatorPart;
use crate::relation::{compose, Relation};
use crate::report::complex_pair;
use crate::subspace::{compare, operator_norm, Frame};
use crate::tolerance::TolerancePolicy;
use crate::{CMatrix, CVector, C64};

/// Inclusion diagnostics between a base relation and a perturbation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InclusionReport {
    /// `D(T) ⊆ D(S)`.
    pub dom_ok: bool,
    /// `S(0) ⊆ T(0)`.
    pub mv_ok: bool,
    /// `N(T) ⊆ N(S)`.
    pub null_ok: bool,
    /// `T - S + S` reproduces `T`; equivalent to `dom_ok && mv_ok`.
    pub recompose_ok: bool,
}

/// Compute all four inclusion diagnostics. `recompose_ok` is computed by
/// actually forming `T - S + S`, not from the other two flags, so the
/// equivalence stays testable.
pub fn inclusion_report(
    t: &Relation,
    s: &Relation,
    tol: &TolerancePolicy,
) -> Result<InclusionReport> {
    if t.ambient_dim() != s.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: t.ambient_dim(),
            right: s.ambient_dim(),
        });
    }
    let tp = t.parts(tol);
    let sp = s.parts(tol);
    let dom_ok = compare(&tp.domain, &sp.domain, tol)?.is_subset;
    let mv_ok = compare(&sp.mv, &tp.mv, tol)?.is_subset;
    let null_ok = compare(&tp.null, &sp.null, tol)?.is_subset;
    let minus_s = s.scalar_mul(C64::new(-1.0, 0.0), tol);
    let recomposed = t.op_sum(&minus_s, tol)?.op_sum(s, tol)?;
    let recompose_ok = recomposed.same_relation(t, tol)?;
    Ok(InclusionReport {
        dom_ok,
        mv_ok,
        null_ok,
        recompose_ok,
    })
}

/// Gram forms of a base relation and a perturbation over the base domain.
#[derive(Debug, Clone)]
pub struct DomainForms {
    /// Orthonormal basis of `D(T)`; both forms live in its coordinates.
    pub domain: Frame,
    /// Form of `|T(x)|^2`.
    pub gram_base: CMatrix,
    /// Form of `|S(x)|^2`.
    pub gram_pert: CMatrix,
    base_part: OperatorPart,
    pert_part: OperatorPart,
    pert_coords: CMatrix,
    /// `1 + |G_S|`, the scale used by eigenvalue comparisons.
    pert_scale: f64,
}

impl DomainForms {
    /// Requires `D(T) ⊆ D(S)`.
    pub fn new(t: &Relation, s: &Relation, tol: &TolerancePolicy) -> Result<Self> {
        if t.ambient_dim() != s.ambient_dim() {
            return Err(Error::AmbientMismatch {
                left: t.ambient_dim(),
                right: s.ambient_dim(),
            });
        }
        let base_part = OperatorPart::new(t, tol);
        let pert_part = OperatorPart::new(s, tol);
        let domain = base_part.domain().clone();
        let dom_ok = compare(&domain, pert_part.domain(), tol)?.is_subset;
        if !dom_ok {
            return Err(Error::HypothesisViolation {
                check: "domain inclusion",
                detail: "the base domain is not contained in the perturbation domain".to_string(),
            });
        }
        let gram_base = base_part.matrix().adjoint() * base_part.matrix();
        // Coordinates of base-domain vectors inside the perturbation domain.
        let pert_coords = pert_part.domain().basis().adjoint() * domain.basis();
        let pert_applied = pert_part.matrix() * &pert_coords;
        let gram_pert = pert_applied.adjoint() * &pert_applied;
        let pert_scale = 1.0 + operator_norm(&gram_pert);
        Ok(Self {
            domain,
            gram_base,
            gram_pert,
            base_part,
            pert_part,
            pert_coords,
            pert_scale,
        })
    }

    /// Dimension of the base domain.
    pub fn dim(&self) -> usize {
        self.domain.rank()
    }

    /// `|T(x)|` for `x = D c`.
    pub fn base_norm_at(&self, coords: &CVector) -> f64 {
        (self.base_part.matrix() * coords).norm()
    }

    /// `|S(x)|` for `x = D c`.
    pub fn pert_norm_at(&self, coords: &CVector) -> f64 {
        (self.pert_part.matrix() * &self.pert_coords * coords).norm()
    }
}

/// Largest eigenvalue of a Hermitian form; the supremum over an empty
/// space is reported as negative infinity.
pub fn lambda_max(h: &CMatrix) -> f64 {
    if h.nrows() == 0 {
        return f64::NEG_INFINITY;
    }
    SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Smallest eigenvalue of a Hermitian form; positive infinity for empty.
pub fn lambda_min(h: &CMatrix) -> f64 {
    if h.nrows() == 0 {
        return f64::INFINITY;
    }
    SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

fn eigenvector_of_max(h: &CMatrix) -> Option<CVector> {
    if h.nrows() == 0 {
        return None;
    }
    let eig = SymmetricEigen::new(h.clone());
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| {
            if *v > acc.1 {
                (i, *v)
            } else {
                acc
            }
        });
    Some(CVector::from(eig.eigenvectors.column(idx)))
}

/// Which inequality a certificate asserts on the base domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertVariant {
    /// `|S(x)| <= a |x| + b |T(x)|`.
    Linear,
    /// `|S(x)|^2 <= a^2 |x|^2 + b^2 |T(x)|^2`.
    Quadratic,
}

/// An explicit relative-bound certificate `(a, b)` for a named pair.
#[derive(Debug, Clone, Serialize)]
pub struct RelBoundCertificate {
    pub a: f64,
    pub b: f64,
    pub variant: CertVariant,
    /// Human-readable identification of the pair the certificate is about.
    pub context: String,
}

impl RelBoundCertificate {
    pub fn linear(a: f64, b: f64, context: impl Into<String>) -> Self {
        Self {
            a,
            b,
            variant: CertVariant::Linear,
            context: context.into(),
        }
    }

    pub fn quadratic(a: f64, b: f64, context: impl Into<String>) -> Self {
        Self {
            a,
            b,
            variant: CertVariant::Quadratic,
            context: context.into(),
        }
    }
}

/// How a `holds` verdict was established.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "path", rename_all = "snake_case")]
pub enum CertProof {
    /// Single exact eigenvalue test of the quadratic form.
    QuadraticExact { margin: f64 },
    /// The converted quadratic held for every epsilon on the grid.
    EpsilonGrid { worst_margin: f64 },
    /// No proof, but sphere sampling produced no counterexample.
    SphereSampling { samples: usize },
    /// Refuted; see the witness.
    Refuted,
}

/// Outcome of re-checking a certificate on its pair.
#[derive(Debug, Clone, Serialize)]
pub struct CertCheck {
    pub holds: bool,
    /// Largest violation found (negative when the inequality has slack).
    pub worst_residual: f64,
    pub proof: CertProof,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// The 25-point logarithmic epsilon grid used by linear certification.
pub fn epsilon_grid() -> Vec<f64> {
    (0..25).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 24.0)).collect()
}

/// Verify a certificate for `s` relative to `t` on `D(T)`.
///
/// The quadratic variant reduces to one eigenvalue test and is exact. The
/// linear variant is nonconvex; it is decided by the equivalence
/// `|S(x)| <= a|x| + b|T(x)|` for all `x` iff the converted quadratic with
/// constants `((1+1/e) a^2, (1+e) b^2)` holds for every `e > 0`. Each grid
/// point is tested exactly; a failing grid point yields a guaranteed
/// counterexample from its top eigenvector, and unit-sphere sampling
/// (`samples` draws) backs the grid. A `false` verdict always carries a
/// witness with positive residual.
pub fn certify_bound(
    t: &Relation,
    s: &Relation,
    cert: &RelBoundCertificate,
    samples: usize,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<CertCheck> {
    let forms = DomainForms::new(t, s, tol)?;
    certify_on_forms(&forms, cert, samples, seed, tol)
}

/// Same as [`certify_bound`] with precomputed forms.
pub fn certify_on_forms(
    forms: &DomainForms,
    cert: &RelBoundCertificate,
    samples: usize,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<CertCheck> {
    if cert.a < 0.0 || cert.b < 0.0 || !cert.a.is_finite() || !cert.b.is_finite() {
        return Err(Error::OutOfRange {
            what: format!("certificate constants must be finite and nonnegative, got ({}, {})", cert.a, cert.b),
        });
    }
    let r = forms.dim();
    if r == 0 {
        return Ok(CertCheck {
            holds: true,
            worst_residual: f64::NEG_INFINITY,
            proof: CertProof::QuadraticExact {
                margin: f64::NEG_INFINITY,
            },
            witness: None,
        });
    }
    let eig_tol = tol.cmp_atol * forms.pert_scale;

    match cert.variant {
        CertVariant::Quadratic => {
            let margin = quad_margin(forms, cert.a, cert.b);
            Ok(CertCheck {
                holds: margin <= eig_tol,
                worst_residual: margin,
                proof: if margin <= eig_tol {
                    CertProof::QuadraticExact { margin }
                } else {
                    CertProof::Refuted
                },
                witness: if margin <= eig_tol {
                    None
                } else {
                    Some(format!("quadratic form exceeds the certificate by {margin:.3e}"))
                },
            })
        }
        CertVariant::Linear => {
            let mut worst_residual = f64::NEG_INFINITY;
            let mut witness: Option<String> = None;
            let mut worst_grid_margin = f64::NEG_INFINITY;
            for eps in epsilon_grid() {
                let a2 = (1.0 + 1.0 / eps) * cert.a * cert.a;
                let b2 = (1.0 + eps) * cert.b * cert.b;
                let h = &forms.gram_pert
                    - &forms.gram_base * C64::new(b2, 0.0)
                    - CMatrix::identity(r, r) * C64::new(a2, 0.0);
                let margin = lambda_max(&h);
                worst_grid_margin = worst_grid_margin.max(margin);
                if margin > eig_tol {
                    // A failing converted quadratic refutes the linear
                    // inequality outright; its top eigenvector violates it.
                    if let Some(c) = eigenvector_of_max(&h) {
                        let res = linear_residual(forms, cert, &c);
                        if res > worst_residual {
                            worst_residual = res;
                            witness = Some(witness_text(forms, &c, res));
                        }
                    }
                }
            }
            // Sphere sampling as an independent falsifier.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let c = random_unit_coords(r, &mut rng);
                let res = linear_residual(forms, cert, &c);
                if res > worst_residual {
                    worst_residual = res;
                    if res > tol.cmp_atol * (1.0 + cert.a + cert.b) {
                        witness = Some(witness_text(forms, &c, res));
                    }
                }
            }
            let lin_tol = tol.cmp_atol * (1.0 + cert.a + cert.b);
            if witness.is_some() && worst_residual > lin_tol {
                return Ok(CertCheck {
                    holds: false,
                    worst_residual,
                    proof: CertProof::Refuted,
                    witness,
                });
            }
            let proof = if worst_grid_margin <= eig_tol {
                CertProof::EpsilonGrid {
                    worst_margin: worst_grid_margin,
                }
            } else {
                CertProof::SphereSampling { samples }
            };
            Ok(CertCheck {
                holds: true,
                worst_residual,
                proof,
                witness: None,
            })
        }
    }
}

fn quad_margin(forms: &DomainForms, a: f64, b: f64) -> f64 {
    let r = forms.dim();
    let h = &forms.gram_pert
        - &forms.gram_base * C64::new(b * b, 0.0)
        - CMatrix::identity(r, r) * C64::new(a * a, 0.0);
    lambda_max(&h)
}

fn linear_residual(forms: &DomainForms, cert: &RelBoundCertificate, coords: &CVector) -> f64 {
    let norm = coords.norm();
    forms.pert_norm_at(coords) - cert.a * norm - cert.b * forms.base_norm_at(coords)
}

fn witness_text(forms: &DomainForms, coords: &CVector, residual: f64) -> String {
    let x = forms.domain.basis() * coords;
    let entries: Vec<String> = x.iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
    format!("x = [{}], residual {residual:.3e}", entries.join(", "))
}

fn random_unit_coords(r: usize, rng: &mut ChaCha8Rng) -> CVector {
    use rand_distr::{Distribution, StandardNormal};
    loop {
        let c = CVector::from_fn(r, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        });
        let n = c.norm();
        if n > 1e-6 {
            return c / C64::new(n, 0.0);
        }
    }
}

/// One point of the quadratic trade-off curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrontierPoint {
    pub b: f64,
    /// Minimal `a` making the quadratic inequality hold at this `b`.
    pub a: f64,
}

/// For each `b` in the grid, the minimal `a` with
/// `|S(x)|^2 <= a^2 |x|^2 + b^2 |T(x)|^2` on `D(T)`:
/// `a = sqrt(max(0, lambda_max(G_S - b^2 G_T)))`. The curve is
/// nonincreasing in `b`. Requires `D(T) ⊆ D(S)`.
pub fn quadratic_frontier(
    t: &Relation,
    s: &Relation,
    b_grid: &[f64],
    tol: &TolerancePolicy,
) -> Result<Vec<FrontierPoint>> {
    let forms = DomainForms::new(t, s, tol)?;
    Ok(frontier_on_forms(&forms, b_grid, tol))
}

/// Frontier from precomputed forms.
pub fn frontier_on_forms(
    forms: &DomainForms,
    b_grid: &[f64],
    tol: &TolerancePolicy,
) -> Vec<FrontierPoint> {
    b_grid
        .iter()
        .map(|&b| FrontierPoint {
            b,
            a: frontier_a(forms, b, tol),
        })
        .collect()
}

/// Minimal quadratic `a` at a single `b`.
///
/// Extreme eigenvalues below the comparison tolerance are treated as zero
/// before the square root; otherwise rounding noise of a vanishing form
/// (`S = T` at `b = 1`, say) would surface as a spurious `a` near
/// `sqrt(eps)`.
pub fn frontier_a(forms: &DomainForms, b: f64, tol: &TolerancePolicy) -> f64 {
    if forms.dim() == 0 {
        return 0.0;
    }
    let h = &forms.gram_pert - &forms.gram_base * C64::new(b * b, 0.0);
    let lam = lambda_max(&h);
    if lam <= tol.cmp_atol * forms.pert_scale {
        0.0
    } else {
        lam.sqrt()
    }
}

/// Rebase a linear certificate of `S` against `T` to one of `S` against
/// `T + tS`: constants become `(a / (1-b), b / (1-b))`, independent of
/// `t` in `[0, 1]`. Undefined for `b >= 1`.
pub fn rebase_certificate(cert: &RelBoundCertificate, t: f64) -> Result<RelBoundCertificate> {
    if cert.variant != CertVariant::Linear {
        return Err(Error::OutOfRange {
            what: "rebase applies to linear certificates".to_string(),
        });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            what: format!("shift parameter t = {t} outside [0, 1]"),
        });
    }
    if cert.b >= 1.0 {
        return Err(Error::TransformUndefined { b: cert.b });
    }
    Ok(RelBoundCertificate::linear(
        cert.a / (1.0 - cert.b),
        cert.b / (1.0 - cert.b),
        format!("{} rebased onto sum with t = {t}", cert.context),
    ))
}

/// One sampled point of a projector family sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapPoint {
    #[serde(with = "complex_pair")]
    pub k: C64,
    /// `|P_k - P_0|` where `P_k` projects onto `R(A + kB)`.
    pub gap: f64,
}

/// Sweep the projectors onto `R(A + kB)` over a grid of coupling values.
///
/// Requires `D(A) ⊆ D(B)`, `B(0) ⊆ A(0)`, and `|B(x)| <= c |A(x)|` on
/// `D(A)`; all three are verified before sweeping and failures are
/// reported together. For `|k| <= 1/(2c)` the gap obeys
/// `|P_k - P_0| <= 2 c |k|`.
pub fn projector_family(
    a: &Relation,
    b: &Relation,
    c: f64,
    k_grid: &[C64],
    tol: &TolerancePolicy,
) -> Result<Vec<GapPoint>> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: a.ambient_dim(),
            right: b.ambient_dim(),
        });
    }
    if c < 0.0 || !c.is_finite() {
        return Err(Error::OutOfRange {
            what: format!("coupling constant c = {c}"),
        });
    }
    let mut failures: Vec<&str> = Vec::new();
    let incl = inclusion_report(a, b, tol)?;
    if !incl.dom_ok {
        failures.push("domain inclusion D(A) ⊆ D(B)");
    }
    if !incl.mv_ok {
        failures.push("multivalued inclusion B(0) ⊆ A(0)");
    }
    if incl.dom_ok {
        let forms = DomainForms::new(a, b, tol)?;
        if forms.dim() > 0 {
            let h = &forms.gram_pert - &forms.gram_base * C64::new(c * c, 0.0);
            let margin = lambda_max(&h);
            if margin > tol.cmp_atol * (1.0 + operator_norm(&forms.gram_pert)) {
                failures.push("norm domination |B(x)| <= c |A(x)|");
            }
        }
    }
    if !failures.is_empty() {
        return Err(Error::HypothesisViolation {
            check: "projector family preconditions",
            detail: failures.join("; "),
        });
    }
    let p0 = a.parts(tol).range.projector();
    let mut points = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let sum = a.op_sum(&b.scalar_mul(k, tol), tol)?;
        let pk = sum.parts(tol).range.projector();
        points.push(GapPoint {
            k,
            gap: operator_norm(&(&pk - &p0)),
        });
    }
    Ok(points)
}

/// One node of a homotopy trace.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HomotopyRow {
    pub t: f64,
    /// Upper-half-plane spectral point certified at this node (the lower
    /// one is its conjugate).
    #[serde(with = "complex_pair")]
    pub proof_z: C64,
    pub rank_plus: usize,
    pub rank_minus: usize,
    /// Projector gap to the previous node (0 at the first node).
    pub gap_plus: f64,
    pub gap_minus: f64,
}

/// Trace of deficiency projector ranks of `T + tS` over `t` in `[0, 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct HomotopyTrace {
    pub rows: Vec<HomotopyRow>,
    pub rank_constant_plus: bool,
    pub rank_constant_minus: bool,
}

impl HomotopyTrace {
    pub fn rank_constant(&self) -> bool {
        self.rank_constant_plus && self.rank_constant_minus
    }

    pub fn endpoint_ranks(&self) -> ((usize, usize), (usize, usize)) {
        let first = self.rows.first().expect("trace has at least two rows");
        let last = self.rows.last().expect("trace has at least two rows");
        (
            (first.rank_plus, first.rank_minus),
            (last.rank_plus, last.rank_minus),
        )
    }
}

struct HomotopyNode {
    t: f64,
    proj_plus: CMatrix,
    proj_minus: CMatrix,
    rank_plus: usize,
    rank_minus: usize,
    proof_z: C64,
}

/// Track the deficiency projectors of `T + tS` from `t = 0` to `t = 1`,
/// refining the grid until consecutive projector gaps drop below 0.9 so
/// ranks transfer along the whole path.
///
/// Rank traces are read at the fixed spectral points `±i`; the certified
/// `z = ±i a` from the quadratic certificate of `S` against `T + tS` at
/// `b = 1` is recorded per node as `proof_z`. Requires both relations
/// Hermitian and the usual inclusions.
pub fn homotopy_sweep(
    t: &Relation,
    s: &Relation,
    initial_grid: usize,
    tol: &TolerancePolicy,
) -> Result<HomotopyTrace> {
    if t.ambient_dim() != s.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: t.ambient_dim(),
            right: s.ambient_dim(),
        });
    }
    if initial_grid < 2 {
        return Err(Error::OutOfRange {
            what: "initial grid needs at least two nodes".to_string(),
        });
    }
    if !t.classify(tol).is_hermitian || !s.classify(tol).is_hermitian {
        return Err(Error::HypothesisViolation {
            check: "hermitian inputs",
            detail: "homotopy tracking requires Hermitian base and perturbation".to_string(),
        });
    }
    let incl = inclusion_report(t, s, tol)?;
    if !incl.dom_ok || !incl.mv_ok {
        return Err(Error::HypothesisViolation {
            check: "inclusions",
            detail: format!("dom_ok = {}, mv_ok = {}", incl.dom_ok, incl.mv_ok),
        });
    }

    let eval = |tt: f64| -> Result<HomotopyNode> {
        let sum = t.op_sum(&s.scalar_mul(C64::new(tt, 0.0), tol), tol)?;
        // Certificate of S relative to T + tS at b = 1; always satisfiable
        // here. The certified spectral point is i*a; a is floored at the
        // comparison tolerance to keep it off the real axis.
        let forms = DomainForms::new(&sum, s, tol)?;
        let a = frontier_a(&forms, 1.0, tol).max(tol.cmp_atol);
        let proof_z = C64::new(0.0, a);
        let space_plus =
            crate::deficiency::deficiency_space(&sum, C64::new(0.0, 1.0), tol);
        let space_minus =
            crate::deficiency::deficiency_space(&sum, C64::new(0.0, -1.0), tol);
        Ok(HomotopyNode {
            t: tt,
            rank_plus: space_plus.rank(),
            rank_minus: space_minus.rank(),
            proj_plus: space_plus.projector(),
            proj_minus: space_minus.projector(),
            proof_z,
        })
    };

    let mut nodes: Vec<HomotopyNode> = Vec::with_capacity(initial_grid);
    for i in 0..initial_grid {
        let tt = i as f64 / (initial_grid - 1) as f64;
        nodes.push(eval(tt)?);
    }

    // Bisect any interval whose projector gap reaches 0.9 (safety margin
    // below the rank-transfer threshold of 1). Depth cap of 20 halvings.
    let min_step = 0.5_f64.powi(20);
    let mut i = 0;
    while i + 1 < nodes.len() {
        let gap_plus = operator_norm(&(&nodes[i].proj_plus - &nodes[i + 1].proj_plus));
        let gap_minus = operator_norm(&(&nodes[i].proj_minus - &nodes[i + 1].proj_minus));
        if gap_plus >= 0.9 || gap_minus >= 0.9 {
            let width = nodes[i + 1].t - nodes[i].t;
            if width <= min_step {
                return Err(Error::NonConvergence {
                    detail: format!(
                        "projector gap {:.3} persists on [{}, {}] below minimum step",
                        gap_plus.max(gap_minus),
                        nodes[i].t,
                        nodes[i + 1].t
                    ),
                });
            }
            let mid = eval(0.5 * (nodes[i].t + nodes[i + 1].t))?;
            nodes.insert(i + 1, mid);
            // Re-examine the same left interval against the new midpoint.
            continue;
        }
        i += 1;
    }

    let mut rows = Vec::with_capacity(nodes.len());
    for (j, node) in nodes.iter().enumerate() {
        let (gap_plus, gap_minus) = if j == 0 {
            (0.0, 0.0)
        } else {
            (
                operator_norm(&(&nodes[j - 1].proj_plus - &node.proj_plus)),
                operator_norm(&(&nodes[j - 1].proj_minus - &node.proj_minus)),
            )
        };
        rows.push(HomotopyRow {
            t: node.t,
            proof_z: node.proof_z,
            rank_plus: node.rank_plus,
            rank_minus: node.rank_minus,
            gap_plus,
            gap_minus,
        });
    }
    let rank_constant_plus = rows.windows(2).all(|w| w[1].rank_plus == w[0].rank_plus)
        && rows.iter().all(|r| r.gap_plus < 1.0);
    let rank_constant_minus = rows.windows(2).all(|w| w[1].rank_minus == w[0].rank_minus)
        && rows.iter().all(|r| r.gap_minus < 1.0);
    Ok(HomotopyTrace {
        rows,
        rank_constant_plus,
        rank_constant_minus,
    })
}

/// Structure of `S T^{-1}`.
#[derive(Debug, Clone, Serialize)]
pub struct StInverseReport {
    /// The product has trivial multivalued part.
    pub is_operator: bool,
    /// Relation norm of the product.
    pub norm: f64,
}

/// Form `S T^{-1}` and report whether it is an operator and how large it
/// is. When `N(T) ⊆ N(S)` and `S` is an operator the product is always an
/// operator.
pub fn st_inverse_analysis(
    s: &Relation,
    t: &Relation,
    tol: &TolerancePolicy,
) -> Result<StInverseReport> {
    let product = compose(s, &t.inverse(), tol)?;
    let parts = product.parts(tol);
    Ok(StInverseReport {
        is_operator: parts.mv.rank() == 0,
        norm: crate::quotient::relation_norm(&product, tol),
    })
}
