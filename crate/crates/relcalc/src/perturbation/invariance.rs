//! Deficiency-index invariance verdicts, one strategy per theorem shape.
//!
//! Each mode checks its own hypotheses mechanically and only then compares
//! deficiency indices; a failed hypothesis yields a skip verdict, never a
//! false claim. Modes are registered by name and selected at runtime, so
//! suites and the command line dispatch through one table.

use serde::Serialize;

use super::{
    certify_on_forms, frontier_a, inclusion_report, lambda_min, DomainForms,
    RelBoundCertificate,
};
use crate::deficiency::indices_at_i;
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::subspace::compare;
use crate::tolerance::TolerancePolicy;
use crate::C64;

/// One mechanically checked hypothesis clause.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl HypothesisCheck {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ok,
            detail: detail.into(),
        }
    }
}

/// Outcome of one invariance mode on one pair.
#[derive(Debug, Clone, Serialize)]
pub struct InvarianceVerdict {
    pub mode: String,
    /// What the mode concludes when its hypotheses hold.
    pub statement: String,
    pub hypotheses: Vec<HypothesisCheck>,
    /// All hypotheses held; only then is a conclusion claimed.
    pub applicable: bool,
    /// Indices `(d_+, d_-)` of the base relation at `±i`.
    pub base_indices: (usize, usize),
    /// Indices of the perturbed relation (the sum, or the second relation
    /// itself for difference-shaped modes).
    pub perturbed_indices: (usize, usize),
    /// `None` when skipped for failed hypotheses.
    pub conclusion_ok: Option<bool>,
    pub notes: Vec<String>,
}

impl InvarianceVerdict {
    pub fn holds(&self) -> bool {
        self.conclusion_ok == Some(true)
    }

    pub fn skipped(&self) -> bool {
        !self.applicable
    }
}

/// A named invariance strategy.
pub trait InvarianceMode: Sync {
    fn name(&self) -> &'static str;
    /// One-line statement of the conclusion.
    fn statement(&self) -> &'static str;
    fn run(
        &self,
        base: &Relation,
        pert: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<InvarianceVerdict>;
}

static MODES: &[&dyn InvarianceMode] = &[
    &Thm31, &Cor31, &Cor32, &Cor33, &Cor35, &Cor36, &Cor38, &Thm32,
];

/// All registered modes, in registry order.
pub fn invariance_modes() -> &'static [&'static dyn InvarianceMode] {
    MODES
}

/// Look up a mode by its registered name.
pub fn find_mode(name: &str) -> Option<&'static dyn InvarianceMode> {
    MODES.iter().copied().find(|m| m.name() == name)
}

/// Run the named mode on `(base, pert)`.
pub fn invariance_report(
    base: &Relation,
    pert: &Relation,
    mode: &str,
    tol: &TolerancePolicy,
) -> Result<InvarianceVerdict> {
    let strategy = find_mode(mode).ok_or_else(|| Error::UnknownName {
        kind: "invariance mode",
        name: mode.to_string(),
        known: MODES
            .iter()
            .map(|m| m.name())
            .collect::<Vec<_>>()
            .join(", "),
    })?;
    strategy.run(base, pert, tol)
}

fn hermitian_clause(label: &str, rel: &Relation, tol: &TolerancePolicy) -> HypothesisCheck {
    let cls = rel.classify(tol);
    HypothesisCheck::new(
        format!("{label} hermitian"),
        cls.is_hermitian,
        format!(
            "graph dim {}, selfadjoint = {}",
            rel.graph_dim(),
            cls.is_selfadjoint
        ),
    )
}

fn inclusion_clauses(
    base: &Relation,
    pert: &Relation,
    tol: &TolerancePolicy,
) -> Result<(super::InclusionReport, Vec<HypothesisCheck>)> {
    let incl = inclusion_report(base, pert, tol)?;
    let checks = vec![
        HypothesisCheck::new(
            "domain inclusion",
            incl.dom_ok,
            "base domain contained in perturbation domain",
        ),
        HypothesisCheck::new(
            "multivalued inclusion",
            incl.mv_ok,
            "perturbation multivalued part contained in base multivalued part",
        ),
    ];
    Ok((incl, checks))
}

/// Exact quadratic certificate of `pert` against `against` at slope `b`;
/// `None` when the domain inclusion needed for the forms fails.
fn certificate_clause(
    name: &str,
    against: &Relation,
    pert: &Relation,
    b: f64,
    tol: &TolerancePolicy,
) -> HypothesisCheck {
    match DomainForms::new(against, pert, tol) {
        Ok(forms) => {
            let a = frontier_a(&forms, b, tol);
            let cert = RelBoundCertificate::quadratic(a, b, name.to_string());
            match certify_on_forms(&forms, &cert, 0, 0, tol) {
                Ok(check) => HypothesisCheck::new(
                    name.to_string(),
                    check.holds,
                    format!("certificate (a, b) = ({a:.6e}, {b})"),
                ),
                Err(e) => HypothesisCheck::new(name.to_string(), false, e.to_string()),
            }
        }
        Err(e) => HypothesisCheck::new(name.to_string(), false, e.to_string()),
    }
}

fn finish(
    mode: &dyn InvarianceMode,
    checks: Vec<HypothesisCheck>,
    base_indices: (usize, usize),
    perturbed_indices: (usize, usize),
    conclusion: impl FnOnce() -> bool,
    notes: Vec<String>,
) -> InvarianceVerdict {
    let applicable = checks.iter().all(|c| c.ok);
    InvarianceVerdict {
        mode: mode.name().to_string(),
        statement: mode.statement().to_string(),
        hypotheses: checks,
        applicable,
        base_indices,
        perturbed_indices,
        conclusion_ok: if applicable { Some(conclusion()) } else { None },
        notes,
    }
}

fn ambient_guard(base: &Relation, pert: &Relation) -> Result<()> {
    if base.ambient_dim() != pert.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: base.ambient_dim(),
            right: pert.ambient_dim(),
        });
    }
    Ok(())
}

struct Thm31;

impl InvarianceMode for Thm31 {
    fn name(&self) -> &'static str {
        "thm31"
    }

    fn statement(&self) -> &'static str {
        "indices are preserved when the perturbation stays relatively bounded against every interpolated sum"
    }

    fn run(
        &self,
        base: &Relation,
        pert: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<InvarianceVerdict> {
        ambient_guard(base, pert)?;
        let mut checks = vec![
            hermitian_clause("base", base, tol),
            hermitian_clause("perturbation", pert, tol),
        ];
        let (incl, incl_checks) = inclusion_clauses(base, pert, tol)?;
        checks.extend(incl_checks);
        if incl.dom_ok {
            for t_val in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let sum = base.op_sum(&pert.scalar_mul(C64::new(t_val, 0.0), tol), tol)?;
                checks.push(certificate_clause(
                    &format!("relative bound against sum at t = {t_val}"),
                    &sum,
                    pert,
                    1.0,
                    tol,
                ));
            }
        } else {
            checks.push(HypothesisCheck::new(
                "relative bound along interpolation",
                false,
                "requires the domain inclusion",
            ));
        }
        let sum = base.op_sum(pert, tol)?;
        let base_idx = indices_at_i(base, tol);
        let sum_idx = indices_at_i(&sum, tol);
        Ok(finish(self, checks, base_idx, sum_idx, || base_idx == sum_idx, vec![]))
    }
}

struct Cor31;

impl InvarianceMode for Cor31 {
    fn name(&self) -> &'static str {
        "cor31"
    }

    fn statement(&self) -> &'static str {
        "indices are preserved under a relative bound below one"
    }

    fn run(
        &self,
        base: &Relation,
        pert: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<InvarianceVerdict> {
        ambient_guard(base, pert)?;
        let mut checks = vec![
            hermitian_clause("base", base, tol),
            hermitian_clause("perturbation", pert, tol),
        ];
        let (_incl, incl_checks) = inclusion_clauses(base, pert, tol)?;
        checks.extend(incl_checks);
        checks.push(certificate_clause(
            "relative bound below one (b = 1/2)",
            base,
            pert,
            0.5,
            tol,
        ));
        let sum = base.op_sum(pert, tol)?;
        let base_idx = indices_at_i(base, tol);
        let sum_idx = indices_at_i(&sum, tol);
        Ok(finish(self, checks, base_idx, sum_idx, || base_idx == sum_idx, vec![]))
    }
}

struct Cor32;

impl InvarianceMode for Cor32 {
    fn name(&self) -> &'static str {
        "cor32"
    }

    fn statement(&self) -> &'static str {
        "the sum is self-adjoint exactly when the base is, under a relative bound below one"
    }

    fn run(
        &self,
        base: &Relation,
        pert: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<InvarianceVerdict> {
        ambient_guard(base, pert)?;
        let mut checks = vec![
            hermitian_clause("base", base, tol),
            hermitian_clause("perturbation", pert, tol),
        ];
        let (_incl, incl_checks) = inclusion_clauses(base, pert, tol)?;
        checks.extend(incl_checks);
        checks.push(certificate_clause(
            "relative bound below one (b = 1/2)",
            base,
            pert,
            0.5,
            tol,
        ));
        let sum = base.op_sum(pert, tol)?;
        let base_idx = indices_at_i(base, tol);
        let sum_idx = indices_at_i(&sum, tol);
        let equivalent = sum.classify(tol).is_selfadjoint == base.classify(tol).is_selfadjoint;
        Ok(finish(self, checks, base_idx, sum_idx, || equivalent, vec![]))
    }
}

struct Cor33;

impl InvarianceMode for Cor33 {
    fn name(&self) -> &'static str {
        "cor33"
    }

    fn statement(&self) -> &'static str {
        "indices are preserved when the product with the inverse base is bounded below one"
    }

    fn run(
        &self,
        base: &Relation,
        pert: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<InvarianceVerdict> {
        ambient_guard(base, pert)?;
        let mut checks = vec![
            hermitian_clause("base", base, tol),
            hermitian_clause("perturbation", pert, tol),
        ];
        let (incl, incl_checks) = inclusion_clauses(base, pert, tol)?;
        checks.extend(incl_checks);
        checks.push(HypothesisCheck::new(
            "null-space inclusion",
            incl.null_ok,
            "base null space contained in perturbation null space",
        ));
        let product = super::st_inverse_analysis(pert, base, tol)?;
        checks.push(HypothesisCheck::new(
            "product bound below one",
            product.norm < 1.0,
            format!("norm of the product with the inverse base = {:.6e}", product.norm),
        ));
        let sum = base.op_sum(pert, tol)?;
        let base_idx = indices_at_i(base, tol);
        let sum_idx = indices_at_i(&sum, tol);
        Ok(finish(self, checks, base_idx, sum_idx, || base_idx == sum_idx, vec![]))
    }
}

struct Cor35;

impl InvarianceMode for Cor35 {
    fn name(&self) -> &'static str {
        "cor35"
    }

    fn statement(&self) -> &'static str {
        "indices are preserved for a relatively bounded, accretively coupled perturbation"
    }

    fn run(
        &self,
        base: &Relation,
        pert: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<InvarianceVerdict> {
        ambient_guard(base, pert)?;
        let mut checks = vec![
            hermitian_clause("base", base, tol),
            hermitian_clause("perturbation", pert, tol),
        ];
        let (incl, incl_checks) = inclusion_clauses(base, pert, tol)?;
        checks.extend(incl_checks);
        checks.push(certificate_clause(
            "relative boundedness",
            base,
            pert,
            1.0,
            tol,
        ));
        if incl.dom_ok {
            let coupling = accretive_coupling_minimum(base, pert, tol)?;
            checks.push(HypothesisCheck::new(
                "accretive coupling",
                coupling >= -tol.cmp_atol,
                format!("minimum of Re<f, g> over unit lifted pairs = {coupling:.6e}"),
            ));
        } else {
            checks.push(HypothesisCheck::new(
                "accretive coupling",
                false,
                "requires the domain inclusion",
            ));
        }
        let sum = base.op_sum(pert, tol)?;
        let base_idx = indices_at_i(base, tol);
        let sum_idx = indices_at_i(&sum, tol);
        Ok(finish(
            self,
            checks,
            base_idx,
            sum_idx,
            || base_idx == sum_idx,
            vec![
                "accretivity is evaluated as the smallest eigenvalue of the symmetrized coupling \
                 form on the lifted pair space {(x, f, g)}, which quantifies over all pairs \
                 including multivalued shifts"
                    .to_string(),
            ],
        ))
    }
}

struct Cor36;

impl InvarianceMode for Cor36 {
    fn name(&self) -> &'static str {
        "cor36"
    }

    fn statement(&self) -> &'static str {
        "two relations with equal domains and multivalued parts have equal indices when their difference carries a two-sided certificate with slope below one"
    }

    fn run(
        &self,
        base: &Relation,
        other: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<InvarianceVerdict> {
        ambient_guard(base, other)?;
        let mut checks = vec![
            hermitian_clause("base", base, tol),
            hermitian_clause("second relation", other, tol),
        ];
        let bp = base.parts(tol);
        let op = other.parts(tol);
        checks.push(HypothesisCheck::new(
            "equal domains",
            compare(&bp.domain, &op.domain, tol)?.is_equal,
            "the two relations share one domain",
        ));
        checks.push(HypothesisCheck::new(
            "equal multivalued parts",
            compare(&bp.mv, &op.mv, tol)?.is_equal,
            "the two relations share one multivalued part",
        ));
        // Difference S = V - T; its two-sided certificate is produced at
        // slope b = 0, where it reduces to a plain norm bound.
        let minus_base = base.scalar_mul(C64::new(-1.0, 0.0), tol);
        let diff = other.op_sum(&minus_base, tol)?;
        checks.push(certificate_clause(
            "two-sided certificate of the difference (b = 0)",
            base,
            &diff,
            0.0,
            tol,
        ));
        let base_idx = indices_at_i(base, tol);
        let other_idx = indices_at_i(other, tol);
        Ok(finish(self, checks, base_idx, other_idx, || base_idx == other_idx, vec![]))
    }
}

struct Cor38;

impl InvarianceMode for Cor38 {
    fn name(&self) -> &'static str {
        "cor38"
    }

    fn statement(&self) -> &'static str {
        "indices are preserved under a unit-slope certificate when the perturbation is also bounded relative to the sum"
    }

    fn run(
        &self,
        base: &Relation,
        pert: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<InvarianceVerdict> {
        ambient_guard(base, pert)?;
        let mut checks = vec![
            hermitian_clause("base", base, tol),
            hermitian_clause("perturbation", pert, tol),
        ];
        let (_incl, incl_checks) = inclusion_clauses(base, pert, tol)?;
        checks.extend(incl_checks);
        checks.push(certificate_clause(
            "unit-slope certificate",
            base,
            pert,
            1.0,
            tol,
        ));
        let sum = base.op_sum(pert, tol)?;
        checks.push(certificate_clause(
            "relative bound against the sum",
            &sum,
            pert,
            1.0,
            tol,
        ));
        let base_idx = indices_at_i(base, tol);
        let sum_idx = indices_at_i(&sum, tol);
        Ok(finish(self, checks, base_idx, sum_idx, || base_idx == sum_idx, vec![]))
    }
}

struct Thm32;

impl InvarianceMode for Thm32 {
    fn name(&self) -> &'static str {
        "thm32"
    }

    fn statement(&self) -> &'static str {
        "indices can only shrink under a unit-slope certificate with a densely defined Hermitian operator perturbation"
    }

    fn run(
        &self,
        base: &Relation,
        pert: &Relation,
        tol: &TolerancePolicy,
    ) -> Result<InvarianceVerdict> {
        ambient_guard(base, pert)?;
        let mut checks = vec![hermitian_clause("base", base, tol)];
        let pert_cls = pert.classify(tol);
        checks.push(HypothesisCheck::new(
            "perturbation is an operator",
            pert_cls.is_operator,
            "trivial multivalued part",
        ));
        checks.push(HypothesisCheck::new(
            "perturbation densely defined",
            pert_cls.is_densely_defined,
            "domain is the whole space",
        ));
        checks.push(HypothesisCheck::new(
            "perturbation hermitian",
            pert_cls.is_hermitian,
            "graph contained in its adjoint",
        ));
        let (incl, _) = inclusion_clauses(base, pert, tol)?;
        checks.push(HypothesisCheck::new(
            "domain inclusion",
            incl.dom_ok,
            "base domain contained in perturbation domain",
        ));
        checks.push(certificate_clause(
            "unit-slope certificate",
            base,
            pert,
            1.0,
            tol,
        ));
        let sum = base.op_sum(pert, tol)?;
        let base_idx = indices_at_i(base, tol);
        let sum_idx = indices_at_i(&sum, tol);
        Ok(finish(
            self,
            checks,
            base_idx,
            sum_idx,
            || sum_idx.0 <= base_idx.0 && sum_idx.1 <= base_idx.1,
            vec!["closedness of the base is automatic in finite dimension".to_string()],
        ))
    }
}

/// Minimum of `Re<f, g>` over unit vectors of the lifted pair space
/// `{(x, f, g) : (x, f) in base, (x, g) in pert}`: the smallest eigenvalue
/// of the symmetrized coupling form.
pub fn accretive_coupling_minimum(
    base: &Relation,
    pert: &Relation,
    tol: &TolerancePolicy,
) -> Result<f64> {
    let lifted = base.lifted_common_argument(pert, tol)?;
    let n = base.ambient_dim();
    if lifted.rank() == 0 {
        return Ok(0.0);
    }
    let f_block = lifted.basis().rows(n, n).into_owned();
    let g_block = lifted.basis().rows(2 * n, n).into_owned();
    let coupling = (g_block.adjoint() * &f_block + f_block.adjoint() * &g_block)
        * C64::new(0.5, 0.0);
    Ok(lambda_min(&coupling))
}
