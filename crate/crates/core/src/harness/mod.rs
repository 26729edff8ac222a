//! Bounded verification suites, Φ-variant adjudication and decomposition
//! reports: everything the command-line front end prints.

pub mod presets;
mod report;
mod suites;

use serde::Serialize;

use crate::algebra::{direct_product, is_homomorphism, AlgebraJson, Element, FiniteAlgebra, Presentation};
use crate::congruence::{factor_pairs, central_pairs_from, is_directly_indecomposable, quotient, Partition};
use crate::formula::{GeneralPhi, PhiVariant};
use crate::search::Budget;
use crate::witness::WitnessSet;

pub use presets::{preset, preset_names, Preset, PRESETS};
pub use report::{
    Bounds, Check, Counterexample, ModelResult, Verdict, VerificationReport, MAX_COUNTEREXAMPLES, SCHEMA_VERSION,
};
pub use suites::{
    supports_r_variant, variant_label, HarnessError, Suite, Verifier, DEFAULT_SEED, GENERAL_PRODUCT_BOUND,
    R_PRODUCT_BOUND, SCHEMA_LENGTHS,
};

#[derive(Clone, Debug, Serialize)]
pub struct VariantResult {
    pub variant: String,
    pub phi: VerificationReport,
    pub zeta: VerificationReport,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjudicationReport {
    pub schema_version: u32,
    pub presentation: String,
    pub size_bound: usize,
    pub variants: Vec<VariantResult>,
    /// First general combination passing both lemmas.
    pub selected: Option<String>,
    pub budget_exceeded: bool,
}

impl AdjudicationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// 0 when a general combination was selected, 2 on budget, else 1.
    pub fn exit_code(&self) -> i32 {
        if self.selected.is_some() {
            0
        } else if self.budget_exceeded {
            2
        } else {
            1
        }
    }
}

/// Runs the Φ- and ζ-lemma suites for every general Φ combination (and the
/// R-variant when the R identities hold) and selects the first general
/// combination that passes both.
pub fn adjudicate_phi_variants(
    p: &Presentation,
    w: &WitnessSet,
    size_bound: usize,
    budget: Budget,
) -> Result<AdjudicationReport, HarnessError> {
    let mut variants: Vec<PhiVariant> = GeneralPhi::all().into_iter().map(PhiVariant::General).collect();
    if supports_r_variant(p) {
        variants.push(PhiVariant::R);
    }
    let mut out = AdjudicationReport {
        schema_version: SCHEMA_VERSION,
        presentation: p.display_name().into(),
        size_bound,
        variants: Vec::new(),
        selected: None,
        budget_exceeded: false,
    };
    for v in variants {
        let verifier = Verifier::new(p).with_witness(w.clone()).with_variant(v).with_budget(budget);
        let phi = verifier.run(Suite::Phi, size_bound)?;
        let zeta = verifier.run(Suite::Zeta, size_bound)?;
        let passed = phi.passed() && zeta.passed();
        out.budget_exceeded |= phi.budget_exceeded || zeta.budget_exceeded;
        if passed && out.selected.is_none() && matches!(v, PhiVariant::General(_)) {
            out.selected = Some(variant_label(v));
        }
        out.variants.push(VariantResult {
            variant: variant_label(v),
            phi,
            zeta,
            passed,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorDecomposition {
    pub theta: Partition,
    pub theta_prime: Partition,
    pub left: AlgebraJson,
    pub right: AlgebraJson,
    /// `x ↦ (x/θ, x/θ′)`, encoded as `(x/θ)·|A/θ′| + x/θ′`.
    pub isomorphism: Vec<Element>,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralPairJson {
    pub e: Vec<Element>,
    pub f: Vec<Element>,
    pub theta: Partition,
    pub theta_prime: Partition,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub schema_version: u32,
    pub size: usize,
    pub directly_indecomposable: bool,
    pub factor_pairs: Vec<(Partition, Partition)>,
    /// Present when the presentation declares `0⃗`, `1⃗`.
    pub central_pairs: Option<Vec<CentralPairJson>>,
    pub decompositions: Vec<FactorDecomposition>,
}

impl DecompositionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Factor pairs, central pairs and verified binary decompositions of a
/// model of `p`.
pub fn decompose(p: &Presentation, a: &FiniteAlgebra) -> Result<DecompositionReport, HarnessError> {
    for id in &p.identities {
        if let Some(assignment) = a.find_violation(id)? {
            return Err(HarnessError::NotAModel {
                identity: id.display(&p.signature).to_string(),
                assignment,
            });
        }
    }
    let pairs = factor_pairs(a)?;
    let central = p
        .witness
        .as_ref()
        .and_then(|w| w.semidegeneracy.as_ref())
        .map(|sd| {
            let vals = |ts: &[crate::algebra::Term]| -> Vec<Element> {
                ts.iter().map(|t| a.eval_term(t, &[]).expect("closed term")).collect()
            };
            central_pairs_from(&pairs, &vals(sd.zero()), &vals(sd.one()))
                .into_iter()
                .map(|c| CentralPairJson {
                    e: c.e,
                    f: c.f,
                    theta: c.pair.theta,
                    theta_prime: c.pair.theta_prime,
                })
                .collect()
        });
    let mut decompositions = Vec::new();
    for fp in pairs.iter().filter(|fp| !fp.is_trivial()) {
        let left = quotient(a, &fp.theta)?;
        let right = quotient(a, &fp.theta_prime)?;
        let prod = direct_product(&left, &right, a.size())?;
        let isomorphism: Vec<Element> = fp
            .decomposition_map()
            .into_iter()
            .map(|(l, r)| prod.encode(l, r))
            .collect();
        let mut seen = vec![false; prod.algebra.size()];
        let bijective = prod.algebra.size() == a.size() && isomorphism.iter().all(|&x| !std::mem::replace(&mut seen[x], true));
        decompositions.push(FactorDecomposition {
            theta: fp.theta.clone(),
            theta_prime: fp.theta_prime.clone(),
            left: left.to_json_value(&p.signature),
            right: right.to_json_value(&p.signature),
            verified: bijective && is_homomorphism(a, &prod.algebra, &isomorphism),
            isomorphism,
        });
    }
    Ok(DecompositionReport {
        schema_version: SCHEMA_VERSION,
        size: a.size(),
        directly_indecomposable: is_directly_indecomposable(a)?,
        factor_pairs: pairs.into_iter().map(|fp| (fp.theta, fp.theta_prime)).collect(),
        central_pairs: central,
        decompositions,
    })
}

#[cfg(test)]
mod tests;
