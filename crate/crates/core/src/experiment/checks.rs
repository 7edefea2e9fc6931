//! Named pass/fail checks against the acceptance thresholds.

use super::config::ExperimentName;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Not applicable to the configured run; never counts as a failure.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub outcome: Outcome,
    /// Measured quantity compared against `threshold`.
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CheckResult {
    /// Passes when `value ≤ threshold`.
    pub fn at_most(id: &'static str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        let outcome = if value <= threshold { Outcome::Pass } else { Outcome::Fail };
        Self { id, outcome, value, threshold, detail: detail.into() }
    }

    /// Passes when `value ≥ threshold`.
    pub fn at_least(id: &'static str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        let outcome = if value >= threshold { Outcome::Pass } else { Outcome::Fail };
        Self { id, outcome, value, threshold, detail: detail.into() }
    }

    pub fn skipped(id: &'static str, detail: impl Into<String>) -> Self {
        Self { id, outcome: Outcome::Skipped, value: f64::NAN, threshold: f64::NAN, detail: detail.into() }
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckInfo {
    pub id: &'static str,
    pub experiment: ExperimentName,
    pub description: &'static str,
}

const fn info(id: &'static str, experiment: ExperimentName, description: &'static str) -> CheckInfo {
    CheckInfo { id, experiment, description }
}

use ExperimentName::*;

/// Every check the runner can emit.
pub const CHECKS: &[CheckInfo] = &[
    info("identities.eigen", VerifyIdentities, "Laguerre functions are eigenfunctions of -Δ+|z|²/4, residual ≤ eigen_tolerance"),
    info("identities.product_relation", VerifyIdentities, "φ_k×μ_r(z) = B(n,k) φ_k(r) φ_k(|z|) for k ≤ product_k_max"),
    info("identities.expansion", VerifyIdentities, "special Hermite expansion of e^{-a|z|²} through expansion_k_max"),
    info("identities.orthogonality", VerifyIdentities, "φ_k×φ_m = (2π)^n δ_km φ_k for k, m ≤ orthogonality_k_max"),
    info("identities.polar_bridge", VerifyIdentities, "polar bridge of mean profiles equals the spectral projections"),
    info("identities.zero_profile", VerifyIdentities, "vanishing mean profile at a center iff all projections vanish there"),
    info("identities.tensor_diagonal", VerifyIdentities, "diagonal tensor pieces sum to Q_k on C² for k ≤ tensor_k_max"),
    info("identities.degree_blocks", VerifyIdentities, "product-basis operator on C×Σ₂ is block diagonal in degree"),
    info("tsm.finite", TsmEval, "all twisted spherical means are finite"),
    info("tsm.product_relation", TsmEval, "Laguerre fields match the product relation"),
    info("project.reconstruction", Project, "(2π)^{-n} Σ Q_k reconstructs the field within tolerance"),
    info("expand.holdout", ExpandQk, "fitted Q_k expansions predict held-out samples within tolerance"),
    info("expand.sector", ExpandQk, "type functions ã z^p localize to the z^p sector"),
    info("expand.below_p", ExpandQk, "Q_k of ã z^p vanishes for k < p"),
    info("counterexample.euclidean_means", Counterexample, "odd counterexample has vanishing circular means on Σ_N"),
    info("counterexample.euclidean_near_null", Counterexample, "its coefficient vector is a near-null vector of the Euclidean operator"),
    info("counterexample.zero_set", Counterexample, "type function means vanish on P⁻¹(0)"),
    info("counterexample.generic_floor", Counterexample, "type function means stay away from zero off P⁻¹(0)"),
    info("probe.sigma_positive", Probe, "twisted operator has σ_min > 0 (evidence only)"),
    info("probe.certified", Probe, "every reported near-null vector reconstructs to a field with vanishing means"),
    info("probe.contrast", Probe, "twisted σ_min exceeds the Euclidean odd-sector σ_min by contrast_ratio"),
    info("probe.regression", Probe, "twisted σ_min on the reference Σ₂ configuration matches its frozen value"),
];

pub fn checks_for(experiment: ExperimentName) -> impl Iterator<Item = &'static CheckInfo> {
    CHECKS.iter().filter(move |c| c.experiment == experiment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_prefixed() {
        let mut ids: Vec<_> = CHECKS.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), CHECKS.len());
        for e in ExperimentName::ALL {
            assert!(checks_for(e).count() > 0, "{e}");
        }
    }
}
