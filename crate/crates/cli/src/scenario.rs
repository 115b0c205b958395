//! Scenario files: JSON descriptions of the experiment kinds the engine can
//! run. Unknown keys are rejected; every field beyond `kind` and `seed` has
//! a documented default.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use smoothlab_core::geometry::BoxDomain;
use smoothlab_core::noise::NoiseFamily;

/// How cells pick their evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellMode {
    /// Closed form where the separation regime permits, Monte Carlo otherwise.
    Auto,
    /// Closed form everywhere; cells without one are recorded as failures.
    Exact,
    /// Monte-Carlo contract everywhere (closed-form subexpressions still used).
    Mc,
}

impl CellMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(CellMode::Auto),
            "exact" => Ok(CellMode::Exact),
            "mc" => Ok(CellMode::Mc),
            other => bail!("unknown mode {other:?}; expected auto, exact, or mc"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Scenario {
    SphereSweep(SphereSweepScenario),
    OneDimConstruction(OneDimScenario),
    BoundValidation(BoundValidationScenario),
    InexactLearning(InexactLearningScenario),
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        #[derive(Deserialize)]
        struct Probe {
            kind: String,
        }
        let probe: Probe =
            serde_json::from_str(text).context("scenario file must carry a \"kind\" field")?;
        let sc = match probe.kind.as_str() {
            "SphereSweep" => Scenario::SphereSweep(serde_json::from_str(text)?),
            "OneDimConstruction" => Scenario::OneDimConstruction(serde_json::from_str(text)?),
            "BoundValidation" => Scenario::BoundValidation(serde_json::from_str(text)?),
            "InexactLearning" => Scenario::InexactLearning(serde_json::from_str(text)?),
            other => bail!("unknown scenario kind {other:?}"),
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Scenario::SphereSweep(s) => s.validate(),
            Scenario::OneDimConstruction(s) => s.validate(),
            Scenario::BoundValidation(s) => s.validate(),
            Scenario::InexactLearning(s) => s.validate(),
        }
    }

    /// Output directory configured inside the scenario file, if any.
    pub fn configured_out(&self) -> Option<&str> {
        match self {
            Scenario::SphereSweep(s) => s.out.as_deref(),
            Scenario::OneDimConstruction(s) => s.out.as_deref(),
            Scenario::BoundValidation(s) => s.out.as_deref(),
            Scenario::InexactLearning(s) => s.out.as_deref(),
        }
    }

    pub fn apply_overrides(
        &mut self,
        seed: Option<u64>,
        mode: Option<CellMode>,
        mc_samples: Option<usize>,
    ) {
        match self {
            Scenario::SphereSweep(s) => {
                if let Some(v) = seed {
                    s.seed = v;
                }
                if let Some(v) = mode {
                    s.mode = v;
                }
                if let Some(v) = mc_samples {
                    s.mc_risk_samples = v;
                }
            }
            Scenario::OneDimConstruction(_) => {}
            Scenario::BoundValidation(s) => {
                if let Some(v) = seed {
                    s.seed = v;
                }
                if let Some(v) = mode {
                    s.mode = v;
                }
                if let Some(v) = mc_samples {
                    s.mc_risk_samples = v;
                }
            }
            Scenario::InexactLearning(s) => {
                if let Some(v) = seed {
                    s.seed = v;
                }
                if let Some(v) = mc_samples {
                    s.mc_risk_samples = v;
                }
            }
        }
    }
}

fn is_not_positive(v: f64) -> bool {
    v.is_nan() || v <= 0.0
}

fn default_domain() -> DomainSpec {
    DomainSpec {
        lo: vec![0.0, 0.0],
        hi: vec![100.0, 100.0],
    }
}

fn default_family() -> NoiseFamily {
    NoiseFamily::UniformBall
}

fn default_radius() -> f64 {
    10.0
}

fn default_tau() -> f64 {
    0.25
}

fn default_zetas() -> Vec<f64> {
    vec![0.0, 10.0, 20.0, 30.0]
}

fn default_alphas() -> Vec<f64> {
    (0..=10).map(|k| k as f64 * 0.5).collect()
}

fn default_betas() -> Vec<f64> {
    // Reaches past r * sqrt(2) (the scale where smoothing can defeat a
    // radius-10 partition outright), where augmentation starts to pay off
    // at zero interference distance.
    (0..=5).map(|k| 4.0 * k as f64).collect()
}

fn default_configs_per_zeta() -> usize {
    2
}

fn default_attempts() -> usize {
    500
}

fn default_mc_risk_samples() -> usize {
    20_000
}

fn default_mc_vote_samples() -> usize {
    400
}

fn default_mode() -> CellMode {
    CellMode::Auto
}

fn default_tau_grid() -> Vec<f64> {
    vec![0.0, 0.05, 0.1, 0.25, 0.45]
}

/// Axis-aligned domain bounds as plain JSON arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainSpec {
    pub fn to_box(&self) -> Result<BoxDomain> {
        Ok(BoxDomain::new(self.lo.clone(), self.hi.clone())?)
    }
}

/// Sweep of the excess-risk difference over an (interference, alpha, beta)
/// grid with sphere-union data distributions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSweepScenario {
    pub kind: String,
    #[serde(default = "default_domain")]
    pub domain: DomainSpec,
    #[serde(default = "default_family")]
    pub family: NoiseFamily,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_zetas")]
    pub zetas: Vec<f64>,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_betas")]
    pub betas: Vec<f64>,
    #[serde(default = "default_configs_per_zeta")]
    pub configs_per_zeta: usize,
    #[serde(default = "default_attempts")]
    pub attempts: usize,
    #[serde(default = "default_mc_risk_samples")]
    pub mc_risk_samples: usize,
    #[serde(default = "default_mc_vote_samples")]
    pub mc_vote_samples: usize,
    #[serde(default = "default_mode")]
    pub mode: CellMode,
    pub seed: u64,
    /// Output directory; the CLI's --out flag takes precedence.
    #[serde(default)]
    pub out: Option<String>,
}

impl SphereSweepScenario {
    pub fn validate(&self) -> Result<()> {
        let domain = self.domain.to_box()?;
        if domain.dim() < 1 {
            bail!("domain must be at least one-dimensional");
        }
        if self.zetas.is_empty() || self.alphas.is_empty() || self.betas.is_empty() {
            bail!("zeta, alpha, and beta grids must be nonempty");
        }
        if self.alphas.iter().chain(&self.betas).any(|v| *v < 0.0) {
            bail!("alpha and beta grids must be nonnegative");
        }
        if self.configs_per_zeta == 0 {
            bail!("configs_per_zeta must be >= 1");
        }
        if self.mc_risk_samples == 0 || self.mc_vote_samples == 0 {
            bail!("Monte-Carlo budgets must be >= 1");
        }
        if !(0.0..=0.5).contains(&self.tau) {
            bail!("tau must lie in [0, 0.5]");
        }
        Ok(())
    }
}

/// Verification of the 1D two-interval construction and its widened-gap
/// variant. `alpha` and `beta` are full support widths of the uniform noise
/// (the engine converts to ball radii as width / 2).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneDimScenario {
    pub kind: String,
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Gap of the widened variant; defaults to alpha / 2 + 0.01, the smallest
    /// grid step past the flip threshold.
    #[serde(default)]
    pub widened_gap: Option<f64>,
    /// Output directory; the CLI's --out flag takes precedence.
    #[serde(default)]
    pub out: Option<String>,
}

impl OneDimScenario {
    pub fn validate(&self) -> Result<()> {
        if is_not_positive(self.omega) || self.omega > 0.25 {
            bail!("omega must lie in (0, 0.25]");
        }
        if is_not_positive(self.alpha) || is_not_positive(self.beta) {
            bail!("alpha and beta must be positive");
        }
        Ok(())
    }
}

/// Random scenarios comparing Monte-Carlo excess risks against the universal
/// upper bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundValidationScenario {
    pub kind: String,
    #[serde(default = "default_domain")]
    pub domain: DomainSpec,
    #[serde(default = "default_family")]
    pub family: NoiseFamily,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_zetas")]
    pub zetas: Vec<f64>,
    #[serde(default = "default_scenarios")]
    pub num_scenarios: usize,
    /// alpha and beta are drawn uniformly from [0, max].
    #[serde(default = "default_scale_max")]
    pub alpha_max: f64,
    #[serde(default = "default_scale_max")]
    pub beta_max: f64,
    #[serde(default = "default_tau_grid")]
    pub tau_grid: Vec<f64>,
    #[serde(default = "default_attempts")]
    pub attempts: usize,
    #[serde(default = "default_mc_risk_samples")]
    pub mc_risk_samples: usize,
    #[serde(default = "default_mc_vote_samples")]
    pub mc_vote_samples: usize,
    #[serde(default = "default_mode")]
    pub mode: CellMode,
    pub seed: u64,
    /// Output directory; the CLI's --out flag takes precedence.
    #[serde(default)]
    pub out: Option<String>,
}

fn default_scenarios() -> usize {
    50
}

fn default_scale_max() -> f64 {
    4.0
}

impl BoundValidationScenario {
    pub fn validate(&self) -> Result<()> {
        self.domain.to_box()?;
        if self.num_scenarios == 0 {
            bail!("num_scenarios must be >= 1");
        }
        if self.zetas.is_empty() || self.tau_grid.is_empty() {
            bail!("zeta list and tau grid must be nonempty");
        }
        if is_not_positive(self.alpha_max) || is_not_positive(self.beta_max) {
            bail!("alpha_max and beta_max must be positive");
        }
        Ok(())
    }
}

/// Random eta-perturbed classifiers checked against the two-sided inexact
/// bounds and the disagreement-mass bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InexactLearningScenario {
    pub kind: String,
    #[serde(default = "default_domain")]
    pub domain: DomainSpec,
    #[serde(default = "default_family")]
    pub family: NoiseFamily,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_etas")]
    pub etas: Vec<f64>,
    #[serde(default = "default_classifiers")]
    pub num_classifiers: usize,
    /// Noise scales; the sampled interference distance is forced above
    /// 2 * max(alpha, beta), where the two-sided bounds apply.
    #[serde(default = "default_inexact_scale")]
    pub alpha: f64,
    #[serde(default = "default_inexact_scale")]
    pub beta: f64,
    #[serde(default = "default_bumps")]
    pub bumps: usize,
    #[serde(default = "default_attempts")]
    pub attempts: usize,
    #[serde(default = "default_mc_risk_samples")]
    pub mc_risk_samples: usize,
    #[serde(default = "default_mc_vote_samples")]
    pub mc_vote_samples: usize,
    pub seed: u64,
    /// Output directory; the CLI's --out flag takes precedence.
    #[serde(default)]
    pub out: Option<String>,
}

fn default_etas() -> Vec<f64> {
    vec![0.02, 0.05, 0.1]
}

fn default_classifiers() -> usize {
    50
}

fn default_inexact_scale() -> f64 {
    2.0
}

fn default_bumps() -> usize {
    6
}

impl InexactLearningScenario {
    pub fn validate(&self) -> Result<()> {
        self.domain.to_box()?;
        if self.num_classifiers == 0 || self.bumps == 0 {
            bail!("num_classifiers and bumps must be >= 1");
        }
        if self.etas.is_empty() || self.etas.iter().any(|e| !(0.0..0.5).contains(e)) {
            bail!("etas must be nonempty values in [0, 0.5)");
        }
        if is_not_positive(self.alpha) || is_not_positive(self.beta) {
            bail!("alpha and beta must be positive");
        }
        if !(0.0..=0.5).contains(&self.tau) {
            bail!("tau must lie in [0, 0.5]");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_sweep_with_defaults() {
        let sc = Scenario::from_json(r#"{"kind": "SphereSweep", "seed": 7}"#).unwrap();
        match sc {
            Scenario::SphereSweep(s) => {
                assert_eq!(s.zetas, vec![0.0, 10.0, 20.0, 30.0]);
                assert_eq!(s.alphas.len(), 11);
                assert_eq!(s.betas.len(), 6);
                assert_eq!(s.mc_risk_samples, 20_000);
                assert_eq!(s.mode, CellMode::Auto);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = Scenario::from_json(r#"{"kind": "SphereSweep", "seed": 1, "bogus": 2}"#);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_unknown_kind_and_bad_grids() {
        assert!(Scenario::from_json(r#"{"kind": "Nope", "seed": 1}"#).is_err());
        assert!(
            Scenario::from_json(r#"{"kind": "SphereSweep", "seed": 1, "alphas": []}"#).is_err()
        );
    }

    #[test]
    fn one_dim_defaults_and_validation() {
        let sc = Scenario::from_json(
            r#"{"kind": "OneDimConstruction", "omega": 0.23, "alpha": 0.1, "beta": 0.93}"#,
        )
        .unwrap();
        match sc {
            Scenario::OneDimConstruction(s) => assert_eq!(s.widened_gap, None),
            _ => panic!("wrong kind"),
        }
        assert!(Scenario::from_json(
            r#"{"kind": "OneDimConstruction", "omega": 0.3, "alpha": 0.1, "beta": 0.93}"#,
        )
        .is_err());
    }
}
