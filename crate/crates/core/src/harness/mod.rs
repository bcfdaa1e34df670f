//! Bound formulas, experiment specifications and the verification suites.

mod suite;

use std::path::PathBuf;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::strategy::{AliceSpec, BobSpec};

pub use suite::{
    generate_instance, instance_seed, run_suite, GameRow, Instance, SuiteReport, SuiteSummary,
    SuiteVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error("instance generation failed: {0}")]
    Generation(String),
}

/// ⌊(3ω − 1)/k⌋ + 1, valid for k ≥ 1 and ω > k.
pub fn bound_formula(k: usize, omega: usize) -> Result<usize, HarnessError> {
    if k == 0 || omega <= k {
        return Err(HarnessError::Params(format!(
            "need k >= 1 and omega > k, got k={k}, omega={omega}"
        )));
    }
    Ok((3 * omega - 1) / k + 1)
}

/// ⌊(3λ + 2)/k⌋ + 1 for partial λ-trees, valid for k ≥ 1 and λ + 1 > k.
pub fn partial_bound_formula(k: usize, lambda: usize) -> Result<usize, HarnessError> {
    if k == 0 || lambda < k {
        return Err(HarnessError::Params(format!(
            "need k >= 1 and lambda + 1 > k, got k={k}, lambda={lambda}"
        )));
    }
    Ok((3 * lambda + 2) / k + 1)
}

/// Whether (c, k, ω) satisfies ck − 3ω + 1 > 0 and ω > k.
pub fn general_hypothesis(c: usize, k: usize, omega: usize) -> bool {
    k >= 1 && omega > k && c * k + 1 > 3 * omega
}

/// The fewest colors any of the proven bounds guarantees Alice for a
/// chordal graph with clique number `omega` in the k-relaxed game.
pub fn guaranteed_colors(k: usize, omega: usize) -> Option<usize> {
    if k == 0 {
        return None;
    }
    let mut best = bound_formula(k, omega).ok();
    if omega <= k {
        // no monochromatic (k+1)-clique can ever form
        best = Some(1);
    }
    if omega == k + 1 {
        best = best.map_or(Some(k + 3), |b| Some(b.min(k + 3)));
    }
    if k == 2 && omega == 3 {
        best = best.map(|b| b.min(4));
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Chordal, ω = k+1, c = k+3.
    TheoremK3,
    /// Chordal, ω = 3, k = 2, c = 4.
    Theorem2clique4,
    /// Chordal with clique number ω and ck − 3ω + 1 > 0, ω > k.
    TheoremGeneral,
    /// Partial λ-trees; Alice plans on the chordal witness.
    CorollaryPartial,
    /// Chordal, ω = 3, k = 2, c = 3. Reported, never pass/fail.
    Conjecture3color,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::TheoremK3,
        Suite::Theorem2clique4,
        Suite::TheoremGeneral,
        Suite::CorollaryPartial,
        Suite::Conjecture3color,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::TheoremK3 => "theorem-k3",
            Suite::Theorem2clique4 => "theorem-2clique4",
            Suite::TheoremGeneral => "theorem-general",
            Suite::CorollaryPartial => "corollary-partial",
            Suite::Conjecture3color => "conjecture-3color",
        }
    }

    pub fn is_exempt(self) -> bool {
        self == Suite::Conjecture3color
    }
}

impl std::str::FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| HarnessError::Spec(format!("unknown suite {s:?}")))
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn default_instances() -> usize {
    100
}

fn default_n_min() -> usize {
    5
}

fn default_n_max() -> usize {
    30
}

fn default_bobs() -> Vec<BobSpec> {
    vec![BobSpec::Random, BobSpec::CliqueThreat]
}

fn default_sparsify() -> f64 {
    0.5
}

fn default_keep_min() -> f64 {
    0.5
}

/// Accepts `"random"` as well as `{type = "random"}`.
fn de_bobs<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BobSpec>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Name(String),
        Spec(BobSpec),
    }
    Vec::<Entry>::deserialize(d)?
        .into_iter()
        .map(|e| match e {
            Entry::Name(s) => s.parse().map_err(serde::de::Error::custom),
            Entry::Spec(b) => Ok(b),
        })
        .collect()
}

/// One verification experiment, as read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub suite: Suite,
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default = "default_n_min")]
    pub n_min: usize,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub omega: Option<usize>,
    #[serde(default)]
    pub lambda: Option<usize>,
    #[serde(default)]
    pub c: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_bobs", deserialize_with = "de_bobs")]
    pub bobs: Vec<BobSpec>,
    #[serde(default)]
    pub alice: AliceSpec,
    /// Upper end of the per-instance edge drop probability for chordal suites.
    #[serde(default = "default_sparsify")]
    pub sparsify: f64,
    /// Lower end of the per-instance edge keep probability for partial suites.
    #[serde(default = "default_keep_min")]
    pub keep_min: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// Fully determined parameters of a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteParams {
    pub k: usize,
    /// Clique number of the graph Alice plans on.
    pub omega: usize,
    pub c: usize,
    /// Play graphs are partial subgraphs of Alice's chordal graph.
    pub partial: bool,
}

impl ExperimentSpec {
    /// A spec with every optional field at its default.
    pub fn new(suite: Suite) -> Self {
        ExperimentSpec {
            suite,
            instances: default_instances(),
            n_min: default_n_min(),
            n_max: default_n_max(),
            k: None,
            omega: None,
            lambda: None,
            c: None,
            seed: 0,
            bobs: default_bobs(),
            alice: AliceSpec::default(),
            sparsify: default_sparsify(),
            keep_min: default_keep_min(),
            out: None,
        }
    }

    /// Parses and validates.
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let spec: ExperimentSpec =
            toml::from_str(text).map_err(|e| HarnessError::Spec(e.to_string()))?;
        spec.resolve()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes to TOML")
    }

    fn fixed(&self, name: &str, given: Option<usize>, value: usize) -> Result<usize, HarnessError> {
        match given {
            Some(x) if x != value => Err(HarnessError::Spec(format!(
                "suite {} fixes {name} = {value}, got {x}",
                self.suite
            ))),
            _ => Ok(value),
        }
    }

    fn required(&self, name: &str, given: Option<usize>) -> Result<usize, HarnessError> {
        given.ok_or_else(|| HarnessError::Spec(format!("suite {} requires {name}", self.suite)))
    }

    /// Checks the experiment against the hypotheses of its suite.
    pub fn resolve(&self) -> Result<SuiteParams, HarnessError> {
        let spec_err = |m: String| Err(HarnessError::Spec(m));
        let params = match self.suite {
            Suite::TheoremK3 => {
                let k = self.required("k", self.k)?;
                if k == 0 {
                    return spec_err("k must be at least 1".into());
                }
                let omega = self.fixed("omega", self.omega, k + 1)?;
                let c = self.fixed("c", self.c, k + 3)?;
                SuiteParams {
                    k,
                    omega,
                    c,
                    partial: false,
                }
            }
            Suite::Theorem2clique4 | Suite::Conjecture3color => {
                let k = self.fixed("k", self.k, 2)?;
                let omega = self.fixed("omega", self.omega, 3)?;
                let c = self.fixed("c", self.c, if self.suite.is_exempt() { 3 } else { 4 })?;
                SuiteParams {
                    k,
                    omega,
                    c,
                    partial: false,
                }
            }
            Suite::TheoremGeneral => {
                let k = self.required("k", self.k)?;
                let omega = self.required("omega", self.omega)?;
                let c = self.required("c", self.c)?;
                if !general_hypothesis(c, k, omega) {
                    return spec_err(format!(
                        "theorem-general needs ck - 3*omega + 1 > 0 and omega > k; got c={c}, k={k}, omega={omega}"
                    ));
                }
                SuiteParams {
                    k,
                    omega,
                    c,
                    partial: false,
                }
            }
            Suite::CorollaryPartial => {
                let k = self.required("k", self.k)?;
                let lambda = self.required("lambda", self.lambda)?;
                if k == 0 || lambda == 0 {
                    return spec_err("k and lambda must be at least 1".into());
                }
                if self.omega.is_some_and(|w| w != lambda + 1) {
                    return spec_err("omega is lambda + 1 for corollary-partial".into());
                }
                let c = match self.c {
                    Some(c) => c,
                    None => partial_bound_formula(k, lambda)
                        .map_err(|e| HarnessError::Spec(e.to_string()))?,
                };
                // the general bound through the witness, or the sharper
                // results for partial k-trees played with the same k
                let ok =
                    general_hypothesis(c, k, lambda + 1) || (lambda == k && (c == 4 || c == k + 3));
                if !ok {
                    return spec_err(format!(
                        "no proven guarantee for c={c} on partial {lambda}-trees with k={k}"
                    ));
                }
                SuiteParams {
                    k,
                    omega: lambda + 1,
                    c,
                    partial: true,
                }
            }
        };
        if params.c > crate::rules::MAX_COLORS {
            return spec_err(format!(
                "at most {} colors supported",
                crate::rules::MAX_COLORS
            ));
        }
        if self.n_min > self.n_max {
            return spec_err(format!("n_min {} exceeds n_max {}", self.n_min, self.n_max));
        }
        if self.n_min < params.omega {
            return spec_err(format!(
                "instances need at least omega = {} vertices, n_min is {}",
                params.omega, self.n_min
            ));
        }
        if self.bobs.is_empty() {
            return spec_err("at least one bob strategy is required".into());
        }
        if !(0.0..=1.0).contains(&self.sparsify) || !(0.0..=1.0).contains(&self.keep_min) {
            return spec_err("sparsify and keep_min must lie in [0, 1]".into());
        }
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(bound_formula(3, 4), Ok(4));
        assert_eq!(bound_formula(2, 3), Ok(5));
        assert_eq!(bound_formula(1, 2), Ok(6));
        assert!(bound_formula(3, 3).is_err());
        assert!(bound_formula(0, 3).is_err());
        assert_eq!(partial_bound_formula(3, 3), Ok(4));
        assert_eq!(partial_bound_formula(5, 5), Ok(4));
        assert_eq!(partial_bound_formula(2, 4), Ok(8));
        assert!(partial_bound_formula(3, 2).is_err());
    }

    #[test]
    fn guaranteed_colors_prefers_sharper_bounds() {
        assert_eq!(guaranteed_colors(1, 2), Some(4));
        assert_eq!(guaranteed_colors(2, 3), Some(4));
        assert_eq!(guaranteed_colors(3, 4), Some(4));
        assert_eq!(guaranteed_colors(2, 4), Some(6));
        assert_eq!(guaranteed_colors(3, 2), Some(1));
    }

    #[test]
    fn general_suite_rejects_violated_hypotheses() {
        let text = "suite = \"theorem-general\"\nk = 2\nomega = 3\nc = 4\n";
        assert!(matches!(
            ExperimentSpec::from_toml(text),
            Err(HarnessError::Spec(_))
        ));
        let text = "suite = \"theorem-general\"\nk = 3\nomega = 3\nc = 9\n";
        assert!(ExperimentSpec::from_toml(text).is_err());
        let text = "suite = \"theorem-general\"\nk = 2\nomega = 3\nc = 5\n";
        let spec = ExperimentSpec::from_toml(text).unwrap();
        assert_eq!(
            spec.resolve().unwrap(),
            SuiteParams {
                k: 2,
                omega: 3,
                c: 5,
                partial: false
            }
        );
    }

    #[test]
    fn spec_parsing_defaults_and_errors() {
        let spec = ExperimentSpec::from_toml("suite = \"theorem-k3\"\nk = 1\nbobs = [\"random\", { type = \"minimax\", budget = 10 }]\n").unwrap();
        assert_eq!(spec.resolve().unwrap().c, 4);
        assert_eq!(
            spec.bobs,
            vec![BobSpec::Random, BobSpec::Minimax { budget: 10 }]
        );
        assert_eq!((spec.n_min, spec.n_max), (5, 30));
        assert!(ExperimentSpec::from_toml("suite = \"theorem-k3\"\nk = 1\nc = 5\n").is_err());
        assert!(ExperimentSpec::from_toml("suite = \"theorem-k3\"\n").is_err());
        assert!(ExperimentSpec::from_toml("suite = \"nope\"\n").is_err());
        assert!(ExperimentSpec::from_toml("suite = \"theorem-k3\"\nk = 1\ncolour = 3\n").is_err());
        assert!(ExperimentSpec::from_toml("suite = \"theorem-k3\"\nk = 3\nn_min = 3\n").is_err());
        let round = ExperimentSpec::from_toml(&spec.to_toml()).unwrap();
        assert_eq!(round, spec);
    }

    #[test]
    fn corollary_spec_colors() {
        let spec = ExperimentSpec::from_toml("suite = \"corollary-partial\"\nk = 2\nlambda = 3\n")
            .unwrap();
        assert_eq!(spec.resolve().unwrap().c, 6);
        let spec =
            ExperimentSpec::from_toml("suite = \"corollary-partial\"\nk = 2\nlambda = 2\nc = 4\n")
                .unwrap();
        assert!(spec.resolve().unwrap().partial);
        assert!(ExperimentSpec::from_toml(
            "suite = \"corollary-partial\"\nk = 2\nlambda = 3\nc = 4\n"
        )
        .is_err());
    }
}
