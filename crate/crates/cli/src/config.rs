use finlab::scan::DEFAULT_COLORING_BUDGET;
use finlab::span::DEFAULT_SPAN_BUDGET;
use std::path::PathBuf;

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 7;

/// Default DFS node cap for `search`.
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 50_000_000;

pub const ENV_SPAN: &str = "FINLAB_BUDGET_SPAN";
pub const ENV_CANDIDATES: &str = "FINLAB_BUDGET_CANDIDATES";
pub const ENV_SCAN: &str = "FINLAB_BUDGET_SCAN";

/// Resolved run settings. Budgets come from defaults, then the
/// `FINLAB_BUDGET_*` variables, then flags; every cap is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub span_budget: u128,
    pub candidate_budget: u64,
    pub scan_budget: u64,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            span_budget: DEFAULT_SPAN_BUDGET,
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
            scan_budget: DEFAULT_COLORING_BUDGET,
            threads: None,
            output: None,
        }
    }
}

impl RunConfig {
    /// Applies environment overrides read through `var`.
    pub fn with_env(mut self, var: impl Fn(&str) -> Option<String>) -> Result<Self, String> {
        if let Some(v) = var(ENV_SPAN) {
            self.span_budget = positive(ENV_SPAN, &v)?;
        }
        if let Some(v) = var(ENV_CANDIDATES) {
            self.candidate_budget = positive(ENV_CANDIDATES, &v)?;
        }
        if let Some(v) = var(ENV_SCAN) {
            self.scan_budget = positive(ENV_SCAN, &v)?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.span_budget == 0 || self.candidate_budget == 0 || self.scan_budget == 0 {
            return Err("budgets must be positive".into());
        }
        if self.threads == Some(0) {
            return Err("--threads must be positive".into());
        }
        Ok(())
    }
}

fn positive<T: std::str::FromStr + PartialEq + From<u8>>(name: &str, raw: &str) -> Result<T, String> {
    match raw.trim().parse::<T>() {
        Ok(v) if v != T::from(0) => Ok(v),
        _ => Err(format!("{name} must be a positive integer, got `{raw}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides_defaults() {
        let c = RunConfig::default().with_env(|k| (k == ENV_CANDIDATES).then(|| "12".to_string())).unwrap();
        assert_eq!(c.candidate_budget, 12);
        assert_eq!(c.span_budget, DEFAULT_SPAN_BUDGET);
        assert!(RunConfig::default().with_env(|_| Some("0".into())).is_err());
        assert!(RunConfig::default().with_env(|_| Some("x".into())).is_err());
    }
}
