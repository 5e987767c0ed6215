use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Settings shared by all subcommands. Command-line flags override the
/// config file, which overrides these defaults.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Step budget for `run` and `fuzz`.
    pub fuel: usize,
    /// Rule applications allowed to the Phase 1 search.
    pub search_depth: usize,
    /// DNF conjuncts explored per VC before reporting `unknown`.
    pub clause_budget: usize,
    /// Candidate predicates for `infer`, one per line.
    pub preds: Option<PathBuf>,
    /// Print every intermediate term in `run` and the rule trace in `elaborate`.
    pub trace: bool,
    /// Directory receiving one `.smt2` file per VC in `vcs`.
    pub smtlib: Option<PathBuf>,
    pub trials: usize,
    pub seed: u64,
    /// Size budget of generated programs.
    pub size: usize,
    pub sequential: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            fuel: 10_000,
            search_depth: 2_000_000,
            clause_budget: 4096,
            preds: None,
            trace: false,
            smtlib: None,
            trials: 500,
            seed: 0,
            size: 24,
            sequential: false,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_files_keep_defaults() {
        let c: Config = toml::from_str("fuel = 50\nseed = 7").unwrap();
        assert_eq!(c.fuel, 50);
        assert_eq!(c.seed, 7);
        assert_eq!(c.clause_budget, Config::default().clause_budget);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Config>("fule = 50").is_err());
    }
}
