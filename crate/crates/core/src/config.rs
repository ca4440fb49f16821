//! Budgets and run settings shared by the enumerators, the search engine and
//! the command line.

use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Resource limits. Exceeding any of them is reported as a distinct
/// outcome, never as a truncated result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Largest tree size accepted by [`crate::tree::enumerate_trees`].
    pub max_enum_vertices: usize,
    /// Largest target tree accepted by the Hom-set enumerators.
    pub max_tree_size: usize,
    /// Largest Hom-set (or skeleton list) an enumerator may return.
    pub max_hom: usize,
    /// Search nodes a coloring search may visit.
    pub max_colorings: u64,
    /// Wall-clock cap for a coloring search, in seconds.
    pub time_cap_secs: Option<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_enum_vertices: 8,
            max_tree_size: 32,
            max_hom: 2_000_000,
            max_colorings: 200_000_000,
            time_cap_secs: None,
        }
    }
}

impl Budget {
    pub fn time_cap(&self) -> Option<Duration> {
        self.time_cap_secs.map(Duration::from_secs)
    }

    pub fn is_positive(&self) -> bool {
        self.max_enum_vertices > 0
            && self.max_tree_size > 0
            && self.max_hom > 0
            && self.max_colorings > 0
            && self.time_cap_secs != Some(0)
    }
}

/// How the coloring search explores its tree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Single-threaded; returns the least bad coloring in search order.
    #[default]
    Canonical,
    /// Splits the top of the search across threads; any verified
    /// certificate is acceptable.
    Fast,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    #[serde(alias = "json")]
    Structured,
    Dot,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub budget: Budget,
    pub mode: SearchMode,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}
