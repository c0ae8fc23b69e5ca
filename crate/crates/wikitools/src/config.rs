//! Endpoints and the optional `key = value` configuration file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use wikitools_core::title::LanguageCode;
use wikitools_core::{Result, ToolkitError};

use crate::transport::{FixtureMode, TransportConfig};

pub const DEFAULT_WIKIPEDIA_ENDPOINT: &str = "https://{language}.wikipedia.org/w/api.php";
pub const DEFAULT_WIKIDATA_ENDPOINT: &str = "https://www.wikidata.org/w/api.php";
pub const DEFAULT_PAGEVIEWS_ENDPOINT: &str = "https://wikimedia.org/api/rest_v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endpoints {
    /// Action API template; `{language}` is replaced by the wiki's code.
    pub wikipedia: String,
    pub wikidata: String,
    pub pageviews: String,
}

impl Default for Endpoints {
    fn default() -> Self {
        Self {
            wikipedia: DEFAULT_WIKIPEDIA_ENDPOINT.to_string(),
            wikidata: DEFAULT_WIKIDATA_ENDPOINT.to_string(),
            pageviews: DEFAULT_PAGEVIEWS_ENDPOINT.to_string(),
        }
    }
}

impl Endpoints {
    pub fn wikipedia_for(&self, language: &LanguageCode) -> String {
        self.wikipedia.replace("{language}", language.as_str())
    }
}

/// Settings shared by the library entry points and the CLI.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub endpoints: Endpoints,
    pub transport: TransportConfig,
    /// Extra category namespace prefixes.
    pub category_prefixes: Vec<String>,
    /// Ceiling on continuation rounds per query.
    pub max_pages: Option<usize>,
}

/// Environment variables read by [`Settings::apply_env`].
pub const ENV_MODE: &str = "WIKITOOLS_MODE";
pub const ENV_FIXTURES: &str = "WIKITOOLS_FIXTURES";
pub const ENV_USER_AGENT: &str = "WIKITOOLS_USER_AGENT";

impl Settings {
    pub fn apply_env(&mut self) -> Result<()> {
        self.apply(&env_values())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ToolkitError::bad_input(format!("cannot read config {}: {e}", path.display()))
        })?;
        self.apply(&parse_config(&text)?)
    }

    /// Applies recognized keys; unknown keys are rejected.
    pub fn apply(&mut self, values: &BTreeMap<String, String>) -> Result<()> {
        for (key, value) in values {
            match key.as_str() {
                "mode" => self.transport.mode = value.parse()?,
                "fixtures" => self.transport.fixtures = Some(PathBuf::from(value)),
                "user-agent" => self.transport.user_agent = value.clone(),
                "endpoint-wikipedia" => self.endpoints.wikipedia = value.clone(),
                "endpoint-wikidata" => self.endpoints.wikidata = value.clone(),
                "endpoint-pageviews" => self.endpoints.pageviews = value.clone(),
                "rate-limit" => self.transport.rate_limit.max_requests_per_second = parse_number(key, value)?,
                "max-concurrent" => {
                    self.transport.rate_limit.max_concurrent_per_host = parse_number(key, value)?
                }
                "max-pages" => self.max_pages = Some(parse_number(key, value)?),
                "category-prefixes" => {
                    self.category_prefixes = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect()
                }
                other => {
                    return Err(ToolkitError::bad_input(format!("unknown config key {other:?}")))
                }
            }
        }
        Ok(())
    }
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| ToolkitError::bad_input(format!("{key}: {value:?} is not a number")))
}

/// Recognized environment variables as config keys.
pub fn env_values() -> BTreeMap<String, String> {
    let mut values = BTreeMap::new();
    for (var, key) in [(ENV_MODE, "mode"), (ENV_FIXTURES, "fixtures"), (ENV_USER_AGENT, "user-agent")] {
        if let Ok(v) = std::env::var(var) {
            if !v.trim().is_empty() {
                values.insert(key.to_string(), v);
            }
        }
    }
    values
}

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ToolkitError::bad_input(format!(
                "config line {}: expected key = value",
                n + 1
            )));
        };
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

/// Fixture mode implied by the presence of an archive when none is given.
pub fn default_mode(fixtures: Option<&Path>) -> FixtureMode {
    if fixtures.is_some() {
        FixtureMode::Replay
    } else {
        FixtureMode::Passthrough
    }
}
