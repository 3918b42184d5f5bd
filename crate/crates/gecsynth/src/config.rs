//! TOML configuration. Every section is optional; omitted values fall back
//! to the built-in defaults.
//!
//! ```toml
//! [shares]            # full replacement of the target shares
//! SPELL = 0.5
//! PUNCT = 0.5
//!
//! [method]            # generation method per error code
//! "ADJ:FORM" = "TwoShotLLM"
//!
//! [noise]
//! word_mu = { substitute = 0.1875, delete = 0.05, insert = 0.0625, keep = 0.7 }
//!
//! [confusion]
//! p = 0.3
//! [confusion.lists]
//! PREP = ["în", "la", "pe"]
//! [confusion.punctuation]
//! symbols = [".", ","]
//! rows = [[0.9, 0.1], [0.2, 0.8]]
//!
//! [llm]
//! model_id = "gpt-4o"
//! endpoint = "https://llm.example/v1/complete"
//! fixture = "fixtures.jsonl"
//!
//! [ces]
//! "VERB:SVA" = "ces/verb-sva.jsonl"
//!
//! [prompt]
//! "ADJ:FORM" = "change the degree of an adjective erroneously"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use gecsynth_core::confusion::{ConfusionConfig, ConfusionLists, PunctMatrix, DEFAULT_SUBSTITUTION_P};
use gecsynth_core::llm::{LlmSettings, PromptBook};
use gecsynth_core::noise::{NoiseConfig, OpDistribution};
use gecsynth_core::taxonomy::Shares;
use gecsynth_core::{ErrorType, Method};
use serde::Deserialize;

pub const DEFAULT_TOKEN_ENV: &str = "GECSYNTH_API_TOKEN";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    shares: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    method: BTreeMap<String, Method>,
    #[serde(default)]
    noise: RawNoise,
    #[serde(default)]
    confusion: RawConfusion,
    #[serde(default)]
    llm: RawLlm,
    #[serde(default)]
    ces: BTreeMap<String, PathBuf>,
    #[serde(default)]
    prompt: BTreeMap<String, String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    word_mu: Option<OpDistribution>,
    char_mu: Option<OpDistribution>,
    misspellings: Option<Vec<(String, String)>>,
}

/// Schema of the `[confusion]` section and of standalone confusion files.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfusion {
    p: Option<f64>,
    #[serde(default)]
    lists: BTreeMap<String, Vec<String>>,
    punctuation: Option<PunctMatrix>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLlm {
    model_id: Option<String>,
    temperature: Option<f64>,
    max_attempts: Option<u32>,
    endpoint: Option<String>,
    token_env: Option<String>,
    fixture: Option<PathBuf>,
    max_in_flight: Option<usize>,
}

/// Where model replies come from.
#[derive(Debug, Clone, PartialEq)]
pub struct LlmConfig {
    pub settings: LlmSettings,
    pub endpoint: Option<String>,
    pub token_env: String,
    pub fixture: Option<PathBuf>,
    pub max_in_flight: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub shares: Shares,
    pub methods: BTreeMap<ErrorType, Method>,
    pub noise: NoiseConfig,
    pub confusion: ConfusionConfig,
    pub llm: LlmConfig,
    pub ces: BTreeMap<ErrorType, PathBuf>,
    pub prompts: PromptBook,
}

impl Default for Config {
    fn default() -> Self {
        Config::from_raw(RawConfig::default(), Path::new(".")).expect("defaults are valid")
    }
}

fn code(key: &str) -> Result<ErrorType> {
    ErrorType::from_code(key).map_err(|e| anyhow!("{e}"))
}

fn resolve(base: &Path, path: PathBuf) -> PathBuf {
    if path.is_absolute() {
        path
    } else {
        base.join(path)
    }
}

fn confusion_from_raw(raw: RawConfusion) -> Result<ConfusionConfig> {
    let mut lists = BTreeMap::new();
    for (key, words) in raw.lists {
        lists.insert(code(&key)?, words);
    }
    let lists = ConfusionLists::new(lists)?.with_defaults();
    let matrix = match raw.punctuation {
        Some(matrix) => {
            matrix.validate()?;
            matrix
        }
        None => PunctMatrix::default(),
    };
    let p = raw.p.unwrap_or(DEFAULT_SUBSTITUTION_P);
    if !(0.0..=1.0).contains(&p) {
        bail!("confusion substitution probability {p} is outside [0, 1]");
    }
    Ok(ConfusionConfig { lists, matrix, p })
}

/// Reads confusion lists and the punctuation matrix from a TOML file.
/// Lists the file omits keep their built-in contents.
pub fn load_confusion_config(path: &Path) -> Result<(ConfusionLists, PunctMatrix)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw: RawConfusion = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let config = confusion_from_raw(raw).with_context(|| format!("loading {}", path.display()))?;
    Ok((config.lists, config.matrix))
}

/// Applies `key.path=value` overrides. Values parse as TOML when they can
/// and are taken as strings otherwise.
fn apply_overrides(table: &mut toml::Table, overrides: &[String]) -> Result<()> {
    for item in overrides {
        let (key, value) = item.split_once('=').ok_or_else(|| anyhow!("override {item:?} is not key=value"))?;
        let value = value.trim();
        let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_string()));
        let parts: Vec<&str> = key.trim().split('.').collect();
        let (last, parents) = parts.split_last().expect("split yields one part");
        let mut node = &mut *table;
        for part in parents {
            node = node
                .entry(part.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                .as_table_mut()
                .ok_or_else(|| anyhow!("override {key:?}: {part} is not a table"))?;
        }
        node.insert(last.to_string(), parsed);
    }
    Ok(())
}

impl Config {
    /// Loads `path` (or the defaults) and applies `--set` overrides.
    /// Relative paths inside the file are resolved against its directory.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Config> {
        let (mut table, base) = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let table: toml::Table =
                    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                (table, path.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (toml::Table::new(), PathBuf::from(".")),
        };
        apply_overrides(&mut table, overrides)?;
        let raw: RawConfig = toml::Value::Table(table).try_into().context("invalid configuration")?;
        Config::from_raw(raw, &base)
    }

    fn from_raw(raw: RawConfig, base: &Path) -> Result<Config> {
        let shares = match raw.shares {
            Some(map) => {
                let mut shares = BTreeMap::new();
                for (key, share) in map {
                    shares.insert(code(&key)?, share);
                }
                Shares::new(shares)?
            }
            None => Shares::default(),
        };

        let mut methods: BTreeMap<ErrorType, Method> =
            ErrorType::ALL.iter().map(|e| (*e, e.default_method())).collect();
        for (key, method) in raw.method {
            methods.insert(code(&key)?, method);
        }

        let mut noise = NoiseConfig::default();
        if let Some(mu) = raw.noise.word_mu {
            mu.validate()?;
            noise.word_mu = mu;
        }
        if let Some(mu) = raw.noise.char_mu {
            mu.validate()?;
            noise.char_mu = mu;
        }
        if let Some(rules) = raw.noise.misspellings {
            noise.maps.common_misspellings = rules;
            noise.maps.validate()?;
        }

        let confusion = confusion_from_raw(raw.confusion)?;

        let defaults = LlmSettings::default();
        let llm = LlmConfig {
            settings: LlmSettings {
                model_id: raw.llm.model_id.unwrap_or(defaults.model_id),
                temperature: raw.llm.temperature.unwrap_or(defaults.temperature),
                max_attempts: raw.llm.max_attempts.unwrap_or(defaults.max_attempts),
            },
            endpoint: raw.llm.endpoint,
            token_env: raw.llm.token_env.unwrap_or_else(|| DEFAULT_TOKEN_ENV.into()),
            fixture: raw.llm.fixture.map(|p| resolve(base, p)),
            max_in_flight: raw.llm.max_in_flight.unwrap_or(4).max(1),
        };

        let mut ces = BTreeMap::new();
        for (key, path) in raw.ces {
            ces.insert(code(&key)?, resolve(base, path));
        }

        let mut prompts = PromptBook::default().with_methods(&methods);
        for (key, phrase) in raw.prompt {
            prompts.set_instruction(code(&key)?, phrase);
        }

        Ok(Config { shares, methods, noise, confusion, llm, ces, prompts })
    }

    /// True when some error type with a non-zero share needs the model.
    pub fn needs_llm(&self) -> bool {
        self.methods
            .iter()
            .any(|(e, m)| matches!(m, Method::ZeroShotLLM | Method::TwoShotLLM) && self.shares.get(*e) > 0.0)
    }
}
